import init, { membership_curve, noise_curve, circuit_stats } from "./pkg/hqfnn_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// Polylines on a [x0, x1] × [0, 1] frame.
function plot(canvas, series, x0, x1) {
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  g.clearRect(0, 0, w, h);
  g.strokeStyle = "#999";
  g.strokeRect(pad, 5, w - pad - 5, h - pad - 5);
  g.fillStyle = "#555";
  g.fillText("1", 10, 12);
  g.fillText("0", 10, h - pad);
  g.fillText(x0.toFixed(2), pad, h - 10);
  g.fillText(x1.toFixed(2), w - 40, h - 10);
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - pad - 5);
  const sy = (y) => h - pad - y * (h - pad - 5);
  for (const { xs, ys, color } of series) {
    g.strokeStyle = color;
    g.beginPath();
    ys.forEach((y, i) => (i ? g.lineTo(sx(xs[i]), sy(y)) : g.moveTo(sx(xs[i]), sy(y))));
    g.stroke();
  }
}

function guard(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

function runMembership() {
  const n = 241;
  const ys = membership_curve(num("mf-layers"), num("mf-seed"), n);
  const xs = Array.from(ys, (_, i) => -Math.PI + (2 * Math.PI * i) / (n - 1));
  plot($("mf-plot"), [{ xs, ys: Array.from(ys), color: "#1f5fbf" }], -Math.PI, Math.PI);
}

function runNoise() {
  const pmax = num("nz-pmax");
  const probs = Float64Array.from({ length: 21 }, (_, i) => (pmax * i) / 20);
  const fid = noise_curve($("nz-channel").value, num("nz-layers"), num("mf-seed"), probs);
  plot($("nz-plot"), [{ xs: Array.from(probs), ys: Array.from(fid), color: "#b3401f" }], 0, pmax);
  $("nz-out").textContent = `F(P=${pmax}) = ${fid[fid.length - 1].toFixed(4)}`;
}

function runStats() {
  const bins = num("cs-bins");
  const s = circuit_stats(num("cs-layers"), num("cs-qubits"), bins, num("mf-seed"));
  const emp = Array.from(s.slice(2, 2 + bins));
  const haar = Array.from(s.slice(2 + bins));
  const top = Math.max(...emp, ...haar);
  const xs = emp.map((_, i) => (i + 0.5) / bins);
  plot(
    $("cs-plot"),
    [
      { xs, ys: emp.map((v) => v / top), color: "#1f5fbf" },
      { xs, ys: haar.map((v) => v / top), color: "#888" },
    ],
    0,
    1,
  );
  $("cs-out").textContent = `KL to Haar ${s[0].toFixed(4)}   mean Meyer-Wallach ${s[1].toFixed(4)}   (blue: sampled fidelities, grey: Haar)`;
}

await init();
$("mf-run").onclick = guard(runMembership);
$("nz-run").onclick = guard(runNoise);
$("cs-run").onclick = guard(runStats);
guard(runMembership)();
