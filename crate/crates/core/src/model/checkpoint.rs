//! Binary checkpoint: `"HQFN"`, format version, the config fields, then
//! every tensor in slot order. All integers are little-endian `u32`, all
//! values little-endian `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{ModelConfig, ModelParams, Slot};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"HQFN";
pub const CHECKPOINT_VERSION: u32 = 1;

fn config_fields(c: &ModelConfig) -> [usize; 8] {
    [c.d, c.m, c.layers, c.qubits, c.head_split, c.hidden, c.n_classes, c.image_size]
}

pub fn write_checkpoint<W: Write>(mut w: W, params: &ModelParams) -> Result<()> {
    w.write_all(CHECKPOINT_MAGIC)?;
    w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    for field in config_fields(params.config()) {
        let v = u32::try_from(field).map_err(|_| Error::Format(format!("config value {field} exceeds u32")))?;
        w.write_all(&v.to_le_bytes())?;
    }
    for t in params.tensors() {
        for v in &t.values {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_exact<R: Read, const N: usize>(r: &mut R, what: &str) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("checkpoint truncated while reading {what}")),
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<ModelParams> {
    let magic: [u8; 4] = read_exact(&mut r, "magic")?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(Error::Format(format!("bad checkpoint magic {magic:?}")));
    }
    let version = u32::from_le_bytes(read_exact(&mut r, "version")?);
    if version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let mut f = [0usize; 8];
    for v in &mut f {
        *v = u32::from_le_bytes(read_exact(&mut r, "config")?) as usize;
    }
    let config = ModelConfig {
        d: f[0],
        m: f[1],
        layers: f[2],
        qubits: f[3],
        head_split: f[4],
        hidden: f[5],
        n_classes: f[6],
        image_size: f[7],
    };
    config.validate().map_err(|e| Error::Format(format!("checkpoint config invalid: {e}")))?;
    let mut values = Vec::with_capacity(Slot::COUNT);
    for slot in Slot::ALL {
        let len: usize = slot.shape(&config).iter().product();
        let mut t = Vec::with_capacity(len);
        for _ in 0..len {
            t.push(f64::from_le_bytes(read_exact(&mut r, slot.name())?));
        }
        values.push(t);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes after checkpoint tensors", rest.len())));
    }
    ModelParams::from_values(config, values).map_err(|e| Error::Format(format!("checkpoint tensors invalid: {e}")))
}

pub fn save_checkpoint(path: &Path, params: &ModelParams) -> Result<()> {
    write_checkpoint(BufWriter::new(File::create(path)?), params)
}

pub fn load_checkpoint(path: &Path) -> Result<ModelParams> {
    read_checkpoint(BufReader::new(File::open(path)?))
}
