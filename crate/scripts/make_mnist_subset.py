"""Write the 5,000-image MNIST sample bundled with mlxtend as gzip'd IDX files.

    pip download mlxtend --no-deps -d /tmp/mlx
    python3 scripts/make_mnist_subset.py /tmp/mlx/mlxtend-*.whl data/mnist-5k

Produces a 4,000-image "train" split and a disjoint 1,000-image "t10k" split.
"""
import gzip
import io
import struct
import sys
import zipfile

import numpy as np


def write_idx(path, array, magic):
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(struct.pack(">I", magic))
        for dim in array.shape:
            f.write(struct.pack(">I", dim))
        f.write(array.astype(np.uint8).tobytes())


def main(wheel, out_dir):
    raw = zipfile.ZipFile(wheel).read("mlxtend/data/data/mnist_5k.csv.gz")
    table = np.loadtxt(io.StringIO(gzip.decompress(raw).decode()), delimiter=",")
    images = table[:, :-1].reshape(-1, 28, 28)
    labels = table[:, -1]
    order = np.random.default_rng(20240617).permutation(len(labels))
    images, labels = images[order], labels[order]
    for name, sl in (("train", slice(0, 4000)), ("t10k", slice(4000, 5000))):
        write_idx(f"{out_dir}/{name}-images-idx3-ubyte.gz", images[sl], 2051)
        write_idx(f"{out_dir}/{name}-labels-idx1-ubyte.gz", labels[sl], 2049)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
