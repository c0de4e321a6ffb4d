//! IDX container parsing. Files may be gzip-compressed; compression is
//! detected from the first two bytes.

use std::fs;
use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use super::Dataset;
use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;
pub const MNIST_SIDE: usize = 28;

fn read_file(path: &Path) -> Result<Vec<u8>> {
    let raw = fs::read(path)?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(&raw[..])
            .read_to_end(&mut out)
            .map_err(|e| Error::Format(format!("{}: bad gzip stream: {e}", path.display())))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn be_u32(bytes: &[u8], at: usize, what: &str) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Format(format!("{what}: truncated header")))
}

/// Parses an IDX buffer with the given magic, returning the dimension list
/// and the payload. The payload length must match the dimensions exactly.
pub fn parse_idx<'a>(bytes: &'a [u8], magic: u32, what: &str) -> Result<(Vec<usize>, &'a [u8])> {
    let got = be_u32(bytes, 0, what)?;
    if got != magic {
        return Err(Error::Format(format!("{what}: magic {got:#010x}, expected {magic:#010x}")));
    }
    let ndims = (magic & 0xff) as usize;
    let dims = (0..ndims)
        .map(|i| be_u32(bytes, 4 + 4 * i, what).map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let start = 4 + 4 * ndims;
    let len: usize = dims.iter().product();
    let payload = &bytes[start.min(bytes.len())..];
    if payload.len() != len {
        return Err(Error::Format(format!("{what}: header promises {len} bytes of data, found {}", payload.len())));
    }
    Ok((dims, payload))
}

/// Loads an image/label IDX pair, scales pixels to `[0, 1]` and
/// standardises with the statistics of the loaded images.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<Dataset> {
    let img_bytes = read_file(images_path)?;
    let lbl_bytes = read_file(labels_path)?;
    let (dims, pixels) = parse_idx(&img_bytes, IMAGE_MAGIC, "image file")?;
    if dims[1] != MNIST_SIDE || dims[2] != MNIST_SIDE {
        return Err(Error::Format(format!(
            "image file: images are {}×{}, expected {MNIST_SIDE}×{MNIST_SIDE}",
            dims[1], dims[2]
        )));
    }
    let (ldims, labels) = parse_idx(&lbl_bytes, LABEL_MAGIC, "label file")?;
    if ldims[0] != dims[0] {
        return Err(Error::Consistency(format!("{} images but {} labels", dims[0], ldims[0])));
    }
    let name = images_path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let scaled = pixels.iter().map(|&p| f64::from(p) / 255.0).collect();
    Dataset::from_scaled(name, MNIST_SIDE, scaled, labels.iter().map(|&l| l as usize).collect())
}
