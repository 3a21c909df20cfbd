//! Model persistence: a small self-describing binary format.
//!
//! Layout: 8-byte magic, u32 format version, u32 d_in / d_hidden / d_out,
//! then the six weight matrices as row-major little-endian f64 — full binary
//! precision, so load(save(m)) reproduces m bit for bit.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::ingest::write_atomic;
use crate::preprocess::{INPUT_WIDTH, TARGET_HOURS};

use super::DenseMlpModel;

const MAGIC: &[u8; 8] = b"CCMLPMDL";
const FORMAT_VERSION: u32 = 1;

pub fn save_model(model: &DenseMlpModel, path: impl AsRef<Path>) -> Result<()> {
    let (d_in, d_hidden, d_out) = model.dims();
    let n_weights: usize = model.matrices().iter().map(|m| m.len()).sum();
    let mut buf = Vec::with_capacity(24 + 8 * n_weights);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(d_in as u32).to_le_bytes());
    buf.extend_from_slice(&(d_hidden as u32).to_le_bytes());
    buf.extend_from_slice(&(d_out as u32).to_le_bytes());
    for m in model.matrices() {
        for v in m.as_slice().expect("standard layout") {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    write_atomic(path.as_ref(), &buf)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<DenseMlpModel> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let err = |message: String| Error::ModelFile {
        path: path.to_path_buf(),
        message,
    };

    if bytes.len() < 24 {
        return Err(err(format!("file too short ({} bytes)", bytes.len())));
    }
    if &bytes[..8] != MAGIC {
        return Err(err("bad magic; not a model file".into()));
    }
    let u32_at = |offset: usize| u32::from_le_bytes(bytes[offset..offset + 4].try_into().unwrap());
    let version = u32_at(8);
    if version != FORMAT_VERSION {
        return Err(err(format!(
            "unsupported format version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let d_in = u32_at(12) as usize;
    let d_hidden = u32_at(16) as usize;
    let d_out = u32_at(20) as usize;
    if d_in != INPUT_WIDTH || d_out != TARGET_HOURS {
        return Err(err(format!(
            "dimensions {d_in}x{d_hidden}x{d_out} do not match the feature layout \
             ({INPUT_WIDTH} inputs, {TARGET_HOURS} outputs)"
        )));
    }
    if d_hidden == 0 {
        return Err(err("zero hidden width".into()));
    }

    let shapes = [
        (d_in, d_hidden),
        (d_in, d_hidden),
        (d_hidden, d_hidden),
        (d_in, d_out),
        (d_hidden, d_out),
        (d_hidden, d_out),
    ];
    let n_weights: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let expected_len = 24 + 8 * n_weights;
    if bytes.len() != expected_len {
        return Err(err(format!(
            "truncated or oversized payload: {} bytes, expected {expected_len}",
            bytes.len()
        )));
    }

    let mut offset = 24;
    let mut mats = Vec::with_capacity(6);
    for (rows, cols) in shapes {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(f64::from_le_bytes(
                bytes[offset..offset + 8].try_into().unwrap(),
            ));
            offset += 8;
        }
        mats.push(Array2::from_shape_vec((rows, cols), data).expect("shape matches data"));
    }
    let mut it = mats.into_iter();
    DenseMlpModel::from_weights(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
    .map_err(|e| err(e.to_string()))
}
