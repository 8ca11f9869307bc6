//! Versioned binary weight checkpoints: a shape manifest followed by
//! layer-ordered little-endian f64 blobs. Save/load round trips are
//! bit-exact; loading validates names and shapes against the model.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{NnError, Result};
use crate::model::Model;

const MAGIC: &[u8; 4] = b"FLNN";
const VERSION: u32 = 1;

pub fn save<P: AsRef<Path>>(model: &Model, path: P) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(MAGIC)?;
    f.write_all(&VERSION.to_le_bytes())?;
    let metas: Vec<(String, usize, usize)> = model
        .layers
        .iter()
        .enumerate()
        .flat_map(|(i, l)| {
            l.param_meta().into_iter().map(move |(n, r, c)| (format!("layer{i}.{n}"), r, c))
        })
        .collect();
    f.write_all(&(metas.len() as u32).to_le_bytes())?;
    for (name, rows, cols) in &metas {
        let bytes = name.as_bytes();
        f.write_all(&(bytes.len() as u32).to_le_bytes())?;
        f.write_all(bytes)?;
        f.write_all(&(*rows as u64).to_le_bytes())?;
        f.write_all(&(*cols as u64).to_le_bytes())?;
    }
    for layer in &model.layers {
        for p in layer.params() {
            for v in p {
                f.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn load<P: AsRef<Path>>(model: &mut Model, path: P) -> Result<()> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    f.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(NnError::BadCheckpoint("wrong magic".into()));
    }
    let mut b4 = [0u8; 4];
    f.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != VERSION {
        return Err(NnError::BadCheckpoint(format!("unsupported version {version}")));
    }
    f.read_exact(&mut b4)?;
    let n_tensors = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    let mut metas = Vec::with_capacity(n_tensors);
    for _ in 0..n_tensors {
        f.read_exact(&mut b4)?;
        let len = u32::from_le_bytes(b4) as usize;
        let mut name = vec![0u8; len];
        f.read_exact(&mut name)?;
        let name = String::from_utf8(name)
            .map_err(|_| NnError::BadCheckpoint("non-utf8 tensor name".into()))?;
        f.read_exact(&mut b8)?;
        let rows = u64::from_le_bytes(b8) as usize;
        f.read_exact(&mut b8)?;
        let cols = u64::from_le_bytes(b8) as usize;
        metas.push((name, rows, cols));
    }
    let expected: Vec<(String, usize, usize)> = model
        .layers
        .iter()
        .enumerate()
        .flat_map(|(i, l)| {
            l.param_meta().into_iter().map(move |(n, r, c)| (format!("layer{i}.{n}"), r, c))
        })
        .collect();
    if metas != expected {
        return Err(NnError::BadCheckpoint(format!(
            "architecture mismatch: file has {} tensors, model expects {}",
            metas.len(),
            expected.len()
        )));
    }
    for layer in &mut model.layers {
        for p in layer.params_mut() {
            for v in p.iter_mut() {
                f.read_exact(&mut b8)?;
                *v = f64::from_le_bytes(b8);
            }
        }
    }
    Ok(())
}
