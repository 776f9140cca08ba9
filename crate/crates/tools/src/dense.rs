//! Raw dump of dense matrices: row-major `[re, im]` pairs of little-endian
//! `f64`, no header.

use std::path::Path;

use scarmps_core::{CMatrix, Complex64};

use crate::error::{Result, ToolError};

pub fn encode(m: &CMatrix) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(m.len() * 16);
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    bytes
}

pub fn decode(bytes: &[u8], dim: usize) -> Option<CMatrix> {
    if bytes.len() != dim * dim * 16 {
        return None;
    }
    let value = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    Some(CMatrix::from_fn(dim, dim, |r, c| {
        let k = 2 * (r * dim + c);
        Complex64::new(value(k), value(k + 1))
    }))
}

pub fn write(path: &Path, m: &CMatrix) -> Result<()> {
    std::fs::write(path, encode(m)).map_err(|e| ToolError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = CMatrix::from_fn(3, 3, |r, c| Complex64::new(r as f64 - 0.5, c as f64 * 1e-3));
        let bytes = encode(&m);
        assert_eq!(bytes.len(), 9 * 16);
        assert_eq!(decode(&bytes, 3).unwrap(), m);
        assert!(decode(&bytes, 2).is_none());
        // row-major: the second pair is entry (0, 1)
        assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 1e-3);
    }
}
