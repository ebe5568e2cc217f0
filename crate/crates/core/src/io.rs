//! JSON wire helpers. Complex numbers travel as `[re, im]` pairs and matrices
//! as arrays of rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

pub type WireMatrix = Vec<Vec<[f64; 2]>>;

pub fn c_to_wire(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn c_from_wire(a: [f64; 2]) -> C64 {
    C64::new(a[0], a[1])
}

pub fn mat_to_wire(m: &CMatrix) -> WireMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| c_to_wire(z)).collect())
        .collect()
}

pub fn mat_from_wire(w: &WireMatrix) -> Result<CMatrix> {
    let rows: Vec<Vec<C64>> = w
        .iter()
        .map(|r| r.iter().map(|&a| c_from_wire(a)).collect())
        .collect();
    CMatrix::from_rows(&rows)
}

/// Reads JSON either inline (text starting with `{` or `[`) or from a file path.
pub fn read_json_arg<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let (text, origin) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        (arg.to_string(), "inline JSON".to_string())
    } else {
        (std::fs::read_to_string(arg)?, arg.to_string())
    };
    parse_json(&text, &origin)
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let fail = |path: String, e: serde_json::Error| Error::Input {
        origin: origin.to_string(),
        path,
        message: e.to_string(),
    };
    let v = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        fail(path, e.into_inner())
    })?;
    de.end().map_err(|e| fail(".".into(), e))?;
    Ok(v)
}

pub fn to_json_pretty<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(Error::from)
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ComplexList(pub Vec<[f64; 2]>);

impl ComplexList {
    pub fn to_complex(&self) -> Vec<C64> {
        self.0.iter().map(|&a| c_from_wire(a)).collect()
    }

    pub fn from_complex(v: &[C64]) -> Self {
        ComplexList(v.iter().map(|&z| c_to_wire(z)).collect())
    }
}
