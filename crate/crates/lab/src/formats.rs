//! On-disk formats: polynomial JSON, the `RLGF` grid dump, and number
//! formatting shared by the CSV emitters.
//!
//! Polynomial JSON is `{"dim": d, "terms": [{"alpha": [..], "re": x, "im": y}]}`
//! with terms in lexicographic order of `alpha`. An `RLGF` file is a 16-byte
//! header (`b"RLGF"`, `u32` dim, `u32` N, four reserved zero bytes; integers
//! little endian) followed by `N^dim` interleaved little-endian `f64` pairs
//! `(re, im)` in row-major order.

use std::io::{Read, Write};

use riesz_core::{Complex64, GridFunction, GridShift, TrigPoly};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const RLGF_MAGIC: &[u8; 4] = b"RLGF";
const MAX_DIM: u32 = 3;
const MAX_SAMPLES: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

impl From<&TrigPoly> for PolyJson {
    fn from(p: &TrigPoly) -> Self {
        let terms = p
            .terms()
            .map(|(alpha, c)| TermJson {
                alpha: alpha.entries().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect();
        Self {
            dim: p.dim(),
            terms,
        }
    }
}

impl TryFrom<&PolyJson> for TrigPoly {
    type Error = LabError;

    fn try_from(j: &PolyJson) -> Result<Self> {
        let mut p = TrigPoly::zero(j.dim)?;
        for t in &j.terms {
            if t.alpha.len() != j.dim {
                return Err(LabError::invalid(format!(
                    "term {:?} has {} indices, expected {}",
                    t.alpha,
                    t.alpha.len(),
                    j.dim
                )));
            }
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(LabError::invalid("coefficients must be finite"));
            }
            p.add_term(&t.alpha, Complex64::new(t.re, t.im))?;
        }
        Ok(p)
    }
}

pub fn poly_to_json(p: &TrigPoly) -> String {
    serde_json::to_string_pretty(&PolyJson::from(p)).expect("plain data serializes")
}

pub fn poly_from_json(s: &str) -> Result<TrigPoly> {
    let j: PolyJson = serde_json::from_str(s)?;
    TrigPoly::try_from(&j)
}

/// Writes a lattice grid. Half-cell grids have no slot for the shift in the
/// header and are refused.
pub fn write_grid<W: Write>(g: &GridFunction, mut w: W) -> Result<()> {
    if g.shift() != GridShift::Lattice {
        return Err(LabError::invalid("RLGF stores lattice grids only"));
    }
    let mut buf = Vec::with_capacity(16 + 16 * g.len());
    buf.extend_from_slice(RLGF_MAGIC);
    buf.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.n_per_axis() as u32).to_le_bytes());
    buf.extend_from_slice(&[0; 4]);
    for z in g.samples() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_grid<R: Read>(mut r: R) -> Result<GridFunction> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| LabError::invalid("RLGF header truncated"))?;
    if &header[..4] != RLGF_MAGIC {
        return Err(LabError::invalid("not an RLGF file"));
    }
    let dim = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
    let n = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes"));
    if header[12..] != [0; 4] {
        return Err(LabError::invalid("RLGF reserved header bytes must be zero"));
    }
    if dim == 0 || dim > MAX_DIM {
        return Err(LabError::invalid(format!(
            "RLGF dimension {dim} outside 1..={MAX_DIM}"
        )));
    }
    let count = (n as u64).pow(dim);
    if count > MAX_SAMPLES {
        return Err(LabError::invalid(format!("RLGF grid {n}^{dim} too large")));
    }
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() as u64 != 16 * count {
        return Err(LabError::invalid(format!(
            "RLGF body has {} bytes, expected {}",
            body.len(),
            16 * count
        )));
    }
    let samples = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok(GridFunction::new(
        dim as usize,
        n as usize,
        GridShift::Lattice,
        samples,
    )?)
}

/// True if the bytes start with the `RLGF` magic.
pub fn is_rlgf(bytes: &[u8]) -> bool {
    bytes.len() >= 4 && &bytes[..4] == RLGF_MAGIC
}

/// Fixed-precision rendering used by every CSV emitter; infinities print as
/// `inf` and `-inf`.
pub fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        let s = format!("{x:.12}");
        // values that round to zero print without a sign
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
            _ => s,
        }
    }
}

/// Parses an exponent: a number, `inf`/`infinity`, or `gm` for `p = 0`.
pub fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        "gm" | "geometric" => Ok(0.0),
        t => t
            .parse::<f64>()
            .map_err(|e| format!("invalid exponent {s:?}: {e}"))
            .and_then(|v| {
                if v.is_nan() || v < 0.0 {
                    Err(format!("exponent must be nonnegative, got {s}"))
                } else {
                    Ok(v)
                }
            }),
    }
}

/// Serde adapter writing infinite exponents as the string `"inf"`.
pub mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => super::parse_exponent(&t).map_err(de::Error::custom),
        }
    }
}
