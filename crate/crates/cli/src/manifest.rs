//! Manifest ingestion: a single TOML document declaring the chart
//! dimension, the frame's coefficient expressions, and the optional
//! coefficient matrix, CR signature, base points and grid settings.

use heiscalc_core::expr::{parse, Expr};
use heiscalc_core::geometry::HFrame;
use heiscalc_core::hypocheck::CRSignature;
use heiscalc_core::scalar::Scalar;
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest syntax: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("manifest: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] heiscalc_core::geometry::GeomError),
    #[error(transparent)]
    Expr(#[from] heiscalc_core::expr::ExprError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

#[derive(Deserialize)]
struct RawManifest {
    dim: usize,
    mode: Option<String>,
    frame: RawFrame,
    mu: Option<RawMu>,
    cr: Option<RawCr>,
    #[serde(default)]
    points: Vec<Vec<toml::Value>>,
    grid: Option<RawGrid>,
    domain: Option<RawDomain>,
    #[serde(default)]
    sample_points: Vec<Vec<toml::Value>>,
}

#[derive(Deserialize)]
struct RawFrame {
    fields: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct RawMu {
    rows: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct RawCr {
    n: usize,
    r: usize,
    kappa: usize,
}

#[derive(Deserialize)]
struct RawGrid {
    size: Option<usize>,
    extent: Option<f64>,
}

#[derive(Deserialize)]
struct RawDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

pub struct Manifest {
    pub dim: usize,
    pub mode: Mode,
    pub frame: HFrame,
    pub mu_rows: Option<Vec<Vec<Expr>>>,
    pub cr: Option<CRSignature>,
    pub points: Vec<Vec<Scalar>>,
    pub grid_size: usize,
    pub grid_extent: f64,
    pub domain: Option<(Vec<f64>, Vec<f64>)>,
    /// SHA-256 of the canonicalized document (CRLF folded to LF).
    pub digest: String,
}

pub const DEFAULT_GRID_SIZE: usize = 64;
pub const DEFAULT_GRID_EXTENT: f64 = 12.0;

impl Manifest {
    pub fn load(path: &std::path::Path) -> Result<Manifest, ManifestError> {
        let content = std::fs::read_to_string(path)?;
        Manifest::from_str(&content)
    }

    pub fn from_str(content: &str) -> Result<Manifest, ManifestError> {
        let canonical = content.replace("\r\n", "\n");
        let digest = hex(&Sha256::digest(canonical.as_bytes()));
        let raw: RawManifest = toml::from_str(&canonical)?;
        if raw.dim < 2 {
            return Err(ManifestError::Invalid(
                "dim must be at least 2 (one transverse and one horizontal field)".into(),
            ));
        }
        let mode = match raw.mode.as_deref() {
            None | Some("rational") => Mode::Rational,
            Some("float") => Mode::Float,
            Some(other) => {
                return Err(ManifestError::Invalid(format!(
                    "mode must be `rational` or `float`, got `{other}`"
                )))
            }
        };
        if raw.frame.fields.len() != raw.dim
            || raw.frame.fields.iter().any(|row| row.len() != raw.dim)
        {
            return Err(ManifestError::Invalid(format!(
                "frame needs {dim} rows of {dim} coefficient expressions",
                dim = raw.dim
            )));
        }
        let sample_points = raw
            .sample_points
            .iter()
            .map(|p| point_from_toml(p, raw.dim, mode))
            .collect::<Result<Vec<_>, _>>()?;
        let frame = HFrame::from_sources(raw.dim, &raw.frame.fields, sample_points)?;

        let mu_rows = match raw.mu {
            None => None,
            Some(m) => {
                let r = m.rows.len();
                if m.rows.iter().any(|row| row.len() != r) {
                    return Err(ManifestError::Invalid("mu matrix must be square".into()));
                }
                Some(
                    m.rows
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|src| parse(src, raw.dim))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
        };
        let cr = match raw.cr {
            None => None,
            Some(c) => Some(
                CRSignature::new(c.n, c.r, c.kappa)
                    .map_err(|e| ManifestError::Invalid(e.to_string()))?,
            ),
        };
        let points = if raw.points.is_empty() {
            vec![vec![Scalar::zero(); raw.dim]]
        } else {
            raw.points
                .iter()
                .map(|p| point_from_toml(p, raw.dim, mode))
                .collect::<Result<Vec<_>, _>>()?
        };
        let (grid_size, grid_extent) = match raw.grid {
            None => (DEFAULT_GRID_SIZE, DEFAULT_GRID_EXTENT),
            Some(g) => (
                g.size.unwrap_or(DEFAULT_GRID_SIZE),
                g.extent.unwrap_or(DEFAULT_GRID_EXTENT),
            ),
        };
        let domain = match raw.domain {
            None => None,
            Some(d) => {
                if d.lo.len() != raw.dim || d.hi.len() != raw.dim {
                    return Err(ManifestError::Invalid(
                        "domain bounds must have one entry per coordinate".into(),
                    ));
                }
                Some((d.lo, d.hi))
            }
        };
        Ok(Manifest {
            dim: raw.dim,
            mode,
            frame,
            mu_rows,
            cr,
            points,
            grid_size,
            grid_extent,
            domain,
            digest,
        })
    }

    /// Is the point inside the declared chart domain (if any)?
    pub fn in_domain(&self, point: &[Scalar]) -> Option<bool> {
        self.domain.as_ref().map(|(lo, hi)| {
            point
                .iter()
                .enumerate()
                .all(|(i, p)| p.to_f64() >= lo[i] && p.to_f64() <= hi[i])
        })
    }
}

fn point_from_toml(
    entries: &[toml::Value],
    dim: usize,
    mode: Mode,
) -> Result<Vec<Scalar>, ManifestError> {
    if entries.len() != dim {
        return Err(ManifestError::Invalid(format!(
            "point needs {dim} coordinates, got {}",
            entries.len()
        )));
    }
    entries
        .iter()
        .map(|v| scalar_from_toml(v, mode))
        .collect()
}

fn scalar_from_toml(v: &toml::Value, mode: Mode) -> Result<Scalar, ManifestError> {
    let exact = match v {
        toml::Value::Integer(n) => Scalar::from_int(*n),
        toml::Value::Float(x) => Scalar::from_f64(*x),
        toml::Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((num, den)) => {
                    let n: i64 = num.trim().parse().map_err(|_| {
                        ManifestError::Invalid(format!("bad rational `{s}`"))
                    })?;
                    let d: i64 = den.trim().parse().map_err(|_| {
                        ManifestError::Invalid(format!("bad rational `{s}`"))
                    })?;
                    if d == 0 {
                        return Err(ManifestError::Invalid(format!("bad rational `{s}`")));
                    }
                    Scalar::ratio(n, d)
                }
                None => s
                    .parse::<i64>()
                    .map(Scalar::from_int)
                    .or_else(|_| s.parse::<f64>().map(Scalar::from_f64))
                    .map_err(|_| ManifestError::Invalid(format!("bad number `{s}`")))?,
            }
        }
        other => {
            return Err(ManifestError::Invalid(format!(
                "unsupported coordinate value `{other}`"
            )))
        }
    };
    Ok(match mode {
        Mode::Rational => exact,
        Mode::Float => Scalar::from_f64(exact.to_f64()),
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
