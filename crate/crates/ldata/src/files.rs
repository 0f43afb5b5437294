//! JSON file formats for data and synthesized gamma factors.
//!
//! A datum file is a single JSON document:
//!
//! ```json
//! {
//!   "coefficients": [[re, im], ...],
//!   "kernel": {"terms": [{"lambda": l, "mu": [re, im], "weight": [n, d]}]}
//!              or {"table": [[x, re, im], ...]},
//!   "zeros": [[re, im, mult], ...]
//!            or {"file": "path", "mirror": true}
//!            or {"entries": [[re, im, mult], ...], "window": W,
//!                "mirrored": true},
//!   "meta": { ... }
//! }
//! ```
//!
//! Floats are decimal and round-trip exactly at binary64 (serde_json used
//! shortest-representation printing). The `weight` field is optional and
//! defaults to 1; it appears on kernels produced by rational scaling.

use std::path::Path;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::coeff::CoefficientSeq;
use crate::datum::LDatum;
use crate::error::{Error, Result};
use crate::gamma::{FitCoefficients, GammaRecord};
use crate::kernel::{Kernel, KernelTable, KernelTerm};
use crate::zero_io;
use crate::zeros::{ZeroEntry, ZeroMultiset};

#[derive(Debug, Serialize, Deserialize)]
pub struct DatumFile {
    pub coefficients: Vec<[f64; 2]>,
    pub kernel: KernelSection,
    pub zeros: ZerosSection,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub meta: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelSection {
    Terms { terms: Vec<KernelTermDto> },
    Table { table: Vec<[f64; 3]> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KernelTermDto {
    pub lambda: f64,
    pub mu: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<[i64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZerosSection {
    Inline(Vec<[f64; 3]>),
    File {
        file: String,
        #[serde(default = "default_true")]
        mirror: bool,
    },
    Full {
        entries: Vec<[f64; 3]>,
        window: f64,
        #[serde(default)]
        mirrored: bool,
    },
}

fn default_true() -> bool {
    true
}

impl DatumFile {
    pub fn from_datum(datum: &LDatum) -> Result<Self> {
        let kernel = match datum.kernel() {
            Kernel::Terms(terms) => KernelSection::Terms {
                terms: terms
                    .iter()
                    .map(|t| KernelTermDto {
                        lambda: t.lambda,
                        mu: [t.mu.re, t.mu.im],
                        weight: if t.weight == Rational64::new(1, 1) {
                            None
                        } else {
                            Some([*t.weight.numer(), *t.weight.denom()])
                        },
                    })
                    .collect(),
            },
            Kernel::Table(table) => KernelSection::Table {
                table: table
                    .points()
                    .map(|(x, k)| [x, k.re, k.im])
                    .collect(),
            },
        };
        let zeros = ZerosSection::Full {
            entries: datum
                .zeros()
                .entries()
                .iter()
                .map(|e| [e.z.re, e.z.im, e.mult])
                .collect(),
            window: datum.zeros().window(),
            mirrored: datum.zeros().mirrored(),
        };
        Ok(DatumFile {
            coefficients: datum.f().values().iter().map(|v| [v.re, v.im]).collect(),
            kernel,
            zeros,
            meta: serde_json::Map::new(),
        })
    }

    /// Rebuilds the datum; `base_dir` resolves relative zero-file paths.
    pub fn into_datum(self, base_dir: &Path) -> Result<LDatum> {
        let f = CoefficientSeq::new(
            self.coefficients
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        );
        let kernel = match self.kernel {
            KernelSection::Terms { terms } => Kernel::from_terms(
                terms
                    .into_iter()
                    .map(|t| {
                        let weight = match t.weight {
                            Some([n, d]) => {
                                if d == 0 {
                                    return Err(Error::InvalidFactor(
                                        "zero weight denominator".into(),
                                    ));
                                }
                                Rational64::new(n, d)
                            }
                            None => Rational64::new(1, 1),
                        };
                        Ok(KernelTerm {
                            lambda: t.lambda,
                            mu: Complex64::new(t.mu[0], t.mu[1]),
                            weight,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?,
            KernelSection::Table { table } => Kernel::Table(KernelTable::new(
                table
                    .into_iter()
                    .map(|[x, re, im]| (x, Complex64::new(re, im)))
                    .collect(),
            )?),
        };
        let zeros = match self.zeros {
            ZerosSection::Inline(entries) => {
                let entries: Vec<ZeroEntry> = entries
                    .into_iter()
                    .map(|[re, im, mult]| ZeroEntry {
                        z: Complex64::new(re, im),
                        mult,
                    })
                    .collect();
                let window = entries
                    .iter()
                    .map(|e| e.z.re.abs())
                    .fold(0.0, f64::max);
                ZeroMultiset::new(entries, window, false)
            }
            ZerosSection::File { file, mirror } => {
                let path = base_dir.join(file);
                zero_io::load(
                    &path,
                    zero_io::LoadOptions {
                        mirror,
                        ..Default::default()
                    },
                )?
            }
            ZerosSection::Full {
                entries,
                window,
                mirrored,
            } => ZeroMultiset::new(
                entries
                    .into_iter()
                    .map(|[re, im, mult]| ZeroEntry {
                        z: Complex64::new(re, im),
                        mult,
                    })
                    .collect(),
                window,
                mirrored,
            ),
        };
        LDatum::new(f, kernel, zeros)
    }
}

pub fn write_datum(path: &Path, datum: &LDatum) -> Result<()> {
    let file = DatumFile::from_datum(datum)?;
    let json = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn read_datum(path: &Path) -> Result<LDatum> {
    let text = std::fs::read_to_string(path)?;
    let file: DatumFile = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    file.into_datum(base)
}

/// Serialized gamma-factor synthesis result.
#[derive(Debug, Serialize, Deserialize)]
pub struct GammaFile {
    pub d: f64,
    pub mu: [f64; 2],
    pub c_const: f64,
    pub omega: [f64; 2],
    pub kprime0: [f64; 2],
    pub f1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FitDto {
    pub d_hat: f64,
    pub c_minus1_hat: f64,
    pub mu_hat: [f64; 2],
    pub c0_hat: [f64; 2],
}

impl GammaFile {
    pub fn from_record(rec: &GammaRecord, fit: Option<&FitCoefficients>) -> Self {
        GammaFile {
            d: rec.d,
            mu: [rec.mu.re, rec.mu.im],
            c_const: rec.c_const,
            omega: [rec.omega.re, rec.omega.im],
            kprime0: [rec.kprime0.re, rec.kprime0.im],
            f1: rec.f1,
            fit: fit.map(|f| FitDto {
                d_hat: f.d_hat,
                c_minus1_hat: f.c_minus1_hat,
                mu_hat: [f.mu_hat_re, f.mu_hat_im],
                c0_hat: [f.c0_hat_re, f.c0_hat_im],
            }),
        }
    }
}
