//! Zero-table text format: one entry per line, either a bare height
//! "gamma" (multiplicity 1 at z = gamma) or a full "re im mult" triple;
//! '#' starts a comment. Two comment directives survive round trips:
//! `# window: <W>` and `# mirrored: <bool>`.
//!
//! Mirroring defaults to on because public zero tables list positive
//! heights only; complex-character data must be supplied with both signs
//! listed and mirror turned off.

use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zeros::{ZeroEntry, ZeroMultiset};

#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Complete the set under z -> -z (and conjugates for off-line
    /// entries).
    pub mirror: bool,
    /// Multiplicity assigned to bare-height lines.
    pub default_mult: f64,
    /// Reject non-mirrored data that violates conjugate symmetry.
    pub strict: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            mirror: true,
            default_mult: 1.0,
            strict: false,
        }
    }
}

pub fn load(path: &Path, options: LoadOptions) -> Result<ZeroMultiset> {
    let file = std::fs::File::open(path)?;
    parse(std::io::BufReader::new(file), options)
}

pub fn parse<R: BufRead>(reader: R, options: LoadOptions) -> Result<ZeroMultiset> {
    let mut entries: Vec<ZeroEntry> = Vec::new();
    let mut window: Option<f64> = None;
    let mut file_mirrored = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(w) = comment.strip_prefix("window:") {
                window = Some(w.trim().parse().map_err(|_| Error::ParseError {
                    line: line_no,
                    msg: format!("bad window directive '{comment}'"),
                })?);
            } else if let Some(m) = comment.strip_prefix("mirrored:") {
                file_mirrored = m.trim() == "true";
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_f = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::ParseError {
                line: line_no,
                msg: format!("bad number '{s}'"),
            })
        };
        match fields.len() {
            1 => entries.push(ZeroEntry {
                z: Complex64::new(parse_f(fields[0])?, 0.0),
                mult: options.default_mult,
            }),
            3 => entries.push(ZeroEntry {
                z: Complex64::new(parse_f(fields[0])?, parse_f(fields[1])?),
                mult: parse_f(fields[2])?,
            }),
            n => {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: format!("expected 1 or 3 fields, found {n}"),
                })
            }
        }
    }
    let window = window.unwrap_or_else(|| {
        entries
            .iter()
            .map(|e| e.z.re.abs())
            .fold(0.0, f64::max)
    });
    let set = ZeroMultiset::new(entries, window, file_mirrored);
    if options.mirror {
        Ok(set.mirror())
    } else {
        if options.strict {
            let defect = set.symmetry_defect();
            if defect > 1e-9 {
                return Err(Error::SymmetryViolation(format!(
                    "worst multiplicity defect {defect:.3e}"
                )));
            }
        }
        Ok(set)
    }
}

pub fn save(path: &Path, zeros: &ZeroMultiset) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write(&mut out, zeros)
}

pub fn write<W: Write>(out: &mut W, zeros: &ZeroMultiset) -> Result<()> {
    writeln!(out, "# window: {:.17e}", zeros.window())?;
    writeln!(out, "# mirrored: {}", zeros.mirrored())?;
    for e in zeros.entries() {
        writeln!(out, "{:.17e} {:.17e} {:.17e}", e.z.re, e.z.im, e.mult)?;
    }
    Ok(())
}
