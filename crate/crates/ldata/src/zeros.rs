//! Finite windows of zero/pole data with multiplicities.
//!
//! Entries live in the spectral coordinate z (s = 1/2 + iz): zeros of the
//! completed function on the critical line have real z, the poles of the
//! completed zeta function sit at z = +-i/2 with multiplicity -1.

use num_complex::Complex64;

use crate::kahan;

/// Matching tolerance when merging or conjugate-pairing entries.
pub const Z_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroEntry {
    pub z: Complex64,
    pub mult: f64,
}

/// A finite window of (z, m(z)) pairs, canonically ordered.
#[derive(Debug, Clone, Default)]
pub struct ZeroMultiset {
    entries: Vec<ZeroEntry>,
    /// Guaranteed coverage: every zero with |Re z| <= window is listed.
    window: f64,
    /// Whether +-z symmetrization was applied at load time.
    mirrored: bool,
}

/// Deterministic entry order: ascending |Re z|, negative sign first on
/// ties, then ascending Im.
fn canonical_cmp(a: &ZeroEntry, b: &ZeroEntry) -> std::cmp::Ordering {
    let ka = (a.z.re.abs(), a.z.re, a.z.im);
    let kb = (b.z.re.abs(), b.z.re, b.z.im);
    ka.partial_cmp(&kb).unwrap()
}

impl ZeroMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut entries: Vec<ZeroEntry>, window: f64, mirrored: bool) -> Self {
        entries.retain(|e| e.mult != 0.0);
        entries.sort_by(canonical_cmp);
        // merge duplicates
        let mut merged: Vec<ZeroEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            if let Some(last) = merged.last_mut() {
                if (last.z - e.z).norm() <= Z_MERGE_TOL {
                    last.mult += e.mult;
                    continue;
                }
            }
            merged.push(e);
        }
        merged.retain(|e| e.mult.abs() > 1e-15);
        Self {
            entries: merged,
            window,
            mirrored,
        }
    }

    pub fn entries(&self) -> &[ZeroEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// Adds the reflection z -> -z of every entry that does not already
    /// have a mirror partner (used for one-sided zero tables of self-dual
    /// data, whose zeros come in +-gamma pairs).
    pub fn mirror(mut self) -> Self {
        let mut extra = Vec::new();
        for e in &self.entries {
            if e.z.norm() <= Z_MERGE_TOL {
                continue;
            }
            let neg = -e.z;
            let found = self
                .entries
                .iter()
                .any(|o| (o.z - neg).norm() <= Z_MERGE_TOL);
            if !found {
                extra.push(ZeroEntry { z: neg, mult: e.mult });
            }
        }
        self.entries.extend(extra);
        let win = self.window;
        Self::new(self.entries, win, true)
    }

    /// Translate every entry: z -> z + dz (shifting L(s) to L(s+it) moves
    /// zeros by dz = -t).
    pub fn translate(&self, dz: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| ZeroEntry {
                z: e.z + dz,
                mult: e.mult,
            })
            .collect();
        Self::new(entries, self.window - dz.abs(), self.mirrored)
    }

    /// Reflect z -> -conj(z) (the zero set of the conjugate-dual datum).
    pub fn reflect(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| ZeroEntry {
                z: -e.z.conj(),
                mult: e.mult,
            })
            .collect();
        Self::new(entries, self.window, self.mirrored)
    }

    pub fn scale_mult(&self, factor: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| ZeroEntry {
                z: e.z,
                mult: e.mult * factor,
            })
            .collect();
        Self::new(entries, self.window, self.mirrored)
    }

    /// Merge two multisets with multiplicity weights, restricted to the
    /// intersection window.
    pub fn merge_weighted(&self, other: &Self, w_self: f64, w_other: f64) -> Self {
        let window = if self.is_empty() && self.window == 0.0 {
            other.window
        } else if other.is_empty() && other.window == 0.0 {
            self.window
        } else {
            self.window.min(other.window)
        };
        let mut entries: Vec<ZeroEntry> = Vec::new();
        for e in &self.entries {
            if e.z.re.abs() <= window + Z_MERGE_TOL {
                entries.push(ZeroEntry {
                    z: e.z,
                    mult: e.mult * w_self,
                });
            }
        }
        for e in &other.entries {
            if e.z.re.abs() <= window + Z_MERGE_TOL {
                entries.push(ZeroEntry {
                    z: e.z,
                    mult: e.mult * w_other,
                });
            }
        }
        Self::new(entries, window, self.mirrored && other.mirrored)
    }

    /// Sum of |m(z)| over |Re z| <= t.
    pub fn count_to(&self, t: f64) -> f64 {
        kahan::sum(
            self.entries
                .iter()
                .filter(|e| e.z.re.abs() <= t)
                .map(|e| e.mult.abs()),
        )
    }

    /// Entries whose multiplicity is not within `tol` of a nonzero integer.
    pub fn non_integer_entries(&self, tol: f64) -> Vec<ZeroEntry> {
        self.entries
            .iter()
            .filter(|e| (e.mult - e.mult.round()).abs() > tol)
            .copied()
            .collect()
    }

    /// Worst violation of the conjugate symmetry m(conj z) = m(z); zero for
    /// symmetric data. Real entries pair with themselves.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0f64;
        for e in &self.entries {
            if e.z.im.abs() <= Z_MERGE_TOL {
                continue;
            }
            let want = e.z.conj();
            let partner = self
                .entries
                .iter()
                .find(|o| (o.z - want).norm() <= Z_MERGE_TOL);
            match partner {
                Some(p) => worst = worst.max((p.mult - e.mult).abs()),
                None => worst = worst.max(e.mult.abs()),
            }
        }
        worst
    }

    /// Largest |Im z| among entries.
    pub fn strip_height(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.z.im.abs())
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of log N(T) against log T over a dyadic ladder,
    /// a heuristic for the polynomial-growth part of axiom A3.
    pub fn counting_slope(&self) -> Option<f64> {
        if self.window <= 1.0 || self.entries.len() < 8 {
            return None;
        }
        let mut pts = Vec::new();
        let mut t = self.window;
        while t > 1.0 {
            let n = self.count_to(t);
            if n > 0.0 {
                pts.push((t.ln(), n.ln()));
            }
            t *= 0.5;
        }
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() < 1e-12 {
            return None;
        }
        Some((n * sxy - sx * sy) / denom)
    }
}
