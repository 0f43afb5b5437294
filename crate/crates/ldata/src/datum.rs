//! The L-datum triple and its group algebra, plus the axiom validator.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::coeff::{self, CoefficientSeq};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelTerm};
use crate::zeros::ZeroMultiset;

/// Sampled A1 decay bound: |f(n)| (log n)^k must stay below this for
/// k = 1, 2, 3.
pub const A1_DECAY_BOUND: f64 = 50.0;
/// A1 partial-sum fit: slope of log sum|f|^2 vs log x must stay below this.
pub const A1_SLOPE_EPS: f64 = 0.75;
/// A3 fails when more than this many window entries have non-integer
/// multiplicity. The axiom allows finitely many; a finite window can only
/// report evidence, so the report says "window evidence".
pub const A3_NON_INTEGER_MAX: usize = 8;
/// A3 counting-fit warning threshold for the slope of log N(T) vs log T.
pub const A3_SLOPE_MAX: f64 = 3.0;
/// Multiplicity integrality tolerance.
pub const MULT_INT_TOL: f64 = 1e-9;

/// Window-evidence positivity state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    Positive,
    NonPositiveInWindow,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

/// One measured validator check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub measured: f64,
    pub detail: String,
}

/// Per-axiom report; never an error, never throws.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub positivity: Positivity,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count()
    }

    pub fn warnings(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Warn)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

/// An L-datum: coefficients, kernel and zero multiset, with cached degree,
/// conductor and positivity. Immutable after construction.
#[derive(Debug, Clone)]
pub struct LDatum {
    f: CoefficientSeq,
    kernel: Kernel,
    zeros: ZeroMultiset,
    degree: f64,
    conductor: f64,
    positivity: Positivity,
}

/// Analytic conductor Q_F = e^{-2 f(1)}.
pub fn analytic_conductor(f: &CoefficientSeq) -> f64 {
    (-2.0 * f.f1().re).exp()
}

fn positivity_of(zeros: &ZeroMultiset) -> Positivity {
    if zeros.is_empty() {
        return Positivity::Unknown;
    }
    let negatives = zeros.entries().iter().filter(|e| e.mult < 0.0).count();
    if negatives <= A3_NON_INTEGER_MAX {
        Positivity::Positive
    } else {
        Positivity::NonPositiveInWindow
    }
}

impl LDatum {
    pub fn new(f: CoefficientSeq, kernel: Kernel, zeros: ZeroMultiset) -> Result<Self> {
        let degree = kernel.degree()?;
        let conductor = analytic_conductor(&f);
        let positivity = positivity_of(&zeros);
        Ok(Self {
            f,
            kernel,
            zeros,
            degree,
            conductor,
            positivity,
        })
    }

    /// The identity element (0, 0, 0).
    pub fn zero() -> Self {
        Self::new(
            CoefficientSeq::new(Vec::new()),
            Kernel::empty(),
            ZeroMultiset::empty(),
        )
        .expect("zero datum")
    }

    pub fn f(&self) -> &CoefficientSeq {
        &self.f
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn zeros(&self) -> &ZeroMultiset {
        &self.zeros
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn conductor(&self) -> f64 {
        self.conductor
    }

    pub fn positivity(&self) -> Positivity {
        self.positivity
    }

    /// Dirichlet coefficients a(1..n) of L_F.
    pub fn coefficients(&self, n: usize) -> Result<Vec<Complex64>> {
        coeff::dirichlet_coefficients(&self.f, n)
    }

    /// Rational-weighted sum p*self + q*other, componentwise.
    pub fn combine(
        &self,
        other: &LDatum,
        p: Rational64,
        q: Rational64,
    ) -> Result<LDatum> {
        self.combine_with_mode(other, p, q, false)
    }

    pub fn combine_with_mode(
        &self,
        other: &LDatum,
        p: Rational64,
        q: Rational64,
        strict: bool,
    ) -> Result<LDatum> {
        let pf = rational_to_f64(p);
        let qf = rational_to_f64(q);
        if strict {
            let a = &self.zeros;
            let b = &other.zeros;
            let incompatible = !a.is_empty()
                && !b.is_empty()
                && (a.window().min(b.window()) <= 0.0);
            if incompatible {
                return Err(Error::IncompatibleWindows);
            }
        }
        let f = self.f.weighted_sum(&other.f, pf, qf);
        let kernel = combine_kernels(&self.kernel, &other.kernel, p, q)?;
        let zeros = self.zeros.merge_weighted(&other.zeros, pf, qf);
        LDatum::new(f, kernel, zeros)
    }

    /// Rational scaling p*self.
    pub fn scale(&self, p: Rational64) -> Result<LDatum> {
        self.combine(&LDatum::zero(), p, Rational64::new(0, 1))
    }

    /// Axiom validator; reports, never throws.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let mut push = |name: &str, status: CheckStatus, measured: f64, detail: String| {
            checks.push(Check {
                name: name.into(),
                status,
                measured,
                detail,
            });
        };

        // A1: f(1) real
        let f1_im = self.f.f1().im.abs();
        push(
            "a1.f1_real",
            if f1_im <= 1e-12 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            f1_im,
            "Im f(1)".into(),
        );
        // A1: sampled decay for k = 1..3
        for k in 1..=3u32 {
            let stat = self.f.decay_statistic(k);
            push(
                &format!("a1.decay_k{k}"),
                if stat <= A1_DECAY_BOUND {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                stat,
                format!("max |f(n)| log^{k} n on horizon"),
            );
        }
        // A1: |f|^2 partial-sum growth (heuristic fit)
        if let Some(slope) = self.f.square_sum_slope() {
            push(
                "a1.square_sum_fit",
                if slope <= A1_SLOPE_EPS {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Warn
                },
                slope,
                "dyadic log-log slope of sum |f(n)|^2 (heuristic)".into(),
            );
        }

        // A2: kernel limit exists and is real
        match (self.kernel.degree(), self.kernel.mu_parameter()) {
            (Ok(d), Ok(_mu)) => {
                push(
                    "a2.limit_real",
                    CheckStatus::Pass,
                    d,
                    "2 lim x K(x) (degree)".into(),
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                push("a2.limit_real", CheckStatus::Fail, f64::NAN, format!("{e}"));
            }
        }

        // A3: conjugate symmetry (Lemma-level invariant m(conj z) = m(z))
        let sym = self.zeros.symmetry_defect();
        push(
            "a3.conjugate_symmetry",
            if sym <= 1e-9 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            sym,
            "worst |m(z) - m(conj z)|".into(),
        );
        // A3: strip |Im z| <= 1/2
        let strip = self.zeros.strip_height();
        push(
            "a3.strip",
            if strip <= 0.5 + 1e-9 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            strip,
            "max |Im z|".into(),
        );
        // A3: integrality (window evidence)
        let non_int = self.zeros.non_integer_entries(MULT_INT_TOL).len();
        push(
            "a3.integrality",
            if non_int <= A3_NON_INTEGER_MAX {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            non_int as f64,
            format!(
                "window evidence: {} entries with non-integer multiplicity (fail above {})",
                non_int, A3_NON_INTEGER_MAX
            ),
        );
        // A3: polynomial counting fit (heuristic)
        if let Some(slope) = self.zeros.counting_slope() {
            push(
                "a3.counting_fit",
                if slope <= A3_SLOPE_MAX {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Warn
                },
                slope,
                "dyadic log-log slope of N(T) (heuristic)".into(),
            );
        }

        ValidationReport {
            checks,
            positivity: self.positivity,
        }
    }
}

pub(crate) fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn combine_kernels(a: &Kernel, b: &Kernel, p: Rational64, q: Rational64) -> Result<Kernel> {
    let zero = Rational64::new(0, 1);
    let mut terms: Vec<KernelTerm> = Vec::new();
    let mut add = |k: &Kernel, w: Rational64| -> Result<()> {
        if w == zero {
            return Ok(());
        }
        match k.terms() {
            Some(ts) => {
                for t in ts {
                    let mut t = t.clone();
                    t.weight *= w;
                    if t.weight != zero {
                        terms.push(t);
                    }
                }
                Ok(())
            }
            None => {
                if k.is_empty() {
                    Ok(())
                } else {
                    Err(Error::DomainError(
                        "sampled kernels cannot be combined".into(),
                    ))
                }
            }
        }
    };
    add(a, p)?;
    add(b, q)?;
    // cancel identical terms with opposite weights (F - F must be empty)
    let mut merged: Vec<KernelTerm> = Vec::new();
    for t in terms {
        if let Some(m) = merged
            .iter_mut()
            .find(|m| m.lambda == t.lambda && m.mu == t.mu)
        {
            m.weight += t.weight;
        } else {
            merged.push(t);
        }
    }
    merged.retain(|t| t.weight != zero);
    Kernel::from_terms(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::ZeroEntry;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn toy_datum() -> LDatum {
        let mut f = CoefficientSeq::zero(64);
        f.set(1, c(0.25, 0.0));
        f.set(2, c(0.49, 0.0));
        f.set(3, c(0.63, 0.0));
        let kernel =
            Kernel::from_terms(vec![KernelTerm::gamma_r(c(0.0, 0.0))]).unwrap();
        let zeros = ZeroMultiset::new(
            vec![
                ZeroEntry { z: c(14.13, 0.0), mult: 1.0 },
                ZeroEntry { z: c(-14.13, 0.0), mult: 1.0 },
            ],
            20.0,
            true,
        );
        LDatum::new(f, kernel, zeros).unwrap()
    }

    #[test]
    fn conductor_of_zero_f1_is_one() {
        let f = CoefficientSeq::zero(4);
        assert_eq!(analytic_conductor(&f), 1.0);
    }

    #[test]
    fn inverse_element_is_zero_datum() {
        let d = toy_datum();
        let z = d
            .combine(&d, Rational64::new(1, 1), Rational64::new(-1, 1))
            .unwrap();
        assert_eq!(z.degree(), 0.0);
        assert!(z.kernel().is_empty());
        assert!(z.zeros().is_empty());
        assert!(z.f().values().iter().all(|v| v.norm() == 0.0));
        assert_eq!(z.conductor(), 1.0);
    }

    #[test]
    fn degree_additivity_and_conductor_multiplicativity() {
        let d = toy_datum();
        let s = d
            .combine(&d, Rational64::new(1, 1), Rational64::new(1, 1))
            .unwrap();
        assert_eq!(s.degree(), 2.0 * d.degree());
        let rel = (s.conductor() - d.conductor() * d.conductor()).abs() / s.conductor();
        assert!(rel < 1e-12);
    }

    #[test]
    fn half_scaling_violates_integrality_with_enough_zeros() {
        let entries: Vec<ZeroEntry> = (1..=10)
            .flat_map(|k| {
                let g = k as f64;
                [
                    ZeroEntry { z: c(g, 0.0), mult: 1.0 },
                    ZeroEntry { z: c(-g, 0.0), mult: 1.0 },
                ]
            })
            .collect();
        let d = LDatum::new(
            CoefficientSeq::zero(8),
            Kernel::from_terms(vec![KernelTerm::gamma_r(c(0.0, 0.0))]).unwrap(),
            ZeroMultiset::new(entries, 11.0, true),
        )
        .unwrap();
        let half = d.scale(Rational64::new(1, 2)).unwrap();
        assert_eq!(half.degree(), 0.5);
        let report = half.validate();
        let integ = report
            .checks
            .iter()
            .find(|ch| ch.name == "a3.integrality")
            .unwrap();
        assert_eq!(integ.status, CheckStatus::Fail);
        assert_eq!(integ.measured, 20.0);
    }

    #[test]
    fn validator_flags_missing_conjugate() {
        let d = LDatum::new(
            CoefficientSeq::zero(4),
            Kernel::empty(),
            ZeroMultiset::new(vec![ZeroEntry { z: c(2.0, 0.1), mult: 1.0 }], 5.0, false),
        )
        .unwrap();
        let rep = d.validate();
        let sym = rep
            .checks
            .iter()
            .find(|ch| ch.name == "a3.conjugate_symmetry")
            .unwrap();
        assert_eq!(sym.status, CheckStatus::Fail);
    }

    #[test]
    fn combine_is_commutative_on_components() {
        let d = toy_datum();
        let e = d.scale(Rational64::new(2, 3)).unwrap();
        let ab = d
            .combine(&e, Rational64::new(1, 2), Rational64::new(1, 3))
            .unwrap();
        let ba = e
            .combine(&d, Rational64::new(1, 3), Rational64::new(1, 2))
            .unwrap();
        assert_eq!(ab.degree(), ba.degree());
        assert!((ab.conductor() - ba.conductor()).abs() < 1e-14);
        for (x, y) in ab.f().values().iter().zip(ba.f().values()) {
            assert!((x - y).norm() < 1e-15);
        }
    }
}
