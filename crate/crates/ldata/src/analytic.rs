//! L-function evaluation and zero finding.
//!
//! Dirichlet L-functions (and zeta, as the q = 1 case) are evaluated on
//! the critical line through the Hurwitz zeta function with Euler-Maclaurin
//! tails: L(s, chi) = q^{-s} sum_r chi(r) zeta(s, r/q). Zeros of real
//! primitive characters are located as sign changes of the rotated real
//! Hardy Z-function, bracketed on a density-scaled grid and refined by
//! bisection/secant steps.

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::datum::LDatum;
use crate::error::{Error, Result};
use crate::kahan;
use crate::special;
use crate::zeros::{ZeroEntry, ZeroMultiset};

/// Height cap for the internal zero finder. The Euler-Maclaurin evaluator
/// stays accurate well beyond this; the cap keeps runtimes desk-scale.
pub const HEIGHT_CAP: f64 = 2100.0;
/// Conductor cap for critical-line evaluation.
pub const CONDUCTOR_CAP: u64 = 50;
/// Bisection/secant refinement tolerance for zero heights.
pub const ZERO_REFINE_TOL: f64 = 1e-10;

/// Hurwitz zeta zeta(s, alpha) for Re s > 0, s != 1, 0 < alpha <= 1, by
/// Euler-Maclaurin. Returns the value and a remainder estimate.
pub fn hurwitz_zeta(s: Complex64, alpha: f64) -> (Complex64, f64) {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    let n_terms = (24.0f64.max(0.62 * s.im.abs() + 8.0)).ceil() as usize;
    let mut head = kahan::ComplexAccumulator::new();
    for n in 0..n_terms {
        let base = n as f64 + alpha;
        head.add((-s * base.ln()).exp());
    }
    let w = n_terms as f64 + alpha;
    let lw = w.ln();
    let w_pow_ms = (-s * lw).exp(); // w^{-s}
    let mut value = head.value() + w_pow_ms * w / (s - 1.0) + w_pow_ms * 0.5;
    // Bernoulli tail: sum B_2k/(2k)! (s)_{2k-1} w^{-s-2k+1}
    let mut poch = s; // rising factorial with 2k-1 factors
    let mut w_pow = w_pow_ms / w; // w^{-s-1}
    let mut fact = 2.0f64; // (2k)!
    let mut last = f64::INFINITY;
    for (k, b) in special::BERNOULLI.iter().enumerate().take(12) {
        let term = b / fact * poch * w_pow;
        value += term;
        last = term.norm();
        let kk = 2 * (k + 1) as i32;
        poch *= (s + (kk - 1) as f64) * (s + kk as f64);
        w_pow /= w * w;
        fact *= ((kk + 1) * (kk + 2)) as f64;
    }
    (value, last)
}

/// Dirichlet L-function L(s, chi) on Re s > 0 (s != 1 for the principal
/// character), including zeta for q = 1.
pub fn dirichlet_l(s: Complex64, chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    if q == 1 {
        return hurwitz_zeta(s, 1.0).0;
    }
    let mut acc = kahan::ComplexAccumulator::new();
    for r in 1..=q {
        let c = chi.value(r);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        acc.add(c * hurwitz_zeta(s, r as f64 / q as f64).0);
    }
    (-s * (q as f64).ln()).exp() * acc.value()
}

/// Completed L-function Lambda(s, chi) = (q/pi)^{(s+a)/2} Gamma((s+a)/2)
/// L(s, chi), for primitive chi. Supported on the critical line for
/// |Im s| <= 500 and q <= 50.
pub fn completed_l(s: Complex64, chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.modulus(), chi.index()));
    }
    if chi.modulus() > CONDUCTOR_CAP {
        return Err(Error::OutOfRange(format!(
            "conductor {} above cap {}",
            chi.modulus(),
            CONDUCTOR_CAP
        )));
    }
    if s.im.abs() > 500.0 {
        return Err(Error::OutOfRange(format!(
            "|Im s| = {} above 500 for completed values",
            s.im.abs()
        )));
    }
    let a = chi.parity() as f64;
    let sa = (s + a) * 0.5;
    let factor =
        (sa * (chi.modulus() as f64 / std::f64::consts::PI).ln()).exp() * special::lgamma(sa).exp();
    Ok(factor * dirichlet_l(s, chi))
}

/// Rotated Hardy Z-function for a real primitive character (or zeta):
/// Z(t) = e^{i vartheta(t)} L(1/2 + it, chi) with the rotation chosen so
/// that Z is real (the root number of a real primitive character is 1).
/// Returns (Z, |imaginary residue|); the residue doubles as an accuracy
/// check.
pub fn hardy_z(t: f64, chi: &DirichletCharacter) -> (f64, f64) {
    let a = chi.parity() as f64;
    let s = Complex64::new(0.5, t);
    let sa = (s + a) * 0.5;
    let theta = special::lgamma(sa).im
        + t / 2.0 * (chi.modulus() as f64 / std::f64::consts::PI).ln();
    let z = Complex64::from_polar(1.0, theta) * dirichlet_l(s, chi);
    (z.re, z.im.abs())
}

/// Classical main term for the one-sided zero count N(T) of Lambda(s, chi):
/// (T/2pi) log(qT/(2 pi e)) + 7/8 (the zeta constant; characters use the
/// same main term, which is accurate to O(log) and checked with slack).
pub fn zero_count_main_term(t: f64, q: u64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    t / (2.0 * std::f64::consts::PI) * (q as f64 * t / two_pi_e).ln().max(0.0) + 0.875
}

/// A suspicious bracket: |Z| dipped below resolution without a sign change.
#[derive(Debug, Clone, Copy)]
pub struct FlaggedBracket {
    pub t_low: f64,
    pub t_high: f64,
    pub min_abs: f64,
}

/// Result of a zero scan.
#[derive(Debug)]
pub struct ZeroScan {
    pub zeros: ZeroMultiset,
    /// Positive heights, ascending.
    pub heights: Vec<f64>,
    pub flagged: Vec<FlaggedBracket>,
    /// (found, main-term estimate) for the scanned range.
    pub count_check: (usize, f64),
}

/// Locates zeros of Lambda(s, chi) with 0 < Im s <= t_max for zeta or a
/// real primitive character, mirrors them, and (for q = 1) adds the two
/// pole entries at z = +-i/2 with multiplicity -1.
pub fn find_zeros(chi: &DirichletCharacter, t_max: f64) -> Result<ZeroScan> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.modulus(), chi.index()));
    }
    if !chi.is_real() {
        return Err(Error::DomainError(
            "zero finding needs a real character (Hardy rotation); import complex-character zeros from a file".into(),
        ));
    }
    if t_max > HEIGHT_CAP {
        return Err(Error::OutOfRange(format!(
            "height {t_max} above cap {HEIGHT_CAP}"
        )));
    }
    let q = chi.modulus();
    let mut heights = Vec::new();
    let mut flagged = Vec::new();
    if t_max > 0.0 {
        // density-scaled scan grid: about 8 samples per mean zero gap
        let density = |t: f64| {
            ((q as f64) * t.max(8.0) / (2.0 * std::f64::consts::PI)).ln().max(0.5)
                / (2.0 * std::f64::consts::PI)
        };
        let mut t_prev = 1e-4;
        let (mut z_prev, _) = hardy_z(t_prev, chi);
        let mut local_min = f64::INFINITY;
        let mut local_min_t = t_prev;
        let mut scale = z_prev.abs().max(1e-3);
        while t_prev < t_max {
            let step = 0.125 / density(t_prev);
            let t_next = (t_prev + step).min(t_max);
            let (z_next, _) = hardy_z(t_next, chi);
            if z_prev == 0.0 || z_prev.signum() != z_next.signum() {
                let root = refine_zero(chi, t_prev, t_next, z_prev, z_next);
                heights.push(root);
                local_min = f64::INFINITY;
            } else {
                // track |Z| minima between sign changes
                let mid = 0.5 * (t_prev + t_next);
                let (z_mid, _) = hardy_z(mid, chi);
                if z_mid.abs() < local_min {
                    local_min = z_mid.abs();
                    local_min_t = mid;
                }
                if z_mid.signum() != z_prev.signum() {
                    // a pair of zeros inside one step; split
                    let r1 = refine_zero(chi, t_prev, mid, z_prev, z_mid);
                    let r2 = refine_zero(chi, mid, t_next, z_mid, z_next);
                    heights.push(r1);
                    heights.push(r2);
                    local_min = f64::INFINITY;
                } else if local_min < 1e-7 * scale && t_next - local_min_t > step * 4.0 {
                    flagged.push(FlaggedBracket {
                        t_low: local_min_t - step,
                        t_high: local_min_t + step,
                        min_abs: local_min,
                    });
                    local_min = f64::INFINITY;
                }
            }
            scale = 0.98 * scale + 0.02 * z_next.abs().max(1e-3);
            t_prev = t_next;
            z_prev = z_next;
        }
    }
    heights.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let found = heights.len();
    let estimate = zero_count_main_term(t_max, q);
    let mut entries: Vec<ZeroEntry> = heights
        .iter()
        .map(|&g| ZeroEntry {
            z: Complex64::new(g, 0.0),
            mult: 1.0,
        })
        .collect();
    if q == 1 {
        // poles of the completed zeta function at s = 0, 1
        entries.push(ZeroEntry {
            z: Complex64::new(0.0, 0.5),
            mult: -1.0,
        });
        entries.push(ZeroEntry {
            z: Complex64::new(0.0, -0.5),
            mult: -1.0,
        });
    }
    let zeros = ZeroMultiset::new(entries, t_max, false).mirror();
    Ok(ZeroScan {
        zeros,
        heights,
        flagged,
        count_check: (found, estimate),
    })
}

/// Bracket refinement: bisection with secant acceleration.
fn refine_zero(chi: &DirichletCharacter, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    for _ in 0..80 {
        if b - a < ZERO_REFINE_TOL {
            break;
        }
        // secant proposal, clamped into the middle 80% of the bracket
        let mut m = if (fb - fa).abs() > 1e-300 {
            b - fb * (b - a) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        let lo = a + 0.1 * (b - a);
        let hi = b - 0.1 * (b - a);
        if !(lo..=hi).contains(&m) {
            m = 0.5 * (a + b);
        }
        let (fm, _) = hardy_z(m, chi);
        if fm == 0.0 {
            return m;
        }
        if fa.signum() != fm.signum() {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Half-plane value of L_F with a certified tail bound, plus the
/// exponential-form cross check.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlaneValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// exp(sum_{n>=2} f(n)/log n n^{1/2-s}) evaluated on the same horizon.
    pub exp_form: Complex64,
    /// Truncation-order bound on |value - exp_form|.
    pub agreement_bound: f64,
}

/// L_F(s) = sum a_F(n) n^{-s} for Re s > 1, truncated at the coefficient
/// horizon with an A1-fitted tail bound.
pub fn l_halfplane(datum: &LDatum, s: Complex64) -> Result<HalfPlaneValue> {
    if s.re <= 1.0 + 1e-9 {
        return Err(Error::DomainError(format!(
            "absolute-convergence evaluation needs Re s > 1, got {}",
            s.re
        )));
    }
    let horizon = datum.f().horizon().max(1);
    let a = datum.coefficients(horizon)?;
    let mut acc = kahan::ComplexAccumulator::new();
    for (i, an) in a.iter().enumerate() {
        let n = (i + 1) as f64;
        acc.add(an * (-s * n.ln()).exp());
    }
    let value = acc.value();
    // tail bound: |a(n)| <= C_a on the horizon extrapolated forward
    let c_a = a.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let sigma = s.re;
    let tail_bound = c_a * (horizon as f64).powf(1.0 - sigma) / (sigma - 1.0);

    // exponential form on the same horizon
    let mut log_acc = kahan::ComplexAccumulator::new();
    for m in 2..=horizon {
        let fm = datum.f().get(m);
        if fm.norm_sqr() == 0.0 {
            continue;
        }
        let ml = (m as f64).ln();
        log_acc.add(fm / ml * ((0.5 - s) * ml).exp());
    }
    let exp_form = log_acc.value().exp();
    // both truncations differ by tail-order terms
    let agreement_bound = 2.0 * tail_bound * (1.0 + exp_form.norm());
    Ok(HalfPlaneValue {
        value,
        tail_bound,
        exp_form,
        agreement_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Frozen 25-digit reference values.
    #[test]
    fn hurwitz_reference_values() {
        let cases = [
            (c(2.0, 0.0), 1.0, c(1.6449340668482264, 0.0)),
            (c(0.5, 10.0), 0.4, c(-2.5796117176335700, 0.2558872496979421)),
            (c(0.5, 100.0), 0.2, c(-1.8159454856912182, -2.2247981406147074)),
            (c(3.0, -7.0), 0.75, c(-1.1302548985160530, -2.2418358122817574)),
            (c(0.5, 500.0), 1.0, c(-0.3962565072751466, -1.4181267413453708)),
            (c(0.5, 2000.0), 1.0, c(0.7906102333265347, 0.0172051086841261)),
            (c(1.5, 0.0), 0.3, c(8.2377616714597234, 0.0)),
        ];
        for (s, alpha, want) in cases {
            let (got, _) = hurwitz_zeta(s, alpha);
            assert!(
                (got - want).norm() < 1e-11 * (1.0 + want.norm()),
                "s={s} alpha={alpha}: got {got} want {want}"
            );
        }
    }

    #[test]
    fn zeta_critical_line_values() {
        let chi = characters::characters_mod(1).unwrap().pop().unwrap();
        let cases = [
            (5.0, c(0.7018123711656866, 0.2310380083914199)),
            (10.0, c(1.5448952202967528, -0.1153364652712734)),
            (15.0, c(0.1471099070433491, 0.7047522416432119)),
            (20.0, c(0.4299138604378434, -1.0642914430805891)),
        ];
        for (t, want) in cases {
            let got = dirichlet_l(c(0.5, t), &chi);
            assert!((got - want).norm() < 1e-11, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn l_chi5_reference_values() {
        let chi = characters::by_designator("5.2").unwrap();
        let got = dirichlet_l(c(2.0, 0.0), &chi);
        assert!((got - c(0.7062114032597410, 0.0)).norm() < 1e-12);
        let got_half = dirichlet_l(c(0.5, 0.0), &chi);
        assert!((got_half - c(0.2317509475040158, 0.0)).norm() < 1e-12);
        let got_3i = dirichlet_l(c(0.5, 3.0), &chi);
        assert!((got_3i - c(1.5573567209431383, 1.0212389903423030)).norm() < 1e-11);
    }

    #[test]
    fn completed_zeta_at_half_matches_classical_constant() {
        // Lambda(1/2) = pi^{-1/4} Gamma(1/4) zeta(1/2)
        let chi = characters::characters_mod(1).unwrap().pop().unwrap();
        let got = completed_l(c(0.5, 0.0), &chi).unwrap();
        assert!(
            (got - c(-3.9769662255065129, 0.0)).norm() < 1e-9,
            "got {got}"
        );
    }

    #[test]
    fn completed_l_conjugate_symmetry() {
        // Lambda(1/2 + it, chi) = conj Lambda(1/2 - it, conj chi)
        let chi = characters::by_designator("5.2").unwrap();
        for &t in &[3.0, 7.5, 22.0] {
            let a = completed_l(c(0.5, t), &chi).unwrap();
            let b = completed_l(c(0.5, -t), &chi.conj()).unwrap();
            assert!((a - b.conj()).norm() < 1e-10 * (1.0 + a.norm()), "t={t}");
        }
    }

    #[test]
    fn hardy_z_is_real_for_real_characters() {
        for designator in ["1.0", "5.2", "3.1"] {
            let chi = characters::by_designator(designator).unwrap();
            for &t in &[2.0, 14.5, 61.0] {
                let (_, imag) = hardy_z(t, &chi);
                assert!(imag < 1e-9, "chi={designator} t={t} imag={imag}");
            }
        }
    }

    #[test]
    fn first_three_zeta_zeros() {
        let chi = characters::characters_mod(1).unwrap().pop().unwrap();
        let scan = find_zeros(&chi, 30.0).unwrap();
        let want = [14.134725141734694, 21.022039638771555, 25.010857580145689];
        assert_eq!(scan.heights.len(), 3, "heights: {:?}", scan.heights);
        for (got, want) in scan.heights.iter().zip(want) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
        // mirrored + two pole entries
        assert_eq!(scan.zeros.len(), 8);
        assert_eq!(
            scan.zeros
                .entries()
                .iter()
                .filter(|e| e.mult < 0.0)
                .count(),
            2
        );
    }

    #[test]
    fn zeta_zero_count_to_100_matches_main_term() {
        let chi = characters::characters_mod(1).unwrap().pop().unwrap();
        let scan = find_zeros(&chi, 100.0).unwrap();
        let (found, est) = scan.count_check;
        assert_eq!(found, 29);
        assert!((found as f64 - est).abs() <= 2.0, "found {found} est {est}");
    }

    #[test]
    fn chi5_zero_count_consistent_with_main_term() {
        let chi = characters::by_designator("5.2").unwrap();
        let scan = find_zeros(&chi, 20.0).unwrap();
        let (found, est) = scan.count_check;
        assert!(
            (found as f64 - est).abs() <= 2.0,
            "found {found} est {est}"
        );
        assert!(scan.flagged.is_empty());
    }

    #[test]
    fn empty_range_gives_empty_multiset_besides_poles() {
        let chi = characters::by_designator("5.2").unwrap();
        let scan = find_zeros(&chi, 0.0).unwrap();
        assert!(scan.zeros.is_empty());
    }

    #[test]
    fn complex_character_is_rejected() {
        let cs = characters::characters_mod(5).unwrap();
        let complex_chi = cs.into_iter().find(|c| !c.is_real()).unwrap();
        assert!(find_zeros(&complex_chi, 10.0).is_err());
    }
}
