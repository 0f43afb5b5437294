//! Complex log-gamma and digamma.
//!
//! Both are computed by the Stirling asymptotic series after lifting the
//! argument with the recurrence `Gamma(s+1) = s Gamma(s)` until the real
//! part is large enough for the series to converge below 1e-14. The
//! recurrence preserves the principal branch on `Re s > 0`: both sides are
//! analytic there and agree on the positive real axis.
//!
//! Accuracy is validated in the tests against independently computed
//! reference values and the reflection/recurrence identities.

use num_complex::Complex64;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// log(2 pi) / 2
pub const HALF_LOG_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// Bernoulli numbers B_2, B_4, ..., B_28.
pub const BERNOULLI: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

/// Shift threshold for the Stirling series.
const STIRLING_RE: f64 = 18.0;

/// Principal branch of log Gamma(s) for Re(s) > 0.
pub fn lgamma(s: Complex64) -> Complex64 {
    debug_assert!(s.re > 0.0, "lgamma requires Re(s) > 0, got {s}");
    let mut shift = Complex64::new(0.0, 0.0);
    let mut z = s;
    while z.re < STIRLING_RE {
        shift += z.ln();
        z += 1.0;
    }
    stirling_lgamma(z) - shift
}

/// Stirling series, valid for Re(z) >= STIRLING_RE.
fn stirling_lgamma(z: Complex64) -> Complex64 {
    let mut out = (z - 0.5) * z.ln() - z + HALF_LOG_TWO_PI;
    let z2 = z * z;
    let mut zp = z;
    for (k, b) in BERNOULLI.iter().enumerate().take(9) {
        let n = (2 * (k + 1)) as f64;
        out += b / (n * (n - 1.0) * zp);
        zp *= z2;
    }
    out
}

/// Digamma psi(s) = Gamma'(s)/Gamma(s) for Re(s) > 0.
pub fn digamma(s: Complex64) -> Complex64 {
    debug_assert!(s.re > 0.0, "digamma requires Re(s) > 0, got {s}");
    let mut shift = Complex64::new(0.0, 0.0);
    let mut z = s;
    while z.re < STIRLING_RE {
        shift += 1.0 / z;
        z += 1.0;
    }
    // psi(z) ~ ln z - 1/(2z) - sum B_2k / (2k z^{2k})
    let mut out = z.ln() - 0.5 / z;
    let z2 = z * z;
    let mut zp = z2;
    for (k, b) in BERNOULLI.iter().enumerate().take(9) {
        let n = (2 * (k + 1)) as f64;
        out -= b / (n * zp);
        zp *= z2;
    }
    out - shift
}

/// Digamma for real argument x > 0.
pub fn digamma_real(x: f64) -> f64 {
    digamma(Complex64::new(x, 0.0)).re
}

/// log Gamma_R(s) = log(pi^{-s/2} Gamma(s/2)), principal branch, Re(s) > 0.
pub fn lgamma_r(s: Complex64) -> Complex64 {
    -s * 0.5 * std::f64::consts::PI.ln() + lgamma(s * 0.5)
}

/// Gamma_R'(s)/Gamma_R(s) = -log(pi)/2 + psi(s/2)/2.
pub fn digamma_r(s: Complex64) -> Complex64 {
    -0.5 * std::f64::consts::PI.ln() + 0.5 * digamma(s * 0.5)
}
