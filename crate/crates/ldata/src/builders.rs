//! Constructors turning classical inputs into L-data.
//!
//! `from_selberg` accepts Selberg-class style data (gamma factors
//! Gamma(lambda_j s + mu_j), a Q parameter and prime-power log
//! coefficients); `from_character` builds the degree-1 datum of a shifted
//! primitive Dirichlet L-function, whose kernel is the single Gamma_R term
//! entered as {lambda: 1/2, mu: (a + it)/2}.

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::coeff::{self, CoefficientSeq};
use crate::datum::LDatum;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelTerm};
use crate::special;
use crate::zeros::ZeroMultiset;

/// Default coefficient horizon for built data.
pub const DEFAULT_HORIZON: usize = 1000;

/// Selberg-class input: complete L-function
/// eps Q^s prod Gamma(lambda_j s + mu_j) L(s) with
/// log L(s) = sum b(n) n^{-s} supported on prime powers.
#[derive(Debug, Clone)]
pub struct SelbergData {
    pub q_param: f64,
    /// (lambda_j, mu_j) with lambda > 0, Re mu >= 0.
    pub factors: Vec<(f64, Complex64)>,
    /// 1-indexed b(n); entries off prime powers must vanish.
    pub log_coeffs: Vec<Complex64>,
    pub zeros: ZeroMultiset,
}

impl SelbergData {
    /// zeta as a Selberg datum: Q = pi^{-1/2}, one factor Gamma(s/2),
    /// b(p^k) = 1/k.
    pub fn zeta(horizon: usize, zeros: ZeroMultiset) -> Self {
        let lam = coeff::von_mangoldt(horizon);
        let mut b = vec![Complex64::new(0.0, 0.0); horizon];
        for n in 2..=horizon {
            if lam[n] > 0.0 {
                // n = p^k: b(n) = 1/k = Lambda(n)/log n
                b[n - 1] = Complex64::new(lam[n] / (n as f64).ln(), 0.0);
            }
        }
        SelbergData {
            q_param: 1.0 / std::f64::consts::PI.sqrt(),
            factors: vec![(0.5, Complex64::new(0.0, 0.0))],
            log_coeffs: b,
            zeros,
        }
    }
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true // n itself prime
}

/// Builds the L-datum of a Selberg-class element.
pub fn from_selberg(data: &SelbergData) -> Result<LDatum> {
    if !(data.q_param > 0.0) {
        return Err(Error::InvalidFactor(format!(
            "Q must be positive, got {}",
            data.q_param
        )));
    }
    for &(lambda, mu) in &data.factors {
        if !(lambda > 0.0) {
            return Err(Error::InvalidFactor(format!("lambda = {lambda} <= 0")));
        }
        if mu.re < 0.0 {
            return Err(Error::InvalidFactor(format!("Re mu = {} < 0", mu.re)));
        }
    }
    for (i, b) in data.log_coeffs.iter().enumerate() {
        let n = i + 1;
        if b.norm_sqr() != 0.0 && !is_prime_power(n) {
            return Err(Error::InvalidFactor(format!(
                "log coefficient b({n}) off prime powers"
            )));
        }
    }
    let horizon = data.log_coeffs.len().max(1);
    let mut f = CoefficientSeq::zero(horizon);
    // f(1) = -log Q - Re sum lambda_j psi(lambda_j/2 + mu_j)
    let mut f1 = -data.q_param.ln();
    for &(lambda, mu) in &data.factors {
        f1 -= lambda * special::digamma(mu + lambda * 0.5).re;
    }
    f.set(1, Complex64::new(f1, 0.0));
    for n in 2..=horizon {
        let b = data.log_coeffs[n - 1];
        if b.norm_sqr() != 0.0 {
            f.set(n, b * (n as f64).ln() / (n as f64).sqrt());
        }
    }
    let kernel = Kernel::from_terms(
        data.factors
            .iter()
            .map(|&(lambda, mu)| KernelTerm::new(lambda, mu))
            .collect(),
    )?;
    LDatum::new(f, kernel, data.zeros.clone())
}

/// Gamma_R-shaped input (the GL_d normalization of Example-2 type data):
/// conductor q, Gamma_R shifts mu_j, and -L'/L coefficients c_n.
#[derive(Debug, Clone)]
pub struct GammaRData {
    pub q: u64,
    pub mus: Vec<Complex64>,
    /// 1-indexed c_n (c_1 unused), the Dirichlet coefficients of -L'/L.
    pub log_deriv: Vec<Complex64>,
    pub zeros: ZeroMultiset,
    pub shift: f64,
}

/// Builds the L-datum of Gamma_R-shaped data, applying the imaginary shift
/// s -> s + it to the gamma shifts and coefficients. The zeros must already
/// belong to the shifted function.
pub fn from_gamma_r(data: &GammaRData) -> Result<LDatum> {
    if data.q == 0 {
        return Err(Error::InvalidFactor("conductor must be positive".into()));
    }
    for mu in &data.mus {
        if mu.re < 0.0 {
            return Err(Error::InvalidFactor(format!("Re mu = {} < 0", mu.re)));
        }
    }
    let t = data.shift;
    let horizon = data.log_deriv.len().max(1);
    let mut f = CoefficientSeq::zero(horizon);
    let mut f1 = -0.5 * (data.q as f64).ln();
    for mu in &data.mus {
        f1 -= special::digamma_r(mu + Complex64::new(0.5, t)).re;
    }
    f.set(1, Complex64::new(f1, 0.0));
    for n in 2..=horizon {
        let c = data.log_deriv[n - 1];
        if c.norm_sqr() != 0.0 {
            let nf = n as f64;
            // n^{-it} c_n / sqrt(n)
            let twist = Complex64::from_polar(1.0, -t * nf.ln());
            f.set(n, c * twist / nf.sqrt());
        }
    }
    let kernel = Kernel::from_terms(
        data.mus
            .iter()
            .map(|mu| KernelTerm::gamma_r(mu + Complex64::new(0.0, t)))
            .collect(),
    )?;
    LDatum::new(f, kernel, data.zeros.clone())
}

/// The L-datum of L(s + it, chi) for a primitive character chi.
///
/// The caller supplies the zeros of the shifted completed function (use
/// [`ZeroMultiset::translate`] by -t on unshifted zeros). For the trivial
/// character the multiset must include the pole entries at z = +-i/2 with
/// multiplicity -1; [`crate::analytic::find_zeros`] does this.
pub fn from_character(
    chi: &DirichletCharacter,
    t: f64,
    zeros: ZeroMultiset,
    horizon: usize,
) -> Result<LDatum> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.modulus(), chi.index()));
    }
    let a = chi.parity() as f64;
    let q = chi.modulus();
    let mut f = CoefficientSeq::zero(horizon.max(1));
    let f1 = -0.5 * (q as f64).ln()
        - special::digamma_r(Complex64::new(0.5 + a, t)).re;
    f.set(1, Complex64::new(f1, 0.0));
    let lam = coeff::von_mangoldt(horizon);
    for n in 2..=horizon {
        if lam[n] == 0.0 {
            continue;
        }
        let chi_n = chi.value(n as u64);
        if chi_n.norm_sqr() == 0.0 {
            continue;
        }
        let nf = n as f64;
        let twist = Complex64::from_polar(1.0, -t * nf.ln());
        f.set(n, chi_n * twist * lam[n] / nf.sqrt());
    }
    let kernel = Kernel::from_terms(vec![KernelTerm::gamma_r(Complex64::new(a, t))])?;
    LDatum::new(f, kernel, zeros)
}
