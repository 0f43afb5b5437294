//! Archimedean integral kernels.
//!
//! A closed-form kernel is a weighted sum of terms
//! `w * exp(-(1/2 + mu/lambda) x) / (1 - exp(-x/lambda))`,
//! the shape produced by a Gamma(lambda s + mu) factor. A Gamma_R(s + m)
//! factor corresponds to `{lambda: 1/2, mu: m/2}`. Each term contributes
//! `2 w lambda` to the degree and `w (lambda + 2 mu - 1)` to the mu
//! parameter; both follow from the series of `x K(x)` at 0, which this
//! module also exposes for the K_1 regularization.
//!
//! A sampled kernel (table of `(x, K(x))` pairs with spline interpolation)
//! is supported as a fallback; its degree and mu parameter are obtained by
//! Richardson extrapolation of `x K(x)` and its difference quotient.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::kahan;

/// Order of the local power series kept for `x K(x)` around 0.
pub(crate) const SERIES_LEN: usize = 28;

/// Extrapolation tolerance for sampled kernels.
const RICHARDSON_TOL: f64 = 1e-9;

/// One closed-form kernel term.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTerm {
    /// Gamma-factor scale; must be positive.
    pub lambda: f64,
    /// Gamma-factor shift divided by lambda convention: the term is
    /// `exp(-(1/2 + mu/lambda) x) / (1 - exp(-x/lambda))`.
    pub mu: Complex64,
    /// Rational weight; 1 for honest Gamma factors, fractional after
    /// group scaling.
    pub weight: Rational64,
}

impl KernelTerm {
    pub fn new(lambda: f64, mu: Complex64) -> Self {
        Self {
            lambda,
            mu,
            weight: Rational64::new(1, 1),
        }
    }

    pub fn gamma_r(shift: Complex64) -> Self {
        Self::new(0.5, shift * 0.5)
    }

    fn weight_f(&self) -> f64 {
        *self.weight.numer() as f64 / *self.weight.denom() as f64
    }

    /// Exponent constant c = 1/2 + mu/lambda.
    fn c(&self) -> Complex64 {
        self.mu / self.lambda + 0.5
    }
}

/// Sampled kernel: strictly increasing abscissae with complex values.
///
/// The spline is built over v(x) = x K(x), which stays smooth and bounded
/// at 0, rather than over K itself, whose 1/x singularity would wreck the
/// interpolation near the origin. K(x) is recovered as v(x)/x.
#[derive(Debug, Clone)]
pub struct KernelTable {
    xs: Vec<f64>,
    ks: Vec<Complex64>,
    vs: Vec<Complex64>,
    second: Vec<Complex64>,
}

impl KernelTable {
    pub fn new(mut points: Vec<(f64, Complex64)>) -> Result<Self> {
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        points.dedup_by(|a, b| a.0 == b.0);
        if points.len() < 4 {
            return Err(Error::InvalidFactor(
                "kernel table needs at least 4 points".into(),
            ));
        }
        if points[0].0 <= 0.0 {
            return Err(Error::InvalidFactor(
                "kernel table abscissae must be positive".into(),
            ));
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ks: Vec<Complex64> = points.iter().map(|p| p.1).collect();
        let vs: Vec<Complex64> = points.iter().map(|p| p.1 * p.0).collect();
        let second = natural_spline_second_derivatives(&xs, &vs);
        Ok(Self { xs, ks, vs, second })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.xs.iter().copied().zip(self.ks.iter().copied())
    }

    /// x K(x) by spline; clamps to the table range.
    pub fn eval_xk(&self, x: f64) -> Complex64 {
        let x = x.clamp(self.x_min(), self.x_max());
        let i = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        self.vs[i] * a
            + self.vs[i + 1] * b
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1])
                * (h * h / 6.0)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_xk(x) / x
    }
}

fn natural_spline_second_derivatives(xs: &[f64], ys: &[Complex64]) -> Vec<Complex64> {
    let n = xs.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut y2 = vec![zero; n];
    let mut u = vec![zero; n];
    for i in 1..n - 1 {
        let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
        let p = y2[i - 1] * sig + 2.0;
        y2[i] = (sig - 1.0) / p;
        let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
            - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        u[i] = (d * 6.0 / (xs[i + 1] - xs[i - 1]) - u[i - 1] * sig) / p;
    }
    for i in (1..n - 1).rev() {
        let next = y2[i + 1];
        y2[i] = y2[i] * next + u[i];
    }
    y2
}

/// The kernel component of an L-datum.
#[derive(Debug, Clone)]
pub enum Kernel {
    Terms(Vec<KernelTerm>),
    Table(KernelTable),
}

impl Kernel {
    pub fn empty() -> Self {
        Kernel::Terms(Vec::new())
    }

    pub fn from_terms(terms: Vec<KernelTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.lambda > 0.0) {
                return Err(Error::InvalidFactor(format!(
                    "kernel term lambda must be positive, got {}",
                    t.lambda
                )));
            }
            if *t.weight.denom() == 0 {
                return Err(Error::InvalidFactor("zero weight denominator".into()));
            }
        }
        Ok(Kernel::Terms(terms))
    }

    pub fn terms(&self) -> Option<&[KernelTerm]> {
        match self {
            Kernel::Terms(t) => Some(t),
            Kernel::Table(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Kernel::Terms(t) if t.is_empty())
    }

    /// K(x) for real x > 0.
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Kernel::Terms(_) => self
                .eval_complex(Complex64::new(x, 0.0))
                .expect("closed-form kernel"),
            Kernel::Table(t) => t.eval(x),
        }
    }

    /// K(x) for complex x with Re x > 0 (closed-form kernels only).
    pub fn eval_complex(&self, x: Complex64) -> Result<Complex64> {
        let terms = match self {
            Kernel::Terms(t) => t,
            Kernel::Table(_) => {
                return Err(Error::DomainError(
                    "sampled kernels cannot be evaluated off the real axis".into(),
                ))
            }
        };
        let mut acc = kahan::ComplexAccumulator::new();
        for t in terms {
            let u = x / t.lambda;
            // term = w * (lambda/x) * e^{-cx} * B(u),  B(u) = u/(1-e^{-u})
            let b = bernoulli_ratio(u);
            acc.add(t.weight_f() * (t.lambda / x) * (-t.c() * x).exp() * b);
        }
        Ok(acc.value())
    }

    /// Degree d_F = 2 lim_{x->0+} x K(x).
    ///
    /// Exact (term-by-term) for closed-form kernels; Richardson-extrapolated
    /// for sampled ones.
    pub fn degree(&self) -> Result<f64> {
        match self {
            Kernel::Terms(terms) => Ok(2.0
                * kahan::sum(terms.iter().map(|t| t.weight_f() * t.lambda))),
            Kernel::Table(table) => {
                let (lim, err) = richardson_limit(table, |x, k| k.eval_xk(x).re)?;
                let (lim_im, _) = richardson_limit(table, |x, k| k.eval_xk(x).im)?;
                if lim_im.abs() > 1e-6 * (1.0 + lim.abs()) {
                    return Err(Error::NonConvergent {
                        residual: lim_im.abs(),
                        tol: 1e-6,
                    });
                }
                if err > RICHARDSON_TOL * (1.0 + lim.abs()) {
                    return Err(Error::NonConvergent {
                        residual: err,
                        tol: RICHARDSON_TOL,
                    });
                }
                Ok(2.0 * lim)
            }
        }
    }

    /// mu parameter: -2 lim_{x->0+} d/dx (x K(x)).
    pub fn mu_parameter(&self) -> Result<Complex64> {
        match self {
            Kernel::Terms(terms) => Ok(kahan::csum(
                terms
                    .iter()
                    .map(|t| t.weight_f() * (t.mu * 2.0 + t.lambda - 1.0)),
            )),
            Kernel::Table(table) => {
                // difference quotient D(x) = (v(2x)-v(x))/x -> v'(0)
                let re = richardson_limit(table, |x, k| {
                    (k.eval_xk(2.0 * x).re - k.eval_xk(x).re) / x
                })?;
                let im = richardson_limit(table, |x, k| {
                    (k.eval_xk(2.0 * x).im - k.eval_xk(x).im) / x
                })?;
                let err = re.1.max(im.1);
                if err > 1e-6 {
                    return Err(Error::NonConvergent {
                        residual: err,
                        tol: 1e-6,
                    });
                }
                Ok(Complex64::new(re.0, im.0) * -2.0)
            }
        }
    }

    /// Power series of x K(x) around 0 (closed-form kernels only).
    pub fn xk_series(&self) -> Option<[Complex64; SERIES_LEN]> {
        let terms = self.terms()?;
        let zero = Complex64::new(0.0, 0.0);
        let mut out = [zero; SERIES_LEN];
        let b = bernoulli_series();
        for t in terms {
            // w * lambda * e^{-cx} * B(x/lambda)
            let c = t.c();
            let w = t.weight_f() * t.lambda;
            let mut epow = [zero; SERIES_LEN];
            let mut cur = Complex64::new(1.0, 0.0);
            for (j, e) in epow.iter_mut().enumerate() {
                *e = cur;
                cur *= -c / (j as f64 + 1.0);
            }
            for n in 0..SERIES_LEN {
                let mut s = zero;
                for j in 0..=n {
                    s += epow[j] * b[n - j] * t.lambda.powi(-((n - j) as i32));
                }
                out[n] += w * s;
            }
        }
        Some(out)
    }

    /// Closed-form tail integral of K over [x_cut, infinity).
    ///
    /// Expands 1/(1-e^{-x/lambda}) as a geometric series; requires every
    /// exponent constant to have positive real part.
    pub fn tail_integral(&self, x_cut: f64) -> Result<Complex64> {
        match self {
            Kernel::Terms(terms) => {
                let mut acc = kahan::ComplexAccumulator::new();
                for t in terms {
                    let c = t.c();
                    if c.re <= 0.0 {
                        return Err(Error::DivergentTail(format!(
                            "kernel term with Re(1/2 + mu/lambda) = {} <= 0",
                            c.re
                        )));
                    }
                    let w = t.weight_f();
                    let ratio = (-x_cut / t.lambda).exp();
                    let mut k = 0f64;
                    let mut factor = (-c * x_cut).exp();
                    loop {
                        let a = c + k / t.lambda;
                        let term = factor / a;
                        acc.add(w * term);
                        if term.norm() < 1e-18 * (1.0 + acc.value().norm()) || k > 400.0 {
                            break;
                        }
                        factor *= ratio;
                        k += 1.0;
                    }
                }
                Ok(acc.value())
            }
            Kernel::Table(table) => {
                // exponential fit on the last decade of the table
                let hi = table.x_max();
                let lo = (0.75 * hi).max(table.x_min());
                if x_cut >= hi {
                    // extrapolate |K| ~ A e^{-bx} from the last samples
                    let y1 = table.eval(lo).norm().max(1e-300);
                    let y2 = table.eval(hi).norm().max(1e-300);
                    let b = ((y1 / y2).ln() / (hi - lo)).max(1e-6);
                    let a = y2 * (b * hi).exp();
                    return Ok(Complex64::new(a * (-b * x_cut).exp() / b, 0.0));
                }
                let mut acc = kahan::ComplexAccumulator::new();
                let n = 400;
                let h = (hi - x_cut) / n as f64;
                for i in 0..n {
                    let x0 = x_cut + i as f64 * h;
                    acc.add((table.eval(x0) + table.eval(x0 + h)) * (0.5 * h));
                }
                let rest = self.tail_integral(hi)?;
                Ok(acc.value() + rest)
            }
        }
    }
}

/// B(u) = u / (1 - e^{-u}), stable for all |u|, complex u.
pub(crate) fn bernoulli_ratio(u: Complex64) -> Complex64 {
    if u.norm() >= 0.5 {
        let em = 1.0 - (-u).exp();
        u / em
    } else {
        let b = bernoulli_series();
        let mut s = Complex64::new(0.0, 0.0);
        let mut up = Complex64::new(1.0, 0.0);
        for coeff in b.iter() {
            s += coeff * up;
            up *= u;
        }
        s
    }
}

/// Coefficients of u/(1-e^{-u}) = sum b_n u^n (b_0 = 1, b_1 = 1/2,
/// b_{2k} = B_2k/(2k)!, odd >= 3 vanish), computed once by series inversion
/// of (1-e^{-u})/u.
fn bernoulli_series() -> &'static [f64; SERIES_LEN] {
    use std::sync::OnceLock;
    static CELL: OnceLock<[f64; SERIES_LEN]> = OnceLock::new();
    CELL.get_or_init(|| {
        // (1 - e^{-u})/u = sum_{n>=0} (-1)^n u^n / (n+1)!
        let mut denom = [0f64; SERIES_LEN];
        let mut fact = 1f64;
        for (n, d) in denom.iter_mut().enumerate() {
            fact *= (n + 1) as f64;
            *d = if n % 2 == 0 { 1.0 / fact } else { -1.0 / fact };
        }
        invert_series(&denom)
    })
}

/// v / sinh(v) coefficients.
pub(crate) fn v_over_sinh_series() -> &'static [f64; SERIES_LEN] {
    use std::sync::OnceLock;
    static CELL: OnceLock<[f64; SERIES_LEN]> = OnceLock::new();
    CELL.get_or_init(|| {
        // sinh(v)/v = sum v^{2k} / (2k+1)!
        let mut denom = [0f64; SERIES_LEN];
        let mut fact = 1f64;
        for n in 0..SERIES_LEN {
            fact *= (n + 1) as f64;
            if n % 2 == 0 {
                denom[n] = 1.0 / fact;
            }
        }
        invert_series(&denom)
    })
}

/// 1 / cosh(v) coefficients.
pub(crate) fn sech_series() -> &'static [f64; SERIES_LEN] {
    use std::sync::OnceLock;
    static CELL: OnceLock<[f64; SERIES_LEN]> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut denom = [0f64; SERIES_LEN];
        let mut fact = 1f64;
        denom[0] = 1.0;
        for n in 1..SERIES_LEN {
            fact *= n as f64;
            if n % 2 == 0 {
                denom[n] = 1.0 / fact;
            }
        }
        invert_series(&denom)
    })
}

/// Reciprocal of a power series with nonzero constant term.
fn invert_series(a: &[f64; SERIES_LEN]) -> [f64; SERIES_LEN] {
    let mut inv = [0f64; SERIES_LEN];
    inv[0] = 1.0 / a[0];
    for n in 1..SERIES_LEN {
        let mut s = 0.0;
        for k in 1..=n {
            s += a[k] * inv[n - k];
        }
        inv[n] = -s / a[0];
    }
    inv
}

/// Richardson extrapolation of `sample(x)` as x -> 0+ along x_0 2^{-k}.
fn richardson_limit<F: Fn(f64, &KernelTable) -> f64>(
    table: &KernelTable,
    sample: F,
) -> Result<(f64, f64)> {
    let x0 = (table.x_max() / 4.0).min(1.0);
    let mut vals = Vec::new();
    for k in 0..=12 {
        let x = x0 * 0.5f64.powi(k);
        if x < table.x_min() {
            break;
        }
        vals.push(sample(x, table));
    }
    if vals.len() < 4 {
        return Err(Error::NonConvergent {
            residual: f64::INFINITY,
            tol: RICHARDSON_TOL,
        });
    }
    Ok(richardson(&vals))
}

/// Richardson table for samples at x_0 2^{-k}, assuming an expansion in
/// integer powers of x. Returns (limit, error estimate).
pub(crate) fn richardson(vals: &[f64]) -> (f64, f64) {
    let n = vals.len();
    let mut t: Vec<Vec<f64>> = vec![vals.to_vec()];
    for j in 1..n {
        let p = 2f64.powi(j as i32);
        let prev = &t[j - 1];
        let mut row = Vec::with_capacity(n - j);
        for k in 0..n - j {
            row.push((p * prev[k + 1] - prev[k]) / (p - 1.0));
        }
        t.push(row);
    }
    let last = t[n - 1][0];
    let prev = t[n - 2][0];
    (last, (last - prev).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn zeta_kernel() -> Kernel {
        Kernel::from_terms(vec![KernelTerm::new(0.5, Complex64::new(0.0, 0.0))]).unwrap()
    }

    #[test]
    fn degree_single_gamma_r() {
        assert_abs_diff_eq!(zeta_kernel().degree().unwrap(), 1.0, epsilon = 0.0);
    }

    #[test]
    fn degree_empty() {
        assert_eq!(Kernel::empty().degree().unwrap(), 0.0);
    }

    #[test]
    fn degree_three_gamma_r_terms() {
        let k = Kernel::from_terms(vec![
            KernelTerm::gamma_r(Complex64::new(0.0, 0.0)),
            KernelTerm::gamma_r(Complex64::new(0.3, 1.0)),
            KernelTerm::gamma_r(Complex64::new(0.3, -1.0)),
        ])
        .unwrap();
        assert_abs_diff_eq!(k.degree().unwrap(), 3.0, epsilon = 0.0);
    }

    #[test]
    fn mu_zeta_kernel_is_minus_half() {
        let mu = zeta_kernel().mu_parameter().unwrap();
        assert_abs_diff_eq!(mu.re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(mu.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mu_shifted_gamma_r_term() {
        // Gamma_R(s + a + it) enters as {lambda: 1/2, mu: (a+it)/2} and must
        // contribute (a + it) - 1/2.
        let shift = Complex64::new(1.0, 0.25);
        let k = Kernel::from_terms(vec![KernelTerm::gamma_r(shift)]).unwrap();
        let mu = k.mu_parameter().unwrap();
        assert!((mu - (shift - 0.5)).norm() < 1e-15);
    }

    #[test]
    fn mu_empty_kernel() {
        assert_eq!(Kernel::empty().mu_parameter().unwrap().norm(), 0.0);
    }

    /// High-precision finite-difference oracle for the kernel limits.
    #[test]
    fn finite_difference_oracle_for_degree_and_mu() {
        let k = Kernel::from_terms(vec![
            KernelTerm::gamma_r(Complex64::new(0.0, 0.5)),
            KernelTerm::new(0.75, Complex64::new(0.2, -0.1)),
        ])
        .unwrap();
        let v = |x: f64| k.eval(x) * x;
        // Richardson on x K(x) and its difference quotient
        let vals: Vec<f64> = (0..10).map(|j| v(0.5 * 0.5f64.powi(j)).re).collect();
        let (lim, err) = richardson(&vals);
        assert!(err < 1e-10);
        assert_abs_diff_eq!(2.0 * lim, k.degree().unwrap(), epsilon = 1e-9);

        let dq_re: Vec<f64> = (0..10)
            .map(|j| {
                let x = 0.25 * 0.5f64.powi(j);
                (v(2.0 * x).re - v(x).re) / x
            })
            .collect();
        let dq_im: Vec<f64> = (0..10)
            .map(|j| {
                let x = 0.25 * 0.5f64.powi(j);
                (v(2.0 * x).im - v(x).im) / x
            })
            .collect();
        let mu_fd = Complex64::new(richardson(&dq_re).0, richardson(&dq_im).0) * -2.0;
        let mu = k.mu_parameter().unwrap();
        assert!((mu_fd - mu).norm() < 1e-8, "fd {mu_fd} exact {mu}");
    }

    #[test]
    fn series_matches_direct_evaluation() {
        let k = Kernel::from_terms(vec![
            KernelTerm::gamma_r(Complex64::new(1.0, 0.3)),
            KernelTerm::new(0.5, Complex64::new(0.1, 0.0)),
        ])
        .unwrap();
        let ser = k.xk_series().unwrap();
        for &x in &[0.05, 0.1, 0.2, 0.3] {
            let mut s = Complex64::new(0.0, 0.0);
            for n in (0..SERIES_LEN).rev() {
                s = s * x + ser[n];
            }
            let direct = k.eval(x) * x;
            assert!(
                (s - direct).norm() < 1e-13 * direct.norm(),
                "x={x}: series {s} direct {direct}"
            );
        }
    }

    #[test]
    fn series_leading_terms_match_degree_and_mu() {
        let k = Kernel::from_terms(vec![
            KernelTerm::gamma_r(Complex64::new(0.0, 0.0)),
            KernelTerm::new(0.7, Complex64::new(0.4, 0.2)),
        ])
        .unwrap();
        let ser = k.xk_series().unwrap();
        assert!((2.0 * ser[0].re - k.degree().unwrap()).abs() < 1e-14);
        assert!((ser[0].im).abs() < 1e-14);
        let mu = k.mu_parameter().unwrap();
        assert!((ser[1] * -2.0 - mu).norm() < 1e-14);
    }

    #[test]
    fn complex_evaluation_agrees_on_real_axis() {
        let k = Kernel::from_terms(vec![KernelTerm::gamma_r(Complex64::new(1.0, -0.7))]).unwrap();
        for &x in &[0.01, 0.3, 2.0, 10.0] {
            let a = k.eval(x);
            let b = k.eval_complex(Complex64::new(x, 0.0)).unwrap();
            assert!((a - b).norm() < 1e-15 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn tail_integral_matches_quadrature() {
        let k = zeta_kernel();
        let tail = k.tail_integral(4.0).unwrap();
        let q = crate::quad::integrate(|x| k.eval(x), 4.0, 60.0, 1e-14, 1e-14);
        assert!((tail - q.value).norm() < 1e-12, "tail {tail} quad {}", q.value);
    }

    #[test]
    fn table_kernel_recovers_degree_and_mu() {
        // geometric abscissae, dense near 0, as a sampled kernel should be
        let exact = zeta_kernel();
        let n = 3000;
        let (lo, hi) = (1e-4f64, 20.0f64);
        let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
        let mut x = lo;
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            pts.push((x, exact.eval(x)));
            x *= ratio;
        }
        let table = Kernel::Table(KernelTable::new(pts).unwrap());
        let d = table.degree().unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-8);
        let mu = table.mu_parameter().unwrap();
        assert!((mu - Complex64::new(-0.5, 0.0)).norm() < 1e-5, "mu {mu}");
    }

    #[test]
    fn weighted_half_kernel_scales_degree() {
        let mut t = KernelTerm::gamma_r(Complex64::new(0.0, 0.0));
        t.weight = Rational64::new(1, 2);
        let k = Kernel::from_terms(vec![t]).unwrap();
        assert_abs_diff_eq!(k.degree().unwrap(), 0.5, epsilon = 0.0);
    }
}
