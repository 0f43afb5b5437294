//! Smooth compactly supported test functions and their entire transforms
//! h(z) = int g(x) e^{izx} dx.
//!
//! Two families are provided: scaled copies of the standard mollifier
//! g0(x) = exp(1 - 1/(1-x^2)) and the modulated two-bump pairs
//! g(x) = e^{i theta} g0(T(x-x0)) + e^{-i theta} g0(T(x+x0)) used for
//! coefficient recovery, whose transform has the closed form
//! h(z) = 2 T^{-1} cos(theta + x0 z) h0(z/T).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahan;
use crate::quad;

/// Default bound on |Im z| for transform evaluation (the integrand grows
/// like e^{|Im z| X}).
pub const DEFAULT_STRIP_BOUND: f64 = 1.0;

/// int_{-1}^{1} g0, frozen from an independent high-precision quadrature.
pub const BUMP_INTEGRAL: f64 = 1.206_900_322_437_876_2;

/// The base bump: even, smooth, supported on [-1, 1], g0(0) = 1.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

type GFun = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
type HFun = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A test function g together with its transform h.
#[derive(Clone)]
pub struct TestPair {
    g: GFun,
    /// Closed-form h, when one exists; otherwise h is computed by
    /// quadrature of g.
    h_closed: Option<HFun>,
    support: f64,
    admissible: bool,
    strip_bound: f64,
    label: String,
}

impl std::fmt::Debug for TestPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestPair")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("admissible", &self.admissible)
            .finish()
    }
}

/// Oscillation-aware Fourier quadrature over [-X, X]: fixed Gauss-Kronrod
/// panels sized against the frequency |Re z|, then doubling passes until
/// the summed error estimate converges.
fn fourier_quadrature(g: &GFun, x_radius: f64, z: Complex64) -> (Complex64, f64) {
    let weight = |x: f64| (Complex64::new(0.0, 1.0) * z * x).exp();
    let mut panels = ((z.re.abs() * x_radius / 3.0).ceil() as usize).clamp(8, 4096);
    let mut last: Option<Complex64> = None;
    loop {
        let h = 2.0 * x_radius / panels as f64;
        let mut acc = kahan::ComplexAccumulator::new();
        let mut err = kahan::Accumulator::new();
        for i in 0..panels {
            let a = -x_radius + i as f64 * h;
            let (v, e) = quad::qk15(&|x| g(x) * weight(x), a, a + h);
            acc.add(v);
            err.add(e);
        }
        let value = acc.value();
        let e = err.value();
        if e <= 1e-13 * (1.0 + value.norm()) || panels >= 16384 {
            return (value, e);
        }
        if let Some(prev) = last {
            if (prev - value).norm() <= 1e-13 * (1.0 + value.norm()) {
                return (value, (prev - value).norm());
            }
        }
        last = Some(value);
        panels *= 2;
    }
}

impl TestPair {
    /// Scaled bump pair: g(x) = g0(x / radius), h(z) = radius h0(radius z).
    pub fn bump_pair(radius: f64) -> Self {
        assert!(radius > 0.0, "support radius must be positive");
        let g: GFun = Arc::new(move |x| Complex64::new(bump(x / radius), 0.0));
        Self {
            g,
            h_closed: None,
            support: radius,
            admissible: true,
            strip_bound: DEFAULT_STRIP_BOUND,
            label: format!("bump:X={radius}"),
        }
    }

    /// Modulated pair at center x0 with window scale T and phase theta.
    ///
    /// Both g and h are closed forms; h(z) = 2 T^{-1} cos(theta + x0 z)
    /// h0(z/T) with h0 evaluated by quadrature of the base bump.
    pub fn modulated_pair(theta: f64, x0: f64, t_scale: f64) -> Self {
        assert!(x0 > 0.0 && t_scale > 0.0);
        let g: GFun = Arc::new(move |x| {
            let e_plus = Complex64::from_polar(1.0, theta);
            let e_minus = Complex64::from_polar(1.0, -theta);
            e_plus * bump(t_scale * (x - x0)) + e_minus * bump(t_scale * (x + x0))
        });
        let base: GFun = Arc::new(|x| Complex64::new(bump(x), 0.0));
        let h: HFun = Arc::new(move |z| {
            let (h0, _) = fourier_quadrature(&base, 1.0, z / t_scale);
            let phase = Complex64::new(theta, 0.0) + z * x0;
            2.0 / t_scale * phase.cos() * h0
        });
        Self {
            g,
            h_closed: Some(h),
            support: x0 + 1.0 / t_scale,
            admissible: true,
            strip_bound: DEFAULT_STRIP_BOUND,
            label: format!("modpair:theta={theta},x0={x0},T={t_scale}"),
        }
    }

    /// Parses a CLI test-function spec: `bump:X=4` or
    /// `modpair:theta=0,x0=0.6931,T=20`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::DomainError(format!("bad test function spec '{spec}'")))?;
        let mut kv = std::collections::BTreeMap::new();
        for part in rest.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::DomainError(format!("bad key=value '{part}' in '{spec}'"))
            })?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::DomainError(format!("bad number '{v}' in '{spec}'")))?;
            kv.insert(k.trim().to_string(), v);
        }
        match kind {
            "bump" => {
                let x = *kv
                    .get("X")
                    .ok_or_else(|| Error::DomainError("bump spec needs X".into()))?;
                Ok(Self::bump_pair(x))
            }
            "modpair" => {
                let theta = kv.get("theta").copied().unwrap_or(0.0);
                let x0 = *kv
                    .get("x0")
                    .ok_or_else(|| Error::DomainError("modpair spec needs x0".into()))?;
                let t = *kv
                    .get("T")
                    .ok_or_else(|| Error::DomainError("modpair spec needs T".into()))?;
                Ok(Self::modulated_pair(theta, x0, t))
            }
            other => Err(Error::DomainError(format!(
                "unknown test function kind '{other}'"
            ))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Support radius X: g vanishes outside [-X, X].
    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn admissible(&self) -> bool {
        self.admissible
    }

    pub fn strip_bound(&self) -> f64 {
        self.strip_bound
    }

    pub fn g(&self, x: f64) -> Complex64 {
        (self.g)(x)
    }

    /// g'(0), used for the singularity removal in the arithmetic side.
    pub fn g_prime_at_zero(&self) -> Complex64 {
        let h = 1e-5;
        ((self.g)(h) - (self.g)(-h)) / (2.0 * h)
    }

    /// h(z) with an absolute error estimate.
    pub fn transform(&self, z: Complex64) -> Result<(Complex64, f64)> {
        if z.im.abs() > self.strip_bound {
            return Err(Error::StripExceeded(z.im.abs(), self.strip_bound));
        }
        match &self.h_closed {
            Some(h) => Ok((h(z), 1e-13)),
            None => Ok(fourier_quadrature(&self.g, self.support, z)),
        }
    }

    /// h(z) by direct quadrature of g, ignoring any closed form (used for
    /// cross-validation).
    pub fn transform_by_quadrature(&self, z: Complex64) -> Result<(Complex64, f64)> {
        if z.im.abs() > self.strip_bound {
            return Err(Error::StripExceeded(z.im.abs(), self.strip_bound));
        }
        Ok(fourier_quadrature(&self.g, self.support, z))
    }

    /// Fits the empirical tail envelope |h(t)| <= exp(b0 - b1 sqrt t) on a
    /// real grid. Returns (b0, b1); used for honest spectral tail budgets.
    pub fn tail_envelope(&self) -> Option<(f64, f64)> {
        let x = self.support;
        let w_lo = 15.0 / x;
        let w_hi = 320.0 / x;
        let n = 48;
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let ratio: f64 = (w_hi / w_lo).powf(1.0 / (n - 1) as f64);
        let mut t = w_lo;
        let mut block_max: f64 = 0.0;
        let mut block_t = t;
        for i in 0..n {
            if let Ok((h, _)) = self.transform(Complex64::new(t, 0.0)) {
                if h.norm() > block_max {
                    block_max = h.norm();
                    block_t = t;
                }
            }
            if (i + 1) % 6 == 0 {
                if block_max > 1e-280 {
                    pts.push((block_t.sqrt(), block_max.ln()));
                }
                block_max = 0.0;
            }
            t *= ratio;
        }
        if pts.len() < 3 {
            return None;
        }
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = m * sxx - sx * sx;
        if denom.abs() < 1e-12 {
            return None;
        }
        let slope = (m * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / m;
        if slope >= 0.0 {
            return None;
        }
        // safety factor 5 on the envelope
        Some((intercept + 5f64.ln(), -slope))
    }

    /// Integral of the fitted envelope over [t, infinity):
    /// int e^{b0 - b1 sqrt u} du = 2 e^{b0} (1 + b1 sqrt t) e^{-b1 sqrt t} / b1^2.
    pub fn tail_envelope_integral(&self, t: f64) -> Option<f64> {
        let (b0, b1) = self.tail_envelope()?;
        let rt = t.sqrt();
        Some(2.0 * b0.exp() * (1.0 + b1 * rt) * (-b1 * rt).exp() / (b1 * b1))
    }

    /// Sampled self-checks: smoothness of g (bounded divided differences up
    /// to order 6) and Hermitian symmetry g(-x) = conj g(x); refreshes the
    /// admissibility flag.
    pub fn self_check(&mut self) -> bool {
        let n = 257;
        let xs: Vec<f64> = (0..n)
            .map(|i| -self.support + 2.0 * self.support * i as f64 / (n - 1) as f64)
            .collect();
        let mut sym_ok = true;
        for &x in &xs {
            if ((self.g)(-x) - (self.g)(x).conj()).norm() > 1e-10 {
                sym_ok = false;
                break;
            }
        }
        let mut vals: Vec<Complex64> = xs.iter().map(|&x| (self.g)(x)).collect();
        let h = xs[1] - xs[0];
        let mut smooth_ok = true;
        for order in 1..=6 {
            for i in 0..vals.len() - 1 {
                vals[i] = (vals[i + 1] - vals[i]) / h;
            }
            vals.pop();
            let max = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
            // divided differences of a fixed smooth bump grow roughly like
            // (c/X)^k; anything wildly beyond flags a rough evaluator
            if max > (50.0 / self.support).powi(order) * 1e3 {
                smooth_ok = false;
            }
        }
        self.admissible = sym_ok;
        sym_ok && smooth_ok
    }
}
