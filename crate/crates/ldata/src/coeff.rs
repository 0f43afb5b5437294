//! Coefficient sequences and the Dirichlet-series exp/log machinery.
//!
//! An L-datum stores f(n) for 1 <= n <= N. The associated L-function is
//! `L_F(s) = exp(sum_{n>=2} f(n)/log(n) n^{1/2-s}) = sum a(n) n^{-s}`.
//! Logarithmic differentiation turns the exponential into the triangular
//! recursion
//!
//! `a(n) log n = sum_{m | n, m > 1} f(m) sqrt(m) a(n/m)`,
//!
//! which this module implements in both directions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahan;

/// 1-indexed finite sequence of coefficients f(1..N).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeq {
    /// values[k] = f(k+1)
    values: Vec<Complex64>,
}

impl CoefficientSeq {
    /// Builds from 1-indexed values (`values[0]` is f(1)).
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn zero(horizon: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); horizon],
        }
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// f(n), zero beyond the horizon.
    pub fn get(&self, n: usize) -> Complex64 {
        if n == 0 || n > self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[n - 1]
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn f1(&self) -> Complex64 {
        self.get(1)
    }

    pub fn set(&mut self, n: usize, v: Complex64) {
        assert!(n >= 1 && n <= self.values.len());
        self.values[n - 1] = v;
    }

    /// Truncates or zero-extends to the given horizon.
    pub fn resized(&self, horizon: usize) -> Self {
        let mut values = self.values.clone();
        values.resize(horizon, Complex64::new(0.0, 0.0));
        Self { values }
    }

    /// Componentwise weighted sum, on the intersection of horizons.
    pub fn weighted_sum(&self, other: &Self, w_self: f64, w_other: f64) -> Self {
        let n = if self.horizon() == 0 {
            other.horizon()
        } else if other.horizon() == 0 {
            self.horizon()
        } else {
            self.horizon().min(other.horizon())
        };
        let values = (1..=n)
            .map(|k| self.get(k) * w_self + other.get(k) * w_other)
            .collect();
        Self { values }
    }

    /// max over n of |f(n)| (log n)^k, the sampled A1 decay statistic.
    pub fn decay_statistic(&self, k: u32) -> f64 {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| v.norm() * ((i + 1) as f64).ln().powi(k as i32))
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of log(sum_{n<=x} |f(n)|^2) against log x over a
    /// dyadic ladder; the A1 partial-sum growth statistic.
    pub fn square_sum_slope(&self) -> Option<f64> {
        if self.horizon() < 16 {
            return None;
        }
        let mut partial = Vec::with_capacity(self.horizon());
        let mut acc = kahan::Accumulator::new();
        for v in &self.values {
            acc.add(v.norm_sqr());
            partial.push(acc.value());
        }
        let mut pts = Vec::new();
        let mut x = self.horizon();
        while x >= 8 {
            let s = partial[x - 1];
            if s > 0.0 {
                pts.push(((x as f64).ln(), s.ln()));
            }
            x /= 2;
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

/// Dirichlet coefficients a(1..N) of L_F from the log-coefficients f.
///
/// a(1) = 1 and `a(n) log n = sum_{m|n, m>1} f(m) sqrt(m) a(n/m)`.
pub fn dirichlet_coefficients(f: &CoefficientSeq, n_max: usize) -> Result<Vec<Complex64>> {
    if n_max > f.horizon() && f.horizon() > 0 {
        return Err(Error::HorizonTooShort {
            horizon: f.horizon(),
            needed: n_max,
        });
    }
    let mut a = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if n_max == 0 {
        return Ok(Vec::new());
    }
    a[1] = Complex64::new(1.0, 0.0);
    // weights w(m) = f(m) sqrt(m)
    let w: Vec<Complex64> = (0..=n_max)
        .map(|m| {
            if m >= 2 {
                f.get(m) * (m as f64).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    // The recursion consumes a(n/m) values that are already final, so run
    // it in increasing n with a direct divisor enumeration.
    for n in 2..=n_max {
        let mut acc = kahan::ComplexAccumulator::new();
        let mut d = 1usize;
        while d * d <= n {
            if n % d == 0 {
                let e = n / d;
                // divisor pair (d, e); both > 1 contribute via m = d and m = e
                if d > 1 {
                    acc.add(w[d] * a[n / d]);
                }
                if e != d && e > 1 {
                    acc.add(w[e] * a[n / e]);
                }
            }
            d += 1;
        }
        a[n] = acc.value() / (n as f64).ln();
    }
    Ok(a[1..].to_vec())
}

/// Inverse of [`dirichlet_coefficients`]: recovers f from a with a(1) = 1.
pub fn coefficients_log(a: &[Complex64]) -> Result<CoefficientSeq> {
    if a.is_empty() {
        return Ok(CoefficientSeq::new(Vec::new()));
    }
    if (a[0] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::BadLeadingCoefficient(format!("{}", a[0])));
    }
    let n_max = a.len();
    let aa = |n: usize| a[n - 1];
    let mut w = vec![Complex64::new(0.0, 0.0); n_max + 1]; // w(m) = f(m) sqrt m
    let mut f = vec![Complex64::new(0.0, 0.0); n_max];
    for n in 2..=n_max {
        let mut acc = kahan::ComplexAccumulator::new();
        let mut d = 2usize;
        while d * d <= n {
            if n % d == 0 {
                let e = n / d;
                if d < n {
                    acc.add(w[d] * aa(n / d));
                }
                if e != d && e < n {
                    acc.add(w[e] * aa(n / e));
                }
            }
            d += 1;
        }
        // include divisor pair (1, n): m = n contributes w(n) a(1), unknown;
        // solve a(n) log n = acc + w(n) for w(n).
        let wn = aa(n) * (n as f64).ln() - acc.value();
        w[n] = wn;
        f[n - 1] = wn / (n as f64).sqrt();
    }
    Ok(CoefficientSeq::new(f))
}

/// Von Mangoldt function Lambda(n) for n <= horizon, via a smallest-prime
/// -factor sieve.
pub fn von_mangoldt(horizon: usize) -> Vec<f64> {
    let mut spf = vec![0usize; horizon + 1];
    for i in 2..=horizon {
        if spf[i] == 0 {
            let mut j = i;
            while j <= horizon {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    let mut lam = vec![0f64; horizon + 1];
    for n in 2..=horizon {
        let p = spf[n];
        // n is a prime power iff dividing out p repeatedly reaches 1
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            lam[n] = (p as f64).ln();
        }
    }
    lam
}
