//! Compensated summation with a deterministic parallel reduction.
//!
//! All zero sums and coefficient sums in this crate go through these
//! helpers so that results are bit-identical regardless of the rayon
//! thread count: values are accumulated per fixed-size chunk in index
//! order, and the chunk totals are folded sequentially.

use num_complex::Complex64;
use rayon::prelude::*;

/// Neumaier variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex compensated accumulator (componentwise Neumaier).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexAccumulator {
    re: Accumulator,
    im: Accumulator,
}

impl ComplexAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator, sequential.
pub fn sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Accumulator::new();
    for v in iter {
        acc.add(v);
    }
    acc.value()
}

/// Compensated complex sum, sequential.
pub fn csum<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    let mut acc = ComplexAccumulator::new();
    for v in iter {
        acc.add(v);
    }
    acc.value()
}

/// Chunk size for the deterministic parallel reduction. Fixed so that the
/// partial sums (and hence the rounding) do not depend on the thread count.
const CHUNK: usize = 1024;

/// Deterministic parallel map-sum: applies `f` to each item of the slice and
/// sums the results. The output is identical for any number of threads.
pub fn par_map_sum<T: Sync, F>(items: &[T], f: F) -> f64
where
    F: Fn(&T) -> f64 + Sync,
{
    let partials: Vec<f64> = items
        .par_chunks(CHUNK)
        .map(|chunk| sum(chunk.iter().map(&f)))
        .collect();
    sum(partials)
}

/// Deterministic parallel complex map-sum.
pub fn par_map_csum<T: Sync, F>(items: &[T], f: F) -> Complex64
where
    F: Fn(&T) -> Complex64 + Sync,
{
    let partials: Vec<Complex64> = items
        .par_chunks(CHUNK)
        .map(|chunk| csum(chunk.iter().map(&f)))
        .collect();
    csum(partials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_beats_naive() {
        // 1 + 1e16 * eps-sized crumbs: naive summation loses them entirely.
        let mut naive = 1.0_f64;
        let mut acc = Accumulator::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            naive += 1e-17;
            acc.add(1e-17);
        }
        assert_eq!(naive, 1.0);
        assert!((acc.value() - (1.0 + 1e-13)).abs() < 1e-16);
    }

    #[test]
    fn par_sum_matches_sequential_and_is_thread_invariant() {
        let xs: Vec<f64> = (0..50_000)
            .map(|i| ((i as f64) * 0.7).sin() / ((i + 1) as f64))
            .collect();
        let seq = sum(xs.iter().copied());
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap();
        let p1 = pool1.install(|| par_map_sum(&xs, |x| *x));
        let p8 = pool8.install(|| par_map_sum(&xs, |x| *x));
        assert_eq!(p1.to_bits(), p8.to_bits());
        assert!((p1 - seq).abs() < 1e-12);
    }
}
