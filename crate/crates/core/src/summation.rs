//! Deterministic pairwise (cascade) summation.

use std::ops::AddAssign;

use num_complex::Complex64;

const BLOCK: usize = 8;

/// Pairwise sum of a slice; the split points depend only on the length.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + Default + AddAssign,
{
    if values.len() <= BLOCK {
        let mut acc = T::default();
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    let mut left = pairwise_sum(&values[..mid]);
    left += pairwise_sum(&values[mid..]);
    left
}

pub fn pairwise_sum_by<T, F>(len: usize, f: F) -> T
where
    T: Copy + Default + AddAssign,
    F: Fn(usize) -> T,
{
    fn rec<T, F>(lo: usize, hi: usize, f: &F) -> T
    where
        T: Copy + Default + AddAssign,
        F: Fn(usize) -> T,
    {
        if hi - lo <= BLOCK {
            let mut acc = T::default();
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        let mut left = rec(lo, mid, f);
        left += rec(mid, hi, f);
        left
    }
    rec(0, len, &f)
}

/// Streaming pairwise accumulator over fixed-length complex vectors.
///
/// Terms are merged like a binary counter: two partial sums are added only
/// when they cover the same number of terms, so the rounding pattern is the
/// one of a balanced summation tree and depends only on the number of pushes.
#[derive(Debug)]
pub struct VecAccumulator {
    width: usize,
    stack: Vec<(u32, Vec<Complex64>)>,
    pool: Vec<Vec<Complex64>>,
}

impl VecAccumulator {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            stack: Vec::new(),
            pool: Vec::new(),
        }
    }

    /// Adds `scale * values` as one term.
    pub fn push_scaled(&mut self, scale: Complex64, values: &[Complex64]) {
        debug_assert_eq!(values.len(), self.width);
        let mut buf = self
            .pool
            .pop()
            .unwrap_or_else(|| vec![Complex64::default(); self.width]);
        for (b, v) in buf.iter_mut().zip(values) {
            *b = scale * v;
        }
        let mut level = 0u32;
        while let Some((top_level, _)) = self.stack.last() {
            if *top_level != level {
                break;
            }
            let (_, mut top) = self.stack.pop().unwrap();
            for (t, b) in top.iter_mut().zip(&buf) {
                *t += b;
            }
            self.pool.push(buf);
            buf = top;
            level += 1;
        }
        self.stack.push((level, buf));
    }

    pub fn finish(mut self) -> Vec<Complex64> {
        let mut out = match self.stack.pop() {
            Some((_, v)) => v,
            None => return vec![Complex64::default(); self.width],
        };
        while let Some((_, mut below)) = self.stack.pop() {
            for (b, o) in below.iter_mut().zip(&out) {
                *b += o;
            }
            out = below;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sums() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum_by(1000, |i| (i + 1) as f64), 500500.0);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn pairwise_is_more_accurate_than_naive() {
        let n = 1_000_000;
        let v = vec![0.1f64; n];
        let exact = 100_000.0;
        let naive: f64 = v.iter().sum();
        let pw = pairwise_sum(&v);
        assert!((pw - exact).abs() <= (naive - exact).abs());
        assert!((pw - exact).abs() < 1e-8);
    }

    #[test]
    fn accumulator_sums_vectors() {
        let mut acc = VecAccumulator::new(2);
        for i in 0..37 {
            let x = Complex64::new(i as f64, -(i as f64));
            acc.push_scaled(Complex64::new(2.0, 0.0), &[x, Complex64::new(1.0, 0.0)]);
        }
        let out = acc.finish();
        assert_eq!(out[0], Complex64::new(2.0 * 666.0, -2.0 * 666.0));
        assert_eq!(out[1], Complex64::new(74.0, 0.0));
        assert_eq!(VecAccumulator::new(3).finish().len(), 3);
    }
}
