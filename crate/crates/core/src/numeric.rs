//! Floating-point helpers: compensated accumulation, half-integer gamma
//! values, integer-order incomplete gamma, and small fitting utilities.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::AddAssign;

/// Kahan–Babuška–Neumaier running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, keeping both compensation terms.
    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Neumaier {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Neumaier accumulation applied independently to real and imaginary parts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexNeumaier {
    pub re: Neumaier,
    pub im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexNeumaier) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Pairwise reduction whose tree shape depends only on `items.len()`.
///
/// Chunked parallel sums feed their per-chunk partials through this so the
/// combined result is identical for every thread count.
pub fn pairwise_reduce<T: Clone>(items: &[T], identity: T, combine: impl Fn(&T, &T) -> T + Copy) -> T {
    match items.len() {
        0 => identity,
        1 => items[0].clone(),
        n => {
            let mid = n / 2;
            let left = pairwise_reduce(&items[..mid], identity.clone(), combine);
            let right = pairwise_reduce(&items[mid..], identity, combine);
            combine(&left, &right)
        }
    }
}

/// Γ(k + 1/2) for integer k ≥ 0 via Γ(j + 1/2) = (j − 1/2)·Γ(j − 1/2), Γ(1/2) = √π.
pub fn gamma_half_integer(k: u32) -> f64 {
    let mut g = PI.sqrt();
    for j in 1..=k {
        g *= j as f64 - 0.5;
    }
    g
}

/// ln((n)!) by direct summation; n is always small here.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// ln Γ(n, x) for integer n ≥ 1 and x ≥ 0, using the closed form
/// Γ(n, x) = (n−1)!·e^{−x}·Σ_{j<n} x^j / j!.
pub fn ln_upper_gamma_int(n: u32, x: f64) -> f64 {
    assert!(n >= 1, "order must be positive");
    assert!(x >= 0.0, "argument must be non-negative");
    if x == 0.0 {
        return ln_factorial(n - 1);
    }
    let lx = x.ln();
    let mut logs = Vec::with_capacity(n as usize);
    let mut ln_jfact = 0.0;
    for j in 0..n {
        if j > 0 {
            ln_jfact += (j as f64).ln();
        }
        logs.push(j as f64 * lx - ln_jfact);
    }
    ln_factorial(n - 1) - x + log_sum_exp(&logs)
}

pub fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Relative difference |a − b| / |b|, or |a − b| when b = 0.
pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}
