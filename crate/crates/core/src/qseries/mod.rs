//! Exact integer q-expansions of level-1 modular forms.
//!
//! [`IntSeries`] holds a truncated power series with arbitrary-precision
//! coefficients. The basis expansions (η, E4, E6) are built from their
//! closed coefficient formulas, and products go through an exact
//! multi-modular convolution. [`niebur_tau`] is an independent route to
//! τ(n) that never touches series arithmetic.

mod form;
mod ntt;

pub use form::{form_coeffs, rankin_ratio, CuspForm, Recipe, RecipeTerm};

use rug::Integer;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Below this length products are done by schoolbook multiplication.
const SCHOOLBOOK_LIMIT: usize = 64;

/// Truncated power series Σ_{i≤N} c_i q^i with exact integer coefficients.
///
/// The coefficient vector always has length `order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<Integer>,
}

impl IntSeries {
    pub fn zero(order: usize) -> Self {
        IntSeries {
            coeffs: vec![Integer::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Integer::from(1);
        s
    }

    /// Builds a series from coefficients of q^0..q^N; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant coefficient");
        IntSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Integer {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Truncates (or zero-extends) to the given order.
    pub fn with_order(mut self, order: usize) -> Self {
        self.coeffs.resize(order + 1, Integer::new());
        self
    }

    /// Multiplies by q^k, dropping terms beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        if k <= n {
            out.coeffs[k..].clone_from_slice(&self.coeffs[..=n - k]);
        }
        out
    }

    pub fn scale(&self, c: &Integer) -> Self {
        IntSeries {
            coeffs: self.coeffs.iter().map(|x| Integer::from(x * c)).collect(),
        }
    }

    /// Exact product truncated to the smaller of the two orders.
    pub fn checked_mul(&self, other: &IntSeries) -> Result<IntSeries> {
        let order = self.order().min(other.order());
        if self.coeffs.len().min(other.coeffs.len()) <= SCHOOLBOOK_LIMIT {
            return Ok(self.mul_schoolbook(other));
        }
        let out = if std::ptr::eq(self, other) {
            ntt::multiply(&self.coeffs, &self.coeffs, order + 1)?
        } else {
            ntt::multiply(&self.coeffs, &other.coeffs, order + 1)?
        };
        Ok(IntSeries { coeffs: out })
    }

    /// Quadratic-time product; the reference the fast path is tested against.
    pub fn mul_schoolbook(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += Integer::from(a * b);
            }
        }
        out
    }

    /// Exact integer power by repeated squaring.
    pub fn checked_pow(&self, mut e: u32) -> Result<IntSeries> {
        let mut acc = IntSeries::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> IntSeries {
        self.checked_pow(e).expect("series power exceeds exact multiplication capacity")
    }

    fn zip_with(&self, other: &IntSeries, f: impl Fn(&Integer, &Integer) -> Integer) -> IntSeries {
        let order = self.order().min(other.order());
        IntSeries {
            coeffs: self.coeffs[..=order]
                .iter()
                .zip(&other.coeffs[..=order])
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &IntSeries {
    type Output = IntSeries;
    fn add(self, rhs: &IntSeries) -> IntSeries {
        self.zip_with(rhs, |a, b| Integer::from(a + b))
    }
}

impl Sub for &IntSeries {
    type Output = IntSeries;
    fn sub(self, rhs: &IntSeries) -> IntSeries {
        self.zip_with(rhs, |a, b| Integer::from(a - b))
    }
}

impl Neg for &IntSeries {
    type Output = IntSeries;
    fn neg(self) -> IntSeries {
        IntSeries {
            coeffs: self.coeffs.iter().map(|x| Integer::from(-x)).collect(),
        }
    }
}

impl Mul for &IntSeries {
    type Output = IntSeries;
    fn mul(self, rhs: &IntSeries) -> IntSeries {
        self.checked_mul(rhs)
            .expect("series product exceeds exact multiplication capacity")
    }
}

/// Exponents of the pentagonal numbers k(3k−1)/2, k ∈ Z, up to `order`, with signs (−1)^k.
pub fn pentagonal_terms(order: usize) -> Vec<(usize, i32)> {
    let mut out = vec![(0usize, 1i32)];
    let mut k: u64 = 1;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let e1 = (k * (3 * k - 1) / 2) as usize;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e1 > order {
            break;
        }
        out.push((e1, sign));
        if e2 <= order {
            out.push((e2, sign));
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

/// q-expansion of Π_{n≥1}(1 − q^n) to order N, from the pentagonal number theorem.
pub fn eta_coeffs(order: usize) -> IntSeries {
    let mut s = IntSeries::zero(order);
    for (e, sign) in pentagonal_terms(order) {
        s.coeffs[e] = Integer::from(sign);
    }
    s
}

/// σ_p(n) for 0 ≤ n ≤ N by a divisor sieve (σ_p(0) is reported as 0).
pub fn divisor_power_sums(order: usize, power: u32) -> Vec<Integer> {
    let mut sig = vec![0u128; order + 1];
    for d in 1..=order {
        let dp = (d as u128).pow(power);
        let mut m = d;
        while m <= order {
            sig[m] += dp;
            m += d;
        }
    }
    sig.into_iter().map(Integer::from).collect()
}

/// Normalized Eisenstein series E4 = 1 + 240 Σ σ3(n) q^n or E6 = 1 − 504 Σ σ5(n) q^n.
pub fn eisenstein_coeffs(weight: u32, order: usize) -> Result<IntSeries> {
    let (factor, power) = match weight {
        4 => (240i32, 3),
        6 => (-504i32, 5),
        w => return Err(Error::UnsupportedWeight(w as i64)),
    };
    let mut coeffs = divisor_power_sums(order, power);
    coeffs[0] = Integer::from(1);
    for c in coeffs.iter_mut().skip(1) {
        *c *= factor;
    }
    Ok(IntSeries { coeffs })
}

/// σ1(n) for every n ≤ N.
fn sigma1_table(n: usize) -> Vec<u64> {
    let mut sig = vec![0u64; n + 1];
    for d in 1..=n {
        let mut m = d;
        while m <= n {
            sig[m] += d as u64;
            m += d;
        }
    }
    sig
}

/// τ(n) by Niebur's divisor-sum identity
/// τ(n) = n^4 σ(n) − 24 Σ_{m<n} m²(35m² − 52mn + 18n²) σ(m) σ(n−m).
pub fn niebur_tau(n: u64) -> Result<Integer> {
    if n < 1 {
        return Err(Error::Domain("niebur_tau requires n >= 1".into()));
    }
    let sig = sigma1_table(n as usize);
    Ok(niebur_with_table(n, &sig))
}

fn niebur_with_table(n: u64, sig: &[u64]) -> Integer {
    let nn = Integer::from(n);
    let mut acc = Integer::new();
    for m in 1..n {
        let mi = Integer::from(m);
        let mut poly = Integer::from(35u32) * &mi * &mi;
        poly -= Integer::from(52u32) * &mi * &nn;
        poly += Integer::from(18u32) * &nn * &nn;
        poly *= Integer::from(&mi * &mi);
        poly *= sig[m as usize];
        poly *= sig[(n - m) as usize];
        acc += poly;
    }
    let mut tau = Integer::from(&nn * &nn).square() * sig[n as usize];
    tau -= acc * 24u32;
    tau
}

/// τ(1..=n) by the Niebur identity, sharing one σ table.
pub fn niebur_tau_table(n: u64) -> Vec<Integer> {
    let sig = sigma1_table(n as usize);
    (1..=n).map(|m| niebur_with_table(m, &sig)).collect()
}

/// Number of divisors, by trial division.
pub fn divisor_count(n: u64) -> u64 {
    let mut count = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}
