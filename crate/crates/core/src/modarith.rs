//! Rational twists a/c, their SL2(Z) completions, and Kloosterman / Ramanujan sums.
//!
//! Every form handled here has level 1 and even weight, so the multiplier
//! A(γ) is identically 1 and the form-attached Kloosterman sum is the
//! classical one.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// (g, x, y) with a·x + b·y = g = gcd(a, b) ≥ 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

/// Inverse of `a` modulo `m`, in [0, m), when gcd(a, m) = 1.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The twist α = a/c, reduced: c ≥ 1, 0 ≤ a < c, gcd(a, c) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedRational {
    a: i64,
    c: i64,
}

impl ReducedRational {
    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn zero() -> Self {
        ReducedRational { a: 0, c: 1 }
    }

    pub fn to_f64(&self) -> f64 {
        self.a as f64 / self.c as f64
    }

    /// −α, reduced.
    pub fn neg(&self) -> Self {
        reduce_alpha(-self.a, self.c).expect("denominator is positive")
    }
}

impl fmt::Display for ReducedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.c)
    }
}

impl FromStr for ReducedRational {
    type Err = Error;

    /// Accepts `a/c` or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a rational `a/c`, got `{s}`"));
        let (a, c) = match s.trim().split_once('/') {
            Some((a, c)) => (
                a.trim().parse::<i64>().map_err(|_| bad())?,
                c.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
        };
        reduce_alpha(a, c)
    }
}

pub fn reduce_alpha(a: i64, c: i64) -> Result<ReducedRational> {
    if c == 0 {
        return Err(Error::InvalidTwist { a, c });
    }
    let g = gcd(a, c);
    let (mut a, mut c) = (a / g, c / g);
    if c < 0 {
        a = -a;
        c = -c;
    }
    Ok(ReducedRational {
        a: a.rem_euclid(c),
        c,
    })
}

/// Integers (b, d) with a·d − b·c = 1, completing γ = (a b; c d) ∈ SL2(Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Companion {
    pub b: i64,
    pub d: i64,
}

impl Companion {
    /// The companion shifted along γ ↦ γ·(1 j; 0 1): (b + a·j, d + c·j).
    pub fn shifted(&self, r: &ReducedRational, j: i64) -> Companion {
        Companion {
            b: self.b + r.a * j,
            d: self.d + r.c * j,
        }
    }

    pub fn is_valid_for(&self, r: &ReducedRational) -> bool {
        r.a as i128 * self.d as i128 - self.b as i128 * r.c as i128 == 1
    }
}

/// Canonical companion: 0 ≤ d < c with d ≡ a^{-1} (mod c) for c > 1, and (−1, 0) for c = 1.
pub fn companion(r: &ReducedRational) -> Companion {
    if r.c == 1 {
        return Companion { b: -1, d: 0 };
    }
    let d = mod_inverse(r.a, r.c).expect("a reduced rational has a unit numerator");
    let b = (r.a as i128 * d as i128 - 1) / r.c as i128;
    Companion { b: b as i64, d }
}

/// e^{2πi j/c} for j = 0..c, built by repeated multiplication and resynchronised
/// against the directly evaluated value every max(1, c/16) steps.
pub fn roots_of_unity(c: u64) -> Vec<Complex64> {
    assert!(c >= 1);
    let step = Complex64::from_polar(1.0, TAU / c as f64);
    let resync = (c / 16).max(1);
    let mut out = Vec::with_capacity(c as usize);
    let mut z = Complex64::new(1.0, 0.0);
    for j in 0..c {
        if j % resync == 0 {
            z = Complex64::from_polar(1.0, TAU * j as f64 / c as f64);
        }
        out.push(z);
        z *= step;
    }
    out
}

/// K(m, n; c) = Σ_{a mod c, (a,c)=1} e^{2πi(m·a + n·ā)/c}.
///
/// The sum is real; an imaginary residue above 1e-9·max(1, |K|) is reported
/// as an accuracy error.
pub fn kloosterman(m: i64, n: i64, c: i64) -> Result<f64> {
    if c < 1 {
        return Err(Error::Domain(format!("Kloosterman modulus must be >= 1, got {c}")));
    }
    let roots = roots_of_unity(c as u64);
    let (mm, nn) = (m.rem_euclid(c) as i128, n.rem_euclid(c) as i128);
    let mut re = crate::numeric::Neumaier::new();
    let mut im = crate::numeric::Neumaier::new();
    for a in 0..c {
        if let Some(inv) = mod_inverse(a, c) {
            let j = ((mm * a as i128 + nn * inv as i128) % c as i128) as usize;
            re.add(roots[j].re);
            im.add(roots[j].im);
        }
    }
    let (re, im) = (re.value(), im.value());
    if im.abs() > 1e-9 * re.abs().max(1.0) {
        return Err(Error::Accuracy {
            what: format!("K({m}, {n}; {c}) imaginary part"),
            achieved: im.abs(),
        });
    }
    Ok(re)
}

/// Ramanujan sum c_c(h) = Σ_{(a,c)=1} e^{2πi h a / c}, by direct enumeration.
pub fn ramanujan_sum(c: i64, h: i64) -> Result<f64> {
    kloosterman(h, 0, c)
}

/// Ramanujan sum from the closed form μ(c/g)·φ(c)/φ(c/g), g = gcd(h, c).
pub fn ramanujan_sum_formula(c: u64, h: i64) -> i64 {
    let g = gcd(h, c as i64) as u64;
    let g = if g == 0 { c } else { g };
    mobius(c / g) * (euler_phi(c) / euler_phi(c / g)) as i64
}
