//! Exact integer convolution by number-theoretic transforms over several
//! word-sized primes, recombined with Garner's algorithm.
//!
//! The number of primes is chosen from an a-priori bound on the output
//! coefficients, so the recombined integers are exact, not probabilistic.

use rayon::prelude::*;
use rug::Integer;

use crate::error::{Error, Result};

/// Montgomery arithmetic modulo an odd prime `p < 2^31`, with R = 2^32.
#[derive(Debug, Clone, Copy)]
struct Mont {
    p: u32,
    neg_inv: u32,
    r2: u32,
}

impl Mont {
    fn new(p: u32) -> Self {
        // Newton iteration for p^{-1} mod 2^32.
        let mut inv: u32 = 1;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u64 << 32) % p as u64;
        let r2 = ((r * r) % p as u64) as u32;
        Mont {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(self.neg_inv);
        let u = ((t + m as u64 * self.p as u64) >> 32) as u32;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    #[inline(always)]
    fn to_mont(&self, a: u32) -> u32 {
        self.mul(a, self.r2)
    }

    #[inline(always)]
    fn from_mont(&self, a: u32) -> u32 {
        self.reduce(a as u64)
    }

    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn pow(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for n < 2^32.
pub(crate) fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13] {
        if n % small == 0 {
            return n == small;
        }
    }
    let n64 = n as u64;
    let mut d = n64 - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        if a % n64 == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n64);
        if x == 1 || x == n64 - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n64;
            if x == n64 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NttPrime {
    pub p: u32,
    pub root: u32,
}

fn primitive_root(p: u32) -> u32 {
    let mut m = p - 1;
    let mut factors = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            factors.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&q| pow_mod(g as u64, ((p - 1) / q) as u64, p as u64) != 1)
        })
        .expect("a prime always has a primitive root")
}

/// Primes `p = j·2^log_len + 1 < 2^31`, largest first, found lazily.
pub(crate) fn ntt_primes(log_len: u32) -> impl Iterator<Item = NttPrime> {
    let step = 1u64 << log_len;
    let top = ((1u64 << 31) - 2) / step;
    (1..=top).rev().filter_map(move |j| {
        let p = (j * step + 1) as u32;
        is_prime_u32(p).then(|| NttPrime {
            p,
            root: primitive_root(p),
        })
    })
}

fn transform(a: &mut [u32], mont: &Mont, root: u32, invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let g = mont.to_mont(root);
    let g = if invert {
        mont.pow(g, (mont.p - 2) as u64)
    } else {
        g
    };
    let mut twiddles = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let w_len = mont.pow(g, ((mont.p - 1) as usize / len) as u64);
        twiddles.clear();
        let mut w = mont.to_mont(1);
        for _ in 0..len / 2 {
            twiddles.push(w);
            w = mont.mul(w, w_len);
        }
        for block in a.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(len / 2);
            for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = mont.mul(*y, w);
                *x = mont.add(u, v);
                *y = mont.sub(u, v);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = mont.pow(mont.to_mont(n as u32 % mont.p), (mont.p - 2) as u64);
        for x in a.iter_mut() {
            *x = mont.mul(*x, n_inv);
        }
    }
}

fn residues(src: &[Integer], p: u32, len: usize, mont: &Mont) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for (o, x) in out.iter_mut().zip(src) {
        *o = mont.to_mont(x.mod_u(p));
    }
    out
}

/// Product of `a` and `b` modulo one prime, first `out_len` coefficients, in plain form.
fn convolve_mod(a: &[Integer], b: &[Integer], same: bool, out_len: usize, np: NttPrime, len: usize) -> Vec<u32> {
    let mont = Mont::new(np.p);
    let mut fa = residues(a, np.p, len, &mont);
    transform(&mut fa, &mont, np.root, false);
    if same {
        for x in fa.iter_mut() {
            *x = mont.mul(*x, *x);
        }
    } else {
        let mut fb = residues(b, np.p, len, &mont);
        transform(&mut fb, &mont, np.root, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = mont.mul(*x, *y);
        }
    }
    transform(&mut fa, &mont, np.root, true);
    fa.truncate(out_len);
    for x in fa.iter_mut() {
        *x = mont.from_mont(*x);
    }
    fa
}

fn max_bits(xs: &[Integer]) -> u32 {
    xs.iter().map(|x| x.significant_bits()).max().unwrap_or(0)
}

/// Exact truncated product: the first `out_len` coefficients of `a·b`.
pub(crate) fn multiply(a: &[Integer], b: &[Integer], out_len: usize) -> Result<Vec<Integer>> {
    let same = std::ptr::eq(a, b);
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return Ok(vec![Integer::new(); out_len]);
    }
    let (ba, bb) = (max_bits(a), max_bits(b));
    if ba == 0 || bb == 0 {
        return Ok(vec![Integer::new(); out_len]);
    }
    let terms = a.len().min(b.len()) as u64;
    // |c_n| <= terms * max|a| * max|b| < 2^(ba + bb + bits(terms)); one more bit for the sign.
    let needed_bits = ba as f64 + bb as f64 + (64 - terms.leading_zeros()) as f64 + 1.0;

    let len = (a.len() + b.len() - 1).next_power_of_two().max(2);
    let log_len = len.trailing_zeros();
    let mut chosen = Vec::new();
    let mut bits = 0.0;
    for np in ntt_primes(log_len) {
        if bits > needed_bits {
            break;
        }
        bits += (np.p as f64).log2();
        chosen.push(np);
    }
    if bits <= needed_bits {
        return Err(Error::Capacity(format!(
            "transform length 2^{log_len} supports only {bits:.0} bits but {needed_bits:.0} are required"
        )));
    }

    let out_len_eff = out_len.min(a.len() + b.len() - 1);
    let per_prime: Vec<Vec<u32>> = chosen
        .par_iter()
        .map(|&np| convolve_mod(a, b, same, out_len_eff, np, len))
        .collect();

    let garner = Garner::new(&chosen.iter().map(|np| np.p).collect::<Vec<_>>());
    let mut out: Vec<Integer> = (0..out_len_eff)
        .into_par_iter()
        .with_min_len(4096)
        .map(|i| {
            let v: Vec<u32> = per_prime.iter().map(|r| r[i]).collect();
            garner.reconstruct(&v)
        })
        .collect();
    out.resize(out_len, Integer::new());
    Ok(out)
}

/// Mixed-radix CRT reconstruction into the symmetric range (−M/2, M/2].
struct Garner {
    primes: Vec<u32>,
    // inv[j][i] = p_i^{-1} mod p_j for i < j
    inv: Vec<Vec<u64>>,
    modulus: Integer,
    half: Integer,
}

impl Garner {
    fn new(primes: &[u32]) -> Self {
        let inv = primes
            .iter()
            .enumerate()
            .map(|(j, &pj)| {
                primes[..j]
                    .iter()
                    .map(|&pi| pow_mod(pi as u64 % pj as u64, pj as u64 - 2, pj as u64))
                    .collect()
            })
            .collect();
        let mut modulus = Integer::from(1);
        for &p in primes {
            modulus *= p;
        }
        let half = Integer::from(&modulus >> 1);
        Garner {
            primes: primes.to_vec(),
            inv,
            modulus,
            half,
        }
    }

    fn reconstruct(&self, residues: &[u32]) -> Integer {
        let r = self.primes.len();
        let mut digits = vec![0u64; r];
        for j in 0..r {
            let pj = self.primes[j] as u64;
            let mut x = residues[j] as u64;
            for i in 0..j {
                x = (x + pj - digits[i] % pj) % pj * self.inv[j][i] % pj;
            }
            digits[j] = x;
        }
        let mut acc = Integer::from(digits[r - 1]);
        for j in (0..r - 1).rev() {
            acc *= self.primes[j];
            acc += digits[j];
        }
        if acc > self.half {
            acc -= &self.modulus;
        }
        acc
    }
}
