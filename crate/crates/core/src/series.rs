//! Truncated evaluation of Σ_{n≥1} w(n) a_n e^{−g(n)} for periodic weights w
//! and kernels g(n) = s√n or λn, with a certified truncation tail and a
//! rounding-error model that drives adaptive working precision.
//!
//! The tail bounds use only |w| ≤ 1 and the Hecke-type bound |a_n| ≤ C n^{k/2}:
//!
//! - g = s√n: Σ_{n>N} n^{k/2} e^{−σ√n} ≤ 2σ^{−(k+2)} Γ(k+2, σ√N) once √N ≥ k/σ;
//! - g = λn:  Σ_{n>N} n^{k/2} e^{−λn} ≤ λ^{−(k/2+1)} Γ(k/2+1, λN) once N ≥ k/(2λ).
//!
//! Both follow from comparing the (then decreasing) summand with its integral.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::genseries::SeriesEval;
use crate::modarith::roots_of_unity;
use crate::numeric::{ln_upper_gamma_int, ComplexNeumaier};
use crate::qseries::CuspForm;

const F64_UNIT: f64 = f64::EPSILON / 2.0;
const MAX_PRECISION: u32 = 2048;
const BATCH: usize = 1024;
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    /// e^{−s√n}
    Sqrt(Complex64),
    /// e^{−λn} with real λ > 0
    Linear(f64),
}

impl Kernel {
    /// |g(n)|, which governs the relative rounding error of a computed term.
    fn magnitude(&self, n: usize) -> f64 {
        match *self {
            Kernel::Sqrt(s) => s.norm() * (n as f64).sqrt(),
            Kernel::Linear(l) => l * n as f64,
        }
    }

    /// Smallest N from which the tail majorant is valid.
    fn tail_start(&self, k: u32) -> usize {
        match *self {
            Kernel::Sqrt(s) => ((k as f64 / s.re).powi(2)).ceil() as usize,
            Kernel::Linear(l) => (k as f64 / (2.0 * l)).ceil() as usize,
        }
        .max(1)
    }

    /// Certified bound on Σ_{n>N} C n^{k/2} |e^{−g(n)}|, or +∞ before the valid range.
    pub(crate) fn tail(&self, hecke: f64, k: u32, n: usize) -> f64 {
        if n < self.tail_start(k) {
            return f64::INFINITY;
        }
        let ln = match *self {
            Kernel::Sqrt(s) => {
                let sigma = s.re;
                2f64.ln() - (k as f64 + 2.0) * sigma.ln() + ln_upper_gamma_int(k + 2, sigma * (n as f64).sqrt())
            }
            Kernel::Linear(l) => -(k as f64 / 2.0 + 1.0) * l.ln() + ln_upper_gamma_int(k / 2 + 1, l * n as f64),
        };
        hecke * ln.exp()
    }
}

/// Periodic coefficient weights w(n) depending on n mod period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Weights {
    /// e^{2πi·num·n/den}
    Twist { num: i64, den: i64 },
    /// cos(2π·num·n/den)
    RealTwist { num: i64, den: i64 },
    /// 1 if n ≡ h (mod q), else 0
    Residue { q: i64, h: i64 },
}

impl Weights {
    fn period(&self) -> usize {
        match *self {
            Weights::Twist { den, .. } | Weights::RealTwist { den, .. } => den as usize,
            Weights::Residue { q, .. } => q as usize,
        }
    }

    /// Index j of e^{2πi j/den} used for residue r.
    fn phase_index(num: i64, den: i64, r: usize) -> usize {
        ((num as i128 * r as i128).rem_euclid(den as i128)) as usize
    }

    fn table_f64(&self) -> Vec<Complex64> {
        match *self {
            Weights::Twist { num, den } => {
                let roots = roots_of_unity(den as u64);
                (0..den as usize).map(|r| roots[Self::phase_index(num, den, r)]).collect()
            }
            Weights::RealTwist { num, den } => {
                let roots = roots_of_unity(den as u64);
                (0..den as usize)
                    .map(|r| Complex64::new(roots[Self::phase_index(num, den, r)].re, 0.0))
                    .collect()
            }
            Weights::Residue { q, h } => (0..q)
                .map(|r| {
                    if r == h.rem_euclid(q) {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect(),
        }
    }

    fn table_mp(&self, prec: u32) -> Vec<Option<(Float, Float)>> {
        let unit = |num: i64, den: i64, r: usize| -> (Float, Float) {
            let j = Self::phase_index(num, den, r);
            let angle = Float::with_val(prec, Constant::Pi) * 2u32 * j as u64 / den as u64;
            let (sin, cos) = angle.sin_cos(Float::new(prec));
            (cos, sin)
        };
        match *self {
            Weights::Twist { num, den } => (0..den as usize).map(|r| Some(unit(num, den, r))).collect(),
            Weights::RealTwist { num, den } => (0..den as usize)
                .map(|r| {
                    let (c, _) = unit(num, den, r);
                    Some((c, Float::new(prec)))
                })
                .collect(),
            Weights::Residue { q, h } => (0..q)
                .map(|r| (r == h.rem_euclid(q)).then(|| (Float::with_val(prec, 1), Float::new(prec))))
                .collect(),
        }
    }
}

struct Run {
    value: Complex64,
    terms: usize,
    tail: f64,
    rounding: f64,
}

enum Outcome {
    Done(Run),
    Exhausted { trustworthy: bool },
}

/// Evaluates the weighted series to relative tolerance `tol`, escalating the
/// working precision until the rounding model is also below tol·|value|.
pub(crate) fn evaluate(form: &CuspForm, kernel: Kernel, weights: Weights, tol: f64) -> Result<SeriesEval> {
    evaluate_with(form, kernel, weights, tol, None)
}

/// The finite sum over n ≤ terms, with the same precision control.
pub(crate) fn evaluate_finite(form: &CuspForm, kernel: Kernel, weights: Weights, terms: usize, tol: f64) -> Result<SeriesEval> {
    form.ensure_coverage(terms)?;
    if terms == 0 {
        return Ok(SeriesEval {
            value: Complex64::new(0.0, 0.0),
            terms_used: 0,
            tail_bound: 0.0,
            rounding_bound: 0.0,
            precision_bits: 53,
            warnings: Vec::new(),
        });
    }
    evaluate_with(form, kernel, weights, tol, Some(terms))
}

fn evaluate_with(form: &CuspForm, kernel: Kernel, weights: Weights, tol: f64, fixed: Option<usize>) -> Result<SeriesEval> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut prec = 53u32;
    loop {
        let outcome = if prec == 53 {
            run_f64(form, kernel, weights, tol, fixed)
        } else {
            run_mp(form, kernel, weights, tol, prec, fixed)
        };
        match outcome {
            Outcome::Done(run) => {
                let target = tol * run.value.norm();
                if run.rounding <= target || (run.value.norm() == 0.0 && run.rounding == 0.0) {
                    return Ok(SeriesEval {
                        value: run.value,
                        terms_used: run.terms,
                        tail_bound: run.tail,
                        rounding_bound: run.rounding,
                        precision_bits: prec,
                        warnings: Vec::new(),
                    });
                }
                let deficit = if run.rounding < run.value.norm() {
                    (run.rounding / target).log2().ceil() as u32 + 16
                } else {
                    64
                };
                prec = prec.max(64) + deficit.max(32);
            }
            Outcome::Exhausted { trustworthy: true, .. } => {
                let sigma = match kernel {
                    Kernel::Sqrt(s) => Some(s.re),
                    Kernel::Linear(_) => None,
                };
                return Err(Error::Coverage {
                    needed: form.order() + 1,
                    available: form.order(),
                    sigma,
                });
            }
            Outcome::Exhausted { trustworthy: false, .. } => prec = prec.max(64) + 64,
        }
        if prec > MAX_PRECISION {
            return Err(Error::Accuracy {
                what: "series evaluation".into(),
                achieved: f64::NAN,
            });
        }
    }
}

/// Tracks the stopping rule: the first n with tail(n) ≤ tol·|S_n|.
struct Stopper<'a> {
    fixed: Option<usize>,
    form: &'a CuspForm,
    kernel: Kernel,
    tol: f64,
    start: usize,
    block_hi: f64,
    block_lo: f64,
    block_end: usize,
}

impl<'a> Stopper<'a> {
    fn new(form: &'a CuspForm, kernel: Kernel, tol: f64, fixed: Option<usize>) -> Self {
        Stopper {
            fixed,
            form,
            kernel,
            tol,
            start: kernel.tail_start(form.weight()),
            block_hi: f64::INFINITY,
            block_lo: f64::INFINITY,
            block_end: 0,
        }
    }

    fn tail(&self, n: usize) -> f64 {
        self.kernel.tail(self.form.hecke_constant(), self.form.weight(), n)
    }

    fn should_stop(&mut self, n: usize, partial_norm: f64) -> Option<f64> {
        if let Some(last) = self.fixed {
            return (n >= last).then_some(0.0);
        }
        if n < self.start {
            return None;
        }
        if n > self.block_end {
            self.block_end = n + BLOCK - 1;
            self.block_hi = self.tail(n);
            self.block_lo = self.tail(self.block_end);
        }
        let budget = self.tol * partial_norm;
        if budget < self.block_lo {
            return None;
        }
        if budget >= self.block_hi {
            return Some(self.block_hi);
        }
        let t = self.tail(n);
        (t <= budget).then_some(t)
    }
}

fn term_f64(kernel: Kernel, n: usize, a: f64, w: Complex64) -> Complex64 {
    let e = match kernel {
        Kernel::Sqrt(s) => {
            let r = (n as f64).sqrt();
            let (sin, cos) = (s.im * r).sin_cos();
            (-s.re * r).exp() * Complex64::new(cos, -sin)
        }
        Kernel::Linear(l) => Complex64::new((-l * n as f64).exp(), 0.0),
    };
    w * a * e
}

fn run_f64(form: &CuspForm, kernel: Kernel, weights: Weights, tol: f64, fixed: Option<usize>) -> Outcome {
    let table = weights.table_f64();
    let period = weights.period();
    let mut stopper = Stopper::new(form, kernel, tol, fixed);
    let mut acc = ComplexNeumaier::new();
    let mut abs_sum = 0.0;
    let mut term_err = 0.0;
    let order = fixed.unwrap_or(form.order());
    let mut n0 = 1;
    while n0 <= order {
        let n1 = (n0 + BATCH).min(order + 1);
        let terms: Vec<Complex64> = (n0..n1)
            .into_par_iter()
            .with_min_len(BLOCK)
            .map(|n| {
                let w = table[n % period];
                let a = form.a_f64(n);
                if a == 0.0 || w == Complex64::new(0.0, 0.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    term_f64(kernel, n, a, w)
                }
            })
            .collect();
        for (i, t) in terms.into_iter().enumerate() {
            let n = n0 + i;
            acc.add(t);
            let mag = t.norm();
            abs_sum += mag;
            term_err += (16.0 + 4.0 * kernel.magnitude(n)) * F64_UNIT * mag;
            let partial = acc.value();
            if let Some(tail) = stopper.should_stop(n, partial.norm()) {
                let rounding = term_err + 2.0 * F64_UNIT * partial.norm() + 2.0 * n as f64 * F64_UNIT * F64_UNIT * abs_sum;
                return Outcome::Done(Run {
                    value: partial,
                    terms: n,
                    tail,
                    rounding,
                });
            }
        }
        n0 = n1;
    }
    Outcome::Exhausted {
        trustworthy: term_err < 0.5 * acc.value().norm(),
    }
}

fn run_mp(form: &CuspForm, kernel: Kernel, weights: Weights, tol: f64, prec: u32, fixed: Option<usize>) -> Outcome {
    let table = weights.table_mp(prec);
    let period = weights.period();
    let unit = (-(prec as f64)).exp2();
    let mut stopper = Stopper::new(form, kernel, tol, fixed);
    let mut re = Float::new(prec);
    let mut im = Float::new(prec);
    let mut abs_sum = 0.0;
    let mut term_err = 0.0;
    let order = fixed.unwrap_or(form.order());
    let mut n0 = 1;
    while n0 <= order {
        let n1 = (n0 + BATCH).min(order + 1);
        let terms: Vec<Option<(Float, Float)>> = (n0..n1)
            .into_par_iter()
            .with_min_len(BLOCK / 4)
            .map(|n| {
                let w = table[n % period].as_ref()?;
                let a = form.a(n);
                if *a == 0 {
                    return None;
                }
                Some(term_mp(kernel, n, a, w, prec))
            })
            .collect();
        for (i, t) in terms.into_iter().enumerate() {
            let n = n0 + i;
            if let Some((tr, ti)) = t {
                let mag = tr.to_f64().hypot(ti.to_f64());
                abs_sum += mag;
                term_err += (16.0 + 4.0 * kernel.magnitude(n)) * unit * mag;
                re += tr;
                im += ti;
            }
            let partial = Complex64::new(re.to_f64(), im.to_f64());
            if let Some(tail) = stopper.should_stop(n, partial.norm()) {
                return Outcome::Done(Run {
                    value: partial,
                    terms: n,
                    tail,
                    rounding: term_err + (n as f64 + 1.0) * unit * abs_sum,
                });
            }
        }
        n0 = n1;
    }
    let value = Complex64::new(re.to_f64(), im.to_f64()).norm();
    Outcome::Exhausted {
        trustworthy: term_err + order as f64 * unit * abs_sum < 0.5 * value,
    }
}

fn term_mp(kernel: Kernel, n: usize, a: &rug::Integer, w: &(Float, Float), prec: u32) -> (Float, Float) {
    let (mag, cos, sin) = match kernel {
        Kernel::Sqrt(s) => {
            let r = Float::with_val(prec, n as u64).sqrt();
            let mag = Float::with_val(prec, -s.re * &r).exp();
            let angle = Float::with_val(prec, s.im * &r);
            let (sin, cos) = angle.sin_cos(Float::new(prec));
            (mag, cos, -sin)
        }
        Kernel::Linear(l) => {
            let x = Float::with_val(prec, -l) * n as u64;
            (x.exp(), Float::with_val(prec, 1), Float::new(prec))
        }
    };
    let scaled = mag * Float::with_val(prec, a);
    let er = Float::with_val(prec, &scaled * &cos);
    let ei = Float::with_val(prec, &scaled * &sin);
    let (wr, wi) = w;
    let tr = Float::with_val(prec, &er * wr) - Float::with_val(prec, &ei * wi);
    let ti = Float::with_val(prec, &er * wi) + Float::with_val(prec, &ei * wr);
    (tr, ti)
}
