//! Twisted partial sums, progression sums and oscillation scans.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{reduce_alpha, roots_of_unity, ReducedRational};
use crate::numeric::{pairwise_reduce, ComplexNeumaier, Neumaier};
use crate::qseries::CuspForm;

const CHUNK: usize = 1 << 14;

/// One partial sum S(x, α) together with Re S / x^θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumRecord {
    pub x: f64,
    pub value: Complex64,
    pub normalized: f64,
    pub theta: f64,
}

impl SumRecord {
    pub fn new(x: f64, value: Complex64, theta: f64) -> Self {
        SumRecord {
            x,
            value,
            normalized: value.re / x.powf(theta),
            theta,
        }
    }
}

/// The exponent k/2 − 1/4 used to normalize twisted sums.
pub fn default_theta(form: &CuspForm) -> f64 {
    form.weight() as f64 / 2.0 - 0.25
}

fn cutoff(form: &CuspForm, x: f64) -> Result<usize> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("cutoff must be non-negative, got {x}")));
    }
    let n = x.floor() as usize;
    form.ensure_coverage(n)?;
    Ok(n)
}

fn chunks(n: usize) -> Vec<(usize, usize)> {
    (1..=n).step_by(CHUNK).map(|lo| (lo, (lo + CHUNK - 1).min(n))).collect()
}

/// S(x, r) = Σ_{n≤x} a_n e^{2πi n a/c}.
pub fn twisted_sum(form: &CuspForm, x: f64, r: &ReducedRational) -> Result<Complex64> {
    let n = cutoff(form, x)?;
    let c = r.c() as usize;
    let roots = roots_of_unity(r.c() as u64);
    let a = r.a() as usize;
    // per-residue class sums of a_n over each chunk, merged pairwise
    let parts: Vec<Vec<Neumaier>> = chunks(n)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut classes = vec![Neumaier::new(); c];
            for m in lo..=hi {
                classes[m % c].add(form.a_f64(m));
            }
            classes
        })
        .collect();
    let classes = pairwise_reduce(&parts, vec![Neumaier::new(); c], |x, y| {
        let mut out = x.clone();
        for (o, v) in out.iter_mut().zip(y) {
            o.merge(v);
        }
        out
    });
    let mut acc = ComplexNeumaier::new();
    for (res, class) in classes.iter().enumerate() {
        acc.add(roots[(res * a) % c] * class.value());
    }
    Ok(acc.value())
}

/// [`twisted_sum`] for an arbitrary integer pair (a, c), canonicalized first.
pub fn twisted_sum_unreduced(form: &CuspForm, x: f64, a: i64, c: i64) -> Result<Complex64> {
    twisted_sum(form, x, &reduce_alpha(a, c)?)
}

fn check_progression(q: i64, h: i64) -> Result<()> {
    if q < 1 {
        return Err(Error::Domain(format!("modulus must be at least 1, got {q}")));
    }
    if !(1..=q).contains(&h) {
        return Err(Error::Domain(format!("residue must lie in [1, {q}], got {h}")));
    }
    Ok(())
}

/// Σ_{n≤x, n≡h (mod q)} a_n, exactly.
pub fn progression_sum_exact(form: &CuspForm, x: f64, q: i64, h: i64) -> Result<Integer> {
    check_progression(q, h)?;
    let n = cutoff(form, x)?;
    let q = q as usize;
    let first = match h as usize % q {
        0 => q,
        r => r,
    };
    let parts: Vec<Integer> = chunks(n)
        .into_par_iter()
        .map(|(lo, hi)| {
            let start = lo + (first + q - lo % q) % q;
            let mut acc = Integer::new();
            for m in (start..=hi).step_by(q) {
                acc += form.a(m);
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(Integer::new(), |acc, p| acc + p))
}

/// [`progression_sum_exact`] rounded to the nearest double.
pub fn progression_sum(form: &CuspForm, x: f64, q: i64, h: i64) -> Result<f64> {
    Ok(progression_sum_exact(form, x, q, h)?.to_f64())
}

/// Σ_{n≤x, n≡h (mod q)} a_n / n^{(k−1)/2}.
pub fn normalized_progression_sum(form: &CuspForm, x: f64, q: i64, h: i64) -> Result<f64> {
    check_progression(q, h)?;
    let n = cutoff(form, x)?;
    let q = q as usize;
    let first = match h as usize % q {
        0 => q,
        r => r,
    };
    let parts: Vec<Neumaier> = chunks(n)
        .into_par_iter()
        .map(|(lo, hi)| {
            let start = lo + (first + q - lo % q) % q;
            (start..=hi).step_by(q).map(|m| form.normalized(m)).collect()
        })
        .collect();
    Ok(pairwise_reduce(&parts, Neumaier::new(), |x, y| {
        let mut out = x.clone();
        out.merge(y);
        out
    })
    .value())
}

/// Extremes of Re S(x, α)/x^θ over integer x ≤ X.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub alpha: String,
    pub x_max: usize,
    pub theta: f64,
    pub max: f64,
    pub argmax: usize,
    pub min: f64,
    pub argmin: usize,
    pub sign_changes: u64,
    pub last: SumRecord,
}

/// Walks x = 1..=⌊X⌋ once, keeping the running sum. `trace`, if given, sees
/// every record in order.
pub fn scan_extrema(
    form: &CuspForm,
    r: &ReducedRational,
    x_max: f64,
    theta: f64,
    mut trace: Option<&mut dyn FnMut(&SumRecord)>,
) -> Result<ScanReport> {
    if !(x_max >= 1.0) {
        return Err(Error::Domain(format!("scan range must reach 1, got {x_max}")));
    }
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("exponent must be positive, got {theta}")));
    }
    let n = cutoff(form, x_max)?;
    let c = r.c() as usize;
    let a = r.a() as usize;
    let roots = roots_of_unity(r.c() as u64);
    let mut acc = ComplexNeumaier::new();
    let mut report = ScanReport {
        alpha: r.to_string(),
        x_max: n,
        theta,
        max: f64::NEG_INFINITY,
        argmax: 0,
        min: f64::INFINITY,
        argmin: 0,
        sign_changes: 0,
        last: SumRecord::new(1.0, Complex64::new(0.0, 0.0), theta),
    };
    let mut sign = 0.0f64;
    for m in 1..=n {
        acc.add(roots[(m % c) * a % c] * form.a_f64(m));
        let record = SumRecord::new(m as f64, acc.value(), theta);
        if record.normalized > report.max {
            report.max = record.normalized;
            report.argmax = m;
        }
        if record.normalized < report.min {
            report.min = record.normalized;
            report.argmin = m;
        }
        if record.value.re != 0.0 {
            let s = record.value.re.signum();
            if sign != 0.0 && s != sign {
                report.sign_changes += 1;
            }
            sign = s;
        }
        if let Some(f) = trace.as_mut() {
            f(&record);
        }
        report.last = record;
    }
    Ok(report)
}
