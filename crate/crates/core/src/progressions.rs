//! Sums and generating series restricted to n ≡ h (mod q).
//!
//! Restriction to a residue class is expanded over additive characters,
//!
//! F(s; q, h) = (1/q)·Σ_{c|q} Σ_{(a,c)=1} e^{−2πiha/c}·F(s, a/c),
//!
//! so each inner F(s, a/c) brings its own boundary singularities at 4π√m/c.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genseries::{b_constants, f_closed, t_value, ComplexPoint, SeriesEval};
use crate::modarith::{companion, divisors, gcd, kloosterman, ramanujan_sum, reduce_alpha, roots_of_unity, ReducedRational};
use crate::numeric::{rel_diff, ComplexNeumaier, Neumaier};
use crate::qseries::CuspForm;
use crate::series::{self, Kernel, Weights};
use crate::sums::{normalized_progression_sum, progression_sum, twisted_sum};

/// The residue class h (mod q), with 1 ≤ h ≤ q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProgressionSpec {
    q: i64,
    h: i64,
}

impl ProgressionSpec {
    pub fn new(q: i64, h: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::Domain(format!("modulus must be at least 1, got {q}")));
        }
        if !(1..=q).contains(&h) {
            return Err(Error::Domain(format!("residue must lie in [1, {q}], got {h}")));
        }
        Ok(ProgressionSpec { q, h })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn h(&self) -> i64 {
        self.h
    }
}

/// Relative defect of (1/q)·Σ_{m=1..q} e^{−2πihm/q}·S(x, m/q) against the
/// directly summed progression.
pub fn dft_decomposition_check(form: &CuspForm, x: f64, spec: ProgressionSpec) -> Result<f64> {
    let (q, h) = (spec.q, spec.h);
    let roots = roots_of_unity(q as u64);
    let mut acc = ComplexNeumaier::new();
    for m in 1..=q {
        let phase = roots[((-h * m).rem_euclid(q)) as usize];
        acc.add(phase * twisted_sum(form, x, &reduce_alpha(m, q)?)?);
    }
    let dft = acc.value() / q as f64;
    let direct = progression_sum(form, x, q, h)?;
    Ok(rel_diff(dft, Complex64::new(direct, 0.0)))
}

/// Both evaluations of F(s; q, h).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgressionEval {
    /// Through the character expansion and the closed form of each F(s, a/c).
    pub closed: SeriesEval,
    /// The restricted series itself; absent when the coefficient cache cannot
    /// reach the required truncation point.
    pub direct: Option<SeriesEval>,
    /// |direct − closed| / |closed| when both are available.
    pub agreement: Option<f64>,
}

/// The twists a/c, c | q, (a, c) = 1, with weights e^{−2πiha/c}.
fn character_twists(spec: ProgressionSpec) -> Vec<(ReducedRational, Complex64)> {
    let mut out = Vec::new();
    for c in divisors(spec.q as u64) {
        let c = c as i64;
        let roots = roots_of_unity(c as u64);
        for a in 0..c {
            if gcd(a, c) == 1 {
                let r = reduce_alpha(a, c).expect("coprime pair");
                out.push((r, roots[((-spec.h * a).rem_euclid(c)) as usize]));
            }
        }
    }
    out
}

pub fn f_progression(form: &CuspForm, s: ComplexPoint, spec: ProgressionSpec, tol: f64) -> Result<ProgressionEval> {
    let q = spec.q as f64;
    let mut acc = ComplexNeumaier::new();
    let mut tail = 0.0;
    let mut rounding = 0.0;
    let mut terms = 0;
    let mut warnings = Vec::new();
    for (r, w) in character_twists(spec) {
        let inner = f_closed(form, s, &r, tol)?;
        acc.add(w * inner.value);
        tail += inner.tail_bound;
        rounding += inner.rounding_bound;
        terms = terms.max(inner.terms_used);
        warnings.extend(inner.warnings.into_iter().map(|m| format!("α = {r}: {m}")));
    }
    let closed = SeriesEval {
        value: acc.value() / q,
        terms_used: terms,
        tail_bound: tail / q,
        rounding_bound: rounding / q,
        precision_bits: 53,
        warnings,
    };
    let direct = match series::evaluate(form, Kernel::Sqrt(s.s()), Weights::Residue { q: spec.q, h: spec.h }, tol) {
        Ok(eval) => Some(eval),
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e),
    };
    let agreement = match &direct {
        Some(d) => {
            let diff = (d.value - closed.value).norm();
            let allowed = d.error_bound() + closed.error_bound() + 1e-9 * closed.value.norm();
            if diff > allowed {
                return Err(Error::Accuracy {
                    what: format!("progression series routes disagree ({diff:.3e} > {allowed:.3e})"),
                    achieved: diff / closed.value.norm(),
                });
            }
            Some(diff / closed.value.norm())
        }
        None => None,
    };
    Ok(ProgressionEval {
        closed,
        direct,
        agreement,
    })
}

/// Σ_{c|q} K(−h, −n; c)/c^k.
pub fn kloosterman_aggregate(q: i64, h: i64, n: i64, k: u32) -> Result<f64> {
    if q < 1 {
        return Err(Error::Domain(format!("modulus must be at least 1, got {q}")));
    }
    let mut acc = Neumaier::new();
    for c in divisors(q as u64) {
        acc.add(kloosterman(-h, -n, c as i64)? / (c as f64).powi(k as i32));
    }
    Ok(acc.value())
}

/// One modulus c | q whose inner series resonates at the common frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceEntry {
    pub c: i64,
    /// m = n·c², the index with 4π√m/c = 4π√n.
    pub m: usize,
    pub a_m: String,
    /// Σ_{(a,c)=1} e^{−2πiha/c}.
    pub ramanujan: f64,
}

/// Leading behaviour of F(σ + 4πi√n; q, h)·σ^{k+½} as σ → 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceTable {
    pub q: i64,
    pub h: i64,
    pub n: usize,
    pub t: f64,
    pub entries: Vec<ResonanceEntry>,
    /// (B+ t^{½−k}/q)·Σ_{c|q} a_{nc²}·R_c(−h)/c^k.
    pub oracle: Complex64,
    /// (B+ t^{½−k}·a_n/q)·Σ_{c|q} K(−h, −n; c)/c^k.
    pub kloosterman_form: Complex64,
}

pub fn resonance_analysis(form: &CuspForm, spec: ProgressionSpec, n: usize) -> Result<ResonanceTable> {
    if n < 1 {
        return Err(Error::Domain("resonant index must be at least 1".into()));
    }
    let k = form.weight();
    let t = t_value(n as u64, 1);
    let scale = b_constants(k).0 * t.powf(0.5 - k as f64) / spec.q as f64;
    let mut entries = Vec::new();
    let mut sum = Neumaier::new();
    for c in divisors(spec.q as u64) {
        let c = c as i64;
        let m = n * (c * c) as usize;
        form.ensure_coverage(m)?;
        let ramanujan = ramanujan_sum(c, -spec.h)?;
        sum.add(form.a_f64(m) * ramanujan / (c as f64).powi(k as i32));
        entries.push(ResonanceEntry {
            c,
            m,
            a_m: form.a(m).to_string(),
            ramanujan,
        });
    }
    let aggregate = kloosterman_aggregate(spec.q, spec.h, n as i64, k)?;
    Ok(ResonanceTable {
        q: spec.q,
        h: spec.h,
        n,
        t,
        entries,
        oracle: scale * sum.value(),
        kloosterman_form: scale * form.a_f64(n) * aggregate,
    })
}

/// F(σ + 4πi√n; q, h)·σ^{k+½}, the measured counterpart of the table's coefficients.
pub fn resonance_prefactor(form: &CuspForm, spec: ProgressionSpec, n: usize, sigma: f64, tol: f64) -> Result<Complex64> {
    let s = ComplexPoint::new(sigma, t_value(n as u64, 1))?;
    let eval = f_progression(form, s, spec, tol)?;
    Ok(eval.closed.value * sigma.powf(form.weight() as f64 + 0.5))
}

/// Outcome of the non-vanishing scan for Re[a_n e^{−2πind/c}].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaWitness {
    pub alpha: String,
    pub d: i64,
    /// First n ≤ n_max with Re[a_n e^{−2πind/c}] ≠ 0.
    pub witness: Option<usize>,
    /// Whether c is odd or some n ≤ n_max has a_n ≠ 0 and n·a ≢ ±c/2 (mod c).
    pub half_modulus_condition: bool,
}

/// Scans n ≤ n_max for a coefficient whose leading real part survives.
///
/// cos(2πnd/c) vanishes exactly when 4nd ≡ c or 3c (mod 4c); that test is
/// done in integers, and the floating value is required to clear 10^{−9}·|a_n|
/// otherwise.
pub fn omega_condition(form: &CuspForm, r: &ReducedRational, n_max: usize) -> Result<OmegaWitness> {
    if n_max < 1 {
        return Err(Error::Domain("scan bound must be at least 1".into()));
    }
    form.ensure_coverage(n_max)?;
    let (a, c) = (r.a() as i128, r.c() as i128);
    let d = companion(r).d;
    let mut witness = None;
    let mut half = c % 2 == 1;
    for n in 1..=n_max {
        if *form.a(n) == 0 {
            continue;
        }
        let na = (n as i128 * a).rem_euclid(c);
        if !half && 2 * na != c {
            half = true;
        }
        if witness.is_none() {
            let quarter = (4 * n as i128 * d as i128).rem_euclid(4 * c);
            let value = form.a_f64(n) * (2.0 * PI * ((n as i128 * d as i128).rem_euclid(c)) as f64 / c as f64).cos();
            if quarter != c && quarter != 3 * c && value.abs() > 1e-9 * form.a_f64(n).abs() {
                witness = Some(n);
            }
        }
        if witness.is_some() && half {
            break;
        }
    }
    Ok(OmegaWitness {
        alpha: r.to_string(),
        d,
        witness,
        half_modulus_condition: half,
    })
}

/// Σ_{h=1..q} |Ŝ(x; q, h)|² / (x·log x).
pub fn lu_ratio(form: &CuspForm, x: f64, q: i64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!("need x > 1, got {x}")));
    }
    let mut acc = Neumaier::new();
    for h in 1..=q {
        let v = normalized_progression_sum(form, x, q, h)?;
        acc.add(v * v);
    }
    Ok(acc.value() / (x * x.ln()))
}
