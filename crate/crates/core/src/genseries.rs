//! The twisted generating series F(s, α) = Σ a_n e^{2πinα} e^{−s√n}.
//!
//! Two evaluation routes are provided: the defining series, and the closed
//! form obtained from modularity,
//!
//! F(s, a/c) = s·(8π/c)^k·Γ(k+½)/√π · Σ_m a_m e^{−2πimd/c} (s² + t_m²)^{−(k+½)},
//!
//! with t_m = 4π√m/c and (b, d) the companion of a/c. The closed form is what
//! exposes the boundary singularities at s = ±i t_m.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{companion, roots_of_unity, ReducedRational};
use crate::numeric::{gamma_half_integer, ln_upper_gamma_int, ls_slope, ComplexNeumaier};
use crate::qseries::CuspForm;
use crate::quad;
use crate::series::{self, Kernel, Weights};
use crate::sums::twisted_sum;

const UNIT: f64 = f64::EPSILON / 2.0;

/// A point s = σ + it of the right half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPoint {
    sigma: f64,
    t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !t.is_finite() {
            return Err(Error::HalfPlane { sigma, t });
        }
        Ok(ComplexPoint { sigma, t })
    }

    pub fn real(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0.0)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn conj(&self) -> Self {
        ComplexPoint {
            sigma: self.sigma,
            t: -self.t,
        }
    }
}

/// A truncated series value with its certified truncation tail and the
/// rounding-error estimate of the arithmetic used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEval {
    pub value: Complex64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub rounding_bound: f64,
    pub precision_bits: u32,
    pub warnings: Vec<String>,
}

impl SeriesEval {
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.rounding_bound
    }
}

/// Which boundary singularity, s → ±i·t_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// t_n = 4π√n/c.
pub fn t_value(n: u64, c: u64) -> f64 {
    4.0 * PI * (n as f64).sqrt() / c as f64
}

/// F(s, α) from its defining series.
pub fn f_direct(form: &CuspForm, s: ComplexPoint, r: &ReducedRational, tol: f64) -> Result<SeriesEval> {
    series::evaluate(form, Kernel::Sqrt(s.s()), Weights::Twist { num: r.a(), den: r.c() }, tol)
}

/// Σ Re(a_n e^{2πinα}) e^{−s√n} from its defining series.
pub fn f1_eval(form: &CuspForm, s: ComplexPoint, r: &ReducedRational, tol: f64) -> Result<SeriesEval> {
    series::evaluate(form, Kernel::Sqrt(s.s()), Weights::RealTwist { num: r.a(), den: r.c() }, tol)
}

/// ½(F(s, α) + conj F(s̄, α)) through the closed form, usable near the boundary.
pub fn f1_closed(form: &CuspForm, s: ComplexPoint, r: &ReducedRational, tol: f64) -> Result<SeriesEval> {
    let a = f_closed(form, s, r, tol)?;
    let b = f_closed(form, s.conj(), r, tol)?;
    let mut warnings = a.warnings;
    warnings.extend(b.warnings);
    Ok(SeriesEval {
        value: 0.5 * (a.value + b.value.conj()),
        terms_used: a.terms_used.max(b.terms_used),
        tail_bound: 0.5 * (a.tail_bound + b.tail_bound),
        rounding_bound: 0.5 * (a.rounding_bound + b.rounding_bound),
        precision_bits: 53,
        warnings,
    })
}

/// ln of (8π/c)^k·Γ(k+½)/√π.
fn ln_closed_prefactor(k: u32, c: f64) -> f64 {
    k as f64 * (8.0 * PI / c).ln() + gamma_half_integer(k).ln() - 0.5 * PI.ln()
}

/// F(s, α) from the closed form, truncated once the majorant
/// C|s|·pref·(c²/8π²)^{k+½}·M^{(1−k)/2}/((k−1)/2) drops below tol·|value|.
pub fn f_closed(form: &CuspForm, s: ComplexPoint, r: &ReducedRational, tol: f64) -> Result<SeriesEval> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let k = form.weight();
    let power = k as f64 + 0.5;
    let c = r.c() as f64;
    let d = companion(r).d;
    let sv = s.s();
    let ln_pref = ln_closed_prefactor(k, c);
    let ln_tail_scale = form.hecke_constant().ln() + sv.norm().ln() + ln_pref + power * (c * c / (8.0 * PI * PI)).ln()
        - ((k as f64 - 1.0) / 2.0).ln();
    let tail = |m: usize| (ln_tail_scale + (1.0 - k as f64) / 2.0 * (m as f64).ln()).exp();
    let start = ((sv.norm() * c / (2.0 * PI)).powi(2)).ceil().max(1.0) as usize;
    let roots = roots_of_unity(r.c() as u64);
    let cu = r.c() as i128;

    let mut acc = ComplexNeumaier::new();
    let mut rounding = 0.0;
    let mut warnings = Vec::new();
    for m in 1..=form.order() {
        let a = form.a_f64(m);
        if a != 0.0 {
            let tm = t_value(m as u64, r.c() as u64);
            let lower = sv - Complex64::new(0.0, tm);
            if lower.norm() < 1e-6 {
                warnings.push(format!("s lies within {:.3e} of the singularity i·t_{m}", lower.norm()));
            }
            let log = lower.ln() + (sv + Complex64::new(0.0, tm)).ln();
            let exponent = Complex64::new(ln_pref, 0.0) - power * log;
            let phase = roots[((-(m as i128) * d as i128).rem_euclid(cu)) as usize];
            let term = sv * phase * a * exponent.exp();
            acc.add(term);
            rounding += (8.0 + 2.0 * exponent.norm()) * UNIT * term.norm();
        }
        if m >= start {
            let value = acc.value();
            let bound = tail(m);
            if bound <= tol * value.norm() {
                rounding += 2.0 * UNIT * value.norm();
                if rounding > tol * value.norm() {
                    return Err(Error::Accuracy {
                        what: "closed-form series".into(),
                        achieved: rounding / value.norm(),
                    });
                }
                return Ok(SeriesEval {
                    value,
                    terms_used: m,
                    tail_bound: bound,
                    rounding_bound: rounding,
                    precision_bits: 53,
                    warnings,
                });
            }
        }
    }
    Err(Error::Coverage {
        needed: form.order() + 1,
        available: form.order(),
        sigma: Some(s.sigma()),
    })
}

/// (B+, B−) = e^{±(½−k)πi/2}·(4π)^k·Γ(k+½)/√(2π).
pub fn b_constants(k: u32) -> (Complex64, Complex64) {
    let modulus = (4.0 * PI).powi(k as i32) * gamma_half_integer(k) / (2.0 * PI).sqrt();
    let phase = (0.5 - k as f64) * PI / 2.0;
    (Complex64::from_polar(modulus, phase), Complex64::from_polar(modulus, -phase))
}

fn b_for(k: u32, sign: Sign) -> Complex64 {
    let (plus, minus) = b_constants(k);
    match sign {
        Sign::Plus => plus,
        Sign::Minus => minus,
    }
}

/// B^±·a_n·e^{−2πind/c}·c^{−k}: the σ-independent part of the leading term
/// as displayed with the bare constants.
fn literal_constant(form: &CuspForm, n: usize, r: &ReducedRational, sign: Sign) -> Result<Complex64> {
    form.ensure_coverage(n)?;
    let a = form.a_f64(n);
    if a == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = form.weight();
    let d = companion(r).d as i128;
    let j = ((-(n as i128) * d).rem_euclid(r.c() as i128)) as usize;
    let phase = roots_of_unity(r.c() as u64)[j];
    Ok(b_for(k, sign) * phase * a * (r.c() as f64).powi(-(k as i32)))
}

/// Leading coefficient of F(σ ± i t_n, α)·σ^{k+½} as σ → 0:
/// B^±·t_n^{½−k}·a_n·e^{−2πind/c}·c^{−k}.
pub fn leading_constant(form: &CuspForm, n: usize, r: &ReducedRational, sign: Sign) -> Result<Complex64> {
    let t = t_value(n as u64, r.c() as u64);
    Ok(literal_constant(form, n, r, sign)? * t.powf(0.5 - form.weight() as f64))
}

/// The leading term of F(σ ± i t_n, α) as σ → 0.
pub fn predicted_leading(form: &CuspForm, n: usize, r: &ReducedRational, sigma: f64, sign: Sign) -> Result<Complex64> {
    let k = form.weight() as f64;
    Ok(leading_constant(form, n, r, sign)? * sigma.powf(-k - 0.5))
}

/// The leading term with the bare constants B^± and no t_n^{½−k} factor.
pub fn predicted_leading_literal(form: &CuspForm, n: usize, r: &ReducedRational, sigma: f64, sign: Sign) -> Result<Complex64> {
    let k = form.weight() as f64;
    Ok(literal_constant(form, n, r, sign)? * sigma.powf(-k - 0.5))
}

/// Leading term of the real-part series at σ + i t_n:
/// B+·t_n^{½−k}·c^{−k}·Re[a_n e^{−2πind/c}]·σ^{−k−½}.
pub fn f1_predicted_leading(form: &CuspForm, n: usize, r: &ReducedRational, sigma: f64) -> Result<Complex64> {
    form.ensure_coverage(n)?;
    let k = form.weight();
    let d = companion(r).d as f64;
    let cos = (2.0 * PI * ((n as f64 * d) % r.c() as f64) / r.c() as f64).cos();
    let t = t_value(n as u64, r.c() as u64);
    Ok(b_for(k, Sign::Plus)
        * t.powf(0.5 - k as f64)
        * (r.c() as f64).powi(-(k as i32))
        * form.a_f64(n)
        * cos
        * sigma.powf(-(k as f64) - 0.5))
}

/// Measured against predicted behaviour of F(σ + i t_n, α) on a σ grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub n: usize,
    pub alpha: String,
    pub t: f64,
    pub sigma_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub magnitudes: Vec<f64>,
    /// F / predicted leading term; empty when a_n = 0.
    pub ratios: Vec<Complex64>,
    pub fitted_slope: f64,
    pub predicted_constant: Complex64,
    pub literal_constant: Complex64,
    pub zero_branch: bool,
}

impl AsymptoticReport {
    /// max|F| / min|F| over the grid.
    pub fn spread(&self) -> f64 {
        let max = self.magnitudes.iter().copied().fold(0.0, f64::max);
        let min = self.magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}

pub fn asym_ratio(form: &CuspForm, n: usize, r: &ReducedRational, sigma_grid: &[f64]) -> Result<AsymptoticReport> {
    if sigma_grid.len() < 2 {
        return Err(Error::Domain("asymptotic fit needs at least two grid points".into()));
    }
    if sigma_grid.iter().any(|&s| !(s > 0.0)) || sigma_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("sigma grid must be positive and strictly decreasing".into()));
    }
    let predicted_constant = leading_constant(form, n, r, Sign::Plus)?;
    let literal = literal_constant(form, n, r, Sign::Plus)?;
    let zero_branch = predicted_constant == Complex64::new(0.0, 0.0);
    let t = t_value(n as u64, r.c() as u64);
    let k = form.weight() as f64;
    let mut values = Vec::with_capacity(sigma_grid.len());
    for &sigma in sigma_grid {
        values.push(f_closed(form, ComplexPoint::new(sigma, t)?, r, 1e-12)?.value);
    }
    let magnitudes: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let ratios = if zero_branch {
        Vec::new()
    } else {
        values
            .iter()
            .zip(sigma_grid)
            .map(|(v, s)| v / (predicted_constant * s.powf(-k - 0.5)))
            .collect()
    };
    let xs: Vec<f64> = sigma_grid.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = magnitudes.iter().map(|m| m.ln()).collect();
    Ok(AsymptoticReport {
        n,
        alpha: r.to_string(),
        t,
        sigma_grid: sigma_grid.to_vec(),
        values,
        magnitudes,
        ratios,
        fitted_slope: ls_slope(&xs, &ys),
        predicted_constant,
        literal_constant: literal,
        zero_branch,
    })
}

/// Upper bound C_α for |F(σ, α)|/σ on the real axis:
/// (8π/c)^k Γ(k+½)/√π · Σ_m |a_m|/t_m^{2k+1}, tail included.
pub fn real_axis_constant(form: &CuspForm, r: &ReducedRational) -> Result<f64> {
    let k = form.weight();
    let power = 2.0 * k as f64 + 1.0;
    let c = r.c() as f64;
    let pref = ln_closed_prefactor(k, c).exp();
    let tail_scale = form.hecke_constant() * (c * c / (16.0 * PI * PI)).powf(k as f64 + 0.5) / ((k as f64 - 1.0) / 2.0);
    let mut acc = crate::numeric::Neumaier::new();
    for m in 1..=form.order() {
        acc.add(form.a_f64(m).abs() / t_value(m as u64, r.c() as u64).powf(power));
        let tail = tail_scale * (m as f64).powf((1.0 - k as f64) / 2.0);
        if tail <= 1e-12 * acc.value() {
            return Ok(pref * (acc.value() + tail) * (1.0 + 1e-12));
        }
    }
    Err(Error::Coverage {
        needed: form.order() + 1,
        available: form.order(),
        sigma: None,
    })
}

/// Relative defect of the integral representation
/// e^{−s√n} = s/√π·(c/8π)^{½}·∫_0^∞ u^{−½} e^{−(c/8π)s²u} e^{−(2πn/c)/u} du.
///
/// The path is rotated to u = e^{−i·arg s}·e^v, along which both exponentials
/// decay for any s in the right half plane.
pub fn esn_quadrature_check(s: ComplexPoint, n: u64, c: u64) -> Result<f64> {
    if n < 1 || c < 1 {
        return Err(Error::Domain(format!("need n, c >= 1, got n = {n}, c = {c}")));
    }
    let sv = s.s();
    let alpha = c as f64 / (8.0 * PI);
    let beta = 2.0 * PI * n as f64 / c as f64;
    let rot = Complex64::from_polar(1.0, -sv.arg());
    let a = alpha * sv * sv * rot;
    let b = beta / rot;
    let log_integrand = |v: f64| Complex64::new(v / 2.0, 0.0) - a * v.exp() - b * (-v).exp();
    let peak = 0.5 * (b.re / a.re).ln();
    let top = log_integrand(peak).re;
    let edge = |dir: f64| {
        let mut v = peak;
        while log_integrand(v).re > top - 60.0 {
            v += dir * 0.25;
        }
        v
    };
    let (lo, hi) = (edge(-1.0), edge(1.0));
    let q = quad::integrate(|v| log_integrand(v).exp(), lo, hi, 1e-13, 0.0, 4000);
    let value = sv / PI.sqrt() * alpha.sqrt() * rot.sqrt() * q.value;
    let exact = (-sv * (n as f64).sqrt()).exp();
    let defect = (value - exact).norm() / exact.norm();
    if !q.converged {
        return Err(Error::Accuracy {
            what: "integral representation quadrature".into(),
            achieved: defect.max(q.error / q.value.norm()),
        });
    }
    Ok(defect)
}

/// Relative defect between F(s, α) and s·∫_0^Y S(y², α) e^{−sy} dy.
///
/// S(y²) is constant between consecutive √n, so the integral is exactly
/// Σ_{n≤Y²} a_n e^{2πinα} e^{−s√n} − S(Y², α) e^{−sY}. The neglected part is
/// bounded by |s|·C·σ^{−(k+3)}·Γ(k+3, σY); it must stay below |F|.
pub fn laplace_check(form: &CuspForm, s: ComplexPoint, r: &ReducedRational, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("integration limit must be positive, got {y}")));
    }
    let k = form.weight();
    let sigma = s.sigma();
    let tail = s.s().norm()
        * form.hecke_constant()
        * (-(k as f64 + 3.0) * sigma.ln() + ln_upper_gamma_int(k + 3, sigma * y)).exp();
    let full = f_direct(form, s, r, 1e-13)?;
    let magnitude = full.value.norm();
    if !(tail < magnitude) {
        return Err(Error::TailBudget { tail, value: magnitude });
    }
    let terms = (y * y).floor() as usize;
    let weights = Weights::Twist { num: r.a(), den: r.c() };
    let head = series::evaluate_finite(form, Kernel::Sqrt(s.s()), weights, terms, 1e-14)?;
    let boundary = twisted_sum(form, terms as f64, r)? * (-s.s() * y).exp();
    let integral = head.value - boundary;
    Ok((integral - full.value).norm() / magnitude)
}

/// Relative defect of the modular relation
/// Σ a_n e^{2πina/c} e^{−2πn/(cu)} = u^k Σ a_n e^{−2πind/c} e^{−2πnu/c}.
pub fn modular_check(form: &CuspForm, u: f64, r: &ReducedRational, tol: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!("scale must be positive, got {u}")));
    }
    let c = r.c() as f64;
    let d = companion(r).d;
    let left = series::evaluate(form, Kernel::Linear(2.0 * PI / (c * u)), Weights::Twist { num: r.a(), den: r.c() }, tol)?;
    let right = series::evaluate(form, Kernel::Linear(2.0 * PI * u / c), Weights::Twist { num: -d, den: r.c() }, tol)?;
    let right = right.value * u.powi(form.weight() as i32);
    Ok((left.value - right).norm() / left.value.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::reduce_alpha;
    use crate::qseries::Recipe;
    use std::sync::OnceLock;

    fn delta() -> &'static CuspForm {
        static FORM: OnceLock<CuspForm> = OnceLock::new();
        FORM.get_or_init(|| CuspForm::delta(60_000).unwrap())
    }

    fn rat(a: i64, c: i64) -> ReducedRational {
        reduce_alpha(a, c).unwrap()
    }

    #[test]
    fn t_value_examples() {
        assert_eq!(t_value(1, 1), 4.0 * PI);
        assert_eq!(t_value(4, 2), 4.0 * PI);
        assert!((t_value(2, 1) - 4.0 * PI * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn half_plane_is_enforced() {
        assert!(matches!(ComplexPoint::new(-0.1, 0.0), Err(Error::HalfPlane { .. })));
        assert!(ComplexPoint::new(0.0, 1.0).is_err());
        assert!(ComplexPoint::new(-1.0, 0.0).map(|s| esn_quadrature_check(s, 1, 1)).is_err());
    }

    #[test]
    fn b_constants_examples() {
        let (plus, minus) = b_constants(12);
        assert!((minus.conj() - plus).norm() <= 1e-15 * plus.norm());
        assert!((plus.arg() - PI / 4.0).abs() < 1e-12);
        let modulus = (4.0 * PI).powi(12) * gamma_half_integer(12) / (2.0 * PI).sqrt();
        assert!((plus.norm() - modulus).abs() <= 1e-14 * modulus);
    }

    #[test]
    fn routes_agree_at_one() {
        let s = ComplexPoint::real(1.0).unwrap();
        let direct = f_direct(delta(), s, &rat(0, 1), 1e-12).unwrap();
        let closed = f_closed(delta(), s, &rat(0, 1), 1e-12).unwrap();
        assert!((direct.value - closed.value).norm() < 1e-10 * closed.value.norm());
    }

    #[test]
    fn route_identity_grid_with_tails() {
        let f = delta();
        for &sigma in &[1.0, 2.0] {
            for &t in &[0.0, 1.0, 4.0 * PI, 7.3] {
                for r in [rat(0, 1), rat(1, 2), rat(1, 3), rat(2, 5)] {
                    let s = ComplexPoint::new(sigma, t).unwrap();
                    let direct = f_direct(f, s, &r, 1e-11).unwrap();
                    let closed = f_closed(f, s, &r, 1e-11).unwrap();
                    let diff = (direct.value - closed.value).norm();
                    let allowed = direct.error_bound() + closed.error_bound() + 1e-9 * closed.value.norm();
                    assert!(diff <= allowed, "σ={sigma} t={t} α={r}: {diff} > {allowed}");
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let f = delta();
        let s = ComplexPoint::new(0.7, 3.1).unwrap();
        let r = rat(2, 7);
        let a = f_direct(f, s.conj(), &r, 1e-13).unwrap().value;
        let b = f_direct(f, s, &r.neg(), 1e-13).unwrap().value.conj();
        assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn predicted_leading_examples() {
        let f = delta();
        let r = rat(0, 1);
        let (plus, _) = b_constants(12);
        let literal = predicted_leading_literal(f, 1, &r, 0.1, Sign::Plus).unwrap();
        assert!((literal - plus * 10f64.powf(12.5)).norm() <= 1e-13 * literal.norm());
        let corrected = predicted_leading(f, 1, &r, 0.1, Sign::Plus).unwrap();
        assert!((corrected / literal - (4.0 * PI).powf(-11.5)).norm() < 1e-12 * (4.0 * PI).powf(-11.5));

        let w24 = CuspForm::new(Recipe::weight24_a2_zero(), 10).unwrap();
        assert_eq!(predicted_leading(&w24, 2, &r, 0.1, Sign::Plus).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn predicted_leading_is_companion_independent() {
        let f = delta();
        let r = rat(2, 5);
        let base = predicted_leading(f, 3, &r, 0.05, Sign::Minus).unwrap();
        let d0 = companion(&r).d;
        for j in -3..=3 {
            let d = companion(&r).shifted(&r, j).d;
            let phase = Complex64::from_polar(1.0, -2.0 * PI * (3 * d).rem_euclid(5) as f64 / 5.0);
            let phase0 = Complex64::from_polar(1.0, -2.0 * PI * (3 * d0).rem_euclid(5) as f64 / 5.0);
            assert_eq!(phase, phase0);
        }
        assert!(base.norm() > 0.0);
    }

    #[test]
    fn asymptotic_slope_and_constant() {
        let grid = [0.2, 0.1, 0.05, 0.02, 0.01];
        let rep = asym_ratio(delta(), 1, &rat(0, 1), &grid).unwrap();
        assert!((rep.fitted_slope + 12.5).abs() < 0.1, "{}", rep.fitted_slope);
        assert!((rep.ratios[4] - 1.0).norm() < 0.02, "{}", rep.ratios[4]);
    }

    #[test]
    fn real_part_series_identities() {
        let f = delta();
        let s = ComplexPoint::real(0.8).unwrap();
        let a = f1_eval(f, s, &rat(0, 1), 1e-12).unwrap().value;
        let b = f_direct(f, s, &rat(0, 1), 1e-12).unwrap().value;
        assert!((a - b).norm() <= 1e-12 * b.norm());

        let s = ComplexPoint::new(0.01, t_value(1, 1)).unwrap();
        let v = f1_closed(f, s, &rat(0, 1), 1e-12).unwrap().value;
        let p = f1_predicted_leading(f, 1, &rat(0, 1), 0.01).unwrap();
        assert!((v / p - 1.0).norm() < 0.02);
    }

    #[test]
    fn real_axis_bound_holds() {
        let f = delta();
        let r = rat(1, 3);
        let bound = real_axis_constant(f, &r).unwrap();
        for &sigma in &[1.0, 0.5, 0.1, 0.01, 0.001] {
            let v = f_closed(f, ComplexPoint::real(sigma).unwrap(), &r, 1e-10).unwrap();
            assert!(v.value.norm() / sigma <= bound);
        }
    }

    #[test]
    fn quadrature_examples() {
        assert!(esn_quadrature_check(ComplexPoint::real(1.0).unwrap(), 1, 1).unwrap() < 1e-8);
        assert!(esn_quadrature_check(ComplexPoint::real(2.0).unwrap(), 3, 2).unwrap() < 1e-8);
        assert!(esn_quadrature_check(ComplexPoint::new(0.5, 1.0).unwrap(), 2, 1).unwrap() < 1e-8);
        assert!(esn_quadrature_check(ComplexPoint::new(1.0, 3.0).unwrap(), 7, 3).unwrap() < 1e-8);
    }

    #[test]
    fn laplace_budget_and_resonant_point() {
        let f = delta();
        let r = rat(0, 1);
        let err = laplace_check(f, ComplexPoint::real(1.0).unwrap(), &r, 1.0).unwrap_err();
        assert!(matches!(err, Error::TailBudget { .. }));
        let defect = laplace_check(f, ComplexPoint::new(1.0, 4.0 * PI).unwrap(), &r, 40.0).unwrap();
        assert!(defect < 1e-6, "{defect}");
        let defect = laplace_check(f, ComplexPoint::real(1.0).unwrap(), &r, 100.0).unwrap();
        assert!(defect < 1e-6, "{defect}");
    }

    #[test]
    fn modular_examples() {
        let f = delta();
        assert!(modular_check(f, 1.0, &rat(0, 1), 1e-14).unwrap() < 1e-12);
        assert!(modular_check(f, 2.0, &rat(0, 1), 1e-13).unwrap() < 1e-10);
        assert!(modular_check(f, 1.5, &rat(1, 3), 1e-13).unwrap() < 1e-10);
        assert!(modular_check(f, 0.0, &rat(0, 1), 1e-13).is_err());
    }
}
