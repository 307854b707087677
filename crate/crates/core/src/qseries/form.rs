use rug::ops::Pow;
use rug::{Float, Integer};
use std::fmt;
use std::str::FromStr;

use super::{eisenstein_coeffs, eta_coeffs, IntSeries};
use crate::error::{Error, Result};

/// One summand c · Δ^j · E4^a · E6^b of a recipe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecipeTerm {
    pub coeff: Integer,
    pub delta: u32,
    pub e4: u32,
    pub e6: u32,
}

impl RecipeTerm {
    pub fn new(coeff: impl Into<Integer>, delta: u32, e4: u32, e6: u32) -> Self {
        RecipeTerm {
            coeff: coeff.into(),
            delta,
            e4,
            e6,
        }
    }

    pub fn weight(&self) -> u32 {
        12 * self.delta + 4 * self.e4 + 6 * self.e6
    }
}

impl fmt::Display for RecipeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*D^{}*E4^{}*E6^{}", self.coeff, self.delta, self.e4, self.e6)
    }
}

/// A weight-k cusp form written as Σ c_i Δ^{j_i} E4^{a_i} E6^{b_i} with j_i ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    weight: u32,
    terms: Vec<RecipeTerm>,
}

impl Recipe {
    pub fn new(weight: i64, terms: Vec<RecipeTerm>) -> Result<Recipe> {
        if weight < 12 || weight % 2 != 0 {
            return Err(Error::UnsupportedWeight(weight));
        }
        if terms.is_empty() {
            return Err(Error::Recipe {
                term: String::new(),
                reason: "a recipe needs at least one term".into(),
            });
        }
        for t in &terms {
            if t.delta == 0 {
                return Err(Error::Recipe {
                    term: t.to_string(),
                    reason: "every term needs a factor of Delta to be cuspidal".into(),
                });
            }
            if t.weight() as i64 != weight {
                return Err(Error::Recipe {
                    term: t.to_string(),
                    reason: format!("term has weight {} but the form has weight {weight}", t.weight()),
                });
            }
        }
        Ok(Recipe {
            weight: weight as u32,
            terms,
        })
    }

    /// Builds a recipe whose weight is read off the first term.
    pub fn from_terms(terms: Vec<RecipeTerm>) -> Result<Recipe> {
        let w = terms.first().map(|t| t.weight() as i64).unwrap_or(0);
        Recipe::new(w, terms)
    }

    /// Δ, the weight-12 discriminant form.
    pub fn delta() -> Recipe {
        Recipe::new(12, vec![RecipeTerm::new(1, 1, 0, 0)]).unwrap()
    }

    /// Δ·E4, weight 16.
    pub fn delta_e4() -> Recipe {
        Recipe::new(16, vec![RecipeTerm::new(1, 1, 1, 0)]).unwrap()
    }

    /// Δ·E4³ − 696·Δ², a weight-24 cusp form with a_1 = 1 and a_2 = 0.
    pub fn weight24_a2_zero() -> Recipe {
        Recipe::new(24, vec![RecipeTerm::new(1, 1, 3, 0), RecipeTerm::new(-696, 2, 0, 0)]).unwrap()
    }

    /// Resolves a short name (`delta`, `delta-e4`, `w24-a2-zero`) or parses a recipe expression.
    pub fn named(name: &str) -> Result<Recipe> {
        match name {
            "delta" => Ok(Recipe::delta()),
            "delta-e4" => Ok(Recipe::delta_e4()),
            "w24-a2-zero" => Ok(Recipe::weight24_a2_zero()),
            expr => expr.parse(),
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn terms(&self) -> &[RecipeTerm] {
        &self.terms
    }

    /// Canonical text: terms sorted by exponents, `j,a,b:coeff` joined by `;`.
    pub fn digest(&self) -> String {
        let mut terms = self.terms.clone();
        terms.sort_by_key(|t| (t.delta, t.e4, t.e6));
        let mut merged: Vec<RecipeTerm> = Vec::new();
        for t in terms {
            match merged.last_mut() {
                Some(last) if (last.delta, last.e4, last.e6) == (t.delta, t.e4, t.e6) => {
                    last.coeff += t.coeff
                }
                _ => merged.push(t),
            }
        }
        merged
            .iter()
            .filter(|t| t.coeff != 0)
            .map(|t| format!("{},{},{}:{}", t.delta, t.e4, t.e6, t.coeff))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Inverse of [`Recipe::digest`].
    pub fn from_digest(weight: i64, digest: &str) -> Result<Recipe> {
        let bad = |s: &str| Error::Parse(format!("malformed recipe digest entry `{s}`"));
        let mut terms = Vec::new();
        for entry in digest.split(';').filter(|e| !e.is_empty()) {
            let (exps, coeff) = entry.split_once(':').ok_or_else(|| bad(entry))?;
            let e: Vec<u32> = exps
                .split(',')
                .map(|x| x.parse().map_err(|_| bad(entry)))
                .collect::<Result<_>>()?;
            if e.len() != 3 {
                return Err(bad(entry));
            }
            let coeff = Integer::from_str(coeff).map_err(|_| bad(entry))?;
            terms.push(RecipeTerm::new(coeff, e[0], e[1], e[2]));
        }
        Recipe::new(weight, terms)
    }
}

impl FromStr for Recipe {
    type Err = Error;

    /// Parses expressions such as `D*E4^3 - 696*D^2` or `2*D*E6`.
    fn from_str(s: &str) -> Result<Recipe> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty recipe".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                pieces.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && cur.is_empty() {
                neg ^= ch == '-';
            } else {
                cur.push(ch);
            }
        }
        pieces.push((neg, cur));

        let mut terms = Vec::new();
        for (neg, body) in pieces {
            let bad = |why: &str| Error::Recipe {
                term: body.clone(),
                reason: why.into(),
            };
            let mut term = RecipeTerm::new(1, 0, 0, 0);
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                match base {
                    "D" | "Delta" | "delta" => term.delta += exp,
                    "E4" => term.e4 += exp,
                    "E6" => term.e6 += exp,
                    num => {
                        let c = Integer::from_str(num).map_err(|_| bad("unknown factor"))?;
                        term.coeff *= c.pow(exp);
                    }
                }
            }
            if neg {
                term.coeff = -term.coeff;
            }
            terms.push(term);
        }
        Recipe::from_terms(terms)
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact coefficients a_0..a_N of a recipe (a_0 = 0 for every valid recipe).
pub fn form_coeffs(recipe: &Recipe, order: usize) -> Result<IntSeries> {
    let max_delta = recipe.terms.iter().map(|t| t.delta).max().unwrap_or(0);
    let eta24 = eta_coeffs(order).checked_pow(24)?;
    let mut delta_pows: Vec<IntSeries> = vec![IntSeries::one(order)];
    for j in 1..=max_delta {
        let next = delta_pows[j as usize - 1].checked_mul(&eta24)?.shift(1);
        delta_pows.push(next);
    }
    let e4 = recipe
        .terms
        .iter()
        .any(|t| t.e4 > 0)
        .then(|| eisenstein_coeffs(4, order))
        .transpose()?;
    let e6 = recipe
        .terms
        .iter()
        .any(|t| t.e6 > 0)
        .then(|| eisenstein_coeffs(6, order))
        .transpose()?;

    let mut total = IntSeries::zero(order);
    for t in &recipe.terms {
        let mut s = delta_pows[t.delta as usize].clone();
        if let Some(e4) = &e4 {
            if t.e4 > 0 {
                s = s.checked_mul(&e4.checked_pow(t.e4)?)?;
            }
        }
        if let Some(e6) = &e6 {
            if t.e6 > 0 {
                s = s.checked_mul(&e6.checked_pow(t.e6)?)?;
            }
        }
        total = &total + &s.scale(&t.coeff);
    }
    if total.is_zero() {
        return Err(Error::Recipe {
            term: recipe.to_string(),
            reason: format!("the expansion vanishes identically to order {order}"),
        });
    }
    Ok(total)
}

pub(crate) fn int_to_f64(x: &Integer) -> f64 {
    Float::with_val(53, x).to_f64()
}

/// A level-1 cusp form with its cached exact coefficients a_0..a_N.
#[derive(Debug, Clone)]
pub struct CuspForm {
    recipe: Recipe,
    coeffs: IntSeries,
    floats: Vec<f64>,
    hecke: f64,
}

impl CuspForm {
    pub fn new(recipe: Recipe, order: usize) -> Result<CuspForm> {
        let coeffs = form_coeffs(&recipe, order)?;
        CuspForm::from_series(recipe, coeffs)
    }

    pub fn delta(order: usize) -> Result<CuspForm> {
        CuspForm::new(Recipe::delta(), order)
    }

    /// Wraps coefficients obtained elsewhere (e.g. a disk cache).
    pub fn from_series(recipe: Recipe, coeffs: IntSeries) -> Result<CuspForm> {
        if *coeffs.coeff(0) != 0 {
            return Err(Error::Recipe {
                term: recipe.to_string(),
                reason: "constant coefficient must vanish for a cusp form".into(),
            });
        }
        if coeffs.is_zero() {
            return Err(Error::Recipe {
                term: recipe.to_string(),
                reason: "all coefficients are zero".into(),
            });
        }
        let floats: Vec<f64> = coeffs.coeffs().iter().map(int_to_f64).collect();
        let half_k = recipe.weight() as f64 / 2.0;
        let max_ratio = floats
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a.abs() / (n as f64).powf(half_k))
            .fold(0.0, f64::max);
        Ok(CuspForm {
            recipe,
            coeffs,
            floats,
            hecke: 2.0 * max_ratio,
        })
    }

    pub fn weight(&self) -> u32 {
        self.recipe.weight()
    }

    pub fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    /// Largest n with a cached coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.order()
    }

    pub fn series(&self) -> &IntSeries {
        &self.coeffs
    }

    pub fn a(&self, n: usize) -> &Integer {
        self.coeffs.coeff(n)
    }

    pub fn a_f64(&self, n: usize) -> f64 {
        self.floats[n]
    }

    pub fn floats(&self) -> &[f64] {
        &self.floats
    }

    /// Normalized coefficient a_n / n^{(k−1)/2}.
    pub fn normalized(&self, n: usize) -> f64 {
        self.floats[n] / (n as f64).powf((self.weight() as f64 - 1.0) / 2.0)
    }

    /// C with |a_n| ≤ C·n^{k/2} on the cached range: twice the observed maximum ratio.
    pub fn hecke_constant(&self) -> f64 {
        self.hecke
    }

    pub fn ensure_coverage(&self, n: usize) -> Result<()> {
        if n > self.order() {
            Err(Error::Coverage {
                needed: n,
                available: self.order(),
                sigma: None,
            })
        } else {
            Ok(())
        }
    }
}

/// (Σ_{n≤x} a_n²) / x^k with an exact numerator and a single final division.
pub fn rankin_ratio(form: &CuspForm, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("rankin_ratio needs x >= 1, got {x}")));
    }
    let n = x.floor() as usize;
    form.ensure_coverage(n)?;
    let mut num = Integer::new();
    for a in &form.series().coeffs()[1..=n] {
        num += a.square_ref();
    }
    let prec = 128;
    let den = Float::with_val(prec, x).pow(form.weight());
    Ok((Float::with_val(prec, &num) / den).to_f64())
}
