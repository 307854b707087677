//! Named verification suites driving the identity and asymptotic checks.

use cuspsum_core::genseries::{
    asym_ratio, esn_quadrature_check, f_closed, f_direct, modular_check, t_value, ComplexPoint,
};
use cuspsum_core::progressions::{dft_decomposition_check, f_progression, resonance_analysis, resonance_prefactor, ProgressionSpec};
use cuspsum_core::{reduce_alpha, CuspForm, Error, ReducedRational};

use crate::report::{Outcome, Report};

pub const SUITES: [&str; 6] = ["identity", "asymptotic", "modular", "quadrature", "progression", "all"];

pub struct Settings {
    pub tol: Option<f64>,
    pub sigma_min: f64,
}

fn rat(a: i64, c: i64) -> ReducedRational {
    reduce_alpha(a, c).expect("valid literal twist")
}

fn failed(report: &mut Report, name: String, tolerance: f64, err: Error) {
    let outcome = if err.is_budget() {
        Outcome::Budget(err.to_string())
    } else {
        Outcome::Error(err.to_string())
    };
    report.check(name, None, tolerance, outcome);
}

pub fn identity(report: &mut Report, form: &CuspForm, settings: &Settings) {
    let tol = settings.tol.unwrap_or(1e-9);
    for sigma in [0.3, 0.5, 1.0] {
        for t in [0.0, t_value(1, 1), t_value(2, 1), 7.3] {
            for r in [rat(0, 1), rat(1, 2), rat(1, 3), rat(2, 5)] {
                let name = format!("routes σ={sigma} t={t:.4} α={r}");
                let run = || -> cuspsum_core::Result<f64> {
                    let s = ComplexPoint::new(sigma, t)?;
                    let d = f_direct(form, s, &r, tol / 20.0)?;
                    let c = f_closed(form, s, &r, tol / 20.0)?;
                    Ok((d.value - c.value).norm() / c.value.norm())
                };
                match run() {
                    Ok(defect) => report.bound(name, defect, tol),
                    Err(e) => failed(report, name, tol, e),
                }
            }
        }
    }
}

pub fn asymptotic(report: &mut Report, form: &CuspForm, settings: &Settings) {
    let grid: Vec<f64> = [0.2, 0.1, 0.05, 0.02, 0.01]
        .into_iter()
        .filter(|&s| s >= settings.sigma_min * (1.0 - 1e-12))
        .collect();
    let expected = -(form.weight() as f64 + 0.5);
    let cases = [(1, rat(0, 1)), (2, rat(0, 1)), (1, rat(1, 2)), (1, rat(1, 3)), (1, rat(2, 5))];
    for (n, r) in cases {
        match asym_ratio(form, n, &r, &grid) {
            Ok(rep) => {
                report.value(
                    &format!("ratios n={n} α={r}"),
                    rep.ratios
                        .iter()
                        .zip(&rep.sigma_grid)
                        .map(|(z, s)| format!("σ={s}: {:.6}{:+.6}i", z.re, z.im))
                        .collect::<Vec<_>>(),
                );
                report.value(&format!("fitted slope n={n} α={r}"), rep.fitted_slope);
                report.bound(format!("slope n={n} α={r}"), (rep.fitted_slope - expected).abs(), 0.1);
                if let Some(last) = rep.ratios.last() {
                    report.bound(format!("ratio n={n} α={r} σ={}", grid[grid.len() - 1]), (last - 1.0).norm(), 0.02);
                }
            }
            Err(e) => failed(report, format!("asymptotics n={n} α={r}"), 0.02, e),
        }
    }
}

pub fn modular(report: &mut Report, form: &CuspForm, settings: &Settings) {
    let tol = settings.tol.unwrap_or(1e-10);
    for u in [0.5, 1.0, 1.5, 2.0] {
        for r in [rat(0, 1), rat(1, 2), rat(1, 3)] {
            let name = format!("modular u={u} α={r}");
            match modular_check(form, u, &r, tol / 100.0) {
                Ok(d) => report.bound(name, d, tol),
                Err(e) => failed(report, name, tol, e),
            }
        }
    }
}

pub fn quadrature(report: &mut Report, settings: &Settings) {
    let tol = settings.tol.unwrap_or(1e-8);
    for (sigma, t, n, c) in [(1.0, 0.0, 1, 1), (2.0, 0.0, 3, 2), (0.5, 1.0, 2, 1)] {
        let name = format!("integral s={sigma}+{t}i n={n} c={c}");
        match ComplexPoint::new(sigma, t).and_then(|s| esn_quadrature_check(s, n, c)) {
            Ok(d) => report.bound(name, d, tol),
            Err(e) => failed(report, name, tol, e),
        }
    }
}

pub fn progression(report: &mut Report, form: &CuspForm, settings: &Settings) {
    let tol = settings.tol.unwrap_or(1e-10);
    for x in [1e2, 1e3, 1e4] {
        let mut worst: f64 = 0.0;
        let mut error = None;
        'outer: for q in 1..=12 {
            for h in 1..=q {
                match ProgressionSpec::new(q, h).and_then(|spec| dft_decomposition_check(form, x, spec)) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => {
                        error = Some(e);
                        break 'outer;
                    }
                }
            }
        }
        let name = format!("character expansion x={x} q≤12");
        match error {
            None => report.bound(name, worst, tol),
            Some(e) => failed(report, name, tol, e),
        }
    }
    for (sigma, t, q, h) in [(1.0, 0.0, 2, 1), (0.5, 2.0, 4, 3)] {
        let name = format!("progression routes s={sigma}+{t}i q={q} h={h}");
        let run = || -> cuspsum_core::Result<Option<f64>> {
            let eval = f_progression(form, ComplexPoint::new(sigma, t)?, ProgressionSpec::new(q, h)?, 1e-12)?;
            Ok(eval.agreement)
        };
        match run() {
            Ok(Some(d)) => report.bound(name, d, 1e-9),
            Ok(None) => report.check(name, None, 1e-9, Outcome::Budget("direct route out of range".into())),
            Err(e) => failed(report, name, 1e-9, e),
        }
    }
    for (q, h, gate) in [(1, 1, 0.02), (2, 1, 0.03)] {
        let name = format!("resonance q={q} h={h} n=1 σ=0.01");
        let run = || -> cuspsum_core::Result<(f64, f64)> {
            let spec = ProgressionSpec::new(q, h)?;
            let table = resonance_analysis(form, spec, 1)?;
            let measured = resonance_prefactor(form, spec, 1, 0.01, 1e-10)?;
            Ok(((measured / table.oracle - 1.0).norm(), (measured / table.kloosterman_form - 1.0).norm()))
        };
        match run() {
            Ok((oracle, kloosterman_form)) => {
                report.value(&format!("resonance q={q} h={h} deviation from Kloosterman form"), kloosterman_form);
                report.bound(name, oracle, gate);
            }
            Err(e) => failed(report, name, gate, e),
        }
    }
}
