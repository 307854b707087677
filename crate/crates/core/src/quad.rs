//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
}

fn rule(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let pair = f(center - x) + f(center + x);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Integrates f over [a, b] until the summed Kronrod error estimate is below
/// max(abs_tol, rel_tol·|I|), bisecting the worst interval each round.
pub(crate) fn integrate(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Quadrature {
    let (v, e) = rule(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: Complex64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        let converged = error <= abs_tol.max(rel_tol * value.norm());
        if converged || pieces.len() >= max_intervals {
            return Quadrature { value, error, converged };
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = rule(&f, lo, mid);
        let (v2, e2) = rule(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let q = integrate(|x| Complex64::new((-x * x).exp(), 0.0), -10.0, 10.0, 1e-14, 0.0, 500);
        assert!((q.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_complex_integrand() {
        // ∫_0^{2π} e^{3ix} e^{-x} dx = (1 - e^{-2π}) / (1 - 3i)
        let q = integrate(|x| Complex64::new(0.0, 3.0 * x).exp() * (-x).exp(), 0.0, 2.0 * std::f64::consts::PI, 1e-13, 0.0, 500);
        let want = Complex64::new(1.0 - (-2.0 * std::f64::consts::PI).exp(), 0.0) / Complex64::new(1.0, -3.0);
        assert!((q.value - want).norm() < 1e-12);
    }
}
