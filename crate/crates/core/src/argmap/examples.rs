//! Standard maps: `p_n`, `F_{m,n}` and `G_ε`.

use super::milnor::Expectation;
use super::{BivariateMero, BivariatePoly, RationalMap};

/// `(1 + z^n) / (1 − z^n)`.
pub fn p_n(n: usize) -> RationalMap {
    let mut num = vec![0.0; n + 1];
    let mut den = vec![0.0; n + 1];
    num[0] = 1.0;
    den[0] = 1.0;
    num[n] += 1.0;
    den[n] -= 1.0;
    RationalMap::from_real(&num, &den)
}

/// `F_{m,n}(z, w) = m z^m + n w^n`.
pub fn f_mn(m: u32, n: u32) -> BivariateMero {
    BivariateMero::analytic(BivariatePoly::from_terms(&[
        (m, 0, f64::from(m), 0.0),
        (0, n, f64::from(n), 0.0),
    ]))
}

/// `G_ε(z, w) = 4w² − 8εw − 1`.
pub fn g_eps(eps: f64) -> BivariateMero {
    BivariateMero::analytic(BivariatePoly::from_terms(&[
        (0, 2, 4.0, 0.0),
        (0, 1, -8.0 * eps, 0.0),
        (0, 0, -1.0, 0.0),
    ]))
}

/// The structure stated for the Milnor map of `G_ε` at radius 1: Morse, one
/// critical point each of index 1 and 2. The dependence criterion actually
/// vanishes on the circle `w = ε`, so runs against it report a discrepancy.
pub fn g_eps_expectation(eps: f64) -> Expectation {
    Expectation { label: format!("G_eps with eps = {eps}"), index_counts: [0, 1, 1, 0] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::argmap::C64;

    #[test]
    fn p1_is_a_mobius_map() {
        assert_eq!(p_n(1).num, vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(p_n(1).den, vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
    }

    #[test]
    fn product_lift_has_no_critical_points() {
        // P_n(z, θ) = e^{iθ} p_n(z): the θ-derivative of its argument is 1
        // everywhere, so no point of the product is critical
        let p = p_n(3);
        for &(z, theta) in &[(C64::new(0.3, 0.2), 0.4), (C64::new(-2.0, 1.0), 2.0)] {
            let h = 1e-6;
            let arg = |t: f64| (C64::from_polar(1.0, t) * p.eval(z)).arg();
            let d = (arg(theta + h) - arg(theta - h)) / (2.0 * h);
            assert!((d - 1.0).abs() < 1e-8);
        }
    }
}
