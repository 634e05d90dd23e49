//! Complex polynomials in one and two variables.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type C64 = Complex64;

/// Coefficients below `REL_ZERO` times the largest one count as zero.
pub(crate) const REL_ZERO: f64 = 1e-14;

/// Horner evaluation of ascending coefficients.
pub fn eval(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub fn derivative(c: &[C64]) -> Vec<C64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn max_abs(c: &[C64]) -> f64 {
    c.iter().map(|a| a.norm()).fold(0.0, f64::max)
}

/// Drops high-order coefficients that are negligible relative to the largest.
pub fn trim(c: &[C64]) -> Vec<C64> {
    let scale = max_abs(c);
    let mut v = c.to_vec();
    while v.last().is_some_and(|a| a.norm() <= REL_ZERO * scale) {
        v.pop();
    }
    v
}

/// Number of negligible low-order coefficients, i.e. the order of vanishing
/// at 0 when the low coefficients are exactly representable.
pub fn low_order(c: &[C64]) -> usize {
    let scale = max_abs(c);
    c.iter().take_while(|a| a.norm() <= REL_ZERO * scale).count()
}

/// Coefficient accepted in JSON as a number, `[re, im]` or `{"re", "im"}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Real(f64),
    Pair([f64; 2]),
    Record { re: f64, #[serde(default)] im: f64 },
}

impl From<CoeffRepr> for C64 {
    fn from(c: CoeffRepr) -> Self {
        match c {
            CoeffRepr::Real(x) => C64::new(x, 0.0),
            CoeffRepr::Pair([re, im]) => C64::new(re, im),
            CoeffRepr::Record { re, im } => C64::new(re, im),
        }
    }
}

pub(crate) fn deserialize_coeffs<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
    Ok(Vec::<CoeffRepr>::deserialize(d)?.into_iter().map(C64::from).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub zexp: u32,
    pub wexp: u32,
    pub coeff: C64,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    zexp: u32,
    wexp: u32,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TermRepr { zexp: self.zexp, wexp: self.wexp, re: self.coeff.re, im: self.coeff.im }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TermRepr::deserialize(d)?;
        Ok(Term { zexp: t.zexp, wexp: t.wexp, coeff: C64::new(t.re, t.im) })
    }
}

/// Polynomial in `(z, w)` as a list of terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BivariatePoly {
    pub terms: Vec<Term>,
}

impl BivariatePoly {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn from_terms(terms: &[(u32, u32, f64, f64)]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|&(zexp, wexp, re, im)| Term { zexp, wexp, coeff: C64::new(re, im) })
                .collect(),
        )
    }

    pub fn one() -> Self {
        Self::from_terms(&[(0, 0, 1.0, 0.0)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == C64::new(0.0, 0.0))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| (t.zexp == 0 && t.wexp == 0) || t.coeff.norm() == 0.0)
    }

    pub fn eval(&self, z: C64, w: C64) -> C64 {
        self.terms.iter().map(|t| t.coeff * z.powu(t.zexp) * w.powu(t.wexp)).sum()
    }

    /// Sum of the moduli of the terms at `(z, w)`; the natural scale for
    /// deciding whether a value is numerically zero.
    pub fn magnitude(&self, z: C64, w: C64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * z.norm().powi(t.zexp as i32) * w.norm().powi(t.wexp as i32))
            .sum()
    }

    /// Value together with the holomorphic partials `(∂/∂z, ∂/∂w)`.
    pub fn eval_grad(&self, z: C64, w: C64) -> (C64, [C64; 2]) {
        let zero = C64::new(0.0, 0.0);
        let (mut v, mut dz, mut dw) = (zero, zero, zero);
        for t in &self.terms {
            let zp = z.powu(t.zexp);
            let wp = w.powu(t.wexp);
            v += t.coeff * zp * wp;
            if t.zexp > 0 {
                dz += t.coeff * t.zexp as f64 * z.powu(t.zexp - 1) * wp;
            }
            if t.wexp > 0 {
                dw += t.coeff * t.wexp as f64 * zp * w.powu(t.wexp - 1);
            }
        }
        (v, [dz, dw])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn univariate() {
        let p = vec![c(1.0), c(0.0), c(2.0)];
        assert_eq!(eval(&p, c(3.0)), c(19.0));
        assert_eq!(derivative(&p), vec![c(0.0), c(4.0)]);
        assert_eq!(mul(&[c(1.0), c(1.0)], &[c(-1.0), c(1.0)]), vec![c(-1.0), c(0.0), c(1.0)]);
        assert_eq!(trim(&[c(1.0), c(0.0)]), vec![c(1.0)]);
        assert_eq!(low_order(&[c(0.0), c(0.0), c(3.0)]), 2);
    }

    #[test]
    fn bivariate_grad() {
        let f = BivariatePoly::from_terms(&[(2, 0, 2.0, 0.0), (0, 3, 3.0, 0.0)]);
        let (v, g) = f.eval_grad(c(1.0), c(2.0));
        assert_eq!(v, c(26.0));
        assert_eq!(g, [c(4.0), c(36.0)]);
    }

    #[test]
    fn term_json() {
        let js = r#"[{"zexp": 2, "wexp": 0, "re": 2.0, "im": 0.0}, {"zexp": 0, "wexp": 1, "re": 1.0}]"#;
        let p: BivariatePoly = serde_json::from_str(js).unwrap();
        assert_eq!(p.terms[1].coeff, c(1.0));
        let back = serde_json::to_value(&p).unwrap();
        assert_eq!(back[0]["zexp"], 2);
    }
}
