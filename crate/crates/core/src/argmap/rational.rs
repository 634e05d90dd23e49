use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::poly::{self, deserialize_coeffs, C64};
use super::{ArgmapError, CritPoint, Location, MorseIndex};

/// `R = num / den`, coefficients ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMap {
    #[serde(deserialize_with = "deserialize_coeffs")]
    pub num: Vec<C64>,
    #[serde(deserialize_with = "deserialize_coeffs")]
    pub den: Vec<C64>,
}

/// Roots of `W` closer than this (relative) are merged into one multiple root.
const CLUSTER_REL: f64 = 1e-3;
/// A root of `W` is a zero or pole of `R` when `|N|` or `|D|` falls below
/// this fraction of its scale.
const ZERO_POLE_REL: f64 = 1e-9;

impl RationalMap {
    pub fn new(num: Vec<C64>, den: Vec<C64>) -> Self {
        Self { num, den }
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Self {
        let c = |v: &[f64]| v.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(c(num), c(den))
    }

    pub fn eval(&self, z: C64) -> C64 {
        poly::eval(&self.num, z) / poly::eval(&self.den, z)
    }

    /// Numerator `N'D − ND'` of the derivative.
    pub fn derivative_numerator(&self) -> Vec<C64> {
        wronskian(&self.num, &self.den)
    }
}

fn wronskian(n: &[C64], d: &[C64]) -> Vec<C64> {
    poly::sub(&poly::mul(&poly::derivative(n), d), &poly::mul(n, &poly::derivative(d)))
}

fn magnitude(c: &[C64], z: C64) -> f64 {
    let r = z.norm();
    c.iter().enumerate().map(|(k, a)| a.norm() * r.powi(k as i32)).sum()
}

/// Critical points of `arg R` on the sphere minus the zeros and poles of
/// `R`: roots of `R'` in both charts, with `local_degree` one more than the
/// order of vanishing of `R'`.
pub fn crit_points_arg_rational(r: &RationalMap) -> Result<Vec<CritPoint>, ArgmapError> {
    let num = poly::trim(&r.num);
    let den = poly::trim(&r.den);
    if den.is_empty() {
        return Err(ArgmapError::ZeroDenominator);
    }
    if num.is_empty() {
        return Err(ArgmapError::ConstantMap);
    }
    let w = poly::trim(&wronskian(&num, &den));
    if w.is_empty() || poly::max_abs(&w) <= 1e-12 * poly::max_abs(&num) * poly::max_abs(&den) {
        return Err(ArgmapError::ConstantMap);
    }

    let mut out = Vec::new();
    for (z, mult) in roots_with_multiplicity(&w) {
        let (nz, dz) = (poly::eval(&num, z), poly::eval(&den, z));
        if nz.norm() <= ZERO_POLE_REL * magnitude(&num, z)
            || dz.norm() <= ZERO_POLE_REL * magnitude(&den, z)
        {
            continue;
        }
        let value = nz / dz;
        let residual = poly::eval(&w, z).norm() / magnitude(&w, z).max(f64::MIN_POSITIVE);
        out.push(point(Location::Finite(z), value, mult, residual));
    }
    out.sort_by(|a, b| {
        let key = |p: &CritPoint| match p.location {
            Location::Finite(z) => (z.re, z.im),
            _ => (f64::INFINITY, f64::INFINITY),
        };
        key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal)
    });

    // chart u = 1/z: R(1/u) = u^(deg D − deg N) · rev(N)(u) / rev(D)(u), so
    // ∞ is a zero or pole unless the degrees agree
    if num.len() == den.len() {
        let rn: Vec<C64> = num.iter().rev().copied().collect();
        let rd: Vec<C64> = den.iter().rev().copied().collect();
        let wi = wronskian(&rn, &rd);
        let mult = poly::low_order(&wi);
        if mult > 0 && mult < wi.len() {
            out.push(point(Location::Infinity, rn[0] / rd[0], mult, 0.0));
        }
    }
    Ok(out)
}

fn point(location: Location, value: C64, mult: usize, residual: f64) -> CritPoint {
    let local_degree = mult as u32 + 1;
    CritPoint {
        location,
        value: value / value.norm(),
        // the germ is Im(z^d): a saddle for d = 2, degenerate beyond
        index: if local_degree == 2 { MorseIndex::Index(1) } else { MorseIndex::Degenerate },
        local_degree: Some(local_degree),
        residual,
    }
}

/// Roots of a nonzero polynomial with multiplicities. The root at 0 comes
/// from exact low-order zeros; the others from companion-matrix eigenvalues,
/// clustered and then polished by Newton's method on the derivative of order
/// `multiplicity − 1`.
pub(crate) fn roots_with_multiplicity(c: &[C64]) -> Vec<(C64, usize)> {
    let c = poly::trim(c);
    let m0 = poly::low_order(&c);
    let mut out = Vec::new();
    if m0 > 0 {
        out.push((C64::new(0.0, 0.0), m0));
    }
    let rest = &c[m0..];
    let deg = rest.len().saturating_sub(1);
    if deg == 0 {
        return out;
    }
    let lead = rest[deg];
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -rest[i] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let eig: Vec<C64> = match companion.eigenvalues() {
        Some(e) => e.iter().copied().collect(),
        None => return out,
    };

    let mut used = vec![false; eig.len()];
    for i in 0..eig.len() {
        if used[i] {
            continue;
        }
        let tol = CLUSTER_REL * eig[i].norm().max(1.0);
        let members: Vec<usize> =
            (i..eig.len()).filter(|&j| !used[j] && (eig[j] - eig[i]).norm() <= tol).collect();
        for &j in &members {
            used[j] = true;
        }
        let mult = members.len();
        let center = members.iter().map(|&j| eig[j]).sum::<C64>() / mult as f64;
        let mut d = rest.to_vec();
        for _ in 1..mult {
            d = poly::derivative(&d);
        }
        out.push((polish(&d, center), mult));
    }
    out
}

fn polish(c: &[C64], mut z: C64) -> C64 {
    let dc = poly::derivative(c);
    for _ in 0..50 {
        let d = poly::eval(&dc, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = poly::eval(c, z) / d;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}
