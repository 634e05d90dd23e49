//! Critical points of argument maps `F/|F|`: rational maps on the Riemann
//! sphere and Milnor maps of meromorphic functions on spheres in `C^2`.

pub mod examples;
mod link;
mod milnor;
mod morse;
pub mod poly;
mod rational;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

pub use link::{check_link_radius, Divisor, LinkComponent, LinkReport, LinkVerdict};
pub use milnor::{
    crit_points_milnor, dependence_residual, residual_vector, CriticalCurve, DegeneracyReport,
    Expectation, MilnorReport, SolverConfig,
};
pub use morse::{local_morse_index, morse_index, morse_pairing, tangent_frame, MorseIndex, PairingCheck};
pub use poly::{BivariatePoly, Term};
pub use rational::{crit_points_arg_rational, RationalMap};

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArgmapError {
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("numerator is identically zero")]
    ZeroNumerator,
    #[error("the map is constant")]
    ConstantMap,
    #[error("point is on or numerically too close to the zero/pole divisor")]
    NearDivisor,
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("residual {residual:e} exceeds tolerance {tol:e}; not a critical point")]
    NotCritical { residual: f64, tol: f64 },
    #[error("invalid solver configuration: {0}")]
    BadConfig(&'static str),
}

/// `F = P / Q`; an absent `Q` is the constant 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BivariateMero {
    #[serde(rename = "P")]
    pub p: BivariatePoly,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<BivariatePoly>,
}

/// Relative size below which `|P|` or `|Q|` counts as zero.
const DIVISOR_GUARD: f64 = 1e-13;

impl BivariateMero {
    pub fn analytic(p: BivariatePoly) -> Self {
        Self { p, q: None }
    }

    pub fn new(p: BivariatePoly, q: BivariatePoly) -> Self {
        Self { p, q: Some(q) }
    }

    pub fn validate(&self) -> Result<(), ArgmapError> {
        if self.p.is_zero() {
            return Err(ArgmapError::ZeroNumerator);
        }
        if self.q.as_ref().is_some_and(BivariatePoly::is_zero) {
            return Err(ArgmapError::ZeroDenominator);
        }
        Ok(())
    }

    pub fn eval(&self, x: [C64; 2]) -> C64 {
        let p = self.p.eval(x[0], x[1]);
        match &self.q {
            Some(q) => p / q.eval(x[0], x[1]),
            None => p,
        }
    }

    /// `∇F / F = ∇P/P − ∇Q/Q`, refused near `D(F)`.
    pub fn log_gradient(&self, x: [C64; 2]) -> Result<[C64; 2], ArgmapError> {
        let [z, w] = x;
        let (p, gp) = self.p.eval_grad(z, w);
        if p.norm() <= DIVISOR_GUARD * self.p.magnitude(z, w) || p.norm() == 0.0 {
            return Err(ArgmapError::NearDivisor);
        }
        let mut g = [gp[0] / p, gp[1] / p];
        if let Some(qp) = &self.q {
            let (q, gq) = qp.eval_grad(z, w);
            if q.norm() <= DIVISOR_GUARD * qp.magnitude(z, w) || q.norm() == 0.0 {
                return Err(ArgmapError::NearDivisor);
            }
            g[0] -= gq[0] / q;
            g[1] -= gq[1] / q;
        }
        Ok(g)
    }
}

/// Where a critical point lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Location {
    Finite(C64),
    Infinity,
    Sphere([C64; 2]),
}

impl Serialize for Location {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "lowercase")]
        enum Repr {
            Z(C64),
            Zw([C64; 2]),
        }
        match self {
            Location::Finite(z) => Repr::Z(*z).serialize(s),
            Location::Infinity => s.serialize_str("infinity"),
            Location::Sphere(x) => Repr::Zw(*x).serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CritPoint {
    pub location: Location,
    /// Critical value of `arg F`, a unit complex number.
    pub value: C64,
    pub index: MorseIndex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_degree: Option<u32>,
    pub residual: f64,
}

pub(crate) fn norm2(x: [C64; 2]) -> f64 {
    x[0].norm_sqr() + x[1].norm_sqr()
}

pub(crate) fn dist(x: [C64; 2], y: [C64; 2]) -> f64 {
    norm2([x[0] - y[0], x[1] - y[1]]).sqrt()
}

/// `r · x / |x|`.
pub(crate) fn to_sphere(x: [C64; 2], r: f64) -> [C64; 2] {
    let s = r / norm2(x).sqrt();
    [x[0] * s, x[1] * s]
}
