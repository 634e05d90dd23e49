use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Serialize, Serializer};

use super::milnor::{dependence_residual, SolverConfig};
use super::{norm2, to_sphere, ArgmapError, BivariateMero, C64};

/// Finite-difference step for Hessians, in units of the radius.
const HESSIAN_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorseIndex {
    Index(u8),
    Degenerate,
}

impl Serialize for MorseIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MorseIndex::Index(k) => s.serialize_u8(*k),
            MorseIndex::Degenerate => s.serialize_str("degenerate"),
        }
    }
}

/// Orthonormal real frame of the tangent space of the sphere through `x`:
/// `i·x`, `(−w̄, z̄)` and `i·(−w̄, z̄)`, normalized.
pub fn tangent_frame(x: [C64; 2]) -> [[C64; 2]; 3] {
    let s = 1.0 / norm2(x).sqrt();
    let [z, w] = [x[0] * s, x[1] * s];
    let i = C64::new(0.0, 1.0);
    let j = [-w.conj(), z.conj()];
    [[i * z, i * w], j, [i * j[0], i * j[1]]]
}

/// The sphere point reached from `x` by moving `r·δ` in the frame and
/// projecting back to radius `r`.
pub(crate) fn chart(x: [C64; 2], r: f64, frame: &[[C64; 2]; 3], d: [f64; 3]) -> [C64; 2] {
    let mut y = x;
    for (e, dk) in frame.iter().zip(d) {
        y[0] += e[0] * (r * dk);
        y[1] += e[1] * (r * dk);
    }
    to_sphere(y, r)
}

/// Classifies a critical point of `f` at the origin of `R^3` from its
/// central-difference Hessian. Also returns the Hessian eigenvalues.
pub fn local_morse_index(f: impl Fn([f64; 3]) -> f64, h: f64, tol_hessian: f64) -> (MorseIndex, [f64; 3]) {
    let at = |a: usize, sa: f64, b: usize, sb: f64| {
        let mut d = [0.0; 3];
        d[a] += sa * h;
        d[b] += sb * h;
        f(d)
    };
    let f0 = f([0.0; 3]);
    let mut hess = Matrix3::zeros();
    for a in 0..3 {
        hess[(a, a)] = (at(a, 1.0, a, 0.0) - 2.0 * f0 + at(a, -1.0, a, 0.0)) / (h * h);
        for b in a + 1..3 {
            let v = (at(a, 1.0, b, 1.0) - at(a, 1.0, b, -1.0) - at(a, -1.0, b, 1.0)
                + at(a, -1.0, b, -1.0))
                / (4.0 * h * h);
            hess[(a, b)] = v;
            hess[(b, a)] = v;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(hess).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let ev = [ev[0], ev[1], ev[2]];
    if ev.iter().any(|l| l.abs() <= tol_hessian) {
        return (MorseIndex::Degenerate, ev);
    }
    (MorseIndex::Index(ev.iter().filter(|&&l| l < 0.0).count() as u8), ev)
}

fn wrap(t: f64) -> f64 {
    let t = (t + PI).rem_euclid(2.0 * PI) - PI;
    if t == -PI { PI } else { t }
}

/// Morse index of the Milnor map of `F` at radius `r` at a critical point,
/// from a local lift of `arg F` unwrapped around its value at the point.
pub fn morse_index(
    f: &BivariateMero,
    r: f64,
    x: [C64; 2],
    cfg: &SolverConfig,
) -> Result<MorseIndex, ArgmapError> {
    Ok(morse_index_with_eigenvalues(f, r, x, cfg)?.0)
}

pub(crate) fn morse_index_with_eigenvalues(
    f: &BivariateMero,
    r: f64,
    x: [C64; 2],
    cfg: &SolverConfig,
) -> Result<(MorseIndex, [f64; 3]), ArgmapError> {
    let residual = dependence_residual(f, x)?;
    if residual > cfg.tol_residual {
        return Err(ArgmapError::NotCritical { residual, tol: cfg.tol_residual });
    }
    let frame = tangent_frame(x);
    let theta0 = f.eval(x).arg();
    let lift = |d: [f64; 3]| theta0 + wrap(f.eval(chart(x, r, &frame, d)).arg() - theta0);
    Ok(local_morse_index(lift, HESSIAN_STEP, cfg.tol_hessian))
}

/// Counts of Morse indices and whether they pair up as a finite Morse
/// circle-valued map must: equally many of index 1 and 2, none of index 0
/// or 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingCheck {
    pub index_counts: [usize; 4],
    pub degenerate: usize,
    pub balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

pub fn morse_pairing(indices: &[MorseIndex]) -> PairingCheck {
    let mut index_counts = [0; 4];
    let mut degenerate = 0;
    for ix in indices {
        match ix {
            MorseIndex::Index(k) if *k < 4 => index_counts[*k as usize] += 1,
            _ => degenerate += 1,
        }
    }
    let mut problems = Vec::new();
    if degenerate > 0 {
        problems.push(format!("{degenerate} degenerate point(s), so the output is not Morse"));
    }
    if index_counts[1] != index_counts[2] {
        problems.push(format!(
            "{} point(s) of index 1 against {} of index 2",
            index_counts[1], index_counts[2]
        ));
    }
    if index_counts[0] + index_counts[3] > 0 {
        problems.push(format!(
            "{} point(s) of index 0 and {} of index 3",
            index_counts[0], index_counts[3]
        ));
    }
    PairingCheck {
        index_counts,
        degenerate,
        balanced: problems.is_empty(),
        flag: (!problems.is_empty()).then(|| problems.join("; ")),
    }
}
