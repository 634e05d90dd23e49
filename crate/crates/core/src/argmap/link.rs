use nalgebra::{Matrix3, Matrix3x4, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{ArgmapError, BivariateMero, BivariatePoly, C64};

/// Smallest singular value (of the row-normalized Jacobian) accepted as
/// transversal.
const TRANSVERSAL_TOL: f64 = 1e-6;
/// Tracing step, in units of the radius.
const TRACE_STEP: f64 = 0.01;
const MAX_TRACE_STEPS: usize = 200_000;
const LINK_SEED: u64 = 0x11_4e_c0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Divisor {
    Zero,
    Pole,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkVerdict {
    Transversal { components: usize },
    Suspect { radius: f64 },
    EmptyLink,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkComponent {
    pub divisor: Divisor,
    /// Approximate length of the traced circle.
    pub length: f64,
    pub min_singular_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkReport {
    pub radius: f64,
    pub verdict: LinkVerdict,
    pub components: Vec<LinkComponent>,
    pub min_singular_value: f64,
}

type P4 = [f64; 4];

fn cplx(p: P4) -> (C64, C64) {
    (C64::new(p[0], p[1]), C64::new(p[2], p[3]))
}

/// `(Re g, Im g, |x|² − r²)` and its Jacobian in `(Re z, Im z, Re w, Im w)`.
fn system(g: &BivariatePoly, r: f64, p: P4) -> (Vector3<f64>, Matrix3x4<f64>, f64) {
    let (z, w) = cplx(p);
    let (v, [gz, gw]) = g.eval_grad(z, w);
    let e = Vector3::new(v.re, v.im, p.iter().map(|a| a * a).sum::<f64>() - r * r);
    #[rustfmt::skip]
    let j = Matrix3x4::new(
        gz.re, -gz.im, gw.re, -gw.im,
        gz.im, gz.re, gw.im, gw.re,
        2.0 * p[0], 2.0 * p[1], 2.0 * p[2], 2.0 * p[3],
    );
    (e, j, g.magnitude(z, w).max(r * r))
}

/// Newton projection with minimum-norm steps.
fn project(g: &BivariatePoly, r: f64, mut p: P4) -> Option<P4> {
    for _ in 0..60 {
        let (e, j, scale) = system(g, r, p);
        if e.norm() <= 1e-13 * scale {
            return Some(p);
        }
        let jjt: Matrix3<f64> = j * j.transpose();
        let y = jjt.lu().solve(&e)?;
        let step = j.transpose() * y;
        for k in 0..4 {
            p[k] -= step[k];
        }
        if p.iter().any(|a| !a.is_finite()) {
            return None;
        }
    }
    let (e, _, scale) = system(g, r, p);
    (e.norm() <= 1e-10 * scale).then_some(p)
}

fn min_singular(j: &Matrix3x4<f64>) -> f64 {
    let mut n = *j;
    for mut row in n.row_iter_mut() {
        let len = row.norm();
        if len > 0.0 {
            row /= len;
        }
    }
    n.singular_values().min()
}

/// Unit kernel vector of the 3×4 Jacobian, by the generalized cross product.
fn tangent(j: &Matrix3x4<f64>) -> Option<P4> {
    let mut t = [0.0; 4];
    for (k, tk) in t.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        let m = Matrix3::from_fn(|a, b| j[(a, cols[b])]);
        *tk = if k % 2 == 0 { m.determinant() } else { -m.determinant() };
    }
    let len = t.iter().map(|a| a * a).sum::<f64>().sqrt();
    (len > 0.0).then(|| t.map(|a| a / len))
}

fn d4(a: P4, b: P4) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

struct Trace {
    points: Vec<P4>,
    min_sv: f64,
}

/// Follows the curve from `start` until it closes up.
fn trace(g: &BivariatePoly, r: f64, start: P4) -> Option<Trace> {
    let h = TRACE_STEP * r;
    let mut p = start;
    let mut points = vec![start];
    let mut min_sv = f64::INFINITY;
    for k in 0..MAX_TRACE_STEPS {
        let (_, j, _) = system(g, r, p);
        min_sv = min_sv.min(min_singular(&j));
        let t = tangent(&j)?;
        let mut q = p;
        for i in 0..4 {
            q[i] += h * t[i];
        }
        p = project(g, r, q)?;
        if k >= 10 && d4(p, start) < 1.5 * h {
            return Some(Trace { points, min_sv });
        }
        points.push(p);
    }
    None
}

/// Traces `D(F) ∩ rS³` and checks transversality along it.
pub fn check_link_radius(f: &BivariateMero, r: f64, samples: usize) -> Result<LinkReport, ArgmapError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(ArgmapError::BadRadius(r));
    }
    f.validate()?;
    let mut parts = vec![(Divisor::Zero, &f.p)];
    if let Some(q) = f.q.as_ref().filter(|q| !q.is_constant()) {
        parts.push((Divisor::Pole, q));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(LINK_SEED);
    let mut components = Vec::new();
    let mut suspect = false;
    let mut min_sv = f64::INFINITY;
    for (divisor, g) in parts {
        if g.is_constant() {
            continue;
        }
        let seeds: Vec<P4> = (0..samples.max(1))
            .filter_map(|_| {
                let v: P4 = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
                let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                project(g, r, v.map(|a| a * r / len))
            })
            .collect();
        let mut assigned = vec![false; seeds.len()];
        let h = TRACE_STEP * r;
        for i in 0..seeds.len() {
            if assigned[i] {
                continue;
            }
            let Some(tr) = trace(g, r, seeds[i]) else {
                suspect = true;
                assigned[i] = true;
                continue;
            };
            for (s, done) in seeds.iter().zip(assigned.iter_mut()) {
                if !*done && tr.points.iter().any(|&p| d4(p, *s) < 3.0 * h) {
                    *done = true;
                }
            }
            assigned[i] = true;
            min_sv = min_sv.min(tr.min_sv);
            components.push(LinkComponent {
                divisor,
                length: h * tr.points.len() as f64,
                min_singular_value: tr.min_sv,
            });
        }
    }
    let verdict = if components.is_empty() && !suspect {
        LinkVerdict::EmptyLink
    } else if suspect || min_sv <= TRANSVERSAL_TOL {
        LinkVerdict::Suspect { radius: r }
    } else {
        LinkVerdict::Transversal { components: components.len() }
    };
    Ok(LinkReport { radius: r, verdict, components, min_singular_value: min_sv })
}
