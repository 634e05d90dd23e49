use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::morse::{chart, morse_index_with_eigenvalues, morse_pairing, tangent_frame, PairingCheck};
use super::{dist, norm2, to_sphere, ArgmapError, BivariateMero, CritPoint, Location, MorseIndex, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub seed_count: usize,
    pub newton_max_iters: usize,
    pub tol_residual: f64,
    pub tol_dedupe: f64,
    pub tol_hessian: f64,
    pub rng_seed: u64,
    /// Single-linkage distance for grouping converged points into candidate
    /// critical curves; `None` means a tenth of the radius.
    pub curve_link: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seed_count: 4096,
            newton_max_iters: 50,
            tol_residual: 1e-10,
            tol_dedupe: 1e-6,
            tol_hessian: 1e-6,
            rng_seed: 0,
            curve_link: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ArgmapError> {
        if self.seed_count == 0 || self.newton_max_iters == 0 {
            return Err(ArgmapError::BadConfig("seed_count and newton_max_iters must be positive"));
        }
        let tols = [self.tol_residual, self.tol_dedupe, self.tol_hessian];
        if tols.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(ArgmapError::BadConfig("tolerances must be positive"));
        }
        if self.curve_link.is_some_and(|c| !(c.is_finite() && c > 0.0)) {
            return Err(ArgmapError::BadConfig("curve_link must be positive"));
        }
        Ok(())
    }
}

/// `b − (Re⟨b, a⟩ / |a|²) a` with `a = (z̄, w̄)` and `b = ∇F / (iF)`.
pub fn residual_vector(f: &BivariateMero, x: [C64; 2]) -> Result<[C64; 2], ArgmapError> {
    let g = f.log_gradient(x)?;
    let minus_i = C64::new(0.0, -1.0);
    let b = [g[0] * minus_i, g[1] * minus_i];
    let a = [x[0].conj(), x[1].conj()];
    let aa = norm2(a);
    if aa == 0.0 {
        return Err(ArgmapError::BadRadius(0.0));
    }
    let proj = (b[0] * x[0] + b[1] * x[1]).re / aa;
    Ok([b[0] - a[0] * proj, b[1] - a[1] * proj])
}

/// Zero exactly where `(z̄, w̄)` and `∇F/(iF)` are real-linearly dependent.
pub fn dependence_residual(f: &BivariateMero, x: [C64; 2]) -> Result<f64, ArgmapError> {
    Ok(norm2(residual_vector(f, x)?).sqrt())
}

/// A positive-dimensional set of converged points, reported instead of
/// Morse points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalCurve {
    pub members: Vec<[C64; 2]>,
    pub diameter: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub curves: Vec<CriticalCurve>,
    /// Positions in the point list of isolated points with a singular Hessian.
    pub degenerate_points: Vec<usize>,
    pub notes: Vec<String>,
}

impl DegeneracyReport {
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty() && self.degenerate_points.is_empty() && self.notes.is_empty()
    }
}

/// A stated critical structure to check a run against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub label: String,
    pub index_counts: [usize; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MilnorReport {
    pub radius: f64,
    pub seeds: usize,
    pub converged_seeds: usize,
    pub points: Vec<CritPoint>,
    pub degeneracy: DegeneracyReport,
    /// Smallest residual seen at any iterate of any seed.
    pub min_residual: f64,
    pub pairing: PairingCheck,
    pub notes: Vec<String>,
}

impl MilnorReport {
    pub fn morse_points(&self) -> impl Iterator<Item = &CritPoint> {
        self.points.iter().filter(|p| p.index != MorseIndex::Degenerate)
    }

    /// Appends a note when the run disagrees with `exp`. Returns whether it
    /// agreed.
    pub fn check_expectation(&mut self, exp: &Expectation) -> bool {
        let found = self.pairing.index_counts;
        let agrees = found == exp.index_counts && self.degeneracy.is_empty();
        if !agrees {
            let want: usize = exp.index_counts.iter().sum();
            let mut note = format!(
                "{}: expected {want} Morse critical point(s) with index counts {:?}, found {} Morse point(s) with index counts {:?}",
                exp.label,
                exp.index_counts,
                self.morse_points().count(),
                found,
            );
            if !self.degeneracy.curves.is_empty() {
                let n: usize = self.degeneracy.curves.iter().map(|c| c.members.len()).sum();
                note.push_str(&format!(
                    " and {} critical curve(s) ({n} converged points) on which the dependence criterion vanishes, so the map is not Morse at this radius",
                    self.degeneracy.curves.len()
                ));
            }
            self.notes.push(note);
        }
        agrees
    }
}

/// Finite-difference step for the Jacobian, in units of the radius.
const JACOBIAN_STEP: f64 = 1e-7;
/// Largest Levenberg-Marquardt step, in units of the radius.
const MAX_STEP: f64 = 0.5;

struct SeedOutcome {
    point: Option<[C64; 2]>,
    best: f64,
}

fn to_real(v: [C64; 2]) -> [f64; 4] {
    [v[0].re, v[0].im, v[1].re, v[1].im]
}

/// Levenberg-Marquardt on the residual vector in tangent coordinates, with
/// retraction to the sphere after every step.
fn solve_seed(f: &BivariateMero, r: f64, x0: [C64; 2], cfg: &SolverConfig) -> SeedOutcome {
    let res = |x| residual_vector(f, x).map(to_real);
    let norm = |v: &[f64; 4]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut x = x0;
    let Ok(mut rx) = res(x) else {
        return SeedOutcome { point: None, best: f64::INFINITY };
    };
    let mut n = norm(&rx);
    let mut best = n;
    let mut lambda = 1e-3;
    for _ in 0..cfg.newton_max_iters {
        if n < cfg.tol_residual {
            break;
        }
        let frame = tangent_frame(x);
        let mut jac = nalgebra::Matrix4x3::<f64>::zeros();
        for k in 0..3 {
            let mut d = [0.0; 3];
            d[k] = JACOBIAN_STEP;
            let Ok(rk) = res(chart(x, r, &frame, d)) else {
                return SeedOutcome { point: None, best };
            };
            for i in 0..4 {
                jac[(i, k)] = (rk[i] - rx[i]) / JACOBIAN_STEP;
            }
        }
        let rv = nalgebra::Vector4::from(rx);
        let jtj = jac.transpose() * jac;
        let jtr = jac.transpose() * rv;
        let scale = jtj.trace() / 3.0;
        let mut accepted = false;
        for _ in 0..12 {
            let a = jtj + nalgebra::Matrix3::identity() * (lambda * scale.max(f64::MIN_POSITIVE));
            let Some(mut step) = a.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let len = step.norm();
            if len > MAX_STEP {
                step *= MAX_STEP / len;
            }
            let y = chart(x, r, &frame, [step[0], step[1], step[2]]);
            if let Ok(ry) = res(y) {
                let ny = norm(&ry);
                if ny < n {
                    (x, rx, n) = (y, ry, ny);
                    best = best.min(n);
                    lambda = (lambda / 10.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    SeedOutcome { point: (n < cfg.tol_residual).then_some(x), best }
}

fn seeds(cfg: &SolverConfig, r: f64) -> Vec<[C64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    (0..cfg.seed_count)
        .map(|_| {
            let v: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            to_sphere([C64::new(v[0], v[1]), C64::new(v[2], v[3])], r)
        })
        .collect()
}

/// Single-linkage clusters of `pts` at distance `link`, in first-member order.
fn clusters(pts: &[[C64; 2]], link: f64) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if dist(pts[i], pts[j]) <= link {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; pts.len()];
    for i in 0..pts.len() {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

/// Critical points of the Milnor map `F/|F|` on the sphere of radius `r`,
/// found by Levenberg-Marquardt from random seeds on the sphere.
///
/// Converged points are deduplicated and classified. Degenerate ones are
/// grouped by single linkage; a group with at least 8 members spread wider
/// than `10 · tol_dedupe` is reported as a critical curve rather than as
/// points.
pub fn crit_points_milnor(
    f: &BivariateMero,
    r: f64,
    cfg: &SolverConfig,
) -> Result<MilnorReport, ArgmapError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(ArgmapError::BadRadius(r));
    }
    cfg.validate()?;
    f.validate()?;

    let outcomes: Vec<SeedOutcome> =
        seeds(cfg, r).into_par_iter().map(|x| solve_seed(f, r, x, cfg)).collect();
    let min_residual = outcomes.iter().map(|o| o.best).fold(f64::INFINITY, f64::min);
    let converged: Vec<[C64; 2]> = outcomes.iter().filter_map(|o| o.point).collect();

    let mut unique: Vec<[C64; 2]> = Vec::new();
    for &p in &converged {
        if unique.iter().all(|&q| dist(p, q) > cfg.tol_dedupe) {
            unique.push(p);
        }
    }

    // classify first: points on a critical curve are degenerate, so only
    // degenerate points are grouped into curves
    let mut points = Vec::new();
    let mut singular = Vec::new();
    for p in unique {
        let residual = dependence_residual(f, p)?;
        let index = match morse_index_with_eigenvalues(f, r, p, cfg) {
            Ok((ix, _)) => ix,
            Err(ArgmapError::NotCritical { .. }) => continue,
            Err(e) => return Err(e),
        };
        let v = f.eval(p);
        let cp = CritPoint {
            location: Location::Sphere(p),
            value: v / v.norm(),
            index,
            local_degree: None,
            residual,
        };
        if index == MorseIndex::Degenerate {
            singular.push((p, cp));
        } else {
            points.push(cp);
        }
    }

    let link = cfg.curve_link.unwrap_or(0.1 * r);
    let mut degeneracy = DegeneracyReport::default();
    let locs: Vec<[C64; 2]> = singular.iter().map(|s| s.0).collect();
    for group in clusters(&locs, link) {
        let members: Vec<[C64; 2]> = group.iter().map(|&i| locs[i]).collect();
        let diameter = members
            .iter()
            .flat_map(|&p| members.iter().map(move |&q| dist(p, q)))
            .fold(0.0, f64::max);
        if members.len() >= 8 && diameter > 10.0 * cfg.tol_dedupe {
            let max_residual = group.iter().map(|&i| singular[i].1.residual).fold(0.0, f64::max);
            degeneracy.curves.push(CriticalCurve { members, diameter, max_residual });
        } else {
            for &i in &group {
                degeneracy.degenerate_points.push(points.len());
                points.push(singular[i].1.clone());
            }
        }
    }
    if !degeneracy.curves.is_empty() {
        degeneracy.notes.push(format!(
            "found {} positive-dimensional critical set(s); the Milnor map at radius {r} is not Morse",
            degeneracy.curves.len()
        ));
    }
    if !degeneracy.degenerate_points.is_empty() {
        degeneracy.notes.push(format!(
            "{} isolated critical point(s) with a singular Hessian",
            degeneracy.degenerate_points.len()
        ));
    }
    let pairing = morse_pairing(&points.iter().map(|p| p.index).collect::<Vec<_>>());
    Ok(MilnorReport {
        radius: r,
        seeds: cfg.seed_count,
        converged_seeds: converged.len(),
        points,
        degeneracy,
        min_residual,
        pairing,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::argmap::examples::{f_mn, g_eps};
    use crate::argmap::BivariatePoly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hand_computed_residuals() {
        let w = BivariateMero::analytic(BivariatePoly::from_terms(&[(0, 1, 1.0, 0.0)]));
        let r = dependence_residual(&w, [c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        let f23 = f_mn(2, 3);
        let r = dependence_residual(&f23, [c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
        assert_eq!(dependence_residual(&w, [c(1.0, 0.0), c(0.0, 0.0)]), Err(ArgmapError::NearDivisor));
    }

    #[test]
    fn gradient_zero_means_residual_zero() {
        let g = g_eps(0.1);
        let x = [c(0.6, (1.0f64 - 0.36 - 0.01).sqrt()), c(0.1, 0.0)];
        assert!(dependence_residual(&g, x).unwrap() < 1e-15);
    }

    #[test]
    fn residual_zero_set_is_scale_invariant() {
        let g = g_eps(0.1);
        let scaled = BivariateMero::analytic(BivariatePoly::new(
            g.p.terms.iter().map(|t| crate::argmap::Term { coeff: t.coeff * c(-2.0, 3.0), ..*t }).collect(),
        ));
        let on = [c(0.0, (0.99f64).sqrt()), c(0.1, 0.0)];
        let off = [c(0.5, 0.5), c(0.5, 0.5)];
        assert!(dependence_residual(&scaled, on).unwrap() < 1e-15);
        let (a, b) = (dependence_residual(&g, off).unwrap(), dependence_residual(&scaled, off).unwrap());
        assert!((a - b).abs() < 1e-12, "{a} {b}");
    }

    #[test]
    fn deterministic_and_negative_control() {
        let cfg = SolverConfig { seed_count: 128, ..SolverConfig::default() };
        let a = crit_points_milnor(&f_mn(2, 3), 1.0, &cfg).unwrap();
        let b = crit_points_milnor(&f_mn(2, 3), 1.0, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.points.is_empty() && a.degeneracy.is_empty());
        assert!(a.min_residual > 1e-3);
    }

    #[test]
    fn config_validation() {
        let cfg = SolverConfig { tol_dedupe: 0.0, ..SolverConfig::default() };
        assert!(crit_points_milnor(&f_mn(2, 3), 1.0, &cfg).is_err());
        assert!(crit_points_milnor(&f_mn(2, 3), -1.0, &SolverConfig::default()).is_err());
    }
}
