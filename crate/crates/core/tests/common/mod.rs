#![allow(dead_code)]

use morsenov_core::argmap::C64;
use morsenov_core::{eval, Braidword, IntMatrix, SeifertMatrixBundle, SurfaceExpr, Tri};
use rand::seq::SliceRandom;
use rand::Rng;

/// Strict word on 2..=max_strands strands with at most max_len letters.
pub fn random_strict_word<R: Rng>(rng: &mut R, max_strands: usize, max_len: usize) -> Braidword {
    let n = rng.random_range(2..=max_strands);
    let k = rng.random_range(n - 1..=max_len.max(n - 1));
    let mut word: Vec<i64> = (1..n as i64).collect();
    while word.len() < k {
        word.push(rng.random_range(1..n as i64));
    }
    word.shuffle(rng);
    for x in &mut word {
        if rng.random_bool(0.5) {
            *x = -*x;
        }
    }
    Braidword::from_signed(n, &word).unwrap()
}

/// Every strict word with exactly `len` letters on `strands` strands.
pub fn all_strict_words(strands: usize, len: usize) -> Vec<Braidword> {
    let letters: Vec<i64> = (1..strands as i64).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::new();
    let total = letters.len().pow(len as u32);
    for mut code in 0..total {
        let mut w = Vec::with_capacity(len);
        for _ in 0..len {
            w.push(letters[code % letters.len()]);
            code /= letters.len();
        }
        let b = Braidword::from_signed(strands, &w).unwrap();
        if b.is_strict() {
            out.push(b);
        }
    }
    out
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.random_range(-1..=1);
        }
    }
    m
}

/// Random well-formed expression with its bundle. Twists are only placed
/// over free children, the case where a bound exists.
pub fn random_expr<R: Rng>(rng: &mut R, depth: usize) -> (SurfaceExpr, SeifertMatrixBundle) {
    let choice = if depth == 0 { rng.random_range(0..4) } else { rng.random_range(0..7) };
    let e = match choice {
        0 => SurfaceExpr::Disk,
        1 => SurfaceExpr::annulus(rng.random_range(-3..=3)),
        2 => SurfaceExpr::Braid(random_strict_word(rng, 3, 6)),
        3 => SurfaceExpr::Annulus {
            n: rng.random_range(-2..=2),
            companion: Some(IntMatrix::from_rows(vec![vec![-1, 1], vec![0, -1]]).unwrap()),
        },
        4 | 5 => {
            let (l, lb) = random_expr(rng, depth - 1);
            let (r, rb) = random_expr(rng, depth - 1);
            if rng.random_bool(0.3) {
                SurfaceExpr::Plumb { gon: 2, interaction: None, left: Box::new(l), right: Box::new(r) }
            } else {
                let gon = 2 * rng.random_range(2..=4);
                SurfaceExpr::plumb(l, r, gon, random_matrix(rng, lb.h1(), rb.h1()))
            }
        }
        _ => {
            let (c, cb) = random_expr(rng, depth - 1);
            if cb.free != Tri::Yes || cb.h1() == 0 {
                c
            } else {
                let index = rng.random_range(0..cb.h1());
                SurfaceExpr::twist(c, index, rng.random_range(-3..=3))
            }
        }
    };
    let b = eval(&e).unwrap();
    (e, b)
}

/// Calls `visit` on every node of `e` with its bundle and its children's.
pub fn walk(e: &SurfaceExpr, visit: &mut dyn FnMut(&SurfaceExpr, &SeifertMatrixBundle, &[SeifertMatrixBundle])) {
    let children: Vec<&SurfaceExpr> = match e {
        SurfaceExpr::Plumb { left, right, .. } => vec![left, right],
        SurfaceExpr::Twist { child, .. } => vec![child],
        _ => vec![],
    };
    for c in &children {
        walk(c, visit);
    }
    let kids: Vec<SeifertMatrixBundle> = children.iter().map(|c| eval(c).unwrap()).collect();
    visit(e, &eval(e).unwrap(), &kids);
}

/// Nelder-Mead minimization of `f` from `x0` with initial simplex size `step`.
pub fn nelder_mead<const N: usize>(f: impl Fn([f64; N]) -> f64, x0: [f64; N], step: f64, iters: usize) -> ([f64; N], f64) {
    let mut simplex: Vec<([f64; N], f64)> = (0..=N)
        .map(|k| {
            let mut x = x0;
            if k > 0 {
                x[k - 1] += step;
            }
            (x, f(x))
        })
        .collect();
    let lerp = |a: [f64; N], b: [f64; N], t: f64| -> [f64; N] { std::array::from_fn(|i| a[i] + t * (b[i] - a[i])) };
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[N].1 - simplex[0].1 <= 1e-30 {
            break;
        }
        let centroid: [f64; N] = std::array::from_fn(|i| simplex[..N].iter().map(|s| s.0[i]).sum::<f64>() / N as f64);
        let worst = simplex[N];
        let xr = lerp(centroid, worst.0, -1.0);
        let fr = f(xr);
        if fr < simplex[0].1 {
            let xe = lerp(centroid, worst.0, -2.0);
            let fe = f(xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
        } else {
            let xc = lerp(centroid, worst.0, 0.5);
            let fc = f(xc);
            if fc < worst.1 {
                simplex[N] = (xc, fc);
            } else {
                let best = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    s.0 = lerp(best, s.0, 0.5);
                    s.1 = f(s.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}

/// `(cos η e^{iα}, sin η e^{iβ})`, scaled to radius `r`.
pub fn hopf(r: f64, eta: f64, alpha: f64, beta: f64) -> [C64; 2] {
    [C64::from_polar(r * eta.cos(), alpha), C64::from_polar(r * eta.sin(), beta)]
}

/// Dependence residual for an analytic `F = P` given by value and gradient
/// closures, written out directly from the criterion.
pub fn residual_by_hand(x: [C64; 2], f: impl Fn([C64; 2]) -> (C64, [C64; 2])) -> f64 {
    let (v, g) = f(x);
    let i = C64::new(0.0, 1.0);
    let b = [g[0] / (i * v), g[1] / (i * v)];
    let a = [x[0].conj(), x[1].conj()];
    let ba = b[0] * a[0].conj() + b[1] * a[1].conj();
    let aa = a[0].norm_sqr() + a[1].norm_sqr();
    let t = ba.re / aa;
    ((b[0] - a[0] * t).norm_sqr() + (b[1] - a[1] * t).norm_sqr()).sqrt()
}

/// Refined residual minima found by a grid scan over Hopf coordinates with
/// `n³` samples, each refined by Nelder-Mead.
pub struct GridOracle {
    pub samples: usize,
    pub grid_minima: usize,
    pub min_grid_residual: f64,
    /// Refined points with their residuals.
    pub refined: Vec<([C64; 2], f64)>,
}

pub fn grid_oracle(r: f64, n: usize, max_refine: usize, res: impl Fn([C64; 2]) -> f64 + Sync) -> GridOracle {
    use std::f64::consts::{FRAC_PI_2, PI};
    let eta = |k: usize| (k as f64 + 0.5) * FRAC_PI_2 / n as f64;
    let ang = |k: usize| k as f64 * 2.0 * PI / n as f64;
    let mut grid = vec![f64::INFINITY; n * n * n];
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = res(hopf(r, eta(a), ang(b), ang(c)));
                grid[idx(a, b, c)] = if v.is_finite() { v } else { f64::INFINITY };
            }
        }
    }
    let mut minima = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = grid[idx(a, b, c)];
                let mut nbrs = vec![idx(a, (b + 1) % n, c), idx(a, (b + n - 1) % n, c), idx(a, b, (c + 1) % n), idx(a, b, (c + n - 1) % n)];
                if a > 0 {
                    nbrs.push(idx(a - 1, b, c));
                }
                if a + 1 < n {
                    nbrs.push(idx(a + 1, b, c));
                }
                if v.is_finite() && nbrs.iter().all(|&j| v <= grid[j]) {
                    minima.push((v, a, b, c));
                }
            }
        }
    }
    minima.sort_by(|x, y| x.0.total_cmp(&y.0));
    let min_grid_residual = minima.first().map_or(f64::INFINITY, |m| m.0);
    let grid_minima = minima.len();
    let stride = (minima.len() / max_refine).max(1);
    let refined = minima
        .iter()
        .step_by(stride)
        .take(max_refine)
        .map(|&(_, a, b, c)| {
            let obj = |p: [f64; 3]| {
                let v = res(hopf(r, p[0], p[1], p[2]));
                if v.is_finite() { v * v } else { f64::INFINITY }
            };
            let (p, v) = nelder_mead(obj, [eta(a), ang(b), ang(c)], 0.5 * FRAC_PI_2 / n as f64, 4000);
            (hopf(r, p[0], p[1], p[2]), v.sqrt())
        })
        .collect();
    GridOracle { samples: n * n * n, grid_minima, min_grid_residual, refined }
}
