//! Seifert surfaces of closed braids, Seifert matrices, and Alexander
//! polynomials computed two independent ways.
//!
//! Seifert's algorithm on a closed braid diagram gives one disk per strand and
//! one half-twisted band per letter. First homology has one generator per pair
//! of consecutive bands in the same column; the Seifert form on that basis is
//! written down directly from the band signs and from how generators of
//! neighbouring columns interleave in word order.
//!
//! The Burau route ([`alexander_via_burau`]) never looks at a surface, so the
//! two routes check each other.

use serde::Serialize;

use crate::braid::{BraidError, Braidword, Letter, Sign};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("Seifert matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Burau determinant not divisible by 1 - t^{strands}: {det}")]
    NonExactDivision { strands: usize, det: String },
}

/// Disk-band decomposition of a closed-braid Seifert surface: `disks`
/// 0-handles (one per strand), one 1-handle per letter in word order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleDecomposition {
    pub disks: usize,
    pub bands: Vec<Letter>,
}

impl HandleDecomposition {
    pub fn euler_characteristic(&self) -> i64 {
        self.disks as i64 - self.bands.len() as i64
    }

    /// Boundary circles of the disk-band surface. The boundary of a
    /// Seifert-algorithm surface is the closed braid itself, so this is the
    /// number of cycles of the braid's permutation.
    pub fn boundary_components(&self) -> usize {
        let mut perm: Vec<usize> = (0..self.disks).collect();
        for band in &self.bands {
            perm.swap(band.index - 1, band.index);
        }
        let mut seen = vec![false; self.disks];
        let mut cycles = 0;
        for start in 0..self.disks {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
        cycles
    }

    /// Connected components of the surface: disks joined by bands.
    pub fn surface_components(&self) -> usize {
        let mut joined = vec![false; self.disks.saturating_sub(1)];
        for band in &self.bands {
            joined[band.index - 1] = true;
        }
        1 + joined.iter().filter(|j| !**j).count()
    }
}

pub fn seifert_from_braid(b: &Braidword) -> HandleDecomposition {
    HandleDecomposition { disks: b.strands(), bands: b.letters().to_vec() }
}

/// A Seifert matrix together with the surface data it determines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertMatrix {
    pub matrix: IntMatrix,
    pub chi: i64,
    pub h1: usize,
    pub boundary_components: usize,
    pub connected: bool,
}

impl SeifertMatrix {
    /// Seifert matrix of a connected surface with nonempty boundary. The
    /// boundary count comes from the intersection form `V - Vᵀ`, whose rank
    /// is twice the genus.
    pub fn connected(matrix: IntMatrix) -> Result<Self, SurfaceError> {
        if !matrix.is_square() {
            return Err(SurfaceError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let h1 = matrix.rows();
        let boundary_components = h1 + 1 - intersection_form(&matrix).rank();
        Ok(Self { matrix, chi: 1 - h1 as i64, h1, boundary_components, connected: true })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, SurfaceError> {
        let m = IntMatrix::from_rows(rows).map_err(|e| SurfaceError::NotSquare {
            rows: e.row + 1,
            cols: e.len,
        })?;
        Self::connected(m)
    }

    pub fn disk() -> Self {
        Self::connected(IntMatrix::square(0)).expect("empty matrix is square")
    }

    /// `A(K, n)`, an annulus whose Seifert matrix is `[n]`.
    pub fn annulus(n: i64) -> Self {
        let mut m = IntMatrix::square(1);
        m[(0, 0)] = n;
        Self::connected(m).expect("1x1 is square")
    }

    /// Genus, when the boundary count is consistent with `χ`.
    pub fn genus(&self) -> Option<usize> {
        let twice = 2 - self.chi - self.boundary_components as i64;
        (twice >= 0 && twice % 2 == 0).then_some(twice as usize / 2)
    }
}

fn intersection_form(v: &IntMatrix) -> IntMatrix {
    let vt = v.transpose();
    let mut d = v.clone();
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            d[(i, j)] -= vt[(i, j)];
        }
    }
    d
}

/// Sign rules of the Seifert form on the braid basis. Pairs are
/// `(V[g][h], V[h][g])` with `g` listed before `h`.
///
/// Disk `c + 1` sits above disk `c`, so a loop of column `c` pushed off the
/// surface links a loop of column `c + 1` but not the other way round.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BraidFormRules {
    pub shared_pos: (i64, i64),
    pub shared_neg: (i64, i64),
    /// `g = (a, b)` in column `c`, `h = (x, y)` in column `c + 1`, `a < x < b < y`.
    pub left_first: (i64, i64),
    /// Same columns, `x < a < y < b`.
    pub right_first: (i64, i64),
}

pub(crate) const BRAID_FORM: BraidFormRules = BraidFormRules {
    shared_pos: (1, 0),
    shared_neg: (0, -1),
    left_first: (-1, 0),
    right_first: (1, 0),
};

/// A homology generator: a loop through two consecutive bands of one column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct BandLoop {
    column: usize,
    first: usize,
    second: usize,
}

fn band_loops(b: &Braidword) -> Vec<BandLoop> {
    let mut out = Vec::new();
    for column in 1..b.strands() {
        let positions: Vec<usize> = b
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.index == column)
            .map(|(p, _)| p)
            .collect();
        out.extend(positions.windows(2).map(|w| BandLoop { column, first: w[0], second: w[1] }));
    }
    out
}

pub(crate) fn braid_seifert_form(b: &Braidword, rules: &BraidFormRules) -> IntMatrix {
    let loops = band_loops(b);
    let sign = |p: usize| b.letters()[p].sign.value();
    let mut v = IntMatrix::square(loops.len());
    for (gi, g) in loops.iter().enumerate() {
        v[(gi, gi)] = -(sign(g.first) + sign(g.second)) / 2;
        for (hi, h) in loops.iter().enumerate().skip(gi + 1) {
            let pair = if h.column == g.column && h.first == g.second {
                if b.letters()[g.second].sign == Sign::Pos {
                    rules.shared_pos
                } else {
                    rules.shared_neg
                }
            } else if h.column == g.column + 1 {
                let (a, bb, x, y) = (g.first, g.second, h.first, h.second);
                if a < x && x < bb && bb < y {
                    rules.left_first
                } else if x < a && a < y && y < bb {
                    rules.right_first
                } else {
                    (0, 0)
                }
            } else {
                (0, 0)
            };
            v[(gi, hi)] = pair.0;
            v[(hi, gi)] = pair.1;
        }
    }
    v
}

/// Seifert matrix of the Seifert-algorithm surface of a strict braidword, of
/// size `k - n + 1`.
pub fn seifert_matrix_from_braid(b: &Braidword) -> Result<SeifertMatrix, SurfaceError> {
    b.require_strict()?;
    let v = braid_seifert_form(b, &BRAID_FORM);
    SeifertMatrix::connected(v)
}

/// `det(Vᵀ - t V)` over `Z[t, 1/t]`, normalized modulo `±t^k`.
pub fn alexander_from_seifert(v: &SeifertMatrix) -> LaurentPoly {
    alexander_from_matrix(&v.matrix)
}

pub(crate) fn alexander_from_matrix(v: &IntMatrix) -> LaurentPoly {
    let t = LaurentPoly::monomial(1, 1);
    let m = LaurentMatrix::from_fn(v.rows(), |i, j| {
        &LaurentPoly::constant(v[(j, i)]) - &t.scale(v[(i, j)])
    });
    m.determinant().normalize()
}

/// Reduced Burau matrix of one letter in `B_n`, of size `n - 1`.
pub fn reduced_burau(letter: Letter, strands: usize) -> LaurentMatrix {
    let size = strands - 1;
    let mut m = LaurentMatrix::identity(size);
    let i = letter.index - 1;
    let c = LaurentPoly::constant;
    let t = LaurentPoly::monomial;
    match letter.sign {
        Sign::Pos => {
            m[(i, i)] = t(-1, 1);
            if i > 0 {
                m[(i, i - 1)] = t(1, 1);
            }
            if i + 1 < size {
                m[(i, i + 1)] = c(1);
            }
        }
        Sign::Neg => {
            m[(i, i)] = t(-1, -1);
            if i > 0 {
                m[(i, i - 1)] = c(1);
            }
            if i + 1 < size {
                m[(i, i + 1)] = t(1, -1);
            }
        }
    }
    m
}

/// Alexander polynomial from `det(I - ρ(β)) (1 - t) / (1 - tⁿ)` with `ρ`
/// the reduced Burau representation.
pub fn alexander_via_burau(b: &Braidword) -> Result<LaurentPoly, SurfaceError> {
    b.require_strict()?;
    let n = b.strands();
    let rho = b
        .letters()
        .iter()
        .fold(LaurentMatrix::identity(n - 1), |acc, &l| acc.mul(&reduced_burau(l, n)));
    let det = LaurentMatrix::identity(n - 1).sub(&rho).determinant();
    let one_minus_t = LaurentPoly::from_coeffs(0, vec![1, -1]);
    let one_minus_tn = &LaurentPoly::one() - &LaurentPoly::monomial(1, n as i32);
    let num = &det * &one_minus_t;
    num.div_exact(&one_minus_tn)
        .map(|p| p.normalize())
        .ok_or_else(|| SurfaceError::NonExactDivision { strands: n, det: det.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(s: &str, n: usize) -> Braidword {
        Braidword::parse(s, n).unwrap()
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn handle_decompositions() {
        let hd = seifert_from_braid(&bw("s1 s1 s1", 2));
        assert_eq!((hd.disks, hd.bands.len(), hd.euler_characteristic()), (2, 3, -1));
        let hd = seifert_from_braid(&bw("", 2));
        assert_eq!((hd.disks, hd.bands.len(), hd.euler_characteristic()), (2, 0, 2));
        assert_eq!(hd.surface_components(), 2);
        let hd = seifert_from_braid(&bw("s1 -s2 s1 -s2", 3));
        assert_eq!((hd.disks, hd.bands.len(), hd.euler_characteristic()), (3, 4, -1));
    }

    #[test]
    fn boundary_counts() {
        assert_eq!(seifert_from_braid(&bw("s1 s1 s1", 2)).boundary_components(), 1);
        assert_eq!(seifert_from_braid(&bw("s1 s1", 2)).boundary_components(), 2);
        assert_eq!(seifert_from_braid(&bw("", 2)).boundary_components(), 2);
        assert_eq!(seifert_from_braid(&bw("s1 s2", 3)).boundary_components(), 1);
    }

    #[test]
    fn burau_letters_invert() {
        for n in 2..6 {
            for i in 1..n {
                let prod = reduced_burau(Letter::pos(i), n).mul(&reduced_burau(Letter::neg(i), n));
                assert_eq!(prod, LaurentMatrix::identity(n - 1), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn burau_named_knots() {
        assert_eq!(alexander_via_burau(&bw("s1", 2)).unwrap(), LaurentPoly::one());
        assert_eq!(alexander_via_burau(&bw("s1 s1 s1", 2)).unwrap(), p("1 - t + t^2"));
        assert_eq!(alexander_via_burau(&bw("s1 -s2 s1 -s2", 3)).unwrap(), p("1 - 3*t + t^2"));
        assert_eq!(alexander_via_burau(&bw("", 1)).unwrap(), LaurentPoly::one());
        assert!(matches!(
            alexander_via_burau(&bw("s1", 3)),
            Err(SurfaceError::Braid(BraidError::NotStrict { missing: 2 }))
        ));
    }

    #[test]
    fn seifert_named_knots() {
        let v = seifert_matrix_from_braid(&bw("s1 s1 s1", 2)).unwrap();
        assert_eq!(v.matrix.to_rows(), vec![vec![-1, 1], vec![0, -1]]);
        assert_eq!((v.h1, v.chi, v.boundary_components, v.genus()), (2, -1, 1, Some(1)));
        assert_eq!(alexander_from_seifert(&v), p("1 - t + t^2"));

        let v = seifert_matrix_from_braid(&bw("s1 s1", 2)).unwrap();
        assert_eq!(v.matrix.to_rows(), vec![vec![-1]]);
        assert_eq!(alexander_from_seifert(&v), p("1 - t"));

        let v = seifert_matrix_from_braid(&bw("s1 -s2 s1 -s2", 3)).unwrap();
        assert_eq!(v.h1, 2);
        assert_eq!(alexander_from_seifert(&v), p("1 - 3*t + t^2"));
        assert!(seifert_matrix_from_braid(&bw("s1 s1", 3)).is_err());
    }

    #[test]
    fn alexander_of_small_matrices() {
        assert_eq!(alexander_from_seifert(&SeifertMatrix::annulus(0)), LaurentPoly::zero());
        assert_eq!(alexander_from_seifert(&SeifertMatrix::disk()), LaurentPoly::one());
        let v = SeifertMatrix::from_rows(vec![vec![5, 1], vec![0, 0]]).unwrap();
        assert_eq!(alexander_from_seifert(&v), LaurentPoly::one());
        assert!(SeifertMatrix::from_rows(vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn annulus_metadata() {
        let a = SeifertMatrix::annulus(3);
        assert_eq!((a.h1, a.chi, a.boundary_components, a.genus()), (1, 0, 2, Some(0)));
        let d = SeifertMatrix::disk();
        assert_eq!((d.h1, d.chi, d.boundary_components), (0, 1, 1));
    }
}
