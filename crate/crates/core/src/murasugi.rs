//! Murasugi sums of Seifert surfaces at the level of Seifert matrices, with
//! bookkeeping of Euler characteristic, freeness, fiberedness and
//! Morse-Novikov bounds.
//!
//! Every exact Morse-Novikov value carries a [`Citation`]; facts taken from the
//! literature rather than derived here are tagged as assumptions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::{BraidError, Braidword, Sign};
use crate::matrix::IntMatrix;
use crate::surface::{
    alexander_from_seifert, seifert_from_braid, seifert_matrix_from_braid, SeifertMatrix,
    SurfaceError,
};

/// Yes / no / unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    /// The disk bounds the unknot, which is fibered.
    UnknotFibered,
    /// `A(O, ±1)` are Hopf bands, fiber surfaces.
    HopfBandFibered,
    /// `MN(U) = 2` for the two-component unlink bounded by `A(O, 0)`.
    MnUnlink,
    /// `MN(∂A(O, n)) = 2` for `n ≠ ±1`.
    MnAnnulus,
    /// Closures of homogeneous braids are fibered (Stallings).
    HomogeneousBraidFibered,
    /// `MN(closure of b) ≤ 2 I(b)`.
    MnInhomogeneityBound,
    /// `MN(L0 * L1) ≤ MN(L0) + MN(L1)` for a Murasugi sum.
    MnSubadditive,
    /// A Murasugi sum of fiber surfaces is a fiber surface (Gabai). Taken
    /// from the literature.
    FiberedMurasugiSumAssumption,
    /// A Murasugi sum is free iff both summands are free.
    FreeMurasugiSum,
    /// Seifert-algorithm surfaces of closed braids are free.
    BraidSurfaceFree,
    /// Twisting a band leaves the complement of the surface unchanged up to
    /// homeomorphism.
    TwistPreservesFreeness,
    /// `MN(L) ≤ 2 h_f(L)`.
    MnFreeSurfaceBound,
    /// Twist knots have `MN = 2` unless fibered.
    MnTwistKnot,
    /// Genus-one plumbings of two Hopf bands are the trefoils and the
    /// figure-eight knot, all fibered.
    FiberedTwistKnot,
    /// `∂(A(K, n) * A(O, 0))` is an unknot.
    AnnulusPlumbingUnknot,
    /// `MN(D(K, n, ∓1)) = 2` for the doubled knots of knotted annuli in a
    /// genus-one fiber surface.
    MnDoubledKnot,
    /// `MN(∂A(K, n)) ≤ 2` for knotted `K`, valid for annuli inside a genus-one
    /// fiber surface. Assumed for other companions.
    KnottedAnnulusAssumption,
}

impl Citation {
    pub fn tag(self) -> &'static str {
        match self {
            Citation::UnknotFibered => "unknot-fibered",
            Citation::HopfBandFibered => "hopf-band-fibered",
            Citation::MnUnlink => "mn-unlink",
            Citation::MnAnnulus => "mn-annulus",
            Citation::HomogeneousBraidFibered => "homogeneous-braid-fibered",
            Citation::MnInhomogeneityBound => "mn-inhomogeneity-bound",
            Citation::MnSubadditive => "mn-subadditive",
            Citation::FiberedMurasugiSumAssumption => "fibered-murasugi-sum-assumption",
            Citation::FreeMurasugiSum => "free-murasugi-sum",
            Citation::BraidSurfaceFree => "braid-surface-free",
            Citation::TwistPreservesFreeness => "twist-preserves-freeness",
            Citation::MnFreeSurfaceBound => "mn-free-surface-bound",
            Citation::MnTwistKnot => "mn-twist-knot",
            Citation::FiberedTwistKnot => "fibered-twist-knot",
            Citation::AnnulusPlumbingUnknot => "annulus-plumbing-unknot",
            Citation::MnDoubledKnot => "mn-doubled-knot",
            Citation::KnottedAnnulusAssumption => "knotted-annulus-assumption",
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMn {
    pub value: u64,
    pub citation: Citation,
}

impl ExactMn {
    fn new(value: u64, citation: Citation) -> Self {
        Self { value, citation }
    }
}

/// Seifert matrix of a surface expression plus the invariants tracked
/// alongside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertMatrixBundle {
    #[serde(flatten)]
    pub seifert: SeifertMatrix,
    pub free: Tri,
    pub fibered: Tri,
    pub mn_upper: u64,
    pub mn_exact: Option<ExactMn>,
    pub provenance: BTreeSet<Citation>,
}

impl SeifertMatrixBundle {
    pub fn chi(&self) -> i64 {
        self.seifert.chi
    }

    pub fn h1(&self) -> usize {
        self.seifert.h1
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.seifert.matrix
    }

    fn set_exact(&mut self, exact: ExactMn) {
        self.provenance.insert(exact.citation);
        self.mn_exact = Some(exact);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("interaction block is {got_rows}x{got_cols}, expected {rows}x{cols}")]
    InteractionShape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("Murasugi sum needs a positive even gon count, got {0}")]
    BadGon(u32),
    #[error("a 2-gonal sum is a boundary connected sum and needs a zero interaction block")]
    ConnectedSumInteraction,
    #[error("twist index {index} out of range for a surface with h1 = {h1}")]
    TwistIndex { index: usize, h1: usize },
    #[error("Hopf band sign must be -1 or +1, got {0}")]
    HopfSign(i64),
    #[error("companion matrix does not bound a knot ({0} boundary components)")]
    CompanionNotKnot(usize),
    #[error("no Morse-Novikov bound for a twisted surface that is not known to be free")]
    UnboundedTwist,
}

/// Expression tree of Seifert surfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceExpr {
    /// Seifert-algorithm surface of a strict braidword.
    Braid(Braidword),
    /// `A(K, n)`; an absent or empty companion means `K` is the unknot.
    Annulus {
        n: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        companion: Option<IntMatrix>,
    },
    Disk,
    /// `2n`-gonal Murasugi sum; `B` is the upper-right block of the summed
    /// Seifert matrix. A missing `B` is the zero block.
    Plumb {
        gon: u32,
        #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
        interaction: Option<IntMatrix>,
        left: Box<SurfaceExpr>,
        right: Box<SurfaceExpr>,
    },
    /// `turns` full twists in the band crossed once by basis element `index`.
    Twist { child: Box<SurfaceExpr>, index: usize, turns: i64 },
}

impl SurfaceExpr {
    pub fn annulus(n: i64) -> Self {
        SurfaceExpr::Annulus { n, companion: None }
    }

    pub fn plumb(left: SurfaceExpr, right: SurfaceExpr, gon: u32, interaction: IntMatrix) -> Self {
        SurfaceExpr::Plumb {
            gon,
            interaction: Some(interaction),
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Annulus plumbing along the core: 4-gonal with interaction `[1]`.
    pub fn annulus_plumb(left: SurfaceExpr, right: SurfaceExpr) -> Self {
        Self::plumb(left, right, 4, IntMatrix::from_rows(vec![vec![1]]).unwrap())
    }

    pub fn twist(child: SurfaceExpr, index: usize, turns: i64) -> Self {
        SurfaceExpr::Twist { child: Box::new(child), index, turns }
    }

    pub fn eval(&self) -> Result<SeifertMatrixBundle, ExprError> {
        eval(self)
    }
}

/// `[[V0, B], [0, V1]]`.
pub fn plumb_matrices(
    v0: &SeifertMatrix,
    v1: &SeifertMatrix,
    b: &IntMatrix,
) -> Result<SeifertMatrix, ExprError> {
    let (h0, h1) = (v0.h1, v1.h1);
    let b = fit_block(b, h0, h1)?;
    let mut m = IntMatrix::square(h0 + h1);
    for i in 0..h0 {
        for j in 0..h0 {
            m[(i, j)] = v0.matrix[(i, j)];
        }
        for j in 0..h1 {
            m[(i, h0 + j)] = b[(i, j)];
        }
    }
    for i in 0..h1 {
        for j in 0..h1 {
            m[(h0 + i, h0 + j)] = v1.matrix[(i, j)];
        }
    }
    let out = SeifertMatrix::connected(m)?;
    debug_assert_eq!(out.chi, v0.chi + v1.chi - 1);
    Ok(out)
}

fn fit_block(b: &IntMatrix, rows: usize, cols: usize) -> Result<IntMatrix, ExprError> {
    if b.rows() == rows && b.cols() == cols {
        return Ok(b.clone());
    }
    // `[]` in JSON carries no shape; accept it for blocks with no entries
    if rows * cols == 0 && b.rows() * b.cols() == 0 {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    Err(ExprError::InteractionShape { rows, cols, got_rows: b.rows(), got_cols: b.cols() })
}

/// Adds `turns` to the diagonal entry `index`.
pub fn twist_matrix(v: &SeifertMatrix, index: usize, turns: i64) -> Result<SeifertMatrix, ExprError> {
    if index >= v.h1 {
        return Err(ExprError::TwistIndex { index, h1: v.h1 });
    }
    let mut m = v.matrix.clone();
    m[(index, index)] += turns;
    Ok(SeifertMatrix::connected(m)?)
}

pub fn propagate_free(left: Tri, right: Tri) -> Tri {
    match (left, right) {
        (Tri::Yes, Tri::Yes) => Tri::Yes,
        (Tri::No, _) | (_, Tri::No) => Tri::No,
        _ => Tri::Unknown,
    }
}

/// Bound for a Murasugi sum: the sum of the summands' bounds, exact zero
/// when both summands are fibered.
pub fn propagate_mn(
    left: &SeifertMatrixBundle,
    right: &SeifertMatrixBundle,
) -> (u64, Option<ExactMn>) {
    let upper = left.mn_upper + right.mn_upper;
    let exact = (left.fibered == Tri::Yes && right.fibered == Tri::Yes)
        .then(|| ExactMn::new(0, Citation::FiberedMurasugiSumAssumption));
    (upper, exact)
}

pub fn eval(e: &SurfaceExpr) -> Result<SeifertMatrixBundle, ExprError> {
    match e {
        SurfaceExpr::Disk => {
            let mut b = leaf(SeifertMatrix::disk(), Tri::Yes, Tri::Yes, 0);
            b.set_exact(ExactMn::new(0, Citation::UnknotFibered));
            Ok(b)
        }
        SurfaceExpr::Annulus { n, companion } => eval_annulus(*n, companion.as_ref()),
        SurfaceExpr::Braid(word) => eval_braid(word),
        SurfaceExpr::Plumb { gon, interaction, left, right } => {
            if *gon < 2 || gon % 2 != 0 {
                return Err(ExprError::BadGon(*gon));
            }
            let l = eval(left)?;
            let r = eval(right)?;
            let zero = IntMatrix::zeros(l.h1(), r.h1());
            let block = interaction.as_ref().unwrap_or(&zero);
            if *gon == 2 && !block.is_zero() {
                return Err(ExprError::ConnectedSumInteraction);
            }
            let seifert = plumb_matrices(&l.seifert, &r.seifert, block)?;
            let (mn_upper, mn_exact) = propagate_mn(&l, &r);
            let fibered = if mn_exact.is_some() { Tri::Yes } else { Tri::Unknown };
            let mut provenance: BTreeSet<Citation> =
                l.provenance.union(&r.provenance).copied().collect();
            provenance.extend([Citation::MnSubadditive, Citation::FreeMurasugiSum]);
            let mut out = SeifertMatrixBundle {
                seifert,
                free: propagate_free(l.free, r.free),
                fibered,
                mn_upper,
                mn_exact: None,
                provenance,
            };
            if let Some(x) = mn_exact {
                out.set_exact(x);
            }
            Ok(out)
        }
        SurfaceExpr::Twist { child, index, turns } => {
            let c = eval(child)?;
            let seifert = twist_matrix(&c.seifert, *index, *turns)?;
            if *turns == 0 {
                return Ok(SeifertMatrixBundle { seifert, ..c });
            }
            if c.free != Tri::Yes {
                return Err(ExprError::UnboundedTwist);
            }
            let mut provenance = c.provenance;
            provenance.extend([Citation::TwistPreservesFreeness, Citation::MnFreeSurfaceBound]);
            Ok(SeifertMatrixBundle {
                mn_upper: 2 * seifert.h1 as u64,
                seifert,
                free: Tri::Yes,
                fibered: Tri::Unknown,
                mn_exact: None,
                provenance,
            })
        }
    }
}

fn leaf(seifert: SeifertMatrix, free: Tri, fibered: Tri, mn_upper: u64) -> SeifertMatrixBundle {
    SeifertMatrixBundle { seifert, free, fibered, mn_upper, mn_exact: None, provenance: BTreeSet::new() }
}

fn eval_annulus(n: i64, companion: Option<&IntMatrix>) -> Result<SeifertMatrixBundle, ExprError> {
    let seifert = SeifertMatrix::annulus(n);
    let companion = match companion {
        Some(m) if m.rows() > 0 => Some(SeifertMatrix::connected(m.clone())?),
        _ => None,
    };
    let Some(k) = companion else {
        let mut b = match n {
            -1 | 1 => {
                let mut b = leaf(seifert, Tri::Yes, Tri::Yes, 0);
                b.set_exact(ExactMn::new(0, Citation::HopfBandFibered));
                b
            }
            0 => {
                let mut b = leaf(seifert, Tri::Yes, Tri::No, 2);
                b.set_exact(ExactMn::new(2, Citation::MnUnlink));
                b
            }
            _ => {
                let mut b = leaf(seifert, Tri::Yes, Tri::No, 2);
                b.set_exact(ExactMn::new(2, Citation::MnAnnulus));
                b
            }
        };
        b.provenance.insert(Citation::MnAnnulus);
        return Ok(b);
    };
    if k.boundary_components != 1 {
        return Err(ExprError::CompanionNotKnot(k.boundary_components));
    }
    // a nontrivial Alexander polynomial certifies a knotted core, whose
    // group is not free
    let free = if alexander_from_seifert(&k).is_one() { Tri::Unknown } else { Tri::No };
    let mut b = leaf(seifert, free, Tri::Unknown, 2);
    b.provenance.insert(Citation::KnottedAnnulusAssumption);
    Ok(b)
}

fn eval_braid(word: &Braidword) -> Result<SeifertMatrixBundle, ExprError> {
    let inhomogeneity = word.inhomogeneity()?;
    let seifert = seifert_matrix_from_braid(word)?;
    debug_assert_eq!(seifert.boundary_components, seifert_from_braid(word).boundary_components());
    let mut b = if inhomogeneity == 0 {
        let mut b = leaf(seifert, Tri::Yes, Tri::Yes, 0);
        b.set_exact(ExactMn::new(0, Citation::HomogeneousBraidFibered));
        b
    } else {
        let mut b = leaf(seifert, Tri::Yes, Tri::Unknown, 2 * inhomogeneity as u64);
        b.provenance.insert(Citation::MnInhomogeneityBound);
        b
    };
    b.provenance.insert(Citation::BraidSurfaceFree);
    Ok(b)
}

fn hopf_annulus(sign: i64) -> Result<SurfaceExpr, ExprError> {
    match sign {
        -1 | 1 => Ok(SurfaceExpr::annulus(sign)),
        s => Err(ExprError::HopfSign(s)),
    }
}

/// The twist knot bounding `A(O, n) * A(O, hopf_sign)`.
///
/// `n = ±1` gives a trefoil or the figure-eight knot (fibered); `n = 0` gives
/// a genus-one surface whose boundary is the unknot.
pub fn twist_knot(n: i64, hopf_sign: i64) -> Result<(SurfaceExpr, SeifertMatrixBundle), ExprError> {
    let expr = SurfaceExpr::annulus_plumb(SurfaceExpr::annulus(n), hopf_annulus(hopf_sign)?);
    let mut b = eval(&expr)?;
    match n {
        -1 | 1 => {
            b.fibered = Tri::Yes;
            b.set_exact(ExactMn::new(0, Citation::FiberedTwistKnot));
        }
        0 => {
            b.fibered = Tri::Yes;
            b.set_exact(ExactMn::new(0, Citation::AnnulusPlumbingUnknot));
        }
        _ => {
            b.fibered = Tri::No;
            b.set_exact(ExactMn::new(2, Citation::MnTwistKnot));
        }
    }
    Ok((expr, b))
}

/// The doubled knot `D(K, n, hopf_sign)` bounding `A(K, n) * A(O, hopf_sign)`.
/// An empty companion is the unknot and reduces to [`twist_knot`].
pub fn doubled_knot(
    companion: &IntMatrix,
    n: i64,
    hopf_sign: i64,
) -> Result<(SurfaceExpr, SeifertMatrixBundle), ExprError> {
    if companion.rows() == 0 {
        return twist_knot(n, hopf_sign);
    }
    let annulus = SurfaceExpr::Annulus { n, companion: Some(companion.clone()) };
    let expr = SurfaceExpr::annulus_plumb(annulus, hopf_annulus(hopf_sign)?);
    let mut b = eval(&expr)?;
    b.fibered = Tri::No;
    b.set_exact(ExactMn::new(2, Citation::MnDoubledKnot));
    Ok((expr, b))
}

/// Outcome of splitting `A(O, 0)` plumbands off a braid surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deplumbing {
    /// Per column (from 1), the homogeneous cyclic sign word left over.
    pub residual: Vec<Vec<Sign>>,
    /// Number of `A(O, 0)` summands removed.
    pub removed: usize,
}

/// Splits the braid surface column by column and, in each column's cyclic
/// sign word, repeatedly cancels the first cyclically adjacent `(+, -)`
/// pair. Each cancellation is one `A(O, 0)` plumband.
pub fn deplumb_braid_surface(b: &Braidword) -> Result<Deplumbing, BraidError> {
    b.require_strict()?;
    let mut residual = Vec::with_capacity(b.strands().saturating_sub(1));
    let mut removed = 0;
    for column in 1..b.strands() {
        let mut signs: Vec<Sign> =
            b.letters().iter().filter(|l| l.index == column).map(|l| l.sign).collect();
        loop {
            let len = signs.len();
            let pair = (0..len).find(|&j| signs[j] == Sign::Pos && signs[(j + 1) % len] == Sign::Neg);
            let Some(j) = pair else { break };
            let next = (j + 1) % len;
            let (hi, lo) = (j.max(next), j.min(next));
            signs.remove(hi);
            signs.remove(lo);
            removed += 1;
        }
        residual.push(signs);
    }
    Ok(Deplumbing { residual, removed })
}
