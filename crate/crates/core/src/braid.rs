//! Braidwords in the Artin generators, strictness, inhomogeneity, and a
//! bounded rewriting search for words of smaller inhomogeneity.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Neg,
    #[serde(rename = "+")]
    Pos,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// One letter `σ_index^sign`, with `index` counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Self {
        Self { index, sign }
    }

    pub fn pos(index: usize) -> Self {
        Self::new(index, Sign::Pos)
    }

    pub fn neg(index: usize) -> Self {
        Self::new(index, Sign::Neg)
    }

    pub fn inverse(self) -> Self {
        Self::new(self.index, self.sign.flip())
    }

    /// Signed integer encoding used by the JSON format.
    pub fn to_signed(self) -> i64 {
        self.index as i64 * self.sign.value()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "s{}", self.index),
            Sign::Neg => write!(f, "-s{}", self.index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error("generator index {index} out of range [1, {max}] for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize, max: usize },
    #[error("malformed braid token `{0}`")]
    MalformedToken(String),
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("braidword is not strict (generator {missing} unused); its closure is a split link")]
    NotStrict { missing: usize },
}

/// A braidword in `B_n`. Letter order is word order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Braidword {
    strands: usize,
    letters: Vec<Letter>,
}

impl Braidword {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        if let Some(bad) = letters.iter().find(|l| l.index == 0 || l.index >= strands) {
            return Err(BraidError::IndexOutOfRange {
                index: bad.index,
                strands,
                max: strands - 1,
            });
        }
        Ok(Self { strands, letters })
    }

    /// From the signed-integer encoding (`-2` is `σ_2^{-1}`).
    pub fn from_signed(strands: usize, word: &[i64]) -> Result<Self, BraidError> {
        let letters = word
            .iter()
            .map(|&x| {
                let sign = if x < 0 { Sign::Neg } else { Sign::Pos };
                Letter::new(x.unsigned_abs() as usize, sign)
            })
            .collect();
        Self::new(strands, letters)
    }

    /// Parses whitespace- or comma-separated tokens `s3`, `-s3`, `3`, `-3`.
    pub fn parse(text: &str, strands: usize) -> Result<Self, BraidError> {
        let letters = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_token)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.to_signed()).collect()
    }

    /// The word with every letter inverted in place (same columns, opposite
    /// signs). Its closure is the mirror image of the original closure.
    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|l| l.inverse()).collect(),
        }
    }

    pub fn exponent_table(&self) -> ExponentTable {
        let mut counts = vec![[0usize; 2]; self.strands.saturating_sub(1)];
        for l in &self.letters {
            counts[l.index - 1][(l.sign == Sign::Pos) as usize] += 1;
        }
        ExponentTable { counts }
    }

    pub fn is_strict(&self) -> bool {
        self.first_missing_index().is_none()
    }

    fn first_missing_index(&self) -> Option<usize> {
        let mut seen = vec![false; self.strands.saturating_sub(1)];
        for l in &self.letters {
            seen[l.index - 1] = true;
        }
        seen.iter().position(|s| !s).map(|i| i + 1)
    }

    pub(crate) fn require_strict(&self) -> Result<(), BraidError> {
        match self.first_missing_index() {
            None => Ok(()),
            Some(missing) => Err(BraidError::NotStrict { missing }),
        }
    }

    /// `Σ_i min(v(i,-1), v(i,+1))`; zero exactly for homogeneous words.
    pub fn inhomogeneity(&self) -> Result<usize, BraidError> {
        self.require_strict()?;
        Ok(self.exponent_table().inhomogeneity())
    }

    pub fn is_homogeneous(&self) -> Result<bool, BraidError> {
        Ok(self.inhomogeneity()? == 0)
    }

    /// All words reachable by one move: free reduction, a one-step cyclic
    /// rotation (either direction), a distant commutation, or a braid
    /// relation `aba <-> bab` on adjacent columns with equal signs.
    pub fn rewrite_neighbors(&self) -> BTreeSet<Braidword> {
        let w = &self.letters;
        let k = w.len();
        let mut out = BTreeSet::new();
        let with = |letters: Vec<Letter>| Braidword { strands: self.strands, letters };

        for i in 0..k.saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            if a.index == b.index && a.sign != b.sign {
                let mut v = w.clone();
                v.drain(i..i + 2);
                out.insert(with(v));
            }
            if a.index.abs_diff(b.index) >= 2 {
                let mut v = w.clone();
                v.swap(i, i + 1);
                out.insert(with(v));
            }
        }
        if k >= 2 {
            let mut v = w.clone();
            v.rotate_left(1);
            out.insert(with(v));
            let mut v = w.clone();
            v.rotate_right(1);
            out.insert(with(v));
        }
        for i in 0..k.saturating_sub(2) {
            let (a, b, c) = (w[i], w[i + 1], w[i + 2]);
            if a == c && a.sign == b.sign && a.index.abs_diff(b.index) == 1 {
                let mut v = w.clone();
                v[i] = b;
                v[i + 1] = a;
                v[i + 2] = b;
                out.insert(with(v));
            }
        }
        out.remove(self);
        out
    }
}

fn parse_token(tok: &str) -> Result<Letter, BraidError> {
    let bad = || BraidError::MalformedToken(tok.to_string());
    let (sign, rest) = match tok.strip_prefix('-') {
        Some(r) => (Sign::Neg, r),
        None => (Sign::Pos, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let digits = rest
        .strip_prefix('s')
        .or_else(|| rest.strip_prefix('S'))
        .or_else(|| rest.strip_prefix('σ'))
        .unwrap_or(rest);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let index = digits.parse::<usize>().map_err(|_| bad())?;
    Ok(Letter::new(index, sign))
}

impl fmt::Display for Braidword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.to_signed())
    }
}

#[derive(Serialize, Deserialize)]
struct BraidWire {
    strands: usize,
    word: Vec<i64>,
}

impl Serialize for Braidword {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BraidWire { strands: self.strands, word: self.to_signed() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Braidword {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = BraidWire::deserialize(deserializer)?;
        Braidword::from_signed(w.strands, &w.word).map_err(serde::de::Error::custom)
    }
}

/// Letter counts `v(i, ε)` per column and sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable {
    counts: Vec<[usize; 2]>,
}

impl ExponentTable {
    /// `v(i, ε)` for a column `i` counted from 1.
    pub fn count(&self, index: usize, sign: Sign) -> usize {
        self.counts[index - 1][(sign == Sign::Pos) as usize]
    }

    pub fn columns(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|c| c[0] + c[1]).sum()
    }

    pub fn inhomogeneity(&self) -> usize {
        self.counts.iter().map(|c| c[0].min(c[1])).sum()
    }
}

/// Result of [`minimize_inhomogeneity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimized {
    pub word: Braidword,
    pub inhomogeneity: usize,
    pub visited: usize,
}

/// Breadth-first search over [`Braidword::rewrite_neighbors`], visiting at
/// most `budget` distinct words, for a strict word of least inhomogeneity.
///
/// Non-strict words stay in the frontier but are never returned. Among the
/// best candidates the one minimal in `(inhomogeneity, length, letters)` wins;
/// a homogeneous input is returned unchanged.
pub fn minimize_inhomogeneity(b: &Braidword, budget: usize) -> Result<Minimized, BraidError> {
    let start = b.inhomogeneity()?;
    if start == 0 || budget <= 1 {
        return Ok(Minimized { word: b.clone(), inhomogeneity: start, visited: 1 });
    }
    let key = |w: &Braidword, i: usize| (i, w.len(), w.letters.clone());

    let mut best = (key(b, start), b.clone());
    let mut visited: HashSet<Braidword> = HashSet::from([b.clone()]);
    let mut queue = VecDeque::from([b.clone()]);
    'search: while let Some(w) = queue.pop_front() {
        for next in w.rewrite_neighbors() {
            if visited.len() >= budget {
                break 'search;
            }
            if !visited.insert(next.clone()) {
                continue;
            }
            if next.is_strict() {
                let i = next.exponent_table().inhomogeneity();
                let k = key(&next, i);
                if k < best.0 {
                    best = (k, next.clone());
                }
            }
            queue.push_back(next);
        }
    }
    let (k, word) = best;
    Ok(Minimized { word, inhomogeneity: k.0, visited: visited.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bw(s: &str, n: usize) -> Braidword {
        Braidword::parse(s, n).unwrap()
    }

    #[test]
    fn parse_examples() {
        let b = bw("s1 s1 s1", 2);
        assert_eq!(b.letters(), &[Letter::pos(1); 3]);
        let b = bw("s1 -s2 s1 -s2", 3);
        assert_eq!(b.to_signed(), vec![1, -2, 1, -2]);
        assert_eq!(bw("1,-2, 1 -2", 3), b);
        assert_eq!(
            Braidword::parse("s5", 3),
            Err(BraidError::IndexOutOfRange { index: 5, strands: 3, max: 2 })
        );
        assert!(matches!(Braidword::parse("x1", 3), Err(BraidError::MalformedToken(_))));
        assert!(matches!(Braidword::parse("s", 3), Err(BraidError::MalformedToken(_))));
        assert!(matches!(Braidword::parse("s0", 3), Err(BraidError::IndexOutOfRange { .. })));
        assert_eq!(Braidword::parse("", 0), Err(BraidError::NoStrands));
    }

    #[test]
    fn json_format() {
        let b = bw("s1 -s2 s1 -s2", 3);
        let js = serde_json::to_string(&b).unwrap();
        assert_eq!(js, r#"{"strands":3,"word":[1,-2,1,-2]}"#);
        assert_eq!(serde_json::from_str::<Braidword>(&js).unwrap(), b);
        assert!(serde_json::from_str::<Braidword>(r#"{"strands":2,"word":[3]}"#).is_err());
    }

    #[test]
    fn strictness() {
        assert!(!bw("s1 s1", 3).is_strict());
        assert!(bw("s1 -s2 s1 -s2", 3).is_strict());
        assert!(!bw("", 2).is_strict());
        assert!(bw("", 1).is_strict());
    }

    #[test]
    fn inhomogeneity_examples() {
        assert_eq!(bw("s1 s1 s1", 2).inhomogeneity(), Ok(0));
        assert_eq!(bw("s1 s1 -s1 s1", 2).inhomogeneity(), Ok(1));
        assert_eq!(bw("s1 -s2 s1 -s2", 3).inhomogeneity(), Ok(0));
        assert_eq!(bw("", 1).inhomogeneity(), Ok(0));
        assert_eq!(bw("s1 s1", 3).inhomogeneity(), Err(BraidError::NotStrict { missing: 2 }));
        let t = bw("s1 s1 -s1 s1", 2).exponent_table();
        assert_eq!((t.count(1, Sign::Pos), t.count(1, Sign::Neg)), (3, 1));
    }

    #[test]
    fn neighbor_examples() {
        assert!(bw("s1 -s1", 2).rewrite_neighbors().contains(&bw("", 2)));
        assert!(bw("s1 s3", 4).rewrite_neighbors().contains(&bw("s3 s1", 4)));
        assert!(bw("s1 s2 s1", 3).rewrite_neighbors().contains(&bw("s2 s1 s2", 3)));
        assert!(bw("-s1 -s2 -s1", 3).rewrite_neighbors().contains(&bw("-s2 -s1 -s2", 3)));
        // mixed signs are not a braid relation
        assert!(!bw("s1 -s2 s1", 3).rewrite_neighbors().contains(&bw("-s2 s1 -s2", 3)));
        // adjacent columns do not commute
        assert!(!bw("s1 s2 s3", 4).rewrite_neighbors().contains(&bw("s2 s1 s3", 4)));
    }

    #[test]
    fn minimize_examples() {
        let m = minimize_inhomogeneity(&bw("s1 s1 -s1 s1", 2), 1000).unwrap();
        assert_eq!(m.inhomogeneity, 0);
        assert_eq!(m.word, bw("s1 s1", 2));

        let homog = bw("s1 s2 s1", 3);
        let m = minimize_inhomogeneity(&homog, 1000).unwrap();
        assert_eq!((m.inhomogeneity, &m.word), (0, &homog));

        let w = bw("s1 -s1 s1 -s2 s2", 3);
        let m = minimize_inhomogeneity(&w, 1).unwrap();
        assert_eq!((m.inhomogeneity, &m.word), (2, &w));

        assert!(minimize_inhomogeneity(&bw("s1", 3), 10).is_err());
    }

    #[test]
    fn minimize_skips_non_strict_words() {
        // free reduction reaches `s1`, which is homogeneous but not strict in B3
        let w = bw("s1 s2 -s2", 3);
        let m = minimize_inhomogeneity(&w, 5000).unwrap();
        assert!(m.word.is_strict());
        assert_eq!(m.inhomogeneity, 1);
    }

    fn strict_word() -> impl Strategy<Value = Braidword> {
        (2usize..5).prop_flat_map(|n| {
            proptest::collection::vec((1..n, any::<bool>()), 0..10).prop_filter_map(
                "strict",
                move |raw| {
                    let letters = raw
                        .into_iter()
                        .map(|(i, p)| Letter::new(i, if p { Sign::Pos } else { Sign::Neg }))
                        .collect();
                    let b = Braidword::new(n, letters).ok()?;
                    b.is_strict().then_some(b)
                },
            )
        })
    }

    proptest! {
        #[test]
        fn inhomogeneity_bounds(b in strict_word()) {
            let i = b.inhomogeneity().unwrap();
            prop_assert!(i <= b.len() / 2);
            prop_assert_eq!(b.exponent_table().total(), b.len());
        }

        #[test]
        fn inhomogeneity_invariant_under_rotation_and_commutation(b in strict_word()) {
            let i = b.inhomogeneity().unwrap();
            let mut moved = Vec::new();
            let mut rot = b.letters().to_vec();
            rot.rotate_left(1);
            moved.push(rot);
            for k in 0..b.len().saturating_sub(1) {
                if b.letters()[k].index.abs_diff(b.letters()[k + 1].index) >= 2 {
                    let mut v = b.letters().to_vec();
                    v.swap(k, k + 1);
                    moved.push(v);
                }
            }
            for letters in moved {
                let nb = Braidword::new(b.strands(), letters).unwrap();
                prop_assert!(b.rewrite_neighbors().contains(&nb) || nb == b);
                prop_assert_eq!(nb.exponent_table(), b.exponent_table());
                prop_assert_eq!(nb.inhomogeneity().unwrap(), i);
            }
        }

        #[test]
        fn free_reduction_shrinks_counts(b in strict_word()) {
            for nb in b.rewrite_neighbors().into_iter().filter(|nb| nb.len() != b.len()) {
                prop_assert_eq!(nb.len() + 2, b.len());
                let (t0, t1) = (b.exponent_table(), nb.exponent_table());
                for c in 1..b.strands() {
                    for s in [Sign::Neg, Sign::Pos] {
                        prop_assert!(t1.count(c, s) <= t0.count(c, s));
                    }
                }
            }
        }

        #[test]
        fn minimize_never_worse(b in strict_word(), budget in 1usize..200) {
            let m = minimize_inhomogeneity(&b, budget).unwrap();
            prop_assert!(m.inhomogeneity <= b.inhomogeneity().unwrap());
            prop_assert!(m.word.is_strict());
            prop_assert_eq!(m.word.inhomogeneity().unwrap(), m.inhomogeneity);
            prop_assert!(m.visited <= budget.max(1));
        }

        #[test]
        fn search_is_deterministic(b in strict_word()) {
            prop_assert_eq!(minimize_inhomogeneity(&b, 300), minimize_inhomogeneity(&b, 300));
        }
    }
}
