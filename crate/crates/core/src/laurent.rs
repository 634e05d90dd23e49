//! Integer Laurent polynomials in one variable `t`.
//!
//! Values are stored densely from the lowest nonzero exponent upward and are
//! always trimmed, so structural equality is polynomial equality. The zero
//! polynomial has an empty coefficient vector.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParsePolyError {
    #[error("empty polynomial text")]
    Empty,
    #[error("malformed term `{0}`")]
    Term(String),
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^exp`
    pub fn monomial(c: i64, exp: i32) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// Builds `sum_k coeffs[k] * t^(low + k)`.
    pub fn from_coeffs(low: i32, coeffs: Vec<i64>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let map: BTreeMap<i32, i64> = terms.into_iter().fold(BTreeMap::new(), |mut m, (e, c)| {
            *m.entry(e).or_insert(0) += c;
            m
        });
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero();
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![0; (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn min_exp(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        let k = exp - self.low;
        if k < 0 {
            return 0;
        }
        self.coeffs.get(k as usize).copied().unwrap_or(0)
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (self.low + k as i32, c))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Substitutes `t -> 1/t`.
    pub fn invert_variable(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                Self::from_coeffs(-hi, coeffs)
            }
        }
    }

    /// Representative of the class of `self` modulo units `±t^k`: lowest
    /// exponent 0 and positive constant term.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let sign = if self.coeffs[0] < 0 { -1 } else { 1 };
        Self { low: 0, coeffs: self.coeffs.iter().map(|c| sign * c).collect() }
    }

    /// Equality up to multiplication by `±t^k`.
    pub fn eq_up_to_units(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms().map(|(e, c)| c as f64 * t.powi(e)).sum()
    }

    /// Exact quotient `self / divisor` in `Z[t, 1/t]`, or `None` when the
    /// division leaves a remainder or the divisor is zero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.coeffs.clone();
        let d = &divisor.coeffs;
        if rem.len() < d.len() {
            return None;
        }
        let lead = *d.last().unwrap();
        let qlen = rem.len() - d.len() + 1;
        let mut q = vec![0i64; qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + d.len() - 1];
            if top % lead != 0 {
                return None;
            }
            let c = top / lead;
            q[k] = c;
            if c != 0 {
                for (j, &dj) in d.iter().enumerate() {
                    rem[k + j] -= c * dj;
                }
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Self::from_coeffs(self.low - divisor.low, q))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (n, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("t")?,
                (1, m) => write!(f, "{m}*t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, m) => write!(f, "{m}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = ParsePolyError;

    /// Parses text such as `t^-1 - 3 + 2*t^2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParsePolyError::Empty);
        }
        // split into signed terms; a '-' right after '^' belongs to the exponent
        let mut terms = Vec::new();
        let mut current = String::new();
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && prev != Some('^') {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
            prev = Some(ch);
        }
        terms.push(current);

        let mut out = Vec::with_capacity(terms.len());
        for term in terms {
            out.push(parse_term(&term).ok_or_else(|| ParsePolyError::Term(term.clone()))?);
        }
        Ok(Self::from_terms(out))
    }
}

fn parse_term(term: &str) -> Option<(i32, i64)> {
    let (sign, body) = match term.as_bytes().first()? {
        b'-' => (-1, &term[1..]),
        b'+' => (1, &term[1..]),
        _ => (1, term),
    };
    if body.is_empty() {
        return None;
    }
    let Some(tpos) = body.find('t') else {
        return Some((0, sign * body.parse::<i64>().ok()?));
    };
    let raw = &body[..tpos];
    let coeff = match raw.strip_suffix('*').unwrap_or(raw) {
        "" if raw.is_empty() => 1,
        c => c.parse::<i64>().ok()?,
    };
    let rest = &body[tpos + 1..];
    let exp = if rest.is_empty() { 1 } else { rest.strip_prefix('^')?.parse::<i32>().ok()? };
    Some((exp, sign * coeff))
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            poly: BTreeMap<i32, i64>,
        }
        Wire { poly: self.terms().collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            poly: BTreeMap<i32, i64>,
        }
        let w = Wire::deserialize(deserializer)?;
        Ok(Self::from_terms(w.poly))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: Self) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let coeffs = (low..=high).map(|e| self.coeff(e) + rhs.coeff(e)).collect();
        LaurentPoly::from_coeffs(low, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: Self) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: Self) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: Self) -> LaurentPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Square matrix over `Z[t, 1/t]`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    size: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(size: usize) -> Self {
        Self { size, entries: vec![LaurentPoly::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m[(i, i)] = LaurentPoly::one();
        }
        m
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let entries = (0..size * size).map(|k| f(k / size, k % size)).collect();
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        let n = self.size;
        Self::from_fn(n, |i, j| {
            (0..n).fold(LaurentPoly::zero(), |acc, k| {
                let a = &self[(i, k)];
                let b = &rhs[(k, j)];
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            })
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(self.size, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is
    /// exact in `Z[t, 1/t]`. The empty matrix has determinant 1.
    pub fn determinant(&self) -> LaurentPoly {
        let n = self.size;
        if n == 0 {
            return LaurentPoly::one();
        }
        let mut a: Vec<Vec<LaurentPoly>> =
            (0..n).map(|i| self.entries[i * n..(i + 1) * n].to_vec()).collect();
        let mut sign = 1;
        let mut prev = LaurentPoly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return LaurentPoly::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly");
                }
                a[i][k] = LaurentPoly::zero();
            }
            prev = a[k][k].clone();
        }
        a[n - 1][n - 1].scale(sign)
    }
}

impl std::ops::Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;

    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.entries[i * self.size + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.entries[i * self.size + j]
    }
}
