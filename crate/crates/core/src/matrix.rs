//! Small dense integer matrices.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ragged matrix rows: row {row} has {len} entries, expected {expected}")]
pub struct RaggedRows {
    pub row: usize,
    pub len: usize,
    pub expected: usize,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn square(n: usize) -> Self {
        Self::zeros(n, n)
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, RaggedRows> {
        let cols = rows.first().map_or(0, Vec::len);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(RaggedRows { row, len: r.len(), expected: cols });
            }
        }
        Ok(Self { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    /// Like [`IntMatrix::from_rows`] but keeps an explicit shape for empty
    /// row lists (a `0 x cols` or `rows x 0` block).
    pub fn with_shape(rows: usize, cols: usize, data: Vec<Vec<i64>>) -> Result<Self, RaggedRows> {
        if rows * cols == 0 && data.iter().all(Vec::is_empty) && (data.is_empty() || data.len() == rows) {
            return Ok(Self::zeros(rows, cols));
        }
        Self::from_rows(data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Rank over the rationals, by fraction-free elimination in `i128`.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..self.rows {
                if a[r][col] == 0 {
                    continue;
                }
                let (f, g) = (a[rank][col], a[r][col]);
                let pivot = a[rank].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot).skip(col) {
                    *x = *x * f - y * g;
                }
                let gcd = a[r].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
                if gcd > 1 {
                    a[r].iter_mut().for_each(|x| *x /= gcd);
                }
            }
            rank += 1;
        }
        rank
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let m = IntMatrix::from_rows(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(IntMatrix::square(0).rank(), 0);
        assert_eq!(IntMatrix::square(3).rank(), 0);
    }

    #[test]
    fn shapes() {
        assert!(IntMatrix::from_rows(vec![vec![1], vec![1, 2]]).is_err());
        let b = IntMatrix::with_shape(0, 2, vec![]).unwrap();
        assert_eq!((b.rows(), b.cols()), (0, 2));
        let m = IntMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.transpose().to_rows(), vec![vec![1, 3], vec![2, 4]]);
    }
}
