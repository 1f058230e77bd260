//! Dense matrices of exact rationals.
//!
//! Products clear denominators first (one lcm per operand) and multiply
//! integer matrices, reducing each entry once at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![BigRational::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self {
            n_rows,
            n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigRational]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn trace(&self) -> BigRational {
        assert_eq!(self.n_rows, self.n_cols, "trace of a non-square matrix");
        (0..self.n_rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    /// `self - k I`.
    pub fn minus_identity(&self, k: &BigRational) -> Self {
        assert_eq!(
            self.n_rows, self.n_cols,
            "minus_identity needs a square matrix"
        );
        let mut out = self.clone();
        for i in 0..self.n_rows {
            let v = out.get(i, i) - k;
            out.set(i, i, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n_rows, "vector length mismatch");
        let mut out = vec![BigRational::zero(); self.n_cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n_cols, other.n_rows, "dimension mismatch in product");
        let (a, da) = self.cleared();
        let (b, db) = other.cleared();
        let den = da * db;
        let (n, k, m) = (self.n_rows, self.n_cols, other.n_cols);
        let mut data = Vec::with_capacity(n * m);
        let mut acc = vec![BigInt::zero(); m];
        for i in 0..n {
            acc.iter_mut().for_each(|x| x.set_zero());
            for l in 0..k {
                let x = &a[i * k + l];
                if x.is_zero() {
                    continue;
                }
                for (o, y) in acc.iter_mut().zip(&b[l * m..(l + 1) * m]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            data.extend(acc.iter().map(|x| BigRational::new(x.clone(), den.clone())));
        }
        RationalMatrix {
            n_rows: n,
            n_cols: m,
            data,
        }
    }

    pub fn pow(&self, exp: u64) -> RationalMatrix {
        assert_eq!(self.n_rows, self.n_cols, "power of a non-square matrix");
        let mut out = RationalMatrix::identity(self.n_rows);
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Integer numerators over a common denominator.
    fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = self
            .data
            .iter()
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        (nums, den)
    }

    pub fn max_abs(&self) -> BigRational {
        self.data
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}
