//! Integer matrices, Smith normal form and integral linear solves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A dense rectangular matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::Empty("matrix"));
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(source, j)] * factor;
            self[(target, j)] += v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, source)] * factor;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).to_vec()))
            .finish()
    }
}

/// `left * A * right = diagonal`, with `left` and `right` unimodular.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Diagonal of the normal form, length `min(rows, cols)`; the first
    /// `rank` entries are positive and form a divisibility chain.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal[..self.rank].to_vec()
    }
}

/// Computes the Smith normal form together with the unimodular transforms.
pub fn smith_decomposition(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);
    let mut rank = 0;

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = min_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                left.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                right.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // pivot must divide the whole trailing block
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let one = BigInt::one();
                        d.add_row(t, i, &one);
                        left.add_row(t, i, &one);
                    }
                }
            }
            // move the smallest entry of row/column t onto the diagonal
            let mut best = (t, t);
            for i in t + 1..m {
                if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
            }
            if best.1 != t {
                d.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
        rank += 1;
    }

    let diagonal = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    SmithDecomposition {
        left,
        right,
        diagonal,
        rank,
    }
}

fn min_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = &d[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|b| v.abs() < d[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Invariant factors `d_1 | d_2 | ... | d_r` of `a` (the nonzero diagonal
/// of its Smith normal form).
pub fn smith_normal_form(a: &IntMatrix) -> Vec<BigInt> {
    smith_decomposition(a).invariant_factors()
}

/// Why [`solve_integer_linear`] found no integer solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveFailure {
    /// The system is inconsistent even over the rationals.
    NoRationalSolution,
    /// A rational solution exists (one is given) but no integral one.
    NotIntegral(Vec<BigRational>),
}

/// Finds an integer vector `x` with `A x = b`.
pub fn solve_integer_linear(
    a: &IntMatrix,
    b: &[BigInt],
) -> Result<std::result::Result<Vec<BigInt>, SolveFailure>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_decomposition(a);
    let c = snf.left.mul_vec(b);
    if c[snf.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(Err(SolveFailure::NoRationalSolution));
    }
    let mut integral = true;
    let mut y = vec![BigRational::zero(); a.cols()];
    for i in 0..snf.rank {
        let q = BigRational::new(c[i].clone(), snf.diagonal[i].clone());
        integral &= q.is_integer();
        y[i] = q;
    }
    let x: Vec<BigRational> = (0..a.cols())
        .map(|i| {
            (0..a.cols())
                .map(|k| BigRational::from_integer(snf.right[(i, k)].clone()) * &y[k])
                .sum()
        })
        .collect();
    if integral {
        Ok(Ok(x.into_iter().map(|q| q.to_integer()).collect()))
    } else {
        Ok(Err(SolveFailure::NotIntegral(x)))
    }
}

/// Determinant of a square matrix (fraction-free Bareiss elimination).
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[(k, k)].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}
