//! Dense linear algebra over an exact [`Field`]. Matrices are row lists;
//! subspaces are represented by row bases in reduced row echelon form.

use super::field::Field;

pub type Row<F> = Vec<<F as Field>::Elem>;

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref<F: Field>(field: &F, rows: &mut Vec<Row<F>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(found) = (top..rows.len()).find(|&r| !field.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(top, found);
        let inv = field.inv(&rows[top][col]).expect("pivot is nonzero");
        for x in rows[top].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(x, &field.mul(&factor, p));
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

pub fn rank<F: Field>(field: &F, rows: &[Row<F>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Canonical basis (RREF rows) of the row space.
pub fn row_space<F: Field>(field: &F, rows: &[Row<F>]) -> Vec<Row<F>> {
    let mut m = rows.to_vec();
    rref(field, &mut m);
    m
}

/// Basis of `{ v : A v = 0 }` for the matrix with the given rows and `ncols` columns.
pub fn null_space<F: Field>(field: &F, rows: &[Row<F>], ncols: usize) -> Vec<Row<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(&row[f]);
            }
            v
        })
        .collect()
}

/// Intersection of two row spaces inside `F^dim`, as a canonical basis.
///
/// Uses annihilators: `U ∩ W = (U^⊥ + W^⊥)^⊥` for the standard bilinear
/// form, which is nondegenerate over every field.
pub fn intersect<F: Field>(field: &F, a: &[Row<F>], b: &[Row<F>], dim: usize) -> Vec<Row<F>> {
    let mut perp = null_space(field, a, dim);
    perp.extend(null_space(field, b, dim));
    let basis = null_space(field, &perp, dim);
    row_space(field, &basis)
}

/// Canonical basis of the sum of two row spaces.
pub fn sum<F: Field>(field: &F, a: &[Row<F>], b: &[Row<F>]) -> Vec<Row<F>> {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    row_space(field, &all)
}

/// True if `v` lies in the row space of `basis`.
pub fn contains<F: Field>(field: &F, basis: &[Row<F>], v: &[F::Elem]) -> bool {
    let mut m = basis.to_vec();
    let before = rank(field, &m);
    m.push(v.to_vec());
    rank(field, &m) == before
}

/// Solves `A x = b`, returning one solution (free variables set to zero).
pub fn solve<F: Field>(field: &F, a: &[Row<F>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Row<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Applies `A` (rows) to `x`.
pub fn apply<F: Field>(field: &F, a: &[Row<F>], x: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|row| field.dot(row, x)).collect()
}
