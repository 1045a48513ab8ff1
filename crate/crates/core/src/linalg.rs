//! Dense matrices and Gaussian elimination over a tower level.

use std::ops::{Index, IndexMut};

use crate::gf::{Field, FieldElem};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn identity(field: &Field, n: usize) -> Matrix<FieldElem> {
    Matrix::from_fn(n, n, |i, j| if i == j { field.one() } else { field.zero() })
}

pub fn mat_mul(field: &Field, a: &Matrix<FieldElem>, b: &Matrix<FieldElem>) -> Matrix<FieldElem> {
    assert_eq!(a.cols(), b.rows(), "inner dimensions");
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(field.zero(), |acc, t| {
            let (x, y) = (&a[(i, t)], &b[(t, j)]);
            if x.is_zero() || y.is_zero() {
                acc
            } else {
                field.add(&acc, &field.mul(x, y))
            }
        })
    })
}

/// Row vector times matrix.
pub fn vec_mul(field: &Field, v: &[FieldElem], m: &Matrix<FieldElem>) -> Vec<FieldElem> {
    assert_eq!(v.len(), m.rows());
    (0..m.cols())
        .map(|j| {
            v.iter().enumerate().fold(field.zero(), |acc, (i, x)| {
                if x.is_zero() {
                    acc
                } else {
                    field.add(&acc, &field.mul(x, &m[(i, j)]))
                }
            })
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: &Field, m: &mut Matrix<FieldElem>) -> Vec<usize> {
    for x in m.data.iter_mut() {
        *x = field.lift(x);
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(pr) = (row..m.rows()).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(row, pr);
        let inv = field.inv(&m[(row, col)]).unwrap();
        for j in col..m.cols() {
            m[(row, j)] = field.mul(&m[(row, j)], &inv);
        }
        for i in 0..m.rows() {
            if i == row || m[(i, col)].is_zero() {
                continue;
            }
            let factor = m[(i, col)].clone();
            for j in col..m.cols() {
                if m[(row, j)].is_zero() {
                    continue;
                }
                let t = field.mul(&factor, &m[(row, j)]);
                m[(i, j)] = field.sub(&m[(i, j)], &t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Matrix<FieldElem>) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

/// Determinant by elimination; panics on non-square input.
pub fn det(field: &Field, m: &Matrix<FieldElem>) -> FieldElem {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.map(|x| field.lift(x));
    let mut acc = field.one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| !a[(i, col)].is_zero()) else {
            return field.zero();
        };
        if pr != col {
            a.swap_rows(pr, col);
            acc = field.neg(&acc);
        }
        let pivot = a[(col, col)].clone();
        acc = field.mul(&acc, &pivot);
        let inv = field.inv(&pivot).unwrap();
        for i in col + 1..n {
            if a[(i, col)].is_zero() {
                continue;
            }
            let factor = field.mul(&a[(i, col)], &inv);
            for j in col + 1..n {
                if a[(col, j)].is_zero() {
                    continue;
                }
                let t = field.mul(&factor, &a[(col, j)]);
                a[(i, j)] = field.sub(&a[(i, j)], &t);
            }
        }
    }
    acc
}

/// Nonsingularity test without divisions: rows are combined as
/// `pivot * row_i - a_ik * row_k`, which preserves (non)singularity.
pub fn is_singular(field: &Field, m: &Matrix<FieldElem>) -> bool {
    assert_eq!(m.rows(), m.cols(), "singularity of a non-square matrix");
    let n = m.rows();
    let mut a = m.map(|x| field.lift(x));
    for col in 0..n {
        let Some(pr) = (col..n).find(|&i| !a[(i, col)].is_zero()) else {
            return true;
        };
        a.swap_rows(pr, col);
        for i in col + 1..n {
            if a[(i, col)].is_zero() {
                continue;
            }
            let (piv, f) = (a[(col, col)].clone(), a[(i, col)].clone());
            for j in col + 1..n {
                let t = field.sub(&field.mul(&piv, &a[(i, j)]), &field.mul(&f, &a[(col, j)]));
                a[(i, j)] = t;
            }
        }
    }
    false
}

pub fn inverse(field: &Field, m: &Matrix<FieldElem>) -> Option<Matrix<FieldElem>> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "inverse of a non-square matrix");
    if n == 0 {
        return Some(m.clone());
    }
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            field.one()
        } else {
            field.zero()
        }
    });
    let pivots = rref(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(aug.select_columns(&cols))
}

/// Basis of the left kernel `{v : v M = 0}`, one vector per row.
pub fn left_kernel(field: &Field, m: &Matrix<FieldElem>) -> Vec<Vec<FieldElem>> {
    let mut t = m.transpose();
    let pivots = rref(field, &mut t);
    let free: Vec<usize> = (0..t.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); t.cols()];
            v[f] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&t[(row, f)]);
            }
            v
        })
        .collect()
}

/// Rank of a matrix of `F_p` digits, `p` prime; the rows are consumed.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let p64 = p as u64;
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = pow_mod_p(rows[rank][col] as u64, p64 - 2, p64);
        for v in rows[rank][col..].iter_mut() {
            *v = ((*v as u64 * inv) % p64) as u32;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let f = row[col] as u64;
            if f == 0 {
                continue;
            }
            for j in col..cols {
                let t = (f * pivot[j] as u64) % p64;
                row[j] = ((row[j] as u64 + p64 - t) % p64) as u32;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn pow_mod_p(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{FieldTower, Level};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cofactor_det(field: &Field, m: &Matrix<FieldElem>) -> FieldElem {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)].clone();
        }
        (0..n).fold(field.zero(), |acc, j| {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = m.select_rows(&rows).select_columns(&cols);
            let term = field.mul(&m[(0, j)], &cofactor_det(field, &minor));
            if j % 2 == 0 {
                field.add(&acc, &term)
            } else {
                field.sub(&acc, &term)
            }
        })
    }

    #[test]
    fn det_inverse_kernel_agree() {
        let tower = FieldTower::generate(3, 1, 2, Some(2), 5).unwrap();
        let field = tower.field(Level::Fqmr).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..10 {
                let m = Matrix::from_fn(n, n, |_, _| field.random(&mut rng));
                let d = det(&field, &m);
                assert_eq!(d, cofactor_det(&field, &m));
                assert_eq!(is_singular(&field, &m), d.is_zero());
                match inverse(&field, &m) {
                    Some(inv) => {
                        assert!(!d.is_zero());
                        assert_eq!(mat_mul(&field, &m, &inv), identity(&field, n));
                    }
                    None => assert!(d.is_zero()),
                }
                let ker = left_kernel(&field, &m);
                assert_eq!(ker.len() + rank(&field, &m), n);
                for v in ker {
                    assert!(vec_mul(&field, &v, &m).iter().all(|x| x.is_zero()));
                }
            }
        }
    }

    #[test]
    fn digit_rank_matches_field_rank() {
        let tower = FieldTower::generate(5, 1, 1, None, 0).unwrap();
        let field = tower.field(Level::Fp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m = Matrix::from_fn(3, 5, |_, j| if j == 4 { field.zero() } else { field.random(&mut rng) });
            let digits = m.to_rows().iter().map(|r| r.iter().map(|x| x.digits()[0]).collect()).collect();
            assert_eq!(rank_mod_p(digits, 5), rank(&field, &m));
        }
    }

    #[test]
    fn repeated_row_is_singular() {
        let tower = FieldTower::generate(5, 1, 2, None, 0).unwrap();
        let field = tower.field(Level::Fqm).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let row: Vec<FieldElem> = (0..3).map(|_| field.random(&mut rng)).collect();
        let other: Vec<FieldElem> = (0..3).map(|_| field.random(&mut rng)).collect();
        let m = Matrix::from_rows(vec![row.clone(), other, row]);
        assert!(det(&field, &m).is_zero());
        assert!(rank(&field, &m) <= 2);
    }
}
