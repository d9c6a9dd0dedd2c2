use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::maxplus::{ProjectivePoint, Scalar};

/// Dense row-major matrix of finite scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Ragged { row: r, found: row.len(), expected: ncols });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Matrix> {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Matrix {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
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

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Column `j` as a point of the tropical projective space.
    pub fn column_point(&self, j: usize) -> Result<ProjectivePoint> {
        ProjectivePoint::canonicalize(&self.column(j))
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Leading principal submatrix of order `k`.
    pub fn principal(&self, k: usize) -> Matrix {
        Matrix::from_fn(k, k, |i, j| self.get(i, j))
    }

    /// Simultaneous row and column permutation: entry `(a, b)` of the result is
    /// entry `(perm[a], perm[b])` of `self`.
    pub fn conjugate(&self, perm: &[usize]) -> Matrix {
        Matrix::from_fn(perm.len(), perm.len(), |a, b| self.get(perm[a], perm[b]))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Max-plus product: `(A ⊙ B)_ij = max_k (a_ik + b_kj)`.
pub fn trop_matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch { left: a.cols, right: b.rows });
    }
    if a.cols == 0 {
        return Err(Error::InvalidDimension { found: 0, min: 1 });
    }
    Ok(Matrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols).map(|k| a.get(i, k) + b.get(k, j)).max().expect("nonempty inner dimension")
    }))
}

/// Tropical determinant of a square matrix together with the number of
/// permutations attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TropDet {
    pub value: Scalar,
    pub attain_count: usize,
}

impl TropDet {
    pub fn is_singular(&self) -> bool {
        self.attain_count >= 2
    }
}

/// Tropical determinant by exhaustive permutation enumeration.
pub fn trop_det(a: &Matrix) -> Result<TropDet> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    if a.rows == 0 {
        return Err(Error::InvalidDimension { found: 0, min: 1 });
    }
    let n = a.rows;
    let mut best: Option<TropDet> = None;
    let mut used = vec![false; n];
    enumerate(a, 0, Scalar::ZERO, &mut used, &mut best);
    Ok(best.expect("at least one permutation"))
}

fn enumerate(a: &Matrix, row: usize, acc: Scalar, used: &mut [bool], best: &mut Option<TropDet>) {
    let n = a.rows;
    if row == n {
        match best {
            Some(b) if acc < b.value => {}
            Some(b) if acc == b.value => b.attain_count += 1,
            _ => *best = Some(TropDet { value: acc, attain_count: 1 }),
        }
        return;
    }
    for col in 0..n {
        if !used[col] {
            used[col] = true;
            enumerate(a, row + 1, acc + a.get(row, col), used, best);
            used[col] = false;
        }
    }
}

/// Whether `x` lies on the stable tropical line through `p` and `q`: every
/// 3x3 tropical minor of the `n x 3` matrix `[p q x]` is tropically singular.
pub fn rank2_membership(p: &ProjectivePoint, q: &ProjectivePoint, x: &ProjectivePoint) -> Result<bool> {
    let n = p.dim();
    if q.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: q.dim() });
    }
    if x.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: x.dim() });
    }
    if n < 3 {
        return Err(Error::InvalidDimension { found: n, min: 3 });
    }
    if p == q {
        return Err(Error::Degenerate("p and q are the same point".into()));
    }
    let cols = [p.coords(), q.coords(), x.coords()];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let minor = Matrix::from_fn(3, 3, |r, k| cols[k][[a, b, c][r]]);
                if !trop_det(&minor)?.is_singular() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
