//! Normal and normal idempotent (NI) matrices.
//!
//! A square matrix is normal when its diagonal is zero and no entry is
//! positive. It is NI when additionally `a_ik + a_kj <= a_ij` for all
//! `i, j, k`, which is the same as `A = A ⊙ A`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maxplus::{trop_matmul, Matrix, Scalar};

/// How many fresh samples [`complete_two_columns`] draws before giving up.
pub const COMPLETION_ATTEMPTS: usize = 64;

/// A single failed NI condition. Indices are 0-based; `Display` prints them
/// 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `a_ii != 0`.
    Diagonal { i: usize, value: Scalar },
    /// `a_ij > 0`.
    Positive { i: usize, j: usize, value: Scalar },
    /// `a_ik + a_kj > a_ij`.
    Triangle { i: usize, j: usize, k: usize, lhs: Scalar, rhs: Scalar },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Diagonal { i, value } => {
                write!(f, "diagonal entry a[{},{}] = {value} is not 0", i + 1, i + 1)
            }
            Violation::Positive { i, j, value } => {
                write!(f, "entry a[{},{}] = {value} is positive", i + 1, j + 1)
            }
            Violation::Triangle { i, j, k, lhs, rhs } => write!(
                f,
                "triple ({},{},{}): a[{},{}] + a[{},{}] = {lhs} > a[{},{}] = {rhs}",
                i + 1,
                j + 1,
                k + 1,
                i + 1,
                k + 1,
                k + 1,
                j + 1,
                i + 1,
                j + 1
            ),
        }
    }
}

/// A matrix certified normal: zero diagonal, nonpositive entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalMatrix(Matrix);

impl NormalMatrix {
    pub fn new(m: Matrix) -> Result<NormalMatrix> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        match normal_violations(&m).into_iter().next() {
            Some(v) => Err(Error::NotNormal(v)),
            None => Ok(NormalMatrix(m)),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.rows()
    }
}

/// A matrix certified normal idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiMatrix(Matrix);

impl NiMatrix {
    /// Certifies `m`, failing with the first violated condition.
    pub fn new(m: Matrix) -> Result<NiMatrix> {
        match validate_ni(&m)? {
            NiCheck::Valid(a) => Ok(a),
            NiCheck::Invalid(v) => Err(Error::NotNi(v[0].clone())),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<NiMatrix> {
        NiMatrix::new(Matrix::from_ints(rows)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn order(&self) -> usize {
        self.0.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.0.get(i, j)
    }

    /// Leading principal submatrix; NI matrices are closed under this.
    pub fn principal(&self, k: usize) -> NiMatrix {
        NiMatrix(self.0.principal(k))
    }

    /// Simultaneous row/column permutation; NI is preserved.
    pub fn conjugate(&self, perm: &[usize]) -> NiMatrix {
        NiMatrix(self.0.conjugate(perm))
    }

    pub fn as_normal(&self) -> NormalMatrix {
        NormalMatrix(self.0.clone())
    }
}

/// Outcome of [`validate_ni`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NiCheck {
    Valid(NiMatrix),
    /// Every violated condition, in row-major scan order.
    Invalid(Vec<Violation>),
}

impl NiCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, NiCheck::Valid(_))
    }
}

fn normal_violations(m: &Matrix) -> Vec<Violation> {
    let n = m.rows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let value = m.get(i, j);
            if i == j && !value.is_zero() {
                out.push(Violation::Diagonal { i, value });
            } else if i != j && value > Scalar::ZERO {
                out.push(Violation::Positive { i, j, value });
            }
        }
    }
    out
}

/// Checks the NI conditions and reports every violation.
pub fn validate_ni(m: &Matrix) -> Result<NiCheck> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut out = normal_violations(m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j && j == k {
                    continue;
                }
                let lhs = m.get(i, k) + m.get(k, j);
                let rhs = m.get(i, j);
                if lhs > rhs {
                    out.push(Violation::Triangle { i, j, k, lhs, rhs });
                }
            }
        }
    }
    Ok(if out.is_empty() { NiCheck::Valid(NiMatrix(m.clone())) } else { NiCheck::Invalid(out) })
}

/// Kleene closure `A^{⊙(n-1)}` of a normal matrix, by repeated squaring.
pub fn closure(a: &NormalMatrix) -> NiMatrix {
    let n = a.order();
    let mut power = a.matrix().clone();
    let mut exponent = 1;
    while exponent + 1 < n {
        power = trop_matmul(&power, &power).expect("square matrix");
        exponent *= 2;
    }
    debug_assert_eq!(trop_matmul(&power, &power).expect("square matrix"), power);
    NiMatrix(power)
}

/// Uniform sampler on `[low, high]` over the grid `Z / D`, where `D` is the
/// least common multiple of the bounds' denominators. Integer bounds give
/// uniform integers.
#[derive(Debug, Clone, Copy)]
struct GridSampler {
    lo: i128,
    hi: i128,
    denom: i128,
}

impl GridSampler {
    fn new(low: Scalar, high: Scalar) -> Result<GridSampler> {
        if low > high || high > Scalar::ZERO {
            return Err(Error::InvalidRange { low: low.to_string(), high: high.to_string() });
        }
        let denom = num_integer::lcm(low.denom(), high.denom());
        Ok(GridSampler {
            lo: low.numer() * (denom / low.denom()),
            hi: high.numer() * (denom / high.denom()),
            denom,
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Scalar {
        Scalar::new(rng.gen_range(self.lo..=self.hi), self.denom)
    }
}

/// Off-diagonal entries drawn from `[low, high]`, zero diagonal.
fn sample_normal(n: usize, sampler: &GridSampler, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m.set(i, j, sampler.sample(rng));
            }
        }
    }
    m
}

/// Deterministic random NI matrix: a normal matrix with off-diagonal entries
/// uniform in `[low, high]` (stream: ChaCha8 seeded with `seed`, entries in
/// row-major order), then closed.
pub fn random_ni(n: usize, low: Scalar, high: Scalar, seed: u64) -> Result<NiMatrix> {
    if n < 2 {
        return Err(Error::InvalidDimension { found: n, min: 2 });
    }
    let sampler = GridSampler::new(low, high)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(closure(&NormalMatrix(sample_normal(n, &sampler, &mut rng))))
}

/// Random normal (not necessarily NI) matrix from the same stream as
/// [`random_ni`].
pub fn random_normal(n: usize, low: Scalar, high: Scalar, seed: u64) -> Result<NormalMatrix> {
    if n < 1 {
        return Err(Error::InvalidDimension { found: n, min: 1 });
    }
    let sampler = GridSampler::new(low, high)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(NormalMatrix(sample_normal(n, &sampler, &mut rng)))
}

/// Checks the NI conditions that only involve columns `i` and `j`.
pub fn check_column_pair(col_i: &[Scalar], col_j: &[Scalar], i: usize, j: usize) -> Result<()> {
    let n = col_i.len();
    if col_j.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: col_j.len() });
    }
    if n < 2 {
        return Err(Error::InvalidDimension { found: n, min: 2 });
    }
    if i >= j || j >= n {
        return Err(Error::InvalidColumns { i: i + 1, j: j + 1, n });
    }
    let bad = |msg: String| Err(Error::InconsistentColumns(msg));
    if !col_i[i].is_zero() {
        return bad(format!("a[{},{}] = {} must be 0", i + 1, i + 1, col_i[i]));
    }
    if !col_j[j].is_zero() {
        return bad(format!("a[{},{}] = {} must be 0", j + 1, j + 1, col_j[j]));
    }
    for k in 0..n {
        for (col, c) in [(col_i, i), (col_j, j)] {
            if col[k] > Scalar::ZERO {
                return bad(format!("a[{},{}] = {} is positive", k + 1, c + 1, col[k]));
            }
        }
    }
    let (a_ij, a_ji) = (col_j[i], col_i[j]);
    for k in 0..n {
        if col_i[k] + a_ij > col_j[k] {
            return bad(format!(
                "a[{k1},{i1}] + a[{i1},{j1}] = {} > a[{k1},{j1}] = {}",
                col_i[k] + a_ij,
                col_j[k],
                k1 = k + 1,
                i1 = i + 1,
                j1 = j + 1
            ));
        }
        if col_j[k] + a_ji > col_i[k] {
            return bad(format!(
                "a[{k1},{j1}] + a[{j1},{i1}] = {} > a[{k1},{i1}] = {}",
                col_j[k] + a_ji,
                col_i[k],
                k1 = k + 1,
                i1 = i + 1,
                j1 = j + 1
            ));
        }
    }
    Ok(())
}

/// Completes two prescribed columns (0-based positions `i < j`) to an NI
/// matrix. Remaining entries are sampled from `[low, high]` and closed; a
/// sample whose closure would move a prescribed entry is discarded and
/// redrawn, up to [`COMPLETION_ATTEMPTS`] times.
pub fn complete_two_columns(
    col_i: &[Scalar],
    col_j: &[Scalar],
    i: usize,
    j: usize,
    low: Scalar,
    high: Scalar,
    seed: u64,
) -> Result<NiMatrix> {
    check_column_pair(col_i, col_j, i, j)?;
    let sampler = GridSampler::new(low, high)?;
    let n = col_i.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reason = String::new();
    for _ in 0..COMPLETION_ATTEMPTS {
        let mut m = sample_normal(n, &sampler, &mut rng);
        for k in 0..n {
            m.set(k, i, col_i[k]);
            m.set(k, j, col_j[k]);
        }
        let closed = closure(&NormalMatrix(m));
        let moved = (0..n).flat_map(|k| [(k, i), (k, j)]).find(|&(k, c)| {
            let given = if c == i { col_i[k] } else { col_j[k] };
            closed.get(k, c) != given
        });
        match moved {
            None => return Ok(closed),
            Some((k, c)) => {
                reason = format!(
                    "closure raises a[{},{}] to {}",
                    k + 1,
                    c + 1,
                    closed.get(k, c)
                );
            }
        }
    }
    Err(Error::CompletionFailed { attempts: COMPLETION_ATTEMPTS, reason })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| s(x)).collect()
    }

    #[test]
    fn zero_matrix_is_ni() {
        for n in 1..6 {
            assert!(validate_ni(&Matrix::zeros(n, n)).unwrap().is_valid());
        }
    }

    #[test]
    fn positive_entry_is_reported() {
        let m = Matrix::from_ints(&[&[0, 1], &[-3, 0]]).unwrap();
        let NiCheck::Invalid(v) = validate_ni(&m).unwrap() else { panic!("should be invalid") };
        assert!(v.contains(&Violation::Positive { i: 0, j: 1, value: s(1) }));
        assert!(matches!(NiMatrix::new(m), Err(Error::NotNi(_))));
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let m = Matrix::from_ints(&[&[0, -1, -9], &[-1, 0, -1], &[-1, -1, 0]]).unwrap();
        let NiCheck::Invalid(v) = validate_ni(&m).unwrap() else { panic!("should be invalid") };
        assert_eq!(v, vec![Violation::Triangle { i: 0, j: 2, k: 1, lhs: s(-2), rhs: s(-9) }]);
        assert_eq!(v[0].to_string(), "triple (1,3,2): a[1,2] + a[2,3] = -2 > a[1,3] = -9");
    }

    #[test]
    fn non_square_is_an_error() {
        assert!(matches!(validate_ni(&Matrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn closure_fixes_ni_input_and_zero() {
        let z = NormalMatrix::new(Matrix::zeros(4, 4)).unwrap();
        assert_eq!(closure(&z).matrix(), &Matrix::zeros(4, 4));
        let a = random_ni(6, s(-9), s(-1), 3).unwrap();
        assert_eq!(closure(&a.as_normal()), a);
    }

    #[test]
    fn closure_of_a_path() {
        let m = Matrix::from_ints(&[&[0, -1, -50, -50], &[-50, 0, -1, -50], &[-50, -50, 0, -1], &[-50, -50, -50, 0]])
            .unwrap();
        let c = closure(&NormalMatrix::new(m).unwrap());
        assert_eq!(c.get(0, 3), s(-3));
        assert_eq!(c.get(0, 2), s(-2));
        assert!(validate_ni(c.matrix()).unwrap().is_valid());
    }

    #[test]
    fn random_ni_is_deterministic() {
        let a = random_ni(5, s(-20), s(-10), 42).unwrap();
        let b = random_ni(5, s(-20), s(-10), 42).unwrap();
        assert_eq!(a, b);
        assert!(validate_ni(a.matrix()).unwrap().is_valid());
        let small = random_ni(2, s(-7), s(0), 1).unwrap();
        assert!(small.get(0, 1) + small.get(1, 0) <= Scalar::ZERO);
    }

    #[test]
    fn random_ni_range_checks() {
        assert!(matches!(random_ni(4, s(-5), s(-10), 0), Err(Error::InvalidRange { .. })));
        assert!(matches!(random_ni(4, s(-5), s(1), 0), Err(Error::InvalidRange { .. })));
        assert!(matches!(random_ni(1, s(-5), s(-1), 0), Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn fractional_range_samples_on_the_grid() {
        let a = random_ni(4, Scalar::new(-7, 2), Scalar::new(-1, 3), 9).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(6 % a.get(i, j).denom(), 0);
            }
        }
    }

    #[test]
    fn completes_small_worked_columns() {
        let p = ints(&[0, -10, -11, -15]);
        let q = ints(&[-12, 0, -14, -13]);
        let a = complete_two_columns(&p, &q, 0, 1, s(-20), s(-10), 7).unwrap();
        assert_eq!(a.matrix().column(0), p);
        assert_eq!(a.matrix().column(1), q);
        assert!(validate_ni(a.matrix()).unwrap().is_valid());
    }

    #[test]
    fn completes_columns_at_other_positions() {
        let p = ints(&[-10, -11, 0, -15]);
        let q = ints(&[-14, -13, -12, 0]);
        let a = complete_two_columns(&p, &q, 2, 3, s(-30), s(-20), 7).unwrap();
        assert_eq!(a.matrix().column(2), p);
        assert_eq!(a.matrix().column(3), q);
    }

    #[test]
    fn rejects_inconsistent_columns() {
        let p = ints(&[0, 3, -11]);
        let q = ints(&[-12, 0, -14]);
        let err = complete_two_columns(&p, &q, 0, 1, s(-20), s(-10), 0).unwrap_err();
        assert!(matches!(err, Error::InconsistentColumns(_)), "{err}");

        // a[3,1] + a[1,2] = -1 + -12 > a[3,2] = -14
        let p = ints(&[0, -10, -1]);
        let err = complete_two_columns(&p, &q, 0, 1, s(-20), s(-10), 0).unwrap_err();
        assert!(err.to_string().contains("a[3,1] + a[1,2]"), "{err}");
    }

    #[test]
    fn reports_failed_completion() {
        // a[3,1] = -40 is undercut by the path 3 -> 4 -> 1 for any a[3,4] in range.
        let p = ints(&[0, -1, -40, -1]);
        let q = ints(&[-1, 0, -40, -1]);
        let err = complete_two_columns(&p, &q, 0, 1, s(-2), s(-1), 0).unwrap_err();
        assert!(matches!(err, Error::CompletionFailed { .. }), "{err}");
    }
}
