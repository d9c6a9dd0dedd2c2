//! Closed forms for lines in the tropical projective plane and 3-space.

use std::fmt;

use crate::diff::DifferenceMatrix;
use crate::error::{Error, Result};
use crate::maxplus::{trop_distance, ProjectivePoint, Scalar};

/// The six tropical 2x2 minors `m_ab = max(p_a + q_b, p_b + q_a)` of a pair
/// of points in 3-space, and the three sums over complementary pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlueckerData {
    m: [[Scalar; 4]; 4],
    sums: [Scalar; 3],
    max: Scalar,
}

/// The three ways of pairing up `{0, 1, 2, 3}`, indexed by the partner of 0.
const PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

impl PlueckerData {
    /// `m_ab` for `a != b`, 0-based and symmetric.
    pub fn get(&self, a: usize, b: usize) -> Scalar {
        assert!(a != b && a < 4 && b < 4, "m[{a},{b}] is not a minor");
        self.m[a][b]
    }

    /// `m`, the largest of `m_12 + m_34`, `m_13 + m_24`, `m_14 + m_23`.
    pub fn max(&self) -> Scalar {
        self.max
    }

    /// The three sums in the order `{12,34}`, `{13,24}`, `{14,23}`.
    pub fn sums(&self) -> [Scalar; 3] {
        self.sums
    }

    /// Which sums attain the maximum.
    pub fn attained(&self) -> [bool; 3] {
        self.sums.map(|x| x == self.max)
    }

    /// The type read off the relation: the pairing whose sum is strictly
    /// below the maximum, or the star when all three tie.
    pub fn line_type(&self) -> LineType4 {
        match self.sums.iter().position(|&x| x < self.max) {
            Some(0) => LineType4::OneTwo,
            Some(1) => LineType4::OneThree,
            Some(2) => LineType4::OneFour,
            _ => LineType4::Star,
        }
    }
}

/// Computes the minors of `p` and `q` in 3-space and checks that the maximum
/// of the three complementary sums is attained at least twice.
pub fn pluecker(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<PlueckerData> {
    if p.dim() != 4 || q.dim() != 4 {
        return Err(Error::DimensionMismatch { left: 4, right: if p.dim() != 4 { p.dim() } else { q.dim() } });
    }
    if p == q {
        return Err(Error::Degenerate("p and q are the same point".into()));
    }
    let (pc, qc) = (p.coords(), q.coords());
    let mut m = [[Scalar::ZERO; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                m[a][b] = (pc[a] + qc[b]).max(pc[b] + qc[a]);
            }
        }
    }
    let sums = PAIRINGS.map(|[(a, b), (c, d)]| m[a][b] + m[c][d]);
    let max = sums.iter().copied().max().expect("three sums");
    if sums.iter().filter(|&&x| x == max).count() < 2 {
        return Err(Error::Internal(format!(
            "Pluecker relation fails: sums {}, {}, {}",
            sums[0], sums[1], sums[2]
        )));
    }
    Ok(PlueckerData { m, sums, max })
}

/// Combinatorial type of a line in 3-space: which pairs of rays meet at a
/// common vertex, or the star with all four rays at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineType4 {
    /// `{12,34}`
    OneTwo,
    /// `{13,24}`
    OneThree,
    /// `{14,23}`
    OneFour,
    /// `{1234}`
    Star,
}

impl LineType4 {
    /// The type in which `a` and `b` share a vertex.
    pub fn joining(a: usize, b: usize) -> LineType4 {
        let partner = if a == 0 {
            b
        } else if b == 0 {
            a
        } else {
            6 - a - b
        };
        match partner {
            1 => LineType4::OneTwo,
            2 => LineType4::OneThree,
            _ => LineType4::OneFour,
        }
    }

    /// The two pairs of rays, 0-based, or `None` for the star.
    pub fn pairs(&self) -> Option<[(usize, usize); 2]> {
        match self {
            LineType4::OneTwo => Some(PAIRINGS[0]),
            LineType4::OneThree => Some(PAIRINGS[1]),
            LineType4::OneFour => Some(PAIRINGS[2]),
            LineType4::Star => None,
        }
    }
}

impl fmt::Display for LineType4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pairs() {
            Some([(a, b), (c, d)]) => write!(f, "{{{}{},{}{}}}", a + 1, b + 1, c + 1, d + 1),
            None => write!(f, "{{1234}}"),
        }
    }
}

/// Type of the line through columns `i, j` of a 4x4 NI matrix from the sign
/// of `f_kl`, `{k, l}` being the other two indices: positive pairs `i` with
/// `k`, negative pairs `i` with `l`, zero gives the star.
pub fn classify_type4(f: &DifferenceMatrix) -> Result<LineType4> {
    if f.order() != 4 {
        return Err(Error::InvalidDimension { found: f.order(), min: 4 });
    }
    let (i, j) = f.cols();
    let rest: Vec<usize> = (0..4).filter(|&x| x != i && x != j).collect();
    let (k, l) = (rest[0], rest[1]);
    let v = f.get(k, l);
    Ok(if v > Scalar::ZERO {
        LineType4::joining(i, k)
    } else if v < Scalar::ZERO {
        LineType4::joining(i, l)
    } else {
        LineType4::Star
    })
}

/// The vertex where rays `a` and `b` meet on a line of type `{ab,cd}`:
/// `x_a = m_ab - m_bd`, `x_b = m_ab - m_ad`, `x_c = m_ac - m_ad`, `x_d = 0`.
/// For the star type every pair gives the same point.
pub fn pair_vertex(m: &PlueckerData, a: usize, b: usize) -> ProjectivePoint {
    let [c, d]: [usize; 2] = {
        let rest: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
        [rest[0], rest[1]]
    };
    let mut raw = [Scalar::ZERO; 4];
    raw[a] = m.get(a, b) - m.get(b, d);
    raw[b] = m.get(a, b) - m.get(a, d);
    raw[c] = m.get(a, c) - m.get(a, d);
    raw[d] = Scalar::ZERO;
    ProjectivePoint::canonicalize(&raw).expect("four coordinates")
}

/// The two vertices of a line in 3-space, named by proximity: `pq` is the
/// one nearer to `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertices4 {
    pub line_type: LineType4,
    pub pq: ProjectivePoint,
    pub qp: ProjectivePoint,
}

impl Vertices4 {
    pub fn is_star(&self) -> bool {
        self.pq == self.qp
    }
}

/// Vertices of `L(p, q)` in 3-space for a given type, which must match the
/// type determined by the data.
pub fn vertices4(p: &ProjectivePoint, q: &ProjectivePoint, line_type: LineType4) -> Result<Vertices4> {
    let m = pluecker(p, q)?;
    let actual = m.line_type();
    if actual != line_type {
        return Err(Error::TypeMismatch { given: line_type.to_string(), actual: actual.to_string() });
    }
    let [(a, b), (c, d)] = line_type.pairs().unwrap_or(PAIRINGS[0]);
    let (u, w) = (pair_vertex(&m, a, b), pair_vertex(&m, c, d));
    if trop_distance(p, &w)? < trop_distance(p, &u)? {
        Ok(Vertices4 { line_type, pq: w, qp: u })
    } else {
        Ok(Vertices4 { line_type, pq: u, qp: w })
    }
}

/// The vertex of a line in the plane: `(-m_23, -m_13, -m_12)`.
pub fn cramer_vertex(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectivePoint> {
    if p.dim() != 3 || q.dim() != 3 {
        return Err(Error::DimensionMismatch { left: 3, right: if p.dim() != 3 { p.dim() } else { q.dim() } });
    }
    if p == q {
        return Err(Error::Degenerate("p and q are the same point".into()));
    }
    let (pc, qc) = (p.coords(), q.coords());
    let m = |a: usize, b: usize| (pc[a] + qc[b]).max(pc[b] + qc[a]);
    ProjectivePoint::canonicalize(&[-m(1, 2), -m(0, 2), -m(0, 1)])
}
