use std::fmt;

use crate::error::{Error, Result};
use crate::maxplus::Scalar;

/// A point of the tropical projective space `R^n / R(1,...,1)`, stored by its
/// representative with last coordinate zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    /// Canonical representative of the class of `raw`.
    pub fn canonicalize(raw: &[Scalar]) -> Result<ProjectivePoint> {
        if raw.len() < 2 {
            return Err(Error::InvalidDimension { found: raw.len(), min: 2 });
        }
        let last = raw[raw.len() - 1];
        Ok(ProjectivePoint { coords: raw.iter().map(|&x| x - last).collect() })
    }

    pub fn from_ints(raw: &[i64]) -> Result<ProjectivePoint> {
        let v: Vec<Scalar> = raw.iter().map(|&x| Scalar::from_int(x)).collect();
        ProjectivePoint::canonicalize(&v)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// `self + t * e_S` in the quotient, with `S` given by its indices.
    pub fn shifted(&self, indices: &[usize], t: Scalar) -> ProjectivePoint {
        let mut raw = self.coords.clone();
        for &i in indices {
            raw[i] += t;
        }
        ProjectivePoint::canonicalize(&raw).expect("dimension preserved")
    }

    /// Coordinatewise `max(lambda + self, other)`, i.e. `lambda ⊙ self ⊕ other`.
    pub fn tropical_combination(&self, lambda: Scalar, other: &ProjectivePoint) -> ProjectivePoint {
        let raw: Vec<Scalar> =
            self.coords.iter().zip(&other.coords).map(|(&a, &b)| (lambda + a).max(b)).collect();
        ProjectivePoint::canonicalize(&raw).expect("dimension preserved")
    }

    /// Projection onto the first `k` coordinates, re-canonicalized.
    pub fn truncate(&self, k: usize) -> Result<ProjectivePoint> {
        if k > self.dim() {
            return Err(Error::DimensionMismatch { left: k, right: self.dim() });
        }
        ProjectivePoint::canonicalize(&self.coords[..k])
    }

    /// Reorders coordinates: output coordinate `a` is input coordinate `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> ProjectivePoint {
        let raw: Vec<Scalar> = perm.iter().map(|&a| self.coords[a]).collect();
        ProjectivePoint::canonicalize(&raw).expect("dimension preserved")
    }

    /// Inverse of [`ProjectivePoint::permuted`].
    pub fn unpermuted(&self, perm: &[usize]) -> ProjectivePoint {
        let mut raw = vec![Scalar::ZERO; self.dim()];
        for (a, &orig) in perm.iter().enumerate() {
            raw[orig] = self.coords[a];
        }
        ProjectivePoint::canonicalize(&raw).expect("dimension preserved")
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Tropical distance `max_{i,j} { |p_i - q_i|, |p_i - q_i - p_j + q_j| }`
/// evaluated on canonical representatives.
pub fn trop_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<Scalar> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    let diff: Vec<Scalar> = p.coords.iter().zip(&q.coords).map(|(&a, &b)| a - b).collect();
    let mut best = Scalar::ZERO;
    for &di in &diff {
        best = best.max(di.abs());
        for &dj in &diff {
            best = best.max((di - dj).abs());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_ints(v).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(pt(&[-2, -2, 0]).coords(), pt(&[-2, -2, 0]).coords());
        assert_eq!(pt(&[3, 0, -14]), pt(&[0, -3, -17]));
        assert_eq!(pt(&[3, 0, -14]), pt(&[17, 14, 0]));
        assert_eq!(pt(&[5, 5, 5]), pt(&[0, 0, 0]));
        assert!(matches!(
            ProjectivePoint::from_ints(&[1]),
            Err(Error::InvalidDimension { found: 1, .. })
        ));
    }

    #[test]
    fn distances_from_the_background_figure() {
        let p = pt(&[-2, -2, 0]);
        let q = pt(&[0, 0, 0]);
        let r = pt(&[-5, -2, 0]);
        let s = pt(&[-2, -5, 0]);
        assert_eq!(trop_distance(&p, &q).unwrap(), Scalar::from_int(2));
        assert_eq!(trop_distance(&r, &s).unwrap(), Scalar::from_int(6));
        assert_eq!(trop_distance(&r, &q).unwrap(), Scalar::from_int(5));
        assert_eq!(trop_distance(&s, &q).unwrap(), Scalar::from_int(5));
        assert_eq!(trop_distance(&p, &p).unwrap(), Scalar::ZERO);
    }

    #[test]
    fn distance_rejects_mismatch() {
        assert!(trop_distance(&pt(&[0, 0]), &pt(&[0, 0, 0])).is_err());
    }

    #[test]
    fn permutation_round_trip() {
        let p = pt(&[4, -1, 7, 2]);
        let perm = [2, 0, 3, 1];
        assert_eq!(p.permuted(&perm).unpermuted(&perm), p);
    }
}
