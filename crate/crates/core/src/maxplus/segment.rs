use crate::error::{Error, Result};
use crate::maxplus::{ProjectivePoint, Scalar};

/// One classical piece of a tropical segment: direction `e_S` and its
/// integer length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    /// Indices in `S`, ascending.
    pub slope: Vec<usize>,
    pub length: Scalar,
}

/// The tropical segment `tconv(p, q)` as a polygonal path from `p` to `q`.
///
/// `breakpoints[k]` and `breakpoints[k + 1]` bound `pieces[k]`, and
/// `breakpoints[k + 1] = breakpoints[k] + pieces[k].length * e_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalSegment {
    pub breakpoints: Vec<ProjectivePoint>,
    pub pieces: Vec<Piece>,
}

impl TropicalSegment {
    pub fn start(&self) -> &ProjectivePoint {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &ProjectivePoint {
        self.breakpoints.last().expect("segment has endpoints")
    }

    /// The point at integer-length distance `offset` from the start.
    pub fn point_at(&self, offset: Scalar) -> Result<ProjectivePoint> {
        let total = integer_length(self);
        if offset < Scalar::ZERO || offset > total {
            return Err(Error::Internal(format!("offset {offset} outside segment of length {total}")));
        }
        let mut remaining = offset;
        for (k, piece) in self.pieces.iter().enumerate() {
            if remaining <= piece.length {
                return Ok(self.breakpoints[k].shifted(&piece.slope, remaining));
            }
            remaining -= piece.length;
        }
        Ok(self.end().clone())
    }

    /// The point at distance `offset` from the end, walking backwards.
    pub fn point_from_end(&self, offset: Scalar) -> Result<ProjectivePoint> {
        let total = integer_length(self);
        if offset < Scalar::ZERO || offset > total {
            return Err(Error::Internal(format!("offset {offset} outside segment of length {total}")));
        }
        let mut remaining = offset;
        let last = self.pieces.len();
        for (k, piece) in self.pieces.iter().enumerate().rev() {
            if remaining <= piece.length {
                return Ok(self.breakpoints[k + 1].shifted(&piece.slope, -remaining));
            }
            remaining -= piece.length;
        }
        debug_assert!(last > 0);
        Ok(self.start().clone())
    }
}

/// Builds `tconv(p, q)` by sweeping `lambda` through the sorted distinct values
/// of `q_i - p_i`: each breakpoint is the class of `max(lambda + p, q)`.
pub fn tconv(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<TropicalSegment> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    if p == q {
        return Err(Error::Degenerate("tconv of a point with itself".into()));
    }
    let diff: Vec<Scalar> = q.coords().iter().zip(p.coords()).map(|(&a, &b)| a - b).collect();
    let mut levels = diff.clone();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();

    let breakpoints: Vec<ProjectivePoint> =
        levels.iter().map(|&lambda| p.tropical_combination(lambda, q)).collect();
    let pieces = levels
        .windows(2)
        .map(|w| Piece {
            slope: (0..diff.len()).filter(|&i| diff[i] >= w[0]).collect(),
            length: w[0] - w[1],
        })
        .collect();
    Ok(TropicalSegment { breakpoints, pieces })
}

/// Sum of the integer lengths of the pieces.
pub fn integer_length(seg: &TropicalSegment) -> Scalar {
    seg.pieces.iter().map(|piece| piece.length).sum()
}

/// Membership in `tconv(p, q)` through the tropical projection: `x` belongs
/// to the segment iff `x = (min_i x_i - p_i) ⊙ p ⊕ (min_i x_i - q_i) ⊙ q`.
pub fn tconv_contains(p: &ProjectivePoint, q: &ProjectivePoint, x: &ProjectivePoint) -> Result<bool> {
    let n = p.dim();
    if q.dim() != n || x.dim() != n {
        return Err(Error::DimensionMismatch { left: n, right: q.dim().max(x.dim()) });
    }
    let coef = |y: &ProjectivePoint| -> Scalar {
        x.coords().iter().zip(y.coords()).map(|(&a, &b)| a - b).min().expect("nonempty")
    };
    let (lp, lq) = (coef(p), coef(q));
    let proj: Vec<Scalar> = (0..n).map(|i| (lp + p.coords()[i]).max(lq + q.coords()[i])).collect();
    Ok(proj.as_slice() == x.coords())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxplus::trop_distance;

    fn pt(v: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_ints(v).unwrap()
    }

    #[test]
    fn two_dimensional_segment_is_one_piece() {
        let seg = tconv(&pt(&[3, 0]), &pt(&[-4, 0])).unwrap();
        assert_eq!(seg.pieces.len(), 1);
        assert_eq!(seg.pieces[0].slope, vec![1]);
        assert_eq!(integer_length(&seg), Scalar::from_int(7));
        assert_eq!(trop_distance(seg.start(), seg.end()).unwrap(), Scalar::from_int(7));
    }

    #[test]
    fn endpoints_and_nested_slopes() {
        let p = pt(&[0, -15, -17, -16, -20, -18, -27]);
        let q = pt(&[-19, 0, -14, -14, -21, -17, -15]);
        let seg = tconv(&p, &q).unwrap();
        assert_eq!(seg.start(), &p);
        assert_eq!(seg.end(), &q);
        assert_eq!(integer_length(&seg), Scalar::from_int(34));
        let lengths: Vec<i128> = seg.pieces.iter().map(|x| x.length.numer()).collect();
        assert_eq!(lengths, vec![3, 9, 1, 1, 2, 18]);
        for w in seg.pieces.windows(2) {
            assert!(w[0].slope.iter().all(|i| w[1].slope.contains(i)));
        }
        // p + 3 e_2 in the 1-based labels
        assert_eq!(seg.point_at(Scalar::from_int(3)).unwrap(), pt(&[12, 0, -5, -4, -8, -6, -15]));
    }

    #[test]
    fn walking_from_both_ends_agrees() {
        let p = pt(&[0, -15, -17, -16, -20]);
        let q = pt(&[-19, 0, -14, -14, -21]);
        let seg = tconv(&p, &q).unwrap();
        let total = integer_length(&seg);
        for k in 0..=34 {
            let t = Scalar::new(k, 1).min(total);
            assert_eq!(seg.point_at(t).unwrap(), seg.point_from_end(total - t).unwrap());
        }
    }

    #[test]
    fn projection_membership() {
        let p = pt(&[0, -10, -11, -15]);
        let q = pt(&[-12, 0, -14, -13]);
        let seg = tconv(&p, &q).unwrap();
        for b in &seg.breakpoints {
            assert!(tconv_contains(&p, &q, b).unwrap());
        }
        assert!(!tconv_contains(&p, &q, &pt(&[0, 0, 0, 0])).unwrap());
    }

    #[test]
    fn identical_points_are_degenerate() {
        let p = pt(&[1, 2, 0]);
        assert!(matches!(tconv(&p, &p), Err(Error::Degenerate(_))));
    }
}
