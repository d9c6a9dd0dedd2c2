//! The matrix of differences of a column pair and the bookkeeping of which of
//! its entries are currently realized as lengths of the growing tree.
//!
//! For columns `i < j` of `A`, `f_kl` is the difference (main diagonal minus
//! secondary diagonal) of the minor on rows `k < l`. The entries are additive,
//! `f_kl + f_lr = f_kr`, and for NI input `f_ij` dominates every `|f_kl|`.

use std::fmt;

use crate::error::{Error, Result};
use crate::maxplus::Scalar;
use crate::ni::NiMatrix;

/// Main diagonal minus secondary diagonal of `[[a, b], [c, d]]`.
pub fn difference(m: [[Scalar; 2]; 2]) -> Scalar {
    m[0][0] + m[1][1] - m[0][1] - m[1][0]
}

/// Strictly upper triangular matrix of differences for the column pair
/// `(i, j)`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMatrix {
    n: usize,
    cols: (usize, usize),
    f: Vec<Scalar>,
}

impl DifferenceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> (usize, usize) {
        self.cols
    }

    /// `f_kl` for `k < l`.
    pub fn get(&self, k: usize, l: usize) -> Scalar {
        assert!(k < l && l < self.n, "f[{k},{l}] is outside the upper triangle");
        self.f[k * self.n + l]
    }

    /// `f_kl` extended antisymmetrically, with zero diagonal.
    pub fn signed(&self, k: usize, l: usize) -> Scalar {
        match k.cmp(&l) {
            std::cmp::Ordering::Less => self.get(k, l),
            std::cmp::Ordering::Greater => -self.get(l, k),
            std::cmp::Ordering::Equal => Scalar::ZERO,
        }
    }

    /// `|f_kl|`, symmetric in `k` and `l`.
    pub fn abs(&self, k: usize, l: usize) -> Scalar {
        self.signed(k, l).abs()
    }

    /// Rows of the upper triangle, row `k` holding `f_{k,k+1..n}`.
    pub fn upper_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n.saturating_sub(1))
            .map(|k| (k + 1..self.n).map(|l| self.get(k, l)).collect())
            .collect()
    }

    /// Rebuilds the full matrix from `f_{k-1,k}` by additivity.
    pub fn from_superdiagonal(cols: (usize, usize), superdiag: &[Scalar]) -> DifferenceMatrix {
        let n = superdiag.len() + 1;
        let mut f = vec![Scalar::ZERO; n * n];
        for k in 0..n {
            let mut acc = Scalar::ZERO;
            for l in k + 1..n {
                acc += superdiag[l - 1];
                f[k * n + l] = acc;
            }
        }
        DifferenceMatrix { n, cols, f }
    }
}

impl fmt::Display for DifferenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.upper_rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(Scalar::to_string).collect();
            writeln!(f, "{}{}", "    ".repeat(k), cells.join(" "))?;
        }
        Ok(())
    }
}

/// Computes `F` for the column pair `(i, j)` and checks additivity, the sign
/// pattern of rows `i` and `j`, and that `|f_ij|` is the largest entry.
pub fn build_f(a: &NiMatrix, i: usize, j: usize) -> Result<DifferenceMatrix> {
    let n = a.order();
    if i >= j || j >= n {
        return Err(Error::InvalidColumns { i: i + 1, j: j + 1, n });
    }
    let mut f = vec![Scalar::ZERO; n * n];
    for k in 0..n {
        for l in k + 1..n {
            f[k * n + l] = difference([[a.get(k, i), a.get(k, j)], [a.get(l, i), a.get(l, j)]]);
        }
    }
    let dm = DifferenceMatrix { n, cols: (i, j), f };

    for k in 0..n {
        for l in k + 1..n {
            for r in l + 1..n {
                if dm.get(k, l) + dm.get(l, r) != dm.get(k, r) {
                    return Err(Error::Internal(format!(
                        "additivity fails at ({}, {}, {})",
                        k + 1,
                        l + 1,
                        r + 1
                    )));
                }
            }
        }
    }
    let top = dm.abs(i, j);
    for k in 0..n {
        if dm.signed(i, k) < Scalar::ZERO || dm.signed(j, k) > Scalar::ZERO {
            return Err(Error::Internal(format!(
                "sign pattern of rows {} and {} fails at column {}; input is not NI",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        for l in k + 1..n {
            if dm.abs(k, l) > top {
                return Err(Error::Internal(format!(
                    "|f[{},{}]| exceeds |f[{},{}]|; input is not NI",
                    k + 1,
                    l + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(dm)
}

/// `d(col_i, col_j) = |f_ij|`.
pub fn distance_given_columns(f: &DifferenceMatrix) -> Scalar {
    let (i, j) = f.cols;
    f.abs(i, j)
}

/// What an active entry currently measures on the tree under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// The whole distance from `p` to `q`, before any vertex exists.
    Span,
    /// Distance from `p` to the nearest inner vertex.
    OffsetP,
    /// An inner edge.
    Edge,
    /// Distance from the inner vertex nearest to `q` to `q`.
    OffsetQ,
}

/// An active entry `f_{near,far}`: `near` is the label on the `p` side, `far`
/// the label on the `q` side. Leaf `j` stands for `p` itself and leaf `i` for
/// `q`, since `p` sits on ray `j` and `q` on ray `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActiveEntry {
    pub near: usize,
    pub far: usize,
    pub length: Scalar,
    pub role: Role,
}

impl ActiveEntry {
    /// The matrix position `(min, max)`.
    pub fn pair(&self) -> (usize, usize) {
        (self.near.min(self.far), self.near.max(self.far))
    }

    fn touches(&self, leaf: usize) -> bool {
        self.near == leaf || self.far == leaf
    }
}

/// Active entries in order along the path from `p` to `q`.
///
/// Works in the frame where the chosen columns are `(0, 1)`, so that stage
/// `s` has placed leaves `0..s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSet {
    leaves: usize,
    entries: Vec<ActiveEntry>,
    formerly: Vec<(usize, usize)>,
}

impl ActiveSet {
    /// The two-leaf starting point: `f_01` spans `p` to `q`.
    pub fn initial(f: &DifferenceMatrix) -> Result<ActiveSet> {
        if f.cols != (0, 1) {
            return Err(Error::Internal("active sets work on columns (1, 2)".into()));
        }
        Ok(ActiveSet {
            leaves: 2,
            entries: vec![ActiveEntry { near: 1, far: 0, length: f.abs(0, 1), role: Role::Span }],
            formerly: Vec::new(),
        })
    }

    /// Number of leaves placed so far, i.e. the stage in 1-based counting.
    pub fn stage(&self) -> usize {
        self.leaves
    }

    pub fn entries(&self) -> &[ActiveEntry] {
        &self.entries
    }

    /// Entries that were active once and have since fractured.
    pub fn formerly_active(&self) -> &[(usize, usize)] {
        &self.formerly
    }

    pub fn total(&self) -> Scalar {
        self.entries.iter().map(|e| e.length).sum()
    }

    /// Replaces the fractured entry by its two parts.
    pub fn apply(&mut self, fr: &Fracture) {
        let victim = self.entries[fr.victim];
        self.formerly.push(victim.pair());
        let (near_role, far_role) = match victim.role {
            Role::Span => (Role::OffsetP, Role::OffsetQ),
            Role::OffsetP => (Role::OffsetP, Role::Edge),
            Role::OffsetQ => (Role::Edge, Role::OffsetQ),
            Role::Edge => (Role::Edge, Role::Edge),
        };
        let near = ActiveEntry { near: victim.near, far: fr.leaf, length: fr.near_length, role: near_role };
        let far = ActiveEntry { near: fr.leaf, far: victim.far, length: fr.far_length, role: far_role };
        self.entries.splice(fr.victim..=fr.victim, [near, far]);
        self.leaves += 1;
    }

    /// Checks the four properties that hold after every stage:
    /// every placed leaf occurs in some active entry; the newest leaf occurs
    /// in exactly two, both newly active; the signs of `f` on the active
    /// entries include both nonpositive and nonnegative values (strictly when
    /// the end offsets are nonzero); and the active lengths sum to `|f_01|`.
    pub fn check_properties(&self, f: &DifferenceMatrix) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(format!("stage {}: {msg}", self.leaves)));
        for e in &self.entries {
            let (k, l) = e.pair();
            if e.length != f.abs(k, l) {
                return fail(format!("active length {} differs from |f[{},{}]|", e.length, k + 1, l + 1));
            }
        }
        if let Some(missing) = (0..self.leaves).find(|&k| !self.entries.iter().any(|e| e.touches(k))) {
            return fail(format!("leaf {} has no active entry", missing + 1));
        }
        if self.leaves >= 3 {
            let newest = self.leaves - 1;
            let in_last: Vec<_> = self.entries.iter().filter(|e| e.pair().1 == newest).collect();
            if in_last.len() != 2 {
                return fail(format!("{} active entries in the last column", in_last.len()));
            }
            if in_last.iter().any(|e| self.formerly.contains(&e.pair())) {
                return fail("last-column entries are not newly active".into());
            }
            let first = self.entries[0];
            let last = self.entries[self.entries.len() - 1];
            let neg = self.entries.iter().any(|e| f.signed(e.pair().0, e.pair().1) < Scalar::ZERO);
            let pos = self.entries.iter().any(|e| f.signed(e.pair().0, e.pair().1) > Scalar::ZERO);
            if (!neg && !first.length.is_zero()) || (!pos && !last.length.is_zero()) {
                return fail("active entries do not carry both signs".into());
            }
        }
        if self.total() != f.abs(0, 1) {
            return fail(format!("active lengths sum to {} instead of {}", self.total(), f.abs(0, 1)));
        }
        Ok(())
    }
}

/// How the entry of the active set breaks when leaf `leaf` is added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fracture {
    /// The new leaf (0-based; stage `leaf + 1`).
    pub leaf: usize,
    /// Position of the fractured entry in the active set.
    pub victim: usize,
    pub victim_entry: ActiveEntry,
    /// Length of the part adjacent to `victim_entry.near`, `|f_{near,leaf}|`.
    pub near_length: Scalar,
    /// Length of the part adjacent to `victim_entry.far`, `|f_{far,leaf}|`.
    pub far_length: Scalar,
    /// Row minimizing `|f_{k,leaf}|` (smallest index on ties).
    pub pivot_row: usize,
    /// All rows attaining that minimum, `pivot_row` included.
    pub minimizing_rows: Vec<usize>,
}

impl Fracture {
    pub fn tied_minimum(&self) -> bool {
        self.minimizing_rows.len() > 1
    }

    pub fn zero_part(&self) -> bool {
        self.near_length.is_zero() || self.far_length.is_zero()
    }

    pub fn is_generic(&self) -> bool {
        !self.tied_minimum() && !self.zero_part()
    }
}

/// Finds the active entry that fractures when leaf `s` is added.
///
/// The pivot row `k` minimizes `|f_ks|`; the victim is an active entry
/// `f_ab` at that row with `|f_ab| = |f_as| + |f_bs|`. Which part lies next
/// to `a` is settled by placing the new vertex on the segment from `p` at
/// offset `|f_1s|` (1 being the `p`-side label) and, independently, from `q`
/// at offset `|f_0s|`.
pub fn find_fracture(f: &DifferenceMatrix, active: &ActiveSet, s: usize) -> Result<Fracture> {
    if s != active.leaves || s >= f.order() {
        return Err(Error::Internal(format!(
            "stage mismatch: adding leaf {} to a set with {} leaves",
            s + 1,
            active.leaves
        )));
    }
    let min = (0..s).map(|k| f.abs(k, s)).min().expect("at least two rows");
    let minimizing_rows: Vec<usize> = (0..s).filter(|&k| f.abs(k, s) == min).collect();
    let pivot_row = minimizing_rows[0];

    let brackets = |e: &ActiveEntry| f.abs(e.near, e.far) == f.abs(e.near, s) + f.abs(e.far, s);
    let victim = active
        .entries
        .iter()
        .position(|e| e.touches(pivot_row) && brackets(e))
        .or_else(|| {
            active
                .entries
                .iter()
                .position(|e| brackets(e) && minimizing_rows.iter().any(|&k| e.touches(k)))
        })
        .or_else(|| active.entries.iter().position(brackets))
        .ok_or_else(|| Error::Internal(format!("no active entry fractures at stage {}", s + 1)))?;
    let entry = active.entries[victim];

    let before: Scalar = active.entries[..victim].iter().map(|e| e.length).sum();
    let after: Scalar = active.entries[victim + 1..].iter().map(|e| e.length).sum();
    let from_p = f.abs(1, s);
    let from_q = f.abs(0, s);
    let (near_length, far_length) = if before + f.abs(entry.near, s) == from_p {
        (f.abs(entry.near, s), f.abs(entry.far, s))
    } else if before + f.abs(entry.far, s) == from_p {
        (f.abs(entry.far, s), f.abs(entry.near, s))
    } else {
        return Err(Error::Internal(format!("leaf {} cannot be placed on its fractured entry", s + 1)));
    };
    if after + far_length != from_q {
        return Err(Error::Internal(format!(
            "leaf {}: positions from p and from q disagree",
            s + 1
        )));
    }
    if near_length != f.abs(entry.near, s) {
        return Err(Error::Internal(format!(
            "leaf {}: part next to {} has length {} but |f| = {}",
            s + 1,
            entry.near + 1,
            near_length,
            f.abs(entry.near, s)
        )));
    }
    Ok(Fracture { leaf: s, victim, victim_entry: entry, near_length, far_length, pivot_row, minimizing_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxplus::Matrix;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn sv(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| s(x)).collect()
    }

    #[test]
    fn difference_of_two_by_two() {
        assert_eq!(difference([[s(4), s(4)], [s(4), s(4)]]), Scalar::ZERO);
        assert_eq!(difference([[s(-11), s(-14)], [s(-15), s(-13)]]), s(5));
        assert_eq!(difference([[s(0), s(-12)], [s(-10), s(0)]]), s(22));
    }

    #[test]
    fn superdiagonal_reconstruction() {
        let a = NiMatrix::new(Matrix::zeros(4, 4)).unwrap();
        let f = build_f(&a, 0, 1).unwrap();
        let sup: Vec<Scalar> = (1..4).map(|k| f.get(k - 1, k)).collect();
        assert_eq!(DifferenceMatrix::from_superdiagonal((0, 1), &sup), f);
    }

    #[test]
    fn rejects_equal_columns() {
        let a = NiMatrix::new(Matrix::zeros(3, 3)).unwrap();
        assert!(matches!(build_f(&a, 1, 1), Err(Error::InvalidColumns { .. })));
        assert!(matches!(build_f(&a, 2, 1), Err(Error::InvalidColumns { .. })));
    }

    #[test]
    fn initial_active_set_needs_the_first_columns() {
        let a = NiMatrix::new(Matrix::zeros(3, 3)).unwrap();
        assert!(ActiveSet::initial(&build_f(&a, 0, 2).unwrap()).is_err());
    }

    #[test]
    fn apply_splits_roles() {
        let f = DifferenceMatrix::from_superdiagonal((0, 1), &sv(&[10, -7, -1]));
        let mut act = ActiveSet::initial(&f).unwrap();
        let fr = find_fracture(&f, &act, 2).unwrap();
        assert_eq!((fr.near_length, fr.far_length), (s(7), s(3)));
        act.apply(&fr);
        let roles: Vec<Role> = act.entries().iter().map(|e| e.role).collect();
        assert_eq!(roles, vec![Role::OffsetP, Role::OffsetQ]);
        act.check_properties(&f).unwrap();

        // leaf 4 sits one unit past leaf 3 towards q
        let fr = find_fracture(&f, &act, 3).unwrap();
        assert_eq!(fr.victim_entry.pair(), (0, 2));
        act.apply(&fr);
        let roles: Vec<Role> = act.entries().iter().map(|e| e.role).collect();
        assert_eq!(roles, vec![Role::OffsetP, Role::Edge, Role::OffsetQ]);
        act.check_properties(&f).unwrap();
        assert_eq!(act.formerly_active(), &[(0, 1), (0, 2)]);
    }
}
