//! The stable tropical line through two columns of an NI matrix, as a metric
//! caterpillar tree with marked points `p` and `q`.

mod builder;
mod four;

use std::fmt;

use crate::maxplus::{ProjectivePoint, Scalar};

pub use builder::{
    build_tree, build_tree_traced, contract_degeneracies, Construction, Genericity, Modification, Stage,
};
pub use four::{classify_type4, cramer_vertex, pair_vertex, pluecker, vertices4, LineType4, PlueckerData, Vertices4};

/// A bipartition of a set of leaf labels, normalized so that `side` holds the
/// smallest label. Labels are 0-based; display is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    side: Vec<usize>,
    other: Vec<usize>,
}

impl Split {
    /// Builds the split of `universe` into `part` and its complement.
    pub fn new(universe: impl IntoIterator<Item = usize>, part: &[usize]) -> Split {
        let mut a: Vec<usize> = Vec::new();
        let mut b: Vec<usize> = Vec::new();
        for leaf in universe {
            if part.contains(&leaf) {
                a.push(leaf);
            } else {
                b.push(leaf);
            }
        }
        a.sort_unstable();
        b.sort_unstable();
        match (a.first(), b.first()) {
            (Some(x), Some(y)) if y < x => Split { side: b, other: a },
            (None, _) => Split { side: b, other: a },
            _ => Split { side: a, other: b },
        }
    }

    /// The side containing the smallest label.
    pub fn side(&self) -> &[usize] {
        &self.side
    }

    pub fn other(&self) -> &[usize] {
        &self.other
    }

    pub fn separates(&self, a: usize, b: usize) -> bool {
        self.side.contains(&a) != self.side.contains(&b)
    }

    /// Relabels through `map` and renormalizes.
    pub fn relabeled(&self, map: impl Fn(usize) -> usize) -> Split {
        let part: Vec<usize> = self.side.iter().map(|&x| map(x)).collect();
        let universe = self.side.iter().chain(&self.other).map(|&x| map(x));
        Split::new(universe, &part)
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.side.iter().chain(&self.other).any(|&x| x >= 9);
        let sep = if wide { " " } else { "" };
        let show = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(sep);
        write!(f, "{{{},{}}}", show(&self.side), show(&self.other))
    }
}

/// A spine vertex with its coordinate, the rays (leaves) attached to it and
/// its distance from `p` along the spine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerVertex {
    pub coord: ProjectivePoint,
    pub leaves: Vec<usize>,
    pub offset: Scalar,
}

/// An inner edge between spine vertices `from` and `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub length: Scalar,
}

/// A marked point on the ray of `leaf`, at distance `offset` from `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mark {
    pub leaf: usize,
    pub vertex: usize,
    pub offset: Scalar,
}

/// The line `L(p, q)`: spine vertices ordered by distance from `p`, inner
/// edges between consecutive vertices, one split per inner edge (in the same
/// order) and the marks of `p` and `q`.
///
/// `p` is column `cols.0` and lies on the ray of leaf `cols.1`; `q` is column
/// `cols.1` and lies on the ray of leaf `cols.0`. Labels are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricTree {
    pub n: usize,
    pub cols: (usize, usize),
    pub p: ProjectivePoint,
    pub q: ProjectivePoint,
    pub vertices: Vec<InnerVertex>,
    pub edges: Vec<Edge>,
    pub splits: Vec<Split>,
    pub p_mark: Mark,
    pub q_mark: Mark,
}

impl MetricTree {
    /// `(d(p, pq), d(q, qp))`.
    pub fn offsets(&self) -> (Scalar, Scalar) {
        (self.p_mark.offset, self.q_mark.offset)
    }

    /// Lengths along the path from `p` to `q`: offset, inner edges, offset.
    pub fn spine_lengths(&self) -> Vec<Scalar> {
        let mut out = vec![self.p_mark.offset];
        out.extend(self.edges.iter().map(|e| e.length));
        out.push(self.q_mark.offset);
        out
    }

    /// `d(p, q)`, the sum of [`MetricTree::spine_lengths`].
    pub fn total_length(&self) -> Scalar {
        self.spine_lengths().iter().sum()
    }

    /// The vertex nearest to `p`.
    pub fn pq(&self) -> &ProjectivePoint {
        &self.vertices[self.p_mark.vertex].coord
    }

    /// The vertex nearest to `q`.
    pub fn qp(&self) -> &ProjectivePoint {
        &self.vertices[self.q_mark.vertex].coord
    }

    /// Number of rays and inner edges at vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        let spine = self.edges.iter().filter(|e| e.from == v || e.to == v).count();
        self.vertices[v].leaves.len() + spine
    }

    pub fn is_trivalent(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.degree(v) == 3)
    }

    /// Splits read off the spine: the edge after vertex `k` separates the
    /// leaves of vertices `0..=k` from the rest.
    pub fn splits_from_spine(&self) -> Vec<Split> {
        let mut acc: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        for v in &self.vertices[..self.vertices.len().saturating_sub(1)] {
            acc.extend(&v.leaves);
            out.push(Split::new(0..self.n, &acc));
        }
        out
    }
}

impl fmt::Display for MetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lengths: Vec<String> = self.spine_lengths().iter().map(Scalar::to_string).collect();
        let splits: Vec<String> = self.splits.iter().map(Split::to_string).collect();
        writeln!(f, "p = {} on ray {}", self.p, self.cols.1 + 1)?;
        writeln!(f, "q = {} on ray {}", self.q, self.cols.0 + 1)?;
        for v in &self.vertices {
            let leaves: Vec<String> = v.leaves.iter().map(|x| (x + 1).to_string()).collect();
            writeln!(f, "vertex {} at {} with rays {}", v.coord, v.offset, leaves.join(","))?;
        }
        writeln!(f, "lengths {}", lengths.join(" "))?;
        write!(f, "splits {}", splits.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_normalization_and_display() {
        let s = Split::new(0..7, &[1, 2, 3, 5, 6]);
        assert_eq!(s.to_string(), "{15,23467}");
        assert_eq!(s.side(), &[0, 4]);
        assert!(s.separates(0, 1));
        assert!(!s.separates(1, 6));
        assert_eq!(Split::new(0..4, &[]).to_string(), "{1234,}");
    }

    #[test]
    fn split_relabeling() {
        let s = Split::new(0..4, &[0, 2]);
        let r = s.relabeled(|x| [2, 0, 1, 3][x]);
        assert_eq!(r.to_string(), "{14,23}");
    }

    #[test]
    fn wide_labels_are_spaced() {
        let s = Split::new(0..10, &[0, 9]);
        assert_eq!(s.to_string(), "{1 10,2 3 4 5 6 7 8 9}");
    }
}
