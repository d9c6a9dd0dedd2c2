//! Brute-force verification of constructed lines, sharing nothing with the
//! builder beyond the max-plus primitives.

use std::fmt;

use num_integer::Integer;

use crate::diff::difference;
use crate::error::Result;
use crate::maxplus::{rank2_membership, tconv, tconv_contains, trop_distance, ProjectivePoint, Scalar};
use crate::ni::NiMatrix;
use crate::tree::{build_tree, pluecker, vertices4, LineType4, MetricTree, Split};

/// Outcome of one named check, with a witness when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// A fixed sequence of checks; `overall` is their conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    fn from_checks(checks: Vec<Check>) -> VerificationReport {
        let overall = checks.iter().all(|c| c.passed);
        VerificationReport { checks, overall }
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                Some(w) if !c.passed => writeln!(f, "FAIL {}: {}", c.name, w)?,
                _ => writeln!(f, "ok   {}", c.name)?,
            }
        }
        write!(f, "{}", if self.overall { "all checks passed" } else { "verification failed" })
    }
}

fn check(name: &'static str, result: std::result::Result<(), String>) -> Check {
    match result {
        Ok(()) => Check { name, passed: true, witness: None },
        Err(w) => Check { name, passed: false, witness: Some(w) },
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, test: impl Fn(&T) -> std::result::Result<(), String>) -> std::result::Result<(), String> {
    items.into_iter().try_for_each(|x| test(&x))
}

/// Names of the checks run by [`verify_tree`], in report order.
pub const TREE_CHECKS: [&str; 11] = [
    "structure",
    "endpoints",
    "rank2_vertices",
    "segment_offsets",
    "length_additivity",
    "balancing",
    "caterpillar",
    "separation",
    "splits_match_spine",
    "marks_on_rays",
    "rank2_edge_samples",
];

/// Runs every check on a tree claimed to be the line through columns `i, j`.
pub fn verify_tree(a: &NiMatrix, i: usize, j: usize, t: &MetricTree) -> VerificationReport {
    let n = a.order();
    let structure = check_structure(n, i, j, t);
    if structure.is_err() {
        let mut checks = vec![check("structure", structure)];
        checks.extend(TREE_CHECKS[1..].iter().map(|&name| Check {
            name,
            passed: false,
            witness: Some("skipped: malformed tree".into()),
        }));
        return VerificationReport::from_checks(checks);
    }
    let p = a.matrix().column_point(i).expect("order at least 3");
    let q = a.matrix().column_point(j).expect("order at least 3");
    let fij = difference([[a.get(i, i), a.get(i, j)], [a.get(j, i), a.get(j, j)]]).abs();

    let endpoints = if t.p != p || t.q != q {
        Err(format!("tree carries p = {}, q = {}; columns give {p}, {q}", t.p, t.q))
    } else {
        Ok(())
    };

    let rank2 = first_failure(&t.vertices, |v| match rank2_membership(&p, &q, &v.coord) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("vertex {} has a nonsingular 3x3 minor", v.coord)),
        Err(e) => Err(e.to_string()),
    });

    let offsets = tconv(&p, &q).map_err(|e| e.to_string()).and_then(|seg| {
        let mut acc = t.p_mark.offset;
        for (k, v) in t.vertices.iter().enumerate() {
            if k > 0 {
                acc += t.edges[k - 1].length;
            }
            if v.offset != acc {
                return Err(format!("vertex {} records offset {} but lengths give {acc}", v.coord, v.offset));
            }
            let dist = trop_distance(&p, &v.coord).map_err(|e| e.to_string())?;
            if dist != acc {
                return Err(format!("vertex {} is at distance {dist} from p, expected {acc}", v.coord));
            }
            let expected = seg.point_at(acc).map_err(|e| e.to_string())?;
            if expected != v.coord || !tconv_contains(&p, &q, &v.coord).unwrap_or(false) {
                return Err(format!("vertex {} is not the segment point {expected} at offset {acc}", v.coord));
            }
        }
        Ok(())
    });

    let additivity = {
        let total = t.total_length();
        let dpq = trop_distance(&p, &q).expect("same dimension");
        if total != fij || dpq != fij {
            Err(format!("spine lengths sum to {total}, d(p,q) = {dpq}, |f| = {fij}"))
        } else {
            Ok(())
        }
    };

    let balancing = balancing_defects(t).into_iter().next().map_or(Ok(()), Err);

    let caterpillar = check_caterpillar(t);

    let separation = first_failure(&t.splits, |s| {
        if s.separates(i, j) {
            Ok(())
        } else {
            Err(format!("split {s} keeps {} and {} together", i + 1, j + 1))
        }
    });

    let splits = {
        let mut acc: Vec<usize> = Vec::new();
        let mut derived: Vec<Split> = Vec::new();
        for v in &t.vertices[..t.vertices.len() - 1] {
            acc.extend(&v.leaves);
            derived.push(Split::new(0..n, &acc));
        }
        if derived == t.splits {
            Ok(())
        } else {
            let show = |v: &[Split]| v.iter().map(Split::to_string).collect::<Vec<_>>().join(" ");
            Err(format!("recorded {} but the spine gives {}", show(&t.splits), show(&derived)))
        }
    };

    let marks = check_marks(t, &p, &q, i, j);

    let samples = first_failure(0..t.vertices.len() + 1, |&k| {
        let (from, to) = match k {
            0 => (&p, &t.vertices[0].coord),
            k if k == t.vertices.len() => (&t.vertices[k - 1].coord, &q),
            k => (&t.vertices[k - 1].coord, &t.vertices[k].coord),
        };
        for (num, den) in [(1, 4), (1, 2), (3, 4)] {
            let x = interpolate(from, to, Scalar::new(num, den));
            match rank2_membership(&p, &q, &x) {
                Ok(true) => {}
                Ok(false) => return Err(format!("point {x} between {from} and {to} is off the line")),
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(())
    });

    VerificationReport::from_checks(vec![
        check("structure", structure),
        check("endpoints", endpoints),
        check("rank2_vertices", rank2),
        check("segment_offsets", offsets),
        check("length_additivity", additivity),
        check("balancing", balancing),
        check("caterpillar", caterpillar),
        check("separation", separation),
        check("splits_match_spine", splits),
        check("marks_on_rays", marks),
        check("rank2_edge_samples", samples),
    ])
}

fn check_structure(n: usize, i: usize, j: usize, t: &MetricTree) -> std::result::Result<(), String> {
    if t.n != n || t.cols != (i, j) {
        return Err(format!("tree is for n = {}, columns {:?}", t.n, t.cols));
    }
    if t.vertices.is_empty() {
        return Err("no inner vertex".into());
    }
    if t.p.dim() != n || t.q.dim() != n || t.vertices.iter().any(|v| v.coord.dim() != n) {
        return Err("coordinate dimension differs from n".into());
    }
    if t.edges.len() + 1 != t.vertices.len() || t.splits.len() != t.edges.len() {
        return Err(format!(
            "{} vertices, {} edges, {} splits",
            t.vertices.len(),
            t.edges.len(),
            t.splits.len()
        ));
    }
    let mut seen = vec![0usize; n];
    for v in &t.vertices {
        for &leaf in &v.leaves {
            if leaf >= n {
                return Err(format!("leaf label {} out of range", leaf + 1));
            }
            seen[leaf] += 1;
        }
    }
    if let Some(k) = seen.iter().position(|&c| c != 1) {
        return Err(format!("leaf {} attached {} times", k + 1, seen[k]));
    }
    if t.edges.iter().any(|e| e.from >= t.vertices.len() || e.to >= t.vertices.len()) {
        return Err("edge endpoint out of range".into());
    }
    let lengths = t.spine_lengths();
    if lengths.iter().any(|&x| x < Scalar::ZERO) || t.edges.iter().any(|e| e.length.is_zero()) {
        return Err("negative length or zero-length inner edge".into());
    }
    if t.p_mark.vertex >= t.vertices.len() || t.q_mark.vertex >= t.vertices.len() {
        return Err("mark on a missing vertex".into());
    }
    Ok(())
}

fn check_caterpillar(t: &MetricTree) -> std::result::Result<(), String> {
    // removing the leaves leaves the inner vertices and edges: it must be a path
    let m = t.vertices.len();
    let mut deg = vec![0usize; m];
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for e in &t.edges {
        deg[e.from] += 1;
        deg[e.to] += 1;
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a == b {
            return Err(format!("edges close a cycle at vertex {}", e.to));
        }
        parent[a] = b;
    }
    if let Some(v) = deg.iter().position(|&d| d > 2) {
        return Err(format!("vertex {} meets {} inner edges", t.vertices[v].coord, deg[v]));
    }
    let root = find(&mut parent, 0);
    if (0..m).any(|v| find(&mut parent, v) != root) {
        return Err("inner vertices are disconnected".into());
    }
    Ok(())
}

fn check_marks(t: &MetricTree, p: &ProjectivePoint, q: &ProjectivePoint, i: usize, j: usize) -> std::result::Result<(), String> {
    for (mark, point, leaf, name) in [(t.p_mark, p, j, "p"), (t.q_mark, q, i, "q"), ] {
        if mark.leaf != leaf {
            return Err(format!("{name} is marked on ray {}, expected {}", mark.leaf + 1, leaf + 1));
        }
        let v = &t.vertices[mark.vertex];
        if !v.leaves.contains(&leaf) {
            return Err(format!("ray {} does not start at the marked vertex {}", leaf + 1, v.coord));
        }
        let expected = v.coord.shifted(&[leaf], -mark.offset);
        if &expected != point {
            return Err(format!("{name} = {point} but ray {} at distance {} gives {expected}", leaf + 1, mark.offset));
        }
    }
    if t.p_mark.vertex != 0 || t.q_mark.vertex != t.vertices.len() - 1 {
        return Err("marked vertices are not the ends of the spine".into());
    }
    Ok(())
}

/// `from + t (to - from)` on canonical representatives.
fn interpolate(from: &ProjectivePoint, to: &ProjectivePoint, t: Scalar) -> ProjectivePoint {
    let raw: Vec<Scalar> = from.coords().iter().zip(to.coords()).map(|(&a, &b)| a + t * (b - a)).collect();
    ProjectivePoint::canonicalize(&raw).expect("same dimension")
}

/// Primitive integer representative, with minimum coordinate zero, of the
/// direction from `from` to `to`.
fn primitive_direction(from: &ProjectivePoint, to: &ProjectivePoint) -> Vec<i128> {
    let diff: Vec<Scalar> = from.coords().iter().zip(to.coords()).map(|(&a, &b)| b - a).collect();
    let low = diff.iter().copied().min().expect("nonempty");
    let shifted: Vec<Scalar> = diff.iter().map(|&x| x - low).collect();
    let lcm = shifted.iter().fold(1i128, |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<i128> = shifted.iter().map(|x| x.numer() * (lcm / x.denom())).collect();
    let g = ints.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return ints;
    }
    ints.iter().map(|&x| x / g).collect()
}

/// Vertices where the primitive outgoing directions do not sum to a
/// multiple of `(1, ..., 1)`, each with a description.
pub fn balancing_defects(t: &MetricTree) -> Vec<String> {
    let n = t.n;
    let mut out = Vec::new();
    for (k, v) in t.vertices.iter().enumerate() {
        let mut sum = vec![0i128; n];
        for &leaf in &v.leaves {
            sum[leaf] -= 1;
        }
        for e in &t.edges {
            let other = if e.from == k {
                e.to
            } else if e.to == k {
                e.from
            } else {
                continue;
            };
            for (s, d) in sum.iter_mut().zip(primitive_direction(&v.coord, &t.vertices[other].coord)) {
                *s += d;
            }
        }
        if sum.iter().any(|&x| x != sum[0]) {
            out.push(format!("vertex {} has direction sum {:?}", v.coord, sum));
        }
    }
    out
}

/// Whether every vertex is balanced: rays point along `-e_k` and spine edges
/// along the primitive vector of their coordinate difference.
pub fn verify_balancing(t: &MetricTree) -> bool {
    balancing_defects(t).is_empty()
}

/// Compares the sign-of-`f_34` type, the type read off the Plücker relation,
/// the closed-form vertices and the recursive construction for a 4x4 input.
pub fn cross_check_n4(a: &NiMatrix) -> Result<VerificationReport> {
    let n = a.order();
    if n != 4 {
        return Err(crate::error::Error::InvalidDimension { found: n, min: 4 });
    }
    let p = a.matrix().column_point(0)?;
    let q = a.matrix().column_point(1)?;
    let f34 = difference([[a.get(2, 0), a.get(2, 1)], [a.get(3, 0), a.get(3, 1)]]);
    let by_sign = if f34 > Scalar::ZERO {
        LineType4::OneThree
    } else if f34 < Scalar::ZERO {
        LineType4::OneFour
    } else {
        LineType4::Star
    };
    let by_pluecker = pluecker(&p, &q)?.line_type();
    let types = if by_sign == by_pluecker {
        Ok(())
    } else {
        Err(format!("f_34 = {f34} gives {by_sign}, Pluecker sums give {by_pluecker}"))
    };
    let closed = vertices4(&p, &q, by_pluecker)?;
    let tree = build_tree(a, 0, 1)?;
    let vertices = match (closed.is_star(), tree.vertices.len()) {
        (true, 1) if tree.vertices[0].coord == closed.pq => Ok(()),
        (false, 2) if tree.pq() == &closed.pq && tree.qp() == &closed.qp => Ok(()),
        _ => Err(format!(
            "closed form gives pq = {}, qp = {}; construction gives {}",
            closed.pq,
            closed.qp,
            tree.vertices.iter().map(|v| v.coord.to_string()).collect::<Vec<_>>().join(", ")
        )),
    };
    let f = |k: usize, l: usize| difference([[a.get(k, 0), a.get(k, 1)], [a.get(l, 0), a.get(l, 1)]]).abs();
    // for type {ik,jl}: d(p,pq) = |f_jl|, d(q,qp) = |f_ik|, d(pq,qp) = |f_kl|
    let (k, l) = if by_sign == LineType4::OneFour { (3, 2) } else { (2, 3) };
    let dist = |x: &ProjectivePoint, y: &ProjectivePoint| trop_distance(x, y).expect("same dimension");
    let got = [dist(&p, &closed.pq), dist(&q, &closed.qp), dist(&closed.pq, &closed.qp)];
    let want = [f(1, l), f(0, k), f(2, 3)];
    let distances = if got == want {
        Ok(())
    } else {
        Err(format!("distances {got:?} differ from {want:?}"))
    };
    Ok(VerificationReport::from_checks(vec![
        check("type_agreement", types),
        check("vertices_agree", vertices),
        check("distances", distances),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxplus::Matrix;
    use crate::ni::{closure, NormalMatrix};
    use crate::tree::{Edge, InnerVertex, Mark};

    fn tripod() -> (NiMatrix, MetricTree) {
        let a = closure(
            &NormalMatrix::new(Matrix::from_ints(&[&[0, -19, -20], &[-15, 0, -20], &[-17, -14, 0]]).unwrap())
                .unwrap(),
        );
        let t = build_tree(&a, 0, 1).unwrap();
        (a, t)
    }

    #[test]
    fn tripod_passes_everything() {
        let (a, t) = tripod();
        let r = verify_tree(&a, 0, 1, &t);
        assert!(r.overall, "{r}");
        assert_eq!(r.checks.len(), TREE_CHECKS.len());
        for (c, name) in r.checks.iter().zip(TREE_CHECKS) {
            assert_eq!(c.name, name);
        }
    }

    #[test]
    fn tripod_balances_by_hand() {
        let v = ProjectivePoint::from_ints(&[0, 0, 0]).unwrap();
        let t = MetricTree {
            n: 3,
            cols: (0, 1),
            p: v.shifted(&[1], Scalar::from_int(-1)),
            q: v.shifted(&[0], Scalar::from_int(-1)),
            vertices: vec![InnerVertex { coord: v, leaves: vec![0, 1, 2], offset: Scalar::ONE }],
            edges: Vec::<Edge>::new(),
            splits: Vec::new(),
            p_mark: Mark { leaf: 1, vertex: 0, offset: Scalar::ONE },
            q_mark: Mark { leaf: 0, vertex: 0, offset: Scalar::ONE },
        };
        assert!(verify_balancing(&t));
    }

    #[test]
    fn mislabeled_leaf_is_unbalanced() {
        let (_, mut t) = tripod();
        t.vertices[0].leaves = vec![0, 1, 1];
        assert!(!verify_balancing(&t));
    }

    #[test]
    fn lengthened_offset_is_caught() {
        let (a, mut t) = tripod();
        t.p_mark.offset += Scalar::ONE;
        let r = verify_tree(&a, 0, 1, &t);
        assert!(!r.overall);
        assert!(!r.get("length_additivity").unwrap().passed);
        assert!(!r.get("segment_offsets").unwrap().passed);
    }

    #[test]
    fn malformed_tree_skips_the_rest() {
        let (a, mut t) = tripod();
        t.vertices.clear();
        let r = verify_tree(&a, 0, 1, &t);
        assert!(!r.overall);
        assert!(r.checks.iter().all(|c| !c.passed));
    }

    #[test]
    fn primitive_directions() {
        let a = ProjectivePoint::from_ints(&[0, 0, 0]).unwrap();
        let b = ProjectivePoint::canonicalize(&[Scalar::new(3, 2), Scalar::new(3, 2), Scalar::ZERO]).unwrap();
        assert_eq!(primitive_direction(&a, &b), vec![1, 1, 0]);
        assert_eq!(primitive_direction(&b, &a), vec![0, 0, 1]);
    }
}
