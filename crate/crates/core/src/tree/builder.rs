use crate::diff::{build_f, find_fracture, ActiveSet, DifferenceMatrix, Fracture, Role};
use crate::error::{Error, Result};
use crate::maxplus::{integer_length, tconv, trop_distance, ProjectivePoint, Scalar};
use crate::ni::NiMatrix;
use crate::tree::{cramer_vertex, Edge, InnerVertex, Mark, MetricTree, Split};

/// Where the vertex created at a stage sprouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modification {
    /// The first vertex, on the segment from `p` to `q`.
    Initial,
    /// Inside an inner edge.
    InnerEdge,
    /// On the ray of `leaf` between a marked point and its nearest vertex.
    Ray { leaf: usize },
}

/// One stage of the construction. Labels are in the input numbering except
/// inside `fracture` and `active`, which use the frame of [`Construction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    /// Leaves placed after this stage.
    pub leaves: Vec<usize>,
    /// The leaf added at this stage.
    pub leaf: usize,
    pub modification: Modification,
    pub fracture: Fracture,
    /// Coordinate of the new vertex in the space of the placed leaves.
    pub vertex: ProjectivePoint,
    /// Distance of the new vertex from `p`.
    pub offset: Scalar,
    /// Splits of the intermediate tree in spine order.
    pub splits: Vec<Split>,
    /// Lengths from `p` to `q` along the intermediate spine.
    pub lengths: Vec<Scalar>,
    /// Active entries after this stage, in frame labels.
    pub active: ActiveSet,
}

/// Stages at which the input departs from the generic case.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Genericity {
    /// Leaves whose fracture minimum is attained by several rows.
    pub tied: Vec<usize>,
    /// Leaves whose fracture has a part of length zero.
    pub zero_parts: Vec<usize>,
}

impl Genericity {
    pub fn is_generic(&self) -> bool {
        self.tied.is_empty() && self.zero_parts.is_empty()
    }
}

/// The full record of a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    /// `frame[a]` is the input index playing the role of `a`, with the chosen
    /// columns first.
    pub frame: Vec<usize>,
    /// The matrix of differences in the frame.
    pub f: DifferenceMatrix,
    pub stages: Vec<Stage>,
    pub genericity: Genericity,
    /// The tree before zero lengths are contracted.
    pub raw: MetricTree,
    pub tree: MetricTree,
}

/// Builds `L(p, q)` for columns `i` and `j` (0-based, distinct).
pub fn build_tree(a: &NiMatrix, i: usize, j: usize) -> Result<MetricTree> {
    build_tree_traced(a, i, j).map(|c| c.tree)
}

struct SpineVertex {
    label: usize,
    offset: Scalar,
}

/// Builds `L(p, q)` and keeps every intermediate stage.
pub fn build_tree_traced(a: &NiMatrix, i: usize, j: usize) -> Result<Construction> {
    let n = a.order();
    if n < 3 {
        return Err(Error::InvalidDimension { found: n, min: 3 });
    }
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidColumns { i: i + 1, j: j + 1, n });
    }
    let mut frame = vec![i, j];
    frame.extend((0..n).filter(|&k| k != i && k != j));
    let fa = a.conjugate(&frame);
    let f = build_f(&fa, 0, 1)?;
    let total = f.abs(0, 1);
    if total.is_zero() {
        return Err(Error::Degenerate(format!("columns {} and {} are the same point", i + 1, j + 1)));
    }
    let p = fa.matrix().column_point(0)?;
    let q = fa.matrix().column_point(1)?;
    let seg = tconv(&p, &q)?;
    if integer_length(&seg) != total || trop_distance(&p, &q)? != total {
        return Err(Error::Internal("segment length differs from |f_12|".into()));
    }

    let mut active = ActiveSet::initial(&f)?;
    let mut spine: Vec<SpineVertex> = Vec::new();
    // p-side of each inner edge, as frame labels
    let mut sides: Vec<Vec<usize>> = Vec::new();
    let mut stages = Vec::new();
    let mut genericity = Genericity::default();

    for s in 2..n {
        let fr = find_fracture(&f, &active, s)?;
        if fr.tied_minimum() {
            genericity.tied.push(frame[s]);
        }
        if fr.zero_part() {
            genericity.zero_parts.push(frame[s]);
        }
        let modification = match fr.victim_entry.role {
            Role::Span => Modification::Initial,
            Role::Edge => Modification::InnerEdge,
            Role::OffsetP => Modification::Ray { leaf: frame[1] },
            Role::OffsetQ => Modification::Ray { leaf: frame[0] },
        };
        let before: Scalar = active.entries()[..fr.victim].iter().map(|e| e.length).sum();
        let offset = before + fr.near_length;
        if offset != f.abs(1, s) || total - offset != f.abs(0, s) {
            return Err(Error::Internal(format!("leaf {} placed off its position", frame[s] + 1)));
        }

        let at = fr.victim;
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(sides.len() + 1);
        for (e, side) in sides.iter().enumerate() {
            // inner edge e joins spine vertices e and e + 1, i.e. entry e + 1
            if e + 1 < at {
                next.push(side.clone());
            } else if e + 1 == at {
                next.push(side.clone());
                next.push(with(side, s));
            } else {
                next.push(with(side, s));
            }
        }
        match fr.victim_entry.role {
            Role::Span | Role::Edge => {}
            Role::OffsetP => next.insert(0, vec![1, s]),
            Role::OffsetQ => {
                let mut side = vec![1];
                side.extend(spine.iter().map(|v| v.label));
                next.push(side);
            }
        }
        sides = next;
        spine.insert(at, SpineVertex { label: s, offset });
        active.apply(&fr);
        active.check_properties(&f)?;

        let derived = spine_sides(&spine);
        if derived.iter().map(|x| sorted(x)).ne(sides.iter().map(|x| sorted(x))) {
            return Err(Error::Internal(format!("split update disagrees with the spine at leaf {}", frame[s] + 1)));
        }

        let ps = p.truncate(s + 1)?;
        let qs = q.truncate(s + 1)?;
        let seg_s = tconv(&ps, &qs)?;
        let vertex = seg_s.point_at(offset)?;
        if seg_s.point_from_end(integer_length(&seg_s) - offset)? != vertex {
            return Err(Error::Internal(format!("vertex of leaf {} differs from the two ends", frame[s] + 1)));
        }
        if s == 2 && cramer_vertex(&ps, &qs)? != vertex {
            return Err(Error::Internal("first vertex differs from the closed form".into()));
        }

        let universe: Vec<usize> = frame[..=s].to_vec();
        let stage_splits = sides
            .iter()
            .map(|side| {
                let part: Vec<usize> = side.iter().map(|&x| frame[x]).collect();
                Split::new(universe.iter().copied(), &part)
            })
            .collect();
        let mut stage_perm = frame[..=s].to_vec();
        stage_perm.sort_unstable();
        let local: Vec<usize> = frame[..=s].iter().map(|x| stage_perm.binary_search(x).expect("present")).collect();
        stages.push(Stage {
            leaves: stage_perm.clone(),
            leaf: frame[s],
            modification,
            fracture: fr,
            vertex: vertex.unpermuted(&local),
            offset,
            splits: stage_splits,
            lengths: active.entries().iter().map(|e| e.length).collect(),
            active: active.clone(),
        });
    }

    let entries = active.entries();
    let last = spine.len() - 1;
    let mut vertices = Vec::with_capacity(spine.len());
    for (k, v) in spine.iter().enumerate() {
        let coord = seg.point_at(v.offset)?;
        if seg.point_from_end(total - v.offset)? != coord {
            return Err(Error::Internal(format!("vertex of leaf {} differs from the two ends", frame[v.label] + 1)));
        }
        let mut leaves = vec![frame[v.label]];
        if k == 0 {
            leaves.push(frame[1]);
        }
        if k == last {
            leaves.push(frame[0]);
        }
        leaves.sort_unstable();
        vertices.push(InnerVertex { coord: coord.unpermuted(&frame), leaves, offset: v.offset });
    }
    let edges: Vec<Edge> = (0..last)
        .map(|k| Edge { from: k, to: k + 1, length: spine[k + 1].offset - spine[k].offset })
        .collect();
    for (e, entry) in edges.iter().zip(&entries[1..entries.len() - 1]) {
        if e.length != entry.length || entry.role != Role::Edge {
            return Err(Error::Internal("active entries differ from the inner edges".into()));
        }
    }
    let raw = MetricTree {
        n,
        cols: (i, j),
        p: p.unpermuted(&frame),
        q: q.unpermuted(&frame),
        vertices,
        edges,
        splits: sides
            .iter()
            .map(|side| {
                let part: Vec<usize> = side.iter().map(|&x| frame[x]).collect();
                Split::new(0..n, &part)
            })
            .collect(),
        p_mark: Mark { leaf: j, vertex: 0, offset: entries[0].length },
        q_mark: Mark { leaf: i, vertex: last, offset: entries[entries.len() - 1].length },
    };
    if raw.total_length() != total {
        return Err(Error::Internal("spine lengths do not add up to d(p, q)".into()));
    }
    if raw.splits != raw.splits_from_spine() {
        return Err(Error::Internal("splits differ from those read off the spine".into()));
    }
    if raw.splits.iter().any(|s| !s.separates(i, j)) {
        return Err(Error::Internal("a split does not separate the chosen columns".into()));
    }
    let tree = contract_degeneracies(&raw);
    Ok(Construction { frame, f, stages, genericity, raw, tree })
}

fn with(side: &[usize], s: usize) -> Vec<usize> {
    let mut out = side.to_vec();
    out.push(s);
    out
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut out = v.to_vec();
    out.sort_unstable();
    out
}

fn spine_sides(spine: &[SpineVertex]) -> Vec<Vec<usize>> {
    let mut acc = vec![1];
    let mut out = Vec::new();
    for v in &spine[..spine.len() - 1] {
        acc.push(v.label);
        out.push(acc.clone());
    }
    out
}

/// Merges the ends of every zero-length inner edge and drops its split.
/// Zero offsets need no change: the marked point then is the vertex itself.
pub fn contract_degeneracies(t: &MetricTree) -> MetricTree {
    let mut vertices: Vec<InnerVertex> = vec![t.vertices[0].clone()];
    let mut edges = Vec::new();
    let mut splits = Vec::new();
    for (e, edge) in t.edges.iter().enumerate() {
        let next = &t.vertices[edge.to];
        if edge.length.is_zero() {
            let merged = vertices.last_mut().expect("nonempty");
            merged.leaves.extend(&next.leaves);
            merged.leaves.sort_unstable();
        } else {
            let k = vertices.len() - 1;
            edges.push(Edge { from: k, to: k + 1, length: edge.length });
            splits.push(t.splits[e].clone());
            vertices.push(next.clone());
        }
    }
    let last = vertices.len() - 1;
    MetricTree {
        n: t.n,
        cols: t.cols,
        p: t.p.clone(),
        q: t.q.clone(),
        vertices,
        edges,
        splits,
        p_mark: Mark { vertex: 0, ..t.p_mark },
        q_mark: Mark { vertex: last, ..t.q_mark },
    }
}
