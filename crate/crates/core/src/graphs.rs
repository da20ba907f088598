//! Balanced ℓ-partite graphs with a total order on their edges.
//!
//! Vertices carry global indices `0..|V|`; part `i` holds a contiguous block.
//! Text I/O uses 1-based labels (`v1`, `v2`, ...). The canonical edge order
//! sorts edges `{u, w}` (u < w) by `w`, then by `u`: an edge whose larger
//! endpoint has the smaller label comes first, ties broken the same way on the
//! smaller endpoint. Coordinate 1 of a graph codeword is the first edge.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{symmetric_eigen, RealSymMatrix, JACOBI_DEFAULT_TOL};

/// An undirected edge as `(smaller, larger)` global vertex indices.
pub type Edge = (usize, usize);

/// Which order the edge list (and hence the codeword coordinates) follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOrder {
    Canonical,
    /// Order in which the edges appear in the input file.
    File,
}

impl std::str::FromStr for EdgeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(EdgeOrder::Canonical),
            "file" => Ok(EdgeOrder::File),
            other => Err(Error::usage(format!(
                "unknown edge order '{other}' (expected canonical|file)"
            ))),
        }
    }
}

impl fmt::Display for EdgeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeOrder::Canonical => "canonical",
            EdgeOrder::File => "file",
        })
    }
}

/// Canonical edge comparison. `Less` means `a` precedes `b` (comes earlier in
/// codeword coordinates): its larger endpoint has the smaller label, or the
/// larger endpoints tie and its smaller endpoint has the smaller label.
pub fn edge_order_compare(a: Edge, b: Edge) -> Ordering {
    let key = |(u, w): Edge| (u.max(w), u.min(w));
    key(a).cmp(&key(b))
}

#[derive(Clone, Debug)]
pub struct PartiteGraph {
    part_sizes: Vec<usize>,
    part_start: Vec<usize>,
    part_of: Vec<usize>,
    edges: Vec<Edge>,
    /// Per vertex: `(edge position, neighbor)` sorted by edge position.
    incidence: Vec<Vec<(usize, usize)>>,
    order: EdgeOrder,
}

impl PartiteGraph {
    /// `K_{m,…,m}` with `ell` parts, edges in canonical order.
    pub fn complete_multipartite(ell: usize, m: usize) -> Result<Self> {
        if ell < 2 || m < 1 {
            return Err(Error::usage(format!(
                "complete multipartite graph needs ell >= 2 and m >= 1, got ({ell}, {m})"
            )));
        }
        let total = ell * m;
        let mut edges = Vec::with_capacity(ell * (ell - 1) * m * m / 2);
        // Generated directly in canonical order: by larger endpoint, then smaller.
        for w in 0..total {
            for u in 0..(w / m) * m {
                edges.push((u, w));
            }
        }
        Self::from_edges(vec![m; ell], edges, EdgeOrder::Canonical)
    }

    /// Builds a graph from part sizes and an edge list. Rejects intra-part,
    /// duplicate or out-of-range edges; balance is checked separately by
    /// [`PartiteGraph::validate_balanced`].
    pub fn from_edges(part_sizes: Vec<usize>, edges: Vec<Edge>, order: EdgeOrder) -> Result<Self> {
        if part_sizes.len() < 2 {
            return Err(Error::usage("a partite graph needs at least two parts"));
        }
        let mut part_start = Vec::with_capacity(part_sizes.len());
        let mut part_of = Vec::new();
        for (i, &s) in part_sizes.iter().enumerate() {
            part_start.push(part_of.len());
            part_of.extend(std::iter::repeat_n(i, s));
        }
        let nv = part_of.len();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, w) in edges {
            if u >= nv || w >= nv {
                return Err(Error::usage(format!(
                    "edge {{v{}, v{}}} references a vertex outside 1..={nv}",
                    u + 1,
                    w + 1
                )));
            }
            if part_of[u] == part_of[w] {
                return Err(Error::usage(format!(
                    "edge {{v{}, v{}}} joins two vertices of part {}",
                    u + 1,
                    w + 1,
                    part_of[u] + 1
                )));
            }
            normalized.push((u.min(w), u.max(w)));
        }
        let mut sorted = normalized.clone();
        sorted.sort_by(|&a, &b| edge_order_compare(a, b));
        if let Some(dup) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::usage(format!(
                "duplicate edge {{v{}, v{}}}",
                dup[0].0 + 1,
                dup[0].1 + 1
            )));
        }
        let edges = match order {
            EdgeOrder::Canonical => sorted,
            EdgeOrder::File => normalized,
        };
        let mut incidence = vec![Vec::new(); nv];
        for (pos, &(u, w)) in edges.iter().enumerate() {
            incidence[u].push((pos, w));
            incidence[w].push((pos, u));
        }
        Ok(Self {
            part_sizes,
            part_start,
            part_of,
            edges,
            incidence,
            order,
        })
    }

    pub fn ell(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    /// Global indices of part `i`.
    pub fn part(&self, i: usize) -> Range<usize> {
        self.part_start[i]..self.part_start[i] + self.part_sizes[i]
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// Common part size, when all parts are equal.
    pub fn m(&self) -> Option<usize> {
        let m = self.part_sizes[0];
        self.part_sizes.iter().all(|&s| s == m).then_some(m)
    }

    /// Cross-part valency `n`, when the graph is balanced.
    pub fn n(&self) -> Option<usize> {
        if !self.validate_balanced().is_valid() {
            return None;
        }
        let v = 0;
        let other = if self.part_of(v) == 0 { 1 } else { 0 };
        Some(self.neighbors_in_part(v, other))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_order(&self) -> EdgeOrder {
        self.order
    }

    /// Incident edges of `v` as `(edge position, neighbor)`, ascending by position.
    pub fn incidence(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// `|N(v) ∩ V_j|`.
    pub fn neighbors_in_part(&self, v: usize, j: usize) -> usize {
        self.incidence[v]
            .iter()
            .filter(|&&(_, u)| self.part_of[u] == j)
            .count()
    }

    /// Checks that parts have equal size and that every vertex
    /// sees the same number `n` of neighbors in each other part.
    pub fn validate_balanced(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let expected_m = self.part_sizes[0];
        for (i, &s) in self.part_sizes.iter().enumerate() {
            if s != expected_m {
                violations.push(Violation::PartSize {
                    part: i + 1,
                    size: s,
                    expected: expected_m,
                });
            }
        }
        let counts: Vec<Vec<usize>> = (0..self.vertex_count())
            .map(|v| {
                let mut c = vec![0usize; self.ell()];
                for &(_, u) in &self.incidence[v] {
                    c[self.part_of[u]] += 1;
                }
                c
            })
            .collect();
        // the most frequent cross valency is the expected n; ties go to the smaller value
        let mut freq = std::collections::BTreeMap::new();
        for (v, c) in counts.iter().enumerate() {
            for (j, &x) in c.iter().enumerate() {
                if j != self.part_of[v] {
                    *freq.entry(x).or_insert(0usize) += 1;
                }
            }
        }
        let reference = freq
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map_or(0, |(&x, _)| x);
        for (v, c) in counts.iter().enumerate() {
            for (j, &c) in c.iter().enumerate() {
                if j != self.part_of[v] && c != reference {
                    violations.push(Violation::CrossValency {
                        vertex: v + 1,
                        part: j + 1,
                        count: c,
                        expected: reference,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Whether every cross-part pair is adjacent.
    pub fn is_complete_multipartite(&self) -> bool {
        match (self.m(), self.n()) {
            (Some(m), Some(n)) => m == n,
            _ => false,
        }
    }

    /// 0/1 adjacency matrix in part-block form.
    pub fn adjacency_matrix(&self) -> RealSymMatrix {
        let mut a = RealSymMatrix::zeros(self.vertex_count());
        for &(u, w) in &self.edges {
            a.set(u, w, 1.0);
        }
        a
    }

    /// Adjacency spectrum, descending with multiplicity. Closed form for
    /// complete multipartite graphs, Jacobi otherwise.
    pub fn spectrum(&self) -> Result<Spectrum> {
        if self.is_complete_multipartite() {
            let (ell, m) = (self.ell(), self.m().expect("balanced"));
            let values = closed_form_spectrum(ell, m)
                .into_iter()
                .flat_map(|(v, mult)| std::iter::repeat_n(v.to_integer() as f64, mult))
                .collect();
            return Ok(Spectrum {
                values,
                closed_form: true,
            });
        }
        let values = symmetric_eigen(&self.adjacency_matrix(), JACOBI_DEFAULT_TOL)?.values;
        Ok(Spectrum {
            values,
            closed_form: false,
        })
    }

    /// Second largest adjacency eigenvalue counted with multiplicity.
    pub fn lambda2(&self) -> Result<Lambda2> {
        if self.vertex_count() < 2 {
            return Err(Error::domain("lambda2 needs at least two vertices"));
        }
        if self.is_complete_multipartite() {
            let spec = closed_form_spectrum(self.ell(), self.m().expect("balanced"));
            // the top eigenvalue is simple, so λ₂ is the next distinct value
            return Ok(Lambda2::Exact(spec[1].0));
        }
        Ok(Lambda2::Numeric(self.spectrum()?.values[1]))
    }

    /// `|E(U, T)|` for disjoint vertex sets.
    pub fn edge_count_between(&self, u_set: &[usize], t_set: &[usize]) -> Result<usize> {
        let nv = self.vertex_count();
        let mut in_u = vec![false; nv];
        for &v in u_set {
            if v >= nv {
                return Err(Error::usage(format!("vertex index {v} out of range")));
            }
            in_u[v] = true;
        }
        let mut in_t = vec![false; nv];
        for &v in t_set {
            if v >= nv {
                return Err(Error::usage(format!("vertex index {v} out of range")));
            }
            if in_u[v] {
                return Err(Error::usage(format!("vertex v{} lies in both sets", v + 1)));
            }
            in_t[v] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b)| (in_u[a] && in_t[b]) || (in_u[b] && in_t[a]))
            .count())
    }

    /// Parses `partite <ell> <m>` (or `parts <s1> <s2> ...`) followed by one
    /// 1-based edge `u v` per line.
    pub fn parse_text(text: &str, order: EdgeOrder) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing 'partite <ell> <m>' header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        let nums = |ts: &[&str]| {
            ts.iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(hl, format!("bad integer '{t}'")))
                })
                .collect::<Result<Vec<usize>>>()
        };
        let part_sizes = match toks.first() {
            Some(&"partite") if toks.len() == 3 => {
                let v = nums(&toks[1..])?;
                vec![v[1]; v[0]]
            }
            Some(&"parts") if toks.len() >= 3 => nums(&toks[1..])?,
            _ => return Err(Error::parse(hl, "header must be 'partite <ell> <m>'")),
        };
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 2 {
                return Err(Error::parse(ln, "edge lines hold two vertex labels"));
            }
            let parse = |s: &str| match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::parse(ln, format!("bad vertex label '{s}'"))),
            };
            edges.push((parse(t[0])?, parse(t[1])?));
        }
        Self::from_edges(part_sizes, edges, order).map_err(|e| match e {
            Error::Usage(msg) => Error::parse(hl, msg),
            other => other,
        })
    }

    /// Text form with edges in the active order.
    pub fn to_text(&self) -> String {
        let mut s = match self.m() {
            Some(m) => format!("partite {} {}\n", self.ell(), m),
            None => {
                let sizes: Vec<String> = self.part_sizes.iter().map(usize::to_string).collect();
                format!("parts {}\n", sizes.join(" "))
            }
        };
        for &(u, w) in &self.edges {
            s.push_str(&format!("{} {}\n", u + 1, w + 1));
        }
        s
    }
}

/// `(eigenvalue, multiplicity)` of `K_{m×ell}`, descending, zero multiplicities
/// dropped: `(ell−1)m` once, `0` with multiplicity `ell(m−1)`, `−m` with
/// multiplicity `ell−1`.
pub fn closed_form_spectrum(ell: usize, m: usize) -> Vec<(Ratio<i64>, usize)> {
    let (l, mm) = (ell as i64, m as i64);
    [
        (Ratio::from_integer((l - 1) * mm), 1),
        (Ratio::from_integer(0), ell * (m - 1)),
        (Ratio::from_integer(-mm), ell - 1),
    ]
    .into_iter()
    .filter(|&(_, mult)| mult > 0)
    .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub closed_form: bool,
}

/// λ₂, exact when a closed form applies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lambda2 {
    Exact(Ratio<i64>),
    Numeric(f64),
}

impl Lambda2 {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Lambda2::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Lambda2::Numeric(x) => x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Lambda2::Exact(_))
    }
}

impl fmt::Display for Lambda2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda2::Exact(r) => write!(f, "{r}"),
            Lambda2::Numeric(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Part sizes differ. Parts are 1-based.
    PartSize { part: usize, size: usize, expected: usize },
    /// `vertex` (1-based) has `count` neighbors in `part`.
    CrossValency {
        vertex: usize,
        part: usize,
        count: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PartSize { part, size, expected } => write!(
                f,
                "unequal parts: part {part} has {size} vertices, expected {expected}"
            ),
            Violation::CrossValency {
                vertex,
                part,
                count,
                expected,
            } => write!(
                f,
                "uneven valency: v{vertex} has {count} neighbors in part {part}, expected {expected}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A set of vertices inside one part, such as a codeword support `S_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSubset {
    pub part: usize,
    pub members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(graph: &PartiteGraph, part: usize, mut members: Vec<usize>) -> Result<Self> {
        if part >= graph.ell() {
            return Err(Error::usage(format!("part index {part} out of range")));
        }
        let range = graph.part(part);
        if let Some(&v) = members.iter().find(|v| !range.contains(v)) {
            return Err(Error::usage(format!("v{} is not in part {}", v + 1, part + 1)));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { part, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `V_i \ S_i`.
    pub fn complement(&self, graph: &PartiteGraph) -> VertexSubset {
        let members = graph
            .part(self.part)
            .filter(|v| self.members.binary_search(v).is_err())
            .collect();
        VertexSubset {
            part: self.part,
            members,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::symmetric_eigenvalues;
    use proptest::prelude::*;

    #[test]
    fn complete_multipartite_sizes() {
        let g = PartiteGraph::complete_multipartite(3, 7).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (21, 147));
        let g = PartiteGraph::complete_multipartite(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 27));
        let g = PartiteGraph::complete_multipartite(2, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert!(PartiteGraph::complete_multipartite(1, 3).is_err());
    }

    #[test]
    fn canonical_order_examples() {
        // v1..v21 are 0..20 internally
        assert_eq!(edge_order_compare((0, 7), (1, 7)), Ordering::Less);
        assert_eq!(edge_order_compare((0, 7), (0, 8)), Ordering::Less);
        assert_eq!(edge_order_compare((0, 7), (0, 7)), Ordering::Equal);
        assert_eq!(edge_order_compare((7, 0), (0, 7)), Ordering::Equal);
        let g = PartiteGraph::complete_multipartite(3, 7).unwrap();
        assert_eq!(g.edges()[0], (0, 7));
        assert_eq!(g.edges()[1], (1, 7));
        assert!(g
            .edges()
            .windows(2)
            .all(|w| edge_order_compare(w[0], w[1]) == Ordering::Less));
    }

    #[test]
    fn regularity_and_balance() {
        for (ell, m) in [(2, 1), (2, 4), (3, 3), (3, 7), (4, 2)] {
            let g = PartiteGraph::complete_multipartite(ell, m).unwrap();
            assert!(g.validate_balanced().is_valid());
            assert_eq!(g.n(), Some(m));
            for v in 0..g.vertex_count() {
                assert_eq!(g.degree(v), (ell - 1) * m);
            }
            assert_eq!(g.edge_count(), ell * (ell - 1) * m * m / 2);
        }
    }

    #[test]
    fn unbalanced_graphs_are_reported() {
        let g = PartiteGraph::complete_multipartite(3, 3).unwrap();
        let edges: Vec<Edge> = g.edges().iter().copied().filter(|&e| e != (0, 3)).collect();
        let h = PartiteGraph::from_edges(vec![3, 3, 3], edges, EdgeOrder::Canonical).unwrap();
        let report = h.validate_balanced();
        assert!(!report.is_valid());
        let vertices: Vec<usize> = report
            .violations
            .iter()
            .map(|v| match v {
                Violation::CrossValency { vertex, .. } => *vertex,
                _ => 0,
            })
            .collect();
        assert_eq!(vertices, vec![1, 4]);
        assert_eq!(h.n(), None);

        let two_three = PartiteGraph::from_edges(vec![2, 3], vec![(0, 2)], EdgeOrder::File).unwrap();
        assert!(two_three
            .validate_balanced()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::PartSize { part: 2, .. })));
    }

    #[test]
    fn bad_edges_are_rejected() {
        assert!(PartiteGraph::from_edges(vec![2, 2], vec![(0, 1)], EdgeOrder::File).is_err());
        assert!(PartiteGraph::from_edges(vec![2, 2], vec![(0, 2), (2, 0)], EdgeOrder::File).is_err());
        assert!(PartiteGraph::from_edges(vec![2, 2], vec![(0, 9)], EdgeOrder::File).is_err());
    }

    #[test]
    fn lambda2_values() {
        let k333 = PartiteGraph::complete_multipartite(3, 3).unwrap();
        assert_eq!(k333.lambda2().unwrap(), Lambda2::Exact(Ratio::from_integer(0)));
        let k777 = PartiteGraph::complete_multipartite(3, 7).unwrap();
        assert_eq!(k777.lambda2().unwrap(), Lambda2::Exact(Ratio::from_integer(0)));
        let k2 = PartiteGraph::complete_multipartite(2, 1).unwrap();
        assert_eq!(k2.lambda2().unwrap(), Lambda2::Exact(Ratio::from_integer(-1)));
        // 6-cycle as a bipartite 2-regular graph: eigenvalues 2cos(2πk/6)
        let c6 = PartiteGraph::from_edges(
            vec![3, 3],
            vec![(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)],
            EdgeOrder::Canonical,
        )
        .unwrap();
        assert!(c6.validate_balanced().is_valid());
        match c6.lambda2().unwrap() {
            Lambda2::Numeric(x) => assert!((x - 1.0).abs() < 1e-10),
            other => panic!("expected numeric, got {other:?}"),
        }
    }

    /// Characteristic polynomial coefficients (monic, highest first) by the
    /// Faddeev–LeVerrier recurrence in exact integer arithmetic.
    fn charpoly(a: &[Vec<i128>]) -> Vec<i128> {
        let n = a.len();
        let mut coeffs = vec![0i128; n + 1];
        coeffs[0] = 1;
        let mut m = vec![vec![0i128; n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = vec![vec![0i128; n]; n];
            for i in 0..n {
                for j in 0..n {
                    next[i][j] = (0..n).map(|t| a[i][t] * m[t][j]).sum::<i128>();
                }
                next[i][i] += coeffs[k - 1];
            }
            m = next;
            let tr: i128 = (0..n)
                .map(|i| (0..n).map(|t| a[i][t] * m[t][i]).sum::<i128>())
                .sum();
            assert_eq!(tr % k as i128, 0);
            coeffs[k] = -tr / k as i128;
        }
        coeffs
    }

    fn poly_from_roots(roots: &[i128]) -> Vec<i128> {
        let mut p = vec![1i128];
        for &r in roots {
            let mut q = vec![0i128; p.len() + 1];
            for (i, &c) in p.iter().enumerate() {
                q[i] += c;
                q[i + 1] -= r * c;
            }
            p = q;
        }
        p
    }

    #[test]
    fn k333_spectrum_matches_charpoly_oracle() {
        let g = PartiteGraph::complete_multipartite(3, 3).unwrap();
        let dense: Vec<Vec<i128>> = g
            .adjacency_matrix()
            .to_dense()
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut roots = vec![6i128];
        roots.extend([0; 6]);
        roots.extend([-3; 2]);
        assert_eq!(charpoly(&dense), poly_from_roots(&roots));

        let jac = symmetric_eigenvalues(&g.adjacency_matrix(), JACOBI_DEFAULT_TOL).unwrap();
        let expected: Vec<f64> = roots.iter().map(|&r| r as f64).collect();
        for (a, b) in jac.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-8, "{jac:?}");
        }
    }

    #[test]
    fn closed_form_agrees_with_jacobi_up_to_60_vertices() {
        for ell in 2..=6usize {
            for m in 1..=60 / ell {
                if ell * m > 60 {
                    continue;
                }
                let g = PartiteGraph::complete_multipartite(ell, m).unwrap();
                let closed = g.lambda2().unwrap().as_f64();
                let jac = symmetric_eigenvalues(&g.adjacency_matrix(), JACOBI_DEFAULT_TOL).unwrap();
                assert!((closed - jac[1]).abs() < 1e-8, "({ell},{m})");
                assert!((jac[0] - ((ell - 1) * m) as f64).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn largest_eigenvector_is_all_ones() {
        let c6 = PartiteGraph::from_edges(
            vec![3, 3],
            vec![(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)],
            EdgeOrder::Canonical,
        )
        .unwrap();
        let eig = symmetric_eigen(&c6.adjacency_matrix(), JACOBI_DEFAULT_TOL).unwrap();
        assert!((eig.values[0] - 2.0).abs() < 1e-8);
        let v = &eig.vectors[0];
        let norm = (v.len() as f64).sqrt();
        assert!(v.iter().all(|x| (x.abs() - 1.0 / norm).abs() < 1e-8));
    }

    #[test]
    fn edge_counts() {
        let k333 = PartiteGraph::complete_multipartite(3, 3).unwrap();
        let v1: Vec<usize> = k333.part(0).collect();
        let v2: Vec<usize> = k333.part(1).collect();
        assert_eq!(k333.edge_count_between(&v1, &v2).unwrap(), 9);
        assert_eq!(k333.edge_count_between(&[], &v2).unwrap(), 0);
        assert!(k333.edge_count_between(&v1, &v1).is_err());
        let k777 = PartiteGraph::complete_multipartite(3, 7).unwrap();
        let v1: Vec<usize> = k777.part(0).collect();
        let rest: Vec<usize> = (7..21).collect();
        assert_eq!(k777.edge_count_between(&v1, &rest).unwrap(), 98);
    }

    #[test]
    fn vertex_subsets() {
        let g = PartiteGraph::complete_multipartite(3, 3).unwrap();
        let s = VertexSubset::new(&g, 1, vec![4, 3]).unwrap();
        assert_eq!(s.members, vec![3, 4]);
        assert_eq!(s.complement(&g).members, vec![5]);
        assert!(VertexSubset::new(&g, 0, vec![5]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let g = PartiteGraph::complete_multipartite(3, 2).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("partite 3 2\n1 3\n2 3\n"));
        let back = PartiteGraph::parse_text(&text, EdgeOrder::File).unwrap();
        assert_eq!(back.edges(), g.edges());
        let reversed = "partite 2 1\n2 1\n";
        let h = PartiteGraph::parse_text(reversed, EdgeOrder::File).unwrap();
        assert_eq!(h.edges(), &[(0, 1)]);
        assert!(matches!(
            PartiteGraph::parse_text("partite 2 2\n1 2\n", EdgeOrder::File),
            Err(Error::Parse { .. })
        ));
        assert!(PartiteGraph::parse_text("graph 2 2\n", EdgeOrder::File).is_err());
    }

    #[test]
    fn file_order_is_kept() {
        let text = "partite 2 2\n2 4\n1 3\n1 4\n2 3\n";
        let f = PartiteGraph::parse_text(text, EdgeOrder::File).unwrap();
        assert_eq!(f.edges(), &[(1, 3), (0, 2), (0, 3), (1, 2)]);
        let c = PartiteGraph::parse_text(text, EdgeOrder::Canonical).unwrap();
        assert_eq!(c.edges(), &[(0, 2), (1, 2), (0, 3), (1, 3)]);
    }

    proptest! {
        #[test]
        fn sorting_any_permutation_restores_canonical(
            ell in 2usize..5,
            m in 1usize..5,
            seed in any::<u64>(),
        ) {
            let g = PartiteGraph::complete_multipartite(ell, m).unwrap();
            let mut shuffled = g.edges().to_vec();
            let mut s = seed | 1;
            for i in (1..shuffled.len()).rev() {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                shuffled.swap(i, (s % (i as u64 + 1)) as usize);
            }
            shuffled.sort_by(|&a, &b| edge_order_compare(a, b));
            prop_assert_eq!(&shuffled[..], g.edges());
        }
    }
}
