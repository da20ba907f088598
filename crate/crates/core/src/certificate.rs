//! Step-by-step evaluation of the spectral distance argument on a concrete
//! codeword: supports, padding, the test vector `x`, `xᵀAx`, the edge counts
//! and the resulting lower bound on `a`.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphcode::{BoundValue, EdgeAssignment, GeneralizedGraphCode, NUMERIC_SLACK};
use crate::graphs::{Lambda2, PartiteGraph, VertexSubset};
use crate::matrix::{symmetric_eigen, RealSymMatrix, JACOBI_DEFAULT_TOL};

fn one_based<S: Serializer>(sets: &[VertexSubset], s: S) -> std::result::Result<S::Ok, S::Error> {
    let labels: Vec<Vec<usize>> = sets
        .iter()
        .map(|t| t.members.iter().map(|v| v + 1).collect())
        .collect();
    labels.serialize(s)
}

/// Supports `S_i`: part-`i` vertices touching at least one nonzero edge.
pub fn extract_supports(gc: &GeneralizedGraphCode, c: &EdgeAssignment) -> Result<Vec<VertexSubset>> {
    if c.len() != gc.len() {
        return Err(Error::Usage(format!(
            "assignment of length {} for a code of length {}",
            c.len(),
            gc.len()
        )));
    }
    if c.weight() == 0 {
        return Err(Error::Domain("the zero codeword has no supports".into()));
    }
    let g = gc.graph();
    let mut touched = vec![false; g.vertex_count()];
    for (p, &(u, w)) in g.edges().iter().enumerate() {
        if c.0[p] != 0 {
            touched[u] = true;
            touched[w] = true;
        }
    }
    (0..g.ell())
        .map(|i| VertexSubset::new(g, i, g.part(i).filter(|&v| touched[v]).collect()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaddedSupports {
    #[serde(serialize_with = "one_based")]
    pub true_supports: Vec<VertexSubset>,
    #[serde(serialize_with = "one_based")]
    pub supports: Vec<VertexSubset>,
    /// Parts that received padding vertices.
    pub padded: Vec<bool>,
    pub a: usize,
    pub x: Vec<i64>,
}

/// Pads every support to size `a = max |S_i|` with the lowest-index unused
/// vertices of its part, then sets `x = m − a` on supports and `−a` elsewhere.
pub fn pad_and_build_x(graph: &PartiteGraph, supports: &[VertexSubset]) -> Result<PaddedSupports> {
    let m = graph
        .m()
        .ok_or_else(|| Error::Usage("parts must share one size".into()))?;
    if supports.len() != graph.ell() {
        return Err(Error::Usage(format!(
            "{} supports for {} parts",
            supports.len(),
            graph.ell()
        )));
    }
    let a = supports.iter().map(VertexSubset::len).max().unwrap_or(0);
    if a == 0 {
        return Err(Error::Domain("all supports are empty".into()));
    }
    let mut padded_sets = Vec::with_capacity(supports.len());
    let mut padded = Vec::with_capacity(supports.len());
    for s in supports {
        let mut members = s.members.clone();
        for v in graph.part(s.part) {
            if members.len() == a {
                break;
            }
            if s.members.binary_search(&v).is_err() {
                members.push(v);
            }
        }
        padded.push(members.len() > s.len());
        padded_sets.push(VertexSubset::new(graph, s.part, members)?);
    }
    let mut x = vec![-(a as i64); graph.vertex_count()];
    for s in &padded_sets {
        for &v in &s.members {
            x[v] = (m - a) as i64;
        }
    }
    Ok(PaddedSupports {
        true_supports: supports.to_vec(),
        supports: padded_sets,
        padded,
        a,
        x,
    })
}

/// `xᵀAx` as `Σ_{edges {u,w}} 2·x(u)·x(w)`.
pub fn quadratic_form(graph: &PartiteGraph, x: &[i64]) -> Result<i64> {
    if x.len() != graph.vertex_count() {
        return Err(Error::Usage(format!(
            "vector of length {} for {} vertices",
            x.len(),
            graph.vertex_count()
        )));
    }
    Ok(graph.edges().iter().map(|&(u, w)| 2 * x[u] * x[w]).sum())
}

/// Per-part block sums `Σ_{j≠i} x_iᵀ A_ij x_j`, read from the dense adjacency.
pub fn quadratic_form_blocks(graph: &PartiteGraph, x: &[i64]) -> Result<Vec<i64>> {
    if x.len() != graph.vertex_count() {
        return Err(Error::Usage("vector length does not match the vertex count".into()));
    }
    let a = graph.adjacency_matrix();
    let mut sums = vec![0i64; graph.ell()];
    for (i, sum) in sums.iter_mut().enumerate() {
        for u in graph.part(i) {
            for j in (0..graph.ell()).filter(|&j| j != i) {
                for w in graph.part(j) {
                    if a.get(u, w) != 0.0 {
                        *sum += x[u] * x[w];
                    }
                }
            }
        }
    }
    Ok(sums)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// Follows from the hypotheses; a failure is a genuine violation.
    Asserted,
    /// Reported for information only.
    Observed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartEdgeBounds {
    /// 1-based part playing the role of part 1.
    pub part: usize,
    pub status: CheckStatus,
    pub support_to_supports: usize,
    pub support_to_complements: usize,
    pub complement_to_supports: usize,
    pub complement_to_complements: usize,
    pub support_to_supports_min: i64,
    pub support_to_complements_max: i64,
    pub complement_to_supports_max: i64,
    pub complement_to_complements_min: i64,
    pub support_to_supports_ok: bool,
    pub support_to_complements_ok: bool,
    pub complement_to_supports_ok: bool,
    pub complement_to_complements_ok: bool,
    /// `Σ_{j≠i} x_iᵀ A_ij x_j`.
    pub block_sum: i64,
    /// `m²·da − (ℓ−1)mna²`.
    pub block_lower: i64,
    pub block_identity: bool,
}

impl PartEdgeBounds {
    pub fn all_hold(&self) -> bool {
        self.support_to_supports_ok && self.support_to_complements_ok && self.complement_to_supports_ok && self.complement_to_complements_ok && self.block_sum >= self.block_lower
    }
}

/// The four support edge counts with each part in turn as part 1. Parts whose
/// support was padded, or whose partners were, are reported as observed.
pub fn check_edge_bounds(
    graph: &PartiteGraph,
    d: usize,
    n: usize,
    padded: &PaddedSupports,
) -> Result<Vec<PartEdgeBounds>> {
    let ell = graph.ell();
    let m = graph.m().ok_or_else(|| Error::Usage("parts must share one size".into()))? as i64;
    let (a, d, n, l1) = (padded.a as i64, d as i64, n as i64, (ell - 1) as i64);
    let blocks = quadratic_form_blocks(graph, &padded.x)?;
    let any_padded = padded.padded.iter().any(|&p| p);
    let mut out = Vec::with_capacity(ell);
    for i in 0..ell {
        let s_i = &padded.supports[i];
        let sbar_i = s_i.complement(graph);
        let mut others_s = Vec::new();
        let mut others_sbar = Vec::new();
        for j in (0..ell).filter(|&j| j != i) {
            others_s.extend_from_slice(&padded.supports[j].members);
            others_sbar.extend(padded.supports[j].complement(graph).members);
        }
        let e1 = graph.edge_count_between(&s_i.members, &others_s)?;
        let e2 = graph.edge_count_between(&s_i.members, &others_sbar)?;
        let e3 = graph.edge_count_between(&sbar_i.members, &others_s)?;
        let e4 = graph.edge_count_between(&sbar_i.members, &others_sbar)?;
        let b1 = d * a;
        let b2 = l1 * a * n - d * a;
        let b4 = l1 * m * n - 2 * l1 * a * n + d * a;
        let lower = m * m * d * a - l1 * m * n * a * a;
        out.push(PartEdgeBounds {
            part: i + 1,
            status: if any_padded { CheckStatus::Observed } else { CheckStatus::Asserted },
            support_to_supports: e1,
            support_to_complements: e2,
            complement_to_supports: e3,
            complement_to_complements: e4,
            support_to_supports_min: b1,
            support_to_complements_max: b2,
            complement_to_supports_max: b2,
            complement_to_complements_min: b4,
            support_to_supports_ok: e1 as i64 >= b1,
            support_to_complements_ok: e2 as i64 <= b2,
            complement_to_supports_ok: e3 as i64 <= b2,
            complement_to_complements_ok: e4 as i64 >= b4,
            block_sum: blocks[i],
            block_lower: lower,
            block_identity: blocks[i] == m * m * e1 as i64 - l1 * m * n * a * a,
        });
    }
    Ok(out)
}

/// Checks `yᵀPy ≤ θ₂|y|²` for `y` orthogonal to the top eigenvector of `P`.
/// Orthogonality and the final comparison use `tol` relative to `‖P‖_F·|y|²`.
pub fn rayleigh_check(p: &RealSymMatrix, y: &[f64], tol: f64) -> Result<bool> {
    let n = p.order();
    if y.len() != n {
        return Err(Error::Usage(format!("vector of length {} for order {n}", y.len())));
    }
    if n == 0 {
        return Ok(true);
    }
    let eig = symmetric_eigen(p, JACOBI_DEFAULT_TOL)?;
    let top = &eig.vectors[0];
    let ny: f64 = y.iter().map(|v| v * v).sum::<f64>();
    let dot: f64 = top.iter().zip(y).map(|(a, b)| a * b).sum();
    if dot.abs() > tol.max(1e-12) * ny.sqrt().max(1.0) {
        return Err(Error::Usage(format!(
            "vector is not orthogonal to the top eigenvector (inner product {dot:e})"
        )));
    }
    let theta2 = if n > 1 { eig.values[1] } else { eig.values[0] };
    let lhs = p.quadratic_form(y);
    let scale = (p.frobenius_norm() * ny).max(1.0);
    Ok(lhs <= theta2 * ny + tol * scale)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinalBoundCheck {
    pub a: usize,
    /// `m(d − λ₂)/((ℓ−1)n − λ₂)`; absent when the denominator is not positive.
    pub a_lower: Option<BoundValue>,
    pub a_holds: bool,
    pub weight: usize,
    pub da: usize,
    pub weight_ge_da: bool,
    pub theorem_bound: Option<BoundValue>,
    pub weight_ge_bound: bool,
}

pub fn final_bound_check(
    a: usize,
    weight: usize,
    d: usize,
    m: usize,
    n: usize,
    ell: usize,
    lambda2: Lambda2,
) -> FinalBoundCheck {
    let valency = (ell - 1) * n;
    let a_lower = match lambda2 {
        Lambda2::Exact(l2) => {
            let den = Ratio::from_integer(valency as i64) - l2;
            (den > Ratio::from_integer(0)).then(|| {
                BoundValue::Exact(Ratio::from_integer(m as i64) * (Ratio::from_integer(d as i64) - l2) / den)
            })
        }
        Lambda2::Numeric(l2) => {
            let den = valency as f64 - l2;
            (den > NUMERIC_SLACK).then(|| BoundValue::Numeric(m as f64 * (d as f64 - l2) / den))
        }
    };
    let theorem_bound = a_lower.map(|b| match b {
        BoundValue::Exact(r) => BoundValue::Exact(r * d as i64),
        BoundValue::Numeric(x) => BoundValue::Numeric(x * d as f64),
    });
    FinalBoundCheck {
        a,
        a_lower,
        a_holds: a_lower.is_none_or(|b| b.is_met_by(a)),
        weight,
        da: d * a,
        weight_ge_da: weight >= d * a,
        theorem_bound,
        weight_ge_bound: theorem_bound.is_none_or(|b| b.is_met_by(weight)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticLowerCheck {
    pub value: i64,
    /// `ℓ(m²da − (ℓ−1)mna²)`.
    pub lower: i64,
    pub holds: bool,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticUpperCheck {
    pub value: i64,
    /// `λ₂·ℓ·a·m(m−a)`.
    pub upper: BoundValue,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportCertificate {
    pub weight: usize,
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub lambda2: f64,
    #[serde(flatten)]
    pub supports: PaddedSupports,
    pub x_sum: i64,
    pub x_norm_sq: i64,
    pub x_norm_identity: bool,
    pub quadratic_form: i64,
    pub quadratic_form_blocks: i64,
    pub quadratic_forms_agree: bool,
    pub edge_bounds: Vec<PartEdgeBounds>,
    pub quadratic_lower: QuadraticLowerCheck,
    pub quadratic_upper: QuadraticUpperCheck,
    pub final_bound: FinalBoundCheck,
}

impl SupportCertificate {
    /// True when every asserted step holds. Observed steps do not count.
    pub fn verdict(&self) -> bool {
        let edge_ok = self
            .edge_bounds
            .iter()
            .all(|b| b.status == CheckStatus::Observed || b.all_hold());
        let lower_ok = self.quadratic_lower.status == CheckStatus::Observed || self.quadratic_lower.holds;
        edge_ok
            && lower_ok
            && self.x_sum == 0
            && self.x_norm_identity
            && self.quadratic_forms_agree
            && self.edge_bounds.iter().all(|b| b.block_identity)
            && self.quadratic_upper.holds
            && self.final_bound.a_holds
            && self.final_bound.weight_ge_da
            && self.final_bound.weight_ge_bound
    }
}

/// Builds the full certificate for a nonzero codeword of `gc`.
pub fn certify(gc: &GeneralizedGraphCode, c: &EdgeAssignment) -> Result<SupportCertificate> {
    let membership = gc.verify_membership(c)?;
    if !membership.is_member {
        return Err(Error::Usage(format!(
            "assignment is not a codeword (local views fail at {:?})",
            membership.failing_vertices
        )));
    }
    let (_, _, d) = gc.uniform_inner_parameters()?.ok_or_else(|| {
        Error::Usage("the bound needs inner codes with identical parameters".into())
    })?;
    let g = gc.graph();
    let (ell, m, n) = (gc.ell(), gc.m(), gc.n());
    let lambda2 = gc.lambda2()?;
    let supports = extract_supports(gc, c)?;
    let padded = pad_and_build_x(g, &supports)?;
    let a = padded.a;
    let q = quadratic_form(g, &padded.x)?;
    let blocks = quadratic_form_blocks(g, &padded.x)?;
    let q_blocks: i64 = blocks.iter().sum();
    let edge_bounds = check_edge_bounds(g, d, n, &padded)?;
    let (mi, ai, di, ni, li) = (m as i64, a as i64, d as i64, n as i64, ell as i64);
    let q_lower = li * (mi * mi * di * ai - (li - 1) * mi * ni * ai * ai);
    let any_padded = padded.padded.iter().any(|&p| p);
    let norm_target = li * ai * mi * (mi - ai);
    let q_upper = match lambda2 {
        Lambda2::Exact(l2) => BoundValue::Exact(l2 * norm_target),
        Lambda2::Numeric(l2) => BoundValue::Numeric(l2 * norm_target as f64),
    };
    let q_upper_holds = match q_upper {
        BoundValue::Exact(r) => Ratio::from_integer(q) <= r,
        BoundValue::Numeric(u) => q as f64 <= u + NUMERIC_SLACK,
    };
    let x_norm_sq: i64 = padded.x.iter().map(|v| v * v).sum();
    Ok(SupportCertificate {
        weight: c.weight(),
        d,
        m,
        n,
        ell,
        lambda2: lambda2.as_f64(),
        x_sum: padded.x.iter().sum(),
        x_norm_sq,
        x_norm_identity: x_norm_sq == norm_target,
        quadratic_form: q,
        quadratic_form_blocks: q_blocks,
        quadratic_forms_agree: q == q_blocks,
        edge_bounds,
        quadratic_lower: QuadraticLowerCheck {
            value: q,
            lower: q_lower,
            holds: q >= q_lower,
            status: if any_padded { CheckStatus::Observed } else { CheckStatus::Asserted },
        },
        quadratic_upper: QuadraticUpperCheck {
            value: q,
            upper: q_upper,
            holds: q_upper_holds,
        },
        final_bound: final_bound_check(a, c.weight(), d, m, n, ell, lambda2),
        supports: padded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_k333, fixture_k777, k333_triangle, k777_witness};

    #[test]
    fn triangle_certificate() {
        let gc = fixture_k333();
        let c = k333_triangle(&gc);
        let cert = certify(&gc, &c).unwrap();
        let labels: Vec<Vec<usize>> = cert
            .supports
            .true_supports
            .iter()
            .map(|s| s.members.clone())
            .collect();
        assert_eq!(labels, vec![vec![0], vec![3], vec![6]]);
        assert_eq!(cert.supports.a, 1);
        assert_eq!(cert.supports.x, vec![2, -1, -1, 2, -1, -1, 2, -1, -1]);
        let mut brute = 0;
        for u in 0..9 {
            for w in 0..9 {
                if u / 3 != w / 3 {
                    brute += cert.supports.x[u] * cert.supports.x[w];
                }
            }
        }
        assert_eq!(cert.quadratic_form, brute);
        assert_eq!(cert.quadratic_lower.lower, 0);
        assert_eq!(cert.quadratic_upper.upper, BoundValue::Exact(Ratio::from_integer(0)));
        assert_eq!(cert.edge_bounds[0].support_to_supports, 2);
        assert_eq!(cert.edge_bounds[0].support_to_supports_min, 2);
        assert_eq!(cert.final_bound.a_lower, Some(BoundValue::Exact(Ratio::from_integer(1))));
        assert!(cert.verdict());
    }

    #[test]
    fn k777_witness_is_padded_in_part_three() {
        let gc = fixture_k777();
        let c = k777_witness(&gc);
        let s = extract_supports(&gc, &c).unwrap();
        assert_eq!(s.iter().map(VertexSubset::len).collect::<Vec<_>>(), vec![3, 3, 0]);
        let cert = certify(&gc, &c).unwrap();
        assert_eq!(cert.supports.supports[2].members, vec![14, 15, 16]);
        assert_eq!(cert.supports.padded, vec![false, false, true]);
        assert!(cert.edge_bounds.iter().all(|b| b.status == CheckStatus::Observed));
        assert_eq!(cert.final_bound.a_lower, Some(BoundValue::Exact(Ratio::new(3, 2))));
        assert!(cert.verdict());
    }

    #[test]
    fn all_ones_quadratic_form() {
        let g = PartiteGraph::complete_multipartite(3, 3).unwrap();
        assert_eq!(quadratic_form(&g, &[1; 9]).unwrap(), 54);
    }

    #[test]
    fn zero_codeword_is_rejected() {
        let gc = fixture_k333();
        assert!(matches!(
            extract_supports(&gc, &EdgeAssignment::zero(27)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn full_supports_leave_no_complement_edges() {
        let g = PartiteGraph::complete_multipartite(3, 2).unwrap();
        let supports: Vec<_> = (0..3)
            .map(|i| VertexSubset::new(&g, i, g.part(i).collect()).unwrap())
            .collect();
        let p = pad_and_build_x(&g, &supports).unwrap();
        assert_eq!(p.x, vec![0; 6]);
        let b = check_edge_bounds(&g, 2, 2, &p).unwrap();
        assert_eq!(b[0].support_to_complements, 0);
        assert!(b[0].support_to_complements_ok);
    }

    #[test]
    fn rayleigh_zero_vector_and_precondition() {
        let g = PartiteGraph::complete_multipartite(3, 3).unwrap();
        let a = g.adjacency_matrix();
        assert!(rayleigh_check(&a, &[0.0; 9], 1e-9).unwrap());
        assert!(rayleigh_check(&a, &[1.0; 9], 1e-9).is_err());
    }

    #[test]
    fn final_bound_with_large_lambda2_is_trivial() {
        let f = final_bound_check(1, 2, 2, 3, 3, 3, Lambda2::Exact(Ratio::from_integer(3)));
        assert!(f.a_holds && f.weight_ge_bound);
    }
}
