//! The two worked instances: `K₇,₇,₇` with `[H | H]` inner codes and `K₃,₃,₃`
//! with the even-weight code of length 6, plus their witness codewords.

use num_rational::Ratio;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::graphcode::{ClaimCheck, EdgeAssignment, GeneralizedGraphCode, GraphCodeReport};
use crate::graphs::PartiteGraph;
use crate::mindist::SearchOptions;

/// Symbol matrix indexed by `v₁ … v₉` for the `K₃,₃,₃` instance.
pub const K333_MATRIX_M: [[u32; 9]; 9] = [
    [0, 0, 0, 1, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 1, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, 1, 1, 1],
    [1, 0, 0, 0, 0, 0, 1, 1, 1],
    [0, 1, 1, 0, 0, 0, 0, 1, 1],
    [0, 1, 0, 0, 0, 0, 1, 1, 1],
    [0, 1, 1, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 0, 0, 0],
];

/// `[H | H]` with `H` the binary [7,4,3] Hamming code.
pub fn hamming_pair() -> LinearCode {
    let h = LinearCode::hamming_binary(3).expect("r = 3");
    LinearCode::direct_sum(&h, &h)
        .expect("same field")
        .with_name("dsum(hamming:3,hamming:3)")
}

pub fn fixture_k777() -> GeneralizedGraphCode {
    let g = PartiteGraph::complete_multipartite(3, 7).expect("valid");
    GeneralizedGraphCode::build(g, vec![hamming_pair()]).expect("balanced")
}

pub fn fixture_k333() -> GeneralizedGraphCode {
    let g = PartiteGraph::complete_multipartite(3, 3).expect("valid");
    let c = LinearCode::even_weight(6).expect("n = 6").with_name("even:6");
    GeneralizedGraphCode::build(g, vec![c]).expect("balanced")
}

/// Reads edge symbols off a symmetric vertex-indexed matrix.
pub fn assignment_from_vertex_matrix(graph: &PartiteGraph, mat: &[Vec<u32>]) -> Result<EdgeAssignment> {
    let nv = graph.vertex_count();
    if mat.len() != nv || mat.iter().any(|r| r.len() != nv) {
        return Err(Error::Usage(format!("matrix must be {nv} x {nv}")));
    }
    for u in 0..nv {
        for w in 0..nv {
            if mat[u][w] != mat[w][u] {
                return Err(Error::Usage(format!("matrix is not symmetric at ({}, {})", u + 1, w + 1)));
            }
        }
    }
    Ok(EdgeAssignment(
        graph.edges().iter().map(|&(u, w)| mat[u][w]).collect(),
    ))
}

fn edge_positions(graph: &PartiteGraph, labels: &[(usize, usize)]) -> Vec<usize> {
    labels
        .iter()
        .map(|&(a, b)| {
            let e = (a.min(b) - 1, a.max(b) - 1);
            graph
                .edges()
                .iter()
                .position(|&x| x == e)
                .expect("edge of the fixture graph")
        })
        .collect()
}

pub fn k333_matrix_m(gc: &GeneralizedGraphCode) -> EdgeAssignment {
    let rows: Vec<Vec<u32>> = K333_MATRIX_M.iter().map(|r| r.to_vec()).collect();
    assignment_from_vertex_matrix(gc.graph(), &rows).expect("9 x 9 symmetric")
}

/// Ones on `{v₁,v₄}`, `{v₄,v₇}`, `{v₁,v₇}`.
pub fn k333_triangle(gc: &GeneralizedGraphCode) -> EdgeAssignment {
    let pos = edge_positions(gc.graph(), &[(1, 4), (4, 7), (1, 7)]);
    EdgeAssignment::indicator(gc.len(), &pos)
}

/// `M₁₂ = u vᵀ` for the weight-3 Hamming word `u = v = 1110000`, with parts
/// 1–3 and 2–3 silent: ones on `{vᵢ, v₇₊ⱼ}` for `i, j ∈ {1, 2, 3}`.
pub fn k777_witness(gc: &GeneralizedGraphCode) -> EdgeAssignment {
    let mut labels = Vec::new();
    for i in 1..=3 {
        for j in 8..=10 {
            labels.push((i, j));
        }
    }
    let pos = edge_positions(gc.graph(), &labels);
    EdgeAssignment::indicator(gc.len(), &pos)
}

/// A named instance together with its claimed parameters and witnesses.
pub struct Example {
    pub name: &'static str,
    pub code: GeneralizedGraphCode,
    pub claimed_n: usize,
    pub claimed_k: Option<usize>,
    pub claimed_d: usize,
    pub claimed_bound: Ratio<i64>,
    pub claimed_lambda2: i64,
    pub witnesses: Vec<(&'static str, EdgeAssignment, usize)>,
}

pub const EXAMPLE_NAMES: [&str; 2] = ["k777", "k333"];

pub fn example(name: &str) -> Result<Example> {
    match name {
        "k777" => {
            let code = fixture_k777();
            let w = k777_witness(&code);
            Ok(Example {
                name: "k777",
                claimed_n: 147,
                claimed_k: Some(48),
                claimed_d: 9,
                claimed_bound: Ratio::new(9, 2),
                claimed_lambda2: 0,
                witnesses: vec![("weight-9 witness", w, 9)],
                code,
            })
        }
        "k333" => {
            let code = fixture_k333();
            let m = k333_matrix_m(&code);
            let t = k333_triangle(&code);
            Ok(Example {
                name: "k333",
                claimed_n: 27,
                claimed_k: None,
                claimed_d: 3,
                claimed_bound: Ratio::from_integer(2),
                claimed_lambda2: 0,
                witnesses: vec![("matrix M assignment", m, 18), ("triangle witness", t, 3)],
                code,
            })
        }
        other => Err(Error::Usage(format!(
            "unknown example '{other}' (expected one of {})",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

impl Example {
    /// Parameter report with every claimed value checked against the computed one.
    pub fn report(&self, opts: &SearchOptions<'_>) -> Result<GraphCodeReport> {
        let gc = &self.code;
        let mut r = gc.report(opts)?;
        let mut checks = vec![ClaimCheck::new("N", self.claimed_n, r.big_n)];
        if let Some(k) = self.claimed_k {
            checks.push(ClaimCheck::new("K", k, r.k));
            checks.push(ClaimCheck::new(
                "K (shuffled elimination)",
                k,
                gc.dimension_shuffled(0x5eed),
            ));
        }
        let d = match (r.d, r.d_bracket) {
            (Some(d), _) => d.to_string(),
            (None, Some([lo, hi])) => format!("[{lo}, {hi}]"),
            _ => "undefined".into(),
        };
        checks.push(ClaimCheck::new("D", self.claimed_d, d));
        checks.push(ClaimCheck::new(
            "lambda2",
            self.claimed_lambda2,
            gc.lambda2()?,
        ));
        checks.push(ClaimCheck::new(
            "bound",
            self.claimed_bound,
            r.bound.map_or("not applicable".to_string(), |b| b.to_string()),
        ));
        checks.push(ClaimCheck::new(
            "D >= bound",
            true,
            r.bound_satisfied.map_or("unknown".to_string(), |b| b.to_string()),
        ));
        for (label, w, weight) in &self.witnesses {
            let member = gc.verify_membership(w)?.is_member;
            checks.push(ClaimCheck::new(&format!("{label} is a codeword"), true, member));
            checks.push(ClaimCheck::new(&format!("{label} weight"), weight, w.weight()));
        }
        r.claim_checks = checks;
        Ok(r)
    }

    pub fn witness(&self, label: &str) -> Option<&EdgeAssignment> {
        self.witnesses
            .iter()
            .find(|(l, _, _)| l.starts_with(label))
            .map(|(_, w, _)| w)
    }
}
