//! Generalized graph codes: one symbol per edge of a balanced ℓ-partite graph,
//! constrained so that the symbols around every vertex of part `i` form a
//! codeword of the inner code `C_i`.
//!
//! Local views read a vertex's incident edges in ascending coordinate order.
//! For the canonical edge order coordinate 1 is the edge whose larger endpoint
//! has the smallest label (ties broken on the smaller endpoint).

use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::codes::{Codeword, LinearCode};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graphs::{EdgeOrder, Lambda2, PartiteGraph};
use crate::matrix::GfMatrix;
use crate::mindist::{DistanceBracket, Engine, SearchOptions};

/// Absolute slack for comparisons that involve a numerically computed λ₂.
pub const NUMERIC_SLACK: f64 = 1e-6;

/// Field symbols indexed by edge position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeAssignment(pub Vec<u32>);

impl EdgeAssignment {
    pub fn zero(len: usize) -> Self {
        EdgeAssignment(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }

    /// Indicator of a set of edge positions (symbol 1 on each).
    pub fn indicator(len: usize, positions: &[usize]) -> Self {
        let mut v = vec![0; len];
        for &p in positions {
            v[p] = 1;
        }
        EdgeAssignment(v)
    }

    /// Whitespace-separated symbols in edge order.
    pub fn parse_text(text: &str, field: &FieldSpec, len: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(len);
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                let v: u32 = tok
                    .parse()
                    .map_err(|_| Error::parse(ln + 1, format!("bad symbol '{tok}'")))?;
                if v >= field.order() {
                    return Err(Error::parse(
                        ln + 1,
                        format!("symbol {v} is not below q={}", field.order()),
                    ));
                }
                out.push(v);
            }
        }
        if out.len() != len {
            return Err(Error::usage(format!(
                "assignment has {} symbols, the code has length {len}",
                out.len()
            )));
        }
        Ok(EdgeAssignment(out))
    }

    pub fn to_text(&self) -> String {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        s.join(" ") + "\n"
    }
}

/// Value of the spectral distance bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue {
    Exact(Ratio<i64>),
    Numeric(f64),
}

impl BoundValue {
    pub fn as_f64(&self) -> f64 {
        match *self {
            BoundValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            BoundValue::Numeric(x) => x,
        }
    }

    /// Whether the integer `value` is at least this bound.
    pub fn is_met_by(&self, value: usize) -> bool {
        match *self {
            BoundValue::Exact(r) => Ratio::from_integer(value as i64) >= r,
            BoundValue::Numeric(x) => value as f64 + NUMERIC_SLACK >= x,
        }
    }

    /// Divides by a positive integer.
    pub fn div_int(&self, k: i64) -> BoundValue {
        match *self {
            BoundValue::Exact(r) => BoundValue::Exact(r / k),
            BoundValue::Numeric(x) => BoundValue::Numeric(x / k as f64),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => write!(f, "{r}"),
            BoundValue::Numeric(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundOutcome {
    Applicable(BoundValue),
    /// The bound's hypotheses fail; carries the reason.
    NotApplicable(String),
}

impl BoundOutcome {
    pub fn value(&self) -> Option<BoundValue> {
        match self {
            BoundOutcome::Applicable(v) => Some(*v),
            BoundOutcome::NotApplicable(_) => None,
        }
    }
}

/// `d·m·(d − λ₂) / (valency − λ₂)`, or `None` when the denominator is not
/// positive (λ₂ equal to the valency means a disconnected graph).
pub fn spectral_bound(d: usize, m: usize, valency: usize, lambda2: Lambda2) -> Option<BoundValue> {
    match lambda2 {
        Lambda2::Exact(l2) => {
            let den = Ratio::from_integer(valency as i64) - l2;
            if den <= Ratio::from_integer(0) {
                return None;
            }
            let d = Ratio::from_integer(d as i64);
            Some(BoundValue::Exact(d * (m as i64) * (d - l2) / den))
        }
        Lambda2::Numeric(l2) => {
            let den = valency as f64 - l2;
            if den <= NUMERIC_SLACK {
                return None;
            }
            Some(BoundValue::Numeric(d as f64 * m as f64 * (d as f64 - l2) / den))
        }
    }
}

/// Bipartite form of the bound for an `n`-regular bipartite graph with parts of
/// size `m`: `D ≥ d·m·(d − λ₂)/(n − λ₂)`.
pub fn bipartite_bound(d: usize, m: usize, n: usize, lambda2: Lambda2) -> Option<BoundValue> {
    match lambda2 {
        Lambda2::Exact(l2) => {
            let dd = Ratio::from_integer(d as i64);
            let nn = Ratio::from_integer(n as i64);
            (nn > l2).then(|| BoundValue::Exact(dd * Ratio::from_integer(m as i64) * (dd - l2) / (nn - l2)))
        }
        Lambda2::Numeric(l2) => {
            let (dd, nn) = (d as f64, n as f64);
            (nn - l2 > NUMERIC_SLACK).then(|| BoundValue::Numeric(dd * m as f64 * (dd - l2) / (nn - l2)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub is_member: bool,
    /// 1-based labels of vertices whose local view is not an inner codeword.
    pub failing_vertices: Vec<usize>,
}

/// A claimed parameter next to the computed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub name: String,
    pub claimed: String,
    pub computed: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl ClaimCheck {
    pub fn new(name: &str, claimed: impl fmt::Display, computed: impl fmt::Display) -> Self {
        let (claimed, computed) = (claimed.to_string(), computed.to_string());
        Self {
            name: name.to_string(),
            matches: claimed == computed,
            claimed,
            computed,
        }
    }
}

#[derive(Clone)]
pub struct GeneralizedGraphCode {
    graph: PartiteGraph,
    inner: Vec<LinearCode>,
    m: usize,
    n: usize,
    global_parity: GfMatrix,
    dimension: OnceLock<usize>,
    code: OnceLock<Option<LinearCode>>,
    distance: OnceLock<(DistanceBracket, Engine)>,
}

impl fmt::Debug for GeneralizedGraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GeneralizedGraphCode(ell={}, m={}, n={}, N={}, inner={:?})",
            self.graph.ell(),
            self.m,
            self.n,
            self.len(),
            self.inner
        )
    }
}

impl GeneralizedGraphCode {
    /// Assembles the code. `inner` holds one code per part, or a single code
    /// used for every part.
    pub fn build(graph: PartiteGraph, inner: Vec<LinearCode>) -> Result<Self> {
        let report = graph.validate_balanced();
        if !report.is_valid() {
            let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::usage(format!("graph is not balanced: {}", msgs.join("; "))));
        }
        let ell = graph.ell();
        let inner = match inner.len() {
            1 => vec![inner[0].clone(); ell],
            k if k == ell => inner,
            k => {
                return Err(Error::usage(format!(
                    "{k} inner codes given for a {ell}-partite graph"
                )))
            }
        };
        let m = graph.m().expect("balanced");
        let n = graph.n().expect("balanced");
        let local_len = (ell - 1) * n;
        let field = inner[0].field().clone();
        for (i, c) in inner.iter().enumerate() {
            if c.len() != local_len {
                return Err(Error::usage(format!(
                    "inner code {} has length {}, local views have length (ell-1)n = {local_len}",
                    i + 1,
                    c.len()
                )));
            }
            if *c.field() != field {
                return Err(Error::usage("inner codes are over different fields"));
            }
        }

        let rows: usize = (0..graph.vertex_count())
            .map(|v| inner[graph.part_of(v)].parity_check().rows())
            .sum();
        let mut parity = GfMatrix::zeros(&field, rows, graph.edge_count());
        let mut at = 0;
        for v in 0..graph.vertex_count() {
            let h = inner[graph.part_of(v)].parity_check();
            let positions: Vec<usize> = graph.incidence(v).iter().map(|&(p, _)| p).collect();
            for r in 0..h.rows() {
                for (t, &pos) in positions.iter().enumerate() {
                    let x = h.get(r, t);
                    if x != 0 {
                        parity.set(at, pos, x);
                    }
                }
                at += 1;
            }
        }

        Ok(Self {
            graph,
            inner,
            m,
            n,
            global_parity: parity,
            dimension: OnceLock::new(),
            code: OnceLock::new(),
            distance: OnceLock::new(),
        })
    }

    pub fn graph(&self) -> &PartiteGraph {
        &self.graph
    }

    pub fn inner(&self) -> &[LinearCode] {
        &self.inner
    }

    pub fn field(&self) -> &FieldSpec {
        self.inner[0].field()
    }

    pub fn ell(&self) -> usize {
        self.graph.ell()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Code length `N = ℓ(ℓ−1)mn/2`.
    pub fn len(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn global_parity(&self) -> &GfMatrix {
        &self.global_parity
    }

    /// Symbols on the edges at `v`, in ascending coordinate order.
    pub fn local_view(&self, c: &EdgeAssignment, v: usize) -> Result<Codeword> {
        self.check_len(c)?;
        if v >= self.graph.vertex_count() {
            return Err(Error::usage(format!("vertex index {v} out of range")));
        }
        Ok(Codeword(
            self.graph.incidence(v).iter().map(|&(p, _)| c.0[p]).collect(),
        ))
    }

    fn check_len(&self, c: &EdgeAssignment) -> Result<()> {
        if c.len() != self.len() {
            return Err(Error::usage(format!(
                "assignment of length {} for a code of length {}",
                c.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Checks every vertex's local view against its part's inner code.
    pub fn verify_membership(&self, c: &EdgeAssignment) -> Result<MembershipReport> {
        self.check_len(c)?;
        let mut failing = Vec::new();
        for v in 0..self.graph.vertex_count() {
            let view = self.local_view(c, v)?;
            if !self.inner[self.graph.part_of(v)].is_codeword(&view.0)? {
                failing.push(v + 1);
            }
        }
        Ok(MembershipReport {
            is_member: failing.is_empty(),
            failing_vertices: failing,
        })
    }

    /// `K = N − rank(global parity)`.
    pub fn dimension(&self) -> usize {
        *self
            .dimension
            .get_or_init(|| self.len() - self.global_parity.rank())
    }

    /// Dimension recomputed by eliminating over a pseudo-randomly shuffled
    /// column order (fixed seed), independent of the pivot path of
    /// [`GeneralizedGraphCode::dimension`].
    pub fn dimension_shuffled(&self, seed: u64) -> usize {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let mut s = seed;
        let mut next = || {
            // splitmix64
            s = s.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        };
        for i in (1..order.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            order.swap(i, j);
        }
        let (_, pivots) = self.global_parity.rref_with_column_order(&order);
        self.len() - pivots.len()
    }

    /// The graph code as a linear code, or `None` when `K = 0`.
    pub fn as_linear_code(&self) -> Result<Option<&LinearCode>> {
        if let Some(c) = self.code.get() {
            return Ok(c.as_ref());
        }
        let generator = self.global_parity.kernel_matrix();
        let code = if generator.rows() == 0 {
            None
        } else {
            Some(LinearCode::from_generator(generator)?.with_name("graph code"))
        };
        Ok(self.code.get_or_init(|| code).as_ref())
    }

    /// Codeword of the graph code for a message over its kernel basis.
    pub fn encode(&self, message: &[u32]) -> Result<EdgeAssignment> {
        let code = self
            .as_linear_code()?
            .ok_or_else(|| Error::domain("the graph code is {0}"))?;
        Ok(EdgeAssignment(code.encode(message)?.0))
    }

    /// Minimum distance. `Auto` runs exhaustive search when `q^K ≤ 2^22` and
    /// Brouwer–Zimmermann otherwise. Returns `None` for the zero code.
    pub fn minimum_distance(&self, opts: &SearchOptions<'_>) -> Result<Option<(DistanceBracket, Engine)>> {
        if let Some(&(b, e)) = self.distance.get() {
            if opts.engine == Engine::Auto || opts.engine == e {
                return Ok(Some((b, e)));
            }
        }
        let Some(code) = self.as_linear_code()? else {
            return Ok(None);
        };
        let (b, e) = code.search_min_distance(opts)?;
        if b.is_exact() {
            let _ = self.distance.set((b, e));
        }
        Ok(Some((b, e)))
    }

    /// Exact minimum distance with the automatic engine.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self
            .minimum_distance(&SearchOptions::default())?
            .map(|(b, _)| b.value().expect("no deadline")))
    }

    /// Shared inner parameters `(n, k, d)` when all inner codes agree.
    pub fn uniform_inner_parameters(&self) -> Result<Option<(usize, usize, usize)>> {
        let first = &self.inner[0];
        let params = (first.len(), first.dimension(), first.min_distance()?);
        for c in &self.inner[1..] {
            if (c.len(), c.dimension(), c.min_distance()?) != params {
                return Ok(None);
            }
        }
        Ok(Some(params))
    }

    pub fn lambda2(&self) -> Result<Lambda2> {
        self.graph.lambda2()
    }

    /// `D ≥ d·m·(d − λ₂)/((ℓ−1)n − λ₂)` for identical inner parameters.
    pub fn theorem_bound(&self) -> Result<BoundOutcome> {
        let Some((_, _, d)) = self.uniform_inner_parameters()? else {
            return Ok(BoundOutcome::NotApplicable(
                "inner codes do not share identical [n, k, d] parameters".into(),
            ));
        };
        let l2 = self.lambda2()?;
        let valency = (self.ell() - 1) * self.n;
        let Some(bound) = spectral_bound(d, self.m, valency, l2) else {
            return Ok(BoundOutcome::NotApplicable(format!(
                "lambda2 = {l2} reaches the valency {valency}; the graph is disconnected"
            )));
        };
        if self.ell() == 2 {
            let b2 = bipartite_bound(d, self.m, self.n, l2).expect("same denominator");
            debug_assert!((b2.as_f64() - bound.as_f64()).abs() <= 1e-9 * (1.0 + bound.as_f64().abs()));
        }
        Ok(BoundOutcome::Applicable(bound))
    }

    /// Human-readable statement of the coordinate and local-view conventions.
    pub fn order_convention(&self) -> String {
        let base = match self.graph.edge_order() {
            EdgeOrder::Canonical => "canonical: coordinate 1 is the edge whose larger endpoint has the smallest label, ties broken on the smaller endpoint",
            EdgeOrder::File => "file: coordinates follow the edge order of the input file",
        };
        format!("{base}; local views read incident edges in ascending coordinate order")
    }

    /// Computes the JSON/text report: parameters, λ₂, bound and verdict.
    pub fn report(&self, opts: &SearchOptions<'_>) -> Result<GraphCodeReport> {
        let l2 = self.lambda2()?;
        let dist = self.minimum_distance(opts)?;
        let bound = self.theorem_bound()?;
        let (d, bracket, engine) = match dist {
            Some((b, e)) if b.is_exact() => (b.value(), None, Some(e)),
            Some((b, e)) => (None, Some([b.lower, b.upper]), Some(e)),
            None => (None, None, None),
        };
        let bound_satisfied = match (&bound, d, bracket) {
            (BoundOutcome::Applicable(v), Some(d), _) => Some(v.is_met_by(d)),
            (BoundOutcome::Applicable(v), None, Some([lo, _])) if v.is_met_by(lo) => Some(true),
            _ => None,
        };
        let mut inner = Vec::new();
        for c in &self.inner {
            inner.push(format!(
                "{} [{},{},{}]",
                c.name(),
                c.len(),
                c.dimension(),
                c.min_distance()?
            ));
        }
        Ok(GraphCodeReport {
            q: self.field().order(),
            ell: self.ell(),
            m: self.m,
            n: self.n,
            big_n: self.len(),
            k: self.dimension(),
            d,
            d_bracket: bracket,
            lambda2: l2.as_f64(),
            lambda2_exact: l2.is_exact(),
            bound: bound.value(),
            bound_float: bound.value().map(|b| b.as_f64()),
            bound_applicable: bound.value().is_some(),
            bound_note: match &bound {
                BoundOutcome::NotApplicable(why) => Some(why.clone()),
                BoundOutcome::Applicable(_) => None,
            },
            bound_satisfied,
            order_convention: self.order_convention(),
            edge_order: self.graph.edge_order(),
            engine,
            inner,
            claim_checks: Vec::new(),
        })
    }
}

/// Parameter report. Field names follow the published JSON schema.
#[derive(Clone, Debug, Serialize)]
pub struct GraphCodeReport {
    pub q: u32,
    pub ell: usize,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "D")]
    pub d: Option<usize>,
    #[serde(rename = "D_bracket", skip_serializing_if = "Option::is_none")]
    pub d_bracket: Option<[usize; 2]>,
    pub lambda2: f64,
    pub lambda2_exact: bool,
    pub bound: Option<BoundValue>,
    pub bound_float: Option<f64>,
    pub bound_applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_note: Option<String>,
    pub bound_satisfied: Option<bool>,
    pub order_convention: String,
    pub edge_order: EdgeOrder,
    pub engine: Option<Engine>,
    pub inner: Vec<String>,
    #[serde(rename = "paper_claim_checks")]
    pub claim_checks: Vec<ClaimCheck>,
}

impl GraphCodeReport {
    pub fn claims_hold(&self) -> bool {
        self.claim_checks.iter().all(|c| c.matches)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let d = match (self.d, self.d_bracket) {
            (Some(d), _) => d.to_string(),
            (None, Some([lo, hi])) => format!(">= {lo} / <= {hi}"),
            _ => "undefined (zero code)".into(),
        };
        s.push_str(&format!(
            "code: [{}, {}, {}] over GF({})\n",
            self.big_n, self.k, d, self.q
        ));
        s.push_str(&format!("graph: ell={} m={} n={}\n", self.ell, self.m, self.n));
        for (i, c) in self.inner.iter().enumerate() {
            s.push_str(&format!("inner C{}: {c}\n", i + 1));
        }
        s.push_str(&format!(
            "lambda2: {}{}\n",
            self.lambda2,
            if self.lambda2_exact { " (exact)" } else { "" }
        ));
        match &self.bound {
            Some(b) => s.push_str(&format!(
                "bound: D >= {b} ({:.6}); satisfied: {}\n",
                b.as_f64(),
                self.bound_satisfied
                    .map_or("unknown".to_string(), |x| x.to_string())
            )),
            None => s.push_str(&format!(
                "bound: not applicable ({})\n",
                self.bound_note.as_deref().unwrap_or("")
            )),
        }
        if let Some(e) = self.engine {
            s.push_str(&format!("engine: {e}\n"));
        }
        s.push_str(&format!("order: {}\n", self.order_convention));
        for c in &self.claim_checks {
            s.push_str(&format!(
                "claim {}: claimed {} computed {} -> {}\n",
                c.name,
                c.claimed,
                c.computed,
                if c.matches { "match" } else { "MISMATCH" }
            ));
        }
        s
    }
}
