//! Exact minimum distance of a linear code given by a full-rank generator.
//!
//! Two independent engines:
//! - [`min_distance_exhaustive`] walks every nonzero message (Gray-code order
//!   for GF(2), mixed-radix counting otherwise), guarded at q^k ≤ 2^22.
//! - [`min_distance_bz`] is the Brouwer–Zimmermann search for binary codes:
//!   several systematic generators on disjoint-as-possible information sets,
//!   low-weight messages enumerated through each, stopping once the proven
//!   lower bound meets the lightest codeword found.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{popcount, xor_into, GfMatrix};

/// Largest q^k the exhaustive engine accepts, as a power of two.
pub const EXHAUSTIVE_LIMIT_LOG2: u32 = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exhaustive when q^k ≤ 2^22, Brouwer–Zimmermann otherwise.
    #[default]
    Auto,
    Exhaustive,
    Bz,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Engine::Auto),
            "exhaustive" => Ok(Engine::Exhaustive),
            "bz" => Ok(Engine::Bz),
            other => Err(Error::usage(format!(
                "unknown engine '{other}' (expected auto|exhaustive|bz)"
            ))),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Auto => "auto",
            Engine::Exhaustive => "exhaustive",
            Engine::Bz => "bz",
        })
    }
}

/// Proven interval `[lower, upper]` for the minimum distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceBracket {
    pub lower: usize,
    pub upper: usize,
}

impl DistanceBracket {
    pub fn exact(d: usize) -> Self {
        Self { lower: d, upper: d }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn value(&self) -> Option<usize> {
        self.is_exact().then_some(self.lower)
    }
}

#[derive(Default)]
pub struct SearchOptions<'a> {
    pub engine: Engine,
    /// Stop with a bracket instead of an exact value once this passes (BZ only).
    pub deadline: Option<Instant>,
    /// Called with each improved bracket during a BZ run.
    pub progress: Option<&'a (dyn Fn(DistanceBracket) + Sync)>,
}

/// Whether q^k fits under the exhaustive guard.
pub fn exhaustive_feasible(q: u32, k: usize) -> bool {
    if q.is_power_of_two() {
        return (q.trailing_zeros() as usize) * k <= EXHAUSTIVE_LIMIT_LOG2 as usize;
    }
    let mut total: u128 = 1;
    for _ in 0..k {
        total = total.saturating_mul(q as u128);
        if total > 1u128 << EXHAUSTIVE_LIMIT_LOG2 {
            return false;
        }
    }
    true
}

fn check_generator(g: &GfMatrix) -> Result<()> {
    if g.rows() == 0 {
        return Err(Error::usage("minimum distance of a zero-dimensional code is undefined"));
    }
    Ok(())
}

/// Minimum nonzero weight over all `q^k − 1` nonzero messages.
pub fn min_distance_exhaustive(g: &GfMatrix) -> Result<usize> {
    check_generator(g)?;
    let f = g.field();
    let (k, n, q) = (g.rows(), g.cols(), f.order());
    if !exhaustive_feasible(q, k) {
        return Err(Error::Capacity(format!(
            "exhaustive search over q^k = {q}^{k} messages exceeds 2^{EXHAUSTIVE_LIMIT_LOG2}"
        )));
    }
    if let Some(stride) = g.bit_row(0).map(<[u64]>::len) {
        let mut acc = vec![0u64; stride];
        let mut best = usize::MAX;
        for i in 1u64..(1u64 << k) {
            let row = i.trailing_zeros() as usize;
            xor_into(&mut acc, g.bit_row(row).expect("binary"));
            let w = popcount(&acc);
            if w > 0 && w < best {
                best = w;
            }
        }
        return Ok(best);
    }

    let rows = g.to_rows();
    let mut digits = vec![0u32; k];
    let mut word = vec![0u32; n];
    let mut best = usize::MAX;
    loop {
        // advance the mixed-radix counter, patching the codeword per changed digit
        let mut i = 0;
        loop {
            if i == k {
                return Ok(best);
            }
            let old = digits[i];
            let new = if old + 1 == q { 0 } else { old + 1 };
            digits[i] = new;
            let delta = f.sub(new, old);
            for (w, &r) in word.iter_mut().zip(&rows[i]) {
                *w = f.add(*w, f.mul(delta, r));
            }
            if new != 0 {
                break;
            }
            i += 1;
        }
        let wt = word.iter().filter(|&&x| x != 0).count();
        if wt > 0 && wt < best {
            best = wt;
        }
    }
}

/// One systematic generator of a Brouwer–Zimmermann run.
struct InfoSet {
    /// k bit-packed rows, identity on this set's pivot columns.
    rows: Vec<Vec<u64>>,
    /// Pivot columns not covered by earlier sets.
    rank: usize,
}

fn information_sets(g: &GfMatrix) -> Vec<InfoSet> {
    let (k, n) = (g.rows(), g.cols());
    let mut used = vec![false; n];
    let mut sets = Vec::new();
    loop {
        let order: Vec<usize> = (0..n)
            .filter(|&c| !used[c])
            .chain((0..n).filter(|&c| used[c]))
            .collect();
        let (r, pivots) = g.rref_with_column_order(&order);
        debug_assert_eq!(pivots.len(), k, "generator must have full row rank");
        let fresh: Vec<usize> = pivots.iter().copied().filter(|&c| !used[c]).collect();
        if fresh.is_empty() {
            break;
        }
        for &c in &fresh {
            used[c] = true;
        }
        sets.push(InfoSet {
            rows: (0..k).map(|i| r.bit_row(i).expect("binary").to_vec()).collect(),
            rank: fresh.len(),
        });
        if used.iter().all(|&u| u) {
            break;
        }
    }
    sets
}

/// Lower bound on the weight of any codeword missed after enumerating all
/// messages of weight ≤ `w` in every contributing set.
fn lower_bound_after(sets: &[InfoSet], k: usize, w: usize) -> usize {
    sets.iter()
        .map(|s| (w + 1).saturating_sub(k - s.rank))
        .sum()
}

/// Visits every `w`-subset of `0..k` in colexicographic order, XOR-ing the
/// chosen rows into an accumulator. Returns false if `stop` fired.
fn enumerate_weight(
    rows: &[Vec<u64>],
    w: usize,
    best: &AtomicUsize,
    stop: &AtomicBool,
    deadline: Option<Instant>,
) -> bool {
    fn rec(
        rows: &[Vec<u64>],
        top: usize,
        left: usize,
        acc: &[u64],
        scratch: &mut [Vec<u64>],
        best: &AtomicUsize,
        ticks: &mut u64,
        stop: &AtomicBool,
        deadline: Option<Instant>,
    ) -> bool {
        if left == 0 {
            let wt = popcount(acc);
            if wt > 0 {
                best.fetch_min(wt, Ordering::Relaxed);
            }
            *ticks += 1;
            if *ticks & 0xfff == 0 {
                if stop.load(Ordering::Relaxed) {
                    return false;
                }
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    stop.store(true, Ordering::Relaxed);
                    return false;
                }
            }
            return true;
        }
        // the largest chosen index varies slowest: colex order
        for t in (left - 1)..top {
            let (next, rest) = scratch.split_first_mut().expect("depth bound");
            next.copy_from_slice(acc);
            xor_into(next, &rows[t]);
            if !rec(rows, t, left - 1, next, rest, best, ticks, stop, deadline) {
                return false;
            }
        }
        true
    }
    let stride = rows[0].len();
    let acc = vec![0u64; stride];
    let mut scratch = vec![vec![0u64; stride]; w];
    let mut ticks = 0u64;
    rec(rows, rows.len(), w, &acc, &mut scratch, best, &mut ticks, stop, deadline)
}

/// Brouwer–Zimmermann exact minimum distance for binary codes.
///
/// Returns an exact bracket unless `opts.deadline` expires first.
pub fn min_distance_bz(g: &GfMatrix, opts: &SearchOptions<'_>) -> Result<DistanceBracket> {
    check_generator(g)?;
    if !g.field().is_binary() {
        return Err(Error::Capacity(
            "Brouwer-Zimmermann engine supports GF(2) only".into(),
        ));
    }
    let k = g.rows();
    let sets = information_sets(g);
    let best = AtomicUsize::new(g.cols() + 1);
    let stop = AtomicBool::new(false);
    let mut lower = 1;
    let report = |lo: usize, hi: usize| {
        if let Some(cb) = opts.progress {
            cb(DistanceBracket { lower: lo, upper: hi });
        }
    };

    for w in 1..=k {
        let active: Vec<&InfoSet> = sets.iter().filter(|s| w + 1 > k - s.rank).collect();
        let finished = active
            .par_iter()
            .map(|s| enumerate_weight(&s.rows, w, &best, &stop, opts.deadline))
            .collect::<Vec<bool>>()
            .into_iter()
            .all(|ok| ok);
        let upper = best.load(Ordering::Relaxed);
        if !finished {
            return Ok(DistanceBracket {
                lower: lower.min(upper),
                upper,
            });
        }
        lower = lower.max(lower_bound_after(&sets, k, w));
        if lower >= upper || w == k {
            return Ok(DistanceBracket::exact(upper));
        }
        report(lower, upper);
    }
    unreachable!("round k enumerates every message of the first information set")
}

/// Dispatches to an engine. `Auto` picks exhaustive under the guard, BZ above.
pub fn minimum_distance(g: &GfMatrix, opts: &SearchOptions<'_>) -> Result<(DistanceBracket, Engine)> {
    check_generator(g)?;
    let q = g.field().order();
    let engine = match opts.engine {
        Engine::Auto if exhaustive_feasible(q, g.rows()) => Engine::Exhaustive,
        Engine::Auto if g.field().is_binary() => Engine::Bz,
        Engine::Auto => {
            return Err(Error::Capacity(format!(
                "no engine accepts a non-binary code with q^k = {q}^{} > 2^{EXHAUSTIVE_LIMIT_LOG2}",
                g.rows()
            )))
        }
        e => e,
    };
    let bracket = match engine {
        Engine::Exhaustive => DistanceBracket::exact(min_distance_exhaustive(g)?),
        _ => min_distance_bz(g, opts)?,
    };
    Ok((bracket, engine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_full_rank(rng: &mut ChaCha8Rng, k: usize, n: usize) -> GfMatrix {
        loop {
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|_| (0..n).map(|_| rng.random_range(0..2)).collect())
                .collect();
            let g = GfMatrix::from_rows(&FieldSpec::gf2(), &rows).unwrap();
            if g.rank() == k {
                return g;
            }
        }
    }

    #[test]
    fn bz_matches_exhaustive_random_20_10() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_full_rank(&mut rng, 10, 20);
            let ex = min_distance_exhaustive(&g).unwrap();
            let bz = min_distance_bz(&g, &SearchOptions::default()).unwrap();
            assert_eq!(bz, DistanceBracket::exact(ex));
        }
    }

    #[test]
    fn repetition_and_single_row() {
        let f = FieldSpec::gf2();
        let g = GfMatrix::from_rows(&f, &[vec![1; 5]]).unwrap();
        assert_eq!(min_distance_exhaustive(&g).unwrap(), 5);
        assert_eq!(min_distance_bz(&g, &SearchOptions::default()).unwrap().value(), Some(5));
    }

    #[test]
    fn nonbinary_exhaustive() {
        // [4,2] code over GF(5) with generator rows 1 0 1 1 / 0 1 1 2: an MDS code, d = 3
        let f = FieldSpec::new(5).unwrap();
        let g = GfMatrix::from_rows(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        assert_eq!(min_distance_exhaustive(&g).unwrap(), 3);
        assert!(matches!(
            min_distance_bz(&g, &SearchOptions::default()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn guard_rejects_large_instances() {
        assert!(exhaustive_feasible(2, 22));
        assert!(!exhaustive_feasible(2, 23));
        assert!(exhaustive_feasible(3, 13));
        assert!(!exhaustive_feasible(3, 14));
        let g = GfMatrix::identity(&FieldSpec::gf2(), 23);
        assert!(matches!(min_distance_exhaustive(&g), Err(Error::Capacity(_))));
        let (b, e) = minimum_distance(&g, &SearchOptions::default()).unwrap();
        assert_eq!((b.value(), e), (Some(1), Engine::Bz));
    }

    #[test]
    fn expired_deadline_yields_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_full_rank(&mut rng, 40, 80);
        let opts = SearchOptions {
            deadline: Some(Instant::now()),
            ..Default::default()
        };
        let b = min_distance_bz(&g, &opts).unwrap();
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn colex_enumeration_visits_every_subset() {
        // rows are unit vectors, so each subset XOR is a distinct pattern of weight w
        let k = 7;
        let rows: Vec<Vec<u64>> = (0..k).map(|i| vec![1u64 << i]).collect();
        for w in 1..=k {
            let best = AtomicUsize::new(usize::MAX);
            let stop = AtomicBool::new(false);
            assert!(enumerate_weight(&rows, w, &best, &stop, None));
            assert_eq!(best.load(Ordering::Relaxed), w);
        }
    }
}
