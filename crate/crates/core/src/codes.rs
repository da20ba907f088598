//! Inner linear codes `[n, k, d]` over GF(q).

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::GfMatrix;
use crate::mindist::{self, DistanceBracket, Engine, SearchOptions};

/// A vector of field symbols, usually a word of some code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword(pub Vec<u32>);

impl Codeword {
    pub fn zero(n: usize) -> Self {
        Codeword(vec![0; n])
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

    /// Coordinates holding a nonzero symbol.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    /// Hamming distance; `None` if lengths differ.
    pub fn distance(&self, other: &Codeword) -> Option<usize> {
        (self.len() == other.len())
            .then(|| self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Codeword {
    fn from(v: Vec<u32>) -> Self {
        Codeword(v)
    }
}

/// Which matrix a code file carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeMatrixKind {
    Generator,
    Parity,
}

/// A linear code stored by a full-rank generator and a matching parity check.
#[derive(Clone)]
pub struct LinearCode {
    name: String,
    generator: GfMatrix,
    parity_check: GfMatrix,
    min_distance: OnceLock<usize>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearCode({}: [{}, {}] over {:?})",
            self.name,
            self.len(),
            self.dimension(),
            self.field()
        )
    }
}

impl LinearCode {
    /// Code spanned by the rows of `generator`, which must be independent.
    pub fn from_generator(generator: GfMatrix) -> Result<Self> {
        if generator.rows() == 0 {
            return Err(Error::usage("a code needs dimension k >= 1"));
        }
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(Error::usage(format!(
                "generator has {} rows but rank {rank}",
                generator.rows()
            )));
        }
        let parity_check = generator.kernel_matrix();
        Ok(Self {
            name: format!("[{},{}]", generator.cols(), generator.rows()),
            generator,
            parity_check,
            min_distance: OnceLock::new(),
        })
    }

    /// Code `{ v : H·v = 0 }`. Dependent check rows are dropped.
    pub fn from_parity_check(parity: GfMatrix) -> Result<Self> {
        let generator = parity.kernel_matrix();
        if generator.rows() == 0 {
            return Err(Error::usage(
                "parity check has full column rank; the code is {0}, k = 0",
            ));
        }
        let (reduced, pivots) = parity.rref();
        let independent: Vec<Vec<u32>> = (0..pivots.len()).map(|i| reduced.row(i)).collect();
        let parity_check =
            GfMatrix::from_rows_with_cols(parity.field(), &independent, parity.cols())?;
        Ok(Self {
            name: format!("[{},{}]", generator.cols(), generator.rows()),
            generator,
            parity_check,
            min_distance: OnceLock::new(),
        })
    }

    /// Binary Hamming code `[2^r − 1, 2^r − 1 − r, 3]`. Column `j` (1-based) of
    /// the parity check is the binary expansion of `j`, least significant bit in
    /// row 0.
    pub fn hamming_binary(r: u32) -> Result<Self> {
        if !(2..=16).contains(&r) {
            return Err(Error::usage(format!("Hamming redundancy r = {r} outside 2..=16")));
        }
        let n = (1u32 << r) - 1;
        let rows: Vec<Vec<u32>> = (0..r)
            .map(|bit| (1..=n).map(|c| c >> bit & 1).collect())
            .collect();
        let h = GfMatrix::from_rows(&FieldSpec::gf2(), &rows)?;
        let mut code = Self::from_parity_check(h)?;
        code.name = format!("hamming:{r}");
        let _ = code.min_distance.set(3);
        Ok(code)
    }

    /// The `[n, n−1, 2]` binary code of all even-weight vectors.
    pub fn even_weight(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::usage(format!("even-weight code needs n >= 2, got {n}")));
        }
        let h = GfMatrix::from_rows(&FieldSpec::gf2(), &[vec![1; n]])?;
        let mut code = Self::from_parity_check(h)?;
        code.name = format!("even:{n}");
        Ok(code)
    }

    /// The `[n, 1, n]` repetition code over `field`.
    pub fn repetition(field: &FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("repetition code needs n >= 1"));
        }
        let mut code = Self::from_generator(GfMatrix::from_rows(field, &[vec![1; n]])?)?;
        code.name = format!("rep:{n}");
        Ok(code)
    }

    /// The unconstrained `[n, n, 1]` code.
    pub fn full(field: &FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("full code needs n >= 1"));
        }
        let mut code = Self::from_generator(GfMatrix::identity(field, n))?;
        code.name = format!("full:{n}");
        Ok(code)
    }

    /// `{ (c1 | c2) : c1 ∈ a, c2 ∈ b }`.
    pub fn direct_sum(a: &LinearCode, b: &LinearCode) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::usage("direct sum of codes over different fields"));
        }
        let (n1, n2) = (a.len(), b.len());
        let mut g = GfMatrix::zeros(a.field(), a.dimension() + b.dimension(), n1 + n2);
        for r in 0..a.dimension() {
            for c in 0..n1 {
                g.set(r, c, a.generator.get(r, c));
            }
        }
        for r in 0..b.dimension() {
            for c in 0..n2 {
                g.set(a.dimension() + r, n1 + c, b.generator.get(r, c));
            }
        }
        let mut code = Self::from_generator(g)?;
        code.name = format!("dsum:{},{}", a.name, b.name);
        if let (Some(d1), Some(d2)) = (a.min_distance.get(), b.min_distance.get()) {
            let _ = code.min_distance.set(*d1.min(d2));
        }
        Ok(code)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &FieldSpec {
        self.generator.field()
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &GfMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &GfMatrix {
        &self.parity_check
    }

    /// `H · v = 0`.
    pub fn is_codeword(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.len() {
            return Err(Error::usage(format!(
                "word of length {} tested against a code of length {}",
                v.len(),
                self.len()
            )));
        }
        if self.parity_check.rows() == 0 {
            return Ok(true);
        }
        Ok(self.parity_check.mul_vec(v)?.iter().all(|&s| s == 0))
    }

    /// Codeword `message · G`.
    pub fn encode(&self, message: &[u32]) -> Result<Codeword> {
        if message.len() != self.dimension() {
            return Err(Error::usage(format!(
                "message of length {} for a code of dimension {}",
                message.len(),
                self.dimension()
            )));
        }
        let f = self.field();
        let mut out = vec![0u32; self.len()];
        for (r, &m) in message.iter().enumerate() {
            if m == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(m, self.generator.get(r, c)));
            }
        }
        Ok(Codeword(out))
    }

    /// Cached exact minimum distance, if already known.
    pub fn known_min_distance(&self) -> Option<usize> {
        self.min_distance.get().copied()
    }

    /// Exact minimum distance with automatic engine choice; cached.
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(&d) = self.min_distance.get() {
            return Ok(d);
        }
        let (bracket, _) = mindist::minimum_distance(&self.generator, &SearchOptions::default())?;
        let d = bracket.value().expect("search without deadline is exact");
        Ok(*self.min_distance.get_or_init(|| d))
    }

    /// Runs the selected engine; exact results are cached.
    pub fn search_min_distance(&self, opts: &SearchOptions<'_>) -> Result<(DistanceBracket, Engine)> {
        let (bracket, engine) = mindist::minimum_distance(&self.generator, opts)?;
        if let Some(d) = bracket.value() {
            let _ = self.min_distance.set(d);
        }
        Ok((bracket, engine))
    }

    pub fn min_distance_exhaustive(&self) -> Result<usize> {
        mindist::min_distance_exhaustive(&self.generator)
    }

    pub fn min_distance_bz(&self) -> Result<usize> {
        let b = mindist::min_distance_bz(&self.generator, &SearchOptions::default())?;
        Ok(b.value().expect("search without deadline is exact"))
    }

    /// Serializes as a code file: `generator` then the matrix text.
    pub fn to_text(&self) -> String {
        format!("generator\n{}", self.generator.to_text())
    }

    /// Parses a code file: line 1 `generator` or `parity`, then a matrix.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut offset = 0;
        let mut rest = text;
        let kind = loop {
            let (line, tail) = rest.split_once('\n').unwrap_or((rest, ""));
            offset += 1;
            rest = tail;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                if tail.is_empty() {
                    return Err(Error::parse(offset, "empty code file"));
                }
                continue;
            }
            break match t {
                "generator" => CodeMatrixKind::Generator,
                "parity" => CodeMatrixKind::Parity,
                other => {
                    return Err(Error::parse(
                        offset,
                        format!("expected 'generator' or 'parity', found '{other}'"),
                    ))
                }
            };
        };
        let m = GfMatrix::parse_text(rest, offset)?;
        match kind {
            CodeMatrixKind::Generator => Self::from_generator(m),
            CodeMatrixKind::Parity => Self::from_parity_check(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Weights of every codeword, by enumerating all 2^k binary messages.
    fn all_weights_binary(c: &LinearCode) -> Vec<usize> {
        let k = c.dimension();
        (0u32..(1 << k))
            .map(|m| {
                let msg: Vec<u32> = (0..k).map(|i| m >> i & 1).collect();
                c.encode(&msg).unwrap().weight()
            })
            .collect()
    }

    fn check_invariants(c: &LinearCode) {
        let gh = c.generator().mul(&c.parity_check().transpose()).unwrap();
        assert!(gh.is_zero());
        assert_eq!(c.generator().rank(), c.dimension());
        assert_eq!(c.parity_check().rank(), c.len() - c.dimension());
        let d = c.min_distance().unwrap();
        assert!(d <= c.len() - c.dimension() + 1, "Singleton bound");
    }

    #[test]
    fn hamming_codes() {
        let h3 = LinearCode::hamming_binary(3).unwrap();
        assert_eq!((h3.len(), h3.dimension()), (7, 4));
        assert_eq!(h3.min_distance_exhaustive().unwrap(), 3);
        assert_eq!(h3.min_distance_bz().unwrap(), 3);
        check_invariants(&h3);

        let h2 = LinearCode::hamming_binary(2).unwrap();
        assert_eq!((h2.len(), h2.dimension()), (3, 1));
        assert_eq!(h2.min_distance_exhaustive().unwrap(), 3);

        let h4 = LinearCode::hamming_binary(4).unwrap();
        assert_eq!((h4.len(), h4.dimension()), (15, 11));
        let w = all_weights_binary(&h4);
        assert_eq!(w.iter().filter(|&&x| x > 0).min(), Some(&3));
        assert_eq!(h4.min_distance_exhaustive().unwrap(), 3);
    }

    #[test]
    fn hamming_membership() {
        let h = LinearCode::hamming_binary(3).unwrap();
        assert!(h.is_codeword(&[0; 7]).unwrap());
        assert!(!h.is_codeword(&[0, 0, 1, 0, 0, 0, 0]).unwrap());
        // columns 1, 2, 3 XOR to zero
        assert!(h.is_codeword(&[1, 1, 1, 0, 0, 0, 0]).unwrap());
        assert!(h.is_codeword(&[1; 6]).is_err());
    }

    #[test]
    fn even_weight_codes() {
        let e6 = LinearCode::even_weight(6).unwrap();
        assert_eq!((e6.len(), e6.dimension()), (6, 5));
        assert_eq!(e6.min_distance_exhaustive().unwrap(), 2);
        check_invariants(&e6);

        let e2 = LinearCode::even_weight(2).unwrap();
        assert_eq!(e2.dimension(), 1);
        assert_eq!(e2.encode(&[1]).unwrap(), Codeword(vec![1, 1]));

        let e4 = LinearCode::even_weight(4).unwrap();
        let w = all_weights_binary(&e4);
        assert_eq!(w.len(), 8);
        assert!(w.iter().all(|x| x % 2 == 0));
        assert!(LinearCode::even_weight(1).is_err());
    }

    #[test]
    fn repetition_and_full() {
        let r5 = LinearCode::repetition(&FieldSpec::gf2(), 5).unwrap();
        assert_eq!(r5.min_distance_exhaustive().unwrap(), 5);
        let f1 = LinearCode::full(&FieldSpec::gf2(), 1).unwrap();
        assert_eq!((f1.len(), f1.dimension()), (1, 1));
        assert!(f1.is_codeword(&[1]).unwrap());
        assert_eq!(f1.parity_check().rows(), 0);
    }

    #[test]
    fn direct_sums() {
        let h = LinearCode::hamming_binary(3).unwrap();
        let c = LinearCode::direct_sum(&h, &h).unwrap();
        assert_eq!((c.len(), c.dimension()), (14, 8));
        assert_eq!(c.min_distance_exhaustive().unwrap(), 3);
        assert_eq!(c.min_distance_bz().unwrap(), 3);
        check_invariants(&c);

        let e = LinearCode::even_weight(6).unwrap();
        let ee = LinearCode::direct_sum(&e, &e).unwrap();
        assert_eq!((ee.len(), ee.dimension()), (12, 10));
        assert_eq!(ee.min_distance_exhaustive().unwrap(), 2);

        let f5 = LinearCode::full(&FieldSpec::new(5).unwrap(), 2).unwrap();
        assert!(LinearCode::direct_sum(&h, &f5).is_err());
    }

    #[test]
    fn zero_dimensional_codes_are_rejected() {
        let f = FieldSpec::gf2();
        assert!(LinearCode::from_generator(GfMatrix::zeros(&f, 0, 4)).is_err());
        assert!(LinearCode::from_parity_check(GfMatrix::identity(&f, 4)).is_err());
        let dep = GfMatrix::from_rows(&f, &[vec![1, 1, 0], vec![1, 1, 0]]).unwrap();
        assert!(LinearCode::from_generator(dep).is_err());
    }

    #[test]
    fn nonbinary_code() {
        let f = FieldSpec::new(4).unwrap();
        let g = GfMatrix::from_rows(&f, &[vec![1, 0, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        let c = LinearCode::from_generator(g).unwrap();
        check_invariants(&c);
        let cw = c.encode(&[2, 3]).unwrap();
        assert!(c.is_codeword(&cw.0).unwrap());
    }

    #[test]
    fn code_file_roundtrip() {
        let h = LinearCode::hamming_binary(3).unwrap();
        let back = LinearCode::parse_text(&h.to_text()).unwrap();
        assert_eq!(back.generator(), h.generator());
        let p = LinearCode::parse_text("parity\n1 4 2\n1 1 1 1\n").unwrap();
        assert_eq!(p.dimension(), 3);
        assert!(matches!(
            LinearCode::parse_text("checks\n1 4 2\n1 1 1 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    proptest! {
        #[test]
        fn direct_sum_weight_identity(m1 in 0u32..16, m2 in 0u32..32) {
            let h = LinearCode::hamming_binary(3).unwrap();
            let e = LinearCode::even_weight(6).unwrap();
            let s = LinearCode::direct_sum(&h, &e).unwrap();
            let a: Vec<u32> = (0..4).map(|i| m1 >> i & 1).collect();
            let b: Vec<u32> = (0..5).map(|i| m2 >> i & 1).collect();
            let ca = h.encode(&a).unwrap();
            let cb = e.encode(&b).unwrap();
            let joined: Vec<u32> = ca.0.iter().chain(&cb.0).copied().collect();
            prop_assert!(s.is_codeword(&joined).unwrap());
            prop_assert_eq!(Codeword(joined).weight(), ca.weight() + cb.weight());
        }
    }
}
