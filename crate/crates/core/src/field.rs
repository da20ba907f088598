//! Finite field arithmetic for GF(p) (p prime, p ≤ 2^16) and GF(2^e) (e ≤ 16).
//!
//! Elements are stored as canonical integers in `[0, q)`. For binary extension
//! fields bit `i` of the integer is the coefficient of `x^i` in the polynomial
//! basis, so addition is XOR and multiplication goes through log/antilog tables.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// A finite field GF(q). Cheap to clone; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Tables>,
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Reduction polynomial as a bit mask (bit i = coefficient of x^i); 0 for prime fields.
    poly: u32,
    /// exp[i] = g^i for i in 0..2(q-1); empty for prime fields.
    exp: Vec<u32>,
    /// log[a] for a != 0; empty for prime fields.
    log: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.q == other.inner.q && self.inner.poly == other.inner.poly)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)?;
        if self.inner.e > 1 {
            write!(f, "[{}]", format_poly(self.inner.poly, self.inner.e))?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}", self.inner.q)?;
        if self.inner.e > 1 {
            let coeffs: Vec<String> = self.poly_coefficients().iter().map(|c| c.to_string()).collect();
            write!(f, " poly={}", coeffs.join(","))?;
        }
        Ok(())
    }
}

fn format_poly(poly: u32, e: u32) -> String {
    let mut terms = Vec::new();
    for i in (0..=e).rev() {
        if poly >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    terms.join("+")
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn poly_degree(a: u32) -> i32 {
    31 - a.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` in GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every monic polynomial of
/// degree 1..=deg/2.
pub(crate) fn is_irreducible_gf2(poly: u32) -> bool {
    let deg = poly_degree(poly);
    if deg < 1 {
        return false;
    }
    for d in 1..=(deg / 2) {
        for low in 0..(1u32 << d) {
            let f = (1u32 << d) | low;
            if poly_rem(poly, f) == 0 {
                return false;
            }
        }
    }
    true
}

/// Carry-less product of two residues, reduced modulo `poly` of degree `e`.
fn clmul_mod(mut a: u32, mut b: u32, poly: u32, e: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> e & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

impl FieldSpec {
    /// GF(2) with its bit-operation fast path.
    pub fn gf2() -> Self {
        Self::prime(2).expect("2 is prime")
    }

    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::usage(format!("field characteristic {p} is not prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::usage(format!("field order {p} exceeds 2^16")));
        }
        Ok(Self {
            inner: Arc::new(Tables {
                p,
                e: 1,
                q: p,
                poly: 0,
                exp: Vec::new(),
                log: Vec::new(),
            }),
        })
    }

    /// GF(2^e) with the smallest irreducible reduction polynomial of degree `e`.
    pub fn binary_extension(e: u32) -> Result<Self> {
        if e == 0 || e > 16 {
            return Err(Error::usage(format!("extension degree {e} outside 1..=16")));
        }
        if e == 1 {
            return Ok(Self::gf2());
        }
        let poly = ((1u32 << e)..(1u32 << (e + 1)))
            .find(|&f| is_irreducible_gf2(f))
            .expect("irreducible polynomials exist in every degree");
        Self::binary_extension_with_poly(e, poly)
    }

    /// GF(2^e) with an explicit reduction polynomial given as a bit mask.
    pub fn binary_extension_with_poly(e: u32, poly: u32) -> Result<Self> {
        if e == 0 || e > 16 {
            return Err(Error::usage(format!("extension degree {e} outside 1..=16")));
        }
        if poly_degree(poly) != e as i32 {
            return Err(Error::usage(format!(
                "reduction polynomial {} is not monic of degree {e}",
                format_poly(poly, poly_degree(poly).max(0) as u32)
            )));
        }
        if !is_irreducible_gf2(poly) {
            return Err(Error::usage(format!(
                "reduction polynomial {} is reducible over GF(2)",
                format_poly(poly, e)
            )));
        }
        if e == 1 {
            return Ok(Self::gf2());
        }
        let q = 1u32 << e;
        // Find a primitive element: smallest g whose powers cover the whole group.
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        'search: for g in 2..q {
            let mut x = 1u32;
            for i in 0..(q - 1) {
                if i > 0 && x == 1 {
                    continue 'search;
                }
                exp[i as usize] = x;
                x = clmul_mod(x, g, poly, e);
            }
            if x != 1 {
                continue;
            }
            for i in 0..(q - 1) as usize {
                exp[i + q as usize - 1] = exp[i];
                log[exp[i] as usize] = i as u32;
            }
            return Ok(Self {
                inner: Arc::new(Tables {
                    p: 2,
                    e,
                    q,
                    poly,
                    exp,
                    log,
                }),
            });
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    /// GF(q) for prime `q` or `q = 2^e`, with the default reduction polynomial.
    pub fn new(q: u32) -> Result<Self> {
        if is_prime(q) {
            return Self::prime(q);
        }
        if q.is_power_of_two() && q > 2 {
            return Self::binary_extension(q.trailing_zeros());
        }
        Err(Error::usage(format!(
            "unsupported field order {q}: only primes and powers of two are allowed"
        )))
    }

    /// GF(q) with an explicit reduction polynomial (ascending coefficient list).
    pub fn with_poly(q: u32, coefficients: &[u32]) -> Result<Self> {
        if !(q.is_power_of_two() && q > 2) {
            if is_prime(q) && coefficients.len() <= 2 {
                return Self::prime(q);
            }
            return Err(Error::usage(format!(
                "a reduction polynomial is only meaningful for q = 2^e, got q = {q}"
            )));
        }
        let e = q.trailing_zeros();
        if coefficients.len() != e as usize + 1 {
            return Err(Error::usage(format!(
                "reduction polynomial for GF({q}) needs {} coefficients, got {}",
                e + 1,
                coefficients.len()
            )));
        }
        let mut mask = 0u32;
        for (i, &c) in coefficients.iter().enumerate() {
            if c > 1 {
                return Err(Error::usage(format!("coefficient {c} is not in GF(2)")));
            }
            mask |= c << i;
        }
        Self::binary_extension_with_poly(e, mask)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn is_binary(&self) -> bool {
        self.inner.q == 2
    }

    /// Reduction polynomial coefficients, constant term first. Empty for prime fields.
    pub fn poly_coefficients(&self) -> Vec<u32> {
        if self.inner.e == 1 {
            return Vec::new();
        }
        (0..=self.inner.e).map(|i| self.inner.poly >> i & 1).collect()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.inner.q && b < self.inner.q);
        let t = &*self.inner;
        if t.p == 2 {
            a ^ b
        } else {
            let s = a + b;
            if s >= t.p {
                s - t.p
            } else {
                s
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let t = &*self.inner;
        if t.p == 2 || a == 0 {
            a
        } else {
            t.p - a
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.inner.q && b < self.inner.q);
        let t = &*self.inner;
        if t.q == 2 {
            a & b
        } else if t.e == 1 {
            ((a as u64 * b as u64) % t.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
        }
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::domain("inverse of zero"));
        }
        let t = &*self.inner;
        Ok(if t.q == 2 {
            1
        } else if t.e == 1 {
            self.pow(a, (t.p - 2) as u64)
        } else {
            let l = t.log[a as usize];
            t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Wraps a raw value, checking it is a canonical representative.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.inner.q {
            return Err(Error::usage(format!(
                "value {value} is not an element of GF({})",
                self.inner.q
            )));
        }
        Ok(FieldElement {
            value,
            field: self.clone(),
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: self.clone(),
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.q
    }
}

/// Parses `q=<int>` with an optional `poly=<c0,c1,...>`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut q = None;
        let mut poly = None;
        for tok in s.split_whitespace() {
            if let Some(v) = tok.strip_prefix("q=") {
                q = Some(
                    v.parse::<u32>()
                        .map_err(|_| Error::usage(format!("bad field order '{v}'")))?,
                );
            } else if let Some(v) = tok.strip_prefix("poly=") {
                let coeffs = v
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::usage(format!("bad polynomial '{v}'")))?;
                poly = Some(coeffs);
            } else {
                return Err(Error::usage(format!("unexpected field token '{tok}'")));
            }
        }
        let q = q.ok_or_else(|| Error::usage("field spec is missing q=<int>"))?;
        match poly {
            Some(c) => FieldSpec::with_poly(q, &c),
            None => FieldSpec::new(q),
        }
    }
}

/// A field value bound to its field, for checked arithmetic at API boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::usage(format!(
                "mixing elements of {:?} and {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            value: self.field.add(self.value, other.value),
            field: self.field.clone(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            value: self.field.mul(self.value, other.value),
            field: self.field.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            value: self.field.neg(self.value),
            field: self.field.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self {
            value: self.field.inv(self.value)?,
            field: self.field.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
