//! Dense linear algebra over GF(q) and a cyclic Jacobi eigensolver for real
//! symmetric matrices.
//!
//! GF(2) matrices are stored bit-packed, one `u64` word per 64 columns, and
//! eliminate with word-wide XORs. Every other field uses a row-major grid of
//! canonical integers. Both representations expose the same API.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    Bits { stride: usize, words: Vec<u64> },
    Dense(Vec<u32>),
}

/// A dense matrix over GF(q).
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl std::fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GfMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

impl GfMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        let storage = if field.is_binary() {
            let stride = words_for(cols);
            Storage::Bits {
                stride,
                words: vec![0; stride * rows],
            }
        } else {
            Storage::Dense(vec![0; rows * cols])
        };
        Self {
            field: field.clone(),
            rows,
            cols,
            storage,
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows of canonical integers.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`GfMatrix::from_rows`] but with an explicit column count, so an
    /// empty row list still has a width.
    pub fn from_rows_with_cols(field: &FieldSpec, rows: &[Vec<u32>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::usage(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= field.order() {
                    return Err(Error::usage(format!(
                        "entry {v} at ({r},{c}) is not an element of GF({})",
                        field.order()
                    )));
                }
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        debug_assert!(r < self.rows && c < self.cols);
        match &self.storage {
            Storage::Bits { stride, words } => (words[r * stride + c / 64] >> (c % 64) & 1) as u32,
            Storage::Dense(v) => v[r * self.cols + c],
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        debug_assert!(r < self.rows && c < self.cols && value < self.field.order());
        match &mut self.storage {
            Storage::Bits { stride, words } => {
                let w = &mut words[r * *stride + c / 64];
                let mask = 1u64 << (c % 64);
                if value == 1 {
                    *w |= mask;
                } else {
                    *w &= !mask;
                }
            }
            Storage::Dense(v) => v[r * self.cols + c] = value,
        }
    }

    pub fn row(&self, r: usize) -> Vec<u32> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    /// Packed words of row `r`. Only available for GF(2) matrices.
    pub fn bit_row(&self, r: usize) -> Option<&[u64]> {
        match &self.storage {
            Storage::Bits { stride, words } => Some(&words[r * stride..(r + 1) * stride]),
            Storage::Dense(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Bits { words, .. } => words.iter().all(|&w| w == 0),
            Storage::Dense(v) => v.iter().all(|&x| x == 0),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    t.set(c, r, v);
                }
            }
        }
        t
    }

    /// Matrix-vector product `M · v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::usage(format!(
                "vector of length {} against matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.get(r, c), v[c])))
            })
            .collect())
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.field != other.field {
            return Err(Error::usage("matrix product over different fields"));
        }
        if self.cols != other.rows {
            return Err(Error::usage(format!(
                "shape mismatch {}x{} · {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = GfMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Stacks matrices vertically; all must share field and width.
    pub fn vstack(parts: &[GfMatrix]) -> Result<GfMatrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::usage("vstack of no matrices"))?;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = GfMatrix::zeros(&first.field, rows, first.cols);
        let mut at = 0;
        for p in parts {
            if p.field != first.field || p.cols != first.cols {
                return Err(Error::usage("vstack of incompatible matrices"));
            }
            for r in 0..p.rows {
                out.copy_row_from(at + r, p, r);
            }
            at += p.rows;
        }
        Ok(out)
    }

    fn copy_row_from(&mut self, dst: usize, src: &GfMatrix, r: usize) {
        match (&mut self.storage, &src.storage) {
            (Storage::Bits { stride, words }, Storage::Bits { stride: s2, words: w2 }) => {
                words[dst * *stride..(dst + 1) * *stride].copy_from_slice(&w2[r * s2..(r + 1) * s2]);
            }
            _ => {
                for c in 0..self.cols {
                    self.set(dst, c, src.get(r, c));
                }
            }
        }
    }

    /// New matrix whose column `j` is column `columns[j]` of `self`.
    pub fn select_columns(&self, columns: &[usize]) -> GfMatrix {
        let mut out = GfMatrix::zeros(&self.field, self.rows, columns.len());
        for r in 0..self.rows {
            for (j, &c) in columns.iter().enumerate() {
                let v = self.get(r, c);
                if v != 0 {
                    out.set(r, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        match &mut self.storage {
            Storage::Bits { stride, words } => {
                for w in 0..*stride {
                    words.swap(a * *stride + w, b * *stride + w);
                }
            }
            Storage::Dense(v) => {
                for c in 0..self.cols {
                    v.swap(a * self.cols + c, b * self.cols + c);
                }
            }
        }
    }

    /// In-place Gauss-Jordan elimination visiting columns in `order`.
    /// Returns the pivot columns; row `i` of the result has its pivot at
    /// `pivots[i]`, remaining rows are zero.
    fn reduce_in_place(&mut self, order: &[usize]) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            match &mut self.storage {
                Storage::Bits { stride, words } => {
                    let stride = *stride;
                    let (w, bit) = (c / 64, 1u64 << (c % 64));
                    let pivot_row: Vec<u64> = words[r * stride..(r + 1) * stride].to_vec();
                    for i in 0..self.rows {
                        if i != r && words[i * stride + w] & bit != 0 {
                            xor_into(&mut words[i * stride..(i + 1) * stride], &pivot_row);
                        }
                    }
                }
                Storage::Dense(v) => {
                    let f = &self.field;
                    let n = self.cols;
                    let inv = f.inv(v[r * n + c]).expect("pivot is nonzero");
                    for k in 0..n {
                        v[r * n + k] = f.mul(v[r * n + k], inv);
                    }
                    for i in 0..self.rows {
                        let factor = v[i * n + c];
                        if i == r || factor == 0 {
                            continue;
                        }
                        for k in 0..n {
                            let t = f.mul(factor, v[r * n + k]);
                            v[i * n + k] = f.sub(v[i * n + k], t);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (GfMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_column_order(&order)
    }

    /// Row reduction that considers pivot columns in the given priority order.
    /// `order` must list each column at most once; unlisted columns never pivot.
    pub fn rref_with_column_order(&self, order: &[usize]) -> (GfMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(order);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{ v : M·v = 0 }`, one vector per free column
    /// in ascending column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }

    /// Kernel basis as the rows of a matrix (`nullity × cols`).
    pub fn kernel_matrix(&self) -> GfMatrix {
        let basis = self.kernel_basis();
        GfMatrix::from_rows_with_cols(&self.field, &basis, self.cols).expect("kernel entries are canonical")
    }

    /// Text form: a header `rows cols q [poly=...]` then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}", self.rows, self.cols, self.field.order());
        if self.field.degree() > 1 {
            let poly: Vec<String> = self.field.poly_coefficients().iter().map(u32::to_string).collect();
            let _ = write!(s, " poly={}", poly.join(","));
        }
        s.push('\n');
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text form produced by [`GfMatrix::to_text`]. `line_offset`
    /// shifts reported line numbers when the matrix is embedded in a larger file.
    pub fn parse_text(text: &str, line_offset: usize) -> Result<GfMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1 + line_offset, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(line_offset + 1, "missing 'rows cols q' header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::parse(hline, "header must be 'rows cols q'"));
        }
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(hline, format!("bad integer '{t}'")))
        };
        let (rows, cols, q) = (num(toks[0])?, num(toks[1])?, num(toks[2])?);
        let mut fspec = format!("q={q}");
        for t in &toks[3..] {
            if t.starts_with("poly=") {
                fspec.push(' ');
                fspec.push_str(t);
            } else {
                return Err(Error::parse(hline, format!("unexpected header token '{t}'")));
            }
        }
        let field: FieldSpec = fspec.parse().map_err(|e: Error| Error::parse(hline, e.to_string()))?;
        let mut data = Vec::with_capacity(rows);
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::parse(ln, format!("bad entry '{t}'")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if row.len() != cols {
                return Err(Error::parse(
                    ln,
                    format!("expected {cols} entries, found {}", row.len()),
                ));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= field.order()) {
                return Err(Error::parse(ln, format!("entry {bad} is not below q={q}")));
            }
            data.push(row);
            if data.len() > rows {
                return Err(Error::parse(ln, format!("more than {rows} rows")));
            }
        }
        if data.len() != rows {
            return Err(Error::parse(
                hline,
                format!("expected {rows} rows, found {}", data.len()),
            ));
        }
        GfMatrix::from_rows_with_cols(&field, &data, cols)
    }
}

/// A real symmetric matrix, stored as its lower triangle so symmetry holds by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSymMatrix {
    order: usize,
    lower: Vec<f64>,
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let (a, b) = if i >= j { (i, j) } else { (j, i) };
    a * (a + 1) / 2 + b
}

impl RealSymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            lower: vec![0.0; order * (order + 1) / 2],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a full square grid, rejecting any asymmetry.
    pub fn from_dense(grid: &[Vec<f64>]) -> Result<Self> {
        let n = grid.len();
        let mut m = Self::zeros(n);
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage("matrix is not square"));
            }
            for j in 0..=i {
                if grid[i][j] != grid[j][i] {
                    return Err(Error::usage(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                m.set(i, j, grid[i][j]);
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[tri(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.lower[tri(i, j)] = v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `yᵀ P y`.
    pub fn quadratic_form(&self, y: &[f64]) -> f64 {
        self.mul_vec(y).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.order {
            for j in 0..self.order {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues in descending order with matching unit eigenvectors.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Default relative tolerance for the Jacobi sweeps.
pub const JACOBI_DEFAULT_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigen-decomposition.
///
/// Sweeps rotate every off-diagonal pair until the off-diagonal Frobenius norm
/// falls below `tol` times the Frobenius norm of the input.
pub fn symmetric_eigen(p: &RealSymMatrix, tol: f64) -> Result<SymmetricEigen> {
    if !(tol > 0.0) {
        return Err(Error::usage("eigen tolerance must be positive"));
    }
    let n = p.order();
    let mut a = p.to_dense();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let target = tol * p.frobenius_norm();
    let off_norm = |a: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        if off_norm(&a) <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps (order {n})"
            )));
        }
        sweeps += 1;
        for pi in 0..n {
            for qi in pi + 1..n {
                let apq = a[pi][qi];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[qi][qi] - a[pi][pi]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[pi], row[qi]);
                    row[pi] = c * akp - s * akq;
                    row[qi] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[pi][k], a[qi][k]);
                    a[pi][k] = c * apk - s * aqk;
                    a[qi][k] = s * apk + c * aqk;
                }
                a[pi][qi] = 0.0;
                a[qi][pi] = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[pi], row[qi]);
                    row[pi] = c * vkp - s * vkq;
                    row[qi] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    Ok(SymmetricEigen {
        values: idx.iter().map(|&i| a[i][i]).collect(),
        vectors: idx
            .iter()
            .map(|&i| (0..n).map(|k| v[k][i]).collect())
            .collect(),
        sweeps,
    })
}

/// All eigenvalues, with multiplicity, sorted descending.
pub fn symmetric_eigenvalues(p: &RealSymMatrix, tol: f64) -> Result<Vec<f64>> {
    Ok(symmetric_eigen(p, tol)?.values)
}
