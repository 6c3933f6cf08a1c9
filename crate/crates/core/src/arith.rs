//! Arithmetic and canonical linear algebra over the finite chain ring Z/p^e.
//!
//! Matrices act on row vectors: a system reads `x · A = b`, and the module
//! generated by a matrix is its row span.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Residue = u64;

/// The ring Z/p^e with p prime and p^e < 2^32, so every product fits in a u64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChainRing {
    p: u64,
    e: u32,
    modulus: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ChainRing {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidRing { p, e, reason: reason.to_string() };
        if p > 1 << 31 {
            return Err(invalid("p exceeds 2^31"));
        }
        if !is_prime(p) {
            return Err(invalid("p is not prime"));
        }
        if e == 0 {
            return Err(invalid("e must be at least 1"));
        }
        let modulus = p
            .checked_pow(e)
            .filter(|&m| m < 1 << 32)
            .ok_or_else(|| invalid("p^e must be below 2^32"))?;
        Ok(ChainRing { p, e, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// p^k; `k` may exceed `e` only in the sense that the result is then 0 mod p^e.
    #[inline]
    pub fn pow(&self, k: u32) -> u64 {
        if k >= self.e {
            if k == self.e {
                self.modulus
            } else {
                0
            }
        } else {
            self.p.pow(k)
        }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.modulus) * (b % self.modulus) % self.modulus
    }

    /// Largest k with p^k | x; zero gets the maximum `e`.
    pub fn valuation(&self, x: u64) -> u32 {
        let mut x = x % self.modulus;
        if x == 0 {
            return self.e;
        }
        let mut k = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            k += 1;
        }
        k
    }

    /// Writes a nonzero x as p^k · u with u a unit; zero maps to (e, 0).
    pub fn split_unit(&self, x: u64) -> (u32, u64) {
        let x = x % self.modulus;
        let k = self.valuation(x);
        if x == 0 {
            (k, 0)
        } else {
            (k, x / self.pow(k))
        }
    }

    pub fn unit_inverse(&self, x: u64) -> Result<u64> {
        let x = x % self.modulus;
        if x.is_multiple_of(self.p) {
            return Err(Error::NotAUnit(x));
        }
        let (mut old_r, mut r) = (x as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(old_s.rem_euclid(self.modulus as i128) as u64)
    }

    pub fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }
}

/// Dense matrix with entries reduced modulo p^e.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    ring: ChainRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ResidueMatrix {
    pub fn zeros(ring: ChainRing, rows: usize, cols: usize) -> Self {
        ResidueMatrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: ChainRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry.
    pub fn from_rows<R: AsRef<[u64]>>(ring: ChainRing, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: row.len() });
            }
            data.extend(row.iter().map(|&x| ring.reduce(x)));
        }
        Ok(ResidueMatrix { ring, rows: rows.len(), cols, data })
    }

    pub fn ring(&self) -> ChainRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.ring.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter().map(<[u64]>::to_vec).collect()
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row.iter().map(|&x| self.ring.reduce(x)));
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0u64; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr % self.ring.modulus == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = self.ring.add(*o, self.ring.mul(xr, a));
            }
        }
        out
    }

    pub fn mul(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ResidueMatrix::zeros(self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            let prod = other.left_mul(self.row(r));
            out.data[r * other.cols..(r + 1) * other.cols].copy_from_slice(&prod);
        }
        out
    }

    pub fn hstack(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        ResidueMatrix { ring: self.ring, rows: self.rows, cols, data }
    }

    pub fn vstack(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ResidueMatrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Columns `start..end` of every row.
    pub fn column_block(&self, start: usize, end: usize) -> ResidueMatrix {
        let rows: Vec<&[u64]> = self.row_iter().map(|r| &r[start..end]).collect();
        ResidueMatrix::from_rows(self.ring, end - start, &rows).expect("block width")
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

fn axpy(ring: &ChainRing, y: &mut [u64], t: u64, x: &[u64]) {
    // y <- y - t*x
    if t.is_multiple_of(ring.modulus()) {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = ring.sub(*yi, ring.mul(t, xi));
    }
}

fn scale(ring: &ChainRing, x: &[u64], t: u64) -> Vec<u64> {
    x.iter().map(|&v| ring.mul(v, t)).collect()
}

/// Index of the first nonzero entry, if any.
pub fn leading_column(row: &[u64]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

/// Canonical Howell form of the row span of `m`.
///
/// Output rows have strictly increasing pivot columns, each pivot is a power
/// p^k, entries above a pivot are reduced below it, and every element of the
/// span whose leading column is at least j lies in the span of the rows with
/// pivot column at least j. Zero rows are dropped.
pub fn howell_form(m: &ResidueMatrix) -> ResidueMatrix {
    let ring = m.ring();
    let cols = m.cols();
    let mut pending: Vec<Vec<u64>> =
        m.row_iter().filter(|r| r.iter().any(|&x| x != 0)).map(<[u64]>::to_vec).collect();
    let mut pivots: Vec<(usize, u32, Vec<u64>)> = Vec::new();

    for c in 0..cols {
        let best = pending
            .iter()
            .enumerate()
            .filter(|(_, r)| r[c] != 0)
            .min_by_key(|(i, r)| (ring.valuation(r[c]), *i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut piv = pending.remove(bi);
        let (k, unit) = ring.split_unit(piv[c]);
        let inv = ring.unit_inverse(unit).expect("unit part");
        piv = scale(&ring, &piv, inv);
        let pk = ring.pow(k);
        for r in pending.iter_mut() {
            if r[c] != 0 {
                let t = r[c] / pk;
                axpy(&ring, r, t, &piv);
            }
        }
        let closure = scale(&ring, &piv, ring.pow(ring.e() - k));
        if closure.iter().any(|&x| x != 0) {
            pending.push(closure);
        }
        pending.retain(|r| r.iter().any(|&x| x != 0));
        pivots.push((c, k, piv));
    }

    for idx in 0..pivots.len() {
        let (c, k) = (pivots[idx].0, pivots[idx].1);
        let pk = ring.pow(k);
        let (above, rest) = pivots.split_at_mut(idx);
        let piv = &rest[0].2;
        for (_, _, row) in above.iter_mut() {
            let t = row[c] / pk;
            axpy(&ring, row, t, piv);
        }
    }

    let rows: Vec<Vec<u64>> = pivots.into_iter().map(|(_, _, r)| r).collect();
    ResidueMatrix::from_rows(ring, cols, &rows).expect("howell rows")
}

/// (pivot column, pivot valuation) for each row of a Howell-form matrix.
pub fn howell_pivots(h: &ResidueMatrix) -> Vec<(usize, u32)> {
    let ring = h.ring();
    h.row_iter()
        .map(|r| {
            let c = leading_column(r).expect("howell rows are nonzero");
            (c, ring.valuation(r[c]))
        })
        .collect()
}

/// log_p of the size of the row span of a Howell-form matrix.
pub fn howell_span_log(h: &ResidueMatrix) -> u32 {
    let e = h.ring().e();
    howell_pivots(h).iter().map(|&(_, k)| e - k).sum()
}

/// Howell basis of the left kernel `{x : x · a = 0}`.
pub fn solve_kernel(a: &ResidueMatrix) -> ResidueMatrix {
    let ring = a.ring();
    let aug = a.hstack(&ResidueMatrix::identity(ring, a.rows()));
    let h = howell_form(&aug);
    let kernel_rows: Vec<Vec<u64>> = h
        .row_iter()
        .filter(|r| r[..a.cols()].iter().all(|&x| x == 0))
        .map(|r| r[a.cols()..].to_vec())
        .collect();
    howell_form(&ResidueMatrix::from_rows(ring, a.rows(), &kernel_rows).expect("kernel rows"))
}

/// Reusable solver for `x · a = b` with fixed `a`.
#[derive(Clone, Debug)]
pub struct RowSolver {
    ring: ChainRing,
    nrows: usize,
    ncols: usize,
    // Howell form of [a | I]; only rows with pivot in the `a` block matter.
    rows: Vec<(usize, u64, Vec<u64>)>,
}

impl RowSolver {
    pub fn new(a: &ResidueMatrix) -> Self {
        let ring = a.ring();
        let aug = a.hstack(&ResidueMatrix::identity(ring, a.rows()));
        let h = howell_form(&aug);
        let rows = h
            .row_iter()
            .filter_map(|r| {
                let c = leading_column(r)?;
                (c < a.cols()).then(|| (c, ring.pow(ring.valuation(r[c])), r.to_vec()))
            })
            .collect();
        RowSolver { ring, nrows: a.rows(), ncols: a.cols(), rows }
    }

    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.ncols);
        let ring = &self.ring;
        let mut residual: Vec<u64> = b.iter().map(|&x| ring.reduce(x)).collect();
        let mut x = vec![0u64; self.nrows];
        for (c, pk, row) in &self.rows {
            let v = residual[*c];
            if v == 0 {
                continue;
            }
            if !v.is_multiple_of(*pk) {
                return None;
            }
            let t = v / pk;
            axpy(ring, &mut residual, t, &row[..self.ncols]);
            for (xi, &ri) in x.iter_mut().zip(&row[self.ncols..]) {
                *xi = ring.add(*xi, ring.mul(t, ri));
            }
        }
        residual.iter().all(|&r| r == 0).then_some(x)
    }
}

/// Any `x` with `x · a = b`, or `None`.
pub fn solve_particular(a: &ResidueMatrix, b: &[u64]) -> Option<Vec<u64>> {
    RowSolver::new(a).solve(b)
}

/// Column-transform data of a Smith normal form `U · A · V = D`.
///
/// `diag[t]` is the valuation of the t-th diagonal entry for every column t
/// (`e` for zero entries and for columns beyond the rank).
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<u32>,
    pub col_ops: ResidueMatrix,
    pub col_ops_inv: ResidueMatrix,
}

pub fn smith_form(a: &ResidueMatrix) -> SmithForm {
    let ring = a.ring();
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut v = ResidueMatrix::identity(ring, cols);
    let mut vinv = ResidueMatrix::identity(ring, cols);
    let mut diag = vec![ring.e(); cols];

    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = m.get(r, c);
                if x != 0 {
                    let k = ring.valuation(x);
                    if best.is_none_or(|(bk, _, _)| k < bk) {
                        best = Some((k, r, c));
                    }
                }
            }
        }
        let Some((k, br, bc)) = best else { break };
        m.swap_rows(t, br);
        m.swap_cols(t, bc);
        v.swap_cols(t, bc);
        vinv.swap_rows(t, bc);

        let (_, unit) = ring.split_unit(m.get(t, t));
        let inv = ring.unit_inverse(unit).expect("unit part");
        for c in t..cols {
            let x = m.get(t, c);
            m.set(t, c, ring.mul(x, inv));
        }
        let pk = ring.pow(k);
        for r in t + 1..rows {
            let f = m.get(r, t) / pk;
            if f != 0 {
                for c in t..cols {
                    let x = ring.sub(m.get(r, c), ring.mul(f, m.get(t, c)));
                    m.set(r, c, x);
                }
            }
        }
        for c in t + 1..cols {
            let s = m.get(t, c) / pk;
            if s == 0 {
                continue;
            }
            for r in 0..rows {
                let x = ring.sub(m.get(r, c), ring.mul(s, m.get(r, t)));
                m.set(r, c, x);
            }
            for r in 0..cols {
                let x = ring.sub(v.get(r, c), ring.mul(s, v.get(r, t)));
                v.set(r, c, x);
            }
            for cc in 0..cols {
                let x = ring.add(vinv.get(t, cc), ring.mul(s, vinv.get(c, cc)));
                vinv.set(t, cc, x);
            }
        }
        diag[t] = k;
    }
    SmithForm { diag, col_ops: v, col_ops_inv: vinv }
}

/// A direct-sum basis `W = ⊕ Z/p^{e-k_t} · g_t` of a submodule of (Z/p^e)^J,
/// with linear coordinates.
#[derive(Clone, Debug)]
pub struct DiagonalBasis {
    ring: ChainRing,
    dim: usize,
    gens: Vec<Vec<u64>>,
    shifts: Vec<u32>,
    radices: Vec<u64>,
    // J x J column transform; kept columns first, then the annihilated ones.
    transform: ResidueMatrix,
    kept: usize,
}

impl DiagonalBasis {
    /// Basis of the row span of `m`.
    pub fn new(m: &ResidueMatrix) -> Self {
        let ring = m.ring();
        let dim = m.cols();
        let smith = smith_form(m);
        let kept = smith.diag.iter().take_while(|&&k| k < ring.e()).count();
        let mut gens = Vec::with_capacity(kept);
        let mut shifts = Vec::with_capacity(kept);
        let mut radices = Vec::with_capacity(kept);
        for t in 0..kept {
            let k = smith.diag[t];
            gens.push(scale(&ring, smith.col_ops_inv.row(t), ring.pow(k)));
            shifts.push(k);
            radices.push(ring.pow(ring.e() - k));
        }
        DiagonalBasis { ring, dim, gens, shifts, radices, transform: smith.col_ops, kept }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.gens
    }

    /// Order of each generator.
    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    pub fn order_log(&self) -> u32 {
        self.shifts.iter().map(|&k| self.ring.e() - k).sum()
    }

    /// Linear coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let w = self.transform.left_mul(v);
        if w[self.kept..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut out = Vec::with_capacity(self.kept);
        for t in 0..self.kept {
            let pk = self.ring.pow(self.shifts[t]);
            if !w[t].is_multiple_of(pk) {
                return None;
            }
            out.push((w[t] / pk) % self.radices[t]);
        }
        Some(out)
    }

    pub fn combine(&self, coords: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.dim];
        for (g, &c) in self.gens.iter().zip(coords) {
            if c != 0 {
                for (vi, &gi) in v.iter_mut().zip(g) {
                    *vi = self.ring.add(*vi, self.ring.mul(c, gi));
                }
            }
        }
        v
    }

    /// Mixed-radix index, first coordinate least significant.
    pub fn index_of_coords(&self, coords: &[u64]) -> u128 {
        let mut idx = 0u128;
        for (c, r) in coords.iter().zip(&self.radices).rev() {
            idx = idx * (*r as u128) + *c as u128;
        }
        idx
    }

    pub fn coords_of_index(&self, mut idx: u128) -> Vec<u64> {
        self.radices
            .iter()
            .map(|&r| {
                let c = (idx % r as u128) as u64;
                idx /= r as u128;
                c
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, e: u32) -> ChainRing {
        ChainRing::new(p, e).unwrap()
    }

    fn mat(ring: ChainRing, cols: usize, rows: &[&[u64]]) -> ResidueMatrix {
        ResidueMatrix::from_rows(ring, cols, rows).unwrap()
    }

    /// Every row vector in the span, by enumerating all coefficient vectors.
    fn span(m: &ResidueMatrix) -> std::collections::BTreeSet<Vec<u64>> {
        let ring = m.ring();
        let q = ring.modulus();
        let mut out = std::collections::BTreeSet::new();
        let total = q.pow(m.rows() as u32);
        for mut idx in 0..total {
            let coeffs: Vec<u64> = (0..m.rows())
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    c
                })
                .collect();
            out.insert(m.left_mul(&coeffs));
        }
        out
    }

    #[test]
    fn ring_construction() {
        assert!(ChainRing::new(4, 1).is_err());
        assert!(ChainRing::new(2, 0).is_err());
        assert!(ChainRing::new(2, 32).is_err());
        assert!(ChainRing::new(2, 31).is_ok());
        assert_eq!(z(5, 3).modulus(), 125);
    }

    #[test]
    fn valuation_examples() {
        let r = z(2, 3);
        assert_eq!(r.valuation(0), 3);
        assert_eq!(r.valuation(4), 2);
        assert_eq!(r.valuation(6), 1);
        assert_eq!(r.valuation(5), 0);
    }

    #[test]
    fn unit_inverse_examples() {
        let r = z(2, 3);
        assert_eq!(r.unit_inverse(1).unwrap(), 1);
        assert_eq!(r.unit_inverse(3).unwrap(), 3);
        assert_eq!(r.unit_inverse(2), Err(Error::NotAUnit(2)));
    }

    #[test]
    fn unit_inverse_exhaustive() {
        for p in [2, 3, 5] {
            for e in 1..=3 {
                let r = z(p, e);
                for x in 0..r.modulus() {
                    match r.unit_inverse(x) {
                        Ok(y) => assert_eq!(r.mul(x, y), 1),
                        Err(_) => assert_eq!(x % p, 0),
                    }
                }
            }
        }
    }

    #[test]
    fn howell_examples() {
        let r = z(2, 2);
        let a = mat(r, 2, &[&[2, 0], &[0, 1]]);
        assert_eq!(howell_form(&a), a);
        let b = mat(r, 2, &[&[1, 3], &[0, 2]]);
        assert_eq!(howell_form(&b), mat(r, 2, &[&[1, 1], &[0, 2]]));
        let c = mat(r, 2, &[&[2, 2]]);
        assert_eq!(howell_form(&c), c);
    }

    #[test]
    fn howell_adds_closure_rows() {
        // span of (2,1) over Z/4 contains 2*(2,1) = (0,2)
        let r = z(2, 2);
        let h = howell_form(&mat(r, 2, &[&[2, 1]]));
        assert_eq!(h, mat(r, 2, &[&[2, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_examples() {
        let r = z(2, 2);
        assert_eq!(solve_kernel(&ResidueMatrix::identity(r, 2)).rows(), 0);
        assert_eq!(solve_kernel(&mat(r, 1, &[&[2]])), mat(r, 1, &[&[2]]));
        assert_eq!(solve_kernel(&mat(r, 2, &[&[2, 0], &[0, 1]])), mat(r, 2, &[&[2, 0]]));
    }

    #[test]
    fn particular_examples() {
        let r = z(2, 2);
        assert_eq!(solve_particular(&ResidueMatrix::identity(r, 2), &[3, 1]), Some(vec![3, 1]));
        let a = mat(r, 1, &[&[2]]);
        assert_eq!(solve_particular(&a, &[1]), None);
        let x = solve_particular(&a, &[2]).unwrap();
        assert!(x == vec![1] || x == vec![3]);
    }

    #[test]
    fn howell_span_exhaustive_small() {
        for (p, e) in [(2, 2), (3, 2)] {
            let r = z(p, e);
            let q = r.modulus();
            // all 2x2 matrices
            for idx in 0..q.pow(4) {
                let d: Vec<u64> = (0..4).map(|i| (idx / q.pow(i)) % q).collect();
                let m = mat(r, 2, &[&d[0..2], &d[2..4]]);
                let h = howell_form(&m);
                let sm = span(&m);
                assert_eq!(sm, span(&h), "{m:?}");
                assert_eq!(sm.len() as u64, p.pow(howell_span_log(&h)));
                let ker = solve_kernel(&m);
                let ks = span(&ker);
                for x in span(&ResidueMatrix::identity(r, 2)) {
                    let zero = m.left_mul(&x).iter().all(|&v| v == 0);
                    assert_eq!(zero, ks.contains(&x));
                }
            }
        }
    }

    #[test]
    fn smith_transform_diagonalises() {
        let r = z(3, 2);
        let a = mat(r, 3, &[&[3, 6, 1], &[0, 3, 3], &[6, 0, 2]]);
        let s = smith_form(&a);
        assert_eq!(s.col_ops.mul(&s.col_ops_inv), ResidueMatrix::identity(r, 3));
        let av = a.mul(&s.col_ops);
        // the row span of A·V equals the span of the diagonal
        let mut d = ResidueMatrix::zeros(r, 3, 3);
        for t in 0..3 {
            d.set(t, t, r.pow(s.diag[t]));
        }
        assert_eq!(howell_form(&av), howell_form(&d));
    }

    #[test]
    fn diagonal_basis_coordinates() {
        let r = z(2, 3);
        let m = mat(r, 3, &[&[2, 4, 0], &[0, 2, 6], &[4, 4, 4]]);
        let b = DiagonalBasis::new(&m);
        let s = span(&m);
        assert_eq!(s.len() as u64, 2u64.pow(b.order_log()));
        for v in &s {
            let c = b.coords(v).expect("in span");
            assert_eq!(&b.combine(&c), v);
        }
        assert!(b.coords(&[1, 0, 0]).is_none());
    }
}
