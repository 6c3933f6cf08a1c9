//! Finite modules ⊕ Z/p^{a_j} over Z/p^e, their submodules and subquotients.
//!
//! Coordinate j of an element lives in Z/p^{a_j}. For linear algebra it is
//! embedded into Z/p^e by multiplying with p^{e-a_j}, so one Howell engine
//! over Z/p^e handles mixed exponents.

use serde::Serialize;

use crate::arith::{
    howell_form, howell_span_log, smith_form, solve_kernel, ChainRing, ResidueMatrix, RowSolver,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FModule {
    ring: ChainRing,
    exponents: Vec<u32>,
}

impl FModule {
    pub fn new(ring: ChainRing, exponents: Vec<u32>) -> Result<Self> {
        for &a in &exponents {
            if a == 0 || a > ring.e() {
                return Err(Error::ExponentOutOfRange { exponent: a, max: ring.e() });
            }
        }
        let log: u32 = exponents.iter().sum();
        if ring.p().checked_pow(log).is_none() {
            return Err(Error::OrderTooLarge(log));
        }
        Ok(FModule { ring, exponents })
    }

    pub fn zero(ring: ChainRing) -> Self {
        FModule { ring, exponents: Vec::new() }
    }

    pub fn ring(&self) -> ChainRing {
        self.ring
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// log_p of the order.
    pub fn order_log(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> u64 {
        self.ring.p().pow(self.order_log())
    }

    /// p^{a_j}, the order of the j-th generator.
    pub fn coord_modulus(&self, j: usize) -> u64 {
        self.ring.pow(self.exponents[j])
    }

    pub fn check_element(&self, x: &[u64]) -> Result<()> {
        let ok = x.len() == self.rank()
            && x.iter().enumerate().all(|(j, &v)| v < self.coord_modulus(j));
        if ok {
            Ok(())
        } else {
            Err(Error::BadElement { coords: x.to_vec(), exponents: self.exponents.clone() })
        }
    }

    /// Reduces arbitrary integer coordinates into canonical range.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        x.iter().enumerate().map(|(j, &v)| v % self.coord_modulus(j)).collect()
    }

    pub fn zero_element(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        (0..self.rank()).map(|j| (x[j] + y[j]) % self.coord_modulus(j)).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        (0..self.rank())
            .map(|j| {
                let m = self.coord_modulus(j);
                (m - x[j] % m) % m
            })
            .collect()
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Vec<u64> {
        (0..self.rank()).map(|j| self.ring.mul(c, x[j]) % self.coord_modulus(j)).collect()
    }

    pub fn embed(&self, x: &[u64]) -> Vec<u64> {
        let e = self.ring.e();
        x.iter()
            .zip(&self.exponents)
            .map(|(&v, &a)| self.ring.mul(v, self.ring.pow(e - a)))
            .collect()
    }

    pub fn unembed(&self, v: &[u64]) -> Vec<u64> {
        let e = self.ring.e();
        v.iter()
            .zip(&self.exponents)
            .map(|(&w, &a)| {
                let s = self.ring.pow(e - a);
                debug_assert_eq!(w % s, 0, "vector outside the embedded module");
                w / s
            })
            .collect()
    }

    /// The j-th standard generator.
    pub fn basis_element(&self, j: usize) -> Vec<u64> {
        let mut x = self.zero_element();
        x[j] = 1;
        x
    }

    /// Every element, in mixed-radix order. Intended for small modules.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = self.order();
        (0..total).map(move |mut idx| {
            (0..self.rank())
                .map(|j| {
                    let m = self.coord_modulus(j);
                    let c = idx % m;
                    idx /= m;
                    c
                })
                .collect()
        })
    }

    /// Image of `x` under the homomorphism sending generator j to `images[j]`
    /// (elements of `self`).
    pub fn linear_image(&self, images: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        let mut out = self.zero_element();
        for (&c, img) in x.iter().zip(images) {
            if c != 0 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o = (*o + self.ring.mul(c, img[k])) % self.coord_modulus(k);
                }
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &FModule) -> Result<FModule> {
        if self.ring != other.ring {
            return Err(Error::ParentMismatch);
        }
        let mut exponents = self.exponents.clone();
        exponents.extend_from_slice(&other.exponents);
        FModule::new(self.ring, exponents)
    }
}

/// A direct sum with its coordinate blocks, giving the canonical injections
/// and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FModule,
    pub offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(ring: ChainRing, parts: &[&FModule]) -> Result<Self> {
        let mut exponents = Vec::new();
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        for m in parts {
            if m.ring() != ring {
                return Err(Error::ParentMismatch);
            }
            offsets.push(exponents.len());
            exponents.extend_from_slice(m.exponents());
        }
        offsets.push(exponents.len());
        Ok(DirectSum { module: FModule::new(ring, exponents)?, offsets })
    }

    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn inject(&self, k: usize, x: &[u64]) -> Vec<u64> {
        let mut out = self.module.zero_element();
        out[self.block(k)].copy_from_slice(x);
        out
    }

    pub fn project(&self, k: usize, x: &[u64]) -> Vec<u64> {
        x[self.block(k)].to_vec()
    }
}

/// A submodule, stored as the Howell form of its embedded generators.
/// Equal submodules have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    parent: FModule,
    basis: ResidueMatrix,
}

impl Submodule {
    pub fn zero(parent: &FModule) -> Self {
        Submodule { parent: parent.clone(), basis: ResidueMatrix::zeros(parent.ring(), 0, parent.rank()) }
    }

    pub fn whole(parent: &FModule) -> Self {
        let gens: Vec<Vec<u64>> = (0..parent.rank()).map(|j| parent.basis_element(j)).collect();
        Self::from_generators(parent, &gens).expect("standard generators")
    }

    pub fn from_generators<G: AsRef<[u64]>>(parent: &FModule, gens: &[G]) -> Result<Self> {
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            parent.check_element(g.as_ref())?;
            rows.push(parent.embed(g.as_ref()));
        }
        Ok(Self::from_embedded(parent, ResidueMatrix::from_rows(parent.ring(), parent.rank(), &rows)?))
    }

    fn from_embedded(parent: &FModule, m: ResidueMatrix) -> Self {
        Submodule { parent: parent.clone(), basis: howell_form(&m) }
    }

    pub fn parent(&self) -> &FModule {
        &self.parent
    }

    /// Howell basis in embedded coordinates.
    pub fn basis(&self) -> &ResidueMatrix {
        &self.basis
    }

    /// Howell basis rows as elements of the parent.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.basis.row_iter().map(|r| self.parent.unembed(r)).collect()
    }

    pub fn order_log(&self) -> u32 {
        howell_span_log(&self.basis)
    }

    pub fn order(&self) -> u64 {
        self.parent.ring().p().pow(self.order_log())
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    fn same_parent(&self, other: &Submodule) -> Result<()> {
        if self.parent == other.parent {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn contains(&self, x: &[u64]) -> Result<bool> {
        self.parent.check_element(x)?;
        Ok(RowSolver::new(&self.basis).solve(&self.parent.embed(x)).is_some())
    }

    pub fn leq(&self, other: &Submodule) -> Result<bool> {
        self.same_parent(other)?;
        let solver = RowSolver::new(&other.basis);
        Ok(self.basis.row_iter().all(|r| solver.solve(r).is_some()))
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.same_parent(other)?;
        Ok(Self::from_embedded(&self.parent, self.basis.vstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.same_parent(other)?;
        // (x, y) with x·S + y·T = 0 gives x·S in both
        let stacked = self.basis.vstack(&other.basis);
        let kernel = solve_kernel(&stacked);
        let left = kernel.column_block(0, self.basis.rows());
        Ok(Self::from_embedded(&self.parent, left.mul(&self.basis)))
    }

    /// Every element, by enumerating Howell coefficient ranges. Small sizes only.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let ring = self.parent.ring();
        let ranges: Vec<u64> =
            self.basis.row_iter().map(|r| ring.modulus() / ring.pow(ring.valuation(r[crate::arith::leading_column(r).unwrap()]))).collect();
        let total: u64 = ranges.iter().product();
        (0..total)
            .map(|mut idx| {
                let coeffs: Vec<u64> = ranges
                    .iter()
                    .map(|&m| {
                        let c = idx % m;
                        idx /= m;
                        c
                    })
                    .collect();
                self.parent.unembed(&self.basis.left_mul(&coeffs))
            })
            .collect()
    }
}

/// The subquotient `top / bottom` of a module, with a cyclic decomposition
/// ⊕ Z/p^{d_t}, a projection from `top`, and recorded generator lifts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subquotient {
    parent: FModule,
    top: Submodule,
    bottom: Submodule,
    exponents: Vec<u32>,
    // coefficient vector (w.r.t. top basis rows) -> quotient coordinate t
    projection: ResidueMatrix,
    lifts: Vec<Vec<u64>>,
}

impl Subquotient {
    pub fn new(top: &Submodule, bottom: &Submodule) -> Result<Self> {
        top.same_parent(bottom)?;
        if !bottom.leq(top)? {
            return Err(Error::NotIncreasing { index: 0 });
        }
        let parent = top.parent().clone();
        let ring = parent.ring();
        let m = top.basis.rows();
        let kernel = solve_kernel(&top.basis.vstack(&bottom.basis));
        let relations = kernel.column_block(0, m);
        let smith = smith_form(&relations);

        let mut exponents = Vec::new();
        let mut columns = Vec::new();
        let mut lifts = Vec::new();
        for t in 0..m {
            let d = if t < relations.rows() { smith.diag[t] } else { ring.e() };
            if d == 0 {
                continue;
            }
            exponents.push(d);
            columns.push(t);
            let lift = top.basis.left_mul(smith.col_ops_inv.row(t));
            lifts.push(parent.unembed(&lift));
        }
        let mut projection = ResidueMatrix::zeros(ring, m, columns.len());
        for r in 0..m {
            for (out, &t) in columns.iter().enumerate() {
                projection.set(r, out, smith.col_ops.get(r, t));
            }
        }
        Ok(Subquotient { parent, top: top.clone(), bottom: bottom.clone(), exponents, projection, lifts })
    }

    /// The quotient of the whole parent by `s`.
    pub fn quotient(s: &Submodule) -> Result<Self> {
        Self::new(&Submodule::whole(s.parent()), s)
    }

    pub fn parent(&self) -> &FModule {
        &self.parent
    }

    pub fn top(&self) -> &Submodule {
        &self.top
    }

    pub fn bottom(&self) -> &Submodule {
        &self.bottom
    }

    /// Exponents of the cyclic decomposition.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn order_log(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn as_module(&self) -> FModule {
        FModule::new(self.parent.ring(), self.exponents.clone()).expect("quotient exponents")
    }

    /// Elements of `top` mapping to the standard generators of the quotient.
    pub fn lifts(&self) -> &[Vec<u64>] {
        &self.lifts
    }

    /// Image of `x ∈ top` in the quotient coordinates.
    pub fn project(&self, x: &[u64]) -> Result<Vec<u64>> {
        self.parent.check_element(x)?;
        let solver = RowSolver::new(&self.top.basis);
        self.project_with(&solver, x)
    }

    /// Like [`Subquotient::project`], reusing a solver built from `top().basis()`.
    pub fn project_with(&self, solver: &RowSolver, x: &[u64]) -> Result<Vec<u64>> {
        let coeffs = solver.solve(&self.parent.embed(x)).ok_or(Error::NotInNumerator)?;
        let ring = self.parent.ring();
        Ok(self
            .projection
            .left_mul(&coeffs)
            .into_iter()
            .zip(&self.exponents)
            .map(|(v, &d)| v % ring.pow(d))
            .collect())
    }

    pub fn solver(&self) -> RowSolver {
        RowSolver::new(&self.top.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ring(p: u64, e: u32) -> ChainRing {
        ChainRing::new(p, e).unwrap()
    }

    fn set(s: &Submodule) -> BTreeSet<Vec<u64>> {
        s.elements().into_iter().collect()
    }

    /// Brute-force span of generators by closure under addition.
    fn brute_span(m: &FModule, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut out: BTreeSet<Vec<u64>> = [m.zero_element()].into();
        loop {
            let mut grown = out.clone();
            for x in &out {
                for g in gens {
                    grown.insert(m.add(x, g));
                }
            }
            if grown.len() == out.len() {
                return out;
            }
            out = grown;
        }
    }

    #[test]
    fn module_basics() {
        let r = ring(2, 2);
        let zero = FModule::new(r, vec![]).unwrap();
        assert_eq!(zero.order(), 1);
        let z4 = FModule::new(r, vec![2]).unwrap();
        assert_eq!(z4.order(), 4);
        let m = FModule::new(r, vec![2, 1]).unwrap();
        assert_eq!(m.add(&[1, 1], &[3, 1]), vec![0, 0]);
        assert!(FModule::new(r, vec![3]).is_err());
        assert!(FModule::new(r, vec![0]).is_err());
    }

    #[test]
    fn generator_examples() {
        let r = ring(2, 2);
        let z4 = FModule::new(r, vec![2]).unwrap();
        assert!(Submodule::from_generators::<Vec<u64>>(&z4, &[]).unwrap().is_zero());
        let two = Submodule::from_generators(&z4, &[vec![2]]).unwrap();
        assert_eq!(set(&two), [vec![0], vec![2]].into());

        let m = FModule::new(r, vec![2, 1]).unwrap();
        let a = Submodule::from_generators(&m, &[vec![2, 1], vec![2, 0]]).unwrap();
        let b = Submodule::from_generators(&m, &[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(set(&a), brute_span(&m, &[vec![0, 1], vec![2, 0]]));
        assert!(Submodule::from_generators(&m, &[vec![0, 2]]).is_err());
    }

    #[test]
    fn lattice_examples() {
        let r = ring(2, 2);
        let z4 = FModule::new(r, vec![2]).unwrap();
        let two = Submodule::from_generators(&z4, &[vec![2]]).unwrap();
        assert!(two.leq(&two).unwrap());
        assert_eq!(two.sum(&two).unwrap(), two);

        let r2 = ring(2, 1);
        let v = FModule::new(r2, vec![1, 1]).unwrap();
        let s = Submodule::from_generators(&v, &[vec![1, 0]]).unwrap();
        let t = Submodule::from_generators(&v, &[vec![1, 1]]).unwrap();
        assert!(s.intersect(&t).unwrap().is_zero());
        assert_eq!(s.sum(&t).unwrap(), Submodule::whole(&v));
        let other = Submodule::zero(&z4);
        assert_eq!(s.leq(&other), Err(Error::ParentMismatch));
    }

    #[test]
    fn quotient_examples() {
        let r = ring(2, 2);
        let z4 = FModule::new(r, vec![2]).unwrap();
        let whole = Submodule::whole(&z4);
        assert!(Subquotient::quotient(&whole).unwrap().is_zero());
        let two = Submodule::from_generators(&z4, &[vec![2]]).unwrap();
        assert_eq!(Subquotient::quotient(&two).unwrap().exponents(), &[1]);

        let m = FModule::new(r, vec![2, 1]).unwrap();
        let first = Submodule::from_generators(&m, &[vec![1, 0]]).unwrap();
        let q = Subquotient::quotient(&first).unwrap();
        assert_eq!(q.exponents(), &[1]);
        // lifts project to standard generators
        for (t, l) in q.lifts().iter().enumerate() {
            let mut unit = vec![0; q.exponents().len()];
            unit[t] = 1;
            assert_eq!(q.project(l).unwrap(), unit);
        }
    }

    #[test]
    fn subquotient_counts_cosets() {
        let r = ring(3, 2);
        let m = FModule::new(r, vec![2, 2, 1]).unwrap();
        let top = Submodule::from_generators(&m, &[vec![1, 3, 0], vec![0, 1, 1]]).unwrap();
        let bottom = Submodule::from_generators(&m, &[vec![3, 0, 0]]).unwrap().intersect(&top).unwrap();
        let sq = Subquotient::new(&top, &bottom).unwrap();
        assert_eq!(top.order(), bottom.order() * 3u64.pow(sq.order_log()));
        // projection is constant on cosets and separates them
        let bottom_set = set(&bottom);
        for x in top.elements() {
            for y in top.elements() {
                let diff = m.add(&x, &m.neg(&y));
                let same = bottom_set.contains(&diff);
                assert_eq!(same, sq.project(&x).unwrap() == sq.project(&y).unwrap());
            }
        }
    }

    #[test]
    fn direct_sum_blocks() {
        let r = ring(2, 2);
        let a = FModule::new(r, vec![2]).unwrap();
        let b = FModule::new(r, vec![1]).unwrap();
        let zero = FModule::zero(r);
        assert_eq!(a.direct_sum(&zero).unwrap(), a);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.exponents(), &[2, 1]);
        assert_eq!(s.order(), a.order() * b.order());
        let ds = DirectSum::new(r, &[&a, &b]).unwrap();
        assert_eq!(ds.inject(1, &[1]), vec![0, 1]);
        assert_eq!(ds.project(0, &[3, 1]), vec![3]);
    }
}
