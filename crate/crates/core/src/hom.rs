//! Chain-preserving morphisms, induced factor maps and the i-th
//! monogeny/epigeny class relations.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{howell_form, solve_kernel, ChainRing, DiagonalBasis, ResidueMatrix, RowSolver};
use crate::chain::{ChainObject, Factor};
use crate::error::{Error, Result};
use crate::fmodule::{FModule, Subquotient, Submodule};

/// A morphism of underlying modules, stored as the images of the source
/// generators (rows of target coordinates).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomElement {
    pub images: Vec<Vec<u64>>,
}

impl HomElement {
    pub fn zero(source: &FModule, target: &FModule) -> Self {
        HomElement { images: vec![target.zero_element(); source.rank()] }
    }

    pub fn identity(m: &FModule) -> Self {
        HomElement { images: (0..m.rank()).map(|j| m.basis_element(j)).collect() }
    }

    pub fn apply(&self, target: &FModule, x: &[u64]) -> Vec<u64> {
        target.linear_image(&self.images, x)
    }

    /// `then ∘ self`, where `then` maps into `target`.
    pub fn then(&self, then: &HomElement, target: &FModule) -> HomElement {
        HomElement { images: self.images.iter().map(|y| then.apply(target, y)).collect() }
    }

    pub fn add(&self, other: &HomElement, target: &FModule) -> HomElement {
        HomElement { images: self.images.iter().zip(&other.images).map(|(a, b)| target.add(a, b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    /// Whether the images are compatible with the generator orders.
    pub fn is_well_defined(&self, source: &FModule, target: &FModule) -> bool {
        let ring = source.ring();
        self.images.len() == source.rank()
            && self.images.iter().zip(source.exponents()).all(|(img, &a)| {
                target.check_element(img).is_ok() && target.scale(ring.pow(a), img).iter().all(|&x| x == 0)
            })
    }

    pub fn preserves_chain(&self, source: &ChainObject, target: &ChainObject) -> bool {
        (1..source.n()).all(|i| {
            source
                .level(i)
                .generators()
                .iter()
                .all(|g| target.level(i).contains(&self.apply(target.module(), g)).unwrap_or(false))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Mono,
    Epi,
}

impl ClassKind {
    pub const BOTH: [ClassKind; 2] = [ClassKind::Mono, ClassKind::Epi];

    pub fn letter(self) -> char {
        match self {
            ClassKind::Mono => 'm',
            ClassKind::Epi => 'e',
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Evaluates induced factor maps f_i for morphisms between two fixed objects.
#[derive(Clone, Debug)]
pub struct InducedEvaluator {
    target_module: FModule,
    lifts: Vec<Vec<Vec<u64>>>,
    factors: Vec<Subquotient>,
    solvers: Vec<RowSolver>,
}

impl InducedEvaluator {
    pub fn new(source: &ChainObject, target: &ChainObject) -> Self {
        let n = source.n();
        InducedEvaluator {
            target_module: target.module().clone(),
            lifts: (1..=n).map(|i| source.factor(i).lifts().to_vec()).collect(),
            factors: (1..=n).map(|i| target.factor(i).clone()).collect(),
            solvers: (1..=n).map(|i| target.factor(i).solver()).collect(),
        }
    }

    /// Row s is the image of the s-th generator of U^(i) in the coordinates of V^(i).
    pub fn map(&self, f: &HomElement, i: usize) -> Vec<Vec<u64>> {
        let q = &self.factors[i - 1];
        self.lifts[i - 1]
            .iter()
            .map(|l| {
                let y = f.apply(&self.target_module, l);
                q.project_with(&self.solvers[i - 1], &y).expect("chain-preserving morphism")
            })
            .collect()
    }
}

/// The image of Hom(M,N) → Hom(U^(i), V^(i)) for cyclic-or-zero factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InducedImage {
    pub level: usize,
    pub source_exponent: u32,
    pub target_exponent: u32,
    /// The ambient group is cyclic of order p^ambient_exponent.
    pub ambient_exponent: u32,
    /// The image is p^image_valuation times the ambient group.
    pub image_valuation: u32,
}

impl InducedImage {
    pub fn is_full(&self) -> bool {
        self.image_valuation == 0
    }

    pub fn has_injective(&self) -> bool {
        let (a, b) = (self.source_exponent, self.target_exponent);
        a == 0 || (b > 0 && a <= b && self.is_full())
    }

    pub fn has_surjective(&self) -> bool {
        let (a, b) = (self.source_exponent, self.target_exponent);
        b == 0 || (a > 0 && a >= b && self.is_full())
    }

    pub fn has(&self, kind: ClassKind) -> bool {
        match kind {
            ClassKind::Mono => self.has_injective(),
            ClassKind::Epi => self.has_surjective(),
        }
    }
}

/// Hom(M,N) in the chain category, as a subgroup of (Z/p^e)^{r·s} via
/// v_jk = image_jk · p^{e - b_k}.
#[derive(Clone, Debug)]
pub struct HomGroup {
    source: ChainObject,
    target: ChainObject,
    basis: ResidueMatrix,
    diag: DiagonalBasis,
    evaluator: InducedEvaluator,
}

pub fn hom_chain(m: &ChainObject, n: &ChainObject) -> Result<HomGroup> {
    HomGroup::new(m, n)
}

impl HomGroup {
    pub fn new(m: &ChainObject, n: &ChainObject) -> Result<Self> {
        if m.ring() != n.ring() {
            return Err(Error::ParentMismatch);
        }
        if m.n() != n.n() {
            return Err(Error::LengthMismatch { expected: m.n(), got: n.n() });
        }
        let ring = m.ring();
        let e = ring.e();
        let (a, b) = (m.module().exponents(), n.module().exponents());
        let (r, s) = (a.len(), b.len());
        let vars = r * s;
        let mins: Vec<u32> = (0..vars).map(|v| a[v / s].min(b[v % s])).collect();

        // Variables w_jk with image_jk = w_jk · p^{b_k - m_jk}; one column per
        // (level, generator of M^(i), coordinate of N / N^(i)).
        let mut columns: Vec<Vec<u64>> = Vec::new();
        for i in 1..m.n() {
            let quotient = Subquotient::quotient(n.level(i))?;
            if quotient.is_zero() {
                continue;
            }
            let solver = quotient.solver();
            let proj: Vec<Vec<u64>> = (0..s)
                .map(|k| quotient.project_with(&solver, &n.module().basis_element(k)))
                .collect::<Result<_>>()?;
            for x in m.level(i).generators() {
                for (t, &d) in quotient.exponents().iter().enumerate() {
                    let scale_t = ring.pow(e - d);
                    let col: Vec<u64> = (0..vars)
                        .map(|v| {
                            let (j, k) = (v / s, v % s);
                            let c = ring.mul(x[j], ring.pow(b[k] - mins[v]));
                            ring.mul(ring.mul(c, proj[k][t]), scale_t)
                        })
                        .collect();
                    columns.push(col);
                }
            }
        }
        let mut constraints = ResidueMatrix::zeros(ring, vars, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (v, &x) in col.iter().enumerate() {
                constraints.set(v, c, x);
            }
        }
        let kernel = if columns.is_empty() { ResidueMatrix::identity(ring, vars) } else { solve_kernel(&constraints) };
        let scaled: Vec<Vec<u64>> = kernel
            .row_iter()
            .map(|w| w.iter().zip(&mins).map(|(&x, &mv)| ring.mul(x, ring.pow(e - mv))).collect())
            .collect();
        let basis = howell_form(&ResidueMatrix::from_rows(ring, vars, &scaled)?);
        let diag = DiagonalBasis::new(&basis);
        Ok(HomGroup { source: m.clone(), target: n.clone(), basis, diag, evaluator: InducedEvaluator::new(m, n) })
    }

    pub fn source(&self) -> &ChainObject {
        &self.source
    }

    pub fn target(&self) -> &ChainObject {
        &self.target
    }

    fn ring(&self) -> ChainRing {
        self.source.ring()
    }

    /// Canonical (Howell) generating set in embedded coordinates.
    pub fn basis(&self) -> &ResidueMatrix {
        &self.basis
    }

    pub fn diagonal(&self) -> &DiagonalBasis {
        &self.diag
    }

    pub fn order_log(&self) -> u32 {
        self.diag.order_log()
    }

    /// Group order, if it fits.
    pub fn order(&self) -> Option<u128> {
        (self.ring().p() as u128).checked_pow(self.order_log())
    }

    pub fn embed(&self, f: &HomElement) -> Vec<u64> {
        let ring = self.ring();
        let b = self.target.module().exponents();
        f.images
            .iter()
            .flat_map(|row| row.iter().zip(b).map(move |(&y, &bk)| ring.mul(y, ring.pow(ring.e() - bk))))
            .collect()
    }

    pub fn from_vector(&self, v: &[u64]) -> HomElement {
        let ring = self.ring();
        let b = self.target.module().exponents();
        let s = b.len();
        let images = (0..self.source.module().rank())
            .map(|j| (0..s).map(|k| v[j * s + k] / ring.pow(ring.e() - b[k])).collect())
            .collect();
        HomElement { images }
    }

    pub fn contains(&self, f: &HomElement) -> bool {
        f.is_well_defined(self.source.module(), self.target.module()) && self.diag.coords(&self.embed(f)).is_some()
    }

    /// Linear coordinates with respect to [`HomGroup::generators`].
    pub fn coords(&self, f: &HomElement) -> Option<Vec<u64>> {
        self.diag.coords(&self.embed(f))
    }

    pub fn combine(&self, coords: &[u64]) -> HomElement {
        self.from_vector(&self.diag.combine(coords))
    }

    /// Direct-sum basis of the group.
    pub fn generators(&self) -> Vec<HomElement> {
        self.diag.generators().iter().map(|g| self.from_vector(g)).collect()
    }

    pub fn index_of(&self, f: &HomElement) -> Option<u128> {
        self.coords(f).map(|c| self.diag.index_of_coords(&c))
    }

    pub fn element_at(&self, idx: u128) -> HomElement {
        self.combine(&self.diag.coords_of_index(idx))
    }

    /// All elements, provided the order does not exceed `cap`.
    pub fn elements(&self, cap: u128) -> Result<impl Iterator<Item = HomElement> + '_> {
        let order = self.checked_order(cap)?;
        Ok((0..order).map(move |i| self.element_at(i)))
    }

    pub fn checked_order(&self, cap: u128) -> Result<u128> {
        match self.order() {
            Some(o) if o <= cap => Ok(o),
            o => Err(Error::CapExceeded { what: "hom group order", size: o.unwrap_or(u128::MAX), cap }),
        }
    }

    pub fn evaluator(&self) -> &InducedEvaluator {
        &self.evaluator
    }

    pub fn induced_map(&self, f: &HomElement, i: usize) -> Vec<Vec<u64>> {
        self.evaluator.map(f, i)
    }

    pub fn induced_image(&self, i: usize) -> Result<InducedImage> {
        let a = factor_exponent(&self.source, i)?;
        let b = factor_exponent(&self.target, i)?;
        let m = a.min(b);
        let ring = self.ring();
        let mut best = m;
        if m > 0 {
            for g in self.generators() {
                let x = self.induced_map(&g, i)[0][0];
                let val_b = if x == 0 { b } else { ring.valuation(x) };
                best = best.min(val_b - (b - m));
                if best == 0 {
                    break;
                }
            }
        }
        Ok(InducedImage { level: i, source_exponent: a, target_exponent: b, ambient_exponent: m, image_valuation: best })
    }

    pub fn induced_images(&self) -> Result<Vec<InducedImage>> {
        (1..=self.source.n()).map(|i| self.induced_image(i)).collect()
    }
}

/// Whether the map Z/p^a → Z/p^b given by 1 ↦ x is injective (Mono) or
/// surjective (Epi); exponent 0 stands for the zero module.
pub fn cyclic_map_is(ring: ChainRing, kind: ClassKind, a: u32, b: u32, x: u64) -> bool {
    let val = if x == 0 { b } else { ring.valuation(x).min(b) };
    match kind {
        ClassKind::Mono => a == 0 || (a <= b && val == b - a),
        ClassKind::Epi => b == 0 || (a >= b && val == 0),
    }
}

pub(crate) fn factor_exponent(obj: &ChainObject, i: usize) -> Result<u32> {
    match Factor::of_subquotient(obj.factor(i)) {
        Factor::Decomposable(exponents) => Err(Error::NonUniserialFactor { index: i, exponents }),
        f => Ok(f.exponent().unwrap()),
    }
}

pub fn exists_injective_induced(m: &ChainObject, n: &ChainObject, i: usize) -> Result<bool> {
    Ok(hom_chain(m, n)?.induced_image(i)?.has_injective())
}

pub fn exists_surjective_induced(m: &ChainObject, n: &ChainObject, i: usize) -> Result<bool> {
    Ok(hom_chain(m, n)?.induced_image(i)?.has_surjective())
}

/// [M]_{i,a} = [N]_{i,a}.
pub fn same_class(m: &ChainObject, n: &ChainObject, i: usize, kind: ClassKind) -> Result<bool> {
    let there = hom_chain(m, n)?.induced_image(i)?;
    let back = hom_chain(n, m)?.induced_image(i)?;
    Ok(there.has(kind) && back.has(kind))
}

/// Per-level existence of injective / surjective induced maps M → N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reach {
    pub injective: Vec<bool>,
    pub surjective: Vec<bool>,
}

impl Reach {
    pub fn of(h: &HomGroup) -> Result<Self> {
        let images = h.induced_images()?;
        Ok(Reach {
            injective: images.iter().map(|x| x.has_injective()).collect(),
            surjective: images.iter().map(|x| x.has_surjective()).collect(),
        })
    }

    pub fn get(&self, i: usize, kind: ClassKind) -> bool {
        match kind {
            ClassKind::Mono => self.injective[i - 1],
            ClassKind::Epi => self.surjective[i - 1],
        }
    }
}

/// All pairwise class relations among a list of objects.
#[derive(Clone, Debug)]
pub struct ClassTable {
    n: usize,
    count: usize,
    // reach[x][y] describes Hom(objs[x], objs[y]).
    reach: Vec<Vec<Reach>>,
}

impl ClassTable {
    pub fn new(objs: &[&ChainObject]) -> Result<Self> {
        let count = objs.len();
        let n = objs.first().map_or(0, |o| o.n());
        for o in objs {
            o.require_uniserial_factors()?;
        }
        let pairs: Vec<(usize, usize)> = (0..count).flat_map(|x| (0..count).map(move |y| (x, y))).collect();
        let computed: Vec<Reach> = pairs
            .par_iter()
            .map(|&(x, y)| {
                if x == y {
                    Ok(Reach { injective: vec![true; n], surjective: vec![true; n] })
                } else {
                    Reach::of(&hom_chain(objs[x], objs[y])?)
                }
            })
            .collect::<Result<_>>()?;
        let mut it = computed.into_iter();
        let reach = (0..count).map(|_| (0..count).map(|_| it.next().unwrap()).collect()).collect();
        Ok(ClassTable { n, count, reach })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn reaches(&self, x: usize, y: usize, i: usize, kind: ClassKind) -> bool {
        self.reach[x][y].get(i, kind)
    }

    pub fn same(&self, x: usize, y: usize, i: usize, kind: ClassKind) -> bool {
        self.reaches(x, y, i, kind) && self.reaches(y, x, i, kind)
    }

    /// Classes as sorted index lists, ordered by their smallest member.
    pub fn partition(&self, i: usize, kind: ClassKind) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.count).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for x in 0..self.count {
            for y in x + 1..self.count {
                if self.same(x, y, i, kind) {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    if rx != ry {
                        parent[rx.max(ry)] = rx.min(ry);
                    }
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.count];
        for x in 0..self.count {
            let r = find(&mut parent, x);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(x);
        }
        classes
    }
}

pub fn class_partition(objs: &[&ChainObject], i: usize, kind: ClassKind) -> Result<Vec<Vec<usize>>> {
    Ok(ClassTable::new(objs)?.partition(i, kind))
}

/// Every morphism of underlying modules that preserves the chains, by
/// enumerating all module homomorphisms.
pub fn brute_force_hom(m: &ChainObject, n: &ChainObject, cap: u128) -> Result<Vec<HomElement>> {
    let ring = m.ring();
    let (a, b) = (m.module().exponents(), n.module().exponents());
    let mut choices: Vec<(u64, u64)> = Vec::new();
    let mut total: u128 = 1;
    for &aj in a {
        for &bk in b {
            let step = ring.pow(bk - aj.min(bk));
            let count = ring.pow(bk) / step;
            choices.push((step, count));
            total = total.saturating_mul(count as u128);
        }
    }
    if total > cap {
        return Err(Error::CapExceeded { what: "ambient hom enumeration", size: total, cap });
    }
    let s = b.len();
    let mut out = Vec::new();
    let mut digits = vec![0u64; choices.len()];
    for _ in 0..total {
        let images =
            (0..a.len()).map(|j| (0..s).map(|k| digits[j * s + k] * choices[j * s + k].0).collect()).collect();
        let f = HomElement { images };
        if f.preserves_chain(m, n) {
            out.push(f);
        }
        for (d, &(_, count)) in digits.iter_mut().zip(&choices) {
            *d += 1;
            if *d < count {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Whether the map given by `rows` (images of the generators of `u` in `v`)
/// is injective, by enumerating `u`.
pub fn map_is_injective(u: &FModule, v: &FModule, rows: &[Vec<u64>]) -> bool {
    u.elements().all(|x| x.iter().all(|&c| c == 0) || v.linear_image(rows, &x).iter().any(|&c| c != 0))
}

pub fn map_is_surjective(v: &FModule, rows: &[Vec<u64>]) -> bool {
    Submodule::from_generators(v, rows).map(|s| s == Submodule::whole(v)).unwrap_or(false)
}

/// Existence of an induced map of the given kind at level i, by enumerating
/// the whole hom group.
pub fn brute_exists_induced(h: &HomGroup, i: usize, kind: ClassKind, cap: u128) -> Result<bool> {
    let u = h.source().factor(i).as_module();
    let v = h.target().factor(i).as_module();
    for f in h.elements(cap)? {
        let rows = h.induced_map(&f, i);
        let ok = match kind {
            ClassKind::Mono => map_is_injective(&u, &v, &rows),
            ClassKind::Epi => map_is_surjective(&v, &rows),
        };
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn brute_same_class(m: &ChainObject, n: &ChainObject, i: usize, kind: ClassKind, cap: u128) -> Result<bool> {
    Ok(brute_exists_induced(&hom_chain(m, n)?, i, kind, cap)? && brute_exists_induced(&hom_chain(n, m)?, i, kind, cap)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::split_chain;
    use std::collections::HashSet;

    fn ring(p: u64, e: u32) -> ChainRing {
        ChainRing::new(p, e).unwrap()
    }

    fn example_pair() -> (ChainObject, ChainObject) {
        let r = ring(2, 2);
        let z4 = FModule::new(r, vec![2]).unwrap();
        let v = FModule::new(r, vec![1, 1]).unwrap();
        let m = ChainObject::from_generators(&z4, &[vec![vec![2]]]).unwrap();
        let n = ChainObject::from_generators(&v, &[vec![vec![1, 0]]]).unwrap();
        (m, n)
    }

    #[test]
    fn hom_examples() {
        let (m, n) = example_pair();
        let h = hom_chain(&m, &n).unwrap();
        assert_eq!(h.order(), Some(4));
        for f in h.elements(16).unwrap() {
            assert!(f.apply(n.module(), &[2]).iter().all(|&x| x == 0));
            assert!(h.induced_map(&f, 1).iter().flatten().all(|&x| x == 0));
        }
        let id = HomElement::identity(m.module());
        assert!(hom_chain(&m, &m).unwrap().contains(&id));
        let zero = ChainObject::zero(m.ring(), 2);
        assert_eq!(hom_chain(&m, &zero).unwrap().order(), Some(1));
        assert_eq!(hom_chain(&zero, &m).unwrap().order(), Some(1));
    }

    #[test]
    fn induced_image_examples() {
        let (m, n) = example_pair();
        let img = hom_chain(&m, &n).unwrap().induced_image(1).unwrap();
        assert_eq!(img.image_valuation, 1);
        assert_eq!(img.ambient_exponent, 1);
        assert!(!img.has_injective());
        let own = hom_chain(&m, &m).unwrap();
        for i in 1..=2 {
            assert!(own.induced_image(i).unwrap().is_full());
            let id = HomElement::identity(m.module());
            assert_eq!(own.induced_map(&id, i), vec![vec![1]]);
        }
        let r = ring(2, 2);
        let z2 = FModule::new(r, vec![1]).unwrap();
        let c = ChainObject::from_generators(&z2, &[vec![vec![1]]]).unwrap();
        let img = hom_chain(&c, &c).unwrap().induced_image(2).unwrap();
        assert_eq!((img.ambient_exponent, img.image_valuation), (0, 0));
        assert!(img.has_injective() && img.has_surjective());
    }

    #[test]
    fn class_examples() {
        let (m, n) = example_pair();
        assert!(!same_class(&m, &n, 1, ClassKind::Mono).unwrap());
        assert!(same_class(&m, &m, 1, ClassKind::Mono).unwrap());
        assert!(!exists_injective_induced(&m, &n, 1).unwrap());
        let r = ring(2, 2);
        let z2 = FModule::new(r, vec![1]).unwrap();
        let z4 = FModule::new(r, vec![2]).unwrap();
        let x = split_chain(r, &[z2.clone(), z4.clone()]).unwrap();
        let y = split_chain(r, &[z4, z2]).unwrap();
        assert!(!same_class(&x, &y, 1, ClassKind::Mono).unwrap());
        assert!(!exists_injective_induced(&y, &x, 1).unwrap());
        assert_eq!(class_partition(&[&m, &n], 1, ClassKind::Mono).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(class_partition(&[&m, &m, &m], 2, ClassKind::Epi).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn hom_matches_ambient_enumeration() {
        use crate::random::random_object;
        for (p, e) in [(2, 2), (3, 2), (2, 3)] {
            let r = ring(p, e);
            for seed in 0..12 {
                let m = random_object(r, 2, 64, seed).unwrap();
                let n = random_object(r, 2, 64, seed + 100).unwrap();
                let h = hom_chain(&m, &n).unwrap();
                let brute = brute_force_hom(&m, &n, 1 << 20).unwrap();
                assert_eq!(h.order(), Some(brute.len() as u128), "p={p} e={e} seed={seed}");
                let from_group: HashSet<HomElement> = h.elements(1 << 20).unwrap().collect();
                assert!(brute.iter().all(|f| from_group.contains(f)));
            }
        }
    }

    #[test]
    fn closed_form_matches_enumeration() {
        use crate::random::random_object;
        let r = ring(2, 2);
        for seed in 0..40 {
            let m = random_object(r, 2, 32, seed).unwrap();
            let n = random_object(r, 2, 32, seed + 1000).unwrap();
            let h = hom_chain(&m, &n).unwrap();
            for i in 1..=2 {
                let img = h.induced_image(i).unwrap();
                for kind in ClassKind::BOTH {
                    assert_eq!(img.has(kind), brute_exists_induced(&h, i, kind, 1 << 16).unwrap());
                }
            }
        }
    }

    #[test]
    fn decomposable_factor_is_rejected() {
        let r = ring(2, 1);
        let v = FModule::new(r, vec![1, 1]).unwrap();
        let obj = ChainObject::new(&v, vec![Submodule::zero(&v)], 2).unwrap();
        assert!(matches!(hom_chain(&obj, &obj).unwrap().induced_image(2), Err(Error::NonUniserialFactor { .. })));
        assert!(ClassTable::new(&[&obj]).is_err());
    }
}
