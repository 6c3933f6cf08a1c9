//! The endomorphism ring E_M of a chain object as an explicit finite ring,
//! its level ideals I_{M,i,a}, Jacobson radical, semisimple quotient and the
//! ideals of the chain category associated to maximal level ideals.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::ChainRing;
use crate::chain::{direct_sum_all, ChainObject, Factor};
use crate::error::{Error, Result};
use crate::hom::{cyclic_map_is, hom_chain, ClassKind, HomElement, HomGroup, Reach};
use crate::report::Checklist;

pub const DEFAULT_ENDO_CAP: u128 = 65_536;
pub const DEFAULT_PAIR_CAP: usize = 4_096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndoConfig {
    /// Largest ring that is materialized at all.
    pub endo_cap: u128,
    /// Largest ring on which pairwise (product-table) checks run.
    pub pair_cap: usize,
}

impl Default for EndoConfig {
    fn default() -> Self {
        EndoConfig { endo_cap: DEFAULT_ENDO_CAP, pair_cap: DEFAULT_PAIR_CAP }
    }
}

#[derive(Clone, Debug)]
struct LevelData {
    factor: Factor,
    // f_i(generator t) as an element of End(Z/p^a) = Z/p^a.
    scalars: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IdealTag {
    Level { level: usize, kind: ClassKind },
    Radical,
    Maximal { index: usize },
    Associated { level: usize, kind: ClassKind },
}

/// A subset of the elements of an [`EndoRing`], indexed like the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealHandle {
    pub tag: IdealTag,
    pub members: Vec<bool>,
}

impl IdealHandle {
    pub fn order(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_whole(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    pub fn same_set(&self, other: &IdealHandle) -> bool {
        self.members == other.members
    }

    pub fn is_subset_of(&self, other: &IdealHandle) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }
}

/// E_M with elements indexed in mixed radix over a direct-sum basis of the
/// additive group.
#[derive(Clone, Debug)]
pub struct EndoRing {
    obj: ChainObject,
    hom: HomGroup,
    size: usize,
    radices: Vec<u64>,
    strides: Vec<usize>,
    // coords(g_s ∘ g_t)
    structure: Vec<Vec<Vec<u64>>>,
    levels: Vec<LevelData>,
    one: usize,
    table: Option<Vec<u16>>,
    pair_cap: usize,
}

pub fn endo_ring(m: &ChainObject, cfg: &EndoConfig) -> Result<EndoRing> {
    EndoRing::new(m, cfg)
}

impl EndoRing {
    pub fn new(m: &ChainObject, cfg: &EndoConfig) -> Result<Self> {
        let hom = hom_chain(m, m)?;
        let order = hom.order().unwrap_or(u128::MAX);
        if order > cfg.endo_cap {
            return Err(Error::CapExceeded { what: "endomorphism ring order", size: order, cap: cfg.endo_cap });
        }
        let size = order as usize;
        let gens = hom.generators();
        let radices = hom.diagonal().radices().to_vec();
        let mut strides = Vec::with_capacity(radices.len());
        let mut acc = 1usize;
        for &r in &radices {
            strides.push(acc);
            acc *= r as usize;
        }
        let module = m.module();
        let structure = gens
            .iter()
            .map(|gs| gens.iter().map(|gt| hom.coords(&gt.then(gs, module)).expect("closed under composition")).collect())
            .collect();
        let levels = (1..=m.n())
            .map(|i| {
                let factor = Factor::of_subquotient(m.factor(i));
                let scalars = match factor {
                    Factor::Cyclic(_) => gens.iter().map(|g| hom.induced_map(g, i)[0][0]).collect(),
                    _ => Vec::new(),
                };
                LevelData { factor, scalars }
            })
            .collect();
        let mut ring = EndoRing {
            obj: m.clone(),
            hom,
            size,
            radices,
            strides,
            structure,
            levels,
            one: 0,
            table: None,
            pair_cap: cfg.pair_cap,
        };
        ring.one = ring.index_of(&HomElement::identity(module)).expect("identity is chain-preserving");
        if size <= cfg.pair_cap && size <= u16::MAX as usize + 1 {
            ring.table = Some(ring.build_table());
        }
        Ok(ring)
    }

    fn build_table(&self) -> Vec<u16> {
        let size = self.size;
        let dim = self.radices.len();
        let mut table = vec![0u16; size * size];
        table.par_chunks_mut(size.max(1)).enumerate().for_each(|(x, row)| {
            let xc = self.coords(x);
            // w_t = coords(x ∘ g_t)
            let w: Vec<Vec<u64>> = (0..dim)
                .map(|t| {
                    let mut v = vec![0u64; dim];
                    for (s, &xs) in xc.iter().enumerate() {
                        if xs != 0 {
                            self.axpy(&mut v, xs, &self.structure[s][t]);
                        }
                    }
                    v
                })
                .collect();
            let mut acc = vec![0u64; dim];
            let mut digits = vec![0u64; dim];
            for slot in row.iter_mut() {
                *slot = self.index_of_coords(&acc) as u16;
                for t in 0..dim {
                    digits[t] += 1;
                    self.axpy(&mut acc, 1, &w[t]);
                    if digits[t] < self.radices[t] {
                        break;
                    }
                    digits[t] = 0;
                }
            }
        });
        table
    }

    fn axpy(&self, acc: &mut [u64], c: u64, v: &[u64]) {
        for ((a, &x), &r) in acc.iter_mut().zip(v).zip(&self.radices) {
            *a = (*a + (c % r) * x % r) % r;
        }
    }

    pub fn object(&self) -> &ChainObject {
        &self.obj
    }

    pub fn hom(&self) -> &HomGroup {
        &self.hom
    }

    fn ring(&self) -> ChainRing {
        self.obj.ring()
    }

    pub fn order(&self) -> usize {
        self.size
    }

    pub fn n(&self) -> usize {
        self.obj.n()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn coords(&self, x: usize) -> Vec<u64> {
        self.radices.iter().zip(&self.strides).map(|(&r, &s)| ((x / s) as u64) % r).collect()
    }

    fn index_of_coords(&self, c: &[u64]) -> usize {
        c.iter().zip(&self.strides).map(|(&v, &s)| v as usize * s).sum()
    }

    pub fn element(&self, x: usize) -> HomElement {
        self.hom.combine(&self.coords(x))
    }

    pub fn index_of(&self, f: &HomElement) -> Option<usize> {
        self.hom.coords(f).map(|c| self.index_of_coords(&c))
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let mut c = self.coords(x);
        self.axpy(&mut c, 1, &self.coords(y));
        self.index_of_coords(&c)
    }

    pub fn neg(&self, x: usize) -> usize {
        let c: Vec<u64> = self.coords(x).iter().zip(&self.radices).map(|(&v, &r)| (r - v) % r).collect();
        self.index_of_coords(&c)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// The product x·y = x ∘ y.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        if let Some(t) = &self.table {
            return t[x * self.size + y] as usize;
        }
        let (xc, yc) = (self.coords(x), self.coords(y));
        let mut acc = vec![0u64; self.radices.len()];
        for (s, &xs) in xc.iter().enumerate() {
            if xs == 0 {
                continue;
            }
            for (t, &yt) in yc.iter().enumerate() {
                if yt != 0 {
                    self.axpy(&mut acc, xs * yt, &self.structure[s][t]);
                }
            }
        }
        self.index_of_coords(&acc)
    }

    fn require_pairs(&self) -> Result<()> {
        if self.table.is_none() {
            return Err(Error::CapExceeded { what: "pairwise ring checks", size: self.size as u128, cap: self.pair_cap as u128 });
        }
        Ok(())
    }

    /// The induced endomorphism f_i of a cyclic factor, as a scalar.
    pub fn induced_scalar(&self, x: usize, i: usize) -> Option<u64> {
        let level = &self.levels[i - 1];
        let Factor::Cyclic(a) = level.factor else { return None };
        let q = self.ring().pow(a);
        let mut s = 0u64;
        for (c, &g) in self.coords(x).iter().zip(&level.scalars) {
            s = (s + (c % q) * g % q) % q;
        }
        Some(s)
    }

    /// I_{M,i,a}: endomorphisms whose i-th induced map is not injective (Mono)
    /// or not surjective (Epi). Empty when the i-th factor is zero.
    pub fn ideal_i(&self, i: usize, kind: ClassKind) -> Result<IdealHandle> {
        let ring = self.ring();
        let members = match &self.levels[i - 1].factor {
            Factor::Decomposable(exponents) => {
                return Err(Error::NonUniserialFactor { index: i, exponents: exponents.clone() })
            }
            Factor::Zero => vec![false; self.size],
            Factor::Cyclic(a) => (0..self.size)
                .into_par_iter()
                .map(|x| !cyclic_map_is(ring, kind, *a, *a, self.induced_scalar(x, i).unwrap()))
                .collect(),
        };
        Ok(IdealHandle { tag: IdealTag::Level { level: i, kind }, members })
    }

    /// All 2n level ideals in the order (1,m), (1,e), (2,m), ...
    pub fn level_ideals(&self) -> Result<Vec<IdealHandle>> {
        let mut out = Vec::with_capacity(2 * self.n());
        for i in 1..=self.n() {
            for kind in ClassKind::BOTH {
                out.push(self.ideal_i(i, kind)?);
            }
        }
        Ok(out)
    }

    pub fn is_additive_subgroup(&self, members: &[bool]) -> Result<bool> {
        self.require_pairs()?;
        if !members[0] {
            return Ok(false);
        }
        let inside: Vec<usize> = (0..self.size).filter(|&x| members[x]).collect();
        Ok(inside.par_iter().all(|&x| inside.iter().all(|&y| members[self.sub(x, y)])))
    }

    pub fn is_two_sided(&self, members: &[bool]) -> Result<bool> {
        self.require_pairs()?;
        let inside: Vec<usize> = (0..self.size).filter(|&x| members[x]).collect();
        Ok((0..self.size)
            .into_par_iter()
            .all(|x| inside.iter().all(|&m| members[self.mul(x, m)] && members[self.mul(m, x)])))
    }

    pub fn is_completely_prime(&self, ideal: &IdealHandle) -> Result<bool> {
        self.require_pairs()?;
        if ideal.contains(self.one) {
            return Err(Error::NotProper);
        }
        let outside: Vec<usize> = (0..self.size).filter(|&x| !ideal.members[x]).collect();
        Ok(outside.par_iter().all(|&x| outside.iter().all(|&y| !ideal.members[self.mul(x, y)])))
    }

    /// Elements with a two-sided inverse, found by search.
    pub fn units(&self) -> Result<Vec<bool>> {
        self.require_pairs()?;
        Ok((0..self.size)
            .into_par_iter()
            .map(|x| (0..self.size).any(|y| self.mul(x, y) == self.one && self.mul(y, x) == self.one))
            .collect())
    }

    /// {x : 1 - a·x is a unit for every a}.
    pub fn jacobson_radical(&self) -> Result<IdealHandle> {
        let units = self.units()?;
        let one_minus: Vec<usize> = (0..self.size).map(|z| self.sub(self.one, z)).collect();
        let members = (0..self.size)
            .into_par_iter()
            .map(|x| (0..self.size).all(|a| units[one_minus[self.mul(a, x)]]))
            .collect();
        Ok(IdealHandle { tag: IdealTag::Radical, members })
    }

    /// Decomposition of E/J for a single object, where E/J must be a product
    /// of fields.
    pub fn semisimple_report(&self) -> Result<SemisimpleReport> {
        self.decompose(true)
    }

    /// Maximal two-sided ideals through the central primitive idempotents of
    /// E/J; valid for any finite ring (used for direct sums, where E/J is a
    /// product of matrix rings).
    pub fn two_sided_maximal_ideals(&self) -> Result<SemisimpleReport> {
        self.decompose(false)
    }

    fn decompose(&self, fields: bool) -> Result<SemisimpleReport> {
        let radical = self.jacobson_radical()?;
        let quotient = Quotient::new(self, &radical);
        let commutative = quotient.check_commutative();
        if fields {
            commutative.clone()?;
        }
        let idempotents = quotient.central_primitive_idempotents();
        let mut factor_orders = Vec::with_capacity(idempotents.len());
        for &e in &idempotents {
            factor_orders.push(if fields { quotient.check_field_factor(e)? } else { quotient.component_order(e) });
        }
        quotient.check_decomposition(&idempotents, &factor_orders)?;

        let level = if self.obj.require_uniserial_factors().is_ok() { self.level_ideals()? } else { Vec::new() };
        let zero_class = quotient.class[self.zero()];
        let mut max_ideals = Vec::with_capacity(idempotents.len());
        for (index, &e) in idempotents.iter().enumerate() {
            let rep = quotient.reps[e];
            let members: Vec<bool> =
                (0..self.size).into_par_iter().map(|x| quotient.class[self.mul(rep, x)] == zero_class).collect();
            let handle = IdealHandle { tag: IdealTag::Maximal { index }, members };
            let labels = level
                .iter()
                .filter(|l| l.same_set(&handle))
                .map(|l| match l.tag {
                    IdealTag::Level { level, kind } => LevelLabel { level, kind },
                    _ => unreachable!(),
                })
                .collect();
            max_ideals.push(MaximalIdeal { order: handle.order(), labels, handle });
        }
        let k = idempotents.len();
        Ok(SemisimpleReport {
            ring_order: self.size,
            radical_order: radical.order(),
            commutative: commutative.is_ok(),
            k,
            codim: k,
            factor_orders,
            max_ideals,
            level_count: 2 * self.n(),
            radical,
        })
    }

    /// Checks every structural claim about E_M for an object whose factors
    /// are all nonzero cyclic modules.
    pub fn structure_check(&self) -> Result<StructureCheck> {
        if let Some(level) = self.obj.zero_levels().first() {
            return Err(Error::NotInUn { index: 0, level: *level });
        }
        self.obj.require_uniserial_factors()?;
        let mut list = Checklist::new();
        let level = self.level_ideals()?;
        // Distinct level ideals, checked once each.
        let mut distinct: Vec<&IdealHandle> = Vec::new();
        for l in &level {
            if !distinct.iter().any(|d| d.same_set(l)) {
                distinct.push(l);
            }
        }
        for ideal in &distinct {
            let name = tag_name(&ideal.tag);
            list.check("level ideals are proper", !ideal.contains(self.one) && ideal.contains(0), || name.clone());
            let additive = self.is_additive_subgroup(&ideal.members)?;
            let two_sided = additive && self.is_two_sided(&ideal.members)?;
            list.check("level ideals are two-sided ideals", two_sided, || name.clone());
            let prime = !ideal.contains(self.one) && self.is_completely_prime(ideal)?;
            list.check("level ideals are completely prime", prime, || name.clone());
        }
        let units = self.units()?;
        let mut bad = 0;
        let mut first = None;
        for x in 0..self.size {
            let covered = level.iter().any(|l| l.contains(x));
            if covered == units[x] {
                bad += 1;
                first.get_or_insert(x);
            }
        }
        list.check("non-units are exactly the union of the level ideals", bad == 0, || {
            format!("{bad} elements disagree, first index {}", first.unwrap())
        });
        let report = match self.semisimple_report() {
            Ok(r) => r,
            Err(e) if e.is_violation() => {
                list.check("radical quotient is a product of fields", false, || e.to_string());
                return Ok(StructureCheck { checklist: list, report: None });
            }
            Err(e) => return Err(e),
        };
        list.check("radical quotient is a product of fields", true, String::new);
        list.check("radical is a two-sided ideal", self.is_two_sided(&report.radical.members)?, String::new);
        for (idx, m) in report.max_ideals.iter().enumerate() {
            list.check("maximal ideals are level ideals", !m.labels.is_empty(), || format!("maximal ideal {idx}"));
        }
        list.declare("maximal ideals are level ideals");
        let product: usize = report.factor_orders.iter().product();
        list.check("quotient order matches field factors", report.ring_order == product * report.radical_order, || {
            format!("|E| = {}, |J| = {}, factors {:?}", report.ring_order, report.radical_order, report.factor_orders)
        });
        let n = self.n();
        list.check("type at most 2n", report.k <= 2 * n && report.k >= 1, || format!("k = {}, n = {n}", report.k));
        list.check("type at most n", report.k <= n, || format!("k = {}, n = {n}", report.k));
        Ok(StructureCheck { checklist: list, report: Some(report) })
    }

    /// Whether I_{M,i,a} is one of the maximal two-sided ideals.
    pub fn is_maximal_level_ideal(&self, report: &SemisimpleReport, i: usize, kind: ClassKind) -> bool {
        report.max_ideals.iter().any(|m| m.labels.contains(&LevelLabel { level: i, kind }))
    }
}

fn tag_name(tag: &IdealTag) -> String {
    match tag {
        IdealTag::Level { level, kind } => format!("I({level},{kind})"),
        IdealTag::Radical => "J".into(),
        IdealTag::Maximal { index } => format!("maximal #{index}"),
        IdealTag::Associated { level, kind } => format!("associated({level},{kind})"),
    }
}

/// E/J on coset representatives.
struct Quotient<'a> {
    ring: &'a EndoRing,
    class: Vec<usize>,
    reps: Vec<usize>,
}

impl<'a> Quotient<'a> {
    fn new(ring: &'a EndoRing, radical: &IdealHandle) -> Self {
        let inside: Vec<usize> = (0..ring.size).filter(|&x| radical.members[x]).collect();
        let mut class = vec![usize::MAX; ring.size];
        let mut reps = Vec::new();
        for x in 0..ring.size {
            if class[x] != usize::MAX {
                continue;
            }
            for &j in &inside {
                class[ring.add(x, j)] = reps.len();
            }
            reps.push(x);
        }
        Quotient { ring, class, reps }
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.class[self.ring.mul(self.reps[a], self.reps[b])]
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.class[self.ring.add(self.reps[a], self.reps[b])]
    }

    fn zero(&self) -> usize {
        self.class[0]
    }

    fn one(&self) -> usize {
        self.class[self.ring.one]
    }

    fn check_commutative(&self) -> Result<()> {
        let q = self.len();
        let bad = (0..q).into_par_iter().find_map_first(|a| (a + 1..q).find(|&b| self.mul(a, b) != self.mul(b, a)).map(|b| (a, b)));
        match bad {
            None => Ok(()),
            Some((a, b)) => Err(Error::NonCommutativeQuotient {
                detail: format!("classes of elements {} and {} do not commute", self.reps[a], self.reps[b]),
            }),
        }
    }

    fn is_central(&self, c: usize) -> bool {
        (0..self.len()).all(|x| self.mul(c, x) == self.mul(x, c))
    }

    /// Minimal nonzero central idempotents, ordered by representative index.
    fn central_primitive_idempotents(&self) -> Vec<usize> {
        if self.one() == self.zero() {
            return Vec::new();
        }
        let idem: Vec<usize> = (0..self.len())
            .into_par_iter()
            .filter(|&c| c != self.zero() && self.mul(c, c) == c && self.is_central(c))
            .collect();
        idem.iter()
            .copied()
            .filter(|&e| idem.iter().all(|&f| f == e || self.mul(f, e) != f))
            .collect()
    }

    fn component_order(&self, e: usize) -> usize {
        let mut elements: Vec<usize> = (0..self.len()).map(|c| self.mul(e, c)).collect();
        elements.sort_unstable();
        elements.dedup();
        elements.len()
    }

    /// Order of eQ, after checking it is a field with identity e.
    fn check_field_factor(&self, e: usize) -> Result<usize> {
        let mut elements: Vec<usize> = (0..self.len()).map(|c| self.mul(e, c)).collect();
        elements.sort_unstable();
        elements.dedup();
        for &x in &elements {
            if x != self.zero() && !elements.iter().any(|&y| self.mul(x, y) == e) {
                return Err(Error::NotProductOfFields {
                    detail: format!("element {} of the factor at {} has no inverse", self.reps[x], self.reps[e]),
                });
            }
        }
        Ok(elements.len())
    }

    fn check_decomposition(&self, idem: &[usize], orders: &[usize]) -> Result<()> {
        let fail = |detail: String| Err(Error::NotProductOfFields { detail });
        for (x, &a) in idem.iter().enumerate() {
            for &b in &idem[x + 1..] {
                if self.mul(a, b) != self.zero() {
                    return fail("primitive idempotents are not orthogonal".into());
                }
            }
        }
        let sum = idem.iter().fold(self.zero(), |acc, &e| self.add(acc, e));
        if sum != self.one() {
            return fail("primitive idempotents do not sum to one".into());
        }
        if orders.iter().product::<usize>() != self.len() {
            return fail(format!("factor orders {orders:?} do not multiply to {}", self.len()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LevelLabel {
    pub level: usize,
    pub kind: ClassKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalIdeal {
    pub order: usize,
    /// Level ideals equal to this maximal ideal.
    pub labels: Vec<LevelLabel>,
    #[serde(skip)]
    pub handle: IdealHandle,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemisimpleReport {
    pub ring_order: usize,
    pub radical_order: usize,
    pub commutative: bool,
    /// Number of simple factors of E/J.
    pub k: usize,
    pub codim: usize,
    pub factor_orders: Vec<usize>,
    pub max_ideals: Vec<MaximalIdeal>,
    pub level_count: usize,
    #[serde(skip)]
    pub radical: IdealHandle,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureCheck {
    pub checklist: Checklist,
    pub report: Option<SemisimpleReport>,
}

/// Data needed to evaluate 𝒥_{M,i,a}(N,N) = {φ ∈ E_N : g∘φ∘f ∈ I_{M,i,a}
/// for all f: M → N, g: N → M}.
pub struct ComponentContext<'a> {
    pub e_m: &'a EndoRing,
    pub e_n: &'a EndoRing,
    to_n: Vec<HomElement>,
    to_m: Vec<HomElement>,
}

impl<'a> ComponentContext<'a> {
    pub fn new(e_m: &'a EndoRing, e_n: &'a EndoRing) -> Result<Self> {
        let (m, n) = (e_m.object(), e_n.object());
        Ok(ComponentContext {
            e_m,
            e_n,
            to_n: hom_chain(m, n)?.generators(),
            to_m: hom_chain(n, m)?.generators(),
        })
    }

    /// Generator pairs (f, g) suffice since g∘φ∘f is additive in f and in g.
    pub fn component(&self, ideal_m: &IdealHandle) -> IdealHandle {
        let IdealTag::Level { level, kind } = ideal_m.tag else { panic!("component of a non-level ideal") };
        let (m, n) = (self.e_m.object().module(), self.e_n.object().module());
        let members = (0..self.e_n.order())
            .into_par_iter()
            .map(|phi| {
                let phi = self.e_n.element(phi);
                self.to_n.iter().all(|f| {
                    let phi_f = f.then(&phi, n);
                    self.to_m.iter().all(|g| {
                        let x = self.e_m.index_of(&phi_f.then(g, m)).expect("endomorphism of M");
                        ideal_m.contains(x)
                    })
                })
            })
            .collect();
        IdealHandle { tag: IdealTag::Associated { level, kind }, members }
    }

    /// Some f: M → N, g: N → M with g∘f outside the ideal of E_M.
    pub fn composite_escapes(&self, ideal_m: &IdealHandle) -> bool {
        let m = self.e_m.object().module();
        self.to_n.iter().any(|f| {
            self.to_m.iter().any(|g| !ideal_m.contains(self.e_m.index_of(&f.then(g, m)).expect("endomorphism of M")))
        })
    }

    /// Some f: M → N, g: N → M with f∘g outside the ideal of E_N.
    pub fn reverse_composite_escapes(&self, ideal_n: &IdealHandle) -> bool {
        let n = self.e_n.object().module();
        self.to_n.iter().any(|f| {
            self.to_m.iter().any(|g| !ideal_n.contains(self.e_n.index_of(&g.then(f, n)).expect("endomorphism of N")))
        })
    }
}

/// 𝒥_{M,i,a}(N,N) in E_N, for I_{M,i,a} maximal in E_M.
pub fn associated_component(
    m: &ChainObject,
    i: usize,
    kind: ClassKind,
    n: &ChainObject,
    cfg: &EndoConfig,
) -> Result<IdealHandle> {
    let e_m = EndoRing::new(m, cfg)?;
    let report = e_m.semisimple_report()?;
    if !e_m.is_maximal_level_ideal(&report, i, kind) {
        return Err(Error::NotMaximal { level: i, kind: kind.letter() });
    }
    let e_n = EndoRing::new(n, cfg)?;
    let ideal = e_m.ideal_i(i, kind)?;
    Ok(ComponentContext::new(&e_m, &e_n)?.component(&ideal))
}

fn label(i: usize, kind: ClassKind) -> String {
    format!("({i},{kind})")
}

/// Outcome of the comparisons between the level ideals of E_M and E_N, the
/// class relations of M and N, and the associated components.
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    /// same[i-1][0] for Mono, same[i-1][1] for Epi.
    pub same: Vec<[bool; 2]>,
    pub checklist: Checklist,
}

pub const REMARK_CLASS_BY_COMPOSITES: &str = "class equality iff some composite g∘f escapes I(M,i,a)";
pub const REMARK_CLASS_BY_REVERSE: &str = "class equality iff some composite f∘g escapes I(N,i,a)";
pub const INCLUSIONS_TRANSFER: &str = "inclusions of level ideals transfer across equal classes";
pub const INCLUSION_FORCES_CLASS: &str = "inclusion in I(M,i,a) forces class equality";
pub const POSET_ISOMORPHISM: &str = "level ideal posets are isomorphic when all classes agree";
pub const COMPONENT_WHOLE: &str = "different classes iff the component is all of E_N";
pub const COMPONENT_STRICT: &str = "different classes iff I(N,i,a) is strictly inside the component";
pub const COMPONENT_PROPER: &str = "equal classes iff the component is proper";
pub const COMPONENT_EQUALS: &str = "equal classes iff the component equals I(N,i,a)";
pub const COMPONENT_SELF: &str = "component on M itself equals I(M,i,a)";
pub const COMPONENT_SYMMETRIC: &str = "equal classes give the same component on both objects";
pub const MAXIMALITY_TRANSFERS: &str = "maximality of level ideals transfers across equal classes";
pub const COINCIDENCES_TRANSFER: &str = "coincidences with a maximal level ideal transfer across equal classes";

/// Evaluates the relations between level ideals, classes and associated
/// components for a pair of objects with nonzero cyclic factors.
pub fn verify_pair(m: &ChainObject, n: &ChainObject, cfg: &EndoConfig) -> Result<PairReport> {
    for (index, obj) in [m, n].into_iter().enumerate() {
        if let Some(&level) = obj.zero_levels().first() {
            return Err(Error::NotInUn { index, level });
        }
    }
    let levels = m.n();
    let e_m = EndoRing::new(m, cfg)?;
    let e_n = EndoRing::new(n, cfg)?;
    let rep_m = e_m.semisimple_report()?;
    let rep_n = e_n.semisimple_report()?;
    let ideals_m = e_m.level_ideals()?;
    let ideals_n = e_n.level_ideals()?;
    let mn = ComponentContext::new(&e_m, &e_n)?;
    let nm = ComponentContext::new(&e_n, &e_m)?;
    let mm = ComponentContext::new(&e_m, &e_m)?;
    let there = Reach::of(&hom_chain(m, n)?)?;
    let back = Reach::of(&hom_chain(n, m)?)?;

    let slot = |i: usize, kind: ClassKind| 2 * (i - 1) + (kind == ClassKind::Epi) as usize;
    let same_at = |i: usize, kind: ClassKind| there.get(i, kind) && back.get(i, kind);
    let all_labels: Vec<(usize, ClassKind)> =
        (1..=levels).flat_map(|i| ClassKind::BOTH.into_iter().map(move |k| (i, k))).collect();
    let same: Vec<[bool; 2]> = (1..=levels).map(|i| [same_at(i, ClassKind::Mono), same_at(i, ClassKind::Epi)]).collect();

    let mut list = Checklist::new();
    for name in [
        REMARK_CLASS_BY_COMPOSITES,
        REMARK_CLASS_BY_REVERSE,
        INCLUSIONS_TRANSFER,
        INCLUSION_FORCES_CLASS,
        POSET_ISOMORPHISM,
        COMPONENT_WHOLE,
        COMPONENT_STRICT,
        COMPONENT_PROPER,
        COMPONENT_EQUALS,
        COMPONENT_SELF,
        COMPONENT_SYMMETRIC,
        MAXIMALITY_TRANSFERS,
        COINCIDENCES_TRANSFER,
    ] {
        list.declare(name);
    }

    for &(i, a) in &all_labels {
        let s = same_at(i, a);
        let im = &ideals_m[slot(i, a)];
        let inn = &ideals_n[slot(i, a)];
        list.check(REMARK_CLASS_BY_COMPOSITES, mn.composite_escapes(im) == s, || label(i, a));
        list.check(REMARK_CLASS_BY_REVERSE, mn.reverse_composite_escapes(inn) == s, || label(i, a));

        if s {
            for &(j, b) in &all_labels {
                let jm = &ideals_m[slot(j, b)];
                let jn = &ideals_n[slot(j, b)];
                list.check(INCLUSIONS_TRANSFER, jm.is_subset_of(im) == jn.is_subset_of(inn), || {
                    format!("{} in {}", label(j, b), label(i, a))
                });
                if jm.is_subset_of(im) {
                    list.check(INCLUSION_FORCES_CLASS, same_at(j, b), || format!("{} in {}", label(j, b), label(i, a)));
                }
            }
            let max_m = e_m.is_maximal_level_ideal(&rep_m, i, a);
            let max_n = e_n.is_maximal_level_ideal(&rep_n, i, a);
            list.check(MAXIMALITY_TRANSFERS, max_m == max_n, || label(i, a));
            if max_m {
                for &(j, b) in &all_labels {
                    let eq_m = ideals_m[slot(j, b)].same_set(im);
                    let eq_n = ideals_n[slot(j, b)].same_set(inn);
                    list.check(COINCIDENCES_TRANSFER, eq_m == eq_n, || format!("{} vs {}", label(j, b), label(i, a)));
                }
            }
        }

        if e_m.is_maximal_level_ideal(&rep_m, i, a) {
            let comp = mn.component(im);
            let strict = inn.is_subset_of(&comp) && !inn.same_set(&comp);
            list.check(COMPONENT_WHOLE, comp.is_whole() == !s, || label(i, a));
            list.check(COMPONENT_STRICT, strict == !s, || label(i, a));
            list.check(COMPONENT_PROPER, !comp.is_whole() == s, || label(i, a));
            list.check(COMPONENT_EQUALS, comp.same_set(inn) == s, || label(i, a));
            list.check(COMPONENT_SELF, mm.component(im).same_set(im), || label(i, a));
            if s && e_n.is_maximal_level_ideal(&rep_n, i, a) {
                // 𝒥_{N,i,a}(M,M) = I_{M,i,a}
                list.check(COMPONENT_SYMMETRIC, nm.component(inn).same_set(im), || label(i, a));
            }
        }
    }

    if same.iter().all(|p| p[0] && p[1]) {
        for &(i, a) in &all_labels {
            for &(j, b) in &all_labels {
                let in_m = ideals_m[slot(j, b)].is_subset_of(&ideals_m[slot(i, a)]);
                let in_n = ideals_n[slot(j, b)].is_subset_of(&ideals_n[slot(i, a)]);
                list.check(POSET_ISOMORPHISM, in_m == in_n, || format!("{} in {}", label(j, b), label(i, a)));
            }
        }
    }
    Ok(PairReport { same, checklist: list })
}

/// Maximal two-sided ideals of E_{⊕M_h} against the components
/// 𝒥_{M_h,i,a}(⊕,⊕) for maximal level ideals of the summands.
#[derive(Clone, Debug, Serialize)]
pub struct SumIdealReport {
    pub sum_ring_order: usize,
    pub maximal_count: usize,
    /// (summand, level, kind, index of the matching maximal ideal of the sum)
    pub correspondence: Vec<(usize, LevelLabel, Option<usize>)>,
    pub distinct_components: usize,
    pub checklist: Checklist,
}

pub const COMPONENT_IS_MAXIMAL: &str = "each associated component of a summand is a maximal ideal of the sum";
pub const MAXIMAL_IS_COMPONENT: &str = "each maximal ideal of the sum is an associated component";

pub fn max_ideals_of_sum(objs: &[&ChainObject], cfg: &EndoConfig) -> Result<SumIdealReport> {
    let first = objs.first().ok_or(Error::LengthMismatch { expected: 1, got: 0 })?;
    let (sum, _) = direct_sum_all(first.ring(), first.n(), objs)?;
    let e_s = EndoRing::new(&sum, cfg)?;
    let rep_s = e_s.two_sided_maximal_ideals()?;
    let mut list = Checklist::new();
    list.declare(COMPONENT_IS_MAXIMAL);
    list.declare(MAXIMAL_IS_COMPONENT);
    let mut correspondence = Vec::new();
    let mut components: Vec<IdealHandle> = Vec::new();
    for (h, obj) in objs.iter().enumerate() {
        let e_h = EndoRing::new(obj, cfg)?;
        let rep_h = e_h.semisimple_report()?;
        let ctx = ComponentContext::new(&e_h, &e_s)?;
        for max in &rep_h.max_ideals {
            for lab in &max.labels {
                let comp = ctx.component(&e_h.ideal_i(lab.level, lab.kind)?);
                let hit = rep_s.max_ideals.iter().position(|m| m.handle.same_set(&comp));
                list.check(COMPONENT_IS_MAXIMAL, hit.is_some(), || format!("summand {h} {}", label(lab.level, lab.kind)));
                correspondence.push((h, *lab, hit));
                if !components.iter().any(|c| c.same_set(&comp)) {
                    components.push(comp);
                }
            }
        }
    }
    for (idx, m) in rep_s.max_ideals.iter().enumerate() {
        list.check(MAXIMAL_IS_COMPONENT, components.iter().any(|c| c.same_set(&m.handle)), || format!("maximal #{idx}"));
    }
    Ok(SumIdealReport {
        sum_ring_order: e_s.order(),
        maximal_count: rep_s.k,
        correspondence,
        distinct_components: components.len(),
        checklist: list,
    })
}
