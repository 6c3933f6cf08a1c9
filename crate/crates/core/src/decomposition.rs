//! Isomorphism of finite direct sums of chain objects: the class-counting
//! decision procedure, a brute-force oracle, permutation extraction from
//! explicit isomorphisms, and a search for summand-swapping coincidences.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ChainRing, ResidueMatrix, RowSolver};
use crate::chain::{direct_sum_all, ChainObject, ObjectSpec};
use crate::error::{Error, Result};
use crate::fmodule::{DirectSum, Submodule};
use crate::hom::{hom_chain, map_is_injective, map_is_surjective, same_class, ClassKind, ClassTable, HomElement, InducedEvaluator};
use crate::random::{random_object_with, RandomOptions};

pub const DEFAULT_ORACLE_CAP: u128 = 1 << 20;
pub const DEFAULT_HALL_MAX_R: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Iso,
    NotIso,
}

/// Summands (0-based) with a nonzero i-th factor on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub level: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// A bijection between the index sets at one (level, kind), as sorted pairs
/// (left summand, right summand).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bijection {
    pub level: usize,
    pub kind: ClassKind,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FailureWitness {
    /// Different numbers of summands on the two sides of a 𝒰ₙ comparison.
    SummandCount { left: usize, right: usize },
    /// Different numbers of summands with a nonzero factor at `level`.
    IndexSetSize { level: usize, left: usize, right: usize },
    /// A class at (level, kind) met by different numbers of summands.
    ClassCount { level: usize, kind: ClassKind, left: Vec<usize>, right: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub verdict: Verdict,
    pub r: usize,
    pub s: usize,
    pub index_sets: Vec<IndexSets>,
    pub bijections: Vec<Bijection>,
    pub failure: Option<FailureWitness>,
}

fn common_shape(ms: &[ChainObject], ns: &[ChainObject]) -> Result<Option<(ChainRing, usize)>> {
    let mut shape = None;
    for o in ms.iter().chain(ns) {
        match shape {
            None => shape = Some((o.ring(), o.n())),
            Some((ring, n)) => {
                if o.ring() != ring {
                    return Err(Error::ParentMismatch);
                }
                if o.n() != n {
                    return Err(Error::LengthMismatch { expected: n, got: o.n() });
                }
            }
        }
    }
    Ok(shape)
}

/// Decides ⊕ms ≅ ⊕ns for summands in 𝒰ₙ.
pub fn decide_iso(ms: &[ChainObject], ns: &[ChainObject]) -> Result<DecisionReport> {
    common_shape(ms, ns)?;
    for (index, o) in ms.iter().chain(ns).enumerate() {
        if o.is_zero() {
            return Err(Error::ZeroObjectInInput { index });
        }
        o.require_uniserial_factors()?;
        if let Some(&level) = o.zero_levels().first() {
            return Err(Error::NotInUn { index, level });
        }
    }
    if ms.len() != ns.len() {
        return Ok(DecisionReport {
            verdict: Verdict::NotIso,
            r: ms.len(),
            s: ns.len(),
            index_sets: Vec::new(),
            bijections: Vec::new(),
            failure: Some(FailureWitness::SummandCount { left: ms.len(), right: ns.len() }),
        });
    }
    decide(ms, ns)
}

/// Decides ⊕ms ≅ ⊕ns for nonzero summands whose factors are cyclic or zero;
/// the two sides may have different numbers of summands.
pub fn decide_iso_general(ms: &[ChainObject], ns: &[ChainObject]) -> Result<DecisionReport> {
    common_shape(ms, ns)?;
    for (index, o) in ms.iter().chain(ns).enumerate() {
        if o.is_zero() {
            return Err(Error::ZeroObjectInInput { index });
        }
        o.require_uniserial_factors()?;
    }
    decide(ms, ns)
}

fn decide(ms: &[ChainObject], ns: &[ChainObject]) -> Result<DecisionReport> {
    let (r, s) = (ms.len(), ns.len());
    let n = ms.first().or(ns.first()).map_or(0, |o| o.n());
    let index_sets: Vec<IndexSets> = (1..=n)
        .map(|i| IndexSets {
            level: i,
            left: (0..r).filter(|&k| !ms[k].factor(i).is_zero()).collect(),
            right: (0..s).filter(|&l| !ns[l].factor(i).is_zero()).collect(),
        })
        .collect();
    let mut report =
        DecisionReport { verdict: Verdict::NotIso, r, s, index_sets: index_sets.clone(), bijections: Vec::new(), failure: None };
    for sets in &index_sets {
        if sets.left.len() != sets.right.len() {
            report.failure =
                Some(FailureWitness::IndexSetSize { level: sets.level, left: sets.left.len(), right: sets.right.len() });
            return Ok(report);
        }
    }
    let all: Vec<&ChainObject> = ms.iter().chain(ns).collect();
    let table = ClassTable::new(&all)?;
    for sets in &index_sets {
        let i = sets.level;
        for kind in ClassKind::BOTH {
            // Classes among the summands with a nonzero i-th factor.
            let members: Vec<usize> = sets.left.iter().copied().chain(sets.right.iter().map(|&l| r + l)).collect();
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for &x in &members {
                match classes.iter_mut().find(|c| table.same(c[0], x, i, kind)) {
                    Some(c) => c.push(x),
                    None => classes.push(vec![x]),
                }
            }
            let mut pairs = Vec::new();
            for class in &classes {
                let left: Vec<usize> = class.iter().copied().filter(|&x| x < r).collect();
                let right: Vec<usize> = class.iter().copied().filter(|&x| x >= r).map(|x| x - r).collect();
                if left.len() != right.len() {
                    report.failure = Some(FailureWitness::ClassCount { level: i, kind, left, right });
                    return Ok(report);
                }
                pairs.extend(left.into_iter().zip(right));
            }
            pairs.sort_unstable();
            for &(k, l) in &pairs {
                if !same_class(&ms[k], &ns[l], i, kind)? {
                    return Err(Error::NoPermutation { level: i, kind: kind.letter() });
                }
            }
            report.bijections.push(Bijection { level: i, kind, pairs });
        }
    }
    report.verdict = Verdict::Iso;
    Ok(report)
}

/// A side of a comparison assembled into one object, with its coordinate blocks.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub object: ChainObject,
    pub blocks: DirectSum,
    pub summands: Vec<ChainObject>,
}

pub fn assemble(ring: ChainRing, n: usize, objs: &[ChainObject]) -> Result<Assembled> {
    let refs: Vec<&ChainObject> = objs.iter().collect();
    let (object, blocks) = direct_sum_all(ring, n, &refs)?;
    Ok(Assembled { object, blocks, summands: objs.to_vec() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OracleOutcome {
    /// The first isomorphism in the enumeration order of the hom group.
    Iso { index: u128, witness: Vec<Vec<u64>> },
    NoIso { prefiltered: bool, scanned: u128 },
}

impl OracleOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, OracleOutcome::Iso { .. })
    }
}

/// Exhaustive search for an isomorphism ⊕ms → ⊕ns among all chain-preserving
/// morphisms, up to `cap` candidates.
pub fn oracle_iso(ring: ChainRing, n: usize, ms: &[ChainObject], ns: &[ChainObject], cap: u128) -> Result<OracleOutcome> {
    common_shape(ms, ns)?;
    let left = assemble(ring, n, ms)?;
    let right = assemble(ring, n, ns)?;
    oracle_on(&left.object, &right.object, cap)
}

pub fn oracle_on(src: &ChainObject, tgt: &ChainObject, cap: u128) -> Result<OracleOutcome> {
    if (0..=src.n()).any(|i| src.level(i).order_log() != tgt.level(i).order_log()) {
        return Ok(OracleOutcome::NoIso { prefiltered: true, scanned: 0 });
    }
    let hom = hom_chain(src, tgt)?;
    let order = hom.checked_order(cap)?;
    let ring = src.ring();
    let (p, e) = (ring.p(), ring.e());
    let a = src.module().exponents();
    let s = tgt.module().rank();
    let r = a.len();
    if r != s {
        return Ok(OracleOutcome::NoIso { prefiltered: true, scanned: 0 });
    }
    let diag = hom.diagonal();
    let gens = diag.generators();
    let radices = diag.radices();
    let socle_mult: Vec<u64> = a.iter().map(|&aj| ring.pow(aj - 1)).collect();
    let top = ring.pow(e - 1);
    let field = ChainRing::new(p, 1)?;

    let injective = |v: &[u64]| -> bool {
        let mut rows: Vec<Vec<u64>> = (0..r)
            .map(|j| (0..s).map(|k| ring.mul(v[j * s + k], socle_mult[j]) / top).collect())
            .collect();
        full_row_rank(field, &mut rows)
    };

    const CHUNK: u128 = 4096;
    let chunks = order.div_ceil(CHUNK);
    let hit = (0..chunks).into_par_iter().find_map_first(|c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(order);
        let mut digits = diag.coords_of_index(start);
        let mut v = diag.combine(&digits);
        for idx in start..end {
            if injective(&v) {
                return Some((idx, v));
            }
            for t in 0..digits.len() {
                digits[t] += 1;
                for (x, &g) in v.iter_mut().zip(&gens[t]) {
                    *x = ring.add(*x, g);
                }
                if digits[t] < radices[t] {
                    break;
                }
                digits[t] = 0;
            }
        }
        None
    });
    match hit {
        Some((index, v)) => {
            let f = hom.from_vector(&v);
            if !verify_iso(&f, src, tgt) {
                return Err(Error::NotAnIsomorphism);
            }
            Ok(OracleOutcome::Iso { index, witness: f.images })
        }
        None => Ok(OracleOutcome::NoIso { prefiltered: false, scanned: order }),
    }
}

/// Whether the rows are linearly independent over F_p.
fn full_row_rank(field: ChainRing, rows: &mut [Vec<u64>]) -> bool {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = field.unit_inverse(rows[rank][c]).expect("nonzero in a field");
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| field.mul(x, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(f, y));
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank == rows.len()
}

/// Bijective on underlying sets and maps every level onto the corresponding
/// level, so the inverse preserves the chains too.
pub fn verify_iso(f: &HomElement, src: &ChainObject, tgt: &ChainObject) -> bool {
    if !f.is_well_defined(src.module(), tgt.module()) || src.module().order_log() != tgt.module().order_log() {
        return false;
    }
    (0..=src.n()).all(|i| {
        let images: Vec<Vec<u64>> = src.level(i).generators().iter().map(|g| f.apply(tgt.module(), g)).collect();
        Submodule::from_generators(tgt.module(), &images).is_ok_and(|s| &s == tgt.level(i))
            && src.level(i).order_log() == tgt.level(i).order_log()
    })
}

/// The inverse of a verified isomorphism.
pub fn invert(f: &HomElement, src: &ChainObject, tgt: &ChainObject) -> Result<HomElement> {
    let ring = src.ring();
    let rows: Vec<Vec<u64>> = f.images.iter().map(|y| tgt.module().embed(y)).collect();
    let solver = RowSolver::new(&ResidueMatrix::from_rows(ring, tgt.module().rank(), &rows)?);
    let images = (0..tgt.module().rank())
        .map(|k| {
            let c = solver.solve(&tgt.module().embed(&tgt.module().basis_element(k))).ok_or(Error::NotAnIsomorphism)?;
            Ok(src.module().reduce(&c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomElement { images })
}

/// The bipartite digraph at (level, kind) built from the components of an
/// isomorphism and of its inverse, restricted to summands with a nonzero
/// factor at that level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDigraph {
    pub level: usize,
    pub kind: ClassKind,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// (h, j): the component M_h → N_j induces a map of the given kind.
    pub forward: Vec<(usize, usize)>,
    /// (j, h): the component N_j → M_h of the inverse does.
    pub backward: Vec<(usize, usize)>,
    pub hall_checked: bool,
    /// (left summand, right summand) joined by edges in both directions.
    pub permutation: Vec<(usize, usize)>,
}

fn component(f: &HomElement, src: &Assembled, tgt: &Assembled, h: usize, j: usize) -> HomElement {
    let mh = src.summands[h].module();
    let images = (0..mh.rank())
        .map(|u| {
            let x = src.blocks.inject(h, &mh.basis_element(u));
            tgt.blocks.project(j, &f.apply(tgt.object.module(), &x))
        })
        .collect();
    HomElement { images }
}

fn induces(f: &HomElement, src: &ChainObject, tgt: &ChainObject, i: usize, kind: ClassKind) -> bool {
    let rows = InducedEvaluator::new(src, tgt).map(f, i);
    let (u, v) = (src.factor(i).as_module(), tgt.factor(i).as_module());
    match kind {
        ClassKind::Mono => map_is_injective(&u, &v, &rows),
        ClassKind::Epi => map_is_surjective(&v, &rows),
    }
}

/// Extracts the permutation at (i, kind) from an isomorphism `f` of the
/// assembled sums, auditing |T| ≤ |N⁺(T)| for every vertex set T when the
/// digraph has at most `hall_max_r` vertices per side.
pub fn extract_digraph(
    f: &HomElement,
    src: &Assembled,
    tgt: &Assembled,
    i: usize,
    kind: ClassKind,
    hall_max_r: usize,
) -> Result<ClassDigraph> {
    if !verify_iso(f, &src.object, &tgt.object) {
        return Err(Error::NotAnIsomorphism);
    }
    let g = invert(f, &src.object, &tgt.object)?;
    let left: Vec<usize> = (0..src.summands.len()).filter(|&h| !src.summands[h].factor(i).is_zero()).collect();
    let right: Vec<usize> = (0..tgt.summands.len()).filter(|&j| !tgt.summands[j].factor(i).is_zero()).collect();
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for &h in &left {
        for &j in &right {
            let chi = component(f, src, tgt, h, j);
            if induces(&chi, &src.summands[h], &tgt.summands[j], i, kind) {
                forward.push((h, j));
            }
            let chi_inv = component(&g, tgt, src, j, h);
            if induces(&chi_inv, &tgt.summands[j], &src.summands[h], i, kind) {
                backward.push((j, h));
            }
        }
    }
    let (p, q) = (left.len(), right.len());
    let hall_checked = p + q <= 2 * hall_max_r && p + q < 64;
    if hall_checked {
        // Vertices: left positions 0..p, right positions p..p+q.
        let pos_l = |h: usize| left.iter().position(|&x| x == h).unwrap();
        let pos_r = |j: usize| p + right.iter().position(|&x| x == j).unwrap();
        let mut out = vec![0u64; p + q];
        for &(h, j) in &forward {
            out[pos_l(h)] |= 1 << pos_r(j);
        }
        for &(j, h) in &backward {
            out[pos_r(j)] |= 1 << pos_l(h);
        }
        let total = p + q;
        let violation = (1u64..(1u64 << total)).into_par_iter().find_map_first(|t| {
            let mut nb = 0u64;
            for (v, &o) in out.iter().enumerate() {
                if t >> v & 1 == 1 {
                    nb |= o;
                }
            }
            let (size, neighbours) = (t.count_ones() as usize, nb.count_ones() as usize);
            (size > neighbours).then_some((size, neighbours))
        });
        if let Some((size, neighbours)) = violation {
            return Err(Error::HallViolation { level: i, kind: kind.letter(), size, neighbours });
        }
    }
    let both: Vec<Vec<usize>> = left
        .iter()
        .map(|&h| right.iter().copied().filter(|&j| forward.contains(&(h, j)) && backward.contains(&(j, h))).collect())
        .collect();
    let matched = perfect_matching(&both, &right).ok_or(Error::NoPermutation { level: i, kind: kind.letter() })?;
    let permutation: Vec<(usize, usize)> = left.iter().copied().zip(matched).collect();
    for &(h, j) in &permutation {
        if !same_class(&src.summands[h], &tgt.summands[j], i, kind)? {
            return Err(Error::NoPermutation { level: i, kind: kind.letter() });
        }
    }
    Ok(ClassDigraph { level: i, kind, left, right, forward, backward, hall_checked, permutation })
}

/// Kuhn's augmenting-path matching; `adj[x]` lists admissible right labels.
fn perfect_matching(adj: &[Vec<usize>], right: &[usize]) -> Option<Vec<usize>> {
    if adj.len() != right.len() {
        return None;
    }
    let mut owner: HashMap<usize, usize> = HashMap::new();
    fn augment(x: usize, adj: &[Vec<usize>], seen: &mut Vec<usize>, owner: &mut HashMap<usize, usize>) -> bool {
        for &y in &adj[x] {
            if seen.contains(&y) {
                continue;
            }
            seen.push(y);
            let free = match owner.get(&y) {
                None => true,
                Some(&other) => augment(other, adj, seen, owner),
            };
            if free {
                owner.insert(y, x);
                return true;
            }
        }
        false
    }
    for x in 0..adj.len() {
        if !augment(x, adj, &mut Vec::new(), &mut owner) {
            return None;
        }
    }
    let mut matched = vec![0; adj.len()];
    for (y, x) in owner {
        matched[x] = y;
    }
    Some(matched)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapFinding {
    /// A ⊕ B ≅ C ⊕ D with A, B, C, D pairwise non-isomorphic.
    pub objects: [ObjectSpec; 4],
    pub oracle_confirmed: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SwapSearchConfig {
    /// Number of random objects drawn.
    pub budget: usize,
    pub max_order: u64,
    pub oracle_cap: u128,
    pub max_findings: usize,
}

impl Default for SwapSearchConfig {
    fn default() -> Self {
        SwapSearchConfig { budget: 24, max_order: 64, oracle_cap: DEFAULT_ORACLE_CAP, max_findings: 8 }
    }
}

/// Random search for A ⊕ B ≅ C ⊕ D with four pairwise non-isomorphic
/// summands in 𝒰ₙ.
pub fn swap_search(ring: ChainRing, n: usize, seed: u64, cfg: &SwapSearchConfig) -> Result<Vec<SwapFinding>> {
    if cfg.budget == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = RandomOptions { force_un: true, ..Default::default() };
    let mut pool: Vec<ChainObject> = Vec::new();
    for _ in 0..cfg.budget {
        let obj = random_object_with(ring, n, cfg.max_order, opts, &mut rng)?;
        pool.push(obj);
    }
    let refs: Vec<&ChainObject> = pool.iter().collect();
    let table = ClassTable::new(&refs)?;
    let labels: Vec<(usize, ClassKind)> = (1..=n).flat_map(|i| ClassKind::BOTH.into_iter().map(move |k| (i, k))).collect();
    let class_ids: Vec<Vec<usize>> = labels
        .iter()
        .map(|&(i, k)| {
            let mut id = vec![0; pool.len()];
            for (c, members) in table.partition(i, k).into_iter().enumerate() {
                for x in members {
                    id[x] = c;
                }
            }
            id
        })
        .collect();
    let signature = |x: usize| -> Vec<usize> { class_ids.iter().map(|ids| ids[x]).collect() };
    // One representative per isomorphism type of single objects.
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..pool.len() {
        if !reps.iter().any(|&y| signature(y) == signature(x)) {
            reps.push(x);
        }
    }
    let mut by_key: HashMap<Vec<(usize, usize)>, Vec<(usize, usize)>> = HashMap::new();
    for (u, &a) in reps.iter().enumerate() {
        for &b in &reps[u + 1..] {
            let key: Vec<(usize, usize)> = class_ids
                .iter()
                .map(|ids| (ids[a].min(ids[b]), ids[a].max(ids[b])))
                .collect();
            by_key.entry(key).or_default().push((a, b));
        }
    }
    let mut keys: Vec<_> = by_key.keys().cloned().collect();
    keys.sort();
    let mut findings = Vec::new();
    for key in keys {
        let pairs = &by_key[&key];
        for (u, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[u + 1..] {
                if findings.len() >= cfg.max_findings {
                    return Ok(findings);
                }
                let lhs = [pool[a].clone(), pool[b].clone()];
                let rhs = [pool[c].clone(), pool[d].clone()];
                if decide_iso(&lhs, &rhs)?.verdict != Verdict::Iso {
                    continue;
                }
                let oracle_confirmed = match oracle_iso(ring, n, &lhs, &rhs, cfg.oracle_cap) {
                    Ok(o) => Some(o.is_iso()),
                    Err(e) if e.is_cap() => None,
                    Err(e) => return Err(e),
                };
                findings.push(SwapFinding {
                    objects: [pool[a].spec(), pool[b].spec(), pool[c].spec(), pool[d].spec()],
                    oracle_confirmed,
                });
            }
        }
    }
    Ok(findings)
}
