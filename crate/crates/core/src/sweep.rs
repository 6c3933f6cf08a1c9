//! Seeded randomized runs of every checked invariant, one independent item
//! per index, aggregated in index order.
//!
//! Instance distribution: every object is drawn by `random_object_with` with
//! module order at most `max_order` (p^6 by default); lists hold one to three
//! objects and share `max_order` as a per-side budget, split evenly between
//! the summands. Item k is driven by a ChaCha8 stream seeded with
//! `item_seed(seed, k)`, so any single item can be replayed on its own.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::ChainRing;
use crate::chain::{direct_sum_objects, s_n, s_padding, ChainObject};
use crate::decomposition::{
    assemble, decide_iso, decide_iso_general, extract_digraph, oracle_on, DecisionReport, OracleOutcome, Verdict,
};
use crate::endo::{max_ideals_of_sum, verify_pair, EndoConfig, EndoRing};
use crate::error::{Error, Result};
use crate::hom::{brute_same_class, hom_chain, same_class, ClassKind, HomElement};
use crate::random::{random_object_with, reembed, RandomOptions};
use crate::report::Checklist;

pub const ORACLE_AGREES: &str = "decision agrees with the oracle";
pub const PERMUTATION_INVARIANT: &str = "a permuted list is isomorphic to the original";
pub const SINGLE_OBJECT_CLASSES: &str = "single objects are isomorphic iff all classes agree";
pub const BIJECTIONS_VERIFIED: &str = "every returned bijection pairs class-equal summands";
pub const DIGRAPH_EXTRACTS: &str = "isomorphisms yield a Hall-sound class-verified permutation";
pub const CLOSED_FORM_MATCHES: &str = "closed-form class decider matches enumeration";
pub const CLASS_TRANSITIVE: &str = "class equality is transitive";
pub const FUNCTORIAL: &str = "induced maps respect composition";
pub const PADDED_IN_UN: &str = "padded sum has all factors nonzero";
pub const ZERO_FACTOR_CLASS: &str = "vanishing factors share the class of the zero object";
pub const PADDED_FACTORS: &str = "padded factors are the original or simple";
pub const PADDED_KEEPS_CLASSES: &str = "padded sum keeps the classes at nonzero factors";
pub const PADDED_SIMPLE_CLASSES: &str = "padded sum has the classes of the padding and of S^n at vanishing factors";
pub const PADDED_SPLITS: &str = "padded sum is isomorphic to the object plus its padding";
pub const SELF_ISOMORPHIC: &str = "an object is isomorphic to itself";
pub const VIOLATION_RAISED: &str = "no operation reports a structural violation";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub p: u64,
    pub e: u32,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub max_order: u64,
    pub endo: EndoConfig,
    pub oracle_cap: u128,
    pub brute_cap: u128,
    pub hall_max_r: usize,
    /// Harness self-test: flips the closed-form class verdict.
    pub inject_mutant: bool,
}

impl SweepConfig {
    pub fn new(p: u64, e: u32, n: usize, count: usize, seed: u64) -> Self {
        SweepConfig {
            p,
            e,
            n,
            count,
            seed,
            max_order: p.saturating_pow(6),
            endo: EndoConfig::default(),
            oracle_cap: crate::decomposition::DEFAULT_ORACLE_CAP,
            brute_cap: 1 << 16,
            hall_max_r: crate::decomposition::DEFAULT_HALL_MAX_R,
            inject_mutant: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub item: usize,
    pub seed: u64,
    pub clause: String,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ItemOutcome {
    pub checklist: Checklist,
    /// Checks not run because a cap was hit, by family.
    pub skipped: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub checklist: Checklist,
    pub skipped: BTreeMap<String, usize>,
    pub findings: Vec<Finding>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// The seed of item `index`: a SplitMix64 step of `seed + index`.
pub fn item_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let ring = ChainRing::new(cfg.p, cfg.e)?;
    let outcomes: Vec<Result<ItemOutcome>> = (0..cfg.count).into_par_iter().map(|k| run_item(ring, cfg, k)).collect();
    let mut checklist = Checklist::new();
    let mut skipped = BTreeMap::new();
    let mut findings = Vec::new();
    for (k, out) in outcomes.into_iter().enumerate() {
        let out = out?;
        checklist.merge(&out.checklist);
        for (family, c) in out.skipped {
            *skipped.entry(family).or_insert(0) += c;
        }
        for clause in out.checklist.failed_clauses() {
            findings.push(Finding {
                item: k,
                seed: item_seed(cfg.seed, k),
                clause: clause.name.clone(),
                details: clause.failures.clone(),
            });
        }
    }
    Ok(SweepReport { config: *cfg, checklist, skipped, findings })
}

/// Runs every family once on item `index`.
pub fn run_item(ring: ChainRing, cfg: &SweepConfig, index: usize) -> Result<ItemOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(item_seed(cfg.seed, index));
    let mut out = ItemOutcome::default();
    let families: [(&str, Family); 6] = [
        ("classes", class_family),
        ("decision", decision_family),
        ("structure", structure_family),
        ("pairs", pair_family),
        ("sums", sum_family),
        ("padding", padding_family),
    ];
    for (name, family) in families {
        match family(ring, cfg, &mut rng, &mut out.checklist) {
            Ok(()) => {}
            Err(e) if e.is_cap() => *out.skipped.entry(name.to_string()).or_insert(0) += 1,
            Err(e) if e.is_violation() => out.checklist.check(VIOLATION_RAISED, false, || format!("{name}: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

type Family = fn(ChainRing, &SweepConfig, &mut ChaCha8Rng, &mut Checklist) -> Result<()>;

fn un_opts() -> RandomOptions {
    RandomOptions { force_un: true, ..Default::default() }
}

fn nonzero_opts() -> RandomOptions {
    RandomOptions { min_order_log: 1, ..Default::default() }
}

/// `count` objects sharing the order budget evenly.
pub fn random_list<R: Rng>(
    ring: ChainRing,
    n: usize,
    count: usize,
    side_budget: u64,
    opts: RandomOptions,
    rng: &mut R,
) -> Result<Vec<ChainObject>> {
    let mut log = 0u32;
    while ring.p().checked_pow(log + 1).is_some_and(|q| q <= side_budget) {
        log += 1;
    }
    let per = ring.p().pow(log / count.max(1) as u32);
    (0..count).map(|_| random_object_with(ring, n, per, opts, rng)).collect()
}

fn class_family(ring: ChainRing, cfg: &SweepConfig, rng: &mut ChaCha8Rng, list: &mut Checklist) -> Result<()> {
    let n = cfg.n;
    let objs = random_list(ring, n, 3, cfg.max_order, RandomOptions::default(), rng)?;
    let (a, b, c) = (&objs[0], &objs[1], &objs[2]);
    for i in 1..=n {
        for kind in ClassKind::BOTH {
            let mut closed = same_class(a, b, i, kind)?;
            if cfg.inject_mutant {
                closed = !closed;
            }
            let brute = brute_same_class(a, b, i, kind, cfg.brute_cap)?;
            list.check(CLOSED_FORM_MATCHES, closed == brute, || format!("level {i} {kind}: closed {closed}, brute {brute}"));
            let ab = same_class(a, b, i, kind)?;
            let bc = same_class(b, c, i, kind)?;
            let ac = same_class(a, c, i, kind)?;
            list.check(CLASS_TRANSITIVE, !(ab && bc) || ac, || format!("level {i} {kind}"));
        }
    }
    check_functorial(a, b, c, rng, list)
}

/// (g∘f)_i = g_i∘f_i for random f: a → b and g: b → c.
pub fn check_functorial<R: Rng>(
    a: &ChainObject,
    b: &ChainObject,
    c: &ChainObject,
    rng: &mut R,
    list: &mut Checklist,
) -> Result<()> {
    let hab = hom_chain(a, b)?;
    let hbc = hom_chain(b, c)?;
    let hac = hom_chain(a, c)?;
    let pick = |h: &crate::hom::HomGroup, rng: &mut R| -> HomElement {
        let coords: Vec<u64> = h.diagonal().radices().iter().map(|&r| rng.gen_range(0..r)).collect();
        h.combine(&coords)
    };
    let f = pick(&hab, rng);
    let g = pick(&hbc, rng);
    let gf = f.then(&g, c.module());
    for i in 1..=a.n() {
        let direct = hac.induced_map(&gf, i);
        let w = c.factor(i).as_module();
        let gi = hbc.induced_map(&g, i);
        let composed: Vec<Vec<u64>> = hab.induced_map(&f, i).iter().map(|x| w.linear_image(&gi, x)).collect();
        list.check(FUNCTORIAL, direct == composed, || format!("level {i}"));
    }
    Ok(())
}

/// Checks the decision procedure against the oracle on one instance, and
/// extracts the digraphs when an isomorphism is found.
pub fn check_decision(
    ms: &[ChainObject],
    ns: &[ChainObject],
    cfg: &SweepConfig,
    list: &mut Checklist,
) -> Result<(DecisionReport, OracleOutcome)> {
    let ring = ms.first().or(ns.first()).map_or(ChainRing::new(cfg.p, cfg.e)?, |o| o.ring());
    let all_un = ms.iter().chain(ns).all(|o| o.is_in_un());
    let rep = if all_un { decide_iso(ms, ns)? } else { decide_iso_general(ms, ns)? };
    let left = assemble(ring, cfg.n, ms)?;
    let right = assemble(ring, cfg.n, ns)?;
    let oracle = oracle_on(&left.object, &right.object, cfg.oracle_cap)?;
    let decided = rep.verdict == Verdict::Iso;
    list.check(ORACLE_AGREES, decided == oracle.is_iso(), || {
        format!("decide {:?}, oracle {:?}, left {:?}, right {:?}", rep.verdict, oracle.is_iso(), specs(ms), specs(ns))
    });
    for bij in &rep.bijections {
        let ok = bij
            .pairs
            .iter()
            .map(|&(k, l)| same_class(&ms[k], &ns[l], bij.level, bij.kind))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|x| x);
        list.check(BIJECTIONS_VERIFIED, ok, || format!("level {} {}", bij.level, bij.kind));
    }
    if let OracleOutcome::Iso { witness, .. } = &oracle {
        let f = HomElement { images: witness.clone() };
        for i in 1..=cfg.n {
            for kind in ClassKind::BOTH {
                let res = extract_digraph(&f, &left, &right, i, kind, cfg.hall_max_r);
                match res {
                    Ok(_) => list.check(DIGRAPH_EXTRACTS, true, String::new),
                    Err(e) if e.is_violation() || matches!(e, Error::NotAnIsomorphism) => {
                        list.check(DIGRAPH_EXTRACTS, false, || format!("{e}"))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((rep, oracle))
}

fn specs(objs: &[ChainObject]) -> String {
    let v: Vec<_> = objs.iter().map(|o| o.spec()).collect();
    format!("{v:?}")
}

/// Instance shapes for oracle comparisons: a planted isomorphism, an
/// unrelated pair, or a pair whose sums have equal level orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceShape {
    Planted,
    Random,
    NearMiss,
}

pub fn random_instance<R: Rng>(
    ring: ChainRing,
    n: usize,
    side_budget: u64,
    shape: InstanceShape,
    opts: RandomOptions,
    rng: &mut R,
) -> Result<(Vec<ChainObject>, Vec<ChainObject>)> {
    let r = rng.gen_range(1..=3);
    let ms = random_list(ring, n, r, side_budget, opts, rng)?;
    let ns = match shape {
        InstanceShape::Planted => {
            let mut ns = ms.iter().map(|o| reembed(o, rng)).collect::<Result<Vec<_>>>()?;
            ns.shuffle(rng);
            ns
        }
        InstanceShape::Random => {
            let s = rng.gen_range(1..=3);
            random_list(ring, n, s, side_budget, opts, rng)?
        }
        InstanceShape::NearMiss => {
            let mut ns = ms.clone();
            let k = rng.gen_range(0..ns.len());
            let target: Vec<u32> = ns[k].levels().iter().map(|l| l.order_log()).collect();
            let budget = ring.p().pow(ns[k].module().order_log());
            for _ in 0..64 {
                let cand = random_object_with(ring, n, budget, opts, rng)?;
                if cand.levels().iter().map(|l| l.order_log()).eq(target.iter().copied()) {
                    ns[k] = cand;
                    break;
                }
            }
            ns.shuffle(rng);
            ns
        }
    };
    Ok((ms, ns))
}

fn decision_family(ring: ChainRing, cfg: &SweepConfig, rng: &mut ChaCha8Rng, list: &mut Checklist) -> Result<()> {
    let n = cfg.n;
    let shape = [InstanceShape::Planted, InstanceShape::Random, InstanceShape::NearMiss][rng.gen_range(0..3)];
    let opts = if rng.gen_bool(0.5) { un_opts() } else { nonzero_opts() };
    let (ms, ns) = random_instance(ring, n, cfg.max_order, shape, opts, rng)?;

    // Permutation invariance and single-object classes need no oracle.
    let mut perm = ms.clone();
    perm.shuffle(rng);
    if ms.iter().all(|o| o.is_in_un()) {
        let v = decide_iso(&ms, &perm)?.verdict;
        list.check(PERMUTATION_INVARIANT, v == Verdict::Iso, || specs(&ms));
    } else {
        let v = decide_iso_general(&ms, &perm)?.verdict;
        list.check(PERMUTATION_INVARIANT, v == Verdict::Iso, || specs(&ms));
    }
    if ms.len() == 1 && ns.len() == 1 && ms[0].is_in_un() && ns[0].is_in_un() {
        let mut all = true;
        for i in 1..=n {
            for kind in ClassKind::BOTH {
                all &= same_class(&ms[0], &ns[0], i, kind)?;
            }
        }
        let v = decide_iso(&ms, &ns)?.verdict;
        list.check(SINGLE_OBJECT_CLASSES, all == (v == Verdict::Iso), || specs(&[ms[0].clone(), ns[0].clone()]));
    }
    check_decision(&ms, &ns, cfg, list).map(|_| ())
}

fn structure_family(ring: ChainRing, cfg: &SweepConfig, rng: &mut ChaCha8Rng, list: &mut Checklist) -> Result<()> {
    let m = random_object_with(ring, cfg.n, cfg.max_order, un_opts(), rng)?;
    let e = EndoRing::new(&m, &cfg.endo)?;
    list.merge(&e.structure_check()?.checklist);
    Ok(())
}

fn pair_family(ring: ChainRing, cfg: &SweepConfig, rng: &mut ChaCha8Rng, list: &mut Checklist) -> Result<()> {
    let m = random_object_with(ring, cfg.n, cfg.max_order, un_opts(), rng)?;
    let other = if rng.gen_bool(0.5) {
        reembed(&m, rng)?
    } else {
        random_object_with(ring, cfg.n, cfg.max_order, un_opts(), rng)?
    };
    list.merge(&verify_pair(&m, &other, &cfg.endo)?.checklist);
    Ok(())
}

fn sum_family(ring: ChainRing, cfg: &SweepConfig, rng: &mut ChaCha8Rng, list: &mut Checklist) -> Result<()> {
    let objs = random_list(ring, cfg.n, 2, cfg.max_order, un_opts(), rng)?;
    let refs: Vec<&ChainObject> = objs.iter().collect();
    list.merge(&max_ideals_of_sum(&refs, &cfg.endo)?.checklist);
    Ok(())
}

fn padding_family(ring: ChainRing, cfg: &SweepConfig, rng: &mut ChaCha8Rng, list: &mut Checklist) -> Result<()> {
    let opts = RandomOptions { require_zero_factor: true, min_order_log: 1, ..Default::default() };
    let m = random_object_with(ring, cfg.n, cfg.max_order, opts, rng)?;
    check_padding(&m, list)
}

/// The identities relating an object with vanishing factors to its padding.
pub fn check_padding(m: &ChainObject, list: &mut Checklist) -> Result<()> {
    let (ring, n) = (m.ring(), m.n());
    let pad = s_padding(m)?;
    let joined = direct_sum_objects(m, &pad)?;
    let zero = ChainObject::zero(ring, n);
    let sn = s_n(ring, n);
    list.check(PADDED_IN_UN, joined.is_in_un(), || format!("{:?}", m.spec()));
    let vanishing = m.zero_levels();
    for i in 1..=n {
        let expected = if vanishing.contains(&i) { Some(1) } else { m.profile()[i - 1].exponent() };
        let got = joined.profile()[i - 1].exponent();
        list.check(PADDED_FACTORS, got == expected && expected.is_some(), || format!("level {i}: {got:?} vs {expected:?}"));
        for kind in ClassKind::BOTH {
            if vanishing.contains(&i) {
                list.check(ZERO_FACTOR_CLASS, same_class(m, &zero, i, kind)?, || format!("level {i} {kind}"));
                let ok = same_class(&joined, &pad, i, kind)? && same_class(&pad, &sn, i, kind)? && same_class(&joined, &sn, i, kind)?;
                list.check(PADDED_SIMPLE_CLASSES, ok, || format!("level {i} {kind}"));
            } else {
                list.check(PADDED_KEEPS_CLASSES, same_class(&joined, m, i, kind)?, || format!("level {i} {kind}"));
            }
        }
    }
    let split = decide_iso_general(std::slice::from_ref(&joined), &[m.clone(), pad.clone()])?;
    list.check(PADDED_SPLITS, split.verdict == Verdict::Iso && split.r == 1 && split.s == 2, || format!("{:?}", split.failure));
    let own = decide_iso_general(std::slice::from_ref(m), std::slice::from_ref(m))?;
    list.check(SELF_ISOMORPHIC, own.verdict == Verdict::Iso, || format!("{:?}", own.failure));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_passes_and_replays() {
        let cfg = SweepConfig::new(2, 2, 2, 12, 7);
        let a = run_sweep(&cfg).unwrap();
        assert!(a.passed(), "{:?}", a.findings);
        assert_eq!(a, run_sweep(&cfg).unwrap());
        for name in [ORACLE_AGREES, CLOSED_FORM_MATCHES, FUNCTORIAL, PADDED_SPLITS] {
            assert!(a.checklist.get(name).is_some_and(|c| c.checked > 0), "{name} never ran");
        }
    }

    #[test]
    fn mutant_is_reported() {
        let cfg = SweepConfig { inject_mutant: true, ..SweepConfig::new(2, 2, 2, 3, 1) };
        let rep = run_sweep(&cfg).unwrap();
        assert!(!rep.passed());
        assert!(rep.findings.iter().all(|f| f.clause == CLOSED_FORM_MATCHES));
        let ring = ChainRing::new(2, 2).unwrap();
        let replay = run_item(ring, &cfg, rep.findings[0].item).unwrap();
        assert!(!replay.checklist.get(CLOSED_FORM_MATCHES).unwrap().passed());
    }

    #[test]
    fn item_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| item_seed(3, k)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
