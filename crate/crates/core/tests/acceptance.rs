//! Acceptance run: one pass/fail line per criterion. Thresholds and limits
//! are the constants below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chainmod::arith::ChainRing;
use chainmod::decomposition::{DEFAULT_HALL_MAX_R, DEFAULT_ORACLE_CAP};
use chainmod::endo::{max_ideals_of_sum, verify_pair, EndoConfig, EndoRing};
use chainmod::random::{random_object_with, reembed, RandomOptions};
use chainmod::report::Checklist;
use chainmod::sweep::{
    check_decision, check_padding, random_instance, random_list, run_sweep, InstanceShape, SweepConfig, DIGRAPH_EXTRACTS,
    ORACLE_AGREES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5EED;
const MIN_ORACLE_INSTANCES: usize = 200;
const MAX_INSTANCE_TIME: Duration = Duration::from_secs(5);
const SIDE_ORDER_LOG2: u32 = 10;
const MIN_STRUCTURE_OBJECTS: usize = 100;
const MAX_ENDO_ORDER: usize = 1 << 12;
const MIN_CLASS_EQUAL_PAIRS: usize = 50;
const MIN_SUMS: usize = 20;
const MIN_DIGRAPH_ISOS: usize = 50;
const MIN_PADDING_OBJECTS: usize = 50;
const REPLAY_COUNT: usize = 20;

/// (p, e, n) combinations drawn from p ∈ {2,3}, e ≤ 3, n ∈ {2,3}.
const SHAPES: [(u64, u32, usize); 12] = [
    (2, 1, 2),
    (2, 2, 2),
    (2, 3, 2),
    (3, 1, 2),
    (3, 2, 2),
    (3, 3, 2),
    (2, 1, 3),
    (2, 2, 3),
    (2, 3, 3),
    (3, 1, 3),
    (3, 2, 3),
    (3, 3, 3),
];

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, text: String) -> Line {
    Line { ok, text }
}

/// Largest power of p not above 2^SIDE_ORDER_LOG2.
fn side_budget(p: u64) -> u64 {
    let mut b = 1;
    while b * p <= 1 << SIDE_ORDER_LOG2 {
        b *= p;
    }
    b
}

fn oracle_suite(rng: &mut ChaCha8Rng) -> (Line, Line) {
    let mut within = 0;
    let mut over_cap = 0;
    let mut disagree = 0;
    let mut isos = 0;
    let mut digraph_failures = 0;
    let mut slowest = Duration::ZERO;
    let mut attempt = 0usize;
    while (within < MIN_ORACLE_INSTANCES || isos < MIN_DIGRAPH_ISOS) && attempt < 20 * MIN_ORACLE_INSTANCES {
        let (p, e, n) = SHAPES[attempt % SHAPES.len()];
        let shape = [InstanceShape::Planted, InstanceShape::Random, InstanceShape::NearMiss][(attempt / SHAPES.len()) % 3];
        attempt += 1;
        let ring = ChainRing::new(p, e).unwrap();
        let opts = if rng.gen_bool(0.5) {
            RandomOptions { force_un: true, ..Default::default() }
        } else {
            RandomOptions { min_order_log: 1, ..Default::default() }
        };
        // Smaller budgets keep most instances within the oracle cap.
        let budget = side_budget(p).min(p.pow(rng.gen_range(n as u32..=3 * n as u32)));
        let Ok((ms, ns)) = random_instance(ring, n, budget, shape, opts, rng) else { continue };
        let cfg = SweepConfig { oracle_cap: DEFAULT_ORACLE_CAP, hall_max_r: DEFAULT_HALL_MAX_R, ..SweepConfig::new(p, e, n, 0, 0) };
        let mut list = Checklist::new();
        let start = Instant::now();
        match check_decision(&ms, &ns, &cfg, &mut list) {
            Ok((_, oracle)) => {
                slowest = slowest.max(start.elapsed());
                within += 1;
                disagree += list.get(ORACLE_AGREES).map_or(0, |c| c.failed);
                if oracle.is_iso() {
                    isos += 1;
                    digraph_failures += list.get(DIGRAPH_EXTRACTS).map_or(0, |c| c.failed);
                }
            }
            Err(e) if e.is_cap() => over_cap += 1,
            Err(e) => {
                disagree += 1;
                eprintln!("instance {attempt}: {e}");
            }
        }
    }
    let ok1 = within >= MIN_ORACLE_INSTANCES && disagree == 0 && slowest < MAX_INSTANCE_TIME;
    let ok5 = isos >= MIN_DIGRAPH_ISOS && digraph_failures == 0;
    (
        line(
            ok1,
            format!(
                "oracle agreement: {within} instances within cap (need {MIN_ORACLE_INSTANCES}), {over_cap} over cap, \
                 {disagree} disagreements, slowest {:.3} s (limit {} s)",
                slowest.as_secs_f64(),
                MAX_INSTANCE_TIME.as_secs()
            ),
        ),
        line(
            ok5,
            format!("digraph extraction: {isos} isomorphisms (need {MIN_DIGRAPH_ISOS}), {digraph_failures} Hall or permutation failures"),
        ),
    )
}

fn structure_suite(rng: &mut ChaCha8Rng) -> (Line, Line) {
    let cfg = EndoConfig { endo_cap: MAX_ENDO_ORDER as u128, pair_cap: MAX_ENDO_ORDER };
    let mut list = Checklist::new();
    let mut checked = 0;
    let mut attempt = 0;
    while checked < MIN_STRUCTURE_OBJECTS && attempt < 20 * MIN_STRUCTURE_OBJECTS {
        let (p, e, n) = SHAPES[attempt % SHAPES.len()];
        attempt += 1;
        let ring = ChainRing::new(p, e).unwrap();
        let opts = RandomOptions { force_un: true, ..Default::default() };
        let Ok(m) = random_object_with(ring, n, p.pow(2 * n as u32), opts, rng) else { continue };
        let Ok(endo) = EndoRing::new(&m, &cfg) else { continue };
        list.merge(&endo.structure_check().unwrap().checklist);
        checked += 1;
    }
    let bound = "type at most n";
    let others_ok = list.clauses.iter().filter(|c| c.name != bound).all(|c| c.passed());
    let failed: Vec<&str> = list.failed_clauses().iter().map(|c| c.name.as_str()).collect();
    let k_fail = list.get(bound).map_or(usize::MAX, |c| c.failed);
    (
        line(
            checked >= MIN_STRUCTURE_OBJECTS && others_ok,
            format!(
                "endomorphism ring structure: {checked} objects with |E| <= {MAX_ENDO_ORDER} (need {MIN_STRUCTURE_OBJECTS}), \
                 {} clauses, failing {failed:?}",
                list.clauses.len()
            ),
        ),
        line(checked >= MIN_STRUCTURE_OBJECTS && k_fail == 0, format!("type bound k <= n: {k_fail} violations over {checked} objects")),
    )
}

fn pair_suite(rng: &mut ChaCha8Rng) -> Line {
    let cfg = EndoConfig::default();
    let opts = RandomOptions { force_un: true, ..Default::default() };
    let mut list = Checklist::new();
    let (mut class_equal, mut sums, mut attempt) = (0, 0, 0);
    while (class_equal < MIN_CLASS_EQUAL_PAIRS || sums < MIN_SUMS) && attempt < 40 * MIN_CLASS_EQUAL_PAIRS {
        let (p, e, n) = SHAPES[attempt % SHAPES.len()];
        attempt += 1;
        let ring = ChainRing::new(p, e).unwrap();
        let budget = p.pow(n as u32 + 1);
        let Ok(m) = random_object_with(ring, n, budget, opts, rng) else { continue };
        let other = if rng.gen_bool(0.5) { reembed(&m, rng).unwrap() } else {
            let Ok(o) = random_object_with(ring, n, budget, opts, rng) else { continue };
            o
        };
        if class_equal < MIN_CLASS_EQUAL_PAIRS {
            match verify_pair(&m, &other, &cfg) {
                Ok(rep) => {
                    if rep.same.iter().flatten().any(|&s| s) {
                        class_equal += 1;
                    }
                    list.merge(&rep.checklist);
                }
                Err(e) if e.is_cap() => {}
                Err(e) => panic!("{e}"),
            }
        }
        if sums < MIN_SUMS {
            // Each summand needs order at least p^n.
            let Ok(objs) = random_list(ring, n, 2, p.pow(2 * n as u32), opts, rng) else { continue };
            let refs: Vec<_> = objs.iter().collect();
            match max_ideals_of_sum(&refs, &cfg) {
                Ok(rep) => {
                    sums += 1;
                    list.merge(&rep.checklist);
                }
                Err(e) if e.is_cap() => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    let failed: Vec<&str> = list.failed_clauses().iter().map(|c| c.name.as_str()).collect();
    line(
        class_equal >= MIN_CLASS_EQUAL_PAIRS && sums >= MIN_SUMS && list.passed(),
        format!(
            "ideals across objects: {class_equal} class-equal pairs (need {MIN_CLASS_EQUAL_PAIRS}), {sums} sums (need {MIN_SUMS}), \
             {} clauses, failing {failed:?}",
            list.clauses.len()
        ),
    )
}

fn padding_suite(rng: &mut ChaCha8Rng) -> Line {
    let mut list = Checklist::new();
    let (mut checked, mut attempt) = (0, 0);
    while checked < MIN_PADDING_OBJECTS && attempt < 20 * MIN_PADDING_OBJECTS {
        let (p, e, n) = SHAPES[attempt % SHAPES.len()];
        attempt += 1;
        let ring = ChainRing::new(p, e).unwrap();
        let opts = RandomOptions { require_zero_factor: true, min_order_log: 1, ..Default::default() };
        let Ok(m) = random_object_with(ring, n, p.pow(4), opts, rng) else { continue };
        check_padding(&m, &mut list).unwrap();
        checked += 1;
    }
    let failed: Vec<&str> = list.failed_clauses().iter().map(|c| c.name.as_str()).collect();
    line(
        checked >= MIN_PADDING_OBJECTS && list.passed(),
        format!("padding identities: {checked} objects with a vanishing factor (need {MIN_PADDING_OBJECTS}), failing {failed:?}"),
    )
}

fn replay_suite() -> Line {
    let cfg = SweepConfig::new(2, 2, 2, REPLAY_COUNT, SEED);
    let a = run_sweep(&cfg).unwrap();
    let b = run_sweep(&cfg).unwrap();
    let mutant = SweepConfig { inject_mutant: true, ..cfg };
    let m1 = run_sweep(&mutant).unwrap();
    let m2 = run_sweep(&mutant).unwrap();
    let ok = a == b && m1.findings == m2.findings && !m1.findings.is_empty() && a.findings.is_empty();
    line(
        ok,
        format!(
            "deterministic replay: {REPLAY_COUNT}-item sweep identical across runs ({} findings), mutant sweep identical ({} findings)",
            a.findings.len(),
            m1.findings.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (oracle, digraph) = oracle_suite(&mut rng);
    let (structure, bound) = structure_suite(&mut rng);
    let pairs = pair_suite(&mut rng);
    let padding = padding_suite(&mut rng);
    let replay = replay_suite();
    let lines = [oracle, structure, bound, pairs, digraph, padding, replay];
    for (i, l) in lines.iter().enumerate() {
        println!("[{}] criterion {}: {}", if l.ok { "PASS" } else { "FAIL" }, i + 1, l.text);
    }
    if lines.iter().all(|l| l.ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
