//! Seeded generation of modules, chain objects and automorphisms.
//!
//! An object is drawn as follows: pick a module ⊕Z/p^{a_j} of order at most
//! the budget, build a random composition series by repeatedly adjoining an
//! element of the socle of the current quotient, then cut the series at `n`
//! random nondecreasing points. Cuts whose factors are not cyclic-or-zero are
//! rejected and redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::ChainRing;
use crate::chain::ChainObject;
use crate::error::{Error, Result};
use crate::fmodule::{FModule, Submodule};

const CUT_ATTEMPTS: usize = 64;
const MODULE_ATTEMPTS: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RandomOptions {
    /// Every factor nonzero.
    pub force_un: bool,
    /// At least one zero factor.
    pub require_zero_factor: bool,
    /// Lower bound on the module order as a power of p.
    pub min_order_log: u32,
}

/// A module of order at most `budget`, possibly zero.
pub fn random_module<R: Rng>(ring: ChainRing, budget: u64, rng: &mut R) -> FModule {
    let max_log = order_log_bound(ring, budget);
    let target = rng.gen_range(0..=max_log);
    let mut exponents = Vec::new();
    let mut used = 0;
    while used < target {
        let a = rng.gen_range(1..=ring.e().min(target - used));
        exponents.push(a);
        used += a;
    }
    exponents.sort_unstable();
    FModule::new(ring, exponents).expect("exponents within range")
}

fn order_log_bound(ring: ChainRing, budget: u64) -> u32 {
    let mut k = 0;
    let mut order: u64 = 1;
    while let Some(next) = order.checked_mul(ring.p()) {
        if next > budget || k >= 64 {
            break;
        }
        order = next;
        k += 1;
    }
    k
}

fn random_element<R: Rng>(m: &FModule, rng: &mut R) -> Vec<u64> {
    (0..m.rank()).map(|j| rng.gen_range(0..m.coord_modulus(j))).collect()
}

/// Random composition series 0 = C_0 < C_1 < … < C_L = M.
pub fn random_composition_series<R: Rng>(m: &FModule, rng: &mut R) -> Vec<Submodule> {
    let ring = m.ring();
    let mut series = vec![Submodule::zero(m)];
    for _ in 0..m.order_log() {
        let current = series.last().unwrap().clone();
        let x = loop {
            let x = random_element(m, rng);
            if !current.contains(&x).unwrap() {
                break x;
            }
        };
        // Push x down into the socle of M / current.
        let mut y = x;
        loop {
            let py = m.scale(ring.p(), &y);
            if current.contains(&py).unwrap() {
                break;
            }
            y = py;
        }
        let mut gens = current.generators();
        gens.push(y);
        series.push(Submodule::from_generators(m, &gens).unwrap());
    }
    series
}

fn random_cuts<R: Rng>(len: usize, n: usize, strict: bool, rng: &mut R) -> Vec<usize> {
    let mut inner: Vec<usize> = if strict {
        let mut pool: Vec<usize> = (1..len).collect();
        for i in 0..n - 1 {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(n - 1);
        pool
    } else {
        (0..n - 1).map(|_| rng.gen_range(0..=len)).collect()
    };
    inner.sort_unstable();
    let mut cuts = vec![0];
    cuts.extend(inner);
    cuts.push(len);
    cuts
}

/// Draws an object with cyclic-or-zero factors under the given options.
pub fn random_object_with<R: Rng>(
    ring: ChainRing,
    n: usize,
    budget: u64,
    opts: RandomOptions,
    rng: &mut R,
) -> Result<ChainObject> {
    if n == 0 {
        return Err(Error::LengthMismatch { expected: 1, got: 0 });
    }
    let max_log = order_log_bound(ring, budget);
    let min_log = opts.min_order_log.max(if opts.force_un { n as u32 } else { 0 });
    if min_log > max_log || (opts.force_un && opts.require_zero_factor) {
        return Err(Error::CapExceeded {
            what: "random object budget",
            size: ring.p() as u128,
            cap: budget as u128,
        });
    }
    for _ in 0..MODULE_ATTEMPTS {
        let m = random_module(ring, budget, rng);
        if m.order_log() < min_log {
            continue;
        }
        let series = random_composition_series(&m, rng);
        let len = series.len() - 1;
        for _ in 0..CUT_ATTEMPTS {
            let cuts = random_cuts(len, n, opts.force_un, rng);
            let inner: Vec<Submodule> = cuts[1..n].iter().map(|&c| series[c].clone()).collect();
            let obj = ChainObject::new(&m, inner, n)?;
            let profile = obj.profile();
            if !profile.iter().all(|f| f.is_uniserial_or_zero()) {
                continue;
            }
            if opts.require_zero_factor && !profile.iter().any(|f| f.is_zero()) {
                continue;
            }
            return Ok(obj);
        }
    }
    Err(Error::CapExceeded { what: "random object attempts", size: MODULE_ATTEMPTS as u128, cap: MODULE_ATTEMPTS as u128 })
}

/// Reproducible object with cyclic-or-zero factors and order at most `budget`.
pub fn random_object(ring: ChainRing, n: usize, budget: u64, seed: u64) -> Result<ChainObject> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_object_with(ring, n, budget, RandomOptions::default(), &mut rng)
}

/// Generator images of a random automorphism of `m`.
pub fn random_automorphism<R: Rng>(m: &FModule, rng: &mut R) -> Vec<Vec<u64>> {
    let ring = m.ring();
    let whole = Submodule::whole(m);
    let a = m.exponents();
    loop {
        let images: Vec<Vec<u64>> = (0..m.rank())
            .map(|j| {
                (0..m.rank())
                    .map(|k| {
                        // Image of generator j must be killed by p^{a_j}.
                        let step = ring.pow(a[k].saturating_sub(a[j]));
                        let choices = m.coord_modulus(k) / step;
                        rng.gen_range(0..choices) * step
                    })
                    .collect()
            })
            .collect();
        if Submodule::from_generators(m, &images).unwrap() == whole {
            return images;
        }
    }
}

/// The same object seen through a random automorphism of its module.
pub fn reembed<R: Rng>(obj: &ChainObject, rng: &mut R) -> Result<ChainObject> {
    let images = random_automorphism(obj.module(), rng);
    obj.transport(&images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let r = ChainRing::new(2, 3).unwrap();
        for seed in 0..20 {
            assert_eq!(random_object(r, 3, 256, seed).unwrap(), random_object(r, 3, 256, seed).unwrap());
        }
    }

    #[test]
    fn objects_respect_options() {
        let r = ChainRing::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let opts = RandomOptions { force_un: true, ..Default::default() };
            let obj = random_object_with(r, 2, 729, opts, &mut rng).unwrap();
            assert!(obj.is_in_un());
            assert!(obj.module().order() <= 729);
            let opts = RandomOptions { require_zero_factor: true, ..Default::default() };
            let obj = random_object_with(r, 3, 729, opts, &mut rng).unwrap();
            assert!(!obj.zero_levels().is_empty());
            assert!(obj.require_uniserial_factors().is_ok());
        }
        let opts = RandomOptions { force_un: true, ..Default::default() };
        assert!(random_object_with(r, 3, 9, opts, &mut rng).unwrap_err().is_cap());
    }

    #[test]
    fn composition_series_has_simple_steps() {
        let r = ChainRing::new(2, 3).unwrap();
        let m = FModule::new(r, vec![1, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let series = random_composition_series(&m, &mut rng);
        assert_eq!(series.len(), 5);
        for (i, s) in series.iter().enumerate() {
            assert_eq!(s.order_log(), i as u32);
        }
    }

    #[test]
    fn automorphisms_preserve_profile() {
        let r = ChainRing::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..20 {
            let obj = random_object(r, 2, 64, seed).unwrap();
            let moved = reembed(&obj, &mut rng).unwrap();
            assert_eq!(obj.profile(), moved.profile());
        }
    }
}
