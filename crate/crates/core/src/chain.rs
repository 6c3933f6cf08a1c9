//! Objects of the chain category: a module with a fixed chain
//! 0 = M^(0) ≤ M^(1) ≤ … ≤ M^(n) = M, and constructions on them.

use serde::{Deserialize, Serialize};

use crate::arith::ChainRing;
use crate::error::{Error, Result};
use crate::fmodule::{DirectSum, FModule, Submodule, Subquotient};

/// Shape of one factor module M^(i)/M^(i-1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Zero,
    /// Z/p^a, the only nonzero uniserial shape over Z/p^e.
    Cyclic(u32),
    /// Not uniserial; carries the cyclic decomposition.
    Decomposable(Vec<u32>),
}

impl Factor {
    pub fn of_subquotient(q: &Subquotient) -> Self {
        match q.exponents() {
            [] => Factor::Zero,
            [a] => Factor::Cyclic(*a),
            many => Factor::Decomposable(many.to_vec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Factor::Zero)
    }

    pub fn is_uniserial_or_zero(&self) -> bool {
        !matches!(self, Factor::Decomposable(_))
    }

    /// Exponent of a cyclic factor; 0 for the zero factor.
    pub fn exponent(&self) -> Option<u32> {
        match self {
            Factor::Zero => Some(0),
            Factor::Cyclic(a) => Some(*a),
            Factor::Decomposable(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainObject {
    module: FModule,
    levels: Vec<Submodule>,
    factors: Vec<Subquotient>,
}

impl ChainObject {
    /// Builds an object of chain length `n` from the `n - 1` inner levels;
    /// the endpoints 0 and the whole module are implicit.
    pub fn new(module: &FModule, inner: Vec<Submodule>, n: usize) -> Result<Self> {
        if n == 0 || inner.len() + 1 != n {
            return Err(Error::LengthMismatch { expected: n.saturating_sub(1), got: inner.len() });
        }
        let mut levels = Vec::with_capacity(n + 1);
        levels.push(Submodule::zero(module));
        for s in inner {
            if s.parent() != module {
                return Err(Error::ParentMismatch);
            }
            levels.push(s);
        }
        levels.push(Submodule::whole(module));
        Self::from_levels(module, levels)
    }

    fn from_levels(module: &FModule, levels: Vec<Submodule>) -> Result<Self> {
        let mut factors = Vec::with_capacity(levels.len() - 1);
        for i in 1..levels.len() {
            if !levels[i - 1].leq(&levels[i])? {
                return Err(Error::NotIncreasing { index: i });
            }
            factors.push(Subquotient::new(&levels[i], &levels[i - 1])?);
        }
        Ok(ChainObject { module: module.clone(), levels, factors })
    }

    /// Builds an object from generator lists for the inner levels.
    pub fn from_generators(module: &FModule, inner: &[Vec<Vec<u64>>]) -> Result<Self> {
        let subs = inner
            .iter()
            .map(|gens| Submodule::from_generators(module, gens))
            .collect::<Result<Vec<_>>>()?;
        Self::new(module, subs, inner.len() + 1)
    }

    pub fn zero(ring: ChainRing, n: usize) -> Self {
        let module = FModule::zero(ring);
        Self::new(&module, vec![Submodule::zero(&module); n - 1], n).expect("zero object")
    }

    pub fn ring(&self) -> ChainRing {
        self.module.ring()
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn module(&self) -> &FModule {
        &self.module
    }

    /// M^(i) for i in 0..=n.
    pub fn level(&self, i: usize) -> &Submodule {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Submodule] {
        &self.levels
    }

    /// The i-th factor M^(i)/M^(i-1), for i in 1..=n.
    pub fn factor(&self, i: usize) -> &Subquotient {
        &self.factors[i - 1]
    }

    pub fn profile(&self) -> Vec<Factor> {
        self.factors.iter().map(Factor::of_subquotient).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    pub fn is_in_un(&self) -> bool {
        self.profile().iter().all(|f| matches!(f, Factor::Cyclic(_)))
    }

    /// Levels (1-based) whose factor vanishes.
    pub fn zero_levels(&self) -> Vec<usize> {
        self.profile().iter().enumerate().filter(|(_, f)| f.is_zero()).map(|(i, _)| i + 1).collect()
    }

    /// Fails with the first factor that is neither zero nor cyclic.
    pub fn require_uniserial_factors(&self) -> Result<()> {
        for (i, f) in self.profile().into_iter().enumerate() {
            if let Factor::Decomposable(exponents) = f {
                return Err(Error::NonUniserialFactor { index: i + 1, exponents });
            }
        }
        Ok(())
    }

    /// The object with the same module and levels mapped by the automorphism
    /// sending generator j to `images[j]`.
    pub fn transport(&self, images: &[Vec<u64>]) -> Result<Self> {
        let levels = self
            .levels
            .iter()
            .map(|s| {
                let gens: Vec<Vec<u64>> =
                    s.generators().iter().map(|g| self.module.linear_image(images, g)).collect();
                Submodule::from_generators(&self.module, &gens)
            })
            .collect::<Result<Vec<_>>>()?;
        if levels.last() != Some(&Submodule::whole(&self.module)) {
            return Err(Error::NotAnIsomorphism);
        }
        Self::from_levels(&self.module, levels)
    }
}

/// Plain description of an object: the module exponents and generator lists
/// for the inner levels M^(1), …, M^(n-1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub exponents: Vec<u32>,
    pub chain: Vec<Vec<Vec<u64>>>,
}

impl ObjectSpec {
    pub fn build(&self, ring: ChainRing) -> Result<ChainObject> {
        let module = FModule::new(ring, self.exponents.clone())?;
        for gens in &self.chain {
            for g in gens {
                module.check_element(g)?;
            }
        }
        ChainObject::from_generators(&module, &self.chain)
    }
}

impl ChainObject {
    /// Description using the canonical level bases, so equal objects give
    /// equal descriptions.
    pub fn spec(&self) -> ObjectSpec {
        ObjectSpec {
            exponents: self.module.exponents().to_vec(),
            chain: (1..self.n()).map(|i| self.level(i).generators()).collect(),
        }
    }
}

/// The split chain 0 ≤ M₁ ≤ M₁⊕M₂ ≤ … ≤ M₁⊕…⊕Mₙ.
pub fn split_chain(ring: ChainRing, modules: &[FModule]) -> Result<ChainObject> {
    if modules.is_empty() {
        return Err(Error::LengthMismatch { expected: 1, got: 0 });
    }
    let parts: Vec<&FModule> = modules.iter().collect();
    let sum = DirectSum::new(ring, &parts)?;
    let inner = (1..modules.len())
        .map(|i| {
            let gens: Vec<Vec<u64>> = (0..sum.offsets[i]).map(|j| sum.module.basis_element(j)).collect();
            Submodule::from_generators(&sum.module, &gens)
        })
        .collect::<Result<Vec<_>>>()?;
    ChainObject::new(&sum.module, inner, modules.len())
}

/// Prefix chain on (Z/p)^{counts[n]}: level i is spanned by the first
/// `counts[i]` coordinates.
fn prefix_object(ring: ChainRing, counts: &[usize]) -> ChainObject {
    let n = counts.len() - 1;
    let module = FModule::new(ring, vec![1; counts[n]]).expect("simple powers");
    let inner = (1..n)
        .map(|i| {
            let gens: Vec<Vec<u64>> = (0..counts[i]).map(|j| module.basis_element(j)).collect();
            Submodule::from_generators(&module, &gens).expect("prefix generators")
        })
        .collect();
    ChainObject::new(&module, inner, n).expect("prefix chain")
}

/// The padding object: a copy of the simple module Z/p enters at exactly the
/// levels where `obj` has a zero factor, so `obj ⊕ s_padding(obj)` has only
/// nonzero cyclic factors.
pub fn s_padding(obj: &ChainObject) -> Result<ChainObject> {
    obj.require_uniserial_factors()?;
    let mut counts = vec![0usize];
    for f in obj.profile() {
        let last = *counts.last().unwrap();
        counts.push(if f.is_zero() { last + 1 } else { last });
    }
    Ok(prefix_object(obj.ring(), &counts))
}

/// 0 < S < S⊕S < … < Sⁿ with S = Z/p.
pub fn s_n(ring: ChainRing, n: usize) -> ChainObject {
    prefix_object(ring, &(0..=n).collect::<Vec<_>>())
}

/// The direct sum with (M⊕N)^(i) = M^(i) ⊕ N^(i), plus its coordinate blocks.
pub fn direct_sum_all(ring: ChainRing, n: usize, objs: &[&ChainObject]) -> Result<(ChainObject, DirectSum)> {
    for o in objs {
        if o.ring() != ring {
            return Err(Error::ParentMismatch);
        }
        if o.n() != n {
            return Err(Error::LengthMismatch { expected: n, got: o.n() });
        }
    }
    let modules: Vec<&FModule> = objs.iter().map(|o| o.module()).collect();
    let sum = DirectSum::new(ring, &modules)?;
    let inner = (1..n)
        .map(|i| {
            let mut gens = Vec::new();
            for (k, o) in objs.iter().enumerate() {
                for g in o.level(i).generators() {
                    gens.push(sum.inject(k, &g));
                }
            }
            Submodule::from_generators(&sum.module, &gens)
        })
        .collect::<Result<Vec<_>>>()?;
    let obj = ChainObject::new(&sum.module, inner, n)?;
    Ok((obj, sum))
}

pub fn direct_sum_objects(x: &ChainObject, y: &ChainObject) -> Result<ChainObject> {
    if x.ring() != y.ring() {
        return Err(Error::ParentMismatch);
    }
    Ok(direct_sum_all(x.ring(), x.n(), &[x, y])?.0)
}
