//! Index-reduction gcd engines for a single transfer and for a pair of
//! transfers.
//!
//! For A/K of degree r and n | r, the index of B over the function field of
//! the transfer of the rank-n ideal variety of A is the gcd, over all
//! α ∈ (ℤ/rℤ)[G/H], of
//!
//! ```text
//!     index(B ⊗ A^α) · [K(α):F] · |α|
//! ```
//!
//! The algebras A^α sit behind the [`IndexOracle`] boundary. The shipped
//! oracles cover the split case, classes extended from the base field
//! (where A^α is A raised to the coefficient sum of α), and lookup tables.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::big;
use crate::brauer::{AbelianField, GaloisGroup};
use crate::engine::{self, GcdFold};
use crate::error::{Error, Result};
use crate::generic::MixedClass;
use crate::groupring::{all_subgroups, CosetSpace, FiniteGroup, GroupRingElement, Subgroup};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0;

/// G ⊇ H acting on G/H, the modulus r = deg A, the target divisor n, and
/// optionally the Galois-group bridge that turns subgroups into fields.
#[derive(Clone, Debug)]
pub struct TransferSetup {
    space: Arc<CosetSpace>,
    r: u64,
    n: u64,
    bridge: Option<GaloisGroup>,
}

impl TransferSetup {
    pub fn new(sub: &Subgroup, r: u64, n: u64) -> Result<Self> {
        if r == 0 || n == 0 {
            return Err(Error::Zero("transfer modulus or target"));
        }
        Ok(TransferSetup {
            space: CosetSpace::new(sub),
            r,
            n,
            bridge: None,
        })
    }

    /// G = Gal(top/ℚ) and H = Gal(top/K) for a subfield K of `top`.
    pub fn over_field(top: &AbelianField, k: &AbelianField, r: u64, n: u64) -> Result<Self> {
        let gal = top.galois_group();
        let h = gal.subgroup_fixing(k)?;
        let mut setup = Self::new(&h, r, n)?;
        setup.bridge = Some(gal);
        Ok(setup)
    }

    pub fn space(&self) -> &Arc<CosetSpace> {
        &self.space
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.space.group()
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn bridge(&self) -> Option<&GaloisGroup> {
        self.bridge.as_ref()
    }

    pub fn module_size(&self) -> Option<u64> {
        self.space.module_size(self.r)
    }

    pub(crate) fn check(&self, alpha: &GroupRingElement) -> Result<()> {
        if alpha.modulus() != self.r || **alpha.space() != *self.space {
            return Err(Error::Precondition(
                "element does not live in this setup's module".into(),
            ));
        }
        Ok(())
    }
}

/// How to walk the module(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Exhaustive {
        budget: u64,
    },
    Sampled {
        seed: u64,
        samples: u64,
    },
    /// Exhaustive when within budget, otherwise seeded sampling.
    Auto {
        budget: u64,
        seed: u64,
        samples: u64,
    },
}

impl Default for EnumerationMode {
    fn default() -> Self {
        EnumerationMode::Auto {
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// The plan actually executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Resolved {
    Exhaustive { total: u64 },
    Sampled { seed: u64, samples: u64 },
}

impl Resolved {
    fn len(&self) -> u64 {
        match *self {
            Resolved::Exhaustive { total } => total,
            Resolved::Sampled { samples, .. } => samples,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, Resolved::Sampled { .. })
    }
}

/// Walks a product of modules (ℤ/r_kℤ)[G_k/H_k] by flat index.
pub(crate) struct Domain {
    factors: Vec<(Arc<CosetSpace>, u64)>,
    sizes: Vec<Option<u64>>,
    pub(crate) plan: Resolved,
}

impl Domain {
    pub(crate) fn new(factors: Vec<(Arc<CosetSpace>, u64)>, mode: EnumerationMode) -> Result<Self> {
        let sizes: Vec<Option<u64>> = factors.iter().map(|(s, r)| s.module_size(*r)).collect();
        let total = sizes
            .iter()
            .try_fold(1u64, |acc, s| s.and_then(|s| acc.checked_mul(s)));
        let describe = || {
            factors
                .iter()
                .map(|(s, r)| format!("{r}^{}", s.len()))
                .collect::<Vec<_>>()
                .join("·")
        };
        let plan = match mode {
            EnumerationMode::Exhaustive { budget } => match total {
                Some(t) if t <= budget => Resolved::Exhaustive { total: t },
                _ => {
                    return Err(Error::Budget {
                        needed: describe(),
                        budget,
                    })
                }
            },
            EnumerationMode::Sampled { seed, samples } => Resolved::Sampled {
                seed,
                samples: samples.max(1),
            },
            EnumerationMode::Auto {
                budget,
                seed,
                samples,
            } => match total {
                Some(t) if t <= budget => Resolved::Exhaustive { total: t },
                _ => Resolved::Sampled {
                    seed,
                    samples: samples.max(1),
                },
            },
        };
        Ok(Domain { factors, sizes, plan })
    }

    pub(crate) fn len(&self) -> u64 {
        self.plan.len()
    }

    /// Element tuple at a flat index. In sampled mode index 0 is the zero
    /// tuple and index i draws from ChaCha8 stream i of the seed.
    pub(crate) fn elements(&self, index: u64) -> Result<Vec<GroupRingElement>> {
        match self.plan {
            Resolved::Exhaustive { .. } => {
                let mut rest = index;
                let mut out = Vec::with_capacity(self.factors.len());
                for (k, (space, r)) in self.factors.iter().enumerate().rev() {
                    let size = self.sizes[k].expect("exhaustive sizes fit");
                    out.push(GroupRingElement::from_index(space, *r, rest % size)?);
                    rest /= size;
                }
                out.reverse();
                Ok(out)
            }
            Resolved::Sampled { seed, .. } => {
                if index == 0 {
                    return self
                        .factors
                        .iter()
                        .map(|(s, r)| GroupRingElement::zero(s, *r))
                        .collect();
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                self.factors
                    .iter()
                    .map(|(s, r)| GroupRingElement::random(s, *r, &mut rng))
                    .collect()
            }
        }
    }
}

/// Schur index of B ⊗ A^α.
pub trait IndexOracle: Sync {
    fn index(&self, alpha: &GroupRingElement) -> Result<u64>;
}

/// Schur index of B ⊗ A^α ⊗ A'^β over K(α, β).
pub trait PairIndexOracle: Sync {
    fn index(&self, alpha: &GroupRingElement, beta: &GroupRingElement) -> Result<u64>;
}

impl<F> IndexOracle for F
where
    F: Fn(&GroupRingElement) -> Result<u64> + Sync,
{
    fn index(&self, alpha: &GroupRingElement) -> Result<u64> {
        self(alpha)
    }
}

/// Constant oracle; the value 1 models a split B ⊗ A^α.
#[derive(Debug, Clone, Copy)]
pub struct SplitOracle(pub u64);

impl IndexOracle for SplitOracle {
    fn index(&self, _: &GroupRingElement) -> Result<u64> {
        Ok(self.0)
    }
}

impl PairIndexOracle for SplitOracle {
    fn index(&self, _: &GroupRingElement, _: &GroupRingElement) -> Result<u64> {
        Ok(self.0)
    }
}

/// Lookup table keyed by coefficient vectors (α, or α followed by β).
/// Missing keys fall back to `default` when set, else fail.
#[derive(Debug, Clone, Default)]
pub struct TableOracle {
    pub entries: HashMap<Vec<u64>, u64>,
    pub default: Option<u64>,
}

impl TableOracle {
    fn lookup(&self, key: Vec<u64>) -> Result<u64> {
        match self.entries.get(&key) {
            Some(&v) if v > 0 => Ok(v),
            Some(_) => Err(Error::Oracle(format!("non-positive entry at {key:?}"))),
            None => self
                .default
                .ok_or_else(|| Error::Oracle(format!("no table entry for {key:?}"))),
        }
    }
}

impl IndexOracle for TableOracle {
    fn index(&self, alpha: &GroupRingElement) -> Result<u64> {
        self.lookup(alpha.coeffs().to_vec())
    }
}

impl PairIndexOracle for TableOracle {
    fn index(&self, alpha: &GroupRingElement, beta: &GroupRingElement) -> Result<u64> {
        self.lookup(alpha.coeffs().iter().chain(beta.coeffs()).copied().collect())
    }
}

fn require_rational_base(m: &MixedClass, what: &str) -> Result<()> {
    if m.arith().base().is_rational() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} must be extended from the base field ℚ for the unmoved oracle"
        )))
    }
}

fn subgroup_fields(gal: &GaloisGroup) -> Result<Vec<(Subgroup, AbelianField)>> {
    all_subgroups(gal.group())
        .into_iter()
        .map(|s| gal.fixed_field(&s).map(|f| (s, f)))
        .collect()
}

/// Oracle for classes fixed by Galois: every twist g(Ā) equals Ā, so A^α is
/// A raised to the coefficient sum, over K(α).
///
/// index(α) = index of `base ⊗ twisted^{a}` over K(α), a = Σ n_{gH}.
pub struct UnmovedOracle {
    by_stabilizer: HashMap<Vec<usize>, (MixedClass, MixedClass)>,
}

impl UnmovedOracle {
    pub fn new(setup: &TransferSetup, base: &MixedClass, twisted: &MixedClass) -> Result<Self> {
        let gal = setup
            .bridge()
            .ok_or_else(|| Error::Oracle("unmoved oracle needs a field bridge".into()))?;
        require_rational_base(base, "B")?;
        require_rational_base(twisted, "A")?;
        base.tensor(twisted)?;
        let mut by_stabilizer = HashMap::new();
        for (sub, field) in subgroup_fields(gal)? {
            by_stabilizer.insert(
                sub.members().to_vec(),
                (base.restrict(&field)?, twisted.restrict(&field)?),
            );
        }
        Ok(UnmovedOracle { by_stabilizer })
    }
}

impl IndexOracle for UnmovedOracle {
    fn index(&self, alpha: &GroupRingElement) -> Result<u64> {
        let stab = alpha.stabilizer();
        let (b, a) = self
            .by_stabilizer
            .get(stab.members())
            .ok_or_else(|| Error::Oracle("stabilizer outside the bridge's group".into()))?;
        let a_pow = i64::try_from(alpha.coefficient_sum()).map_err(|_| Error::Overflow("coefficient sum"))?;
        b.tensor(&a.power(a_pow))?.index_here()
    }
}

/// Pair version of [`UnmovedOracle`]: `base ⊗ A₁^{a} ⊗ A₂^{b}` over the
/// compositum K(α)K'(β).
pub struct UnmovedPairOracle {
    by_stabilizers: HashMap<(Vec<usize>, Vec<usize>), [MixedClass; 3]>,
}

impl UnmovedPairOracle {
    pub fn new(
        first: &TransferSetup,
        second: &TransferSetup,
        base: &MixedClass,
        twisted1: &MixedClass,
        twisted2: &MixedClass,
    ) -> Result<Self> {
        let missing = || Error::Oracle("unmoved oracle needs field bridges".into());
        let g1 = first.bridge().ok_or_else(missing)?;
        let g2 = second.bridge().ok_or_else(missing)?;
        require_rational_base(base, "B")?;
        require_rational_base(twisted1, "A")?;
        require_rational_base(twisted2, "A'")?;
        base.tensor(twisted1)?.tensor(twisted2)?;
        let fields2 = subgroup_fields(g2)?;
        let mut by_stabilizers = HashMap::new();
        for (s1, f1) in subgroup_fields(g1)? {
            for (s2, f2) in &fields2 {
                let k = f1.compositum(f2)?;
                let entry = [base.restrict(&k)?, twisted1.restrict(&k)?, twisted2.restrict(&k)?];
                by_stabilizers.insert((s1.members().to_vec(), s2.members().to_vec()), entry);
            }
        }
        Ok(UnmovedPairOracle { by_stabilizers })
    }
}

impl PairIndexOracle for UnmovedPairOracle {
    fn index(&self, alpha: &GroupRingElement, beta: &GroupRingElement) -> Result<u64> {
        let key = (
            alpha.stabilizer().members().to_vec(),
            beta.stabilizer().members().to_vec(),
        );
        let [b, a1, a2] = self
            .by_stabilizers
            .get(&key)
            .ok_or_else(|| Error::Oracle("stabilizers outside the bridges' groups".into()))?;
        let pa = i64::try_from(alpha.coefficient_sum()).map_err(|_| Error::Overflow("coefficient sum"))?;
        let pb = i64::try_from(beta.coefficient_sum()).map_err(|_| Error::Overflow("coefficient sum"))?;
        b.tensor(&a1.power(pa))?.tensor(&a2.power(pb))?.index_here()
    }
}

/// oracle(α) · [K(α):F] · |α|.
pub fn term_value<O: IndexOracle + ?Sized>(
    setup: &TransferSetup,
    alpha: &GroupRingElement,
    oracle: &O,
) -> Result<BigUint> {
    setup.check(alpha)?;
    let s = oracle.index(alpha)?;
    if s == 0 {
        return Err(Error::Oracle("index 0".into()));
    }
    Ok(big(s) * big(alpha.fixed_degree()) * alpha.weight(setup.n))
}

pub fn pair_term_value<O: PairIndexOracle + ?Sized>(
    first: &TransferSetup,
    second: &TransferSetup,
    alpha: &GroupRingElement,
    beta: &GroupRingElement,
    oracle: &O,
) -> Result<BigUint> {
    first.check(alpha)?;
    second.check(beta)?;
    let s = oracle.index(alpha, beta)?;
    if s == 0 {
        return Err(Error::Oracle("index 0".into()));
    }
    Ok(big(s)
        * big(alpha.fixed_degree())
        * big(beta.fixed_degree())
        * alpha.weight(first.n)
        * beta.weight(second.n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub gcd: BigUint,
    pub witness_alpha: Option<Vec<u64>>,
    pub witness_beta: Option<Vec<u64>>,
    pub terms: u64,
    pub mode: Resolved,
    /// In sampled mode the gcd is only known to be a multiple of the true value.
    pub upper_bound_only: bool,
}

impl ReductionReport {
    fn from_fold(fold: GcdFold, domain: &Domain) -> Result<Self> {
        let witness = fold.witness.map(|i| domain.elements(i)).transpose()?;
        let (witness_alpha, witness_beta) = match witness {
            Some(w) => (
                w.first().map(|e| e.coeffs().to_vec()),
                w.get(1).map(|e| e.coeffs().to_vec()),
            ),
            None => (None, None),
        };
        Ok(ReductionReport {
            gcd: fold.gcd,
            witness_alpha,
            witness_beta,
            terms: fold.count,
            mode: domain.plan,
            upper_bound_only: domain.plan.is_sampled(),
        })
    }
}

/// The single-transfer gcd over (ℤ/rℤ)[G/H].
pub fn reduce_single<O: IndexOracle + ?Sized>(
    setup: &TransferSetup,
    oracle: &O,
    mode: EnumerationMode,
) -> Result<ReductionReport> {
    let domain = Domain::new(vec![(setup.space.clone(), setup.r)], mode)?;
    let fold = engine::fold(domain.len(), |i| {
        let alpha = domain.elements(i)?.pop().expect("one factor");
        term_value(setup, &alpha, oracle)
    })?;
    ReductionReport::from_fold(fold, &domain)
}

/// The double-transfer gcd over pairs (α, β) ∈ R × R'.
pub fn reduce_double<O: PairIndexOracle + ?Sized>(
    first: &TransferSetup,
    second: &TransferSetup,
    oracle: &O,
    mode: EnumerationMode,
) -> Result<ReductionReport> {
    let domain = Domain::new(
        vec![(first.space.clone(), first.r), (second.space.clone(), second.r)],
        mode,
    )?;
    let fold = engine::fold(domain.len(), |i| {
        let pair = domain.elements(i)?;
        pair_term_value(first, second, &pair[0], &pair[1], oracle)
    })?;
    ReductionReport::from_fold(fold, &domain)
}

/// Sequential variant of [`reduce_single`], for comparison and benchmarks.
pub fn reduce_single_sequential<O: IndexOracle + ?Sized>(
    setup: &TransferSetup,
    oracle: &O,
    mode: EnumerationMode,
) -> Result<ReductionReport> {
    let domain = Domain::new(vec![(setup.space.clone(), setup.r)], mode)?;
    let fold = engine::fold_sequential(domain.len(), |i| {
        let alpha = domain.elements(i)?.pop().expect("one factor");
        term_value(setup, &alpha, oracle)
    })?;
    ReductionReport::from_fold(fold, &domain)
}

/// Sequential variant of [`reduce_double`].
pub fn reduce_double_sequential<O: PairIndexOracle + ?Sized>(
    first: &TransferSetup,
    second: &TransferSetup,
    oracle: &O,
    mode: EnumerationMode,
) -> Result<ReductionReport> {
    let domain = Domain::new(
        vec![(first.space.clone(), first.r), (second.space.clone(), second.r)],
        mode,
    )?;
    let fold = engine::fold_sequential(domain.len(), |i| {
        let pair = domain.elements(i)?;
        pair_term_value(first, second, &pair[0], &pair[1], oracle)
    })?;
    ReductionReport::from_fold(fold, &domain)
}
