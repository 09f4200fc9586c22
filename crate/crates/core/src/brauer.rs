//! Abelian number fields as fixed fields inside cyclotomic fields, their
//! decomposition data at rational places, and Brauer classes described by
//! Hasse invariants.
//!
//! A field is a pair (m, S) with S ⊆ (ℤ/mℤ)^×; the field is the fixed field of
//! S inside ℚ(ζ_m), so its Galois group over ℚ is (ℤ/mℤ)^×/S. A Brauer class
//! records one invariant per rational place, shared by every place of the
//! base field above it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::{self, gcd, is_prime, lcm, QmodZ};
use crate::error::{Error, Result};
use crate::groupring::{FiniteGroup, Subgroup};

/// Largest conductor accepted; unit groups are enumerated explicitly.
pub const MAX_CONDUCTOR: u64 = 1 << 22;

/// A subgroup of (ℤ/mℤ)^× kept as a membership mask over residues.
#[derive(Clone)]
struct UnitSubgroup {
    modulus: u64,
    mask: Vec<bool>,
    members: Vec<u64>,
    gens: Vec<u64>,
}

impl UnitSubgroup {
    fn trivial(modulus: u64) -> Self {
        let mut mask = vec![false; modulus as usize];
        let one = 1 % modulus;
        mask[one as usize] = true;
        UnitSubgroup {
            modulus,
            mask,
            members: vec![one],
            gens: Vec::new(),
        }
    }

    fn contains(&self, u: u64) -> bool {
        self.mask[(u % self.modulus) as usize]
    }

    /// Enlarges the subgroup by g; the group is abelian so the result is
    /// the union of the cosets C·gᵏ.
    fn adjoin(&mut self, g: u64) {
        let m = self.modulus;
        let g = g % m;
        if self.contains(g) {
            return;
        }
        self.gens.push(g);
        let base = self.members.clone();
        let mut power = g;
        while !self.mask[power as usize] {
            for &c in &base {
                let x = ((c as u128 * power as u128) % m as u128) as u64;
                self.mask[x as usize] = true;
                self.members.push(x);
            }
            power = ((power as u128 * g as u128) % m as u128) as u64;
        }
    }

    fn sorted_members(&self) -> Vec<u64> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

fn units(m: u64) -> impl Iterator<Item = u64> {
    (0..m).filter(move |&a| gcd(a, m) == 1)
}

/// A rational place: a prime q or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl Place {
    pub fn finite(q: u64) -> Result<Place> {
        if is_prime(q) {
            Ok(Place::Finite(q))
        } else {
            Err(Error::NotPrime(q))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(q) => write!(f, "{q}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

/// The fixed field of S ⊆ (ℤ/mℤ)^× inside ℚ(ζ_m).
#[derive(Clone)]
pub struct AbelianField {
    conductor: u64,
    fixing: UnitSubgroup,
    degree: u64,
}

impl PartialEq for AbelianField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.fixing.mask == other.fixing.mask
    }
}

impl Eq for AbelianField {}

impl fmt::Debug for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbelianField(m={}, S=<{:?}>, deg={})",
            self.conductor, self.fixing.gens, self.degree
        )
    }
}

impl AbelianField {
    pub fn new(conductor: u64, fixing: &[u64]) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::Zero("conductor"));
        }
        if conductor > MAX_CONDUCTOR {
            return Err(Error::Field(format!(
                "conductor {conductor} above {MAX_CONDUCTOR}"
            )));
        }
        let mut s = UnitSubgroup::trivial(conductor);
        for &g in fixing {
            if gcd(g % conductor, conductor) != 1 {
                return Err(Error::Field(format!("{g} is not a unit mod {conductor}")));
            }
            s.adjoin(g);
        }
        let degree = arith::totient(conductor) / s.members.len() as u64;
        Ok(AbelianField {
            conductor,
            fixing: s,
            degree,
        })
    }

    pub fn rationals() -> Self {
        Self::new(1, &[]).expect("ℚ")
    }

    pub fn cyclotomic(m: u64) -> Result<Self> {
        Self::new(m, &[])
    }

    /// The unique subfield of ℚ(ζ_m) of the given degree when (ℤ/mℤ)^× is
    /// cyclic: the fixed field of the subgroup of index `degree`.
    pub fn cyclic_subfield(m: u64, degree: u64) -> Result<Self> {
        let phi = arith::totient(m);
        if degree == 0 || !phi.is_multiple_of(degree) {
            return Err(Error::Field(format!(
                "no subfield of degree {degree} in ℚ(ζ_{m})"
            )));
        }
        let g = units(m)
            .find(|&u| arith::multiplicative_order(u, m) == Some(phi))
            .ok_or_else(|| Error::Field(format!("(ℤ/{m})^× is not cyclic")))?;
        let field = Self::new(m, &[arith::pow_mod(g, degree, m)])?;
        debug_assert_eq!(field.degree, degree);
        Ok(field)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// A generating set of S, as reduced while building it.
    pub fn fixing_generators(&self) -> &[u64] {
        &self.fixing.gens
    }

    pub fn fixing_members(&self) -> Vec<u64> {
        self.fixing.sorted_members()
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    pub fn is_totally_real(&self) -> bool {
        self.conductor <= 2 || self.fixing.contains(self.conductor - 1)
    }

    /// Residues mod M (a multiple of m) whose reduction lies in S.
    fn preimage_mask(&self, big_m: u64) -> Vec<bool> {
        let m = self.conductor;
        (0..big_m)
            .map(|u| gcd(u, big_m) == 1 && self.fixing.contains(u % m))
            .collect()
    }

    /// Containment self ⊆ other, decided in ℚ(ζ_M) for M = lcm of conductors.
    pub fn is_subfield_of(&self, other: &AbelianField) -> bool {
        if self.degree == 1 {
            return true;
        }
        if !other.degree.is_multiple_of(self.degree) {
            return false;
        }
        let big_m = lcm(self.conductor, other.conductor).expect("conductors are small");
        let mine = self.preimage_mask(big_m);
        let theirs = other.preimage_mask(big_m);
        theirs.iter().zip(&mine).all(|(&t, &s)| !t || s)
    }

    pub fn same_field(&self, other: &AbelianField) -> bool {
        self.degree == other.degree && self.is_subfield_of(other)
    }

    /// The compositum, fixed by the intersection of the preimage groups.
    pub fn compositum(&self, other: &AbelianField) -> Result<AbelianField> {
        let big_m = lcm(self.conductor, other.conductor)?;
        if big_m > MAX_CONDUCTOR {
            return Err(Error::Field(format!("compositum conductor {big_m} too large")));
        }
        let a = self.preimage_mask(big_m);
        let b = other.preimage_mask(big_m);
        let common: Vec<u64> = (0..big_m).filter(|&u| a[u as usize] && b[u as usize]).collect();
        Self::new(big_m, &common)
    }

    /// ⟨S, D_q⟩ for a prime q, where D_q is generated by the inertia units
    /// (≡ 1 mod the prime-to-q part m') and a lift of q mod m'.
    fn decomposition_closure(&self, q: u64) -> UnitSubgroup {
        let m = self.conductor;
        let mut q_part = 1u64;
        while m.is_multiple_of(q_part * q) {
            q_part *= q;
        }
        let m_prime = m / q_part;
        let mut group = self.fixing.clone();
        for k in 0..q_part {
            let u = 1 + m_prime * k;
            if gcd(u, m) == 1 {
                group.adjoin(u % m);
            }
        }
        group.adjoin(frobenius_lift(q, m_prime, q_part));
        group
    }

    fn inertia_is_trivial(&self, q: u64) -> bool {
        let m = self.conductor;
        let mut q_part = 1u64;
        while m.is_multiple_of(q_part * q) {
            q_part *= q;
        }
        let m_prime = m / q_part;
        (0..q_part)
            .map(|k| 1 + m_prime * k)
            .filter(|&u| gcd(u, m) == 1)
            .all(|u| self.fixing.contains(u))
    }

    /// Whether the prime q ramifies in this field.
    pub fn is_ramified(&self, q: u64) -> bool {
        !self.inertia_is_trivial(q)
    }

    /// [K_w : ℚ_v], the same for every place w above v.
    pub fn local_degree(&self, place: Place) -> u64 {
        match place {
            Place::Infinite => {
                if self.is_totally_real() {
                    1
                } else {
                    2
                }
            }
            Place::Finite(q) => {
                if self.degree == 1 {
                    return 1;
                }
                let closure = self.decomposition_closure(q);
                (closure.members.len() / self.fixing.members.len()) as u64
            }
        }
    }

    /// Number of places of this field above the rational place.
    pub fn places_above(&self, place: Place) -> u64 {
        self.degree / self.local_degree(place)
    }

    pub fn galois_group(&self) -> GaloisGroup {
        GaloisGroup::new(self.clone())
    }
}

/// x ≡ q mod m', x ≡ 1 mod q^a, as a residue mod m'·q^a.
fn frobenius_lift(q: u64, m_prime: u64, q_part: u64) -> u64 {
    let m = m_prime * q_part;
    if m == 1 {
        return 0;
    }
    (0..q_part)
        .map(|k| q % m_prime + m_prime * k)
        .find(|&x| x % q_part == 1 % q_part)
        .map(|x| x % m)
        .expect("CRT solution exists for coprime moduli")
}

/// Gal(K/ℚ) = (ℤ/mℤ)^×/S as a table group, with the subgroup-to-fixed-field
/// bridge. Element 0 is the identity coset; elements are ordered by their
/// smallest unit representative.
#[derive(Clone)]
pub struct GaloisGroup {
    field: AbelianField,
    group: Arc<FiniteGroup>,
    reps: Vec<u64>,
    class_of: HashMap<u64, usize>,
}

impl fmt::Debug for GaloisGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisGroup")
            .field("field", &self.field)
            .field("reps", &self.reps)
            .finish()
    }
}

impl GaloisGroup {
    fn new(field: AbelianField) -> Self {
        let m = field.conductor;
        let s = field.fixing.sorted_members();
        let mut class_of = HashMap::new();
        let mut reps = Vec::new();
        for u in units(m) {
            if class_of.contains_key(&u) {
                continue;
            }
            let c = reps.len();
            reps.push(u);
            for &x in &s {
                class_of.insert(((u as u128 * x as u128) % m as u128) as u64, c);
            }
        }
        let table = reps
            .iter()
            .map(|&a| {
                reps.iter()
                    .map(|&b| class_of[&(((a as u128 * b as u128) % m as u128) as u64)])
                    .collect()
            })
            .collect();
        let labels = reps.iter().map(|r| r.to_string()).collect();
        let group = FiniteGroup::from_table(table, Some(labels)).expect("unit quotient is a group");
        GaloisGroup {
            field,
            group: Arc::new(group),
            reps,
            class_of,
        }
    }

    pub fn field(&self) -> &AbelianField {
        &self.field
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn representative(&self, element: usize) -> u64 {
        self.reps[element]
    }

    /// Group element of the class of a unit mod m.
    pub fn element_of_unit(&self, u: u64) -> Result<usize> {
        let m = self.field.conductor;
        self.class_of
            .get(&(u % m))
            .copied()
            .ok_or_else(|| Error::Field(format!("{u} is not a unit mod {m}")))
    }

    /// The fixed field K^T of a subgroup T ⊆ Gal(K/ℚ).
    pub fn fixed_field(&self, sub: &Subgroup) -> Result<AbelianField> {
        if sub.parent().table() != self.group.table() {
            return Err(Error::Group("subgroup is not in this Galois group".into()));
        }
        let m = self.field.conductor;
        let s = self.field.fixing.sorted_members();
        let mut gens: Vec<u64> = s.clone();
        for &t in sub.members() {
            gens.push(self.reps[t]);
        }
        AbelianField::new(m, &gens)
    }

    /// Gal(K/K') as a subgroup, for a subfield K' ⊆ K.
    pub fn subgroup_fixing(&self, sub_field: &AbelianField) -> Result<Subgroup> {
        if !sub_field.is_subfield_of(&self.field) {
            return Err(Error::NotContained(format!("{sub_field:?} ⊄ {:?}", self.field)));
        }
        let members: Vec<usize> = (0..self.group.order())
            .filter(|&g| {
                let f = self.fixed_field(&Subgroup::generated(&self.group, &[g]).expect("element"));
                f.map(|f| sub_field.is_subfield_of(&f)).unwrap_or(false)
            })
            .collect();
        Subgroup::new(&self.group, &members)
    }

    /// The Frobenius class of an unramified prime.
    pub fn frobenius(&self, q: u64) -> Result<usize> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if self.field.is_ramified(q) {
            return Err(Error::Field(format!("{q} ramifies")));
        }
        let m = self.field.conductor;
        let mut q_part = 1u64;
        while m.is_multiple_of(q_part * q) {
            q_part *= q;
        }
        self.element_of_unit(frobenius_lift(q, m / q_part, q_part))
    }
}

/// A Brauer class over an abelian field with invariants uniform above each
/// rational place. Zero invariants are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BrauerClass {
    base: Arc<AbelianField>,
    inv: BTreeMap<Place, QmodZ>,
}

impl fmt::Debug for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BrauerClass{{")?;
        for (i, (p, x)) in self.inv.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {x}")?;
        }
        write!(f, "}} over {:?}", self.base)
    }
}

/// Validates and reduces an invariant assignment over `base`.
pub fn make_class(base: &AbelianField, inv: &[(Place, QmodZ)]) -> Result<BrauerClass> {
    let mut map = BTreeMap::new();
    for &(place, x) in inv {
        if let Place::Finite(q) = place {
            if !is_prime(q) {
                return Err(Error::NotPrime(q));
            }
        }
        if map.insert(place, x).is_some() {
            return Err(Error::Class(format!("place {place} listed twice")));
        }
    }
    BrauerClass::from_map(Arc::new(base.clone()), map)
}

impl BrauerClass {
    fn from_map(base: Arc<AbelianField>, mut inv: BTreeMap<Place, QmodZ>) -> Result<Self> {
        inv.retain(|_, x| !x.is_zero());
        if let Some(x) = inv.get(&Place::Infinite) {
            if x.den() != 2 {
                return Err(Error::Class(format!("real invariant {x} is not 0 or 1/2")));
            }
            if !base.is_totally_real() {
                return Err(Error::Class(
                    "nonzero real invariant over a field with complex places".into(),
                ));
            }
        }
        let class = BrauerClass { base, inv };
        let total = class.invariant_sum()?;
        if !total.is_zero() {
            return Err(Error::Class(format!("invariants sum to {total}, not 0")));
        }
        Ok(class)
    }

    /// Σ over places of K: (number of places above v)·inv(v).
    pub fn invariant_sum(&self) -> Result<QmodZ> {
        self.inv.iter().try_fold(QmodZ::ZERO, |acc, (&p, &x)| {
            acc.checked_add(x.scale_u64(self.base.places_above(p)))
        })
    }

    pub fn trivial(base: &AbelianField) -> Self {
        BrauerClass {
            base: Arc::new(base.clone()),
            inv: BTreeMap::new(),
        }
    }

    pub fn base(&self) -> &AbelianField {
        &self.base
    }

    pub fn invariants(&self) -> &BTreeMap<Place, QmodZ> {
        &self.inv
    }

    pub fn invariant(&self, place: Place) -> QmodZ {
        self.inv.get(&place).copied().unwrap_or(QmodZ::ZERO)
    }

    pub fn is_trivial(&self) -> bool {
        self.inv.is_empty()
    }

    /// Schur index: the lcm of the local orders.
    pub fn index(&self) -> u64 {
        self.inv
            .values()
            .fold(1, |acc, x| lcm(acc, x.order()).expect("index overflow"))
    }

    /// Order in the Brauer group, found by repeated addition.
    pub fn exponent(&self) -> u64 {
        let mut k = 1u64;
        let mut acc = self.clone();
        while !acc.is_trivial() {
            acc = acc.tensor(self).expect("same base");
            k += 1;
        }
        k
    }

    fn check_base(&self, other: &BrauerClass) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base.same_field(&other.base) {
            Ok(())
        } else {
            Err(Error::BaseMismatch(format!(
                "{:?} vs {:?}",
                self.base, other.base
            )))
        }
    }

    pub fn tensor(&self, other: &BrauerClass) -> Result<BrauerClass> {
        self.check_base(other)?;
        let mut inv = self.inv.clone();
        for (&p, &x) in &other.inv {
            let cur = inv.get(&p).copied().unwrap_or(QmodZ::ZERO);
            inv.insert(p, cur.checked_add(x)?);
        }
        inv.retain(|_, x| !x.is_zero());
        Ok(BrauerClass {
            base: self.base.clone(),
            inv,
        })
    }

    pub fn opposite(&self) -> BrauerClass {
        self.power(-1)
    }

    pub fn power(&self, k: i64) -> BrauerClass {
        let mut inv: BTreeMap<Place, QmodZ> = self.inv.iter().map(|(&p, &x)| (p, x.scale(k))).collect();
        inv.retain(|_, x| !x.is_zero());
        BrauerClass {
            base: self.base.clone(),
            inv,
        }
    }

    /// Base change to a field containing the base: invariants scale by the
    /// ratio of local degrees.
    pub fn restrict(&self, target: &AbelianField) -> Result<BrauerClass> {
        if !self.base.is_subfield_of(target) {
            return Err(Error::NotContained(format!("{:?} ⊄ {:?}", self.base, target)));
        }
        let target = Arc::new(target.clone());
        let mut inv = BTreeMap::new();
        for (&p, &x) in &self.inv {
            let (big, small) = (target.local_degree(p), self.base.local_degree(p));
            if big % small != 0 {
                return Err(Error::Consistency(format!("local degree {small} ∤ {big} at {p}")));
            }
            let y = x.scale_u64(big / small);
            if !y.is_zero() {
                inv.insert(p, y);
            }
        }
        Ok(BrauerClass { base: target, inv })
    }

    /// Whether the class becomes trivial over `target`.
    pub fn splits_over(&self, target: &AbelianField) -> Result<bool> {
        Ok(self.restrict(target)?.is_trivial())
    }
}

pub fn index(c: &BrauerClass) -> u64 {
    c.index()
}

pub fn splits(c: &BrauerClass, k: &AbelianField) -> Result<bool> {
    c.splits_over(k)
}

/// A central division algebra over a number field: a class together with a
/// declared degree, which must equal the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionAlgebra {
    class: BrauerClass,
    degree: u64,
}

impl DivisionAlgebra {
    pub fn new(class: BrauerClass, degree: u64) -> Result<Self> {
        let idx = class.index();
        if idx != degree {
            return Err(Error::Degree(format!(
                "declared degree {degree} but the class has index {idx}"
            )));
        }
        Ok(DivisionAlgebra { class, degree })
    }

    /// The division algebra in the class, of degree equal to the index.
    pub fn of_class(class: BrauerClass) -> Self {
        let degree = class.index();
        DivisionAlgebra { class, degree }
    }

    pub fn class(&self) -> &BrauerClass {
        &self.class
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }
}

/// Data of a cyclic algebra Δ(L/ℚ, σ, a) with zⁿ = a.
#[derive(Debug, Clone)]
pub struct CyclicData {
    pub field: AbelianField,
    /// A unit mod the conductor whose class generates Gal(L/ℚ).
    pub generator: u64,
    pub a: Ratio<i64>,
}

/// Hasse invariants of Δ(L/ℚ, σ, a).
///
/// Unramified primes get j·v_q(a)/n with Frob_q = σʲ, the real place gets 1/2
/// exactly when L is imaginary and a < 0, and a single ramified prime is
/// solved from the sum-zero condition. More than one ramified prime is an
/// error: those invariants would need local reciprocity.
pub fn cyclic_algebra(d: &CyclicData) -> Result<BrauerClass> {
    let rationals = AbelianField::rationals();
    if d.a == Ratio::from_integer(0) {
        return Err(Error::Cyclic("a = 0".into()));
    }
    let n = d.field.degree();
    if n == 1 {
        return Ok(BrauerClass::trivial(&rationals));
    }
    let gal = d.field.galois_group();
    let sigma = gal.element_of_unit(d.generator)?;
    if gal.group().element_order(sigma) as u64 != n {
        return Err(Error::Cyclic(format!(
            "{} does not generate a cyclic Galois group of order {n}",
            d.generator
        )));
    }
    // σ^j for j = 0..n
    let mut powers = vec![0usize];
    for _ in 1..n {
        powers.push(gal.group().mul(*powers.last().unwrap(), sigma));
    }
    let num = d.a.numer().unsigned_abs();
    let den = d.a.denom().unsigned_abs();
    let mut primes = arith::prime_divisors(num);
    primes.extend(arith::prime_divisors(den));
    primes.extend(arith::prime_divisors(d.field.conductor()));
    primes.sort_unstable();
    primes.dedup();

    let mut inv = BTreeMap::new();
    let mut undetermined = Vec::new();
    for q in primes {
        if d.field.is_ramified(q) {
            undetermined.push(q);
            continue;
        }
        let v = arith::valuation(q, num.max(1)) as i64 - arith::valuation(q, den) as i64;
        if v == 0 {
            continue;
        }
        let frob = gal.frobenius(q)?;
        let j = powers.iter().position(|&x| x == frob).expect("σ generates") as i128;
        inv.insert(Place::Finite(q), QmodZ::new(j * v as i128, n)?);
    }
    if !d.field.is_totally_real() && d.a < Ratio::from_integer(0) {
        inv.insert(Place::Infinite, QmodZ::new(1, 2)?);
    }
    let partial = inv.values().try_fold(QmodZ::ZERO, |acc, &x| acc.checked_add(x))?;
    match undetermined.as_slice() {
        [] if partial.is_zero() => {}
        [] => {
            return Err(Error::Consistency(format!(
                "unramified invariants sum to {partial}"
            )))
        }
        [q] => {
            inv.insert(Place::Finite(*q), -partial);
        }
        many => {
            return Err(Error::Cyclic(format!(
                "ramified primes {many:?} leave more than one invariant undetermined"
            )))
        }
    }
    BrauerClass::from_map(Arc::new(rationals), inv)
}

/// Convenience: a class over ℚ from `(place, num, den)` triples.
pub fn rational_class(inv: &[(Place, i128, u64)]) -> Result<BrauerClass> {
    let list: Vec<(Place, QmodZ)> = inv
        .iter()
        .map(|&(p, n, d)| QmodZ::new(n, d).map(|x| (p, x)))
        .collect::<Result<_>>()?;
    make_class(&AbelianField::rationals(), &list)
}

/// Degree of an extension K'/K for K ⊆ K'.
pub fn relative_degree(small: &AbelianField, large: &AbelianField) -> Result<u64> {
    if !small.is_subfield_of(large) {
        return Err(Error::NotContained(format!("{small:?} ⊄ {large:?}")));
    }
    let (q, r) = large.degree().div_rem(&small.degree());
    debug_assert_eq!(r, 0);
    Ok(q)
}
