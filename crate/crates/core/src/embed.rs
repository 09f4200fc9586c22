//! Embedding decisions and simultaneous-embedding scenarios.
//!
//! * [`embed_check`]: D/K of degree a embeds in E/F of degree N = n·a·[K:F]
//!   iff (E ⊗ K) ⊗ D^op has index dividing n.
//! * [`counterexample_run`]: two algebras over a cyclotomic tower, one that
//!   stays a division algebra on every layer and one split from layer 1 on.
//! * [`Thm6Scenario`]: the divisibility-by-N expression over pairs (α, β),
//!   with per-prime valuation certificates.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, big, is_prime, lcm, valuation, valuation_big, QmodZ};
use crate::brauer::{make_class, relative_degree, AbelianField, BrauerClass, Place};
use crate::engine;
use crate::error::{Error, Result};
use crate::generic::{n_ab, MixedClass};
use crate::groupring::{all_subgroups, GroupRingElement};
use crate::reduction::{Domain, EnumerationMode, Resolved, TransferSetup};
use crate::report::{big_as_string, class_entries};

/// Conductor, degree and fixing generators of a field, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSummary {
    pub conductor: u64,
    pub degree: u64,
    pub fixing: Vec<u64>,
}

impl From<&AbelianField> for FieldSummary {
    fn from(f: &AbelianField) -> Self {
        FieldSummary {
            conductor: f.conductor(),
            degree: f.degree(),
            fixing: f.fixing_generators().to_vec(),
        }
    }
}

/// D/K of declared degree a, and E/F of declared degree N with F ⊆ K.
#[derive(Debug, Clone)]
pub struct EmbedInstance {
    d: BrauerClass,
    a: u64,
    e: MixedClass,
    big_n: u64,
    b: u64,
}

impl EmbedInstance {
    pub fn new(d: BrauerClass, a: u64, e: MixedClass, big_n: u64) -> Result<Self> {
        let b = relative_degree(e.arith().base(), d.base())?;
        let idx_d = d.index();
        if idx_d != a {
            return Err(Error::Degree(format!(
                "D declared of degree {a} has index {idx_d}"
            )));
        }
        let idx_e = e.index_here()?;
        if idx_e != big_n {
            return Err(Error::Degree(format!(
                "E declared of degree {big_n} has index {idx_e}"
            )));
        }
        let ab = a.checked_mul(b).ok_or(Error::Overflow("a·b"))?;
        if !big_n.is_multiple_of(ab) {
            return Err(Error::Precondition(format!(
                "a·b = {ab} does not divide N = {big_n}"
            )));
        }
        Ok(EmbedInstance { d, a, e, big_n, b })
    }

    pub fn d(&self) -> &BrauerClass {
        &self.d
    }

    pub fn e(&self) -> &MixedClass {
        &self.e
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    /// n = N / (a·b).
    pub fn n(&self) -> u64 {
        self.big_n / (self.a * self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbedOutcome {
    pub embeddable: bool,
    pub n: u64,
    pub achieved_index: u64,
}

/// Decides whether D embeds in E. An achieved index dividing n must equal
/// n; anything else is reported as a consistency failure.
pub fn embed_check(inst: &EmbedInstance) -> Result<EmbedOutcome> {
    let e_k = inst.e.restrict(inst.d.base())?;
    let achieved = e_k
        .tensor(&MixedClass::arithmetic(inst.d.opposite()))?
        .index_here()?;
    let n = inst.n();
    let embeddable = n.is_multiple_of(achieved);
    if embeddable && achieved != n {
        return Err(Error::Consistency(format!(
            "achieved index {achieved} divides n = {n} without equaling it"
        )));
    }
    Ok(EmbedOutcome {
        embeddable,
        n,
        achieved_index: achieved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerRow {
    pub level: u32,
    pub field: FieldSummary,
    pub index_d1: u64,
    pub index_d2: u64,
    pub expected_d1: u64,
    pub expected_d2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub p1: u64,
    pub p2: u64,
    pub level: u32,
    pub d1: Vec<(String, String)>,
    pub d2: Vec<(String, String)>,
    pub splitting_field: FieldSummary,
    pub layers: Vec<LayerRow>,
    /// D₂ has index p₂ and splits over L, so L is a maximal subfield.
    pub check_a: bool,
    /// D₁ keeps index p₁ on every layer.
    pub check_b: bool,
    /// D₂ splits on every layer from 1 on (index p₂ on layer 0).
    pub check_c: bool,
    pub conclusion: String,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.check_a && self.check_b && self.check_c
    }
}

/// Layer n of the tower: the degree-p₂ⁿ subfield of ℚ(ζ_{p₂ⁿ⁺¹}).
pub fn tower_layer(p2: u64, n: u32) -> Result<AbelianField> {
    if n == 0 {
        return Ok(AbelianField::rationals());
    }
    let m = p2.checked_pow(n + 1).ok_or(Error::Overflow("tower conductor"))?;
    let deg = p2.checked_pow(n).ok_or(Error::Overflow("tower degree"))?;
    AbelianField::cyclic_subfield(m, deg)
}

/// A class over ℚ with invariants {2: 1/2, ∞: 1/2} for p₁ = 2, else
/// {2: 1/p₁, 3: (p₁−1)/p₁}.
pub fn tower_stable_class(p1: u64) -> Result<BrauerClass> {
    let q = AbelianField::rationals();
    if p1 == 2 {
        make_class(
            &q,
            &[
                (Place::Finite(2), QmodZ::new(1, 2)?),
                (Place::Infinite, QmodZ::new(1, 2)?),
            ],
        )
    } else {
        make_class(
            &q,
            &[
                (Place::Finite(2), QmodZ::new(1, p1)?),
                (Place::Finite(3), QmodZ::new(p1 as i128 - 1, p1)?),
            ],
        )
    }
}

const INERT_SEARCH_LIMIT: u64 = 100_000;

/// A degree-p₂ class over ℚ split by the degree-p₂ field L: invariants 1/p₂
/// and (p₂−1)/p₂ at the two smallest primes q ≠ p₂ with local degree p₂.
pub fn layer_split_class(l: &AbelianField, p2: u64) -> Result<BrauerClass> {
    let primes: Vec<u64> = (2..INERT_SEARCH_LIMIT)
        .filter(|&q| q != p2 && is_prime(q) && l.local_degree(Place::Finite(q)) == p2)
        .take(2)
        .collect();
    let [q1, q2] = primes[..] else {
        return Err(Error::Field(format!(
            "fewer than two inert primes below {INERT_SEARCH_LIMIT}"
        )));
    };
    make_class(
        &AbelianField::rationals(),
        &[
            (Place::Finite(q1), QmodZ::new(1, p2)?),
            (Place::Finite(q2), QmodZ::new(p2 as i128 - 1, p2)?),
        ],
    )
}

/// Builds the two algebras and checks them on layers 0..=level.
pub fn counterexample_run(p1: u64, p2: u64, level: u32) -> Result<CounterexampleReport> {
    if !is_prime(p1) {
        return Err(Error::NotPrime(p1));
    }
    if !is_prime(p2) {
        return Err(Error::NotPrime(p2));
    }
    if p1 == p2 {
        return Err(Error::Precondition(format!("p1 = p2 = {p1}")));
    }
    if p2 == 2 {
        return Err(Error::Precondition(
            "p2 = 2: the 2-power cyclotomic tower is not cyclic".into(),
        ));
    }
    let l = tower_layer(p2, 1)?;
    let d1 = tower_stable_class(p1)?;
    let d2 = layer_split_class(&l, p2)?;

    let mut layers = Vec::new();
    for n in 0..=level {
        let f = tower_layer(p2, n)?;
        layers.push(LayerRow {
            level: n,
            field: FieldSummary::from(&f),
            index_d1: d1.restrict(&f)?.index(),
            index_d2: d2.restrict(&f)?.index(),
            expected_d1: p1,
            expected_d2: if n == 0 { p2 } else { 1 },
        });
    }
    let check_a = d2.index() == p2 && d2.splits_over(&l)?;
    let check_b = layers.iter().all(|r| r.index_d1 == r.expected_d1);
    let check_c = layers.iter().all(|r| r.index_d2 == r.expected_d2);
    let conclusion = format!(
        "D1 keeps index {p1} on layers 0..={level} while D2 splits from layer 1 on; \
         no division algebra over the tower contains both"
    );
    Ok(CounterexampleReport {
        p1,
        p2,
        level,
        d1: class_entries(&d1),
        d2: class_entries(&d2),
        splitting_field: FieldSummary::from(&l),
        layers,
        check_a,
        check_b,
        check_c,
        conclusion,
    })
}

struct Joint {
    field: AbelianField,
    classes: [BrauerClass; 2],
}

/// D₁, D₂ over K₁, K₂, extended from classes over ℚ, with N a multiple of
/// lcm(m₁², m₂²) where m_i = d_i·e_i. The modules are (ℤ/r_iℤ)[Gal(K_i/ℚ)]
/// with r_i = N·d_i and target n_i = N/m_i.
pub struct Thm6Scenario {
    rational: [BrauerClass; 2],
    fields: [AbelianField; 2],
    big_n: u64,
    d: [u64; 2],
    e: [u64; 2],
    n: [u64; 2],
    setups: [TransferSetup; 2],
    joints: HashMap<(Vec<usize>, Vec<usize>), Arc<Joint>>,
}

impl std::fmt::Debug for Thm6Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Thm6Scenario")
            .field("N", &self.big_n)
            .field("d", &self.d)
            .field("e", &self.e)
            .field("fields", &self.fields)
            .finish()
    }
}

impl Thm6Scenario {
    pub fn new(
        d1: &BrauerClass,
        k1: &AbelianField,
        d2: &BrauerClass,
        k2: &AbelianField,
        big_n: u64,
    ) -> Result<Self> {
        for c in [d1, d2] {
            if !c.base().is_rational() {
                return Err(Error::Precondition(
                    "scenario classes must be given over ℚ".into(),
                ));
            }
        }
        if arith::gcd(k1.conductor(), k2.conductor()) != 1 {
            return Err(Error::Precondition(format!(
                "conductors {} and {} are not coprime",
                k1.conductor(),
                k2.conductor()
            )));
        }
        if big_n == 0 {
            return Err(Error::Zero("N"));
        }
        let d = [d1.restrict(k1)?.index(), d2.restrict(k2)?.index()];
        let e = [k1.degree(), k2.degree()];
        let m = [
            d[0].checked_mul(e[0]).ok_or(Error::Overflow("m1"))?,
            d[1].checked_mul(e[1]).ok_or(Error::Overflow("m2"))?,
        ];
        let sq = |x: u64| x.checked_mul(x).ok_or(Error::Overflow("m²"));
        let l = lcm(sq(m[0])?, sq(m[1])?)?;
        if !big_n.is_multiple_of(l) {
            return Err(Error::Precondition(format!(
                "N = {big_n} is not a multiple of lcm(m1², m2²) = {l}"
            )));
        }
        let n = [big_n / m[0], big_n / m[1]];
        let r = [
            big_n.checked_mul(d[0]).ok_or(Error::Overflow("r1"))?,
            big_n.checked_mul(d[1]).ok_or(Error::Overflow("r2"))?,
        ];
        let setups = [
            TransferSetup::over_field(k1, k1, r[0], n[0])?,
            TransferSetup::over_field(k2, k2, r[1], n[1])?,
        ];
        let gal = [
            setups[0].bridge().expect("bridge"),
            setups[1].bridge().expect("bridge"),
        ];
        let subs2: Vec<_> = all_subgroups(gal[1].group())
            .into_iter()
            .map(|s| gal[1].fixed_field(&s).map(|f| (s, f)))
            .collect::<Result<_>>()?;
        let mut joints = HashMap::new();
        for s1 in all_subgroups(gal[0].group()) {
            let f1 = gal[0].fixed_field(&s1)?;
            for (s2, f2) in &subs2 {
                let field = f1.compositum(f2)?;
                let classes = [d1.restrict(&field)?, d2.restrict(&field)?];
                joints.insert(
                    (s1.members().to_vec(), s2.members().to_vec()),
                    Arc::new(Joint { field, classes }),
                );
            }
        }
        Ok(Thm6Scenario {
            rational: [d1.clone(), d2.clone()],
            fields: [k1.clone(), k2.clone()],
            big_n,
            d,
            e,
            n,
            setups,
            joints,
        })
    }

    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn d(&self) -> [u64; 2] {
        self.d
    }

    pub fn e(&self) -> [u64; 2] {
        self.e
    }

    pub fn m(&self) -> [u64; 2] {
        [self.d[0] * self.e[0], self.d[1] * self.e[1]]
    }

    pub fn n(&self) -> [u64; 2] {
        self.n
    }

    pub fn r(&self) -> [u64; 2] {
        [self.setups[0].r(), self.setups[1].r()]
    }

    pub fn setups(&self) -> &[TransferSetup; 2] {
        &self.setups
    }

    pub fn rational_classes(&self) -> &[BrauerClass; 2] {
        &self.rational
    }

    pub fn fields(&self) -> &[AbelianField; 2] {
        &self.fields
    }

    fn joint(&self, alpha: &GroupRingElement, beta: &GroupRingElement) -> Result<&Joint> {
        self.setups[0].check(alpha)?;
        self.setups[1].check(beta)?;
        let key = (
            alpha.stabilizer().members().to_vec(),
            beta.stabilizer().members().to_vec(),
        );
        self.joints
            .get(&key)
            .map(|j| j.as_ref())
            .ok_or_else(|| Error::Oracle("stabilizer pair without a compositum".into()))
    }
}

fn power_of(c: &BrauerClass, k: u64) -> Result<BrauerClass> {
    Ok(c.power(i64::try_from(k).map_err(|_| Error::Overflow("class power"))?))
}

/// Index over the compositum of D₁^a ⊗ D₂^b.
fn joint_index(j: &Joint, a: u64, b: u64) -> Result<u64> {
    Ok(power_of(&j.classes[0], a)?
        .tensor(&power_of(&j.classes[1], b)?)?
        .index())
}

/// Schur(D₁^α ⊗ D₂^β over K(α,β)) · [K(α,β):F] · |α| · |β| · N_{a,b}.
pub fn thm6_expression(
    sc: &Thm6Scenario,
    alpha: &GroupRingElement,
    beta: &GroupRingElement,
) -> Result<BigUint> {
    let j = sc.joint(alpha, beta)?;
    let (a, b) = (alpha.coefficient_sum(), beta.coefficient_sum());
    let (fa, fb) = (alpha.fixed_degree(), beta.fixed_degree());
    if j.field.degree() != fa * fb {
        return Err(Error::Consistency(format!(
            "compositum of degree {} differs from {fa}·{fb}",
            j.field.degree()
        )));
    }
    let schur = joint_index(j, a, b)?;
    Ok(big(schur)
        * big(fa)
        * big(fb)
        * alpha.weight(sc.n[0])
        * beta.weight(sc.n[1])
        * big(n_ab(sc.big_n, a, b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateCase {
    /// p ∤ 1 + a + b.
    UnitSum,
    /// At least two coefficients of α, β are prime to p.
    TwoCoprimeSummands,
    /// Exactly one coefficient is prime to p.
    SingleSummand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

/// Valuation ledger for the single-coprime-coefficient case, after moving
/// that coefficient to the trivial coset. D is the algebra on that side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingleSummandLedger {
    pub side: Side,
    /// Coset holding the coprime coefficient before normalization.
    pub coset: usize,
    pub coefficient: u64,
    /// v_p of n_i, d_i, e_i.
    pub s1: u32,
    pub s2: u32,
    pub s3: u32,
    /// v_p of Schur(D over K(α,β)).
    pub u1: u32,
    /// v_p of the index of the remaining twisted product.
    pub u2: u32,
    /// v_p of Schur(D^{coefficient} over K(α,β)).
    pub u3: u32,
    /// v_p of [K(α,β) : K_i].
    pub u4: u32,
    /// v_p of Schur of the full product over K(α,β).
    pub schur_valuation: u32,
    /// v_p of the weight with the coprime coefficient removed.
    pub rest_weight_valuation: u32,
    /// Schur(full product)·[K(α,β):K_i]·(remaining weight).
    #[serde(serialize_with = "big_as_string")]
    pub reduced_value: BigUint,
    /// v_p of the reduced value; at least s2.
    pub reduced_value_valuation: u32,
    /// Whether all of d_i divides the reduced value. Reported only: the
    /// argument controls the p-part, and other primes of d_i can be missing.
    pub reduced_value_divisible_by_d: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub p: u64,
    pub case: CertificateCase,
    pub s: u32,
    pub t1: u32,
    pub t2: u32,
    pub a: u64,
    pub b: u64,
    pub ledger: Option<SingleSummandLedger>,
    pub claimed_bound: u32,
    pub direct_valuation: u32,
}

fn inconsistent(what: &str, p: u64) -> Error {
    Error::Consistency(format!("certificate at p = {p}: {what}"))
}

/// Classifies (α, β) at p and checks that the claimed lower bound on v_p of
/// the expression is at least v_p(N) and at most the direct valuation.
pub fn thm6_certificate(
    sc: &Thm6Scenario,
    alpha: &GroupRingElement,
    beta: &GroupRingElement,
    p: u64,
) -> Result<Certificate> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !sc.big_n.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "{p} does not divide N = {}",
            sc.big_n
        )));
    }
    let term = thm6_expression(sc, alpha, beta)?;
    let direct = valuation_big(p, &term)?;
    let s = valuation(p, sc.big_n);
    let t = [valuation(p, sc.n[0]), valuation(p, sc.n[1])];
    let (a, b) = (alpha.coefficient_sum(), beta.coefficient_sum());
    let total = 1u128 + a as u128 + b as u128;

    let coprime: Vec<(Side, usize)> = alpha
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c % p != 0)
        .map(|(i, _)| (Side::Alpha, i))
        .chain(
            beta.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c % p != 0)
                .map(|(i, _)| (Side::Beta, i)),
        )
        .collect();

    let (case, claimed, ledger) = if !total.is_multiple_of(p as u128) {
        let v = valuation(p, n_ab(sc.big_n, a, b));
        if v != s {
            return Err(inconsistent("N_{a,b} loses a power of p although p ∤ 1+a+b", p));
        }
        (CertificateCase::UnitSum, v, None)
    } else {
        match coprime.len() {
            0 => {
                return Err(inconsistent(
                    "p divides 1+a+b but every coefficient is divisible by p",
                    p,
                ))
            }
            1 => {
                let (side, coset) = coprime[0];
                let ledger = single_summand_ledger(sc, alpha, beta, p, side, coset, &term)?;
                let claimed = ledger.s1 + ledger.s3 + ledger.u1 + ledger.u4;
                (CertificateCase::SingleSummand, claimed, Some(ledger))
            }
            _ => {
                let c1 = coprime.iter().filter(|(side, _)| *side == Side::Alpha).count();
                let c2 = coprime.len() - c1;
                let mut options = Vec::new();
                if c1 >= 2 {
                    options.push(2 * t[0]);
                }
                if c1 >= 1 && c2 >= 1 {
                    options.push(t[0] + t[1]);
                }
                if c2 >= 2 {
                    options.push(2 * t[1]);
                }
                (
                    CertificateCase::TwoCoprimeSummands,
                    options.into_iter().max().expect("two summands"),
                    None,
                )
            }
        }
    };
    if claimed < s {
        return Err(inconsistent(&format!("claimed bound {claimed} below s = {s}"), p));
    }
    if claimed > direct {
        return Err(inconsistent(
            &format!("claimed bound {claimed} exceeds direct valuation {direct}"),
            p,
        ));
    }
    Ok(Certificate {
        p,
        case,
        s,
        t1: t[0],
        t2: t[1],
        a,
        b,
        ledger,
        claimed_bound: claimed,
        direct_valuation: direct,
    })
}

fn single_summand_ledger(
    sc: &Thm6Scenario,
    alpha: &GroupRingElement,
    beta: &GroupRingElement,
    p: u64,
    side: Side,
    coset: usize,
    term: &BigUint,
) -> Result<SingleSummandLedger> {
    let i = match side {
        Side::Alpha => 0,
        Side::Beta => 1,
    };
    let (x, y) = if i == 0 { (alpha, beta) } else { (beta, alpha) };
    let x = x.normalize_to_trivial(coset)?;
    let (alpha_n, beta_n) = if i == 0 { (&x, y) } else { (y, &x) };
    if &thm6_expression(sc, alpha_n, beta_n)? != term {
        return Err(inconsistent("translation changed the expression", p));
    }
    // H is trivial, so the stabilizer of x lies in H and K(x) = K_i
    if x.stabilizer().order() != 1 {
        return Err(inconsistent("normalized element has a nontrivial stabilizer", p));
    }
    let j = sc.joint(alpha_n, beta_n)?;
    let coefficient = x.coeffs()[0];
    let rest = x.without_coset(0);
    let (own_sum, other_sum) = (x.coefficient_sum(), y.coefficient_sum());
    let own = &j.classes[i];
    let other = &j.classes[1 - i];

    let s1 = valuation(p, sc.n[i]);
    let s2 = valuation(p, sc.d[i]);
    let s3 = valuation(p, sc.e[i]);
    let u1 = valuation(p, own.index());
    let sharp = power_of(own, own_sum - coefficient)?.tensor(&power_of(other, other_sum)?)?;
    let u2 = valuation(p, sharp.index());
    let u3 = valuation(p, power_of(own, coefficient)?.index());
    let (ext, r) = j.field.degree().div_rem(&sc.e[i]);
    if r != 0 {
        return Err(inconsistent("compositum does not contain K_i", p));
    }
    let u4 = valuation(p, ext);
    let full = power_of(own, own_sum)?
        .tensor(&power_of(other, other_sum)?)?
        .index();
    let schur_valuation = valuation(p, full);
    let rest_weight = rest.weight(sc.n[i]) * y.weight(sc.n[1 - i]);
    let rest_weight_valuation = valuation_big(p, &rest_weight)?;
    let reduced_value = big(full) * big(ext) * rest_weight;
    let reduced_value_valuation = valuation_big(p, &reduced_value)?;
    let reduced_value_divisible_by_d = (&reduced_value % big(sc.d[i])).is_zero();

    let checks = [
        (s1 + s2 + s3 == valuation(p, sc.big_n), "s ≠ s1 + s2 + s3"),
        (u3 == u1, "a coprime power changed the p-part of the index"),
        (
            schur_valuation + u2 >= u1,
            "index of the full product below p^(u1−u2)",
        ),
        (
            rest_weight_valuation >= u2,
            "remaining weight not divisible by p^u2",
        ),
        (u1 + u4 >= s2, "u1 + u4 < s2"),
        (
            reduced_value_valuation >= s2,
            "reduced value not divisible by p^s2",
        ),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(inconsistent(what, p));
    }
    Ok(SingleSummandLedger {
        side,
        coset,
        coefficient,
        s1,
        s2,
        s3,
        u1,
        u2,
        u3,
        u4,
        schur_valuation,
        rest_weight_valuation,
        reduced_value,
        reduced_value_valuation,
        reduced_value_divisible_by_d,
    })
}

/// Per-prime tally of certificate cases over an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeTable {
    pub p: u64,
    pub s: u32,
    pub unit_sum: u64,
    pub two_coprime_summands: u64,
    pub single_summand: u64,
    pub min_claimed_bound: Option<u32>,
    pub min_direct_valuation: Option<u32>,
}

impl PrimeTable {
    fn empty(p: u64, s: u32) -> Self {
        PrimeTable {
            p,
            s,
            unit_sum: 0,
            two_coprime_summands: 0,
            single_summand: 0,
            min_claimed_bound: None,
            min_direct_valuation: None,
        }
    }

    fn record(&mut self, c: &Certificate) {
        match c.case {
            CertificateCase::UnitSum => self.unit_sum += 1,
            CertificateCase::TwoCoprimeSummands => self.two_coprime_summands += 1,
            CertificateCase::SingleSummand => self.single_summand += 1,
        }
        let min = |x: Option<u32>, y: u32| Some(x.map_or(y, |x| x.min(y)));
        self.min_claimed_bound = min(self.min_claimed_bound, c.claimed_bound);
        self.min_direct_valuation = min(self.min_direct_valuation, c.direct_valuation);
    }

    fn merge(mut self, other: &PrimeTable) -> Self {
        self.unit_sum += other.unit_sum;
        self.two_coprime_summands += other.two_coprime_summands;
        self.single_summand += other.single_summand;
        let min = |x: Option<u32>, y: Option<u32>| match (x, y) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        self.min_claimed_bound = min(self.min_claimed_bound, other.min_claimed_bound);
        self.min_direct_valuation = min(self.min_direct_valuation, other.min_direct_valuation);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm6Report {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub d: [u64; 2],
    pub e: [u64; 2],
    pub m: [u64; 2],
    pub n: [u64; 2],
    pub r: [u64; 2],
    #[serde(serialize_with = "big_as_string")]
    pub gcd: BigUint,
    pub witness_alpha: Option<Vec<u64>>,
    pub witness_beta: Option<Vec<u64>>,
    pub terms: u64,
    pub mode: Resolved,
    pub upper_bound_only: bool,
    pub certificates: Vec<PrimeTable>,
}

/// Enumerates (α, β), fails on any term not divisible by N, and checks the
/// gcd is exactly N. With `certify`, tallies certificates for every p | N.
pub fn thm6_divisibility(sc: &Thm6Scenario, mode: EnumerationMode, certify: bool) -> Result<Thm6Report> {
    let domain = Domain::new(
        vec![
            (sc.setups[0].space().clone(), sc.setups[0].r()),
            (sc.setups[1].space().clone(), sc.setups[1].r()),
        ],
        mode,
    )?;
    let big_n = big(sc.big_n);
    let fold = engine::fold(domain.len(), |i| {
        let pair = domain.elements(i)?;
        let t = thm6_expression(sc, &pair[0], &pair[1])?;
        if !(&t % &big_n).is_zero() {
            return Err(Error::Consistency(format!(
                "N = {} does not divide {t} at α = {:?}, β = {:?}",
                sc.big_n,
                pair[0].coeffs(),
                pair[1].coeffs()
            )));
        }
        Ok(t)
    })?;
    if fold.gcd != big_n {
        return Err(Error::Consistency(format!(
            "gcd {} differs from N = {}",
            fold.gcd, sc.big_n
        )));
    }
    let witness = fold.witness.map(|i| domain.elements(i)).transpose()?;

    let certificates = if certify {
        let primes = arith::prime_divisors(sc.big_n);
        let tables: Vec<PrimeTable> = primes
            .iter()
            .map(|&p| PrimeTable::empty(p, valuation(p, sc.big_n)))
            .collect();
        engine::map_reduce(
            domain.len(),
            Vec::new,
            |i| {
                let pair = domain.elements(i)?;
                let mut row = tables.clone();
                for t in row.iter_mut() {
                    t.record(&thm6_certificate(sc, &pair[0], &pair[1], t.p)?);
                }
                Ok(row)
            },
            |x, y| {
                if x.is_empty() {
                    return y;
                }
                if y.is_empty() {
                    return x;
                }
                x.into_iter().zip(&y).map(|(a, b)| a.merge(b)).collect()
            },
        )?
        .into_iter()
        .collect()
    } else {
        Vec::new()
    };

    Ok(Thm6Report {
        big_n: sc.big_n,
        d: sc.d,
        e: sc.e,
        m: sc.m(),
        n: sc.n,
        r: sc.r(),
        gcd: fold.gcd,
        witness_alpha: witness.as_ref().map(|w| w[0].coeffs().to_vec()),
        witness_beta: witness.as_ref().map(|w| w[1].coeffs().to_vec()),
        terms: fold.count,
        mode: domain.plan,
        upper_bound_only: domain.plan.is_sampled(),
        certificates,
    })
}

/// Embedding of D_i into UD(ℚ, N) before any reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedSanity {
    pub algebra: u8,
    pub outcome: EmbedOutcome,
    pub expected_index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm7Report {
    pub fields: [FieldSummary; 2],
    pub lcm_m_squared: u64,
    pub divisibility: Thm6Report,
    pub embed_sanity: Vec<EmbedSanity>,
}

/// Assembles the scenario, runs the divisibility check with certificates,
/// and checks that each D_i over K_i meets UD(ℚ, N) with index N·d_i.
pub fn thm7_pipeline(
    d1: &BrauerClass,
    k1: &AbelianField,
    d2: &BrauerClass,
    k2: &AbelianField,
    big_n: u64,
    mode: EnumerationMode,
) -> Result<Thm7Report> {
    let sc = Thm6Scenario::new(d1, k1, d2, k2, big_n)?;
    let m = sc.m();
    let lcm_m_squared = lcm(m[0] * m[0], m[1] * m[1])?;
    let divisibility = thm6_divisibility(&sc, mode, true)?;
    let generic = MixedClass::generic(big_n, &AbelianField::rationals())?;
    let mut embed_sanity = Vec::new();
    for (i, (d, k)) in [(d1, k1), (d2, k2)].into_iter().enumerate() {
        let over_k = d.restrict(k)?;
        let inst = EmbedInstance::new(over_k, sc.d[i], generic.clone(), big_n)?;
        let outcome = embed_check(&inst)?;
        let expected_index = big_n.checked_mul(sc.d[i]).ok_or(Error::Overflow("N·d"))?;
        if outcome.achieved_index != expected_index {
            return Err(Error::Consistency(format!(
                "D{} meets UD(ℚ, {big_n}) with index {} instead of {expected_index}",
                i + 1,
                outcome.achieved_index
            )));
        }
        embed_sanity.push(EmbedSanity {
            algebra: i as u8 + 1,
            outcome,
            expected_index,
        });
    }
    Ok(Thm7Report {
        fields: [FieldSummary::from(k1), FieldSummary::from(k2)],
        lcm_m_squared,
        divisibility,
        embed_sanity,
    })
}
