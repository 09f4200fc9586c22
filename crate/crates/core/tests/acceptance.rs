//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! against oracles written out in this file.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use csalab::arith::{valuation_big, QmodZ};
use csalab::brauer::{cyclic_algebra, rational_class, AbelianField, BrauerClass, CyclicData, Place};
use csalab::embed::{
    counterexample_run, embed_check, thm6_certificate, thm6_divisibility, thm6_expression, tower_layer,
    EmbedInstance, Thm6Scenario,
};
use csalab::generic::{mixed_index, ud_power_index, GenericAlgebra, MixedClass};
use csalab::groupring::{all_subgroups, CosetSpace, GroupRingElement, Subgroup};
use csalab::reduction::{
    reduce_single, EnumerationMode, IndexOracle, SplitOracle, TransferSetup, UnmovedOracle, DEFAULT_BUDGET,
};
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Smallest k ≥ 1 with q^k ≡ ±1 mod m, by direct iteration.
fn order_mod_plus_minus_one(q: u64, m: u64) -> u64 {
    let mut x = q % m;
    let mut k = 1;
    while x != 1 && x != m - 1 {
        x = x * q % m;
        k += 1;
    }
    k
}

/// Index of a class over ℚ after base change, given each place's local degree:
/// the lcm of the orders of num·ld/den.
fn index_after(inv: &[(Place, i128, u64)], ld: impl Fn(Place) -> u64) -> u64 {
    inv.iter().fold(1, |acc, &(p, num, den)| {
        let scaled = (num * ld(p) as i128).rem_euclid(den as i128) as u64;
        let order = den / gcd_u64(scaled, den);
        acc / gcd_u64(acc, order) * order
    })
}

// 1. Two algebras over the tower of 3-power cyclotomic layers.
//
// Layer n is the fixed field of {±1} in (ℤ/3^{n+1})^×, of degree 3ⁿ and real.
// 2 and 5 are primitive roots mod 9, hence mod every 3^k, so modulo ±1 their
// order is φ(3^{n+1})/2 = 3ⁿ: both are inert of local degree 3ⁿ. The prime 3
// is totally ramified (local degree 3ⁿ), and ∞ has local degree 1.
//   D₁ = {2: 1/2, ∞: 1/2}: 3ⁿ odd, so 1/2·3ⁿ = 1/2 at 2 and 1/2 at ∞; index 2.
//   D₂ = {2: 1/3, 5: 2/3}: 3ⁿ·(1/3) ≡ 0 for n ≥ 1; index 1.
fn criterion_1() -> Outcome {
    let d1_inv = [(Place::Finite(2), 1, 2), (Place::Infinite, 1, 2)];
    let d2_inv = [(Place::Finite(2), 1, 3), (Place::Finite(5), 2, 3)];
    let d1 = rational_class(&d1_inv).unwrap();
    let d2 = rational_class(&d2_inv).unwrap();
    for n in 1..=3u32 {
        let m = 3u64.pow(n + 1);
        let layer_degree = 3u64.pow(n);
        for q in [2, 5] {
            ensure!(
                order_mod_plus_minus_one(q, m) == layer_degree,
                "oracle: order of {q} mod ±1, 3^{}",
                n + 1
            );
        }
        let oracle_ld = |p: Place| match p {
            Place::Infinite => 1,
            Place::Finite(3) => layer_degree,
            Place::Finite(q) => order_mod_plus_minus_one(q, m),
        };
        let f = tower_layer(3, n).unwrap();
        ensure!(
            f.degree() == layer_degree && f.is_totally_real(),
            "layer {n} is not the real layer of degree 3^{n}"
        );
        for p in [
            Place::Finite(2),
            Place::Finite(3),
            Place::Finite(5),
            Place::Infinite,
        ] {
            ensure!(
                f.local_degree(p) == oracle_ld(p),
                "layer {n}: local degree at {p}"
            );
        }
        let (i1, i2) = (d1.restrict(&f).unwrap().index(), d2.restrict(&f).unwrap().index());
        ensure!(
            i1 == 2 && index_after(&d1_inv, oracle_ld) == 2,
            "layer {n}: D1 index {i1}"
        );
        ensure!(
            i2 == 1 && index_after(&d2_inv, oracle_ld) == 1,
            "layer {n}: D2 index {i2}"
        );
    }
    let rep = counterexample_run(2, 3, 3).unwrap();
    ensure!(rep.passed(), "pipeline checks failed: {rep:?}");
    ensure!(
        rep.d2
            == vec![
                ("2".to_string(), "1/3".to_string()),
                ("5".to_string(), "2/3".to_string())
            ],
        "pipeline chose D2 = {:?}",
        rep.d2
    );
    Ok("levels 1..3: D1 index 2, D2 index 1".into())
}

fn e_quartic() -> BrauerClass {
    rational_class(&[(Place::Finite(2), 1, 4), (Place::Finite(3), 3, 4)]).unwrap()
}

// 2. Embedding criterion. Positive case: ℚ(i) has local degree 2 at 2
// (ramified) and at 3 (inert, 3 ≡ 3 mod 4), so E over ℚ(i) is {2: 1/2, 3: 1/2}
// of index 2 = n. Negative case: E ⊗ D^op = {2: 1/4−1/2, 3: 3/4, 5: 1/2}
// = {2: 3/4, 3: 3/4, 5: 1/2}, index 4 ∤ 2.
fn criterion_2() -> Outcome {
    let gaussian = AbelianField::new(4, &[]).unwrap();
    let pos = EmbedInstance::new(
        BrauerClass::trivial(&gaussian),
        1,
        MixedClass::arithmetic(e_quartic()),
        4,
    )
    .unwrap();
    let out = embed_check(&pos).unwrap();
    ensure!(
        out.embeddable && out.n == 2 && out.achieved_index == 2,
        "positive case: {out:?}"
    );
    let quat = rational_class(&[(Place::Finite(2), 1, 2), (Place::Finite(5), 1, 2)]).unwrap();
    let neg = EmbedInstance::new(quat, 2, MixedClass::arithmetic(e_quartic()), 4).unwrap();
    let out = embed_check(&neg).unwrap();
    ensure!(
        !out.embeddable && out.n == 2 && out.achieved_index == 4,
        "negative case: {out:?}"
    );

    let mut rng = common::rng(2);
    let fields = common::scenario_fields();
    let (mut tried, mut checked, mut embeddable) = (0u64, 0u64, 0u64);
    while checked < 1000 {
        tried += 1;
        ensure!(tried < 200_000, "could not draw 1000 valid instances");
        let k = &fields[rng.random_range(0..fields.len())];
        let d = common::random_rational_class(&mut rng, 12).restrict(k).unwrap();
        let a = d.index();
        let e_arith = if rng.random_bool(0.3) {
            d.clone()
        } else {
            common::random_rational_class(&mut rng, 12)
        };
        let g = rng.random_range(1..=12u64);
        let c = rng.random_range(0..g as i64);
        let e = MixedClass::new(GenericAlgebra::new(g).unwrap(), c, e_arith);
        let big_n = e.index_here().unwrap();
        let Ok(inst) = EmbedInstance::new(d, a, e, big_n) else {
            continue;
        };
        // an embedding failure is fine; a rider violation is an Err
        let out = embed_check(&inst).map_err(|err| format!("rider violated: {err}"))?;
        ensure!(!out.embeddable || out.achieved_index == out.n, "rider: {out:?}");
        checked += 1;
        embeddable += out.embeddable as u64;
    }
    ensure!(embeddable > 0, "no embeddable random instance");
    Ok(format!(
        "both cases exact; rider holds on {checked} random instances ({embeddable} embeddable)"
    ))
}

/// (gα)(c) = α(g⁻¹c), computed straight from the coset action.
fn translate_oracle(space: &CosetSpace, alpha: &[u64], g: usize) -> Vec<u64> {
    let gi = space.group().inv(g);
    (0..space.len()).map(|c| alpha[space.act(gi, c)]).collect()
}

fn stabilizer_oracle(space: &CosetSpace, alpha: &[u64]) -> Vec<usize> {
    (0..space.group().order())
        .filter(|&g| translate_oracle(space, alpha, g) == alpha)
        .collect()
}

fn weight_oracle(alpha: &[u64], n: u64) -> BigUint {
    alpha.iter().map(|&c| big(n / gcd_u64(n, c % n))).product()
}

fn check_element(space: &Arc<CosetSpace>, alpha: &GroupRingElement, r: u64) -> Result<(), String> {
    let g_ = space.group();
    let coeffs = alpha.coeffs();
    let stab = alpha.stabilizer();
    let stab_oracle = stabilizer_oracle(space, coeffs);
    ensure!(
        stab.members() == stab_oracle.as_slice(),
        "stabilizer of {coeffs:?}"
    );
    ensure!(
        alpha.fixed_degree() as usize == g_.order() / stab_oracle.len(),
        "fixed degree of {coeffs:?}"
    );
    for orbit in csalab::groupring::orbits(&stab, space).unwrap() {
        ensure!(
            orbit.iter().all(|&c| coeffs[c] == coeffs[orbit[0]]),
            "{coeffs:?} not constant on {orbit:?}"
        );
    }
    for n in (1..=r).filter(|n| r.is_multiple_of(*n)) {
        ensure!(
            alpha.weight(n) == weight_oracle(coeffs, n),
            "weight of {coeffs:?} at n = {n}"
        );
    }
    for g in 0..g_.order() {
        let ga = alpha.translate(g).unwrap();
        ensure!(
            ga.coeffs() == translate_oracle(space, coeffs, g).as_slice(),
            "translate {coeffs:?} by {g}"
        );
        for n in (1..=r).filter(|n| r.is_multiple_of(*n)) {
            ensure!(
                ga.weight(n) == alpha.weight(n),
                "|gα| ≠ |α| for {coeffs:?}, g = {g}"
            );
        }
        let conj = stab.conjugate(g).unwrap();
        ensure!(ga.stabilizer() == conj, "H_gα ≠ gH_αg⁻¹ for {coeffs:?}, g = {g}");
    }
    Ok(())
}

// 3. Group-ring identities over every group of order ≤ 8, every H, r ≤ 4.
fn criterion_3() -> Outcome {
    let mut rng = common::rng(3);
    let (mut full, mut sampled, mut elements) = (0u64, 0u64, 0u64);
    for (name, g) in common::small_groups() {
        for h in all_subgroups(&g) {
            let space = CosetSpace::new(&h);
            for r in 1..=4u64 {
                let zero = GroupRingElement::zero(&space, r).unwrap();
                for n in (1..=r).filter(|n| r % n == 0) {
                    ensure!(zero.weight(n) == big(1), "{name}: |0| ≠ 1");
                }
                match space.module_size(r).filter(|&s| s <= 10_000) {
                    Some(size) => {
                        full += 1;
                        for i in 0..size {
                            let a = GroupRingElement::from_index(&space, r, i).unwrap();
                            check_element(&space, &a, r).map_err(|e| format!("{name}, H = {h:?}: {e}"))?;
                            elements += 1;
                        }
                    }
                    None => {
                        sampled += 1;
                        for _ in 0..2_000 {
                            let a = GroupRingElement::random(&space, r, &mut rng).unwrap();
                            check_element(&space, &a, r).map_err(|e| format!("{name}, H = {h:?}: {e}"))?;
                            elements += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{full} modules enumerated in full, {sampled} sampled, {elements} elements"
    ))
}

// 4. Powers of the generic algebra: UD(N)^b has index equal to the additive
// order of b in ℤ/N, computed here by iteration.
fn criterion_4() -> Outcome {
    for n in 1..=60u64 {
        for b in 0..n {
            let order = (1..=n).find(|k| (k * b) % n == 0).unwrap();
            let idx = ud_power_index(n, b as i64);
            ensure!(
                idx == order && idx == n / gcd_u64(n, b),
                "ud_power_index({n}, {b}) = {idx}"
            );
            ensure!(
                ud_power_index(n, (b + n) as i64) == idx,
                "period fails at ({n}, {b})"
            );
            ensure!(
                ud_power_index(n, b as i64 - n as i64) == idx,
                "negative period fails at ({n}, {b})"
            );
            ensure!(
                ud_power_index(n, gcd_u64(n, b) as i64) == idx,
                "gcd reduction fails at ({n}, {b})"
            );
        }
    }
    let mut rng = common::rng(4);
    let fields = common::scenario_fields();
    for _ in 0..1000 {
        let d = common::random_rational_class(&mut rng, 12);
        let g = rng.random_range(1..=60u64);
        let c = rng.random_range(-100..100i64);
        let k = &fields[rng.random_range(0..fields.len())];
        let m = MixedClass::new(GenericAlgebra::new(g).unwrap(), c, d.clone());
        let idx = mixed_index(&m, k).unwrap();
        let arith = d.restrict(k).unwrap().index();
        let generic = g / gcd_u64(g, c.rem_euclid(g as i64) as u64);
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            let v = |x: u64| valuation_big(p, &big(x)).unwrap();
            ensure!(
                v(idx) == v(arith) + v(generic),
                "valuation at {p} of mixed index {idx} ({arith}·{generic})"
            );
        }
    }
    Ok("identities for N ≤ 60; additivity on 1000 mixed classes".into())
}

fn random_scenario<R: Rng>(rng: &mut R, fields: &[AbelianField]) -> Option<Thm6Scenario> {
    let k1 = &fields[rng.random_range(0..fields.len())];
    let k2 = &fields[rng.random_range(0..fields.len())];
    if gcd_u64(k1.conductor(), k2.conductor()) != 1 {
        return None;
    }
    let d1 = common::random_rational_class(rng, 6);
    let d2 = common::random_rational_class(rng, 6);
    let m1 = d1.restrict(k1).unwrap().index() * k1.degree();
    let m2 = d2.restrict(k2).unwrap().index() * k2.degree();
    let l = (m1 * m1).lcm(&(m2 * m2));
    let big_n = l * rng.random_range(1..=3u64);
    Thm6Scenario::new(&d1, k1, &d2, k2, big_n).ok()
}

// 5. Divisibility by N. Quaternion scenario oracle: with c = α(e), b = β(e)
// over trivial groups, the term is (2 if c odd else 1)·(2/(2,c))·(4/(4,b))·
// 4/(4, 1+c+b).
fn criterion_5() -> Outcome {
    let q = AbelianField::rationals();
    let sc = Thm6Scenario::new(&common::hamilton(), &q, &BrauerClass::trivial(&q), &q, 4).unwrap();
    let setups = sc.setups();
    let mut g = BigUint::default();
    for c in 0..8u64 {
        for b in 0..4u64 {
            let a = GroupRingElement::new(setups[0].space(), 8, &[c as i64]).unwrap();
            let bb = GroupRingElement::new(setups[1].space(), 4, &[b as i64]).unwrap();
            let oracle =
                (1 + c % 2) * (2 / gcd_u64(2, c)) * (4 / gcd_u64(4, b)) * (4 / gcd_u64(4, 1 + c + b));
            let t = thm6_expression(&sc, &a, &bb).unwrap();
            ensure!(t == big(oracle), "term at ({c}, {b}) is {t}, oracle {oracle}");
            ensure!(
                oracle.is_multiple_of(4),
                "oracle term {oracle} at ({c}, {b}) not divisible by 4"
            );
            g = g.gcd(&t);
        }
    }
    ensure!(g == big(4), "gcd over 32 pairs is {g}");
    let rep = thm6_divisibility(
        &sc,
        EnumerationMode::Exhaustive {
            budget: DEFAULT_BUDGET,
        },
        true,
    )
    .unwrap();
    ensure!(rep.terms == 32 && rep.gcd == big(4), "engine report {rep:?}");
    ensure!(
        rep.witness_alpha == Some(vec![0]) && rep.witness_beta == Some(vec![0]),
        "witness"
    );

    let mut rng = common::rng(5);
    let fields = common::scenario_fields();
    let (mut triples, mut scenarios) = (0u64, 0u64);
    let mut cases: std::collections::BTreeMap<String, u64> = Default::default();
    while triples < 10_000 {
        let Some(sc) = random_scenario(&mut rng, &fields) else {
            continue;
        };
        scenarios += 1;
        let big_n = big(sc.big_n());
        let primes = csalab::arith::prime_divisors(sc.big_n());
        let s = sc.setups();
        for _ in 0..100 {
            let a = GroupRingElement::random(s[0].space(), s[0].r(), &mut rng).unwrap();
            let b = GroupRingElement::random(s[1].space(), s[1].r(), &mut rng).unwrap();
            let t = thm6_expression(&sc, &a, &b).unwrap();
            ensure!(
                (&t % &big_n) == BigUint::default(),
                "N = {} ∤ {t} in {sc:?}",
                sc.big_n()
            );
            for &p in &primes {
                let cert = thm6_certificate(&sc, &a, &b, p).map_err(|e| format!("{sc:?}: {e}"))?;
                let direct = valuation_big(p, &t).unwrap();
                ensure!(cert.direct_valuation == direct, "direct valuation mismatch");
                ensure!(
                    cert.s <= cert.claimed_bound && cert.claimed_bound <= direct,
                    "ledger bound {cert:?}"
                );
                *cases.entry(format!("{:?}", cert.case)).or_default() += 1;
            }
            triples += 1;
        }
    }
    ensure!(cases.len() == 3, "not every certificate case occurred: {cases:?}");
    Ok(format!(
        "32 pairs exact, gcd 4; {triples} random triples over {scenarios} scenarios, certificates {cases:?}"
    ))
}

/// A deterministic non-constant oracle for engine comparisons.
fn mixing_oracle(alpha: &GroupRingElement) -> csalab::Result<u64> {
    let h = alpha
        .coeffs()
        .iter()
        .fold(7u64, |acc, &c| acc.wrapping_mul(31).wrapping_add(c));
    Ok([2u64, 4, 6, 12, 8, 3][(h % 6) as usize])
}

// 6. Engine consistency.
fn criterion_6() -> Outcome {
    let auto = EnumerationMode::Auto {
        budget: 10_000,
        seed: 6,
        samples: 500,
    };
    let mut setups = 0;
    for (_, g) in common::small_groups() {
        for h in all_subgroups(&g) {
            for r in 1..=4u64 {
                for n in (1..=r).filter(|n| r % n == 0) {
                    let s = TransferSetup::new(&h, r, n).unwrap();
                    let rep = reduce_single(&s, &SplitOracle(1), auto).unwrap();
                    ensure!(rep.gcd == big(1), "split oracle gave {}", rep.gcd);
                    setups += 1;
                }
            }
        }
    }
    let mut instances = 0;
    let exhaustive = EnumerationMode::Exhaustive {
        budget: DEFAULT_BUDGET,
    };
    let mut compare = |s: &TransferSetup, o: &dyn IndexOracle| -> Result<(), String> {
        let exact = reduce_single(s, o, exhaustive).unwrap();
        for seed in 0..3 {
            let sampled = reduce_single(s, o, EnumerationMode::Sampled { seed, samples: 64 }).unwrap();
            ensure!(
                (&sampled.gcd % &exact.gcd) == BigUint::default(),
                "sampled {} vs exact {}",
                sampled.gcd,
                exact.gcd
            );
        }
        instances += 1;
        Ok(())
    };
    for (_, g) in common::small_groups().into_iter().take(8) {
        let h = Subgroup::trivial(&g);
        for r in [2u64, 3] {
            if (r as f64).powi(g.order() as i32) > 1e5 {
                continue;
            }
            compare(&TransferSetup::new(&h, r, r).unwrap(), &mixing_oracle)?;
        }
    }
    let q = AbelianField::rationals();
    for chain in common::field_chains() {
        let top = &chain[2];
        for k in [&chain[0], &chain[1], top] {
            let s = TransferSetup::over_field(top, k, 2, 2).unwrap();
            if s.module_size().is_none_or(|m| m > 100_000) {
                continue;
            }
            let o = UnmovedOracle::new(
                &s,
                &MixedClass::arithmetic(common::hamilton()),
                &MixedClass::arithmetic(BrauerClass::trivial(&q)),
            )
            .unwrap();
            compare(&s, &o)?;
        }
    }
    ensure!(instances >= 20, "only {instances} comparison instances");
    Ok(format!(
        "split oracle gives 1 on {setups} setups; sampled ⊇ exact on {instances} instances"
    ))
}

/// lcm of the orders of the invariants, straight from the map.
fn index_oracle(c: &BrauerClass) -> u64 {
    c.invariants().values().fold(1, |acc, x| acc.lcm(&x.order()))
}

fn sum_is_zero(c: &BrauerClass) -> bool {
    c.invariant_sum().unwrap() == QmodZ::ZERO
}

// 7. Brauer arithmetic on random classes with denominators ≤ 12.
fn criterion_7() -> Outcome {
    let gaussian = AbelianField::new(4, &[]).unwrap();
    let hq = cyclic_algebra(&CyclicData {
        field: gaussian,
        generator: 3,
        a: Ratio::from_integer(-1),
    })
    .unwrap();
    ensure!(hq == common::hamilton(), "Δ(ℚ(i)/ℚ, −1) = {:?}", hq.invariants());

    let mut rng = common::rng(7);
    let chains = common::field_chains();
    for _ in 0..10_000 {
        let x = common::random_rational_class(&mut rng, 12);
        let y = common::random_rational_class(&mut rng, 12);
        let k = rng.random_range(-30..30i64);
        for c in [&x, &x.tensor(&y).unwrap(), &x.opposite(), &x.power(k)] {
            ensure!(sum_is_zero(c), "sum-zero fails for {:?}", c.invariants());
            ensure!(
                c.index() == c.exponent() && c.index() == index_oracle(c),
                "index/exponent of {:?}",
                c.invariants()
            );
        }
        ensure!(
            x.tensor(&x.opposite()).unwrap().is_trivial(),
            "x ⊗ x^op not trivial"
        );
        let chain = &chains[rng.random_range(0..chains.len())];
        let (kf, lf) = (&chain[1], &chain[2]);
        let xk = x.restrict(kf).unwrap();
        let xl = x.restrict(lf).unwrap();
        ensure!(xk.restrict(lf).unwrap() == xl, "restriction not transitive");
        for c in [
            &xk,
            &xl,
            &xk.tensor(&y.restrict(kf).unwrap()).unwrap(),
            &xl.power(k),
        ] {
            ensure!(sum_is_zero(c), "sum-zero fails after restriction");
            ensure!(
                c.index() == c.exponent() && c.index() == index_oracle(c),
                "index/exponent after restriction"
            );
        }
        ensure!(
            x.index().is_multiple_of(xk.index()) && xk.index().is_multiple_of(xl.index()),
            "index grew under restriction"
        );
    }
    Ok("10000 random classes".into())
}

fn write_scenario(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

// 8. Repeated CLI runs with fixed seeds are byte-identical.
fn criterion_8() -> Outcome {
    let scenarios = [
        (
            "acc_counterexample.json",
            r#"{"command":"counterexample","p1":2,"p2":3,"level":2}"#,
        ),
        (
            "acc_thm6.json",
            r#"{"command":"thm6","d1":{"invariants":[[2,"1/2"],["inf","1/2"]]},"k2":{"conductor":5,"fixing":[4]},
                "d2":{"invariants":[]},"N":16,"enumeration":{"mode":"sampled","seed":17,"samples":3000},
                "certify":[{"alpha":[1],"beta":[2,0]}]}"#,
        ),
        (
            "acc_reduce.json",
            r#"{"command":"reduce","setup":{"group":{"cyclic_orders":[2,4]},"r":4,"n":2},
                "oracle":{"kind":"table","entries":[[[0,0,0,0,0,0,0,0],6]],"default":4},
                "enumeration":{"mode":"sampled","seed":99,"samples":5000}}"#,
        ),
    ];
    for (name, body) in scenarios {
        let path = write_scenario(name, body);
        let mut outputs = Vec::new();
        for _ in 0..3 {
            let out = Command::new(env!("CARGO_BIN_EXE_csalab"))
                .arg(&path)
                .arg("--json")
                .output()
                .unwrap();
            ensure!(
                out.status.code() == Some(0),
                "{name}: exit {:?}: {}",
                out.status,
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(out.stdout);
        }
        ensure!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "{name}: reports differ between runs"
        );
    }
    Ok("3 commands × 3 runs byte-identical".into())
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("counterexample tower", criterion_1, Duration::from_secs(1)),
        ("embedding criterion", criterion_2, Duration::from_secs(5)),
        ("group-ring identities", criterion_3, Duration::from_secs(30)),
        ("generic algebra powers", criterion_4, Duration::from_secs(5)),
        ("divisibility by N", criterion_5, Duration::from_secs(60)),
        ("engine consistency", criterion_6, Duration::from_secs(60)),
        ("Brauer arithmetic", criterion_7, Duration::from_secs(30)),
        ("CLI determinism", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({elapsed:.2?}) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({elapsed:.2?}) {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
