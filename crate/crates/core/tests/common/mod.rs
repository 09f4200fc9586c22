#![allow(dead_code)]

use std::sync::Arc;

use csalab::arith::QmodZ;
use csalab::brauer::{make_class, rational_class, AbelianField, BrauerClass, Place};
use csalab::groupring::FiniteGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn hamilton() -> BrauerClass {
    rational_class(&[(Place::Finite(2), 1, 2), (Place::Infinite, 1, 2)]).unwrap()
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// A class over ℚ with all invariants over one common denominator d ≤ max_den.
pub fn random_rational_class<R: Rng>(rng: &mut R, max_den: u64) -> BrauerClass {
    let d = rng.random_range(1..=max_den);
    let k = rng.random_range(1..=4usize);
    let mut places: Vec<u64> = PRIMES.to_vec();
    for i in (1..places.len()).rev() {
        places.swap(i, rng.random_range(0..=i));
    }
    let mut inv: Vec<(Place, QmodZ)> = Vec::new();
    let mut sum: i128 = 0;
    for &q in &places[..k - 1] {
        let x = rng.random_range(0..d) as i128;
        sum += x;
        inv.push((Place::Finite(q), QmodZ::new(x, d).unwrap()));
    }
    if d % 2 == 0 && rng.random_bool(0.5) {
        let x = (d / 2) as i128;
        sum += x;
        inv.push((Place::Infinite, QmodZ::new(x, d).unwrap()));
    }
    inv.push((Place::Finite(places[k - 1]), QmodZ::new(-sum, d).unwrap()));
    make_class(&AbelianField::rationals(), &inv).unwrap()
}

/// Every group of order at most 8, up to isomorphism.
pub fn small_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![
        ("C1", FiniteGroup::cyclic(1)),
        ("C2", FiniteGroup::cyclic(2)),
        ("C3", FiniteGroup::cyclic(3)),
        ("C4", FiniteGroup::cyclic(4)),
        ("C2xC2", FiniteGroup::abelian(&[2, 2])),
        ("C5", FiniteGroup::cyclic(5)),
        ("C6", FiniteGroup::cyclic(6)),
        ("S3", FiniteGroup::dihedral(3)),
        ("C7", FiniteGroup::cyclic(7)),
        ("C8", FiniteGroup::cyclic(8)),
        ("C4xC2", FiniteGroup::abelian(&[4, 2])),
        ("C2xC2xC2", FiniteGroup::abelian(&[2, 2, 2])),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion()),
    ]
    .into_iter()
    .map(|(n, g)| (n, Arc::new(g)))
    .collect()
}

/// Chains ℚ ⊆ K ⊆ L of abelian fields.
pub fn field_chains() -> Vec<[AbelianField; 3]> {
    let q = AbelianField::rationals();
    let f = |m: u64, s: &[u64]| AbelianField::new(m, s).unwrap();
    vec![
        [q.clone(), f(4, &[]), f(8, &[])],
        [q.clone(), f(5, &[4]), f(5, &[])],
        [q.clone(), f(7, &[6]), f(7, &[])],
        [q.clone(), f(3, &[]), f(12, &[])],
        [q.clone(), f(8, &[7]), f(8, &[])],
        [q.clone(), f(9, &[8]), f(9, &[])],
        [q, f(4, &[]), f(20, &[])],
    ]
}

/// Small abelian fields with their conductors, for scenario generation.
pub fn scenario_fields() -> Vec<AbelianField> {
    let f = |m: u64, s: &[u64]| AbelianField::new(m, s).unwrap();
    vec![
        AbelianField::rationals(),
        f(3, &[]),
        f(4, &[]),
        f(5, &[4]),
        f(5, &[]),
        f(7, &[6]),
        f(8, &[7]),
        f(8, &[3]),
        f(11, &[10]),
        f(13, &[12]),
    ]
}
