//! Finite groups given by multiplication tables, coset spaces G/H, and
//! elements of the permutation module (ℤ/rℤ)[G/H].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::arith::{big, gcd};
use crate::error::{Error, Result};

/// A finite group on the indices `0..order`, identity at 0.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, identity at index 0,
    /// two-sided inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Group("empty table".into()));
        }
        if table
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(Error::Group("table is not a square table over 0..order".into()));
        }
        for (x, row) in table.iter().enumerate() {
            if table[0][x] != x || row[0] != x {
                return Err(Error::Group("index 0 is not a two-sided identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let inv = (0..n).find(|&y| table[x][y] == 0 && table[y][x] == 0);
            inverse[x] = inv.ok_or_else(|| Error::Group(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::Group(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Group("label count differs from order".into()));
            }
        }
        Ok(FiniteGroup {
            table,
            inverse,
            labels,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::abelian(&[n])
    }

    /// ℤ/n₁ × ℤ/n₂ × ..., elements in mixed radix with the first factor
    /// least significant.
    pub fn abelian(orders: &[usize]) -> Self {
        let orders: Vec<usize> = orders.iter().copied().filter(|&o| o > 1).collect();
        let n: usize = orders.iter().product();
        let digits = |mut x: usize| {
            orders
                .iter()
                .map(|&o| {
                    let d = x % o;
                    x /= o;
                    d
                })
                .collect::<Vec<_>>()
        };
        let pack = |ds: &[usize]| {
            ds.iter()
                .rev()
                .zip(orders.iter().rev())
                .fold(0, |acc, (d, o)| acc * o + d)
        };
        let table = (0..n)
            .map(|a| {
                let da = digits(a);
                (0..n)
                    .map(|b| {
                        let db = digits(b);
                        let sum: Vec<usize> = da
                            .iter()
                            .zip(&db)
                            .zip(&orders)
                            .map(|((x, y), o)| (x + y) % o)
                            .collect();
                        pack(&sum)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table, None).expect("abelian product is a group")
    }

    /// Dihedral group of order 2n; index i + n·j stands for rⁱsʲ.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..2 * n)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (c, d) = (y % n, y / n);
                        let rot = if b == 0 { a + c } else { a + n - c };
                        rot % n + n * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table, None).expect("dihedral group")
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // unit index u ∈ {1,i,j,k} = 0..4, sign bit s; element index = u + 4s
        const MUL: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, neg) = MUL[x % 4][y % 4];
                        let sign = neg ^ (x >= 4) ^ (y >= 4);
                        u + 4 * sign as usize
                    })
                    .collect()
            })
            .collect();
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
            .map(String::from)
            .to_vec();
        Self::from_table(table, Some(labels)).expect("quaternion group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order() {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "element {g} in a group of order {}",
                self.order()
            )))
        }
    }
}

/// All subgroups of a group, as joins of cyclic subgroups, sorted by
/// (order, members).
pub fn all_subgroups(group: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut found: Vec<Subgroup> = Vec::new();
    for g in 0..group.order() {
        let s = Subgroup::generated(group, &[g]).expect("valid element");
        if !found.contains(&s) {
            found.push(s);
        }
    }
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in found.clone().iter() {
                let gens: Vec<usize> = a.members.iter().chain(&b.members).copied().collect();
                let j = Subgroup::generated(group, &gens).expect("valid elements");
                if !found.contains(&j) {
                    found.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    found
}

/// A subgroup, stored as a sorted member list plus a membership mask.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_group(&self.parent, &other.parent)
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Subgroup").field(&self.members).finish()
    }
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.table == b.table
}

impl Subgroup {
    /// Checks identity membership and closure under the law and inverses.
    pub fn new(parent: &Arc<FiniteGroup>, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; parent.order()];
        for &m in members {
            parent.check_element(m)?;
            mask[m] = true;
        }
        let s = Subgroup {
            parent: parent.clone(),
            members: mask_to_members(&mask),
            mask,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn generated(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        let mut mask = vec![false; parent.order()];
        mask[0] = true;
        let mut members = vec![0usize];
        for &g in gens {
            parent.check_element(g)?;
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = parent.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        Ok(Subgroup {
            parent: parent.clone(),
            members: mask_to_members(&mask),
            mask,
        })
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::generated(parent, &[]).expect("trivial subgroup")
    }

    pub fn full(parent: &Arc<FiniteGroup>) -> Self {
        let mask = vec![true; parent.order()];
        Subgroup {
            parent: parent.clone(),
            members: (0..parent.order()).collect(),
            mask,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.parent;
        if !self.mask[0] {
            return Err(Error::Group("subgroup misses the identity".into()));
        }
        for &a in &self.members {
            if !self.mask[g.inv(a)] {
                return Err(Error::Group(format!("subgroup not closed under inverse of {a}")));
            }
            for &b in &self.members {
                if !self.mask[g.mul(a, b)] {
                    return Err(Error::Group(format!("subgroup not closed at ({a},{b})")));
                }
            }
        }
        Ok(())
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// g·S·g⁻¹.
    pub fn conjugate(&self, g: usize) -> Result<Subgroup> {
        let p = &self.parent;
        p.check_element(g)?;
        let gi = p.inv(g);
        let mut mask = vec![false; p.order()];
        for &s in &self.members {
            mask[p.mul(p.mul(g, s), gi)] = true;
        }
        Ok(Subgroup {
            parent: p.clone(),
            members: mask_to_members(&mask),
            mask,
        })
    }
}

fn mask_to_members(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}

/// The left coset space G/H with its G-action. Coset 0 is H itself.
#[derive(Clone)]
pub struct CosetSpace {
    group: Arc<FiniteGroup>,
    sub: Subgroup,
    coset_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    action: Vec<Vec<usize>>,
}

impl fmt::Debug for CosetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetSpace")
            .field("group_order", &self.group.order())
            .field("sub", &self.sub)
            .field("cosets", &self.classes.len())
            .finish()
    }
}

impl PartialEq for CosetSpace {
    fn eq(&self, other: &Self) -> bool {
        self.sub == other.sub
    }
}

impl Eq for CosetSpace {}

impl CosetSpace {
    pub fn new(sub: &Subgroup) -> Arc<Self> {
        let group = sub.parent.clone();
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut class: Vec<usize> = sub.members.iter().map(|&h| group.mul(x, h)).collect();
            class.sort_unstable();
            for &y in &class {
                coset_of[y] = c;
            }
            classes.push(class);
        }
        let action = (0..n)
            .map(|g| {
                classes
                    .iter()
                    .map(|class| coset_of[group.mul(g, class[0])])
                    .collect()
            })
            .collect();
        Arc::new(CosetSpace {
            group,
            sub: sub.clone(),
            coset_of,
            classes,
            action,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn sub(&self) -> &Subgroup {
        &self.sub
    }

    /// Number of cosets, [G:H].
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// A representative g with c = gH (the smallest element index).
    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    #[inline]
    pub fn act(&self, g: usize, c: usize) -> usize {
        self.action[g][c]
    }

    /// Number of vectors in (ℤ/rℤ)[G/H], or `None` on u64 overflow.
    pub fn module_size(&self, r: u64) -> Option<u64> {
        (0..self.len()).try_fold(1u64, |acc, _| acc.checked_mul(r))
    }
}

/// Decomposes the cosets into orbits of `sub`, each orbit sorted and the
/// list ordered by smallest member.
pub fn orbits(sub: &Subgroup, space: &CosetSpace) -> Result<Vec<Vec<usize>>> {
    if !same_group(&sub.parent, &space.group) {
        return Err(Error::Group("orbit subgroup lives in a different group".into()));
    }
    let mut seen = vec![false; space.len()];
    let mut out = Vec::new();
    for c in 0..space.len() {
        if seen[c] {
            continue;
        }
        let mut orbit: Vec<usize> = sub.members.iter().map(|&g| space.act(g, c)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &o in &orbit {
            seen[o] = true;
        }
        out.push(orbit);
    }
    Ok(out)
}

/// Upper bound on the modulus so coefficient sums stay within u64.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// α = Σ n_{gH} gH in (ℤ/rℤ)[G/H], coefficients kept in {0, …, r−1}.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    space: Arc<CosetSpace>,
    modulus: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.coeffs, self.modulus)
    }
}

impl GroupRingElement {
    pub fn new(space: &Arc<CosetSpace>, modulus: u64, coeffs: &[i64]) -> Result<Self> {
        check_modulus(modulus)?;
        if coeffs.len() != space.len() {
            return Err(Error::OutOfRange(format!(
                "{} coefficients for {} cosets",
                coeffs.len(),
                space.len()
            )));
        }
        let coeffs = coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(modulus as i128) as u64)
            .collect();
        Ok(GroupRingElement {
            space: space.clone(),
            modulus,
            coeffs,
        })
    }

    pub fn zero(space: &Arc<CosetSpace>, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(GroupRingElement {
            space: space.clone(),
            modulus,
            coeffs: vec![0; space.len()],
        })
    }

    /// The `index`-th vector in lexicographic order (coset 0 most significant).
    pub fn from_index(space: &Arc<CosetSpace>, modulus: u64, mut index: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let k = space.len();
        let mut coeffs = vec![0u64; k];
        for slot in coeffs.iter_mut().rev() {
            *slot = index % modulus;
            index /= modulus;
        }
        if index != 0 {
            return Err(Error::OutOfRange("enumeration index beyond module size".into()));
        }
        Ok(GroupRingElement {
            space: space.clone(),
            modulus,
            coeffs,
        })
    }

    pub fn random<R: Rng + ?Sized>(space: &Arc<CosetSpace>, modulus: u64, rng: &mut R) -> Result<Self> {
        check_modulus(modulus)?;
        let coeffs = (0..space.len()).map(|_| rng.random_range(0..modulus)).collect();
        Ok(GroupRingElement {
            space: space.clone(),
            modulus,
            coeffs,
        })
    }

    pub fn space(&self) -> &Arc<CosetSpace> {
        &self.space
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// g·α, with (g·α)(c) = α(g⁻¹·c).
    pub fn translate(&self, g: usize) -> Result<Self> {
        self.space.group.check_element(g)?;
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for (c, &v) in self.coeffs.iter().enumerate() {
            coeffs[self.space.act(g, c)] = v;
        }
        Ok(GroupRingElement {
            space: self.space.clone(),
            modulus: self.modulus,
            coeffs,
        })
    }

    fn fixed_by(&self, g: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(c, &v)| self.coeffs[self.space.act(g, c)] == v)
    }

    /// H_α = {g ∈ G | gα = α}.
    pub fn stabilizer(&self) -> Subgroup {
        let group = &self.space.group;
        let mask: Vec<bool> = (0..group.order()).map(|g| self.fixed_by(g)).collect();
        let s = Subgroup {
            parent: group.clone(),
            members: mask_to_members(&mask),
            mask,
        };
        debug_assert!(s.validate().is_ok(), "stabilizer is not a subgroup");
        s
    }

    /// [K(α):F] = [G : H_α].
    pub fn fixed_degree(&self) -> u64 {
        self.stabilizer().index() as u64
    }

    /// |α| = ∏ n / gcd(n, n_{gH}).
    pub fn weight(&self, n: u64) -> BigUint {
        assert!(n >= 1, "weight requires n ≥ 1");
        self.coeffs
            .iter()
            .fold(BigUint::one(), |acc, &c| acc * big(n / gcd(n, c)))
    }

    /// Σ n_{gH} over the representatives in {0, …, r−1}, not reduced mod r.
    pub fn coefficient_sum(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Translate so that coset `c` lands on the trivial coset H.
    pub fn normalize_to_trivial(&self, c: usize) -> Result<Self> {
        if c >= self.space.len() {
            return Err(Error::OutOfRange(format!("coset {c}")));
        }
        let g = self.space.representative(c);
        self.translate(self.space.group.inv(g))
    }

    /// α with the coefficient at coset `c` set to zero.
    pub fn without_coset(&self, c: usize) -> Self {
        let mut out = self.clone();
        out.coeffs[c] = 0;
        out
    }
}

fn check_modulus(r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::Zero("group-ring modulus"));
    }
    if r > MAX_MODULUS {
        return Err(Error::Overflow("group-ring modulus above 2^32"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular(g: FiniteGroup) -> Arc<CosetSpace> {
        let g = Arc::new(g);
        CosetSpace::new(&Subgroup::trivial(&g))
    }

    #[test]
    fn group_constructors() {
        assert_eq!(FiniteGroup::cyclic(6).order(), 6);
        assert!(FiniteGroup::abelian(&[2, 2, 2]).is_abelian());
        assert_eq!(FiniteGroup::abelian(&[4, 2]).order(), 8);
        assert!(!FiniteGroup::dihedral(4).is_abelian());
        assert!(!FiniteGroup::quaternion().is_abelian());
        // Q8 has a unique element of order 2
        let q = FiniteGroup::quaternion();
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 2).count(), 1);
        let d = FiniteGroup::dihedral(4);
        assert_eq!((0..8).filter(|&x| d.element_order(x) == 2).count(), 5);
        assert_eq!(FiniteGroup::abelian(&[1]).order(), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![], None).is_err());
    }

    #[test]
    fn subgroup_counts() {
        let count = |g: FiniteGroup| all_subgroups(&Arc::new(g)).len();
        assert_eq!(count(FiniteGroup::cyclic(8)), 4);
        assert_eq!(count(FiniteGroup::abelian(&[2, 2])), 5);
        assert_eq!(count(FiniteGroup::abelian(&[2, 2, 2])), 16);
        assert_eq!(count(FiniteGroup::dihedral(3)), 6);
        assert_eq!(count(FiniteGroup::dihedral(4)), 10);
        assert_eq!(count(FiniteGroup::quaternion()), 6);
    }

    #[test]
    fn translate_examples() {
        let sp = regular(FiniteGroup::cyclic(3));
        let a = GroupRingElement::new(&sp, 5, &[1, 0, 0]).unwrap();
        assert_eq!(a.translate(0).unwrap(), a);
        assert_eq!(a.translate(1).unwrap().coeffs(), &[0, 1, 0]);
        let c = GroupRingElement::new(&sp, 5, &[2, 2, 2]).unwrap();
        for g in 0..3 {
            assert_eq!(c.translate(g).unwrap(), c);
        }
        assert!(a.translate(3).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        let sp = regular(FiniteGroup::cyclic(3));
        assert_eq!(GroupRingElement::zero(&sp, 4).unwrap().stabilizer().order(), 3);
        assert_eq!(
            GroupRingElement::new(&sp, 4, &[1, 1, 1])
                .unwrap()
                .stabilizer()
                .order(),
            3
        );
        assert_eq!(
            GroupRingElement::new(&sp, 4, &[1, 0, 0])
                .unwrap()
                .stabilizer()
                .members(),
            &[0]
        );
    }

    #[test]
    fn orbit_examples() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let sp = CosetSpace::new(&Subgroup::trivial(&g));
        assert_eq!(orbits(&Subgroup::full(&g), &sp).unwrap(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(orbits(&Subgroup::trivial(&g), &sp).unwrap().len(), 4);
        let sq = Subgroup::generated(&g, &[2]).unwrap();
        assert_eq!(orbits(&sq, &sp).unwrap(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn weight_degree_sum_examples() {
        let sp3 = regular(FiniteGroup::cyclic(3));
        let zero = GroupRingElement::zero(&sp3, 3).unwrap();
        assert_eq!(zero.weight(7), BigUint::one());
        assert_eq!(zero.fixed_degree(), 1);
        assert_eq!(zero.coefficient_sum(), 0);
        let e = GroupRingElement::new(&sp3, 3, &[1, 0, 0]).unwrap();
        assert_eq!(e.weight(3), big(3));
        assert_eq!(e.fixed_degree(), 3);
        let ones = GroupRingElement::new(&sp3, 3, &[1, 1, 1]).unwrap();
        assert_eq!(ones.fixed_degree(), 1);
        assert_eq!(ones.coefficient_sum(), 3);
        let sp2 = regular(FiniteGroup::cyclic(2));
        let x = GroupRingElement::new(&sp2, 8, &[2, 1]).unwrap();
        assert_eq!(x.weight(4), big(8));
        assert_eq!(x.coefficient_sum(), 3);
    }

    #[test]
    fn lexicographic_enumeration() {
        let sp = regular(FiniteGroup::cyclic(2));
        let all: Vec<Vec<u64>> = (0..9)
            .map(|i| GroupRingElement::from_index(&sp, 3, i).unwrap().coeffs().to_vec())
            .collect();
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(all[8], vec![2, 2]);
        assert!(GroupRingElement::from_index(&sp, 3, 9).is_err());
        assert_eq!(sp.module_size(3), Some(9));
    }

    #[test]
    fn normalization_moves_coset_to_trivial() {
        let g = Arc::new(FiniteGroup::dihedral(3));
        let h = Subgroup::generated(&g, &[3]).unwrap();
        let sp = CosetSpace::new(&h);
        assert_eq!(sp.len(), 3);
        for c in 0..3 {
            let mut coeffs = vec![0i64; 3];
            coeffs[c] = 5;
            let a = GroupRingElement::new(&sp, 6, &coeffs).unwrap();
            assert_eq!(a.normalize_to_trivial(c).unwrap().coeffs()[0], 5);
        }
    }

    #[test]
    fn negative_coefficients_reduce() {
        let sp = regular(FiniteGroup::cyclic(2));
        let a = GroupRingElement::new(&sp, 4, &[-1, 6]).unwrap();
        assert_eq!(a.coeffs(), &[3, 2]);
        assert!(GroupRingElement::zero(&sp, 0).is_err());
    }
}
