//! Symbolic powers of the generic division algebra UD(F, N) tensored with an
//! arithmetic Brauer class.
//!
//! Only the index is modeled: UD(F, N)^c has index N/(N, c), and tensoring
//! with a class D defined over the base multiplies the indices.

use crate::arith::gcd;
use crate::brauer::{AbelianField, BrauerClass};
use crate::error::{Error, Result};

/// UD(F, N), the generic division algebra of degree N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericAlgebra {
    degree: u64,
}

impl GenericAlgebra {
    pub fn new(degree: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Zero("generic algebra degree"));
        }
        Ok(GenericAlgebra { degree })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }
}

/// Index of UD(F, N)^b: N / gcd(N, b mod N).
pub fn ud_power_index(n: u64, b: i64) -> u64 {
    assert!(n >= 1, "generic degree must be positive");
    let r = (b as i128).rem_euclid(n as i128) as u64;
    n / gcd(n, r)
}

/// N_{a,b} = N / gcd(N, 1 + a + b).
pub fn n_ab(n: u64, a: u64, b: u64) -> u64 {
    assert!(n >= 1, "generic degree must be positive");
    let s = ((1u128 + a as u128 + b as u128) % n as u128) as u64;
    n / gcd(n, s)
}

/// E^c ⊗ D for E = UD(F, N) and an arithmetic class D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedClass {
    generic: GenericAlgebra,
    exponent: u64,
    arith: BrauerClass,
    arith_degree: Option<u64>,
}

impl MixedClass {
    pub fn new(generic: GenericAlgebra, exponent: i64, arith: BrauerClass) -> Self {
        let n = generic.degree;
        let exponent = (exponent as i128).rem_euclid(n as i128) as u64;
        MixedClass {
            generic,
            exponent,
            arith,
            arith_degree: None,
        }
    }

    /// A purely arithmetic class, with a trivial generic part.
    pub fn arithmetic(arith: BrauerClass) -> Self {
        Self::new(GenericAlgebra { degree: 1 }, 0, arith)
    }

    /// UD(F, N) itself over the given base.
    pub fn generic(degree: u64, base: &AbelianField) -> Result<Self> {
        Ok(Self::new(
            GenericAlgebra::new(degree)?,
            1,
            BrauerClass::trivial(base),
        ))
    }

    /// Declares that the arithmetic part is a division algebra of this degree;
    /// [`mixed_index`] then insists on it.
    pub fn with_arith_degree(mut self, degree: u64) -> Self {
        self.arith_degree = Some(degree);
        self
    }

    pub fn generic_part(&self) -> GenericAlgebra {
        self.generic
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn arith(&self) -> &BrauerClass {
        &self.arith
    }

    fn has_generic(&self) -> bool {
        self.generic.degree > 1
    }

    /// Product in the Brauer group. Both generic parts must be powers of the
    /// same UD(F, N).
    pub fn tensor(&self, other: &MixedClass) -> Result<MixedClass> {
        let generic = match (self.has_generic(), other.has_generic()) {
            (true, true) if self.generic != other.generic => {
                return Err(Error::Precondition(format!(
                    "distinct generic algebras of degree {} and {}",
                    self.generic.degree, other.generic.degree
                )))
            }
            (true, _) => self.generic,
            (false, _) => other.generic,
        };
        let exponent = (self.exponent + other.exponent) as i64;
        Ok(MixedClass::new(
            generic,
            exponent,
            self.arith.tensor(&other.arith)?,
        ))
    }

    pub fn power(&self, k: i64) -> MixedClass {
        let n = self.generic.degree as i128;
        let e = ((self.exponent as i128) * (k as i128 % n)).rem_euclid(n) as i64;
        MixedClass::new(self.generic, e, self.arith.power(k))
    }

    pub fn opposite(&self) -> MixedClass {
        self.power(-1)
    }

    /// Index over the class's own base field.
    pub fn index_here(&self) -> Result<u64> {
        self.arith
            .index()
            .checked_mul(ud_power_index(self.generic.degree, self.exponent as i64))
            .ok_or(Error::Overflow("mixed index"))
    }

    pub fn restrict(&self, target: &AbelianField) -> Result<MixedClass> {
        Ok(MixedClass {
            generic: self.generic,
            exponent: self.exponent,
            arith: self.arith.restrict(target)?,
            arith_degree: self.arith_degree,
        })
    }
}

/// index(D restricted to target) · N/(N, c).
pub fn mixed_index(m: &MixedClass, target: &AbelianField) -> Result<u64> {
    let restricted = m.restrict(target)?;
    if let Some(declared) = m.arith_degree {
        let arith_index = restricted.arith.index();
        if declared != arith_index {
            return Err(Error::Degree(format!(
                "arithmetic part declared of degree {declared} has index {arith_index} over the target"
            )));
        }
    }
    restricted.index_here()
}
