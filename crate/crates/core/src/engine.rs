//! Deterministic gcd folds over index ranges.
//!
//! Every enumeration in the crate reduces to "evaluate a positive term at
//! each index in 0..len and take the gcd". The fold state also keeps the
//! smallest index whose term equals the running gcd; merging two states is
//! associative and commutative, so the result does not depend on how the
//! range is split across workers.
//!
//! With the `parallel` feature (default) [`fold`] runs on the rayon pool;
//! without it, or through [`fold_sequential`], it runs on the calling thread.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdFold {
    /// gcd of all terms seen; zero when nothing was folded.
    pub gcd: BigUint,
    /// Smallest index whose term equals `gcd`, if any term does.
    pub witness: Option<u64>,
    pub count: u64,
}

impl GcdFold {
    pub fn empty() -> Self {
        GcdFold {
            gcd: BigUint::zero(),
            witness: None,
            count: 0,
        }
    }

    fn single(index: u64, term: BigUint) -> Self {
        GcdFold {
            gcd: term,
            witness: Some(index),
            count: 1,
        }
    }

    pub fn push(self, index: u64, term: BigUint) -> Self {
        self.merge(GcdFold::single(index, term))
    }

    pub fn merge(self, other: GcdFold) -> Self {
        let gcd = self.gcd.gcd(&other.gcd);
        let pick = |f: &GcdFold| if f.gcd == gcd { f.witness } else { None };
        let witness = match (pick(&self), pick(&other)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        GcdFold {
            gcd,
            witness,
            count: self.count + other.count,
        }
    }
}

pub fn fold_sequential<F>(len: u64, term: F) -> Result<GcdFold>
where
    F: Fn(u64) -> Result<BigUint>,
{
    (0..len).try_fold(GcdFold::empty(), |acc, i| Ok(acc.push(i, term(i)?)))
}

/// Folds contiguous chunks of the given size sequentially, then merges the
/// chunk results. Used to check partition independence.
pub fn fold_chunked<F>(len: u64, chunk: u64, term: F) -> Result<GcdFold>
where
    F: Fn(u64) -> Result<BigUint>,
{
    let chunk = chunk.max(1);
    let mut partials = Vec::new();
    let mut start = 0;
    while start < len {
        let end = (start + chunk).min(len);
        partials.push((start..end).try_fold(GcdFold::empty(), |acc, i| {
            Ok::<_, crate::Error>(acc.push(i, term(i)?))
        })?);
        start = end;
    }
    // merge from the back to exercise a different association order
    Ok(partials
        .into_iter()
        .rev()
        .fold(GcdFold::empty(), |acc, p| p.merge(acc)))
}

#[cfg(feature = "parallel")]
pub fn fold_parallel<F>(len: u64, term: F) -> Result<GcdFold>
where
    F: Fn(u64) -> Result<BigUint> + Sync + Send,
{
    use rayon::prelude::*;
    (0..len)
        .into_par_iter()
        .try_fold(GcdFold::empty, |acc, i| Ok(acc.push(i, term(i)?)))
        .try_reduce(GcdFold::empty, |a, b| Ok(a.merge(b)))
}

/// The default fold: parallel when the `parallel` feature is on.
pub fn fold<F>(len: u64, term: F) -> Result<GcdFold>
where
    F: Fn(u64) -> Result<BigUint> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        fold_parallel(len, term)
    }
    #[cfg(not(feature = "parallel"))]
    {
        fold_sequential(len, term)
    }
}

/// Maps each index and merges the results. `merge` must be associative and
/// commutative for the result to be independent of scheduling.
pub fn map_reduce<T, M, R>(len: u64, identity: fn() -> T, map: M, merge: R) -> Result<T>
where
    T: Send,
    M: Fn(u64) -> Result<T> + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len)
            .into_par_iter()
            .map(map)
            .try_reduce(identity, |a, b| Ok(merge(a, b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).try_fold(identity(), |acc, i| Ok(merge(acc, map(i)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;
    use crate::Error;

    fn term(i: u64) -> Result<BigUint> {
        // gcd over i ≥ 0 of 12·(i mod 7 + 1) is 12, first attained at 0 and 7, ...
        Ok(big(12 * (i % 7 + 1)))
    }

    #[test]
    fn empty_fold() {
        let f = fold_sequential(0, term).unwrap();
        assert!(f.gcd.is_zero());
        assert_eq!(f.witness, None);
    }

    #[test]
    fn witness_is_first_attaining_index() {
        let f = fold_sequential(100, |i| Ok(big(12 * (i % 7 + 2)))).unwrap();
        // terms 24, 36, ... gcd 12 never attained
        assert_eq!(f.gcd, big(12));
        assert_eq!(f.witness, None);
        let g = fold_sequential(100, term).unwrap();
        assert_eq!(g.witness, Some(0));
        let h = fold_sequential(100, |i| Ok(big(if i == 42 { 3 } else { 6 }))).unwrap();
        assert_eq!((h.gcd.clone(), h.witness), (big(3), Some(42)));
    }

    #[test]
    fn partition_independence() {
        let reference = fold_sequential(1000, term).unwrap();
        for chunk in [1, 2, 3, 7, 64, 999, 5000] {
            assert_eq!(fold_chunked(1000, chunk, term).unwrap(), reference);
        }
        assert_eq!(fold(1000, term).unwrap(), reference);
    }

    #[test]
    fn map_reduce_sums() {
        let total = map_reduce(1000, || 0u64, |i| Ok(i % 13), |a, b| a + b).unwrap();
        assert_eq!(total, (0..1000).map(|i| i % 13).sum::<u64>());
    }

    #[test]
    fn errors_propagate() {
        let r = fold(50, |i| {
            if i == 30 {
                Err(Error::Oracle("boom".into()))
            } else {
                Ok(big(1))
            }
        });
        assert!(r.is_err());
    }
}
