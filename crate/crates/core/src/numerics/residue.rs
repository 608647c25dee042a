//! Residues mod k and wrap-around (cyclic) intervals over Z_k.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of Z_k together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

/// Mathematical (nonnegative) remainder of `x` mod `k`, defined for all
/// integers so differences like `p - a` never need case analysis.
pub fn residue(x: i64, k: u64) -> Result<Residue> {
    if k == 0 {
        return Err(Error::InvalidModulus);
    }
    Ok(Residue {
        value: x.rem_euclid(k as i64) as u64,
        modulus: k,
    })
}

/// Unchecked helper for hot paths with a known-good modulus.
pub fn wrap(x: i64, k: u64) -> u64 {
    debug_assert!(k > 0);
    x.rem_euclid(k as i64) as u64
}

/// (a - b) mod k for a, b already in Z_k.
pub fn wrap_sub(a: u64, b: u64, k: u64) -> u64 {
    debug_assert!(a < k && b < k);
    if a >= b {
        a - b
    } else {
        a + k - b
    }
}

/// (a + b) mod k.
pub fn wrap_add(a: u64, b: u64, k: u64) -> u64 {
    debug_assert!(a < k);
    (a + b % k) % k
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(Residue {
            value: value % modulus,
            modulus,
        })
    }

    fn check_same(self, other: Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }
}

/// The wrap-around interval from `lo` to `hi` inclusive in Z_k.
/// Always nonempty: size ranges over 1..=k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicInterval {
    pub lo: Residue,
    pub hi: Residue,
}

impl CyclicInterval {
    pub fn new(lo: Residue, hi: Residue) -> Result<Self> {
        lo.check_same(hi)?;
        Ok(CyclicInterval { lo, hi })
    }

    /// Convenience constructor from raw values.
    pub fn from_raw(lo: u64, hi: u64, k: u64) -> Result<Self> {
        Self::new(Residue::new(lo, k)?, Residue::new(hi, k)?)
    }

    pub fn modulus(&self) -> u64 {
        self.lo.modulus
    }

    /// Number of elements in the wrapped set.
    pub fn size(&self) -> u64 {
        wrap_sub(self.hi.value, self.lo.value, self.modulus()) + 1
    }

    /// Membership per the two-case definition: for lo <= hi the plain range,
    /// otherwise `x <= hi or lo <= x`.
    pub fn contains(&self, x: Residue) -> Result<bool> {
        self.lo.check_same(x)?;
        let (lo, hi, x) = (self.lo.value, self.hi.value, x.value);
        if lo <= hi {
            Ok(lo <= x && x <= hi)
        } else {
            Ok(x <= hi || lo <= x)
        }
    }

    /// Unchecked membership for raw values with the interval's modulus.
    pub fn contains_raw(&self, x: u64) -> bool {
        let k = self.modulus();
        wrap_sub(x, self.lo.value, k) <= wrap_sub(self.hi.value, self.lo.value, k)
    }
}

/// Size of ⟦lo, hi⟧ in Z_k without building the types.
pub fn interval_size_raw(lo: u64, hi: u64, k: u64) -> u64 {
    wrap_sub(hi, lo, k) + 1
}

/// Membership of x in ⟦lo, hi⟧ in Z_k without building the types.
pub fn interval_contains_raw(lo: u64, hi: u64, x: u64, k: u64) -> bool {
    wrap_sub(x, lo, k) <= wrap_sub(hi, lo, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_examples() {
        assert_eq!(residue(13, 10).unwrap().value, 3);
        assert_eq!(residue(10, 10).unwrap().value, 0);
        assert_eq!(residue(-3, 10).unwrap().value, 7);
        assert!(residue(5, 0).is_err());
    }

    #[test]
    fn interval_size_examples() {
        // ⟦8,2⟧ with k=10 is {8,9,0,1,2}.
        let i = CyclicInterval::from_raw(8, 2, 10).unwrap();
        assert_eq!(i.size(), 5);
        let singleton = CyclicInterval::from_raw(3, 3, 10).unwrap();
        assert_eq!(singleton.size(), 1);
        let full = CyclicInterval::from_raw(0, 9, 10).unwrap();
        assert_eq!(full.size(), 10);
    }

    #[test]
    fn interval_contains_examples() {
        let i = CyclicInterval::from_raw(8, 2, 10).unwrap();
        assert!(i.contains(Residue::new(0, 10).unwrap()).unwrap());
        assert!(!i.contains(Residue::new(5, 10).unwrap()).unwrap());
        let full = CyclicInterval::from_raw(0, 9, 10).unwrap();
        for x in 0..10 {
            assert!(full.contains(Residue::new(x, 10).unwrap()).unwrap());
        }
        let other = Residue::new(1, 7).unwrap();
        assert!(i.contains(other).is_err());
    }

    #[test]
    fn size_matches_residue_formula_exhaustively() {
        for k in 1..=64u64 {
            for lo in 0..k {
                for hi in 0..k {
                    let i = CyclicInterval::from_raw(lo, hi, k).unwrap();
                    let expect = residue(hi as i64 - lo as i64, k).unwrap().value + 1;
                    assert_eq!(i.size(), expect);
                }
            }
        }
    }

    #[test]
    fn complement_partitions_exhaustively() {
        // For size < k, ⟦lo,hi⟧ and ⟦hi+1,lo-1⟧ partition Z_k.
        for k in 2..=32u64 {
            for lo in 0..k {
                for hi in 0..k {
                    let i = CyclicInterval::from_raw(lo, hi, k).unwrap();
                    if i.size() == k {
                        continue;
                    }
                    let c = CyclicInterval::from_raw((hi + 1) % k, (lo + k - 1) % k, k).unwrap();
                    assert_eq!(i.size() + c.size(), k);
                    for x in 0..k {
                        let in_i = i.contains_raw(x);
                        let in_c = c.contains_raw(x);
                        assert!(in_i ^ in_c, "k={k} lo={lo} hi={hi} x={x}");
                    }
                }
            }
        }
    }
}
