//! Sublattices of `Z^n`: canonical Hermite bases, containment, indices,
//! saturation, and primitive vectors.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{column_hermite_form, integer_kernel, IntMatrix};
use crate::rat::{clear_denominators, Rat};

/// A subgroup of `Z^n`, stored as the column Hermite normal form of any
/// generating set. Two lattices are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

/// The index `[sup : sub]` of one lattice in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigUint),
    Infinite,
}

impl Index {
    pub fn is_one(&self) -> bool {
        matches!(self, Index::Finite(n) if n.is_one())
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    NotASublattice,
    AmbientMismatch,
    ZeroVector,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotASublattice => write!(f, "not a sublattice"),
            LatticeError::AmbientMismatch => write!(f, "ambient ranks differ"),
            LatticeError::ZeroVector => write!(f, "zero vector has no direction"),
        }
    }
}

impl Lattice {
    /// The zero lattice in `Z^n`.
    pub fn zero(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::zero(ambient, 0),
        }
    }

    /// All of `Z^n`.
    pub fn standard(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    /// The span of the given integer generators.
    pub fn from_generators(ambient: usize, generators: &[Vec<BigInt>]) -> Self {
        for g in generators {
            assert_eq!(g.len(), ambient, "generator of wrong length");
        }
        let m = IntMatrix::from_columns(ambient, generators);
        Lattice {
            ambient,
            basis: column_hermite_form(&m),
        }
    }

    pub fn from_generators_i64(ambient: usize, generators: &[&[i64]]) -> Self {
        let gens: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Lattice::from_generators(ambient, &gens)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Membership of an integer vector.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient);
        crate::linalg::solve_integer(&self.basis, v).is_some()
    }

    /// `Z^n ∩ (self ⊗ Q)`: the smallest saturated lattice containing `self`.
    /// Computed by two integer-kernel passes, so the result is saturated by
    /// construction.
    pub fn saturate(&self) -> Lattice {
        if self.is_zero() {
            return self.clone();
        }
        let orth = integer_kernel(&self.basis.transpose());
        if orth.is_empty() {
            return Lattice::standard(self.ambient);
        }
        let orth_t = IntMatrix::from_columns(self.ambient, &orth).transpose();
        let sat = integer_kernel(&orth_t);
        Lattice::from_generators(self.ambient, &sat)
    }

    pub fn is_saturated(&self) -> bool {
        self == &self.saturate()
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Lattice(ambient={}, basis={:?})",
            self.ambient, self.basis
        )
    }
}

/// The index `#(sup / sub)`, finite when the ranks agree.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<Index, LatticeError> {
    if sub.ambient_rank() != sup.ambient_rank() {
        return Err(LatticeError::AmbientMismatch);
    }
    // Express each basis vector of sub in terms of sup (over Z).
    let mut coords: Vec<Vec<BigInt>> = Vec::with_capacity(sub.rank());
    for col in sub.basis_columns() {
        match crate::linalg::solve_integer(sup.basis(), &col) {
            Some(x) => coords.push(x),
            None => return Err(LatticeError::NotASublattice),
        }
    }
    if sub.rank() < sup.rank() {
        return Ok(Index::Infinite);
    }
    // Equal ranks: the index is |det| of the coordinate matrix.
    let m = IntMatrix::from_columns(sup.rank(), &coords);
    let d = m.det().abs();
    debug_assert!(!d.is_zero(), "independent columns cannot have zero det");
    Ok(Index::Finite(d.to_biguint().expect("abs is nonnegative")))
}

/// The primitive integer vector positively proportional to `v`.
pub fn primitive_vector(v: &[Rat]) -> Result<Vec<BigInt>, LatticeError> {
    if v.iter().all(Rat::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    let (ints, _) = clear_denominators(v);
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Ok(ints.iter().map(|x| x / &g).collect())
}

/// Primitive vector from integer input.
pub fn primitive_vector_int(v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    let rats: Vec<Rat> = v.iter().map(|x| Rat::from_bigint(x.clone())).collect();
    primitive_vector(&rats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use alloc::vec;
    use num_bigint::ToBigInt;

    #[test]
    fn index_identity() {
        let z2 = Lattice::standard(2);
        assert_eq!(
            lattice_index(&z2, &z2).unwrap(),
            Index::Finite(BigUint::from(1u32))
        );
    }

    #[test]
    fn index_two() {
        // 2Z x Z inside Z^2: coset enumeration gives {0,1} x {0}.
        let sub = Lattice::from_generators_i64(2, &[&[2, 0], &[0, 1]]);
        let sup = Lattice::standard(2);
        assert_eq!(
            lattice_index(&sub, &sup).unwrap(),
            Index::Finite(BigUint::from(2u32))
        );
    }

    #[test]
    fn index_rank_defect() {
        let sub = Lattice::from_generators_i64(2, &[&[1, 1]]);
        assert_eq!(
            lattice_index(&sub, &Lattice::standard(2)).unwrap(),
            Index::Infinite
        );
    }

    #[test]
    fn index_rejects_non_sublattice() {
        let a = Lattice::from_generators_i64(2, &[&[1, 0]]);
        let b = Lattice::from_generators_i64(2, &[&[0, 1]]);
        assert_eq!(lattice_index(&a, &b), Err(LatticeError::NotASublattice));
    }

    #[test]
    fn saturate_primitive_rescale() {
        let l = Lattice::from_generators_i64(2, &[&[2, 0]]);
        assert_eq!(l.saturate(), Lattice::from_generators_i64(2, &[&[1, 0]]));
    }

    #[test]
    fn saturate_full_rank() {
        // span{(2,2),(0,4)} is full rank, so its saturation is all of Z^2;
        // oracle: enumerate small integer vectors and check membership in
        // the rational span (here everything) and in the saturation.
        let l = Lattice::from_generators_i64(2, &[&[2, 2], &[0, 4]]);
        let sat = l.saturate();
        assert_eq!(sat, Lattice::standard(2));
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let v = vec![x.to_bigint().unwrap(), y.to_bigint().unwrap()];
                assert!(sat.contains(&v));
            }
        }
        assert_eq!(
            lattice_index(&l, &sat).unwrap(),
            Index::Finite(BigUint::from(8u32))
        );
    }

    #[test]
    fn saturate_idempotent() {
        let l = Lattice::from_generators_i64(3, &[&[2, 4, 0], &[0, 6, 3]]);
        let s = l.saturate();
        assert_eq!(s, s.saturate());
        assert!(lattice_index(&l, &s).unwrap().finite().is_some());
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(
            primitive_vector(&[rat(1, 1), rat(0, 1)]).unwrap(),
            vec![BigInt::from(1), BigInt::from(0)]
        );
        assert_eq!(
            primitive_vector(&[rat(1, 2), rat(3, 2)]).unwrap(),
            vec![BigInt::from(1), BigInt::from(3)]
        );
        // sign preserved, gcd removed
        assert_eq!(
            primitive_vector(&[rat(-2, 1), rat(-4, 1)]).unwrap(),
            vec![BigInt::from(-1), BigInt::from(-2)]
        );
        assert_eq!(
            primitive_vector(&[Rat::zero()]),
            Err(LatticeError::ZeroVector)
        );
    }

    #[test]
    fn tower_multiplicativity_small() {
        let c = Lattice::standard(2);
        let b = Lattice::from_generators_i64(2, &[&[1, 0], &[0, 2]]);
        let a = Lattice::from_generators_i64(2, &[&[3, 0], &[0, 2]]);
        let iac = lattice_index(&a, &c).unwrap();
        let iab = lattice_index(&a, &b).unwrap();
        let ibc = lattice_index(&b, &c).unwrap();
        assert_eq!(
            iac.finite().unwrap(),
            &(iab.finite().unwrap() * ibc.finite().unwrap())
        );
    }
}
