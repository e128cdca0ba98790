use num::{BigInt, BigRational, Signed, Zero};

use crate::dim::Dimension;
use crate::error::{DspError, Result};

/// Exact nonnegative integer vector: a candidate degree sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DegreeVector {
    dim: Dimension,
    coords: Vec<i64>,
}

impl DegreeVector {
    pub fn new(dim: Dimension, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != dim.usize() {
            return Err(DspError::invalid(format!(
                "expected {} coordinates, got {}",
                dim,
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c < 0) {
            return Err(DspError::invalid(format!("negative coordinate {c}")));
        }
        Ok(DegreeVector { dim, coords })
    }

    pub fn zero(dim: Dimension) -> Self {
        DegreeVector {
            dim,
            coords: vec![0; dim.usize()],
        }
    }

    #[inline]
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.coords[i]
    }

    pub fn sum(&self) -> i64 {
        self.coords.iter().sum()
    }

    /// True when every coordinate is at most `2^{d-1}` (the box bound).
    pub fn within_box(&self) -> bool {
        let max = self.dim.max_degree();
        self.coords.iter().all(|&c| c <= max)
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector {
            dim: self.dim,
            coords: self
                .coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }
}

impl std::fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Central reflection `b -> 2^{d-1}*1 - b`; the realizable set and the
/// whole polytope are both symmetric about `2^{d-2}*1`.
pub fn reflect(b: &DegreeVector) -> Result<DegreeVector> {
    let max = b.dim.max_degree();
    if let Some(c) = b.coords.iter().find(|&&c| c > max) {
        return Err(DspError::invalid(format!(
            "coordinate {c} exceeds maximum degree {max}"
        )));
    }
    Ok(DegreeVector {
        dim: b.dim,
        coords: b.coords.iter().map(|&c| max - c).collect(),
    })
}

/// Exact rational vector (arbitrary precision); all certified paths stay
/// in exact arithmetic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVector {
    dim: Dimension,
    coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(dim: Dimension, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != dim.usize() {
            return Err(DspError::invalid(format!(
                "expected {} coordinates, got {}",
                dim,
                coords.len()
            )));
        }
        Ok(RationalVector { dim, coords })
    }

    pub fn from_integers(dim: Dimension, coords: &[i64]) -> Result<Self> {
        Self::new(
            dim,
            coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    #[inline]
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    #[inline]
    pub fn get(&self, i: usize) -> &BigRational {
        &self.coords[i]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Dot product with a 0/1 mask: sums the coordinates under set bits.
    pub fn dot_mask(&self, mask: u32) -> BigRational {
        let mut acc = BigRational::zero();
        let mut m = mask;
        while m != 0 {
            acc += &self.coords[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        acc
    }

    /// Exact integer coordinates, or None if any coordinate is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn dv(d: u32, c: &[i64]) -> DegreeVector {
        DegreeVector::new(dim(d), c.to_vec()).unwrap()
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(&dv(3, &[0, 0, 0])).unwrap().coords(), &[4, 4, 4]);
        // the center 2^{d-2}*1 is the fixed point
        assert_eq!(reflect(&dv(3, &[2, 2, 2])).unwrap().coords(), &[2, 2, 2]);
        assert_eq!(reflect(&dv(2, &[2, 1])).unwrap().coords(), &[0, 1]);
    }

    #[test]
    fn reflect_out_of_range() {
        assert!(reflect(&dv(2, &[3, 0])).is_err());
    }

    #[test]
    fn degree_vector_validation() {
        assert!(DegreeVector::new(dim(2), vec![1]).is_err());
        assert!(DegreeVector::new(dim(2), vec![-1, 0]).is_err());
    }

    #[test]
    fn rational_dot_mask() {
        let v = RationalVector::from_integers(dim(3), &[1, -2, 5]).unwrap();
        assert_eq!(v.dot_mask(0b101), BigRational::from_integer(6.into()));
        assert_eq!(v.dot_mask(0b010), BigRational::from_integer((-2).into()));
    }
}
