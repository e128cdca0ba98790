//! Reductions around the degree-sequence polytope: realizing a
//! three-uniform degree sequence embeds into ordinary realizability one
//! dimension up, and counting knapsack solutions reduces to two linear
//! optimizations over the polytope.

use num::{BigInt, BigRational, ToPrimitive, Zero};

use crate::dim::Dimension;
use crate::error::{DspError, Result};
use crate::vector::{DegreeVector, RationalVector};
use crate::zonotope::support_function;

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The offset vector used by the three-uniform reduction in dimension
/// `d + 1`: the sum of all 0/1 vectors with positive weight under
/// `(-3, 1, ..., 1)`, in closed form. First coordinate
/// `2^d - 1 - d - C(d,2) - C(d,3)`, the rest `2^d - 1 - (d-1) - C(d-1,2)`.
pub fn reduction_offset(d: u32) -> Result<DegreeVector> {
    if d < 3 {
        return Err(DspError::invalid(
            "reduction offset needs at least three vertices".to_string(),
        ));
    }
    let dim = Dimension::new(d + 1)?;
    let dl = d as i64;
    let pow = 1i64 << d;
    let first = pow - 1 - dl - binomial(dl, 2) - binomial(dl, 3);
    let rest = pow - 1 - (dl - 1) - binomial(dl - 1, 2);
    let mut coords = vec![rest; d as usize + 1];
    coords[0] = first;
    DegreeVector::new(dim, coords)
}

/// Brute-force companion of [`reduction_offset`]: sums all masks of
/// `d + 1` bits with positive dot against `(-3, 1, ..., 1)`.
pub fn reduction_offset_brute_force(d: u32) -> Result<DegreeVector> {
    if d < 3 {
        return Err(DspError::invalid(
            "reduction offset needs at least three vertices".to_string(),
        ));
    }
    let dim = Dimension::new(d + 1)?;
    let n = d as usize + 1;
    let mut coords = vec![0i64; n];
    for mask in 1u64..(1 << n) {
        let first = (mask & 1) as i64;
        let others = (mask >> 1).count_ones() as i64;
        if others - 3 * first > 0 {
            for (i, c) in coords.iter_mut().enumerate() {
                *c += (mask >> i & 1) as i64;
            }
        }
    }
    DegreeVector::new(dim, coords)
}

/// A candidate degree sequence of a three-uniform hypergraph: each
/// coordinate at most `C(d-1, 2)` and the total divisible by three.
#[derive(Clone, Debug)]
pub struct ThreeUniformInstance {
    b: DegreeVector,
    divisible: bool,
}

impl ThreeUniformInstance {
    pub fn new(b: DegreeVector) -> Result<Self> {
        let d = b.dim().get() as i64;
        let cap = binomial(d - 1, 2);
        if let Some(&c) = b.coords().iter().find(|&&c| c > cap) {
            return Err(DspError::invalid(format!(
                "coordinate {c} exceeds the per-vertex triple count {cap}"
            )));
        }
        let divisible = b.sum() % 3 == 0;
        Ok(ThreeUniformInstance { b, divisible })
    }

    pub fn divisible(&self) -> bool {
        self.divisible
    }

    pub fn reduce(&self) -> Result<ReducedInstance> {
        reduce_three_uniform(&self.b)
    }
}

/// The image of a three-uniform instance: a point in dimension `d + 1`
/// realizable iff the instance is three-uniform-realizable.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub offset: DegreeVector,
    pub point: DegreeVector,
}

pub fn reduce_three_uniform(b: &DegreeVector) -> Result<ReducedInstance> {
    let sum = b.sum();
    if sum % 3 != 0 {
        return Err(DspError::invalid(format!(
            "degree sum {sum} not divisible by 3: not reducible (and trivially not realizable by triples)"
        )));
    }
    let d = b.dim().get();
    let offset = reduction_offset(d)?;
    let dim = offset.dim();
    let mut coords = Vec::with_capacity(d as usize + 1);
    coords.push(offset.get(0) + sum / 3);
    for i in 0..d as usize {
        coords.push(offset.get(i + 1) + b.get(i));
    }
    Ok(ReducedInstance {
        offset,
        point: DegreeVector::new(dim, coords)?,
    })
}

/// `max { <w,x> : x in the polytope }`, which equals the sum of the
/// positive dots over all nonzero masks (the empty hypergraph gives 0).
pub fn linear_optimum(w: &RationalVector) -> BigRational {
    support_function(w)
}

/// Counts `|{ x in {0,1}^d : <a,x> < beta }|` through two linear
/// optimizations in dimension `d + 1`: the objectives `(-a, beta)` and
/// `(-a, beta - 1/2)` differ by exactly `N/2`.
pub fn count_knapsack(a: &[i64], beta: i64) -> Result<u64> {
    if a.iter().any(|&c| c < 0) || beta < 0 {
        return Err(DspError::invalid(
            "knapsack weights and bound must be nonnegative".to_string(),
        ));
    }
    let dim = Dimension::new(a.len() as u32 + 1)?;
    let mut w1: Vec<BigRational> = a
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(-c)))
        .collect();
    let mut w2 = w1.clone();
    w1.push(BigRational::from_integer(beta.into()));
    w2.push(BigRational::new((2 * beta - 1).into(), 2.into()));
    let opt1 = linear_optimum(&RationalVector::new(dim, w1)?);
    let opt2 = linear_optimum(&RationalVector::new(dim, w2)?);
    let n2 = (&opt1 - &opt2) * BigRational::from_integer(2.into());
    if !n2.is_integer() || n2 < BigRational::zero() {
        return Err(DspError::contract(format!(
            "2*(OPT1 - OPT2) = {n2} is not a nonnegative integer"
        )));
    }
    n2.to_integer()
        .to_u64()
        .ok_or_else(|| DspError::contract("knapsack count exceeds u64".to_string()))
}
