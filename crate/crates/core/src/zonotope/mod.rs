//! Exact membership in the degree-sequence polytope: the zonotope spanned
//! by the segments `[0, v]` over all nonzero 0/1 vectors `v`. Membership
//! of `b` is the feasibility of `A x = b, 0 <= x <= 1` over the `2^d - 1`
//! implicit columns, decided by a phase-1 simplex with column generation
//! (see `simplex`). Both answers carry their own proof: a decomposition
//! that reconstructs `b`, or a separating vector `c` with
//! `<c,b> > h(c)`.

mod simplex;

use num::{BigRational, One, Signed, Zero};

use crate::dim::Dimension;
use crate::edge::{degree_sequence, Edge, EdgeSet};
use crate::error::{DspError, Result};
use crate::vector::{DegreeVector, RationalVector};

/// A basic feasible point of the membership LP, split into the columns at
/// value one and the at-most-`d` basic columns with fractional value.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub integral: EdgeSet,
    pub fractional: Vec<(Edge, BigRational)>,
}

impl Decomposition {
    /// Exact reconstruction check: degrees of the integral part plus the
    /// weighted fractional columns must equal `b`.
    pub fn verify(&self, b: &RationalVector) -> bool {
        let d = self.integral.dim().usize();
        let mut acc: Vec<BigRational> = self
            .integral
            .degree_slice()
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        for (e, alpha) in &self.fractional {
            let mut m = e.mask();
            while m != 0 {
                acc[m.trailing_zeros() as usize] += alpha;
                m &= m - 1;
            }
        }
        (0..d).all(|i| acc[i] == *b.get(i))
    }

    /// The fractional remainder `W = b - deg(integral)` as exact rationals.
    pub fn fractional_sum(&self) -> Vec<BigRational> {
        let d = self.integral.dim().usize();
        let mut acc = vec![BigRational::zero(); d];
        for (e, alpha) in &self.fractional {
            let mut m = e.mask();
            while m != 0 {
                acc[m.trailing_zeros() as usize] += alpha;
                m &= m - 1;
            }
        }
        acc
    }
}

/// Exact evidence that `b` lies outside: `<c,b> = lhs > rhs = h(c)`.
#[derive(Clone, Debug)]
pub struct SeparationCertificate {
    pub c: RationalVector,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl SeparationCertificate {
    /// Recomputes both sides from scratch (the support function side by
    /// full enumeration) and checks strictness.
    pub fn verify(&self, b: &RationalVector) -> bool {
        if b.dim() != self.c.dim() {
            return false;
        }
        let lhs: BigRational = self
            .c
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(ci, bi)| ci * bi)
            .sum();
        lhs == self.lhs && support_function(&self.c) == self.rhs && self.lhs > self.rhs
    }
}

#[derive(Clone, Debug)]
pub enum MembershipResult {
    Inside(Decomposition),
    Outside(SeparationCertificate),
}

impl MembershipResult {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipResult::Inside(_))
    }
}

/// Simplex knobs. The pivot cap is a safety valve surfacing runaway
/// instances as resource errors instead of hangs; deep interior points
/// need about `2^{d-1}` bound flips because that is the witness size.
#[derive(Clone, Copy, Debug)]
pub struct LpConfig {
    pub pivot_cap: u64,
    pub stall_limit: u32,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            pivot_cap: 4_000_000,
            stall_limit: 30,
        }
    }
}

/// Support function `h(c) = sum_v max(0, <c,v>)` over all nonzero masks.
/// This is an exact `2^d - 1` term sum; there is no cheaper exact route
/// (optimizing a linear function here is as hard as counting knapsack
/// solutions).
pub fn support_function(c: &RationalVector) -> BigRational {
    let d = c.dim().usize();
    // dot(m) built incrementally: dot(m) = dot(m without low bit) + c[low]
    let n = 1usize << d;
    let mut dots: Vec<BigRational> = Vec::with_capacity(n);
    dots.push(BigRational::zero());
    let mut acc = BigRational::zero();
    for m in 1..n {
        let low = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        let dot = &dots[rest] + c.get(low);
        if dot.is_positive() {
            acc += &dot;
        }
        dots.push(dot);
    }
    acc
}

/// Decides `b ∈ Z^d`. Negative coordinates are rejected (the polytope
/// lies in the nonnegative orthant); everything else gets an exact
/// answer. Deterministic for fixed input.
pub fn membership(b: &RationalVector, cfg: &LpConfig) -> Result<MembershipResult> {
    let dim = b.dim();
    if !b.is_nonnegative() {
        return Err(DspError::invalid(
            "membership requires nonnegative coordinates".to_string(),
        ));
    }
    let max_deg = BigRational::from_integer(dim.max_degree().into());
    let reflectable = b.coords().iter().all(|c| *c <= max_deg);
    let sum_b: BigRational = b.coords().iter().sum();
    let half_total =
        BigRational::from_integer((dim.get() as i64 * dim.max_degree()).into()) / BigRational::from_integer(2.into());

    // Work on the reflected point when b sits in the upper half: the
    // solution there has fewer columns at value one, and the central
    // symmetry maps the answer back exactly.
    if reflectable && sum_b > half_total {
        let refl = RationalVector::new(
            dim,
            b.coords().iter().map(|c| &max_deg - c).collect(),
        )?;
        return match simplex::solve(&refl, cfg)? {
            MembershipResult::Inside(dec) => {
                let mapped = reflect_decomposition(dec)?;
                if !mapped.verify(b) {
                    return Err(DspError::contract(
                        "reflected decomposition fails to reconstruct b".to_string(),
                    ));
                }
                Ok(MembershipResult::Inside(mapped))
            }
            MembershipResult::Outside(cert) => {
                let mapped = reflect_certificate(cert, dim)?;
                Ok(MembershipResult::Outside(mapped))
            }
        };
    }

    let res = simplex::solve(b, cfg)?;
    if let MembershipResult::Inside(dec) = &res {
        if !dec.verify(b) {
            return Err(DspError::contract(
                "decomposition fails to reconstruct b".to_string(),
            ));
        }
    }
    Ok(res)
}

/// `x_v = 1 - x'_v`: at value one exactly off the reflected support.
fn reflect_decomposition(dec: Decomposition) -> Result<Decomposition> {
    let mut used = dec.integral.clone();
    for (e, _) in &dec.fractional {
        used.insert(*e)?;
    }
    let integral = used.complement();
    let one = BigRational::one();
    let fractional = dec
        .fractional
        .into_iter()
        .map(|(e, a)| (e, &one - &a))
        .collect();
    Ok(Decomposition {
        integral,
        fractional,
    })
}

/// Maps `<c',b'> > h(c')` for the reflected point to a certificate for
/// `b` via `h(-c) = h(c) - 2^{d-1} * sum(c)`.
fn reflect_certificate(cert: SeparationCertificate, dim: Dimension) -> Result<SeparationCertificate> {
    let max_deg = BigRational::from_integer(dim.max_degree().into());
    let sum_c: BigRational = cert.c.coords().iter().sum();
    let shift = &max_deg * &sum_c;
    let c = RationalVector::new(dim, cert.c.coords().iter().map(|x| -x).collect())?;
    Ok(SeparationCertificate {
        c,
        lhs: &cert.lhs - &shift,
        rhs: &cert.rhs - &shift,
    })
}

/// Membership of the shifted point `b - shift` where the shift may be
/// signed. A negative shifted coordinate is reported as its own outcome
/// (the polytope is in the nonnegative orthant) rather than an error.
#[derive(Clone, Debug)]
pub enum ShiftedMembership {
    Rejected { coordinate: usize },
    Decided(MembershipResult),
}

pub fn decompose_shifted(
    b: &DegreeVector,
    shift: &[i64],
    cfg: &LpConfig,
) -> Result<ShiftedMembership> {
    let dim = b.dim();
    if shift.len() != dim.usize() {
        return Err(DspError::invalid("shift length mismatch".to_string()));
    }
    let mut coords = Vec::with_capacity(dim.usize());
    for i in 0..dim.usize() {
        let c = b.get(i) - shift[i];
        if c < 0 {
            return Ok(ShiftedMembership::Rejected { coordinate: i });
        }
        coords.push(c);
    }
    let shifted = DegreeVector::new(dim, coords)?;
    Ok(ShiftedMembership::Decided(membership(
        &shifted.to_rational(),
        cfg,
    )?))
}

/// Convenience: is an integer point inside, with the decomposition split
/// into the integral part and the integer remainder `W`?
pub fn integer_decomposition(dec: &Decomposition, b: &DegreeVector) -> Result<(EdgeSet, Vec<i64>)> {
    let d = b.dim().usize();
    let p = dec.integral.clone();
    let pdeg = degree_sequence(&p);
    let mut w = Vec::with_capacity(d);
    for i in 0..d {
        let wi = b.get(i) - pdeg.get(i);
        if wi < 0 {
            return Err(DspError::contract(format!(
                "integral part exceeds target at coordinate {i}"
            )));
        }
        w.push(wi);
    }
    // cross-check against the fractional sum
    let frac = dec.fractional_sum();
    for i in 0..d {
        if frac[i] != BigRational::from_integer(w[i].into()) {
            return Err(DspError::contract(format!(
                "fractional remainder at coordinate {i} is not the integer {}",
                w[i]
            )));
        }
    }
    Ok((p, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::reflect;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn rv(d: u32, c: &[i64]) -> RationalVector {
        RationalVector::from_integers(dim(d), c).unwrap()
    }

    fn rat(n: i64, den: i64) -> BigRational {
        BigRational::new(n.into(), den.into())
    }

    #[test]
    fn support_function_examples() {
        // c = 1: every mask contributes its popcount, total d * 2^{d-1}
        for d in 1..=10u32 {
            let ones = rv(d, &vec![1; d as usize]);
            assert_eq!(
                support_function(&ones),
                BigRational::from_integer((d as i64 * (1i64 << (d - 1))).into())
            );
        }
        assert_eq!(support_function(&rv(2, &[1, 1])), rat(4, 1));
        assert_eq!(support_function(&rv(2, &[0, 0])), rat(0, 1));
        assert_eq!(support_function(&rv(2, &[1, -2])), rat(1, 1));
    }

    #[test]
    fn membership_inside_square() {
        let cfg = LpConfig::default();
        let res = membership(&rv(2, &[2, 2]), &cfg).unwrap();
        match res {
            MembershipResult::Inside(dec) => {
                let masks: Vec<u32> = dec.integral.iter().map(|e| e.mask()).collect();
                assert_eq!(masks, vec![0b01, 0b10, 0b11]);
                assert!(dec.fractional.is_empty());
            }
            _ => panic!("expected inside"),
        }
    }

    #[test]
    fn membership_outside_with_pinned_certificate() {
        let cfg = LpConfig::default();
        let b = rv(2, &[3, 3]);
        match membership(&b, &cfg).unwrap() {
            MembershipResult::Outside(cert) => {
                assert_eq!(cert.c.coords(), rv(2, &[1, 1]).coords());
                assert_eq!(cert.lhs, rat(6, 1));
                assert_eq!(cert.rhs, rat(4, 1));
                assert!(cert.verify(&b));
            }
            _ => panic!("expected outside"),
        }
    }

    #[test]
    fn membership_fractional_midpoint() {
        let cfg = LpConfig::default();
        let b = RationalVector::new(dim(2), vec![rat(1, 2), rat(1, 2)]).unwrap();
        match membership(&b, &cfg).unwrap() {
            MembershipResult::Inside(dec) => {
                assert!(dec.integral.is_empty());
                assert_eq!(dec.fractional.len(), 1);
                assert_eq!(dec.fractional[0].0.mask(), 0b11);
                assert_eq!(dec.fractional[0].1, rat(1, 2));
                assert!(dec.verify(&b));
            }
            _ => panic!("expected inside"),
        }
    }

    #[test]
    fn membership_rejects_negative() {
        let cfg = LpConfig::default();
        assert!(membership(&rv(2, &[-1, 0]), &cfg).is_err());
    }

    #[test]
    fn decompose_shifted_examples() {
        let cfg = LpConfig::default();
        let b = DegreeVector::new(dim(2), vec![2, 2]).unwrap();
        match decompose_shifted(&b, &[1, 1], &cfg).unwrap() {
            ShiftedMembership::Decided(MembershipResult::Inside(_)) => {}
            other => panic!("expected inside, got {other:?}"),
        }
        // zero shift is plain membership
        match decompose_shifted(&b, &[0, 0], &cfg).unwrap() {
            ShiftedMembership::Decided(MembershipResult::Inside(_)) => {}
            other => panic!("expected inside, got {other:?}"),
        }
        let zero = DegreeVector::zero(dim(3));
        match decompose_shifted(&zero, &[9, 9, 9], &cfg).unwrap() {
            ShiftedMembership::Rejected { coordinate: 0 } => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn membership_agrees_with_reachability_d3() {
        // On integer points of the box at small d, the polytope's lattice
        // points are exactly the realizable ones, and each side of the
        // answer self-verifies.
        let cfg = LpConfig::default();
        let rs = crate::oracle::reachable_set(dim(3)).unwrap();
        crate::oracle::for_each_box_point(dim(3), 4, |p| {
            let b = DegreeVector::new(dim(3), p.to_vec()).unwrap();
            let br = b.to_rational();
            match membership(&br, &cfg).unwrap() {
                MembershipResult::Inside(dec) => {
                    assert!(rs.contains(&b), "LP inside but unreachable: {p:?}");
                    assert!(dec.verify(&br));
                }
                MembershipResult::Outside(cert) => {
                    assert!(!rs.contains(&b), "LP outside but reachable: {p:?}");
                    assert!(cert.verify(&br), "certificate fails at {p:?}");
                }
            }
        });
    }

    #[test]
    fn membership_center_always_inside() {
        let cfg = LpConfig::default();
        for d in 2..=8u32 {
            let center = vec![1i64 << (d - 2); d as usize];
            let res = membership(&rv(d, &center), &cfg).unwrap();
            assert!(res.is_inside(), "center outside at d={d}");
        }
    }

    #[test]
    fn membership_reflect_symmetric_status() {
        let cfg = LpConfig::default();
        let mut rng = crate::rng::SplitMix64::new(20240915);
        for _ in 0..40 {
            let d = 2 + (rng.next_below(3) as u32); // 2..=4
            let bound = 1i64 << (d - 1);
            let coords: Vec<i64> = (0..d).map(|_| rng.next_range_i64(0, bound)).collect();
            let b = DegreeVector::new(dim(d), coords).unwrap();
            let r = reflect(&b).unwrap();
            let s1 = membership(&b.to_rational(), &cfg).unwrap().is_inside();
            let s2 = membership(&r.to_rational(), &cfg).unwrap().is_inside();
            assert_eq!(s1, s2, "asymmetric status for {b}");
        }
    }
}
