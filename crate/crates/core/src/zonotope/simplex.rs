//! Phase-1 bounded-variable simplex specialized to `A x = b, 0 <= x <= 1`
//! where the columns are all nonzero 0/1 vectors, kept implicit.
//!
//! Column generation: a column prices in from its lower bound when
//! `<y,v> > 0`; the maximizer over all masks is the positive sign pattern
//! of the dual vector `y`, and the ascending-mask stream of remaining
//! profitable columns is generated greedily in O(d) per candidate.
//! Columns parked at their upper bound are tracked explicitly. Entering
//! at-lower columns whose blocking step is the full interval become bound
//! flips (no basis change), which is the bulk of the work for interior
//! points since their witnesses contain about half of all columns.
//!
//! Anti-cycling: pivots use a fixed lowest-variable-index tie-break, and
//! after a run of degenerate pivots the entering rule switches to Bland's
//! (lowest eligible index on both bound sides), which terminates.
//!
//! Artificial variables start as the basis and are dropped once they
//! leave. At termination with positive objective the dual vector is a
//! separating certificate: `<y,b> - h(y)` equals the objective exactly.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::{Decomposition, LpConfig, MembershipResult, SeparationCertificate};
use crate::dim::Dimension;
use crate::edge::{Edge, EdgeSet};
use crate::error::{DspError, Result};
use crate::vector::RationalVector;

pub(super) fn solve(b: &RationalVector, cfg: &LpConfig) -> Result<MembershipResult> {
    Simplex::new(b, cfg).run()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum BasisVar {
    Col(u32),
    Art(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Blocker {
    Flip,
    Row(usize, Destination),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Destination {
    Lower,
    Upper,
}

struct Pricing {
    y: Vec<BigRational>,
    pos_below: Vec<BigRational>,
    scaled: Option<(Vec<i128>, Vec<i128>)>,
}

impl Pricing {
    fn build(y: Vec<BigRational>) -> Self {
        let d = y.len();
        let mut pos_below = Vec::with_capacity(d + 1);
        pos_below.push(BigRational::zero());
        for i in 0..d {
            let mut next = pos_below[i].clone();
            if y[i].is_positive() {
                next += &y[i];
            }
            pos_below.push(next);
        }
        let scaled = scale_to_ints(&y).map(|yi| {
            let mut pb = Vec::with_capacity(d + 1);
            pb.push(0i128);
            for i in 0..d {
                pb.push(pb[i] + yi[i].max(0));
            }
            (yi, pb)
        });
        Pricing {
            y,
            pos_below,
            scaled,
        }
    }

    /// Mask of strictly positive dual coordinates: the unconstrained
    /// maximizer of `<y,v>` (zeros excluded, so also the lowest mask
    /// among maximizers).
    fn pattern(&self) -> u32 {
        let mut m = 0u32;
        for (i, c) in self.y.iter().enumerate() {
            if c.is_positive() {
                m |= 1 << i;
            }
        }
        m
    }

    fn dot(&self, mask: u32) -> BigRational {
        let mut acc = BigRational::zero();
        let mut m = mask;
        while m != 0 {
            acc += &self.y[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        acc
    }

    fn dot_negative(&self, mask: u32) -> bool {
        if let Some((yi, _)) = &self.scaled {
            let mut acc = 0i128;
            let mut m = mask;
            while m != 0 {
                acc += yi[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            acc < 0
        } else {
            self.dot(mask).is_negative()
        }
    }

    /// Smallest mask above `above` whose dual dot is strictly positive.
    fn next_positive_above(&self, above: Option<u32>) -> Option<u32> {
        if let Some((yi, pb)) = &self.scaled {
            greedy_min_mask(yi, pb, above)
        } else {
            greedy_min_mask(&self.y, &self.pos_below, above)
        }
    }
}

/// Scale the dual to integers when the lcm of denominators is small
/// enough for overflow-free i128 pricing; the common parade epochs have
/// integer duals where this always applies.
fn scale_to_ints(y: &[BigRational]) -> Option<Vec<i128>> {
    let mut l = BigInt::one();
    for c in y {
        l = l.lcm(c.denom());
        if l.bits() > 60 {
            return None;
        }
    }
    let mut out = Vec::with_capacity(y.len());
    for c in y {
        let s: BigInt = c.numer() * (&l / c.denom());
        if s.bits() > 90 {
            return None;
        }
        out.push(s.to_i128()?);
    }
    Some(out)
}

/// Greedy search for the minimum mask with a strictly positive subset
/// sum, optionally restricted to masks strictly above `above`. Bits are
/// decided from the most significant down, preferring 0 whenever the
/// maximum completion (`partial + pos_below[k]`) stays positive.
fn greedy_min_mask<T>(y: &[T], pos_below: &[T], above: Option<u32>) -> Option<u32>
where
    T: Clone + Ord + Zero + for<'x> std::ops::AddAssign<&'x T>,
{
    let d = y.len();
    let zero = T::zero();
    match above {
        None => {
            if pos_below[d] <= zero {
                return None;
            }
            let mut partial = T::zero();
            let mut chosen = 0u32;
            for k in (0..d).rev() {
                let mut with0 = partial.clone();
                with0 += &pos_below[k];
                if with0 > zero {
                    continue;
                }
                chosen |= 1 << k;
                partial += &y[k];
            }
            debug_assert!(chosen != 0 && partial > zero);
            Some(chosen)
        }
        Some(m0) => {
            // suffix sums over the bits of m0
            let mut suffix = vec![T::zero(); d + 1];
            for k in (0..d).rev() {
                suffix[k] = suffix[k + 1].clone();
                if m0 >> k & 1 == 1 {
                    suffix[k] += &y[k];
                }
            }
            // branch at the lowest zero bit of m0 that admits a positive
            // completion: agree above k, set bit k, minimize below
            for k in 0..d {
                if m0 >> k & 1 == 1 {
                    continue;
                }
                let mut base = suffix[k + 1].clone();
                base += &y[k];
                let mut reach = base.clone();
                reach += &pos_below[k];
                if reach <= zero {
                    continue;
                }
                let high = m0 & !((1u32 << (k + 1)) - 1);
                let mut chosen = high | (1 << k);
                let mut partial = base;
                for j in (0..k).rev() {
                    let mut with0 = partial.clone();
                    with0 += &pos_below[j];
                    if with0 > zero {
                        continue;
                    }
                    chosen |= 1 << j;
                    partial += &y[j];
                }
                debug_assert!(partial > zero);
                return Some(chosen);
            }
            None
        }
    }
}

struct Simplex<'a> {
    dim: Dimension,
    d: usize,
    b: &'a RationalVector,
    cfg: &'a LpConfig,
    basis: Vec<BasisVar>,
    binv: Vec<Vec<BigRational>>,
    x_b: Vec<BigRational>,
    binv_identity: bool,
    at_upper: Vec<u64>,
    n_upper: u64,
    pricing: Option<Pricing>,
    cursor: Option<u32>,
    bland: bool,
    stalls: u32,
    iters: u64,
    n_flips: u64,
    n_pivots: u64,
    n_walk: u64,
}

impl<'a> Simplex<'a> {
    fn new(b: &'a RationalVector, cfg: &'a LpConfig) -> Self {
        let dim = b.dim();
        let d = dim.usize();
        let basis = (0..d).map(BasisVar::Art).collect();
        let binv = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let x_b = b.coords().to_vec();
        let words = (1u64 << d).div_ceil(64) as usize;
        Simplex {
            dim,
            d,
            b,
            cfg,
            basis,
            binv,
            x_b,
            binv_identity: true,
            at_upper: vec![0u64; words],
            n_upper: 0,
            pricing: None,
            cursor: None,
            bland: false,
            stalls: 0,
            iters: 0,
            n_flips: 0,
            n_pivots: 0,
            n_walk: 0,
        }
    }

    #[inline]
    fn upper_contains(&self, mask: u32) -> bool {
        self.at_upper[(mask / 64) as usize] >> (mask % 64) & 1 == 1
    }

    fn upper_set(&mut self, mask: u32) {
        debug_assert!(!self.upper_contains(mask));
        self.at_upper[(mask / 64) as usize] |= 1u64 << (mask % 64);
        self.n_upper += 1;
    }

    fn upper_clear(&mut self, mask: u32) {
        debug_assert!(self.upper_contains(mask));
        self.at_upper[(mask / 64) as usize] &= !(1u64 << (mask % 64));
        self.n_upper -= 1;
    }

    fn upper_masks(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n_upper as usize);
        for (w, &word) in self.at_upper.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                out.push(w as u32 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    fn objective(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (p, v) in self.basis.iter().enumerate() {
            if matches!(v, BasisVar::Art(_)) {
                acc += &self.x_b[p];
            }
        }
        acc
    }

    fn pricing(&mut self) -> &Pricing {
        if self.pricing.is_none() {
            let mut y = vec![BigRational::zero(); self.d];
            for (p, v) in self.basis.iter().enumerate() {
                if matches!(v, BasisVar::Art(_)) {
                    for j in 0..self.d {
                        y[j] += &self.binv[p][j];
                    }
                }
            }
            self.pricing = Some(Pricing::build(y));
        }
        self.pricing.as_ref().unwrap()
    }

    fn var_index(&self, v: BasisVar) -> u64 {
        match v {
            BasisVar::Col(m) => m as u64,
            BasisVar::Art(r) => (1u64 << self.d) + r as u64,
        }
    }

    /// Entering column and the bound it enters from (`true` = lower).
    fn entering(&mut self) -> Option<(u32, bool)> {
        if self.bland {
            return self.entering_bland();
        }
        // primary: the sign-pattern maximizer
        let pat = self.pricing().pattern();
        if pat != 0 && !self.upper_contains(pat) {
            self.cursor = None;
            return Some((pat, true));
        }
        // stream the remaining profitable at-lower columns in ascending
        // mask order; the cursor persists until the basis changes
        loop {
            let next = {
                let cur = self.cursor;
                self.pricing().next_positive_above(cur)
            };
            match next {
                Some(m) => {
                    self.cursor = Some(m);
                    self.n_walk += 1;
                    if !self.upper_contains(m) {
                        return Some((m, true));
                    }
                }
                None => break,
            }
        }
        // at-upper side: most negative dot, lowest mask on ties
        let uppers = self.upper_masks();
        let pr = self.pricing();
        let mut best: Option<(u32, BigRational)> = None;
        for m in uppers {
            if !pr.dot_negative(m) {
                continue;
            }
            let dot = pr.dot(m);
            match &best {
                Some((_, bd)) if *bd <= dot => {}
                _ => best = Some((m, dot)),
            }
        }
        best.map(|(m, _)| (m, false))
    }

    /// Bland: lowest eligible variable index across both bound sides.
    fn entering_bland(&mut self) -> Option<(u32, bool)> {
        let lower = {
            let mut cur = None;
            loop {
                let next = self.pricing().next_positive_above(cur);
                match next {
                    Some(m) if self.upper_contains(m) => cur = Some(m),
                    other => break other,
                }
            }
        };
        let uppers = self.upper_masks();
        let pr = self.pricing();
        let upper = uppers.into_iter().find(|&m| pr.dot_negative(m));
        match (lower, upper) {
            (Some(l), Some(u)) => {
                if l < u {
                    Some((l, true))
                } else {
                    Some((u, false))
                }
            }
            (Some(l), None) => Some((l, true)),
            (None, Some(u)) => Some((u, false)),
            (None, None) => None,
        }
    }

    /// Direction entries `w = B^{-1} A_e`, sparse.
    fn direction(&self, mask: u32) -> Vec<(usize, BigRational)> {
        if self.binv_identity {
            let mut out = Vec::with_capacity(mask.count_ones() as usize);
            let mut m = mask;
            while m != 0 {
                out.push((m.trailing_zeros() as usize, BigRational::one()));
                m &= m - 1;
            }
            return out;
        }
        let mut out = Vec::with_capacity(self.d);
        for p in 0..self.d {
            let mut acc = BigRational::zero();
            let mut m = mask;
            while m != 0 {
                acc += &self.binv[p][m.trailing_zeros() as usize];
                m &= m - 1;
            }
            if !acc.is_zero() {
                out.push((p, acc));
            }
        }
        out
    }

    fn step(&mut self, mask: u32, from_lower: bool) -> Result<()> {
        let w = self.direction(mask);
        let one = BigRational::one();

        // ratio test; the full step of one is a bound flip
        let mut t = one.clone();
        let mut blocker = Blocker::Flip;
        let mut blocker_idx = mask as u64;
        for (p, wp) in &w {
            let (limit, dest) = if from_lower {
                if wp.is_positive() {
                    (&self.x_b[*p] / wp, Destination::Lower)
                } else if matches!(self.basis[*p], BasisVar::Col(_)) {
                    ((&one - &self.x_b[*p]) / (-wp), Destination::Upper)
                } else {
                    continue;
                }
            } else if wp.is_negative() {
                (&self.x_b[*p] / (-wp), Destination::Lower)
            } else if matches!(self.basis[*p], BasisVar::Col(_)) {
                ((&one - &self.x_b[*p]) / wp, Destination::Upper)
            } else {
                continue;
            };
            let idx = self.var_index(self.basis[*p]);
            if limit < t || (limit == t && idx < blocker_idx) {
                t = limit;
                blocker = Blocker::Row(*p, dest);
                blocker_idx = idx;
            }
        }

        match blocker {
            Blocker::Flip => {
                for (p, wp) in &w {
                    if from_lower {
                        self.x_b[*p] -= wp;
                    } else {
                        self.x_b[*p] += wp;
                    }
                }
                if from_lower {
                    self.upper_set(mask);
                } else {
                    self.upper_clear(mask);
                }
                self.stalls = 0;
                self.n_flips += 1;
            }
            Blocker::Row(p_star, dest) => {
                // move the current point
                for (p, wp) in &w {
                    if *p == p_star {
                        continue;
                    }
                    let delta = &t * wp;
                    if from_lower {
                        self.x_b[*p] -= &delta;
                    } else {
                        self.x_b[*p] += &delta;
                    }
                }
                let leaving = self.basis[p_star];
                if let BasisVar::Col(m) = leaving {
                    if dest == Destination::Upper {
                        self.upper_set(m);
                    }
                }
                if !from_lower {
                    self.upper_clear(mask);
                }
                self.x_b[p_star] = if from_lower { t.clone() } else { &one - &t };
                self.basis[p_star] = BasisVar::Col(mask);

                // eta update of the inverse
                let wp_star = w
                    .iter()
                    .find(|(p, _)| *p == p_star)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| DspError::contract("pivot on zero direction".to_string()))?;
                let pivot_row: Vec<BigRational> = self.binv[p_star]
                    .iter()
                    .map(|v| v / &wp_star)
                    .collect();
                for (p, wp) in &w {
                    if *p == p_star {
                        continue;
                    }
                    for j in 0..self.d {
                        let sub = wp * &pivot_row[j];
                        self.binv[*p][j] -= sub;
                    }
                }
                self.binv[p_star] = pivot_row;
                self.binv_identity = false;
                self.pricing = None;
                self.cursor = None;
                self.n_pivots += 1;

                if t.is_zero() {
                    self.stalls += 1;
                    if self.stalls >= self.cfg.stall_limit {
                        self.bland = true;
                    }
                } else {
                    self.stalls = 0;
                }
            }
        }
        Ok(())
    }

    fn extract(&self) -> Result<Decomposition> {
        let mut integral = EdgeSet::new(self.dim);
        for m in self.upper_masks() {
            integral.insert(Edge::from_mask(m, self.dim)?)?;
        }
        let one = BigRational::one();
        let mut fractional: Vec<(Edge, BigRational)> = Vec::new();
        for (p, v) in self.basis.iter().enumerate() {
            if let BasisVar::Col(m) = v {
                let val = &self.x_b[p];
                debug_assert!(!val.is_negative() && *val <= one);
                if *val == one {
                    integral.insert(Edge::from_mask(*m, self.dim)?)?;
                } else if val.is_positive() {
                    fractional.push((Edge::from_mask(*m, self.dim)?, val.clone()));
                }
            }
        }
        fractional.sort_by_key(|(e, _)| e.mask());
        Ok(Decomposition {
            integral,
            fractional,
        })
    }

    fn certificate(&mut self, obj: BigRational) -> Result<SeparationCertificate> {
        let y = self.pricing().y.clone();
        let lhs: BigRational = y
            .iter()
            .zip(self.b.coords())
            .map(|(yi, bi)| yi * bi)
            .sum();
        let rhs = &lhs - &obj;
        Ok(SeparationCertificate {
            c: RationalVector::new(self.dim, y)?,
            lhs,
            rhs,
        })
    }

    fn run(mut self) -> Result<MembershipResult> {
        loop {
            let obj = self.objective();
            if obj.is_zero() {
                eprintln!("LP stats: flips={} pivots={} walk={} bland={}", self.n_flips, self.n_pivots, self.n_walk, self.bland);
                return Ok(MembershipResult::Inside(self.extract()?));
            }
            self.iters += 1;
            if self.iters > self.cfg.pivot_cap {
                return Err(DspError::resource(format!(
                    "membership LP exceeded {} iterations",
                    self.cfg.pivot_cap
                )));
            }
            match self.entering() {
                Some((mask, from_lower)) => self.step(mask, from_lower)?,
                None => {
                    eprintln!("LP stats: flips={} pivots={} walk={} bland={}", self.n_flips, self.n_pivots, self.n_walk, self.bland);
                    return Ok(MembershipResult::Outside(self.certificate(obj)?));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_min_mask_base() {
        // y = (1, 1): lowest positive-dot mask is {0}
        let y = vec![1i128, 1];
        let pb = vec![0i128, 1, 2];
        assert_eq!(greedy_min_mask(&y, &pb, None), Some(0b01));
        assert_eq!(greedy_min_mask(&y, &pb, Some(0b01)), Some(0b10));
        assert_eq!(greedy_min_mask(&y, &pb, Some(0b10)), Some(0b11));
        assert_eq!(greedy_min_mask(&y, &pb, Some(0b11)), None);
    }

    #[test]
    fn greedy_min_mask_mixed_signs() {
        let y = vec![-1i128, 2, -5];
        let pb = vec![0i128, 0, 2, 2];
        assert_eq!(greedy_min_mask(&y, &pb, None), Some(0b010));
        // above 0b010: 0b011 has sum 1 > 0
        assert_eq!(greedy_min_mask(&y, &pb, Some(0b010)), Some(0b011));
        assert_eq!(greedy_min_mask(&y, &pb, Some(0b011)), None);
        let yneg = vec![-1i128, -1];
        let pbn = vec![0i128, 0, 0];
        assert_eq!(greedy_min_mask(&yneg, &pbn, None), None);
    }

    #[test]
    fn greedy_exhaustive_cross_check() {
        // against literal enumeration for several duals at d = 5
        let duals: Vec<Vec<i128>> = vec![
            vec![3, -1, 0, 2, -2],
            vec![-1, -1, 5, -3, 1],
            vec![0, 0, 0, -1, 1],
            vec![1, 1, 1, 1, 1],
            vec![-2, -2, -2, -2, -2],
        ];
        for y in duals {
            let d = y.len();
            let mut pb = vec![0i128; d + 1];
            for i in 0..d {
                pb[i + 1] = pb[i] + y[i].max(0);
            }
            let dot = |m: u32| -> i128 {
                (0..d).filter(|&i| m >> i & 1 == 1).map(|i| y[i]).sum()
            };
            let mut prev: Option<u32> = None;
            loop {
                let expect = ((prev.map_or(1, |p| p + 1))..(1u32 << d)).find(|&m| dot(m) > 0);
                let got = greedy_min_mask(&y, &pb, prev);
                assert_eq!(got, expect, "y={y:?} above={prev:?}");
                match got {
                    Some(m) => prev = Some(m),
                    None => break,
                }
            }
        }
    }
}
