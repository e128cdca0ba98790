//! Constructive realization: turn an integer point whose shifted copy
//! lies in the polytope into an explicit hypergraph, by replaying small
//! degree-editing moves on top of an LP decomposition.
//!
//! The moves:
//! - `add_good_pair(h, i)`: insert two fresh edges `f, g` with
//!   `f + g = 1 + e_i`, raising every degree by one and degree `i` by
//!   two. Such a pair exists whenever degree `i` is below `2^{d-2}`
//!   because the edges containing `i` split into `2^{d-2}` such pairs.
//! - `raise_all_step(h)`: raise every degree by one (shrink a minimal
//!   edge by one vertex, then add the matching good pair).
//! - `swap_step(h, from, to)`: move one unit of degree between vertices.
//! - `trim_step(h)`: lower the degree sum by exactly one (clear the
//!   highest bit of a minimal edge).


use crate::edge::{degree_sequence, Edge, EdgeSet};
use crate::error::{DspError, Result};
use crate::vector::{reflect, DegreeVector};
use crate::zonotope::{
    decompose_shifted, integer_decomposition, membership, Decomposition, LpConfig,
    MembershipResult, SeparationCertificate, ShiftedMembership,
};

/// One replayable move; vertex indices are 0-based here and 1-based on
/// the wire.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TraceStep {
    GoodPair { vertex: usize },
    RaiseAll,
    Swap { from: usize, to: usize },
    Trim,
}

/// Counters of the mixed-sign pipeline: the degree-sum residue mod
/// `d+1`, the derived trim/fraction count `a`, and the number of
/// good-pair applications.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TraceCounters {
    pub residue: i64,
    pub a: i64,
    pub good_pair_steps: i64,
}

/// Replayable log: starting hypergraph (the integral part of the LP
/// decomposition of the shifted point), the move list, and whether the
/// final hypergraph is the complement of the replayed one.
#[derive(Clone, Debug)]
pub struct RealizationTrace {
    pub base: Decomposition,
    pub steps: Vec<TraceStep>,
    pub counters: Option<TraceCounters>,
    pub complemented: bool,
}

impl RealizationTrace {
    /// Re-executes the move list from the base hypergraph.
    pub fn replay(&self) -> Result<EdgeSet> {
        let mut h = self.base.integral.clone();
        for step in &self.steps {
            match *step {
                TraceStep::GoodPair { vertex } => add_good_pair(&mut h, vertex)?,
                TraceStep::RaiseAll => raise_all_step(&mut h)?,
                TraceStep::Swap { from, to } => swap_step(&mut h, from, to)?,
                TraceStep::Trim => trim_step(&mut h)?,
            }
        }
        if self.complemented {
            Ok(h.complement())
        } else {
            Ok(h)
        }
    }

    pub fn count_good_pairs(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, TraceStep::GoodPair { .. }))
            .count()
    }

    pub fn count_raise_all(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, TraceStep::RaiseAll))
            .count()
    }

    /// Largest per-vertex good-pair count (round-robin bound check).
    pub fn max_good_pairs_per_vertex(&self, d: usize) -> usize {
        let mut counts = vec![0usize; d];
        for s in &self.steps {
            if let TraceStep::GoodPair { vertex } = s {
                counts[*vertex] += 1;
            }
        }
        counts.into_iter().max().unwrap_or(0)
    }
}

/// Disjoint cover of the coordinates: `low` holds indices with
/// `b_i <= 2^{d-2}` (ties included), `high` the strict rest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexPartition {
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

impl IndexPartition {
    /// Partition induced by the coordinate values of `b`.
    pub fn of(b: &DegreeVector) -> Self {
        let dim = b.dim();
        let mut low = Vec::new();
        let mut high = Vec::new();
        for i in 0..dim.usize() {
            if dim.le_half_center(b.get(i)) {
                low.push(i);
            } else {
                high.push(i);
            }
        }
        IndexPartition { low, high }
    }

    fn validate_for(&self, b: &DegreeVector) -> Result<()> {
        let dim = b.dim();
        let d = dim.usize();
        let mut seen = vec![false; d];
        for &i in self.low.iter().chain(&self.high) {
            if i >= d || seen[i] {
                return Err(DspError::invalid("partition does not cover 1..=d exactly"));
            }
            seen[i] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(DspError::invalid("partition does not cover 1..=d exactly"));
        }
        for &i in &self.low {
            if !dim.le_half_center(b.get(i)) {
                return Err(DspError::invalid(format!(
                    "low index {i} has coordinate above 2^(d-2)"
                )));
            }
        }
        for &j in &self.high {
            if dim.le_half_center(b.get(j)) {
                return Err(DspError::invalid(format!(
                    "high index {j} has coordinate not above 2^(d-2)"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RealizePath {
    Interior,
    InteriorReflected,
    Mixed,
    MixedReflected,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UndecidedReason {
    /// A coordinate of the shifted point is negative.
    ShiftNegative(RealizePath),
    /// The shifted point lies outside the polytope.
    ShiftOutside(RealizePath),
}

#[derive(Clone, Debug)]
pub enum RealizeOutcome {
    Realized {
        witness: EdgeSet,
        trace: RealizationTrace,
    },
    Undecided {
        reason: UndecidedReason,
    },
    NotInZonotope {
        certificate: SeparationCertificate,
    },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RealizeConfig {
    pub lp: LpConfig,
}

/// Inserts a fresh pair `f, g` with `f + g = 1 + e_vertex`; requires
/// `degree(vertex) < 2^{d-2}` so an unused pair exists.
pub fn add_good_pair(h: &mut EdgeSet, vertex: usize) -> Result<()> {
    let dim = h.dim();
    let d = dim.usize();
    if vertex >= d {
        return Err(DspError::contract(format!("vertex {vertex} out of range")));
    }
    if d < 2 {
        return Err(DspError::contract(
            "good pairs need at least two vertices".to_string(),
        ));
    }
    if !dim.lt_half_center(h.degree(vertex)) {
        return Err(DspError::contract(format!(
            "good-pair precondition violated: degree {} of vertex {} is not below 2^(d-2)",
            h.degree(vertex),
            vertex + 1
        )));
    }
    let bit = 1u32 << vertex;
    let partner_xor = dim.full_mask() ^ bit;
    // scan candidates containing the vertex in increasing mask order
    let mut f = bit;
    loop {
        debug_assert!(f & bit != 0);
        let g = f ^ partner_xor;
        if !h.contains_mask(f) && !h.contains_mask(g) {
            h.insert(Edge::from_mask(f, dim)?)?;
            h.insert(Edge::from_mask(g, dim)?)?;
            return Ok(());
        }
        // next mask containing `vertex`
        let rest = f & !bit;
        let next_rest = next_submask_value(rest, dim.full_mask() & !bit);
        match next_rest {
            Some(r) => f = r | bit,
            None => {
                return Err(DspError::contract(
                    "no free good pair despite degree precondition".to_string(),
                ))
            }
        }
    }
}

/// Next value after `cur` among submasks of `universe` in increasing
/// numeric order, or None when exhausted.
fn next_submask_value(cur: u32, universe: u32) -> Option<u32> {
    // standard submask increment: propagate a carry through universe bits
    let next = (cur | !universe).wrapping_add(1) & universe;
    if next == 0 {
        None
    } else {
        Some(next)
    }
}

/// Raises every degree by one: for an empty hypergraph inserts the full
/// edge; otherwise shrinks a minimal edge by its lowest vertex and adds
/// the matching good pair.
pub fn raise_all_step(h: &mut EdgeSet) -> Result<()> {
    let dim = h.dim();
    for i in 0..dim.usize() {
        if !dim.lt_half_center(h.degree(i)) {
            return Err(DspError::contract(format!(
                "raise-all precondition violated: degree of vertex {} not below 2^(d-2)",
                i + 1
            )));
        }
    }
    if h.is_empty() {
        h.insert(Edge::from_mask(dim.full_mask(), dim)?)?;
        return Ok(());
    }
    let u = h.min_popcount_edge().expect("nonempty");
    let i = u.mask().trailing_zeros() as usize;
    h.remove(u);
    let shrunk = u.mask() & (u.mask() - 1);
    if shrunk != 0 {
        // popcount minimality makes the shrunk edge fresh
        if h.contains_mask(shrunk) {
            return Err(DspError::contract(
                "shrunk minimal edge already present".to_string(),
            ));
        }
        h.insert(Edge::from_mask(shrunk, dim)?)?;
    }
    add_good_pair(h, i)
}

/// Moves one unit of degree from `from` to `to`; requires
/// `degree(from) > degree(to)`, which guarantees an edge containing
/// `from`, missing `to`, whose swapped version is fresh.
pub fn swap_step(h: &mut EdgeSet, from: usize, to: usize) -> Result<()> {
    let dim = h.dim();
    let d = dim.usize();
    if from >= d || to >= d || from == to {
        return Err(DspError::contract("bad swap indices".to_string()));
    }
    if h.degree(from) <= h.degree(to) {
        return Err(DspError::contract(format!(
            "swap precondition violated: degree({}) = {} <= degree({}) = {}",
            from + 1,
            h.degree(from),
            to + 1,
            h.degree(to)
        )));
    }
    let fbit = 1u32 << from;
    let tbit = 1u32 << to;
    let found = h.iter().find_map(|e| {
        let m = e.mask();
        if m & fbit != 0 && m & tbit == 0 {
            let swapped = (m & !fbit) | tbit;
            if !h.contains_mask(swapped) {
                return Some((e, swapped));
            }
        }
        None
    });
    match found {
        Some((e, swapped)) => {
            h.remove(e);
            h.insert(Edge::from_mask(swapped, dim)?)?;
            Ok(())
        }
        None => Err(DspError::contract(
            "no swappable edge despite degree gap".to_string(),
        )),
    }
}

/// Lowers the degree sum by exactly one: clears the highest set bit of a
/// minimal edge (deleting it if it was a singleton).
pub fn trim_step(h: &mut EdgeSet) -> Result<()> {
    let dim = h.dim();
    let u = h
        .min_popcount_edge()
        .ok_or_else(|| DspError::contract("trim on empty hypergraph".to_string()))?;
    let hi = 31 - u.mask().leading_zeros();
    let shrunk = u.mask() & !(1u32 << hi);
    h.remove(u);
    if shrunk != 0 {
        if h.contains_mask(shrunk) {
            return Err(DspError::contract(
                "trimmed minimal edge already present".to_string(),
            ));
        }
        h.insert(Edge::from_mask(shrunk, dim)?)?;
    }
    Ok(())
}

/// Repeated unit swaps from surplus high-side coordinates to deficient
/// low-side ones until the degree sequence equals `b` exactly.
///
/// Preconditions (checked): degrees on `low` at most `b`, on `high` at
/// least `b`, equal sums, and every low target at most every high target.
pub fn transport(
    h: &mut EdgeSet,
    b: &DegreeVector,
    part: &IndexPartition,
    steps: &mut Vec<TraceStep>,
) -> Result<()> {
    let q = degree_sequence(h);
    for &i in &part.low {
        if q.get(i) > b.get(i) {
            return Err(DspError::contract(format!(
                "transport precondition violated: degree {} above target {} at low index {}",
                q.get(i),
                b.get(i),
                i + 1
            )));
        }
    }
    for &j in &part.high {
        if q.get(j) < b.get(j) {
            return Err(DspError::contract(format!(
                "transport precondition violated: degree {} below target {} at high index {}",
                q.get(j),
                b.get(j),
                j + 1
            )));
        }
    }
    if q.sum() != b.sum() {
        return Err(DspError::contract(format!(
            "transport precondition violated: degree sum {} differs from target {}",
            q.sum(),
            b.sum()
        )));
    }
    for &i in &part.low {
        for &j in &part.high {
            if b.get(i) > b.get(j) {
                return Err(DspError::contract(format!(
                    "transport precondition violated: low target b[{}] exceeds high target b[{}]",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    loop {
        let surplus = part.high.iter().copied().find(|&j| h.degree(j) > b.get(j));
        let deficit = part.low.iter().copied().find(|&i| h.degree(i) < b.get(i));
        match (surplus, deficit) {
            (Some(j), Some(i)) => {
                swap_step(h, j, i)?;
                steps.push(TraceStep::Swap { from: j, to: i });
            }
            (None, None) => return Ok(()),
            _ => {
                return Err(DspError::contract(
                    "transport ran out of matching surplus/deficit".to_string(),
                ))
            }
        }
    }
}

/// Interior pipeline: requires every `b_i <= 2^{d-2}`. Tests whether
/// `b - d^2*1` is in the polytope; on success starts from the integral
/// part `P`, applies `w_i` good pairs at each vertex, then raise-all
/// steps up to the shift.
pub fn realize_interior(b: &DegreeVector, cfg: &RealizeConfig) -> Result<RealizeOutcome> {
    realize_interior_inner(b, cfg, RealizePath::Interior)
}

fn realize_interior_inner(
    b: &DegreeVector,
    cfg: &RealizeConfig,
    path: RealizePath,
) -> Result<RealizeOutcome> {
    let dim = b.dim();
    let d = dim.usize();
    for i in 0..d {
        if !dim.le_half_center(b.get(i)) {
            return Err(DspError::invalid(format!(
                "interior pipeline requires b[{}] <= 2^(d-2)",
                i + 1
            )));
        }
    }
    let dd = (d * d) as i64;
    let shift = vec![dd; d];
    let dec = match decompose_shifted(b, &shift, &cfg.lp)? {
        ShiftedMembership::Rejected { .. } => {
            return Ok(RealizeOutcome::Undecided {
                reason: UndecidedReason::ShiftNegative(path),
            })
        }
        ShiftedMembership::Decided(MembershipResult::Outside(_)) => {
            return Ok(RealizeOutcome::Undecided {
                reason: UndecidedReason::ShiftOutside(path),
            })
        }
        ShiftedMembership::Decided(MembershipResult::Inside(dec)) => dec,
    };

    let shifted = DegreeVector::new(dim, b.coords().iter().map(|&c| c - dd).collect())?;
    let (p, w) = integer_decomposition(&dec, &shifted)?;
    let sum_w: i64 = w.iter().sum();
    if sum_w > dd {
        return Err(DspError::contract(format!(
            "fractional remainder sum {sum_w} exceeds d^2 = {dd}"
        )));
    }

    let mut h = p;
    let mut steps = Vec::new();
    let check_below_targets = |h: &EdgeSet| -> Result<()> {
        for k in 0..d {
            if h.degree(k) >= b.get(k) {
                return Err(DspError::contract(format!(
                    "interior invariant violated: degree {} of vertex {} reached target {}",
                    h.degree(k),
                    k + 1,
                    b.get(k)
                )));
            }
        }
        Ok(())
    };
    for (i, &wi) in w.iter().enumerate() {
        for _ in 0..wi {
            check_below_targets(&h)?;
            add_good_pair(&mut h, i)?;
            steps.push(TraceStep::GoodPair { vertex: i });
        }
    }
    for _ in 0..(dd - sum_w) {
        check_below_targets(&h)?;
        raise_all_step(&mut h)?;
        steps.push(TraceStep::RaiseAll);
    }

    finish(h, steps, dec, None, false, b)
}

/// Mixed-sign pipeline for a partition with `|low| >= |high| > 0`:
/// shifts low coordinates down and high ones up by `(d+1)^2`, trims the
/// integral part to fix the degree sum mod `d+1`, round-robins good
/// pairs over the low side, then transports to `b`.
pub fn realize_mixed(
    b: &DegreeVector,
    part: &IndexPartition,
    cfg: &RealizeConfig,
) -> Result<RealizeOutcome> {
    realize_mixed_inner(b, part, cfg, RealizePath::Mixed)
}

fn realize_mixed_inner(
    b: &DegreeVector,
    part: &IndexPartition,
    cfg: &RealizeConfig,
    path: RealizePath,
) -> Result<RealizeOutcome> {
    let dim = b.dim();
    let d = dim.usize();
    part.validate_for(b)?;
    if part.low.len() < part.high.len() || part.high.is_empty() {
        return Err(DspError::invalid(
            "mixed pipeline requires |low| >= |high| > 0".to_string(),
        ));
    }

    let dp1 = d as i64 + 1;
    let shift_unit = dp1 * dp1;
    let mut shift = vec![0i64; d];
    for &i in &part.low {
        shift[i] = shift_unit;
    }
    for &j in &part.high {
        shift[j] = -shift_unit;
    }

    let dec = match decompose_shifted(b, &shift, &cfg.lp)? {
        ShiftedMembership::Rejected { .. } => {
            return Ok(RealizeOutcome::Undecided {
                reason: UndecidedReason::ShiftNegative(path),
            })
        }
        ShiftedMembership::Decided(MembershipResult::Outside(_)) => {
            return Ok(RealizeOutcome::Undecided {
                reason: UndecidedReason::ShiftOutside(path),
            })
        }
        ShiftedMembership::Decided(MembershipResult::Inside(dec)) => dec,
    };

    let shifted = DegreeVector::new(
        dim,
        (0..d).map(|i| b.get(i) - shift[i]).collect(),
    )?;
    let (p, w) = integer_decomposition(&dec, &shifted)?;
    for (i, &wi) in w.iter().enumerate() {
        if wi > d as i64 - 1 {
            return Err(DspError::contract(format!(
                "fractional remainder w[{}] = {} exceeds d - 1",
                i + 1,
                wi
            )));
        }
    }

    let mut h = p;
    let mut steps = Vec::new();

    // fix the degree sum residue mod d+1 by trims
    let residue = b.sum().rem_euclid(dp1);
    let trims = (h.degree_sum() - residue).rem_euclid(dp1);
    for _ in 0..trims {
        trim_step(&mut h)?;
        steps.push(TraceStep::Trim);
    }

    let sum_w: i64 = w.iter().sum();
    let total = trims + sum_w;
    if total % dp1 != 0 {
        return Err(DspError::contract(format!(
            "trimmed remainder {total} not divisible by d+1 = {dp1}"
        )));
    }
    let a = total / dp1;
    let imbalance = part.low.len() as i64 - part.high.len() as i64;
    let good_pair_steps = a + dp1 * imbalance;
    if good_pair_steps < 0 {
        return Err(DspError::contract(format!(
            "negative good-pair budget {good_pair_steps}"
        )));
    }

    // round-robin over the low side in increasing vertex order
    let mut low_sorted = part.low.clone();
    low_sorted.sort_unstable();
    for k in 0..good_pair_steps {
        let vertex = low_sorted[(k % low_sorted.len() as i64) as usize];
        if !dim.lt_half_center(h.degree(vertex)) {
            return Err(DspError::contract(format!(
                "good-pair target {} at vertex {} not below 2^(d-2) (step {})",
                h.degree(vertex),
                vertex + 1,
                k
            )));
        }
        add_good_pair(&mut h, vertex)?;
        steps.push(TraceStep::GoodPair { vertex });
    }

    // the pipeline must now have matched the degree sum and bracketed b
    if h.degree_sum() != b.sum() {
        return Err(DspError::contract(format!(
            "degree sum {} does not match target {} after good pairs",
            h.degree_sum(),
            b.sum()
        )));
    }
    for &i in &part.low {
        if h.degree(i) > b.get(i) {
            return Err(DspError::contract(format!(
                "low coordinate {} overshot target before transport",
                i + 1
            )));
        }
    }
    for &j in &part.high {
        if h.degree(j) < b.get(j) {
            return Err(DspError::contract(format!(
                "high coordinate {} undershot target before transport",
                j + 1
            )));
        }
    }

    transport(&mut h, b, part, &mut steps)?;

    let counters = TraceCounters {
        residue,
        a,
        good_pair_steps,
    };
    finish(h, steps, dec, Some(counters), false, b)
}

fn finish(
    h: EdgeSet,
    steps: Vec<TraceStep>,
    base: Decomposition,
    counters: Option<TraceCounters>,
    complemented: bool,
    b: &DegreeVector,
) -> Result<RealizeOutcome> {
    let witness = if complemented { h.complement() } else { h };
    if degree_sequence(&witness) != *b {
        return Err(DspError::contract(format!(
            "witness degrees {} do not match target {}",
            degree_sequence(&witness),
            b
        )));
    }
    Ok(RealizeOutcome::Realized {
        witness,
        trace: RealizationTrace {
            base,
            steps,
            counters,
            complemented,
        },
    })
}

/// Dispatcher. Routes by the sign pattern of `b` around the center
/// `2^{d-2}*1`: all-low goes through the interior pipeline, all-high
/// through its reflection, mixed points through the mixed pipeline
/// (reflected when the low side is smaller). When the chosen pipeline
/// cannot apply, membership of `b` itself distinguishes an honest
/// `Undecided` (inside, no construction) from `NotInZonotope`.
pub fn realize(b: &DegreeVector, cfg: &RealizeConfig) -> Result<RealizeOutcome> {
    let dim = b.dim();

    // coordinates beyond the maximum degree can never be inside; let the
    // LP certify that rather than inventing a shortcut
    if !b.within_box() {
        return match membership(&b.to_rational(), &cfg.lp)? {
            MembershipResult::Outside(certificate) => {
                Ok(RealizeOutcome::NotInZonotope { certificate })
            }
            MembershipResult::Inside(_) => Err(DspError::contract(
                "point beyond the coordinate cap classified inside".to_string(),
            )),
        };
    }

    let part = IndexPartition::of(b);
    let outcome = if part.high.is_empty() {
        realize_interior_inner(b, cfg, RealizePath::Interior)?
    } else if b.coords().iter().all(|&c| dim.ge_half_center(c)) {
        // all coordinates at or above the center: realize the reflection
        // and complement the witness
        let refl = reflect(b)?;
        match realize_interior_inner(&refl, cfg, RealizePath::InteriorReflected)? {
            RealizeOutcome::Realized { witness, trace } => {
                let flipped = RealizationTrace {
                    complemented: true,
                    ..trace
                };
                let complemented = witness.complement();
                if degree_sequence(&complemented) != *b {
                    return Err(DspError::contract(
                        "complemented witness does not match target".to_string(),
                    ));
                }
                RealizeOutcome::Realized {
                    witness: complemented,
                    trace: flipped,
                }
            }
            other => other,
        }
    } else if part.low.len() >= part.high.len() {
        realize_mixed_inner(b, &part, cfg, RealizePath::Mixed)?
    } else {
        // mirror case: reflect, partition flips sides, then complement
        let refl = reflect(b)?;
        let rpart = IndexPartition::of(&refl);
        match realize_mixed_inner(&refl, &rpart, cfg, RealizePath::MixedReflected)? {
            RealizeOutcome::Realized { witness, trace } => {
                let flipped = RealizationTrace {
                    complemented: true,
                    ..trace
                };
                let complemented = witness.complement();
                if degree_sequence(&complemented) != *b {
                    return Err(DspError::contract(
                        "complemented witness does not match target".to_string(),
                    ));
                }
                RealizeOutcome::Realized {
                    witness: complemented,
                    trace: flipped,
                }
            }
            other => other,
        }
    };

    match outcome {
        RealizeOutcome::Undecided { reason } => {
            // distinguish "inside but no construction" from "outside"
            match membership(&b.to_rational(), &cfg.lp)? {
                MembershipResult::Outside(certificate) => {
                    Ok(RealizeOutcome::NotInZonotope { certificate })
                }
                MembershipResult::Inside(_) => Ok(RealizeOutcome::Undecided { reason }),
            }
        }
        done => Ok(done),
    }
}

/// Full decision: the constructive dispatcher first, then the DP oracle
/// as an opt-in fallback for points the pipelines leave undecided.
#[derive(Clone, Debug)]
pub enum Decision {
    Realizable {
        witness: EdgeSet,
        trace: Option<RealizationTrace>,
    },
    NotRealizable {
        certificate: Option<SeparationCertificate>,
    },
    Undecided {
        reason: UndecidedReason,
    },
}

pub fn decide_with_oracle(
    b: &DegreeVector,
    cfg: &RealizeConfig,
    oracle_caps: Option<&crate::oracle::OracleCaps>,
) -> Result<Decision> {
    match realize(b, cfg)? {
        RealizeOutcome::Realized { witness, trace } => Ok(Decision::Realizable {
            witness,
            trace: Some(trace),
        }),
        RealizeOutcome::NotInZonotope { certificate } => Ok(Decision::NotRealizable {
            certificate: Some(certificate),
        }),
        RealizeOutcome::Undecided { reason } => {
            if let Some(caps) = oracle_caps {
                match crate::oracle::is_realizable(b, caps)? {
                    Some(witness) => Ok(Decision::Realizable {
                        witness,
                        trace: None,
                    }),
                    None => Ok(Decision::NotRealizable { certificate: None }),
                }
            } else {
                Ok(Decision::Undecided { reason })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dim::Dimension;
    use crate::rng::SplitMix64;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn dv(d: u32, c: &[i64]) -> DegreeVector {
        DegreeVector::new(dim(d), c.to_vec()).unwrap()
    }

    fn edges(h: &EdgeSet) -> Vec<u32> {
        h.iter().map(|e| e.mask()).collect()
    }

    #[test]
    fn good_pair_first_free_pair() {
        // d=3, vertex 1: first candidate pair is {001, 111}
        let mut h = EdgeSet::new(dim(3));
        add_good_pair(&mut h, 0).unwrap();
        assert_eq!(edges(&h), vec![0b001, 0b111]);
        assert_eq!(h.degree_slice(), &[2, 1, 1]);

        // d=2, vertex 2: the only pair is {10, 11}
        let mut h = EdgeSet::new(dim(2));
        add_good_pair(&mut h, 1).unwrap();
        assert_eq!(edges(&h), vec![0b10, 0b11]);
        assert_eq!(h.degree_slice(), &[1, 2]);
    }

    #[test]
    fn good_pair_degree_delta() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..50 {
            let d = 3 + rng.next_below(8) as u32;
            let mut h = random_set(d, &mut rng, 30);
            let i = rng.next_below(d as u64) as usize;
            if !dim(d).lt_half_center(h.degree(i)) {
                continue;
            }
            let before: Vec<i64> = h.degree_slice().to_vec();
            let len_before = h.len();
            add_good_pair(&mut h, i).unwrap();
            assert_eq!(h.len(), len_before + 2);
            for k in 0..d as usize {
                let expect = before[k] + 1 + i64::from(k == i);
                assert_eq!(h.degree(k), expect);
            }
        }
    }

    #[test]
    fn good_pair_contract_error() {
        // d=2 threshold 2^{d-2} = 1: a vertex of degree 1 is not eligible
        let mut h = EdgeSet::from_masks(dim(2), [0b01]).unwrap();
        assert!(matches!(
            add_good_pair(&mut h, 0),
            Err(DspError::Contract(_))
        ));
    }

    #[test]
    fn raise_all_examples() {
        let mut h = EdgeSet::new(dim(3));
        raise_all_step(&mut h).unwrap();
        assert_eq!(edges(&h), vec![0b111]);
        assert_eq!(h.degree_slice(), &[1, 1, 1]);

        raise_all_step(&mut h).unwrap();
        assert_eq!(h.degree_slice(), &[2, 2, 2]);
    }

    #[test]
    fn swap_examples() {
        // single edge {1} moves to {2}
        let mut h = EdgeSet::from_masks(dim(2), [0b01]).unwrap();
        swap_step(&mut h, 0, 1).unwrap();
        assert_eq!(edges(&h), vec![0b10]);

        // edges {1},{1,2}: only {1} is swappable
        let mut h = EdgeSet::from_masks(dim(2), [0b01, 0b11]).unwrap();
        assert_eq!(h.degree_slice(), &[2, 1]);
        swap_step(&mut h, 0, 1).unwrap();
        assert_eq!(edges(&h), vec![0b10, 0b11]);
        assert_eq!(h.degree_slice(), &[1, 2]);

        let mut h = EdgeSet::from_masks(dim(2), [0b01]).unwrap();
        assert!(matches!(
            swap_step(&mut h, 1, 0),
            Err(DspError::Contract(_))
        ));
    }

    #[test]
    fn trim_examples() {
        // {1,2,3}: highest bit is vertex 3
        let mut h = EdgeSet::from_masks(dim(3), [0b111]).unwrap();
        trim_step(&mut h).unwrap();
        assert_eq!(edges(&h), vec![0b011]);
        assert_eq!(h.degree_slice(), &[1, 1, 0]);

        // singleton is deleted
        let mut h = EdgeSet::from_masks(dim(2), [0b10]).unwrap();
        trim_step(&mut h).unwrap();
        assert!(h.is_empty());

        let mut h = EdgeSet::new(dim(2));
        assert!(matches!(trim_step(&mut h), Err(DspError::Contract(_))));
    }

    #[test]
    fn transport_cases() {
        // already equal: no swaps
        let mut h = EdgeSet::from_masks(dim(2), [0b01]).unwrap();
        let part = IndexPartition {
            low: vec![0],
            high: vec![1],
        };
        let mut steps = Vec::new();
        // q = (1,0), b = (1,0): but (1,0): low side has b=1, high b=0
        // violates b_low <= b_high; use matching values instead
        let b = dv(2, &[1, 0]);
        assert!(transport(&mut h, &b, &part, &mut steps).is_err());

        // precondition violation: b_low > b_high
        let mut h = EdgeSet::from_masks(dim(2), [0b01, 0b11]).unwrap();
        let b = dv(2, &[2, 1]);
        let part = IndexPartition {
            low: vec![0],
            high: vec![1],
        };
        let mut steps = Vec::new();
        assert!(transport(&mut h, &b, &part, &mut steps).is_err());

        // low target above a high target is rejected even when the swap
        // sequence would happen to exist
        let mut h = EdgeSet::from_masks(dim(3), [0b101, 0b110]).unwrap();
        assert_eq!(h.degree_slice(), &[1, 1, 2]);
        let b = dv(3, &[1, 2, 1]);
        let part = IndexPartition {
            low: vec![0, 1],
            high: vec![2],
        };
        let mut steps = Vec::new();
        let err = transport(&mut h, &b, &part, &mut steps).unwrap_err();
        assert!(err.to_string().contains("low target"), "{err}");

        // d=3: q=(0,1,2) to b=(1,1,1) with one swap from vertex 3 to 1
        let mut h = EdgeSet::from_masks(dim(3), [0b100, 0b110]).unwrap();
        assert_eq!(h.degree_slice(), &[0, 1, 2]);
        let b = dv(3, &[1, 1, 1]);
        let part = IndexPartition {
            low: vec![0, 1],
            high: vec![2],
        };
        let mut steps = Vec::new();
        transport(&mut h, &b, &part, &mut steps).unwrap();
        assert_eq!(degree_sequence(&h), b);
        assert_eq!(steps.len(), 1);
        assert!(matches!(steps[0], TraceStep::Swap { from: 2, to: 0 }));
    }

    fn random_set(d: u32, rng: &mut SplitMix64, density_pct: u64) -> EdgeSet {
        let mut h = EdgeSet::new(dim(d));
        for m in 1..=dim(d).mask_count() as u32 {
            if rng.next_below(100) < density_pct {
                h.insert(Edge::from_mask(m, dim(d)).unwrap()).unwrap();
            }
        }
        h
    }

    #[test]
    fn interior_d2_always_undecided() {
        let cfg = RealizeConfig::default();
        for c0 in 0..=1i64 {
            for c1 in 0..=1i64 {
                let out = realize_interior(&dv(2, &[c0, c1]), &cfg).unwrap();
                assert!(matches!(
                    out,
                    RealizeOutcome::Undecided {
                        reason: UndecidedReason::ShiftNegative(_)
                    }
                ));
            }
        }
    }

    #[test]
    fn interior_center_d10() {
        let cfg = RealizeConfig::default();
        let b = dv(10, &[256; 10]);
        match realize_interior(&b, &cfg).unwrap() {
            RealizeOutcome::Realized { witness, trace } => {
                assert_eq!(degree_sequence(&witness), b);
                // step counts: sum(w) good pairs and d^2 - sum(w) raises
                let gp = trace.count_good_pairs();
                let ra = trace.count_raise_all();
                assert_eq!(gp + ra, 100);
                assert_eq!(trace.replay().unwrap(), witness);
            }
            other => panic!("expected Realized, got {other:?}"),
        }
    }

    #[test]
    fn dispatcher_center_and_outside() {
        let cfg = RealizeConfig::default();
        let b = dv(10, &[256; 10]);
        match realize(&b, &cfg).unwrap() {
            RealizeOutcome::Realized { witness, .. } => {
                assert_eq!(degree_sequence(&witness), b);
            }
            other => panic!("expected Realized, got {other:?}"),
        }

        let b = dv(2, &[3, 3]);
        match realize(&b, &cfg).unwrap() {
            RealizeOutcome::NotInZonotope { certificate } => {
                assert_eq!(
                    certificate.c.coords(),
                    crate::vector::RationalVector::from_integers(dim(2), &[1, 1])
                        .unwrap()
                        .coords()
                );
                assert!(certificate.verify(&b.to_rational()));
            }
            other => panic!("expected NotInZonotope, got {other:?}"),
        }
    }

    #[test]
    fn mixed_d12_realizes() {
        let cfg = RealizeConfig::default();
        let center = 1i64 << 10;
        let mut coords = vec![center - 10; 6];
        coords.extend(vec![center + 10; 6]);
        let b = dv(12, &coords);
        let part = IndexPartition::of(&b);
        assert_eq!(part.low.len(), 6);
        match realize_mixed(&b, &part, &cfg).unwrap() {
            RealizeOutcome::Realized { witness, trace } => {
                assert_eq!(degree_sequence(&witness), b);
                let counters = trace.counters.unwrap();
                assert!(counters.good_pair_steps >= 0);
                let per = trace.max_good_pairs_per_vertex(12);
                let bound = (counters.good_pair_steps as usize).div_ceil(part.low.len());
                assert!(per <= bound, "round-robin bound violated: {per} > {bound}");
                assert_eq!(trace.replay().unwrap(), witness);
            }
            other => panic!("expected Realized, got {other:?}"),
        }
    }

    #[test]
    fn dispatcher_reflect_consistency() {
        let cfg = RealizeConfig::default();
        let mut rng = SplitMix64::new(99);
        for _ in 0..6 {
            let d = 10u32;
            let bound = 1i64 << 9;
            let coords: Vec<i64> = (0..d).map(|_| rng.next_range_i64(0, bound)).collect();
            let b = dv(d, &coords);
            let r = reflect(&b).unwrap();
            let s1 = realize(&b, &cfg).unwrap();
            let s2 = realize(&r, &cfg).unwrap();
            let tag = |o: &RealizeOutcome| match o {
                RealizeOutcome::Realized { .. } => 0,
                RealizeOutcome::Undecided { .. } => 1,
                RealizeOutcome::NotInZonotope { .. } => 2,
            };
            assert_eq!(tag(&s1), tag(&s2), "status differs for {b} vs {r}");
        }
    }
}
