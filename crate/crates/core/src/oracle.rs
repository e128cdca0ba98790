//! Ground-truth realizability via dynamic programming over the `2^d - 1`
//! nonzero columns: a vector is realizable exactly when it is a sum of
//! distinct columns. Everything else in the crate is validated against
//! this module at small dimensions.

use std::io::{self, Write};

use crate::dim::Dimension;
use crate::edge::{degree_sequence, EdgeSet};
use crate::error::{DspError, Result};
use crate::vector::DegreeVector;

/// Resource guards for per-query dynamic programs. The DP keeps one bit
/// per (column, state), so memory is `(columns + 1) * states` bits.
#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    /// Cap on the number of DP states, i.e. the product of `b_i + 1`.
    pub max_states: u64,
    /// Cap on total stored bits across all column layers.
    pub max_total_bits: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_states: 1 << 24,
            max_total_bits: 1 << 30,
        }
    }
}

/// Dense indicator of every realizable point in the box `[0, bound]^d`,
/// built by one sweep over all columns in increasing mask order.
///
/// Layout: the last coordinate is packed into one `u64` row
/// (`bound + 1 <= 33` bits for d <= 6); the remaining coordinates index
/// rows in row-major order.
pub struct ReachableSet {
    dim: Dimension,
    bound: i64,
    rows: Vec<u64>,
    row_mask: u64,
}

/// Builds the reachable set for the full box (`bound = 2^{d-1}`).
///
/// Guarded at d <= 6: the box has `(2^{d-1}+1)^d` cells, which is about
/// 1.3e9 bits at d = 6 already.
pub fn reachable_set(dim: Dimension) -> Result<ReachableSet> {
    if dim.get() > 6 {
        return Err(DspError::resource(format!(
            "reachable set needs (2^{{d-1}}+1)^d cells; d={} exceeds the d<=6 guard",
            dim
        )));
    }
    let d = dim.usize();
    let bound = dim.max_degree();
    let radix = (bound + 1) as u64;
    let outer = radix.pow(d as u32 - 1);
    let mut rows = vec![0u64; outer as usize];
    rows[0] = 1; // the zero vector
    let row_mask = if radix == 64 { u64::MAX } else { (1u64 << radix) - 1 };

    let mut set = ReachableSet {
        dim,
        bound,
        rows,
        row_mask,
    };
    for mask in 1..=dim.mask_count() as u32 {
        set.add_column(mask);
    }
    Ok(set)
}

impl ReachableSet {
    /// In-place update `S <- S ∪ (S + column)`, clipped to the box.
    /// Rows are processed in decreasing order so sources (which have
    /// smaller or equal flat index) still hold the pre-column value.
    fn add_column(&mut self, mask: u32) {
        let d = self.dim.usize();
        let radix = (self.bound + 1) as u64;
        let last_bit = (mask >> (d - 1)) & 1; // contribution to the packed axis
        // flat offset of the column restricted to the outer coordinates
        let mut outer_offset = 0u64;
        let mut stride = 1u64;
        let mut col = [0u8; 32];
        for i in (0..d.saturating_sub(1)).rev() {
            col[i] = ((mask >> i) & 1) as u8;
            outer_offset += col[i] as u64 * stride;
            stride *= radix;
        }

        // countdown multi-index over the outer coordinates
        let mut idx = vec![(radix - 1) as i64; d - 1];
        let mut flat = self.rows.len() as u64;
        'rows: loop {
            if flat == 0 {
                break;
            }
            flat -= 1;
            let valid = (0..d - 1).all(|i| idx[i] >= col[i] as i64);
            if valid {
                let src = (flat - outer_offset) as usize;
                let shifted = (self.rows[src] << last_bit) & self.row_mask;
                self.rows[flat as usize] |= shifted;
            }
            // decrement the mixed-radix counter
            for i in (0..d - 1).rev() {
                if idx[i] > 0 {
                    idx[i] -= 1;
                    continue 'rows;
                }
                idx[i] = (radix - 1) as i64;
            }
            break;
        }
        debug_assert_eq!(flat, 0);
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn contains(&self, b: &DegreeVector) -> bool {
        if b.dim() != self.dim {
            return false;
        }
        let d = self.dim.usize();
        if b.coords().iter().any(|&c| c > self.bound) {
            return false;
        }
        let radix = (self.bound + 1) as u64;
        let mut row = 0u64;
        for i in 0..d - 1 {
            row = row * radix + b.get(i) as u64;
        }
        let bit = b.get(d - 1) as u64;
        self.rows[row as usize] >> bit & 1 == 1
    }

    /// Number of realizable points in the box.
    pub fn count(&self) -> u64 {
        self.rows
            .iter()
            .map(|&r| (r & self.row_mask).count_ones() as u64)
            .sum()
    }

    /// Raw dump: an 8-byte header (`d` then `bound`, both u32 little
    /// endian) followed by the box indicator as a flat bit array in
    /// row-major state order, least significant bit first.
    pub fn write_raw<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(&self.dim.get().to_le_bytes())?;
        w.write_all(&(self.bound as u32).to_le_bytes())?;
        let radix = (self.bound + 1) as u64;
        let total_bits = radix.pow(self.dim.get());
        let mut buf = vec![0u8; total_bits.div_ceil(8) as usize];
        for (r, &row) in self.rows.iter().enumerate() {
            let base = r as u64 * radix;
            let mut bits = row & self.row_mask;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                let pos = base + b;
                buf[(pos / 8) as usize] |= 1 << (pos % 8);
                bits &= bits - 1;
            }
        }
        w.write_all(&buf)
    }
}

/// Streams every lattice point of `[0, bound]^d` through the callback.
pub fn for_each_box_point<F: FnMut(&[i64])>(dim: Dimension, bound: i64, mut f: F) {
    let d = dim.usize();
    let mut point = vec![0i64; d];
    loop {
        f(&point);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if point[i] < bound {
                point[i] += 1;
                break;
            }
            point[i] = 0;
        }
    }
}

/// Decides whether `b` is a sum of distinct columns drawn from `columns`,
/// returning a witness edge set. Forward DP keeps partial sums that stay
/// coordinatewise at most `b` (columns are nonnegative, so pruning is
/// loss-free); the witness is recovered by walking the stored layers.
fn dp_over_columns(
    dim: Dimension,
    columns: &[u32],
    b: &DegreeVector,
    caps: &OracleCaps,
) -> Result<Option<EdgeSet>> {
    dim.check_same(b.dim())?;
    let d = dim.usize();
    if b.sum() == 0 {
        return Ok(Some(EdgeSet::new(dim)));
    }
    if columns.is_empty() {
        return Ok(None);
    }

    let mut states: u64 = 1;
    for &c in b.coords() {
        states = states
            .checked_mul(c as u64 + 1)
            .ok_or_else(|| DspError::resource("DP state count overflows u64".to_string()))?;
        if states > caps.max_states {
            return Err(DspError::resource(format!(
                "oracle infeasible at this size: {} states exceed cap {}",
                states, caps.max_states
            )));
        }
    }

    // Pack the axis of largest radix <= 64 into u64 rows. Degree bounds
    // make such an axis exist whenever the state cap admits the query.
    let mut axis = None;
    let mut best = 0i64;
    for i in 0..d {
        let r = b.get(i) + 1;
        if r <= 64 && r > best {
            best = r;
            axis = Some(i);
        }
    }
    let axis = axis.ok_or_else(|| {
        DspError::resource("oracle infeasible at this size: no packable axis".to_string())
    })?;

    // coordinate order with `axis` last
    let order: Vec<usize> = (0..d).filter(|&i| i != axis).chain([axis]).collect();
    let radix_last = (b.get(axis) + 1) as u64;
    let row_mask = if radix_last == 64 {
        u64::MAX
    } else {
        (1u64 << radix_last) - 1
    };
    let outer_dims: Vec<usize> = order[..d - 1].to_vec();
    let outer_radii: Vec<u64> = outer_dims.iter().map(|&i| (b.get(i) + 1) as u64).collect();
    let rows: u64 = outer_radii.iter().product();

    // stored bits include the padding of each packed row to a full word
    let stored_bits = rows
        .checked_mul(64)
        .and_then(|r| r.checked_mul(columns.len() as u64 + 1))
        .filter(|&t| t <= caps.max_total_bits)
        .ok_or_else(|| {
            DspError::resource(format!(
                "oracle infeasible at this size: {} layers of {} rows exceed bit cap {}",
                columns.len() + 1,
                rows,
                caps.max_total_bits
            ))
        })?;
    let _ = stored_bits;
    let rows = rows as usize;

    // per-column flat offsets over the outer coordinates
    let offsets: Vec<(u64, u64, Vec<u8>)> = columns
        .iter()
        .map(|&mask| {
            let mut off = 0u64;
            let mut stride = 1u64;
            let mut bits = vec![0u8; d - 1];
            for k in (0..d - 1).rev() {
                bits[k] = ((mask >> outer_dims[k]) & 1) as u8;
                off += bits[k] as u64 * stride;
                stride *= outer_radii[k];
            }
            let last_bit = (mask >> axis) & 1;
            (off, last_bit as u64, bits)
        })
        .collect();

    let mut layers: Vec<Vec<u64>> = Vec::with_capacity(columns.len() + 1);
    let mut layer0 = vec![0u64; rows];
    layer0[0] = 1;
    layers.push(layer0);

    for (ci, _mask) in columns.iter().enumerate() {
        let (outer_offset, last_bit, ref col_bits) = offsets[ci];
        let prev = &layers[ci];
        let mut next = prev.clone();
        // ascending row order with an explicit multi-index; forward update
        // reads only the previous layer, so order is free
        let mut idx = vec![0u64; d - 1];
        for (flat, slot) in next.iter_mut().enumerate() {
            let valid = (0..d - 1).all(|k| idx[k] >= col_bits[k] as u64)
                || d == 1;
            if valid {
                let src = flat as u64 - outer_offset;
                *slot |= (prev[src as usize] << last_bit) & row_mask;
            }
            for k in (0..d.saturating_sub(1)).rev() {
                idx[k] += 1;
                if idx[k] < outer_radii[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        layers.push(next);
    }

    // target state
    let target_row: u64 = outer_dims
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &i)| acc * outer_radii[k] + b.get(i) as u64);
    let target_bit = b.get(axis) as u64;
    if layers[columns.len()][target_row as usize] >> target_bit & 1 == 0 {
        return Ok(None);
    }

    // backtrack, preferring "skip this column"
    let mut chosen = Vec::new();
    let mut row = target_row;
    let mut bit = target_bit;
    let mut coords: Vec<u64> = {
        let mut c = vec![0u64; d - 1];
        let mut r = row;
        for k in (0..d - 1).rev() {
            c[k] = r % outer_radii[k];
            r /= outer_radii[k];
        }
        c
    };
    for ci in (0..columns.len()).rev() {
        if layers[ci][row as usize] >> bit & 1 == 1 {
            continue;
        }
        let (outer_offset, last_bit, ref col_bits) = offsets[ci];
        chosen.push(columns[ci]);
        for k in 0..d - 1 {
            debug_assert!(coords[k] >= col_bits[k] as u64);
            coords[k] -= col_bits[k] as u64;
        }
        row -= outer_offset;
        debug_assert!(bit >= last_bit);
        bit -= last_bit;
    }
    debug_assert_eq!(row, 0);
    debug_assert_eq!(bit, 0);

    let witness = EdgeSet::from_masks(dim, chosen)?;
    // unconditional re-verification of the witness contract
    if degree_sequence(&witness) != *b {
        return Err(DspError::contract(format!(
            "oracle witness degrees {} do not match query {}",
            degree_sequence(&witness),
            b
        )));
    }
    Ok(Some(witness))
}

/// Is `b` the degree sequence of some hypergraph? Columns are all nonzero
/// masks in increasing order. Returns the witness or None; inputs beyond
/// the per-coordinate maximum degree are never realizable.
pub fn is_realizable(b: &DegreeVector, caps: &OracleCaps) -> Result<Option<EdgeSet>> {
    let dim = b.dim();
    if !b.within_box() {
        return Ok(None);
    }
    if b.sum() == 0 {
        return Ok(Some(EdgeSet::new(dim)));
    }
    // one stored layer per column; refuse before allocating the column list
    if (dim.mask_count() + 1).saturating_mul(64) > caps.max_total_bits {
        return Err(DspError::resource(format!(
            "oracle infeasible at this size: {} columns exceed bit cap",
            dim.mask_count()
        )));
    }
    let columns: Vec<u32> = (1..=dim.mask_count() as u32).collect();
    dp_over_columns(dim, &columns, b, caps)
}

/// Same question restricted to hypergraphs whose edges all have exactly
/// three vertices.
pub fn is_realizable_3uniform(b: &DegreeVector, caps: &OracleCaps) -> Result<Option<EdgeSet>> {
    let dim = b.dim();
    if b.sum() % 3 != 0 {
        return Ok(None);
    }
    let columns: Vec<u32> = (1..=dim.mask_count() as u32)
        .filter(|m| m.count_ones() == 3)
        .collect();
    // a vertex lies in at most C(d-1, 2) triples
    let d = dim.get() as i64;
    let cap = d.saturating_sub(1) * d.saturating_sub(2) / 2;
    if b.coords().iter().any(|&c| c > cap) {
        return Ok(None);
    }
    dp_over_columns(dim, &columns, b, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::reflect;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn dv(d: u32, c: &[i64]) -> DegreeVector {
        DegreeVector::new(dim(d), c.to_vec()).unwrap()
    }

    /// Literal enumeration of all subset sums of the nonzero masks,
    /// independent of the DP (feasible for d <= 3: 2^7 subsets).
    fn brute_force_sums(d: u32) -> std::collections::HashSet<Vec<i64>> {
        let n = (1u32 << d) - 1;
        let mut out = std::collections::HashSet::new();
        for pick in 0u32..(1 << n) {
            let mut sum = vec![0i64; d as usize];
            for m in 1..=n {
                if pick >> (m - 1) & 1 == 1 {
                    for i in 0..d {
                        sum[i as usize] += (m >> i & 1) as i64;
                    }
                }
            }
            out.insert(sum);
        }
        out
    }

    #[test]
    fn reachable_d1_and_d2() {
        let rs = reachable_set(dim(1)).unwrap();
        assert!(rs.contains(&dv(1, &[0])));
        assert!(rs.contains(&dv(1, &[1])));
        assert_eq!(rs.count(), 2);

        let rs = reachable_set(dim(2)).unwrap();
        let expect: Vec<[i64; 2]> =
            vec![[0, 0], [1, 0], [0, 1], [1, 1], [2, 1], [1, 2], [2, 2]];
        let mut found = 0;
        for_each_box_point(dim(2), 2, |p| {
            let v = dv(2, p);
            let inside = rs.contains(&v);
            let expected = expect.iter().any(|e| e.as_slice() == p);
            assert_eq!(inside, expected, "point {p:?}");
            if inside {
                found += 1;
            }
        });
        assert_eq!(found, 7);
        assert_eq!(rs.count(), 7);
    }

    #[test]
    fn reachable_d3_count_and_brute_force() {
        let rs = reachable_set(dim(3)).unwrap();
        let brute = brute_force_sums(3);
        // frozen from the literal 2^7-subset enumeration
        assert_eq!(brute.len(), 59);
        assert_eq!(rs.count(), 59);
        for_each_box_point(dim(3), 4, |p| {
            assert_eq!(rs.contains(&dv(3, p)), brute.contains(p), "point {p:?}");
        });
    }

    #[test]
    fn reachable_reflect_closure() {
        let rs = reachable_set(dim(4)).unwrap();
        for_each_box_point(dim(4), 8, |p| {
            let v = dv(4, p);
            let r = reflect(&v).unwrap();
            assert_eq!(rs.contains(&v), rs.contains(&r));
        });
    }

    #[test]
    fn is_realizable_examples() {
        let caps = OracleCaps::default();
        // max degree at d=2 is 2
        assert!(is_realizable(&dv(2, &[3, 3]), &caps).unwrap().is_none());
        let w = is_realizable(&dv(2, &[2, 1]), &caps).unwrap().unwrap();
        let masks: Vec<u32> = w.iter().map(|e| e.mask()).collect();
        assert_eq!(masks, vec![0b01, 0b11]); // {1}, {1,2}
        let w = is_realizable(&dv(5, &[0; 5]), &caps).unwrap().unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn is_realizable_matches_reachable_set() {
        let caps = OracleCaps::default();
        let rs = reachable_set(dim(3)).unwrap();
        for_each_box_point(dim(3), 4, |p| {
            let v = dv(3, p);
            let got = is_realizable(&v, &caps).unwrap();
            assert_eq!(got.is_some(), rs.contains(&v), "point {p:?}");
            if let Some(w) = got {
                assert_eq!(degree_sequence(&w), v);
            }
        });
    }

    #[test]
    fn three_uniform_examples() {
        let caps = OracleCaps::default();
        let w = is_realizable_3uniform(&dv(4, &[1, 1, 1, 0]), &caps)
            .unwrap()
            .unwrap();
        let masks: Vec<u32> = w.iter().map(|e| e.mask()).collect();
        assert_eq!(masks, vec![0b0111]); // {1,2,3}

        // sum not divisible by 3
        assert!(is_realizable_3uniform(&dv(4, &[1, 1, 1, 1]), &caps)
            .unwrap()
            .is_none());

        let w = is_realizable_3uniform(&dv(4, &[3, 3, 3, 3]), &caps)
            .unwrap()
            .unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|e| e.vertex_count() == 3));
    }

    #[test]
    fn resource_guard_is_distinct_from_unrealizable() {
        let caps = OracleCaps {
            max_states: 10,
            max_total_bits: 1 << 20,
        };
        let err = is_realizable(&dv(4, &[8, 8, 8, 8]), &caps).unwrap_err();
        assert!(matches!(err, DspError::ResourceLimit(_)), "{err}");
    }

    #[test]
    fn raw_dump_header_and_bits() {
        let rs = reachable_set(dim(2)).unwrap();
        let mut buf = Vec::new();
        rs.write_raw(&mut buf).unwrap();
        assert_eq!(&buf[0..4], &2u32.to_le_bytes());
        assert_eq!(&buf[4..8], &2u32.to_le_bytes());
        // 9 cells -> 2 bytes; states in row-major order:
        // (0,0)(0,1)(0,2)(1,0)(1,1)(1,2)(2,0)(2,1)(2,2)
        // reachable: 00,01,10,11,12,21,22 -> bits 0,1,3,4,5,7,8
        assert_eq!(buf.len(), 8 + 2);
        assert_eq!(buf[8], 0b1011_1011);
        assert_eq!(buf[9], 0b0000_0001);
    }
}
