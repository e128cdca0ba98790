use crate::dim::Dimension;
use crate::error::{DspError, Result};
use crate::vector::DegreeVector;

/// A hyperedge as a nonzero bitmask; vertex `i` (1-based) is bit `i-1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge(u32);

impl Edge {
    pub fn from_mask(mask: u32, dim: Dimension) -> Result<Self> {
        if mask == 0 {
            return Err(DspError::invalid("edge mask must be nonzero"));
        }
        if mask & !dim.full_mask() != 0 {
            return Err(DspError::invalid(format!(
                "edge mask {mask:#b} has bits outside dimension {dim}"
            )));
        }
        Ok(Edge(mask))
    }

    pub fn from_vertices(vertices: &[u32], dim: Dimension) -> Result<Self> {
        let mut mask = 0u32;
        for &v in vertices {
            if v == 0 || v > dim.get() {
                return Err(DspError::invalid(format!(
                    "vertex {v} out of range 1..={dim}"
                )));
            }
            let bit = 1u32 << (v - 1);
            if mask & bit != 0 {
                return Err(DspError::invalid(format!("duplicate vertex {v} in edge")));
            }
            mask |= bit;
        }
        Edge::from_mask(mask, dim)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn vertex_count(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based vertex labels in increasing order (the external convention).
    pub fn vertices(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.vertex_count() as usize);
        let mut m = self.0;
        while m != 0 {
            let b = m.trailing_zeros();
            out.push(b + 1);
            m &= m - 1;
        }
        out
    }
}

/// A hypergraph: a set of distinct nonzero masks over a fixed dimension,
/// stored densely (one bit per possible mask) with the degree vector kept
/// in sync on every mutation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeSet {
    dim: Dimension,
    words: Vec<u64>,
    len: u64,
    degrees: Vec<i64>,
}

impl EdgeSet {
    pub fn new(dim: Dimension) -> Self {
        let nbits = 1u64 << dim.get();
        let words = vec![0u64; nbits.div_ceil(64) as usize];
        EdgeSet {
            dim,
            words,
            len: 0,
            degrees: vec![0; dim.usize()],
        }
    }

    pub fn from_masks<I: IntoIterator<Item = u32>>(dim: Dimension, masks: I) -> Result<Self> {
        let mut set = EdgeSet::new(dim);
        for m in masks {
            let e = Edge::from_mask(m, dim)?;
            if !set.insert(e)? {
                return Err(DspError::invalid(format!("duplicate edge mask {m:#b}")));
            }
        }
        Ok(set)
    }

    #[inline]
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, edge: Edge) -> bool {
        self.contains_mask(edge.mask())
    }

    #[inline]
    pub fn contains_mask(&self, mask: u32) -> bool {
        let w = (mask / 64) as usize;
        self.words[w] >> (mask % 64) & 1 == 1
    }

    /// Inserts the edge; returns false if it was already present.
    pub fn insert(&mut self, edge: Edge) -> Result<bool> {
        Edge::from_mask(edge.mask(), self.dim)?;
        if self.contains(edge) {
            return Ok(false);
        }
        let mask = edge.mask();
        self.words[(mask / 64) as usize] |= 1u64 << (mask % 64);
        self.len += 1;
        let mut m = mask;
        while m != 0 {
            self.degrees[m.trailing_zeros() as usize] += 1;
            m &= m - 1;
        }
        Ok(true)
    }

    /// Removes the edge; returns false if it was not present.
    pub fn remove(&mut self, edge: Edge) -> bool {
        if !self.contains(edge) {
            return false;
        }
        let mask = edge.mask();
        self.words[(mask / 64) as usize] &= !(1u64 << (mask % 64));
        self.len -= 1;
        let mut m = mask;
        while m != 0 {
            self.degrees[m.trailing_zeros() as usize] -= 1;
            m &= m - 1;
        }
        true
    }

    /// Edges in increasing mask order.
    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        let dim = self.dim;
        (1..=dim.mask_count() as u32)
            .filter(move |&m| self.contains_mask(m))
            .map(Edge)
    }

    /// Degree of 0-based coordinate `i`.
    #[inline]
    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degree_slice(&self) -> &[i64] {
        &self.degrees
    }

    /// Sum of all degrees, i.e. the total vertex count over edges.
    pub fn degree_sum(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// The edge of minimum vertex count, lowest mask breaking ties.
    pub fn min_popcount_edge(&self) -> Option<Edge> {
        let mut best: Option<Edge> = None;
        let mut best_pc = u32::MAX;
        for e in self.iter() {
            let pc = e.vertex_count();
            if pc < best_pc {
                best_pc = pc;
                best = Some(e);
                if pc == 1 {
                    break;
                }
            }
        }
        best
    }

    /// All nonzero masks not present in `self`.
    pub fn complement(&self) -> EdgeSet {
        let mut out = EdgeSet::new(self.dim);
        let nbits = 1u64 << self.dim.get();
        for (w, word) in self.words.iter().enumerate() {
            let mut inv = !word;
            if w == 0 {
                inv &= !1; // mask 0 is not an edge
            }
            let hi = (nbits - (w as u64) * 64).min(64);
            if hi < 64 {
                inv &= (1u64 << hi) - 1;
            }
            out.words[w] = inv;
        }
        out.len = self.dim.mask_count() - self.len;
        let max_deg = self.dim.max_degree();
        for i in 0..self.dim.usize() {
            out.degrees[i] = max_deg - self.degrees[i];
        }
        out
    }
}

/// Degree sequence of a hypergraph: coordinate `i` counts edges containing
/// vertex `i+1`; equals the column sums of the selected columns of the
/// complete binary matrix.
pub fn degree_sequence(h: &EdgeSet) -> DegreeVector {
    DegreeVector::new(h.dim(), h.degrees.clone()).expect("degrees are nonnegative")
}
