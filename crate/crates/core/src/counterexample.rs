//! A family of integer points of the degree-sequence polytope that are
//! not realizable, with a machine-checkable certificate.
//!
//! The construction stacks the weight-k columns of `{0,1}^n` (one block
//! per class in `ks`) into an `n x d` matrix `B`; its rows are `d`-bit
//! vectors and `b = (1/2) * (row sum)` is integral when every class
//! weight is even. The certificate checks the two finite pillars of the
//! argument: the only 0/1 vectors in the row span are the rows
//! themselves plus zero, and no subset of rows sums to `b`. Together
//! these place a non-realizable lattice point on a supporting hyperplane
//! of the polytope in dimension `d` (98 for the base instance n = 8,
//! ks = [2, 4]). The hyperplane normal and the huge boundary point stay
//! symbolic; they would sum over up to `2^98` vectors.

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{DspError, Result};

/// The stacked-blocks instance. Columns are stored as n-bit masks,
/// classes in the given order, ascending mask value within a class.
#[derive(Clone, Debug)]
pub struct CounterexampleSpec {
    pub n: u32,
    pub ks: Vec<u32>,
    pub d: usize,
    pub columns: Vec<u32>,
    pub b: Vec<i64>,
}

pub fn build_spec(n: u32, ks: &[u32]) -> Result<CounterexampleSpec> {
    if n == 0 || n > 20 {
        return Err(DspError::invalid("n must be in 1..=20".to_string()));
    }
    if ks.is_empty() {
        return Err(DspError::invalid("at least one weight class".to_string()));
    }
    let mut seen = std::collections::HashSet::new();
    for &k in ks {
        if k == 0 || k >= n {
            return Err(DspError::invalid(format!(
                "class weight {k} out of range 1..{n}"
            )));
        }
        if !seen.insert(k) {
            return Err(DspError::invalid(format!("duplicate class weight {k}")));
        }
        if k % 2 != 0 {
            return Err(DspError::invalid(format!(
                "class weight {k} is odd, so b = (row sum)/2 is not integral"
            )));
        }
    }
    let mut columns = Vec::new();
    let mut b = Vec::new();
    for &k in ks {
        for mask in 1u32..(1 << n) {
            if mask.count_ones() == k {
                columns.push(mask);
                b.push(k as i64 / 2);
            }
        }
    }
    if columns.len() > 100_000 {
        return Err(DspError::resource(format!(
            "instance has {} columns",
            columns.len()
        )));
    }
    Ok(CounterexampleSpec {
        n,
        ks: ks.to_vec(),
        d: columns.len(),
        columns,
        b,
    })
}

/// Result of the row-span enumeration. `survivors` are the coefficient
/// vectors (doubled, so entries are integers) whose combination of rows
/// lands back in `{0,1}^d`.
#[derive(Clone, Debug)]
pub struct SpanReport {
    pub holds: bool,
    pub candidates: u64,
    pub survivors: Vec<Vec<i64>>,
}

/// Enumerates every coefficient vector `lambda` that can satisfy the
/// pair-block constraints and keeps those whose combination of the rows
/// is a 0/1 vector. The pair block forces
/// `2*lambda_1 = s_12 + s_13 - s_23 in {-1, 0, 1, 2}` and
/// `lambda_i = s_1i - lambda_1`, so ranging `lambda_1` over its four
/// feasible values and each `s_1i` over `{0,1}` is a complete
/// enumeration: `4 * 2^{n-1} = 2^{n+1}` candidates. The check holds when
/// the only survivors are zero and the `n` unit vectors.
pub fn verify_span(spec: &CounterexampleSpec) -> Result<SpanReport> {
    if !spec.ks.contains(&2) {
        return Err(DspError::invalid(
            "span verification needs the pair block (class weight 2)".to_string(),
        ));
    }
    let n = spec.n as usize;
    let mut survivors = Vec::new();
    let mut candidates = 0u64;
    // doubled lambda_1 values, ascending
    for two_l1 in [-1i64, 0, 1, 2] {
        for s in 0u32..(1 << (n - 1)) {
            candidates += 1;
            // doubled coefficients: 2*lambda_i = 2*s_1i - 2*lambda_1
            let mut lam2 = Vec::with_capacity(n);
            lam2.push(two_l1);
            for i in 0..n - 1 {
                lam2.push(2 * ((s >> i & 1) as i64) - two_l1);
            }
            if survives(spec, &lam2) {
                survivors.push(lam2);
            }
        }
    }
    let holds = {
        let mut expect: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
        expect.push(vec![0; n]);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            expect.push(e);
        }
        let mut got = survivors.clone();
        got.sort();
        expect.sort();
        got == expect
    };
    Ok(SpanReport {
        holds,
        candidates,
        survivors,
    })
}

/// All pair sums and all class-column sums must land in {0, 1}
/// (doubled: {0, 2}).
fn survives(spec: &CounterexampleSpec, lam2: &[i64]) -> bool {
    let n = spec.n as usize;
    for i in 0..n {
        for j in i + 1..n {
            let s = lam2[i] + lam2[j];
            if s != 0 && s != 2 {
                return false;
            }
        }
    }
    for &col in &spec.columns {
        let mut s = 0i64;
        let mut m = col;
        while m != 0 {
            s += lam2[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        if s != 0 && s != 2 {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct FaceReport {
    pub nonrealizable: bool,
    pub subsets: u64,
}

/// Brute force over all `2^n` subsets of rows: `b` must not be a subset
/// sum. Row values per column are the bits of the column mask, so a
/// subset `T` sums to `b` iff `popcount(col & T) = b_col` everywhere.
pub fn verify_face(spec: &CounterexampleSpec) -> FaceReport {
    let n = spec.n;
    let total = 1u64 << n;
    let mut nonrealizable = true;
    for t in 0..total {
        let t = t as u32;
        let hit = spec
            .columns
            .iter()
            .zip(&spec.b)
            .all(|(&col, &bc)| (col & t).count_ones() as i64 == bc);
        if hit {
            nonrealizable = false;
            break;
        }
    }
    FaceReport {
        nonrealizable,
        subsets: total,
    }
}

/// Exact rank of the row matrix over the rationals.
pub fn row_rank(spec: &CounterexampleSpec) -> u32 {
    let n = spec.n as usize;
    // rows as vectors over the columns; eliminate with i128 fractions-free
    let mut rows: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            spec.columns
                .iter()
                .map(|&c| ((c >> i) & 1) as i128)
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < n && col < spec.d {
        if let Some(p) = (rank..n).find(|&r| rows[r][col] != 0) {
            rows.swap(rank, p);
            for r in rank + 1..n {
                if rows[r][col] != 0 {
                    let (a, b) = (rows[rank][col], rows[r][col]);
                    for c in col..spec.d {
                        rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank as u32
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SpanLemmaJson {
    pub holds: bool,
    pub candidates: u64,
    pub survivors: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FaceJson {
    pub nonrealizable: bool,
    pub subsets: u64,
}

/// The full certificate; serializes deterministically.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FaceCertificate {
    pub n: u32,
    pub ks: Vec<u32>,
    pub d: usize,
    pub b: Vec<i64>,
    pub span_lemma: SpanLemmaJson,
    pub face: FaceJson,
    pub conclusion: bool,
}

/// Formats a doubled coefficient vector: "0", "e3", or the explicit
/// rational tuple.
fn survivor_name(lam2: &[i64]) -> String {
    if lam2.iter().all(|&c| c == 0) {
        return "0".to_string();
    }
    let units: Vec<usize> = lam2
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, _)| i)
        .collect();
    if units.len() == 1 && lam2[units[0]] == 2 {
        return format!("e{}", units[0] + 1);
    }
    let parts: Vec<String> = lam2
        .iter()
        .map(|&c| {
            let r = BigRational::new(c.into(), 2.into());
            if r.is_integer() {
                r.to_integer().to_string()
            } else {
                r.to_string()
            }
        })
        .collect();
    format!("({})", parts.join(","))
}

pub fn emit_certificate(spec: &CounterexampleSpec) -> Result<FaceCertificate> {
    let span = verify_span(spec)?;
    let face = verify_face(spec);
    let mut names: Vec<String> = span.survivors.iter().map(|s| survivor_name(s)).collect();
    names.sort_by_key(|s| {
        // zero first, then unit vectors by index, then the rest
        if s == "0" {
            (0, 0usize, s.clone())
        } else if let Some(rest) = s.strip_prefix('e') {
            match rest.parse::<usize>() {
                Ok(i) => (1, i, s.clone()),
                Err(_) => (2, 0, s.clone()),
            }
        } else {
            (2, 0, s.clone())
        }
    });
    Ok(FaceCertificate {
        n: spec.n,
        ks: spec.ks.clone(),
        d: spec.d,
        b: spec.b.clone(),
        span_lemma: SpanLemmaJson {
            holds: span.holds,
            candidates: span.candidates,
            survivors: names,
        },
        face: FaceJson {
            nonrealizable: face.nonrealizable,
            subsets: face.subsets,
        },
        conclusion: span.holds && face.nonrealizable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_instance_structure() {
        let spec = build_spec(8, &[2, 4]).unwrap();
        assert_eq!(spec.d, 98);
        assert_eq!(spec.columns.len(), 98);
        // first C(8,2)=28 coordinates 1, next C(8,4)=70 coordinates 2
        assert!(spec.b[..28].iter().all(|&c| c == 1));
        assert!(spec.b[28..].iter().all(|&c| c == 2));
        assert_eq!(spec.b.iter().sum::<i64>(), 28 + 140);
        // distinct columns of the right weights
        let mut seen = std::collections::HashSet::new();
        for (idx, &c) in spec.columns.iter().enumerate() {
            assert!(seen.insert(c));
            let want = if idx < 28 { 2 } else { 4 };
            assert_eq!(c.count_ones(), want);
        }
    }

    #[test]
    fn small_instances() {
        let spec = build_spec(4, &[2]).unwrap();
        assert_eq!(spec.d, 6);
        assert!(spec.b.iter().all(|&c| c == 1));

        assert!(build_spec(8, &[3]).is_err());
        assert!(build_spec(8, &[2, 2]).is_err());
        assert!(build_spec(8, &[8]).is_err());
    }

    #[test]
    fn span_base_instance() {
        let spec = build_spec(8, &[2, 4]).unwrap();
        let report = verify_span(&spec).unwrap();
        assert!(report.holds);
        assert_eq!(report.candidates, 512);
        assert_eq!(report.survivors.len(), 9);
        // e1 survives: the first row itself
        let e1: Vec<i64> = {
            let mut v = vec![0; 8];
            v[0] = 2;
            v
        };
        assert!(report.survivors.contains(&e1));
    }

    #[test]
    fn span_fails_without_quadruple_block() {
        // with only the pair block the all-halves vector survives
        let spec = build_spec(8, &[2]).unwrap();
        let report = verify_span(&spec).unwrap();
        assert!(!report.holds);
        let halves = vec![1i64; 8];
        assert!(report.survivors.contains(&halves));
        assert!(report.survivors.len() > 9);
    }

    #[test]
    fn face_base_instance() {
        let spec = build_spec(8, &[2, 4]).unwrap();
        let report = verify_face(&spec);
        assert!(report.nonrealizable);
        assert_eq!(report.subsets, 256);
        // singletons obviously fail: b has entries 2
        // (implicitly covered by the full scan)
    }

    #[test]
    fn rank_of_base_rows() {
        let spec = build_spec(8, &[2, 4]).unwrap();
        assert_eq!(row_rank(&spec), 8);
    }

    #[test]
    fn certificate_conclusion_and_round_trip() {
        let spec = build_spec(8, &[2, 4]).unwrap();
        let cert = emit_certificate(&spec).unwrap();
        assert!(cert.conclusion);
        assert_eq!(cert.span_lemma.candidates, 512);
        let mut want = vec!["0".to_string()];
        want.extend((1..=8).map(|i| format!("e{i}")));
        assert_eq!(cert.span_lemma.survivors, want);
        assert_eq!(cert.face.subsets, 256);

        let s1 = serde_json::to_string(&cert).unwrap();
        let back: FaceCertificate = serde_json::from_str(&s1).unwrap();
        let s2 = serde_json::to_string(&back).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn failing_spec_reports_survivors() {
        let spec = build_spec(6, &[2]).unwrap();
        let cert = emit_certificate(&spec).unwrap();
        assert!(!cert.span_lemma.holds);
        assert!(!cert.conclusion);
        assert!(cert.span_lemma.survivors.len() > 7);
    }
}
