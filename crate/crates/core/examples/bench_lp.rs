use dsp_core::*;
use dsp_core::zonotope::{membership, LpConfig};
use std::time::Instant;

fn main() {
    let cfg = LpConfig::default();
    let d = 12u32;
    let dim = Dimension::new(d).unwrap();
    let center = 1i64 << (d - 2);
    let b = DegreeVector::new(dim, vec![center; d as usize]).unwrap();
    let t = Instant::now();
    for _ in 0..3 {
        let _ = membership(&b.to_rational(), &cfg).unwrap();
    }
    println!("3x d=12 center: {:?}", t.elapsed());
}
