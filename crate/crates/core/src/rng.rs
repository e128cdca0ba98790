/// SplitMix64: the pinned pseudo-random generator for every seeded
/// experiment. The algorithm is fixed here so reports are reproducible
/// across versions and implementations:
///
/// ```text
/// state <- state + 0x9E3779B97F4A7C15          (wrapping)
/// z <- state
/// z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9  (wrapping)
/// z <- (z xor (z >> 27)) * 0x94D049BB133111EB  (wrapping)
/// output: z xor (z >> 31)
/// ```
///
/// Bounded draws use rejection sampling on the low bits, so they are
/// exactly uniform.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. Panics on `n == 0`.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below requires n > 0");
        if n == 1 {
            return 0;
        }
        let bits = 64 - (n - 1).leading_zeros();
        let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        loop {
            let v = self.next_u64() & mask;
            if v < n {
                return v;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn next_range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.next_below((hi - lo + 1) as u64) as i64
    }

    pub fn next_bool(&mut self, num: u64, den: u64) -> bool {
        self.next_below(den) < num
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_first_outputs() {
        // frozen: any change to these values breaks replayability of
        // published reports
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        let mut r = SplitMix64::new(42);
        assert_eq!(r.next_u64(), 0xBDD7_3226_2FEB_6E95);
    }

    #[test]
    fn bounded_draws_in_range() {
        let mut r = SplitMix64::new(7);
        for _ in 0..1000 {
            let v = r.next_below(17);
            assert!(v < 17);
        }
        for _ in 0..100 {
            let v = r.next_range_i64(-3, 3);
            assert!((-3..=3).contains(&v));
        }
    }
}
