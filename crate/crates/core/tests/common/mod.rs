//! Independent oracles and Monte Carlo helpers shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;

/// Sort-based pattern: indices ordered by descending value, then ascending index.
pub fn oracle_pattern(window: &[f64]) -> Vec<u8> {
    let mut idx: Vec<usize> = (0..window.len()).collect();
    idx.sort_by_key(|&i| (Reverse(OrdF(window[i])), i));
    idx.into_iter().map(|i| i as u8).collect()
}

struct OrdF(f64);
impl PartialEq for OrdF {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for OrdF {}
impl PartialOrd for OrdF {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Sliding oracle sequence of order `h`.
pub fn oracle_sequence(values: &[f64], h: usize) -> Vec<Vec<u8>> {
    values.windows(h + 1).map(oracle_pattern).collect()
}

pub fn reversed(p: &[u8]) -> Vec<u8> {
    p.iter().rev().copied().collect()
}

/// Oracle view of a pattern sequence with its reversals and empirical frequencies.
pub struct OracleSeq {
    pub pats: Vec<Vec<u8>>,
    pub revs: Vec<Vec<u8>>,
    pub freq: Vec<(Vec<u8>, f64)>,
}

impl OracleSeq {
    pub fn new(pats: Vec<Vec<u8>>) -> Self {
        let n = pats.len() as f64;
        let revs = pats.iter().map(|p| reversed(p)).collect();
        let mut support = pats.clone();
        support.sort();
        support.dedup();
        let freq = support
            .into_iter()
            .map(|p| {
                let c = pats.iter().filter(|q| **q == p).count() as f64;
                (p, c / n)
            })
            .collect();
        OracleSeq { pats, revs, freq }
    }

    pub fn freq_of(&self, p: &[u8]) -> f64 {
        self.freq
            .iter()
            .find(|(q, _)| q.as_slice() == p)
            .map_or(0.0, |(_, f)| *f)
    }
}

/// Counts of coincident and reflected positions by direct comparison.
pub fn oracle_counts(a: &OracleSeq, b: &OracleSeq) -> (u64, u64) {
    let mut eq = 0;
    let mut refl = 0;
    for i in 0..a.pats.len() {
        if a.pats[i] == b.pats[i] {
            eq += 1;
        }
        if a.pats[i] == b.revs[i] {
            refl += 1;
        }
    }
    (eq, refl)
}

/// Baselines by brute force over the support of `a`.
pub fn oracle_baselines(a: &OracleSeq, b: &OracleSeq) -> (f64, f64) {
    let mut eq = 0.0;
    let mut neq = 0.0;
    for (p, f) in &a.freq {
        eq += f * b.freq_of(p);
        neq += f * b.freq_of(&reversed(p));
    }
    (eq, neq)
}

/// Pattern of three points selected by the six increment conditions for `h = 2`.
pub fn increment_case(w: &[f64]) -> [u8; 3] {
    let d1 = w[1] - w[0];
    let d2 = w[2] - w[1];
    // the sum condition compares x2 with x0 directly to avoid rounding in d1 + d2
    let sum_pos = w[2] > w[0];
    match (d1 > 0.0, d2 > 0.0) {
        (true, true) => [2, 1, 0],
        (true, false) if sum_pos => [1, 2, 0],
        (true, false) => [1, 0, 2],
        (false, false) => [0, 1, 2],
        (false, true) if !sum_pos => [0, 2, 1],
        (false, true) => [2, 0, 1],
    }
}

/// Linear-interpolation quantile of a sample.
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

/// Central 99% band.
pub fn band99(samples: &[f64]) -> (f64, f64) {
    (quantile(samples, 0.005), quantile(samples, 0.995))
}

pub fn median(samples: &[f64]) -> f64 {
    quantile(samples, 0.5)
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

pub fn inside(v: f64, band: (f64, f64)) -> bool {
    band.0 <= v && v <= band.1
}
