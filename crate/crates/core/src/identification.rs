//! Learning an unknown linear function with weights in {-1, +1}.
//!
//! Weight vectors are bit rows where a set bit means `+1`. Inputs are bit rows
//! over {0, 1}. The error of a candidate on a sample `S` is
//! `sum over x in S of |f(x) - f_target(x)|`.

use crate::boolean::BitRow;

/// Candidate and target weights differ at these positions, split by the candidate's sign.
struct Mismatch {
    /// Candidate `+1`, target `-1`.
    over: Vec<u64>,
    /// Candidate `-1`, target `+1`.
    under: Vec<u64>,
}

fn mismatch(weights: &BitRow, target: &BitRow) -> Mismatch {
    assert_eq!(weights.len(), target.len(), "weight vectors differ in length");
    let over = weights.words().iter().zip(target.words()).map(|(w, t)| w & !t).collect();
    let under = weights.words().iter().zip(target.words()).map(|(w, t)| !w & t).collect();
    Mismatch { over, under }
}

/// `|f(x) - f_target(x)|` for one input.
fn gap(m: &Mismatch, x: &[u64]) -> u64 {
    let mut up = 0i64;
    let mut down = 0i64;
    for ((o, u), xi) in m.over.iter().zip(&m.under).zip(x) {
        up += (o & xi).count_ones() as i64;
        down += (u & xi).count_ones() as i64;
    }
    2 * (up - down).unsigned_abs()
}

/// Sample error of `weights` against `target`.
pub fn identification_error(weights: &BitRow, target: &BitRow, samples: &[BitRow]) -> u64 {
    let m = mismatch(weights, target);
    samples.iter().map(|x| gap(&m, x.words())).sum()
}

/// Number of positions where the weights disagree.
pub fn wrong_weights(weights: &BitRow, target: &BitRow) -> usize {
    weights
        .words()
        .iter()
        .zip(target.words())
        .map(|(w, t)| (w ^ t).count_ones() as usize)
        .sum()
}

/// Exact `E|f(x) - f_target(x)|` under uniform inputs.
///
/// With `a` positions of one kind of mismatch and `b` of the other, the gap is
/// `2 |A - B|` for independent `A ~ Bin(a, 1/2)`, `B ~ Bin(b, 1/2)`, and
/// `A - B` has the law of `Bin(a + b, 1/2) - b`.
pub fn expected_error(weights: &BitRow, target: &BitRow) -> f64 {
    let m = mismatch(weights, target);
    let a: u32 = m.over.iter().map(|w| w.count_ones()).sum();
    let b: u32 = m.under.iter().map(|w| w.count_ones()).sum();
    let total = (a + b) as usize;
    if total == 0 {
        return 0.0;
    }
    let mut log_choose = 0.0f64;
    let ln_half = (0.5f64).ln() * total as f64;
    let mut sum = 0.0;
    for k in 0..=total {
        if k > 0 {
            log_choose += ((total - k + 1) as f64).ln() - (k as f64).ln();
        }
        sum += (log_choose + ln_half).exp() * (k as f64 - b as f64).abs();
    }
    2.0 * sum
}
