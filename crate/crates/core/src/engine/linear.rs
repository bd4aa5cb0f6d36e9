//! Linear GP for identifying a ±1 weight vector from sampled inputs.

use crate::boolean::BitRow;
use crate::identification::{expected_error, identification_error, wrong_weights};
use crate::rng::RandomSource;

use super::RunRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearGpConfig {
    pub n: usize,
    /// Inputs drawn per generation; parent and offspring share them.
    pub sample_size: usize,
    /// Stop once the expected error drops below this value (or reaches zero).
    /// With `delta = 1` this means exact identification, because a single
    /// wrong weight has expected error exactly 1.
    pub delta: f64,
    pub budget: u64,
}

#[derive(Clone, Debug)]
pub struct LinearOutcome {
    pub record: RunRecord,
    pub weights: BitRow,
    pub target: BitRow,
}

/// Runs from uniform random weights against a uniform random target.
pub fn run_linear_gp(config: &LinearGpConfig, rng: &mut RandomSource) -> LinearOutcome {
    let target = BitRow::random(config.n, rng);
    let weights = BitRow::random(config.n, rng);
    run_linear_gp_from(config, weights, target, rng)
}

/// Each generation flips one uniform weight and keeps the offspring unless it
/// is strictly worse on a fresh shared sample.
pub fn run_linear_gp_from(
    config: &LinearGpConfig,
    mut weights: BitRow,
    target: BitRow,
    rng: &mut RandomSource,
) -> LinearOutcome {
    let n = config.n;
    let finished = |w: &BitRow| {
        let e = expected_error(w, &target);
        e == 0.0 || e < config.delta
    };
    let mut record = RunRecord {
        iterations: 0,
        fitness_evals: 0,
        row_evals: 0,
        t_max: n,
        final_size: n,
        final_error: 0.0,
        generalization_error: None,
        success: false,
        seed: rng.seed(),
        trajectory: Vec::new(),
    };
    let mut done = finished(&weights);
    let mut sample: Vec<BitRow> = Vec::with_capacity(config.sample_size);
    while !done && record.iterations < config.budget {
        record.iterations += 1;
        let flip = rng.index(n);
        let mut child = weights.clone();
        child.set(flip, !child.get(flip));
        sample.clear();
        sample.extend((0..config.sample_size).map(|_| BitRow::random(n, rng)));
        let parent_err = identification_error(&weights, &target, &sample);
        let child_err = identification_error(&child, &target, &sample);
        record.fitness_evals += 2;
        record.row_evals += 2 * config.sample_size as u64;
        if child_err <= parent_err {
            weights = child;
            done = finished(&weights);
        }
    }
    record.success = done;
    record.final_error = wrong_weights(&weights, &target) as f64;
    record.generalization_error = Some(expected_error(&weights, &target));
    LinearOutcome { record, weights, target }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_start_stops_immediately() {
        let mut rng = RandomSource::new(1);
        let target = BitRow::random(20, &mut rng);
        let config = LinearGpConfig { n: 20, sample_size: 10, delta: 0.0, budget: 100 };
        let out = run_linear_gp_from(&config, target.clone(), target, &mut rng);
        assert_eq!(out.record.iterations, 0);
        assert!(out.record.success);
    }

    #[test]
    fn correcting_flip_is_always_kept() {
        let mut rng = RandomSource::new(2);
        let n = 30;
        let target = BitRow::random(n, &mut rng);
        let mut kept = 0;
        let trials = 300;
        for _ in 0..trials {
            let mut parent = target.clone();
            parent.set(7, !parent.get(7));
            let mut child = parent.clone();
            child.set(7, !child.get(7));
            let sample: Vec<BitRow> = (0..10_000).map(|_| BitRow::random(n, &mut rng)).collect();
            if identification_error(&child, &target, &sample) <= identification_error(&parent, &target, &sample) {
                kept += 1;
            }
        }
        assert!(kept as f64 / trials as f64 >= 0.99);
    }

    #[test]
    fn identifies_small_targets() {
        let mut rng = RandomSource::new(3);
        let n = 12;
        let config = LinearGpConfig {
            n,
            sample_size: (2.0 * n as f64 * (n as f64).ln()).ceil() as usize,
            delta: 1.0,
            budget: 40 * (n * n) as u64,
        };
        for _ in 0..10 {
            let out = run_linear_gp(&config, &mut rng);
            assert!(out.record.success);
            assert_eq!(out.weights, out.target);
        }
    }
}
