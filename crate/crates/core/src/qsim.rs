//! Simulated search register.
//!
//! The joint state of the sequence and position registers is kept as one
//! real amplitude per database window. The oracle is diagonal in that
//! basis and the diffusion reflects about the uniform vector, which lies in
//! the same span, so the `n_prime`-dimensional simulation is exact.

use rand::Rng;
use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::seqdb::HammingTable;

/// Maximum tolerated drift of the squared norm.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Phase-flip target: every window at Hamming distance `target_distance`
/// that is not in `excluded`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarkPredicate {
    pub target_distance: u32,
    pub excluded: BTreeSet<usize>,
}

impl MarkPredicate {
    pub fn distance(n: u32) -> Self {
        Self {
            target_distance: n,
            excluded: BTreeSet::new(),
        }
    }

    pub fn with_excluded(n: u32, excluded: BTreeSet<usize>) -> Self {
        Self {
            target_distance: n,
            excluded,
        }
    }

    pub fn is_marked(&self, table: &HammingTable, i: usize) -> bool {
        table.get(i) == Some(self.target_distance) && !self.excluded.contains(&i)
    }

    pub fn marked_positions(&self, table: &HammingTable) -> Vec<usize> {
        table
            .positions_at(self.target_distance)
            .into_iter()
            .filter(|i| !self.excluded.contains(i))
            .collect()
    }

    pub fn count(&self, table: &HammingTable) -> usize {
        self.marked_positions(table).len()
    }
}

/// Rotation angle per iteration and initial offset for a single target
/// among `n_prime` windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverPrediction {
    pub n_prime: usize,
    /// `sin(theta) = 2 sqrt(n' - 1) / n'`
    pub theta: f64,
    /// `cos(alpha) = 1 / sqrt(n')`
    pub alpha: f64,
    pub k_max: u64,
}

impl GroverPrediction {
    pub fn new(n_prime: usize) -> Result<Self> {
        if n_prime < 2 {
            return Err(Error::Domain(n_prime));
        }
        let n = n_prime as f64;
        // cos(theta) = (n' - 2) / n' is the diagonal of the 2x2 rotation
        let theta = (2.0 * (n - 1.0).sqrt()).atan2(n - 2.0);
        let alpha = (n - 1.0).sqrt().atan2(1.0);
        let mut pred = Self {
            n_prime,
            theta,
            alpha,
            k_max: 0,
        };
        pred.k_max = pred.argmax_k();
        Ok(pred)
    }

    /// Target amplitude after `k` iterations, `cos(k theta - alpha)`.
    pub fn amplitude(&self, k: u64) -> f64 {
        (k as f64 * self.theta - self.alpha).cos()
    }

    pub fn probability(&self, k: u64) -> f64 {
        self.amplitude(k).powi(2)
    }

    fn argmax_k(&self) -> u64 {
        let upper = (FRAC_PI_2 * (self.n_prime as f64).sqrt()).ceil() as u64;
        let mut best_k = 1;
        let mut best = self.amplitude(1).abs();
        for k in 2..=upper {
            let a = self.amplitude(k).abs();
            if a > best + 1e-12 {
                best = a;
                best_k = k;
            }
        }
        best_k
    }
}

pub fn predicted_amplitude(n_prime: usize, k: u64) -> Result<f64> {
    Ok(GroverPrediction::new(n_prime)?.amplitude(k))
}

/// Iteration count with the largest single-target amplitude, searched over
/// `1..=ceil(pi/2 * sqrt(n'))`; ties go to the smallest count.
pub fn optimal_k(n_prime: usize) -> Result<u64> {
    Ok(GroverPrediction::new(n_prime)?.k_max)
}

/// Total marked probability after `k` iterations with `marked` of
/// `n_prime` windows flagged: `sin^2((2k + 1) theta_t)`,
/// `sin^2(theta_t) = marked / n'`.
pub fn marked_probability_closed_form(n_prime: usize, marked: usize, k: u64) -> f64 {
    if marked == 0 || n_prime == 0 {
        return 0.0;
    }
    let theta_t = (marked as f64 / n_prime as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta_t).sin().powi(2)
}

/// Real amplitudes over the joint basis `|window_i> (x) |i>`.
#[derive(Debug, Clone)]
pub struct SearchState<'t> {
    amplitudes: Vec<f64>,
    table: &'t HammingTable,
    oracle_calls: u64,
}

impl<'t> SearchState<'t> {
    /// Uniform superposition over all windows.
    pub fn init_uniform(table: &'t HammingTable) -> Result<Self> {
        let n = table.n_prime();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        Ok(Self {
            amplitudes: vec![1.0 / (n as f64).sqrt(); n],
            table,
            oracle_calls: 0,
        })
    }

    pub fn from_amplitudes(table: &'t HammingTable, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != table.n_prime() {
            return Err(Error::LengthMismatch {
                expected: table.n_prime(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes,
            table,
            oracle_calls: 0,
        })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn table(&self) -> &'t HammingTable {
        self.table
    }

    pub fn oracle_calls(&self) -> u64 {
        self.oracle_calls
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn probability(&self, i: usize) -> f64 {
        self.amplitudes.get(i).map_or(0.0, |a| a * a)
    }

    pub fn marked_probability(&self, mark: &MarkPredicate) -> f64 {
        mark.marked_positions(self.table)
            .into_iter()
            .map(|i| self.probability(i))
            .fold(0.0, |acc, p| acc + p)
    }

    /// `I_S(n)`: negate every marked amplitude. Counts one oracle query.
    pub fn apply_oracle_flip(&mut self, mark: &MarkPredicate) {
        let marked = mark.marked_positions(self.table);
        self.flip(&marked);
    }

    fn flip(&mut self, marked: &[usize]) {
        for &i in marked {
            self.amplitudes[i] = -self.amplitudes[i];
        }
        self.oracle_calls += 1;
    }

    /// `-I_H`: inversion about the average amplitude.
    pub fn apply_diffusion(&mut self) {
        let mean = self.amplitudes.iter().sum::<f64>() / self.amplitudes.len() as f64;
        let twice = 2.0 * mean;
        for a in &mut self.amplitudes {
            *a = twice - *a;
        }
    }

    /// One iteration of `U = -I_H I_S(n)`.
    pub fn grover_step(&mut self, mark: &MarkPredicate) {
        self.apply_oracle_flip(mark);
        self.apply_diffusion();
        self.debug_check_norm();
    }

    pub fn evolve(&mut self, mark: &MarkPredicate, k: u64) {
        let marked = mark.marked_positions(self.table);
        for _ in 0..k {
            self.flip(&marked);
            self.apply_diffusion();
            self.debug_check_norm();
        }
    }

    fn debug_check_norm(&self) {
        debug_assert!(
            (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE,
            "norm drifted to {}",
            self.norm_sqr()
        );
    }

    /// Samples a window index with probability `amplitude^2` and consumes
    /// the state. The caller reads `T[i]` and `i` classically.
    pub fn measure<R: Rng + ?Sized>(self, rng: &mut R) -> usize {
        sample_index(self.amplitudes.iter().map(|a| a * a), rng)
    }
}

/// Inverse-CDF walk over a sequence of probabilities. Falls back to the
/// last index with nonzero weight if rounding leaves the draw uncovered.
fn sample_index<R, I>(weights: I, rng: &mut R) -> usize
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = f64>,
{
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut last_nonzero = 0;
    for (i, w) in weights.into_iter().enumerate() {
        if w > 0.0 {
            last_nonzero = i;
        }
        cumulative += w;
        if u < cumulative {
            return i;
        }
    }
    last_nonzero
}

#[derive(Debug, Clone)]
struct AmplitudeClass {
    distance: u32,
    marked: bool,
    positions: Vec<usize>,
    amplitude: f64,
}

/// Compressed evolution: windows sharing `(T[i], excluded)` keep equal
/// amplitudes under every step, so one amplitude per class suffices.
/// The class split is fixed by the mark given at construction.
#[derive(Debug, Clone)]
pub struct ClassState<'t> {
    classes: Vec<AmplitudeClass>,
    table: &'t HammingTable,
    mark: MarkPredicate,
    oracle_calls: u64,
}

impl<'t> ClassState<'t> {
    pub fn init_uniform(table: &'t HammingTable, mark: &MarkPredicate) -> Result<Self> {
        let n = table.n_prime();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        let mut by_key: std::collections::BTreeMap<(u32, bool), Vec<usize>> = Default::default();
        for (i, &d) in table.values().iter().enumerate() {
            by_key
                .entry((d, mark.excluded.contains(&i)))
                .or_default()
                .push(i);
        }
        let amp = 1.0 / (n as f64).sqrt();
        let classes = by_key
            .into_iter()
            .map(|((distance, excluded), positions)| AmplitudeClass {
                distance,
                marked: distance == mark.target_distance && !excluded,
                positions,
                amplitude: amp,
            })
            .collect();
        Ok(Self {
            classes,
            table,
            mark: mark.clone(),
            oracle_calls: 0,
        })
    }

    pub fn reset(&mut self) {
        let amp = 1.0 / (self.table.n_prime() as f64).sqrt();
        for c in &mut self.classes {
            c.amplitude = amp;
        }
        self.oracle_calls = 0;
    }

    pub fn mark(&self) -> &MarkPredicate {
        &self.mark
    }

    pub fn oracle_calls(&self) -> u64 {
        self.oracle_calls
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Amplitude of window `i`.
    pub fn amplitude(&self, i: usize) -> Option<f64> {
        self.classes
            .iter()
            .find(|c| c.positions.binary_search(&i).is_ok())
            .map(|c| c.amplitude)
    }

    /// Expands back into a dense amplitude vector.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.table.n_prime()];
        for c in &self.classes {
            for &i in &c.positions {
                out[i] = c.amplitude;
            }
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.classes
            .iter()
            .map(|c| c.positions.len() as f64 * c.amplitude * c.amplitude)
            .sum()
    }

    pub fn marked_probability(&self) -> f64 {
        self.classes
            .iter()
            .filter(|c| c.marked)
            .map(|c| c.positions.len() as f64 * c.amplitude * c.amplitude)
            .fold(0.0, |acc, p| acc + p)
    }

    /// Probability of reading each Hamming distance from the sequence register.
    pub fn distance_distribution(&self) -> Vec<(u32, f64)> {
        let mut out: Vec<(u32, f64)> = Vec::new();
        for c in &self.classes {
            let p = c.positions.len() as f64 * c.amplitude * c.amplitude;
            match out.last_mut() {
                Some((d, acc)) if *d == c.distance => *acc += p,
                _ => out.push((c.distance, p)),
            }
        }
        out
    }

    pub fn grover_step(&mut self) {
        for c in &mut self.classes {
            if c.marked {
                c.amplitude = -c.amplitude;
            }
        }
        self.oracle_calls += 1;

        let n = self.table.n_prime() as f64;
        let mean = self
            .classes
            .iter()
            .map(|c| c.positions.len() as f64 * c.amplitude)
            .sum::<f64>()
            / n;
        for c in &mut self.classes {
            c.amplitude = 2.0 * mean - c.amplitude;
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
    }

    pub fn evolve(&mut self, k: u64) {
        for _ in 0..k {
            self.grover_step();
        }
    }

    /// Picks a class by its total weight, then a window uniformly inside it.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let class = sample_index(
            self.classes
                .iter()
                .map(|c| c.positions.len() as f64 * c.amplitude * c.amplitude),
            rng,
        );
        let positions = &self.classes[class].positions;
        positions[rng.gen_range(0..positions.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::seqdb::{Alphabet, HammingMode};
    use proptest::prelude::*;

    /// Table with distance 0 at `targets` and 1 everywhere else.
    fn table_with_targets(n: usize, targets: &[usize]) -> HammingTable {
        let mut values = vec![1; n];
        for &t in targets {
            values[t] = 0;
        }
        HammingTable::from_values(values, HammingMode::Residue, Alphabet::Dna, 1).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn uniform_init() {
        let t = table_with_targets(4, &[]);
        let s = SearchState::init_uniform(&t).unwrap();
        assert_eq!(s.amplitudes(), &[0.5; 4]);
        assert_eq!(s.oracle_calls(), 0);

        let one = table_with_targets(1, &[]);
        assert_eq!(SearchState::init_uniform(&one).unwrap().amplitudes(), &[1.0]);
    }

    #[test]
    fn oracle_flip_cases() {
        let t = table_with_targets(4, &[2]);
        let mut s = SearchState::init_uniform(&t).unwrap();
        s.apply_oracle_flip(&MarkPredicate::distance(0));
        assert_eq!(s.amplitudes(), &[0.5, 0.5, -0.5, 0.5]);
        assert_eq!(s.oracle_calls(), 1);

        let mut none = SearchState::init_uniform(&t).unwrap();
        none.apply_oracle_flip(&MarkPredicate::distance(7));
        assert_eq!(none.amplitudes(), &[0.5; 4]);

        let all = table_with_targets(4, &[0, 1, 2, 3]);
        let mut s = SearchState::init_uniform(&all).unwrap();
        s.apply_oracle_flip(&MarkPredicate::distance(0));
        assert_eq!(s.amplitudes(), &[-0.5; 4]);
    }

    #[test]
    fn excluded_positions_are_not_flipped() {
        let t = table_with_targets(4, &[1, 2]);
        let mut s = SearchState::init_uniform(&t).unwrap();
        s.apply_oracle_flip(&MarkPredicate::with_excluded(0, BTreeSet::from([1])));
        assert_eq!(s.amplitudes(), &[0.5, 0.5, -0.5, 0.5]);
    }

    #[test]
    fn diffusion_cases() {
        let t = table_with_targets(4, &[2]);
        let mut s = SearchState::init_uniform(&t).unwrap();
        s.apply_diffusion();
        assert_close(s.amplitudes(), &[0.5; 4], 1e-15);

        let mut s = SearchState::from_amplitudes(&t, vec![0.5, 0.5, -0.5, 0.5]).unwrap();
        s.apply_diffusion();
        assert_close(s.amplitudes(), &[0.0, 0.0, 1.0, 0.0], 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_step_finds_one_of_four() {
        let t = table_with_targets(4, &[3]);
        let mut s = SearchState::init_uniform(&t).unwrap();
        s.grover_step(&MarkPredicate::distance(0));
        assert_close(s.amplitudes(), &[0.0, 0.0, 0.0, 1.0], 1e-15);
    }

    #[test]
    fn step_without_or_with_all_marks() {
        let t = table_with_targets(8, &[]);
        let mut s = SearchState::init_uniform(&t).unwrap();
        s.grover_step(&MarkPredicate::distance(0));
        assert_close(s.amplitudes(), &[1.0 / 8f64.sqrt(); 8], 1e-15);

        let all = table_with_targets(8, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let mut s = SearchState::init_uniform(&all).unwrap();
        s.grover_step(&MarkPredicate::distance(0));
        let a0 = s.amplitudes()[0].abs();
        assert!((a0 - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        assert!(s.amplitudes().iter().all(|&a| (a - s.amplitudes()[0]).abs() < 1e-15));
    }

    #[test]
    fn evolve_counts_calls() {
        let t = table_with_targets(1024, &[17]);
        let mut s = SearchState::init_uniform(&t).unwrap();
        s.evolve(&MarkPredicate::distance(0), 0);
        assert_eq!(s.oracle_calls(), 0);
        assert_eq!(s.amplitudes()[0], 1.0 / 32.0);

        s.evolve(&MarkPredicate::distance(0), 25);
        assert_eq!(s.oracle_calls(), 25);
        assert!(s.probability(17) >= 0.99);

        let peak = s.probability(17);
        s.evolve(&MarkPredicate::distance(0), 25);
        assert!(s.probability(17) < peak - 0.5);
    }

    #[test]
    fn prediction_values() {
        assert!((predicted_amplitude(4, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((predicted_amplitude(4, 0).unwrap() - 0.5).abs() < 1e-15);
        let a = predicted_amplitude(1024, 25).unwrap();
        assert!(a > 0.995 && a <= 1.0, "{a}");
        assert_eq!(predicted_amplitude(1, 0), Err(Error::Domain(1)));

        let p = GroverPrediction::new(4).unwrap();
        assert!((p.theta - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
        assert!((p.alpha - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn prediction_angles_match_definitions() {
        for n in [2usize, 3, 4, 10, 100, 4096, 1 << 20] {
            let p = GroverPrediction::new(n).unwrap();
            let nf = n as f64;
            assert!((p.theta.sin() - 2.0 * (nf - 1.0).sqrt() / nf).abs() < 1e-12);
            assert!((p.alpha.cos() - 1.0 / nf.sqrt()).abs() < 1e-12);
            assert!(p.theta > 0.0 && p.theta <= FRAC_PI_2 + 1e-15);
            assert!(p.alpha > 0.0 && p.alpha <= FRAC_PI_2);
        }
    }

    /// Brute-force argmax of |cos(k theta - alpha)| with angles from
    /// asin/acos, independent of the atan2 route used by the predictor.
    fn brute_optimal_k(n: usize) -> u64 {
        let nf = n as f64;
        let theta = (2.0 * (nf - 1.0).sqrt() / nf).asin();
        let alpha = (1.0 / nf.sqrt()).acos();
        let upper = (FRAC_PI_2 * nf.sqrt()).ceil() as u64;
        let mut best = (1, f64::MIN);
        for k in 1..=upper {
            let v = (k as f64 * theta - alpha).cos().abs();
            if v > best.1 + 1e-9 {
                best = (k, v);
            }
        }
        best.0
    }

    #[test]
    fn optimal_k_values() {
        assert_eq!(optimal_k(4).unwrap(), 1);
        assert_eq!(optimal_k(1024).unwrap(), 25);
        assert_eq!(optimal_k(2).unwrap(), 1);
        assert_eq!(optimal_k(256).unwrap(), 12);
        assert_eq!(optimal_k(16).unwrap(), 3);
        assert!(optimal_k(1).is_err());
        for n in 2..600 {
            assert_eq!(optimal_k(n).unwrap(), brute_optimal_k(n), "n' = {n}");
        }
    }

    #[test]
    fn optimal_k_tracks_quarter_pi_sqrt() {
        for n in [1usize << 10, 1 << 14, 1 << 18] {
            let k = optimal_k(n).unwrap() as f64;
            let approx = std::f64::consts::FRAC_PI_4 * (n as f64).sqrt();
            assert!((k - approx).abs() <= 1.0, "n' = {n}: {k} vs {approx}");
        }
    }

    #[test]
    fn measure_deterministic_state() {
        let t = table_with_targets(10, &[7]);
        for seed in 0..50 {
            let mut amps = vec![0.0; 10];
            amps[7] = 1.0;
            let s = SearchState::from_amplitudes(&t, amps).unwrap();
            assert_eq!(s.measure(&mut rng_from_seed(seed)), 7);
        }
    }

    #[test]
    fn measure_uniform_frequencies() {
        let t = table_with_targets(4, &[]);
        let mut rng = rng_from_seed(42);
        let mut counts = [0usize; 4];
        let trials = 100_000;
        for _ in 0..trials {
            let s = SearchState::init_uniform(&t).unwrap();
            counts[s.measure(&mut rng)] += 1;
        }
        for c in counts {
            let f = c as f64 / trials as f64;
            assert!((f - 0.25).abs() <= 0.01, "{counts:?}");
        }
    }

    #[test]
    fn measure_after_amplification() {
        let t = table_with_targets(256, &[99]);
        let k = optimal_k(256).unwrap();
        let mut rng = rng_from_seed(3);
        let hits = (0..10_000)
            .filter(|_| {
                let mut s = SearchState::init_uniform(&t).unwrap();
                s.evolve(&MarkPredicate::distance(0), k);
                s.measure(&mut rng) == 99
            })
            .count();
        assert!(hits as f64 / 10_000.0 >= 0.98, "{hits}");
    }

    #[test]
    fn from_amplitudes_validation() {
        let t = table_with_targets(2, &[]);
        assert!(matches!(
            SearchState::from_amplitudes(&t, vec![1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            SearchState::from_amplitudes(&t, vec![1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn two_by_two_rotation_matrix() {
        for n in [3usize, 4, 16, 100, 1024] {
            let target = n / 3;
            let t = table_with_targets(n, &[target]);
            let mark = MarkPredicate::distance(0);
            let s_vec: Vec<f64> = (0..n).map(|i| if i == target { 1.0 } else { 0.0 }).collect();
            let r_amp = 1.0 / ((n - 1) as f64).sqrt();
            let r_vec: Vec<f64> = (0..n).map(|i| if i == target { 0.0 } else { r_amp }).collect();

            let apply = |v: &Vec<f64>| {
                let mut s = SearchState::from_amplitudes(&t, v.clone()).unwrap();
                s.grover_step(&mark);
                s.amplitudes().to_vec()
            };
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            let us = apply(&s_vec);
            let ur = apply(&r_vec);
            // column j of U is U applied to basis vector j
            let m = [[dot(&s_vec, &us), dot(&s_vec, &ur)], [dot(&r_vec, &us), dot(&r_vec, &ur)]];
            let p = GroverPrediction::new(n).unwrap();
            let (c, sn) = (p.theta.cos(), p.theta.sin());
            let expect = [[c, sn], [-sn, c]];
            for r in 0..2 {
                for col in 0..2 {
                    assert!((m[r][col] - expect[r][col]).abs() <= 1e-12, "n'={n} {m:?}");
                }
            }
        }
    }

    #[test]
    fn class_state_matches_dense() {
        let values = vec![0, 3, 1, 0, 2, 1, 1, 3, 0, 2, 2, 2, 1];
        let t = HammingTable::from_values(values, HammingMode::Residue, Alphabet::Dna, 3).unwrap();
        let mark = MarkPredicate::with_excluded(1, BTreeSet::from([5]));
        let mut dense = SearchState::init_uniform(&t).unwrap();
        let mut classes = ClassState::init_uniform(&t, &mark).unwrap();
        assert_eq!(classes.class_count(), 5);
        for _ in 0..20 {
            dense.grover_step(&mark);
            classes.grover_step();
            assert_close(dense.amplitudes(), &classes.to_dense(), 1e-13);
            assert!((dense.marked_probability(&mark) - classes.marked_probability()).abs() < 1e-13);
        }
        assert_eq!(dense.oracle_calls(), classes.oracle_calls());
        let dist: f64 = classes.distance_distribution().iter().map(|(_, p)| p).sum();
        assert!((dist - 1.0).abs() < 1e-12);

        classes.reset();
        assert_eq!(classes.oracle_calls(), 0);
        assert_eq!(classes.amplitude(0), Some(1.0 / 13f64.sqrt()));
    }

    #[test]
    fn class_state_measurement_frequencies() {
        let t = table_with_targets(64, &[5, 40]);
        let mark = MarkPredicate::distance(0);
        let mut state = ClassState::init_uniform(&t, &mark).unwrap();
        state.evolve(3);
        let p = state.marked_probability();
        let mut rng = rng_from_seed(11);
        let trials = 20_000;
        let hits = (0..trials)
            .filter(|_| matches!(state.measure(&mut rng), 5 | 40))
            .count();
        assert!((hits as f64 / trials as f64 - p).abs() < 0.01);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn norm_is_preserved(
            values in prop::collection::vec(0u32..4, 1..200),
            target in 0u32..4,
            steps in 0u64..60,
        ) {
            let t = HammingTable::from_values(values, HammingMode::Residue, Alphabet::Dna, 4).unwrap();
            let mut s = SearchState::init_uniform(&t).unwrap();
            let mark = MarkPredicate::distance(target);
            for _ in 0..steps {
                s.grover_step(&mark);
                prop_assert!((s.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
            }
            prop_assert_eq!(s.oracle_calls(), steps);
        }

        #[test]
        fn equal_classes_keep_equal_amplitudes(
            values in prop::collection::vec(0u32..4, 2..120),
            target in 0u32..4,
            steps in 1u64..30,
        ) {
            let t = HammingTable::from_values(values.clone(), HammingMode::Residue, Alphabet::Dna, 4).unwrap();
            let mark = MarkPredicate::distance(target);
            let mut s = SearchState::init_uniform(&t).unwrap();
            for _ in 0..steps {
                s.grover_step(&mark);
                let a = s.amplitudes();
                for i in 0..a.len() {
                    for j in 0..i {
                        if mark.is_marked(&t, i) == mark.is_marked(&t, j) {
                            prop_assert!((a[i] - a[j]).abs() < 1e-12);
                        }
                    }
                }
            }
        }

        #[test]
        fn single_target_follows_closed_form(n in 2usize..1500, seed in any::<u64>()) {
            let target = (seed % n as u64) as usize;
            let t = table_with_targets(n, &[target]);
            let mark = MarkPredicate::distance(0);
            let pred = GroverPrediction::new(n).unwrap();
            let mut s = SearchState::init_uniform(&t).unwrap();
            let k_hi = (3.0 * (n as f64).sqrt()) as u64;
            for k in 0..=k_hi {
                prop_assert!((s.amplitudes()[target] - pred.amplitude(k)).abs() <= 1e-10);
                s.grover_step(&mark);
            }
        }

        #[test]
        fn multi_target_sinusoid(n in 2usize..700, frac in 0.0f64..1.0, k in 0u64..40) {
            let marked = ((n as f64 * frac) as usize).max(1);
            let targets: Vec<usize> = (0..marked).map(|i| (i * 7919) % n).collect::<BTreeSet<_>>().into_iter().collect();
            let t = table_with_targets(n, &targets);
            let mark = MarkPredicate::distance(0);
            let mut s = SearchState::init_uniform(&t).unwrap();
            s.evolve(&mark, k);
            let expected = marked_probability_closed_form(n, targets.len(), k);
            prop_assert!((s.marked_probability(&mark) - expected).abs() <= 1e-10);
        }
    }
}
