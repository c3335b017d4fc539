use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::{seeded_rng, SimRng, StateVector, DISTRIBUTION_TOLERANCE};
use crate::{Error, Result};

/// Born-rule outcome probabilities over the basis of a measured register.
///
/// Outcome `k` is the integer formed by the measured qubits, the first
/// measured qubit being the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    probabilities: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("empty outcome set".into()));
        }
        if let Some(bad) = probabilities.iter().find(|p| !(**p >= 0.0 && **p <= 1.0 + DISTRIBUTION_TOLERANCE)) {
            return Err(Error::InvalidDistribution(format!("entry {bad} outside [0, 1]")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("mass {total} differs from 1")));
        }
        Ok(Self { probabilities })
    }

    /// Probability of outcome `index`; zero for indices past the end.
    pub fn get(&self, index: usize) -> f64 {
        self.probabilities.get(index).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Total probability of the outcomes selected by `keep`.
    pub fn mass_where(&self, mut keep: impl FnMut(usize) -> bool) -> f64 {
        self.probabilities.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, p)| p).sum()
    }

    /// Most likely outcome (lowest index on ties).
    pub fn mode(&self) -> usize {
        self.probabilities
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bp), (i, &p)| if p > bp { (i, p) } else { (bi, bp) })
            .0
    }

    pub fn sampler(&self) -> Sampler {
        Sampler {
            weights: WeightedIndex::new(&self.probabilities).expect("validated distribution has positive mass"),
        }
    }
}

/// Reusable sampler over a [`MeasurementDistribution`].
#[derive(Debug, Clone)]
pub struct Sampler {
    weights: WeightedIndex<f64>,
}

impl Sampler {
    pub fn draw(&self, rng: &mut SimRng) -> usize {
        self.weights.sample(rng)
    }
}

/// Draws one outcome from `d` using a generator seeded with `rng_seed`.
pub fn sample(d: &MeasurementDistribution, rng_seed: u64) -> usize {
    d.sampler().draw(&mut seeded_rng(rng_seed))
}

/// Born distribution of measuring `qubits` (in the given order) on `s`,
/// tracing out the rest.
pub fn marginal_distribution(s: &StateVector, qubits: &[usize]) -> Result<MeasurementDistribution> {
    let n = s.num_qubits();
    let mut seen = vec![false; n];
    for &q in qubits {
        if q >= n {
            return Err(Error::InvalidQubit { index: q, num_qubits: n });
        }
        if seen[q] {
            return Err(Error::InvalidParameter(format!("qubit {q} listed twice")));
        }
        seen[q] = true;
    }
    let mut probabilities = vec![0.0; 1 << qubits.len()];
    for (index, amp) in s.amplitudes().iter().enumerate() {
        let outcome = qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1));
        probabilities[outcome] += amp.norm_sqr();
    }
    MeasurementDistribution::new(probabilities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::UnitaryOp;

    #[test]
    fn marginal_of_product_and_bell_states() {
        let plus = UnitaryOp::hadamard().apply(&StateVector::zero(1)).unwrap();
        let s = StateVector::zero(1).tensor(&plus);
        let d = marginal_distribution(&s, &[0]).unwrap();
        assert!((d.get(0) - 1.0).abs() < 1e-15);
        assert_eq!(d.get(1), 0.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let d = marginal_distribution(&bell, &[0]).unwrap();
        assert!((d.get(0) - 0.5).abs() < 1e-15 && (d.get(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn marginal_respects_requested_order() {
        // |q0 q1 q2> = |1 0 0>; measuring (2, 0) gives bits "0 1" = 1.
        let s = StateVector::basis(3, 0b100).unwrap();
        let d = marginal_distribution(&s, &[2, 0]).unwrap();
        assert_eq!(d.get(1), 1.0);
    }

    #[test]
    fn marginal_rejects_bad_indices() {
        let s = StateVector::zero(2);
        assert!(matches!(marginal_distribution(&s, &[2]), Err(Error::InvalidQubit { index: 2, .. })));
        assert!(marginal_distribution(&s, &[1, 1]).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(MeasurementDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(MeasurementDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(MeasurementDistribution::new(vec![]).is_err());
        assert!(MeasurementDistribution::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn point_mass_always_sampled() {
        let d = MeasurementDistribution::new(vec![1.0]).unwrap();
        for seed in 0..50 {
            assert_eq!(sample(&d, seed), 0);
        }
        let d = MeasurementDistribution::new(vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(sample(&d, 9), 2);
    }

    #[test]
    fn fair_coin_frequency() {
        // 1e5 draws: sigma = sqrt(0.25 / 1e5) = 0.00158, so 3 sigma < 0.01.
        let d = MeasurementDistribution::new(vec![0.5, 0.5]).unwrap();
        let sampler = d.sampler();
        let mut rng = seeded_rng(2024);
        let zeros = (0..100_000).filter(|_| sampler.draw(&mut rng) == 0).count();
        let freq = zeros as f64 / 1e5;
        assert!((freq - 0.5).abs() < 0.01, "frequency {freq}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let d = MeasurementDistribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a: Vec<usize> = (0..100).map(|s| sample(&d, s)).collect();
        let b: Vec<usize> = (0..100).map(|s| sample(&d, s)).collect();
        assert_eq!(a, b);
    }
}
