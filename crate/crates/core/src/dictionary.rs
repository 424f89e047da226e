//! ReLU^k shallow-network dictionary `{ max(0, ωx + b)^k : ω = ±1, b ∈ [c1, c2] }`
//! sampled on a finite bias lattice, with exhaustive greedy selection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracop::Grid;
use crate::scalar::Real;

/// One neuron `σ_k(ωx + b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neuron<T> {
    /// Direction, `+1` or `-1`.
    pub omega: T,
    pub bias: T,
    pub power: u32,
}

impl<T: Real> Neuron<T> {
    pub fn new(omega: T, bias: T, power: u32) -> Self {
        debug_assert!(omega == T::one() || omega == -T::one());
        Self { omega, bias, power }
    }

    #[inline]
    fn pre_activation(&self, x: T) -> T {
        self.omega * x + self.bias
    }

    /// `max(0, ωx + b)^k`.
    #[inline]
    pub fn eval(&self, x: T) -> T {
        let z = self.pre_activation(x);
        if z > T::zero() {
            z.powi(self.power as i32)
        } else {
            T::zero()
        }
    }

    /// `k ω max(0, ωx + b)^{k-1}`; zero at and left of the kink.
    #[inline]
    pub fn deriv(&self, x: T) -> T {
        let z = self.pre_activation(x);
        if z > T::zero() {
            T::from_count(self.power as usize) * self.omega * z.powi(self.power as i32 - 1)
        } else {
            T::zero()
        }
    }

    pub fn eval_on_grid(&self, grid: &Grid) -> Vec<T> {
        grid.sample(|x| self.eval(x))
    }

    pub fn deriv_on_grid(&self, grid: &Grid) -> Vec<T> {
        grid.sample(|x| self.deriv(x))
    }
}

/// Finite candidate set: `P` uniform biases in `[c1, c2]` for each of
/// `ω = +1` then `ω = -1`, all with the same power `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryGrid<T> {
    bias_lo: T,
    bias_hi: T,
    bias_samples: usize,
    power: u32,
}

impl<T: Real> DictionaryGrid<T> {
    pub const DEFAULT_BIAS_RANGE: (f64, f64) = (-1.1, 1.1);
    pub const DEFAULT_BIAS_SAMPLES: usize = 2049;

    /// The bias interval must strictly contain `[-1, 1]`, the range of `ωx`
    /// over the closed domain.
    pub fn new(bias_lo: T, bias_hi: T, bias_samples: usize, power: u32) -> Result<Self> {
        if !(bias_lo < -T::one()) || !(bias_hi > T::one()) {
            return Err(Error::InvalidDictionary(format!(
                "bias range [{bias_lo}, {bias_hi}] must satisfy c1 < -1 and c2 > 1"
            )));
        }
        if bias_samples < 2 {
            return Err(Error::InvalidDictionary(format!(
                "need at least 2 bias samples, got {bias_samples}"
            )));
        }
        if !(1..=2).contains(&power) {
            return Err(Error::InvalidDictionary(format!(
                "ReLU power must be 1 or 2, got {power}"
            )));
        }
        Ok(Self {
            bias_lo,
            bias_hi,
            bias_samples,
            power,
        })
    }

    pub fn with_defaults(power: u32) -> Result<Self> {
        let (lo, hi) = Self::DEFAULT_BIAS_RANGE;
        Self::new(T::lit(lo), T::lit(hi), Self::DEFAULT_BIAS_SAMPLES, power)
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn bias_range(&self) -> (T, T) {
        (self.bias_lo, self.bias_hi)
    }

    pub fn bias_samples(&self) -> usize {
        self.bias_samples
    }

    pub fn len(&self) -> usize {
        2 * self.bias_samples
    }

    pub fn is_empty(&self) -> bool {
        self.bias_samples == 0
    }

    pub fn bias(&self, i: usize) -> T {
        let step = (self.bias_hi - self.bias_lo) / T::from_count(self.bias_samples - 1);
        self.bias_lo + T::from_count(i) * step
    }

    /// Candidate with enumeration rank `index`.
    pub fn candidate(&self, index: usize) -> Neuron<T> {
        assert!(index < self.len(), "candidate index {index} out of range");
        let (omega, i) = if index < self.bias_samples {
            (T::one(), index)
        } else {
            (-T::one(), index - self.bias_samples)
        };
        Neuron::new(omega, self.bias(i), self.power)
    }

    pub fn candidates(&self) -> impl Iterator<Item = Neuron<T>> + '_ {
        (0..self.len()).map(|i| self.candidate(i))
    }
}

/// Result of a greedy selection scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection<T> {
    Chosen {
        neuron: Neuron<T>,
        index: usize,
        /// Signed pairing `Σ_j r_j g(x_j)` of the winner.
        score: T,
    },
    /// Every candidate pairs to exactly zero with the residual.
    Stagnated,
}

/// Discrete pairing `Σ_j r_j g(x_j)` over interior points.
pub fn pairing<T: Real>(neuron: &Neuron<T>, residual: &[T], grid: &Grid) -> T {
    residual.iter().enumerate().fold(T::zero(), |acc, (j, &r)| {
        acc + r * neuron.eval(grid.point(j + 1))
    })
}

/// Picks the candidate maximizing `|Σ_j r_j g(x_j)|`, lowest index on ties.
///
/// Candidates are scored in parallel; each score is a sequential sum and the
/// reduction is order-independent, so the result equals a sequential scan.
pub fn select<T: Real>(
    candidates: &DictionaryGrid<T>,
    residual: &[T],
    grid: &Grid,
) -> Result<Selection<T>> {
    if residual.len() != grid.interior_len() {
        return Err(Error::DimensionMismatch {
            expected: grid.interior_len(),
            got: residual.len(),
        });
    }
    if candidates.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let best = (0..candidates.len())
        .into_par_iter()
        .map(|i| (i, pairing(&candidates.candidate(i), residual, grid)))
        .reduce_with(|a, b| better(a, b))
        .expect("non-empty candidate set");
    let (index, score) = best;
    if score == T::zero() {
        return Ok(Selection::Stagnated);
    }
    Ok(Selection::Chosen {
        neuron: candidates.candidate(index),
        index,
        score,
    })
}

#[inline]
fn better<T: Real>(a: (usize, T), b: (usize, T)) -> (usize, T) {
    let (fa, fb) = (a.1.abs(), b.1.abs());
    if fa > fb || (fa == fb && a.0 < b.0) {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relu(omega: f64, bias: f64, power: u32) -> Neuron<f64> {
        Neuron::new(omega, bias, power)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(relu(1.0, -0.5, 1).eval(0.75), 0.25);
        assert_eq!(relu(1.0, -0.5, 1).eval(0.25), 0.0);
        assert_eq!(relu(-1.0, 1.0, 2).eval(0.5), 0.25);
    }

    #[test]
    fn deriv_examples() {
        assert_eq!(relu(1.0, -0.5, 1).deriv(0.75), 1.0);
        assert_eq!(relu(-1.0, 1.0, 2).deriv(0.5), -1.0);
        assert_eq!(relu(1.0, -0.5, 1).deriv(0.5), 0.0);
    }

    #[test]
    fn grid_evaluation_examples() {
        let g = Grid::new(4).unwrap();
        assert_eq!(relu(1.0, 0.0, 1).eval_on_grid(&g), vec![0.25, 0.5, 0.75]);
        assert_eq!(
            relu(-1.0, 0.0, 1).eval_on_grid(&Grid::new(37).unwrap()),
            vec![0.0; 36]
        );
        assert_eq!(relu(1.0, -0.5, 2).eval_on_grid(&g), vec![0.0, 0.0, 0.0625]);
    }

    #[test]
    fn dictionary_validation() {
        assert!(DictionaryGrid::new(-1.0, 1.1, 10, 1).is_err());
        assert!(DictionaryGrid::new(-1.1, 1.0, 10, 1).is_err());
        assert!(DictionaryGrid::new(-1.1, 1.1, 1, 1).is_err());
        assert!(DictionaryGrid::new(-1.1, 1.1, 10, 3).is_err());
        let d = DictionaryGrid::<f64>::with_defaults(2).unwrap();
        assert_eq!(d.len(), 4098);
    }

    #[test]
    fn enumeration_order() {
        let d = DictionaryGrid::new(-2.0, 2.0, 5, 1).unwrap();
        let c: Vec<_> = d.candidates().map(|n| (n.omega, n.bias)).collect();
        assert_eq!(
            c,
            vec![
                (1.0, -2.0),
                (1.0, -1.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (1.0, 2.0),
                (-1.0, -2.0),
                (-1.0, -1.0),
                (-1.0, 0.0),
                (-1.0, 1.0),
                (-1.0, 2.0)
            ]
        );
    }

    #[test]
    fn zero_residual_stagnates() {
        let g = Grid::new(10).unwrap();
        let d = DictionaryGrid::new(-1.1, 1.1, 9, 1).unwrap();
        assert_eq!(select(&d, &[0.0; 9], &g).unwrap(), Selection::Stagnated);
    }

    #[test]
    fn one_hot_residual_at_right_end() {
        let g = Grid::new(10).unwrap();
        let d = DictionaryGrid::new(-1.1, 1.1, 23, 1).unwrap();
        let mut r = vec![0.0; 9];
        r[8] = 1.0;
        let brute = (0..d.len())
            .max_by(|&a, &b| {
                let (sa, sb) = (d.candidate(a).eval(0.9), d.candidate(b).eval(0.9));
                sa.partial_cmp(&sb).unwrap().then(b.cmp(&a))
            })
            .unwrap();
        match select(&d, &r, &g).unwrap() {
            Selection::Chosen { neuron, index, .. } => {
                assert_eq!(index, brute);
                assert_eq!(neuron.omega, 1.0);
                assert_eq!(neuron.bias, 1.1);
            }
            Selection::Stagnated => panic!("unexpected stagnation"),
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let g = Grid::new(4).unwrap();
        let d = DictionaryGrid::new(-2.0, 2.0, 3, 1).unwrap();
        // candidates: (+1,-2) (+1,0) (+1,2) (-1,-2) (-1,0) (-1,2)
        // residual [1,0,-1]: scores 0, -0.5, -0.5, 0, 0, 0.5
        match select(&d, &[1.0, 0.0, -1.0], &g).unwrap() {
            Selection::Chosen { index, score, .. } => {
                assert_eq!(index, 1);
                assert_eq!(score, -0.5);
            }
            Selection::Stagnated => panic!(),
        }
    }

    #[test]
    fn select_rejects_bad_length() {
        let g = Grid::new(10).unwrap();
        let d = DictionaryGrid::new(-1.1, 1.1, 9, 1).unwrap();
        assert!(matches!(
            select(&d, &[1.0; 3], &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
