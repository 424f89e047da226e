//! Shifted Grünwald-Letnikov discretization of the 1D fractional Laplacian
//! `(-Δ)^{α/2}` on the interior points of a uniform grid over `(0, 1)`.
//!
//! The left and right shifted GL sums combine into a symmetric Toeplitz
//! matrix scaled by `1 / (2 cos(πα/2) h^α)`:
//!
//! ```text
//! t_0 = c · 2 B_1,   t_1 = c · (B_0 + B_2),   t_m = c · B_{m+1}  (m ≥ 2)
//! ```
//!
//! where `B_k = (-1)^k binom(α, k)` are the GL weights. Only the first row is
//! stored; the dense matrix is materialized on demand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, DenseMatrix};
use crate::scalar::{dot, Real};

/// Exponent `α ∈ (0, 2]`, `α ≠ 1`, of the operator `(-Δ)^{α/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder<T>(T);

impl<T: Real> FractionalOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(Error::OrderOutOfRange(alpha.to_f64().unwrap_or(f64::NAN)));
        }
        if alpha == T::one() {
            return Err(Error::SingularOrder);
        }
        Ok(Self(alpha))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// `2 cos(πα/2)`, the Riesz normalization denominator.
    pub fn riesz_denominator(self) -> T {
        T::lit(2.0) * (T::PI() * self.0 / T::lit(2.0)).cos()
    }
}

/// Uniform grid `x_j = j/M`, `j = 1..M-1`, on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    intervals: usize,
}

impl Grid {
    pub fn new(intervals: usize) -> Result<Self> {
        if intervals < 3 {
            return Err(Error::GridTooCoarse(intervals));
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn interior_len(&self) -> usize {
        self.intervals - 1
    }

    pub fn spacing<T: Real>(&self) -> T {
        T::one() / T::from_count(self.intervals)
    }

    /// Interior point `x_j` for `j = 1..M-1`.
    #[inline]
    pub fn point<T: Real>(&self, j: usize) -> T {
        T::from_count(j) / T::from_count(self.intervals)
    }

    pub fn interior_points<T: Real>(&self) -> Vec<T> {
        (1..self.intervals).map(|j| self.point(j)).collect()
    }

    /// Samples `f` on the interior points.
    pub fn sample<T: Real>(&self, f: impl Fn(T) -> T) -> Vec<T> {
        (1..self.intervals).map(|j| f(self.point(j))).collect()
    }
}

/// Grünwald-Letnikov weights `B_0..B_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlCoefficients<T> {
    alpha: FractionalOrder<T>,
    values: Vec<T>,
}

impl<T: Real> GlCoefficients<T> {
    pub fn alpha(&self) -> FractionalOrder<T> {
        self.alpha
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, k: usize) -> T {
        self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `B_0 = 1`, `B_k = (1 - (α+1)/k) B_{k-1}` for `k = 1..=n`.
pub fn gl_coefficients<T: Real>(alpha: FractionalOrder<T>, n: usize) -> GlCoefficients<T> {
    let a1 = alpha.value() + T::one();
    let mut values = Vec::with_capacity(n + 1);
    values.push(T::one());
    for k in 1..=n {
        let prev = values[k - 1];
        values.push((T::one() - a1 / T::from_count(k)) * prev);
    }
    GlCoefficients { alpha, values }
}

/// Symmetric Toeplitz discretization of `(-Δ)^{α/2}` on interior points.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszOperator<T> {
    alpha: FractionalOrder<T>,
    grid: Grid,
    scale: T,
    row: Vec<T>,
}

impl<T: Real> RieszOperator<T> {
    pub fn alpha(&self) -> FractionalOrder<T> {
        self.alpha
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// `c = 1 / (2 cos(πα/2) h^α)`.
    pub fn scale(&self) -> T {
        self.scale
    }

    /// First row `t_0..t_{M-2}`.
    pub fn toeplitz_row(&self) -> &[T] {
        &self.row
    }

    pub fn dim(&self) -> usize {
        self.row.len()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> T {
        self.row[i.abs_diff(j)]
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let n = self.dim();
        DenseMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// `A v`, summing each output entry sequentially over columns.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let mut s = T::zero();
                // columns j < i use t_{i-j}, reversed; j ≥ i use t_{j-i}
                for (j, &vj) in v[..i].iter().enumerate() {
                    s = s + self.row[i - j] * vj;
                }
                for (t, &vj) in self.row.iter().zip(&v[i..]) {
                    s = s + *t * vj;
                }
                s
            })
            .collect())
    }

    /// Energy pairing `u^T A v`.
    pub fn energy(&self, u: &[T], v: &[T]) -> Result<T> {
        Ok(dot(u, &self.apply(v)?))
    }
}

pub fn assemble_operator<T: Real>(alpha: FractionalOrder<T>, grid: Grid) -> RieszOperator<T> {
    let n = grid.interior_len();
    let h: T = grid.spacing();
    let scale = T::one() / (alpha.riesz_denominator() * h.powf(alpha.value()));
    let b = gl_coefficients(alpha, n);
    let row = (0..n)
        .map(|m| match m {
            0 => scale * T::lit(2.0) * b.get(1),
            1 => scale * (b.get(0) + b.get(2)),
            _ => scale * b.get(m + 1),
        })
        .collect();
    RieszOperator {
        alpha,
        grid,
        scale,
        row,
    }
}

/// Outcome of [`positivity_probe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport<T> {
    pub min_rayleigh: T,
    pub cholesky_ok: bool,
    pub diagonal: T,
    pub trials: usize,
}

impl<T: Real> PositivityReport<T> {
    pub fn looks_positive_definite(&self) -> bool {
        self.cholesky_ok && self.min_rayleigh > T::zero()
    }
}

const PROBE_SEED: u64 = 0x5eed_f0a6;

/// Diagnoses whether `A` is positive definite: attempts a Cholesky factor of
/// the dense realization and evaluates Rayleigh quotients on `trials` seeded
/// random vectors. Never fails; indefinite operators are only reported.
pub fn positivity_probe<T: Real>(op: &RieszOperator<T>, trials: usize) -> PositivityReport<T> {
    let trials = trials.max(1);
    let cholesky_ok = Cholesky::factor(&op.to_dense()).is_some();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let n = op.dim();
    let mut min_rayleigh = T::infinity();
    for _ in 0..trials {
        let v: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
        let av = op.apply(&v).expect("probe vector matches operator size");
        let q = dot(&v, &av) / dot(&v, &v);
        min_rayleigh = min_rayleigh.min(q);
    }
    PositivityReport {
        min_rayleigh,
        cholesky_ok,
        diagonal: op.row[0],
        trials,
    }
}
