//! Discrete error norms and convergence orders for the result tables.
//!
//! Norms are unweighted sums over interior grid points: the same continuous
//! error sampled on `n` points grows like `√n`. [`NormWeighting::HWeighted`]
//! multiplies the ℓ2-type columns by `√h` to approximate continuous `L2`
//! norms instead.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormWeighting {
    #[default]
    Raw,
    HWeighted,
}

/// `sqrt(Σ v_j²)`, no quadrature weight.
pub fn raw_l2<T: Real>(v: &[T]) -> Result<T> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(v.iter().map(|&x| x * x).sum::<T>().sqrt())
}

pub fn linf<T: Real>(v: &[T]) -> Result<T> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(v.iter().fold(T::zero(), |m, &x| m.max(x.abs())))
}

/// Derivative-error seminorm: raw ℓ2 of `u'(x_j) - u_N'(x_j)` samples.
pub fn h1_seminorm<T: Real>(err_deriv_samples: &[T]) -> Result<T> {
    raw_l2(err_deriv_samples)
}

/// Convergence order between consecutive checkpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order<T> {
    pub value: T,
    /// False when either error was nonpositive or non-finite; `value` is then 0.
    pub defined: bool,
}

/// `log2(prev / cur)`.
pub fn order_log2<T: Real>(prev_err: T, cur_err: T) -> Order<T> {
    let ok = |e: T| e > T::zero() && e.is_finite();
    if ok(prev_err) && ok(cur_err) {
        Order {
            value: (prev_err / cur_err).log2(),
            defined: true,
        }
    } else {
        Order {
            value: T::zero(),
            defined: false,
        }
    }
}

/// Error measurements at one checkpoint before orders are attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement<T> {
    pub n: usize,
    pub loss: T,
    pub l2: T,
    pub h1: T,
    pub linf: T,
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T> {
    pub n: usize,
    pub loss: T,
    pub loss_order: T,
    pub l2: T,
    pub l2_order: T,
    pub h1: T,
    pub h1_order: T,
    pub linf: T,
    pub linf_order: T,
}

/// Attaches per-column orders relative to the previous row; the first row
/// gets zeros.
pub fn build_table<T: Real>(rows: &[Measurement<T>]) -> Vec<IterationRecord<T>> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, m) in rows.iter().enumerate() {
        let ord = |f: fn(&Measurement<T>) -> T| match i {
            0 => T::zero(),
            _ => order_log2(f(&rows[i - 1]), f(m)).value,
        };
        out.push(IterationRecord {
            n: m.n,
            loss: m.loss,
            loss_order: ord(|r| r.loss),
            l2: m.l2,
            l2_order: ord(|r| r.l2),
            h1: m.h1,
            h1_order: ord(|r| r.h1),
            linf: m.linf,
            linf_order: ord(|r| r.linf),
        });
    }
    out
}
