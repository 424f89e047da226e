//! Manufactured fractional Poisson problem on `(0, 1)` with exact solution
//! `u(x) = x³(1-x)³`, and the direct finite-difference reference solve.

use crate::error::{Error, Result};
use crate::fracop::{FractionalOrder, RieszOperator};
use crate::linalg::{Cholesky, Lu};
use crate::scalar::{norm2, Real};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)` for `z > 0`.
pub fn gamma_fn<T: Real>(z: T) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(Error::GammaDomain(z.to_f64().unwrap_or(f64::NAN)));
    }
    if z < T::lit(0.5) {
        // Γ(z) = Γ(z+1)/z keeps the series in its accurate range
        return Ok(lanczos(z + T::one()) / z);
    }
    Ok(lanczos(z))
}

fn lanczos<T: Real>(z: T) -> T {
    let x = z - T::one();
    let mut series = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series = series + T::lit(c) / (x + T::from_count(i));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + T::lit(0.5)) * (-t).exp() * series
}

pub fn exact_u<T: Real>(x: T) -> T {
    let y = T::one() - x;
    (x * y).powi(3)
}

pub fn exact_du<T: Real>(x: T) -> T {
    let y = T::one() - x;
    T::lit(3.0) * x * x * y * y * (y - x)
}

/// Fractional Poisson problem `(-Δ)^{α/2} u = f` with `u = x³(1-x)³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedProblem<T> {
    alpha: FractionalOrder<T>,
    // Γ(4)/Γ(4-α), 3Γ(5)/Γ(5-α), 3Γ(6)/Γ(6-α), Γ(7)/Γ(7-α) with alternating signs
    weights: [T; 4],
    denom: T,
}

impl<T: Real> ManufacturedProblem<T> {
    pub fn new(alpha: FractionalOrder<T>) -> Self {
        let a = alpha.value();
        let ratio = |n: f64| {
            let n = T::lit(n);
            gamma_fn(n).expect("positive") / gamma_fn(n - a).expect("n - α > 0 for α ≤ 2")
        };
        let weights = [
            ratio(4.0),
            -T::lit(3.0) * ratio(5.0),
            T::lit(3.0) * ratio(6.0),
            -ratio(7.0),
        ];
        Self {
            alpha,
            weights,
            denom: alpha.riesz_denominator(),
        }
    }

    pub fn alpha(&self) -> FractionalOrder<T> {
        self.alpha
    }

    pub fn exact_u(&self, x: T) -> T {
        exact_u(x)
    }

    pub fn exact_du(&self, x: T) -> T {
        exact_du(x)
    }

    /// Right-hand side `f(x)` in closed form.
    pub fn forcing(&self, x: T) -> T {
        let a = self.alpha.value();
        let y = T::one() - x;
        let mut sum = T::zero();
        for (p, &w) in self.weights.iter().enumerate() {
            let e = T::from_count(p + 3) - a;
            sum = sum + w * (x.powf(e) + y.powf(e));
        }
        sum / self.denom
    }
}

/// Convenience wrapper around [`ManufacturedProblem::forcing`].
pub fn forcing<T: Real>(alpha: FractionalOrder<T>, x: T) -> T {
    ManufacturedProblem::new(alpha).forcing(x)
}

/// Grid values of the direct solve `A ũ = f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdmSolution<T> {
    pub values: Vec<T>,
    /// `‖A ũ - f‖ / ‖f‖`.
    pub relative_residual: T,
}

/// Dense direct solve. Uses Cholesky when the operator is positive definite
/// and partially pivoted LU otherwise.
pub fn fdm_solve<T: Real>(op: &RieszOperator<T>, f_grid: &[T]) -> Result<FdmSolution<T>> {
    if f_grid.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: f_grid.len(),
        });
    }
    let dense = op.to_dense();
    let values = match Cholesky::factor(&dense) {
        Some(chol) => chol.solve(f_grid),
        None => Lu::factor(&dense)?.solve(f_grid),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularOperator);
    }
    let av = op.apply(&values)?;
    let diff: Vec<T> = av.iter().zip(f_grid).map(|(&a, &f)| a - f).collect();
    let fnorm = norm2(f_grid);
    let relative_residual = if fnorm > T::zero() {
        norm2(&diff) / fnorm
    } else {
        norm2(&diff)
    };
    Ok(FdmSolution {
        values,
        relative_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracop::{assemble_operator, Grid};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn order(a: f64) -> FractionalOrder<f64> {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma_fn(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            gamma_fn(0.75).unwrap() * gamma_fn(0.25).unwrap(),
            PI * 2f64.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_domain() {
        assert!(matches!(gamma_fn(0.0), Err(Error::GammaDomain(_))));
        assert!(matches!(gamma_fn(-1.5), Err(Error::GammaDomain(_))));
    }

    #[test]
    fn exact_solution_examples() {
        assert_eq!(exact_u(0.5), 0.015625);
        assert_eq!(exact_u(0.0), 0.0);
        assert_eq!(exact_u(1.0), 0.0);
        assert_eq!(exact_du(0.5), 0.0);
    }

    #[test]
    fn laplacian_forcing_matches_second_derivative() {
        let p = ManufacturedProblem::new(order(2.0));
        assert_relative_eq!(p.forcing(0.5), 0.375, max_relative = 1e-13);
    }

    #[test]
    fn forcing_matches_extended_precision_values() {
        // 40-digit evaluations of the closed form
        assert_relative_eq!(
            forcing(order(1.5), 0.5),
            0.150_450_555_612_735_01,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            forcing(order(1.5), 0.1),
            -0.093_351_097_348_037_312,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            forcing(order(0.5), 0.3),
            0.012_983_795_657_122_190,
            max_relative = 1e-12
        );
    }

    #[test]
    fn forcing_is_symmetric() {
        for &a in &[0.5, 1.5, 1.9, 2.0] {
            let p = ManufacturedProblem::new(order(a));
            for i in 0..=20 {
                let x = i as f64 / 20.0;
                assert_relative_eq!(
                    p.forcing(x),
                    p.forcing(1.0 - x),
                    epsilon = 1e-13,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn fdm_round_trip() {
        let op = assemble_operator(order(1.5), Grid::new(40).unwrap());
        let w: Vec<f64> = (0..39).map(|i| ((i * 13 % 7) as f64) - 3.0).collect();
        let f = op.apply(&w).unwrap();
        let sol = fdm_solve(&op, &f).unwrap();
        for (u, v) in sol.values.iter().zip(&w) {
            assert_relative_eq!(u, v, epsilon = 1e-10, max_relative = 1e-10);
        }
        assert!(sol.relative_residual < 1e-12);
    }

    #[test]
    fn fdm_handles_indefinite_low_order() {
        let grid = Grid::new(50).unwrap();
        let op = assemble_operator(order(0.5), grid);
        let p = ManufacturedProblem::new(order(0.5));
        let f = grid.sample(|x| p.forcing(x));
        let sol = fdm_solve(&op, &f).unwrap();
        assert!(sol.relative_residual < 1e-10);
    }

    #[test]
    fn fdm_rejects_bad_length() {
        let op = assemble_operator(order(2.0), Grid::new(10).unwrap());
        assert!(matches!(
            fdm_solve(&op, &[1.0; 4]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
