//! Cross-checks against references that do not share code with the crate.

use approx::assert_relative_eq;
use fracoga::metrics::h1_seminorm;
use fracoga::problems::{exact_du, exact_u};
use fracoga::{
    assemble_operator, fdm_solve, gamma_fn, gl_coefficients, FractionalOrder, Grid,
    ManufacturedProblem, Neuron,
};
use statrs::function::gamma::gamma;

#[test]
fn gl_recursion_matches_gamma_closed_form() {
    for alpha in [0.3, 0.5, 1.1, 1.5, 1.99] {
        let b = gl_coefficients(FractionalOrder::new(alpha).unwrap(), 20);
        for (k, &bk) in b.values().iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let expected =
                sign * gamma(alpha + 1.0) / (gamma(k as f64 + 1.0) * gamma(alpha - k as f64 + 1.0));
            assert_relative_eq!(bk, expected, max_relative = 1e-10);
        }
    }
}

#[test]
fn gamma_matches_reference() {
    for z in [1e-3, 0.1, 0.25, 0.5, 1.0, 1.5, 3.7, 10.2, 25.0] {
        assert_relative_eq!(gamma_fn(z).unwrap(), gamma(z), max_relative = 1e-12);
    }
    for z in [0.0, -0.5, f64::NAN] {
        assert!(gamma_fn(z).is_err());
    }
}

#[test]
fn exact_derivative_matches_central_differences() {
    let h = 1e-5;
    for i in 1..100 {
        let x = i as f64 / 100.0;
        let fd = (exact_u(x + h) - exact_u(x - h)) / (2.0 * h);
        assert!((exact_du(x) - fd).abs() < 1e-8, "x={x}");
    }
}

#[test]
fn neuron_derivative_matches_central_differences() {
    let h = 1e-6;
    for &(omega, bias, power) in &[
        (1.0, -0.3, 1u32),
        (-1.0, 0.6, 1),
        (1.0, -0.45, 2),
        (-1.0, 0.8, 2),
    ] {
        let g = Neuron::new(omega, bias, power);
        for i in 1..50 {
            let x = i as f64 / 50.0 + 0.003;
            let fd = (g.eval(x + h) - g.eval(x - h)) / (2.0 * h);
            assert!((g.deriv(x) - fd).abs() < 1e-6, "{g:?} at {x}");
        }
    }
}

#[test]
fn single_neuron_h1_matches_integral() {
    // sum_j g'(x_j)^2 ~ M * int_0^1 g'^2 for g = max(0, x - 0.3)^2
    let m = 200;
    let grid = Grid::new(m).unwrap();
    let g = Neuron::new(1.0, -0.3, 2);
    let integral: f64 = 4.0 * 0.7f64.powi(3) / 3.0;
    let h1 = h1_seminorm(&g.deriv_on_grid(&grid)).unwrap();
    assert_relative_eq!(h1, (m as f64 * integral).sqrt(), max_relative = 2e-2);
}

#[test]
fn direct_solve_converges_for_alpha_1_5() {
    let alpha = FractionalOrder::new(1.5).unwrap();
    let p = ManufacturedProblem::new(alpha);
    let err = |m: usize| {
        let grid = Grid::new(m).unwrap();
        let sol = fdm_solve(
            &assemble_operator(alpha, grid),
            &grid.sample(|x| p.forcing(x)),
        )
        .unwrap();
        sol.values
            .iter()
            .enumerate()
            .map(|(j, v)| (v - exact_u(grid.point::<f64>(j + 1))).abs())
            .fold(0.0, f64::max)
    };
    let rate = (err(256) / err(512)).log2();
    assert!(rate >= 0.9, "order {rate}");
}

#[test]
fn low_order_operator_is_indefinite_but_solvable() {
    // for alpha < 1 the diagonal is negative; the direct solve must fall back to LU
    let alpha = FractionalOrder::new(0.5).unwrap();
    let grid = Grid::new(1000).unwrap();
    let op = assemble_operator(alpha, grid);
    let report = fracoga::positivity_probe(&op, 16);
    assert!(!report.cholesky_ok && report.diagonal < 0.0, "{report:?}");
    let p = ManufacturedProblem::new(alpha);
    let sol = fdm_solve(&op, &grid.sample(|x| p.forcing(x))).unwrap();
    assert!(sol.relative_residual < 1e-10);
}
