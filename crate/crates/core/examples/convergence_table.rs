//! Prints a convergence table for one configuration.
//!
//! ```text
//! cargo run --release -p fracoga --example convergence_table -- 1.5 1 1000 64
//! ```

use std::time::Instant;

use fracoga::metrics::raw_l2;
use fracoga::problems::exact_u;
use fracoga::{assemble_operator, fdm_solve, DictionaryGrid, FractionalOrder, Grid, SolveConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let alpha = FractionalOrder::new(arg(0, "2").parse::<f64>()?)?;
    let power: u32 = arg(1, "1").parse()?;
    let grid = Grid::new(arg(2, "100").parse()?)?;
    let max_neurons: usize = arg(3, "64").parse()?;

    let t0 = Instant::now();
    let cfg = SolveConfig::new(
        alpha,
        grid,
        DictionaryGrid::with_defaults(power)?,
        max_neurons,
    )?;
    let rows = fracoga::run(&cfg)?;
    println!("N      loss       l2         ord    h1         ord    linf       ord");
    for r in &rows {
        println!(
            "{:<4} {:10.3e} {:10.3e} {:6.2} {:10.3e} {:6.2} {:10.3e} {:6.2}",
            r.n, r.loss, r.l2, r.l2_order, r.h1, r.h1_order, r.linf, r.linf_order
        );
    }
    let op = assemble_operator(alpha, grid);
    let p = fracoga::ManufacturedProblem::new(alpha);
    let fdm = fdm_solve(&op, &grid.sample(|x| p.forcing(x)))?;
    let err: Vec<f64> = fdm
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| exact_u(grid.point::<f64>(j + 1)) - v)
        .collect();
    println!("FDM reference l2 error: {:.3e}", raw_l2(&err)?);
    println!("elapsed: {:.2?}", t0.elapsed());
    Ok(())
}
