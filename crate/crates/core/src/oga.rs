//! Orthogonal greedy algorithm on the discrete fractional Poisson problem.
//!
//! Starting from `u_0 = 0`, each step pairs the residual `A u_{n-1} - f` with
//! every dictionary candidate, appends the best one and re-solves the full
//! Galerkin system
//!
//! ```text
//! Σ_m a_m (g_m^T A g_k) = f^T g_k,   k = 1..n
//! ```
//!
//! over all selected neurons. The Gram matrix is grown incrementally; the
//! coefficients are recomputed from scratch every step.

use crate::dictionary::{select, DictionaryGrid, Neuron, Selection};
use crate::error::{Error, Result};
use crate::fracop::{assemble_operator, FractionalOrder, Grid, RieszOperator};
use crate::linalg::{Cholesky, DenseMatrix, SymmetricEigen};
use crate::metrics::{build_table, linf, raw_l2, IterationRecord, Measurement, NormWeighting};
use crate::problems::ManufacturedProblem;
use crate::scalar::{dot, Real};

pub const DEFAULT_CONDITION_THRESHOLD: f64 = 1e12;

/// `2, 4, 8, ...` up to `max_neurons`, plus `max_neurons` itself when it is
/// not a power of two.
pub fn default_checkpoints(max_neurons: usize) -> Vec<usize> {
    if max_neurons < 2 {
        return vec![max_neurons.max(1)];
    }
    let mut out: Vec<usize> = std::iter::successors(Some(2usize), |&n| n.checked_mul(2))
        .take_while(|&n| n <= max_neurons)
        .collect();
    if out.last() != Some(&max_neurons) {
        out.push(max_neurons);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig<T> {
    pub alpha: FractionalOrder<T>,
    pub grid: Grid,
    pub dictionary: DictionaryGrid<T>,
    pub max_neurons: usize,
    pub checkpoints: Vec<usize>,
    /// Galerkin solves fall back to least squares above this condition estimate.
    pub condition_threshold: T,
    pub weighting: NormWeighting,
}

impl<T: Real> SolveConfig<T> {
    pub fn new(
        alpha: FractionalOrder<T>,
        grid: Grid,
        dictionary: DictionaryGrid<T>,
        max_neurons: usize,
    ) -> Result<Self> {
        let cfg = Self {
            alpha,
            grid,
            dictionary,
            max_neurons,
            checkpoints: default_checkpoints(max_neurons),
            condition_threshold: T::lit(DEFAULT_CONDITION_THRESHOLD),
            weighting: NormWeighting::Raw,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<usize>) -> Result<Self> {
        self.checkpoints = checkpoints;
        self.validate()?;
        Ok(self)
    }

    pub fn with_weighting(mut self, weighting: NormWeighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_neurons < 1 {
            return Err(Error::InvalidConfig(
                "max_neurons must be at least 1".into(),
            ));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::InvalidConfig("checkpoint list is empty".into()));
        }
        if self.checkpoints[0] < 1 || self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "checkpoints must be positive and strictly ascending".into(),
            ));
        }
        if *self.checkpoints.last().unwrap() > self.max_neurons {
            return Err(Error::InvalidConfig(format!(
                "checkpoint {} exceeds max_neurons {}",
                self.checkpoints.last().unwrap(),
                self.max_neurons
            )));
        }
        if !(self.condition_threshold > T::one()) {
            return Err(Error::InvalidConfig(
                "condition_threshold must exceed 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionMethod {
    Cholesky,
    LeastSquares,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    pub coeffs: Vec<T>,
    pub method: ProjectionMethod,
}

/// Selected neurons with their coefficients, cached grid values and Gram
/// matrix `G_mk = e_m^T A e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OgaState<T> {
    neurons: Vec<Neuron<T>>,
    coeffs: Vec<T>,
    evals: Vec<Vec<T>>,
    gram: DenseMatrix<T>,
    load: Vec<T>,
    last_method: Option<ProjectionMethod>,
}

impl<T: Real> Default for OgaState<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> OgaState<T> {
    pub fn new() -> Self {
        Self {
            neurons: Vec::new(),
            coeffs: Vec::new(),
            evals: Vec::new(),
            gram: DenseMatrix::zeros(0, 0),
            load: Vec::new(),
            last_method: None,
        }
    }

    /// Number of selected neurons `n`.
    pub fn len(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn neurons(&self) -> &[Neuron<T>] {
        &self.neurons
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn evals(&self) -> &[Vec<T>] {
        &self.evals
    }

    pub fn gram(&self) -> &DenseMatrix<T> {
        &self.gram
    }

    pub fn last_method(&self) -> Option<ProjectionMethod> {
        self.last_method
    }

    /// Grid values of `u_n = Σ a_i g_i`.
    pub fn solution(&self, dim: usize) -> Vec<T> {
        let mut u = vec![T::zero(); dim];
        for (a, e) in self.coeffs.iter().zip(&self.evals) {
            for (ui, &ei) in u.iter_mut().zip(e) {
                *ui = *ui + *a * ei;
            }
        }
        u
    }

    /// `u_n'` at the interior points, from the analytic neuron derivatives.
    pub fn solution_derivative(&self, grid: &Grid) -> Vec<T> {
        let mut du = vec![T::zero(); grid.interior_len()];
        for (a, g) in self.coeffs.iter().zip(&self.neurons) {
            for (j, d) in du.iter_mut().enumerate() {
                *d = *d + *a * g.deriv(grid.point(j + 1));
            }
        }
        du
    }

    fn push(
        &mut self,
        neuron: Neuron<T>,
        eval: Vec<T>,
        op: &RieszOperator<T>,
        f_grid: &[T],
    ) -> Result<()> {
        let a_eval = op.apply(&eval)?;
        let n = self.len();
        self.gram.grow_square();
        for (k, ek) in self.evals.iter().enumerate() {
            let g = dot(ek, &a_eval);
            self.gram.set(n, k, g);
            self.gram.set(k, n, g);
        }
        self.gram.set(n, n, dot(&eval, &a_eval));
        self.load.push(dot(f_grid, &eval));
        self.neurons.push(neuron);
        self.evals.push(eval);
        Ok(())
    }
}

/// `A u_n - f`; equals `-f` for the empty state.
pub fn residual<T: Real>(
    state: &OgaState<T>,
    op: &RieszOperator<T>,
    f_grid: &[T],
) -> Result<Vec<T>> {
    if f_grid.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: f_grid.len(),
        });
    }
    let au = op.apply(&state.solution(op.dim()))?;
    Ok(au.iter().zip(f_grid).map(|(&a, &f)| a - f).collect())
}

/// Galerkin projection of `f` onto the span of `evals`, building the Gram
/// matrix from scratch.
pub fn project<T: Real>(
    evals: &[Vec<T>],
    op: &RieszOperator<T>,
    f_grid: &[T],
    condition_threshold: T,
) -> Result<Projection<T>> {
    let n = evals.len();
    if n == 0 {
        return Err(Error::InvalidConfig(
            "projection needs at least one neuron".into(),
        ));
    }
    for e in evals
        .iter()
        .map(Vec::len)
        .chain(std::iter::once(f_grid.len()))
    {
        if e != op.dim() {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                got: e,
            });
        }
    }
    let a_evals = evals
        .iter()
        .map(|e| op.apply(e))
        .collect::<Result<Vec<_>>>()?;
    let mut gram = DenseMatrix::zeros(n, n);
    for m in 0..n {
        for k in 0..=m {
            let g = dot(&evals[k], &a_evals[m]);
            gram.set(m, k, g);
            gram.set(k, m, g);
        }
    }
    let load: Vec<T> = evals.iter().map(|e| dot(f_grid, e)).collect();
    solve_galerkin(&gram, &load, condition_threshold)
}

/// Solves `G a = r`: Cholesky when it succeeds with an acceptable condition
/// estimate, otherwise the minimum-norm least-squares solution.
pub fn solve_galerkin<T: Real>(
    gram: &DenseMatrix<T>,
    load: &[T],
    condition_threshold: T,
) -> Result<Projection<T>> {
    if gram.max_abs() == T::zero() {
        return Err(Error::DegenerateDictionary);
    }
    if let Some(chol) = Cholesky::factor(gram) {
        if chol.rcond_estimate() * condition_threshold >= T::one() {
            return Ok(Projection {
                coeffs: chol.solve(load),
                method: ProjectionMethod::Cholesky,
            });
        }
    }
    let coeffs = SymmetricEigen::new(gram).pseudo_solve(load, condition_threshold.recip());
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::SingularOperator);
    }
    Ok(Projection {
        coeffs,
        method: ProjectionMethod::LeastSquares,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome<T> {
    Added {
        neuron: Neuron<T>,
        index: usize,
        score: T,
        method: ProjectionMethod,
    },
    /// No candidate correlates with the residual; the state is unchanged.
    Stagnated,
}

/// One greedy step: select against the current residual, append, re-project.
pub fn step<T: Real>(
    state: &mut OgaState<T>,
    op: &RieszOperator<T>,
    f_grid: &[T],
    dictionary: &DictionaryGrid<T>,
    condition_threshold: T,
) -> Result<StepOutcome<T>> {
    let grid = op.grid();
    let r = residual(state, op, f_grid)?;
    let (neuron, index, score) = match select(dictionary, &r, &grid)? {
        Selection::Chosen {
            neuron,
            index,
            score,
        } => (neuron, index, score),
        Selection::Stagnated => return Ok(StepOutcome::Stagnated),
    };
    state.push(neuron, neuron.eval_on_grid(&grid), op, f_grid)?;
    let proj = solve_galerkin(&state.gram, &state.load, condition_threshold)?;
    state.coeffs = proj.coeffs;
    state.last_method = Some(proj.method);
    Ok(StepOutcome::Added {
        neuron,
        index,
        score,
        method: proj.method,
    })
}

/// Everything needed to evaluate and extend a solve.
#[derive(Debug, Clone)]
pub struct Solver<T> {
    pub config: SolveConfig<T>,
    pub problem: ManufacturedProblem<T>,
    pub operator: RieszOperator<T>,
    pub f_grid: Vec<T>,
    pub state: OgaState<T>,
    stagnated: bool,
}

impl<T: Real> Solver<T> {
    pub fn new(config: SolveConfig<T>) -> Result<Self> {
        config.validate()?;
        let problem = ManufacturedProblem::new(config.alpha);
        let operator = assemble_operator(config.alpha, config.grid);
        let f_grid = config.grid.sample(|x| problem.forcing(x));
        Ok(Self {
            config,
            problem,
            operator,
            f_grid,
            state: OgaState::new(),
            stagnated: false,
        })
    }

    pub fn stagnated(&self) -> bool {
        self.stagnated
    }

    /// Advances one greedy step unless already stagnated.
    pub fn advance(&mut self) -> Result<StepOutcome<T>> {
        if self.stagnated {
            return Ok(StepOutcome::Stagnated);
        }
        let out = step(
            &mut self.state,
            &self.operator,
            &self.f_grid,
            &self.config.dictionary,
            self.config.condition_threshold,
        )?;
        if out == StepOutcome::Stagnated {
            self.stagnated = true;
        }
        Ok(out)
    }

    /// Loss and error norms of the current iterate, labelled with `n`.
    pub fn measure(&self, n: usize) -> Result<Measurement<T>> {
        let grid = self.config.grid;
        let r = residual(&self.state, &self.operator, &self.f_grid)?;
        let loss = dot(&r, &r);
        let u = self.state.solution(grid.interior_len());
        let err: Vec<T> = u
            .iter()
            .enumerate()
            .map(|(j, &v)| self.problem.exact_u(grid.point(j + 1)) - v)
            .collect();
        let du = self.state.solution_derivative(&grid);
        let derr: Vec<T> = du
            .iter()
            .enumerate()
            .map(|(j, &v)| self.problem.exact_du(grid.point(j + 1)) - v)
            .collect();
        let w = match self.config.weighting {
            NormWeighting::Raw => T::one(),
            NormWeighting::HWeighted => grid.spacing::<T>().sqrt(),
        };
        Ok(Measurement {
            n,
            loss,
            l2: raw_l2(&err)? * w,
            h1: raw_l2(&derr)? * w,
            linf: linf(&err)?,
        })
    }

    /// Runs to `max_neurons`, invoking `observer` after every step that added
    /// a neuron, and measuring at each checkpoint.
    pub fn run_observed(
        &mut self,
        mut observer: impl FnMut(&Self),
    ) -> Result<Vec<IterationRecord<T>>> {
        let mut rows = Vec::with_capacity(self.config.checkpoints.len());
        let checkpoints = self.config.checkpoints.clone();
        let mut next = checkpoints.iter().peekable();
        for n in 1..=self.config.max_neurons {
            if let StepOutcome::Added { .. } = self.advance()? {
                observer(self);
            }
            if next.peek() == Some(&&n) {
                next.next();
                rows.push(self.measure(n)?);
            }
        }
        Ok(build_table(&rows))
    }
}

/// Full solve for the manufactured problem, one record per checkpoint.
/// After stagnation the frozen iterate is re-measured at later checkpoints.
pub fn run<T: Real>(config: &SolveConfig<T>) -> Result<Vec<IterationRecord<T>>> {
    Solver::new(config.clone())?.run_observed(|_| {})
}
