use crate::error::{Error, Result};

/// Largest sector count solved by exhaustive grid search.
pub const GRID_MAX_SECTORS: usize = 3;
/// Coarse grid used to seed multi-start ascent for moderate J.
const SEED_GRID: usize = 10;
const SEED_GRID_MAX_SECTORS: usize = 8;
const ASCENT_MAX_ITER: usize = 20_000;

/// Maximise base + Σ μ_j x_j + Σ_{j<k} γ_jk x_j x_k over x ≥ 0, Σ x ≤ budget.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem {
    pub mu: Vec<f64>,
    /// J×J; only entries above the diagonal are read.
    pub gamma: Vec<Vec<f64>>,
    pub budget: f64,
    pub base_surplus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub allocation: Vec<f64>,
    pub objective: f64,
}

impl AllocationProblem {
    pub fn sectors(&self) -> usize {
        self.mu.len()
    }

    fn validate(&self) -> Result<()> {
        let j = self.sectors();
        if j == 0 {
            return Err(Error::Domain("allocation needs at least one sector".into()));
        }
        if !(self.budget >= 0.0 && self.budget.is_finite()) {
            return Err(Error::Domain(format!(
                "budget must be >= 0, got {}",
                self.budget
            )));
        }
        if self.gamma.len() != j || self.gamma.iter().any(|row| row.len() != j) {
            return Err(Error::Domain(format!("gamma must be {j}x{j}")));
        }
        let all_finite = self.mu.iter().all(|v| v.is_finite())
            && self.gamma.iter().flatten().all(|v| v.is_finite())
            && self.base_surplus.is_finite();
        if !all_finite {
            return Err(Error::Domain("allocation inputs must be finite".into()));
        }
        Ok(())
    }

    fn interaction(&self, j: usize, k: usize) -> f64 {
        if j < k {
            self.gamma[j][k]
        } else if k < j {
            self.gamma[k][j]
        } else {
            0.0
        }
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let mut v = self.base_surplus;
        for j in 0..x.len() {
            v += self.mu[j] * x[j];
            for k in (j + 1)..x.len() {
                v += self.gamma[j][k] * x[j] * x[k];
            }
        }
        v
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate().take(x.len()) {
            let mut g = self.mu[j];
            for (k, &xk) in x.iter().enumerate() {
                g += self.interaction(j, k) * xk;
            }
            *o = g;
        }
    }
}

/// Grid search for J ≤ 3, projected ascent otherwise.
pub fn allocate(problem: &AllocationProblem, grid_resolution: usize) -> Result<AllocationResult> {
    problem.validate()?;
    if problem.sectors() <= GRID_MAX_SECTORS {
        allocate_grid(problem, grid_resolution)
    } else {
        allocate_ascent(problem)
    }
}

/// Exhaustive search over x = budget·k/n with Σk ≤ n, keeping the
/// lexicographically smallest k among optima.
pub fn allocate_grid(problem: &AllocationProblem, resolution: usize) -> Result<AllocationResult> {
    problem.validate()?;
    let j = problem.sectors();
    if j > GRID_MAX_SECTORS {
        return Err(Error::Domain(format!(
            "grid search supports at most {GRID_MAX_SECTORS} sectors"
        )));
    }
    if resolution < 10 {
        return Err(Error::Domain(format!(
            "grid resolution must be >= 10, got {resolution}"
        )));
    }
    let mut best = GridBest::default();
    let mut k = vec![0usize; j];
    visit_grid(problem, resolution, 0, resolution, &mut k, &mut best);
    Ok(best.into_result())
}

#[derive(Default)]
struct GridBest {
    x: Vec<f64>,
    value: f64,
    found: bool,
}

impl GridBest {
    fn offer(&mut self, x: Vec<f64>, value: f64) {
        let tol = 1e-14 * (1.0 + self.value.abs());
        if !self.found || value > self.value + tol {
            self.x = x;
            self.value = value;
            self.found = true;
        }
    }

    fn into_result(self) -> AllocationResult {
        AllocationResult {
            allocation: self.x,
            objective: self.value,
        }
    }
}

fn visit_grid(
    p: &AllocationProblem,
    n: usize,
    pos: usize,
    left: usize,
    k: &mut [usize],
    best: &mut GridBest,
) {
    if pos == k.len() {
        let x: Vec<f64> = k
            .iter()
            .map(|&ki| p.budget * ki as f64 / n as f64)
            .collect();
        let v = p.objective(&x);
        best.offer(x, v);
        return;
    }
    for ki in 0..=left {
        k[pos] = ki;
        visit_grid(p, n, pos + 1, left - ki, k, best);
    }
}

/// Multi-start projected gradient ascent on the capped simplex.
pub fn allocate_ascent(problem: &AllocationProblem) -> Result<AllocationResult> {
    problem.validate()?;
    let j = problem.sectors();
    let b = problem.budget;

    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; j], vec![b / j as f64; j]];
    for a in 0..j {
        let mut v = vec![0.0; j];
        v[a] = b;
        starts.push(v);
        for c in (a + 1)..j {
            let mut v = vec![0.0; j];
            v[a] = 0.5 * b;
            v[c] = 0.5 * b;
            starts.push(v);
        }
    }
    if j <= SEED_GRID_MAX_SECTORS {
        starts.push(coarse_grid_best(problem));
    }

    // Row-sum bound on the Hessian gives a safe step.
    let lip = (0..j)
        .map(|r| (0..j).map(|c| problem.interaction(r, c).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    // Cap the step at a few budgets per unit gradient so huge steps do not
    // lose the budget to cancellation inside the projection.
    let grad_max = problem.mu.iter().map(|m| m.abs()).fold(0.0, f64::max) + lip * b;
    let mut step = if lip > 0.0 { 1.0 / lip } else { f64::MAX };
    if grad_max > 0.0 {
        step = step.min(10.0 * b.max(f64::MIN_POSITIVE) / grad_max);
    }

    let mut best: Option<AllocationResult> = None;
    for x0 in starts {
        let x = ascend(problem, x0, step);
        let value = problem.objective(&x);
        let better = best
            .as_ref()
            .is_none_or(|cur| value > cur.objective + 1e-15);
        if better {
            best = Some(AllocationResult {
                allocation: x,
                objective: value,
            });
        }
    }
    Ok(best.expect("at least one start"))
}

fn coarse_grid_best(p: &AllocationProblem) -> Vec<f64> {
    let mut best = GridBest::default();
    let mut k = vec![0usize; p.sectors()];
    visit_grid(p, SEED_GRID, 0, SEED_GRID, &mut k, &mut best);
    best.x
}

fn ascend(p: &AllocationProblem, mut x: Vec<f64>, step: f64) -> Vec<f64> {
    let j = x.len();
    let mut grad = vec![0.0; j];
    let mut trial = vec![0.0; j];
    let scale = p.budget.max(f64::MIN_POSITIVE);
    for _ in 0..ASCENT_MAX_ITER {
        p.gradient(&x, &mut grad);
        for i in 0..j {
            trial[i] = x[i] + step * grad[i];
        }
        project_capped_simplex(&mut trial, p.budget);
        let moved = x
            .iter()
            .zip(&trial)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x.copy_from_slice(&trial);
        if moved <= 1e-15 * scale {
            break;
        }
    }
    x
}

/// Euclidean projection onto {x ≥ 0, Σ x ≤ budget}.
fn project_capped_simplex(x: &mut [f64], budget: f64) {
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    if x.iter().sum::<f64>() <= budget {
        return;
    }
    // Project onto the face Σ x = budget.
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cum += v;
        let t = (cum - budget) / (i + 1) as f64;
        if v - t > 0.0 {
            tau = t;
        }
    }
    for v in x.iter_mut() {
        *v = (*v - tau).max(0.0);
    }
    let total: f64 = x.iter().sum();
    if total > budget {
        for v in x.iter_mut() {
            *v *= budget / total;
        }
    }
}
