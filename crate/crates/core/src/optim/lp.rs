//! Exact linear programming for very small programs by vertex enumeration.
//!
//! `minimize cᵀx subject to A x ≤ b`. Every `n`-subset of constraints is
//! solved as an equality system; feasible solutions are the vertices of the
//! polyhedron. To tell unbounded programs (and polyhedra without vertices)
//! apart, the program is solved inside the box `|xᵢ| ≤ M` for two values of
//! `M`: a bounded optimum does not move when the box grows.

use crate::{Error, Result};

const BOX_RADIUS: f64 = 1e6;
const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-12;
const MAX_SUBSETS: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Vec<f64>>,
    bounds: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, bounds: Vec<f64>) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(Error::Domain("linear program has no variables".into()));
        }
        if constraints.len() != bounds.len() {
            return Err(Error::Dimension {
                expected: constraints.len(),
                found: bounds.len(),
            });
        }
        if let Some(row) = constraints.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: row.len(),
            });
        }
        Ok(LinearProgram {
            objective,
            constraints,
            bounds,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest violation `max(Aᵢx − bᵢ, 0)`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .zip(&self.bounds)
            .map(|(a, b)| (dot(a, x) - b).max(0.0))
            .fold(0.0, f64::max)
    }

    fn with_box(&self, radius: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = self.num_vars();
        let mut rows = self.constraints.clone();
        let mut rhs = self.bounds.clone();
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut r = vec![0.0; n];
                r[i] = sign;
                rows.push(r);
                rhs.push(radius);
            }
        }
        (rows, rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// The chosen optimal vertex: lexicographically smallest among optimal
    /// vertices with no box constraint active.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Every distinct optimal vertex, lexicographically sorted.
    pub optimal_vertices: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
#[allow(clippy::needless_range_loop)]
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

struct Vertex {
    x: Vec<f64>,
    touches_box: bool,
}

fn enumerate_vertices(rows: &[Vec<f64>], rhs: &[f64], n: usize, box_start: usize) -> Vec<Vertex> {
    let m = rows.len();
    let mut out = Vec::new();
    if m < n {
        return out;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| rhs[i]).collect();
        if let Some(x) = solve_square(a, b) {
            let feasible = rows
                .iter()
                .zip(rhs)
                .all(|(r, &bi)| dot(r, &x) <= bi + FEAS_TOL * (1.0 + bi.abs()));
            if feasible {
                let touches_box = rows[box_start..]
                    .iter()
                    .zip(&rhs[box_start..])
                    .any(|(r, &bi)| (dot(r, &x) - bi).abs() <= FEAS_TOL * (1.0 + bi.abs()));
                out.push(Vertex { x, touches_box });
            }
        }
        // next combination in lexicographic order
        let mut i = n;
        while i > 0 && idx[i - 1] == m - n + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn boxed_optimum(lp: &LinearProgram, radius: f64) -> Result<(f64, Vec<Vertex>)> {
    let n = lp.num_vars();
    let box_start = lp.constraints.len();
    let (rows, rhs) = lp.with_box(radius);
    if binomial(rows.len(), n) > MAX_SUBSETS {
        return Err(Error::Domain(format!(
            "linear program too large for vertex enumeration ({} constraints, {n} variables)",
            rows.len()
        )));
    }
    let vertices = enumerate_vertices(&rows, &rhs, n, box_start);
    if vertices.is_empty() {
        return Err(Error::Infeasible);
    }
    let best = vertices
        .iter()
        .map(|v| lp.objective_at(&v.x))
        .fold(f64::INFINITY, f64::min);
    let scale = 1.0 + best.abs();
    let optimal = vertices
        .into_iter()
        .filter(|v| lp.objective_at(&v.x) <= best + FEAS_TOL * scale)
        .collect();
    Ok((best, optimal))
}

/// Solves `minimize cᵀx s.t. A x ≤ b` exactly.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let (best, optimal) = boxed_optimum(lp, BOX_RADIUS)?;
    let (best_wide, _) = boxed_optimum(lp, 2.0 * BOX_RADIUS)?;
    if best_wide < best - FEAS_TOL * (1.0 + best.abs()) {
        return Err(Error::Unbounded);
    }

    let prefer_interior = optimal.iter().any(|v| !v.touches_box);
    let mut vertices: Vec<Vec<f64>> = optimal
        .into_iter()
        .filter(|v| !prefer_interior || !v.touches_box)
        .map(|v| v.x)
        .collect();
    vertices.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    vertices.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= 1e-9));
    let x = vertices[0].clone();
    let objective = lp.objective_at(&x);
    Ok(LpSolution {
        x,
        objective,
        optimal_vertices: vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_interval() {
        let lp =
            LinearProgram::new(vec![1.0], vec![vec![-1.0], vec![1.0]], vec![0.0, 1.0]).unwrap();
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.x, vec![0.0]);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn infeasible_interval() {
        // x ≤ 0 and x ≥ 1
        let lp =
            LinearProgram::new(vec![1.0], vec![vec![1.0], vec![-1.0]], vec![0.0, -1.0]).unwrap();
        assert!(matches!(solve_lp(&lp), Err(Error::Infeasible)));
    }

    #[test]
    fn unbounded_below() {
        let lp = LinearProgram::new(vec![1.0], vec![vec![1.0]], vec![1.0]).unwrap();
        assert!(matches!(solve_lp(&lp), Err(Error::Unbounded)));
    }

    #[test]
    fn bounded_objective_on_unbounded_polyhedron() {
        // minimize y s.t. y ≥ 0, x free: every (x, 0) is optimal
        let lp = LinearProgram::new(vec![0.0, 1.0], vec![vec![0.0, -1.0]], vec![0.0]).unwrap();
        let s = solve_lp(&lp).unwrap();
        assert!(s.objective.abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_polygon() {
        // maximize x + y in the unit square cut by x + 2y ≤ 2
        let lp = LinearProgram::new(
            vec![-1.0, -1.0],
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
                vec![1.0, 2.0],
            ],
            vec![1.0, 1.0, 0.0, 0.0, 2.0],
        )
        .unwrap();
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective + 1.5).abs() < 1e-12);
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 0.5).abs() < 1e-12);
        assert_eq!(s.optimal_vertices.len(), 1);
        assert!(lp.max_violation(&s.x) <= 1e-12);
    }

    #[test]
    fn degenerate_optimum_lists_all_vertices() {
        // minimize -x - y on the unit square with x + y ≤ 1: the whole edge is optimal
        let lp = LinearProgram::new(
            vec![-1.0, -1.0],
            vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]],
            vec![0.0, 0.0, 1.0],
        )
        .unwrap();
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.optimal_vertices.len(), 2);
        assert_eq!(s.x, vec![0.0, 1.0]);
    }

    #[test]
    fn shape_errors() {
        assert!(LinearProgram::new(vec![], vec![], vec![]).is_err());
        assert!(LinearProgram::new(vec![1.0], vec![vec![1.0, 2.0]], vec![0.0]).is_err());
        assert!(LinearProgram::new(vec![1.0], vec![vec![1.0]], vec![]).is_err());
    }
}
