//! Dense two-phase revised simplex for `max cᵀx` s.t. `Ax = b`, `x ≥ 0`.
//!
//! Built for the shape the minimax oracle produces: a handful of rows and
//! tens of thousands of columns. The basis inverse is kept explicitly,
//! updated in product form on each pivot and recomputed from scratch every
//! few dozen pivots to stop round-off from accumulating.

use nalgebra::{DMatrix, DVector};

const PRICING_TOLERANCE: f64 = 1e-11;
const PIVOT_TOLERANCE: f64 = 1e-11;
/// Pivots between fresh inversions of the basis matrix.
const REINVERT: usize = 50;
/// Degenerate pivots tolerated before switching to Bland's rule.
const STALL_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpError {
    Infeasible(f64),
    Unbounded,
    IterationLimit(usize),
    SingularBasis,
}

impl std::fmt::Display for LpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LpError::Infeasible(r) => write!(f, "infeasible (phase-one residual {r:.3e})"),
            LpError::Unbounded => write!(f, "unbounded"),
            LpError::IterationLimit(n) => write!(f, "no optimum after {n} pivots"),
            LpError::SingularBasis => write!(f, "singular basis matrix"),
        }
    }
}

/// A basic variable: a structural column or the artificial of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Basic {
    Column(usize),
    Artificial(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct LpSolution {
    pub objective: f64,
    /// Simplex multipliers `y = B⁻ᵀc_B`: the solution of the dual
    /// `min bᵀy` s.t. `Aᵀy ≥ c`.
    pub duals: Vec<f64>,
    pub pivots: usize,
    pub basis: Vec<Basic>,
}

/// Solves the LP. `warm` is an optimal basis of an earlier problem with the
/// same rows and a prefix of these columns; it is still feasible here, so
/// phase one is skipped when it checks out.
pub(crate) fn maximize(
    a: &DMatrix<f64>,
    b: &[f64],
    c: &[f64],
    warm: Option<&[Basic]>,
    max_pivots: usize,
) -> Result<LpSolution, LpError> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    // Columns n..n+m are artificials, one per row, signed so that b ≥ 0.
    let signs: Vec<f64> = b.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
    let rhs = DVector::from_iterator(m, b.iter().zip(&signs).map(|(v, s)| v * s));
    let column = |j: usize| -> DVector<f64> {
        if j < n {
            let mut col = a.column(j).into_owned();
            for (i, s) in signs.iter().enumerate() {
                col[i] *= s;
            }
            col
        } else {
            let mut e = DVector::zeros(m);
            e[j - n] = 1.0;
            e
        }
    };
    let scaled = {
        let mut s = a.clone();
        for (i, sign) in signs.iter().enumerate() {
            s.row_mut(i).scale_mut(*sign);
        }
        s
    };

    let mut state = Tableau {
        basis: (n..n + m).collect(),
        rhs,
        m,
        n,
        pivots: 0,
    };

    let warmed = warm.is_some_and(|basis| state.try_warm_start(basis, &column));
    if !warmed {
        state.basis = (n..n + m).collect();
        let phase_one: Vec<f64> = (0..n + m).map(|j| if j < n { 0.0 } else { -1.0 }).collect();
        let value = state.run(&scaled, &column, &phase_one, true, max_pivots)?;
        if value < -1e-9 * (1.0 + state.rhs.amax()) {
            return Err(LpError::Infeasible(-value));
        }
    }
    let phase_two: Vec<f64> = (0..n + m).map(|j| if j < n { c[j] } else { 0.0 }).collect();
    let objective = state.run(&scaled, &column, &phase_two, false, max_pivots)?;
    let duals = state.duals(&column, &phase_two)?;
    let basis = state
        .basis
        .iter()
        .map(|&j| if j < n { Basic::Column(j) } else { Basic::Artificial(j - n) })
        .collect();
    Ok(LpSolution {
        objective,
        duals: duals.iter().zip(&signs).map(|(y, s)| y * s).collect(),
        pivots: state.pivots,
        basis,
    })
}

struct Tableau {
    basis: Vec<usize>,
    rhs: DVector<f64>,
    m: usize,
    n: usize,
    pivots: usize,
}

impl Tableau {
    fn try_warm_start(&mut self, basis: &[Basic], column: &impl Fn(usize) -> DVector<f64>) -> bool {
        if basis.len() != self.m {
            return false;
        }
        let mut indices = Vec::with_capacity(self.m);
        for b in basis {
            match *b {
                Basic::Column(j) if j < self.n => indices.push(j),
                Basic::Artificial(i) if i < self.m => indices.push(self.n + i),
                _ => return false,
            }
        }
        self.basis = indices;
        let Some(x) = self.basis_matrix(column).lu().solve(&self.rhs) else {
            return false;
        };
        let scale = 1e-9 * (1.0 + self.rhs.amax());
        self.basis.iter().zip(x.iter()).all(|(&j, &v)| {
            v.is_finite() && v >= -scale && (j < self.n || v.abs() <= scale)
        })
    }

    fn basis_matrix(&self, column: &impl Fn(usize) -> DVector<f64>) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.basis.iter().map(|&j| column(j)).collect();
        DMatrix::from_columns(&cols)
    }

    fn invert(&self, column: &impl Fn(usize) -> DVector<f64>) -> Result<DMatrix<f64>, LpError> {
        self.basis_matrix(column).try_inverse().ok_or(LpError::SingularBasis)
    }

    fn duals(
        &self,
        column: &impl Fn(usize) -> DVector<f64>,
        cost: &[f64],
    ) -> Result<DVector<f64>, LpError> {
        let lu_t = self.basis_matrix(column).transpose().lu();
        let cb = DVector::from_iterator(self.m, self.basis.iter().map(|&j| cost[j]));
        lu_t.solve(&cb).ok_or(LpError::SingularBasis)
    }

    /// Runs simplex pivots for `cost` until optimal; returns the objective.
    fn run(
        &mut self,
        scaled: &DMatrix<f64>,
        column: &impl Fn(usize) -> DVector<f64>,
        cost: &[f64],
        allow_artificial: bool,
        max_pivots: usize,
    ) -> Result<f64, LpError> {
        let (m, n) = (self.m, self.n);
        let mut stalled = 0usize;
        let mut inverse = self.invert(column)?;
        let mut since_inversion = 0;
        loop {
            if since_inversion >= REINVERT {
                inverse = self.invert(column)?;
                since_inversion = 0;
            }
            let x = &inverse * &self.rhs;
            let cb = DVector::from_iterator(m, self.basis.iter().map(|&j| cost[j]));
            let y = inverse.tr_mul(&cb);
            let objective = cb.dot(&x);

            let in_basis = {
                let mut flags = vec![false; n + m];
                for &j in &self.basis {
                    flags[j] = true;
                }
                flags
            };
            let ymax = y.amax().max(1.0);
            let threshold = PRICING_TOLERANCE * ymax;
            let reduced = scaled.tr_mul(&y);
            let artificial = (n..n + m)
                .filter(|&j| allow_artificial && !in_basis[j])
                .map(|j| (j, cost[j] - y[j - n]));
            let mut candidates = (0..n)
                .filter(|&j| !in_basis[j])
                .map(|j| (j, cost[j] - reduced[j]))
                .chain(artificial);
            let entering = if stalled >= STALL_LIMIT {
                // Bland: lowest eligible index.
                candidates.find(|&(_, d)| d > threshold)
            } else {
                candidates
                    .filter(|&(_, d)| d > threshold)
                    .max_by(|p, q| p.1.total_cmp(&q.1))
            };
            let Some((q, _)) = entering else {
                self.rhs_check(&x)?;
                return Ok(objective);
            };

            let direction = &inverse * column(q);
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let u = direction[i];
                let artificial_row = !allow_artificial && self.basis[i] >= n;
                let ratio = if artificial_row && u.abs() > PIVOT_TOLERANCE {
                    // Artificials left at zero after phase one must stay there.
                    0.0
                } else if u > PIVOT_TOLERANCE {
                    x[i].max(0.0) / u
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < best - 1e-14 || (ratio <= best + 1e-14 && self.basis[i] < self.basis[r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, step)) = leave else {
                return Err(LpError::Unbounded);
            };
            stalled = if step <= 1e-14 { stalled + 1 } else { 0 };
            // Product-form update of B⁻¹ for column q replacing row r.
            let pivot_row = inverse.row(r) / direction[r];
            for i in 0..m {
                if i != r && direction[i] != 0.0 {
                    let mut row = inverse.row_mut(i);
                    row -= &pivot_row * direction[i];
                }
            }
            inverse.set_row(r, &pivot_row);
            since_inversion += 1;
            self.basis[r] = q;
            self.pivots += 1;
            if self.pivots > max_pivots {
                return Err(LpError::IterationLimit(max_pivots));
            }
        }
    }

    fn rhs_check(&self, x: &DVector<f64>) -> Result<(), LpError> {
        if x.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(LpError::SingularBasis)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_textbook_problem() {
        // max 3x + 5y  s.t. x + s1 = 4, 2y + s2 = 12, 3x + 2y + s3 = 18
        let a = DMatrix::from_row_slice(
            3,
            5,
            &[
                1.0, 0.0, 1.0, 0.0, 0.0, //
                0.0, 2.0, 0.0, 1.0, 0.0, //
                3.0, 2.0, 0.0, 0.0, 1.0,
            ],
        );
        let sol = maximize(&a, &[4.0, 12.0, 18.0], &[3.0, 5.0, 0.0, 0.0, 0.0], None, 100).unwrap();
        assert!((sol.objective - 36.0).abs() < 1e-12);
        // Dual optimum (0, 3/2, 1).
        let expected = [0.0, 1.5, 1.0];
        for (y, e) in sol.duals.iter().zip(expected) {
            assert!((y - e).abs() < 1e-12);
        }
    }

    #[test]
    fn warm_start_after_adding_a_column() {
        // max x  s.t. x + s = 1; then add y with x + y + s = 1 and reward 2.
        let small = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let first = maximize(&small, &[1.0], &[1.0, 0.0], None, 100).unwrap();
        assert!((first.objective - 1.0).abs() < 1e-12);
        let grown = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let second = maximize(&grown, &[1.0], &[1.0, 0.0, 2.0], Some(&first.basis), 100).unwrap();
        assert!((second.objective - 2.0).abs() < 1e-12);
        assert_eq!(second.basis, vec![Basic::Column(2)]);
        assert_eq!(second.pivots, 1);
    }

    #[test]
    fn detects_infeasibility() {
        // x1 + x2 = 1 and x1 + x2 = 2
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            maximize(&a, &[1.0, 2.0], &[1.0, 0.0], None, 100),
            Err(LpError::Infeasible(_))
        ));
    }

    #[test]
    fn detects_unboundedness() {
        // x1 − x2 = 1, maximize x1
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        assert_eq!(maximize(&a, &[1.0], &[1.0, 0.0], None, 100).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_row() {
        // −x1 − x2 = −2 (twice), maximize x1 − x2 → x1 = 2
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, -1.0, -1.0, -1.0]);
        let sol = maximize(&a, &[-2.0, -2.0], &[1.0, -1.0], None, 100).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-12);
    }
}
