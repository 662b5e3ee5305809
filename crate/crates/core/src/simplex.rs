//! Dense phase-one simplex for `A x = b, x >= 0`.
//!
//! One artificial variable per row; minimizes their sum, which at the optimum
//! is the smallest L1 constraint violation `|A x - b|_1` over `x >= 0`. Bland's
//! rule picks both entering and leaving variables, so the method cannot cycle.

const PIVOT_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    /// Values of the structural variables at the optimal basis.
    pub x: Vec<f64>,
    /// Sum of the artificial variables.
    pub objective: f64,
    pub iterations: usize,
}

pub fn phase_one(a: &[Vec<f64>], b: &[f64]) -> PhaseOne {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;

    // rows 0..m: constraints; row m: reduced costs. Last column is the RHS.
    let mut t = vec![vec![0.0; width]; m + 1];
    for (i, (row, &rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * row[j];
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = sign * rhs;
    }
    for j in (0..n).chain(std::iter::once(width - 1)) {
        t[m][j] = -(0..m).map(|i| t[i][j]).sum::<f64>();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        // Phase one is bounded below by zero, so a negative reduced cost on
        // a column with no positive entry is round-off; skip such columns.
        let step = (0..n + m)
            .filter(|&j| t[m][j] < -PIVOT_TOLERANCE)
            .find_map(|j| leaving_row(&t, &basis, j).map(|i| (i, j)));
        let Some((row, enter)) = step else { break };
        pivot(&mut t, row, enter);
        basis[row] = enter;
        iterations += 1;
    }

    let mut x = vec![0.0; n];
    let mut objective = 0.0;
    for (i, &var) in basis.iter().enumerate() {
        let value = t[i][width - 1];
        if var < n {
            x[var] = value;
        } else {
            objective += value;
        }
    }
    PhaseOne {
        x,
        objective: objective.max(0.0),
        iterations,
    }
}

/// Minimum-ratio row for entering column `col`; ties go to the smallest
/// basic variable index.
fn leaving_row(t: &[Vec<f64>], basis: &[usize], col: usize) -> Option<usize> {
    let rhs = t[0].len() - 1;
    let mut best: Option<(usize, f64)> = None;
    for (i, &var) in basis.iter().enumerate() {
        let coef = t[i][col];
        if coef <= PIVOT_TOLERANCE {
            continue;
        }
        let ratio = t[i][rhs] / coef;
        best = match best {
            Some((b, r)) if ratio > r + PIVOT_TOLERANCE => Some((b, r)),
            Some((b, r)) if (ratio - r).abs() <= PIVOT_TOLERANCE && basis[b] < var => Some((b, r)),
            _ => Some((i, ratio)),
        };
    }
    best.map(|(i, _)| i)
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let factor = r[col];
        if factor != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
    }
}
