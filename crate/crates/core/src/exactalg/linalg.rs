use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Particular solution of `A x = b` together with the nullspace dimension.
///
/// `nullity > 0` means the solution is not unique; free variables are set to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution<S> {
    pub x: Vec<S>,
    pub nullity: usize,
    pub rank: usize,
}

impl<S> LinearSolution<S> {
    pub fn is_unique(&self) -> bool {
        self.nullity == 0
    }
}

fn negligible<S: Scalar>(a: &S, scale: f64) -> bool {
    if S::EXACT {
        a.inv().is_none()
    } else {
        a.approx().abs() <= 1e-11 * scale.max(1.0) || a.inv().is_none()
    }
}

/// Gaussian elimination over any scalar ring where `inv` decides pivots.
///
/// Inconsistent systems yield `NoSolution` with the first nonzero residual.
pub fn solve_linear<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<LinearSolution<S>> {
    let rows = a.len();
    if rows != b.len() {
        return Err(Error::InternalInconsistency("solve_linear: row count mismatch".into()));
    }
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::InternalInconsistency("solve_linear: ragged matrix".into()));
    }
    let scale = a
        .iter()
        .flatten()
        .chain(b.iter())
        .map(|v| v.approx().abs())
        .fold(0.0f64, f64::max);
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let pick = if S::EXACT {
            (row..rows).find(|&r| !negligible(&m[r][col], scale))
        } else {
            (row..rows)
                .filter(|&r| !negligible(&m[r][col], scale))
                .max_by(|&i, &j| m[i][col].approx().abs().total_cmp(&m[j][col].approx().abs()))
        };
        let Some(p) = pick else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot invertible");
        for c in col..=cols {
            m[row][c] = m[row][c].clone() * inv.clone();
        }
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=cols {
                let v = m[row][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    for r in row..rows {
        let res = &m[r][cols];
        let bad = if S::EXACT { !res.is_zero() } else { !negligible(res, scale) };
        if bad {
            return Err(Error::NoSolution { residual: format!("{:?}", res) });
        }
    }
    let mut x = vec![S::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Ok(LinearSolution { x, nullity: cols - pivots.len(), rank: pivots.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{rat, Rational};

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn unique_solution() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(-1)]];
        let s = solve_linear(&a, &[r(5), r(1)]).unwrap();
        assert_eq!(s.x, vec![r(2), r(1)]);
        assert!(s.is_unique());
    }

    #[test]
    fn inconsistent_reports_residual() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        match solve_linear(&a, &[r(1), r(3)]) {
            Err(Error::NoSolution { residual }) => assert!(!residual.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn underdetermined_flags_nullity() {
        let a = vec![vec![r(1), r(1), r(0)]];
        let s = solve_linear(&a, &[r(4)]).unwrap();
        assert_eq!(s.nullity, 2);
        assert_eq!(s.x[0], r(4));
    }

    #[test]
    fn float_pivoting() {
        let a = vec![vec![1e-14, 1.0], vec![1.0, 1.0]];
        let s = solve_linear(&a, &[1.0, 2.0]).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }
}
