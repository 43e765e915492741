//! Damped Newton minimization for the strictly convex inversion problems.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dot, norm, Real};

/// One objective evaluation: value, gradient and Hessian in the working
/// coordinates.
pub(crate) type Evaluation<F> = (F, Vec<F>, Vec<Vec<F>>);

/// Minimizes a smooth strictly convex function from the origin.
///
/// Newton steps with halving line search; falls back to the gradient
/// direction if the Hessian solve fails. Convergence is declared on the
/// gradient norm. Returns `(argmin, residual, iterations)`.
pub(crate) fn minimize<F: Real>(
    dim: usize,
    eval: &dyn Fn(&[F]) -> Result<Evaluation<F>>,
    tol: F,
    max_iter: usize,
) -> Result<(Vec<F>, F, usize)> {
    let mut u = vec![F::zero(); dim];
    let (mut value, mut gradient, mut hessian) = eval(&u)?;
    for iter in 0..max_iter {
        let residual = norm(&gradient);
        if residual <= tol {
            return Ok((u, residual, iter));
        }
        let neg_g: Vec<F> = gradient.iter().map(|&g| -g).collect();
        let direction = match linalg::solve(&hessian, &neg_g) {
            Some(step) if dot(&step, &gradient) < F::zero() => step,
            _ => neg_g,
        };
        // Halving line search. Near the optimum the value change drops
        // below float resolution while the gradient still shrinks, so a
        // step also counts as progress when it reduces the residual.
        let mut alpha = F::one();
        let mut accepted = false;
        while alpha >= F::c(1e-14) {
            let candidate: Vec<F> =
                u.iter().zip(&direction).map(|(&a, &d)| a + alpha * d).collect();
            let (cand_value, cand_gradient, cand_hessian) = eval(&candidate)?;
            if cand_value < value || norm(&cand_gradient) < residual * F::c(0.9) {
                u = candidate;
                value = cand_value;
                gradient = cand_gradient;
                hessian = cand_hessian;
                accepted = true;
                break;
            }
            alpha = alpha * F::c(0.5);
        }
        if !accepted {
            // flat to machine precision
            let residual = norm(&gradient);
            if residual <= tol {
                return Ok((u, residual, iter));
            }
            return Err(Error::NoConvergence {
                iterations: iter,
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let residual = norm(&gradient);
    if residual <= tol {
        return Ok((u, residual, max_iter));
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
        tol: tol.to_f64().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        // f(u) = (u0 - 1)^2 + 2 (u1 + 2)^2
        let eval = |u: &[f64]| -> Result<Evaluation<f64>> {
            let f = (u[0] - 1.0).powi(2) + 2.0 * (u[1] + 2.0).powi(2);
            let g = vec![2.0 * (u[0] - 1.0), 4.0 * (u[1] + 2.0)];
            let h = vec![vec![2.0, 0.0], vec![0.0, 4.0]];
            Ok((f, g, h))
        };
        let (u, residual, iters) = minimize(2, &eval, 1e-12, 50).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-10);
        assert!((u[1] + 2.0).abs() < 1e-10);
        assert!(residual <= 1e-12);
        assert!(iters <= 3);
    }

    #[test]
    fn minimizes_log_sum_exp() {
        // f(u) = log(e^u + e^-u) - 0.5 u, strictly convex in one variable
        let eval = |u: &[f64]| -> Result<Evaluation<f64>> {
            let (p, m) = (u[0].exp(), (-u[0]).exp());
            let s = p + m;
            let f = s.ln() - 0.5 * u[0];
            let g = vec![(p - m) / s - 0.5];
            let h = vec![vec![1.0 - ((p - m) / s).powi(2)]];
            Ok((f, g, h))
        };
        let (u, _, _) = minimize(1, &eval, 1e-12, 50).unwrap();
        // solution: tanh(u) = 1/2
        assert!((u[0] - 0.5f64.atanh()).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        // constant gradient: residual can never reach the tolerance
        let eval = |u: &[f64]| -> Result<Evaluation<f64>> {
            Ok((u[0], vec![1.0], vec![vec![0.0]]))
        };
        let err = minimize(1, &eval, 1e-3, 3).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 3, .. }));
    }
}
