//! The Kempf-Ness function of the linear action and its derivatives.
//!
//! For a normalized point `x = [z]` and `v` in the abelian algebra,
//!
//! ```text
//! psi(x, exp v) = 1/2 log( sum_{i active} |z_i|^2 e^{2 <alpha_i, v>} )
//! ```
//!
//! Its gradient in `v` is the moment map at the translated point — the
//! softmax-weighted average of the active weights — and its Hessian is
//! twice the covariance of the weights under the softmax coefficients.
//! `check_properties` validates the defining conditions numerically:
//! smoothness is inherited from the closed form, the cocycle identity is
//! checked directly, and convexity along one-parameter subgroups together
//! with its degeneracy exactly on the stabilizer is checked through the
//! covariance form. Continuity of the gradient map is automatic in closed
//! form and carries no separate test.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::Membership;
use crate::rational::{rational_from_float, Rational, RationalVec};
use crate::report::InvariantCheck;
use crate::sampling::{derive_seed, random_direction, random_integer_vector};
use crate::scalar::{dot, Real};
use crate::tolerances;
use crate::weights::{act, stabilizer_algebra, ProjPoint, WeightSystem};

/// Value, gradient and Hessian of the Kempf-Ness function at one group
/// element.
#[derive(Debug, Clone, Serialize)]
pub struct KnEvaluation<F> {
    /// `psi(x, exp v)`, a log-scale quantity.
    pub value: F,
    /// Gradient in `v`: the moment map of the translated point.
    pub gradient: Vec<F>,
    /// Hessian in `v`: twice the weight covariance, positive semidefinite
    /// with kernel exactly the stabilizer subalgebra.
    pub hessian: Vec<Vec<F>>,
}

/// Softmax coefficients of the translated point: the squared magnitudes of
/// `exp(v) x` per active index, in support order.
fn softmax_coefficients<F: Real>(w: &WeightSystem, x: &ProjPoint<F>, v: &[F]) -> Vec<F> {
    let mags = x.squared_magnitudes();
    let exponents: Vec<F> = x
        .support()
        .iter()
        .map(|&i| F::c(2.0) * dot(&w.weight(i).to_floats::<F>(), v))
        .collect();
    let max = exponents.iter().copied().fold(F::neg_infinity(), F::max);
    let terms: Vec<F> = x
        .support()
        .iter()
        .zip(&exponents)
        .map(|(&i, &e)| mags[i] * (e - max).exp())
        .collect();
    let total: F = terms.iter().copied().sum();
    terms.into_iter().map(|t| t / total).collect()
}

/// `psi(x, exp v)`, computed with the max-exponent shift; exactly zero at
/// `v = 0` for normalized input.
pub fn kn_value<F: Real>(w: &WeightSystem, x: &ProjPoint<F>, v: &[F]) -> Result<F> {
    w.check_point(x)?;
    w.check_direction(v)?;
    if v.iter().all(|&t| t == F::zero()) {
        return Ok(F::zero());
    }
    let mags = x.squared_magnitudes();
    let exponents: Vec<F> = x
        .support()
        .iter()
        .map(|&i| F::c(2.0) * dot(&w.weight(i).to_floats::<F>(), v))
        .collect();
    let max = exponents.iter().copied().fold(F::neg_infinity(), F::max);
    let sum: F = x
        .support()
        .iter()
        .zip(&exponents)
        .map(|(&i, &e)| mags[i] * (e - max).exp())
        .sum();
    Ok(F::c(0.5) * (max + sum.ln()))
}

/// Moment map: the convex combination of active weights with coefficients
/// `|z_i|^2`.
pub fn moment_map<F: Real>(w: &WeightSystem, x: &ProjPoint<F>) -> Result<Vec<F>> {
    w.check_point(x)?;
    let coeffs = softmax_coefficients(w, x, &vec![F::zero(); w.dim_a()]);
    let mut out = vec![F::zero(); w.dim_a()];
    for (&i, &c) in x.support().iter().zip(&coeffs) {
        for (o, &a) in out.iter_mut().zip(&w.weight(i).to_floats::<F>()) {
            *o = *o + c * a;
        }
    }
    Ok(out)
}

/// Moment map with the coefficients rationalized exactly: the result is an
/// exact convex combination of the active weights, so membership statements
/// about it can be decided without tolerances.
pub fn moment_map_exact<F: Real>(w: &WeightSystem, x: &ProjPoint<F>) -> Result<RationalVec> {
    w.check_point(x)?;
    let mags = x.squared_magnitudes();
    let coeffs: Vec<Rational> = x
        .support()
        .iter()
        .map(|&i| rational_from_float(mags[i]))
        .collect::<Result<_>>()?;
    let total = coeffs.iter().fold(Rational::new(0.into(), 1.into()), |acc, c| acc + c);
    let mut out = RationalVec::zeros(w.dim_a());
    for (&i, c) in x.support().iter().zip(&coeffs) {
        out = &out + &w.weight(i).scale(&(c / &total));
    }
    Ok(out)
}

/// Value, gradient and Hessian at `exp(v)`.
pub fn kn_derivatives<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    v: &[F],
) -> Result<KnEvaluation<F>> {
    let value = kn_value(w, x, v)?;
    let coeffs = softmax_coefficients(w, x, v);
    let k = w.dim_a();
    let mut gradient = vec![F::zero(); k];
    let weight_rows: Vec<Vec<F>> =
        x.support().iter().map(|&i| w.weight(i).to_floats::<F>()).collect();
    for (row, &c) in weight_rows.iter().zip(&coeffs) {
        for (g, &a) in gradient.iter_mut().zip(row) {
            *g = *g + c * a;
        }
    }
    // Centered covariance: summing nonnegative rank-one terms keeps the
    // quadratic form nonnegative in floating point as well.
    let mut hessian = vec![vec![F::zero(); k]; k];
    for (row, &c) in weight_rows.iter().zip(&coeffs) {
        let centered: Vec<F> = row.iter().zip(&gradient).map(|(&a, &g)| a - g).collect();
        for p in 0..k {
            for q in 0..k {
                hessian[p][q] = hessian[p][q] + F::c(2.0) * c * centered[p] * centered[q];
            }
        }
    }
    Ok(KnEvaluation { value, gradient, hessian })
}

/// `d^2/dt^2 psi(x, exp(v + t xi))` at `t = 0`, evaluated as a sum of
/// squares so it is nonnegative by construction.
fn second_derivative_along<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    v: &[F],
    xi: &[F],
) -> F {
    let coeffs = softmax_coefficients(w, x, v);
    let pairings: Vec<F> = x
        .support()
        .iter()
        .map(|&i| dot(&w.weight(i).to_floats::<F>(), xi))
        .collect();
    let mean: F = coeffs.iter().zip(&pairings).map(|(&c, &d)| c * d).sum();
    coeffs
        .iter()
        .zip(&pairings)
        .map(|(&c, &d)| F::c(2.0) * c * (d - mean) * (d - mean))
        .sum()
}

// ---------------------------------------------------------------------------
// Abstract Kempf-Ness systems
// ---------------------------------------------------------------------------

/// Anything carrying a Kempf-Ness function for the abelian action: a point
/// of projective space, or a finite-support measure. The property suite is
/// written once against this interface.
pub(crate) trait KnSystem<F: Real> {
    fn algebra_dim(&self) -> usize;
    /// `psi(., exp v)`.
    fn kn(&self, v: &[F]) -> Result<F>;
    /// Gradient map at the base object.
    fn moment(&self) -> Result<Vec<F>>;
    /// The system translated by `exp(v)`.
    fn translate(&self, v: &[F]) -> Result<Self>
    where
        Self: Sized;
    /// `d^2/dt^2 psi(., exp(t xi))` at 0, analytic form.
    fn second_derivative(&self, xi: &[F]) -> Result<F>;
    /// Exact test for `xi` in the stabilizer subalgebra.
    fn stabilizer_contains(&self, xi: &RationalVec) -> Result<bool>;
    /// Basis of the stabilizer subalgebra.
    fn stabilizer_basis(&self) -> Result<Vec<RationalVec>>;
}

pub(crate) struct PointSystem<'a, F: Real> {
    pub w: &'a WeightSystem,
    pub x: ProjPoint<F>,
}

impl<'a, F: Real> KnSystem<F> for PointSystem<'a, F> {
    fn algebra_dim(&self) -> usize {
        self.w.dim_a()
    }

    fn kn(&self, v: &[F]) -> Result<F> {
        kn_value(self.w, &self.x, v)
    }

    fn moment(&self) -> Result<Vec<F>> {
        moment_map(self.w, &self.x)
    }

    fn translate(&self, v: &[F]) -> Result<Self> {
        Ok(Self { w: self.w, x: act(self.w, v, &self.x)? })
    }

    fn second_derivative(&self, xi: &[F]) -> Result<F> {
        Ok(second_derivative_along(self.w, &self.x, &vec![F::zero(); self.w.dim_a()], xi))
    }

    fn stabilizer_contains(&self, xi: &RationalVec) -> Result<bool> {
        stabilizer_algebra(self.w, &self.x)?.algebra.contains(xi)
    }

    fn stabilizer_basis(&self) -> Result<Vec<RationalVec>> {
        Ok(stabilizer_algebra(self.w, &self.x)?.algebra.basis().to_vec())
    }
}

/// Numerical validation of the Kempf-Ness axioms on one system.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub trials: usize,
    pub seed: u64,
    /// Worst cocycle residual and its bound.
    pub cocycle_worst: f64,
    pub cocycle_tol: f64,
    pub cocycle_pass: bool,
    /// Worst relative mismatch between the finite-difference directional
    /// derivative and the moment pairing.
    pub gradient_worst: f64,
    pub gradient_tol: f64,
    pub gradient_pass: bool,
    /// Smallest second derivative along sampled non-stabilizer directions;
    /// must stay above the vanishing threshold (strict convexity).
    pub convexity_min: f64,
    /// Largest second derivative along exact stabilizer directions; must
    /// stay below the vanishing threshold.
    pub stabilizer_worst: f64,
    pub vanish_tol: f64,
    pub convexity_pass: bool,
    pub pass: bool,
}

pub(crate) fn check_system_properties<F: Real, S: KnSystem<F>>(
    system: &S,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    if trials == 0 {
        return Err(Error::EmptyInput("property check needs at least one trial"));
    }
    let k = system.algebra_dim();
    let mut cocycle_worst = 0.0f64;
    let mut gradient_worst = 0.0f64;
    let mut convexity_min = f64::INFINITY;
    let mut stabilizer_worst = 0.0f64;

    let stabilizer_basis = system.stabilizer_basis()?;
    let step = F::c(tolerances::GRADIENT_FD_STEP);

    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial as u64));
        let v: Vec<F> = random_direction(&mut rng, k, 2.0);
        let u: Vec<F> = random_direction(&mut rng, k, 2.0);
        let xi = random_integer_vector(&mut rng, k, 3);
        let xi_f: Vec<F> = xi.to_floats();

        // Cocycle: psi(x, exp(v+u)) = psi(x, exp v) + psi(exp(v)x, exp u).
        let sum: Vec<F> = v.iter().zip(&u).map(|(&a, &b)| a + b).collect();
        let whole = system.kn(&sum)?;
        let first = system.kn(&v)?;
        let rest = system.translate(&v)?.kn(&u)?;
        let residual = (whole - first - rest).abs().to_f64().unwrap_or(f64::INFINITY);
        cocycle_worst = cocycle_worst.max(residual);

        // Directional derivative against the moment pairing.
        let moment = system.moment()?;
        let pairing = dot(&moment, &xi_f);
        let plus: Vec<F> = xi_f.iter().map(|&c| c * step).collect();
        let minus: Vec<F> = xi_f.iter().map(|&c| -c * step).collect();
        let fd = (system.kn(&plus)? - system.kn(&minus)?) / (F::c(2.0) * step);
        let scale = pairing.abs().to_f64().unwrap_or(0.0).max(1.0);
        let mismatch = (fd - pairing).abs().to_f64().unwrap_or(f64::INFINITY) / scale;
        gradient_worst = gradient_worst.max(mismatch);

        // Convexity with degeneracy exactly on the stabilizer.
        let q = system.second_derivative(&xi_f)?.to_f64().unwrap_or(f64::NAN);
        if system.stabilizer_contains(&xi)? {
            stabilizer_worst = stabilizer_worst.max(q.abs());
        } else {
            convexity_min = convexity_min.min(q);
        }
    }

    // Stabilizer directions sampled explicitly: generic systems have a
    // trivial stabilizer, so random draws would never exercise this side.
    for xi in &stabilizer_basis {
        let q = system.second_derivative(&xi.to_floats())?.to_f64().unwrap_or(f64::NAN);
        stabilizer_worst = stabilizer_worst.max(q.abs());
    }
    if convexity_min == f64::INFINITY {
        // every sampled direction was stabilizing (fixed object)
        convexity_min = f64::NAN;
    }

    let vanish = tolerances::SECOND_DERIVATIVE_VANISH_TOL;
    let cocycle_pass = cocycle_worst <= tol;
    let gradient_pass = gradient_worst <= tolerances::GRADIENT_FD_REL_TOL;
    let convexity_pass =
        stabilizer_worst <= vanish && (convexity_min.is_nan() || convexity_min > vanish);
    Ok(PropertyReport {
        trials,
        seed,
        cocycle_worst,
        cocycle_tol: tol,
        cocycle_pass,
        gradient_worst,
        gradient_tol: tolerances::GRADIENT_FD_REL_TOL,
        gradient_pass,
        convexity_min,
        stabilizer_worst,
        vanish_tol: vanish,
        convexity_pass,
        pass: cocycle_pass && gradient_pass && convexity_pass,
    })
}

/// Validates the Kempf-Ness axioms at `x` on random group elements and
/// directions: the cocycle identity, the gradient/moment match, and
/// convexity along one-parameter subgroups degenerating exactly on the
/// stabilizer.
pub fn check_properties<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    w.check_point(x)?;
    check_system_properties(&PointSystem { w, x: x.clone() }, trials, seed, tol)
}

/// Module invariants at one point, for the verification suite: translation
/// invariance of stabilizer pairings, the affine-subspace containment of
/// moment differences, exact hull membership of the moment image, the
/// finite-difference Hessian match, and the PSD/symmetry contract of the
/// Hessian.
pub fn verify_invariants<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<InvariantCheck>> {
    w.check_point(x)?;
    let k = w.dim_a();
    let stab = stabilizer_algebra(w, x)?;
    let base_moment = moment_map(w, x)?;
    let base_moment_exact = moment_map_exact(w, x)?;

    let mut translation_worst = 0.0f64;
    let mut affine_violations = 0usize;
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, s as u64));
        let v: Vec<F> = random_direction(&mut rng, k, 2.0);
        let moved = act(w, &v, x)?;
        let moment = moment_map(w, &moved)?;
        for basis in stab.algebra.basis() {
            let b: Vec<F> = basis.to_floats();
            let delta = (dot(&moment, &b) - dot(&base_moment, &b))
                .abs()
                .to_f64()
                .unwrap_or(f64::INFINITY);
            translation_worst = translation_worst.max(delta);
        }
        // Exact statement: rationalized moment differences live in the span
        // of the active weight differences.
        let moment_exact = moment_map_exact(w, &moved)?;
        let diff = &moment_exact - &base_moment_exact;
        if !stab.complement.contains(&diff)? {
            affine_violations += 1;
        }
    }

    // The exact moment image is a strictly positive combination of the
    // active weights, hence in the relative interior of their hull.
    let orbit_hull = crate::hull::convex_hull(
        &x.support().iter().map(|&i| w.weight(i).clone()).collect::<Vec<_>>(),
    )?;
    let membership = orbit_hull.contains(&base_moment_exact)?;
    let hull_check = InvariantCheck::exact(
        "moment_in_active_weight_hull",
        usize::from(membership != Membership::Interior),
    )
    .with_detail(format!("classified {membership:?}"));

    // Hessian against second-order central differences of the value, on
    // spread-normalized directions.
    let hessian_check = hessian_fd_check(w, x, seed)?;

    // Symmetry and positive semidefiniteness of the covariance Hessian.
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x4e55));
    let v: Vec<F> = random_direction(&mut rng, k, 1.0);
    let eval = kn_derivatives(w, x, &v)?;
    let mut asym = 0.0f64;
    for p in 0..k {
        for q in 0..k {
            let d = (eval.hessian[p][q] - eval.hessian[q][p]).abs();
            asym = asym.max(d.to_f64().unwrap_or(f64::INFINITY));
        }
    }
    let min_eig = crate::linalg::symmetric_eigenvalues(&eval.hessian)
        .into_iter()
        .fold(F::infinity(), F::min)
        .to_f64()
        .unwrap_or(f64::NAN);

    Ok(vec![
        InvariantCheck::residual(
            "moment_translation_invariance_on_stabilizer",
            translation_worst,
            tolerances::TRANSLATION_TOL,
        ),
        InvariantCheck::exact("moment_difference_in_weight_difference_span", affine_violations),
        hull_check,
        hessian_check,
        InvariantCheck::residual("hessian_symmetry", asym, tolerances::HESSIAN_SYMMETRY_TOL),
        InvariantCheck::residual("hessian_psd_min_eigenvalue", (-min_eig).max(0.0), {
            tolerances::PSD_EIGENVALUE_TOL
        }),
    ])
}

/// Compares the analytic Hessian with mixed central differences of the
/// value at a random base element. Directions are scaled by the active
/// weight spread per coordinate so truncation stays below the relative
/// bound regardless of weight magnitudes.
fn hessian_fd_check<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    seed: u64,
) -> Result<InvariantCheck> {
    let k = w.dim_a();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xfd));
    let v: Vec<F> = random_direction(&mut rng, k, 0.5);
    let eval = kn_derivatives(w, x, &v)?;

    // spread per coordinate over the active weights
    let rows: Vec<Vec<F>> = x.support().iter().map(|&i| w.weight(i).to_floats()).collect();
    let spread: Vec<F> = (0..k)
        .map(|a| {
            let lo = rows.iter().map(|r| r[a]).fold(F::infinity(), F::min);
            let hi = rows.iter().map(|r| r[a]).fold(F::neg_infinity(), F::max);
            hi - lo
        })
        .collect();

    let t = F::c(tolerances::HESSIAN_FD_STEP);
    let probe = |dv: &[F]| -> Result<F> {
        let shifted: Vec<F> = v.iter().zip(dv).map(|(&a, &b)| a + b).collect();
        kn_value(w, x, &shifted)
    };

    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    let mut entries: Vec<(usize, usize, f64, f64)> = Vec::new();
    for a in 0..k {
        for b in a..k {
            if spread[a] == F::zero() || spread[b] == F::zero() {
                // no variation in this coordinate: the Hessian entry is zero
                let h = eval.hessian[a][b].abs().to_f64().unwrap_or(f64::INFINITY);
                worst = worst.max(h);
                continue;
            }
            let ea: Vec<F> =
                (0..k).map(|i| if i == a { t / spread[a] } else { F::zero() }).collect();
            let eb: Vec<F> =
                (0..k).map(|i| if i == b { t / spread[b] } else { F::zero() }).collect();
            let pp: Vec<F> = ea.iter().zip(&eb).map(|(&p, &q)| p + q).collect();
            let pm: Vec<F> = ea.iter().zip(&eb).map(|(&p, &q)| p - q).collect();
            let mp: Vec<F> = ea.iter().zip(&eb).map(|(&p, &q)| q - p).collect();
            let mm: Vec<F> = ea.iter().zip(&eb).map(|(&p, &q)| -p - q).collect();
            let fd = (probe(&pp)? - probe(&pm)? - probe(&mp)? + probe(&mm)?)
                / (F::c(4.0) * t * t);
            let analytic = eval.hessian[a][b] / (spread[a] * spread[b]);
            entries.push((
                a,
                b,
                fd.to_f64().unwrap_or(f64::NAN),
                analytic.to_f64().unwrap_or(f64::NAN),
            ));
            scale = scale.max(analytic.abs().to_f64().unwrap_or(0.0));
        }
    }
    for (_, _, fd, analytic) in &entries {
        worst = worst.max((fd - analytic).abs() / scale);
    }
    Ok(InvariantCheck::residual(
        "hessian_matches_finite_differences",
        worst,
        tolerances::HESSIAN_FD_REL_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::random_point;

    fn simplex_weights() -> WeightSystem {
        WeightSystem::from_integers(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap()
    }

    fn point(values: &[f64]) -> ProjPoint<f64> {
        ProjPoint::from_reals(values).unwrap()
    }

    #[test]
    fn kn_value_examples() {
        let w = simplex_weights();
        // normalized point at the identity
        let x = point(&[0.2, -0.7, 0.4]);
        assert_eq!(kn_value(&w, &x, &[0.0, 0.0]).unwrap(), 0.0);
        // basis point: psi = <alpha_i, v>
        let e1 = ProjPoint::<f64>::basis(3, 1).unwrap();
        let v = [0.37, -2.11];
        assert!((kn_value(&w, &e1, &v).unwrap() - 0.37).abs() < 1e-15);
        // two-coordinate hand evaluation: 1/2 log((1 + 4)/2)
        let w1 = WeightSystem::from_integers(1, &[&[0], &[1]]).unwrap();
        let x = point(&[1.0, 1.0]);
        let got = kn_value(&w1, &x, &[2.0f64.ln()]).unwrap();
        assert!((got - 0.5 * (5.0f64 / 2.0).ln()).abs() < 1e-15);
        assert!(kn_value(&w, &point(&[1.0, 1.0, 1.0]), &[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn kn_value_survives_huge_exponents() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 1.0]);
        let big = kn_value(&w, &x, &[800.0, -900.0]).unwrap();
        assert!(big.is_finite());
        // dominated by the top weight pairing: ~ <alpha_1, v> + log corrections
        assert!((big - 800.0).abs() < 1.0);
    }

    #[test]
    fn moment_map_examples() {
        let w = simplex_weights();
        // fixed point maps to its weight
        let e2 = ProjPoint::<f64>::basis(3, 2).unwrap();
        assert_eq!(moment_map(&w, &e2).unwrap(), vec![0.0, 1.0]);
        // symmetric point maps to the barycenter
        let x = point(&[1.0, 1.0, 1.0]);
        let mu = moment_map(&w, &x).unwrap();
        assert!((mu[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((mu[1] - 1.0 / 3.0).abs() < 1e-15);
        // coefficients (1/5, 4/5, 0)
        let x = point(&[1.0, 2.0, 0.0]);
        let mu = moment_map(&w, &x).unwrap();
        assert!((mu[0] - 0.8).abs() < 1e-15);
        assert!(mu[1].abs() < 1e-15);
    }

    #[test]
    fn exact_moment_is_interior_of_active_hull() {
        let w = simplex_weights();
        let x = random_point::<f64>(&w, &[0, 1, 2], 11).unwrap();
        let mu = moment_map_exact(&w, &x).unwrap();
        let hull = w.full_polytope().unwrap();
        assert_eq!(hull.contains(&mu).unwrap(), Membership::Interior);
        // matches the float moment closely
        let muf = moment_map(&w, &x).unwrap();
        for (e, f) in mu.to_floats::<f64>().iter().zip(&muf) {
            assert!((e - f).abs() < 1e-14);
        }
    }

    #[test]
    fn derivatives_on_fixed_and_generic_points() {
        let w = simplex_weights();
        // fixed point: gradient alpha_i, hessian zero
        let e0 = ProjPoint::<f64>::basis(3, 0).unwrap();
        let eval = kn_derivatives(&w, &e0, &[0.0, 0.0]).unwrap();
        assert_eq!(eval.gradient, vec![0.0, 0.0]);
        assert!(eval.hessian.iter().flatten().all(|&h| h == 0.0));
        // fair two-coordinate point: hessian = 2 Var(Bernoulli(1/2)) = 1/2
        let w1 = WeightSystem::from_integers(1, &[&[0], &[1]]).unwrap();
        let x = point(&[1.0, 1.0]);
        let eval = kn_derivatives(&w1, &x, &[0.0]).unwrap();
        assert!((eval.gradient[0] - 0.5).abs() < 1e-15);
        assert!((eval.hessian[0][0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hessian_kernel_is_the_stabilizer() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 0.0]);
        // along the stabilizer direction (0,1) the second derivative vanishes
        let q = second_derivative_along(&w, &x, &[0.0, 0.0], &[0.0, 1.0]);
        assert!(q.abs() < 1e-15);
        // along (1,0) it is strictly positive
        let q = second_derivative_along(&w, &x, &[0.0, 0.0], &[1.0, 0.0]);
        assert!(q > 0.4);
    }

    #[test]
    fn property_report_passes_on_generic_point() {
        let w = simplex_weights();
        let x = random_point::<f64>(&w, &[0, 1, 2], 3).unwrap();
        let report = check_properties(&w, &x, 64, 17, tolerances::COCYCLE_TOL).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.convexity_min > tolerances::SECOND_DERIVATIVE_VANISH_TOL);
    }

    #[test]
    fn property_report_on_fixed_point() {
        let w = simplex_weights();
        let e1 = ProjPoint::<f64>::basis(3, 1).unwrap();
        let report = check_properties(&w, &e1, 32, 5, tolerances::COCYCLE_TOL).unwrap();
        // all directions stabilize a fixed point; convexity side is vacuous
        assert!(report.pass, "{report:?}");
        assert!(report.convexity_min.is_nan());
        assert!(report.stabilizer_worst <= tolerances::SECOND_DERIVATIVE_VANISH_TOL);
    }

    #[test]
    fn property_report_with_partial_stabilizer() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 0.0]);
        let report = check_properties(&w, &x, 64, 23, tolerances::COCYCLE_TOL).unwrap();
        assert!(report.pass, "{report:?}");
        // some sampled integer directions lie in span{(0,1)} and some do not
        assert!(report.stabilizer_worst <= tolerances::SECOND_DERIVATIVE_VANISH_TOL);
        assert!(report.convexity_min > tolerances::SECOND_DERIVATIVE_VANISH_TOL);
    }

    #[test]
    fn invariants_hold_on_sampled_points() {
        let w = simplex_weights();
        for (i, support) in [vec![0, 1, 2], vec![0, 1], vec![2]].into_iter().enumerate() {
            let x = random_point::<f64>(&w, &support, 100 + i as u64).unwrap();
            let checks = verify_invariants(&w, &x, 40, 7).unwrap();
            for c in &checks {
                assert!(c.pass, "support {support:?}: {c:?}");
            }
        }
    }

    #[test]
    fn trials_must_be_positive() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 1.0]);
        assert!(check_properties(&w, &x, 0, 0, 1e-9).is_err());
    }
}
