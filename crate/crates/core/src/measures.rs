//! Finite-support probability measures under the pushforward action.
//!
//! The Kempf-Ness function of a measure is the weighted sum of the
//! per-atom functions and its gradient map is the weighted average of the
//! atom moments, so integrals reduce to rational-weighted sums. The closure
//! of the moment image of a measure orbit is the weighted Minkowski sum of
//! the per-atom orbit polytopes: the orbit function is a weighted sum of
//! per-atom convex functions, so its asymptotic slope along any direction
//! is the matching weighted sum of support values; the support-function
//! check in the verification suite ties the polytope to the actual flow.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{minkowski_sum, Membership, Polytope};
use crate::kempfness::{
    check_system_properties, kn_derivatives, kn_value, moment_map, moment_map_exact, KnSystem,
    PropertyReport,
};
use crate::newton;
use crate::orbitgeom::{flow_limit, orbit_polytope, random_interior_target};
use crate::rational::{kernel_basis, Rational, RationalVec};
use crate::report::InvariantCheck;
use crate::sampling::{derive_seed, random_direction, random_integer_vector};
use crate::scalar::{dot, norm, Real};
use crate::tolerances;
use crate::weights::{act, stabilizer_algebra, ProjPoint, Subalgebra, WeightSystem};

/// A finite-support probability measure: atoms with exact positive weights
/// summing to one.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "F: Real"))]
pub struct DiscreteMeasure<F> {
    atoms: Vec<Atom<F>>,
}

/// One atom of a discrete measure.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "F: Real"))]
pub struct Atom<F> {
    pub point: ProjPoint<F>,
    #[serde(with = "crate::rational::serde_rational")]
    pub weight: Rational,
}

impl<F: Real> DiscreteMeasure<F> {
    pub fn new(atoms: Vec<(ProjPoint<F>, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("a measure needs at least one atom".into()));
        }
        let num_coords = atoms[0].0.num_coords();
        let mut total = Rational::zero();
        for (point, weight) in &atoms {
            if point.num_coords() != num_coords {
                return Err(Error::DimensionMismatch {
                    expected: num_coords,
                    got: point.num_coords(),
                });
            }
            if !weight.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "atom weight {} is not positive",
                    crate::rational::format_rational(weight)
                )));
            }
            total += weight;
        }
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "atom weights sum to {}, expected 1",
                crate::rational::format_rational(&total)
            )));
        }
        Ok(Self {
            atoms: atoms.into_iter().map(|(point, weight)| Atom { point, weight }).collect(),
        })
    }

    /// The point mass at `x`.
    pub fn dirac(x: ProjPoint<F>) -> Self {
        Self { atoms: vec![Atom { point: x, weight: Rational::one() }] }
    }

    pub fn atoms(&self) -> &[Atom<F>] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }
}

/// Moves every atom by `exp(v)`; weights are untouched.
pub fn pushforward<F: Real>(
    w: &WeightSystem,
    v: &[F],
    nu: &DiscreteMeasure<F>,
) -> Result<DiscreteMeasure<F>> {
    let atoms = nu
        .atoms
        .iter()
        .map(|a| Ok(Atom { point: act(w, v, &a.point)?, weight: a.weight.clone() }))
        .collect::<Result<_>>()?;
    Ok(DiscreteMeasure { atoms })
}

/// Atomwise flow limit along `beta`; these are the invariant measures the
/// orbit closure contributes when `beta` exposes vertices.
pub fn measure_flow_limit<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
    beta: &RationalVec,
) -> Result<DiscreteMeasure<F>> {
    let atoms = nu
        .atoms
        .iter()
        .map(|a| {
            Ok(Atom { point: flow_limit(w, &a.point, beta)?.limit, weight: a.weight.clone() })
        })
        .collect::<Result<_>>()?;
    Ok(DiscreteMeasure { atoms })
}

/// The integral Kempf-Ness function: the weighted sum of per-atom values.
pub fn measure_kn<F: Real>(w: &WeightSystem, nu: &DiscreteMeasure<F>, v: &[F]) -> Result<F> {
    let mut total = F::zero();
    for a in &nu.atoms {
        total = total + F::c(a.weight.to_f64().unwrap_or(f64::NAN)) * kn_value(w, &a.point, v)?;
    }
    Ok(total)
}

/// The measure gradient map: the weighted average of atom moments.
pub fn measure_moment<F: Real>(w: &WeightSystem, nu: &DiscreteMeasure<F>) -> Result<Vec<F>> {
    let mut out = vec![F::zero(); w.dim_a()];
    for a in &nu.atoms {
        let weight = F::c(a.weight.to_f64().unwrap_or(f64::NAN));
        for (o, m) in out.iter_mut().zip(moment_map(w, &a.point)?) {
            *o = *o + weight * m;
        }
    }
    Ok(out)
}

/// Exact measure moment: rational weights against rationalized atom
/// moments.
pub fn measure_moment_exact<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
) -> Result<RationalVec> {
    let mut out = RationalVec::zeros(w.dim_a());
    for a in &nu.atoms {
        out = &out + &moment_map_exact(w, &a.point)?.scale(&a.weight);
    }
    Ok(out)
}

/// The closure of the measure orbit's moment image: the weighted Minkowski
/// sum of the per-atom orbit polytopes.
pub fn measure_orbit_polytope<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
) -> Result<Polytope> {
    let terms = nu
        .atoms
        .iter()
        .map(|a| Ok((a.weight.clone(), orbit_polytope(w, &a.point)?)))
        .collect::<Result<Vec<_>>>()?;
    minkowski_sum(&terms)
}

/// The common stabilizer of all atoms and its orthogonal complement (the
/// span of every atom's active weight differences).
pub fn common_stabilizer<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
) -> Result<(Subalgebra, Subalgebra)> {
    let mut diffs: Vec<RationalVec> = Vec::new();
    for a in &nu.atoms {
        let support = a.point.support();
        let first = support[0];
        for &i in &support[1..] {
            diffs.push(w.weight(i) - w.weight(first));
        }
    }
    let kernel = kernel_basis(&diffs, w.dim_a());
    Ok((Subalgebra::new(w.dim_a(), kernel)?, Subalgebra::new(w.dim_a(), diffs)?))
}

pub(crate) struct MeasureSystem<'a, F: Real> {
    pub w: &'a WeightSystem,
    pub nu: DiscreteMeasure<F>,
}

impl<'a, F: Real> KnSystem<F> for MeasureSystem<'a, F> {
    fn algebra_dim(&self) -> usize {
        self.w.dim_a()
    }

    fn kn(&self, v: &[F]) -> Result<F> {
        measure_kn(self.w, &self.nu, v)
    }

    fn moment(&self) -> Result<Vec<F>> {
        measure_moment(self.w, &self.nu)
    }

    fn translate(&self, v: &[F]) -> Result<Self> {
        Ok(Self { w: self.w, nu: pushforward(self.w, v, &self.nu)? })
    }

    fn second_derivative(&self, xi: &[F]) -> Result<F> {
        let mut total = F::zero();
        for a in &self.nu.atoms {
            let eval = kn_derivatives(self.w, &a.point, &vec![F::zero(); self.w.dim_a()])?;
            let hxi = crate::linalg::mat_vec(&eval.hessian, xi);
            total = total + F::c(a.weight.to_f64().unwrap_or(f64::NAN)) * dot(xi, &hxi);
        }
        Ok(total)
    }

    fn stabilizer_contains(&self, xi: &RationalVec) -> Result<bool> {
        for a in &self.nu.atoms {
            if !stabilizer_algebra(self.w, &a.point)?.algebra.contains(xi)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn stabilizer_basis(&self) -> Result<Vec<RationalVec>> {
        Ok(common_stabilizer(self.w, &self.nu)?.0.basis().to_vec())
    }
}

/// The Kempf-Ness axioms for the pushforward action on measures, at the
/// same tolerances as the point case.
pub fn check_measure_properties<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    check_system_properties(&MeasureSystem { w, nu: nu.clone() }, trials, seed, tol)
}

/// Inverts the measure moment map: finds `v`, orthogonal to the common
/// stabilizer, with `Phi(exp(v)_* nu) = target`. The target must lie in
/// the relative interior of the Minkowski polytope (checked exactly).
pub fn measure_invert<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
    target: &RationalVec,
    tol: f64,
    max_iter: usize,
) -> Result<crate::orbitgeom::InversionResult<F>> {
    target.check_dim(w.dim_a())?;
    let polytope = measure_orbit_polytope(w, nu)?;
    let membership = polytope.contains(target)?;
    if membership != Membership::Interior {
        return Err(Error::TargetNotInterior { membership });
    }

    let (_, complement) = common_stabilizer(w, nu)?;
    let complement_f: Vec<Vec<F>> =
        complement.basis().iter().map(RationalVec::to_floats).collect();
    let basis = crate::linalg::orthonormalize(&complement_f);
    let dim = basis.len();
    let target_f: Vec<F> = target.to_floats();
    if dim == 0 {
        return Ok(crate::orbitgeom::InversionResult {
            v: vec![F::zero(); w.dim_a()],
            residual: 0.0,
            iterations: 0,
        });
    }

    let embed = |u: &[F]| -> Vec<F> {
        let mut v = vec![F::zero(); w.dim_a()];
        for (coeff, direction) in u.iter().zip(&basis) {
            for (vi, di) in v.iter_mut().zip(direction) {
                *vi = *vi + *coeff * *di;
            }
        }
        v
    };

    let objective = |u: &[F]| -> Result<newton::Evaluation<F>> {
        let v = embed(u);
        let k = w.dim_a();
        let mut value = -dot(&target_f, &v);
        let mut grad_full: Vec<F> = target_f.iter().map(|&t| -t).collect();
        let mut hess_full = vec![vec![F::zero(); k]; k];
        for a in &nu.atoms {
            let weight = F::c(a.weight.to_f64().unwrap_or(f64::NAN));
            let eval = kn_derivatives(w, &a.point, &v)?;
            value = value + weight * eval.value;
            for (g, m) in grad_full.iter_mut().zip(&eval.gradient) {
                *g = *g + weight * *m;
            }
            for p in 0..k {
                for q in 0..k {
                    hess_full[p][q] = hess_full[p][q] + weight * eval.hessian[p][q];
                }
            }
        }
        let gradient: Vec<F> = basis.iter().map(|b| dot(b, &grad_full)).collect();
        let hessian: Vec<Vec<F>> = basis
            .iter()
            .map(|bi| {
                let hbi = crate::linalg::mat_vec(&hess_full, bi);
                basis.iter().map(|bj| dot(bj, &hbi)).collect()
            })
            .collect();
        Ok((value, gradient, hessian))
    };

    let (u, residual, iterations) = newton::minimize(dim, &objective, F::c(tol), max_iter)?;
    Ok(crate::orbitgeom::InversionResult {
        v: embed(&u),
        residual: residual.to_f64().unwrap_or(f64::NAN),
        iterations,
    })
}

/// The measure-layer invariant suite: moment linearity, the Kempf-Ness
/// axioms for the pushforward action, exact containment of sampled moment
/// images in the Minkowski polytope, the support-function identity tying
/// the polytope to the flow, vertex attainment by invariant limit
/// measures, and inversion round-trips.
pub fn verify_invariants<F: Real>(
    w: &WeightSystem,
    nu: &DiscreteMeasure<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<InvariantCheck>> {
    let polytope = measure_orbit_polytope(w, nu)?;
    let mut checks = Vec::new();

    // Linearity of the moment in the weights: float path against the exact
    // rational-weighted sum of atom moments.
    let float_moment = measure_moment(w, nu)?;
    let exact_moment = measure_moment_exact(w, nu)?;
    let mut linearity_worst = 0.0f64;
    for (f, e) in float_moment.iter().zip(exact_moment.to_floats::<F>()) {
        let d = (*f - e).abs().to_f64().unwrap_or(f64::INFINITY);
        linearity_worst = linearity_worst.max(d);
    }
    checks.push(InvariantCheck::residual("measure_moment_linearity", linearity_worst, 1e-12));

    // Kempf-Ness axioms for the pushforward action.
    let report = check_measure_properties(w, nu, samples.max(1), seed, tolerances::COCYCLE_TOL)?;
    checks.push(
        InvariantCheck::residual(
            "measure_kempf_ness_cocycle",
            report.cocycle_worst,
            report.cocycle_tol,
        ),
    );
    checks.push(InvariantCheck::residual(
        "measure_kempf_ness_gradient",
        report.gradient_worst,
        report.gradient_tol,
    ));
    checks.push(
        InvariantCheck::exact("measure_kempf_ness_convexity", usize::from(!report.convexity_pass))
            .with_detail(format!(
                "stabilizer worst {:+e}, off-stabilizer min {:+e}",
                report.stabilizer_worst, report.convexity_min
            )),
    );

    // Sampled moment image inside the Minkowski polytope, exactly.
    let image_samples = samples.min(100);
    let mut image_violations = 0usize;
    for s in 0..image_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x60_0000 + s as u64));
        let v: Vec<F> = random_direction(&mut rng, w.dim_a(), 2.5);
        let mu = measure_moment_exact(w, &pushforward(w, &v, nu)?)?;
        let membership = polytope.contains(&mu)?;
        if membership == Membership::Outside || membership == Membership::OffAffineHull {
            image_violations += 1;
        }
    }
    checks.push(
        InvariantCheck::exact("sampled_measure_image_in_minkowski_polytope", image_violations)
            .with_detail(format!("{image_samples} samples")),
    );

    // Support-function identity: far along the flow, the moment pairing
    // reaches the Minkowski support value. The horizon is scaled by the
    // smallest spectral gap across atoms.
    let beta_trials = samples.min(100);
    let mut support_worst = 0.0f64;
    for s in 0..beta_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x70_0000 + s as u64));
        let beta = random_integer_vector(&mut rng, w.dim_a(), 3);
        let support_value =
            polytope.support_value(&beta)?.to_f64().unwrap_or(f64::NAN);
        let mut gap: Option<Rational> = None;
        for a in &nu.atoms {
            let flow = flow_limit(w, &a.point, &beta)?;
            for &i in a.point.support() {
                let d = w.weight(i).dot(&beta);
                if d != flow.achieved_value {
                    let g = &flow.achieved_value - &d;
                    if gap.as_ref().map_or(true, |cur| g < *cur) {
                        gap = Some(g);
                    }
                }
            }
        }
        let horizon = match gap {
            Some(g) => 30.0 / g.to_f64().unwrap_or(1.0),
            None => 0.0, // every atom already sits on its top level
        };
        let beta_f: Vec<F> = beta.to_floats();
        let v: Vec<F> = beta_f.iter().map(|&b| b * F::c(horizon)).collect();
        let mu = measure_moment(w, &pushforward(w, &v, nu)?)?;
        let pairing = dot(&mu, &beta_f).to_f64().unwrap_or(f64::NAN);
        support_worst = support_worst.max((pairing - support_value).abs());
    }
    checks.push(InvariantCheck::residual(
        "support_function_matches_flow",
        support_worst,
        tolerances::SUPPORT_FUNCTION_TOL,
    ));

    // Vertices of the Minkowski polytope are attained by invariant
    // atomwise limit measures, exactly.
    let mut vertex_violations = 0usize;
    if polytope.dim() == 0 {
        if measure_moment_exact(w, nu)? != polytope.vertices()[0] {
            vertex_violations += 1;
        }
    } else {
        for face in polytope.enumerate_proper_faces()? {
            if face.vertex_indices.len() != 1 {
                continue;
            }
            let vertex = &polytope.vertices()[face.vertex_indices[0]];
            let limit = measure_flow_limit(w, nu, &face.selector)?;
            let invariant = limit
                .atoms
                .iter()
                .map(|a| crate::weights::is_fixed(w, &a.point))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|fixed| fixed);
            if !invariant || measure_moment_exact(w, &limit)? != *vertex {
                vertex_violations += 1;
            }
        }
    }
    checks.push(InvariantCheck::exact(
        "minkowski_vertices_attained_by_limit_measures",
        vertex_violations,
    ));

    // Inversion round-trips on exact interior targets.
    let round_trips = samples.min(50).max(1);
    let mut invert_worst = 0.0f64;
    for s in 0..round_trips {
        let target = random_interior_target(&polytope, derive_seed(seed, 0x80_0000 + s as u64));
        let inversion =
            measure_invert(w, nu, &target, tolerances::NEWTON_TOL, tolerances::NEWTON_MAX_ITER)?;
        let mu = measure_moment(w, &pushforward(w, &inversion.v, nu)?)?;
        let target_f: Vec<F> = target.to_floats();
        let err: Vec<F> = mu.iter().zip(&target_f).map(|(&m, &t)| m - t).collect();
        invert_worst = invert_worst.max(norm(&err).to_f64().unwrap_or(f64::INFINITY));
    }
    checks.push(InvariantCheck::residual(
        "measure_invert_round_trip",
        invert_worst,
        tolerances::LEGENDRE_ROUND_TRIP_TOL,
    ));

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{projective_distance, random_point};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn segment_weights() -> WeightSystem {
        WeightSystem::from_integers(1, &[&[0], &[1]]).unwrap()
    }

    fn simplex_weights() -> WeightSystem {
        WeightSystem::from_integers(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap()
    }

    fn point(values: &[f64]) -> ProjPoint<f64> {
        ProjPoint::from_reals(values).unwrap()
    }

    #[test]
    fn measure_construction_invariants() {
        let x = point(&[1.0, 1.0]);
        // weights must sum to one
        assert!(DiscreteMeasure::new(vec![(x.clone(), q(1, 2))]).is_err());
        // weights must be positive
        assert!(DiscreteMeasure::new(vec![(x.clone(), q(3, 2)), (x.clone(), q(-1, 2))]).is_err());
        assert!(DiscreteMeasure::<f64>::new(vec![]).is_err());
        let nu = DiscreteMeasure::new(vec![(x.clone(), q(1, 2)), (x, q(1, 2))]).unwrap();
        assert_eq!(nu.num_atoms(), 2);
    }

    #[test]
    fn pushforward_moves_atoms_and_keeps_weights() {
        let w = segment_weights();
        let x = point(&[1.0, 1.0]);
        let nu = DiscreteMeasure::new(vec![(x.clone(), q(1, 3)), (x.clone(), q(2, 3))]).unwrap();
        // v = 0 leaves the measure unchanged
        let same = pushforward(&w, &[0.0], &nu).unwrap();
        for (a, b) in nu.atoms().iter().zip(same.atoms()) {
            assert!(projective_distance(&a.point, &b.point) < 1e-15);
            assert_eq!(a.weight, b.weight);
        }
        // a Dirac mass moves like its point
        let delta = DiscreteMeasure::dirac(x.clone());
        let moved = pushforward(&w, &[0.8], &delta).unwrap();
        let expected = act(&w, &[0.8], &x).unwrap();
        assert!(projective_distance(&moved.atoms()[0].point, &expected) < 1e-15);
    }

    #[test]
    fn measure_kn_examples() {
        let w = segment_weights();
        // 1/2 delta_e0 + 1/2 delta_e1 at v = 1: 1/2 * 0 + 1/2 * 1
        let nu = DiscreteMeasure::new(vec![
            (ProjPoint::basis(2, 0).unwrap(), q(1, 2)),
            (ProjPoint::basis(2, 1).unwrap(), q(1, 2)),
        ])
        .unwrap();
        assert!((measure_kn(&w, &nu, &[1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(measure_kn(&w, &nu, &[0.0]).unwrap(), 0.0);
        // a Dirac mass reduces to the point function
        let x = point(&[0.6, -0.8]);
        let delta = DiscreteMeasure::dirac(x.clone());
        let v = [0.37];
        assert!(
            (measure_kn(&w, &delta, &v).unwrap() - kn_value(&w, &x, &v).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn measure_moment_examples() {
        let w = simplex_weights();
        // 1/2 delta_{[1:1:1]} + 1/2 delta_{e0}: 1/2 (1/3,1/3) + 1/2 (0,0)
        let nu = DiscreteMeasure::new(vec![
            (point(&[1.0, 1.0, 1.0]), q(1, 2)),
            (ProjPoint::basis(3, 0).unwrap(), q(1, 2)),
        ])
        .unwrap();
        let mu = measure_moment(&w, &nu).unwrap();
        assert!((mu[0] - 1.0 / 6.0).abs() < 1e-15);
        assert!((mu[1] - 1.0 / 6.0).abs() < 1e-15);
        let exact = measure_moment_exact(&w, &nu).unwrap();
        assert_eq!(exact, RationalVec::parse(&["1/6", "1/6"]).unwrap());
    }

    #[test]
    fn measure_polytope_examples() {
        let w = segment_weights();
        // Dirac mass: the atom's orbit polytope
        let x = point(&[1.0, 1.0]);
        let delta = DiscreteMeasure::dirac(x.clone());
        assert_eq!(
            measure_orbit_polytope(&w, &delta).unwrap(),
            orbit_polytope(&w, &x).unwrap()
        );
        // two equal atoms: 1/2 [0,1] + 1/2 [0,1] = [0,1]
        let nu =
            DiscreteMeasure::new(vec![(x.clone(), q(1, 2)), (x.clone(), q(1, 2))]).unwrap();
        let p = measure_orbit_polytope(&w, &nu).unwrap();
        assert_eq!(
            p.vertices(),
            &[RationalVec::from_integers(&[0]), RationalVec::from_integers(&[1])]
        );
        // fixed-point atoms: a single point
        let nu = DiscreteMeasure::new(vec![
            (ProjPoint::<f64>::basis(2, 0).unwrap(), q(1, 4)),
            (ProjPoint::<f64>::basis(2, 1).unwrap(), q(3, 4)),
        ])
        .unwrap();
        let p = measure_orbit_polytope(&w, &nu).unwrap();
        assert_eq!(p.vertices(), &[RationalVec::parse(&["3/4"]).unwrap()]);
    }

    #[test]
    fn measure_invert_hand_example() {
        let w = segment_weights();
        let x = point(&[1.0, 1.0]);
        let nu = DiscreteMeasure::new(vec![(x.clone(), q(1, 2)), (x, q(1, 2))]).unwrap();
        // sigmoid(2v) = 3/4 at v = ln(3)/2
        let target = RationalVec::parse(&["3/4"]).unwrap();
        let result = measure_invert(&w, &nu, &target, 1e-12, 100).unwrap();
        assert!((result.v[0] - 3.0f64.ln() / 2.0).abs() < 1e-9);
        let mu = measure_moment(&w, &pushforward(&w, &result.v, &nu).unwrap()).unwrap();
        assert!((mu[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn measure_invert_agrees_with_point_inversion_on_diracs() {
        let w = simplex_weights();
        let x = random_point::<f64>(&w, &[0, 1, 2], 31).unwrap();
        let delta = DiscreteMeasure::dirac(x.clone());
        let target = RationalVec::parse(&["2/5", "1/5"]).unwrap();
        let from_measure = measure_invert(&w, &delta, &target, 1e-11, 100).unwrap();
        let from_point = crate::orbitgeom::invert_moment(&w, &x, &target, 1e-11, 100).unwrap();
        for (a, b) in from_measure.v.iter().zip(&from_point.v) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn measure_invert_symmetry_and_rejection() {
        let w = segment_weights();
        let x = point(&[1.0, 1.0]);
        let nu = DiscreteMeasure::new(vec![(x.clone(), q(1, 2)), (x, q(1, 2))]).unwrap();
        // symmetric target: v = 0
        let result = measure_invert(&w, &nu, &RationalVec::parse(&["1/2"]).unwrap(), 1e-10, 100)
            .unwrap();
        assert!(result.v[0].abs() < 1e-10);
        // boundary rejected
        let err = measure_invert(&w, &nu, &RationalVec::from_integers(&[1]), 1e-10, 100)
            .unwrap_err();
        assert!(matches!(err, Error::TargetNotInterior { membership: Membership::Boundary }));
    }

    #[test]
    fn measure_properties_and_invariants() {
        let w = simplex_weights();
        let nu = DiscreteMeasure::new(vec![
            (random_point::<f64>(&w, &[0, 1, 2], 51).unwrap(), q(1, 2)),
            (random_point::<f64>(&w, &[0, 1], 52).unwrap(), q(1, 3)),
            (ProjPoint::basis(3, 2).unwrap(), q(1, 6)),
        ])
        .unwrap();
        let report = check_measure_properties(&w, &nu, 48, 9, tolerances::COCYCLE_TOL).unwrap();
        assert!(report.pass, "{report:?}");
        let checks = verify_invariants(&w, &nu, 30, 41).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn measure_with_shared_stabilizer_direction() {
        // both atoms supported on {0,1}: common stabilizer is the kernel of
        // a single difference
        let w = simplex_weights();
        let nu = DiscreteMeasure::new(vec![
            (random_point::<f64>(&w, &[0, 1], 61).unwrap(), q(1, 2)),
            (random_point::<f64>(&w, &[0, 1], 62).unwrap(), q(1, 2)),
        ])
        .unwrap();
        let (stab, complement) = common_stabilizer(&w, &nu).unwrap();
        assert_eq!(stab.dim(), 1);
        assert_eq!(complement.dim(), 1);
        let checks = verify_invariants(&w, &nu, 25, 43).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }
}
