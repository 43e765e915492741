//! Orbit geometry: flow limits, momentum polytopes, moment inversion,
//! face-orbit correspondence and density experiments.
//!
//! For a diagonal action the limit of `exp(t beta) x` as `t -> infinity`
//! is combinatorial: the coordinates surviving are exactly those whose
//! weight pairing with `beta` is maximal over the support, so the limit,
//! its support and the achieved pairing value are computed exactly. A
//! sampled flow cross-check (`flow_monotonicity` in the verification
//! suite) validates the combinatorial answer against the actual dynamics.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{convex_hull, Membership, Polytope};
use crate::kempfness::{kn_derivatives, moment_map, moment_map_exact};
use crate::newton;
use crate::rational::{format_rational, spans_equal, Rational, RationalVec};
use crate::report::InvariantCheck;
use crate::sampling::{derive_seed, random_direction, random_integer_vector};
use crate::scalar::{dot, norm, Real};
use crate::tolerances;
use crate::weights::{
    act, is_fixed, random_point, random_real_point, stabilizer_algebra, ProjPoint, WeightSystem,
};

/// The limit of `exp(t beta) x` as `t -> +infinity`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "F: Real"))]
pub struct FlowResult<F> {
    /// The limit point, supported on the top pairing level.
    pub limit: ProjPoint<F>,
    /// `max_{i active} <alpha_i, beta>`, exact.
    #[serde(with = "crate::rational::serde_rational")]
    pub achieved_value: Rational,
    /// Active indices of the limit, exact.
    pub limit_support: Vec<usize>,
}

/// Critical values of the pairing `<alpha_i, beta>` over all coordinates,
/// with the index set of each level.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalData {
    /// Strictly increasing values.
    #[serde(with = "crate::rational::serde_rational_seq")]
    pub values: Vec<Rational>,
    /// `level_supports[j]` holds the indices pairing to `values[j]`;
    /// together they partition the coordinate set.
    pub level_supports: Vec<Vec<usize>>,
}

/// Which family of points a density experiment samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "pattern")]
pub enum SampleSpace {
    /// Points with every homogeneous coordinate active.
    FullSupport,
    /// Points of the real locus (all coordinates real), full support.
    RealLocus,
    /// Points with the given exact support pattern.
    SupportPattern(Vec<usize>),
}

/// Outcome of a density experiment.
///
/// The reference polytope is the momentum image of the sampled family: the
/// hull of all weights for the full space and the real locus, the hull of
/// the pattern weights for a fixed support pattern. `ambient_successes`
/// additionally counts samples realizing the momentum polytope of the whole
/// projective space, which a proper support pattern can only do when that
/// polytope degenerates.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub space: SampleSpace,
    pub samples: usize,
    pub seed: u64,
    /// How many samples realized the full reference polytope.
    pub successes: usize,
    /// Exact success fraction as `"p/q"`.
    pub success_fraction: String,
    pub success_fraction_float: f64,
    /// How many samples realized the momentum polytope of the whole space.
    pub ambient_successes: usize,
    pub ambient_success_fraction: String,
    /// Vertices of the reference polytope.
    pub reference_vertices: Vec<RationalVec>,
    /// Per reference vertex: how many samples' orbit polytopes contain it.
    pub vertex_membership: Vec<VertexMembership>,
}

/// Membership statistics of one reference vertex.
#[derive(Debug, Clone, Serialize)]
pub struct VertexMembership {
    pub vertex: RationalVec,
    pub members: usize,
    pub fraction: String,
}

/// Outcome of one boundary-stabilizer comparison.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCheck {
    /// Where the limit's moment image sits relative to the orbit polytope.
    pub membership: Membership,
    pub on_boundary: bool,
    pub stabilizer_dim_start: usize,
    pub stabilizer_dim_limit: usize,
    pub limit_support: Vec<usize>,
    /// Vacuously true off the boundary; on the boundary requires a strict
    /// stabilizer jump.
    pub pass: bool,
}

/// Result of a moment inversion.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "F: Real + Serialize"))]
pub struct InversionResult<F> {
    /// Group logarithm with `mu(exp(v) x) = target`, orthogonal to the
    /// stabilizer subalgebra.
    pub v: Vec<F>,
    /// Final gradient residual.
    pub residual: f64,
    pub iterations: usize,
}

/// Combinatorial flow limit: restrict the support to the top pairing level
/// and renormalize. The zero selector returns the point itself.
pub fn flow_limit<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    beta: &RationalVec,
) -> Result<FlowResult<F>> {
    w.check_point(x)?;
    beta.check_dim(w.dim_a())?;
    let dots: Vec<Rational> = x.support().iter().map(|&i| w.weight(i).dot(beta)).collect();
    let max = dots.iter().max().expect("support is nonempty").clone();
    let keep: Vec<usize> = x
        .support()
        .iter()
        .zip(&dots)
        .filter(|(_, d)| **d == max)
        .map(|(&i, _)| i)
        .collect();
    let limit = x.restrict_support(&keep)?;
    Ok(FlowResult { limit, achieved_value: max, limit_support: keep })
}

/// Whether the flow limit attains the ambient maximum `x_max` of the
/// pairing (membership in the maximal unstable set).
pub fn wmax_membership<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    beta: &RationalVec,
    x_max: &Rational,
) -> Result<bool> {
    Ok(flow_limit(w, x, beta)?.achieved_value == *x_max)
}

/// The momentum polytope of the orbit closure: the hull of the active
/// weights.
pub fn orbit_polytope<F: Real>(w: &WeightSystem, x: &ProjPoint<F>) -> Result<Polytope> {
    w.check_point(x)?;
    let active: Vec<RationalVec> =
        x.support().iter().map(|&i| w.weight(i).clone()).collect();
    convex_hull(&active)
}

/// Sorted critical values of the pairing with `beta` over all coordinates.
pub fn critical_data(w: &WeightSystem, beta: &RationalVec) -> Result<CriticalData> {
    beta.check_dim(w.dim_a())?;
    if beta.is_zero() {
        return Err(Error::ZeroVector("critical data of the zero selector"));
    }
    let mut by_value: std::collections::BTreeMap<Rational, Vec<usize>> = Default::default();
    for (i, alpha) in w.weights().iter().enumerate() {
        by_value.entry(alpha.dot(beta)).or_default().push(i);
    }
    let (values, level_supports) = by_value.into_iter().unzip();
    Ok(CriticalData { values, level_supports })
}

/// Flows `x` along `beta` and returns the limit together with its orbit
/// polytope, which is the face of the orbit polytope of `x` exposed by
/// `beta`. Requires the support of `x` to meet the top pairing level over
/// all coordinates, so that the face machinery sees the ambient maximum.
pub fn face_orbit<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    beta: &RationalVec,
) -> Result<(ProjPoint<F>, Polytope)> {
    w.check_point(x)?;
    beta.check_dim(w.dim_a())?;
    if beta.is_zero() {
        return Err(Error::ZeroVector("face selector"));
    }
    let critical = critical_data(w, beta)?;
    let top = critical.level_supports.last().expect("at least one level");
    if !top.iter().any(|i| x.support().contains(i)) {
        return Err(Error::MissingTopLevel { indices: top.clone() });
    }
    let flow = flow_limit(w, x, beta)?;
    let face = orbit_polytope(w, &flow.limit)?;
    Ok((flow.limit, face))
}

/// Inverts the moment map along the orbit of `x`: finds `v` in the
/// orthogonal complement of the stabilizer with `mu(exp(v) x) = target`.
///
/// The target must lie in the relative interior of the orbit polytope
/// (checked exactly); boundary and outside targets are rejected because the
/// image of the orbit is open in its affine hull. Newton runs on the
/// strictly convex `psi(x, exp v) - <target, v>` in an orthonormal basis of
/// the complement, where the Hessian is positive definite.
pub fn invert_moment<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    target: &RationalVec,
    tol: f64,
    max_iter: usize,
) -> Result<InversionResult<F>> {
    w.check_point(x)?;
    target.check_dim(w.dim_a())?;
    let polytope = orbit_polytope(w, x)?;
    let membership = polytope.contains(target)?;
    if membership != Membership::Interior {
        return Err(Error::TargetNotInterior { membership });
    }

    let stab = stabilizer_algebra(w, x)?;
    let complement_f: Vec<Vec<F>> =
        stab.complement.basis().iter().map(RationalVec::to_floats).collect();
    let basis = crate::linalg::orthonormalize(&complement_f);
    let dim = basis.len();
    let target_f: Vec<F> = target.to_floats();
    let tol_f = F::c(tol);

    if dim == 0 {
        // fixed point: the polytope is the single moment value and the
        // interior check already certified target == mu(x)
        return Ok(InversionResult { v: vec![F::zero(); w.dim_a()], residual: 0.0, iterations: 0 });
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
        let eval = kn_derivatives(w, x, &v)?;
        let value = eval.value - dot(&target_f, &v);
        let residual_full: Vec<F> =
            eval.gradient.iter().zip(&target_f).map(|(&g, &t)| g - t).collect();
        let gradient: Vec<F> = basis.iter().map(|b| dot(b, &residual_full)).collect();
        let hessian: Vec<Vec<F>> = basis
            .iter()
            .map(|bi| {
                let hbi = crate::linalg::mat_vec(&eval.hessian, bi);
                basis.iter().map(|bj| dot(bj, &hbi)).collect()
            })
            .collect();
        Ok((value, gradient, hessian))
    };

    let (u, residual, iterations) = newton::minimize(dim, &objective, tol_f, max_iter)?;
    Ok(InversionResult {
        v: embed(&u),
        residual: residual.to_f64().unwrap_or(f64::NAN),
        iterations,
    })
}

/// Samples points of the given family and reports how often the orbit
/// momentum polytope equals the full reference polytope, plus per-vertex
/// membership statistics.
pub fn density_experiment<F: Real>(
    w: &WeightSystem,
    space: &SampleSpace,
    samples: usize,
    seed: u64,
) -> Result<DensityReport> {
    if samples == 0 {
        return Err(Error::EmptyInput("density experiment needs at least one sample"));
    }
    let full_pattern: Vec<usize> = (0..w.num_coords()).collect();
    let reference = match space {
        SampleSpace::FullSupport | SampleSpace::RealLocus => w.full_polytope()?,
        SampleSpace::SupportPattern(pattern) => {
            if pattern.is_empty() {
                return Err(Error::EmptyInput("support pattern must be nonempty"));
            }
            let weights: Vec<RationalVec> = pattern
                .iter()
                .map(|&i| {
                    if i >= w.num_coords() {
                        return Err(Error::IndexOutOfRange { index: i, len: w.num_coords() });
                    }
                    Ok(w.weight(i).clone())
                })
                .collect::<Result<_>>()?;
            convex_hull(&weights)?
        }
    };

    let ambient = w.full_polytope()?;
    let mut successes = 0usize;
    let mut ambient_successes = 0usize;
    let mut vertex_members = vec![0usize; reference.vertices().len()];
    for s in 0..samples {
        let sample_seed = derive_seed(seed, s as u64);
        let x: ProjPoint<F> = match space {
            SampleSpace::FullSupport => random_point(w, &full_pattern, sample_seed)?,
            SampleSpace::RealLocus => random_real_point(w, &full_pattern, sample_seed)?,
            SampleSpace::SupportPattern(pattern) => random_point(w, pattern, sample_seed)?,
        };
        let polytope = orbit_polytope(w, &x)?;
        if polytope == reference {
            successes += 1;
        }
        if polytope == ambient {
            ambient_successes += 1;
        }
        for (j, vertex) in reference.vertices().iter().enumerate() {
            let membership = polytope.contains(vertex)?;
            if membership != Membership::Outside && membership != Membership::OffAffineHull {
                vertex_members[j] += 1;
            }
        }
    }

    let fraction = Rational::new((successes as i64).into(), (samples as i64).into());
    let ambient_fraction =
        Rational::new((ambient_successes as i64).into(), (samples as i64).into());
    Ok(DensityReport {
        space: space.clone(),
        samples,
        seed,
        successes,
        success_fraction: format_rational(&fraction),
        success_fraction_float: fraction.to_f64().unwrap_or(f64::NAN),
        ambient_successes,
        ambient_success_fraction: format_rational(&ambient_fraction),
        reference_vertices: reference.vertices().to_vec(),
        vertex_membership: reference
            .vertices()
            .iter()
            .zip(&vertex_members)
            .map(|(vertex, &members)| VertexMembership {
                vertex: vertex.clone(),
                members,
                fraction: format_rational(&Rational::new(
                    (members as i64).into(),
                    (samples as i64).into(),
                )),
            })
            .collect(),
    })
}

/// Flows `x` along `beta` and compares stabilizer dimensions: whenever the
/// limit's moment image lands on the relative boundary of the orbit
/// polytope, the stabilizer must grow strictly.
pub fn boundary_stabilizer_check<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    beta: &RationalVec,
) -> Result<BoundaryCheck> {
    let polytope = orbit_polytope(w, x)?;
    let start_dim = stabilizer_algebra(w, x)?.algebra.dim();
    let flow = flow_limit(w, x, beta)?;
    let limit_dim = stabilizer_algebra(w, &flow.limit)?.algebra.dim();
    let mu_limit = moment_map_exact(w, &flow.limit)?;
    let membership = polytope.contains(&mu_limit)?;
    let on_boundary = membership == Membership::Boundary;
    Ok(BoundaryCheck {
        membership,
        on_boundary,
        stabilizer_dim_start: start_dim,
        stabilizer_dim_limit: limit_dim,
        limit_support: flow.limit_support,
        pass: !on_boundary || limit_dim > start_dim,
    })
}

/// Sampled `(v, mu(exp(v) x))` pairs for plotting and CSV dumps.
pub fn sample_moment_cloud<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<(Vec<F>, Vec<F>)>> {
    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, s as u64));
        let v: Vec<F> = random_direction(&mut rng, w.dim_a(), 3.0);
        let mu = moment_map(w, &act(w, &v, x)?)?;
        out.push((v, mu));
    }
    Ok(out)
}

/// Exact rational interior point of a polytope: a pseudo-random strictly
/// positive combination of all vertices.
pub fn random_interior_target(polytope: &Polytope, seed: u64) -> RationalVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<i64> = (0..polytope.vertices().len()).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    let mut target = RationalVec::zeros(polytope.ambient_dim());
    for (c, vertex) in raw.iter().zip(polytope.vertices()) {
        target = &target + &vertex.scale(&Rational::new((*c).into(), total.into()));
    }
    target
}

/// The orbit-geometry invariant suite at one point.
///
/// Covers: sampled moment images landing in the orbit polytope (exact,
/// relative interior), vertex attainment by explicit flow limits, the
/// affine hull matching the stabilizer complement, Legendre round-trips,
/// midpoint attainment, face functoriality under the flow, and
/// monotonicity plus convergence of the moment pairing along its own flow.
pub fn verify_invariants<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<InvariantCheck>> {
    let polytope = orbit_polytope(w, x)?;
    let stab = stabilizer_algebra(w, x)?;
    let mut checks = Vec::new();

    // Affine hull of the polytope = stabilizer complement, exactly.
    let affine_ok =
        spans_equal(polytope.affine_basis(), stab.complement.basis());
    checks.push(InvariantCheck::exact(
        "orbit_polytope_affine_hull_is_stabilizer_complement",
        usize::from(!affine_ok),
    ));

    // Sampled image containment with interior classification, exact.
    let image_samples = samples.min(100);
    let mut image_violations = 0usize;
    for s in 0..image_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x10_0000 + s as u64));
        let v: Vec<F> = random_direction(&mut rng, w.dim_a(), 2.5);
        let mu = moment_map_exact(w, &act(w, &v, x)?)?;
        if polytope.contains(&mu)? != Membership::Interior {
            image_violations += 1;
        }
    }
    checks.push(
        InvariantCheck::exact("sampled_moment_image_in_relative_interior", image_violations)
            .with_detail(format!("{image_samples} samples")),
    );

    // Vertex attainment by explicit flow limits.
    let mut vertex_violations = 0usize;
    if polytope.dim() == 0 {
        let mu = moment_map_exact(w, x)?;
        if mu != polytope.vertices()[0] {
            vertex_violations += 1;
        }
    } else {
        for face in polytope.enumerate_proper_faces()? {
            if face.vertex_indices.len() != 1 {
                continue;
            }
            let vertex = &polytope.vertices()[face.vertex_indices[0]];
            let flow = flow_limit(w, x, &face.selector)?;
            let attained = is_fixed(w, &flow.limit)?
                && moment_map_exact(w, &flow.limit)? == *vertex;
            if !attained {
                vertex_violations += 1;
            }
        }
    }
    checks.push(InvariantCheck::exact("vertices_attained_by_flow_limits", vertex_violations));

    // Legendre round-trips on exact interior targets.
    let round_trips = samples.min(50).max(1);
    let mut legendre_worst = 0.0f64;
    for s in 0..round_trips {
        let target = random_interior_target(&polytope, derive_seed(seed, 0x20_0000 + s as u64));
        let inversion =
            invert_moment(w, x, &target, tolerances::NEWTON_TOL, tolerances::NEWTON_MAX_ITER)?;
        let mu = moment_map(w, &act(w, &inversion.v, x)?)?;
        let target_f: Vec<F> = target.to_floats();
        let err: Vec<F> = mu.iter().zip(&target_f).map(|(&m, &t)| m - t).collect();
        legendre_worst = legendre_worst.max(norm(&err).to_f64().unwrap_or(f64::INFINITY));
    }
    checks.push(InvariantCheck::residual(
        "legendre_round_trip",
        legendre_worst,
        tolerances::LEGENDRE_ROUND_TRIP_TOL,
    ));

    // Midpoint attainment: midpoints of exact image points are interior and
    // reachable by inversion.
    let midpoints = samples.min(25).max(1);
    let mut midpoint_worst = 0.0f64;
    for s in 0..midpoints {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x30_0000 + s as u64));
        let v1: Vec<F> = random_direction(&mut rng, w.dim_a(), 2.0);
        let v2: Vec<F> = random_direction(&mut rng, w.dim_a(), 2.0);
        let mu1 = moment_map_exact(w, &act(w, &v1, x)?)?;
        let mu2 = moment_map_exact(w, &act(w, &v2, x)?)?;
        let half = Rational::new(1.into(), 2.into());
        let midpoint = &mu1.scale(&half) + &mu2.scale(&half);
        let inversion =
            invert_moment(w, x, &midpoint, tolerances::NEWTON_TOL, tolerances::NEWTON_MAX_ITER)?;
        let mu = moment_map(w, &act(w, &inversion.v, x)?)?;
        let target_f: Vec<F> = midpoint.to_floats();
        let err: Vec<F> = mu.iter().zip(&target_f).map(|(&m, &t)| m - t).collect();
        midpoint_worst = midpoint_worst.max(norm(&err).to_f64().unwrap_or(f64::INFINITY));
    }
    checks.push(InvariantCheck::residual(
        "midpoint_attainment",
        midpoint_worst,
        tolerances::LEGENDRE_ROUND_TRIP_TOL,
    ));

    // Face functoriality: exposed faces match orbit polytopes of limits.
    let face_trials = samples.min(50).max(1);
    let mut face_violations = 0usize;
    for s in 0..face_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x40_0000 + s as u64));
        let beta = random_integer_vector(&mut rng, w.dim_a(), 3);
        let exposed = polytope.exposed_face(&beta)?;
        let face_poly = polytope.face_polytope(&exposed)?;
        let flow = flow_limit(w, x, &beta)?;
        if orbit_polytope(w, &flow.limit)? != face_poly {
            face_violations += 1;
        }
    }
    checks.push(InvariantCheck::exact("face_functoriality_under_flow", face_violations));

    // Monotonicity and convergence of the pairing along its own flow.
    let flow_trials = samples.min(10).max(1);
    let mut monotonicity_worst = 0.0f64;
    let mut convergence_worst = 0.0f64;
    for s in 0..flow_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x50_0000 + s as u64));
        let beta = random_integer_vector(&mut rng, w.dim_a(), 3);
        let beta_f: Vec<F> = beta.to_floats();
        let flow = flow_limit(w, x, &beta)?;
        let pairing = |t: f64| -> Result<f64> {
            let v: Vec<F> = beta_f.iter().map(|&b| b * F::c(t)).collect();
            let mu = moment_map(w, &act(w, &v, x)?)?;
            Ok(dot(&mu, &beta_f).to_f64().unwrap_or(f64::NAN))
        };
        let mut previous = pairing(0.0)?;
        for step in 1..=200 {
            let current = pairing(step as f64 * 0.1)?;
            monotonicity_worst = monotonicity_worst.max(previous - current);
            previous = current;
        }
        // The horizon is scaled by the smallest spectral gap so the
        // remaining transient is far below the tolerance.
        let dots: Vec<Rational> =
            x.support().iter().map(|&i| w.weight(i).dot(&beta)).collect();
        let gap = dots
            .iter()
            .filter(|d| **d != flow.achieved_value)
            .map(|d| &flow.achieved_value - d)
            .min()
            .map(|g| g.to_f64().unwrap_or(1.0))
            .unwrap_or(0.0);
        let horizon = if gap > 0.0 { 20.0 / gap } else { 0.0 };
        let achieved = flow.achieved_value.to_f64().unwrap_or(f64::NAN);
        convergence_worst = convergence_worst.max((pairing(horizon)? - achieved).abs());
    }
    checks.push(InvariantCheck::residual(
        "flow_monotonicity",
        monotonicity_worst,
        tolerances::FLOW_MONOTONICITY_SLACK,
    ));
    checks.push(InvariantCheck::residual(
        "flow_convergence_to_achieved_value",
        convergence_worst,
        tolerances::FLOW_CONVERGENCE_TOL,
    ));

    Ok(checks)
}
