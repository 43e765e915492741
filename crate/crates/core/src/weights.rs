//! Weight systems, projective points with exact supports, and stabilizers.
//!
//! A weight system is the data of a diagonal action of `A = exp(a)` on
//! projective space: `exp(v)` scales the homogeneous coordinate `z_i` by
//! `e^{<alpha_i, v>}`. Supports are exact metadata carried with each point:
//! a one-parameter flow rescales coordinates but never kills one in finite
//! time, so the active index set is combinatorial data, not a float
//! threshold.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hull::{convex_hull, Polytope};
use crate::rational::{in_span, independent_subset, kernel_basis, RationalVec};
use crate::scalar::Real;

/// The abelian algebra dimension and the weight vector of each homogeneous
/// coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSystem {
    dim_a: usize,
    weights: Vec<RationalVec>,
}

impl WeightSystem {
    /// `weights[i]` is the exponent vector of coordinate `i`; duplicates are
    /// allowed and meaningful (equal-weight coordinates move together).
    pub fn new(dim_a: usize, weights: Vec<RationalVec>) -> Result<Self> {
        if dim_a == 0 {
            return Err(Error::EmptyInput("abelian algebra dimension must be at least 1"));
        }
        if weights.is_empty() {
            return Err(Error::EmptyInput("weight system needs at least one weight"));
        }
        for w in &weights {
            w.check_dim(dim_a)?;
        }
        Ok(Self { dim_a, weights })
    }

    /// Convenience constructor from integer weight rows.
    pub fn from_integers(dim_a: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::new(dim_a, rows.iter().map(|r| RationalVec::from_integers(r)).collect())
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    /// Number of homogeneous coordinates, `n + 1`.
    pub fn num_coords(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[RationalVec] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &RationalVec {
        &self.weights[i]
    }

    /// Weight rows converted to the floating scalar.
    pub fn weight_floats<F: Real>(&self) -> Vec<Vec<F>> {
        self.weights.iter().map(RationalVec::to_floats).collect()
    }

    /// Momentum polytope of the full projective space: the hull of all weights.
    pub fn full_polytope(&self) -> Result<Polytope> {
        convex_hull(&self.weights)
    }

    pub(crate) fn check_point<F: Real>(&self, x: &ProjPoint<F>) -> Result<()> {
        if x.coords.len() != self.num_coords() {
            return Err(Error::DimensionMismatch {
                expected: self.num_coords(),
                got: x.coords.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_direction<F: Real>(&self, v: &[F]) -> Result<()> {
        if v.len() != self.dim_a {
            return Err(Error::DimensionMismatch { expected: self.dim_a, got: v.len() });
        }
        if v.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("direction vector"));
        }
        Ok(())
    }
}

/// A point of projective space: normalized homogeneous coordinates plus the
/// exact set of nonzero indices.
#[derive(Debug, Clone)]
pub struct ProjPoint<F> {
    coords: Vec<Complex<F>>,
    support: Vec<usize>,
}

impl<F: Real> ProjPoint<F> {
    /// Validates the support against the coordinates and normalizes.
    ///
    /// Coordinates off the support must be exactly zero; coordinates on the
    /// support must be nonzero.
    pub fn new(coords: Vec<Complex<F>>, support: Vec<usize>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidPoint("support must be nonempty".into()));
        }
        let mut support = support;
        support.sort_unstable();
        support.dedup();
        if let Some(&last) = support.last() {
            if last >= coords.len() {
                return Err(Error::IndexOutOfRange { index: last, len: coords.len() });
            }
        }
        let mut on = vec![false; coords.len()];
        for &i in &support {
            on[i] = true;
        }
        for (i, c) in coords.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite("projective coordinates"));
            }
            let zero = c.re == F::zero() && c.im == F::zero();
            if on[i] && zero {
                return Err(Error::InvalidPoint(format!("coordinate {i} is declared active but is zero")));
            }
            if !on[i] && !zero {
                return Err(Error::InvalidPoint(format!("coordinate {i} is nonzero off the support")));
            }
        }
        let mut point = Self { coords, support };
        point.normalize();
        Ok(point)
    }

    /// Point with real homogeneous coordinates; support inferred from the
    /// nonzero entries.
    pub fn from_reals(values: &[F]) -> Result<Self> {
        let support: Vec<usize> =
            (0..values.len()).filter(|&i| values[i] != F::zero()).collect();
        Self::new(values.iter().map(|&re| Complex::new(re, F::zero())).collect(), support)
    }

    /// The standard basis point `e_i`.
    pub fn basis(num_coords: usize, i: usize) -> Result<Self> {
        if i >= num_coords {
            return Err(Error::IndexOutOfRange { index: i, len: num_coords });
        }
        let mut coords = vec![Complex::new(F::zero(), F::zero()); num_coords];
        coords[i] = Complex::new(F::one(), F::zero());
        Self::new(coords, vec![i])
    }

    pub fn coords(&self) -> &[Complex<F>] {
        &self.coords
    }

    /// Sorted active indices.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    /// Squared magnitudes `|z_i|^2`; they sum to 1 up to rounding.
    pub fn squared_magnitudes(&self) -> Vec<F> {
        self.coords.iter().map(Complex::norm_sqr).collect()
    }

    fn normalize(&mut self) {
        let norm = self.coords.iter().map(Complex::norm_sqr).sum::<F>().sqrt();
        for c in self.coords.iter_mut() {
            *c = Complex::new(c.re / norm, c.im / norm);
        }
    }

    /// Restriction to a subset of the support (used by flow limits).
    /// The subset must be nonempty and contained in the current support.
    pub(crate) fn restrict_support(&self, keep: &[usize]) -> Result<Self> {
        let mut coords = vec![Complex::new(F::zero(), F::zero()); self.coords.len()];
        for &i in keep {
            coords[i] = self.coords[i];
        }
        Self::new(coords, keep.to_vec())
    }
}

impl<F: Real> Serialize for ProjPoint<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<[f64; 2]> = self
            .coords
            .iter()
            .map(|c| [c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)])
            .collect();
        let mut s = serializer.serialize_struct("ProjPoint", 2)?;
        s.serialize_field("coords", &coords)?;
        s.serialize_field("support", &self.support)?;
        s.end()
    }
}

/// A subspace of the abelian algebra, exactly represented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subalgebra {
    ambient_dim: usize,
    basis: Vec<RationalVec>,
}

impl Subalgebra {
    pub fn new(ambient_dim: usize, vectors: Vec<RationalVec>) -> Result<Self> {
        for v in &vectors {
            v.check_dim(ambient_dim)?;
        }
        Ok(Self { ambient_dim, basis: independent_subset(&vectors) })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RationalVec] {
        &self.basis
    }

    /// Exact membership test.
    pub fn contains(&self, v: &RationalVec) -> Result<bool> {
        v.check_dim(self.ambient_dim)?;
        Ok(in_span(v, &self.basis))
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }
}

/// The stabilizer subalgebra of a point together with its orthogonal
/// complement, the span of the active weight differences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerAlgebra {
    /// `a_x`: directions whose one-parameter subgroups fix the point.
    pub algebra: Subalgebra,
    /// `a_x^perp = span{alpha_i - alpha_j : i, j active}`.
    pub complement: Subalgebra,
}

/// Applies `exp(v)` to a point: scales coordinate `i` by `e^{<alpha_i, v>}`
/// and renormalizes. The support never changes.
pub fn act<F: Real>(w: &WeightSystem, v: &[F], x: &ProjPoint<F>) -> Result<ProjPoint<F>> {
    w.check_point(x)?;
    w.check_direction(v)?;
    let exponents: Vec<F> = x
        .support
        .iter()
        .map(|&i| crate::scalar::dot(&w.weight(i).to_floats::<F>(), v))
        .collect();
    let max = exponents.iter().copied().fold(F::neg_infinity(), F::max);
    // Shift by the top exponent so nothing overflows. The floor keeps a
    // deeply suppressed coordinate (and its squared magnitude) strictly
    // positive: supports only change in the t -> infinity limit.
    let floor = F::min_positive_value().sqrt() * F::c(16.0);
    let mut coords = vec![Complex::new(F::zero(), F::zero()); x.coords.len()];
    for (&i, &e) in x.support.iter().zip(&exponents) {
        let factor = (e - max).exp().max(floor);
        coords[i] = Complex::new(x.coords[i].re * factor, x.coords[i].im * factor);
    }
    ProjPoint::new(coords, x.support.clone())
}

/// The projective stabilizer subalgebra
/// `a_x = {xi : <alpha_i - alpha_j, xi> = 0 for all active i, j}`
/// together with its orthogonal complement.
pub fn stabilizer_algebra<F: Real>(
    w: &WeightSystem,
    x: &ProjPoint<F>,
) -> Result<StabilizerAlgebra> {
    w.check_point(x)?;
    let i0 = x.support[0];
    let diffs: Vec<RationalVec> =
        x.support[1..].iter().map(|&i| w.weight(i) - w.weight(i0)).collect();
    let kernel = kernel_basis(&diffs, w.dim_a());
    Ok(StabilizerAlgebra {
        algebra: Subalgebra::new(w.dim_a(), kernel)?,
        complement: Subalgebra::new(w.dim_a(), diffs)?,
    })
}

/// Whether the point is fixed by the whole group: all active weights equal.
pub fn is_fixed<F: Real>(w: &WeightSystem, x: &ProjPoint<F>) -> Result<bool> {
    w.check_point(x)?;
    let first = w.weight(x.support[0]);
    Ok(x.support[1..].iter().all(|&i| w.weight(i) == first))
}

/// Reproducible pseudo-random point with exactly the requested support.
///
/// Magnitudes are drawn from `[1/4, 1]` so no active coordinate is ever
/// vanishingly small; phases are uniform.
pub fn random_point<F: Real>(
    w: &WeightSystem,
    support_pattern: &[usize],
    seed: u64,
) -> Result<ProjPoint<F>> {
    if support_pattern.is_empty() {
        return Err(Error::EmptyInput("support pattern must be nonempty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = vec![Complex::new(F::zero(), F::zero()); w.num_coords()];
    for &i in support_pattern {
        if i >= w.num_coords() {
            return Err(Error::IndexOutOfRange { index: i, len: w.num_coords() });
        }
        let radius: f64 = rng.gen_range(0.25..=1.0);
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        coords[i] = Complex::new(F::c(radius * angle.cos()), F::c(radius * angle.sin()));
    }
    ProjPoint::new(coords, support_pattern.to_vec())
}

/// Reproducible pseudo-random point of the real locus (all coordinates
/// real) with the requested support.
pub fn random_real_point<F: Real>(
    w: &WeightSystem,
    support_pattern: &[usize],
    seed: u64,
) -> Result<ProjPoint<F>> {
    if support_pattern.is_empty() {
        return Err(Error::EmptyInput("support pattern must be nonempty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = vec![Complex::new(F::zero(), F::zero()); w.num_coords()];
    for &i in support_pattern {
        if i >= w.num_coords() {
            return Err(Error::IndexOutOfRange { index: i, len: w.num_coords() });
        }
        let radius: f64 = rng.gen_range(0.25..=1.0);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        coords[i] = Complex::new(F::c(sign * radius), F::zero());
    }
    ProjPoint::new(coords, support_pattern.to_vec())
}

/// Chordal distance between projective points: the norm of `a - c b` for
/// the unit phase `c` aligning `b` to `a`. Zero exactly when the points
/// agree; computed coordinate-wise so near-equal points resolve down to
/// machine precision instead of the `sqrt(1 - |<a,b>|^2)` cancellation floor.
pub fn projective_distance<F: Real>(a: &ProjPoint<F>, b: &ProjPoint<F>) -> F {
    let mut inner = Complex::new(F::zero(), F::zero());
    for (x, y) in a.coords.iter().zip(&b.coords) {
        inner = inner + x.conj() * *y;
    }
    let n = inner.norm();
    if n == F::zero() {
        return F::c(2.0).sqrt(); // orthogonal representatives
    }
    let phase = Complex::new(inner.re / n, -inner.im / n);
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (*x - *y * phase).norm_sqr())
        .sum::<F>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex_weights() -> WeightSystem {
        WeightSystem::from_integers(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap()
    }

    fn point(values: &[f64]) -> ProjPoint<f64> {
        ProjPoint::from_reals(values).unwrap()
    }

    #[test]
    fn act_identity_and_hand_example() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 0.0]);
        let fixed = act(&w, &[0.0, 0.0], &x).unwrap();
        assert!(projective_distance(&x, &fixed) < 1e-15);

        // v = (ln 2, 0) scales coordinates by (1, 2, 1): [1:1:0] -> [1:2:0]
        let moved = act(&w, &[2.0f64.ln(), 0.0], &x).unwrap();
        let expected = point(&[1.0, 2.0, 0.0]);
        assert!(projective_distance(&moved, &expected) < 1e-14);
        assert_eq!(moved.support(), &[0, 1]);
    }

    #[test]
    fn act_on_singleton_support_is_trivial() {
        let w = simplex_weights();
        let e1 = ProjPoint::<f64>::basis(3, 1).unwrap();
        let moved = act(&w, &[3.7, -1.2], &e1).unwrap();
        assert!(projective_distance(&moved, &e1) < 1e-15);
    }

    #[test]
    fn act_rejects_non_finite_directions() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 1.0]);
        assert!(matches!(act(&w, &[f64::NAN, 0.0], &x), Err(Error::NonFinite(_))));
        assert!(matches!(act(&w, &[f64::INFINITY, 0.0], &x), Err(Error::NonFinite(_))));
    }

    #[test]
    fn group_law_up_to_renormalization() {
        let w = simplex_weights();
        let x = point(&[0.3, -0.8, 0.52]);
        let v = [0.7, -1.3];
        let u = [-0.2, 0.9];
        let lhs = act(&w, &v, &act(&w, &u, &x).unwrap()).unwrap();
        let sum = [v[0] + u[0], v[1] + u[1]];
        let rhs = act(&w, &sum, &x).unwrap();
        for (a, b) in lhs.coords().iter().zip(rhs.coords()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(lhs.support(), rhs.support());
    }

    #[test]
    fn stabilizer_of_generic_and_degenerate_points() {
        let w = simplex_weights();
        // full support: differences span R^2
        let s = stabilizer_algebra(&w, &point(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(s.algebra.dim(), 0);
        assert_eq!(s.complement.dim(), 2);
        // support {0,1}: single difference (1,0); stabilizer spanned by (0,1)
        let s = stabilizer_algebra(&w, &point(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(s.algebra.basis(), &[RationalVec::from_integers(&[0, 1])]);
        assert_eq!(s.complement.basis(), &[RationalVec::from_integers(&[1, 0])]);
        // fixed point: full stabilizer
        let s = stabilizer_algebra(&w, &ProjPoint::<f64>::basis(3, 0).unwrap()).unwrap();
        assert!(s.algebra.is_full());
        assert_eq!(s.complement.dim(), 0);
    }

    #[test]
    fn stabilizer_directions_fix_the_point() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 0.0]);
        let s = stabilizer_algebra(&w, &x).unwrap();
        for xi in s.algebra.basis() {
            let xi_f = xi.to_floats::<f64>();
            for t in [-5.0, -1.3, 0.4, 5.0] {
                let v: Vec<f64> = xi_f.iter().map(|c| c * t).collect();
                let moved = act(&w, &v, &x).unwrap();
                assert!(projective_distance(&moved, &x) < 1e-12);
            }
        }
        // a non-stabilizer direction must move the point
        let xi = RationalVec::from_integers(&[1, 0]);
        assert!(!s.algebra.contains(&xi).unwrap());
        let moved = act(&w, &xi.to_floats::<f64>(), &x).unwrap();
        assert!(projective_distance(&moved, &x) > 1e-3);
    }

    #[test]
    fn fixedness_detection() {
        let w = simplex_weights();
        assert!(is_fixed(&w, &ProjPoint::<f64>::basis(3, 2).unwrap()).unwrap());
        assert!(!is_fixed(&w, &point(&[1.0, 1.0, 0.0])).unwrap());
        // duplicated weights make a two-coordinate point fixed
        let w2 = WeightSystem::from_integers(2, &[&[1, 1], &[1, 1], &[0, 1]]).unwrap();
        assert!(is_fixed(&w2, &point(&[1.0, 1.0, 0.0])).unwrap());
        let s = stabilizer_algebra(&w2, &point(&[1.0, 1.0, 0.0])).unwrap();
        assert!(s.algebra.is_full());
    }

    #[test]
    fn random_points_are_deterministic_and_supported() {
        let w = simplex_weights();
        let a = random_point::<f64>(&w, &[0, 1, 2], 42).unwrap();
        let b = random_point::<f64>(&w, &[0, 1, 2], 42).unwrap();
        for (x, y) in a.coords().iter().zip(b.coords()) {
            assert_eq!(x, y);
        }
        let c = random_point::<f64>(&w, &[0, 1, 2], 43).unwrap();
        assert!(projective_distance(&a, &c) > 1e-6);
        // requested support is exact
        let d = random_point::<f64>(&w, &[1], 7).unwrap();
        assert!(projective_distance(&d, &ProjPoint::basis(3, 1).unwrap()) < 1e-15);
        assert!(random_point::<f64>(&w, &[], 0).is_err());
        // real-locus sampler produces real coordinates
        let r = random_real_point::<f64>(&w, &[0, 1, 2], 5).unwrap();
        assert!(r.coords().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn point_construction_invariants() {
        // zero coordinate declared active
        assert!(ProjPoint::<f64>::new(
            vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
            vec![0, 1]
        )
        .is_err());
        // nonzero coordinate off the support
        assert!(ProjPoint::<f64>::new(
            vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)],
            vec![0]
        )
        .is_err());
        // empty support
        assert!(ProjPoint::<f64>::new(vec![Complex::new(1.0, 0.0)], vec![]).is_err());
        // normalization happens on construction
        let p = ProjPoint::<f64>::new(
            vec![Complex::new(3.0, 0.0), Complex::new(4.0, 0.0)],
            vec![0, 1],
        )
        .unwrap();
        let total: f64 = p.squared_magnitudes().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn act_preserves_support_under_extreme_flow() {
        let w = simplex_weights();
        let x = point(&[1.0, 1.0, 1.0]);
        let far = act(&w, &[500.0, -500.0], &x).unwrap();
        assert_eq!(far.support(), &[0, 1, 2]);
        assert!(far.squared_magnitudes().iter().all(|&m| m > 0.0));
    }

    #[test]
    fn works_at_f32() {
        let w = simplex_weights();
        let x = random_point::<f32>(&w, &[0, 1, 2], 9).unwrap();
        let moved = act(&w, &[0.5f32, -0.25], &x).unwrap();
        assert_eq!(moved.support(), &[0, 1, 2]);
        let total: f32 = moved.squared_magnitudes().iter().sum();
        assert!((total - 1.0).abs() < 1e-6);
    }
}
