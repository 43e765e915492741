//! Exact convex geometry over the rationals.
//!
//! Convex hulls, membership with relative-interior classification, exposed
//! faces, face enumeration and weighted Minkowski sums. Every operation is
//! exact: a point is a vertex precisely when no rational convex combination
//! of the other points produces it, which is decided by a rational LP.

mod simplex;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{
    gram_solve, independent_subset, kernel_basis, solve_columns, Rational, RationalVec,
};

pub(crate) use simplex::{convex_combination, max_margin_combination};

/// Location of a query point relative to a polytope and its affine hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// Relative interior (interior within the affine hull).
    Interior,
    /// Relative boundary.
    Boundary,
    /// In the affine hull but outside the polytope.
    Outside,
    /// Not even in the affine hull.
    OffAffineHull,
}

/// Exact affine coordinates on the hull of a point set.
#[derive(Debug, Clone)]
pub(crate) struct AffineChart {
    base: RationalVec,
    basis: Vec<RationalVec>,
}

impl AffineChart {
    pub(crate) fn from_points(points: &[RationalVec]) -> Self {
        let base = points[0].clone();
        let diffs: Vec<RationalVec> = points[1..].iter().map(|p| p - &base).collect();
        let basis = independent_subset(&diffs);
        Self { base, basis }
    }

    pub(crate) fn from_parts(base: RationalVec, basis: Vec<RationalVec>) -> Self {
        Self { base, basis }
    }

    /// Coordinates of `p` in the chart, or `None` when `p` is off the hull.
    pub(crate) fn to_coords(&self, p: &RationalVec) -> Option<RationalVec> {
        solve_columns(&self.basis, &(p - &self.base)).map(RationalVec::new)
    }

    /// A functional on the ambient space restricting to `n . coords` on the hull.
    fn selector_to_ambient(&self, n: &RationalVec) -> RationalVec {
        let w = gram_solve(&self.basis, n.entries());
        let dim = self.base.dim();
        let mut out = RationalVec::zeros(dim);
        for (wi, b) in w.iter().zip(&self.basis) {
            out = &out + &b.scale(wi);
        }
        out
    }

    /// Exact orthogonal projection of `q` onto the affine hull.
    fn project(&self, q: &RationalVec) -> RationalVec {
        if self.basis.is_empty() {
            return self.base.clone();
        }
        let rhs: Vec<Rational> = self.basis.iter().map(|b| b.dot(&(q - &self.base))).collect();
        let w = gram_solve(&self.basis, &rhs);
        let mut out = self.base.clone();
        for (wi, b) in w.iter().zip(&self.basis) {
            out = &out + &b.scale(wi);
        }
        out
    }
}

/// A convex polytope with an irredundant, canonically sorted vertex list.
#[derive(Debug, Clone, Serialize)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<RationalVec>,
    base_point: RationalVec,
    affine_basis: Vec<RationalVec>,
}

impl PartialEq for Polytope {
    /// Exact equality of vertex sets; the affine data is derived.
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// An exposed face: the argmax set of a linear functional over the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    /// A functional exposing the face.
    pub selector: RationalVec,
    /// Indices into the parent polytope's vertex list, sorted.
    pub vertex_indices: Vec<usize>,
}

/// Convex hull of a nonempty set of rational points.
///
/// Vertices are found by incremental insertion: a candidate joins the
/// vertex list only when it is not a convex combination of the current
/// list, and each insertion evicts the list members it makes redundant.
pub fn convex_hull(points: &[RationalVec]) -> Result<Polytope> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput("convex_hull needs at least one point"));
    };
    let ambient_dim = first.dim();
    for p in points {
        p.check_dim(ambient_dim)?;
    }

    let unique: Vec<RationalVec> =
        points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let chart = AffineChart::from_points(&unique);
    let coords: Vec<RationalVec> = unique
        .iter()
        .map(|p| chart.to_coords(p).expect("input point lies in its own affine hull"))
        .collect();

    let mut verts: Vec<usize> = Vec::new();
    for i in 0..unique.len() {
        let current: Vec<RationalVec> = verts.iter().map(|&j| coords[j].clone()).collect();
        if !current.is_empty() && convex_combination(&current, &coords[i]).is_some() {
            continue;
        }
        verts.push(i);
        let mut j = 0;
        while j < verts.len() {
            let others: Vec<RationalVec> = verts
                .iter()
                .enumerate()
                .filter(|&(pos, _)| pos != j)
                .map(|(_, &v)| coords[v].clone())
                .collect();
            if !others.is_empty() && convex_combination(&others, &coords[verts[j]]).is_some() {
                verts.remove(j);
            } else {
                j += 1;
            }
        }
    }

    let mut vertices: Vec<RationalVec> = verts.into_iter().map(|i| unique[i].clone()).collect();
    vertices.sort();
    Ok(Polytope {
        ambient_dim,
        base_point: vertices[0].clone(),
        affine_basis: chart.basis,
        vertices,
    })
}

/// Weighted Minkowski sum `sum_j w_j P_j` with positive rational weights.
pub fn minkowski_sum(terms: &[(Rational, Polytope)]) -> Result<Polytope> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::EmptyInput("minkowski_sum needs at least one term"));
    };
    let dim = first.ambient_dim;
    for (w, p) in terms {
        if !w.is_positive() {
            return Err(Error::NonPositiveWeight(crate::rational::format_rational(w)));
        }
        if p.ambient_dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.ambient_dim });
        }
    }
    // All sums of one scaled vertex per term; the hull discards the rest.
    let mut sums: Vec<RationalVec> = vec![RationalVec::zeros(dim)];
    for (w, p) in terms {
        let mut next = Vec::with_capacity(sums.len() * p.vertices.len());
        for s in &sums {
            for v in &p.vertices {
                next.push(s + &v.scale(w));
            }
        }
        sums = next;
    }
    convex_hull(&sums)
}

impl Polytope {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[RationalVec] {
        &self.vertices
    }

    pub fn base_point(&self) -> &RationalVec {
        &self.base_point
    }

    /// Independent directions spanning the affine hull.
    pub fn affine_basis(&self) -> &[RationalVec] {
        &self.affine_basis
    }

    /// Dimension of the polytope itself (its affine hull).
    pub fn dim(&self) -> usize {
        self.affine_basis.len()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub(crate) fn chart(&self) -> AffineChart {
        AffineChart::from_parts(self.base_point.clone(), self.affine_basis.clone())
    }

    /// Exact membership classification relative to the affine hull.
    pub fn contains(&self, q: &RationalVec) -> Result<Membership> {
        q.check_dim(self.ambient_dim)?;
        let chart = self.chart();
        let Some(q_coords) = chart.to_coords(q) else {
            return Ok(Membership::OffAffineHull);
        };
        let vertex_coords: Vec<RationalVec> = self
            .vertices
            .iter()
            .map(|v| chart.to_coords(v).expect("vertex lies in the affine hull"))
            .collect();
        match max_margin_combination(&vertex_coords, &q_coords) {
            None => Ok(Membership::Outside),
            Some((t, _)) if t.is_zero() => Ok(Membership::Boundary),
            Some(_) => Ok(Membership::Interior),
        }
    }

    /// A strictly positive barycentric certificate for relative-interior
    /// points; `None` when `q` is not in the relative interior.
    pub fn interior_combination(&self, q: &RationalVec) -> Result<Option<Vec<Rational>>> {
        q.check_dim(self.ambient_dim)?;
        let chart = self.chart();
        let Some(q_coords) = chart.to_coords(q) else {
            return Ok(None);
        };
        let vertex_coords: Vec<RationalVec> = self
            .vertices
            .iter()
            .map(|v| chart.to_coords(v).expect("vertex lies in the affine hull"))
            .collect();
        Ok(match max_margin_combination(&vertex_coords, &q_coords) {
            Some((t, lambda)) if t.is_positive() => Some(lambda),
            _ => None,
        })
    }

    /// The exposed face argmax of `<. , selector>`; the zero selector
    /// exposes the whole polytope.
    pub fn exposed_face(&self, selector: &RationalVec) -> Result<Face> {
        selector.check_dim(self.ambient_dim)?;
        let dots: Vec<Rational> = self.vertices.iter().map(|v| v.dot(selector)).collect();
        let max = dots.iter().max().expect("vertex list is nonempty").clone();
        let vertex_indices = (0..dots.len()).filter(|&i| dots[i] == max).collect();
        Ok(Face { selector: selector.clone(), vertex_indices })
    }

    /// Exact support function `h(selector) = max_v <v, selector>`.
    pub fn support_value(&self, selector: &RationalVec) -> Result<Rational> {
        selector.check_dim(self.ambient_dim)?;
        Ok(self
            .vertices
            .iter()
            .map(|v| v.dot(selector))
            .max()
            .expect("vertex list is nonempty"))
    }

    /// The face as a polytope of its own.
    pub fn face_polytope(&self, face: &Face) -> Result<Polytope> {
        let vertices: Vec<RationalVec> = face
            .vertex_indices
            .iter()
            .map(|&i| {
                self.vertices
                    .get(i)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.vertices.len() })
            })
            .collect::<Result<_>>()?;
        convex_hull(&vertices)
    }

    /// Exact orthogonal projection onto the affine hull of the polytope.
    pub fn project_to_affine_hull(&self, q: &RationalVec) -> Result<RationalVec> {
        q.check_dim(self.ambient_dim)?;
        Ok(self.chart().project(q))
    }

    /// All proper faces, each with an exposing selector. Faces are returned
    /// sorted by dimension proxy (vertex count) and vertex indices.
    ///
    /// Facets are found by scanning affinely independent vertex subsets for
    /// supporting hyperplanes; lower faces are intersections of facets, and
    /// a face's selector is the sum of the outward normals of every facet
    /// containing it.
    pub fn enumerate_proper_faces(&self) -> Result<Vec<Face>> {
        let d = self.dim();
        if d == 0 {
            return Ok(Vec::new());
        }
        let chart = self.chart();
        let coords: Vec<RationalVec> = self
            .vertices
            .iter()
            .map(|v| chart.to_coords(v).expect("vertex lies in the affine hull"))
            .collect();
        let m = coords.len();

        // facet vertex set -> outward normal in chart coordinates
        let mut facets: BTreeMap<Vec<usize>, RationalVec> = BTreeMap::new();
        for subset in combinations(m, d) {
            let diffs: Vec<RationalVec> =
                subset[1..].iter().map(|&i| &coords[i] - &coords[subset[0]]).collect();
            let kernel = kernel_basis(&diffs, d);
            if kernel.len() != 1 {
                continue;
            }
            let mut normal = kernel.into_iter().next().unwrap();
            let level = normal.dot(&coords[subset[0]]);
            let mut has_above = false;
            let mut has_below = false;
            for c in &coords {
                let h = normal.dot(c);
                if h > level {
                    has_above = true;
                } else if h < level {
                    has_below = true;
                }
            }
            if has_above && has_below {
                continue;
            }
            if has_above {
                normal = -&normal;
            }
            let level = normal.dot(&coords[subset[0]]);
            let on_facet: Vec<usize> =
                (0..m).filter(|&i| normal.dot(&coords[i]) == level).collect();
            facets.entry(on_facet).or_insert(normal);
        }

        // Close the facet vertex sets under intersection.
        let mut faces: BTreeSet<Vec<usize>> = facets.keys().cloned().collect();
        loop {
            let mut new_faces = Vec::new();
            for a in &faces {
                for b in &faces {
                    let inter: Vec<usize> = a.iter().filter(|i| b.contains(i)).cloned().collect();
                    if !inter.is_empty() && !faces.contains(&inter) {
                        new_faces.push(inter);
                    }
                }
            }
            if new_faces.is_empty() {
                break;
            }
            faces.extend(new_faces);
        }

        let mut result: Vec<Face> = faces
            .into_iter()
            .map(|vertex_indices| {
                let mut selector_chart = RationalVec::zeros(d);
                for (facet, normal) in &facets {
                    if vertex_indices.iter().all(|i| facet.contains(i)) {
                        selector_chart = &selector_chart + normal;
                    }
                }
                Face {
                    selector: chart.selector_to_ambient(&selector_chart),
                    vertex_indices,
                }
            })
            .collect();
        result.sort_by(|a, b| {
            (a.vertex_indices.len(), &a.vertex_indices)
                .cmp(&(b.vertex_indices.len(), &b.vertex_indices))
        });
        debug_assert!(result.iter().all(|f| {
            self.exposed_face(&f.selector).map(|e| e.vertex_indices == f.vertex_indices)
                == Ok(true)
        }));
        Ok(result)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}
