//! Hypercube-side geometry.
//!
//! The positive orthant maps onto the open unit cube by the componentwise
//! order-preserving diffeomorphism `x -> x / (1 + x)` (fixed here so every
//! number in the artifact is reproducible). This module provides the map,
//! its inverse and tangent pushforward, hypercube faces, the block boxes
//! obtained by shrinking a face and thickening it along its normal
//! directions, charged/opposite face classification against a repulsing
//! index set, and distance utilities.

use crate::model::SpeciesSet;
use crate::reduce::Projection;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CubeError {
    #[error("coordinate {index} = {value} is outside the open domain")]
    OutsideDomain { index: usize, value: f64 },
    #[error("epsilon must lie strictly between 0 and 1/2, got {0}")]
    BadEpsilon(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("free set and fixed values must partition the species set")]
    BadFacePartition,
    #[error("fixed vertex coordinates must be 0 or 1, got {0}")]
    BadVertexValue(f64),
}

/// Scalar diffeomorphism `x -> x / (1 + x)` from the positive ray to (0,1).
pub fn to_cube_scalar(x: f64) -> f64 {
    x / (1.0 + x)
}

/// Inverse scalar map `z -> z / (1 - z)`.
pub fn to_orthant_scalar(z: f64) -> f64 {
    z / (1.0 - z)
}

/// Componentwise map of a strictly positive orthant point into the open
/// unit cube.
pub fn to_cube(x: &[f64]) -> Result<Vec<f64>, CubeError> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            if v > 0.0 && v.is_finite() {
                Ok(to_cube_scalar(v))
            } else {
                Err(CubeError::OutsideDomain { index: i, value: v })
            }
        })
        .collect()
}

/// Componentwise inverse of [`to_cube`].
pub fn to_orthant(z: &[f64]) -> Result<Vec<f64>, CubeError> {
    z.iter()
        .enumerate()
        .map(|(i, &v)| {
            if v > 0.0 && v < 1.0 {
                Ok(to_orthant_scalar(v))
            } else {
                Err(CubeError::OutsideDomain { index: i, value: v })
            }
        })
        .collect()
}

/// Pushforward of a tangent vector at `x` under the diffeomorphism:
/// componentwise `v_i / (1 + x_i)^2`.
pub fn push_tangent(x: &[f64], v: &[f64]) -> Vec<f64> {
    x.iter().zip(v).map(|(xi, vi)| vi / ((1.0 + xi) * (1.0 + xi))).collect()
}

/// A face of the unit hypercube: a set of free directions spanning the
/// face and a 0/1 vertex value for each fixed direction. A vertex has no
/// free directions; the full cube has no fixed ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    species: SpeciesSet,
    free: Vec<bool>,
    vertex: Vec<f64>,
}

impl Face {
    /// `free[i]` marks direction `i` as spanning the face; `vertex[i]` is
    /// consulted (and must be 0 or 1) only where `free[i]` is false.
    pub fn new(species: &SpeciesSet, free: Vec<bool>, vertex: Vec<f64>) -> Result<Self, CubeError> {
        let n = species.len();
        if free.len() != n || vertex.len() != n {
            return Err(CubeError::BadFacePartition);
        }
        let mut vertex = vertex;
        for i in 0..n {
            if free[i] {
                vertex[i] = 0.0;
            } else if vertex[i] != 0.0 && vertex[i] != 1.0 {
                return Err(CubeError::BadVertexValue(vertex[i]));
            }
        }
        Ok(Self { species: species.clone(), free, vertex })
    }

    /// The vertex face at the given 0/1 coordinates.
    pub fn at_vertex(species: &SpeciesSet, coords: Vec<f64>) -> Result<Self, CubeError> {
        let free = vec![false; species.len()];
        Self::new(species, free, coords)
    }

    pub fn species(&self) -> &SpeciesSet {
        &self.species
    }

    pub fn free(&self) -> &[bool] {
        &self.free
    }

    /// Vertex coordinate for a fixed direction.
    pub fn fixed_value(&self, i: usize) -> f64 {
        self.vertex[i]
    }

    pub fn is_vertex(&self) -> bool {
        self.free.iter().all(|f| !f)
    }

    /// Indices of the fixed (non-spanning) directions.
    pub fn fixed_indices(&self) -> Vec<usize> {
        (0..self.free.len()).filter(|&i| !self.free[i]).collect()
    }

    /// Euclidean distance from a cube point to this face.
    pub fn distance_to(&self, z: &[f64]) -> f64 {
        let mut sq = 0.0;
        for ((zi, free), vi) in z.iter().zip(&self.free).zip(&self.vertex) {
            let d = if *free {
                // the face spans [0,1] here; clamp handles points outside
                (zi - zi.clamp(0.0, 1.0)).abs()
            } else {
                zi - vi
            };
            sq += d * d;
        }
        sq.sqrt()
    }

    /// Image of this face under a projection onto kept species: free and
    /// fixed directions restrict coordinatewise.
    pub fn project(&self, proj: &Projection) -> Face {
        let kept = proj.kept();
        let species = proj.kept_species();
        let free: Vec<bool> = kept.iter().map(|&i| self.free[i]).collect();
        let vertex: Vec<f64> = kept.iter().map(|&i| self.vertex[i]).collect();
        Face { species, free, vertex }
    }

    /// The face of the hypercube collapsed by projecting onto the kept
    /// species of `proj`, at the vertex whose kept coordinates are
    /// `kept_vertex`: kept species are fixed, removed species span.
    pub fn collapsed_by(proj: &Projection, kept_vertex: &[f64]) -> Result<Face, CubeError> {
        let source = proj.source();
        let n = source.len();
        if kept_vertex.len() != proj.kept().len() {
            return Err(CubeError::DimensionMismatch {
                expected: proj.kept().len(),
                got: kept_vertex.len(),
            });
        }
        let mut free = vec![true; n];
        let mut vertex = vec![0.0; n];
        for (slot, &i) in proj.kept().iter().enumerate() {
            free[i] = false;
            vertex[i] = kept_vertex[slot];
        }
        Face::new(source, free, vertex)
    }
}

/// Per-coordinate closed interval characterization of the epsilon-block of
/// a face: fixed directions stay within `eps` of their vertex value, free
/// directions stay within the centered band `[eps, 1 - eps]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

pub fn block_box(face: &Face, eps: f64) -> Result<BlockBox, CubeError> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(CubeError::BadEpsilon(eps));
    }
    let n = face.free.len();
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for i in 0..n {
        if face.free[i] {
            lo[i] = eps;
            hi[i] = 1.0 - eps;
        } else {
            lo[i] = (face.vertex[i] - eps).max(0.0);
            hi[i] = (face.vertex[i] + eps).min(1.0);
        }
    }
    Ok(BlockBox { lo, hi })
}

/// Membership of a cube point in the epsilon-block of a face.
pub fn block_contains(face: &Face, eps: f64, z: &[f64]) -> Result<bool, CubeError> {
    if z.len() != face.free.len() {
        return Err(CubeError::DimensionMismatch { expected: face.free.len(), got: z.len() });
    }
    let b = block_box(face, eps)?;
    Ok(z.iter().zip(b.lo.iter().zip(&b.hi)).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi))
}

/// A set of species identifiers designating the directions along which the
/// distinguished charged sub-cube extends. Names outside the active species
/// set are allowed and ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RepulsingIndexSet(pub BTreeSet<String>);

impl RepulsingIndexSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(names.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaceClass {
    /// A vertex lying in the charged sub-cube: every coordinate outside
    /// the repulsing set is 0.
    ChargedVertex,
    /// A face disjoint from the charged sub-cube: some fixed coordinate
    /// outside the repulsing set equals 1.
    Opposite,
    Neither,
}

pub fn classify_face(face: &Face, repulsing: &RepulsingIndexSet) -> FaceClass {
    let species = face.species();
    let outside_r_fixed_one = face
        .fixed_indices()
        .iter()
        .any(|&i| !repulsing.contains(species.name(i)) && face.fixed_value(i) == 1.0);
    if face.is_vertex() {
        let charged = (0..species.len())
            .all(|i| repulsing.contains(species.name(i)) || face.fixed_value(i) == 0.0);
        if charged {
            return FaceClass::ChargedVertex;
        }
    }
    if outside_r_fixed_one {
        return FaceClass::Opposite;
    }
    FaceClass::Neither
}

/// Distances from a cube point to each vertex, each facet, and the whole
/// boundary of the unit cube.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryDistances {
    /// `(vertex coordinates, Euclidean distance)`, vertices in binary
    /// counting order.
    pub vertices: Vec<(Vec<f64>, f64)>,
    /// `(coordinate index, side 0.0 or 1.0, distance)`.
    pub facets: Vec<(usize, f64, f64)>,
    /// Distance to the nearest facet.
    pub boundary: f64,
}

pub fn boundary_distances(z: &[f64]) -> BoundaryDistances {
    let n = z.len();
    let mut vertices = Vec::with_capacity(1 << n);
    for mask in 0u64..(1u64 << n) {
        let coords: Vec<f64> =
            (0..n).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
        let d = z
            .iter()
            .zip(&coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        vertices.push((coords, d));
    }
    let mut facets = Vec::with_capacity(2 * n);
    let mut boundary = f64::INFINITY;
    for (i, zi) in z.iter().enumerate() {
        facets.push((i, 0.0, zi.abs()));
        facets.push((i, 1.0, (1.0 - zi).abs()));
        boundary = boundary.min(zi.abs()).min((1.0 - zi).abs());
    }
    BoundaryDistances { vertices, facets, boundary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn species(n: usize) -> SpeciesSet {
        let names: Vec<String> = (0..n).map(|i| format!("S{i}")).collect();
        SpeciesSet::new(names).unwrap()
    }

    #[test]
    fn scalar_map_fixed_points() {
        assert_eq!(to_cube_scalar(1.0), 0.5);
        assert_eq!(to_cube_scalar(3.0), 0.75);
    }

    #[test]
    fn round_trip_identity() {
        // near z = 1 the inverse loses digits to cancellation, so the
        // 1e-12 relative round trip holds on the moderate range
        for x in [1e-6, 0.1, 1.0, 7.3, 1e3] {
            let z = to_cube_scalar(x);
            assert!((to_orthant_scalar(z) - x).abs() <= 1e-12 * x.max(1.0));
        }
        let x = vec![0.25, 1.5, 42.0];
        let back = to_orthant(&to_cube(&x).unwrap()).unwrap();
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn map_rejects_boundary() {
        assert!(to_cube(&[0.0]).is_err());
        assert!(to_cube(&[-1.0]).is_err());
        assert!(to_orthant(&[1.0]).is_err());
        assert!(to_orthant(&[0.0]).is_err());
    }

    #[test]
    fn map_is_order_preserving() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a: f64 = rng.gen_range(1e-3..1e3);
            let b: f64 = rng.gen_range(1e-3..1e3);
            if a < b {
                assert!(to_cube_scalar(a) < to_cube_scalar(b));
            }
        }
    }

    #[test]
    fn tangent_pushforward() {
        assert_eq!(push_tangent(&[1.0], &[1.0]), vec![0.25]);
        assert_eq!(push_tangent(&[3.0, 1.0], &[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn pushforward_matches_finite_difference() {
        let x = 0.8;
        let v = 1.3;
        let h = 1e-5;
        let fd = (to_cube_scalar(x + h * v) - to_cube_scalar(x - h * v)) / (2.0 * h);
        let push = push_tangent(&[x], &[v])[0];
        assert!((fd - push).abs() < 1e-8, "fd {fd} vs push {push}");
    }

    #[test]
    fn block_membership_box_formula() {
        let s = species(3);
        // free in directions 0 and 1, fixed z_2 = 1
        let face = Face::new(&s, vec![true, true, false], vec![0.0, 0.0, 1.0]).unwrap();
        assert!(block_contains(&face, 0.1, &[0.5, 0.5, 0.95]).unwrap());
        assert!(!block_contains(&face, 0.1, &[0.05, 0.5, 0.95]).unwrap());
        assert!(!block_contains(&face, 0.1, &[0.5, 0.5, 0.85]).unwrap());
    }

    #[test]
    fn block_rejects_bad_epsilon() {
        let s = species(1);
        let face = Face::at_vertex(&s, vec![0.0]).unwrap();
        assert!(block_contains(&face, 0.0, &[0.5]).is_err());
        assert!(block_contains(&face, 0.5, &[0.5]).is_err());
    }

    #[test]
    fn block_box_matches_membership_on_grid() {
        let s = species(2);
        let face = Face::new(&s, vec![true, false], vec![0.0, 0.0]).unwrap();
        for eps in [0.05, 0.2, 0.45] {
            let b = block_box(&face, eps).unwrap();
            for i in 0..=20 {
                for j in 0..=20 {
                    let z = [i as f64 / 20.0, j as f64 / 20.0];
                    let inside =
                        z.iter().zip(b.lo.iter().zip(&b.hi)).all(|(v, (lo, hi))| v >= lo && v <= hi);
                    assert_eq!(block_contains(&face, eps, &z).unwrap(), inside);
                }
            }
        }
    }

    #[test]
    fn face_classification() {
        let s = SpeciesSet::new(["A", "B"]).unwrap();
        let r = RepulsingIndexSet::new(["A"]);
        let v10 = Face::at_vertex(&s, vec![1.0, 0.0]).unwrap();
        assert_eq!(classify_face(&v10, &r), FaceClass::ChargedVertex);
        let edge = Face::new(&s, vec![true, false], vec![0.0, 1.0]).unwrap();
        assert_eq!(classify_face(&edge, &r), FaceClass::Opposite);
        let v01 = Face::at_vertex(&s, vec![0.0, 1.0]).unwrap();
        assert_eq!(classify_face(&v01, &r), FaceClass::Opposite);
        let edge_low = Face::new(&s, vec![true, false], vec![0.0, 0.0]).unwrap();
        assert_eq!(classify_face(&edge_low, &r), FaceClass::Neither);
    }

    #[test]
    fn empty_repulsing_set_charges_only_origin() {
        let s = SpeciesSet::new(["A", "B"]).unwrap();
        let r = RepulsingIndexSet::default();
        let origin = Face::at_vertex(&s, vec![0.0, 0.0]).unwrap();
        assert_eq!(classify_face(&origin, &r), FaceClass::ChargedVertex);
        // every face not containing the origin is opposite
        for mask in 0u8..4 {
            for fmask in 0u8..4 {
                let free: Vec<bool> = (0..2).map(|i| fmask & (1 << i) != 0).collect();
                let vertex: Vec<f64> =
                    (0..2).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
                let face = Face::new(&s, free.clone(), vertex.clone()).unwrap();
                let contains_origin =
                    (0..2).all(|i| free[i] || vertex[i] == 0.0);
                if !contains_origin {
                    assert_eq!(classify_face(&face, &r), FaceClass::Opposite, "{face:?}");
                }
            }
        }
    }

    #[test]
    fn full_repulsing_set_charges_every_vertex() {
        let s = SpeciesSet::new(["A", "B"]).unwrap();
        let r = RepulsingIndexSet::new(["A", "B", "NotASpecies"]);
        for mask in 0u8..4 {
            let vertex: Vec<f64> =
                (0..2).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
            let face = Face::at_vertex(&s, vertex).unwrap();
            assert_eq!(classify_face(&face, &r), FaceClass::ChargedVertex);
        }
    }

    #[test]
    fn classification_ignores_foreign_names() {
        let s = SpeciesSet::new(["A", "B"]).unwrap();
        let base = RepulsingIndexSet::new(["A"]);
        let enlarged = RepulsingIndexSet::new(["A", "Z", "Q7"]);
        for fmask in 0u8..4 {
            for vmask in 0u8..4 {
                let free: Vec<bool> = (0..2).map(|i| fmask & (1 << i) != 0).collect();
                let vertex: Vec<f64> =
                    (0..2).map(|i| if vmask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
                let face = Face::new(&s, free, vertex).unwrap();
                assert_eq!(classify_face(&face, &base), classify_face(&face, &enlarged));
            }
        }
    }

    #[test]
    fn distances_from_center() {
        let d = boundary_distances(&[0.5, 0.5]);
        assert_eq!(d.boundary, 0.5);
        for (_, dist) in &d.vertices {
            assert!((dist - 0.5f64.sqrt() * 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_to_vertex() {
        let d = boundary_distances(&[0.1, 0.5]);
        let origin = d.vertices.iter().find(|(v, _)| v == &vec![0.0, 0.0]).unwrap();
        assert!((origin.1 - (0.01f64 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn facet_point_has_zero_boundary_distance() {
        let d = boundary_distances(&[0.0, 0.3]);
        assert_eq!(d.boundary, 0.0);
    }

    #[test]
    fn projected_collapsed_face_is_vertex() {
        use crate::reduce::Projection;
        for n in [2usize, 3] {
            let s = species(n);
            for kept_mask in 1u8..(1 << n) {
                let kept: Vec<usize> = (0..n).filter(|i| kept_mask & (1 << i) != 0).collect();
                if kept.len() == n {
                    continue;
                }
                let proj = Projection::new(&s, &kept).unwrap();
                for vmask in 0u8..(1 << kept.len()) {
                    let kept_vertex: Vec<f64> = (0..kept.len())
                        .map(|i| if vmask & (1 << i) != 0 { 1.0 } else { 0.0 })
                        .collect();
                    let face = Face::collapsed_by(&proj, &kept_vertex).unwrap();
                    let image = face.project(&proj);
                    assert!(image.is_vertex());
                    for (slot, _) in kept.iter().enumerate() {
                        assert_eq!(image.fixed_value(slot), kept_vertex[slot]);
                    }
                }
            }
        }
    }

    #[test]
    fn charged_vertex_projects_to_charged_vertex() {
        use crate::reduce::Projection;
        // for every face collapsed by a projection that is not opposite,
        // the projected vertex is charged
        for n in [2usize, 3] {
            let s = species(n);
            for rmask in 0u8..(1 << n) {
                let r = RepulsingIndexSet::new(
                    (0..n).filter(|i| rmask & (1 << i) != 0).map(|i| s.name(i).to_string()),
                );
                for kept_mask in 1u8..(1 << n) {
                    let kept: Vec<usize> =
                        (0..n).filter(|i| kept_mask & (1 << i) != 0).collect();
                    if kept.len() == n {
                        continue;
                    }
                    let proj = Projection::new(&s, &kept).unwrap();
                    for vmask in 0u8..(1 << kept.len()) {
                        let kept_vertex: Vec<f64> = (0..kept.len())
                            .map(|i| if vmask & (1 << i) != 0 { 1.0 } else { 0.0 })
                            .collect();
                        let face = Face::collapsed_by(&proj, &kept_vertex).unwrap();
                        if classify_face(&face, &r) != FaceClass::Opposite {
                            let image = face.project(&proj);
                            assert_eq!(
                                classify_face(&image, &r),
                                FaceClass::ChargedVertex,
                                "face {face:?} repulsing {r:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
