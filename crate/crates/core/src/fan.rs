//! Rational polyhedral fans, toric morphisms and fiber fans.
//!
//! A ray `ρ` of the source fan is *vertical* for a morphism `α` when
//! `α(u_ρ) ≠ 0`: its orbit closure maps into the boundary of the target, so the
//! divisor does not dominate. Rays with `α(u_ρ) = 0` are *horizontal*; they
//! are exactly the rays of the fiber fan `Σ₀ = {σ ∈ Σ : σ ⊆ ker(α)_Q}`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::intlin::{
    dot, gcd_of, is_zero_vec, kernel_basis, smith_normal_form, solve_integer, IntMatrix,
};
use crate::polyhedral::{Constraint, System};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {ray} has length {found}, expected {expected}")]
    WrongDimension {
        ray: usize,
        expected: usize,
        found: usize,
    },
    #[error("ray {ray} is not primitive")]
    NonPrimitiveRay { ray: usize },
    #[error("rays {first} and {second} are equal")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} refers to missing ray {index}")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("cone {cone} is not strongly convex")]
    NotStronglyConvex { cone: usize },
    #[error("ray {ray} is a redundant generator of cone {cone}")]
    RedundantGenerator { cone: usize, ray: usize },
    #[error("cones {first} and {second} do not meet in a common face")]
    BadIntersection { first: usize, second: usize },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("image of cone {cone} is not contained in any target cone (generator ray {ray})")]
    Incompatible { cone: usize, ray: usize },
}

/// A cone of a fan, by indices into the fan's ray list (sorted, distinct).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut generators: Vec<usize>) -> Self {
        generators.sort_unstable();
        generators.dedup();
        Cone(generators)
    }

    pub fn generators(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Cone>,
    name: Option<String>,
}

impl Fan {
    /// Validated constructor. An empty cone list means the fan `{0}`.
    pub fn new(
        rank: usize,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<Vec<usize>>,
        name: Option<String>,
    ) -> Result<Self, FanError> {
        let mut cones: Vec<Cone> = max_cones.into_iter().map(Cone::new).collect();
        if cones.is_empty() {
            cones.push(Cone::new(Vec::new()));
        }
        let fan = Fan {
            rank,
            rays,
            max_cones: cones,
            name,
        };
        validate_fan(&fan)?;
        Ok(fan)
    }

    pub fn from_i64(
        rank: usize,
        rays: &[&[i64]],
        max_cones: &[&[usize]],
    ) -> Result<Self, FanError> {
        Fan::new(
            rank,
            rays.iter().map(|r| crate::intlin::ivec(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
            None,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    fn generators(&self, cone: &Cone) -> Vec<Vec<BigInt>> {
        cone.generators()
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect()
    }

    /// Dimension of the linear span of a cone.
    pub fn cone_dimension(&self, cone: &Cone) -> usize {
        let gens = self.generators(cone);
        IntMatrix::from_rows(self.rank, &gens)
            .expect("ray lengths checked")
            .rank()
    }

    /// The `#rays × rank` matrix whose rows are the ray generators.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.rank, &self.rays).expect("ray lengths checked")
    }

    pub fn rays_span(&self) -> bool {
        self.ray_matrix().rank() == self.rank
    }
}

/// Whether `v` lies in `cone(gens)`, by Farkas: it does unless some `m` has
/// `m·g ≥ 0` on every generator and `m·v < 0`.
pub fn vectors_cone_contains(rank: usize, gens: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut sys = System::new(rank);
    for g in gens {
        sys.push(Constraint::geq(g.clone(), BigInt::zero()));
    }
    sys.push(Constraint::gt(
        v.iter().map(|x| -x).collect(),
        BigInt::zero(),
    ));
    !sys.is_feasible()
}

pub fn cone_contains(fan: &Fan, cone: &Cone, v: &[BigInt]) -> Result<bool, FanError> {
    if v.len() != fan.rank {
        return Err(FanError::DimensionMismatch {
            expected: fan.rank,
            found: v.len(),
        });
    }
    Ok(vectors_cone_contains(fan.rank, &fan.generators(cone), v))
}

pub fn validate_fan(f: &Fan) -> Result<(), FanError> {
    for (i, r) in f.rays.iter().enumerate() {
        if r.len() != f.rank {
            return Err(FanError::WrongDimension {
                ray: i,
                expected: f.rank,
                found: r.len(),
            });
        }
        if gcd_of(r) != BigInt::from(1) {
            return Err(FanError::NonPrimitiveRay { ray: i });
        }
        if let Some(j) = f.rays[..i].iter().position(|s| s == r) {
            return Err(FanError::DuplicateRay {
                first: j,
                second: i,
            });
        }
    }
    for (c, cone) in f.max_cones.iter().enumerate() {
        if let Some(&index) = cone.generators().iter().find(|&&i| i >= f.rays.len()) {
            return Err(FanError::RayIndexOutOfRange { cone: c, index });
        }
        let gens = f.generators(cone);
        for (k, g) in gens.iter().enumerate() {
            let neg: Vec<BigInt> = g.iter().map(|x| -x).collect();
            if vectors_cone_contains(f.rank, &gens, &neg) {
                return Err(FanError::NotStronglyConvex { cone: c });
            }
            let others: Vec<Vec<BigInt>> = gens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, h)| h.clone())
                .collect();
            if vectors_cone_contains(f.rank, &others, g) {
                return Err(FanError::RedundantGenerator {
                    cone: c,
                    ray: cone.generators()[k],
                });
            }
        }
    }
    for a in 0..f.max_cones.len() {
        for b in a + 1..f.max_cones.len() {
            if !meets_in_common_face(f, &f.max_cones[a], &f.max_cones[b]) {
                return Err(FanError::BadIntersection {
                    first: a,
                    second: b,
                });
            }
        }
    }
    Ok(())
}

/// Separation test: `σ ∩ τ` is the common face `cone(σ(1) ∩ τ(1))` of both iff
/// some `m` vanishes on the shared rays, is positive on the other rays of `σ`
/// and negative on the other rays of `τ`.
fn meets_in_common_face(f: &Fan, s: &Cone, t: &Cone) -> bool {
    let sset: BTreeSet<usize> = s.generators().iter().copied().collect();
    let tset: BTreeSet<usize> = t.generators().iter().copied().collect();
    let mut sys = System::new(f.rank);
    for &i in sset.union(&tset) {
        let u = f.rays[i].clone();
        match (sset.contains(&i), tset.contains(&i)) {
            (true, true) => sys.extend(Constraint::eq(u, BigInt::zero())),
            (true, false) => sys.push(Constraint::gt(u, BigInt::zero())),
            _ => sys.push(Constraint::gt(
                u.iter().map(|x| -x).collect(),
                BigInt::zero(),
            )),
        }
    }
    sys.is_feasible()
}

/// Facets of a full-dimensional cone, as sorted ray-index sets.
fn facets(f: &Fan, cone: &Cone) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if f.rank == 0 {
        return out;
    }
    let gens = cone.generators();
    for subset in subsets(gens, f.rank - 1) {
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| f.rays[i].clone()).collect();
        let m = IntMatrix::from_rows(f.rank, &rows).expect("sized");
        let normals = kernel_basis(&m);
        if normals.len() != 1 {
            continue;
        }
        let n = &normals[0];
        let values: Vec<BigInt> = gens.iter().map(|&i| dot(n, &f.rays[i])).collect();
        let all_nonneg = values.iter().all(|v| !v.is_negative());
        let all_nonpos = values.iter().all(|v| !v.is_positive());
        if all_nonneg || all_nonpos {
            let facet: Vec<usize> = gens
                .iter()
                .zip(&values)
                .filter(|(_, v)| v.is_zero())
                .map(|(&i, _)| i)
                .collect();
            out.insert(facet);
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Support equals `N_Q`: the fan is pure of full dimension, every ridge lies in
/// exactly two maximal cones, and the cones are connected across ridges.
pub fn is_complete(f: &Fan) -> bool {
    if f.max_cones.iter().any(|c| f.cone_dimension(c) != f.rank) {
        return false;
    }
    let mut ridge_owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (c, cone) in f.max_cones.iter().enumerate() {
        for facet in facets(f, cone) {
            ridge_owners.entry(facet).or_default().push(c);
        }
    }
    if ridge_owners.values().any(|owners| owners.len() != 2) {
        return false;
    }
    let n = f.max_cones.len();
    let mut adjacency = vec![Vec::new(); n];
    for owners in ridge_owners.values() {
        adjacency[owners[0]].push(owners[1]);
        adjacency[owners[1]].push(owners[0]);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for &d in &adjacency[c] {
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricMorphism {
    source: Fan,
    target: Fan,
    matrix: IntMatrix,
}

pub fn make_morphism(
    source: Fan,
    target: Fan,
    matrix: IntMatrix,
) -> Result<ToricMorphism, MorphismError> {
    if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
        return Err(MorphismError::DimensionMismatch {
            rows: matrix.rows(),
            cols: matrix.cols(),
            expected_rows: target.rank(),
            expected_cols: source.rank(),
        });
    }
    for (c, cone) in source.max_cones().iter().enumerate() {
        let images: Vec<Vec<BigInt>> = cone
            .generators()
            .iter()
            .map(|&i| matrix.mul_vec(source.ray(i)).expect("sized"))
            .collect();
        let mut candidates: Vec<&Cone> = target.max_cones().iter().collect();
        for (k, img) in images.iter().enumerate() {
            let narrowed: Vec<&Cone> = candidates
                .iter()
                .copied()
                .filter(|t| vectors_cone_contains(target.rank(), &target.generators(t), img))
                .collect();
            if narrowed.is_empty() {
                return Err(MorphismError::Incompatible {
                    cone: c,
                    ray: cone.generators()[k],
                });
            }
            candidates = narrowed;
        }
    }
    Ok(ToricMorphism {
        source,
        target,
        matrix,
    })
}

/// `Σ₀` in coordinates of the kernel basis, with the map back to source rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberFanResult {
    pub kernel_basis: Vec<Vec<BigInt>>,
    pub fiber_fan: Fan,
    /// `ray_correspondence[j]` is the source ray index of fiber ray `j`.
    pub ray_correspondence: Vec<usize>,
}

impl FiberFanResult {
    /// Re-embeds kernel coordinates into the source lattice.
    pub fn embed(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let dim = self.kernel_basis.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); dim];
        for (c, b) in coords.iter().zip(&self.kernel_basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

impl ToricMorphism {
    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn image_of_ray(&self, i: usize) -> Vec<BigInt> {
        self.matrix.mul_vec(self.source.ray(i)).expect("sized")
    }

    /// Surjective on lattices: SNF has full row rank with unit invariant factors.
    pub fn lattice_surjective(&self) -> bool {
        let snf = smith_normal_form(&self.matrix);
        snf.rank() == self.matrix.rows()
            && snf
                .diagonal_entries()
                .iter()
                .take(snf.rank())
                .all(|d| *d == BigInt::from(1))
    }

    /// Surjective after tensoring with Q.
    pub fn rationally_surjective(&self) -> bool {
        self.matrix.rank() == self.matrix.rows()
    }

    pub fn vertical_rays(&self) -> Vec<usize> {
        (0..self.source.rays().len())
            .filter(|&i| !is_zero_vec(&self.image_of_ray(i)))
            .collect()
    }

    pub fn horizontal_rays(&self) -> Vec<usize> {
        (0..self.source.rays().len())
            .filter(|&i| is_zero_vec(&self.image_of_ray(i)))
            .collect()
    }

    pub fn fiber_subfan(&self) -> FiberFanResult {
        let basis = kernel_basis(&self.matrix);
        let k = basis.len();
        let b = IntMatrix::from_columns(self.source.rank(), &basis).expect("sized");
        let horizontal = self.horizontal_rays();
        let rays: Vec<Vec<BigInt>> = horizontal
            .iter()
            .map(|&i| {
                solve_integer(&b, self.source.ray(i)).expect("horizontal rays lie in the kernel")
            })
            .collect();
        let position: BTreeMap<usize, usize> = horizontal
            .iter()
            .enumerate()
            .map(|(j, &i)| (i, j))
            .collect();

        // σ ∩ ker(α) is the face of σ spanned by its horizontal rays.
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in self.source.max_cones() {
            let face: Vec<usize> = cone
                .generators()
                .iter()
                .filter_map(|i| position.get(i).copied())
                .collect();
            faces.insert(face);
        }
        let maximal: Vec<Vec<usize>> = faces
            .iter()
            .filter(|f| {
                !faces
                    .iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|x| g.contains(x)))
            })
            .cloned()
            .collect();
        let fiber_fan = Fan::new(k, rays, maximal, Some("fiber".into()))
            .expect("a subfan of a valid fan is valid");
        FiberFanResult {
            kernel_basis: basis,
            fiber_fan,
            ray_correspondence: horizontal,
        }
    }
}

pub fn lattice_surjective(m: &ToricMorphism) -> bool {
    m.lattice_surjective()
}

pub fn vertical_rays(m: &ToricMorphism) -> Vec<usize> {
    m.vertical_rays()
}

pub fn fiber_subfan(m: &ToricMorphism) -> FiberFanResult {
    m.fiber_subfan()
}

/// Fans used across tests and examples.
pub mod examples {
    use super::*;

    pub fn p1() -> Fan {
        Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]])
            .expect("valid")
            .with_name("P1")
    }

    /// Hirzebruch surface `F_a`: rays (1,0), (0,1), (-1,a), (0,-1).
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .expect("valid")
        .with_name(format!("F{a}"))
    }

    /// `F_a → P¹` induced by the first coordinate.
    pub fn hirzebruch_projection(a: i64) -> ToricMorphism {
        make_morphism(hirzebruch(a), p1(), IntMatrix::from_i64(&[&[1, 0]])).expect("compatible")
    }

    /// `P(1,1,2)` with rays (1,0), (0,1), (-1,-2).
    pub fn p112() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[-1, -2]],
            &[&[0, 1], &[1, 2], &[2, 0]],
        )
        .expect("valid")
        .with_name("P(1,1,2)")
    }

    pub fn identity(f: &Fan) -> ToricMorphism {
        make_morphism(f.clone(), f.clone(), IntMatrix::identity(f.rank()))
            .expect("identity is compatible")
    }

    /// `P¹` fan on `±e₁` inside `Z²`: `P¹ × (torus)`.
    pub fn p1_times_torus() -> Fan {
        Fan::from_i64(2, &[&[1, 0], &[-1, 0]], &[&[0], &[1]]).expect("valid")
    }

    /// Complete fan with `Cl = Z ⊕ Z/3`: rays (1,0), (1,3), (-2,-3).
    pub fn torsion_surface() -> Fan {
        Fan::from_i64(
            2,
            &[&[1, 0], &[1, 3], &[-2, -3]],
            &[&[0, 1], &[1, 2], &[2, 0]],
        )
        .expect("valid")
        .with_name("P2/Z3")
    }

    /// `Y × P¹ → Y` for a two-dimensional complete `Y`.
    pub fn product_with_p1(y: &Fan) -> ToricMorphism {
        assert_eq!(y.rank(), 2);
        let mut rays: Vec<Vec<BigInt>> = y
            .rays()
            .iter()
            .map(|r| vec![r[0].clone(), r[1].clone(), BigInt::zero()])
            .collect();
        let n = rays.len();
        rays.push(crate::intlin::ivec(&[0, 0, 1]));
        rays.push(crate::intlin::ivec(&[0, 0, -1]));
        let mut cones = Vec::new();
        for c in y.max_cones() {
            for extra in [n, n + 1] {
                let mut g = c.generators().to_vec();
                g.push(extra);
                cones.push(g);
            }
        }
        let x = Fan::new(3, rays, cones, None).expect("product fan is valid");
        make_morphism(x, y.clone(), IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]))
            .expect("projection")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::intlin::ivec;

    #[test]
    fn p1_validates() {
        assert!(validate_fan(&p1()).is_ok());
    }

    #[test]
    fn non_primitive_ray_rejected() {
        let err = Fan::from_i64(2, &[&[2, 0], &[0, 1]], &[&[0, 1]]).unwrap_err();
        assert_eq!(err, FanError::NonPrimitiveRay { ray: 0 });
    }

    #[test]
    fn overlapping_cones_rejected() {
        let err = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]],
            &[&[0, 1], &[2, 3]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            FanError::BadIntersection {
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn duplicate_and_convexity_errors() {
        let dup = Fan::from_i64(1, &[&[1], &[1]], &[&[0]]).unwrap_err();
        assert_eq!(
            dup,
            FanError::DuplicateRay {
                first: 0,
                second: 1
            }
        );
        let line = Fan::from_i64(1, &[&[1], &[-1]], &[&[0, 1]]).unwrap_err();
        assert_eq!(line, FanError::NotStronglyConvex { cone: 0 });
        let redundant =
            Fan::from_i64(2, &[&[1, 0], &[1, 1], &[1, 2], &[0, 1]], &[&[0, 1, 3]]).unwrap_err();
        assert_eq!(redundant, FanError::RedundantGenerator { cone: 0, ray: 1 });
    }

    #[test]
    fn containment_examples() {
        let f = Fan::from_i64(2, &[&[1, 0], &[0, 1], &[1, 2]], &[&[0, 1]]).unwrap();
        let quadrant = f.max_cones()[0].clone();
        assert!(cone_contains(&f, &quadrant, &ivec(&[3, 5])).unwrap());
        assert!(!cone_contains(&f, &quadrant, &ivec(&[-1, 0])).unwrap());
        assert!(vectors_cone_contains(
            2,
            &[ivec(&[1, 0]), ivec(&[1, 2])],
            &ivec(&[1, 1])
        ));
        assert!(cone_contains(&f, &quadrant, &ivec(&[1])).is_err());
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&p1()));
        assert!(!is_complete(&Fan::from_i64(1, &[&[1]], &[&[0]]).unwrap()));
        assert!(is_complete(&p112()));
        assert!(is_complete(&hirzebruch(3)));
        assert!(!is_complete(
            &Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap()
        ));
        assert!(!is_complete(&p1_times_torus()));
        let point = Fan::new(0, vec![], vec![], None).unwrap();
        assert!(is_complete(&point));
    }

    #[test]
    fn lattice_surjectivity() {
        let z2 = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        let z1 = Fan::from_i64(1, &[&[1]], &[&[0]]).unwrap();
        let proj = make_morphism(z2.clone(), z1.clone(), IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert!(proj.lattice_surjective());
        let double = make_morphism(p1(), p1(), IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(!double.lattice_surjective());
        let index2 =
            make_morphism(z2.clone(), z2, IntMatrix::from_i64(&[&[1, 1], &[0, 2]])).unwrap();
        assert!(!index2.lattice_surjective());
    }

    #[test]
    fn incompatible_map_reports_witness() {
        let err = make_morphism(p1(), p1(), IntMatrix::from_i64(&[&[0]]));
        assert!(err.is_ok());
        let quadrant = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap();
        let half = Fan::from_i64(1, &[&[1]], &[&[0]]).unwrap();
        let err = make_morphism(quadrant, half, IntMatrix::from_i64(&[&[1, -1]])).unwrap_err();
        assert_eq!(err, MorphismError::Incompatible { cone: 0, ray: 1 });
    }

    #[test]
    fn vertical_rays_examples() {
        let p1p1 = hirzebruch(0);
        let first = make_morphism(p1p1, p1(), IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert_eq!(first.vertical_rays(), vec![0, 2]);
        assert_eq!(identity(&p1()).vertical_rays(), vec![0, 1]);
        assert_eq!(hirzebruch_projection(1).vertical_rays(), vec![0, 2]);
    }

    #[test]
    fn fiber_fans() {
        let ff = hirzebruch_projection(0).fiber_subfan();
        assert_eq!(ff.kernel_basis, vec![ivec(&[0, 1])]);
        assert_eq!(ff.fiber_fan.rays(), &[ivec(&[1]), ivec(&[-1])]);
        assert_eq!(ff.ray_correspondence, vec![1, 3]);
        assert!(is_complete(&ff.fiber_fan));

        let ff1 = hirzebruch_projection(1).fiber_subfan();
        assert_eq!(ff1.fiber_fan.rays(), &[ivec(&[1]), ivec(&[-1])]);

        let trivial = identity(&p1()).fiber_subfan();
        assert_eq!(trivial.fiber_fan.rank(), 0);
        assert!(trivial.fiber_fan.rays().is_empty());
        assert!(is_complete(&trivial.fiber_fan));
    }
}
