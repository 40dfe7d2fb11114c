//! Toric divisor theory: class groups as cokernels of the ray pairing,
//! vertical class groups, restriction to the fiber, and the lattice-level
//! checks on vertical principal divisors.
//!
//! Every divisor class of a toric variety has a torus-invariant representative,
//! so all computations run on `Z^{Σ(1)}` and the pairing `M → Z^{Σ(1)}`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fan::{Fan, FiberFanResult, ToricMorphism};
use crate::intlin::{
    is_zero_vec, subgroup_and_quotient, FGAbelianGroup, GroupHom, IntLinError, IntMatrix, Lattice,
};

/// Attempts made by [`choose_divisor_subgroup_k`] before giving up.
pub const K_SEARCH_ATTEMPTS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivClassError {
    #[error("rays do not span the lattice: the variety has a torus factor and non-constant units")]
    TorusFactor,
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("class data was built from a different fan than the morphism source")]
    SourceMismatch,
    #[error("vertical class group has torsion")]
    TorsionVertical,
    #[error("no subgroup K free of vertical divisors found after {attempts} attempts")]
    SearchExhausted { attempts: u32 },
    #[error(transparent)]
    Lattice(#[from] IntLinError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDivisor {
    pub coefficients: Vec<BigInt>,
}

impl TorusDivisor {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        TorusDivisor { coefficients }
    }

    pub fn ray(n: usize, i: usize) -> Self {
        let mut c = vec![BigInt::zero(); n];
        c[i] = BigInt::from(1);
        TorusDivisor { coefficients: c }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coefficients)
    }
}

/// `M → Z^{Σ(1)} → Cl(X) → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClassData {
    fan: Fan,
    pairing: IntMatrix,
    class_group: FGAbelianGroup,
}

impl DivisorClassData {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// `#rays × rank`, sending `m` to `(⟨m, u_ρ⟩)_ρ`.
    pub fn pairing(&self) -> &IntMatrix {
        &self.pairing
    }

    pub fn class_group(&self) -> &FGAbelianGroup {
        &self.class_group
    }

    /// Projection `Z^{Σ(1)} → Cl(X)` in normal-form coordinates.
    pub fn degree(&self) -> &IntMatrix {
        self.class_group.projection()
    }

    pub fn ray_count(&self) -> usize {
        self.fan.rays().len()
    }

    pub fn class_of(&self, d: &TorusDivisor) -> Result<Vec<BigInt>, DivClassError> {
        Ok(self.class_group.class_of(&d.coefficients)?)
    }

    pub fn ray_class(&self, i: usize) -> Vec<BigInt> {
        self.class_of(&TorusDivisor::ray(self.ray_count(), i))
            .expect("sized")
    }
}

pub fn class_group(f: &Fan) -> Result<DivisorClassData, DivClassError> {
    if !f.rays_span() {
        return Err(DivClassError::TorusFactor);
    }
    let pairing = f.ray_matrix();
    let class_group = FGAbelianGroup::cokernel(&pairing);
    Ok(DivisorClassData {
        fan: f.clone(),
        pairing,
        class_group,
    })
}

pub fn principal_divisor(
    d: &DivisorClassData,
    m: &[BigInt],
) -> Result<TorusDivisor, DivClassError> {
    if m.len() != d.fan.rank() {
        return Err(DivClassError::DimensionMismatch {
            expected: d.fan.rank(),
            found: m.len(),
        });
    }
    Ok(TorusDivisor::new(d.pairing.mul_vec(m)?))
}

/// `Cl_π(X) ⊆ Cl(X)` and `Cl(X_η) = Cl(X)/Cl_π(X)`.
#[derive(Clone, Debug)]
pub struct VerticalClassData {
    pub vertical_rays: Vec<usize>,
    /// Abstract group on one generator per vertical ray.
    pub cl_pi: FGAbelianGroup,
    pub inclusion: GroupHom,
    /// Same ambient lattice as `Cl(X)`, i.e. `Z^{Σ(1)}`.
    pub cl_eta: FGAbelianGroup,
    pub quotient_map: GroupHom,
}

impl VerticalClassData {
    pub fn torsion_free(&self) -> bool {
        self.cl_pi.is_torsion_free()
    }
}

fn check_source(d: &DivisorClassData, m: &ToricMorphism) -> Result<(), DivClassError> {
    if d.fan.rays() != m.source().rays() || d.fan.rank() != m.source().rank() {
        return Err(DivClassError::SourceMismatch);
    }
    Ok(())
}

pub fn vertical_class_group(
    d: &DivisorClassData,
    m: &ToricMorphism,
) -> Result<VerticalClassData, DivClassError> {
    check_source(d, m)?;
    let vertical_rays = m.vertical_rays();
    let n = d.ray_count();
    let gens: Vec<Vec<BigInt>> = vertical_rays
        .iter()
        .map(|&i| TorusDivisor::ray(n, i).coefficients)
        .collect();
    let sq = subgroup_and_quotient(&d.class_group, &gens)?;
    Ok(VerticalClassData {
        vertical_rays,
        cl_pi: sq.subgroup,
        inclusion: sq.inclusion,
        cl_eta: sq.quotient,
        quotient_map: sq.quotient_map,
    })
}

/// Keeps the coefficients of fiber rays; vertical components die on the fiber.
pub fn pullback_to_fiber(ff: &FiberFanResult, divisor: &TorusDivisor) -> TorusDivisor {
    TorusDivisor::new(
        ff.ray_correspondence
            .iter()
            .map(|&i| divisor.coefficients[i].clone())
            .collect(),
    )
}

/// Characters vanishing on every horizontal ray against `αᵀ(M_Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCheck {
    /// `{m ∈ M_X : ⟨m, u_ρ⟩ = 0 for horizontal ρ}` (principal vertical divisors).
    pub vertical_characters: Lattice,
    /// `αᵀ(M_Y)` (pullbacks of principal divisors of the base).
    pub pulled_back: Lattice,
    pub saturations_equal: bool,
    pub lattices_equal: bool,
    /// A character in one lattice but not the other.
    pub witness: Option<Vec<BigInt>>,
}

impl LatticeCheck {
    pub fn ok(&self) -> bool {
        self.lattices_equal
    }
}

/// Works from the morphism alone so that fans rejected by [`class_group`]
/// (torus factors) can still be examined.
pub fn vertical_principal_lattice_check(m: &ToricMorphism) -> LatticeCheck {
    let rank = m.source().rank();
    let pairing = m.source().ray_matrix();
    let horizontal = pairing.select_rows(&m.horizontal_rays());
    let vertical_characters =
        Lattice::span(rank, &crate::intlin::kernel_basis(&horizontal)).expect("sized");
    let pulled_back = Lattice::span(rank, &m.matrix().row_vectors()).expect("sized");
    let saturations_equal = vertical_characters.saturation() == pulled_back.saturation();
    let lattices_equal = vertical_characters == pulled_back;
    let witness = vertical_characters
        .basis()
        .iter()
        .find(|v| !pulled_back.contains(v))
        .or_else(|| {
            pulled_back
                .basis()
                .iter()
                .find(|v| !vertical_characters.contains(v))
        })
        .cloned();
    LatticeCheck {
        vertical_characters,
        pulled_back,
        saturations_equal,
        lattices_equal,
        witness,
    }
}

/// `Cl(X) → Cl(X₀)` induced by restricting ray divisors to the fiber.
#[derive(Clone, Debug)]
pub struct RestrictionData {
    pub fiber: FiberFanResult,
    pub fiber_class: DivisorClassData,
    pub map: GroupHom,
    pub surjective: bool,
}

pub fn restriction_surjective(
    d: &DivisorClassData,
    m: &ToricMorphism,
) -> Result<RestrictionData, DivClassError> {
    check_source(d, m)?;
    let fiber = m.fiber_subfan();
    let fiber_class = class_group(&fiber.fiber_fan)?;
    let mut matrix = IntMatrix::zeros(fiber.ray_correspondence.len(), d.ray_count());
    for (j, &i) in fiber.ray_correspondence.iter().enumerate() {
        matrix.set(j, i, BigInt::from(1));
    }
    let map = GroupHom::new(
        d.class_group.clone(),
        fiber_class.class_group.clone(),
        matrix,
    )?;
    let surjective = map.is_surjective();
    Ok(RestrictionData {
        fiber,
        fiber_class,
        map,
        surjective,
    })
}

/// Generators of a subgroup `K ⊆ Z^{Σ(1)}` with `cl(K) = Cl(X)` and no
/// nonzero vertical divisors.
///
/// Each normal-form generator of `Cl(X)` is lifted to a divisor and moved by a
/// random principal divisor `div(χ^m)`. A candidate is accepted once the
/// horizontal parts are linearly independent, which makes `K ∩ WDiv_π = 0`;
/// both postconditions are re-verified before returning.
pub fn choose_divisor_subgroup_k(
    d: &DivisorClassData,
    m: &ToricMorphism,
    v: &VerticalClassData,
    seed: u64,
) -> Result<Vec<TorusDivisor>, DivClassError> {
    check_source(d, m)?;
    if !v.torsion_free() {
        return Err(DivClassError::TorsionVertical);
    }
    let cl = &d.class_group;
    let n = d.ray_count();
    let rank = d.fan.rank();
    let horizontal = m.horizontal_rays();
    let generators = cl.normal_rank();
    if generators > horizontal.len() {
        return Err(DivClassError::SearchExhausted { attempts: 0 });
    }
    let lifts: Vec<Vec<BigInt>> = (0..generators)
        .map(|j| {
            let mut e = vec![BigInt::zero(); generators];
            e[j] = BigInt::from(1);
            cl.lift(&e)
        })
        .collect::<Result<_, _>>()?;
    let vertical_lattice = Lattice::span(
        n,
        &v.vertical_rays
            .iter()
            .map(|&i| TorusDivisor::ray(n, i).coefficients)
            .collect::<Vec<_>>(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..K_SEARCH_ATTEMPTS {
        let spread = 1 + i64::from(attempt / 8);
        let candidate: Vec<Vec<BigInt>> = lifts
            .iter()
            .map(|lift| {
                let m: Vec<BigInt> = (0..rank)
                    .map(|_| BigInt::from(rng.gen_range(-spread..=spread)))
                    .collect();
                let p = d.pairing.mul_vec(&m).expect("sized");
                lift.iter().zip(&p).map(|(a, b)| a + b).collect()
            })
            .collect();
        let horizontal_parts: Vec<Vec<BigInt>> = candidate
            .iter()
            .map(|c| horizontal.iter().map(|&i| c[i].clone()).collect())
            .collect();
        let independent =
            IntMatrix::from_rows(horizontal.len(), &horizontal_parts)?.rank() == generators;
        if !independent {
            continue;
        }
        let k = Lattice::span(n, &candidate)?;
        if !k.intersection(&vertical_lattice)?.is_zero() {
            continue;
        }
        let gens = IntMatrix::from_columns(n, &candidate)?;
        let image = FGAbelianGroup::cokernel(&cl.relations().hstack(&gens)?);
        if !image.is_trivial() {
            continue;
        }
        return Ok(candidate.into_iter().map(TorusDivisor::new).collect());
    }
    Err(DivClassError::SearchExhausted {
        attempts: K_SEARCH_ATTEMPTS,
    })
}

/// Outcome of comparing `K⁰_η / i*(K⁰)` with `Cl_π(X)`.
#[derive(Clone, Debug)]
pub struct Prim1Report {
    pub k0_rank: usize,
    pub k0_eta_rank: usize,
    pub quotient: FGAbelianGroup,
    pub cl_pi: FGAbelianGroup,
}

impl Prim1Report {
    pub fn matches(&self) -> bool {
        self.quotient.same_structure(&self.cl_pi)
    }
}

pub fn prim1_check(
    d: &DivisorClassData,
    restriction: &RestrictionData,
    v: &VerticalClassData,
    k: &[TorusDivisor],
) -> Result<Prim1Report, DivClassError> {
    let n = d.ray_count();
    let k_lattice = Lattice::span(
        n,
        &k.iter().map(|g| g.coefficients.clone()).collect::<Vec<_>>(),
    )?;
    let kb = k_lattice.basis().to_vec();
    let kmat = IntMatrix::from_columns(n, &kb)?;

    // K⁰ = K ∩ ker(cl), as vectors in Z^{Σ(1)}.
    let k0: Vec<Vec<BigInt>> = d
        .class_group
        .kernel_of(&kmat)?
        .basis()
        .iter()
        .map(|c| kmat.mul_vec(c))
        .collect::<Result<_, _>>()?;

    // K_η is the image of K on fiber rays; K⁰_η its part of fiber degree zero.
    let f = restriction.fiber.ray_correspondence.len();
    let restrict = |v: &Vec<BigInt>| {
        pullback_to_fiber(&restriction.fiber, &TorusDivisor::new(v.clone())).coefficients
    };
    let k_eta: Vec<Vec<BigInt>> = kb.iter().map(restrict).collect();
    let k_eta_mat = IntMatrix::from_columns(f, &k_eta)?;
    let k0_eta: Vec<Vec<BigInt>> = restriction
        .fiber_class
        .class_group()
        .kernel_of(&k_eta_mat)?
        .basis()
        .iter()
        .map(|c| k_eta_mat.mul_vec(c))
        .collect::<Result<_, _>>()?;
    let k0_eta_lattice = Lattice::span(f, &k0_eta)?;

    // Coordinates of i*(K⁰) in the basis of K⁰_η, then the cokernel.
    let basis = IntMatrix::from_columns(f, k0_eta_lattice.basis())?;
    let coords: Vec<Vec<BigInt>> = k0
        .iter()
        .map(|v| crate::intlin::solve_integer(&basis, &restrict(v)))
        .collect::<Result<_, _>>()?;
    let relations = IntMatrix::from_columns(k0_eta_lattice.rank(), &coords)?;
    Ok(Prim1Report {
        k0_rank: Lattice::span(n, &k0)?.rank(),
        k0_eta_rank: k0_eta_lattice.rank(),
        quotient: FGAbelianGroup::cokernel(&relations),
        cl_pi: v.cl_pi.clone(),
    })
}
