//! The Cox ring of the generic fiber as a quotient of the localized Cox ring.
//!
//! For a toric fiber space the Cox ring of `X` is the polynomial ring on the
//! rays, graded by `Cl(X)`. Localizing at the vertical variables and dividing
//! by `⟨1 − u(w) : w ∈ Cl_π(X)⟩` identifies vertical exponents modulo the
//! lattice `L_u` spanned by the exponent vectors of the unit section. What is
//! left is graded by `Cl(X_η) = Cl(X)/Cl_π(X)`.
//!
//! Dimensions over `K(Y)`: every graded piece of a toric Cox ring has a
//! monomial basis. Two monomials with equal horizontal part differ by a
//! vertical Laurent monomial of degree zero, which lies in `R_π(X)_0 = K(Y)`,
//! while monomials with distinct horizontal parts stay independent. So the
//! degree-`d` piece of the quotient has dimension equal to the number of
//! horizontal exponent vectors of `Cl(X_η)`-degree `d`. This count is compared
//! against the fiber Cox ring, computed on a separate path as lattice points of
//! the polytope `{m ∈ M₀ : ⟨m, u_ρ⟩ + b_ρ ≥ 0}` for a divisor `b` of the
//! requested class.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::divclass::{
    class_group, restriction_surjective, vertical_class_group, vertical_principal_lattice_check,
    DivClassError, DivisorClassData, RestrictionData, VerticalClassData,
};
use crate::fan::{is_complete, ToricMorphism};
use crate::intlin::{
    dot, is_zero_vec, solve_integer, FGAbelianGroup, GroupHom, IntLinError, IntMatrix, Lattice,
};
use crate::io::{matrix_value, vec_value};
use crate::polyhedral::{Constraint, Enumeration, System};

#[derive(Debug, Clone, Error)]
pub enum CoxFiberError {
    #[error("vertical class group has torsion")]
    TorsionVertical,
    #[error("no monomial unit of degree -w for vertical generator {generator}")]
    NoMonomialUnit { generator: usize },
    #[error("graded piece is infinite dimensional")]
    InfiniteDimension,
    #[error("grading map is not well defined: {witness}")]
    NotWellDefined { witness: String },
    #[error("grading map is not injective: class {witness:?} maps to zero")]
    NotInjective { witness: Vec<BigInt> },
    #[error("grading map is not surjective: class {witness:?} is not hit")]
    NotSurjective { witness: Vec<BigInt> },
    #[error("hypotheses failed: {}", failed_names(.report))]
    HypothesisFailed { report: Box<TheoremReport> },
    #[error(transparent)]
    DivClass(#[from] DivClassError),
    #[error(transparent)]
    Lattice(#[from] IntLinError),
}

fn failed_names(report: &TheoremReport) -> String {
    report.failed_hypotheses().join(", ")
}

/// The Cox ring of a toric variety: one variable per ray, graded by `Cl(X)`.
#[derive(Clone, Debug)]
pub struct CoxPresentation {
    variables: usize,
    degree: IntMatrix,
    class_group: FGAbelianGroup,
}

impl CoxPresentation {
    pub fn new(d: &DivisorClassData) -> Self {
        CoxPresentation {
            variables: d.ray_count(),
            degree: d.degree().clone(),
            class_group: d.class_group().clone(),
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn degree_matrix(&self) -> &IntMatrix {
        &self.degree
    }

    /// Degree of the Laurent monomial with the given exponents.
    pub fn monomial_degree(&self, exponents: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        self.class_group.class_of(exponents)
    }
}

/// Monomial representative of `u: Cl_π(X) → R_π(X)^*` on a basis of `Cl_π(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSection {
    /// Basis classes `w`, in `Cl(X)` normal-form coordinates.
    pub generators: Vec<Vec<BigInt>>,
    /// For each `w`, exponents over all rays, supported on vertical rays,
    /// of a monomial of degree `−w`.
    pub exponents: Vec<Vec<BigInt>>,
}

pub fn unit_section(
    d: &DivisorClassData,
    v: &VerticalClassData,
) -> Result<UnitSection, CoxFiberError> {
    if !v.torsion_free() {
        return Err(CoxFiberError::TorsionVertical);
    }
    let n = d.ray_count();
    let r = v.cl_pi.free_rank();
    let mut generators = Vec::with_capacity(r);
    let mut exponents = Vec::with_capacity(r);
    for j in 0..r {
        let mut e = vec![BigInt::zero(); r];
        e[j] = BigInt::one();
        let c = solve_integer(v.cl_pi.projection(), &e)
            .map_err(|_| CoxFiberError::NoMonomialUnit { generator: j })?;
        let mut divisor = vec![BigInt::zero(); n];
        for (&ray, cj) in v.vertical_rays.iter().zip(&c) {
            divisor[ray] = cj.clone();
        }
        let w = d.class_group().class_of(&divisor)?;
        let exps: Vec<BigInt> = divisor.iter().map(|x| -x).collect();
        let check: Vec<BigInt> = d.class_group().normalize(
            &d.class_group()
                .class_of(&exps)?
                .iter()
                .zip(&w)
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>(),
        );
        debug_assert!(is_zero_vec(&check), "unit section has degree -w");
        generators.push(w);
        exponents.push(exps);
    }
    Ok(UnitSection {
        generators,
        exponents,
    })
}

/// `R_π(X)/⟨1 − u(w)⟩` as exponent-lattice combinatorics.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub horizontal_rays: Vec<usize>,
    pub vertical_rays: Vec<usize>,
    /// `L_u ⊆ Z^{Σ(1)}`, supported on vertical coordinates.
    pub congruence_lattice: Lattice,
    /// `Z^{horizontal} → Cl(X_η)` in normal-form coordinates.
    pub eta_grading: IntMatrix,
    cl_eta: FGAbelianGroup,
}

impl QuotientPresentation {
    pub fn cl_eta(&self) -> &FGAbelianGroup {
        &self.cl_eta
    }

    /// Vertical coordinates reduced to the canonical coset of `L_u`;
    /// horizontal coordinates are untouched.
    pub fn canonical_form(&self, exponents: &[BigInt]) -> Vec<BigInt> {
        self.congruence_lattice.reduce(exponents)
    }

    /// `Cl(X_η)`-degree of a Laurent monomial over all rays.
    pub fn eta_degree(&self, exponents: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        self.cl_eta.class_of(exponents)
    }
}

pub fn quotient_presentation(
    d: &DivisorClassData,
    v: &VerticalClassData,
    u: &UnitSection,
) -> Result<QuotientPresentation, CoxFiberError> {
    let n = d.ray_count();
    let vertical: std::collections::BTreeSet<usize> = v.vertical_rays.iter().copied().collect();
    let horizontal_rays: Vec<usize> = (0..n).filter(|i| !vertical.contains(i)).collect();
    let congruence_lattice = Lattice::span(n, &u.exponents)?;
    let generator_classes = v.cl_eta.generator_classes();
    let eta_grading = generator_classes.select_columns(&horizontal_rays);
    for (col, &ray) in horizontal_rays.iter().enumerate() {
        let via_quotient = v.quotient_map.apply_class(&d.ray_class(ray))?;
        debug_assert_eq!(via_quotient, eta_grading.column(col));
    }
    Ok(QuotientPresentation {
        horizontal_rays,
        vertical_rays: v.vertical_rays.clone(),
        congruence_lattice,
        eta_grading,
        cl_eta: v.cl_eta.clone(),
    })
}

/// `Cl(X_η) ≅ Cl(X₀)` induced by `[D_ρ] ↦ [D_ρ|_{X₀}]` on fiber rays.
#[derive(Clone, Debug)]
pub struct GradingIso {
    pub map: GroupHom,
    pub inverse: GroupHom,
}

pub fn grading_isomorphism(
    v: &VerticalClassData,
    fiber_class: &DivisorClassData,
    correspondence: &[usize],
) -> Result<GradingIso, CoxFiberError> {
    let cl_eta = &v.cl_eta;
    let cl_0 = fiber_class.class_group();
    let n = cl_eta.ambient_rank();
    let f = correspondence.len();
    let mut forward = IntMatrix::zeros(f, n);
    let mut backward = IntMatrix::zeros(n, f);
    for (j, &i) in correspondence.iter().enumerate() {
        forward.set(j, i, BigInt::one());
        backward.set(i, j, BigInt::one());
    }
    let not_well_defined = |side: &str, e: IntLinError| CoxFiberError::NotWellDefined {
        witness: format!("{side}: {e}"),
    };
    let map = GroupHom::new(cl_eta.clone(), cl_0.clone(), forward)
        .map_err(|e| not_well_defined("forward", e))?;
    if let Some(witness) = map.kernel_witness() {
        return Err(CoxFiberError::NotInjective { witness });
    }
    if let Some(witness) = map.cokernel_witness() {
        return Err(CoxFiberError::NotSurjective { witness });
    }
    let inverse = GroupHom::new(cl_0.clone(), cl_eta.clone(), backward)
        .map_err(|e| not_well_defined("inverse", e))?;

    for (j, &i) in correspondence.iter().enumerate() {
        let eta = cl_eta.class_of(&crate::divclass::TorusDivisor::ray(n, i).coefficients)?;
        if map.apply_class(&eta)? != fiber_class.ray_class(j) {
            return Err(CoxFiberError::NotWellDefined {
                witness: format!("fiber ray {j} does not commute"),
            });
        }
    }
    for (group, composite) in [
        (cl_eta, inverse.compose(&map)?),
        (cl_0, map.compose(&inverse)?),
    ] {
        for k in 0..group.normal_rank() {
            let mut e = vec![BigInt::zero(); group.normal_rank()];
            e[k] = BigInt::one();
            if composite.apply_class(&e)? != group.normalize(&e) {
                return Err(CoxFiberError::NotWellDefined {
                    witness: format!("composite moves basis class {k}"),
                });
            }
        }
    }
    Ok(GradingIso { map, inverse })
}

/// Number of horizontal exponent vectors `a ≥ 0` with `Cl(X_η)`-degree `deg`.
pub fn hilbert_dimension_quotient(
    q: &QuotientPresentation,
    deg: &[BigInt],
) -> Result<u64, CoxFiberError> {
    let g = &q.eta_grading;
    let cl = &q.cl_eta;
    let deg = cl.normalize(deg);
    let h = g.cols();
    let free = cl.free_rank();
    if h == 0 {
        return Ok(u64::from(is_zero_vec(&deg)));
    }
    let free_cols: Vec<Vec<BigInt>> = (0..h).map(|j| g.column(j)[..free].to_vec()).collect();

    // A functional positive on every horizontal degree bounds the search.
    let mut positivity = System::new(free);
    for col in &free_cols {
        positivity.push(Constraint::geq(col.clone(), -BigInt::one()));
    }
    let Some(functional) = positivity.find_point() else {
        let mut fiber = System::new(h);
        for j in 0..h {
            let mut e = vec![BigInt::zero(); h];
            e[j] = BigInt::one();
            fiber.push(Constraint::geq(e, BigInt::zero()));
        }
        for (i, d) in deg.iter().enumerate().take(free) {
            fiber.extend(Constraint::eq(g.row(i), -d));
        }
        return if fiber.is_feasible() {
            Err(CoxFiberError::InfiniteDimension)
        } else {
            Ok(0)
        };
    };
    let denominator = functional
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ell: Vec<BigInt> = functional
        .iter()
        .map(|x| (x * &denominator).to_integer())
        .collect();
    let weights: Vec<BigInt> = free_cols.iter().map(|c| dot(&ell, c)).collect();
    let target = dot(&ell, &deg[..free]);
    if target.is_negative() {
        return Ok(0);
    }

    let mut count = 0u64;
    let mut exps = vec![BigInt::zero(); h];
    weighted_compositions(&weights, 0, &target, &mut exps, &mut |a| {
        let d = cl.normalize(&g.mul_vec(a).expect("sized"));
        if d == deg {
            count += 1;
        }
    });
    Ok(count)
}

fn weighted_compositions(
    weights: &[BigInt],
    k: usize,
    remaining: &BigInt,
    exps: &mut Vec<BigInt>,
    visit: &mut dyn FnMut(&[BigInt]),
) {
    if k + 1 == weights.len() {
        let (q, r) = remaining.div_rem(&weights[k]);
        if r.is_zero() {
            exps[k] = q;
            visit(exps);
        }
        return;
    }
    let mut a = BigInt::zero();
    let mut used = BigInt::zero();
    while &used <= remaining {
        exps[k] = a.clone();
        weighted_compositions(weights, k + 1, &(remaining - &used), exps, visit);
        a += 1;
        used += &weights[k];
    }
}

/// Dimension of the degree-`deg` piece of the fiber Cox ring, counted as
/// lattice points of the polytope of a divisor in that class.
pub fn hilbert_dimension_fiber(
    fiber_class: &DivisorClassData,
    deg: &[BigInt],
) -> Result<u64, CoxFiberError> {
    let cl = fiber_class.class_group();
    let base = cl.lift(&cl.normalize(deg))?;
    let pairing = fiber_class.pairing();
    let mut polytope = System::new(pairing.cols());
    for (row, b) in pairing.row_vectors().into_iter().zip(base) {
        polytope.push(Constraint::geq(row, b));
    }
    match polytope.integer_points() {
        Enumeration::Points(p) => Ok(p.len() as u64),
        Enumeration::Unbounded => Err(CoxFiberError::InfiniteDimension),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckStatus {
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckStatus {
    pub fn pass() -> Self {
        CheckStatus {
            pass: true,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        CheckStatus {
            pass: false,
            witness: Some(witness.into()),
        }
    }

    pub fn from_bool(pass: bool, witness: impl FnOnce() -> String) -> Self {
        if pass {
            Self::pass()
        } else {
            Self::fail(witness())
        }
    }

    fn to_json(&self) -> Value {
        json!({ "pass": self.pass, "witness": self.witness })
    }
}

pub const SOURCE_COMPLETE: &str = "source complete";
pub const TARGET_COMPLETE: &str = "target complete";
pub const COMPATIBLE: &str = "compatible";
pub const CONNECTED_FIBERS: &str = "connected fibers";
pub const SOURCE_RAYS_SPAN: &str = "source rays span";
pub const TARGET_RAYS_SPAN: &str = "target rays span";
pub const VERTICAL_TORSION_FREE: &str = "vertical classes torsion free";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub degree: Vec<BigInt>,
    pub fiber_degree: Vec<BigInt>,
    /// `None` when the piece is infinite dimensional.
    pub dim_quotient: Option<u64>,
    pub dim_fiber: Option<u64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub hypotheses: BTreeMap<String, CheckStatus>,
    pub diagnostics: BTreeMap<String, CheckStatus>,
    /// Normal-form matrices of `Cl(X_η) → Cl(X₀)` and its inverse.
    pub grading_iso: Option<(IntMatrix, IntMatrix)>,
    pub cl_eta: Option<(usize, Vec<BigInt>)>,
    pub table: Vec<TableRow>,
    pub pass: bool,
}

impl TheoremReport {
    pub fn failed_hypotheses(&self) -> Vec<String> {
        self.hypotheses
            .iter()
            .filter(|(_, s)| !s.pass)
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let checks = |m: &BTreeMap<String, CheckStatus>| -> Value {
            Value::Object(m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
        };
        let dim = |d: Option<u64>| d.map_or(Value::Null, Value::from);
        json!({
            "hypotheses": checks(&self.hypotheses),
            "diagnostics": checks(&self.diagnostics),
            "grading_iso": self.grading_iso.as_ref().map_or(Value::Null, |(f, b)| json!({
                "map": matrix_value(f),
                "inverse": matrix_value(b),
            })),
            "table": self.table.iter().map(|r| json!({
                "degree": vec_value(&r.degree),
                "dim_quotient": dim(r.dim_quotient),
                "dim_fiber": dim(r.dim_fiber),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
            "pass": self.pass,
        })
    }
}

/// Hypotheses shared by the theorem check and the blow-up pipeline, together
/// with the class data when it could be computed.
pub fn theorem_hypotheses(
    m: &ToricMorphism,
) -> (
    BTreeMap<String, CheckStatus>,
    Option<(DivisorClassData, VerticalClassData)>,
) {
    let mut h = BTreeMap::new();
    h.insert(
        SOURCE_COMPLETE.to_string(),
        CheckStatus::from_bool(is_complete(m.source()), || {
            "support of the source fan is not N_Q".into()
        }),
    );
    h.insert(
        TARGET_COMPLETE.to_string(),
        CheckStatus::from_bool(is_complete(m.target()), || {
            "support of the target fan is not N_Q".into()
        }),
    );
    h.insert(COMPATIBLE.to_string(), CheckStatus::pass());
    h.insert(
        CONNECTED_FIBERS.to_string(),
        CheckStatus::from_bool(m.lattice_surjective(), || {
            let snf = crate::intlin::smith_normal_form(m.matrix());
            let d: Vec<String> = snf
                .diagonal_entries()
                .iter()
                .map(ToString::to_string)
                .collect();
            format!(
                "lattice map is not surjective (Smith diagonal {})",
                d.join(",")
            )
        }),
    );
    h.insert(
        TARGET_RAYS_SPAN.to_string(),
        CheckStatus::from_bool(m.target().rays_span(), || {
            "target has a torus factor".into()
        }),
    );
    let data = match class_group(m.source()) {
        Ok(d) => {
            h.insert(SOURCE_RAYS_SPAN.to_string(), CheckStatus::pass());
            let v = vertical_class_group(&d, m).expect("class data built from the source");
            h.insert(
                VERTICAL_TORSION_FREE.to_string(),
                CheckStatus::from_bool(v.torsion_free(), || format!("Cl_pi(X) = {}", v.cl_pi)),
            );
            Some((d, v))
        }
        Err(e) => {
            h.insert(
                SOURCE_RAYS_SPAN.to_string(),
                CheckStatus::fail(e.to_string()),
            );
            h.insert(
                VERTICAL_TORSION_FREE.to_string(),
                CheckStatus::fail("class group not computed"),
            );
            None
        }
    };
    (h, data)
}

/// Everything the theorem check builds on the way to the Hilbert table.
#[derive(Clone, Debug)]
pub struct FiberSpaceData {
    pub classes: DivisorClassData,
    pub vertical: VerticalClassData,
    pub restriction: RestrictionData,
    pub unit: UnitSection,
    pub quotient: QuotientPresentation,
    pub iso: GradingIso,
}

pub fn fiber_space_data(
    m: &ToricMorphism,
    classes: DivisorClassData,
    vertical: VerticalClassData,
) -> Result<FiberSpaceData, CoxFiberError> {
    let restriction = restriction_surjective(&classes, m)?;
    let unit = unit_section(&classes, &vertical)?;
    let quotient = quotient_presentation(&classes, &vertical, &unit)?;
    let iso = grading_isomorphism(
        &vertical,
        &restriction.fiber_class,
        &restriction.fiber.ray_correspondence,
    )?;
    Ok(FiberSpaceData {
        classes,
        vertical,
        restriction,
        unit,
        quotient,
        iso,
    })
}

pub fn verify_theorem(m: &ToricMorphism, box_radius: u32) -> Result<TheoremReport, CoxFiberError> {
    let (hypotheses, data) = theorem_hypotheses(m);
    let mut report = TheoremReport {
        hypotheses,
        diagnostics: BTreeMap::new(),
        grading_iso: None,
        cl_eta: None,
        table: Vec::new(),
        pass: false,
    };
    if !report.failed_hypotheses().is_empty() {
        return Err(CoxFiberError::HypothesisFailed {
            report: Box::new(report),
        });
    }
    let (classes, vertical) = data.expect("hypotheses passed");
    let fs = fiber_space_data(m, classes, vertical)?;

    report.diagnostics.insert(
        "fiber fan complete".into(),
        CheckStatus::from_bool(is_complete(&fs.restriction.fiber.fiber_fan), || {
            "fiber fan support is not N0".into()
        }),
    );
    report.diagnostics.insert(
        "restriction surjective".into(),
        CheckStatus::from_bool(fs.restriction.surjective, || {
            "Cl(X) -> Cl(X0) misses a class".into()
        }),
    );
    let lattice = vertical_principal_lattice_check(m);
    report.diagnostics.insert(
        "vertical principal lattice".into(),
        CheckStatus::from_bool(lattice.ok(), || format!("witness {:?}", lattice.witness)),
    );
    let zero = vec![BigInt::zero(); fs.quotient.cl_eta().normal_rank()];
    let degree_zero = hilbert_dimension_quotient(&fs.quotient, &zero).ok();
    report.diagnostics.insert(
        "degree zero piece is one dimensional".into(),
        CheckStatus::from_bool(degree_zero == Some(1), || {
            format!("dimension {degree_zero:?}")
        }),
    );

    report.grading_iso = Some((
        fs.iso.map.normal_form_matrix(),
        fs.iso.inverse.normal_form_matrix(),
    ));
    report.cl_eta = Some(fs.vertical.cl_eta.structure());
    for degree in fs.quotient.cl_eta().box_elements(box_radius) {
        let fiber_degree = fs.iso.map.apply_class(&degree)?;
        let dim_quotient = hilbert_dimension_quotient(&fs.quotient, &degree).ok();
        let dim_fiber = hilbert_dimension_fiber(&fs.restriction.fiber_class, &fiber_degree).ok();
        let pass = dim_quotient == dim_fiber;
        report.table.push(TableRow {
            degree,
            fiber_degree,
            dim_quotient,
            dim_fiber,
            pass,
        });
    }
    report.pass = report.table.iter().all(|r| r.pass);
    Ok(report)
}

/// Renders a normal-form class like `(1, -2)`.
pub fn class_string(c: &[BigInt]) -> String {
    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}
