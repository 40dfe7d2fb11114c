//! Blow-ups of toric fiber spaces along `{x₀} × T_Y` and non-finite-generation
//! certificates.
//!
//! Let `π: X → Y` be a toric fiber space with connected fibers and `Cl(Y)`
//! torsion free, `X₀` the fiber over the identity of `T_Y`, and `X̃` the
//! blow-up of `X` along the closure of `{x₀} × T_Y` for a general point
//! `x₀ ∈ X₀`. Then `X̃` is not toric, but `Cl(X̃) = Cl(X) ⊕ Z·[E]`, its vertical
//! classes agree with `Cl_π(X)`, and `Cl(X̃) → Cl(X̃₀)` is surjective. If the
//! Cox ring of the blown-up fiber `X̃₀` is not finitely generated, neither is
//! that of `X̃`. The first fact is external input; everything else here is
//! checked.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coxfiber::{theorem_hypotheses, verify_theorem, CheckStatus, CoxFiberError};
use crate::divclass::{class_group, restriction_surjective, vertical_class_group, TorusDivisor};
use crate::fan::examples::p1;
use crate::fan::{make_morphism, Fan, ToricMorphism};
use crate::intlin::{
    gcd_of, hermite_rows, subgroup_and_quotient, FGAbelianGroup, GroupHom, IntMatrix,
};
use crate::io::morphism_to_json_inline;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSpaceSpec {
    pub morphism: ToricMorphism,
    pub source_label: Option<String>,
    pub target_label: Option<String>,
}

impl FiberSpaceSpec {
    pub fn new(morphism: ToricMorphism) -> Self {
        let source_label = morphism.source().name().map(str::to_string);
        let target_label = morphism.target().name().map(str::to_string);
        FiberSpaceSpec {
            morphism,
            source_label,
            target_label,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source_label": self.source_label,
            "target_label": self.target_label,
            "morphism": morphism_to_json_inline(&self.morphism),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
    /// Reported but not part of the hypotheses.
    pub informational: bool,
}

impl Check {
    fn new(name: &str, status: CheckStatus) -> Self {
        Check {
            name: name.to_string(),
            pass: status.pass,
            witness: status.witness,
            informational: false,
        }
    }

    fn info(name: &str, status: CheckStatus) -> Self {
        Check {
            informational: true,
            ..Check::new(name, status)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "pass": self.pass, "witness": self.witness, "informational": self.informational })
    }
}

pub const TARGET_TORSION_FREE: &str = "target class group torsion free";
pub const SECTION_CRITERION: &str = "rational section and torsion-free target";

pub fn check_construction_hypotheses(spec: &FiberSpaceSpec) -> Vec<Check> {
    let m = &spec.morphism;
    let (hypotheses, _) = theorem_hypotheses(m);
    let mut checks: Vec<Check> = hypotheses
        .iter()
        .map(|(k, v)| Check::new(k, v.clone()))
        .collect();
    let target_torsion = match class_group(m.target()) {
        Ok(d) => {
            let cl = d.class_group();
            CheckStatus::from_bool(cl.is_torsion_free(), || format!("Cl(Y) = {cl}"))
        }
        Err(e) => CheckStatus::fail(e.to_string()),
    };
    // α splits over Q; lattice surjectivity makes the splitting integral, so a
    // rational section exists exactly when fibers are connected.
    let section = m.lattice_surjective();
    checks.push(Check::new(TARGET_TORSION_FREE, target_torsion.clone()));
    checks.push(Check::info(
        SECTION_CRITERION,
        CheckStatus::from_bool(section && target_torsion.pass, || {
            "no integral splitting of the lattice map, or Cl(Y) has torsion".into()
        }),
    ));
    checks
}

#[derive(Clone, Debug, Error)]
pub enum BlowupError {
    #[error("construction hypotheses failed: {}", .failed.join(", "))]
    PrerequisiteFailed { failed: Vec<String> },
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error(transparent)]
    Computation(#[from] CoxFiberError),
}

impl From<crate::divclass::DivClassError> for BlowupError {
    fn from(e: crate::divclass::DivClassError) -> Self {
        BlowupError::Computation(e.into())
    }
}

impl From<crate::intlin::IntLinError> for BlowupError {
    fn from(e: crate::intlin::IntLinError) -> Self {
        BlowupError::Computation(e.into())
    }
}

/// Class-group bookkeeping for `X̃`. The last ambient coordinate is `[E]`
/// on `X̃` and `[E₀]` on `X̃₀`.
#[derive(Clone, Debug)]
pub struct BlowupLedger {
    pub cl_pi: FGAbelianGroup,
    pub cl_tilde: FGAbelianGroup,
    pub cl_pi_tilde: FGAbelianGroup,
    pub cl_fiber_tilde: FGAbelianGroup,
    pub restriction_tilde: GroupHom,
    pub restriction_surjective: bool,
    pub vertical_match: bool,
    pub exceptional_restricts: bool,
}

pub fn blowup_class_ledger(spec: &FiberSpaceSpec) -> Result<BlowupLedger, BlowupError> {
    let failed: Vec<String> = check_construction_hypotheses(spec)
        .into_iter()
        .filter(|c| !c.pass && !c.informational)
        .map(|c| c.name)
        .collect();
    if !failed.is_empty() {
        return Err(BlowupError::PrerequisiteFailed { failed });
    }
    let m = &spec.morphism;
    let d = class_group(m.source())?;
    let v = vertical_class_group(&d, m)?;
    let restriction = restriction_surjective(&d, m)?;
    let n = d.ray_count();
    let f = restriction.fiber.ray_correspondence.len();

    let e = FGAbelianGroup::free(1);
    let cl_tilde = d.class_group().direct_sum(&e);
    let cl_fiber_tilde = restriction.fiber_class.class_group().direct_sum(&e);
    let vertical: Vec<Vec<BigInt>> = v
        .vertical_rays
        .iter()
        .map(|&i| TorusDivisor::ray(n + 1, i).coefficients)
        .collect();
    let cl_pi_tilde = subgroup_and_quotient(&cl_tilde, &vertical)?.subgroup;

    let mut block = IntMatrix::zeros(f + 1, n + 1);
    for i in 0..f {
        for j in 0..n {
            block.set(i, j, restriction.map.matrix().get(i, j).clone());
        }
    }
    block.set(f, n, BigInt::one());
    let restriction_tilde = GroupHom::new(cl_tilde.clone(), cl_fiber_tilde.clone(), block)?;

    let class_e = cl_tilde.class_of(&TorusDivisor::ray(n + 1, n).coefficients)?;
    let class_e0 = cl_fiber_tilde.class_of(&TorusDivisor::ray(f + 1, f).coefficients)?;
    let exceptional_restricts = restriction_tilde.apply_class(&class_e)? == class_e0;

    Ok(BlowupLedger {
        restriction_surjective: restriction_tilde.is_surjective(),
        vertical_match: cl_pi_tilde.same_structure(&v.cl_pi),
        exceptional_restricts,
        cl_pi: v.cl_pi,
        cl_tilde,
        cl_pi_tilde,
        cl_fiber_tilde,
        restriction_tilde,
    })
}

/// Weighted projective space bundle over `P¹`.
#[derive(Clone, Debug)]
pub struct WpsBundle {
    pub fiber: Fan,
    pub fan: Fan,
    pub base: Fan,
    pub morphism: ToricMorphism,
}

/// Fan of `P(a₀, …, a_n)` in `N₀ = Z^{n+1}/Z·a`, with rays ordered as the
/// images of `e₁, …, e_n, e₀`. For `a₀ = 1` these are `e₁, …, e_n` and
/// `−(a₁, …, a_n)`.
pub fn weighted_projective_fan(weights: &[BigInt]) -> Result<Fan, BlowupError> {
    if weights.len() < 2 {
        return Err(BlowupError::BadWeights("need at least two weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
        return Err(BlowupError::BadWeights(format!(
            "weight {w} is not positive"
        )));
    }
    if !gcd_of(weights).is_one() {
        return Err(BlowupError::BadWeights("weights must have gcd 1".into()));
    }
    let n = weights.len() - 1;
    let mut reordered: Vec<BigInt> = weights[1..].to_vec();
    reordered.push(weights[0].clone());
    // Dual lattice M₀ = a^⊥; the image of e_i in N₀ is row i of a basis of M₀.
    let kernel = hermite_rows(
        &crate::intlin::kernel_basis(&IntMatrix::from_rows(n + 1, &[reordered]).expect("sized")),
        n + 1,
    );
    let rays: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| {
            let row: Vec<BigInt> = kernel.iter().map(|k| k[i].clone()).collect();
            let g = gcd_of(&row);
            row.into_iter().map(|x| x / &g).collect()
        })
        .collect();
    let cones: Vec<Vec<usize>> = (0..=n)
        .rev()
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    let name = format!(
        "P({})",
        weights
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(Fan::new(n, rays, cones, Some(name)).expect("weighted projective fan is valid"))
}

/// Maximal cones `cone(σ, (0,1))` and `cone(σ, (v,−1))` over `P(a)`, with the
/// projection to the last coordinate.
pub fn build_wps_bundle(weights: &[BigInt], v: &[BigInt]) -> Result<WpsBundle, BlowupError> {
    let fiber = weighted_projective_fan(weights)?;
    let n = fiber.rank();
    if v.len() != n {
        return Err(BlowupError::BadWeights(format!(
            "v has length {}, fiber rank is {n}",
            v.len()
        )));
    }
    let mut rays: Vec<Vec<BigInt>> = fiber
        .rays()
        .iter()
        .map(|r| {
            let mut x = r.clone();
            x.push(BigInt::zero());
            x
        })
        .collect();
    let up = rays.len();
    let mut top = vec![BigInt::zero(); n];
    top.push(BigInt::one());
    let mut bottom = v.to_vec();
    bottom.push(-BigInt::one());
    rays.push(top);
    rays.push(bottom);
    let mut cones = Vec::new();
    for sigma in fiber.max_cones() {
        for extra in [up, up + 1] {
            let mut c = sigma.generators().to_vec();
            c.push(extra);
            cones.push(c);
        }
    }
    let vs: Vec<String> = v.iter().map(ToString::to_string).collect();
    let name = format!(
        "{}-bundle v=({})",
        fiber.name().unwrap_or("P"),
        vs.join(",")
    );
    let fan = Fan::new(n + 1, rays, cones, Some(name)).expect("bundle fan is valid");
    let base = p1();
    let mut row = vec![BigInt::zero(); n + 1];
    row[n] = BigInt::one();
    let matrix = IntMatrix::from_rows(n + 1, &[row]).expect("sized");
    let morphism =
        make_morphism(fan.clone(), base.clone(), matrix).expect("projection is compatible");
    Ok(WpsBundle {
        fiber,
        fan,
        base,
        morphism,
    })
}

pub const GENERAL_POINT_ASSUMPTION: &str =
    "x0 is a general point of X0; generality is assumed, not machine checked";

#[derive(Clone, Debug)]
pub struct NonFGCertificate {
    pub spec: FiberSpaceSpec,
    pub checks: Vec<Check>,
    pub external_input: String,
    pub assumptions: Vec<String>,
    pub conclusion: String,
    pub valid: bool,
}

/// Valid iff every hypothesis check passed and a citation was supplied.
pub fn certificate_validity(checks: &[Check], external_input: &str) -> bool {
    !external_input.trim().is_empty() && checks.iter().filter(|c| !c.informational).all(|c| c.pass)
}

fn conclusion(valid: bool) -> String {
    if valid {
        "the Cox ring of the blow-up of X along the closure of {x0} x T_Y is not finitely generated, \
         given the cited non-finite-generation for the blow-up of X0 at a general point"
            .into()
    } else {
        "no conclusion: a machine check failed or no citation was given".into()
    }
}

impl NonFGCertificate {
    /// Recomputes validity and conclusion from the current checks.
    pub fn revalidate(&mut self) {
        self.valid = certificate_validity(&self.checks, &self.external_input);
        self.conclusion = conclusion(self.valid);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec.to_json(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "external_input": self.external_input,
            "assumptions": self.assumptions,
            "conclusion": self.conclusion,
            "valid": self.valid,
        })
    }
}

pub const SANITY_BOX: u32 = 4;

pub fn certify_nonfg(spec: &FiberSpaceSpec, external_input: &str) -> NonFGCertificate {
    let mut checks = check_construction_hypotheses(spec);
    let ledger_names = [
        "blow-up restriction surjective",
        "blow-up vertical classes match",
        "exceptional divisor restricts to exceptional divisor",
    ];
    match blowup_class_ledger(spec) {
        Ok(ledger) => {
            checks.push(Check::new(
                ledger_names[0],
                CheckStatus::from_bool(ledger.restriction_surjective, || {
                    format!(
                        "class {:?} not hit",
                        ledger.restriction_tilde.cokernel_witness()
                    )
                }),
            ));
            checks.push(Check::new(
                ledger_names[1],
                CheckStatus::from_bool(ledger.vertical_match, || {
                    format!("{} vs {}", ledger.cl_pi_tilde, ledger.cl_pi)
                }),
            ));
            checks.push(Check::new(
                ledger_names[2],
                CheckStatus::from_bool(ledger.exceptional_restricts, || {
                    "[E] does not map to [E0]".into()
                }),
            ));
        }
        Err(e) => {
            for name in ledger_names {
                checks.push(Check::new(name, CheckStatus::fail(e.to_string())));
            }
        }
    }
    let sanity = match verify_theorem(&spec.morphism, SANITY_BOX) {
        Ok(r) => CheckStatus::from_bool(r.pass, || "graded dimensions disagree".into()),
        Err(e) => CheckStatus::fail(e.to_string()),
    };
    checks.push(Check::new("theorem check on unblown space", sanity));

    let mut cert = NonFGCertificate {
        spec: spec.clone(),
        checks,
        external_input: external_input.to_string(),
        assumptions: vec![
            GENERAL_POINT_ASSUMPTION.to_string(),
            "bookkeeping from the blow-up argument, not a fan computation: Cl(X~) = Cl(X) + Z[E]"
                .into(),
        ],
        conclusion: String::new(),
        valid: false,
    };
    cert.revalidate();
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxfiber::CONNECTED_FIBERS;
    use crate::fan::examples::*;
    use crate::fan::is_complete;
    use crate::intlin::ivec;

    #[test]
    fn weighted_fans() {
        let f = weighted_projective_fan(&ivec(&[1, 1, 2])).unwrap();
        assert_eq!(f.rays(), &[ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -2])]);
        let f = weighted_projective_fan(&ivec(&[2, 1, 1])).unwrap();
        assert!(is_complete(&f));
        let f = weighted_projective_fan(&ivec(&[1, 2, 3])).unwrap();
        assert!(is_complete(&f));
        assert!(weighted_projective_fan(&ivec(&[2, 4])).is_err());
        assert!(weighted_projective_fan(&ivec(&[1, 0])).is_err());
        assert!(weighted_projective_fan(&ivec(&[1])).is_err());
    }

    #[test]
    fn bundles() {
        let b = build_wps_bundle(&ivec(&[1, 1]), &ivec(&[0])).unwrap();
        assert_eq!(b.fan.rays().len(), 4);
        assert_eq!(b.fan.max_cones().len(), 4);

        let b = build_wps_bundle(&ivec(&[1, 1, 2]), &ivec(&[0, 0])).unwrap();
        let expected = [
            ivec(&[1, 0, 0]),
            ivec(&[0, 1, 0]),
            ivec(&[-1, -2, 0]),
            ivec(&[0, 0, 1]),
            ivec(&[0, 0, -1]),
        ];
        assert_eq!(b.fan.rays(), &expected);
        assert_eq!(b.fan.max_cones().len(), 6);

        let b = build_wps_bundle(&ivec(&[1, 1]), &ivec(&[1])).unwrap();
        assert_eq!(
            b.fan.rays(),
            &[ivec(&[1, 0]), ivec(&[-1, 0]), ivec(&[0, 1]), ivec(&[1, -1])]
        );
        let d = class_group(&b.fan).unwrap();
        assert_eq!(d.class_group().structure(), (2, vec![]));
        assert!(build_wps_bundle(&ivec(&[1, 1]), &ivec(&[0, 0])).is_err());
    }

    #[test]
    fn hypotheses_for_f1_and_double_cover() {
        let checks = check_construction_hypotheses(&FiberSpaceSpec::new(hirzebruch_projection(1)));
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        let cover = make_morphism(p1(), p1(), IntMatrix::from_i64(&[&[2]])).unwrap();
        let checks = check_construction_hypotheses(&FiberSpaceSpec::new(cover));
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.pass && !c.informational)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failed, vec![CONNECTED_FIBERS]);
    }

    #[test]
    fn ledgers() {
        let l = blowup_class_ledger(&FiberSpaceSpec::new(hirzebruch_projection(1))).unwrap();
        assert_eq!(l.cl_tilde.structure(), (3, vec![]));
        assert_eq!(l.cl_fiber_tilde.structure(), (2, vec![]));
        assert!(l.restriction_surjective && l.vertical_match && l.exceptional_restricts);

        let l = blowup_class_ledger(&FiberSpaceSpec::new(hirzebruch_projection(0))).unwrap();
        assert_eq!(l.cl_tilde.structure(), (3, vec![]));
        assert!(l.restriction_surjective);

        let cover = make_morphism(p1(), p1(), IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(matches!(
            blowup_class_ledger(&FiberSpaceSpec::new(cover)),
            Err(BlowupError::PrerequisiteFailed { .. })
        ));
    }

    #[test]
    fn certificates() {
        let b = build_wps_bundle(&ivec(&[1, 1, 2]), &ivec(&[1, 0])).unwrap();
        let spec = FiberSpaceSpec::new(b.morphism);
        let cert = certify_nonfg(&spec, "cited result");
        assert!(cert.valid, "{:?}", cert.checks);
        assert!(!certify_nonfg(&spec, "  ").valid);

        let torsion = FiberSpaceSpec::new(product_with_p1(&torsion_surface()));
        let cert = certify_nonfg(&torsion, "cited result");
        assert!(!cert.valid);
        assert!(cert
            .checks
            .iter()
            .any(|c| c.name == crate::coxfiber::VERTICAL_TORSION_FREE && !c.pass));
    }
}
