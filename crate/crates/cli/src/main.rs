//! `coxfiber`: class groups, fiber fans and Cox-ring checks for toric fiber
//! spaces given as JSON files.
//!
//! Exit codes: 0 when the check passes, 1 when a mathematical check fails,
//! 2 on input or usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coxfiber_core::blowup::{build_wps_bundle, certify_nonfg, BlowupError, FiberSpaceSpec};
use coxfiber_core::coxfiber::{class_string, verify_theorem, CoxFiberError, TheoremReport};
use coxfiber_core::divclass::{
    choose_divisor_subgroup_k, class_group, prim1_check, restriction_surjective,
    vertical_class_group, vertical_principal_lattice_check, DivClassError,
};
use coxfiber_core::fan::{is_complete, Fan, ToricMorphism};
use coxfiber_core::intlin::IntMatrix;
use coxfiber_core::io::{self, fan_to_json, morphism_to_json, IoError};
use num_bigint::BigInt;
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "coxfiber",
    version,
    about = "Exact computations on toric fiber spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan file.
    Validate { fan: PathBuf },
    /// Class group and ray degrees.
    Classgroup { fan: PathBuf },
    /// Fiber fan over the identity of the base torus.
    FiberFan {
        #[arg(long)]
        map: PathBuf,
    },
    /// Vertical rays, vertical classes and the generic-fiber class group.
    Vertical {
        #[arg(long)]
        map: PathBuf,
    },
    /// Check the generic-fiber Cox ring presentation on a box of degrees.
    VerifyTheorem {
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "box", default_value_t = 5)]
        radius: u32,
        #[arg(long)]
        json: bool,
    },
    /// Compare vertical characters with degree-zero principal divisors on the fiber.
    VerifyLattices {
        #[arg(long)]
        map: PathBuf,
    },
    /// Random-subgroup self-test of the vertical class group.
    Prim1Check {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, env = "COXFIBER_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Write a weighted projective bundle over P1 as fan and morphism files.
    WpsBundle {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        weights: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 0..=1, default_value = "")]
        v: Vec<String>,
        /// Output directory.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Non-finite-generation certificate for the blow-up along a general section.
    CertifyNonfg {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        cite: String,
        #[arg(long)]
        json: bool,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<DivClassError> for Failure {
    fn from(e: DivClassError) -> Self {
        Failure::check(e.to_string())
    }
}

impl From<CoxFiberError> for Failure {
    fn from(e: CoxFiberError) -> Self {
        Failure::check(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { fan } => validate(&fan),
        Command::Classgroup { fan } => classgroup(&fan),
        Command::FiberFan { map } => fiber_fan(&map),
        Command::Vertical { map } => vertical(&map),
        Command::VerifyTheorem { map, radius, json } => theorem(&map, radius, json),
        Command::VerifyLattices { map } => lattices(&map),
        Command::Prim1Check { map, seed } => prim1(&map, seed),
        Command::WpsBundle { weights, v, out } => wps_bundle(&weights, &v, &out),
        Command::CertifyNonfg { map, cite, json } => certify(&map, &cite, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn ints(v: &[BigInt]) -> String {
    class_string(v)
}

fn load_map(path: &Path) -> Result<ToricMorphism, Failure> {
    Ok(io::read_morphism(path)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn validate(path: &Path) -> Outcome {
    let fan = match io::read_fan(path) {
        Ok(f) => f,
        Err(IoError::Fan(e)) => return Err(Failure::check(format!("invalid fan: {e}"))),
        Err(e) => return Err(e.into()),
    };
    println!(
        "valid fan: rank {}, {} rays, {} maximal cones",
        fan.rank(),
        fan.rays().len(),
        fan.max_cones().len()
    );
    println!("complete: {}", yes_no(is_complete(&fan)));
    println!("rays span: {}", yes_no(fan.rays_span()));
    Ok(())
}

fn classgroup(path: &Path) -> Outcome {
    let fan = io::read_fan(path)?;
    let d = class_group(&fan)?;
    println!("Cl = {}", d.class_group());
    for (i, ray) in fan.rays().iter().enumerate() {
        println!("ray {i} {}: degree {}", ints(ray), ints(&d.ray_class(i)));
    }
    Ok(())
}

fn print_fan(fan: &Fan) {
    for (i, ray) in fan.rays().iter().enumerate() {
        println!("  ray {i}: {}", ints(ray));
    }
    for cone in fan.max_cones() {
        println!("  cone {:?}", cone.generators());
    }
}

fn fiber_fan(path: &Path) -> Outcome {
    let m = load_map(path)?;
    let ff = m.fiber_subfan();
    println!("N0 basis:");
    for b in &ff.kernel_basis {
        println!("  {}", ints(b));
    }
    println!("fiber fan (rank {}):", ff.fiber_fan.rank());
    print_fan(&ff.fiber_fan);
    println!(
        "ray correspondence (fiber -> source): {:?}",
        ff.ray_correspondence
    );
    println!("complete: {}", yes_no(is_complete(&ff.fiber_fan)));
    Ok(())
}

fn vertical(path: &Path) -> Outcome {
    let m = load_map(path)?;
    let d = class_group(m.source())?;
    let v = vertical_class_group(&d, &m)?;
    println!("vertical rays: {:?}", v.vertical_rays);
    println!("horizontal rays: {:?}", m.horizontal_rays());
    println!("Cl(X) = {}", d.class_group());
    println!("Cl_pi(X) = {}", v.cl_pi);
    println!("Cl(X_eta) = {}", v.cl_eta);
    println!(
        "vertical classes torsion free: {}",
        yes_no(v.torsion_free())
    );
    Ok(())
}

fn print_report(report: &TheoremReport) {
    for (name, status) in report.hypotheses.iter().chain(&report.diagnostics) {
        match &status.witness {
            Some(w) => println!("{name}: {} ({w})", pass_fail(status.pass)),
            None => println!("{name}: {}", pass_fail(status.pass)),
        }
    }
    if let Some((free, torsion)) = &report.cl_eta {
        let t: Vec<String> = torsion.iter().map(ToString::to_string).collect();
        println!("Cl(X_eta): free rank {free}, torsion [{}]", t.join(", "));
    }
    if let Some((map, _)) = &report.grading_iso {
        println!(
            "grading isomorphism Cl(X_eta) -> Cl(X0): {}",
            matrix_string(map)
        );
    }
    if !report.table.is_empty() {
        println!("degree  dim_quotient  dim_fiber  result");
    }
    let dim = |d: Option<u64>| d.map_or("inf".to_string(), |x| x.to_string());
    for row in &report.table {
        println!(
            "{}  {}  {}  {}",
            ints(&row.degree),
            dim(row.dim_quotient),
            dim(row.dim_fiber),
            pass_fail(row.pass)
        );
    }
}

fn matrix_string(m: &IntMatrix) -> String {
    let rows: Vec<String> = m.row_vectors().iter().map(|r| ints(r)).collect();
    format!("[{}]", rows.join(", "))
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn theorem(path: &Path, radius: u32, json: bool) -> Outcome {
    let m = load_map(path)?;
    let report = match verify_theorem(&m, radius) {
        Ok(r) => r,
        Err(CoxFiberError::HypothesisFailed { report }) => *report,
        Err(e) => return Err(e.into()),
    };
    if json {
        emit_json(&report.to_json());
    } else {
        print_report(&report);
    }
    let failed = report.failed_hypotheses();
    if !failed.is_empty() {
        return Err(Failure::check(format!(
            "hypotheses failed: {}",
            failed.join(", ")
        )));
    }
    if !report.pass {
        return Err(Failure::check("graded dimensions disagree"));
    }
    Ok(())
}

fn lattices(path: &Path) -> Outcome {
    let m = load_map(path)?;
    let check = vertical_principal_lattice_check(&m);
    println!(
        "vertical characters: {} generators",
        check.vertical_characters.rank()
    );
    println!(
        "degree-zero pullbacks: {} generators",
        check.pulled_back.rank()
    );
    println!("saturations equal: {}", yes_no(check.saturations_equal));
    println!("lattices equal: {}", yes_no(check.lattices_equal));
    match (&check.witness, check.ok()) {
        (_, true) => Ok(()),
        (Some(w), false) => Err(Failure::check(format!(
            "lattice check failed, witness {}",
            ints(w)
        ))),
        (None, false) => Err(Failure::check("lattice check failed")),
    }
}

fn prim1(path: &Path, seed: u64) -> Outcome {
    let m = load_map(path)?;
    let d = class_group(m.source())?;
    let v = vertical_class_group(&d, &m)?;
    let restriction = restriction_surjective(&d, &m)?;
    let k = match choose_divisor_subgroup_k(&d, &m, &v, seed) {
        Ok(k) => k,
        Err(DivClassError::SearchExhausted { attempts }) => {
            println!("skipped: no admissible divisor subgroup found after {attempts} attempts");
            return Err(Failure::check("prim1 self-test skipped"));
        }
        Err(e) => return Err(e.into()),
    };
    let report = prim1_check(&d, &restriction, &v, &k)?;
    println!("seed: {seed}");
    println!(
        "K0 rank: {}, K0_eta rank: {}",
        report.k0_rank, report.k0_eta_rank
    );
    println!("K0_eta / K0 = {}", report.quotient);
    println!("Cl_pi(X) = {}", report.cl_pi);
    println!("match: {}", pass_fail(report.matches()));
    if report.matches() {
        Ok(())
    } else {
        Err(Failure::check("invariant factors differ"))
    }
}

fn parse_list(values: &[String], what: &str) -> Result<Vec<BigInt>, Failure> {
    values
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::input(format!("{what}: {s:?} is not an integer")))
        })
        .collect()
}

fn wps_bundle(weights: &[String], v: &[String], out: &Path) -> Outcome {
    let weights = parse_list(weights, "weights")?;
    let v = parse_list(v, "v")?;
    let bundle = build_wps_bundle(&weights, &v).map_err(|e| match e {
        BlowupError::BadWeights(_) => Failure::input(e.to_string()),
        other => Failure::check(other.to_string()),
    })?;
    std::fs::create_dir_all(out).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    let write = |name: &str, value: &Value| -> Outcome {
        let path = out.join(name);
        let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
        std::fs::write(&path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    };
    write("fan.json", &fan_to_json(&bundle.fan))?;
    write("base.json", &fan_to_json(&bundle.base))?;
    write(
        "morphism.json",
        &morphism_to_json(
            &bundle.morphism,
            Value::from("fan.json"),
            Value::from("base.json"),
        ),
    )?;
    println!(
        "wrote {} ({} rays, {} maximal cones)",
        out.join("fan.json").display(),
        bundle.fan.rays().len(),
        bundle.fan.max_cones().len()
    );
    println!("wrote {}", out.join("base.json").display());
    println!("wrote {}", out.join("morphism.json").display());
    Ok(())
}

fn certify(path: &Path, cite: &str, json: bool) -> Outcome {
    let m = load_map(path)?;
    let cert = certify_nonfg(&FiberSpaceSpec::new(m), cite);
    if json {
        emit_json(&cert.to_json());
    } else {
        for c in &cert.checks {
            let tag = if c.informational { " [info]" } else { "" };
            match &c.witness {
                Some(w) => println!("{}: {}{tag} ({w})", c.name, pass_fail(c.pass)),
                None => println!("{}: {}{tag}", c.name, pass_fail(c.pass)),
            }
        }
        for a in &cert.assumptions {
            println!("assumption: {a}");
        }
        println!(
            "external input: {}",
            if cert.external_input.trim().is_empty() {
                "(none)"
            } else {
                &cert.external_input
            }
        );
        println!("valid: {}", yes_no(cert.valid));
        println!("conclusion: {}", cert.conclusion);
    }
    if cert.valid {
        Ok(())
    } else {
        Err(Failure::check("certificate is not valid"))
    }
}
