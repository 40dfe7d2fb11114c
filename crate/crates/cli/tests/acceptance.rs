//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use coxfiber_core::blowup::{
    blowup_class_ledger, build_wps_bundle, certify_nonfg, FiberSpaceSpec, WpsBundle,
};
use coxfiber_core::coxfiber::{
    fiber_space_data, hilbert_dimension_quotient, verify_theorem, CoxFiberError, CONNECTED_FIBERS,
    VERTICAL_TORSION_FREE,
};
use coxfiber_core::divclass::{
    choose_divisor_subgroup_k, class_group, prim1_check, restriction_surjective,
    vertical_class_group, vertical_principal_lattice_check,
};
use coxfiber_core::fan::examples::{
    hirzebruch, hirzebruch_projection, identity, p1, p112, p1_times_torus, product_with_p1,
    torsion_surface,
};
use coxfiber_core::fan::{make_morphism, ToricMorphism};
use coxfiber_core::intlin::{ivec, kernel_basis, smith_normal_form, IntMatrix, Lattice};
use coxfiber_core::io::morphism_to_json_inline;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_coxfiber")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_map(dir: &Path, name: &str, m: &ToricMorphism) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(
        &path,
        serde_json::to_string(&morphism_to_json_inline(m)).unwrap(),
    )
    .unwrap();
    path
}

fn bundles() -> Vec<(Vec<i64>, WpsBundle)> {
    [[0, 0], [1, 0], [1, 1]]
        .into_iter()
        .map(|v| {
            (
                v.to_vec(),
                build_wps_bundle(&ivec(&[1, 1, 2]), &ivec(&v)).unwrap(),
            )
        })
        .collect()
}

fn p1p1() -> ToricMorphism {
    make_morphism(hirzebruch(0), p1(), IntMatrix::from_i64(&[&[1, 0]])).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn hirzebruch_family(dir: &Path) -> Verdict {
    let mut slowest = Duration::ZERO;
    for a in 0..4 {
        let (report, elapsed) = timed(|| verify_theorem(&hirzebruch_projection(a), 10));
        let report = report.map_err(|e| format!("F{a}: {e}"))?;
        slowest = slowest.max(elapsed);
        ensure(elapsed < Duration::from_secs(1), || {
            format!("F{a} took {elapsed:?}")
        })?;
        ensure(report.pass, || format!("F{a}: table mismatch"))?;
        let (map, inverse) = report.grading_iso.clone().ok_or("no grading isomorphism")?;
        ensure(
            map.get(0, 0).abs().is_one() && inverse.get(0, 0).abs().is_one(),
            || format!("F{a}: iso {map:?}"),
        )?;
        ensure(report.table.len() == 21, || {
            format!("F{a}: {} degrees", report.table.len())
        })?;
        for row in &report.table {
            let n = i64::try_from(&row.degree[0]).unwrap();
            let expected = if n < 0 { 0 } else { n as u64 + 1 };
            ensure(
                row.dim_quotient == Some(expected) && row.dim_fiber == Some(expected),
                || {
                    format!(
                        "F{a} degree {n}: {:?} / {:?}, expected {expected}",
                        row.dim_quotient, row.dim_fiber
                    )
                },
            )?;
        }
    }
    let path = write_map(dir, "f1.json", &hirzebruch_projection(1));
    let out = run(&[
        "verify-theorem",
        "--map",
        path.to_str().unwrap(),
        "--box",
        "10",
        "--json",
    ]);
    ensure(out.status.code() == Some(0), || {
        format!("cli exit {:?}", out.status.code())
    })?;
    let json: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(json["table"].as_array().map(Vec::len) == Some(21), || {
        "cli table size".into()
    })?;
    Ok(format!(
        "F0..F3, box 10, dims n+1 on both sides, slowest {slowest:?}"
    ))
}

/// Number of solutions of a + b + 2c = n in nonnegative integers.
fn count_112(n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    (0..=n / 2).map(|c| (n - 2 * c + 1) as u64).sum()
}

fn weighted_bundles() -> Verdict {
    let mut slowest = Duration::ZERO;
    for (v, b) in bundles() {
        let (report, elapsed) = timed(|| verify_theorem(&b.morphism, 8));
        let report = report.map_err(|e| format!("v={v:?}: {e}"))?;
        slowest = slowest.max(elapsed);
        ensure(elapsed < Duration::from_secs(5), || {
            format!("v={v:?} took {elapsed:?}")
        })?;
        ensure(report.pass, || format!("v={v:?}: counts disagree"))?;
        for row in &report.table {
            let n = i64::try_from(&row.degree[0]).unwrap();
            ensure(row.dim_fiber == Some(count_112(n)), || {
                format!("v={v:?} n={n}: {:?}", row.dim_fiber)
            })?;
        }
    }
    Ok(format!(
        "P(1,1,2) bundles, v in {{(0,0),(1,0),(1,1)}}, box 8, slowest {slowest:?}"
    ))
}

fn degenerate_identity() -> Verdict {
    let m = identity(&p112());
    let report = verify_theorem(&m, 5).map_err(|e| e.to_string())?;
    ensure(report.pass, || "table mismatch".into())?;
    let d = class_group(m.source()).unwrap();
    let v = vertical_class_group(&d, &m).unwrap();
    let fs = fiber_space_data(&m, d, v).map_err(|e| e.to_string())?;
    ensure(fs.quotient.horizontal_rays.is_empty(), || {
        "identity has horizontal rays".into()
    })?;
    let degrees = fs.quotient.cl_eta().box_elements(5);
    for deg in &degrees {
        let expected = u64::from(deg.iter().all(Zero::is_zero));
        let got = hilbert_dimension_quotient(&fs.quotient, deg).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("degree {deg:?}: {got}"))?;
    }
    Ok(format!(
        "Cl(X_eta) = {}, Hilbert function is delta at 0",
        fs.quotient.cl_eta()
    ))
}

fn lattice_equality() -> Verdict {
    let mut maps: Vec<(String, ToricMorphism)> = (0..4)
        .map(|a| (format!("F{a}"), hirzebruch_projection(a)))
        .collect();
    maps.extend(
        bundles()
            .into_iter()
            .map(|(v, b)| (format!("bundle {v:?}"), b.morphism)),
    );
    maps.push(("identity".into(), identity(&p112())));
    for (name, m) in &maps {
        let check = vertical_principal_lattice_check(m);
        ensure(check.ok(), || {
            format!("{name}: witness {:?}", check.witness)
        })?;
    }
    let bad = make_morphism(p1_times_torus(), p1(), IntMatrix::from_i64(&[&[1, 0]])).unwrap();
    let check = vertical_principal_lattice_check(&bad);
    ensure(!check.ok(), || "P1 x torus passed".into())?;
    let witness = check.witness.ok_or("no witness for P1 x torus")?;
    let in_vertical = check.vertical_characters.contains(&witness);
    ensure(in_vertical != check.pulled_back.contains(&witness), || {
        "witness lies in both lattices".into()
    })?;
    Ok(format!(
        "{} morphisms pass; P1 x torus fails with witness {witness:?}",
        maps.len()
    ))
}

fn prim1_self_test(dir: &Path) -> Verdict {
    for (name, m) in [("P1xP1", p1p1()), ("F1", hirzebruch_projection(1))] {
        let d = class_group(m.source()).unwrap();
        let v = vertical_class_group(&d, &m).unwrap();
        let r = restriction_surjective(&d, &m).unwrap();
        for seed in 0..10 {
            let k = choose_divisor_subgroup_k(&d, &m, &v, seed)
                .map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let report = prim1_check(&d, &r, &v, &k).map_err(|e| e.to_string())?;
            ensure(report.matches(), || {
                format!(
                    "{name} seed {seed}: {} vs {}",
                    report.quotient, report.cl_pi
                )
            })?;
        }
    }
    let path = write_map(dir, "p1p1.json", &p1p1());
    let out = run(&[
        "prim1-check",
        "--map",
        path.to_str().unwrap(),
        "--seed",
        "7",
    ]);
    ensure(out.status.code() == Some(0), || {
        format!("cli exit {:?}", out.status.code())
    })?;
    Ok("P1xP1 and F1, seeds 0..9, quotient matches Cl_pi".into())
}

fn hypothesis_rejection(dir: &Path) -> Verdict {
    let cover = make_morphism(p1(), p1(), IntMatrix::from_i64(&[&[2]])).unwrap();
    let torsion = product_with_p1(&torsion_surface());
    for (name, m, hypothesis) in [
        ("x2 cover", cover, CONNECTED_FIBERS),
        ("torsion", torsion, VERTICAL_TORSION_FREE),
    ] {
        match verify_theorem(&m, 2) {
            Err(CoxFiberError::HypothesisFailed { report }) => {
                let failed = report.failed_hypotheses();
                ensure(failed == vec![hypothesis.to_string()], || {
                    format!("{name}: failed {failed:?}")
                })?;
            }
            other => return Err(format!("{name}: expected rejection, got {other:?}")),
        }
        let path = write_map(dir, &format!("{}.json", name.replace(' ', "_")), &m);
        let out = run(&[
            "verify-theorem",
            "--map",
            path.to_str().unwrap(),
            "--box",
            "2",
        ]);
        let stdout = String::from_utf8_lossy(&out.stdout);
        ensure(out.status.code() == Some(1), || {
            format!("{name}: exit {:?}", out.status.code())
        })?;
        ensure(stdout.contains(&format!("{hypothesis}: FAIL")), || {
            format!("{name}: output {stdout}")
        })?;
    }
    Ok(
        "x2 cover -> connected fibers, Y x P1 with Cl(Y) = Z + Z/3 -> vertical torsion; exit 1"
            .into(),
    )
}

fn blowup_ledger() -> Verdict {
    let mut specs: Vec<(String, ToricMorphism)> = (0..4)
        .map(|a| (format!("F{a}"), hirzebruch_projection(a)))
        .collect();
    specs.extend(
        bundles()
            .into_iter()
            .map(|(v, b)| (format!("bundle {v:?}"), b.morphism)),
    );
    for (name, m) in &specs {
        let ledger = blowup_class_ledger(&FiberSpaceSpec::new(m.clone()))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(ledger.restriction_surjective, || {
            format!("{name}: restriction not surjective")
        })?;
        ensure(ledger.vertical_match, || {
            format!("{name}: {} vs {}", ledger.cl_pi_tilde, ledger.cl_pi)
        })?;
        ensure(
            ledger.cl_pi_tilde.structure() == ledger.cl_pi.structure(),
            || format!("{name}: normal forms"),
        )?;
        ensure(ledger.exceptional_restricts, || {
            format!("{name}: [E] does not restrict to [E0]")
        })?;
    }
    Ok(format!(
        "{} specs: surjective restriction, Cl_pi~ = Cl_pi",
        specs.len()
    ))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=6);
    let cols = rng.gen_range(1..=6);
    let data: Vec<Vec<BigInt>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(cols, &data).unwrap()
}

fn intlin_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    for trial in 0..1000 {
        let m = random_matrix(&mut rng);
        let snf = smith_normal_form(&m);
        let s = snf.left.mul(&m).unwrap().mul(&snf.right).unwrap();
        ensure(s == snf.diagonal, || format!("trial {trial}: U M V != S"))?;
        ensure(snf.left.determinant().unwrap().abs().is_one(), || {
            format!("trial {trial}: U not unimodular")
        })?;
        ensure(snf.right.determinant().unwrap().abs().is_one(), || {
            format!("trial {trial}: V not unimodular")
        })?;
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                ensure(i == j || s.get(i, j).is_zero(), || {
                    format!("trial {trial}: off-diagonal entry")
                })?;
            }
        }
        let d = snf.diagonal_entries();
        for w in d.windows(2) {
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            ensure(divides && !w[0].is_negative(), || {
                format!("trial {trial}: chain {d:?}")
            })?;
        }
        let k = kernel_basis(&m);
        ensure(k.len() == m.cols() - m.rank(), || {
            format!("trial {trial}: kernel rank")
        })?;
        ensure(Lattice::span(m.cols(), &k).unwrap().is_saturated(), || {
            format!("trial {trial}: kernel not saturated")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("1000 matrices in {elapsed:?}"))
}

fn certificate_pipeline(dir: &Path) -> Verdict {
    let out_dir = dir.join("bundle");
    let out = run(&[
        "wps-bundle",
        "--weights",
        "1,1,2",
        "--v",
        "1,0",
        "-o",
        out_dir.to_str().unwrap(),
    ]);
    ensure(out.status.code() == Some(0), || {
        format!("wps-bundle exit {:?}", out.status.code())
    })?;
    let map = out_dir.join("morphism.json");
    let map = map.to_str().unwrap();
    let out = run(&[
        "certify-nonfg",
        "--map",
        map,
        "--cite",
        "cited non-finite-generation of the blown-up fiber",
        "--json",
    ]);
    ensure(out.status.code() == Some(0), || {
        format!("certify exit {:?}", out.status.code())
    })?;
    let json: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(json["valid"] == Value::Bool(true), || {
        "certificate not valid".into()
    })?;
    for key in ["spec", "checks", "external_input", "conclusion"] {
        ensure(json.get(key).is_some(), || format!("missing {key}"))?;
    }
    let out = run(&["certify-nonfg", "--map", map, "--cite", ""]);
    ensure(out.status.code() == Some(1), || {
        "empty citation accepted".into()
    })?;

    let spec = FiberSpaceSpec::new(
        build_wps_bundle(&ivec(&[1, 1, 2]), &ivec(&[1, 0]))
            .unwrap()
            .morphism,
    );
    let cert = certify_nonfg(&spec, "citation");
    ensure(cert.valid, || "library certificate not valid".into())?;
    let mut tampered = 0;
    for i in 0..cert.checks.len() {
        if cert.checks[i].informational {
            continue;
        }
        let mut t = cert.clone();
        t.checks[i].pass = false;
        t.revalidate();
        ensure(!t.valid, || {
            format!("tampering {} kept valid", cert.checks[i].name)
        })?;
        tampered += 1;
    }
    let torsion = certify_nonfg(
        &FiberSpaceSpec::new(product_with_p1(&torsion_surface())),
        "citation",
    );
    ensure(!torsion.valid, || "torsion spec certified".into())?;
    Ok(format!("valid with citation; each of {tampered} tampered checks and the torsion spec give valid=false"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        (
            "Hirzebruch family theorem oracle",
            Box::new(|| hirzebruch_family(dir.path())),
        ),
        ("weighted bundle theorem oracle", Box::new(weighted_bundles)),
        ("degenerate identity", Box::new(degenerate_identity)),
        (
            "vertical principal lattice equality",
            Box::new(lattice_equality),
        ),
        (
            "random subgroup self-test",
            Box::new(|| prim1_self_test(dir.path())),
        ),
        (
            "hypothesis rejection",
            Box::new(|| hypothesis_rejection(dir.path())),
        ),
        ("blow-up ledger", Box::new(blowup_ledger)),
        ("integer linear algebra suite", Box::new(intlin_suite)),
        (
            "certificate pipeline",
            Box::new(|| certificate_pipeline(dir.path())),
        ),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
