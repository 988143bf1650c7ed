//! Acceptance suite: one PASS/FAIL line per criterion, each against its own
//! exact check and runtime limit.

use std::process::Command as Proc;
use std::time::{Duration, Instant};

use monodromy_cli::{run, Command, RunConfig};
use monodromy_core::certifier::{certify, verify_certificate, wedge_dichotomy_check, Budgets, Status};
use monodromy_core::coverrep::{build_curve_rep, meridian_matrix};
use monodromy_core::exactla::rank;
use monodromy_core::invariants::{
    binom, cover_comparison, curve_hodge_numbers, expected_group, signature_formula, valid_params, GroupLabel, Params,
};
use monodromy_core::pham::{character_support, cyclic_pl_data, pl_coefficient, working_conductor};
use monodromy_core::CycloNum;

type Outcome = Result<String, String>;

fn zeta(r: u32, k: i64) -> CycloNum {
    let n = working_conductor(r);
    CycloNum::root_of_unity(n, k.rem_euclid(r as i64) * (n / r) as i64)
}

fn curve_cases(m_max: usize) -> Vec<(usize, u32, u32)> {
    let mut out = Vec::new();
    for m in 4..=m_max {
        for r in 2..=m as u32 {
            if m % r as usize == 0 {
                for i in 1..r {
                    out.push((m, r, i));
                }
            }
        }
    }
    out
}

fn pham_identities() -> Outcome {
    let mut count = 0;
    for r in 2..=6u32 {
        for n in 0..=3usize {
            let support = character_support(n, r).map_err(|e| e.to_string())?.support;
            if support.len() != (r as usize - 1).pow(n as u32 + 1) {
                return Err(format!("|support| = {} for r={r} n={n}", support.len()));
            }
            for mu in support {
                let d = pl_coefficient(&mu).map_err(|e| e.to_string())?;
                let sum: i64 = mu.entries().iter().map(|&a| a as i64).sum();
                let rhs = &zeta(r, sum) - &CycloNum::one(working_conductor(r));
                if &d.self_pairing * &d.c != rhs {
                    return Err(format!("identity fails at r={r} mu={:?}", mu.entries()));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} support tuples"))
}

fn cyclic_constants() -> Outcome {
    let mut count = 0;
    for n in 1..=3usize {
        for (m, r, i) in curve_cases(12) {
            let d = cyclic_pl_data(n, m, r, i).map_err(|e| e.to_string())?;
            let lambda = zeta(r, ((n + 1) as i64) * i as i64);
            if d.eigenvalue != lambda || &d.self_pairing * &d.c != &lambda - &CycloNum::one(working_conductor(r)) {
                return Err(format!("identity fails at (n,m,r,i)=({n},{m},{r},{i})"));
            }
            if d.self_pairing.is_zero() != ((n as u32 + 1) * i).is_multiple_of(r) {
                return Err(format!("vanishing criterion fails at ({n},{m},{r},{i})"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} tuples"))
}

fn curve_signatures() -> Outcome {
    let cases = curve_cases(10);
    for &(m, r, i) in &cases {
        let rep = build_curve_rep(m, r, i).map_err(|e| e.to_string())?;
        let sig = rep.signature(128).map_err(|e| e.to_string())?;
        let (p, q) = signature_formula(&Params::new(1, m, r, i)).map_err(|e| e.to_string())?;
        if !sig.matches_unordered(p as usize, q as usize) {
            return Err(format!(
                "({m},{r},{i}): form {:?} vs formula ({p},{q})",
                sig.unordered()
            ));
        }
        let k = m * i as usize / r as usize;
        if curve_hodge_numbers(m, r, i).map_err(|e| e.to_string())? != (m - k - 1, k - 1) {
            return Err(format!("({m},{r},{i}): Hodge numbers"));
        }
    }
    Ok(format!("{} curve forms", cases.len()))
}

fn vandermonde() -> Outcome {
    let tuples = valid_params(4, 12);
    for p in &tuples {
        let (a, b) = signature_formula(p).map_err(|e| e.to_string())?;
        if a + b != binom(p.m as i64 - 2, p.n as i64) {
            return Err(format!("{p}"));
        }
    }
    Ok(format!("{} tuples", tuples.len()))
}

fn comparison() -> Outcome {
    let mut count = 0;
    for p in valid_params(4, 12) {
        if p.i != 1 {
            continue;
        }
        for i0 in (1..p.r).filter(|d| p.r % d == 0) {
            if !cover_comparison(&p, i0).map_err(|e| e.to_string())? {
                return Err(format!("{p} with i0 = {i0}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} divisor pairs"))
}

fn meridians() -> Outcome {
    let mut count = 0;
    for (m, r, i) in curve_cases(10) {
        let rep = build_curve_rep(m, r, i).map_err(|e| e.to_string())?;
        let datum = cyclic_pl_data(1, m, r, i).map_err(|e| e.to_string())?;
        let n = rep.conductor();
        let lambda = CycloNum::root_of_unity(n, 2 * i as i64 * (n / r) as i64);
        for j in 0..m - 1 {
            let mr = meridian_matrix(&rep, j).map_err(|e| e.to_string())?;
            let delta = mr.matrix.minus_identity();
            let image = delta.mul_vec(&mr.cycle);
            let shifted = mr.cycle.scale(&(&lambda - &CycloNum::one(n)));
            let transvection = rep.form.pair(&mr.cycle, &mr.cycle).is_zero();
            let ok = rank(&delta) == 1
                && image == shifted
                && mr.datum == datum
                && mr.verify(&rep.form)
                && transvection == lambda.is_one()
                && (!transvection || (&delta * &delta).is_zero());
            if !ok {
                return Err(format!("({m},{r},{i}) meridian {}", j + 1));
            }
            count += 1;
        }
    }
    Ok(format!("{count} meridians"))
}

fn full_certification() -> Outcome {
    let cases = [
        (Params::new(1, 4, 2, 1), "Sp(2)"),
        (Params::new(1, 6, 2, 1), "Sp(4)"),
        (Params::new(1, 6, 3, 1), "SU(3,1)"),
        (Params::new(1, 8, 4, 1), "SU(5,1)"),
        (Params::new(1, 8, 4, 2), "Sp(6)"),
    ];
    for (p, label) in cases {
        let cert = certify(&p, &Budgets::default()).map_err(|e| e.to_string())?;
        if cert.status != Status::Verified || cert.verdict != label {
            return Err(format!("{p}: {:?} {} ({:?})", cert.status, cert.verdict, cert.reasons));
        }
        verify_certificate(&cert).map_err(|e| format!("{p}: replay {e}"))?;
    }
    Ok("5 certificates VERIFIED and replayed".into())
}

fn dichotomy() -> Outcome {
    let mut count = 0;
    for w in 4..=8 {
        for n in 2..=w - 2 {
            if !wedge_dichotomy_check(w, n).map_err(|e| e.to_string())? {
                return Err(format!("w_dim={w} n={n}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} (w_dim, n) pairs"))
}

fn negative_control() -> Outcome {
    let p = Params::new(1, 4, 4, 1);
    if expected_group(&p).hypothesis_ok() {
        return Err("expected group claims the hypothesis holds".into());
    }
    let cert = certify(&p, &Budgets::default()).map_err(|e| e.to_string())?;
    if cert.status != Status::HypothesisNotMet {
        return Err(format!("status {:?}", cert.status));
    }
    let out = Proc::new(env!("CARGO_BIN_EXE_monodromy"))
        .args(["certify", "--n", "1", "--m", "4", "--r", "4", "--i", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    if out.status.code() != Some(2) || text.contains("\"VERIFIED\"") || !text.contains("HYPOTHESIS-NOT-MET") {
        return Err(format!("cli exit {:?}", out.status.code()));
    }
    match expected_group(&p) {
        GroupLabel::HypothesisNotMet(why) => Ok(format!("HYPOTHESIS_NOT_MET ({why}), cli exit 2")),
        _ => unreachable!(),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sweep = Command::Sweep { n: 1, m_max: 8 };
    let plain = RunConfig::new(sweep);
    let cached = RunConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        verify_cache: true,
        ..RunConfig::new(sweep)
    };
    let runs = [&plain, &plain, &cached, &cached]
        .iter()
        .map(|c| run(c).map(|r| r.to_json()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if runs.iter().any(|r| *r != runs[0]) {
        return Err("sweep JSON differs between runs".into());
    }
    let bin = |out: &std::path::Path| {
        Proc::new(env!("CARGO_BIN_EXE_monodromy"))
            .args(["sweep", "--n", "1", "--m-max", "8", "--out"])
            .arg(out)
            .status()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    bin(&a)?;
    bin(&b)?;
    let (a, b) = (
        std::fs::read(a).map_err(|e| e.to_string())?,
        std::fs::read(b).map_err(|e| e.to_string())?,
    );
    if a != b || a != runs[0].as_bytes() {
        return Err("binary sweep output differs".into());
    }
    Ok(format!("{} bytes identical across 6 runs", a.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("Pham identity suite", Duration::from_secs(30), pham_identities),
        ("cyclic-cover constant suite", Duration::from_secs(30), cyclic_constants),
        (
            "curve signature reproduction",
            Duration::from_secs(300),
            curve_signatures,
        ),
        ("Vandermonde dimension identity", Duration::from_secs(5), vandermonde),
        ("cover-comparison identity", Duration::from_secs(5), comparison),
        (
            "meridian Picard-Lefschetz consistency",
            Duration::from_secs(60),
            meridians,
        ),
        (
            "full-mode density certification",
            Duration::from_secs(600),
            full_certification,
        ),
        ("wedge dichotomy", Duration::from_secs(120), dichotomy),
        ("negative control (1,4,4,1)", Duration::from_secs(10), negative_control),
        ("sweep determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the time limit")),
            Err(e) => ("FAIL", e),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "{tag} {:>2} {name}: {detail} [{:.2}s / {}s]",
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
