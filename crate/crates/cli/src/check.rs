//! Cross-module consistency checks run on every fresh report and on cache
//! entries under `--verify-cache`. Each failure names the invariant.

use monodromy_core::certifier::{verify_certificate, DensityCertificate, Status};
use monodromy_core::coverrep::{braid_relations_hold, CurveRepReport};
use monodromy_core::exactla::HermitianForm;
use monodromy_core::invariants::{
    binom, curve_hodge_numbers, expected_group, signature_formula, InvariantsReport, Params,
};
use monodromy_core::pham::{cyclic_pl_data, PhamReport};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::{CliError, Command, Report, Result};

fn violated(name: &str) -> CliError {
    CliError::Invariant(name.to_string())
}

fn ensure(cond: bool, name: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(violated(name))
    }
}

fn decode<T: DeserializeOwned>(payload: &Value) -> Result<T> {
    Ok(serde_json::from_value(payload.clone())?)
}

pub fn verify_payload(command: &Command, payload: &Value) -> Result<()> {
    match *command {
        Command::Pham { n, r } => {
            let rep: PhamReport = decode(payload)?;
            ensure(rep.n == n && rep.r == r, "pham report parameters")?;
            ensure(
                rep.support_size == rep.entries.len() && rep.entries.len() as u128 == (r as u128 - 1).pow(n as u32 + 1),
                "support size (r−1)^(n+1)",
            )?;
            for e in &rep.entries {
                ensure(
                    e.mu.iter().all(|&a| a != 0 && a < r),
                    "support tuples have nonzero entries",
                )?;
                ensure(e.datum.is_consistent(), "self_pairing·c = eigenvalue − 1")?;
                let s = e.mu.iter().map(|&a| a as u64).sum::<u64>() % r as u64;
                ensure(e.datum.is_transvection() == (s == 0), "H(e,e) = 0 iff r | Σμ")?;
            }
            Ok(())
        }
        Command::CurveRep { m, r, i, wedge } => {
            let rep: CurveRepReport = decode(payload)?;
            ensure(
                (rep.m, rep.r, rep.i, rep.wedge) == (m, r, i, wedge),
                "curve-rep parameters",
            )?;
            ensure(braid_relations_hold(&rep.generators), "braid relations")?;
            let form = HermitianForm::new(rep.gram.clone())?;
            ensure(
                rep.generators.iter().all(|g| form.is_invariant_under(g)),
                "form invariance g^†Gg = G",
            )?;
            let hodge = curve_hodge_numbers(m, r, i)?;
            if wedge == 1 {
                ensure(
                    rep.calibrated_signature == hodge,
                    "calibrated signature equals eigen Hodge numbers",
                )?;
            } else {
                let p = Params::new(wedge, m, r, i);
                if p.validate().is_ok() {
                    let (pp, qq) = signature_formula(&p)?;
                    let (a, b) = (pp.max(qq) as usize, pp.min(qq) as usize);
                    ensure(rep.signature == (a, b), "wedge signature equals closed form")?;
                }
            }
            let datum = cyclic_pl_data(1, m, r, i)?;
            for mer in &rep.meridians {
                ensure(
                    mer.c == datum.c && mer.self_pairing == datum.self_pairing && mer.eigenvalue == datum.eigenvalue,
                    "meridian constants equal cyclic-cover constants at n = 1",
                )?;
            }
            Ok(())
        }
        Command::Invariants { n, m, r, i } => {
            let p = Params::new(n, m, r, i);
            let rep: InvariantsReport = decode(payload)?;
            ensure(rep.p + rep.q == binom(m as i64 - 2, n as i64), "p + q = C(m−2, n)")?;
            ensure((rep.p, rep.q) == signature_formula(&p)?, "closed-form signature")?;
            ensure(
                (rep.h10, rep.h01) == curve_hodge_numbers(m, r, i)?,
                "eigen Hodge numbers",
            )?;
            if n == 1 {
                ensure(
                    (rep.p as usize, rep.q as usize) == (rep.h10, rep.h01),
                    "n = 1 signature equals Hodge numbers",
                )?;
            }
            ensure(rep.expected_group == expected_group(&p), "expected group label")?;
            ensure(
                rep.hypothesis_ok == rep.expected_group.hypothesis_ok(),
                "hypothesis flag",
            )
        }
        Command::Certify { n, m, r, i } => {
            let p = Params::new(n, m, r, i);
            let cert: DensityCertificate = decode(payload)?;
            ensure(cert.params == p, "certificate parameters")?;
            ensure(cert.expected_group == expected_group(&p), "expected group label")?;
            ensure(
                cert.expected_group.hypothesis_ok() || cert.status == Status::HypothesisNotMet,
                "hypothesis failures are never certified",
            )?;
            if p.m * (p.i as usize) < 2 * p.r as usize {
                ensure(cert.status != Status::Verified, "mi < 2r is never VERIFIED")?;
            }
            verify_certificate(&cert).map_err(|e| CliError::Invariant(format!("witness replay: {e}")))
        }
        Command::Sweep { n, m_max } => {
            let reports: Vec<Report> = decode(&payload["reports"])?;
            ensure(payload["count"].as_u64() == Some(reports.len() as u64), "sweep count")?;
            let expected: Vec<Params> = monodromy_core::invariants::valid_params(n, m_max)
                .into_iter()
                .filter(|p| p.n == n)
                .collect();
            ensure(reports.len() == expected.len(), "one report per valid tuple")?;
            for (rep, p) in reports.iter().zip(&expected) {
                let cmd = Command::Certify {
                    n: p.n,
                    m: p.m,
                    r: p.r,
                    i: p.i,
                };
                ensure(rep.subcommand == "certify", "sweep entries are certificates")?;
                verify_payload(&cmd, &rep.payload)?;
            }
            Ok(())
        }
    }
}
