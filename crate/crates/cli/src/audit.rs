use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use serde::Serialize;
use wachlab_core::families::SCHEMA_VERSION;
use wachlab_core::reduction::{is_irreducible_closed_form, reducible_residues};

use crate::render::json;
use crate::{open_output, AuditArgs, Format, Outcome};

#[derive(Serialize)]
struct Audit {
    schema_version: u32,
    command: &'static str,
    p: u64,
    f: u32,
    residues: u64,
    agreements: u64,
    /// Residues where the closed form and the enumeration disagree.
    counterexamples: Vec<u128>,
}

pub fn run(args: &AuditArgs, format: Format, output: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    if !wachlab_core::families::is_prime(args.p) {
        anyhow::bail!(wachlab_core::Error::InvalidSpec(format!("-p {} is not prime", args.p)));
    }
    if args.f == 0 {
        anyhow::bail!(wachlab_core::Error::InvalidSpec("-f must be positive".into()));
    }
    let size = (args.p as u128).checked_pow(2 * args.f).unwrap_or(u128::MAX);
    if size > args.cap {
        return Err(anyhow::Error::new(wachlab_core::Error::TooLarge { size, cap: args.cap })
            .context("choose a smaller p or f, or raise --cap (at most 10^7)"));
    }
    let hit = reducible_residues(args.p, args.f)
        .context("exhaustive search is limited to p^(2f) <= 10^7; choose a smaller p or f")?;
    let mut counterexamples = Vec::new();
    for (e, &reducible) in hit.iter().enumerate() {
        if is_irreducible_closed_form(e as u128, args.p, args.f)? == reducible {
            counterexamples.push(e as u128);
        }
    }
    let residues = hit.len() as u64;
    let audit = Audit {
        schema_version: SCHEMA_VERSION,
        command: "oracle-audit",
        p: args.p,
        f: args.f,
        residues,
        agreements: residues - counterexamples.len() as u64,
        counterexamples,
    };
    let mut out = open_output(output)?;
    match format {
        Format::Json => json(&mut out, &audit)?,
        Format::Csv => {
            writeln!(out, "p,f,residues,agreements,counterexamples")?;
            let ce: Vec<String> = audit.counterexamples.iter().map(ToString::to_string).collect();
            writeln!(out, "{},{},{},{},{}", audit.p, audit.f, audit.residues, audit.agreements, ce.join(";"))?;
        }
        Format::Text => {
            if audit.counterexamples.is_empty() {
                writeln!(
                    out,
                    "p={} f={}: closed form and oracle agree on all {} residues",
                    audit.p, audit.f, residues
                )?;
            } else {
                writeln!(
                    out,
                    "p={} f={}: {} of {} residues disagree",
                    audit.p,
                    audit.f,
                    audit.counterexamples.len(),
                    residues
                )?;
                for e in &audit.counterexamples {
                    writeln!(out, "  e = {e}")?;
                }
            }
        }
    }
    out.flush()?;
    Ok(if audit.counterexamples.is_empty() { Outcome::Valid } else { Outcome::Inconsistent })
}
