//! Range sweeps and the fixture regression run.
//!
//! Instances are numbered in mixed radix (weights major, types minor, `k_0`
//! and `types[0]` most significant), so row order never depends on the
//! thread schedule.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wachlab_core::reduction::InertiaCharacter;
use wachlab_core::{analyze, AnalyzeOptions, FamilySpec, FamilyType, Fixture};

use crate::render::{self, Row, RowsDocument};
use crate::{open_output, FixturesArgs, Format, Outcome, SweepArgs};

struct Grid {
    p: u64,
    f: usize,
    k_min: i64,
    span: u64,
    fixture: Option<Fixture>,
    fixed_types: Option<Vec<FamilyType>>,
}

impl Grid {
    fn type_count(&self) -> u128 {
        match (&self.fixture, &self.fixed_types) {
            (Some(_), _) | (None, Some(_)) => 1,
            (None, None) => 4u128.pow(self.f as u32),
        }
    }

    fn total(&self) -> Option<u128> {
        (self.span as u128).checked_pow(self.f as u32)?.checked_mul(self.type_count())
    }

    fn digits(mut i: u128, base: u128, len: usize) -> Vec<u128> {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = i % base;
            i /= base;
        }
        out
    }

    fn spec(&self, index: u128) -> FamilySpec {
        let tc = self.type_count();
        let weights: Vec<i64> =
            Self::digits(index / tc, self.span as u128, self.f).iter().map(|&d| self.k_min + d as i64).collect();
        match (&self.fixture, &self.fixed_types) {
            (Some(fx), _) => FamilySpec::fixture(self.p, *fx, weights[0], weights[1]),
            (None, Some(types)) => FamilySpec::general(self.p, types.clone(), weights),
            (None, None) => {
                let types = Self::digits(index % tc, 4, self.f).iter().map(|&d| FamilyType::ALL[d as usize]).collect();
                FamilySpec::general(self.p, types, weights)
            }
        }
    }
}

fn analyze_all(specs: &[FamilySpec], trunc: Option<usize>) -> anyhow::Result<Vec<Row>> {
    let opts = AnalyzeOptions { trunc };
    specs
        .par_iter()
        .map(|spec| {
            let report = analyze(spec, &opts).with_context(|| format!("p={} k={:?}", spec.p, spec.weights))?;
            Ok(Row::from_report(&report))
        })
        .collect()
}

pub fn run(
    args: &SweepArgs,
    format: Format,
    trunc: Option<usize>,
    output: &Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    if args.family.is_some() && args.f != 2 {
        bail!("-f must be 2 with --family");
    }
    if !args.types.is_empty() && args.types.len() != args.f {
        bail!("--types needs {} entries, got {}", args.f, args.types.len());
    }
    let grid = Grid {
        p: args.p,
        f: args.f,
        k_min: args.k_min,
        span: (args.k_max - args.k_min + 1).max(0) as u64,
        fixture: args.family,
        fixed_types: (!args.types.is_empty()).then(|| args.types.clone()),
    };
    let total = grid.total().context("the sweep range overflows; narrow --k-min/--k-max or -f")?;
    let indices: Vec<u128> = match args.sample {
        Some(n) if (n as u128) < total => {
            if n > args.cap {
                bail!("--sample {n} exceeds --cap {}", args.cap);
            }
            let total = usize::try_from(total).context("the sweep range is too large to sample from")?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut picked: Vec<u128> =
                rand::seq::index::sample(&mut rng, total, n as usize).into_iter().map(|i| i as u128).collect();
            picked.sort_unstable();
            picked
        }
        _ => {
            if total > args.cap as u128 {
                bail!("{total} instances exceed --cap {}; narrow the ranges or pass --sample", args.cap);
            }
            (0..total).collect()
        }
    };
    let specs: Vec<FamilySpec> = indices.iter().map(|&i| grid.spec(i)).collect();
    if let Some(spec) = specs.first() {
        // surface input errors once instead of per row
        spec.validate()?;
        if spec.fixture.is_none() && spec.f % 2 == 0 {
            bail!(wachlab_core::Error::UnsupportedShape(format!(
                "f = {} is even; sweep the fixtures with --family 25 or 28",
                spec.f
            )));
        }
    }
    let rows = analyze_all(&specs, trunc)?;
    let doc = RowsDocument::new("sweep", &rows);
    let mut out = open_output(output)?;
    render::rows(&mut out, &doc, format)?;
    out.flush()?;
    Ok(if rows.iter().all(|r| r.valid) { Outcome::Valid } else { Outcome::Inconsistent })
}

/// Expected orbit of a fixture from the closed formulas, relative to the
/// generator the report uses (`tau_1` for 25, `tau_0` for 28).
fn expected_orbit(p: u64, fx: Fixture, k0: i64, k1: i64) -> anyhow::Result<[u128; 2]> {
    let (a, b) = match fx {
        Fixture::V25 => (k1, k0),
        Fixture::V28 => (k0, k1),
    };
    let e = -(a as i128) - p as i128 * b as i128;
    let c = InertiaCharacter::new(p, 4, e)?;
    let twisted = c.pow((p as u128).pow(2))?;
    Ok([c.exp.min(twisted.exp), c.exp.max(twisted.exp)])
}

pub fn run_fixtures(
    args: &FixturesArgs,
    format: Format,
    trunc: Option<usize>,
    output: &Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let mut specs = Vec::new();
    for fx in [Fixture::V25, Fixture::V28] {
        for &p in &args.p {
            for k0 in 1..=args.k_max {
                for k1 in 1..=args.k_max {
                    let spec = FamilySpec::fixture(p, fx, k0, k1);
                    spec.validate()?;
                    specs.push(spec);
                }
            }
        }
    }
    let rows = analyze_all(&specs, trunc)?;
    let mut failures = Vec::new();
    for (spec, row) in specs.iter().zip(&rows) {
        let fx = spec.fixture.expect("fixture specs");
        let want = expected_orbit(spec.p, fx, spec.weights[0], spec.weights[1])?;
        if [row.exp1, row.exp2] != want {
            failures.push(format!(
                "fixture {} p={} k={:?}: got {{{}, {}}}, expected {{{}, {}}}",
                u16::from(fx),
                spec.p,
                spec.weights,
                row.exp1,
                row.exp2,
                want[0],
                want[1]
            ));
        }
    }
    let ok = failures.is_empty() && rows.iter().all(|r| r.valid);
    let mut doc = RowsDocument::new("fixtures", &rows);
    doc.regression_failures = Some(failures);
    let mut out = open_output(output)?;
    render::rows(&mut out, &doc, format)?;
    out.flush()?;
    Ok(if ok { Outcome::Valid } else { Outcome::Inconsistent })
}
