#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geofib::export::{sample_document, validate};
use geofib::fibration::fmt_complex;
use geofib::verify::{
    check_partition, check_preservation, classification_demo, classify_group, default_grid, golden_table, CaseVerdict,
};
use geofib::{canonicalize_z, CheckReport, Complex64, Fibration, GeoError, Model, SampleGrid, Space, SubgroupSpec};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "geofib",
    version,
    about = "Fiberwise homogeneous geodesic fibrations of E³ and H³"
)]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 20_240_917)]
    seed: u64,
    /// Residual tolerance for checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Obj,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    E3,
    H3,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::E3 => Space::E3,
            SpaceArg::H3 => Space::H3,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Half,
    Ball,
}

#[derive(Args)]
struct FibrationArgs {
    #[arg(long, value_enum)]
    space: SpaceArg,
    /// Euclidean parameter.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Hyperbolic parameter, written `a+bi`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// The hyperbolic fibration by vertical lines.
    #[arg(long = "inf")]
    infinity: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sample fibers and export them as polylines.
    Sample {
        #[command(flatten)]
        fibration: FibrationArgs,
        /// Half-width of the sampled region.
        #[arg(long = "box", default_value_t = 4.0)]
        half_width: f64,
        /// Fibers per grid side.
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, default_value_t = 32)]
        points: usize,
        #[arg(long, value_enum, default_value = "half")]
        model: ModelArg,
    },
    /// Run sampled checks on a fibration.
    Verify {
        #[command(flatten)]
        fibration: FibrationArgs,
        /// Comma-separated: partition, preservation.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Group for the preservation check; defaults to a group acting transitively on fibers.
        #[arg(long)]
        group: Option<String>,
        /// Family parameter of the group, if it has one.
        #[arg(long)]
        param: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Move a hyperbolic parameter into the fundamental domain.
    Canonicalize {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Replay the classification case analysis over a subgroup catalog.
    Classify {
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// Compare against the expected table and set the exit code.
        #[arg(long)]
        golden: bool,
        /// Classify a single catalog group.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        param: f64,
    },
}

enum Failure {
    Usage(String),
    Check,
    Runtime(String),
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        match e {
            GeoError::InvalidParameter(_)
            | GeoError::UnknownGroup(_)
            | GeoError::DegenerateParameter { .. }
            | GeoError::OutOfDomain { .. }
            | GeoError::SpaceMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `-i` or a bare real `a`.
fn parse_complex(s: &str) -> CliResult<Complex64> {
    let bad = || Failure::Usage(format!("cannot parse `{s}` as a complex number of the form a+bi"));
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => {
            if x.starts_with("++") || x.starts_with("+-") || x.starts_with("-+") || x.starts_with("--") {
                return Err(bad());
            }
            x.parse::<f64>().map_err(|_| bad())?
        }
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let z = Complex64::new(re, im);
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

fn build_fibration(a: &FibrationArgs) -> CliResult<Fibration> {
    match (a.space, a.t, &a.z, a.infinity) {
        (SpaceArg::E3, Some(t), None, false) => {
            if t < 0.0 {
                return Err(Failure::Usage(format!(
                    "t must be ≥ 0; F_{t} is isometric to F_{} by the mirror (x, y, z) ↦ (x, -y, z), use --t {}",
                    -t, -t
                )));
            }
            Ok(Fibration::euclidean(t)?)
        }
        (SpaceArg::H3, None, Some(z), false) => {
            let z = parse_complex(z)?;
            if z.im <= 0.0 {
                let hint = if z.im < 0.0 {
                    format!("; the conjugate {} describes the same family", fmt_complex(z.conj()))
                } else {
                    String::new()
                };
                return Err(Failure::Usage(format!(
                    "z must have Im z > 0, got {}{hint}",
                    fmt_complex(z)
                )));
            }
            Ok(Fibration::hyperbolic(z)?)
        }
        (SpaceArg::H3, None, None, true) => Ok(Fibration::hyperbolic_infinity()),
        (SpaceArg::E3, ..) => Err(Failure::Usage("--space e3 takes exactly --t".into())),
        (SpaceArg::H3, ..) => Err(Failure::Usage("--space h3 takes exactly one of --z or --inf".into())),
    }
}

/// A group acting transitively on the fibers of `f`.
fn transitive_group(f: &Fibration) -> CliResult<SubgroupSpec> {
    let g = match f {
        Fibration::EuclideanFt { t } if *t == 0.0 => SubgroupSpec::lookup(Space::E3, "T3", None),
        Fibration::EuclideanFt { t } => SubgroupSpec::lookup(Space::E3, "E2bar", Some(*t)),
        Fibration::HyperbolicFz { .. } => SubgroupSpec::lookup(Space::H3, "HypPar", None),
        Fibration::HyperbolicFInf => SubgroupSpec::lookup(Space::H3, "Sim", None),
    };
    Ok(g?)
}

struct Ctx {
    seed: u64,
    tol: f64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn json(&self) -> CliResult<bool> {
        match self.format {
            Some(Format::Obj) => Err(Failure::Usage("--format obj applies to `sample` only".into())),
            f => Ok(f == Some(Format::Json)),
        }
    }
}

fn cmd_sample(ctx: &Ctx, f: &Fibration, grid: SampleGrid, model: ModelArg) -> CliResult<()> {
    let model = match model {
        ModelArg::Half => Model::HalfSpace,
        ModelArg::Ball if f.space() == Space::H3 => Model::Ball,
        ModelArg::Ball => return Err(Failure::Usage("--model ball applies to H3 only".into())),
    };
    if grid.grid == 0 || grid.points_per_fiber < 2 || !(grid.half_width > 0.0) {
        return Err(Failure::Usage("need --grid ≥ 1, --points ≥ 2 and --box > 0".into()));
    }
    let doc = sample_document(f, &grid, model)?;
    let residual = validate(&doc)?;
    let text = match ctx.format.unwrap_or(Format::Json) {
        Format::Json => doc.to_json()? + "\n",
        Format::Obj => doc.to_obj(),
    };
    ctx.emit(&text)?;
    if ctx.out.is_some() {
        eprintln!(
            "{f}: {} fibers, re-validation residual {residual:.2e}",
            doc.fibers.len()
        );
    }
    Ok(())
}

fn cmd_verify(
    ctx: &Ctx,
    f: &Fibration,
    checks: Option<Vec<String>>,
    group: Option<String>,
    param: Option<f64>,
    samples: usize,
) -> CliResult<()> {
    let json = ctx.json()?;
    let checks = checks.unwrap_or_else(|| match group {
        Some(_) => vec!["preservation".into()],
        None => vec!["partition".into(), "preservation".into()],
    });
    let mut reports: Vec<CheckReport> = Vec::new();
    for name in &checks {
        match name.trim() {
            "partition" => reports.push(check_partition(f, samples, ctx.tol, ctx.seed)?),
            "preservation" => {
                let g = match &group {
                    Some(name) => {
                        let p = param.or(match f {
                            Fibration::EuclideanFt { t } => Some(*t),
                            _ => Some(1.0),
                        });
                        SubgroupSpec::lookup(f.space(), name, p)?
                    }
                    None => transitive_group(f)?,
                };
                reports.push(check_preservation(f, &g, &default_grid(), ctx.tol, ctx.seed)?.report);
            }
            other => {
                return Err(Failure::Usage(format!(
                    "unknown check `{other}` (expected partition or preservation)"
                )))
            }
        }
    }
    let all_passed = reports.iter().all(|r| r.passed);
    let text = if json {
        serde_json::to_string_pretty(&json!({ "fibration": f.to_string(), "passed": all_passed, "checks": reports }))
            .map_err(|e| Failure::Runtime(e.to_string()))?
            + "\n"
    } else {
        reports.iter().map(|r| format!("{r}\n")).collect()
    };
    ctx.emit(&text)?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_canonicalize(ctx: &Ctx, z: &str) -> CliResult<()> {
    let z = parse_complex(z)?;
    if z.im <= 0.0 {
        return Err(Failure::Usage(format!(
            "canonicalize needs Im z > 0, got {}",
            fmt_complex(z)
        )));
    }
    let c = canonicalize_z(z)?;
    let text = if ctx.json()? {
        let steps: Vec<&str> = c.steps.iter().map(|s| s.name()).collect();
        json!({ "input": [z.re, z.im], "canonical": [c.z.re, c.z.im], "steps": steps }).to_string() + "\n"
    } else {
        format!("{}, {}\n", fmt_complex(c.z), c.witness_label())
    };
    ctx.emit(&text)
}

fn cmd_classify(ctx: &Ctx, space: Space, golden: bool, group: Option<String>, param: f64) -> CliResult<()> {
    let json = ctx.json()?;
    let verdicts: Vec<CaseVerdict> = match &group {
        Some(name) => vec![classify_group(
            &SubgroupSpec::lookup(space, name, Some(param))?,
            ctx.tol,
            ctx.seed,
        )?],
        None if param == 1.0 => classification_demo(space, ctx.tol, ctx.seed)?,
        None => SubgroupSpec::catalog(space, param)?
            .iter()
            .map(|g| classify_group(g, ctx.tol, ctx.seed))
            .collect::<geofib::Result<_>>()?,
    };
    let table = golden_table(space, param);
    let rows: Vec<(&CaseVerdict, Option<bool>)> = verdicts
        .iter()
        .map(|v| {
            let ok = golden.then(|| {
                table
                    .iter()
                    .find(|(name, _)| *name == v.group_name)
                    .is_some_and(|(_, e)| e.matches(&v.outcome, 1e-4))
            });
            (v, ok)
        })
        .collect();
    let width = rows
        .iter()
        .map(|(v, _)| v.group_name.chars().count())
        .max()
        .unwrap_or(0);
    let text = if json {
        let list: Vec<_> = rows
            .iter()
            .map(|(v, ok)| {
                json!({
                    "group": v.group_name,
                    "outcome": v.outcome.to_string(),
                    "evidence": v.evidence_summary(),
                    "golden": ok,
                })
            })
            .collect();
        serde_json::to_string_pretty(&json!({ "space": space.to_string(), "rows": list }))
            .map_err(|e| Failure::Runtime(e.to_string()))?
            + "\n"
    } else {
        let mut s = String::new();
        for (v, ok) in &rows {
            let pad = width - v.group_name.chars().count();
            let mark = match ok {
                Some(true) => "ok   ",
                Some(false) => "DIFF ",
                None => "",
            };
            s += &format!(
                "{mark}{}{}  {}  [{}]\n",
                v.group_name,
                " ".repeat(pad),
                v.outcome,
                v.evidence_summary()
            );
        }
        s
    };
    ctx.emit(&text)?;
    if rows.iter().any(|(_, ok)| *ok == Some(false)) {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if !(cli.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let ctx = Ctx {
        seed: cli.seed,
        tol: cli.tol,
        out: cli.out,
        format: cli.format,
    };
    match cli.command {
        Command::Sample {
            fibration,
            half_width,
            grid,
            points,
            model,
        } => {
            let f = build_fibration(&fibration)?;
            let grid = SampleGrid {
                half_width,
                grid,
                points_per_fiber: points,
            };
            cmd_sample(&ctx, &f, grid, model)
        }
        Command::Verify {
            fibration,
            checks,
            group,
            param,
            samples,
        } => {
            let f = build_fibration(&fibration)?;
            cmd_verify(&ctx, &f, checks, group, param, samples)
        }
        Command::Canonicalize { z } => cmd_canonicalize(&ctx, &z),
        Command::Classify {
            space,
            golden,
            group,
            param,
        } => cmd_classify(&ctx, space.into(), golden, group, param),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
