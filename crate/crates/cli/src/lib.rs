//! Command-line front end: problem parsing, run configuration, and
//! rendered output. `run` is the whole program, factored out of `main`
//! so the tests can drive it directly and compare bytes.

use std::fs;
use std::io::Write;
use std::time::Instant;

use absup::implicates::{extract, minimize, render_all, Implicate};
use absup::oracle::{oracle_entails, oracle_implicates, DEFAULT_UNIVERSE_BOUND};
use absup::saturation::{
    combine_pipeline, saturate, Mode, PFilter, SaturationConfig, Status, Trace,
};
use absup::Ctx;

pub const EXIT_OK: i32 = 0;
pub const EXIT_LIMIT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
enum RunMode {
    Sa,
    Sar,
    Pipeline,
}

#[derive(Debug)]
struct Options {
    file: Option<String>,
    mode: RunMode,
    filter: PFilter,
    oracle: bool,
    oracle_max_len: usize,
    universe_bound: usize,
    trace: Option<String>,
    max_clauses: usize,
    max_weight: u32,
    max_iterations: usize,
    prime: bool,
    verify: bool,
    timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        let defaults = SaturationConfig::default();
        Options {
            file: None,
            mode: RunMode::Pipeline,
            filter: PFilter::None,
            oracle: false,
            oracle_max_len: 4,
            universe_bound: DEFAULT_UNIVERSE_BOUND,
            trace: None,
            max_clauses: defaults.max_clauses,
            max_weight: defaults.max_weight,
            max_iterations: defaults.max_iterations,
            prime: true,
            verify: false,
            timing: false,
        }
    }
}

const USAGE: &str = "usage: absup --abduce <file> [options]
options:
  --mode sa|sar|pipeline   calculus mode (default pipeline)
  --filter none|positive|negative|maxlits=K
  --oracle                 brute-force reference instead of saturation
  --max-len N              oracle: maximal implicate length (default 4)
  --universe N             oracle: subterm universe bound (default 10)
  --trace <file>           write the derivation event log
  --max-clauses N          clause budget (default 100000)
  --max-weight N           per-clause weight cap (default 60)
  --max-iters N            given-clause iteration cap (default 200000)
  --prime / --no-prime     minimize implicates (default on)
  --verify                 cross-check the result against the oracle
  --timing                 append wall-clock time to the status line";

fn parse_args(args: &[String]) -> Result<Options, String> {
    let mut opts = Options::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let mut value = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{name} needs a value"))
        };
        match arg.as_str() {
            "--abduce" => opts.file = Some(value("--abduce")?),
            "--mode" => {
                opts.mode = match value("--mode")?.as_str() {
                    "sa" => RunMode::Sa,
                    "sar" => RunMode::Sar,
                    "pipeline" => RunMode::Pipeline,
                    other => return Err(format!("unknown mode `{other}`")),
                }
            }
            "--filter" => {
                let v = value("--filter")?;
                opts.filter = match v.as_str() {
                    "none" => PFilter::None,
                    "positive" => PFilter::PositiveOnly,
                    "negative" => PFilter::NegativeOnly,
                    other => match other.strip_prefix("maxlits=") {
                        Some(k) => PFilter::MaxLiterals(
                            k.parse().map_err(|_| format!("bad filter `{other}`"))?,
                        ),
                        None => return Err(format!("unknown filter `{other}`")),
                    },
                }
            }
            "--oracle" => opts.oracle = true,
            "--max-len" => {
                opts.oracle_max_len = value("--max-len")?
                    .parse()
                    .map_err(|_| "bad --max-len".to_string())?
            }
            "--universe" => {
                opts.universe_bound = value("--universe")?
                    .parse()
                    .map_err(|_| "bad --universe".to_string())?
            }
            "--trace" => opts.trace = Some(value("--trace")?),
            "--max-clauses" => {
                opts.max_clauses = value("--max-clauses")?
                    .parse()
                    .map_err(|_| "bad --max-clauses".to_string())?
            }
            "--max-weight" => {
                opts.max_weight = value("--max-weight")?
                    .parse()
                    .map_err(|_| "bad --max-weight".to_string())?
            }
            "--max-iters" => {
                opts.max_iterations = value("--max-iters")?
                    .parse()
                    .map_err(|_| "bad --max-iters".to_string())?
            }
            "--prime" => opts.prime = true,
            "--no-prime" => opts.prime = false,
            "--verify" => opts.verify = true,
            "--timing" => opts.timing = true,
            "--help" | "-h" => return Err(USAGE.to_string()),
            other => return Err(format!("unknown argument `{other}`\n{USAGE}")),
        }
    }
    if opts.file.is_none() {
        return Err(format!("no input file\n{USAGE}"));
    }
    Ok(opts)
}

fn saturation_config(opts: &Options, mode: Mode) -> SaturationConfig {
    SaturationConfig {
        mode,
        filter: opts.filter.clone(),
        max_clauses: opts.max_clauses,
        max_weight: opts.max_weight,
        max_iterations: opts.max_iterations,
    }
}

/// Runs the oracle cross-check: every clause produced must be an
/// implicate of the input, and the produced set together must entail
/// every prime implicate the oracle finds. (Element-wise coverage only
/// holds for unfiltered full-calculus runs; the filtered pipeline is
/// complete as a set.)
fn verify_against_oracle(
    ctx: &mut Ctx,
    inputs: &[absup::terms::Clause],
    produced: &[Implicate],
    opts: &Options,
) -> Result<bool, String> {
    let reference = oracle_implicates(ctx, inputs, opts.oracle_max_len, opts.universe_bound)
        .map_err(|e| e.to_string())?;
    let produced_clauses: Vec<absup::terms::Clause> =
        produced.iter().map(|p| p.clause.clone()).collect();
    for p in &produced_clauses {
        if !oracle_entails(ctx, inputs, p, opts.universe_bound).map_err(|e| e.to_string())? {
            return Ok(false);
        }
    }
    for r in &reference {
        if !oracle_entails(ctx, &produced_clauses, &r.clause, opts.universe_bound)
            .map_err(|e| e.to_string())?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let opts = match parse_args(args) {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(out, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    let start = Instant::now();
    let text = match fs::read_to_string(opts.file.as_ref().unwrap()) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(out, "error: cannot read input: {e}");
            return EXIT_INPUT;
        }
    };
    let pf = match absup::problem::parse(&text) {
        Ok(pf) => pf,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let problem = match pf.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut ctx = problem.ctx;
    let inputs = problem.clauses;

    let mut trace_file = match opts.trace.as_ref() {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Some(f),
            Err(e) => {
                let _ = writeln!(out, "error: cannot open trace file: {e}");
                return EXIT_INPUT;
            }
        },
        None => None,
    };
    let mut trace = match trace_file.as_mut() {
        Some(f) => Trace::to(f),
        None => Trace::none(),
    };

    if opts.oracle {
        if inputs.iter().any(|c| !c.is_ground(&ctx.bank)) {
            let _ = writeln!(out, "error: --oracle requires ground input clauses");
            return EXIT_INPUT;
        }
        let primes =
            match oracle_implicates(&mut ctx, &inputs, opts.oracle_max_len, opts.universe_bound) {
                Ok(p) => p,
                Err(e) => {
                    let _ = writeln!(out, "error: {e}");
                    return EXIT_INPUT;
                }
            };
        for line in render_all(&ctx, &primes) {
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "# status: oracle, implicates={}", primes.len());
        return EXIT_OK;
    }

    let (implicates, status, clause_count) = match opts.mode {
        RunMode::Pipeline => {
            let cfg = saturation_config(&opts, Mode::Sa);
            let r = combine_pipeline(&mut ctx, &inputs, &cfg, &mut trace);
            (r.implicates, r.status, r.generated)
        }
        RunMode::Sa | RunMode::Sar => {
            let mode = if opts.mode == RunMode::Sa {
                Mode::Sa
            } else {
                Mode::Sar
            };
            let cfg = saturation_config(&opts, mode);
            let r = saturate(&mut ctx, &inputs, &cfg, &mut trace);
            let impls = extract(&mut ctx, &r.clauses);
            (impls, r.status, r.generated)
        }
    };
    let implicates = if opts.prime {
        minimize(&mut ctx, &implicates)
    } else {
        implicates
    };
    for line in render_all(&ctx, &implicates) {
        let _ = writeln!(out, "{line}");
    }

    let mut verify_note = String::new();
    if opts.verify {
        match verify_against_oracle(&mut ctx, &inputs, &implicates, &opts) {
            Ok(true) => verify_note = "\n# verify: ok".to_string(),
            Ok(false) => verify_note = "\n# verify: mismatch".to_string(),
            Err(e) => verify_note = format!("\n# verify: skipped ({e})"),
        }
    }

    let status_word = match status {
        Status::Saturated => "saturated",
        Status::LimitReached => "limit-reached",
    };
    let timing = if opts.timing {
        format!(", time={:.2}s", start.elapsed().as_secs_f64())
    } else {
        String::new()
    };
    let _ = writeln!(
        out,
        "# status: {status_word}, clauses={clause_count}{timing}{verify_note}"
    );
    match status {
        Status::Saturated => EXIT_OK,
        Status::LimitReached => EXIT_LIMIT,
    }
}
