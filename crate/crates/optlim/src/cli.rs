//! Command-line front end: the `compute` pipeline, the verification suites
//! and the bundled fixtures.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{
    assign_variables, auto_open, check_assumptions, open_tangle, parse_pd, DiagramError, KnotDiagram, TangleGraph,
    Variables,
};
use crate::identities::{self, check_cancellation, CheckReport, SuiteReport};
use crate::numerics::{dist_mod_4pi2, reduce_mod, Cx, EPS_SOLVE, PI2};
use crate::potential::{build_v, build_w, PotentialFunction};
use crate::solver::{convert_w_to_z, convert_z_to_w, solve_both, SolutionSet, SolveOptions};
use crate::triangulation::{build_thurston, build_yokota, verify_cusp, verify_edge_relations, Triangulation};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

/// Tolerance of the consistency checks run by `compute`.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Bundled PD fixtures as `(name, file contents)`.
pub const FIXTURES: &[(&str, &str)] = &[
    ("3_1", include_str!("../fixtures/3_1.pd")),
    ("4_1", include_str!("../fixtures/4_1.pd")),
    ("5_2", include_str!("../fixtures/5_2.pd")),
    ("6_1", include_str!("../fixtures/6_1.pd")),
    ("6_2", include_str!("../fixtures/6_2.pd")),
    ("6_3", include_str!("../fixtures/6_3.pd")),
];

/// Contents of a bundled fixture.
pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Debug, Parser)]
#[command(name = "optlim", version, about = "Optimistic limits and complex volumes of knots from PD codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on a knot and report the complex volume.
    Compute(ComputeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// List the bundled fixtures.
    Fixtures,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    /// Name of a bundled fixture.
    #[arg(long, conflicts_with = "pd", required_unless_present = "pd")]
    pub knot: Option<String>,
    /// File holding a PD code.
    #[arg(long)]
    pub pd: Option<PathBuf>,
    /// Index of the side to open; the first admissible side by default.
    #[arg(long)]
    pub open_side: Option<usize>,
    /// Bounded region whose value is fixed to 1.
    #[arg(long)]
    pub unit_region: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub seeds: usize,
    #[arg(long, default_value_t = 1)]
    pub rng_seed: u64,
    /// Residual accepted for a solution of the hyperbolicity equations.
    #[arg(long, default_value_t = EPS_SOLVE)]
    pub tol: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub dump_potential: Option<PathBuf>,
    #[arg(long)]
    pub dump_triangulation: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Include wall-clock timings, which makes the report run-dependent.
    #[arg(long)]
    pub timings: bool,
}

impl ComputeArgs {
    /// Arguments for a bundled fixture with default settings.
    pub fn for_knot(name: &str) -> Self {
        ComputeArgs {
            knot: Some(name.to_string()),
            pd: None,
            open_side: None,
            unit_region: None,
            seeds: 200,
            rng_seed: 1,
            tol: EPS_SOLVE,
            report: None,
            dump_potential: None,
            dump_triangulation: None,
            threads: None,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Suite {
    Lemma5,
    Lemma31,
    Moves,
    Edges,
    Cancellation,
    Numerics,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub rng_seed: u64,
    /// Restrict the fixture-based suites to one knot.
    #[arg(long)]
    pub knot: Option<String>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Failures of the command-line pipeline, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("no essential solution: {0}")]
    NoEssential(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Diagram(DiagramError::AssumptionViolation(_)) => 3,
            CliError::Diagram(_) => 2,
            CliError::Assumption(_) => 3,
            CliError::NoEssential(_) => 4,
            CliError::Consistency(_) => 5,
            CliError::VerifyFailed => 1,
        }
    }
}

/// One solution as printed in the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionEntry {
    pub values: Vec<Cx>,
    pub residual: f64,
    pub essential: bool,
    pub volume: Option<f64>,
    pub flattened: Option<Cx>,
    pub geometric: bool,
}

/// Largest residuals of the consistency checks over all essential pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyChecks {
    pub pairs: usize,
    pub v0_minus_w0: f64,
    pub remaining_terms: f64,
    pub round_trip: f64,
    pub edge_relations: f64,
    pub cusp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub build_ms: f64,
    pub solve_ms: f64,
    pub checks_ms: f64,
}

/// Output of `optlim compute`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool_version: String,
    pub knot: String,
    pub crossings: usize,
    pub open_side: usize,
    pub unit_region: usize,
    pub g: usize,
    pub m: usize,
    pub rng_seed: u64,
    pub seeds: usize,
    pub solutions: Vec<SolutionEntry>,
    pub side_solutions: Vec<SolutionEntry>,
    pub geometric: Option<usize>,
    pub vol: f64,
    pub cs: f64,
    pub w0: Cx,
    pub v0: Option<Cx>,
    pub checks: ConsistencyChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Both potentials of a tangle, as written by `--dump-potential`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialDump {
    pub v: PotentialFunction,
    pub w: PotentialFunction,
}

/// Everything built from a diagram before solving.
pub struct Prepared {
    pub diagram: KnotDiagram,
    pub graph: TangleGraph,
    pub vars: Variables,
    pub v: PotentialFunction,
    pub w: PotentialFunction,
    pub yokota: Triangulation,
    pub thurston: Triangulation,
}

fn load_diagram(args: &ComputeArgs) -> Result<KnotDiagram, CliError> {
    let (text, default_name) = match (&args.knot, &args.pd) {
        (Some(k), _) => {
            let t = fixture(k).ok_or_else(|| CliError::Input(format!("unknown fixture {k}")))?;
            (t.to_string(), k.clone())
        }
        (None, Some(p)) => {
            let t = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            (t, p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
        }
        (None, None) => return Err(CliError::Input("one of --knot or --pd is required".into())),
    };
    let mut d = parse_pd(&text)?;
    if d.name.is_none() {
        d.name = Some(default_name);
    }
    Ok(d)
}

/// Parses, opens and checks the diagram, then builds the potentials and both
/// triangulations.
pub fn prepare(args: &ComputeArgs) -> Result<Prepared, CliError> {
    let diagram = load_diagram(args)?;
    let graph = match args.open_side {
        Some(k) => {
            let g = open_tangle(&diagram, k)?;
            let rep = check_assumptions(&g);
            if !rep.accepted() {
                let why: Vec<String> = rep.violations.iter().map(|v| v.detail.clone()).collect();
                return Err(CliError::Assumption(why.join("; ")));
            }
            g
        }
        None => auto_open(&diagram)?,
    };
    let unit = args.unit_region.unwrap_or(graph.unit);
    let graph = if unit != graph.unit { graph.with_unit_region(unit)? } else { graph };
    let vars = assign_variables(&graph, unit)?;
    let v = build_v(&graph, &vars);
    let w = build_w(&graph, &vars).map_err(|e| CliError::Consistency(e.to_string()))?;
    let yokota = build_yokota(&graph, &vars).map_err(|e| CliError::Consistency(e.to_string()))?;
    let thurston = build_thurston(&graph, &vars).map_err(|e| CliError::Consistency(e.to_string()))?;
    Ok(Prepared { diagram, graph, vars, v, w, yokota, thurston })
}

fn entries(set: &SolutionSet, p: &PotentialFunction) -> Vec<SolutionEntry> {
    set.solutions
        .iter()
        .map(|s| SolutionEntry {
            values: s.values.clone(),
            residual: s.residual,
            essential: s.essential,
            volume: s.essential.then_some(s.volume),
            flattened: p.flattened(&s.values).ok(),
            geometric: s.geometric,
        })
        .collect()
}

fn max_dist(a: &[Cx], b: &[Cx]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Runs the full pipeline.
pub fn compute(args: &ComputeArgs) -> Result<Report, CliError> {
    let t0 = Instant::now();
    let p = prepare(args)?;
    if let Some(path) = &args.dump_potential {
        let dump = PotentialDump { v: p.v.clone(), w: p.w.clone() };
        write_file(path, &serde_json::to_string_pretty(&dump).expect("potential serializes"))?;
    }
    if let Some(path) = &args.dump_triangulation {
        write_file(path, &p.thurston.to_json())?;
    }
    let t1 = Instant::now();
    let opts = SolveOptions {
        seeds: args.seeds,
        rng_seed: args.rng_seed,
        tol: args.tol,
        threads: args.threads,
        ..SolveOptions::default()
    };
    let (g, vars) = (&p.graph, &p.vars);
    let sols = solve_both(g, vars, &p.v.system(), &p.w.system(), &p.yokota, &p.thurston, &opts)
        .map_err(|e| CliError::NoEssential(e.to_string()))?;
    let t2 = Instant::now();
    let gi = sols.w.geometric.ok_or_else(|| {
        CliError::NoEssential(format!(
            "{} region solutions from {} seeds, none essential",
            sols.w.solutions.len(),
            sols.w.seeds_tried
        ))
    })?;
    let mut checks = ConsistencyChecks {
        pairs: 0,
        v0_minus_w0: 0.0,
        remaining_terms: 0.0,
        round_trip: 0.0,
        edge_relations: 0.0,
        cusp: 0.0,
    };
    let consistency = |what: &str, e: String| CliError::Consistency(format!("{what}: {e}"));
    let mut v0_geometric = None;
    for (k, s) in sols.w.solutions.iter().enumerate().filter(|(_, s)| s.essential) {
        let z = convert_w_to_z(&s.values, g, vars).map_err(|e| consistency("region to side conversion", e.to_string()))?;
        let back =
            convert_z_to_w(&z, g, vars, &p.thurston).map_err(|e| consistency("side to region conversion", e.to_string()))?;
        let v0 = p.v.flattened(&z).map_err(|e| consistency("V0", e.to_string()))?;
        let w0 = p.w.flattened(&s.values).map_err(|e| consistency("W0", e.to_string()))?;
        checks.pairs += 1;
        checks.v0_minus_w0 = checks.v0_minus_w0.max(dist_mod_4pi2(v0 - w0));
        checks.remaining_terms = checks.remaining_terms.max(check_cancellation(g, vars, &z, &s.values));
        checks.round_trip = checks.round_trip.max(max_dist(&back, &s.values));
        if k == gi {
            v0_geometric = Some(v0);
        }
    }
    for s in sols.v.solutions.iter().filter(|s| s.essential) {
        if let Ok(w) = convert_z_to_w(&s.values, g, vars, &p.thurston) {
            let z = convert_w_to_z(&w, g, vars).map_err(|e| consistency("region to side conversion", e.to_string()))?;
            checks.round_trip = checks.round_trip.max(max_dist(&z, &s.values));
        }
    }
    let gw = &sols.w.solutions[gi];
    checks.edge_relations = verify_edge_relations(&p.thurston, &gw.values)
        .map_err(|e| consistency("edge relations", e.to_string()))?
        .max_residual;
    checks.cusp = verify_cusp(&p.thurston, &gw.values).map_err(|e| consistency("cusp", e.to_string()))?;
    for (name, r) in [
        ("V0 - W0", checks.v0_minus_w0),
        ("remaining terms", checks.remaining_terms),
        ("round trip", checks.round_trip),
        ("edge relations", checks.edge_relations),
        ("cusp", checks.cusp),
    ] {
        if r.is_nan() || r > CONSISTENCY_TOL {
            return Err(consistency(name, format!("residual {r:e}")));
        }
    }
    let w0 = p.w.flattened(&gw.values).map_err(|e| consistency("W0", e.to_string()))?;
    let t3 = Instant::now();
    let ms = |a: Instant, b: Instant| (b - a).as_secs_f64() * 1e3;
    let report = Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        knot: p.diagram.name.clone().unwrap_or_default(),
        crossings: p.diagram.crossing_count(),
        open_side: g.split,
        unit_region: vars.unit_region,
        g: vars.g,
        m: vars.m,
        rng_seed: args.rng_seed,
        seeds: args.seeds,
        solutions: entries(&sols.w, &p.w),
        side_solutions: entries(&sols.v, &p.v),
        geometric: Some(gi),
        vol: w0.im,
        cs: reduce_mod(-w0.re, PI2),
        w0,
        v0: v0_geometric,
        checks,
        timings: args.timings.then(|| Timings { build_ms: ms(t0, t1), solve_ms: ms(t1, t2), checks_ms: ms(t2, t3) }),
    };
    if let Some(path) = &args.report {
        write_file(path, &report.to_json())?;
    }
    Ok(report)
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Fixtures with an admissible opening, used by the structural suites.
pub fn hyperbolic_fixtures() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).filter(|n| *n != "3_1").collect()
}

fn fixture_suite(args: &VerifyArgs) -> Result<SuiteReport, CliError> {
    let knots: Vec<String> = match &args.knot {
        Some(k) => vec![k.clone()],
        None => hyperbolic_fixtures().into_iter().map(String::from).collect(),
    };
    let mut checks = Vec::new();
    for k in knots {
        let mut c = ComputeArgs::for_knot(&k);
        c.rng_seed = args.rng_seed;
        c.threads = args.threads;
        let result = compute(&c);
        let (name, value) = match args.suite {
            Suite::Edges => ("edge relations and cusp", result.as_ref().map(|r| r.checks.edge_relations.max(r.checks.cusp))),
            _ => ("remaining-term cancellation", result.as_ref().map(|r| r.checks.remaining_terms.max(r.checks.v0_minus_w0))),
        };
        let value = value.map_err(|e| identities::IdentityError::DegenerateSample(e.to_string()));
        checks.push(CheckReport::from_residuals(&format!("{k} {name}"), CONSISTENCY_TOL, vec![(k.clone(), value)]));
    }
    let suite = if args.suite == Suite::Edges { "edges" } else { "cancellation" };
    Ok(SuiteReport::new(suite, checks.len(), args.rng_seed, checks))
}

/// Runs a verification suite.
pub fn verify(args: &VerifyArgs) -> Result<SuiteReport, CliError> {
    let run = || -> Result<SuiteReport, CliError> {
        Ok(match args.suite {
            Suite::Lemma5 => identities::run_lemma5(args.samples, args.rng_seed),
            Suite::Lemma31 => identities::run_lemma31(args.samples, args.rng_seed),
            Suite::Moves => identities::run_moves(args.samples, args.rng_seed),
            Suite::Numerics => identities::run_numerics(args.samples, args.rng_seed),
            Suite::Edges | Suite::Cancellation => fixture_suite(args)?,
        })
    };
    let report = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| CliError::Input(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    if let Some(path) = &args.report {
        write_file(path, &report.to_json())?;
    }
    Ok(report)
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Compute(args) => compute(&args).map(|r| println!("{}", r.to_json())),
        Command::Verify(args) => verify(&args).and_then(|r| {
            println!("{}", r.to_json());
            if r.passed {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }),
        Command::Fixtures => {
            for (name, _) in FIXTURES {
                println!("{name}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("optlim: {e}");
            e.exit_code()
        }
    }
}
