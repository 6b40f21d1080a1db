//! `isospec`: quotients, spectra and isospectrality checks for quantum graphs
//! with a finite symmetry group.
//!
//! Exit codes: 0 success, 1 verification failed, 2 invalid input,
//! 3 solver diagnostic at error level.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use isospec_core::io::{self, Ref};
use isospec_core::quotient::{self, QuotientRecipe, RecipeOptions};
use isospec_core::spectral::{self, Severity, SolverSettings, Spectrum};
use isospec_core::{examples, linalg, Error};
use isospec_core::group::SubgroupRef;
use isospec_core::graph::QuantumGraph;
use isospec_core::rep::Representation;

#[derive(Parser)]
#[command(name = "isospec", version, about = "Quotient quantum graphs by group representations and compare spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the quotient graph of a graph with a group action by a representation.
    Quotient(QuotientArgs),
    /// Compute eigenvalues up to a wavenumber bound and write them as CSV.
    Spectrum(SpectrumArgs),
    /// Compare the spectra of two graphs.
    Verify(VerifyArgs),
    /// Write a built-in example (graph, group, action, representations).
    Example(ExampleArgs),
    /// Representation utilities.
    #[command(subcommand)]
    Rep(RepCommand),
}

#[derive(Args)]
struct QuotientArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    action: PathBuf,
    #[arg(long)]
    rep: PathBuf,
    /// Rotate the representation basis by this angle (2-dimensional representations only).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Split vertices whose conditions decouple into independent blocks.
    #[arg(long)]
    split_vertices: bool,
    /// Force an edge orbit representative, as ORBIT=EDGE (ids of the processed graph).
    #[arg(long = "edge-rep", value_parser = parse_pair)]
    edge_reps: Vec<(usize, usize)>,
    /// Force a vertex orbit representative, as ORBIT=VERTEX.
    #[arg(long = "vertex-rep", value_parser = parse_pair)]
    vertex_reps: Vec<(usize, usize)>,
    #[arg(long, default_value_t = quotient::DEFAULT_BASIS_TOL)]
    basis_tol: f64,
    #[arg(long, default_value_t = quotient::DEFAULT_REDUCE_TOL)]
    reduce_tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Grid spacing of the scan; defaults to π / (4 · total length).
    #[arg(long)]
    scan_step: Option<f64>,
    /// Acceptance threshold on σ_min / σ_max.
    #[arg(long = "accept-tol", default_value_t = 1e-8)]
    accept_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    k_floor: f64,
    /// Rescan with half the step and keep the finer result on disagreement.
    #[arg(long)]
    halved_rescan: bool,
}

impl SolverArgs {
    fn settings(&self) -> SolverSettings {
        SolverSettings {
            k_floor: self.k_floor,
            scan_step: self.scan_step,
            accept_tol: self.accept_tol,
            halved_rescan: self.halved_rescan,
            ..SolverSettings::default()
        }
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    kmax: f64,
    /// Same as --accept-tol.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
    /// CSV output; settings and diagnostics go to the same name with extension `settings.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph_a: PathBuf,
    #[arg(long)]
    graph_b: PathBuf,
    #[arg(long)]
    kmax: f64,
    /// Maximal deviation in k between matched eigenvalues.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// One of square-d4, interval-z2, ygraph.
    name: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum RepCommand {
    /// Induce to a larger subgroup (the whole group by default).
    Induce {
        #[arg(long)]
        rep: PathBuf,
        /// Comma-separated element indices or names of the target subgroup.
        #[arg(long)]
        to: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Restrict to a subgroup of the domain.
    Restrict {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        to: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide isomorphism by characters; exit 0 when isomorphic, 1 otherwise.
    CheckIso {
        #[arg(long)]
        rep_a: PathBuf,
        #[arg(long)]
        rep_b: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the character and the homomorphism check.
    Character {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('=').ok_or_else(|| format!("expected ORBIT=ID, got {s}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

enum Failure {
    Input(Error),
    Verification,
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(m) => Failure::Solver(m),
            other => Failure::Input(other),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidElement { .. } => "invalid_element",
        Error::InvalidGroup(_) => "invalid_group",
        Error::InvalidSubgroup(_) => "invalid_subgroup",
        Error::GroupMismatch(_) => "group_mismatch",
        Error::Shape(_) => "shape",
        Error::InvalidRep(_) => "invalid_rep",
        Error::SingularBasis => "singular_basis",
        Error::InvalidGraph(_) => "invalid_graph",
        Error::OutOfRange(_) => "out_of_range",
        Error::InvalidAction(_) => "invalid_action",
        Error::InvalidOverride(_) => "invalid_override",
        Error::Inconsistent(_) => "inconsistent",
        Error::Solver(_) => "solver",
        Error::Io { .. } => "io",
        Error::Format { .. } => "format",
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Quotient(a) => cmd_quotient(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Example(a) => cmd_example(a),
        Command::Rep(r) => cmd_rep(r),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("{}", json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}));
            ExitCode::from(2)
        }
        Err(Failure::Solver(message)) => {
            eprintln!("{}", json!({"error": {"kind": "solver", "message": message}}));
            ExitCode::from(3)
        }
    }
}

fn print(value: &Value) {
    use std::io::Write;
    // a closed pipe on stdout is not an error of the command
    let _ = writeln!(std::io::stdout(), "{}", io::to_canonical_string(value));
}

fn cmd_quotient(args: QuotientArgs) -> Outcome {
    let graph = io::load_graph(&args.graph)?;
    let loaded = io::load_action(&args.action)?;
    // the action's maps are applied to the graph given on the command line
    let action = isospec_core::action::GraphAction::new(loaded.group().clone(), graph, loaded.maps().to_vec())?;
    let rep = io::load_rep(&args.rep)?;
    let global_basis = match args.theta {
        Some(theta) if rep.dim() != 2 => {
            return Err(Error::OutOfRange(format!("--theta {theta} needs a 2-dimensional representation, got dimension {}", rep.dim())).into())
        }
        Some(theta) => Some(linalg::rotation(theta)),
        None => None,
    };
    let opts = RecipeOptions {
        global_basis,
        basis_tol: args.basis_tol,
        edge_overrides: args.edge_reps.iter().copied().collect(),
        vertex_overrides: args.vertex_reps.iter().copied().collect(),
        ..RecipeOptions::default()
    };
    let recipe = QuotientRecipe::new(&action, &rep, &opts)?;
    let result = quotient::build_quotient(&recipe, args.reduce_tol)?;
    let graph = if args.split_vertices { quotient::split_vertices(&result.graph, args.reduce_tol)? } else { result.graph.clone() };
    let class = quotient::classify(&graph, args.reduce_tol);
    let class_value = json!({
        "kind": format!("{:?}", class.kind),
        "per_vertex": class.per_vertex.iter().map(|v| json!({"rank": v.rank, "degree": v.degree})).collect::<Vec<_>>(),
    });
    let names = rep.group().names().to_vec();
    let mut provenance = io::provenance_to_value(&result, &names);
    provenance["classification"] = class_value.clone();
    provenance["rep_dim"] = json!(rep.dim());
    provenance["theta"] = json!(args.theta);
    provenance["split_vertices"] = json!(args.split_vertices);
    let graph_path = args.out.join("graph.json");
    let prov_path = args.out.join("provenance.json");
    io::write_graph(&graph_path, &graph)?;
    io::write_json(&prov_path, &provenance)?;
    print(&json!({
        "graph": graph_path.display().to_string(),
        "provenance": prov_path.display().to_string(),
        "edges": graph.edges().len(),
        "vertices": graph.vertices().len(),
        "total_length": graph.total_length(),
        "classification": class_value,
    }));
    Ok(())
}

fn solve(graph: &QuantumGraph, kmax: f64, settings: &SolverSettings) -> std::result::Result<Spectrum, Failure> {
    Ok(spectral::find_spectrum(graph, kmax, settings)?)
}

fn solver_failure(s: &Spectrum) -> Option<String> {
    (s.worst_severity() == Some(Severity::Error)).then(|| {
        s.diagnostics.iter().filter(|d| d.severity == Severity::Error).map(|d| d.message.as_str()).collect::<Vec<_>>().join("; ")
    })
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("settings.json")
}

fn cmd_spectrum(args: SpectrumArgs) -> Outcome {
    let graph = io::load_graph(&args.graph)?;
    let mut settings = args.solver.settings();
    if let Some(t) = args.tol {
        settings.accept_tol = t;
    }
    let s = solve(&graph, args.kmax, &settings)?;
    io::write_text(&args.out, &io::spectrum_to_csv(&s))?;
    let side = sidecar_path(&args.out);
    io::write_json(&side, &io::spectrum_sidecar(&s, args.graph.to_str()))?;
    for d in &s.diagnostics {
        eprintln!("{}", json!({"diagnostic": d}));
    }
    if let Some(message) = solver_failure(&s) {
        return Err(Failure::Solver(message));
    }
    print(&json!({"csv": args.out.display().to_string(), "settings": side.display().to_string(), "count": s.count(), "zero_mode": s.zero_mode}));
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let a = io::load_graph(&args.graph_a)?;
    let b = io::load_graph(&args.graph_b)?;
    let settings = args.solver.settings();
    let sa = solve(&a, args.kmax, &settings)?;
    let sb = solve(&b, args.kmax, &settings)?;
    for s in [&sa, &sb] {
        if let Some(message) = solver_failure(s) {
            return Err(Failure::Solver(message));
        }
    }
    let report = spectral::compare_spectra(&sa, &sb, args.tol);
    let value = json!({
        "graph_a": args.graph_a.display().to_string(),
        "graph_b": args.graph_b.display().to_string(),
        "count_a": sa.count(),
        "count_b": sb.count(),
        "settings": serde_json::to_value(&settings).expect("plain data"),
        "diagnostics_a": serde_json::to_value(&sa.diagnostics).expect("plain data"),
        "diagnostics_b": serde_json::to_value(&sb.diagnostics).expect("plain data"),
        "report": serde_json::to_value(&report).expect("plain data"),
    });
    if let Some(path) = &args.report {
        io::write_json(path, &value)?;
    }
    print(&json!({"pass": report.pass, "max_deviation": report.max_deviation, "matched": report.matched.len(),
        "unmatched_a": serde_json::to_value(&report.unmatched_a).expect("plain data"),
        "unmatched_b": serde_json::to_value(&report.unmatched_b).expect("plain data"),
        "zero_mode_a": report.zero_mode_a, "zero_mode_b": report.zero_mode_b}));
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_example(args: ExampleArgs) -> Outcome {
    let bundle = match args.name.as_str() {
        "square-d4" => {
            let (a, b, c) = examples::SQUARE_DEFAULTS;
            examples::square_d4(args.a.unwrap_or(a), args.b.unwrap_or(b), args.c.unwrap_or(c), args.theta.unwrap_or(0.0))?
        }
        "interval-z2" => examples::interval_z2(args.l.unwrap_or(1.0))?,
        "ygraph" => {
            let (a, b, c) = examples::YGRAPH_DEFAULTS;
            examples::ygraph(args.a.unwrap_or(a), args.b.unwrap_or(b), args.c.unwrap_or(c))?
        }
        other => return Err(Error::OutOfRange(format!("unknown example {other}; expected square-d4, interval-z2 or ygraph")).into()),
    };
    let dir = &args.out;
    io::write_json(&dir.join("group.json"), &io::group_to_value(&bundle.group))?;
    io::write_graph(&dir.join("graph.json"), &bundle.graph)?;
    let action = io::action_to_value(&bundle.action, &Ref::Path("group.json".into()), &Ref::Path("graph.json".into()));
    io::write_json(&dir.join("action.json"), &action)?;
    let mut reps = BTreeMap::new();
    for (name, rep) in &bundle.reps {
        let path = dir.join("reps").join(format!("{name}.json"));
        io::write_rep(&path, rep, &Ref::Path("../group.json".into()))?;
        reps.insert(name.clone(), path.display().to_string());
    }
    io::write_json(&dir.join("params.json"), &json!({"name": args.name, "params": bundle.params}))?;
    print(&json!({"dir": dir.display().to_string(), "reps": reps, "edges": bundle.graph.edges().len(), "vertices": bundle.graph.vertices().len()}));
    Ok(())
}

fn parse_subgroup(rep: &Representation, list: &str) -> std::result::Result<SubgroupRef, Failure> {
    let group = rep.group();
    let mut elements = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let g = match item.parse::<usize>() {
            Ok(i) => i,
            Err(_) => group.index_of(item).ok_or_else(|| Error::OutOfRange(format!("unknown element {item}")))?,
        };
        group.check_element(g)?;
        elements.push(g);
    }
    Ok(SubgroupRef::new(group.clone(), elements)?)
}

fn cmd_rep(cmd: RepCommand) -> Outcome {
    match cmd {
        RepCommand::Induce { rep, to, out } => {
            let r = io::load_rep(&rep)?;
            let ambient = match to {
                Some(list) => parse_subgroup(&r, &list)?,
                None => SubgroupRef::full(r.group().clone()),
            };
            let induced = r.induce(&ambient)?;
            io::write_rep(&out, &induced, &Ref::Inline)?;
            print(&json!({"out": out.display().to_string(), "dim": induced.dim(), "domain": induced.domain().elements()}));
        }
        RepCommand::Restrict { rep, to, out } => {
            let r = io::load_rep(&rep)?;
            let sub = parse_subgroup(&r, &to)?;
            let restricted = r.restrict(&sub)?;
            io::write_rep(&out, &restricted, &Ref::Inline)?;
            print(&json!({"out": out.display().to_string(), "dim": restricted.dim(), "domain": restricted.domain().elements()}));
        }
        RepCommand::CheckIso { rep_a, rep_b, tol } => {
            let a = io::load_rep(&rep_a)?;
            let b = io::load_rep(&rep_b)?;
            let iso = a.is_isomorphic(&b, tol)?;
            print(&json!({"isomorphic": iso}));
            if !iso {
                return Err(Failure::Verification);
            }
        }
        RepCommand::Character { rep, tol } => {
            let r = io::load_rep(&rep)?;
            let report = r.validate(tol);
            let chi = r.character();
            let names: Vec<&str> = r.domain().elements().iter().map(|&g| r.group().name(g)).collect();
            let norm = chi.inner_product(&chi)?;
            print(&json!({
                "dim": r.dim(),
                "elements": r.domain().elements(),
                "names": names,
                "character": chi.values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "norm_squared": [norm.re, norm.im],
                "valid": report.valid,
                "max_deviation": report.max_deviation,
            }));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_pairs_parse() {
        assert_eq!(parse_pair("3=17"), Ok((3, 17)));
        assert_eq!(parse_pair(" 0 = 2"), Ok((0, 2)));
        assert!(parse_pair("3").is_err());
        assert!(parse_pair("a=1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
