//! The `subentity-lab` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subentity_core::axioms::{run_battery, AxiomVerdict, Counterexample, Witness};
use subentity_core::hilbert::{
    decompositions_sample, eigendecomposition, partial_trace, reduced_evolution, schmidt, CMatrix,
    DensityOperator, Factor, C64,
};
use subentity_core::lecce::{
    build_lecce_sps, check_partition_property, state_label, validate_world, LabWorld, WorldIssue,
};
use subentity_core::sps::{def1_violations, Def1Violation, QuantumSps, StatePropertySystem};
use subentity_core::subentity::{
    build_completed_model, canonical_witness_check, quantum_pair, search_witness_stats,
    verify_witness, CompletedQuantumModel, SubentityError, SubentityWitness, WitnessViolation,
};
use subentity_core::Tolerances;

use crate::build::{
    bipartite_dims, compound_operators, density_of, first_with_role, hilbert_spec, load,
    sps_from_doc, sps_table, vector_of, BuildError, Loaded,
};
use crate::model::{Body, HilbertSpec, MatrixRole};
use crate::report::{digest, Report, Verdict};

pub const EPS_ENV: &str = "SUBENTITY_LAB_EPS";
pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "subentity-lab",
    version,
    about = "Checks for state property systems, subentity maps and finite quantum models"
)]
pub struct Cli {
    /// Structural tolerance; overrides SUBENTITY_LAB_EPS.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Keep {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the eight-axiom battery on a lattice or sps document.
    CheckAxioms { file: PathBuf },
    /// Check the actuality conditions of an sps document.
    SpsCheck { file: PathBuf },
    /// Schmidt form of the first vector in a bipartite hilbert document.
    Schmidt { file: PathBuf },
    /// Reduced state of the first density or vector matrix.
    Ptrace {
        file: PathBuf,
        #[arg(long, value_enum)]
        keep: Keep,
    },
    /// Search for a subentity witness between two sps documents.
    SubentitySearch {
        part: PathBuf,
        whole: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Build and check the subentity relation of a compound document.
    SubentityQuantum {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Derive states, properties and the property lattice of a labworld document.
    LecceBuild { file: PathBuf },
    /// Sample convex decompositions of the first density or vector matrix.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        parts: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduced purity before and after the first unitary acts on the first vector.
    Evolve { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Negative,
    BudgetExhausted,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => EXIT_PASS,
            Outcome::Negative => EXIT_NEGATIVE,
            Outcome::BudgetExhausted => EXIT_BUDGET,
        }
    }

    fn of(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::Negative
        }
    }
}

/// An input problem: unreadable, malformed, or not checkable as requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcomes = Result<(Report, Outcome), InputError>;

/// Parses `args` (program name first), runs one command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_PASS
            };
        }
    };
    let eps = match cli.eps {
        Some(eps) => Some(eps),
        None => match std::env::var(EPS_ENV) {
            Ok(raw) => match raw.trim().parse::<f64>() {
                Ok(eps) => Some(eps),
                Err(_) => {
                    let _ = writeln!(stderr, "error: {EPS_ENV} is not a number: {raw:?}");
                    return EXIT_INPUT;
                }
            },
            Err(_) => None,
        },
    };
    let tol = match eps {
        None => Tolerances::DEFAULT,
        Some(eps) if eps.is_finite() && eps > 0.0 && eps < 1.0 => Tolerances::with_eps(eps),
        Some(eps) => {
            let _ = writeln!(stderr, "error: eps must lie in (0, 1), got {eps}");
            return EXIT_INPUT;
        }
    };
    let (report, outcome) = match execute(&cli.command, &tol) {
        Ok(r) => r,
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    let text = match cli.format {
        Format::Human => report.render_human(),
        Format::Machine => report.render_machine(),
    };
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    outcome.code()
}

pub fn execute(command: &Command, tol: &Tolerances) -> Outcomes {
    match command {
        Command::CheckAxioms { file } => check_axioms(file, tol),
        Command::SpsCheck { file } => sps_check(file, tol),
        Command::Schmidt { file } => schmidt_cmd(file, tol),
        Command::Ptrace { file, keep } => ptrace(file, *keep, tol),
        Command::SubentitySearch {
            part,
            whole,
            budget,
        } => subentity_search(part, whole, *budget, tol),
        Command::SubentityQuantum { file, budget } => subentity_quantum(file, *budget, tol),
        Command::LecceBuild { file } => lecce_build(file, tol),
        Command::Decompose {
            file,
            parts,
            samples,
            seed,
        } => decompose(file, *parts, *samples, *seed, tol),
        Command::Evolve { file } => evolve(file, tol),
    }
}

fn start(command: &str, loaded: &[&Loaded]) -> Report {
    let mut r = Report::new(command, digest(loaded.iter().map(|l| l.bytes.as_slice())));
    let meta: Vec<Value> = loaded
        .iter()
        .map(|l| json!({ "name": l.doc.meta.name, "kind": l.doc.kind().name(), "description": l.doc.meta.description }))
        .collect();
    r.set("models", Value::Array(meta));
    r
}

fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn vector(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

fn labels_of(items: &[usize], label: impl Fn(usize) -> String) -> Vec<String> {
    items.iter().map(|&x| label(x)).collect()
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

// ---- check-axioms ----

const AXIOM_CONVENTIONS: [&str; 3] = [
    "covering law read strictly: a < x < a∨b implies x = a or x = a∨b",
    "orthocomplement-dependent checks are compared across up to 256 orthocomplementations",
    "every finite lattice fails infinite length; the largest orthogonal family size is reported",
];

fn check_axioms(file: &Path, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let sps = sps_from_doc(&loaded.doc)?;
    let mut r = start("check-axioms", &[&loaded]);
    for c in AXIOM_CONVENTIONS {
        r.convention(c);
    }
    r.set("elements", json!(sps.lattice().labels()));
    r.set("states", json!(sps.state_labels()));
    for v in run_battery(&sps) {
        r.verdict(axiom_verdict(&v, &sps));
    }
    let outcome = Outcome::of(r.all_passed());
    Ok((r, outcome))
}

pub fn axiom_verdict(v: &AxiomVerdict, sps: &StatePropertySystem) -> Verdict {
    let l = sps.lattice();
    let el = |x: usize| l.label(x).to_string();
    let witness = v.witness.as_ref().map(|w| match w {
        Witness::Orthocomplement(c) => {
            json!({ "orthocomplement": (0..c.len()).map(|a| json!([el(a), el(c[a])])).collect::<Vec<_>>() })
        }
        Witness::PlaneTransitivity(list) => json!({
            "plane_transitivity": list.iter().map(|t| json!({
                "s": el(t.s), "t": el(t.t), "s1": el(t.s1), "s2": el(t.s2),
                "automorphism": labels_of(&t.automorphism, el),
            })).collect::<Vec<_>>()
        }),
    });
    let (counterexample, text) = match &v.counterexample {
        None => (Value::Null, String::new()),
        Some(c) => describe_counterexample(c, sps),
    };
    let summary = match (text.is_empty(), v.note.is_empty()) {
        (true, _) => v.note.clone(),
        (false, true) => text,
        (false, false) => format!("{text}; {}", v.note),
    };
    Verdict::new(v.axiom.name(), v.passed, summary).with_detail(json!({
        "witness": witness,
        "counterexample": counterexample,
        "note": v.note,
    }))
}

fn describe_counterexample(c: &Counterexample, sps: &StatePropertySystem) -> (Value, String) {
    let l = sps.lattice();
    let el = |x: usize| l.label(x).to_string();
    let st = |p: usize| sps.state_label(p).to_string();
    let maps = |ms: &[Vec<usize>]| ms.iter().map(|m| labels_of(m, el)).collect::<Vec<_>>();
    match c {
        Counterexample::StatePair { p, q } => (
            json!({ "kind": "state-pair", "p": st(*p), "q": st(*q) }),
            format!(
                "states {} and {} have the same actual properties",
                st(*p),
                st(*q)
            ),
        ),
        Counterexample::NonAtomicMeet { state, meet } => (
            json!({ "kind": "non-atomic-meet", "state": st(*state), "meet": el(*meet) }),
            format!(
                "strongest property of {} is {}, not an atom",
                st(*state),
                el(*meet)
            ),
        ),
        Counterexample::CoveringTriple { a, b, x } => (
            json!({ "kind": "covering-triple", "a": el(*a), "b": el(*b), "x": el(*x) }),
            format!("a={} b={} x={}", el(*a), el(*b), el(*x)),
        ),
        Counterexample::ModularityPair { a, b } => (
            json!({ "kind": "modularity-pair", "a": el(*a), "b": el(*b) }),
            format!("a={} b={}", el(*a), el(*b)),
        ),
        Counterexample::UnwitnessedPairs(pairs) => (
            json!({ "kind": "unwitnessed-pairs", "pairs": pairs.iter().map(|&(s, t)| json!([el(s), el(t)])).collect::<Vec<_>>() }),
            format!("{} atom pairs without a fixing automorphism", pairs.len()),
        ),
        Counterexample::ReducingElement { b } => (
            json!({ "kind": "reducing-element", "b": el(*b) }),
            format!("b={} commutes with every element", el(*b)),
        ),
        Counterexample::OrthogonalFamily(f) => {
            let names = labels_of(f, el);
            let text = format!("orthogonal family {}", braces(&names));
            (
                json!({ "kind": "orthogonal-family", "size": f.len(), "family": names }),
                text,
            )
        }
        Counterexample::WitnessDependent { passing, failing } => (
            json!({ "kind": "witness-dependent", "passing": maps(passing), "failing": maps(failing) }),
            format!(
                "verdict depends on the orthocomplementation ({} pass, {} fail)",
                passing.len(),
                failing.len()
            ),
        ),
    }
}

// ---- sps-check ----

fn sps_check(file: &Path, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let (lattice, table, states) = match &loaded.doc.body {
        Body::Sps(spec) => {
            let (lattice, table) = sps_table(spec)?;
            (lattice, table, spec.states.clone())
        }
        Body::Lattice(_) => {
            let sps = sps_from_doc(&loaded.doc)?;
            let table = (0..sps.num_states())
                .map(|p| sps.xi_row(p).to_vec())
                .collect();
            (sps.lattice().clone(), table, sps.state_labels().to_vec())
        }
        _ => {
            return Err(BuildError::WrongKind {
                expected: "lattice or sps",
                found: loaded.doc.kind(),
            }
            .into())
        }
    };
    let violations = def1_violations(&lattice, &table);
    let mut r = start("sps-check", &[&loaded]);
    let el = |x: usize| lattice.label(x).to_string();
    let actual: Vec<Vec<String>> = table
        .iter()
        .map(|row| (0..lattice.size()).filter(|&a| row[a]).map(el).collect())
        .collect();
    let top_bottom: Vec<&Def1Violation> = violations
        .iter()
        .filter(|v| matches!(v, Def1Violation::TopBottom { .. }))
        .collect();
    let closure: Vec<&Def1Violation> = violations
        .iter()
        .filter(|v| matches!(v, Def1Violation::MeetClosure { .. }))
        .collect();
    let describe = |v: &Def1Violation| match v {
        Def1Violation::TopBottom { state } => json!({ "state": states[*state] }),
        Def1Violation::MeetClosure { state, family } => {
            json!({ "state": states[*state], "family": labels_of(family, el) })
        }
    };
    let first_state = |vs: &[&Def1Violation]| match vs.first() {
        Some(Def1Violation::TopBottom { state }) => format!("fails in state {}", states[*state]),
        Some(Def1Violation::MeetClosure { state, family }) => {
            format!(
                "fails in state {} for {}",
                states[*state],
                braces(&labels_of(family, el))
            )
        }
        None => String::new(),
    };
    r.verdict(
        Verdict::new(
            "top-bottom",
            top_bottom.is_empty(),
            first_state(&top_bottom),
        )
        .with_detail(Value::Array(
            top_bottom.iter().map(|v| describe(v)).collect(),
        )),
    );
    r.verdict(
        Verdict::new("meet-closure", closure.is_empty(), first_state(&closure))
            .with_detail(Value::Array(closure.iter().map(|v| describe(v)).collect())),
    );
    r.set("elements", json!(lattice.labels()));
    r.set(
        "states",
        Value::Array(
            states
                .iter()
                .zip(&actual)
                .map(|(s, a)| json!({ "name": s, "actual": a }))
                .collect(),
        ),
    );
    let kappa: Vec<Value> = (0..lattice.size())
        .map(|a| {
            let holders: Vec<&String> = (0..states.len())
                .filter(|&p| table[p][a])
                .map(|p| &states[p])
                .collect();
            json!({ "property": el(a), "states": holders })
        })
        .collect();
    r.set("kappa", Value::Array(kappa));
    for (s, a) in states.iter().zip(&actual) {
        r.line(format!("{s}: {}", braces(a)));
    }
    let outcome = Outcome::of(violations.is_empty());
    Ok((r, outcome))
}

// ---- hilbert commands ----

fn space_dim(h: &HilbertSpec) -> usize {
    h.dims.iter().product()
}

fn check_dim(name: &str, found: usize, expected: usize) -> Result<(), InputError> {
    if found == expected {
        Ok(())
    } else {
        Err(InputError(format!(
            "matrix {name} has dimension {found}, the space has dimension {expected}"
        )))
    }
}

fn state_operator(h: &HilbertSpec, tol: &Tolerances) -> Result<DensityOperator, InputError> {
    let m = first_with_role(&h.matrices, &[MatrixRole::Density, MatrixRole::Vector])?;
    let w = density_of(m, tol)?;
    check_dim(&m.name, w.dim(), space_dim(h))?;
    Ok(w)
}

fn hilbert_doc(loaded: &Loaded) -> Result<&HilbertSpec, InputError> {
    Ok(hilbert_spec(&loaded.doc)?)
}

fn schmidt_cmd(file: &Path, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let h = hilbert_doc(&loaded)?;
    let (d_a, d_b) = bipartite_dims(h)?;
    let m = first_with_role(&h.matrices, &[MatrixRole::Vector])?;
    let psi = vector_of(m, tol)?;
    check_dim(&m.name, psi.dim(), d_a * d_b)?;
    let form = schmidt(&psi, d_a, d_b, tol)?;
    let error = form
        .reconstruct()
        .iter()
        .zip(psi.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let reduced = partial_trace(&psi.density(), d_a, d_b, Factor::A)?;
    let mut r = start("schmidt", &[&loaded]);
    r.verdict(Verdict::new(
        "reconstruction",
        error <= tol.eps_recon,
        format!("max amplitude error {error:.3e}"),
    ));
    r.set("vector", json!(m.name));
    r.set("rank", json!(form.rank()));
    r.set("entangled", json!(form.rank() > 1));
    r.set("coefficients", json!(form.coefficients));
    r.set("weights", json!(form.weights()));
    r.set(
        "left_basis",
        Value::Array(form.left_basis.iter().map(|v| vector(v)).collect()),
    );
    r.set(
        "right_basis",
        Value::Array(form.right_basis.iter().map(|v| vector(v)).collect()),
    );
    r.set("reconstruction_error", json!(error));
    r.set("reduced_purity", json!(reduced.purity()));
    r.line(format!("rank {}", form.rank()));
    let coefficients: Vec<String> = form
        .coefficients
        .iter()
        .map(|c| format!("{c:.12}"))
        .collect();
    r.line(format!("coefficients {}", coefficients.join(" ")));
    r.line(format!("reduced purity {:.12}", reduced.purity()));
    let outcome = Outcome::of(r.all_passed());
    Ok((r, outcome))
}

fn ptrace(file: &Path, keep: Keep, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let h = hilbert_doc(&loaded)?;
    let (d_a, d_b) = bipartite_dims(h)?;
    let w = state_operator(h, tol)?;
    let factor = match keep {
        Keep::A => Factor::A,
        Keep::B => Factor::B,
    };
    let reduced = partial_trace(&w, d_a, d_b, factor)?;
    let trace = reduced.matrix().trace().re;
    let kept = if keep == Keep::A { "A" } else { "B" };
    let mut r = start("ptrace", &[&loaded]);
    r.verdict(Verdict::new(
        "unit-trace",
        (trace - 1.0).abs() <= tol.eps,
        format!("trace {trace:.12}"),
    ));
    r.set("keep", json!(kept));
    r.set("reduced", matrix(reduced.matrix()));
    r.set("purity", json!(reduced.purity()));
    r.line(format!(
        "kept factor {kept}, purity {:.12}",
        reduced.purity()
    ));
    for i in 0..reduced.dim() {
        let row: Vec<String> = reduced
            .matrix()
            .row(i)
            .iter()
            .map(|z| crate::serialize::format_complex(*z))
            .collect();
        r.line(row.join(", "));
    }
    let outcome = Outcome::of(r.all_passed());
    Ok((r, outcome))
}

fn decompose(file: &Path, parts: usize, samples: usize, seed: u64, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let h = hilbert_doc(&loaded)?;
    let w = state_operator(h, tol)?;
    let spectrum = eigendecomposition(&w, tol);
    let decompositions = decompositions_sample(&w, parts, samples, seed, tol)?;
    let mut worst_recon = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut min_weight = f64::INFINITY;
    let mut out = Vec::with_capacity(decompositions.len());
    for d in &decompositions {
        let recon = d.reconstruct().max_abs_diff(w.matrix());
        let sum: f64 = d.terms.iter().map(|t| t.0).sum();
        worst_recon = worst_recon.max(recon);
        worst_sum = worst_sum.max((sum - 1.0).abs());
        min_weight = d.terms.iter().map(|t| t.0).fold(min_weight, f64::min);
        out.push(json!({
            "terms": d.terms.iter().map(|(q, v)| json!({ "weight": q, "vector": vector(v) })).collect::<Vec<_>>(),
            "reconstruction_error": recon,
            "weight_sum": sum,
        }));
    }
    let mut r = start("decompose", &[&loaded]);
    r.verdict(Verdict::new(
        "reconstruction",
        worst_recon <= tol.eps_recon,
        format!("max entry error {worst_recon:.3e}"),
    ));
    r.verdict(Verdict::new(
        "weights",
        min_weight > 0.0 && worst_sum <= tol.eps,
        format!("min weight {min_weight:.6}, max |sum - 1| {worst_sum:.3e}"),
    ));
    r.set("rank", json!(spectrum.len()));
    r.set(
        "spectrum",
        json!(spectrum.iter().map(|t| t.0).collect::<Vec<_>>()),
    );
    r.set("parts", json!(parts));
    r.set("seed", json!(seed));
    r.set("samples", Value::Array(out));
    r.line(format!(
        "{} samples of {parts} terms, seed {seed}",
        decompositions.len()
    ));
    let outcome = Outcome::of(r.all_passed());
    Ok((r, outcome))
}

fn evolve(file: &Path, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let h = hilbert_doc(&loaded)?;
    let (d_a, d_b) = bipartite_dims(h)?;
    let v = first_with_role(&h.matrices, &[MatrixRole::Vector])?;
    let u = first_with_role(&h.matrices, &[MatrixRole::Unitary])?;
    let psi = vector_of(v, tol)?;
    check_dim(&v.name, psi.dim(), d_a * d_b)?;
    let change = reduced_evolution(&psi, &u.matrix, d_a, d_b, tol)?;
    let delta = change.after - change.before;
    let mut r = start("evolve", &[&loaded]);
    r.verdict(Verdict::new(
        "unitary-step",
        true,
        format!(
            "reduced purity {:.12} -> {:.12}",
            change.before, change.after
        ),
    ));
    r.set("vector", json!(v.name));
    r.set("unitary", json!(u.name));
    r.set("purity_before", json!(change.before));
    r.set("purity_after", json!(change.after));
    r.set("reduced_evolution_unitary", json!(delta.abs() <= tol.eps));
    r.line(format!("purity change {delta:+.3e}"));
    Ok((r, Outcome::Pass))
}

// ---- subentity commands ----

const SUBENTITY_CONVENTIONS: [&str; 2] = [
    "m maps whole states onto part states; n maps part properties injectively into whole properties",
    "n is not required to send the part's 0 and I to the whole's 0 and I",
];

fn witness_json(
    w: &SubentityWitness,
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
) -> Value {
    json!({
        "state_map": w.state_map.iter().enumerate()
            .map(|(p, &q)| json!([whole.state_label(p), part.state_label(q)])).collect::<Vec<_>>(),
        "property_map": w.property_map.iter().enumerate()
            .map(|(a, &b)| json!([part.lattice().label(a), whole.lattice().label(b)])).collect::<Vec<_>>(),
    })
}

fn violation_text(
    v: &WitnessViolation,
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
) -> String {
    match v {
        WitnessViolation::NotSurjective { missed } => format!("part state {} is not reached", part.state_label(*missed)),
        WitnessViolation::NotInjective { a, b, image } => format!(
            "part properties {} and {} both map to {}",
            part.lattice().label(*a),
            part.lattice().label(*b),
            whole.lattice().label(*image)
        ),
        WitnessViolation::Covariance { whole_state, part_property, part_actual, whole_actual } => format!(
            "covariance fails at whole state {} and part property {} (part {part_actual}, whole {whole_actual})",
            whole.state_label(*whole_state),
            part.lattice().label(*part_property)
        ),
    }
}

/// Runs the witness search and records its verdict under `name`.
fn search_verdict(
    r: &mut Report,
    name: &str,
    part: &StatePropertySystem,
    whole: &StatePropertySystem,
    budget: u64,
) -> Result<Outcome, InputError> {
    match search_witness_stats(part, whole, budget) {
        Ok((Some(w), stats)) => {
            let holds = verify_witness(part, whole, &w)?.holds();
            r.verdict(
                Verdict::new(
                    name,
                    holds,
                    format!("witness found after {} nodes", stats.nodes),
                )
                .with_detail(
                    json!({ "witness": witness_json(&w, part, whole), "nodes": stats.nodes }),
                ),
            );
            Ok(Outcome::of(holds))
        }
        Ok((None, stats)) => {
            r.verdict(
                Verdict::new(
                    name,
                    false,
                    format!("no witness exists ({} nodes searched)", stats.nodes),
                )
                .with_detail(json!({ "witness": Value::Null, "nodes": stats.nodes })),
            );
            Ok(Outcome::Negative)
        }
        Err(SubentityError::BudgetExhausted { budget }) => {
            r.verdict(
                Verdict::new(name, false, format!("budget of {budget} nodes exhausted"))
                    .with_detail(json!({ "witness": Value::Null, "budget": budget })),
            );
            Ok(Outcome::BudgetExhausted)
        }
        Err(e) => Err(e.into()),
    }
}

fn subentity_search(
    part_file: &Path,
    whole_file: &Path,
    budget: u64,
    tol: &Tolerances,
) -> Outcomes {
    let part_doc = load(part_file, tol)?;
    let whole_doc = load(whole_file, tol)?;
    let part = sps_from_doc(&part_doc.doc)?;
    let whole = sps_from_doc(&whole_doc.doc)?;
    let mut r = start("subentity-search", &[&part_doc, &whole_doc]);
    for c in SUBENTITY_CONVENTIONS {
        r.convention(c);
    }
    r.set("budget", json!(budget));
    let outcome = search_verdict(&mut r, "witness", &part, &whole, budget)?;
    Ok((r, outcome))
}

/// Element labels with input projections named after their matrices.
fn element_names(q: &QuantumSps, input_names: &[String]) -> Vec<String> {
    let mut names = q.sps.lattice().labels().to_vec();
    for (name, &e) in input_names.iter().zip(&q.input_properties) {
        names[e] = name.clone();
    }
    names
}

fn axiom_summary(sps: &StatePropertySystem) -> Value {
    Value::Array(
        run_battery(sps)
            .iter()
            .map(|v| json!({ "axiom": v.axiom.name(), "passed": v.passed }))
            .collect(),
    )
}

fn subentity_quantum(file: &Path, budget: u64, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let base = loaded
        .path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let ops = compound_operators(&loaded.doc, &base, tol)?;
    let (d_a, d_b) = ops.dims;
    let model =
        CompletedQuantumModel::new(d_a, d_b, ops.whole.clone(), ops.part_properties.clone())?;
    let mut r = Report::new(
        "subentity-quantum",
        digest(
            std::iter::once(loaded.bytes.as_slice()).chain(ops.included.iter().map(Vec::as_slice)),
        ),
    );
    r.set("models", json!([{ "name": loaded.doc.meta.name, "kind": "compound", "description": loaded.doc.meta.description }]));
    for c in SUBENTITY_CONVENTIONS {
        r.convention(c);
    }
    r.set("dims", json!([d_a, d_b]));
    r.set("budget", json!(budget));
    let covariance = canonical_witness_check(&model, tol)?;
    r.set("trace_covariance", json!(covariance));

    let (part, whole, outcome) = match &ops.part_states {
        None => {
            let completed = build_completed_model(&model, tol)?;
            let (part, whole) = (completed.part, completed.whole);
            let report = verify_witness(&part.sps, &whole.sps, &completed.witness)?;
            let summary = match &report.violation {
                None => "partial trace and P ↦ P⊗I satisfy every clause".to_string(),
                Some(v) => violation_text(v, &part.sps, &whole.sps),
            };
            r.verdict(
                Verdict::new("canonical-witness", report.holds(), summary).with_detail(
                    json!({ "witness": witness_json(&completed.witness, &part.sps, &whole.sps) }),
                ),
            );
            let search = search_verdict(&mut r, "search", &part.sps, &whole.sps, budget)?;
            let outcome = match search {
                Outcome::BudgetExhausted => Outcome::BudgetExhausted,
                _ => Outcome::of(r.all_passed()),
            };
            let reduced: Vec<Value> = completed
                .part_states
                .iter()
                .map(|w| matrix(w.matrix()))
                .collect();
            r.set("part_states", Value::Array(reduced));
            (part, whole, outcome)
        }
        Some(states) => {
            let (part, whole) =
                quantum_pair(d_a, d_b, &ops.whole, states, &ops.part_properties, tol)?;
            let outcome = search_verdict(&mut r, "search", &part.sps, &whole.sps, budget)?;
            r.set("part_states", json!(ops.part_state_names));
            (part, whole, outcome)
        }
    };
    let part_names = element_names(&part, &ops.part_property_names);
    let embedded: Vec<String> = part_names.iter().map(|n| format!("{n}⊗I")).collect();
    let whole_names = element_names(&whole, &embedded);
    r.set("whole_states", json!(ops.whole_names));
    r.set("part_elements", json!(part_names));
    r.set("whole_elements", json!(whole_names));
    r.set("part_axioms", axiom_summary(&part.sps));
    r.set("whole_axioms", axiom_summary(&whole.sps));
    r.line(format!("part lattice {}", braces(&part_names)));
    r.line(format!("whole lattice {}", braces(&whole_names)));
    r.line(format!(
        "trace covariance {}",
        if covariance { "holds" } else { "fails" }
    ));
    Ok((r, outcome))
}

// ---- lecce-build ----

fn issue_json(w: &LabWorld, issue: &WorldIssue) -> Value {
    let lab = |j: usize| w.labs.get(j).map_or(String::new(), |l| l.id.clone());
    match issue {
        WorldIssue::PreparerOutOfRange {
            lab: j,
            object,
            preparer,
        } => {
            json!({ "kind": "preparer-out-of-range", "lab": lab(*j), "object": object, "preparer": preparer })
        }
        WorldIssue::OutcomeCount {
            lab: j,
            object,
            expected,
            found,
        } => {
            json!({ "kind": "outcome-count", "lab": lab(*j), "object": object, "expected": expected, "found": found })
        }
        WorldIssue::IdealFlagCount { expected, found } => {
            json!({ "kind": "ideal-flag-count", "expected": expected, "found": found })
        }
        WorldIssue::EmptyPreparer { lab: j, preparer } => {
            json!({ "kind": "empty-preparer", "lab": lab(*j), "preparer": w.preparers.get(*preparer) })
        }
        WorldIssue::FrequencyMismatch {
            preparer,
            register,
            lab1,
            lab2,
            first,
            second,
        } => json!({
            "kind": "frequency-mismatch",
            "preparer": w.preparers[*preparer],
            "register": w.registers[*register],
            "labs": [lab(*lab1), lab(*lab2)],
            "frequencies": [format!("{}/{}", first.num, first.den), format!("{}/{}", second.num, second.den)],
        }),
    }
}

fn lecce_build(file: &Path, tol: &Tolerances) -> Outcomes {
    let loaded = load(file, tol)?;
    let Body::LabWorld(w) = &loaded.doc.body else {
        return Err(BuildError::WrongKind {
            expected: "labworld",
            found: loaded.doc.kind(),
        }
        .into());
    };
    let mut r = start("lecce-build", &[&loaded]);
    r.convention("frequencies are exact ratios over each lab's finite extensions");
    let validation = validate_world(w);
    let issues: Vec<Value> = validation.issues.iter().map(|i| issue_json(w, i)).collect();
    r.verdict(
        Verdict::new(
            "world-valid",
            validation.is_valid(),
            format!("{} issues", issues.len()),
        )
        .with_detail(Value::Array(issues)),
    );
    if !validation.is_valid() {
        return Ok((r, Outcome::Negative));
    }
    let b = build_lecce_sps(w)?;
    let state_names: Vec<String> = b.states.iter().map(|s| state_label(w, s)).collect();
    let property_names: Vec<String> = b
        .effects
        .properties
        .iter()
        .map(|p| {
            p.members
                .iter()
                .map(|&m| w.registers[m].as_str())
                .collect::<Vec<_>>()
                .join("=")
        })
        .collect();
    let element_names: Vec<String> = match &b.lattice {
        Some(l) => l.labels().to_vec(),
        None => (0..b.elements.len()).map(|i| format!("e{i}")).collect(),
    };
    let partition = check_partition_property(w, &b.states);
    r.verdict(Verdict::new(
        "lattice",
        b.lattice.is_some(),
        b.lattice_error
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default(),
    ));
    r.verdict(Verdict::new(
        "actuality-conditions",
        b.sps.is_some(),
        format!("{} violations", b.violations.len()),
    ));
    r.verdict(
        Verdict::new(
            "partition",
            partition.holds(),
            format!(
                "{} overlaps, {} multiply prepared, {} orphans",
                partition.overlaps.len(),
                partition.multiply_prepared.len(),
                partition.orphans.len()
            ),
        )
        .with_detail(json!({
            "overlaps": partition.overlaps.iter().map(|(j, o, s)| json!([w.labs[*j].id, o, labels_of(s, |x| state_names[x].clone())])).collect::<Vec<_>>(),
            "multiply_prepared": partition.multiply_prepared.iter().map(|(j, o, p)| json!([w.labs[*j].id, o, labels_of(p, |x| w.preparers[x].clone())])).collect::<Vec<_>>(),
            "orphans": partition.orphans.iter().map(|(j, o)| json!([w.labs[*j].id, o])).collect::<Vec<_>>(),
        })),
    );
    let lab_ids: Vec<&str> = w.labs.iter().map(|l| l.id.as_str()).collect();
    let ext = |e: &Vec<Vec<String>>| -> Value {
        Value::Object(
            lab_ids
                .iter()
                .zip(e)
                .map(|(id, x)| (id.to_string(), json!(x)))
                .collect(),
        )
    };
    r.set(
        "states",
        Value::Array(
            b.states
                .iter()
                .zip(&b.domains.certainly_true)
                .map(|(s, t)| {
                    json!({
                        "name": state_names[s.id],
                        "extensions": ext(&s.extensions),
                        "certainly_true": labels_of(t, |x| property_names[x].clone()),
                    })
                })
                .collect(),
        ),
    );
    r.set(
        "properties",
        Value::Array(
            b.effects
                .properties
                .iter()
                .zip(&b.domains.certainly_yes)
                .map(|(p, y)| {
                    json!({
                        "name": property_names[p.id],
                        "extensions": ext(&p.extensions),
                        "certainly_yes": labels_of(y, |x| state_names[x].clone()),
                    })
                })
                .collect(),
        ),
    );
    r.set(
        "frequency_only_pairs",
        json!(b
            .effects
            .frequency_only_pairs
            .iter()
            .map(|&(a, c)| [&w.registers[a], &w.registers[c]])
            .collect::<Vec<_>>()),
    );
    r.set(
        "elements",
        Value::Array(
            b.elements
                .iter()
                .zip(&element_names)
                .map(|(e, n)| {
                    json!({ "name": n, "yes_states": labels_of(&e.yes_states, |x| state_names[x].clone()), "synthetic": e.synthetic })
                })
                .collect(),
        ),
    );
    if let Some(l) = &b.lattice {
        let order: Vec<Value> = l
            .cover_pairs()
            .iter()
            .map(|&(lo, hi)| json!([l.label(lo), l.label(hi)]))
            .collect();
        r.set("covers", Value::Array(order));
    }
    r.line(format!("states {}", braces(&state_names)));
    r.line(format!("properties {}", braces(&property_names)));
    r.line(format!("lattice {}", braces(&element_names)));
    let outcome = Outcome::of(r.all_passed());
    Ok((r, outcome))
}
