//! `tarski`: command-line front end for the type-monoid engine.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tarski_core::corpus::{fixtures, generate_corpus};
use tarski_core::io::{decision_json, measure_json, parse_element, parse_set, SpaceFile, SCHEMA_VERSION};
use tarski_core::lattice_quantity::enumerate_idempotents;
use tarski_core::measures::{is_paradoxical, synthesize_classical_measure, Synthesis};
use tarski_core::statmeas::StatSpace;
use tarski_core::suites::{tarski_suite, theorem1_suite, theorem2_suite, theorem3_suite, SuiteReport};
use tarski_core::symbolic::certificates::{builtin_f2, builtin_galileo, builtin_hotel, CertificateFile};
use tarski_core::type_engine::{Budget, TypeEngine, Verdict};
use tarski_core::Error;

#[derive(Parser)]
#[command(
    name = "tarski",
    version,
    about = "Type monoids, equidecomposability and stationary measures"
)]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Largest multiplicity explored while rewriting (default: derived from the inputs).
    #[arg(long, global = true)]
    coord_cap: Option<u32>,
    /// States explored per search.
    #[arg(long, global = true, default_value_t = Budget::default().max_states)]
    max_states: usize,
    /// Multiplier bound used while closing ω-supports.
    #[arg(long, global = true, default_value_t = Budget::default().omega_k)]
    omega_k: u32,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            coord_cap: self.coord_cap,
            max_states: self.max_states,
            omega_k: self.omega_k,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a space file.
    SpaceCheck { path: PathBuf },
    /// Type of an element such as `0,1` or `2*0+w*3`: representative, scale, comparison with atoms.
    Type { path: PathBuf, element: String },
    /// Decide whether two elements such as `0` and `2` are equidecomposable.
    Equi { path: PathBuf, p: String, q: String },
    /// Decide whether 2[E] ⪯ [E].
    Paradox { path: PathBuf, set: String },
    /// Synthesize a stationary measure normalized on a set.
    Measure { path: PathBuf, set: String },
    /// Lattice of idempotent types.
    Lattice {
        path: PathBuf,
        /// Write the Hasse diagram as DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Verify an equidecomposition certificate: a file, or builtin:galileo, builtin:f2, builtin:hotel.
    CertVerify { certificate: String },
    /// Run a property suite over the fixtures and a generated corpus.
    Corpus {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Generated spaces added to the fixtures.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Tarski,
}

/// Outcome of a command: report plus whether some verdict stayed open.
struct Outcome {
    report: Value,
    unknown: bool,
    failed: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            unknown: false,
            failed: false,
        }
    }
}

fn load(path: &Path) -> Result<Arc<StatSpace>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(SpaceFile::from_json(&text)?.load()?))
}

fn space_check(path: &Path) -> Result<Outcome, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let check = SpaceFile::from_json(&text)?.check()?;
    let summary = check.space.as_ref().map(|s| {
        json!({
            "points": s.space().num_points(),
            "atoms": s.num_atoms(),
            "monoid_order": s.monoid().order(),
            "idempotents": s.monoid().idempotents().len(),
        })
    });
    Ok(Outcome {
        failed: !check.is_valid(),
        unknown: false,
        report: json!({"valid": check.is_valid(), "failures": check.failures, "space": summary}),
    })
}

fn type_cmd(engine: &TypeEngine, expr: &str) -> Result<Outcome, Error> {
    let space = engine.space();
    let t = engine.type_of_element(&parse_element(space, expr)?)?;
    let lattice = enumerate_idempotents(engine)?;
    let scale = lattice.idempotent_of(engine, t.representative())?;
    let mut unknown = false;
    let mut relations = Vec::new();
    for a in 0..engine.num_atoms() {
        let atom = engine.type_of(tarski_core::statmeas::AtomSet::singleton(a))?;
        let below = engine.type_leq(&atom, &t)?.verdict;
        let above = engine.type_leq(&t, &atom)?.verdict;
        unknown |= below == Verdict::Unknown || above == Verdict::Unknown;
        relations.push(json!({
            "atom": space.space().atom_label(a),
            "atom_leq_type": below,
            "type_leq_atom": above,
        }));
    }
    let zero = engine.type_equal(&t, &engine.type_zero())?.verdict;
    unknown |= zero == Verdict::Unknown;
    let rep = t.representative();
    Ok(Outcome {
        unknown,
        failed: false,
        report: json!({
            "element": expr,
            "representative": {"finite": rep.finite(), "omega": rep.omega().iter().collect::<Vec<_>>()},
            "rendered": engine.render(rep),
            "scale": engine.render(&lattice.elements[scale].element(engine.num_atoms())),
            "equals_zero": zero,
            "relations": relations,
        }),
    })
}

fn equi(engine: &TypeEngine, p: &str, q: &str) -> Result<Outcome, Error> {
    let space = engine.space();
    let a = engine.type_of_element(&parse_element(space, p)?)?;
    let b = engine.type_of_element(&parse_element(space, q)?)?;
    let d = engine.type_equal(&a, &b)?;
    let audit = engine.audit_equal(a.representative(), b.representative(), &d);
    Ok(Outcome {
        unknown: d.verdict == Verdict::Unknown,
        failed: audit.is_err(),
        report: json!({
            "p": engine.render(a.representative()),
            "q": engine.render(b.representative()),
            "decision": decision_json(space, &d),
            "witness_verified": audit.is_ok(),
            "audit_error": audit.err(),
        }),
    })
}

fn paradox(engine: &TypeEngine, expr: &str) -> Result<Outcome, Error> {
    let space = engine.space();
    let set = parse_set(space, expr)?;
    let d = is_paradoxical(engine, set)?;
    let e = engine.type_of(set)?;
    let two = engine.type_scale(&e, 2)?;
    let audit = engine.audit_leq(two.representative(), e.representative(), &d);
    Ok(Outcome {
        unknown: d.verdict == Verdict::Unknown,
        failed: audit.is_err(),
        report: json!({
            "set": space.space().set_label(set),
            "paradoxical": d.holds(),
            "decision": decision_json(space, &d),
            "witness_verified": audit.is_ok(),
        }),
    })
}

fn measure(engine: &TypeEngine, expr: &str) -> Result<Outcome, Error> {
    let space = engine.space();
    let set = parse_set(space, expr)?;
    let synth = synthesize_classical_measure(engine, set)?;
    let report = match &synth {
        Synthesis::Found(m) => json!({
            "set": space.space().set_label(set),
            "feasible": true,
            "measure": measure_json(m),
            "invariants_checked": m.check(space).is_ok(),
        }),
        Synthesis::Infeasible(stages) => json!({
            "set": space.space().set_label(set),
            "feasible": false,
            "certificates": stages.iter().map(|(inf, cert)| json!({
                "infinite": inf.iter().collect::<Vec<_>>(),
                "farkas": cert.to_string(),
            })).collect::<Vec<_>>(),
        }),
    };
    Ok(Outcome::ok(report))
}

fn lattice(engine: &TypeEngine, dot: Option<&Path>) -> Result<Outcome, Error> {
    let l = enumerate_idempotents(engine)?;
    let n = engine.num_atoms();
    if let Some(path) = dot {
        fs::write(path, l.to_dot(engine)).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    }
    let elements: Vec<String> = l.elements.iter().map(|e| engine.render(&e.element(n))).collect();
    let covers: Vec<(usize, usize)> = l.order.covers();
    Ok(Outcome {
        unknown: !l.undecided.is_empty(),
        failed: false,
        report: json!({
            "elements": elements,
            "bottom": l.bottom,
            "top": l.top,
            "covers": covers,
            "distributive": tarski_core::lattice_quantity::check_distributive(&l.order).is_ok(),
            "dot": dot.map(|p| p.display().to_string()),
        }),
    })
}

fn cert_verify(which: &str) -> Result<Outcome, Error> {
    let file = match which {
        "builtin:galileo" => builtin_galileo(),
        "builtin:f2" => builtin_f2(),
        "builtin:hotel" => builtin_hotel(),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{path}: {e}")))?;
            CertificateFile::from_json(&text)?
        }
    };
    let cert = file.compile()?;
    let v = cert.verify();
    Ok(Outcome {
        failed: !v.ok,
        unknown: false,
        report: json!({
            "certificate": which,
            "backend": file.backend,
            "verified": v.ok,
            "diagnostics": v.diagnostics,
            "paradox_witness": cert.duplication_witness(),
        }),
    })
}

fn corpus(suite: Suite, seed: u64, count: usize) -> Result<Outcome, Error> {
    let mut spaces = fixtures();
    spaces.extend(generate_corpus(seed, count));
    let report: SuiteReport = match suite {
        Suite::Theorem1 => theorem1_suite(&spaces, seed)?,
        Suite::Theorem2 => theorem2_suite(&spaces, seed, 100)?,
        Suite::Theorem3 => theorem3_suite(&fixtures(), seed, 20)?,
        Suite::Tarski => tarski_suite(&spaces)?,
    };
    eprint!("{}", report.render());
    let unknown = report.unknown_decisions > 0 || report.checks.iter().any(|c| c.unknown > 0);
    Ok(Outcome {
        failed: !report.passed(),
        unknown,
        report: serde_json::to_value(&report).expect("serializable"),
    })
}

fn run(cli: &Cli) -> Result<(String, Outcome), Error> {
    let engine =
        |path: &Path| -> Result<TypeEngine, Error> { Ok(TypeEngine::with_budget(load(path)?, cli.budget.budget())) };
    Ok(match &cli.command {
        Command::SpaceCheck { path } => ("space-check".into(), space_check(path)?),
        Command::Type { path, element } => ("type".into(), type_cmd(&engine(path)?, element)?),
        Command::Equi { path, p, q } => ("equi".into(), equi(&engine(path)?, p, q)?),
        Command::Paradox { path, set } => ("paradox".into(), paradox(&engine(path)?, set)?),
        Command::Measure { path, set } => ("measure".into(), measure(&engine(path)?, set)?),
        Command::Lattice { path, dot } => ("lattice".into(), lattice(&engine(path)?, dot.as_deref())?),
        Command::CertVerify { certificate } => ("cert-verify".into(), cert_verify(certificate)?),
        Command::Corpus { suite, seed, count } => ("corpus".into(), corpus(*suite, *seed, *count)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let budget = cli.budget.budget();
    let budget_json = json!({
        "coord_cap": budget.coord_cap,
        "max_states": budget.max_states,
        "omega_k": budget.omega_k,
    });
    match run(&cli) {
        Ok((name, outcome)) => {
            let status = if outcome.failed {
                "failed"
            } else if outcome.unknown {
                "unknown"
            } else {
                "ok"
            };
            let out = json!({
                "schema": SCHEMA_VERSION,
                "command": name,
                "args": echo,
                "budget": budget_json,
                "status": status,
                "result": outcome.report,
                "elapsed_ms": start.elapsed().as_millis() as u64,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            if outcome.failed {
                ExitCode::from(1)
            } else if outcome.unknown {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let out = json!({"schema": SCHEMA_VERSION, "args": echo, "status": "error", "error": e.to_string()});
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            ExitCode::from(1)
        }
    }
}
