use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use mvlam_core::belnap::{compile_majority_jobs, merge_analysis, MajorityOptions};
use mvlam_core::bench::{self, Claims};
use mvlam_core::circuit::{
    add_mod_table, build_add_mod, build_binary, build_dnf, build_hetero, build_unary, BuildError,
    BuiltTerm,
};
use mvlam_core::inductive::{build_hybrid, build_inductive};
use mvlam_core::optimize::{build_binary_opt, build_unary_opt};
use mvlam_core::reduce::{decode_value, enumerate_normal_inhabitants, Decoded, INHABITANT_GUARD};
use mvlam_core::syntax::{parse_term, print_term, Term};
use mvlam_core::table::FunctionTable;
use mvlam_core::types::{check, parse_type, Certificate};
use mvlam_core::verify::{verify_term, with_big_stack, with_pool};

#[derive(Parser)]
#[command(
    name = "mvlam",
    version,
    about = "Multiple-valued logic functions as linear lambda combinators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a combinator from a truth table.
    Build {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum, default_value = "circuit-dnf")]
        style: Style,
        #[arg(long, value_enum, default_value = "none")]
        opt: Opt,
        #[arg(long)]
        term_out: PathBuf,
        #[arg(long)]
        cert_out: PathBuf,
    },
    /// Type-check a term against a certificate.
    Check {
        #[arg(long)]
        term: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long = "type")]
        ty: String,
        /// Also report whether every instantiation is at a type variable.
        #[arg(long)]
        mono: bool,
    },
    /// Evaluate a term on every input of a table.
    Verify {
        #[arg(long)]
        term: PathBuf,
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Measure step and constant counts next to the claimed figures.
    Bench {
        scenario: Scenario,
        /// Radix for const-vs-i / addmod (const-vs-i defaults to 2..=6).
        #[arg(long)]
        radix: Option<usize>,
        /// Bundled table name or table file for matrix-opt.
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the normal inhabitants of T_r.
    Inhabitants {
        #[arg(long)]
        radix: usize,
    },
    /// The four-valued majority case study.
    Belnap {
        #[command(subcommand)]
        cmd: BelnapCmd,
    },
}

#[derive(Subcommand)]
enum BelnapCmd {
    /// Compile the majority function and verify it on all 256 inputs.
    Majority {
        #[arg(long)]
        merge: bool,
        #[arg(long)]
        dontcare: bool,
        #[arg(long)]
        row_opt: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        term_out: Option<PathBuf>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Survey which decomposition pairs can be merged.
    Merges,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Style {
    CircuitDnf,
    Inductive,
    Binary,
    Unary,
    Hybrid,
    Hetero,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Opt {
    None,
    Runs,
    Addmod,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scenario {
    #[value(name = "const-vs-i", alias = "const-vs-I")]
    ConstVsI,
    MatrixOpt,
    Addmod,
    Majority,
}

/// Exit 1: a verification failed. Exit 2: bad usage or unreadable input.
enum Failure {
    Verify(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &str) -> Outcome {
    fs::write(path, data).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<FunctionTable, Failure> {
    FunctionTable::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(v: &impl Serialize) {
    println!("{}", serde_json::to_string(v).expect("report serializes"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_big_stack(move || run(cli.cmd)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(m)) => {
            eprintln!("FAIL: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Build {
            table,
            style,
            opt,
            term_out,
            cert_out,
        } => cmd_build(&table, style, opt, &term_out, &cert_out),
        Cmd::Check {
            term,
            cert,
            ty,
            mono,
        } => cmd_check(&term, &cert, &ty, mono),
        Cmd::Verify { term, table, jobs } => cmd_verify(&term, &table, jobs),
        Cmd::Bench {
            scenario,
            radix,
            table,
            jobs,
            out,
        } => cmd_bench(scenario, radix, table.as_deref(), jobs, out.as_deref()),
        Cmd::Inhabitants { radix } => cmd_inhabitants(radix),
        Cmd::Belnap { cmd } => match cmd {
            BelnapCmd::Majority {
                merge,
                dontcare,
                row_opt,
                jobs,
                term_out,
                cert_out,
            } => cmd_majority(
                MajorityOptions {
                    merge,
                    dontcare,
                    row_opt,
                },
                jobs,
                term_out.as_deref(),
                cert_out.as_deref(),
            ),
            BelnapCmd::Merges => {
                for (i, j) in [(1, 2), (3, 4), (5, 6), (5, 7), (6, 7)] {
                    emit(&json!({"i": i, "j": j, "analysis": merge_analysis(i, j)}));
                }
                Ok(())
            }
        },
    }
}

fn select(table: &FunctionTable, style: Style, opt: Opt) -> Result<BuiltTerm, BuildError> {
    match (style, opt) {
        (_, Opt::Addmod) => {
            let r = table.output();
            if table.inputs() != [r, r] || *table != add_mod_table(r)? {
                return Err(BuildError::Arity(format!(
                    "--opt addmod needs the addition-mod-{r} table"
                )));
            }
            build_add_mod(r)
        }
        (Style::Unary, Opt::Runs) => build_unary_opt(table),
        (Style::Unary, Opt::None) => build_unary(table),
        (Style::Binary, Opt::Runs) => build_binary_opt(table).map(|(b, _)| b),
        (Style::Binary, Opt::None) => build_binary(table),
        (_, Opt::Runs) => Err(BuildError::Arity(
            "--opt runs applies to the unary and binary styles".into(),
        )),
        (Style::CircuitDnf, _) => {
            let r = table.output();
            if table.inputs().iter().all(|&x| x == r) {
                build_dnf(table)
            } else {
                build_hetero(table)
            }
        }
        (Style::Hetero, _) => build_hetero(table),
        (Style::Inductive, _) => build_inductive(table),
        (Style::Hybrid, _) => build_hybrid(table),
    }
}

fn cmd_build(table: &Path, style: Style, opt: Opt, term_out: &Path, cert_out: &Path) -> Outcome {
    let t = load_table(table)?;
    let b = select(&t, style, opt).map_err(|e| match e {
        BuildError::SelfCheck(m) => Failure::Verify(m),
        e => usage(e),
    })?;
    write(term_out, &format!("{}\n", print_term(&b.term)))?;
    write(cert_out, &b.certificate.to_json())?;
    emit(&json!({
        "style": b.style,
        "type": b.declared_type.to_string(),
        "node_count": b.stats.node_count,
        "const_count": b.stats.const_count,
        "notes": b.notes,
    }));
    eprintln!(
        "built {} : {} ({} nodes, {} consts)",
        term_out.display(),
        b.declared_type,
        b.stats.node_count,
        b.stats.const_count
    );
    Ok(())
}

fn load_term(path: &Path) -> Result<Term, Failure> {
    parse_term(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_check(term: &Path, cert: &Path, ty: &str, mono: bool) -> Outcome {
    let t = load_term(term)?;
    let c = Certificate::from_json(&read(cert)?)
        .map_err(|e| usage(format!("{}: {e}", cert.display())))?;
    let ty = parse_type(ty).map_err(|e| usage(format!("type: {e}")))?;
    let monomorphic = mono.then(|| c.is_monomorphic());
    match check(&vec![], &t, &c, &ty) {
        Ok(rep) => {
            emit(&json!({"result": "PASS", "monomorphic": monomorphic, "warnings": rep.warnings}));
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            match monomorphic {
                Some(true) => eprintln!("PASS (monomorphic)"),
                Some(false) => eprintln!("PASS (not monomorphic)"),
                None => eprintln!("PASS"),
            }
            Ok(())
        }
        Err(e) => {
            emit(&json!({
                "result": "FAIL",
                "kind": e.kind(),
                "path": e.path().map(|p| p.to_string()),
                "message": e.to_string(),
                "monomorphic": monomorphic,
            }));
            Err(Failure::Verify(e.to_string()))
        }
    }
}

fn cmd_verify(term: &Path, table: &Path, jobs: Option<usize>) -> Outcome {
    let t = load_term(term)?;
    let tab = load_table(table)?;
    let rep = with_pool(jobs, || verify_term(&t, &tab, jobs));
    for m in &rep.mismatches {
        emit(&json!({"mismatch": m}));
    }
    emit(&json!({
        "agreement": rep.agreement,
        "total": rep.total,
        "beta1_total": rep.beta1_total,
        "beta2_total": rep.beta2_total,
    }));
    eprintln!("{}/{} inputs agree", rep.agreement, rep.total);
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "{} of {} inputs disagree",
            rep.total - rep.agreement,
            rep.total
        )))
    }
}

fn write_report(v: &impl Serialize, out: Option<&Path>) -> Outcome {
    emit(v);
    if let Some(p) = out {
        let s = serde_json::to_string_pretty(v).expect("report serializes");
        write(p, &format!("{s}\n"))?;
    }
    Ok(())
}

fn cmd_bench(
    scenario: Scenario,
    radix: Option<usize>,
    table: Option<&str>,
    jobs: Option<usize>,
    out: Option<&Path>,
) -> Outcome {
    let claims = Claims::bundled();
    match scenario {
        Scenario::ConstVsI => {
            let radices: Vec<usize> = match radix {
                Some(r) => vec![r],
                None => (2..=6).collect(),
            };
            let rep = bench::const_vs_identity(&radices, &claims).map_err(usage)?;
            eprintln!(
                "I·v: {} step(s); const·v measured {} (claim {})",
                rep.identity_beta1, rep.measured_formula, rep.claim_formula
            );
            write_report(&rep, out)
        }
        Scenario::MatrixOpt => {
            let name = table.unwrap_or("transpose_gain");
            let t = match bench::bundled_table(name) {
                Some(t) => t,
                None => load_table(Path::new(name))?,
            };
            let rep =
                with_pool(jobs, || bench::matrix_opt(name, &t, &claims, jobs)).map_err(usage)?;
            eprintln!(
                "{}: {} consts → {} ({:?})",
                rep.table, rep.original_consts, rep.optimized_consts, rep.chosen
            );
            write_report(&rep, out)?;
            if rep.agreement != rep.total {
                return Err(Failure::Verify("optimized and plain terms disagree".into()));
            }
            Ok(())
        }
        Scenario::Addmod => {
            let r = radix.unwrap_or(5);
            let rep = with_pool(jobs, || bench::addmod(r, jobs)).map_err(usage)?;
            eprintln!(
                "add mod {r}: {} consts vs {} naive, {}/{} agree",
                rep.add_mod_consts, rep.naive_consts, rep.agreement, rep.total
            );
            write_report(&rep, out)?;
            if rep.agreement != rep.total {
                return Err(Failure::Verify("add_mod disagrees with its table".into()));
            }
            Ok(())
        }
        Scenario::Majority => {
            let rep = with_pool(jobs, || bench::majority(&claims, jobs)).map_err(usage)?;
            for r in &rep.reports {
                eprintln!(
                    "{:?}: {}/{} agree, β₁={} β₂={}",
                    r.options, r.agreement, r.total, r.beta1_total, r.beta2_total
                );
            }
            write_report(&rep, out)?;
            if rep.reports.iter().any(|r| !r.passed()) {
                return Err(Failure::Verify("a majority configuration disagrees".into()));
            }
            Ok(())
        }
    }
}

fn cmd_inhabitants(r: usize) -> Outcome {
    if r == 0 || r > INHABITANT_GUARD {
        return Err(usage(format!(
            "--radix must be in 1..={INHABITANT_GUARD}, got {r}"
        )));
    }
    let all = enumerate_normal_inhabitants(r).map_err(usage)?;
    let mut canonical = 0;
    for t in &all {
        let value = match decode_value(t, r) {
            Decoded::Value(i) => Some(i),
            _ => None,
        };
        canonical += usize::from(value.is_some());
        emit(&json!({"term": print_term(t), "canonical": value.is_some(), "value": value}));
    }
    eprintln!(
        "{} normal inhabitants of T_{r}, {canonical} canonical",
        all.len()
    );
    Ok(())
}

fn cmd_majority(
    options: MajorityOptions,
    jobs: Option<usize>,
    term_out: Option<&Path>,
    cert_out: Option<&Path>,
) -> Outcome {
    let (b, rep) = with_pool(jobs, || compile_majority_jobs(options, jobs))
        .map_err(|e| Failure::Verify(e.to_string()))?;
    if let Some(p) = term_out {
        write(p, &format!("{}\n", print_term(&b.term)))?;
    }
    if let Some(p) = cert_out {
        write(p, &b.certificate.to_json())?;
    }
    emit(&rep);
    eprintln!(
        "majority {:?}: {}/{} agree, {} nodes",
        options, rep.agreement, rep.total, rep.node_count
    );
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(
            "compiled majority disagrees with the oracle".into(),
        ))
    }
}
