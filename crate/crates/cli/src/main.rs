use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use liesmall::catalog::{self, ClassLabel};
use liesmall::classify::{self, Budgets, Classifier, ClassifyError, IsoWitness};
use liesmall::field::Field;
use liesmall::io::{self, read_algebra};
use liesmall::liealg::LieAlgebra;
use liesmall::linalg::Matrix;

#[derive(Parser)]
#[command(name = "liesmall", version, about = "Nonsolvable Lie algebras of dimension at most 6 over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Monic irreducible modulus, ascending coefficients, e.g. `1,1,1`.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

#[derive(Subcommand)]
enum Command {
    /// List the classes of one dimension with the expected count.
    List {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        dim: usize,
    },
    /// Write the algebra of a class label.
    Build {
        #[arg(long)]
        label: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Print the class label of an algebra file (`-` reads stdin).
    Identify {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Print the fingerprint of an algebra file as JSON.
    Invariants {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Write the derivation algebra of an algebra file.
    Derivations {
        #[arg(default_value = "-")]
        file: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Build, check and cross-identify every class over a field.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Decide whether two algebra files are isomorphic.
    Isotest {
        file1: String,
        file2: String,
        /// Search node budget.
        #[arg(long, default_value_t = classify::DEFAULT_ISO_BUDGET)]
        budget: u64,
    },
}

enum Failure {
    /// Bad flag values: exit code 2.
    Usage(String),
    /// Invalid input or a failed check: exit code 1.
    Domain(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

impl FieldArgs {
    fn field(&self) -> Result<Field, Failure> {
        Field::new(self.p, self.m, self.modulus.as_deref()).map_err(usage)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    match writeln!(out, "{text}") {
        // The reader went away, e.g. `| head`.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => r.map_err(domain),
    }
}

fn write_algebra(out: &mut impl Write, l: &LieAlgebra, path: Option<&str>) -> Result<(), Failure> {
    let text = io::to_json(l);
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| domain(format!("{p}: {e}"))),
        None => emit(out, &text),
    }
}

fn matrix_rows(m: &Matrix) -> Vec<String> {
    let f = m.field();
    (0..m.rows())
        .map(|r| {
            let row: Vec<String> = m.row(r).iter().map(|&a| f.format(a)).collect();
            format!("[{}]", row.join(", "))
        })
        .collect()
}

fn run(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::List { field, dim } => {
            let f = field.field()?;
            let labels = classify::enumerate_classes(&f, dim).map_err(usage)?;
            let expected = classify::expected_count(f.p(), f.q(), dim).map_err(usage)?;
            let mut constructible = 0;
            for label in &labels {
                let status = match catalog::build(label, &f) {
                    Ok(_) => {
                        constructible += 1;
                        String::new()
                    }
                    Err(e) => format!("  # not constructible: {e}"),
                };
                emit(out, &format!("{}{status}", label.format(&f)))?;
            }
            let verdict = if labels.len() == expected && constructible == expected { "MATCH" } else { "MISMATCH" };
            emit(out, &format!("expected {expected} listed {} constructible {constructible} {verdict}", labels.len()))
        }
        Command::Build { label, field, output } => {
            let f = field.field()?;
            let label = ClassLabel::parse(&label, &f).map_err(usage)?;
            let l = catalog::build(&label, &f).map_err(domain)?.with_name(label.format(&f));
            write_algebra(out, &l, output.as_deref())
        }
        Command::Identify { file } => {
            let l = read_algebra(&file).map_err(domain)?;
            let c = Classifier::with_budgets(l.field(), Budgets::from_env());
            match c.identify(&l) {
                Ok(label) => emit(out, &label.format(l.field())),
                Err(ClassifyError::NoMatch(fp)) => {
                    emit(out, "no catalog class matches; fingerprint:")?;
                    emit(out, &fp.to_json_pretty())?;
                    Err(domain("unidentified"))
                }
                Err(e) => Err(domain(e)),
            }
        }
        Command::Invariants { file } => {
            let l = read_algebra(&file).map_err(domain)?;
            let c = Classifier::with_budgets(l.field(), Budgets::from_env());
            let fp = c.fingerprint(&l).map_err(domain)?;
            emit(out, &fp.to_json())
        }
        Command::Derivations { file, output } => {
            let l = read_algebra(&file).map_err(domain)?;
            let der = l.derivation_algebra().map_err(domain)?;
            let mut alg = der.algebra.clone();
            if let Some(name) = l.name() {
                alg = alg.with_name(format!("Der({name})"));
            }
            write_algebra(out, &alg, output.as_deref())?;
            let line = format!("dimension {}", der.dim());
            if output.is_some() {
                emit(out, &line)
            } else {
                // Keep stdout a valid algebra file.
                eprintln!("{line}");
                Ok(())
            }
        }
        Command::Verify { field, dim } => {
            let f = field.field()?;
            let dims: Vec<usize> = match dim {
                Some(d) if (3..=6).contains(&d) => vec![d],
                Some(d) => return Err(usage(format!("dimension {d} is outside 3..=6"))),
                None => (3..=6).collect(),
            };
            let c = Classifier::with_budgets(&f, Budgets::from_env());
            emit(out, "dim  expected  listed  built  distinct  collisions  roundtrip_failures  status")?;
            let mut details = Vec::new();
            let mut all_ok = true;
            for d in dims {
                let a = classify::audit(&c, d).map_err(domain)?;
                let status = if a.passed() { "PASS" } else { "FAIL" };
                all_ok &= a.passed();
                emit(
                    out,
                    &format!(
                        "{:<3}  {:>8}  {:>6}  {:>5}  {:>8}  {:>10}  {:>18}  {status}",
                        d,
                        a.expected,
                        a.listed,
                        a.built,
                        a.distinct(),
                        a.collisions.len(),
                        a.roundtrip_failures.len()
                    ),
                )?;
                details.extend(a.build_failures.iter().map(|(l, e)| format!("dim {d}: {l} not constructible: {e}")));
                details.extend(a.profile_mismatches.iter().map(|m| format!("dim {d}: profile {m}")));
                details.extend(
                    a.collisions.iter().map(|(x, y, v)| format!("dim {d}: {x} and {y} share a fingerprint: {v}")),
                );
                details.extend(a.roundtrip_failures.iter().map(|(l, e)| format!("dim {d}: {l} identified as {e}")));
            }
            for line in &details {
                emit(out, line)?;
            }
            if all_ok {
                Ok(())
            } else {
                Err(domain("verification failed"))
            }
        }
        Command::Isotest { file1, file2, budget } => {
            let a = read_algebra(&file1).map_err(domain)?;
            let b = read_algebra(&file2).map_err(domain)?;
            if a.field() != b.field() {
                return Err(domain("the algebras are defined over different fields"));
            }
            let w = classify::iso_oracle(&a, &b, budget).map_err(domain)?;
            emit(out, w.verdict())?;
            if let IsoWitness::Isomorphic(m) = &w {
                emit(out, "witness (column i is the image of basis vector i):")?;
                for row in matrix_rows(m) {
                    emit(out, &row)?;
                }
            }
            Ok(())
        }
    }
}
