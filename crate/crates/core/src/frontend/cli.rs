//! The `wdeps` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::epsilon::{epsilon_three_var, epsilon_wd};
use crate::geometry::{
    component_of, extended_quotient, rep_of_component, symmetry_group, unramified_epsilon,
};
use crate::model::gauss::{self, GaussRat};
use crate::model::{EpsilonFactor, FieldData, Symbol};
use crate::oracle;

use super::{emit, parse, Document};

#[derive(Debug, Parser)]
#[command(
    name = "wdeps",
    version,
    about = "Exact epsilon factors of Weil-Deligne representations"
)]
struct Cli {
    #[command(flatten)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Format {
    /// JSON output (default)
    #[arg(long, global = true)]
    json: bool,
    /// Aligned plain-text table
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Epsilon factor as constant × torus character
    Compute { file: PathBuf },
    /// Exponents of the torus character only
    Beta { file: PathBuf },
    /// Component descriptor and symmetry generators
    Component { file: PathBuf },
    /// Components of T//W for GL_n with their unramified epsilon factors
    Partitions { n: u32 },
    /// Exact evaluation at a torus point
    Eval {
        file: PathBuf,
        /// Twist coordinate values `var=z` with z = q^{-s}
        #[arg(long = "at", value_name = "VAR=VALUE", num_args = 1.., required = true)]
        at: Vec<String>,
        /// Values for opaque symbols, e.g. `eps(V)=1/2+i`
        #[arg(long = "eps", value_name = "SYMBOL=VALUE", num_args = 1..)]
        eps: Vec<String>,
    },
    /// Randomized comparison against the explicit matrix model
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Values for opaque eps symbols; unset ones are drawn at random
        #[arg(long = "eps", value_name = "SYMBOL=VALUE", num_args = 1..)]
        eps: Vec<String>,
    },
    /// Three-variable form on the extended torus (z_s, z_1, …, z_m)
    ThreeVar { file: PathBuf },
}

/// Exit status and a message for stderr.
struct Failure(i32, String);

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure(1, msg.into())
    }
}

/// Output of one subcommand: JSON plus an equivalent table.
struct Report {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn load(path: &PathBuf) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::input(format!("{}:{e}", path.display())))
}

fn parse_assignments(items: &[String], what: &str) -> Result<Vec<(String, GaussRat)>, Failure> {
    items
        .iter()
        .map(|item| {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Failure::input(format!("{what} `{item}` must look like NAME=VALUE"))
            })?;
            let value = gauss::parse(value)
                .ok_or_else(|| Failure::input(format!("{what} `{item}`: malformed number")))?;
            Ok((key.to_string(), value))
        })
        .collect()
}

fn symbol_values(items: &[String]) -> Result<BTreeMap<Symbol, GaussRat>, Failure> {
    Ok(parse_assignments(items, "--eps")?
        .into_iter()
        .map(|(k, v)| (Symbol::new(k), v))
        .collect())
}

fn epsilon_row(e: &EpsilonFactor) -> Vec<String> {
    vec![
        e.constant.to_string(),
        e.beta()
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        e.to_string(),
    ]
}

fn epsilon_report(e: &EpsilonFactor) -> Report {
    Report {
        json: emit::epsilon(e),
        header: vec!["constant".into(), "beta".into(), "epsilon".into()],
        rows: vec![epsilon_row(e)],
    }
}

fn execute(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Compute { file } => {
            let doc = load(file)?;
            Ok(epsilon_report(&epsilon_wd(&doc.rep, &doc.field)))
        }
        Command::ThreeVar { file } => {
            let doc = load(file)?;
            Ok(epsilon_report(&epsilon_three_var(&doc.rep, &doc.field)))
        }
        Command::Beta { file } => {
            let doc = load(file)?;
            let chi = crate::epsilon::character(&doc.rep, &doc.field);
            Ok(Report {
                json: emit::character(&chi),
                header: vec!["variable".into(), "beta".into()],
                rows: doc
                    .var_names
                    .iter()
                    .zip(chi.exponents())
                    .map(|(v, b)| vec![v.clone(), b.to_string()])
                    .collect(),
            })
        }
        Command::Component { file } => {
            let doc = load(file)?;
            let c = component_of(&doc.rep);
            let gens = symmetry_group(&doc.rep);
            let mut json = emit::component(&c);
            json["generators"] = emit::permutations(&gens);
            let labels = c.block_labels.clone();
            Ok(Report {
                json,
                header: vec!["t".into(), "r".into(), "block".into()],
                rows: c
                    .parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let label = labels.as_ref().map_or("triv".to_string(), |l| l[i].clone());
                        vec![p.t.to_string(), p.r.to_string(), label]
                    })
                    .collect(),
            })
        }
        Command::Partitions { n } => {
            if *n == 0 {
                return Err(Failure::input("n must be at least 1"));
            }
            // q only enters through the symbolic q-exponent
            let field = FieldData::new(2, 0).expect("valid field");
            let mut entries = Vec::new();
            let mut rows = Vec::new();
            for c in extended_quotient(*n) {
                let dims: Vec<u32> = rep_of_component(&c)
                    .map_err(|e| Failure::input(e.to_string()))?
                    .summands()
                    .iter()
                    .map(|s| s.sp_dim)
                    .collect();
                let e =
                    unramified_epsilon(&dims, &field).map_err(|e| Failure::input(e.to_string()))?;
                let mut partition = dims.clone();
                partition.sort_unstable_by(|a, b| b.cmp(a));
                rows.push(vec![
                    partition
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join("+"),
                    c.variety(),
                    e.to_string(),
                ]);
                entries.push(json!({
                    "partition": partition,
                    "component": emit::component(&c),
                    "epsilon": emit::epsilon(&e),
                }));
            }
            Ok(Report {
                json: json!({ "n": n, "components": entries }),
                header: vec!["partition".into(), "component".into(), "epsilon".into()],
                rows,
            })
        }
        Command::Eval { file, at, eps } => {
            let doc = load(file)?;
            let mut point: Vec<Option<GaussRat>> = vec![None; doc.rep.rank()];
            for (name, value) in parse_assignments(at, "--at")? {
                let j = doc
                    .var_index(&name)
                    .ok_or_else(|| Failure::input(format!("unknown variable {name}")))?;
                point[j] = Some(value);
            }
            let point: Vec<GaussRat> = point
                .into_iter()
                .zip(&doc.var_names)
                .map(|(v, name)| {
                    v.ok_or_else(|| Failure::input(format!("missing --at {name}=VALUE")))
                })
                .collect::<Result<_, _>>()?;
            let mut assignment = doc.rep.known_values();
            assignment.extend(symbol_values(eps)?);
            let e = epsilon_wd(&doc.rep, &doc.field);
            let value = e
                .eval_exact(&doc.field.q_rational(), &assignment, &point)
                .map_err(|err| Failure::input(err.to_string()))?;
            Ok(Report {
                json: json!({ "epsilon": emit::epsilon(&e), "value": emit::number(&value) }),
                header: vec!["epsilon".into(), "value".into()],
                rows: vec![vec![e.to_string(), gauss::format(&value)]],
            })
        }
        Command::Oracle {
            file,
            seed,
            samples,
            eps,
        } => {
            let doc = load(file)?;
            let eps = symbol_values(eps)?;
            let report = oracle::sweep(&doc.rep, &doc.field, &eps, *seed, *samples)
                .map_err(|e| Failure::input(e.to_string()))?;
            let rows = vec![vec![
                report.seed.to_string(),
                report.samples.to_string(),
                report.agreed.to_string(),
            ]];
            let json = emit::sweep(&report);
            if !report.all_agree() {
                let first = &report.failures[0];
                return Err(Failure(
                    2,
                    format!(
                        "oracle mismatch at sample {}: {}",
                        first.sample_index,
                        emit::to_text(&json)
                    ),
                ));
            }
            Ok(Report {
                json,
                header: vec!["seed".into(), "samples".into(), "agreed".into()],
                rows,
            })
        }
    }
}

fn render_table(header: &[String], rows: &[Vec<String>], color: bool) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([header[i].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = String::new();
    let head = line(header);
    if color {
        out.push_str(&format!("\x1b[1m{head}\x1b[0m\n"));
    } else {
        out.push_str(&head);
        out.push('\n');
    }
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

/// Run the CLI; returns the process exit code. `color` enables bold
/// table headers.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 1;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let text = if cli.format.table {
                render_table(&report.header, &report.rows, color)
            } else {
                format!("{}\n", emit::to_text(&report.json))
            };
            match stdout.write_all(text.as_bytes()) {
                Ok(()) => 0,
                Err(_) => 1,
            }
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}
