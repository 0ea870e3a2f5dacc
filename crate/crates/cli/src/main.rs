//! Command-line front end.
//!
//! Every subcommand validates its arguments, computes exactly, and prints a
//! single JSON object (or CSV with `--csv` where tabular output exists) to
//! stdout, or to `--out FILE`. Output is byte-stable for fixed inputs and
//! seeds. Exit codes: 0 on success, 1 when a mathematical check reports a
//! counterexample or a derivation is not found within its depth bound, 2 on
//! malformed input (with a JSON error object on stderr).

use std::collections::BTreeMap;
use std::fmt::Display;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use homtl_core::algebra::{AlgebraElement, FiniteAlgebra};
use homtl_core::cellular::{self, cell_module_over, gram_matrix, radical_dim, verify_cell_chain};
use homtl_core::coeff::{Rational, Specialization};
use homtl_core::diagram::enumerate_diagrams;
use homtl_core::hommod::{check_hom_module, functor_module, ModCheckMode, ModCheckOutcome};
use homtl_core::rewrite::{combine_rule_sets, derive, parse_term, DeriveOutcome, RuleSetName};
use homtl_core::twist::{
    check_hom_assoc, yau_twist_type2, CheckMode, CheckOutcome, HomKind, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(
    name = "homtl",
    about = "Exact diagram algebras with anti-involution",
    version
)]
struct Cli {
    /// Write the output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Emit tabular results as CSV where available
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagram algebra: basis, products, involution
    Tl {
        #[command(subcommand)]
        cmd: TlCmd,
    },
    /// Twisted products and their axioms
    Twist {
        #[command(subcommand)]
        cmd: TwistCmd,
    },
    /// Cell structure: Gram matrices, radicals, simple dimensions, chain
    Cell {
        #[command(subcommand)]
        cmd: CellCmd,
    },
    /// Modules of the twisted algebra
    Hommod {
        #[command(subcommand)]
        cmd: HommodCmd,
    },
    /// Diagrammatic term rewriting
    Rewrite {
        #[command(subcommand)]
        cmd: RewriteCmd,
    },
}

#[derive(Subcommand)]
enum TlCmd {
    /// List the diagram basis on n strands
    Basis { n: usize },
    /// Multiply two generator words (grammar: id, e1*e2*...)
    Mul {
        n: usize,
        left: String,
        right: String,
    },
    /// Apply the mirror involution to a generator word
    Involute { n: usize, word: String },
}

#[derive(Subcommand)]
enum TwistCmd {
    /// Check a twisted-associativity axiom on the twisted algebra
    Check {
        n: usize,
        #[command(flatten)]
        opts: TwistCheckOpts,
    },
    /// Multiply two generator words with the deformed product
    Mul {
        n: usize,
        left: String,
        right: String,
    },
}

#[derive(Args)]
struct TwistCheckOpts {
    /// Axiom to check: homII or homI
    #[arg(long, default_value = "homII")]
    kind: String,
    /// Scan every basis triple (default for small sizes)
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Check this many seeded random triples instead
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for sampled mode
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum CellCmd {
    /// Gram matrix of the invariant form, with determinant
    Gram {
        n: usize,
        d: usize,
        /// Exact specialization of the loop parameter, e.g. 3/2
        #[arg(long)]
        delta: Option<String>,
    },
    /// Nullspace dimension of the Gram matrix at a specialization
    Radical {
        n: usize,
        d: usize,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Dimensions of the simple quotients over the nonzero strata
    Simples {
        n: usize,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Whether every cell module has trivial radical
    Semisimple {
        n: usize,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Verify the two-sided ideal chain
    Chain { n: usize },
}

#[derive(Subcommand)]
enum HommodCmd {
    /// Verify the module axiom on the functor image of a cell module
    Check {
        n: usize,
        d: usize,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Print the functor image of a cell module as action tables
    Functor { n: usize, d: usize },
}

#[derive(Subcommand)]
enum RewriteCmd {
    /// Search for a derivation between two terms
    Derive {
        /// Comma-separated rule families: ASSOC, HOM_I, HOM_II, ANTI_INV, UNIT, WEAK_UNIT
        #[arg(long)]
        rules: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

/// Outcome of a command: payload plus whether a mathematical check failed.
struct Outcome {
    body: String,
    check_failed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap help/version requests are not errors
            if matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            return usage_error(err.to_string());
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let emitted = match &cli.out {
                Some(path) => std::fs::write(path, outcome.body.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{}", outcome.body);
                    Ok(())
                }
            };
            match emitted {
                Ok(()) if outcome.check_failed => ExitCode::from(1),
                Ok(()) => ExitCode::SUCCESS,
                Err(msg) => usage_error(msg),
            }
        }
        Err(msg) => usage_error(msg),
    }
}

fn usage_error(msg: String) -> ExitCode {
    let err = json!({ "error": msg.trim() });
    eprintln!("{err}");
    ExitCode::from(2)
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Tl { cmd } => run_tl(cmd),
        Command::Twist { cmd } => run_twist(cmd),
        Command::Cell { cmd } => run_cell(cmd, cli.csv),
        Command::Hommod { cmd } => run_hommod(cmd),
        Command::Rewrite { cmd } => run_rewrite(cmd),
    }
}

fn fail<E: Display>(e: E) -> String {
    e.to_string()
}

fn json_outcome(value: Value, check_failed: bool) -> Outcome {
    Outcome {
        body: format!("{value}\n"),
        check_failed,
    }
}

fn parse_delta(delta: &Option<String>) -> Result<Specialization, String> {
    match delta {
        None => Ok(Specialization::Generic),
        Some(text) => Ok(Specialization::At(Rational::from_str(text)?)),
    }
}

fn delta_json(spec: &Specialization) -> Value {
    match spec {
        Specialization::Generic => Value::String("generic".into()),
        Specialization::At(x) => Value::String(x.to_string()),
    }
}

fn element_json(e: &AlgebraElement) -> Value {
    let map: BTreeMap<String, String> = e
        .terms()
        .map(|(i, c)| (i.to_string(), c.to_string()))
        .collect();
    json!(map)
}

fn run_tl(cmd: &TlCmd) -> Result<Outcome, String> {
    match cmd {
        TlCmd::Basis { n } => {
            let diagrams = enumerate_diagrams(*n).map_err(fail)?;
            let value = json!({
                "n": n,
                "count": diagrams.len(),
                "diagrams": diagrams,
            });
            Ok(json_outcome(value, false))
        }
        TlCmd::Mul { n, left, right } => {
            let algebra = FiniteAlgebra::temperley_lieb(*n).map_err(fail)?;
            let x = algebra.element_from_word(left).map_err(fail)?;
            let y = algebra.element_from_word(right).map_err(fail)?;
            let product = algebra.multiply(&x, &y);
            Ok(json_outcome(
                json!({ "n": n, "product": element_json(&product) }),
                false,
            ))
        }
        TlCmd::Involute { n, word } => {
            let algebra = FiniteAlgebra::temperley_lieb(*n).map_err(fail)?;
            let x = algebra.element_from_word(word).map_err(fail)?;
            let image = algebra.apply_involution(&x);
            Ok(json_outcome(
                json!({ "n": n, "result": element_json(&image) }),
                false,
            ))
        }
    }
}

fn run_twist(cmd: &TwistCmd) -> Result<Outcome, String> {
    match cmd {
        TwistCmd::Check { n, opts } => {
            let kind = match opts.kind.as_str() {
                "homII" | "homii" | "HOMII" => HomKind::TypeII,
                "homI" | "homi" | "HOMI" => HomKind::TypeI1,
                other => return Err(format!("unknown axiom kind {other:?}")),
            };
            let algebra = FiniteAlgebra::temperley_lieb(*n).map_err(fail)?;
            let twisted = yau_twist_type2(algebra).map_err(fail)?;
            let (mode, mode_fields) = match opts.samples {
                Some(count) => {
                    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
                    (
                        CheckMode::Sampled { count, seed },
                        json!({"samples": count, "seed": seed}),
                    )
                }
                None => (CheckMode::Exhaustive, json!({})),
            };
            let outcome = check_hom_assoc(&twisted, kind, mode);
            let mut value = match &outcome {
                CheckOutcome::Pass { checked } => json!({
                    "axiom": kind.to_string(),
                    "checked": checked,
                    "result": "pass",
                }),
                CheckOutcome::Counterexample { triple, lhs, rhs } => json!({
                    "axiom": kind.to_string(),
                    "result": "counterexample",
                    "triple": [triple.0, triple.1, triple.2],
                    "lhs": element_json(lhs),
                    "rhs": element_json(rhs),
                }),
            };
            if let (Value::Object(base), Value::Object(extra)) = (&mut value, mode_fields) {
                base.extend(extra);
            }
            Ok(json_outcome(value, !outcome.passed()))
        }
        TwistCmd::Mul { n, left, right } => {
            let algebra = FiniteAlgebra::temperley_lieb(*n).map_err(fail)?;
            let twisted = yau_twist_type2(algebra).map_err(fail)?;
            let x = twisted.base().element_from_word(left).map_err(fail)?;
            let y = twisted.base().element_from_word(right).map_err(fail)?;
            let product = twisted.product(&x, &y);
            Ok(json_outcome(
                json!({ "n": n, "product": element_json(&product) }),
                false,
            ))
        }
    }
}

fn run_cell(cmd: &CellCmd, csv: bool) -> Result<Outcome, String> {
    match cmd {
        CellCmd::Gram { n, d, delta } => {
            let spec = parse_delta(delta)?;
            let gram = gram_matrix(*n, *d).map_err(fail)?;
            let m = gram.matrix.rows();
            let poly_rows: Vec<Vec<String>> = (0..m)
                .map(|i| (0..m).map(|j| gram.matrix[(i, j)].to_string()).collect())
                .collect();
            if csv {
                let mut body = String::new();
                for (i, poly_row) in poly_rows.iter().enumerate() {
                    let row: Vec<String> = match &spec {
                        Specialization::Generic => poly_row.clone(),
                        Specialization::At(x) => (0..m)
                            .map(|j| gram.matrix[(i, j)].eval(x).to_string())
                            .collect(),
                    };
                    body.push_str(&row.join(","));
                    body.push('\n');
                }
                return Ok(Outcome {
                    body,
                    check_failed: false,
                });
            }
            let mut value = json!({
                "n": n,
                "d": d,
                "matrix": poly_rows,
                "det": gram.det.to_string(),
            });
            if let Specialization::At(x) = &spec {
                let rows_at: Vec<Vec<String>> = (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| gram.matrix[(i, j)].eval(x).to_string())
                            .collect()
                    })
                    .collect();
                if let Value::Object(base) = &mut value {
                    base.insert("delta".into(), delta_json(&spec));
                    base.insert("matrix_at".into(), json!(rows_at));
                    base.insert("det_at".into(), json!(gram.det.eval(x).to_string()));
                }
            }
            Ok(json_outcome(value, false))
        }
        CellCmd::Radical { n, d, delta } => {
            let spec = parse_delta(delta)?;
            let dim = radical_dim(*n, *d, &spec).map_err(fail)?;
            let value = json!({
                "n": n,
                "d": d,
                "delta": delta_json(&spec),
                "radical_dim": dim,
            });
            Ok(json_outcome(value, false))
        }
        CellCmd::Simples { n, delta } => {
            let spec = parse_delta(delta)?;
            let dims = cellular::simple_dims(*n, &spec).map_err(fail)?;
            let lambda0: Vec<usize> = cellular::lambda_zero(*n, &spec)
                .map_err(fail)?
                .into_iter()
                .collect();
            let dims_json: BTreeMap<String, usize> =
                dims.into_iter().map(|(d, v)| (d.to_string(), v)).collect();
            let value = json!({
                "n": n,
                "delta": delta_json(&spec),
                "lambda0": lambda0,
                "dims": dims_json,
            });
            Ok(json_outcome(value, false))
        }
        CellCmd::Semisimple { n, delta } => {
            let spec = parse_delta(delta)?;
            let semisimple = cellular::is_semisimple(*n, &spec).map_err(fail)?;
            let mut value = json!({
                "n": n,
                "delta": delta_json(&spec),
                "semisimple": semisimple,
            });
            if semisimple {
                let wedderburn = cellular::wedderburn_check(*n, &spec).map_err(fail)?;
                if let Value::Object(base) = &mut value {
                    base.insert("wedderburn".into(), json!(wedderburn));
                }
            }
            Ok(json_outcome(value, false))
        }
        CellCmd::Chain { n } => {
            let report = verify_cell_chain(*n).map_err(fail)?;
            let ideals: Vec<Value> = report
                .ideal_checks
                .iter()
                .map(|(d, ok)| json!([d, ok]))
                .collect();
            let value = json!({
                "n": n,
                "layer_dims": report.layer_dims,
                "ideals": ideals,
                "equivariance": report.equivariance,
                "pass": report.pass,
            });
            Ok(json_outcome(value, !report.pass))
        }
    }
}

fn run_hommod(cmd: &HommodCmd) -> Result<Outcome, String> {
    match cmd {
        HommodCmd::Check { n, d, delta } => {
            let spec = parse_delta(delta)?;
            let algebra = Arc::new(FiniteAlgebra::temperley_lieb(*n).map_err(fail)?);
            let twisted = Arc::new(yau_twist_type2((*algebra).clone()).map_err(fail)?);
            let cell = cell_module_over(&algebra, *d).map_err(fail)?;
            let module = functor_module(&twisted, cell.module(), spec.clone()).map_err(fail)?;
            let outcome = check_hom_module(&module, ModCheckMode::Exhaustive);
            let value = match &outcome {
                ModCheckOutcome::Pass { checked } => json!({
                    "n": n,
                    "d": d,
                    "delta": delta_json(&spec),
                    "checked": checked,
                    "result": "pass",
                }),
                ModCheckOutcome::Counterexample { triple, .. } => json!({
                    "n": n,
                    "d": d,
                    "delta": delta_json(&spec),
                    "result": "counterexample",
                    "triple": [triple.0, triple.1, triple.2],
                }),
            };
            Ok(json_outcome(value, !outcome.passed()))
        }
        HommodCmd::Functor { n, d } => {
            let algebra = Arc::new(FiniteAlgebra::temperley_lieb(*n).map_err(fail)?);
            let twisted = Arc::new(yau_twist_type2((*algebra).clone()).map_err(fail)?);
            let cell = cell_module_over(&algebra, *d).map_err(fail)?;
            let module =
                functor_module(&twisted, cell.module(), Specialization::Generic).map_err(fail)?;
            // action tables: algebra basis index -> module basis index ->
            // sparse image as polynomial strings
            let mut action: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>> =
                BTreeMap::new();
            for a in 0..twisted.dim() {
                let mut per_v = BTreeMap::new();
                for v in 0..module.dim() {
                    let image: BTreeMap<String, String> = module
                        .act_basis(a, v)
                        .iter()
                        .map(|(i, c)| (i.to_string(), c.to_string()))
                        .collect();
                    if !image.is_empty() {
                        per_v.insert(v.to_string(), image);
                    }
                }
                if !per_v.is_empty() {
                    action.insert(a.to_string(), per_v);
                }
            }
            let value = json!({
                "n": n,
                "d": d,
                "dim": module.dim(),
                "alpha": "identity",
                "action": action,
            });
            Ok(json_outcome(value, false))
        }
    }
}

fn run_rewrite(cmd: &RewriteCmd) -> Result<Outcome, String> {
    match cmd {
        RewriteCmd::Derive {
            rules,
            lhs,
            rhs,
            depth,
        } => {
            let names: Vec<RuleSetName> = rules
                .split(',')
                .map(|s| RuleSetName::from_str(s).map_err(fail))
                .collect::<Result<_, _>>()?;
            let rule_list = combine_rule_sets(&names);
            let lhs = parse_term(lhs).map_err(fail)?;
            let rhs = parse_term(rhs).map_err(fail)?;
            let outcome = derive(&lhs, &rhs, &rule_list, *depth).map_err(fail)?;
            let value = match &outcome {
                DeriveOutcome::Proof(steps) => json!({
                    "result": "proof",
                    "depth": depth,
                    "length": steps.len(),
                    "steps": steps,
                }),
                DeriveOutcome::NotFoundWithinDepth { depth } => json!({
                    "result": "not_found_within_depth",
                    "depth": depth,
                }),
            };
            Ok(json_outcome(value, outcome.proof().is_none()))
        }
    }
}
