//! `sptri`: classify triangular subgroups of Sp(2,R) from the command line.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use sptri::canonical::{ma_catalog, ma_reduce, sylvester_reduce, EntryParam, MaId, MaPoint, ParamKind};
use sptri::family::Alpha;
use sptri::parse::{Num, GroupSpec};
use sptri::spclassify::{compare, sp_classify, Comparison, ThmId};
use sptri::triple::{check_cocycle, detect_coboundary, dual, is_class_e};
use sptri::verify::TheoremTable;
use sptri::{
    bruhat_cell, classify_subalgebra, dagger, param_grid, parse_mat4, parse_subalgebra, parse_sym,
    verify_theorem, Error, ParseError, Scalar,
};

use report::Report;

const GOLDEN: &str = include_str!("../data/theorem_table.json");

#[derive(Parser)]
#[command(name = "sptri", version, about = "Triangular subgroups of Sp(2,R) up to conjugation")]
struct Cli {
    /// Comparison tolerance for float-bearing checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Parameter samples per family.
    #[arg(long, global = true, default_value_t = 7)]
    grid: usize,
    /// Line-delimited JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Include witness matrices.
    #[arg(long, global = true)]
    witness: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Label, parameter and conjugator of a group-spec file.
    Classify { spec: PathBuf },
    /// Conjugator between two catalog groups, or why there is none.
    ///
    /// Entries are written `3.v` or `3.v=1/3`; `--gamma`/`--alpha` supply the
    /// parameter for entries given without one.
    Witness {
        a: String,
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Re-derive the complete list and diff it against the pinned table.
    VerifyTheorem {
        /// Print the computed table instead of the report.
        #[arg(long)]
        emit_table: bool,
    },
    /// Final families, or the MA-catalog with `--ma`.
    Catalog {
        #[arg(long)]
        ma: bool,
    },
    /// Weyl element of the double coset containing a 4x4 symplectic matrix.
    BruhatCell { matrix: String },
    /// Cocycle identity and coboundary detection for a group-spec file.
    CheckCocycle { spec: PathBuf },
    /// Spec of the dual group `(Sigma^perp, tH, 0)`.
    Dual { spec: PathBuf },
    /// Inertia and congruence witness of a symmetric 2x2 matrix.
    Sylvester { matrix: String },
    /// Canonical label of a subalgebra given by generators.
    ClassifySubalgebra { spec: PathBuf },
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Input(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InsufficientSamples { .. }
            | Error::PreconditionViolated(_)
            | Error::NotSymplectic
            | Error::NotSymmetric
            | Error::SingularMatrix
            | Error::NotASubalgebra
            | Error::AmbientMismatch(_)
            | Error::InvalidSpan(_) => Failure::Input(e.to_string()),
            other => Failure::Verify(other.to_string()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<sptri::Triple, Failure> {
    let text = read(path)?;
    let spec = GroupSpec::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    spec.to_triple().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn param_value(s: &str, field: &str) -> Result<Num, Failure> {
    serde_json::from_value(Value::String(s.to_string()))
        .map_err(|e| Failure::Input(format!("{field}: {e}")))
}

fn entry(s: &str, gamma: Option<&str>, alpha: Option<&str>) -> Result<MaPoint, Failure> {
    let (id, inline) = match s.split_once('=') {
        Some((i, p)) => (i, Some(p)),
        None => (s, None),
    };
    let id: MaId = id.parse()?;
    let param = match id.param_kind() {
        ParamKind::None => {
            if inline.is_some() {
                return Err(Failure::Input(format!("entry {id} takes no parameter")));
            }
            None
        }
        ParamKind::Gamma => {
            let raw = inline.or(gamma).ok_or_else(|| Failure::Input(format!("entry {id} needs --gamma")))?;
            match param_value(raw, "gamma")? {
                Num::Finite(g) => Some(EntryParam::Gamma(g)),
                Num::Inf => return Err(Failure::Input("gamma must be finite".into())),
            }
        }
        ParamKind::Alpha => {
            let raw = inline.or(alpha).ok_or_else(|| Failure::Input(format!("entry {id} needs --alpha")))?;
            Some(EntryParam::Alpha(match param_value(raw, "alpha")? {
                Num::Finite(a) => Alpha::Finite(a),
                Num::Inf => Alpha::Infinity,
            }))
        }
    };
    Ok(MaPoint::new(id, param)?)
}

fn grid_of(cli: &Cli) -> Result<Vec<Scalar>, Failure> {
    if cli.grid < 3 {
        return Err(Failure::Input(format!("--grid must be at least 3 (got {})", cli.grid)));
    }
    if !(cli.tol >= 0.0) {
        return Err(Failure::Input(format!("--tol must be >= 0 (got {})", cli.tol)));
    }
    Ok(param_grid(cli.grid))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let grid = grid_of(cli)?;
    let tol = cli.tol;
    let mut r;
    match &cli.cmd {
        Cmd::Classify { spec } => {
            r = Report::new(format!("classify {}", spec.display()));
            let t = load_spec(spec)?;
            let c = sp_classify(&t, &grid, tol)?;
            r.set("label", c.label.id.to_string());
            if let Some(p) = &c.label.param {
                let (k, v) = match p {
                    EntryParam::Alpha(a) => ("alpha", a.to_string()),
                    // (2.5) is printed with the name used in the list
                    EntryParam::Gamma(g) if c.label.id == ThmId::new(2, 5) => ("alpha", g.to_string()),
                    EntryParam::Gamma(g) => ("gamma", g.to_string()),
                };
                r.set(k, v);
            }
            r.set("family", c.label.id.description());
            r.set("ma_entry", c.entry.to_string());
            r.set("conjugator", c.witness.composed.to_string());
            r.residual(c.residual);
            if cli.witness {
                let f: Vec<Value> = c
                    .witness
                    .factors
                    .iter()
                    .map(|f| json!({ "name": f.name, "matrix": f.matrix.to_string() }))
                    .collect();
                r.witness = Some(Value::Array(f));
            }
        }
        Cmd::Witness { a, b, gamma, alpha } => {
            r = Report::new(format!("witness {a} {b}"));
            let pa = entry(a, gamma.as_deref(), alpha.as_deref())?;
            let pb = entry(b, gamma.as_deref(), alpha.as_deref())?;
            r.set("source", pa.to_string());
            r.set("target", pb.to_string());
            match compare(&pa.triple(), &pb.triple(), &grid, tol)? {
                Comparison::Conjugate { witness, residual } => {
                    r.set("conjugate", true);
                    r.set("conjugator", witness.to_string());
                    r.residual(residual);
                }
                Comparison::Distinct(cert) => {
                    r.set("conjugate", false);
                    r.set("certificate", cert.to_string());
                }
            }
        }
        Cmd::VerifyTheorem { emit_table } => {
            r = Report::new(format!("verify-theorem --grid {} --tol {tol:e}", cli.grid));
            let mut rep = verify_theorem(cli.grid, tol)?;
            if *emit_table {
                println!("{}", rep.table.to_json());
            }
            let golden = TheoremTable::from_json(GOLDEN)?;
            rep.check_golden(&golden);
            r.set("families", rep.table.families.len());
            let c = &rep.table.counts;
            let get = |k: &str| c.get(k).copied().unwrap_or(0);
            r.set("counts", format!("{}/{}/{}/{}", get("2D"), get("3D"), get("4D"), get("5D")));
            r.set("claims", rep.claims.len());
            for cl in &rep.claims {
                r.check(format!("{}: {}", cl.section, cl.name), cl.pass, cl.detail.clone());
            }
            r.residual(rep.worst_residual);
        }
        Cmd::Catalog { ma } => {
            r = Report::new(if *ma { "catalog --ma" } else { "catalog" });
            let rows: Vec<Value> = if *ma {
                ma_catalog()
                    .into_iter()
                    .map(|e| json!({ "entry": e.id.to_string(), "group": e.description }))
                    .collect()
            } else {
                ThmId::all()
                    .into_iter()
                    .map(|id| {
                        json!({
                            "label": id.to_string(),
                            "dim": id.dim,
                            "group": id.description(),
                            "representative": id.representative_id().to_string(),
                        })
                    })
                    .collect()
            };
            r.set("count", rows.len());
            for (i, row) in rows.into_iter().enumerate() {
                r.set(&format!("{:02}", i + 1), row);
            }
        }
        Cmd::BruhatCell { matrix } => {
            r = Report::new(format!("bruhat-cell {matrix}"));
            let g = parse_mat4(matrix)?;
            let w = bruhat_cell(&g, tol)?;
            r.set("cell", w.to_string());
            r.set("is_identity_cell", w == sptri::WeylElement::IDENTITY);
            if cli.witness {
                r.witness = Some(Value::String(w.realize().to_string()));
            }
        }
        Cmd::CheckCocycle { spec } => {
            r = Report::new(format!("check-cocycle {}", spec.display()));
            let t = load_spec(spec)?;
            let rep = check_cocycle(&t, &grid, tol);
            r.set("pairs", rep.pairs);
            r.set("worst_defect", rep.worst_defect);
            r.check("cocycle identity", rep.pass, format!("worst defect {:.3e}", rep.worst_defect));
            let cob = detect_coboundary(&t.tau, &t.h.samples(&grid), tol)?;
            r.set("coboundary", cob.map_or("none".to_string(), |t0| t0.to_string()));
            r.set("class_e", is_class_e(&t, &grid, tol));
        }
        Cmd::Dual { spec } => {
            r = Report::new(format!("dual {}", spec.display()));
            let t = load_spec(spec)?;
            let d = dual(&t)?;
            let out = GroupSpec::from_triple(&d)?;
            r.set("group", format!("{}", d));
            r.set("ma_entry", ma_reduce(&d, &grid, tol)?.entry.to_string());
            r.set("spec", serde_json::to_value(&out).expect("plain data"));
        }
        Cmd::Sylvester { matrix } => {
            r = Report::new(format!("sylvester {matrix}"));
            let s = parse_sym(matrix)?;
            let sig = sylvester_reduce(&s);
            r.set("signature", sig.to_string());
            r.set("sign", sig.sign);
            r.set("witness", sig.witness.to_string());
            let back = dagger(&sig.witness, &sig.metric())?;
            let want = s.scale(&Scalar::int(sig.sign as i64));
            let ok = back.approx_eq(&want, if back.is_exact() { 0.0 } else { tol });
            r.check("witness", ok, format!("g^dagger[I_pqr] = {back}"));
        }
        Cmd::ClassifySubalgebra { spec } => {
            r = Report::new(format!("classify-subalgebra {}", spec.display()));
            let text = read(spec)?;
            let sub = parse_subalgebra(&text, tol)?;
            let c = classify_subalgebra(&sub, tol)?;
            r.set("label", c.label.to_string());
            r.set("witness", c.witness.to_string());
        }
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut r) => {
            r.elapsed = start.elapsed();
            print!("{}", if cli.json { r.render_json() } else { r.render_human() });
            if r.pass {
                ExitCode::SUCCESS
            } else {
                for (name, _, detail) in r.checks.iter().filter(|c| !c.1) {
                    eprintln!("failed: {name}: {detail}");
                }
                ExitCode::from(1)
            }
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
