//! Command-line verifier for the algebraic identities behind dihedral
//! class-number relations: property-suite runner, regulator-constant
//! calculator, splitting explorer, torsion-order helper, and the
//! field-invariant bundle checker.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigUint;

use bk_core::arith;
use bk_core::bundle::{self, Verdict};
use bk_core::dihedral::{DihedralGroup, RelationVector, Subgroup};
use bk_core::exactalg::rational_to_string;
use bk_core::harness::{self, SuiteParams};
use bk_core::regconst::{self, PairedLattice};

#[derive(Parser)]
#[command(
    name = "bk",
    about = "Exact verification of unit-index, cohomology and regulator-constant identities for dihedral extensions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized property suites for every verifier.
    VerifyLemmas(VerifyLemmasArgs),
    /// Regulator constant, multiplicities and index identity of a paired
    /// lattice file.
    Regconst {
        /// JSON file with {"lattice": ..., "gram": [[...]]}
        lattice_file: PathBuf,
    },
    /// Verify a field-invariant bundle end to end.
    BkCheck {
        bundle_file: PathBuf,
        /// Relative tolerance for the regulator comparisons.
        #[arg(long, default_value = "1e-6")]
        tolerance: String,
    },
    /// Residue degrees, local factors and relation products for a list of
    /// places.
    Splitting(SplittingArgs),
    /// Torsion order from a cyclotomic character value.
    Wnum {
        /// odd prime ell
        #[arg(long)]
        ell: u64,
        /// character value as an integer modulo ell^precision
        #[arg(long)]
        kappa: u64,
        /// weight m
        #[arg(long)]
        m: u32,
        /// working precision (power of ell)
        #[arg(long, default_value_t = 16)]
        precision: u32,
    },
}

#[derive(Args)]
struct VerifyLemmasArgs {
    /// Primes p (odd primes >= 3), comma separated.
    #[arg(long = "p", value_delimiter = ',', default_values_t = vec![3u64])]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 50)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run a single lemma suite (lem, es, qhd, ultimo, indp, nuccio,
    /// bartel, lambda2, maria, um).
    #[arg(long = "lemma")]
    lemma: Option<String>,
}

#[derive(Args)]
struct SplittingArgs {
    /// JSON file with an array of places.
    place_file: PathBuf,
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Relation coefficients on (trivial, reflection, rotation, full).
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = vec![1i64, -2, -1, 2])]
    relation: Vec<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli_output: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match cli_output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path:?}"))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::VerifyLemmas(args) => {
            for &p in &args.primes {
                if ![3, 5, 7, 11, 13].contains(&p) {
                    bail!("unsupported prime {p}: expected one of 3, 5, 7, 11, 13");
                }
            }
            let mut params = SuiteParams::new(args.primes.clone(), args.trials, args.seed);
            if let Some(l) = &args.lemma {
                if !harness::ALL_LEMMAS.contains(&l.as_str()) {
                    bail!(
                        "unknown lemma {l:?}; available: {}",
                        harness::ALL_LEMMAS.join(", ")
                    );
                }
                params.filter = vec![l.clone()];
            }
            let reports = harness::run_suite(&params)?;
            let failures = reports.iter().filter(|r| !r.verdict).count();
            let body = match cli.format {
                Format::Json => harness::reports_to_jsonl(&reports)?,
                Format::Text => {
                    let mut s = String::new();
                    for r in &reports {
                        s.push_str(&format!(
                            "{}  p={} seed={} {}  lhs: {}  rhs: {}\n",
                            if r.verdict { "pass" } else { "FAIL" },
                            r.p,
                            r.seed.unwrap_or(0),
                            r.lemma,
                            r.lhs,
                            r.rhs
                        ));
                    }
                    s.push_str(&format!(
                        "{} trials, {} failures\n",
                        reports.len(),
                        failures
                    ));
                    s
                }
            };
            emit(&cli.output, &body)?;
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Regconst { lattice_file } => {
            let text = fs::read_to_string(lattice_file)
                .with_context(|| format!("reading {lattice_file:?}"))?;
            let paired = PairedLattice::from_json(&text)?;
            let c = regconst::regulator_constant(&paired)?;
            let mult = regconst::rational_multiplicities(&paired.lattice)?;
            let bartel = regconst::verify_bartel(&paired)?;
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "regulator_constant": rational_to_string(&c),
                    "multiplicities": mult,
                    "index_identity": bartel,
                }))? + "\n",
                Format::Text => format!(
                    "C = {}\nmultiplicities: trivial {}, sign {}, omega {}\nindex identity ({}): lhs {} rhs {}\n",
                    rational_to_string(&c),
                    mult.m_triv,
                    mult.m_sign,
                    mult.m_omega,
                    if bartel.verdict { "pass" } else { "FAIL" },
                    bartel.lhs,
                    bartel.rhs
                ),
            };
            emit(&cli.output, &body)?;
            Ok(if bartel.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::BkCheck {
            bundle_file,
            tolerance,
        } => {
            let text = fs::read_to_string(bundle_file)
                .with_context(|| format!("reading {bundle_file:?}"))?;
            let bundle = bundle::from_json(&text)?;
            let tol = bundle::parse_decimal(tolerance)?;
            let report = bundle::bk_check(&bundle, &tol)?;
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Text => {
                    let mut s = String::new();
                    for c in &report.checks {
                        s.push_str(&format!("{:?}  {}: {}\n", c.verdict, c.name, c.detail));
                    }
                    s.push_str(&format!("overall: {:?}\n", report.overall));
                    s
                }
            };
            emit(&cli.output, &body)?;
            Ok(match report.overall {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Fail => ExitCode::from(1),
                Verdict::Inconclusive => ExitCode::from(3),
            })
        }
        Command::Splitting(args) => {
            let text = fs::read_to_string(&args.place_file)
                .with_context(|| format!("reading {:?}", args.place_file))?;
            let places: Vec<arith::PlaceData> = serde_json::from_str(&text)?;
            let group = DihedralGroup::new(args.p)?;
            let rel = RelationVector {
                c_trivial: args.relation[0],
                c_reflection: args.relation[1],
                c_rotation: args.relation[2],
                c_full: args.relation[3],
            };
            let body = splitting_report(group, &places, args.m, args.p, &rel, cli.format)?;
            emit(&cli.output, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Wnum {
            ell,
            kappa,
            m,
            precision,
        } => {
            let w = arith::w_number_part(*ell, &BigUint::from(*kappa), *m, *precision)?;
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string(&serde_json::json!({ "w_part": w.to_string() }))? + "\n"
                }
                Format::Text => format!("{w}\n"),
            };
            emit(&cli.output, &body)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn splitting_report(
    group: DihedralGroup,
    places: &[arith::PlaceData],
    m: u32,
    p: u64,
    rel: &RelationVector,
    format: Format,
) -> anyhow::Result<String> {
    let fields = [
        ("k", Subgroup::Full),
        ("F", Subgroup::Rotation),
        ("K", Subgroup::Reflection(0)),
        ("L", Subgroup::Trivial),
    ];
    let mut rows = Vec::new();
    for place in places {
        place.validate(group)?;
        if place.is_archimedean() {
            continue;
        }
        let mut row = serde_json::Map::new();
        row.insert("place".into(), serde_json::to_value(place)?);
        for (name, h) in fields {
            let degs = arith::residue_degrees(group, place, h)?;
            let lf = arith::local_factor(group, place, h, m, p)?;
            row.insert(format!("degrees_{name}"), serde_json::to_value(&degs)?);
            row.insert(format!("factor_{name}"), lf.to_string().into());
        }
        let product = arith::relation_product(group, place, m, p, rel)?;
        row.insert(
            "relation_product".into(),
            rational_to_string(&product).into(),
        );
        rows.push(serde_json::Value::Object(row));
    }
    let arch: Vec<arith::PlaceData> = places
        .iter()
        .filter(|pl| pl.is_archimedean())
        .cloned()
        .collect();
    let signature_block = if arch.is_empty() {
        None
    } else {
        Some(arith::signatures(group, &arch, m)?)
    };
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&serde_json::json!({
            "finite_places": rows,
            "signatures": signature_block,
        }))? + "\n"),
        Format::Text => {
            let mut s = String::new();
            for row in &rows {
                let obj = row.as_object().unwrap();
                s.push_str(&format!(
                    "place {}: degrees k {} F {} K {} L {}, factors k {} F {} K {} L {}, relation product {}\n",
                    serde_json::to_string(&obj["place"]).unwrap(),
                    obj["degrees_k"],
                    obj["degrees_F"],
                    obj["degrees_K"],
                    obj["degrees_L"],
                    obj["factor_k"],
                    obj["factor_F"],
                    obj["factor_K"],
                    obj["factor_L"],
                    obj["relation_product"]
                ));
            }
            if let Some(sig) = &signature_block {
                s.push_str(&format!(
                    "signatures at m = {}: k ({}, {}) rank {}, F ({}, {}) rank {}, K ({}, {}) rank {}, L ({}, {}) rank {}\n",
                    sig.m,
                    sig.base.r1, sig.base.r2, sig.base.rank,
                    sig.quadratic.r1, sig.quadratic.r2, sig.quadratic.rank,
                    sig.degree_p.r1, sig.degree_p.r2, sig.degree_p.rank,
                    sig.top.r1, sig.top.r2, sig.top.rank,
                ));
            }
            Ok(s)
        }
    }
}
