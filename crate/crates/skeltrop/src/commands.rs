//! Command implementations. Every command produces a deterministic report
//! (text plus one JSON line) and an exit code: 0 pass, 1 semantic failure,
//! 2 input error, 3 genericity violation.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use skeltrop_core::balance::{self, PLFunction};
use skeltrop_core::mumford::{self, TorusTriangulation};
use skeltrop_core::skeleton::WeakTropicalComplex;
use skeltrop_core::tropmap::{self, CellwiseTropMap, Faithfulness, SectionVerdict, TropError};

use crate::formats;
use crate::report::{Report, Status, EXIT_FAIL, EXIT_GENERICITY, EXIT_INPUT, EXIT_PASS};
use crate::svg;

#[derive(Parser)]
#[command(
    name = "skeltrop",
    about = "Exact calculus on skeletons: validation, balancing, multiplicities, certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Validate a complex file against the structural invariants
    Validate { complex: PathBuf },
    /// Check a balancing identity for a function on a complex
    Balance {
        complex: PathBuf,
        plfunction: PathBuf,
        #[arg(long, value_enum, default_value_t = BalanceMode::Bounded)]
        mode: BalanceMode,
    },
    /// Lattice-index sum and tropical multiplicity over a fiber
    St {
        complex: PathBuf,
        map: PathBuf,
        /// Query point, e.g. "1/2,3"
        #[arg(long)]
        omega: String,
        /// Degree of the map onto its image
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Faithfulness certificate for a cellwise map
    Faithful { complex: PathBuf, map: PathBuf },
    /// Section certificate at a query point
    Section {
        complex: PathBuf,
        map: PathBuf,
        #[arg(long)]
        omega: String,
    },
    /// Emit the built-in example family
    Example {
        #[arg(long)]
        name: String,
        /// Refinement factor for the covering computation
        #[arg(long, default_value_t = 2)]
        refine: i64,
        #[arg(long, value_enum)]
        emit: Emit,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BalanceMode {
    Bounded,
    Pair,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Complex,
    Plf,
    AlphaTable,
    Svg,
}

pub struct Outcome {
    pub stdout: String,
    pub exit: u8,
}

/// Parses and runs a full command line (excluding the binary name handled
/// by clap's first argument convention).
pub fn execute<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return Outcome {
                stdout: e.to_string(),
                exit: EXIT_INPUT,
            }
        }
    };
    run(cli.command)
}

pub fn run(command: Command) -> Outcome {
    let result = match command {
        Command::Validate { complex } => cmd_validate(&complex),
        Command::Balance {
            complex,
            plfunction,
            mode,
        } => cmd_balance(&complex, &plfunction, mode),
        Command::St {
            complex,
            map,
            omega,
            degree,
        } => cmd_st(&complex, &map, &omega, degree),
        Command::Faithful { complex, map } => cmd_faithful(&complex, &map),
        Command::Section {
            complex,
            map,
            omega,
        } => cmd_section(&complex, &map, &omega),
        Command::Example {
            name,
            refine,
            emit,
            out,
        } => return cmd_example(&name, refine, emit, out.as_deref()),
    };
    match result {
        Ok((report, exit)) => Outcome {
            stdout: report.render(),
            exit,
        },
        Err(e) => {
            let mut report = Report::new("error");
            report.status = Status::Error;
            report.note(format!("{e:#}"));
            Outcome {
                stdout: report.render(),
                exit: EXIT_INPUT,
            }
        }
    }
}

fn load_complex(path: &std::path::Path) -> Result<WeakTropicalComplex> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: formats::ComplexFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    formats::complex_from_file(&file)
}

fn load_plfunction(complex: &WeakTropicalComplex, path: &std::path::Path) -> Result<PLFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: formats::PlFunctionFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let f = formats::plfunction_from_file(complex, &file)?;
    for (u, name) in complex.vertex_names().iter().enumerate() {
        if !f.vertex_values.contains_key(&u) {
            return Err(anyhow!("no value for vertex {name}"));
        }
    }
    balance::check_integrality(complex, &f).map_err(|e| anyhow!("{e}"))?;
    Ok(f)
}

fn load_map(complex: &WeakTropicalComplex, path: &std::path::Path) -> Result<CellwiseTropMap> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: formats::TropMapFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    formats::tropmap_from_file(complex, &file)
}

fn cmd_validate(path: &std::path::Path) -> Result<(Report, u8)> {
    let complex = load_complex(path)?;
    let mut report = Report::new("validate");
    let validation = complex.validate();
    for v in &validation.violations {
        report.violation(&v.subject, v.message.clone(), &[]);
    }
    report.info(
        "complex",
        format!(
            "{} cells, dimension {}",
            complex.cells().len(),
            complex.dimension()
        ),
        &[],
    );
    for n in complex.notes() {
        report.note(n.clone());
    }
    let exit = if validation.is_valid() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Ok((report, exit))
}

fn cmd_balance(
    complex_path: &std::path::Path,
    plf_path: &std::path::Path,
    mode: BalanceMode,
) -> Result<(Report, u8)> {
    let complex = load_complex(complex_path)?;
    let validation = complex.validate();
    if !validation.is_valid() {
        let first = &validation.violations[0];
        return Err(anyhow!(
            "complex is invalid: {}: {}",
            first.subject,
            first.message
        ));
    }
    let f = load_plfunction(&complex, plf_path)?;
    let mut report = Report::new(match mode {
        BalanceMode::Bounded => "balance --mode bounded",
        BalanceMode::Pair => "balance --mode pair",
    });
    let check = match mode {
        BalanceMode::Bounded => balance::check_bounded_formula(&complex, &f),
        BalanceMode::Pair => balance::check_pair_formula(&complex, &f),
    }
    .map_err(|e| anyhow!("{e}"))?;
    for (cell, value) in &check.violations {
        report.violation(
            cell,
            "balancing identity violated".to_string(),
            &[("residue", value.to_string())],
        );
    }
    for (cell, reason) in &check.skipped {
        report.skipped(cell, reason.clone());
    }
    report.info("checked", format!("{} cells evaluated", check.checked), &[]);
    if mode == BalanceMode::Bounded {
        let tau = balance::retraction_divisor(&complex, &f).map_err(|e| anyhow!("{e}"))?;
        let mut flat = std::collections::BTreeMap::new();
        for (name, value) in balance::divisor_by_name(&complex, &tau) {
            report.info(
                &name,
                "retraction coefficient".to_string(),
                &[("value", value.to_string())],
            );
            flat.insert(name, value.to_string());
        }
        report.divisors.insert("tau".to_string(), flat);
    }
    for n in complex.notes() {
        report.note(n.clone());
    }
    let exit = if check.passed() { EXIT_PASS } else { EXIT_FAIL };
    Ok((report, exit))
}

fn trop_exit(e: &TropError) -> u8 {
    match e {
        TropError::GenericityViolated { .. } => EXIT_GENERICITY,
        TropError::InvalidMap(_) => EXIT_INPUT,
        _ => EXIT_FAIL,
    }
}

fn cmd_st(
    complex_path: &std::path::Path,
    map_path: &std::path::Path,
    omega: &str,
    degree: Option<u64>,
) -> Result<(Report, u8)> {
    let complex = load_complex(complex_path)?;
    let map = load_map(&complex, map_path)?;
    let omega = formats::parse_omega(omega)?;
    if omega.len() != map.target_rank {
        return Err(anyhow!(
            "query point has {} coordinates; the map targets rank {}",
            omega.len(),
            map.target_rank
        ));
    }
    let mut report = Report::new("st");
    map.validate(&complex).map_err(|e| anyhow!("{e}"))?;
    let st = match tropmap::st_sum(&complex, &map, &omega) {
        Ok(st) => st,
        Err(e) => {
            report.status = Status::Error;
            report.violation("fiber", format!("{e}"), &[]);
            return Ok((report, trop_exit(&e)));
        }
    };
    for (cell, piece, index) in &st.entries {
        report.info(
            &complex.cell(*cell).name,
            "fiber cell".to_string(),
            &[("piece", piece.to_string()), ("index", index.to_string())],
        );
    }
    report.info("sum", st.sum.to_string(), &[]);
    let mut exit = EXIT_PASS;
    if let Some(d) = degree {
        match tropmap::tropical_multiplicity(&complex, &map, &omega, d) {
            Ok(m) => report.info("multiplicity", m.to_string(), &[("degree", d.to_string())]),
            Err(e) => {
                report.violation("multiplicity", format!("{e}"), &[]);
                exit = trop_exit(&e);
            }
        }
    }
    Ok((report, exit))
}

fn cmd_faithful(
    complex_path: &std::path::Path,
    map_path: &std::path::Path,
) -> Result<(Report, u8)> {
    let complex = load_complex(complex_path)?;
    let map = load_map(&complex, map_path)?;
    let mut report = Report::new("faithful");
    let verdict = match tropmap::faithfulness_certificate(&complex, &map) {
        Ok(v) => v,
        Err(e) => return Err(anyhow!("{e}")),
    };
    let exit = match &verdict {
        Faithfulness::Pass => {
            report.info(
                "certificate",
                "injective and unimodular on every piece".to_string(),
                &[],
            );
            EXIT_PASS
        }
        Faithfulness::NotUnimodular { cell, piece, index } => {
            report.violation(
                cell,
                "piece is not unimodular".to_string(),
                &[("piece", piece.to_string()), ("index", index.clone())],
            );
            EXIT_FAIL
        }
        Faithfulness::OverlappingImages {
            cell_a,
            piece_a,
            cell_b,
            piece_b,
        } => {
            report.violation(
                cell_a,
                format!("image overlaps {cell_b} beyond their shared faces"),
                &[
                    ("piece", piece_a.to_string()),
                    ("other_piece", piece_b.to_string()),
                ],
            );
            EXIT_FAIL
        }
    };
    Ok((report, exit))
}

fn cmd_section(
    complex_path: &std::path::Path,
    map_path: &std::path::Path,
    omega: &str,
) -> Result<(Report, u8)> {
    let complex = load_complex(complex_path)?;
    let map = load_map(&complex, map_path)?;
    let omega = formats::parse_omega(omega)?;
    if omega.len() != map.target_rank {
        return Err(anyhow!(
            "query point has {} coordinates; the map targets rank {}",
            omega.len(),
            map.target_rank
        ));
    }
    map.validate(&complex).map_err(|e| anyhow!("{e}"))?;
    let mut report = Report::new("section");
    let verdict = match tropmap::section_certificate(&complex, &map, &omega) {
        Ok(v) => v,
        Err(e) => {
            report.status = Status::Error;
            report.violation("fiber", format!("{e}"), &[]);
            return Ok((report, trop_exit(&e)));
        }
    };
    let exit = match &verdict {
        SectionVerdict::Pass { cell } => {
            report.info(
                cell,
                "single fiber cell of index one; a partial section exists".to_string(),
                &[],
            );
            EXIT_PASS
        }
        SectionVerdict::MultipleFiberCells(n) => {
            report.violation("fiber", format!("{n} fiber cells"), &[]);
            EXIT_FAIL
        }
        SectionVerdict::IndexNotOne { cell, index } => {
            report.violation(
                cell,
                "lattice index is not one".to_string(),
                &[("index", index.to_string())],
            );
            EXIT_FAIL
        }
    };
    Ok((report, exit))
}

fn cmd_example(name: &str, refine: i64, emit: Emit, out: Option<&std::path::Path>) -> Outcome {
    let fail = |msg: String| Outcome {
        stdout: {
            let mut r = Report::new("example");
            r.status = Status::Error;
            r.note(msg);
            r.render()
        },
        exit: EXIT_INPUT,
    };
    if name != "e2" {
        return fail(format!("unknown example {name:?} (available: e2)"));
    }
    if refine < 2 {
        return fail("the refinement factor must be at least 2".to_string());
    }
    let coarse = TorusTriangulation::build_c();
    let fine = coarse.refine(refine);

    let payload = match emit {
        Emit::AlphaTable => {
            let table = match mumford::e2_alpha_table(&coarse, &fine) {
                Ok(t) => t,
                Err(e) => return fail(format!("{e}")),
            };
            let mut csv = String::from("edge,vertex,alpha\n");
            for (edge, vertex, alpha) in table {
                csv.push_str(&format!("{edge},{vertex},{alpha}\n"));
            }
            csv
        }
        Emit::Complex | Emit::Plf | Emit::Svg => {
            if refine != 2 {
                return fail(
                    "this example instance is built from the twofold refinement; use --refine 2"
                        .to_string(),
                );
            }
            let (complex, f) = match mumford::build_e2_pair(&coarse, &fine) {
                Ok(v) => v,
                Err(e) => return fail(format!("{e}")),
            };
            match emit {
                Emit::Complex => {
                    let file = formats::complex_to_file(&complex);
                    let mut s = serde_json::to_string_pretty(&file).expect("serializes");
                    s.push('\n');
                    s
                }
                Emit::Plf => {
                    let file = formats::plfunction_to_file(&complex, &f);
                    let mut s = serde_json::to_string_pretty(&file).expect("serializes");
                    s.push('\n');
                    s
                }
                Emit::Svg => svg::render(&coarse, &complex, &f),
                Emit::AlphaTable => unreachable!(),
            }
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, &payload) {
                return fail(format!("writing {}: {e}", path.display()));
            }
            let mut r = Report::new("example");
            r.info(
                "written",
                path.display().to_string(),
                &[("bytes", payload.len().to_string())],
            );
            Outcome {
                stdout: r.render(),
                exit: EXIT_PASS,
            }
        }
        None => Outcome {
            stdout: payload,
            exit: EXIT_PASS,
        },
    }
}
