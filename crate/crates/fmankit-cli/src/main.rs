//! Command line front end: batch verification, classification, generation
//! of catalog families, Euler-field checking, spectral-ideal reports and
//! the power-series solver.
//!
//! Exit codes: 0 when the requested verdict holds, 1 when it fails,
//! 2 on input errors. All verdicts are relative to the working truncation,
//! which every report prints.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fmankit::catalog::{self, FamilySpec};
use fmankit::doc::{
    parse_field_document, parse_pde_init_document, parse_table_document, to_json_string,
    FieldDocument, TableDocument,
};
use fmankit::euler::{lie_residuals, regular_at, LieResidual, VectorField};
use fmankit::rat::{parse_rat, Rat};
use fmankit::series::Series2;
use fmankit::spectrum::{FrameTag, SpectrumIdeal};
use fmankit::tangent::MultTable;
use fmankit::{pde, Error};

#[derive(Parser)]
#[command(
    name = "fmankit",
    version,
    about = "Exact verification and generation of 3-dimensional tangent-bundle multiplications"
)]
struct Cli {
    /// Series truncation (total degree bound); also via FMANKIT_TRUNCATION.
    #[arg(long, global = true)]
    truncation: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify associativity and the integrability condition of a table file.
    Check { path: PathBuf },
    /// Classify the algebra type generically and at requested points.
    Classify {
        path: PathBuf,
        /// Point "t2,t3" with exact rational entries; repeatable.
        #[arg(long = "at")]
        at: Vec<String>,
        /// Print the discriminant and R-invariants up to this total degree.
        #[arg(long = "caustic-degree")]
        caustic_degree: Option<u32>,
    },
    /// Build a catalog family and write table + Euler field documents.
    Generate {
        family: String,
        /// Family parameter as key=value; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Verify a candidate Euler field against a table.
    EulerCheck {
        table: PathBuf,
        field: PathBuf,
        /// Also test regularity at the point "t2,t3"; repeatable.
        #[arg(long = "regular-at")]
        regular_at: Vec<String>,
    },
    /// Solve the power-series initial value problem for new tables.
    PdeSolve {
        #[arg(long)]
        init: PathBuf,
        #[arg(long)]
        order: u32,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Print the spectral ideal generators and all bracket normal forms.
    Spectrum { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let truncation = cli.truncation.or_else(|| {
        std::env::var("FMANKIT_TRUNCATION")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    match run(cli.command, truncation) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, truncation: Option<u32>) -> Result<bool, Error> {
    match cmd {
        Command::Check { path } => cmd_check(&path),
        Command::Classify {
            path,
            at,
            caustic_degree,
        } => cmd_classify(&path, &at, caustic_degree),
        Command::Generate {
            family,
            params,
            out,
        } => cmd_generate(&family, &params, &out, truncation),
        Command::EulerCheck {
            table,
            field,
            regular_at,
        } => cmd_euler_check(&table, &field, &regular_at),
        Command::PdeSolve { init, order, out } => cmd_pde_solve(&init, order, &out),
        Command::Spectrum { path } => cmd_spectrum(&path),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<(TableDocument, MultTable), Error> {
    let doc = parse_table_document(&read(path)?)?;
    let table = doc.to_table()?;
    Ok((doc, table))
}

fn parse_point(raw: &str) -> Result<(Rat, Rat), Error> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::ParseError(format!(
            "point '{raw}' must be 't2,t3' with rational entries"
        )));
    }
    let t2 = parse_rat(parts[0])
        .ok_or_else(|| Error::ParseError(format!("bad rational '{}'", parts[0])))?;
    let t3 = parse_rat(parts[1])
        .ok_or_else(|| Error::ParseError(format!("bad rational '{}'", parts[1])))?;
    Ok((t2, t3))
}

fn cmd_check(path: &Path) -> Result<bool, Error> {
    let (doc, table) = load_table(path)?;
    println!("file: {}", path.display());
    println!("frame: {}", doc.frame);
    println!("truncation: {}", table.truncation());
    let residuals = table.associativity_residuals();
    let associative = residuals.iter().all(Series2::is_zero);
    println!("associative: {}", yesno(associative));
    if !associative {
        for (k, r) in residuals.iter().enumerate() {
            println!("assoc-residual-{}: {r}", k + 1);
        }
        println!("f-manifold: no");
        return Ok(false);
    }
    let closed = table.is_f_manifold_closed_form()?;
    let ideal = SpectrumIdeal::from_table(&table)?;
    let (bracket_ok, bad) = ideal.f_condition_bracket();
    println!("f-manifold: {}", yesno(closed.is_f_manifold));
    match closed.case {
        Some(case) => println!("case: {}", case.label()),
        None => println!("case: none"),
    }
    println!("closed-form: {}", yesno(closed.is_f_manifold));
    println!("bracket: {}", yesno(bracket_ok));
    println!(
        "methods-agree: {}",
        yesno(closed.is_f_manifold == bracket_ok)
    );
    if !closed.is_f_manifold {
        for (name, r) in ["a2", "a3", "c2", "c3"]
            .iter()
            .zip(closed.nilpotent_residuals.iter())
        {
            if !r.is_zero() {
                println!("nilpotent-residual-{name}: {r}");
            }
        }
        for (name, r) in ["A2", "A2dual", "A3"]
            .iter()
            .zip(closed.obstruction_residuals.iter())
        {
            if !r.is_zero() {
                println!("obstruction-residual-{name}: {r}");
            }
        }
        for ((i, j), nf) in &bad {
            println!("bracket-residual-({i},{j}): {nf}");
        }
    }
    if doc.frame == "gh" {
        let gh = doc.to_gh()?;
        let res = fmankit::spectrum::gh_bracket_residuals(&gh);
        println!("power-frame-residuals-zero: {}", yesno(res.is_f_manifold()));
    }
    Ok(closed.is_f_manifold && bracket_ok)
}

fn cmd_classify(path: &Path, at: &[String], caustic_degree: Option<u32>) -> Result<bool, Error> {
    let (_, table) = load_table(path)?;
    println!("truncation: {}", table.truncation());
    let (ty, warn) = table.generic_type_with_warning()?;
    println!("generic-type: {ty}");
    if warn {
        println!(
            "warning: a tested series vanished at truncation < 4; verdict carries little evidence"
        );
    }
    let inv = table.r_invariants()?;
    let n = caustic_degree.unwrap_or(table.truncation());
    println!("disc: {}", inv.disc.truncate(n));
    println!("R1: {}", inv.r1.truncate(n));
    println!("R2: {}", inv.r2.truncate(n));
    println!("R3: {}", inv.r3.truncate(n));
    for raw in at {
        let (t2, t3) = parse_point(raw)?;
        let ty = table.classify_at(&t2, &t3)?;
        println!("type-at ({t2}, {t3}): {ty}");
    }
    Ok(true)
}

fn parse_params(params: &[String]) -> Result<Vec<(String, String)>, Error> {
    params
        .iter()
        .map(|raw| {
            raw.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::ParseError(format!("parameter '{raw}' must be key=value")))
        })
        .collect()
}

fn param_u32(kv: &[(String, String)], key: &str, default: Option<u32>) -> Result<u32, Error> {
    match kv.iter().find(|(k, _)| k == key) {
        Some((_, v)) => v
            .parse()
            .map_err(|_| Error::ParseError(format!("parameter {key}='{v}' is not an integer"))),
        None => default.ok_or_else(|| Error::ParseError(format!("missing parameter {key}"))),
    }
}

fn param_rat(kv: &[(String, String)], key: &str, default: Option<Rat>) -> Result<Rat, Error> {
    match kv.iter().find(|(k, _)| k == key) {
        Some((_, v)) => {
            parse_rat(v).ok_or_else(|| Error::ParseError(format!("bad rational {key}='{v}'")))
        }
        None => default.ok_or_else(|| Error::ParseError(format!("missing parameter {key}"))),
    }
}

fn param_gamma(
    kv: &[(String, String)],
    p: u32,
    default_head: Option<Rat>,
) -> Result<Vec<Rat>, Error> {
    match kv.iter().find(|(k, _)| k == "gamma") {
        Some((_, v)) => v
            .split(',')
            .map(|s| {
                parse_rat(s)
                    .ok_or_else(|| Error::ParseError(format!("bad rational in gamma: '{s}'")))
            })
            .collect(),
        None => {
            let mut g = vec![Rat::from_integer(0.into()); (p - 1) as usize];
            if let Some(head) = default_head {
                g[0] = head;
            }
            Ok(g)
        }
    }
}

fn param_series(
    kv: &[(String, String)],
    key: &str,
    d: u32,
    default: Option<Series2>,
) -> Result<Series2, Error> {
    match kv.iter().find(|(k, _)| k == key) {
        Some((_, v)) => {
            let entries: Vec<fmankit::doc::SeriesEntry> = serde_json::from_str(v)
                .map_err(|e| Error::ParseError(format!("parameter {key}: {e}")))?;
            fmankit::doc::entries_to_series(&entries, d)
        }
        None => default.ok_or_else(|| Error::ParseError(format!("missing series parameter {key}"))),
    }
}

fn family_from_cli(name: &str, kv: &[(String, String)], d: u32) -> Result<FamilySpec, Error> {
    let two = || Rat::from_integer(2.into());
    let t2 = Series2::monomial(1, 0, Rat::from_integer(1.into()), d);
    let t3 = Series2::monomial(0, 1, Rat::from_integer(1.into()), d);
    let spec = match name {
        "Thm5_2" => FamilySpec::Thm5_2 {
            b2: param_series(kv, "b2", d, Some(t2))?,
        },
        "Thm5_4a" => FamilySpec::Thm5_4a,
        "Thm5_4b" => FamilySpec::Thm5_4b {
            f: param_series(kv, "f", d, Some(t2))?,
        },
        "Thm5_4c" => FamilySpec::Thm5_4c {
            f1: param_series(kv, "f1", d, Some(t2))?,
            f2: param_series(kv, "f2", d, Some(t3))?,
            h: param_series(kv, "h", d, Some(Series2::one(d)))?,
        },
        "Thm5_6" => FamilySpec::Thm5_6 {
            p: param_u32(kv, "p", Some(2))?,
        },
        "Lem5_8" => FamilySpec::Lem5_8 {
            p: param_u32(kv, "p", Some(2))?,
        },
        "Ex6_2_A3" => FamilySpec::Ex6_2A3,
        "Ex6_2_B3" => FamilySpec::Ex6_2B3,
        "Ex6_2_H3" => FamilySpec::Ex6_2H3,
        "Lem6_4" => FamilySpec::Lem6_4 {
            p2: param_u32(kv, "p2", Some(2))?,
            p3: param_u32(kv, "p3", Some(2))?,
        },
        "Lem6_5" => FamilySpec::Lem6_5,
        "Thm7_1a" => {
            let p = param_u32(kv, "p", Some(2))?;
            FamilySpec::Thm7_1a {
                p,
                q: param_u32(kv, "q", Some(p))?,
                gamma: param_gamma(kv, p, Some(two()))?,
            }
        }
        "Thm7_1b" => {
            let p = param_u32(kv, "p", Some(2))?;
            FamilySpec::Thm7_1b {
                p,
                gamma: param_gamma(kv, p, None)?,
            }
        }
        "Thm7_1c" => {
            let p = param_u32(kv, "p", Some(2))?;
            FamilySpec::Thm7_1c {
                p,
                q: param_u32(kv, "q", Some(p))?,
                gamma: param_gamma(kv, p, Some(two()))?,
            }
        }
        "Thm7_1d" => {
            let p = param_u32(kv, "p", Some(2))?;
            FamilySpec::Thm7_1d {
                p,
                gamma: param_gamma(kv, p, None)?,
            }
        }
        "Thm7_1e" => {
            let p = param_u32(kv, "p", Some(2))?;
            FamilySpec::Thm7_1e {
                p,
                gamma: param_gamma(kv, p, None)?,
            }
        }
        "Cor7_2_ai" => FamilySpec::Cor7_2ai {
            tau0: param_rat(kv, "tau0", Some(two()))?,
        },
        "Cor7_2_aii" => FamilySpec::Cor7_2aii {
            q: param_u32(kv, "q", Some(3))?,
            tau0: param_rat(kv, "tau0", Some(Rat::from_integer(1.into())))?,
        },
        "Cor7_2_aiii" => FamilySpec::Cor7_2aiii {
            p: param_u32(kv, "p", Some(3))?,
            gamma0: param_rat(kv, "gamma0", Some(two()))?,
        },
        "Cor7_2_b" => FamilySpec::Cor7_2b {
            p: param_u32(kv, "p", Some(2))?,
        },
        "Cor7_2_c" => FamilySpec::Cor7_2c {
            q: param_u32(kv, "q", Some(2))?,
            tau0: param_rat(kv, "tau0", Some(Rat::from_integer(1.into())))?,
        },
        "Cor7_2_d" => FamilySpec::Cor7_2d {
            p: param_u32(kv, "p", Some(2))?,
        },
        "Cor7_2_e" => FamilySpec::Cor7_2e {
            p: param_u32(kv, "p", Some(2))?,
        },
        "Prod_A1A1A1" => FamilySpec::ProdA1A1A1,
        "Prod_A1I2m" => FamilySpec::ProdA1I2m {
            m: param_u32(kv, "m", Some(3))?,
        },
        "Prod_A1N2" => FamilySpec::ProdA1N2,
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    Ok(spec)
}

fn cmd_generate(
    family: &str,
    params: &[String],
    out: &Path,
    truncation: Option<u32>,
) -> Result<bool, Error> {
    let kv = parse_params(params)?;
    // parse once at a scratch truncation to learn the family, then rebuild
    let probe = family_from_cli(family, &kv, truncation.unwrap_or(8).max(2))?;
    let d = truncation.unwrap_or_else(|| catalog::suggested_truncation(&probe));
    let spec = family_from_cli(family, &kv, d)?;
    let built = catalog::build(&spec, d)?;
    // self-check before writing anything
    if !built.table.is_associative() {
        return Err(Error::NotAssociative);
    }
    let closed = built.table.is_f_manifold_closed_form()?;
    let ideal = SpectrumIdeal::from_table(&built.table)?;
    let (bracket_ok, _) = ideal.f_condition_bracket();
    if !closed.is_f_manifold || !bracket_ok {
        return Err(Error::PreconditionFailed(
            "generated table failed its own integrability check".into(),
        ));
    }
    for e in &built.euler {
        let ok = lie_residuals(&built.table, e)?
            .iter()
            .all(LieResidual::is_zero);
        if !ok {
            return Err(Error::PreconditionFailed(
                "generated Euler field failed its own residual check".into(),
            ));
        }
    }
    let doc = match &built.gh {
        Some(gh) => TableDocument::from_gh(gh),
        None => TableDocument::from_table(&built.table),
    };
    write(out, &to_json_string(&doc))?;
    println!("family: {}", built.meta.family);
    println!("truncation: {d}");
    println!("table: {}", out.display());
    println!("generic-type: {}", built.meta.generic_type);
    println!("origin-type: {}", built.meta.origin_type);
    println!("caustic: {}", built.meta.caustic);
    for (k, e) in built.euler.iter().enumerate() {
        let path = field_path(out, k + 1);
        write(&path, &to_json_string(&FieldDocument::from_field(e)))?;
        println!("euler-field-{}: {}", k + 1, path.display());
    }
    Ok(true)
}

fn field_path(table_path: &Path, index: usize) -> PathBuf {
    let stem = table_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("table");
    table_path.with_file_name(format!("{stem}.euler{index}.json"))
}

fn cmd_euler_check(
    table_path: &Path,
    field_doc_path: &Path,
    regular_points: &[String],
) -> Result<bool, Error> {
    let (_, table) = load_table(table_path)?;
    let field_doc = parse_field_document(&read(field_doc_path)?)?;
    let e: VectorField = field_doc.to_field(table.truncation())?;
    let residuals = lie_residuals(&table, &e)?;
    let ok = residuals.iter().all(LieResidual::is_zero);
    println!("truncation: {}", table.truncation());
    println!("euler: {}", yesno(ok));
    if !ok {
        for r in &residuals {
            for (k, c) in r.components.iter().enumerate() {
                if !c.is_zero() {
                    println!("residual-({},{})-d{}: {c}", r.pair.0, r.pair.1, k + 1);
                }
            }
        }
    }
    let mut all = ok;
    for raw in regular_points {
        let (t2, t3) = parse_point(raw)?;
        let reg = regular_at(&table, &e, &t2, &t3)?;
        println!("regular-at ({t2}, {t3}): {}", yesno(reg));
        all = all && reg;
    }
    Ok(all)
}

fn cmd_pde_solve(init_path: &Path, order: u32, out: &Path) -> Result<bool, Error> {
    let doc = parse_pde_init_document(&read(init_path)?)?;
    let init = doc.to_initial_data(order)?;
    let report = pde::solve(&init)?;
    let res = fmankit::spectrum::gh_bracket_residuals(&report.gh);
    let mut complete = true;
    for r in [&res.r2, &res.r1, &res.r0] {
        for k in 0..report.order {
            if !r.t3_slice(k).is_zero() {
                complete = false;
            }
        }
    }
    write(out, &to_json_string(&TableDocument::from_gh(&report.gh)))?;
    println!("order: {}", report.order);
    println!("t2-precision-at-top-order: {}", report.t2_precision_at_top);
    println!("bracket-residuals-zero-through-order: {}", yesno(complete));
    println!("table: {}", out.display());
    Ok(complete)
}

fn cmd_spectrum(path: &Path) -> Result<bool, Error> {
    let (doc, table) = load_table(path)?;
    if !table.is_associative() {
        return Err(Error::NotAssociative);
    }
    let ideal = if doc.frame == "gh" {
        SpectrumIdeal::from_gh(&doc.to_gh()?)?
    } else {
        SpectrumIdeal::from_table(&table)?
    };
    println!(
        "frame: {}",
        match ideal.frame() {
            FrameTag::Quadratic => "quadratic",
            FrameTag::PowerFrame => "power",
        }
    );
    for (k, g) in ideal.generators().iter().enumerate() {
        println!("generator-{}: {g}", k + 1);
    }
    let (ok, bad) = ideal.f_condition_bracket();
    let n = ideal.generators().len();
    for i in 0..n {
        for j in (i + 1)..n {
            let nf = bad
                .iter()
                .find(|(pair, _)| *pair == (i, j))
                .map(|(_, nf)| nf.to_string())
                .unwrap_or_else(|| "0".into());
            println!("bracket-({},{}): {nf}", i + 1, j + 1);
        }
    }
    println!("bracket-closed: {}", yesno(ok));
    // Nilpotent-square tables carry the classical caveat: the reduced
    // (radical) ideal is bracket closed only for constant b2.
    let f = table.abc();
    let nil = [&f.a2, &f.a3, &f.c2, &f.c3].iter().all(|s| s.is_zero());
    if nil {
        let radical_ok = f.b2.deriv(fmankit::series::Var::T2).is_zero();
        println!("radical-bracket-closed: {}", yesno(radical_ok));
    }
    Ok(ok)
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
