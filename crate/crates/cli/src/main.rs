//! CLI for the twisted affine root supersystem library.
//!
//! Exit codes: 0 success (for `check`: certified), 1 `check` verified at
//! cutoff only, 2 `check` rejected, 64 usage error, 65 domain error (with a
//! JSON error object on stderr).

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rootsuper::{
    bases, canon, oracle, rootsys, Base, CanonicalParams, Error, Family, ReflectionWord,
    SystemDescriptor, Vector, Verdict,
};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rootsuper", version, about = "Twisted affine root supersystems")]
struct Cli {
    /// Family slug: a-2m-2n1-2 | a-2m1-2n1-2 | a-2m-2n-4 | d-2
    #[arg(long, global = true)]
    family: Option<String>,
    /// Count of eps symbols
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Count of del symbols
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// JSON file with default {"family":...,"m":...,"n":...}
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the roots with |delta-coordinate| <= kmax, sorted
    Enum {
        #[arg(long)]
        kmax: u32,
    },
    /// Verify a candidate base (exit 0 certified / 1 at-cutoff / 2 rejected)
    Check {
        /// JSON file: {"elements":[...]} or a bare array of vectors
        #[arg(long)]
        input: PathBuf,
        /// Verification cutoff; defaults to 2*(max |delta-coeff| + period)
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Recognize the canonical form of a base
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide conjugacy of two bases and produce a conjugating word
    Conjugate {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Closed-form positive roots of a canonical-params file
    Posroots {
        /// JSON file: {"form":...,"zetas":[...],"ks":[...],"sign":1}
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        kmax: u32,
    },
    /// Exhaustively search for bases on a small instance
    Search {
        #[arg(long, default_value_t = 6)]
        kmax_root: u32,
        #[arg(long, default_value_t = 1)]
        kmax_entry: u32,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Run the lemma property suites
    Props {
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Deserialize)]
struct ConfigFile {
    family: Option<String>,
    m: Option<usize>,
    n: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseFile {
    Tagged {
        family: Option<String>,
        m: Option<usize>,
        n: Option<usize>,
        elements: Vec<Vector>,
    },
    Bare(Vec<Vector>),
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn resolve_system(cli: &Cli) -> Result<SystemDescriptor, CliError> {
    let cfg: Option<ConfigFile> = match &cli.config {
        Some(p) => Some(read_json(p)?),
        None => None,
    };
    let family = cli
        .family
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.family.clone()))
        .ok_or_else(|| CliError::Usage("missing --family (or config file)".into()))?;
    let m = cli
        .m
        .or_else(|| cfg.as_ref().and_then(|c| c.m))
        .ok_or_else(|| CliError::Usage("missing --m (or config file)".into()))?;
    let n = cli
        .n
        .or_else(|| cfg.as_ref().and_then(|c| c.n))
        .ok_or_else(|| CliError::Usage("missing --n (or config file)".into()))?;
    let family = Family::from_slug(&family)?;
    Ok(SystemDescriptor::new(family, m, n)?)
}

fn read_base(path: &Path, sys: &SystemDescriptor) -> Result<Base, CliError> {
    let file: BaseFile = read_json(path)?;
    let elements = match file {
        BaseFile::Bare(elements) => elements,
        BaseFile::Tagged { family, m, n, elements } => {
            if let Some(f) = family {
                if Family::from_slug(&f)? != sys.family {
                    return Err(CliError::Usage(format!(
                        "base file family `{f}` disagrees with the requested system"
                    )));
                }
            }
            if m.is_some_and(|v| v != sys.m) || n.is_some_and(|v| v != sys.n) {
                return Err(CliError::Usage(
                    "base file (m,n) disagrees with the requested system".into(),
                ));
            }
            elements
        }
    };
    Ok(Base::new(*sys, elements)?)
}

#[derive(Serialize)]
struct EnumLine<'a> {
    root: &'a Vector,
    class: String,
}

fn run_enum(sys: &SystemDescriptor, kmax: u32, format: Format) -> Result<i32, CliError> {
    let roots = rootsys::enumerate(sys, kmax);
    let mut json_items = Vec::new();
    for r in &roots {
        let class = match rootsys::contains(sys, r)? {
            Some(c) => c.to_string(),
            None => "zero".to_string(),
        };
        match format {
            Format::Text => println!("{r}  [{class}]"),
            Format::Jsonl => println!("{}", serde_json::to_string(&EnumLine { root: r, class })?),
            Format::Json => json_items.push(json!({ "root": r, "class": class })),
        }
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string(&json_items)?);
    }
    Ok(0)
}

fn run_check(sys: &SystemDescriptor, input: &Path, kmax: Option<u32>, format: Format) -> Result<i32, CliError> {
    let base = read_base(input, sys)?;
    let kmax = kmax.unwrap_or_else(|| base.default_kmax());
    let verdict = bases::is_base(&base, kmax);
    let code = match &verdict {
        Verdict::Certified { .. } => 0,
        Verdict::VerifiedAtCutoff { .. } => 1,
        Verdict::Rejected { .. } => 2,
    };
    match format {
        Format::Text => match &verdict {
            Verdict::Certified { params, kmax } => {
                println!("certified (kmax={kmax}): form {}", params.form)
            }
            Verdict::VerifiedAtCutoff { kmax } => println!("verified-at-cutoff (kmax={kmax})"),
            Verdict::Rejected { reason } => println!("rejected: {}", serde_json::to_string(reason)?),
        },
        Format::Json | Format::Jsonl => println!("{}", serde_json::to_string(&verdict)?),
    }
    Ok(code)
}

fn run_classify(sys: &SystemDescriptor, input: &Path, format: Format) -> Result<i32, CliError> {
    let base = read_base(input, sys)?;
    let matched = canon::match_canonical(&base);
    match format {
        Format::Text => match &matched {
            Some(p) => println!("form {}: {}", p.form, serde_json::to_string(p)?),
            None => println!("no canonical form matches"),
        },
        Format::Json | Format::Jsonl => match &matched {
            Some(p) => println!("{}", json!({ "form": p.form, "params": p })),
            None => println!("{}", json!({ "form": null })),
        },
    }
    Ok(0)
}

/// End-to-end conjugating word: normalize both bases, bridge with the
/// admissible-level construction, undo the left normalization.
fn full_conjugacy_word(a: &Base, b: &Base) -> Result<ReflectionWord, Error> {
    let (wa_fine, a_fine) = canon::make_fine(a)?;
    let (wa_adm, a_adm) = canon::make_admissible(&a_fine)?;
    let (wb_fine, b_fine) = canon::make_fine(b)?;
    let (wb_adm, b_adm) = canon::make_admissible(&b_fine)?;
    let bridge = canon::conjugacy_word(&a_adm, &b_adm)?;
    let wa = wa_adm.compose(&wa_fine);
    let wb = wb_adm.compose(&wb_fine);
    Ok(wa.inverse().compose(&bridge).compose(&wb))
}

fn run_conjugate(sys: &SystemDescriptor, left: &Path, right: &Path, format: Format) -> Result<i32, CliError> {
    let a = read_base(left, sys)?;
    let b = read_base(right, sys)?;
    let conjugate = canon::are_conjugate(&a, &b)?;
    let (word, note) = if conjugate {
        match full_conjugacy_word(&a, &b) {
            Ok(w) => (Some(w), None),
            Err(Error::OutOfScope(msg)) | Err(Error::NotConjugate(msg)) => (None, Some(msg)),
            Err(e) => return Err(e.into()),
        }
    } else {
        (None, None)
    };
    match format {
        Format::Text => {
            if !conjugate {
                println!("not conjugate");
            } else if let Some(w) = &word {
                println!("conjugate: {w}");
            } else {
                println!("conjugate (same row); word: {}", note.as_deref().unwrap_or("n/a"));
            }
        }
        Format::Json | Format::Jsonl => {
            println!(
                "{}",
                json!({ "conjugate": conjugate, "word": word, "note": note })
            );
        }
    }
    Ok(0)
}

fn run_posroots(sys: &SystemDescriptor, params: &Path, kmax: u32, format: Format) -> Result<i32, CliError> {
    let params: CanonicalParams = read_json(params)?;
    let roots = canon::predicted_positive_roots(sys, &params, kmax)?;
    let sorted: Vec<&Vector> = roots.iter().collect();
    match format {
        Format::Text => {
            for r in &sorted {
                println!("{r}");
            }
        }
        Format::Jsonl => {
            for r in &sorted {
                println!("{}", serde_json::to_string(r)?);
            }
        }
        Format::Json => println!("{}", serde_json::to_string(&sorted)?),
    }
    Ok(0)
}

fn run_search(
    sys: &SystemDescriptor,
    kmax_root: u32,
    kmax_entry: u32,
    budget: Option<u128>,
    format: Format,
) -> Result<i32, CliError> {
    let mut cfg = oracle::SearchConfig::new(kmax_root, kmax_entry);
    if let Some(b) = budget {
        cfg.budget = b;
    }
    let found = oracle::search_bases(sys, &cfg)?;
    match format {
        Format::Text => {
            for f in &found {
                let form = f
                    .params
                    .as_ref()
                    .map(|p| p.form.to_string())
                    .unwrap_or_else(|| "unrecognized".into());
                let elems: Vec<String> = f.elements.iter().map(Vector::to_string).collect();
                println!("[{form}] {}", elems.join(" ; "));
            }
            println!("total {}", found.len());
        }
        Format::Jsonl => {
            for f in &found {
                println!("{}", serde_json::to_string(f)?);
            }
        }
        Format::Json => {
            println!(
                "{}",
                json!({ "sys": sys, "config": cfg, "count": found.len(), "bases": found })
            );
        }
    }
    Ok(0)
}

fn run_props(sys: &SystemDescriptor, kmax: u32, seed: u64, format: Format) -> Result<i32, CliError> {
    let report = oracle::run_property_suite(sys, kmax, seed);
    match format {
        Format::Text => {
            for s in &report.statements {
                let status = serde_json::to_string(&s.status)?;
                println!(
                    "{}: {} (checked {}){}",
                    s.id,
                    status.trim_matches('"'),
                    s.checked,
                    s.counterexample
                        .as_ref()
                        .map(|c| format!(" counterexample: {c}"))
                        .unwrap_or_default()
                );
            }
        }
        Format::Jsonl => {
            for s in &report.statements {
                println!("{}", serde_json::to_string(s)?);
            }
        }
        Format::Json => println!("{}", serde_json::to_string(&report)?),
    }
    Ok(if report.all_pass() { 0 } else { 2 })
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let sys = resolve_system(cli)?;
    match &cli.cmd {
        Cmd::Enum { kmax } => run_enum(&sys, *kmax, cli.format),
        Cmd::Check { input, kmax } => run_check(&sys, input, *kmax, cli.format),
        Cmd::Classify { input } => run_classify(&sys, input, cli.format),
        Cmd::Conjugate { left, right } => run_conjugate(&sys, left, right, cli.format),
        Cmd::Posroots { params, kmax } => run_posroots(&sys, params, *kmax, cli.format),
        Cmd::Search { kmax_root, kmax_entry, budget } => {
            run_search(&sys, *kmax_root, *kmax_entry, *budget, cli.format)
        }
        Cmd::Props { kmax, seed } => run_props(&sys, *kmax, *seed, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError::Usage(msg)) => {
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": msg } }));
            ExitCode::from(64)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("{}", json!({ "error": { "kind": "domain", "message": e.to_string() } }));
            ExitCode::from(65)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("{}", json!({ "error": { "kind": "io", "message": msg } }));
            ExitCode::from(65)
        }
    }
}
