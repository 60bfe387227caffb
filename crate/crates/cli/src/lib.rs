//! Command-line front end for the `u1cs` library.

use std::fmt;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use u1cs::surgery::big_to_json;
use u1cs::{
    analyze, catalog, parse_presentation, partition_function, reciprocity_check, rt_invariant_with,
    verify_relation_with, CatalogKind, ComplexValue, CyclotomicSum, Error, Format, RtOptions, SurgeryPresentation,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_COMPUTATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "u1cs", version, about = "Abelian Chern-Simons and Reshetikhin-Turaev invariants from surgery presentations")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Torsion homology, determinant, signature, generators and linking form.
    Homology(InputArgs),
    /// Exact partition function Z_k as a multiset of phases.
    Zk {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Brute-force Reshetikhin-Turaev invariant I_k.
    Rt {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        sum: SumArgs,
    },
    /// Check Z_k = sqrt(p1...pw) I_k for each requested level.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        sum: SumArgs,
        /// Relative tolerance: pass when |Z - sqrt(p) I| <= tol (1 + |Z|).
        #[arg(long, default_value_t = u1cs::invariants::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Evaluate both sides of the Gauss-sum reciprocity identity.
    Reciprocity {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
    },
    /// Print a catalog presentation (sphere, lens:P, m26, or a `+`-joined connected sum).
    Catalog {
        spec: CatalogSpec,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: Source,
    /// Input format; guessed from the extension or content when omitted.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
}

/// Exactly one of a file or a catalog entry.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Presentation file (`-` for standard input).
    pub input: Option<PathBuf>,
    /// Use a catalog presentation instead of a file.
    #[arg(long)]
    pub catalog: Option<CatalogSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Plain,
    Json,
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    /// Level `k` or inclusive range `a..b`.
    #[arg(long, short)]
    pub k: LevelRange,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    /// Maximum number of lattice points in the brute-force sum.
    #[arg(long, default_value_t = u1cs::invariants::DEFAULT_BUDGET)]
    pub budget: u128,
    /// Worker threads for the brute-force sum.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

impl SumArgs {
    fn options(&self) -> RtOptions {
        RtOptions {
            budget: self.budget,
            workers: self.workers.max(1),
        }
    }
}

/// A positive level or an inclusive range of levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRange(pub RangeInclusive<i64>);

impl FromStr for LevelRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| -> Result<i64, String> {
            let k: i64 = t.trim().parse().map_err(|_| format!("`{t}` is not an integer"))?;
            if k < 1 {
                return Err(format!("level must be positive, got {k}"));
            }
            Ok(k)
        };
        let range = match s.split_once("..") {
            Some((a, b)) => parse(a)?..=parse(b)?,
            None => {
                let k = parse(s)?;
                k..=k
            }
        };
        if range.is_empty() {
            return Err(format!("empty level range `{s}`"));
        }
        Ok(LevelRange(range))
    }
}

/// `sphere`, `lens:P`, `m26`, or several of these joined by `+`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogSpec(pub Vec<CatalogKind>);

impl FromStr for CatalogSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split('+')
            .map(|part| {
                let part = part.trim();
                match part.split_once(':') {
                    Some(("lens", p)) => p
                        .parse::<BigInt>()
                        .map(CatalogKind::Lens)
                        .map_err(|_| format!("bad lens parameter `{p}`")),
                    None if part == "sphere" || part == "s3" => Ok(CatalogKind::Sphere),
                    None if part == "m26" => Ok(CatalogKind::M26),
                    _ => Err(format!("unknown catalog entry `{part}` (expected sphere, lens:P or m26)")),
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(CatalogSpec)
    }
}

impl CatalogSpec {
    fn build(&self) -> Result<SurgeryPresentation, CliError> {
        let usage = |e: Error| CliError::Usage(e.to_string());
        let mut parts = self
            .0
            .iter()
            .map(|k| catalog(k.clone()))
            .collect::<u1cs::Result<Vec<_>>>()
            .map_err(usage)?;
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        catalog(CatalogKind::BlockSum(parts)).map_err(usage)
    }
}

/// Failure of a command, with the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
    /// The computation finished but a check did not hold.
    CheckFailed,
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Library(e) if e.is_input_error() => EXIT_USAGE,
            CliError::Library(_) | CliError::CheckFailed | CliError::Io(_) => EXIT_COMPUTATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error[E_USAGE]: {msg}"),
            CliError::Library(e) => write!(f, "error[{}]: {e}", e.code()),
            CliError::CheckFailed => write!(f, "error[E_CHECK]: at least one check failed"),
            CliError::Io(e) => write!(f, "error[E_IO]: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn load(input: &InputArgs) -> Result<SurgeryPresentation, CliError> {
    if let Some(spec) = &input.source.catalog {
        return spec.build();
    }
    let path = input.source.input.as_ref().expect("clap enforces one input source");
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?
    };
    let format = match input.input_format {
        Some(InputFormat::Plain) => Format::Plain,
        Some(InputFormat::Json) => Format::Json,
        None if Format::from_path(path) == Format::Json => Format::Json,
        None => Format::sniff(&text),
    };
    let mut p = parse_presentation(&text, format)?;
    if p.name.is_none() && path.as_os_str() != "-" {
        p.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(p)
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl From<ComplexValue> for ComplexJson {
    fn from(z: ComplexValue) -> Self {
        // Normalize −0.0 so identical values print identically.
        ComplexJson {
            re: z.re + 0.0,
            im: z.im + 0.0,
        }
    }
}

#[derive(Serialize)]
struct PhaseJson {
    num: u64,
    den: u64,
    mult: i64,
}

#[derive(Serialize)]
struct ZkJson {
    re: f64,
    im: f64,
    exact_zero: bool,
    phases: Vec<PhaseJson>,
}

impl ZkJson {
    fn new(z: &CyclotomicSum) -> Self {
        let v = ComplexJson::from(z.evaluate::<f64>());
        ZkJson {
            re: v.re,
            im: v.im,
            exact_zero: z.is_exactly_zero(),
            phases: z
                .phases()
                .into_iter()
                .map(|p| PhaseJson {
                    num: p.num,
                    den: p.den,
                    mult: p.mult,
                })
                .collect(),
        }
    }
}

/// Common header fields of every per-manifold report.
#[derive(Serialize)]
struct Header {
    name: Option<String>,
    m: usize,
    det: Value,
    signature: i64,
    torsion: Vec<Value>,
}

fn format_complex(z: ComplexValue) -> String {
    let clean = |x: f64| {
        let r = (x * 1e12).round() / 1e12;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let (re, im) = (clean(z.re), clean(z.im));
    if im < 0.0 {
        format!("{re} - {}i", -im)
    } else {
        format!("{re} + {im}i")
    }
}

fn torsion_text(torsion: &[BigInt], p: &BigInt) -> String {
    if torsion.is_empty() {
        return format!("trivial torsion, p = {p}");
    }
    let parts: Vec<String> = torsion.iter().map(|t| format!("Z_{t}")).collect();
    format!("{}, p = {p}", parts.join(" + "))
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::other)?;
    writeln!(out)
}

/// Runs one parsed invocation, writing reports to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let json = cli.format == OutputFormat::Json;
    match &cli.command {
        Command::Homology(input) => {
            let p = load(input)?;
            let (t, form) = analyze(&p)?;
            if json {
                #[derive(Serialize)]
                struct HomologyJson {
                    #[serde(flatten)]
                    header: Header,
                    p: Value,
                    generators: Vec<Vec<Value>>,
                    linking_form: Vec<Vec<String>>,
                }
                let report = HomologyJson {
                    header: header(&p, &t),
                    p: big_to_json(&t.order),
                    generators: t.generators.iter_rows().map(|r| r.iter().map(big_to_json).collect()).collect(),
                    linking_form: form.q.iter_rows().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
                };
                emit_json(out, &report)?;
            } else {
                if let Some(name) = &p.name {
                    writeln!(out, "name: {name}")?;
                }
                writeln!(out, "components: {}", p.m())?;
                writeln!(out, "det: {}", t.det)?;
                writeln!(out, "signature: {}", t.signature)?;
                writeln!(out, "H1: {}", torsion_text(&t.torsion_numbers, &t.order))?;
                for (i, row) in t.generators.iter_rows().enumerate() {
                    let coeffs: Vec<String> = row.iter().map(ToString::to_string).collect();
                    writeln!(out, "h{} = [{}]", i + 1, coeffs.join(", "))?;
                }
                for (i, row) in form.q.iter_rows().enumerate() {
                    let entries: Vec<String> = row.iter().map(ToString::to_string).collect();
                    writeln!(out, "Q[{}] = [{}]", i + 1, entries.join(", "))?;
                }
            }
        }
        Command::Zk { input, level } => {
            let p = load(input)?;
            let (t, form) = analyze(&p)?;
            for k in level.k.0.clone() {
                let z = partition_function(&form, &t.torsion_numbers, k)?;
                if json {
                    #[derive(Serialize)]
                    struct ZkReport {
                        #[serde(flatten)]
                        header: Header,
                        k: i64,
                        z_k: ZkJson,
                    }
                    emit_json(out, &ZkReport { header: header(&p, &t), k, z_k: ZkJson::new(&z) })?;
                } else {
                    let exact = if z.is_exactly_zero() { "exactly zero" } else { "exact" };
                    writeln!(out, "Z_{k} = {} ({exact})", format_complex(z.evaluate()))?;
                    let phases: Vec<String> = z
                        .phases()
                        .iter()
                        .map(|ph| format!("{}/{} x{}", ph.num, ph.den, ph.mult))
                        .collect();
                    writeln!(out, "  phases: {}", phases.join(", "))?;
                }
            }
        }
        Command::Rt { input, level, sum } => {
            let p = load(input)?;
            let (t, _) = analyze(&p)?;
            for k in level.k.0.clone() {
                let i_k: ComplexValue = rt_invariant_with(p.linking_matrix(), k, &sum.options())?;
                if json {
                    #[derive(Serialize)]
                    struct RtReport {
                        #[serde(flatten)]
                        header: Header,
                        k: i64,
                        i_k: ComplexJson,
                    }
                    emit_json(out, &RtReport { header: header(&p, &t), k, i_k: i_k.into() })?;
                } else {
                    writeln!(out, "I_{k} = {}", format_complex(i_k))?;
                }
            }
        }
        Command::Verify { input, level, sum, tol } => {
            let p = load(input)?;
            let mut all_pass = true;
            for k in level.k.0.clone() {
                let r = verify_relation_with(&p, k, *tol, &sum.options())?;
                all_pass &= r.pass;
                if json {
                    #[derive(Serialize)]
                    struct VerifyReport {
                        name: Option<String>,
                        m: usize,
                        det: Value,
                        signature: i64,
                        torsion: Vec<Value>,
                        k: i64,
                        z_k: ZkJson,
                        i_k: ComplexJson,
                        sqrt_p: f64,
                        residual: f64,
                        tolerance: f64,
                        pass: bool,
                    }
                    emit_json(
                        out,
                        &VerifyReport {
                            name: r.name.clone(),
                            m: r.m,
                            det: big_to_json(&r.det),
                            signature: r.signature,
                            torsion: r.torsion_numbers.iter().map(big_to_json).collect(),
                            k,
                            z_k: ZkJson::new(&r.z_exact),
                            i_k: r.i_k.into(),
                            sqrt_p: r.sqrt_p,
                            residual: r.residual,
                            tolerance: r.tolerance,
                            pass: r.pass,
                        },
                    )?;
                } else {
                    let order = r.torsion_numbers.iter().fold(BigInt::from(1), |a, b| a * b);
                    writeln!(
                        out,
                        "[{}] k = {k}: Z = {}, sqrt(p) I = {}, sqrt(p) = sqrt({order}) = {}, residual = {:.3e}",
                        if r.pass { "PASS" } else { "FAIL" },
                        format_complex(r.z_k),
                        format_complex(r.i_k * r.sqrt_p),
                        r.sqrt_p,
                        r.residual,
                    )?;
                }
            }
            if !all_pass {
                return Err(CliError::CheckFailed);
            }
        }
        Command::Reciprocity { a, b, c } => {
            let r = reciprocity_check(*a, *b, *c)?;
            if json {
                #[derive(Serialize)]
                struct ReciprocityReport {
                    a: i64,
                    b: i64,
                    c: i64,
                    lhs: ComplexJson,
                    rhs: ComplexJson,
                    agree: bool,
                }
                emit_json(
                    out,
                    &ReciprocityReport { a: *a, b: *b, c: *c, lhs: r.lhs.into(), rhs: r.rhs.into(), agree: r.agree },
                )?;
            } else {
                writeln!(out, "lhs = {}", format_complex(r.lhs))?;
                writeln!(out, "rhs = {}", format_complex(r.rhs))?;
                writeln!(out, "{}", if r.agree { "agree" } else { "DISAGREE" })?;
            }
            if !r.agree {
                return Err(CliError::CheckFailed);
            }
        }
        Command::Catalog { spec } => {
            let p = spec.build()?;
            if json {
                emit_json(out, &p.to_json())?;
            } else {
                write!(out, "{}", p.to_plain())?;
            }
        }
    }
    Ok(())
}

fn header(p: &SurgeryPresentation, t: &u1cs::TorsionPresentation) -> Header {
    Header {
        name: p.name.clone(),
        m: p.m(),
        det: big_to_json(&t.det),
        signature: t.signature,
        torsion: t.torsion_numbers.iter().map(big_to_json).collect(),
    }
}
