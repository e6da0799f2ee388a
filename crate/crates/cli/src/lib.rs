//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and writes JSON to `stdout`; diagnostics go to `stderr`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use smphull::facet::DEFAULT_VERTEX_BUDGET;
use smphull::rational;
use smphull::rlt::DEFAULT_RLT_BUDGET;
use smphull::{
    build_extform, certify_facet_with_budget, condition_report, core_representative,
    decompose_with_budget, enumerate_hull_facets, expand_core, family_hull, nonneg_on_box_with_budget,
    optimize, separate_runs, supermodularity, tight_characterization_detail, BoxBounds, BoxDomain,
    GeneralBox, GraphPoint, HullDescription, HullError, LinIneq, MultilinearPoly, Rational,
    RunLengthIneq, SeparationStatus, SymmetricPoly,
};

pub mod golden;

pub use golden::{golden_check, GoldenReport, TableId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_CUT: i32 = 3;
pub const EXIT_NEGATIVE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

pub const THREADS_ENV: &str = "SMPHULL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "smphull", version, about = "Exact convex hulls of symmetric multilinear polynomial graphs")]
pub struct Cli {
    /// Worker threads; overrides SMPHULL_THREADS.
    #[arg(long, global = true, value_parser = positive_usize)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Instance {
    /// Symmetric polynomial: {"n":3,"c":{"3":"1"}}
    #[arg(long)]
    pub poly: PathBuf,
    /// Box bounds: {"ell":"1","u":"2"}
    #[arg(long = "box")]
    pub bx: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExtformFormat {
    Json,
    Lp,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form facet description for a supported family.
    Facets {
        #[command(flatten)]
        inst: Instance,
        /// Also list every permuted facet.
        #[arg(long)]
        expand: bool,
        /// Largest expanded facet count accepted with --expand.
        #[arg(long, default_value_t = 100_000, value_parser = positive_u64)]
        cap: u64,
    },
    /// Supermodularity report over the box vertices.
    CheckSupermodular {
        #[command(flatten)]
        inst: Instance,
    },
    /// Maximizes alpha.x + alpha' y over the hull.
    Optimize {
        #[command(flatten)]
        inst: Instance,
        /// {"alpha":["1","0"],"alpha_prime":"-1"}
        #[arg(long)]
        alpha: PathBuf,
    },
    /// Separates a point from the hull; exit code 3 when a cut is found.
    Separate {
        /// Used to derive core facets when --core-facets is absent.
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long = "box")]
        bx: PathBuf,
        /// {"x":["0","0"],"y":"1"}
        #[arg(long)]
        point: PathBuf,
        /// A list of core inequalities or a `facets` output.
        #[arg(long)]
        core_facets: Option<PathBuf>,
    },
    /// Facet certificate and necessary-condition report of an inequality.
    Certify {
        #[command(flatten)]
        inst: Instance,
        /// {"beta0":"0","beta":["1","0"],"beta_prime":"-1"}
        #[arg(long)]
        ineq: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET, value_parser = positive_u64)]
        vertex_budget: u64,
    },
    /// Points where an inequality is tight.
    TightSet {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        ineq: PathBuf,
        /// Graph point with nonincreasing x, decided for a core inequality.
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET, value_parser = positive_u64)]
        vertex_budget: u64,
    },
    /// Coefficients of a multilinear polynomial in the product basis.
    RltDecompose {
        /// Multilinear polynomial: {"n":2,"alpha":{"[1,2]":"1"}}
        #[arg(long)]
        poly: PathBuf,
        /// {"L":[..],"U":[..]} or {"ell":..,"u":..}
        #[arg(long = "box")]
        bx: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RLT_BUDGET, value_parser = positive_u64)]
        vertex_budget: u64,
    },
    /// Nonnegativity over the box; exit code 4 with a negative vertex.
    NonnegCheck {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long = "box")]
        bx: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RLT_BUDGET, value_parser = positive_u64)]
        vertex_budget: u64,
    },
    /// Facets by brute-force hyperplane enumeration (n <= 5).
    OracleHull {
        #[command(flatten)]
        inst: Instance,
    },
    /// Extended formulation of the hull.
    Extform {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_enum, default_value = "json")]
        format: ExtformFormat,
    },
    /// Regenerates a reference table and compares it with embedded data.
    GoldenCheck {
        #[arg(value_enum)]
        table: TableId,
    },
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    positive_u64(s).map(|v| v as usize)
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Hull(HullError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Hull(HullError::BudgetExceeded { .. } | HullError::CapExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_BAD_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Hull(e) => write!(f, "{e}"),
        }
    }
}

impl From<HullError> for CliError {
    fn from(e: HullError) -> Self {
        CliError::Hull(e)
    }
}

/// JSON written to stdout plus the exit code.
pub struct Outcome {
    pub json: String,
    pub code: i32,
}

impl Outcome {
    fn ok<T: Serialize>(value: &T) -> Result<Self, CliError> {
        Self::with_code(value, EXIT_OK)
    }

    fn with_code<T: Serialize>(value: &T, code: i32) -> Result<Self, CliError> {
        let json = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(Outcome { json: json + "\n", code })
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_instance(inst: &Instance) -> Result<(SymmetricPoly, BoxDomain), CliError> {
    let f: SymmetricPoly = read_json(&inst.poly)?;
    let b: BoxBounds = read_json(&inst.bx)?;
    let bx = b.with_dim(f.n())?;
    Ok((f, bx))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyBox {
    General(GeneralBox),
    Uniform(BoxBounds),
}

impl AnyBox {
    fn general(self, n: usize) -> Result<GeneralBox, CliError> {
        match self {
            AnyBox::General(g) => Ok(g),
            AnyBox::Uniform(b) => Ok(b.with_dim(n)?.to_general()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoreList {
    List(Vec<LinIneq>),
    Described { core_facets: Vec<LinIneq> },
}

#[derive(Deserialize)]
struct Objective {
    #[serde(with = "rational::serde_vec")]
    alpha: Vec<Rational>,
    #[serde(with = "rational::serde_str", default)]
    alpha_prime: Rational,
}

#[derive(Serialize)]
struct FacetsOutput<'a> {
    #[serde(flatten)]
    hull: &'a HullDescription,
    #[serde(skip_serializing_if = "Option::is_none")]
    expanded: Option<Vec<LinIneq>>,
}

#[derive(Serialize)]
struct OptimizeOutput {
    #[serde(with = "rational::serde_str")]
    value: Rational,
    argmax: GraphPoint,
}

#[derive(Serialize)]
struct CertifyOutput {
    certificate: smphull::FacetCertificate,
    /// For the core representative, when it is valid.
    conditions: Option<smphull::ConditionReport>,
}

#[derive(Serialize)]
struct TightSetOutput {
    tight_simplex_ks: Vec<usize>,
    #[serde(with = "rational::serde_vec_vec")]
    tight_vertices: Vec<Vec<Rational>>,
    point: Option<smphull::TightVerdict>,
}

/// All facets of a family description, trivial ones last.
pub fn expanded_facets(hull: &HullDescription, cap: u64) -> smphull::Result<Vec<LinIneq>> {
    if hull.expanded_count > cap.into() {
        return Err(HullError::CapExceeded { count: hull.expanded_count.to_string(), cap });
    }
    let mut out = Vec::new();
    for q in &hull.core_facets {
        out.extend(expand_core(q, cap)?);
    }
    out.extend(hull.trivial_facets.iter().cloned());
    Ok(out)
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Facets { inst, expand, cap } => {
            let (f, bx) = load_instance(inst)?;
            let hull = family_hull(&f, &bx)?;
            let expanded = if *expand { Some(expanded_facets(&hull, *cap)?) } else { None };
            Outcome::ok(&FacetsOutput { hull: &hull, expanded })
        }
        Command::CheckSupermodular { inst } => {
            let (f, bx) = load_instance(inst)?;
            Outcome::ok(&supermodularity(&f, &bx)?)
        }
        Command::Optimize { inst, alpha } => {
            let (f, bx) = load_instance(inst)?;
            let obj: Objective = read_json(alpha)?;
            let (value, argmax) = optimize(&obj.alpha, &obj.alpha_prime, &f, &bx)?;
            Outcome::ok(&OptimizeOutput { value, argmax })
        }
        Command::Separate { poly, bx, point, core_facets } => {
            let point: GraphPoint = read_json(point)?;
            let bounds: BoxBounds = read_json(bx)?;
            let f: Option<SymmetricPoly> = poly.as_deref().map(read_json).transpose()?;
            let n = f.as_ref().map_or(point.x.len(), SymmetricPoly::n);
            let bx = bounds.with_dim(n)?;
            let core = match (core_facets, &f) {
                (Some(path), _) => match read_json::<CoreList>(path)? {
                    CoreList::List(v) | CoreList::Described { core_facets: v } => v,
                },
                (None, Some(f)) => family_hull(f, &bx)?.core_facets,
                (None, None) => {
                    return Err(CliError::Input("separate needs --core-facets or --poly".into()))
                }
            };
            let runs = core
                .iter()
                .map(RunLengthIneq::from_core)
                .collect::<smphull::Result<Vec<_>>>()?;
            let verdict = separate_runs(&point, &runs, &bx)?;
            let code = if verdict.status == SeparationStatus::Inside { EXIT_OK } else { EXIT_CUT };
            Outcome::with_code(&verdict, code)
        }
        Command::Certify { inst, ineq, vertex_budget } => {
            let (f, bx) = load_instance(inst)?;
            let q: LinIneq = read_json(ineq)?;
            let certificate = certify_facet_with_budget(&q, &f, &bx, *vertex_budget)?;
            let conditions = if certificate.valid && !q.beta_prime.is_zero() {
                Some(condition_report(&core_representative(&q), &f, &bx)?)
            } else {
                None
            };
            Outcome::ok(&CertifyOutput { certificate, conditions })
        }
        Command::TightSet { inst, ineq, point, vertex_budget } => {
            let (f, bx) = load_instance(inst)?;
            let q: LinIneq = read_json(ineq)?;
            let cert = certify_facet_with_budget(&q, &f, &bx, *vertex_budget)?;
            let point = match point {
                Some(p) => Some(tight_characterization_detail(&q, &f, &bx, &read_json::<GraphPoint>(p)?)?),
                None => None,
            };
            Outcome::ok(&TightSetOutput {
                tight_simplex_ks: cert.tight_simplex_ks.into_iter().collect(),
                tight_vertices: cert.tight_vertices,
                point,
            })
        }
        Command::RltDecompose { poly, bx, vertex_budget } => {
            let p: MultilinearPoly = read_json(poly)?;
            let gb = read_json::<AnyBox>(bx)?.general(p.n())?;
            Outcome::ok(&decompose_with_budget(&p, &gb, *vertex_budget)?)
        }
        Command::NonnegCheck { poly, bx, vertex_budget } => {
            let p: MultilinearPoly = read_json(poly)?;
            let gb = read_json::<AnyBox>(bx)?.general(p.n())?;
            let verdict = nonneg_on_box_with_budget(&p, &gb, *vertex_budget)?;
            let code = if verdict.nonneg { EXIT_OK } else { EXIT_NEGATIVE };
            Outcome::with_code(&verdict, code)
        }
        Command::OracleHull { inst } => {
            let (f, bx) = load_instance(inst)?;
            Outcome::ok(&enumerate_hull_facets(&f, &bx)?)
        }
        Command::Extform { inst, format } => {
            let (f, bx) = load_instance(inst)?;
            let form = build_extform(&f, &bx)?;
            match format {
                ExtformFormat::Json => Outcome::ok(&form),
                ExtformFormat::Lp => Ok(Outcome { json: form.to_lp(), code: EXIT_OK }),
            }
        }
        Command::GoldenCheck { table } => {
            let report = golden_check(*table)?;
            let code = if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED };
            Outcome::with_code(&report, code)
        }
    }
}

fn thread_count(cli: &Cli) -> Result<Option<usize>, CliError> {
    if cli.threads.is_some() {
        return Ok(cli.threads);
    }
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => positive_usize(v.trim())
            .map(Some)
            .map_err(|e| CliError::Input(format!("{THREADS_ENV}={v}: {e}"))),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_BAD_INPUT
                }
            };
        }
    };
    let result = thread_count(&cli).and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t);
        }
        let pool = builder.build().map_err(|e| CliError::Input(e.to_string()))?;
        pool.install(|| execute(&cli.command))
    });
    match result {
        Ok(out) => {
            if stdout.write_all(out.json.as_bytes()).is_err() {
                return EXIT_BAD_INPUT;
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
