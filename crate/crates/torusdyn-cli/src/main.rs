//! Batch harness: every experiment behind one binary with flat JSON
//! configs, machine-readable outputs, and reproducible seeding.
//!
//! Exit codes: 2 for schema violations, 3 for numerical failures, 4 for
//! invariant violations detected mid-run.

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use torusdyn::config::{
    fmt_real, DecompositionReport, FunctionalSetRecord, OffsetTagRecord, PolytopeRecord, RatStr,
    Real, WeightSystemRecord,
};
use torusdyn::rat::{fmt_rat, rat_to_f64, Rat};
use torusdyn::{cones, dynamics, lattice, polytopes, sp, weights};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "torusdyn",
    version,
    about = "polytope, lattice and counting experiments"
)]
struct Cli {
    /// Master seed for every Monte-Carlo substream
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (results are independent of this)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Weight-system algebra
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Functional-set decomposition
    Cones {
        #[command(subcommand)]
        cmd: ConesCmd,
    },
    /// Exact polytope geometry
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Shortest vectors and non-divergence polytopes
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Symplectic variety counting
    Count {
        #[command(subcommand)]
        cmd: CountCmd,
    },
    /// Oscillatory integrals and shearing
    #[command(name = "dyn")]
    Dynamics {
        #[command(subcommand)]
        cmd: DynCmd,
    },
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Direct sum of all exterior powers
    Wedge {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tensor product of two systems
    Tensor {
        #[arg(long)]
        config: PathBuf,
    },
    /// Single exterior power
    Ext {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum ConesCmd {
    /// Classify a schedule into diverging / plain / degenerate parts
    Decompose {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    Volume {
        #[arg(long)]
        config: PathBuf,
    },
    Vertices {
        #[arg(long)]
        config: PathBuf,
    },
    /// Split-polytope volume-ratio experiment
    Ratio {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    Svp {
        #[arg(long)]
        config: PathBuf,
    },
    Omega {
        #[arg(long)]
        config: PathBuf,
    },
    Mahler {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Exact rank-one point counts over a radius ladder
    Sp {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "N")]
        n: Option<usize>,
        /// comma-separated d values
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
        /// comma-separated radii
        #[arg(long = "R", value_delimiter = ',')]
        r: Option<Vec<f64>>,
    },
    /// The normalization constants C1, C2 and their ingredients
    Constants {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
    },
    /// Monte-Carlo ball-volume ratios
    Ballratio {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
        #[arg(long = "R")]
        r: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Wedge-norm growth statistics
    Growth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long = "R", value_delimiter = ',')]
        r: Option<Vec<f64>>,
        #[arg(long)]
        epsilon_prime: Option<f64>,
    },
}

#[derive(Subcommand)]
enum DynCmd {
    /// Oscillatory integral over a ladder of wrapping frequencies
    Osc {
        #[arg(long)]
        config: PathBuf,
    },
    /// Empirical discrepancy of the wrapped curve
    Wrap {
        #[arg(long)]
        config: PathBuf,
    },
    /// Conjugation-limit deviations
    Shear {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Anything a command hands back: the envelope fields plus an optional
/// tabular rendering.
struct Output {
    config: serde_json::Value,
    result: serde_json::Value,
    csv: Option<String>,
}

#[derive(Serialize)]
struct Envelope {
    schema_version: u32,
    command: String,
    seed: Option<u64>,
    config: serde_json::Value,
    result: serde_json::Value,
}

enum CliError {
    Schema(String),
    Lib(torusdyn::Error),
}

impl From<torusdyn::Error> for CliError {
    fn from(e: torusdyn::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        use torusdyn::Error::*;
        match self {
            CliError::Schema(_) => 2,
            CliError::Lib(e) => match e {
                RankMismatch(..) | DimensionMismatch { .. } | OutOfRange(..) | InvalidInput(..) => {
                    2
                }
                SingularMatrix
                | UnboundedPolytope
                | EmptyPolytope
                | Infeasible(..)
                | OffHyperboloid(..)
                | DegenerateRounding
                | QuadratureFailure(..) => 3,
                ContainmentViolation(..) | InvariantViolation(..) => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Schema(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

fn schema<T: std::fmt::Display>(e: T) -> CliError {
    CliError::Schema(e.to_string())
}

fn load_config<T: for<'de> Deserialize<'de>>(
    path: &Path,
) -> Result<(T, serde_json::Value), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| schema(format!("bad config JSON: {e}")))?;
    let parsed: T =
        serde_json::from_value(value.clone()).map_err(|e| schema(format!("bad config: {e}")))?;
    Ok((parsed, value))
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn main() {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    let command_name = command_name(&cli.command);
    match dispatch(&cli) {
        Ok(output) => {
            let rendered = match cli.format {
                Format::Json => {
                    let envelope = Envelope {
                        schema_version: SCHEMA_VERSION,
                        command: command_name,
                        seed: cli.seed,
                        config: output.config,
                        result: output.result,
                    };
                    let mut s = serde_json::to_string_pretty(&envelope).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Csv => match output.csv {
                    Some(csv) => csv,
                    None => {
                        eprintln!("error: this command has no CSV rendering");
                        std::process::exit(2);
                    }
                },
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        std::process::exit(3);
                    }
                }
                None => print!("{rendered}"),
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Weights { cmd } => match cmd {
            WeightsCmd::Wedge { .. } => "weights wedge",
            WeightsCmd::Tensor { .. } => "weights tensor",
            WeightsCmd::Ext { .. } => "weights ext",
        },
        Command::Cones { .. } => "cones decompose",
        Command::Poly { cmd } => match cmd {
            PolyCmd::Volume { .. } => "poly volume",
            PolyCmd::Vertices { .. } => "poly vertices",
            PolyCmd::Ratio { .. } => "poly ratio",
        },
        Command::Lattice { cmd } => match cmd {
            LatticeCmd::Svp { .. } => "lattice svp",
            LatticeCmd::Omega { .. } => "lattice omega",
            LatticeCmd::Mahler { .. } => "lattice mahler",
        },
        Command::Count { cmd } => match cmd {
            CountCmd::Sp { .. } => "count sp",
            CountCmd::Constants { .. } => "count constants",
            CountCmd::Ballratio { .. } => "count ballratio",
            CountCmd::Growth { .. } => "count growth",
        },
        Command::Dynamics { cmd } => match cmd {
            DynCmd::Osc { .. } => "dyn osc",
            DynCmd::Wrap { .. } => "dyn wrap",
            DynCmd::Shear { .. } => "dyn shear",
        },
    }
    .to_string()
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Weights { cmd } => weights_cmd(cmd),
        Command::Cones { cmd } => cones_cmd(cmd),
        Command::Poly { cmd } => poly_cmd(cmd),
        Command::Lattice { cmd } => lattice_cmd(cmd),
        Command::Count { cmd } => count_cmd(cmd, cli.seed),
        Command::Dynamics { cmd } => dyn_cmd(cmd),
    }
}

// ---------------------------------------------------------------- weights

#[derive(Deserialize)]
struct WeightsUnaryConfig {
    a: WeightSystemRecord,
    #[serde(default)]
    k: Option<u64>,
}

#[derive(Deserialize)]
struct WeightsBinaryConfig {
    a: WeightSystemRecord,
    b: WeightSystemRecord,
}

fn weights_cmd(cmd: &WeightsCmd) -> Result<Output, CliError> {
    match cmd {
        WeightsCmd::Wedge { config } => {
            let (cfg, raw) = load_config::<WeightsUnaryConfig>(config)?;
            let a = cfg.a.into_system()?;
            let result = weights::wedge_closure(&a);
            Ok(Output {
                config: raw,
                result: to_value(&WeightSystemRecord::from_system(&result)),
                csv: None,
            })
        }
        WeightsCmd::Tensor { config } => {
            let (cfg, raw) = load_config::<WeightsBinaryConfig>(config)?;
            let a = cfg.a.into_system()?;
            let b = cfg.b.into_system()?;
            let result = weights::tensor(&a, &b)?;
            Ok(Output {
                config: raw,
                result: to_value(&WeightSystemRecord::from_system(&result)),
                csv: None,
            })
        }
        WeightsCmd::Ext { config } => {
            let (cfg, raw) = load_config::<WeightsUnaryConfig>(config)?;
            let k = cfg
                .k
                .ok_or_else(|| schema("ext requires a degree field k"))?;
            let a = cfg.a.into_system()?;
            let result = weights::exterior_power(&a, k)?;
            Ok(Output {
                config: raw,
                result: to_value(&WeightSystemRecord::from_system(&result)),
                csv: None,
            })
        }
    }
}

// ------------------------------------------------------------------ cones

#[derive(Deserialize)]
struct ConesConfig {
    functional_set: FunctionalSetRecord,
    schedule: Vec<OffsetTagRecord>,
    #[serde(default)]
    metric: Option<Vec<RatStr>>,
}

fn cones_cmd(cmd: &ConesCmd) -> Result<Output, CliError> {
    let ConesCmd::Decompose { config } = cmd;
    let (cfg, raw) = load_config::<ConesConfig>(config)?;
    let phi = cfg.functional_set.into_set()?;
    let schedule: Vec<cones::OffsetTag> = cfg
        .schedule
        .into_iter()
        .map(|t| t.into_tag())
        .collect::<Result<_, _>>()?;
    let metric: Option<Vec<Rat>> = cfg.metric.map(|m| m.into_iter().map(|x| x.0).collect());
    let dec = cones::classify_sequence(&phi, &schedule, metric.as_deref())?;
    Ok(Output {
        config: raw,
        result: to_value(&DecompositionReport::from_decomposition(&dec)),
        csv: None,
    })
}

// ------------------------------------------------------------------- poly

#[derive(Deserialize)]
struct PolyConfig {
    polytope: PolytopeRecord,
}

#[derive(Deserialize)]
struct OmegaRuleRecord {
    rule: String,
    #[serde(default)]
    denom: Option<u64>,
    #[serde(default)]
    num: Option<i64>,
    #[serde(default)]
    den: Option<i64>,
    #[serde(default)]
    value: Option<RatStr>,
}

impl OmegaRuleRecord {
    fn into_rule(self) -> Result<polytopes::OmegaRule, CliError> {
        match self.rule.as_str() {
            "sqrt" => Ok(polytopes::OmegaRule::SqrtRounded {
                denom: self.denom.unwrap_or(1000),
            }),
            "linear" => Ok(polytopes::OmegaRule::LinearFraction {
                num: self.num.ok_or_else(|| schema("linear rule needs num"))?,
                den: self.den.ok_or_else(|| schema("linear rule needs den"))?,
            }),
            "const" => Ok(polytopes::OmegaRule::Constant(
                self.value
                    .ok_or_else(|| schema("const rule needs value"))?
                    .0,
            )),
            other => Err(schema(format!("unknown omega rule {other}"))),
        }
    }
}

#[derive(Deserialize)]
struct InfScheduleRecord {
    base: RatStr,
    slope: RatStr,
}

#[derive(Deserialize)]
struct RatioConfig {
    functional_set: FunctionalSetRecord,
    schedule: Vec<OffsetTagRecord>,
    offsets_bounded: BTreeMap<String, RatStr>,
    schedule_inf: BTreeMap<String, InfScheduleRecord>,
    omega: OmegaRuleRecord,
    n_list: Vec<i64>,
    #[serde(default)]
    metric: Option<Vec<RatStr>>,
}

#[derive(Serialize)]
struct RatioRow {
    n: i64,
    omega: RatStr,
    vol_split: RatStr,
    vol_full: RatStr,
    ratio: RatStr,
    ratio_real: Real,
}

#[derive(Serialize)]
struct RatioResult {
    rows: Vec<RatioRow>,
    limit_estimate: Real,
    converges_to_one: bool,
}

fn parse_index_map<T>(m: BTreeMap<String, T>) -> Result<BTreeMap<usize, T>, CliError> {
    m.into_iter()
        .map(|(k, v)| {
            k.parse::<usize>()
                .map(|i| (i, v))
                .map_err(|_| schema(format!("bad index key {k}")))
        })
        .collect()
}

fn poly_cmd(cmd: &PolyCmd) -> Result<Output, CliError> {
    match cmd {
        PolyCmd::Volume { config } => {
            let (cfg, raw) = load_config::<PolyConfig>(config)?;
            let p = cfg.polytope.into_polytope()?;
            let vol = p.volume()?;
            Ok(Output {
                config: raw,
                result: serde_json::json!({
                    "volume": fmt_rat(&vol),
                    "volume_real": fmt_real(rat_to_f64(&vol)),
                }),
                csv: None,
            })
        }
        PolyCmd::Vertices { config } => {
            let (cfg, raw) = load_config::<PolyConfig>(config)?;
            let p = cfg.polytope.into_polytope()?;
            let verts = p.vertices()?;
            let rows: Vec<Vec<String>> = verts
                .iter()
                .map(|v| v.iter().map(fmt_rat).collect())
                .collect();
            Ok(Output {
                config: raw,
                result: serde_json::json!({ "vertices": rows }),
                csv: None,
            })
        }
        PolyCmd::Ratio { config } => {
            let (cfg, raw) = load_config::<RatioConfig>(config)?;
            let phi = cfg.functional_set.into_set()?;
            let schedule: Vec<cones::OffsetTag> = cfg
                .schedule
                .into_iter()
                .map(|t| t.into_tag())
                .collect::<Result<_, _>>()?;
            let metric: Option<Vec<Rat>> = cfg.metric.map(|m| m.into_iter().map(|x| x.0).collect());
            let dec = cones::classify_sequence(&phi, &schedule, metric.as_deref())?;
            let b_bounded: polytopes::Offsets = parse_index_map(cfg.offsets_bounded)?
                .into_iter()
                .map(|(i, v)| (i, v.0))
                .collect();
            let schedule_inf: BTreeMap<usize, polytopes::InfSchedule> =
                parse_index_map(cfg.schedule_inf)?
                    .into_iter()
                    .map(|(i, s)| {
                        (
                            i,
                            polytopes::InfSchedule {
                                base: s.base.0,
                                slope: s.slope.0,
                            },
                        )
                    })
                    .collect();
            let rule = cfg.omega.into_rule()?;
            let report = polytopes::ratio_experiment(
                &phi,
                &dec,
                &b_bounded,
                &schedule_inf,
                &rule,
                &cfg.n_list,
                metric.as_deref(),
            )?;
            let rows: Vec<RatioRow> = (0..report.n_values.len())
                .map(|i| RatioRow {
                    n: report.n_values[i],
                    omega: RatStr(report.omega_values[i].clone()),
                    vol_split: RatStr(report.vol_split[i].clone()),
                    vol_full: RatStr(report.vol_full[i].clone()),
                    ratio: RatStr(report.ratios[i].clone()),
                    ratio_real: Real(rat_to_f64(&report.ratios[i])),
                })
                .collect();
            let mut csv = String::from("n,omega,vol_split,vol_full,ratio\n");
            for row in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n,
                    fmt_rat(&row.omega.0),
                    fmt_rat(&row.vol_split.0),
                    fmt_rat(&row.vol_full.0),
                    fmt_real(row.ratio_real.0),
                ));
            }
            Ok(Output {
                config: raw,
                result: to_value(&RatioResult {
                    rows,
                    limit_estimate: Real(report.limit_estimate),
                    converges_to_one: report.converges_to_one,
                }),
                csv: Some(csv),
            })
        }
    }
}

// ---------------------------------------------------------------- lattice

#[derive(Deserialize)]
struct SvpConfig {
    matrix: Vec<Vec<Real>>,
}

#[derive(Deserialize)]
struct MahlerConfig {
    matrix: Vec<Vec<Real>>,
    eta: Real,
}

#[derive(Deserialize)]
struct BlockRecord {
    character: Vec<i64>,
    matrix: Vec<Vec<Real>>,
}

#[derive(Deserialize)]
struct OmegaConfig {
    rank: usize,
    blocks: Vec<BlockRecord>,
    epsilon: Real,
    /// characters to include; all blocks when absent
    #[serde(default)]
    phi: Option<Vec<Vec<i64>>>,
}

fn reals_to_f64(m: Vec<Vec<Real>>) -> Vec<Vec<f64>> {
    m.into_iter()
        .map(|r| r.into_iter().map(|x| x.0).collect())
        .collect()
}

fn lattice_cmd(cmd: &LatticeCmd) -> Result<Output, CliError> {
    match cmd {
        LatticeCmd::Svp { config } => {
            let (cfg, raw) = load_config::<SvpConfig>(config)?;
            let result = lattice::shortest_vector(&reals_to_f64(cfg.matrix))?;
            Ok(Output {
                config: raw,
                result: serde_json::json!({
                    "min_norm": fmt_real(result.norm()),
                    "min_sq": fmt_rat(&result.min_sq),
                    "witness": result.witness,
                }),
                csv: None,
            })
        }
        LatticeCmd::Omega { config } => {
            let (cfg, raw) = load_config::<OmegaConfig>(config)?;
            let blocks: Vec<lattice::LatticeBlock> = cfg
                .blocks
                .iter()
                .map(|b| lattice::LatticeBlock {
                    character: weights::Character::new(b.character.clone()),
                    matrix: b
                        .matrix
                        .iter()
                        .map(|r| r.iter().map(|x| x.0).collect())
                        .collect(),
                })
                .collect();
            let act = lattice::WeightLatticeAction::new(cfg.rank, blocks)?;
            let phi: std::collections::BTreeSet<weights::Character> = match cfg.phi {
                Some(list) => list.into_iter().map(weights::Character::new).collect(),
                None => act.blocks().iter().map(|b| b.character.clone()).collect(),
            };
            let p = lattice::omega_polytope(&act, cfg.epsilon.0, &phi)?;
            Ok(Output {
                config: raw,
                result: to_value(&PolytopeRecord::from_polytope(&p)),
                csv: None,
            })
        }
        LatticeCmd::Mahler { config } => {
            let (cfg, raw) = load_config::<MahlerConfig>(config)?;
            let matrix = reals_to_f64(cfg.matrix);
            let member = lattice::mahler_membership(&matrix, cfg.eta.0)?;
            let norm = lattice::shortest_vector(&matrix)?.norm();
            Ok(Output {
                config: raw,
                result: serde_json::json!({
                    "member": member,
                    "min_norm": fmt_real(norm),
                }),
                csv: None,
            })
        }
    }
}

// ------------------------------------------------------------------ count

#[derive(Deserialize, Serialize)]
struct SpecRecord {
    #[serde(rename = "N")]
    n: usize,
    d: Vec<u64>,
}

#[derive(Deserialize)]
struct CountSpConfig {
    #[serde(flatten)]
    spec: SpecRecord,
    #[serde(rename = "R")]
    r: Vec<f64>,
}

#[derive(Deserialize)]
struct BallratioConfig {
    #[serde(flatten)]
    spec: SpecRecord,
    #[serde(rename = "R")]
    r: f64,
    epsilon: f64,
    samples: u64,
}

#[derive(Deserialize)]
struct GrowthConfig {
    #[serde(flatten)]
    spec: SpecRecord,
    samples: u64,
    #[serde(rename = "R_list")]
    r_list: Vec<f64>,
    epsilon_prime: f64,
}

fn make_spec(rec: &SpecRecord) -> Result<sp::SymplecticSpec, CliError> {
    Ok(sp::SymplecticSpec::new(rec.n, rec.d.clone())?)
}

fn require_seed(seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| schema("this command runs Monte-Carlo and requires --seed"))
}

fn count_cmd(cmd: &CountCmd, seed: Option<u64>) -> Result<Output, CliError> {
    match cmd {
        CountCmd::Sp { config, n, d, r } => {
            let (cfg, raw) = match config {
                Some(path) => load_config::<CountSpConfig>(path)?,
                None => {
                    let rec = SpecRecord {
                        n: n.ok_or_else(|| schema("need --N or --config"))?,
                        d: d.clone().ok_or_else(|| schema("need --d or --config"))?,
                    };
                    let r = r.clone().ok_or_else(|| schema("need --R or --config"))?;
                    let raw = serde_json::json!({
                        "N": rec.n, "d": rec.d, "R": r,
                    });
                    (CountSpConfig { spec: rec, r }, raw)
                }
            };
            let spec = make_spec(&cfg.spec)?;
            let series = sp::count_series_n1(&spec, &cfg.r)?;
            let mut csv = String::from("R,count,N_R,count_over_N_R\n");
            for e in &series {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_real(e.r),
                    e.count,
                    fmt_real(e.n_r),
                    fmt_real(e.count_over_n_r),
                ));
            }
            let rows: Vec<serde_json::Value> = series
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "R": fmt_real(e.r),
                        "count": e.count,
                        "N_R": fmt_real(e.n_r),
                        "count_over_N_R": fmt_real(e.count_over_n_r),
                    })
                })
                .collect();
            Ok(Output {
                config: raw,
                result: serde_json::json!({ "rows": rows }),
                csv: Some(csv),
            })
        }
        CountCmd::Constants { config, n, d } => {
            let (rec, raw) = match config {
                Some(path) => load_config::<SpecRecord>(path)?,
                None => {
                    let rec = SpecRecord {
                        n: n.ok_or_else(|| schema("need --N or --config"))?,
                        d: d.clone().ok_or_else(|| schema("need --d or --config"))?,
                    };
                    let raw = to_value(&rec);
                    (rec, raw)
                }
            };
            let spec = make_spec(&rec)?;
            let rep = sp::constants_report(&spec)?;
            Ok(Output {
                config: raw,
                result: serde_json::json!({
                    "C1": fmt_real(rep.c1),
                    "C2": fmt_real(rep.c2),
                    "jacobian": rep.jacobian.to_string(),
                    "xi_values": rep.xi_values.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>(),
                    "c1_polytope_volume": fmt_rat(&rep.c1_polytope_volume),
                }),
                csv: None,
            })
        }
        CountCmd::Ballratio {
            config,
            n,
            d,
            r,
            epsilon,
            samples,
        } => {
            let seed = require_seed(seed)?;
            let (cfg, raw) = match config {
                Some(path) => load_config::<BallratioConfig>(path)?,
                None => {
                    let rec = SpecRecord {
                        n: n.ok_or_else(|| schema("need --N or --config"))?,
                        d: d.clone().ok_or_else(|| schema("need --d or --config"))?,
                    };
                    let r = r.ok_or_else(|| schema("need --R or --config"))?;
                    let epsilon = epsilon.ok_or_else(|| schema("need --epsilon or --config"))?;
                    let samples = samples.ok_or_else(|| schema("need --samples or --config"))?;
                    let raw = serde_json::json!({
                        "N": rec.n, "d": rec.d, "R": r,
                        "epsilon": epsilon, "samples": samples,
                    });
                    (
                        BallratioConfig {
                            spec: rec,
                            r,
                            epsilon,
                            samples,
                        },
                        raw,
                    )
                }
            };
            let spec = make_spec(&cfg.spec)?;
            let rep = sp::ball_ratio_mc(&spec, cfg.r, cfg.epsilon, cfg.samples, seed)?;
            Ok(Output {
                config: raw,
                result: serde_json::json!({
                    "ratio_BRe_BR": fmt_real(rep.ratio_floor),
                    "ratio_BR_C2RN2": fmt_real(rep.ratio_main),
                }),
                csv: None,
            })
        }
        CountCmd::Growth {
            config,
            n,
            d,
            samples,
            r,
            epsilon_prime,
        } => {
            let seed = require_seed(seed)?;
            let (cfg, raw) = match config {
                Some(path) => load_config::<GrowthConfig>(path)?,
                None => {
                    let rec = SpecRecord {
                        n: n.ok_or_else(|| schema("need --N or --config"))?,
                        d: d.clone().ok_or_else(|| schema("need --d or --config"))?,
                    };
                    let samples = samples.ok_or_else(|| schema("need --samples or --config"))?;
                    let r_list = r.clone().ok_or_else(|| schema("need --R or --config"))?;
                    let epsilon_prime =
                        epsilon_prime.ok_or_else(|| schema("need --epsilon-prime or --config"))?;
                    let raw = serde_json::json!({
                        "N": rec.n, "d": rec.d, "samples": samples,
                        "R_list": r_list, "epsilon_prime": epsilon_prime,
                    });
                    (
                        GrowthConfig {
                            spec: rec,
                            samples,
                            r_list,
                            epsilon_prime,
                        },
                        raw,
                    )
                }
            };
            let spec = make_spec(&cfg.spec)?;
            let rep = sp::growth_estimate_check(
                &spec,
                cfg.samples,
                &cfg.r_list,
                cfg.epsilon_prime,
                seed,
            )?;
            let mut csv = String::from("R,max_rel_dev,max_abs_dev\n");
            for row in &rep.rows {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    fmt_real(row.r),
                    fmt_real(row.max_rel_dev),
                    fmt_real(row.max_abs_dev),
                ));
            }
            let rows: Vec<serde_json::Value> = rep
                .rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "R": fmt_real(row.r),
                        "max_rel_dev": fmt_real(row.max_rel_dev),
                        "max_abs_dev": fmt_real(row.max_abs_dev),
                        "per_set": row.per_set.iter()
                            .map(|(l, v)| serde_json::json!([l, fmt_real(*v)]))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Output {
                config: raw,
                result: serde_json::json!({ "rows": rows }),
                csv: Some(csv),
            })
        }
    }
}

// -------------------------------------------------------------------- dyn

#[derive(Deserialize)]
struct BumpRecord {
    x0: Real,
    x1: Real,
    p: u32,
    q: u32,
}

impl BumpRecord {
    fn into_bump(self) -> Result<dynamics::BumpFunction, CliError> {
        Ok(dynamics::BumpFunction::new(
            self.x0.0, self.x1.0, self.p, self.q,
        )?)
    }
}

#[derive(Deserialize)]
struct OscConfig {
    bump: BumpRecord,
    m: i64,
    n_list: Vec<i64>,
}

#[derive(Deserialize)]
struct ModeRecord {
    m: i64,
    bump: BumpRecord,
}

#[derive(Deserialize)]
struct WrapConfig {
    n_list: Vec<u64>,
    window: (Real, Real),
    num_points: usize,
    modes: Vec<ModeRecord>,
}

#[derive(Deserialize)]
struct ShearConfigRecord {
    n: usize,
    v: Vec<Real>,
    lambda: Real,
    k_list: Vec<u64>,
}

fn dyn_cmd(cmd: &DynCmd) -> Result<Output, CliError> {
    match cmd {
        DynCmd::Osc { config } => {
            let (cfg, raw) = load_config::<OscConfig>(config)?;
            let bump = cfg.bump.into_bump()?;
            let mut csv = String::from("n,re,im,abs\n");
            let mut rows = Vec::new();
            for &n in &cfg.n_list {
                let (re, im) = dynamics::oscillatory_integral(&bump, cfg.m, n)?;
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    n,
                    fmt_real(re),
                    fmt_real(im),
                    fmt_real(re.hypot(im)),
                ));
                rows.push(serde_json::json!({
                    "n": n,
                    "re": fmt_real(re),
                    "im": fmt_real(im),
                    "abs": fmt_real(re.hypot(im)),
                }));
            }
            Ok(Output {
                config: raw,
                result: serde_json::json!({ "rows": rows }),
                csv: Some(csv),
            })
        }
        DynCmd::Wrap { config } => {
            let (cfg, raw) = load_config::<WrapConfig>(config)?;
            let modes: Vec<(i64, dynamics::BumpFunction)> = cfg
                .modes
                .into_iter()
                .map(|m| Ok((m.m, m.bump.into_bump()?)))
                .collect::<Result<_, CliError>>()?;
            let window = (cfg.window.0 .0, cfg.window.1 .0);
            let mut csv = String::from("n,discrepancy\n");
            let mut rows = Vec::new();
            for &n in &cfg.n_list {
                let d = dynamics::wrap_curve_discrepancy(n, window, cfg.num_points, &modes)?;
                csv.push_str(&format!("{},{}\n", n, fmt_real(d)));
                rows.push(serde_json::json!({ "n": n, "discrepancy": fmt_real(d) }));
            }
            Ok(Output {
                config: raw,
                result: serde_json::json!({ "rows": rows }),
                csv: Some(csv),
            })
        }
        DynCmd::Shear { config } => {
            let (cfg, raw) = load_config::<ShearConfigRecord>(config)?;
            let shear = dynamics::ShearConfig {
                n: cfg.n,
                v: cfg.v.iter().map(|x| x.0).collect(),
                lambda: cfg.lambda.0,
                k_list: cfg.k_list,
            };
            let rep = dynamics::conjugation_limit_check(&shear)?;
            let mut csv = String::from("k,deviation\n");
            let mut rows = Vec::new();
            for (k, dev) in &rep.rows {
                csv.push_str(&format!("{},{}\n", k, fmt_real(*dev)));
                rows.push(serde_json::json!({ "k": k, "deviation": fmt_real(*dev) }));
            }
            Ok(Output {
                config: raw,
                result: serde_json::json!({ "rows": rows }),
                csv: Some(csv),
            })
        }
    }
}
