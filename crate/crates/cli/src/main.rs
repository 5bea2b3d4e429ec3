//! Command-line front end: region boundaries, bandwidth-ratio
//! verdicts, Gaussian power bounds, and the self-check suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use srcbc_core::binary_bc::{
    capacity_region, regime_classify, BinaryBroadcastSpec, RegimeLabel, SideInfoMode,
};
use srcbc_core::infotheory::Probability;
use srcbc_core::linalg::SpdMatrix;
use srcbc_core::source_hamming::{
    check_kappa_gap, kappa_star_closed_form, ClosedFormKappa, HammingDistortionPair,
};
use std::path::PathBuf;
use std::process::ExitCode;

mod verify;

#[derive(Parser)]
#[command(name = "srcbc", version, about = "Source broadcast rate regions and power bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a capacity-region boundary.
    Region {
        #[command(flatten)]
        channel: ChannelFlags,
        #[arg(long, value_enum, default_value_t = Mode::None)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Boundary sample count.
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Bandwidth-ratio verdict for a Hamming distortion pair.
    Kappa {
        d1: f64,
        d2: f64,
        #[command(flatten)]
        channel: ChannelFlags,
    },
    /// Gaussian power lower bounds.
    Gaussian {
        #[command(subcommand)]
        which: GaussianCmd,
    },
    /// Run the oracle cross-check suite.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
}

#[derive(Args)]
struct ChannelFlags {
    /// Two binary symmetric channels: crossovers p1 p2.
    #[arg(long, num_args = 2, value_names = ["P1", "P2"])]
    bsbc: Option<Vec<f64>>,
    /// Two binary erasure channels: erasure rates e1 e2.
    #[arg(long, num_args = 2, value_names = ["E1", "E2"])]
    bebc: Option<Vec<f64>>,
    /// BSC to receiver 1, BEC to receiver 2: p eps.
    #[arg(long, num_args = 2, value_names = ["P", "EPS"])]
    bscbec: Option<Vec<f64>>,
}

impl ChannelFlags {
    fn to_spec(&self) -> Result<BinaryBroadcastSpec, String> {
        let prob = |v: f64| Probability::new(v).map_err(|e| e.to_string());
        let mut specs = Vec::new();
        if let Some(v) = &self.bsbc {
            specs.push(BinaryBroadcastSpec::Bsbc(prob(v[0])?, prob(v[1])?));
        }
        if let Some(v) = &self.bebc {
            specs.push(BinaryBroadcastSpec::Bebc(prob(v[0])?, prob(v[1])?));
        }
        if let Some(v) = &self.bscbec {
            specs.push(BinaryBroadcastSpec::BscBec(prob(v[0])?, prob(v[1])?));
        }
        match specs.len() {
            1 => {
                let s = specs[0];
                s.validate().map_err(|e| e.to_string())?;
                Ok(s)
            }
            0 => Err("one of --bsbc, --bebc, --bscbec is required".into()),
            _ => Err("channel flags are mutually exclusive".into()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    None,
    C1,
    C2,
}

impl Mode {
    fn side_info(self) -> SideInfoMode {
        match self {
            Mode::None => SideInfoMode::None,
            Mode::C1 => SideInfoMode::Msg2AtRx1,
            Mode::C2 => SideInfoMode::Msg1AtRx2,
        }
    }
    fn name(self) -> &'static str {
        match self {
            Mode::None => "none",
            Mode::C1 => "c1",
            Mode::C2 => "c2",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum GaussianCmd {
    /// Minimal power for a fixed distortion pair.
    Pstar(GaussianArgs),
    /// Rectangle distortion sets (caps in place of the pair).
    Rect(GaussianArgs),
    /// Partitioned reconstruction with per-receiver blocks.
    Partitioned {
        /// JSON file: {"sigma_s", "lambda1", "lambda2", "split"}.
        #[arg(long)]
        matrix_file: PathBuf,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        n1: f64,
        #[arg(long)]
        n2: f64,
    },
}

#[derive(Args)]
struct GaussianArgs {
    /// Scalar instance: source variance, d1, d2.
    #[arg(long, num_args = 3, value_names = ["SS", "D1", "D2"])]
    scalar: Option<Vec<f64>>,
    /// JSON file with row-major "sigma_s", "d1", "d2" matrices.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
    #[arg(long)]
    kappa: f64,
    #[arg(long)]
    n1: f64,
    #[arg(long)]
    n2: f64,
}

fn spec_echo(spec: BinaryBroadcastSpec) -> serde_json::Value {
    let (family, a, b) = match spec {
        BinaryBroadcastSpec::Bsbc(x, y) => ("bsbc", x, y),
        BinaryBroadcastSpec::Bebc(x, y) => ("bebc", x, y),
        BinaryBroadcastSpec::BscBec(x, y) => ("bscbec", x, y),
    };
    serde_json::json!({"family": family, "params": [a.value(), b.value()]})
}

fn regime_echo(spec: BinaryBroadcastSpec) -> serde_json::Value {
    match spec {
        BinaryBroadcastSpec::BscBec(p, e) => match regime_classify(p, e) {
            RegimeLabel::ErasureLow => "erasure_low".into(),
            RegimeLabel::ErasureMid => "erasure_mid".into(),
            RegimeLabel::ErasureHigh => "erasure_high".into(),
        },
        _ => serde_json::Value::Null,
    }
}

fn cmd_region(channel: &ChannelFlags, mode: Mode, format: Format, points: usize) -> Result<String, String> {
    let spec = channel.to_spec()?;
    let region = capacity_region(spec, mode.side_info()).map_err(|e| e.to_string())?;
    match format {
        Format::Csv => Ok(region.to_csv(points)),
        Format::Json => {
            let (c1, c2) = spec.channel_capacities();
            let out = serde_json::json!({
                "schema": 1,
                "spec": spec_echo(spec),
                "mode": mode.name(),
                "regime": regime_echo(spec),
                "corner_capacities": [c1.value(), c2.value()],
                "region": region.to_json(points),
            });
            Ok(format!("{}", serde_json::to_string_pretty(&out).unwrap()))
        }
    }
}

fn cmd_kappa(d1: f64, d2: f64, channel: &ChannelFlags) -> Result<String, String> {
    let spec = channel.to_spec()?;
    let d = HammingDistortionPair::new(d1, d2).map_err(|e| e.to_string())?;
    let verdict = check_kappa_gap(d, spec).map_err(|e| e.to_string())?;
    let (closed_form, delta) = match kappa_star_closed_form(d, spec) {
        Ok(ClosedFormKappa::Value(v)) => (
            serde_json::json!(v),
            serde_json::json!(v - verdict.kappa_star),
        ),
        _ => (serde_json::Value::Null, serde_json::Value::Null),
    };
    let mut out = serde_json::json!({
        "schema": 1,
        "spec": spec_echo(spec),
        "d1": d1,
        "d2": d2,
        "closed_form": closed_form,
        "closed_form_delta": delta,
    });
    let verdict_json = serde_json::to_value(&verdict).unwrap();
    for (k, v) in verdict_json.as_object().unwrap() {
        out[k] = v.clone();
    }
    Ok(format!("{}", serde_json::to_string_pretty(&out).unwrap()))
}

fn parse_matrix(v: &serde_json::Value, key: &str) -> Result<SpdMatrix, String> {
    let rows: Vec<Vec<f64>> = serde_json::from_value(
        v.get(key)
            .ok_or_else(|| format!("matrix file missing key {key:?}"))?
            .clone(),
    )
    .map_err(|e| format!("{key}: {e}"))?;
    SpdMatrix::from_rows(rows).map_err(|e| format!("{key}: {e}"))
}

fn load_matrices(args: &GaussianArgs) -> Result<(SpdMatrix, SpdMatrix, SpdMatrix), String> {
    match (&args.scalar, &args.matrix_file) {
        (Some(v), None) => {
            let s = |x: f64| SpdMatrix::from_rows(vec![vec![x]]).map_err(|e| e.to_string());
            Ok((s(v[0])?, s(v[1])?, s(v[2])?))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            Ok((
                parse_matrix(&v, "sigma_s")?,
                parse_matrix(&v, "d1")?,
                parse_matrix(&v, "d2")?,
            ))
        }
        _ => Err("exactly one of --scalar and --matrix-file is required".into()),
    }
}

fn cmd_gaussian(which: &GaussianCmd) -> Result<String, String> {
    let out = match which {
        GaussianCmd::Pstar(a) | GaussianCmd::Rect(a) => {
            let (s, d1, d2) = load_matrices(a)?;
            let bound = match which {
                GaussianCmd::Pstar(_) => {
                    srcbc_core::gaussian::p_star(a.kappa, &s, &d1, &d2, a.n1, a.n2)
                }
                _ => srcbc_core::gaussian::p_lower_bound_rect(a.kappa, &s, &d1, &d2, a.n1, a.n2),
            }
            .map_err(|e| e.to_string())?;
            serde_json::json!({
                "schema": 1,
                "kappa": a.kappa,
                "n1": a.n1,
                "n2": a.n2,
                "p_star": bound.value,
                "optimizer_sigma_z": bound.optimizer_sigma_z,
                "endpoint_values": bound.endpoint_values,
            })
        }
        GaussianCmd::Partitioned { matrix_file, kappa, n1, n2 } => {
            let text = std::fs::read_to_string(matrix_file).map_err(|e| e.to_string())?;
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let s = parse_matrix(&v, "sigma_s")?;
            let l1 = parse_matrix(&v, "lambda1")?;
            let l2 = parse_matrix(&v, "lambda2")?;
            let split: (usize, usize) = serde_json::from_value(
                v.get("split").cloned().unwrap_or(serde_json::json!([l1.dim(), l2.dim()])),
            )
            .map_err(|e| e.to_string())?;
            let bound = srcbc_core::gaussian::p_lower_bound_partitioned(
                *kappa, &s, split, &l1, &l2, *n1, *n2,
            )
            .map_err(|e| e.to_string())?;
            serde_json::json!({
                "schema": 1,
                "kappa": kappa,
                "n1": n1,
                "n2": n2,
                "p_star": bound.value,
                "block_diagonal_value": bound.block_diagonal_value,
                "optimizer_sigma_z": bound.optimizer_sigma_z,
            })
        }
    };
    Ok(format!("{}", serde_json::to_string_pretty(&out).unwrap()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Region { channel, mode, format, points } => {
            cmd_region(channel, *mode, *format, *points)
        }
        Cmd::Kappa { d1, d2, channel } => cmd_kappa(*d1, *d2, channel),
        Cmd::Gaussian { which } => cmd_gaussian(which),
        Cmd::Verify { suite } => {
            let (report, all_pass) = verify::run(*suite);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            return if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match result {
        Ok(text) => {
            println!("{}", text.trim_end_matches('\n'));
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
