use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bloch_qfi::bloch::{bloch_components, to_bloch};
use bloch_qfi::channels::{channel_dynamics, ChannelKind, ChannelSpec, Mode, Quantity};
use bloch_qfi::fisher::{
    qfi_bloch_qubit, qfi_bloch_qudit, qfi_sld, skew_bloch_qubit, skew_bloch_qudit, skew_info, unitary_derivative,
    QfiResult,
};
use bloch_qfi::heom::{heom_qfi_series, qfi_flow, HeomParams};
use bloch_qfi::matrix_io::parse_matrix;
use bloch_qfi::output::{format_g12, time_grid};
use bloch_qfi::ramsey::{ramsey_csv, ramsey_sweep};
use bloch_qfi::{BlochVector, CMatrix, DensityMatrix, Error, GeneratorBasis};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_TRUNCATION: u8 = 4;

/// Quantum Fisher information and skew information of qubit and qudit
/// states, through decoherence channels and hierarchy-equation dynamics.
///
/// Exit codes: 0 success, 2 usage or input error, 3 numerical failure,
/// 4 hierarchy truncation did not converge.
#[derive(Parser, Debug)]
#[command(name = "bloch-qfi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    Channels(ChannelsArgs),
    Heom(HeomArgs),
    Ramsey(RamseyArgs),
    Qfi(QfiArgs),
}

/// Probe qubit (theta, phi) sent through a decoherence channel.
///
/// Writes `t,F_theta,F_phi,I_theta,I_phi`. In `both` mode the numeric
/// pipeline comes first, followed by the closed forms as
/// `F_theta_an,F_phi_an,I_theta_an,I_phi_an` and a `deviation` column
/// (largest absolute difference in the row). Angles in radians, times in
/// units of 1/gamma when gamma = 1.
#[derive(Args, Debug)]
struct ChannelsArgs {
    #[arg(long, value_parser = parse_kind)]
    channel: ChannelKind,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long)]
    gamma: f64,
    /// Mean thermal occupation (gadc only).
    #[arg(long, default_value_t = 0.0)]
    nbar: f64,
    /// Depolarizing clock rate in units of gamma.
    #[arg(long, default_value_t = 1.0)]
    dpc_rate: f64,
    #[arg(long)]
    t_max: f64,
    /// Number of intervals; the grid has t-steps + 1 rows.
    #[arg(long)]
    t_steps: usize,
    #[arg(long, value_parser = parse_mode, default_value = "both")]
    mode: Mode,
    #[arg(long)]
    out: PathBuf,
}

/// Dissipative qubit coupled to a damped-mode bath, hierarchy equations
/// against the rotating-wave solution.
///
/// Writes `t,F_theta,F_phi,I_theta,I_phi` from the hierarchy, then the
/// rotating-wave values as `F_theta_an,F_phi_an,I_theta_an,I_phi_an`.
/// `--flow` appends `sigma_F,sigma_I`, the time derivatives of the
/// hierarchy F_phi and I_phi. Rates and times in units of omega0.
/// The truncation depth starts at `--trunc` and is doubled until the
/// dynamical maps change by less than 1e-6.
#[derive(Args, Debug)]
struct HeomArgs {
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    /// Bath width; defaults to 0.2 omega0.
    #[arg(long)]
    gamma: Option<f64>,
    /// Coupling strength lambda in units of gamma.
    #[arg(long, default_value_t = 0.1)]
    lambda_ratio: f64,
    #[arg(long, default_value_t = 4)]
    trunc: usize,
    /// Largest integrator step; defaults to 1e-3 / omega0.
    #[arg(long)]
    dt: Option<f64>,
    /// Defaults to 50 / omega0.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 500)]
    t_steps: usize,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long)]
    flow: bool,
    #[arg(long)]
    out: PathBuf,
}

/// GHZ probes of N = 1..n-max qubits under collective dephasing.
///
/// Writes `N,t,F_closed,F_numeric,delta_phi,t_c`: closed-form and numeric
/// QFI, the single-shot phase uncertainty and the characteristic time
/// ln N / (2 N^2 gamma), empty for N = 1.
#[derive(Args, Debug)]
struct RamseyArgs {
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long)]
    t_max: f64,
    #[arg(long)]
    t_steps: usize,
    #[arg(long)]
    out: PathBuf,
}

/// Fisher and skew information of a user-supplied state.
///
/// Matrix files: first line d, then d rows of d entries `re,im` separated
/// by single spaces. Prints `quantity,value,classical,quantum,bloch,deviation`
/// to stdout: the spectral (SLD) value with its eigenvalue and eigenvector
/// parts, the Bloch-route value and their difference.
#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("direction").required(true).args(["dstate", "observable"]))]
struct QfiArgs {
    #[arg(long)]
    state: PathBuf,
    /// Derivative of the state along the parameter.
    #[arg(long)]
    dstate: Option<PathBuf>,
    /// Generator G of the unitary orbit exp(-iGl) rho exp(iGl).
    #[arg(long)]
    observable: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Which::Both)]
    which: Which,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "F")]
    F,
    #[value(name = "I")]
    I,
    #[value(name = "both")]
    Both,
}

fn parse_kind(s: &str) -> Result<ChannelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::Parse { .. } => EXIT_USAGE,
            Error::Truncation { .. } => EXIT_TRUNCATION,
            _ => EXIT_NUMERIC,
        };
        Self { code, msg: e.to_string() }
    }
}

type CmdResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Channels(a) => cmd_channels(&a),
        Command::Heom(a) => cmd_heom(&a),
        Command::Ramsey(a) => cmd_ramsey(&a),
        Command::Qfi(a) => cmd_qfi(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn finite(name: &str, v: f64) -> CmdResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::usage(format!("--{name} must be finite")))
    }
}

fn grid(t_max: f64, steps: usize) -> CmdResult<Vec<f64>> {
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Failure::usage(format!("--t-max must be >= 0, got {t_max}")));
    }
    if steps == 0 {
        return Err(Failure::usage("--t-steps must be >= 1"));
    }
    Ok(time_grid(t_max, steps))
}

/// Write through a temporary file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> CmdResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure { code: EXIT_NUMERIC, msg: format!("writing {}: {e}", path.display()) };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn cmd_channels(a: &ChannelsArgs) -> CmdResult<()> {
    finite("theta", a.theta)?;
    finite("phi", a.phi)?;
    let spec = ChannelSpec::new(a.channel, a.gamma, a.nbar)?.with_dpc_rate(a.dpc_rate)?;
    let grid = grid(a.t_max, a.t_steps)?;
    let dyn_ = channel_dynamics(&spec, a.theta, a.phi, &grid, a.mode)?;
    let csv = match &dyn_.overlay {
        Some(ov) => {
            let dev: Vec<f64> = (0..dyn_.primary.len())
                .map(|k| {
                    let (p, q) = (dyn_.primary.row(k), ov.row(k));
                    p.iter().zip(&q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
                })
                .collect();
            dyn_.to_csv_with(&[("deviation", &dev)])?
        }
        None => dyn_.to_csv(),
    };
    write_atomic(&a.out, &csv)
}

fn cmd_heom(a: &HeomArgs) -> CmdResult<()> {
    finite("theta", a.theta)?;
    finite("phi", a.phi)?;
    finite("lambda-ratio", a.lambda_ratio)?;
    let mut p = HeomParams::with_ratio(a.omega0, a.lambda_ratio);
    if let Some(g) = a.gamma {
        p.gamma = g;
        p.lambda = a.lambda_ratio * g;
    }
    p.depth = a.trunc;
    if let Some(dt) = a.dt {
        p.dt = dt;
    }
    if let Some(t) = a.t_max {
        p.t_max = t;
    }
    p.steps = a.t_steps;
    p.validate()?;
    let (numeric, rwa, run) = heom_qfi_series(a.theta, a.phi, &p)?;
    eprintln!("hierarchy depth {} (last doubling changed the maps by {:.3e})", run.depth, run.change);
    let dev = numeric.max_deviation(&rwa)?;
    let dyn_ = bloch_qfi::channels::Dynamics { primary: numeric, overlay: Some(rwa), max_deviation: Some(dev) };
    let csv = if a.flow {
        let t = &dyn_.primary.t;
        let sf = qfi_flow(t, dyn_.primary.get(Quantity::FPhi))?;
        let si = qfi_flow(t, dyn_.primary.get(Quantity::IPhi))?;
        dyn_.to_csv_with(&[("sigma_F", &sf.sigma), ("sigma_I", &si.sigma)])?
    } else {
        dyn_.to_csv()
    };
    write_atomic(&a.out, &csv)
}

fn cmd_ramsey(a: &RamseyArgs) -> CmdResult<()> {
    if a.n_max < 1 {
        return Err(Failure::usage("--n-max must be >= 1"));
    }
    let grid = grid(a.t_max, a.t_steps)?;
    let rows = ramsey_sweep(a.n_max, a.gamma, &grid)?;
    write_atomic(&a.out, &ramsey_csv(&rows))
}

fn read_matrix(path: &Path) -> CmdResult<CMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn numeric(e: Error) -> Failure {
    Failure { code: EXIT_NUMERIC, msg: e.to_string() }
}

fn cmd_qfi(a: &QfiArgs) -> CmdResult<()> {
    let rho = read_matrix(&a.state)?;
    let direction = match (&a.dstate, &a.observable) {
        (Some(p), None) => Direction::Derivative(read_matrix(p)?),
        (None, Some(p)) => Direction::Generator(read_matrix(p)?),
        _ => return Err(Failure::usage("exactly one of --dstate and --observable is required")),
    };
    let rho = DensityMatrix::new(rho).map_err(numeric)?;
    let drho = match direction {
        Direction::Derivative(d) => d,
        Direction::Generator(g) => unitary_derivative(&rho, &g).map_err(numeric)?,
    };
    if drho.nrows() != rho.dim() {
        return Err(Failure::usage(format!("derivative is {}x{}, state is {}x{}", drho.nrows(), drho.ncols(), rho.dim(), rho.dim())));
    }
    let d = rho.dim();
    if d < 2 {
        return Err(Failure::usage("states need dimension >= 2"));
    }
    let basis = GeneratorBasis::new(d)?;
    let w = to_bloch(&rho, &basis).map_err(numeric)?;
    let dw = bloch_components(&drho, &basis).map_err(numeric)?;

    let mut out = String::from("quantity,value,classical,quantum,bloch,deviation\n");
    if a.which != Which::I {
        let r = qfi_sld(&rho, &drho).map_err(numeric)?;
        let b = if d == 2 { qfi_bloch_qubit(&w, dw.as_slice()) } else { qfi_bloch_qudit(&w, dw.as_slice(), &basis) };
        out.push_str(&report_row("F", &r, b.map_err(numeric)?));
    }
    if a.which != Which::F {
        let r = skew_info(&rho, &drho).map_err(numeric)?;
        let b = if d == 2 {
            skew_bloch_qubit(&w, dw.as_slice())
        } else {
            let fam = |l: f64| BlochVector::new(d, w.omega() + &dw * l);
            skew_bloch_qudit(fam, 0.0, &basis)
        };
        out.push_str(&report_row("I", &r, b.map_err(numeric)?));
    }
    print!("{out}");
    Ok(())
}

enum Direction {
    Derivative(CMatrix),
    Generator(CMatrix),
}

fn report_row(name: &str, r: &QfiResult, bloch: f64) -> String {
    format!(
        "{name},{},{},{},{},{}\n",
        format_g12(r.value),
        format_g12(r.classical_part),
        format_g12(r.quantum_part),
        format_g12(bloch),
        format_g12((bloch - r.value).abs())
    )
}
