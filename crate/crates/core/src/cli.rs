//! The `idemcomm` command line.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 obstruction verdict,
//! 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use thiserror::Error;

use crate::factorizer::{factorize, FactorError, Verdict};
use crate::linalg::{
    check_residual, commutator, is_idempotent, text, LinalgError, Matrix, RationalMatrix, RingMatrix,
    ToleranceConfig,
};
use crate::ring::{run_chain, RingError, WITNESS_IDENTITIES};
use crate::shift::{mu_sweep, plot_script, summary, write_csv, Direction, ShiftError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InputError = 1,
    Obstructed = 2,
    VerificationFailed = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Constructed => Self::Success,
            Verdict::ObstructedNoSquareRoot | Verdict::SingularUndecided => Self::Obstructed,
            Verdict::AnticommutationViolated => Self::InputError,
            Verdict::IntertwinerMismatch | Verdict::ResidualCheckFailed => Self::VerificationFailed,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: text::ParseError },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid mu '{0}'")]
    BadMu(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

#[derive(Debug, Parser)]
#[command(name = "idemcomm", version, about = "Factor matrices as commutators of idempotents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TolArgs {
    /// Relative tolerance for identity checks.
    #[arg(long = "tol", default_value_t = ToleranceConfig::default().eq_tol)]
    pub eq_tol: f64,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, default_value_t = ToleranceConfig::default().rank_tol)]
    pub rank_tol: f64,
}

impl TolArgs {
    pub fn config(&self) -> Result<ToleranceConfig, LinalgError> {
        ToleranceConfig::new(self.eq_tol, self.rank_tol)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find an idempotent Q with [(U+I)/2, Q] = T.
    Factorize {
        t: PathBuf,
        u: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check P² = P, Q² = Q and PQ − QP = T.
    Verify {
        p: PathBuf,
        q: PathBuf,
        t: PathBuf,
        /// Read entries as exact rationals and check identities exactly.
        #[arg(long)]
        rational: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run idempotents → involutions → witness → involution → idempotents.
    RingDemo {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        rational: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Factorize μ·(truncated shift) over a grid of sizes and μ values.
    ShiftSweep {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Complex values, e.g. 0.45,0.5+0.1i.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        mus: Vec<String>,
        #[arg(long)]
        backward: bool,
        /// CSV output path.
        #[arg(short, long)]
        out: PathBuf,
        /// Also write a gnuplot script to this path.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_matrix(path: &Path) -> Result<Matrix, CliError> {
    text::parse_matrix(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn load_rational(path: &Path) -> Result<RationalMatrix, CliError> {
    text::parse_rational_matrix(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn same_dims<M: RingMatrix>(named: &[(&Path, &M)]) -> Result<(), CliError> {
    let n = named[0].1.dim();
    if named.iter().all(|(_, m)| m.dim() == n) {
        return Ok(());
    }
    let listing: Vec<String> = named
        .iter()
        .map(|(p, m)| format!("{} is {}x{}", p.display(), m.dim(), m.dim()))
        .collect();
    Err(CliError::Dimension(listing.join(", ")))
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

pub fn run_factorize(
    t_path: &Path,
    u_path: &Path,
    out_path: Option<&Path>,
    tol: &ToleranceConfig,
    stdout: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    let t = load_matrix(t_path)?;
    let u = load_matrix(u_path)?;
    same_dims(&[(t_path, &t), (u_path, &u)])?;
    let result = factorize(&t, &u, tol)?;
    let report = result.to_report();
    match out_path {
        Some(path) => {
            write_file(path, &report)?;
            writeln!(stdout, "verdict: {}", result.verdict).map_err(out_err)?;
        }
        None => stdout.write_all(report.as_bytes()).map_err(out_err)?,
    }
    Ok(ExitStatus::from_verdict(result.verdict))
}

fn verify_generic<M: RingMatrix>(
    p: &M,
    q: &M,
    t: &M,
    tol: &ToleranceConfig,
    stdout: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    let comm = commutator(p, q)?.minus(t);
    let scale = (1.0 + t.size()).max(p.size() * q.size());
    let checks = [
        ("p^2-p", is_idempotent(p, tol)),
        ("q^2-q", is_idempotent(q, tol)),
        ("pq-qp-t", check_residual(&comm, scale, tol)),
    ];
    let mut ok = true;
    for (name, c) in checks {
        ok &= c.holds;
        let status = if c.holds { "ok" } else { "FAIL" };
        writeln!(stdout, "residual {name}: {} {status}", text::format_real(c.residual)).map_err(out_err)?;
    }
    writeln!(stdout, "verified: {ok}").map_err(out_err)?;
    Ok(if ok { ExitStatus::Success } else { ExitStatus::VerificationFailed })
}

pub fn run_verify(
    p_path: &Path,
    q_path: &Path,
    t_path: &Path,
    rational: bool,
    tol: &ToleranceConfig,
    stdout: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    if rational {
        let (p, q, t) = (load_rational(p_path)?, load_rational(q_path)?, load_rational(t_path)?);
        same_dims(&[(p_path, &p), (q_path, &q), (t_path, &t)])?;
        verify_generic(&p, &q, &t, tol, stdout)
    } else {
        let (p, q, t) = (load_matrix(p_path)?, load_matrix(q_path)?, load_matrix(t_path)?);
        same_dims(&[(p_path, &p), (q_path, &q), (t_path, &t)])?;
        verify_generic(&p, &q, &t, tol, stdout)
    }
}

fn ring_demo_generic<M: RingMatrix>(
    p: &M,
    q: &M,
    tol: &ToleranceConfig,
    show: impl Fn(&M) -> String,
    stdout: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    let chain = run_chain(p, q, tol)?;
    let mut out = String::new();
    let mut section = |title: &str, mats: &[(&str, &M)]| {
        out.push_str(&format!("== {title}\n"));
        for (name, m) in mats {
            out.push_str(&format!("matrix {name}\n{}", show(m)));
        }
    };
    let inv = &chain.involutions;
    let w = &chain.witness;
    section("idempotents", &[("p", p), ("q", q), ("t", &inv.t)]);
    section("involutions u = 2p-1, v = 2q-1", &[("u", &inv.u), ("v", &inv.v)]);
    section("witness s = (uv+vu)/4, t = (uv-vu)/4", &[("s", &w.s), ("t", &w.t)]);
    section("involution v = 2u(s+t)", &[("v", &chain.recovered_v)]);
    section("idempotents p = (u+1)/2, q = (v+1)/2", &[("p", &chain.recovered.p), ("q", &chain.recovered.q)]);
    out.push_str(&format!(
        "residual 4t-(uv-vu): {}\n",
        text::format_real(chain.involution_commutator_residual)
    ));
    for (name, value) in &chain.witness_report.residuals {
        out.push_str(&format!("residual {name}: {}\n", text::format_real(*value)));
    }
    out.push_str(&format!(
        "residual [p',q']-t: {}\n",
        text::format_real(chain.final_commutator_residual)
    ));
    let final_ok = check_residual(
        &chain.recovered.t.minus(&inv.t),
        1.0 + inv.t.size(),
        tol,
    )
    .holds;
    let ok = chain.witness_report.passed() && final_ok;
    if let Some(name) = chain.witness_report.failed {
        out.push_str(&format!("failed identity: {name}\n"));
    }
    out.push_str(&format!("verified: {ok}\n"));
    debug_assert_eq!(chain.witness_report.residuals.len(), WITNESS_IDENTITIES.len());
    stdout.write_all(out.as_bytes()).map_err(out_err)?;
    Ok(if ok { ExitStatus::Success } else { ExitStatus::VerificationFailed })
}

pub fn run_ring_demo(
    p_path: &Path,
    q_path: &Path,
    rational: bool,
    tol: &ToleranceConfig,
    stdout: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    if rational {
        let (p, q) = (load_rational(p_path)?, load_rational(q_path)?);
        same_dims(&[(p_path, &p), (q_path, &q)])?;
        ring_demo_generic(&p, &q, tol, text::write_rational_matrix, stdout)
    } else {
        let (p, q) = (load_matrix(p_path)?, load_matrix(q_path)?);
        same_dims(&[(p_path, &p), (q_path, &q)])?;
        ring_demo_generic(&p, &q, tol, text::write_matrix, stdout)
    }
}

pub fn parse_mus(tokens: &[String]) -> Result<Vec<Complex64>, CliError> {
    tokens
        .iter()
        .map(|s| text::parse_complex(s.trim()).ok_or_else(|| CliError::BadMu(s.clone())))
        .collect()
}

/// Writes the CSV (and optional plot script), prints the summary.
///
/// Exit 0 when every cell is `Constructed`, 3 otherwise.
pub fn run_shift_sweep(
    dims: &[usize],
    mus: &[Complex64],
    direction: Direction,
    out_path: &Path,
    plot_path: Option<&Path>,
    tol: &ToleranceConfig,
    stdout: &mut dyn Write,
) -> Result<ExitStatus, CliError> {
    let records = mu_sweep(dims, mus, direction, tol)?;
    write_file(out_path, &write_csv(&records))?;
    if let Some(plot) = plot_path {
        write_file(plot, &plot_script(&out_path.to_string_lossy(), &records))?;
    }
    stdout.write_all(summary(&records).as_bytes()).map_err(out_err)?;
    let all_ok = records.iter().all(|r| r.verdict == Verdict::Constructed);
    Ok(if all_ok { ExitStatus::Success } else { ExitStatus::VerificationFailed })
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<ExitStatus, CliError> {
    match cli.command {
        Command::Factorize { t, u, out, tol } => run_factorize(&t, &u, out.as_deref(), &tol.config()?, stdout),
        Command::Verify { p, q, t, rational, tol } => run_verify(&p, &q, &t, rational, &tol.config()?, stdout),
        Command::RingDemo { p, q, rational, tol } => run_ring_demo(&p, &q, rational, &tol.config()?, stdout),
        Command::ShiftSweep {
            dims,
            mus,
            backward,
            out,
            plot,
            tol,
        } => {
            let direction = if backward { Direction::Backward } else { Direction::Forward };
            run_shift_sweep(&dims, &parse_mus(&mus)?, direction, &out, plot.as_deref(), &tol.config()?, stdout)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::InputError.code() } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitStatus::InputError.code()
        }
    }
}
