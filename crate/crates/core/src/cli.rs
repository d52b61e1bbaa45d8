//! Command-line front end. Exit codes: 0 success or validated, 1 validation
//! failed (report still written), 2 usage or input error, 3 numeric error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dft_bounds::{cn_general, GridSpec, StripPair};
use crate::error::{Error, Result};
use crate::io::{certificate_report, export_tsv, load_fcf, save_fcf, CandidateFile, ExportKind, OmegaSpec};
use crate::map::{model_by_name, StandardForcedMap};
use crate::solver::{continue_standard, export_candidate, solve_at, ContinuationOptions, SolverState};
use crate::validator::{validate, ValidationParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fhit",
    version,
    about = "Validated existence proofs of fiberwise hyperbolic invariant tori"
)]
struct Cli {
    /// Worker threads for box-parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print an enclosure of the DFT error constant C_N(rho, rho_hat).
    Cn {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        rhohat: f64,
        #[arg(long)]
        n: Option<usize>,
        /// Grid sizes per dimension, comma separated (overrides --n).
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Newton solve from the unforced fixed point.
    Solve {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
        /// Rescale the frame columns to reduce |P1| |P2|.
        #[arg(long)]
        balance: bool,
    },
    /// Continuation in eps_map from zero forcing.
    Continue {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        eps_end: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "64")]
        n_schedule: Vec<usize>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Write the candidate truncated to this grid size.
        #[arg(long)]
        truncate: Option<usize>,
        #[arg(long)]
        balance: bool,
    },
    /// Fit the decay rate rho* of a torus component.
    FitRho {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Rigorous validation; writes a key-value certificate report.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        rhohat: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        pad: Option<usize>,
        #[arg(long)]
        noise_floor: Option<f64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// TSV plot data.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        what: ExportKind,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, default_value = StandardForcedMap::NAME)]
    model: String,
    #[arg(long, default_value_t = 1.3)]
    kappa: f64,
    /// `golden` or a decimal.
    #[arg(long, default_value = "golden")]
    omega: String,
}

/// Input problems map to exit 2, everything else to exit 3.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::SizeMismatch(_)
        | Error::Io(_)
        | Error::BadStrip { .. }
        | Error::BadSize(_)
        | Error::OddSize(_)
        | Error::TooManyDimensions(_)
        | Error::SizeNotPowerOfTwo(_)
        | Error::UnknownModel(_)
        | Error::DomainError(_)
        | Error::DimensionMismatch(_)
        | Error::SymmetryViolation { .. } => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn candidate_file(
    map: &MapArgs,
    eps: f64,
    st: &SolverState,
    balance: bool,
    truncate: Option<usize>,
) -> Result<CandidateFile> {
    let mut st = st.clone();
    if balance {
        st.balance_frame();
    }
    let mut data = export_candidate(&st)?;
    if let Some(n) = truncate {
        if n > data.n() || !n.is_power_of_two() {
            return Err(Error::BadSize(format!("cannot truncate N = {} to {n}", data.n())));
        }
        data = data.truncate_to(n)?;
    }
    Ok(CandidateFile {
        model: map.model.clone(),
        kappa: map.kappa,
        eps_map: eps,
        omega: OmegaSpec::parse(&map.omega)?,
        data,
    })
}

fn check_model(map: &MapArgs) -> Result<OmegaSpec> {
    if map.model != StandardForcedMap::NAME {
        return Err(Error::UnknownModel(map.model.clone()));
    }
    OmegaSpec::parse(&map.omega)
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Cn { rho, rhohat, n, dims } => {
            let dims = match (dims, n) {
                (Some(d), _) => d,
                (None, Some(n)) => vec![n],
                (None, None) => return Err(Error::BadSize("give --n or --dims".into())),
            };
            let c = cn_general(&StripPair::new(rho, rhohat)?, &GridSpec::new(dims)?)?;
            println!("cn = [{:.16e}, {:.16e}]", c.lo(), c.hi());
            Ok(EXIT_OK)
        }
        Command::Solve {
            map,
            eps,
            n,
            tol,
            out,
            balance,
        } => {
            let omega = check_model(&map)?;
            let st = solve_at(map.kappa, eps, omega.to_f64(), n, tol)?;
            save_fcf(&candidate_file(&map, eps, &st, balance, None)?, &out)?;
            println!(
                "lambda_s = {:.16e}\nlambda_u = {:.16e}\nresidual = {:.3e}",
                st.lambda_s,
                st.lambda_u,
                st.residuals.max()
            );
            Ok(EXIT_OK)
        }
        Command::Continue {
            map,
            eps_end,
            steps,
            n_schedule,
            out_dir,
            truncate,
            balance,
        } => {
            let omega = check_model(&map)?;
            std::fs::create_dir_all(&out_dir)?;
            let opts = ContinuationOptions::new(eps_end, steps, n_schedule);
            let mut log = String::from("eps_map\tn\tlambda_s\tlambda_u\tinvariance\treducibility\titerations\n");
            let mut last: Option<SolverState> = None;
            let result = continue_standard(map.kappa, omega.to_f64(), eps_end, &opts, &mut |s| {
                let _ = writeln!(
                    log,
                    "{:.16e}\t{}\t{:.16e}\t{:.16e}\t{:.3e}\t{:.3e}\t{}",
                    s.eps_map,
                    s.n(),
                    s.lambda_s,
                    s.lambda_u,
                    s.residuals.invariance,
                    s.residuals.reducibility,
                    s.history.len()
                );
                last = Some(s.clone());
            });
            std::fs::write(out_dir.join("continuation.tsv"), &log)?;
            match result {
                Ok(st) => {
                    save_fcf(
                        &candidate_file(&map, st.eps_map, &st, balance, truncate)?,
                        &out_dir.join("candidate.fcf"),
                    )?;
                    println!("reached eps_map = {:.16e} at N = {}", st.eps_map, st.n());
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    if let Some(st) = last {
                        save_fcf(
                            &candidate_file(&map, st.eps_map, &st, balance, truncate)?,
                            &out_dir.join("last.fcf"),
                        )?;
                    }
                    Err(e)
                }
            }
        }
        Command::FitRho { input, component } => {
            let f = load_fcf(&input)?;
            if component >= f.data.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "component {component} of {}",
                    f.data.dim()
                )));
            }
            let fit = f.data.k0.get(component, 0).fit_rho()?;
            println!(
                "rho_star = {:.6e}\nintercept = {:.6e}\nfit_range = {} {}",
                fit.rho_star, fit.intercept, fit.fit_range.0, fit.fit_range.1
            );
            Ok(EXIT_OK)
        }
        Command::Validate {
            input,
            rho,
            rhohat,
            radius,
            pad,
            noise_floor,
            report,
        } => {
            let params = ValidationParams {
                rho,
                rho_hat: rhohat,
                radius,
                pad_to: pad,
                noise_floor,
            };
            params.check()?;
            let f = load_fcf(&input)?;
            let map = model_by_name(&f.model, f.map_params())?;
            let cert = validate(&f.data, &params, map.as_ref());
            let text = certificate_report(&cert, &f);
            std::fs::write(&report, &text)?;
            print!("{text}");
            Ok(if cert.verdict.is_validated() {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
        Command::Export { input, what, out } => {
            let f = load_fcf(&input)?;
            std::fs::write(&out, export_tsv(&f.data, what)?)?;
            Ok(EXIT_OK)
        }
    }
}
