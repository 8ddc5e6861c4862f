use clap::{Args, Parser, Subcommand};
use heiscalc_cli::manifest::{Manifest, Mode};
use heiscalc_cli::runner::{
    cmd_check, cmd_levi, cmd_parametrix_eval, cmd_verify, CheckArgs, CheckKind, CliError, RayArgs,
    VerifyArgs,
};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

/// Tangent-group geometry, hypoellipticity criteria and parametrix
/// verification for frames on Heisenberg manifolds.
#[derive(Parser)]
#[command(name = "heiscalc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Manifest file (TOML).
    manifest: PathBuf,
    /// Override base points, e.g. "0,0,0;1,2,3".
    #[arg(long)]
    points: Option<String>,
    /// Override the arithmetic mode declared in the manifest.
    #[arg(long, value_parser = ["rational", "float"])]
    mode: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings in the report (breaks byte-identical
    /// reports across runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Levi matrix, eigenvalues and rank at the base points.
    Levi {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep a hypoellipticity criterion over degrees and points.
    Check {
        /// One of: sublaplacian, rockland, yq, xk, ypq, contact.
        criterion: String,
        #[command(flatten)]
        common: Common,
        /// Horizontal form degrees, e.g. "0,1,2".
        #[arg(long)]
        k: Option<String>,
        /// Kohn degrees q.
        #[arg(long)]
        q: Option<String>,
        /// Bidegrees, e.g. "0,1;1,0".
        #[arg(long)]
        pq: Option<String>,
        /// Scalar coefficient expression overriding the `[mu]` section.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Build the parametrix symbol and verify it inverts the model
    /// sublaplacian on two grid sizes.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Fine grid size per axis (power of two); the coarse companion
        /// is half of it.
        #[arg(long)]
        grid: Option<usize>,
        /// Base seed; three consecutive seeds are driven.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Scalar coefficient expression overriding the `[mu]` section.
        #[arg(long)]
        mu: Option<String>,
        /// Dump the first test function and its parametrix image here
        /// (binary grids plus sidecar metadata).
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        /// Write the residual-vs-grid curve as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate the inverse symbol along a covector ray and emit CSV.
    ParametrixEval {
        #[command(flatten)]
        common: Common,
        /// Coefficient "re" or "re,im".
        #[arg(long, default_value = "0")]
        mu: String,
        /// Ray direction, e.g. "1,0.5,0".
        #[arg(long)]
        xi: String,
        /// Scale range "start:stop:count".
        #[arg(long, default_value = "0.5:4:32")]
        range: String,
        /// Write the CSV here (stdout otherwise).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("bad integer `{t}`")))
        })
        .collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(';')
        .map(|pair| {
            let items = parse_usize_list(pair)?;
            if items.len() != 2 {
                return Err(CliError::Input(format!("bad bidegree `{pair}`")));
            }
            Ok((items[0], items[1]))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("bad number `{t}`")))
        })
        .collect()
}

fn load_manifest(common: &Common) -> Result<Manifest, CliError> {
    let mut text = std::fs::read_to_string(&common.manifest)
        .map_err(|e| CliError::Input(format!("{}: {e}", common.manifest.display())))?;
    if let Some(mode) = &common.mode {
        // explicit override wins over the declared mode
        text = format!("mode = \"{mode}\"\n{}", strip_mode_line(&text));
    }
    let mut man = Manifest::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(pts) = &common.points {
        let dim = man.dim;
        let mode = man.mode;
        let to_scalar = move |v: f64| match mode {
            Mode::Rational if v.fract() == 0.0 && v.abs() < 1e15 => {
                heiscalc_core::scalar::Scalar::from_int(v as i64)
            }
            _ => heiscalc_core::scalar::Scalar::from_f64(v),
        };
        man.points = pts
            .split(';')
            .map(|p| {
                let coords = parse_f64_list(p)?;
                if coords.len() != dim {
                    return Err(CliError::Input(format!(
                        "point `{p}` needs {dim} coordinates"
                    )));
                }
                Ok(coords.into_iter().map(to_scalar).collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
    }
    Ok(man)
}

fn strip_mode_line(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("mode"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run() -> Result<(String, Option<PathBuf>, i32), CliError> {
    let cli = Cli::parse();
    let (report, code, common) = match cli.command {
        Command::Levi { common } => {
            let man = load_manifest(&common)?;
            let (r, c) = cmd_levi(&man, common.timings)?;
            (r, c, common)
        }
        Command::Check {
            criterion,
            common,
            k,
            q,
            pq,
            mu,
        } => {
            let man = load_manifest(&common)?;
            let kind: CheckKind = criterion.parse()?;
            let args = CheckArgs {
                ks: k.as_deref().map(parse_usize_list).transpose()?,
                qs: q.as_deref().map(parse_usize_list).transpose()?,
                pqs: pq.as_deref().map(parse_pairs).transpose()?,
                mu_override: mu,
            };
            let (r, c) = cmd_check(&man, kind, &args, common.timings)?;
            (r, c, common)
        }
        Command::Verify {
            common,
            grid,
            seed,
            mu,
            dump_dir,
            csv,
        } => {
            let man = load_manifest(&common)?;
            let args = VerifyArgs {
                grid,
                seed,
                mu_override: mu,
                dump_dir,
                out_csv: csv,
            };
            let (r, c) = cmd_verify(&man, &args, common.timings)?;
            (r, c, common)
        }
        Command::ParametrixEval {
            common,
            mu,
            xi,
            range,
            csv,
        } => {
            let man = load_manifest(&common)?;
            let mu_parts = parse_f64_list(&mu)?;
            let mu = match mu_parts.as_slice() {
                [re] => Complex64::new(*re, 0.0),
                [re, im] => Complex64::new(*re, *im),
                _ => return Err(CliError::Input("mu must be `re` or `re,im`".into())),
            };
            let range_parts: Vec<&str> = range.split(':').collect();
            let [start, stop, count] = range_parts.as_slice() else {
                return Err(CliError::Input("range must be `start:stop:count`".into()));
            };
            let args = RayArgs {
                mu,
                direction: parse_f64_list(&xi)?,
                start: start
                    .parse()
                    .map_err(|_| CliError::Input("bad range start".into()))?,
                stop: stop
                    .parse()
                    .map_err(|_| CliError::Input("bad range stop".into()))?,
                samples: count
                    .parse()
                    .map_err(|_| CliError::Input("bad range count".into()))?,
                out_csv: csv,
            };
            let (r, c) = cmd_parametrix_eval(&man, &args, common.timings)?;
            (r, c, common)
        }
    };
    Ok((report.to_json(), common.out, code))
}

fn main() -> ExitCode {
    match run() {
        Ok((json, out, code)) => {
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json + "\n") {
                        eprintln!("heiscalc: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{json}"),
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("heiscalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
