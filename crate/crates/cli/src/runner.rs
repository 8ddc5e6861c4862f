//! Command orchestration: each subcommand loads the manifest, drives the
//! library, and assembles a [`Report`]. Exit codes: 0 all pass, 1
//! criterion failure, 2 input error, 3 capability boundary.

use crate::manifest::{Manifest, Mode};
use crate::report::*;
use heiscalc_core::expr::parse;
use heiscalc_core::geometry::{levi_matrix, LeviData};
use heiscalc_core::grid::GridSpec;
use heiscalc_core::hypocheck::{
    check_sublaplacian, contact_profile, horizontal_mu_spectrum, rockland_sublaplacian,
    x_k, y_pq, y_q, ConditionReport, MuMatrix, SublaplacianData,
};
use heiscalc_core::parametrix::{build_parametrix_symbol, ParametrixEngine, PxError};
use heiscalc_core::quantize::{verify_inverse, ModelSymbols, SublaplacianGridOp};
use heiscalc_core::scalar::Scalar;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const VERIFY_TOLERANCE: f64 = 0.05;
pub const VERIFY_MIN_RATIO: f64 = 2.0;
pub const NEGATIVE_CONTROL_MIN: f64 = 0.5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("capability boundary: {0}")]
    Capability(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Capability(_) => 3,
            CliError::Internal(_) => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub struct Timings {
    enabled: bool,
    entries: BTreeMap<String, u64>,
}

impl Timings {
    pub fn new(enabled: bool) -> Self {
        Timings {
            enabled,
            entries: BTreeMap::new(),
        }
    }

    fn record<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        if self.enabled {
            self.entries
                .insert(label.to_string(), t0.elapsed().as_millis() as u64);
        }
        out
    }

    fn finish(self, report: &mut Report) {
        if self.enabled {
            report.timings_ms = Some(self.entries);
        }
    }
}

fn levi_at(man: &Manifest, point: &[Scalar]) -> Result<LeviData, CliError> {
    levi_matrix(&man.frame, point).map_err(input)
}

/// The coefficient matrix at a point: manifest rows (or a scalar
/// expression override) evaluated through the jet backend so rational
/// entries stay exact.
fn mu_at(
    man: &Manifest,
    point: &[Scalar],
    mu_override: Option<&str>,
) -> Result<MuMatrix, CliError> {
    let rows: Vec<Vec<heiscalc_core::expr::Expr>> = match mu_override {
        Some(src) => vec![vec![parse(src, man.dim).map_err(input)?]],
        None => man
            .mu_rows
            .clone()
            .ok_or_else(|| CliError::Input("manifest has no [mu] section".into()))?,
    };
    let entries = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| Ok(e.eval_jet(point, 0).map_err(input)?.constant_term()))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match man.mode {
        Mode::Rational => MuMatrix::Exact(entries),
        Mode::Float => MuMatrix::Complex(
            entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| Complex64::new(s.to_f64(), 0.0))
                        .collect()
                })
                .collect(),
        ),
    })
}

pub fn cmd_levi(man: &Manifest, timings: bool) -> Result<(Report, i32), CliError> {
    let mut report = Report::new("levi", &man.digest, man.mode.as_str());
    let mut t = Timings::new(timings);
    for point in &man.points {
        let levi = t.record("levi", || levi_at(man, point))?;
        let in_domain = man.in_domain(point);
        if in_domain == Some(false) {
            report
                .warnings
                .push(format!("point {point:?} lies outside the declared domain"));
        }
        report.levi.push(LeviSummary::from_levi(&levi, in_domain));
    }
    t.finish(&mut report);
    Ok((report, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Sublaplacian,
    Rockland,
    Yq,
    Xk,
    Ypq,
    Contact,
}

impl std::str::FromStr for CheckKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "sublaplacian" => CheckKind::Sublaplacian,
            "rockland" => CheckKind::Rockland,
            "yq" => CheckKind::Yq,
            "xk" => CheckKind::Xk,
            "ypq" => CheckKind::Ypq,
            "contact" => CheckKind::Contact,
            other => {
                return Err(CliError::Input(format!(
                    "unknown criterion `{other}` (expected sublaplacian|rockland|yq|xk|ypq|contact)"
                )))
            }
        })
    }
}

pub struct CheckArgs {
    pub ks: Option<Vec<usize>>,
    pub qs: Option<Vec<usize>>,
    pub pqs: Option<Vec<(usize, usize)>>,
    pub mu_override: Option<String>,
}

pub fn cmd_check(
    man: &Manifest,
    kind: CheckKind,
    args: &CheckArgs,
    timings: bool,
) -> Result<(Report, i32), CliError> {
    let mut report = Report::new("check", &man.digest, man.mode.as_str());
    let mut t = Timings::new(timings);
    let d = man.dim - 1;

    let cells: Vec<ConditionCell> = t.record("check", || -> Result<_, CliError> {
        match kind {
            CheckKind::Sublaplacian | CheckKind::Rockland => {
                let mut inputs = Vec::new();
                for (pi, point) in man.points.iter().enumerate() {
                    let levi = levi_at(man, point)?;
                    let mu = mu_at(man, point, args.mu_override.as_deref())?;
                    inputs.push((pi, levi, mu));
                }
                let rows = heiscalc_core::par::map_indexed(inputs.len(), |i| {
                    let (pi, levi, mu) = &inputs[i];
                    let data = SublaplacianData::new(levi.clone(), d, mu.clone())
                        .map_err(|e| e.to_string())?;
                    let rep = if kind == CheckKind::Rockland {
                        rockland_sublaplacian(&data).map(|(r, _)| r)
                    } else {
                        check_sublaplacian(&data)
                    }
                    .map_err(|e| e.to_string())?;
                    Ok::<_, String>(ConditionCell {
                        criterion: rep.criterion.clone(),
                        point_index: Some(*pi),
                        k: None,
                        q: None,
                        p: None,
                        report: rep,
                    })
                });
                rows.into_iter()
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(CliError::Input)
            }
            CheckKind::Xk => {
                let ks: Vec<usize> = args.ks.clone().unwrap_or_else(|| (0..=d).collect());
                let mut cells = Vec::new();
                for (pi, point) in man.points.iter().enumerate() {
                    let levi = levi_at(man, point)?;
                    for &k in &ks {
                        let rep = x_k(&levi, d, k).map_err(input)?;
                        // exterior-algebra spectrum route must agree
                        let (_, hrep) = horizontal_mu_spectrum(&levi, d, k).map_err(input)?;
                        let mut rep = rep;
                        if hrep.pass != rep.pass {
                            rep.notes.push(
                                "exterior-algebra spectrum disagrees with the rank test".into(),
                            );
                        }
                        cells.push(ConditionCell {
                            criterion: "xk".into(),
                            point_index: Some(pi),
                            k: Some(k),
                            q: None,
                            p: None,
                            report: rep,
                        });
                    }
                }
                Ok(cells)
            }
            CheckKind::Yq => {
                let sig = man
                    .cr
                    .ok_or_else(|| CliError::Input("criterion yq needs the [cr] section".into()))?;
                let qs: Vec<usize> = args.qs.clone().unwrap_or_else(|| (0..=sig.n).collect());
                qs.iter()
                    .map(|&q| {
                        let rep = y_q(&sig, q).map_err(input)?;
                        Ok(ConditionCell {
                            criterion: "yq".into(),
                            point_index: None,
                            k: None,
                            q: Some(q),
                            p: None,
                            report: rep,
                        })
                    })
                    .collect()
            }
            CheckKind::Ypq => {
                let sig = man
                    .cr
                    .ok_or_else(|| CliError::Input("criterion ypq needs the [cr] section".into()))?;
                let pairs: Vec<(usize, usize)> = args.pqs.clone().unwrap_or_else(|| {
                    (0..=sig.n)
                        .flat_map(|p| (0..=sig.n).map(move |q| (p, q)))
                        .collect()
                });
                pairs
                    .iter()
                    .map(|&(p, q)| {
                        let rep = y_pq(&sig, p, q).map_err(input)?;
                        Ok(ConditionCell {
                            criterion: "ypq".into(),
                            point_index: None,
                            k: None,
                            q: Some(q),
                            p: Some(p),
                            report: rep,
                        })
                    })
                    .collect()
            }
            CheckKind::Contact => {
                let sig = man.cr.ok_or_else(|| {
                    CliError::Input("criterion contact needs the [cr] section".into())
                })?;
                let ks: Vec<usize> =
                    args.ks.clone().unwrap_or_else(|| (0..=2 * sig.n).collect());
                ks.iter()
                    .map(|&k| {
                        let (order, invertible) = contact_profile(sig.n, k).map_err(input)?;
                        let rep = ConditionReport {
                            criterion: "contact".into(),
                            pass: invertible,
                            witness: None,
                            margin: f64::INFINITY,
                            notes: vec![format!("operator order {order}")],
                        };
                        Ok(ConditionCell {
                            criterion: "contact".into(),
                            point_index: None,
                            k: Some(k),
                            q: None,
                            p: None,
                            report: rep,
                        })
                    })
                    .collect()
            }
        }
    })?;

    let all_pass = cells.iter().all(|c| c.report.pass);
    report.conditions = cells;
    t.finish(&mut report);
    Ok((report, if all_pass { 0 } else { 1 }))
}

pub struct VerifyArgs {
    pub grid: Option<usize>,
    pub seed: u64,
    pub mu_override: Option<String>,
    pub dump_dir: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
}

pub fn cmd_verify(
    man: &Manifest,
    args: &VerifyArgs,
    timings: bool,
) -> Result<(Report, i32), CliError> {
    let mut report = Report::new("verify", &man.digest, man.mode.as_str());
    let mut t = Timings::new(timings);
    let d = man.dim - 1;
    let point = man.points[0].clone();
    let levi = levi_at(man, &point)?;
    report
        .levi
        .push(LeviSummary::from_levi(&levi, man.in_domain(&point)));

    let mu = match (&man.mu_rows, &args.mu_override) {
        (None, None) => MuMatrix::scalar(Scalar::zero()),
        _ => mu_at(man, &point, args.mu_override.as_deref())?,
    };
    let data = SublaplacianData::new(levi.clone(), d, mu.clone()).map_err(input)?;
    let condition = check_sublaplacian(&data).map_err(input)?;
    let pass = condition.pass;
    report.conditions.push(ConditionCell {
        criterion: "sublaplacian".into(),
        point_index: Some(0),
        k: None,
        q: None,
        p: None,
        report: condition,
    });
    if !pass {
        // refusal path: the coefficient condition fails, no symbol exists
        t.finish(&mut report);
        return Ok((report, 1));
    }

    let engine = ParametrixEngine::new(&levi, d);
    let qsym = t
        .record("symbol", || build_parametrix_symbol(&engine, &mu))
        .map_err(|e| match e {
            PxError::Capability(msg) => CliError::Capability(msg),
            other => CliError::Internal(other.to_string()),
        })?;
    if qsym.size() != 1 {
        return Err(CliError::Input(
            "verify drives scalar coefficients only; matrix mu is a symbol-level feature".into(),
        ));
    }
    let mu_scalar = match &mu {
        MuMatrix::Exact(m) => Complex64::new(m[0][0].to_f64(), 0.0),
        MuMatrix::Complex(m) => m[0][0],
    };
    let delta = SublaplacianGridOp {
        model: ModelSymbols::from_levi(&levi),
        mu: mu_scalar,
    };

    let fine_n = args.grid.unwrap_or(man.grid_size).max(8);
    let coarse_n = (fine_n / 2).max(8);
    let extent = man.grid_extent;
    let seeds: Vec<u64> = (0..3).map(|i| args.seed + i).collect();

    let coarse_spec = GridSpec::cubic(man.dim, coarse_n, extent);
    let fine_spec = GridSpec::cubic(man.dim, fine_n, extent);
    let coarse = t
        .record("verify_coarse", || {
            verify_inverse(&qsym, &delta, &coarse_spec, &seeds)
        })
        .map_err(|e| CliError::Capability(e.to_string()))?;
    let fine = t
        .record("verify_fine", || {
            verify_inverse(&qsym, &delta, &fine_spec, &seeds)
        })
        .map_err(|e| CliError::Capability(e.to_string()))?;

    // negative control: replace the parametrix by sigma_2 itself
    let control = t.record("negative_control", || -> Result<f64, CliError> {
        let f = heiscalc_core::grid::make_s0(&fine_spec, seeds[0]).values;
        let sf = delta.apply(&fine_spec, &f).map_err(input)?;
        let dsf = delta.apply(&fine_spec, &sf).map_err(input)?;
        Ok(dsf.sub(&f).l2_norm_interior() / f.l2_norm_interior())
    })?;

    if let Some(dir) = &args.dump_dir {
        dump_grids(dir, &fine_spec, &qsym, &delta, seeds[0]).map_err(input)?;
    }

    let ratio = coarse.max_error / fine.max_error.max(1e-300);
    let passed = fine.max_error <= VERIFY_TOLERANCE
        && ratio >= VERIFY_MIN_RATIO
        && control >= NEGATIVE_CONTROL_MIN;
    let summary = VerificationSummary {
        grid_coarse: coarse_n,
        grid_fine: fine_n,
        extent,
        seeds: seeds.clone(),
        coarse: coarse
            .trials
            .iter()
            .map(|&(seed, e1, e2)| TrialRow {
                seed,
                error_left: e1,
                error_right: e2,
            })
            .collect(),
        fine: fine
            .trials
            .iter()
            .map(|&(seed, e1, e2)| TrialRow {
                seed,
                error_left: e1,
                error_right: e2,
            })
            .collect(),
        max_error_coarse: coarse.max_error,
        max_error_fine: fine.max_error,
        refinement_ratio: ratio,
        negative_control: Some(control),
        tolerance: VERIFY_TOLERANCE,
        passed,
    };
    if let Some(csv) = &args.out_csv {
        let mut rows = String::from("grid,max_error\n");
        rows.push_str(&format!("{coarse_n},{}\n", coarse.max_error));
        rows.push_str(&format!("{fine_n},{}\n", fine.max_error));
        std::fs::write(csv, rows).map_err(input)?;
    }
    report.verification = Some(summary);
    t.finish(&mut report);
    Ok((report, if passed { 0 } else { 1 }))
}

fn dump_grids(
    dir: &Path,
    spec: &GridSpec,
    qsym: &heiscalc_core::quantize::HomogeneousSymbol,
    delta: &SublaplacianGridOp,
    seed: u64,
) -> Result<(), String> {
    use heiscalc_core::quantize::{quantize_apply, ComposedSymbol};
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let f = heiscalc_core::grid::make_s0(spec, seed).values;
    let composed = ComposedSymbol {
        symbol: qsym,
        model: &delta.model,
    };
    let qf = quantize_apply(&composed, spec, &f).map_err(|e| e.to_string())?;
    let sidecar = serde_json::json!({
        "dims": spec.dims,
        "size": spec.size,
        "extent": spec.extent,
        "dtype": "complex128",
        "layout": "row-major, interleaved re/im, little-endian f64",
        "seed": seed,
    });
    for (name, grid) in [("f", &f), ("qf", &qf)] {
        std::fs::write(dir.join(format!("{name}.bin")), grid.to_bytes())
            .map_err(|e| e.to_string())?;
        std::fs::write(
            dir.join(format!("{name}.json")),
            serde_json::to_string_pretty(&sidecar).unwrap(),
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(())
}

pub struct RayArgs {
    pub mu: Complex64,
    pub direction: Vec<f64>,
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    pub out_csv: Option<PathBuf>,
}

pub fn cmd_parametrix_eval(
    man: &Manifest,
    args: &RayArgs,
    timings: bool,
) -> Result<(Report, i32), CliError> {
    let mut report = Report::new("parametrix-eval", &man.digest, man.mode.as_str());
    let mut t = Timings::new(timings);
    let d = man.dim - 1;
    if args.direction.len() != man.dim {
        return Err(CliError::Input(format!(
            "direction needs {} components",
            man.dim
        )));
    }
    let point = man.points[0].clone();
    let levi = levi_at(man, &point)?;
    let engine = ParametrixEngine::new(&levi, d);
    let mut csv = String::from("s,");
    for a in 0..man.dim {
        csv.push_str(&format!("xi{a},"));
    }
    csv.push_str("q_re,q_im\n");
    let n = args.samples.max(2);
    t.record("ray", || -> Result<(), CliError> {
        for i in 0..n {
            let s = args.start + (args.stop - args.start) * i as f64 / (n - 1) as f64;
            let xi: Vec<f64> = args.direction.iter().map(|v| v * s).collect();
            let q = engine.q_continued(args.mu, &xi).map_err(|e| match e {
                PxError::Capability(m) => CliError::Capability(m),
                PxError::OnSingularSet { mu, element } => CliError::Input(format!(
                    "mu = {mu} lies on the singular set (element {element})"
                )),
                other => CliError::Internal(other.to_string()),
            })?;
            csv.push_str(&format!("{s},"));
            for v in &xi {
                csv.push_str(&format!("{v},"));
            }
            csv.push_str(&format!("{},{}\n", q.re, q.im));
        }
        Ok(())
    })?;
    let csv_path = match &args.out_csv {
        Some(p) => {
            std::fs::write(p, &csv).map_err(input)?;
            Some(p.display().to_string())
        }
        None => {
            print!("{csv}");
            None
        }
    };
    report.parametrix = Some(ParametrixSummary {
        mu: [args.mu.re, args.mu.im],
        direction: args.direction.clone(),
        samples: n,
        csv_path,
    });
    t.finish(&mut report);
    Ok((report, 0))
}
