use std::fs;
use std::io::Write;
use std::path::Path;

use parsum_core::fuzz::{run_fuzz, FuzzConfig};
use parsum_core::generators::{example_one, example_two, ExampleOneParams, ExampleTwoParams};
use parsum_core::perturbation::Objective;
use parsum_core::{
    bound_report, join, join_scaled, parallel_sum, OptimizerConfig, PerturbationProblem, PsdMatrix, ToleranceConfig,
};

use crate::error::{CliError, CliResult};
use crate::matrix_file::{parse_matrix, to_json, write_matrix};
use crate::render;
use crate::{Cli, Command, GlobalArgs, ProblemInput, Window};

pub fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    let tol = tolerances(g)?;
    match cli.command {
        Command::Bounds { input, window } => bounds(g, &tol, &input, &window),
        Command::Scan { input, window } => scan(g, &tol, &input, &window),
        Command::Examples { which, base, a_angle, b_angle, angles } => {
            let problem = if which == 1 {
                if angles.is_some() {
                    return Err(CliError::Usage("--angles only applies to example 2".into()));
                }
                let d = ExampleOneParams::default();
                let params = ExampleOneParams {
                    base: base.unwrap_or(d.base),
                    a_perturbed: a_angle.unwrap_or(d.a_perturbed),
                    b_perturbed: b_angle.unwrap_or(d.b_perturbed),
                };
                example_one(&params, &tol)?
            } else {
                if base.is_some() || a_angle.is_some() || b_angle.is_some() {
                    return Err(CliError::Usage("--base, --a-angle and --b-angle only apply to example 1".into()));
                }
                let params = match angles {
                    Some(v) => ExampleTwoParams { angles: [v[0], v[1], v[2], v[3]] },
                    None => ExampleTwoParams::default(),
                };
                example_two(&params)?
            };
            write_problem(g, &problem)
        }
        Command::Fuzz { seed, trials, dim_min, dim_max, real, full_rank, no_projections } => {
            let cfg = FuzzConfig {
                trials,
                dim_range: dim_min..=dim_max,
                seed,
                allow_rank_deficient: !full_rank,
                complex_entries: !real,
                projection_trials: !no_projections,
            };
            let report = run_fuzz(&cfg, &tol)?;
            let text = if g.json {
                render::fuzz_json(&report, seed).to_string() + "\n"
            } else {
                render::fuzz_text(&report, seed)
            };
            emit(g, &text)?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Violations(report.violations.len()))
            }
        }
        Command::Join { x, y, alpha, beta } => {
            let (x, y) = (parse_matrix(&x, &tol)?, parse_matrix(&y, &tol)?);
            let m = match (alpha, beta) {
                (Some(a), Some(b)) => join_scaled(&x, &y, a, b, &tol)?,
                _ => join(&x, &y, &tol)?.join,
            };
            emit_matrix(g, &m)
        }
        Command::Psum { a, b } => {
            let (a, b) = (parse_matrix(&a, &tol)?, parse_matrix(&b, &tol)?);
            emit_matrix(g, &parallel_sum(&a, &b, &tol)?)
        }
    }
}

fn tolerances(g: &GlobalArgs) -> CliResult<ToleranceConfig> {
    let tol = ToleranceConfig {
        rank_rel_tol: g.tol_rank,
        psd_tol: g.tol_psd,
        residual_tol: g.tol_residual,
    };
    tol.validate()?;
    Ok(tol)
}

fn load_problem(input: &ProblemInput, tol: &ToleranceConfig) -> CliResult<PerturbationProblem> {
    match (input.example, input.files.as_slice()) {
        (Some(1), _) => Ok(example_one(&ExampleOneParams::default(), tol)?),
        (Some(_), _) => Ok(example_two(&ExampleTwoParams::default())?),
        (None, [a, b, x, y]) => {
            let m = |p: &Path| parse_matrix(p, tol);
            Ok(PerturbationProblem::new(m(a)?, m(b)?, m(x)?, m(y)?)?)
        }
        (None, _) => Err(CliError::Usage("give four matrix files (A B X Y) or --example <1|2>".into())),
    }
}

fn check_window(w: &Window) -> CliResult<()> {
    if !(w.t_min.is_finite() && w.t_max.is_finite() && w.t_min > 0.0 && w.t_min <= w.t_max) {
        return Err(parsum_core::Error::InvalidParameter(format!(
            "t range [{}, {}] must be positive and ordered",
            w.t_min, w.t_max
        ))
        .into());
    }
    if w.points == 0 {
        return Err(parsum_core::Error::InvalidParameter("--points must be positive".into()).into());
    }
    Ok(())
}

fn bounds(g: &GlobalArgs, tol: &ToleranceConfig, input: &ProblemInput, w: &Window) -> CliResult<()> {
    check_window(w)?;
    let problem = load_problem(input, tol)?;
    let cfg = OptimizerConfig {
        log_t_min: w.t_min.ln(),
        log_t_max: w.t_max.ln(),
        coarse_points: w.points,
        ..Default::default()
    };
    let report = bound_report(&problem, &cfg, tol)?;
    let text = if g.json {
        render::bounds_json(&report).to_string() + "\n"
    } else {
        render::bounds_table(&report)
    };
    emit(g, &text)
}

/// `points` log-spaced values from `t_min` to `t_max`; a single value when
/// the two coincide.
pub fn scan_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    if t_min == t_max || points == 1 {
        return vec![t_min];
    }
    let (lo, hi) = (t_min.ln(), t_max.ln());
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| match i {
            0 => t_min,
            i if i == points - 1 => t_max,
            i => (lo + step * i as f64).exp(),
        })
        .collect()
}

fn scan(g: &GlobalArgs, tol: &ToleranceConfig, input: &ProblemInput, w: &Window) -> CliResult<()> {
    check_window(w)?;
    let problem = load_problem(input, tol)?;
    let f = Objective::new(&problem, tol)?;
    let mut csv = String::from("t,f\n");
    for t in scan_grid(w.t_min, w.t_max, w.points) {
        csv.push_str(&format!("{t},{}\n", f.eval(t)?));
    }
    emit(g, &csv)
}

fn write_problem(g: &GlobalArgs, p: &PerturbationProblem) -> CliResult<()> {
    let Some(dir) = &g.out else {
        return Err(CliError::Usage("examples needs --out <DIR>".into()));
    };
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    for (name, m) in [("A", p.a()), ("B", p.b()), ("X", p.x()), ("Y", p.y())] {
        let path = dir.join(format!("{name}.json"));
        write_matrix(&path, m.as_matrix())?;
        println!("{}", path.display());
    }
    Ok(())
}

fn emit_matrix(g: &GlobalArgs, m: &PsdMatrix) -> CliResult<()> {
    match &g.out {
        Some(path) => write_matrix(path, m.as_matrix()),
        None => emit(g, &(to_json(m.as_matrix()) + "\n")),
    }
}

fn emit(g: &GlobalArgs, text: &str) -> CliResult<()> {
    match &g.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
