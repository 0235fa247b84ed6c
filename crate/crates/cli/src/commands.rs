// SPDX-License-Identifier: Apache-2.0

//! Subcommand implementations. Each returns the process exit code on
//! success; errors map to [`exit::USAGE`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hasrrt_core::planners::plan;
use hasrrt_core::scene::{
    load_blockgrid, load_plan_report, load_scene, load_skeleton, save_scene, save_skeleton, PlanReport,
};
use hasrrt_core::{PlannerConfig, PlannerKind};

use crate::experiment::{load_guidance, Experiment};
use crate::render::{render_svg, Projection};
use crate::runner::{
    bench_jobs, execute, job_skeleton, perturb_jobs, run_seed, summarize, write_csv, ExecOptions, RunRow,
};
use crate::{exit, CliError};

fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent().filter(|d| !d.as_os_str().is_empty()) {
        Some(dir) => fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        }),
        None => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    ensure_parent(path)?;
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_config(path: Option<&Path>) -> Result<PlannerConfig, CliError> {
    let Some(path) = path else {
        return Ok(PlannerConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

pub struct PlanArgs {
    pub scene: PathBuf,
    pub skeleton: Option<PathBuf>,
    pub planner: PlannerKind,
    pub seed: u64,
    pub master_seed: u64,
    pub cap: f64,
    pub config: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

/// Runs one planner and prints the report (without the tree) to `stdout`.
pub fn plan_cmd(args: &PlanArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let scene = load_scene(&args.scene)?;
    let skeleton = match &args.skeleton {
        Some(p) => Some(load_guidance(p, &scene)?),
        None => None,
    };
    if args.planner.needs_skeleton() && skeleton.is_none() {
        return Err(CliError::Invalid(format!(
            "planner {} requires a skeleton; pass --skeleton",
            args.planner
        )));
    }
    if !(args.cap > 0.0) {
        return Err(CliError::Invalid("--cap must be positive".into()));
    }
    let mut cfg = read_config(args.config.as_deref())?;
    cfg.seed = run_seed(args.master_seed, args.planner, args.seed);
    cfg.time_cap = Some(args.cap);
    if cfg.resolution.is_none() {
        cfg.resolution = scene.resolution;
    }
    let result = plan(args.planner, &scene.env, &scene.query, skeleton.as_ref(), &cfg)?;
    let mut report = PlanReport::new(&result, scene.dim());
    report.seed = args.seed;
    report.record.seed = args.seed;
    if let Some(out) = &args.out {
        write_file(out, &report.to_json())?;
    }
    if let Some(svg) = &args.svg {
        write_file(svg, &render_svg(&scene, skeleton.as_ref(), Some(&report), None)?)?;
    }
    stdout
        .write_all(report.without_tree().to_json().as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?;
    Ok(if result.success() { exit::OK } else { exit::RUN_FAILED })
}

#[derive(Clone, Debug, Default)]
pub struct MatrixArgs {
    pub experiment: PathBuf,
    pub out_dir: Option<PathBuf>,
    pub serial: bool,
    pub jobs: Option<usize>,
}

impl MatrixArgs {
    fn options(&self) -> ExecOptions {
        ExecOptions {
            parallel: !self.serial,
            threads: self.jobs,
            keep_results: false,
        }
    }
}

fn write_results(
    exp: &Experiment,
    out_dir: &Path,
    stem: &str,
    rows: &[RunRow],
    extra: Option<(&str, serde_json::Value)>,
) -> Result<(), CliError> {
    let mut csv_bytes = Vec::new();
    write_csv(&mut csv_bytes, rows)?;
    write_file(
        &out_dir.join(format!("{stem}.csv")),
        &String::from_utf8(csv_bytes).expect("csv output is utf-8"),
    )?;
    let mut summary = serde_json::to_value(summarize(&exp.spec.name, rows)).expect("summary serializes");
    if let (Some((key, value)), Some(obj)) = (extra, summary.as_object_mut()) {
        obj.insert(key.to_string(), value);
    }
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    write_file(&out_dir.join(format!("{stem}_summary.json")), &text)
}

fn report_rows(rows: &[RunRow], err: &mut dyn Write) {
    for r in rows {
        if let Err(e) = &r.outcome {
            let _ = writeln!(err, "{} seed {}: {e}", r.planner, r.seed);
        }
    }
    let ok = rows.iter().filter(|r| r.success()).count();
    let _ = writeln!(err, "{ok}/{} runs succeeded", rows.len());
}

/// Runs the planner x seed matrix; writes `results.csv` and
/// `results_summary.json`.
pub fn bench_cmd(args: &MatrixArgs, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let exp = Experiment::load(&args.experiment)?;
    let out_dir = args.out_dir.clone().unwrap_or_else(|| exp.output_dir.clone());
    let outcomes = execute(&exp, bench_jobs(&exp), args.options())?;
    let rows: Vec<RunRow> = outcomes.into_iter().map(|o| o.row).collect();
    write_results(&exp, &out_dir, "results", &rows, None)?;
    report_rows(&rows, stderr);
    let all_ok = rows.iter().all(RunRow::success);
    Ok(if all_ok { exit::OK } else { exit::RUN_FAILED })
}

/// Runs HAS-RRT on perturbed skeletons for every `(d, seed)`; writes
/// `perturb.csv` and `perturb_summary.json`, including an audit that every
/// perturbed skeleton vertex lies in free workspace.
pub fn perturb_cmd(
    args: &MatrixArgs,
    d_list: Option<Vec<f64>>,
    region_radius: Option<f64>,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut exp = Experiment::load(&args.experiment)?;
    let settings = exp
        .spec
        .perturb
        .get_or_insert_with(|| crate::experiment::PerturbSettings {
            d_list: Vec::new(),
            region_radius: None,
        });
    if let Some(d) = d_list {
        settings.d_list = d;
    }
    if region_radius.is_some() {
        settings.region_radius = region_radius;
    }
    let d_list = settings.d_list.clone();
    if d_list.is_empty() {
        return Err(CliError::Invalid("no perturbation distances; pass --d-list".into()));
    }
    exp.spec.validate()?;
    let jobs = perturb_jobs(&exp, &d_list);
    let mut bad_vertices = 0usize;
    for job in &jobs {
        let skel = job_skeleton(&exp, job).expect("experiment has a skeleton");
        bad_vertices += skel
            .vertices()
            .values()
            .filter(|v| !exp.scene.env.workspace.is_free_point(&v.position))
            .count();
    }
    let out_dir = args.out_dir.clone().unwrap_or_else(|| exp.output_dir.clone());
    let outcomes = execute(&exp, jobs, args.options())?;
    let rows: Vec<RunRow> = outcomes.into_iter().map(|o| o.row).collect();
    let audit = serde_json::json!({ "vertices_outside_free_space": bad_vertices });
    write_results(&exp, &out_dir, "perturb", &rows, Some(("audit", audit)))?;
    report_rows(&rows, stderr);
    if bad_vertices > 0 {
        let _ = writeln!(stderr, "audit: {bad_vertices} perturbed vertices outside free space");
    }
    let all_ok = bad_vertices == 0 && rows.iter().all(RunRow::success);
    Ok(if all_ok { exit::OK } else { exit::RUN_FAILED })
}

/// Composes a block grid into scene and skeleton files.
pub fn gen_env_cmd(grid: &Path, scene_out: &Path, skeleton_out: &Path) -> Result<i32, CliError> {
    let (scene, skeleton) = load_blockgrid(grid)?.compose()?;
    ensure_parent(scene_out)?;
    ensure_parent(skeleton_out)?;
    save_scene(scene_out, &scene)?;
    save_skeleton(skeleton_out, &skeleton)?;
    Ok(exit::OK)
}

pub fn render_cmd(
    scene: &Path,
    skeleton: Option<&Path>,
    tree: Option<&Path>,
    out: &Path,
    projection: Option<Projection>,
) -> Result<i32, CliError> {
    let scene = load_scene(scene)?;
    let skeleton = skeleton.map(|p| load_skeleton(p, scene.dim())).transpose()?;
    let report = tree.map(load_plan_report).transpose()?;
    write_file(
        out,
        &render_svg(&scene, skeleton.as_ref(), report.as_ref(), projection)?,
    )?;
    Ok(exit::OK)
}
