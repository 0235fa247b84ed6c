// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hasrrt_cli::commands::{bench_cmd, gen_env_cmd, perturb_cmd, plan_cmd, render_cmd, MatrixArgs, PlanArgs};
use hasrrt_cli::exit;
use hasrrt_cli::render::Projection;
use hasrrt_core::PlannerKind;

#[derive(Parser)]
#[command(
    name = "hasrrt",
    version,
    about = "Skeleton-guided RRT planners and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one planner on a scene and print the run report as JSON.
    Plan {
        scene: PathBuf,
        #[arg(long)]
        skeleton: Option<PathBuf>,
        /// rrt, drrrt or hasrrt
        #[arg(long)]
        planner: PlannerKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
        /// Wall-clock cap in seconds.
        #[arg(long, default_value_t = 60.0)]
        cap: f64,
        /// JSON file with planner configuration overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the full report, including the tree, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the planner x seed matrix of an experiment file.
    Bench {
        experiment: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Run on the current thread only.
        #[arg(long)]
        serial: bool,
        /// Worker threads for parallel runs.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run HAS-RRT on increasingly perturbed skeletons.
    Perturb {
        experiment: PathBuf,
        /// Comma-separated perturbation distances.
        #[arg(long, value_delimiter = ',')]
        d_list: Option<Vec<f64>>,
        /// Maximum region radius for the perturbed runs.
        #[arg(long)]
        region_radius: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compose a block grid into scene and skeleton files.
    GenEnv {
        blockgrid: PathBuf,
        #[arg(short = 'o', long = "scene-out")]
        scene_out: PathBuf,
        #[arg(short = 's', long = "skeleton-out")]
        skeleton_out: PathBuf,
    },
    /// Draw a scene, optionally with skeleton and planner tree, as SVG.
    Render {
        scene: PathBuf,
        #[arg(long)]
        skeleton: Option<PathBuf>,
        /// Run report written by `plan --out`.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(short = 'o', long)]
        out: PathBuf,
        /// Axis pair for 3D scenes: xy, xz or yz.
        #[arg(long)]
        project: Option<Projection>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    let result = match cli.command {
        Command::Plan {
            scene,
            skeleton,
            planner,
            seed,
            master_seed,
            cap,
            config,
            svg,
            out,
        } => plan_cmd(
            &PlanArgs {
                scene,
                skeleton,
                planner,
                seed,
                master_seed,
                cap,
                config,
                svg,
                out,
            },
            &mut stdout,
        ),
        Command::Bench {
            experiment,
            out_dir,
            serial,
            jobs,
        } => bench_cmd(
            &MatrixArgs {
                experiment,
                out_dir,
                serial,
                jobs,
            },
            &mut stderr,
        ),
        Command::Perturb {
            experiment,
            d_list,
            region_radius,
            out_dir,
            serial,
            jobs,
        } => perturb_cmd(
            &MatrixArgs {
                experiment,
                out_dir,
                serial,
                jobs,
            },
            d_list,
            region_radius,
            &mut stderr,
        ),
        Command::GenEnv {
            blockgrid,
            scene_out,
            skeleton_out,
        } => gen_env_cmd(&blockgrid, &scene_out, &skeleton_out),
        Command::Render {
            scene,
            skeleton,
            tree,
            out,
            project,
        } => render_cmd(&scene, skeleton.as_deref(), tree.as_deref(), &out, project),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit::USAGE
        }
    };
    ExitCode::from(code as u8)
}
