use std::path::{Path, PathBuf};
use std::time::Instant;

use qharm_core::scenario::{analyze_stage, Scenario, Stage};
use qharm_core::Tolerance;
use rayon::prelude::*;

use crate::report::{BatteryReport, Entry, LoadFailure};
use crate::schema::{load_scenario, LoadError, ScenarioFile};

pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tolerance: Tolerance,
    pub seed: u64,
    pub max_dim: usize,
    pub stage: Stage,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            seed: 0,
            max_dim: DEFAULT_MAX_DIM,
            stage: Stage::Suite,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Inline(Box<ScenarioFile>),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Inline(f) => format!("corpus:{}", f.name),
        }
    }

    fn load(&self, tol: &Tolerance) -> Result<Scenario, LoadError> {
        match self {
            Source::File(p) => load_scenario(p, tol),
            Source::Inline(f) => f.build(Path::new("."), tol),
        }
    }
}

pub fn stage_name(stage: Stage) -> &'static str {
    match stage {
        Stage::Verify => "verify",
        Stage::Harmonic => "harmonic",
        Stage::Suite => "suite",
    }
}

/// Files as given; directories expand to their `*.json` entries, sorted.
pub fn expand_paths(paths: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn run_one(source: &Source, opts: &Options) -> Entry {
    let label = source.label();
    let fail = |e: &LoadError| Entry {
        source: label.clone(),
        load_error: Some(LoadFailure::from(e)),
        report: None,
    };
    let scenario = match source.load(&opts.tolerance) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let dim = scenario
        .action
        .hopf()
        .dim()
        .max(scenario.action.target().dim());
    if dim > opts.max_dim {
        return fail(&LoadError::TooLarge {
            dim,
            max: opts.max_dim,
        });
    }
    let start = Instant::now();
    let mut report = analyze_stage(&scenario, &opts.tolerance, opts.seed, opts.stage);
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Entry {
        source: label,
        load_error: None,
        report: Some(report),
    }
}

/// Runs every source in parallel; entries keep the input order.
pub fn run(sources: &[Source], opts: &Options) -> BatteryReport {
    let start = Instant::now();
    let entries: Vec<Entry> = sources.par_iter().map(|s| run_one(s, opts)).collect();
    let wall = start.elapsed().as_secs_f64() * 1e3;
    BatteryReport::new(
        stage_name(opts.stage),
        opts.tolerance,
        opts.seed,
        entries,
        wall,
    )
}
