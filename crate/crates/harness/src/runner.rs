use std::path::Path;
use std::time::Instant;

use saddlefw::algorithms::default_params_with;
use saddlefw::ingest::{
    read_libsvm_file, synthetic_classification, train_subsample, ParseOptions, SyntheticClassification,
};
use saddlefw::problems::{
    generate_dictionary_dataset, DictionaryDims, DictionaryLearning, QuadraticSaddle, RobustMulticlass,
};
use saddlefw::sets::{ChiSquareBall, L2Ball, NuclearBall};
use saddlefw::{run, Algorithm, FeasibleSet, Regime, RunResult64, SaddleObjective, Smoothness64, SolverConfig64};

use crate::config::{ExperimentConfig, ProblemSpec};
use crate::error::{HarnessError, Result};

/// A problem instance with its sets and common starting point.
pub struct BuiltProblem {
    pub kind: &'static str,
    pub obj: Box<dyn SaddleObjective<f64>>,
    pub x_set: Box<dyn FeasibleSet<f64>>,
    pub y_set: Box<dyn FeasibleSet<f64>>,
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub regime: Regime,
}

impl BuiltProblem {
    pub fn smoothness(&self) -> Smoothness64 {
        self.obj.smoothness()
    }
}

pub fn build_problem(cfg: &ExperimentConfig, base_dir: &Path) -> Result<BuiltProblem> {
    let seed = cfg.seed;
    let mut built = match &cfg.problem {
        ProblemSpec::Quadratic(q) => {
            let obj = QuadraticSaddle::<f64>::random(q.dim_x, q.dim_y, q.mu_tilde, seed)?;
            let start = q.x_radius / (2.0 * (q.dim_x as f64).sqrt());
            BuiltProblem {
                kind: "quadratic",
                obj: Box::new(obj),
                x_set: Box::new(L2Ball::centered(q.dim_x, q.x_radius)?),
                y_set: Box::new(L2Ball::centered(q.dim_y, q.y_radius)?),
                x0: vec![start; q.dim_x],
                y0: vec![0.0; q.dim_y],
                regime: if q.mu_tilde > 0.0 { Regime::NcSc } else { Regime::NcC },
            }
        }
        ProblemSpec::Dictionary(d) => {
            let dims = DictionaryDims {
                m: d.m,
                n: d.n,
                p: d.p,
                l: d.l,
                q: d.q,
                n_prime: d.n_prime,
            };
            let data = generate_dictionary_dataset::<f64>(dims, seed)?;
            let obj = DictionaryLearning::new(&data, d.delta, d.radius, d.bound)?;
            let (x_set, y_set) = obj.feasible_sets()?;
            let (x0, y0) = obj.initial_point(&data)?;
            BuiltProblem {
                kind: "dictionary",
                obj: Box::new(obj),
                x_set: Box::new(x_set),
                y_set: Box::new(y_set),
                x0,
                y0,
                regime: Regime::NcC,
            }
        }
        ProblemSpec::Robust(r) => {
            let mut ds = match (&r.synthetic, cfg.dataset_path(base_dir)) {
                (Some(s), _) => {
                    let spec = SyntheticClassification {
                        samples: s.samples,
                        features: s.features,
                        classes: s.classes,
                        nnz_per_row: s.nnz_per_row,
                        noise: s.noise,
                    };
                    synthetic_classification::<f64>(&spec, seed)?
                }
                (None, Some(path)) => {
                    let opts = ParseOptions {
                        declared_dim: None,
                        one_based: r.one_based,
                    };
                    read_libsvm_file::<f64>(&path, opts)
                        .map_err(|e| HarnessError::config(format!("problem.dataset: {}: {e}", path.display())))?
                }
                (None, None) => return Err(HarnessError::config("problem: no data source")),
            };
            if let Some(n_keep) = r.subsample {
                ds = train_subsample(&ds, n_keep, seed)?;
            }
            let x_set = NuclearBall::new(ds.num_classes(), ds.dim(), r.radius)?;
            let y_set = ChiSquareBall::new(ds.len(), r.rho)?;
            let n = ds.len();
            let (obj, est) =
                RobustMulticlass::with_estimated_smoothness(ds, &x_set, &y_set, r.smoothness_samples, seed)?;
            log::info!(
                "estimated l_xx={:e} l_yx={:e} from {} sampled pairs",
                est.l_xx,
                est.l_yx,
                est.samples
            );
            BuiltProblem {
                kind: "robust",
                x0: vec![0.0; obj.dim_x()],
                y0: vec![1.0 / n as f64; n],
                obj: Box::new(obj),
                x_set: Box::new(x_set),
                y_set: Box::new(y_set),
                regime: Regime::NcC,
            }
        }
    };
    if let Some(r) = cfg.regime {
        built.regime = r.into();
    }
    Ok(built)
}

/// Solver settings per configured algorithm: rate-matched defaults, then overrides.
pub fn solver_configs(cfg: &ExperimentConfig, problem: &BuiltProblem) -> Result<Vec<SolverConfig64>> {
    let smooth = problem.smoothness();
    cfg.parsed_algorithms()?
        .into_iter()
        .zip(&cfg.algorithms)
        .enumerate()
        .map(|(i, (alg, spec))| {
            let field = |name: &str| format!("algorithms[{i}].{name}");
            let pre = spec.prefactors(problem.regime);
            let defaults = default_params_with(alg, problem.regime, cfg.iterations, &smooth, pre)
                .map_err(|e| HarnessError::config(format!("algorithms[{i}] ({alg}): {e}")))?;
            let mut sc = SolverConfig64::new(alg, cfg.iterations)
                .with_eval_every(spec.eval_every.unwrap_or(cfg.eval_every))
                .with_time_budget(cfg.time_budget());
            sc.seed = cfg.seed;
            sc.mu = spec.mu.map(|m| m.to_schedule()).unwrap_or(defaults.mu);
            sc.tau = spec.tau.map(|t| t.to_schedule()).unwrap_or(defaults.tau);
            sc.sigma = match &spec.sigma {
                Some(s) => s.to_dual_step(&field("sigma"))?,
                None => defaults.sigma,
            };
            Ok(sc)
        })
        .collect()
}

pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub result: RunResult64,
    /// Wall time including gap evaluations.
    pub wall_seconds: f64,
}

pub struct Experiment {
    pub problem: BuiltProblem,
    pub runs: Vec<AlgorithmRun>,
}

fn run_one(problem: &BuiltProblem, sc: &SolverConfig64) -> Result<AlgorithmRun> {
    let start = Instant::now();
    let result = run(
        &*problem.obj,
        &*problem.x_set,
        &*problem.y_set,
        &problem.x0,
        &problem.y0,
        sc,
    )?;
    Ok(AlgorithmRun {
        algorithm: sc.algorithm,
        result,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Validates the config, builds the problem and runs every algorithm.
pub fn execute(cfg: &ExperimentConfig, base_dir: &Path) -> Result<Experiment> {
    cfg.validate(base_dir)?;
    let problem = build_problem(cfg, base_dir)?;
    let configs = solver_configs(cfg, &problem)?;
    let runs = if cfg.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = configs
                .iter()
                .map(|sc| {
                    let p = &problem;
                    s.spawn(move || run_one(p, sc))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread panicked"))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        let mut runs = Vec::with_capacity(configs.len());
        for sc in &configs {
            log::info!("running {} for {} iterations", sc.algorithm, sc.iterations);
            runs.push(run_one(&problem, sc)?);
        }
        runs
    };
    Ok(Experiment { problem, runs })
}
