//! Named experiment configurations.
//!
//! | name               | problem                                        | K    |
//! |--------------------|------------------------------------------------|------|
//! | `dictionary-paper` | m=100 n=500 p=50 l=5 q=60 n'=1000              | 1000 |
//! | `dictionary-desk`  | m=20 n=100 p=10 l=3 q=12 n'=100                | 1000 |
//! | `robust-desk`      | 300 synthetic samples, 40 features, 4 classes  | 500  |
//! | `quadratic-ncsc`   | 10 x 5 quadratic, mu_tilde = 1                 | 1000 |
//! | `quadratic-ncc`    | 10 x 5 quadratic, mu_tilde = 0                 | 1000 |
//!
//! Dictionary presets use `delta = 1e-4`, `r = 5`, `B = 1`. Every preset runs
//! all four algorithms with the rate-matched defaults.

use crate::config::{
    AlgorithmSpec, DictionarySpec, ExperimentConfig, ProblemSpec, QuadraticSpec, RobustSpec, ScheduleSpec, SigmaSpec,
    SyntheticSpec, Timing, CONFIG_FORMAT_VERSION,
};
use crate::error::{HarnessError, Result};

pub const PRESET_NAMES: [&str; 5] = [
    "dictionary-paper",
    "dictionary-desk",
    "robust-desk",
    "quadratic-ncsc",
    "quadratic-ncc",
];

fn all_algorithms() -> Vec<AlgorithmSpec> {
    ["RPDCG", "CGRPGA", "SPFW", "AGP"]
        .into_iter()
        .map(AlgorithmSpec::named)
        .collect()
}

fn base(name: &str, iterations: usize, problem: ProblemSpec) -> ExperimentConfig {
    ExperimentConfig {
        format_version: CONFIG_FORMAT_VERSION,
        seed: 1,
        iterations,
        eval_every: 10,
        output: format!("out/{name}"),
        time_budget_seconds: None,
        parallel: false,
        timing: Timing::Wall,
        regime: None,
        problem,
        algorithms: all_algorithms(),
    }
}

fn dictionary(m: usize, n: usize, p: usize, l: usize, q: usize, n_prime: usize) -> ProblemSpec {
    ProblemSpec::Dictionary(DictionarySpec {
        m,
        n,
        p,
        l,
        q,
        n_prime,
        delta: 1e-4,
        radius: 5.0,
        bound: 1.0,
    })
}

fn quadratic(mu_tilde: f64) -> ProblemSpec {
    ProblemSpec::Quadratic(QuadraticSpec {
        dim_x: 10,
        dim_y: 5,
        mu_tilde,
        x_radius: 1.0,
        y_radius: 1.0,
    })
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let cfg = match name {
        "dictionary-paper" => base(name, 1000, dictionary(100, 500, 50, 5, 60, 1000)),
        "dictionary-desk" => base(name, 1000, dictionary(20, 100, 10, 3, 12, 100)),
        "robust-desk" => base(
            name,
            500,
            ProblemSpec::Robust(RobustSpec {
                dataset: None,
                one_based: true,
                subsample: None,
                synthetic: Some(SyntheticSpec {
                    samples: 300,
                    features: 40,
                    classes: 4,
                    nnz_per_row: 8,
                    noise: 0.3,
                }),
                radius: 5.0,
                rho: 1.0,
                smoothness_samples: 200,
            }),
        ),
        "quadratic-ncsc" => {
            let mu_tilde = 1.0;
            let mut cfg = base(name, 1000, quadratic(mu_tilde));
            // L_yy = mu_tilde for this family, so the bound is 2 / (2 mu_tilde).
            for a in cfg.algorithms.iter_mut().filter(|a| a.name == "CGRPGA") {
                a.sigma = Some(SigmaSpec::Schedule(ScheduleSpec::Constant(2.0 / (mu_tilde + mu_tilde))));
            }
            cfg
        }
        "quadratic-ncc" => base(name, 1000, quadratic(0.0)),
        other => {
            return Err(HarnessError::config(format!(
                "unknown preset `{other}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(cfg)
}

/// One-line description printed by `preset <name>` without `--emit`.
pub fn describe(cfg: &ExperimentConfig) -> String {
    let problem = match &cfg.problem {
        ProblemSpec::Quadratic(q) => format!("quadratic dim_x={} dim_y={} mu_tilde={}", q.dim_x, q.dim_y, q.mu_tilde),
        ProblemSpec::Dictionary(d) => format!(
            "dictionary m={} n={} p={} l={} q={} n'={} delta={:e} r={} B={}",
            d.m, d.n, d.p, d.l, d.q, d.n_prime, d.delta, d.radius, d.bound
        ),
        ProblemSpec::Robust(r) => match &r.synthetic {
            Some(s) => format!(
                "robust synthetic n={} d={} k={} r={} rho={}",
                s.samples, s.features, s.classes, r.radius, r.rho
            ),
            None => format!(
                "robust dataset={} r={} rho={}",
                r.dataset.as_deref().unwrap_or("?"),
                r.radius,
                r.rho
            ),
        },
    };
    let algs: Vec<&str> = cfg.algorithms.iter().map(|a| a.name.as_str()).collect();
    format!(
        "{problem}; K={} eval_every={} seed={}; algorithms {}",
        cfg.iterations,
        cfg.eval_every,
        cfg.seed,
        algs.join(",")
    )
}
