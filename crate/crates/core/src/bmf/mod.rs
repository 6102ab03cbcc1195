//! Binary matrix factorization by penalized NMF with thresholding.
//!
//! Each restart minimizes
//!
//! ```text
//! ‖V − WH‖² + ½λ_w‖W∘W − W‖² + ½λ_h‖H∘H − H‖²
//! ```
//!
//! with multiplicative updates. Splitting the gradient of the objective into
//! its positive and negative parts gives
//!
//! ```text
//! H ← H ∘ (WᵀV + 3λ_h H²) / (WᵀWH + 2λ_h H³ + λ_h H)
//! W ← W ∘ (VHᵀ + 3λ_w W²) / (WHHᵀ + 2λ_w W³ + λ_w W)
//! ```
//!
//! The penalty weights start at `1/lambda` and are multiplied by `lambda`
//! after every iteration, so the factors are pushed towards {0, 1} as the
//! run proceeds. The factors of the best run are finally cut at `threshold`.

mod metrics;

pub use metrics::{boolean_product, frobenius_error, hamming_percent, mismatches};

use ndarray::Array2;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::FormalContext;
use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
/// Slack allowed before an objective increase counts as a violation.
const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BmfParams {
    pub rank: usize,
    pub max_iter: usize,
    pub restarts: usize,
    pub lambda_w: f64,
    pub lambda_h: f64,
    pub seed: u64,
    pub threshold: f64,
    pub tol: f64,
}

impl BmfParams {
    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            max_iter: 500,
            restarts: 10,
            lambda_w: 1.1,
            lambda_h: 1.1,
            seed: 0,
            threshold: 0.5,
            tol: 1e-5,
        }
    }

    /// Default parameters with the rank chosen by [`default_rank`].
    pub fn for_context(ctx: &FormalContext) -> Self {
        Self::new(default_rank(ctx.num_attributes()))
    }

    fn validate(&self, ctx: &FormalContext) -> Result<()> {
        let bound = ctx.num_objects().min(ctx.num_attributes());
        if self.rank == 0 || self.rank > bound {
            return Err(Error::Factorization(format!("rank {} out of range 1..={bound}", self.rank)));
        }
        if self.max_iter == 0 || self.restarts == 0 {
            return Err(Error::Factorization("max_iter and restarts must be positive".into()));
        }
        if !(self.lambda_w > 0.0 && self.lambda_h > 0.0) {
            return Err(Error::Factorization("lambda_w and lambda_h must be positive".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::Factorization(format!("threshold {} not in (0,1)", self.threshold)));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::Factorization("tol must be non-negative".into()));
        }
        Ok(())
    }
}

/// `round(√|M|)`, at least 1.
pub fn default_rank(num_attributes: usize) -> usize {
    ((num_attributes as f64).sqrt().round() as usize).max(1)
}

/// Summary of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub restart: usize,
    /// ChaCha stream the restart drew its initialization from.
    pub stream: u64,
    pub iterations: usize,
    /// `‖V − WH‖²` before thresholding, after the last iteration.
    pub objective: f64,
    /// Iterations in which the unpenalized objective went up.
    pub monotonicity_violations: usize,
    /// Frobenius error of the thresholded factors.
    pub fit_error: f64,
    #[serde(skip)]
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryFactorization {
    /// `|G| × k`, attributes `"0"`, …, `"k-1"`.
    pub scale: FormalContext,
    /// `k × |M|`, objects `"0"`, …, `"k-1"`.
    pub loadings: FormalContext,
    pub fit_error: f64,
    pub best_restart: usize,
    pub params: BmfParams,
    pub runs: Vec<RunSummary>,
}

/// JSON sidecar describing how a factorization was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub params: BmfParams,
    pub best_restart: usize,
    pub fit_error: f64,
    pub hamming_pct: f64,
    pub runs: Vec<RunSummary>,
}

impl BinaryFactorization {
    pub fn product(&self) -> Result<FormalContext> {
        boolean_product(&self.scale, &self.loadings)
    }

    pub fn sidecar(&self) -> Result<Sidecar> {
        let cells = (self.scale.num_objects() * self.loadings.num_attributes()) as f64;
        Ok(Sidecar {
            params: self.params.clone(),
            best_restart: self.best_restart,
            fit_error: self.fit_error,
            hamming_pct: 100.0 * self.fit_error * self.fit_error / cells,
            runs: self.runs.clone(),
        })
    }
}

fn to_matrix(ctx: &FormalContext) -> Array2<f64> {
    Array2::from_shape_fn((ctx.num_objects(), ctx.num_attributes()), |(g, m)| {
        if ctx.incident(g, m) {
            1.0
        } else {
            0.0
        }
    })
}

fn objective(v: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> f64 {
    (v - &w.dot(h)).mapv(|x| x * x).sum()
}

/// Rescales factor `j` so that column `j` of `W` and row `j` of `H` share the
/// same maximum. The product `WH` is unchanged.
fn normalize(w: &mut Array2<f64>, h: &mut Array2<f64>) {
    for j in 0..w.ncols() {
        let a = w.column(j).fold(0.0f64, |m, &x| m.max(x));
        let b = h.row(j).fold(0.0f64, |m, &x| m.max(x));
        if a > 0.0 && b > 0.0 {
            let s = (b / a).sqrt();
            w.column_mut(j).mapv_inplace(|x| x * s);
            h.row_mut(j).mapv_inplace(|x| x / s);
        }
    }
}

struct Run {
    w: Array2<f64>,
    h: Array2<f64>,
    summary: RunSummary,
}

fn run(v: &Array2<f64>, params: &BmfParams, restart: usize) -> Run {
    let (n, m) = v.dim();
    let k = params.rank;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(restart as u64);
    let mut w = Array2::from_shape_simple_fn((n, k), || rng.sample::<f64, _>(Open01));
    let mut h = Array2::from_shape_simple_fn((k, m), || rng.sample::<f64, _>(Open01));
    normalize(&mut w, &mut h);

    let mut lw = 1.0 / params.lambda_w;
    let mut lh = 1.0 / params.lambda_h;
    let mut prev = objective(v, &w, &h);
    let mut trace = vec![prev];
    let mut violations = 0;
    let mut iterations = 0;
    while iterations < params.max_iter {
        iterations += 1;

        let wt = w.t();
        let h1 = wt.dot(v) + h.mapv(|x| 3.0 * lh * x * x);
        let h2 = wt.dot(&w).dot(&h) + h.mapv(|x| 2.0 * lh * x * x * x + lh * x) + EPS;
        h = (&h * &h1 / &h2).mapv(|x| x.max(EPS));

        let ht = h.t();
        let w1 = v.dot(&ht) + w.mapv(|x| 3.0 * lw * x * x);
        let w2 = w.dot(&h.dot(&ht)) + w.mapv(|x| 2.0 * lw * x * x * x + lw * x) + EPS;
        w = (&w * &w1 / &w2).mapv(|x| x.max(EPS));

        lw *= params.lambda_w;
        lh *= params.lambda_h;

        let cur = objective(v, &w, &h);
        trace.push(cur);
        if cur > prev + MONOTONE_TOL {
            violations += 1;
        } else if prev - cur < params.tol {
            break;
        }
        prev = cur;
    }
    if violations > 0 {
        log::debug!("restart {restart}: objective increased in {violations} iterations");
    }
    Run {
        w,
        h,
        summary: RunSummary {
            restart,
            stream: restart as u64,
            iterations,
            objective: *trace.last().unwrap(),
            monotonicity_violations: violations,
            fit_error: f64::NAN,
            trace,
        },
    }
}

fn binarize(x: &Array2<f64>, threshold: f64) -> Vec<Vec<bool>> {
    x.rows().into_iter().map(|r| r.iter().map(|&v| v >= threshold).collect()).collect()
}

fn factor_names(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

/// Factorizes `ctx ≈ S·H` with `params.restarts` independent restarts and
/// keeps the one whose thresholded factors have the lowest Frobenius error
/// (ties go to the lowest restart index).
pub fn bmf_factorize(ctx: &FormalContext, params: &BmfParams) -> Result<BinaryFactorization> {
    params.validate(ctx)?;
    if ctx.incidences() == 0 {
        log::warn!("refusing to factorize a context without incidences");
        return Err(Error::Factorization("context has no incidences; its factorization is empty".into()));
    }
    let v = to_matrix(ctx);
    let k = params.rank;

    let mut candidates: Vec<(RunSummary, FormalContext, FormalContext)> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let Run { w, h, mut summary } = run(&v, params, r);
            let s = FormalContext::from_table(ctx.objects().to_vec(), factor_names(k), &binarize(&w, params.threshold))?;
            let l = FormalContext::from_table(factor_names(k), ctx.attributes().to_vec(), &binarize(&h, params.threshold))?;
            summary.fit_error = frobenius_error(ctx, &boolean_product(&s, &l)?)?;
            Ok((summary, s, l))
        })
        .collect::<Result<_>>()?;

    let best = candidates
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.fit_error.total_cmp(&b.0.fit_error).then(i.cmp(j)))
        .map(|(i, _)| i)
        .unwrap();
    let runs: Vec<RunSummary> = candidates.iter().map(|c| c.0.clone()).collect();
    let (summary, scale, loadings) = candidates.swap_remove(best);
    if scale.incidences() == 0 {
        log::warn!("best factorization has an empty scale context");
    }
    Ok(BinaryFactorization {
        scale,
        loadings,
        fit_error: summary.fit_error,
        best_restart: best,
        params: params.clone(),
        runs,
    })
}

/// Factor pair from explicit boolean tables, e.g. factors computed elsewhere.
pub fn factorization_from_contexts(scale: FormalContext, loadings: FormalContext, base: &FormalContext) -> Result<BinaryFactorization> {
    let fit_error = frobenius_error(base, &boolean_product(&scale, &loadings)?)?;
    Ok(BinaryFactorization {
        params: BmfParams::new(scale.num_attributes()),
        scale,
        loadings,
        fit_error,
        best_restart: 0,
        runs: Vec::new(),
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn identity(n: usize) -> FormalContext {
        let table: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FormalContext::from_table((0..n).map(|i| format!("g{i}")), (0..n).map(|i| format!("m{i}")), &table).unwrap()
    }

    #[test]
    fn rank_rule() {
        assert_eq!(default_rank(119), 11);
        assert_eq!(default_rank(683), 26);
        assert_eq!(default_rank(55), 7);
        assert_eq!(default_rank(1), 1);
        assert_eq!(default_rank(0), 1);
    }

    #[test]
    fn identity_is_recovered_exactly() {
        let k = identity(4);
        let f = bmf_factorize(&k, &BmfParams::new(4)).unwrap();
        assert_eq!(f.fit_error, 0.0);
        assert!(f.runs.iter().any(|r| r.fit_error == 0.0));
        assert_eq!(f.product().unwrap(), k);
    }

    #[test]
    fn shapes_and_names() {
        let k = fixtures::living_beings();
        let f = bmf_factorize(&k, &BmfParams::new(3)).unwrap();
        assert_eq!((f.scale.num_objects(), f.scale.num_attributes()), (8, 3));
        assert_eq!((f.loadings.num_objects(), f.loadings.num_attributes()), (3, 9));
        assert_eq!(f.scale.attributes(), ["0", "1", "2"]);
        assert_eq!(f.loadings.objects(), ["0", "1", "2"]);
        assert_eq!(f.scale.objects(), k.objects());
        assert_eq!(f.runs.len(), 10);
        assert!(f.runs.iter().all(|r| r.fit_error >= f.fit_error));
    }

    #[test]
    fn seeded_runs_are_identical() {
        let k = fixtures::domestic_scale();
        let mut p = BmfParams::new(4);
        p.seed = 7;
        let a = bmf_factorize(&k, &p).unwrap();
        let b = bmf_factorize(&k, &p).unwrap();
        assert_eq!(a, b);
        p.seed = 8;
        let c = bmf_factorize(&k, &p).unwrap();
        assert_ne!(a.runs, c.runs);
    }

    #[test]
    fn rejects_bad_input() {
        let k = fixtures::living_beings();
        assert!(bmf_factorize(&k, &BmfParams::new(0)).is_err());
        assert!(bmf_factorize(&k, &BmfParams::new(9)).is_err());
        let mut p = BmfParams::new(2);
        p.threshold = 1.0;
        assert!(bmf_factorize(&k, &p).is_err());
        let empty = FormalContext::from_rows(["a", "b"], ["x", "y"], &["..", ".."]).unwrap();
        assert!(matches!(bmf_factorize(&empty, &BmfParams::new(1)), Err(Error::Factorization(_))));
    }

    #[test]
    fn sidecar_round_trips() {
        let f = bmf_factorize(&identity(4), &BmfParams::new(2)).unwrap();
        let json = serde_json::to_string(&f.sidecar().unwrap()).unwrap();
        let back: Sidecar = serde_json::from_str(&json).unwrap();
        assert_eq!(back.params, f.params);
        assert_eq!(back.runs.len(), 10);
        assert_eq!(back.best_restart, f.best_restart);
    }

    #[test]
    fn objective_mostly_decreases() {
        let k = fixtures::living_beings();
        let f = bmf_factorize(&k, &BmfParams::new(3)).unwrap();
        for r in &f.runs {
            assert!(r.monotonicity_violations <= r.iterations);
            assert!(r.trace.last().unwrap() <= &r.trace[0]);
        }
    }
}
