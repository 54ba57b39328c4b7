//! Cross-validation, minimum-confidence tuning and parameter sweeps.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{kfold_split, Dataset};
use crate::error::{Error, Result};
use crate::lrar::{mine_lrar, Aggregation, LrarModel, LrarParams, MinConf};
use crate::ranking::{kendall_tau, kendall_tau_b, Ranking};

pub const DEFAULT_BINS: usize = 4;
pub const DEFAULT_FOLDS: usize = 10;

/// Everything `evaluate_cv` needs besides the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub params: LrarParams,
    pub minconf: MinConf,
    pub folds: usize,
    pub seed: u64,
    pub aggregation: Aggregation,
    /// Equal-width bins for numeric attributes, fitted on each training split.
    pub bins: usize,
    /// Tune the minimum confidence once on the whole dataset instead of
    /// inside every fold.
    pub tune_once: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            params: LrarParams::default(),
            minconf: MinConf::default(),
            folds: DEFAULT_FOLDS,
            seed: 0,
            aggregation: Aggregation::default(),
            bins: DEFAULT_BINS,
            tune_once: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Mean τ over each fold's test rows.
    pub fold_tau: Vec<f64>,
    pub mean_tau: f64,
    pub rule_counts: Vec<usize>,
    /// Model coverage on each fold's test rows.
    pub coverage: Vec<f64>,
    /// Minimum confidence used in each fold.
    pub minconf: Vec<f64>,
    pub params: LrarParams,
    pub folds: usize,
    pub seed: u64,
}

impl EvalReport {
    pub fn mean_rules(&self) -> f64 {
        mean(&self.rule_counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
    }

    pub fn mean_coverage(&self) -> f64 {
        mean(&self.coverage)
    }

    pub fn mean_minconf(&self) -> f64 {
        mean(&self.minconf)
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// τ between the true and predicted ranking; τ-b when the prediction has
/// ties. An all-tied prediction scores 0.
pub fn prediction_tau(actual: &Ranking, predicted: &Ranking) -> Result<f64> {
    if actual.is_strict_total() && predicted.is_strict_total() {
        return kendall_tau(actual, predicted);
    }
    match kendall_tau_b(actual, predicted) {
        Err(Error::UndefinedCoefficient(_)) => Ok(0.0),
        other => other,
    }
}

/// Result of the minimum-confidence search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneOutcome {
    pub minconf: f64,
    pub coverage: f64,
    /// Number of coverage evaluations (mining runs).
    pub runs: usize,
}

/// Lowers the minimum confidence from 1 by `step` until `coverage_at`
/// reports at least `min_m`, stopping at 0.
pub fn tune_minconf_with<F>(step: f64, min_m: f64, mut coverage_at: F) -> Result<TuneOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Argument(format!("step must be in (0,1], got {step}")));
    }
    if !(min_m > 0.0 && min_m <= 1.0) {
        return Err(Error::Argument(format!(
            "minimum coverage must be in (0,1], got {min_m}"
        )));
    }
    let mut minconf = 1.0;
    let mut i = 0u32;
    let mut runs = 0;
    loop {
        let coverage = coverage_at(minconf)?;
        runs += 1;
        if coverage >= min_m - 1e-12 || minconf == 0.0 {
            return Ok(TuneOutcome {
                minconf,
                coverage,
                runs,
            });
        }
        i += 1;
        minconf = ((1.0 - i as f64 * step) * 1e12).round() / 1e12;
        if minconf < 1e-9 {
            minconf = 0.0;
        }
    }
}

/// Tunes the minimum confidence on `ds` with coverage measured on `ds`.
/// Returns the tuned model alongside the outcome.
pub fn tune_model(
    ds: &Dataset,
    params: &LrarParams,
    step: f64,
    min_m: f64,
) -> Result<(LrarModel, TuneOutcome)> {
    let base = mine_lrar(
        ds,
        &LrarParams {
            minconf: 0.0,
            ..*params
        },
    )?;
    let outcome = tune_minconf_with(step, min_m, |c| {
        Ok(base.with_min_confidence(c).training_coverage().unwrap_or(0.0))
    })?;
    Ok((base.with_min_confidence(outcome.minconf), outcome))
}

pub fn tune_minconf(
    ds: &Dataset,
    minsup: f64,
    step: f64,
    min_m: f64,
    params: &LrarParams,
) -> Result<TuneOutcome> {
    let params = LrarParams { minsup, ..*params };
    Ok(tune_model(ds, &params, step, min_m)?.1)
}

/// Discretizes (when needed) and mines one model, tuning if requested.
pub fn train_model(ds: &Dataset, params: &LrarParams, minconf: MinConf, bins: usize) -> Result<LrarModel> {
    let (train, discretization) = if ds.is_categorical() {
        (ds.clone(), None)
    } else {
        let d = ds.fit_equal_width(bins)?;
        (d.apply(ds)?, Some(d))
    };
    let mut model = match minconf {
        MinConf::Fixed(c) => mine_lrar(&train, &LrarParams { minconf: c, ..*params })?,
        MinConf::Auto { step, min_coverage } => tune_model(&train, params, step, min_coverage)?.0,
    };
    model.discretization = discretization;
    Ok(model)
}

struct FoldResult {
    tau: f64,
    rules: usize,
    coverage: f64,
    minconf: f64,
}

/// k-fold cross-validated mean τ of the label ranker.
pub fn evaluate_cv(ds: &Dataset, cfg: &EvalConfig) -> Result<EvalReport> {
    cfg.params.validate()?;
    let splits = kfold_split(ds.n(), cfg.folds, cfg.seed)?;
    for (train, test) in &splits {
        assert!(
            test.iter().all(|i| train.binary_search(i).is_err()),
            "fold evaluates on training rows"
        );
        assert_eq!(train.len() + test.len(), ds.n());
    }
    let minconf = match (cfg.tune_once, cfg.minconf) {
        (true, MinConf::Auto { .. }) => {
            MinConf::Fixed(train_model(ds, &cfg.params, cfg.minconf, cfg.bins)?.params.minconf)
        }
        (_, m) => m,
    };
    let results: Vec<FoldResult> = splits
        .par_iter()
        .map(|(train, test)| {
            let model = train_model(&ds.subset(train), &cfg.params, minconf, cfg.bins)?;
            let test_ds = ds.subset(test);
            let predicted = model.predict_dataset(&test_ds, cfg.aggregation, false)?;
            let mut total = 0.0;
            for (actual, p) in test_ds.targets().iter().zip(&predicted) {
                total += prediction_tau(actual, p)?;
            }
            Ok(FoldResult {
                tau: total / test.len() as f64,
                rules: model.rules.len(),
                coverage: model.coverage(&test_ds)?,
                minconf: model.params.minconf,
            })
        })
        .collect::<Result<_>>()?;
    let fold_tau: Vec<f64> = results.iter().map(|r| r.tau).collect();
    Ok(EvalReport {
        mean_tau: mean(&fold_tau),
        fold_tau,
        rule_counts: results.iter().map(|r| r.rules).collect(),
        coverage: results.iter().map(|r| r.coverage).collect(),
        minconf: results.iter().map(|r| r.minconf).collect(),
        params: cfg.params,
        folds: cfg.folds,
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Theta,
    Minsup,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Theta => "theta",
            SweepAxis::Minsup => "minsup",
        }
    }

    fn apply(self, params: &LrarParams, value: f64) -> LrarParams {
        match self {
            SweepAxis::Theta => LrarParams { theta: value, ..*params },
            SweepAxis::Minsup => LrarParams { minsup: value, ..*params },
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(SweepAxis::Theta),
            "minsup" => Ok(SweepAxis::Minsup),
            other => Err(Error::Argument(format!("unknown sweep axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    /// Highest minus lowest mean τ over the grid.
    pub accuracy_range: f64,
}

/// Runs `evaluate_cv` at every grid value of `axis`.
pub fn sweep(ds: &Dataset, axis: SweepAxis, grid: &[f64], cfg: &EvalConfig) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::Argument("empty sweep grid".to_string()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("sweep grid must be strictly increasing".to_string()));
    }
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|&value| {
            let cfg = EvalConfig {
                params: axis.apply(&cfg.params, value),
                ..*cfg
            };
            Ok(SweepPoint {
                value,
                report: evaluate_cv(ds, &cfg)?,
            })
        })
        .collect::<Result<_>>()?;
    let taus = points.iter().map(|p| p.report.mean_tau);
    let hi = taus.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = taus.fold(f64::INFINITY, f64::min);
    Ok(SweepResult {
        axis,
        points,
        accuracy_range: hi - lo,
    })
}

/// Flat CSV, one row per grid point.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "axis",
        "value",
        "mean_tau",
        "mean_rules",
        "mean_coverage",
        "mean_minconf",
    ])
    .map_err(csv_err)?;
    for p in &result.points {
        w.write_record([
            result.axis.name().to_string(),
            p.value.to_string(),
            p.report.mean_tau.to_string(),
            p.report.mean_rules().to_string(),
            p.report.mean_coverage().to_string(),
            p.report.mean_minconf().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Flat CSV, one row per fold.
pub fn write_report_csv<W: Write>(report: &EvalReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["fold", "tau", "rules", "coverage", "minconf"])
        .map_err(csv_err)?;
    for f in 0..report.fold_tau.len() {
        w.write_record([
            (f + 1).to_string(),
            report.fold_tau[f].to_string(),
            report.rule_counts[f].to_string(),
            report.coverage[f].to_string(),
            report.minconf[f].to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `lo:hi:step` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Argument(format!("invalid grid `{text}`"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if step <= 0.0 || !step.is_finite() || hi < lo || !lo.is_finite() || !hi.is_finite() {
                return Err(bad());
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
                .collect()
        }
        [_] => text.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() {
        return Err(bad());
    }
    Ok(grid)
}
