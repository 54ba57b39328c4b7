//! Run configuration: command-line flags layered over an optional TOML file
//! layered over defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use prefrules_core::harness::{EvalConfig, DEFAULT_BINS, DEFAULT_FOLDS};
use prefrules_core::lrar::{Aggregation, LrarParams, MinConf};
use prefrules_core::par::ParParams;
use prefrules_core::ranking::SimilarityKind;
use serde::Deserialize;

use crate::CliError;

/// `--minconf` value: a threshold or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinConfArg {
    Fixed(f64),
    Auto,
}

impl FromStr for MinConfArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(MinConfArg::Auto);
        }
        s.parse()
            .map(MinConfArg::Fixed)
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

impl<'de> Deserialize<'de> for MinConfArg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(MinConfArg::Fixed(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for MinConfArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinConfArg::Fixed(x) => write!(f, "{x}"),
            MinConfArg::Auto => f.write_str("auto"),
        }
    }
}

/// Everything a config file may set. Flags use the same names in
/// kebab-case.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub target: Option<String>,
    pub bins: Option<usize>,
    pub minsup: Option<f64>,
    pub minconf: Option<MinConfArg>,
    pub step: Option<f64>,
    pub min_coverage: Option<f64>,
    pub theta: Option<f64>,
    pub min_imp: Option<f64>,
    pub alpha: Option<f64>,
    pub min_lift: Option<f64>,
    pub base: Option<SimilarityKind>,
    pub aggregation: Option<Aggregation>,
    pub max_consequent: Option<usize>,
    pub max_antecedent: Option<usize>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub tune_once: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Input CSV file.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Name of the ranking column [default: ranking].
    #[arg(short, long)]
    pub target: Option<String>,
    /// Equal-width bins for numeric attributes [default: 4].
    #[arg(long)]
    pub bins: Option<usize>,
    /// TOML file with default values for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub struct Data {
    pub input: PathBuf,
    pub target: String,
    pub bins: usize,
}

impl DataArgs {
    /// Reads the config file named by `--config`, if any.
    pub fn file(&self) -> Result<FileConfig, CliError> {
        match &self.config {
            Some(p) => FileConfig::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    pub fn resolve(&self, file: &FileConfig) -> Result<Data, CliError> {
        let input = self
            .input
            .clone()
            .or_else(|| file.input.clone())
            .ok_or_else(|| CliError::Config("no input file (use --input)".to_string()))?;
        let bins = self.bins.or(file.bins).unwrap_or(DEFAULT_BINS);
        if bins < 2 {
            return Err(CliError::Config(format!("bins must be at least 2, got {bins}")));
        }
        Ok(Data {
            input,
            target: self
                .target
                .clone()
                .or_else(|| file.target.clone())
                .unwrap_or_else(|| "ranking".to_string()),
            bins,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct LrarArgs {
    /// Minimum similarity-weighted support [default: 0.01].
    #[arg(long)]
    pub minsup: Option<f64>,
    /// Minimum confidence, or `auto` to tune it on the training data.
    #[arg(long)]
    pub minconf: Option<MinConfArg>,
    /// Tuning step for `--minconf auto` [default: 0.05].
    #[arg(long)]
    pub step: Option<f64>,
    /// Training coverage `--minconf auto` must reach [default: 0.95].
    #[arg(long)]
    pub min_coverage: Option<f64>,
    /// Similarity threshold [default: 0].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Minimum improvement over generalizations [default: 0.01].
    #[arg(long, allow_negative_numbers = true)]
    pub min_imp: Option<f64>,
    /// Significance level of the Fisher test; 1 disables it [default: 0.05].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Base similarity: tau or normalized-tau [default: tau].
    #[arg(long)]
    pub base: Option<SimilarityKind>,
    /// Longest antecedent.
    #[arg(long)]
    pub max_antecedent: Option<usize>,
}

impl LrarArgs {
    pub fn resolve(&self, file: &FileConfig, default_minconf: MinConfArg) -> Result<(LrarParams, MinConf), CliError> {
        let d = LrarParams::default();
        let mut params = LrarParams {
            minsup: self.minsup.or(file.minsup).unwrap_or(d.minsup),
            minconf: d.minconf,
            theta: self.theta.or(file.theta).unwrap_or(d.theta),
            min_imp: self.min_imp.or(file.min_imp).unwrap_or(d.min_imp),
            alpha: self.alpha.or(file.alpha).unwrap_or(d.alpha),
            base: self.base.or(file.base).unwrap_or(d.base),
            max_antecedent: self.max_antecedent.or(file.max_antecedent),
        };
        let step = self.step.or(file.step);
        let min_coverage = self.min_coverage.or(file.min_coverage);
        let minconf = match self.minconf.or(file.minconf).unwrap_or(default_minconf) {
            MinConfArg::Fixed(c) => {
                if step.is_some() || min_coverage.is_some() {
                    return Err(CliError::Config(
                        "--step/--min-coverage only apply with --minconf auto".to_string(),
                    ));
                }
                params.minconf = c;
                MinConf::Fixed(c)
            }
            MinConfArg::Auto => {
                let MinConf::Auto { step: s, min_coverage: m } = MinConf::default() else {
                    unreachable!()
                };
                let (step, min_coverage) = (step.unwrap_or(s), min_coverage.unwrap_or(m));
                if !(step > 0.0 && step <= 1.0) || !(min_coverage > 0.0 && min_coverage <= 1.0) {
                    return Err(CliError::Config(
                        "step and min-coverage must be in (0,1]".to_string(),
                    ));
                }
                MinConf::Auto { step, min_coverage }
            }
        };
        params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok((params, minconf))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParArgs {
    /// Minimum support [default: 0.01].
    #[arg(long)]
    pub minsup: Option<f64>,
    /// Minimum confidence [default: 0.5].
    #[arg(long)]
    pub minconf: Option<f64>,
    /// Minimum lift [default: 0].
    #[arg(long)]
    pub min_lift: Option<f64>,
    /// Minimum improvement over generalizations [default: 0.01].
    #[arg(long, allow_negative_numbers = true)]
    pub min_imp: Option<f64>,
    /// Significance level of the Fisher test; 1 disables it [default: 0.05].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Most pairwise statements per consequent [default: 4].
    #[arg(long)]
    pub max_consequent: Option<usize>,
    /// Longest antecedent.
    #[arg(long)]
    pub max_antecedent: Option<usize>,
}

impl ParArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<ParParams, CliError> {
        let d = ParParams::default();
        let file_minconf = match file.minconf {
            Some(MinConfArg::Fixed(c)) => Some(c),
            Some(MinConfArg::Auto) => {
                return Err(CliError::Config("minconf `auto` is not available for pairwise rules".to_string()))
            }
            None => None,
        };
        let params = ParParams {
            minsup: self.minsup.or(file.minsup).unwrap_or(d.minsup),
            minconf: self.minconf.or(file_minconf).unwrap_or(d.minconf),
            min_lift: self.min_lift.or(file.min_lift).unwrap_or(d.min_lift),
            min_imp: self.min_imp.or(file.min_imp).unwrap_or(d.min_imp),
            alpha: self.alpha.or(file.alpha).unwrap_or(d.alpha),
            max_consequent: self.max_consequent.or(file.max_consequent).or(d.max_consequent),
            max_antecedent: self.max_antecedent.or(file.max_antecedent),
        };
        params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CvArgs {
    /// Cross-validation folds [default: 10].
    #[arg(long)]
    pub folds: Option<usize>,
    /// Fold assignment seed [default: 0].
    #[arg(long, env = "PREFRULES_SEED")]
    pub seed: Option<u64>,
    /// Tune the minimum confidence once on the whole dataset rather than in
    /// every fold.
    #[arg(long)]
    pub tune_once: bool,
    /// How covering rules are combined [default: average].
    #[arg(long)]
    pub aggregation: Option<Aggregation>,
}

impl CvArgs {
    pub fn resolve(
        &self,
        file: &FileConfig,
        params: LrarParams,
        minconf: MinConf,
        bins: usize,
    ) -> Result<EvalConfig, CliError> {
        let folds = self.folds.or(file.folds).unwrap_or(DEFAULT_FOLDS);
        if folds < 2 {
            return Err(CliError::Config(format!("folds must be at least 2, got {folds}")));
        }
        Ok(EvalConfig {
            params,
            minconf,
            folds,
            seed: self.seed.or(file.seed).unwrap_or(0),
            aggregation: self.aggregation.or(file.aggregation).unwrap_or_default(),
            bins,
            tune_once: self.tune_once || file.tune_once.unwrap_or(false),
        })
    }
}
