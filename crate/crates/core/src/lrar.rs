//! Label ranking association rules.
//!
//! A rule `A -> pi` predicts a complete ranking. Its support counts every
//! covered instance in proportion to how similar the instance's target is to
//! `pi`, using a base similarity (Kendall tau) censored below a threshold
//! `theta`:
//!
//! ```text
//! sup_lr(A -> pi)  = sum_{i : A ⊆ desc(x_i)} s(pi_i, pi) / n
//! conf_lr(A -> pi) = sup_lr(A -> pi) / sup(A)
//! lift_lr(A -> pi) = sup_lr(A -> pi) / (sup(A) * sup_lr(∅ -> pi))
//! ```
//!
//! With `theta = 1` only identical rankings contribute and the measures
//! reduce to the classical ones of a class association rule.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{is_missing, AttributeKind, AttributeSchema, Dataset, Discretization, Value, MISSING};
use crate::error::{Error, Result};
use crate::miner::{
    generalization_table, search, Cover, FisherTest, Item, ItemSet, SearchConstraint, SUPPORT_EPS,
};
use crate::ranking::{average_ranking, censor, Ranking, SimilarityKind};

/// `attribute index = value index` in the model's schema.
pub type Descriptor = (usize, u32);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrarParams {
    pub minsup: f64,
    pub minconf: f64,
    pub theta: f64,
    pub min_imp: f64,
    pub alpha: f64,
    pub base: SimilarityKind,
    /// Longest antecedent searched; `None` is unbounded.
    #[serde(default)]
    pub max_antecedent: Option<usize>,
}

impl Default for LrarParams {
    fn default() -> Self {
        LrarParams {
            minsup: 0.01,
            minconf: 0.5,
            theta: 0.0,
            min_imp: 0.01,
            alpha: 0.05,
            base: SimilarityKind::KendallTau,
            max_antecedent: None,
        }
    }
}

impl LrarParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Argument(format!("{name} must be in [0,1], got {v}")))
            }
        };
        if !(self.minsup > 0.0 && self.minsup <= 1.0) {
            return Err(Error::Argument(format!(
                "minsup must be in (0,1], got {}",
                self.minsup
            )));
        }
        unit("minconf", self.minconf)?;
        // Negative thresholds would let negative similarities into the
        // support sums and break the pruning bound.
        unit("theta", self.theta)?;
        unit("alpha", self.alpha)?;
        if !self.min_imp.is_finite() {
            return Err(Error::Argument("min_imp must be finite".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrarRule {
    /// Sorted by attribute index.
    pub antecedent: Vec<Descriptor>,
    pub consequent: Ranking,
    pub sup_lr: f64,
    pub conf_lr: f64,
    pub lift_lr: f64,
    /// Classical support of the antecedent.
    pub coverage: f64,
    /// Training instances matched by the antecedent. Empty for imported
    /// rules.
    pub cover: Cover,
}

impl LrarRule {
    pub fn matches(&self, x: &[Option<u32>]) -> bool {
        self.antecedent
            .iter()
            .all(|&(a, v)| x.get(a).copied().flatten() == Some(v))
    }
}

/// Relevance order: confidence, then support (both descending), then
/// shorter antecedents, then lexicographic antecedent and consequent.
fn relevance(a: &LrarRule, b: &LrarRule) -> std::cmp::Ordering {
    b.conf_lr
        .total_cmp(&a.conf_lr)
        .then(b.sup_lr.total_cmp(&a.sup_lr))
        .then(a.antecedent.len().cmp(&b.antecedent.len()))
        .then(a.antecedent.cmp(&b.antecedent))
        .then(a.consequent.cmp(&b.consequent))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    #[default]
    Average,
    WeightedConfidence,
    WeightedSupport,
    BestRule,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(Aggregation::Average),
            "weighted-confidence" => Ok(Aggregation::WeightedConfidence),
            "weighted-support" => Ok(Aggregation::WeightedSupport),
            "best-rule" => Ok(Aggregation::BestRule),
            other => Err(Error::Argument(format!("unknown aggregation `{other}`"))),
        }
    }
}

/// How the minimum confidence is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinConf {
    Fixed(f64),
    /// Lower the threshold by `step` from 1 until the rules cover at least
    /// `min_coverage` of the training set.
    Auto { step: f64, min_coverage: f64 },
}

impl Default for MinConf {
    fn default() -> Self {
        MinConf::Auto {
            step: 0.05,
            min_coverage: 0.95,
        }
    }
}

/// Ordered rule list plus the default rule.
#[derive(Debug, Clone, PartialEq)]
pub struct LrarModel {
    /// Categorical schema the antecedents refer to.
    pub attributes: Vec<AttributeSchema>,
    pub label_names: Vec<String>,
    pub rules: Vec<LrarRule>,
    pub default_ranking: Ranking,
    pub params: LrarParams,
    /// Binning to apply to raw numeric input before matching.
    pub discretization: Option<Discretization>,
}

/// Rows as per-attribute value indices in a model's schema; `None` for
/// values the model has never seen.
pub type Encoded = Vec<Vec<Option<u32>>>;

impl LrarModel {
    pub fn predict(&self, x: &[Option<u32>], aggregation: Aggregation, strict: bool) -> Ranking {
        let covering: Vec<&LrarRule> = self.rules.iter().filter(|r| r.matches(x)).collect();
        let ranking = if covering.is_empty() {
            self.default_ranking.clone()
        } else {
            let consequents: Vec<Ranking> =
                covering.iter().map(|r| r.consequent.clone()).collect();
            let weights: Option<Vec<f64>> = match aggregation {
                Aggregation::WeightedConfidence => {
                    Some(covering.iter().map(|r| r.conf_lr).collect())
                }
                Aggregation::WeightedSupport => Some(covering.iter().map(|r| r.sup_lr).collect()),
                _ => None,
            };
            match aggregation {
                Aggregation::BestRule => covering[0].consequent.clone(),
                _ => {
                    let w = weights.filter(|w| w.iter().sum::<f64>() > 0.0);
                    average_ranking(&consequents, w.as_deref(), strict)
                        .expect("consequents are non-empty strict rankings of equal length")
                }
            }
        };
        if strict {
            ranking.break_ties()
        } else {
            ranking
        }
    }

    /// Maps a dataset onto this model's schema by attribute and value name,
    /// discretizing numeric columns first when the model carries bins.
    pub fn encode(&self, ds: &Dataset) -> Result<Encoded> {
        let ds = match (&self.discretization, ds.is_categorical()) {
            (Some(d), false) => d.apply(ds)?,
            _ => ds.clone(),
        };
        let mut columns = Vec::with_capacity(self.attributes.len());
        for attr in &self.attributes {
            let idx = ds
                .schema()
                .iter()
                .position(|a| a.name == attr.name)
                .ok_or_else(|| {
                    Error::ModelMismatch(format!("input has no attribute `{}`", attr.name))
                })?;
            let src = &ds.schema()[idx];
            if src.kind != AttributeKind::Categorical {
                return Err(Error::ModelMismatch(format!(
                    "attribute `{}` is numeric but the model has no bins for it",
                    attr.name
                )));
            }
            let remap: Vec<Option<u32>> =
                src.values.iter().map(|v| attr.value_index(v)).collect();
            columns.push((idx, remap));
        }
        Ok(ds
            .rows()
            .iter()
            .map(|row| {
                columns
                    .iter()
                    .map(|(idx, remap)| match row[*idx] {
                        Value::Cat(v) => remap[v as usize],
                        Value::Num(_) => None,
                    })
                    .collect()
            })
            .collect())
    }

    /// Same as [`encode`](Self::encode) for raw CSV cells, so unlabeled
    /// input can be predicted. Columns the model does not use are ignored.
    pub fn encode_records<S: AsRef<str>>(&self, header: &[S], records: &[Vec<String>]) -> Result<Encoded> {
        let mut columns = Vec::with_capacity(self.attributes.len());
        for attr in &self.attributes {
            let idx = header
                .iter()
                .position(|h| h.as_ref() == attr.name)
                .ok_or_else(|| {
                    Error::ModelMismatch(format!("input has no attribute `{}`", attr.name))
                })?;
            let bins = self
                .discretization
                .as_ref()
                .and_then(|d| d.attributes.iter().find(|b| b.attribute == attr.name));
            columns.push((idx, bins));
        }
        let mut out = Vec::with_capacity(records.len());
        for (row, rec) in records.iter().enumerate() {
            let mut x = Vec::with_capacity(columns.len());
            for (attr, &(idx, bins)) in self.attributes.iter().zip(&columns) {
                let cell = rec.get(idx).map(|s| s.trim()).ok_or_else(|| Error::Parse {
                    row: row + 1,
                    message: format!("missing field {}", idx + 1),
                })?;
                x.push(match bins {
                    Some(b) => {
                        let v = if is_missing(cell) {
                            0.0
                        } else {
                            cell.parse::<f64>().map_err(|_| {
                                Error::ModelMismatch(format!(
                                    "row {}: attribute `{}` expects a number, got `{cell}`",
                                    row + 1,
                                    attr.name
                                ))
                            })?
                        };
                        Some(b.bin(v) as u32)
                    }
                    None => attr.value_index(if is_missing(cell) { MISSING } else { cell }),
                });
            }
            out.push(x);
        }
        Ok(out)
    }

    pub fn predict_dataset(
        &self,
        ds: &Dataset,
        aggregation: Aggregation,
        strict: bool,
    ) -> Result<Vec<Ranking>> {
        Ok(self
            .encode(ds)?
            .iter()
            .map(|x| self.predict(x, aggregation, strict))
            .collect())
    }

    /// Fraction of instances matched by at least one rule (the default rule
    /// does not count).
    pub fn coverage(&self, ds: &Dataset) -> Result<f64> {
        if ds.n() == 0 {
            return Err(Error::EmptyInput("coverage of an empty dataset".to_string()));
        }
        let encoded = self.encode(ds)?;
        let hit = encoded
            .iter()
            .filter(|x| self.rules.iter().any(|r| r.matches(x)))
            .count();
        Ok(hit as f64 / ds.n() as f64)
    }

    /// Coverage on the training set, from the stored rule covers.
    pub fn training_coverage(&self) -> Option<f64> {
        let n = self.rules.first()?.cover.len();
        if n == 0 {
            return None;
        }
        let mut union = Cover::empty(n);
        for r in &self.rules {
            for i in r.cover.iter() {
                union.insert(i);
            }
        }
        Some(union.count() as f64 / n as f64)
    }

    /// The same model keeping only rules with `conf_lr >= minconf`.
    /// Improvement and significance do not depend on the confidence
    /// threshold, so this equals mining again with `minconf`.
    pub fn with_min_confidence(&self, minconf: f64) -> LrarModel {
        let mut m = self.clone();
        m.rules.retain(|r| r.conf_lr >= minconf - SUPPORT_EPS);
        m.params.minconf = minconf;
        m
    }

    pub fn descriptor_text(&self, d: Descriptor) -> String {
        let attr = &self.attributes[d.0];
        format!("{}={}", attr.name, attr.values[d.1 as usize])
    }

    /// JSON lines: one header object `{"model": ...}` followed by one object
    /// per rule.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        let header = ModelHeader {
            label_names: self.label_names.clone(),
            attributes: self
                .attributes
                .iter()
                .map(|a| AttributeValues {
                    name: a.name.clone(),
                    values: a.values.clone(),
                })
                .collect(),
            default_ranking: self.default_ranking.to_text(&self.label_names),
            params: self.params,
            discretization: self.discretization.clone(),
        };
        writeln!(out, "{}", json(&HeaderLine { model: header })?)?;
        for r in &self.rules {
            let line = RuleLine {
                antecedent: r.antecedent.iter().map(|&d| self.descriptor_text(d)).collect(),
                consequent: r.consequent.to_text(&self.label_names),
                sup_lr: r.sup_lr,
                conf_lr: r.conf_lr,
                lift_lr: r.lift_lr,
                coverage: Some(r.coverage),
            };
            writeln!(out, "{}", json(&line)?)?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<LrarModel> {
        let mut lines = input.lines().enumerate().filter(|(_, l)| {
            l.as_ref().map_or(true, |l| !l.trim().is_empty())
        });
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::ModelMismatch("empty model file".to_string()))?;
        let header: HeaderLine = serde_json::from_str(&first?).map_err(|e| Error::Parse {
            row: 1,
            message: format!("model header: {e}"),
        })?;
        let header = header.model;
        let attributes: Vec<AttributeSchema> = header
            .attributes
            .into_iter()
            .map(|a| AttributeSchema::categorical(a.name, a.values))
            .collect();
        let label_names = header.label_names;
        let default_ranking = Ranking::parse_text(&header.default_ranking, &label_names)?;
        let mut rules = Vec::new();
        for (i, line) in lines {
            let row = i + 1;
            let parsed: RuleLine = serde_json::from_str(&line?).map_err(|e| Error::Parse {
                row,
                message: e.to_string(),
            })?;
            let mut antecedent = Vec::new();
            for text in &parsed.antecedent {
                let (name, value) = text.split_once('=').ok_or_else(|| Error::Parse {
                    row,
                    message: format!("descriptor `{text}` is not attr=value"),
                })?;
                let a = attributes
                    .iter()
                    .position(|s| s.name == name)
                    .ok_or_else(|| Error::ModelMismatch(format!("unknown attribute `{name}`")))?;
                let v = attributes[a].value_index(value).ok_or_else(|| {
                    Error::ModelMismatch(format!("unknown value `{value}` for `{name}`"))
                })?;
                antecedent.push((a, v));
            }
            antecedent.sort_unstable();
            let consequent =
                Ranking::parse_text(&parsed.consequent, &label_names).map_err(|e| Error::Parse {
                    row,
                    message: e.to_string(),
                })?;
            rules.push(LrarRule {
                antecedent,
                consequent,
                sup_lr: parsed.sup_lr,
                conf_lr: parsed.conf_lr,
                lift_lr: parsed.lift_lr,
                coverage: parsed.coverage.unwrap_or(f64::NAN),
                cover: Cover::empty(0),
            });
        }
        Ok(LrarModel {
            attributes,
            label_names,
            rules,
            default_ranking,
            params: header.params,
            discretization: header.discretization,
        })
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct AttributeValues {
    name: String,
    values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelHeader {
    label_names: Vec<String>,
    attributes: Vec<AttributeValues>,
    default_ranking: String,
    params: LrarParams,
    #[serde(default)]
    discretization: Option<Discretization>,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    model: ModelHeader,
}

#[derive(Serialize, Deserialize)]
struct RuleLine {
    antecedent: Vec<String>,
    consequent: String,
    sup_lr: f64,
    conf_lr: f64,
    lift_lr: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coverage: Option<f64>,
}

fn require_categorical(ds: &Dataset) -> Result<()> {
    if let Some(a) = ds
        .schema()
        .iter()
        .find(|a| a.kind != AttributeKind::Categorical)
    {
        return Err(Error::Argument(format!(
            "attribute `{}` is numeric; discretize before mining",
            a.name
        )));
    }
    Ok(())
}

fn antecedent_cover(ds: &Dataset, antecedent: &[Descriptor]) -> Cover {
    Cover::from_indices(
        ds.n(),
        (0..ds.n()).filter(|&i| {
            antecedent
                .iter()
                .all(|&(a, v)| ds.row(i)[a] == Value::Cat(v))
        }),
    )
}

/// Similarity-weighted support, by direct scan of the dataset.
pub fn sup_lr(
    ds: &Dataset,
    antecedent: &[Descriptor],
    pi: &Ranking,
    theta: f64,
    base: SimilarityKind,
) -> Result<f64> {
    if ds.n() == 0 {
        return Err(Error::EmptyInput("support over zero instances".to_string()));
    }
    let mut total = 0.0;
    for i in antecedent_cover(ds, antecedent).iter() {
        total += censor(base.similarity(&ds.targets()[i], pi)?, theta);
    }
    Ok(total / ds.n() as f64)
}

pub fn conf_lr(
    ds: &Dataset,
    antecedent: &[Descriptor],
    pi: &Ranking,
    theta: f64,
    base: SimilarityKind,
) -> Result<f64> {
    let covered = antecedent_cover(ds, antecedent).count();
    if covered == 0 {
        return Err(Error::UndefinedConfidence);
    }
    Ok(sup_lr(ds, antecedent, pi, theta, base)? / (covered as f64 / ds.n() as f64))
}

pub fn lift_lr(
    ds: &Dataset,
    antecedent: &[Descriptor],
    pi: &Ranking,
    theta: f64,
    base: SimilarityKind,
) -> Result<f64> {
    let covered = antecedent_cover(ds, antecedent).count();
    let prior = sup_lr(ds, &[], pi, theta, base)?;
    if covered == 0 || prior <= 0.0 {
        return Err(Error::UndefinedLift);
    }
    let sup_a = covered as f64 / ds.n() as f64;
    Ok(sup_lr(ds, antecedent, pi, theta, base)? / (sup_a * prior))
}

/// Improvement of a rule with confidence `conf` and consequent `pi` over
/// the given sub-rules `(consequent, confidence)`. Only sub-rules whose
/// consequent has base similarity `>= theta` with `pi` are compared; with
/// none left the result is `+inf`.
pub fn imp_lr(
    conf: f64,
    pi: &Ranking,
    sub_rules: &[(Ranking, f64)],
    theta: f64,
    base: SimilarityKind,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (other, other_conf) in sub_rules {
        if base.similarity(other, pi)? >= theta {
            best = best.min(conf - other_conf);
        }
    }
    Ok(best)
}

/// Per-itemset statistics gathered during the search.
struct NodeStats {
    count: usize,
    /// Censored similarity mass per candidate consequent (not divided by n).
    weights: Vec<f64>,
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor().max(0.0) as usize
}

/// Mines the rule set and builds the label ranker.
pub fn mine_lrar(ds: &Dataset, params: &LrarParams) -> Result<LrarModel> {
    params.validate()?;
    require_categorical(ds)?;
    let n = ds.n();
    if n == 0 {
        return Err(Error::EmptyInput("cannot mine an empty dataset".to_string()));
    }
    for (row, t) in ds.targets().iter().enumerate() {
        if !t.is_strict_total() {
            return Err(Error::UnsupportedTarget {
                row: row + 1,
                reason: format!("{t} is not a strict total order"),
            });
        }
    }

    // Candidate consequents: distinct training rankings, sorted.
    let mut candidates: Vec<Ranking> = ds.targets().to_vec();
    candidates.sort();
    candidates.dedup();
    let class_of: HashMap<&Ranking, usize> =
        candidates.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let target_class: Vec<usize> = ds.targets().iter().map(|t| class_of[t]).collect();
    let d = candidates.len();

    // raw[c][e] = s'(candidate e, candidate c); censored copy for supports.
    let mut raw = vec![vec![0.0; d]; d];
    for c in 0..d {
        for e in 0..d {
            raw[c][e] = params.base.similarity(&candidates[e], &candidates[c])?;
        }
    }
    let censored: Vec<Vec<f64>> = raw
        .iter()
        .map(|row| row.iter().map(|&s| censor(s, params.theta)).collect())
        .collect();
    let similar: Vec<Vec<usize>> = (0..d)
        .map(|c| (0..d).filter(|&e| raw[c][e] >= params.theta).collect())
        .collect();

    let stats_of = |cover: &Cover| -> NodeStats {
        let mut hist = vec![0usize; d];
        for i in cover.iter() {
            hist[target_class[i]] += 1;
        }
        let weights = censored
            .iter()
            .map(|row| {
                hist.iter()
                    .zip(row)
                    .filter(|(&h, _)| h > 0)
                    .map(|(&h, &s)| h as f64 * s)
                    .sum()
            })
            .collect();
        NodeStats {
            count: cover.count(),
            weights,
        }
    };
    let min_weight = params.minsup * n as f64 - SUPPORT_EPS * n as f64;

    let mut items = Vec::new();
    let mut covers = Vec::new();
    for (a, attr) in ds.schema().iter().enumerate() {
        for v in 0..attr.values.len() as u32 {
            let cover = Cover::from_indices(n, (0..n).filter(|&i| ds.row(i)[a] == Value::Cat(v)));
            if cover.count() > 0 {
                items.push(Item::descriptor(items.len(), a, v));
                covers.push(cover);
            }
        }
    }
    let constraint = SearchConstraint {
        max_antecedent: params.max_antecedent,
        max_consequent: Some(0),
    };
    let found = search(&items, &covers, n, constraint, |set| {
        let stats = stats_of(&set.cover);
        let best = stats.weights.iter().copied().fold(0.0, f64::max);
        (best >= min_weight).then_some(stats)
    });

    let mut nodes: Vec<(ItemSet, NodeStats)> = Vec::with_capacity(found.len() + 1);
    let root = ItemSet::empty(n);
    let root_stats = stats_of(&root.cover);
    nodes.push((root, root_stats));
    nodes.extend(found);
    let index: HashMap<Vec<usize>, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s.items.clone(), i))
        .collect();

    let conf: Vec<Vec<f64>> = nodes
        .iter()
        .map(|(_, st)| st.weights.iter().map(|w| w / st.count as f64).collect())
        .collect();

    // best_incl[node][c]: highest conf_lr(A' -> c) over A' ⊆ node.
    let mut by_size: Vec<usize> = (0..nodes.len()).collect();
    by_size.sort_by_key(|&i| nodes[i].0.len());
    let mut best_incl: Vec<Vec<f64>> = vec![Vec::new(); nodes.len()];
    let direct_subsets = |items: &[usize]| -> Vec<usize> {
        (0..items.len())
            .map(|skip| {
                let sub: Vec<usize> = items
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &x)| x)
                    .collect();
                index[&sub]
            })
            .collect()
    };
    let mut subsets_of: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &i in &by_size {
        let subs = direct_subsets(&nodes[i].0.items);
        let mut best = conf[i].clone();
        for &s in &subs {
            for (b, &x) in best.iter_mut().zip(&best_incl[s]) {
                *b = b.max(x);
            }
        }
        best_incl[i] = best;
        subsets_of[i] = subs;
    }

    let fisher = FisherTest::new(n);
    let root_weights = &nodes[0].1.weights;
    let mut rules = Vec::new();
    for (i, (set, st)) in nodes.iter().enumerate() {
        let antecedent: Vec<Descriptor> = set
            .items
            .iter()
            .map(|&id| match items[id].payload {
                crate::miner::ItemPayload::Descriptor { attribute, value } => (attribute, value),
                crate::miner::ItemPayload::Preference(_) => unreachable!(),
            })
            .collect();
        let coverage = st.count as f64 / n as f64;
        for c in 0..d {
            let w = st.weights[c];
            if w < min_weight || w <= 0.0 {
                continue;
            }
            let conf_c = conf[i][c];
            if conf_c < params.minconf - SUPPORT_EPS {
                continue;
            }
            if !set.is_empty() {
                let best_sub = similar[c]
                    .iter()
                    .map(|&e| {
                        subsets_of[i]
                            .iter()
                            .map(|&s| best_incl[s][e])
                            .fold(f64::NEG_INFINITY, f64::max)
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                let imp = conf_c - best_sub;
                if imp < params.min_imp - SUPPORT_EPS {
                    continue;
                }
                if params.alpha < 1.0 {
                    let hits = round_half_up(w);
                    let significant = subsets_of[i].iter().chain(std::iter::once(&0)).all(|&g| {
                        let gst = &nodes[g].1;
                        let (a, b, cc, dd) =
                            generalization_table(st.count, hits, gst.count, round_half_up(gst.weights[c]));
                        fisher
                            .p_value(a, b, cc, dd)
                            .is_ok_and(|p| p <= params.alpha)
                    });
                    if !significant {
                        continue;
                    }
                }
            }
            rules.push(LrarRule {
                antecedent: antecedent.clone(),
                consequent: candidates[c].clone(),
                sup_lr: w / n as f64,
                conf_lr: conf_c,
                lift_lr: (w / n as f64) / (coverage * root_weights[c] / n as f64),
                coverage,
                cover: set.cover.clone(),
            });
        }
    }
    rules.sort_by(relevance);

    Ok(LrarModel {
        attributes: ds.schema().to_vec(),
        label_names: ds.label_names().to_vec(),
        rules,
        default_ranking: average_ranking(ds.targets(), None, false)?,
        params: *params,
        discretization: None,
    })
}
