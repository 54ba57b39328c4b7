//! Pairwise association rules.
//!
//! Each target ranking is decomposed into its `k(k-1)/2` pairwise outcomes
//! (preferred, tied, incomparable). Those outcomes become consequent-side
//! items next to the descriptor items, and rules `A -> C` are mined with the
//! classical support, confidence and lift, with `C` a set of pairwise
//! statements. There is no default rule: an instance no rule speaks for is
//! simply left without a prediction.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeKind, AttributeSchema, Dataset, Value};
use crate::error::{Error, Result};
use crate::lrar::Descriptor;
use crate::miner::{
    generalization_table, meets_minsup, search, Cover, FisherTest, Item, ItemPayload, ItemSet,
    SearchConstraint, Side, SUPPORT_EPS,
};
use crate::ranking::{consolidate_pairwise, decompose_pairwise, Consolidation, PairwiseRelation, Ranking};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParParams {
    pub minsup: f64,
    pub minconf: f64,
    pub min_lift: f64,
    pub min_imp: f64,
    pub alpha: f64,
    /// Most pairwise statements per consequent.
    pub max_consequent: Option<usize>,
    #[serde(default)]
    pub max_antecedent: Option<usize>,
}

impl Default for ParParams {
    fn default() -> Self {
        ParParams {
            minsup: 0.01,
            minconf: 0.5,
            min_lift: 0.0,
            min_imp: 0.01,
            alpha: 0.05,
            max_consequent: Some(4),
            max_antecedent: None,
        }
    }
}

impl ParParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.minsup > 0.0 && self.minsup <= 1.0) {
            return Err(Error::Argument(format!(
                "minsup must be in (0,1], got {}",
                self.minsup
            )));
        }
        for (name, v) in [("minconf", self.minconf), ("alpha", self.alpha)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Argument(format!("{name} must be in [0,1], got {v}")));
            }
        }
        if self.min_lift.is_nan() || self.min_lift < 0.0 || !self.min_imp.is_finite() {
            return Err(Error::Argument("min_lift/min_imp out of range".to_string()));
        }
        if self.max_consequent == Some(0) {
            return Err(Error::Argument("max_consequent must be positive".to_string()));
        }
        Ok(())
    }
}

/// Descriptor items followed by pairwise-outcome items, with their covers.
#[derive(Debug, Clone)]
pub struct Transactions {
    pub items: Vec<Item>,
    pub covers: Vec<Cover>,
    pub n: usize,
    pub k: usize,
}

impl Transactions {
    /// Item ids present in instance `i`.
    pub fn instance_items(&self, i: usize) -> Vec<usize> {
        (0..self.items.len())
            .filter(|&id| self.covers[id].contains(i))
            .collect()
    }
}

/// Expands each instance into its descriptor items and one pairwise item per
/// label pair.
pub fn pairwise_expand(ds: &Dataset) -> Result<Transactions> {
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
    let n = ds.n();
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
    let mut pair_items: Vec<(PairwiseRelation, Vec<usize>)> = Vec::new();
    let mut slot: HashMap<PairwiseRelation, usize> = HashMap::new();
    for (i, t) in ds.targets().iter().enumerate() {
        for rel in decompose_pairwise(t) {
            let s = *slot.entry(rel).or_insert_with(|| {
                pair_items.push((rel, Vec::new()));
                pair_items.len() - 1
            });
            pair_items[s].1.push(i);
        }
    }
    pair_items.sort_by_key(|(rel, _)| *rel);
    for (rel, rows) in pair_items {
        items.push(Item::preference(items.len(), rel));
        covers.push(Cover::from_indices(n, rows));
    }
    Ok(Transactions {
        items,
        covers,
        n,
        k: ds.k(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParRule {
    /// Sorted by attribute index.
    pub antecedent: Vec<Descriptor>,
    /// Sorted, one relation per label pair at most.
    pub consequent: Vec<PairwiseRelation>,
    pub sup: f64,
    pub conf: f64,
    pub lift: f64,
}

fn split(items: &[Item], set: &[usize]) -> (Vec<usize>, Vec<usize>) {
    set.iter().partition(|&&id| items[id].side == Side::Antecedent)
}

/// Mines pairwise association rules, sorted by lift (descending, stable).
pub fn mine_par(ds: &Dataset, params: &ParParams) -> Result<Vec<ParRule>> {
    params.validate()?;
    let tx = pairwise_expand(ds)?;
    let n = tx.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let constraint = SearchConstraint {
        max_antecedent: params.max_antecedent,
        max_consequent: params.max_consequent,
    };
    let mut nodes: Vec<ItemSet> = vec![ItemSet::empty(n)];
    nodes.extend(
        search(&tx.items, &tx.covers, n, constraint, |s| {
            meets_minsup(s.count(), n, params.minsup).then_some(())
        })
        .into_iter()
        .map(|(s, ())| s),
    );
    let index: HashMap<&[usize], usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, s)| (s.items.as_slice(), i))
        .collect();
    let count = |items: &[usize]| nodes[index[items]].count();

    let mut by_size: Vec<usize> = (0..nodes.len()).collect();
    by_size.sort_by_key(|&i| nodes[i].len());
    // best_incl[node]: highest conf(A' -> C) over A' ⊆ A, where node = A ∪ C.
    let mut best_incl = vec![f64::NEG_INFINITY; nodes.len()];
    let mut generalizations: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &i in &by_size {
        let (ante, cons) = split(&tx.items, &nodes[i].items);
        if cons.is_empty() {
            continue;
        }
        let conf = nodes[i].count() as f64 / count(&ante) as f64;
        let mut best = conf;
        let mut gens = Vec::new();
        for skip in 0..ante.len() {
            let mut sub: Vec<usize> = ante
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &x)| x)
                .collect();
            sub.extend(&cons);
            sub.sort_unstable();
            let g = index[sub.as_slice()];
            best = best.max(best_incl[g]);
            gens.push(g);
        }
        best_incl[i] = best;
        generalizations[i] = gens;
    }

    let fisher = FisherTest::new(n);
    let mut rules = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        let (ante, cons) = split(&tx.items, &node.items);
        if cons.is_empty() {
            continue;
        }
        let hits = node.count();
        let ante_count = count(&ante);
        let cons_count = count(&cons);
        let sup = hits as f64 / n as f64;
        let conf = hits as f64 / ante_count as f64;
        let lift = conf / (cons_count as f64 / n as f64);
        if conf < params.minconf - SUPPORT_EPS || lift < params.min_lift - SUPPORT_EPS {
            continue;
        }
        if !ante.is_empty() {
            let gens = &generalizations[i];
            let best_sub = gens
                .iter()
                .map(|&g| best_incl[g])
                .fold(f64::NEG_INFINITY, f64::max);
            if conf - best_sub < params.min_imp - SUPPORT_EPS {
                continue;
            }
            if params.alpha < 1.0 {
                let empty_gen = index[cons.as_slice()];
                let significant = gens.iter().chain(std::iter::once(&empty_gen)).all(|&g| {
                    let (g_ante, _) = split(&tx.items, &nodes[g].items);
                    let (a, b, c, d) =
                        generalization_table(ante_count, hits, count(&g_ante), nodes[g].count());
                    fisher.p_value(a, b, c, d).is_ok_and(|p| p <= params.alpha)
                });
                if !significant {
                    continue;
                }
            }
        }
        let antecedent = ante
            .iter()
            .map(|&id| match tx.items[id].payload {
                ItemPayload::Descriptor { attribute, value } => (attribute, value),
                ItemPayload::Preference(_) => unreachable!("antecedent side"),
            })
            .collect();
        let consequent = cons
            .iter()
            .map(|&id| match tx.items[id].payload {
                ItemPayload::Preference(rel) => rel,
                ItemPayload::Descriptor { .. } => unreachable!("consequent side"),
            })
            .collect();
        rules.push(ParRule {
            antecedent,
            consequent,
            sup,
            conf,
            lift,
        });
    }
    rules.sort_by(|a, b| b.lift.total_cmp(&a.lift));
    Ok(rules)
}

/// Human-readable consequent of a rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleDescription {
    /// Chain form (`L1>L7>L3`) when the consequent is a chain, otherwise
    /// the reduced precedence graph as a conjunction of paths.
    pub text: String,
    pub subranking: Option<Ranking>,
    /// The consequent contains contradictory preferences.
    pub cyclic: bool,
}

pub fn describe_consequent<S: AsRef<str>>(consequent: &[PairwiseRelation], names: &[S]) -> RuleDescription {
    let conjunction = |rels: &mut dyn Iterator<Item = &PairwiseRelation>| {
        rels.map(|r| r.render(names)).collect::<Vec<_>>().join(" ∧ ")
    };
    match consolidate_pairwise(consequent, names.len()) {
        Ok(Consolidation::Chain(p)) => RuleDescription {
            text: p.to_text(names),
            subranking: Some(p),
            cyclic: false,
        },
        Ok(Consolidation::NotAChain(g)) if !g.groups.is_empty() => RuleDescription {
            text: g.render(names),
            subranking: None,
            cyclic: false,
        },
        Ok(Consolidation::NotAChain(_)) => RuleDescription {
            text: conjunction(&mut consequent.iter()),
            subranking: None,
            cyclic: false,
        },
        Err(_) => RuleDescription {
            text: conjunction(&mut consequent.iter()),
            subranking: None,
            cyclic: true,
        },
    }
}

pub fn describe_rule<S: AsRef<str>>(rule: &ParRule, names: &[S]) -> RuleDescription {
    describe_consequent(&rule.consequent, names)
}

#[derive(Serialize)]
struct PairLine<'a> {
    a: &'a str,
    b: &'a str,
    kind: &'static str,
}

#[derive(Serialize)]
struct ParLine<'a> {
    antecedent: Vec<String>,
    consequent: Vec<PairLine<'a>>,
    consequent_text: String,
    subranking: Option<String>,
    cyclic: bool,
    sup: f64,
    conf: f64,
    lift: f64,
}

/// One JSON object per rule.
pub fn write_par_jsonl<W: Write>(
    rules: &[ParRule],
    attributes: &[AttributeSchema],
    label_names: &[String],
    mut out: W,
) -> Result<()> {
    for r in rules {
        let desc = describe_rule(r, label_names);
        let line = ParLine {
            antecedent: r
                .antecedent
                .iter()
                .map(|&(a, v)| format!("{}={}", attributes[a].name, attributes[a].values[v as usize]))
                .collect(),
            consequent: r
                .consequent
                .iter()
                .map(|rel| PairLine {
                    a: &label_names[rel.a()],
                    b: &label_names[rel.b()],
                    kind: rel.kind().name(),
                })
                .collect(),
            consequent_text: desc.text,
            subranking: desc.subranking.map(|p| p.to_string()),
            cyclic: desc.cyclic,
            sup: r.sup,
            conf: r.conf,
            lift: r.lift,
        };
        let text = serde_json::to_string(&line).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{text}")?;
    }
    Ok(())
}
