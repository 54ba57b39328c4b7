//! Depth-first frequent pattern search over bitset covers.
//!
//! Every item owns a [`Cover`], the set of instances that contain it. The
//! cover of an itemset is the AND of its items' covers, so counting support
//! is a popcount. The search walks itemsets in lexicographic id order and
//! stops descending as soon as a node fails its (anti-monotone) acceptance
//! test. Top-level branches are independent and run on the rayon pool; the
//! results are concatenated in branch order, so output never depends on the
//! number of workers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ranking::PairwiseRelation;

/// Support comparisons tolerate this much floating point slack.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Fixed-width bitset over instance indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    words: Vec<u64>,
    len: usize,
}

impl Cover {
    pub fn empty(len: usize) -> Self {
        Cover {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut c = Cover::empty(len);
        for i in 0..len {
            c.insert(i);
        }
        c
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Cover::empty(len);
        for i in indices {
            c.insert(i);
        }
        c
    }

    /// Universe size (number of instances), not the popcount.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside cover of {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Cover) -> Cover {
        debug_assert_eq!(self.len, other.len);
        Cover {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn and_count(&self, other: &Cover) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `self` minus `other`.
    pub fn and_not(&self, other: &Cover) -> Cover {
        Cover {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
            len: self.len,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Antecedent,
    Consequent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemPayload {
    /// `attribute = value` (value index into the attribute's value list).
    Descriptor { attribute: usize, value: u32 },
    Preference(PairwiseRelation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: usize,
    pub payload: ItemPayload,
    pub side: Side,
}

impl Item {
    pub fn descriptor(id: usize, attribute: usize, value: u32) -> Self {
        Item {
            id,
            payload: ItemPayload::Descriptor { attribute, value },
            side: Side::Antecedent,
        }
    }

    pub fn preference(id: usize, rel: PairwiseRelation) -> Self {
        Item {
            id,
            payload: ItemPayload::Preference(rel),
            side: Side::Consequent,
        }
    }

    /// Items with the same key can never hold in the same instance: two
    /// values of one attribute, or two outcomes of one label pair.
    pub fn exclusion_key(&self) -> (u8, usize, usize) {
        match self.payload {
            ItemPayload::Descriptor { attribute, .. } => (0, attribute, 0),
            ItemPayload::Preference(r) => (1, r.a(), r.b()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemSet {
    /// Sorted, duplicate-free item ids.
    pub items: Vec<usize>,
    pub cover: Cover,
}

impl ItemSet {
    pub fn empty(n: usize) -> Self {
        ItemSet {
            items: Vec::new(),
            cover: Cover::full(n),
        }
    }

    pub fn count(&self) -> usize {
        self.cover.count()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

pub fn support(set: &ItemSet, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyInput("support over zero instances".to_string()));
    }
    Ok(set.count() as f64 / n as f64)
}

/// `sup(A -> C) / sup(A)`.
pub fn confidence(sup_rule: f64, sup_antecedent: f64) -> Result<f64> {
    if sup_antecedent <= 0.0 {
        return Err(Error::UndefinedConfidence);
    }
    Ok(sup_rule / sup_antecedent)
}

/// `sup(A -> C) / (sup(A) sup(C))`.
pub fn lift(sup_rule: f64, sup_antecedent: f64, sup_consequent: f64) -> Result<f64> {
    if sup_antecedent <= 0.0 || sup_consequent <= 0.0 {
        return Err(Error::UndefinedLift);
    }
    Ok(sup_rule / (sup_antecedent * sup_consequent))
}

/// Classical association rule `A -> C` with its interest measures.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericRule {
    pub antecedent: ItemSet,
    pub consequent: ItemSet,
    pub sup: f64,
    pub conf: f64,
    pub lift: f64,
}

impl GenericRule {
    pub fn new(antecedent: ItemSet, consequent: ItemSet, n: usize) -> Result<Self> {
        if antecedent.items.iter().any(|i| consequent.items.contains(i)) {
            return Err(Error::Argument(
                "antecedent and consequent share an item".to_string(),
            ));
        }
        let sup_a = support(&antecedent, n)?;
        let sup_c = support(&consequent, n)?;
        let sup = antecedent.cover.and_count(&consequent.cover) as f64 / n as f64;
        let conf = confidence(sup, sup_a)?;
        let lift = lift(sup, sup_a, sup_c)?;
        Ok(GenericRule {
            antecedent,
            consequent,
            sup,
            conf,
            lift,
        })
    }

    /// Support of the antecedent.
    pub fn coverage(&self) -> f64 {
        self.antecedent.count() as f64 / self.antecedent.cover.len() as f64
    }
}

/// Per-side size limits for the search. `Some(0)` forbids a side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchConstraint {
    pub max_antecedent: Option<usize>,
    pub max_consequent: Option<usize>,
}

impl SearchConstraint {
    fn allows(&self, side: Side, current: usize) -> bool {
        let limit = match side {
            Side::Antecedent => self.max_antecedent,
            Side::Consequent => self.max_consequent,
        };
        limit.is_none_or(|l| current < l)
    }
}

pub fn meets_minsup(count: usize, n: usize, minsup: f64) -> bool {
    n > 0 && count as f64 / n as f64 >= minsup - SUPPORT_EPS
}

/// Generic depth-first search. `accept` is called on every candidate node
/// and must be anti-monotone: once it returns `None` no superset is visited.
/// Accepted nodes are returned in lexicographic id order with the value
/// `accept` produced. `items[i].id` must equal `i`.
pub fn search<T, F>(
    items: &[Item],
    covers: &[Cover],
    n: usize,
    constraint: SearchConstraint,
    accept: F,
) -> Vec<(ItemSet, T)>
where
    T: Send,
    F: Fn(&ItemSet) -> Option<T> + Sync,
{
    assert_eq!(items.len(), covers.len());
    debug_assert!(items.iter().enumerate().all(|(i, it)| it.id == i));
    let root = ItemSet::empty(n);
    let all: Vec<usize> = (0..items.len()).collect();
    let walker = Walker {
        items,
        covers,
        constraint,
        accept: &accept,
    };
    all.par_iter()
        .enumerate()
        .map(|(pos, &first)| {
            let mut out = Vec::new();
            walker.visit(&root, [0, 0], &all[pos + 1..], first, &mut out);
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

struct Walker<'a, F> {
    items: &'a [Item],
    covers: &'a [Cover],
    constraint: SearchConstraint,
    accept: &'a F,
}

impl<F> Walker<'_, F> {
    fn side_index(side: Side) -> usize {
        match side {
            Side::Antecedent => 0,
            Side::Consequent => 1,
        }
    }

    fn compatible(&self, prefix: &ItemSet, sizes: [usize; 2], id: usize) -> bool {
        let item = &self.items[id];
        let key = item.exclusion_key();
        self.constraint
            .allows(item.side, sizes[Self::side_index(item.side)])
            && prefix
                .items
                .iter()
                .all(|&p| self.items[p].exclusion_key() != key)
    }

    fn visit<T>(
        &self,
        prefix: &ItemSet,
        sizes: [usize; 2],
        tail: &[usize],
        id: usize,
        out: &mut Vec<(ItemSet, T)>,
    ) where
        F: Fn(&ItemSet) -> Option<T>,
    {
        if !self.compatible(prefix, sizes, id) {
            return;
        }
        let mut items = prefix.items.clone();
        items.push(id);
        let node = ItemSet {
            items,
            cover: prefix.cover.and(&self.covers[id]),
        };
        let Some(value) = (self.accept)(&node) else {
            return;
        };
        let mut sizes = sizes;
        sizes[Self::side_index(self.items[id].side)] += 1;
        out.push((node, value));
        let node = &out.last().unwrap().0.clone();
        for (pos, &next) in tail.iter().enumerate() {
            self.visit(node, sizes, &tail[pos + 1..], next, out);
        }
    }
}

/// Every non-empty itemset allowed by `constraint` whose support reaches
/// `minsup`, in depth-first lexicographic order.
pub fn enumerate_frequent(
    items: &[Item],
    covers: &[Cover],
    n: usize,
    minsup: f64,
    constraint: SearchConstraint,
) -> Vec<ItemSet> {
    search(items, covers, n, constraint, |s| {
        meets_minsup(s.count(), n, minsup).then_some(())
    })
    .into_iter()
    .map(|(s, ())| s)
    .collect()
}

/// One-sided Fisher exact test on 2x2 tables, with a cached log-factorial
/// table.
#[derive(Debug, Clone)]
pub struct FisherTest {
    ln_fact: Vec<f64>,
}

impl FisherTest {
    pub fn new(max_total: usize) -> Self {
        let mut ln_fact = Vec::with_capacity(max_total + 1);
        ln_fact.push(0.0);
        let mut acc = 0.0;
        for i in 1..=max_total {
            acc += (i as f64).ln();
            ln_fact.push(acc);
        }
        FisherTest { ln_fact }
    }

    fn ln_choose(&self, n: usize, k: usize) -> f64 {
        self.ln_fact[n] - self.ln_fact[k] - self.ln_fact[n - k]
    }

    /// `P(X >= a)` for the table
    ///
    /// ```text
    ///              C holds   C fails
    /// rule fires      a         b
    /// general only    c         d
    /// ```
    ///
    /// with X hypergeometric under fixed margins.
    pub fn p_value(&self, a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
        let total = a + b + c + d;
        if total == 0 {
            return Err(Error::UndefinedTest);
        }
        if total >= self.ln_fact.len() {
            return FisherTest::new(total).p_value(a, b, c, d);
        }
        let fires = a + b;
        let holds = a + c;
        let hi = fires.min(holds);
        let denom = self.ln_choose(total, fires);
        let p: f64 = (a..=hi)
            .map(|x| {
                (self.ln_choose(holds, x) + self.ln_choose(total - holds, fires - x) - denom).exp()
            })
            .sum();
        Ok(p.clamp(0.0, 1.0))
    }
}

pub fn fisher_exact_p(a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
    FisherTest::new(a + b + c + d).p_value(a, b, c, d)
}

/// Counts for testing rule `A -> C` against a generalization `A' -> C`
/// (`A' ⊂ A`), given the antecedent covers and the number of instances of
/// each that satisfy the consequent.
pub fn generalization_table(
    rule_count: usize,
    rule_hits: usize,
    general_count: usize,
    general_hits: usize,
) -> (usize, usize, usize, usize) {
    let a = rule_hits;
    let b = rule_count.saturating_sub(rule_hits);
    let c = general_hits.saturating_sub(rule_hits);
    let d = general_count
        .saturating_sub(rule_count)
        .saturating_sub(c);
    (a, b, c, d)
}
