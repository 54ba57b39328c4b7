//! Reference implementations used to check the miners and statistics.
//! Written for clarity, not speed: brute force over subsets, row scans,
//! exact integer arithmetic.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use prefrules_core::dataset::Dataset;
use prefrules_core::lrar::Descriptor;
use prefrules_core::ranking::{
    censored_similarity, decompose_pairwise, default_label_names, PairwiseRelation, Ranking,
    SimilarityKind,
};
use prefrules_core::Value;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_strict(k: usize, rng: &mut impl Rng) -> Ranking {
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    Ranking::from_order(&order).unwrap()
}

pub fn permutations(k: usize) -> Vec<Ranking> {
    fn rec(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Ranking>) {
        if left.is_empty() {
            out.push(Ranking::from_order(prefix).unwrap());
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..k).collect(), &mut out);
    out
}

/// Random categorical dataset; `targets` draws each row's ranking.
pub fn random_categorical(
    n: usize,
    arities: &[usize],
    k: usize,
    rng: &mut ChaCha8Rng,
    mut targets: impl FnMut(&mut ChaCha8Rng) -> Ranking,
) -> Dataset {
    let names: Vec<String> = (0..arities.len()).map(|a| format!("a{a}")).collect();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|_| arities.iter().map(|&m| format!("v{}", rng.gen_range(0..m))).collect())
        .collect();
    let t: Vec<Ranking> = (0..n).map(|_| targets(rng)).collect();
    Dataset::from_categorical(&names, &cells, t, default_label_names(k)).unwrap()
}

/// Row `i` matches every descriptor.
pub fn row_matches(ds: &Dataset, i: usize, a: &[Descriptor]) -> bool {
    a.iter().all(|&(attr, v)| ds.row(i)[attr] == Value::Cat(v))
}

/// All antecedents using at most one value per attribute, including the
/// empty one, each sorted by attribute.
pub fn all_antecedents(ds: &Dataset) -> Vec<Vec<Descriptor>> {
    let mut out = vec![Vec::new()];
    for (a, attr) in ds.schema().iter().enumerate() {
        let mut next = out.clone();
        for prefix in &out {
            for v in 0..attr.values.len() as u32 {
                let mut x = prefix.clone();
                x.push((a, v));
                next.push(x);
            }
        }
        out = next;
    }
    out
}

pub fn proper_subsets<T: Clone>(xs: &[T]) -> Vec<Vec<T>> {
    (0..(1usize << xs.len()) - 1)
        .map(|mask| {
            xs.iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

pub fn direct_generalizations<T: Clone>(xs: &[T]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = (0..xs.len())
        .map(|skip| {
            xs.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    out.push(Vec::new());
    out
}

// ---------------------------------------------------------------- apriori

/// Level-wise frequent itemsets over explicit transactions. Items sharing a
/// key never appear together. Returns itemset -> count, without the empty
/// set.
pub fn apriori(
    transactions: &[BTreeSet<usize>],
    keys: &[usize],
    min_count: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let count = |set: &[usize]| {
        transactions
            .iter()
            .filter(|t| set.iter().all(|i| t.contains(i)))
            .count()
    };
    let mut result = BTreeMap::new();
    let mut level: Vec<Vec<usize>> = (0..keys.len())
        .map(|i| vec![i])
        .filter(|s| count(s) >= min_count)
        .collect();
    while !level.is_empty() {
        for s in &level {
            result.insert(s.clone(), count(s));
        }
        let frequent: BTreeSet<Vec<usize>> = level.iter().cloned().collect();
        let mut next = BTreeSet::new();
        for x in &level {
            for y in &level {
                let m = x.len();
                if x[..m - 1] != y[..m - 1] || x[m - 1] >= y[m - 1] {
                    continue;
                }
                let mut cand = x.clone();
                cand.push(y[m - 1]);
                let distinct_keys: BTreeSet<usize> = cand.iter().map(|&i| keys[i]).collect();
                if distinct_keys.len() != cand.len() {
                    continue;
                }
                let all_subsets_frequent = (0..cand.len()).all(|skip| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    frequent.contains(&sub)
                });
                if all_subsets_frequent && count(&cand) >= min_count {
                    next.insert(cand);
                }
            }
        }
        level = next.into_iter().collect();
    }
    result
}

// ------------------------------------------------------------ PAR brute force

#[derive(Debug, Clone, PartialEq)]
pub struct RefParRule {
    pub antecedent: Vec<Descriptor>,
    pub consequent: Vec<PairwiseRelation>,
    pub sup: f64,
    pub conf: f64,
    pub lift: f64,
}

pub struct ParSettings {
    pub min_count: usize,
    pub minconf: f64,
    pub min_lift: f64,
    pub min_imp: f64,
    pub alpha: f64,
    pub max_consequent: usize,
}

/// Every rule `A -> C` by exhaustive enumeration and row scans.
pub fn brute_force_par(ds: &Dataset, s: &ParSettings) -> Vec<RefParRule> {
    let n = ds.n();
    let rels: Vec<BTreeSet<PairwiseRelation>> = ds
        .targets()
        .iter()
        .map(|t| decompose_pairwise(t).into_iter().collect())
        .collect();
    let present: BTreeSet<PairwiseRelation> = rels.iter().flatten().copied().collect();
    let present: Vec<PairwiseRelation> = present.into_iter().collect();

    // Consequents: non-empty, at most one relation per label pair.
    let mut consequents: Vec<Vec<PairwiseRelation>> = vec![Vec::new()];
    for &r in &present {
        let mut more = Vec::new();
        for c in &consequents {
            if c.len() < s.max_consequent && c.iter().all(|x| x.pair() != r.pair()) {
                let mut x = c.clone();
                x.push(r);
                more.push(x);
            }
        }
        consequents.extend(more);
    }
    consequents.retain(|c| !c.is_empty());

    let count_a = |a: &[Descriptor]| (0..n).filter(|&i| row_matches(ds, i, a)).count();
    let count_ac = |a: &[Descriptor], c: &[PairwiseRelation]| {
        (0..n)
            .filter(|&i| row_matches(ds, i, a) && c.iter().all(|r| rels[i].contains(r)))
            .count()
    };
    let conf = |a: &[Descriptor], c: &[PairwiseRelation]| count_ac(a, c) as f64 / count_a(a) as f64;

    let mut out = Vec::new();
    for a in all_antecedents(ds) {
        for c in &consequents {
            let hits = count_ac(&a, c);
            if hits < s.min_count || hits == 0 {
                continue;
            }
            let ca = count_a(&a);
            let cf = hits as f64 / ca as f64;
            let lift = cf / (count_ac(&[], c) as f64 / n as f64);
            if cf < s.minconf - 1e-12 || lift < s.min_lift - 1e-12 {
                continue;
            }
            if !a.is_empty() {
                let best = proper_subsets(&a)
                    .iter()
                    .map(|sub| conf(sub, c))
                    .fold(f64::NEG_INFINITY, f64::max);
                if cf - best < s.min_imp - 1e-12 {
                    continue;
                }
                if s.alpha < 1.0 {
                    let ok = direct_generalizations(&a).iter().all(|g| {
                        let table = table_vs(ca, hits, count_a(g), count_ac(g, c));
                        hypergeometric_upper(table).is_some_and(|p| p <= s.alpha)
                    });
                    if !ok {
                        continue;
                    }
                }
            }
            out.push(RefParRule {
                antecedent: a.clone(),
                consequent: c.clone(),
                sup: hits as f64 / n as f64,
                conf: cf,
                lift,
            });
        }
    }
    out
}

fn table_vs(rule_count: usize, rule_hits: usize, gen_count: usize, gen_hits: usize) -> [u64; 4] {
    let a = rule_hits;
    let b = rule_count - rule_hits;
    let c = gen_hits - rule_hits;
    let d = gen_count - rule_count - c;
    [a as u64, b as u64, c as u64, d as u64]
}

// ------------------------------------------------------------ CAR reference

#[derive(Debug, Clone, PartialEq)]
pub struct RefLrarRule {
    pub antecedent: Vec<Descriptor>,
    pub consequent: Ranking,
    pub sup: f64,
    pub conf: f64,
    pub lift: f64,
    pub coverage: f64,
}

pub struct CarSettings {
    pub minsup: f64,
    pub minconf: f64,
    pub min_imp: f64,
    pub alpha: f64,
}

/// Class association rules with each distinct ranking as a class: what the
/// label ranking miner must reduce to when only exact matches count.
pub fn car_reference(ds: &Dataset, s: &CarSettings) -> Vec<RefLrarRule> {
    let n = ds.n();
    let mut classes: Vec<Ranking> = ds.targets().to_vec();
    classes.sort();
    classes.dedup();
    let count_a = |a: &[Descriptor]| (0..n).filter(|&i| row_matches(ds, i, a)).count();
    let count_ac = |a: &[Descriptor], c: &Ranking| {
        (0..n)
            .filter(|&i| row_matches(ds, i, a) && &ds.targets()[i] == c)
            .count()
    };
    let min_count = s.minsup * n as f64 - 1e-12 * n as f64;
    let mut out = Vec::new();
    for a in all_antecedents(ds) {
        let ca = count_a(&a);
        if ca == 0 {
            continue;
        }
        for c in &classes {
            let hits = count_ac(&a, c);
            if hits == 0 || (hits as f64) < min_count {
                continue;
            }
            let conf = hits as f64 / ca as f64;
            if conf < s.minconf - 1e-12 {
                continue;
            }
            if !a.is_empty() {
                let best = proper_subsets(&a)
                    .iter()
                    .map(|sub| count_ac(sub, c) as f64 / count_a(sub) as f64)
                    .fold(f64::NEG_INFINITY, f64::max);
                if conf - best < s.min_imp - 1e-12 {
                    continue;
                }
                if s.alpha < 1.0 {
                    let ok = direct_generalizations(&a).iter().all(|g| {
                        let table = table_vs(ca, hits, count_a(g), count_ac(g, c));
                        hypergeometric_upper(table).is_some_and(|p| p <= s.alpha)
                    });
                    if !ok {
                        continue;
                    }
                }
            }
            let sup = hits as f64 / n as f64;
            let coverage = ca as f64 / n as f64;
            out.push(RefLrarRule {
                antecedent: a.clone(),
                consequent: c.clone(),
                sup,
                conf,
                lift: sup / (coverage * (count_ac(&[], c) as f64 / n as f64)),
                coverage,
            });
        }
    }
    out
}

// ------------------------------------------------------------ statistics

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `P(X >= a)` under the hypergeometric law of the table's margins, from
/// exact integer counts. `None` for the empty table.
pub fn hypergeometric_upper([a, b, c, d]: [u64; 4]) -> Option<f64> {
    let total = a + b + c + d;
    if total == 0 {
        return None;
    }
    let fires = a + b;
    let holds = a + c;
    let num: u128 = (a..=fires.min(holds))
        .map(|x| binomial(holds, x) * binomial(total - holds, fires - x))
        .sum();
    Some(num as f64 / binomial(total, fires) as f64)
}

/// Permutation minimizing the summed squared rank distance to `rankings`.
pub fn brute_force_average(rankings: &[Ranking]) -> Ranking {
    let k = rankings[0].k();
    permutations(k)
        .into_iter()
        .map(|p| {
            let cost: u64 = rankings
                .iter()
                .map(|r| {
                    (0..k)
                        .map(|j| {
                            let d = p.rank(j) as i64 - r.rank(j) as i64;
                            (d * d) as u64
                        })
                        .sum::<u64>()
                })
                .sum();
            (cost, p)
        })
        .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)))
        .unwrap()
        .1
}

// ------------------------------------------------------------ generators

/// Rankings are noisy copies of three prototypes; the attributes carry a
/// noisy hint of which prototype an instance follows.
pub fn noisy_prototypes(n: usize, seed: u64) -> Dataset {
    let k = 5;
    let protos = [
        Ranking::new(vec![1, 2, 3, 4, 5]).unwrap(),
        Ranking::new(vec![5, 4, 3, 2, 1]).unwrap(),
        Ranking::new(vec![3, 1, 5, 2, 4]).unwrap(),
    ];
    let mut rng = rng(seed);
    let mut cells = Vec::new();
    let mut targets = Vec::new();
    for _ in 0..n {
        let p = rng.gen_range(0..protos.len());
        let mut row = Vec::new();
        for _ in 0..3 {
            let v = if rng.gen_bool(0.75) { p } else { rng.gen_range(0..3) };
            row.push(format!("h{v}"));
        }
        row.push(format!("z{}", rng.gen_range(0..3)));
        cells.push(row);
        // Random adjacent swaps keep the ranking near its prototype.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&j| protos[p].rank(j));
        for _ in 0..rng.gen_range(0..4) {
            let i = rng.gen_range(0..k - 1);
            order.swap(i, i + 1);
        }
        targets.push(Ranking::from_order(&order).unwrap());
    }
    Dataset::from_categorical(&["h1", "h2", "h3", "noise"], &cells, targets, default_label_names(k))
        .unwrap()
}

/// Censored similarity of each row's target to each candidate, for display.
pub fn similarity_matrix(rows: &[Ranking], cols: &[Ranking], theta: f64) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| {
            cols.iter()
                .map(|c| censored_similarity(r, c, theta, SimilarityKind::KendallTau).unwrap())
                .collect()
        })
        .collect()
}
