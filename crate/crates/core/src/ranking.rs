//! Rankings over a fixed label set, pairwise decomposition, and the rank
//! correlation and aggregation functions built on them.
//!
//! A [`Ranking`] stores one rank per label (index = label id). Rank 1 is the
//! most preferred; equal ranks are ties and rank 0 marks a label that is
//! absent or incomparable. Positive ranks are always dense, so `(1,2,2,3)`
//! is valid while `(1,3,3,4)` is not.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Means closer than this are treated as tied when aggregating.
const MEAN_TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    ranks: Vec<u32>,
}

impl Ranking {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        let positive: BTreeSet<u32> = ranks.iter().copied().filter(|&r| r > 0).collect();
        if let Some(&max) = positive.iter().next_back() {
            if max as usize != positive.len() {
                return Err(Error::InvalidRanking(format!(
                    "ranks {} are not dense",
                    vector_text(&ranks)
                )));
            }
        }
        Ok(Ranking { ranks })
    }

    /// Strict total order from labels listed most-preferred first.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let k = order.len();
        let mut ranks = vec![0u32; k];
        for (pos, &label) in order.iter().enumerate() {
            if label >= k || ranks[label] != 0 {
                return Err(Error::InvalidRanking(format!(
                    "order {order:?} is not a permutation of 0..{k}"
                )));
            }
            ranks[label] = pos as u32 + 1;
        }
        Ok(Ranking { ranks })
    }

    pub fn identity(k: usize) -> Self {
        Ranking {
            ranks: (1..=k as u32).collect(),
        }
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn k(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, label: usize) -> u32 {
        self.ranks[label]
    }

    pub fn max_rank(&self) -> u32 {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Every label ranked (ties allowed).
    pub fn is_total(&self) -> bool {
        self.ranks.iter().all(|&r| r > 0)
    }

    pub fn is_strict_total(&self) -> bool {
        self.is_total() && self.max_rank() as usize == self.k()
    }

    /// Labels grouped by rank, most preferred group first. Unranked labels
    /// are left out; labels inside a group are in id order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.max_rank() as usize];
        for (label, &r) in self.ranks.iter().enumerate() {
            if r > 0 {
                groups[r as usize - 1].push(label);
            }
        }
        groups
    }

    /// Mirror image of the ranked labels; unranked labels stay unranked.
    pub fn reverse(&self) -> Ranking {
        let top = self.max_rank() + 1;
        Ranking {
            ranks: self
                .ranks
                .iter()
                .map(|&r| if r == 0 { 0 } else { top - r })
                .collect(),
        }
    }

    /// Splits every tie group by label id (lowest id first).
    pub fn break_ties(&self) -> Ranking {
        let mut ranks = vec![0u32; self.k()];
        let mut next = 1;
        for group in self.groups() {
            for label in group {
                ranks[label] = next;
                next += 1;
            }
        }
        Ranking { ranks }
    }

    /// Text form: `L1>L2=L3>L4`, unranked labels omitted.
    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.groups()
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&l| names[l].as_ref())
                    .collect::<Vec<_>>()
                    .join("=")
            })
            .collect::<Vec<_>>()
            .join(">")
    }

    /// Parses the text form against a known label universe.
    pub fn parse_text<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Ranking> {
        let mut ranks = vec![0u32; names.len()];
        for (pos, group) in text_groups(text)?.into_iter().enumerate() {
            for label in group {
                let id = names
                    .iter()
                    .position(|n| n.as_ref() == label)
                    .ok_or_else(|| Error::InvalidRanking(format!("unknown label `{label}`")))?;
                if ranks[id] != 0 {
                    return Err(Error::InvalidRanking(format!("label `{label}` repeated")));
                }
                ranks[id] = pos as u32 + 1;
            }
        }
        Ok(Ranking { ranks })
    }

    /// Parses the rank-vector form `(1,2,0,3)`.
    pub fn parse_vector(text: &str) -> Result<Ranking> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidRanking(format!("`{text}` is not a rank vector")))?;
        let ranks = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidRanking(format!("bad rank `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ranking::new(ranks)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&vector_text(&self.ranks))
    }
}

fn vector_text(ranks: &[u32]) -> String {
    let body: Vec<String> = ranks.iter().map(|r| r.to_string()).collect();
    format!("({})", body.join(","))
}

/// `L1`, `L2`, ... for labels without explicit names.
pub fn default_label_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("L{i}")).collect()
}

/// Splits the text form into rank groups of label names. Duplicates are not
/// checked here.
pub fn text_groups(text: &str) -> Result<Vec<Vec<&str>>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('>')
        .map(|group| {
            group
                .split('=')
                .map(|label| {
                    let label = label.trim();
                    if label.is_empty() {
                        Err(Error::InvalidRanking(format!("empty label in `{text}`")))
                    } else {
                        Ok(label)
                    }
                })
                .collect()
        })
        .collect()
}

/// Classification of all unordered label pairs of two rankings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairCounts {
    pub concordant: usize,
    pub discordant: usize,
    /// Tied in the first ranking only.
    pub ties_left: usize,
    /// Tied in the second ranking only.
    pub ties_right: usize,
    pub ties_both: usize,
    /// Either ranking leaves one of the two labels unranked.
    pub incomparable: usize,
}

impl PairCounts {
    pub fn total(&self) -> usize {
        self.concordant
            + self.discordant
            + self.ties_left
            + self.ties_right
            + self.ties_both
            + self.incomparable
    }
}

fn check_dims(p: &Ranking, q: &Ranking) -> Result<()> {
    if p.k() != q.k() {
        return Err(Error::Dimension {
            left: p.k(),
            right: q.k(),
        });
    }
    Ok(())
}

pub fn pair_counts(p: &Ranking, q: &Ranking) -> Result<PairCounts> {
    check_dims(p, q)?;
    let (p, q) = (p.ranks(), q.ranks());
    let mut c = PairCounts::default();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] == 0 || p[j] == 0 || q[i] == 0 || q[j] == 0 {
                c.incomparable += 1;
                continue;
            }
            let dp = p[i].cmp(&p[j]);
            let dq = q[i].cmp(&q[j]);
            use std::cmp::Ordering::Equal;
            match (dp, dq) {
                (Equal, Equal) => c.ties_both += 1,
                (Equal, _) => c.ties_left += 1,
                (_, Equal) => c.ties_right += 1,
                (a, b) if a == b => c.concordant += 1,
                _ => c.discordant += 1,
            }
        }
    }
    Ok(c)
}

/// Kendall's tau for two strict total orders.
pub fn kendall_tau(p: &Ranking, q: &Ranking) -> Result<f64> {
    check_dims(p, q)?;
    for r in [p, q] {
        if !r.is_strict_total() {
            return Err(Error::InvalidOrder(format!(
                "kendall tau needs strict total orders, got {r}"
            )));
        }
    }
    let k = p.k();
    if k < 2 {
        return Err(Error::UndefinedCoefficient(
            "fewer than two labels".to_string(),
        ));
    }
    let c = pair_counts(p, q)?;
    let pairs = (k * (k - 1) / 2) as f64;
    Ok((c.concordant as f64 - c.discordant as f64) / pairs)
}

/// Tie-corrected Kendall tau (tau-b) for total orders.
pub fn kendall_tau_b(p: &Ranking, q: &Ranking) -> Result<f64> {
    check_dims(p, q)?;
    for r in [p, q] {
        if !r.is_total() {
            return Err(Error::InvalidOrder(format!(
                "tau-b needs every label ranked, got {r}"
            )));
        }
    }
    let c = pair_counts(p, q)?;
    let untied = (c.concordant + c.discordant) as f64;
    let left = untied + c.ties_right as f64;
    let right = untied + c.ties_left as f64;
    if left == 0.0 || right == 0.0 {
        return Err(Error::UndefinedCoefficient(
            "a ranking has no untied pair".to_string(),
        ));
    }
    Ok((c.concordant as f64 - c.discordant as f64) / (left * right).sqrt())
}

/// Goodman-Kruskal gamma over the pairs ranked and untied in both.
pub fn gamma(p: &Ranking, q: &Ranking) -> Result<f64> {
    let c = pair_counts(p, q)?;
    let untied = c.concordant + c.discordant;
    if untied == 0 {
        return Err(Error::UndefinedCoefficient(
            "no pair is ordered in both rankings".to_string(),
        ));
    }
    Ok((c.concordant as f64 - c.discordant as f64) / untied as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SimilarityKind {
    /// Raw Kendall tau in [-1, 1].
    #[default]
    #[serde(rename = "tau")]
    KendallTau,
    /// `(tau + 1) / 2`, in [0, 1].
    #[serde(rename = "normalized-tau")]
    NormalizedTau,
}

impl SimilarityKind {
    pub fn similarity(self, p: &Ranking, q: &Ranking) -> Result<f64> {
        let tau = kendall_tau(p, q)?;
        Ok(match self {
            SimilarityKind::KendallTau => tau,
            SimilarityKind::NormalizedTau => (tau + 1.0) / 2.0,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SimilarityKind::KendallTau => "tau",
            SimilarityKind::NormalizedTau => "normalized-tau",
        }
    }
}

impl std::str::FromStr for SimilarityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" | "kendall-tau" => Ok(SimilarityKind::KendallTau),
            "normalized-tau" | "ntau" => Ok(SimilarityKind::NormalizedTau),
            other => Err(Error::Argument(format!("unknown similarity `{other}`"))),
        }
    }
}

/// Similarity zeroed below `theta`.
pub fn censor(similarity: f64, theta: f64) -> f64 {
    if similarity >= theta {
        similarity
    } else {
        0.0
    }
}

pub fn censored_similarity(
    p: &Ranking,
    q: &Ranking,
    theta: f64,
    base: SimilarityKind,
) -> Result<f64> {
    Ok(censor(base.similarity(p, q)?, theta))
}

/// Per-label (weighted) mean rank.
pub fn mean_ranks(rankings: &[Ranking], weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let first = rankings
        .first()
        .ok_or_else(|| Error::EmptyInput("no rankings to average".to_string()))?;
    let k = first.k();
    for r in rankings {
        check_dims(first, r)?;
        if !r.is_total() {
            return Err(Error::InvalidOrder(format!(
                "cannot average a ranking with unranked labels: {r}"
            )));
        }
    }
    let mut sums = vec![0.0; k];
    let total = match weights {
        None => {
            for r in rankings {
                for (s, &rank) in sums.iter_mut().zip(r.ranks()) {
                    *s += rank as f64;
                }
            }
            rankings.len() as f64
        }
        Some(w) => {
            if w.len() != rankings.len() {
                return Err(Error::Argument(format!(
                    "{} weights for {} rankings",
                    w.len(),
                    rankings.len()
                )));
            }
            if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                return Err(Error::Argument("weights must be non-negative".to_string()));
            }
            for (r, &wi) in rankings.iter().zip(w) {
                for (s, &rank) in sums.iter_mut().zip(r.ranks()) {
                    *s += wi * rank as f64;
                }
            }
            let total: f64 = w.iter().sum();
            if total <= 0.0 {
                return Err(Error::Argument("weights sum to zero".to_string()));
            }
            total
        }
    };
    Ok(sums.into_iter().map(|s| s / total).collect())
}

/// Ranks the given scores ascending. Scores within [`MEAN_TIE_EPS`] of their
/// predecessor share a rank unless `strict`, in which case ties go to the
/// lower label id.
pub fn rank_scores(scores: &[f64], strict: bool) -> Ranking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut ranks = vec![0u32; scores.len()];
    let mut rank = 0u32;
    for (pos, &label) in order.iter().enumerate() {
        let tied = pos > 0 && (scores[label] - scores[order[pos - 1]]).abs() <= MEAN_TIE_EPS;
        if strict || !tied {
            rank += 1;
        }
        ranks[label] = rank;
    }
    Ranking { ranks }
}

/// Ranking of the per-label mean ranks.
pub fn average_ranking(
    rankings: &[Ranking],
    weights: Option<&[f64]>,
    strict: bool,
) -> Result<Ranking> {
    Ok(rank_scores(&mean_ranks(rankings, weights)?, strict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairKind {
    APrecedes,
    BPrecedes,
    Tie,
    Incomparable,
}

impl PairKind {
    pub fn name(self) -> &'static str {
        match self {
            PairKind::APrecedes => "a_precedes",
            PairKind::BPrecedes => "b_precedes",
            PairKind::Tie => "tie",
            PairKind::Incomparable => "incomparable",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "a_precedes" => Ok(PairKind::APrecedes),
            "b_precedes" => Ok(PairKind::BPrecedes),
            "tie" => Ok(PairKind::Tie),
            "incomparable" => Ok(PairKind::Incomparable),
            other => Err(Error::Argument(format!("unknown pair kind `{other}`"))),
        }
    }
}

/// Outcome of comparing two labels, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairwiseRelation {
    a: usize,
    b: usize,
    kind: PairKind,
}

impl PairwiseRelation {
    pub fn new(a: usize, b: usize, kind: PairKind) -> Result<Self> {
        if a >= b {
            return Err(Error::Argument(format!(
                "pair ({a},{b}) is not in canonical a < b order"
            )));
        }
        Ok(PairwiseRelation { a, b, kind })
    }

    /// `winner` is preferred to `loser`.
    pub fn precedes(winner: usize, loser: usize) -> Result<Self> {
        match winner.cmp(&loser) {
            std::cmp::Ordering::Less => Self::new(winner, loser, PairKind::APrecedes),
            std::cmp::Ordering::Greater => Self::new(loser, winner, PairKind::BPrecedes),
            std::cmp::Ordering::Equal => Err(Error::Argument(format!(
                "label {winner} compared with itself"
            ))),
        }
    }

    pub fn tie(x: usize, y: usize) -> Result<Self> {
        Self::new(x.min(y), x.max(y), PairKind::Tie)
    }

    pub fn incomparable(x: usize, y: usize) -> Result<Self> {
        Self::new(x.min(y), x.max(y), PairKind::Incomparable)
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// `(winner, loser)` for directional relations.
    pub fn direction(&self) -> Option<(usize, usize)> {
        match self.kind {
            PairKind::APrecedes => Some((self.a, self.b)),
            PairKind::BPrecedes => Some((self.b, self.a)),
            _ => None,
        }
    }

    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let (a, b) = (names[self.a].as_ref(), names[self.b].as_ref());
        match self.kind {
            PairKind::APrecedes => format!("{a}>{b}"),
            PairKind::BPrecedes => format!("{b}>{a}"),
            PairKind::Tie => format!("{a}={b}"),
            PairKind::Incomparable => format!("{a}⊥{b}"),
        }
    }
}

/// All `k(k-1)/2` pairwise outcomes of a ranking, in `(a, b)` order.
pub fn decompose_pairwise(p: &Ranking) -> Vec<PairwiseRelation> {
    let ranks = p.ranks();
    let mut out = Vec::with_capacity(ranks.len() * ranks.len().saturating_sub(1) / 2);
    for a in 0..ranks.len() {
        for b in a + 1..ranks.len() {
            let kind = match (ranks[a], ranks[b]) {
                (0, _) | (_, 0) => PairKind::Incomparable,
                (x, y) if x == y => PairKind::Tie,
                (x, y) if x < y => PairKind::APrecedes,
                _ => PairKind::BPrecedes,
            };
            out.push(PairwiseRelation { a, b, kind });
        }
    }
    out
}

/// Result of merging a set of pairwise preferences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consolidation {
    /// The preferences form one chain of (possibly tied) groups.
    Chain(Ranking),
    /// Anything else, kept as the transitive reduction.
    NotAChain(PrecedenceGraph),
}

/// Transitively reduced precedence DAG over groups of tied labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceGraph {
    /// Each group is sorted; groups are sorted by their first label.
    pub groups: Vec<Vec<usize>>,
    /// `(from, to)` indices into `groups`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl PrecedenceGraph {
    /// Covers the edges with paths, longest first. Groups not on any edge
    /// come out as single-node paths.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let n = self.groups.len();
        let mut remaining: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        let mut touched = vec![false; n];
        let mut out = Vec::new();
        while !remaining.is_empty() {
            // Longest path starting at each node over the remaining edges.
            let mut best = vec![0usize; n];
            let order = topo_order(n, &remaining).expect("reduction is acyclic");
            for &u in order.iter().rev() {
                best[u] = remaining
                    .range((u, 0)..(u + 1, 0))
                    .map(|&(_, v)| best[v] + 1)
                    .max()
                    .unwrap_or(0);
            }
            let mut node = (0..n)
                .max_by(|&x, &y| best[x].cmp(&best[y]).then(y.cmp(&x)))
                .expect("non-empty");
            let mut path = vec![node];
            while best[node] > 0 {
                let next = remaining
                    .range((node, 0)..(node + 1, 0))
                    .map(|&(_, v)| v)
                    .filter(|&v| best[v] + 1 == best[node])
                    .min()
                    .expect("successor on longest path");
                remaining.remove(&(node, next));
                node = next;
                path.push(node);
            }
            for &g in &path {
                touched[g] = true;
            }
            out.push(path);
        }
        for (g, seen) in touched.into_iter().enumerate() {
            if !seen {
                out.push(vec![g]);
            }
        }
        out
    }

    /// `L6>L2>L7 ∧ L5>L7`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.paths()
            .iter()
            .map(|path| {
                path.iter()
                    .map(|&g| {
                        self.groups[g]
                            .iter()
                            .map(|&l| names[l].as_ref())
                            .collect::<Vec<_>>()
                            .join("=")
                    })
                    .collect::<Vec<_>>()
                    .join(">")
            })
            .collect::<Vec<_>>()
            .join(" ∧ ")
    }
}

fn topo_order(n: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, v) in edges {
        indeg[v] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = ready.pop_first() {
        order.push(u);
        for &(_, v) in edges.range((u, 0)..(u + 1, 0)) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut x = x;
    while parent[x] != root {
        let next = parent[x];
        parent[x] = root;
        x = next;
    }
    root
}

/// Merges directional and tie relations over `k` labels into a chain or a
/// reduced precedence graph. Incomparability relations are ignored.
pub fn consolidate_pairwise(rels: &[PairwiseRelation], k: usize) -> Result<Consolidation> {
    let label = |l: usize| format!("L{}", l + 1);
    let mut parent: Vec<usize> = (0..k).collect();
    let mut mentioned = vec![false; k];
    for r in rels {
        if r.b >= k {
            return Err(Error::Argument(format!(
                "relation on label {} with only {k} labels",
                r.b
            )));
        }
        if r.kind == PairKind::Incomparable {
            continue;
        }
        mentioned[r.a] = true;
        mentioned[r.b] = true;
        if r.kind == PairKind::Tie {
            let (x, y) = (find(&mut parent, r.a), find(&mut parent, r.b));
            parent[x.max(y)] = x.min(y);
        }
    }

    // Group ids in order of each group's smallest label.
    let mut group_of = vec![usize::MAX; k];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_group = vec![usize::MAX; k];
    for l in 0..k {
        if !mentioned[l] {
            continue;
        }
        let root = find(&mut parent, l);
        if root_group[root] == usize::MAX {
            root_group[root] = groups.len();
            groups.push(Vec::new());
        }
        group_of[l] = root_group[root];
        groups[root_group[root]].push(l);
    }

    let n = groups.len();
    let mut edges = BTreeSet::new();
    for r in rels {
        if let Some((w, l)) = r.direction() {
            let (gw, gl) = (group_of[w], group_of[l]);
            if gw == gl {
                return Err(Error::Cycle(label(w), label(l)));
            }
            edges.insert((gw, gl));
        }
    }
    if topo_order(n, &edges).is_none() {
        // Report an edge that lies on a cycle: one whose target reaches its source.
        let (u, v) = edges
            .iter()
            .copied()
            .find(|&(u, v)| reachable(n, &edges, v)[u])
            .expect("a cyclic graph has an edge on a cycle");
        return Err(Error::Cycle(label(groups[u][0]), label(groups[v][0])));
    }

    let reach: Vec<Vec<bool>> = (0..n).map(|u| reachable(n, &edges, u)).collect();
    let reduced: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| {
            !edges
                .range((u, 0)..(u + 1, 0))
                .any(|&(_, w)| w != v && reach[w][v])
        })
        .collect();

    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for &(u, v) in &reduced {
        outdeg[u] += 1;
        indeg[v] += 1;
    }
    let is_chain = n > 0
        && reduced.len() + 1 == n
        && indeg.iter().all(|&d| d <= 1)
        && outdeg.iter().all(|&d| d <= 1);
    if is_chain {
        let mut node = (0..n).find(|&u| indeg[u] == 0).expect("chain has a head");
        let mut ranks = vec![0u32; k];
        let mut rank = 1;
        loop {
            for &l in &groups[node] {
                ranks[l] = rank;
            }
            rank += 1;
            match reduced.iter().find(|&&(u, _)| u == node) {
                Some(&(_, v)) => node = v,
                None => break,
            }
        }
        return Ok(Consolidation::Chain(Ranking::new(ranks)?));
    }
    Ok(Consolidation::NotAChain(PrecedenceGraph {
        groups,
        edges: reduced,
    }))
}

fn reachable(n: usize, edges: &BTreeSet<(usize, usize)>, from: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &(_, v) in edges.range((u, 0)..(u + 1, 0)) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[u32]) -> Ranking {
        Ranking::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dense_rank_validation() {
        assert!(Ranking::new(vec![1, 2, 2, 3]).is_ok());
        assert!(Ranking::new(vec![1, 2, 0, 3]).is_ok());
        assert!(Ranking::new(vec![1, 3, 3, 4]).is_err());
        assert!(Ranking::new(vec![0, 0]).is_ok());
        assert!(r(&[1, 2, 3]).is_strict_total());
        assert!(!r(&[1, 2, 2]).is_strict_total());
        assert!(r(&[1, 2, 2]).is_total());
        assert!(!r(&[1, 0, 2]).is_total());
    }

    #[test]
    fn pair_count_examples() {
        let c = pair_counts(&r(&[1, 2, 3, 4]), &r(&[4, 3, 2, 1])).unwrap();
        assert_eq!((c.concordant, c.discordant), (0, 6));
        let c = pair_counts(&r(&[1, 2, 3]), &r(&[1, 2, 3])).unwrap();
        assert_eq!((c.concordant, c.discordant), (3, 0));
        // pairs (0,1): 1<3 / 2<3 C; (0,2): 1<2 / 2>1 D; (1,2): 3>2 / 3>1 C
        let c = pair_counts(&r(&[1, 3, 2]), &r(&[2, 3, 1])).unwrap();
        assert_eq!((c.concordant, c.discordant), (2, 1));
        assert_eq!(c.total(), 3);
        assert!(matches!(
            pair_counts(&r(&[1, 2]), &r(&[1, 2, 3])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(kendall_tau(&r(&[1, 2, 3, 4]), &r(&[1, 2, 3, 4])).unwrap(), 1.0);
        assert_eq!(kendall_tau(&r(&[1, 2, 3, 4]), &r(&[4, 3, 2, 1])).unwrap(), -1.0);
        let t = kendall_tau(&r(&[1, 3, 2]), &r(&[2, 3, 1])).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            kendall_tau(&r(&[1, 2, 2]), &r(&[1, 2, 3])),
            Err(Error::InvalidOrder(_))
        ));
        assert!(matches!(
            kendall_tau(&r(&[1, 0, 2]), &r(&[1, 2, 3])),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn tau_b_examples() {
        assert_eq!(kendall_tau_b(&r(&[1, 2, 3]), &r(&[1, 2, 3])).unwrap(), 1.0);
        let t = kendall_tau_b(&r(&[1, 2, 2]), &r(&[1, 2, 3])).unwrap();
        assert!((t - 2.0 / 6f64.sqrt()).abs() < 1e-12);
        assert!((t - 0.8165).abs() < 1e-4);
        assert!(matches!(
            kendall_tau_b(&r(&[1, 1, 1]), &r(&[1, 2, 3])),
            Err(Error::UndefinedCoefficient(_))
        ));
        assert!(matches!(
            kendall_tau_b(&r(&[1, 0, 2]), &r(&[1, 2, 3])),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&r(&[1, 2, 0, 3]), &r(&[1, 2, 0, 3])).unwrap(), 1.0);
        assert_eq!(gamma(&r(&[1, 2]), &r(&[2, 1])).unwrap(), -1.0);
        assert!(gamma(&r(&[1, 1]), &r(&[1, 2])).is_err());
    }

    #[test]
    fn censored_similarity_examples() {
        let base = SimilarityKind::KendallTau;
        assert_eq!(
            censored_similarity(&r(&[1, 3, 2]), &r(&[2, 1, 3]), 0.0, base).unwrap(),
            0.0
        );
        assert_eq!(
            censored_similarity(&r(&[2, 1, 3]), &r(&[2, 1, 3]), 1.0, base).unwrap(),
            1.0
        );
        assert_eq!(
            censored_similarity(&r(&[1, 3, 2]), &r(&[2, 3, 1]), 0.5, base).unwrap(),
            0.0
        );
        let n = censored_similarity(
            &r(&[1, 3, 2]),
            &r(&[2, 1, 3]),
            0.0,
            SimilarityKind::NormalizedTau,
        )
        .unwrap();
        assert!((n - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn average_ranking_examples() {
        assert_eq!(average_ranking(&[r(&[1, 2, 3])], None, false).unwrap(), r(&[1, 2, 3]));
        assert_eq!(
            average_ranking(&[r(&[1, 2, 3]), r(&[3, 2, 1])], None, false).unwrap(),
            r(&[1, 1, 1])
        );
        assert_eq!(
            average_ranking(&[r(&[1, 2, 3]), r(&[3, 2, 1])], None, true).unwrap(),
            r(&[1, 2, 3])
        );
        assert_eq!(
            average_ranking(&[r(&[1, 2, 3]), r(&[2, 1, 3]), r(&[1, 2, 3])], None, false)
                .unwrap(),
            r(&[1, 2, 3])
        );
        assert!(matches!(
            average_ranking(&[], None, false),
            Err(Error::EmptyInput(_))
        ));
        let w = [3.0, 1.0];
        assert_eq!(
            average_ranking(&[r(&[1, 2, 3]), r(&[3, 2, 1])], Some(&w), false).unwrap(),
            r(&[1, 2, 3])
        );
        assert!(average_ranking(&[r(&[1, 2]), r(&[2, 1])], Some(&[0.0, 0.0]), false).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let rels = decompose_pairwise(&r(&[1, 2, 0, 3]));
        let expected = vec![
            PairwiseRelation::precedes(0, 1).unwrap(),
            PairwiseRelation::incomparable(0, 2).unwrap(),
            PairwiseRelation::precedes(0, 3).unwrap(),
            PairwiseRelation::incomparable(1, 2).unwrap(),
            PairwiseRelation::precedes(1, 3).unwrap(),
            PairwiseRelation::incomparable(2, 3).unwrap(),
        ];
        assert_eq!(rels, expected);

        let rels = decompose_pairwise(&r(&[1, 2, 2, 3]));
        assert!(rels.contains(&PairwiseRelation::tie(1, 2).unwrap()));

        let rels = decompose_pairwise(&r(&[1, 2]));
        assert_eq!(rels, vec![PairwiseRelation::precedes(0, 1).unwrap()]);
    }

    #[test]
    fn consolidation_examples() {
        let names = default_label_names(7);
        let rels = [
            PairwiseRelation::precedes(0, 6).unwrap(),
            PairwiseRelation::precedes(6, 2).unwrap(),
        ];
        match consolidate_pairwise(&rels, 7).unwrap() {
            Consolidation::Chain(p) => {
                assert_eq!(p.ranks(), &[1, 0, 3, 0, 0, 0, 2]);
                assert_eq!(p.to_text(&names), "L1>L7>L3");
            }
            other => panic!("expected chain, got {other:?}"),
        }

        let rels = [
            PairwiseRelation::precedes(5, 1).unwrap(),
            PairwiseRelation::precedes(4, 6).unwrap(),
            PairwiseRelation::precedes(1, 6).unwrap(),
        ];
        match consolidate_pairwise(&rels, 7).unwrap() {
            Consolidation::NotAChain(g) => assert_eq!(g.render(&names), "L6>L2>L7 ∧ L5>L7"),
            other => panic!("expected partial order, got {other:?}"),
        }

        let rels = [
            PairwiseRelation::precedes(0, 1).unwrap(),
            PairwiseRelation::precedes(1, 0).unwrap(),
        ];
        assert!(matches!(consolidate_pairwise(&rels, 2), Err(Error::Cycle(..))));
    }

    #[test]
    fn consolidation_drops_redundant_edges_and_incomparables() {
        // 3>1, 1>4, 3>4, 1 ⊥ 2  →  L3>L1>L4
        let rels = [
            PairwiseRelation::precedes(2, 0).unwrap(),
            PairwiseRelation::precedes(0, 3).unwrap(),
            PairwiseRelation::precedes(2, 3).unwrap(),
            PairwiseRelation::incomparable(0, 1).unwrap(),
        ];
        assert_eq!(
            consolidate_pairwise(&rels, 4).unwrap(),
            Consolidation::Chain(r(&[2, 0, 1, 3]))
        );
    }

    #[test]
    fn consolidation_with_ties() {
        let rels = [
            PairwiseRelation::precedes(0, 1).unwrap(),
            PairwiseRelation::tie(1, 2).unwrap(),
            PairwiseRelation::precedes(2, 3).unwrap(),
        ];
        assert_eq!(
            consolidate_pairwise(&rels, 4).unwrap(),
            Consolidation::Chain(r(&[1, 2, 2, 3]))
        );
        let rels = [
            PairwiseRelation::tie(0, 1).unwrap(),
            PairwiseRelation::precedes(0, 1).unwrap(),
        ];
        assert!(matches!(consolidate_pairwise(&rels, 2), Err(Error::Cycle(..))));
        let rels = [
            PairwiseRelation::precedes(0, 1).unwrap(),
            PairwiseRelation::precedes(1, 2).unwrap(),
            PairwiseRelation::precedes(2, 0).unwrap(),
        ];
        assert!(matches!(consolidate_pairwise(&rels, 3), Err(Error::Cycle(..))));
    }

    #[test]
    fn text_form() {
        let names = ["a", "b", "c", "d"];
        let p = Ranking::parse_text("a>b=c>d", &names).unwrap();
        assert_eq!(p.ranks(), &[1, 2, 2, 3]);
        assert_eq!(p.to_text(&names), "a>b=c>d");
        let p = Ranking::parse_text("d>a", &names).unwrap();
        assert_eq!(p.ranks(), &[2, 0, 0, 1]);
        assert!(Ranking::parse_text("a>a", &names).is_err());
        assert!(Ranking::parse_text("a>x", &names).is_err());
        assert!(Ranking::parse_text("a>>b", &names).is_err());
        assert_eq!(Ranking::parse_vector("(1,2,0,3)").unwrap().ranks(), &[1, 2, 0, 3]);
        assert!(Ranking::parse_vector("(1,3)").is_err());
        assert_eq!(r(&[1, 2, 0, 3]).to_string(), "(1,2,0,3)");
    }

    #[test]
    fn reverse_and_break_ties() {
        assert_eq!(r(&[1, 2, 3]).reverse(), r(&[3, 2, 1]));
        assert_eq!(r(&[1, 0, 2]).reverse(), r(&[2, 0, 1]));
        assert_eq!(r(&[2, 1, 2, 1]).break_ties(), r(&[3, 1, 4, 2]));
        assert_eq!(
            Ranking::from_order(&[2, 0, 1]).unwrap(),
            r(&[2, 3, 1])
        );
    }
}
