//! Borel subalgebras of gl(m|n) with standard even part, indexed by
//! partitions in the m×n box.
//!
//! A Borel is the same thing as an εδ-sequence (a word with m letters ε and
//! n letters δ): `e_a − e_b` is positive iff `e_a` occurs before `e_b`. The
//! partition records, for each ε, how many δ's precede it; so the number of
//! boxes equals the number of positive roots of the form `δ_j − ε_i`.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{half_sum, odd_positive_roots, rho, HalfWeight, RankProfile, Root, Weight};

/// Default bound on `|L(m,n)| = binomial(m+n, m)`.
pub const DEFAULT_BOREL_BOUND: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Symbol {
    Eps,
    Delta,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BorelElt {
    profile: RankProfile,
    partition: Vec<usize>,
    seq: Vec<Symbol>,
}

impl BorelElt {
    pub fn from_partition(profile: RankProfile, parts: &[usize]) -> Result<Self> {
        let parts: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        let fits = parts.len() <= profile.m()
            && parts.iter().all(|&p| p <= profile.n())
            && parts.windows(2).all(|w| w[0] >= w[1]);
        if !fits {
            return Err(Error::MalformedPartition(parts));
        }
        let m = profile.m();
        // the k-th ε (0-based) is preceded by parts[m-1-k] δ's
        let preceding = |k: usize| parts.get(m - 1 - k).copied().unwrap_or(0);
        let mut seq = Vec::with_capacity(profile.rank());
        let mut placed = 0;
        for k in 0..m {
            let d = preceding(k);
            seq.extend(std::iter::repeat(Symbol::Delta).take(d - placed));
            placed = d;
            seq.push(Symbol::Eps);
        }
        seq.extend(std::iter::repeat(Symbol::Delta).take(profile.n() - placed));
        Ok(Self {
            profile,
            partition: parts,
            seq,
        })
    }

    pub fn from_seq(profile: RankProfile, seq: &[Symbol]) -> Result<Self> {
        let eps = seq.iter().filter(|s| **s == Symbol::Eps).count();
        if seq.len() != profile.rank() || eps != profile.m() {
            return Err(Error::Parse(format!(
                "εδ-sequence must have {} ε and {} δ",
                profile.m(),
                profile.n()
            )));
        }
        let mut counts = Vec::new();
        let mut deltas = 0;
        for s in seq {
            match s {
                Symbol::Delta => deltas += 1,
                Symbol::Eps => counts.push(deltas),
            }
        }
        counts.reverse();
        Self::from_partition(profile, &counts)
    }

    /// Parse an εδ-word, accepting `ε`/`e` and `δ`/`d`.
    pub fn parse_seq(profile: RankProfile, word: &str) -> Result<Self> {
        let seq = word
            .chars()
            .map(|c| match c {
                'e' | 'E' | 'ε' => Ok(Symbol::Eps),
                'd' | 'D' | 'δ' => Ok(Symbol::Delta),
                other => Err(Error::Parse(format!("unexpected symbol {other:?} in εδ-word"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_seq(profile, &seq)
    }

    /// The distinguished Borel `()`.
    pub fn distinguished(profile: RankProfile) -> Self {
        Self::from_partition(profile, &[]).expect("empty partition fits")
    }

    /// The anti-distinguished Borel `(n^m)`.
    pub fn anti_distinguished(profile: RankProfile) -> Self {
        Self::from_partition(profile, &vec![profile.n(); profile.m()]).expect("full box fits")
    }

    /// Every element of `L(m,n)`, ordered by box count then partition.
    pub fn enumerate(profile: RankProfile) -> Result<Vec<Self>> {
        Self::enumerate_bounded(profile, DEFAULT_BOREL_BOUND)
    }

    pub fn enumerate_bounded(profile: RankProfile, bound: u128) -> Result<Vec<Self>> {
        let size = binomial(profile.rank(), profile.m());
        if size > bound {
            return Err(Error::BoundExceeded {
                what: "number of Borel subalgebras",
                size,
                bound,
            });
        }
        let mut out = Vec::new();
        partitions_in_box(profile.m(), profile.n(), &mut Vec::new(), &mut out);
        let mut borels: Vec<Self> = out
            .into_iter()
            .map(|p| Self::from_partition(profile, &p).expect("generated inside the box"))
            .collect();
        borels.sort_by(|a, b| {
            a.boxes()
                .cmp(&b.boxes())
                .then_with(|| b.partition.cmp(&a.partition))
        });
        Ok(borels)
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    pub fn seq(&self) -> &[Symbol] {
        &self.seq
    }

    pub fn boxes(&self) -> usize {
        self.partition.iter().sum()
    }

    pub fn is_distinguished(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn is_anti_distinguished(&self) -> bool {
        self.boxes() == self.profile.m() * self.profile.n()
    }

    /// Position-to-index map: `order()[p]` is the 0-based weight position at
    /// place `p` of the εδ-sequence.
    pub fn order(&self) -> Vec<usize> {
        let m = self.profile.m();
        let (mut e, mut d) = (0, 0);
        self.seq
            .iter()
            .map(|s| match s {
                Symbol::Eps => {
                    e += 1;
                    e - 1
                }
                Symbol::Delta => {
                    d += 1;
                    m + d - 1
                }
            })
            .collect()
    }

    /// The shuffle `τ ∈ Sh(m|n)`: `shuffle()[k]` is the 0-based place of
    /// weight position `k` in the εδ-sequence.
    pub fn shuffle(&self) -> Vec<usize> {
        let mut tau = vec![0; self.profile.rank()];
        for (p, k) in self.order().into_iter().enumerate() {
            tau[k] = p;
        }
        tau
    }

    pub fn is_positive(&self, root: &Root) -> bool {
        let tau = self.shuffle();
        tau[root.i()] < tau[root.j()]
    }

    /// `Δ^{b,+}` in lexicographic `(i, j)` order.
    pub fn positive_system(&self) -> Vec<Root> {
        let tau = self.shuffle();
        let r = self.profile.rank();
        (0..r)
            .cartesian_product(0..r)
            .filter(|&(i, j)| i != j && tau[i] < tau[j])
            .map(|(i, j)| Root::new(self.profile, i, j).expect("distinct indices"))
            .collect()
    }

    pub fn odd_positive(&self) -> Vec<Root> {
        self.positive_system().into_iter().filter(Root::is_odd).collect()
    }

    /// `Δ^{b,−}` in lexicographic `(i, j)` order.
    pub fn negative_system(&self) -> Vec<Root> {
        self.positive_system().iter().map(Root::negate).sorted().collect()
    }

    /// `Π^b`, ordered by place in the εδ-sequence.
    pub fn simple_roots(&self) -> Vec<Root> {
        self.order()
            .windows(2)
            .map(|w| Root::new(self.profile, w[0], w[1]).expect("distinct indices"))
            .collect()
    }

    pub fn odd_reflection(&self, alpha: &Root) -> Result<Self> {
        self.profile.check(&alpha.profile())?;
        let tau = self.shuffle();
        let adjacent = tau[alpha.i()] + 1 == tau[alpha.j()];
        if !alpha.is_odd() || !adjacent {
            return Err(Error::NotOddSimple(alpha.to_string()));
        }
        let mut seq = self.seq.clone();
        seq.swap(tau[alpha.i()], tau[alpha.j()]);
        Self::from_seq(self.profile, &seq)
    }

    /// `ρ₁^b = ½ Σ_{Δ₁^{b,+}} γ`.
    pub fn rho1(&self) -> HalfWeight {
        half_sum(self.profile, &self.odd_positive())
    }

    /// `ρ^b = ρ + (ρ₁^{()} − ρ₁^b)`; the correction is the sum of the
    /// distinguished-positive odd roots that are negative for `b`.
    pub fn rho_b(&self) -> Weight {
        &rho(self.profile) + &self.flipped_sum()
    }

    /// `Σ {β ∈ Δ₁^{(),+} : −β ∈ Δ^{b,+}}`.
    pub fn flipped_sum(&self) -> Weight {
        let mut w = Weight::zero(self.profile);
        for r in self.flipped() {
            w = &w + &r.to_weight();
        }
        w
    }

    /// Distinguished-positive odd roots that are negative for `b`.
    pub fn flipped(&self) -> Vec<Root> {
        odd_positive_roots(self.profile)
            .into_iter()
            .filter(|r| !self.is_positive(r))
            .collect()
    }

    pub fn seq_string(&self, ascii: bool) -> String {
        self.seq
            .iter()
            .map(|s| match (s, ascii) {
                (Symbol::Eps, false) => 'ε',
                (Symbol::Delta, false) => 'δ',
                (Symbol::Eps, true) => 'e',
                (Symbol::Delta, true) => 'd',
            })
            .collect()
    }

    pub fn convert(&self) -> BorelViews {
        let mut vertices = vec![(self.profile.n(), 0)];
        let (mut x, mut y) = (self.profile.n(), 0);
        for s in &self.seq {
            match s {
                Symbol::Eps => y += 1,
                Symbol::Delta => x -= 1,
            }
            vertices.push((x, y));
        }
        BorelViews {
            partition: self.partition.clone(),
            seq: self.seq_string(false),
            shuffle: self.shuffle().iter().map(|p| p + 1).collect(),
            lattice_path: vertices,
        }
    }
}

impl fmt::Display for BorelElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "partition:[{}] seq:{}",
            self.partition.iter().join(","),
            self.seq_string(!f.alternate())
        )
    }
}

/// All representations of one Borel.
///
/// The lattice path runs from `(n,0)` to `(0,m)` with an up step for each ε
/// and a left step for each δ; row `y` of the region southeast of the path
/// has as many boxes as there are δ's before the `(y+1)`-th ε.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BorelViews {
    pub partition: Vec<usize>,
    pub seq: String,
    /// 1-based shuffle `τ(1..m+n)`.
    pub shuffle: Vec<usize>,
    pub lattice_path: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddReflectionEdge {
    pub source: BorelElt,
    pub target: BorelElt,
    /// Odd simple root of `source` with `ρ^{target} = ρ^{source} + alpha`.
    pub alpha: Root,
}

/// The odd-reflection graph on `L(m,n)`, one edge per box addition.
pub fn borel_graph(profile: RankProfile) -> Result<Vec<OddReflectionEdge>> {
    let mut edges = Vec::new();
    for b in BorelElt::enumerate(profile)? {
        for alpha in b.simple_roots() {
            if alpha.is_odd() && alpha.is_distinguished_positive() {
                let target = b.odd_reflection(&alpha)?;
                edges.push(OddReflectionEdge {
                    source: b.clone(),
                    target,
                    alpha,
                });
            }
        }
    }
    Ok(edges)
}

/// Highest weight of the same simple module after an odd reflection:
/// `L^b(λ) ≅ L^{r_α b}(λ − α)` if `(λ, α) ≠ 0`, else `L^{r_α b}(λ)`.
pub fn transport_highest_weight(b: &BorelElt, lambda: &Weight, alpha: &Root) -> Result<(BorelElt, Weight)> {
    let target = b.odd_reflection(alpha)?;
    let a = alpha.to_weight();
    let moved = if lambda.pairing(&a)? != 0 {
        lambda - &a
    } else {
        lambda.clone()
    };
    Ok((target, moved))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn partitions_in_box(rows: usize, cols: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    if prefix.len() == rows {
        return;
    }
    let cap = prefix.last().copied().unwrap_or(cols);
    for p in 1..=cap {
        prefix.push(p);
        partitions_in_box(rows, cols, prefix, out);
        prefix.pop();
    }
}
