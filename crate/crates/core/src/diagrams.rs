//! Weight diagrams of regular dominant weights and the g₋₁-genericity test.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{classify, decode, encode, Coords, RankProfile, Weight};

/// Default bound on the `2^{mn}` subsets enumerated by the brute-force test.
pub const DEFAULT_SUBSET_BOUND: u128 = 1 << 20;

/// Profiles on which the gap criterion has been checked against brute force
/// by the test suite; elsewhere `Fast` falls back to `Brute`.
pub const FAST_VERIFIED: &[(usize, usize)] = &[
    (1, 1),
    (1, 2),
    (2, 1),
    (2, 2),
    (1, 3),
    (3, 1),
    (2, 3),
    (3, 2),
    (3, 3),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Cross,
    Circle,
    Vee,
    Wedge,
}

impl Label {
    pub fn glyph(self) -> char {
        match self {
            Label::Cross => 'x',
            Label::Circle => 'o',
            Label::Vee => 'v',
            Label::Wedge => '^',
        }
    }
}

/// Labels of the integers; every position not stored is `Wedge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDiagram {
    profile: RankProfile,
    labels: BTreeMap<i64, Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub positions: BTreeMap<i64, Label>,
}

impl WeightDiagram {
    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    pub fn label(&self, x: i64) -> Label {
        self.labels.get(&x).copied().unwrap_or(Label::Wedge)
    }

    /// Positions not labelled `Wedge`, ascending.
    pub fn support(&self) -> impl Iterator<Item = (i64, Label)> + '_ {
        self.labels.iter().map(|(k, v)| (*k, *v))
    }

    pub fn positions(&self, label: Label) -> Vec<i64> {
        self.support().filter(|(_, l)| *l == label).map(|(k, _)| k).collect()
    }

    pub fn crosses(&self) -> Vec<i64> {
        self.positions(Label::Cross)
    }

    pub fn vees(&self) -> Vec<i64> {
        self.positions(Label::Vee)
    }

    /// `I_×(λ)`: the ε-coordinates.
    pub fn i_cross(&self) -> Vec<i64> {
        self.support()
            .filter(|(_, l)| matches!(l, Label::Cross | Label::Vee))
            .map(|(k, _)| k)
            .collect()
    }

    /// `I_○(λ)`: the δ-coordinates.
    pub fn i_circle(&self) -> Vec<i64> {
        self.support()
            .filter(|(_, l)| matches!(l, Label::Circle | Label::Vee))
            .map(|(k, _)| k)
            .collect()
    }

    /// The weight with this diagram.
    pub fn to_weight(&self) -> Result<Weight> {
        let mut eps = self.i_cross();
        eps.reverse();
        let del = self.i_circle();
        Ok(decode(&Coords::from_blocks(self.profile, &eps, &del)?))
    }

    /// Render positions `lo..=hi` left to right.
    pub fn render(&self, lo: i64, hi: i64) -> String {
        (lo..=hi).map(|x| self.label(x).glyph()).collect()
    }

    /// Render the support with one wedge of margin on each side, plus a
    /// line naming the window and a legend.
    pub fn render_default(&self) -> String {
        let (lo, hi) = self.window();
        format!(
            "{}\npositions {lo}..{hi}; x = cross, o = circle, v = vee, ^ = wedge",
            self.render(lo, hi)
        )
    }

    pub fn window(&self) -> (i64, i64) {
        let lo = self.labels.keys().next().copied().unwrap_or(0);
        let hi = self.labels.keys().last().copied().unwrap_or(0);
        (lo - 1, hi + 1)
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            positions: self.labels.clone(),
        }
    }
}

impl fmt::Display for WeightDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.window();
        f.write_str(&self.render(lo, hi))
    }
}

fn require_regular_dominant(lambda: &Weight) -> Result<()> {
    let c = classify(lambda);
    if !c.regular {
        return Err(Error::NotRegular(encode(lambda).to_string()));
    }
    if !c.dominant {
        return Err(Error::NotDominant(encode(lambda).to_string()));
    }
    Ok(())
}

pub fn weight_diagram(lambda: &Weight) -> Result<WeightDiagram> {
    require_regular_dominant(lambda)?;
    let c = encode(lambda);
    let mut labels = BTreeMap::new();
    for &x in c.eps() {
        labels.insert(x, Label::Cross);
    }
    for &x in c.delta() {
        labels
            .entry(x)
            .and_modify(|l| *l = Label::Vee)
            .or_insert(Label::Circle);
    }
    Ok(WeightDiagram {
        profile: lambda.profile(),
        labels,
    })
}

/// At least one wedge strictly between any two consecutive vees.
pub fn is_totally_disconnected(lambda: &Weight) -> Result<bool> {
    let d = weight_diagram(lambda)?;
    let vees = d.vees();
    Ok(vees
        .windows(2)
        .all(|p| (p[0] + 1..p[1]).any(|x| d.label(x) == Label::Wedge)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenericityMode {
    Brute,
    #[default]
    Fast,
}

/// Strict order pattern of a block, or `None` on a tie.
fn order_pattern(xs: &[i64]) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by_key(|&k| xs[k]);
    if idx.windows(2).any(|p| xs[p[0]] == xs[p[1]]) {
        return None;
    }
    Some(idx)
}

/// Whether all `λ − Σ_S α`, `S ⊆ Δ₁^{(),+}`, lie in one open chamber.
pub fn is_g1_generic_brute(lambda: &Weight, bound: u128) -> Result<bool> {
    let profile = lambda.profile();
    let (m, n) = (profile.m(), profile.n());
    let size = 1u128 << (m * n);
    if size > bound {
        return Err(Error::BoundExceeded {
            what: "odd root subsets",
            size,
            bound,
        });
    }
    let c = encode(lambda);
    let reference = (order_pattern(c.eps()), order_pattern(c.delta()));
    if reference.0.is_none() || reference.1.is_none() {
        return Ok(false);
    }
    // Removing ε_i − δ_j lowers both coordinates λ_i and λ_{m+j} by one.
    let same = (0..size as u64).into_par_iter().all(|mask| {
        let mut eps = c.eps().to_vec();
        let mut del = c.delta().to_vec();
        for i in 0..m {
            for j in 0..n {
                if mask >> (i * n + j) & 1 == 1 {
                    eps[i] -= 1;
                    del[j] -= 1;
                }
            }
        }
        order_pattern(&eps) == reference.0 && order_pattern(&del) == reference.1
    });
    Ok(same)
}

/// Gap criterion: within the ε-block all pairwise gaps exceed `n`, within
/// the δ-block all exceed `m`.
pub fn is_g1_generic_gap(lambda: &Weight) -> bool {
    let profile = lambda.profile();
    let c = encode(lambda);
    let gaps_exceed = |xs: &[i64], k: usize| {
        xs.iter()
            .enumerate()
            .all(|(a, x)| xs[a + 1..].iter().all(|y| (x - y).unsigned_abs() > k as u64))
    };
    gaps_exceed(c.eps(), profile.n()) && gaps_exceed(c.delta(), profile.m())
}

pub fn fast_verified(profile: RankProfile) -> bool {
    FAST_VERIFIED.contains(&(profile.m(), profile.n()))
}

pub fn is_g1_generic(lambda: &Weight, mode: GenericityMode) -> Result<bool> {
    match mode {
        GenericityMode::Fast if fast_verified(lambda.profile()) => Ok(is_g1_generic_gap(lambda)),
        _ => is_g1_generic_brute(lambda, DEFAULT_SUBSET_BOUND),
    }
}
