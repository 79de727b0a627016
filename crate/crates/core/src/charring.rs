//! Truncated formal characters and the closed character formulas.
//!
//! Every character lives in the cone below a top weight, graded by the depth
//! functional `ξ`, which is positive on `Δ₀⁺ ∪ Δ₁^{(),+}`. A series with top
//! `t` and depth `D` knows its coefficients exactly at every weight `κ ≤ t`
//! with `ξ(t) − ξ(κ) ≤ D`, and is zero at weights not below `t`.
//!
//! Odd factors that point the wrong way for the distinguished Borel are
//! rewritten as `1 + e^{β} = e^{β}(1 + e^{−β})` before expansion, so that
//! Verma characters for every Borel land in the same cone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::borels::BorelElt;
use crate::diagrams::{self, GenericityMode};
use crate::error::{Error, Result};
use crate::rootdata::{
    self, classify, dot, dot_even, encode, even_positive_roots, odd_positive_roots, weyl_group,
    RankProfile, Root, Weight, WeylElt,
};

pub const DEFAULT_DEPTH: u32 = 8;

/// `ξ(ε_i) = m+n−i+1`, `ξ(δ_j) = n−j+1` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFunctional {
    profile: RankProfile,
    xi: Vec<i64>,
}

impl DepthFunctional {
    pub fn new(profile: RankProfile) -> Self {
        let r = profile.rank() as i64;
        let xi = (0..profile.rank()).map(|k| r - k as i64).collect();
        Self { profile, xi }
    }

    pub fn values(&self) -> &[i64] {
        &self.xi
    }

    pub fn eval(&self, coeffs: &[i64]) -> i64 {
        self.xi.iter().zip(coeffs).map(|(x, c)| x * c).sum()
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }
}

/// `top − κ` lies in the non-negative span of `Δ₀⁺ ∪ Δ₁^{(),+}`: in the order
/// `ε_1 … ε_m δ_1 … δ_n` these roots are the positive roots of type A, whose
/// cone is cut out by a zero total and non-negative prefix sums.
fn in_cone(diff: &[i64]) -> bool {
    let mut acc = 0;
    for d in diff {
        acc += d;
        if acc < 0 {
            return false;
        }
    }
    acc == 0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalChar {
    profile: RankProfile,
    top: Weight,
    depth: u32,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

/// First coefficient where two series disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub weight: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

impl FormalChar {
    pub fn zero(top: Weight, depth: u32) -> Self {
        Self {
            profile: top.profile(),
            top,
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(profile: RankProfile, depth: u32) -> Self {
        Self::monomial(Weight::zero(profile), depth)
    }

    /// `e^top`.
    pub fn monomial(top: Weight, depth: u32) -> Self {
        let mut c = Self::zero(top.clone(), depth);
        c.terms.insert(top.into_coeffs(), BigInt::one());
        c
    }

    /// `c·e^κ` inside the frame `(top, depth)`.
    pub fn term_in_frame(top: Weight, depth: u32, weight: &Weight, coeff: BigInt) -> Result<Self> {
        top.profile().check(&weight.profile())?;
        let mut c = Self::zero(top, depth);
        let d = c.drop_of(weight.coeffs()).ok_or_else(|| Error::OutsideCone(weight.coeffs().to_vec()))?;
        if d <= depth as i64 && !coeff.is_zero() {
            c.terms.insert(weight.coeffs().to_vec(), coeff);
        }
        Ok(c)
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    pub fn top(&self) -> &Weight {
        &self.top
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Non-zero terms as `(weight, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Weight, &BigInt)> + '_ {
        self.terms
            .iter()
            .map(|(k, v)| (Weight::from_vec(self.profile, k.clone()), v))
    }

    fn xi(&self) -> DepthFunctional {
        DepthFunctional::new(self.profile)
    }

    /// `ξ(top) − ξ(κ)` if `κ ≤ top`.
    pub fn drop_of(&self, key: &[i64]) -> Option<i64> {
        let diff: Vec<i64> = self.top.coeffs().iter().zip(key).map(|(t, k)| t - k).collect();
        in_cone(&diff).then(|| self.xi().eval(&diff))
    }

    /// Whether the coefficient at `key` is determined by this series.
    pub fn knows(&self, key: &[i64]) -> bool {
        self.drop_of(key).map_or(true, |d| d <= self.depth as i64)
    }

    pub fn coeff(&self, weight: &Weight) -> Result<BigInt> {
        self.profile.check(&weight.profile())?;
        if !self.knows(weight.coeffs()) {
            return Err(Error::BeyondDepth {
                weight: weight.coeffs().to_vec(),
                depth: self.depth,
            });
        }
        Ok(self.terms.get(weight.coeffs()).cloned().unwrap_or_default())
    }

    /// Coefficients grouped by depth below the top.
    pub fn coeffs_by_depth(&self) -> BTreeMap<u32, Vec<(Weight, BigInt)>> {
        let mut out: BTreeMap<u32, Vec<(Weight, BigInt)>> = BTreeMap::new();
        for (k, v) in &self.terms {
            let d = self.drop_of(k).expect("invariant: terms lie in the cone") as u32;
            out.entry(d)
                .or_default()
                .push((Weight::from_vec(self.profile, k.clone()), v.clone()));
        }
        out
    }

    pub fn truncate(&self, depth: u32) -> Self {
        let depth = depth.min(self.depth);
        let mut out = Self::zero(self.top.clone(), depth);
        for (k, v) in &self.terms {
            if self.drop_of(k).unwrap() <= depth as i64 {
                out.terms.insert(k.clone(), v.clone());
            }
        }
        out
    }

    fn insert_add(&mut self, key: Vec<i64>, value: BigInt) {
        if value.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn common_frame(&self, other: &Self) -> Result<(Weight, u32)> {
        self.profile.check(&other.profile)?;
        if self.top == other.top {
            return Ok((self.top.clone(), self.depth.min(other.depth)));
        }
        if let Some(k) = self.drop_of(other.top.coeffs()) {
            let d = (self.depth as i64).min(k + other.depth as i64);
            return Ok((self.top.clone(), d as u32));
        }
        if let Some(k) = other.drop_of(self.top.coeffs()) {
            let d = (other.depth as i64).min(k + self.depth as i64);
            return Ok((other.top.clone(), d as u32));
        }
        Err(Error::IncomparableTops(
            self.top.coeffs().to_vec(),
            other.top.coeffs().to_vec(),
        ))
    }

    fn combine(&self, other: &Self, sign: i32) -> Result<Self> {
        let (top, depth) = self.common_frame(other)?;
        let mut out = Self::zero(top, depth);
        for (k, v) in &self.terms {
            if out.drop_of(k).unwrap() <= depth as i64 {
                out.insert_add(k.clone(), v.clone());
            }
        }
        for (k, v) in &other.terms {
            if out.drop_of(k).unwrap() <= depth as i64 {
                out.insert_add(k.clone(), if sign > 0 { v.clone() } else { -v.clone() });
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.top.clone(), self.depth);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    /// Product of series; the valid depth is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.profile.check(&other.profile)?;
        let top = &self.top + &other.top;
        let depth = self.depth.min(other.depth);
        let mut out = Self::zero(top, depth);
        let xi = self.xi();
        let lhs: Vec<(&Vec<i64>, &BigInt, i64)> = self
            .terms
            .iter()
            .map(|(k, v)| (k, v, self.top_xi() - xi.eval(k)))
            .collect();
        for (k2, v2) in &other.terms {
            let d2 = other.top_xi() - xi.eval(k2);
            for (k1, v1, d1) in &lhs {
                if d1 + d2 <= depth as i64 {
                    let key = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                    out.insert_add(key, *v1 * v2);
                }
            }
        }
        Ok(out)
    }

    fn top_xi(&self) -> i64 {
        self.xi().eval(self.top.coeffs())
    }

    /// Multiply by `e^w`.
    pub fn shift(&self, w: &Weight) -> Result<Self> {
        self.profile.check(&w.profile())?;
        let mut out = Self::zero(&self.top + w, self.depth);
        out.terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.iter().zip(w.coeffs()).map(|(a, b)| a + b).collect(), v.clone()))
            .collect();
        Ok(out)
    }

    fn check_direction(&self, beta: &Weight) -> Result<i64> {
        self.profile.check(&beta.profile())?;
        let x = self.xi().eval(beta.coeffs());
        if x <= 0 || !in_cone(beta.coeffs()) {
            return Err(Error::InvalidDivision(beta.coeffs().to_vec()));
        }
        Ok(x)
    }

    /// `Σ_k c_k e^{−kβ} · self` for `k` up to the depth.
    fn geometric(&self, beta: &Weight, step: i64, coeff: impl Fn(i64) -> BigInt) -> Self {
        let mut out = Self::zero(self.top.clone(), self.depth);
        for (key, v) in &self.terms {
            let d0 = self.drop_of(key).unwrap();
            let mut k = 0;
            while d0 + k * step <= self.depth as i64 {
                let c = coeff(k);
                if !c.is_zero() {
                    let shifted = key.iter().zip(beta.coeffs()).map(|(a, b)| a - k * b).collect();
                    out.insert_add(shifted, v * c);
                }
                k += 1;
            }
        }
        out
    }

    /// Multiply by `(1 + e^{−β})`.
    pub fn mul_one_plus(&self, beta: &Weight) -> Result<Self> {
        let step = self.check_direction(beta)?;
        Ok(self.geometric(beta, step, |k| BigInt::from((k <= 1) as i32)))
    }

    /// Multiply by `(1 − e^{−γ})`.
    pub fn mul_one_minus(&self, gamma: &Weight) -> Result<Self> {
        let step = self.check_direction(gamma)?;
        Ok(self.geometric(gamma, step, |k| match k {
            0 => BigInt::one(),
            1 => -BigInt::one(),
            _ => BigInt::zero(),
        }))
    }

    /// Divide by `(1 + e^{−β})`, i.e. multiply by `Σ (−1)^k e^{−kβ}`.
    pub fn div_one_plus(&self, beta: &Weight) -> Result<Self> {
        let step = self.check_direction(beta)?;
        Ok(self.geometric(beta, step, |k| {
            if k % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            }
        }))
    }

    /// Divide by `(1 − e^{−γ})`, i.e. multiply by `Σ e^{−kγ}`.
    pub fn div_one_minus(&self, gamma: &Weight) -> Result<Self> {
        let step = self.check_direction(gamma)?;
        Ok(self.geometric(gamma, step, |_| BigInt::one()))
    }

    /// The shallowest weight (ties broken by coefficient vector) at which
    /// the two series differ, among weights known to both.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Discrepancy>> {
        self.profile.check(&other.profile)?;
        let xi = self.xi();
        let mut keys: Vec<&Vec<i64>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort_by(|a, b| xi.eval(b).cmp(&xi.eval(a)).then_with(|| b.cmp(a)));
        keys.dedup();
        for key in keys {
            if !(self.knows(key) && other.knows(key)) {
                continue;
            }
            let a = self.terms.get(key).cloned().unwrap_or_default();
            let b = other.terms.get(key).cloned().unwrap_or_default();
            if a != b {
                return Ok(Some(Discrepancy {
                    weight: key.clone(),
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                }));
            }
        }
        Ok(None)
    }

    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|v| !v.is_negative())
    }

    pub fn to_json(&self) -> CharJson {
        let xi = self.xi();
        let mut terms: Vec<(&Vec<i64>, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| xi.eval(b).cmp(&xi.eval(a)).then_with(|| b.cmp(a)));
        CharJson {
            top: self.top.coeffs().to_vec(),
            depth: self.depth,
            terms: terms
                .into_iter()
                .map(|(k, v)| TermJson {
                    weight: k.clone(),
                    coeff: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(profile: RankProfile, json: &CharJson) -> Result<Self> {
        let top = Weight::new(profile, json.top.clone())?;
        let mut out = Self::zero(top, json.depth);
        for t in &json.terms {
            let w = Weight::new(profile, t.weight.clone())?;
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            match out.drop_of(w.coeffs()) {
                Some(d) if d <= json.depth as i64 => out.insert_add(w.into_coeffs(), c),
                _ => return Err(Error::OutsideCone(t.weight.clone())),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: Vec<i64>,
    pub coeff: String,
}

/// Wire form `{"top": [...], "depth": D, "terms": [{"weight": [...], "coeff": "…"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharJson {
    pub top: Vec<i64>,
    pub depth: u32,
    pub terms: Vec<TermJson>,
}

fn product_over(
    mut series: FormalChar,
    odd: &[Root],
    even_denominator: bool,
) -> Result<FormalChar> {
    for beta in odd {
        series = series.mul_one_plus(&beta.to_weight())?;
    }
    if even_denominator {
        for gamma in even_positive_roots(series.profile()) {
            series = series.div_one_minus(&gamma.to_weight())?;
        }
    }
    Ok(series)
}

/// `ch M_{0̄}(μ) = e^μ / ∏_{Δ₀⁺}(1 − e^{−γ})`.
pub fn even_verma(mu: &Weight, depth: u32) -> Result<FormalChar> {
    product_over(FormalChar::monomial(mu.clone(), depth), &[], true)
}

/// `ch M^b(λ) = e^λ ∏_{Δ₁^{b,+}}(1 + e^{−β}) / ∏_{Δ₀⁺}(1 − e^{−γ})`.
pub fn char_verma(b: &BorelElt, lambda: &Weight, depth: u32) -> Result<FormalChar> {
    b.profile().check(&lambda.profile())?;
    let mut top = lambda.clone();
    let mut factors = Vec::new();
    for beta in b.odd_positive() {
        if beta.is_distinguished_positive() {
            factors.push(beta);
        } else {
            // 1 + e^{−β} = e^{−β}(1 + e^{β}) with −β distinguished-positive
            let flipped = beta.negate();
            top = &top + &flipped.to_weight();
            factors.push(flipped);
        }
    }
    product_over(FormalChar::monomial(top, depth), &factors, true)
}

/// Sum `Σ sign·series` in the frame `(top, depth)`; terms whose own top
/// lies deeper than `depth` are skipped.
fn frame_sum(top: &Weight, depth: u32, parts: Vec<(i64, FormalChar)>) -> Result<FormalChar> {
    let mut acc = FormalChar::zero(top.clone(), depth);
    for (sign, part) in parts {
        let part = if sign < 0 { part.neg() } else { part };
        acc = acc.add(&part)?;
    }
    Ok(acc.truncate(depth))
}

/// Weyl-sum helper: evaluates `term(w, w·λ, remaining_depth)` for every
/// `w` whose `w·λ` lies within `depth` of `top`, concurrently, and sums the
/// results with signs `(−1)^{ℓ(w)}` in enumeration order.
pub(crate) fn weyl_sum<F>(top: &Weight, depth: u32, dotted: impl Fn(&WeylElt) -> Result<Weight> + Sync, term: F) -> Result<FormalChar>
where
    F: Fn(&WeylElt, &Weight, u32) -> Result<FormalChar> + Sync,
{
    let frame = FormalChar::zero(top.clone(), depth);
    let group = weyl_group(top.profile())?;
    let parts: Vec<Option<(i64, FormalChar)>> = group
        .par_iter()
        .map(|w| -> Result<Option<(i64, FormalChar)>> {
            let moved = dotted(w)?;
            let d = frame
                .drop_of(moved.coeffs())
                .ok_or_else(|| Error::OutsideCone(moved.coeffs().to_vec()))?;
            if d > depth as i64 {
                return Ok(None);
            }
            Ok(Some((w.sign(), term(w, &moved, depth - d as u32)?)))
        })
        .collect::<Result<_>>()?;
    frame_sum(top, depth, parts.into_iter().flatten().collect())
}

fn is_even_dominant(mu: &Weight) -> bool {
    let m = mu.profile().m();
    let c = mu.coeffs();
    c[..m].windows(2).all(|p| p[0] >= p[1]) && c[m..].windows(2).all(|p| p[0] >= p[1])
}

/// Weyl character of the simple `g₀`-module `L₀(μ)` as an alternating sum
/// of even Verma characters.
pub fn char_even_simple(mu: &Weight, depth: u32) -> Result<FormalChar> {
    if !is_even_dominant(mu) {
        return Err(Error::NotDominant(format!("{mu} is not g0-dominant")));
    }
    weyl_sum(mu, depth, |w| dot_even(w, mu), |_, moved, d| even_verma(moved, d))
}

/// `ch K_{≥0}(L₀(μ)) = ∏_{Δ₁^{(),+}}(1 + e^{−β}) · ch L₀(μ)`.
pub fn char_kac(mu: &Weight, depth: u32) -> Result<FormalChar> {
    let even = char_even_simple(mu, depth)?;
    product_over(even, &odd_positive_roots(mu.profile()), false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowCharacter {
    pub series: FormalChar,
    /// Whether `λ` is g₋₁-generic; the formula is only established then.
    pub generic: bool,
}

/// `ch N^{()}(λ) = ch M^{()}(λ) / ∏_{β∈Γ_λ}(1 + e^{−β})`, computed both as a
/// quotient and as the reduced product; the two must agree.
pub fn char_narrow(lambda: &Weight, depth: u32) -> Result<NarrowCharacter> {
    let profile = lambda.profile();
    let gamma = rootdata::gamma(lambda);
    let verma = char_verma(&BorelElt::distinguished(profile), lambda, depth)?;
    let mut quotient = verma;
    for beta in &gamma {
        quotient = quotient.div_one_plus(&beta.to_weight())?;
    }
    let rest: Vec<Root> = odd_positive_roots(profile)
        .into_iter()
        .filter(|r| !gamma.contains(r))
        .collect();
    let product = product_over(FormalChar::monomial(lambda.clone(), depth), &rest, true)?;
    if let Some(d) = quotient.first_difference(&product)? {
        return Err(Error::Inconsistent(format!(
            "narrow character: quotient and product forms differ at {:?} ({} vs {})",
            d.weight, d.lhs, d.rhs
        )));
    }
    let generic = diagrams::is_g1_generic(lambda, GenericityMode::Fast).unwrap_or(false);
    Ok(NarrowCharacter {
        series: product,
        generic,
    })
}

/// The three expressions for `ch L^{()}(λ)` at a totally disconnected
/// weight, each computed independently:
///
/// 0. `∏_{Δ₁⁺}(1+e^{−β}) / ∏_{Δ₀⁺}(1−e^{−γ}) · Σ_w (−1)^{ℓ(w)} e^{w·λ} / ∏_{β∈Γ_{w·λ}}(1+e^{−β})`
/// 1. `Σ_w (−1)^{ℓ(w)} e^{w·λ} ∏_{Δ₁⁺∖Γ_{w·λ}}(1+e^{−β}) / ∏_{Δ₀⁺}(1−e^{−γ})`
/// 2. `Σ_w (−1)^{ℓ(w)} ch M^{()}(w·λ) / ∏_{β∈Γ_{w·λ}}(1+e^{−β})`
///
/// `Γ_{w·λ} = wΓ_λ`: the Weyl group acts on the whole fraction, atypical
/// factors included.
pub fn simple_td_expressions(lambda: &Weight, depth: u32) -> Result<[FormalChar; 3]> {
    check_td(lambda)?;
    let profile = lambda.profile();
    let odd = odd_positive_roots(profile);
    let gamma = rootdata::gamma(lambda);
    let twisted = |w: &WeylElt| -> Vec<Root> { gamma.iter().map(|g| w.act_root(g)).collect() };

    // The prefactor of the first form is not a power series in the cone
    // below λ on its own once divided terms are re-multiplied, so expand
    // the inner sum first and multiply afterwards.
    let inner = weyl_sum(lambda, depth, |w| dot(w, lambda), |w, moved, d| {
        let mut s = FormalChar::monomial(moved.clone(), d);
        for g in twisted(w) {
            s = s.div_one_plus(&g.to_weight())?;
        }
        Ok(s)
    })?;
    let first = product_over(inner, &odd, true)?;

    let second = weyl_sum(lambda, depth, |w| dot(w, lambda), |w, moved, d| {
        let tg = twisted(w);
        let rest: Vec<Root> = odd.iter().filter(|r| !tg.contains(r)).copied().collect();
        product_over(FormalChar::monomial(moved.clone(), d), &rest, true)
    })?;

    let third = weyl_sum(lambda, depth, |w| dot(w, lambda), |w, moved, d| {
        let mut s = char_verma(&BorelElt::distinguished(profile), moved, d)?;
        for g in twisted(w) {
            s = s.div_one_plus(&g.to_weight())?;
        }
        Ok(s)
    })?;
    Ok([first, second, third])
}

fn check_td(lambda: &Weight) -> Result<()> {
    let c = classify(lambda);
    if !c.regular {
        return Err(Error::NotRegular(encode(lambda).to_string()));
    }
    if !c.dominant {
        return Err(Error::NotDominant(encode(lambda).to_string()));
    }
    if !diagrams::is_totally_disconnected(lambda)? {
        return Err(Error::Precondition(format!(
            "{} is not totally disconnected",
            encode(lambda)
        )));
    }
    Ok(())
}

/// `ch L^{()}(λ)` for a regular dominant totally disconnected weight. All
/// three expressions are evaluated; any disagreement is an error.
pub fn char_simple_td(lambda: &Weight, depth: u32) -> Result<FormalChar> {
    let [first, second, third] = simple_td_expressions(lambda, depth)?;
    for (name, other) in [("product", &second), ("verma", &third)] {
        if let Some(d) = first.first_difference(other)? {
            return Err(Error::Inconsistent(format!(
                "simple character: prefactor and {name} forms differ at {:?} ({} vs {})",
                d.weight, d.lhs, d.rhs
            )));
        }
    }
    let leading = first.coeff(lambda)?;
    if !leading.is_one() {
        return Err(Error::Inconsistent(format!(
            "simple character has leading coefficient {leading}"
        )));
    }
    Ok(first)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionDecomposition {
    /// Even highest weights `λ − Σ_S α` with multiplicities.
    pub summands: Vec<(Weight, usize)>,
    /// The module-level direct sum needs g₋₁-genericity.
    pub generic: bool,
}

impl RestrictionDecomposition {
    pub fn total(&self) -> usize {
        self.summands.iter().map(|(_, k)| k).sum()
    }
}

fn subset_sums(profile: RankProfile, roots: &[Root]) -> BTreeMap<Weight, usize> {
    let mut out = BTreeMap::new();
    for mask in 0u64..(1u64 << roots.len()) {
        let mut w = Weight::zero(profile);
        for (k, r) in roots.iter().enumerate() {
            if mask & (1 << k) != 0 {
                w = &w + &r.to_weight();
            }
        }
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

/// Sum of even Verma characters at `λ − Σ_S α` over subsets `S` of `roots`.
pub fn even_verma_subset_sum(lambda: &Weight, roots: &[Root], depth: u32) -> Result<FormalChar> {
    let sums = subset_sums(lambda.profile(), roots);
    let parts = sums
        .into_iter()
        .map(|(s, k)| Ok((1, even_verma(&(lambda - &s), depth)?.scale(&BigInt::from(k)))))
        .collect::<Result<Vec<_>>>()?;
    frame_sum(lambda, depth, parts)
}

/// Character-level restriction of `M^b(λ + ρ − ρ^b)` to the even part:
/// `Σ_{S ⊂ Δ₁^{(),+}} ch M₀(λ − Σ_S α)`. The identity is verified before
/// the summands are returned.
pub fn char_restriction_decomposition(b: &BorelElt, lambda: &Weight, depth: u32) -> Result<RestrictionDecomposition> {
    let profile = lambda.profile();
    let shifted = &(lambda + &rootdata::rho(profile)) - &b.rho_b();
    let lhs = char_verma(b, &shifted, depth)?;
    let odd = odd_positive_roots(profile);
    let rhs = even_verma_subset_sum(lambda, &odd, depth)?;
    if let Some(d) = lhs.first_difference(&rhs)? {
        return Err(Error::Inconsistent(format!(
            "restriction of the Verma character differs at {:?}",
            d.weight
        )));
    }
    let mut summands: Vec<(Weight, usize)> = subset_sums(profile, &odd)
        .into_iter()
        .map(|(s, k)| (lambda - &s, k))
        .collect();
    summands.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(RestrictionDecomposition {
        summands,
        generic: diagrams::is_g1_generic(lambda, GenericityMode::Fast).unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{decode, Coords};
    use proptest::prelude::*;

    fn p(m: usize, n: usize) -> RankProfile {
        RankProfile::new(m, n).unwrap()
    }

    fn coords(pr: RankProfile, eps: &[i64], del: &[i64]) -> Weight {
        decode(&Coords::from_blocks(pr, eps, del).unwrap())
    }

    fn root(pr: RankProfile, i: usize, j: usize) -> Weight {
        Root::new(pr, i, j).unwrap().to_weight()
    }

    #[test]
    fn depth_functional_is_positive_on_distinguished_roots() {
        for (m, n) in [(1, 1), (2, 1), (3, 3), (4, 2)] {
            let pr = p(m, n);
            let xi = DepthFunctional::new(pr);
            for r in even_positive_roots(pr).iter().chain(&odd_positive_roots(pr)) {
                assert!(xi.eval(r.to_weight().coeffs()) > 0);
            }
        }
        assert_eq!(DepthFunctional::new(p(2, 1)).values(), &[3, 2, 1]);
    }

    #[test]
    fn unit_inverse() {
        let pr = p(1, 1);
        let beta = root(pr, 0, 1);
        let one = FormalChar::one(pr, 5);
        let x = one.mul_one_plus(&beta).unwrap().div_one_plus(&beta).unwrap();
        assert_eq!(x, one);
    }

    #[test]
    fn geometric_series() {
        let pr = p(2, 1);
        let gamma = root(pr, 0, 1);
        let s = FormalChar::one(pr, 3).div_one_minus(&gamma).unwrap();
        assert_eq!(s.len(), 4);
        for k in 0..=3 {
            assert_eq!(s.coeff(&(-k * &gamma)).unwrap(), BigInt::one());
        }
        assert!(matches!(
            s.coeff(&(-4 * &gamma)),
            Err(Error::BeyondDepth { .. })
        ));
    }

    #[test]
    fn monomial_product() {
        let pr = p(2, 1);
        let a = Weight::new(pr, vec![1, 0, 2]).unwrap();
        let b = Weight::new(pr, vec![0, -3, 1]).unwrap();
        let prod = FormalChar::monomial(a.clone(), 4).mul(&FormalChar::monomial(b.clone(), 4)).unwrap();
        assert_eq!(prod, FormalChar::monomial(&a + &b, 4));
    }

    #[test]
    fn division_rejects_non_positive_directions() {
        let pr = p(2, 1);
        let one = FormalChar::one(pr, 3);
        assert!(matches!(one.div_one_minus(&root(pr, 1, 0)), Err(Error::InvalidDivision(_))));
        assert!(matches!(one.div_one_plus(&Weight::zero(pr)), Err(Error::InvalidDivision(_))));
    }

    #[test]
    fn verma_gl11() {
        let pr = p(1, 1);
        let lambda = Weight::new(pr, vec![3, -1]).unwrap();
        let beta = root(pr, 0, 1);
        let ch = char_verma(&BorelElt::distinguished(pr), &lambda, 4).unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch.coeff(&lambda).unwrap(), BigInt::one());
        assert_eq!(ch.coeff(&(&lambda - &beta)).unwrap(), BigInt::one());
        // ch M^{()}(λ) = ch M^{(1)}(λ − 2ρ₁) with 2ρ₁ = β
        let other = char_verma(&BorelElt::anti_distinguished(pr), &(&lambda - &beta), 4).unwrap();
        assert_eq!(ch, other);
    }

    #[test]
    fn verma_gl21_coefficient() {
        let pr = p(2, 1);
        let lambda = coords(pr, &[3, 0], &[5]);
        let ch = char_verma(&BorelElt::distinguished(pr), &lambda, 2).unwrap();
        assert_eq!(ch.coeff(&(&lambda - &root(pr, 0, 1))).unwrap(), BigInt::one());
    }

    #[test]
    fn even_simple_examples() {
        let pr = p(2, 1);
        assert_eq!(char_even_simple(&Weight::zero(pr), 8).unwrap(), FormalChar::one(pr, 8));
        let e1 = Weight::epsilon(pr, 1);
        let ch = char_even_simple(&e1, 10).unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch.coeff(&e1).unwrap(), BigInt::one());
        assert_eq!(ch.coeff(&Weight::epsilon(pr, 2)).unwrap(), BigInt::one());
        assert!(char_even_simple(&Weight::epsilon(pr, 2), 4).is_err());
    }

    #[test]
    fn kac_examples() {
        let pr = p(1, 1);
        let beta = root(pr, 0, 1);
        let k = char_kac(&Weight::zero(pr), 6).unwrap();
        let expected = FormalChar::one(pr, 6).mul_one_plus(&beta).unwrap();
        assert_eq!(k, expected);
        let mu = Weight::new(pr, vec![2, 5]).unwrap();
        assert_eq!(
            char_kac(&mu, 6).unwrap(),
            char_verma(&BorelElt::distinguished(pr), &mu, 6).unwrap()
        );
        let pr = p(2, 1);
        let k = char_kac(&Weight::zero(pr), 6).unwrap();
        assert_eq!(k.coeff(&-&root(pr, 0, 2)).unwrap(), BigInt::one());
    }

    #[test]
    fn narrow_examples() {
        let pr = p(2, 1);
        let typical = coords(pr, &[3, 0], &[5]);
        let n = char_narrow(&typical, 5).unwrap();
        assert_eq!(n.series, char_verma(&BorelElt::distinguished(pr), &typical, 5).unwrap());

        let pr1 = p(1, 1);
        let atyp = coords(pr1, &[4], &[4]);
        let n = char_narrow(&atyp, 6).unwrap();
        assert_eq!(n.series, FormalChar::monomial(atyp.clone(), 6));
        assert!(n.generic);

        let l = coords(pr, &[3, 0], &[3]);
        // ξ(ε₁−δ₁) = 2; the only surviving path to λ−(ε₁−δ₁) is through
        // ε₁−ε₂ and ε₂−δ₁, where the Verma module has a second one
        let n = char_narrow(&l, 2).unwrap();
        assert!(n.generic);
        let target = &l - &root(pr, 0, 2);
        assert_eq!(n.series.coeff(&target).unwrap(), BigInt::one());
        let verma = char_verma(&BorelElt::distinguished(pr), &l, 2).unwrap();
        assert_eq!(verma.coeff(&target).unwrap(), BigInt::from(2));
        assert_eq!(n.series.coeff(&l).unwrap(), BigInt::one());

        let nongeneric = coords(pr, &[2, 1], &[5]);
        assert!(!char_narrow(&nongeneric, 3).unwrap().generic);
    }

    #[test]
    fn simple_td_examples() {
        let pr = p(1, 1);
        assert_eq!(char_simple_td(&Weight::zero(pr), 8).unwrap(), FormalChar::one(pr, 8));

        let pr = p(2, 1);
        let l = coords(pr, &[3, 0], &[3]);
        let ch = char_simple_td(&l, 12).unwrap();
        assert_eq!(ch.coeff(&l).unwrap(), BigInt::one());
        assert!(ch.all_nonnegative());
        // gl(2|1), this weight: L₀(λ) ⊕ L₀(λ − (ε₂−δ₁)) of dimensions 3 + 4
        let total: BigInt = ch.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, BigInt::from(7));

        // typical: reduces to the alternating Verma sum
        let t = coords(pr, &[3, 0], &[7]);
        let ch = char_simple_td(&t, 8).unwrap();
        let alt = weyl_sum(&t, 8, |w| dot(w, &t), |_, moved, d| {
            char_verma(&BorelElt::distinguished(pr), moved, d)
        })
        .unwrap();
        assert_eq!(ch, alt);

        assert!(char_simple_td(&coords(pr, &[0, 3], &[3]), 4).is_err());
    }

    #[test]
    fn restriction_examples() {
        let pr = p(1, 1);
        let l = Weight::new(pr, vec![2, 1]).unwrap();
        let r = char_restriction_decomposition(&BorelElt::distinguished(pr), &l, 4).unwrap();
        assert_eq!(r.summands, vec![(l.clone(), 1), (&l - &root(pr, 0, 1), 1)]);
        let pr = p(2, 1);
        let r = char_restriction_decomposition(&BorelElt::distinguished(pr), &Weight::zero(pr), 4).unwrap();
        assert_eq!(r.total(), 4);
        let pr = p(2, 2);
        for b in BorelElt::enumerate(pr).unwrap() {
            let r = char_restriction_decomposition(&b, &coords(pr, &[7, 2], &[2, 7]), 4).unwrap();
            assert_eq!(r.total(), 16);
            assert_eq!(r.summands.len(), 15);
            assert!(r.generic);
        }
    }

    #[test]
    fn json_round_trip() {
        let pr = p(2, 1);
        let ch = char_narrow(&coords(pr, &[3, 0], &[3]), 5).unwrap().series;
        let text = serde_json::to_string(&ch.to_json()).unwrap();
        let back: CharJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FormalChar::from_json(pr, &back).unwrap(), ch);
        assert!(text.starts_with("{\"top\":"));
    }

    #[test]
    fn comparison_respects_depth() {
        let pr = p(2, 1);
        let l = coords(pr, &[3, 0], &[3]);
        let deep = char_verma(&BorelElt::distinguished(pr), &l, 6).unwrap();
        let shallow = char_verma(&BorelElt::distinguished(pr), &l, 2).unwrap();
        assert!(deep.agrees_with(&shallow).unwrap());
        assert_eq!(deep.add(&shallow).unwrap().depth(), 2);
        let other = char_verma(&BorelElt::distinguished(pr), &(&l + &Weight::epsilon(pr, 1)), 6).unwrap();
        assert!(!deep.agrees_with(&other).unwrap());
    }

    proptest! {
        #[test]
        fn ring_laws(a in proptest::collection::vec(-3i64..=3, 3), b in proptest::collection::vec(-3i64..=3, 3), d in 0u32..6) {
            let pr = p(2, 1);
            let x = even_verma(&Weight::new(pr, a).unwrap(), d).unwrap();
            let y = char_verma(&BorelElt::distinguished(pr), &Weight::new(pr, b).unwrap(), d).unwrap();
            let z = FormalChar::one(pr, d).mul_one_plus(&root(pr, 1, 2)).unwrap();
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            for r in even_positive_roots(pr).iter().chain(&odd_positive_roots(pr)) {
                let r = r.to_weight();
                prop_assert_eq!(&x.div_one_plus(&r).unwrap().mul_one_plus(&r).unwrap(), &x);
                prop_assert_eq!(&x.div_one_minus(&r).unwrap().mul_one_minus(&r).unwrap(), &x);
            }
        }
    }
}
