//! Root data of gl(m|n): weights, roots, the invariant form, Weyl vectors,
//! the Weyl group `S_m × S_n` and its dot actions, the coordinate encoding
//! `λ_i = (λ+ρ, ε_i)` and everything read off from it (regularity,
//! dominance, atypicality).
//!
//! Indices are 0-based internally: position `k < m` is `ε_{k+1}`, position
//! `m + j` is `δ_{j+1}`. Display forms are 1-based.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::borels::BorelElt;
use crate::error::{Error, Result};

/// Default bound on `|W| = m!·n!`.
pub const DEFAULT_WEYL_BOUND: u128 = 40320;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankProfile {
    m: usize,
    n: usize,
}

impl RankProfile {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidProfile { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m + n`, the length of every weight vector.
    pub fn rank(&self) -> usize {
        self.m + self.n
    }

    /// Whether position `k` belongs to the ε-block.
    pub fn is_even_index(&self, k: usize) -> bool {
        k < self.m
    }

    /// Sign of `(e_k, e_k)`.
    pub fn form_sign(&self, k: usize) -> i64 {
        if self.is_even_index(k) {
            1
        } else {
            -1
        }
    }

    pub(crate) fn check(&self, other: &RankProfile) -> Result<()> {
        if self != other {
            return Err(Error::ProfileMismatch {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }

    pub(crate) fn index_label(&self, k: usize) -> String {
        if k < self.m {
            format!("e{}", k + 1)
        } else {
            format!("d{}", k - self.m + 1)
        }
    }
}

impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gl({}|{})", self.m, self.n)
    }
}

/// An integral weight `Σ a_i ε_i + Σ b_j δ_j`, stored as its coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    profile: RankProfile,
    coeffs: Vec<i64>,
}

impl Weight {
    pub fn new(profile: RankProfile, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != profile.rank() {
            return Err(Error::LengthMismatch {
                expected: profile.rank(),
                got: coeffs.len(),
            });
        }
        Ok(Self { profile, coeffs })
    }

    pub(crate) fn from_vec(profile: RankProfile, coeffs: Vec<i64>) -> Self {
        debug_assert_eq!(coeffs.len(), profile.rank());
        Self { profile, coeffs }
    }

    pub fn zero(profile: RankProfile) -> Self {
        Self::from_vec(profile, vec![0; profile.rank()])
    }

    /// The basis vector `e_k` (`ε_{k+1}` or `δ_{k-m+1}`).
    pub fn unit(profile: RankProfile, k: usize) -> Self {
        let mut w = Self::zero(profile);
        w.coeffs[k] = 1;
        w
    }

    /// `ε_i`, 1-based.
    pub fn epsilon(profile: RankProfile, i: usize) -> Self {
        assert!((1..=profile.m()).contains(&i));
        Self::unit(profile, i - 1)
    }

    /// `δ_j`, 1-based.
    pub fn delta(profile: RankProfile, j: usize) -> Self {
        assert!((1..=profile.n()).contains(&j));
        Self::unit(profile, profile.m() + j - 1)
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The invariant form `(x, y) = Σ_{i≤m} x_i y_i − Σ_{j>m} x_j y_j`.
    pub fn pairing(&self, other: &Weight) -> Result<i64> {
        self.profile.check(&other.profile)?;
        Ok(self.pairing_unchecked(other))
    }

    pub(crate) fn pairing_unchecked(&self, other: &Weight) -> i64 {
        let m = self.profile.m();
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(k, (a, b))| if k < m { a * b } else { -a * b })
            .sum()
    }

    pub fn checked_add(&self, other: &Weight) -> Result<Weight> {
        self.profile.check(&other.profile)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Weight) -> Result<Weight> {
        self.profile.check(&other.profile)?;
        Ok(self - other)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.profile.m();
        write!(
            f,
            "({} | {})",
            self.coeffs[..m].iter().join(","),
            self.coeffs[m..].iter().join(",")
        )
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        Weight::from_vec(
            self.profile,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        Weight::from_vec(
            self.profile,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::from_vec(self.profile, self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight::from_vec(rhs.profile, rhs.coeffs.iter().map(|a| self * a).collect())
    }
}

/// A weight with half-integral coefficients, stored doubled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfWeight {
    profile: RankProfile,
    doubled: Vec<i64>,
}

impl HalfWeight {
    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    /// Twice the coefficient vector.
    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn coeff(&self, k: usize) -> Ratio<i64> {
        Ratio::new(self.doubled[k], 2)
    }

    pub fn coeffs(&self) -> Vec<Ratio<i64>> {
        (0..self.doubled.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn pairing(&self, w: &Weight) -> Result<Ratio<i64>> {
        self.profile.check(&w.profile)?;
        let twice = Weight::from_vec(self.profile, self.doubled.clone()).pairing_unchecked(w);
        Ok(Ratio::new(twice, 2))
    }

    /// The underlying weight when every coefficient is an integer.
    pub fn to_weight(&self) -> Option<Weight> {
        if self.doubled.iter().all(|d| d % 2 == 0) {
            Some(Weight::from_vec(
                self.profile,
                self.doubled.iter().map(|d| d / 2).collect(),
            ))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// The root `e_i − e_j` (0-based positions), i.e. the weight of `E_{i+1,j+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    profile: RankProfile,
    i: usize,
    j: usize,
}

impl Root {
    pub fn new(profile: RankProfile, i: usize, j: usize) -> Result<Self> {
        if i == j || i >= profile.rank() || j >= profile.rank() {
            return Err(Error::Precondition(format!(
                "({i},{j}) does not index a root of {profile}"
            )));
        }
        Ok(Self { profile, i, j })
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    /// 0-based position carrying `+1`.
    pub fn i(&self) -> usize {
        self.i
    }

    /// 0-based position carrying `−1`.
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn parity(&self) -> Parity {
        if self.profile.is_even_index(self.i) == self.profile.is_even_index(self.j) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    pub fn negate(&self) -> Root {
        Root {
            profile: self.profile,
            i: self.j,
            j: self.i,
        }
    }

    pub fn to_weight(&self) -> Weight {
        let mut w = Weight::zero(self.profile);
        w.coeffs[self.i] += 1;
        w.coeffs[self.j] -= 1;
        w
    }

    /// Whether the root is positive for the distinguished Borel, i.e. `i < j`
    /// in the order `ε_1 … ε_m δ_1 … δ_n`.
    pub fn is_distinguished_positive(&self) -> bool {
        self.i < self.j
    }

    /// `⟨μ, α^∨⟩ = 2(μ,α)/(α,α)` for an even root.
    pub fn coroot_pairing(&self, mu: &Weight) -> Result<i64> {
        if self.is_odd() {
            return Err(Error::Precondition(format!("{self} is odd: no coroot")));
        }
        let a = self.to_weight();
        let num = 2 * mu.pairing(&a)?;
        Ok(num / a.pairing_unchecked(&a))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{}",
            self.profile.index_label(self.i),
            self.profile.index_label(self.j)
        )
    }
}

/// All roots of the profile, in lexicographic `(i, j)` order.
pub fn all_roots(profile: RankProfile) -> Vec<Root> {
    let r = profile.rank();
    (0..r)
        .cartesian_product(0..r)
        .filter(|(i, j)| i != j)
        .map(|(i, j)| Root { profile, i, j })
        .collect()
}

/// The standard even positive system `Δ₀⁺`.
pub fn even_positive_roots(profile: RankProfile) -> Vec<Root> {
    all_roots(profile)
        .into_iter()
        .filter(|r| !r.is_odd() && r.i < r.j)
        .collect()
}

/// `Δ₁^{(),+} = {ε_i − δ_j}` in lexicographic order.
pub fn odd_positive_roots(profile: RankProfile) -> Vec<Root> {
    all_roots(profile)
        .into_iter()
        .filter(|r| r.is_odd() && r.i < r.j)
        .collect()
}

pub fn ber(profile: RankProfile) -> Weight {
    let m = profile.m();
    Weight::from_vec(
        profile,
        (0..profile.rank()).map(|k| if k < m { 1 } else { -1 }).collect(),
    )
}

/// `ρ = Σ_i −(i−1)ε_i + Σ_j (m−j)δ_j`.
pub fn rho(profile: RankProfile) -> Weight {
    let m = profile.m() as i64;
    let coeffs = (0..profile.m())
        .map(|i| -(i as i64))
        .chain((1..=profile.n()).map(|j| m - j as i64))
        .collect();
    Weight::from_vec(profile, coeffs)
}

/// `ρ₀ = ½ Σ_{Δ₀⁺} β`.
pub fn rho0(profile: RankProfile) -> HalfWeight {
    half_sum(profile, &even_positive_roots(profile))
}

pub(crate) fn half_sum(profile: RankProfile, roots: &[Root]) -> HalfWeight {
    let mut doubled = vec![0i64; profile.rank()];
    for r in roots {
        doubled[r.i] += 1;
        doubled[r.j] -= 1;
    }
    HalfWeight { profile, doubled }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoVectors {
    pub rho0: HalfWeight,
    pub rho1_b: HalfWeight,
    pub ber: Weight,
    pub rho: Weight,
    pub rho_b: Weight,
}

pub fn rho_vectors(b: &BorelElt) -> RhoVectors {
    let profile = b.profile();
    RhoVectors {
        rho0: rho0(profile),
        rho1_b: b.rho1(),
        ber: ber(profile),
        rho: rho(profile),
        rho_b: b.rho_b(),
    }
}

/// The rational `t` with `ρ − (ρ₀ − ρ₁ − ½(m+n−1)·ber) = t·ber`, or `None`
/// if the difference is not a multiple of `ber`.
pub fn rho_normalization_offset(profile: RankProfile) -> Option<Ratio<i64>> {
    let rho0 = rho0(profile);
    let rho1 = half_sum(profile, &odd_positive_roots(profile));
    let ber = ber(profile);
    let shift = (profile.rank() as i64) - 1;
    // doubled: 2ρ − (2ρ₀ − 2ρ₁ − (m+n−1)·ber)
    let diff: Vec<i64> = (0..profile.rank())
        .map(|k| {
            2 * rho(profile).coeffs[k] - (rho0.doubled[k] - rho1.doubled[k] - shift * ber.coeffs[k])
        })
        .collect();
    let t2 = diff[0];
    diff.iter()
        .zip(&ber.coeffs)
        .all(|(d, b)| *d == t2 * b)
        .then(|| Ratio::new(t2, 2))
}

/// `λ_i = (λ+ρ, e_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coords {
    profile: RankProfile,
    values: Vec<i64>,
}

impl Coords {
    pub fn new(profile: RankProfile, values: Vec<i64>) -> Result<Self> {
        if values.len() != profile.rank() {
            return Err(Error::LengthMismatch {
                expected: profile.rank(),
                got: values.len(),
            });
        }
        Ok(Self { profile, values })
    }

    /// Build from the two blocks `(λ_1..λ_m | λ_{m+1}..λ_{m+n})`.
    pub fn from_blocks(profile: RankProfile, eps: &[i64], delta: &[i64]) -> Result<Self> {
        Self::new(profile, eps.iter().chain(delta).copied().collect())
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn eps(&self) -> &[i64] {
        &self.values[..self.profile.m()]
    }

    pub fn delta(&self) -> &[i64] {
        &self.values[self.profile.m()..]
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} | {})",
            self.eps().iter().join(","),
            self.delta().iter().join(",")
        )
    }
}

pub fn encode(lambda: &Weight) -> Coords {
    let profile = lambda.profile;
    let shifted = lambda + &rho(profile);
    let values = shifted
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| profile.form_sign(k) * c)
        .collect();
    Coords { profile, values }
}

pub fn decode(coords: &Coords) -> Weight {
    let profile = coords.profile;
    let shifted = Weight::from_vec(
        profile,
        coords
            .values
            .iter()
            .enumerate()
            .map(|(k, c)| profile.form_sign(k) * c)
            .collect(),
    );
    &shifted - &rho(profile)
}

/// Element `(σ, τ)` of `W = S_m × S_n`; `w ε_i = ε_{σ(i)}`, `w δ_j = δ_{τ(j)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    profile: RankProfile,
    sigma: Vec<usize>,
    tau: Vec<usize>,
}

impl WeylElt {
    pub fn new(profile: RankProfile, sigma: Vec<usize>, tau: Vec<usize>) -> Result<Self> {
        if !is_permutation(&sigma, profile.m()) || !is_permutation(&tau, profile.n()) {
            return Err(Error::Precondition(format!(
                "({sigma:?}, {tau:?}) is not an element of S_{} × S_{}",
                profile.m(),
                profile.n()
            )));
        }
        Ok(Self { profile, sigma, tau })
    }

    pub fn identity(profile: RankProfile) -> Self {
        Self {
            profile,
            sigma: (0..profile.m()).collect(),
            tau: (0..profile.n()).collect(),
        }
    }

    /// The longest element `w₀`.
    pub fn longest(profile: RankProfile) -> Self {
        Self {
            profile,
            sigma: (0..profile.m()).rev().collect(),
            tau: (0..profile.n()).rev().collect(),
        }
    }

    /// The reflection `s_α` for an even root `α`.
    pub fn reflection(alpha: &Root) -> Result<Self> {
        if alpha.is_odd() {
            return Err(Error::Precondition(format!(
                "{alpha} is odd; W is generated by even reflections"
            )));
        }
        let profile = alpha.profile;
        let mut w = Self::identity(profile);
        let m = profile.m();
        if alpha.i < m {
            w.sigma.swap(alpha.i, alpha.j);
        } else {
            w.tau.swap(alpha.i - m, alpha.j - m);
        }
        Ok(w)
    }

    pub fn profile(&self) -> RankProfile {
        self.profile
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn length(&self) -> usize {
        inversions(&self.sigma) + inversions(&self.tau)
    }

    pub fn sign(&self) -> i64 {
        if self.length() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElt) -> WeylElt {
        assert_eq!(self.profile, other.profile);
        WeylElt {
            profile: self.profile,
            sigma: other.sigma.iter().map(|&k| self.sigma[k]).collect(),
            tau: other.tau.iter().map(|&k| self.tau[k]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElt {
        let mut sigma = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            sigma[s] = i;
        }
        let mut tau = vec![0; self.tau.len()];
        for (j, &t) in self.tau.iter().enumerate() {
            tau[t] = j;
        }
        WeylElt {
            profile: self.profile,
            sigma,
            tau,
        }
    }

    /// Linear action on weights.
    pub fn act(&self, lambda: &Weight) -> Result<Weight> {
        self.profile.check(&lambda.profile)?;
        Ok(self.act_unchecked(&lambda.coeffs))
    }

    fn act_unchecked(&self, coeffs: &[i64]) -> Weight {
        let m = self.profile.m();
        let mut out = vec![0; coeffs.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            out[s] = coeffs[i];
        }
        for (j, &t) in self.tau.iter().enumerate() {
            out[m + t] = coeffs[m + j];
        }
        Weight::from_vec(self.profile, out)
    }

    fn act_doubled(&self, doubled: &[i64]) -> Vec<i64> {
        self.act_unchecked(doubled).coeffs
    }

    /// The image of a root under `w`.
    pub fn act_root(&self, alpha: &Root) -> Root {
        let m = self.profile.m();
        let map = |k: usize| {
            if k < m {
                self.sigma[k]
            } else {
                m + self.tau[k - m]
            }
        };
        Root {
            profile: self.profile,
            i: map(alpha.i),
            j: map(alpha.j),
        }
    }
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}|{}]",
            self.sigma.iter().map(|s| s + 1).join(","),
            self.tau.iter().map(|t| t + 1).join(",")
        )
    }
}

fn is_permutation(p: &[usize], size: usize) -> bool {
    let mut seen = vec![false; size];
    p.len() == size
        && p.iter().all(|&k| {
            k < size && !std::mem::replace(&mut seen[k], true)
        })
}

fn inversions(p: &[usize]) -> usize {
    p.iter()
        .tuple_combinations()
        .filter(|(a, b)| a > b)
        .count()
}

/// `w ·_b λ = w(λ + ρ^b) − ρ^b`.
pub fn dot_action(w: &WeylElt, lambda: &Weight, b: &BorelElt) -> Result<Weight> {
    w.profile.check(&lambda.profile)?;
    b.profile().check(&lambda.profile)?;
    let rho_b = b.rho_b();
    Ok(&w.act(&(lambda + &rho_b))? - &rho_b)
}

/// `w ·_() λ`, the dot action for the distinguished Borel.
pub fn dot(w: &WeylElt, lambda: &Weight) -> Result<Weight> {
    w.profile.check(&lambda.profile)?;
    let r = rho(lambda.profile);
    Ok(&w.act(&(lambda + &r))? - &r)
}

/// The usual dot action `w(λ + ρ₀) − ρ₀` of the even part.
pub fn dot_even(w: &WeylElt, lambda: &Weight) -> Result<Weight> {
    w.profile.check(&lambda.profile)?;
    let r0 = rho0(lambda.profile);
    let shifted: Vec<i64> = lambda
        .coeffs
        .iter()
        .zip(&r0.doubled)
        .map(|(c, d)| 2 * c + d)
        .collect();
    let moved = w.act_doubled(&shifted);
    let coeffs = moved
        .iter()
        .zip(&r0.doubled)
        .map(|(x, d)| {
            let v = x - d;
            debug_assert_eq!(v % 2, 0);
            v / 2
        })
        .collect();
    Ok(Weight::from_vec(lambda.profile, coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub regular: bool,
    pub dominant: bool,
    pub antidominant: bool,
}

pub fn classify(lambda: &Weight) -> Classification {
    let c = encode(lambda);
    let distinct = |xs: &[i64]| xs.iter().all_unique();
    Classification {
        regular: distinct(c.eps()) && distinct(c.delta()),
        dominant: c.eps().windows(2).all(|p| p[0] >= p[1])
            && c.delta().windows(2).all(|p| p[0] <= p[1]),
        antidominant: c.eps().windows(2).all(|p| p[0] <= p[1])
            && c.delta().windows(2).all(|p| p[0] >= p[1]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitExtremes {
    pub dominant: Weight,
    pub antidominant: Weight,
}

/// Dominant and antidominant representatives of `W · λ`. For non-regular
/// `λ` these are representatives only (stable sort on ties).
pub fn orbit_extremes(lambda: &Weight) -> OrbitExtremes {
    let c = encode(lambda);
    let profile = c.profile;
    let build = |eps_desc: bool| {
        let mut eps = c.eps().to_vec();
        let mut del = c.delta().to_vec();
        if eps_desc {
            eps.sort_by(|a, b| b.cmp(a));
            del.sort();
        } else {
            eps.sort();
            del.sort_by(|a, b| b.cmp(a));
        }
        decode(&Coords::from_blocks(profile, &eps, &del).expect("block lengths preserved"))
    };
    OrbitExtremes {
        dominant: build(true),
        antidominant: build(false),
    }
}

/// The unique `w` with `w · λ` dominant, for regular `λ`.
pub fn to_dominant(lambda: &Weight) -> Result<WeylElt> {
    if !classify(lambda).regular {
        return Err(Error::NotRegular(encode(lambda).to_string()));
    }
    let c = encode(lambda);
    let profile = lambda.profile;
    // coords of w·λ are coords of λ permuted by σ⁻¹: new[σ(i)] = old[i]
    let rank_desc = |xs: &[i64]| -> Vec<usize> {
        xs.iter()
            .map(|x| xs.iter().filter(|y| *y > x).count())
            .collect()
    };
    let rank_asc = |xs: &[i64]| -> Vec<usize> {
        xs.iter()
            .map(|x| xs.iter().filter(|y| *y < x).count())
            .collect()
    };
    WeylElt::new(profile, rank_desc(c.eps()), rank_asc(c.delta()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atypicality {
    pub aty: usize,
    /// `Γ_λ`, reported for the distinguished Borel only.
    pub gamma: Option<Vec<Root>>,
}

/// `aty^b(λ)`: the maximal number of mutually orthogonal odd roots `α`
/// with `(λ + ρ^b, α) = 0`. Distinct odd roots `ε_i − δ_j`, `ε_k − δ_l`
/// are orthogonal iff `i ≠ k` and `j ≠ l`, so this is a maximum bipartite
/// matching.
pub fn atypicality(lambda: &Weight, b: &BorelElt) -> Result<Atypicality> {
    b.profile().check(&lambda.profile)?;
    let profile = lambda.profile;
    let shifted = lambda + &b.rho_b();
    let odd = odd_positive_roots(profile);
    let zero: Vec<Root> = odd
        .iter()
        .filter(|r| shifted.pairing_unchecked(&r.to_weight()) == 0)
        .copied()
        .collect();
    let edges: Vec<(usize, usize)> = zero.iter().map(|r| (r.i, r.j - profile.m())).collect();
    let aty = max_matching(profile.m(), profile.n(), &edges);
    Ok(Atypicality {
        aty,
        gamma: b.is_distinguished().then_some(zero),
    })
}

/// `Γ_λ = {β ∈ Δ₁^{(),+} : (λ+ρ, β) = 0}`.
pub fn gamma(lambda: &Weight) -> Vec<Root> {
    let c = encode(lambda);
    let m = lambda.profile.m();
    odd_positive_roots(lambda.profile)
        .into_iter()
        .filter(|r| c.values[r.i] == c.values[r.j])
        .inspect(|r| debug_assert!(r.j >= m))
        .collect()
}

fn max_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); left];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    fn augment(
        a: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                if owner[b].map_or(true, |o| augment(o, adj, seen, owner)) {
                    owner[b] = Some(a);
                    return true;
                }
            }
        }
        false
    }
    (0..left)
        .filter(|&a| augment(a, &adj, &mut vec![false; right], &mut owner))
        .count()
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// All `m!·n!` elements of `W`, rejecting groups above the default bound.
pub fn weyl_group(profile: RankProfile) -> Result<Vec<WeylElt>> {
    weyl_group_bounded(profile, DEFAULT_WEYL_BOUND)
}

pub fn weyl_group_bounded(profile: RankProfile, bound: u128) -> Result<Vec<WeylElt>> {
    let size = factorial(profile.m()) * factorial(profile.n());
    if size > bound {
        return Err(Error::BoundExceeded {
            what: "Weyl group order",
            size,
            bound,
        });
    }
    let perms = |k: usize| (0..k).permutations(k).collect::<Vec<_>>();
    let sigmas = perms(profile.m());
    let taus = perms(profile.n());
    Ok(sigmas
        .iter()
        .cartesian_product(&taus)
        .map(|(s, t)| WeylElt {
            profile,
            sigma: s.clone(),
            tau: t.clone(),
        })
        .collect())
}

/// `Σ_w x^{ℓ(w)}` computed as `[m]_x! · [n]_x!` without enumerating `W`.
pub fn poincare_polynomial(profile: RankProfile) -> Vec<u64> {
    let mut poly = vec![1u64];
    for k in (1..=profile.m()).chain(1..=profile.n()) {
        // multiply by 1 + x + … + x^{k-1}
        let mut next = vec![0u64; poly.len() + k - 1];
        for (d, c) in poly.iter().enumerate() {
            for e in 0..k {
                next[d + e] += c;
            }
        }
        poly = next;
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(m: usize, n: usize) -> RankProfile {
        RankProfile::new(m, n).unwrap()
    }

    fn from_coords(profile: RankProfile, eps: &[i64], del: &[i64]) -> Weight {
        decode(&Coords::from_blocks(profile, eps, del).unwrap())
    }

    #[test]
    fn pairing_on_basis() {
        let pr = p(1, 1);
        let e1 = Weight::epsilon(pr, 1);
        let d1 = Weight::delta(pr, 1);
        assert_eq!(e1.pairing(&e1).unwrap(), 1);
        assert_eq!(d1.pairing(&d1).unwrap(), -1);
        assert_eq!(e1.pairing(&d1).unwrap(), 0);
    }

    #[test]
    fn pairing_rejects_profile_mismatch() {
        let a = Weight::zero(p(1, 1));
        let b = Weight::zero(p(1, 2));
        assert!(matches!(a.pairing(&b), Err(Error::ProfileMismatch { .. })));
        assert!(RankProfile::new(0, 2).is_err());
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(p(2, 1)).coeffs(), &[0, -1, 1]);
        assert_eq!(rho(p(1, 1)).coeffs(), &[0, 0]);
    }

    #[test]
    fn rho_agrees_with_half_sums_up_to_ber() {
        for m in 1..=4 {
            for n in 1..=4 {
                let t = rho_normalization_offset(p(m, n)).expect("multiple of ber");
                // the difference works out to n·ber
                assert_eq!(t, Ratio::from_integer(n as i64));
            }
        }
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&Weight::zero(p(1, 1))).values(), &[0, 0]);
        assert_eq!(encode(&Weight::zero(p(2, 1))).values(), &[0, -1, -1]);
        let c = Coords::from_blocks(p(2, 1), &[3, 0], &[3]).unwrap();
        assert_eq!(encode(&decode(&c)), c);
    }

    #[test]
    fn dot_action_examples() {
        let pr = p(2, 1);
        let lambda = from_coords(pr, &[3, 0], &[5]);
        let s = WeylElt::reflection(&Root::new(pr, 0, 1).unwrap()).unwrap();
        let moved = dot(&s, &lambda).unwrap();
        assert_eq!(encode(&moved).values(), &[0, 3, 5]);
        assert_eq!(dot(&s, &moved).unwrap(), lambda);
        assert_eq!(dot(&WeylElt::identity(pr), &lambda).unwrap(), lambda);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&from_coords(p(2, 1), &[3, 0], &[3]));
        assert!(c.regular && c.dominant && !c.antidominant);
        let c = classify(&from_coords(p(2, 1), &[0, 3], &[3]));
        assert!(c.regular && c.antidominant);
        assert!(!classify(&from_coords(p(2, 2), &[1, 1], &[0, 0])).regular);
    }

    #[test]
    fn orbit_extreme_examples() {
        let pr = p(2, 1);
        let l = from_coords(pr, &[0, 3], &[3]);
        let ex = orbit_extremes(&l);
        assert_eq!(encode(&ex.dominant).values(), &[3, 0, 3]);
        let dom = ex.dominant.clone();
        assert_eq!(orbit_extremes(&dom).dominant, dom);
        let ex = orbit_extremes(&from_coords(p(2, 2), &[5, 2], &[2, 5]));
        assert_eq!(encode(&ex.antidominant).values(), &[2, 5, 5, 2]);
        let w = to_dominant(&l).unwrap();
        assert_eq!(dot(&w, &l).unwrap(), dom);
    }

    /// Brute force: the largest family of pairwise orthogonal odd roots
    /// (taken up to sign) pairing to zero with `λ + ρ^b`.
    fn brute_atypicality(lambda: &Weight, rho_b: &Weight) -> usize {
        let shifted = lambda + rho_b;
        let zero: Vec<Weight> = odd_positive_roots(lambda.profile())
            .iter()
            .map(Root::to_weight)
            .filter(|r| shifted.pairing(r).unwrap() == 0)
            .collect();
        (0..1u32 << zero.len())
            .filter(|mask| {
                let chosen: Vec<&Weight> = (0..zero.len())
                    .filter(|k| mask & (1 << k) != 0)
                    .map(|k| &zero[k])
                    .collect();
                chosen
                    .iter()
                    .tuple_combinations()
                    .all(|(a, b)| a.pairing(b).unwrap() == 0)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn atypicality_examples() {
        let d = |pr| BorelElt::distinguished(pr);
        let a = atypicality(&Weight::zero(p(1, 1)), &d(p(1, 1))).unwrap();
        assert_eq!(a.aty, 1);
        assert_eq!(a.gamma.unwrap().len(), 1);
        let l = from_coords(p(2, 1), &[3, 0], &[5]);
        let a = atypicality(&l, &d(p(2, 1))).unwrap();
        assert_eq!((a.aty, a.gamma.unwrap().len()), (0, 0));
        assert_eq!(brute_atypicality(&l, &rho(p(2, 1))), 0);
        let l = from_coords(p(2, 2), &[5, 2], &[5, 2]);
        let a = atypicality(&l, &d(p(2, 2))).unwrap();
        assert_eq!(a.aty, 2);
        let g: Vec<String> = a.gamma.unwrap().iter().map(|r| r.to_string()).collect();
        assert_eq!(g, ["e1-d1", "e2-d2"]);
        assert_eq!(brute_atypicality(&l, &rho(p(2, 2))), 2);
    }

    #[test]
    fn atypicality_matches_brute_force() {
        for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let pr = p(m, n);
            let b = BorelElt::distinguished(pr);
            for vals in itertools::repeat_n(-1..=1i64, m + n).multi_cartesian_product() {
                let l = decode(&Coords::new(pr, vals).unwrap());
                assert_eq!(
                    atypicality(&l, &b).unwrap().aty,
                    brute_atypicality(&l, &rho(pr))
                );
            }
        }
    }

    #[test]
    fn weyl_group_examples() {
        let w = weyl_group(p(1, 1)).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(WeylElt::longest(p(1, 1)).length(), 0);
        let lens: Vec<usize> = weyl_group(p(2, 1)).unwrap().iter().map(|w| w.length()).sorted().collect();
        assert_eq!(lens, [0, 1]);
        assert_eq!(weyl_group(p(2, 2)).unwrap().len(), 4);
        assert_eq!(WeylElt::longest(p(2, 2)).length(), 2);
        assert!(matches!(
            weyl_group_bounded(p(4, 4), 100),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn length_generating_function_matches_enumeration() {
        for (m, n) in [(1, 1), (2, 1), (3, 2), (3, 3), (4, 2)] {
            let pr = p(m, n);
            let poly = poincare_polynomial(pr);
            let mut counts = vec![0u64; poly.len()];
            for w in weyl_group(pr).unwrap() {
                counts[w.length()] += 1;
            }
            assert_eq!(counts, poly);
            assert_eq!(
                WeylElt::longest(pr).length(),
                m * (m - 1) / 2 + n * (n - 1) / 2
            );
        }
    }

    #[test]
    fn ber_orthogonal_to_roots_and_conversely() {
        for (m, n) in [(1, 1), (2, 1), (2, 3), (3, 3)] {
            let pr = p(m, n);
            let b = ber(pr);
            assert!(all_roots(pr).iter().all(|r| b.pairing(&r.to_weight()).unwrap() == 0));
            // the orthogonal complement of the roots within a small box is ℤ·ber
            for vals in itertools::repeat_n(-2..=2i64, m + n).multi_cartesian_product() {
                let w = Weight::new(pr, vals).unwrap();
                let orth = all_roots(pr).iter().all(|r| w.pairing(&r.to_weight()).unwrap() == 0);
                let t = w.coeffs()[0];
                assert_eq!(orth, w == t * &b);
            }
        }
    }

    #[test]
    fn even_and_distinguished_dot_actions_coincide() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)] {
            let pr = p(m, n);
            let group = weyl_group(pr).unwrap();
            let top = BorelElt::anti_distinguished(pr);
            for _ in 0..100 {
                let l = Weight::new(pr, (0..m + n).map(|_| rng.gen_range(-9..=9)).collect()).unwrap();
                let w = &group[rng.gen_range(0..group.len())];
                let a = dot(w, &l).unwrap();
                assert_eq!(a, dot_even(w, &l).unwrap());
                assert_eq!(a, dot_action(w, &l, &top).unwrap());
            }
        }
    }

    fn arb_case() -> impl Strategy<Value = (RankProfile, Vec<i64>, Vec<i64>, usize, usize)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| {
            let r = m + n;
            (
                Just(p(m, n)),
                proptest::collection::vec(-20i64..20, r),
                proptest::collection::vec(-20i64..20, r),
                0usize..36,
                0usize..36,
            )
        })
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_w_invariant((pr, x, y, wi, _) in arb_case()) {
            let x = Weight::new(pr, x).unwrap();
            let y = Weight::new(pr, y).unwrap();
            prop_assert_eq!(x.pairing(&y).unwrap(), y.pairing(&x).unwrap());
            let group = weyl_group(pr).unwrap();
            let w = &group[wi % group.len()];
            prop_assert_eq!(
                w.act(&x).unwrap().pairing(&w.act(&y).unwrap()).unwrap(),
                x.pairing(&y).unwrap()
            );
        }

        #[test]
        fn dot_action_is_a_group_action((pr, x, _, wi, vi) in arb_case()) {
            let x = Weight::new(pr, x).unwrap();
            let group = weyl_group(pr).unwrap();
            let (w, v) = (&group[wi % group.len()], &group[vi % group.len()]);
            for b in BorelElt::enumerate(pr).unwrap() {
                let lhs = dot_action(&w.compose(v), &x, &b).unwrap();
                let rhs = dot_action(w, &dot_action(v, &x, &b).unwrap(), &b).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn encode_intertwines_dot_action((pr, x, _, wi, _) in arb_case()) {
            let x = Weight::new(pr, x).unwrap();
            prop_assert_eq!(decode(&encode(&x)), x.clone());
            let group = weyl_group(pr).unwrap();
            let w = &group[wi % group.len()];
            let c = encode(&x);
            let moved = encode(&dot(w, &x).unwrap());
            let m = pr.m();
            for i in 0..m {
                prop_assert_eq!(moved.values()[w.sigma()[i]], c.values()[i]);
            }
            for j in 0..pr.n() {
                prop_assert_eq!(moved.values()[m + w.tau()[j]], c.values()[m + j]);
            }
        }
    }
}
