//! PBW computations in Verma modules `M^b(λ)` over the rationals.
//!
//! A vector is a combination of PBW monomials `∏ E_{β_k}^{e_k} v` over the
//! `b`-negative roots in a fixed order (even roots first, then odd roots,
//! each lexicographic in `(i, j)`), with odd exponents at most one.
//! Generators act by straightening: a generator is moved right past the
//! leading factor with the supercommutator until it reaches `v`, where
//! raising operators vanish and the Cartan acts by the weight.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::borels::BorelElt;
use crate::charring::DepthFunctional;
use crate::error::{Error, Result};
use crate::linalg::{self, SparseEchelon, SparseVec};
use crate::rootdata::{
    dot, encode, odd_positive_roots, RankProfile, Root, Weight,
    WeylElt,
};

/// Default bound on the number of PBW monomials in a window.
pub const DEFAULT_MAX_CELLS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl Limits {
    /// Reads `SUPERCHAR_MAX_CELLS`, falling back to the default.
    pub fn from_env() -> Self {
        let max_cells = std::env::var("SUPERCHAR_MAX_CELLS")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_CELLS);
        Self { max_cells }
    }
}

/// Matrix unit `E_{i+1, j+1}` (0-based positions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    profile: RankProfile,
    i: usize,
    j: usize,
}

impl Gen {
    pub fn new(profile: RankProfile, i: usize, j: usize) -> Result<Self> {
        let r = profile.rank();
        if i >= r || j >= r {
            return Err(Error::Precondition(format!("E_({},{}) outside gl({}|{})", i + 1, j + 1, profile.m(), profile.n())));
        }
        Ok(Self { profile, i, j })
    }

    /// The root vector `E_α` of a root.
    pub fn root_vector(alpha: &Root) -> Self {
        Self {
            profile: alpha.profile(),
            i: alpha.i(),
            j: alpha.j(),
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn is_cartan(&self) -> bool {
        self.i == self.j
    }

    pub fn is_odd(&self) -> bool {
        self.profile.is_even_index(self.i) != self.profile.is_even_index(self.j)
    }

    pub fn root(&self) -> Option<Root> {
        (!self.is_cartan()).then(|| Root::new(self.profile, self.i, self.j).unwrap())
    }

    /// All `(m+n)²` matrix units.
    pub fn all(profile: RankProfile) -> Vec<Gen> {
        let r = profile.rank();
        (0..r)
            .flat_map(|i| (0..r).map(move |j| Gen { profile, i, j }))
            .collect()
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{},{}", self.i + 1, self.j + 1)
    }
}

/// `[E_ij, E_kl] = δ_jk E_il − (−1)^{|E_ij||E_kl|} δ_li E_kj`.
pub fn supercommutator(a: Gen, b: Gen) -> Result<Vec<(Gen, i64)>> {
    a.profile.check(&b.profile)?;
    let mut out: BTreeMap<Gen, i64> = BTreeMap::new();
    if a.j == b.i {
        *out.entry(Gen { profile: a.profile, i: a.i, j: b.j }).or_default() += 1;
    }
    if b.j == a.i {
        let sign = if a.is_odd() && b.is_odd() { -1 } else { 1 };
        *out.entry(Gen { profile: a.profile, i: b.i, j: a.j }).or_default() -= sign;
    }
    Ok(out.into_iter().filter(|(_, c)| *c != 0).collect())
}

type Terms = Vec<(Vec<u32>, BigInt)>;

/// A homogeneous vector of some Verma module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaElement {
    weight: Weight,
    terms: SparseVec<Vec<u32>>,
}

impl VermaElement {
    pub fn zero(weight: Weight) -> Self {
        Self {
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(weight: Weight, terms: SparseVec<Vec<u32>>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { weight, terms }
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn terms(&self) -> &SparseVec<Vec<u32>> {
        &self.terms
    }

    pub fn into_terms(self) -> SparseVec<Vec<u32>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::Inhomogeneous);
        }
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += v;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Ok(Self {
            weight: self.weight.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.weight.clone());
        }
        Self {
            weight: self.weight.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Ratio `other / self` if the two are proportional and non-zero.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        linalg::proportional(&self.terms, &other.terms).flatten()
    }
}

/// `M^b(λ)` with a memoized straightening table.
pub struct VermaModule {
    borel: BorelElt,
    lambda: Weight,
    neg: Vec<Root>,
    index: HashMap<Root, usize>,
    frame_top: Weight,
    xi: DepthFunctional,
    cache: RefCell<HashMap<(Gen, Vec<u32>), Rc<Terms>>>,
}

impl fmt::Debug for VermaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VermaModule")
            .field("borel", &self.borel.to_string())
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl VermaModule {
    pub fn new(borel: &BorelElt, lambda: &Weight) -> Result<Self> {
        borel.profile().check(&lambda.profile())?;
        let profile = lambda.profile();
        let negs: Vec<Root> = borel.negative_system();
        let (mut even, mut odd): (Vec<Root>, Vec<Root>) = negs.into_iter().partition(|r| !r.is_odd());
        even.sort();
        odd.sort();
        let neg: Vec<Root> = even.into_iter().chain(odd).collect();
        let index = neg.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let mut frame_top = lambda.clone();
        for r in &neg {
            if r.is_distinguished_positive() {
                frame_top = &frame_top + &r.to_weight();
            }
        }
        Ok(Self {
            borel: borel.clone(),
            lambda: lambda.clone(),
            neg,
            index,
            frame_top,
            xi: DepthFunctional::new(profile),
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn profile(&self) -> RankProfile {
        self.lambda.profile()
    }

    pub fn borel(&self) -> &BorelElt {
        &self.borel
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.lambda
    }

    /// The PBW order on `Δ^{b,−}`.
    pub fn negative_roots(&self) -> &[Root] {
        &self.neg
    }

    /// Top of the distinguished-cone frame: the highest weight in the
    /// distinguished order among the weights of the module.
    pub fn frame_top(&self) -> &Weight {
        &self.frame_top
    }

    pub fn depth_of(&self, nu: &Weight) -> i64 {
        self.xi.eval(self.frame_top.coeffs()) - self.xi.eval(nu.coeffs())
    }

    pub fn monomial_weight(&self, exps: &[u32]) -> Weight {
        let mut w = self.lambda.clone();
        for (r, &e) in self.neg.iter().zip(exps) {
            if e > 0 {
                w = &w + &(e as i64 * &r.to_weight());
            }
        }
        w
    }

    pub fn format_monomial(&self, exps: &[u32]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (r, &e) in self.neg.iter().zip(exps) {
            if e > 0 {
                let g = Gen::root_vector(r);
                parts.push(if e == 1 { g.to_string() } else { format!("{g}^{e}") });
            }
        }
        parts.push("v".into());
        parts.join(" ")
    }

    pub fn format_element(&self, v: &VermaElement) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.terms
            .iter()
            .map(|(k, c)| format!("({c}) {}", self.format_monomial(k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn highest_vector(&self) -> VermaElement {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; self.neg.len()], BigRational::one());
        VermaElement {
            weight: self.lambda.clone(),
            terms,
        }
    }

    /// All PBW monomials of depth at most `depth` (measured from the frame
    /// top), grouped by weight.
    pub fn window(&self, depth: u32, limits: &Limits) -> Result<BTreeMap<Weight, Vec<Vec<u32>>>> {
        let mut out: BTreeMap<Weight, Vec<Vec<u32>>> = BTreeMap::new();
        let mut count = 0usize;
        self.enumerate(depth as i64, None, &mut |exps| {
            count += 1;
            if count > limits.max_cells {
                return Err(Error::BoundExceeded {
                    what: "PBW monomials in window",
                    size: count as u128,
                    bound: limits.max_cells as u128,
                });
            }
            out.entry(self.monomial_weight(&exps)).or_default().push(exps);
            Ok(())
        })?;
        for v in out.values_mut() {
            v.sort();
        }
        Ok(out)
    }

    /// PBW monomials of weight `nu`.
    pub fn weight_space_basis(&self, nu: &Weight, cap: u32) -> Result<Vec<Vec<u32>>> {
        self.profile().check(&nu.profile())?;
        let d = self.depth_of(nu);
        if d > cap as i64 {
            return Err(Error::BeyondDepth {
                weight: nu.coeffs().to_vec(),
                depth: cap,
            });
        }
        let mut out = Vec::new();
        if d < 0 {
            return Ok(out);
        }
        self.enumerate(d, Some(nu), &mut |exps| {
            out.push(exps);
            Ok(())
        })?;
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        budget: i64,
        target: Option<&Weight>,
        sink: &mut dyn FnMut(Vec<u32>) -> Result<()>,
    ) -> Result<()> {
        let top_xi = self.xi.eval(self.frame_top.coeffs());
        let odd_idx: Vec<usize> = (0..self.neg.len()).filter(|&k| self.neg[k].is_odd()).collect();
        let even_idx: Vec<usize> = (0..self.neg.len()).filter(|&k| !self.neg[k].is_odd()).collect();
        let cost: Vec<i64> = self.neg.iter().map(|r| -self.xi.eval(r.to_weight().coeffs())).collect();
        for mask in 0u64..(1u64 << odd_idx.len()) {
            let mut exps = vec![0u32; self.neg.len()];
            for (b, &k) in odd_idx.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    exps[k] = 1;
                }
            }
            let depth = top_xi - self.xi.eval(self.monomial_weight(&exps).coeffs());
            if depth > budget {
                continue;
            }
            self.enumerate_even(&even_idx, &cost, 0, budget - depth, &mut exps, target, sink)?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_even(
        &self,
        even_idx: &[usize],
        cost: &[i64],
        pos: usize,
        budget: i64,
        exps: &mut Vec<u32>,
        target: Option<&Weight>,
        sink: &mut dyn FnMut(Vec<u32>) -> Result<()>,
    ) -> Result<()> {
        if pos == even_idx.len() {
            let keep = match target {
                Some(t) => budget == 0 && &self.monomial_weight(exps) == t,
                None => true,
            };
            if keep {
                sink(exps.clone())?;
            }
            return Ok(());
        }
        let k = even_idx[pos];
        let mut e = 0;
        while e as i64 * cost[k] <= budget {
            exps[k] = e;
            self.enumerate_even(even_idx, cost, pos + 1, budget - e as i64 * cost[k], exps, target, sink)?;
            e += 1;
        }
        exps[k] = 0;
        Ok(())
    }

    fn act_mono(&self, x: Gen, exps: &[u32]) -> Rc<Terms> {
        let key = (x, exps.to_vec());
        if let Some(hit) = self.cache.borrow().get(&key) {
            return hit.clone();
        }
        let result = Rc::new(self.straighten(x, exps));
        self.cache.borrow_mut().insert(key, result.clone());
        result
    }

    fn straighten(&self, x: Gen, exps: &[u32]) -> Terms {
        if x.is_cartan() {
            let c = self.monomial_weight(exps).coeffs()[x.i];
            return if c == 0 {
                vec![]
            } else {
                vec![(exps.to_vec(), BigInt::from(c))]
            };
        }
        let xr = x.root().unwrap();
        let lead = exps.iter().position(|&e| e > 0);
        let slot = self.index.get(&xr).copied();
        match (slot, lead) {
            (None, None) => return vec![],
            (Some(k), None) => {
                let mut e = exps.to_vec();
                e[k] = 1;
                return vec![(e, BigInt::one())];
            }
            (Some(k), Some(l)) if k < l || (k == l && !x.is_odd()) => {
                let mut e = exps.to_vec();
                e[k] += 1;
                return vec![(e, BigInt::one())];
            }
            // odd root vectors square to zero
            (Some(k), Some(l)) if k == l => return vec![],
            _ => {}
        }
        let l = lead.unwrap();
        let f = Gen::root_vector(&self.neg[l]);
        let mut rest = exps.to_vec();
        rest[l] -= 1;
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        // x f rest = [x, f] rest ± f (x rest)
        for (g, c) in supercommutator(x, f).unwrap() {
            for (mono, v) in self.act_mono(g, &rest).iter() {
                *acc.entry(mono.clone()).or_default() += v * c;
            }
        }
        let sign = if x.is_odd() && f.is_odd() { -1 } else { 1 };
        let inner = self.act_mono(x, &rest);
        for (mono, v) in inner.iter() {
            for (mono2, v2) in self.act_mono(f, mono).iter() {
                *acc.entry(mono2.clone()).or_default() += v * v2 * sign;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn act(&self, x: Gen, v: &VermaElement) -> Result<VermaElement> {
        self.profile().check(&x.profile)?;
        self.profile().check(&v.weight.profile())?;
        let weight = match x.root() {
            Some(r) => &v.weight + &r.to_weight(),
            None => v.weight.clone(),
        };
        let mut acc: SparseVec<Vec<u32>> = BTreeMap::new();
        for (mono, c) in &v.terms {
            for (m2, c2) in self.act_mono(x, mono).iter() {
                let e = acc.entry(m2.clone()).or_insert_with(BigRational::zero);
                *e += c * BigRational::from_integer(c2.clone());
            }
        }
        Ok(VermaElement::from_terms(weight, acc))
    }

    /// `x_1 x_2 ⋯ x_k · v` (the rightmost factor acts first).
    pub fn act_word(&self, word: &[Gen], v: &VermaElement) -> Result<VermaElement> {
        let mut out = v.clone();
        for &x in word.iter().rev() {
            out = self.act(x, &out)?;
        }
        Ok(out)
    }

    /// The operator of a PBW monomial (exponents in this module's order).
    pub fn monomial_word(&self, exps: &[u32]) -> Vec<Gen> {
        let mut word = Vec::new();
        for (r, &e) in self.neg.iter().zip(exps) {
            for _ in 0..e {
                word.push(Gen::root_vector(r));
            }
        }
        word
    }

    /// Simple raising generators of a Borel.
    pub fn raising_simples(b: &BorelElt) -> Vec<Gen> {
        b.simple_roots().iter().map(Gen::root_vector).collect()
    }

    /// Whether every simple raising generator of `b` kills `v`.
    pub fn is_primitive(&self, v: &VermaElement, b: &BorelElt) -> Result<bool> {
        for g in Self::raising_simples(b) {
            if !self.act(g, v)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `E_{−α}^k v_λ^b` with `k = ⟨λ + ρ^b, α^∨⟩`, for an even simple root
    /// `α` of `b`. The result is checked to be primitive.
    pub fn singular_vector_even(&self, alpha: &Root) -> Result<VermaElement> {
        let b = &self.borel;
        if alpha.is_odd() || !b.simple_roots().contains(alpha) {
            return Err(Error::NotEvenSimple(alpha.to_string()));
        }
        let k = alpha.coroot_pairing(&(&self.lambda + &b.rho_b()))?;
        if k <= 0 {
            return Err(Error::NotPositiveInteger(format!("<λ+ρ^b, {alpha}^v> = {k}")));
        }
        let lower = Gen::root_vector(&alpha.negate());
        let v = self.act_word(&vec![lower; k as usize], &self.highest_vector())?;
        if v.is_zero() || !self.is_primitive(&v, b)? {
            return Err(Error::Inconsistent(format!(
                "E_-{alpha}^{k} v is not a non-zero primitive vector"
            )));
        }
        Ok(v)
    }

    /// `dim {v ∈ M_μ : n^{b,+} v = 0}`.
    pub fn primitive_space_dim(&self, mu: &Weight, b: &BorelElt, cap: u32) -> Result<usize> {
        b.profile().check(&mu.profile())?;
        let basis = self.weight_space_basis(mu, cap)?;
        let gens = Self::raising_simples(b);
        let mut columns = Vec::with_capacity(basis.len());
        for exps in &basis {
            let mut e = BTreeMap::new();
            e.insert(exps.clone(), BigRational::one());
            let u = VermaElement::from_terms(mu.clone(), e);
            let mut col: SparseVec<(usize, Vec<u32>)> = BTreeMap::new();
            for (gi, g) in gens.iter().enumerate() {
                for (k, c) in self.act(*g, &u)?.terms {
                    col.insert((gi, k), c);
                }
            }
            columns.push(col);
        }
        Ok(basis.len() - linalg::rank(columns))
    }
}

/// `2ρ₁ = Σ_{Δ₁^{(),+}} α`.
pub fn two_rho1(profile: RankProfile) -> Weight {
    odd_positive_roots(profile)
        .iter()
        .fold(Weight::zero(profile), |acc, r| &acc + &r.to_weight())
}

/// `M^{(n^m)}(λ − 2ρ₁)`, the module the narrow Verma module sits in.
pub fn narrow_ambient(lambda: &Weight) -> Result<VermaModule> {
    let profile = lambda.profile();
    VermaModule::new(&BorelElt::anti_distinguished(profile), &(lambda - &two_rho1(profile)))
}

/// `E_{g₁} v` with the factors of `E_{g₁}` multiplied left to right in `order`.
pub fn apply_e_g1(ambient: &VermaModule, v: &VermaElement, order: &[Root]) -> Result<VermaElement> {
    let word: Vec<Gen> = order.iter().map(Gen::root_vector).collect();
    ambient.act_word(&word, v)
}

/// `E_{g₁} · v^{(n^m)}_{λ−2ρ₁}` with lexicographic factor order.
pub fn e_g1_apply(lambda: &Weight) -> Result<(VermaModule, VermaElement)> {
    let ambient = narrow_ambient(lambda)?;
    let v = apply_e_g1(&ambient, &ambient.highest_vector(), &odd_positive_roots(lambda.profile()))?;
    if v.is_zero() {
        return Err(Error::Inconsistent("E_g1 v vanished".into()));
    }
    Ok((ambient, v))
}

/// Random factor orders give pairwise proportional vectors.
pub fn eg1_order_independence(lambda: &Weight, trials: usize, seed: u64) -> Result<bool> {
    let (ambient, reference) = e_g1_apply(lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = odd_positive_roots(lambda.profile());
    for _ in 0..trials {
        order.shuffle(&mut rng);
        let v = apply_e_g1(&ambient, &ambient.highest_vector(), &order)?;
        if reference.ratio_to(&v).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Even negative simple generators of the distinguished Borel.
fn even_lowering_simples(profile: RankProfile) -> Vec<Gen> {
    BorelElt::distinguished(profile)
        .simple_roots()
        .iter()
        .filter(|r| !r.is_odd())
        .map(|r| Gen::root_vector(&r.negate()))
        .collect()
}

/// For each even negative simple `x`, `x E_{g₁} u = c E_{g₁} x u` with one
/// scalar `c` over all PBW basis vectors `u` of depth at most `depth`.
pub fn eg1_centralizes(lambda: &Weight, depth: u32, limits: &Limits) -> Result<bool> {
    let profile = lambda.profile();
    let ambient = narrow_ambient(lambda)?;
    let order = odd_positive_roots(profile);
    let window = ambient.window(depth, limits)?;
    for x in even_lowering_simples(profile) {
        let mut scalar: Option<BigRational> = None;
        for (nu, monos) in &window {
            for exps in monos {
                let mut t = BTreeMap::new();
                t.insert(exps.clone(), BigRational::one());
                let u = VermaElement::from_terms(nu.clone(), t);
                let lhs = ambient.act(x, &apply_e_g1(&ambient, &u, &order)?)?;
                let rhs = apply_e_g1(&ambient, &ambient.act(x, &u)?, &order)?;
                match (lhs.is_zero(), rhs.is_zero()) {
                    (true, true) => continue,
                    (false, false) => {}
                    _ => return Ok(false),
                }
                let Some(c) = rhs.ratio_to(&lhs) else {
                    return Ok(false);
                };
                match &scalar {
                    None => scalar = Some(c),
                    Some(s) if *s == c => {}
                    Some(_) => return Ok(false),
                }
            }
        }
    }
    Ok(true)
}

/// Weight spaces of `N^{()}(λ) = U(g) E_{g₁} v` inside the narrow ambient,
/// on the window of depth `depth` below `λ`.
pub struct NarrowImage {
    pub lambda: Weight,
    pub depth: u32,
    pub ambient: VermaModule,
    pub spaces: BTreeMap<Weight, SparseEchelon<Vec<u32>>>,
    /// Every weight of the ambient module in the window.
    pub window: BTreeMap<Weight, usize>,
}

impl NarrowImage {
    pub fn dims(&self) -> BTreeMap<Weight, usize> {
        self.window
            .keys()
            .map(|w| (w.clone(), self.spaces.get(w).map_or(0, |e| e.rank())))
            .collect()
    }

    pub fn basis(&self, nu: &Weight) -> Vec<VermaElement> {
        self.spaces
            .get(nu)
            .map(|e| {
                e.rows()
                    .iter()
                    .map(|r| VermaElement::from_terms(nu.clone(), r.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Builds the narrow image depth by depth. `E_{g₁} v` is checked to be
/// primitive for the distinguished Borel, so the image is spanned by
/// lowering words and each depth only needs the one above it.
pub fn narrow_image(lambda: &Weight, depth: u32, limits: &Limits) -> Result<NarrowImage> {
    let profile = lambda.profile();
    let (ambient, seed) = e_g1_apply(lambda)?;
    let distinguished = BorelElt::distinguished(profile);
    if !ambient.is_primitive(&seed, &distinguished)? {
        return Err(Error::Inconsistent("E_g1 v is not primitive".into()));
    }
    let window: BTreeMap<Weight, usize> = ambient
        .window(depth, limits)?
        .into_iter()
        .map(|(w, v)| (w, v.len()))
        .collect();
    let lowering: Vec<Gen> = distinguished
        .simple_roots()
        .iter()
        .map(|r| Gen::root_vector(&r.negate()))
        .collect();
    let mut spaces: BTreeMap<Weight, SparseEchelon<Vec<u32>>> = BTreeMap::new();
    spaces.entry(lambda.clone()).or_default().insert(seed.into_terms());
    for d in 0..depth as i64 {
        let level: Vec<Weight> = spaces
            .keys()
            .filter(|w| ambient.depth_of(w) == d)
            .cloned()
            .collect();
        for nu in level {
            let rows: Vec<SparseVec<Vec<u32>>> = spaces[&nu].rows().to_vec();
            for row in rows {
                let v = VermaElement::from_terms(nu.clone(), row);
                for &f in &lowering {
                    let img = ambient.act(f, &v)?;
                    if !img.is_zero() {
                        let w = img.weight().clone();
                        spaces.entry(w).or_default().insert(img.into_terms());
                    }
                }
            }
        }
    }
    Ok(NarrowImage {
        lambda: lambda.clone(),
        depth,
        ambient,
        spaces,
        window,
    })
}

pub fn narrow_image_dims(lambda: &Weight, depth: u32) -> Result<BTreeMap<Weight, usize>> {
    Ok(narrow_image(lambda, depth, &Limits::from_env())?.dims())
}

/// The even simple root of the distinguished Borel whose reflection is `w`.
fn simple_reflection_root(w: &WeylElt) -> Option<Root> {
    BorelElt::distinguished(w.profile())
        .simple_roots()
        .into_iter()
        .filter(|r| !r.is_odd())
        .find(|r| WeylElt::reflection(r).map_or(false, |s| &s == w))
}

/// The embedding `M^{(n^m)}(s·λ − 2ρ₁) → M^{(n^m)}(λ − 2ρ₁)` for a simple
/// reflection `s = s_α`, given by the image of the highest weight vector.
pub fn ambient_embedding(ambient: &VermaModule, alpha: &Root) -> Result<VermaElement> {
    ambient.singular_vector_even(alpha)
}

/// Both ways around the square from `M^{()}(w·λ)` to `M^{(n^m)}(λ − 2ρ₁)`
/// agree up to one scalar on the PBW window of depth `depth`.
pub fn bgg_square_check(lambda: &Weight, w: &WeylElt, depth: u32, limits: &Limits) -> Result<bool> {
    let profile = lambda.profile();
    if w == &WeylElt::identity(profile) {
        return Ok(true);
    }
    let Some(alpha) = simple_reflection_root(w) else {
        return Err(Error::UnsupportedProfile(profile));
    };
    let ambient = narrow_ambient(lambda)?;
    let order = odd_positive_roots(profile);
    let k = alpha.coroot_pairing(&(lambda + &crate::rootdata::rho(profile)))?;
    if k <= 0 {
        return Err(Error::NotPositiveInteger(format!("<λ+ρ, {alpha}^v> = {k}")));
    }
    // embed, then E_g1
    let s = ambient_embedding(&ambient, &alpha)?;
    let first = apply_e_g1(&ambient, &s, &order)?;
    // E_g1, then the even embedding on the distinguished side
    let lower = vec![Gen::root_vector(&alpha.negate()); k as usize];
    let top = apply_e_g1(&ambient, &ambient.highest_vector(), &order)?;
    let second = ambient.act_word(&lower, &top)?;
    let source = VermaModule::new(&BorelElt::distinguished(profile), &dot(w, lambda)?)?;
    let mut scalar: Option<BigRational> = None;
    for monos in source.window(depth, limits)?.values() {
        for exps in monos {
            let word = source.monomial_word(exps);
            let a = ambient.act_word(&word, &first)?;
            let b = ambient.act_word(&word, &second)?;
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let Some(c) = a.ratio_to(&b) else {
                return Ok(false);
            };
            match &scalar {
                None => scalar = Some(c),
                Some(s) if *s == c => {}
                Some(_) => return Ok(false),
            }
        }
    }
    Ok(scalar.is_some())
}

/// Rank data of `N^{()}(s·λ) → N^{()}(λ)` at one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapRank {
    pub weight: Weight,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    /// The image lies inside `N^{()}(λ)`.
    pub lands_in_target: bool,
}

/// Per-weight ranks of the map `N^{()}(s_α·λ) → N^{()}(λ)` induced by the
/// even embedding of the narrow ambients.
pub fn narrow_map_ranks(lambda: &Weight, alpha: &Root, depth: u32, limits: &Limits) -> Result<Vec<MapRank>> {
    let profile = lambda.profile();
    let w = WeylElt::reflection(alpha)?;
    let target = narrow_image(lambda, depth, limits)?;
    let s_lambda = dot(&w, lambda)?;
    let offset = target.ambient.depth_of(&s_lambda);
    if offset < 0 {
        return Err(Error::Precondition(format!("{} is not below λ", encode(&s_lambda))));
    }
    let source_depth = (depth as i64 - offset).max(0) as u32;
    let source = narrow_image(&s_lambda, source_depth, limits)?;
    let embedding = ambient_embedding(&target.ambient, alpha)?;
    let mut out = Vec::new();
    for (nu, _) in &target.window {
        let target_dim = target.spaces.get(nu).map_or(0, |e| e.rank());
        let in_source = offset <= depth as i64 && source.window.contains_key(nu);
        let source_basis = if in_source { source.basis(nu) } else { vec![] };
        let mut images = SparseEchelon::new();
        let mut lands = true;
        for x in &source_basis {
            let mut img = VermaElement::zero(nu.clone());
            for (exps, c) in x.terms() {
                let word = source.ambient.monomial_word(exps);
                img = img.add(&target.ambient.act_word(&word, &embedding)?.scale(c))?;
            }
            if let Some(space) = target.spaces.get(nu) {
                lands &= space.contains(img.terms());
            } else {
                lands &= img.is_zero();
            }
            images.insert(img.into_terms());
        }
        out.push(MapRank {
            weight: nu.clone(),
            source_dim: source_basis.len(),
            target_dim,
            rank: images.rank(),
            lands_in_target: lands,
        });
    }
    debug_assert!(out.iter().all(|r| r.weight.profile() == profile));
    Ok(out)
}

/// Absolute value of the leading coefficient, for normalization checks.
pub fn leading_abs(v: &VermaElement) -> Option<BigRational> {
    v.terms.values().next().map(|c| c.abs())
}
