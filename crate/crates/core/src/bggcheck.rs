//! End-to-end checks of the narrow BGG picture: Euler characteristics,
//! Verma characters across Borels, restriction to the even part and
//! rank-level exactness in the smallest ranks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::borels::BorelElt;
use crate::charring::{
    self, char_narrow, char_simple_td, char_verma, even_verma_subset_sum, Discrepancy, FormalChar,
};
use crate::diagrams::{is_g1_generic, GenericityMode};
use crate::error::{Error, Result};
use crate::rootdata::{
    classify, decode, dot, encode, even_positive_roots, odd_positive_roots, poincare_polynomial,
    Coords, RankProfile, Weight,
};
use crate::vermacalc::{narrow_image, narrow_map_ranks, Limits, MapRank};

/// Printed with every report that depends on the full complex.
pub const SCOPE_NOTE: &str =
    "exactness of the narrow BGG complex is checked at rank level only when |W| = 2; otherwise only its Euler characteristic is checked";

/// `{"check", "profile", "lambda_coords", "depth", "pass", "details"}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub profile: [usize; 2],
    pub lambda_coords: Vec<i64>,
    pub depth: u32,
    pub pass: bool,
    pub details: Value,
}

impl Report {
    pub fn new(check: &str, lambda: &Weight, depth: u32, pass: bool, details: Value) -> Self {
        let p = lambda.profile();
        Self {
            check: check.to_string(),
            profile: [p.m(), p.n()],
            lambda_coords: encode(lambda).values().to_vec(),
            depth,
            pass,
            details,
        }
    }

    pub fn text_line(&self) -> String {
        format!(
            "{} {} gl({}|{}) coords {:?} depth {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.profile[0],
            self.profile[1],
            self.lambda_coords,
            self.depth
        )
    }
}

fn require_generic_dominant(lambda: &Weight) -> Result<()> {
    if !classify(lambda).dominant {
        return Err(Error::NotDominant(encode(lambda).to_string()));
    }
    if !is_g1_generic(lambda, GenericityMode::Fast)? {
        return Err(Error::Precondition(format!(
            "{} is not g-1-generic",
            encode(lambda)
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerReport {
    pub lambda: Weight,
    pub depth: u32,
    /// `Σ_w (−1)^{ℓ(w)} ch N^{()}(w·λ)`.
    pub lhs: FormalChar,
    /// `ch L^{()}(λ)`.
    pub rhs: FormalChar,
    pub equal: bool,
    pub first_discrepancy: Option<Discrepancy>,
}

impl EulerReport {
    pub fn to_report(&self) -> Report {
        Report::new(
            "euler",
            &self.lambda,
            self.depth,
            self.equal,
            json!({
                "terms_compared": self.rhs.len().max(self.lhs.len()),
                "first_discrepancy": self.first_discrepancy,
                "scope": SCOPE_NOTE,
            }),
        )
    }
}

/// Alternating sum of narrow Verma characters over `W · λ`.
pub fn narrow_euler_characteristic(lambda: &Weight, depth: u32) -> Result<FormalChar> {
    charring::weyl_sum(lambda, depth, |w| dot(w, lambda), |_, moved, d| {
        Ok(char_narrow(moved, d)?.series)
    })
}

pub fn euler_check(lambda: &Weight, depth: u32) -> Result<EulerReport> {
    require_generic_dominant(lambda)?;
    let lhs = narrow_euler_characteristic(lambda, depth)?;
    let rhs = char_simple_td(lambda, depth)?;
    let first_discrepancy = lhs.first_difference(&rhs)?;
    Ok(EulerReport {
        lambda: lambda.clone(),
        depth,
        equal: first_discrepancy.is_none(),
        lhs,
        rhs,
        first_discrepancy,
    })
}

/// Number of Weyl group elements of each length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexShape {
    pub ranks_by_degree: Vec<u64>,
}

pub fn complex_shape(profile: RankProfile) -> ComplexShape {
    ComplexShape {
        ranks_by_degree: poincare_polynomial(profile),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma52Report {
    pub profile: [usize; 2],
    pub depth: u32,
    pub weights: Vec<Vec<i64>>,
    pub pairs_checked: usize,
    pub equality_failures: Vec<String>,
    pub mismatches_checked: usize,
    pub mismatch_failures: Vec<String>,
    pub pass: bool,
}

impl Lemma52Report {
    pub fn to_report(&self, lambda: &Weight) -> Report {
        Report::new(
            "lemma52",
            lambda,
            self.depth,
            self.pass,
            serde_json::to_value(self).expect("report serializes"),
        )
    }
}

fn random_weight(profile: RankProfile, rng: &mut ChaCha8Rng, range: i64) -> Weight {
    Weight::new(
        profile,
        (0..profile.rank()).map(|_| rng.gen_range(-range..=range)).collect(),
    )
    .unwrap()
}

fn differs(a: &FormalChar, b: &FormalChar) -> Result<bool> {
    match a.first_difference(b) {
        Ok(d) => Ok(d.is_some()),
        Err(Error::IncomparableTops(..)) => Ok(true),
        Err(e) => Err(e),
    }
}

/// `ch M^b(λ−ρ^b)` agrees for all ordered pairs of Borels, with `e^{λ−ρ^b}`
/// at coefficient one in every `ch M^{b'}(λ−ρ^{b'})` when within depth, on `trials` random `λ`; and
/// `mismatches` shifted pairs `λ' ≠ λ` give different characters.
pub fn lemma52_sweep(profile: RankProfile, trials: usize, mismatches: usize, depth: u32, seed: u64) -> Result<Lemma52Report> {
    let borels = BorelElt::enumerate(profile)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<Weight> = (0..trials).map(|_| random_weight(profile, &mut rng, 4)).collect();
    let mut equality_failures = Vec::new();
    let mut pairs_checked = 0;
    for lambda in &weights {
        let chars: Vec<FormalChar> = borels
            .par_iter()
            .map(|b| char_verma(b, &(lambda - &b.rho_b()), depth))
            .collect::<Result<_>>()?;
        for (i, b) in borels.iter().enumerate() {
            for (j, b2) in borels.iter().enumerate() {
                pairs_checked += 1;
                let top = lambda - &b.rho_b();
                // the b-highest weight may sit deeper than the window
                let lead_ok = !chars[j].knows(top.coeffs()) || chars[j].coeff(&top)? == BigInt::from(1);
                let ok = lead_ok && !differs(&chars[i], &chars[j])?;
                if !ok {
                    equality_failures.push(format!("{b} vs {b2} at {}", encode(lambda)));
                }
            }
        }
    }
    let mut mismatch_failures = Vec::new();
    for _ in 0..mismatches {
        let lambda = &match weights.len() {
            0 => random_weight(profile, &mut rng, 4),
            k => weights[rng.gen_range(0..k)].clone(),
        };
        let b = &borels[rng.gen_range(0..borels.len())];
        let b2 = &borels[rng.gen_range(0..borels.len())];
        let shift = loop {
            let s = random_weight(profile, &mut rng, 1);
            if !s.is_zero() {
                break s;
            }
        };
        let other = lambda + &shift;
        let x = char_verma(b, &(lambda - &b.rho_b()), depth)?;
        let y = char_verma(b2, &(&other - &b2.rho_b()), depth)?;
        if !differs(&x, &y)? {
            mismatch_failures.push(format!("{b} at {} vs {b2} at {}", encode(lambda), encode(&other)));
        }
    }
    Ok(Lemma52Report {
        profile: [profile.m(), profile.n()],
        depth,
        weights: weights.iter().map(|w| w.coeffs().to_vec()).collect(),
        pairs_checked,
        pass: equality_failures.is_empty() && mismatch_failures.is_empty(),
        equality_failures,
        mismatches_checked: mismatches,
        mismatch_failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionReport {
    pub lambda: Weight,
    pub depth: u32,
    pub summands: usize,
    pub first_discrepancy: Option<Discrepancy>,
    pub pass: bool,
}

impl RestrictionReport {
    pub fn to_report(&self) -> Report {
        Report::new(
            "restriction",
            &self.lambda,
            self.depth,
            self.pass,
            json!({ "summands": self.summands, "first_discrepancy": self.first_discrepancy }),
        )
    }
}

/// `ch N^{()}(λ) = Σ_{S ⊆ Δ₁^{(),+}∖Γ_λ} ch M₀(λ − Σ_S α)`.
pub fn restriction_check(lambda: &Weight, depth: u32) -> Result<RestrictionReport> {
    if !is_g1_generic(lambda, GenericityMode::Fast)? {
        return Err(Error::Precondition(format!("{} is not g-1-generic", encode(lambda))));
    }
    let gamma = crate::rootdata::gamma(lambda);
    let rest: Vec<_> = odd_positive_roots(lambda.profile())
        .into_iter()
        .filter(|r| !gamma.contains(r))
        .collect();
    let lhs = char_narrow(lambda, depth)?.series;
    let rhs = even_verma_subset_sum(lambda, &rest, depth)?;
    let first_discrepancy = lhs.first_difference(&rhs)?;
    Ok(RestrictionReport {
        lambda: lambda.clone(),
        depth,
        summands: 1 << rest.len(),
        pass: first_discrepancy.is_none(),
        first_discrepancy,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessRow {
    pub weight: Vec<i64>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub simple_coeff: String,
    pub narrow_coeff: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub lambda: Weight,
    pub depth: u32,
    pub rows: Vec<ExactnessRow>,
    pub pass: bool,
}

impl ExactnessReport {
    pub fn to_report(&self) -> Report {
        Report::new(
            "exactness",
            &self.lambda,
            self.depth,
            self.pass,
            json!({ "rows": self.rows, "scope": SCOPE_NOTE }),
        )
    }
}

/// For `|W| = 2`: on every weight space of the window, the map
/// `N(s·λ) → N(λ)` is injective, lands in `N(λ)`, and its cokernel has the
/// dimension of `L(λ)`; `dim N(λ)_ν` matches the narrow character.
pub fn small_rank_exactness(lambda: &Weight, depth: u32, limits: &Limits) -> Result<ExactnessReport> {
    let profile = lambda.profile();
    let alpha = match even_positive_roots(profile).as_slice() {
        [a] => *a,
        _ => return Err(Error::UnsupportedProfile(profile)),
    };
    require_generic_dominant(lambda)?;
    let simple = char_simple_td(lambda, depth)?;
    let narrow = char_narrow(lambda, depth)?.series;
    let rows: Vec<MapRank> = narrow_map_ranks(lambda, &alpha, depth, limits)?;
    let rows: Vec<ExactnessRow> = rows
        .into_iter()
        .map(|r| -> Result<ExactnessRow> {
            let l = simple.coeff(&r.weight)?;
            let n = narrow.coeff(&r.weight)?;
            let ok = r.lands_in_target
                && r.rank == r.source_dim
                && BigInt::from(r.target_dim - r.rank) == l
                && BigInt::from(r.target_dim) == n;
            Ok(ExactnessRow {
                weight: r.weight.coeffs().to_vec(),
                source_dim: r.source_dim,
                target_dim: r.target_dim,
                rank: r.rank,
                simple_coeff: l.to_string(),
                narrow_coeff: n.to_string(),
                ok,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExactnessReport {
        lambda: lambda.clone(),
        depth,
        pass: rows.iter().all(|r| r.ok),
        rows,
    })
}

/// Per-weight comparison of the narrow image with the narrow character.
pub fn narrow_image_check(lambda: &Weight, depth: u32, limits: &Limits) -> Result<Report> {
    let image = narrow_image(lambda, depth, limits)?;
    let ch = char_narrow(lambda, depth)?;
    let mut mismatches = Vec::new();
    for (w, d) in image.dims() {
        let c = ch.series.coeff(&w)?;
        if BigInt::from(d) != c {
            mismatches.push(json!({ "weight": w.coeffs(), "rank": d, "coeff": c.to_string() }));
        }
    }
    for (w, _) in ch.series.terms() {
        if !image.window.contains_key(&w) {
            mismatches.push(json!({ "weight": w.coeffs(), "rank": 0, "outside_window": true }));
        }
    }
    Ok(Report::new(
        "image",
        lambda,
        depth,
        mismatches.is_empty(),
        json!({
            "weights": image.window.len(),
            "generic": ch.generic,
            "mismatches": mismatches,
        }),
    ))
}

fn coords(m: usize, n: usize, eps: &[i64], del: &[i64]) -> Weight {
    let profile = RankProfile::new(m, n).expect("valid profile");
    decode(&Coords::from_blocks(profile, eps, del).expect("block sizes match"))
}

/// The fixed verification battery run by `superchar suite`, sorted by
/// check name and then by input.
pub fn battery(seed: u64, limits: &Limits) -> Result<Vec<Report>> {
    let jobs: Vec<Box<dyn Fn() -> Result<Report> + Send + Sync>> = vec![
        Box::new(|| Ok(euler_check(&coords(1, 1, &[0], &[0]), 4)?.to_report())),
        Box::new(|| Ok(euler_check(&coords(2, 1, &[3, 0], &[3]), 8)?.to_report())),
        Box::new(|| Ok(euler_check(&coords(2, 2, &[7, 2], &[2, 7]), 6)?.to_report())),
        Box::new(|| Ok(euler_check(&coords(2, 2, &[9, 3], &[0, 6]), 6)?.to_report())),
        Box::new(move || {
            let l = coords(2, 2, &[7, 2], &[2, 7]);
            Ok(lemma52_sweep(l.profile(), 5, 10, 6, seed)?.to_report(&l))
        }),
        Box::new(|| Ok(restriction_check(&coords(2, 1, &[3, 0], &[3]), 6)?.to_report())),
        Box::new(|| Ok(restriction_check(&coords(2, 1, &[3, 0], &[7]), 6)?.to_report())),
        Box::new(|| Ok(small_rank_exactness(&coords(2, 1, &[3, 0], &[3]), 3, limits)?.to_report())),
        Box::new(|| Ok(small_rank_exactness(&coords(1, 2, &[3], &[0, 3]), 3, limits)?.to_report())),
        Box::new(|| narrow_image_check(&coords(1, 1, &[2], &[5]), 2, limits)),
        Box::new(|| narrow_image_check(&coords(1, 1, &[4], &[4]), 2, limits)),
        Box::new(|| narrow_image_check(&coords(2, 1, &[3, 0], &[3]), 3, limits)),
    ];
    let mut reports: Vec<Report> = jobs.par_iter().map(|job| job()).collect::<Result<_>>()?;
    reports.sort_by(|a, b| {
        (&a.check, a.profile, &a.lambda_coords).cmp(&(&b.check, b.profile, &b.lambda_coords))
    });
    Ok(reports)
}
