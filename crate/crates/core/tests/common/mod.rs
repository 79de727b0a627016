#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use superchar::borels::BorelElt;
use superchar::linalg::{SparseEchelon, SparseVec};
use superchar::rootdata::{decode, Coords, RankProfile, Weight};
use superchar::vermacalc::{Limits, VermaElement, VermaModule};

pub fn profile(m: usize, n: usize) -> RankProfile {
    RankProfile::new(m, n).unwrap()
}

pub fn coords(m: usize, n: usize, eps: &[i64], del: &[i64]) -> Weight {
    decode(&Coords::from_blocks(profile(m, n), eps, del).unwrap())
}

/// Weight multiplicities of `L^{()}(λ)` to the given depth, computed as
/// ranks of the contravariant pairing: `u ∈ M(λ)_ν` lies in the maximal
/// submodule iff every simple raising generator sends it there, so the
/// quotient map is built weight by weight from the top.
pub fn simple_char_by_rank(lambda: &Weight, depth: u32) -> BTreeMap<Weight, usize> {
    let b = BorelElt::distinguished(lambda.profile());
    let module = VermaModule::new(&b, lambda).unwrap();
    let window = module.window(depth, &Limits::default()).unwrap();
    let raising = VermaModule::raising_simples(&b);
    let mut by_depth: Vec<(&Weight, &Vec<Vec<u32>>)> = window.iter().collect();
    by_depth.sort_by_key(|(w, _)| module.depth_of(w));

    // quotient coordinates of every PBW monomial, per weight
    let mut phi: BTreeMap<Weight, BTreeMap<Vec<u32>, SparseVec<usize>>> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (nu, monos) in by_depth {
        if nu == lambda {
            let mut v = SparseVec::new();
            v.insert(0, BigRational::one());
            phi.entry(nu.clone()).or_default().insert(monos[0].clone(), v);
            out.insert(nu.clone(), 1);
            continue;
        }
        let mut raw: Vec<(Vec<u32>, SparseVec<(usize, usize)>)> = Vec::new();
        for exps in monos {
            let mut t = BTreeMap::new();
            t.insert(exps.clone(), BigRational::one());
            let u = VermaElement::from_terms(nu.clone(), t);
            let mut vec: SparseVec<(usize, usize)> = BTreeMap::new();
            for (s, g) in raising.iter().enumerate() {
                let up = module.act(*g, &u).unwrap();
                let Some(table) = phi.get(up.weight()) else { continue };
                for (mono, c) in up.terms() {
                    for (k, x) in &table[mono] {
                        let e = vec.entry((s, *k)).or_insert_with(|| BigRational::from_integer(0.into()));
                        *e += c * x;
                    }
                }
            }
            vec.retain(|_, x| *x != BigRational::from_integer(0.into()));
            raw.push((exps.clone(), vec));
        }
        let mut ech = SparseEchelon::new();
        for (_, v) in &raw {
            ech.insert(v.clone());
        }
        let rank = ech.rank();
        if rank == 0 {
            continue;
        }
        let index: BTreeMap<(usize, usize), usize> =
            ech.pivot_keys().iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let table = raw
            .into_iter()
            .map(|(exps, v)| {
                let compressed = v
                    .into_iter()
                    .filter_map(|(k, x)| index.get(&k).map(|i| (*i, x)))
                    .collect();
                (exps, compressed)
            })
            .collect();
        phi.insert(nu.clone(), table);
        out.insert(nu.clone(), rank);
    }
    out
}

/// Truncated character as a plain multiplicity map.
pub fn as_map(ch: &superchar::charring::FormalChar) -> BTreeMap<Weight, usize> {
    ch.terms()
        .map(|(w, c)| (w, usize::try_from(c).expect("non-negative multiplicity")))
        .collect()
}
