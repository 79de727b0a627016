//! Exact rank computations over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type SparseVec<K> = BTreeMap<K, BigRational>;

fn bit_cost(q: &BigRational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Row-reduced echelon basis of a growing subspace; every stored row has
/// pivot coefficient 1 and no other row has a non-zero entry at its pivot.
#[derive(Debug, Clone)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    row_pivot: Vec<K>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        Self {
            rows: Vec::new(),
            row_pivot: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }
}

fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, c: &BigRational, row: &SparseVec<K>) {
    for (k, v) in row {
        let entry = target.entry(k.clone()).or_insert_with(BigRational::zero);
        *entry -= c * v;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    /// Pivot key of each row; the pivot columns of the stored rows are
    /// linearly independent.
    pub fn pivot_keys(&self) -> &[K] {
        &self.row_pivot
    }

    /// Reduce `v` against the stored rows.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        let hits: Vec<usize> = v.keys().filter_map(|k| self.pivots.get(k).copied()).collect();
        for r in hits {
            if let Some(c) = v.get(&self.row_pivot[r]).cloned() {
                axpy(&mut v, &c, &self.rows[r]);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Add `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        // cheapest pivot keeps coefficient growth down
        let (pivot, pc) = v
            .iter()
            .min_by_key(|(_, c)| bit_cost(c))
            .map(|(k, c)| (k.clone(), c.clone()))
            .unwrap();
        let inv = pc.recip();
        let v: SparseVec<K> = v.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &c, &v);
            }
        }
        self.pivots.insert(pivot.clone(), self.rows.len());
        self.row_pivot.push(pivot);
        self.rows.push(v);
        true
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    let mut e = SparseEchelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Whether `a` and `b` are proportional with a non-zero ratio (both zero
/// counts as proportional); returns the ratio `b / a` when defined.
pub fn proportional<K: Ord + Clone>(a: &SparseVec<K>, b: &SparseVec<K>) -> Option<Option<BigRational>> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Some(None),
        (true, false) | (false, true) => return None,
        _ => {}
    }
    if a.len() != b.len() || a.keys().zip(b.keys()).any(|(x, y)| x != y) {
        return None;
    }
    let (k0, a0) = a.iter().next().unwrap();
    let ratio = &b[k0] / a0;
    a.iter()
        .all(|(k, v)| v * &ratio == b[k])
        .then_some(Some(ratio))
}

pub fn from_int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

pub fn one() -> BigRational {
    BigRational::one()
}
