//! Deliberately naive recomputation of lengths, unions, delta sets and `℘`
//! by exhaustive enumeration. Nothing here calls into the engine apart from
//! the [`NatSet`] container used for results.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::natset::{ExtNat, NatSet};

/// A family in raw form, independent of the engine's validated types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyDescription {
    /// Weights are per generator; `None` means unit weights.
    Numerical {
        generators: Vec<u64>,
        weights: Option<Vec<u64>>,
    },
    /// Element weights are per support element; an atom weighs the sum over
    /// its terms. `None` means every atom weighs 1.
    Block {
        group: Vec<u64>,
        support: Vec<Vec<u64>>,
        element_weights: Option<Vec<u64>>,
    },
    Sumset {
        generators: Vec<Vec<u64>>,
    },
    Explicit {
        sets: Vec<Vec<u64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Most atoms (or generator coefficients) in one product.
    pub max_atoms_product: u64,
    /// Largest numerical value or set element enumerated.
    pub max_value: u64,
    pub max_k: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_atoms_product: 64,
            max_value: 4096,
            max_k: 64,
        }
    }
}

fn over(what: &str, value: u64, limit: u64) -> Error {
    Error::BudgetExceeded(format!("{what} = {value} exceeds {limit}"))
}

fn to_natset(s: &BTreeSet<u64>) -> NatSet {
    s.iter().copied().collect()
}

fn naive_sumset(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x + y);
        }
    }
    out
}

fn gaps(s: &BTreeSet<u64>) -> BTreeSet<u64> {
    let v: Vec<u64> = s.iter().copied().collect();
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An atom of a block monoid: multiplicities over the support, in the order
/// the description lists it.
type Seq = Vec<u64>;

struct BlockData {
    support: Vec<Vec<u64>>,
    atoms: Vec<Seq>,
    atom_weights: Vec<u64>,
}

fn sum_of(group: &[u64], support: &[Vec<u64>], seq: &[u64]) -> Vec<u64> {
    let mut acc = vec![0; group.len()];
    for (elem, &mult) in support.iter().zip(seq) {
        for ((a, &c), &n) in acc.iter_mut().zip(elem).zip(group) {
            *a = (*a + c * mult) % n;
        }
    }
    acc
}

fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// All multiplicity vectors with entries `≤ bound[i]` and total in `1..=max_total`.
fn all_vectors(bound: &[u64], max_total: u64) -> Vec<Seq> {
    let mut out = Vec::new();
    let mut cur = vec![0; bound.len()];
    fn rec(i: usize, left: u64, bound: &[u64], cur: &mut Seq, out: &mut Vec<Seq>) {
        if i == bound.len() {
            if cur.iter().any(|&m| m > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=bound[i].min(left) {
            cur[i] = m;
            rec(i + 1, left - m, bound, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_total, bound, &mut cur, &mut out);
    out
}

impl BlockData {
    fn new(group: &[u64], support: &[Vec<u64>], element_weights: Option<&[u64]>) -> Result<Self, Error> {
        let order: u64 = group.iter().product();
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        // Every minimal zero-sum sequence has length at most |G|.
        let bound = vec![order; support.len()];
        let mut atoms = Vec::new();
        for seq in all_vectors(&bound, order) {
            if !is_zero(&sum_of(group, support, &seq)) {
                continue;
            }
            let proper_zero_sum = all_vectors(&seq, u64::MAX)
                .into_iter()
                .any(|sub| sub != seq && is_zero(&sum_of(group, support, &sub)));
            if !proper_zero_sum {
                atoms.push(seq);
            }
        }
        atoms.sort();
        let atom_weights = atoms
            .iter()
            .map(|a| match element_weights {
                None => 1,
                Some(w) => a.iter().zip(w).map(|(m, w)| m * w).sum(),
            })
            .collect();
        Ok(BlockData {
            support: support.to_vec(),
            atoms,
            atom_weights,
        })
    }

    fn seq_of(&self, terms: &[Vec<u64>]) -> Result<Seq, Error> {
        let mut seq = vec![0; self.support.len()];
        for t in terms {
            let i = self
                .support
                .iter()
                .position(|s| s == t)
                .ok_or_else(|| Error::InvalidElement(format!("{t:?} is not in the support")))?;
            seq[i] += 1;
        }
        Ok(seq)
    }

    /// Weights of every factorization of `seq`, enumerating atoms in
    /// non-decreasing order so each multiset of atoms is visited once.
    fn lengths(&self, seq: &[u64]) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        let mut rest = seq.to_vec();
        self.factor(&mut rest, 0, 0, &mut out);
        out
    }

    fn factor(&self, rest: &mut Seq, from: usize, weight: u64, out: &mut BTreeSet<u64>) {
        if rest.iter().all(|&m| m == 0) {
            out.insert(weight);
            return;
        }
        for a in from..self.atoms.len() {
            let atom = &self.atoms[a];
            if atom.iter().zip(rest.iter()).all(|(x, r)| x <= r) {
                for (r, x) in rest.iter_mut().zip(atom) {
                    *r -= x;
                }
                self.factor(rest, a, weight + self.atom_weights[a], out);
                for (r, x) in rest.iter_mut().zip(atom) {
                    *r += x;
                }
            }
        }
    }

    /// Every product of atoms of total weight at most `max_weight`, keyed by
    /// the resulting sequence.
    fn products(&self, max_weight: u64, budget: &OracleBudget) -> Result<BTreeSet<Seq>, Error> {
        if self.atom_weights.contains(&0) {
            return Err(Error::BudgetExceeded("an atom of weight 0 yields infinitely many products".into()));
        }
        let mut out = BTreeSet::new();
        let mut cur = vec![0; self.support.len()];
        self.products_rec(0, 0, 0, max_weight, budget, &mut cur, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn products_rec(
        &self,
        from: usize,
        count: u64,
        weight: u64,
        max_weight: u64,
        budget: &OracleBudget,
        cur: &mut Seq,
        out: &mut BTreeSet<Seq>,
    ) -> Result<(), Error> {
        if count > budget.max_atoms_product {
            return Err(over("atoms in a product", count, budget.max_atoms_product));
        }
        out.insert(cur.clone());
        for a in from..self.atoms.len() {
            let w = weight + self.atom_weights[a];
            if w > max_weight {
                continue;
            }
            for (c, x) in cur.iter_mut().zip(&self.atoms[a]) {
                *c += x;
            }
            self.products_rec(a, count + 1, w, max_weight, budget, cur, out)?;
            for (c, x) in cur.iter_mut().zip(&self.atoms[a]) {
                *c -= x;
            }
        }
        Ok(())
    }
}

/// Every factorization of `x` into generators, as non-decreasing generator
/// sequences; returns the set of total weights.
fn numerical_lengths(gens: &[u64], weights: &[u64], x: u64) -> BTreeSet<u64> {
    fn rec(gens: &[u64], weights: &[u64], rest: u64, from: usize, weight: u64, out: &mut BTreeSet<u64>) {
        if rest == 0 {
            out.insert(weight);
            return;
        }
        for i in from..gens.len() {
            if gens[i] <= rest {
                rec(gens, weights, rest - gens[i], i, weight + weights[i], out);
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(gens, weights, x, 0, 0, &mut out);
    out
}

/// An element whose set of lengths the oracle computes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleElement {
    Value(u64),
    /// A zero-sum sequence given by its terms (coordinates, repeated).
    Terms(Vec<Vec<u64>>),
}

/// `L(x)` by exhaustive factorization.
pub fn oracle_length_set(desc: &FamilyDescription, x: &OracleElement, budget: &OracleBudget) -> Result<NatSet, Error> {
    match (desc, x) {
        (FamilyDescription::Numerical { generators, weights }, OracleElement::Value(v)) => {
            if *v > budget.max_value {
                return Err(over("value", *v, budget.max_value));
            }
            let w = weights.clone().unwrap_or_else(|| vec![1; generators.len()]);
            Ok(to_natset(&numerical_lengths(generators, &w, *v)))
        }
        (
            FamilyDescription::Block {
                group,
                support,
                element_weights,
            },
            OracleElement::Terms(terms),
        ) => {
            if terms.len() as u64 > budget.max_value {
                return Err(over("sequence length", terms.len() as u64, budget.max_value));
            }
            let data = BlockData::new(group, support, element_weights.as_deref())?;
            let seq = data.seq_of(terms)?;
            if !is_zero(&sum_of(group, support, &seq)) {
                return Err(Error::NotZeroSum);
            }
            Ok(to_natset(&data.lengths(&seq)))
        }
        _ => Err(Error::InvalidElement("element does not match the family kind".into())),
    }
}

/// All members `Σ a_i G_i` with `1 ≤ Σ a_i ≤ coeff_sum_max`, by repeated
/// naive sumsets.
pub fn oracle_family_enumerate(generators: &[Vec<u64>], coeff_sum_max: u64, budget: &OracleBudget) -> Result<Vec<NatSet>, Error> {
    if coeff_sum_max > budget.max_atoms_product {
        return Err(over("coefficient sum", coeff_sum_max, budget.max_atoms_product));
    }
    let gens: Vec<BTreeSet<u64>> = generators.iter().map(|g| g.iter().copied().collect()).collect();
    let mut layer: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    let mut all: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    for g in &gens {
        layer.insert(g.clone());
    }
    for _ in 1..=coeff_sum_max {
        all.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for m in &layer {
            for g in &gens {
                let s = naive_sumset(m, g);
                if let Some(&top) = s.iter().next_back() {
                    if top > budget.max_value {
                        return Err(over("set element", top, budget.max_value));
                    }
                }
                next.insert(s);
            }
        }
        layer = next;
    }
    Ok(all.iter().map(to_natset).collect())
}

/// Members with `inf ≤ k_max` (all members that can meet some `𝒰_k`, `k ≤ k_max`).
pub fn oracle_members(desc: &FamilyDescription, k_max: u64, budget: &OracleBudget) -> Result<Vec<NatSet>, Error> {
    if k_max > budget.max_k {
        return Err(over("k", k_max, budget.max_k));
    }
    let mut out: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    match desc {
        FamilyDescription::Numerical { generators, weights } => {
            let w = weights.clone().unwrap_or_else(|| vec![1; generators.len()]);
            if w.contains(&0) {
                return Err(Error::BudgetExceeded("a generator of weight 0 yields infinitely many members".into()));
            }
            let min_w = *w.iter().min().unwrap();
            let top = generators.iter().max().copied().unwrap_or(0) * (k_max / min_w);
            if top > budget.max_value {
                return Err(over("value", top, budget.max_value));
            }
            for x in 0..=top {
                let l = numerical_lengths(generators, &w, x);
                if l.first().is_some_and(|&m| m <= k_max) {
                    out.insert(l);
                }
            }
        }
        FamilyDescription::Block {
            group,
            support,
            element_weights,
        } => {
            let data = BlockData::new(group, support, element_weights.as_deref())?;
            for seq in data.products(k_max, budget)? {
                let l = data.lengths(&seq);
                if l.first().is_some_and(|&m| m <= k_max) {
                    out.insert(l);
                }
            }
        }
        FamilyDescription::Sumset { generators } => {
            if generators.iter().any(|g| g.iter().min().is_none_or(|&m| m == 0)) {
                return Err(Error::BudgetExceeded("a generator with minimum 0 yields infinitely many members".into()));
            }
            for l in oracle_family_enumerate(generators, k_max.max(1), budget)? {
                if l.min_elem().is_some_and(|m| m <= k_max) {
                    out.insert(l.iter().collect());
                }
            }
        }
        FamilyDescription::Explicit { sets } => {
            for s in sets {
                let l: BTreeSet<u64> = s.iter().copied().collect();
                if l.first().is_some_and(|&m| m <= k_max) {
                    out.insert(l);
                }
            }
        }
    }
    Ok(out.iter().map(to_natset).collect())
}

/// `𝒰_k`: for monoids, the union of `L(x)` over all products `x` of atoms
/// of total weight exactly `k`; for other families, the union of members
/// containing `k`.
pub fn oracle_unions(desc: &FamilyDescription, k: u64, budget: &OracleBudget) -> Result<NatSet, Error> {
    if k > budget.max_k {
        return Err(over("k", k, budget.max_k));
    }
    let mut out = BTreeSet::new();
    match desc {
        FamilyDescription::Numerical { generators, weights } => {
            let w = weights.clone().unwrap_or_else(|| vec![1; generators.len()]);
            if w.contains(&0) {
                return Err(Error::BudgetExceeded("a generator of weight 0 yields infinitely many products".into()));
            }
            let mut values = BTreeSet::new();
            fn rec(gens: &[u64], w: &[u64], from: usize, left: u64, value: u64, values: &mut BTreeSet<u64>) {
                if left == 0 {
                    values.insert(value);
                    return;
                }
                for i in from..gens.len() {
                    if w[i] <= left {
                        rec(gens, w, i, left - w[i], value + gens[i], values);
                    }
                }
            }
            rec(generators, &w, 0, k, 0, &mut values);
            for x in values {
                if x > budget.max_value {
                    return Err(over("value", x, budget.max_value));
                }
                out.extend(numerical_lengths(generators, &w, x));
            }
        }
        FamilyDescription::Block {
            group,
            support,
            element_weights,
        } => {
            let data = BlockData::new(group, support, element_weights.as_deref())?;
            for seq in data.products(k, budget)? {
                let l = data.lengths(&seq);
                if l.contains(&k) {
                    out.extend(l);
                }
            }
        }
        _ => {
            for l in oracle_members(desc, k, budget)? {
                if l.contains(k) {
                    out.extend(l.iter());
                }
            }
        }
    }
    Ok(to_natset(&out))
}

/// Everything the oracle knows about a family up to `k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub k_max: u64,
    pub unions: Vec<NatSet>,
    pub members: Vec<NatSet>,
    pub delta_family: NatSet,
    pub delta_union: NatSet,
    /// `min Δ_∪`, `∞` when empty.
    pub delta: ExtNat,
    pub gcd_delta: u64,
    pub wp: u64,
}

pub fn oracle_summary(desc: &FamilyDescription, k_max: u64, budget: &OracleBudget) -> Result<OracleSummary, Error> {
    let members = oracle_members(desc, k_max, budget)?;
    let unions = (0..=k_max)
        .map(|k| oracle_unions(desc, k, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut delta_family = BTreeSet::new();
    for l in &members {
        delta_family.extend(gaps(&l.iter().collect()));
    }
    let wp = oracle_wp(desc)?;
    let mut delta_union = BTreeSet::new();
    for u in &unions {
        delta_union.extend(gaps(&u.iter().collect()));
    }
    let gcd_delta = delta_family.iter().fold(0, |g, &d| gcd(g, d));
    let delta = delta_union.first().map_or(ExtNat::Inf, |&d| ExtNat::Fin(d));
    Ok(OracleSummary {
        k_max,
        unions,
        members,
        delta_family: to_natset(&delta_family),
        delta_union: to_natset(&delta_union),
        delta,
        gcd_delta,
        wp,
    })
}

/// `℘`: every member value is a sum of values taken from the members built
/// from a single atom or generator, so those determine the gcd.
pub fn oracle_wp(desc: &FamilyDescription) -> Result<u64, Error> {
    let mut values = BTreeSet::new();
    match desc {
        FamilyDescription::Numerical { generators, weights } => {
            let w = weights.clone().unwrap_or_else(|| vec![1; generators.len()]);
            for &g in generators {
                values.extend(numerical_lengths(generators, &w, g));
            }
        }
        FamilyDescription::Block {
            group,
            support,
            element_weights,
        } => {
            let data = BlockData::new(group, support, element_weights.as_deref())?;
            for a in &data.atoms {
                values.extend(data.lengths(a));
            }
        }
        FamilyDescription::Sumset { generators: sets } | FamilyDescription::Explicit { sets } => {
            values.extend(sets.iter().flatten().copied());
        }
    }
    Ok(values.into_iter().fold(0, gcd))
}

/// Counts of atoms by length, handy for eyeballing an atom enumeration.
pub fn oracle_atom_lengths(group: &[u64], support: &[Vec<u64>]) -> Result<BTreeMap<u64, usize>, Error> {
    let data = BlockData::new(group, support, None)?;
    let mut out = BTreeMap::new();
    for a in &data.atoms {
        *out.entry(a.iter().sum()).or_insert(0) += 1;
    }
    Ok(out)
}
