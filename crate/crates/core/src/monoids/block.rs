use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Error;
use crate::monoids::group::FiniteAbelianGroup;
use crate::natset::NatSet;

/// A sequence over the support `G₀`, stored as a multiplicity vector aligned
/// with [`BlockMonoid::support`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroSumSequence {
    pub multiplicities: Vec<u32>,
}

impl ZeroSumSequence {
    pub fn new(multiplicities: Vec<u32>) -> Self {
        ZeroSumSequence { multiplicities }
    }

    /// Number of terms, `|S|`.
    pub fn len(&self) -> u64 {
        self.multiplicities.iter().map(|&m| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 0)
    }
}

/// The monoid `B(G₀)` of zero-sum sequences over `G₀ ⊆ G`.
#[derive(Clone, Debug)]
pub struct BlockMonoid {
    group: FiniteAbelianGroup,
    support: Vec<usize>,
    atoms: Vec<ZeroSumSequence>,
}

/// All minimal zero-sum sequences with support in `support` (group element
/// indices), in lexicographic order of their multiplicity vectors.
///
/// Every atom is `S·g` with `S` zero-sum free and `g = −σ(S)`, so a DFS over
/// zero-sum-free sequences (kept in non-decreasing support order) finds them
/// all. Zero-sum-free sequences have length below `D(G) ≤ |G|`.
pub fn enumerate_atoms(group: &FiniteAbelianGroup, support: &[usize]) -> Result<Vec<ZeroSumSequence>, Error> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let n = group.order();
    let table = group.addition_table();
    let position: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &g)| (g, i)).collect();

    struct Dfs<'a> {
        n: usize,
        table: &'a [usize],
        group: &'a FiniteAbelianGroup,
        support: &'a [usize],
        position: &'a HashMap<usize, usize>,
        found: BTreeSet<Vec<u32>>,
    }

    impl Dfs<'_> {
        fn visit(&mut self, start: usize, mult: &mut Vec<u32>, sum: usize, subsums: &[bool], len: usize) {
            assert!(len < self.n, "zero-sum-free sequence longer than |G| - 1");
            let missing = self.group.neg(sum);
            if let Some(&p) = self.position.get(&missing) {
                mult[p] += 1;
                self.found.insert(mult.clone());
                mult[p] -= 1;
            }
            for j in start..self.support.len() {
                let h = self.support[j];
                if h == 0 {
                    continue;
                }
                let mut next = subsums.to_vec();
                next[h] = true;
                for (s, &present) in subsums.iter().enumerate() {
                    if present {
                        next[self.table[s * self.n + h]] = true;
                    }
                }
                if next[0] {
                    continue;
                }
                mult[j] += 1;
                self.visit(j, mult, self.table[sum * self.n + h], &next, len + 1);
                mult[j] -= 1;
            }
        }
    }

    let mut dfs = Dfs {
        n,
        table: &table,
        group,
        support,
        position: &position,
        found: BTreeSet::new(),
    };
    let mut mult = vec![0u32; support.len()];
    dfs.visit(0, &mut mult, 0, &vec![false; n], 0);
    Ok(dfs.found.into_iter().map(ZeroSumSequence::new).collect())
}

impl BlockMonoid {
    /// `support` lists group elements as residue vectors; it is sorted into
    /// index order.
    pub fn new(group: FiniteAbelianGroup, support: &[Vec<u64>]) -> Result<Self, Error> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut idx = support
            .iter()
            .map(|c| group.index_of(c))
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidElement("support lists an element twice".into()));
        }
        let atoms = enumerate_atoms(&group, &idx)?;
        Ok(BlockMonoid {
            group,
            support: idx,
            atoms,
        })
    }

    /// Full non-zero support `G ∖ {0}`.
    pub fn full(group: FiniteAbelianGroup) -> Result<Self, Error> {
        let support: Vec<Vec<u64>> = (1..group.order()).map(|i| group.coords(i)).collect();
        BlockMonoid::new(group, &support)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn support_coords(&self) -> Vec<Vec<u64>> {
        self.support.iter().map(|&g| self.group.coords(g)).collect()
    }

    pub fn atoms(&self) -> &[ZeroSumSequence] {
        &self.atoms
    }

    /// `σ(S)` as a group element index.
    pub fn sum(&self, s: &ZeroSumSequence) -> usize {
        let mut acc = self.group.identity();
        for (&g, &m) in self.support.iter().zip(&s.multiplicities) {
            for _ in 0..m {
                acc = self.group.add(acc, g);
            }
        }
        acc
    }

    /// Sequence from a list of terms (residue vectors).
    pub fn sequence(&self, terms: &[Vec<u64>]) -> Result<ZeroSumSequence, Error> {
        let mut mult = vec![0u32; self.support.len()];
        for t in terms {
            let g = self.group.index_of(t)?;
            let p = self
                .support
                .iter()
                .position(|&s| s == g)
                .ok_or_else(|| Error::InvalidElement(format!("{t:?} is not in the support")))?;
            mult[p] += 1;
        }
        Ok(ZeroSumSequence::new(mult))
    }

    /// `L(s; η)`; unit weights when `weights` is `None`.
    pub fn length_set(&self, s: &ZeroSumSequence, weights: Option<&[u64]>) -> Result<NatSet, Error> {
        if s.multiplicities.len() != self.support.len() {
            return Err(Error::InvalidElement("multiplicity vector has the wrong length".into()));
        }
        if self.sum(s) != self.group.identity() {
            return Err(Error::NotZeroSum);
        }
        let ones;
        let weights = match weights {
            Some(w) => {
                check_weights(self, w)?;
                w
            }
            None => {
                ones = vec![1; self.atoms.len()];
                &ones
            }
        };
        Ok(LengthCache::new(self, weights).lengths(&s.multiplicities))
    }

    /// `𝒰_k` of `𝓛(B(G₀); η)`: union of `L(x; η)` over products `x` of atom
    /// multisets of total weight at most `k` that have `k ∈ L(x; η)`.
    ///
    /// With zero-weight atoms the multiset size is capped at `atom_cap` and the
    /// result is flagged inexact.
    pub fn unions(&self, k: u64, weights: Option<&[u64]>, atom_cap: u64, budget: u64) -> Result<(NatSet, bool), Error> {
        if k == 0 && weights.is_none_or(|w| w.iter().all(|&x| x > 0)) {
            return Ok((NatSet::singleton(0), true));
        }
        let ones = vec![1; self.atoms.len()];
        let w = weights.unwrap_or(&ones);
        check_weights(self, w)?;
        let (products, exact) = self.products(w, k, atom_cap, budget)?;
        let mut cache = LengthCache::new(self, w);
        let mut out = NatSet::new();
        for p in &products {
            let l = cache.lengths(p);
            if l.contains(k) {
                out.union_with(&l);
            }
        }
        Ok((out, exact))
    }

    /// Distinct products of atom multisets with total weight `≤ max_weight`
    /// (including the empty product). Sorted.
    pub(crate) fn products(
        &self,
        weights: &[u64],
        max_weight: u64,
        atom_cap: u64,
        budget: u64,
    ) -> Result<(Vec<Vec<u32>>, bool), Error> {
        let has_zero = weights.contains(&0);
        let cap = if has_zero { atom_cap } else { u64::MAX };
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut visited = 0u64;
        let mut current = vec![0u32; self.support.len()];
        self.products_rec(0, max_weight, cap, weights, &mut current, &mut seen, &mut visited, budget)?;
        let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
        out.sort_unstable();
        Ok((out, !has_zero))
    }

    #[allow(clippy::too_many_arguments)]
    fn products_rec(
        &self,
        start: usize,
        weight_left: u64,
        count_left: u64,
        weights: &[u64],
        current: &mut Vec<u32>,
        seen: &mut HashSet<Vec<u32>>,
        visited: &mut u64,
        budget: u64,
    ) -> Result<(), Error> {
        *visited += 1;
        if *visited > budget {
            return Err(Error::HorizonExceeded {
                what: "atom multiset enumeration".into(),
                limit: budget,
            });
        }
        seen.insert(current.clone());
        if count_left == 0 {
            return Ok(());
        }
        for j in start..self.atoms.len() {
            if weights[j] > weight_left {
                continue;
            }
            add_into(current, &self.atoms[j].multiplicities);
            let res = self.products_rec(
                j,
                weight_left - weights[j],
                count_left - 1,
                weights,
                current,
                seen,
                visited,
                budget,
            );
            sub_from(current, &self.atoms[j].multiplicities);
            res?;
        }
        Ok(())
    }
}

fn check_weights(b: &BlockMonoid, w: &[u64]) -> Result<(), Error> {
    if w.len() != b.atoms.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} atoms",
            w.len(),
            b.atoms.len()
        )));
    }
    Ok(())
}

fn add_into(acc: &mut [u32], v: &[u32]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn sub_from(acc: &mut [u32], v: &[u32]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a -= b;
    }
}

/// Memoized `L(s; η)` over sub-multiplicity vectors.
///
/// Every factorization of `s` uses an atom containing the first element of
/// `s`, so only those atoms are branched on.
pub(crate) struct LengthCache<'a> {
    monoid: &'a BlockMonoid,
    weights: &'a [u64],
    by_element: Vec<Vec<usize>>,
    memo: HashMap<Vec<u32>, NatSet>,
}

impl<'a> LengthCache<'a> {
    pub(crate) fn new(monoid: &'a BlockMonoid, weights: &'a [u64]) -> Self {
        let by_element = (0..monoid.support.len())
            .map(|j| {
                monoid
                    .atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.multiplicities[j] > 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        LengthCache {
            monoid,
            weights,
            by_element,
            memo: HashMap::new(),
        }
    }

    pub(crate) fn lengths(&mut self, s: &[u32]) -> NatSet {
        let Some(first) = s.iter().position(|&m| m > 0) else {
            return NatSet::singleton(0);
        };
        if let Some(l) = self.memo.get(s) {
            return l.clone();
        }
        let mut out = NatSet::new();
        let mut rest = s.to_vec();
        for idx in 0..self.by_element[first].len() {
            let ai = self.by_element[first][idx];
            let atom = &self.monoid.atoms[ai].multiplicities;
            if atom.iter().zip(s).any(|(a, m)| a > m) {
                continue;
            }
            sub_from(&mut rest, atom);
            let sub = self.lengths(&rest);
            add_into(&mut rest, atom);
            if !sub.is_empty() {
                out.union_with(&sub.translate(self.weights[ai]));
            }
        }
        self.memo.insert(s.to_vec(), out.clone());
        out
    }
}
