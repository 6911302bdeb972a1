use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::Error;
use crate::family::Members;
use crate::monoids::block::{BlockMonoid, LengthCache};
use crate::monoids::numerical::{length_table, NumericalMonoid};
use crate::natset::{ExtRat, NatSet};

#[derive(Clone, Debug)]
pub enum AtomBase {
    Numerical(NumericalMonoid),
    Block(BlockMonoid),
}

/// `𝓛(H; η)`: the family of weighted length sets of a monoid, where `η`
/// assigns a non-negative weight to every atom. Unit weights give the system
/// of sets of lengths `𝓛(H)`.
#[derive(Clone, Debug)]
pub struct WeightedAtomSystem {
    base: AtomBase,
    weights: Vec<u64>,
    // η is induced by element weights, hence a function of the sequence
    additive: bool,
}

impl WeightedAtomSystem {
    pub fn unit(base: AtomBase) -> Self {
        let n = atom_count(&base);
        WeightedAtomSystem {
            base,
            weights: vec![1; n],
            additive: false,
        }
    }

    /// One weight per atom (per generator for numerical monoids, per
    /// enumerated atom for block monoids).
    pub fn with_weights(base: AtomBase, weights: Vec<u64>) -> Result<Self, Error> {
        let n = atom_count(&base);
        if weights.len() != n {
            return Err(Error::InvalidWeights(format!("{} weights for {n} atoms", weights.len())));
        }
        Ok(WeightedAtomSystem {
            base,
            weights,
            additive: false,
        })
    }

    /// Block monoid with `η(x_1⋯x_n) = a_{x_1} + ⋯ + a_{x_n}` for element
    /// weights `a_x` aligned with the support.
    pub fn from_element_weights(block: BlockMonoid, element_weights: &[u64]) -> Result<Self, Error> {
        if element_weights.len() != block.support().len() {
            return Err(Error::InvalidWeights(format!(
                "{} element weights for a support of size {}",
                element_weights.len(),
                block.support().len()
            )));
        }
        let weights = block
            .atoms()
            .iter()
            .map(|a| {
                a.multiplicities
                    .iter()
                    .zip(element_weights)
                    .map(|(&m, &w)| m as u64 * w)
                    .sum()
            })
            .collect();
        Ok(WeightedAtomSystem {
            base: AtomBase::Block(block),
            weights,
            additive: true,
        })
    }

    /// Element weight `a_x` = sum of the least non-negative residues of the
    /// coordinates of `x`.
    pub fn modular(block: BlockMonoid) -> Self {
        let ew: Vec<u64> = block.support_coords().iter().map(|c| c.iter().sum()).collect();
        Self::from_element_weights(block, &ew).expect("aligned with support")
    }

    pub fn base(&self) -> &AtomBase {
        &self.base
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_unit(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn has_zero_weight(&self) -> bool {
        self.weights.contains(&0)
    }

    /// `℘ = gcd` of the atom weights: every `η(a)` lies in `L(a; η)` and every
    /// member element is a sum of weights.
    pub fn wp(&self) -> u64 {
        self.weights.iter().fold(0, |g, w| g.gcd(w))
    }

    /// Members `L(x; η)` with `inf L ≤ k_max`.
    ///
    /// Exact unless some atom has weight 0, in which case the enumeration is
    /// capped by `value_cap` (an element bound for numerical monoids, an atom
    /// count for block monoids).
    pub fn members_up_to(&self, k_max: u64, value_cap: u64, budget: u64) -> Result<Members, Error> {
        let (sets, exact) = match &self.base {
            AtomBase::Numerical(h) => {
                let min_w = *self.weights.iter().min().unwrap();
                let (x_max, exact) = match k_max.checked_div(min_w) {
                    None => (value_cap, false),
                    Some(q) => (h.max_generator() * q, true),
                };
                if x_max > budget {
                    return Err(Error::HorizonExceeded {
                        what: format!("value scan up to {x_max}"),
                        limit: budget,
                    });
                }
                let table = length_table(h.generators(), &self.weights, x_max);
                let sets: BTreeSet<NatSet> = table
                    .into_iter()
                    .filter(|l| l.min_elem().is_some_and(|m| m <= k_max))
                    .collect();
                (sets, exact)
            }
            AtomBase::Block(b) => {
                let (products, exact) = b.products(&self.weights, k_max, value_cap, budget)?;
                let mut cache = LengthCache::new(b, &self.weights);
                let sets: BTreeSet<NatSet> = products
                    .iter()
                    .map(|p| cache.lengths(p))
                    .filter(|l| l.min_elem().is_some_and(|m| m <= k_max))
                    .collect();
                (sets, exact)
            }
        };
        Ok(Members {
            sets: sets.into_iter().collect(),
            exact,
        })
    }

    /// Upper bound on `ρ(𝓛(H; η))` from additive size functions `σ`:
    /// every factorization `z` of `x` has `min(η/σ)·σ(x) ≤ η(z) ≤ max(η/σ)·σ(x)`.
    pub fn elasticity_upper_bound(&self) -> ExtRat {
        if self.has_zero_weight() {
            return ExtRat::Inf;
        }
        let ratio_bound = |sizes: &[u64]| -> Option<Ratio<u64>> {
            let ratios: Vec<Ratio<u64>> = self
                .weights
                .iter()
                .zip(sizes)
                .map(|(&w, &s)| Ratio::new(w, s))
                .collect();
            let hi = *ratios.iter().max()?;
            let lo = *ratios.iter().min()?;
            Some(hi / lo)
        };
        let mut best: Option<Ratio<u64>> = None;
        for sizes in self.size_functions() {
            if let Some(b) = ratio_bound(&sizes) {
                best = Some(best.map_or(b, |x: Ratio<u64>| x.min(b)));
            }
        }
        best.map_or(ExtRat::Inf, ExtRat::Fin)
    }

    fn size_functions(&self) -> Vec<Vec<u64>> {
        match &self.base {
            AtomBase::Numerical(h) => vec![h.generators().to_vec()],
            AtomBase::Block(b) => {
                let mut out = vec![b.atoms().iter().map(|a| a.len()).collect::<Vec<_>>()];
                if self.additive {
                    out.push(self.weights.clone());
                }
                out
            }
        }
    }

    /// For numerical monoids, the member attaining the upper bound: with
    /// `i = argmax η_i/g_i` and `j = argmin η_j/g_j`, `x = g_i·g_j` has the
    /// factorizations `g_j·g_i` and `g_i·g_j` realizing both extremes.
    pub fn numerical_witness(&self) -> Option<NatSet> {
        let AtomBase::Numerical(h) = &self.base else {
            return None;
        };
        if self.has_zero_weight() {
            return None;
        }
        let gens = h.generators();
        let ratio = |i: usize| Ratio::new(self.weights[i], gens[i]);
        let hi = (0..gens.len()).max_by_key(|&i| (ratio(i), std::cmp::Reverse(i)))?;
        let lo = (0..gens.len()).min_by_key(|&i| (ratio(i), i))?;
        let x = gens[hi] * gens[lo];
        Some(length_table(gens, &self.weights, x).swap_remove(x as usize))
    }
}

fn atom_count(base: &AtomBase) -> usize {
    match base {
        AtomBase::Numerical(h) => h.generators().len(),
        AtomBase::Block(b) => b.atoms().len(),
    }
}
