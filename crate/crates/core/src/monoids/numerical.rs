use num_integer::Integer;

use crate::error::Error;
use crate::natset::NatSet;

/// A numerical monoid `⟨g_1, …, g_n⟩ ⊆ (ℕ, +)` given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalMonoid {
    generators: Vec<u64>,
}

impl NumericalMonoid {
    /// Validates: non-empty, positive, strictly ascending, gcd 1, minimal.
    pub fn new(generators: Vec<u64>) -> Result<Self, Error> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if generators.contains(&0) {
            return Err(Error::ZeroGenerator);
        }
        if generators.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedGenerators);
        }
        let g = generators.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::GcdNotOne(g));
        }
        // reachable[v]: v is an N-combination of the generators seen so far
        let top = *generators.last().unwrap() as usize;
        let mut reachable = vec![false; top + 1];
        reachable[0] = true;
        for &g in &generators {
            if reachable[g as usize] {
                return Err(Error::NonMinimalGenerator(g));
            }
            let g = g as usize;
            for v in g..=top {
                if reachable[v - g] {
                    reachable[v] = true;
                }
            }
        }
        Ok(NumericalMonoid { generators })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn min_generator(&self) -> u64 {
        self.generators[0]
    }

    pub fn max_generator(&self) -> u64 {
        *self.generators.last().unwrap()
    }

    /// `L(x)`: the set of factorization lengths of `x`, `{0}` for `x = 0` and
    /// `∅` when `x` is a gap.
    pub fn length_set(&self, x: u64) -> NatSet {
        let ones = vec![1; self.generators.len()];
        length_table(&self.generators, &ones, x).swap_remove(x as usize)
    }

    /// `𝒰_k`, scanning `x ∈ ⟦g_min·k, g_max·k⟧`.
    pub fn unions(&self, k: u64) -> NatSet {
        if k == 0 {
            return NatSet::singleton(0);
        }
        let lo = self.min_generator() * k;
        let hi = self.max_generator() * k;
        let ones = vec![1; self.generators.len()];
        let table = length_table(&self.generators, &ones, hi);
        let mut out = NatSet::new();
        for l in &table[lo as usize..=hi as usize] {
            if l.contains(k) {
                out.union_with(l);
            }
        }
        out
    }
}

/// Weighted length sets `L(v; η)` for every `v ≤ max_x` by knapsack DP over
/// the generators: `L(v) = ⋃_i (L(v − g_i) + η_i)`, `L(0) = {0}`.
pub(crate) fn length_table(generators: &[u64], weights: &[u64], max_x: u64) -> Vec<NatSet> {
    let mut table = vec![NatSet::new(); max_x as usize + 1];
    table[0] = NatSet::singleton(0);
    for v in 1..=max_x as usize {
        let mut l = NatSet::new();
        for (&g, &w) in generators.iter().zip(weights) {
            let g = g as usize;
            if g > v {
                break;
            }
            if !table[v - g].is_empty() {
                l.union_with(&table[v - g].translate(w));
            }
        }
        table[v] = l;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> NatSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn construction_checks() {
        assert!(NumericalMonoid::new(vec![2, 3]).is_ok());
        assert!(NumericalMonoid::new(vec![1]).is_ok());
        assert_eq!(NumericalMonoid::new(vec![2, 4]), Err(Error::GcdNotOne(2)));
        assert_eq!(NumericalMonoid::new(vec![]), Err(Error::EmptyGenerators));
        assert_eq!(NumericalMonoid::new(vec![3, 2]), Err(Error::UnsortedGenerators));
        assert_eq!(NumericalMonoid::new(vec![2, 3, 5]), Err(Error::NonMinimalGenerator(5)));
        assert_eq!(NumericalMonoid::new(vec![0, 1]), Err(Error::ZeroGenerator));
        assert_eq!(NumericalMonoid::new(vec![1, 2]), Err(Error::NonMinimalGenerator(2)));
    }

    #[test]
    fn length_sets_of_two_three() {
        let h = NumericalMonoid::new(vec![2, 3]).unwrap();
        assert_eq!(h.length_set(6), set(&[2, 3]));
        assert_eq!(h.length_set(1), NatSet::new());
        assert_eq!(h.length_set(0), set(&[0]));
        assert_eq!(h.length_set(12), set(&[4, 5, 6]));
        assert_eq!(h.length_set(7), set(&[3]));
    }

    #[test]
    fn unions_of_two_three() {
        let h = NumericalMonoid::new(vec![2, 3]).unwrap();
        assert_eq!(h.unions(0), set(&[0]));
        assert_eq!(h.unions(2), set(&[2, 3]));
        assert_eq!(h.unions(3), set(&[2, 3, 4]));
        let u4 = h.unions(4);
        assert_eq!(u4.min_elem(), Some(3));
        assert_eq!(u4.max_elem(), Some(6));
        let u6 = h.unions(6);
        assert_eq!((u6.min_elem(), u6.max_elem()), (Some(4), Some(9)));
    }

    #[test]
    fn naturals_have_unique_lengths() {
        let h = NumericalMonoid::new(vec![1]).unwrap();
        for k in 0..10 {
            assert_eq!(h.unions(k), set(&[k]));
        }
    }

    #[test]
    fn window_bounds_hold() {
        let h = NumericalMonoid::new(vec![4, 6, 7]).unwrap();
        for x in 0..80u64 {
            for k in h.length_set(x).iter() {
                assert!(4 * k <= x && x <= 7 * k);
            }
        }
    }
}
