//! Subadditive families of subsets of ℕ: monoid-backed systems of (weighted)
//! sets of lengths, families generated by sumsets, and explicit finite lists.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::monoids::WeightedAtomSystem;
use crate::natset::{ExtRat, NatSet};

/// A deduplicated, canonically ordered list of family members, with a flag
/// telling whether the enumeration is complete for the requested range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Members {
    pub sets: Vec<NatSet>,
    pub exact: bool,
}

impl Members {
    pub fn containing(&self, k: u64) -> Members {
        Members {
            sets: self.sets.iter().filter(|l| l.contains(k)).cloned().collect(),
            exact: self.exact,
        }
    }

    pub fn union(&self) -> NatSet {
        let mut out = NatSet::new();
        for l in &self.sets {
            out.union_with(l);
        }
        out
    }
}

/// `𝒰_k` together with its exactness flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unions {
    pub set: NatSet,
    pub exact: bool,
}

/// The subsemigroup of the power monoid generated by `G_1, …, G_m`:
/// `{Σ a_i G_i : a ∈ ℕ^m, Σ a_i ≥ 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedFamily {
    generators: Vec<NatSet>,
}

impl GeneratedFamily {
    pub fn new(generators: Vec<NatSet>) -> Result<Self, Error> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if generators.iter().any(NatSet::is_empty) {
            return Err(Error::InvalidWeights("generators of a sumset family must be non-empty".into()));
        }
        Ok(GeneratedFamily { generators })
    }

    pub fn generators(&self) -> &[NatSet] {
        &self.generators
    }

    /// Every generator has minimum at least 1, so only finitely many members
    /// contain any given `k`.
    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(|g| g.min_elem().unwrap() >= 1)
    }

    /// The member `Σ a_i G_i`.
    pub fn member(&self, coefficients: &[u64]) -> Result<NatSet, Error> {
        if coefficients.len() != self.generators.len() || coefficients.iter().all(|&a| a == 0) {
            return Err(Error::InvalidWeights(
                "coefficient vector must match the generators and be non-zero".into(),
            ));
        }
        let mut acc: Option<NatSet> = None;
        for (g, &a) in self.generators.iter().zip(coefficients) {
            if a == 0 {
                continue;
            }
            let part = g.n_fold_sumset(a)?;
            acc = Some(match acc {
                None => part,
                Some(x) => x.sumset(&part),
            });
        }
        Ok(acc.expect("non-zero coefficients"))
    }

    pub fn wp(&self) -> u64 {
        self.generators
            .iter()
            .map(|g| g.positive_part().gcd())
            .fold(0, |a, b| a.gcd(&b))
    }

    /// `𝓛* = ℘⁻¹·𝓛`.
    pub fn primitivize(&self) -> Result<GeneratedFamily, Error> {
        let p = self.wp();
        if p == 0 {
            return Err(Error::ZeroWp);
        }
        Ok(GeneratedFamily {
            generators: self.generators.iter().map(|g| g.contract(p)).collect(),
        })
    }

    /// Members with `inf ≤ k_max`. In exact mode the coefficient vectors are
    /// bounded by `Σ a_i·min G_i ≤ k_max`; otherwise additionally by
    /// `Σ a_i ≤ coeff_cap`, and the result is flagged inexact.
    pub fn members_up_to(&self, k_max: u64, coeff_cap: u64, budget: u64) -> Result<Members, Error> {
        let exact = self.is_exact();
        let cap = if exact { u64::MAX } else { coeff_cap };
        let mins: Vec<u64> = self.generators.iter().map(|g| g.min_elem().unwrap()).collect();
        let mut found = BTreeSet::new();
        let mut visited = 0u64;
        self.members_rec(0, None, 0, cap, k_max, &mins, &mut found, &mut visited, budget)?;
        Ok(Members {
            sets: found.into_iter().collect(),
            exact,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn members_rec(
        &self,
        start: usize,
        acc: Option<&NatSet>,
        min_sum: u64,
        count_left: u64,
        k_max: u64,
        mins: &[u64],
        found: &mut BTreeSet<NatSet>,
        visited: &mut u64,
        budget: u64,
    ) -> Result<(), Error> {
        *visited += 1;
        if *visited > budget {
            return Err(Error::HorizonExceeded {
                what: "generated-family coefficient enumeration".into(),
                limit: budget,
            });
        }
        if let Some(a) = acc {
            found.insert(a.clone());
        }
        if count_left == 0 {
            return Ok(());
        }
        for i in start..self.generators.len() {
            if min_sum + mins[i] > k_max {
                continue;
            }
            let next = match acc {
                None => self.generators[i].clone(),
                Some(a) => a.sumset(&self.generators[i]),
            };
            self.members_rec(
                i,
                Some(&next),
                min_sum + mins[i],
                count_left - 1,
                k_max,
                mins,
                found,
                visited,
                budget,
            )?;
        }
        Ok(())
    }

    /// `ρ` of a generated family in exact mode is `max ρ(G_i)`: for
    /// `L = Σ a_i G_i`, `sup L / inf L = Σ a_i sup G_i / Σ a_i inf G_i` is a
    /// mediant of the generator ratios. Returns the first maximizing generator.
    pub fn elasticity_witness(&self) -> Option<NatSet> {
        if !self.is_exact() {
            return None;
        }
        let mut best: Option<&NatSet> = None;
        for g in &self.generators {
            if best.is_none_or(|b| g.elasticity() > b.elasticity()) {
                best = Some(g);
            }
        }
        best.cloned()
    }
}

/// Outcome of a subadditivity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Subadditivity {
    Pass,
    Fail { left: NatSet, right: NatSet },
}

/// A finite list of members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFamily {
    members: Vec<NatSet>,
}

impl ExplicitFamily {
    pub fn new(members: Vec<NatSet>) -> Self {
        ExplicitFamily { members }
    }

    pub fn members(&self) -> &[NatSet] {
        &self.members
    }

    /// For every pair `(L_1, L_2)`, look for a member containing `L_1 + L_2`.
    pub fn check_subadditive(&self) -> Subadditivity {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i..] {
                let s = a.sumset(b);
                if !self.members.iter().any(|l| s.is_subset(l)) {
                    return Subadditivity::Fail {
                        left: a.clone(),
                        right: b.clone(),
                    };
                }
            }
        }
        Subadditivity::Pass
    }

    /// `𝓛_α = {L : ρ(L) ≥ α}`.
    pub fn subfamily_alpha(&self, alpha: Ratio<u64>) -> ExplicitFamily {
        let alpha = ExtRat::Fin(alpha);
        ExplicitFamily {
            members: self.members.iter().filter(|l| l.elasticity() >= alpha).cloned().collect(),
        }
    }

    pub fn wp(&self) -> u64 {
        self.members
            .iter()
            .map(|l| l.positive_part().gcd())
            .fold(0, |a, b| a.gcd(&b))
    }

    pub fn members_up_to(&self, k_max: u64) -> Members {
        let sets: BTreeSet<NatSet> = self
            .members
            .iter()
            .filter(|l| l.min_elem().is_some_and(|m| m <= k_max))
            .cloned()
            .collect();
        Members {
            sets: sets.into_iter().collect(),
            exact: true,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    Monoid(WeightedAtomSystem),
    Generated(GeneratedFamily),
    Explicit(ExplicitFamily),
}

/// Horizons and enumeration limits of a [`LengthSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub k_horizon: u64,
    /// Enumeration cap used only in truncated mode (weight-0 atoms or
    /// generators containing 0).
    pub value_horizon: u64,
    /// Maximum number of enumeration nodes per query.
    pub budget: u64,
}

impl SystemConfig {
    pub fn new(k_horizon: u64) -> Self {
        SystemConfig {
            k_horizon,
            value_horizon: (2 * k_horizon).max(8),
            budget: 5_000_000,
        }
    }
}

/// A family of subsets of ℕ together with the horizons it is analysed at.
#[derive(Clone, Debug)]
pub struct LengthSystem {
    pub backend: Backend,
    pub config: SystemConfig,
}

impl LengthSystem {
    pub fn new(backend: Backend, config: SystemConfig) -> Self {
        LengthSystem { backend, config }
    }

    pub fn monoid(sys: WeightedAtomSystem, k_horizon: u64) -> Self {
        Self::new(Backend::Monoid(sys), SystemConfig::new(k_horizon))
    }

    pub fn generated(f: GeneratedFamily, k_horizon: u64) -> Self {
        Self::new(Backend::Generated(f), SystemConfig::new(k_horizon))
    }

    pub fn explicit(f: ExplicitFamily, k_horizon: u64) -> Self {
        Self::new(Backend::Explicit(f), SystemConfig::new(k_horizon))
    }

    /// Whether unions up to the horizon are computed exactly.
    pub fn is_exact(&self) -> bool {
        match &self.backend {
            Backend::Monoid(m) => !m.has_zero_weight(),
            Backend::Generated(g) => g.is_exact(),
            Backend::Explicit(_) => true,
        }
    }

    /// All members `L` with `inf L ≤ k_max`, i.e. every member that
    /// contributes to some `𝒰_k` with `k ≤ k_max`.
    pub fn members_up_to(&self, k_max: u64) -> Result<Members, Error> {
        let c = &self.config;
        match &self.backend {
            Backend::Monoid(m) => m.members_up_to(k_max, c.value_horizon, c.budget),
            Backend::Generated(g) => g.members_up_to(k_max, c.value_horizon, c.budget),
            Backend::Explicit(e) => Ok(e.members_up_to(k_max)),
        }
    }

    pub fn members_containing(&self, k: u64) -> Result<Members, Error> {
        self.check_horizon(k)?;
        Ok(self.members_up_to(k)?.containing(k))
    }

    /// `𝒰_k = ⋃{L ∈ 𝓛 : k ∈ L}`.
    pub fn unions(&self, k: u64) -> Result<Unions, Error> {
        let m = self.members_containing(k)?;
        Ok(Unions {
            set: m.union(),
            exact: m.exact,
        })
    }

    fn check_horizon(&self, k: u64) -> Result<(), Error> {
        if k > self.config.k_horizon {
            return Err(Error::HorizonExceeded {
                what: format!("k = {k}"),
                limit: self.config.k_horizon,
            });
        }
        Ok(())
    }

    /// `℘(𝓛)`.
    pub fn wp(&self) -> u64 {
        match &self.backend {
            Backend::Monoid(m) => m.wp(),
            Backend::Generated(g) => g.wp(),
            Backend::Explicit(e) => e.wp(),
        }
    }

    /// Refuses families whose subadditivity cannot be established.
    pub fn require_subadditive(&self) -> Result<(), Error> {
        match &self.backend {
            Backend::Explicit(e) => match e.check_subadditive() {
                Subadditivity::Pass => Ok(()),
                Subadditivity::Fail { left, right } => Err(Error::NotSubadditive { left, right }),
            },
            _ => Ok(()),
        }
    }
}
