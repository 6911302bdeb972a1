//! Unions of sets of lengths and the invariants derived from them: nested
//! unions, local and global elasticities, delta sets and `δ`.

use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::family::{Backend, LengthSystem, Members};
use crate::monoids::AtomBase;
use crate::natset::{ExtNat, ExtRat, NatSet};

pub const DEFAULT_I_MAX: usize = 8;

/// `𝒰_{k,i}`: `u` with its minimum and maximum removed `i − 1` times.
pub fn nested_unions(u: &NatSet, i: usize) -> NatSet {
    assert!(i >= 1, "nested unions are indexed from 1");
    let mut out = u.clone();
    for _ in 1..i {
        if out.is_empty() {
            break;
        }
        out = out.strip_ends();
    }
    out
}

/// `(λ_{k,i}, ρ_{k,i})` for `i = 1..=i_max`, with `inf ∅ = ∞` and `sup ∅ = 0`.
pub fn local_elasticities(u: &NatSet, i_max: usize) -> (Vec<ExtNat>, Vec<ExtNat>) {
    let mut lambdas = Vec::with_capacity(i_max);
    let mut rhos = Vec::with_capacity(i_max);
    let mut cur = u.clone();
    for _ in 0..i_max {
        lambdas.push(cur.inf());
        rhos.push(cur.sup());
        cur = cur.strip_ends();
    }
    (lambdas, rhos)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub k: u64,
    pub unions: NatSet,
    pub lambda: ExtNat,
    pub rho: ExtNat,
    pub lambda_nested: Vec<ExtNat>,
    pub rho_nested: Vec<ExtNat>,
    /// `sup Δ(𝒰_k)`, `0` when `Δ(𝒰_k) = ∅`.
    pub sup_delta: ExtNat,
    pub exact: bool,
}

impl ProfileRow {
    pub fn new(k: u64, unions: NatSet, exact: bool, i_max: usize) -> Self {
        let (lambda_nested, rho_nested) = local_elasticities(&unions, i_max.max(1));
        ProfileRow {
            k,
            lambda: unions.inf(),
            rho: unions.sup(),
            sup_delta: unions.delta_set().sup(),
            lambda_nested,
            rho_nested,
            unions,
            exact,
        }
    }
}

/// `𝒰_0, …, 𝒰_H` together with their local elasticities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionsProfile {
    pub k_horizon: u64,
    pub i_max: usize,
    pub rows: Vec<ProfileRow>,
}

impl UnionsProfile {
    /// Computes every `𝒰_k` for `k ≤ k_horizon` of `sys`, in parallel over `k`.
    pub fn compute(sys: &LengthSystem, i_max: usize) -> Result<Self, Error> {
        let h = sys.config.k_horizon;
        let members = sys.members_up_to(h)?;
        Ok(Self::from_members(&members, h, i_max))
    }

    pub fn from_members(members: &Members, k_horizon: u64, i_max: usize) -> Self {
        let rows = (0..=k_horizon)
            .into_par_iter()
            .map(|k| ProfileRow::new(k, members.containing(k).union(), members.exact, i_max))
            .collect();
        UnionsProfile { k_horizon, i_max, rows }
    }

    /// Builds a profile from given unions `𝒰_0, 𝒰_1, …`.
    pub fn from_unions(unions: Vec<NatSet>, exact: bool, i_max: usize) -> Self {
        assert!(!unions.is_empty(), "a profile needs at least 𝒰_0");
        let k_horizon = unions.len() as u64 - 1;
        let rows = unions
            .into_iter()
            .enumerate()
            .map(|(k, u)| ProfileRow::new(k as u64, u, exact, i_max))
            .collect();
        UnionsProfile { k_horizon, i_max, rows }
    }

    pub fn horizon(&self) -> u64 {
        self.k_horizon
    }

    pub fn row(&self, k: u64) -> &ProfileRow {
        &self.rows[k as usize]
    }

    pub fn unions(&self, k: u64) -> &NatSet {
        &self.rows[k as usize].unions
    }

    pub fn lambda(&self, k: u64) -> ExtNat {
        self.rows[k as usize].lambda
    }

    pub fn rho(&self, k: u64) -> ExtNat {
        self.rows[k as usize].rho
    }

    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }

    /// `Δ_∪` restricted to the horizon.
    pub fn delta_union(&self) -> NatSet {
        let mut out = NatSet::new();
        for r in &self.rows {
            out.union_with(&r.unions.delta_set());
        }
        out
    }

    /// CSV with columns `k,lambda_k,rho_k,card,sup_delta,exact`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lambda_k,rho_k,card,sup_delta,exact\n");
        for r in &self.rows {
            let sup_delta = if r.unions.len() <= 1 {
                "-".to_string()
            } else {
                r.sup_delta.to_string()
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k,
                r.lambda,
                r.rho,
                r.unions.len(),
                sup_delta,
                r.exact
            )
            .unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    /// `Δ(𝓛)` over the members enumerated within the horizon.
    pub delta_family: NatSet,
    /// `Δ_∪(𝓛)` over `k ≤ k_horizon`.
    pub delta_union: NatSet,
    /// `δ`, read off the unions.
    pub delta_min: ExtNat,
    pub gcd_delta: u64,
    pub stabilized: bool,
}

impl DeltaReport {
    /// `δ′`: `1` when `Δ = ∅`, `δ` otherwise.
    pub fn delta_prime(&self) -> u64 {
        self.delta_min.finite().unwrap_or(1)
    }
}

/// Computes `Δ(𝓛)` from `members` and `Δ_∪` from `profile`, and cross-checks
/// the two routes to `δ`.
pub fn delta_report(members: &Members, profile: &UnionsProfile) -> Result<DeltaReport, Error> {
    let mut delta_family = NatSet::new();
    for l in &members.sets {
        delta_family.union_with(&l.delta_set());
    }
    let delta_union = profile.delta_union();
    let gcd_delta = delta_family.gcd();
    if delta_family.is_empty() != delta_union.is_empty() {
        return Err(Error::Inconsistent(format!(
            "Δ(𝓛) = {delta_family} but Δ_∪ = {delta_union}"
        )));
    }
    if let Some(bad) = delta_union.iter().find(|d| d % gcd_delta.max(1) != 0) {
        return Err(Error::Inconsistent(format!(
            "{bad} ∈ Δ_∪ is not a multiple of gcd Δ(𝓛) = {gcd_delta}"
        )));
    }
    let delta_min = delta_union.inf();
    let stabilized = delta_family.inf() == ExtNat::Fin(gcd_delta) && delta_min == ExtNat::Fin(gcd_delta)
        || delta_family.is_empty();
    Ok(DeltaReport {
        delta_family,
        delta_union,
        delta_min,
        gcd_delta,
        stabilized,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Acceptance {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElasticityReport {
    /// `ρ(𝓛)` when certified; otherwise the best upper bound.
    pub rho: ExtRat,
    pub lambda: ExtRat,
    pub accepted: Acceptance,
    pub witness: Option<NatSet>,
    /// Largest `ρ(L)` among the enumerated members.
    pub observed: ExtRat,
}

impl ElasticityReport {
    fn new(rho: ExtRat, accepted: Acceptance, witness: Option<NatSet>, observed: ExtRat) -> Self {
        ElasticityReport {
            rho,
            lambda: rho.recip(),
            accepted,
            witness,
            observed,
        }
    }
}

fn first_max_elasticity(sets: &[NatSet]) -> (ExtRat, Option<NatSet>) {
    let mut best = (ExtRat::zero(), None);
    for l in sets {
        let r = l.elasticity();
        if best.1.is_none() || r > best.0 {
            best = (r, Some(l.clone()));
        }
    }
    best
}

fn pumpable(l: &NatSet) -> bool {
    l.contains(0) && l.len() >= 2
}

/// `ρ(𝓛)`, whether it is accepted, and a witness `L` with `ρ(L) = ρ(𝓛)`.
/// Only exhibited witnesses are trusted; a block monoid whose bound is not
/// attained among `members` is reported as `unknown`.
pub fn elasticity_report(sys: &LengthSystem, members: &Members) -> ElasticityReport {
    let (observed, observed_witness) = first_max_elasticity(&members.sets);
    if let Some(w) = members.sets.iter().find(|l| pumpable(l)) {
        return ElasticityReport::new(ExtRat::Inf, Acceptance::No, Some(w.clone()), observed);
    }
    match &sys.backend {
        Backend::Monoid(m) => {
            if m.weights().iter().all(|&w| w == 0) {
                return ElasticityReport::new(
                    ExtRat::zero(),
                    Acceptance::Yes,
                    Some(NatSet::singleton(0)),
                    observed,
                );
            }
            if m.has_zero_weight() {
                return ElasticityReport::new(ExtRat::Inf, Acceptance::Unknown, observed_witness, observed);
            }
            let bound = m.elasticity_upper_bound();
            match m.base() {
                AtomBase::Numerical(_) => {
                    ElasticityReport::new(bound, Acceptance::Yes, m.numerical_witness(), observed)
                }
                AtomBase::Block(_) => {
                    match members.sets.iter().find(|l| l.elasticity() == bound) {
                        Some(w) => ElasticityReport::new(bound, Acceptance::Yes, Some(w.clone()), observed),
                        None => ElasticityReport::new(bound, Acceptance::Unknown, None, observed),
                    }
                }
            }
        }
        Backend::Generated(g) => {
            if let Some(w) = g.generators().iter().find(|l| pumpable(l)) {
                return ElasticityReport::new(ExtRat::Inf, Acceptance::No, Some(w.clone()), observed);
            }
            let (rho, witness) = first_max_elasticity(g.generators());
            ElasticityReport::new(rho, Acceptance::Yes, witness, observed)
        }
        Backend::Explicit(_) => ElasticityReport::new(observed, Acceptance::Yes, observed_witness, observed),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum RhoVerdict {
    Infinite { witness: NatSet },
    Finite { rho: ExtRat },
    Unknown,
}

/// Decides whether `ρ(𝓛) = ∞`. A member containing `0` and another element
/// forces `ρ = ∞`; finiteness is asserted only where a global bound exists.
pub fn rho_infinite_detect(sys: &LengthSystem, members: &Members) -> RhoVerdict {
    if let Some(w) = members.sets.iter().find(|l| pumpable(l)) {
        return RhoVerdict::Infinite { witness: w.clone() };
    }
    let report = elasticity_report(sys, members);
    match &sys.backend {
        Backend::Generated(g) => {
            if let Some(w) = g.generators().iter().find(|l| pumpable(l)) {
                return RhoVerdict::Infinite { witness: w.clone() };
            }
            RhoVerdict::Finite { rho: report.rho }
        }
        Backend::Monoid(m) if m.has_zero_weight() && !m.weights().iter().all(|&w| w == 0) => RhoVerdict::Unknown,
        _ => match report.rho {
            ExtRat::Inf => RhoVerdict::Unknown,
            rho => RhoVerdict::Finite { rho },
        },
    }
}

/// Outcome of a batch of identity checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checked: u64,
    pub violations: Vec<String>,
}

impl CheckReport {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.violations.len() < 32 {
            self.violations.push(msg());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

fn rat(x: u64) -> ExtRat {
    ExtRat::from_integer(x)
}

/// Checks the basic union and delta identities on an exact profile:
/// `𝒰_{h,i} + 𝒰_{k,j} ⊆ 𝒰_{h+k,i+j−1}` with the matching inequalities on
/// `λ_{·,·}` and `ρ_{·,·}`, symmetry `h ∈ 𝒰_k ⇔ k ∈ 𝒰_h`, `ρ_k ≤ kρ`,
/// `λ_k ≥ kλ`, `δ ∣ y − x` inside members and unions, `℘ ∣ gcd Δ`,
/// `δ = gcd Δ = min Δ_∪` and `sup Δ(L + L′) ≤ max(sup Δ(L), sup Δ(L′))`.
pub fn check_lemmas(
    profile: &UnionsProfile,
    members: &Members,
    delta: &DeltaReport,
    elasticity: &ElasticityReport,
    wp: u64,
) -> CheckReport {
    let h_max = profile.horizon();
    let i_max = profile.i_max.max(1);
    let nested: Vec<Vec<NatSet>> = profile
        .rows
        .iter()
        .map(|r| {
            let mut v = Vec::with_capacity(i_max);
            let mut cur = r.unions.clone();
            for _ in 0..i_max {
                v.push(cur.clone());
                cur = cur.strip_ends();
            }
            v
        })
        .collect();

    let pair_reports: Vec<CheckReport> = (0..=h_max)
        .into_par_iter()
        .map(|h| {
            let mut rep = CheckReport::default();
            for k in h..=h_max - h {
                for i in 1..=i_max {
                    for j in 1..=(i_max + 1 - i) {
                        let a = &nested[h as usize][i - 1];
                        let b = &nested[k as usize][j - 1];
                        let c = &nested[(h + k) as usize][i + j - 2];
                        let s = a.sumset(b);
                        rep.check(s.is_subset(c), || {
                            format!("𝒰_{{{h},{i}}} + 𝒰_{{{k},{j}}} ⊄ 𝒰_{{{},{}}}", h + k, i + j - 1)
                        });
                        if !a.is_empty() && !b.is_empty() {
                            let lam = c.inf();
                            let rho = c.sup();
                            let ok = lam <= a.inf() + b.inf() && a.sup() + b.sup() <= rho;
                            rep.check(ok, || {
                                format!("local elasticity inequality fails at h={h}, k={k}, i={i}, j={j}")
                            });
                        }
                    }
                }
            }
            rep
        })
        .collect();
    let mut rep = CheckReport::default();
    for r in pair_reports {
        rep.merge(r);
    }

    for h in 0..=h_max {
        for k in 0..=h_max {
            let lhs = profile.unions(k).contains(h);
            let rhs = profile.unions(h).contains(k);
            rep.check(lhs == rhs, || format!("symmetry fails: {h} ∈ 𝒰_{k} is {lhs}, {k} ∈ 𝒰_{h} is {rhs}"));
        }
    }

    let rho = elasticity.rho;
    let lambda = elasticity.lambda;
    for k in 1..=h_max {
        let r = profile.row(k);
        let rho_k = match r.rho {
            ExtNat::Fin(x) => rat(x),
            ExtNat::Inf => ExtRat::Inf,
        };
        rep.check(rho_k <= rho.scale(k), || format!("ρ_{k} = {} > kρ", r.rho));
        let lam_k = match r.lambda {
            ExtNat::Fin(x) => rat(x),
            ExtNat::Inf => ExtRat::Inf,
        };
        rep.check(lambda.scale(k) <= lam_k, || format!("λ_{k} = {} < kλ", r.lambda));
    }

    if let ExtNat::Fin(d) = delta.delta_min {
        for l in &members.sets {
            if let Some(m) = l.min_elem() {
                rep.check(l.iter().all(|x| (x - m) % d == 0), || format!("δ = {d} does not divide differences in {l}"));
            }
        }
        for r in &profile.rows {
            rep.check(r.unions.iter().all(|x| x.abs_diff(r.k) % d == 0), || {
                format!("δ = {d} does not divide differences in 𝒰_{}", r.k)
            });
        }
        rep.check(delta.gcd_delta == d, || format!("gcd Δ = {} ≠ δ = {d}", delta.gcd_delta));
        rep.check(delta.delta_family.inf() == ExtNat::Fin(d), || {
            format!("min Δ(𝓛) = {} ≠ δ = {d}", delta.delta_family.inf())
        });
    }
    rep.check(
        if wp == 0 { delta.gcd_delta == 0 } else { delta.gcd_delta.is_multiple_of(wp) },
        || format!("℘ = {wp} does not divide gcd Δ = {}", delta.gcd_delta),
    );

    let sample: Vec<&NatSet> = members.sets.iter().take(48).collect();
    for (i, a) in sample.iter().enumerate() {
        for b in &sample[i..] {
            let lhs = a.sumset(b).delta_set().sup();
            let rhs = a.delta_set().sup().max(b.delta_set().sup());
            rep.check(lhs <= rhs, || format!("sup Δ({a} + {b}) = {lhs} > {rhs}"));
        }
    }
    rep
}

/// With an accepted witness `L` and `n = inf L`: `ρ_{nk} = nkρ` and
/// `λ_{nkρ} = nk` for every `k ≥ 1` within the horizon.
pub fn check_accepted_identities(profile: &UnionsProfile, e: &ElasticityReport) -> Result<CheckReport, Error> {
    let (Acceptance::Yes, Some(w), ExtRat::Fin(rho)) = (e.accepted, &e.witness, e.rho) else {
        return Err(Error::Inconsistent("elasticity is not accepted with a witness".into()));
    };
    if rho == Ratio::from_integer(0) {
        return Err(Error::Inconsistent("elasticity is zero".into()));
    }
    let n = w.min_elem().ok_or_else(|| Error::Inconsistent("empty witness".into()))?;
    let mut rep = CheckReport::default();
    let h = profile.horizon();
    let mut k = 1;
    while n * k <= h {
        let nk = n * k;
        let nk_rho = ExtRat::Fin(rho).scale_integral(nk).ok_or_else(|| {
            Error::Inconsistent(format!("{nk}·ρ is not an integer"))
        })?;
        rep.check(profile.rho(nk) == ExtNat::Fin(nk_rho), || {
            format!("ρ_{nk} = {} ≠ {nk_rho}", profile.rho(nk))
        });
        if nk_rho <= h {
            rep.check(profile.lambda(nk_rho) == ExtNat::Fin(nk), || {
                format!("λ_{nk_rho} = {} ≠ {nk}", profile.lambda(nk_rho))
            });
        }
        k += 1;
    }
    Ok(rep)
}

/// The five equivalent conditions for accepted elasticity, each evaluated
/// within the horizon. `b`–`e` carry the smallest `n` that satisfies them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub a: Option<bool>,
    pub b: Option<u64>,
    pub c: Option<u64>,
    pub d: Option<u64>,
    pub e: Option<u64>,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        let flags = [self.b.is_some(), self.c.is_some(), self.d.is_some(), self.e.is_some()];
        let all_same = flags.iter().all(|&f| f == flags[0]);
        all_same && self.a.is_none_or(|a| a == flags[0])
    }
}

pub fn accepted_equivalence(profile: &UnionsProfile, e: &ElasticityReport) -> EquivalenceReport {
    let a = match e.accepted {
        Acceptance::Yes => Some(true),
        Acceptance::No => Some(false),
        Acceptance::Unknown => None,
    };
    let h = profile.horizon();
    let rho = e.rho;
    let rho_eq = |n: u64| -> bool {
        let target = rho.scale(n);
        matches!(profile.rho(n), ExtNat::Fin(x) if ExtRat::from_integer(x) == target)
    };
    let lam_eq = |n: u64| -> bool {
        match rho.scale_integral(n) {
            Some(m) if m >= 1 && m <= h => profile.lambda(m) == ExtNat::Fin(n),
            _ => false,
        }
    };
    let b = (1..=h / 2).find(|&n| (1..=h / n).all(|k| rho_eq(n * k)));
    let c = (1..=h).find(|&n| rho_eq(n));
    let d = (1..=h).find(|&n| {
        rho.scale_integral(n).is_some_and(|m| m >= 1 && m <= h)
            && (1..).take_while(|&k| rho.scale_integral(n * k).is_some_and(|m| m <= h)).all(|k| lam_eq(n * k))
    });
    let e_ = (1..=h).find(|&n| lam_eq(n));
    EquivalenceReport { a, b, c, d, e: e_ }
}

/// Searches for `ℓ ≥ 1` and a member `L` with `ℓ + δ·⟦0,q⟧ ⊆ L ⊆ 𝒰_ℓ`.
pub fn delta_progression(
    profile: &UnionsProfile,
    members: &Members,
    delta: u64,
    q: u64,
) -> Option<(u64, NatSet)> {
    for l in &members.sets {
        for ell in l.iter().filter(|&x| x >= 1 && x <= profile.horizon()) {
            if (0..=q).all(|t| l.contains(ell + t * delta)) && l.is_subset(profile.unions(ell)) {
                return Some((ell, l.clone()));
            }
        }
    }
    None
}

/// Checks `𝒰_{℘k}(𝓛) = ℘·𝒰_k(𝓛*)` given both profiles.
pub fn check_rescaling(profile: &UnionsProfile, primitive: &UnionsProfile, wp: u64) -> CheckReport {
    let mut rep = CheckReport::default();
    for k in 0..=primitive.horizon() {
        if wp * k > profile.horizon() {
            break;
        }
        let lhs = profile.unions(wp * k);
        let rhs = primitive.unions(k).dilate(wp);
        rep.check(*lhs == rhs, || format!("𝒰_{} = {lhs} ≠ {wp}·𝒰_{k}(𝓛*) = {rhs}", wp * k));
    }
    for k in 1..=profile.horizon() {
        if k % wp.max(1) != 0 || wp == 0 {
            rep.check(profile.unions(k).is_empty(), || format!("𝒰_{k} ≠ ∅ although ℘ = {wp} ∤ {k}"));
        }
    }
    rep
}

/// `gcd` over a list, `gcd ∅ = 0`.
pub fn gcd_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(0, |a, b| a.gcd(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ExplicitFamily, GeneratedFamily};
    use crate::monoids::{BlockMonoid, FiniteAbelianGroup, NumericalMonoid, WeightedAtomSystem};

    fn set(xs: &[u64]) -> NatSet {
        xs.iter().copied().collect()
    }

    fn numerical(g: &[u64], h: u64) -> LengthSystem {
        let m = NumericalMonoid::new(g.to_vec()).unwrap();
        LengthSystem::monoid(WeightedAtomSystem::unit(AtomBase::Numerical(m)), h)
    }

    fn block(n: &[u64], h: u64) -> LengthSystem {
        let b = BlockMonoid::full(FiniteAbelianGroup::new(n.to_vec()).unwrap()).unwrap();
        LengthSystem::monoid(WeightedAtomSystem::unit(AtomBase::Block(b)), h)
    }

    fn analyse(sys: &LengthSystem) -> (Members, UnionsProfile, DeltaReport, ElasticityReport) {
        let members = sys.members_up_to(sys.config.k_horizon).unwrap();
        let profile = UnionsProfile::compute(sys, DEFAULT_I_MAX).unwrap();
        let delta = delta_report(&members, &profile).unwrap();
        let e = elasticity_report(sys, &members);
        (members, profile, delta, e)
    }

    #[test]
    fn nested_examples() {
        assert_eq!(nested_unions(&set(&[2, 3, 4]), 2), set(&[3]));
        assert_eq!(nested_unions(&set(&[5]), 2), NatSet::new());
        assert_eq!(nested_unions(&set(&[3, 4, 6, 9]), 2), set(&[4, 6]));
        assert_eq!(nested_unions(&set(&[3, 4, 6, 9]), 1), set(&[3, 4, 6, 9]));
    }

    #[test]
    fn local_elasticity_examples() {
        let (l, r) = local_elasticities(&set(&[2, 3]), 2);
        assert_eq!((l[0], r[0]), (ExtNat::Fin(2), ExtNat::Fin(3)));
        assert_eq!((l[1], r[1]), (ExtNat::Inf, ExtNat::Fin(0)));
        let (l, r) = local_elasticities(&NatSet::new(), 1);
        assert_eq!((l[0], r[0]), (ExtNat::Inf, ExtNat::Fin(0)));
    }

    #[test]
    fn profile_of_two_three() {
        let (_, p, delta, e) = analyse(&numerical(&[2, 3], 12));
        assert_eq!(*p.unions(3), set(&[2, 3, 4]));
        assert_eq!((p.lambda(4), p.rho(4)), (ExtNat::Fin(3), ExtNat::Fin(6)));
        assert_eq!((p.lambda(6), p.rho(6)), (ExtNat::Fin(4), ExtNat::Fin(9)));
        assert_eq!(delta.delta_family, set(&[1]));
        assert_eq!(delta.delta_min, ExtNat::Fin(1));
        assert!(delta.stabilized);
        assert_eq!(e.rho, "3/2".parse().unwrap());
        assert_eq!(e.accepted, Acceptance::Yes);
        assert_eq!(e.witness, Some(set(&[2, 3])));
        assert!(p.to_csv().lines().any(|l| l == "6,4,9,6,1,true"));
    }

    #[test]
    fn block_examples() {
        let (_, p, delta, _) = analyse(&block(&[2], 6));
        assert_eq!(*p.unions(5), set(&[5]));
        assert_eq!(delta.delta_min, ExtNat::Inf);
        assert!(delta.delta_family.is_empty());
        assert!(p.to_csv().contains("\n5,5,5,1,-,true\n"));

        let (_, p, delta, e) = analyse(&block(&[3], 6));
        assert_eq!(*p.unions(2), set(&[2, 3]));
        assert_eq!(delta.delta_family, set(&[1]));
        assert_eq!(e.rho, "3/2".parse().unwrap());
        assert_eq!(e.accepted, Acceptance::Yes);
        assert_eq!(e.witness, Some(set(&[2, 3])));
    }

    #[test]
    fn generated_examples() {
        let g = GeneratedFamily::new(vec![set(&[2, 3]), set(&[5])]).unwrap();
        let sys = LengthSystem::generated(g, 12);
        let (_, p, _, e) = analyse(&sys);
        assert_eq!(e.rho, "3/2".parse().unwrap());
        assert_eq!(e.witness, Some(set(&[2, 3])));
        assert!(p.unions(1).is_empty());

        let g = GeneratedFamily::new(vec![set(&[2, 3])]).unwrap();
        let p = UnionsProfile::compute(&LengthSystem::generated(g, 8), 2).unwrap();
        assert_eq!(*p.unions(7), set(&[6, 7, 8, 9]));
    }

    #[test]
    fn infinite_elasticity() {
        let g = GeneratedFamily::new(vec![set(&[0, 2])]).unwrap();
        let sys = LengthSystem::generated(g, 6);
        let members = sys.members_up_to(6).unwrap();
        assert_eq!(
            rho_infinite_detect(&sys, &members),
            RhoVerdict::Infinite { witness: set(&[0, 2]) }
        );
        let sys = numerical(&[2, 3], 6);
        let members = sys.members_up_to(6).unwrap();
        assert_eq!(
            rho_infinite_detect(&sys, &members),
            RhoVerdict::Finite { rho: "3/2".parse().unwrap() }
        );
        let sys = LengthSystem::explicit(ExplicitFamily::new(vec![set(&[1])]), 4);
        let members = sys.members_up_to(4).unwrap();
        assert_eq!(rho_infinite_detect(&sys, &members), RhoVerdict::Finite { rho: ExtRat::one() });
    }

    #[test]
    fn lemma_suite_on_small_examples() {
        for sys in [numerical(&[2, 3], 14), numerical(&[3, 5], 12), block(&[3], 6), block(&[2, 2], 5)] {
            let (members, p, delta, e) = analyse(&sys);
            let rep = check_lemmas(&p, &members, &delta, &e, sys.wp());
            assert!(rep.passed(), "{:?}", rep.violations);
            assert!(rep.checked > 100);
        }
    }

    #[test]
    fn accepted_identities_and_equivalence() {
        let (_, p, _, e) = analyse(&numerical(&[2, 3], 40));
        let rep = check_accepted_identities(&p, &e).unwrap();
        assert!(rep.passed() && rep.checked > 10);
        let eq = accepted_equivalence(&p, &e);
        assert!(eq.consistent(), "{eq:?}");
        assert_eq!(eq.c, Some(2));
    }

    #[test]
    fn delta_progressions_exist() {
        let (members, p, delta, _) = analyse(&numerical(&[3, 5], 20));
        let d = delta.delta_min.finite().unwrap();
        for q in 0..=3 {
            let (ell, l) = delta_progression(&p, &members, d, q).unwrap();
            assert!(ell >= 1 && l.contains(ell + q * d));
        }
    }

    #[test]
    fn zero_wp_family() {
        let sys = LengthSystem::explicit(ExplicitFamily::new(vec![NatSet::new(), set(&[0])]), 5);
        let (_, p, delta, e) = analyse(&sys);
        assert_eq!(sys.wp(), 0);
        assert_eq!(*p.unions(0), set(&[0]));
        for k in 1..=5 {
            assert!(p.unions(k).is_empty());
        }
        assert_eq!(delta.delta_min, ExtNat::Inf);
        assert_eq!(e.rho, ExtRat::zero());
        assert_eq!(e.lambda, ExtRat::Inf);
    }
}
