//! Finite-range certificates for the structure of unions: almost arithmetic
//! progressions, the structure condition, periodicity of end patterns and
//! bounded growth of local elasticities. Every producer has an independent
//! verifier that reads nothing but a profile.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::invariants::{Acceptance, ElasticityReport, UnionsProfile};
use crate::natset::{ExtNat, ExtRat, NatSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AapCertificate {
    pub set: NatSet,
    pub d: u64,
    pub m: u64,
    /// Residue of the progression, `0 ≤ z < d`.
    pub z: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum AapRefusal {
    Empty,
    MixedResidues { x: u64, y: u64 },
}

/// Smallest `M` with `(z + d·ℤ) ∩ ⟦lo + M, hi − M⟧ ⊆ set`, assuming every
/// element of `set` lies in `z + d·ℤ`.
fn minimal_bound(set: &NatSet, d: u64, z: u64, lo: u64, hi: u64) -> u64 {
    if lo > hi {
        return 0;
    }
    let first = lo + (z + d - lo % d) % d;
    let mut m = 0;
    let mut p = first;
    while p <= hi {
        if !set.contains(p) {
            m = m.max((p - lo).min(hi - p) + 1);
        }
        p += d;
    }
    m
}

/// The minimal-bound AAP description of `l` with difference `d`.
pub fn aap_decompose(l: &NatSet, d: u64) -> Result<AapCertificate, AapRefusal> {
    assert!(d >= 1, "difference must be positive");
    let (lo, hi) = match (l.min_elem(), l.max_elem()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(AapRefusal::Empty),
    };
    let z = lo % d;
    if let Some(y) = l.iter().find(|y| y % d != z) {
        return Err(AapRefusal::MixedResidues { x: lo, y });
    }
    Ok(AapCertificate {
        set: l.clone(),
        d,
        m: minimal_bound(l, d, z, lo, hi),
        z,
    })
}

/// Whether `l` is an AAP with difference `d` and bound `m` (`∅` counts).
pub fn is_aap(l: &NatSet, d: u64, m: u64) -> bool {
    let (Some(lo), Some(hi)) = (l.min_elem(), l.max_elem()) else {
        return true;
    };
    if l.iter().any(|x| (x - lo) % d != 0) {
        return false;
    }
    let mut p = lo + m;
    while p + m <= hi {
        if (p - lo).is_multiple_of(d) && !l.contains(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Minimal `M` for which `(k + d·ℤ) ∩ ⟦λ_k + M, ρ_k − M⟧ ⊆ 𝒰_k ⊆ k + d·ℤ`,
/// or `None` when the right-hand containment fails.
fn structure_bound(u: &NatSet, k: u64, d: u64) -> Option<u64> {
    if u.iter().any(|x| x.abs_diff(k) % d != 0) {
        return None;
    }
    match (u.min_elem(), u.max_elem()) {
        (Some(lo), Some(hi)) => Some(minimal_bound(u, d, k % d, lo, hi)),
        _ => Some(0),
    }
}

/// Smallest `k_0` such that `ok(k)` holds for every `k ∈ ⟦k_0, end⟧`.
fn onset(end: u64, ok: impl Fn(u64) -> bool) -> u64 {
    (0..=end).rev().find(|&k| !ok(k)).map_or(0, |k| k + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeCheck {
    pub k: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDiagnostics {
    /// `max sup Δ(𝒰_k)` over `k ∈ window`.
    pub big_d: u64,
    pub window: (u64, u64),
    /// Smallest `ℓ ≥ 1` with `ℓ + δ·⟦0,D⟧ ⊆ 𝒰_ℓ`.
    pub ell: Option<u64>,
    /// Smallest `N` with `(k + δ·ℤ) ∩ ⟦ρ_{k−ℓ} + ℓ, ρ_k − N⟧ ⊆ 𝒰_k` from
    /// `max(k_start, ℓ)` to the horizon.
    pub n: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCertificate {
    pub d: u64,
    pub m: u64,
    pub k_start: u64,
    pub k_end: u64,
    pub trivial: bool,
    pub verified_range: Vec<RangeCheck>,
    pub diagnostics: Option<StructureDiagnostics>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub reason: String,
    /// The longest suffix range on which a certificate of this kind would hold.
    pub best_range: Option<(u64, u64)>,
    pub first_violation: Option<u64>,
}

impl Refusal {
    fn new(reason: impl Into<String>) -> Self {
        Refusal {
            reason: reason.into(),
            best_range: None,
            first_violation: None,
        }
    }
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.reason)?;
        if let Some((a, b)) = self.best_range {
            write!(f, " (best range [{a}, {b}]")?;
            if let Some(k) = self.first_violation {
                write!(f, ", first violation at k = {k}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn profile_delta(profile: &UnionsProfile) -> ExtNat {
    profile.delta_union().inf()
}

/// Certifies the structure condition with `d = δ` on `[k_start, horizon]`.
pub fn certify_structure(profile: &UnionsProfile) -> Result<StructureCertificate, Refusal> {
    if !profile.is_exact() {
        return Err(Refusal::new("profile is truncated"));
    }
    match profile_delta(profile) {
        ExtNat::Inf => {
            let h = profile.horizon();
            let verified_range: Vec<RangeCheck> = (0..=h)
                .map(|k| RangeCheck {
                    k,
                    pass: profile.unions(k).is_subset(&NatSet::singleton(k)),
                })
                .collect();
            if let Some(bad) = verified_range.iter().find(|r| !r.pass) {
                return Err(Refusal {
                    reason: "Δ = ∅ but some 𝒰_k ⊄ {k}".into(),
                    best_range: None,
                    first_violation: Some(bad.k),
                });
            }
            Ok(StructureCertificate {
                d: 1,
                m: 0,
                k_start: 0,
                k_end: h,
                trivial: true,
                verified_range,
                diagnostics: None,
            })
        }
        ExtNat::Fin(delta) => certify_structure_with(profile, delta).map(|mut c| {
            c.diagnostics = Some(structure_diagnostics(profile, delta, c.k_start));
            c
        }),
    }
}

/// Searches the minimal `M`, then the minimal onset, for a given `d`.
/// Accepts the first `M` whose onset lies in the lower half of the horizon.
pub fn certify_structure_with(profile: &UnionsProfile, d: u64) -> Result<StructureCertificate, Refusal> {
    assert!(d >= 1, "difference must be positive");
    if !profile.is_exact() {
        return Err(Refusal::new("profile is truncated"));
    }
    let h = profile.horizon();
    let bounds: Vec<Option<u64>> = (0..=h)
        .into_par_iter()
        .map(|k| structure_bound(profile.unions(k), k, d))
        .collect();
    let half = h / 2;
    let tail_fail = (half..=h).rev().find(|&k| bounds[k as usize].is_none());
    if let Some(bad) = tail_fail {
        let start = bad + 1;
        return Err(Refusal {
            reason: format!("𝒰_{bad} ⊄ {bad} + {d}·ℤ"),
            best_range: (start <= h).then_some((start, h)),
            first_violation: Some(bad),
        });
    }
    let m_cap = bounds[half as usize..].iter().flatten().copied().max().unwrap_or(0);
    for m in 0..=m_cap {
        let k_start = onset(h, |k| bounds[k as usize].is_some_and(|b| b <= m));
        if k_start <= half {
            let verified_range = (k_start..=h).map(|k| RangeCheck { k, pass: true }).collect();
            return Ok(StructureCertificate {
                d,
                m,
                k_start,
                k_end: h,
                trivial: false,
                verified_range,
                diagnostics: None,
            });
        }
    }
    unreachable!("M = max over the upper half always has onset ≤ H/2")
}

fn structure_diagnostics(profile: &UnionsProfile, delta: u64, k_start: u64) -> StructureDiagnostics {
    let h = profile.horizon();
    let window = (h.div_ceil(2), h);
    let big_d = (window.0..=window.1)
        .filter_map(|k| profile.row(k).sup_delta.finite())
        .max()
        .unwrap_or(0);
    let ell = (1..=h).find(|&l| (0..=big_d).all(|t| profile.unions(l).contains(l + t * delta)));
    let n = ell.map(|l| {
        let from = k_start.max(l);
        (from..=h)
            .map(|k| {
                let u = profile.unions(k);
                let lo = profile.rho(k - l).finite().unwrap_or(0) + l;
                let hi = profile.rho(k).finite().unwrap_or(0);
                let mut need = 0;
                let mut p = lo + (k % delta + delta - lo % delta) % delta;
                while p <= hi {
                    if !u.contains(p) {
                        need = need.max(hi - p + 1);
                    }
                    p += delta;
                }
                need
            })
            .max()
            .unwrap_or(0)
    });
    StructureDiagnostics {
        big_d,
        window,
        ell,
        n,
    }
}

/// Re-checks a structure certificate against `profile` alone: the condition
/// on the whole range, `d = δ` when `Δ ≠ ∅`, and minimality of `M` and of
/// the onset.
pub fn verify_structure(profile: &UnionsProfile, cert: &StructureCertificate) -> Result<(), String> {
    if cert.k_end > profile.horizon() {
        return Err(format!("certificate range ends at {} beyond the horizon {}", cert.k_end, profile.horizon()));
    }
    if cert.d == 0 {
        return Err("difference 0".into());
    }
    let delta_union = profile.delta_union();
    match delta_union.min_elem() {
        None => {
            if !cert.trivial || cert.d != 1 || cert.m != 0 {
                return Err("Δ_∪ = ∅ requires the trivial certificate d = 1, M = 0".into());
            }
            for k in cert.k_start..=cert.k_end {
                if profile.unions(k).iter().any(|x| x != k) {
                    return Err(format!("𝒰_{k} ⊄ {{{k}}}"));
                }
            }
            return Ok(());
        }
        Some(delta) if delta != cert.d => {
            return Err(format!("d = {} but δ = {delta}", cert.d));
        }
        Some(_) => {}
    }
    let holds = |k: u64, m: u64| -> bool {
        let u = profile.unions(k);
        if u.iter().any(|x| x.abs_diff(k) % cert.d != 0) {
            return false;
        }
        let (Some(lo), Some(hi)) = (u.min_elem(), u.max_elem()) else {
            return true;
        };
        let mut p = lo + m;
        while p + m <= hi {
            if p.abs_diff(k).is_multiple_of(cert.d) && !u.contains(p) {
                return false;
            }
            p += 1;
        }
        true
    };
    if let Some(k) = (cert.k_start..=cert.k_end).find(|&k| !holds(k, cert.m)) {
        return Err(format!("condition fails at k = {k} with M = {}", cert.m));
    }
    if cert.m > 0 && (cert.k_start..=cert.k_end).all(|k| holds(k, cert.m - 1)) {
        return Err(format!("M = {} is not minimal on the range", cert.m));
    }
    if cert.k_start > 0 && holds(cert.k_start - 1, cert.m) {
        return Err(format!("onset {} is not minimal", cert.k_start));
    }
    Ok(())
}

/// One-sided variant `(k + d·ℤ) ∩ ⟦k, ρ_k − M′⟧ ⊆ 𝒰_k` and the two-sided
/// bound it implies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperReduction {
    pub m_prime: u64,
    pub k0: u64,
    pub k1: u64,
    pub implied_m: u64,
    pub holds: bool,
}

/// Finds the minimal one-sided bound `M′` (with onset `k_0` in the lower
/// half), sets `k_1` to the first index from which `𝒰_k ≠ ∅` and
/// `λ_k + d ≤ k ≤ ρ_k − d`, and checks the two-sided condition with
/// `M = max(k_0, k_1, M′)` from `max(k_0, k_1)` on.
pub fn check_upper_reduction(profile: &UnionsProfile, d: u64) -> Option<UpperReduction> {
    let h = profile.horizon();
    let half = h / 2;
    let one_sided = |k: u64| -> Option<u64> {
        let u = profile.unions(k);
        if u.iter().any(|x| x.abs_diff(k) % d != 0) {
            return None;
        }
        let hi = u.max_elem()?;
        let mut need = 0;
        let mut p = k;
        while p <= hi {
            if !u.contains(p) {
                need = need.max(hi - p + 1);
            }
            p += d;
        }
        Some(need)
    };
    let bounds: Vec<Option<u64>> = (0..=h).map(one_sided).collect();
    if bounds[half as usize..].iter().any(Option::is_none) {
        return None;
    }
    let cap = bounds[half as usize..].iter().flatten().copied().max().unwrap_or(0);
    let (m_prime, k0) = (0..=cap)
        .map(|m| (m, onset(h, |k| bounds[k as usize].is_some_and(|b| b <= m))))
        .find(|&(_, k0)| k0 <= half)?;
    let k1 = onset(h, |k| {
        let r = profile.row(k);
        match (r.lambda, r.rho) {
            (ExtNat::Fin(lam), ExtNat::Fin(rho)) => lam + d <= k && k + d <= rho,
            _ => false,
        }
    })
    .max(1);
    let implied_m = k0.max(k1).max(m_prime);
    let from = k0.max(k1);
    let holds = (from..=h).all(|k| structure_bound(profile.unions(k), k, d).is_some_and(|b| b <= implied_m));
    Some(UpperReduction {
        m_prime,
        k0,
        k1,
        implied_m,
        holds,
    })
}

/// With a structure certificate and `N = 1 + max(ρ_0, …, ρ_{k_start−1})`,
/// every `𝒰_k` on the horizon is an AAP with difference `δ′` and bound
/// `max(M, N)`. Returns that bound, or the first `k` where it fails.
pub fn check_aap_corollary(profile: &UnionsProfile, cert: &StructureCertificate) -> Result<u64, u64> {
    let n = if cert.k_start == 0 {
        0
    } else {
        1 + (0..cert.k_start).filter_map(|k| profile.rho(k).finite()).max().unwrap_or(0)
    };
    let bound = cert.m.max(n);
    match (0..=profile.horizon()).find(|&k| !is_aap(profile.unions(k), cert.d, bound)) {
        Some(k) => Err(k),
        None => Ok(bound),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCertificate {
    /// Minimal period of the end patterns.
    pub mu: u64,
    pub k0: u64,
    /// Minimal period `μ′` with `μ′ρ` and `μ′λ` integral, with its onset.
    pub mu_aligned: Option<u64>,
    pub k0_aligned: Option<u64>,
    pub window: u64,
    pub k_end: u64,
    /// `(𝒰_k − λ_k) ∩ ⟦0,M⟧` for `k = k0, …, k0 + μ − 1`.
    pub left_patterns: Vec<NatSet>,
    /// `(ρ_k − 𝒰_k) ∩ ⟦0,M⟧` for `k = k0, …, k0 + μ − 1`.
    pub right_patterns: Vec<NatSet>,
}

fn patterns(profile: &UnionsProfile, window: u64) -> Vec<(NatSet, NatSet)> {
    profile
        .rows
        .iter()
        .map(|r| (r.unions.low_pattern(window), r.unions.high_pattern(window)))
        .collect()
}

/// Minimal onset for period `mu`, provided at least two full periods fit.
fn period_onset(pats: &[(NatSet, NatSet)], h: u64, mu: u64) -> Option<u64> {
    if mu > h {
        return None;
    }
    let k0 = onset(h - mu, |k| pats[k as usize] == pats[(k + mu) as usize]);
    (h + 1 - k0 >= 2 * mu).then_some(k0)
}

fn integral_multiple(x: ExtRat, n: u64) -> bool {
    x.scale_integral(n).is_some()
}

/// The minimal period `μ ≤ H/2` and onset of the truncated end patterns.
/// `rho` enables the aligned period search.
pub fn certify_period(profile: &UnionsProfile, window: u64, rho: Option<ExtRat>) -> Result<PeriodCertificate, Refusal> {
    if !profile.is_exact() {
        return Err(Refusal::new("profile is truncated"));
    }
    let h = profile.horizon();
    let pats = patterns(profile, window);
    let candidates: Vec<(u64, Option<u64>)> = (1..=h / 2)
        .into_par_iter()
        .map(|mu| (mu, period_onset(&pats, h, mu)))
        .collect();
    let Some(&(mu, Some(k0))) = candidates.iter().find(|(_, k0)| k0.is_some()) else {
        let best = (1..=h / 2)
            .map(|mu| (mu, onset(h - mu, |k| pats[k as usize] == pats[(k + mu) as usize])))
            .min_by_key(|&(_, k0)| k0);
        return Err(Refusal {
            reason: format!("no period ≤ {} with two full periods observed", h / 2),
            best_range: best.map(|(_, k0)| (k0, h)),
            first_violation: best.and_then(|(_, k0)| k0.checked_sub(1)),
        });
    };
    let aligned = rho
        .filter(|r| r.is_finite() && !r.is_zero())
        .and_then(|r| {
            candidates.iter().find_map(|&(m, k)| {
                (integral_multiple(r, m) && integral_multiple(r.recip(), m))
                    .then_some(k.map(|k| (m, k)))
                    .flatten()
            })
        });
    Ok(PeriodCertificate {
        mu,
        k0,
        mu_aligned: aligned.map(|a| a.0),
        k0_aligned: aligned.map(|a| a.1),
        window,
        k_end: h,
        left_patterns: (k0..k0 + mu).map(|k| pats[k as usize].0.clone()).collect(),
        right_patterns: (k0..k0 + mu).map(|k| pats[k as usize].1.clone()).collect(),
    })
}

/// Re-checks a period certificate against `profile` alone.
pub fn verify_period(profile: &UnionsProfile, cert: &PeriodCertificate) -> Result<(), String> {
    let h = profile.horizon();
    if cert.k_end > h || cert.mu == 0 {
        return Err("malformed certificate".into());
    }
    let left = |k: u64| profile.unions(k).low_pattern(cert.window);
    let right = |k: u64| profile.unions(k).high_pattern(cert.window);
    let periodic_from = |mu: u64, k0: u64| -> bool {
        mu <= cert.k_end
            && (k0..=cert.k_end - mu).all(|k| left(k) == left(k + mu) && right(k) == right(k + mu))
    };
    if !periodic_from(cert.mu, cert.k0) {
        return Err(format!("patterns are not {}-periodic from {}", cert.mu, cert.k0));
    }
    if cert.k_end + 1 - cert.k0 < 2 * cert.mu {
        return Err("fewer than two full periods observed".into());
    }
    if cert.k0 > 0 && periodic_from(cert.mu, cert.k0 - 1) {
        return Err(format!("onset {} is not minimal", cert.k0));
    }
    for mu in 1..cert.mu {
        for k0 in 0..=cert.k_end.saturating_sub(2 * mu - 1) {
            if cert.k_end + 1 - k0 >= 2 * mu && periodic_from(mu, k0) {
                return Err(format!("smaller period {mu} fits from {k0}"));
            }
        }
    }
    if cert.left_patterns.len() as u64 != cert.mu || cert.right_patterns.len() as u64 != cert.mu {
        return Err("pattern lists must have length μ".into());
    }
    for (t, k) in (cert.k0..cert.k0 + cert.mu).enumerate() {
        if cert.left_patterns[t] != left(k) || cert.right_patterns[t] != right(k) {
            return Err(format!("recorded patterns differ at k = {k}"));
        }
    }
    if let (Some(mu), Some(k0)) = (cert.mu_aligned, cert.k0_aligned) {
        if mu % cert.mu != 0 && !periodic_from(mu, k0) {
            return Err(format!("aligned period {mu} does not hold from {k0}"));
        }
        if !periodic_from(mu, k0) || cert.k_end + 1 - k0 < 2 * mu {
            return Err(format!("aligned period {mu} does not hold from {k0}"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QStepCheck {
    pub q: u64,
    pub n_q: u64,
    pub k1: u64,
    pub implied_k: Option<u64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub k: u64,
    pub k0: u64,
    pub k_end: u64,
    pub q_steps: Vec<QStepCheck>,
}

fn growth_step(profile: &UnionsProfile, k: u64, q: u64) -> Option<u64> {
    let (a, b) = (profile.row(k), profile.row(k + q));
    if a.unions.is_empty() || b.unions.is_empty() {
        return None;
    }
    let (ra, rb) = (a.rho.finite()?, b.rho.finite()?);
    let (la, lb) = (a.lambda.finite()?, b.lambda.finite()?);
    Some(rb.saturating_sub(ra).max(la.saturating_sub(lb)))
}

/// The minimal `K` with `ρ_{k+1} ≤ ρ_k + K` and `λ_k − K ≤ λ_{k+1}` on the
/// upper half of the horizon, extended down to its minimal onset. Steps
/// touching an empty union are skipped.
pub fn certify_growth(profile: &UnionsProfile) -> Result<GrowthCertificate, Refusal> {
    if !profile.is_exact() {
        return Err(Refusal::new("profile is truncated"));
    }
    let h = profile.horizon();
    if h < 2 {
        return Err(Refusal::new("horizon too small"));
    }
    let steps: Vec<Option<u64>> = (0..h).map(|k| growth_step(profile, k, 1)).collect();
    let k = steps[h.div_ceil(2) as usize..].iter().flatten().copied().max().unwrap_or(0);
    let k0 = onset(h - 1, |i| steps[i as usize].is_none_or(|s| s <= k));
    let k1 = onset(h, |i| !profile.unions(i).is_empty()).max(1);
    let q_steps = (2..=4)
        .filter(|&q| q <= h)
        .map(|q| {
            let from = k0.max(k1);
            let n_q = (from..=h.saturating_sub(q))
                .filter_map(|i| growth_step(profile, i, q))
                .max()
                .unwrap_or(0);
            let idx = 2 * q * k1 - 1;
            let implied_k = (idx <= h)
                .then(|| profile.lambda(idx).finite())
                .flatten()
                .map(|lam| 2 * k1 * n_q + lam);
            QStepCheck {
                q,
                n_q,
                k1,
                implied_k,
                holds: implied_k.is_none_or(|ik| k <= ik),
            }
        })
        .collect();
    Ok(GrowthCertificate {
        k,
        k0,
        k_end: h,
        q_steps,
    })
}

/// Re-checks a growth certificate against `profile` alone.
pub fn verify_growth(profile: &UnionsProfile, cert: &GrowthCertificate) -> Result<(), String> {
    if cert.k_end > profile.horizon() || cert.k_end == 0 {
        return Err("malformed certificate".into());
    }
    let ok = |i: u64, bound: u64| -> bool {
        let (a, b) = (profile.row(i), profile.row(i + 1));
        if a.unions.is_empty() || b.unions.is_empty() {
            return true;
        }
        b.rho <= a.rho + ExtNat::Fin(bound) && a.lambda <= b.lambda + ExtNat::Fin(bound)
    };
    if let Some(i) = (cert.k0..cert.k_end).find(|&i| !ok(i, cert.k)) {
        return Err(format!("growth bound {} fails at k = {i}", cert.k));
    }
    let half = cert.k_end.div_ceil(2);
    if cert.k > 0 && (half..cert.k_end).all(|i| ok(i, cert.k - 1)) {
        return Err(format!("K = {} is not minimal on the upper half", cert.k));
    }
    if cert.k0 > 0 && ok(cert.k0 - 1, cert.k) {
        return Err(format!("onset {} is not minimal", cert.k0));
    }
    if let Some(q) = cert.q_steps.iter().find(|q| !q.holds) {
        return Err(format!("{}-step bound does not imply K", q.q));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyPeriodicity {
    pub m: u64,
    pub onset: u64,
    pub depth: usize,
    pub checked: u64,
}

/// Minimal `m ≤ H/2` with `mρ, mλ` integral such that, on a range holding at
/// least two periods, `ρ_{k+m} = ρ_k + mρ`, `λ_{k+m} = λ_k + mλ`, and for
/// every `i ≤ i_max` the nested identities `ρ_{k+m} − ρ_{k+m,i} = ρ_k − ρ_{k,i}`,
/// `ρ_{k+m,i} − ρ_{k,i} = mρ` and their `λ` counterparts hold. Depth 1 is used
/// when `Δ_∪ = ∅`.
pub fn verify_key_periodicity(
    profile: &UnionsProfile,
    e: &ElasticityReport,
    i_max: usize,
) -> Result<KeyPeriodicity, Refusal> {
    let (Acceptance::Yes, ExtRat::Fin(_)) = (e.accepted, e.rho) else {
        return Err(Refusal::new("elasticity is not accepted and finite"));
    };
    if e.rho.is_zero() {
        return Err(Refusal::new("elasticity is zero"));
    }
    let h = profile.horizon();
    let depth = if profile.delta_union().is_empty() {
        1
    } else {
        i_max.min(profile.i_max).max(1)
    };
    let holds = |k: u64, m: u64, m_rho: u64, m_lam: u64| -> bool {
        let (a, b) = (profile.row(k), profile.row(k + m));
        (0..depth).all(|i| {
            let vals = [a.lambda_nested[i], a.rho_nested[i], b.lambda_nested[i], b.rho_nested[i]];
            let [la, ra, lb, rb] = match vals.map(|v| v.finite()) {
                [Some(la), Some(ra), Some(lb), Some(rb)] if la <= ra && lb <= rb => [la, ra, lb, rb],
                _ => return false,
            };
            rb == ra + m_rho
                && lb == la + m_lam
                && b.rho.finite() == Some(rb + (a.rho.finite().unwrap_or(0) - ra))
                && b.lambda.finite().map(|x| lb - x) == a.lambda.finite().map(|x| la - x)
        })
    };
    for m in 1..=h / 2 {
        let (Some(m_rho), Some(m_lam)) = (e.rho.scale_integral(m), e.lambda.scale_integral(m)) else {
            continue;
        };
        let k0 = onset(h - m, |k| holds(k, m, m_rho, m_lam));
        if h + 1 - k0 >= 2 * m {
            let checked = (h - m + 1 - k0) * depth as u64 * 4;
            return Ok(KeyPeriodicity {
                m,
                onset: k0,
                depth,
                checked,
            });
        }
    }
    Err(Refusal::new(format!("no m ≤ {} satisfies the identities on two periods", h / 2)))
}

/// `lcm` helper for reporting relations between periods.
pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
