use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;
use subadditive::invariants::{check_lemmas, delta_report, elasticity_report, UnionsProfile};
use subadditive::structure::{
    aap_decompose, certify_growth, certify_period, certify_structure, is_aap, verify_growth, verify_period,
    verify_structure,
};
use subadditive::{ExplicitFamily, ExtRat, GeneratedFamily, LengthSystem, NatSet, Subadditivity};

fn small_set(max: u64, len: usize) -> impl Strategy<Value = BTreeSet<u64>> {
    proptest::collection::btree_set(0..=max, 0..=len)
}

fn nat(s: &BTreeSet<u64>) -> NatSet {
    s.iter().copied().collect()
}

/// Literal reading of "AP of difference d except within distance m of the ends".
fn brute_is_aap(l: &BTreeSet<u64>, d: u64, m: u64) -> bool {
    let (Some(&lo), Some(&hi)) = (l.first(), l.last()) else {
        return true;
    };
    let z = lo % d;
    if l.iter().any(|x| x % d != z) {
        return false;
    }
    (lo..=hi)
        .filter(|x| x % d == z && *x >= lo + m && x + m <= hi)
        .all(|x| l.contains(&x))
}

proptest! {
    #[test]
    fn sumset_matches_pairs(a in small_set(200, 12), b in small_set(200, 12)) {
        let mut want = BTreeSet::new();
        for x in &a {
            for y in &b {
                want.insert(x + y);
            }
        }
        prop_assert_eq!(nat(&a).sumset(&nat(&b)), nat(&want));
    }

    #[test]
    fn n_fold_sumset_is_repeated_sumset(a in small_set(40, 5), n in 1u64..5) {
        let mut acc = nat(&a);
        for _ in 1..n {
            acc = acc.sumset(&nat(&a));
        }
        prop_assert_eq!(nat(&a).n_fold_sumset(n).unwrap(), acc);
    }

    #[test]
    fn delta_and_elasticity(a in small_set(300, 10)) {
        let v: Vec<u64> = a.iter().copied().collect();
        let gaps: BTreeSet<u64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        prop_assert_eq!(nat(&a).delta_set(), nat(&gaps));
        let want = match v.iter().find(|&&x| x > 0) {
            None => ExtRat::zero(),
            Some(&m) => ExtRat::Fin(Ratio::new(*v.last().unwrap(), m)),
        };
        prop_assert_eq!(nat(&a).elasticity(), want);
    }

    #[test]
    fn end_patterns(a in small_set(100, 12), w in 0u64..20) {
        let lo = a.first().copied().unwrap_or(0);
        let hi = a.last().copied().unwrap_or(0);
        let low: BTreeSet<u64> = a.iter().map(|x| x - lo).filter(|&x| x <= w).collect();
        let high: BTreeSet<u64> = a.iter().map(|x| hi - x).filter(|&x| x <= w).collect();
        prop_assert_eq!(nat(&a).low_pattern(w), nat(&low));
        prop_assert_eq!(nat(&a).high_pattern(w), nat(&high));
    }

    #[test]
    fn aap_bound_is_minimal(a in small_set(60, 14), d in 1u64..5) {
        let l = nat(&a);
        match aap_decompose(&l, d) {
            Ok(c) => {
                prop_assert!(brute_is_aap(&a, d, c.m));
                prop_assert!(c.m == 0 || !brute_is_aap(&a, d, c.m - 1));
            }
            Err(_) => prop_assert!(a.is_empty() || !brute_is_aap(&a, d, 1000)),
        }
        for m in 0..8 {
            prop_assert_eq!(is_aap(&l, d, m), brute_is_aap(&a, d, m));
        }
    }

    #[test]
    fn subadditivity_matches_definition(sets in proptest::collection::vec(small_set(12, 4), 1..5)) {
        let members: Vec<NatSet> = sets.iter().map(nat).collect();
        let contained = |s: &BTreeSet<u64>| sets.iter().any(|l| s.is_subset(l));
        let mut holds = true;
        for a in &sets {
            for b in &sets {
                let s: BTreeSet<u64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
                holds &= contained(&s);
            }
        }
        let verdict = ExplicitFamily::new(members).check_subadditive();
        prop_assert_eq!(verdict == Subadditivity::Pass, holds);
    }
}

fn generated() -> impl Strategy<Value = Vec<BTreeSet<u64>>> {
    proptest::collection::vec(proptest::collection::btree_set(1u64..=8, 1..=3), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lemmas_hold_on_generated_families(gens in generated()) {
        let f = GeneratedFamily::new(gens.iter().map(nat).collect()).unwrap();
        let sys = LengthSystem::generated(f, 14);
        let members = sys.members_up_to(14).unwrap();
        let profile = UnionsProfile::from_members(&members, 14, 3);
        let d = delta_report(&members, &profile).unwrap();
        let e = elasticity_report(&sys, &members);
        let report = check_lemmas(&profile, &members, &d, &e, sys.wp());
        prop_assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn certificates_pass_the_verifier(gens in generated()) {
        let f = GeneratedFamily::new(gens.iter().map(nat).collect()).unwrap();
        let sys = LengthSystem::generated(f, 24);
        let profile = UnionsProfile::compute(&sys, 3).unwrap();
        if let Ok(c) = certify_structure(&profile) {
            prop_assert_eq!(verify_structure(&profile, &c), Ok(()));
        }
        if let Ok(c) = certify_period(&profile, 4, None) {
            prop_assert_eq!(verify_period(&profile, &c), Ok(()));
        }
        if let Ok(c) = certify_growth(&profile) {
            prop_assert_eq!(verify_growth(&profile, &c), Ok(()));
        }
    }
}
