use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subadditive::invariants::{delta_report, UnionsProfile};
use subadditive::oracle::{oracle_length_set, oracle_summary, FamilyDescription, OracleBudget, OracleElement};
use subadditive::{
    AtomBase, BlockMonoid, ExtNat, FiniteAbelianGroup, GeneratedFamily, LengthSystem, NatSet, NumericalMonoid,
    WeightedAtomSystem,
};

fn budget() -> OracleBudget {
    OracleBudget::default()
}

fn sorted(mut v: Vec<NatSet>) -> Vec<NatSet> {
    v.sort();
    v.dedup();
    v
}

/// Engine and oracle agree on unions, members, both delta sets, `δ` and `℘`.
fn assert_agree(sys: &LengthSystem, desc: &FamilyDescription, h: u64) {
    let members = sys.members_up_to(h).unwrap();
    assert!(members.exact);
    let profile = UnionsProfile::from_members(&members, h, 4);
    let d = delta_report(&members, &profile).unwrap();
    let o = oracle_summary(desc, h, &budget()).unwrap();
    for k in 0..=h {
        assert_eq!(profile.unions(k), &o.unions[k as usize], "𝒰_{k} for {desc:?}");
        assert_eq!(sys.unions(k).unwrap().set, o.unions[k as usize], "direct 𝒰_{k} for {desc:?}");
    }
    assert_eq!(sorted(members.sets.clone()), sorted(o.members.clone()), "members of {desc:?}");
    assert_eq!(d.delta_family, o.delta_family, "Δ(𝓛) of {desc:?}");
    assert_eq!(d.delta_union, o.delta_union, "Δ_∪ of {desc:?}");
    assert_eq!(d.delta_min, o.delta, "δ of {desc:?}");
    assert_eq!(d.gcd_delta, o.gcd_delta, "gcd Δ of {desc:?}");
    assert_eq!(sys.wp(), o.wp, "℘ of {desc:?}");
}

fn numerical(gens: &[u64]) -> (NumericalMonoid, FamilyDescription) {
    (
        NumericalMonoid::new(gens.to_vec()).unwrap(),
        FamilyDescription::Numerical {
            generators: gens.to_vec(),
            weights: None,
        },
    )
}

fn full_block(factors: &[u64]) -> (BlockMonoid, FamilyDescription) {
    let g = FiniteAbelianGroup::new(factors.to_vec()).unwrap();
    let support: Vec<Vec<u64>> = (0..g.order()).filter(|&i| i != g.identity()).map(|i| g.coords(i)).collect();
    let b = BlockMonoid::new(g, &support).unwrap();
    let desc = FamilyDescription::Block {
        group: factors.to_vec(),
        support,
        element_weights: None,
    };
    (b, desc)
}

#[test]
fn numerical_monoids() {
    for gens in [&[2, 3][..], &[3, 5], &[4, 6, 7], &[1]] {
        let (h, desc) = numerical(gens);
        for x in 0..=80 {
            let o = oracle_length_set(&desc, &OracleElement::Value(x), &budget()).unwrap();
            assert_eq!(h.length_set(x), o, "L({x}) in ⟨{gens:?}⟩");
        }
        for k in 0..=12 {
            assert_eq!(h.unions(k), subadditive::oracle::oracle_unions(&desc, k, &budget()).unwrap());
        }
        assert_agree(&LengthSystem::monoid(WeightedAtomSystem::unit(AtomBase::Numerical(h)), 12), &desc, 12);
    }
}

/// All zero-sum sequences over the support with at most `max_len` terms.
fn zero_sum_sequences(b: &BlockMonoid, support: &[Vec<u64>], max_len: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<u64>> = Vec::new();
    fn rec(from: usize, left: u64, support: &[Vec<u64>], b: &BlockMonoid, cur: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>) {
        if b.sequence(cur).is_ok_and(|s| b.sum(&s) == b.group().identity()) {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in from..support.len() {
            cur.push(support[i].clone());
            rec(i, left - 1, support, b, cur, out);
            cur.pop();
        }
    }
    rec(0, max_len, support, b, &mut cur, &mut out);
    out
}

#[test]
fn block_monoids() {
    for factors in [&[2][..], &[3], &[4], &[2, 2]] {
        let (b, desc) = full_block(factors);
        let FamilyDescription::Block { support, .. } = &desc else { unreachable!() };
        for terms in zero_sum_sequences(&b, support, 8) {
            let s = b.sequence(&terms).unwrap();
            let o = oracle_length_set(&desc, &OracleElement::Terms(terms.clone()), &budget()).unwrap();
            assert_eq!(b.length_set(&s, None).unwrap(), o, "L({terms:?}) over {factors:?}");
        }
        assert_agree(&LengthSystem::monoid(WeightedAtomSystem::unit(AtomBase::Block(b)), 8), &desc, 8);
    }
}

#[test]
fn weighted_monoids() {
    let (b, _) = full_block(&[3]);
    let desc = FamilyDescription::Block {
        group: vec![3],
        support: vec![vec![1], vec![2]],
        element_weights: Some(vec![1, 2]),
    };
    assert_agree(&LengthSystem::monoid(WeightedAtomSystem::modular(b), 10), &desc, 10);

    let h = NumericalMonoid::new(vec![3, 4, 5]).unwrap();
    let sys = WeightedAtomSystem::with_weights(AtomBase::Numerical(h), vec![2, 1, 3]).unwrap();
    let desc = FamilyDescription::Numerical {
        generators: vec![3, 4, 5],
        weights: Some(vec![2, 1, 3]),
    };
    assert_agree(&LengthSystem::monoid(sys, 12), &desc, 12);
}

fn random_generators(rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=4);
            let mut g: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=10)).collect();
            g.sort();
            g.dedup();
            g
        })
        .collect()
}

#[test]
fn random_generated_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..25 {
        let gens = random_generators(&mut rng);
        let f = GeneratedFamily::new(gens.iter().map(|g| g.iter().copied().collect()).collect()).unwrap();
        let desc = FamilyDescription::Sumset { generators: gens };
        assert_agree(&LengthSystem::generated(f, 15), &desc, 15);
    }
}

#[test]
fn explicit_degenerate_family() {
    let f = subadditive::ExplicitFamily::new(vec![NatSet::new(), NatSet::singleton(0)]);
    let desc = FamilyDescription::Explicit {
        sets: vec![vec![], vec![0]],
    };
    let sys = LengthSystem::explicit(f, 6);
    assert_agree(&sys, &desc, 6);
    assert_eq!(sys.wp(), 0);
    assert_eq!(sys.unions(3).unwrap().set, NatSet::new());
    assert_eq!(sys.unions(0).unwrap().set, NatSet::singleton(0));
    let o = oracle_summary(&desc, 6, &budget()).unwrap();
    assert_eq!(o.delta, ExtNat::Inf);
}
