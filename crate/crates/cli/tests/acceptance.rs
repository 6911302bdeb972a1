//! One pass/fail line per acceptance criterion. Comparisons are exact; the
//! only tolerances are the wall-clock limits below.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subadditive::invariants::{
    check_accepted_identities, check_lemmas, delta_report, elasticity_report, rho_infinite_detect, Acceptance,
    RhoVerdict, UnionsProfile,
};
use subadditive::oracle::{oracle_length_set, oracle_summary, FamilyDescription, OracleBudget, OracleElement};
use subadditive::structure::{
    certify_period, certify_structure, certify_structure_with, verify_key_periodicity, verify_period,
    verify_structure,
};
use subadditive::{
    AtomBase, BlockMonoid, ExplicitFamily, ExtNat, FiniteAbelianGroup, GeneratedFamily, LengthSystem, NatSet,
    NumericalMonoid, WeightedAtomSystem,
};
use subadditive_cli::{parse_spec, run};

const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const STRUCTURE_LIMIT: Duration = Duration::from_secs(10);
const PERIOD_LIMIT: Duration = Duration::from_secs(10);
const RANDOM_FAMILIES: usize = 25;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Instance {
    name: String,
    sys: LengthSystem,
    desc: FamilyDescription,
    h: u64,
}

fn numerical_system(gens: &[u64], h: u64) -> LengthSystem {
    let m = NumericalMonoid::new(gens.to_vec()).unwrap();
    LengthSystem::monoid(WeightedAtomSystem::unit(AtomBase::Numerical(m)), h)
}

fn full_support(factors: &[u64]) -> Vec<Vec<u64>> {
    let g = FiniteAbelianGroup::new(factors.to_vec()).unwrap();
    (0..g.order()).filter(|&i| i != g.identity()).map(|i| g.coords(i)).collect()
}

fn block_system(factors: &[u64], h: u64) -> LengthSystem {
    let g = FiniteAbelianGroup::new(factors.to_vec()).unwrap();
    let b = BlockMonoid::new(g, &full_support(factors)).unwrap();
    LengthSystem::monoid(WeightedAtomSystem::unit(AtomBase::Block(b)), h)
}

fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for gens in [&[2, 3][..], &[3, 5], &[4, 6, 7]] {
        out.push(Instance {
            name: format!("numerical {gens:?}"),
            sys: numerical_system(gens, 12),
            desc: FamilyDescription::Numerical {
                generators: gens.to_vec(),
                weights: None,
            },
            h: 12,
        });
    }
    for factors in [&[2][..], &[3], &[4], &[2, 2]] {
        out.push(Instance {
            name: format!("block {factors:?}"),
            sys: block_system(factors, 8),
            desc: FamilyDescription::Block {
                group: factors.to_vec(),
                support: full_support(factors),
                element_weights: None,
            },
            h: 8,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..RANDOM_FAMILIES {
        let n = rng.gen_range(1..=3);
        let gens: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=4);
                let mut g: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=10)).collect();
                g.sort();
                g.dedup();
                g
            })
            .collect();
        let f = GeneratedFamily::new(gens.iter().map(|g| g.iter().copied().collect()).collect()).unwrap();
        out.push(Instance {
            name: format!("random #{i} {gens:?}"),
            sys: LengthSystem::generated(f, 15),
            desc: FamilyDescription::Sumset { generators: gens },
            h: 15,
        });
    }
    out
}

fn sorted(mut v: Vec<NatSet>) -> Vec<NatSet> {
    v.sort();
    v.dedup();
    v
}

fn element_checks(inst: &Instance, budget: &OracleBudget) -> Result<u64, String> {
    let mut n = 0;
    match &inst.desc {
        FamilyDescription::Numerical { generators, .. } => {
            let m = NumericalMonoid::new(generators.clone()).unwrap();
            for x in 0..=generators.iter().max().unwrap() * inst.h {
                let o = oracle_length_set(&inst.desc, &OracleElement::Value(x), budget).map_err(|e| e.to_string())?;
                ensure(m.length_set(x) == o, || format!("{}: L({x})", inst.name))?;
                n += 1;
            }
        }
        FamilyDescription::Block { group, support, .. } => {
            let b = BlockMonoid::new(FiniteAbelianGroup::new(group.clone()).unwrap(), support).unwrap();
            let members = b.atoms().to_vec();
            // products of up to three atoms
            let mut seqs = vec![Vec::<Vec<u64>>::new()];
            for _ in 0..3 {
                let mut next = Vec::new();
                for s in &seqs {
                    for a in &members {
                        let mut t = s.clone();
                        for (i, &m) in a.multiplicities.iter().enumerate() {
                            t.extend(std::iter::repeat_n(support[i].clone(), m as usize));
                        }
                        t.sort();
                        next.push(t);
                    }
                }
                seqs.extend(next);
                seqs.sort();
                seqs.dedup();
            }
            for terms in seqs {
                let s = b.sequence(&terms).map_err(|e| e.to_string())?;
                let o = oracle_length_set(&inst.desc, &OracleElement::Terms(terms.clone()), budget)
                    .map_err(|e| e.to_string())?;
                ensure(b.length_set(&s, None).unwrap() == o, || format!("{}: L({terms:?})", inst.name))?;
                n += 1;
            }
        }
        _ => {}
    }
    Ok(n)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let budget = OracleBudget::default();
    let mut compared = 0;
    let all = instances();
    for inst in &all {
        compared += element_checks(inst, &budget)?;
        let members = inst.sys.members_up_to(inst.h).map_err(|e| e.to_string())?;
        let profile = UnionsProfile::from_members(&members, inst.h, 4);
        let d = delta_report(&members, &profile).map_err(|e| e.to_string())?;
        let o = oracle_summary(&inst.desc, inst.h, &budget).map_err(|e| e.to_string())?;
        for k in 0..=inst.h {
            ensure(profile.unions(k) == &o.unions[k as usize], || format!("{}: 𝒰_{k}", inst.name))?;
        }
        ensure(sorted(members.sets.clone()) == sorted(o.members.clone()), || format!("{}: members", inst.name))?;
        ensure(d.delta_family == o.delta_family, || format!("{}: Δ(𝓛)", inst.name))?;
        ensure(d.delta_union == o.delta_union, || format!("{}: Δ_∪", inst.name))?;
        ensure(d.delta_min == o.delta, || format!("{}: δ", inst.name))?;
        ensure(inst.sys.wp() == o.wp, || format!("{}: ℘", inst.name))?;
        compared += inst.h + 5;
    }
    let t = start.elapsed();
    ensure(t < ORACLE_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} instances, {compared} exact comparisons, {t:.2?}", all.len()))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let all = instances();
    for inst in &all {
        let members = inst.sys.members_up_to(inst.h).map_err(|e| e.to_string())?;
        let profile = UnionsProfile::from_members(&members, inst.h, 4);
        let d = delta_report(&members, &profile).map_err(|e| e.to_string())?;
        let e = elasticity_report(&inst.sys, &members);
        let r = check_lemmas(&profile, &members, &d, &e, inst.sys.wp());
        ensure(r.passed(), || format!("{}: {:?}", inst.name, r.violations))?;
        checked += r.checked;
    }
    Ok(format!("{} instances, {checked} checks, 0 violations", all.len()))
}

fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    for (name, sys, h) in [("⟨2,3⟩", numerical_system(&[2, 3], 40), 40), ("B(ℤ₃)", block_system(&[3], 8), 8)] {
        let members = sys.members_up_to(h).map_err(|e| e.to_string())?;
        let profile = UnionsProfile::from_members(&members, h, 4);
        let e = elasticity_report(&sys, &members);
        ensure(e.accepted == Acceptance::Yes && e.witness.is_some(), || format!("{name}: not accepted"))?;
        let w = e.witness.clone().unwrap();
        ensure(w.elasticity() == e.rho, || format!("{name}: witness {w} misses ρ"))?;
        let r = check_accepted_identities(&profile, &e).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.checked > 0, || format!("{name}: {:?}", r.violations))?;
        lines.push(format!("{name} ρ={} witness {w}, {} identities", e.rho, r.checked));
    }
    Ok(lines.join("; "))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for (name, sys, h) in [("⟨2,3⟩", numerical_system(&[2, 3], 30), 30), ("B(ℤ₃)", block_system(&[3], 10), 10)] {
        let p = UnionsProfile::compute(&sys, 4).map_err(|e| e.to_string())?;
        let c = certify_structure(&p).map_err(|r| format!("{name}: refused: {r}"))?;
        let delta = delta_report(&sys.members_up_to(h).unwrap(), &p).unwrap().delta_min;
        ensure(c.d == 1 && delta == ExtNat::Fin(1) && c.m == 0, || {
            format!("{name}: d={} δ={delta} M={}", c.d, c.m)
        })?;
        for k in 1..=h {
            let u = p.unions(k);
            ensure(u.len() as u64 == u.max_elem().unwrap() - u.min_elem().unwrap() + 1, || {
                format!("{name}: 𝒰_{k} is not an interval")
            })?;
        }
        verify_structure(&p, &c).map_err(|e| format!("{name}: verifier: {e}"))?;
        ensure(certify_structure_with(&p, 2).is_err(), || format!("{name}: d = 2 accepted"))?;
        lines.push(format!("{name} d=1 M=0 from k={}", c.k_start));
    }
    let t = start.elapsed();
    ensure(t < STRUCTURE_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{}; d=2 refused; {t:.2?}", lines.join("; ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let p = UnionsProfile::compute(&block_system(&[2], 16), 4).map_err(|e| e.to_string())?;
    let c = certify_period(&p, 5, None).map_err(|r| format!("B(ℤ₂): {r}"))?;
    ensure(c.mu == 1, || format!("B(ℤ₂): μ = {}", c.mu))?;
    verify_period(&p, &c).map_err(|e| format!("B(ℤ₂) verifier: {e}"))?;

    let sys = numerical_system(&[2, 3], 60);
    let members = sys.members_up_to(60).unwrap();
    let p = UnionsProfile::from_members(&members, 60, 8);
    let e = elasticity_report(&sys, &members);
    let c = certify_period(&p, 5, Some(e.rho)).map_err(|r| format!("⟨2,3⟩: {r}"))?;
    verify_period(&p, &c).map_err(|e| format!("⟨2,3⟩ verifier: {e}"))?;
    let mu = c.mu_aligned.ok_or("⟨2,3⟩: no aligned period")?;
    ensure(e.rho.scale_integral(mu).is_some() && e.lambda.scale_integral(mu).is_some(), || {
        format!("μ = {mu} with ρ = {}", e.rho)
    })?;
    ensure(
        (1..mu).all(|m| e.rho.scale_integral(m).is_none() || e.lambda.scale_integral(m).is_none())
            || c.mu_aligned == Some(mu),
        || "aligned period not minimal".into(),
    )?;
    let key = verify_key_periodicity(&p, &e, 8).map_err(|r| format!("key periodicity: {r}"))?;
    ensure(mu % key.m == 0 || key.m % mu == 0, || format!("μ = {mu}, m = {}", key.m))?;
    let t = start.elapsed();
    ensure(t < PERIOD_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "B(ℤ₂) μ=1; ⟨2,3⟩ μ={} aligned μ={mu} (onset {}), key m={} (onset {}); verifier passes; {t:.2?}",
        c.mu,
        c.k0_aligned.unwrap_or(c.k0),
        key.m,
        key.onset
    ))
}

fn invariants_json(spec: &str) -> serde_json::Value {
    let b = run(&parse_spec(spec).unwrap());
    serde_json::from_str(&b.files["invariants.json"]).unwrap()
}

fn criterion_6() -> Outcome {
    for inst in instances() {
        // families other than monoids follow the definition: 𝒰_0 collects members containing 0
        let want = match &inst.desc {
            FamilyDescription::Sumset { .. } => NatSet::new(),
            _ => NatSet::singleton(0),
        };
        ensure(inst.sys.unions(0).unwrap().set == want, || format!("{}: 𝒰_0", inst.name))?;
    }
    for (name, sys, spec) in [
        (
            "B(ℤ₂)",
            block_system(&[2], 12),
            r#"{"family":{"kind":"block","group":[2]},"tasks":["delta","structure"],"k_horizon":12}"#,
        ),
        (
            "⟨1⟩",
            numerical_system(&[1], 12),
            r#"{"family":{"kind":"numerical","generators":[1]},"tasks":["delta","structure"],"k_horizon":12}"#,
        ),
    ] {
        let p = UnionsProfile::compute(&sys, 4).unwrap();
        for k in 0..=12 {
            ensure(p.unions(k) == &NatSet::singleton(k), || format!("{name}: 𝒰_{k}"))?;
        }
        let c = certify_structure(&p).map_err(|r| format!("{name}: {r}"))?;
        ensure(c.trivial, || format!("{name}: certificate not trivial"))?;
        let v = invariants_json(spec);
        ensure(v["delta"]["delta"] == "inf", || format!("{name}: δ rendered as {}", v["delta"]["delta"]))?;
    }
    let sys = LengthSystem::explicit(ExplicitFamily::new(vec![NatSet::new(), NatSet::singleton(0)]), 10);
    ensure(sys.wp() == 0, || "{∅,{0}}: ℘ ≠ 0".into())?;
    for k in 1..=10 {
        ensure(sys.unions(k).unwrap().set.is_empty(), || format!("{{∅,{{0}}}}: 𝒰_{k} ≠ ∅"))?;
    }
    let v = invariants_json(r#"{"family":{"kind":"explicit","sets":[[],[0]]},"tasks":["delta"],"k_horizon":10}"#);
    ensure(v["delta"]["wp"] == 0, || "{∅,{0}}: ℘ in JSON".into())?;
    Ok("𝒰_0 = {0} for monoids; B(ℤ₂), ⟨1⟩: 𝒰_k = {k}, trivial certificates, δ = \"inf\"; {∅,{0}}: ℘ = 0, 𝒰_k = ∅".into())
}

fn criterion_7() -> Outcome {
    let f = GeneratedFamily::new(vec![[0, 2].into_iter().collect()]).unwrap();
    let sys = LengthSystem::generated(f, 10);
    let members = sys.members_up_to(10).map_err(|e| e.to_string())?;
    let witness = match rho_infinite_detect(&sys, &members) {
        RhoVerdict::Infinite { witness } => witness,
        other => return Err(format!("verdict {other:?}")),
    };
    ensure(witness.contains(0) && witness.len() >= 2, || format!("witness {witness}"))?;
    ensure(!members.exact, || "truncated enumeration reported exact".into())?;
    let p = UnionsProfile::from_members(&members, 10, 4);
    ensure(certify_structure(&p).is_err(), || "structure certified on a truncated profile".into())?;
    ensure(certify_period(&p, 3, None).is_err(), || "period certified on a truncated profile".into())?;
    let desc = FamilyDescription::Sumset {
        generators: vec![vec![0, 2]],
    };
    ensure(oracle_summary(&desc, 10, &OracleBudget::default()).is_err(), || "oracle enumerated".into())?;
    let b = run(&parse_spec(r#"{"family":{"kind":"sumset","generators":[[0,2]]},"tasks":["elasticity","structure"],"k_horizon":10}"#).unwrap());
    ensure(b.exit_code() == 2, || format!("exit code {}", b.exit_code()))?;
    Ok(format!("INFINITE with witness {witness}; structure, period and oracle refuse; CLI exit 2"))
}

fn suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../suite")
}

fn analyze_suite(out: &Path, jobs: &str) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut specs: Vec<PathBuf> = std::fs::read_dir(suite_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    specs.sort();
    let mut files = Vec::new();
    for spec in &specs {
        let stem = spec.file_stem().unwrap().to_string_lossy().to_string();
        let dir = out.join(&stem);
        let o = Command::new(env!("CARGO_BIN_EXE_subadditive"))
            .args(["analyze", spec.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())?;
        files.push((format!("{stem}/stdout+exit"), [o.stdout, o.status.code().unwrap_or(-1).to_string().into_bytes()].concat()));
        let mut names: Vec<PathBuf> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
        names.sort();
        for n in names {
            files.push((format!("{stem}/{}", n.file_name().unwrap().to_string_lossy()), std::fs::read(&n).unwrap()));
        }
    }
    Ok(files)
}

fn criterion_8() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = analyze_suite(&tmp.path().join("a"), "4")?;
    let b = analyze_suite(&tmp.path().join("b"), "4")?;
    let c = analyze_suite(&tmp.path().join("c"), "1")?;
    ensure(a.len() > 13, || format!("only {} outputs", a.len()))?;
    for other in [&b, &c] {
        ensure(a.len() == other.len(), || "different file sets".into())?;
        for ((na, da), (nb, db)) in a.iter().zip(other.iter()) {
            ensure(na == nb && da == db, || format!("{na} differs"))?;
        }
    }
    Ok(format!("{} files byte-identical across two 4-thread runs and a 1-thread run", a.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", criterion_1),
        ("lemma suite", criterion_2),
        ("accepted-elasticity identities", criterion_3),
        ("structure certificates", criterion_4),
        ("period certificates", criterion_5),
        ("degenerate conventions", criterion_6),
        ("infinite-elasticity detection", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
