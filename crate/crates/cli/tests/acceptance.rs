use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

use hmf::abgroup::{weight_group, FGAbelianGroup, PointedAbelianGroup};
use hmf::decompose::{min_partition, AdeType, PartPredicate};
use hmf::intmat::IntMatrix;
use hmf::linalg::QMatrix;
use hmf::mfengine::{
    certified_window, endo_algebra_check, exterior_product, is_exceptional, k_object, orbit_hom_check,
    standard_objects, strand_cohomology, OrbitSpec,
};
use hmf::quiverlab::{
    ade_quiver, cartan_matrix, coxeter_polynomial, ext1_basis, format_polynomial, ghost_lower_bound, tensor_cartan,
    Block, DerivedMap, DerivedObject, GhostCertificate, GhostError, Quiver, Representation,
};
use hmf::weightcalc::{
    complement_count, exceptional_count, gorenstein_parameter, knoerrer_double, GradedRingSpec, WeightSequence,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

/// Nondecreasing sequences with `1..=max_len` entries in `1..=max_entry`.
fn sequences(max_len: usize, max_entry: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = (1..=max_entry).rev().map(|x| vec![x]).collect();
    while let Some(v) = stack.pop() {
        if v.len() < max_len {
            for x in (*v.last().unwrap()..=max_entry).rev() {
                let mut w = v.clone();
                w.push(x);
                stack.push(w);
            }
        }
        out.push(v);
    }
    out
}

fn ws(v: &[u64]) -> WeightSequence {
    WeightSequence::new(v.to_vec()).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm_of(v: &[u64]) -> u64 {
    v.iter().fold(1, |l, &x| l / gcd(l, x) * x)
}

fn rk_k3() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hmf"))
        .args(["analyze", "3,3,3,3,3,3,4,4,4,4"])
        .output()
        .map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5))?;
    ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let r = &v["results"];
    let got = (
        &r["h"]["size"],
        &r["q"]["size"],
        &r["rouquier"]["lower"],
        &r["rouquier"]["upper"],
        &r["rouquier"]["exact"],
        &r["rouquier"]["conjecture_holds"],
    );
    ensure(got == (&5.into(), &3.into(), &4.into(), &4.into(), &4.into(), &true.into()), || format!("{got:?}"))?;
    Ok(format!("h=5 q=3 rdim=4 in {:.2?}", start.elapsed()))
}

fn torsion_formula() -> Outcome {
    let start = Instant::now();
    let all = sequences(5, 6);
    for d in &all {
        let t = weight_group(&ws(d)).map_err(|e| e.to_string())?.group().torsion_order();
        let want = BigInt::from(d.iter().product::<u64>() / lcm_of(d));
        ensure(t == want, || format!("{d:?}: snf {t}, formula {want}"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} sequences", all.len()))
}

fn exceptional_counts() -> Outcome {
    let mut checked = 0;
    let mut dynkin = 0;
    for d in sequences(4, 6) {
        let l = lcm_of(&d);
        let recip: u64 = d.iter().map(|x| l / x).sum();
        if recip < l {
            continue;
        }
        let w = ws(&d);
        let torsion = weight_group(&w).map_err(|e| e.to_string())?.group().torsion_order();
        let mu = BigInt::from(recip) - BigInt::from(l);
        let base: BigInt = d.iter().map(|&x| BigInt::from(x - 1)).product();
        let got = exceptional_count(&w).map_err(|e| e.to_string())?;
        ensure(got == &base + &mu * &torsion, || format!("{d:?}: {got}"))?;
        checked += 1;
        if d.len() == 3 && recip > l && d.iter().all(|&x| x >= 2) {
            let vertices = BigInt::from(d.iter().map(|x| x - 1).sum::<u64>() + 2);
            ensure(got == vertices, || format!("{d:?}: {got} vs {vertices} vertices"))?;
            dynkin += 1;
        }
    }
    let e = exceptional_count(&ws(&[2, 3, 5])).map_err(|e| e.to_string())?;
    ensure(e == BigInt::from(9), || format!("(2,3,5) -> {e}"))?;
    let e = exceptional_count(&ws(&[3, 3])).map_err(|e| e.to_string())?;
    let c = complement_count(&ws(&[3, 3])).map_err(|e| e.to_string())?;
    ensure(e.is_one() && c == BigInt::from(3), || format!("(3,3) -> {e}, complement {c}"))?;
    Ok(format!("{checked} sequences, {dynkin} Dynkin triples, spot values"))
}

fn coxeter() -> Outcome {
    let start = Instant::now();
    let a = |n| cartan_matrix(&ade_quiver(AdeType::A(n)).unwrap());
    let dyn_poly = |t| coxeter_polynomial(&cartan_matrix(&ade_quiver(t).unwrap())).unwrap();
    for (m, t) in [(2, AdeType::D4), (3, AdeType::E6), (4, AdeType::E8)] {
        let lhs = coxeter_polynomial(&tensor_cartan(&a(2), &a(m))).map_err(|e| e.to_string())?;
        let rhs = dyn_poly(t);
        ensure(lhs == rhs, || format!("A2⊗A{m}: {} vs {t}: {}", format_polynomial(&lhs), format_polynomial(&rhs)))?;
    }
    let d4 = dyn_poly(AdeType::D4);
    let literal: Vec<BigInt> = [1, 1, 0, 1, 1].into_iter().map(BigInt::from).collect();
    ensure(d4 == literal, || format!("D4: {}", format_polynomial(&d4)))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("D4, E6, E8; {}", format_polynomial(&d4)))
}

fn endomorphisms() -> Outcome {
    let start = Instant::now();
    for d in 2..=8i64 {
        let objs = standard_objects(d).map_err(|e| e.to_string())?;
        let n = objs.len();
        let mut h0 = vec![vec![0usize; n]; n];
        for (i, e) in objs.iter().enumerate() {
            for (j, f) in objs.iter().enumerate() {
                let w = certified_window(e, f).ok_or_else(|| format!("d={d} ({i},{j}) has no certified window"))?;
                let s = strand_cohomology(e, f, w).map_err(|e| e.to_string())?;
                ensure(s.is_certified(), || format!("d={d} ({i},{j}) not certified"))?;
                for ((eps, l), dim) in s.nonzero() {
                    ensure((eps, l) == (0, 0), || format!("d={d} ({i},{j}) H({eps},{l}) = {dim}"))?;
                }
                h0[i][j] = s.get(0, 0);
            }
        }
        // the A_{d-1} Cartan matrix is a triangle of ones
        let cartan = cartan_matrix(&ade_quiver(AdeType::A(n as u64)).unwrap());
        let tri = |i: usize, j: usize| usize::from(i <= j);
        for i in 0..n {
            for j in 0..n {
                ensure(cartan[(i, j)] == BigInt::from(tri(i, j)), || format!("Cartan of A{n}"))?;
            }
        }
        let r = endo_algebra_check(d).map_err(|e| e.to_string())?;
        ensure(r.certified && r.hom_dims == h0, || format!("d={d}: report disagrees with strands"))?;
        for i in 0..n {
            for j in 0..n {
                let (p, q) = (r.permutation[i], r.permutation[j]);
                let want = if r.transposed { cartan[(j, i)].clone() } else { cartan[(i, j)].clone() };
                ensure(BigInt::from(h0[p][q]) == want, || format!("d={d}: entry ({i},{j})"))?;
            }
        }
        for a in -2 * d..=2 * d {
            let k = k_object(d, a).map_err(|e| e.to_string())?;
            ensure(is_exceptional(&k).map_err(|e| e.to_string())?, || format!("k({a}) for d={d}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("d = 2..8 in {:.2?}", start.elapsed()))
}

fn orbit_identity() -> Outcome {
    let objs = standard_objects(3).map_err(|e| e.to_string())?;
    let mut battery = Vec::new();
    for a in &objs {
        for b in &objs {
            battery.push(exterior_product(a, b).map_err(|e| e.to_string())?);
        }
    }
    let psi = OrbitSpec::degree_map(battery[0].ring().grading()).map_err(|e| e.to_string())?;
    ensure(psi.kernel().len() == 3, || format!("kernel of order {}", psi.kernel().len()))?;
    let (mut pairs, mut nonzero) = (0, 0);
    for (i, e) in battery.iter().enumerate() {
        for (j, f) in battery.iter().enumerate() {
            let r = orbit_hom_check(e, f, &psi, 6).map_err(|e| e.to_string())?;
            if let Some(row) = r.counterexamples().next() {
                return Err(format!("pair ({i},{j}): {row:?}"));
            }
            pairs += 1;
            nonzero += r.rows.iter().filter(|row| row.summed > 0).count();
        }
    }
    ensure(nonzero > 0, || "every strand vanished".into())?;
    Ok(format!("{pairs} pairs, {nonzero} nonzero strands, L = 6"))
}

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

/// `S_1 -> S_0[1]` on `0 -> 1`, scaled by `c`.
fn extension(q: &Quiver, shift: i64, c: i64) -> DerivedMap {
    let (s1, s0) = (Representation::simple(q, 1).unwrap(), Representation::simple(q, 0).unwrap());
    let k = BigRational::from_integer(BigInt::from(c));
    let xi: Vec<QMatrix> = ext1_basis(&s1, &s0).unwrap().remove(0).iter().map(|m| m.scaled(&k)).collect();
    DerivedMap::new(DerivedObject::single(s1, shift), DerivedObject::single(s0, shift + 1), vec![vec![Block::Ext(xi)]])
        .unwrap()
}

fn ghost() -> Outcome {
    let q = ade_quiver(AdeType::A(2)).unwrap();
    let projectives: Vec<_> = (0..2).map(|v| (Representation::projective(&q, v).unwrap(), 0)).collect();
    let simples: Vec<_> = (0..2).map(|v| (Representation::simple(&q, v).unwrap(), 0)).collect();
    let mut r = runner(64, 7);
    r.run(&(prop_oneof![-5i64..=-1, 1i64..=5], -3i64..=3), |(c, shift)| {
        let f = extension(&q, shift, c);
        let good = GhostCertificate { generator: projectives.clone(), chain: vec![f.clone()] };
        prop_assert_eq!(ghost_lower_bound(&good), Ok(1));
        let zero = GhostCertificate { generator: projectives.clone(), chain: vec![extension(&q, shift, 0)] };
        prop_assert_eq!(ghost_lower_bound(&zero), Err(GhostError::ZeroComposite));
        let target = DerivedObject::single(Representation::simple(&q, 0).unwrap(), shift + 1);
        let kill = DerivedMap::new(target.clone(), target, vec![vec![Block::Zero]]).unwrap();
        let killed = GhostCertificate { generator: projectives.clone(), chain: vec![f.clone(), kill] };
        prop_assert_eq!(ghost_lower_bound(&killed), Err(GhostError::ZeroComposite));
        let seen = GhostCertificate { generator: simples.clone(), chain: vec![f] };
        let verdict = ghost_lower_bound(&seen);
        prop_assert!(matches!(verdict, Err(GhostError::NotGhost { .. })), "accepted: {:?}", verdict);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok("64 scaled classes accepted with bound 1, corrupted ones rejected".into())
}

/// Positively graded specs over `Z ⊕ Z/t` and over weight groups.
fn random_spec() -> impl Strategy<Value = GradedRingSpec> {
    let torsion =
        (1i64..=6, prop_oneof![-8i64..=-1, 1i64..=8], 0i64..6, prop::collection::vec((-8i64..=8, 0i64..6), 1..=5))
            .prop_filter_map("generators of positive degree", |(t, m, r, gens)| {
                let g = FGAbelianGroup::new(2, IntMatrix::from_rows(2, &[vec![0, t]])).ok()?;
                let marked = g.element_i64(&[m, r]).ok()?;
                let a = PointedAbelianGroup::new(g.clone(), marked).ok()?;
                let gens = gens.iter().map(|&(x, y)| g.element_i64(&[x, y])).collect::<Result<Vec<_>, _>>().ok()?;
                GradedRingSpec::new(a, gens).ok()
            });
    let fermat = prop::collection::vec(1u64..=9, 1..=6).prop_map(|v| GradedRingSpec::fermat(&ws(&v)).unwrap());
    let one = (1i64..=9, 1i64..=12).prop_map(|(a, d)| GradedRingSpec::one_variable(a, d).unwrap());
    prop_oneof![torsion, fermat, one]
}

fn knoerrer() -> Outcome {
    let mut r = runner(200, 11);
    let negative = std::cell::Cell::new(0usize);
    r.run(&random_spec(), |spec| {
        let before = gorenstein_parameter(&spec).unwrap().mu;
        if before.is_negative() {
            negative.set(negative.get() + 1);
        }
        let after = gorenstein_parameter(&knoerrer_double(&spec)).unwrap().mu;
        prop_assert!(after.is_positive(), "μ = {} after doubling", after);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    Ok(format!("200 specs, {} with negative μ before doubling", negative.get()))
}

/// Minimal number of blocks over all set partitions of the indices.
fn brute_force(d: &[u64], valid: &dyn Fn(&[u64]) -> bool) -> usize {
    fn go(i: usize, d: &[u64], blocks: &mut Vec<Vec<u64>>, best: &mut usize, valid: &dyn Fn(&[u64]) -> bool) {
        if blocks.len() >= *best {
            return;
        }
        if i == d.len() {
            if blocks.iter().all(|b| valid(b)) {
                *best = blocks.len();
            }
            return;
        }
        for k in 0..blocks.len() {
            blocks[k].push(d[i]);
            go(i + 1, d, blocks, best, valid);
            blocks[k].pop();
        }
        blocks.push(vec![d[i]]);
        go(i + 1, d, blocks, best, valid);
        blocks.pop();
    }
    let mut best = d.len() + 1;
    go(0, d, &mut Vec::new(), &mut best, valid);
    best
}

fn is_ade(part: &[u64]) -> bool {
    let mut rest: Vec<u64> = part.iter().copied().filter(|&x| x != 2).collect();
    rest.sort_unstable();
    matches!(rest.as_slice(), [] | [_] | [3, 3] | [3, 4] | [3, 5])
}

fn is_nonpositive(part: &[u64]) -> bool {
    // 60 is divisible by every entry up to 6
    part.iter().map(|x| 60 / x).sum::<u64>() <= 60
}

fn partitions() -> Outcome {
    let start = Instant::now();
    let all = sequences(8, 6);
    for d in &all {
        let w = ws(d);
        for (p, valid) in
            [(PartPredicate::Ade, &is_ade as &dyn Fn(&[u64]) -> bool), (PartPredicate::Nonpositive, &is_nonpositive)]
        {
            let c = min_partition(&w, p);
            let want = brute_force(d, valid);
            ensure(c.minimal && c.size == want, || {
                format!("{d:?} {}: search {} vs brute force {want}", p.as_str(), c.size)
            })?;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} sequences in {:.2?}", all.len(), start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Fermat K3 rdim", rk_k3),
        ("weight-group torsion", torsion_formula),
        ("exceptional counts", exceptional_counts),
        ("Coxeter polynomials", coxeter),
        ("standard-object endomorphisms", endomorphisms),
        ("orbit identity", orbit_identity),
        ("ghost certificates", ghost),
        ("Knörrer positivity", knoerrer),
        ("partition optimality", partitions),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
