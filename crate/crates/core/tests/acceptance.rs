//! Acceptance criteria, one printed PASS/FAIL line each. All checks are exact
//! integer equalities; every criterion also has a wall-clock budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{rngs::StdRng, Rng, SeedableRng};

use cdu_core::verify::{T1_GRID, T2_GRID, T3_GRID};
use cdu_core::{
    build_family, c_uniformity, check_h_permutation_condition, count_roots, is_permutation,
    AffineLinearizedEq, ElementLiteral, Family, FamilyParams, Field, FunctionTable, HPrecondition,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family_table(family: Family, t: u32, n: u32, i: u32, gamma: u32) -> FunctionTable {
    let p = FamilyParams::new(family, t, n, Some(i), ElementLiteral::Bits(gamma as u64));
    let field = Field::with_degree(p.degree()).unwrap();
    build_family(&field, &p, HPrecondition::Enforce).unwrap()
}

fn nonzero(field: &Field, s: u32) -> Vec<u32> {
    field
        .subfield_elements(s)
        .unwrap()
        .into_iter()
        .filter(|&x| x != 0)
        .collect()
}

/// Elements of `F_{2^outer}` outside `F_{2^inner}` and outside `{0, 1}`.
fn difference(field: &Field, outer: u32, inner: u32) -> Vec<u32> {
    let inner = field.subfield_elements(inner).unwrap();
    field
        .subfield_elements(outer)
        .unwrap()
        .into_iter()
        .filter(|c| *c > 1 && !inner.contains(c))
        .collect()
}

fn check_uniformity(
    table: &FunctionTable,
    cs: &[u32],
    ok: impl Fn(u32) -> bool,
    what: &str,
) -> Result<usize, String> {
    for &c in cs {
        let u = c_uniformity(table, c).uniformity;
        ensure(ok(u), || {
            format!(
                "{}: c={c} has uniformity {u}, expected {what}",
                table.params().unwrap()
            )
        })?;
    }
    Ok(cs.len())
}

fn criterion_1() -> Check {
    let mut evaluated = 0;
    for (t, i, n) in [(2, 1, 1), (2, 1, 2), (3, 1, 1)] {
        let field = Field::with_degree(2 * n * t).unwrap();
        let cs = difference(&field, 2 * t, 1);
        for gamma in nonzero(&field, 2 * t) {
            let table = family_table(Family::F, t, n, i, gamma);
            evaluated += check_uniformity(&table, &cs, |u| u == 1, "1")?;
        }
    }
    Ok(format!("{evaluated} (gamma, c) pairs PcN"))
}

fn criterion_2() -> Check {
    let (t, i, n) = (2, 1, 2);
    assert_eq!(gcd(i as u64, t as u64), 1);
    let field = Field::with_degree(8).unwrap();
    let cs = difference(&field, 8, 4);
    ensure(cs.len() == 240, || {
        format!("{} c values, expected 240", cs.len())
    })?;
    let gammas = nonzero(&field, 4);
    ensure(gammas.len() == 15, || "expected 15 gammas".into())?;
    let mut worst = 0;
    for gamma in gammas {
        let table = family_table(Family::F, t, n, i, gamma);
        for &c in &cs {
            let u = c_uniformity(&table, c).uniformity;
            worst = worst.max(u);
            ensure(u <= 2, || {
                format!("gamma={gamma} c={c}: uniformity {u} > 2")
            })?;
        }
    }
    Ok(format!("15 gammas x 240 c, max uniformity {worst}"))
}

fn criterion_3() -> Check {
    let mut evaluated = 0;
    for (t, n) in [(1, 2), (2, 1), (2, 2)] {
        let field = Field::with_degree(2 * n * t).unwrap();
        let cs: Vec<u32> = field.elements().filter(|&c| c > 1).collect();
        for gamma in nonzero(&field, t) {
            let table = family_table(Family::G, t, n, 1, gamma);
            evaluated += check_uniformity(&table, &cs, |u| u == 1, "1")?;
        }
    }
    Ok(format!("{evaluated} (gamma, c) pairs PcN"))
}

fn criterion_4() -> Check {
    // (2,1,2): n even, every gamma admissible
    let field = Field::with_degree(8).unwrap();
    let inside = difference(&field, 4, 1);
    let beyond = difference(&field, 8, 4);
    for gamma in nonzero(&field, 4) {
        ensure(
            check_h_permutation_condition(&field, 2, 2, 1, gamma, None).unwrap(),
            || format!("n even but condition rejected gamma={gamma}"),
        )?;
        let table = family_table(Family::H, 2, 2, 1, gamma);
        ensure(is_permutation(&table), || {
            format!("h not a permutation, gamma={gamma}")
        })?;
        check_uniformity(&table, &inside, |u| u == 1, "1")?;
        check_uniformity(&table, &beyond, |u| u <= 2, "<= 2")?;
    }

    // (2,1,1): n odd, condition decides
    let field = Field::with_degree(4).unwrap();
    let inside = difference(&field, 4, 1);
    let (mut passing, mut total) = (0, 0);
    for gamma in nonzero(&field, 4) {
        total += 1;
        let cond = check_h_permutation_condition(&field, 2, 1, 1, gamma, None).unwrap();
        let p = FamilyParams::new(Family::H, 2, 1, Some(1), ElementLiteral::Bits(gamma as u64));
        let table = build_family(&field, &p, HPrecondition::Override).unwrap();
        ensure(!cond || is_permutation(&table), || {
            format!("gamma={gamma} passes the condition but h does not permute")
        })?;
        if cond {
            passing += 1;
            check_uniformity(&table, &inside, |u| u == 1, "1")?;
        }
    }
    Ok(format!(
        "n=2: 15 gammas ok; n=1: {passing}/{total} gammas pass the condition, all permute and are PcN"
    ))
}

fn criterion_5() -> Check {
    let mut equations = 0u64;
    for t in 1..=6u32 {
        let field = Field::with_degree(t).unwrap();
        for i in 1..=6u32 {
            let big = 1usize << gcd(i as u64, t as u64);
            for alpha in 1..field.size() as u32 {
                for beta in field.elements() {
                    let eq = AffineLinearizedEq::new(field.clone(), i, alpha, beta).unwrap();
                    let n = count_roots(&eq);
                    ensure(n == 0 || n == 1 || n == big, || {
                        format!("t={t} i={i} alpha={alpha} beta={beta}: {n} roots")
                    })?;
                    equations += 1;
                }
            }
        }
    }
    Ok(format!("{equations} equations within {{0, 1, 2^gcd(i,t)}}"))
}

fn irreducible_moduli(m: u32) -> Vec<u64> {
    ((1u64 << m)..(1u64 << (m + 1)))
        .filter(|&p| Field::new(m, Some(p)).is_ok())
        .collect()
}

// Counts every (a, b) entry separately straight from the definition.
fn definitional_check(field: &Field, images: &[u32], c: u32) -> Result<(), String> {
    let table = FunctionTable::from_images(field.clone(), images.to_vec()).unwrap();
    let size = field.size() as u32;
    let mut best = 0;
    for a in 0..size {
        let mut row_sum = 0;
        for b in 0..size {
            let mut count = 0;
            for x in 0..size {
                if images[(x ^ a) as usize] ^ field.mul(c, images[x as usize]) == b {
                    count += 1;
                }
            }
            row_sum += count;
            if !(c == 1 && a == 0) {
                best = best.max(count);
            }
        }
        ensure(row_sum == size, || format!("row a={a} sums to {row_sum}"))?;
    }
    let u = c_uniformity(&table, c).uniformity;
    ensure(u == best, || {
        format!("c={c}: histogram {u} vs definition {best}")
    })
}

fn criterion_6() -> Check {
    let moduli: Vec<Vec<u64>> = (1..=6).map(irreducible_moduli).collect();
    let strategy = (1u32..=6, any::<u64>()).prop_flat_map(move |(m, pick)| {
        let choices = &moduli[(m - 1) as usize];
        let modulus = choices[(pick % choices.len() as u64) as usize];
        let size = 1usize << m;
        (
            Just(m),
            Just(modulus),
            prop::collection::vec(0..size as u32, size),
        )
    });
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |(m, modulus, images)| {
            let field = Field::new(m, Some(modulus)).unwrap();
            for c in field.elements() {
                definitional_check(&field, &images, c).map_err(TestCaseError::fail)?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 random tables, every c: row sums 2^m, histogram = definition".into())
}

fn criterion_7() -> Check {
    let mut tables = 0;
    let mut check = |family, t, n, i, gamma| -> Result<(), String> {
        let table = family_table(family, t, n, i, gamma);
        let r = c_uniformity(&table, 0);
        tables += 1;
        ensure(r.uniformity == 1, || {
            format!(
                "{} at c=0: uniformity {}",
                table.params().unwrap(),
                r.uniformity
            )
        })
    };
    for &(t, i, n) in T1_GRID {
        let field = Field::with_degree(2 * n * t).unwrap();
        for gamma in nonzero(&field, 2 * t) {
            check(Family::F, t, n, i, gamma)?;
        }
    }
    for &(t, n) in T2_GRID {
        let field = Field::with_degree(2 * n * t).unwrap();
        for gamma in nonzero(&field, t) {
            check(Family::G, t, n, 1, gamma)?;
        }
    }
    for &(t, i, n) in T3_GRID {
        let field = Field::with_degree(2 * n * t).unwrap();
        for gamma in nonzero(&field, 2 * t) {
            if check_h_permutation_condition(&field, t, n, i, gamma, None).unwrap() {
                check(Family::H, t, n, i, gamma)?;
            }
        }
    }
    Ok(format!("{tables} family tables PcN at c=0"))
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|s| m.is_multiple_of(*s)).collect()
}

// shift-and-add with reduction at every step, no tables
fn schoolbook_mul(x: u32, y: u32, modulus: u32, m: u32) -> u32 {
    let (mut acc, mut a) = (0, x);
    for j in 0..m {
        if y >> j & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn field_laws_pair(f: &Field, x: u32, y: u32, z: u32) -> Result<(), String> {
    let m = f.degree();
    let ctx = || format!("m={m} x={x} y={y} z={z}");
    ensure(f.add(x, x) == 0 && f.add(x, 0) == x, || {
        format!("additive laws, {}", ctx())
    })?;
    ensure(f.mul(x, y) == schoolbook_mul(x, y, f.modulus(), m), || {
        format!("mul vs schoolbook, {}", ctx())
    })?;
    ensure(f.mul(x, y) == f.mul(y, x), || {
        format!("commutativity, {}", ctx())
    })?;
    ensure(
        f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)),
        || format!("distributivity, {}", ctx()),
    )?;
    ensure(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)), || {
        format!("associativity, {}", ctx())
    })?;
    for s in 1..=m {
        ensure(
            f.frobenius(f.mul(x, y), s) == f.mul(f.frobenius(x, s), f.frobenius(y, s)),
            || format!("frobenius s={s}, {}", ctx()),
        )?;
    }
    for s in divisors(m) {
        let (tx, ty) = (f.rel_trace(x, s).unwrap(), f.rel_trace(y, s).unwrap());
        ensure(f.rel_trace(x ^ y, s).unwrap() == tx ^ ty, || {
            format!("trace additivity s={s}, {}", ctx())
        })?;
        ensure(f.is_in_subfield(tx, s).unwrap(), || {
            format!("trace lands in F_2^{s}, {}", ctx())
        })?;
    }
    Ok(())
}

fn field_laws_single(f: &Field, x: u32) -> Result<(), String> {
    if x != 0 {
        ensure(f.mul(x, f.inv(x).unwrap()) == 1, || {
            format!("inverse m={} x={x}", f.degree())
        })?;
        ensure(f.pow(x, f.order() as u64) == 1, || {
            format!("Lagrange m={} x={x}", f.degree())
        })?;
    }
    ensure(f.frobenius(x, f.degree()) == x, || {
        format!("x^(2^m) = x, x={x}")
    })
}

fn subfield_and_trace_structure(f: &Field) -> Result<(), String> {
    let m = f.degree();
    for s in divisors(m) {
        let sub = f.subfield_elements(s).unwrap();
        ensure(sub.len() == 1 << s, || {
            format!("m={m} |F_2^{s}| = {}", sub.len())
        })?;
        let filtered: Vec<u32> = f
            .elements()
            .filter(|&x| f.is_in_subfield(x, s).unwrap())
            .collect();
        ensure(filtered == sub, || {
            format!("m={m} s={s}: subfield list != frobenius fixed points")
        })?;
        for &a in &sub {
            for &b in &sub {
                ensure(
                    sub.binary_search(&(a ^ b)).is_ok() && sub.binary_search(&f.mul(a, b)).is_ok(),
                    || format!("m={m} s={s}: subfield not closed"),
                )?;
            }
        }
        let mut image: Vec<u32> = f.elements().map(|x| f.rel_trace(x, s).unwrap()).collect();
        image.sort_unstable();
        image.dedup();
        ensure(image == sub, || format!("m={m}: trace to F_2^{s} not onto"))?;
        for r in divisors(m / s) {
            for x in f.elements() {
                // trace from F_2^(s*r) down to F_2^s, summed by hand
                let y = f.rel_trace(x, s * r).unwrap();
                let two_step = (0..r).fold(0, |acc, j| acc ^ f.frobenius(y, s * j));
                ensure(two_step == f.rel_trace(x, s).unwrap(), || {
                    format!("m={m} s={s} r={r}: transitivity fails at x={x}")
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    for m in 1..=8 {
        let f = Field::with_degree(m).unwrap();
        for x in f.elements() {
            field_laws_single(&f, x)?;
            for y in f.elements() {
                // z sweeps all elements for small m, a fixed stride above
                let zs: Vec<u32> = if m <= 6 {
                    f.elements().collect()
                } else {
                    f.elements().step_by(17).collect()
                };
                for z in zs {
                    field_laws_pair(&f, x, y, z)?;
                }
            }
        }
        subfield_and_trace_structure(&f)?;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for m in 9..=12 {
        let f = Field::with_degree(m).unwrap();
        subfield_and_trace_structure(&f)?;
        for x in f.elements() {
            field_laws_single(&f, x)?;
        }
        for _ in 0..20_000 {
            let (x, y, z) = (
                rng.gen_range(0..f.size() as u32),
                rng.gen_range(0..f.size() as u32),
                rng.gen_range(0..f.size() as u32),
            );
            field_laws_pair(&f, x, y, z)?;
        }
    }
    Ok("exhaustive for m <= 8, structure exhaustive and 20000 samples per m for 9..=12".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 f PcN on F_{q^2} \\ F_2", criterion_1, 30),
        ("2 f uniformity <= 2 beyond F_{q^2}", criterion_2, 120),
        ("3 g PcN on whole field", criterion_3, 120),
        ("4 h PcN / <= 2 and condition sufficiency", criterion_4, 120),
        ("5 linearized root-count trichotomy", criterion_5, 10),
        ("6 conservation and definitional oracle", criterion_6, 120),
        ("7 c = 0 baseline", criterion_7, 5),
        ("8 field algebra", criterion_8, 30),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{detail}; took {elapsed:.1?}, budget {budget} s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
