//! Acceptance sweep: one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`. The process fails when a criterion outside
//! `KNOWN_BLOCKED` fails, or when a known-blocked criterion starts passing
//! (so the list cannot silently go stale).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use liesmall::catalog::{self, ClassLabel, Solvable3};
use liesmall::classify::{
    self, audit, char_orbit_rep, classify_solvable3, exp_ad, find_complement, iso_oracle, sl2_is_ad_nilpotent,
    sl2_is_toral, sl2_sigma, Classifier, DimAudit, IsoWitness, DEFAULT_ISO_BUDGET,
};
use liesmall::field::{Fe, Field};
use liesmall::liealg::{LieAlgebra, DEFAULT_SWEEP_BUDGET};
use liesmall::linalg::{Matrix, Subspace};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Criteria whose failure is explained by a conflict in the source lists.
const KNOWN_BLOCKED: &[u32] = &[2, 5, 6];

const LOW_DIM_LIMIT: Duration = Duration::from_secs(10);
const DIM6_LIMIT: Duration = Duration::from_secs(60);
const AUDIT_LIMIT: Duration = Duration::from_secs(120);
const SIMPLICITY_LIMIT: Duration = Duration::from_secs(5);
const NONSPLIT_LIMIT: Duration = Duration::from_secs(60);

struct FieldRun {
    name: &'static str,
    field: Field,
    audits: Vec<DimAudit>,
    low_time: Duration,
    dim6_time: Duration,
}

fn fields() -> Vec<(&'static str, Field)> {
    vec![
        ("F2", Field::prime(2).unwrap()),
        ("F4", Field::new(2, 2, None).unwrap()),
        ("F3", Field::prime(3).unwrap()),
        ("F9", Field::new(3, 2, None).unwrap()),
        ("F5", Field::prime(5).unwrap()),
        ("F7", Field::prime(7).unwrap()),
    ]
}

fn run_field(name: &'static str, field: Field) -> FieldRun {
    let c = Classifier::new(&field);
    let t = Instant::now();
    let mut audits: Vec<DimAudit> = (3..=5).map(|d| audit(&c, d).unwrap()).collect();
    let low_time = t.elapsed();
    let t = Instant::now();
    audits.push(audit(&c, 6).unwrap());
    FieldRun { name, field, audits, low_time, dim6_time: t.elapsed() }
}

/// Number of distinct values of `T^3 + T^2`, by direct scan.
fn cubic_image_size(f: &Field) -> usize {
    let image: BTreeSet<Fe> = f.elements().map(|t| f.add(f.mul(t, f.mul(t, t)), f.mul(t, t))).collect();
    image.len()
}

fn expected_low(name: &str) -> [usize; 3] {
    match name {
        "F2" | "F4" => [1, 2, 5],
        "F3" | "F9" | "F5" => [1, 1, 4],
        "F7" => [1, 1, 3],
        _ => unreachable!(),
    }
}

fn expected_dim6(name: &str, f: &Field) -> usize {
    match name {
        "F2" => 19,
        "F4" => 23,
        "F3" => {
            assert_eq!(cubic_image_size(f), 2);
            24
        }
        "F9" => 19 + 9 + cubic_image_size(f),
        "F5" => 17,
        "F7" => 18,
        _ => unreachable!(),
    }
}

fn criterion1(runs: &[FieldRun]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let got: Vec<usize> = r.audits[..3].iter().map(DimAudit::distinct).collect();
        let listed: Vec<usize> = r.audits[..3].iter().map(|a| a.listed).collect();
        let want = expected_low(r.name);
        let good = got == want && listed == want && r.low_time < LOW_DIM_LIMIT;
        ok &= good;
        parts.push(format!("{} {:?}/{:?} {:.2?}", r.name, got, want, r.low_time));
    }
    (ok, parts.join("; "))
}

fn criterion2(runs: &[FieldRun]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let a = &r.audits[3];
        let want = expected_dim6(r.name, &r.field);
        let good = a.distinct() == want && a.listed == want && r.dim6_time < DIM6_LIMIT;
        ok &= good;
        parts.push(format!(
            "{} {}/{} (listed {}, built {}) {:.2?}",
            r.name,
            a.distinct(),
            want,
            a.listed,
            a.built,
            r.dim6_time
        ));
    }
    (ok, parts.join("; "))
}

fn criterion3() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, want) in [(2, 6), (3, 8), (5, 10)] {
        let f = Field::prime(p).unwrap();
        let classes = Solvable3::enumerate(&f);
        let algebras: Vec<LieAlgebra> = classes.iter().map(|&s| catalog::solvable3(&f, s).unwrap()).collect();
        let round_trip = classes.iter().zip(&algebras).all(|(&s, l)| classify_solvable3(l).unwrap() == s);
        let mut separated = true;
        for i in 0..algebras.len() {
            for j in i + 1..algebras.len() {
                separated &=
                    iso_oracle(&algebras[i], &algebras[j], DEFAULT_ISO_BUDGET).unwrap() == IsoWitness::NotIsomorphic;
            }
        }
        let good = classes.len() == want && round_trip && separated;
        ok &= good;
        parts.push(format!("F{p} {}/{want}", classes.len()));
    }
    (ok, parts.join("; "))
}

fn criterion4() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for f in [Field::prime(2).unwrap(), Field::new(2, 2, None).unwrap()] {
        let d = catalog::witt_derived(&f, 2).derivation_algebra().unwrap().dim();
        ok &= d == 5;
        parts.push(format!("Der W(1;2)' over F{} = {d}/5", f.q()));
    }
    for f in [Field::prime(3).unwrap(), Field::new(3, 2, None).unwrap()] {
        let d = catalog::l1_nonsplit(&f).unwrap().derivation_algebra().unwrap().dim();
        ok &= d == 7;
        parts.push(format!("Der L1 over F{} = {d}/7", f.q()));
    }
    (ok, parts.join("; "))
}

fn criterion5(runs: &[FieldRun]) -> (bool, String) {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        for a in &r.audits {
            for (x, y, v) in &a.collisions {
                ok = false;
                parts.push(format!("{}: {x} ~ {y} {v}", r.name));
            }
        }
    }
    let f3 = Field::prime(3).unwrap();
    let build = |s: &str| catalog::build(&ClassLabel::parse(s, &f3).unwrap(), &f3);
    let verdict = |a: &str, b: &str| match (build(a), build(b)) {
        (Ok(x), Ok(y)) => iso_oracle(&x, &y, DEFAULT_ISO_BUDGET).unwrap().verdict().to_string(),
        (Err(e), _) | (_, Err(e)) => format!("unbuildable ({e})"),
    };
    let mut pairs = vec![("T6.4.d1", "T6.4.d2")];
    let ext = ["T6.4.ext00", "T6.4.ext10", "T6.4.ext01"];
    for i in 0..3 {
        for j in i + 1..3 {
            pairs.push((ext[i], ext[j]));
        }
    }
    for (a, b) in pairs {
        let v = verdict(a, b);
        if v != "not_isomorphic" {
            ok = false;
            parts.push(format!("F3: {a} vs {b} {v}"));
        }
    }
    let total: Duration = runs.iter().map(|r| r.low_time + r.dim6_time).sum::<Duration>() + t.elapsed();
    ok &= total < AUDIT_LIMIT;
    parts.push(format!("total {total:.2?}"));
    (ok, parts.join("; "))
}

/// Every subspace of `F_2^n`, by closing subsets of vectors under addition.
fn all_subspaces_f2(f: &Field, n: usize) -> Vec<Subspace> {
    let vectors: Vec<Vec<Fe>> = classify::all_vectors(f, n).collect();
    let mut out: Vec<Subspace> = Vec::new();
    for mask in 0u32..(1 << vectors.len()) {
        let chosen: Vec<Vec<Fe>> =
            (0..vectors.len()).filter(|i| mask >> i & 1 == 1).map(|i| vectors[i].clone()).collect();
        let s = Subspace::span(f, n, &chosen);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn is_solvable_ideal(l: &LieAlgebra, s: &Subspace) -> bool {
    if !l.is_ideal(s) {
        return false;
    }
    let mut term = s.clone();
    for _ in 0..=l.dim() {
        if term.is_zero() {
            return true;
        }
        term = l.product_space(&term, &term);
    }
    false
}

/// Every Lie algebra of dimension at most 3 over F_2, as structure constants.
fn all_small_f2_algebras(f: &Field) -> Vec<LieAlgebra> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let bits = pairs.len() * n;
        for code in 0u32..(1 << bits) {
            let brackets: Vec<(usize, usize, Vec<Fe>)> = pairs
                .iter()
                .enumerate()
                .map(|(pi, &(i, j))| (i, j, (0..n).map(|k| Fe((code >> (pi * n + k) & 1) as u16)).collect()))
                .collect();
            if let Ok(l) = LieAlgebra::new(f, n, &brackets) {
                out.push(l);
            }
        }
    }
    out
}

fn criterion6(runs: &[FieldRun]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut checked = 0;
    for r in runs {
        for dim in 3..=6 {
            for label in classify::enumerate_classes(&r.field, dim).unwrap() {
                match catalog::build(&label, &r.field) {
                    Ok(l) if l.check_jacobi().is_ok() => checked += 1,
                    Ok(_) => unreachable!("construction checks Jacobi"),
                    Err(e) => {
                        ok = false;
                        parts.push(format!("{}: {} fails: {e}", r.name, label.format(&r.field)));
                    }
                }
            }
        }
        for a in &r.audits {
            for m in &a.profile_mismatches {
                ok = false;
                parts.push(format!("{}: {m}", r.name));
            }
        }
    }
    parts.push(format!("{checked} catalog algebras pass Jacobi"));
    let f2 = Field::prime(2).unwrap();
    let small = all_small_f2_algebras(&f2);
    let mut agree = 0;
    for l in &small {
        let subspaces = all_subspaces_f2(&f2, l.dim());
        let solvable: Vec<&Subspace> = subspaces.iter().filter(|s| is_solvable_ideal(l, s)).collect();
        let oracle = solvable.iter().max_by_key(|s| s.dim()).expect("zero ideal is solvable");
        let unique_max = solvable.iter().all(|s| s.is_subspace_of(oracle));
        if unique_max && l.radical_with_budget(DEFAULT_SWEEP_BUDGET).unwrap() == **oracle {
            agree += 1;
        } else {
            ok = false;
        }
    }
    parts.push(format!("radical oracle {agree}/{} algebras over F2", small.len()));
    (ok, parts.join("; "))
}

fn sl2_vec(v: &[Fe]) -> [Fe; 3] {
    [v[0], v[1], v[2]]
}

fn criterion7() -> (bool, String) {
    let f3 = Field::prime(3).unwrap();
    let sl2 = catalog::sl2(&f3);
    let id = Matrix::identity(&f3, 3);
    let mut ok = true;
    let mut parts = Vec::new();
    // 2(a) and 2(b) over all parameter tuples.
    let mut tuples = 0;
    let mut failures = 0;
    for a in f3.nonzero_elements() {
        for b in f3.elements() {
            let s = sl2_sigma(&f3, a, b).unwrap();
            if !sl2.is_automorphism(&s) {
                failures += 1;
            }
        }
        let s = sl2_sigma(&f3, a, Fe::ZERO).unwrap();
        if s.mul(&s) != id {
            failures += 1;
        }
    }
    for b in f3.elements() {
        let e_b: Vec<Fe> = vec![b, Fe::ZERO, Fe::ZERO];
        let lhs = sl2_sigma(&f3, Fe::ONE, Fe::ZERO).unwrap().mul(&exp_ad(&sl2, &e_b).unwrap());
        if lhs != sl2_sigma(&f3, Fe::ONE, b).unwrap() {
            failures += 1;
        }
    }
    for a in f3.nonzero_elements() {
        for b in f3.nonzero_elements() {
            for c in f3.nonzero_elements() {
                for d in f3.elements() {
                    tuples += 1;
                    let lhs = sl2_sigma(&f3, a, Fe::ZERO)
                        .unwrap()
                        .mul(&sl2_sigma(&f3, b, Fe::ZERO).unwrap())
                        .mul(&sl2_sigma(&f3, c, d).unwrap());
                    let rhs = sl2_sigma(&f3, f3.mul(f3.div(a, b), c), d).unwrap();
                    if lhs != rhs {
                        failures += 1;
                    }
                }
            }
        }
    }
    ok &= failures == 0;
    parts.push(format!("sigma identities: {failures} failures over {tuples} composition tuples"));
    // (1) against matrix-level nilpotency and x^[3] = x.
    let mut mismatches = 0;
    for v in classify::all_vectors(&f3, 3) {
        let ad = sl2.ad(&v);
        let nil = ad.pow(3).is_zero();
        let toral = ad.pow(3) == ad && !v.iter().all(|c| c.is_zero());
        let x = sl2_vec(&v);
        if sl2_is_ad_nilpotent(&f3, x).unwrap() != nil || sl2_is_toral(&f3, x).unwrap() != toral {
            mismatches += 1;
        }
    }
    ok &= mismatches == 0;
    parts.push(format!("predicates: {mismatches} mismatches over 27 vectors"));
    // Orbit representatives under sampled automorphisms, with xi = rt + s^2 as oracle.
    let f9 = Field::new(3, 2, None).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut pick = |nonzero: bool| loop {
        let x = Fe(rng.gen_range(0..9));
        if !(nonzero && x.is_zero()) {
            return x;
        }
    };
    let mut orbit_failures = 0;
    for i in 0..1000 {
        let chi = loop {
            let c = [pick(false), pick(false), pick(false)];
            if c.iter().any(|x| !x.is_zero()) {
                break c;
            }
        };
        let sigma = sl2_sigma(&f9, pick(true), pick(false)).unwrap();
        let m = if i % 2 == 0 { sigma } else { sl2_sigma(&f9, Fe::ONE, pick(false)).unwrap().mul(&sigma) };
        // (chi o m)(b_j) = sum_i chi_i m[i][j]
        let moved: Vec<Fe> =
            (0..3).map(|j| (0..3).fold(Fe::ZERO, |acc, k| f9.mul_add(acc, chi[k], m.get(k, j)))).collect();
        let xi = f9.add(f9.mul(chi[0], chi[2]), f9.mul(chi[1], chi[1]));
        let before = char_orbit_rep(&f9, chi).unwrap();
        let after = char_orbit_rep(&f9, sl2_vec(&moved)).unwrap();
        if before != after || before.xi != xi {
            orbit_failures += 1;
        }
    }
    ok &= orbit_failures == 0;
    parts.push(format!("orbit representatives: {orbit_failures} failures over 1000 samples"));
    (ok, parts.join("; "))
}

fn criterion8() -> (bool, String) {
    let t = Instant::now();
    let w11 = catalog::witt(&Field::prime(5).unwrap(), 1);
    let w12 = catalog::witt_derived(&Field::prime(2).unwrap(), 2);
    let a = w11.is_simple().unwrap();
    let b = w12.is_simple().unwrap();
    let elapsed = t.elapsed();
    (
        a && b && elapsed < SIMPLICITY_LIMIT,
        format!("W(1;1)/F5 simple={a} (dim {}), W(1;2)'/F2 simple={b} (dim {}), {elapsed:.2?}", w11.dim(), w12.dim()),
    )
}

fn criterion9() -> (bool, String) {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, p) in [("T4.3.3", 3), ("T6.1.4c", 2)] {
        let f = Field::prime(p).unwrap();
        let l = catalog::build(&ClassLabel::parse(label, &f).unwrap(), &f).unwrap();
        let rad = l.radical().unwrap();
        let complement = find_complement(&l, &rad, u64::MAX).unwrap();
        ok &= complement.is_none() && !rad.is_zero();
        parts.push(format!(
            "{label}/F{p} rad dim {} complement {}",
            rad.dim(),
            if complement.is_some() { "found" } else { "none" }
        ));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < NONSPLIT_LIMIT;
    parts.push(format!("{elapsed:.2?}"));
    (ok, parts.join("; "))
}

fn main() {
    let runs: Vec<FieldRun> = fields().into_iter().map(|(n, f)| run_field(n, f)).collect();
    let results: Vec<(u32, &str, (bool, String))> = vec![
        (1, "counts in dimensions 3-5", criterion1(&runs)),
        (2, "counts in dimension 6", criterion2(&runs)),
        (3, "solvable three-dimensional classes", criterion3()),
        (4, "derivation algebra dimensions", criterion4()),
        (5, "nonisomorphism audits", criterion5(&runs)),
        (6, "structural invariants", criterion6(&runs)),
        (7, "automorphisms and characters of sl(2)", criterion7()),
        (8, "simplicity", criterion8()),
        (9, "nonsplit extensions", criterion9()),
    ];
    let mut unexpected = Vec::new();
    for (id, name, (pass, detail)) in &results {
        let blocked = KNOWN_BLOCKED.contains(id);
        let tag = match (pass, blocked) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag} {id} {name}: {detail}");
        if *pass == blocked {
            unexpected.push(*id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected status: {unexpected:?}");
        std::process::exit(1);
    }
}
