//! Acceptance checks: one line per criterion, `PASS` or `FAIL`, followed by
//! the measurements behind it. Every bound, sample count and time budget is
//! pinned below. The process exits non-zero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fvm_core::coalgebras::{bimorph_correspondence, cofree, cofree_comparison};
use fvm_core::comonads::{build, check_comonad_laws, counit_term, Kind};
use fvm_core::games::{
    count_equiv, count_equiv_with, decide, full_equiv, hom_exists, kleisli_iso_search, pe_forth, CountBackend,
    Fragment, Query,
};
use fvm_core::harness::{
    find_case, registry, replay_violation, run_fvm, run_translated_fvm, search_counterexample, Expectation, FvmOp,
    Status, Translation,
};
use fvm_core::kleisli::{check_kleisli_law, exhaustive_bases, law, LAW_NAMES};
use fvm_core::spectra::{char_poly, cospectral, graphs};
use fvm_core::structures::{
    disjoint_union, enumerate_pointed, enumerate_structures, find_isomorphism, merge, translate_connectivity,
    translate_equality, translate_weak, vee, EnumerateOptions, SilentMode,
};
use fvm_core::{Signature, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

// Criterion 1.
const LAW_MORPHISMS: usize = 50;
const LAW_SUITE_BUDGET: Duration = Duration::from_secs(60);
// Criterion 3.
const CROSS_BUCKET_SAMPLES: usize = 2000;
// Criterion 4.
const SWEEP_SAMPLES: usize = 200;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);
// Criterion 8.
const SPECTRAL_BUDGET: Duration = Duration::from_secs(120);
// Criterion 10.
const WEAK_RANDOM_PAIRS: usize = 2000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn classes(sig: &Signature, max: usize) -> Vec<Structure> {
    enumerate_structures(sig, &EnumerateOptions::new(max).up_to_iso()).expect("enumeration")
}

fn pointed_classes(sig: &Signature, max: usize) -> Vec<Structure> {
    enumerate_pointed(sig, &EnumerateOptions::new(max).up_to_iso()).expect("enumeration")
}

/// Criterion 1: Comonad equations on EF and modal carriers, and on truncated pebbling.
fn comonad_laws() -> Outcome {
    let start = Instant::now();
    let sig = Signature::graph();
    let targets = classes(&sig, 2);
    let pointed_targets = pointed_classes(&sig, 2);
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut thin = 0;
    let mut run = |kind: Kind, k: usize, trunc: Option<usize>, base: &Structure, targets: &[Structure]| {
        let c = build(kind, base, k, trunc).expect("carrier");
        let r = check_comonad_laws(&c, targets, LAW_MORPHISMS, SEED).expect("law check");
        checked += 1;
        if r.morphisms < LAW_MORPHISMS {
            thin += 1;
        }
        if !r.passed() {
            failures.push(format!("{kind} k={k} base of size {}", base.size()));
        }
    };
    for k in 1..=3 {
        for base in classes(&sig, 3) {
            run(Kind::Ef, k, None, &base, &targets);
        }
        for base in pointed_classes(&sig, 3) {
            run(Kind::Modal, k, None, &base, &pointed_targets);
        }
    }
    for base in classes(&sig, 2) {
        run(Kind::Pebble, 2, Some(4), &base, &targets);
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && thin == 0 && elapsed < LAW_SUITE_BUDGET,
        format!(
            "{checked} carriers, {} failing, {thin} with fewer than {LAW_MORPHISMS} morphisms, {:.1}s (budget {}s){}",
            failures.len(),
            elapsed.as_secs_f64(),
            LAW_SUITE_BUDGET.as_secs(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// Criterion 2: The positive existential game agrees with homomorphisms out of the
/// carrier on every ordered pair.
fn oracle_agreement() -> Outcome {
    let sig = Signature::graph();
    let mut pairs = 0;
    let mut mismatches = 0;
    let all = classes(&sig, 3);
    for k in 1..=3 {
        for a in &all {
            let c = build(Kind::Ef, a, k, None).expect("carrier");
            for b in &all {
                pairs += 1;
                if pe_forth(Kind::Ef, a, b, k).unwrap().result != hom_exists(&c, b).unwrap().result {
                    mismatches += 1;
                }
            }
        }
    }
    let pointed = pointed_classes(&sig, 3);
    for k in 1..=2 {
        for a in &pointed {
            let c = build(Kind::Modal, a, k, None).expect("carrier");
            for b in &pointed {
                pairs += 1;
                if pe_forth(Kind::Modal, a, b, k).unwrap().result != hom_exists(&c, b).unwrap().result {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{pairs} ordered pairs, {mismatches} disagreements"),
    )
}

/// Per element: its loop bit and the sorted multiset of
/// `(E(a, x), E(x, a))` over all `x`. Counting equivalence without equality
/// at k ≥ 2 preserves the multiset of these element types.
fn element_type_multiset(s: &Structure) -> Vec<(bool, Vec<(bool, bool)>)> {
    let n = s.size() as u32;
    let mut types: Vec<_> = (0..n)
        .map(|a| {
            let mut row: Vec<(bool, bool)> = (0..n).map(|x| (s.holds(0, &[a, x]), s.holds(0, &[x, a]))).collect();
            row.sort_unstable();
            (s.holds(0, &[a, a]), row)
        })
        .collect();
    types.sort_unstable();
    types
}

/// Criterion 3: Counting equivalence agrees with Kleisli-isomorphism search, and the
/// two pebbling backends agree.
fn counting_oracles() -> Outcome {
    let sig = Signature::graph();
    let mut mismatches = 0;
    let mut checked = 0;
    let tiny = classes(&sig, 2);
    for k in 1..=2 {
        for a in &tiny {
            let ca = build(Kind::Ef, a, k, None).unwrap();
            for b in &tiny {
                let cb = build(Kind::Ef, b, k, None).unwrap();
                checked += 1;
                if count_equiv(Kind::Ef, a, b, k).unwrap().result != kleisli_iso_search(&ca, &cb).unwrap().result {
                    mismatches += 1;
                }
            }
        }
    }
    let agree = |a: &Structure, b: &Structure, k: usize| {
        let exact = count_equiv_with(Kind::Pebble, a, b, k, CountBackend::Bijective)
            .unwrap()
            .result;
        let wl = count_equiv_with(Kind::Pebble, a, b, k, CountBackend::Wl)
            .unwrap()
            .result;
        (exact == wl, exact)
    };
    // Sizes up to 3: every pair.
    let small = classes(&sig, 3);
    for k in 2..=3 {
        for a in &small {
            for b in &small {
                checked += 1;
                if !agree(a, b, k).0 {
                    mismatches += 1;
                }
            }
        }
    }
    // Size 4: every pair inside a bucket of equal element-type multisets;
    // sampled pairs across buckets must be inequivalent under both.
    let four: Vec<Structure> = classes(&sig, 4).into_iter().filter(|s| s.size() == 4).collect();
    let mut buckets: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (i, s) in four.iter().enumerate() {
        buckets.entry(element_type_multiset(s)).or_default().push(i);
    }
    let mut within = 0;
    for k in 2..=3 {
        for members in buckets.values() {
            for &i in members {
                for &j in members {
                    within += 1;
                    if !agree(&four[i], &four[j], k).0 {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    let bucket_of: Vec<_> = four.iter().map(element_type_multiset).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut across = 0;
    while across < CROSS_BUCKET_SAMPLES {
        let (i, j) = (rng.gen_range(0..four.len()), rng.gen_range(0..four.len()));
        if bucket_of[i] == bucket_of[j] {
            continue;
        }
        across += 1;
        let k = 2 + across % 2;
        let (same, exact) = agree(&four[i], &four[j], k);
        if !same || exact {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{} pairs up to size 3, {within} same-bucket pairs and {across} cross-bucket pairs at size 4 \
             ({} classes, {} buckets), {mismatches} disagreements",
            checked,
            four.len(),
            buckets.len()
        ),
    )
}

/// Criterion 4: The composition-theorem sweeps.
fn theorem_sweeps() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let plan: Vec<(FvmOp, Kind, Fragment, Vec<usize>)> = {
        let mut p = Vec::new();
        for kind in [Kind::Ef, Kind::Pebble] {
            for f in [Fragment::Pe, Fragment::Count, Fragment::Full] {
                p.push((FvmOp::DisjointUnion, kind, f, vec![1, 2, 3]));
            }
        }
        for kind in [Kind::Ef, Kind::Pebble, Kind::Modal] {
            for f in [Fragment::Pe, Fragment::Count, Fragment::Full] {
                p.push((FvmOp::Product, kind, f, vec![1, 2]));
            }
        }
        for f in [Fragment::Pe, Fragment::Full] {
            p.push((FvmOp::Merge, Kind::Modal, f, vec![1, 2]));
        }
        for f in [Fragment::Pe, Fragment::Count, Fragment::Full] {
            p.push((FvmOp::Reduct, Kind::Ef, f, vec![1, 2, 3]));
        }
        p
    };
    for (op, kind, fragment, ks) in plan {
        let start = Instant::now();
        let mut hits = 0;
        let mut violations = 0;
        let mut statuses = Vec::new();
        for k in ks {
            let case = find_case(op, kind, fragment, None)
                .expect("registered")
                .with_k(k)
                .with_samples(SWEEP_SAMPLES)
                .with_seed(SEED);
            let r = run_fvm(&case).expect("sweep");
            hits += r.premise_hits;
            violations += r.violation_count;
            if r.status != Status::Pass {
                statuses.push(format!("k={k}: {:?}", r.status));
            }
        }
        let elapsed = start.elapsed();
        let pass = statuses.is_empty() && elapsed < SWEEP_BUDGET;
        ok &= pass;
        lines.push(format!(
            "{op}/{kind}/{fragment}: {hits} premise hits, {violations} violations, {:.1}s{}",
            elapsed.as_secs_f64(),
            if statuses.is_empty() {
                String::new()
            } else {
                format!(" [{}]", statuses.join(", "))
            }
        ));
    }
    outcome(ok, format!("{} sweeps\n      {}", lines.len(), lines.join("\n      ")))
}

/// Criterion 5: The pointed modal coproduct counterexample.
fn counterexample() -> Outcome {
    let case = find_case(FvmOp::PointedCoproduct, Kind::Modal, Fragment::Pe, None).expect("registered");
    let mut found = Vec::new();
    let mut ok = case.expectation == Expectation::Counterexample;
    for k in 1..=2 {
        let c = case.clone().with_k(k).with_max_size(3);
        match search_counterexample(&c).expect("search") {
            Some(v) => {
                let replays = replay_violation(&c, &v).expect("replay");
                ok &= replays;
                let sizes: Vec<String> =
                    v.a.iter()
                        .zip(&v.b)
                        .map(|(a, b)| format!("{}/{}", a.size(), b.size()))
                        .collect();
                found.push(format!(
                    "k={k}: witness with operand sizes {} (replays: {replays})",
                    sizes.join(", ")
                ));
            }
            None => {
                ok = false;
                found.push(format!("k={k}: none within size 3"));
            }
        }
    }
    outcome(ok, found.join("; "))
}

/// Criterion 6: Every registered Kleisli law on exhaustive small bases, and detection
/// of swapped outputs.
fn kleisli_laws() -> Outcome {
    let sig = Signature::graph();
    let mut failing = Vec::new();
    let mut checked = 0;
    for name in LAW_NAMES {
        let ks: &[usize] = if name == "cos-p3" { &[1] } else { &[1, 2] };
        for &k in ks {
            let l = law(name, k, None).unwrap();
            let max = if name == "cos-p3" { 3 } else { 2 };
            let bases = exhaustive_bases(&l, &sig, max).unwrap();
            checked += bases.len();
            if !check_kleisli_law(&l, &bases, 2, SEED).unwrap().passed() {
                failing.push(format!("{name} k={k}"));
            }
        }
    }
    let mut undetected = Vec::new();
    for name in LAW_NAMES {
        let l = law(name, 1, None).unwrap();
        let max = if name == "cos-p3" { 3 } else { 2 };
        let bases = exhaustive_bases(&l, &sig, max).unwrap();
        let pair = bases.iter().find_map(|tuple| {
            let inst = l.instantiate(tuple).ok()?;
            let labels = inst.source.carrier.labels().to_vec();
            labels.iter().find_map(|x| {
                labels
                    .iter()
                    .find(|y| counit_term(x).unwrap() != counit_term(y).unwrap())
                    .map(|y| (x.clone(), y.clone()))
            })
        });
        let Some((x, y)) = pair else {
            undetected.push(format!("{name}: no pair to swap"));
            continue;
        };
        if check_kleisli_law(&l.clone().with_fault(x, y), &bases, 2, SEED)
            .unwrap()
            .passed()
        {
            undetected.push(name.to_string());
        }
    }
    outcome(
        failing.is_empty() && undetected.is_empty(),
        format!(
            "{} laws, {checked} operand tuples; failing: [{}]; undetected faults: [{}]",
            LAW_NAMES.len(),
            failing.join(", "),
            undetected.join(", ")
        ),
    )
}

/// Criterion 7: The lifted operation on cofree coalgebras and the bimorphism
/// correspondence.
fn lifting() -> Outcome {
    let sig = Signature::graph();
    let bases = classes(&sig, 2);
    let mut comparisons = 0;
    let mut failures = Vec::new();
    let mut correspondences = 0;
    let mut counted = 0;
    for name in ["coproduct-ef", "product-ef"] {
        for k in 1..=2 {
            let l = law(name, k, None).unwrap();
            let params = l.source;
            for a in &bases {
                for b in &bases {
                    comparisons += 1;
                    let r = cofree_comparison(&l, &[a.clone(), b.clone()]).unwrap();
                    if !r.passed() || r.cofree_size != r.lifted_size {
                        failures.push(format!("{name} k={k}: comparison on sizes {}/{}", a.size(), b.size()));
                    }
                }
            }
            // Bimorphisms out of cofree coalgebras on single elements into
            // cofree operands of size at most 2.
            let operand_bases: Vec<&Structure> = bases.iter().collect();
            let sources: Vec<&Structure> = bases.iter().filter(|s| s.size() == 1).collect();
            for x in &sources {
                let alpha = cofree(&params.build(x).unwrap()).unwrap();
                for a in &operand_bases {
                    for b in &operand_bases {
                        let betas = [
                            cofree(&params.build(a).unwrap()).unwrap(),
                            cofree(&params.build(b).unwrap()).unwrap(),
                        ];
                        let r = bimorph_correspondence(&l, &alpha, &betas).unwrap();
                        correspondences += 1;
                        counted += r.bimorphisms;
                        if !r.passed() || r.morphisms != r.bimorphisms {
                            failures.push(format!(
                                "{name} k={k}: {} morphisms vs {} bimorphisms",
                                r.morphisms, r.bimorphisms
                            ));
                        }
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty() && counted > 0,
        format!(
            "{comparisons} cofree comparisons, {correspondences} correspondences ({counted} bimorphisms), {} failures{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// Criterion 8: Characteristic polynomials, the Shrikhande/rook pair, and the
/// contrapositive sweep.
fn spectra() -> Outcome {
    let start = Instant::now();
    let c4k1 = disjoint_union(&graphs::cycle(4), &graphs::empty(1)).unwrap();
    let star = graphs::star(4);
    let expected: Vec<i64> = vec![1, 0, -4, 0, 0, 0];
    let as_i64 = |g: &Structure| -> Vec<i64> {
        char_poly(g)
            .unwrap()
            .coefficients
            .iter()
            .map(|c| c.to_string().parse().unwrap())
            .collect()
    };
    let polys_ok = as_i64(&c4k1) == expected && as_i64(&star) == expected;
    let (shr, rook) = (graphs::shrikhande(), graphs::rook(4));
    let pair_ok = cospectral(&shr, &rook).unwrap()
        && count_equiv_with(Kind::Pebble, &shr, &rook, 3, CountBackend::Wl)
            .unwrap()
            .result;
    let mut pairs = 0;
    let mut violations = 0;
    let gs: Vec<Structure> = (1..=5).flat_map(graphs::simple_graphs).collect();
    {
        for g in &gs {
            for h in &gs {
                pairs += 1;
                let equiv = count_equiv_with(Kind::Pebble, g, h, 3, CountBackend::Wl)
                    .unwrap()
                    .result;
                if !cospectral(g, h).unwrap() && equiv {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        polys_ok && pair_ok && violations == 0 && elapsed < SPECTRAL_BUDGET,
        format!(
            "x^5 - 4x^3 for both: {polys_ok}; Shrikhande/rook cospectral and 3-pebble counting equivalent: {pair_ok}; \
             {pairs} graph pairs, {violations} violations; {:.1}s (budget {}s)",
            elapsed.as_secs_f64(),
            SPECTRAL_BUDGET.as_secs()
        ),
    )
}

/// Criterion 9: The hierarchy of relations, monotonicity in k, and refinement along
/// comonad morphisms.
fn hierarchy() -> Outcome {
    let sig = Signature::graph();
    let all = classes(&sig, 3);
    let mut violations = Vec::new();
    let mut pairs = 0;
    for a in &all {
        for b in &all {
            pairs += 1;
            let iso = find_isomorphism(a, b).is_some();
            for kind in [Kind::Ef, Kind::Pebble] {
                let mut previous: Option<[bool; 4]> = None;
                for k in 1..=3 {
                    let q = |f| decide(&Query::new(f, kind, k), a, b).unwrap().result;
                    let qr = |f| decide(&Query::new(f, kind, k), b, a).unwrap().result;
                    let count = q(Fragment::Count);
                    let full = q(Fragment::Full);
                    let exist = q(Fragment::Exist) && qr(Fragment::Exist);
                    let pe = q(Fragment::Pe) && qr(Fragment::Pe);
                    let chain = (!iso || count) && (!count || full) && (!full || exist) && (!exist || pe);
                    if !chain {
                        violations.push(format!("{kind} k={k}: chain"));
                    }
                    let now = [count, full, exist, pe];
                    if let Some(prev) = previous {
                        if now.iter().zip(prev).any(|(&n, p)| n && !p) {
                            violations.push(format!("{kind} k={k}: monotonicity"));
                        }
                    }
                    previous = Some(now);
                    if kind == Kind::Pebble {
                        // Pebbling at k refines EF at k.
                        for f in [Fragment::Pe, Fragment::Count, Fragment::Full] {
                            if q(f) && !decide(&Query::new(f, Kind::Ef, k), a, b).unwrap().result {
                                violations.push(format!("pebble refines EF, {f} k={k}"));
                            }
                        }
                    }
                }
            }
        }
    }
    // Two pointed pebbles refine the modal relations at every depth.
    let pointed = pointed_classes(&sig, 2);
    for a in &pointed {
        for b in &pointed {
            pairs += 1;
            for f in [Fragment::Pe, Fragment::Count, Fragment::Full] {
                if decide(&Query::new(f, Kind::Pebble, 2), a, b).unwrap().result {
                    for k in 1..=3 {
                        if !decide(&Query::new(f, Kind::Modal, k), a, b).unwrap().result {
                            violations.push(format!("pebble refines modal, {f} k={k}"));
                        }
                    }
                }
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{pairs} pairs, {} violations{}",
            violations.len(),
            violations.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    )
}

/// Criterion 10: Translations: commuting identities, the weak square, the sweep with
/// equality, and the equality-sensitive pair.
fn translations() -> Outcome {
    let sig = Signature::graph();
    let all = classes(&sig, 3);
    let mut table_failures = 0;
    let mut identities = 0;
    for a in &all {
        for b in &all {
            identities += 1;
            let u = disjoint_union(a, b).unwrap();
            let eq = translate_equality(&u).unwrap()
                == disjoint_union(&translate_equality(a).unwrap(), &translate_equality(b).unwrap()).unwrap();
            let con = translate_connectivity(&u).unwrap()
                == disjoint_union(&translate_connectivity(a).unwrap(), &translate_connectivity(b).unwrap()).unwrap();
            if !eq || !con {
                table_failures += 1;
            }
        }
    }

    let weak_sig = Signature::new([("R", 2), ("S", 2)]).unwrap();
    let tr = |s: &Structure| translate_weak(s, "S", SilentMode::Erase).unwrap();
    let square = |a: &Structure, b: &Structure| {
        let left = tr(&merge(a, b, "S").unwrap());
        let right = vee(&tr(a), &tr(b)).unwrap();
        left == right || find_isomorphism(&left, &right).is_some()
    };
    let small = pointed_classes(&weak_sig, 2);
    let three: Vec<Structure> = pointed_classes(&weak_sig, 3)
        .into_iter()
        .filter(|s| s.size() == 3)
        .collect();
    let mut squares = 0;
    let mut square_failures = 0;
    for a in &small {
        for b in &small {
            squares += 1;
            square_failures += usize::from(!square(a, b));
        }
    }
    let singles: Vec<&Structure> = small.iter().filter(|s| s.size() == 1).collect();
    for a in &three {
        for b in &singles {
            squares += 2;
            square_failures += usize::from(!square(a, b)) + usize::from(!square(b, a));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..WEAK_RANDOM_PAIRS {
        let a = &three[rng.gen_range(0..three.len())];
        let b = &three[rng.gen_range(0..three.len())];
        squares += 1;
        square_failures += usize::from(!square(a, b));
    }

    let mut sweeps = Vec::new();
    let mut sweeps_ok = true;
    for f in [Fragment::Pe, Fragment::Count, Fragment::Full] {
        let case = find_case(FvmOp::DisjointUnion, Kind::Ef, f, Some(Translation::Equality))
            .unwrap()
            .with_samples(SWEEP_SAMPLES)
            .with_seed(SEED);
        let r = run_translated_fvm(&case).unwrap();
        sweeps_ok &= r.status == Status::Pass;
        sweeps.push(format!(
            "{f}: {:?} ({} hits, {} square failures)",
            r.status, r.premise_hits, r.square_failures
        ));
    }

    let one = Structure::digraph(1, &[]).unwrap();
    let two = Structure::digraph(2, &[]).unwrap();
    let bare = (1..=4).all(|k| full_equiv(Kind::Ef, &one, &two, k).unwrap().result);
    let (t1, t2) = (translate_equality(&one).unwrap(), translate_equality(&two).unwrap());
    let with_equality = full_equiv(Kind::Ef, &t1, &t2, 2).unwrap().result;
    let sensitive = bare && !with_equality;

    outcome(
        table_failures == 0 && square_failures == 0 && sweeps_ok && sensitive,
        format!(
            "{identities} union pairs, {table_failures} table mismatches; {squares} weak squares, {square_failures} \
             failures; equality sweeps [{}]; bare 1 vs 2 elements equivalent at k ≤ 4: {bare}, with equality at k = 2: \
             {with_equality}",
            sweeps.join("; ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    // The registry itself is part of what is accepted: every theorem case
    // has a description, and exactly the counterexample case is flagged.
    assert!(registry().iter().all(|c| !c.description.is_empty()));
    let criteria: [Criterion; 10] = [
        ("comonad laws", comonad_laws),
        ("game vs homomorphism oracle", oracle_agreement),
        ("counting oracles", counting_oracles),
        ("composition-theorem sweeps", theorem_sweeps),
        ("pointed modal coproduct counterexample", counterexample),
        ("Kleisli-law axioms", kleisli_laws),
        ("lifting on cofree coalgebras", lifting),
        ("cospectrality", spectra),
        ("hierarchy and refinement", hierarchy),
        ("translations", translations),
    ];
    let only: HashSet<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2} {verdict} {name} [{:.1}s]: {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
