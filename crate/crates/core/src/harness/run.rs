use std::time::Instant;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::sample::operand_pair;
use super::{Expectation, FvmCase};
use crate::comonads::sample_rng;
use crate::error::{Error, Result};
use crate::games::{decide, Query};
use crate::structures::{
    canonical_code, enumerate_pointed, enumerate_structures, find_isomorphism, structure_to_value, EnumerateOptions,
    Structure,
};

/// Samples evaluated in parallel before the stopping rule is consulted.
const BATCH: usize = 64;

/// Candidate tuples evaluated in parallel by the exhaustive search.
const SEARCH_CHUNK: usize = 4096;

/// Violations kept in a report; all of them are counted.
pub const MAX_RECORDED_VIOLATIONS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Too few samples satisfied the premise to support a verdict.
    Inconclusive,
}

/// Operand tuples `A⃗`, `B⃗` whose premises hold and whose composites are
/// not related. Serialised as `{"sample", "A1", "B1", "A2", "B2"}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index of the sample that produced it, or of the search order.
    pub sample: u64,
    pub a: Vec<Structure>,
    pub b: Vec<Structure>,
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1 + 2 * self.a.len()))?;
        map.serialize_entry("sample", &self.sample)?;
        for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            map.serialize_entry(&format!("A{}", i + 1), &structure_to_value(a))?;
            map.serialize_entry(&format!("B{}", i + 1), &structure_to_value(b))?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub case: FvmCase,
    pub status: Status,
    /// Samples drawn.
    pub samples: usize,
    pub premise_hits: usize,
    pub violation_count: usize,
    /// The first [`MAX_RECORDED_VIOLATIONS`] violations in sample order.
    pub violations: Vec<Violation>,
    /// Commuting-square isomorphism checks (translated cases only).
    pub square_checks: usize,
    pub square_failures: usize,
    pub seed: u64,
    /// Wall-clock time; `None` keeps the JSON byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

fn related(case: &FvmCase, k: usize, a: &Structure, b: &Structure) -> Result<bool> {
    Ok(decide(&Query::new(case.fragment, case.kind, k), a, b)?.result)
}

/// Translated operands and whether every premise holds.
fn premises(case: &FvmCase, a: &[Structure], b: &[Structure]) -> Result<(Vec<Structure>, Vec<Structure>, bool)> {
    let ta = a.iter().map(|s| case.translate(s)).collect::<Result<Vec<_>>>()?;
    let tb = b.iter().map(|s| case.translate(s)).collect::<Result<Vec<_>>>()?;
    for (x, y) in ta.iter().zip(&tb) {
        if !related(case, case.k_in, x, y)? {
            return Ok((ta, tb, false));
        }
    }
    Ok((ta, tb, true))
}

fn conclusion(case: &FvmCase, a: &[Structure], b: &[Structure]) -> Result<bool> {
    let ha = case.translate(&case.compose(&a.iter().collect::<Vec<_>>())?)?;
    let hb = case.translate(&case.compose(&b.iter().collect::<Vec<_>>())?)?;
    related(case, case.k_out, &ha, &hb)
}

/// Whether `tr(H(x⃗)) ≅ H'(tr(x⃗))`, where `tx` are the translated operands.
fn square_commutes(case: &FvmCase, x: &[Structure], tx: &[Structure]) -> Result<bool> {
    let left = case.translate(&case.compose(&x.iter().collect::<Vec<_>>())?)?;
    let right = case.translated_compose(&tx.iter().collect::<Vec<_>>())?;
    Ok(left == right || find_isomorphism(&left, &right).is_some())
}

/// Re-evaluates a violation from scratch: `true` iff every premise holds and
/// the conclusion fails.
pub fn replay_violation(case: &FvmCase, v: &Violation) -> Result<bool> {
    if v.a.len() != case.op.arity() || v.b.len() != case.op.arity() {
        return Ok(false);
    }
    let (_, _, ok) = premises(case, &v.a, &v.b)?;
    Ok(ok && !conclusion(case, &v.a, &v.b)?)
}

struct Outcome {
    hit: bool,
    violation: Option<Violation>,
    squares: usize,
    square_failures: usize,
}

fn attempt(case: &FvmCase, index: u64) -> Result<Outcome> {
    let sig = case.operand_signature()?;
    let mut rng = sample_rng(case.seed, index);
    let (a, b): (Vec<_>, Vec<_>) = (0..case.op.arity())
        .map(|_| operand_pair(&sig, case.max_size, case.pointed(), &mut rng))
        .unzip();
    let (ta, tb, hit) = premises(case, &a, &b)?;
    let (mut squares, mut square_failures) = (0, 0);
    if case.translation.is_some() {
        for (x, tx) in [(&a, &ta), (&b, &tb)] {
            squares += 1;
            if !square_commutes(case, x, tx)? {
                square_failures += 1;
            }
        }
    }
    let violation = if hit && !conclusion(case, &a, &b)? {
        Some(Violation { sample: index, a, b })
    } else {
        None
    };
    Ok(Outcome {
        hit,
        violation,
        squares,
        square_failures,
    })
}

fn run(case: &FvmCase) -> Result<Report> {
    if case.samples == 0 || case.max_size == 0 || case.k_in == 0 {
        return Err(Error::InvalidInput("samples, sizes and k must be positive".into()));
    }
    let start = Instant::now();
    let budget = case.samples.saturating_mul(case.attempts_per_sample.max(1));
    let expect_violation = case.expectation == Expectation::Counterexample;
    let mut report = Report {
        case: case.clone(),
        status: Status::Inconclusive,
        samples: 0,
        premise_hits: 0,
        violation_count: 0,
        violations: Vec::new(),
        square_checks: 0,
        square_failures: 0,
        seed: case.seed,
        elapsed_ms: None,
    };
    // A theorem stops at the wanted number of premise hits; a counterexample
    // search keeps drawing until the first violation or the end of the budget.
    let done = |r: &Report| {
        if expect_violation {
            r.violation_count > 0
        } else {
            r.premise_hits >= case.samples
        }
    };
    let mut next = 0usize;
    while next < budget && !done(&report) {
        let end = (next + BATCH).min(budget);
        let outcomes: Vec<Result<Outcome>> = (next..end).into_par_iter().map(|i| attempt(case, i as u64)).collect();
        for outcome in outcomes {
            let outcome = outcome?;
            report.samples += 1;
            report.square_checks += outcome.squares;
            report.square_failures += outcome.square_failures;
            if outcome.hit {
                report.premise_hits += 1;
            }
            if let Some(v) = outcome.violation {
                report.violation_count += 1;
                if report.violations.len() < MAX_RECORDED_VIOLATIONS {
                    report.violations.push(v);
                }
            }
            if done(&report) {
                break;
            }
        }
        next = end;
    }
    report.status = match case.expectation {
        Expectation::Theorem if report.violation_count > 0 || report.square_failures > 0 => Status::Fail,
        Expectation::Theorem if report.premise_hits < case.samples => Status::Inconclusive,
        Expectation::Theorem => Status::Pass,
        Expectation::Counterexample if report.violation_count > 0 => Status::Pass,
        Expectation::Counterexample if report.premise_hits < case.samples => Status::Inconclusive,
        Expectation::Counterexample => Status::Fail,
    };
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Samples operand pairs, keeps those satisfying the premise and checks the
/// conclusion on the composites, until `case.samples` premise hits (for a
/// counterexample case: until the first violation) or the attempt budget runs
/// out. The result is independent of thread scheduling.
pub fn run_fvm(case: &FvmCase) -> Result<Report> {
    if case.translation.is_some() {
        return Err(Error::InvalidInput(format!(
            "case {} has a translation; use run_translated_fvm",
            case.name
        )));
    }
    run(case)
}

/// As [`run_fvm`], with premises evaluated on translated operands and the
/// conclusion on the translated composite; every sample also checks the
/// commuting square `tr(H(x⃗)) ≅ H'(tr(x⃗))` for both operand tuples.
pub fn run_translated_fvm(case: &FvmCase) -> Result<Report> {
    if case.translation.is_none() {
        return Err(Error::InvalidInput(format!("case {} has no translation", case.name)));
    }
    run(case)
}

/// Exhaustive search over operand tuples drawn from the isomorphism classes
/// of size at most `case.max_size`. Candidate tuples are visited in a fixed
/// order (smaller total size first), so the first witness is deterministic.
pub fn search_counterexample(case: &FvmCase) -> Result<Option<Violation>> {
    let sig = case.operand_signature()?;
    let opts = EnumerateOptions::new(case.max_size).up_to_iso().min_size(1);
    let mut pool = if case.pointed() {
        enumerate_pointed(&sig, &opts)?
    } else {
        enumerate_structures(&sig, &opts)?
    };
    pool.sort_by_cached_key(|s| (s.size(), canonical_code(s)));
    let candidates: Vec<(usize, usize)> = (0..pool.len())
        .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
        .collect();
    let flags = candidates
        .par_iter()
        .map(|&(i, j)| {
            let (_, _, ok) = premises(case, &pool[i..=i], &pool[j..=j])?;
            Ok(ok)
        })
        .collect::<Result<Vec<bool>>>()?;
    let mut pairs: Vec<(usize, usize)> = candidates
        .into_iter()
        .zip(flags)
        .filter(|&(_, ok)| ok)
        .map(|(p, _)| p)
        .collect();
    pairs.sort_by_key(|&(i, j)| (pool[i].size() + pool[j].size(), i, j));

    // Candidate tuples of premise pairs in search order, generated lazily;
    // pairs of pairs run along the diagonals of the grid so small tuples
    // come first.
    let n = pairs.len();
    let mut tuples: Box<dyn Iterator<Item = Vec<(usize, usize)>> + '_> = if case.op.arity() == 1 {
        Box::new(pairs.iter().map(|&p| vec![p]))
    } else {
        Box::new(
            (0..(2 * n).saturating_sub(1))
                .flat_map(move |d| (d.saturating_sub(n - 1)..=d.min(n - 1)).map(move |x| (x, d - x)))
                .map(|(x, y)| vec![pairs[x], pairs[y]]),
        )
    };
    let mut offset = 0u64;
    loop {
        let chunk: Vec<Vec<(usize, usize)>> = tuples.by_ref().take(SEARCH_CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let failed = chunk
            .par_iter()
            .map(|chosen| {
                let a: Vec<Structure> = chosen.iter().map(|&(i, _)| pool[i].clone()).collect();
                let b: Vec<Structure> = chosen.iter().map(|&(_, j)| pool[j].clone()).collect();
                Ok(!conclusion(case, &a, &b)?)
            })
            .collect::<Result<Vec<bool>>>()?;
        if let Some(pos) = failed.iter().position(|&f| f) {
            let chosen = &chunk[pos];
            return Ok(Some(Violation {
                sample: offset + pos as u64,
                a: chosen.iter().map(|&(i, _)| pool[i].clone()).collect(),
                b: chosen.iter().map(|&(_, j)| pool[j].clone()).collect(),
            }));
        }
        offset += chunk.len() as u64;
    }
    Ok(None)
}
