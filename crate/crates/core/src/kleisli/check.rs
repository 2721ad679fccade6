//! Elementwise verification of the Kleisli-law axioms.

use rand::Rng;
use serde::Serialize;

use crate::comonads::{coextend_term, counit_term, delta_term, fmap_term, sample_rng, ComonadInstance, Kind, LawCheck};
use crate::error::Result;
use crate::structures::{
    enumerate_pointed, enumerate_structures, random_homomorphism, EnumerateOptions, Labeled, Signature, Structure,
    StructureMap,
};
use crate::term::Term;

use super::{KleisliLaw, LawInstance};

pub const LAW_HOMOMORPHISM: &str = "kappa is a homomorphism";
pub const LAW_NATURALITY: &str = "kappa . D(H(h)) = H(C(h)) . kappa";
pub const LAW_K1: &str = "H(eps) . kappa = eps";
pub const LAW_K2: &str = "H(delta) . kappa = kappa . D(kappa) . delta";
pub const LAW_KLEISLI_UNIT: &str = "lift(eps) = eps";
pub const LAW_KLEISLI_COMPOSITION: &str = "lift(g . f*) = lift(g) . lift(f)*";

#[derive(Clone, Debug, Serialize)]
pub struct KleisliLawReport {
    pub law: String,
    /// Operand tuples checked.
    pub bases: usize,
    /// Sampled homomorphisms / Kleisli morphisms per operand tuple.
    pub samples: usize,
    /// Whether a carrier involved is a truncation of the comonad.
    pub truncated: bool,
    pub notices: Vec<String>,
    pub checks: Vec<LawCheck>,
    /// Whether the axiomatic checks (naturality, K1, K2) and the Kleisli-form
    /// checks reach the same conclusion.
    pub formulations_agree: bool,
}

impl KleisliLawReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LawCheck::passed) && self.formulations_agree
    }

    pub fn check(&self, name: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == name)
    }
}

/// All operand tuples for `law` over `sig` with operands of size at most
/// `max_size`, one operand per isomorphism class: pointed for modal laws,
/// loopless undirected graphs for the closed-walk morphism.
pub fn exhaustive_bases(law: &KleisliLaw, sig: &Signature, max_size: usize) -> Result<Vec<Vec<Structure>>> {
    let opts = EnumerateOptions::new(max_size).up_to_iso();
    let singles: Vec<Structure> = match law.source.kind {
        Kind::Modal => enumerate_pointed(sig, &opts)?,
        Kind::Cos => enumerate_structures(sig, &opts)?
            .into_iter()
            .filter(|s| {
                s.signature().len() == 1
                    && s.signature().arity(0) == 2
                    && s.tuples(0).iter().all(|t| t[0] != t[1] && s.holds(0, &[t[1], t[0]]))
            })
            .collect(),
        _ => enumerate_structures(sig, &opts)?,
    };
    let mut tuples: Vec<Vec<Structure>> = vec![Vec::new()];
    for _ in 0..law.arity() {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                singles.iter().map(move |s| {
                    let mut t = t.clone();
                    t.push(s.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples)
}

/// The name of `f(t)` for a map on carrier indices.
fn named(c: &ComonadInstance, f: &StructureMap, target: &Labeled, t: &Term) -> Result<Term> {
    Ok(target.label(f.apply(c.carrier.lookup(t)?)).clone())
}

/// Checks `law` on every operand tuple in `bases`:
///
/// * `κ` is a homomorphism `D(H(A⃗)) -> H(C₁A₁, …)`;
/// * naturality for `samples` random homomorphisms `hᵢ: Aᵢ -> Bᵢ`;
/// * (K1) `H(ε⃗) ∘ κ = ε` and (K2) `H(δ⃗) ∘ κ = κ ∘ D(κ) ∘ δ`;
/// * the Kleisli form: the lifting `f⃗ ↦ H(f⃗) ∘ κ` sends counits to the
///   counit and preserves Kleisli composition, for `samples` random
///   `fᵢ: CᵢAᵢ -> Bᵢ`, `gᵢ: CᵢBᵢ -> Dᵢ`.
///
/// Targets `Bᵢ`, `Dᵢ` are drawn from the operands of `bases`.
pub fn check_kleisli_law(
    law: &KleisliLaw,
    bases: &[Vec<Structure>],
    samples: usize,
    seed: u64,
) -> Result<KleisliLawReport> {
    let mut hom = LawCheck::new(LAW_HOMOMORPHISM);
    let mut naturality = LawCheck::new(LAW_NATURALITY);
    let mut k1 = LawCheck::new(LAW_K1);
    let mut k2 = LawCheck::new(LAW_K2);
    let mut unit = LawCheck::new(LAW_KLEISLI_UNIT);
    let mut composition = LawCheck::new(LAW_KLEISLI_COMPOSITION);
    let truncated = std::iter::once(&law.source)
        .chain(&law.operands)
        .any(|p| matches!(p.kind, Kind::Pebble | Kind::Cos));
    let mut notices = Vec::new();
    if truncated {
        notices.push("truncated verification: carriers are cut at the word/walk length bound".to_string());
    }
    let mut pool: Vec<Structure> = Vec::new();
    for s in bases.iter().flatten() {
        if !pool.contains(s) {
            pool.push(s.clone());
        }
    }

    for (bi, tuple) in bases.iter().enumerate() {
        let inst = law.instantiate(tuple)?;
        let where_ = |t: &Term| format!("operands #{bi}, element {t}");
        let failure = inst.homomorphism_failure()?;
        hom.record(failure.is_none(), || {
            format!("operands #{bi}: {}", failure.clone().unwrap_or_default())
        });

        let images = inst.images()?;
        for (t, x) in inst.source.carrier.labels().iter().zip(&images) {
            // K1 on names.
            let ok = law
                .h_term(x, |_, s| Ok(counit_term(s)?.clone()))
                .and_then(|lhs| Ok(&lhs == counit_term(t)?));
            record(&mut k1, ok, || where_(t));
            // K2 on names.
            let ok = (|| {
                let lhs = law.h_term(x, |_, s| delta_term(s))?;
                let rhs = law.kappa_term(&fmap_term(&delta_term(t)?, |p| law.kappa_term(p))?)?;
                Ok(lhs == rhs)
            })();
            record(&mut k2, ok, || where_(t));
            // Kleisli unit via the counit maps of the operand carriers.
            let ok = law
                .h_term(x, |i, s| {
                    let c = &inst.operands[i];
                    named(c, &c.counit, &c.base, s)
                })
                .and_then(|lifted| Ok(&lifted == counit_term(t)?));
            record(&mut unit, ok, || where_(t));
        }

        for sample in 0..samples {
            let mut rng = sample_rng(seed, (bi * samples + sample) as u64);
            // Naturality for base homomorphisms h_i: A_i -> B_i.
            if let Some(hs) = draw_maps(&inst, &pool, &mut rng, |i| Ok(inst.bases[i].structure.clone()))? {
                let act = |i: usize, y: &Term| -> Result<Term> {
                    let (b, h) = &hs[i];
                    Ok(b.label(h.apply(inst.bases[i].lookup(y)?)).clone())
                };
                for (t, x) in inst.source.carrier.labels().iter().zip(&images) {
                    let ok = (|| {
                        let moved = fmap_term(t, |y| law.h_term(y, act))?;
                        let lhs = law.kappa_term(&moved)?;
                        let rhs = law.h_term(x, |i, s| fmap_term(s, |y| act(i, y)))?;
                        Ok(lhs == rhs)
                    })();
                    record(&mut naturality, ok, || format!("{}, sample {sample}", where_(t)));
                }
            }
            // Kleisli composition for f_i: C_i A_i -> B_i and g_i: C_i B_i -> D_i.
            let Some(fs) = draw_maps(&inst, &pool, &mut rng, |i| {
                Ok(inst.operands[i].carrier.structure.clone())
            })?
            else {
                continue;
            };
            let cbs = fs
                .iter()
                .zip(&law.operands)
                .map(|((b, _), p)| p.build_labeled(b.clone()))
                .collect::<Result<Vec<_>>>()?;
            let Some(gs) = draw_maps(&inst, &pool, &mut rng, |i| Ok(cbs[i].carrier.structure.clone()))? else {
                continue;
            };
            let f = |i: usize, s: &Term| named(&inst.operands[i], &fs[i].1, &fs[i].0, s);
            let g = |i: usize, s: &Term| named(&cbs[i], &gs[i].1, &gs[i].0, s);
            for (t, x) in inst.source.carrier.labels().iter().zip(&images) {
                let ok = (|| {
                    let lhs = law.h_term(x, |i, s| g(i, &coextend_term(s, |p| f(i, p))?))?;
                    let lifted_star = coextend_term(t, |p| law.h_term(&law.kappa_term(p)?, f))?;
                    let rhs = law.h_term(&law.kappa_term(&lifted_star)?, g)?;
                    Ok(lhs == rhs)
                })();
                record(&mut composition, ok, || format!("{}, sample {sample}", where_(t)));
            }
        }
    }

    let axioms = naturality.passed() && k1.passed() && k2.passed();
    let kleisli_form = unit.passed() && composition.passed();
    Ok(KleisliLawReport {
        law: law.name.clone(),
        bases: bases.len(),
        samples,
        truncated,
        notices,
        formulations_agree: axioms == kleisli_form,
        checks: vec![hom, naturality, k1, k2, unit, composition],
    })
}

/// Records an elementwise check; evaluation errors (names outside a carrier)
/// count as failures.
fn record(check: &mut LawCheck, ok: Result<bool>, describe: impl FnOnce() -> String) {
    let (passed, note) = match ok {
        Ok(b) => (b, String::new()),
        Err(e) => (false, format!(" ({e})")),
    };
    check.record(passed, || describe() + &note);
}

/// Random homomorphisms from `source(i)` into targets drawn from `pool`, one
/// per operand; `None` if some operand admits no map into any pool member.
fn draw_maps(
    inst: &LawInstance,
    pool: &[Structure],
    rng: &mut impl Rng,
    source: impl Fn(usize) -> Result<Structure>,
) -> Result<Option<Vec<(Labeled, StructureMap)>>> {
    let mut out = Vec::new();
    for i in 0..inst.law.arity() {
        let a = source(i)?;
        let first = rng.gen_range(0..pool.len());
        let mut found = None;
        for attempt in 0..pool.len() {
            let b = &pool[(first + attempt) % pool.len()];
            if b.signature() != a.signature() || b.is_pointed() != a.is_pointed() {
                continue;
            }
            if let Some(h) = random_homomorphism(&a, b, rng)? {
                found = Some((Labeled::plain(b.clone()), h));
                break;
            }
        }
        match found {
            Some(m) => out.push(m),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}
