//! Elementwise verification of the comonad equations on a materialised instance.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::structures::{random_homomorphism, Labeled, Structure};
use crate::term::Term;

use super::{coextend_into, coextend_term, counit_term, delta_term, fmap_term, ComonadInstance, Kind};

pub const LAW_COUNIT_COEXT: &str = "eps* = id";
pub const LAW_COUNIT_AFTER: &str = "eps . f* = f";
pub const LAW_COMPOSITION: &str = "(g . f*)* = g* . f*";
pub const LAW_COMULT_COUNIT: &str = "eps . delta = id = C(eps) . delta";
pub const LAW_COASSOC: &str = "delta . delta = C(delta) . delta";
pub const LAW_HOMOMORPHISM: &str = "f* is a homomorphism";
pub const LAW_ROUND_TRIP: &str = "f* = C(f) . delta";

/// Outcome of one equation over all checked elements.
#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub checked: usize,
    pub failures: usize,
    /// Description of the first failing element, if any.
    pub counterexample: Option<String>,
}

impl LawCheck {
    pub(crate) fn new(law: &str) -> Self {
        LawCheck {
            law: law.to_string(),
            checked: 0,
            failures: 0,
            counterexample: None,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub kind: Kind,
    pub k: usize,
    pub trunc: usize,
    pub base_size: usize,
    pub carrier_size: usize,
    /// Number of sampled Kleisli morphisms `f` (each with a partner `g` when one exists).
    pub morphisms: usize,
    pub notices: Vec<String>,
    pub laws: Vec<LawCheck>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawCheck::passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// Per-sample generator: a fixed function of the seed and the sample index.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Checks the comonad equations on `c`:
///
/// * for every carrier element: `ε* = id`, `ε∘δ = id = C(ε)∘δ`,
///   `δ∘δ = C(δ)∘δ`;
/// * for `samples` random Kleisli morphisms `f: C(A) -> B` and
///   `g: C(B) -> D` (homomorphisms found by randomised backtracking, targets
///   drawn from `c`'s base and `sample_targets`): `ε∘f* = f`,
///   `(g∘f*)* = g*∘f*`, that `f*` is a homomorphism and that `f* = C(f)∘δ`.
///
/// Targets with the wrong signature or pointedness are ignored; targets that
/// admit no Kleisli morphism are skipped with a notice.
pub fn check_comonad_laws(
    c: &ComonadInstance,
    sample_targets: &[Structure],
    samples: usize,
    seed: u64,
) -> Result<LawReport> {
    let mut report = LawReport {
        kind: c.kind(),
        k: c.k(),
        trunc: c.params.trunc,
        base_size: c.base.size(),
        carrier_size: c.size(),
        morphisms: 0,
        notices: Vec::new(),
        laws: Vec::new(),
    };
    let mut counit_coext = LawCheck::new(LAW_COUNIT_COEXT);
    let mut comult_counit = LawCheck::new(LAW_COMULT_COUNIT);
    let mut coassoc = LawCheck::new(LAW_COASSOC);
    let mut counit_after = LawCheck::new(LAW_COUNIT_AFTER);
    let mut composition = LawCheck::new(LAW_COMPOSITION);
    let mut homomorphism = LawCheck::new(LAW_HOMOMORPHISM);
    let mut round_trip = LawCheck::new(LAW_ROUND_TRIP);

    let eps_star = coextend_into(c, &c.counit, &c.base, c)?;
    for (i, t) in c.carrier.labels().iter().enumerate() {
        counit_coext.record(eps_star.apply(i as u32) == i as u32, || format!("element {t}"));
        let d = delta_term(t)?;
        let left = counit_term(&d)? == t;
        let right = fmap_term(&d, |x| Ok(counit_term(x)?.clone()))? == *t;
        comult_counit.record(left && right, || format!("element {t}"));
        let dd = delta_term(&d)?;
        let cd = fmap_term(&d, delta_term)?;
        coassoc.record(dd == cd, || format!("element {t}"));
    }

    // Candidate targets, the base first.
    let pointed = c.base.structure.is_pointed();
    let mut targets: Vec<Labeled> = vec![c.base.clone()];
    for s in sample_targets {
        if s.signature() == c.base.structure.signature() && s.is_pointed() == pointed {
            targets.push(Labeled::plain(s.clone()));
        }
    }
    let mut built: HashMap<usize, ComonadInstance> = HashMap::new();
    let mut carrier_of = |i: usize| -> Result<ComonadInstance> {
        if let Some(ci) = built.get(&i) {
            return Ok(ci.clone());
        }
        let ci = c.rebuild_on(targets[i].clone())?;
        built.insert(i, ci.clone());
        Ok(ci)
    };
    let mut no_morphism = vec![false; targets.len()];

    for sample in 0..samples {
        let mut rng = sample_rng(seed, sample as u64);
        // Kleisli morphism f: C(A) -> B.
        let mut chosen = None;
        let first = rng.gen_range(0..targets.len());
        for attempt in 0..targets.len() {
            let bi = (first + attempt) % targets.len();
            if no_morphism[bi] {
                continue;
            }
            match random_homomorphism(&c.carrier.structure, &targets[bi].structure, &mut rng)? {
                Some(f) => {
                    chosen = Some((bi, f));
                    break;
                }
                None => {
                    no_morphism[bi] = true;
                    report
                        .notices
                        .push(format!("no Kleisli morphism into sample target {bi}; skipped"));
                }
            }
        }
        let Some((bi, f)) = chosen else { continue };
        report.morphisms += 1;
        let b = &targets[bi];
        let cb = carrier_of(bi)?;
        let fstar = coextend_into(c, &f, b, &cb)?;
        homomorphism.record(
            fstar.is_homomorphism(&c.carrier.structure, &cb.carrier.structure)?,
            || {
                format!(
                    "sample {sample}: {:?}",
                    fstar.first_unpreserved(&c.carrier.structure, &cb.carrier.structure)
                )
            },
        );
        let back = cb.counit.after(&fstar);
        for (i, t) in c.carrier.labels().iter().enumerate() {
            counit_after.record(back.apply(i as u32) == f.apply(i as u32), || {
                format!("sample {sample}, element {t}")
            });
            let named = |p: &Term| -> Result<Term> { Ok(b.label(f.apply(c.carrier.lookup(p)?)).clone()) };
            let direct = coextend_term(t, named)?;
            // C(f) acts letterwise on δ(t), whose letters are carrier elements.
            let via_delta = fmap_term(&delta_term(t)?, named)?;
            round_trip.record(
                direct == via_delta && cb.carrier.label(fstar.apply(i as u32)) == &direct,
                || format!("sample {sample}, element {t}"),
            );
        }

        // Partner g: C(B) -> D.
        let di = rng.gen_range(0..targets.len());
        let Some(g) = random_homomorphism(&cb.carrier.structure, &targets[di].structure, &mut rng)? else {
            continue;
        };
        let d = &targets[di];
        let cd = carrier_of(di)?;
        let gf = g.after(&fstar);
        let lhs = coextend_into(c, &gf, d, &cd)?;
        let rhs = coextend_into(&cb, &g, d, &cd)?.after(&fstar);
        for (i, t) in c.carrier.labels().iter().enumerate() {
            composition.record(lhs.apply(i as u32) == rhs.apply(i as u32), || {
                format!("sample {sample}, element {t}")
            });
        }
    }

    report.laws = vec![
        counit_coext,
        counit_after,
        composition,
        comult_counit,
        coassoc,
        homomorphism,
        round_trip,
    ];
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comonads::{build, Params};
    use crate::structures::Signature;

    #[test]
    fn ef_laws_on_a_small_base() {
        let base = Structure::digraph(3, &[(0, 1), (1, 2), (2, 2)]).unwrap();
        let c = build(Kind::Ef, &base, 2, None).unwrap();
        let targets = vec![
            Structure::digraph(1, &[(0, 0)]).unwrap(),
            Structure::digraph(2, &[(0, 1), (1, 0)]).unwrap(),
        ];
        let r = check_comonad_laws(&c, &targets, 20, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.morphisms, 20);
    }

    #[test]
    fn modal_and_pebble_laws() {
        let base = Structure::digraph(2, &[(0, 1), (1, 0)])
            .unwrap()
            .with_point(Some(0))
            .unwrap();
        let c = build(Kind::Modal, &base, 3, None).unwrap();
        assert!(check_comonad_laws(&c, &[], 10, 2).unwrap().passed());
        let c = Params::new(Kind::Pebble, 2)
            .with_trunc(3)
            .build(&Structure::digraph(2, &[(0, 1)]).unwrap())
            .unwrap();
        assert!(check_comonad_laws(&c, &[], 10, 3).unwrap().passed());
    }

    #[test]
    fn targets_without_morphisms_are_skipped() {
        let base = Structure::digraph(1, &[(0, 0)]).unwrap();
        let c = build(Kind::Ef, &base, 1, None).unwrap();
        let bare = Structure::new(Signature::graph(), 1);
        let r = check_comonad_laws(&c, &[bare], 10, 4).unwrap();
        assert!(r.passed());
        assert_eq!(r.morphisms, 10, "{r:?}");
    }
}
