//! The registered composition properties. A combination of operation,
//! comonad, fragment and translation that is not listed here is rejected
//! rather than guessed.

use super::{Expectation, FvmCase, FvmOp, Translation};
use crate::comonads::Kind;
use crate::error::{Error, Result};
use crate::games::Fragment;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_SAMPLES: usize = 200;
const ATTEMPTS_PER_SAMPLE: usize = 50;

fn sig(rels: &[(&str, usize)]) -> Vec<(String, usize)> {
    rels.iter().map(|&(n, a)| (n.to_string(), a)).collect()
}

struct Draft {
    op: FvmOp,
    kind: Kind,
    fragment: Fragment,
    k_in: usize,
    k_out: usize,
    translation: Option<Translation>,
    expectation: Expectation,
    signature: Vec<(String, usize)>,
    relation: Option<&'static str>,
    reduct_to: Option<Vec<(String, usize)>>,
    max_size: usize,
    description: String,
}

impl Draft {
    fn theorem(op: FvmOp, kind: Kind, fragment: Fragment, signature: Vec<(String, usize)>, max_size: usize) -> Self {
        Draft {
            op,
            kind,
            fragment,
            k_in: 2,
            k_out: 2,
            translation: None,
            expectation: Expectation::Theorem,
            signature,
            relation: None,
            reduct_to: None,
            max_size,
            description: String::new(),
        }
    }

    fn describe(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }

    fn build(self) -> FvmCase {
        let mut name = format!("{}-{}-{}", self.op, self.kind, self.fragment);
        if let Some(t) = self.translation {
            name.push('+');
            name.push_str(&t.to_string());
        }
        FvmCase {
            name,
            description: self.description,
            op: self.op,
            kind: self.kind,
            fragment: self.fragment,
            k_in: self.k_in,
            k_out: self.k_out,
            translation: self.translation,
            expectation: self.expectation,
            signature: self.signature,
            relation: self.relation.map(str::to_string),
            reduct_to: self.reduct_to,
            max_size: self.max_size,
            samples: DEFAULT_SAMPLES,
            attempts_per_sample: ATTEMPTS_PER_SAMPLE,
            seed: DEFAULT_SEED,
        }
    }
}

fn fragment_phrase(f: Fragment) -> &'static str {
    match f {
        Fragment::Pe => "preservation of positive existential sentences",
        Fragment::Exist => "preservation of existential sentences",
        Fragment::Count => "agreement on counting sentences",
        Fragment::Full => "agreement on all sentences",
    }
}

/// Every registered case, in a fixed order.
pub fn registry() -> Vec<FvmCase> {
    let graph = || sig(&[("E", 2)]);
    let labelled = || sig(&[("R", 2), ("P", 1)]);
    let three = [Fragment::Pe, Fragment::Count, Fragment::Full];
    let mut out = Vec::new();

    for kind in [Kind::Ef, Kind::Pebble] {
        for fragment in three {
            out.push(
                Draft::theorem(FvmOp::DisjointUnion, kind, fragment, graph(), 3)
                    .describe(format!(
                        "Disjoint union: {} at resource k transfers from the summands to the union, \
                         via the coproduct Kleisli law.",
                        fragment_phrase(fragment)
                    ))
                    .build(),
            );
        }
    }
    for kind in [Kind::Ef, Kind::Pebble, Kind::Modal] {
        for fragment in three {
            out.push(
                Draft::theorem(FvmOp::Product, kind, fragment, graph(), 2)
                    .describe(format!(
                        "Product: {} at resource k transfers from the factors to the product, \
                         via the product Kleisli law.",
                        fragment_phrase(fragment)
                    ))
                    .build(),
            );
        }
    }
    for fragment in [Fragment::Pe, Fragment::Full] {
        let mut draft = Draft::theorem(FvmOp::Merge, Kind::Modal, fragment, labelled(), 3).describe(format!(
            "Merge below a fresh R-root: {} at depth k for the operands gives it at depth k + 1 \
             for the merged structures.",
            fragment_phrase(fragment)
        ));
        draft.relation = Some("R");
        draft.k_out = draft.k_in + 1;
        out.push(draft.build());
    }
    for fragment in [Fragment::Pe, Fragment::Full] {
        out.push(
            Draft::theorem(FvmOp::Vee, Kind::Modal, fragment, labelled(), 3)
                .describe(format!(
                    "Vee of pointed structures: the fresh root copies the moves of both points, \
                     so {} at depth k transfers at the same depth.",
                    fragment_phrase(fragment)
                ))
                .build(),
        );
    }
    for fragment in three {
        let mut draft =
            Draft::theorem(FvmOp::Reduct, Kind::Ef, fragment, sig(&[("E", 2), ("F", 2)]), 3).describe(format!(
                "Reduct to a subsignature: {} over the larger signature implies it over the smaller one.",
                fragment_phrase(fragment)
            ));
        draft.reduct_to = Some(graph());
        out.push(draft.build());
    }

    let mut counter = Draft::theorem(FvmOp::PointedCoproduct, Kind::Modal, Fragment::Pe, labelled(), 3).describe(
        "Pointed coproduct (points identified): modal positive existential preservation does not transfer, \
         because a loop at one point lets a path pick up the other operand's point labels.",
    );
    counter.k_in = 1;
    counter.k_out = 1;
    counter.expectation = Expectation::Counterexample;
    out.push(counter.build());

    for fragment in three {
        let mut draft = Draft::theorem(FvmOp::DisjointUnion, Kind::Ef, fragment, graph(), 3).describe(format!(
            "Disjoint union after adding equality as a relation: the translation commutes with the union, \
             so {} with equality transfers.",
            fragment_phrase(fragment)
        ));
        draft.translation = Some(Translation::Equality);
        out.push(draft.build());
    }
    for fragment in [Fragment::Pe, Fragment::Full] {
        let mut draft = Draft::theorem(FvmOp::DisjointUnion, Kind::Ef, fragment, graph(), 3).describe(format!(
            "Disjoint union after adding the connectivity relation: the connectivity of a union is the \
             union of the connectivities, so {} transfers.",
            fragment_phrase(fragment)
        ));
        draft.translation = Some(Translation::Connectivity);
        out.push(draft.build());
    }
    for fragment in [Fragment::Pe, Fragment::Full] {
        let mut draft = Draft::theorem(FvmOp::Product, Kind::Modal, fragment, graph(), 2).describe(format!(
            "Product after adding the global modality: the full relation of a product is the product of \
             the full relations, so {} with the global modality transfers.",
            fragment_phrase(fragment)
        ));
        draft.translation = Some(Translation::Global);
        out.push(draft.build());
    }
    for fragment in [Fragment::Pe, Fragment::Full] {
        let mut draft = Draft::theorem(
            FvmOp::Merge,
            Kind::Modal,
            fragment,
            sig(&[("R", 2), ("S", 2), ("P", 1)]),
            3,
        )
        .describe(format!(
            "Merge along the silent relation S under the weak translation: the translated merge is the \
             vee of the translated operands, so {} for weak bisimulation transfers at the same depth.",
            fragment_phrase(fragment)
        ));
        draft.translation = Some(Translation::Weak);
        draft.relation = Some("S");
        out.push(draft.build());
    }
    out
}

/// The registered case with the given name.
pub fn case(name: &str) -> Result<FvmCase> {
    registry()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("no registered case named `{name}`")))
}

/// The registered case for a combination.
pub fn find_case(op: FvmOp, kind: Kind, fragment: Fragment, translation: Option<Translation>) -> Result<FvmCase> {
    registry()
        .into_iter()
        .find(|c| c.op == op && c.kind == kind && c.fragment == fragment && c.translation == translation)
        .ok_or_else(|| {
            let t = translation
                .map(|t| format!(" with the {t} translation"))
                .unwrap_or_default();
            Error::InvalidInput(format!("the combination {op}/{kind}/{fragment}{t} is not registered"))
        })
}
