//! Deciders for the relations compared by the game comonads: positive
//! existential preservation, existential preservation, counting equivalence
//! and full equivalence, for the EF, pebbling and modal comonads. All games
//! are played in logic without equality: positions are arbitrary relations
//! between elements, and only atoms over the chosen elements are compared.
//!
//! * EF: games of bounded length, memoised over positions (multisets of pairs).
//! * Pebble: greatest fixpoints over pebble placements, since the logic has no
//!   quantifier-rank bound.
//! * Modal: depth-bounded simulation, bisimulation and graded bisimulation
//!   from the distinguished points.

mod atoms;
mod ef;
mod matching;
mod modal;
mod oracles;
mod pebble;
mod wl;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::comonads::Kind;
use crate::error::{Error, Result};
use crate::structures::Structure;

use atoms::Dense;

pub use oracles::{hom_exists, kleisli_iso_search, KLEISLI_SEARCH_MAX_BASE, KLEISLI_SEARCH_MAX_K};
pub use pebble::MAX_POSITIONS;
pub use wl::MAX_WL_TUPLES;

/// Largest universe for the exact bijective pebble game in automatic mode.
pub const BIJECTIVE_PEBBLE_MAX: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fragment {
    /// Positive existential sentences are preserved from `A` to `B`.
    Pe,
    /// Existential sentences are preserved from `A` to `B`.
    Exist,
    /// Agreement on sentences with counting quantifiers.
    Count,
    /// Agreement on all sentences.
    Full,
}

impl Fragment {
    pub const ALL: [Fragment; 4] = [Fragment::Pe, Fragment::Exist, Fragment::Count, Fragment::Full];

    /// Whether the relation is symmetric.
    pub fn is_equivalence(self) -> bool {
        matches!(self, Fragment::Count | Fragment::Full)
    }

    fn rule(self) -> Rule {
        match self {
            Fragment::Pe => Rule::Forth,
            Fragment::Exist => Rule::Exist,
            Fragment::Count => Rule::Bijective,
            Fragment::Full => Rule::BackForth,
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Pe => "pe",
            Fragment::Exist => "exist",
            Fragment::Count => "count",
            Fragment::Full => "full",
        })
    }
}

impl FromStr for Fragment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pe" => Ok(Fragment::Pe),
            "exist" => Ok(Fragment::Exist),
            "count" => Ok(Fragment::Count),
            "full" => Ok(Fragment::Full),
            _ => Err(Error::InvalidInput(format!("unknown fragment {s:?}"))),
        }
    }
}

/// Duplicator's obligation in one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rule {
    /// Answer every Spoiler move in `A`; atoms transfer from `A` to `B`.
    Forth,
    /// As `Forth`, with atoms agreeing both ways.
    Exist,
    /// Spoiler may play in either structure; atoms agree both ways.
    BackForth,
    /// Duplicator commits to a bijection before Spoiler moves.
    Bijective,
}

impl Rule {
    fn both(self) -> bool {
        self != Rule::Forth
    }
}

/// How a verdict was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Homomorphism,
    Game,
    Fixpoint,
    Wl,
    Simulation,
    KleisliSearch,
}

/// Choice of decider for counting equivalence in the pebbling case.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountBackend {
    /// The bijective fixpoint up to [`BIJECTIVE_PEBBLE_MAX`] elements, an error beyond.
    #[default]
    Auto,
    Bijective,
    Wl,
}

/// A certificate that replays to `true` under [`replay`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A homomorphism from the carrier over `A` to `B`, by carrier index.
    Homomorphism { table: Vec<u32> },
    /// EF positions `(rounds left, pairs)` closed under Duplicator's rule.
    EfPositions { positions: Vec<(usize, Vec<(u32, u32)>)> },
    /// Pebble placements closed under Duplicator's rule.
    PebblePositions { positions: Vec<Vec<Option<(u32, u32)>>> },
    /// Related pairs at depth `0..=k`.
    Relations { layers: Vec<Vec<(u32, u32)>> },
    /// A Kleisli isomorphism `f: C(A) -> B`, `g: C(B) -> A`.
    KleisliPair { f: Vec<u32>, g: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub fragment: Fragment,
    pub kind: Kind,
    pub k: usize,
    pub result: bool,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

/// A decision request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Query {
    pub fragment: Fragment,
    pub kind: Kind,
    pub k: usize,
    pub count_backend: CountBackend,
    pub witness: bool,
}

impl Query {
    pub fn new(fragment: Fragment, kind: Kind, k: usize) -> Self {
        Query {
            fragment,
            kind,
            k,
            count_backend: CountBackend::Auto,
            witness: false,
        }
    }

    pub fn with_backend(mut self, backend: CountBackend) -> Self {
        self.count_backend = backend;
        self
    }

    pub fn with_witness(mut self, witness: bool) -> Self {
        self.witness = witness;
        self
    }
}

fn check_inputs(q: &Query, a: &Structure, b: &Structure) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::IncompatibleSignatures);
    }
    if q.k == 0 {
        return Err(Error::InvalidInput("the resource k must be at least 1".into()));
    }
    match q.kind {
        Kind::Ef => {
            if a.is_pointed() || b.is_pointed() {
                return Err(Error::Pointedness("EF games take unpointed structures".into()));
            }
        }
        Kind::Pebble => {
            if a.is_pointed() != b.is_pointed() {
                return Err(Error::Pointedness(
                    "pebble games take two pointed or two unpointed structures".into(),
                ));
            }
        }
        Kind::Modal => {
            if !a.signature().is_modal() {
                return Err(Error::NotModal);
            }
            if !a.is_pointed() || !b.is_pointed() {
                return Err(Error::Pointedness("modal games take pointed structures".into()));
            }
            if q.fragment == Fragment::Exist {
                return Err(Error::Unsupported(
                    "the existential fragment is decided for EF and pebble games only".into(),
                ));
            }
        }
        Kind::Cos => {
            return Err(Error::Unsupported("no game for the closed-walk comonad".into()));
        }
    }
    Ok(())
}

fn points(a: &Structure, b: &Structure) -> Option<(u32, u32)> {
    a.point().zip(b.point())
}

/// Decides `q` for the ordered pair `(a, b)`.
pub fn decide(q: &Query, a: &Structure, b: &Structure) -> Result<Verdict> {
    check_inputs(q, a, b)?;
    let rule = q.fragment.rule();
    let verdict = |result, backend, witness| Verdict {
        fragment: q.fragment,
        kind: q.kind,
        k: q.k,
        result,
        backend,
        witness,
    };
    match q.kind {
        Kind::Ef => {
            if rule == Rule::Bijective && a.size() != b.size() {
                return Ok(verdict(false, Backend::Game, None));
            }
            let (da, db) = (Dense::new(a), Dense::new(b));
            let mut game = ef::EfGame::new(&da, &db, rule);
            let result = game.wins(q.k, &Vec::new());
            let witness = (result && q.witness).then(|| Witness::EfPositions {
                positions: game.winning_positions(),
            });
            Ok(verdict(result, Backend::Game, witness))
        }
        Kind::Pebble => {
            if rule == Rule::Bijective {
                if a.size() != b.size() {
                    return Ok(verdict(false, Backend::Fixpoint, None));
                }
                let wl = match q.count_backend {
                    CountBackend::Wl => true,
                    CountBackend::Bijective => false,
                    CountBackend::Auto => {
                        if a.size() > BIJECTIVE_PEBBLE_MAX {
                            return Err(Error::GuardExceeded {
                                what: "bijective pebble game universe (use the WL backend)".into(),
                                size: a.size(),
                                limit: BIJECTIVE_PEBBLE_MAX,
                            });
                        }
                        false
                    }
                };
                if wl {
                    if a.is_pointed() {
                        return Err(Error::Unsupported("the WL backend takes unpointed structures".into()));
                    }
                    let result = if q.k == 1 {
                        wl::same_unary_types(a, b)
                    } else {
                        wl::wl_equivalent(a, b, q.k - 1)?
                    };
                    return Ok(verdict(result, Backend::Wl, None));
                }
            }
            let (da, db) = (Dense::new(a), Dense::new(b));
            let game = pebble::PebbleGame::new(&da, &db, q.k, rule)?;
            let result = game.win[game.start(points(a, b))];
            let witness = (result && q.witness).then(|| Witness::PebblePositions {
                positions: game.winning_positions(),
            });
            Ok(verdict(result, Backend::Fixpoint, witness))
        }
        Kind::Modal => {
            let layers = modal::layers(a, b, q.k, rule);
            let m = b.size();
            let (p, pb) = points(a, b).expect("checked pointed");
            let result = layers[q.k][p as usize * m + pb as usize];
            let witness = (result && q.witness).then(|| Witness::Relations {
                layers: layers
                    .iter()
                    .map(|t| {
                        t.iter()
                            .enumerate()
                            .filter(|(_, &v)| v)
                            .map(|(i, _)| ((i / m) as u32, (i % m) as u32))
                            .collect()
                    })
                    .collect(),
            });
            Ok(verdict(result, Backend::Simulation, witness))
        }
        Kind::Cos => unreachable!("rejected by check_inputs"),
    }
}

/// Whether every positive existential sentence (of the resource given by
/// `kind` and `k`) true in `a` is true in `b`.
pub fn pe_forth(kind: Kind, a: &Structure, b: &Structure, k: usize) -> Result<Verdict> {
    decide(&Query::new(Fragment::Pe, kind, k), a, b)
}

/// The existential pebble game from `a` to `b`.
pub fn pebble_forth(a: &Structure, b: &Structure, k: usize) -> Result<Verdict> {
    pe_forth(Kind::Pebble, a, b, k)
}

/// Whether every existential sentence true in `a` is true in `b` (EF and
/// pebbling only).
pub fn exist_forth(kind: Kind, a: &Structure, b: &Structure, k: usize) -> Result<Verdict> {
    decide(&Query::new(Fragment::Exist, kind, k), a, b)
}

/// Agreement on all sentences of the given resource.
pub fn full_equiv(kind: Kind, a: &Structure, b: &Structure, k: usize) -> Result<Verdict> {
    decide(&Query::new(Fragment::Full, kind, k), a, b)
}

/// Agreement on sentences with counting quantifiers; for the pebbling
/// comonad the exact backend is limited to [`BIJECTIVE_PEBBLE_MAX`] elements.
pub fn count_equiv(kind: Kind, a: &Structure, b: &Structure, k: usize) -> Result<Verdict> {
    decide(&Query::new(Fragment::Count, kind, k), a, b)
}

/// [`count_equiv`] with an explicit backend.
pub fn count_equiv_with(kind: Kind, a: &Structure, b: &Structure, k: usize, backend: CountBackend) -> Result<Verdict> {
    decide(&Query::new(Fragment::Count, kind, k).with_backend(backend), a, b)
}

/// Re-checks the witness of a positive verdict for the pair `(a, b)` from
/// scratch. Verdicts without a witness replay to `false`.
pub fn replay(v: &Verdict, a: &Structure, b: &Structure) -> Result<bool> {
    let Some(w) = &v.witness else { return Ok(false) };
    let q = Query::new(v.fragment, v.kind, v.k);
    let rule = v.fragment.rule();
    match w {
        Witness::Homomorphism { table } => {
            let c = crate::comonads::Params::new(v.kind, v.k).build(a)?;
            if table.len() != c.size() || table.iter().any(|&y| y as usize >= b.size()) {
                return Ok(false);
            }
            crate::structures::StructureMap::new(table.clone()).is_homomorphism(&c.carrier.structure, b)
        }
        Witness::EfPositions { positions } => {
            check_inputs(&q, a, b)?;
            let (da, db) = (Dense::new(a), Dense::new(b));
            if positions
                .iter()
                .flat_map(|(_, p)| p)
                .any(|&(x, y)| x as usize >= a.size() || y as usize >= b.size())
            {
                return Ok(false);
            }
            Ok(ef::replay(&da, &db, rule, v.k, positions))
        }
        Witness::PebblePositions { positions } => {
            check_inputs(&q, a, b)?;
            let (da, db) = (Dense::new(a), Dense::new(b));
            pebble::PebbleGame::replay(&da, &db, v.k, rule, points(a, b), positions)
        }
        Witness::Relations { layers } => {
            check_inputs(&q, a, b)?;
            Ok(layers.len() == v.k + 1 && modal::replay(a, b, rule, layers))
        }
        Witness::KleisliPair { f, g } => oracles::replay_kleisli_pair(v.kind, v.k, a, b, f, g),
    }
}

#[cfg(test)]
mod tests;
