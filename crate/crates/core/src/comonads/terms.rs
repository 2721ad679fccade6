//! The comonad structure acting on element names.
//!
//! For every kind an element of `C(A)` is a shape (word, pebbled word, path,
//! closed walk with a position) filled with letters from `A`. Counit,
//! coextension, comultiplication and the functor action only need the shape,
//! so they are defined here once for all kinds.

use crate::error::{Error, Result};
use crate::term::Term;

fn not_an_element(t: &Term) -> Error {
    Error::InvalidInput(format!("{t} is not a comonad carrier element"))
}

/// `ε`: the last letter of a word or path, the marked vertex of a walk.
pub fn counit_term(t: &Term) -> Result<&Term> {
    match t {
        Term::Word(w) => w.last().ok_or_else(|| not_an_element(t)),
        Term::Pebbled(w) => w.last().map(|(_, a)| a).ok_or_else(|| not_an_element(t)),
        Term::Path(start, steps) => Ok(steps.last().map(|(_, a)| a).unwrap_or(start)),
        Term::Walk(walk, i) => walk.get(*i as usize).ok_or_else(|| not_an_element(t)),
        _ => Err(not_an_element(t)),
    }
}

/// The carrier elements that the coextension formula feeds to a Kleisli
/// morphism, one per letter: the non-empty prefixes of a word, the prefixes
/// of a path (starting with the empty path), and for a walk the same walk
/// marked at each of its positions.
pub fn positions(t: &Term) -> Result<Vec<Term>> {
    Ok(match t {
        Term::Word(w) => (1..=w.len()).map(|i| Term::Word(w[..i].to_vec())).collect(),
        Term::Pebbled(w) => (1..=w.len()).map(|i| Term::Pebbled(w[..i].to_vec())).collect(),
        Term::Path(start, steps) => (0..=steps.len())
            .map(|i| Term::Path(start.clone(), steps[..i].to_vec()))
            .collect(),
        Term::Walk(walk, _) => (0..walk.len()).map(|j| Term::Walk(walk.clone(), j as u16)).collect(),
        _ => return Err(not_an_element(t)),
    })
}

/// Replaces the letters of `t` (in order) while keeping its shape: pebble
/// indices, relation labels and the marked walk position.
pub fn relabel(t: &Term, letters: Vec<Term>) -> Result<Term> {
    let n = t.word_len();
    if letters.len() != n || n == 0 {
        return Err(not_an_element(t));
    }
    Ok(match t {
        Term::Word(_) => Term::Word(letters),
        Term::Pebbled(w) => Term::Pebbled(w.iter().map(|(p, _)| *p).zip(letters).collect()),
        Term::Path(_, steps) => {
            let mut it = letters.into_iter();
            let start = it.next().unwrap();
            Term::path(start, steps.iter().map(|(r, _)| *r).zip(it).collect())
        }
        Term::Walk(_, i) => Term::Walk(letters, *i),
        _ => return Err(not_an_element(t)),
    })
}

/// `f*(t)`: apply `f` to every position of `t` and keep the shape.
pub fn coextend_term(t: &Term, mut f: impl FnMut(&Term) -> Result<Term>) -> Result<Term> {
    let letters = positions(t)?.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
    relabel(t, letters)
}

/// `δ(t) = id*(t)`.
pub fn delta_term(t: &Term) -> Result<Term> {
    coextend_term(t, |p| Ok(p.clone()))
}

/// `C(g)(t) = (g ∘ ε)*(t)`: letterwise application of `g`.
pub fn fmap_term(t: &Term, mut g: impl FnMut(&Term) -> Result<Term>) -> Result<Term> {
    coextend_term(t, |p| g(counit_term(p)?))
}
