//! Symbolic names for elements of constructed structures.
//!
//! Every element of a base structure, a disjoint union, a product or a comonad
//! carrier has a [`Term`] describing how it was built. Counit, coextension and
//! the Kleisli laws act on terms directly, so maps into carriers that are never
//! materialised (for example `C(C(A))`) can still be compared elementwise.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    /// Element `i` of a plain structure.
    Atom(u32),
    /// Summand tag and element of a disjoint union (tag 0 is the first summand).
    Inj(u8, Box<Term>),
    /// Element of a product.
    Tuple(Vec<Term>),
    /// The fresh initial point added by merge and vee.
    Star,
    /// A non-empty word `[a1, ..., an]`.
    Word(Vec<Term>),
    /// A pebbled word `[(p1, a1), ..., (pn, an)]`.
    Pebbled(Vec<(u8, Term)>),
    /// A path `a0 -R1-> a1 ... -Rn-> an` (relation indices into the signature).
    Path(Box<Term>, Vec<(u16, Term)>),
    /// A closed walk `v0 ... vn` together with a position on it.
    Walk(Vec<Term>, u16),
}

impl Term {
    pub fn inj(tag: u8, t: Term) -> Term {
        Term::Inj(tag, Box::new(t))
    }

    pub fn path(start: Term, steps: Vec<(u16, Term)>) -> Term {
        Term::Path(Box::new(start), steps)
    }

    /// Number of letters for word-like terms (walk length for walks), 0 otherwise.
    pub fn word_len(&self) -> usize {
        match self {
            Term::Word(w) => w.len(),
            Term::Pebbled(w) => w.len(),
            Term::Path(_, s) => s.len() + 1,
            Term::Walk(w, _) => w.len(),
            _ => 0,
        }
    }

    /// Word-like prefix test. Paths compare by start and step sequence.
    pub fn is_prefix_of(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Word(a), Term::Word(b)) => a.len() <= b.len() && b[..a.len()] == a[..],
            (Term::Pebbled(a), Term::Pebbled(b)) => a.len() <= b.len() && b[..a.len()] == a[..],
            (Term::Path(s, a), Term::Path(t, b)) => s == t && a.len() <= b.len() && b[..a.len()] == a[..],
            _ => false,
        }
    }

    /// The letters (elements of the underlying structure) of a word-like term.
    /// For a walk these are all vertices of the closed walk.
    pub fn letters(&self) -> Vec<&Term> {
        match self {
            Term::Word(w) => w.iter().collect(),
            Term::Pebbled(w) => w.iter().map(|(_, t)| t).collect(),
            Term::Path(s, steps) => std::iter::once(&**s).chain(steps.iter().map(|(_, t)| t)).collect(),
            Term::Walk(w, _) => w.iter().collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(i) => write!(f, "{i}"),
            Term::Inj(tag, t) => write!(f, "({}, {t})", tag + 1),
            Term::Tuple(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Term::Star => write!(f, "*"),
            Term::Word(w) => {
                write!(f, "[")?;
                for (i, t) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "]")
            }
            Term::Pebbled(w) => {
                write!(f, "[")?;
                for (i, (p, t)) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({p}, {t})")?;
                }
                write!(f, "]")
            }
            Term::Path(s, steps) => {
                write!(f, "{s}")?;
                for (r, t) in steps {
                    write!(f, " -{r}-> {t}")?;
                }
                Ok(())
            }
            Term::Walk(w, i) => {
                write!(f, "<")?;
                for (j, t) in w.iter().enumerate() {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "; {i}>")
            }
        }
    }
}
