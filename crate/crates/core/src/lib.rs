//! Game comonads over finite relational structures.
//!
//! The crate materialises the Ehrenfeucht–Fraïssé, pebbling, modal and
//! closed-walk comonads on small structures, decides the associated
//! model-comparison relations with game solvers, evaluates the Kleisli laws
//! behind composition theorems for structure operations, and checks those
//! theorems empirically.
//!
//! * [`structures`]: signatures, structures, operations and translations.
//! * [`comonads`]: comonads in Kleisli form with counit and coextension.
//! * [`games`]: deciders for the positive-existential, existential, counting
//!   and full fragments.
//! * [`kleisli`]: Kleisli laws and comonad morphisms.
//! * [`coalgebras`]: coalgebras, forest orders, paths, open maps and liftings.
//! * [`spectra`]: exact characteristic polynomials and cospectrality.
//! * [`harness`]: composition-theorem sweeps and counterexample search.

pub mod coalgebras;
pub mod comonads;
pub mod error;
pub mod games;
pub mod harness;
pub mod kleisli;
pub mod spectra;
pub mod structures;
pub mod term;

pub use error::{Error, Result};
pub use structures::{Signature, Structure, StructureMap};
pub use term::Term;
