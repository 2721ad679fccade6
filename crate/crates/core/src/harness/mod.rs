//! Composition-theorem sweeps: for an operation `H`, sample operand pairs
//! that are equivalent in some fragment and check that the composites are
//! equivalent too; search exhaustively for counterexamples where the
//! property is expected to fail; and repeat the checks through signature
//! translations.

mod registry;
mod run;
mod sample;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::comonads::Kind;
use crate::error::{Error, Result};
use crate::games::Fragment;
use crate::structures::{
    disjoint_union, merge, pointed_coproduct, product, reduct, translate_connectivity, translate_equality,
    translate_global, translate_weak, vee, Signature, SilentMode, Structure,
};

pub use registry::{case, find_case, registry};
pub use run::{replay_violation, run_fvm, run_translated_fvm, search_counterexample, Report, Status, Violation};

/// The operation `H` of a case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FvmOp {
    DisjointUnion,
    PointedCoproduct,
    Product,
    Merge,
    Vee,
    Reduct,
}

impl FvmOp {
    pub const ALL: [FvmOp; 6] = [
        FvmOp::DisjointUnion,
        FvmOp::PointedCoproduct,
        FvmOp::Product,
        FvmOp::Merge,
        FvmOp::Vee,
        FvmOp::Reduct,
    ];

    pub fn arity(self) -> usize {
        if self == FvmOp::Reduct {
            1
        } else {
            2
        }
    }
}

impl fmt::Display for FvmOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FvmOp::DisjointUnion => "disjoint-union",
            FvmOp::PointedCoproduct => "pointed-coproduct",
            FvmOp::Product => "product",
            FvmOp::Merge => "merge",
            FvmOp::Vee => "vee",
            FvmOp::Reduct => "reduct",
        })
    }
}

impl FromStr for FvmOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        FvmOp::ALL
            .into_iter()
            .find(|op| op.to_string() == norm)
            .ok_or_else(|| Error::InvalidInput(format!("unknown operation `{s}`")))
    }
}

/// A signature translation applied to operands and composites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Translation {
    Equality,
    Connectivity,
    Global,
    Weak,
}

impl Translation {
    pub const ALL: [Translation; 4] = [
        Translation::Equality,
        Translation::Connectivity,
        Translation::Global,
        Translation::Weak,
    ];
}

impl fmt::Display for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Translation::Equality => "equality",
            Translation::Connectivity => "connectivity",
            Translation::Global => "global",
            Translation::Weak => "weak",
        })
    }
}

impl FromStr for Translation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Translation::ALL
            .into_iter()
            .find(|t| t.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidInput(format!("unknown translation `{s}`")))
    }
}

/// Whether a case must hold or is expected to have counterexamples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Theorem,
    Counterexample,
}

/// A composition property: if `Aᵢ` relates to `Bᵢ` in `fragment` at resource
/// `k_in` for every operand, then `H(A⃗)` relates to `H(B⃗)` at `k_out`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FvmCase {
    pub name: String,
    pub description: String,
    pub op: FvmOp,
    pub kind: Kind,
    pub fragment: Fragment,
    pub k_in: usize,
    pub k_out: usize,
    pub translation: Option<Translation>,
    pub expectation: Expectation,
    /// Operand signature as `(name, arity)` pairs.
    pub signature: Vec<(String, usize)>,
    /// The merge relation, or the silent relation of the weak translation.
    pub relation: Option<String>,
    /// Target signature of a reduct.
    pub reduct_to: Option<Vec<(String, usize)>>,
    pub max_size: usize,
    /// Premise-satisfying samples wanted.
    pub samples: usize,
    /// Attempts allowed per wanted sample before the run is inconclusive.
    pub attempts_per_sample: usize,
    pub seed: u64,
}

impl FvmCase {
    /// Operands are pointed for the pointed operations and for the modal
    /// comonad.
    pub fn pointed(&self) -> bool {
        matches!(self.op, FvmOp::PointedCoproduct | FvmOp::Merge | FvmOp::Vee) || self.kind == Kind::Modal
    }

    pub fn operand_signature(&self) -> Result<Signature> {
        Signature::new(self.signature.iter().map(|(n, a)| (n.as_str(), *a)))
    }

    /// Sets the resource, keeping the registered bump `k_out - k_in`.
    pub fn with_k(mut self, k: usize) -> Self {
        let bump = self.k_out - self.k_in;
        self.k_in = k;
        self.k_out = k + bump;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_max_size(mut self, max_size: usize) -> Self {
        self.max_size = max_size;
        self
    }

    pub fn with_expectation(mut self, expectation: Expectation) -> Self {
        self.expectation = expectation;
        self
    }

    fn relation(&self) -> Result<&str> {
        self.relation
            .as_deref()
            .ok_or_else(|| Error::InvalidInput(format!("case {} needs a relation", self.name)))
    }

    /// `H(operands)`.
    pub fn compose(&self, operands: &[&Structure]) -> Result<Structure> {
        if operands.len() != self.op.arity() {
            return Err(Error::InvalidInput(format!(
                "{} takes {} operands, got {}",
                self.op,
                self.op.arity(),
                operands.len()
            )));
        }
        match self.op {
            FvmOp::DisjointUnion => disjoint_union(operands[0], operands[1]),
            FvmOp::PointedCoproduct => pointed_coproduct(operands[0], operands[1]),
            FvmOp::Product => product(&[operands[0].clone(), operands[1].clone()]),
            FvmOp::Merge => merge(operands[0], operands[1], self.relation()?),
            FvmOp::Vee => vee(operands[0], operands[1]),
            FvmOp::Reduct => {
                let tau = self
                    .reduct_to
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("a reduct needs a target signature".into()))?;
                reduct(operands[0], &Signature::new(tau.iter().map(|(n, a)| (n.as_str(), *a)))?)
            }
        }
    }

    /// The translation of the case applied to `s` (identity without one).
    pub fn translate(&self, s: &Structure) -> Result<Structure> {
        match self.translation {
            None => Ok(s.clone()),
            Some(Translation::Equality) => translate_equality(s),
            Some(Translation::Connectivity) => translate_connectivity(s),
            Some(Translation::Global) => translate_global(s),
            Some(Translation::Weak) => translate_weak(s, self.relation()?, SilentMode::Erase),
        }
    }

    /// The operation on translated operands that the translation turns `H`
    /// into: `vee` for the weak translation of a merge, `H` otherwise.
    pub fn translated_compose(&self, operands: &[&Structure]) -> Result<Structure> {
        match (self.translation, self.op) {
            (Some(Translation::Weak), FvmOp::Merge) => vee(operands[0], operands[1]),
            _ => self.compose(operands),
        }
    }
}
