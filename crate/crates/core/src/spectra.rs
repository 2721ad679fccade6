//! Exact characteristic polynomials of graph adjacency matrices, and
//! cospectrality.
//!
//! Two integer matrices have the same eigenvalues with multiplicities iff
//! their characteristic polynomials agree, so cospectrality is decided on
//! exact integer coefficients without any numerical tolerance.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::structures::{canonical_code, Signature, Structure};

/// The characteristic polynomial `det(xI - A)`, degree-descending: the
/// leading coefficient 1 comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    pub coefficients: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// The product of two polynomials.
    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CharPoly { coefficients: out }
    }
}

impl Serialize for CharPoly {
    /// Serialised as a JSON array of integers (exact for every coefficient
    /// that fits in 64 bits; larger ones are written as strings).
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coefficients.len()))?;
        for c in &self.coefficients {
            match i64::try_from(c) {
                Ok(v) => seq.serialize_element(&v)?,
                Err(_) => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = n - i;
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            if !abs.is_one() || power == 0 {
                write!(f, "{abs}")?;
            }
            match power {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{power}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The 0/1 adjacency matrix of a loopless undirected graph: the signature
/// must consist of one binary relation, symmetric and irreflexive.
pub fn adjacency(g: &Structure) -> Result<Vec<Vec<i64>>> {
    let sig = g.signature();
    if sig.len() != 1 || sig.arity(0) != 2 {
        return Err(Error::InvalidInput("spectra need a graph: one binary relation".into()));
    }
    let n = g.size();
    let mut a = vec![vec![0i64; n]; n];
    for t in g.tuples(0) {
        let (x, y) = (t[0], t[1]);
        if x == y {
            return Err(Error::InvalidInput(format!("the graph has a loop at {x}")));
        }
        if !g.holds(0, &[y, x]) {
            return Err(Error::InvalidInput(format!("the edge ({x}, {y}) is not symmetric")));
        }
        a[x as usize][y as usize] = 1;
    }
    Ok(a)
}

/// The characteristic polynomial via the Faddeev–LeVerrier recurrence
/// `M₀ = 0`, `Mₖ = A·Mₖ₋₁ + cₙ₋ₖ₊₁·I`, `cₙ₋ₖ = -tr(A·Mₖ)/k`, in exact
/// integer arithmetic (each division is exact).
pub fn char_poly(g: &Structure) -> Result<CharPoly> {
    let a = adjacency(g)?;
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut coefficients = vec![BigInt::one()];
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let prev = coefficients.last().expect("non-empty").clone();
        let mut next = mat_mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &prev;
        }
        m = next;
        let am = mat_mul(&a, &m);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let k = BigInt::from(k);
        assert!((&trace % &k).is_zero(), "Faddeev–LeVerrier division must be exact");
        coefficients.push(-(trace / k));
    }
    Ok(CharPoly { coefficients })
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Whether two graphs have equal characteristic polynomials.
pub fn cospectral(g: &Structure, h: &Structure) -> Result<bool> {
    Ok(char_poly(g)? == char_poly(h)?)
}

/// Standard graphs over the signature `{E: 2}`.
pub mod graphs {
    use super::*;

    fn build(n: usize, mut adjacent: impl FnMut(u32, u32) -> bool) -> Structure {
        let mut edges = Vec::new();
        for x in 0..n as u32 {
            for y in x + 1..n as u32 {
                if adjacent(x, y) {
                    edges.push((x, y));
                }
            }
        }
        Structure::graph(n, &edges).expect("valid edges")
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Structure {
        build(n, |_, _| false)
    }

    pub fn complete(n: usize) -> Structure {
        build(n, |_, _| true)
    }

    pub fn cycle(n: usize) -> Structure {
        build(n, |x, y| y == x + 1 || (x == 0 && y as usize == n - 1 && n > 2))
    }

    pub fn path(n: usize) -> Structure {
        build(n, |x, y| y == x + 1)
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Structure {
        build(leaves + 1, |x, _| x == 0)
    }

    /// The `n × n` rook's graph: cells sharing a row or a column.
    pub fn rook(n: usize) -> Structure {
        let n32 = n as u32;
        build(n * n, |x, y| x / n32 == y / n32 || x % n32 == y % n32)
    }

    /// The Shrikhande graph: `Z₄ × Z₄`, adjacent when the difference is
    /// `±(1,0)`, `±(0,1)` or `±(1,1)`.
    pub fn shrikhande() -> Structure {
        build(16, |x, y| {
            let d = ((y / 4 + 4 - x / 4) % 4, (y % 4 + 4 - x % 4) % 4);
            matches!(d, (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3))
        })
    }

    /// One representative per isomorphism class of simple graphs on `n`
    /// vertices, in order of their canonical codes.
    pub fn simple_graphs(n: usize) -> Vec<Structure> {
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|x| (x + 1..n as u32).map(move |y| (x, y)))
            .collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Structure::graph(n, &edges).expect("valid edges");
            let code = canonical_code(&g);
            if seen.insert(code.clone()) {
                out.push((code, g));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out.into_iter().map(|(_, g)| g).collect()
    }

    /// The signature of the graphs built here.
    pub fn signature() -> Signature {
        Signature::graph()
    }
}
