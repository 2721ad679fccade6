//! Dense relation tables and atomic agreement of positions.

use crate::structures::Structure;

/// Relation membership as flat boolean tables indexed by tuple codes.
pub(crate) struct Dense {
    pub n: usize,
    tables: Vec<(usize, Vec<bool>)>,
}

/// Largest table built (entries per relation).
const MAX_TABLE: usize = 1 << 24;

impl Dense {
    pub fn new(s: &Structure) -> Self {
        let n = s.size();
        let sig = s.signature();
        let tables = (0..sig.len())
            .map(|r| {
                let ar = sig.arity(r);
                let len = n
                    .checked_pow(ar as u32)
                    .filter(|&l| l <= MAX_TABLE)
                    .unwrap_or_else(|| panic!("relation table of arity {ar} over {n} elements is too large"));
                let mut t = vec![false; len];
                for tuple in s.tuples(r) {
                    let code = tuple.iter().fold(0usize, |acc, &e| acc * n + e as usize);
                    t[code] = true;
                }
                (ar, t)
            })
            .collect();
        Dense { n, tables }
    }

    pub fn relations(&self) -> usize {
        self.tables.len()
    }

    pub fn arity(&self, r: usize) -> usize {
        self.tables[r].0
    }

    pub fn holds_code(&self, r: usize, code: usize) -> bool {
        self.tables[r].1[code]
    }

    pub fn holds(&self, r: usize, tuple: &[u32]) -> bool {
        let code = tuple.iter().fold(0usize, |acc, &e| acc * self.n + e as usize);
        self.tables[r].1[code]
    }
}

/// Whether atoms over a position transfer from `A` to `B` (`both = false`) or
/// agree in both directions (`both = true`). Only index tuples that mention
/// position `include` are checked when it is given (the earlier pairs are
/// assumed to have been checked already). Positions may repeat elements;
/// there is no equality.
pub(crate) fn agree(da: &Dense, db: &Dense, pairs: &[(u32, u32)], include: Option<usize>, both: bool) -> bool {
    let m = pairs.len();
    if m == 0 {
        return true;
    }
    let mut idx = Vec::new();
    for r in 0..da.relations() {
        let ar = da.arity(r);
        idx.clear();
        idx.resize(ar, 0usize);
        loop {
            if include.is_none_or(|j| idx.contains(&j)) {
                let mut ca = 0usize;
                let mut cb = 0usize;
                for &i in idx.iter() {
                    ca = ca * da.n + pairs[i].0 as usize;
                    cb = cb * db.n + pairs[i].1 as usize;
                }
                let ha = da.holds_code(r, ca);
                let hb = db.holds_code(r, cb);
                if (ha && !hb) || (both && hb && !ha) {
                    return false;
                }
            }
            // Odometer over index tuples.
            let mut p = ar;
            loop {
                if p == 0 {
                    break;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < m {
                    break;
                }
                idx[p] = 0;
                if p == 0 {
                    p = usize::MAX;
                    break;
                }
            }
            if p == usize::MAX || ar == 0 {
                break;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Signature;

    #[test]
    fn agreement_without_equality() {
        let lp = Structure::digraph(1, &[(0, 0)]).unwrap();
        let bare = Structure::new(Signature::graph(), 2);
        let (dl, db) = (Dense::new(&lp), Dense::new(&bare));
        assert!(!agree(&dl, &db, &[(0, 0)], None, false));
        assert!(agree(&db, &dl, &[(0, 0)], None, false));
        assert!(!agree(&db, &dl, &[(0, 0)], None, true));
        // Two pebbles on one element of A may sit on distinct elements of B.
        assert!(agree(&db, &db, &[(0, 0), (0, 1)], None, true));
        let edge = Structure::digraph(2, &[(0, 1)]).unwrap();
        let de = Dense::new(&edge);
        assert!(agree(&de, &de, &[(0, 0), (1, 1)], None, true));
        assert!(!agree(&de, &de, &[(0, 1), (1, 0)], None, true));
        assert!(!agree(&de, &de, &[(0, 1), (1, 0)], Some(0), true));
    }
}
