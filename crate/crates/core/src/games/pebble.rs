//! Existential and two-way k-pebble games, solved as greatest fixpoints over
//! the finite space of pebble placements.
//!
//! A position assigns each pebble index either nothing or a pair `(a, b)`.
//! It is encoded as `Σ slot_p · base^p` with `base = |A|·|B| + 1`, slot `0`
//! meaning "not placed" and slot `1 + a·|B| + b` the pair `(a, b)`.

use crate::error::{Error, Result};

use super::atoms::{agree, Dense};
use super::matching::has_perfect_matching;
use super::Rule;

/// Largest position space explored.
pub const MAX_POSITIONS: usize = 4_000_000;

pub(crate) struct PebbleGame<'d> {
    da: &'d Dense,
    db: &'d Dense,
    k: usize,
    rule: Rule,
    base: usize,
    pow: Vec<usize>,
    pub win: Vec<bool>,
}

impl<'d> PebbleGame<'d> {
    pub fn new(da: &'d Dense, db: &'d Dense, k: usize, rule: Rule) -> Result<Self> {
        if rule == Rule::Bijective && (da.n > 64 || db.n > 64) {
            return Err(Error::GuardExceeded {
                what: "bijective pebble game universe".into(),
                size: da.n.max(db.n),
                limit: 64,
            });
        }
        let base = da.n * db.n + 1;
        let total = base
            .checked_pow(k as u32)
            .filter(|&t| t <= MAX_POSITIONS)
            .ok_or_else(|| Error::GuardExceeded {
                what: "pebble game positions".into(),
                size: base.saturating_pow(k as u32),
                limit: MAX_POSITIONS,
            })?;
        let pow = (0..k).map(|p| base.pow(p as u32)).collect();
        let mut game = PebbleGame {
            da,
            db,
            k,
            rule,
            base,
            pow,
            win: Vec::new(),
        };
        game.win = (0..total)
            .map(|code| agree(da, db, &game.pairs(code), None, rule.both()))
            .collect();
        game.solve();
        Ok(game)
    }

    pub fn slot(&self, code: usize, p: usize) -> Option<(u32, u32)> {
        let s = code / self.pow[p] % self.base;
        (s > 0).then(|| (((s - 1) / self.db.n) as u32, ((s - 1) % self.db.n) as u32))
    }

    fn pairs(&self, code: usize) -> Vec<(u32, u32)> {
        (0..self.k).filter_map(|p| self.slot(code, p)).collect()
    }

    pub fn encode(&self, slots: &[Option<(u32, u32)>]) -> usize {
        slots
            .iter()
            .zip(&self.pow)
            .map(|(s, w)| s.map_or(0, |(a, b)| 1 + a as usize * self.db.n + b as usize) * w)
            .sum()
    }

    pub fn decode(&self, code: usize) -> Vec<Option<(u32, u32)>> {
        (0..self.k).map(|p| self.slot(code, p)).collect()
    }

    /// Whether Duplicator can answer every Spoiler move from `code` inside
    /// `win`.
    fn survives(&self, code: usize, win: &[bool]) -> bool {
        let (n, m) = (self.da.n, self.db.n);
        (0..self.k).all(|p| {
            let rest = code - code / self.pow[p] % self.base * self.pow[p];
            let moved = |a: usize, b: usize| win[rest + (1 + a * m + b) * self.pow[p]];
            match self.rule {
                Rule::Forth | Rule::Exist => (0..n).all(|a| (0..m).any(|b| moved(a, b))),
                Rule::BackForth => {
                    (0..n).all(|a| (0..m).any(|b| moved(a, b))) && (0..m).all(|b| (0..n).any(|a| moved(a, b)))
                }
                Rule::Bijective => {
                    let adj: Vec<u64> = (0..n)
                        .map(|a| (0..m).filter(|&b| moved(a, b)).fold(0u64, |acc, b| acc | 1 << b))
                        .collect();
                    has_perfect_matching(&adj, m)
                }
            }
        })
    }

    fn solve(&mut self) {
        let mut win = std::mem::take(&mut self.win);
        loop {
            let mut changed = false;
            for code in 0..win.len() {
                if win[code] && !self.survives(code, &win) {
                    win[code] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.win = win;
    }

    /// The starting position: no pebbles, or pebble 0 on the two points.
    pub fn start(&self, points: Option<(u32, u32)>) -> usize {
        let mut slots = vec![None; self.k];
        if let Some(pair) = points {
            slots[0] = Some(pair);
        }
        self.encode(&slots)
    }

    pub fn winning_positions(&self) -> Vec<Vec<Option<(u32, u32)>>> {
        (0..self.win.len())
            .filter(|&c| self.win[c])
            .map(|c| self.decode(c))
            .collect()
    }

    /// Whether `set` (decoded positions) contains the start and is closed
    /// under the game rule with atomically safe positions.
    pub fn replay(
        da: &Dense,
        db: &Dense,
        k: usize,
        rule: Rule,
        points: Option<(u32, u32)>,
        set: &[Vec<Option<(u32, u32)>>],
    ) -> Result<bool> {
        // An empty game (the fixpoint is not run on the candidate set).
        let mut shell = PebbleGame {
            da,
            db,
            k,
            rule,
            base: da.n * db.n + 1,
            pow: (0..k).map(|p| (da.n * db.n + 1).pow(p as u32)).collect(),
            win: Vec::new(),
        };
        let total = shell.base.pow(k as u32);
        let mut member = vec![false; total];
        for slots in set {
            if slots.len() != k
                || slots
                    .iter()
                    .flatten()
                    .any(|&(a, b)| a as usize >= da.n || b as usize >= db.n)
            {
                return Ok(false);
            }
            let code = shell.encode(slots);
            if !agree(da, db, &shell.pairs(code), None, rule.both()) {
                return Ok(false);
            }
            member[code] = true;
        }
        let start = shell.start(points);
        shell.win = member;
        Ok(shell.win[start] && (0..total).all(|c| !shell.win[c] || shell.survives(c, &shell.win)))
    }
}
