//! Exhaustive optimum for tiny instances.
//!
//! Slots are filled one at a time; inside a slot the lowest free team picks
//! an opponent and a venue. Branches that repeat a game, create a repeater
//! or a third consecutive home or away game are cut. On metric instances a
//! per-team lower bound on the remaining travel prunes further.

use thiserror::Error;

use crate::instance::{Instance, Length};
use crate::schedule::{Game, Schedule, Venue};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search supports n = 4 (n = 6 when enabled), got {0}")]
    SizeTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Optimal schedule, `None` when no feasible schedule exists.
    pub schedule: Option<Schedule>,
    pub value: Option<Length>,
    /// Search nodes visited.
    pub nodes: u64,
}

pub fn brute_force_optimal(inst: &Instance, allow_n6: bool) -> Result<OracleResult, OracleError> {
    let n = inst.n();
    if !(n == 4 || (n == 6 && allow_n6)) {
        return Err(OracleError::SizeTooLarge(n));
    }
    let slots = 2 * (n - 1);
    let mut s = Search {
        inst,
        n,
        slots,
        prune: inst.is_metric(),
        played: vec![false; n * n],
        loc: (0..n).collect(),
        last_opp: vec![usize::MAX; n],
        run: vec![(Venue::Home, 0); n],
        cur: vec![vec![None; n]; slots],
        best: None,
        best_value: Length::MAX,
        nodes: 0,
    };
    s.slot(0, 0);
    let schedule = s.best.map(|rows| {
        let by_team: Vec<Vec<Game>> = (0..n)
            .map(|t| rows.iter().map(|slot| slot[t].unwrap()).collect())
            .collect();
        Schedule::from_rows(by_team).expect("search emits well-formed rows")
    });
    Ok(OracleResult {
        value: schedule.as_ref().map(|_| s.best_value),
        schedule,
        nodes: s.nodes,
    })
}

struct Search<'a> {
    inst: &'a Instance,
    n: usize,
    slots: usize,
    prune: bool,
    /// `played[h * n + a]`: `h` already hosted `a`.
    played: Vec<bool>,
    loc: Vec<usize>,
    last_opp: Vec<usize>,
    run: Vec<(Venue, usize)>,
    cur: Vec<Vec<Option<Game>>>,
    best: Option<Vec<Vec<Option<Game>>>>,
    best_value: Length,
    nodes: u64,
}

impl Search<'_> {
    fn slot(&mut self, slot: usize, cost: Length) {
        self.nodes += 1;
        if slot == self.slots {
            let total = cost + (0..self.n).map(|t| self.inst.d(self.loc[t], t)).sum::<Length>();
            if total < self.best_value {
                self.best_value = total;
                self.best = Some(self.cur.clone());
            }
            return;
        }
        if self.prune && cost + self.remaining_bound() >= self.best_value {
            return;
        }
        self.team(slot, cost);
    }

    fn remaining_bound(&self) -> Length {
        let mut lb = 0;
        for t in 0..self.n {
            let mut best = self.inst.d(self.loc[t], t);
            for j in 0..self.n {
                if j != t && !self.played[j * self.n + t] {
                    best = best.max(self.inst.d(self.loc[t], j) + self.inst.d(j, t));
                }
            }
            lb += best;
        }
        lb
    }

    fn team(&mut self, slot: usize, cost: Length) {
        let Some(t) = (0..self.n).find(|&t| self.cur[slot][t].is_none()) else {
            self.slot(slot + 1, cost);
            return;
        };
        for u in t + 1..self.n {
            if self.cur[slot][u].is_some() || self.last_opp[t] == u {
                continue;
            }
            for (home, away) in [(t, u), (u, t)] {
                if self.played[home * self.n + away]
                    || !self.run_ok(home, Venue::Home)
                    || !self.run_ok(away, Venue::Away)
                {
                    continue;
                }
                let step = self.inst.d(self.loc[home], home) + self.inst.d(self.loc[away], home);
                let saved = (self.loc[home], self.loc[away], self.run[home], self.run[away]);
                let (lh, la) = (self.last_opp[home], self.last_opp[away]);
                self.played[home * self.n + away] = true;
                self.cur[slot][home] = Some(Game::home(away));
                self.cur[slot][away] = Some(Game::away(home));
                self.loc[home] = home;
                self.loc[away] = home;
                self.last_opp[home] = away;
                self.last_opp[away] = home;
                self.run[home] = bump(self.run[home], Venue::Home);
                self.run[away] = bump(self.run[away], Venue::Away);

                self.team(slot, cost + step);

                self.played[home * self.n + away] = false;
                self.cur[slot][home] = None;
                self.cur[slot][away] = None;
                (self.loc[home], self.loc[away], self.run[home], self.run[away]) = saved;
                self.last_opp[home] = lh;
                self.last_opp[away] = la;
            }
        }
    }

    fn run_ok(&self, t: usize, v: Venue) -> bool {
        let (rv, len) = self.run[t];
        !(rv == v && len >= 2)
    }
}

fn bump((rv, len): (Venue, usize), v: Venue) -> (Venue, usize) {
    if rv == v && len > 0 {
        (v, len + 1)
    } else {
        (v, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{total_distance, validate_all};

    const SMALL: &str = "4\n0 1 2 3\n1 0 2 3\n2 2 0 3\n3 3 3 0";

    #[test]
    fn small_optimum_is_feasible_and_above_tree_bound() {
        let inst = Instance::parse(SMALL).unwrap();
        let r = brute_force_optimal(&inst, false).unwrap();
        let s = r.schedule.expect("four teams admit a schedule");
        assert!(validate_all(&s, 2).is_empty());
        assert_eq!(Some(total_distance(&s, &inst)), r.value);
        assert!(r.value.unwrap() >= 40);
    }

    #[test]
    fn zero_metric_has_value_zero() {
        let inst = Instance::from_matrix(&vec![vec![0; 4]; 4]).unwrap();
        assert_eq!(brute_force_optimal(&inst, false).unwrap().value, Some(0));
    }

    #[test]
    fn refuses_larger_sizes() {
        let inst = crate::generate::unit_metric(6);
        assert_eq!(brute_force_optimal(&inst, false), Err(OracleError::SizeTooLarge(6)));
        let inst = crate::generate::unit_metric(8);
        assert_eq!(brute_force_optimal(&inst, true), Err(OracleError::SizeTooLarge(8)));
    }
}
