//! The final fourteen slots.
//!
//! Teams split into `T1` (labels `0..n-8`) and `T2` (labels `n-8..n`), which
//! play separately. Each group gets a seven-slot single round robin over the
//! opponents it has not met yet, followed by its mirror with venues flipped.
//!
//! In `T1`, write `o_i = 2i` and `e_i = 2i + 1` for `i` in `Z_B`,
//! `B = n/2 - 4`. The missing opponents form seven edge classes: the rung
//! `o_i e_i`, the two rails `o_i o_{i+1}` and `e_i e_{i+1}`, and the
//! diagonals `o_i e_{i+1}`, `e_i o_{i+1}`, `o_i e_{i+2}`, `e_i o_{i+2}`.
//! The four diagonal classes each fill one slot with a uniform venue rule.
//! The remaining three slots cover the prism formed by rungs and rails; a
//! closed walk of length `B` over per-index states finds the colouring and
//! orientation.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::instance::{Instance, Length};
use crate::schedule::{runs, PartialSchedule, ScheduleError, Venue};

/// Slots in one half of the second phase.
pub const HALF: usize = 7;

/// Seven-slot round robin for the last eight labels, rows are local teams
/// `1..=8`, entries `(opponent, home)`.
const T2_GRID: [[(usize, bool); HALF]; 8] = {
    const fn h(o: usize) -> (usize, bool) {
        (o, true)
    }
    const fn a(o: usize) -> (usize, bool) {
        (o, false)
    }
    [
        [h(3), a(4), h(5), a(2), a(6), h(8), h(7)],
        [h(4), a(3), a(6), h(1), h(5), a(7), h(8)],
        [a(1), h(2), h(7), a(4), a(8), h(6), a(5)],
        [a(2), h(1), a(8), h(3), h(7), a(5), a(6)],
        [h(7), a(8), a(1), h(6), a(2), h(4), h(3)],
        [h(8), a(7), h(2), a(5), h(1), a(3), h(4)],
        [a(5), h(6), a(3), h(8), a(4), h(2), a(1)],
        [a(6), h(5), h(4), a(7), h(3), a(1), a(2)],
    ]
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Phase2Error {
    #[error("second phase needs n = 4m + 2 with n >= 30, got {0}")]
    UnsupportedSize(usize),
    #[error("no half-schedule for the first group was found")]
    SearchExhausted,
    #[error("mirror junction fails for team {team}: {reason}")]
    JunctionViolation { team: usize, reason: &'static str },
    #[error("half-schedule breaks its postcondition for team {team}: {reason}")]
    HalfInvalid { team: usize, reason: &'static str },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

fn check_size(n: usize) -> Result<(), Phase2Error> {
    if n % 4 == 2 && n >= 30 {
        Ok(())
    } else {
        Err(Phase2Error::UnsupportedSize(n))
    }
}

/// Opponents each `T1` label has not met in the first phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainingOpponents {
    sets: Vec<BTreeSet<usize>>,
}

impl RemainingOpponents {
    pub fn of(&self, label: usize) -> &BTreeSet<usize> {
        &self.sets[label]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.sets
            .iter()
            .enumerate()
            .all(|(i, s)| s.iter().all(|&j| self.sets[j].contains(&i)))
    }

    /// Every unordered pair `{i, j}` with `j` in `R(i)`, as `(min, max)`.
    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i.min(j), i.max(j))))
            .collect()
    }
}

/// Remaining opponents of `T1`. In 1-based terms, team `2i - 1` misses
/// `2i-4, 2i-3, 2i-2, 2i, 2i+1, 2i+2, 2i+4` and team `2i` misses
/// `2i-5, 2i-3, 2i-2, 2i-1, 2i+1, 2i+2, 2i+3`, reduced into `1..=n-8`.
pub fn remaining_opponents(n: usize) -> Result<RemainingOpponents, Phase2Error> {
    check_size(n)?;
    let size = (n - 8) as i64;
    let wrap = |x: i64| ((x - 1).rem_euclid(size)) as usize;
    let sets = (1..=size)
        .map(|t| {
            let offsets: [i64; 7] = if t % 2 == 1 {
                [-3, -2, -1, 1, 2, 3, 5]
            } else {
                [-5, -3, -2, -1, 1, 2, 3]
            };
            offsets.iter().map(|d| wrap(t + d)).collect()
        })
        .collect();
    Ok(RemainingOpponents { sets })
}

type State = [u8; 6];
const CR: usize = 0;
const CO: usize = 1;
const CE: usize = 2;
const OR: usize = 3;
const OO: usize = 4;
const OE: usize = 5;

fn venue_ok(v: &[bool; HALF]) -> bool {
    v[0] != v[1] && v[5] != v[6] && (0..HALF - 2).all(|k| !(v[k] == v[k + 1] && v[k + 1] == v[k + 2]))
}

struct Frame {
    irregular: [usize; 3],
    base_o: [bool; HALF],
}

impl Frame {
    /// Checks vertices `o_i` and `e_i` given the states of indices `i-1`
    /// and `i`. Orientation bits mean the lower vertex hosts.
    fn compatible(&self, a: &State, b: &State) -> bool {
        let s = &self.irregular;
        let mut vo = self.base_o;
        let mut ve = self.base_o.map(|x| !x);
        let cols_o = [a[CO], b[CO], b[CR]];
        let cols_e = [a[CE], b[CE], b[CR]];
        if cols_o[0] == cols_o[1] || cols_o[0] == cols_o[2] || cols_o[1] == cols_o[2] {
            return false;
        }
        if cols_e[0] == cols_e[1] || cols_e[0] == cols_e[2] || cols_e[1] == cols_e[2] {
            return false;
        }
        vo[s[a[CO] as usize]] = a[OO] == 0;
        vo[s[b[CO] as usize]] = b[OO] == 1;
        vo[s[b[CR] as usize]] = b[OR] == 1;
        ve[s[a[CE] as usize]] = a[OE] == 0;
        ve[s[b[CE] as usize]] = b[OE] == 1;
        ve[s[b[CR] as usize]] = b[OR] == 0;
        venue_ok(&vo) && venue_ok(&ve)
    }
}

fn all_states() -> Vec<State> {
    let mut out = Vec::with_capacity(216);
    for cr in 0..3 {
        for co in 0..3 {
            for ce in 0..3 {
                for bits in 0..8u8 {
                    out.push([cr, co, ce, bits & 1, (bits >> 1) & 1, (bits >> 2) & 1]);
                }
            }
        }
    }
    out
}

/// Closed walk of exactly `len` steps through `adj`, if one exists.
fn closed_walk(adj: &[Vec<usize>], len: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    for start in 0..n {
        let mut parent: Vec<Vec<usize>> = Vec::with_capacity(len);
        let mut cur = vec![false; n];
        cur[start] = true;
        for _ in 0..len {
            let mut par = vec![usize::MAX; n];
            for u in (0..n).filter(|&u| cur[u]) {
                for &w in &adj[u] {
                    if par[w] == usize::MAX {
                        par[w] = u;
                    }
                }
            }
            cur = par.iter().map(|&p| p != usize::MAX).collect();
            parent.push(par);
        }
        if cur[start] {
            let mut walk = vec![start];
            let mut u = start;
            for par in parent.iter().rev().take(len - 1) {
                u = par[u];
                walk.push(u);
            }
            walk.reverse();
            walk.rotate_right(1);
            return Some(walk);
        }
    }
    None
}

/// Seven-slot half-schedule on the `n - 8` labels of `T1`.
pub fn build_t1(n: usize) -> Result<PartialSchedule, Phase2Error> {
    check_size(n)?;
    let b = n / 2 - 4;
    let states = all_states();
    for mask in 0u32..(1 << HALF) {
        if mask.count_ones() != 3 {
            continue;
        }
        let irr: Vec<usize> = (0..HALF).filter(|s| mask >> s & 1 == 1).collect();
        let reg: Vec<usize> = (0..HALF).filter(|s| mask >> s & 1 == 0).collect();
        for vbits in 0u32..16 {
            let mut base_o = [false; HALF];
            for (k, &s) in reg.iter().enumerate() {
                base_o[s] = vbits >> (3 - k) & 1 == 1;
            }
            let frame = Frame {
                irregular: [irr[0], irr[1], irr[2]],
                base_o,
            };
            let adj: Vec<Vec<usize>> = states
                .iter()
                .map(|a| {
                    (0..states.len())
                        .filter(|&j| frame.compatible(a, &states[j]))
                        .collect()
                })
                .collect();
            if let Some(walk) = closed_walk(&adj, b) {
                let path: Vec<State> = walk.iter().map(|&k| states[k]).collect();
                let half = assemble_t1(b, &reg, &base_o, &frame.irregular, &path)?;
                verify_half(&half, false)?;
                return Ok(half);
            }
        }
    }
    Err(Phase2Error::SearchExhausted)
}

fn assemble_t1(
    b: usize,
    reg: &[usize],
    base_o: &[bool; HALF],
    irr: &[usize; 3],
    path: &[State],
) -> Result<PartialSchedule, Phase2Error> {
    let o = |i: usize| 2 * (i % b);
    let e = |i: usize| 2 * (i % b) + 1;
    let mut half = PartialSchedule::new(2 * b, HALF);
    let classes: [fn(usize, &dyn Fn(usize) -> usize, &dyn Fn(usize) -> usize) -> (usize, usize); 4] = [
        |i, o, e| (o(i), e(i + 1)),
        |i, o, e| (o(i + 1), e(i)),
        |i, o, e| (o(i), e(i + 2)),
        |i, o, e| (o(i + 2), e(i)),
    ];
    for (&slot, class) in reg.iter().zip(classes) {
        for i in 0..b {
            let (odd, even) = class(i, &o, &e);
            if base_o[slot] {
                half.place(slot, odd, even)?;
            } else {
                half.place(slot, even, odd)?;
            }
        }
    }
    for (i, st) in path.iter().enumerate() {
        let host = |bit: u8, lo: usize, hi: usize| if bit == 1 { (lo, hi) } else { (hi, lo) };
        let (h, a) = host(st[OR], o(i), e(i));
        half.place(irr[st[CR] as usize], h, a)?;
        let (h, a) = host(st[OO], o(i), o(i + 1));
        half.place(irr[st[CO] as usize], h, a)?;
        let (h, a) = host(st[OE], e(i), e(i + 1));
        half.place(irr[st[CE] as usize], h, a)?;
    }
    Ok(half)
}

/// The embedded eight-team half-schedule for `T2`, local labels `0..8`.
pub fn build_t2() -> PartialSchedule {
    let mut half = PartialSchedule::new(8, HALF);
    for (team, row) in T2_GRID.iter().enumerate() {
        for (slot, &(opp, home)) in row.iter().enumerate() {
            if home {
                half.place(slot, team, opp - 1)
                    .expect("embedded grid is consistent");
            }
        }
    }
    half
}

fn venues_of(half: &PartialSchedule, team: usize) -> Result<[bool; HALF], Phase2Error> {
    let mut v = [false; HALF];
    for (slot, x) in v.iter_mut().enumerate() {
        let g = half.get(team, slot).ok_or(Phase2Error::HalfInvalid {
            team,
            reason: "unfilled slot",
        })?;
        *x = g.venue == Venue::Home;
    }
    Ok(v)
}

/// Postconditions of a half: full, each opponent at most once, no three
/// equal venues in a row, HA or AH in the first two slots. `T1` halves also
/// need HA or AH in the last two slots; `T2` halves need equal venues in the
/// first and last slot.
pub fn verify_half(half: &PartialSchedule, equal_ends: bool) -> Result<(), Phase2Error> {
    for team in 0..half.n() {
        let v = venues_of(half, team)?;
        let opps: BTreeSet<usize> = (0..HALF).map(|s| half.get(team, s).unwrap().opponent).collect();
        let fail = |reason| Err(Phase2Error::HalfInvalid { team, reason });
        if opps.len() != HALF {
            return fail("opponent repeated");
        }
        if (0..HALF - 2).any(|k| v[k] == v[k + 1] && v[k + 1] == v[k + 2]) {
            return fail("three equal venues in a row");
        }
        if v[0] == v[1] {
            return fail("first two slots not HA or AH");
        }
        if equal_ends && v[0] != v[HALF - 1] {
            return fail("first and last slots differ in venue");
        }
        if !equal_ends && v[HALF - 2] == v[HALF - 1] {
            return fail("last two slots not HA or AH");
        }
    }
    Ok(())
}

/// Appends the half with venues flipped. Fails if the junction between the
/// two copies creates a repeater or a run longer than two.
pub fn mirror_concat(half: &PartialSchedule) -> Result<PartialSchedule, Phase2Error> {
    let mut full = PartialSchedule::new(half.n(), 2 * HALF);
    full.paste(half, 0, |t| t)?;
    for team in 0..half.n() {
        for slot in 0..HALF {
            let g = half.get(team, slot).ok_or(Phase2Error::HalfInvalid {
                team,
                reason: "unfilled slot",
            })?;
            if g.venue == Venue::Home {
                full.place(HALF + slot, g.opponent, team)?;
            }
        }
    }
    for team in 0..half.n() {
        let first = half.get(team, 0).unwrap().opponent;
        let last = half.get(team, HALF - 1).unwrap().opponent;
        if first == last {
            return Err(Phase2Error::JunctionViolation {
                team,
                reason: "same opponent on both sides of the junction",
            });
        }
        let v: Vec<Venue> = full.venues(team, 0..2 * HALF).into_iter().flatten().collect();
        if runs(&v).iter().any(|&(_, len, _)| len > 2) {
            return Err(Phase2Error::JunctionViolation {
                team,
                reason: "more than two equal venues in a row",
            });
        }
    }
    Ok(full)
}

/// Both groups, mirrored, on all `n` labels over fourteen slots.
pub fn build_phase2(n: usize) -> Result<PartialSchedule, Phase2Error> {
    let t1 = mirror_concat(&build_t1(n)?)?;
    let t2 = mirror_concat(&build_t2())?;
    let mut out = PartialSchedule::new(n, 2 * HALF);
    out.paste(&t1, 0, |t| t)?;
    out.paste(&t2, 0, |t| t + n - 8)?;
    Ok(out)
}

/// Travel accounting for `T1` in the second phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T1Surplus {
    /// `sum_i sum_{j in R(i)} d(i, j)`: the surplus when every game is a
    /// separate out-and-back trip.
    pub surplus: Length,
    /// Phase-two travel of `T1` from isolated itineraries, minus one single
    /// trip per game.
    pub measured: Length,
    /// `d(M)` restricted to the pairs of `T1`.
    pub matching_t1: Length,
    /// Closed walk through the odd labels of `T1`.
    pub chained_evens: Length,
}

impl T1Surplus {
    /// `surplus <= 14 d(M_T1) + 16 * chained_evens`.
    pub fn within_pair_bound(&self) -> bool {
        self.measured <= self.surplus
            && self.surplus <= 14 * self.matching_t1 + 16 * self.chained_evens
    }
}

/// Measures `T1`'s second-phase travel on the labeled instance `inst`
/// (label `l` is team `l`) for a fourteen-slot phase-two table.
pub fn t1_surplus(inst: &Instance, phase2: &PartialSchedule) -> T1Surplus {
    let n = inst.n();
    let b = n / 2 - 4;
    let r = remaining_opponents(n).expect("size checked by caller");
    let mut surplus = 0;
    let mut measured = 0;
    for i in 0..2 * b {
        for &j in r.of(i) {
            surplus += inst.d(i, j);
        }
        let mut at = i;
        let mut travel = 0;
        for slot in 0..phase2.slots() {
            let g = phase2.get(i, slot).expect("phase two is complete");
            let here = if g.venue == Venue::Home { i } else { g.opponent };
            travel += inst.d(at, here);
            at = here;
        }
        travel += inst.d(at, i);
        let single: Length = r.of(i).iter().map(|&j| inst.d(i, j)).sum();
        measured += travel - single;
    }
    let matching_t1 = (0..b).map(|k| inst.d(2 * k, 2 * k + 1)).sum();
    let chained_evens = (0..b).map(|k| inst.d(2 * k + 1, 2 * ((k + 1) % b) + 1)).sum();
    T1Surplus {
        surplus,
        measured,
        matching_t1,
        chained_evens,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remaining_sets_match_listed_examples() {
        let r = remaining_opponents(30).unwrap();
        let one_based = |t: usize| -> Vec<usize> { r.of(t - 1).iter().map(|x| x + 1).collect() };
        assert_eq!(one_based(7), vec![4, 5, 6, 8, 9, 10, 12]);
        assert_eq!(one_based(8), vec![3, 5, 6, 7, 9, 10, 11]);
        assert_eq!(one_based(1), vec![2, 3, 4, 6, 20, 21, 22]);
        assert!(r.is_symmetric());
        assert_eq!(r.len(), 22);
    }

    #[test]
    fn t1_half_for_several_sizes() {
        for n in [30, 34, 38, 42, 46, 62] {
            let half = build_t1(n).unwrap();
            verify_half(&half, false).unwrap();
            let r = remaining_opponents(n).unwrap();
            for t in 0..n - 8 {
                let opps: BTreeSet<usize> = (0..HALF).map(|s| half.get(t, s).unwrap().opponent).collect();
                assert_eq!(&opps, r.of(t), "n {n} team {t}");
            }
            let full = mirror_concat(&half).unwrap();
            assert!(full.into_schedule().is_ok());
        }
    }

    #[test]
    fn t2_rows_and_mirror() {
        let half = build_t2();
        let row = |t: usize| -> String {
            (0..HALF)
                .map(|s| half.get(t - 1, s).unwrap().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        assert_eq!(row(1), "3H 4A 5H 2A 6A 8H 7H");
        assert_eq!(row(5), "7H 8A 1A 6H 2A 4H 3H");
        verify_half(&half, true).unwrap();
        let full = mirror_concat(&half).unwrap();
        let tail: Vec<String> = (HALF..2 * HALF).map(|s| full.get(0, s).unwrap().to_string()).collect();
        assert_eq!(tail.join(" "), "3A 4H 5A 2H 6H 8A 7A");
    }

    #[test]
    fn junction_repeater_is_rejected() {
        // Two teams meeting in the first and last slot of the half.
        let mut half = PartialSchedule::new(2, HALF);
        for s in 0..HALF {
            if s % 2 == 0 {
                half.place(s, 0, 1).unwrap();
            } else {
                half.place(s, 1, 0).unwrap();
            }
        }
        assert!(matches!(
            mirror_concat(&half),
            Err(Phase2Error::JunctionViolation { .. })
        ));
    }

    #[test]
    fn hh_start_is_rejected() {
        let mut half = build_t2();
        let mut bad = PartialSchedule::new(8, HALF);
        // Swap venues of team 1's second game to create HH in slots 1-2.
        for t in 0..8 {
            for s in 0..HALF {
                let g = half.get(t, s).unwrap();
                if g.venue == Venue::Home {
                    if s == 1 && (t == 3 || t == 0) {
                        bad.place(s, g.opponent, t).unwrap();
                    } else {
                        bad.place(s, t, g.opponent).unwrap();
                    }
                }
            }
        }
        half = bad;
        assert!(matches!(
            verify_half(&half, true),
            Err(Phase2Error::HalfInvalid { .. })
        ));
    }

    #[test]
    fn sizes_outside_the_family_are_refused() {
        assert_eq!(build_t1(32), Err(Phase2Error::UnsupportedSize(32)));
        assert_eq!(remaining_opponents(26), Err(Phase2Error::UnsupportedSize(26)));
    }
}
