//! Schedules, feasibility checks and travel distance.
//!
//! A schedule holds, for every team and slot, the opponent and whether the
//! game is played at home or away. The three feasibility checks are
//! exhaustive: they collect every violation rather than stopping at the
//! first one.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::instance::{Instance, Length};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Venue {
    Home,
    Away,
}

impl Venue {
    pub fn flip(self) -> Venue {
        match self {
            Venue::Home => Venue::Away,
            Venue::Away => Venue::Home,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Venue::Home => 'H',
            Venue::Away => 'A',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Game {
    pub opponent: usize,
    pub venue: Venue,
}

impl Game {
    pub fn home(opponent: usize) -> Game {
        Game {
            opponent,
            venue: Venue::Home,
        }
    }

    pub fn away(opponent: usize) -> Game {
        Game {
            opponent,
            venue: Venue::Away,
        }
    }
}

impl fmt::Display for Game {
    /// Paper-table style with 1-based opponents, e.g. `3H`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.opponent + 1, self.venue.symbol())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("schedule has no rows")]
    Empty,
    #[error("row {row}: expected {expected} slots, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, slot {slot}: malformed entry `{token}`")]
    MalformedEntry {
        row: usize,
        slot: usize,
        token: String,
    },
    #[error("team {team}, slot {slot}: opponent {opponent} is out of range or the team itself")]
    BadOpponent {
        team: usize,
        slot: usize,
        opponent: usize,
    },
    #[error("slot {slot}: team {team} is already booked")]
    DoubleBooked { team: usize, slot: usize },
    #[error("team {team} has no game in slot {slot}")]
    Unfilled { team: usize, slot: usize },
}

/// A complete schedule: every team has a game in every slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    slots: usize,
    games: Vec<Game>,
}

impl Schedule {
    /// Builds a schedule from per-team rows. Only shape is checked here;
    /// home/away consistency is a validator concern.
    pub fn from_rows(rows: Vec<Vec<Game>>) -> Result<Self, ScheduleError> {
        let n = rows.len();
        if n == 0 {
            return Err(ScheduleError::Empty);
        }
        let slots = rows[0].len();
        let mut games = Vec::with_capacity(n * slots);
        for (team, row) in rows.into_iter().enumerate() {
            if row.len() != slots {
                return Err(ScheduleError::RowLength {
                    row: team + 1,
                    expected: slots,
                    found: row.len(),
                });
            }
            for (slot, g) in row.iter().enumerate() {
                if g.opponent >= n || g.opponent == team {
                    return Err(ScheduleError::BadOpponent {
                        team,
                        slot,
                        opponent: g.opponent,
                    });
                }
            }
            games.extend(row);
        }
        Ok(Schedule { n, slots, games })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    #[inline]
    pub fn game(&self, team: usize, slot: usize) -> Game {
        self.games[team * self.slots + slot]
    }

    pub fn row(&self, team: usize) -> &[Game] {
        &self.games[team * self.slots..(team + 1) * self.slots]
    }

    /// Renames teams: label `l` of `self` becomes team `team_of[l]`.
    pub fn relabel(&self, team_of: &[usize]) -> Schedule {
        let mut games = vec![Game::home(0); self.games.len()];
        for label in 0..self.n {
            let team = team_of[label];
            for slot in 0..self.slots {
                let g = self.game(label, slot);
                games[team * self.slots + slot] = Game {
                    opponent: team_of[g.opponent],
                    venue: g.venue,
                };
            }
        }
        Schedule {
            n: self.n,
            slots: self.slots,
            games,
        }
    }

    /// Parses one comma-separated row per team, entries like `3H` / `12A`
    /// with 1-based opponents.
    pub fn parse(text: &str) -> Result<Self, ScheduleError> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let row_no = rows.len() + 1;
            let row = line
                .split(',')
                .map(str::trim)
                .enumerate()
                .map(|(slot, tok)| parse_entry(tok).ok_or_else(|| ScheduleError::MalformedEntry {
                    row: row_no,
                    slot: slot + 1,
                    token: tok.to_string(),
                }))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for team in 0..self.n {
            let row: Vec<String> = self.row(team).iter().map(Game::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn parse_entry(tok: &str) -> Option<Game> {
    let venue = match tok.chars().last()? {
        'H' | 'h' => Venue::Home,
        'A' | 'a' => Venue::Away,
        _ => return None,
    };
    let opp: usize = tok[..tok.len() - 1].trim().parse().ok()?;
    if opp == 0 {
        return None;
    }
    Some(Game {
        opponent: opp - 1,
        venue,
    })
}

/// A schedule under construction; cells may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSchedule {
    n: usize,
    slots: usize,
    cells: Vec<Option<Game>>,
}

impl PartialSchedule {
    pub fn new(n: usize, slots: usize) -> Self {
        PartialSchedule {
            n,
            slots,
            cells: vec![None; n * slots],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn get(&self, team: usize, slot: usize) -> Option<Game> {
        self.cells[team * self.slots + slot]
    }

    /// Books `home` hosting `away` in `slot`.
    pub fn place(&mut self, slot: usize, home: usize, away: usize) -> Result<(), ScheduleError> {
        for t in [home, away] {
            if self.cells[t * self.slots + slot].is_some() {
                return Err(ScheduleError::DoubleBooked { team: t, slot });
            }
        }
        self.cells[home * self.slots + slot] = Some(Game::home(away));
        self.cells[away * self.slots + slot] = Some(Game::away(home));
        Ok(())
    }

    /// Copies every filled cell of `other` into `self`, shifting slots by
    /// `slot_offset` and teams through `team_map`.
    pub fn paste(
        &mut self,
        other: &PartialSchedule,
        slot_offset: usize,
        team_map: impl Fn(usize) -> usize,
    ) -> Result<(), ScheduleError> {
        for team in 0..other.n {
            for slot in 0..other.slots {
                if let Some(g) = other.get(team, slot) {
                    let (t, s) = (team_map(team), slot + slot_offset);
                    let cell = &mut self.cells[t * self.slots + s];
                    if cell.is_some() {
                        return Err(ScheduleError::DoubleBooked { team: t, slot: s });
                    }
                    *cell = Some(Game {
                        opponent: team_map(g.opponent),
                        venue: g.venue,
                    });
                }
            }
        }
        Ok(())
    }

    /// Venue string of one team over a slot range; `None` where unfilled.
    pub fn venues(&self, team: usize, range: Range<usize>) -> Vec<Option<Venue>> {
        range.map(|s| self.get(team, s).map(|g| g.venue)).collect()
    }

    pub fn into_schedule(self) -> Result<Schedule, ScheduleError> {
        let mut games = Vec::with_capacity(self.cells.len());
        for (idx, cell) in self.cells.into_iter().enumerate() {
            games.push(cell.ok_or(ScheduleError::Unfilled {
                team: idx / self.slots,
                slot: idx % self.slots,
            })?);
        }
        Ok(Schedule {
            n: self.n,
            slots: self.slots,
            games,
        })
    }
}

/// One feasibility defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The opponent's cell does not mirror this one.
    Inconsistent { team: usize, slot: usize },
    /// Team `home` never hosts `away`.
    MissingGame { home: usize, away: usize },
    /// Team `home` hosts `away` more than once.
    DuplicateGame { home: usize, away: usize, count: usize },
    /// Same opponent in `slot` and `slot + 1`.
    Repeater { team: usize, slot: usize },
    /// More than `k` consecutive games at the same venue.
    Streak {
        team: usize,
        start: usize,
        len: usize,
        venue: Venue,
    },
    /// A double round robin needs `2(n-1)` slots.
    SlotCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Inconsistent { team, slot } => {
                write!(f, "inconsistent: team {} slot {}", team + 1, slot + 1)
            }
            Violation::MissingGame { home, away } => {
                write!(f, "missing game: {} never hosts {}", home + 1, away + 1)
            }
            Violation::DuplicateGame { home, away, count } => write!(
                f,
                "duplicate game: {} hosts {} {count} times",
                home + 1,
                away + 1
            ),
            Violation::Repeater { team, slot } => write!(
                f,
                "repeater: team {} meets the same opponent in slots {} and {}",
                team + 1,
                slot + 1,
                slot + 2
            ),
            Violation::Streak {
                team,
                start,
                len,
                venue,
            } => write!(
                f,
                "streak: team {} plays {len} consecutive {} games from slot {}",
                team + 1,
                venue.symbol(),
                start + 1
            ),
            Violation::SlotCount { expected, found } => {
                write!(f, "slot count: expected {expected}, found {found}")
            }
        }
    }
}

/// Home/away duality: if `i` hosts `j` in a slot then `j` visits `i` there.
pub fn check_consistency(s: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    for team in 0..s.n() {
        for slot in 0..s.slots() {
            let g = s.game(team, slot);
            let back = s.game(g.opponent, slot);
            if back.opponent != team || back.venue != g.venue.flip() {
                out.push(Violation::Inconsistent { team, slot });
            }
        }
    }
    out
}

/// Double round robin: every ordered pair meets exactly once with the first
/// team at home. Inconsistent cells are reported as well.
pub fn validate_drr(s: &Schedule) -> Vec<Violation> {
    let n = s.n();
    let mut out = Vec::new();
    if s.slots() != 2 * (n - 1) {
        out.push(Violation::SlotCount {
            expected: 2 * (n - 1),
            found: s.slots(),
        });
    }
    out.extend(check_consistency(s));
    let mut hosted = vec![0usize; n * n];
    for team in 0..n {
        for g in s.row(team) {
            if g.venue == Venue::Home {
                hosted[team * n + g.opponent] += 1;
            }
        }
    }
    for home in 0..n {
        for away in 0..n {
            if home == away {
                continue;
            }
            match hosted[home * n + away] {
                0 => out.push(Violation::MissingGame { home, away }),
                1 => {}
                count => out.push(Violation::DuplicateGame { home, away, count }),
            }
        }
    }
    out
}

/// No team meets the same opponent in two consecutive slots.
pub fn check_no_repeater(s: &Schedule) -> Vec<Violation> {
    let mut out = Vec::new();
    for team in 0..s.n() {
        let row = s.row(team);
        for slot in 0..row.len().saturating_sub(1) {
            if row[slot].opponent == row[slot + 1].opponent {
                out.push(Violation::Repeater { team, slot });
            }
        }
    }
    out
}

/// No team plays more than `k` consecutive home or away games.
pub fn check_at_most(s: &Schedule, k: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    for team in 0..s.n() {
        let venues: Vec<Venue> = s.row(team).iter().map(|g| g.venue).collect();
        for (start, len, venue) in runs(&venues) {
            if len > k {
                out.push(Violation::Streak {
                    team,
                    start,
                    len,
                    venue,
                });
            }
        }
    }
    out
}

/// Maximal runs `(start, len, venue)` of equal venues.
pub fn runs(venues: &[Venue]) -> Vec<(usize, usize, Venue)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=venues.len() {
        if i == venues.len() || venues[i] != venues[start] {
            if i > start {
                out.push((start, i - start, venues[start]));
            }
            start = i;
        }
    }
    out
}

/// All three checks plus consistency, with the at-most cap `k`.
pub fn validate_all(s: &Schedule, k: usize) -> Vec<Violation> {
    let mut out = validate_drr(s);
    out.extend(check_no_repeater(s));
    out.extend(check_at_most(s, k));
    out
}

/// The venues a team passes through, starting and ending at its own home,
/// with consecutive duplicates collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    pub venues: Vec<usize>,
    pub length: Length,
}

/// Itinerary of `team` over `slots`, starting and ending at its home.
/// Consecutive away games are always travelled venue to venue.
pub fn segment_itinerary(
    s: &Schedule,
    inst: &Instance,
    team: usize,
    slots: Range<usize>,
) -> Itinerary {
    let mut venues = vec![team];
    for slot in slots {
        let g = s.game(team, slot);
        let here = match g.venue {
            Venue::Home => team,
            Venue::Away => g.opponent,
        };
        if *venues.last().unwrap() != here {
            venues.push(here);
        }
    }
    if *venues.last().unwrap() != team {
        venues.push(team);
    }
    let length = venues.windows(2).map(|w| inst.d(w[0], w[1])).sum();
    Itinerary { venues, length }
}

pub fn team_itinerary(s: &Schedule, inst: &Instance, team: usize) -> Itinerary {
    segment_itinerary(s, inst, team, 0..s.slots())
}

pub fn team_distances(s: &Schedule, inst: &Instance) -> Vec<Length> {
    (0..s.n()).map(|t| team_itinerary(s, inst, t).length).collect()
}

pub fn total_distance(s: &Schedule, inst: &Instance) -> Length {
    team_distances(s, inst).iter().sum()
}
