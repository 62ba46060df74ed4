//! The first `2n - 16` slots: `n/2 - 4` blocks of four slots.
//!
//! Every matching pair sits on one vertex. The `B = n/2 - 4` black pairs
//! occupy positions `0..B` of a cycle and advance one position per block;
//! the four gray pairs `B..B + 4` stay put. With `h = (B - 1) / 2` the arcs
//! of a block are:
//!
//! * position `0` against gray pair `B + 2`;
//! * positions `B - 1` (upper) and `1` (lower) through gray pair `B + 3` as
//!   the intermediate vertex;
//! * chords `B - p` (upper) and `p` (lower) for `p` in `2..h`;
//! * position `h` against gray pair `B + 1`, the gray pair upper;
//! * position `h + 1` against gray pair `B`.
//!
//! Outside the last block positions `1..h` play AAHH, `h` AHHA,
//! `h + 1..B` HHAA and `0` HAAH. In the last block every vertex plays HAAH or
//! AHHA so that the phase ends with HA or AH for every team.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{Instance, Length};
use crate::phase2::remaining_opponents;
use crate::schedule::{runs, PartialSchedule, ScheduleError, Venue};

pub const BLOCK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    /// Upper vertex HHAA, lower AAHH.
    Hhaa,
    /// Upper vertex HAAH, lower AHHA.
    Haah,
    /// Intermediate vertex between upper HHAA and lower AAHH.
    Intermediate,
    /// Intermediate vertex in the last block, upper HAAH and lower AHHA.
    IntermediateLast,
}

impl ArcKind {
    pub fn roles(self) -> usize {
        match self {
            ArcKind::Hhaa | ArcKind::Haah => 4,
            ArcKind::Intermediate | ArcKind::IntermediateLast => 6,
        }
    }

    /// Game grid: row per role (`1, 2, 3, 4, x, y` as `0..6`), entry per slot.
    pub fn grid(self) -> &'static [[(usize, Venue); BLOCK]] {
        match self {
            ArcKind::Hhaa => &HHAA,
            ArcKind::Haah => &HAAH,
            ArcKind::Intermediate => &INTERMEDIATE,
            ArcKind::IntermediateLast => &INTERMEDIATE_LAST,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArcKind::Hhaa => "HHAA",
            ArcKind::Haah => "HAAH",
            ArcKind::Intermediate => "INTERMEDIATE",
            ArcKind::IntermediateLast => "INTERMEDIATE_LAST",
        }
    }
}

const H: Venue = Venue::Home;
const A: Venue = Venue::Away;
const X: usize = 4;
const Y: usize = 5;

const HHAA: [[(usize, Venue); BLOCK]; 4] = [
    [(2, H), (3, H), (2, A), (3, A)],
    [(3, H), (2, H), (3, A), (2, A)],
    [(0, A), (1, A), (0, H), (1, H)],
    [(1, A), (0, A), (1, H), (0, H)],
];

const HAAH: [[(usize, Venue); BLOCK]; 4] = [
    [(2, H), (3, A), (2, A), (3, H)],
    [(3, H), (2, A), (3, A), (2, H)],
    [(0, A), (1, H), (0, H), (1, A)],
    [(1, A), (0, H), (1, H), (0, A)],
];

const INTERMEDIATE: [[(usize, Venue); BLOCK]; 6] = [
    [(X, H), (2, H), (X, A), (2, A)],
    [(3, H), (X, H), (3, A), (X, A)],
    [(Y, A), (0, A), (Y, H), (0, H)],
    [(1, A), (Y, A), (1, H), (Y, H)],
    [(0, A), (1, A), (0, H), (1, H)],
    [(2, H), (3, H), (2, A), (3, A)],
];

const INTERMEDIATE_LAST: [[(usize, Venue); BLOCK]; 6] = [
    [(X, H), (2, A), (X, A), (2, H)],
    [(3, H), (X, A), (3, A), (X, H)],
    [(Y, A), (0, H), (Y, H), (0, A)],
    [(1, A), (Y, H), (1, H), (Y, A)],
    [(0, A), (1, H), (0, H), (1, A)],
    [(2, H), (3, A), (2, A), (3, H)],
];

/// One game inside a block, slot relative to the block start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixture {
    pub slot: usize,
    pub home: usize,
    pub away: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Phase1Error {
    #[error("first phase needs n = 4m + 2 with n >= 30, got {0}")]
    UnsupportedSize(usize),
    #[error("offset {offset} out of range 0..{blocks}")]
    OffsetOutOfRange { offset: usize, blocks: usize },
    #[error("arc kind {kind} needs {expected} teams, got {found}")]
    Arity {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("construction invariant violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    ConstructionInvariantViolated(Vec<ConstructionViolation>),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Emits the games of one arc. `teams` lists the labels in role order
/// `1, 2, 3, 4` and, for the intermediate kinds, `x, y`.
pub fn arc_games(kind: ArcKind, teams: &[usize]) -> Result<Vec<Fixture>, Phase1Error> {
    if teams.len() != kind.roles() {
        return Err(Phase1Error::Arity {
            kind: kind.name(),
            expected: kind.roles(),
            found: teams.len(),
        });
    }
    let mut out = Vec::with_capacity(kind.roles() * 2);
    for (role, row) in kind.grid().iter().enumerate() {
        for (slot, &(opp, venue)) in row.iter().enumerate() {
            if venue == Venue::Home {
                out.push(Fixture {
                    slot,
                    home: teams[role],
                    away: teams[opp],
                });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// An arc between matching pairs (pair `k` holds labels `2k`, `2k + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub kind: ArcKind,
    /// Pair in roles `1, 2`.
    pub upper: usize,
    /// Pair in roles `3, 4`.
    pub lower: usize,
    /// Pair in roles `x, y`, intermediate kinds only.
    pub middle: Option<usize>,
}

impl Arc {
    pub fn teams(&self) -> Vec<usize> {
        let mut t = vec![2 * self.upper, 2 * self.upper + 1, 2 * self.lower, 2 * self.lower + 1];
        if let Some(m) = self.middle {
            t.extend([2 * m, 2 * m + 1]);
        }
        t
    }

    pub fn games(&self) -> Vec<Fixture> {
        arc_games(self.kind, &self.teams()).expect("arc arity matches its kind")
    }
}

/// Arcs of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub block: usize,
    pub last: bool,
    pub arcs: Vec<Arc>,
}

/// Pair indices of the gray vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grays {
    /// Against position `h + 1`.
    pub g7: usize,
    /// Against position `h`, upper role.
    pub g5: usize,
    /// Against position `0`.
    pub g3: usize,
    /// Intermediate vertex.
    pub gx: usize,
}

impl Grays {
    pub fn for_teams(n: usize) -> Grays {
        let b = n / 2 - 4;
        Grays {
            g7: b,
            g5: b + 1,
            g3: b + 2,
            gx: b + 3,
        }
    }
}

fn check_size(n: usize) -> Result<(), Phase1Error> {
    if n % 4 == 2 && n >= 30 {
        Ok(())
    } else {
        Err(Phase1Error::UnsupportedSize(n))
    }
}

/// Layout of `block` when black pair `k` starts at position `k + offset`.
pub fn block_layout(n: usize, offset: usize, block: usize) -> BlockLayout {
    let b = n / 2 - 4;
    let h = (b - 1) / 2;
    let g = Grays::for_teams(n);
    let last = block == b - 1;
    let at = |p: usize| (p + 2 * b - offset % b - block % b) % b;
    let arc = |kind, upper, lower| Arc {
        kind,
        upper,
        lower,
        middle: None,
    };
    let (chord, tail, inter) = if last {
        (ArcKind::Haah, ArcKind::Haah, ArcKind::IntermediateLast)
    } else {
        (ArcKind::Hhaa, ArcKind::Hhaa, ArcKind::Intermediate)
    };
    let mut arcs = vec![
        arc(ArcKind::Haah, at(0), g.g3),
        Arc {
            kind: inter,
            upper: at(b - 1),
            lower: at(1),
            middle: Some(g.gx),
        },
    ];
    arcs.extend((2..h).map(|p| arc(chord, at(b - p), at(p))));
    arcs.push(arc(ArcKind::Haah, g.g5, at(h)));
    arcs.push(arc(tail, at(h + 1), g.g7));
    BlockLayout { block, last, arcs }
}

/// The first phase on labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase1 {
    pub n: usize,
    pub offset: usize,
    pub blocks: Vec<BlockLayout>,
    pub table: PartialSchedule,
}

impl Phase1 {
    pub fn slots(&self) -> usize {
        self.blocks.len() * BLOCK
    }

    /// Per-block arc listing, 1-based labels.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let pair = |k: usize| format!("{},{}", 2 * k + 1, 2 * k + 2);
        for bl in &self.blocks {
            let s = bl.block * BLOCK + 1;
            let _ = writeln!(out, "block {} slots {}-{}{}", bl.block + 1, s, s + 3, if bl.last { " last" } else { "" });
            for a in &bl.arcs {
                let _ = write!(out, "  {} upper {} lower {}", a.kind.name(), pair(a.upper), pair(a.lower));
                if let Some(m) = a.middle {
                    let _ = write!(out, " middle {}", pair(m));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Builds and checks the first phase for one initial offset.
pub fn build_phase1(n: usize, offset: usize) -> Result<Phase1, Phase1Error> {
    check_size(n)?;
    let b = n / 2 - 4;
    if offset >= b {
        return Err(Phase1Error::OffsetOutOfRange { offset, blocks: b });
    }
    let blocks: Vec<BlockLayout> = (0..b).map(|blk| block_layout(n, offset, blk)).collect();
    let mut table = PartialSchedule::new(n, b * BLOCK);
    for bl in &blocks {
        for arc in &bl.arcs {
            for f in arc.games() {
                table.place(bl.block * BLOCK + f.slot, f.home, f.away)?;
            }
        }
    }
    let p = Phase1 {
        n,
        offset,
        blocks,
        table,
    };
    let v = check_phase1(&p);
    if v.is_empty() {
        Ok(p)
    } else {
        Err(Phase1Error::ConstructionInvariantViolated(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionViolation {
    pub property: Property,
    pub block: Option<usize>,
    pub detail: String,
}

impl fmt::Display for ConstructionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.property)?;
        if let Some(b) = self.block {
            write!(f, " block {}", b + 1)?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Labels of the gray pairs that face a HAAH arc in every block. Their
/// block junctions repeat a venue, so only the run cap applies to them.
pub fn junction_exempt(n: usize, label: usize) -> bool {
    let g = Grays::for_teams(n);
    label / 2 == g.g5 || label / 2 == g.g3
}

/// Re-checks every construction property on a built first phase.
pub fn check_phase1(p: &Phase1) -> Vec<ConstructionViolation> {
    let n = p.n;
    let b = p.blocks.len();
    let g = Grays::for_teams(n);
    let mut out = Vec::new();
    let mut push = |property, block, detail: String| {
        out.push(ConstructionViolation {
            property,
            block,
            detail,
        })
    };
    let t = &p.table;

    for blk in 0..b {
        for team in 0..n {
            let v = t.venues(team, blk * BLOCK..(blk + 1) * BLOCK);
            let homes = v.iter().filter(|x| **x == Some(Venue::Home)).count();
            let aways = v.iter().filter(|x| **x == Some(Venue::Away)).count();
            if homes != 2 || aways != 2 {
                push(Property::P1, Some(blk), format!("team {} plays {homes} home, {aways} away", team + 1));
            }
        }
    }

    let mut met: Vec<Vec<(usize, Venue)>> = vec![Vec::new(); n * n];
    for team in 0..n {
        for slot in 0..t.slots() {
            if let Some(gm) = t.get(team, slot) {
                met[team * n + gm.opponent].push((slot / BLOCK, gm.venue));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let games = &met[i * n + j];
            if games.is_empty() {
                continue;
            }
            let ok = games.len() == 2 && games[0].0 == games[1].0 && games[0].1 != games[1].1;
            if !ok {
                push(Property::P2, None, format!("teams {} and {} meet as {games:?}", i + 1, j + 1));
            }
        }
    }
    for bl in &p.blocks {
        let mut expect = BTreeSet::new();
        for arc in &bl.arcs {
            expect.extend(arc.games().into_iter().map(|f| (f.slot, f.home, f.away)));
        }
        let mut got = BTreeSet::new();
        for team in 0..n {
            for s in 0..BLOCK {
                if let Some(gm) = t.get(team, bl.block * BLOCK + s) {
                    if gm.venue == Venue::Home {
                        got.insert((s, team, gm.opponent));
                    }
                }
            }
        }
        if expect != got {
            push(Property::P2, Some(bl.block), "games differ from the arc tables".into());
        }
    }

    for bl in &p.blocks {
        for arc in &bl.arcs {
            if bl.last {
                if matches!(arc.kind, ArcKind::Hhaa | ArcKind::Intermediate) {
                    push(Property::P3, Some(bl.block), format!("{} arc in the last block", arc.kind.name()));
                }
            } else {
                if arc.kind == ArcKind::IntermediateLast {
                    push(Property::P4, Some(bl.block), "last-block intermediate arc outside the last block".into());
                }
                let gray = [g.g5, g.g3];
                if arc.kind == ArcKind::Haah && !gray.contains(&arc.upper) && !gray.contains(&arc.lower) {
                    push(Property::P3, Some(bl.block), "HAAH arc without a surplus gray pair".into());
                }
            }
            if arc.middle.is_some() && arc.middle != Some(g.gx) {
                push(Property::P4, Some(bl.block), "intermediate vertex is not the last pair".into());
            }
        }
        let inter = bl.arcs.iter().filter(|a| a.middle.is_some()).count();
        if inter != 1 {
            push(Property::P4, Some(bl.block), format!("{inter} intermediate arcs"));
        }
    }

    let never: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| met[i * n + j].is_empty())
        .collect();
    let mut expected: BTreeSet<(usize, usize)> = remaining_opponents(n)
        .map(|r| r.pairs())
        .unwrap_or_default();
    for i in n - 8..n {
        for j in i + 1..n {
            expected.insert((i, j));
        }
    }
    if never != expected {
        let extra: Vec<_> = never.difference(&expected).take(4).collect();
        let missing: Vec<_> = expected.difference(&never).take(4).collect();
        push(Property::P5, None, format!("unexpected unmet {extra:?}, expected unmet but met {missing:?}"));
    }

    let end = t.slots();
    for team in 0..n {
        let v = t.venues(team, end - 2..end);
        if v[0].is_none() || v[0] == v[1] {
            push(Property::P6, Some(b - 1), format!("team {} ends with {v:?}", team + 1));
        }
    }

    for team in 0..n {
        let v: Vec<Venue> = t.venues(team, 0..end).into_iter().flatten().collect();
        if v.len() != end {
            continue;
        }
        if runs(&v).iter().any(|&(_, len, _)| len > 2) {
            push(Property::P7, None, format!("team {} has a run longer than two", team + 1));
        }
        if junction_exempt(n, team) {
            continue;
        }
        for blk in 1..b {
            if v[blk * BLOCK - 1] == v[blk * BLOCK] {
                push(Property::P7, Some(blk), format!("team {} keeps its venue across the junction", team + 1));
            }
        }
    }
    out
}

/// Travel along matching edges inside blocks: a hop between two away games
/// of one block at the two teams of a matching pair. `inst` is indexed by
/// label.
pub fn matching_traffic(p: &Phase1, inst: &Instance) -> Length {
    let mut total = 0;
    for team in 0..p.n {
        for blk in 0..p.blocks.len() {
            for s in blk * BLOCK..(blk + 1) * BLOCK - 1 {
                let (a, b) = (p.table.get(team, s), p.table.get(team, s + 1));
                if let (Some(a), Some(b)) = (a, b) {
                    let away = a.venue == Venue::Away && b.venue == Venue::Away;
                    if away && a.opponent / 2 == b.opponent / 2 {
                        total += inst.d(a.opponent, b.opponent);
                    }
                }
            }
        }
    }
    total
}

/// Surplus of the last block that is not charged to the gray pairs facing
/// position `0` and position `h`: the four cross edges of every other HAAH
/// arc and, for the intermediate arc, `d1x + d2x + d3y + d4y + d13 + d24`.
pub fn last_block_surplus(p: &Phase1, inst: &Instance) -> Length {
    let g = Grays::for_teams(p.n);
    let last = p.blocks.last().expect("at least one block");
    let mut total = 0;
    for arc in &last.arcs {
        let t = arc.teams();
        match arc.kind {
            ArcKind::Haah => {
                if [arc.upper, arc.lower].iter().any(|&k| k == g.g3 || k == g.g5) {
                    continue;
                }
                for &u in &t[0..2] {
                    for &l in &t[2..4] {
                        total += inst.d(u, l);
                    }
                }
            }
            ArcKind::IntermediateLast => {
                total += inst.d(t[0], t[4]) + inst.d(t[1], t[4]) + inst.d(t[2], t[5]) + inst.d(t[3], t[5]);
                total += inst.d(t[0], t[2]) + inst.d(t[1], t[3]);
            }
            _ => {}
        }
    }
    total
}
