//! Team relabeling so that matching pairs become `(2k, 2k + 1)`.
//!
//! Labels are 0-based. With `B = n/2 - 4`, pairs `0..B` are the black
//! pairs that rotate in the first phase; pairs `B..B + 4` are the four
//! fixed gray pairs. The three pairs with the smallest row-sum total take
//! pairs `B + 1`, `B + 2`, `B + 3`; among the rest, the one with the
//! smallest distance to those six teams takes pair `B`.
//!
//! Black pairs are numbered by walking the Hamilton cycle: the first member
//! of each pair met on the walk receives the odd label `2k + 1`, so the odd
//! labels `1, 3, ..., 2B - 1` occur in cycle order.

use thiserror::Error;

use crate::instance::{Instance, Length};
use crate::metric_graph::{HamiltonCycle, Matching};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumberingError {
    #[error("numbering needs an even team count of at least 8, got {0}")]
    TooFewTeams(usize),
    #[error("matching does not cover every team exactly once")]
    NotPerfect,
    #[error("cycle does not visit every team exactly once")]
    NotHamiltonian,
    #[error("labels do not form a permutation of 0..{0}")]
    NotPermutation(usize),
}

/// A bijection between labels and original team indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numbering {
    team_of: Vec<usize>,
    label_of: Vec<usize>,
}

impl Numbering {
    pub fn identity(n: usize) -> Self {
        Numbering {
            team_of: (0..n).collect(),
            label_of: (0..n).collect(),
        }
    }

    /// `team_of[label]` is the original team carrying `label`.
    pub fn from_team_order(team_of: Vec<usize>) -> Result<Self, NumberingError> {
        let n = team_of.len();
        let mut label_of = vec![usize::MAX; n];
        for (label, &team) in team_of.iter().enumerate() {
            if team >= n || label_of[team] != usize::MAX {
                return Err(NumberingError::NotPermutation(n));
            }
            label_of[team] = label;
        }
        Ok(Numbering { team_of, label_of })
    }

    pub fn n(&self) -> usize {
        self.team_of.len()
    }

    #[inline]
    pub fn team(&self, label: usize) -> usize {
        self.team_of[label]
    }

    #[inline]
    pub fn label(&self, team: usize) -> usize {
        self.label_of[team]
    }

    pub fn team_of(&self) -> &[usize] {
        &self.team_of
    }

    pub fn label_of(&self) -> &[usize] {
        &self.label_of
    }

    /// Number of black pairs, `n/2 - 4`.
    pub fn black_pairs(&self) -> usize {
        self.n() / 2 - 4
    }

    /// The instance seen through the labels: entry `(a, b)` is the distance
    /// between the teams labeled `a` and `b`.
    pub fn relabel(&self, inst: &Instance) -> Instance {
        inst.permuted(&self.team_of)
    }
}

/// Builds the numbering. Deterministic: ties go to the matching pair that
/// sorts first, and within a gray pair the lower team index gets the lower
/// label.
pub fn choose_numbering(
    inst: &Instance,
    m: &Matching,
    c: &HamiltonCycle,
) -> Result<Numbering, NumberingError> {
    let n = inst.n();
    if n < 8 || n % 2 == 1 {
        return Err(NumberingError::TooFewTeams(n));
    }
    check_perfect(n, m)?;
    check_hamiltonian(n, c)?;

    let b = n / 2 - 4;
    let mut pairs = m.pairs.clone();
    pairs.sort_unstable();
    let s: Vec<Length> = (0..n).map(|i| inst.row_sum(i)).collect();

    let mut by_s: Vec<usize> = (0..pairs.len()).collect();
    by_s.sort_by_key(|&p| (s[pairs[p].0] + s[pairs[p].1], p));
    let mut team_of = vec![usize::MAX; n];
    let mut assigned = vec![false; pairs.len()];
    for (slot, &p) in by_s.iter().take(3).enumerate() {
        let (lo, hi) = pairs[p];
        team_of[2 * (b + 1 + slot)] = lo;
        team_of[2 * (b + 1 + slot) + 1] = hi;
        assigned[p] = true;
    }

    let gray: Vec<usize> = team_of[2 * (b + 1)..].to_vec();
    let t = |i: usize| -> Length { gray.iter().map(|&g| inst.d(i, g)).sum() };
    let p7 = (0..pairs.len())
        .filter(|&p| !assigned[p])
        .min_by_key(|&p| (t(pairs[p].0) + t(pairs[p].1), p))
        .expect("at least one pair remains after the three gray pairs");
    team_of[2 * b] = pairs[p7].0;
    team_of[2 * b + 1] = pairs[p7].1;
    assigned[p7] = true;

    let mate = m.mates(n);
    let pair_of: Vec<usize> = {
        let mut v = vec![0; n];
        for (p, &(a, bb)) in pairs.iter().enumerate() {
            v[a] = p;
            v[bb] = p;
        }
        v
    };
    let mut next = 0;
    for &team in &c.order {
        let p = pair_of[team];
        if !assigned[p] {
            assigned[p] = true;
            team_of[2 * next + 1] = team;
            team_of[2 * next] = mate[team];
            next += 1;
        }
    }
    debug_assert_eq!(next, b);
    Numbering::from_team_order(team_of)
}

fn check_perfect(n: usize, m: &Matching) -> Result<(), NumberingError> {
    let mut seen = vec![false; n];
    for &(a, b) in &m.pairs {
        for v in [a, b] {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(NumberingError::NotPerfect);
            }
        }
    }
    if seen.iter().all(|&x| x) {
        Ok(())
    } else {
        Err(NumberingError::NotPerfect)
    }
}

fn check_hamiltonian(n: usize, c: &HamiltonCycle) -> Result<(), NumberingError> {
    let mut seen = vec![false; n];
    for &v in &c.order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(NumberingError::NotHamiltonian);
        }
    }
    if c.order.len() == n {
        Ok(())
    } else {
        Err(NumberingError::NotHamiltonian)
    }
}

/// Exact quantities behind the numbering guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberingCertificate {
    pub delta: Length,
    /// Row sums of the six teams in the three smallest-sum gray pairs.
    pub gray_s_sum: Length,
    /// Distance of pair `B` to those six teams.
    pub t_sum: Length,
    /// Closed walk through the odd labels `1, 3, ..., 2B - 1`.
    pub chained_evens: Length,
}

impl NumberingCertificate {
    /// `n * gray_s_sum <= 6 * delta`.
    pub fn property_a(&self, n: usize) -> bool {
        n as i128 * self.gray_s_sum as i128 <= 6 * self.delta as i128
    }

    /// `n (n - 6) * t_sum <= 12 * delta`.
    pub fn property_b(&self, n: usize) -> bool {
        (n as i128) * (n as i128 - 6) * self.t_sum as i128 <= 12 * self.delta as i128
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberingViolation {
    #[error("labels {0} and {1} form a pair that is not a matching edge")]
    PairNotMatched(usize, usize),
    #[error("property (a) fails: n * {gray_s_sum} > 6 * {delta}")]
    PropertyA { gray_s_sum: Length, delta: Length },
    #[error("property (b) fails: n(n-6) * {t_sum} > 12 * {delta}")]
    PropertyB { t_sum: Length, delta: Length },
    #[error("odd labels do not occur in cycle order")]
    CycleOrder,
    #[error("gray pair selection is not minimal")]
    GraySelection,
    #[error("pair selected for the fourth gray slot does not minimize its distance sum")]
    TSelection,
}

/// Measures the numbering and re-checks pairing, (a), (b), cycle order and
/// selection minimality. Returns every violation found.
pub fn certify_numbering(
    inst: &Instance,
    num: &Numbering,
    m: &Matching,
    c: &HamiltonCycle,
) -> (NumberingCertificate, Vec<NumberingViolation>) {
    let n = inst.n();
    let b = n / 2 - 4;
    let mut out = Vec::new();
    let mate = m.mates(n);
    for k in 0..n / 2 {
        let (x, y) = (num.team(2 * k), num.team(2 * k + 1));
        if mate[x] != y {
            out.push(NumberingViolation::PairNotMatched(2 * k, 2 * k + 1));
        }
    }

    let stats = inst.stats(Some(num));
    let s_pair = |k: usize| stats.s[num.team(2 * k)] + stats.s[num.team(2 * k + 1)];
    let t = stats.t.as_ref().expect("stats computed with a numbering");
    let t_pair = |k: usize| t[2 * k] + t[2 * k + 1];
    let gray_s_sum: Length = (b + 1..b + 4).map(s_pair).sum();
    let t_sum = t_pair(b);

    let gray_max = (b + 1..b + 4).map(s_pair).max().unwrap_or(0);
    if (0..=b).any(|k| s_pair(k) < gray_max) {
        out.push(NumberingViolation::GraySelection);
    }
    if (0..b).any(|k| t_pair(k) < t_sum) {
        out.push(NumberingViolation::TSelection);
    }

    let odd: Vec<usize> = (0..b).map(|k| num.team(2 * k + 1)).collect();
    let chained_evens = if b < 2 {
        0
    } else {
        (0..b).map(|k| inst.d(odd[k], odd[(k + 1) % b])).sum()
    };

    let mut pos = vec![0usize; n];
    for (i, &v) in c.order.iter().enumerate() {
        pos[v] = i;
    }
    let descents = (0..b)
        .filter(|&k| pos[odd[(k + 1) % b]] < pos[odd[k]])
        .count();
    if b >= 2 && descents != 1 {
        out.push(NumberingViolation::CycleOrder);
    }

    let cert = NumberingCertificate {
        delta: stats.delta,
        gray_s_sum,
        t_sum,
        chained_evens,
    };
    if !cert.property_a(n) {
        out.push(NumberingViolation::PropertyA {
            gray_s_sum,
            delta: cert.delta,
        });
    }
    if !cert.property_b(n) {
        out.push(NumberingViolation::PropertyB {
            t_sum,
            delta: cert.delta,
        });
    }
    (cert, out)
}
