//! Problem instances: a team count and a symmetric distance matrix.
//!
//! Distances are stored as fixed-point integers. An instance file whose
//! entries are all integral has scale 0; otherwise every entry is multiplied
//! by `10^scale`, where `scale` is the largest number of fractional digits in
//! the file (at most [`MAX_SCALE`]). All sums and bound comparisons are then
//! exact integer arithmetic.

use std::fmt::Write as _;

use thiserror::Error;

use crate::numbering::Numbering;

/// A distance (or sum of distances) in fixed-point units of the instance.
pub type Length = i64;

/// Maximum number of fractional digits accepted in an instance file.
pub const MAX_SCALE: u32 = 9;

/// Largest accepted scaled matrix entry; keeps every aggregate inside `i64`.
pub const MAX_ENTRY: Length = 1_000_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("empty instance file")]
    Empty,
    #[error("line {line}: malformed number `{token}`")]
    MalformedNumber { line: usize, token: String },
    #[error("team count must be even, got {0}")]
    OddTeamCount(usize),
    #[error("at least 4 teams are required, got {0}")]
    TooFewTeams(usize),
    #[error("row {row}: expected {expected} entries, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} matrix rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("d[{i}][{j}] differs from d[{j}][{i}]")]
    Asymmetric { i: usize, j: usize },
    #[error("d[{i}][{j}] is negative")]
    Negative { i: usize, j: usize },
    #[error("d[{i}][{i}] is not zero")]
    NonzeroDiagonal { i: usize },
    #[error("d[{i}][{j}] is out of range")]
    OutOfRange { i: usize, j: usize },
}

/// A validated instance. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    dist: Vec<Length>,
    scale: u32,
    names: Vec<String>,
    triangle_violation: Option<(usize, usize, usize)>,
}

impl Instance {
    /// Builds an instance from an integral matrix (scale 0) with default names.
    pub fn from_matrix(rows: &[Vec<Length>]) -> Result<Self, InstanceError> {
        Self::from_scaled(rows, 0, None)
    }

    /// Builds an instance from a matrix already expressed in units of `10^-scale`.
    pub fn from_scaled(
        rows: &[Vec<Length>],
        scale: u32,
        names: Option<Vec<String>>,
    ) -> Result<Self, InstanceError> {
        let n = rows.len();
        if n < 4 {
            return Err(InstanceError::TooFewTeams(n));
        }
        if n % 2 != 0 {
            return Err(InstanceError::OddTeamCount(n));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(InstanceError::RowLength {
                    row: i + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            if dist[i * n + i] != 0 {
                return Err(InstanceError::NonzeroDiagonal { i });
            }
            for j in 0..n {
                let v = dist[i * n + j];
                if v < 0 {
                    return Err(InstanceError::Negative { i, j });
                }
                if v > MAX_ENTRY {
                    return Err(InstanceError::OutOfRange { i, j });
                }
                if v != dist[j * n + i] {
                    return Err(InstanceError::Asymmetric { i, j });
                }
            }
        }
        let names = names.unwrap_or_else(|| (1..=n).map(|i| format!("T{i}")).collect());
        let mut inst = Instance {
            n,
            dist,
            scale,
            names,
            triangle_violation: None,
        };
        inst.triangle_violation = inst.find_triangle_violation();
        Ok(inst)
    }

    /// Parses the plain-text instance format.
    ///
    /// The first non-blank line holds `n`; the next `n` lines hold the matrix
    /// rows. A row may end with `# name` to name that team.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(InstanceError::Empty)?;
        let header = header.split('#').next().unwrap_or("").trim();
        let n: usize = header.parse().map_err(|_| InstanceError::MalformedNumber {
            line: hline,
            token: header.to_string(),
        })?;
        if n < 4 {
            return Err(InstanceError::TooFewTeams(n));
        }
        if n % 2 != 0 {
            return Err(InstanceError::OddTeamCount(n));
        }

        let mut raw: Vec<Vec<Decimal>> = Vec::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        for (line_no, line) in lines {
            if raw.len() == n {
                return Err(InstanceError::RowCount {
                    expected: n,
                    found: raw.len() + 1,
                });
            }
            let (body, name) = match line.split_once('#') {
                Some((b, c)) => (b, Some(c.trim().to_string()).filter(|c| !c.is_empty())),
                None => (line, None),
            };
            let row = body
                .split_whitespace()
                .map(|tok| {
                    Decimal::parse(tok).ok_or_else(|| InstanceError::MalformedNumber {
                        line: line_no,
                        token: tok.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(InstanceError::RowLength {
                    row: raw.len() + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            names.push(name.unwrap_or_else(|| format!("T{}", raw.len() + 1)));
            raw.push(row);
        }
        if raw.len() != n {
            return Err(InstanceError::RowCount {
                expected: n,
                found: raw.len(),
            });
        }

        let scale = raw
            .iter()
            .flatten()
            .map(|d| d.frac_digits)
            .max()
            .unwrap_or(0);
        let mut rows = Vec::with_capacity(n);
        for (i, row) in raw.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, d) in row.iter().enumerate() {
                if d.negative && d.mantissa != 0 {
                    return Err(InstanceError::Negative { i, j });
                }
                let v = d
                    .mantissa
                    .checked_mul(10i128.pow(scale - d.frac_digits))
                    .filter(|v| *v <= MAX_ENTRY as i128)
                    .ok_or(InstanceError::OutOfRange { i, j })?;
                out.push(v as Length);
            }
            rows.push(out);
        }
        Self::from_scaled(&rows, scale, Some(names))
    }

    /// Renders the instance in the format accepted by [`Instance::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.format_length(self.d(i, j))).collect();
            let _ = writeln!(out, "{} # {}", row.join(" "), self.names[i]);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> Length {
        self.dist[i * self.n + j]
    }

    /// Number of fractional decimal digits carried by every length.
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// True when the triangle inequality holds for every triple.
    pub fn is_metric(&self) -> bool {
        self.triangle_violation.is_none()
    }

    /// First triple `(i, j, k)` with `d(i,j) + d(j,k) < d(i,k)`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        self.triangle_violation
    }

    fn find_triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, j) + self.d(j, k) < self.d(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Formats a length (or a sum of lengths) as a decimal in instance units.
    pub fn format_length(&self, v: impl Into<i128>) -> String {
        format_fixed(v.into(), self.scale)
    }

    /// Converts a length to a floating-point value in instance units.
    pub fn to_f64(&self, v: impl Into<i128>) -> f64 {
        v.into() as f64 / 10f64.powi(self.scale as i32)
    }

    /// Row sum `s(i)`: distance from team `i` to every other team.
    pub fn row_sum(&self, i: usize) -> Length {
        (0..self.n).map(|j| self.d(i, j)).sum()
    }

    pub fn stats(&self, numbering: Option<&Numbering>) -> InstanceStats {
        let s: Vec<Length> = (0..self.n).map(|i| self.row_sum(i)).collect();
        let delta = s.iter().sum();
        let t = numbering.map(|num| {
            let n = self.n;
            (0..n - 6)
                .map(|label| {
                    let team = num.team(label);
                    (n - 6..n).map(|g| self.d(team, num.team(g))).sum()
                })
                .collect()
        });
        InstanceStats { s, delta, t }
    }

    /// Returns a copy with every team relabeled: new team `k` is old team `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Instance {
        let rows: Vec<Vec<Length>> = perm
            .iter()
            .map(|&a| perm.iter().map(|&b| self.d(a, b)).collect())
            .collect();
        let names = perm.iter().map(|&a| self.names[a].clone()).collect();
        Self::from_scaled(&rows, self.scale, Some(names)).expect("permutation preserves validity")
    }
}

/// Aggregate row sums of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceStats {
    /// `s[i]` is the sum of distances from team `i` to all others.
    pub s: Vec<Length>,
    /// Sum of all `s[i]`.
    pub delta: Length,
    /// `t[label]` for labels `0..n-6`: distance from that team to the six
    /// teams labeled `n-6..n`. Present only when a numbering was supplied.
    pub t: Option<Vec<Length>>,
}

pub(crate) fn format_fixed(v: i128, scale: u32) -> String {
    if scale == 0 {
        return v.to_string();
    }
    let p = 10i128.pow(scale);
    let sign = if v < 0 { "-" } else { "" };
    let a = v.abs();
    format!("{sign}{}.{:0width$}", a / p, a % p, width = scale as usize)
}

#[derive(Debug, Clone, Copy)]
struct Decimal {
    negative: bool,
    mantissa: i128,
    frac_digits: u32,
}

impl Decimal {
    fn parse(tok: &str) -> Option<Decimal> {
        let (negative, body) = match tok.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, tok.strip_prefix('+').unwrap_or(tok)),
        };
        let (int, frac) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let frac_digits = frac.len() as u32;
        if frac_digits > MAX_SCALE || int.len() > 20 {
            return None;
        }
        let digits = format!("{int}{frac}");
        let mantissa = if digits.is_empty() { 0 } else { digits.parse().ok()? };
        Some(Decimal {
            negative,
            mantissa,
            frac_digits,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "4\n0 1 2 3\n1 0 2 3\n2 2 0 3\n3 3 3 0";

    #[test]
    fn parses_small_matrix() {
        let inst = Instance::parse(SMALL).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.d(0, 3), 3);
        assert_eq!(inst.d(2, 1), 2);
        assert_eq!(inst.scale(), 0);
        assert_eq!(inst.names()[3], "T4");
        assert!(inst.is_metric());
    }

    #[test]
    fn short_row_is_rejected() {
        let err = Instance::parse("4\n0 1\n1 0 2 3\n2 2 0 3\n3 3 3 0").unwrap_err();
        assert!(matches!(err, InstanceError::RowLength { row: 1, .. }));
    }

    #[test]
    fn asymmetry_is_rejected() {
        let mut rows = vec![vec![1; 6]; 6];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 0;
        }
        rows[0][1] = 5;
        rows[1][0] = 4;
        let err = Instance::from_matrix(&rows).unwrap_err();
        assert_eq!(err, InstanceError::Asymmetric { i: 0, j: 1 });
    }

    #[test]
    fn other_malformed_inputs() {
        assert!(matches!(
            Instance::parse("4\n0 1 2 x\n1 0 2 3\n2 2 0 3\n3 3 3 0"),
            Err(InstanceError::MalformedNumber { line: 2, .. })
        ));
        assert_eq!(
            Instance::parse("5\n0 0 0 0 0"),
            Err(InstanceError::OddTeamCount(5))
        );
        assert!(matches!(
            Instance::parse("4\n0 -1 2 3\n-1 0 2 3\n2 2 0 3\n3 3 3 0"),
            Err(InstanceError::Negative { i: 0, j: 1 })
        ));
        assert!(matches!(
            Instance::parse("4\n1 1 2 3\n1 0 2 3\n2 2 0 3\n3 3 3 0"),
            Err(InstanceError::NonzeroDiagonal { i: 0 })
        ));
        assert!(matches!(
            Instance::parse("4\n0 1 2 3\n1 0 2 3\n2 2 0 3"),
            Err(InstanceError::RowCount { expected: 4, found: 3 })
        ));
        assert_eq!(Instance::parse(""), Err(InstanceError::Empty));
    }

    #[test]
    fn triangle_violation_is_only_a_flag() {
        let inst = Instance::parse("4\n0 1 5 1\n1 0 1 1\n5 1 0 1\n1 1 1 0").unwrap();
        assert!(!inst.is_metric());
        assert_eq!(inst.triangle_violation(), Some((0, 1, 2)));
    }

    #[test]
    fn decimals_use_common_scale() {
        let inst =
            Instance::parse("4\n0 1.5 2 3\n1.5 0 2.25 3 # Home\n2 2.25 0 3\n3 3 3 0").unwrap();
        assert_eq!(inst.scale(), 2);
        assert_eq!(inst.d(0, 1), 150);
        assert_eq!(inst.d(1, 2), 225);
        assert_eq!(inst.names()[1], "Home");
        assert_eq!(inst.format_length(inst.row_sum(1)), "6.75");
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn stats_of_small_matrix() {
        let inst = Instance::parse(SMALL).unwrap();
        let st = inst.stats(None);
        assert_eq!(st.s, vec![6, 6, 7, 9]);
        assert_eq!(st.delta, 28);
        assert!(st.t.is_none());
    }

    #[test]
    fn stats_zero_and_unit() {
        let zero = Instance::from_matrix(&vec![vec![0; 4]; 4]).unwrap();
        assert_eq!(zero.stats(None).s, vec![0; 4]);
        assert_eq!(zero.stats(None).delta, 0);
        let unit = crate::generate::unit_metric(6);
        let st = unit.stats(None);
        assert_eq!(st.s, vec![5; 6]);
        assert_eq!(st.delta, 30);
    }
}
