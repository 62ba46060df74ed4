//! Pipeline, lower bounds and certification.

use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::instance::{Instance, Length};
use crate::metric_graph::{
    christofides_cycle, min_perfect_matching, min_spanning_tree, HamiltonCycle, Matching,
    SpanningTree,
};
use crate::numbering::{certify_numbering, choose_numbering, Numbering, NumberingError};
use crate::oracle::{brute_force_optimal, OracleError};
use crate::phase1::{build_phase1, last_block_surplus, matching_traffic, Phase1, Phase1Error};
use crate::phase2::{build_phase2, t1_surplus, Phase2Error};
use crate::schedule::{team_distances, total_distance, validate_all, PartialSchedule, Schedule};

/// Exact rational in instance units.
pub type Exact = Ratio<i128>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("unsupported size: n = {0}")]
    UnsupportedSize(usize),
    #[error("no feasible schedule exists")]
    Infeasible,
    #[error(transparent)]
    Numbering(#[from] NumberingError),
    #[error(transparent)]
    Phase1(#[from] Phase1Error),
    #[error(transparent)]
    Phase2(#[from] Phase2Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Route `n = 6` to the exhaustive search.
    pub allow_n6_oracle: bool,
}

/// Smallest size handled by the construction.
pub const MIN_CONSTRUCTIVE: usize = 30;

/// Graph quantities that every bound is built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphBounds {
    pub n: usize,
    pub delta: Length,
    pub matching: Matching,
    pub tree: SpanningTree,
}

impl GraphBounds {
    pub fn compute(inst: &Instance) -> Self {
        GraphBounds {
            n: inst.n(),
            delta: inst.stats(None).delta,
            matching: min_perfect_matching(inst),
            tree: min_spanning_tree(inst),
        }
    }

    pub fn dm(&self) -> Length {
        self.matching.weight
    }

    pub fn dt(&self) -> Length {
        self.tree.weight
    }

    /// `Δ + n d(M)`.
    pub fn lb1(&self) -> Length {
        self.delta + self.n as Length * self.dm()
    }

    /// `n (d(T) + d(M))`.
    pub fn lb2(&self) -> Length {
        self.n as Length * (self.dt() + self.dm())
    }

    /// `(1 + 8/n) Δ + (n + 6) d(M) + 16 (d(T) + d(M))`.
    pub fn analysis_bound(&self) -> Exact {
        let n = self.n as i128;
        Exact::new((n + 8) * self.delta as i128, n)
            + Exact::from((n + 6) * self.dm() as i128 + 16 * (self.dt() + self.dm()) as i128)
    }

    /// `(1 + 8/n) lb1 + (16/n) lb2`.
    pub fn chain_bound(&self) -> Exact {
        let n = self.n as i128;
        Exact::new((n + 8) * self.lb1() as i128 + 16 * self.lb2() as i128, n)
    }

    /// `(1 + 24/n) lb1`.
    pub fn guarantee(&self) -> Exact {
        let n = self.n as i128;
        Exact::new((n + 24) * self.lb1() as i128, n)
    }

    /// `Δ/(n-8) + 12Δ/(n(n-6)) <= 2Δ/n`.
    pub fn spacing_inequality(&self) -> bool {
        let (n, d) = (self.n as i128, self.delta as i128);
        if n <= 8 {
            return false;
        }
        Exact::new(d, n - 8) + Exact::new(12 * d, n * (n - 6)) <= Exact::new(2 * d, n)
    }
}

pub fn lower_bound_independent(inst: &Instance) -> Length {
    GraphBounds::compute(inst).lb1()
}

pub fn lower_bound_tree(inst: &Instance) -> Length {
    GraphBounds::compute(inst).lb2()
}

pub fn analysis_upper_bound(inst: &Instance) -> Exact {
    GraphBounds::compute(inst).analysis_bound()
}

/// One named check of a solve run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Whether certification depends on this check.
    pub required: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Construction { offset: usize },
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    pub delta: Length,
    pub dm: Length,
    pub dt: Length,
    pub lb1: Length,
    pub lb2: Length,
    pub analysis_bound: Exact,
    pub total: Length,
    /// `total / lb1`, `None` when `lb1 = 0`.
    pub ratio: Option<Exact>,
    pub method: Method,
    pub per_team: Vec<Length>,
    pub checks: Vec<Check>,
}

impl BoundsReport {
    pub fn certified(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `key value` lines with lengths in instance units.
    pub fn render(&self, inst: &Instance) -> String {
        let mut out = String::new();
        let len = |v: Length| inst.format_length(v);
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "lb1 {}", len(self.lb1));
        let _ = writeln!(out, "lb2 {}", len(self.lb2));
        let _ = writeln!(out, "analysis_bound {}", format_exact(inst, &self.analysis_bound));
        let _ = writeln!(out, "total {}", len(self.total));
        match &self.ratio {
            Some(r) => {
                let _ = writeln!(out, "ratio {:.6}", *r.numer() as f64 / *r.denom() as f64);
            }
            None => {
                let _ = writeln!(out, "ratio undefined");
            }
        }
        match self.method {
            Method::Construction { offset } => {
                let _ = writeln!(out, "offset {offset}");
            }
            Method::Oracle => {
                let _ = writeln!(out, "offset oracle");
            }
        }
        let per: Vec<String> = self.per_team.iter().map(|&d| len(d)).collect();
        let _ = writeln!(out, "per_team {}", per.join(" "));
        for c in &self.checks {
            let state = match (c.passed, c.required) {
                (true, _) => "pass",
                (false, true) => "FAIL",
                (false, false) => "fail (informational)",
            };
            let _ = writeln!(out, "check {} {state}", c.name);
        }
        let _ = writeln!(out, "certified {}", self.certified());
        out
    }
}

/// Decimal rendering of an exact value, rounded toward zero, with three
/// digits beyond the instance scale.
pub fn format_exact(inst: &Instance, v: &Exact) -> String {
    let scaled = (v * Exact::from(1000)).to_integer();
    let digits = inst.scale() + 3;
    let neg = scaled < 0;
    let abs = scaled.unsigned_abs();
    let p = 10u128.pow(digits);
    format!("{}{}.{:0width$}", if neg { "-" } else { "" }, abs / p, abs % p, width = digits as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Schedule over the original team indices.
    pub schedule: Schedule,
    pub report: BoundsReport,
}

/// Everything the construction produced, kept for inspection.
#[derive(Debug, Clone)]
pub struct Construction {
    pub numbering: Numbering,
    pub cycle: HamiltonCycle,
    pub offset: usize,
    /// Totals per offset, on labels.
    pub offset_totals: Vec<Length>,
    pub phase1: Phase1,
    pub phase2: PartialSchedule,
    /// Schedule over labels.
    pub labeled: Schedule,
}

fn size_supported(n: usize) -> bool {
    n % 4 == 2 && n >= MIN_CONSTRUCTIVE
}

pub fn solve(inst: &Instance, opts: SolveOptions) -> Result<Solution, SolveError> {
    let n = inst.n();
    if n == 4 || (n == 6 && opts.allow_n6_oracle) {
        return solve_oracle(inst, opts);
    }
    if !size_supported(n) {
        return Err(SolveError::UnsupportedSize(n));
    }
    let gb = GraphBounds::compute(inst);
    let (sol, _) = solve_constructive(inst, &gb)?;
    Ok(sol)
}

fn solve_oracle(inst: &Instance, opts: SolveOptions) -> Result<Solution, SolveError> {
    let gb = GraphBounds::compute(inst);
    let r = brute_force_optimal(inst, opts.allow_n6_oracle)?;
    let schedule = r.schedule.ok_or(SolveError::Infeasible)?;
    let total = total_distance(&schedule, inst);
    let checks = vec![
        Check {
            name: "feasible",
            passed: validate_all(&schedule, 2).is_empty(),
            required: true,
        },
        Check {
            name: "above_lb2",
            passed: total >= gb.lb2() || !inst.is_metric(),
            required: true,
        },
        Check {
            name: "above_lb1",
            passed: total >= gb.lb1() || !inst.is_metric(),
            required: true,
        },
    ];
    let report = report(inst, &gb, &schedule, Method::Oracle, checks);
    Ok(Solution { schedule, report })
}

fn report(
    inst: &Instance,
    gb: &GraphBounds,
    schedule: &Schedule,
    method: Method,
    checks: Vec<Check>,
) -> BoundsReport {
    let per_team = team_distances(schedule, inst);
    let total: Length = per_team.iter().sum();
    BoundsReport {
        n: inst.n(),
        delta: gb.delta,
        dm: gb.dm(),
        dt: gb.dt(),
        lb1: gb.lb1(),
        lb2: gb.lb2(),
        analysis_bound: gb.analysis_bound(),
        total,
        ratio: (gb.lb1() > 0).then(|| Exact::new(total as i128, gb.lb1() as i128)),
        method,
        per_team,
        checks,
    }
}

/// Evaluates every initial offset on the labeled instance and keeps the
/// one with the smallest total, ties to the smallest offset.
pub fn choose_initial_position(
    labeled: &Instance,
    phase2: &PartialSchedule,
) -> Result<(usize, Phase1, Schedule, Vec<Length>), SolveError> {
    let n = labeled.n();
    let b = n / 2 - 4;
    let built: Vec<(Phase1, Schedule, Length)> = (0..b)
        .into_par_iter()
        .map(|offset| {
            let p1 = build_phase1(n, offset)?;
            let mut full = PartialSchedule::new(n, 2 * (n - 1));
            full.paste(&p1.table, 0, |t| t).map_err(Phase1Error::from)?;
            full.paste(phase2, p1.slots(), |t| t).map_err(Phase1Error::from)?;
            let s = full.into_schedule().map_err(Phase1Error::from)?;
            let total = total_distance(&s, labeled);
            Ok((p1, s, total))
        })
        .collect::<Result<_, SolveError>>()?;
    let totals: Vec<Length> = built.iter().map(|x| x.2).collect();
    let best = (0..b).min_by_key(|&o| (totals[o], o)).expect("at least one offset");
    let (p1, s, _) = built.into_iter().nth(best).unwrap();
    Ok((best, p1, s, totals))
}

/// Runs the construction for `n = 4m + 2 >= 30` and returns the solution
/// together with its intermediate artifacts.
pub fn solve_constructive(
    inst: &Instance,
    gb: &GraphBounds,
) -> Result<(Solution, Construction), SolveError> {
    let n = inst.n();
    if !size_supported(n) {
        return Err(SolveError::UnsupportedSize(n));
    }
    let cycle = christofides_cycle(inst, &gb.tree);
    let numbering = choose_numbering(inst, &gb.matching, &cycle)?;
    let labeled = numbering.relabel(inst);
    let phase2 = build_phase2(n)?;
    let (offset, phase1, labeled_schedule, offset_totals) =
        choose_initial_position(&labeled, &phase2)?;
    let schedule = labeled_schedule.relabel(numbering.team_of());

    let metric = inst.is_metric();
    let (cert, num_violations) = certify_numbering(inst, &numbering, &gb.matching, &cycle);
    let dm = gb.dm();
    let dt = gb.dt();
    let min_surplus = (0..n / 2 - 4)
        .map(|o| {
            if o == offset {
                Ok(last_block_surplus(&phase1, &labeled))
            } else {
                build_phase1(n, o).map(|p| last_block_surplus(&p, &labeled))
            }
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min()
        .unwrap_or(0);
    let t1 = t1_surplus(&labeled, &phase2);
    let total = total_distance(&schedule, inst);
    let total_x = Exact::from(total as i128);
    let s = inst.stats(None).s;
    let per_team = team_distances(&schedule, inst);

    let check = |name, passed, required| Check {
        name,
        passed,
        required,
    };
    let checks = vec![
        check("feasible", validate_all(&schedule, 2).is_empty(), true),
        check("numbering", num_violations.is_empty(), true),
        check("chained_evens", cert.chained_evens <= dt + dm, false),
        check("christofides", cycle.length <= dt + dm, false),
        check(
            "matching_traffic",
            matching_traffic(&phase1, &labeled) <= (n as Length - 8) * dm,
            metric,
        ),
        check("last_block_surplus", min_surplus * (n as Length - 8) <= gb.delta, true),
        check("t1_surplus", t1.within_pair_bound(), metric),
        check(
            "t1_surplus_tree",
            t1.surplus <= 14 * dm + 16 * (dt + dm),
            false,
        ),
        check("lb1_ge_lb2", gb.lb1() >= gb.lb2(), metric),
        check("spacing_inequality", gb.spacing_inequality(), true),
        check(
            "per_team_lower",
            per_team.iter().zip(&s).all(|(d, s)| d >= s),
            metric,
        ),
        check("analysis_bound", total_x <= gb.analysis_bound(), metric),
        check("chain_bound", total_x <= gb.chain_bound(), metric),
        check("guarantee", total_x <= gb.guarantee(), metric),
    ];
    let report = report(inst, gb, &schedule, Method::Construction { offset }, checks);
    Ok((
        Solution {
            schedule,
            report,
        },
        Construction {
            numbering,
            cycle,
            offset,
            offset_totals,
            phase1,
            phase2,
            labeled: labeled_schedule,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_euclidean, unit_metric};

    const SMALL: &str = "4\n0 1 2 3\n1 0 2 3\n2 2 0 3\n3 3 3 0";

    #[test]
    fn bounds_of_small_matrix() {
        let inst = Instance::parse(SMALL).unwrap();
        assert_eq!(lower_bound_independent(&inst), 44);
        assert_eq!(lower_bound_tree(&inst), 40);
    }

    #[test]
    fn bounds_of_trivial_metrics() {
        let zero = Instance::from_matrix(&vec![vec![0; 4]; 4]).unwrap();
        assert_eq!(lower_bound_independent(&zero), 0);
        assert_eq!(lower_bound_tree(&zero), 0);
        assert_eq!(analysis_upper_bound(&zero), Exact::from(0));
        let unit = unit_metric(6);
        assert_eq!(lower_bound_independent(&unit), 48);
        assert_eq!(lower_bound_tree(&unit), 48);
    }

    #[test]
    fn analysis_bound_of_unit_thirty() {
        let unit = unit_metric(30);
        assert_eq!(analysis_upper_bound(&unit), Exact::from(2346));
    }

    #[test]
    fn analysis_bound_is_homogeneous() {
        let inst = random_euclidean(30, 500, 3);
        let rows: Vec<Vec<Length>> = (0..30)
            .map(|i| (0..30).map(|j| 2 * inst.d(i, j)).collect())
            .collect();
        let double = Instance::from_matrix(&rows).unwrap();
        assert_eq!(
            analysis_upper_bound(&double),
            analysis_upper_bound(&inst) * Exact::from(2)
        );
    }

    #[test]
    fn unit_thirty_solves_under_bound_at_offset_zero() {
        let unit = unit_metric(30);
        let sol = solve(&unit, SolveOptions::default()).unwrap();
        assert!(sol.report.certified(), "{}", sol.report.render(&unit));
        assert!(sol.report.total <= 2346);
        assert_eq!(sol.report.method, Method::Construction { offset: 0 });
    }

    #[test]
    fn random_thirty_is_certified() {
        let inst = random_euclidean(30, 1000, 11);
        let sol = solve(&inst, SolveOptions::default()).unwrap();
        assert!(sol.report.certified(), "{}", sol.report.render(&inst));
        let r = sol.report.ratio.unwrap();
        assert!(r <= Exact::new(9, 5));
    }

    #[test]
    fn routing() {
        let small = Instance::parse(SMALL).unwrap();
        let sol = solve(&small, SolveOptions::default()).unwrap();
        assert_eq!(sol.report.method, Method::Oracle);
        for n in [6, 8, 26, 32] {
            assert_eq!(
                solve(&unit_metric(n), SolveOptions::default()).unwrap_err(),
                SolveError::UnsupportedSize(n)
            );
        }
    }

    #[test]
    fn exact_rendering() {
        let inst = Instance::parse("4\n0 1.5 1 1\n1.5 0 1 1\n1 1 0 1\n1 1 1 0").unwrap();
        assert_eq!(format_exact(&inst, &Exact::new(7, 3)), "0.2333");
        assert_eq!(format_exact(&inst, &Exact::from(25)), "2.5000");
    }
}
