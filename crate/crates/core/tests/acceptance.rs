mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ttp2::generate::random_euclidean;
use ttp2::metric_graph::{
    christofides_cycle, min_perfect_matching, min_spanning_tree, odd_vertex_matching_weight,
};
use ttp2::numbering::certify_numbering;
use ttp2::phase2::{build_t2, mirror_concat, remaining_opponents, HALF};
use ttp2::schedule::{check_at_most, check_no_repeater, validate_all, validate_drr, Venue};
use ttp2::solver::{solve_constructive, GraphBounds, Method};
use ttp2::{solve, Exact, Instance, Length, SolveOptions};

const SIZES: [usize; 4] = [30, 34, 38, 42];
const PER_SIZE: u64 = 50;
const TIME_LIMIT: Duration = Duration::from_secs(10);

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

struct Solved {
    n: usize,
    seed: u64,
    feasible: bool,
    elapsed: Duration,
    total: Length,
    gb: GraphBounds,
    numbering_ok: bool,
    chained_ok: bool,
}

fn solve_suite() -> Vec<Solved> {
    let mut out = Vec::new();
    for n in SIZES {
        for k in 0..PER_SIZE {
            let seed = n as u64 * 1000 + k;
            let inst = random_euclidean(n, 1000, seed);
            let start = Instant::now();
            let gb = GraphBounds::compute(&inst);
            let (sol, con) = solve_constructive(&inst, &gb).expect("construction succeeds");
            let elapsed = start.elapsed();
            let (cert, v) = certify_numbering(&inst, &con.numbering, &gb.matching, &con.cycle);
            out.push(Solved {
                n,
                seed,
                feasible: validate_drr(&sol.schedule).is_empty()
                    && check_no_repeater(&sol.schedule).is_empty()
                    && check_at_most(&sol.schedule, 2).is_empty(),
                elapsed,
                total: sol.report.total,
                numbering_ok: v.is_empty()
                    && cert.property_a(n)
                    && cert.property_b(n),
                chained_ok: cert.chained_evens <= gb.dt() + gb.dm(),
                gb,
            });
        }
    }
    out
}

fn first_failure(solved: &[Solved], ok: impl Fn(&Solved) -> bool) -> (bool, String) {
    let bad: Vec<&Solved> = solved.iter().filter(|s| !ok(s)).collect();
    match bad.first() {
        None => (true, format!("{} instances", solved.len())),
        Some(s) => (
            false,
            format!("{} of {} fail, first n={} seed={}", bad.len(), solved.len(), s.n, s.seed),
        ),
    }
}

fn criterion_1(solved: &[Solved]) -> Outcome {
    let slowest = solved.iter().map(|s| s.elapsed).max().unwrap_or_default();
    let (passed, detail) = first_failure(solved, |s| s.feasible && s.elapsed < TIME_LIMIT);
    Outcome {
        id: "1",
        title: "feasibility of constructed schedules",
        passed,
        detail: format!("{detail}, slowest {:.3}s", slowest.as_secs_f64()),
    }
}

fn criterion_2(solved: &[Solved]) -> Outcome {
    let (passed, detail) = first_failure(solved, |s| Exact::from(s.total as i128) <= s.gb.guarantee());
    let worst = solved
        .iter()
        .map(|s| s.total as f64 / s.gb.lb1() as f64)
        .fold(0.0, f64::max);
    Outcome {
        id: "2",
        title: "total <= (1 + 24/n) lb1",
        passed,
        detail: format!("{detail}, worst total/lb1 {worst:.4}"),
    }
}

fn criterion_3(solved: &[Solved]) -> Outcome {
    let (passed, detail) = first_failure(solved, |s| Exact::from(s.total as i128) <= s.gb.analysis_bound());
    Outcome {
        id: "3",
        title: "total <= analysis bound",
        passed,
        detail,
    }
}

fn small_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, n) in [4, 6, 8, 10].into_iter().enumerate() {
        for k in 0..50 {
            out.push(random_euclidean(n, 100, 7_000 + 100 * i as u64 + k));
        }
    }
    out
}

fn criterion_4a(insts: &[Instance]) -> Outcome {
    let bad = insts
        .iter()
        .filter(|i| min_perfect_matching(i).weight != common::brute_matching(i))
        .count();
    Outcome {
        id: "4a",
        title: "matching equals exhaustive minimum",
        passed: bad == 0,
        detail: format!("{} instances, {bad} mismatches", insts.len()),
    }
}

fn criterion_4b(insts: &[Instance]) -> Outcome {
    let mut bad = 0;
    let mut enumerated = 0;
    for inst in insts {
        let t = min_spanning_tree(inst);
        let mut ok = common::tree_is_minimum(inst, &t.edges);
        let w: Length = t.edges.iter().map(|&(a, b)| inst.d(a, b)).sum();
        ok &= w == t.weight;
        if inst.n() <= 8 {
            enumerated += 1;
            ok &= t.weight == common::brute_mst(inst);
        }
        bad += usize::from(!ok);
    }
    Outcome {
        id: "4b",
        title: "spanning tree equals exhaustive minimum",
        passed: bad == 0,
        detail: format!(
            "{} instances ({enumerated} by full tree enumeration, all by cycle certificate), {bad} mismatches",
            insts.len()
        ),
    }
}

fn criterion_4c(insts: &[Instance]) -> Outcome {
    let mut over_tm = 0;
    let mut over_odd = 0;
    for inst in insts {
        let t = min_spanning_tree(inst);
        let c = christofides_cycle(inst, &t);
        let dm = min_perfect_matching(inst).weight;
        if c.length > t.weight + dm {
            over_tm += 1;
        }
        if c.length > t.weight + odd_vertex_matching_weight(inst, &t) {
            over_odd += 1;
        }
    }
    Outcome {
        id: "4c",
        title: "cycle length <= d(T) + d(M)",
        passed: over_tm == 0,
        detail: format!(
            "{over_tm} of {} exceed d(T) + d(M); {over_odd} exceed d(T) + d(M on odd-degree vertices)",
            insts.len()
        ),
    }
}

fn criterion_5(solved: &[Solved]) -> Outcome {
    let (pa, da) = first_failure(solved, |s| s.numbering_ok);
    let (pc, dc) = first_failure(solved, |s| s.chained_ok);
    Outcome {
        id: "5",
        title: "numbering properties and chained-evens bound",
        passed: pa && pc,
        detail: format!("properties: {da}; chained: {dc}"),
    }
}

const T2_TEXT: [&str; 8] = [
    "3H 4A 5H 2A 6A 8H 7H",
    "4H 3A 6A 1H 5H 7A 8H",
    "1A 2H 7H 4A 8A 6H 5A",
    "2A 1H 8A 3H 7H 5A 6A",
    "7H 8A 1A 6H 2A 4H 3H",
    "8H 7A 2H 5A 1H 3A 4H",
    "5A 6H 3A 8H 4A 2H 1A",
    "6A 5H 4H 7A 3H 1A 2A",
];

fn criterion_6() -> Outcome {
    let half = build_t2();
    let mut problems = Vec::new();
    for (t, line) in T2_TEXT.iter().enumerate() {
        let got: Vec<String> = (0..HALF).map(|s| half.get(t, s).unwrap().to_string()).collect();
        if got.join(" ") != *line {
            problems.push(format!("row {} differs", t + 1));
        }
        let v: Vec<Venue> = (0..HALF).map(|s| half.get(t, s).unwrap().venue).collect();
        if v.windows(3).any(|w| w[0] == w[1] && w[1] == w[2]) {
            problems.push(format!("row {} has three equal venues", t + 1));
        }
        if v[0] == v[1] {
            problems.push(format!("row {} starts HH or AA", t + 1));
        }
        if v[0] != v[HALF - 1] {
            problems.push(format!("row {} ends differ", t + 1));
        }
    }
    match mirror_concat(&half).map(|f| f.into_schedule()) {
        Ok(Ok(s)) => {
            if !validate_all(&s, 2).is_empty() {
                problems.push("mirrored schedule fails validation".into());
            }
        }
        _ => problems.push("mirror failed".into()),
    }
    Outcome {
        id: "6",
        title: "eight-team fixture and its mirror",
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            "grid equal cell for cell, 14 slots feasible".into()
        } else {
            problems.join("; ")
        },
    }
}

fn criterion_7() -> Outcome {
    let r = remaining_opponents(30).unwrap();
    let one_based = |t: usize| -> BTreeSet<usize> { r.of(t - 1).iter().map(|x| x + 1).collect() };
    let seven_ok = one_based(7) == BTreeSet::from([4, 5, 6, 8, 9, 10, 12]);
    let eight_ok = one_based(8) == BTreeSet::from([3, 5, 6, 7, 9, 10, 11]);
    let sym_ok = [30, 34, 38].iter().all(|&n| {
        let r = remaining_opponents(n).unwrap();
        r.is_symmetric() && (0..n - 8).all(|t| r.of(t).len() == 7)
    });
    Outcome {
        id: "7",
        title: "remaining-opponent sets",
        passed: seven_ok && eight_ok && sym_ok,
        detail: format!("team 7 {seven_ok}, team 8 {eight_ok}, symmetric {sym_ok}"),
    }
}

fn criterion_8() -> Outcome {
    let mut insts = vec![Instance::parse("4\n0 1 2 3\n1 0 2 3\n2 2 0 3\n3 3 3 0").unwrap()];
    insts.extend((0..2).map(|k| random_euclidean(4, 100, 8_000 + k)));
    let mut problems = Vec::new();
    for (k, inst) in insts.iter().enumerate() {
        let gb = GraphBounds::compute(inst);
        match solve(inst, SolveOptions::default()) {
            Ok(sol) => {
                if sol.report.method != Method::Oracle {
                    problems.push(format!("instance {k} not routed to the oracle"));
                }
                if sol.report.total < gb.lb2() || !validate_all(&sol.schedule, 2).is_empty() {
                    problems.push(format!("instance {k} below lb2 or infeasible"));
                }
                let (best, _) = common::brute_four(inst);
                if best != Some(sol.report.total) {
                    problems.push(format!("instance {k}: {best:?} by enumeration vs {}", sol.report.total));
                }
            }
            Err(e) => problems.push(format!("instance {k}: {e}")),
        }
    }
    Outcome {
        id: "8",
        title: "four-team oracle routing and optimality",
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} instances", insts.len())
        } else {
            problems.join("; ")
        },
    }
}

fn criterion_9() -> Outcome {
    let mut bad = 0;
    let mut count = 0;
    for k in 0..1000u64 {
        let n = 4 + 2 * (k as usize % 20);
        let inst = random_euclidean(n, 1000, 9_000 + k);
        let gb = GraphBounds::compute(&inst);
        count += 1;
        bad += usize::from(gb.lb1() < gb.lb2());
    }
    Outcome {
        id: "9",
        title: "lb1 >= lb2",
        passed: bad == 0,
        detail: format!("{count} instances, {bad} violations"),
    }
}

fn main() {
    let solved = solve_suite();
    let small = small_instances();
    let results = [
        criterion_1(&solved),
        criterion_2(&solved),
        criterion_3(&solved),
        criterion_4a(&small),
        criterion_4b(&small),
        criterion_4c(&small),
        criterion_5(&solved),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    for r in &results {
        println!(
            "criterion {:<3} {:<4} {}: {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
