//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p binlab --test acceptance`. The process exits
//! non-zero when the set of failing criteria differs from `KNOWN_FAILURES`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use binlab::classify::{classify, classify_broad, select_solver, Broad, Fine};
use binlab::decompose::{arc_decompose, check_raked_neighbors, deg_decompose, layer_stats, residual_sizes};
use binlab::lang::{
    aux_claim_holds, aux_constants, families, parse_loops, structural_simplicity, LanguageFamily, Simplicity,
};
use binlab::local::{run_sync, ArcProgram, DegProgram, IdAssignment};
use binlab::oracle::{dp_feasible, dp_solve, exhaustive_solve};
use binlab::solve::layered::{solve_factor, solve_quasi};
use binlab::solve::{solve_auto, verify};
use binlab::tree::{diameter, generate, induced_components};
use binlab::{Color, ColoredTree, ConstraintSet, Problem, StructureBudget, TreeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot pass as stated; see the detail line they print.
const KNOWN_FAILURES: &[usize] = &[8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn set(k: usize, xs: &[usize]) -> ConstraintSet {
    ConstraintSet::from_elems(k, xs.iter().copied()).unwrap()
}

fn mask_set(k: usize, mask: u32) -> ConstraintSet {
    ConstraintSet::from_elems(k, (0..=k).filter(|i| mask >> i & 1 == 1)).unwrap()
}

fn sample_tree(rng: &mut ChaCha8Rng, n_lo: usize, n_hi: usize, cap_lo: usize, cap_hi: usize) -> ColoredTree {
    let n = rng.gen_range(n_lo..=n_hi);
    let cap = rng.gen_range(cap_lo..=cap_hi);
    let t = generate(TreeKind::Random { cap }, n, rng.gen()).unwrap();
    if rng.gen_bool(0.5) {
        t.swapped_colors()
    } else {
        t
    }
}

/// Least squares `y = a + b x`.
fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

fn r_squared(x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let ss_res: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    }
}

fn c1_shift() -> Outcome {
    let x = set(20, &[5, 15]);
    let golden: &[(usize, &[usize])] = &[
        (1, &[4, 5, 14, 15]),
        (2, &[3, 4, 5, 13, 14, 15]),
        (3, &[2, 3, 4, 5, 12, 13, 14, 15]),
        (4, &[1, 2, 3, 4, 5, 11, 12, 13, 14, 15]),
        (5, &[0, 1, 2, 3, 4, 5, 10, 11, 12, 13, 14, 15]),
        (6, &[0, 1, 2, 3, 4, 5, 9, 10, 11, 12, 13, 14]),
        (7, &[0, 1, 2, 3, 4, 5, 8, 9, 10, 11, 12, 13]),
        (10, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]),
        (15, &[0, 1, 2, 3, 4, 5]),
    ];
    let mut bad = Vec::new();
    for &(k, want) in golden {
        let got = x.shift(k).unwrap();
        if got != set(20 - k, want) {
            bad.push(format!("k={k}: {:?}", got.elements()));
        }
    }
    outcome(bad.is_empty(), format!("{} rows checked; mismatches: {:?}", golden.len(), bad))
}

fn c2_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let problems: Vec<Problem> = (2..=4)
        .flat_map(|d| (2..=4).map(move |delta| (d, delta)))
        .flat_map(|(d, delta)| {
            (0..1u32 << (d + 1)).flat_map(move |wm| {
                (0..1u32 << (delta + 1))
                    .map(move |bm| Problem::new(mask_set(d, wm), mask_set(delta, bm)).unwrap())
            })
        })
        .collect();
    let (mut instances, mut feasible, mut mismatches) = (0usize, 0usize, Vec::new());
    for _ in 0..200 {
        let t = sample_tree(&mut rng, 2, 9, 2, 8);
        for p in &problems {
            instances += 1;
            let brute = exhaustive_solve(&t, p).is_ok();
            let dp = dp_feasible(&t, p);
            if brute {
                feasible += 1;
                if dp_solve(&t, p).map(|lab| verify(&t, p, &lab).is_ok()) != Ok(true) {
                    mismatches.push(format!("dp_solve failed on feasible n={} {:?}", t.len(), p));
                }
            }
            if dp != brute {
                mismatches.push(format!("n={} {}/{}", t.len(), p.white, p.black));
            }
        }
    }
    outcome(
        instances >= 10_000 && mismatches.is_empty(),
        format!(
            "{instances} instances ({} problems x 200 trees), {feasible} feasible, {} mismatches {:?}",
            problems.len(),
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn c3_solver_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let budget = StructureBudget::default();
    let mut strategies: BTreeMap<String, usize> = BTreeMap::new();
    let (mut fallbacks, mut feasible, mut mismatches) = (0usize, 0usize, Vec::new());
    for _ in 0..10_000 {
        let t = sample_tree(&mut rng, 2, 14, 2, 5);
        let (d, delta) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let p = Problem::new(
            mask_set(d, rng.gen_range(0..1 << (d + 1))),
            mask_set(delta, rng.gen_range(0..1 << (delta + 1))),
        )
        .unwrap();
        let oracle = dp_feasible(&t, &p);
        feasible += usize::from(oracle);
        match solve_auto(&t, &p, &budget) {
            Ok(report) => {
                *strategies.entry(report.plan.strategy.to_string()).or_default() += 1;
                fallbacks += usize::from(report.fallback.is_some());
                if !oracle || verify(&t, &p, &report.solved.labeling).is_err() {
                    mismatches.push(format!("{}/{} n={}", p.white, p.black, t.len()));
                }
            }
            Err(_) if oracle => mismatches.push(format!("missed {}/{} n={}", p.white, p.black, t.len())),
            Err(_) => {}
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "10000 instances, {feasible} feasible, {} mismatches {:?}; strategies {:?}; oracle fallbacks {fallbacks}",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>(),
            strategies
        ),
    )
}

fn c4_deg_shrinkage() -> Outcome {
    let (s, t) = (10, 10);
    let n = 100_000;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..100u64 {
        // even seeds: capped random attachment; odd seeds: ragged regular
        // trees with degrees above the thresholds, ids shuffled
        let tree = if seed % 2 == 0 {
            generate(TreeKind::Random { cap: rng.gen_range(11..=100) }, n, seed).unwrap()
        } else {
            let (white, black) = (rng.gen_range(11..=40), rng.gen_range(11..=40));
            let t = generate(TreeKind::Regular { white, black, depth: None }, n, 0).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            t.relabeled(&perm)
        };
        let dec = deg_decompose(&tree, s, t);
        let g2 = residual_sizes(&dec).get(2).copied().unwrap_or(0);
        worst = worst.max(g2 as f64 / n as f64 * (s * t) as f64);
        if g2 * s * t > n + 2 * s * t {
            bad.push((seed, g2));
        }
    }
    outcome(
        bad.is_empty(),
        format!("100 trees (50 random, 50 regular), n=1e5; max |G_2|*st/n = {worst:.3}; violations {bad:?}"),
    )
}

fn c5_arc_scaling() -> Outcome {
    let sizes = [1_000usize, 10_000, 100_000, 1_000_000];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut at_top = BTreeMap::new();
    let mut table = Vec::new();
    for s in [3usize, 10, 50] {
        let mut row = Vec::new();
        for &n in &sizes {
            let t = generate(TreeKind::Regular { white: s, black: s, depth: None }, n, 0).unwrap();
            let layers = arc_decompose(&t, 1, s).layer_count;
            xs.push((n as f64).ln() / (s as f64).ln());
            ys.push(layers as f64);
            row.push(layers);
            if n == 1_000_000 {
                at_top.insert(s, layers);
            }
        }
        table.push(format!("s={s}: {row:?}"));
    }
    let (_, c0) = ols(&xs, &ys);
    let c1 = xs.iter().zip(&ys).map(|(x, y)| y - c0 * x).fold(f64::MIN, f64::max);
    let halved = 2 * at_top[&50] <= at_top[&3];
    outcome(
        c0 <= 10.0 && c1 <= 10.0 && halved,
        format!(
            "layers {}; fit layers <= {c0:.2}*log_s n + {c1:.2}; n=1e6: s=50 -> {}, s=3 -> {}",
            table.join(", "),
            at_top[&50],
            at_top[&3]
        ),
    )
}

fn c6_raked_neighbors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0usize;
    let mut skipped = 0usize;
    let mut bad = Vec::new();
    for i in 0..1000 {
        let t = sample_tree(&mut rng, 50, 1000, 3, 15);
        let delta = t.max_degree();
        for (r, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            if delta < k + 1 {
                skipped += 1;
                continue;
            }
            let dec = arc_decompose(&t, r, delta - k + 1);
            checks += 1;
            if let Err(v) = check_raked_neighbors(&dec, &t, delta, k, r) {
                bad.push(format!("tree {i} (r,k)=({r},{k}): {}", v.detail));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{checks} checks on 1000 trees ({skipped} skipped for Delta <= k), {} violations {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn c7_diameter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut comps = 0usize;
    let mut tightest = 0.0f64;
    let mut bad = Vec::new();
    for i in 0..1000 {
        let t = sample_tree(&mut rng, 20, 2000, 3, 14);
        let n = t.len();
        for (s, tt) in [(2, 2), (5, 3), (10, 10)] {
            let keep = |v: usize| match t.color(v) {
                Color::White => t.degree(v) == s,
                Color::Black => t.degree(v) == tt,
            };
            for comp in induced_components(&t, keep) {
                comps += 1;
                let diam = diameter(&t, &comp).unwrap() as f64;
                let bound = 4.0 * n as f64 / (s + tt) as f64 + 4.0;
                tightest = tightest.max(diam / bound);
                if diam > bound {
                    bad.push(format!("tree {i} (s,t)=({s},{tt}) diameter {diam}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{comps} components; max diameter/bound = {tightest:.3}; violations {bad:?}"),
    )
}

fn c8_classifier_golden() -> Outcome {
    let budget = StructureBudget::default();
    let fam = |f: &LanguageFamily, k| f.set_at_degree(k).unwrap();
    let (split, matching) = (families::splitting(), families::matching());
    let class = |w: ConstraintSet, b: ConstraintSet| classify(&Problem::new(w, b).unwrap(), &budget);
    let mut lines = Vec::new();
    let mut ok = true;
    let mut expect = |name: String, got: String, want: &str| {
        let hit = got == want;
        ok &= hit;
        lines.push(format!("{name}: {got}{}", if hit { "" } else { " (MISMATCH)" }));
    };
    expect("splitting 2/2".into(), class(fam(&split, 2), fam(&split, 2)).to_string(), "linear");
    expect("splitting 5/4".into(), class(fam(&split, 5), fam(&split, 4)).to_string(), "log log_d");
    for d in [2, 3, 5, 9] {
        expect(
            format!("matching {d}/2"),
            class(fam(&matching, d), fam(&matching, 2)).to_string(),
            "linear",
        );
    }
    expect("matching 5/5".into(), class(fam(&matching, 5), fam(&matching, 5)).to_string(), "log log_delta");

    // the final-branch family W = {d-1}, B = {1}: the broad table puts it in
    // a linear row, so the fine class is never consulted
    let mut final_branch = Vec::new();
    for (d, delta) in [(3, 3), (5, 4), (8, 8), (20, 20)] {
        let c = class(set(d, &[d - 1]), set(delta, &[1]));
        final_branch.push(format!("({d},{delta})->{c}"));
        if c.broad != Broad::Log || c.fine != Some(Fine::LogN) {
            ok = false;
        }
    }
    lines.push(format!("W={{d-1}},B={{1}}: {}", final_branch.join(" ")));

    // a family that does reach the final branch: W = {d-2, d-1}, B = {1, 2}
    let sub_budget = StructureBudget::new(budget.epsilon, 2).unwrap();
    let p = Problem::new(set(20, &[18, 19]), set(20, &[1, 2])).unwrap();
    let c = classify(&p, &sub_budget);
    let plan = select_solver(&p, &c, &sub_budget);
    lines.push(format!(
        "substitute W={{d-2,d-1}},B={{1,2}} d=delta=20, C=2: {c}, broad row {}, plan {plan}",
        classify_broad(&p.white, &p.black)
    ));
    outcome(ok, lines.join("; "))
}

fn c9_language_constants() -> Outcome {
    let corpus = [
        "01:1:-:-:0",
        "010:0:-:-:-",
        "11:1:-:-:0",
        "011:1:-:-:-",
        "0:1:-:-:0",
        "01:0:-:0:-",
        "-:10:-:0:-",
        "1:-:0:01:-",
        "-:-:1:-:-",
        "0:01:1:10:0",
        "1:0:-:-:1",
        "00:0:1:0:00",
        "-:110:-:0:1",
    ];
    let mut words = 0usize;
    let mut bad = Vec::new();
    for text in corpus {
        let l = parse_loops(text).unwrap().remove(0);
        let aux = aux_constants(&l);
        for len in aux.min_n..=aux.min_n + 256 {
            if let Some(w) = l.word_at_length(len) {
                words += 1;
                if !aux_claim_holds(&aux, &w) {
                    bad.push(format!("{text} at length {len}"));
                }
            }
        }
    }
    let budget = StructureBudget::default();
    let verdict = structural_simplicity(&families::floor_log2(), 70_000, &budget).unwrap();
    let (not_simple, desc) = match verdict {
        Simplicity::NotSimple { degree, epsilon, cap, .. } => {
            (true, format!("floor-log2 not simple: fails at degree {degree} (epsilon={epsilon}, C={cap})"))
        }
        Simplicity::Simple { .. } => (false, "floor-log2 reported simple".to_string()),
    };
    outcome(
        bad.is_empty() && not_simple,
        format!("{} loops, {words} words checked, {} claim failures {bad:?}; {desc}", corpus.len(), bad.len()),
    )
}

fn c10_engine_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_ratio = 0.0f64;
    let mut bad = Vec::new();
    for i in 0..500 {
        let t = sample_tree(&mut rng, 10, 3000, 2, 12);
        let ids = IdAssignment::Permuted(i);
        let (r, delta) = (rng.gen_range(1..=3), rng.gen_range(2..=8));
        let dec = arc_decompose(&t, r, delta);
        match run_sync(&t, &ArcProgram { r, delta }, &ids, 1_000_000) {
            Ok(trace) => {
                let layers: Vec<u32> = trace.outputs.iter().map(|o| o.0).collect();
                let reasons: Vec<_> = trace.outputs.iter().map(|o| o.1).collect();
                if layers != dec.layer_of || reasons != dec.reason {
                    bad.push(format!("tree {i}: ARC({r},{delta}) layers differ"));
                }
                let ratio = trace.rounds_used as f64 / (r * dec.layer_count) as f64;
                worst_ratio = worst_ratio.max(ratio);
                if trace.rounds_used > 3 * r * dec.layer_count {
                    bad.push(format!("tree {i}: {} rounds for {} layers", trace.rounds_used, dec.layer_count));
                }
            }
            Err(e) => bad.push(format!("tree {i}: {e}")),
        }
        let (s, tt) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let deg = deg_decompose(&t, s, tt);
        match run_sync(&t, &DegProgram { s, t: tt }, &ids, 1_000_000) {
            Ok(trace) if trace.outputs == deg.layer_of => {}
            Ok(_) => bad.push(format!("tree {i}: DEG({s},{tt}) layers differ")),
            Err(e) => bad.push(format!("tree {i}: {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!("500 trees; max rounds/(r*layers) = {worst_ratio:.3}; {} mismatches {bad:?}", bad.len()),
    )
}

fn c11_round_trend() -> Outcome {
    let sizes = [1_000usize, 3_000, 10_000, 30_000, 100_000, 300_000, 1_000_000];
    let mut lines = Vec::new();
    let mut ok = true;
    let cases: [(&str, usize, usize, usize); 2] = [("factor", 20, 5, 5), ("quasi", 50, 5, 50)];
    for (name, d, delta, base) in cases {
        let p = match name {
            "factor" => Problem::new(set(d, &[1]), set(delta, &[1])).unwrap(),
            _ => Problem::new(set(d, &[1]), set(delta, &[0, delta - 1])).unwrap(),
        };
        let mut ln_n = Vec::new();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for &n in &sizes {
            let t = generate(TreeKind::Regular { white: d, black: delta, depth: None }, n, 0).unwrap();
            let solved = match name {
                "factor" => solve_factor(&t, &p, 1, 1),
                _ => solve_quasi(&t, &p, 1, 1),
            };
            match solved {
                Ok(s) => {
                    let stats = layer_stats(s.decomposition.as_ref().unwrap());
                    ln_n.push((n as f64).ln());
                    x.push((n as f64).ln() / (base as f64).ln());
                    y.push(stats.rounds_estimate as f64);
                }
                Err(e) => {
                    ok = false;
                    lines.push(format!("{name} n={n}: {e}"));
                }
            }
        }
        if y.len() < 3 {
            ok = false;
            continue;
        }
        let (a, b) = ols(&x, &y);
        let resid: Vec<f64> = x.iter().zip(&y).map(|(u, v)| v - a - b * u).collect();
        let (_, resid_slope) = ols(&ln_n, &resid);
        let primary = b / (base as f64).ln();
        let pass = resid_slope.abs() < 0.2 * primary.abs();
        ok &= pass;
        lines.push(format!(
            "{name} regular({d},{delta}): rounds {:?}, slope {b:.3} per log_{base} n (R^2 {:.3}), residual slope {resid_slope:.2e} per ln n vs primary {primary:.3}",
            y,
            r_squared(&x, &y, a, b)
        ));
    }
    outcome(ok, lines.join("; "))
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "shift golden table", 1, c1_shift),
        (2, "oracle equivalence", 300, c2_oracle_equivalence),
        (3, "solver soundness and completeness", 300, c3_solver_completeness),
        (4, "DEG shrinkage", 60, c4_deg_shrinkage),
        (5, "ARC scaling", 600, c5_arc_scaling),
        (6, "raked neighbors", 120, c6_raked_neighbors),
        (7, "diameter bound", 120, c7_diameter),
        (8, "classifier golden set", 60, c8_classifier_golden),
        (9, "language constants", 60, c9_language_constants),
        (10, "LOCAL engine equivalence", 300, c10_engine_equivalence),
        (11, "factor/quasi round trend", 600, c11_round_trend),
    ];
    let mut failed = Vec::new();
    for (id, name, budget_s, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget_s);
        let pass = out.pass && in_time;
        if !pass {
            failed.push(id);
        }
        println!(
            "criterion {id:>2} [{name}]: {} ({:.2}s, budget {budget_s}s) {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            out.detail
        );
    }
    let unexpected: Vec<usize> = failed.iter().copied().filter(|c| !KNOWN_FAILURES.contains(c)).collect();
    let fixed: Vec<usize> = KNOWN_FAILURES.iter().copied().filter(|c| !failed.contains(c)).collect();
    println!("failing: {failed:?}; known unattainable: {KNOWN_FAILURES:?}");
    if unexpected.is_empty() && fixed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures {unexpected:?}, unexpectedly passing {fixed:?}");
        ExitCode::FAILURE
    }
}
