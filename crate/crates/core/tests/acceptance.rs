//! Acceptance run: one line per criterion, then a non-zero exit if any failed.

use std::time::{Duration, Instant};

use fanocalc::catalog::report::render;
use fanocalc::geometry::flags;
use fanocalc::projection::type1_nodes_for;
use fanocalc::series::format_rational;
use fanocalc::*;

/// Every comparison below is exact integer or rational equality.
const TOLERANCE: i64 = 0;
/// Budget for the whole suite; this run must leave most of it to the rest.
const TIME_BUDGET: Duration = Duration::from_secs(60);
/// Coefficients checked for non-negativity.
const HS_ORDER: usize = 30;

struct Outcome {
    pass: bool,
    detail: String,
}

fn exact(a: i64, b: i64) -> bool {
    (a - b).abs() <= TOLERANCE
}

fn printed(r: &FamilyRecord) -> Expected {
    r.expected.clone().unwrap_or_default()
}

fn c1_table1_h21(c: &Catalog) -> Outcome {
    let rows: Vec<&FamilyRecord> = c.records().filter(|r| r.codim == 1).collect();
    let mut bad = Vec::new();
    for r in &rows {
        let h = h21_hypersurface(r.ambient.weights(), r.model.degrees()[0]).unwrap_or(-1);
        if !printed(r).h21.is_some_and(|p| exact(h, p)) {
            bad.push(r.key.to_string());
        }
    }
    let anchors = [(293, 120), (20521, 30), (337, 49)].iter().all(|&(g, want)| {
        let r = c.by_grdb(g)[0];
        h21_hypersurface(r.ambient.weights(), r.model.degrees()[0]).ok() == Some(want)
    });
    Outcome {
        pass: rows.len() == 95 && bad.is_empty() && anchors,
        detail: format!(
            "{}/{} rows exact, anchors 120/30/49 {}{}",
            rows.len() - bad.len(),
            rows.len(),
            if anchors { "ok" } else { "FAILED" },
            list(&bad)
        ),
    }
}

fn c2_euler(c: &Catalog, report: &VerificationReport) -> Outcome {
    let e: Vec<&ReportEntry> = report.entries.iter().filter(|x| x.field == Field::E).collect();
    let matched = e.iter().filter(|x| x.status == Status::Match).count();
    let bad: Vec<String> = report
        .mismatches()
        .map(|x| format!("{} {}", x.key(), x.field))
        .collect();
    let skipped: Vec<String> = e
        .iter()
        .filter(|x| matches!(x.status, Status::Skipped(_)))
        .map(|x| x.key().to_string())
        .collect();
    let resolver = CascadeResolver::new(c);
    let anchors = [(293, -236), (20522, -40), (20523, -30), (6858, -58)]
        .iter()
        .all(|&(g, want)| primary_route(c.by_grdb(g)[0], &resolver).map(|r| r.e).ok() == Some(want));
    Outcome {
        pass: bad.is_empty() && anchors && matched > 0,
        detail: format!(
            "{matched} e entries exact, {} mismatches, anchors {}, skipped by flag: {}",
            bad.len(),
            if anchors { "ok" } else { "FAILED" },
            skipped.join(" ")
        ),
    }
}

fn c3_blache(c: &Catalog) -> Outcome {
    let resolver = CascadeResolver::new(c);
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in c.records().filter(|r| r.codim <= 2) {
        let EquationModel::CompleteIntersection { degrees } = &r.model else {
            continue;
        };
        if r.ambient.weights().iter().all(|&w| w == 1) {
            continue;
        }
        checked += 1;
        let ok = compute_basket_ci(&r.ambient, degrees)
            .and_then(|b| euler_topological(&euler_orbifold_ci(&r.ambient, degrees), &b))
            .and_then(|e| primary_route(r, &resolver).map(|route| exact(e, route.e)));
        if !matches!(ok, Ok(true)) {
            bad.push(r.key.to_string());
        }
    }
    let amb = WeightedSpace::new(vec![1, 4, 6, 7, 11]).unwrap();
    let e_orb = euler_orbifold_ci(&amb, &[28]);
    let e = compute_basket_ci(&amb, &[28]).and_then(|b| euler_topological(&e_orb, &b));
    let anchor = format_rational(&e_orb) == "-6385/66" && e.ok() == Some(-94);
    Outcome {
        pass: bad.is_empty() && anchor && checked >= 170,
        detail: format!(
            "{}/{checked} baskets give the cascade or Griffiths e, X28 e_orb -6385/66 e -94 {}{}",
            checked - bad.len(),
            if anchor { "ok" } else { "FAILED" },
            list(&bad)
        ),
    }
}

fn c4_nodes(c: &Catalog) -> Outcome {
    let mut rows = 0;
    let mut bad = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for r in c.records().filter(|r| r.codim == 2) {
        let steps: Vec<&ProjectionStep> = r
            .projections
            .iter()
            .filter(|s| s.kind == ProjectionKind::I)
            .collect();
        if steps.is_empty() {
            continue;
        }
        rows += 1;
        for s in steps {
            match type1_nodes_for(r, s) {
                Ok(n) if n == s.nodes => {
                    seen.insert(n);
                }
                _ => bad.push(r.key.to_string()),
            }
        }
    }
    let anchors = [9, 12, 15, 28].iter().all(|n| seen.contains(n));
    Outcome {
        pass: rows == 66 && bad.is_empty() && anchors,
        detail: format!(
            "{rows} Type I rows, {} disagreements, anchors 9/12/15/28 {}{}",
            bad.len(),
            if anchors { "ok" } else { "FAILED" },
            list(&bad)
        ),
    }
}

fn c5_multipath(c: &Catalog) -> Outcome {
    let resolver = CascadeResolver::new(c);
    let mut rows = 0;
    let mut bad = Vec::new();
    for r in c.records().filter(|r| r.projections.len() >= 2) {
        rows += 1;
        match resolver.resolve(&r.key) {
            Ok(res) if res.consistent() && res.paths.len() >= 2 => {}
            _ => bad.push(r.key.to_string()),
        }
    }
    Outcome {
        pass: rows > 0 && bad.is_empty(),
        detail: format!(
            "{rows} rows with several centres, {} with disagreeing paths{}",
            bad.len(),
            list(&bad)
        ),
    }
}

fn h21_for_moduli(r: &FamilyRecord, resolver: &CascadeResolver) -> Option<i64> {
    let printed = printed(r).h21;
    match primary_route(r, resolver) {
        Ok(_) if r.has_flag(flags::EXCLUDE_EULER_CHECK) => printed,
        Ok(route) => Some(route.h21),
        Err(_) if r.has_flag(flags::H21_DECLARED) => printed,
        Err(_) => None,
    }
}

fn c6_moduli(c: &Catalog) -> Outcome {
    let resolver = CascadeResolver::new(c);
    let h1t = |r: &FamilyRecord| -> Option<(i64, i64)> {
        let h21 = h21_for_moduli(r, &resolver)?;
        let m = moduli(r, h21, &r.resolved_basket().ok()?).ok()?;
        Some((m.alpha, m.h1_tangent))
    };
    let mut notes = Vec::new();
    let mut pass = true;
    for (g, want) in [(3508, 34), (37, 23), (392, 23)] {
        let got = h1t(c.by_grdb(g)[0]).map(|x| x.1);
        pass &= got == Some(want);
        notes.push(format!("{g}→{}", got.map_or("-".into(), |v| v.to_string())));
    }
    let mut codim4 = Vec::new();
    for r in c.records().filter(|r| r.codim == 4) {
        let got = h1t(r);
        pass &= got.is_some_and(|(alpha, h)| alpha == 13 && printed(r).h1t == Some(h));
        codim4.push(got.map_or(-1, |x| x.1));
    }
    codim4.sort_unstable();
    pass &= codim4 == [19, 20, 21, 21, 22, 23];
    Outcome {
        pass,
        detail: format!("{}, codim 4 with alpha 13: {codim4:?}", notes.join(" ")),
    }
}

fn c7_oracle_identity(c: &Catalog) -> (Outcome, Vec<String>) {
    let mut identity_fail = Vec::new();
    let mut report = Vec::new();
    let mut rows = 0;
    for r in c.records().filter(|r| r.codim == 1) {
        rows += 1;
        let (w, d) = (r.ambient.weights(), r.model.degrees()[0]);
        let oracle = jacobian_moduli_oracle(w, d);
        let formula = h21_hypersurface(w, d).and_then(|h| moduli(r, h, &r.resolved_basket()?));
        let (Ok(oracle), Ok(formula)) = (oracle, formula) else {
            identity_fail.push(r.key.to_string());
            continue;
        };
        if oracle != formula.h1_tangent {
            identity_fail.push(r.key.to_string());
        }
        if let Some(p) = printed(r).h1t {
            if p != oracle {
                report.push(format!(
                    "{:>6}  computed {oracle:>4}  printed {p:>4}  diff {:+}",
                    r.key,
                    oracle - p
                ));
            }
        }
    }
    let quartic = report
        .iter()
        .any(|l| l.trim_start().starts_with("20521 ") && l.contains("computed   45  printed   43"));
    (
        Outcome {
            pass: rows == 95 && identity_fail.is_empty() && quartic,
            detail: format!(
                "identity dim M^d = h21 + alpha - 1 holds on {}/{rows}; {} divergences from the printed column reported{}",
                rows - identity_fail.len(),
                report.len(),
                list(&identity_fail)
            ),
        },
        report,
    )
}

fn c8_properties(c: &Catalog) -> Outcome {
    let mut failures = Vec::new();
    // Milnor symmetry.
    for r in c.records().filter(|r| r.codim == 1) {
        let (w, d) = (r.ambient.weights(), r.model.degrees()[0]);
        let sigma = (5 * d as i64 - 2 * r.ambient.sum()) as usize;
        let ok = milnor_series(w, d, sigma + 1)
            .is_ok_and(|m| (0..=sigma).all(|k| m.coefficient(k).ok() == m.coefficient(sigma - k).ok()));
        if !ok {
            failures.push(format!("symmetry {}", r.key));
        }
    }
    // Hilbert series non-negativity on every row with equations.
    let mut hs_rows = 0;
    for r in c.records() {
        if let Ok(hs) = r.hilbert_series(HS_ORDER) {
            hs_rows += 1;
            if !hs.is_nonnegative_integral() {
                failures.push(format!("hilbert {}", r.key));
            }
        } else if !matches!(r.model, EquationModel::External) {
            failures.push(format!("hilbert {}", r.key));
        }
    }
    // Bezout node integrality and Blache integrality.
    for r in c.records() {
        for s in r
            .projections
            .iter()
            .filter(|s| s.kind == ProjectionKind::I && r.codim == 2)
        {
            if type1_nodes_for(r, s).is_err() {
                failures.push(format!("nodes {}", r.key));
            }
        }
        if let EquationModel::CompleteIntersection { degrees } = &r.model {
            if r.ambient.weights().iter().any(|&w| w > 1) {
                let ok = compute_basket_ci(&r.ambient, degrees)
                    .and_then(|b| euler_topological(&euler_orbifold_ci(&r.ambient, degrees), &b));
                if ok.is_err() {
                    failures.push(format!("blache {}", r.key));
                }
            }
        }
    }
    // Round trip and deterministic reports.
    let again = Catalog::load(c.to_jsonl().as_bytes());
    if !again
        .as_ref()
        .is_ok_and(|a| a == c && a.to_jsonl() == c.to_jsonl())
    {
        failures.push("round trip".into());
    }
    let renders: Vec<String> = [1, 0, 4]
        .iter()
        .map(|&n| {
            render(
                &verify_all(c, &VerifyOptions::default().with_parallelism(n)),
                ReportFormat::Json,
            )
        })
        .collect();
    if renders.windows(2).any(|w| w[0] != w[1]) {
        failures.push("determinism".into());
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "symmetry on 95 rows, non-negativity to t^{HS_ORDER} on {hs_rows} rows, node and Blache integrality, round trip, determinism across 3 pool sizes{}",
            list(&failures)
        ),
    }
}

fn list(xs: &[String]) -> String {
    if xs.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", xs.join(", "))
    }
}

fn main() {
    let start = Instant::now();
    let c = Catalog::shipped();
    let headline = verify_all(&c, &VerifyOptions::fields(&[Field::H21, Field::E]));
    let (c7, divergences) = c7_oracle_identity(&c);
    let results = [
        ("hypersurface h21 from the Milnor algebra", c1_table1_h21(&c)),
        ("e column on every computed row", c2_euler(&c, &headline)),
        ("Blache cross-check", c3_blache(&c)),
        ("node formula on Type I codim 2 rows", c4_nodes(&c)),
        ("cascade multi-path agreement", c5_multipath(&c)),
        ("moduli anchors", c6_moduli(&c)),
        ("oracle identity and h1(T) report", c7),
        ("property suites", c8_properties(&c)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!(
            "{} criterion {}: {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        failed += !o.pass as usize;
    }
    println!("h1(T) divergences, Jacobian oracle against the printed column:");
    for line in &divergences {
        println!("  {line}");
    }
    let elapsed = start.elapsed();
    let in_budget = elapsed < TIME_BUDGET;
    println!(
        "{} runtime {:.2}s of {}s budget",
        if in_budget { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        TIME_BUDGET.as_secs()
    );
    failed += !in_budget as usize;
    println!(
        "{} of {} criteria passed",
        results.len() + 1 - failed,
        results.len() + 1
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
