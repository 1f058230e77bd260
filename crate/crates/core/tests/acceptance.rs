//! Exit criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `--nocapture` to see them.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use treemix_core::chain::{
    down_kernel, down_up_kernel, down_up_kernel_conjugated, is_reversible, plancherel_measure,
    up_kernel,
};
use treemix_core::operators::commutator_check;
use treemix_core::spectral::{
    geometric_tail, limit_value, max_separation, separation_bruteforce_curve, separation_eigen,
    separation_float, separation_recurrence, separation_updown, separation_updown_bruteforce,
    spectrum, total_variation,
};
use treemix_core::tree::tree_stats;
use treemix_core::{count_trees, CanonicalTree, Catalog, RationalMatrix};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Prints the verdict line and fails the test on a miss.
fn report(id: u32, title: &str, failures: &[String], elapsed: Duration, budget: Option<Duration>) {
    let over_budget = budget.is_some_and(|b| elapsed > b);
    let ok = failures.is_empty() && !over_budget;
    let timing = match budget {
        Some(b) => format!("{:.2?} of {:.0?}", elapsed, b),
        None => format!("{:.2?}", elapsed),
    };
    println!(
        "criterion {id:>2} [{}] {title} ({timing})",
        if ok { "PASS" } else { "FAIL" }
    );
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(
        failures.is_empty(),
        "criterion {id}: {}",
        failures.join("; ")
    );
    assert!(
        !over_budget,
        "criterion {id} exceeded its runtime budget: {timing}"
    );
}

#[test]
fn criterion_01_tree_counts() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let expected = [1u32, 1, 2, 4, 9, 20];
    for (n, &e) in (1..=6).zip(&expected) {
        if count_trees(n).unwrap() != BigUint::from(e) {
            failures.push(format!("count_trees({n}) != {e}"));
        }
    }
    let cat = Catalog::up_to(12).unwrap();
    for n in 1..=12 {
        let len = cat.table(n).unwrap().len();
        if BigUint::from(len) != count_trees(n).unwrap() {
            failures.push(format!(
                "n={n}: enumeration {len} vs Otter {}",
                count_trees(n).unwrap()
            ));
        }
    }
    report(
        1,
        "tree counts",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn criterion_02_worked_statistics() {
    let start = Instant::now();
    let cat = Catalog::up_to(4).unwrap();
    let expected = [(1u32, 1u32), (1, 2), (3, 3), (1, 6)];
    let mut failures = Vec::new();
    for (t, &(nw, m)) in cat.table(4).unwrap().iter().zip(&expected) {
        let s = tree_stats(t);
        if (s.n_weight.clone(), s.m.clone()) != (BigUint::from(nw), BigUint::from(m)) {
            failures.push(format!(
                "{t}: (n, m) = ({}, {}), expected ({nw}, {m})",
                s.n_weight, s.m
            ));
        }
    }
    report(
        2,
        "worked statistics on T_4",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_03_measure() {
    let start = Instant::now();
    let cat = Catalog::up_to(4).unwrap();
    let pi = plancherel_measure(&cat, 4).unwrap();
    let expected = [q(1, 18), q(1, 9), q(1, 2), q(1, 3)];
    let mut failures = Vec::new();
    if pi.probs() != expected {
        failures.push(format!("pi_4 = {:?}", pi.probs()));
    }
    report(
        3,
        "pi_4 = (1/18, 1/9, 1/2, 1/3)",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_04_kernel() {
    let start = Instant::now();
    let cat = Catalog::up_to(4).unwrap();
    let expected = RationalMatrix::from_rows(vec![
        vec![q(1, 6), q(1, 3), q(1, 2), q(0, 1)],
        vec![q(1, 6), q(1, 3), q(1, 2), q(0, 1)],
        vec![q(1, 18), q(1, 9), q(1, 2), q(1, 3)],
        vec![q(0, 1), q(0, 1), q(1, 2), q(1, 2)],
    ]);
    let composed = down_up_kernel(&cat, 4).unwrap();
    let conjugated = down_up_kernel_conjugated(&cat, 4).unwrap();
    let mut failures = Vec::new();
    if composed.matrix() != &expected {
        failures.push(format!("composed K_4 = {:?}", composed.matrix()));
    }
    if conjugated.matrix() != &expected {
        failures.push(format!("conjugated K_4 = {:?}", conjugated.matrix()));
    }
    report(
        4,
        "K_4 matches the displayed matrix by both constructions",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_05_commutation() {
    let start = Instant::now();
    let cat = Catalog::up_to(11).unwrap();
    let failures: Vec<String> = (1..=10)
        .filter(|&n| !commutator_check(&cat, n).unwrap())
        .map(|n| format!("PG - GP != {n} I"))
        .collect();
    report(
        5,
        "PG - GP = nI for n = 1..10",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn criterion_06_trace_identities() {
    let start = Instant::now();
    let cat = Catalog::up_to(8).unwrap();
    let mut failures = Vec::new();
    for n in 4..=8 {
        let k = down_up_kernel(&cat, n).unwrap();
        let spec = spectrum(n).unwrap();
        let mut power = RationalMatrix::identity(k.matrix().n_rows());
        for p in 1..=4u32 {
            power = power.mul(k.matrix());
            let (lhs, rhs) = (power.trace(), spec.power_trace(p));
            if lhs != rhs {
                failures.push(format!("n={n} p={p}: trace {lhs} vs {rhs}"));
            }
        }
        if n == 4 && k.matrix().trace() != q(3, 2) {
            failures.push("trace(K_4) != 3/2".into());
        }
    }
    report(
        6,
        "trace(K^p) = sum mult * lambda^p, n = 4..8, p = 1..4",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_07_three_routes() {
    let start = Instant::now();
    let cat = Catalog::up_to(7).unwrap();
    let mut failures = Vec::new();
    for n in 4..=7 {
        let table = cat.table(n).unwrap();
        let path = table.index_of(&CanonicalTree::path(n).unwrap()).unwrap();
        let star = table.index_of(&CanonicalTree::star(n).unwrap()).unwrap();
        let brute = separation_bruteforce_curve(&cat, n, 25).unwrap();
        for r in 1..=25u64 {
            let b = &brute[r as usize];
            let e = separation_eigen(n, r).unwrap();
            let a = separation_recurrence(n, r).unwrap();
            if e != b.value || a != b.value {
                failures.push(format!(
                    "n={n} r={r}: eigen {e}, recurrence {a}, brute {}",
                    b.value
                ));
            }
            if !b.argmax.contains(&(path, star)) || !b.argmax.contains(&(star, path)) {
                failures.push(format!("n={n} r={r}: (path, star) not in argmax"));
            }
        }
    }
    report(
        7,
        "eigen = recurrence = brute force, n = 4..7, r = 1..25",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn criterion_08_up_down_identity() {
    let start = Instant::now();
    let cat = Catalog::up_to(6).unwrap();
    let mut failures = Vec::new();
    for n in 3..=7 {
        for r in 1..=20u64 {
            let du = separation_updown(n, r).unwrap();
            let ud = separation_eigen(n + 1, r + 1).unwrap();
            if du != ud {
                failures.push(format!("n={n} r={r}: {du} vs {ud}"));
            }
            if n <= 5 {
                let brute = separation_updown_bruteforce(&cat, n, r).unwrap().value;
                if brute != du {
                    failures.push(format!("n={n} r={r}: DU powers give {brute}, formula {du}"));
                }
            }
        }
    }
    report(
        8,
        "s*_DU(n, r) = s*(n+1, r+1) and matches DU powers",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_09_intertwining_and_balance() {
    let start = Instant::now();
    let cat = Catalog::up_to(9).unwrap();
    let mut failures = Vec::new();
    for n in 1..=8 {
        let pi = plancherel_measure(&cat, n).unwrap();
        if n >= 2 {
            let prev = plancherel_measure(&cat, n - 1).unwrap();
            if prev.push_forward(&up_kernel(&cat, n).unwrap()) != pi.probs() {
                failures.push(format!("pi_{} P_u != pi_{n}", n - 1));
            }
            if !is_reversible(&pi, &down_up_kernel(&cat, n).unwrap()) {
                failures.push(format!("K_{n} not reversible"));
            }
        }
        let next = plancherel_measure(&cat, n + 1).unwrap();
        if next.push_forward(&down_kernel(&cat, n + 1).unwrap()) != pi.probs() {
            failures.push(format!("pi_{} P_d != pi_{n}", n + 1));
        }
    }
    report(
        9,
        "intertwining and detailed balance, n <= 8",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_10_limit_convergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for c in [0.5f64, 1.0] {
        let limit = limit_value(c, 1e-15).unwrap().value;
        let gaps: Vec<f64> = [20usize, 40, 80, 160]
            .iter()
            .map(|&n| {
                let r = (c * (n * n) as f64).ceil() as u64;
                (separation_float(n, r).unwrap() - limit).abs()
            })
            .collect();
        println!(
            "    c={c}: limit {limit:.10}, gaps at n=20,40,80,160: {:?}",
            gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>()
        );
        if !gaps.windows(2).all(|w| w[1] < w[0]) {
            failures.push(format!("c={c}: gaps not decreasing {gaps:?}"));
        }
        if gaps[3] >= 2e-3 {
            failures.push(format!("c={c}: gap at n=160 is {:.3e} >= 2e-3", gaps[3]));
        }
    }
    report(
        10,
        "separation at r = ceil(c n^2) approaches the limit series",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(10)),
    );
}

#[test]
fn criterion_11_geometric_representation() {
    let start = Instant::now();
    let samples = 1_000_000u64;
    let exact = separation_eigen(6, 10).unwrap().to_f64().unwrap();
    let est = geometric_tail(6, 10, samples, 0).unwrap();
    let sigma = (exact * (1.0 - exact) / samples as f64).sqrt();
    println!("    exact {exact:.8}, estimate {est:.8}, sigma {sigma:.2e}");
    let mut failures = Vec::new();
    if (est - exact).abs() >= 4.0 * sigma {
        failures.push(format!("|{est} - {exact}| >= 4 sigma ({sigma})"));
    }
    report(
        11,
        "Monte Carlo P(T > 10) at n = 6 within 4 sigma",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_12_separation_properties() {
    let start = Instant::now();
    let cat = Catalog::up_to(7).unwrap();
    let mut failures = Vec::new();
    for n in 2..=7 {
        let pi = plancherel_measure(&cat, n).unwrap();
        let k = down_up_kernel(&cat, n).unwrap();
        let mut power = RationalMatrix::identity(k.matrix().n_rows());
        let mut s = Vec::with_capacity(21);
        for r in 0..=20 {
            if r > 0 {
                power = power.mul(k.matrix());
            }
            let sep = max_separation(&power, pi.probs()).value;
            let tv = total_variation(&power, pi.probs());
            if tv > sep {
                failures.push(format!("n={n} r={r}: TV {tv} > s* {sep}"));
            }
            s.push(sep);
        }
        for r in 0..20 {
            if s[r + 1] > s[r] {
                failures.push(format!("n={n}: s*({}) > s*({r})", r + 1));
            }
        }
        for r1 in 0..=20 {
            for r2 in 0..=(20 - r1) {
                if s[r1 + r2] > &s[r1] * &s[r2] {
                    failures.push(format!("n={n}: s*({r1}+{r2}) > s*({r1}) s*({r2})"));
                }
            }
        }
    }
    report(
        12,
        "monotonicity, submultiplicativity, TV bound, n <= 7, r <= 20",
        &failures,
        start.elapsed(),
        None,
    );
}
