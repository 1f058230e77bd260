//! Exact invariant suite at the default caps: counts up to n = 12, kernels
//! up to n = 7.

use num_bigint::BigUint;
use num_traits::One;

use treemix_core::chain::{
    down_kernel, down_up_kernel, down_up_kernel_conjugated, is_reversible, plancherel_measure,
    plancherel_measure_hook_form, up_down_kernel, up_down_kernel_conjugated, up_kernel,
    up_kernel_growth_form,
};
use treemix_core::operators::commutator_check;
use treemix_core::spectral::{
    geometric_tail_exact, separation_bruteforce_curve, separation_eigen, separation_recurrence,
    separation_updown, separation_updown_bruteforce, spectrum,
};
use treemix_core::tree::tree_stats;
use treemix_core::{choose2, count_trees, CanonicalTree, Catalog, Rational, RationalMatrix};

const COUNT_MAX: usize = 12;
const KERNEL_MAX: usize = 7;
const R_MAX: u64 = 25;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Counterexample on failure, a short summary on success.
type Outcome = Result<String, String>;

type CheckFn = fn(&Catalog) -> Outcome;

/// Runs every check and returns them with the first counterexample, if any.
pub fn run() -> (Vec<Check>, Option<String>) {
    let cat = match Catalog::up_to(COUNT_MAX) {
        Ok(c) => c,
        Err(e) => {
            let msg = format!("cannot enumerate trees: {e}");
            let check = Check {
                name: "enumeration",
                passed: false,
                detail: msg.clone(),
            };
            return (vec![check], Some(msg));
        }
    };
    let suite: [(&'static str, CheckFn); 11] = [
        ("tree counts", tree_counts),
        ("tree statistics", statistics),
        ("worked examples", worked_examples),
        ("measure", measure),
        ("commutation", commutation),
        ("kernels", kernels),
        ("intertwining and reversibility", balance),
        ("trace identities", traces),
        ("separation routes", routes),
        ("up-down identity", up_down),
        ("geometric representation", geometric),
    ];
    let mut first = None;
    let checks = suite
        .iter()
        .map(|(name, f)| {
            let outcome = f(&cat);
            if let (Err(e), None) = (&outcome, &first) {
                first = Some(format!("verify failed in {name}: {e}"));
            }
            Check {
                name,
                passed: outcome.is_ok(),
                detail: outcome.unwrap_or_else(|e| e),
            }
        })
        .collect();
    (checks, first)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ensure(ok: bool, counterexample: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(counterexample())
    }
}

fn lib<T>(r: treemix_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn tree_counts(cat: &Catalog) -> Outcome {
    for n in 1..=COUNT_MAX {
        let len = lib(cat.table(n))?.len();
        let t = lib(count_trees(n))?;
        ensure(BigUint::from(len) == t, || {
            format!("n={n}: enumeration gives {len} trees, counting recursion gives {t}")
        })?;
    }
    Ok(format!(
        "enumeration matches the counting recursion for n <= {COUNT_MAX}"
    ))
}

fn statistics(cat: &Catalog) -> Outcome {
    let mut fact = BigUint::one();
    let mut norm = BigUint::one();
    for n in 1..=COUNT_MAX {
        fact *= BigUint::from(n);
        if n >= 2 {
            norm *= BigUint::from(choose2(n));
        }
        let mut total = BigUint::ZERO;
        for t in lib(cat.table(n))?.iter() {
            let s = tree_stats(t);
            ensure(&s.m * s.hook_product() == fact, || {
                format!("{t}: m * prod h != n!")
            })?;
            ensure(&s.n_weight * &s.sg_order == s.m, || {
                format!("{t}: n * |SG| != m")
            })?;
            total += &s.m * &s.n_weight;
        }
        ensure(total == norm, || format!("n={n}: sum m n != prod C(i,2)"))?;
    }
    Ok(format!(
        "hook, symmetry and normalization identities for n <= {COUNT_MAX}"
    ))
}

fn worked_examples(cat: &Catalog) -> Outcome {
    let t4 = lib(cat.table(4))?;
    let expected = [(1u32, 1u32), (1, 2), (3, 3), (1, 6)];
    for (t, &(nw, m)) in t4.iter().zip(&expected) {
        let s = tree_stats(t);
        ensure(
            s.n_weight == BigUint::from(nw) && s.m == BigUint::from(m),
            || {
                format!(
                    "{t}: (n, m) = ({}, {}), expected ({nw}, {m})",
                    s.n_weight, s.m
                )
            },
        )?;
    }
    let pi = lib(plancherel_measure(cat, 4))?;
    ensure(pi.probs() == [q(1, 18), q(1, 9), q(1, 2), q(1, 3)], || {
        format!("pi_4 = {:?}", pi.probs())
    })?;
    let k = lib(down_up_kernel(cat, 4))?;
    let expect = RationalMatrix::from_rows(vec![
        vec![q(1, 6), q(1, 3), q(1, 2), q(0, 1)],
        vec![q(1, 6), q(1, 3), q(1, 2), q(0, 1)],
        vec![q(1, 18), q(1, 9), q(1, 2), q(1, 3)],
        vec![q(0, 1), q(0, 1), q(1, 2), q(1, 2)],
    ]);
    ensure(k.matrix() == &expect, || {
        "K_4 differs from the expected matrix".into()
    })?;
    Ok("statistics, measure and kernel on the four trees of size 4".into())
}

fn measure(cat: &Catalog) -> Outcome {
    for n in 1..=COUNT_MAX {
        let pi = lib(plancherel_measure(cat, n))?;
        ensure(pi.total().is_one(), || {
            format!("pi_{n} sums to {}", pi.total())
        })?;
        ensure(pi == lib(plancherel_measure_hook_form(cat, n))?, || {
            format!("pi_{n}: the two measure formulas differ")
        })?;
    }
    Ok(format!(
        "pi_n is a probability measure with both formulas equal for n <= {COUNT_MAX}"
    ))
}

fn commutation(cat: &Catalog) -> Outcome {
    for n in 1..COUNT_MAX {
        ensure(lib(commutator_check(cat, n))?, || {
            format!("PG - GP != {n} I at n={n}")
        })?;
    }
    Ok(format!("PG - GP = nI for n <= {}", COUNT_MAX - 1))
}

fn kernels(cat: &Catalog) -> Outcome {
    for n in 2..=KERNEL_MAX {
        let u = lib(up_kernel(cat, n))?;
        ensure(u.is_stochastic(), || {
            format!("P_u at n={n} is not stochastic")
        })?;
        ensure(u == lib(up_kernel_growth_form(cat, n))?, || {
            format!("P_u at n={n}: the two forms differ")
        })?;
        ensure(lib(down_kernel(cat, n))?.is_stochastic(), || {
            format!("P_d at n={n} is not stochastic")
        })?;
        let k = lib(down_up_kernel(cat, n))?;
        ensure(k.is_stochastic(), || format!("K_{n} is not stochastic"))?;
        ensure(k == lib(down_up_kernel_conjugated(cat, n))?, || {
            format!("K_{n}: composed and conjugated forms differ")
        })?;
        let du = lib(up_down_kernel(cat, n))?;
        ensure(du.is_stochastic(), || format!("DU_{n} is not stochastic"))?;
        ensure(du == lib(up_down_kernel_conjugated(cat, n))?, || {
            format!("DU_{n}: composed and conjugated forms differ")
        })?;
    }
    Ok(format!(
        "all kernels stochastic, alternative forms equal, n <= {KERNEL_MAX}"
    ))
}

fn balance(cat: &Catalog) -> Outcome {
    for n in 2..=KERNEL_MAX {
        let prev = lib(plancherel_measure(cat, n - 1))?;
        let pi = lib(plancherel_measure(cat, n))?;
        let next = lib(plancherel_measure(cat, n + 1))?;
        ensure(
            prev.push_forward(&lib(up_kernel(cat, n))?) == pi.probs(),
            || format!("pi_{} P_u != pi_{n}", n - 1),
        )?;
        ensure(
            next.push_forward(&lib(down_kernel(cat, n + 1))?) == pi.probs(),
            || format!("pi_{} P_d != pi_{n}", n + 1),
        )?;
        let k = lib(down_up_kernel(cat, n))?;
        ensure(is_reversible(&pi, &k), || {
            format!("K_{n} is not reversible for pi_{n}")
        })?;
    }
    Ok(format!(
        "pi intertwines P_u and P_d, K is reversible, n <= {KERNEL_MAX}"
    ))
}

fn traces(cat: &Catalog) -> Outcome {
    for n in 2..=KERNEL_MAX {
        let k = lib(down_up_kernel(cat, n))?;
        let spec = lib(spectrum(n))?;
        let mut power = RationalMatrix::identity(k.matrix().n_rows());
        for p in 1..=4u32 {
            power = power.mul(k.matrix());
            let (lhs, rhs) = (power.trace(), spec.power_trace(p));
            ensure(lhs == rhs, || {
                format!("n={n} p={p}: trace(K^p) = {lhs}, spectrum gives {rhs}")
            })?;
        }
    }
    Ok(format!(
        "trace(K^p) matches the spectrum for p <= 4, n <= {KERNEL_MAX}"
    ))
}

fn routes(cat: &Catalog) -> Outcome {
    for n in 4..=KERNEL_MAX {
        let table = lib(cat.table(n))?;
        let path = table
            .index_of(&lib(CanonicalTree::path(n))?)
            .expect("path is a tree");
        let star = table
            .index_of(&lib(CanonicalTree::star(n))?)
            .expect("star is a tree");
        let brute = lib(separation_bruteforce_curve(cat, n, R_MAX))?;
        for (r, b) in (0..=R_MAX).zip(&brute) {
            let e = lib(separation_eigen(n, r))?;
            let a = lib(separation_recurrence(n, r))?;
            ensure(e == b.value && a == b.value, || {
                format!(
                    "n={n} r={r}: eigen {e}, recurrence {a}, matrix power {}",
                    b.value
                )
            })?;
            ensure(
                b.argmax.contains(&(path, star)) && b.argmax.contains(&(star, path)),
                || format!("n={n} r={r}: (path, star) does not attain s*"),
            )?;
        }
    }
    Ok(format!(
        "three routes agree and (path, star) attains s*, n in 4..={KERNEL_MAX}, r <= {R_MAX}"
    ))
}

fn up_down(cat: &Catalog) -> Outcome {
    for n in 2..KERNEL_MAX {
        for r in 1..=20 {
            let du = lib(separation_updown(n, r))?;
            let k = lib(separation_eigen(n + 1, r + 1))?;
            ensure(du == k, || {
                format!("n={n} r={r}: up-down {du}, down-up {k}")
            })?;
            if n <= 5 {
                let b = lib(separation_updown_bruteforce(cat, n, r))?.value;
                ensure(b == du, || {
                    format!("n={n} r={r}: DU powers give {b}, formula {du}")
                })?;
            }
        }
    }
    Ok(format!(
        "s*_DU(n, r) = s*(n+1, r+1) for n < {KERNEL_MAX}, r <= 20"
    ))
}

fn geometric(_: &Catalog) -> Outcome {
    for n in 3..=9 {
        for r in 1..=30 {
            let g = lib(geometric_tail_exact(n, r))?;
            let e = lib(separation_eigen(n, r))?;
            ensure(g == e, || format!("n={n} r={r}: P(T > r) = {g}, s* = {e}"))?;
        }
    }
    Ok("P(T > r) equals s*(r) for n <= 9, r <= 30".into())
}
