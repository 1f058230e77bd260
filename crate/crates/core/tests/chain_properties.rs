use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use treemix_core::chain::{
    down_kernel, down_up_kernel, down_up_kernel_conjugated, is_reversible, plancherel_measure,
    plancherel_measure_hook_form, sample_trajectory, up_down_kernel, up_down_kernel_conjugated,
    up_kernel, up_kernel_growth_form, verify_reversibility,
};
use treemix_core::operators::{growth_matrix, pruning_matrix};
use treemix_core::tree::tree_stats;
use treemix_core::{choose2, CanonicalTree, Catalog, RationalMatrix};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn measure_normalized_and_positive_up_to_12() {
    let cat = Catalog::up_to(12).unwrap();
    for n in 1..=12 {
        let pi = plancherel_measure(&cat, n).unwrap();
        assert!(pi.total().is_one(), "n = {n}");
        assert!(pi.probs().iter().all(|p| *p > q(0, 1)));
        if n <= 9 {
            assert_eq!(pi, plancherel_measure_hook_form(&cat, n).unwrap());
        }
    }
}

#[test]
fn kernels_are_stochastic_and_forms_agree() {
    let cat = Catalog::up_to(10).unwrap();
    for n in 2..=9 {
        let u = up_kernel(&cat, n).unwrap();
        assert!(u.is_stochastic(), "P_u at n = {n}");
        assert_eq!(
            u,
            up_kernel_growth_form(&cat, n).unwrap(),
            "P_u forms at n = {n}"
        );
        assert!(
            down_kernel(&cat, n).unwrap().is_stochastic(),
            "P_d at n = {n}"
        );

        let k = down_up_kernel(&cat, n).unwrap();
        assert!(k.is_stochastic());
        assert_eq!(
            k,
            down_up_kernel_conjugated(&cat, n).unwrap(),
            "K at n = {n}"
        );

        let du = up_down_kernel(&cat, n).unwrap();
        assert!(du.is_stochastic());
        assert_eq!(
            du,
            up_down_kernel_conjugated(&cat, n).unwrap(),
            "DU at n = {n}"
        );
    }
}

#[test]
fn intertwining_and_balance_up_to_9() {
    let cat = Catalog::up_to(10).unwrap();
    for n in 2..=9 {
        let pi_prev = plancherel_measure(&cat, n - 1).unwrap();
        let pi = plancherel_measure(&cat, n).unwrap();
        let pi_next = plancherel_measure(&cat, n + 1).unwrap();
        assert_eq!(
            pi_prev.push_forward(&up_kernel(&cat, n).unwrap()),
            pi.probs()
        );
        assert_eq!(
            pi_next.push_forward(&down_kernel(&cat, n + 1).unwrap()),
            pi.probs()
        );
        let k = down_up_kernel(&cat, n).unwrap();
        assert!(is_reversible(&pi, &k), "n = {n}");
        assert!(pi.is_stationary_for(&k), "n = {n}");
        assert!(pi.is_stationary_for(&up_down_kernel(&cat, n).unwrap()));
    }
    assert!(verify_reversibility(&cat, 2).unwrap());
}

#[test]
fn small_kernels() {
    let cat = Catalog::up_to(4).unwrap();
    let k3 = down_up_kernel(&cat, 3).unwrap();
    assert_eq!(
        k3.matrix(),
        &RationalMatrix::from_rows(vec![vec![q(1, 3), q(2, 3)], vec![q(1, 3), q(2, 3)]])
    );
    assert_eq!(
        plancherel_measure(&cat, 3).unwrap().push_forward(&k3),
        vec![q(1, 3), q(2, 3)]
    );
}

#[test]
fn up_down_at_3_expands_through_commutator() {
    // DU_3 = (1/C(4,2)) A (3I + GP) A^-1
    let cat = Catalog::up_to(4).unwrap();
    let gp = pruning_matrix(&cat, 3)
        .unwrap()
        .mul(&growth_matrix(&cat, 2).unwrap());
    let expanded = gp.plus_identity(3);
    let m: Vec<BigInt> = cat
        .table(3)
        .unwrap()
        .iter()
        .map(|t| BigInt::from(tree_stats(t).m))
        .collect();
    let c = BigInt::from(choose2(4));
    let mut expect = RationalMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let v = BigInt::from(expanded.get(i, j)) * &m[j];
            expect.set(i, j, BigRational::new(v, &m[i] * &c));
        }
    }
    assert_eq!(up_down_kernel(&cat, 3).unwrap().matrix(), &expect);
}

#[test]
fn reversibility_pair_from_n4() {
    let cat = Catalog::up_to(4).unwrap();
    let pi = plancherel_measure(&cat, 4).unwrap();
    let k = down_up_kernel(&cat, 4).unwrap();
    assert_eq!(&pi.probs()[0] * k.get(0, 2), q(1, 36));
    assert_eq!(&pi.probs()[2] * k.get(2, 0), q(1, 36));
    assert!(verify_reversibility(&Catalog::up_to(8).unwrap(), 8).unwrap());
}

#[test]
fn long_run_frequencies_match_measure() {
    let cat = Catalog::up_to(4).unwrap();
    let steps = 100_000usize;
    let run = sample_trajectory(&cat, 4, steps, &CanonicalTree::path(4).unwrap(), 0).unwrap();
    let pi = plancherel_measure(&cat, 4).unwrap();
    let counts = run.occupation(4);
    let total = (steps + 1) as f64;
    for (c, p) in counts.iter().zip(pi.probs()) {
        let p = p.to_f64().unwrap();
        let sigma = (p * (1.0 - p) / total).sqrt();
        let freq = *c as f64 / total;
        assert!(
            (freq - p).abs() < 4.0 * sigma,
            "freq {freq} vs {p} (sigma {sigma})"
        );
    }
}

#[test]
fn independent_seeds_differ() {
    let cat = Catalog::up_to(6).unwrap();
    let start = CanonicalTree::star(6).unwrap();
    let a = sample_trajectory(&cat, 6, 200, &start, 1).unwrap();
    let b = sample_trajectory(&cat, 6, 200, &start, 2).unwrap();
    assert_ne!(a.states, b.states);
    assert_eq!(a.seed, 1);
}
