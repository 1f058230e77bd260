use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// `T_n`, the number of rooted unlabeled trees on `n` vertices.
///
/// Computed from the Euler product `sum T_n x^n = x prod_k (1 - x^k)^(-T_k)`
/// alone; enumeration is never consulted.
pub fn count_trees(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(domain("count_trees needs n >= 1"));
    }
    Ok(count_trees_up_to(n).swap_remove(n))
}

/// `[T_0, T_1, ..., T_n]` with `T_0 = 0`.
pub fn count_trees_up_to(n: usize) -> Vec<BigUint> {
    let mut counts = vec![BigUint::zero(); n + 1];
    if n == 0 {
        return counts;
    }
    // product[d] is the coefficient of x^d in prod_{j<k} (1 - x^j)^(-T_j),
    // truncated below degree n. Factors with j >= k only touch degrees >= k,
    // so T_k = [x^(k-1)] of the partial product.
    let mut product = vec![BigUint::zero(); n];
    product[0] = BigUint::one();
    for k in 1..=n {
        counts[k] = product[k - 1].clone();
        if k >= n {
            break;
        }
        // (1 - x^k)^(-T) = sum_j C(T + j - 1, j) x^(kj)
        let t = &counts[k];
        let mut factor = vec![BigUint::one()];
        let mut coeff = BigUint::one();
        for j in 1..=((n - 1) / k) {
            coeff = coeff * (t + BigUint::from(j - 1)) / BigUint::from(j);
            factor.push(coeff.clone());
        }
        let mut next = vec![BigUint::zero(); n];
        for (d, a) in product.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                let deg = d + j * k;
                if deg >= n {
                    break;
                }
                next[deg] += a * f;
            }
        }
        product = next;
    }
    counts
}
