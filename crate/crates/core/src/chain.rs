//! The Plancherel-type measure and the kernels built from it.
//!
//! For trees of size `n`, `pi_n(t) = m(t) n(t) / prod_{i=2..n} C(i,2)`.
//! The up kernel moves `T_(n-1) -> T_n`, the down kernel `T_n -> T_(n-1)`;
//! the down-up chain `K_n` is down followed by up, and the up-down chain
//! `DU_n` is up followed by down.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choose2;
use crate::error::{domain, Result};
use crate::operators::{growth_matrix, pruning_matrix, CountMatrix};
use crate::rational::RationalMatrix;
use crate::tree::{tree_stats, CanonicalTree, Catalog, TreeStats, TreeTable};

/// Generator used by every sampler in the crate.
pub const RNG_ALGORITHM: &str = "chacha8";

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `prod_{i=2..n} C(i,2)`.
pub fn plancherel_normalizer(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(choose2(i)))
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn table_stats(table: &TreeTable) -> Vec<TreeStats> {
    table.iter().map(tree_stats).collect()
}

/// A probability vector over a tree table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    table: Arc<TreeTable>,
    probs: Vec<BigRational>,
}

impl Measure {
    pub fn table(&self) -> &Arc<TreeTable> {
        &self.table
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, t: &CanonicalTree) -> Option<&BigRational> {
        self.table.index_of(t).map(|i| &self.probs[i])
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().sum()
    }

    /// `pi K` as a plain vector.
    pub fn push_forward(&self, kernel: &RationalKernel) -> Vec<BigRational> {
        kernel.matrix.left_apply(&self.probs)
    }

    /// Whether `pi K = pi` exactly.
    pub fn is_stationary_for(&self, kernel: &RationalKernel) -> bool {
        self.push_forward(kernel) == self.probs
    }
}

/// `pi_n` from the counting form `m(t) n(t) / prod C(i,2)`.
pub fn plancherel_measure(catalog: &Catalog, n: usize) -> Result<Measure> {
    let table = catalog.table(n)?.clone();
    let norm = plancherel_normalizer(n);
    let probs = table_stats(&table)
        .into_iter()
        .map(|s| ratio(s.m * s.n_weight, norm.clone()))
        .collect();
    let measure = Measure { table, probs };
    debug_assert_eq!(measure, plancherel_measure_hook_form(catalog, n)?);
    Ok(measure)
}

/// `pi_n` from the hook form `n 2^(n-1) / (|SG(t)| prod h(v)^2)`.
pub fn plancherel_measure_hook_form(catalog: &Catalog, n: usize) -> Result<Measure> {
    let table = catalog.table(n)?.clone();
    let top = BigUint::from(n) << (n - 1);
    let probs = table_stats(&table)
        .into_iter()
        .map(|s| {
            let hooks = s.hook_product();
            ratio(top.clone(), &s.sg_order * &hooks * &hooks)
        })
        .collect();
    Ok(Measure { table, probs })
}

/// A stochastic matrix between two tree tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalKernel {
    from: Arc<TreeTable>,
    to: Arc<TreeTable>,
    matrix: RationalMatrix,
}

impl RationalKernel {
    pub fn from_table(&self) -> &Arc<TreeTable> {
        &self.from
    }

    pub fn to_table(&self) -> &Arc<TreeTable> {
        &self.to
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        self.matrix.get(i, j)
    }

    /// Every row sums to one and no entry is negative.
    pub fn is_stochastic(&self) -> bool {
        self.matrix.row_sums().iter().all(One::is_one)
            && self.matrix.rows().flatten().all(|v| !v.is_negative())
    }

    /// Composition: `self` then `other`.
    pub fn then(&self, other: &RationalKernel) -> RationalKernel {
        assert_eq!(self.to, other.from, "kernels do not compose");
        RationalKernel {
            from: self.from.clone(),
            to: other.to.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn pow(&self, r: u64) -> RationalMatrix {
        self.matrix.pow(r)
    }
}

fn need_at_least_two(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("{what} needs n >= 2")));
    }
    Ok(())
}

/// `P_u: T_(n-1) -> T_n`, `P_u(t, t') = m(t, t') n(t') / (C(n,2) n(t))`.
pub fn up_kernel(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    need_at_least_two(n, "up_kernel")?;
    let from = catalog.table(n - 1)?.clone();
    let to = catalog.table(n)?.clone();
    let from_stats = table_stats(&from);
    let to_stats = table_stats(&to);
    let prune = pruning_matrix(catalog, n)?;
    let c = BigUint::from(choose2(n));
    let mut matrix = RationalMatrix::zeros(from.len(), to.len());
    // prune(t', t) = m(t, t')
    for (j, i, m_edge) in prune.entries() {
        let v = ratio(m_edge * &to_stats[j].n_weight, &c * &from_stats[i].n_weight);
        matrix.set(i, j, v);
    }
    Ok(RationalKernel { from, to, matrix })
}

/// `P_u` from its second form `n(t, t') m(t') / (C(n,2) m(t))`.
pub fn up_kernel_growth_form(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    need_at_least_two(n, "up_kernel")?;
    let from = catalog.table(n - 1)?.clone();
    let to = catalog.table(n)?.clone();
    let from_stats = table_stats(&from);
    let to_stats = table_stats(&to);
    let grow = growth_matrix(catalog, n - 1)?;
    let c = BigUint::from(choose2(n));
    let mut matrix = RationalMatrix::zeros(from.len(), to.len());
    for (i, j, n_edge) in grow.entries() {
        let v = ratio(n_edge * &to_stats[j].m, &c * &from_stats[i].m);
        matrix.set(i, j, v);
    }
    Ok(RationalKernel { from, to, matrix })
}

/// `P_d: T_n -> T_(n-1)`, `P_d(t, t') = m(t', t) m(t') / m(t)`.
pub fn down_kernel(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    need_at_least_two(n, "down_kernel")?;
    let from = catalog.table(n)?.clone();
    let to = catalog.table(n - 1)?.clone();
    let from_stats = table_stats(&from);
    let to_stats = table_stats(&to);
    let prune = pruning_matrix(catalog, n)?;
    let mut matrix = RationalMatrix::zeros(from.len(), to.len());
    for (i, j, m_edge) in prune.entries() {
        let v = ratio(m_edge * &to_stats[j].m, from_stats[i].m.clone());
        matrix.set(i, j, v);
    }
    Ok(RationalKernel { from, to, matrix })
}

fn identity_kernel(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    let table = catalog.table(n)?.clone();
    let matrix = RationalMatrix::identity(table.len());
    Ok(RationalKernel {
        from: table.clone(),
        to: table,
        matrix,
    })
}

/// `K_n`, composed as down then up. `K_1` is the 1x1 identity.
pub fn down_up_kernel(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    if n == 1 {
        return identity_kernel(catalog, 1);
    }
    Ok(down_kernel(catalog, n)?.then(&up_kernel(catalog, n)?))
}

/// Scales an integer operator matrix `M` on `T_n` to
/// `M(t, t') m(t') / (m(t) c)`, i.e. `(1/c) A M A^-1` in row convention.
fn conjugated(table: Arc<TreeTable>, counts: &CountMatrix, c: u64) -> RationalKernel {
    let stats = table_stats(&table);
    let c = BigUint::from(c);
    let mut matrix = RationalMatrix::zeros(table.len(), table.len());
    for (i, j, v) in counts.entries() {
        matrix.set(i, j, ratio(v * &stats[j].m, &stats[i].m * &c));
    }
    RationalKernel {
        from: table.clone(),
        to: table,
        matrix,
    }
}

/// `K_n = (1/C(n,2)) A G P A^-1`, built from the operator counts directly.
pub fn down_up_kernel_conjugated(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    if n == 1 {
        return identity_kernel(catalog, 1);
    }
    let gp = pruning_matrix(catalog, n)?.mul(&growth_matrix(catalog, n - 1)?);
    Ok(conjugated(catalog.table(n)?.clone(), &gp, choose2(n)))
}

/// `DU_n`, composed as up to `T_(n+1)` then down.
pub fn up_down_kernel(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    if n == 0 {
        return Err(domain("up_down_kernel needs n >= 1"));
    }
    Ok(up_kernel(catalog, n + 1)?.then(&down_kernel(catalog, n + 1)?))
}

/// `DU_n = (1/C(n+1,2)) A P G A^-1`.
pub fn up_down_kernel_conjugated(catalog: &Catalog, n: usize) -> Result<RationalKernel> {
    if n == 0 {
        return Err(domain("up_down_kernel needs n >= 1"));
    }
    let pg = growth_matrix(catalog, n)?.mul(&pruning_matrix(catalog, n + 1)?);
    Ok(conjugated(catalog.table(n)?.clone(), &pg, choose2(n + 1)))
}

/// Detailed balance `pi(t) K(t,t') = pi(t') K(t',t)` for every pair.
pub fn verify_reversibility(catalog: &Catalog, n: usize) -> Result<bool> {
    let pi = plancherel_measure(catalog, n)?;
    let k = down_up_kernel(catalog, n)?;
    Ok(is_reversible(&pi, &k))
}

pub fn is_reversible(pi: &Measure, k: &RationalKernel) -> bool {
    let p = pi.probs();
    (0..p.len()).all(|i| (i + 1..p.len()).all(|j| &p[i] * k.get(i, j) == &p[j] * k.get(j, i)))
}

/// One run of the down-up chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectorySample {
    pub n: usize,
    pub seed: u64,
    pub algorithm: &'static str,
    /// Table indices, starting with the start state.
    pub states: Vec<usize>,
}

impl TrajectorySample {
    /// Visit counts per table index over all recorded states.
    pub fn occupation(&self, dim: usize) -> Vec<u64> {
        let mut counts = vec![0u64; dim];
        for &s in &self.states {
            counts[s] += 1;
        }
        counts
    }
}

/// Inverse-CDF row: `(column, cumulative numerator * 2^64, cumulative denominator)`
/// for every nonzero entry in column order.
struct CdfRow(Vec<(usize, BigInt, BigInt)>);

impl CdfRow {
    fn new(row: &[BigRational]) -> Self {
        let mut cum = BigRational::zero();
        let mut out = Vec::new();
        for (j, p) in row.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            cum += p;
            out.push((j, cum.numer() << 64u32, cum.denom().clone()));
        }
        Self(out)
    }

    /// First column whose cumulative mass exceeds `draw / 2^64`.
    fn pick(&self, draw: u64) -> usize {
        let x = BigInt::from(draw);
        self.0
            .iter()
            .find(|(_, scaled_num, den)| &x * den < *scaled_num)
            .or(self.0.last())
            .map(|e| e.0)
            .expect("stochastic rows are nonempty")
    }
}

/// Precomputed inverse-CDF tables for the down and up moves at size `n`.
pub struct TrajectorySampler {
    n: usize,
    table: Arc<TreeTable>,
    down: Vec<CdfRow>,
    up: Vec<CdfRow>,
}

impl TrajectorySampler {
    pub fn new(catalog: &Catalog, n: usize) -> Result<Self> {
        let table = catalog.table(n)?.clone();
        let (down, up) = if n >= 2 {
            let d = down_kernel(catalog, n)?;
            let u = up_kernel(catalog, n)?;
            (
                d.matrix().rows().map(CdfRow::new).collect(),
                u.matrix().rows().map(CdfRow::new).collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Self { n, table, down, up })
    }

    pub fn table(&self) -> &Arc<TreeTable> {
        &self.table
    }

    pub fn run(&self, start: &CanonicalTree, steps: usize, seed: u64) -> Result<TrajectorySample> {
        let mut state = self.table.index_of(start).ok_or_else(|| {
            domain(format!(
                "start tree {start} does not have {} vertices",
                self.n
            ))
        })?;
        let mut rng = rng_from_seed(seed);
        let mut states = Vec::with_capacity(steps + 1);
        states.push(state);
        for _ in 0..steps {
            if self.n >= 2 {
                let mid = self.down[state].pick(rng.next_u64());
                state = self.up[mid].pick(rng.next_u64());
            }
            states.push(state);
        }
        Ok(TrajectorySample {
            n: self.n,
            seed,
            algorithm: RNG_ALGORITHM,
            states,
        })
    }
}

pub fn sample_trajectory(
    catalog: &Catalog,
    n: usize,
    steps: usize,
    start: &CanonicalTree,
    seed: u64,
) -> Result<TrajectorySample> {
    TrajectorySampler::new(catalog, n)?.run(start, steps, seed)
}
