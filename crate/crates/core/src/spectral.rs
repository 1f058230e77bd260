//! Spectrum and maximal separation distance of the down-up chain.
//!
//! `s*(r) = max_{x,y} [1 - K^r(x,y) / pi(y)]` is computed three ways:
//!
//! * the closed eigenvalue formula
//!   `sum_{i=3}^{n-1} (-1)^(i-1) (2i-1)(i+1)(i-2) (n!)^2 / (2n (n-i)! (n+i-1)!) * lambda_i^r`
//!   with `lambda_i = 1 - C(i,2)/C(n,2)`;
//! * the `A_n(r,k)` recurrence for the expansion of `(GP)^r` over `G^k P^k`;
//! * dense exact powers of the kernel, maximised over all pairs.
//!
//! For `r = 0` every route reports `1` when there are at least two states,
//! which is the value of the identity kernel.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand_distr::{Distribution, Geometric};

use crate::chain::{
    down_up_kernel, plancherel_measure, plancherel_normalizer, rng_from_seed, up_down_kernel,
};
use crate::choose2;
use crate::error::{domain, Error, Result};
use crate::rational::RationalMatrix;
use crate::tree::{count_trees_up_to, Catalog};

/// Largest size for dense brute-force separation.
pub const BRUTEFORCE_CAP: usize = 8;

fn q(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn big(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

/// `1 - C(i,2) / C(n,2)`.
pub fn eigenvalue(n: usize, i: usize) -> BigRational {
    BigRational::one() - q(choose2(i), choose2(n))
}

/// Distinct eigenvalues of `K_n` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub n: usize,
    /// `(1, 1)` first, then `(lambda_i, T_i - T_(i-1))` for `i = 3..=n`.
    pub pairs: Vec<(BigRational, BigUint)>,
}

impl Spectrum {
    /// `sum multiplicity * lambda^p`, the predicted `trace(K^p)`.
    pub fn power_trace(&self, p: u32) -> BigRational {
        self.pairs
            .iter()
            .map(|(l, m)| Pow::pow(l, p) * big(m))
            .sum()
    }

    pub fn total_multiplicity(&self) -> BigUint {
        self.pairs.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> impl Iterator<Item = &BigRational> {
        self.pairs.iter().map(|(l, _)| l)
    }
}

pub fn spectrum(n: usize) -> Result<Spectrum> {
    if n == 0 {
        return Err(domain("spectrum needs n >= 1"));
    }
    let t = count_trees_up_to(n);
    let mut pairs = vec![(BigRational::one(), BigUint::one())];
    for i in 3..=n {
        pairs.push((eigenvalue(n, i), &t[i] - &t[i - 1]));
    }
    Ok(Spectrum { n, pairs })
}

fn r0_value(n: usize) -> BigRational {
    if n >= 3 {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

/// `(coefficient, lambda_i)` for `i = 3..n-1` in the closed formula.
pub fn eigen_terms(n: usize) -> Vec<(BigRational, BigRational)> {
    let fact = |k: usize| -> BigInt { (2..=k).fold(BigInt::one(), |a, j| a * BigInt::from(j)) };
    let nf = fact(n);
    (3..n)
        .map(|i| {
            let poly = BigInt::from((2 * i - 1) * (i + 1) * (i - 2));
            let num = poly * &nf * &nf;
            let den = BigInt::from(2 * n) * fact(n - i) * fact(n + i - 1);
            let mut c = BigRational::new(num, den);
            if i % 2 == 0 {
                c = -c;
            }
            (c, eigenvalue(n, i))
        })
        .collect()
}

/// Closed eigenvalue formula for `s*(r)`, exact.
pub fn separation_eigen(n: usize, r: u64) -> Result<BigRational> {
    if n < 2 {
        return Err(domain("separation needs n >= 2"));
    }
    if r == 0 {
        return Ok(r0_value(n));
    }
    Ok(eigen_terms(n)
        .into_iter()
        .map(|(c, l)| c * Pow::pow(&l, r))
        .sum())
}

/// `A_n(r, k)` for `k = 0..=n`.
pub fn recurrence_row(n: usize, r: u64) -> Vec<BigUint> {
    let mut row = vec![BigUint::zero(); n + 1];
    row[0] = BigUint::one();
    for _ in 0..r {
        row = recurrence_step(n, &row);
    }
    row
}

fn recurrence_step(n: usize, prev: &[BigUint]) -> Vec<BigUint> {
    let cn = choose2(n);
    (0..=n)
        .map(|k| {
            let weight = BigUint::from(cn - choose2(n - k));
            let carry = if k > 0 {
                prev[k - 1].clone()
            } else {
                BigUint::zero()
            };
            carry + &prev[k] * weight
        })
        .collect()
}

fn recurrence_value(n: usize, r: u64, row: &[BigUint]) -> BigRational {
    let norm = plancherel_normalizer(n);
    let top = big(&(norm * (&row[n - 2] + &row[n - 1])));
    let bottom = Pow::pow(BigInt::from(choose2(n)), r);
    BigRational::one() - BigRational::new(top, bottom)
}

/// `1 - prod C(i,2) / C(n,2)^r * [A_n(r, n-2) + A_n(r, n-1)]`, exact.
pub fn separation_recurrence(n: usize, r: u64) -> Result<BigRational> {
    if n < 3 {
        return Err(domain("the recurrence route needs n >= 3"));
    }
    Ok(recurrence_value(n, r, &recurrence_row(n, r)))
}

/// A maximal separation value with every pair attaining it, in table order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSeparation {
    pub value: BigRational,
    pub argmax: Vec<(usize, usize)>,
}

/// Maximises `1 - power(x,y) / pi(y)` over all ordered pairs.
pub fn max_separation(power: &RationalMatrix, pi: &[BigRational]) -> MaxSeparation {
    let mut best: Option<BigRational> = None;
    let mut argmax = Vec::new();
    for x in 0..power.n_rows() {
        for (y, p) in pi.iter().enumerate() {
            let v = BigRational::one() - power.get(x, y) / p;
            match &best {
                Some(b) if &v < b => {}
                Some(b) if &v == b => argmax.push((x, y)),
                _ => {
                    best = Some(v);
                    argmax.clear();
                    argmax.push((x, y));
                }
            }
        }
    }
    MaxSeparation {
        value: best.unwrap_or_else(BigRational::zero),
        argmax,
    }
}

/// `(1/2) max_x sum_y |power(x,y) - pi(y)|`.
pub fn total_variation(power: &RationalMatrix, pi: &[BigRational]) -> BigRational {
    power
        .rows()
        .map(|row| {
            row.iter()
                .zip(pi)
                .map(|(a, b)| (a - b).abs())
                .sum::<BigRational>()
        })
        .max()
        .unwrap_or_else(BigRational::zero)
        / BigRational::from_integer(2.into())
}

fn check_bruteforce_cap(n: usize) -> Result<()> {
    if n > BRUTEFORCE_CAP {
        return Err(Error::ResourceLimit {
            what: "brute-force separation",
            n,
            cap: BRUTEFORCE_CAP,
        });
    }
    Ok(())
}

/// Exact `s*(r)` from the `r`-th power of the composed kernel.
pub fn separation_bruteforce(catalog: &Catalog, n: usize, r: u64) -> Result<MaxSeparation> {
    check_bruteforce_cap(n)?;
    let pi = plancherel_measure(catalog, n)?;
    let k = down_up_kernel(catalog, n)?;
    Ok(max_separation(&k.pow(r), pi.probs()))
}

/// Brute-force `s*(r)` for every `r = 0..=r_max`, reusing successive powers.
pub fn separation_bruteforce_curve(
    catalog: &Catalog,
    n: usize,
    r_max: u64,
) -> Result<Vec<MaxSeparation>> {
    check_bruteforce_cap(n)?;
    let pi = plancherel_measure(catalog, n)?;
    let k = down_up_kernel(catalog, n)?;
    let mut power = RationalMatrix::identity(k.matrix().n_rows());
    let mut out = Vec::with_capacity(r_max as usize + 1);
    for r in 0..=r_max {
        if r > 0 {
            power = power.mul(k.matrix());
        }
        out.push(max_separation(&power, pi.probs()));
    }
    Ok(out)
}

/// Maximal separation of the up-down chain on `T_n` from its eigenvalues
/// `mu_i = 1 - C(i,2)/C(n+1,2)`, `i = 3..=n`.
pub fn separation_updown(n: usize, r: u64) -> Result<BigRational> {
    if n < 2 {
        return Err(domain("up-down separation needs n >= 2"));
    }
    if r == 0 {
        return Ok(r0_value(n));
    }
    let mut total = BigRational::zero();
    for i in 3..=n {
        let ci = choose2(i);
        let weight = (3..=n)
            .filter(|&j| j != i)
            .map(|j| {
                let cj = choose2(j);
                BigRational::new(BigInt::from(cj), BigInt::from(cj) - BigInt::from(ci))
            })
            .fold(BigRational::one(), |a, b| a * b);
        let mu = BigRational::one() - q(ci, choose2(n + 1));
        total += weight * Pow::pow(&mu, r);
    }
    Ok(total)
}

/// Brute-force maximal separation of the up-down chain on `T_n`.
pub fn separation_updown_bruteforce(catalog: &Catalog, n: usize, r: u64) -> Result<MaxSeparation> {
    check_bruteforce_cap(n)?;
    let pi = plancherel_measure(catalog, n)?;
    let du = up_down_kernel(catalog, n)?;
    Ok(max_separation(&du.pow(r), pi.probs()))
}

fn geometric_parameters(n: usize) -> Vec<BigRational> {
    (3..=n).map(|i| q(choose2(i), choose2(n))).collect()
}

/// Monte Carlo estimate of `P(T > r)` for `T = sum_{i=3..n} X_i`, with
/// independent geometric `X_i` (support `1, 2, ...`) of success probability
/// `C(i,2)/C(n,2)`.
pub fn geometric_tail(n: usize, r: u64, samples: u64, seed: u64) -> Result<f64> {
    if n < 3 {
        return Err(domain("geometric_tail needs n >= 3"));
    }
    if samples == 0 {
        return Err(domain("geometric_tail needs at least one sample"));
    }
    let dists = geometric_parameters(n)
        .iter()
        .map(|p| Geometric::new(p.to_f64().expect("probability fits f64")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| domain(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let mut exceed = 0u64;
    for _ in 0..samples {
        // failures before the first success, plus the success itself
        let t: u64 = dists.iter().map(|d| d.sample(&mut rng) + 1).sum();
        if t > r {
            exceed += 1;
        }
    }
    Ok(exceed as f64 / samples as f64)
}

/// Exact `P(T > r)` by convolving the geometric laws.
pub fn geometric_tail_exact(n: usize, r: u64) -> Result<BigRational> {
    if n < 3 {
        return Err(domain("geometric_tail needs n >= 3"));
    }
    let r = r as usize;
    // dist[s] = P(partial sum = s) for s <= r
    let mut dist = vec![BigRational::zero(); r + 1];
    dist[0] = BigRational::one();
    for p in geometric_parameters(n) {
        let fail = BigRational::one() - &p;
        let mut pmf = vec![BigRational::zero(); r + 1];
        let mut w = p.clone();
        for slot in pmf.iter_mut().skip(1) {
            *slot = w.clone();
            w *= &fail;
        }
        let mut next = vec![BigRational::zero(); r + 1];
        for (s, a) in dist.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 1..=(r - s) {
                next[s + k] += a * &pmf[k];
            }
        }
        dist = next;
    }
    Ok(BigRational::one() - dist.iter().sum::<BigRational>())
}

/// Partial sum of the limit series
/// `sum_{i>=3} (-1)^(i-1)/2 (2i-1)(i+1)(i-2) e^(-c i (i-1))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitSeries {
    pub c: f64,
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the first omitted term.
    pub tail_bound: f64,
}

fn limit_term(c: f64, i: usize) -> f64 {
    let i_f = i as f64;
    let poly = (2.0 * i_f - 1.0) * (i_f + 1.0) * (i_f - 2.0) / 2.0;
    let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
    sign * poly * (-c * i_f * (i_f - 1.0)).exp()
}

/// Hard stop for pathological `c`.
const LIMIT_MAX_TERMS: usize = 10_000_000;

pub fn limit_value(c: f64, tol: f64) -> Result<LimitSeries> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("limit_value needs a finite c > 0"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain("limit_value needs tol > 0"));
    }
    let mut sum = Neumaier::default();
    let mut i = 3;
    let mut current = limit_term(c, i);
    loop {
        sum.add(current);
        let next = limit_term(c, i + 1);
        // Terms are unimodal in magnitude, so once they shrink they keep
        // shrinking and the alternating tail is bounded by the next term.
        if next == 0.0 || (next.abs() < current.abs() && next.abs() < tol) {
            return Ok(LimitSeries {
                c,
                value: sum.total(),
                terms_used: i - 2,
                tail_bound: next.abs(),
            });
        }
        if i - 2 >= LIMIT_MAX_TERMS {
            return Err(domain(format!("limit series did not converge for c = {c}")));
        }
        i += 1;
        current = next;
    }
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Floating evaluation of the closed formula for large `n`.
///
/// Coefficients are advanced by the ratio
/// `-(n-i)(2i+1)(i+2)(i-1) / ((n+i)(2i-1)(i+1)(i-2))` starting from
/// `10 (n-1)(n-2) / ((n+1)(n+2))`, and `lambda_i^r` is taken in the log
/// domain. Accurate to about `1e-9` once `r` is large enough that the terms
/// are not dominated by cancellation (e.g. `r` of order `n^2`); for very
/// small `r` at large `n` the coefficients reach order `n^3` and relative
/// rounding limits the absolute accuracy accordingly.
pub fn separation_float(n: usize, r: u64) -> Result<f64> {
    if n < 2 {
        return Err(domain("separation needs n >= 2"));
    }
    if n < 4 {
        return Ok(if n == 3 && r == 0 { 1.0 } else { 0.0 });
    }
    // the path and the star are n - 2 moves apart
    if r < n as u64 - 2 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let cn = choose2(n) as f64;
    let mut coeff = 10.0 * (nf - 1.0) * (nf - 2.0) / ((nf + 1.0) * (nf + 2.0));
    let mut sum = Neumaier::default();
    for i in 3..n {
        let x = choose2(i) as f64 / cn;
        let term = coeff * (r as f64 * (-x).ln_1p()).exp();
        sum.add(term);
        let i_f = i as f64;
        coeff *= -(nf - i_f) * (2.0 * i_f + 1.0) * (i_f + 2.0) * (i_f - 1.0)
            / ((nf + i_f) * (2.0 * i_f - 1.0) * (i_f + 1.0) * (i_f - 2.0));
    }
    Ok(sum.total().clamp(0.0, 1.0))
}

/// How a separation curve was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    EigenFormula,
    ARecurrence,
    MatrixPower,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::EigenFormula => "eigen-formula",
            Route::ARecurrence => "A-recurrence",
            Route::MatrixPower => "matrix-power",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveValue {
    Exact(BigRational),
    Float(f64),
}

impl CurveValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            CurveValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            CurveValue::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            CurveValue::Exact(q) => Some(q),
            CurveValue::Float(_) => None,
        }
    }
}

/// `s*(r)` for `r = 0..=r_max` along one route.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationCurve {
    pub n: usize,
    pub route: Route,
    pub values: BTreeMap<u64, CurveValue>,
}

impl SeparationCurve {
    pub fn eigen(n: usize, r_max: u64) -> Result<Self> {
        if n < 2 {
            return Err(domain("separation needs n >= 2"));
        }
        let terms = eigen_terms(n);
        let mut powers: Vec<BigRational> = vec![BigRational::one(); terms.len()];
        let mut values = BTreeMap::new();
        values.insert(0, CurveValue::Exact(r0_value(n)));
        for r in 1..=r_max {
            let mut s = BigRational::zero();
            for ((c, l), p) in terms.iter().zip(powers.iter_mut()) {
                *p *= l;
                s += c * &*p;
            }
            values.insert(r, CurveValue::Exact(s));
        }
        Ok(Self {
            n,
            route: Route::EigenFormula,
            values,
        })
    }

    /// Float evaluation of the eigen formula; intended for large `n`.
    pub fn eigen_float(n: usize, r_max: u64) -> Result<Self> {
        let values = (0..=r_max)
            .map(|r| Ok((r, CurveValue::Float(separation_float(n, r)?))))
            .collect::<Result<_>>()?;
        Ok(Self {
            n,
            route: Route::EigenFormula,
            values,
        })
    }

    pub fn recurrence(n: usize, r_max: u64) -> Result<Self> {
        if n < 3 {
            return Err(domain("the recurrence route needs n >= 3"));
        }
        let mut row = recurrence_row(n, 0);
        let mut values = BTreeMap::new();
        for r in 0..=r_max {
            if r > 0 {
                row = recurrence_step(n, &row);
            }
            values.insert(r, CurveValue::Exact(recurrence_value(n, r, &row)));
        }
        Ok(Self {
            n,
            route: Route::ARecurrence,
            values,
        })
    }

    pub fn matrix_power(catalog: &Catalog, n: usize, r_max: u64) -> Result<Self> {
        let values = separation_bruteforce_curve(catalog, n, r_max)?
            .into_iter()
            .enumerate()
            .map(|(r, m)| (r as u64, CurveValue::Exact(m.value)))
            .collect();
        Ok(Self {
            n,
            route: Route::MatrixPower,
            values,
        })
    }

    /// Exact values are compared exactly; `tol` applies to float values.
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        let v: Vec<&CurveValue> = self.values.values().collect();
        v.windows(2).all(|w| match (w[0], w[1]) {
            (CurveValue::Exact(a), CurveValue::Exact(b)) => b <= a,
            (a, b) => b.to_f64() <= a.to_f64() + tol,
        })
    }
}
