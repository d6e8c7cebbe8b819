//! Reference implementations that share no code with `stomoyal-core`.
//!
//! Each oracle takes a deliberately different route from the engine so that
//! agreement between the two is evidence rather than tautology:
//!
//! * [`textbook_moyal`] applies `exp(ħ Σ_i (∂x_i ⊗ ∂y_i − ∂y_i ⊗ ∂x_i))` one
//!   canonical pair at a time on monomial pairs, instead of enumerating
//!   component strings and derivative tensors.
//! * [`isserlis_brute_force`] enumerates every perfect matching explicitly,
//!   with no memoization.
//! * [`CholeskySampler`] draws the Gaussian vector directly from a factorized
//!   covariance instead of integrating kernels against path increments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Dense-exponent polynomial: exponent vector to coefficient.
pub type RefPoly = BTreeMap<Vec<u32>, BigRational>;

fn add_term(p: &mut RefPoly, mono: Vec<u32>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(mono.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&mono);
    }
}

/// `d^k/dx^k x^e` as (coefficient, new exponent); `None` when it vanishes.
fn falling(e: u32, k: u32) -> Option<(BigInt, u32)> {
    if k > e {
        return None;
    }
    let mut c = BigInt::one();
    for j in 0..k {
        c *= BigInt::from(e - j);
    }
    Some((c, e - k))
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut c = BigInt::one();
    for j in 0..k {
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    c
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Moyal product of `f` and `g` for the constant Poisson bivector
/// `Σ_i ∂x_i ∧ ∂y_i`, where `pairs[i] = (x index, y index)`.
///
/// The normalization is `f ⋆ g = Σ_r ħ^r / r! · P^r(f, g)` with
/// `P = Σ_i (∂x_i ⊗ ∂y_i − ∂y_i ⊗ ∂x_i)`, so `[f, g]_⋆ = 2ħ{f, g} + O(ħ²)`.
/// Returns the ħ-coefficients `0..=max_order`.
pub fn textbook_moyal(f: &RefPoly, g: &RefPoly, pairs: &[(usize, usize)], max_order: usize) -> Vec<RefPoly> {
    // (monomial of left factor, monomial of right factor) -> series in ħ
    type State = BTreeMap<(Vec<u32>, Vec<u32>), Vec<BigRational>>;
    let order = max_order;
    let mut state: State = BTreeMap::new();
    for (mf, cf) in f {
        for (mg, cg) in g {
            let mut series = vec![BigRational::zero(); order + 1];
            series[0] = cf * cg;
            state.insert((mf.clone(), mg.clone()), series);
        }
    }

    for &(x, y) in pairs {
        let mut next: State = BTreeMap::new();
        for ((mf, mg), series) in &state {
            for n in 0..=order as u32 {
                let inv_fact = BigRational::new(BigInt::one(), factorial(n));
                for k in 0..=n {
                    // (∂x ⊗ ∂y)^k (−∂y ⊗ ∂x)^(n−k)
                    let Some((c1, fx)) = falling(mf[x], k) else { continue };
                    let Some((c2, fy)) = falling(mf[y], n - k) else { continue };
                    let Some((c3, gy)) = falling(mg[y], k) else { continue };
                    let Some((c4, gx)) = falling(mg[x], n - k) else { continue };
                    let mut coeff = BigRational::from_integer(binomial(n, k) * c1 * c2 * c3 * c4) * &inv_fact;
                    if (n - k) % 2 == 1 {
                        coeff = -coeff;
                    }
                    let mut nf = mf.clone();
                    nf[x] = fx;
                    nf[y] = fy;
                    let mut ng = mg.clone();
                    ng[x] = gx;
                    ng[y] = gy;
                    let entry = next.entry((nf, ng)).or_insert_with(|| vec![BigRational::zero(); order + 1]);
                    for (a, s) in series.iter().enumerate() {
                        if a + n as usize > order || s.is_zero() {
                            continue;
                        }
                        entry[a + n as usize] += s * &coeff;
                    }
                }
            }
        }
        state = next;
    }

    let mut out = vec![RefPoly::new(); order + 1];
    for ((mf, mg), series) in state {
        let mono: Vec<u32> = mf.iter().zip(&mg).map(|(a, b)| a + b).collect();
        for (r, c) in series.into_iter().enumerate() {
            add_term(&mut out[r], mono.clone(), c);
        }
    }
    out
}

/// `E[X_{i_1} ⋯ X_{i_k}]` for a centered Gaussian vector with covariance
/// `cov`, by explicit enumeration of all perfect matchings of the factor list.
pub fn isserlis_brute_force(cov: &[Vec<BigRational>], factors: &[usize]) -> BigRational {
    if factors.len() % 2 == 1 {
        return BigRational::zero();
    }
    let mut total = BigRational::zero();
    let mut used = vec![false; factors.len()];
    enumerate_matchings(cov, factors, &mut used, BigRational::one(), &mut total);
    total
}

fn enumerate_matchings(
    cov: &[Vec<BigRational>],
    factors: &[usize],
    used: &mut [bool],
    acc: BigRational,
    total: &mut BigRational,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        *total += acc;
        return;
    };
    used[first] = true;
    for partner in first + 1..factors.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        let w = &cov[factors[first]][factors[partner]];
        enumerate_matchings(cov, factors, used, &acc * w, total);
        used[partner] = false;
    }
    used[first] = false;
}

/// Direct multivariate normal sampler `X = L Z` with `L Lᵀ = Σ`.
///
/// Positive semidefinite inputs are handled by zeroing columns whose pivot
/// collapses to (numerically) zero.
pub struct CholeskySampler {
    lower: Vec<Vec<f64>>,
    rng: ChaCha20Rng,
}

impl CholeskySampler {
    pub fn new(cov: &[Vec<f64>], seed: u64) -> Self {
        let n = cov.len();
        let mut lower = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s = cov[i][j] - (0..j).map(|k| lower[i][k] * lower[j][k]).sum::<f64>();
                if i == j {
                    lower[i][j] = if s > 1e-14 { s.sqrt() } else { 0.0 };
                } else if lower[j][j] > 0.0 {
                    lower[i][j] = s / lower[j][j];
                }
            }
        }
        Self { lower, rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn draw(&mut self) -> Vec<f64> {
        let n = self.lower.len();
        let z: Vec<f64> = (0..n).map(|_| self.rng.sample(StandardNormal)).collect();
        (0..n).map(|i| (0..=i).map(|k| self.lower[i][k] * z[k]).sum()).collect()
    }
}

/// Convert a rational to `f64` (saturating to infinities on overflow).
pub fn to_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else if q.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}
