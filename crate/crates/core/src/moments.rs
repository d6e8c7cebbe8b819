//! Exact Gaussian expectations of polynomial functionals.
//!
//! The atlas variables are jointly Gaussian and centered with covariance
//! `Σ[i][j] = ⟨h_i, h_j⟩` inside one Wiener factor and `0` across factors.
//! Moments follow from the pairing formula: `E[X_{i_1} ⋯ X_{i_2k}]` is the
//! sum over perfect matchings of the products of covariances, and odd
//! moments vanish.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::functional::{Polynomial, VariableAtlas};
use crate::scalar::{serde_rational, to_f64, Rational};

/// Default cap on the total degree handed to the matching enumeration.
pub const DEFAULT_DEGREE_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MomentError {
    #[error("polynomial of degree {degree} exceeds the moment degree cap of {cap}")]
    DegreeCap { cap: u32, degree: u32 },
}

/// Covariance of the atlas variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceModel {
    matrix: Vec<Vec<Rational>>,
}

impl CovarianceModel {
    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.matrix.iter().map(|row| row.iter().map(to_f64).collect()).collect()
    }
}

pub fn covariance_matrix(atlas: &VariableAtlas) -> CovarianceModel {
    let vars = atlas.variables();
    let matrix = vars
        .iter()
        .map(|a| {
            vars.iter()
                .map(|b| {
                    if a.component == b.component {
                        a.kernel.inner(&b.kernel).expect("atlas kernels share one grid")
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    CovarianceModel { matrix }
}

/// `‖∇^r F‖²` in `H^{⊗r}`, as a polynomial functional:
/// `Σ_{i⃗, j⃗} ∂_{i⃗}F · ∂_{j⃗}F · Π_k Σ[i_k][j_k]`.
pub fn derivative_norm_squared(f: &Polynomial, r: usize) -> Polynomial {
    let atlas = f.atlas();
    let cov = covariance_matrix(atlas);
    let tensor = f.derivative_tensor(r);
    let entries: Vec<_> = tensor.iter().collect();
    let mut total = Polynomial::zero(atlas);
    for (i_tuple, di) in &entries {
        let mut partner = Polynomial::zero(atlas);
        for (j_tuple, dj) in &entries {
            let w = i_tuple.iter().zip(j_tuple.iter()).fold(Rational::one(), |acc, (&i, &j)| acc * cov.get(i, j));
            if !w.is_zero() {
                partner = &partner + &dj.scale(&w);
            }
        }
        if !partner.is_zero() {
            total = &total + &(*di * &partner);
        }
    }
    total
}

/// `‖F‖_{r,2}` with its exactly known square.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevNorm {
    #[serde(with = "serde_rational")]
    pub squared: Rational,
    pub value: f64,
}

/// Exact moment engine for one atlas.
#[derive(Debug, Clone)]
pub struct GaussianMoments {
    atlas: Arc<VariableAtlas>,
    covariance: CovarianceModel,
    degree_cap: u32,
}

impl GaussianMoments {
    pub fn new(atlas: &Arc<VariableAtlas>) -> Self {
        Self { atlas: atlas.clone(), covariance: covariance_matrix(atlas), degree_cap: DEFAULT_DEGREE_CAP }
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn covariance(&self) -> &CovarianceModel {
        &self.covariance
    }

    /// `E[F]`, exact.
    pub fn expectation(&self, f: &Polynomial) -> Result<Rational, MomentError> {
        assert!(**f.atlas() == *self.atlas, "functional and moment engine use different atlases");
        let degree = f.degree();
        if degree > self.degree_cap {
            return Err(MomentError::DegreeCap { cap: self.degree_cap, degree });
        }
        let mut memo: HashMap<Vec<u32>, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (mono, c) in f.terms() {
            let m = self.monomial_moment(mono.exponents(), &mut memo);
            if !m.is_zero() {
                total += c * m;
            }
        }
        Ok(total)
    }

    /// Moment of one monomial, memoized on the exponent vector (the sorted
    /// multiset of its factors).
    fn monomial_moment(&self, exps: &[u32], memo: &mut HashMap<Vec<u32>, Rational>) -> Rational {
        let degree: u32 = exps.iter().sum();
        if degree == 0 {
            return Rational::one();
        }
        if degree % 2 == 1 {
            return Rational::zero();
        }
        if let Some(v) = memo.get(exps) {
            return v.clone();
        }
        // Pair one copy of the first present factor with every other copy.
        let first = exps.iter().position(|&e| e > 0).expect("nonzero degree");
        let mut rest = exps.to_vec();
        rest[first] -= 1;
        let mut total = Rational::zero();
        for (j, &count) in rest.clone().iter().enumerate() {
            if count == 0 {
                continue;
            }
            let w = self.covariance.get(first, j);
            if w.is_zero() {
                continue;
            }
            rest[j] -= 1;
            let sub = self.monomial_moment(&rest, memo);
            rest[j] += 1;
            total += w * Rational::from_integer(count.into()) * sub;
        }
        memo.insert(exps.to_vec(), total.clone());
        total
    }

    /// `‖F‖_{r,2} = E[‖∇^r F‖²]^{1/2}`.
    pub fn sobolev_norm_p2(&self, f: &Polynomial, r: usize) -> Result<SobolevNorm, MomentError> {
        let integrand = derivative_norm_squared(f, r);
        let squared = self.expectation(&integrand)?;
        let value = to_f64(&squared).max(0.0).sqrt();
        Ok(SobolevNorm { squared, value })
    }
}

/// `E[F]` with the default degree cap.
pub fn expectation_exact(f: &Polynomial) -> Result<Rational, MomentError> {
    GaussianMoments::new(f.atlas()).expectation(f)
}

/// `‖F‖_{r,2}` with the default degree cap.
pub fn sobolev_norm_exact_p2(f: &Polynomial, r: usize) -> Result<SobolevNorm, MomentError> {
    GaussianMoments::new(f.atlas()).sobolev_norm_p2(f, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::Variable;
    use crate::kernel::{Component, Kernel};
    use crate::scalar::{ratio, rational};

    fn atlas(vars: &[(&str, Component, &[i64])]) -> Arc<VariableAtlas> {
        let m = vars.first().map_or(1, |v| v.2.len());
        VariableAtlas::new(
            m,
            vars.iter().map(|(n, c, k)| Variable::new(*n, *c, Kernel::from_integers(k).unwrap())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn covariances() {
        let a = atlas(&[("X", Component::One, &[1, 1]), ("Y", Component::Two, &[1, 1])]);
        assert_eq!(covariance_matrix(&a).matrix(), &[vec![rational(1), rational(0)], vec![rational(0), rational(1)]]);
        let a = atlas(&[("X1", Component::One, &[1, 0]), ("X2", Component::One, &[1, 1])]);
        assert_eq!(covariance_matrix(&a).matrix(), &[vec![ratio(1, 2), ratio(1, 2)], vec![ratio(1, 2), rational(1)]]);
        let a = atlas(&[("Z", Component::One, &[0, 0])]);
        assert_eq!(covariance_matrix(&a).matrix(), &[vec![rational(0)]]);
    }

    #[test]
    fn moments() {
        let a = atlas(&[("X", Component::One, &[1, 1]), ("Y", Component::Two, &[1, 1])]);
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        assert_eq!(expectation_exact(&x.pow(2)).unwrap(), rational(1));
        assert_eq!(expectation_exact(&x.pow(4)).unwrap(), rational(3));
        assert_eq!(expectation_exact(&(&x.pow(2) * &y.pow(2))).unwrap(), rational(1));
        assert_eq!(expectation_exact(&x.pow(3)).unwrap(), rational(0));
        assert_eq!(expectation_exact(&x.pow(12)).unwrap(), rational(10395));
        assert_eq!(expectation_exact(&x.pow(13)), Err(MomentError::DegreeCap { cap: 12, degree: 13 }));
        let wide = GaussianMoments::new(&a).with_degree_cap(14);
        assert_eq!(wide.expectation(&x.pow(14)).unwrap(), rational(135135));
    }

    #[test]
    fn norms() {
        let a = atlas(&[("X", Component::One, &[1, 1]), ("Y", Component::Two, &[1, 1])]);
        let x = Polynomial::var(&a, 0);
        let n = sobolev_norm_exact_p2(&x, 1).unwrap();
        assert_eq!((n.squared, n.value), (rational(1), 1.0));
        let n = sobolev_norm_exact_p2(&x.pow(2), 1).unwrap();
        assert_eq!((n.squared, n.value), (rational(4), 2.0));
        assert_eq!(derivative_norm_squared(&x.pow(2), 1), x.pow(2).scale(&rational(4)));
        let c = Polynomial::constant(&a, rational(7));
        assert_eq!(sobolev_norm_exact_p2(&c, 1).unwrap().squared, rational(0));
        assert_eq!(sobolev_norm_exact_p2(&c, 0).unwrap().squared, rational(49));
    }
}
