//! Seeded generators of kernels, atlases and polynomials.
//!
//! Coefficients are small integers (`|c| ≤ 5`) and kernel cells are small
//! rationals, so exact identities on the generated inputs stay cheap to
//! verify.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functional::{Polynomial, Variable, VariableAtlas};
use crate::kernel::{Component, Kernel};
use crate::scalar::Rational;

pub const MAX_COEFFICIENT: i64 = 5;

#[derive(Debug, Clone)]
pub struct RandomFunctionals {
    rng: ChaCha8Rng,
}

impl RandomFunctionals {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Cell values `p/q` with `|p| ≤ 3`, `1 ≤ q ≤ 3`; never the zero kernel.
    pub fn kernel(&mut self, m: usize) -> Kernel {
        loop {
            let values: Vec<Rational> = (0..m)
                .map(|_| {
                    let p: i64 = self.rng.gen_range(-3..=3);
                    let q: i64 = self.rng.gen_range(1..=3);
                    Rational::new(p.into(), q.into())
                })
                .collect();
            let k = Kernel::new(values, m).expect("length matches m");
            if !k.is_zero() {
                return k;
            }
        }
    }

    /// An atlas of `n` variables named `X1, X2, …` with random kernels and
    /// components; for `n ≥ 2` both components occur.
    pub fn atlas(&mut self, n: usize, m: usize) -> Arc<VariableAtlas> {
        let mut components: Vec<Component> =
            (0..n).map(|_| if self.rng.gen_bool(0.5) { Component::One } else { Component::Two }).collect();
        if n >= 2 {
            components[0] = Component::One;
            components[1] = Component::Two;
            components.shuffle(&mut self.rng);
        }
        let vars = components
            .into_iter()
            .enumerate()
            .map(|(i, c)| Variable::new(format!("X{}", i + 1), c, self.kernel(m)))
            .collect();
        VariableAtlas::new(m, vars).expect("generated atlas is valid")
    }

    pub fn coefficient(&mut self) -> Rational {
        loop {
            let c: i64 = self.rng.gen_range(-MAX_COEFFICIENT..=MAX_COEFFICIENT);
            if c != 0 {
                return Rational::from_integer(c.into());
            }
        }
    }

    /// A polynomial of total degree at most `max_degree` with up to
    /// `max_terms` terms.
    pub fn polynomial(&mut self, atlas: &Arc<VariableAtlas>, max_degree: u32, max_terms: usize) -> Polynomial {
        let n = atlas.len();
        let terms = self.rng.gen_range(1..=max_terms.max(1));
        let mut p = Polynomial::zero(atlas);
        for _ in 0..terms {
            let degree = self.rng.gen_range(0..=max_degree);
            let mut e = vec![0u32; n];
            if n > 0 {
                for _ in 0..degree {
                    e[self.rng.gen_range(0..n)] += 1;
                }
            }
            let c = self.coefficient();
            p = &p + &Polynomial::from_terms(atlas, [(e, c)]);
        }
        p
    }
}
