#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use stomoyal_core::kernel::gram_schmidt;
use stomoyal_core::prelude::*;
use stomoyal_core::random::RandomFunctionals;
use stomoyal_oracles::RefPoly;

pub fn to_ref_poly(p: &Polynomial) -> RefPoly {
    p.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

const HADAMARD: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];

/// Two orthonormal kernels on m = 4, obtained by Gram–Schmidt from a random
/// triangular mix of two signed Hadamard rows.
pub fn orthonormal_pair(gen: &mut RandomFunctionals) -> Vec<Kernel> {
    let rng = gen.rng();
    let i = rng.gen_range(0..4);
    let j = (i + rng.gen_range(1..4)) % 4;
    let (s1, s2) = (if rng.gen_bool(0.5) { 1 } else { -1 }, if rng.gen_bool(0.5) { 1 } else { -1 });
    let r1 = Kernel::from_integers(&HADAMARD[i].map(|v| v * s1)).unwrap();
    let r2 = Kernel::from_integers(&HADAMARD[j].map(|v| v * s2)).unwrap();
    let a = ratio(rng.gen_range(1..=6), rng.gen_range(1..=4));
    let b = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let c = ratio(rng.gen_range(1..=6), rng.gen_range(1..=4));
    let k1 = r1.scale(&a);
    let k2 = r1.scale(&b).try_add(&r2.scale(&c)).unwrap();
    let q = gram_schmidt(&[k1, k2]).unwrap();
    assert_eq!(q, vec![r1, r2]);
    q
}

/// `x1, x2` on the first factor and `y1, y2` on the second, sharing an
/// orthonormal kernel pair so that `⟨h_{x_a}, h_{y_b}⟩ = δ_ab`.
pub fn canonical_atlas(gen: &mut RandomFunctionals) -> Arc<VariableAtlas> {
    let q = orthonormal_pair(gen);
    VariableAtlas::new(
        4,
        vec![
            Variable::new("x1", Component::One, q[0].clone()),
            Variable::new("x2", Component::One, q[1].clone()),
            Variable::new("y1", Component::Two, q[0].clone()),
            Variable::new("y2", Component::Two, q[1].clone()),
        ],
    )
    .unwrap()
}

/// Conjugate pairs of [`canonical_atlas`] as atlas indices.
pub const CANONICAL_PAIRS: [(usize, usize); 2] = [(0, 2), (1, 3)];

/// A random atlas of 1..=4 variables on m = 4.
pub fn small_atlas(gen: &mut RandomFunctionals) -> Arc<VariableAtlas> {
    let n = gen.rng().gen_range(1..=4);
    gen.atlas(n, 4)
}
