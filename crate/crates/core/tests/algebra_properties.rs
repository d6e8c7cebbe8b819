mod common;

use std::collections::HashMap;

use common::small_atlas;
use rand::Rng;
use stomoyal_core::prelude::*;
use stomoyal_core::random::RandomFunctionals;

/// Sums coefficients of equal kernels so expansions can be compared.
fn collect_like_kernels(terms: Vec<(Kernel, Polynomial)>) -> Vec<(Kernel, Polynomial)> {
    let mut out: Vec<(Kernel, Polynomial)> = Vec::new();
    for (k, p) in terms {
        match out.iter_mut().find(|(k2, _)| *k2 == k) {
            Some(slot) => slot.1 = &slot.1 + &p,
            None => out.push((k, p)),
        }
    }
    out.retain(|(_, p)| !p.is_zero());
    out.sort_by_key(|a| a.0.to_string());
    out
}

#[test]
fn leibniz_rule_for_the_malliavin_derivative() {
    for seed in 0..40 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 3, 4);
        let g = gen.polynomial(&atlas, 3, 4);
        for c in Component::ALL {
            let lhs = collect_like_kernels((&f * &g).malliavin_derivative(c));
            let mut rhs: Vec<_> = g.malliavin_derivative(c).into_iter().map(|(k, p)| (k, &f * &p)).collect();
            rhs.extend(f.malliavin_derivative(c).into_iter().map(|(k, p)| (k, &g * &p)));
            assert_eq!(lhs, collect_like_kernels(rhs), "seed {seed}");
        }
    }
}

#[test]
fn derivative_tensors_are_symmetric_and_degree_bounded() {
    for seed in 100..130 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 4, 5);
        for r in 0..=3 {
            let t = f.derivative_tensor(r);
            for (tuple, p) in t.iter() {
                let mut rev = tuple.clone();
                rev.reverse();
                assert_eq!(t.get(&rev), Some(p));
                let mut rot = tuple.clone();
                if !rot.is_empty() {
                    rot.rotate_left(1);
                }
                assert_eq!(t.get(&rot), Some(p));
                // agrees with iterated partials
                let direct = tuple.iter().fold(f.clone(), |acc, &i| acc.partial(i));
                assert_eq!(&direct, p);
            }
        }
        assert!(f.derivative_tensor(f.degree() as usize + 1).is_zero());
    }
}

#[test]
fn evaluation_is_a_ring_homomorphism() {
    for seed in 200..240 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 3, 4);
        let g = gen.polynomial(&atlas, 3, 4);
        let point: HashMap<String, Rational> = atlas
            .variables()
            .iter()
            .map(|v| (v.name.clone(), ratio(gen.rng().gen_range(-7..=7), gen.rng().gen_range(1..=5))))
            .collect();
        let ev = |p: &Polynomial| p.evaluate_exact(&point).unwrap();
        assert_eq!(ev(&(&f * &g)), ev(&f) * ev(&g));
        assert_eq!(ev(&(&f + &g)), ev(&f) + ev(&g));
    }
}

#[test]
fn multiplication_is_commutative_and_associative() {
    for seed in 300..330 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let [f, g, h] = [0; 3].map(|_| gen.polynomial(&atlas, 3, 4));
        assert_eq!(&f * &g, &g * &f);
        assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        assert_eq!(f.pow(3), &(&f * &f) * &f);
    }
}

#[test]
fn json_round_trip() {
    for seed in 400..420 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 4, 6);
        assert_eq!(Polynomial::from_json(&atlas, &f.to_json()).unwrap(), f);
    }
}
