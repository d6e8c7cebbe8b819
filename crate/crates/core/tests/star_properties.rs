mod common;

use common::{canonical_atlas, small_atlas, to_ref_poly, CANONICAL_PAIRS};
use stomoyal_core::prelude::*;
use stomoyal_core::random::RandomFunctionals;
use stomoyal_core::star::SeriesOp;
use stomoyal_oracles::textbook_moyal;

const METRICS: [MetricProfile; 2] = [MetricProfile::Flat, MetricProfile::PHASE_SPACE];

#[test]
fn matches_textbook_moyal_on_orthonormal_kernels() {
    for seed in 0..30 {
        let mut gen = RandomFunctionals::new(1000 + seed);
        let atlas = canonical_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 4, 4);
        let g = gen.polynomial(&atlas, 4, 4);
        let series = moyal_product(&f, &g, Truncation::Order(4), MetricProfile::Flat).unwrap();
        let oracle = textbook_moyal(&to_ref_poly(&f), &to_ref_poly(&g), &CANONICAL_PAIRS, 4);
        for (r, expected) in oracle.iter().enumerate() {
            assert_eq!(&to_ref_poly(&series.coefficients()[r]), expected, "seed {seed}, h^{r}");
        }
    }
}

#[test]
fn associativity_is_exact() {
    for metric in METRICS {
        for seed in 0..15 {
            let mut gen = RandomFunctionals::new(seed);
            let atlas = small_atlas(&mut gen);
            let [f, g, h] = [0; 3].map(|_| gen.polynomial(&atlas, 3, 4));
            let fg = moyal_product(&f, &g, Truncation::Auto, metric).unwrap();
            let gh = moyal_product(&g, &h, Truncation::Auto, metric).unwrap();
            let left = series_combine(&fg, &FormalSeries::from_polynomial(h.clone()), SeriesOp::Star(metric)).unwrap();
            let right = series_combine(&FormalSeries::from_polynomial(f.clone()), &gh, SeriesOp::Star(metric)).unwrap();
            assert!(left.terminated() && right.terminated());
            let top = left.truncation_order().max(right.truncation_order());
            assert!(left.agrees_through(&right, top), "seed {seed}: {left} vs {right}");
        }
    }
}

#[test]
fn low_order_cochains() {
    for metric in METRICS {
        for seed in 100..140 {
            let mut gen = RandomFunctionals::new(seed);
            let atlas = small_atlas(&mut gen);
            let f = gen.polynomial(&atlas, 3, 4);
            let g = gen.polynomial(&atlas, 3, 4);
            assert_eq!(cochain(&f, &g, 0, metric).unwrap(), &f * &g);
            let anti = &cochain(&f, &g, 1, metric).unwrap() - &cochain(&g, &f, 1, metric).unwrap();
            let bracket = poisson_bracket(&f, &g, metric).unwrap();
            assert_eq!(anti, bracket.scale(&rational(2)));
            assert_eq!(bracket, cochain(&f, &g, 1, metric).unwrap());
        }
    }
}

#[test]
fn cochains_vanish_past_the_degree_bound() {
    for seed in 200..230 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 3, 4);
        let g = gen.polynomial(&atlas, 4, 4);
        let bound = f.degree().min(g.degree()) as usize;
        for r in bound + 1..=bound + 2 {
            let via_spec =
                apply_r_differential(&RDifferentialSpec::cochain(r, MetricProfile::Flat), &[f.clone(), g.clone()]);
            assert!(via_spec.unwrap().is_zero());
            assert!(cochain(&f, &g, r, MetricProfile::Flat).unwrap().is_zero());
        }
        for r in (1..=3).step_by(2) {
            assert!(cochain(&f, &f, r, MetricProfile::Flat).unwrap().is_zero(), "odd r = {r}");
        }
    }
}

#[test]
fn pairing_swap_symmetry() {
    use Component::{One, Two};
    let strings = [vec![One, One], vec![One, Two], vec![Two, One], vec![Two, Two]];
    for metric in METRICS {
        for seed in 300..310 {
            let mut gen = RandomFunctionals::new(seed);
            let atlas = small_atlas(&mut gen);
            let f = gen.polynomial(&atlas, 3, 3);
            let g = gen.polynomial(&atlas, 3, 3);
            for a in &strings {
                for b in &strings {
                    assert_eq!(pairing(&f, &g, 2, a, b, metric).unwrap(), pairing(&g, &f, 2, b, a, metric).unwrap());
                }
            }
        }
    }
}

#[test]
fn bracket_is_a_poisson_structure() {
    for metric in METRICS {
        for seed in 400..430 {
            let mut gen = RandomFunctionals::new(seed);
            let atlas = small_atlas(&mut gen);
            let [f, g, h] = [0; 3].map(|_| gen.polynomial(&atlas, 3, 4));
            let report = check_poisson_axioms(&f, &g, &h, metric).unwrap();
            assert!(report.all_passed(), "seed {seed}\n{report}");
        }
    }
}

#[test]
fn bidifferential_form_reproduces_cochains() {
    for seed in 500..520 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 3, 4);
        let g = gen.polynomial(&atlas, 3, 4);
        for r in 0..=3 {
            for metric in METRICS {
                let spec = RDifferentialSpec::cochain(r, metric);
                assert_eq!(
                    apply_r_differential(&spec, &[f.clone(), g.clone()]).unwrap(),
                    cochain(&f, &g, r, metric).unwrap()
                );
            }
        }
        // multilinearity of a generic operator
        let grad = RDifferentialSpec::gradient_pairing(MetricProfile::Flat);
        let h = gen.polynomial(&atlas, 3, 4);
        let lhs = apply_r_differential(&grad, &[&f + &h.scale(&rational(3)), g.clone()]).unwrap();
        let rhs = &apply_r_differential(&grad, &[f.clone(), g.clone()]).unwrap()
            + &apply_r_differential(&grad, &[h.clone(), g.clone()]).unwrap().scale(&rational(3));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn unit_is_neutral() {
    for seed in 600..610 {
        let mut gen = RandomFunctionals::new(seed);
        let atlas = small_atlas(&mut gen);
        let f = gen.polynomial(&atlas, 3, 4);
        let one = Polynomial::one(&atlas);
        for (a, b) in [(&f, &one), (&one, &f)] {
            let s = moyal_product(a, b, Truncation::Order(3), MetricProfile::Flat).unwrap();
            assert_eq!(s.coefficients()[0], f);
            assert!(s.coefficients()[1..].iter().all(Polynomial::is_zero));
        }
    }
}
