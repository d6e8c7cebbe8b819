mod common;

use std::sync::Arc;

use stomoyal_core::monte_carlo::{empirical_covariance, z_score, ConsistencyEntry, Estimate, Z_THRESHOLD};
use stomoyal_core::prelude::*;
use stomoyal_core::random::RandomFunctionals;
use stomoyal_core::scalar::to_f64;
use stomoyal_oracles::CholeskySampler;

const N: usize = 100_000;

fn xy_atlas() -> Arc<VariableAtlas> {
    let e = Kernel::from_integers(&[1, 1]).unwrap();
    VariableAtlas::new(
        2,
        vec![
            Variable::new("X", Component::One, e.clone()),
            Variable::new("Y", Component::Two, e),
            Variable::new("Z", Component::One, Kernel::zero(2).unwrap()),
        ],
    )
    .unwrap()
}

fn within(est: Estimate, exact: f64) -> bool {
    z_score(est.mean, est.stderr, exact) < Z_THRESHOLD
}

#[test]
fn variance_of_a_unit_kernel_variable() {
    let atlas = xy_atlas();
    let cfg = SamplerConfig::new(2024);
    let batch = realize_samples(&atlas, N, &cfg).unwrap();
    let x: Vec<f64> = batch.column(0).collect();
    let mean = x.iter().sum::<f64>() / N as f64;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (N as f64 - 1.0);
    assert!((var - 1.0).abs() < 5.0 * (2.0 / N as f64).sqrt(), "var = {var}");
    assert!(batch.column(2).all(|z| z == 0.0));
}

#[test]
fn moments_and_norms_match_exact_values() {
    let atlas = xy_atlas();
    let cfg = SamplerConfig::new(7);
    let batch = realize_samples(&atlas, N, &cfg).unwrap();
    let x = Polynomial::var(&atlas, 0);
    assert!(within(estimate_moment(&x.pow(2), &batch, &cfg).unwrap(), 1.0));
    assert!(within(estimate_moment(&x.pow(4), &batch, &cfg).unwrap(), 3.0));
    let norm = estimate_sobolev_norm(&x.pow(2), 1, 2.0, &batch, &cfg).unwrap();
    assert!(within(norm, 2.0), "{norm:?}");
    let norm = estimate_sobolev_norm(&x.pow(2), 1, 4.0, &batch, &cfg).unwrap();
    assert!(within(norm, 48f64.powf(0.25)), "{norm:?}");
    assert_eq!(estimate_sobolev_norm(&x, 1, 2.0, &batch, &cfg).unwrap(), Estimate { mean: 1.0, stderr: 0.0 });
}

#[test]
fn consistency_report_and_negative_control() {
    let atlas = xy_atlas();
    let cfg = SamplerConfig::new(99);
    let batch = realize_samples(&atlas, N, &cfg).unwrap();
    let x = Polynomial::var(&atlas, 0);
    let report = consistency_report(&x.pow(2), 1, &batch, &cfg).unwrap();
    assert!(!report.flagged(), "{report:?}");
    assert_eq!(report.entries.len(), 2);
    assert_eq!((report.seed, report.n, report.m), (99, N, 2));

    let c = Polynomial::constant(&atlas, rational(3));
    let report = consistency_report(&c, 0, &batch, &cfg).unwrap();
    assert!(report.entries.iter().all(|e| e.z == 0.0));

    // corrupt the oracle: E[X²] is 1, claim 1.1
    let est = estimate_moment(&x.pow(2), &batch, &cfg).unwrap();
    assert!(ConsistencyEntry::new("corrupted", est, 1.1).flagged);
}

#[test]
fn path_route_agrees_with_direct_gaussian_draws() {
    let mut gen = RandomFunctionals::new(31);
    let atlas = gen.atlas(4, 4);
    let cov = covariance_matrix(&atlas).to_f64();
    let cfg = SamplerConfig::new(5);
    let batch = realize_samples(&atlas, N, &cfg).unwrap();
    let mut direct = CholeskySampler::new(&cov, 5);
    for k in 0..5 {
        let f = gen.polynomial(&atlas, 4, 4);
        let path = estimate_moment(&f, &batch, &cfg).unwrap();
        let compiled = f.compile();
        let draws: Vec<f64> = (0..N).map(|_| compiled.evaluate(&direct.draw())).collect();
        let mean = draws.iter().sum::<f64>() / N as f64;
        let sd = (draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (N as f64 - 1.0)).sqrt();
        let se = sd / (N as f64).sqrt();
        let combined = (path.stderr.powi(2) + se.powi(2)).sqrt();
        let z = z_score(path.mean, combined, mean);
        assert!(z < Z_THRESHOLD, "poly {k}: path {path:?} direct {mean} ± {se}");
        let exact = to_f64(&expectation_exact(&f).unwrap());
        assert!(z_score(mean, se, exact) < Z_THRESHOLD);
    }
}

#[test]
fn empirical_covariance_and_cross_factor_independence() {
    let mut gen = RandomFunctionals::new(8);
    let atlas = gen.atlas(4, 4);
    let cfg = SamplerConfig::new(12);
    let batch = realize_samples(&atlas, N, &cfg).unwrap();
    let exact = covariance_matrix(&atlas).to_f64();
    let emp = empirical_covariance(&batch, &cfg).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!(within(emp[i][j], exact[i][j]), "({i},{j}): {:?} vs {}", emp[i][j], exact[i][j]);
            if atlas.component(i) != atlas.component(j) {
                assert_eq!(exact[i][j], 0.0);
            }
        }
    }
}

#[test]
fn estimates_do_not_depend_on_worker_count() {
    let mut gen = RandomFunctionals::new(4);
    let atlas = gen.atlas(3, 4);
    let f = gen.polynomial(&atlas, 4, 4);
    let base = SamplerConfig::new(77).with_chunk_size(1000);
    let results: Vec<_> = [1, 2, 8]
        .into_iter()
        .map(|w| {
            let cfg = base.with_workers(w);
            let batch = realize_samples(&atlas, 20_000, &cfg).unwrap();
            (estimate_moment(&f, &batch, &cfg).unwrap(), estimate_sobolev_norm(&f, 1, 3.0, &batch, &cfg).unwrap())
        })
        .collect();
    for r in &results[1..] {
        assert_eq!(r.0.mean.to_bits(), results[0].0.mean.to_bits());
        assert_eq!(r.0.stderr.to_bits(), results[0].0.stderr.to_bits());
        assert_eq!(r.1.mean.to_bits(), results[0].1.mean.to_bits());
    }
}
