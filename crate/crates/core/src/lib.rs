//! Exact stochastic Moyal products on a grid model of the Wiener space.
//!
//! The model works on `H = L²([0,1]) ⊕ L²([0,1])`, two independent Wiener
//! factors, with directions of differentiation given by piecewise-constant
//! [`Kernel`]s. Functionals are polynomials in the Gaussian variables
//! `X_i = ∫ h_i dW^{(α_i)}`, which is enough to make every operation exact:
//!
//! * [`kernel`]: grid kernels, inner products, primitives, Gram–Schmidt.
//! * [`functional`]: the polynomial algebra and Malliavin derivatives.
//! * [`star`]: pairings, the cochains `C_r`, the Poisson bracket, the Moyal
//!   series and the star-product axiom checker.
//! * [`moments`]: exact Gaussian moments and `p = 2` Sobolev norms.
//! * [`monte_carlo`]: seeded, scheduling-independent sampling estimates.
//!
//! ```
//! use stomoyal_core::prelude::*;
//!
//! let e = Kernel::from_integers(&[1, 1]).unwrap();
//! let atlas = VariableAtlas::new(2, vec![
//!     Variable::new("X", Component::One, e.clone()),
//!     Variable::new("Y", Component::Two, e),
//! ]).unwrap();
//! let x = Polynomial::variable(&atlas, "X").unwrap();
//! let y = Polynomial::variable(&atlas, "Y").unwrap();
//!
//! let series = moyal_product(&x, &y, Truncation::Auto, MetricProfile::Flat).unwrap();
//! assert_eq!(series.to_string(), "X*Y + h");
//! ```

pub mod functional;
pub mod kernel;
pub mod moments;
pub mod monte_carlo;
pub mod random;
pub mod scalar;
pub mod star;

pub use functional::{AlgebraError, DerivativeTensor, Polynomial, Variable, VariableAtlas};
pub use kernel::{Component, Kernel, KernelError, MetricProfile};
pub use scalar::Rational;
pub use star::{FormalSeries, StarError, Truncation};

pub mod prelude {
    pub use crate::functional::{Polynomial, Variable, VariableAtlas};
    pub use crate::kernel::{contract, gram_matrix, gram_schmidt, Component, Kernel, MetricProfile};
    pub use crate::moments::{covariance_matrix, expectation_exact, sobolev_norm_exact_p2, GaussianMoments};
    pub use crate::monte_carlo::{
        consistency_report, estimate_moment, estimate_sobolev_norm, realize_samples, SamplerConfig,
    };
    pub use crate::scalar::{parse_rational, ratio, rational, Rational};
    pub use crate::star::{
        apply_r_differential, check_poisson_axioms, check_star_axioms, cochain, moyal_product, pairing,
        poisson_bracket, series_combine, FormalSeries, RDifferentialSpec, SeriesOp, Truncation,
    };
}

// The guide's code listings compile and run as doctests of this crate.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/functionals.md")]
    mod functionals {}
    #[doc = include_str!("../../../book/src/star_product.md")]
    mod star_product {}
    #[doc = include_str!("../../../book/src/phase_space.md")]
    mod phase_space {}
    #[doc = include_str!("../../../book/src/moments.md")]
    mod moments {}
    #[doc = include_str!("../../../book/src/monte_carlo.md")]
    mod monte_carlo {}
}
