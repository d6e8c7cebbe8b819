//! Piecewise-constant kernels on a uniform grid of `[0, 1]`.
//!
//! A [`Kernel`] stores the density `h(u)` on `m` cells, cell `k` covering
//! `[k/m, (k+1)/m)`. Products of such functions integrate exactly, so every
//! inner product below is an exact rational.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{exact_sqrt, format_rational, serde_rational_vec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("kernel has {actual} cell values but the grid has m = {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("grid resolution must be at least 1")]
    EmptyGrid,
    #[error("kernels live on different grids (m = {left} and m = {right})")]
    GridMismatch { left: usize, right: usize },
    #[error("kernel {index} is linearly dependent on the preceding kernels")]
    LinearDependence { index: usize },
    #[error("kernel {index} has a squared norm {norm_squared} with no rational square root")]
    IrrationalNorm { index: usize, norm_squared: String },
}

/// Which of the two independent Wiener factors a direction belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    One,
    Two,
}

impl Component {
    pub const ALL: [Component; 2] = [Component::One, Component::Two];

    pub fn index(self) -> u8 {
        match self {
            Component::One => 1,
            Component::Two => 2,
        }
    }

    pub fn other(self) -> Component {
        match self {
            Component::One => Component::Two,
            Component::Two => Component::One,
        }
    }
}

impl TryFrom<u8> for Component {
    type Error = u8;

    fn try_from(v: u8) -> Result<Self, u8> {
        match v {
            1 => Ok(Component::One),
            2 => Ok(Component::Two),
            other => Err(other),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u8::deserialize(d)?;
        Component::try_from(v).map_err(|v| serde::de::Error::custom(format!("component must be 1 or 2, got {v}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Kernel {
    values: Vec<Rational>,
}

impl Kernel {
    /// Builds a kernel from its cell values, checking them against `m`.
    pub fn new(values: Vec<Rational>, m: usize) -> Result<Self, KernelError> {
        if m == 0 {
            return Err(KernelError::EmptyGrid);
        }
        if values.len() != m {
            return Err(KernelError::LengthMismatch { expected: m, actual: values.len() });
        }
        Ok(Self { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, KernelError> {
        let vals: Vec<Rational> = values.iter().map(|&v| Rational::from_integer(v.into())).collect();
        Self::new(vals, values.len())
    }

    pub fn constant(value: Rational, m: usize) -> Result<Self, KernelError> {
        Self::new(vec![value; m], m)
    }

    pub fn zero(m: usize) -> Result<Self, KernelError> {
        Self::constant(Rational::zero(), m)
    }

    /// Grid resolution.
    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check_grid(&self, other: &Kernel) -> Result<(), KernelError> {
        if self.m() != other.m() {
            return Err(KernelError::GridMismatch { left: self.m(), right: other.m() });
        }
        Ok(())
    }

    /// `∫₀¹ h(s) g(s) ds = (1/m) Σ_k h_k g_k`.
    pub fn inner(&self, other: &Kernel) -> Result<Rational, KernelError> {
        self.check_grid(other)?;
        let sum = self.values.iter().zip(&other.values).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        Ok(sum / Rational::from_integer(self.m().into()))
    }

    pub fn norm_squared(&self) -> Rational {
        self.inner(self).expect("same grid")
    }

    pub fn scale(&self, factor: &Rational) -> Kernel {
        Kernel { values: self.values.iter().map(|v| v * factor).collect() }
    }

    pub fn try_add(&self, other: &Kernel) -> Result<Kernel, KernelError> {
        self.check_grid(other)?;
        Ok(Kernel { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    /// Discrete primitive `P_k = (1/m) Σ_{j ≤ k} h_j`, stored as cell values.
    pub fn primitive(&self) -> Kernel {
        let step = Rational::new(One::one(), self.m().into());
        let mut running = Rational::zero();
        let values = self
            .values
            .iter()
            .map(|v| {
                running += v * &step;
                running.clone()
            })
            .collect();
        Kernel { values }
    }

    /// Inverse of [`Kernel::primitive`]: `m (P_k − P_{k−1})` with `P_{−1} = 0`.
    pub fn difference_quotient(&self) -> Kernel {
        let m = Rational::from_integer(self.m().into());
        let mut prev = Rational::zero();
        let values = self
            .values
            .iter()
            .map(|v| {
                let d = (v - &prev) * &m;
                prev = v.clone();
                d
            })
            .collect();
        Kernel { values }
    }

    /// Splits every cell into `factor` equal cells carrying the same value.
    /// The represented function, and so every inner product, is unchanged.
    pub fn refine(&self, factor: usize) -> Kernel {
        assert!(factor >= 1, "refinement factor must be positive");
        let values = self.values.iter().flat_map(|v| std::iter::repeat_n(v.clone(), factor)).collect();
        Kernel { values }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(v))?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct KernelRepr {
    m: usize,
    #[serde(with = "serde_rational_vec")]
    values: Vec<Rational>,
}

impl Serialize for Kernel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        KernelRepr { m: self.m(), values: self.values.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Kernel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = KernelRepr::deserialize(d)?;
        Kernel::new(repr.values, repr.m).map_err(serde::de::Error::custom)
    }
}

/// `G[i][j] = inner(h_i, h_j)`.
pub fn gram_matrix(kernels: &[Kernel]) -> Result<Vec<Vec<Rational>>, KernelError> {
    kernels.iter().map(|h| kernels.iter().map(|g| h.inner(g)).collect()).collect()
}

/// Classical Gram–Schmidt in input order with exact arithmetic.
///
/// Normalization needs an exact square root, so a family whose projected
/// residuals have irrational norms is rejected with
/// [`KernelError::IrrationalNorm`].
pub fn gram_schmidt(kernels: &[Kernel]) -> Result<Vec<Kernel>, KernelError> {
    let mut basis: Vec<Kernel> = Vec::with_capacity(kernels.len());
    for (index, h) in kernels.iter().enumerate() {
        let mut residual = h.clone();
        for q in &basis {
            let proj = h.inner(q)?;
            residual = residual.try_add(&q.scale(&-proj))?;
        }
        let norm_squared = residual.norm_squared();
        if norm_squared.is_zero() {
            return Err(KernelError::LinearDependence { index });
        }
        let norm = exact_sqrt(&norm_squared)
            .ok_or_else(|| KernelError::IrrationalNorm { index, norm_squared: format_rational(&norm_squared) })?;
        basis.push(residual.scale(&norm.recip()));
    }
    Ok(basis)
}

/// How the kernels of two slots are contracted in the pairing of derivative
/// tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MetricProfile {
    /// Plain `L²([0,1])` quadrature on both factors.
    #[default]
    Flat,
    /// Phase-space reading: kernels of slots on `primitive_component` are
    /// replaced by their primitives before the flat contraction.
    PhaseSpace { primitive_component: Component },
}

impl MetricProfile {
    /// The phase-space metric with primitives taken on the second factor.
    pub const PHASE_SPACE: MetricProfile = MetricProfile::PhaseSpace { primitive_component: Component::Two };

    pub fn name(&self) -> &'static str {
        match self {
            MetricProfile::Flat => "flat",
            MetricProfile::PhaseSpace { .. } => "phase_space",
        }
    }

    /// The kernel actually used for a slot carrying `component`.
    pub fn effective_kernel(&self, h: &Kernel, component: Component) -> Kernel {
        match *self {
            MetricProfile::PhaseSpace { primitive_component } if component == primitive_component => h.primitive(),
            _ => h.clone(),
        }
    }
}

/// Single-slot contraction of two kernels under `metric`, where
/// `slot_components` are the components of the two slots.
pub fn contract(
    h: &Kernel,
    g: &Kernel,
    metric: MetricProfile,
    slot_components: (Component, Component),
) -> Result<Rational, KernelError> {
    match metric {
        MetricProfile::Flat => h.inner(g),
        MetricProfile::PhaseSpace { .. } => {
            let a = metric.effective_kernel(h, slot_components.0);
            let b = metric.effective_kernel(g, slot_components.1);
            a.inner(&b)
        }
    }
}
