//! Polynomial cylindrical functionals.
//!
//! A functional `F = p(X_1, …, X_n)` is a polynomial in Gaussian variables
//! `X_i = ∫ h_i dW^{(α_i)}`. The [`VariableAtlas`] fixes the variables, their
//! Wiener factor `α_i` and their kernel `h_i`; a [`Polynomial`] is a sparse
//! map from exponent vectors to exact rational coefficients over an atlas.
//!
//! The Malliavin derivative of such an `F` in the direction of factor `α` is
//! `∇_α F(s) = Σ_{i : α_i = α} ∂p/∂X_i · h_i(s)`, and higher derivatives are
//! the mixed partials collected in a [`DerivativeTensor`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::kernel::{contract, Component, Kernel, KernelError, MetricProfile};
use crate::scalar::{format_rational, parse_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("functionals live on different atlases: {left} vs {right}")]
    AtlasMismatch { left: String, right: String },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("assignment is missing variable {0:?}")]
    MissingVariable(String),
    #[error("variable {0:?} is declared twice")]
    DuplicateVariable(String),
    #[error("invalid variable name {0:?}")]
    InvalidName(String),
    #[error("variable {name:?}: {source}")]
    Kernel { name: String, source: KernelError },
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// One declared Gaussian variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub component: Component,
    pub kernel: Kernel,
}

impl Variable {
    pub fn new(name: impl Into<String>, component: Component, kernel: Kernel) -> Self {
        Self { name: name.into(), component, kernel }
    }
}

/// The ordered declaration of the variables a family of functionals uses.
///
/// Declaration order fixes the canonical monomial order.
#[derive(Debug)]
pub struct VariableAtlas {
    m: usize,
    variables: Vec<Variable>,
    flat: OnceLock<Vec<Vec<Rational>>>,
    phase: [OnceLock<Vec<Vec<Rational>>>; 2],
}

/// `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableAtlas {
    pub fn new(m: usize, variables: Vec<Variable>) -> Result<Arc<Self>, AlgebraError> {
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(&v.name) {
                return Err(AlgebraError::InvalidName(v.name.clone()));
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(AlgebraError::DuplicateVariable(v.name.clone()));
            }
            if v.kernel.m() != m {
                return Err(AlgebraError::Kernel {
                    name: v.name.clone(),
                    source: KernelError::LengthMismatch { expected: m, actual: v.kernel.m() },
                });
            }
        }
        Ok(Arc::new(Self { m, variables, flat: OnceLock::new(), phase: [OnceLock::new(), OnceLock::new()] }))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn component(&self, index: usize) -> Component {
        self.variables[index].component
    }

    /// `M[i][j] = contract(h_i, h_j, metric, (α_i, α_j))`, computed once per
    /// metric and cached.
    pub fn contraction_matrix(&self, metric: MetricProfile) -> &[Vec<Rational>] {
        let cell = match metric {
            MetricProfile::Flat => &self.flat,
            MetricProfile::PhaseSpace { primitive_component: Component::One } => &self.phase[0],
            MetricProfile::PhaseSpace { primitive_component: Component::Two } => &self.phase[1],
        };
        cell.get_or_init(|| {
            self.variables
                .iter()
                .map(|a| {
                    self.variables
                        .iter()
                        .map(|b| {
                            contract(&a.kernel, &b.kernel, metric, (a.component, b.component))
                                .expect("atlas kernels share one grid")
                        })
                        .collect()
                })
                .collect()
        })
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl PartialEq for VariableAtlas {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.variables == other.variables
    }
}

impl Eq for VariableAtlas {}

impl fmt::Display for VariableAtlas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.variables.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", v.name, v.component)?;
        }
        write!(f, "] on m = {}", self.m)
    }
}

/// Exponent vector in atlas order.
///
/// Ordered graded-lexicographically, largest first: higher total degree
/// sorts earlier, ties broken by the exponent of the earliest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial functional with exact rational coefficients.
#[derive(Clone)]
pub struct Polynomial {
    atlas: Arc<VariableAtlas>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(atlas: &Arc<VariableAtlas>) -> Self {
        Self { atlas: atlas.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(atlas: &Arc<VariableAtlas>, c: Rational) -> Self {
        let mut p = Self::zero(atlas);
        p.add_term(Monomial::one(atlas.len()), c);
        p
    }

    pub fn one(atlas: &Arc<VariableAtlas>) -> Self {
        Self::constant(atlas, Rational::one())
    }

    /// The coordinate functional `X_index`.
    pub fn var(atlas: &Arc<VariableAtlas>, index: usize) -> Self {
        let mut e = vec![0; atlas.len()];
        e[index] = 1;
        let mut p = Self::zero(atlas);
        p.add_term(Monomial(e), Rational::one());
        p
    }

    pub fn variable(atlas: &Arc<VariableAtlas>, name: &str) -> Result<Self, AlgebraError> {
        let i = atlas.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
        Ok(Self::var(atlas, i))
    }

    pub fn from_terms(atlas: &Arc<VariableAtlas>, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(atlas);
        for (e, c) in terms {
            assert_eq!(e.len(), atlas.len(), "exponent vector length must match the atlas");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn atlas(&self) -> &Arc<VariableAtlas> {
        &self.atlas
    }

    /// Terms in canonical (graded-lex, descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next().map_or(0, Monomial::degree)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.atlas.len())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Whether `X_index` occurs in some term.
    pub fn uses_variable(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.0[index] > 0)
    }

    fn check_atlas(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.atlas.same(&other.atlas) {
            Ok(())
        } else {
            Err(AlgebraError::AtlasMismatch { left: self.atlas.to_string(), right: other.atlas.to_string() })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_atlas(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_atlas(other)?;
        let mut out = Polynomial::zero(&self.atlas);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(&self.atlas);
        }
        Polynomial {
            atlas: self.atlas.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.atlas);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// `∂p/∂X_index`.
    pub fn partial(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.atlas);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[index] -= 1;
            out.add_term(Monomial(d), c * Rational::from_integer(e.into()));
        }
        out
    }

    /// `∇_component F` as a finite list of (kernel, coefficient functional)
    /// pairs, one per contributing variable in atlas order.
    pub fn malliavin_derivative(&self, component: Component) -> Vec<(Kernel, Polynomial)> {
        (0..self.atlas.len())
            .filter(|&i| self.atlas.component(i) == component)
            .filter_map(|i| {
                let d = self.partial(i);
                (!d.is_zero()).then(|| (self.atlas.variable(i).kernel.clone(), d))
            })
            .collect()
    }

    /// All mixed partials of order `r`.
    pub fn derivative_tensor(&self, r: usize) -> DerivativeTensor {
        let n = self.atlas.len();
        // Nondecreasing index tuples first; mixed partials commute.
        let mut level: Vec<(Vec<usize>, Polynomial)> = Vec::new();
        if !self.is_zero() {
            level.push((Vec::new(), self.clone()));
        }
        for _ in 0..r {
            let mut next = Vec::new();
            for (tuple, p) in &level {
                let start = tuple.last().copied().unwrap_or(0);
                for i in start..n {
                    let d = p.partial(i);
                    if !d.is_zero() {
                        let mut t = tuple.clone();
                        t.push(i);
                        next.push((t, d));
                    }
                }
            }
            level = next;
        }
        let mut entries = BTreeMap::new();
        for (sorted, p) in level {
            let mut perm = sorted.clone();
            loop {
                entries.insert(perm.clone(), p.clone());
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        DerivativeTensor { order: r, atlas: self.atlas.clone(), entries }
    }

    /// Floating-point evaluation at a named assignment.
    pub fn evaluate(&self, assignment: &HashMap<String, f64>) -> Result<f64, AlgebraError> {
        let values = self.gather(assignment, |v| *v, 0.0)?;
        Ok(self.evaluate_at(&values))
    }

    /// Exact evaluation at a rational assignment.
    pub fn evaluate_exact(&self, assignment: &HashMap<String, Rational>) -> Result<Rational, AlgebraError> {
        let values = self.gather(assignment, Clone::clone, Rational::zero())?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in values.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        Ok(total)
    }

    fn gather<T: Clone, V>(
        &self,
        assignment: &HashMap<String, V>,
        conv: impl Fn(&V) -> T,
        unused: T,
    ) -> Result<Vec<T>, AlgebraError> {
        (0..self.atlas.len())
            .map(|i| {
                let name = &self.atlas.variable(i).name;
                match assignment.get(name) {
                    Some(v) => Ok(conv(v)),
                    None if self.uses_variable(i) => Err(AlgebraError::MissingVariable(name.clone())),
                    None => Ok(unused.clone()),
                }
            })
            .collect()
    }

    /// Evaluation at values given in atlas order.
    pub fn evaluate_at(&self, values: &[f64]) -> f64 {
        self.compile().evaluate(values)
    }

    /// Floating-point form for repeated evaluation.
    pub fn compile(&self) -> CompiledPolynomial {
        CompiledPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let factors = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as i32)).collect();
                    (to_f64(c), factors)
                })
                .collect(),
        }
    }

    /// JSON object mirroring the sparse term map.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomial serialization is infallible")
    }

    /// Inverse of [`Polynomial::to_json`] against a known atlas.
    pub fn from_json(atlas: &Arc<VariableAtlas>, value: &serde_json::Value) -> Result<Polynomial, AlgebraError> {
        let bad = |msg: &str| AlgebraError::Json(msg.to_string());
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| bad("expected an object with a \"terms\" array"))?;
        let mut p = Polynomial::zero(atlas);
        for term in terms {
            let coeff = term
                .get("coefficient")
                .and_then(|c| c.as_str())
                .ok_or_else(|| bad("term without a string \"coefficient\""))?;
            let coeff = parse_rational(coeff).map_err(|e| AlgebraError::Json(e.to_string()))?;
            let mono = term
                .get("monomial")
                .and_then(|m| m.as_object())
                .ok_or_else(|| bad("term without a \"monomial\" object"))?;
            let mut e = vec![0u32; atlas.len()];
            for (name, power) in mono {
                let i = atlas.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.clone()))?;
                e[i] = power
                    .as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| bad("exponents must be nonnegative integers"))?;
            }
            p.add_term(Monomial(e), coeff);
        }
        Ok(p)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.atlas.same(&other.atlas) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Writes `c·monomial·extra` in canonical form, `first` controlling the sign
/// layout (`-X` vs ` - X`).
pub(crate) fn write_term(out: &mut String, first: bool, coeff: &Rational, factors: &[(String, u32)]) {
    let negative = coeff.is_negative();
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let magnitude = coeff.abs();
    let mut parts: Vec<String> = Vec::new();
    if !magnitude.is_one() || factors.is_empty() {
        parts.push(format_rational(&magnitude));
    }
    for (name, e) in factors {
        if *e == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    out.push_str(&parts.join("*"));
}

impl Polynomial {
    pub(crate) fn named_factors(&self, m: &Monomial) -> Vec<(String, u32)> {
        m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (self.atlas.variable(i).name.clone(), e)).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            write_term(&mut out, i == 0, c, &self.named_factors(m));
        }
        f.write_str(&out)
    }
}

struct MonomialJson<'a>(&'a Polynomial, &'a Monomial);

impl Serialize for MonomialJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let factors = self.0.named_factors(self.1);
        let mut map = s.serialize_map(Some(factors.len()))?;
        for (name, e) in &factors {
            map.serialize_entry(name, e)?;
        }
        map.end()
    }
}

struct TermJson<'a>(&'a Polynomial, &'a Monomial, &'a Rational);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("coefficient", &format_rational(self.2))?;
        st.serialize_field("monomial", &MonomialJson(self.0, self.1))?;
        st.end()
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson<'_>> = self.terms.iter().map(|(m, c)| TermJson(self, m, c)).collect();
        let mut st = s.serialize_struct("Polynomial", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// # Panics
    /// If the operands live on different atlases; use
    /// [`Polynomial::checked_add`] to get an error instead.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { atlas: self.atlas.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// `∇^r F`: mixed partials indexed by ordered tuples of atlas indices.
/// Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTensor {
    order: usize,
    atlas: Arc<VariableAtlas>,
    entries: BTreeMap<Vec<usize>, Polynomial>,
}

impl DerivativeTensor {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&Polynomial> {
        self.entries.get(tuple)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.entries.iter()
    }

    /// Entries whose slot `k` is a variable of component `components[k]`.
    pub fn restricted<'a>(
        &'a self,
        components: &'a [Component],
    ) -> impl Iterator<Item = (&'a Vec<usize>, &'a Polynomial)> + 'a {
        self.entries.iter().filter(move |(t, _)| {
            t.len() == components.len() && t.iter().zip(components).all(|(&i, &c)| self.atlas.component(i) == c)
        })
    }
}

/// A polynomial lowered to `f64` for sampling loops.
#[derive(Debug, Clone)]
pub struct CompiledPolynomial {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPolynomial {
    pub fn evaluate(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|(c, factors)| factors.iter().fold(*c, |acc, &(i, e)| acc * values[i].powi(e))).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, rational};

    fn atlas() -> Arc<VariableAtlas> {
        let e = Kernel::from_integers(&[1, 1]).unwrap();
        VariableAtlas::new(
            2,
            vec![Variable::new("X", Component::One, e.clone()), Variable::new("Y", Component::Two, e)],
        )
        .unwrap()
    }

    #[test]
    fn ring_identities() {
        let a = atlas();
        let x = Polynomial::variable(&a, "X").unwrap();
        let y = Polynomial::variable(&a, "Y").unwrap();
        assert_eq!(&x + &x, x.scale(&rational(2)));
        assert_eq!(&(&x + &y) * &(&x - &y), &x.pow(2) - &y.pow(2));
        assert_eq!((&x * &y).pow(2), &x.pow(2) * &y.pow(2));
        assert_eq!((&x - &y).to_string(), "X - Y");
    }

    #[test]
    fn atlas_mismatch_is_an_error() {
        let a = atlas();
        let b = VariableAtlas::new(1, vec![Variable::new("Z", Component::One, Kernel::from_integers(&[1]).unwrap())])
            .unwrap();
        let err = Polynomial::var(&a, 0).checked_mul(&Polynomial::var(&b, 0)).unwrap_err();
        assert!(err.to_string().contains("X:1, Y:2") && err.to_string().contains("Z:1"));
    }

    #[test]
    fn atlas_validation() {
        let e = Kernel::from_integers(&[1, 1]).unwrap();
        assert!(matches!(
            VariableAtlas::new(2, vec![Variable::new("X", Component::One, e.clone()); 2]),
            Err(AlgebraError::DuplicateVariable(_))
        ));
        assert!(matches!(
            VariableAtlas::new(3, vec![Variable::new("X", Component::One, e.clone())]),
            Err(AlgebraError::Kernel { .. })
        ));
        assert!(matches!(
            VariableAtlas::new(2, vec![Variable::new("1X", Component::One, e)]),
            Err(AlgebraError::InvalidName(_))
        ));
    }

    #[test]
    fn malliavin_derivatives() {
        let a = atlas();
        let e = Kernel::from_integers(&[1, 1]).unwrap();
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        assert_eq!(x.pow(2).malliavin_derivative(Component::One), vec![(e.clone(), x.scale(&rational(2)))]);
        assert!(x.pow(2).malliavin_derivative(Component::Two).is_empty());
        assert_eq!((&x * &y).malliavin_derivative(Component::One), vec![(e, y.clone())]);
        assert!(Polynomial::constant(&a, rational(3)).malliavin_derivative(Component::One).is_empty());
    }

    #[test]
    fn tensors() {
        let a = atlas();
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        let t = x.pow(2).derivative_tensor(2);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(&[0, 0]), Some(&Polynomial::constant(&a, rational(2))));
        let t = (&x * &y).derivative_tensor(2);
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(&[0, 1]), Some(&Polynomial::one(&a)));
        assert_eq!(t.get(&[1, 0]), Some(&Polynomial::one(&a)));
        assert!(x.derivative_tensor(2).is_zero());
        let t0 = (&x * &y).derivative_tensor(0);
        assert_eq!(t0.get(&[]), Some(&(&x * &y)));
    }

    #[test]
    fn evaluation() {
        let a = atlas();
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        let f = &(&x * &y) + &Polynomial::one(&a);
        let assign: HashMap<String, f64> = [("X".into(), 2.0), ("Y".into(), -1.0)].into();
        assert_eq!(f.evaluate(&assign).unwrap(), -1.0);
        assert_eq!(x.pow(2).evaluate(&[("X".into(), 3.0)].into()).unwrap(), 9.0);
        assert_eq!(Polynomial::constant(&a, rational(5)).evaluate(&HashMap::new()).unwrap(), 5.0);
        assert_eq!(f.evaluate(&[("X".into(), 2.0)].into()), Err(AlgebraError::MissingVariable("Y".into())));
        let exact: HashMap<String, Rational> = [("X".into(), ratio(1, 2)), ("Y".into(), rational(3))].into();
        assert_eq!(f.evaluate_exact(&exact).unwrap(), ratio(5, 2));
    }

    #[test]
    fn canonical_text_and_json() {
        let a = atlas();
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        let f = &(&(&y.pow(2) - &x.scale(&ratio(1, 2))) + &(&x.pow(2) * &y)) + &Polynomial::constant(&a, rational(-3));
        assert_eq!(f.to_string(), "X^2*Y + Y^2 - 1/2*X - 3");
        assert_eq!((-&x).to_string(), "-X");
        assert_eq!(Polynomial::zero(&a).to_string(), "0");
        let json = serde_json::to_string(&(&x * &y).scale(&rational(4))).unwrap();
        assert_eq!(json, r#"{"terms":[{"coefficient":"4","monomial":{"X":1,"Y":1}}]}"#);
        assert_eq!(Polynomial::from_json(&a, &f.to_json()).unwrap(), f);
    }
}
