//! The stochastic Moyal product.
//!
//! With `Λ` the constant symplectic matrix on the two Wiener factors
//! (`Λ^{1,2} = 1`, `Λ^{2,1} = −1`), the bidifferential cochains are
//!
//! ```text
//! C_r(F, G) = Σ_{α, β ∈ {1,2}^r} Λ^{α_1 β_1} ⋯ Λ^{α_r β_r} ⟨∇^r_α F, ∇^r_β G⟩
//! ```
//!
//! and the product is the formal series `F ⋆ G = Σ_r ħ^r / r! · C_r(F, G)`.
//! On polynomial functionals `C_r` vanishes once `r` exceeds the smaller
//! degree, so every series here is an exact finite object.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::functional::{write_term, AlgebraError, DerivativeTensor, Polynomial, VariableAtlas};
use crate::kernel::{Component, MetricProfile};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StarError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("component strings must have length r = {r}, got {alpha} and {beta}")]
    ComponentLength { r: usize, alpha: usize, beta: usize },
    #[error("operator has arity {expected} but was given {actual} arguments")]
    Arity { expected: usize, actual: usize },
    #[error("invalid r-differential specification: {0}")]
    InvalidSpec(String),
}

/// The constant 2×2 symplectic matrix on the pair of Wiener factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymplecticPair;

impl SymplecticPair {
    /// `Λ^{α,β}`.
    pub fn entry(alpha: Component, beta: Component) -> i32 {
        match (alpha, beta) {
            (Component::One, Component::Two) => 1,
            (Component::Two, Component::One) => -1,
            _ => 0,
        }
    }

    /// `Π_k Λ^{α_k β_k}`.
    pub fn weight(alpha: &[Component], beta: &[Component]) -> i32 {
        alpha.iter().zip(beta).map(|(&a, &b)| Self::entry(a, b)).product()
    }
}

fn factorial(r: usize) -> Rational {
    (1..=r).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

fn same_atlas(f: &Polynomial, g: &Polynomial) -> Result<(), StarError> {
    // checked_add reports the mismatch with both atlases named
    if Arc::ptr_eq(f.atlas(), g.atlas()) || f.atlas() == g.atlas() {
        Ok(())
    } else {
        Err(f.checked_add(g).unwrap_err().into())
    }
}

/// Every string in `{1,2}^r`, in lexicographic order.
fn component_strings(r: usize) -> Vec<Vec<Component>> {
    (0..1usize << r)
        .map(|bits| {
            (0..r).map(|k| if bits >> (r - 1 - k) & 1 == 0 { Component::One } else { Component::Two }).collect()
        })
        .collect()
}

/// `Σ_{i⃗, j⃗} ∂_{i⃗}F · ∂_{j⃗}G · Π_k M[i_k][j_k]` over tensor entries
/// restricted to the component strings.
fn pair_tensors(
    atlas: &Arc<VariableAtlas>,
    tf: &DerivativeTensor,
    tg: &DerivativeTensor,
    alpha: &[Component],
    beta: &[Component],
    metric: MetricProfile,
) -> Polynomial {
    let matrix = atlas.contraction_matrix(metric);
    let g_entries: Vec<_> = tg.restricted(beta).collect();
    let mut total = Polynomial::zero(atlas);
    if g_entries.is_empty() {
        return total;
    }
    for (i_tuple, df) in tf.restricted(alpha) {
        let mut partner = Polynomial::zero(atlas);
        for (j_tuple, dg) in &g_entries {
            let w = i_tuple.iter().zip(j_tuple.iter()).fold(Rational::one(), |acc, (&i, &j)| acc * &matrix[i][j]);
            if !w.is_zero() {
                partner = &partner + &dg.scale(&w);
            }
        }
        if !partner.is_zero() {
            total = &total + &(df * &partner);
        }
    }
    total
}

/// `⟨∇^r_α F, ∇^r_β G⟩`: full contraction of the order-`r` derivative
/// tensors, slot `k` of `F` restricted to factor `α_k` and of `G` to `β_k`.
pub fn pairing(
    f: &Polynomial,
    g: &Polynomial,
    r: usize,
    alpha: &[Component],
    beta: &[Component],
    metric: MetricProfile,
) -> Result<Polynomial, StarError> {
    if alpha.len() != r || beta.len() != r {
        return Err(StarError::ComponentLength { r, alpha: alpha.len(), beta: beta.len() });
    }
    same_atlas(f, g)?;
    let tf = f.derivative_tensor(r);
    let tg = g.derivative_tensor(r);
    Ok(pair_tensors(f.atlas(), &tf, &tg, alpha, beta, metric))
}

/// The bidifferential cochain `C_r(F, G)`; `C_0(F, G) = FG`.
pub fn cochain(f: &Polynomial, g: &Polynomial, r: usize, metric: MetricProfile) -> Result<Polynomial, StarError> {
    same_atlas(f, g)?;
    if r == 0 {
        return Ok(f * g);
    }
    let atlas = f.atlas();
    if r as u32 > f.degree().min(g.degree()) {
        return Ok(Polynomial::zero(atlas));
    }
    let tf = f.derivative_tensor(r);
    let tg = g.derivative_tensor(r);
    let strings = component_strings(r);
    let mut total = Polynomial::zero(atlas);
    for alpha in &strings {
        for beta in &strings {
            let w = SymplecticPair::weight(alpha, beta);
            if w == 0 {
                continue;
            }
            let term = pair_tensors(atlas, &tf, &tg, alpha, beta, metric);
            if !term.is_zero() {
                total = &total + &term.scale(&Rational::from_integer(w.into()));
            }
        }
    }
    Ok(total)
}

/// `{F, G} = ⟨∇_1 F, ∇_2 G⟩ − ⟨∇_1 G, ∇_2 F⟩`.
pub fn poisson_bracket(f: &Polynomial, g: &Polynomial, metric: MetricProfile) -> Result<Polynomial, StarError> {
    let one = [Component::One];
    let two = [Component::Two];
    let a = pairing(f, g, 1, &one, &two, metric)?;
    let b = pairing(g, f, 1, &one, &two, metric)?;
    Ok(&a - &b)
}

/// How many orders of ħ to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    Order(usize),
    /// Up to `min(deg F, deg G)`, past which every cochain vanishes.
    #[default]
    Auto,
}

/// A truncation `Σ_{r ≤ N} ħ^r F_r` of an element of the formal series ring.
///
/// `terminated` records that every coefficient past `N` is known to vanish,
/// i.e. the stored list is the exact series.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries {
    atlas: Arc<VariableAtlas>,
    coefficients: Vec<Polynomial>,
    terminated: bool,
}

impl FormalSeries {
    pub fn new(coefficients: Vec<Polynomial>, terminated: bool) -> Self {
        assert!(!coefficients.is_empty(), "a series stores at least the ħ^0 coefficient");
        let atlas = coefficients[0].atlas().clone();
        Self { atlas, coefficients, terminated }
    }

    /// The exact series with a single ħ^0 term.
    pub fn from_polynomial(p: Polynomial) -> Self {
        Self::new(vec![p], true)
    }

    pub fn atlas(&self) -> &Arc<VariableAtlas> {
        &self.atlas
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    /// Coefficient of `ħ^r`; past the truncation order this is zero for a
    /// terminated series and unknown (`None`) otherwise.
    pub fn coefficient(&self, r: usize) -> Option<Polynomial> {
        match self.coefficients.get(r) {
            Some(c) => Some(c.clone()),
            None if self.terminated => Some(Polynomial::zero(&self.atlas)),
            None => None,
        }
    }

    /// Order up to which the coefficients are known, `None` when all are.
    fn known_order(&self) -> Option<usize> {
        (!self.terminated).then(|| self.truncation_order())
    }

    fn coefficient_or_zero(&self, r: usize) -> Polynomial {
        self.coefficients.get(r).cloned().unwrap_or_else(|| Polynomial::zero(&self.atlas))
    }

    /// Coefficients compared through order `n`, padding with zeros.
    pub fn agrees_through(&self, other: &FormalSeries, n: usize) -> bool {
        (0..=n).all(|r| self.coefficient_or_zero(r) == other.coefficient_or_zero(r))
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (r, c) in self.coefficients.iter().enumerate() {
            for (m, coeff) in c.terms() {
                let mut factors = c.named_factors(m);
                match r {
                    0 => {}
                    1 => factors.push(("h".into(), 1)),
                    _ => factors.push(("h".into(), r as u32)),
                }
                write_term(&mut out, first, coeff, &factors);
                first = false;
            }
        }
        if first {
            out.push('0');
        }
        if !self.terminated {
            out.push_str(&format!(" + O(h^{})", self.truncation_order() + 1));
        }
        f.write_str(&out)
    }
}

impl Serialize for FormalSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FormalSeries", 3)?;
        st.serialize_field("truncation_order", &self.truncation_order())?;
        st.serialize_field("terminated", &self.terminated)?;
        st.serialize_field("coefficients", &self.coefficients)?;
        st.end()
    }
}

/// `F ⋆ G` with coefficient `C_r(F, G) / r!` at `ħ^r`.
pub fn moyal_product(
    f: &Polynomial,
    g: &Polynomial,
    truncation: Truncation,
    metric: MetricProfile,
) -> Result<FormalSeries, StarError> {
    same_atlas(f, g)?;
    let bound = f.degree().min(g.degree()) as usize;
    let order = match truncation {
        Truncation::Order(n) => n,
        Truncation::Auto => bound,
    };
    let coefficients = (0..=order)
        .map(|r| {
            if r > bound {
                Ok(Polynomial::zero(f.atlas()))
            } else {
                Ok(cochain(f, g, r, metric)?.scale(&factorial(r).recip()))
            }
        })
        .collect::<Result<Vec<_>, StarError>>()?;
    Ok(FormalSeries::new(coefficients, order >= bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Star(MetricProfile),
    Add,
}

/// ħ-bilinear extension of `⋆` (or plain addition) to formal series.
///
/// The result is known through the smaller truncation order of the
/// non-terminated operands; if both are exact, so is the result.
pub fn series_combine(a: &FormalSeries, b: &FormalSeries, op: SeriesOp) -> Result<FormalSeries, StarError> {
    same_atlas(&a.coefficients[0], &b.coefficients[0])?;
    let atlas = a.atlas.clone();
    let limit = match (a.known_order(), b.known_order()) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    match op {
        SeriesOp::Add => {
            let order = limit.unwrap_or(a.truncation_order().max(b.truncation_order()));
            let coefficients = (0..=order).map(|r| &a.coefficient_or_zero(r) + &b.coefficient_or_zero(r)).collect();
            Ok(FormalSeries::new(coefficients, limit.is_none()))
        }
        SeriesOp::Star(metric) => {
            let order = limit.unwrap_or_else(|| {
                let mut top = a.truncation_order().max(b.truncation_order());
                for (i, ai) in a.coefficients.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                    for (j, bj) in b.coefficients.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                        top = top.max(i + j + ai.degree().min(bj.degree()) as usize);
                    }
                }
                top
            });
            let mut coefficients = vec![Polynomial::zero(&atlas); order + 1];
            for i in 0..=order.min(a.truncation_order()) {
                let ai = &a.coefficients[i];
                if ai.is_zero() {
                    continue;
                }
                for j in 0..=(order - i).min(b.truncation_order()) {
                    let bj = &b.coefficients[j];
                    if bj.is_zero() {
                        continue;
                    }
                    let top = (order - i - j).min(ai.degree().min(bj.degree()) as usize);
                    for c in 0..=top {
                        let term = cochain(ai, bj, c, metric)?;
                        if !term.is_zero() {
                            let slot = &mut coefficients[i + j + c];
                            *slot = &*slot + &term.scale(&factorial(c).recip());
                        }
                    }
                }
            }
            Ok(FormalSeries::new(coefficients, limit.is_none()))
        }
    }
}

/// A slot of an r-differential operator: (argument, position in its
/// derivative tensor).
pub type Slot = (usize, usize);

/// One coefficient `a^{n_1,…,n_r}` of an r-differential operator: a weighted
/// full contraction of the derivative tensors `∇^{n_k} F_k`.
///
/// `components[k]` is the component string of argument `k` (its length is
/// `n_k`), and `pairs` is a perfect matching of all slots; each matched pair
/// contributes the metric contraction of the two slot kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionTerm {
    pub weight: Rational,
    pub components: Vec<Vec<Component>>,
    pub pairs: Vec<(Slot, Slot)>,
}

/// A finite family of contraction terms acting on `arity` functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct RDifferentialSpec {
    arity: usize,
    metric: MetricProfile,
    terms: Vec<ContractionTerm>,
}

impl RDifferentialSpec {
    pub fn new(arity: usize, metric: MetricProfile, terms: Vec<ContractionTerm>) -> Result<Self, StarError> {
        for (t, term) in terms.iter().enumerate() {
            if term.components.len() != arity {
                return Err(StarError::InvalidSpec(format!(
                    "term {t} has {} component strings for arity {arity}",
                    term.components.len()
                )));
            }
            let mut seen: Vec<Vec<bool>> = term.components.iter().map(|c| vec![false; c.len()]).collect();
            for &(a, b) in &term.pairs {
                for (arg, pos) in [a, b] {
                    let cell = seen.get_mut(arg).and_then(|s| s.get_mut(pos)).ok_or_else(|| {
                        StarError::InvalidSpec(format!("term {t} references missing slot ({arg}, {pos})"))
                    })?;
                    if *cell {
                        return Err(StarError::InvalidSpec(format!("term {t} contracts slot ({arg}, {pos}) twice")));
                    }
                    *cell = true;
                }
            }
            if seen.iter().flatten().any(|s| !s) {
                return Err(StarError::InvalidSpec(format!("term {t} leaves a slot uncontracted")));
            }
        }
        Ok(Self { arity, metric, terms })
    }

    /// `C_r` written as a bidifferential operator.
    pub fn cochain(r: usize, metric: MetricProfile) -> Self {
        let strings = component_strings(r);
        let mut terms = Vec::new();
        for alpha in &strings {
            for beta in &strings {
                let w = SymplecticPair::weight(alpha, beta);
                if w == 0 {
                    continue;
                }
                terms.push(ContractionTerm {
                    weight: Rational::from_integer(w.into()),
                    components: vec![alpha.clone(), beta.clone()],
                    pairs: (0..r).map(|k| ((0, k), (1, k))).collect(),
                });
            }
        }
        Self::new(2, metric, terms).expect("cochain spec is well formed")
    }

    /// `⟨∇F, ∇G⟩_H` on `H = L² ⊕ L²`: first-order slots contracted within
    /// each factor.
    pub fn gradient_pairing(metric: MetricProfile) -> Self {
        let terms = Component::ALL
            .iter()
            .map(|&c| ContractionTerm {
                weight: Rational::one(),
                components: vec![vec![c], vec![c]],
                pairs: vec![((0, 0), (1, 0))],
            })
            .collect();
        Self::new(2, metric, terms).expect("gradient pairing spec is well formed")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn metric(&self) -> MetricProfile {
        self.metric
    }

    pub fn terms(&self) -> &[ContractionTerm] {
        &self.terms
    }
}

/// `A(F_1, …, F_r) = Σ a^{n_1,…,n_r}(∇^{n_1} F_1, …, ∇^{n_r} F_r)`.
pub fn apply_r_differential(spec: &RDifferentialSpec, args: &[Polynomial]) -> Result<Polynomial, StarError> {
    if args.len() != spec.arity {
        return Err(StarError::Arity { expected: spec.arity, actual: args.len() });
    }
    let Some(first) = args.first() else {
        return Err(StarError::InvalidSpec("operators need at least one argument".into()));
    };
    for a in &args[1..] {
        same_atlas(first, a)?;
    }
    let atlas = first.atlas();
    let matrix = atlas.contraction_matrix(spec.metric);
    let mut tensor_cache: Vec<Vec<Option<DerivativeTensor>>> = vec![Vec::new(); args.len()];
    let mut total = Polynomial::zero(atlas);

    for term in &spec.terms {
        let mut choices: Vec<Vec<(&Vec<usize>, &Polynomial)>> = Vec::with_capacity(args.len());
        for (k, comps) in term.components.iter().enumerate() {
            let n = comps.len();
            if tensor_cache[k].len() <= n {
                tensor_cache[k].resize(n + 1, None);
            }
            if tensor_cache[k][n].is_none() {
                tensor_cache[k][n] = Some(args[k].derivative_tensor(n));
            }
        }
        for (k, comps) in term.components.iter().enumerate() {
            let tensor = tensor_cache[k][comps.len()].as_ref().expect("filled above");
            choices.push(tensor.restricted(comps).collect());
        }
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        // odometer over one tensor entry per argument
        let mut idx = vec![0usize; choices.len()];
        'outer: loop {
            let w = term.pairs.iter().fold(term.weight.clone(), |acc, &((a, p), (b, q))| {
                let i = choices[a][idx[a]].0[p];
                let j = choices[b][idx[b]].0[q];
                acc * &matrix[i][j]
            });
            if !w.is_zero() {
                let mut prod = Polynomial::constant(atlas, w);
                for (k, c) in choices.iter().enumerate() {
                    prod = &prod * c[idx[k]].1;
                }
                total = &total + &prod;
            }
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    Ok(total)
}

/// One line of an axiom report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, axiom: impl Into<String>, failures: Vec<String>, checked: usize) {
        let passed = failures.is_empty();
        let detail = if passed {
            match checked {
                1 => "1 exact identity holds".to_string(),
                n => format!("{n} exact identities hold"),
            }
        } else {
            failures.join("; ")
        };
        self.checks.push(AxiomCheck { axiom: axiom.into(), passed, detail });
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.axiom, c.detail)?;
        }
        Ok(())
    }
}

fn nonzero_small(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let v: i64 = rng.gen_range(-5..=5);
        if v != 0 {
            return Rational::from_integer(v.into());
        }
    }
}

/// Checks the star-product axioms on `(F, G, H)` through order `order`:
/// `C_0 = FG`, `C_1(F,G) − C_1(G,F) = 2{F,G}`, bilinearity of each `C_r`,
/// `C_r` as a bidifferential operator, and associativity of every
/// ħ-coefficient. All comparisons are exact.
pub fn check_star_axioms(
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    order: usize,
    metric: MetricProfile,
) -> Result<AxiomReport, StarError> {
    same_atlas(f, g)?;
    same_atlas(f, h)?;
    let named = [("F", f), ("G", g), ("H", h)];
    let ordered_pairs: Vec<_> = named.iter().flat_map(|a| named.iter().map(move |b| (*a, *b))).collect();
    let mut report = AxiomReport::default();

    let mut failures = Vec::new();
    for ((na, a), (nb, b)) in &ordered_pairs {
        if cochain(a, b, 0, metric)? != *a * *b {
            failures.push(format!("C_0({na},{nb}) differs from {na}{nb}"));
        }
    }
    report.push("C_0 is the pointwise product", failures, ordered_pairs.len());

    let mut failures = Vec::new();
    for ((na, a), (nb, b)) in &ordered_pairs {
        let lhs = &cochain(a, b, 1, metric)? - &cochain(b, a, 1, metric)?;
        let rhs = poisson_bracket(a, b, metric)?.scale(&Rational::from_integer(2.into()));
        if lhs != rhs {
            failures.push(format!("C_1({na},{nb}) - C_1({nb},{na}) = {lhs}, 2{{{na},{nb}}} = {rhs}"));
        }
    }
    report.push("C_1 antisymmetrization is twice the bracket", failures, ordered_pairs.len());

    let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in 0..=order {
        let (s, t) = (nonzero_small(&mut rng), nonzero_small(&mut rng));
        let left_combo = &f.scale(&s) + &h.scale(&t);
        let lhs = cochain(&left_combo, g, r, metric)?;
        let rhs = &cochain(f, g, r, metric)?.scale(&s) + &cochain(h, g, r, metric)?.scale(&t);
        if lhs != rhs {
            failures.push(format!("C_{r} not linear in its first argument"));
        }
        let right_combo = &g.scale(&s) + &h.scale(&t);
        let lhs = cochain(f, &right_combo, r, metric)?;
        let rhs = &cochain(f, g, r, metric)?.scale(&s) + &cochain(f, h, r, metric)?.scale(&t);
        if lhs != rhs {
            failures.push(format!("C_{r} not linear in its second argument"));
        }
        checked += 2;
    }
    report.push("C_r is bilinear", failures, checked);

    let mut failures = Vec::new();
    let mut checked = 0;
    for r in 0..=order {
        let spec = RDifferentialSpec::cochain(r, metric);
        for ((na, a), (nb, b)) in &ordered_pairs {
            if apply_r_differential(&spec, &[(*a).clone(), (*b).clone()])? != cochain(a, b, r, metric)? {
                failures.push(format!("C_{r}({na},{nb}) differs from its bidifferential form"));
            }
            checked += 1;
        }
    }
    report.push("C_r is a bidifferential operator", failures, checked);

    let trunc = Truncation::Order(order);
    let fg = moyal_product(f, g, trunc, metric)?;
    let gh = moyal_product(g, h, trunc, metric)?;
    let left = series_combine(&fg, &FormalSeries::from_polynomial(h.clone()), SeriesOp::Star(metric))?;
    let right = series_combine(&FormalSeries::from_polynomial(f.clone()), &gh, SeriesOp::Star(metric))?;
    let failures: Vec<String> = (0..=order)
        .filter(|&r| left.coefficient_or_zero(r) != right.coefficient_or_zero(r))
        .map(|r| {
            format!("h^{r}: (F*G)*H has {}, F*(G*H) has {}", left.coefficient_or_zero(r), right.coefficient_or_zero(r))
        })
        .collect();
    report.push(format!("associativity through h^{order}"), failures, order + 1);

    Ok(report)
}

/// Antisymmetry, bilinearity, Jacobi identity and Leibniz rule for the
/// bracket on `(F, G, H)`, exactly.
pub fn check_poisson_axioms(
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    metric: MetricProfile,
) -> Result<AxiomReport, StarError> {
    let br = |a: &Polynomial, b: &Polynomial| poisson_bracket(a, b, metric);
    let mut report = AxiomReport::default();

    let mut failures = Vec::new();
    for (na, a, nb, b) in [("F", f, "G", g), ("G", g, "H", h), ("H", h, "F", f), ("F", f, "F", f)] {
        if br(a, b)? != -&br(b, a)? {
            failures.push(format!("{{{na},{nb}}} != -{{{nb},{na}}}"));
        }
    }
    report.push("bracket antisymmetry", failures, 4);

    let (s, t) = (Rational::from_integer(3.into()), Rational::from_integer((-2).into()));
    let mut failures = Vec::new();
    let combo = &f.scale(&s) + &g.scale(&t);
    if br(&combo, h)? != &br(f, h)?.scale(&s) + &br(g, h)?.scale(&t) {
        failures.push("not linear in the first argument".into());
    }
    if br(h, &combo)? != &br(h, f)?.scale(&s) + &br(h, g)?.scale(&t) {
        failures.push("not linear in the second argument".into());
    }
    report.push("bracket bilinearity", failures, 2);

    let jacobi = &(&br(f, &br(g, h)?)? + &br(g, &br(h, f)?)?) + &br(h, &br(f, g)?)?;
    let failures = if jacobi.is_zero() { Vec::new() } else { vec![format!("{{F,{{G,H}}}} + cyclic = {jacobi}")] };
    report.push("Jacobi identity", failures, 1);

    let mut failures = Vec::new();
    let lhs = br(f, &(g * h))?;
    let rhs = &(&br(f, g)? * h) + &(g * &br(f, h)?);
    if lhs != rhs {
        failures.push(format!("{{F,GH}} = {lhs}, {{F,G}}H + G{{F,H}} = {rhs}"));
    }
    report.push("Leibniz rule", failures, 1);

    Ok(report)
}
