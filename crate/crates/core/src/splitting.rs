//! EDVWs-based splitting functions `w_e(S) = g_e(γ_e(S))`, brute-force
//! submodularity/symmetry/concavity oracles and the hypergraph cut function.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, VertexId};

/// Absolute slack used by the brute-force oracles; relative slack of the same
/// size is added on top, scaled by the largest value involved.
pub const ORACLE_TOL: f64 = 1e-9;

type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A user-supplied concave generator `g(x, Γ)` on `[0, Γ]`, with an optional
/// right-derivative `g'(x, Γ)` used by the continuous sparsifier.
#[derive(Clone)]
pub struct CustomConcave {
    name: String,
    value: ScalarFn,
    slope: Option<ScalarFn>,
}

impl CustomConcave {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomConcave {
            name: name.into(),
            value: Arc::new(value),
            slope: None,
        }
    }

    pub fn with_slope(mut self, slope: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.slope = Some(Arc::new(slope));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_slope(&self) -> bool {
        self.slope.is_some()
    }

    /// `g(x) = (x(Γ−x))^p`; concave for `0 < p <= 1`.
    pub fn power(p: f64) -> Self {
        CustomConcave::new(format!("power:{p}"), move |x, t| (x * (t - x)).max(0.0).powf(p))
            .with_slope(move |x, t| {
                let u = (x * (t - x)).max(0.0);
                if u == 0.0 {
                    if p < 1.0 {
                        if x < t / 2.0 {
                            f64::INFINITY
                        } else {
                            f64::NEG_INFINITY
                        }
                    } else {
                        p * u.powf(p - 1.0) * (t - 2.0 * x)
                    }
                } else {
                    p * u.powf(p - 1.0) * (t - 2.0 * x)
                }
            })
    }

    /// `g(x) = ln(1+x) + ln(1+Γ−x) − ln(1+Γ)`.
    pub fn log_sum() -> Self {
        CustomConcave::new("logsum", |x, t| {
            ((1.0 + x).ln() + (1.0 + t - x).ln() - (1.0 + t).ln()).max(0.0)
        })
        .with_slope(|x, t| 1.0 / (1.0 + x) - 1.0 / (1.0 + t - x))
    }
}

impl fmt::Debug for CustomConcave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomConcave")
            .field("name", &self.name)
            .field("has_slope", &self.slope.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// `b = β·γ_e(e)`.
    Fraction(f64),
    Absolute(f64),
}

#[derive(Debug, Clone)]
pub enum SplitFamily {
    /// `g(x) = x(Γ−x)`
    Product,
    /// `g(x) = min{x, Γ−x}`
    MinHalf,
    /// `g(x) = min{x, Γ−x, b}`
    ThresholdedMin(Threshold),
    /// `g(x) = min{a·x, b·(Γ−x)}`
    WeightedMin { a: f64, b: f64 },
    /// `w(S) = κ` for every proper nonempty `S`.
    AllOrNothing,
    Custom(CustomConcave),
}

#[derive(Debug, Clone)]
pub struct SplittingSpec {
    pub family: SplitFamily,
    pub scale_by_kappa: bool,
}

impl SplittingSpec {
    pub fn new(family: SplitFamily) -> Self {
        SplittingSpec {
            family,
            scale_by_kappa: false,
        }
    }

    pub fn product() -> Self {
        Self::new(SplitFamily::Product)
    }

    pub fn min_half() -> Self {
        Self::new(SplitFamily::MinHalf)
    }

    pub fn thresholded(beta: f64) -> Self {
        Self::new(SplitFamily::ThresholdedMin(Threshold::Fraction(beta)))
    }

    pub fn thresholded_abs(b: f64) -> Self {
        Self::new(SplitFamily::ThresholdedMin(Threshold::Absolute(b)))
    }

    pub fn weighted_min(a: f64, b: f64) -> Self {
        Self::new(SplitFamily::WeightedMin { a, b })
    }

    pub fn all_or_nothing() -> Self {
        Self::new(SplitFamily::AllOrNothing)
    }

    pub fn custom(g: CustomConcave) -> Self {
        Self::new(SplitFamily::Custom(g))
    }

    pub fn scaled_by_kappa(mut self) -> Self {
        self.scale_by_kappa = true;
        self
    }

    pub fn is_all_or_nothing(&self) -> bool {
        matches!(self.family, SplitFamily::AllOrNothing)
    }

    /// Multiplier applied on top of `g` for this edge.
    pub fn factor(&self, e: &Hyperedge) -> f64 {
        if self.scale_by_kappa {
            e.kappa()
        } else {
            1.0
        }
    }

    /// Resolves the generator for a hyperedge with total weight `gamma_total`.
    /// `factor` multiplies every value (κ scaling).
    pub fn generator(&self, gamma_total: f64, factor: f64) -> Result<Generator> {
        let shape = match &self.family {
            SplitFamily::Product => Shape::Product,
            SplitFamily::MinHalf => Shape::MinHalf,
            SplitFamily::ThresholdedMin(Threshold::Fraction(beta)) => {
                Shape::Thresholded(beta * gamma_total)
            }
            SplitFamily::ThresholdedMin(Threshold::Absolute(b)) => Shape::Thresholded(*b),
            SplitFamily::WeightedMin { a, b } => Shape::WeightedMin(*a, *b),
            SplitFamily::AllOrNothing => return Err(Error::FamilyError(self.to_string())),
            SplitFamily::Custom(c) => Shape::Custom(c.clone()),
        };
        Ok(Generator {
            shape,
            total: gamma_total,
            factor,
        })
    }

    /// Generator for `e` including κ scaling when enabled.
    pub fn edge_generator(&self, e: &Hyperedge) -> Result<Generator> {
        self.generator(e.gamma_total(), self.factor(e))
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match &self.family {
            SplitFamily::ThresholdedMin(Threshold::Fraction(beta)) => {
                if !(*beta > 0.0 && *beta <= 1.0) {
                    return bad(format!("threshold fraction {beta} not in (0, 1]"));
                }
            }
            SplitFamily::ThresholdedMin(Threshold::Absolute(b)) => {
                if !(*b > 0.0) || !b.is_finite() {
                    return bad(format!("threshold {b} must be positive"));
                }
            }
            SplitFamily::WeightedMin { a, b } => {
                if !(*a > 0.0 && *b > 0.0) || !a.is_finite() || !b.is_finite() {
                    return bad(format!("weighted-min parameters ({a}, {b}) must be positive"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for SplittingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            SplitFamily::Product => write!(f, "product")?,
            SplitFamily::MinHalf => write!(f, "minhalf")?,
            SplitFamily::ThresholdedMin(Threshold::Fraction(b)) => write!(f, "thresh:{b}")?,
            SplitFamily::ThresholdedMin(Threshold::Absolute(b)) => write!(f, "threshabs:{b}")?,
            SplitFamily::WeightedMin { a, b } => write!(f, "wmin:{a},{b}")?,
            SplitFamily::AllOrNothing => write!(f, "aon")?,
            SplitFamily::Custom(c) => write!(f, "{}", c.name)?,
        }
        if self.scale_by_kappa {
            write!(f, "*kappa")?;
        }
        Ok(())
    }
}

impl FromStr for SplittingSpec {
    type Err = Error;

    /// Grammar: `product`, `minhalf`, `thresh:<β>`, `threshabs:<b>`,
    /// `wmin:<a>,<b>`, `aon`, `power:<p>`, `logsum`, each optionally followed
    /// by `*kappa`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, scale_by_kappa) = match s.strip_suffix("*kappa") {
            Some(body) => (body, true),
            None => (s, false),
        };
        let (name, arg) = match body.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (body, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| Error::InvalidSpec(format!("`{name}` needs a parameter")))?;
            a.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("bad number `{a}` in `{s}`")))
        };
        let no_arg = |family: SplitFamily| -> Result<SplitFamily> {
            match arg {
                None => Ok(family),
                Some(_) => Err(Error::InvalidSpec(format!("`{name}` takes no parameter"))),
            }
        };
        let family = match name {
            "product" => no_arg(SplitFamily::Product)?,
            "minhalf" => no_arg(SplitFamily::MinHalf)?,
            "aon" => no_arg(SplitFamily::AllOrNothing)?,
            "logsum" => no_arg(SplitFamily::Custom(CustomConcave::log_sum()))?,
            "thresh" => SplitFamily::ThresholdedMin(Threshold::Fraction(num(arg)?)),
            "threshabs" => SplitFamily::ThresholdedMin(Threshold::Absolute(num(arg)?)),
            "power" => {
                let p = num(arg)?;
                if !(p > 0.0) {
                    return Err(Error::InvalidSpec(format!("power exponent {p} must be positive")));
                }
                SplitFamily::Custom(CustomConcave::power(p))
            }
            "wmin" => {
                let a = arg.ok_or_else(|| Error::InvalidSpec("`wmin` needs `a,b`".into()))?;
                let (x, y) = a
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidSpec(format!("`wmin` needs `a,b`, got `{a}`")))?;
                SplitFamily::WeightedMin {
                    a: num(Some(x))?,
                    b: num(Some(y))?,
                }
            }
            other => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        };
        let spec = SplittingSpec {
            family,
            scale_by_kappa,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug)]
enum Shape {
    Product,
    MinHalf,
    Thresholded(f64),
    WeightedMin(f64, f64),
    Custom(CustomConcave),
}

/// A continuous generator `x ↦ factor·g(x)` on `[0, Γ]` for one hyperedge.
#[derive(Clone, Debug)]
pub struct Generator {
    shape: Shape,
    total: f64,
    factor: f64,
}

impl Generator {
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    fn raw(&self, x: f64) -> f64 {
        let t = self.total;
        match &self.shape {
            Shape::Product => x * (t - x),
            Shape::MinHalf => x.min(t - x),
            Shape::Thresholded(b) => x.min(t - x).min(*b),
            Shape::WeightedMin(a, b) => (a * x).min(b * (t - x)),
            Shape::Custom(c) => (c.value)(x, t),
        }
    }

    /// `factor·g(x)`; exactly zero at both endpoints.
    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= self.total {
            return 0.0;
        }
        self.factor * self.raw(x)
    }

    /// Right derivative of `factor·g` at `x`, `None` if unknown.
    pub fn right_slope(&self, x: f64) -> Option<f64> {
        self.slope(x, true)
    }

    /// Left derivative of `factor·g` at `x`, `None` if unknown.
    pub fn left_slope(&self, x: f64) -> Option<f64> {
        self.slope(x, false)
    }

    fn slope(&self, x: f64, right: bool) -> Option<f64> {
        let t = self.total;
        let half = t / 2.0;
        // for kinked families: is x strictly before the kink (from the chosen side)
        let before = |k: f64| if right { x < k } else { x <= k };
        let raw = match &self.shape {
            Shape::Product => t - 2.0 * x,
            Shape::MinHalf => {
                if before(half) {
                    1.0
                } else {
                    -1.0
                }
            }
            Shape::Thresholded(b) => {
                if before(b.min(half)) {
                    1.0
                } else if before((t - b).max(half)) {
                    0.0
                } else {
                    -1.0
                }
            }
            Shape::WeightedMin(a, b) => {
                if before(b * t / (a + b)) {
                    *a
                } else {
                    -b
                }
            }
            Shape::Custom(c) => (c.slope.as_ref()?)(x, t),
        };
        Some(self.factor * raw)
    }

    pub fn has_slope(&self) -> bool {
        match &self.shape {
            Shape::Custom(c) => c.has_slope(),
            _ => true,
        }
    }

    /// Location of the maximum on `[0, Γ]`.
    pub fn peak(&self) -> f64 {
        let t = self.total;
        match &self.shape {
            Shape::Product | Shape::MinHalf | Shape::Thresholded(_) => t / 2.0,
            Shape::WeightedMin(a, b) => b * t / (a + b),
            Shape::Custom(_) => golden_section_max(|x| self.raw(x), 0.0, t),
        }
    }

    /// Whether `g(x) = g(Γ−x)`. Exact for built-in shapes, sampled for custom.
    pub fn is_symmetric(&self) -> bool {
        match &self.shape {
            Shape::Product | Shape::MinHalf | Shape::Thresholded(_) => true,
            Shape::WeightedMin(a, b) => a == b,
            Shape::Custom(_) => {
                let t = self.total;
                (0..=64).all(|i| {
                    let x = t * i as f64 / 128.0;
                    close(self.value(x), self.value(t - x))
                })
            }
        }
    }

    /// Same generator with values multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Generator {
        Generator {
            factor: self.factor * k,
            ..self.clone()
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ORACLE_TOL * a.abs().max(b.abs()) + 1e-12
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let tol = 1e-12 * (hi - lo).abs().max(1e-300);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

/// `g_e(x)` without κ scaling.
pub fn eval_g(spec: &SplittingSpec, e: &Hyperedge, x: f64) -> Result<f64> {
    let g = spec.generator(e.gamma_total(), 1.0)?;
    if !(0.0..=e.gamma_total()).contains(&x) {
        return Err(Error::DomainError {
            x,
            upper: e.gamma_total(),
        });
    }
    Ok(g.value(x))
}

/// `w_e(S)` for `S ⊆ e`.
pub fn eval_split(spec: &SplittingSpec, e: &Hyperedge, subset: &BTreeSet<VertexId>) -> Result<f64> {
    let x = e.gamma_sum(subset)?;
    let trivial = subset.is_empty() || subset.len() == e.len();
    split_value(spec, e, x, trivial)
}

/// `w_e(S)` with `S` given as a member bitmask.
pub fn eval_split_mask(spec: &SplittingSpec, e: &Hyperedge, mask: u64) -> Result<f64> {
    let mask = mask & e.full_mask();
    let trivial = mask == 0 || mask == e.full_mask();
    split_value(spec, e, e.gamma_sum_mask(mask), trivial)
}

fn split_value(spec: &SplittingSpec, e: &Hyperedge, x: f64, trivial: bool) -> Result<f64> {
    if trivial {
        return Ok(0.0);
    }
    if spec.is_all_or_nothing() {
        return Ok(e.kappa());
    }
    Ok(spec.edge_generator(e)?.value(x))
}

/// Checks that one spec was supplied per hyperedge.
pub(crate) fn check_spec_count(h: &Hypergraph, specs: &[SplittingSpec]) -> Result<()> {
    if specs.len() != h.edges().len() {
        return Err(Error::InvalidSpec(format!(
            "expected {} splitting specs, got {}",
            h.edges().len(),
            specs.len()
        )));
    }
    Ok(())
}

/// `cut_H(S) = Σ_e w_e(S ∩ e)`. `specs[i]` applies to `h.edge(i)`.
pub fn hypergraph_cut(
    h: &Hypergraph,
    specs: &[SplittingSpec],
    subset: &BTreeSet<VertexId>,
) -> Result<f64> {
    check_spec_count(h, specs)?;
    let mut indicator = vec![false; h.vertex_count()];
    for &v in subset {
        *indicator
            .get_mut(v)
            .ok_or(Error::VertexOutOfRange(v))? = true;
    }
    hypergraph_cut_indicator(h, specs, &indicator)
}

/// [`hypergraph_cut`] with `S` given as a membership indicator over all vertices.
pub fn hypergraph_cut_indicator(
    h: &Hypergraph,
    specs: &[SplittingSpec],
    indicator: &[bool],
) -> Result<f64> {
    check_spec_count(h, specs)?;
    let mut total = 0.0;
    for (e, spec) in h.edges().iter().zip(specs) {
        let inside = e.members().iter().filter(|&&v| indicator[v]).count();
        let trivial = inside == 0 || inside == e.len();
        let x = e.gamma_sum_indicator(indicator);
        total += split_value(spec, e, x, trivial).map_err(|err| Error::in_edge(e.id(), err))?;
    }
    Ok(total)
}

/// A violated instance of `w(S₁∪v) − w(S₁) ≥ w(S₂∪v) − w(S₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularityViolation {
    pub inner: u64,
    pub outer: u64,
    pub element: usize,
    pub gap: f64,
}

fn tabulate(size: usize, w: impl Fn(u64) -> f64) -> Vec<f64> {
    (0..1u64 << size).map(w).collect()
}

/// Exhaustive check of the diminishing-returns inequality over all
/// `S₁ ⊆ S₂ ⊂ e`, `v ∈ e \ S₂`. `w` is evaluated on member bitmasks.
pub fn find_submodularity_violation(
    e: &Hyperedge,
    w: impl Fn(u64) -> f64,
) -> Result<Option<SubmodularityViolation>> {
    let n = e.len();
    if n > 12 {
        return Err(Error::EdgeTooLarge {
            edge: e.id().to_string(),
            size: n,
            limit: 12,
        });
    }
    let values = tabulate(n, w);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = ORACLE_TOL + ORACLE_TOL * scale;
    let full = e.full_mask();
    for outer in 0..=full {
        // iterate all submasks of `outer`, including 0
        let mut inner = outer;
        loop {
            for v in 0..n {
                let bit = 1u64 << v;
                if outer & bit != 0 {
                    continue;
                }
                let lhs = values[(inner | bit) as usize] - values[inner as usize];
                let rhs = values[(outer | bit) as usize] - values[outer as usize];
                if lhs - rhs < -slack {
                    return Ok(Some(SubmodularityViolation {
                        inner,
                        outer,
                        element: v,
                        gap: lhs - rhs,
                    }));
                }
            }
            if inner == 0 {
                break;
            }
            inner = (inner - 1) & outer;
        }
    }
    Ok(None)
}

pub fn is_submodular_bruteforce(e: &Hyperedge, w: impl Fn(u64) -> f64) -> Result<bool> {
    Ok(find_submodularity_violation(e, w)?.is_none())
}

pub fn is_symmetric_bruteforce(e: &Hyperedge, w: impl Fn(u64) -> f64) -> Result<bool> {
    let n = e.len();
    if n > 20 {
        return Err(Error::EdgeTooLarge {
            edge: e.id().to_string(),
            size: n,
            limit: 20,
        });
    }
    let full = e.full_mask();
    let values = tabulate(n, w);
    Ok((0..=full).all(|s| close(values[s as usize], values[(full ^ s) as usize])))
}

/// Chord test `g(b₂) ≥ λ·g(b₁) + (1−λ)·g(b₃)` over all triples of an
/// `n_samples`-point uniform grid on `[0, γ_e(e)]`.
pub fn concavity_probe(spec: &SplittingSpec, e: &Hyperedge, n_samples: usize) -> Result<bool> {
    if n_samples < 3 {
        return Err(Error::InvalidSpec("concavity probe needs at least 3 samples".into()));
    }
    let g = spec.generator(e.gamma_total(), 1.0)?;
    let t = e.gamma_total();
    let xs: Vec<f64> = (0..n_samples)
        .map(|i| t * i as f64 / (n_samples - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| g.value(x)).collect();
    let scale = ys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = ORACLE_TOL + ORACLE_TOL * scale;
    for i in 0..n_samples {
        for j in i + 1..n_samples {
            for k in j + 1..n_samples {
                let span = xs[k] - xs[i];
                let chord = (xs[k] - xs[j]) / span * ys[i] + (xs[j] - xs[i]) / span * ys[k];
                if ys[j] - chord < -slack {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::EdgeInput;

    fn edge123() -> Hypergraph {
        Hypergraph::build(
            &["v1", "v2", "v3", "v9"],
            vec![EdgeInput::new("e1", 1.0, &[("v1", 1.0), ("v2", 2.0), ("v3", 3.0)])],
        )
        .unwrap()
    }

    #[test]
    fn eval_g_examples() {
        let h = edge123();
        let e = h.edge(0);
        assert_eq!(eval_g(&SplittingSpec::product(), e, 2.0).unwrap(), 8.0);
        assert_eq!(eval_g(&SplittingSpec::min_half(), e, 5.0).unwrap(), 1.0);
        assert_eq!(eval_g(&SplittingSpec::thresholded_abs(2.0), e, 3.0).unwrap(), 2.0);
        assert!(matches!(
            eval_g(&SplittingSpec::product(), e, 6.5),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            eval_g(&SplittingSpec::all_or_nothing(), e, 1.0),
            Err(Error::FamilyError(_))
        ));
    }

    #[test]
    fn eval_split_examples() {
        let h = edge123();
        let e = h.edge(0);
        assert_eq!(eval_split(&SplittingSpec::product(), e, &[0].into()).unwrap(), 5.0);
        assert_eq!(eval_split(&SplittingSpec::weighted_min(2.0, 1.0), e, &[0].into()).unwrap(), 2.0);
        for spec in [
            SplittingSpec::product(),
            SplittingSpec::min_half(),
            SplittingSpec::all_or_nothing(),
        ] {
            assert_eq!(eval_split(&spec, e, &BTreeSet::new()).unwrap(), 0.0);
            assert_eq!(eval_split(&spec, e, &[0, 1, 2].into()).unwrap(), 0.0);
        }
        assert!(eval_split(&SplittingSpec::product(), e, &[3].into()).is_err());
    }

    #[test]
    fn kappa_scaling() {
        let h = Hypergraph::build(
            &["a", "b"],
            vec![EdgeInput::new("e", 3.0, &[("a", 1.0), ("b", 2.0)])],
        )
        .unwrap();
        let spec = SplittingSpec::product().scaled_by_kappa();
        assert_eq!(eval_split(&spec, h.edge(0), &[0].into()).unwrap(), 6.0);
        assert_eq!(eval_split(&SplittingSpec::all_or_nothing(), h.edge(0), &[0].into()).unwrap(), 3.0);
    }

    #[test]
    fn hypergraph_cut_intersects_with_edges() {
        let h = edge123();
        let specs = vec![SplittingSpec::min_half()];
        assert_eq!(hypergraph_cut(&h, &specs, &BTreeSet::new()).unwrap(), 0.0);
        assert_eq!(hypergraph_cut(&h, &specs, &[0, 1, 2, 3].into()).unwrap(), 0.0);
        assert_eq!(hypergraph_cut(&h, &specs, &[0, 3].into()).unwrap(), 1.0);
        assert!(hypergraph_cut(&h, &specs, &[7].into()).is_err());
        assert!(hypergraph_cut(&h, &[], &BTreeSet::new()).is_err());
    }

    #[test]
    fn submodularity_examples() {
        let h = edge123();
        let e = h.edge(0);
        let minhalf = SplittingSpec::min_half();
        assert!(is_submodular_bruteforce(e, |m| eval_split_mask(&minhalf, e, m).unwrap()).unwrap());
        let aon = SplittingSpec::all_or_nothing();
        assert!(is_submodular_bruteforce(e, |m| eval_split_mask(&aon, e, m).unwrap()).unwrap());

        let ones = Hypergraph::build(
            &["v1", "v2", "v3"],
            vec![EdgeInput::new("e", 1.0, &[("v1", 1.0), ("v2", 1.0), ("v3", 1.0)])],
        )
        .unwrap();
        let bad = |m: u64| match m.count_ones() {
            1 => 1.0,
            2 => 3.0,
            _ => 0.0,
        };
        let violation = find_submodularity_violation(ones.edge(0), bad).unwrap().unwrap();
        assert!(violation.gap < 0.0);
        assert!(!is_submodular_bruteforce(ones.edge(0), bad).unwrap());
    }

    #[test]
    fn symmetry_examples() {
        let h = edge123();
        let e = h.edge(0);
        let sym = |spec: SplittingSpec| {
            is_symmetric_bruteforce(e, |m| eval_split_mask(&spec, e, m).unwrap()).unwrap()
        };
        assert!(sym(SplittingSpec::product()));
        assert!(!sym(SplittingSpec::weighted_min(2.0, 1.0)));
        assert!(sym(SplittingSpec::weighted_min(1.5, 1.5)));
    }

    #[test]
    fn concavity_examples() {
        let h = edge123();
        let e = h.edge(0);
        assert!(concavity_probe(&SplittingSpec::product(), e, 25).unwrap());
        assert!(concavity_probe(&SplittingSpec::custom(CustomConcave::power(0.5)), e, 25).unwrap());
        let convex = CustomConcave::new("square", |x: f64, _t| x * x);
        assert!(!concavity_probe(&SplittingSpec::custom(convex), e, 25).unwrap());
        assert!(concavity_probe(&SplittingSpec::all_or_nothing(), e, 25).is_err());
        assert!(concavity_probe(&SplittingSpec::product(), e, 2).is_err());
    }

    #[test]
    fn spec_grammar() {
        for s in ["product", "minhalf", "thresh:0.15", "threshabs:2", "wmin:2,1", "aon", "logsum", "power:0.5"] {
            let spec: SplittingSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let spec: SplittingSpec = "minhalf*kappa".parse().unwrap();
        assert!(spec.scale_by_kappa);
        for bad in ["", "prod", "thresh", "thresh:0", "thresh:1.5", "wmin:1", "wmin:-1,1", "product:3", "power:-1"] {
            assert!(bad.parse::<SplittingSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn slopes_and_peaks() {
        let g = SplittingSpec::weighted_min(2.0, 1.0).generator(6.0, 1.0).unwrap();
        assert_eq!(g.peak(), 2.0);
        assert_eq!(g.right_slope(0.0), Some(2.0));
        assert_eq!(g.left_slope(6.0), Some(-1.0));
        assert_eq!(g.left_slope(2.0), Some(2.0));
        assert_eq!(g.right_slope(2.0), Some(-1.0));
        let t = SplittingSpec::thresholded_abs(1.0).generator(6.0, 1.0).unwrap();
        assert_eq!(t.right_slope(0.5), Some(1.0));
        assert_eq!(t.right_slope(1.0), Some(0.0));
        assert_eq!(t.right_slope(5.0), Some(-1.0));
        let c = SplittingSpec::custom(CustomConcave::log_sum()).generator(6.0, 1.0).unwrap();
        assert!((c.peak() - 3.0).abs() < 1e-6);
        assert!(c.is_symmetric());
        assert!(!SplittingSpec::weighted_min(2.0, 1.0).generator(6.0, 1.0).unwrap().is_symmetric());
    }
}
