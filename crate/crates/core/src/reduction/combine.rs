//! Exact reduction of a concave EDVWs-based splitting function to a
//! non-negative combination of symmetric or asymmetric gadgets.
//!
//! Breakpoints are the distinct achievable subset sums `γ_e(S)`. The
//! combination coefficients come from the closed-form tridiagonal inverse of
//! the breakpoint system, which amounts to the drop in slope of the
//! interpolating polyline at each breakpoint.

use super::gadgets::{push_asym, push_sym};
use super::network::FlowNetwork;
use crate::error::{Error, Result};
use crate::hypergraph::Hyperedge;
use crate::splitting::Generator;

/// Subset sums closer than this fraction of `γ_e(e)` are merged.
pub const DEDUP_REL_TOL: f64 = 1e-9;
/// Coefficients in `[-COEFF_TOL·scale, 0)` are rounding noise and clamp to 0.
pub const COEFF_TOL: f64 = 1e-9;

/// Limits for exact breakpoint enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_edge_size: usize,
    pub max_breakpoints: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_edge_size: 20,
            max_breakpoints: 4096,
        }
    }
}

/// Sorted distinct values of `γ_e(S)` over all `S ⊆ e`, including `0` and
/// `γ_e(e)`.
pub fn subset_sums(e: &Hyperedge, caps: &Caps) -> Result<Vec<f64>> {
    let too_large = |limit| Error::EdgeTooLarge {
        edge: e.id().to_string(),
        size: e.len(),
        limit,
    };
    if e.len() > caps.max_edge_size {
        return Err(too_large(caps.max_edge_size));
    }
    let tol = DEDUP_REL_TOL * e.gamma_total();
    let mut sums = vec![0.0];
    for &w in e.gamma() {
        let mut next = Vec::with_capacity(sums.len() * 2);
        next.extend_from_slice(&sums);
        next.extend(sums.iter().map(|s| s + w));
        next.sort_by(f64::total_cmp);
        sums.clear();
        for x in next {
            match sums.last() {
                Some(&last) if x - last <= tol => {}
                _ => sums.push(x),
            }
        }
        if sums.len() > caps.max_breakpoints + 2 {
            return Err(Error::EdgeTooLarge {
                edge: e.id().to_string(),
                size: e.len(),
                limit: caps.max_breakpoints,
            });
        }
    }
    Ok(sums)
}

/// `Q_a`: distinct `γ_e(S)` over proper nonempty subsets, ascending.
pub fn enumerate_qa(e: &Hyperedge, caps: &Caps) -> Result<Vec<f64>> {
    let total = e.gamma_total();
    let tol = DEDUP_REL_TOL * total;
    Ok(subset_sums(e, caps)?
        .into_iter()
        .filter(|&x| x > tol && x < total - tol)
        .collect())
}

/// `Q_s`: the elements of `Q_a` not exceeding `γ_e(e)/2`, ascending.
pub fn enumerate_qs(e: &Hyperedge, caps: &Caps) -> Result<Vec<f64>> {
    let half = e.gamma_total() / 2.0;
    let tol = DEDUP_REL_TOL * e.gamma_total();
    Ok(enumerate_qa(e, caps)?
        .into_iter()
        .filter(|&x| x <= half + tol)
        .collect())
}

/// Raw solution of the symmetric breakpoint system: with `b₀ = 0`, `w₀ = 0`
/// and a flat continuation after `b_r`, `a_i` is the drop in slope at `b_i`.
pub fn symmetric_coefficients(breakpoints: &[f64], values: &[f64]) -> Vec<f64> {
    let r = breakpoints.len();
    let slopes: Vec<f64> = (0..=r)
        .map(|i| {
            if i == r {
                return 0.0;
            }
            let (b0, w0) = if i == 0 {
                (0.0, 0.0)
            } else {
                (breakpoints[i - 1], values[i - 1])
            };
            (values[i] - w0) / (breakpoints[i] - b0)
        })
        .collect();
    (0..r).map(|i| slopes[i] - slopes[i + 1]).collect()
}

/// Raw solution of the asymmetric breakpoint system, anchored at `(0, 0)` and
/// `(γ_e(e), 0)`: `a_i` is the drop in slope at `b_i` divided by `γ_e(e)`.
pub fn asymmetric_coefficients(breakpoints: &[f64], values: &[f64], total: f64) -> Vec<f64> {
    let r = breakpoints.len();
    let point = |i: usize| -> (f64, f64) {
        if i == 0 {
            (0.0, 0.0)
        } else if i == r + 1 {
            (total, 0.0)
        } else {
            (breakpoints[i - 1], values[i - 1])
        }
    };
    let slopes: Vec<f64> = (0..=r)
        .map(|i| {
            let ((x0, y0), (x1, y1)) = (point(i), point(i + 1));
            (y1 - y0) / (x1 - x0)
        })
        .collect();
    (0..r).map(|i| (slopes[i] - slopes[i + 1]) / total).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetMode {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetTerm {
    pub scale: f64,
    pub breakpoint: f64,
}

/// `Σ aᵢ·gadget(bᵢ)` for one hyperedge, with zero terms dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetCombination {
    pub edge: String,
    pub mode: GadgetMode,
    pub terms: Vec<GadgetTerm>,
    pub gamma_total: f64,
}

impl GadgetCombination {
    /// Builds a combination from raw coefficients, clamping rounding noise and
    /// rejecting genuinely negative coefficients.
    pub fn from_coefficients(
        edge: &str,
        mode: GadgetMode,
        gamma_total: f64,
        breakpoints: &[f64],
        raw: &[f64],
    ) -> Result<Self> {
        let scale = raw.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        let mut terms = Vec::new();
        for (i, (&a, &b)) in raw.iter().zip(breakpoints).enumerate() {
            if a < -COEFF_TOL * scale {
                return Err(Error::NegativeCoefficient {
                    edge: edge.to_string(),
                    index: i,
                    value: a,
                });
            }
            if a > COEFF_TOL * scale * 1e-3 {
                terms.push(GadgetTerm {
                    scale: a,
                    breakpoint: b,
                });
            }
        }
        Ok(GadgetCombination {
            edge: edge.to_string(),
            mode,
            terms,
            gamma_total,
        })
    }

    pub fn gadget_count(&self) -> usize {
        self.terms.len()
    }

    /// Continuous form `ĝ(x)` of the combined splitting function.
    pub fn value_at(&self, x: f64) -> f64 {
        let t = self.gamma_total;
        self.terms
            .iter()
            .map(|term| {
                let b = term.breakpoint;
                term.scale
                    * match self.mode {
                        GadgetMode::Symmetric => x.min(t - x).min(b),
                        GadgetMode::Asymmetric => ((t - b) * x).min(b * (t - x)),
                    }
            })
            .sum()
    }

    /// Arcs the expanded gadget will contain for an edge of `size` members.
    pub fn arc_count(&self, size: usize) -> usize {
        self.terms.len()
            * match self.mode {
                GadgetMode::Symmetric => 2 * size + 1,
                GadgetMode::Asymmetric => 2 * size,
            }
    }

    /// Gadget network: originals for `e`'s members followed by the auxiliary
    /// nodes of every term.
    pub fn expand(&self, e: &Hyperedge, edge_index: usize) -> Result<FlowNetwork> {
        let mut g = FlowNetwork::with_originals(e.members().iter().copied());
        let t = self.gamma_total;
        let mut next_aux = 0;
        for term in &self.terms {
            match self.mode {
                GadgetMode::Symmetric => {
                    push_sym(&mut g, e, edge_index, next_aux, term.breakpoint, term.scale)?;
                    next_aux += 2;
                }
                GadgetMode::Asymmetric => {
                    let (a, b) = (term.scale * (t - term.breakpoint), term.scale * term.breakpoint);
                    push_asym(&mut g, e, edge_index, next_aux, a, b)?;
                    next_aux += 1;
                }
            }
        }
        Ok(g)
    }
}

/// Symmetric values `g(q)` vs `g(γ_e(e) − q)` at every breakpoint.
fn check_symmetric(e: &Hyperedge, g: &Generator, breakpoints: &[f64]) -> Result<()> {
    let t = e.gamma_total();
    for &q in breakpoints {
        let (a, b) = (g.value(q), g.value(t - q));
        if (a - b).abs() > 1e-9 * a.abs().max(b.abs()) + 1e-12 {
            return Err(Error::NotSymmetric(e.id().to_string()));
        }
    }
    Ok(())
}

/// Exact reduction to at most `|Q_s|` symmetric gadgets.
pub fn reduce_symmetric(e: &Hyperedge, g: &Generator, caps: &Caps) -> Result<GadgetCombination> {
    let qs = enumerate_qs(e, caps)?;
    let qa = enumerate_qa(e, caps)?;
    check_symmetric(e, g, &qa)?;
    let values: Vec<f64> = qs.iter().map(|&q| g.value(q)).collect();
    let raw = symmetric_coefficients(&qs, &values);
    GadgetCombination::from_coefficients(e.id(), GadgetMode::Symmetric, e.gamma_total(), &qs, &raw)
}

/// Exact reduction to at most `|Q_a|` asymmetric gadgets.
pub fn reduce_asymmetric(e: &Hyperedge, g: &Generator, caps: &Caps) -> Result<GadgetCombination> {
    let qa = enumerate_qa(e, caps)?;
    let values: Vec<f64> = qa.iter().map(|&q| g.value(q)).collect();
    let raw = asymmetric_coefficients(&qa, &values, e.gamma_total());
    GadgetCombination::from_coefficients(e.id(), GadgetMode::Asymmetric, e.gamma_total(), &qa, &raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{EdgeInput, Hypergraph};
    use crate::reduction::gadgets::gadget_split_value;
    use crate::splitting::{eval_split_mask, SplittingSpec};

    fn edge(weights: &[f64]) -> Hypergraph {
        let names: Vec<String> = (0..weights.len()).map(|i| format!("v{i}")).collect();
        let members: Vec<(&str, f64)> = names.iter().map(|n| n.as_str()).zip(weights.iter().copied()).collect();
        Hypergraph::build(&names, vec![EdgeInput::new("e", 1.0, &members)]).unwrap()
    }

    /// Dense solve of the breakpoint system by Gaussian elimination; an
    /// independent route to the closed-form coefficients.
    fn dense_solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
        let n = rhs.len();
        for col in 0..n {
            let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
            m.swap(col, piv);
            rhs.swap(col, piv);
            for row in col + 1..n {
                let f = m[row][col] / m[col][col];
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
            x[row] = (rhs[row] - s) / m[row][row];
        }
        x
    }

    #[test]
    fn q_sets_for_123() {
        let h = edge(&[1.0, 2.0, 3.0]);
        let caps = Caps::default();
        assert_eq!(enumerate_qa(h.edge(0), &caps).unwrap(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(enumerate_qs(h.edge(0), &caps).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn q_sets_cardinality_case() {
        let h = edge(&[1.0; 5]);
        let caps = Caps::default();
        assert_eq!(enumerate_qa(h.edge(0), &caps).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(enumerate_qs(h.edge(0), &caps).unwrap(), vec![1.0, 2.0]);
        let single = edge(&[2.0]);
        assert!(enumerate_qa(single.edge(0), &caps).unwrap().is_empty());
        assert!(enumerate_qs(single.edge(0), &caps).unwrap().is_empty());
    }

    #[test]
    fn q_enumeration_caps() {
        let h = edge(&[1.0; 21]);
        assert!(matches!(
            enumerate_qa(h.edge(0), &Caps::default()),
            Err(Error::EdgeTooLarge { limit: 20, .. })
        ));
        let h = edge(&[1.0, 2.0, 4.0, 8.0, 16.0]);
        let caps = Caps {
            max_edge_size: 20,
            max_breakpoints: 10,
        };
        assert!(matches!(
            enumerate_qa(h.edge(0), &caps),
            Err(Error::EdgeTooLarge { limit: 10, .. })
        ));
    }

    #[test]
    fn symmetric_coefficients_match_hand_solutions() {
        assert_eq!(symmetric_coefficients(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), vec![0.0, 0.0, 1.0]);
        assert_eq!(symmetric_coefficients(&[1.0, 2.0, 3.0], &[5.0, 8.0, 9.0]), vec![2.0, 2.0, 1.0]);
    }

    #[test]
    fn closed_forms_agree_with_dense_solves() {
        let b = [0.7, 1.3, 2.0, 2.9, 3.6, 4.5, 5.2];
        let total = 5.9;
        let w: Vec<f64> = b.iter().map(|x| (x * (total - x) as f64).sqrt()).collect();
        let r = b.len();

        let b1: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|j| b[i.min(j)]).collect()).collect();
        let dense = dense_solve(b1, w.clone());
        for (x, y) in symmetric_coefficients(&b, &w).iter().zip(&dense) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }

        // asymmetric system: ŵ(S_i) = Σ_j a_j min{(Γ−b_j) b_i, b_j (Γ−b_i)}
        let b2: Vec<Vec<f64>> = (0..r)
            .map(|i| (0..r).map(|j| ((total - b[j]) * b[i]).min(b[j] * (total - b[i]))).collect())
            .collect();
        let dense = dense_solve(b2, w.clone());
        for (x, y) in asymmetric_coefficients(&b, &w, total).iter().zip(&dense) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn reduce_symmetric_examples() {
        let h = edge(&[1.0, 2.0, 3.0]);
        let e = h.edge(0);
        let caps = Caps::default();
        let g = SplittingSpec::min_half().edge_generator(e).unwrap();
        let comb = reduce_symmetric(e, &g, &caps).unwrap();
        assert_eq!(comb.terms, vec![GadgetTerm { scale: 1.0, breakpoint: 3.0 }]);
        let net = comb.expand(e, 0).unwrap();
        assert_eq!((net.node_count(), net.arc_count()), (5, 7));

        let g = SplittingSpec::product().edge_generator(e).unwrap();
        let comb = reduce_symmetric(e, &g, &caps).unwrap();
        let scales: Vec<f64> = comb.terms.iter().map(|t| t.scale).collect();
        assert_eq!(scales, vec![2.0, 2.0, 1.0]);
        for q in [1.0, 2.0, 3.0, 4.0, 5.0] {
            assert!((comb.value_at(q) - g.value(q)).abs() < 1e-12);
        }
    }

    #[test]
    fn reduce_symmetric_rejects_asymmetric_generators() {
        let h = edge(&[1.0, 2.0, 3.0]);
        let e = h.edge(0);
        let g = SplittingSpec::weighted_min(2.0, 1.0).edge_generator(e).unwrap();
        assert_eq!(
            reduce_symmetric(e, &g, &Caps::default()),
            Err(Error::NotSymmetric("e".into()))
        );
    }

    #[test]
    fn reduce_asymmetric_is_exact_on_all_subsets() {
        let h = edge(&[1.0, 2.0, 3.0]);
        let e = h.edge(0);
        let spec = SplittingSpec::weighted_min(1.0, 1.0);
        let g = spec.edge_generator(e).unwrap();
        let comb = reduce_asymmetric(e, &g, &Caps::default()).unwrap();
        let net = comb.expand(e, 0).unwrap();
        for mask in 0..8 {
            let got = gadget_split_value(&net, e, &e.subset_of_mask(mask)).unwrap();
            let want = eval_split_mask(&spec, e, mask).unwrap();
            assert!((got - want).abs() < 1e-12, "mask {mask}: {got} vs {want}");
        }
    }

    #[test]
    fn cardinality_asymmetric_uses_at_most_size_minus_one_gadgets() {
        let h = edge(&[1.0; 4]);
        let e = h.edge(0);
        let spec = SplittingSpec::weighted_min(3.0, 1.0);
        let comb = reduce_asymmetric(e, &spec.edge_generator(e).unwrap(), &Caps::default()).unwrap();
        assert!(comb.gadget_count() <= 3);
    }

    #[test]
    fn non_concave_values_are_rejected() {
        let h = edge(&[1.0, 2.0, 3.0]);
        let e = h.edge(0);
        let convex = crate::splitting::CustomConcave::new("bump", |x: f64, t: f64| {
            let u = x.min(t - x);
            u * u
        });
        let g = SplittingSpec::custom(convex).edge_generator(e).unwrap();
        assert!(matches!(
            reduce_symmetric(e, &g, &Caps::default()),
            Err(Error::NegativeCoefficient { .. })
        ));
        assert!(matches!(
            reduce_asymmetric(e, &g, &Caps::default()),
            Err(Error::NegativeCoefficient { .. })
        ));
    }

    #[test]
    fn collinear_middle_points_are_pruned() {
        let b = [1.0, 2.0, 3.0, 4.0];
        let w = [1.0, 2.0, 3.0, 3.5];
        let raw = symmetric_coefficients(&b, &w);
        let comb = GadgetCombination::from_coefficients("e", GadgetMode::Symmetric, 10.0, &b, &raw).unwrap();
        let kept: Vec<f64> = comb.terms.iter().map(|t| t.breakpoint).collect();
        assert_eq!(kept, vec![3.0, 4.0]);
    }
}
