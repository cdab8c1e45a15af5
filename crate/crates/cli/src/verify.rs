//! Exhaustive per-edge property checks behind `edvw verify`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use edvw_core::reduction::{
    expand_asym, expand_clique, expand_lawler, expand_star, expand_sym, gadget_split_value, reduce_edge,
};
use edvw_core::splitting::{eval_split_mask, find_submodularity_violation, SplitFamily, Threshold};
use edvw_core::{Caps, EdgeInput, Error, FlowNetwork, Hyperedge, Hypergraph, ReductionMode, SplittingSpec};

use crate::{num, CliError};

const REL_TOL: f64 = 1e-8;

/// Twelve vertices and `edges` random hyperedges of size `2..=max_size.min(8)`.
pub(crate) fn random_hypergraph(seed: u64, edges: usize, max_size: usize) -> Result<Hypergraph, CliError> {
    if max_size < 2 {
        return Err(CliError::Usage(format!("max edge size {max_size} leaves no room for a random edge")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=12).map(|i| format!("v{i}")).collect();
    let inputs = (0..edges)
        .map(|i| {
            let size = rng.gen_range(2..=max_size.min(8));
            let members = rand::seq::index::sample(&mut rng, names.len(), size);
            let members: Vec<(String, f64)> = members
                .into_iter()
                .map(|v| (names[v].clone(), rng.gen_range(0.1..5.0)))
                .collect();
            EdgeInput {
                id: format!("e{i}"),
                kappa: rng.gen_range(0.5..2.0),
                members,
            }
        })
        .collect();
    Ok(Hypergraph::build(&names, inputs)?)
}

/// The single gadget that realises `spec` on its own, when there is one.
fn direct_gadget(spec: &SplittingSpec, e: &Hyperedge, index: usize) -> Option<edvw_core::Result<FlowNetwork>> {
    if spec.scale_by_kappa {
        return None;
    }
    Some(match &spec.family {
        SplitFamily::Product => expand_clique(e),
        SplitFamily::MinHalf => expand_star(e, index),
        SplitFamily::ThresholdedMin(Threshold::Absolute(b)) => expand_sym(e, index, *b, 1.0),
        SplitFamily::ThresholdedMin(Threshold::Fraction(beta)) => expand_sym(e, index, beta * e.gamma_total(), 1.0),
        SplitFamily::WeightedMin { a, b } => expand_asym(e, index, *a, *b),
        SplitFamily::AllOrNothing => expand_lawler(e, index, e.kappa()),
        SplitFamily::Custom(_) => return None,
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    skipped: usize,
}

struct Checker<'a> {
    h: &'a Hypergraph,
    failures: String,
}

impl Checker<'_> {
    fn subset(&self, e: &Hyperedge, mask: u64) -> String {
        let names: Vec<&str> = e.subset_of_mask(mask).iter().map(|&v| self.h.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }

    fn fail(&mut self, check: &str, e: &Hyperedge, mask: u64, expected: f64, got: f64) {
        let subset = self.subset(e, mask);
        let _ = writeln!(
            self.failures,
            "{check}: edge {} subset {subset} expected {} got {}",
            e.id(),
            num(expected),
            num(got)
        );
    }

    /// Applies `ok(expected, got)` to `g`'s split value on every subset and
    /// dumps the first failure.
    fn compare(
        &mut self,
        check: &str,
        g: &FlowNetwork,
        e: &Hyperedge,
        exact: &[f64],
        ok: impl Fn(f64, f64) -> bool,
    ) -> edvw_core::Result<bool> {
        for mask in 0..=e.full_mask() {
            let got = gadget_split_value(g, e, &e.subset_of_mask(mask))?;
            if !ok(exact[mask as usize], got) {
                self.fail(check, e, mask, exact[mask as usize], got);
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn run_verify(h: &Hypergraph, spec: &SplittingSpec, max_edge_size: usize, eps: f64) -> Result<String, CliError> {
    if let Some(e) = h.edges().iter().find(|e| e.len() > max_edge_size) {
        return Err(CliError::Usage(format!(
            "hyperedge `{}` has {} members, limit is {max_edge_size}",
            e.id(),
            e.len()
        )));
    }
    if !(eps > 0.0) {
        return Err(CliError::Usage(format!("epsilon {eps} must be positive")));
    }
    let caps = Caps {
        max_edge_size: max_edge_size.max(Caps::default().max_edge_size),
        ..Caps::default()
    };
    let mut checker = Checker {
        h,
        failures: String::new(),
    };
    let mut tallies: [(&str, Tally); 4] = [
        ("submodularity", Tally::default()),
        ("gadget", Tally::default()),
        ("reduction", Tally::default()),
        ("sandwich", Tally::default()),
    ];
    let record = |t: &mut Tally, ok: Option<bool>| match ok {
        Some(true) => t.passed += 1,
        Some(false) => t.failed += 1,
        None => t.skipped += 1,
    };
    for (index, e) in h.edges().iter().enumerate() {
        let exact: Vec<f64> = (0..=e.full_mask())
            .map(|m| eval_split_mask(spec, e, m))
            .collect::<edvw_core::Result<_>>()?;

        let violation = find_submodularity_violation(e, |m| exact[m as usize])?;
        if let Some(v) = &violation {
            let _ = writeln!(
                checker.failures,
                "submodularity: edge {} subsets {} within {} adding {} gap {}",
                e.id(),
                checker.subset(e, v.inner),
                checker.subset(e, v.outer),
                h.name(e.members()[v.element]),
                num(v.gap)
            );
        }
        record(&mut tallies[0].1, Some(violation.is_none()));

        let gadget = match direct_gadget(spec, e, index) {
            Some(g) => Some(checker.compare("gadget", &g?, e, &exact, close)?),
            None => None,
        };
        record(&mut tallies[1].1, gadget);

        let reduction = match reduce_edge(e, index, spec, ReductionMode::Exact, &caps) {
            Ok((g, _)) => checker.compare("reduction", &g, e, &exact, close)?,
            Err(err) => match err.root() {
                Error::NegativeCoefficient { index: i, value, .. } => {
                    let _ = writeln!(
                        checker.failures,
                        "reduction: edge {} coefficient {i} is {} (negative)",
                        e.id(),
                        num(*value)
                    );
                    false
                }
                _ => return Err(err.into()),
            },
        };
        record(&mut tallies[2].1, Some(reduction));

        let sandwich = if reduction {
            let (g, _) = reduce_edge(e, index, spec, ReductionMode::Sparsified(eps), &caps)?;
            let within = |w: f64, got: f64| got >= w - REL_TOL * w.max(1.0) && got <= (1.0 + eps) * w + REL_TOL * w.max(1.0);
            Some(checker.compare("sandwich", &g, e, &exact, within)?)
        } else {
            None
        };
        record(&mut tallies[3].1, sandwich);
    }
    eprint!("{}", checker.failures);
    let mut out = String::new();
    for (name, t) in &tallies {
        let _ = writeln!(out, "{name} passed {} failed {} skipped {}", t.passed, t.failed, t.skipped);
    }
    if tallies.iter().any(|(_, t)| t.failed > 0) {
        print!("{out}");
        return Err(CliError::Verify);
    }
    Ok(out)
}
