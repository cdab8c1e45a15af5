//! Semi-supervised classification runs with cross-validated α or β.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{accuracy, tfidf_edvws, Corpus, TfMode};
use crate::error::{Error, Result};
use crate::flownet::solve_seeded;
use crate::reduction::{reduce_hypergraph, Caps, FlowNetwork, ReductionMode};
use crate::splitting::SplittingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `γ(S)·γ(e∖S)`
    Product,
    /// `min{γ(S), γ(e∖S)}`
    MinHalf,
    /// `min{γ(S), γ(e∖S), β·γ(e)}`
    Thresholded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub alpha: f64,
    /// Threshold fraction, used by [`Family::Thresholded`].
    pub beta: f64,
    pub labeled_fraction: f64,
    pub folds: usize,
    pub seed: u64,
    pub tf: TfMode,
    pub mode: ReductionMode,
    pub caps: Caps,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: Family::Product,
            alpha: 1.0,
            beta: 0.15,
            labeled_fraction: 0.3,
            folds: 5,
            seed: 0,
            tf: TfMode::Raw,
            mode: ReductionMode::Sparsified(0.01),
            caps: Caps::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn spec(&self) -> SplittingSpec {
        match self.family {
            Family::Product => SplittingSpec::product(),
            Family::MinHalf => SplittingSpec::min_half(),
            Family::Thresholded => SplittingSpec::thresholded(self.beta),
        }
    }

    pub fn with_param(&self, param: Param, value: f64) -> Self {
        let mut c = self.clone();
        match param {
            Param::Alpha => c.alpha = value,
            Param::Beta => c.beta = value,
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha {} must be non-negative", self.alpha));
        }
        if self.family == Family::Thresholded && !(self.beta > 0.0 && self.beta <= 1.0) {
            return bad(format!("beta {} not in (0, 1]", self.beta));
        }
        if !(self.labeled_fraction > 0.0 && self.labeled_fraction < 1.0) {
            return bad(format!("labeled fraction {} not in (0, 1)", self.labeled_fraction));
        }
        if self.folds < 2 {
            return bad(format!("need at least 2 folds, got {}", self.folds));
        }
        Ok(())
    }
}

/// `{0, 0.2, …, max}`.
pub fn alpha_grid(max: f64) -> Vec<f64> {
    let steps = (max / 0.2 + 1e-9).floor() as usize;
    (0..=steps).map(|i| (i as f64 * 0.2 * 1e9).round() / 1e9).collect()
}

/// 20 values equally spaced in log scale between `10^-3.5` and `10^-1/3`.
pub fn beta_grid() -> Vec<f64> {
    let (lo, hi) = (-3.5f64, -1.0f64 / 3.0);
    (0..20).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / 19.0)).collect()
}

fn by_class(indices: impl IntoIterator<Item = usize>, labels: &[Option<u8>]) -> [Vec<usize>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for i in indices {
        if let Some(l) = labels[i] {
            out[l as usize].push(i);
        }
    }
    out
}

/// Stratified sample of labeled documents, `fraction` of each class (at
/// least one per class).
pub fn labeled_pool(labels: &[Option<u8>], fraction: f64, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let mut pool = Vec::new();
    for mut class in by_class(0..labels.len(), labels) {
        if class.is_empty() {
            return Err(Error::InvalidConfig("both classes need labeled documents".into()));
        }
        class.shuffle(rng);
        let take = ((fraction * class.len() as f64).round() as usize).clamp(1, class.len());
        pool.extend_from_slice(&class[..take]);
    }
    pool.sort_unstable();
    Ok(pool)
}

/// Stratified `k`-fold split of `pool`.
pub fn stratified_folds(pool: &[usize], labels: &[Option<u8>], k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<usize>>> {
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for mut class in by_class(pool.iter().copied(), labels) {
        if class.len() < k {
            return Err(Error::InvalidConfig(format!(
                "{k} folds but only {} labeled examples in a class",
                class.len()
            )));
        }
        class.shuffle(rng);
        for i in class {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in folds.iter_mut() {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Reduced network for a corpus under `config`.
pub fn reduce_corpus(corpus: &Corpus, config: &ExperimentConfig) -> Result<FlowNetwork> {
    let h = tfidf_edvws(corpus, config.alpha, config.tf)?;
    let specs = vec![config.spec(); h.edges().len()];
    Ok(reduce_hypergraph(&h, &specs, config.mode, &config.caps)?.network)
}

/// Labels every document from `seeds` and scores it on `eval`.
pub fn seeded_accuracy(network: &FlowNetwork, labels: &[Option<u8>], seeds: &[usize], eval: &[usize]) -> Result<f64> {
    let [first, second] = by_class(seeds.iter().copied(), labels);
    let first: BTreeSet<usize> = first.into_iter().collect();
    let second: BTreeSet<usize> = second.into_iter().collect();
    let (set, _) = solve_seeded(network, labels.len(), &first, &second)?;
    let pred: BTreeMap<usize, u8> = eval.iter().map(|&v| (v, if set.contains(&v) { 0 } else { 1 })).collect();
    let truth: BTreeMap<usize, u8> = eval
        .iter()
        .map(|&v| labels[v].map(|l| (v, l)).ok_or(Error::KeyMismatch))
        .collect::<Result<_>>()?;
    accuracy(&pred, &truth)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub value: f64,
    pub fold_accuracy: Vec<f64>,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub param: Param,
    pub best: f64,
    pub rows: Vec<GridRow>,
}

/// K-fold cross-validation over `grid` for one parameter. The held-out fold
/// is unlabeled during each solve. Ties go to the smaller value.
pub fn cross_validate(
    corpus: &Corpus,
    config: &ExperimentConfig,
    param: Param,
    grid: &[f64],
    folds: &[Vec<usize>],
) -> Result<CvResult> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty parameter grid".into()));
    }
    let labels = corpus.labels();
    let rows: Vec<GridRow> = grid
        .par_iter()
        .map(|&value| {
            let cfg = config.with_param(param, value);
            cfg.validate()?;
            let network = reduce_corpus(corpus, &cfg)?;
            let fold_accuracy = (0..folds.len())
                .map(|k| {
                    let seeds: Vec<usize> = folds
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .flat_map(|(_, f)| f.iter().copied())
                        .collect();
                    seeded_accuracy(&network, &labels, &seeds, &folds[k])
                })
                .collect::<Result<Vec<f64>>>()?;
            let mean = fold_accuracy.iter().sum::<f64>() / fold_accuracy.len() as f64;
            Ok(GridRow {
                value,
                fold_accuracy,
                mean,
            })
        })
        .collect::<Result<_>>()?;
    let best = rows
        .iter()
        .fold(None::<&GridRow>, |acc, r| match acc {
            Some(b) if b.mean > r.mean || (b.mean == r.mean && b.value <= r.value) => Some(b),
            _ => Some(r),
        })
        .unwrap()
        .value;
    Ok(CvResult { param, best, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// Parameter value used for the final solve.
    pub chosen: f64,
    pub cv: Option<CvResult>,
    /// Accuracy on labeled documents outside the seed pool.
    pub test_accuracy: f64,
    pub seeds: usize,
    pub evaluated: usize,
}

/// Samples the seed pool, optionally tunes one parameter by cross-validation
/// on it, then labels the corpus and scores the remaining labeled documents.
pub fn run_experiment(corpus: &Corpus, config: &ExperimentConfig, search: Option<(Param, &[f64])>) -> Result<ExperimentResult> {
    config.validate()?;
    let labels = corpus.labels();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pool = labeled_pool(&labels, config.labeled_fraction, &mut rng)?;
    let (final_config, cv, chosen) = match search {
        Some((param, grid)) => {
            let folds = stratified_folds(&pool, &labels, config.folds, &mut rng)?;
            let cv = cross_validate(corpus, config, param, grid, &folds)?;
            (config.with_param(param, cv.best), Some(cv.clone()), cv.best)
        }
        None => (config.clone(), None, config.alpha),
    };
    let in_pool: BTreeSet<usize> = pool.iter().copied().collect();
    let eval: Vec<usize> = (0..labels.len()).filter(|i| labels[*i].is_some() && !in_pool.contains(i)).collect();
    let network = reduce_corpus(corpus, &final_config)?;
    let test_accuracy = seeded_accuracy(&network, &labels, &pool, &eval)?;
    Ok(ExperimentResult {
        chosen,
        cv,
        test_accuracy,
        seeds: pool.len(),
        evaluated: eval.len(),
    })
}

/// `param,fold,accuracy` rows for every grid point and fold, a `mean` row per
/// grid point, and a final `test` row for the chosen value.
pub fn results_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("param,fold,accuracy\n");
    if let Some(cv) = &result.cv {
        for row in &cv.rows {
            for (k, a) in row.fold_accuracy.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", row.value, k, a);
            }
            let _ = writeln!(out, "{},mean,{}", row.value, row.mean);
        }
    }
    let _ = writeln!(out, "{},test,{}", result.chosen, result.test_accuracy);
    out
}
