//! Documents-as-vertices, words-as-hyperedges text classification with
//! tf-idf EDVWs.

pub mod experiment;
pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::flownet::solve_seeded;
use crate::hypergraph::{EdgeInput, Hypergraph, VertexId};
use crate::reduction::{reduce_hypergraph, Caps, ReductionMode};
use crate::splitting::SplittingSpec;

/// Raw input record: `doc_id<TAB>label<TAB>text`, label `0`, `1` or `?`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDoc {
    pub id: String,
    pub label: Option<u8>,
    pub text: String,
}

pub fn parse_tsv(text: &str) -> Result<Vec<RawDoc>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let (id, label, body) = match (fields.next(), fields.next(), fields.next()) {
            (Some(id), Some(label), Some(body)) => (id.trim(), label.trim(), body),
            _ => return Err(Error::parse(i + 1, "expected three tab-separated fields")),
        };
        if id.is_empty() {
            return Err(Error::parse(i + 1, "empty document id"));
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::parse(i + 1, format!("duplicate document id `{id}`")));
        }
        let label = match label {
            "0" => Some(0),
            "1" => Some(1),
            "?" => None,
            other => return Err(Error::parse(i + 1, format!("label must be 0, 1 or ?, got `{other}`"))),
        };
        docs.push(RawDoc {
            id: id.to_string(),
            label,
            text: body.to_string(),
        });
    }
    Ok(docs)
}

/// Lowercased alphanumeric runs of length at least 2.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_lowercase)
        .collect()
}

/// The bundled 318-word English stop list.
pub fn stop_words() -> &'static HashSet<&'static str> {
    static WORDS: OnceLock<HashSet<&'static str>> = OnceLock::new();
    WORDS.get_or_init(|| include_str!("stopwords.txt").lines().map(str::trim).filter(|w| !w.is_empty()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusOptions {
    /// Minimum document frequency as a fraction of documents.
    pub min_df: f64,
    /// Maximum document frequency as a fraction of documents.
    pub max_df: f64,
    pub top_k: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            min_df: 0.002,
            max_df: 0.03,
            top_k: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub label: Option<u8>,
    /// Counts of vocabulary words only.
    pub counts: BTreeMap<String, u32>,
    /// Number of non-stop-word tokens in the raw text.
    pub length: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    /// Selected words, most frequent first.
    pub vocabulary: Vec<String>,
}

impl Corpus {
    pub fn labels(&self) -> Vec<Option<u8>> {
        self.documents.iter().map(|d| d.label).collect()
    }

    /// Documents containing `word`.
    pub fn doc_frequency(&self, word: &str) -> usize {
        self.documents.iter().filter(|d| d.counts.contains_key(word)).count()
    }
}

pub fn build_corpus(raw: &[RawDoc], opts: &CorpusOptions) -> Result<Corpus> {
    if !(0.0 <= opts.min_df && opts.min_df < opts.max_df && opts.max_df <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "document-frequency bounds [{}, {}] invalid",
            opts.min_df, opts.max_df
        )));
    }
    let stops = stop_words();
    let tokenized: Vec<Vec<String>> = raw
        .iter()
        .map(|d| tokenize(&d.text).into_iter().filter(|t| !stops.contains(t.as_str())).collect())
        .collect();
    let mut df: HashMap<&str, usize> = HashMap::new();
    let mut total: HashMap<&str, u64> = HashMap::new();
    for tokens in &tokenized {
        let mut distinct = HashSet::new();
        for t in tokens {
            *total.entry(t).or_default() += 1;
            if distinct.insert(t.as_str()) {
                *df.entry(t).or_default() += 1;
            }
        }
    }
    let n = raw.len() as f64;
    let mut candidates: Vec<(&str, u64)> = total
        .into_iter()
        .filter(|(w, _)| {
            let frac = df[w] as f64 / n;
            frac >= opts.min_df && frac <= opts.max_df
        })
        .collect();
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    candidates.truncate(opts.top_k);
    let vocabulary: Vec<String> = candidates.iter().map(|(w, _)| w.to_string()).collect();
    let vocab: HashSet<&str> = candidates.iter().map(|(w, _)| *w).collect();

    let mut documents = Vec::new();
    for (d, tokens) in raw.iter().zip(&tokenized) {
        let mut counts = BTreeMap::new();
        for t in tokens.iter().filter(|t| vocab.contains(t.as_str())) {
            *counts.entry(t.clone()).or_insert(0) += 1;
        }
        if !counts.is_empty() {
            documents.push(Document {
                id: d.id.clone(),
                label: d.label,
                counts,
                length: tokens.len() as u32,
            });
        }
    }
    if documents.is_empty() || vocabulary.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok(Corpus { documents, vocabulary })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfMode {
    /// Raw counts, smoothed idf, per-document L2 normalisation.
    Raw,
    /// Count divided by document length, smoothed idf, no normalisation.
    Relative,
}

/// `idf(e) = ln((1+N)/(1+df(e))) + 1`.
pub fn idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Per-document tf-idf values keyed by word.
pub fn tfidf(c: &Corpus, tf: TfMode) -> Vec<BTreeMap<String, f64>> {
    let n = c.documents.len();
    let idfs: HashMap<&str, f64> = c.vocabulary.iter().map(|w| (w.as_str(), idf(n, c.doc_frequency(w)))).collect();
    c.documents
        .iter()
        .map(|d| {
            let mut row: BTreeMap<String, f64> = d
                .counts
                .iter()
                .map(|(w, &k)| {
                    let t = match tf {
                        TfMode::Raw => k as f64,
                        TfMode::Relative => k as f64 / d.length.max(1) as f64,
                    };
                    (w.clone(), t * idfs[w.as_str()])
                })
                .collect();
            if tf == TfMode::Raw {
                let norm = row.values().map(|v| v * v).sum::<f64>().sqrt();
                row.values_mut().for_each(|v| *v /= norm);
            }
            row
        })
        .collect()
}

/// One vertex per document, one hyperedge per vocabulary word with
/// `γ_e(v) = tfidf(e, v)^α` and `κ = 1`.
pub fn tfidf_edvws(c: &Corpus, alpha: f64, tf: TfMode) -> Result<Hypergraph> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidConfig(format!("alpha {alpha} must be non-negative")));
    }
    let rows = tfidf(c, tf);
    let names: Vec<&str> = c.documents.iter().map(|d| d.id.as_str()).collect();
    let edges = c
        .vocabulary
        .iter()
        .map(|w| {
            let members: Vec<(String, f64)> = c
                .documents
                .iter()
                .zip(&rows)
                .filter_map(|(d, row)| row.get(w).map(|v| (d.id.clone(), if alpha == 0.0 { 1.0 } else { v.powf(alpha) })))
                .collect();
            EdgeInput {
                id: w.clone(),
                kappa: 1.0,
                members,
            }
        })
        .collect();
    Hypergraph::build(&names, edges)
}

/// Min-cut labelling: vertices on the `first` seed side get label 0, the
/// rest label 1.
pub fn classify(
    h: &Hypergraph,
    specs: &[SplittingSpec],
    first: &BTreeSet<VertexId>,
    second: &BTreeSet<VertexId>,
    mode: ReductionMode,
    caps: &Caps,
) -> Result<Vec<u8>> {
    let reduction = reduce_hypergraph(h, specs, mode, caps)?;
    let (set, _) = solve_seeded(&reduction.network, h.vertex_count(), first, second)?;
    Ok((0..h.vertex_count()).map(|v| if set.contains(&v) { 0 } else { 1 }).collect())
}

/// Fraction of keys with matching labels.
pub fn accuracy<K: Ord>(pred: &BTreeMap<K, u8>, truth: &BTreeMap<K, u8>) -> Result<f64> {
    if pred.len() != truth.len() || pred.keys().zip(truth.keys()).any(|(a, b)| a != b) {
        return Err(Error::KeyMismatch);
    }
    if pred.is_empty() {
        return Err(Error::InvalidConfig("no vertices to score".into()));
    }
    let hits = pred.values().zip(truth.values()).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / pred.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(docs: &[(&str, Option<u8>, &str)]) -> Vec<RawDoc> {
        docs.iter()
            .map(|&(id, label, text)| RawDoc {
                id: id.into(),
                label,
                text: text.into(),
            })
            .collect()
    }

    fn loose() -> CorpusOptions {
        CorpusOptions {
            min_df: 0.0,
            max_df: 0.9,
            top_k: 200,
        }
    }

    #[test]
    fn stop_list_and_tokenizer() {
        assert_eq!(stop_words().len(), 318);
        assert!(stop_words().contains("the"));
        assert_eq!(tokenize("Hello, WORLD! a b2 x"), vec!["hello", "world", "b2"]);
    }

    #[test]
    fn tsv_parsing() {
        let docs = parse_tsv("d1\t0\tsome text\nd2\t?\tmore\ttabs\n").unwrap();
        assert_eq!(docs[1].label, None);
        assert_eq!(docs[1].text, "more\ttabs");
        assert!(matches!(parse_tsv("d1\t2\tx"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_tsv("d1\t0\tx\nd1\t1\ty"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_tsv("d1 0 x").is_err());
    }

    #[test]
    fn document_frequency_filter() {
        let docs = raw(&[
            ("a", Some(0), "alpha bravo"),
            ("b", Some(0), "alpha charlie"),
            ("c", Some(1), "alpha delta"),
            ("d", Some(1), "alpha delta"),
        ]);
        let c = build_corpus(&docs, &loose()).unwrap();
        assert!(!c.vocabulary.contains(&"alpha".to_string()));
        assert_eq!(c.vocabulary, vec!["delta", "bravo", "charlie"]);
        let small = CorpusOptions { top_k: 1, ..loose() };
        assert_eq!(build_corpus(&docs, &small).unwrap().documents.len(), 2);
        let none = raw(&[("a", None, "the and of"), ("b", None, "it is")]);
        assert_eq!(build_corpus(&none, &loose()), Err(Error::EmptyVocabulary));
    }

    #[test]
    fn tfidf_weights_by_hand() {
        let docs = raw(&[
            ("a", Some(0), "rare rare common"),
            ("b", Some(1), "common zeta"),
            ("c", Some(1), "zeta"),
        ]);
        let c = build_corpus(&docs, &loose()).unwrap();
        let h = tfidf_edvws(&c, 1.0, TfMode::Raw).unwrap();
        // doc a: rare count 2 with df 1, common count 1 with df 2, N = 3
        let idf_rare = (4.0f64 / 2.0).ln() + 1.0;
        let idf_common = (4.0f64 / 3.0).ln() + 1.0;
        let (x, y) = (2.0 * idf_rare, idf_common);
        let norm = (x * x + y * y).sqrt();
        let rare = h.edge_by_id("rare").unwrap();
        assert_eq!(rare.members(), &[0]);
        assert!((rare.gamma()[0] - x / norm).abs() < 1e-12);
        let common = h.edge_by_id("common").unwrap();
        assert!((common.gamma()[0] - y / norm).abs() < 1e-12);

        let rel = tfidf_edvws(&c, 2.0, TfMode::Relative).unwrap();
        let want = (2.0 / 3.0 * idf_rare).powi(2);
        assert!((rel.edge_by_id("rare").unwrap().gamma()[0] - want).abs() < 1e-12);

        let flat = tfidf_edvws(&c, 0.0, TfMode::Raw).unwrap();
        assert!(flat.edges().iter().all(|e| e.gamma().iter().all(|&g| g == 1.0)));
    }

    #[test]
    fn accuracy_cases() {
        let m = |v: &[u8]| v.iter().enumerate().map(|(i, &x)| (i, x)).collect::<BTreeMap<_, _>>();
        assert_eq!(accuracy(&m(&[0, 1]), &m(&[0, 1])).unwrap(), 1.0);
        assert_eq!(accuracy(&m(&[0, 1]), &m(&[1, 0])).unwrap(), 0.0);
        assert_eq!(accuracy(&m(&[0, 1]), &m(&[0, 0])).unwrap(), 0.5);
        assert_eq!(accuracy(&m(&[0]), &m(&[0, 1])), Err(Error::KeyMismatch));
    }

    fn two_groups() -> Hypergraph {
        let names = ["a", "b", "c", "x", "y", "z"];
        let mut edges = Vec::new();
        for (i, group) in [["a", "b", "c"], ["x", "y", "z"]].iter().enumerate() {
            for k in 0..3 {
                let members: Vec<(&str, f64)> = group.iter().map(|&v| (v, 1.0 + k as f64)).collect();
                edges.push(EdgeInput::new(format!("g{i}{k}"), 1.0, &members));
            }
        }
        edges.push(EdgeInput::new("bridge", 1.0, &[("c", 0.1), ("x", 0.1)]));
        Hypergraph::build(&names, edges).unwrap()
    }

    #[test]
    fn classify_recovers_groups() {
        let h = two_groups();
        let specs = vec![SplittingSpec::product(); h.edges().len()];
        let seeds = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        let labels = classify(&h, &specs, &seeds(&[0]), &seeds(&[5]), ReductionMode::Exact, &Caps::default()).unwrap();
        assert_eq!(labels, vec![0, 0, 0, 1, 1, 1]);
        let all = classify(&h, &specs, &seeds(&[0, 1, 3]), &seeds(&[2, 4, 5]), ReductionMode::Exact, &Caps::default())
            .unwrap();
        assert_eq!(all, vec![0, 0, 1, 0, 1, 1]);
    }

    #[test]
    fn zero_cost_separation_keeps_free_vertices_on_sink_side() {
        let h = Hypergraph::build(
            &["a", "b", "c"],
            vec![EdgeInput::new("e", 1.0, &[("a", 1.0), ("b", 1.0)])],
        )
        .unwrap();
        let specs = [SplittingSpec::product()];
        let seeds = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
        let labels = classify(&h, &specs, &seeds(&[0]), &seeds(&[1]), ReductionMode::Exact, &Caps::default()).unwrap();
        // the isolated vertex is not reachable from the source
        assert_eq!(labels, vec![0, 1, 1]);
    }
}
