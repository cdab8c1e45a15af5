//! Two-topic synthetic corpus with a planted vocabulary signal.
//!
//! Every document repeats a handful of words from its own topic several
//! times, and half of the documents mention one word of the other topic once.
//! Rare background words carry no signal and fall outside the most frequent
//! vocabulary. Cardinality-based weights see a leaked word as a full member of
//! the opposite topic; tf-idf weights discount it.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CorpusOptions, RawDoc};

const TOPIC_WORDS: usize = 30;
const BACKGROUND_WORDS: usize = 400;

fn topic_word(class: usize, i: usize) -> String {
    format!("{}{i:02}", ["orbit", "throttle"][class])
}

/// `n_docs` documents alternating between classes 0 and 1.
pub fn synthetic_corpus(n_docs: usize, seed: u64) -> Vec<RawDoc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_docs)
        .map(|d| {
            let class = d % 2;
            let mut words = Vec::new();
            for i in sample(&mut rng, TOPIC_WORDS, 6) {
                let reps = rng.gen_range(2..=4);
                words.extend(std::iter::repeat(topic_word(class, i)).take(reps));
            }
            if rng.gen_bool(0.5) {
                words.push(topic_word(1 - class, rng.gen_range(0..TOPIC_WORDS)));
            }
            for i in sample(&mut rng, BACKGROUND_WORDS, 8) {
                let reps = rng.gen_range(1..=2);
                words.extend(std::iter::repeat(format!("filler{i:03}")).take(reps));
            }
            RawDoc {
                id: format!("doc{d:04}"),
                label: Some(class as u8),
                text: words.join(" "),
            }
        })
        .collect()
}

/// Document-frequency bounds suited to the synthetic corpus size.
pub fn synthetic_options() -> CorpusOptions {
    CorpusOptions {
        min_df: 0.0,
        max_df: 0.5,
        top_k: 2 * TOPIC_WORDS,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textpipe::build_corpus;

    #[test]
    fn shape_and_determinism() {
        let docs = synthetic_corpus(20, 11);
        assert_eq!(docs, synthetic_corpus(20, 11));
        assert_ne!(docs, synthetic_corpus(20, 12));
        assert_eq!(docs.iter().filter(|d| d.label == Some(1)).count(), 10);
        let corpus = build_corpus(&synthetic_corpus(200, 0), &synthetic_options()).unwrap();
        assert_eq!(corpus.documents.len(), 200);
        assert_eq!(corpus.vocabulary.len(), 2 * TOPIC_WORDS);
        assert!(corpus.vocabulary.iter().all(|w| !w.starts_with("filler")));
    }
}
