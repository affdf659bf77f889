//! Corpus ingestion: CoNLL-U parsing, pair extraction and vocabularies.

mod conllu;
mod extract;
mod pairfile;
mod vocab;

pub use conllu::{parse_conllu, ConlluReader, Sentence, TokenRecord};
pub use extract::{effective_lemma, extract_pairs, DepPair, ExtractionConfig, Role};
pub use pairfile::PairCounts;
pub use vocab::{SpaceId, Vocabulary};

use std::io::BufRead;

use rayon::prelude::*;

use crate::error::Result;

const EXTRACT_BATCH: usize = 8192;

/// Stream a CoNLL-U corpus into aggregated pair counts.
///
/// Sentences are independent, so each batch is extracted in parallel and the
/// per-sentence multisets merged by addition; the result does not depend on
/// batch boundaries or thread count.
pub fn extract_counts<R: BufRead>(reader: R, cfg: &ExtractionConfig) -> Result<PairCounts> {
    let mut reader = ConlluReader::new(reader);
    let mut out = PairCounts::new();
    loop {
        let mut batch: Vec<Sentence> = Vec::with_capacity(EXTRACT_BATCH);
        for sentence in reader.by_ref().take(EXTRACT_BATCH) {
            batch.push(sentence?);
        }
        if batch.is_empty() {
            break;
        }
        let exhausted = batch.len() < EXTRACT_BATCH;
        let merged = batch
            .par_iter()
            .map(|sentence| PairCounts::from_pairs(extract_pairs(sentence, cfg)))
            .reduce(PairCounts::new, |mut a, b| {
                a.merge(b);
                a
            });
        out.merge(merged);
        if exhausted {
            break;
        }
    }
    Ok(out)
}
