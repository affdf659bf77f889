//! Dependency-based (noun, verb) pair extraction.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ingest::conllu::TokenRecord;

/// Grammatical role a noun takes relative to its verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Subject,
    Object,
}

impl Role {
    /// Artifact spelling: `subj` or `obj`.
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Subject => "subj",
            Role::Object => "obj",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "subj" => Some(Role::Subject),
            "obj" => Some(Role::Object),
            _ => None,
        }
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One extracted (noun, verb) co-occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DepPair {
    /// Lowercased noun lemma.
    pub noun: String,
    /// Lowercased verb lemma.
    pub verb: String,
    pub role: Role,
}

/// Label and POS sets driving extraction.
#[derive(Debug, Clone)]
pub struct ExtractionConfig {
    subject_labels: BTreeSet<String>,
    object_labels: BTreeSet<String>,
    noun_pos: BTreeSet<String>,
    verb_pos: BTreeSet<String>,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            subject_labels: to_set(&["nsubj", "nsubjpass"]),
            object_labels: to_set(&["dobj", "iobj", "nmod", "xcomp"]),
            noun_pos: to_set(&["NOUN", "PROPN", "PRON"]),
            verb_pos: to_set(&["VERB"]),
        }
    }
}

fn to_set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl ExtractionConfig {
    /// Build a config, rejecting overlapping subject/object label sets.
    pub fn new(
        subject_labels: impl IntoIterator<Item = String>,
        object_labels: impl IntoIterator<Item = String>,
        noun_pos: impl IntoIterator<Item = String>,
        verb_pos: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let cfg = ExtractionConfig {
            subject_labels: subject_labels.into_iter().collect(),
            object_labels: object_labels.into_iter().collect(),
            noun_pos: noun_pos.into_iter().collect(),
            verb_pos: verb_pos.into_iter().collect(),
        };
        if let Some(shared) = cfg.subject_labels.intersection(&cfg.object_labels).next() {
            return Err(Error::InvalidConfig(format!(
                "label {shared:?} is in both the subject and object sets"
            )));
        }
        Ok(cfg)
    }

    pub fn subject_labels(&self) -> &BTreeSet<String> {
        &self.subject_labels
    }

    pub fn object_labels(&self) -> &BTreeSet<String> {
        &self.object_labels
    }

    pub fn noun_pos(&self) -> &BTreeSet<String> {
        &self.noun_pos
    }

    pub fn verb_pos(&self) -> &BTreeSet<String> {
        &self.verb_pos
    }
}

/// Lemma with fallback: the surface form stands in when LEMMA is `"_"`.
pub fn effective_lemma(token: &TokenRecord) -> String {
    if token.lemma == "_" {
        token.surface_form.to_lowercase()
    } else {
        token.lemma.to_lowercase()
    }
}

/// Extract all (noun, verb) pairs of one sentence.
///
/// A token contributes iff its UPOS is in `noun_pos`, its head's UPOS is in
/// `verb_pos`, and its relation label is in one of the two label sets.
/// Everything else is silently skipped.
pub fn extract_pairs(sentence: &[TokenRecord], cfg: &ExtractionConfig) -> Vec<DepPair> {
    let mut pairs = Vec::new();
    for token in sentence {
        if !cfg.noun_pos.contains(&token.upos) {
            continue;
        }
        if token.head == 0 {
            continue;
        }
        let Some(head) = sentence.get(token.head as usize - 1) else {
            continue;
        };
        if !cfg.verb_pos.contains(&head.upos) {
            continue;
        }
        let role = if cfg.subject_labels.contains(&token.deprel) {
            Role::Subject
        } else if cfg.object_labels.contains(&token.deprel) {
            Role::Object
        } else {
            continue;
        };
        pairs.push(DepPair {
            noun: effective_lemma(token),
            verb: effective_lemma(head),
            role,
        });
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(index: u32, form: &str, lemma: &str, upos: &str, head: u32, deprel: &str) -> TokenRecord {
        TokenRecord {
            index,
            surface_form: form.to_string(),
            lemma: lemma.to_string(),
            upos: upos.to_string(),
            head,
            deprel: deprel.to_string(),
        }
    }

    fn dogs_chase_cats() -> Vec<TokenRecord> {
        vec![
            tok(1, "Dogs", "dog", "NOUN", 2, "nsubj"),
            tok(2, "chase", "chase", "VERB", 0, "root"),
            tok(3, "cats", "cat", "NOUN", 2, "dobj"),
        ]
    }

    #[test]
    fn extracts_subject_and_object() {
        let pairs = extract_pairs(&dogs_chase_cats(), &ExtractionConfig::default());
        assert_eq!(
            pairs,
            vec![
                DepPair {
                    noun: "dog".into(),
                    verb: "chase".into(),
                    role: Role::Subject
                },
                DepPair {
                    noun: "cat".into(),
                    verb: "chase".into(),
                    role: Role::Object
                },
            ]
        );
    }

    #[test]
    fn sentence_without_verbs_yields_nothing() {
        let sentence = vec![
            tok(1, "Red", "red", "ADJ", 2, "amod"),
            tok(2, "dogs", "dog", "NOUN", 0, "root"),
        ];
        assert!(extract_pairs(&sentence, &ExtractionConfig::default()).is_empty());
    }

    #[test]
    fn unlisted_relation_is_skipped() {
        let mut sentence = dogs_chase_cats();
        sentence[2].deprel = "advcl".to_string();
        let pairs = extract_pairs(&sentence, &ExtractionConfig::default());
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].role, Role::Subject);
    }

    #[test]
    fn lemma_falls_back_to_lowercased_surface() {
        let mut sentence = dogs_chase_cats();
        for token in &mut sentence {
            token.lemma = "_".to_string();
        }
        let pairs = extract_pairs(&sentence, &ExtractionConfig::default());
        assert_eq!(pairs[0].noun, "dogs");
        assert_eq!(pairs[0].verb, "chase");
        assert_eq!(pairs[1].noun, "cats");
    }

    #[test]
    fn pronoun_subjects_count() {
        let sentence = vec![
            tok(1, "They", "they", "PRON", 2, "nsubj"),
            tok(2, "run", "run", "VERB", 0, "root"),
        ];
        let pairs = extract_pairs(&sentence, &ExtractionConfig::default());
        assert_eq!(pairs[0].noun, "they");
    }

    #[test]
    fn overlapping_label_sets_are_rejected() {
        let err = ExtractionConfig::new(
            vec!["nsubj".to_string(), "dobj".to_string()],
            vec!["dobj".to_string()],
            vec!["NOUN".to_string()],
            vec!["VERB".to_string()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn extraction_is_per_sentence_local() {
        // Concatenating corpora yields the multiset union of pair lists.
        let cfg = ExtractionConfig::default();
        let a = dogs_chase_cats();
        let b = vec![
            tok(1, "Cats", "cat", "NOUN", 2, "nsubj"),
            tok(2, "eat", "eat", "VERB", 0, "root"),
        ];
        let mut separate = extract_pairs(&a, &cfg);
        separate.extend(extract_pairs(&b, &cfg));
        let combined: Vec<_> = [a, b]
            .iter()
            .flat_map(|s| extract_pairs(s, &cfg))
            .collect();
        assert_eq!(separate, combined);
    }
}
