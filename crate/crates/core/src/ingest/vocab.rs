//! Frequency-thresholded vocabulary over extracted pairs.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ingest::extract::{DepPair, Role};
use crate::ingest::pairfile::PairCounts;

/// Identity of a noun index space; two sparse vectors are only comparable
/// when their spaces match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceId {
    hash: u64,
    len: u32,
}

impl SpaceId {
    /// Number of coordinates in the space.
    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }
}

/// The noun index space plus the admitted verb set.
///
/// Nouns are sorted bytewise and deduplicated; their positions define the
/// coordinates of every pair vector built against this vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    nouns: Vec<String>,
    index: HashMap<String, u32>,
    verbs: BTreeSet<String>,
    min_verb_count: u64,
    min_noun_count: u64,
    space: SpaceId,
}

impl Vocabulary {
    /// Build from a pair stream. A noun is admitted when it reaches
    /// `min_noun_count` in the subject role and in the object role (global
    /// counts); a verb when its total pair count reaches `min_verb_count`.
    pub fn build(
        pairs: impl IntoIterator<Item = DepPair>,
        min_verb_count: u64,
        min_noun_count: u64,
    ) -> Self {
        Vocabulary::from_pair_counts(
            &PairCounts::from_pairs(pairs),
            min_verb_count,
            min_noun_count,
        )
    }

    /// Same thresholds applied to already-aggregated counts.
    pub fn from_pair_counts(counts: &PairCounts, min_verb_count: u64, min_noun_count: u64) -> Self {
        let mut noun_subj: BTreeMap<&str, u64> = BTreeMap::new();
        let mut noun_obj: BTreeMap<&str, u64> = BTreeMap::new();
        let mut verb_totals: BTreeMap<&str, u64> = BTreeMap::new();
        for (role, noun, verb, count) in counts.iter() {
            let per_noun = match role {
                Role::Subject => &mut noun_subj,
                Role::Object => &mut noun_obj,
            };
            *per_noun.entry(noun).or_insert(0) += count;
            *verb_totals.entry(verb).or_insert(0) += count;
        }
        let nouns: Vec<String> = noun_subj
            .iter()
            .filter(|(noun, subj_count)| {
                **subj_count >= min_noun_count
                    && noun_obj.get(*noun).copied().unwrap_or(0) >= min_noun_count
            })
            .map(|(noun, _)| noun.to_string())
            .collect();
        let verbs: BTreeSet<String> = verb_totals
            .iter()
            .filter(|(_, count)| **count >= min_verb_count)
            .map(|(verb, _)| verb.to_string())
            .collect();
        let vocab = Vocabulary::from_parts(nouns, verbs, min_verb_count, min_noun_count);
        if vocab.num_nouns() == 0 || vocab.num_verbs() == 0 {
            log::warn!(
                "vocabulary is sparse or empty: {} nouns, {} verbs (thresholds {}/{})",
                vocab.num_nouns(),
                vocab.num_verbs(),
                min_verb_count,
                min_noun_count
            );
        }
        vocab
    }

    fn from_parts(
        nouns: Vec<String>,
        verbs: BTreeSet<String>,
        min_verb_count: u64,
        min_noun_count: u64,
    ) -> Self {
        debug_assert!(nouns.windows(2).all(|w| w[0] < w[1]), "nouns sorted+unique");
        let index = nouns
            .iter()
            .enumerate()
            .map(|(i, noun)| (noun.clone(), i as u32))
            .collect();
        let space = space_id_of(&nouns);
        Vocabulary {
            nouns,
            index,
            verbs,
            min_verb_count,
            min_noun_count,
            space,
        }
    }

    /// Nouns in coordinate order.
    pub fn nouns(&self) -> &[String] {
        &self.nouns
    }

    /// Coordinate of a noun, if admitted.
    pub fn noun_index(&self, lemma: &str) -> Option<u32> {
        self.index.get(lemma).copied()
    }

    pub fn contains_verb(&self, lemma: &str) -> bool {
        self.verbs.contains(lemma)
    }

    pub fn verbs(&self) -> &BTreeSet<String> {
        &self.verbs
    }

    pub fn num_nouns(&self) -> usize {
        self.nouns.len()
    }

    pub fn num_verbs(&self) -> usize {
        self.verbs.len()
    }

    pub fn min_verb_count(&self) -> u64 {
        self.min_verb_count
    }

    pub fn min_noun_count(&self) -> u64 {
        self.min_noun_count
    }

    pub fn space_id(&self) -> SpaceId {
        self.space
    }

    /// Write the vocabulary file: `#nouns <n> #verbs <m>` then one lemma per
    /// line prefixed `N<TAB>` or `V<TAB>`, each block sorted.
    pub fn save<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "#nouns {} #verbs {}", self.nouns.len(), self.verbs.len())?;
        for noun in &self.nouns {
            writeln!(writer, "N\t{noun}")?;
        }
        for verb in &self.verbs {
            writeln!(writer, "V\t{verb}")?;
        }
        Ok(())
    }

    /// Load a vocabulary file. Thresholds are not part of the artifact and
    /// come back as 0.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing vocabulary header"))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n_nouns, n_verbs) = match fields.as_slice() {
            ["#nouns", n, "#verbs", m] => {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse(1, format!("invalid noun count {n:?}")))?;
                let m: usize = m
                    .parse()
                    .map_err(|_| Error::parse(1, format!("invalid verb count {m:?}")))?;
                (n, m)
            }
            _ => return Err(Error::parse(1, format!("malformed header {header:?}"))),
        };
        let mut nouns = Vec::with_capacity(n_nouns);
        let mut verbs = BTreeSet::new();
        for (line_no, line) in lines.enumerate() {
            let line_no = line_no + 2;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            match line.split_once('\t') {
                Some(("N", lemma)) if !lemma.is_empty() => nouns.push(lemma.to_string()),
                Some(("V", lemma)) if !lemma.is_empty() => {
                    verbs.insert(lemma.to_string());
                }
                _ => return Err(Error::parse(line_no, format!("malformed entry {line:?}"))),
            }
        }
        if nouns.len() != n_nouns || verbs.len() != n_verbs {
            return Err(Error::parse(
                1,
                format!(
                    "header declares {n_nouns} nouns / {n_verbs} verbs, found {} / {}",
                    nouns.len(),
                    verbs.len()
                ),
            ));
        }
        if !nouns.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::parse(1, "noun block is not sorted and duplicate-free"));
        }
        Ok(Vocabulary::from_parts(nouns, verbs, 0, 0))
    }
}

fn space_id_of(nouns: &[String]) -> SpaceId {
    // DefaultHasher::new() uses fixed keys, so the id is stable across runs.
    let mut hasher = DefaultHasher::new();
    for noun in nouns {
        noun.hash(&mut hasher);
    }
    SpaceId {
        hash: hasher.finish(),
        len: nouns.len() as u32,
    }
}
