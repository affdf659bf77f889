//! Aggregated pair counts and the pair-file artifact.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ingest::extract::{DepPair, Role};
use crate::ingest::vocab::Vocabulary;

/// Multiset of extracted pairs, aggregated per role.
///
/// Forms a commutative monoid under [`merge`](PairCounts::merge), so shard
/// results can be combined in any order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounts {
    subject: BTreeMap<(String, String), u64>,
    object: BTreeMap<(String, String), u64>,
}

impl PairCounts {
    pub fn new() -> Self {
        PairCounts::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = DepPair>) -> Self {
        let mut counts = PairCounts::new();
        for pair in pairs {
            counts.add(&pair);
        }
        counts
    }

    pub fn add(&mut self, pair: &DepPair) {
        self.add_count(pair.role, &pair.noun, &pair.verb, 1);
    }

    pub fn add_count(&mut self, role: Role, noun: &str, verb: &str, count: u64) {
        *self
            .map_mut(role)
            .entry((noun.to_string(), verb.to_string()))
            .or_insert(0) += count;
    }

    /// Cell-wise addition; commutative and associative.
    pub fn merge(&mut self, other: PairCounts) {
        for (key, count) in other.subject {
            *self.subject.entry(key).or_insert(0) += count;
        }
        for (key, count) in other.object {
            *self.object.entry(key).or_insert(0) += count;
        }
    }

    fn map_mut(&mut self, role: Role) -> &mut BTreeMap<(String, String), u64> {
        match role {
            Role::Subject => &mut self.subject,
            Role::Object => &mut self.object,
        }
    }

    pub fn role(&self, role: Role) -> &BTreeMap<(String, String), u64> {
        match role {
            Role::Subject => &self.subject,
            Role::Object => &self.object,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.subject.is_empty() && self.object.is_empty()
    }

    /// Number of distinct (role, noun, verb) cells.
    pub fn num_cells(&self) -> usize {
        self.subject.len() + self.object.len()
    }

    /// Total pair occurrences across both roles.
    pub fn total(&self) -> u64 {
        self.subject.values().sum::<u64>() + self.object.values().sum::<u64>()
    }

    /// Iterate all cells in artifact order: sorted by (role, noun, verb)
    /// with the role compared as its string form, so `obj` precedes `subj`.
    pub fn iter(&self) -> impl Iterator<Item = (Role, &str, &str, u64)> {
        let block = |role: Role, map: &'_ BTreeMap<(String, String), u64>| {
            map.iter()
                .map(move |((noun, verb), count)| (role, noun.as_str(), verb.as_str(), *count))
                .collect::<Vec<_>>()
        };
        block(Role::Object, &self.object)
            .into_iter()
            .chain(block(Role::Subject, &self.subject))
    }

    /// Drop cells whose noun or verb is outside the vocabulary.
    pub fn retain_vocabulary(&mut self, vocab: &Vocabulary) {
        let keep = |(noun, verb): &(String, String)| {
            vocab.noun_index(noun).is_some() && vocab.contains_verb(verb)
        };
        self.subject.retain(|key, _| keep(key));
        self.object.retain(|key, _| keep(key));
    }

    /// First cell referencing a lemma outside the vocabulary, if any.
    pub fn first_non_vocabulary_lemma(&self, vocab: &Vocabulary) -> Option<String> {
        for (_, noun, verb, _) in self.iter() {
            if vocab.noun_index(noun).is_none() {
                return Some(noun.to_string());
            }
            if !vocab.contains_verb(verb) {
                return Some(verb.to_string());
            }
        }
        None
    }

    /// Write the pair file: `role<TAB>noun<TAB>verb<TAB>count` lines in
    /// artifact order.
    pub fn save<W: Write>(&self, mut writer: W) -> Result<()> {
        for (role, noun, verb, count) in self.iter() {
            writeln!(writer, "{role}\t{noun}\t{verb}\t{count}")?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut counts = PairCounts::new();
        for (line_no, line) in reader.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 4 tab-separated columns, found {}", cols.len()),
                ));
            }
            let role = Role::parse(cols[0])
                .ok_or_else(|| Error::parse(line_no, format!("unknown role {:?}", cols[0])))?;
            if cols[1].is_empty() || cols[2].is_empty() {
                return Err(Error::parse(line_no, "empty noun or verb"));
            }
            let count: u64 = cols[3]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid count {:?}", cols[3])))?;
            counts.add_count(role, cols[1], cols[2], count);
        }
        Ok(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(noun: &str, verb: &str, role: Role) -> DepPair {
        DepPair {
            noun: noun.into(),
            verb: verb.into(),
            role,
        }
    }

    #[test]
    fn aggregates_and_orders_cells() {
        let counts = PairCounts::from_pairs(vec![
            pair("dog", "chase", Role::Subject),
            pair("dog", "chase", Role::Subject),
            pair("cat", "chase", Role::Object),
            pair("ant", "eat", Role::Subject),
        ]);
        let cells: Vec<_> = counts
            .iter()
            .map(|(r, n, v, c)| (r.as_str(), n.to_string(), v.to_string(), c))
            .collect();
        // Object block first: "obj" < "subj" as strings.
        assert_eq!(
            cells,
            vec![
                ("obj", "cat".to_string(), "chase".to_string(), 1),
                ("subj", "ant".to_string(), "eat".to_string(), 1),
                ("subj", "dog".to_string(), "chase".to_string(), 2),
            ]
        );
    }

    #[test]
    fn save_load_round_trips() {
        let counts = PairCounts::from_pairs(vec![
            pair("dog", "chase", Role::Subject),
            pair("dog", "chase", Role::Subject),
            pair("cat", "chase", Role::Object),
        ]);
        let mut buf = Vec::new();
        counts.save(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "obj\tcat\tchase\t1\nsubj\tdog\tchase\t2\n"
        );
        let reloaded = PairCounts::load(buf.as_slice()).unwrap();
        assert_eq!(reloaded, counts);
    }

    #[test]
    fn merge_is_commutative() {
        let a = PairCounts::from_pairs(vec![pair("dog", "chase", Role::Subject)]);
        let b = PairCounts::from_pairs(vec![
            pair("dog", "chase", Role::Subject),
            pair("cat", "eat", Role::Object),
        ]);
        let mut ab = a.clone();
        ab.merge(b.clone());
        let mut ba = b;
        ba.merge(a);
        assert_eq!(ab, ba);
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let text = "subj\tdog\tchase\t2\nsubj\tdog\tchase\n";
        let err = PairCounts::load(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn unknown_role_is_rejected() {
        let err = PairCounts::load("verb\tdog\tchase\t1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
