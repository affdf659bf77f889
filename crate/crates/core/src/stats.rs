//! Role-specific (noun, verb) co-occurrence counts and PPMI association.
//!
//! Counts are exact integers and are what gets serialized; probabilities are
//! derived in floating point at query time.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ingest::{DepPair, PairCounts, Role};
use crate::num::Scalar;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct RoleTable {
    /// verb → noun → count
    by_verb: BTreeMap<String, BTreeMap<String, u64>>,
    noun_marginals: BTreeMap<String, u64>,
    verb_marginals: BTreeMap<String, u64>,
    total: u64,
}

impl RoleTable {
    fn add(&mut self, noun: &str, verb: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .by_verb
            .entry(verb.to_string())
            .or_default()
            .entry(noun.to_string())
            .or_insert(0) += count;
        *self.noun_marginals.entry(noun.to_string()).or_insert(0) += count;
        *self.verb_marginals.entry(verb.to_string()).or_insert(0) += count;
        self.total += count;
    }

    fn joint(&self, noun: &str, verb: &str) -> u64 {
        self.by_verb
            .get(verb)
            .and_then(|column| column.get(noun))
            .copied()
            .unwrap_or(0)
    }

    /// Cells sorted by (noun, verb).
    fn cells(&self) -> Vec<(&str, &str, u64)> {
        let mut cells: Vec<(&str, &str, u64)> = self
            .by_verb
            .iter()
            .flat_map(|(verb, column)| {
                column
                    .iter()
                    .map(move |(noun, count)| (noun.as_str(), verb.as_str(), *count))
            })
            .collect();
        cells.sort_unstable();
        cells
    }

    fn marginals_consistent(&self) -> bool {
        let mut nouns: BTreeMap<&str, u64> = BTreeMap::new();
        let mut verbs: BTreeMap<&str, u64> = BTreeMap::new();
        let mut total = 0u64;
        for (verb, column) in &self.by_verb {
            for (noun, count) in column {
                *nouns.entry(noun).or_insert(0) += count;
                *verbs.entry(verb.as_str()).or_insert(0) += count;
                total += count;
            }
        }
        total == self.total
            && nouns
                == self
                    .noun_marginals
                    .iter()
                    .map(|(k, v)| (k.as_str(), *v))
                    .collect()
            && verbs
                == self
                    .verb_marginals
                    .iter()
                    .map(|(k, v)| (k.as_str(), *v))
                    .collect()
    }
}

/// Sparse per-role co-occurrence counts plus marginals and totals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCountTable {
    subject: RoleTable,
    object: RoleTable,
}

impl PairCountTable {
    pub fn new() -> Self {
        PairCountTable::default()
    }

    /// Count a pair stream; the result is independent of input order.
    pub fn accumulate(pairs: impl IntoIterator<Item = DepPair>) -> Self {
        let mut table = PairCountTable::new();
        for pair in pairs {
            table.add(pair.role, &pair.noun, &pair.verb, 1);
        }
        table
    }

    /// Ingest already-aggregated pair counts.
    pub fn from_pair_counts(counts: &PairCounts) -> Self {
        let mut table = PairCountTable::new();
        for (role, noun, verb, count) in counts.iter() {
            table.add(role, noun, verb, count);
        }
        table
    }

    pub fn add(&mut self, role: Role, noun: &str, verb: &str, count: u64) {
        self.role_table_mut(role).add(noun, verb, count);
    }

    /// Cell-wise addition; tables form a commutative monoid.
    pub fn merge(&mut self, other: &PairCountTable) {
        for role in [Role::Subject, Role::Object] {
            for (noun, verb, count) in other.role_table(role).cells() {
                self.add(role, noun, verb, count);
            }
        }
    }

    fn role_table(&self, role: Role) -> &RoleTable {
        match role {
            Role::Subject => &self.subject,
            Role::Object => &self.object,
        }
    }

    fn role_table_mut(&mut self, role: Role) -> &mut RoleTable {
        match role {
            Role::Subject => &mut self.subject,
            Role::Object => &mut self.object,
        }
    }

    pub fn joint(&self, role: Role, noun: &str, verb: &str) -> u64 {
        self.role_table(role).joint(noun, verb)
    }

    pub fn noun_marginal(&self, role: Role, noun: &str) -> u64 {
        self.role_table(role)
            .noun_marginals
            .get(noun)
            .copied()
            .unwrap_or(0)
    }

    pub fn verb_marginal(&self, role: Role, verb: &str) -> u64 {
        self.role_table(role)
            .verb_marginals
            .get(verb)
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, role: Role) -> u64 {
        self.role_table(role).total
    }

    /// The verb's nonzero column for a role, sorted by noun.
    pub fn verb_column(&self, role: Role, verb: &str) -> impl Iterator<Item = (&str, u64)> {
        self.role_table(role)
            .by_verb
            .get(verb)
            .into_iter()
            .flat_map(|column| column.iter().map(|(noun, count)| (noun.as_str(), *count)))
    }

    /// All cells of a role sorted by (noun, verb).
    pub fn cells(&self, role: Role) -> Vec<(&str, &str, u64)> {
        self.role_table(role).cells()
    }

    /// Recompute marginals from the joint counts and compare.
    pub fn marginals_consistent(&self) -> bool {
        self.subject.marginals_consistent() && self.object.marginals_consistent()
    }

    /// Write the counts artifact: a `#role <subj|obj> total <T>` header per
    /// role followed by `<noun><TAB><verb><TAB><count>` lines sorted by
    /// (noun, verb); subject block first.
    pub fn save<W: Write>(&self, mut writer: W) -> Result<()> {
        for role in [Role::Subject, Role::Object] {
            let table = self.role_table(role);
            writeln!(writer, "#role {} total {}", role, table.total)?;
            for (noun, verb, count) in table.cells() {
                writeln!(writer, "{noun}\t{verb}\t{count}")?;
            }
        }
        Ok(())
    }

    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut table = PairCountTable::new();
        let mut current: Option<(Role, u64, usize)> = None;
        let mut block_sum = 0u64;
        let mut seen = Vec::new();

        let mut close_block = |current: &Option<(Role, u64, usize)>, block_sum: u64| -> Result<()> {
            if let Some((role, declared, header_line)) = current {
                if block_sum != *declared {
                    return Err(Error::parse(
                        *header_line,
                        format!(
                            "role {role} declares total {declared} but counts sum to {block_sum}"
                        ),
                    ));
                }
            }
            Ok(())
        };

        for (line_no, line) in reader.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#role ") {
                close_block(&current, block_sum)?;
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let (role, total) = match fields.as_slice() {
                    [role, "total", total] => {
                        let role = Role::parse(role).ok_or_else(|| {
                            Error::parse(line_no, format!("unknown role {role:?}"))
                        })?;
                        let total: u64 = total.parse().map_err(|_| {
                            Error::parse(line_no, format!("invalid total {total:?}"))
                        })?;
                        (role, total)
                    }
                    _ => return Err(Error::parse(line_no, format!("malformed header {line:?}"))),
                };
                if seen.contains(&role) {
                    return Err(Error::parse(line_no, format!("duplicate block for role {role}")));
                }
                seen.push(role);
                current = Some((role, total, line_no));
                block_sum = 0;
                continue;
            }
            let Some((role, _, _)) = current else {
                return Err(Error::parse(line_no, "count line before any #role header"));
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            if cols[0].is_empty() || cols[1].is_empty() {
                return Err(Error::parse(line_no, "empty noun or verb"));
            }
            let count: u64 = cols[2]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid count {:?}", cols[2])))?;
            table.add(role, cols[0], cols[1], count);
            block_sum += count;
        }
        close_block(&current, block_sum)?;
        Ok(table)
    }
}

/// PPMI of a single cell from raw counts.
///
/// `inv_ln_base` rescales from natural log (1 selects natural log itself).
/// Marginals must each be at least `joint`; a zero joint count yields 0
/// without ever evaluating a logarithm of zero.
pub fn ppmi_from_counts<F: Scalar>(
    joint: u64,
    noun_marginal: u64,
    verb_marginal: u64,
    total: u64,
    inv_ln_base: F,
) -> F {
    if joint == 0 {
        return F::zero();
    }
    let ratio = (F::from_count(joint) * F::from_count(total))
        / (F::from_count(noun_marginal) * F::from_count(verb_marginal));
    (ratio.ln() * inv_ln_base).max(F::zero())
}

/// Role-specific PPMI lookup over a count table.
#[derive(Debug, Clone, Copy)]
pub struct PpmiModel<'a, F: Scalar> {
    counts: &'a PairCountTable,
    inv_ln_base: F,
}

impl<'a, F: Scalar> PpmiModel<'a, F> {
    /// Natural-log model (the default).
    pub fn natural(counts: &'a PairCountTable) -> Self {
        PpmiModel {
            counts,
            inv_ln_base: F::one(),
        }
    }

    /// Model with an explicit log base > 1.
    pub fn with_base(counts: &'a PairCountTable, base: F) -> Result<Self> {
        if !(base > F::one()) {
            return Err(Error::InvalidConfig(format!("log base must be > 1, got {base}")));
        }
        Ok(PpmiModel {
            counts,
            inv_ln_base: F::one() / base.ln(),
        })
    }

    pub fn counts(&self) -> &'a PairCountTable {
        self.counts
    }

    pub(crate) fn inv_ln_base(&self) -> F {
        self.inv_ln_base
    }

    /// Association of `noun` with `verb` in `role`; always >= 0.
    pub fn ppmi(&self, noun: &str, verb: &str, role: Role) -> Result<F> {
        let total = self.counts.total(role);
        if total == 0 {
            return Err(Error::EmptyModel(role.as_str()));
        }
        Ok(ppmi_from_counts(
            self.counts.joint(role, noun, verb),
            self.counts.noun_marginal(role, noun),
            self.counts.verb_marginal(role, verb),
            total,
            self.inv_ln_base,
        ))
    }
}
