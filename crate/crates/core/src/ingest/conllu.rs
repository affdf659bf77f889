//! CoNLL-U reading.
//!
//! Only the columns the pipeline consumes are retained: ID, FORM, LEMMA,
//! UPOS, HEAD and DEPREL. Multiword-token ranges (`3-4`) and empty nodes
//! (`5.1`) are skipped.

use std::io::BufRead;

use crate::error::{Error, Result};

/// One syntactic word of a parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRecord {
    /// 1-based position in the sentence.
    pub index: u32,
    pub surface_form: String,
    /// Lemma column verbatim; `"_"` means unspecified.
    pub lemma: String,
    /// Universal POS tag.
    pub upos: String,
    /// Head token index; 0 means the token attaches to the root.
    pub head: u32,
    /// Dependency relation label.
    pub deprel: String,
}

/// A parsed sentence: tokens with consecutive indices starting at 1.
pub type Sentence = Vec<TokenRecord>;

/// Streaming sentence reader over a CoNLL-U character stream.
pub struct ConlluReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    done: bool,
}

impl<R: BufRead> ConlluReader<R> {
    pub fn new(reader: R) -> Self {
        ConlluReader {
            lines: reader.lines(),
            line_no: 0,
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<Sentence>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut tokens: Vec<TokenRecord> = Vec::new();
        let mut token_lines: Vec<usize> = Vec::new();
        loop {
            match self.lines.next() {
                None => {
                    self.done = true;
                    if tokens.is_empty() {
                        return None;
                    }
                    return Some(finish_sentence(tokens, &token_lines));
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
                Some(Ok(raw)) => {
                    self.line_no += 1;
                    let line = raw.trim_end_matches('\r');
                    if line.is_empty() {
                        if tokens.is_empty() {
                            continue;
                        }
                        return Some(finish_sentence(tokens, &token_lines));
                    }
                    if line.starts_with('#') {
                        continue;
                    }
                    match parse_token_line(line, self.line_no) {
                        Ok(Some(token)) => {
                            tokens.push(token);
                            token_lines.push(self.line_no);
                        }
                        Ok(None) => {}
                        Err(e) => {
                            self.done = true;
                            return Some(Err(e));
                        }
                    }
                }
            }
        }
    }
}

/// Parse a whole stream into sentences.
pub fn parse_conllu<R: BufRead>(reader: R) -> Result<Vec<Sentence>> {
    ConlluReader::new(reader).collect()
}

fn parse_token_line(line: &str, line_no: usize) -> Result<Option<TokenRecord>> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(Error::parse(
            line_no,
            format!("expected 10 tab-separated columns, found {}", cols.len()),
        ));
    }
    let id = cols[0];
    // Multiword-token range or empty node.
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    let index: u32 = id
        .parse()
        .map_err(|_| Error::parse(line_no, format!("invalid token id {id:?}")))?;
    if index == 0 {
        return Err(Error::parse(line_no, "token id must be >= 1"));
    }
    let head: u32 = cols[6]
        .parse()
        .map_err(|_| Error::parse(line_no, format!("non-integer HEAD {:?}", cols[6])))?;
    if head == index {
        return Err(Error::parse(
            line_no,
            format!("token {index} is its own head"),
        ));
    }
    if cols[3].is_empty() || cols[7].is_empty() {
        return Err(Error::parse(line_no, "empty UPOS or DEPREL column"));
    }
    Ok(Some(TokenRecord {
        index,
        surface_form: cols[1].to_string(),
        lemma: cols[2].to_string(),
        upos: cols[3].to_string(),
        head,
        deprel: cols[7].to_string(),
    }))
}

fn finish_sentence(tokens: Vec<TokenRecord>, token_lines: &[usize]) -> Result<Sentence> {
    for (pos, (token, line)) in tokens.iter().zip(token_lines).enumerate() {
        if token.index as usize != pos + 1 {
            return Err(Error::parse(
                *line,
                format!("non-sequential token id {} (expected {})", token.index, pos + 1),
            ));
        }
    }
    for (token, line) in tokens.iter().zip(token_lines) {
        if token.head as usize > tokens.len() {
            return Err(Error::parse(
                *line,
                format!(
                    "HEAD {} out of range in a {}-token sentence",
                    token.head,
                    tokens.len()
                ),
            ));
        }
    }
    Ok(tokens)
}
