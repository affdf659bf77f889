//! Pretrained word-vector loading and cosine similarity lookups.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::num::Scalar;

/// How to treat words absent from the embedding table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OovPolicy {
    /// Fail, naming the missing word.
    #[default]
    Strict,
    /// Treat the similarity as 0.
    Lenient,
}

impl OovPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "strict" => Some(OovPolicy::Strict),
            "lenient" => Some(OovPolicy::Lenient),
            _ => None,
        }
    }
}

/// word -> dense vector of a fixed dimension, with cached Euclidean norms.
#[derive(Debug, Clone)]
pub struct EmbeddingTable<F> {
    dim: usize,
    rows: HashMap<String, usize>,
    matrix: Vec<F>,
    norms: Vec<F>,
}

impl<F: Scalar> EmbeddingTable<F> {
    /// Parse the textual format: an optional `<count> <dim>` header, then
    /// one `word v1 v2 ... vd` line per vector. Later duplicates win.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut rows: HashMap<String, usize> = HashMap::new();
        let mut matrix: Vec<F> = Vec::new();

        for (line_no, line) in reader.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let word = fields.next().expect("non-empty line has a first field");
            let values: Vec<&str> = fields.collect();

            if line_no == 1 && values.len() == 1 {
                if let (Ok(_count), Ok(d)) = (word.parse::<usize>(), values[0].parse::<usize>()) {
                    if d == 0 {
                        return Err(Error::parse(line_no, "header declares dimension 0"));
                    }
                    dim = Some(d);
                    continue;
                }
            }

            let d = *dim.get_or_insert(values.len());
            if values.len() != d {
                return Err(Error::parse(
                    line_no,
                    format!("expected {} components, found {}", d, values.len()),
                ));
            }
            if d == 0 {
                return Err(Error::parse(line_no, "vector line has no components"));
            }
            let mut vector = Vec::with_capacity(d);
            for value in values {
                let parsed: f64 = value.parse().map_err(|_| {
                    Error::parse(line_no, format!("non-numeric component {value:?}"))
                })?;
                let scalar = F::from_f64(parsed).ok_or_else(|| {
                    Error::parse(line_no, format!("component {value:?} not representable"))
                })?;
                vector.push(scalar);
            }
            match rows.get(word) {
                Some(&row) => {
                    log::warn!("duplicate embedding for {word:?}; keeping the last occurrence");
                    matrix[row * d..(row + 1) * d].copy_from_slice(&vector);
                }
                None => {
                    rows.insert(word.to_string(), rows.len());
                    matrix.extend_from_slice(&vector);
                }
            }
        }

        let dim = dim.ok_or_else(|| Error::parse(1, "empty embedding input: no dimension"))?;
        if rows.is_empty() {
            return Err(Error::parse(1, "embedding input has a header but no vectors"));
        }
        Ok(Self::from_matrix(dim, rows, matrix))
    }

    /// Open a file, transparently decompressing `.gz` paths.
    pub fn load_path(path: &Path) -> Result<Self> {
        let file = File::open(path)?;
        if path.extension().is_some_and(|ext| ext == "gz") {
            Self::load(BufReader::new(flate2::read::GzDecoder::new(file)))
        } else {
            Self::load(BufReader::new(file))
        }
    }

    /// Build directly from (word, vector) pairs; all vectors must share one
    /// dimension. Later duplicates win, mirroring `load`.
    pub fn from_vectors(vectors: impl IntoIterator<Item = (String, Vec<F>)>) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut rows: HashMap<String, usize> = HashMap::new();
        let mut matrix: Vec<F> = Vec::new();
        for (word, vector) in vectors {
            let d = *dim.get_or_insert(vector.len());
            if vector.len() != d || d == 0 {
                return Err(Error::InvalidConfig(format!(
                    "vector for {word:?} has length {}, expected {d}",
                    vector.len()
                )));
            }
            match rows.get(&word) {
                Some(&row) => matrix[row * d..(row + 1) * d].copy_from_slice(&vector),
                None => {
                    rows.insert(word, rows.len());
                    matrix.extend_from_slice(&vector);
                }
            }
        }
        let dim = dim.ok_or_else(|| Error::InvalidConfig("no vectors given".into()))?;
        Ok(Self::from_matrix(dim, rows, matrix))
    }

    fn from_matrix(dim: usize, rows: HashMap<String, usize>, matrix: Vec<F>) -> Self {
        let mut norms = vec![F::zero(); rows.len()];
        for (word, &row) in &rows {
            let norm = matrix[row * dim..(row + 1) * dim]
                .iter()
                .map(|v| *v * *v)
                .fold(F::zero(), |acc, v| acc + v)
                .sqrt();
            if norm == F::zero() {
                log::warn!("zero-norm vector for {word:?}; its similarities are defined as 0");
            }
            norms[row] = norm;
        }
        EmbeddingTable {
            dim,
            rows,
            matrix,
            norms,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.rows.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[F]> {
        self.rows
            .get(word)
            .map(|&row| &self.matrix[row * self.dim..(row + 1) * self.dim])
    }

    /// Cached Euclidean norm.
    pub fn norm(&self, word: &str) -> Option<F> {
        self.rows.get(word).map(|&row| self.norms[row])
    }

    /// Noun-noun cosine similarity.
    pub fn nn_sim(&self, x: &str, y: &str, oov: OovPolicy) -> Result<F> {
        self.sim(x, y, oov)
    }

    /// Noun-verb cosine similarity; same code path as [`nn_sim`], so the
    /// symmetry guarantees are identical.
    ///
    /// [`nn_sim`]: EmbeddingTable::nn_sim
    pub fn nv_sim(&self, x: &str, y: &str, oov: OovPolicy) -> Result<F> {
        self.sim(x, y, oov)
    }

    fn sim(&self, x: &str, y: &str, oov: OovPolicy) -> Result<F> {
        let (Some(&row_x), Some(&row_y)) = (self.rows.get(x), self.rows.get(y)) else {
            let missing = if self.rows.contains_key(x) { y } else { x };
            return match oov {
                OovPolicy::Strict => Err(Error::MissingWord(missing.to_string())),
                OovPolicy::Lenient => {
                    log::trace!("OOV word {missing:?}; similarity defined as 0");
                    Ok(F::zero())
                }
            };
        };
        let denom = self.norms[row_x] * self.norms[row_y];
        if denom == F::zero() {
            return Ok(F::zero());
        }
        let dot = self.matrix[row_x * self.dim..(row_x + 1) * self.dim]
            .iter()
            .zip(&self.matrix[row_y * self.dim..(row_y + 1) * self.dim])
            .map(|(a, b)| *a * *b)
            .fold(F::zero(), |acc, v| acc + v);
        Ok(dot / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn toy() -> EmbeddingTable<f64> {
        EmbeddingTable::load("dog 1 0\ncat 0.6 0.8\nbone 0 1\nchase 0 1\n".as_bytes()).unwrap()
    }

    #[test]
    fn loads_and_infers_dimension() {
        let table = toy();
        assert_eq!(table.dimension(), 2);
        assert_eq!(table.len(), 4);
        assert_eq!(table.vector("cat").unwrap(), &[0.6, 0.8]);
    }

    #[test]
    fn header_line_is_honored() {
        let table = EmbeddingTable::<f64>::load("2 3\na 1 2 3\nb 4 5 6\n".as_bytes()).unwrap();
        assert_eq!(table.dimension(), 3);
        assert_eq!(table.len(), 2);
    }

    #[test]
    fn one_dimensional_vectors_without_header_work() {
        // "x 4" must not be mistaken for a header: "x" is not an integer.
        let table = EmbeddingTable::<f64>::load("x 4\ny 2\n".as_bytes()).unwrap();
        assert_eq!(table.dimension(), 1);
        assert_eq!(table.len(), 2);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(EmbeddingTable::<f64>::load("".as_bytes()).is_err());
        assert!(EmbeddingTable::<f64>::load("3 5\n".as_bytes()).is_err());
    }

    #[test]
    fn dimension_mismatch_reports_line() {
        let err = EmbeddingTable::<f64>::load("a 1 2\nb 1 2 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn non_numeric_component_reports_line() {
        let err = EmbeddingTable::<f64>::load("a 1 2\nb x 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn duplicate_word_keeps_last() {
        let table = EmbeddingTable::<f64>::load("a 1 0\na 0 1\n".as_bytes()).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.vector("a").unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn cosine_matches_hand_values() {
        let table = toy();
        assert_abs_diff_eq!(
            table.nn_sim("dog", "cat", OovPolicy::Strict).unwrap(),
            0.6,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            table.nn_sim("dog", "dog", OovPolicy::Strict).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_eq!(table.nn_sim("dog", "bone", OovPolicy::Strict).unwrap(), 0.0);
        assert_abs_diff_eq!(
            table.nv_sim("cat", "chase", OovPolicy::Strict).unwrap(),
            0.8,
            epsilon = 1e-12
        );
        assert_eq!(table.nv_sim("dog", "chase", OovPolicy::Strict).unwrap(), 0.0);
    }

    #[test]
    fn similarity_is_exactly_symmetric() {
        let table = toy();
        for x in ["dog", "cat", "bone", "chase"] {
            for y in ["dog", "cat", "bone", "chase"] {
                assert_eq!(
                    table.nn_sim(x, y, OovPolicy::Strict).unwrap(),
                    table.nn_sim(y, x, OovPolicy::Strict).unwrap()
                );
            }
        }
    }

    #[test]
    fn oov_policy_behaviour() {
        let table = toy();
        match table.nn_sim("dog", "unicorn", OovPolicy::Strict) {
            Err(Error::MissingWord(word)) => assert_eq!(word, "unicorn"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(table.nn_sim("dog", "unicorn", OovPolicy::Lenient).unwrap(), 0.0);
        assert_eq!(table.nn_sim("unicorn", "dog", OovPolicy::Lenient).unwrap(), 0.0);
    }

    #[test]
    fn zero_norm_vector_never_yields_nan() {
        let table = EmbeddingTable::<f64>::load("null 0 0\ndog 1 0\n".as_bytes()).unwrap();
        assert_eq!(table.nn_sim("null", "dog", OovPolicy::Strict).unwrap(), 0.0);
        assert_eq!(table.nn_sim("null", "null", OovPolicy::Strict).unwrap(), 0.0);
    }

    #[test]
    fn scale_invariance_of_similarity() {
        let a = EmbeddingTable::<f64>::from_vectors(vec![
            ("x".to_string(), vec![0.3, -0.4, 0.5]),
            ("y".to_string(), vec![1.0, 2.0, -1.0]),
        ])
        .unwrap();
        let b = EmbeddingTable::<f64>::from_vectors(vec![
            ("x".to_string(), vec![0.3 * 7.5, -0.4 * 7.5, 0.5 * 7.5]),
            ("y".to_string(), vec![1.0, 2.0, -1.0]),
        ])
        .unwrap();
        let sa = a.nn_sim("x", "y", OovPolicy::Strict).unwrap();
        let sb = b.nn_sim("x", "y", OovPolicy::Strict).unwrap();
        assert_abs_diff_eq!(sa, sb, epsilon = 1e-12);
    }

    #[test]
    fn gzip_input_is_transparent() {
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.txt.gz");
        let mut encoder = flate2::write::GzEncoder::new(
            File::create(&path).unwrap(),
            flate2::Compression::default(),
        );
        encoder.write_all(b"dog 1 0\ncat 0.6 0.8\n").unwrap();
        encoder.finish().unwrap();
        let table = EmbeddingTable::<f64>::load_path(&path).unwrap();
        assert_eq!(table.len(), 2);
        assert_abs_diff_eq!(
            table.nn_sim("dog", "cat", OovPolicy::Strict).unwrap(),
            0.6,
            epsilon = 1e-12
        );
    }
}
