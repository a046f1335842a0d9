//! Instance files: a field, a dimension and generator matrices as JSON.
//!
//! ```json
//! {"field": {"p": 3, "k": 2, "modulus": [1, 0, 1]}, "n": 3,
//!  "generators": [[[[1], [1], [1]], [[0], [1], [0]], [[0], [0], [1]]]]}
//! ```
//!
//! Matrices are row-major and entry `[r][c]` is the coefficient of `x_r` in
//! the image of `x_c`. Entries are coefficient lists in the power basis of
//! the extension (or plain integers).

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldDescriptor, FieldSpec};
use crate::group::{MatrixGroup, DEFAULT_GROUP_CAP};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Coeffs(Vec<u32>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub field: FieldDescriptor,
    pub n: usize,
    pub generators: Vec<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<InstanceOptions>,
}

/// A parsed instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub field: Arc<FieldSpec>,
    pub n: usize,
    pub generators: Vec<Matrix>,
    pub label: Option<String>,
    pub options: InstanceOptions,
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Instance::from_file(file)
    }

    pub fn from_file(file: InstanceFile) -> Result<Instance> {
        let field = FieldSpec::from_descriptor(&file.field)?;
        let n = file.n;
        let mut generators = Vec::with_capacity(file.generators.len());
        for (g, rows) in file.generators.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Validation(format!("generator {} is not {n}x{n}", g + 1)));
            }
            let mut m = Matrix::zeros(n, n);
            for (r, row) in rows.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    let v = match e {
                        Entry::Int(i) => field.from_int(*i),
                        Entry::Coeffs(cs) => field.from_coeffs(cs)?,
                    };
                    m.set(r, c, v);
                }
            }
            generators.push(m);
        }
        if let Some(labels) = &file.labels {
            if labels.len() != generators.len() {
                return Err(Error::Validation("one label per generator expected".into()));
            }
        }
        Ok(Instance {
            field,
            n,
            generators,
            label: file.label,
            options: file.options.unwrap_or_default(),
        })
    }

    pub fn new(field: Arc<FieldSpec>, generators: Vec<Matrix>) -> Instance {
        let n = generators.first().map_or(0, Matrix::rows);
        Instance {
            field,
            n,
            generators,
            label: None,
            options: InstanceOptions::default(),
        }
    }

    /// Closure of the generators, validated as a p-group.
    pub fn group(&self, cap: Option<usize>) -> Result<MatrixGroup> {
        let cap = cap.or(self.options.group_cap).unwrap_or(DEFAULT_GROUP_CAP);
        MatrixGroup::generate(&self.field, self.n, &self.generators, cap, true)
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            field: self.field.descriptor(),
            n: self.n,
            generators: self.generators.iter().map(|m| matrix_entries(&self.field, m)).collect(),
            labels: None,
            label: self.label.clone(),
            options: None,
        }
    }

    /// Hex SHA-256 of the canonical serialization of field and generators.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "field": self.field.descriptor(),
            "n": self.n,
            "generators": self.generators.iter().map(|m| matrix_entries(&self.field, m)).collect::<Vec<_>>(),
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn matrix_entries(field: &FieldSpec, m: &Matrix) -> Vec<Vec<Entry>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| Entry::Coeffs(trimmed(field, m.get(r, c)))).collect())
        .collect()
}

fn trimmed(field: &FieldSpec, e: Elem) -> Vec<u32> {
    let mut cs = field.coeffs(e);
    while cs.len() > 1 && cs.last() == Some(&0) {
        cs.pop();
    }
    cs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn round_trip_and_hash() {
        let (f, gens) = samples::f9_two_transvections();
        let inst = Instance::new(f, gens.clone());
        let text = serde_json::to_string(&inst.to_file()).unwrap();
        let back = Instance::parse(&text).unwrap();
        assert_eq!(back.generators, gens);
        assert_eq!(back.hash(), inst.hash());
        assert_eq!(inst.hash().len(), 64);
        assert_eq!(back.group(None).unwrap().order(), 9);
    }

    #[test]
    fn integer_entries_and_errors() {
        let text = r#"{"field": {"p": 3}, "n": 2, "generators": [[[1, 1], [0, 1]]]}"#;
        let inst = Instance::parse(text).unwrap();
        assert_eq!(inst.group(None).unwrap().order(), 3);
        let bad = "{\"field\": {\"p\": 3},\n \"n\": 2, \"generators\": [[[1, 1], [0 1]]]}";
        match Instance::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let wrong = r#"{"field": {"p": 3}, "n": 2, "generators": [[[1, 1]]]}"#;
        assert!(matches!(Instance::parse(wrong), Err(Error::Validation(_))));
        let empty = r#"{"field": {"p": 2}, "n": 3, "generators": []}"#;
        assert_eq!(Instance::parse(empty).unwrap().group(None).unwrap().order(), 1);
    }
}
