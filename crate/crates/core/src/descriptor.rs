//! JSON code descriptors and the codes they build.
//!
//! ```json
//! { "field": { "p": 13 },
//!   "construction": "lrcrs", "p_poly": [0, 0, 0, 0, 1], "l": [2, 2] }
//! ```
//!
//! `construction` is one of `rs` (`points`: list or `"all"`, `k`), `lrcrs`
//! (`p_poly` lowest degree first, `l`) or `generator` (`rows`). Integers may
//! be negative; `-v` denotes the additive inverse of `v`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::codeops::{CodeError, LinearCode};
use crate::galois::{Felt, Field, FieldError, FieldSpec, Poly};
use crate::localrepair::{self, RecoveryPlan, RepairError};
use crate::rscodes::{ConstructionError, LrcRsSpec, RsSpec};

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("descriptor parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("construction: {0}")]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDescriptor {
    pub p: u32,
    #[serde(default = "default_m")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<i64>>,
}

fn default_m() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSet {
    #[serde(with = "all_marker")]
    All,
    List(Vec<i64>),
}

mod all_marker {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("all")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "all" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!("expected \"all\", got {s:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "lowercase")]
pub enum Construction {
    Rs { points: PointSet, k: usize },
    Lrcrs { p_poly: Vec<i64>, l: Vec<usize> },
    Generator { rows: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub field: FieldDescriptor,
    #[serde(flatten)]
    pub construction: Construction,
}

impl CodeDescriptor {
    pub fn from_json(text: &str) -> Result<Self, DescriptorError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            DescriptorError::Parse {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    /// SHA-256 of the canonical compact serialization, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn build_field(&self) -> Result<Arc<Field>, DescriptorError> {
        let FieldDescriptor { p, m, modulus } = &self.field;
        let modulus = modulus.as_ref().map(|coeffs| {
            coeffs.iter().map(|&c| c.rem_euclid(*p as i64) as u32).collect()
        });
        Ok(Arc::new(Field::new(FieldSpec { p: *p, m: *m, modulus })?))
    }

    pub fn build(&self) -> Result<BuiltCode, DescriptorError> {
        let field = self.build_field()?;
        let conv = |v: &[i64]| -> Result<Vec<Felt>, FieldError> {
            v.iter().map(|&x| field.from_signed(x)).collect()
        };
        let kind = match &self.construction {
            Construction::Rs { points, k } => {
                let spec = match points {
                    PointSet::All => RsSpec::full_line(field.clone(), *k)?,
                    PointSet::List(pts) => RsSpec::new(field.clone(), conv(pts)?, *k)?,
                };
                CodeKind::Rs(spec)
            }
            Construction::Lrcrs { p_poly, l } => {
                let poly = Poly::new(conv(p_poly)?);
                CodeKind::LrcRs(LrcRsSpec::new(field.clone(), poly, l.clone())?)
            }
            Construction::Generator { rows } => {
                let n = rows.first().map_or(0, Vec::len);
                let rows = rows.iter().map(|r| conv(r)).collect::<Result<Vec<_>, _>>()?;
                CodeKind::Generator(LinearCode::from_rows(field.clone(), n, rows)?)
            }
        };
        let code = match &kind {
            CodeKind::Rs(s) => s.code(),
            CodeKind::LrcRs(s) => s.code(),
            CodeKind::Generator(c) => c.clone(),
        };
        Ok(BuiltCode { field, kind, code, digest: self.digest() })
    }
}

#[derive(Debug, Clone)]
pub enum CodeKind {
    Rs(RsSpec),
    LrcRs(LrcRsSpec),
    Generator(LinearCode),
}

/// A constructed code together with its canonical linear form.
#[derive(Debug, Clone)]
pub struct BuiltCode {
    pub field: Arc<Field>,
    pub kind: CodeKind,
    pub code: LinearCode,
    pub digest: String,
}

impl BuiltCode {
    pub fn n(&self) -> usize {
        self.code.len()
    }

    /// Message length accepted by [`encode`](Self::encode).
    pub fn k(&self) -> usize {
        match &self.kind {
            CodeKind::Rs(s) => s.k(),
            CodeKind::LrcRs(s) => s.k(),
            CodeKind::Generator(c) => c.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            CodeKind::Rs(_) => "rs",
            CodeKind::LrcRs(_) => "lrcrs",
            CodeKind::Generator(_) => "generator",
        }
    }

    /// Encodes against the construction's own basis (monomials for `rs` and
    /// `lrcrs`, the reduced generator for `generator`).
    pub fn encode(&self, message: &[Felt]) -> Result<Vec<Felt>, ConstructionError> {
        match &self.kind {
            CodeKind::Rs(s) => s.encode(message),
            CodeKind::LrcRs(s) => s.encode(message),
            CodeKind::Generator(c) => {
                if message.len() != c.dim() {
                    return Err(ConstructionError::BadMessageLength { got: message.len(), expected: c.dim() });
                }
                Ok(c.encode(message))
            }
        }
    }

    /// The construction-specific plan: `F(x)` vectors for `rs` and for
    /// `lrcrs` with `t ≤ 1`, dual-code search otherwise.
    pub fn plan(&self, target: usize, t: usize, helpers: Option<&[usize]>) -> Result<RecoveryPlan, RepairError> {
        match (&self.kind, helpers) {
            (CodeKind::Rs(s), _) => localrepair::plan_rs(s, target, t, helpers),
            (CodeKind::LrcRs(s), None) if t <= 1 => localrepair::plan_lrcrs_with_t(s, target, t),
            _ => localrepair::plan_generic(&self.code, target, t, helpers),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"field":{"p":13},"construction":"lrcrs","p_poly":[0,0,0,0,1],"l":[2,2]}"#;

    #[test]
    fn parse_example_descriptor() {
        let d = CodeDescriptor::from_json(EXAMPLE).unwrap();
        let built = d.build().unwrap();
        assert_eq!((built.n(), built.k()), (12, 6));
        assert_eq!(built.kind_name(), "lrcrs");
        assert_eq!(d.digest().len(), 64);
    }

    #[test]
    fn parse_rs_variants() {
        let all = CodeDescriptor::from_json(r#"{"field":{"p":13},"construction":"rs","points":"all","k":3}"#).unwrap();
        assert_eq!(all.build().unwrap().n(), 13);
        let neg = CodeDescriptor::from_json(r#"{"field":{"p":13},"construction":"rs","points":[1,5,-5,-1],"k":2}"#)
            .unwrap()
            .build()
            .unwrap();
        match neg.kind {
            CodeKind::Rs(s) => assert_eq!(s.points(), &[Felt(1), Felt(5), Felt(8), Felt(12)]),
            _ => panic!("expected rs"),
        }
    }

    #[test]
    fn parse_generator_and_extension() {
        let d = CodeDescriptor::from_json(
            r#"{"field":{"p":2,"m":4,"modulus":[1,1,0,0,1]},"construction":"generator","rows":[[1,0,3],[0,1,5]]}"#,
        )
        .unwrap();
        let b = d.build().unwrap();
        assert_eq!((b.n(), b.k()), (3, 2));
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = CodeDescriptor::from_json(r#"{"field":{"p":13},"construction":"rs","points":"some","k":3}"#)
            .unwrap_err();
        assert!(matches!(err, DescriptorError::Parse { .. }), "{err}");
        let err = CodeDescriptor::from_json("{\"field\":{\"p\":\"x\"},\n\"construction\":\"rs\"}").unwrap_err();
        match err {
            DescriptorError::Parse { path, .. } => assert_eq!(path, "field.p"),
            other => panic!("{other}"),
        }
        let err = CodeDescriptor::from_json(r#"{"field":{"p":4},"construction":"rs","points":"all","k":1}"#)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(matches!(err, DescriptorError::Field(FieldError::NotPrime(4))));
    }

    #[test]
    fn digest_tracks_content() {
        let a = CodeDescriptor::from_json(EXAMPLE).unwrap();
        let spaced = CodeDescriptor::from_json(
            r#"{ "construction": "lrcrs", "field": {"p": 13}, "l": [2, 2], "p_poly": [0,0,0,0,1] }"#,
        )
        .unwrap();
        assert_eq!(a.digest(), spaced.digest());
        let b = CodeDescriptor::from_json(r#"{"field":{"p":13},"construction":"lrcrs","p_poly":[0,0,0,0,1],"l":[1,2]}"#)
            .unwrap();
        assert_ne!(a.digest(), b.digest());
    }
}
