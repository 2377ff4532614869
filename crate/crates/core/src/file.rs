//! The `.qh` structure file: a JSON document with basis labels for
//! indices and scalars as strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::CatalogEntry;
use crate::graded::{Algebra, Element, GradedBasis, GradedError, LinearMap, Parity, Tensor};
use crate::linalg::Matrix;
use crate::quasihopf::{Parts, QuasiHopf, StructureError};
use crate::representations::{Representation, RepresentationError};
use crate::scalars::{parse_scalar, FieldDescriptor, Scalar};
use crate::twisting::{TwistError, Twistor};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown field descriptor {0:?}")]
    Field(String),
    #[error("bad scalar in {context} at position {position}: {message}")]
    Scalar {
        context: String,
        position: usize,
        message: String,
    },
    #[error("unknown basis label {label:?} in {context}")]
    Label { label: String, context: String },
    #[error("{context}: expected {expected} legs, found {found}")]
    Legs {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("parity must be 0 or 1, found {0}")]
    Parity(u8),
    #[error("{0}")]
    Missing(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTerm {
    pub legs: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTerm {
    pub label: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<ElementTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistorEntry {
    pub name: String,
    pub f: Vec<TensorTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_inv: Option<Vec<TensorTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationEntry {
    pub name: String,
    pub parities: Vec<u8>,
    /// Row-major matrix per basis label.
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub field: String,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    pub mul: Vec<ProductEntry>,
    pub coproduct: BTreeMap<String, Vec<TensorTerm>>,
    pub counit: BTreeMap<String, String>,
    pub antipode: BTreeMap<String, Vec<ElementTerm>>,
    pub phi: Vec<TensorTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_inv: Option<Vec<TensorTerm>>,
    pub alpha: Vec<ElementTerm>,
    pub beta: Vec<ElementTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<TensorTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_inv: Option<Vec<TensorTerm>>,
    #[serde(default)]
    pub twistors: Vec<TwistorEntry>,
    #[serde(default)]
    pub representations: Vec<RepresentationEntry>,
}

// -- rendering ----------------------------------------------------------------

fn tensor_terms(alg: &Algebra, t: &Tensor) -> Vec<TensorTerm> {
    t.terms()
        .map(|(k, c)| TensorTerm {
            legs: k.iter().map(|&i| alg.label(i).to_string()).collect(),
            coeff: c.to_string(),
        })
        .collect()
}

fn element_terms(alg: &Algebra, e: &Element) -> Vec<ElementTerm> {
    e.terms()
        .map(|(i, c)| ElementTerm {
            label: alg.label(i).to_string(),
            coeff: c.to_string(),
        })
        .collect()
}

impl StructureFile {
    pub fn from_entry(entry: &CatalogEntry) -> Self {
        let h = &entry.structure;
        let alg = h.algebra();
        let d = alg.dim();
        let label = |i: usize| alg.label(i).to_string();
        let mut mul = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let p = alg.product(i, j);
                if !p.is_zero() {
                    mul.push(ProductEntry {
                        left: label(i),
                        right: label(j),
                        terms: element_terms(alg, p),
                    });
                }
            }
        }
        Self {
            name: entry.name.clone(),
            notes: entry.notes.clone(),
            field: alg.field().to_string(),
            basis: (0..d)
                .map(|i| BasisEntry {
                    label: label(i),
                    parity: alg.parity(i).bit(),
                })
                .collect(),
            unit: label(alg.unit_index()),
            mul,
            coproduct: (0..d)
                .map(|i| (label(i), tensor_terms(alg, h.coproduct().image(i))))
                .collect(),
            counit: (0..d)
                .map(|i| (label(i), h.eps(&alg.basis(i)).to_string()))
                .collect(),
            antipode: (0..d)
                .map(|i| (label(i), element_terms(alg, &h.s(&alg.basis(i)))))
                .collect(),
            phi: tensor_terms(alg, h.phi()),
            phi_inv: Some(tensor_terms(alg, h.phi_inv())),
            alpha: element_terms(alg, h.alpha()),
            beta: element_terms(alg, h.beta()),
            r: h.r().map(|r| tensor_terms(alg, r)),
            r_inv: h.r_inv().map(|r| tensor_terms(alg, r)),
            twistors: entry
                .twistors
                .iter()
                .map(|t| TwistorEntry {
                    name: t.name().to_string(),
                    f: tensor_terms(alg, t.f()),
                    f_inv: Some(tensor_terms(alg, t.f_inv())),
                })
                .collect(),
            representations: entry
                .representations
                .iter()
                .map(|r| RepresentationEntry {
                    name: r.name().to_string(),
                    parities: r.parities().iter().map(|p| p.bit()).collect(),
                    matrices: (0..d)
                        .map(|i| {
                            let m = &r.matrices()[i];
                            let rows = (0..m.rows())
                                .map(|row| m.row(row).iter().map(Scalar::to_string).collect())
                                .collect();
                            (label(i), rows)
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FileError> {
        serde_json::from_str(text).map_err(|e| FileError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn read(path: &std::path::Path) -> Result<Self, FileError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Parse scalars, validate the algebra and build the structure with its
    /// twistors and representations. Axioms are not checked here.
    pub fn to_entry(&self) -> Result<CatalogEntry, FileError> {
        let field: FieldDescriptor = self.field.parse().map_err(|_| FileError::Field(self.field.clone()))?;
        let mut parities = Vec::new();
        for b in &self.basis {
            parities.push(match b.parity {
                0 => Parity::Even,
                1 => Parity::Odd,
                p => return Err(FileError::Parity(p)),
            });
        }
        let labels: Vec<String> = self.basis.iter().map(|b| b.label.clone()).collect();
        let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let ctx = Ctx { field: &field, index: &index };
        let unit = ctx.idx(&self.unit, "unit")?;
        let mut table = Vec::new();
        for (n, p) in self.mul.iter().enumerate() {
            let context = format!("mul[{n}]");
            let i = ctx.idx(&p.left, &context)?;
            let j = ctx.idx(&p.right, &context)?;
            for (t, term) in p.terms.iter().enumerate() {
                let context = format!("mul[{n}].terms[{t}]");
                table.push((i, j, ctx.idx(&term.label, &context)?, ctx.scalar(&term.coeff, &context)?));
            }
        }
        let alg = Arc::new(Algebra::new(field.clone(), labels.clone(), parities, unit, table)?);
        let per_basis = |name: &str, rank: usize, table: &BTreeMap<String, Vec<TensorTerm>>| -> Result<LinearMap, FileError> {
            ctx.check_keys(table.keys(), name)?;
            let images = labels
                .iter()
                .map(|l| match table.get(l) {
                    Some(terms) => ctx.tensor(terms, rank, &format!("{name}[{l}]")),
                    None => Ok(Tensor::zero(rank)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LinearMap::new(&alg, rank, images)?)
        };
        let coproduct = per_basis("coproduct", 2, &self.coproduct)?;
        ctx.check_keys(self.counit.keys(), "counit")?;
        let counit_images = labels
            .iter()
            .map(|l| match self.counit.get(l) {
                Some(c) => Ok(Tensor::scalar(ctx.scalar(c, &format!("counit[{l}]"))?)),
                None => Ok(Tensor::zero(0)),
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        let counit = LinearMap::new(&alg, 0, counit_images)?;
        ctx.check_keys(self.antipode.keys(), "antipode")?;
        let antipode_images = labels
            .iter()
            .map(|l| match self.antipode.get(l) {
                Some(terms) => Ok(ctx.element(terms, &format!("antipode[{l}]"))?.to_tensor()),
                None => Ok(Tensor::zero(1)),
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        let antipode = LinearMap::new(&alg, 1, antipode_images)?;
        let opt = |t: &Option<Vec<TensorTerm>>, rank: usize, name: &str| {
            t.as_ref().map(|t| ctx.tensor(t, rank, name)).transpose()
        };
        let parts = Parts {
            algebra: alg.clone(),
            coproduct,
            counit,
            antipode,
            phi: ctx.tensor(&self.phi, 3, "phi")?,
            phi_inv: opt(&self.phi_inv, 3, "phi_inv")?,
            alpha: ctx.element(&self.alpha, "alpha")?,
            beta: ctx.element(&self.beta, "beta")?,
            r: opt(&self.r, 2, "r")?,
            r_inv: opt(&self.r_inv, 2, "r_inv")?,
        };
        let structure = QuasiHopf::new(parts)?;
        let twistors = self
            .twistors
            .iter()
            .map(|t| {
                let f = ctx.tensor(&t.f, 2, &format!("twistor {}", t.name))?;
                let f_inv = opt(&t.f_inv, 2, &format!("twistor {} inverse", t.name))?;
                Ok(Twistor::new(&structure, t.name.clone(), f, f_inv)?)
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        let representations = self
            .representations
            .iter()
            .map(|r| {
                let n = r.parities.len();
                let mut ps = Vec::new();
                for &p in &r.parities {
                    ps.push(match p {
                        0 => Parity::Even,
                        1 => Parity::Odd,
                        p => return Err(FileError::Parity(p)),
                    });
                }
                ctx.check_keys(r.matrices.keys(), &format!("representation {}", r.name))?;
                let mats = labels
                    .iter()
                    .map(|l| {
                        let context = format!("representation {}[{l}]", r.name);
                        let Some(rows) = r.matrices.get(l) else {
                            return Ok(Matrix::zeros(&field, n, n));
                        };
                        let mut out = Vec::new();
                        for row in rows {
                            if row.len() != n {
                                return Err(FileError::Legs {
                                    context: context.clone(),
                                    expected: n,
                                    found: row.len(),
                                });
                            }
                            out.push(row.iter().map(|s| ctx.scalar(s, &context)).collect::<Result<Vec<_>, _>>()?);
                        }
                        if out.len() != n {
                            return Err(FileError::Legs {
                                context,
                                expected: n,
                                found: out.len(),
                            });
                        }
                        Ok(Matrix::from_rows(&field, n, out))
                    })
                    .collect::<Result<Vec<_>, FileError>>()?;
                Ok(Representation::new(&alg, r.name.clone(), ps, mats)?)
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        Ok(CatalogEntry {
            name: self.name.clone(),
            notes: self.notes.clone(),
            structure,
            twistors,
            representations,
        })
    }
}

struct Ctx<'a> {
    field: &'a FieldDescriptor,
    index: &'a BTreeMap<&'a str, usize>,
}

impl Ctx<'_> {
    fn idx(&self, label: &str, context: &str) -> Result<usize, FileError> {
        self.index.get(label).copied().ok_or_else(|| FileError::Label {
            label: label.to_string(),
            context: context.to_string(),
        })
    }

    fn check_keys<'k>(&self, keys: impl Iterator<Item = &'k String>, context: &str) -> Result<(), FileError> {
        for k in keys {
            self.idx(k, context)?;
        }
        Ok(())
    }

    fn scalar(&self, text: &str, context: &str) -> Result<Scalar, FileError> {
        parse_scalar(text, self.field).map_err(|e| FileError::Scalar {
            context: context.to_string(),
            position: e.position,
            message: e.message,
        })
    }

    fn tensor(&self, terms: &[TensorTerm], rank: usize, context: &str) -> Result<Tensor, FileError> {
        let mut t = Tensor::zero(rank);
        for (n, term) in terms.iter().enumerate() {
            let context = format!("{context}[{n}]");
            if term.legs.len() != rank {
                return Err(FileError::Legs {
                    context,
                    expected: rank,
                    found: term.legs.len(),
                });
            }
            let key = term
                .legs
                .iter()
                .map(|l| self.idx(l, &context))
                .collect::<Result<Vec<_>, _>>()?;
            t.add_term(key, self.scalar(&term.coeff, &context)?);
        }
        Ok(t)
    }

    fn element(&self, terms: &[ElementTerm], context: &str) -> Result<Element, FileError> {
        let mut e = Element::zero();
        for (n, term) in terms.iter().enumerate() {
            let context = format!("{context}[{n}]");
            e.add_term(self.idx(&term.label, &context)?, self.scalar(&term.coeff, &context)?);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_builtin;

    #[test]
    fn round_trip_every_builtin() {
        for name in ["z2-group", "z2-cocycle", "sweedler-h4", "grassmann-theta", "sweedler-twisted"] {
            let entry = load_builtin(name).unwrap();
            let file = StructureFile::from_entry(&entry);
            let text = file.to_json();
            let back = StructureFile::from_json(&text).unwrap();
            assert_eq!(back, file);
            let rebuilt = back.to_entry().unwrap();
            assert_eq!(rebuilt.structure, entry.structure, "{name}");
            assert_eq!(StructureFile::from_entry(&rebuilt).to_json(), text);
        }
    }

    #[test]
    fn bad_scalar_reports_position() {
        let mut file = StructureFile::from_entry(&load_builtin("z2-group").unwrap());
        file.alpha[0].coeff = "1/+".into();
        match file.to_entry() {
            Err(FileError::Scalar { context, position, .. }) => {
                assert_eq!(context, "alpha[0]");
                assert!(position > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_has_line() {
        assert!(matches!(StructureFile::from_json("{\n  \"field\": }"), Err(FileError::Json { line: 2, .. })));
    }
}
