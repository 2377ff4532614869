//! Even graded representations and the supertrace.

use thiserror::Error;

use crate::graded::{accumulate, Algebra, Element, GradedBasis, MatrixUnits, Parity, Tensor};
use crate::linalg::Matrix;
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("representation {name:?}: expected {expected} matrices, found {found}")]
    Count {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("representation {name:?}: matrix for {label} is not {size}×{size}")]
    Shape { name: String, label: String, size: usize },
    #[error("representation {name:?} is not a homomorphism at ({left}, {right})")]
    NotHomomorphism {
        name: String,
        left: String,
        right: String,
    },
    #[error("representation {name:?}: unit does not act as the identity")]
    Unit { name: String },
    #[error("representation {name:?}: {label} violates the grading at entry ({row}, {col})")]
    Grading {
        name: String,
        label: String,
        row: usize,
        col: usize,
    },
    #[error("leg {leg} out of range for rank {rank}")]
    Leg { leg: usize, rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    name: String,
    parities: Vec<Parity>,
    matrices: Vec<Matrix>,
    units: MatrixUnits,
}

impl Representation {
    pub fn new(
        alg: &Algebra,
        name: impl Into<String>,
        parities: Vec<Parity>,
        matrices: Vec<Matrix>,
    ) -> Result<Self, RepresentationError> {
        let name = name.into();
        let d = alg.dim();
        let n = parities.len();
        if matrices.len() != d {
            return Err(RepresentationError::Count {
                name,
                expected: d,
                found: matrices.len(),
            });
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(RepresentationError::Shape {
                    name,
                    label: alg.label(i).into(),
                    size: n,
                });
            }
            for r in 0..n {
                for c in 0..n {
                    if !m.get(r, c).is_zero() && parities[r] != parities[c] + alg.parity(i) {
                        return Err(RepresentationError::Grading {
                            name,
                            label: alg.label(i).into(),
                            row: r,
                            col: c,
                        });
                    }
                }
            }
        }
        if matrices[alg.unit_index()] != Matrix::identity(alg.field(), n) {
            return Err(RepresentationError::Unit { name });
        }
        let rep = Self {
            units: MatrixUnits::new(alg.field(), parities.clone()),
            name,
            parities,
            matrices,
        };
        for i in 0..d {
            for j in 0..d {
                if rep.matrices[i].mul(&rep.matrices[j]) != rep.apply(alg.product(i, j)) {
                    return Err(RepresentationError::NotHomomorphism {
                        name: rep.name,
                        left: alg.label(i).into(),
                        right: alg.label(j).into(),
                    });
                }
            }
        }
        Ok(rep)
    }

    /// Left multiplication on the algebra itself.
    pub fn regular(alg: &Algebra) -> Self {
        let matrices = (0..alg.dim())
            .map(|i| alg.left_mul_map(&alg.basis(i)).to_matrix(alg))
            .collect();
        Self::new(alg, "regular", alg.parities().to_vec(), matrices).expect("regular representation")
    }

    /// One-dimensional even representation given by a character (e.g. ε).
    pub fn character(
        alg: &Algebra,
        name: impl Into<String>,
        values: Vec<Scalar>,
    ) -> Result<Self, RepresentationError> {
        let field = alg.field();
        let matrices = values
            .into_iter()
            .map(|v| Matrix::from_rows(field, 1, vec![vec![v]]))
            .collect();
        Self::new(alg, name, vec![Parity::Even], matrices)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn units(&self) -> &MatrixUnits {
        &self.units
    }

    pub fn apply(&self, x: &Element) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(self.units.field(), n, n);
        for (i, c) in x.terms() {
            out = out.add(&self.matrices[i].scale(c));
        }
        out
    }

    /// `Σ (-1)^{[vᵢ]} Mᵢᵢ`.
    pub fn supertrace(&self, m: &Matrix) -> Scalar {
        let mut s = Scalar::zero(self.units.field());
        for (i, p) in self.parities.iter().enumerate() {
            s = &s + &m.get(i, i).clone().signed(p.is_odd());
        }
        s
    }

    /// Supertrace of a matrix-unit element.
    pub fn supertrace_units(&self, e: &Element) -> Scalar {
        self.supertrace(&self.units.to_matrix(e))
    }

    /// Replace leg `leg` of `x` by its image in End V (matrix-unit indices).
    /// π is even, so no signs arise.
    pub fn apply_on_leg(&self, x: &Tensor, leg: usize) -> Result<Tensor, RepresentationError> {
        if leg >= x.rank() {
            return Err(RepresentationError::Leg { leg, rank: x.rank() });
        }
        let images: Vec<Element> = self.matrices.iter().map(|m| self.units.from_matrix(m)).collect();
        let mut out = std::collections::BTreeMap::new();
        for (key, c) in x.terms() {
            for (u, v) in images[key[leg]].terms() {
                let mut k = key.to_vec();
                k[leg] = u;
                accumulate(&mut out, k, c * v);
            }
        }
        Ok(Tensor::from_terms(x.rank(), out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldDescriptor;

    fn z2() -> Algebra {
        let f = FieldDescriptor::Rationals;
        let one = Scalar::one(&f);
        Algebra::new(
            f,
            vec!["1".into(), "g".into()],
            vec![Parity::Even; 2],
            0,
            [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone()), (1, 1, 0, one)],
        )
        .unwrap()
    }

    fn grassmann() -> Algebra {
        let f = FieldDescriptor::Rationals;
        let one = Scalar::one(&f);
        Algebra::new(
            f,
            vec!["1".into(), "θ".into()],
            vec![Parity::Even, Parity::Odd],
            0,
            [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one)],
        )
        .unwrap()
    }

    #[test]
    fn regular_supertraces() {
        let a = z2();
        let r = Representation::regular(&a);
        assert!(r.supertrace(&r.apply(&a.basis(1))).is_zero());
        assert_eq!(r.supertrace(&r.apply(&a.one())), a.scalar(2));
        let b = grassmann();
        let rb = Representation::regular(&b);
        assert!(rb.supertrace(&rb.apply(&b.one())).is_zero());
    }

    #[test]
    fn graded_cyclicity_on_super_regular() {
        let b = grassmann();
        let r = Representation::regular(&b);
        for i in 0..2 {
            for j in 0..2 {
                let ab = r.supertrace(&r.apply(&b.mul(&b.basis(i), &b.basis(j))));
                let ba = r.supertrace(&r.apply(&b.mul(&b.basis(j), &b.basis(i))));
                assert_eq!(ab, ba.signed(b.parity(i).both_odd(b.parity(j))));
            }
        }
    }

    #[test]
    fn rejects_corrupted_matrix() {
        let a = z2();
        let mut ms = Representation::regular(&a).matrices().to_vec();
        ms[1].set(0, 0, a.scalar(1));
        let err = Representation::new(&a, "bad", vec![Parity::Even; 2], ms).unwrap_err();
        assert!(matches!(err, RepresentationError::NotHomomorphism { .. }));
    }

    #[test]
    fn leg_application_matches_entries() {
        let a = z2();
        let r = Representation::regular(&a);
        let t = Tensor::from_elements(&[&a.one(), &a.basis(1)]);
        let m = r.apply_on_leg(&t, 1).unwrap();
        // π(g) swaps the two basis vectors
        assert_eq!(m.len(), 2);
        assert!(m.coeff(&[0, r.units().unit_index(0, 1)]).is_some());
        assert!(r.apply_on_leg(&t, 2).is_err());
    }
}
