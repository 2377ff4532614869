//! Quasi-Hopf superalgebra structures and the axiom verifier.

use std::sync::Arc;

use thiserror::Error;

use crate::graded::{Algebra, Element, GradedBasis, GradedError, LinearMap, Parity, Tensor};
use crate::linalg::Matrix;
use crate::report::{Report, Witness};
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("{name} must have target rank {expected}, found {found}")]
    MapRank {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} must be parity-preserving")]
    OddMap(&'static str),
    #[error("{name} must have rank {expected}, found {found}")]
    TensorRank {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("no R-matrix")]
    NoRMatrix,
    #[error("the antipode is not invertible")]
    AntipodeNotInvertible,
    #[error("no canonical elements: the antipode constraints are inconsistent")]
    NoSolution,
}

/// Raw data of a structure, before validation.
#[derive(Clone, Debug)]
pub struct Parts {
    pub algebra: Arc<Algebra>,
    pub coproduct: LinearMap,
    pub counit: LinearMap,
    pub antipode: LinearMap,
    pub phi: Tensor,
    /// Solved from `phi` when absent.
    pub phi_inv: Option<Tensor>,
    pub alpha: Element,
    pub beta: Element,
    pub r: Option<Tensor>,
    /// Solved from `r` when absent.
    pub r_inv: Option<Tensor>,
}

/// A (possibly quasi-triangular) quasi-Hopf superalgebra.
///
/// Construction checks shapes and gradings of the structure maps only;
/// the axioms themselves are reported by the `verify_*` methods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiHopf {
    algebra: Arc<Algebra>,
    coproduct: LinearMap,
    counit: LinearMap,
    antipode: LinearMap,
    antipode_inv: Option<LinearMap>,
    phi: Tensor,
    phi_inv: Tensor,
    alpha: Element,
    beta: Element,
    r: Option<Tensor>,
    r_inv: Option<Tensor>,
}

/// Leg permutation from a label such as "312" (output slot s ← leg label[s]).
pub fn legs(label: &str) -> Vec<usize> {
    label
        .bytes()
        .map(|b| (b - b'1') as usize)
        .collect()
}

fn diff_witness(alg: &Algebra, at: Option<String>, lhs: &Tensor, rhs: &Tensor) -> Result<(), Witness> {
    let d = lhs.sub(rhs);
    if d.is_zero() {
        Ok(())
    } else {
        Err(Witness::new(at, alg.render_tensor(&d)))
    }
}

fn elem_witness(alg: &Algebra, at: Option<String>, lhs: &Element, rhs: &Element) -> Result<(), Witness> {
    let d = lhs.sub(rhs);
    if d.is_zero() {
        Ok(())
    } else {
        Err(Witness::new(at, alg.render_element(&d)))
    }
}

impl QuasiHopf {
    pub fn new(parts: Parts) -> Result<Self, StructureError> {
        let Parts {
            algebra,
            coproduct,
            counit,
            antipode,
            phi,
            phi_inv,
            alpha,
            beta,
            r,
            r_inv,
        } = parts;
        for (name, map, rank) in [
            ("coproduct", &coproduct, 2),
            ("counit", &counit, 0),
            ("antipode", &antipode, 1),
        ] {
            if map.target_rank() != rank {
                return Err(StructureError::MapRank {
                    name,
                    expected: rank,
                    found: map.target_rank(),
                });
            }
            if !map.is_parity_preserving() {
                return Err(StructureError::OddMap(name));
            }
        }
        if phi.rank() != 3 {
            return Err(StructureError::TensorRank {
                name: "phi",
                expected: 3,
                found: phi.rank(),
            });
        }
        let phi_inv = match phi_inv {
            Some(t) if t.rank() != 3 => {
                return Err(StructureError::TensorRank {
                    name: "phi_inv",
                    expected: 3,
                    found: t.rank(),
                })
            }
            Some(t) => t,
            None => algebra
                .tensor_inverse(&phi)
                .ok_or(StructureError::NotInvertible("phi"))?,
        };
        let (r, r_inv) = match r {
            None => (None, None),
            Some(r) => {
                if r.rank() != 2 {
                    return Err(StructureError::TensorRank {
                        name: "r",
                        expected: 2,
                        found: r.rank(),
                    });
                }
                let inv = match r_inv {
                    Some(t) if t.rank() != 2 => {
                        return Err(StructureError::TensorRank {
                            name: "r_inv",
                            expected: 2,
                            found: t.rank(),
                        })
                    }
                    Some(t) => t,
                    None => algebra
                        .tensor_inverse(&r)
                        .ok_or(StructureError::NotInvertible("r"))?,
                };
                (Some(r), Some(inv))
            }
        };
        let antipode_inv = antipode
            .to_matrix(&algebra)
            .inverse()
            .map(|m| LinearMap::from_matrix(&algebra, &m));
        Ok(Self {
            algebra,
            coproduct,
            counit,
            antipode,
            antipode_inv,
            phi,
            phi_inv,
            alpha,
            beta,
            r,
            r_inv,
        })
    }

    pub fn into_parts(self) -> Parts {
        Parts {
            algebra: self.algebra,
            coproduct: self.coproduct,
            counit: self.counit,
            antipode: self.antipode,
            phi: self.phi,
            phi_inv: Some(self.phi_inv),
            alpha: self.alpha,
            beta: self.beta,
            r: self.r,
            r_inv: self.r_inv,
        }
    }

    pub fn to_parts(&self) -> Parts {
        self.clone().into_parts()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coproduct(&self) -> &LinearMap {
        &self.coproduct
    }

    pub fn counit(&self) -> &LinearMap {
        &self.counit
    }

    pub fn antipode(&self) -> &LinearMap {
        &self.antipode
    }

    pub fn antipode_inv(&self) -> Option<&LinearMap> {
        self.antipode_inv.as_ref()
    }

    pub fn phi(&self) -> &Tensor {
        &self.phi
    }

    pub fn phi_inv(&self) -> &Tensor {
        &self.phi_inv
    }

    pub fn alpha(&self) -> &Element {
        &self.alpha
    }

    pub fn beta(&self) -> &Element {
        &self.beta
    }

    pub fn r(&self) -> Option<&Tensor> {
        self.r.as_ref()
    }

    pub fn r_inv(&self) -> Option<&Tensor> {
        self.r_inv.as_ref()
    }

    pub fn r_pair(&self) -> Result<(&Tensor, &Tensor), StructureError> {
        match (&self.r, &self.r_inv) {
            (Some(r), Some(ri)) => Ok((r, ri)),
            _ => Err(StructureError::NoRMatrix),
        }
    }

    pub fn is_quasitriangular(&self) -> bool {
        self.r.is_some()
    }

    /// Whether Φ = 1⊗1⊗1.
    pub fn has_trivial_phi(&self) -> bool {
        self.phi == self.algebra.unit_tensor(3)
    }

    // -- elementwise helpers -------------------------------------------------

    pub fn delta(&self, a: &Element) -> Tensor {
        self.coproduct.apply(a)
    }

    pub fn eps(&self, a: &Element) -> Scalar {
        self.counit.apply(a).to_scalar(self.algebra.field())
    }

    pub fn s(&self, a: &Element) -> Element {
        self.antipode.apply_element(a)
    }

    pub fn s_inv(&self, a: &Element) -> Result<Element, StructureError> {
        self.antipode_inv
            .as_ref()
            .map(|m| m.apply_element(a))
            .ok_or(StructureError::AntipodeNotInvertible)
    }

    pub fn basis(&self, i: usize) -> Element {
        self.algebra.basis(i)
    }

    pub fn one(&self) -> Element {
        self.algebra.one()
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        self.algebra.mul(x, y)
    }

    pub fn tmul(&self, x: &Tensor, y: &Tensor) -> Tensor {
        self.algebra.tensor_mul(x, y).expect("equal ranks")
    }

    pub fn tmul_all(&self, factors: &[&Tensor]) -> Tensor {
        self.algebra.tensor_mul_all(factors).expect("equal ranks")
    }

    /// Leg-permuted copy, e.g. `permuted(phi, "312")`.
    pub fn permuted(&self, t: &Tensor, label: &str) -> Tensor {
        self.algebra.permute(t, &legs(label)).expect("valid leg label")
    }

    pub fn on_legs(&self, t: &Tensor, maps: &[(usize, &LinearMap)]) -> Tensor {
        self.algebra.apply_on_legs(t, maps).expect("even maps on valid legs")
    }

    pub fn embed(&self, t: &Tensor, rank: usize, slots: &[usize]) -> Tensor {
        self.algebra.embed(t, rank, slots).expect("valid slots")
    }

    pub fn field(&self) -> &crate::scalars::FieldDescriptor {
        self.algebra.field()
    }

    fn label(&self, i: usize) -> String {
        self.algebra.label(i).to_string()
    }

    /// `(1⊗Δ)Δ(a)`.
    pub fn delta_right(&self, a: &Element) -> Tensor {
        self.on_legs(&self.delta(a), &[(1, &self.coproduct)])
    }

    /// `(Δ⊗1)Δ(a)`.
    pub fn delta_left(&self, a: &Element) -> Tensor {
        self.on_legs(&self.delta(a), &[(0, &self.coproduct)])
    }

    /// `Δᵀ(a)`.
    pub fn delta_op(&self, a: &Element) -> Tensor {
        self.algebra.transpose(&self.delta(a))
    }

    // -- verification ---------------------------------------------------------

    pub fn verify_quasi_bialgebra(&self) -> Report {
        let alg = &*self.algebra;
        let d = alg.dim();
        let mut rep = Report::new("quasi-bialgebra axioms");
        let one3 = alg.unit_tensor(3);

        rep.run("coproduct-homomorphism", "Δ(ab) = Δ(a)Δ(b)", || {
            for i in 0..d {
                for j in 0..d {
                    let lhs = self.coproduct.apply(alg.product(i, j));
                    let rhs = self.tmul(self.coproduct.image(i), self.coproduct.image(j));
                    diff_witness(alg, Some(format!("({}, {})", alg.label(i), alg.label(j))), &lhs, &rhs)?;
                }
            }
            Ok(())
        });
        rep.run("counit-homomorphism", "ε(ab) = ε(a)ε(b), ε(1) = 1", || {
            let f = alg.field();
            if !self.eps(&alg.one()).is_one() {
                return Err(Witness::at(alg.label(alg.unit_index()), format!("ε(1) = {}", self.eps(&alg.one()))));
            }
            for i in 0..d {
                for j in 0..d {
                    let lhs = self.eps(alg.product(i, j));
                    let rhs = &self.eps(&alg.basis(i)) * &self.eps(&alg.basis(j));
                    let diff = &lhs - &rhs;
                    if !diff.is_zero() {
                        return Err(Witness::at(format!("({}, {})", alg.label(i), alg.label(j)), diff.to_string()));
                    }
                }
            }
            let _ = f;
            Ok(())
        });
        rep.run("phi-even", "Φ is even", || {
            even_witness(alg, &self.phi).and(even_witness(alg, &self.phi_inv))
        });
        rep.run("phi-invertible", "Φ·Φ⁻¹ = 1⊗1⊗1 = Φ⁻¹·Φ", || {
            diff_witness(alg, Some("Φ·Φ⁻¹".into()), &self.tmul(&self.phi, &self.phi_inv), &one3)?;
            diff_witness(alg, Some("Φ⁻¹·Φ".into()), &self.tmul(&self.phi_inv, &self.phi), &one3)
        });
        rep.run(
            "quasi-coassociativity",
            "(1⊗Δ)Δ(a) = Φ⁻¹(Δ⊗1)Δ(a)Φ",
            || {
                for i in 0..d {
                    let a = alg.basis(i);
                    let lhs = self.delta_right(&a);
                    let rhs = self.tmul_all(&[&self.phi_inv, &self.delta_left(&a), &self.phi]);
                    diff_witness(alg, Some(self.label(i)), &lhs, &rhs)?;
                }
                Ok(())
            },
        );
        rep.run(
            "pentagon",
            "(Δ⊗1⊗1)Φ·(1⊗1⊗Δ)Φ = (Φ⊗1)·(1⊗Δ⊗1)Φ·(1⊗Φ)",
            || {
                let lhs = self.tmul(
                    &self.on_legs(&self.phi, &[(0, &self.coproduct)]),
                    &self.on_legs(&self.phi, &[(2, &self.coproduct)]),
                );
                let rhs = self.tmul_all(&[
                    &self.embed(&self.phi, 4, &[0, 1, 2]),
                    &self.on_legs(&self.phi, &[(1, &self.coproduct)]),
                    &self.embed(&self.phi, 4, &[1, 2, 3]),
                ]);
                diff_witness(alg, None, &lhs, &rhs)
            },
        );
        rep.run("coproduct-counit", "(ε⊗1)Δ(a) = a = (1⊗ε)Δ(a)", || {
            for i in 0..d {
                let a = alg.basis(i);
                let left = self.on_legs(&self.delta(&a), &[(0, &self.counit)]);
                let right = self.on_legs(&self.delta(&a), &[(1, &self.counit)]);
                diff_witness(alg, Some(format!("{} (ε⊗1)", self.label(i))), &left, &a.to_tensor())?;
                diff_witness(alg, Some(format!("{} (1⊗ε)", self.label(i))), &right, &a.to_tensor())?;
            }
            Ok(())
        });
        let one2 = alg.unit_tensor(2);
        rep.run("phi-counit-middle", "(1⊗ε⊗1)Φ = 1⊗1", || {
            diff_witness(alg, None, &self.on_legs(&self.phi, &[(1, &self.counit)]), &one2)
        });
        rep.run("phi-counit-outer", "(ε⊗1⊗1)Φ = 1⊗1 = (1⊗1⊗ε)Φ", || {
            diff_witness(alg, Some("ε⊗1⊗1".into()), &self.on_legs(&self.phi, &[(0, &self.counit)]), &one2)?;
            diff_witness(alg, Some("1⊗1⊗ε".into()), &self.on_legs(&self.phi, &[(2, &self.counit)]), &one2)
        });
        rep
    }

    pub fn verify_antipode_axioms(&self) -> Report {
        let alg = &*self.algebra;
        let d = alg.dim();
        let mut rep = Report::new("antipode axioms");
        rep.run("antipode-antihomomorphism", "S(ab) = (-1)^[a][b] S(b)S(a)", || {
            check_antihomomorphism(alg, &self.antipode)
        });
        rep.run("antipode-unit", "S(1) = 1", || {
            elem_witness(alg, None, &self.s(&alg.one()), &alg.one())
        });
        rep.run("antipode-alpha", "Σ S(a₁)αa₂ = ε(a)α", || {
            for i in 0..d {
                let a = alg.basis(i);
                let lhs = self.alpha_contraction(&a, &self.alpha);
                let rhs = self.alpha.scale(&self.eps(&a));
                elem_witness(alg, Some(self.label(i)), &lhs, &rhs)?;
            }
            Ok(())
        });
        rep.run("antipode-beta", "Σ a₁βS(a₂) = ε(a)β", || {
            for i in 0..d {
                let a = alg.basis(i);
                let lhs = self.beta_contraction(&a, &self.beta);
                let rhs = self.beta.scale(&self.eps(&a));
                elem_witness(alg, Some(self.label(i)), &lhs, &rhs)?;
            }
            Ok(())
        });
        rep.run("phi-inverse-beta-alpha", "Σ X̄βS(Ȳ)αZ̄ = 1", || {
            elem_witness(alg, None, &self.phi_inv_beta_alpha(&self.beta, &self.alpha), &alg.one())
        });
        rep.run("phi-alpha-beta", "Σ S(X)αYβS(Z) = 1", || {
            elem_witness(alg, None, &self.phi_alpha_beta(&self.alpha, &self.beta), &alg.one())
        });
        rep.run("alpha-beta-even", "α and β are even", || {
            for (name, x) in [("α", &self.alpha), ("β", &self.beta)] {
                let (_, odd) = alg.split(x);
                if !odd.is_zero() {
                    return Err(Witness::at(name, alg.render_element(&odd)));
                }
            }
            Ok(())
        });
        rep.run("counit-alpha-beta", "ε(α)ε(β) = 1", || {
            let v = &self.eps(&self.alpha) * &self.eps(&self.beta);
            if v.is_one() {
                Ok(())
            } else {
                Err(Witness::global(format!("ε(α)ε(β) - 1 = {}", &v - &Scalar::one(alg.field()))))
            }
        });
        rep.run("counit-antipode", "ε(S(a)) = ε(a)", || {
            for i in 0..d {
                let a = alg.basis(i);
                let diff = &self.eps(&self.s(&a)) - &self.eps(&a);
                if !diff.is_zero() {
                    return Err(Witness::at(self.label(i), diff.to_string()));
                }
            }
            Ok(())
        });
        rep
    }

    /// `Σ S(a₁) x a₂`.
    pub fn alpha_contraction(&self, a: &Element, x: &Element) -> Element {
        let lx = self.algebra.left_mul_map(x);
        self.algebra
            .collapse(&self.on_legs(&self.delta(a), &[(0, &self.antipode), (1, &lx)]))
    }

    /// `Σ a₁ x S(a₂)`.
    pub fn beta_contraction(&self, a: &Element, x: &Element) -> Element {
        let lx_s = self.algebra.left_mul_map(x).compose(&self.algebra, &self.antipode);
        self.algebra.collapse(&self.on_legs(&self.delta(a), &[(1, &lx_s)]))
    }

    /// `Σ X̄ b S(Ȳ) a Z̄`.
    pub fn phi_inv_beta_alpha(&self, b: &Element, a: &Element) -> Element {
        let alg = &*self.algebra;
        let lb_s = alg.left_mul_map(b).compose(alg, &self.antipode);
        let la = alg.left_mul_map(a);
        alg.collapse(&self.on_legs(&self.phi_inv, &[(1, &lb_s), (2, &la)]))
    }

    /// `Σ S(X) a Y b S(Z)`.
    pub fn phi_alpha_beta(&self, a: &Element, b: &Element) -> Element {
        let alg = &*self.algebra;
        let la = alg.left_mul_map(a);
        let lb_s = alg.left_mul_map(b).compose(alg, &self.antipode);
        alg.collapse(&self.on_legs(&self.phi, &[(0, &self.antipode), (1, &la), (2, &lb_s)]))
    }

    pub fn verify_quasitriangular(&self) -> Report {
        let alg = &*self.algebra;
        let d = alg.dim();
        let mut rep = Report::new("quasi-triangularity");
        let Ok((r, r_inv)) = self.r_pair() else {
            rep.record("r-present", "R-matrix present", Err(Witness::global("no R-matrix")));
            return rep;
        };
        rep.run("r-even", "R is even", || even_witness(alg, r).and(even_witness(alg, r_inv)));
        rep.run("r-invertible", "R·R⁻¹ = 1⊗1 = R⁻¹·R", || {
            let one2 = alg.unit_tensor(2);
            diff_witness(alg, Some("R·R⁻¹".into()), &self.tmul(r, r_inv), &one2)?;
            diff_witness(alg, Some("R⁻¹·R".into()), &self.tmul(r_inv, r), &one2)
        });
        rep.run("r-intertwines", "Δᵀ(a)R = RΔ(a)", || {
            for i in 0..d {
                let a = alg.basis(i);
                let lhs = self.tmul(&self.delta_op(&a), r);
                let rhs = self.tmul(r, &self.delta(&a));
                diff_witness(alg, Some(self.label(i)), &lhs, &rhs)?;
            }
            Ok(())
        });
        rep.run(
            "hexagon-left",
            "(Δ⊗1)R = Φ⁻¹₂₃₁R₁₃Φ₁₃₂R₂₃Φ⁻¹₁₂₃",
            || {
                let lhs = self.on_legs(r, &[(0, &self.coproduct)]);
                diff_witness(alg, None, &lhs, &self.hexagon_left_rhs())
            },
        );
        rep.run(
            "hexagon-right",
            "(1⊗Δ)R = Φ₃₁₂R₁₃Φ⁻¹₂₁₃R₁₂Φ₁₂₃",
            || {
                let lhs = self.on_legs(r, &[(1, &self.coproduct)]);
                diff_witness(alg, None, &lhs, &self.hexagon_right_rhs())
            },
        );
        rep.run("r-counit", "(ε⊗1)R = 1 = (1⊗ε)R", || {
            let one = alg.one().to_tensor();
            diff_witness(alg, Some("ε⊗1".into()), &self.on_legs(r, &[(0, &self.counit)]), &one)?;
            diff_witness(alg, Some("1⊗ε".into()), &self.on_legs(r, &[(1, &self.counit)]), &one)
        });
        rep
    }

    fn r_legs(&self, slots: [usize; 2]) -> Tensor {
        self.embed(self.r.as_ref().expect("R present"), 3, &slots)
    }

    fn hexagon_left_rhs(&self) -> Tensor {
        self.tmul_all(&[
            &self.permuted(&self.phi_inv, "231"),
            &self.r_legs([0, 2]),
            &self.permuted(&self.phi, "132"),
            &self.r_legs([1, 2]),
            &self.phi_inv,
        ])
    }

    fn hexagon_right_rhs(&self) -> Tensor {
        self.tmul_all(&[
            &self.permuted(&self.phi, "312"),
            &self.r_legs([0, 2]),
            &self.permuted(&self.phi_inv, "213"),
            &self.r_legs([0, 1]),
            &self.phi,
        ])
    }

    pub fn verify_quasi_ybe(&self) -> Report {
        let alg = &*self.algebra;
        let mut rep = Report::new("quasi-Yang-Baxter equation");
        if self.r.is_none() {
            rep.record("r-present", "R-matrix present", Err(Witness::global("no R-matrix")));
            return rep;
        }
        rep.run(
            "quasi-ybe",
            "R₁₂Φ⁻¹₂₃₁R₁₃Φ₁₃₂R₂₃Φ⁻¹₁₂₃ = Φ⁻¹₃₂₁R₂₃Φ₃₁₂R₁₃Φ⁻¹₂₁₃R₁₂",
            || {
                let lhs = self.tmul_all(&[
                    &self.r_legs([0, 1]),
                    &self.permuted(&self.phi_inv, "231"),
                    &self.r_legs([0, 2]),
                    &self.permuted(&self.phi, "132"),
                    &self.r_legs([1, 2]),
                    &self.phi_inv,
                ]);
                let rhs = self.tmul_all(&[
                    &self.permuted(&self.phi_inv, "321"),
                    &self.r_legs([1, 2]),
                    &self.permuted(&self.phi, "312"),
                    &self.r_legs([0, 2]),
                    &self.permuted(&self.phi_inv, "213"),
                    &self.r_legs([0, 1]),
                ]);
                diff_witness(alg, None, &lhs, &rhs)
            },
        );
        rep
    }

    /// Full report in the fixed order bialgebra → antipode → R → qYBE.
    pub fn verify_all(&self) -> Report {
        let mut rep = Report::new("structure");
        rep.extend(self.verify_quasi_bialgebra());
        rep.extend(self.verify_antipode_axioms());
        if self.is_quasitriangular() {
            rep.extend(self.verify_quasitriangular());
            rep.extend(self.verify_quasi_ybe());
        }
        rep
    }

    /// Admissible (α, β) pairs for the fixed (Δ, ε, S, Φ).
    ///
    /// The four antipode axioms are linear in α and in β separately but
    /// bilinear jointly, so the solution set is searched along candidate
    /// values of one element (unit first, then the basis of its linear
    /// solution space) with the other solved linearly. Every returned pair
    /// passes `verify_antipode_axioms`.
    pub fn solve_canonical_elements(&self) -> Result<Vec<(Element, Element)>, StructureError> {
        let alg = &*self.algebra;
        let d = alg.dim();
        let field = alg.field();
        let v_alpha = self.linear_solution_space(|x| {
            (0..d)
                .map(|i| {
                    let a = alg.basis(i);
                    self.alpha_contraction(&a, x).sub(&x.scale(&self.eps(&a)))
                })
                .collect()
        });
        let v_beta = self.linear_solution_space(|x| {
            (0..d)
                .map(|i| {
                    let a = alg.basis(i);
                    self.beta_contraction(&a, x).sub(&x.scale(&self.eps(&a)))
                })
                .collect()
        });
        let candidates = |space: &[Element]| {
            let mut c = vec![alg.one()];
            c.extend(space.iter().cloned());
            c
        };
        let mut pairs: Vec<(Element, Element)> = Vec::new();
        let push = |pairs: &mut Vec<(Element, Element)>, a: Element, b: Element| {
            if !pairs.iter().any(|(x, y)| *x == a && *y == b) {
                pairs.push((a, b));
            }
        };
        for alpha in candidates(&v_alpha) {
            let alpha = alg.split(&alpha).0;
            let rows = |b: &Element| -> Vec<Element> {
                let mut r: Vec<Element> = (0..d)
                    .map(|i| {
                        let a = alg.basis(i);
                        self.beta_contraction(&a, b).sub(&b.scale(&self.eps(&a)))
                    })
                    .collect();
                r.push(self.phi_inv_beta_alpha(b, &alpha));
                r.push(self.phi_alpha_beta(&alpha, b));
                r
            };
            let mut rhs = vec![Element::zero(); d];
            rhs.push(alg.one());
            rhs.push(alg.one());
            if let Some(beta) = self.affine_solve(rows, &rhs) {
                let beta = alg.split(&beta).0;
                if self.canonical_pair_ok(&alpha, &beta) {
                    push(&mut pairs, alpha.clone(), beta);
                }
            }
        }
        for beta in candidates(&v_beta) {
            let beta = alg.split(&beta).0;
            let rows = |x: &Element| -> Vec<Element> {
                let mut r: Vec<Element> = (0..d)
                    .map(|i| {
                        let a = alg.basis(i);
                        self.alpha_contraction(&a, x).sub(&x.scale(&self.eps(&a)))
                    })
                    .collect();
                r.push(self.phi_inv_beta_alpha(&beta, x));
                r.push(self.phi_alpha_beta(x, &beta));
                r
            };
            let mut rhs = vec![Element::zero(); d];
            rhs.push(alg.one());
            rhs.push(alg.one());
            if let Some(alpha) = self.affine_solve(rows, &rhs) {
                let alpha = alg.split(&alpha).0;
                if self.canonical_pair_ok(&alpha, &beta) {
                    push(&mut pairs, alpha, beta.clone());
                }
            }
        }
        let _ = field;
        if pairs.is_empty() {
            Err(StructureError::NoSolution)
        } else {
            Ok(pairs)
        }
    }

    fn canonical_pair_ok(&self, alpha: &Element, beta: &Element) -> bool {
        let mut parts = self.to_parts();
        parts.alpha = alpha.clone();
        parts.beta = beta.clone();
        QuasiHopf::new(parts)
            .map(|h| h.verify_antipode_axioms().passed())
            .unwrap_or(false)
    }

    /// Null space of a linear operator A → A^k given by its action.
    fn linear_solution_space(&self, op: impl Fn(&Element) -> Vec<Element>) -> Vec<Element> {
        let alg = &*self.algebra;
        let m = operator_matrix(alg, &op);
        m.null_space().iter().map(|v| alg.from_vector(v)).collect()
    }

    fn affine_solve(&self, op: impl Fn(&Element) -> Vec<Element>, rhs: &[Element]) -> Option<Element> {
        let alg = &*self.algebra;
        let m = operator_matrix(alg, &op);
        let b: Vec<Scalar> = rhs.iter().flat_map(|e| alg.to_vector(e)).collect();
        m.solve(&b).map(|(x, _)| alg.from_vector(&x))
    }
}

/// Matrix of a linear operator A → A^k (blocks stacked) in the basis.
pub(crate) fn operator_matrix(alg: &Algebra, op: &dyn Fn(&Element) -> Vec<Element>) -> Matrix {
    let d = alg.dim();
    let cols: Vec<Vec<Element>> = (0..d).map(|k| op(&alg.basis(k))).collect();
    let blocks = cols.first().map_or(0, Vec::len);
    let mut m = Matrix::zeros(alg.field(), blocks * d, d);
    for (k, col) in cols.iter().enumerate() {
        for (b, e) in col.iter().enumerate() {
            for (i, c) in e.terms() {
                m.set(b * d + i, k, c.clone());
            }
        }
    }
    m
}

fn even_witness(alg: &Algebra, t: &Tensor) -> Result<(), Witness> {
    let odd: Tensor = Tensor::from_terms(
        t.rank(),
        t.terms()
            .filter(|(k, _)| alg.tensor_parity(k) == Parity::Odd)
            .map(|(k, c)| (k.to_vec(), c.clone())),
    );
    if odd.is_zero() {
        Ok(())
    } else {
        Err(Witness::global(format!("odd part {}", alg.render_tensor(&odd))))
    }
}

/// Graded anti-homomorphism rule `S(ab) = (-1)^{[a][b]} S(b)S(a)` on all
/// basis pairs.
pub fn check_antihomomorphism(alg: &Algebra, s: &LinearMap) -> Result<(), Witness> {
    let d = alg.dim();
    for i in 0..d {
        for j in 0..d {
            let lhs = s.apply_element(alg.product(i, j));
            let sign_odd = alg.parity(i).both_odd(alg.parity(j));
            let rhs = alg.mul(&s.image(j).to_element(), &s.image(i).to_element());
            let rhs = if sign_odd { rhs.neg() } else { rhs };
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                return Err(Witness::at(
                    format!("({}, {})", alg.label(i), alg.label(j)),
                    alg.render_element(&diff),
                ));
            }
        }
    }
    Ok(())
}
