//! Adjoint actions, invariants, invariant forms and module morphisms.

use thiserror::Error;

use crate::graded::{Algebra, Element, GradedBasis, Parity};
use crate::linalg::Matrix;
use crate::quasihopf::QuasiHopf;
use crate::report::Witness;
use crate::representations::Representation;
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("element is not even")]
    OddElement,
    #[error("map is not even")]
    OddMap,
    #[error("not invariant: {0}")]
    NotInvariant(String),
    #[error("dimension mismatch: expected {expected}×{cols}, found {found_rows}×{found_cols}")]
    Shape {
        expected: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
}

/// A subspace spanned by homogeneous elements, even and odd parts apart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSubspace {
    pub even: Vec<Element>,
    pub odd: Vec<Element>,
}

impl GradedSubspace {
    pub fn dim(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.even.iter().chain(&self.odd)
    }

    /// Whether `x` lies in the span (exact rank test).
    pub fn contains(&self, alg: &Algebra, x: &Element) -> bool {
        let spanning: Vec<&Element> = self.iter().collect();
        let rank_with = |extra: Option<&Element>| {
            let mut rows: Vec<Vec<Scalar>> = spanning.iter().map(|e| alg.to_vector(e)).collect();
            if let Some(e) = extra {
                rows.push(alg.to_vector(e));
            }
            if rows.is_empty() {
                return 0;
            }
            Matrix::from_rows(alg.field(), alg.dim(), rows).rank()
        };
        rank_with(None) == rank_with(Some(x))
    }
}

/// A linear form on the algebra, by its values on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub values: Vec<Scalar>,
}

impl LinearForm {
    pub fn eval(&self, x: &Element) -> Scalar {
        x.terms().fold(Scalar::zero(&self.values[0].field()), |acc, (i, c)| {
            &acc + &(c * &self.values[i])
        })
    }

    /// Vanishes on every odd basis element.
    pub fn is_even(&self, alg: &Algebra) -> bool {
        (0..alg.dim()).all(|i| !alg.parity(i).is_odd() || self.values[i].is_zero())
    }
}

/// `Ad a · b = Σ a₁ b S(a₂) (-1)^{[b][a₂]}`.
pub fn adjoint_action(h: &QuasiHopf, a: &Element, b: &Element) -> Element {
    let alg = h.algebra();
    let (even, odd) = alg.split(b);
    let mut out = Element::zero();
    for (part, odd_b) in [(even, false), (odd, true)] {
        if part.is_zero() {
            continue;
        }
        for (key, c) in h.delta(a).terms() {
            let sign = odd_b && alg.parity(key[1]).is_odd();
            let term = alg.mul_all(&[&alg.basis(key[0]), &part, &h.s(&alg.basis(key[1]))]);
            out = out.add(&term.scale(&c.clone().signed(sign)));
        }
    }
    out
}

/// `Ad̄ a · b = Σ S(a₁) b a₂ (-1)^{[b][a₁]}`.
pub fn anti_adjoint_action(h: &QuasiHopf, a: &Element, b: &Element) -> Element {
    let alg = h.algebra();
    let (even, odd) = alg.split(b);
    let mut out = Element::zero();
    for (part, odd_b) in [(even, false), (odd, true)] {
        if part.is_zero() {
            continue;
        }
        for (key, c) in h.delta(a).terms() {
            let sign = odd_b && alg.parity(key[0]).is_odd();
            let term = alg.mul_all(&[&h.s(&alg.basis(key[0])), &part, &alg.basis(key[1])]);
            out = out.add(&term.scale(&c.clone().signed(sign)));
        }
    }
    out
}

/// Solve `op(x) = 0` over elements of one parity, where `op` returns a
/// list of elements that must all vanish. Basis in echelon order.
fn homogeneous_kernel(
    alg: &Algebra,
    parity: Parity,
    op: &dyn Fn(&Element) -> Vec<Element>,
) -> Vec<Element> {
    let cols: Vec<usize> = (0..alg.dim()).filter(|&i| alg.parity(i) == parity).collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<Element>> = cols.iter().map(|&i| op(&alg.basis(i))).collect();
    let blocks = images[0].len();
    let d = alg.dim();
    let mut m = Matrix::zeros(alg.field(), blocks * d, cols.len());
    for (k, img) in images.iter().enumerate() {
        for (b, e) in img.iter().enumerate() {
            for (i, c) in e.terms() {
                m.set(b * d + i, k, c.clone());
            }
        }
    }
    m.null_space()
        .into_iter()
        .map(|v| Element::from_terms(cols.iter().zip(v).map(|(&i, c)| (i, c))))
        .collect()
}

fn graded_kernel(alg: &Algebra, op: &dyn Fn(&Element) -> Vec<Element>) -> GradedSubspace {
    GradedSubspace {
        even: homogeneous_kernel(alg, Parity::Even, op),
        odd: homogeneous_kernel(alg, Parity::Odd, op),
    }
}

/// All `c` with `Ad a · c = ε(a) c` for every `a`.
pub fn invariant_subspace(h: &QuasiHopf) -> GradedSubspace {
    let alg = h.algebra();
    graded_kernel(alg, &|x| {
        (0..alg.dim())
            .map(|i| {
                let a = alg.basis(i);
                adjoint_action(h, &a, x).sub(&x.scale(&h.eps(&a)))
            })
            .collect()
    })
}

/// All `c` with `Ad̄ a · c = ε(a) c` for every `a`.
pub fn pseudo_invariant_subspace(h: &QuasiHopf) -> GradedSubspace {
    let alg = h.algebra();
    graded_kernel(alg, &|x| {
        (0..alg.dim())
            .map(|i| {
                let a = alg.basis(i);
                anti_adjoint_action(h, &a, x).sub(&x.scale(&h.eps(&a)))
            })
            .collect()
    })
}

pub fn is_invariant(h: &QuasiHopf, c: &Element) -> Result<(), Witness> {
    let alg = h.algebra();
    for i in 0..alg.dim() {
        let a = alg.basis(i);
        let d = adjoint_action(h, &a, c).sub(&c.scale(&h.eps(&a)));
        if !d.is_zero() {
            return Err(Witness::at(alg.label(i), alg.render_element(&d)));
        }
    }
    Ok(())
}

pub fn is_pseudo_invariant(h: &QuasiHopf, c: &Element) -> Result<(), Witness> {
    let alg = h.algebra();
    for i in 0..alg.dim() {
        let a = alg.basis(i);
        let d = anti_adjoint_action(h, &a, c).sub(&c.scale(&h.eps(&a)));
        if !d.is_zero() {
            return Err(Witness::at(alg.label(i), alg.render_element(&d)));
        }
    }
    Ok(())
}

/// `x bᵢ = bᵢ x` for every basis element; the witness is the first
/// non-zero commutator.
pub fn is_central(alg: &Algebra, x: &Element) -> Result<(), Witness> {
    for i in 0..alg.dim() {
        let c = alg.commutator(x, &alg.basis(i));
        if !c.is_zero() {
            return Err(Witness::at(
                format!("[·, {}]", alg.label(i)),
                alg.render_element(&c),
            ));
        }
    }
    Ok(())
}

pub fn center(alg: &Algebra) -> GradedSubspace {
    graded_kernel(alg, &|x| {
        (0..alg.dim()).map(|i| alg.commutator(x, &alg.basis(i))).collect()
    })
}

fn forms_solving(alg: &Algebra, action: &dyn Fn(&Element, &Element) -> Element, eps: &dyn Fn(&Element) -> Scalar) -> Vec<LinearForm> {
    // unknowns ξ_k; rows: ξ(action(a, b)) − ε(a) ξ(b) = 0 for basis a, b
    let d = alg.dim();
    let mut rows = Vec::new();
    for i in 0..d {
        let a = alg.basis(i);
        let e = eps(&a);
        for j in 0..d {
            let mut row = alg.to_vector(&action(&a, &alg.basis(j)));
            row[j] = &row[j] - &e;
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..d)
            .map(|k| LinearForm {
                values: alg.to_vector(&alg.basis(k)),
            })
            .collect();
    }
    Matrix::from_rows(alg.field(), d, rows)
        .null_space()
        .into_iter()
        .map(|values| LinearForm { values })
        .collect()
}

/// Forms with `ξ(Ad a · b) = ε(a) ξ(b)`.
pub fn invariant_linear_forms(h: &QuasiHopf) -> Vec<LinearForm> {
    forms_solving(h.algebra(), &|a, b| adjoint_action(h, a, b), &|a| h.eps(a))
}

/// Forms with `ξ(Ad̄ a · b) = ε(a) ξ(b)`.
pub fn pseudo_invariant_linear_forms(h: &QuasiHopf) -> Vec<LinearForm> {
    forms_solving(h.algebra(), &|a, b| anti_adjoint_action(h, a, b), &|a| h.eps(a))
}

pub fn check_form(
    h: &QuasiHopf,
    xi: &LinearForm,
    action: fn(&QuasiHopf, &Element, &Element) -> Element,
) -> Result<(), Witness> {
    let alg = h.algebra();
    for i in 0..alg.dim() {
        let a = alg.basis(i);
        for j in 0..alg.dim() {
            let b = alg.basis(j);
            let d = &xi.eval(&action(h, &a, &b)) - &(&h.eps(&a) * &xi.eval(&b));
            if !d.is_zero() {
                return Err(Witness::at(format!("({}, {})", alg.label(i), alg.label(j)), d.to_string()));
            }
        }
    }
    Ok(())
}

/// Bilinear forms on `V × W` (matrices `B[v][w]`) with
/// `Σ (a₁v, a₂w)(-1)^{[v][a₂]} = ε(a)(v, w)`.
pub fn invariant_bilinear_forms(h: &QuasiHopf, v: &Representation, w: &Representation) -> Vec<Matrix> {
    let alg = h.algebra();
    let (n, m) = (v.dim(), w.dim());
    let field = alg.field();
    let unknown = |r: usize, c: usize| r * m + c;
    let mut rows = Vec::new();
    for i in 0..alg.dim() {
        let a = alg.basis(i);
        let e = h.eps(&a);
        let delta = h.delta(&a);
        for vi in 0..n {
            for wi in 0..m {
                let mut row = vec![Scalar::zero(field); n * m];
                for (key, c) in delta.terms() {
                    let sign = v.parities()[vi].both_odd(alg.parity(key[1]));
                    let pv = &v.matrices()[key[0]];
                    let pw = &w.matrices()[key[1]];
                    for r in 0..n {
                        let x = pv.get(r, vi);
                        if x.is_zero() {
                            continue;
                        }
                        for s in 0..m {
                            let y = pw.get(s, wi);
                            if y.is_zero() {
                                continue;
                            }
                            let k = unknown(r, s);
                            row[k] = &row[k] + &(&(c * x) * y).signed(sign);
                        }
                    }
                }
                let k = unknown(vi, wi);
                row[k] = &row[k] - &e;
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis: Vec<Vec<Scalar>> = if rows.is_empty() {
        (0..n * m)
            .map(|k| (0..n * m).map(|j| if j == k { Scalar::one(field) } else { Scalar::zero(field) }).collect())
            .collect()
    } else {
        Matrix::from_rows(field, n * m, rows).null_space()
    };
    basis
        .into_iter()
        .map(|vec| Matrix::from_rows(field, m, vec.chunks(m).map(<[Scalar]>::to_vec).collect()))
        .collect()
}

/// `(a·f) = Σ (-1)^{[f][a₂]} π_W(a₁) f π_V(S(a₂))` for homogeneous `f`.
pub fn hom_action(
    h: &QuasiHopf,
    a: &Element,
    f: &Matrix,
    f_odd: bool,
    v: &Representation,
    w: &Representation,
) -> Matrix {
    let alg = h.algebra();
    let mut out = Matrix::zeros(alg.field(), w.dim(), v.dim());
    for (key, c) in h.delta(a).terms() {
        let sign = f_odd && alg.parity(key[1]).is_odd();
        let term = w.matrices()[key[0]]
            .mul(f)
            .mul(&v.apply(&h.s(&alg.basis(key[1]))));
        out = out.add(&term.scale(&c.clone().signed(sign)));
    }
    out
}

fn map_parity_ok(f: &Matrix, v: &Representation, w: &Representation, parity: Parity) -> bool {
    (0..w.dim()).all(|r| {
        (0..v.dim()).all(|c| f.get(r, c).is_zero() || w.parities()[r] + v.parities()[c] == parity)
    })
}

/// Invariant elements of `ℓ(V, W)` of the given parity.
pub fn invariant_maps(h: &QuasiHopf, v: &Representation, w: &Representation, parity: Parity) -> Vec<Matrix> {
    let alg = h.algebra();
    let field = alg.field();
    let (n, m) = (v.dim(), w.dim());
    let slots: Vec<(usize, usize)> = (0..m)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| w.parities()[r] + v.parities()[c] == parity)
        .collect();
    if slots.is_empty() {
        return Vec::new();
    }
    let unit = |k: usize| {
        let mut e = Matrix::zeros(field, m, n);
        e.set(slots[k].0, slots[k].1, Scalar::one(field));
        e
    };
    // column k of the system: (a·E_k − ε(a)E_k) flattened over basis a
    let mut cols = Vec::new();
    for k in 0..slots.len() {
        let ek = unit(k);
        let mut col = Vec::new();
        for i in 0..alg.dim() {
            let a = alg.basis(i);
            let d = hom_action(h, &a, &ek, parity.is_odd(), v, w).sub(&ek.scale(&h.eps(&a)));
            for r in 0..m {
                col.extend_from_slice(d.row(r));
            }
        }
        cols.push(col);
    }
    let sys = Matrix::from_rows(field, cols[0].len(), cols).transpose();
    sys.null_space()
        .into_iter()
        .map(|x| {
            let mut f = Matrix::zeros(field, m, n);
            for (k, c) in x.into_iter().enumerate() {
                f.set(slots[k].0, slots[k].1, c);
            }
            f
        })
        .collect()
}

/// The module morphism `f̃(v) = Σ S(X)αY f(S(Z)v)` built from an even
/// invariant `f ∈ ℓ(V, W)`. Checks the precondition and, on return,
/// the Φ⁻¹ form, intertwining and `β f̃ = f` have all been verified.
pub fn module_morphism_from_invariant(
    h: &QuasiHopf,
    f: &Matrix,
    v: &Representation,
    w: &Representation,
) -> Result<Matrix, InvariantError> {
    let alg = h.algebra();
    if f.rows() != w.dim() || f.cols() != v.dim() {
        return Err(InvariantError::Shape {
            expected: w.dim(),
            cols: v.dim(),
            found_rows: f.rows(),
            found_cols: f.cols(),
        });
    }
    if !map_parity_ok(f, v, w, Parity::Even) {
        return Err(InvariantError::OddMap);
    }
    for i in 0..alg.dim() {
        let a = alg.basis(i);
        if hom_action(h, &a, f, false, v, w) != f.scale(&h.eps(&a)) {
            return Err(InvariantError::NotInvariant(format!("fails at {}", alg.label(i))));
        }
    }
    let mut tilde = Matrix::zeros(alg.field(), w.dim(), v.dim());
    for (key, c) in h.phi().terms() {
        let left = alg.mul_all(&[&h.s(&alg.basis(key[0])), h.alpha(), &alg.basis(key[1])]);
        let term = w.apply(&left).mul(f).mul(&v.apply(&h.s(&alg.basis(key[2]))));
        tilde = tilde.add(&term.scale(c));
    }
    let mut alt = Matrix::zeros(alg.field(), w.dim(), v.dim());
    for (key, c) in h.phi_inv().terms() {
        let right = alg.mul_all(&[&h.s(&alg.basis(key[1])), h.alpha(), &alg.basis(key[2])]);
        let term = w.matrices()[key[0]].mul(f).mul(&v.apply(&right));
        alt = alt.add(&term.scale(c));
    }
    if tilde != alt {
        return Err(InvariantError::NotInvariant("the Φ and Φ⁻¹ forms of f̃ disagree".into()));
    }
    for i in 0..alg.dim() {
        if tilde.mul(&v.matrices()[i]) != w.matrices()[i].mul(&tilde) {
            return Err(InvariantError::NotInvariant(format!(
                "f̃ does not intertwine {}",
                alg.label(i)
            )));
        }
    }
    if w.apply(h.beta()).mul(&tilde) != *f {
        return Err(InvariantError::NotInvariant("β f̃ ≠ f".into()));
    }
    Ok(tilde)
}
