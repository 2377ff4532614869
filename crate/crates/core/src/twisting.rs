//! Drinfeld twisting of quasi-Hopf superalgebras.

use thiserror::Error;

use crate::graded::{Element, GradedBasis, LinearMap, Tensor};
use crate::quasihopf::{Parts, QuasiHopf, StructureError};
use crate::report::{Report, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("twistor {0:?} is not invertible")]
    NotInvertible(String),
    #[error("twistor {name:?}: supplied inverse is wrong")]
    WrongInverse { name: String },
    #[error("twistor {name:?}: counit property fails ({side}): {difference}")]
    Counit {
        name: String,
        side: &'static str,
        difference: String,
    },
    #[error("twistor {0:?} must have rank 2")]
    Rank(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// An invertible rank-2 element with `(ε⊗1)F = 1 = (1⊗ε)F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twistor {
    name: String,
    f: Tensor,
    f_inv: Tensor,
}

impl Twistor {
    /// Validate `f` against `h`; the inverse is solved when not supplied.
    pub fn new(
        h: &QuasiHopf,
        name: impl Into<String>,
        f: Tensor,
        f_inv: Option<Tensor>,
    ) -> Result<Self, TwistError> {
        let name = name.into();
        let alg = h.algebra();
        if f.rank() != 2 || f_inv.as_ref().is_some_and(|t| t.rank() != 2) {
            return Err(TwistError::Rank(name));
        }
        let f_inv = match f_inv {
            Some(inv) => {
                let one = alg.unit_tensor(2);
                if h.tmul(&f, &inv) != one || h.tmul(&inv, &f) != one {
                    return Err(TwistError::WrongInverse { name });
                }
                inv
            }
            None => alg
                .tensor_inverse(&f)
                .ok_or_else(|| TwistError::NotInvertible(name.clone()))?,
        };
        let one = alg.one().to_tensor();
        for (side, leg) in [("ε⊗1", 0), ("1⊗ε", 1)] {
            let got = h.on_legs(&f, &[(leg, h.counit())]);
            let d = got.sub(&one);
            if !d.is_zero() {
                return Err(TwistError::Counit {
                    name,
                    side,
                    difference: alg.render_tensor(&d),
                });
            }
        }
        Ok(Self { name, f, f_inv })
    }

    /// `1⊗1`.
    pub fn identity(h: &QuasiHopf) -> Self {
        let one = h.algebra().unit_tensor(2);
        Self {
            name: "identity".into(),
            f: one.clone(),
            f_inv: one,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn f(&self) -> &Tensor {
        &self.f
    }

    pub fn f_inv(&self) -> &Tensor {
        &self.f_inv
    }

    /// The twistor undoing this one: `F⁻¹`, valid on the twisted structure.
    pub fn inverse(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            f: self.f_inv.clone(),
            f_inv: self.f.clone(),
        }
    }
}

/// `Σ S(f̄ᵢ) α f̄ⁱ`.
pub fn twisted_alpha(h: &QuasiHopf, f_inv: &Tensor) -> Element {
    let alg = h.algebra();
    alg.collapse(&h.on_legs(f_inv, &[(0, h.antipode()), (1, &alg.left_mul_map(h.alpha()))]))
}

/// `Σ fᵢ β S(fⁱ)`.
pub fn twisted_beta(h: &QuasiHopf, f: &Tensor) -> Element {
    let alg = h.algebra();
    let lb_s = alg.left_mul_map(h.beta()).compose(alg, h.antipode());
    alg.collapse(&h.on_legs(f, &[(1, &lb_s)]))
}

/// `Φ_F = (F⊗1)·(Δ⊗1)F·Φ·(1⊗Δ)F⁻¹·(1⊗F⁻¹)`.
pub fn twisted_phi(h: &QuasiHopf, tw: &Twistor) -> Tensor {
    h.tmul_all(&[
        &h.embed(&tw.f, 3, &[0, 1]),
        &h.on_legs(&tw.f, &[(0, h.coproduct())]),
        h.phi(),
        &h.on_legs(&tw.f_inv, &[(1, h.coproduct())]),
        &h.embed(&tw.f_inv, 3, &[1, 2]),
    ])
}

/// The twisted structure `H_F`; `S` is unchanged.
pub fn twist_structure(h: &QuasiHopf, tw: &Twistor) -> Result<QuasiHopf, TwistError> {
    let alg = h.algebra();
    let images = (0..alg.dim())
        .map(|i| h.tmul_all(&[&tw.f, h.coproduct().image(i), &tw.f_inv]))
        .collect();
    let coproduct = LinearMap::new(alg, 2, images).map_err(StructureError::from)?;
    let phi = twisted_phi(h, tw);
    let phi_inv = h.tmul_all(&[
        &h.embed(&tw.f, 3, &[1, 2]),
        &h.on_legs(&tw.f, &[(1, h.coproduct())]),
        h.phi_inv(),
        &h.on_legs(&tw.f_inv, &[(0, h.coproduct())]),
        &h.embed(&tw.f_inv, 3, &[0, 1]),
    ]);
    let (r, r_inv) = match h.r_pair() {
        Ok((r, ri)) => {
            let ft = alg.transpose(&tw.f);
            let ft_inv = alg.transpose(&tw.f_inv);
            (
                Some(h.tmul_all(&[&ft, r, &tw.f_inv])),
                Some(h.tmul_all(&[&tw.f, ri, &ft_inv])),
            )
        }
        Err(_) => (None, None),
    };
    let parts = Parts {
        algebra: h.algebra_arc().clone(),
        coproduct,
        counit: h.counit().clone(),
        antipode: h.antipode().clone(),
        phi,
        phi_inv: Some(phi_inv),
        alpha: twisted_alpha(h, &tw.f_inv),
        beta: twisted_beta(h, &tw.f),
        r,
        r_inv,
    };
    Ok(QuasiHopf::new(parts)?)
}

/// `β = Σ f̄ᵢ β_F S(f̄ⁱ)` and `α = Σ S(fᵢ) α_F fⁱ`, checked against `hf = H_F`.
pub fn check_twisted_canonical_identities(h: &QuasiHopf, hf: &QuasiHopf, tw: &Twistor) -> Report {
    let alg = h.algebra();
    let mut rep = Report::new(format!("canonical elements under twist {:?}", tw.name));
    rep.run("twisted-beta-recovers-beta", "β = Σ f̄ᵢ β_F S(f̄ⁱ)", || {
        let lb = alg.left_mul_map(hf.beta()).compose(alg, h.antipode());
        let got = alg.collapse(&h.on_legs(&tw.f_inv, &[(1, &lb)]));
        diff(h, &got, h.beta())
    });
    rep.run("twisted-alpha-recovers-alpha", "α = Σ S(fᵢ) α_F fⁱ", || {
        let la = alg.left_mul_map(hf.alpha());
        let got = alg.collapse(&h.on_legs(&tw.f, &[(0, h.antipode()), (1, &la)]));
        diff(h, &got, h.alpha())
    });
    rep
}

fn diff(h: &QuasiHopf, a: &Element, b: &Element) -> Result<(), Witness> {
    let d = a.sub(b);
    if d.is_zero() {
        Ok(())
    } else {
        Err(Witness::global(h.algebra().render_element(&d)))
    }
}
