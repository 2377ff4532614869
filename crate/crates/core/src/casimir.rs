//! Central elements built from invariants, the u-operator, trace-type
//! Casimir families and their invariance under twisting.

use thiserror::Error;

use crate::graded::{tensor_mul_on, Element, GradedBasis, Tensor};
use crate::invariants::{
    adjoint_action, anti_adjoint_action, check_form, invariant_subspace, is_central,
    is_invariant, is_pseudo_invariant, pseudo_invariant_subspace, LinearForm,
};
use crate::quasihopf::{QuasiHopf, StructureError};
use crate::report::{Report, Witness};
use crate::representations::Representation;
use crate::scalars::Scalar;
use crate::twisting::{check_twisted_canonical_identities, twist_structure, TwistError, Twistor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CasimirError {
    #[error("element is not even")]
    OddElement,
    #[error("element is not invariant (at {})", .0.at.as_deref().unwrap_or("-"))]
    NotInvariant(Witness),
    #[error("element is not pseudo-invariant (at {})", .0.at.as_deref().unwrap_or("-"))]
    NotPseudoInvariant(Witness),
    #[error("ω does not commute with Δ (at {})", .0.at.as_deref().unwrap_or("-"))]
    OmegaNotCommuting(Witness),
    #[error("θ does not centralize the iterated coproduct (at {})", .0.at.as_deref().unwrap_or("-"))]
    ThetaNotCentralizing(Witness),
    #[error("linear form is not even")]
    OddForm,
    #[error("linear form is not {0}")]
    FormNotInvariant(&'static str),
    #[error("result is not central: {}", .0.difference)]
    NotCentral(Witness),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

fn ensure_even(h: &QuasiHopf, x: &Element) -> Result<(), CasimirError> {
    if h.algebra().split(x).1.is_zero() {
        Ok(())
    } else {
        Err(CasimirError::OddElement)
    }
}

fn same(h: &QuasiHopf, at: &str, lhs: &Element, rhs: &Element) -> Result<(), Witness> {
    let d = lhs.sub(rhs);
    if d.is_zero() {
        Ok(())
    } else {
        Err(Witness::at(at, h.algebra().render_element(&d)))
    }
}

fn same_tensor(h: &QuasiHopf, at: String, lhs: &Tensor, rhs: &Tensor) -> Result<(), Witness> {
    let d = lhs.sub(rhs);
    if d.is_zero() {
        Ok(())
    } else {
        Err(Witness::at(at, h.algebra().render_tensor(&d)))
    }
}

// -- central elements from (pseudo-)invariants ----------------------------

/// `C₁ = Σ X̄ c₁ S(Ȳ) α Z̄` for an even invariant `c₁`.
pub fn build_c1(h: &QuasiHopf, c1: &Element) -> Result<Element, CasimirError> {
    ensure_even(h, c1)?;
    is_invariant(h, c1).map_err(CasimirError::NotInvariant)?;
    Ok(h.phi_inv_beta_alpha(c1, h.alpha()))
}

/// The Φ form `Σ S(X) α Y c₁ S(Z)`.
pub fn build_c1_phi_form(h: &QuasiHopf, c1: &Element) -> Element {
    h.phi_alpha_beta(h.alpha(), c1)
}

/// `C₂ = Σ S(X) c₂ Y β S(Z)` for an even pseudo-invariant `c₂`.
pub fn build_c2(h: &QuasiHopf, c2: &Element) -> Result<Element, CasimirError> {
    ensure_even(h, c2)?;
    is_pseudo_invariant(h, c2).map_err(CasimirError::NotPseudoInvariant)?;
    Ok(h.phi_alpha_beta(c2, h.beta()))
}

/// The Φ⁻¹ form `Σ X̄ β S(Ȳ) c₂ Z̄`.
pub fn build_c2_phi_inv_form(h: &QuasiHopf, c2: &Element) -> Element {
    h.phi_inv_beta_alpha(h.beta(), c2)
}

/// Postconditions for `C₁`: central, `C₁β = βC₁ = c₁`, both forms agree.
pub fn check_c1(h: &QuasiHopf, c1: &Element) -> Report {
    let alg = h.algebra();
    let mut rep = Report::new(format!("C1 from {}", alg.render_element(c1)));
    let built = build_c1(h, c1);
    let Ok(c) = built else {
        rep.record("c1-input", "c₁ is an even invariant", Err(Witness::global(built.unwrap_err().to_string())));
        return rep;
    };
    rep.run("c1-central", "C₁ is central", || is_central(alg, &c));
    rep.run("c1-times-beta", "C₁β = c₁", || same(h, "C₁β", &alg.mul(&c, h.beta()), c1));
    rep.run("beta-times-c1", "βC₁ = c₁", || same(h, "βC₁", &alg.mul(h.beta(), &c), c1));
    rep.run("c1-forms-agree", "Σ X̄c₁S(Ȳ)αZ̄ = Σ S(X)αYc₁S(Z)", || {
        same(h, "forms", &c, &build_c1_phi_form(h, c1))
    });
    rep
}

pub fn check_c2(h: &QuasiHopf, c2: &Element) -> Report {
    let alg = h.algebra();
    let mut rep = Report::new(format!("C2 from {}", alg.render_element(c2)));
    let built = build_c2(h, c2);
    let Ok(c) = built else {
        rep.record("c2-input", "c₂ is an even pseudo-invariant", Err(Witness::global(built.unwrap_err().to_string())));
        return rep;
    };
    rep.run("c2-central", "C₂ is central", || is_central(alg, &c));
    rep.run("c2-times-alpha", "C₂α = c₂", || same(h, "C₂α", &alg.mul(&c, h.alpha()), c2));
    rep.run("alpha-times-c2", "αC₂ = c₂", || same(h, "αC₂", &alg.mul(h.alpha(), &c), c2));
    rep.run("c2-forms-agree", "Σ S(X)c₂YβS(Z) = Σ X̄βS(Ȳ)c₂Z̄", || {
        same(h, "forms", &c, &build_c2_phi_inv_form(h, c2))
    });
    rep
}

/// `(Σ ωᵢ β S(ωⁱ), Σ S(ωᵢ) α ωⁱ)` for ω commuting with Δ.
pub fn quadratic_invariants(h: &QuasiHopf, omega: &Tensor) -> Result<(Element, Element), CasimirError> {
    let alg = h.algebra();
    for i in 0..alg.dim() {
        let d = h.delta(&alg.basis(i));
        same_tensor(h, alg.label(i).into(), &h.tmul(&d, omega), &h.tmul(omega, &d))
            .map_err(CasimirError::OmegaNotCommuting)?;
    }
    let lb_s = alg.left_mul_map(h.beta()).compose(alg, h.antipode());
    let c1 = alg.collapse(&h.on_legs(omega, &[(1, &lb_s)]));
    let c2 = alg.collapse(&h.on_legs(omega, &[(0, h.antipode()), (1, &alg.left_mul_map(h.alpha()))]));
    Ok((c1, c2))
}

// -- u-operator -------------------------------------------------------------

/// `u = Σ S(YβS(Z)) S(eⁱ) α eᵢ X (-1)^{[eᵢ]+[X]}`.
pub fn u_operator(h: &QuasiHopf) -> Result<Element, CasimirError> {
    let (r, _) = h.r_pair()?;
    let alg = h.algebra();
    let mut u = Element::zero();
    for (p, cp) in h.phi().terms() {
        let (x, y, z) = (alg.basis(p[0]), alg.basis(p[1]), alg.basis(p[2]));
        let left = h.s(&alg.mul_all(&[&y, h.beta(), &h.s(&z)]));
        for (k, cr) in r.terms() {
            let odd = alg.parity(k[0]).is_odd() ^ alg.parity(p[0]).is_odd();
            let term = alg.mul_all(&[&left, &h.s(&alg.basis(k[1])), h.alpha(), &alg.basis(k[0]), &x]);
            u = u.add(&term.scale(&(cp * cr).signed(odd)));
        }
    }
    Ok(u)
}

/// `u⁻¹ = Σ S⁻¹(X) S⁻¹(α ēⁱ) ēᵢ Y β S(Z) (-1)^{[ēᵢ]}`.
pub fn u_inverse(h: &QuasiHopf) -> Result<Element, CasimirError> {
    let (_, r_inv) = h.r_pair()?;
    let alg = h.algebra();
    let mut out = Element::zero();
    for (p, cp) in h.phi().terms() {
        let head = h.s_inv(&alg.basis(p[0]))?;
        let tail = alg.mul_all(&[&alg.basis(p[1]), h.beta(), &h.s(&alg.basis(p[2]))]);
        for (k, cr) in r_inv.terms() {
            let mid = h.s_inv(&alg.mul(h.alpha(), &alg.basis(k[1])))?;
            let term = alg.mul_all(&[&head, &mid, &alg.basis(k[0]), &tail]);
            out = out.add(&term.scale(&(cp * cr).signed(alg.parity(k[0]).is_odd())));
        }
    }
    Ok(out)
}

/// `Σ S(eⁱ) α eᵢ (-1)^{[eᵢ]}`.
fn s_alpha_rt(h: &QuasiHopf) -> Result<Element, CasimirError> {
    let (r, _) = h.r_pair()?;
    let alg = h.algebra();
    Ok(r.terms().fold(Element::zero(), |acc, (k, c)| {
        let t = alg.mul_all(&[&h.s(&alg.basis(k[1])), h.alpha(), &alg.basis(k[0])]);
        acc.add(&t.scale(&c.clone().signed(alg.parity(k[0]).is_odd())))
    }))
}

/// The u-operator contracts: conjugation by u implements S², inverse,
/// S²-fixedness, centrality of uS(u), and the identities tying u to α, β.
pub fn check_u(h: &QuasiHopf) -> Report {
    let alg = h.algebra();
    let mut rep = Report::new("u-operator");
    let (u, u_inv) = match (u_operator(h), u_inverse(h)) {
        (Ok(u), Ok(ui)) => (u, ui),
        (Err(e), _) | (_, Err(e)) => {
            rep.record("u-defined", "u and u⁻¹ are defined", Err(Witness::global(e.to_string())));
            return rep;
        }
    };
    let one = alg.one();
    rep.run("u-even", "u is even", || {
        let odd = alg.split(&u).1;
        if odd.is_zero() {
            Ok(())
        } else {
            Err(Witness::global(alg.render_element(&odd)))
        }
    });
    rep.run("u-inverse", "u·u⁻¹ = 1 = u⁻¹·u", || {
        same(h, "u·u⁻¹", &alg.mul(&u, &u_inv), &one)?;
        same(h, "u⁻¹·u", &alg.mul(&u_inv, &u), &one)
    });
    rep.run("antipode-square-conjugation", "S²(a) = u a u⁻¹", || {
        for i in 0..alg.dim() {
            let a = alg.basis(i);
            same(h, alg.label(i), &h.s(&h.s(&a)), &alg.mul_all(&[&u, &a, &u_inv]))?;
        }
        Ok(())
    });
    rep.run("antipode-square-fixes-u", "S²(u) = u", || same(h, "S²(u)", &h.s(&h.s(&u)), &u));
    rep.run("u-s-u-central", "uS(u) = S(u)u is central", || {
        let us = alg.mul(&u, &h.s(&u));
        same(h, "uS(u) − S(u)u", &us, &alg.mul(&h.s(&u), &u))?;
        is_central(alg, &us)
    });
    rep.run("s-alpha-u", "S(α)u = Σ S(eⁱ)αeᵢ(-1)^[eᵢ]", || {
        same(h, "S(α)u", &alg.mul(&h.s(h.alpha()), &u), &s_alpha_rt(h).expect("R present"))
    });
    rep.run("u-recovers-alpha", "u Σ S⁻¹(αēⁱ)ēᵢ(-1)^[ēᵢ] = α", || {
        let (_, r_inv) = h.r_pair().expect("R present");
        let mut sum = Element::zero();
        for (k, c) in r_inv.terms() {
            let Ok(head) = h.s_inv(&alg.mul(h.alpha(), &alg.basis(k[1]))) else {
                return Err(Witness::global("S is not invertible"));
            };
            let t = alg.mul(&head, &alg.basis(k[0]));
            sum = sum.add(&t.scale(&c.clone().signed(alg.parity(k[0]).is_odd())));
        }
        same(h, "lhs", &alg.mul(&u, &sum), h.alpha())
    });
    rep.run("s-u-s-beta", "S(u)S(β) = Σ eᵢβS(eⁱ)", || {
        let (r, _) = h.r_pair().expect("R present");
        let lb_s = alg.left_mul_map(h.beta()).compose(alg, h.antipode());
        let rhs = alg.collapse(&h.on_legs(r, &[(1, &lb_s)]));
        same(h, "S(u)S(β)", &alg.mul(&h.s(&u), &h.s(h.beta())), &rhs)
    });
    rep
}

// -- identity suite ---------------------------------------------------------

fn outer(a: &Element, b: &Element) -> Tensor {
    Tensor::from_elements(&[a, b])
}

/// The four exchange identities moving `a` through Φ / Φ⁻¹, checked for
/// every basis element.
pub fn exchange_identities(h: &QuasiHopf) -> Report {
    let alg = h.algebra();
    let b = |i: usize| alg.basis(i);
    let odd = |i: usize| alg.parity(i).is_odd();
    let mut rep = Report::new("exchange identities");
    rep.run(
        "exchange-phi-left",
        "Σ Xa⊗YβS(Z)(-1)^{[a][X]} = Σ a₁X⊗a₂YβS(Z)S(a₃)(-1)^{[a₂][X]}",
        || {
            for i in 0..alg.dim() {
                let a = b(i);
                let mut lhs = Tensor::zero(2);
                let mut rhs = Tensor::zero(2);
                let left_delta = h.delta_left(&a);
                for (p, c) in h.phi().terms() {
                    let ybsz = alg.mul_all(&[&b(p[1]), h.beta(), &h.s(&b(p[2]))]);
                    let sign = odd(i) && odd(p[0]);
                    lhs = lhs.add(&outer(&alg.mul(&b(p[0]), &a), &ybsz).scale(&c.clone().signed(sign)));
                    for (l, d) in left_delta.terms() {
                        let sign = odd(l[1]) && odd(p[0]);
                        let t = outer(
                            &alg.mul(&b(l[0]), &b(p[0])),
                            &alg.mul_all(&[&b(l[1]), &ybsz, &h.s(&b(l[2]))]),
                        );
                        rhs = rhs.add(&t.scale(&(c * d).signed(sign)));
                    }
                }
                same_tensor(h, alg.label(i).into(), &lhs, &rhs)?;
            }
            Ok(())
        },
    );
    rep.run(
        "exchange-phi-right",
        "Σ S(X)αY⊗aZ(-1)^{[a][Z]} = Σ S(a₁)S(X)αYa₂⊗Za₃(-1)^{[a₂][Z]}",
        || {
            for i in 0..alg.dim() {
                let a = b(i);
                let mut lhs = Tensor::zero(2);
                let mut rhs = Tensor::zero(2);
                let right_delta = h.delta_right(&a);
                for (p, c) in h.phi().terms() {
                    let sxay = alg.mul_all(&[&h.s(&b(p[0])), h.alpha(), &b(p[1])]);
                    let sign = odd(i) && odd(p[2]);
                    lhs = lhs.add(&outer(&sxay, &alg.mul(&a, &b(p[2]))).scale(&c.clone().signed(sign)));
                    for (r, d) in right_delta.terms() {
                        let sign = odd(r[1]) && odd(p[2]);
                        let t = outer(
                            &alg.mul_all(&[&h.s(&b(r[0])), &sxay, &b(r[1])]),
                            &alg.mul(&b(p[2]), &b(r[2])),
                        );
                        rhs = rhs.add(&t.scale(&(c * d).signed(sign)));
                    }
                }
                same_tensor(h, alg.label(i).into(), &lhs, &rhs)?;
            }
            Ok(())
        },
    );
    rep.run(
        "exchange-phi-inverse-left",
        "Σ aX̄⊗S(Ȳ)αZ̄ = Σ X̄a₁⊗S(a₂)S(Ȳ)αZ̄a₃(-1)^{[X̄]([a₁]+[a₂])}",
        || {
            for i in 0..alg.dim() {
                let a = b(i);
                let mut lhs = Tensor::zero(2);
                let mut rhs = Tensor::zero(2);
                let left_delta = h.delta_left(&a);
                for (p, c) in h.phi_inv().terms() {
                    let syaz = alg.mul_all(&[&h.s(&b(p[1])), h.alpha(), &b(p[2])]);
                    lhs = lhs.add(&outer(&alg.mul(&a, &b(p[0])), &syaz).scale(c));
                    for (l, d) in left_delta.terms() {
                        let sign = odd(p[0]) && (odd(l[0]) ^ odd(l[1]));
                        let t = outer(
                            &alg.mul(&b(p[0]), &b(l[0])),
                            &alg.mul_all(&[&h.s(&b(l[1])), &syaz, &b(l[2])]),
                        );
                        rhs = rhs.add(&t.scale(&(c * d).signed(sign)));
                    }
                }
                same_tensor(h, alg.label(i).into(), &lhs, &rhs)?;
            }
            Ok(())
        },
    );
    rep.run(
        "exchange-phi-inverse-right",
        "Σ X̄βS(Ȳ)⊗Z̄a = Σ a₁X̄βS(Ȳ)S(a₂)⊗a₃Z̄(-1)^{([a₂]+[a₃])[Z̄]}",
        || {
            for i in 0..alg.dim() {
                let a = b(i);
                let mut lhs = Tensor::zero(2);
                let mut rhs = Tensor::zero(2);
                let right_delta = h.delta_right(&a);
                for (p, c) in h.phi_inv().terms() {
                    let xbsy = alg.mul_all(&[&b(p[0]), h.beta(), &h.s(&b(p[1]))]);
                    lhs = lhs.add(&outer(&xbsy, &alg.mul(&b(p[2]), &a)).scale(c));
                    for (r, d) in right_delta.terms() {
                        let sign = odd(p[2]) && (odd(r[1]) ^ odd(r[2]));
                        let t = outer(
                            &alg.mul_all(&[&b(r[0]), &xbsy, &h.s(&b(r[1]))]),
                            &alg.mul(&b(r[2]), &b(p[2])),
                        );
                        rhs = rhs.add(&t.scale(&(c * d).signed(sign)));
                    }
                }
                same_tensor(h, alg.label(i).into(), &lhs, &rhs)?;
            }
            Ok(())
        },
    );
    rep
}

/// Exchange identities, the u-operator identities (when R is present) and,
/// given a twistor, the canonical-element recovery identities.
pub fn identity_suite(h: &QuasiHopf, twistor: Option<&Twistor>) -> Report {
    let mut rep = Report::new("identity suite");
    rep.extend(exchange_identities(h));
    if h.is_quasitriangular() {
        rep.extend(check_u(h));
    }
    if let Some(tw) = twistor {
        match twist_structure(h, tw) {
            Ok(hf) => rep.extend(check_twisted_canonical_identities(h, &hf, tw)),
            Err(e) => {
                rep.record("twist", "twisted structure is defined", Err(Witness::global(e.to_string())));
            }
        }
    }
    rep
}

// -- trace forms and Casimir families --------------------------------------

/// `ξ(a) = Str(π(uS⁻¹(α)a))` and `ξ̄(a) = Str(π(u⁻¹S(β)a))`.
pub fn trace_forms(h: &QuasiHopf, pi: &Representation) -> Result<(LinearForm, LinearForm), CasimirError> {
    let alg = h.algebra();
    let u = u_operator(h)?;
    let u_inv = u_inverse(h)?;
    let left = alg.mul(&u, &h.s_inv(h.alpha())?);
    let left_bar = alg.mul(&u_inv, &h.s(h.beta()));
    let form = |l: &Element| LinearForm {
        values: (0..alg.dim())
            .map(|i| pi.supertrace(&pi.apply(&alg.mul(l, &alg.basis(i)))))
            .collect(),
    };
    Ok((form(&left), form(&left_bar)))
}

pub fn check_trace_forms(h: &QuasiHopf, pi: &Representation) -> Report {
    let mut rep = Report::new(format!("trace forms on {}", pi.name()));
    match trace_forms(h, pi) {
        Ok((xi, xi_bar)) => {
            rep.run("trace-form-invariant", "ξ(Ad a·b) = ε(a)ξ(b)", || check_form(h, &xi, adjoint_action));
            rep.run("trace-form-bar-pseudo-invariant", "ξ̄(Ad̄ a·b) = ε(a)ξ̄(b)", || {
                check_form(h, &xi_bar, anti_adjoint_action)
            });
        }
        Err(e) => {
            rep.record("trace-forms", "trace forms are defined", Err(Witness::global(e.to_string())));
        }
    }
    rep
}

/// `(RᵀR)^m`, with negative powers from `R⁻¹(R⁻¹)ᵀ`.
pub fn omega_power(h: &QuasiHopf, m: i64) -> Result<Tensor, CasimirError> {
    let (r, r_inv) = h.r_pair()?;
    let alg = h.algebra();
    let base = if m >= 0 {
        h.tmul(&alg.transpose(r), r)
    } else {
        h.tmul(r_inv, &alg.transpose(r_inv))
    };
    let mut out = alg.unit_tensor(2);
    for _ in 0..m.unsigned_abs() {
        out = h.tmul(&out, &base);
    }
    Ok(out)
}

/// `C = Σ aᵢ ξ(bᵢ β S(cᵢ))` for θ centralizing `(1⊗Δ)Δ` and ξ even
/// invariant; the result is checked to be central.
pub fn central_from_theta(h: &QuasiHopf, theta: &Tensor, xi: &LinearForm) -> Result<Element, CasimirError> {
    let alg = h.algebra();
    for i in 0..alg.dim() {
        let dd = h.delta_right(&alg.basis(i));
        same_tensor(h, alg.label(i).into(), &h.tmul(&dd, theta), &h.tmul(theta, &dd))
            .map_err(CasimirError::ThetaNotCentralizing)?;
    }
    if !xi.is_even(alg) {
        return Err(CasimirError::OddForm);
    }
    check_form(h, xi, adjoint_action).map_err(|_| CasimirError::FormNotInvariant("invariant"))?;
    let c = contract_theta(h, theta, xi);
    is_central(alg, &c).map_err(CasimirError::NotCentral)?;
    Ok(c)
}

/// `C̄ = Σ ξ̄(S(ā)αb̄) c̄` for θ̄ centralizing `(Δ⊗1)Δ` and ξ̄ even
/// pseudo-invariant.
pub fn central_from_theta_bar(h: &QuasiHopf, theta_bar: &Tensor, xi_bar: &LinearForm) -> Result<Element, CasimirError> {
    let alg = h.algebra();
    for i in 0..alg.dim() {
        let dd = h.delta_left(&alg.basis(i));
        same_tensor(h, alg.label(i).into(), &h.tmul(&dd, theta_bar), &h.tmul(theta_bar, &dd))
            .map_err(CasimirError::ThetaNotCentralizing)?;
    }
    if !xi_bar.is_even(alg) {
        return Err(CasimirError::OddForm);
    }
    check_form(h, xi_bar, anti_adjoint_action).map_err(|_| CasimirError::FormNotInvariant("pseudo-invariant"))?;
    let c = contract_theta_bar(h, theta_bar, xi_bar);
    is_central(alg, &c).map_err(CasimirError::NotCentral)?;
    Ok(c)
}

fn contract_theta(h: &QuasiHopf, theta: &Tensor, xi: &LinearForm) -> Element {
    let alg = h.algebra();
    let mut out = Element::zero();
    for (k, c) in theta.terms() {
        let inner = alg.mul_all(&[&alg.basis(k[1]), h.beta(), &h.s(&alg.basis(k[2]))]);
        let v = xi.eval(&inner);
        if !v.is_zero() {
            out = out.add(&alg.basis(k[0]).scale(&(c * &v)));
        }
    }
    out
}

fn contract_theta_bar(h: &QuasiHopf, theta_bar: &Tensor, xi_bar: &LinearForm) -> Element {
    let alg = h.algebra();
    let mut out = Element::zero();
    for (k, c) in theta_bar.terms() {
        let inner = alg.mul_all(&[&h.s(&alg.basis(k[0])), h.alpha(), &alg.basis(k[1])]);
        let v = xi_bar.eval(&inner);
        if !v.is_zero() {
            out = out.add(&alg.basis(k[2]).scale(&(c * &v)));
        }
    }
    out
}

/// `θ = Φ⁻¹(ω⊗1)Φ`.
pub fn theta_of(h: &QuasiHopf, omega: &Tensor) -> Tensor {
    h.tmul_all(&[h.phi_inv(), &h.embed(omega, 3, &[0, 1]), h.phi()])
}

/// `θ̄ = Φ(1⊗ω)Φ⁻¹`.
pub fn theta_bar_of(h: &QuasiHopf, omega: &Tensor) -> Tensor {
    h.tmul_all(&[h.phi(), &h.embed(omega, 3, &[1, 2]), h.phi_inv()])
}

/// `(C_m, C̄_m)` for the representation `pi`; both are checked central.
pub fn casimir_cm(h: &QuasiHopf, pi: &Representation, m: i64) -> Result<(Element, Element), CasimirError> {
    let (xi, xi_bar) = trace_forms(h, pi)?;
    let omega = omega_power(h, m)?;
    let c = contract_theta(h, &theta_of(h, &omega), &xi);
    let c_bar = contract_theta_bar(h, &theta_bar_of(h, &omega), &xi_bar);
    let alg = h.algebra();
    is_central(alg, &c).map_err(CasimirError::NotCentral)?;
    is_central(alg, &c_bar).map_err(CasimirError::NotCentral)?;
    Ok((c, c_bar))
}

/// `(1⊗π)ω` as a mixed tensor in `A ⊗ End V`.
pub fn represent_omega(pi: &Representation, omega: &Tensor) -> Tensor {
    pi.apply_on_leg(omega, 1).expect("rank-2 tensor")
}

/// `C = Σ Str(π(uS⁻¹(α)) Bᵢ π(βS(cᵢ))) aᵢ` with
/// `θ̂ = (1⊗π⊗1)Φ⁻¹ · (ω̂⊗1) · (1⊗π⊗1)Φ` for ω̂ ∈ A⊗End V commuting with
/// `(1⊗π)Δ(a)`.
pub fn casimir_from_omega_rep(h: &QuasiHopf, pi: &Representation, omega_hat: &Tensor) -> Result<Element, CasimirError> {
    let alg = h.algebra();
    let units = pi.units();
    let legs2: [&dyn GradedBasis; 2] = [alg, units];
    for i in 0..alg.dim() {
        let d = represent_omega(pi, &h.delta(&alg.basis(i)));
        let lhs = tensor_mul_on(&legs2, &d, omega_hat).expect("rank 2");
        let rhs = tensor_mul_on(&legs2, omega_hat, &d).expect("rank 2");
        same_tensor(h, alg.label(i).into(), &lhs, &rhs).map_err(CasimirError::OmegaNotCommuting)?;
    }
    let legs3: [&dyn GradedBasis; 3] = [alg, units, alg];
    let unit = alg.unit_index();
    let lifted = Tensor::from_terms(
        3,
        omega_hat.terms().map(|(k, c)| (vec![k[0], k[1], unit], c.clone())),
    );
    let phi_inv = pi.apply_on_leg(h.phi_inv(), 1).expect("rank 3");
    let phi = pi.apply_on_leg(h.phi(), 1).expect("rank 3");
    let theta = tensor_mul_on(&legs3, &tensor_mul_on(&legs3, &phi_inv, &lifted).expect("rank 3"), &phi)
        .expect("rank 3");
    let left = pi.apply(&alg.mul(&u_operator(h)?, &h.s_inv(h.alpha())?));
    let mut out = Element::zero();
    for (k, c) in theta.terms() {
        let b = units.to_matrix(&Element::term(k[1], Scalar::one(alg.field())));
        let right = pi.apply(&alg.mul(h.beta(), &h.s(&alg.basis(k[2]))));
        let v = pi.supertrace(&left.mul(&b).mul(&right));
        if !v.is_zero() {
            out = out.add(&alg.basis(k[0]).scale(&(c * &v)));
        }
    }
    is_central(alg, &out).map_err(CasimirError::NotCentral)?;
    Ok(out)
}

// -- twist invariance --------------------------------------------------------

/// `c₁^F = Σ fᵢ c₁ S(fⁱ)`.
pub fn twisted_invariant(h: &QuasiHopf, tw: &Twistor, c1: &Element) -> Element {
    let alg = h.algebra();
    let l = alg.left_mul_map(c1).compose(alg, h.antipode());
    alg.collapse(&h.on_legs(tw.f(), &[(1, &l)]))
}

/// `c₂^F = Σ S(f̄ᵢ) c₂ f̄ⁱ`.
pub fn twisted_pseudo_invariant(h: &QuasiHopf, tw: &Twistor, c2: &Element) -> Element {
    let alg = h.algebra();
    alg.collapse(&h.on_legs(tw.f_inv(), &[(0, h.antipode()), (1, &alg.left_mul_map(c2))]))
}

/// Twist invariance of C₁, C₂ (for every even (pseudo-)invariant basis
/// element), of u, and of `C_m`, `C̄_m` for the given powers and
/// representations.
pub fn verify_twist_invariance(
    h: &QuasiHopf,
    tw: &Twistor,
    reps: &[Representation],
    powers: &[i64],
) -> Report {
    let mut rep = Report::new(format!("invariance under twist {:?}", tw.name()));
    let hf = match twist_structure(h, tw) {
        Ok(hf) => hf,
        Err(e) => {
            rep.record("twist", "twisted structure is defined", Err(Witness::global(e.to_string())));
            return rep;
        }
    };
    let alg = h.algebra();
    rep.run("twisted-structure-valid", "H_F passes the full verifier", || {
        let r = hf.verify_all();
        let first = r.failures().next().map(|c| {
            Witness::at(c.id.clone(), c.witness.as_ref().map_or(String::new(), |w| w.difference.clone()))
        });
        first.map_or(Ok(()), Err)
    });
    rep.extend(check_twisted_canonical_identities(h, &hf, tw));
    rep.run("c1-twist-invariant", "C₁^F = C₁ for every even invariant c₁", || {
        for c1 in &invariant_subspace(h).even {
            let at = alg.render_element(c1);
            let c = build_c1(h, c1).map_err(|e| Witness::at(at.clone(), e.to_string()))?;
            let c1f = twisted_invariant(h, tw, c1);
            let cf = build_c1(&hf, &c1f).map_err(|e| Witness::at(at.clone(), e.to_string()))?;
            same(h, &at, &cf, &c)?;
        }
        Ok(())
    });
    rep.run("c2-twist-invariant", "C₂^F = C₂ for every even pseudo-invariant c₂", || {
        for c2 in &pseudo_invariant_subspace(h).even {
            let at = alg.render_element(c2);
            let c = build_c2(h, c2).map_err(|e| Witness::at(at.clone(), e.to_string()))?;
            let c2f = twisted_pseudo_invariant(h, tw, c2);
            let cf = build_c2(&hf, &c2f).map_err(|e| Witness::at(at.clone(), e.to_string()))?;
            same(h, &at, &cf, &c)?;
        }
        Ok(())
    });
    if !h.is_quasitriangular() {
        return rep;
    }
    rep.run("u-twist-invariant", "u_F = u", || {
        let u = u_operator(h).map_err(|e| Witness::global(e.to_string()))?;
        let uf = u_operator(&hf).map_err(|e| Witness::global(e.to_string()))?;
        same(h, "u", &uf, &u)
    });
    for pi in reps {
        for &m in powers {
            let id = format!("casimir-family-twist-invariant[{}, m={m}]", pi.name());
            rep.run(&id, "C_m^F = C_m and C̄_m^F = C̄_m", || {
                let (c, cb) = casimir_cm(h, pi, m).map_err(|e| Witness::global(e.to_string()))?;
                let (cf, cbf) = casimir_cm(&hf, pi, m).map_err(|e| Witness::global(e.to_string()))?;
                same(h, "C_m", &cf, &c)?;
                same(h, "C̄_m", &cbf, &cb)
            });
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_builtin;

    #[test]
    fn u_is_g_on_z2() {
        let h = load_builtin("z2-group").unwrap().structure;
        let g = h.algebra().basis(1);
        assert_eq!(u_operator(&h).unwrap(), g);
        assert_eq!(u_inverse(&h).unwrap(), g);
    }

    #[test]
    fn collapses_to_unit() {
        for name in ["z2-cocycle", "sweedler-twisted", "grassmann-theta"] {
            let h = load_builtin(name).unwrap().structure;
            assert_eq!(build_c1(&h, h.beta()).unwrap(), h.one(), "{name}");
            assert_eq!(build_c2(&h, h.alpha()).unwrap(), h.one(), "{name}");
        }
    }

    #[test]
    fn trivial_omega_gives_canonical_elements() {
        let h = load_builtin("z2-cocycle").unwrap().structure;
        let (c1, c2) = quadratic_invariants(&h, &h.algebra().unit_tensor(2)).unwrap();
        assert_eq!(&c1, h.beta());
        assert_eq!(&c2, h.alpha());
    }

    #[test]
    fn u_contracts_on_quasitriangular_builtins() {
        for name in ["z2-group", "sweedler-h4", "grassmann-theta", "sweedler-twisted"] {
            let h = load_builtin(name).unwrap().structure;
            let rep = check_u(&h);
            assert!(rep.passed(), "{name}\n{rep}");
        }
    }

    #[test]
    fn exchange_identities_hold() {
        for name in ["z2-cocycle", "sweedler-twisted", "grassmann-theta"] {
            let h = load_builtin(name).unwrap().structure;
            let rep = exchange_identities(&h);
            assert!(rep.passed(), "{name}\n{rep}");
        }
    }

    #[test]
    fn z2_regular_trace_form_and_cm() {
        let e = load_builtin("z2-group").unwrap();
        let pi = e.representation("regular").unwrap();
        let (xi, _) = trace_forms(&e.structure, pi).unwrap();
        let alg = e.structure.algebra();
        assert_eq!(xi.values, vec![alg.scalar(0), alg.scalar(2)]);
        for m in -1..=2 {
            let (c, cb) = casimir_cm(&e.structure, pi, m).unwrap();
            assert!(c.is_zero() && cb.is_zero());
        }
    }

    #[test]
    fn omega_rep_path_matches_cm() {
        for name in ["sweedler-h4", "sweedler-twisted", "grassmann-theta"] {
            let e = load_builtin(name).unwrap();
            let h = &e.structure;
            for pi in &e.representations {
                for m in 0..=2 {
                    let omega = omega_power(h, m).unwrap();
                    let via_rep = casimir_from_omega_rep(h, pi, &represent_omega(pi, &omega)).unwrap();
                    assert_eq!(via_rep, casimir_cm(h, pi, m).unwrap().0, "{name} {} m={m}", pi.name());
                }
            }
        }
    }

    #[test]
    fn trace_forms_are_invariant() {
        for name in ["z2-group", "sweedler-h4", "grassmann-theta", "sweedler-twisted"] {
            let e = load_builtin(name).unwrap();
            for pi in &e.representations {
                let rep = check_trace_forms(&e.structure, pi);
                assert!(rep.passed(), "{name}\n{rep}");
            }
        }
    }

    #[test]
    fn twist_invariance_sweep() {
        for (name, tw) in [("z2-group", "pminus"), ("sweedler-h4", "Ft"), ("grassmann-theta", "identity"), ("grassmann-theta", "theta")] {
            let e = load_builtin(name).unwrap();
            let rep = verify_twist_invariance(&e.structure, e.twistor(tw).unwrap(), &e.representations, &[-1, 0, 1, 2]);
            assert!(rep.passed(), "{name}/{tw}\n{rep}");
        }
    }
}
