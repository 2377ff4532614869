//! Small quantum group u_q(sl2) at a primitive cube root of unity q = z.
//!
//! Basis E^a F^b K^c with a, b, c < 3; relations KE = q²EK, KF = q⁻²FK,
//! EF − FE = (K − K⁻¹)/(q − q⁻¹), E³ = F³ = 0, K³ = 1.
//! Δ(E) = E⊗K + 1⊗E, Δ(F) = F⊗1 + K⁻¹⊗F, Δ(K) = K⊗K.

use std::collections::BTreeMap;

use crate::catalog::{Builder, CatalogEntry, CatalogError};
use crate::graded::{Element, Tensor};
use crate::linalg::Matrix;
use crate::quasihopf::{Parts, QuasiHopf};
use crate::representations::Representation;
use crate::scalars::{FieldDescriptor, Scalar};
use crate::twisting::Twistor;

const L: usize = 3;
const E: u8 = 0;
const F: u8 = 1;
const K: u8 = 2;

fn index(a: usize, b: usize, c: usize) -> usize {
    (a * L + b) * L + c
}

fn power_label(letter: &str, n: usize) -> String {
    match n {
        0 => String::new(),
        1 => letter.into(),
        2 => format!("{letter}²"),
        _ => unreachable!(),
    }
}

fn label(a: usize, b: usize, c: usize) -> String {
    let s = power_label("E", a) + &power_label("F", b) + &power_label("K", c);
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

struct Rewriter {
    q2: Scalar,
    q2_inv: Scalar,
    /// 1/(q − q⁻¹)
    bracket: Scalar,
    field: FieldDescriptor,
}

impl Rewriter {
    fn new(field: &FieldDescriptor) -> Self {
        let q = Scalar::generator(field).expect("cyclotomic generator");
        let q_inv = q.inv().expect("q ≠ 0");
        Self {
            q2: &q * &q,
            q2_inv: &q_inv * &q_inv,
            bracket: (&q - &q_inv).inv().expect("q² ≠ 1"),
            field: field.clone(),
        }
    }

    /// Normal-order a word into PBW coordinates.
    fn normal(&self, word: Vec<u8>, coeff: Scalar, out: &mut BTreeMap<usize, Scalar>) {
        if coeff.is_zero() {
            return;
        }
        let Some(i) = word.windows(2).position(|w| w[0] > w[1]) else {
            let count = |l: u8| word.iter().filter(|&&x| x == l).count();
            let (a, b, c) = (count(E), count(F), count(K) % L);
            if a >= L || b >= L {
                return;
            }
            let slot = out.entry(index(a, b, c)).or_insert_with(|| Scalar::zero(&self.field));
            *slot = &*slot + &coeff;
            return;
        };
        let splice = |mid: &[u8]| {
            let mut w = word[..i].to_vec();
            w.extend_from_slice(mid);
            w.extend_from_slice(&word[i + 2..]);
            w
        };
        match (word[i], word[i + 1]) {
            (F, E) => {
                self.normal(splice(&[E, F]), coeff.clone(), out);
                let c = &coeff * &self.bracket;
                self.normal(splice(&[K]), -&c, out);
                self.normal(splice(&[K, K]), c, out);
            }
            (K, E) => self.normal(splice(&[E, K]), &coeff * &self.q2, out),
            (K, F) => self.normal(splice(&[F, K]), &coeff * &self.q2_inv, out),
            _ => unreachable!("only descents are rewritten"),
        }
    }
}

fn word(a: usize, b: usize, c: usize) -> Vec<u8> {
    [vec![E; a], vec![F; b], vec![K; c]].concat()
}

fn builder(field: &FieldDescriptor) -> Builder {
    let rw = Rewriter::new(field);
    let mut labels = Vec::new();
    let mut coords = Vec::new();
    for a in 0..L {
        for b in 0..L {
            for c in 0..L {
                labels.push(label(a, b, c));
                coords.push((a, b, c));
            }
        }
    }
    let mut table = Vec::new();
    for (i, &(a, b, c)) in coords.iter().enumerate() {
        for (j, &(a2, b2, c2)) in coords.iter().enumerate() {
            let mut out = BTreeMap::new();
            rw.normal([word(a, b, c), word(a2, b2, c2)].concat(), Scalar::one(field), &mut out);
            table.extend(out.into_iter().filter(|(_, s)| !s.is_zero()).map(|(k, s)| (i, j, k, s)));
        }
    }
    let basis: Vec<(&str, u8)> = labels.iter().map(|l| (l.as_str(), 0)).collect();
    Builder::new(field.clone(), &basis, table)
}

fn pow_t(h_mul: impl Fn(&Tensor, &Tensor) -> Tensor, x: &Tensor, n: usize, one: &Tensor) -> Tensor {
    (0..n).fold(one.clone(), |acc, _| h_mul(&acc, x))
}

/// Cartan part `(1/3) Σ q^{-2ij} K^i⊗K^j` times
/// `Σ_n (q − q⁻¹)^n / [n]! · q^{n(n−1)/2} E^n⊗F^n`.
fn r_matrix(b: &Builder) -> Tensor {
    let alg = &b.alg;
    let field = alg.field();
    let q = Scalar::generator(field).unwrap();
    let q_inv = q.inv().unwrap();
    let mut cartan = Tensor::zero(2);
    for i in 0..L {
        for j in 0..L {
            let c = q.pow(-2 * (i * j) as i64).unwrap().try_div(&Scalar::from_int(field, L as i64)).unwrap();
            cartan.add_term(vec![index(0, 0, i), index(0, 0, j)], c);
        }
    }
    let diff = &q - &q_inv;
    let mut nil = Tensor::zero(2);
    let mut factorial = Scalar::one(field);
    for n in 0..L {
        if n > 0 {
            // [n] = (qⁿ − q⁻ⁿ)/(q − q⁻¹)
            let qn = &q.pow(n as i64).unwrap() - &q.pow(-(n as i64)).unwrap();
            factorial = &factorial * &qn.try_div(&diff).unwrap();
        }
        let c = (&diff.pow(n as i64).unwrap() * &q.pow((n * (n.saturating_sub(1)) / 2) as i64).unwrap())
            .try_div(&factorial)
            .unwrap();
        nil.add_term(vec![index(n, 0, 0), index(0, n, 0)], c);
    }
    alg.tensor_mul(&cartan, &nil).expect("rank 2")
}

fn natural_rep(b: &Builder) -> Representation {
    let alg = &b.alg;
    let field = alg.field();
    let q = Scalar::generator(field).unwrap();
    let zero = Scalar::zero(field);
    let one = Scalar::one(field);
    let gens = [
        Matrix::from_rows(field, 2, vec![vec![zero.clone(), one.clone()], vec![zero.clone(), zero.clone()]]),
        Matrix::from_rows(field, 2, vec![vec![zero.clone(), zero.clone()], vec![one.clone(), zero.clone()]]),
        Matrix::from_rows(field, 2, vec![vec![q.clone(), zero.clone()], vec![zero, q.inv().unwrap()]]),
    ];
    let id = Matrix::identity(field, 2);
    let mut mats = Vec::new();
    for a in 0..L {
        for bb in 0..L {
            for c in 0..L {
                let mut m = id.clone();
                for &l in &word(a, bb, c) {
                    m = m.mul(&gens[l as usize]);
                }
                mats.push(m);
            }
        }
    }
    Representation::new(alg, "natural", vec![crate::graded::Parity::Even; 2], mats).expect("natural module")
}

pub fn small_uqsl2() -> Result<CatalogEntry, CatalogError> {
    let field = FieldDescriptor::cyclotomic(3).expect("order 3");
    let b = builder(&field);
    let alg = b.alg.clone();
    let one2 = alg.unit_tensor(2);
    let tmul = |x: &Tensor, y: &Tensor| alg.tensor_mul(x, y).expect("rank 2");
    let e = |a, bb, c| alg.basis(index(a, bb, c));
    let t = |x: &Element, y: &Element| Tensor::from_elements(&[x, y]);
    let k_inv = e(0, 0, 2);
    let de = t(&e(1, 0, 0), &e(0, 0, 1)).add(&t(&alg.one(), &e(1, 0, 0)));
    let df = t(&e(0, 1, 0), &alg.one()).add(&t(&k_inv, &e(0, 1, 0)));
    let dk = t(&e(0, 0, 1), &e(0, 0, 1));
    let se = alg.mul(&e(1, 0, 0), &k_inv).scale(&Scalar::from_int(&field, -1));
    let sf = alg.mul(&e(0, 0, 1), &e(0, 1, 0)).scale(&Scalar::from_int(&field, -1));
    let sk = k_inv.clone();
    let pow_e = |x: &Element, n: usize| (0..n).fold(alg.one(), |acc, _| alg.mul(&acc, x));
    let mut coproduct = Vec::new();
    let mut antipode = Vec::new();
    let mut counit = Vec::new();
    for a in 0..L {
        for bb in 0..L {
            for c in 0..L {
                let d = tmul(&tmul(&pow_t(tmul, &de, a, &one2), &pow_t(tmul, &df, bb, &one2)), &pow_t(tmul, &dk, c, &one2));
                coproduct.push(d);
                antipode.push(alg.mul_all(&[&pow_e(&sk, c), &pow_e(&sf, bb), &pow_e(&se, a)]));
                counit.push(if a == 0 && bb == 0 { "1" } else { "0" });
            }
        }
    }
    let r = r_matrix(&b);
    let antipode = b.endo(antipode);
    // R⁻¹ = (S⊗1)R in a Hopf algebra
    let r_inv = alg.apply_on_legs(&r, &[(0, &antipode)]).expect("rank 2");
    let parts = Parts {
        algebra: alg.clone(),
        coproduct: b.map(2, coproduct),
        counit: b.counit(&counit),
        antipode,
        phi: alg.unit_tensor(3),
        phi_inv: Some(alg.unit_tensor(3)),
        alpha: alg.one(),
        beta: alg.one(),
        r: Some(r),
        r_inv: Some(r_inv),
    };
    let h = QuasiHopf::new(parts)?;
    let trivial = b.character("trivial", &counit);
    Ok(CatalogEntry {
        name: "small-uqsl2".into(),
        notes: "small quantum group u_q(sl2) at a primitive cube root of unity q = z".into(),
        twistors: vec![Twistor::identity(&h)],
        representations: vec![trivial, natural_rep(&b)],
        structure: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedBasis;

    #[test]
    fn algebra_has_dimension_27() {
        let e = small_uqsl2().unwrap();
        let alg = e.structure.algebra();
        assert_eq!(alg.dim(), 27);
        let k = alg.basis(index(0, 0, 1));
        assert_eq!(alg.mul_all(&[&k, &k, &k]), alg.one());
    }

    #[test]
    fn full_verifier_passes() {
        let e = small_uqsl2().unwrap();
        let rep = e.structure.verify_all();
        assert!(rep.passed(), "{rep}");
        assert!(rep.get("hexagon-left").is_some() && rep.get("quasi-ybe").is_some());
    }
}
