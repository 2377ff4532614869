use proptest::prelude::*;

use qhopf::catalog::load_builtin;
use qhopf::graded::{Element, GradedBasis, Tensor};
use qhopf::quasihopf::QuasiHopf;
use qhopf::scalars::{parse_scalar, FieldDescriptor, Scalar};

fn cyclo(a: i64, b: i64, den: i64) -> Scalar {
    let f = FieldDescriptor::cyclotomic(3).unwrap();
    let z = Scalar::generator(&f).unwrap();
    let num = &Scalar::from_int(&f, a) + &(&Scalar::from_int(&f, b) * &z);
    num.try_div(&Scalar::from_int(&f, den)).unwrap()
}

fn ratfun(coeffs: &[i64], den_shift: i64) -> Scalar {
    let f = FieldDescriptor::rational_functions("c").unwrap();
    let c = Scalar::generator(&f).unwrap();
    let mut num = Scalar::zero(&f);
    for (k, &a) in coeffs.iter().enumerate() {
        num = &num + &(&Scalar::from_int(&f, a) * &c.pow(k as i64).unwrap());
    }
    let den = &c + &Scalar::from_int(&f, den_shift);
    num.try_div(&den).unwrap()
}

fn small() -> impl Strategy<Value = i64> {
    -6i64..=6
}

fn element(h: &QuasiHopf, coeffs: &[i64]) -> Element {
    let alg = h.algebra();
    let mut x = Element::zero();
    for (i, &c) in coeffs.iter().enumerate().take(alg.dim()) {
        x = x.add(&alg.basis(i).scale(&alg.scalar(c)));
    }
    x
}

fn tensor2(h: &QuasiHopf, coeffs: &[i64]) -> Tensor {
    let alg = h.algebra();
    let d = alg.dim();
    let mut t = Tensor::zero(2);
    for (n, &c) in coeffs.iter().enumerate().take(d * d) {
        let x = alg.basis(n / d).scale(&alg.scalar(c));
        t = t.add(&Tensor::from_elements(&[&x, &alg.basis(n % d)]));
    }
    t
}

proptest! {
    #[test]
    fn cyclotomic_field_axioms(a in small(), b in small(), c in small(), d in small(), e in small(), den in 1i64..5) {
        let x = cyclo(a, b, den);
        let y = cyclo(c, d, 1);
        let z = cyclo(e, a, 2);
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        prop_assert_eq!(parse_scalar(&x.to_string(), &f).unwrap(), x);
    }

    #[test]
    fn rational_function_round_trip(coeffs in prop::collection::vec(small(), 1..4), shift in 1i64..4) {
        let x = ratfun(&coeffs, shift);
        let f = FieldDescriptor::rational_functions("c").unwrap();
        prop_assert_eq!(parse_scalar(&x.to_string(), &f).unwrap(), x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_parse_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let f = FieldDescriptor::Rationals;
        let x = Scalar::fraction(&f, n, d);
        prop_assert_eq!(parse_scalar(&x.to_string(), &f).unwrap(), x);
    }

    #[test]
    fn graded_tensor_product_is_associative(
        xs in prop::collection::vec(small(), 16),
        ys in prop::collection::vec(small(), 16),
        zs in prop::collection::vec(small(), 16),
        which in 0usize..2,
    ) {
        let h = load_builtin(["grassmann-theta", "sweedler-h4"][which]).unwrap().structure;
        let (x, y, z) = (tensor2(&h, &xs), tensor2(&h, &ys), tensor2(&h, &zs));
        prop_assert_eq!(h.tmul(&h.tmul(&x, &y), &z), h.tmul(&x, &h.tmul(&y, &z)));
    }

    #[test]
    fn coproduct_is_multiplicative(xs in prop::collection::vec(small(), 4), ys in prop::collection::vec(small(), 4)) {
        for name in ["grassmann-theta", "sweedler-twisted"] {
            let h = load_builtin(name).unwrap().structure;
            let (x, y) = (element(&h, &xs), element(&h, &ys));
            prop_assert_eq!(h.delta(&h.mul(&x, &y)), h.tmul(&h.delta(&x), &h.delta(&y)));
        }
    }

    #[test]
    fn transposition_is_an_algebra_map_on_super_tensors(
        xs in prop::collection::vec(small(), 4),
        ys in prop::collection::vec(small(), 4),
    ) {
        let h = load_builtin("grassmann-theta").unwrap().structure;
        let alg = h.algebra();
        let (x, y) = (tensor2(&h, &xs), tensor2(&h, &ys));
        prop_assert_eq!(alg.transpose(&h.tmul(&x, &y)), h.tmul(&alg.transpose(&x), &alg.transpose(&y)));
    }

    #[test]
    fn leg_permutations_compose(
        coeffs in prop::collection::vec(small(), 8),
    ) {
        let h = load_builtin("grassmann-theta").unwrap().structure;
        let alg = h.algebra();
        let mut t = Tensor::zero(3);
        for (n, &c) in coeffs.iter().enumerate() {
            let legs = [alg.basis(n >> 2 & 1), alg.basis(n >> 1 & 1), alg.basis(n & 1).scale(&alg.scalar(c))];
            t = t.add(&Tensor::from_elements(&[&legs[0], &legs[1], &legs[2]]));
        }
        // a 3-cycle applied three times is the identity; 213 is an involution
        let c = h.permuted(&h.permuted(&h.permuted(&t, "231"), "231"), "231");
        prop_assert_eq!(c, t.clone());
        prop_assert_eq!(h.permuted(&h.permuted(&t, "213"), "213"), t.clone());
        prop_assert_eq!(h.permuted(&t, "123"), t);
    }
}
