//! Exact coefficient fields.
//!
//! Every identity in the engine is decided by an exact zero test, so scalars
//! are kept in a canonical form where equal values have equal
//! representations:
//!
//! * rationals are reduced fractions,
//! * cyclotomic elements are polynomials in the root `z` reduced modulo the
//!   cyclotomic polynomial of the chosen order,
//! * rational functions in one indeterminate are `q^k * N(q) / D(q)` with
//!   `N(0) != 0`, `D(0) != 0`, `gcd(N, D) = 1` and `D` monic.

mod parse;
pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::{parse_scalar, ParseScalarError};
use poly::{cyclotomic_poly, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch {
        left: FieldDescriptor,
        right: FieldDescriptor,
    },
    #[error("not invertible")]
    NotInvertible,
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
}

/// Which exact field the coefficients live in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDescriptor {
    Rationals,
    /// `Q(z)` with `z` a primitive root of unity of the given order.
    Cyclotomic(u32),
    /// `Q(q)` for the named indeterminate.
    RationalFunctions(Arc<str>),
}

impl FieldDescriptor {
    pub fn cyclotomic(order: u32) -> Result<Self, ScalarError> {
        if order == 0 {
            return Err(ScalarError::InvalidField(
                "cyclotomic order must be at least 1".into(),
            ));
        }
        Ok(Self::Cyclotomic(order))
    }

    pub fn rational_functions(var: &str) -> Result<Self, ScalarError> {
        let mut chars = var.chars();
        let valid = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(ScalarError::InvalidField(format!(
                "indeterminate name {var:?} is not an identifier"
            )));
        }
        Ok(Self::RationalFunctions(var.into()))
    }

    /// Name of the generator token accepted by the parser, if any.
    pub fn generator_name(&self) -> Option<&str> {
        match self {
            Self::Rationals => None,
            Self::Cyclotomic(_) => Some("z"),
            Self::RationalFunctions(v) => Some(v),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => write!(f, "rationals"),
            Self::Cyclotomic(n) => write!(f, "cyclotomic({n})"),
            Self::RationalFunctions(v) => write!(f, "rational-functions({v})"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "rationals" {
            return Ok(Self::Rationals);
        }
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .map(str::trim)
        };
        if let Some(n) = inner("cyclotomic") {
            let order = n
                .parse::<u32>()
                .map_err(|_| ScalarError::InvalidField(s.to_string()))?;
            return Self::cyclotomic(order);
        }
        if let Some(v) = inner("rational-functions") {
            return Self::rational_functions(v);
        }
        Err(ScalarError::InvalidField(s.to_string()))
    }
}

fn cyclotomic_modulus(order: u32) -> Arc<QPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<QPoly>>>> = OnceLock::new();
    let mut cache = CACHE
        .get_or_init(Default::default)
        .lock()
        .expect("modulus cache poisoned");
    cache
        .entry(order)
        .or_insert_with(|| Arc::new(cyclotomic_poly(order)))
        .clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Cyclotomic {
        order: u32,
        value: QPoly,
    },
    RationalFunction {
        var: Arc<str>,
        shift: i64,
        num: QPoly,
        den: QPoly,
    },
}

/// An exact field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero(field: &FieldDescriptor) -> Self {
        Self::from_rational(field, BigRational::zero())
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_int(field: &FieldDescriptor, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn from_rational(field: &FieldDescriptor, c: BigRational) -> Self {
        match field {
            FieldDescriptor::Rationals => Self(Repr::Rational(c)),
            FieldDescriptor::Cyclotomic(order) => Self(Repr::Cyclotomic {
                order: *order,
                value: QPoly::constant(c),
            }),
            FieldDescriptor::RationalFunctions(var) => Self(Repr::RationalFunction {
                var: var.clone(),
                shift: 0,
                num: QPoly::constant(c),
                den: QPoly::one(),
            }),
        }
    }

    /// `num / den` as a rational constant in `field`.
    pub fn fraction(field: &FieldDescriptor, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(field, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The generator `z` or `q` of the field; `None` for the rationals.
    pub fn generator(field: &FieldDescriptor) -> Option<Self> {
        match field {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Cyclotomic(order) => Some(Self::cyclotomic(*order, QPoly::monomial(1))),
            FieldDescriptor::RationalFunctions(var) => Some(Self(Repr::RationalFunction {
                var: var.clone(),
                shift: 1,
                num: QPoly::one(),
                den: QPoly::one(),
            })),
        }
    }

    /// The cyclotomic element represented by `value`, reduced modulo the
    /// cyclotomic polynomial.
    pub fn cyclotomic(order: u32, value: QPoly) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        let modulus = cyclotomic_modulus(order);
        Self(Repr::Cyclotomic {
            order,
            value: value.rem(&modulus),
        })
    }

    /// The rational function `var^shift * num / den`, brought to canonical
    /// form. Fails when `den` is zero.
    pub fn rational_function(
        var: &str,
        shift: i64,
        num: QPoly,
        den: QPoly,
    ) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::NotInvertible);
        }
        Ok(Self(normalize_ratfunc(var.into(), shift, num, den)))
    }

    pub fn field(&self) -> FieldDescriptor {
        match &self.0 {
            Repr::Rational(_) => FieldDescriptor::Rationals,
            Repr::Cyclotomic { order, .. } => FieldDescriptor::Cyclotomic(*order),
            Repr::RationalFunction { var, .. } => FieldDescriptor::RationalFunctions(var.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(c) => c.is_zero(),
            Repr::Cyclotomic { value, .. } => value.is_zero(),
            Repr::RationalFunction { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(c) => c.is_one(),
            Repr::Cyclotomic { value, .. } => value.is_one(),
            Repr::RationalFunction { shift, num, den, .. } => {
                *shift == 0 && num.is_one() && den.is_one()
            }
        }
    }

    /// The value as a rational number, when it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Rational(c) => Some(c.clone()),
            Repr::Cyclotomic { value, .. } => match value.degree() {
                None => Some(BigRational::zero()),
                Some(0) => Some(value.coeff(0)),
                _ => None,
            },
            Repr::RationalFunction { shift, num, den, .. } => {
                if num.is_zero() {
                    Some(BigRational::zero())
                } else if *shift == 0 && num.degree() == Some(0) && den.is_one() {
                    Some(num.coeff(0))
                } else {
                    None
                }
            }
        }
    }

    /// Canonical representation of a cyclotomic element.
    pub fn cyclotomic_parts(&self) -> Option<(u32, &QPoly)> {
        match &self.0 {
            Repr::Cyclotomic { order, value } => Some((*order, value)),
            _ => None,
        }
    }

    /// `(shift, numerator, denominator)` of a rational function.
    pub fn rational_function_parts(&self) -> Option<(i64, &QPoly, &QPoly)> {
        match &self.0 {
            Repr::RationalFunction { shift, num, den, .. } => Some((*shift, num, den)),
            _ => None,
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), ScalarError> {
        let same = match (&self.0, &other.0) {
            (Repr::Rational(_), Repr::Rational(_)) => true,
            (Repr::Cyclotomic { order: a, .. }, Repr::Cyclotomic { order: b, .. }) => a == b,
            (Repr::RationalFunction { var: a, .. }, Repr::RationalFunction { var: b, .. }) => {
                a == b
            }
            _ => false,
        };
        if same {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch {
                left: self.field(),
                right: other.field(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_same(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Self(Repr::Rational(a + b)),
            (Repr::Cyclotomic { order, value: a }, Repr::Cyclotomic { value: b, .. }) => {
                Self(Repr::Cyclotomic {
                    order: *order,
                    value: a.add(b),
                })
            }
            (
                Repr::RationalFunction {
                    var,
                    shift: s1,
                    num: n1,
                    den: d1,
                },
                Repr::RationalFunction {
                    shift: s2,
                    num: n2,
                    den: d2,
                    ..
                },
            ) => {
                if n1.is_zero() {
                    return Ok(other.clone());
                }
                if n2.is_zero() {
                    return Ok(self.clone());
                }
                let low = (*s1).min(*s2);
                let a = n1.mul(d2).shift_up((*s1 - low) as usize);
                let b = n2.mul(d1).shift_up((*s2 - low) as usize);
                Self(normalize_ratfunc(var.clone(), low, a.add(&b), d1.mul(d2)))
            }
            _ => unreachable!("field checked above"),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_same(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Self(Repr::Rational(a * b)),
            (Repr::Cyclotomic { order, value: a }, Repr::Cyclotomic { value: b, .. }) => {
                Self::cyclotomic(*order, a.mul(b))
            }
            (
                Repr::RationalFunction {
                    var,
                    shift: s1,
                    num: n1,
                    den: d1,
                },
                Repr::RationalFunction {
                    shift: s2,
                    num: n2,
                    den: d2,
                    ..
                },
            ) => Self(normalize_ratfunc(var.clone(), s1 + s2, n1.mul(n2), d1.mul(d2))),
            _ => unreachable!("field checked above"),
        })
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::NotInvertible);
        }
        Ok(match &self.0 {
            Repr::Rational(a) => Self(Repr::Rational(a.recip())),
            Repr::Cyclotomic { order, value } => {
                let modulus = cyclotomic_modulus(*order);
                let inv = value
                    .inv_mod(&modulus)
                    .ok_or(ScalarError::NotInvertible)?;
                Self(Repr::Cyclotomic {
                    order: *order,
                    value: inv,
                })
            }
            Repr::RationalFunction {
                var,
                shift,
                num,
                den,
            } => Self(normalize_ratfunc(var.clone(), -shift, den.clone(), num.clone())),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_same(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        Self(match &self.0 {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Cyclotomic { order, value } => Repr::Cyclotomic {
                order: *order,
                value: value.neg(),
            },
            Repr::RationalFunction {
                var,
                shift,
                num,
                den,
            } => Repr::RationalFunction {
                var: var.clone(),
                shift: *shift,
                num: num.neg(),
                den: den.clone(),
            },
        })
    }

    /// Integer power; negative exponents need an invertible base.
    pub fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut result = Self::one(&self.field());
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(result)
    }

    /// Multiply by `(-1)^odd`.
    pub fn signed(self, odd: bool) -> Self {
        if odd {
            self.neg()
        } else {
            self
        }
    }
}

/// Bring `var^shift * num / den` to canonical form.
fn normalize_ratfunc(var: Arc<str>, shift: i64, num: QPoly, den: QPoly) -> Repr {
    if num.is_zero() {
        return Repr::RationalFunction {
            var,
            shift: 0,
            num: QPoly::zero(),
            den: QPoly::one(),
        };
    }
    let vn = num.valuation().unwrap_or(0);
    let vd = den.valuation().unwrap_or(0);
    let mut num = num.shift_down(vn);
    let mut den = den.shift_down(vd);
    let shift = shift + vn as i64 - vd as i64;
    let g = num.gcd(&den);
    if !g.is_one() {
        num = num.div_rem(&g).0;
        den = den.div_rem(&g).0;
    }
    let lead = den.leading().cloned().expect("nonzero denominator");
    if !lead.is_one() {
        let c = lead.recip();
        num = num.scale(&c);
        den = den.scale(&c);
    }
    Repr::RationalFunction {
        var,
        shift,
        num,
        den,
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar addition")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar subtraction")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar multiplication")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

fn write_rational_coeff(
    f: &mut fmt::Formatter<'_>,
    c: &BigRational,
    first: bool,
    monomial: Option<String>,
) -> fmt::Result {
    let negative = c.is_negative();
    let abs = c.abs();
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    match monomial {
        None => write!(f, "{abs}"),
        Some(m) if abs.is_one() => write!(f, "{m}"),
        Some(m) => write!(f, "{abs}*{m}"),
    }
}

/// Render `Σ c_k var^(k + shift)` with the highest exponent first.
fn write_laurent(f: &mut fmt::Formatter<'_>, p: &QPoly, var: &str, shift: i64) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = k as i64 + shift;
        let monomial = match e {
            0 => None,
            1 => Some(var.to_string()),
            _ => Some(format!("{var}^{e}")),
        };
        write_rational_coeff(f, c, first, monomial)?;
        first = false;
    }
    Ok(())
}

fn term_count(p: &QPoly) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(c) => write!(f, "{c}"),
            Repr::Cyclotomic { value, .. } => write_laurent(f, value, "z", 0),
            Repr::RationalFunction {
                var,
                shift,
                num,
                den,
            } => {
                if den.is_one() {
                    write_laurent(f, num, var, *shift)
                } else {
                    write!(f, "(")?;
                    write_laurent(f, num, var, *shift)?;
                    write!(f, ")/(")?;
                    write_laurent(f, den, var, 0)?;
                    write!(f, ")")
                }
            }
        }
    }
}

impl Scalar {
    /// Whether the rendered form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        match &self.0 {
            Repr::Rational(_) => false,
            Repr::Cyclotomic { value, .. } => term_count(value) > 1,
            Repr::RationalFunction { num, den, .. } => term_count(num) > 1 || !den.is_one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_field() -> FieldDescriptor {
        FieldDescriptor::rational_functions("q").unwrap()
    }

    #[test]
    fn rational_sum() {
        let f = FieldDescriptor::Rationals;
        let a = Scalar::fraction(&f, 1, 2);
        let b = Scalar::fraction(&f, 1, 3);
        assert_eq!(&a + &b, Scalar::fraction(&f, 5, 6));
        assert_eq!((&a + &b).to_string(), "5/6");
    }

    #[test]
    fn monomial_inverse() {
        let f = q_field();
        let q = Scalar::generator(&f).unwrap();
        let inv = q.inv().unwrap();
        assert_eq!(inv.rational_function_parts().unwrap().0, -1);
        assert_eq!(inv.to_string(), "q^-1");
        assert!((&q * &inv).is_one());
    }

    #[test]
    fn cyclotomic_reduction_order_four() {
        let f = FieldDescriptor::cyclotomic(4).unwrap();
        let z = Scalar::generator(&f).unwrap();
        let z2 = &z * &z;
        assert_eq!(z2, Scalar::from_int(&f, -1));
        assert_eq!(&z * &z2, z.neg());
    }

    #[test]
    fn field_mismatch_and_division_by_zero() {
        let a = Scalar::one(&FieldDescriptor::Rationals);
        let b = Scalar::one(&FieldDescriptor::Cyclotomic(3));
        assert!(matches!(
            a.try_add(&b),
            Err(ScalarError::FieldMismatch { .. })
        ));
        let zero = Scalar::zero(&FieldDescriptor::Rationals);
        assert_eq!(zero.inv(), Err(ScalarError::NotInvertible));
        assert_eq!(
            Scalar::zero(&q_field()).inv(),
            Err(ScalarError::NotInvertible)
        );
    }

    #[test]
    fn ratfunc_canonical_form() {
        let f = q_field();
        let q = Scalar::generator(&f).unwrap();
        let one = Scalar::one(&f);
        // (q^2 - 1) / (2q - 2) = (q + 1) / 2
        let num = &(&q * &q) - &one;
        let den = &(&Scalar::from_int(&f, 2) * &q) - &Scalar::from_int(&f, 2);
        let v = num.try_div(&den).unwrap();
        let expected = &(&q + &one) * &Scalar::fraction(&f, 1, 2);
        assert_eq!(v, expected);
        let (shift, n, d) = v.rational_function_parts().unwrap();
        assert_eq!(shift, 0);
        assert!(d.is_one());
        assert_eq!(n, &QPoly::from_coeffs(vec![BigRational::new(1.into(), 2.into()); 2]));
    }

    #[test]
    fn ratfunc_parts_renormalize_to_themselves() {
        let f = q_field();
        let q = Scalar::generator(&f).unwrap();
        let x = (&(&q * &q) - &Scalar::from_int(&f, 3))
            .try_div(&(&q + &Scalar::from_int(&f, 5)))
            .unwrap()
            .try_mul(&q.inv().unwrap())
            .unwrap();
        let (s, n, d) = x.rational_function_parts().unwrap();
        let again = Scalar::rational_function("q", s, n.clone(), d.clone()).unwrap();
        assert_eq!(again, x);
        assert_eq!(again.rational_function_parts().unwrap().2.leading().unwrap(), &BigRational::one());
    }

    #[test]
    fn cyclotomic_inverse() {
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        let z = Scalar::generator(&f).unwrap();
        let x = &z + &Scalar::from_int(&f, 2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        // z^3 = 1
        assert!(z.pow(3).unwrap().is_one());
        assert_eq!(z.pow(-1).unwrap(), &(&z * &z) * &Scalar::one(&f));
    }

    #[test]
    fn field_descriptor_round_trip() {
        for s in ["rationals", "cyclotomic(3)", "rational-functions(q)"] {
            let d: FieldDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("cyclotomic(0)".parse::<FieldDescriptor>().is_err());
        assert!("rational-functions()".parse::<FieldDescriptor>().is_err());
        assert!("reals".parse::<FieldDescriptor>().is_err());
    }
}
