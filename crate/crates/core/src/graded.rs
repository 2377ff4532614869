//! ℤ₂-graded finite-dimensional algebras and sparse tensors over them.
//!
//! Basis tensors are multi-indices; every leg of a tensor lives in some
//! graded algebra with a distinguished basis (usually the structure algebra,
//! occasionally a matrix-unit algebra `End V`). Products and leg permutations
//! carry Koszul signs computed from the basis parities.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Add;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalars::{FieldDescriptor, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Whether the sign `(-1)^{self·other}` is negative.
    pub fn both_odd(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;

    // addition in ℤ₂
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "0",
            Parity::Odd => "1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("basis is empty")]
    EmptyBasis,
    #[error("unit index {0} out of range")]
    UnitOutOfRange(usize),
    #[error("the unit {0:?} must be even")]
    OddUnit(String),
    #[error("structure constant ({0}, {1}) -> {2} refers to a missing basis element")]
    IndexOutOfRange(usize, usize, usize),
    #[error("structure constant {left}·{right} -> {target} violates the grading")]
    ParityViolation {
        left: String,
        right: String,
        target: String,
    },
    #[error("unit law fails at {0:?}")]
    UnitLaw(String),
    #[error("associativity fails at ({0}·{1})·{2}")]
    NotAssociative(String, String, String),
    #[error("scalar belongs to {found}, algebra is over {expected}")]
    FieldMismatch {
        expected: FieldDescriptor,
        found: FieldDescriptor,
    },
    #[error("tensor ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid leg permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("leg {leg} out of range for a rank-{rank} tensor")]
    LegOutOfRange { leg: usize, rank: usize },
    #[error("only parity-preserving maps can be applied on tensor legs")]
    OddMap,
    #[error("legs {0} and {1} are not adjacent")]
    NonAdjacent(usize, usize),
    #[error("map source rank must be 1")]
    SourceRank,
    #[error("map has {found} images, algebra has dimension {expected}")]
    ImageCount { expected: usize, found: usize },
    #[error("image of {label:?} has rank {found}, expected {expected}")]
    ImageRank {
        label: String,
        expected: usize,
        found: usize,
    },
}

pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, value: Scalar) {
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &value;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Sparse element of an algebra: basis index → coefficient, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Element {
    coeffs: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(index: usize, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(index, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn add_term(&mut self, index: usize, c: Scalar) {
        accumulate(&mut self.coeffs, index, c);
    }

    pub fn coeff(&self, index: usize) -> Option<&Scalar> {
        self.coeffs.get(&index)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms().map(|(i, x)| (i, x * c)))
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c.neg())).collect(),
        }
    }

    pub fn to_tensor(&self) -> Tensor {
        Tensor::from_terms(1, self.terms().map(|(i, c)| (vec![i], c.clone())))
    }
}

/// Sparse rank-r tensor: multi-index → coefficient, no stored zeros.
/// Rank 0 is allowed and holds a single scalar under the empty index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    rank: usize,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl Tensor {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> Self {
        let mut t = Self::zero(rank);
        for (k, c) in terms {
            t.add_term(k, c);
        }
        t
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::from_terms(0, [(Vec::new(), c)])
    }

    pub fn add_term(&mut self, key: Vec<usize>, c: Scalar) {
        assert_eq!(key.len(), self.rank, "multi-index length differs from rank");
        accumulate(&mut self.coeffs, key, c);
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
        self.coeffs.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn coeff(&self, key: &[usize]) -> Option<&Scalar> {
        self.coeffs.get(key)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "tensor rank mismatch");
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k.to_vec(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "tensor rank mismatch");
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k.to_vec(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.rank, self.terms().map(|(k, x)| (k.to_vec(), x * c)))
    }

    pub fn neg(&self) -> Self {
        Self {
            rank: self.rank,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    /// Rank-1 tensor as an algebra element.
    pub fn to_element(&self) -> Element {
        assert_eq!(self.rank, 1, "only rank-1 tensors are elements");
        Element::from_terms(self.terms().map(|(k, c)| (k[0], c.clone())))
    }

    /// Value of a rank-0 tensor.
    pub fn to_scalar(&self, field: &FieldDescriptor) -> Scalar {
        assert_eq!(self.rank, 0, "only rank-0 tensors are scalars");
        self.coeffs
            .get(&Vec::new())
            .cloned()
            .unwrap_or_else(|| Scalar::zero(field))
    }

    /// Plain (sign-free) tensor product of basis-expanded factors.
    pub fn outer(factors: &[&Tensor]) -> Tensor {
        let rank = factors.iter().map(|t| t.rank).sum();
        let mut acc: Vec<(Vec<usize>, Scalar)> = Vec::new();
        let mut first = true;
        for t in factors {
            if first {
                acc = t.terms().map(|(k, c)| (k.to_vec(), c.clone())).collect();
                first = false;
                continue;
            }
            let mut next = Vec::with_capacity(acc.len() * t.len());
            for (k, c) in &acc {
                for (k2, c2) in t.terms() {
                    let mut key = k.clone();
                    key.extend_from_slice(k2);
                    next.push((key, c * c2));
                }
            }
            acc = next;
        }
        Tensor::from_terms(rank, acc)
    }

    pub fn from_elements(factors: &[&Element]) -> Tensor {
        let ts: Vec<Tensor> = factors.iter().map(|e| e.to_tensor()).collect();
        Tensor::outer(&ts.iter().collect::<Vec<_>>())
    }
}

/// A graded algebra with a distinguished basis, as seen by a tensor leg.
pub trait GradedBasis {
    fn dim(&self) -> usize;
    fn parity(&self, i: usize) -> Parity;
    /// Calls `f(k, c)` for every term `c·b_k` of `b_i b_j`.
    fn mul_basis(&self, i: usize, j: usize, f: &mut dyn FnMut(usize, &Scalar));
    fn basis_label(&self, i: usize) -> String;
}

/// Matrix units `E_rc` (index `r·n + c`) of `End V` for a graded space `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixUnits {
    field: FieldDescriptor,
    parities: Vec<Parity>,
    one: Scalar,
}

impl MatrixUnits {
    pub fn new(field: &FieldDescriptor, parities: Vec<Parity>) -> Self {
        Self {
            field: field.clone(),
            parities,
            one: Scalar::one(field),
        }
    }

    pub fn size(&self) -> usize {
        self.parities.len()
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn unit_index(&self, r: usize, c: usize) -> usize {
        r * self.size() + c
    }

    pub fn to_matrix(&self, e: &Element) -> Matrix {
        let n = self.size();
        let mut m = Matrix::zeros(&self.field, n, n);
        for (i, c) in e.terms() {
            m.set(i / n, i % n, c.clone());
        }
        m
    }

    pub fn from_matrix(&self, m: &Matrix) -> Element {
        let n = self.size();
        let mut e = Element::zero();
        for r in 0..n {
            for c in 0..n {
                e.add_term(r * n + c, m.get(r, c).clone());
            }
        }
        e
    }
}

impl GradedBasis for MatrixUnits {
    fn dim(&self) -> usize {
        self.size() * self.size()
    }

    fn parity(&self, i: usize) -> Parity {
        let n = self.size();
        self.parities[i / n] + self.parities[i % n]
    }

    fn mul_basis(&self, i: usize, j: usize, f: &mut dyn FnMut(usize, &Scalar)) {
        let n = self.size();
        if i % n == j / n {
            f((i / n) * n + j % n, &self.one);
        }
    }

    fn basis_label(&self, i: usize) -> String {
        let n = self.size();
        format!("E[{},{}]", i / n, i % n)
    }
}

/// Product of two tensors whose legs live in `legs[k]`; Koszul sign
/// `Σ_{i<j} [y_i][x_j]`.
pub fn tensor_mul_on(legs: &[&dyn GradedBasis], x: &Tensor, y: &Tensor) -> Result<Tensor, GradedError> {
    if x.rank != y.rank {
        return Err(GradedError::RankMismatch(x.rank, y.rank));
    }
    assert_eq!(legs.len(), x.rank, "one basis per leg");
    let rank = x.rank;
    let mut out = BTreeMap::new();
    let mut partial: Vec<(Vec<usize>, Scalar)> = Vec::new();
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            // sign: each y-leg i passes the x-legs j > i
            let mut odd = false;
            for i in 0..rank {
                if legs[i].parity(ky[i]).is_odd() {
                    for j in (i + 1)..rank {
                        if legs[j].parity(kx[j]).is_odd() {
                            odd = !odd;
                        }
                    }
                }
            }
            let c = (cx * cy).signed(odd);
            partial.clear();
            partial.push((Vec::with_capacity(rank), c));
            for l in 0..rank {
                let mut next = Vec::new();
                for (key, c) in &partial {
                    legs[l].mul_basis(kx[l], ky[l], &mut |k, v| {
                        let mut nk = key.clone();
                        nk.push(k);
                        next.push((nk, c * v));
                    });
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for (k, c) in partial.drain(..) {
                accumulate(&mut out, k, c);
            }
        }
    }
    Ok(Tensor { rank, coeffs: out })
}

fn validate_permutation(perm: &[usize], rank: usize) -> Result<(), GradedError> {
    let mut seen = vec![false; rank];
    if perm.len() != rank {
        return Err(GradedError::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= rank || seen[p] {
            return Err(GradedError::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Graded leg permutation: output slot `s` receives input leg `perm[s]`.
/// Every pair of legs whose order is reversed contributes `(-1)^{p·p'}`.
pub fn permute_on(legs: &[&dyn GradedBasis], x: &Tensor, perm: &[usize]) -> Result<Tensor, GradedError> {
    validate_permutation(perm, x.rank)?;
    let mut out = BTreeMap::new();
    for (k, c) in x.terms() {
        let mut odd = false;
        for s in 0..perm.len() {
            for t in (s + 1)..perm.len() {
                if perm[s] > perm[t]
                    && legs[perm[s]].parity(k[perm[s]]).both_odd(legs[perm[t]].parity(k[perm[t]]))
                {
                    odd = !odd;
                }
            }
        }
        let key: Vec<usize> = perm.iter().map(|&p| k[p]).collect();
        accumulate(&mut out, key, c.clone().signed(odd));
    }
    Ok(Tensor {
        rank: x.rank,
        coeffs: out,
    })
}

/// Merge adjacent legs `i, i+1` (both in `basis`) by multiplication.
pub fn merge_legs_on(basis: &dyn GradedBasis, x: &Tensor, i: usize, j: usize) -> Result<Tensor, GradedError> {
    if x.rank < 2 || j >= x.rank {
        return Err(GradedError::LegOutOfRange {
            leg: i.max(j),
            rank: x.rank,
        });
    }
    if j != i + 1 {
        return Err(GradedError::NonAdjacent(i, j));
    }
    let mut out = BTreeMap::new();
    for (k, c) in x.terms() {
        basis.mul_basis(k[i], k[j], &mut |m, v| {
            let mut key = Vec::with_capacity(x.rank - 1);
            key.extend_from_slice(&k[..i]);
            key.push(m);
            key.extend_from_slice(&k[j + 1..]);
            accumulate(&mut out, key, c * v);
        });
    }
    Ok(Tensor {
        rank: x.rank - 1,
        coeffs: out,
    })
}

/// A unital associative ℤ₂-graded algebra given by structure constants,
/// validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldDescriptor,
    labels: Vec<String>,
    parities: Vec<Parity>,
    unit: usize,
    table: Vec<Vec<Element>>,
    index: HashMap<String, usize>,
}

impl GradedBasis for Algebra {
    fn dim(&self) -> usize {
        self.labels.len()
    }

    fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    fn mul_basis(&self, i: usize, j: usize, f: &mut dyn FnMut(usize, &Scalar)) {
        for (k, c) in self.table[i][j].terms() {
            f(k, c);
        }
    }

    fn basis_label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
}

impl Algebra {
    /// Build and validate (grading, unit law, associativity).
    pub fn new(
        field: FieldDescriptor,
        labels: Vec<String>,
        parities: Vec<Parity>,
        unit: usize,
        mul: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self, GradedError> {
        let d = labels.len();
        if d == 0 {
            return Err(GradedError::EmptyBasis);
        }
        assert_eq!(parities.len(), d, "one parity per basis label");
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GradedError::DuplicateLabel(l.clone()));
            }
        }
        if unit >= d {
            return Err(GradedError::UnitOutOfRange(unit));
        }
        if parities[unit].is_odd() {
            return Err(GradedError::OddUnit(labels[unit].clone()));
        }
        let mut table = vec![vec![Element::zero(); d]; d];
        for (i, j, k, c) in mul {
            if i >= d || j >= d || k >= d {
                return Err(GradedError::IndexOutOfRange(i, j, k));
            }
            if c.field() != field {
                return Err(GradedError::FieldMismatch {
                    expected: field,
                    found: c.field(),
                });
            }
            table[i][j].add_term(k, c);
        }
        let alg = Self {
            field,
            labels,
            parities,
            unit,
            table,
            index,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), GradedError> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for (k, _) in self.table[i][j].terms() {
                    if self.parities[k] != self.parities[i] + self.parities[j] {
                        return Err(GradedError::ParityViolation {
                            left: self.labels[i].clone(),
                            right: self.labels[j].clone(),
                            target: self.labels[k].clone(),
                        });
                    }
                }
            }
        }
        let one = Scalar::one(&self.field);
        for i in 0..d {
            let b = Element::term(i, one.clone());
            if self.table[self.unit][i] != b || self.table[i][self.unit] != b {
                return Err(GradedError::UnitLaw(self.labels[i].clone()));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i][j];
                for l in 0..d {
                    let left = self.mul(ij, &self.basis(l));
                    let right = self.mul(&self.basis(i), &self.table[j][l]);
                    if left != right {
                        return Err(GradedError::NotAssociative(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[l].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    /// Structure constants `b_i b_j`.
    pub fn product(&self, i: usize, j: usize) -> &Element {
        &self.table[i][j]
    }

    pub fn one(&self) -> Element {
        self.basis(self.unit)
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::term(i, Scalar::one(&self.field))
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        Scalar::from_int(&self.field, n)
    }

    pub fn unit_tensor(&self, rank: usize) -> Tensor {
        Tensor::from_terms(rank, [(vec![self.unit; rank], Scalar::one(&self.field))])
    }

    fn legs(&self, rank: usize) -> Vec<&dyn GradedBasis> {
        vec![self as &dyn GradedBasis; rank]
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let ab = a * b;
                for (k, c) in self.table[i][j].terms() {
                    out.add_term(k, &ab * c);
                }
            }
        }
        out
    }

    /// Left-to-right product of several elements.
    pub fn mul_all(&self, factors: &[&Element]) -> Element {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Common parity of a homogeneous element; zero counts as even.
    pub fn parity_of(&self, x: &Element) -> Option<Parity> {
        let mut found = None;
        for (i, _) in x.terms() {
            match found {
                None => found = Some(self.parities[i]),
                Some(p) if p != self.parities[i] => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    pub fn tensor_parity(&self, key: &[usize]) -> Parity {
        key.iter()
            .fold(Parity::Even, |acc, &i| acc + self.parities[i])
    }

    /// Whether every term of `t` is even.
    pub fn is_even_tensor(&self, t: &Tensor) -> bool {
        t.terms().all(|(k, _)| !self.tensor_parity(k).is_odd())
    }

    /// (even part, odd part).
    pub fn split(&self, x: &Element) -> (Element, Element) {
        let mut even = Element::zero();
        let mut odd = Element::zero();
        for (i, c) in x.terms() {
            if self.parities[i].is_odd() {
                odd.add_term(i, c.clone());
            } else {
                even.add_term(i, c.clone());
            }
        }
        (even, odd)
    }

    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        self.mul(x, y).sub(&self.mul(y, x))
    }

    pub fn tensor_mul(&self, x: &Tensor, y: &Tensor) -> Result<Tensor, GradedError> {
        tensor_mul_on(&self.legs(x.rank), x, y)
    }

    /// Product of a sequence of equal-rank tensors.
    pub fn tensor_mul_all(&self, factors: &[&Tensor]) -> Result<Tensor, GradedError> {
        let mut iter = factors.iter();
        let first = iter.next().expect("at least one factor");
        let mut acc = (*first).clone();
        for f in iter {
            acc = self.tensor_mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn permute(&self, x: &Tensor, perm: &[usize]) -> Result<Tensor, GradedError> {
        permute_on(&self.legs(x.rank), x, perm)
    }

    /// Graded flip of a rank-2 tensor.
    pub fn transpose(&self, x: &Tensor) -> Tensor {
        self.permute(x, &[1, 0]).expect("rank-2 tensor")
    }

    /// Place `x` into a rank-`rank` tensor with leg `k` at slot `slots[k]`
    /// and the unit elsewhere (leg notation such as `R₁₃`).
    pub fn embed(&self, x: &Tensor, rank: usize, slots: &[usize]) -> Result<Tensor, GradedError> {
        if slots.len() != x.rank || slots.iter().any(|&s| s >= rank) {
            return Err(GradedError::InvalidPermutation(slots.to_vec()));
        }
        let padded = Tensor::outer(&[x, &self.unit_tensor(rank - x.rank)]);
        let mut perm = vec![usize::MAX; rank];
        for (k, &s) in slots.iter().enumerate() {
            if perm[s] != usize::MAX {
                return Err(GradedError::InvalidPermutation(slots.to_vec()));
            }
            perm[s] = k;
        }
        let mut next = x.rank;
        for p in perm.iter_mut() {
            if *p == usize::MAX {
                *p = next;
                next += 1;
            }
        }
        self.permute(&padded, &perm)
    }

    /// Apply even maps on the indicated legs (identity elsewhere).
    pub fn apply_on_legs(&self, x: &Tensor, maps: &[(usize, &LinearMap)]) -> Result<Tensor, GradedError> {
        let mut per_leg: Vec<Option<&LinearMap>> = vec![None; x.rank];
        for &(leg, m) in maps {
            if leg >= x.rank {
                return Err(GradedError::LegOutOfRange { leg, rank: x.rank });
            }
            if !m.parity_preserving {
                return Err(GradedError::OddMap);
            }
            per_leg[leg] = Some(m);
        }
        let rank: usize = per_leg
            .iter()
            .map(|m| m.map_or(1, |m| m.target_rank))
            .sum();
        let mut out = BTreeMap::new();
        for (k, c) in x.terms() {
            let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::with_capacity(rank), c.clone())];
            for (l, m) in per_leg.iter().enumerate() {
                match m {
                    None => {
                        for (key, _) in partial.iter_mut() {
                            key.push(k[l]);
                        }
                    }
                    Some(m) => {
                        let img = &m.images[k[l]];
                        let mut next = Vec::with_capacity(partial.len() * img.len());
                        for (key, c) in &partial {
                            for (ik, ic) in img.terms() {
                                let mut nk = key.clone();
                                nk.extend_from_slice(ik);
                                next.push((nk, c * ic));
                            }
                        }
                        partial = next;
                    }
                }
            }
            for (key, c) in partial {
                accumulate(&mut out, key, c);
            }
        }
        Ok(Tensor { rank, coeffs: out })
    }

    pub fn merge_legs(&self, x: &Tensor, i: usize, j: usize) -> Result<Tensor, GradedError> {
        merge_legs_on(self, x, i, j)
    }

    /// Multiply all legs together left to right: `m·(m⊗1)·…`.
    pub fn collapse(&self, x: &Tensor) -> Element {
        let mut t = x.clone();
        while t.rank > 1 {
            t = self.merge_legs(&t, 0, 1).expect("adjacent legs");
        }
        if t.rank == 0 {
            return Element::from_terms(t.terms().map(|(_, c)| (self.unit, c.clone())));
        }
        t.to_element()
    }

    /// Left multiplication `b ↦ x b` as a linear map.
    pub fn left_mul_map(&self, x: &Element) -> LinearMap {
        let images = (0..self.dim())
            .map(|i| self.mul(x, &self.basis(i)).to_tensor())
            .collect();
        LinearMap::new(self, 1, images).expect("well-formed images")
    }

    /// Right multiplication `b ↦ b x` as a linear map.
    pub fn right_mul_map(&self, x: &Element) -> LinearMap {
        let images = (0..self.dim())
            .map(|i| self.mul(&self.basis(i), x).to_tensor())
            .collect();
        LinearMap::new(self, 1, images).expect("well-formed images")
    }

    pub fn identity_map(&self) -> LinearMap {
        let images = (0..self.dim()).map(|i| self.basis(i).to_tensor()).collect();
        LinearMap::new(self, 1, images).expect("well-formed images")
    }

    /// Elements as coefficient vectors over the basis.
    pub fn to_vector(&self, x: &Element) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(&self.field); self.dim()];
        for (i, c) in x.terms() {
            v[i] = c.clone();
        }
        v
    }

    pub fn from_vector(&self, v: &[Scalar]) -> Element {
        Element::from_terms(v.iter().cloned().enumerate())
    }

    /// Flat index of a multi-index (row-major), used for linear solves.
    pub fn flat_index(&self, key: &[usize]) -> usize {
        key.iter().fold(0, |acc, &i| acc * self.dim() + i)
    }

    pub fn unflatten(&self, mut idx: usize, rank: usize) -> Vec<usize> {
        let d = self.dim();
        let mut key = vec![0; rank];
        for slot in key.iter_mut().rev() {
            *slot = idx % d;
            idx /= d;
        }
        key
    }

    /// Two-sided inverse of a tensor, found by solving `x·t = 1` and
    /// checking `t·x = 1`.
    pub fn tensor_inverse(&self, t: &Tensor) -> Option<Tensor> {
        let rank = t.rank;
        let n = self.dim().pow(rank as u32);
        let mut m = Matrix::zeros(&self.field, n, n);
        for col in 0..n {
            let e = Tensor::from_terms(rank, [(self.unflatten(col, rank), Scalar::one(&self.field))]);
            let prod = self.tensor_mul(&e, t).ok()?;
            for (k, c) in prod.terms() {
                m.set(self.flat_index(k), col, c.clone());
            }
        }
        let mut rhs = vec![Scalar::zero(&self.field); n];
        rhs[self.flat_index(&vec![self.unit; rank])] = Scalar::one(&self.field);
        let (x, _) = m.solve(&rhs)?;
        let inv = Tensor::from_terms(
            rank,
            x.into_iter().enumerate().map(|(i, c)| (self.unflatten(i, rank), c)),
        );
        let check = self.tensor_mul(t, &inv).ok()?;
        (check == self.unit_tensor(rank)).then_some(inv)
    }

    pub fn render_element(&self, x: &Element) -> String {
        render_terms(x.terms().map(|(i, c)| (self.labels[i].clone(), c)))
    }

    pub fn render_tensor(&self, x: &Tensor) -> String {
        render_tensor_on(&self.legs(x.rank), x)
    }
}

pub fn render_tensor_on(legs: &[&dyn GradedBasis], x: &Tensor) -> String {
    render_terms(x.terms().map(|(k, c)| {
        let label = if k.is_empty() {
            "1".to_string()
        } else {
            k.iter()
                .enumerate()
                .map(|(l, &i)| legs[l].basis_label(i))
                .collect::<Vec<_>>()
                .join("⊗")
        };
        (label, c)
    }))
}

fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        let coeff = if c.is_compound() {
            format!("({c})")
        } else {
            c.to_string()
        };
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if c.is_one() {
            out.push_str(&label);
        } else if label == "1" {
            out.push_str(&coeff);
        } else {
            out.push_str(&format!("{coeff}·{label}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Linear map from the algebra (rank 1) to rank-`target_rank` tensors,
/// stored as the images of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    target_rank: usize,
    images: Vec<Tensor>,
    parity_preserving: bool,
}

impl LinearMap {
    pub fn new(alg: &Algebra, target_rank: usize, images: Vec<Tensor>) -> Result<Self, GradedError> {
        if images.len() != alg.dim() {
            return Err(GradedError::ImageCount {
                expected: alg.dim(),
                found: images.len(),
            });
        }
        let mut parity_preserving = true;
        for (i, img) in images.iter().enumerate() {
            if img.rank != target_rank {
                return Err(GradedError::ImageRank {
                    label: alg.label(i).to_string(),
                    expected: target_rank,
                    found: img.rank,
                });
            }
            for (k, c) in img.terms() {
                if c.field() != *alg.field() {
                    return Err(GradedError::FieldMismatch {
                        expected: alg.field().clone(),
                        found: c.field(),
                    });
                }
                if alg.tensor_parity(k) != alg.parity(i) {
                    parity_preserving = false;
                }
            }
        }
        Ok(Self {
            target_rank,
            images,
            parity_preserving,
        })
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn is_parity_preserving(&self) -> bool {
        self.parity_preserving
    }

    pub fn image(&self, i: usize) -> &Tensor {
        &self.images[i]
    }

    pub fn images(&self) -> &[Tensor] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Tensor {
        let mut out = Tensor::zero(self.target_rank);
        for (i, c) in x.terms() {
            for (k, v) in self.images[i].terms() {
                out.add_term(k.to_vec(), c * v);
            }
        }
        out
    }

    /// For rank-1 targets: the image as an element.
    pub fn apply_element(&self, x: &Element) -> Element {
        self.apply(x).to_element()
    }

    /// Matrix of a 1→1 map (column i = image of b_i).
    pub fn to_matrix(&self, alg: &Algebra) -> Matrix {
        assert_eq!(self.target_rank, 1);
        let d = alg.dim();
        let mut m = Matrix::zeros(alg.field(), d, d);
        for (i, img) in self.images.iter().enumerate() {
            for (k, c) in img.terms() {
                m.set(k[0], i, c.clone());
            }
        }
        m
    }

    pub fn from_matrix(alg: &Algebra, m: &Matrix) -> Self {
        let images = (0..alg.dim())
            .map(|i| {
                Tensor::from_terms(1, (0..alg.dim()).map(|k| (vec![k], m.get(k, i).clone())))
            })
            .collect();
        Self::new(alg, 1, images).expect("square matrix of algebra size")
    }

    /// `self ∘ other` for 1→1 maps.
    pub fn compose(&self, alg: &Algebra, other: &LinearMap) -> LinearMap {
        assert_eq!(other.target_rank, 1);
        let images = other
            .images
            .iter()
            .map(|img| self.apply(&img.to_element()))
            .collect();
        LinearMap::new(alg, self.target_rank, images).expect("well-formed composite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    // {1, g}, g² = 1
    fn z2() -> Algebra {
        let one = Scalar::one(&q());
        Algebra::new(
            q(),
            vec!["1".into(), "g".into()],
            vec![Parity::Even, Parity::Even],
            0,
            [
                (0, 0, 0, one.clone()),
                (0, 1, 1, one.clone()),
                (1, 0, 1, one.clone()),
                (1, 1, 0, one),
            ],
        )
        .unwrap()
    }

    // {1, θ}, θ odd, θ² = 0
    fn grassmann() -> Algebra {
        let one = Scalar::one(&q());
        Algebra::new(
            q(),
            vec!["1".into(), "t".into()],
            vec![Parity::Even, Parity::Odd],
            0,
            [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one)],
        )
        .unwrap()
    }

    fn t2(a: usize, b: usize) -> Tensor {
        Tensor::from_terms(2, [(vec![a, b], Scalar::one(&q()))])
    }

    #[test]
    fn group_square() {
        let a = z2();
        assert_eq!(a.mul(&a.basis(1), &a.basis(1)), a.one());
    }

    #[test]
    fn koszul_sign_on_odd_legs() {
        let a = grassmann();
        let p = a.tensor_mul(&t2(0, 1), &t2(1, 0)).unwrap();
        assert_eq!(p, t2(1, 1).neg());
        assert!(a.tensor_mul(&t2(1, 0), &t2(1, 0)).unwrap().is_zero());
        let e1 = z2();
        assert_eq!(e1.tensor_mul(&t2(0, 1), &t2(1, 0)).unwrap(), t2(1, 1));
    }

    #[test]
    fn flip_of_odd_pair() {
        let a = grassmann();
        assert_eq!(a.transpose(&t2(1, 1)), t2(1, 1).neg());
        assert_eq!(a.transpose(&t2(0, 1)), t2(1, 0));
    }

    #[test]
    fn permutation_round_trip() {
        let a = grassmann();
        let t = Tensor::from_terms(3, [(vec![1, 1, 0], Scalar::one(&q())), (vec![1, 0, 1], a.scalar(3))]);
        let p = a.permute(&t, &[1, 2, 0]).unwrap();
        assert_eq!(a.permute(&p, &[2, 0, 1]).unwrap(), t);
        assert!(a.permute(&t, &[0, 0, 1]).is_err());
    }

    #[test]
    fn rejects_broken_unit() {
        let one = Scalar::one(&q());
        let err = Algebra::new(
            q(),
            vec!["1".into(), "g".into()],
            vec![Parity::Even, Parity::Even],
            0,
            [(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 1, 0, one)],
        )
        .unwrap_err();
        assert!(matches!(err, GradedError::UnitLaw(_)));
    }

    #[test]
    fn rejects_non_associative_table() {
        let one = Scalar::one(&q());
        // a·a = b, b·a = a, a·b = 0: (aa)a = a but a(aa) = 0
        let mut mul = vec![(0, 0, 0, one.clone())];
        for i in 1..3 {
            mul.push((0, i, i, one.clone()));
            mul.push((i, 0, i, one.clone()));
        }
        mul.push((1, 1, 2, one.clone()));
        mul.push((2, 1, 1, one));
        let err = Algebra::new(
            q(),
            vec!["1".into(), "a".into(), "b".into()],
            vec![Parity::Even; 3],
            0,
            mul,
        )
        .unwrap_err();
        assert!(matches!(err, GradedError::NotAssociative(..)));
    }

    #[test]
    fn rejects_parity_violation() {
        let one = Scalar::one(&q());
        let err = Algebra::new(
            q(),
            vec!["1".into(), "t".into()],
            vec![Parity::Even, Parity::Odd],
            0,
            [
                (0, 0, 0, one.clone()),
                (0, 1, 1, one.clone()),
                (1, 0, 1, one.clone()),
                (1, 1, 1, one),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, GradedError::ParityViolation { .. }));
    }

    #[test]
    fn embed_places_legs() {
        let a = z2();
        let r = t2(1, 0).add(&t2(0, 1).scale(&a.scalar(2)));
        let r13 = a.embed(&r, 3, &[0, 2]).unwrap();
        let expected = Tensor::from_terms(
            3,
            [(vec![1, 0, 0], Scalar::one(&q())), (vec![0, 0, 1], a.scalar(2))],
        );
        assert_eq!(r13, expected);
    }

    #[test]
    fn merge_after_outer_is_product() {
        let a = grassmann();
        let x = a.one().add(&a.basis(1));
        let y = a.basis(1).scale(&a.scalar(2));
        let t = Tensor::from_elements(&[&x, &y]);
        assert_eq!(a.collapse(&t), a.mul(&x, &y));
        assert_eq!(a.collapse(&t2(1, 1)), Element::zero());
    }

    #[test]
    fn matrix_units_multiply() {
        let mu = MatrixUnits::new(&q(), vec![Parity::Even, Parity::Odd]);
        let mut seen = Vec::new();
        mu.mul_basis(mu.unit_index(0, 1), mu.unit_index(1, 0), &mut |k, _| seen.push(k));
        assert_eq!(seen, vec![mu.unit_index(0, 0)]);
        assert_eq!(mu.parity(mu.unit_index(0, 1)), Parity::Odd);
    }

    #[test]
    fn tensor_inverse_of_nilpotent_shift() {
        let a = grassmann();
        let f = a.unit_tensor(2).add(&t2(1, 1));
        let inv = a.tensor_inverse(&f).unwrap();
        assert_eq!(inv, a.unit_tensor(2).sub(&t2(1, 1)));
    }
}
