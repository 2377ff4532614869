//! Built-in structures: the ℤ₂ group algebra, its 3-cocycle deformation,
//! Sweedler's algebra (plain and twisted), the Grassmann pair and a small
//! quantum group at a cube root of unity.

use std::sync::Arc;

use thiserror::Error;

use crate::graded::{Algebra, Element, LinearMap, Parity, Tensor};
use crate::quasihopf::{Parts, QuasiHopf, StructureError};
use crate::representations::Representation;
use crate::scalars::{parse_scalar, FieldDescriptor, Scalar};
use crate::twisting::{twist_structure, TwistError, Twistor};

pub const NAMES: [&str; 6] = [
    "z2-group",
    "z2-cocycle",
    "sweedler-h4",
    "grassmann-theta",
    "sweedler-twisted",
    "small-uqsl2",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown built-in {0:?}; known: {}", NAMES.join(", "))]
    Unknown(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub notes: String,
    pub structure: QuasiHopf,
    pub twistors: Vec<Twistor>,
    pub representations: Vec<Representation>,
}

impl CatalogEntry {
    pub fn twistor(&self, name: &str) -> Option<&Twistor> {
        self.twistors.iter().find(|t| t.name() == name)
    }

    pub fn representation(&self, name: &str) -> Option<&Representation> {
        self.representations.iter().find(|r| r.name() == name)
    }
}

pub fn load_builtin(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "z2-group" => z2_group(),
        "z2-cocycle" => z2_cocycle(),
        "sweedler-h4" => sweedler(),
        "grassmann-theta" => grassmann(&Scalar::one(&FieldDescriptor::Rationals)),
        "sweedler-twisted" => sweedler_twisted(),
        "small-uqsl2" => crate::uqsl2::small_uqsl2(),
        other => Err(CatalogError::Unknown(other.to_string())),
    }
}

// -- construction helpers ----------------------------------------------------

pub(crate) struct Builder {
    pub alg: Arc<Algebra>,
}

impl Builder {
    pub fn new(
        field: FieldDescriptor,
        basis: &[(&str, u8)],
        table: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Self {
        let labels = basis.iter().map(|(l, _)| l.to_string()).collect();
        let parities = basis.iter().map(|&(_, p)| Parity::from_bit(p)).collect();
        let alg = Algebra::new(field, labels, parities, 0, table).expect("built-in algebra is valid");
        Self { alg: Arc::new(alg) }
    }

    pub fn s(&self, text: &str) -> Scalar {
        parse_scalar(text, self.alg.field()).expect("built-in scalar")
    }

    pub fn b(&self, label: &str) -> Element {
        self.alg.basis(self.alg.index_of(label).expect("built-in label"))
    }

    /// Element from `(coefficient, label)` terms.
    pub fn e(&self, terms: &[(&str, &str)]) -> Element {
        terms
            .iter()
            .fold(Element::zero(), |acc, (c, l)| acc.add(&self.b(l).scale(&self.s(c))))
    }

    /// Tensor from `(coefficient, [labels])` terms.
    pub fn t(&self, rank: usize, terms: &[(&str, &[&str])]) -> Tensor {
        let mut out = Tensor::zero(rank);
        for (c, labels) in terms {
            assert_eq!(labels.len(), rank);
            let key = labels.iter().map(|l| self.alg.index_of(l).expect("built-in label")).collect();
            out.add_term(key, self.s(c));
        }
        out
    }

    pub fn map(&self, rank: usize, images: Vec<Tensor>) -> LinearMap {
        LinearMap::new(&self.alg, rank, images).expect("built-in map")
    }

    pub fn counit(&self, values: &[&str]) -> LinearMap {
        self.map(0, values.iter().map(|v| Tensor::scalar(self.s(v))).collect())
    }

    pub fn endo(&self, images: Vec<Element>) -> LinearMap {
        self.map(1, images.iter().map(Element::to_tensor).collect())
    }

    pub fn character(&self, name: &str, values: &[&str]) -> Representation {
        Representation::character(&self.alg, name, values.iter().map(|v| self.s(v)).collect())
            .expect("built-in character")
    }
}

fn group_table(field: &FieldDescriptor) -> Vec<(usize, usize, usize, Scalar)> {
    let one = Scalar::one(field);
    vec![
        (0, 0, 0, one.clone()),
        (0, 1, 1, one.clone()),
        (1, 0, 1, one.clone()),
        (1, 1, 0, one),
    ]
}

fn z2_builder() -> Builder {
    let f = FieldDescriptor::Rationals;
    Builder::new(f.clone(), &[("1", 0), ("g", 0)], group_table(&f))
}

fn z2_parts(b: &Builder) -> Parts {
    Parts {
        algebra: b.alg.clone(),
        coproduct: b.map(2, vec![b.t(2, &[("1", &["1", "1"])]), b.t(2, &[("1", &["g", "g"])])]),
        counit: b.counit(&["1", "1"]),
        antipode: b.endo(vec![b.b("1"), b.b("g")]),
        phi: b.alg.unit_tensor(3),
        phi_inv: None,
        alpha: b.alg.one(),
        beta: b.alg.one(),
        r: None,
        r_inv: None,
    }
}

/// `p₋ = (1 − g)/2`.
fn p_minus(b: &Builder) -> Element {
    b.e(&[("1/2", "1"), ("-1/2", "g")])
}

fn z2_reps(b: &Builder) -> Vec<Representation> {
    vec![
        Representation::regular(&b.alg),
        b.character("trivial", &["1", "1"]),
        b.character("sign", &["1", "-1"]),
    ]
}

fn z2_group() -> Result<CatalogEntry, CatalogError> {
    let b = z2_builder();
    let mut parts = z2_parts(&b);
    parts.r = Some(b.t(
        2,
        &[
            ("1/2", &["1", "1"]),
            ("1/2", &["1", "g"]),
            ("1/2", &["g", "1"]),
            ("-1/2", &["g", "g"]),
        ],
    ));
    let h = QuasiHopf::new(parts)?;
    let p = p_minus(&b);
    let pp = Tensor::from_elements(&[&p, &p]);
    let one = b.alg.unit_tensor(2);
    let pminus = Twistor::new(
        &h,
        "pminus",
        one.add(&pp),
        Some(one.sub(&pp.scale(&b.s("1/2")))),
    )?;
    Ok(CatalogEntry {
        name: "z2-group".into(),
        notes: "group algebra of Z2 with the non-trivial triangular R-matrix".into(),
        twistors: vec![Twistor::identity(&h), pminus],
        representations: z2_reps(&b),
        structure: h,
    })
}

fn z2_cocycle() -> Result<CatalogEntry, CatalogError> {
    let b = z2_builder();
    let mut parts = z2_parts(&b);
    let p = p_minus(&b);
    let ppp = Tensor::from_elements(&[&p, &p, &p]);
    let phi = b.alg.unit_tensor(3).sub(&ppp.scale(&b.s("2")));
    parts.phi = phi.clone();
    parts.phi_inv = Some(phi);
    let draft = QuasiHopf::new(parts)?;
    let (alpha, beta) = draft.solve_canonical_elements()?.swap_remove(0);
    let mut parts = draft.into_parts();
    parts.alpha = alpha;
    parts.beta = beta;
    let h = QuasiHopf::new(parts)?;
    Ok(CatalogEntry {
        name: "z2-cocycle".into(),
        notes: "Z2 group algebra with the non-trivial 3-cocycle as coassociator".into(),
        twistors: vec![Twistor::identity(&h)],
        representations: z2_reps(&b),
        structure: h,
    })
}

fn sweedler_builder() -> Builder {
    let f = FieldDescriptor::Rationals;
    let one = Scalar::one(&f);
    let m1 = Scalar::from_int(&f, -1);
    // basis 1, g, x, gx
    let table = vec![
        (0, 0, 0, one.clone()),
        (0, 1, 1, one.clone()),
        (0, 2, 2, one.clone()),
        (0, 3, 3, one.clone()),
        (1, 0, 1, one.clone()),
        (1, 1, 0, one.clone()),
        (1, 2, 3, one.clone()),
        (1, 3, 2, one.clone()),
        (2, 0, 2, one.clone()),
        (2, 1, 3, m1.clone()),
        (3, 0, 3, one),
        (3, 1, 2, m1),
    ];
    Builder::new(f, &[("1", 0), ("g", 0), ("x", 0), ("gx", 0)], table)
}

fn sweedler_parts(b: &Builder) -> Parts {
    let coproduct = b.map(
        2,
        vec![
            b.t(2, &[("1", &["1", "1"])]),
            b.t(2, &[("1", &["g", "g"])]),
            b.t(2, &[("1", &["x", "1"]), ("1", &["g", "x"])]),
            b.t(2, &[("1", &["gx", "g"]), ("1", &["1", "gx"])]),
        ],
    );
    let r = b.t(
        2,
        &[
            ("1/2", &["1", "1"]),
            ("1/2", &["1", "g"]),
            ("1/2", &["g", "1"]),
            ("-1/2", &["g", "g"]),
            ("1/2", &["x", "x"]),
            ("-1/2", &["x", "gx"]),
            ("1/2", &["gx", "gx"]),
            ("1/2", &["gx", "x"]),
        ],
    );
    Parts {
        algebra: b.alg.clone(),
        coproduct,
        counit: b.counit(&["1", "1", "0", "0"]),
        antipode: b.endo(vec![b.b("1"), b.b("g"), b.e(&[("-1", "gx")]), b.b("x")]),
        phi: b.alg.unit_tensor(3),
        phi_inv: None,
        alpha: b.alg.one(),
        beta: b.alg.one(),
        r: Some(r),
        r_inv: None,
    }
}

/// `F_t = 1⊗1 + x⊗gx`.
fn sweedler_ft(b: &Builder, h: &QuasiHopf) -> Result<Twistor, TwistError> {
    let n = b.t(2, &[("1", &["x", "gx"])]);
    let one = b.alg.unit_tensor(2);
    Twistor::new(h, "Ft", one.add(&n), Some(one.sub(&n)))
}

fn sweedler() -> Result<CatalogEntry, CatalogError> {
    let b = sweedler_builder();
    let h = QuasiHopf::new(sweedler_parts(&b))?;
    let ft = sweedler_ft(&b, &h)?;
    Ok(CatalogEntry {
        name: "sweedler-h4".into(),
        notes: "Sweedler's four-dimensional Hopf algebra with the R-matrix of parameter 1".into(),
        twistors: vec![Twistor::identity(&h), ft],
        representations: vec![Representation::regular(&b.alg), b.character("trivial", &["1", "1", "0", "0"])],
        structure: h,
    })
}

fn sweedler_twisted() -> Result<CatalogEntry, CatalogError> {
    let b = sweedler_builder();
    let h3 = QuasiHopf::new(sweedler_parts(&b))?;
    let ft = sweedler_ft(&b, &h3)?;
    let h = twist_structure(&h3, &ft)?;
    let untwist = ft.inverse("untwist");
    Ok(CatalogEntry {
        name: "sweedler-twisted".into(),
        notes: "Sweedler's algebra twisted by Ft = 1⊗1 + x⊗gx".into(),
        twistors: vec![Twistor::identity(&h), untwist],
        representations: vec![Representation::regular(&b.alg), b.character("trivial", &["1", "1", "0", "0"])],
        structure: h,
    })
}

/// The Grassmann pair `{1, θ}` with `R = 1⊗1 + c·θ⊗θ`.
pub fn grassmann(c: &Scalar) -> Result<CatalogEntry, CatalogError> {
    let f = c.field();
    let one = Scalar::one(&f);
    let table = vec![(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one)];
    let b = Builder::new(f, &[("1", 0), ("θ", 1)], table);
    let tt = b.t(2, &[("1", &["θ", "θ"])]);
    let one2 = b.alg.unit_tensor(2);
    let parts = Parts {
        algebra: b.alg.clone(),
        coproduct: b.map(
            2,
            vec![b.t(2, &[("1", &["1", "1"])]), b.t(2, &[("1", &["θ", "1"]), ("1", &["1", "θ"])])],
        ),
        counit: b.counit(&["1", "0"]),
        antipode: b.endo(vec![b.b("1"), b.e(&[("-1", "θ")])]),
        phi: b.alg.unit_tensor(3),
        phi_inv: None,
        alpha: b.alg.one(),
        beta: b.alg.one(),
        r: Some(one2.add(&tt.scale(c))),
        r_inv: Some(one2.sub(&tt.scale(c))),
    };
    let h = QuasiHopf::new(parts)?;
    let theta = Twistor::new(&h, "theta", one2.add(&tt), Some(one2.sub(&tt)))?;
    Ok(CatalogEntry {
        name: "grassmann-theta".into(),
        notes: format!("Grassmann superalgebra on one odd generator, R = 1⊗1 + ({c})·θ⊗θ"),
        twistors: vec![Twistor::identity(&h), theta],
        representations: vec![Representation::regular(&b.alg), b.character("trivial", &["1", "0"])],
        structure: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(name: &str) -> CatalogEntry {
        let e = load_builtin(name).unwrap();
        let rep = e.structure.verify_all();
        assert!(rep.passed(), "{name}:\n{rep}");
        e
    }

    #[test]
    fn z2_group_passes() {
        let e = check("z2-group");
        assert!(e.structure.is_quasitriangular());
    }

    #[test]
    fn z2_cocycle_is_genuinely_quasi() {
        let e = check("z2-cocycle");
        assert!(!e.structure.has_trivial_phi());
    }

    #[test]
    fn sweedler_passes() {
        check("sweedler-h4");
    }

    #[test]
    fn sweedler_twisted_is_genuinely_quasi() {
        let e = check("sweedler-twisted");
        assert!(!e.structure.has_trivial_phi());
    }

    #[test]
    fn grassmann_passes() {
        check("grassmann-theta");
    }

    #[test]
    fn grassmann_r_admissible_for_generic_c() {
        let f = FieldDescriptor::rational_functions("c").unwrap();
        let c = Scalar::generator(&f).unwrap();
        let e = grassmann(&c).unwrap();
        let rep = e.structure.verify_all();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(load_builtin("nope"), Err(CatalogError::Unknown(_))));
    }
}
