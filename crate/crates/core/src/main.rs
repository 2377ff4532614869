use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qhopf::casimir::{
    build_c1, build_c2, casimir_cm, check_c1, check_c2, check_u, identity_suite, omega_power,
    quadratic_invariants, u_operator, verify_twist_invariance,
};
use qhopf::catalog::{load_builtin, CatalogEntry, NAMES};
use qhopf::file::StructureFile;
use qhopf::graded::Element;
use qhopf::invariants::{center, invariant_subspace, is_central, pseudo_invariant_subspace};
use qhopf::quasihopf::QuasiHopf;
use qhopf::report::{Report, Witness};
use qhopf::twisting::{check_twisted_canonical_identities, twist_structure, Twistor};

#[derive(Parser)]
#[command(name = "qhopf", version, about = "Exact verification for graded quasi-Hopf algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axiom system of a structure file.
    Verify {
        file: PathBuf,
        /// Comma-separated subset of axioms, qtri, qybe, identities, all.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        checks: Vec<CheckSet>,
        #[arg(long)]
        json: bool,
    },
    /// Build a central element and report its checks.
    Casimir {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Power m of (RᵀR) for cm, cmbar and quadratic.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
        /// Representation for the trace families.
        #[arg(long)]
        rep: Option<String>,
        /// Source element for c1/c2: all, unit, alpha, beta, or an index
        /// into the computed (pseudo-)invariant basis.
        #[arg(long, default_value = "all")]
        source: String,
        #[arg(long)]
        json: bool,
    },
    /// Twist a structure by one of its named twistors.
    Twist {
        file: PathBuf,
        #[arg(long)]
        twistor: String,
        /// Where to write the twisted structure; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify_invariance: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print a basis of the graded center.
    Center {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the built-in examples as structure files.
    Catalog {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Restrict to these entries (default: all that build).
        names: Vec<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckSet {
    Axioms,
    Qtri,
    Qybe,
    Identities,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    C1,
    C2,
    Quadratic,
    U,
    Cm,
    Cmbar,
}

/// Input problems (exit 2) as opposed to mathematical failures (exit 1).
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { file, checks, json } => cmd_verify(&file, &checks, json),
        Command::Casimir {
            file,
            kind,
            power,
            rep,
            source,
            json,
        } => cmd_casimir(&file, kind, power, rep.as_deref(), &source, json),
        Command::Twist {
            file,
            twistor,
            out,
            verify_invariance,
            json,
        } => cmd_twist(&file, &twistor, out.as_deref(), verify_invariance, json),
        Command::Center { file, json } => cmd_center(&file, json),
        Command::Catalog { out, names } => cmd_catalog(&out, &names),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<CatalogEntry, InputError> {
    let file = StructureFile::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    file.to_entry().map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn coefficients(h: &QuasiHopf, x: &Element) -> BTreeMap<String, String> {
    let alg = h.algebra();
    x.terms().map(|(i, c)| (alg.label(i).to_string(), c.to_string())).collect()
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    subject: &'a str,
    passed: bool,
    checks: &'a [qhopf::report::Check],
}

fn cmd_verify(path: &Path, checks: &[CheckSet], json: bool) -> Outcome {
    let entry = load(path)?;
    let h = &entry.structure;
    let want = |c: CheckSet| checks.contains(&c) || checks.contains(&CheckSet::All);
    let explicit = |c: CheckSet| checks.contains(&c);
    let mut report = Report::new(entry.name.clone());
    if want(CheckSet::Axioms) {
        report.extend(h.verify_quasi_bialgebra());
        report.extend(h.verify_antipode_axioms());
    }
    // "all" only covers the R-dependent checks when R is present
    if explicit(CheckSet::Qtri) || (want(CheckSet::Qtri) && h.is_quasitriangular()) {
        report.extend(h.verify_quasitriangular());
    }
    if explicit(CheckSet::Qybe) || (want(CheckSet::Qybe) && h.is_quasitriangular()) {
        report.extend(h.verify_quasi_ybe());
    }
    if want(CheckSet::Identities) {
        report.extend(identity_suite(h, None));
        for tw in &entry.twistors {
            match twist_structure(h, tw) {
                Ok(hf) => {
                    let mut r = check_twisted_canonical_identities(h, &hf, tw);
                    for c in &mut r.checks {
                        c.id = format!("{}[{}]", c.id, tw.name());
                    }
                    report.extend(r);
                }
                Err(e) => {
                    report.record(
                        &format!("twist[{}]", tw.name()),
                        "twisted structure is defined",
                        Err(Witness::global(e.to_string())),
                    );
                }
            }
        }
    }
    if json {
        print_json(&VerifyOutput {
            subject: &report.subject,
            passed: report.passed(),
            checks: &report.checks,
        });
    } else {
        println!("{report}");
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct BuiltElement {
    source: String,
    element: BTreeMap<String, String>,
    rendered: String,
}

#[derive(Serialize)]
struct CasimirOutput<'a> {
    kind: &'static str,
    elements: &'a [BuiltElement],
    passed: bool,
    checks: &'a [qhopf::report::Check],
}

fn select_sources(h: &QuasiHopf, basis: &[Element], source: &str) -> Result<Vec<(String, Element)>, InputError> {
    let alg = h.algebra();
    match source {
        "all" => Ok(basis.iter().map(|e| (alg.render_element(e), e.clone())).collect()),
        "unit" => Ok(vec![("unit".into(), alg.one())]),
        "alpha" => Ok(vec![("alpha".into(), h.alpha().clone())]),
        "beta" => Ok(vec![("beta".into(), h.beta().clone())]),
        n => {
            let i: usize = n
                .parse()
                .map_err(|_| InputError(format!("unknown source selector {n:?}")))?;
            let e = basis.get(i).ok_or_else(|| {
                InputError(format!("source index {i} out of range ({} basis elements)", basis.len()))
            })?;
            Ok(vec![(alg.render_element(e), e.clone())])
        }
    }
}

fn cmd_casimir(path: &Path, kind: Kind, power: i64, rep: Option<&str>, source: &str, json: bool) -> Outcome {
    let entry = load(path)?;
    let h = &entry.structure;
    let alg = h.algebra();
    let mut report = Report::new(format!("{} casimir", entry.name));
    let mut built = Vec::new();
    let mut push = |source: String, x: &Element| {
        built.push(BuiltElement {
            source,
            element: coefficients(h, x),
            rendered: alg.render_element(x),
        })
    };
    let kind_name = match kind {
        Kind::C1 => "c1",
        Kind::C2 => "c2",
        Kind::Quadratic => "quadratic",
        Kind::U => "u",
        Kind::Cm => "cm",
        Kind::Cmbar => "cmbar",
    };
    match kind {
        Kind::C1 | Kind::C2 => {
            let space = if kind == Kind::C1 {
                invariant_subspace(h)
            } else {
                pseudo_invariant_subspace(h)
            };
            for (label, c) in select_sources(h, &space.even, source)? {
                let (x, checks) = if kind == Kind::C1 {
                    (build_c1(h, &c), check_c1(h, &c))
                } else {
                    (build_c2(h, &c), check_c2(h, &c))
                };
                let x = x.map_err(|e| InputError(format!("source {label}: {e}")))?;
                push(label.clone(), &x);
                for mut check in checks.checks {
                    check.id = format!("{}[{label}]", check.id);
                    report.checks.push(check);
                }
            }
        }
        Kind::Quadratic => {
            let omega = omega_power(h, power)?;
            let (c1, c2) = quadratic_invariants(h, &omega)?;
            for (name, c) in [("c1", &c1), ("c2", &c2)] {
                push(format!("{name} from (RᵀR)^{power}"), c);
            }
            for mut check in check_c1(h, &c1).checks.into_iter().chain(check_c2(h, &c2).checks) {
                check.id = format!("{}[quadratic]", check.id);
                report.checks.push(check);
            }
        }
        Kind::U => {
            let u = u_operator(h)?;
            push("u".into(), &u);
            report.extend(check_u(h));
        }
        Kind::Cm | Kind::Cmbar => {
            let name = rep.ok_or_else(|| InputError("--rep is required for cm and cmbar".into()))?;
            let pi = entry
                .representation(name)
                .ok_or_else(|| InputError(format!("unknown representation {name:?}")))?;
            let (c, c_bar) = casimir_cm(h, pi, power)?;
            let (label, x) = if kind == Kind::Cm {
                (format!("C_{power} on {name}"), c)
            } else {
                (format!("C̄_{power} on {name}"), c_bar)
            };
            push(label, &x);
            report.record("central", "result commutes with every basis element", is_central(alg, &x));
        }
    }
    if json {
        print_json(&CasimirOutput {
            kind: kind_name,
            elements: &built,
            passed: report.passed(),
            checks: &report.checks,
        });
    } else {
        for b in &built {
            println!("{}: {}", b.source, b.rendered);
        }
        println!("{report}");
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct TwistOutput<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    written: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<&'a StructureFile>,
    passed: bool,
    checks: &'a [qhopf::report::Check],
}

fn cmd_twist(path: &Path, twistor: &str, out: Option<&Path>, verify: bool, json: bool) -> Outcome {
    let entry = load(path)?;
    let h = &entry.structure;
    let tw = entry
        .twistor(twistor)
        .ok_or_else(|| InputError(format!("unknown twistor {twistor:?}")))?;
    let hf = twist_structure(h, tw)?;
    let mut report = Report::new(format!("twist of {} by {}", entry.name, tw.name()));
    if verify {
        // the sweep includes the canonical-element identities
        report.extend(verify_twist_invariance(h, tw, &entry.representations, &[-1, 0, 1, 2]));
    } else {
        report.extend(check_twisted_canonical_identities(h, &hf, tw));
    }
    let twisted = CatalogEntry {
        name: format!("{}-twisted-{}", entry.name, tw.name()),
        notes: format!("{} twisted by {}", entry.name, tw.name()),
        twistors: vec![Twistor::identity(&hf), tw.inverse("untwist")],
        representations: entry.representations.clone(),
        structure: hf,
    };
    let file = StructureFile::from_entry(&twisted);
    if let Some(out) = out {
        std::fs::write(out, file.to_json()).map_err(|e| InputError(format!("{}: {e}", out.display())))?;
    }
    if json {
        print_json(&TwistOutput {
            written: out.map(|p| p.display().to_string()),
            structure: if out.is_none() { Some(&file) } else { None },
            passed: report.passed(),
            checks: &report.checks,
        });
    } else {
        if out.is_none() {
            print!("{}", file.to_json());
            eprintln!("{report}");
        } else {
            println!("{report}");
        }
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct CenterOutput {
    even: Vec<BTreeMap<String, String>>,
    odd: Vec<BTreeMap<String, String>>,
}

fn cmd_center(path: &Path, json: bool) -> Outcome {
    let entry = load(path)?;
    let h = &entry.structure;
    let z = center(h.algebra());
    if json {
        print_json(&CenterOutput {
            even: z.even.iter().map(|x| coefficients(h, x)).collect(),
            odd: z.odd.iter().map(|x| coefficients(h, x)).collect(),
        });
    } else {
        println!("center of {}: dimension {} ({} even, {} odd)", entry.name, z.dim(), z.even.len(), z.odd.len());
        for x in &z.even {
            println!("  even: {}", h.algebra().render_element(x));
        }
        for x in &z.odd {
            println!("  odd:  {}", h.algebra().render_element(x));
        }
    }
    Ok(true)
}

fn cmd_catalog(out: &Path, names: &[String]) -> Outcome {
    std::fs::create_dir_all(out)?;
    let names: Vec<&str> = if names.is_empty() {
        NAMES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    for name in names {
        match load_builtin(name) {
            Ok(entry) => {
                let path = out.join(format!("{name}.qh"));
                std::fs::write(&path, StructureFile::from_entry(&entry).to_json())?;
                println!("wrote {}", path.display());
            }
            Err(e) => eprintln!("skipped {name}: {e}"),
        }
    }
    Ok(true)
}
