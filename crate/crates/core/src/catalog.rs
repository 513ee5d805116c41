//! Built-in lattices and their reference figures.
//!
//! Generator matrices are stored verbatim (including column signs) so that
//! exported files stay byte-stable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glue::{standard_glue_vectors, GlueVector};
use crate::lattice::Lattice;
use crate::matrix::Matrix;
use crate::nsm::product_nsm;

/// An exact reference value with its floating-point evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownValue {
    pub exact: String,
    pub value: f64,
}

impl KnownValue {
    fn new(exact: impl Into<String>, value: f64) -> Self {
        KnownValue { exact: exact.into(), value }
    }
}

/// Reference figures attached to a catalog lattice.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct KnownFigures {
    pub nsm: Option<KnownValue>,
    pub facets: Option<usize>,
    pub kissing: Option<usize>,
    pub min_norm2: Option<f64>,
    pub covering_radius: Option<KnownValue>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub lattice: Lattice,
    pub known: KnownFigures,
    pub glue_vectors: Option<Vec<GlueVector>>,
}

/// One line of the catalog listing.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogInfo {
    pub name: String,
    pub description: String,
    pub dimension: Option<usize>,
    pub det_gram: Option<f64>,
    #[serde(flatten)]
    pub known: KnownFigures,
}

pub const E6_NSM: &str = "5/(56*3^(1/6))";
pub const E6_DUAL_NSM: &str = "12619/(68040*3^(5/6))";
pub const GLUED_E6E6_NSM: &str = "200359601790277/2859883842816000";
pub const GLUED_D6D6_NSM: &str = "6492178537549/92704053657600";
pub const E6_E6_DUAL_NSM: &str = "7711/102060";
pub const K12_NSM: &str = "797361941/(6567561000*sqrt(3))";

pub fn e6_nsm() -> f64 {
    5.0 / (56.0 * 3f64.powf(1.0 / 6.0))
}

pub fn e6_dual_nsm() -> f64 {
    12619.0 / (68040.0 * 3f64.powf(5.0 / 6.0))
}

pub fn glued_e6e6_nsm() -> f64 {
    200_359_601_790_277.0 / 2_859_883_842_816_000.0
}

pub fn glued_d6d6_nsm() -> f64 {
    6_492_178_537_549.0 / 92_704_053_657_600.0
}

pub fn k12_nsm() -> f64 {
    797_361_941.0 / (6_567_561_000.0 * 3f64.sqrt())
}

fn build(rows: Vec<Vec<f64>>, label: &str) -> Lattice {
    Lattice::with_label(Matrix::from_rows(&rows).expect("catalog matrix"), label).expect("catalog lattice")
}

pub fn zn(n: usize) -> Lattice {
    Lattice::with_label(Matrix::identity(n), format!("Z{n}")).expect("identity basis")
}

/// `Dₙ` with rows `2e₁` and `e₁ + eᵢ`.
pub fn dn(n: usize) -> Lattice {
    assert!(n >= 2, "D_n needs n >= 2");
    let mut rows = vec![vec![0.0; n]; n];
    rows[0][0] = 2.0;
    for (i, row) in rows.iter_mut().enumerate().skip(1) {
        row[0] = 1.0;
        row[i] = 1.0;
    }
    build(rows, &format!("D{n}"))
}

pub fn d6() -> Lattice {
    dn(6)
}

pub fn e6() -> Lattice {
    let h = 0.5;
    let r = 3f64.sqrt() / 2.0;
    build(
        vec![
            vec![2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            vec![h, h, h, h, h, r],
        ],
        "E6",
    )
}

pub fn e6_dual() -> Lattice {
    e6().dual().expect("E6 is well conditioned").relabeled("E6*")
}

pub fn d6_dual() -> Lattice {
    d6().dual().expect("D6 is well conditioned").relabeled("D6*")
}

/// The glued `E6×E6` record lattice in its printed 12-dimensional form.
pub fn glued_e6e6() -> Lattice {
    let h = 0.5;
    let s3 = 3f64.sqrt();
    let mut rows = vec![vec![0.0; 12]; 12];
    let e6_rows: [[f64; 6]; 5] = [
        [2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    ];
    for (i, r) in e6_rows.iter().enumerate() {
        rows[i][..6].copy_from_slice(r);
        rows[6 + i][6..].copy_from_slice(r);
    }
    rows[5][..6].copy_from_slice(&[h, h, h, h, h, s3 / 2.0]);
    rows[11] = vec![0.0, 0.0, 0.0, 0.0, 0.0, 2.0 / s3, -h, -h, -h, -h, -h, 1.0 / (2.0 * s3)];
    build(rows, "GluedE6E6")
}

/// The glued `D6×D6` record lattice in its printed 12-dimensional form.
pub fn glued_d6d6() -> Lattice {
    let h = 0.5;
    let mut rows = vec![vec![0.0; 12]; 12];
    rows[0][0] = 2.0;
    for i in 1..6 {
        rows[i][0] = 1.0;
        rows[i][i] = 1.0;
    }
    rows[6] = vec![h, h, h, h, h, h, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    for i in 7..11 {
        rows[i][6] = 1.0;
        rows[i][i] = 1.0;
    }
    rows[11] = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, h, h, h, h, h, h];
    build(rows, "GluedD6D6")
}

fn parse_index(s: &str, prefix: char) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}

/// Resolves a catalog name. Besides the fixed names, `Z<n>`, `D<n>` and
/// products such as `E6xE6*` are accepted.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let name = name.trim();
    if let Some((a, b)) = split_product(name) {
        let (ea, eb) = (lookup(a)?, lookup(b)?);
        return Ok(product_entry(&ea, &eb));
    }
    let sqrt3 = 3f64.sqrt();
    let (lattice, known) = match name {
        "E6" => (
            e6(),
            KnownFigures {
                nsm: Some(KnownValue::new(E6_NSM, e6_nsm())),
                facets: Some(72),
                kissing: Some(72),
                min_norm2: Some(2.0),
                covering_radius: Some(KnownValue::new("2/sqrt(3)", 2.0 / sqrt3)),
            },
        ),
        "E6*" => (
            e6_dual(),
            KnownFigures { nsm: Some(KnownValue::new(E6_DUAL_NSM, e6_dual_nsm())), ..Default::default() },
        ),
        "D6*" => (d6_dual(), KnownFigures::default()),
        "GluedE6E6" => (
            glued_e6e6(),
            KnownFigures {
                nsm: Some(KnownValue::new(GLUED_E6E6_NSM, glued_e6e6_nsm())),
                facets: Some(1602),
                kissing: Some(144),
                min_norm2: Some(2.0),
                covering_radius: Some(KnownValue::new("2/sqrt(3)", 2.0 / sqrt3)),
            },
        ),
        "GluedD6D6" => (
            glued_d6d6(),
            KnownFigures {
                nsm: Some(KnownValue::new(GLUED_D6D6_NSM, glued_d6d6_nsm())),
                facets: Some(1912),
                kissing: Some(120),
                min_norm2: Some(2.0),
                covering_radius: Some(KnownValue::new("sqrt(3/2)", 1.5f64.sqrt())),
            },
        ),
        _ => {
            if let Some(n) = parse_index(name, 'Z').filter(|&n| n >= 1) {
                (
                    zn(n),
                    KnownFigures {
                        nsm: Some(KnownValue::new("1/12", 1.0 / 12.0)),
                        facets: Some(2 * n),
                        kissing: Some(2 * n),
                        min_norm2: Some(1.0),
                        covering_radius: Some(KnownValue::new(format!("sqrt({n})/2"), (n as f64).sqrt() / 2.0)),
                    },
                )
            } else if let Some(n) = parse_index(name, 'D').filter(|&n| n >= 2) {
                let covering = if n >= 4 {
                    Some(KnownValue::new(format!("sqrt({n})/2"), (n as f64).sqrt() / 2.0))
                } else {
                    Some(KnownValue::new("1", 1.0))
                };
                (
                    dn(n),
                    KnownFigures {
                        facets: Some(2 * n * (n - 1)),
                        kissing: Some(2 * n * (n - 1)),
                        min_norm2: Some(2.0),
                        covering_radius: covering,
                        ..Default::default()
                    },
                )
            } else {
                return Err(Error::UnknownLattice(name.to_string()));
            }
        }
    };
    let glue_vectors = standard_glue_vectors(name).ok();
    Ok(CatalogEntry { name: name.to_string(), lattice, known, glue_vectors })
}

fn split_product(name: &str) -> Option<(&str, &str)> {
    // The first 'x' separates factors; no atomic name contains one.
    let pos = name.find('x')?;
    Some((&name[..pos], &name[pos + 1..]))
}

fn product_entry(a: &CatalogEntry, b: &CatalogEntry) -> CatalogEntry {
    let lattice = a.lattice.product(&b.lattice);
    let nsm = match (&a.known.nsm, &b.known.nsm) {
        (Some(ga), Some(gb)) => {
            let value = product_nsm(
                a.lattice.dim(),
                ga.value,
                a.lattice.volume(),
                b.lattice.dim(),
                gb.value,
                b.lattice.volume(),
            );
            let exact = if a.name == "E6" && b.name == "E6*" || a.name == "E6*" && b.name == "E6" {
                E6_E6_DUAL_NSM.to_string()
            } else if ga.exact == gb.exact && a.lattice.dim() == b.lattice.dim() {
                ga.exact.clone()
            } else {
                format!("product({}, {})", ga.exact, gb.exact)
            };
            Some(KnownValue { exact, value })
        }
        _ => None,
    };
    let covering_radius = match (&a.known.covering_radius, &b.known.covering_radius) {
        (Some(ra), Some(rb)) => Some(KnownValue::new(
            format!("sqrt(({})^2+({})^2)", ra.exact, rb.exact),
            (ra.value * ra.value + rb.value * rb.value).sqrt(),
        )),
        _ => None,
    };
    let min_norm2 = match (a.known.min_norm2, b.known.min_norm2) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    };
    let kissing = match (a.known.kissing, b.known.kissing, a.known.min_norm2, b.known.min_norm2) {
        (Some(ka), Some(kb), Some(x), Some(y)) => Some(if x == y {
            ka + kb
        } else if x < y {
            ka
        } else {
            kb
        }),
        _ => None,
    };
    CatalogEntry {
        name: format!("{}x{}", a.name, b.name),
        lattice,
        known: KnownFigures {
            nsm,
            facets: a.known.facets.zip(b.known.facets).map(|(x, y)| x + y),
            kissing,
            min_norm2,
            covering_radius,
        },
        glue_vectors: None,
    }
}

/// The built-in lattices, one line each.
pub fn listing() -> Vec<CatalogInfo> {
    let family = |name: &str, description: &str, known: KnownFigures| CatalogInfo {
        name: name.into(),
        description: description.into(),
        dimension: None,
        det_gram: None,
        known,
    };
    let mut out = vec![
        family(
            "Zn",
            "integer lattice Z^n, any n >= 1 (use Z1, Z2, ...)",
            KnownFigures { nsm: Some(KnownValue::new("1/12", 1.0 / 12.0)), ..Default::default() },
        ),
        family("Dn", "checkerboard lattice D_n, any n >= 2 (use D3, D4, ...)", KnownFigures::default()),
    ];
    let fixed = [
        ("E6", "root lattice E6, square 6x6 generator"),
        ("E6*", "dual of E6"),
        ("D6", "checkerboard lattice D6"),
        ("D6*", "dual of D6"),
        ("GluedE6E6", "E6xE6 glued with {g00,g11,g22}"),
        ("GluedD6D6", "D6xD6 glued with {g00,g11,g23,g32}"),
    ];
    for (name, description) in fixed {
        let e = lookup(name).expect("fixed catalog names resolve");
        out.push(CatalogInfo {
            name: name.into(),
            description: description.into(),
            dimension: Some(e.lattice.dim()),
            det_gram: Some(e.lattice.det_gram()),
            known: e.known,
        });
    }
    out
}
