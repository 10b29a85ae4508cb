//! Named matroids and families with fixed, documented point orders.
//!
//! Orderings:
//! - `matroid_m(m)`, `matroid_mk(q, m)`: vectors of `F_q^m` in lexicographic
//!   order, first coordinate most significant.
//! - `monomial(m)`: `H12^a` at `a`, `H23^b` at `m + b`, `H13^c` at `2m + c`,
//!   where `H12^a: x = ζ^a y`, `H23^b: y = ζ^b z`, `H13^c: x = ζ^c z`.
//! - `full_monomial(m)`: as `monomial(m)`, then `x, y, z` at `3m, 3m+1, 3m+2`.
//! - `graphic_arrangement`: edges in input order; `braid` is `K_4` with edges
//!   `01, 02, 03, 12, 13, 23`.
//! - `hessian`: the 12 lines of the affine plane over `F_3`; line `3c + t` is
//!   `{p : <n_c, p> = t}` with normals `(1,0), (0,1), (1,1), (1,2)`.
//! - `matroid_from_latin_square`: rows, then columns, then symbols.

use num_bigint::BigInt;
use thiserror::Error;

use crate::finfield::FiniteField;
use crate::matroid::{flats_from_projective_points, Matroid, MatroidError, ProjectivePointConfig};
use crate::nets::{LatinSquare, NetStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("{0} needs a parameter")]
    MissingParam(String),
    #[error("parameter {param} out of range for {name}")]
    OutOfRange { name: String, param: usize },
    #[error("bad catalog spec {0:?}")]
    BadSpec(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub matroid: Matroid,
    pub labels: Vec<String>,
    pub known_nets: Vec<NetStructure>,
    pub description: String,
    /// Rational homogeneous coordinates of a realization, when one is shipped.
    pub coordinates: Option<ProjectivePointConfig>,
}

fn vector_of(index: usize, q: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    let mut x = index;
    for slot in out.iter_mut().rev() {
        *slot = x % q;
        x /= q;
    }
    out
}

fn index_of(v: &[usize], q: usize) -> usize {
    v.iter().fold(0, |acc, &c| acc * q + c)
}

/// The matroid on `F_3^m` whose long flats are the triples `{v, v', -v-v'}`.
pub fn matroid_m(m: usize) -> Result<Matroid, CatalogError> {
    if !(1..=5).contains(&m) {
        return Err(CatalogError::OutOfRange { name: "M".into(), param: m });
    }
    let n = 3usize.pow(m as u32);
    let mut flats = Vec::new();
    for u in 0..n {
        let a = vector_of(u, 3, m);
        for v in u + 1..n {
            let b = vector_of(v, 3, m);
            let c: Vec<usize> = a.iter().zip(&b).map(|(x, y)| (6 - x - y) % 3).collect();
            let w = index_of(&c, 3);
            if w > v {
                flats.push(vec![u, v, w]);
            }
        }
    }
    Ok(Matroid::from_flats(n, flats)?)
}

/// The matroid on `F_q^m` whose long flats are the affine lines.
pub fn matroid_mk(q: usize, m: usize) -> Result<Matroid, CatalogError> {
    if !(2..=5).contains(&q) {
        return Err(CatalogError::OutOfRange { name: "MK".into(), param: q });
    }
    if !(1..=3).contains(&m) {
        return Err(CatalogError::OutOfRange { name: "MK".into(), param: m });
    }
    let field = FiniteField::of_order(q as u32).expect("orders 2..=5 are prime powers");
    let n = q.pow(m as u32);
    let mut covered = vec![false; n * n];
    let mut flats = Vec::new();
    for u in 0..n {
        let a = vector_of(u, q, m);
        for v in u + 1..n {
            if covered[u * n + v] {
                continue;
            }
            let b = vector_of(v, q, m);
            let dir: Vec<u8> = a.iter().zip(&b).map(|(&x, &y)| field.sub_idx(y as u8, x as u8)).collect();
            let mut line: Vec<usize> = (0..q as u8)
                .map(|t| {
                    let p: Vec<usize> =
                        a.iter().zip(&dir).map(|(&x, &d)| field.add_idx(x as u8, field.mul_idx(t, d)) as usize).collect();
                    index_of(&p, q)
                })
                .collect();
            line.sort_unstable();
            for &x in &line {
                for &y in &line {
                    covered[x * n + y] = true;
                }
            }
            if line.len() >= 3 {
                flats.push(line);
            }
        }
    }
    Ok(Matroid::from_flats(n, flats)?)
}

/// The monomial arrangement `(x^m - y^m)(y^m - z^m)(x^m - z^m)`.
pub fn monomial(m: usize) -> Result<Matroid, CatalogError> {
    if !(1..=32).contains(&m) {
        return Err(CatalogError::OutOfRange { name: "monomial".into(), param: m });
    }
    Ok(Matroid::from_flats(3 * m, monomial_flats(m, false))?)
}

/// The full monomial arrangement `xyz (x^m - y^m)(y^m - z^m)(x^m - z^m)`.
pub fn full_monomial(m: usize) -> Result<Matroid, CatalogError> {
    if !(1..=32).contains(&m) {
        return Err(CatalogError::OutOfRange { name: "full_monomial".into(), param: m });
    }
    Ok(Matroid::from_flats(3 * m + 3, monomial_flats(m, true))?)
}

fn monomial_flats(m: usize, full: bool) -> Vec<Vec<usize>> {
    let mut flats = Vec::new();
    let (x, y, z) = (3 * m, 3 * m + 1, 3 * m + 2);
    // Each family meets in a coordinate point, which the full arrangement
    // shares with two coordinate lines.
    for (family, extra) in [(0, [x, y]), (1, [y, z]), (2, [x, z])] {
        let mut flat: Vec<usize> = (family * m..(family + 1) * m).collect();
        if full {
            flat.extend(extra);
        }
        if flat.len() >= 3 {
            flats.push(flat);
        }
    }
    for a in 0..m {
        for b in 0..m {
            flats.push(vec![a, m + b, 2 * m + (a + b) % m]);
        }
    }
    flats
}

fn monomial_labels(m: usize, full: bool) -> Vec<String> {
    let mut labels: Vec<String> = ["H12", "H23", "H13"]
        .iter()
        .flat_map(|f| (0..m).map(move |a| format!("{f}^{a}")))
        .collect();
    if full {
        labels.extend(["x", "y", "z"].map(String::from));
    }
    labels
}

/// The graphic arrangement of a simple graph: one point per edge, one triple
/// flat per triangle.
pub fn graphic_arrangement(edges: &[(usize, usize)]) -> Result<Matroid, CatalogError> {
    if edges.is_empty() {
        return Err(CatalogError::InvalidGraph("no edges".into()));
    }
    let mut norm = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        if a == b {
            return Err(CatalogError::InvalidGraph(format!("self-loop at {a}")));
        }
        let e = (a.min(b), a.max(b));
        if norm.contains(&e) {
            return Err(CatalogError::InvalidGraph(format!("repeated edge {}-{}", e.0, e.1)));
        }
        norm.push(e);
    }
    let index = |e: (usize, usize)| norm.iter().position(|&f| f == e);
    let nv = norm.iter().map(|e| e.1).max().unwrap_or(0) + 1;
    let mut flats = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            for c in b + 1..nv {
                if let (Some(x), Some(y), Some(z)) = (index((a, b)), index((a, c)), index((b, c))) {
                    flats.push(vec![x, y, z]);
                }
            }
        }
    }
    Ok(Matroid::from_flats(norm.len(), flats)?)
}

/// Edges of the complete graph on `l` vertices in lexicographic order.
pub fn complete_graph_edges(l: usize) -> Vec<(usize, usize)> {
    (0..l).flat_map(|a| (a + 1..l).map(move |b| (a, b))).collect()
}

/// The braid arrangement: graphic arrangement of `K_4`.
pub fn braid() -> Matroid {
    graphic_arrangement(&complete_graph_edges(4)).expect("K_4 is simple")
}

/// Normals of the braid lines `z_i - z_j` in the slice `z_0 = 0`, in edge order.
pub fn braid_config() -> ProjectivePointConfig {
    ProjectivePointConfig::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]])
        .expect("distinct points")
}

/// Twelve points (the lines of the affine plane over `F_3`) with nine 4-point flats.
pub fn hessian() -> Matroid {
    let normals = [(1, 0), (0, 1), (1, 1), (1, 2)];
    let flats = (0..9)
        .map(|p| {
            let (x, y) = (p / 3, p % 3);
            normals.iter().enumerate().map(|(c, &(a, b))| 3 * c + (a * x + b * y) % 3).collect()
        })
        .collect();
    Matroid::from_flats(12, flats).expect("pencils meet in one line")
}

/// The reflection arrangement of type `B_3`: `full_monomial(2)`.
pub fn b3() -> Matroid {
    full_monomial(2).expect("valid parameter")
}

/// The `(3, 4)`-multinet on `b3`: each family joined with the opposite
/// coordinate line, which carries multiplicity two.
pub fn b3_multinet() -> (Vec<usize>, Vec<u64>) {
    (vec![0, 0, 1, 1, 2, 2, 1, 2, 0], vec![1, 1, 1, 1, 1, 1, 2, 2, 2])
}

/// Homogeneous coordinates of a rational realization of the Pappus configuration.
pub fn pappus_config() -> ProjectivePointConfig {
    ProjectivePointConfig::from_i64(&[
        [0, 0, 1],
        [1, 0, 1],
        [3, 0, 1],
        [0, 1, 1],
        [2, 1, 1],
        [5, 1, 1],
        [2, 1, 3],
        [15, 3, 8],
        [13, 2, 5],
    ])
    .expect("distinct points")
}

pub fn pappus() -> Matroid {
    flats_from_projective_points(&pappus_config()).expect("valid configuration")
}

/// The matroid of a Latin square with its row/column/symbol 3-net.
pub fn matroid_from_latin_square(sq: &LatinSquare) -> (Matroid, NetStructure) {
    let d = sq.d();
    let mut flats = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            flats.push(vec![i, d + j, 2 * d + sq.get(i, j)]);
        }
    }
    let m = Matroid::from_flats(3 * d, flats).expect("Latin square triples meet in at most one point");
    let net = NetStructure::new(&m, (0..3 * d).map(|u| u / d).collect()).expect("rows, columns and symbols form a net");
    (m, net)
}

fn coords_i64(rows: &[[i64; 3]]) -> Option<ProjectivePointConfig> {
    Some(ProjectivePointConfig::from_i64(rows).expect("distinct points"))
}

fn monomial_config(m: usize, full: bool) -> Option<ProjectivePointConfig> {
    let mut rows: Vec<[i64; 3]> = match m {
        1 => vec![[1, -1, 0], [0, 1, -1], [1, 0, -1]],
        2 => vec![[1, -1, 0], [1, 1, 0], [0, 1, -1], [0, 1, 1], [1, 0, -1], [1, 0, 1]],
        _ => return None,
    };
    if full {
        rows.extend([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    }
    coords_i64(&rows)
}

fn vector_labels(q: usize, m: usize) -> Vec<String> {
    (0..q.pow(m as u32))
        .map(|u| {
            let v: Vec<String> = vector_of(u, q, m).iter().map(|c| c.to_string()).collect();
            format!("({})", v.join(","))
        })
        .collect()
}

fn entry(name: String, matroid: Matroid, labels: Vec<String>, description: &str) -> CatalogEntry {
    debug_assert_eq!(labels.len(), matroid.n());
    CatalogEntry { name, matroid, labels, known_nets: Vec::new(), description: description.into(), coordinates: None }
}

fn net(m: &Matroid, assignment: Vec<usize>) -> NetStructure {
    NetStructure::new(m, assignment).expect("catalog net is valid")
}

fn latin_entry(name: &str, sq: &LatinSquare, description: &str) -> CatalogEntry {
    let d = sq.d();
    let (m, n) = matroid_from_latin_square(sq);
    let labels = ["r", "c", "s"].iter().flat_map(|p| (0..d).map(move |i| format!("{p}{i}"))).collect();
    let mut e = entry(name.into(), m, labels, description);
    e.known_nets.push(n);
    e
}

/// Look up a catalog entry by name and parameters.
pub fn builtin(name: &str, params: &[usize]) -> Result<CatalogEntry, CatalogError> {
    let param = |i: usize| params.get(i).copied().ok_or_else(|| CatalogError::MissingParam(name.into()));
    let lower = name.to_ascii_lowercase();
    let e = match lower.as_str() {
        "braid" => {
            let m = braid();
            let labels = complete_graph_edges(4).iter().map(|(a, b)| format!("e{a}{b}")).collect();
            let mut e = entry("braid".into(), m, labels, "reflection arrangement of type A3");
            e.known_nets.push(net(&e.matroid, vec![0, 1, 2, 2, 1, 0]));
            e.coordinates = Some(braid_config());
            e
        }
        "pappus" => {
            let cfg = pappus_config();
            let m = flats_from_projective_points(&cfg)?;
            let labels = (0..9).map(|i| format!("p{i}")).collect();
            let (latin, latin_net) = matroid_from_latin_square(&LatinSquare::cyclic(3));
            let iso = latin.find_isomorphism(&m).expect("Pappus matroid realizes the Z_3 square");
            let mut parts = vec![0; 9];
            for (u, &img) in iso.iter().enumerate() {
                parts[img] = latin_net.assignment()[u];
            }
            let mut e = entry("pappus".into(), m, labels, "Pappus (9_3) configuration");
            e.known_nets.push(net(&e.matroid, parts));
            e.coordinates = Some(cfg);
            e
        }
        "ceva" | "monomial" => {
            let d = if lower == "ceva" { params.first().copied().unwrap_or(3) } else { param(0)? };
            let m = monomial(d)?;
            let mut e = entry(format!("{lower}:{d}"), m, monomial_labels(d, false), "monomial arrangement");
            e.known_nets.push(net(&e.matroid, (0..3 * d).map(|u| u / d).collect()));
            e.coordinates = monomial_config(d, false);
            e
        }
        "full_monomial" => {
            let d = param(0)?;
            let mut e = entry(format!("full_monomial:{d}"), full_monomial(d)?, monomial_labels(d, true), "full monomial arrangement");
            e.coordinates = monomial_config(d, true);
            e
        }
        "b3" => {
            let mut e = entry("b3".into(), b3(), monomial_labels(2, true), "reflection arrangement of type B3");
            e.coordinates = monomial_config(2, true);
            e
        }
        "hessian" => {
            let labels = (0..12).map(|i| format!("L{}.{}", i / 3, i % 3)).collect();
            let mut e = entry("hessian".into(), hessian(), labels, "Hessian arrangement");
            e.known_nets.push(net(&e.matroid, (0..12).map(|u| u / 3).collect()));
            e
        }
        "m" => {
            let d = param(0)?;
            let m = matroid_m(d)?;
            let nets = (0..d)
                .map(|a| net(&m, (0..m.n()).map(|u| vector_of(u, 3, d)[a]).collect()))
                .collect();
            let mut e = entry(format!("M:{d}"), m, vector_labels(3, d), "affine lines of F_3^m");
            e.known_nets = nets;
            e
        }
        "mk" => {
            let (q, d) = (param(0)?, param(1)?);
            entry(format!("MK:{q}:{d}"), matroid_mk(q, d)?, vector_labels(q, d), "affine lines of F_q^m")
        }
        "kirkman" => latin_entry("kirkman", &LatinSquare::cyclic(4), "Latin square matroid of Z_4"),
        "steiner" => latin_entry("steiner", &LatinSquare::klein(), "Latin square matroid of Z_2 x Z_2"),
        "latin" => {
            let d = param(0)?;
            if !(1..=16).contains(&d) {
                return Err(CatalogError::OutOfRange { name: "latin".into(), param: d });
            }
            let mut e = latin_entry("latin", &LatinSquare::cyclic(d), "Latin square matroid of Z_d");
            e.name = format!("latin:{d}");
            e
        }
        "uniform" => {
            let n = param(0)?;
            let m = Matroid::uniform(n)?;
            entry(format!("uniform:{n}"), m, (0..n).map(|i| format!("p{i}")).collect(), "points in general position")
        }
        "complete" => {
            let l = param(0)?;
            if l < 2 {
                return Err(CatalogError::OutOfRange { name: "complete".into(), param: l });
            }
            let edges = complete_graph_edges(l);
            let labels = edges.iter().map(|(a, b)| format!("e{a}.{b}")).collect();
            entry(format!("complete:{l}"), graphic_arrangement(&edges)?, labels, "graphic arrangement of a complete graph")
        }
        _ => return Err(CatalogError::UnknownName(name.into())),
    };
    Ok(e)
}

/// Parse `name`, `name:a` or `name:a:b` and build the entry.
pub fn from_spec(spec: &str) -> Result<CatalogEntry, CatalogError> {
    let mut it = spec.split(':');
    let name = it.next().filter(|s| !s.is_empty()).ok_or_else(|| CatalogError::BadSpec(spec.into()))?;
    let params = it
        .map(|p| p.parse::<usize>().map_err(|_| CatalogError::BadSpec(spec.into())))
        .collect::<Result<Vec<_>, _>>()?;
    builtin(name, &params)
}

/// The standard set of entries exercised by catalog-wide checks.
pub fn standard_catalog() -> Vec<CatalogEntry> {
    let mut specs: Vec<String> = ["braid", "pappus", "kirkman", "steiner", "hessian", "b3", "M:1", "M:2", "M:3", "MK:4:2", "MK:5:2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    specs.extend((1..=6).map(|m| format!("monomial:{m}")));
    specs.extend((1..=7).map(|m| format!("full_monomial:{m}")));
    specs.iter().map(|s| from_spec(s).expect("standard catalog entry")).collect()
}

/// Rational coordinates as `BigInt` rows, if the entry ships a realization.
pub fn coordinates(entry: &CatalogEntry) -> Option<&[[BigInt; 3]]> {
    entry.coordinates.as_ref().map(|c| c.rows())
}
