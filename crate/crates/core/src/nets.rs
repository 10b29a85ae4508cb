//! Multinets, nets and Latin squares on rank-3 matroids.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::finfield::FiniteField;
use crate::matroid::Matroid;
use crate::resonance::{self, Cocycle, ResonanceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("assignment has {got} entries, matroid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a multinet needs at least 3 classes, got {0}")]
    TooFewClasses(usize),
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("point {0} has multiplicity zero")]
    ZeroMultiplicity(usize),
    #[error("axiom 1: class {class} has weight {weight}, class 0 has weight {expected}")]
    UnequalWeights { class: usize, weight: u64, expected: u64 },
    #[error("axiom 2: points {u} and {v} lie in different classes but span a double point")]
    CrossPairOnDoublePoint { u: usize, v: usize },
    #[error("axiom 3: flat {flat:?} meets the classes with weights {weights:?}")]
    UnbalancedFlat { flat: Vec<usize>, weights: Vec<u64> },
    #[error("axiom 4: points {u} and {v} of class {class} are not joined by mono-coloured flats")]
    DisconnectedClass { class: usize, u: usize, v: usize },
    #[error("not a net: base flat {flat:?} has n_X = {n_x}")]
    NotANet { flat: Vec<usize>, n_x: u64 },
    #[error("cocycle is constant")]
    ConstantCocycle,
    #[error("cocycle is not special")]
    NotSpecial,
    #[error("expected a 3-net, got {0} classes")]
    NotThreeNet(usize),
    #[error("invalid Latin square: {0}")]
    InvalidLatinSquare(String),
    #[error("label count {0} unsupported")]
    UnsupportedK(usize),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
}

/// A verified multinet. Multiplicities are normalized to have gcd one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multinet {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub multiplicities: Vec<u64>,
    /// Multi-coloured long flats, sorted.
    pub base_locus: Vec<Vec<usize>>,
    /// `n_X` for each flat of the base locus, in the same order.
    pub n_x: Vec<u64>,
    pub weight: u64,
}

impl Multinet {
    pub fn is_reduced(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    pub fn is_net(&self) -> bool {
        self.is_reduced() && self.n_x.iter().all(|&x| x == 1)
    }
}

/// Check the four multinet axioms, deriving the base locus as the set of
/// multi-coloured flats.
pub fn verify_multinet(m: &Matroid, assignment: &[usize], mult: &[u64]) -> Result<Multinet, NetError> {
    let n = m.n();
    for len in [assignment.len(), mult.len()] {
        if len != n {
            return Err(NetError::LengthMismatch { expected: n, got: len });
        }
    }
    if let Some(u) = mult.iter().position(|&x| x == 0) {
        return Err(NetError::ZeroMultiplicity(u));
    }
    let k = assignment.iter().max().map_or(0, |&a| a + 1);
    if k < 3 {
        return Err(NetError::TooFewClasses(k));
    }
    let g = mult.iter().fold(0u64, |g, &x| g.gcd(&x));
    let mult: Vec<u64> = mult.iter().map(|&x| x / g).collect();

    let mut weights = vec![0u64; k];
    for u in 0..n {
        weights[assignment[u]] += mult[u];
    }
    if let Some(class) = weights.iter().position(|&w| w == 0) {
        return Err(NetError::EmptyClass(class));
    }
    if let Some(class) = weights.iter().position(|&w| w != weights[0]) {
        return Err(NetError::UnequalWeights { class, weight: weights[class], expected: weights[0] });
    }

    if let Some((u, v)) = m.implicit_pairs().find(|&(u, v)| assignment[u] != assignment[v]) {
        return Err(NetError::CrossPairOnDoublePoint { u, v });
    }

    let mut base_locus = Vec::new();
    let mut n_x = Vec::new();
    let mut in_base = vec![false; m.long_flats().len()];
    for (idx, flat) in m.long_flats().iter().enumerate() {
        let mut w = vec![0u64; k];
        for &u in flat {
            w[assignment[u]] += mult[u];
        }
        if w.iter().filter(|&&x| x > 0).count() <= 1 {
            continue;
        }
        if w.iter().any(|&x| x != w[0]) {
            return Err(NetError::UnbalancedFlat { flat: flat.clone(), weights: w });
        }
        in_base[idx] = true;
        base_locus.push(flat.clone());
        n_x.push(w[0]);
    }

    // Same-class pairs whose flat is outside the base locus are the edges.
    let mut part = resonance::Partition::new(n);
    for (u, v) in m.implicit_pairs() {
        part.union(u, v);
    }
    for (idx, flat) in m.long_flats().iter().enumerate() {
        if !in_base[idx] {
            part.union_all(flat);
        }
    }
    let mut first_of_class = vec![usize::MAX; k];
    for u in 0..n {
        let c = assignment[u];
        if first_of_class[c] == usize::MAX {
            first_of_class[c] = u;
        } else if part.find(u) != part.find(first_of_class[c]) {
            return Err(NetError::DisconnectedClass { class: c, u: first_of_class[c], v: u });
        }
    }

    Ok(Multinet { k, assignment: assignment.to_vec(), multiplicities: mult, base_locus, n_x, weight: weights[0] })
}

pub fn is_net(mn: &Multinet) -> bool {
    mn.is_net()
}

/// Whether every reduced `k`-multinet on `m` is a net: no flat has size `k r`
/// with `r > 1`.
pub fn reduced_forces_net(m: &Matroid, k: usize) -> bool {
    m.long_flats().iter().all(|f| f.len() <= k || f.len() % k != 0)
}

/// A verified `k`-net.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetStructure {
    k: usize,
    assignment: Vec<usize>,
    base_locus: Vec<Vec<usize>>,
}

impl NetStructure {
    pub fn new(m: &Matroid, assignment: Vec<usize>) -> Result<Self, NetError> {
        let mn = verify_multinet(m, &assignment, &vec![1; assignment.len()])?;
        if let Some(i) = mn.n_x.iter().position(|&x| x != 1) {
            return Err(NetError::NotANet { flat: mn.base_locus[i].clone(), n_x: mn.n_x[i] });
        }
        Ok(Self { k: mn.k, assignment, base_locus: mn.base_locus })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn base_locus(&self) -> &[Vec<usize>] {
        &self.base_locus
    }

    /// Common class size `n / k`.
    pub fn class_size(&self) -> usize {
        self.assignment.len() / self.k
    }

    /// Points of class `alpha`, ascending.
    pub fn class(&self, alpha: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&u| self.assignment[u] == alpha).collect()
    }

    /// Relabel classes: class `a` becomes `perm[a]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self {
            k: self.k,
            assignment: self.assignment.iter().map(|&a| perm[a]).collect(),
            base_locus: self.base_locus.clone(),
        }
    }

    /// Orbit representative under relabelling: classes numbered by first occurrence.
    pub fn canonical(&self) -> Self {
        Self { k: self.k, assignment: canonical_labels(&self.assignment), base_locus: self.base_locus.clone() }
    }

    pub fn to_json(&self) -> NetJson {
        NetJson { k: self.k, parts: self.assignment.clone(), mult: None }
    }
}

/// Relabel so that labels appear in order of first occurrence.
pub fn canonical_labels(assignment: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    assignment
        .iter()
        .map(|&a| {
            let next = map.len();
            *map.entry(a).or_insert(next)
        })
        .collect()
}

/// Wire form: `{"k": .., "parts": [..], "mult": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetJson {
    pub k: usize,
    pub parts: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<u64>>,
}

/// The cocycle `λ(N)` labelling each point by its class.
pub fn lambda_of_net(net: &NetStructure) -> Cocycle {
    Cocycle { k: net.k, values: net.assignment.iter().map(|&a| a as u8).collect() }
}

/// The net whose classes are the level sets of a non-constant special cocycle.
pub fn net_from_cocycle(m: &Matroid, tau: &Cocycle) -> Result<NetStructure, NetError> {
    if tau.is_constant() {
        return Err(NetError::ConstantCocycle);
    }
    if !resonance::is_special(m, tau)? {
        return Err(NetError::NotSpecial);
    }
    let net = NetStructure::new(m, tau.values.iter().map(|&v| v as usize).collect())?;
    if net.k != tau.k {
        return Err(NetError::NotSpecial);
    }
    Ok(net)
}

/// One representative per relabelling orbit of `k`-nets, sorted.
pub fn enumerate_net_orbits(m: &Matroid, k: usize, exec: Exec) -> Result<Vec<NetStructure>, NetError> {
    let specials = resonance::special_cocycles(m, k, exec)?;
    let reps: BTreeSet<Vec<usize>> =
        specials.iter().map(|t| canonical_labels(&t.values.iter().map(|&v| v as usize).collect::<Vec<_>>())).collect();
    let nets = exec.map(reps.into_iter().collect(), |a| NetStructure::new(m, a));
    nets.into_iter().collect()
}

/// `(k^β - 1) / (k - 1)!` with `β` computed over the field of order `k`.
pub fn ess_bound(m: &Matroid, k: usize) -> Result<Rational64, NetError> {
    if !(k == 3 || k == 4) {
        return Err(NetError::UnsupportedK(k));
    }
    let field = FiniteField::of_order(k as u32).map_err(ResonanceError::from)?;
    let b = resonance::beta(m, &field) as u32;
    let num = (k as i64).pow(b) - 1;
    let den: i64 = (1..k as i64).product();
    Ok(Rational64::new(num, den))
}

/// A `d × d` array whose rows and columns are permutations of `0..d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatinSquare {
    entries: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn new(entries: Vec<Vec<usize>>) -> Result<Self, NetError> {
        let d = entries.len();
        if d == 0 {
            return Err(NetError::InvalidLatinSquare("empty".into()));
        }
        let is_perm = |line: Vec<usize>| {
            let mut seen = vec![false; d];
            line.into_iter().all(|x| x < d && !std::mem::replace(&mut seen[x], true))
        };
        for (i, row) in entries.iter().enumerate() {
            if row.len() != d || !is_perm(row.clone()) {
                return Err(NetError::InvalidLatinSquare(format!("row {i}")));
            }
        }
        for j in 0..d {
            if !is_perm(entries.iter().map(|r| r[j]).collect()) {
                return Err(NetError::InvalidLatinSquare(format!("column {j}")));
            }
        }
        Ok(Self { entries })
    }

    /// Addition table of `Z_d`.
    pub fn cyclic(d: usize) -> Self {
        Self { entries: (0..d).map(|i| (0..d).map(|j| (i + j) % d).collect()).collect() }
    }

    /// Addition table of `Z_2 × Z_2`.
    pub fn klein() -> Self {
        Self { entries: (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect() }
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i][j]
    }

    /// Whether the squares agree after permuting rows, columns and symbols.
    pub fn is_isotopic(&self, other: &LatinSquare) -> bool {
        let d = self.d();
        if d != other.d() {
            return false;
        }
        let perms = permutations(d);
        perms.iter().any(|rows| {
            perms.iter().any(|cols| {
                let mut sym = vec![usize::MAX; d];
                (0..d).all(|i| {
                    (0..d).all(|j| {
                        let a = self.entries[i][j];
                        let b = other.entries[rows[i]][cols[j]];
                        if sym[a] == usize::MAX {
                            sym[a] = b;
                        }
                        sym[a] == b
                    })
                })
            })
        })
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..d {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

/// The Latin square of a 3-net: row `i`, column `j` holds the position in
/// class 2 of the third point on the flat through the `i`-th point of class 0
/// and the `j`-th point of class 1 (classes listed in ascending order).
pub fn latin_square_of_3net(m: &Matroid, net: &NetStructure) -> Result<LatinSquare, NetError> {
    if net.k != 3 {
        return Err(NetError::NotThreeNet(net.k));
    }
    let classes: Vec<Vec<usize>> = (0..3).map(|a| net.class(a)).collect();
    let mut pos = vec![0; m.n()];
    for c in &classes {
        for (i, &u) in c.iter().enumerate() {
            pos[u] = i;
        }
    }
    let entries = classes[0]
        .iter()
        .map(|&r| {
            classes[1]
                .iter()
                .map(|&c| {
                    let flat = m.flat_of_pair(r, c).expect("distinct points");
                    let s = flat.points.iter().find(|&&w| net.assignment[w] == 2).expect("net flat meets every class");
                    pos[*s]
                })
                .collect()
        })
        .collect();
    LatinSquare::new(entries)
}
