//! Cocycle spaces over finite fields, Aomoto-Betti numbers and special
//! cocycles.
//!
//! A vector `τ` indexed by the points is a cocycle when, for every rank-2 flat
//! `X`, either `|X|` vanishes in the field and `τ` sums to zero on `X`, or `τ`
//! is constant on `X`. Pairs outside the long flats always force equality.
//!
//! A special cocycle over a `k`-element label set is a labelling whose
//! restriction to every rank-2 flat is constant or a bijection onto the labels.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::finfield::{FieldError, FiniteField};
use crate::linalg::Echelon;
use crate::matroid::Matroid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResonanceError {
    #[error("cocycle has {got} entries, matroid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("label {value} at point {point} is outside 0..{k}")]
    LabelOutOfRange { point: usize, value: u8, k: usize },
    #[error("label set size {0} unsupported (need 2..=32)")]
    UnsupportedLabelCount(usize),
    #[error("cocycle over {k} labels cannot be read in a field of order {order}")]
    FieldSizeMismatch { k: usize, order: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A labelling of the points by `0..k`. When a field of order `k` is in play,
/// labels are field element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cocycle {
    pub k: usize,
    pub values: Vec<u8>,
}

impl Cocycle {
    pub fn new(k: usize, values: Vec<u8>) -> Result<Self, ResonanceError> {
        if !(2..=32).contains(&k) {
            return Err(ResonanceError::UnsupportedLabelCount(k));
        }
        if let Some((point, &value)) = values.iter().enumerate().find(|(_, &v)| v as usize >= k) {
            return Err(ResonanceError::LabelOutOfRange { point, value, k });
        }
        Ok(Self { k, values })
    }

    pub fn constant(n: usize, k: usize, label: u8) -> Self {
        Self { k, values: vec![label; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `g ∘ τ` for a permutation `g` of the labels given as its image list.
    pub fn permute_labels(&self, perm: &[u8]) -> Self {
        Self { k: self.k, values: self.values.iter().map(|&v| perm[v as usize]).collect() }
    }
}

/// A subspace of `F^n` held as a reduced echelon basis.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    echelon: Echelon,
}

impl SubspaceBasis {
    pub fn from_vectors(field: &FiniteField, n: usize, vectors: &[Vec<u8>]) -> Self {
        let mut echelon = Echelon::new(field.clone(), n);
        for v in vectors {
            echelon.insert(v);
        }
        Self { echelon }
    }

    pub fn field(&self) -> &FiniteField {
        self.echelon.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.echelon.ncols()
    }

    pub fn dimension(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        self.echelon.rows()
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        v.len() == self.ambient_dim() && self.echelon.contains(v)
    }

    /// Whether the cocycle, read in this field, lies in the subspace.
    pub fn contains_cocycle(&self, tau: &Cocycle) -> Result<bool, ResonanceError> {
        let order = self.field().order();
        if tau.k != order as usize {
            return Err(ResonanceError::FieldSizeMismatch { k: tau.k, order });
        }
        Ok(self.contains(&tau.values))
    }

    /// `|subspace|`, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u128> {
        (self.field().order() as u128).checked_pow(self.dimension() as u32)
    }
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.field().order() == other.field().order()
            && self.field().modulus() == other.field().modulus()
            && self.basis() == other.basis()
    }
}

impl Eq for SubspaceBasis {}

/// Union-find over point indices.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn union_all(&mut self, points: &[usize]) -> bool {
        let mut changed = false;
        for w in points.windows(2) {
            changed |= self.union(w[0], w[1]);
        }
        changed
    }

    /// Class index per point, classes numbered by least member.
    pub(crate) fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for u in 0..n {
            let r = self.find(u);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out[u] = id[r];
        }
        (out, count)
    }
}

/// The cocycle space `Z_F(M)`.
pub fn cocycle_space(m: &Matroid, field: &FiniteField) -> SubspaceBasis {
    let n = m.n();
    let p = field.characteristic() as usize;
    let mut part = Partition::new(n);
    for (u, v) in m.implicit_pairs() {
        part.union(u, v);
    }
    for flat in m.long_flats() {
        if flat.len() % p != 0 {
            part.union_all(flat);
        }
    }
    let (class, count) = part.labels();
    let mut system = Echelon::new(field.clone(), count);
    for flat in m.long_flats().iter().filter(|f| f.len() % p == 0) {
        let mut row = vec![0i64; count];
        for &u in flat {
            row[class[u]] += 1;
        }
        let row: Vec<u8> = row.into_iter().map(|c| field.int_idx(c)).collect();
        system.insert(&row);
    }
    let vectors: Vec<Vec<u8>> = system
        .kernel()
        .into_iter()
        .map(|sol| (0..n).map(|u| sol[class[u]]).collect())
        .collect();
    SubspaceBasis::from_vectors(field, n, &vectors)
}

/// The coboundary space `B_F(M)`, spanned by the all-ones vector.
pub fn coboundary_space(n: usize, field: &FiniteField) -> SubspaceBasis {
    SubspaceBasis::from_vectors(field, n, &[vec![1; n]])
}

/// `β_p(M) = dim Z_F(M) - 1`; depends only on the characteristic of `F`.
pub fn beta(m: &Matroid, field: &FiniteField) -> usize {
    cocycle_space(m, field).dimension() - 1
}

/// Whether `τ` is constant or bijective on every rank-2 flat.
pub fn is_special(m: &Matroid, tau: &Cocycle) -> Result<bool, ResonanceError> {
    if tau.len() != m.n() {
        return Err(ResonanceError::LengthMismatch { expected: m.n(), got: tau.len() });
    }
    let ok_on = |flat: &[usize]| {
        let first = tau.values[flat[0]];
        if flat.iter().all(|&u| tau.values[u] == first) {
            return true;
        }
        if flat.len() != tau.k {
            return false;
        }
        let mut seen = 0u64;
        flat.iter().all(|&u| {
            let bit = 1u64 << tau.values[u];
            let fresh = seen & bit == 0;
            seen |= bit;
            fresh
        })
    };
    Ok(m.long_flats().iter().all(|f| ok_on(f)) && m.implicit_pairs().all(|(u, v)| ok_on(&[u, v])))
}

/// Reduction of the special-cocycle problem to class variables.
#[derive(Debug, Clone)]
struct SpecialProblem {
    k: usize,
    class: Vec<usize>,
    nvars: usize,
    /// Flats that must be constant or bijective, as lists of `k` distinct variables.
    constraints: Vec<Vec<usize>>,
    var_constraints: Vec<Vec<usize>>,
}

impl SpecialProblem {
    fn new(m: &Matroid, k: usize) -> Self {
        let n = m.n();
        let mut part = Partition::new(n);
        if k != 2 {
            for (u, v) in m.implicit_pairs() {
                part.union(u, v);
            }
        }
        for flat in m.long_flats() {
            if flat.len() != k {
                part.union_all(flat);
            }
        }
        // A size-k flat with two points forced equal cannot be bijective.
        loop {
            let mut changed = false;
            for flat in m.long_flats().iter().filter(|f| f.len() == k) {
                let mut roots: Vec<usize> = flat.iter().map(|&u| part.find(u)).collect();
                roots.sort_unstable();
                roots.dedup();
                if roots.len() > 1 && roots.len() < k {
                    changed |= part.union_all(flat);
                }
            }
            if !changed {
                break;
            }
        }
        let (class, nvars) = part.labels();
        let mut constraints: Vec<Vec<usize>> = Vec::new();
        let candidate_flats: Vec<Vec<usize>> = if k == 2 {
            m.implicit_pairs().map(|(u, v)| vec![u, v]).collect()
        } else {
            m.long_flats().iter().filter(|f| f.len() == k).cloned().collect()
        };
        for flat in candidate_flats {
            let mut vars: Vec<usize> = flat.iter().map(|&u| class[u]).collect();
            vars.sort_unstable();
            vars.dedup();
            if vars.len() == k {
                constraints.push(vars);
            }
        }
        constraints.sort();
        constraints.dedup();
        let mut var_constraints = vec![Vec::new(); nvars];
        for (ci, c) in constraints.iter().enumerate() {
            for &v in c {
                var_constraints[v].push(ci);
            }
        }
        Self { k, class, nvars, constraints, var_constraints }
    }
}

const UNSET: u8 = u8::MAX;

#[derive(Debug, Clone)]
struct SearchState {
    domain: Vec<u32>,
    value: Vec<u8>,
    trail: Vec<(usize, u32)>,
}

impl SearchState {
    fn new(p: &SpecialProblem) -> Self {
        let full = if p.k == 32 { u32::MAX } else { (1u32 << p.k) - 1 };
        Self { domain: vec![full; p.nvars], value: vec![UNSET; p.nvars], trail: Vec::new() }
    }

    fn restrict(&mut self, var: usize, mask: u32) -> bool {
        let d = self.domain[var];
        let nd = d & mask;
        if nd != d {
            self.trail.push((var, d));
            self.domain[var] = nd;
        }
        nd != 0
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, d) = self.trail.pop().expect("trail entry");
            self.domain[var] = d;
        }
    }

    /// Assign `var = color` and prune neighbours. Returns false on a wipe-out.
    fn assign(&mut self, p: &SpecialProblem, var: usize, color: u8) -> bool {
        self.value[var] = color;
        if !self.restrict(var, 1 << color) {
            return false;
        }
        for &ci in &p.var_constraints[var] {
            let vars = &p.constraints[ci];
            let mut assigned_mask = 0u32;
            let mut assigned = 0;
            for &v in vars {
                let c = self.value[v];
                if c != UNSET {
                    assigned += 1;
                    assigned_mask |= 1 << c;
                }
            }
            if assigned < 2 {
                continue;
            }
            let distinct = assigned_mask.count_ones() as usize;
            let prune = if distinct == 1 {
                assigned_mask
            } else if distinct == assigned {
                !assigned_mask
            } else {
                return false;
            };
            for &v in vars {
                if self.value[v] == UNSET && !self.restrict(v, prune) {
                    return false;
                }
            }
        }
        true
    }

    fn choose(&self, p: &SpecialProblem) -> Option<usize> {
        (0..p.nvars)
            .filter(|&v| self.value[v] == UNSET)
            .min_by_key(|&v| (self.domain[v].count_ones(), std::cmp::Reverse(p.var_constraints[v].len()), v))
    }

    fn search(&mut self, p: &SpecialProblem, out: &mut Vec<Vec<u8>>) {
        let Some(var) = self.choose(p) else {
            out.push(self.value.clone());
            return;
        };
        let mut d = self.domain[var];
        while d != 0 {
            let color = d.trailing_zeros() as u8;
            d &= d - 1;
            let mark = self.trail.len();
            if self.assign(p, var, color) {
                self.search(p, out);
            }
            self.value[var] = UNSET;
            self.undo(mark);
        }
    }
}

/// All non-constant special cocycles over `k` labels, sorted lexicographically.
pub fn special_cocycles(m: &Matroid, k: usize, exec: Exec) -> Result<Vec<Cocycle>, ResonanceError> {
    if !(2..=32).contains(&k) {
        return Err(ResonanceError::UnsupportedLabelCount(k));
    }
    let problem = SpecialProblem::new(m, k);
    if problem.nvars < 2 {
        return Ok(Vec::new());
    }
    // Split the search on the colours of the first two chosen variables.
    let mut tasks: Vec<[(usize, u8); 2]> = Vec::new();
    let mut root = SearchState::new(&problem);
    let first = root.choose(&problem).expect("at least one variable");
    for c1 in 0..k as u8 {
        let mark = root.trail.len();
        if root.assign(&problem, first, c1) {
            if let Some(second) = root.choose(&problem) {
                let mut d = root.domain[second];
                while d != 0 {
                    tasks.push([(first, c1), (second, d.trailing_zeros() as u8)]);
                    d &= d - 1;
                }
            }
        }
        root.value[first] = UNSET;
        root.undo(mark);
    }
    let base = SearchState::new(&problem);
    let solutions = exec.map(tasks, |task| {
        let mut state = base.clone();
        let mut out = Vec::new();
        if task.iter().all(|&(v, c)| state.assign(&problem, v, c)) {
            state.search(&problem, &mut out);
        }
        out
    });
    let mut result: Vec<Cocycle> = solutions
        .into_iter()
        .flatten()
        .map(|vals| Cocycle { k, values: problem.class.iter().map(|&c| vals[c]).collect() })
        .filter(|c| !c.is_constant())
        .collect();
    result.sort();
    result.dedup();
    Ok(result)
}

/// Outcome of comparing special cocycles over `F` with the cocycle space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaDichotomyReport {
    pub field_order: u32,
    /// Whether the elements of the field sum to zero.
    pub sigma_vanishes: bool,
    pub cocycle_dimension: usize,
    /// Number of special cocycles, constants included.
    pub special_count: usize,
    /// Number of special cocycles lying in the cocycle space, constants included.
    pub special_in_cocycles: usize,
    pub special_subset_of_cocycles: bool,
    pub special_equals_cocycles: bool,
    /// Whether only the constants are both special and cocycles.
    pub intersection_is_constants: bool,
}

/// Compare the special cocycles over the labels of `F` with `Z_F(M)`.
pub fn sigma_dichotomy_check(m: &Matroid, field: &FiniteField, exec: Exec) -> Result<SigmaDichotomyReport, ResonanceError> {
    let q = field.order() as usize;
    let z = cocycle_space(m, field);
    let specials = special_cocycles(m, q, exec)?;
    let mut inside = 0;
    for tau in &specials {
        if z.contains_cocycle(tau)? {
            inside += 1;
        }
    }
    let special_count = specials.len() + q;
    let special_in_cocycles = inside + q;
    let subset = inside == specials.len();
    Ok(SigmaDichotomyReport {
        field_order: field.order(),
        sigma_vanishes: field.sum_of_elements().is_zero(),
        cocycle_dimension: z.dimension(),
        special_count,
        special_in_cocycles,
        special_subset_of_cocycles: subset,
        special_equals_cocycles: subset && z.cardinality() == Some(special_count as u128),
        intersection_is_constants: inside == 0,
    })
}

/// The action of a permutation of `F_3` on an `F_3`-valued cocycle.
pub fn sigma3_action_on_cocycles(tau: &Cocycle, g: [u8; 3]) -> Result<Cocycle, ResonanceError> {
    if tau.k != 3 {
        return Err(ResonanceError::FieldSizeMismatch { k: tau.k, order: 3 });
    }
    Ok(tau.permute_labels(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn f(q: u32) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    #[test]
    fn braid_cocycles() {
        let braid = catalog::braid();
        let z = cocycle_space(&braid, &f(3));
        assert_eq!(z.dimension(), 2);
        assert!(z.contains(&[1; 6]));
        assert_eq!(beta(&braid, &f(2)), 0);
        assert_eq!(beta(&braid, &f(5)), 0);
    }

    #[test]
    fn known_betas() {
        assert_eq!(beta(&catalog::monomial(3).unwrap(), &f(3)), 2);
        assert_eq!(beta(&catalog::hessian(), &f(2)), 2);
        assert_eq!(beta(&catalog::hessian(), &f(4)), 2);
        for p in [2, 3, 5] {
            assert_eq!(beta(&catalog::b3(), &f(p)), 0);
        }
        for m in 1..=4 {
            assert_eq!(beta(&catalog::matroid_m(m).unwrap(), &f(3)), m);
        }
    }

    #[test]
    fn special_predicate() {
        let braid = catalog::braid();
        let lambda = Cocycle::new(3, vec![0, 1, 2, 2, 1, 0]).unwrap();
        assert!(is_special(&braid, &lambda).unwrap());
        assert!(is_special(&braid, &Cocycle::constant(6, 3, 1)).unwrap());
        let pencil = Matroid::from_flats(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(!is_special(&pencil, &Cocycle::new(3, vec![0, 0, 1]).unwrap()).unwrap());
        assert!(is_special(&braid, &Cocycle::new(3, vec![0, 1]).unwrap()).is_err());
    }

    #[test]
    fn special_counts() {
        let braid = catalog::braid();
        let s = special_cocycles(&braid, 3, Exec::Sequential).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.iter().all(|t| is_special(&braid, t).unwrap()));
        assert_eq!(special_cocycles(&catalog::monomial(3).unwrap(), 3, Exec::Parallel).unwrap().len(), 24);
        assert_eq!(special_cocycles(&catalog::hessian(), 4, Exec::Parallel).unwrap().len(), 24);
        assert!(special_cocycles(&Matroid::uniform(5).unwrap(), 3, Exec::Parallel).unwrap().is_empty());
        assert!(special_cocycles(&catalog::pappus(), 5, Exec::Parallel).unwrap().is_empty());
    }

    #[test]
    fn dichotomy() {
        let ceva = catalog::monomial(3).unwrap();
        let r = sigma_dichotomy_check(&ceva, &f(3), Exec::Parallel).unwrap();
        assert!(r.sigma_vanishes && r.special_equals_cocycles);
        let r = sigma_dichotomy_check(&catalog::hessian(), &f(4), Exec::Parallel).unwrap();
        assert!(r.special_subset_of_cocycles && !r.special_equals_cocycles);
        assert_eq!((r.special_count, r.cocycle_dimension), (28, 3));
        let r = sigma_dichotomy_check(&catalog::matroid_m(1).unwrap(), &f(3), Exec::Parallel).unwrap();
        assert!(r.special_equals_cocycles);
        // Over F_2 the elements sum to one: only constants are special cocycles.
        let r = sigma_dichotomy_check(&catalog::braid(), &f(2), Exec::Parallel).unwrap();
        assert!(!r.sigma_vanishes && r.intersection_is_constants);
    }

    #[test]
    fn label_actions() {
        let lambda = Cocycle::new(3, vec![0, 1, 2, 2, 1, 0]).unwrap();
        let shifted = sigma3_action_on_cocycles(&lambda, [1, 2, 0]).unwrap();
        assert_eq!(shifted.values, vec![1, 2, 0, 0, 2, 1]);
        let negated = sigma3_action_on_cocycles(&lambda, [0, 2, 1]).unwrap();
        assert_eq!(negated.values, vec![0, 2, 1, 1, 2, 0]);
        assert_eq!(sigma3_action_on_cocycles(&lambda, [0, 1, 2]).unwrap(), lambda);
    }
}
