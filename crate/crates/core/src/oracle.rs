//! Brute-force reference computations, kept deliberately naive so they share
//! no search logic with the fast paths, and the diffs between the two.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::exec::Exec;
use crate::finfield::FiniteField;
use crate::linalg::Echelon;
use crate::matroid::{Matroid, ProjectivePointConfig};
use crate::nets::{self, canonical_labels, NetError};
use crate::projective::det3;
use crate::resonance::{self, Cocycle, ResonanceError, SubspaceBasis};

/// Largest ground set for the exhaustive coloring scan.
pub const MAX_SCAN_N: usize = 14;
/// Largest ground set for the exhaustive partition search.
pub const MAX_PARTITION_N: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("exhaustive mode needs n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("k must be between 2 and 32, got {0}")]
    BadK(usize),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Every non-constant vector in `{0..k}^n` that is constant or bijective on
/// every flat, pairs included. Plain odometer scan.
pub fn brute_special_cocycles(m: &Matroid, k: usize, exec: Exec) -> Result<Vec<Cocycle>, OracleError> {
    let n = m.n();
    if n > MAX_SCAN_N {
        return Err(OracleError::TooLarge { n, limit: MAX_SCAN_N });
    }
    if !(2..=32).contains(&k) {
        return Err(OracleError::BadK(k));
    }
    let flats: Vec<Vec<usize>> = m.all_flats().collect();
    let ok = |vals: &[u8]| {
        flats.iter().all(|f| {
            let first = vals[f[0]];
            if f.iter().all(|&u| vals[u] == first) {
                return true;
            }
            f.len() == k && f.iter().map(|&u| vals[u]).collect::<BTreeSet<_>>().len() == k
        })
    };
    // split on the first coordinate, scan the remaining n - 1 exhaustively
    let found = exec.flat_map_range(if n == 0 { 0 } else { k }, |head| {
        let mut vals = vec![0u8; n];
        vals[0] = head as u8;
        let mut out = Vec::new();
        loop {
            if vals.iter().any(|&x| x != vals[0]) && ok(&vals) {
                out.push(vals.clone());
            }
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return out;
                }
                vals[i] += 1;
                if (vals[i] as usize) < k {
                    break;
                }
                vals[i] = 0;
                i -= 1;
            }
        }
    });
    let mut res: Vec<Cocycle> = found.into_iter().map(|v| Cocycle { k, values: v }).collect();
    res.sort();
    Ok(res)
}

/// The cocycle space from the full linear system: for every flat `X`
/// (pairs included) and every `v ∈ X`, `Σ_{u ∈ X} τ_u - |X| τ_v = 0`.
pub fn brute_cocycle_space(m: &Matroid, field: &FiniteField) -> SubspaceBasis {
    let n = m.n();
    let mut system = Echelon::new(field.clone(), n);
    for flat in m.all_flats() {
        for &v in &flat {
            let mut row = vec![0i64; n];
            for &u in &flat {
                row[u] += 1;
            }
            row[v] -= flat.len() as i64;
            let row: Vec<u8> = row.into_iter().map(|c| field.int_idx(c)).collect();
            system.insert(&row);
        }
    }
    SubspaceBasis::from_vectors(field, n, &system.kernel())
}

/// Long flats of a point configuration from a scan over all triples.
pub fn determinant_scan_flats(cfg: &ProjectivePointConfig) -> Vec<Vec<usize>> {
    let rows = cfg.rows();
    let n = rows.len();
    let mut flats = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let mut line: Vec<usize> =
                (0..n).filter(|&w| w == u || w == v || det3(&rows[u], &rows[v], &rows[w]).is_zero()).collect();
            line.sort_unstable();
            if line.len() >= 3 {
                flats.insert(line);
            }
        }
    }
    flats.into_iter().collect()
}

/// All set partitions of `0..n` into exactly `k` blocks, as restricted growth
/// strings, that pass `verify_multinet` with unit multiplicities and are nets.
pub fn brute_nets(m: &Matroid, k: usize) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = m.n();
    if n > MAX_PARTITION_N {
        return Err(OracleError::TooLarge { n, limit: MAX_PARTITION_N });
    }
    let ones = vec![1u64; n];
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, used: usize, k: usize, rgs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if i == rgs.len() {
            if used == k {
                visit(rgs);
            }
            return;
        }
        if used + (rgs.len() - i) < k {
            return;
        }
        for c in 0..(used + 1).min(k) {
            rgs[i] = c;
            rec(i + 1, used.max(c + 1), k, rgs, visit);
        }
    }
    if n > 0 {
        rec(1, 1, k, &mut rgs, &mut |a| {
            if let Ok(mn) = nets::verify_multinet(m, a, &ones) {
                if mn.is_net() {
                    out.push(a.to_vec());
                }
            }
        });
    }
    Ok(out)
}

/// Outcome of one oracle run against the fast paths.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub k: usize,
    pub fast_special: usize,
    pub brute_special: usize,
    pub special_match: bool,
    /// `None` when `n` is beyond the partition search limit.
    pub fast_nets: Option<usize>,
    pub brute_nets: Option<usize>,
    pub nets_match: Option<bool>,
    pub cocycle_space_match: bool,
    pub counterexample: Option<String>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.special_match && self.nets_match != Some(false) && self.cocycle_space_match
    }
}

/// Runs the scans for one `k` and diffs them against the fast paths.
pub fn run(m: &Matroid, k: usize, exec: Exec) -> Result<OracleReport, OracleError> {
    let fast = resonance::special_cocycles(m, k, exec)?;
    let brute = brute_special_cocycles(m, k, exec)?;
    let mut counterexample = first_difference(&fast, &brute).map(|(side, c)| {
        format!("special cocycle {:?} found only by the {side} path", c.values)
    });

    let (mut fast_nets, mut brute_nets_count, mut nets_match) = (None, None, None);
    if m.n() <= MAX_PARTITION_N {
        let from_cocycles: BTreeSet<Vec<usize>> =
            fast.iter().map(|t| canonical_labels(&t.values.iter().map(|&v| v as usize).collect::<Vec<_>>())).collect();
        let searched: BTreeSet<Vec<usize>> = brute_nets(m, k)?.into_iter().collect();
        if counterexample.is_none() {
            counterexample = first_difference(&from_cocycles.iter().collect::<Vec<_>>(), &searched.iter().collect::<Vec<_>>())
                .map(|(side, a)| format!("net {a:?} found only by the {side} path"));
        }
        fast_nets = Some(from_cocycles.len());
        brute_nets_count = Some(searched.len());
        nets_match = Some(from_cocycles == searched);
    }

    let mut cocycle_space_match = true;
    for q in [2, 3, 4, 5] {
        let field = FiniteField::of_order(q).expect("prime power");
        if resonance::cocycle_space(m, &field) != brute_cocycle_space(m, &field) {
            cocycle_space_match = false;
            if counterexample.is_none() {
                counterexample = Some(format!("cocycle spaces differ over the field of order {q}"));
            }
        }
    }

    Ok(OracleReport {
        n: m.n(),
        k,
        fast_special: fast.len(),
        brute_special: brute.len(),
        special_match: fast == brute,
        fast_nets,
        brute_nets: brute_nets_count,
        nets_match,
        cocycle_space_match,
        counterexample,
    })
}

fn first_difference<T: Ord + Clone>(fast: &[T], brute: &[T]) -> Option<(&'static str, T)> {
    let a: BTreeSet<&T> = fast.iter().collect();
    let b: BTreeSet<&T> = brute.iter().collect();
    if let Some(x) = a.difference(&b).next() {
        return Some(("fast", (*x).clone()));
    }
    b.difference(&a).next().map(|x| ("brute-force", (*x).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn braid_scan() {
        let r = run(&catalog::braid(), 3, Exec::Parallel).unwrap();
        assert_eq!((r.fast_special, r.brute_special), (6, 6));
        assert!(r.agrees(), "{r:?}");
        assert_eq!(r.brute_nets, Some(1));
    }

    #[test]
    fn ceva_scan() {
        let r = run(&catalog::monomial(3).unwrap(), 3, Exec::Sequential).unwrap();
        assert_eq!((r.fast_special, r.brute_special), (24, 24));
        assert!(r.agrees(), "{r:?}");
        assert_eq!(r.brute_nets, Some(4));
    }

    #[test]
    fn uniform_scan() {
        let r = run(&Matroid::uniform(5).unwrap(), 3, Exec::Sequential).unwrap();
        assert_eq!((r.fast_special, r.brute_special), (0, 0));
        assert!(r.agrees());
    }

    #[test]
    fn determinant_scan_matches() {
        let cfg = catalog::pappus_config();
        let m = crate::matroid::flats_from_projective_points(&cfg).unwrap();
        let mut fast: Vec<Vec<usize>> = m.long_flats().to_vec();
        fast.sort();
        assert_eq!(determinant_scan_flats(&cfg), fast);
    }

    #[test]
    fn size_limits() {
        assert!(brute_special_cocycles(&catalog::hessian(), 3, Exec::Parallel).unwrap().is_empty());
        assert!(matches!(brute_nets(&catalog::hessian(), 4), Err(OracleError::TooLarge { .. })));
    }
}
