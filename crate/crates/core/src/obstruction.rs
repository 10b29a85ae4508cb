//! Non-realizability certificates: triples of independent 3-nets and the
//! Hirzebruch-Miyaoka-Yau line-count inequality.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::finfield::FiniteField;
use crate::linalg;
use crate::matroid::Matroid;
use crate::nets::{NetError, NetStructure};
use crate::resonance::{self, Cocycle, ResonanceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("points have different lengths {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("coordinate {0} is not in F_3")]
    NotInF3(u8),
    #[error("only 3-nets can be intersected, got a {0}-net")]
    NotThreeNet(usize),
    #[error("expected between 1 and 5 nets, got {0}")]
    NetCount(usize),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
}

/// `q(v, w) = -v - w` for `v != w`, and `q(v, v) = v`, over `F_3^m`.
pub fn q_map(v: &[u8], w: &[u8]) -> Result<Vec<u8>, ObstructionError> {
    if v.len() != w.len() {
        return Err(ObstructionError::DimensionMismatch(v.len(), w.len()));
    }
    if let Some(&bad) = v.iter().chain(w).find(|&&x| x > 2) {
        return Err(ObstructionError::NotInF3(bad));
    }
    if v == w {
        return Ok(v.to_vec());
    }
    Ok(v.iter().zip(w).map(|(&a, &b)| (6 - a - b) % 3).collect())
}

fn point_index(v: &[u8]) -> usize {
    v.iter().fold(0, |acc, &c| acc * 3 + c as usize)
}

fn point_of(index: usize, m: usize) -> Vec<u8> {
    let mut out = vec![0u8; m];
    let mut x = index;
    for slot in out.iter_mut().rev() {
        *slot = (x % 3) as u8;
        x /= 3;
    }
    out
}

/// Smallest subset of `F_3^m` containing `s` and closed under `q`.
pub fn closure_cbar(m: usize, s: &BTreeSet<Vec<u8>>) -> Result<BTreeSet<Vec<u8>>, ObstructionError> {
    for v in s {
        if v.len() != m {
            return Err(ObstructionError::DimensionMismatch(m, v.len()));
        }
        if let Some(&bad) = v.iter().find(|&&x| x > 2) {
            return Err(ObstructionError::NotInF3(bad));
        }
    }
    let size = 3usize.pow(m as u32);
    let mut inside = vec![false; size];
    let mut members: Vec<usize> = Vec::new();
    for v in s {
        let i = point_index(v);
        if !std::mem::replace(&mut inside[i], true) {
            members.push(i);
        }
    }
    let coords: Vec<Vec<u8>> = (0..size).map(|i| point_of(i, m)).collect();
    let mut frontier = 0;
    // Each new point only needs pairing with points already present.
    while frontier < members.len() {
        let u = members[frontier];
        for j in 0..=frontier {
            let w = members[j];
            if u == w {
                continue;
            }
            let r = point_index(&q_map(&coords[u], &coords[w]).expect("valid points"));
            if !std::mem::replace(&mut inside[r], true) {
                members.push(r);
            }
        }
        frontier += 1;
    }
    Ok(members.into_iter().map(|i| coords[i].clone()).collect())
}

/// Blocks `A_v` of a family of 3-nets and the properties derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub m: usize,
    /// `|A_v|` for `v` in lexicographic order over `F_3^m`.
    pub block_sizes: Vec<usize>,
    /// Every block is non-empty.
    pub intersection: bool,
    /// Every block has the same positive size.
    pub strong_intersection: bool,
    /// Every triple of blocks along a line of `F_3^m` carries a 3-net.
    pub net_property: bool,
    /// The `q`-closure of the set of non-empty blocks is all of `F_3^m`.
    pub closure_is_everything: bool,
    /// `λ` of the nets together with the constants are independent over `F_3`.
    pub independent: bool,
}

impl IntersectionReport {
    pub fn block_size(&self, v: &[u8]) -> usize {
        self.block_sizes[point_index(v)]
    }
}

pub fn intersection_property(m: &Matroid, nets: &[NetStructure]) -> Result<IntersectionReport, ObstructionError> {
    let k = nets.len();
    if !(1..=5).contains(&k) {
        return Err(ObstructionError::NetCount(k));
    }
    if let Some(bad) = nets.iter().find(|n| n.k() != 3) {
        return Err(ObstructionError::NotThreeNet(bad.k()));
    }
    let size = 3usize.pow(k as u32);
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); size];
    for u in 0..m.n() {
        let v: Vec<u8> = nets.iter().map(|n| n.assignment()[u] as u8).collect();
        blocks[point_index(&v)].push(u);
    }
    let block_sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let intersection = block_sizes.iter().all(|&s| s > 0);
    let strong_intersection = intersection && block_sizes.iter().all(|&s| s == block_sizes[0]);

    let net_property = intersection
        && (0..size).all(|a| {
            (a + 1..size).all(|b| {
                let c = point_index(&q_map(&point_of(a, k), &point_of(b, k)).expect("valid points"));
                if c < b {
                    return true;
                }
                let mut support: Vec<usize> = [a, b, c].iter().flat_map(|&i| blocks[i].iter().copied()).collect();
                support.sort_unstable();
                let Ok((sub, map)) = m.restrict(&support) else { return false };
                let assignment = map
                    .iter()
                    .map(|u| [a, b, c].iter().position(|&i| blocks[i].contains(u)).expect("in a block"))
                    .collect();
                NetStructure::new(&sub, assignment).is_ok()
            })
        });

    let occupied: BTreeSet<Vec<u8>> = (0..size).filter(|&i| block_sizes[i] > 0).map(|i| point_of(i, k)).collect();
    let closure_is_everything = closure_cbar(k, &occupied)?.len() == size;

    let f3 = FiniteField::prime(3).expect("3 is prime");
    let mut rows = vec![vec![1u8; m.n()]];
    rows.extend(nets.iter().map(|n| n.assignment().iter().map(|&a| a as u8).collect()));
    let independent = linalg::rank(&f3, m.n(), &rows) == k + 1;

    Ok(IntersectionReport {
        m: k,
        block_sizes,
        intersection,
        strong_intersection,
        net_property,
        closure_is_everything,
        independent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionKind {
    #[serde(rename = "INDEPENDENT_3NETS")]
    Independent3Nets,
    Hmy,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Conclusion {
    NotRealizable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// Three special cocycles over `F_3` independent modulo the constants.
    NetTriple { cocycles: Vec<Cocycle>, nets: Vec<Vec<usize>>, intersection: IntersectionReport },
    /// Flat counts `t_i` and both sides of the inequality, as exact fractions.
    Tally { n: usize, t: BTreeMap<usize, usize>, lhs: String, rhs: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionVerdict {
    pub kind: ObstructionKind,
    pub conclusion: Conclusion,
    pub certificate: Option<Certificate>,
    pub reason: String,
}

/// Search for three 3-nets whose cocycles are independent modulo constants.
pub fn independent_3net_triple(m: &Matroid, exec: Exec) -> Result<ObstructionVerdict, ObstructionError> {
    let f3 = FiniteField::prime(3).expect("3 is prime");
    let specials = resonance::special_cocycles(m, 3, exec)?;
    let mut ech = linalg::Echelon::new(f3, m.n());
    ech.insert(&vec![1; m.n()]);
    let mut chosen: Vec<Cocycle> = Vec::new();
    for tau in &specials {
        if chosen.len() == 3 {
            break;
        }
        if ech.insert(&tau.values) {
            chosen.push(tau.clone());
        }
    }
    if chosen.len() < 3 {
        return Ok(ObstructionVerdict {
            kind: ObstructionKind::Independent3Nets,
            conclusion: Conclusion::Inconclusive,
            certificate: None,
            reason: format!("special cocycles span {} dimensions modulo constants", chosen.len()),
        });
    }
    let nets: Vec<NetStructure> = chosen
        .iter()
        .map(|t| crate::nets::net_from_cocycle(m, t))
        .collect::<Result<_, _>>()?;
    let intersection = intersection_property(m, &nets)?;
    Ok(ObstructionVerdict {
        kind: ObstructionKind::Independent3Nets,
        conclusion: Conclusion::NotRealizable,
        certificate: Some(Certificate::NetTriple {
            cocycles: chosen,
            nets: nets.iter().map(|n| n.assignment().to_vec()).collect(),
            intersection,
        }),
        reason: "three independent 3-nets cannot coexist on a complex line arrangement".into(),
    })
}

/// Re-check a net-triple certificate from scratch.
pub fn verify_net_triple(m: &Matroid, cocycles: &[Cocycle]) -> bool {
    if cocycles.len() != 3 {
        return false;
    }
    let f3 = FiniteField::prime(3).expect("3 is prime");
    let z = resonance::cocycle_space(m, &f3);
    let each_ok = cocycles.iter().all(|t| {
        t.k == 3
            && !t.is_constant()
            && resonance::is_special(m, t).unwrap_or(false)
            && z.contains_cocycle(t).unwrap_or(false)
    });
    let mut rows = vec![vec![1u8; m.n()]];
    rows.extend(cocycles.iter().map(|t| t.values.clone()));
    each_ok && linalg::rank(&f3, m.n(), &rows) == 4
}

/// `t_2 + (3/4) t_3 >= n + Σ_{i>=4} (i - 4) t_i`, required of complex line
/// arrangements without flats of size `n` or `n - 1`.
pub fn hmy_check(m: &Matroid) -> ObstructionVerdict {
    let n = m.n();
    let t = m.flat_tally();
    let get = |i: usize| *t.get(&i).unwrap_or(&0) as i64;
    let lhs = Rational64::from_integer(get(2)) + Rational64::new(3, 4) * get(3);
    let rhs = Rational64::from_integer(n as i64) + t.iter().filter(|(&i, _)| i >= 4).map(|(&i, &c)| (i as i64 - 4) * c as i64).sum::<i64>();
    let certificate = Some(Certificate::Tally { n, t: t.clone(), lhs: lhs.to_string(), rhs: rhs.to_string() });
    let (conclusion, reason) = if t.keys().any(|&i| i + 1 >= n) {
        (Conclusion::Inconclusive, "a flat contains all or all but one of the points".to_string())
    } else if lhs < rhs {
        (Conclusion::NotRealizable, format!("{lhs} < {rhs}"))
    } else {
        (Conclusion::Inconclusive, format!("{lhs} >= {rhs}"))
    };
    ObstructionVerdict { kind: ObstructionKind::Hmy, conclusion, certificate, reason }
}

/// Run every obstruction; the first that fires decides.
pub fn obstruct(m: &Matroid, exec: Exec) -> Result<Vec<ObstructionVerdict>, ObstructionError> {
    Ok(vec![independent_3net_triple(m, exec)?, hmy_check(m)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn set(points: &[[u8; 2]]) -> BTreeSet<Vec<u8>> {
        points.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn q_values() {
        assert_eq!(q_map(&[0, 0], &[0, 1]).unwrap(), vec![0, 2]);
        assert_eq!(q_map(&[1, 0], &[1, 1]).unwrap(), vec![1, 2]);
        assert_eq!(q_map(&[2, 1], &[2, 1]).unwrap(), vec![2, 1]);
        assert!(q_map(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn closures() {
        assert_eq!(closure_cbar(2, &set(&[[0, 0], [0, 1], [1, 0]])).unwrap().len(), 9);
        let line = set(&[[0, 0], [1, 1], [2, 2]]);
        assert_eq!(closure_cbar(2, &line).unwrap(), line);
        assert_eq!(closure_cbar(2, &set(&[[0, 0], [0, 1], [0, 2], [1, 1]])).unwrap().len(), 9);
    }

    #[test]
    fn ceva_pair() {
        let ceva = catalog::monomial(3).unwrap();
        let nets = crate::nets::enumerate_net_orbits(&ceva, 3, Exec::Parallel).unwrap();
        // any two distinct orbits give independent cocycles (β_3 = 2)
        let r = intersection_property(&ceva, &nets[..2]).unwrap();
        assert!(r.intersection && r.strong_intersection && r.net_property && r.independent);
        assert!(r.block_sizes.iter().all(|&s| s == 1));
    }

    #[test]
    fn duplicated_braid_net() {
        let braid = catalog::braid();
        let n = NetStructure::new(&braid, vec![0, 1, 2, 2, 1, 0]).unwrap();
        let g = n.permute(&[1, 2, 0]);
        let r = intersection_property(&braid, &[n, g]).unwrap();
        assert!(!r.intersection && !r.independent && !r.closure_is_everything);
        for i in 0..3u8 {
            for j in 0..3u8 {
                let on_graph = j == (i + 1) % 3;
                assert_eq!(r.block_size(&[i, j]) > 0, on_graph);
            }
        }
    }

    #[test]
    fn m3_obstructed() {
        let m3 = catalog::matroid_m(3).unwrap();
        let v = independent_3net_triple(&m3, Exec::Parallel).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotRealizable);
        let Some(Certificate::NetTriple { cocycles, intersection, .. }) = &v.certificate else { panic!() };
        assert!(verify_net_triple(&m3, cocycles));
        assert!(intersection.strong_intersection && intersection.net_property);
        assert_eq!(hmy_check(&m3).conclusion, Conclusion::Inconclusive);
        assert_eq!(
            independent_3net_triple(&catalog::monomial(3).unwrap(), Exec::Parallel).unwrap().conclusion,
            Conclusion::Inconclusive
        );
    }

    #[test]
    fn hmy() {
        let v = hmy_check(&catalog::matroid_mk(5, 2).unwrap());
        assert_eq!(v.conclusion, Conclusion::NotRealizable);
        let Some(Certificate::Tally { t, lhs, rhs, .. }) = &v.certificate else { panic!() };
        assert_eq!(t, &BTreeMap::from([(5, 30)]));
        assert_eq!((lhs.as_str(), rhs.as_str()), ("0", "55"));
        let Some(Certificate::Tally { lhs, .. }) = hmy_check(&catalog::matroid_m(3).unwrap()).certificate else { panic!() };
        assert_eq!(lhs, "351/4");
        assert_eq!(hmy_check(&Matroid::uniform(6).unwrap()).conclusion, Conclusion::Inconclusive);
        assert_eq!(hmy_check(&catalog::matroid_m(1).unwrap()).conclusion, Conclusion::Inconclusive);
    }
}
