//! Simple matroids of rank at most three, presented by their long rank-2 flats.
//!
//! Only flats of size at least three are stored. Any pair of points that does
//! not lie in a common long flat spans an implicit two-point flat.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::projective::{flats_from_projective_points, ProjectivePointConfig};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("a matroid needs at least one point")]
    EmptyGround,
    #[error("flat {flat:?} has index {index} outside 0..{n}")]
    IndexOutOfRange { flat: Vec<usize>, index: usize, n: usize },
    #[error("flat {0:?} has fewer than three points")]
    FlatTooSmall(Vec<usize>),
    #[error("flat {0:?} repeats a point")]
    RepeatedPointInFlat(Vec<usize>),
    #[error("flat {0:?} listed twice")]
    DuplicateFlat(Vec<usize>),
    #[error("flats {first:?} and {second:?} share points {u} and {v}")]
    FlatsShareTwoPoints { first: Vec<usize>, second: Vec<usize>, u: usize, v: usize },
    #[error("points must be distinct, got {0} twice")]
    SamePoint(usize),
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error("cannot restrict to the empty set")]
    EmptyRestriction,
    #[error("repeated projective point: rows {0} and {1} are proportional")]
    RepeatedProjectivePoint(usize, usize),
    #[error("row {0} is the zero vector")]
    ZeroProjectivePoint(usize),
}

/// A rank-2 flat with its points sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub points: Vec<usize>,
}

impl Flat {
    pub fn multiplicity(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.points.binary_search(&u).is_ok()
    }
}

/// A validated simple matroid of rank at most three.
#[derive(Debug, Clone)]
pub struct Matroid {
    n: usize,
    flats: Vec<Vec<usize>>,
    pair_flat: Vec<u32>,
    point_flats: Vec<Vec<usize>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.flats == other.flats
    }
}

impl Eq for Matroid {}

impl Matroid {
    /// Validate and canonicalize a flat list.
    pub fn from_flats(n: usize, flats: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        if n == 0 {
            return Err(MatroidError::EmptyGround);
        }
        let mut canon = Vec::with_capacity(flats.len());
        for mut flat in flats {
            flat.sort_unstable();
            if let Some(&bad) = flat.iter().find(|&&i| i >= n) {
                return Err(MatroidError::IndexOutOfRange { flat, index: bad, n });
            }
            if flat.windows(2).any(|w| w[0] == w[1]) {
                return Err(MatroidError::RepeatedPointInFlat(flat));
            }
            if flat.len() < 3 {
                return Err(MatroidError::FlatTooSmall(flat));
            }
            canon.push(flat);
        }
        canon.sort();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatroidError::DuplicateFlat(w[0].clone()));
        }
        let mut pair_flat = vec![NONE; n * n];
        for (idx, flat) in canon.iter().enumerate() {
            for (a, &u) in flat.iter().enumerate() {
                for &v in &flat[a + 1..] {
                    let prev = pair_flat[u * n + v];
                    if prev != NONE {
                        return Err(MatroidError::FlatsShareTwoPoints {
                            first: canon[prev as usize].clone(),
                            second: flat.clone(),
                            u,
                            v,
                        });
                    }
                    pair_flat[u * n + v] = idx as u32;
                    pair_flat[v * n + u] = idx as u32;
                }
            }
        }
        let mut point_flats = vec![Vec::new(); n];
        for (idx, flat) in canon.iter().enumerate() {
            for &u in flat {
                point_flats[u].push(idx);
            }
        }
        Ok(Self { n, flats: canon, pair_flat, point_flats })
    }

    /// The uniform matroid on `n` points: no three points collinear.
    pub fn uniform(n: usize) -> Result<Self, MatroidError> {
        Self::from_flats(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Long flats (size at least three), sorted.
    pub fn long_flats(&self) -> &[Vec<usize>] {
        &self.flats
    }

    /// Indices of the long flats through `u`.
    pub fn flats_through(&self, u: usize) -> &[usize] {
        &self.point_flats[u]
    }

    /// Index of the long flat containing `u` and `v`, if any.
    #[inline]
    pub fn long_flat_of_pair(&self, u: usize, v: usize) -> Option<usize> {
        let idx = self.pair_flat[u * self.n + v];
        (idx != NONE).then_some(idx as usize)
    }

    /// The unique flat spanned by `u` and `v`.
    pub fn flat_of_pair(&self, u: usize, v: usize) -> Result<Flat, MatroidError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(MatroidError::PointOutOfRange(w));
            }
        }
        if u == v {
            return Err(MatroidError::SamePoint(u));
        }
        Ok(match self.long_flat_of_pair(u, v) {
            Some(idx) => Flat { points: self.flats[idx].clone() },
            None => Flat { points: vec![u.min(v), u.max(v)] },
        })
    }

    /// Pairs `u < v` lying in no long flat.
    pub fn implicit_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| self.pair_flat[u * self.n + v] == NONE)
                .map(move |v| (u, v))
        })
    }

    /// Every rank-2 flat: the long flats followed by the implicit pairs.
    pub fn all_flats(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.flats.iter().cloned().chain(self.implicit_pairs().map(|(u, v)| vec![u, v]))
    }

    /// Sizes of the long flats.
    pub fn multiplicity_spectrum(&self) -> BTreeSet<usize> {
        self.flats.iter().map(Vec::len).collect()
    }

    /// `t_i`, the number of rank-2 flats of size `i`, including `t_2`.
    pub fn flat_tally(&self) -> BTreeMap<usize, usize> {
        let mut tally = BTreeMap::new();
        let mut covered = 0usize;
        for flat in &self.flats {
            *tally.entry(flat.len()).or_insert(0) += 1;
            covered += flat.len() * (flat.len() - 1) / 2;
        }
        let t2 = self.n * (self.n - 1) / 2 - covered;
        if t2 > 0 {
            tally.insert(2, t2);
        }
        tally
    }

    /// Whether `u`, `v`, `w` are pairwise distinct and collinear.
    pub fn collinear(&self, u: usize, v: usize, w: usize) -> bool {
        if u == v || v == w || u == w {
            return false;
        }
        match self.long_flat_of_pair(u, v) {
            Some(idx) => self.long_flat_of_pair(u, w) == Some(idx),
            None => false,
        }
    }

    /// Submatroid on `subset`. Returns the restriction together with the map
    /// from new indices to old ones (the sorted subset).
    pub fn restrict(&self, subset: &[usize]) -> Result<(Matroid, Vec<usize>), MatroidError> {
        let mut points: Vec<usize> = subset.to_vec();
        points.sort_unstable();
        points.dedup();
        if points.is_empty() {
            return Err(MatroidError::EmptyRestriction);
        }
        if let Some(&bad) = points.iter().find(|&&u| u >= self.n) {
            return Err(MatroidError::PointOutOfRange(bad));
        }
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &u) in points.iter().enumerate() {
            new_index[u] = i;
        }
        let flats = self
            .flats
            .iter()
            .map(|flat| {
                flat.iter().filter(|&&u| new_index[u] != usize::MAX).map(|&u| new_index[u]).collect::<Vec<_>>()
            })
            .filter(|f| f.len() >= 3)
            .collect();
        Ok((Matroid::from_flats(points.len(), flats)?, points))
    }

    /// Whether every pair of `subset` meeting `subset` in at least three points
    /// spans a flat contained in `subset`.
    pub fn is_line_closed(&self, subset: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &u in subset {
            if u < self.n {
                inside[u] = true;
            }
        }
        self.flats.iter().all(|flat| {
            let hits = flat.iter().filter(|&&u| inside[u]).count();
            hits < 3 || hits == flat.len()
        })
    }

    /// Relabel points: point `u` of `self` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Matroid, MatroidError> {
        let flats = self.flats.iter().map(|f| f.iter().map(|&u| perm[u]).collect()).collect();
        Matroid::from_flats(self.n, flats)
    }

    /// An isomorphism `self -> other` as a point map, found by backtracking.
    pub fn find_isomorphism(&self, other: &Matroid) -> Option<Vec<usize>> {
        if self.n != other.n || self.flats.len() != other.flats.len() {
            return None;
        }
        let sig = |m: &Matroid, u: usize| {
            let mut s: Vec<usize> = m.point_flats[u].iter().map(|&i| m.flats[i].len()).collect();
            s.sort_unstable();
            s
        };
        let sig_a: Vec<_> = (0..self.n).map(|u| sig(self, u)).collect();
        let sig_b: Vec<_> = (0..other.n).map(|u| sig(other, u)).collect();
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&u| std::cmp::Reverse(self.point_flats[u].len()));
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            a: &Matroid,
            b: &Matroid,
            order: &[usize],
            depth: usize,
            sig_a: &[Vec<usize>],
            sig_b: &[Vec<usize>],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if depth == order.len() {
                return true;
            }
            let u = order[depth];
            for cand in 0..b.n {
                if used[cand] || sig_a[u] != sig_b[cand] {
                    continue;
                }
                let consistent = order[..depth].iter().enumerate().all(|(i, &v)| {
                    let sa = a.long_flat_of_pair(u, v).map(|f| a.flats[f].len());
                    let sb = b.long_flat_of_pair(cand, map[v]).map(|f| b.flats[f].len());
                    sa == sb
                        && order[..i].iter().all(|&w| {
                            a.collinear(u, v, w) == b.collinear(cand, map[v], map[w])
                        })
                });
                if !consistent {
                    continue;
                }
                map[u] = cand;
                used[cand] = true;
                if rec(a, b, order, depth + 1, sig_a, sig_b, map, used) {
                    return true;
                }
                used[cand] = false;
                map[u] = usize::MAX;
            }
            false
        }
        if rec(self, other, &order, 0, &sig_a, &sig_b, &mut map, &mut used) {
            debug_assert_eq!(self.relabel(&map).ok().as_ref(), Some(other));
            Some(map)
        } else {
            None
        }
    }
}

/// Wire form: `{"n": <int>, "flats": [[i, j, k, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub flats: Vec<Vec<usize>>,
}

impl From<&Matroid> for MatroidJson {
    fn from(m: &Matroid) -> Self {
        Self { n: m.n, flats: m.flats.clone() }
    }
}

impl TryFrom<MatroidJson> for Matroid {
    type Error = MatroidError;

    fn try_from(j: MatroidJson) -> Result<Self, Self::Error> {
        Matroid::from_flats(j.n, j.flats)
    }
}

impl Serialize for Matroid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatroidJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matroid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatroidJson::deserialize(d)?;
        Matroid::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pencil() -> Matroid {
        Matroid::from_flats(3, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Matroid::from_flats(0, vec![]).unwrap_err(), MatroidError::EmptyGround);
        assert!(matches!(
            Matroid::from_flats(4, vec![vec![0, 1, 2], vec![1, 2, 3]]),
            Err(MatroidError::FlatsShareTwoPoints { u: 1, v: 2, .. })
        ));
        assert!(matches!(
            Matroid::from_flats(3, vec![vec![0, 1, 5]]),
            Err(MatroidError::IndexOutOfRange { index: 5, .. })
        ));
        assert!(matches!(Matroid::from_flats(3, vec![vec![0, 1]]), Err(MatroidError::FlatTooSmall(_))));
        assert!(matches!(
            Matroid::from_flats(3, vec![vec![0, 1, 2], vec![2, 1, 0]]),
            Err(MatroidError::DuplicateFlat(_))
        ));
        assert!(matches!(
            Matroid::from_flats(3, vec![vec![0, 1, 1]]),
            Err(MatroidError::RepeatedPointInFlat(_))
        ));
    }

    #[test]
    fn pair_flats() {
        let m = pencil();
        assert_eq!(m.flat_of_pair(0, 1).unwrap().points, vec![0, 1, 2]);
        let u = Matroid::uniform(4).unwrap();
        assert_eq!(u.flat_of_pair(3, 0).unwrap().points, vec![0, 3]);
        assert_eq!(u.flat_of_pair(2, 2).unwrap_err(), MatroidError::SamePoint(2));
        assert!(u.multiplicity_spectrum().is_empty());
        assert_eq!(u.flat_tally(), BTreeMap::from([(2, 6)]));
    }

    #[test]
    fn restriction_and_closure() {
        let m = pencil();
        let (r, map) = m.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(r, m);
        assert_eq!(map, vec![0, 1, 2]);
        let (r, _) = m.restrict(&[2, 0]).unwrap();
        assert!(r.long_flats().is_empty());
        assert!(m.is_line_closed(&[0, 1, 2]));
        assert!(m.is_line_closed(&[0, 1]));
        assert_eq!(m.restrict(&[]).unwrap_err(), MatroidError::EmptyRestriction);
    }

    #[test]
    fn isomorphism_search() {
        let a = Matroid::from_flats(6, vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 5], vec![2, 4, 5]]).unwrap();
        let perm = [5, 3, 1, 0, 4, 2];
        let b = a.relabel(&perm).unwrap();
        let iso = a.find_isomorphism(&b).unwrap();
        assert_eq!(a.relabel(&iso).unwrap(), b);
        let c = Matroid::from_flats(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(a.find_isomorphism(&c).is_none());
    }

    #[test]
    fn json_round_trip() {
        let m = Matroid::from_flats(5, vec![vec![4, 2, 0], vec![1, 2, 3]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n":5,"flats":[[0,2,4],[1,2,3]]}"#);
        let back: Matroid = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Matroid>(r#"{"n":4,"flats":[[0,1,2],[0,1,3]]}"#).is_err());
    }
}
