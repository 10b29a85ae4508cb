//! Exact collinearity detection from homogeneous integer coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matroid::{Matroid, MatroidError};

/// Points of the projective plane, each a primitive integer triple whose
/// first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePointConfig {
    rows: Vec<[BigInt; 3]>,
}

impl ProjectivePointConfig {
    pub fn new(rows: Vec<[BigInt; 3]>) -> Result<Self, MatroidError> {
        let mut out: Vec<[BigInt; 3]> = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let row = normalize(row).ok_or(MatroidError::ZeroProjectivePoint(i))?;
            if let Some(j) = out.iter().position(|r| *r == row) {
                return Err(MatroidError::RepeatedProjectivePoint(j, i));
            }
            out.push(row);
        }
        Ok(Self { rows: out })
    }

    pub fn from_i64(rows: &[[i64; 3]]) -> Result<Self, MatroidError> {
        Self::new(rows.iter().map(|r| r.map(BigInt::from)).collect())
    }

    pub fn rows(&self) -> &[[BigInt; 3]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn normalize(mut row: [BigInt; 3]) -> Option<[BigInt; 3]> {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    let lead_negative = row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in &mut row {
        *x /= &g;
        if lead_negative {
            *x = -&*x;
        }
    }
    Some(row)
}

/// `det[a; b; c]`.
pub fn det3(a: &[BigInt; 3], b: &[BigInt; 3], c: &[BigInt; 3]) -> BigInt {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// The matroid of a point configuration: long flats are maximal collinear
/// sets of at least three points.
pub fn flats_from_projective_points(cfg: &ProjectivePointConfig) -> Result<Matroid, MatroidError> {
    let n = cfg.len();
    let rows = cfg.rows();
    let mut covered = vec![false; n * n];
    let mut flats = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if covered[u * n + v] {
                continue;
            }
            let mut line = vec![u, v];
            line.extend((v + 1..n).filter(|&w| det3(&rows[u], &rows[v], &rows[w]).is_zero()));
            for &a in &line {
                for &b in &line {
                    covered[a * n + b] = true;
                }
            }
            if line.len() >= 3 {
                flats.push(line);
            }
        }
    }
    Matroid::from_flats(n, flats)
}

/// Wire form: `{"points": [[a, b, c], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointConfigJson {
    pub points: Vec<[i64; 3]>,
}

impl TryFrom<PointConfigJson> for ProjectivePointConfig {
    type Error = MatroidError;

    fn try_from(j: PointConfigJson) -> Result<Self, Self::Error> {
        Self::from_i64(&j.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let cfg = ProjectivePointConfig::from_i64(&[[0, -2, 4], [3, 0, 0]]).unwrap();
        assert_eq!(cfg.rows()[0], [0, 1, -2].map(BigInt::from));
        assert_eq!(cfg.rows()[1], [1, 0, 0].map(BigInt::from));
        assert_eq!(
            ProjectivePointConfig::from_i64(&[[1, 2, 3], [-2, -4, -6]]).unwrap_err(),
            MatroidError::RepeatedProjectivePoint(0, 1)
        );
        assert_eq!(
            ProjectivePointConfig::from_i64(&[[0, 0, 0]]).unwrap_err(),
            MatroidError::ZeroProjectivePoint(0)
        );
    }

    #[test]
    fn generic_and_pencil() {
        let generic = ProjectivePointConfig::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert!(flats_from_projective_points(&generic).unwrap().long_flats().is_empty());
        let pencil = ProjectivePointConfig::from_i64(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 7, 0]]).unwrap();
        assert_eq!(flats_from_projective_points(&pencil).unwrap().long_flats(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn large_coordinates() {
        let big = BigInt::from(10).pow(40);
        let rows = vec![
            [big.clone(), BigInt::from(1), BigInt::from(0)],
            [BigInt::from(0), BigInt::from(0), BigInt::from(1)],
            [big.clone(), BigInt::from(1), big.clone()],
            [big.clone() + 1, BigInt::from(1), BigInt::from(0)],
        ];
        let cfg = ProjectivePointConfig::new(rows).unwrap();
        assert_eq!(flats_from_projective_points(&cfg).unwrap().long_flats(), &[vec![0, 1, 2]]);
    }
}
