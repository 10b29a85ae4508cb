//! `sl_2`-valued flat connections on rank-3 matroids, in exact rational
//! arithmetic.
//!
//! A connection assigns a traceless `2 × 2` matrix `ω_u` to every point. It is
//! flat when `Σ_{v ∈ X} [ω_u, ω_v] = 0` for every rank-2 flat `X` and `u ∈ X`.
//! For `sl_2` this is equivalent to: on each flat, the `ω_v` sum to zero or
//! span at most a line. Both forms are implemented independently.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::Exec;
use crate::matroid::Matroid;
use crate::resonance::{self, Cocycle, ResonanceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlatError {
    #[error("coordinates of an H^k vector must sum to zero")]
    NonZeroSum,
    #[error("an H^k vector needs at least 3 coordinates, got {0}")]
    TooShort(usize),
    #[error("cocycle has {tau} labels but the vector has {x} coordinates")]
    LabelMismatch { tau: usize, x: usize },
    #[error("cocycle is constant")]
    ConstantCocycle,
    #[error("cocycle is not special")]
    NotSpecial,
    #[error("connection has {got} components, matroid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not traceless")]
    NotTraceless,
    #[error("malformed connection JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
}

/// `[[a, b], [c, -a]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sl2Element {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl Sl2Element {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        Self { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        Self::new(q(a), q(b), q(c))
    }

    /// From a full matrix, rejecting non-zero trace.
    pub fn from_matrix(m: [[BigRational; 2]; 2]) -> Result<Self, FlatError> {
        let [[a, b], [c, d]] = m;
        if !(&a + &d).is_zero() {
            return Err(FlatError::NotTraceless);
        }
        Ok(Self { a, b, c })
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn e() -> Self {
        Self::from_ints(0, 1, 0)
    }

    pub fn f() -> Self {
        Self::from_ints(0, 0, 1)
    }

    pub fn h() -> Self {
        Self::from_ints(1, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn matrix(&self) -> [[BigRational; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), -self.a.clone()]]
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a.clone(), -self.b.clone(), -self.c.clone())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(&self.a * s, &self.b * s, &self.c * s)
    }

    /// `XY - YX`, computed from the matrix products.
    pub fn bracket(&self, o: &Self) -> Self {
        let x = self.matrix();
        let y = o.matrix();
        let mul = |p: &[[BigRational; 2]; 2], r: &[[BigRational; 2]; 2]| {
            let mut out: [[BigRational; 2]; 2] = Default::default();
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = &p[i][0] * &r[0][j] + &p[i][1] * &r[1][j];
                }
            }
            out
        };
        let xy = mul(&x, &y);
        let yx = mul(&y, &x);
        let d = |i: usize, j: usize| &xy[i][j] - &yx[i][j];
        debug_assert_eq!(d(0, 0), -d(1, 1));
        Self::new(d(0, 0), d(0, 1), d(1, 0))
    }

    fn coords(&self) -> [BigRational; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }
}

/// Dimension of the span of a family of `sl_2` elements.
pub fn span_dimension<'a>(elems: impl IntoIterator<Item = &'a Sl2Element>) -> usize {
    let mut rows: Vec<[BigRational; 3]> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for e in elems {
        let mut r = e.coords();
        for (row, &p) in rows.iter().zip(&pivots) {
            if !r[p].is_zero() {
                let f = &r[p] / &row[p];
                for j in 0..3 {
                    r[j] = &r[j] - &f * &row[j];
                }
            }
        }
        if let Some(p) = (0..3).find(|&j| !r[j].is_zero()) {
            rows.push(r);
            pivots.push(p);
            if rows.len() == 3 {
                break;
            }
        }
    }
    rows.len()
}

/// A point of `H^k(sl_2)`: `k` elements summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkVector {
    coords: Vec<Sl2Element>,
}

impl HkVector {
    pub fn new(coords: Vec<Sl2Element>) -> Result<Self, FlatError> {
        if coords.len() < 3 {
            return Err(FlatError::TooShort(coords.len()));
        }
        let sum = coords.iter().fold(Sl2Element::zero(), |s, x| s.add(x));
        if !sum.is_zero() {
            return Err(FlatError::NonZeroSum);
        }
        Ok(Self { coords })
    }

    /// Random entries in `-bound..=bound`, with the last coordinate set to
    /// minus the sum of the others.
    pub fn random<R: Rng>(k: usize, bound: i64, rng: &mut R) -> Result<Self, FlatError> {
        if k < 3 {
            return Err(FlatError::TooShort(k));
        }
        let mut coords: Vec<Sl2Element> = (0..k - 1).map(|_| random_sl2(bound, rng)).collect();
        let sum = coords.iter().fold(Sl2Element::zero(), |s, x| s.add(x));
        coords.push(sum.neg());
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[Sl2Element] {
        &self.coords
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn rank(&self) -> usize {
        span_dimension(&self.coords)
    }

    pub fn is_regular(&self) -> bool {
        self.rank() > 1
    }
}

pub fn random_sl2<R: Rng>(bound: i64, rng: &mut R) -> Sl2Element {
    Sl2Element::from_ints(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

/// One `sl_2` element per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionVector {
    pub omega: Vec<Sl2Element>,
}

impl ConnectionVector {
    pub fn new(omega: Vec<Sl2Element>) -> Self {
        Self { omega }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn rank(&self) -> usize {
        span_dimension(&self.omega)
    }

    /// Per point `[[a, b], [c, -a]]`, each entry a `[numerator, denominator]` pair.
    pub fn to_json(&self) -> Value {
        let r = |x: &BigRational| json!([int_json(x.numer()), int_json(x.denom())]);
        Value::Array(
            self.omega
                .iter()
                .map(|w| json!([[r(&w.a), r(&w.b)], [r(&w.c), r(&-w.a.clone())]]))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, FlatError> {
        let bad = |s: &str| FlatError::Json(s.into());
        let arr = v.as_array().ok_or_else(|| bad("expected an array of matrices"))?;
        let omega = arr
            .iter()
            .map(|m| {
                let rows = m.as_array().filter(|r| r.len() == 2).ok_or_else(|| bad("expected 2 rows"))?;
                let mut entries: [[BigRational; 2]; 2] = Default::default();
                for (i, row) in rows.iter().enumerate() {
                    let cols = row.as_array().filter(|c| c.len() == 2).ok_or_else(|| bad("expected 2 columns"))?;
                    for (j, e) in cols.iter().enumerate() {
                        entries[i][j] = rational_from_json(e).ok_or_else(|| bad("expected [num, den]"))?;
                    }
                }
                Sl2Element::from_matrix(entries)
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { omega })
    }
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn rational_from_json(v: &Value) -> Option<BigRational> {
    match v {
        Value::Array(p) if p.len() == 2 => {
            let num = int_from_json(&p[0])?;
            let den = int_from_json(&p[1])?;
            (!den.is_zero()).then(|| BigRational::new(num, den))
        }
        other => int_from_json(other).map(BigRational::from_integer),
    }
}

fn check_len(m: &Matroid, w: &ConnectionVector) -> Result<(), FlatError> {
    if w.len() != m.n() {
        return Err(FlatError::LengthMismatch { expected: m.n(), got: w.len() });
    }
    Ok(())
}

/// Flatness via the `sl_2` criterion: on each flat the components sum to
/// zero or span at most a line.
pub fn is_flat(m: &Matroid, w: &ConnectionVector) -> Result<bool, FlatError> {
    check_len(m, w)?;
    let ok = |flat: &[usize]| {
        let sum = flat.iter().fold(Sl2Element::zero(), |s, &u| s.add(&w.omega[u]));
        sum.is_zero() || span_dimension(flat.iter().map(|&u| &w.omega[u])) <= 1
    };
    Ok(m.long_flats().iter().all(|f| ok(f)) && m.implicit_pairs().all(|(u, v)| ok(&[u, v])))
}

/// Flatness via the bracket equations `Σ_{v ∈ X} [ω_u, ω_v] = 0`.
pub fn is_flat_brackets(m: &Matroid, w: &ConnectionVector) -> Result<bool, FlatError> {
    check_len(m, w)?;
    let ok = |flat: &[usize]| {
        flat.iter().all(|&u| {
            flat.iter()
                .fold(Sl2Element::zero(), |s, &v| s.add(&w.omega[u].bracket(&w.omega[v])))
                .is_zero()
        })
    };
    Ok(m.long_flats().iter().all(|f| ok(f)) && m.implicit_pairs().all(|(u, v)| ok(&[u, v])))
}

/// Components span at least a plane.
pub fn is_regular(w: &ConnectionVector) -> bool {
    w.rank() >= 2
}

/// `ev_τ(x)_u = x_{τ(u)}` for a non-constant special cocycle `τ`.
pub fn ev_tau(m: &Matroid, tau: &Cocycle, x: &HkVector) -> Result<ConnectionVector, FlatError> {
    if tau.k != x.k() {
        return Err(FlatError::LabelMismatch { tau: tau.k, x: x.k() });
    }
    if tau.is_constant() {
        return Err(FlatError::ConstantCocycle);
    }
    if !resonance::is_special(m, tau)? {
        return Err(FlatError::NotSpecial);
    }
    Ok(ConnectionVector::new(tau.values.iter().map(|&l| x.coords[l as usize].clone()).collect()))
}

/// `ω_u = m_u x_{α(u)}` for a class assignment with multiplicities.
pub fn weighted_class_connection(assignment: &[usize], mult: &[u64], x: &HkVector) -> ConnectionVector {
    ConnectionVector::new(
        assignment.iter().zip(mult).map(|(&a, &mu)| x.coords[a].scale(&q(mu as i64))).collect(),
    )
}

/// The regular flat connection on `B_3` built from its `(3, 4)`-multinet,
/// with `x = (e, f, -e - f)`.
pub fn b3_witness_connection() -> (Matroid, ConnectionVector) {
    let b3 = crate::catalog::b3();
    let x = HkVector::new(vec![Sl2Element::e(), Sl2Element::f(), Sl2Element::e().add(&Sl2Element::f()).neg()])
        .expect("sums to zero");
    let two = q(2);
    let [x0, x1, x2] = [&x.coords[0], &x.coords[1], &x.coords[2]];
    // H12^{0,1}, H23^{0,1}, H13^{0,1}, then the coordinate lines x, y, z
    let omega = vec![
        x0.clone(),
        x0.clone(),
        x1.clone(),
        x1.clone(),
        x2.clone(),
        x2.clone(),
        x1.scale(&two),
        x2.scale(&two),
        x0.scale(&two),
    ];
    (b3, ConnectionVector::new(omega))
}

/// A special cocycle `τ` and `x` with `ω = ev_τ(x)`, if one exists.
pub fn find_ev_preimage(m: &Matroid, w: &ConnectionVector, exec: Exec) -> Result<Option<(Cocycle, HkVector)>, FlatError> {
    check_len(m, w)?;
    let max_k = m.long_flats().iter().map(Vec::len).max().unwrap_or(2);
    for k in 3..=max_k.min(32) {
        for tau in resonance::special_cocycles(m, k, exec)? {
            let mut x: Vec<Option<&Sl2Element>> = vec![None; k];
            let consistent = tau.values.iter().zip(&w.omega).all(|(&l, om)| match x[l as usize] {
                Some(prev) => prev == om,
                None => {
                    x[l as usize] = Some(om);
                    true
                }
            });
            if !consistent {
                continue;
            }
            let coords: Vec<Sl2Element> = x.into_iter().map(|c| c.expect("special cocycles are onto").clone()).collect();
            if let Ok(hk) = HkVector::new(coords) {
                return Ok(Some((tau, hk)));
            }
        }
    }
    Ok(None)
}

/// A seeded random connection. Modes alternate between unstructured values,
/// rank-one values and sparse values so that both flat and non-flat vectors
/// occur.
pub fn random_connection<R: Rng>(n: usize, bound: i64, rng: &mut R) -> ConnectionVector {
    let omega = match rng.gen_range(0..3) {
        0 => (0..n).map(|_| random_sl2(bound, rng)).collect(),
        1 => {
            let base = random_sl2(bound, rng);
            (0..n).map(|_| base.scale(&q(rng.gen_range(-bound..=bound)))).collect()
        }
        _ => (0..n)
            .map(|_| if rng.gen_bool(0.3) { random_sl2(bound, rng) } else { Sl2Element::zero() })
            .collect(),
    };
    ConnectionVector::new(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn brackets() {
        let (e, f, h) = (Sl2Element::e(), Sl2Element::f(), Sl2Element::h());
        assert_eq!(e.bracket(&f), h.scale(&q(1)));
        assert_eq!(h.bracket(&e), e.scale(&q(2)));
        assert_eq!(h.bracket(&f), f.scale(&q(-2)));
        assert!(e.bracket(&e).is_zero());
        assert_eq!(span_dimension(&[e.clone(), e.scale(&q(3)), Sl2Element::zero()]), 1);
        assert_eq!(span_dimension(&[e, f, h]), 3);
    }

    #[test]
    fn hk_vectors() {
        assert_eq!(
            HkVector::new(vec![Sl2Element::e(), Sl2Element::f(), Sl2Element::zero()]).unwrap_err(),
            FlatError::NonZeroSum
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = HkVector::random(4, 3, &mut rng).unwrap();
        let sum = x.coords().iter().fold(Sl2Element::zero(), |s, y| s.add(y));
        assert!(sum.is_zero());
    }

    #[test]
    fn braid_ev() {
        let braid = catalog::braid();
        let lambda = Cocycle::new(3, vec![0, 1, 2, 2, 1, 0]).unwrap();
        let x = HkVector::new(vec![Sl2Element::e(), Sl2Element::f(), Sl2Element::e().add(&Sl2Element::f()).neg()]).unwrap();
        let w = ev_tau(&braid, &lambda, &x).unwrap();
        assert!(is_flat(&braid, &w).unwrap() && is_flat_brackets(&braid, &w).unwrap());
        assert!(is_regular(&w));
        assert_eq!(w.rank(), x.rank());
        let line = HkVector::new(vec![Sl2Element::e(), Sl2Element::e(), Sl2Element::e().scale(&q(-2))]).unwrap();
        let w = ev_tau(&braid, &lambda, &line).unwrap();
        assert!(is_flat(&braid, &w).unwrap() && !is_regular(&w));
        assert_eq!(ev_tau(&braid, &Cocycle::constant(6, 3, 0), &x).unwrap_err(), FlatError::ConstantCocycle);
    }

    #[test]
    fn simple_cases() {
        let braid = catalog::braid();
        let constant = ConnectionVector::new(vec![Sl2Element::h(); 6]);
        assert!(is_flat(&braid, &constant).unwrap() && !is_regular(&constant));
        assert!(!is_regular(&ConnectionVector::new(vec![Sl2Element::zero(); 6])));
        // points 0 and 5 form a double point; give them non-commuting values
        let mut omega = vec![Sl2Element::zero(); 6];
        omega[0] = Sl2Element::e();
        omega[5] = Sl2Element::f();
        let w = ConnectionVector::new(omega);
        assert!(!is_flat(&braid, &w).unwrap());
        assert!(!is_flat_brackets(&braid, &w).unwrap());
    }

    #[test]
    fn b3_witness() {
        let (b3, w) = b3_witness_connection();
        assert!(is_flat(&b3, &w).unwrap() && is_flat_brackets(&b3, &w).unwrap());
        assert!(is_regular(&w));
        assert!(find_ev_preimage(&b3, &w, Exec::Parallel).unwrap().is_none());
        let (parts, mult) = catalog::b3_multinet();
        let x = HkVector::new(vec![Sl2Element::e(), Sl2Element::f(), Sl2Element::e().add(&Sl2Element::f()).neg()]).unwrap();
        assert!(is_flat(&b3, &weighted_class_connection(&parts, &mult, &x)).unwrap());
    }

    #[test]
    fn ev_preimage_found() {
        let braid = catalog::braid();
        let lambda = Cocycle::new(3, vec![0, 1, 2, 2, 1, 0]).unwrap();
        let x = HkVector::new(vec![Sl2Element::e(), Sl2Element::f(), Sl2Element::e().add(&Sl2Element::f()).neg()]).unwrap();
        let w = ev_tau(&braid, &lambda, &x).unwrap();
        let (tau, y) = find_ev_preimage(&braid, &w, Exec::Sequential).unwrap().unwrap();
        assert_eq!(ev_tau(&braid, &tau, &y).unwrap(), w);
    }

    #[test]
    fn json_round_trip() {
        let (_, w) = b3_witness_connection();
        let mut w = w;
        w.omega[0] = w.omega[0].scale(&BigRational::new(BigInt::from(-3), BigInt::from(7)));
        let v = w.to_json();
        assert_eq!(ConnectionVector::from_json(&v).unwrap(), w);
        assert!(ConnectionVector::from_json(&json!([[[1, 0], [0, 1]]])).is_err());
    }
}
