//! Small Galois fields `GF(p^s)` with table-driven arithmetic.
//!
//! Elements are stored as their index in base-`p` polynomial order: the
//! element `c0 + c1 x + c2 x^2` has index `c0 + c1 p + c2 p^2`. For `F_4`
//! this gives `0, 1, x, x+1 -> 0, 1, 2, 3`. The index is also the
//! serialized form of a [`Scalar`].
//!
//! Extension fields use a fixed modulus: the least monic irreducible
//! polynomial of degree `s` in base-`p` coefficient order. That choice
//! reproduces the usual presentations
//!
//! * `F_4 = F_2[x]/(x^2 + x + 1)`
//! * `F_8 = F_2[x]/(x^3 + x + 1)`
//! * `F_9 = F_3[x]/(x^2 + 1)`

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unsupported field size {p}^{s}: need 1 <= s <= 3 and p^s <= {MAX_ORDER}")]
    UnsupportedSize { p: u32, s: u32 },
    #[error("mixing elements of F_{left} and F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("index {index} out of range for F_{order}")]
    IndexOutOfRange { index: u32, order: u32 },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Tables {
    p: u32,
    s: u32,
    order: u32,
    /// Monic modulus, low coefficient first, length `s + 1`. Empty for prime fields.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A finite field descriptor. Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Tables>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.s == other.inner.s)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

fn digits(mut index: u32, p: u32, s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s as usize);
    for _ in 0..s {
        out.push(index % p);
        index /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Value of a monic polynomial (low coefficient first) at `x` mod `p`.
fn eval_mod(poly: &[u32], x: u32, p: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Least monic irreducible polynomial of degree `s` (2 or 3) over `F_p`.
/// In degree at most 3 a polynomial is irreducible iff it has no root.
fn least_irreducible(p: u32, s: u32) -> Vec<u32> {
    let count = p.pow(s);
    for idx in 0..count {
        let mut poly = digits(idx, p, s);
        poly.push(1);
        if (0..p).all(|x| eval_mod(&poly, x, p) != 0) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

/// Multiply two coefficient vectors modulo `modulus` over `F_p`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let s = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * s];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce from the top using x^s = -(m_0 + ... + m_{s-1} x^{s-1})
    for deg in (s..2 * s).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for t in 0..s {
            let sub = c * modulus[t] % p;
            prod[deg - s + t] = (prod[deg - s + t] + p - sub) % p;
        }
    }
    prod.truncate(s);
    prod
}

impl FiniteField {
    /// Build `GF(p^s)`.
    pub fn new(p: u32, s: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !(1..=3).contains(&s) || p.checked_pow(s).is_none_or(|q| q > MAX_ORDER) {
            return Err(FieldError::UnsupportedSize { p, s });
        }
        let order = p.pow(s);
        let modulus = if s == 1 { Vec::new() } else { least_irreducible(p, s) };
        let q = order as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..order {
            let da = digits(a, p, s);
            let na: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = undigits(&na, p) as u8;
            for b in 0..order {
                let db = digits(b, p, s);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * q + b as usize] = undigits(&sum, p) as u8;
                let prod = if s == 1 {
                    vec![a * b % p]
                } else {
                    poly_mulmod(&da, &db, &modulus, p)
                };
                mul[a as usize * q + b as usize] = undigits(&prod, p) as u8;
            }
        }
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("nonzero element of a field is invertible") as u8;
        }
        Ok(Self {
            inner: Arc::new(Tables { p, s, order, modulus, add, mul, neg, inv }),
        })
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// The field with `q` elements, if `q` is a supported prime power.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        for p in 2..=q {
            if is_prime(p) && q.is_multiple_of(p) {
                let mut s = 0;
                let mut r = q;
                while r.is_multiple_of(p) {
                    r /= p;
                    s += 1;
                }
                if r != 1 {
                    return Err(FieldError::NotPrime(q));
                }
                return Self::new(p, s);
            }
        }
        Err(FieldError::NotPrime(q))
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.s
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Monic modulus, lowest coefficient first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> Scalar {
        Scalar { field: self.clone(), index: 0 }
    }

    pub fn one(&self) -> Scalar {
        Scalar { field: self.clone(), index: 1 }
    }

    pub fn element(&self, index: u32) -> Result<Scalar, FieldError> {
        if index >= self.order() {
            return Err(FieldError::IndexOutOfRange { index, order: self.order() });
        }
        Ok(Scalar { field: self.clone(), index: index as u8 })
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.order()).map(move |i| Scalar { field: self.clone(), index: i as u8 })
    }

    /// Sum of all elements of the additive group.
    pub fn sum_of_elements(&self) -> Scalar {
        let index = (0..self.order() as u8).fold(0u8, |acc, x| self.add_idx(acc, x));
        Scalar { field: self.clone(), index }
    }

    // Raw index arithmetic used by the linear algebra kernels.

    #[inline]
    pub(crate) fn add_idx(&self, a: u8, b: u8) -> u8 {
        self.inner.add[a as usize * self.inner.order as usize + b as usize]
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: u8, b: u8) -> u8 {
        self.inner.mul[a as usize * self.inner.order as usize + b as usize]
    }

    #[inline]
    pub(crate) fn neg_idx(&self, a: u8) -> u8 {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub(crate) fn inv_idx(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inner.inv[a as usize]
    }

    #[inline]
    pub(crate) fn sub_idx(&self, a: u8, b: u8) -> u8 {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Image of the integer `n` under `Z -> F`.
    pub(crate) fn int_idx(&self, n: i64) -> u8 {
        n.rem_euclid(self.inner.p as i64) as u8
    }
}

/// Sum of all elements of `field` under addition.
pub fn sum_of_elements(field: &FiniteField) -> Scalar {
    field.sum_of_elements()
}

/// Whether some finite commutative ring with `k` elements has zero element sum.
///
/// This holds exactly when `k` is not `2 mod 4`. A witness is the product of
/// prime fields returned by [`zero_sum_witness`].
pub fn ring_exists_with_zero_sum(k: u64) -> bool {
    assert!(k >= 1, "ring size must be positive");
    k % 4 != 2
}

/// The ring `prod_p F_p^{v_p(k)}` as `(p, v_p(k))` pairs, when its element sum vanishes.
pub fn zero_sum_witness(k: u64) -> Option<Vec<(u64, u32)>> {
    if !ring_exists_with_zero_sum(k) {
        return None;
    }
    let mut out = Vec::new();
    let mut r = k;
    let mut p = 2;
    while r > 1 {
        if r.is_multiple_of(p) {
            let mut v = 0;
            while r.is_multiple_of(p) {
                r /= p;
                v += 1;
            }
            out.push((p, v));
        }
        p += 1;
    }
    Some(out)
}

/// An element of a [`FiniteField`]. Operations across different fields are errors.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    field: FiniteField,
    index: u8,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.index, self.field)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        if self.field.degree() == 1 {
            return write!(f, "{}", coeffs[0]);
        }
        let mut terms = Vec::new();
        for (deg, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match deg {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{deg}"),
            };
            terms.push(match (c, deg) {
                (_, 0) => format!("{c}"),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Scalar {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Serialized index in `0..p^s`.
    pub fn index(&self) -> u32 {
        self.index as u32
    }

    /// Polynomial coefficients `c0, c1, ...`, each in `[0, p)`.
    pub fn coeffs(&self) -> Vec<u32> {
        digits(self.index as u32, self.field.characteristic(), self.field.degree())
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn check(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(Scalar { field: self.field.clone(), index: self.field.add_idx(self.index, other.index) })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(Scalar { field: self.field.clone(), index: self.field.sub_idx(self.index, other.index) })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(Scalar { field: self.field.clone(), index: self.field.mul_idx(self.index, other.index) })
    }

    pub fn neg(&self) -> Scalar {
        Scalar { field: self.field.clone(), index: self.field.neg_idx(self.index) }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.index == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(Scalar { field: self.field.clone(), index: self.field.inv_idx(self.index) })
    }
}
