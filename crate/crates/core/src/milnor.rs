//! Combinatorial determination of the degree-one monodromy polynomial
//! `Δ(t) = (t-1)^(n-1) Π_{1<d|n} Φ_d(t)^(e_d)`.
//!
//! Each exponent `e_d` carries a status saying how much the combinatorics
//! pins it down. Results about exponents hold for realizable matroids; the
//! caller is responsible for realizability and the output says so.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::exec::Exec;
use crate::finfield::{is_prime, FiniteField};
use crate::matroid::Matroid;
use crate::nets;
use crate::resonance;

pub const REALIZABILITY_CAVEAT: &str = "assumes realizable";
pub const CONJECTURE_CAVEAT: &str =
    "conjectural values assume e_d = 0 for every divisor d of n that is not a prime power";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Vanishes,
    Determined,
    /// Only an upper bound is known.
    Bounded,
    /// Filled in from the conjectural formula.
    Conjectured,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    /// `None` when only a bound (or nothing) is known.
    pub exponent: Option<usize>,
    pub status: Status,
    /// Upper bound, for `Bounded` entries.
    pub bound: Option<usize>,
    pub why: &'static str,
}

impl Factor {
    fn vanishes(why: &'static str) -> Self {
        Self { exponent: Some(0), status: Status::Vanishes, bound: None, why }
    }

    fn determined(e: usize, why: &'static str) -> Self {
        Self { exponent: Some(e), status: Status::Determined, bound: None, why }
    }
}

/// `Δ(t)` as exponents per cyclotomic factor; the `Φ_1 = t - 1` exponent is `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycFactorization {
    pub n: usize,
    pub factors: BTreeMap<usize, Factor>,
    pub conjectural: bool,
}

impl CycFactorization {
    pub fn base_exponent(&self) -> usize {
        self.n - 1
    }

    pub fn exponent(&self, d: usize) -> Option<usize> {
        if d == 1 {
            return Some(self.base_exponent());
        }
        match self.factors.get(&d) {
            Some(f) => f.exponent,
            None => Some(0),
        }
    }

    /// Whether every exponent is known (possibly conjecturally).
    pub fn is_complete(&self) -> bool {
        self.factors.values().all(|f| f.exponent.is_some())
    }

    /// Coefficients of `Δ(t)`, lowest degree first, when every exponent is known.
    pub fn expand(&self) -> Option<Vec<BigInt>> {
        let mut poly = pow(&cyclotomic(1), self.base_exponent());
        for (&d, f) in &self.factors {
            poly = mul(&poly, &pow(&cyclotomic(d), f.exponent?));
        }
        Some(poly)
    }

    pub fn to_json(&self) -> Value {
        let factors: serde_json::Map<String, Value> = self
            .factors
            .iter()
            .map(|(d, f)| {
                let mut obj = json!({ "e": f.exponent, "status": f.status, "why": f.why });
                if let Some(b) = f.bound {
                    obj["bound"] = json!(b);
                }
                (d.to_string(), obj)
            })
            .collect();
        let mut caveats = vec![REALIZABILITY_CAVEAT];
        if self.conjectural {
            caveats.push(CONJECTURE_CAVEAT);
        }
        json!({
            "n": self.n,
            "base_exponent": self.base_exponent(),
            "factors": factors,
            "caveat": caveats.join("; "),
            "polynomial": self.to_string(),
            "h1_dimension": h1_dimension(self).to_json(),
        })
    }
}

impl fmt::Display for CycFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^{}", poly_string(&cyclotomic(1)), self.base_exponent())?;
        for (&d, fac) in &self.factors {
            match fac.exponent {
                Some(0) => {}
                Some(e) => write!(f, " ({})^{}", poly_string(&cyclotomic(d)), e)?,
                None => write!(f, " ({})^e{}", poly_string(&cyclotomic(d)), d)?,
            }
        }
        Ok(())
    }
}

/// `(p, s)` with `d = p^s`, if `d` is a prime power.
pub fn prime_power(d: usize) -> Option<(u32, u32)> {
    if d < 2 {
        return None;
    }
    let p = (2..=d).find(|q| d.is_multiple_of(*q))?;
    let mut x = d;
    let mut s = 0;
    while x.is_multiple_of(p) {
        x /= p;
        s += 1;
    }
    (x == 1).then_some((p as u32, s))
}

/// `β_p`, the upper bound for every `e_{p^s}`.
pub fn modular_bound(m: &Matroid, p: u32, s: u32) -> Option<usize> {
    if !is_prime(p) || s == 0 {
        return None;
    }
    Some(resonance::beta(m, &FiniteField::prime(p).ok()?))
}

/// Compute the factorization, optionally filling undetermined prime-power
/// slots from the conjectural formula.
pub fn delta_polynomial(m: &Matroid, conjectural: bool, exec: Exec) -> CycFactorization {
    let n = m.n();
    let mult = m.multiplicity_spectrum();
    let has_double = m.implicit_pairs().next().is_some();
    let mut beta_cache: BTreeMap<u32, usize> = BTreeMap::new();
    let mut beta = |p: u32| *beta_cache.entry(p).or_insert_with(|| modular_bound(m, p, 1).expect("prime"));
    let mut four_nets: Option<bool> = None;
    let mut has_four_net = || {
        *four_nets.get_or_insert_with(|| {
            !nets::enumerate_net_orbits(m, 4, exec).map(|v| v.is_empty()).unwrap_or(true)
        })
    };

    let mut factors = BTreeMap::new();
    let only_triples = mult.iter().all(|&q| q == 3);
    for d in (2..=n).filter(|d| n.is_multiple_of(*d)) {
        let factor = if only_triples {
            if d == 3 {
                Factor::determined(beta(3), "multiplicities-two-and-three")
            } else {
                Factor::vanishes("multiplicities-two-and-three")
            }
        } else if !mult.iter().any(|q| q % d == 0) && !(d == 2 && has_double) {
            Factor::vanishes("vanishing-rule")
        } else if d == 3 && !mult.iter().any(|&q| q > 3 && q % 3 == 0) && beta(3) <= 2 {
            Factor::determined(beta(3), "beta3-exponent")
        } else if (d == 2 || d == 4) && beta(2) <= 2 && has_four_net() {
            Factor::determined(beta(2), "four-net-exponent")
        } else if let Some((p, _)) = prime_power(d) {
            match beta(p) {
                0 => Factor::determined(0, "modular-bound"),
                b => Factor { exponent: None, status: Status::Bounded, bound: Some(b), why: "modular-bound" },
            }
        } else {
            Factor { exponent: None, status: Status::Unknown, bound: None, why: "unresolved" }
        };
        factors.insert(d, factor);
    }

    if conjectural {
        for (&d, f) in factors.iter_mut() {
            if !matches!(f.status, Status::Bounded | Status::Unknown) {
                continue;
            }
            if prime_power(d).is_none() {
                continue;
            }
            let e = match d {
                2 | 4 => beta(2),
                3 => beta(3),
                _ => 0,
            };
            f.exponent = Some(e);
            f.status = Status::Conjectured;
            f.why = "conjecture";
        }
    }
    CycFactorization { n, factors, conjectural }
}

/// `dim H_1(F)`: `n - 1 + Σ e_d φ(d)`, or the range allowed by the statuses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Dimension {
    pub lower: usize,
    /// `None` when some exponent is unconstrained.
    pub upper: Option<usize>,
    /// Whether conjectured exponents were used.
    pub conditional: bool,
}

impl H1Dimension {
    pub fn exact(&self) -> Option<usize> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }

    pub fn to_json(&self) -> Value {
        match self.exact() {
            Some(v) => json!({ "value": v, "conditional": self.conditional }),
            None => json!({ "lower": self.lower, "upper": self.upper, "conditional": self.conditional }),
        }
    }
}

pub fn h1_dimension(fac: &CycFactorization) -> H1Dimension {
    let mut lower = fac.base_exponent();
    let mut upper = Some(lower);
    let mut conditional = false;
    for (&d, f) in &fac.factors {
        let phi = euler_phi(d);
        match (f.exponent, f.bound) {
            (Some(e), _) => {
                lower += e * phi;
                upper = upper.map(|u| u + e * phi);
                conditional |= f.status == Status::Conjectured;
            }
            (None, Some(b)) => upper = upper.map(|u| u + b * phi),
            (None, None) => upper = None,
        }
    }
    H1Dimension { lower, upper, conditional }
}

pub fn euler_phi(d: usize) -> usize {
    (1..=d).filter(|&k| gcd(k, d) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pow(a: &[BigInt], e: usize) -> Vec<BigInt> {
    (0..e).fold(vec![BigInt::one()], |acc, _| mul(&acc, a))
}

/// Exact division by a monic polynomial.
fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        for (j, y) in den.iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// `Φ_d`, lowest degree first.
pub fn cyclotomic(d: usize) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); d + 1];
    num[0] = -BigInt::one();
    num[d] = BigInt::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = div_exact(&num, &cyclotomic(e));
    }
    num
}

fn poly_string(c: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (i, x) in c.iter().enumerate().rev() {
        if x.is_zero() {
            continue;
        }
        let mag = if *x < BigInt::zero() { -x.clone() } else { x.clone() };
        let sign = if *x < BigInt::zero() { "-" } else { "+" };
        let body = match (i, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "t".into(),
            (1, false) => format!("{mag}t"),
            (_, true) => format!("t^{i}"),
            (_, false) => format!("{mag}t^{i}"),
        };
        terms.push((sign, body));
    }
    let mut s = String::new();
    for (k, (sign, body)) in terms.iter().enumerate() {
        if k == 0 {
            if *sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(sign);
        }
        s.push_str(body);
    }
    s
}
