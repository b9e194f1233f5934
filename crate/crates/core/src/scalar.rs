//! Exact symbolic scalars for the coefficient field.
//!
//! A [`Scalar`] is a finite integer combination of monomials
//! `zeta_N^a * p^(r/2) * prod(a_i^e_i)`: a root of unity of order `N`, a
//! half-integer power of the (formal) prime `p`, and formal family parameters.
//! The order `N` lives on the scalar; combining scalars of different orders
//! lifts both to the lcm.
//!
//! Canonical form quotients only by `zeta_N^(N/2) = -1` (for even `N`):
//! exponents are kept in `[0, N/2)` with the sign moved into the integer
//! coefficient. For `N` a power of two this is the full cyclotomic relation,
//! which covers every scalar the fixtures produce.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default root-of-unity order for a base field of degree `f`: `lcm(8, 2f)`.
pub fn default_zeta_order(f: usize) -> u32 {
    (8u32).lcm(&(2 * f as u32))
}

/// `zeta_N^a * p^(p2/2) * prod(params)`; the order `N` is held by the owning [`Scalar`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    p2: i64,
    zeta: u32,
    params: BTreeMap<String, u32>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p2.cmp(&other.p2).then(self.zeta.cmp(&other.zeta)).then_with(|| self.params.cmp(&other.params))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { p2: 0, zeta: 0, params: BTreeMap::new() }
    }

    /// Exponent of `p` (denominator 1 or 2).
    pub fn p_exp(&self) -> Ratio<i64> {
        Ratio::new(self.p2, 2)
    }

    /// Doubled exponent of `p`.
    pub fn p_exp2(&self) -> i64 {
        self.p2
    }

    pub fn zeta_exp(&self) -> u32 {
        self.zeta
    }

    pub fn params(&self) -> &BTreeMap<String, u32> {
        &self.params
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut params = self.params.clone();
        for (name, e) in &other.params {
            *params.entry(name.clone()).or_insert(0) += e;
        }
        Monomial { p2: self.p2 + other.p2, zeta: self.zeta + other.zeta, params }
    }
}

/// A root of unity `zeta_order^exp`.
#[derive(Debug, Clone, Copy, Eq)]
pub struct RootOfUnity {
    pub order: u32,
    pub exp: u32,
}

impl PartialEq for RootOfUnity {
    fn eq(&self, other: &Self) -> bool {
        // exp/order == exp'/order' as fractions of a full turn
        (self.exp as u64) * (other.order as u64) == (other.exp as u64) * (self.order as u64)
    }
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { order: 1, exp: 0 }
    }

    pub fn new(order: u32, exp: u32) -> Self {
        assert!(order > 0, "root of unity order must be positive");
        RootOfUnity { order, exp: exp % order }
    }

    pub fn lift(self, order: u32) -> Self {
        assert!(order.is_multiple_of(self.order), "cannot lift order {} to {}", self.order, order);
        RootOfUnity { order, exp: self.exp * (order / self.order) }
    }

    pub fn mul(self, other: Self) -> Self {
        let order = self.order.lcm(&other.order);
        let (a, b) = (self.lift(order), other.lift(order));
        RootOfUnity::new(order, a.exp + b.exp)
    }

    /// Principal `m`-th root: the smallest exponent, expressed at order at least `min_order`.
    pub fn principal_root(self, m: u32, min_order: u32) -> Self {
        let order = self.order.lcm(&min_order);
        let base = self.lift(order);
        let g = base.exp.gcd(&m);
        let g = if base.exp == 0 { m } else { g };
        let scale = m / g;
        let lifted = base.lift(order * scale);
        RootOfUnity::new(lifted.order, lifted.exp / m)
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::zeta(self.order, self.exp)
    }

    pub fn is_one(self) -> bool {
        self.exp == 0
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "1")
        } else {
            write!(f, "zeta{}^{}", self.order, self.exp)
        }
    }
}

/// An integer combination of [`Monomial`]s in canonical form.
#[derive(Debug, Clone)]
pub struct Scalar {
    order: u32,
    terms: BTreeMap<Monomial, i64>,
}

impl Scalar {
    fn from_raw(order: u32, raw: impl IntoIterator<Item = (Monomial, i64)>) -> Scalar {
        assert!(order > 0);
        let half = if order.is_multiple_of(2) { Some(order / 2) } else { None };
        let mut terms: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (mut mono, mut c) in raw {
            if c == 0 {
                continue;
            }
            mono.zeta %= order;
            if let Some(h) = half {
                if mono.zeta >= h {
                    mono.zeta -= h;
                    c = -c;
                }
            }
            mono.params.retain(|_, e| *e != 0);
            *terms.entry(mono).or_insert(0) += c;
        }
        terms.retain(|_, c| *c != 0);
        Scalar { order, terms }
    }

    pub fn zero() -> Scalar {
        Scalar { order: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::from_raw(1, [(Monomial::one(), n)])
    }

    /// `p^(p2/2)`.
    pub fn p_pow2(p2: i64) -> Scalar {
        Scalar::from_raw(1, [(Monomial { p2, zeta: 0, params: BTreeMap::new() }, 1)])
    }

    /// `p^k`.
    pub fn p_pow(k: i64) -> Scalar {
        Scalar::p_pow2(2 * k)
    }

    /// `zeta_order^exp`.
    pub fn zeta(order: u32, exp: u32) -> Scalar {
        Scalar::from_raw(order, [(Monomial { p2: 0, zeta: exp, params: BTreeMap::new() }, 1)])
    }

    /// `sqrt(-1)`, rendered as `zeta8^2`.
    pub fn sqrt_minus_one() -> Scalar {
        Scalar::zeta(8, 2)
    }

    /// A formal family parameter such as `a_0`.
    pub fn param(name: &str) -> Scalar {
        let mut params = BTreeMap::new();
        params.insert(name.to_string(), 1);
        Scalar::from_raw(1, [(Monomial { p2: 0, zeta: 0, params }, 1)])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(|m| !m.params.is_empty())
    }

    /// The single term, if this scalar is `c * monomial`.
    pub fn as_monomial(&self) -> Option<(i64, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*c, m))
        } else {
            None
        }
    }

    /// Re-express at a multiple of the current order.
    pub fn lift(&self, order: u32) -> Scalar {
        assert!(order.is_multiple_of(self.order), "cannot lift order {} to {}", self.order, order);
        let k = order / self.order;
        Scalar::from_raw(
            order,
            self.terms.iter().map(|(m, c)| {
                let mut m = m.clone();
                m.zeta *= k;
                (m, *c)
            }),
        )
    }

    fn unify(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        let order = a.order.lcm(&b.order);
        (a.lift(order), b.lift(order))
    }

    /// Drop every term carrying a formal parameter (specialization `a = 0`).
    pub fn at_zero_params(&self) -> Scalar {
        Scalar::from_raw(
            self.order,
            self.terms.iter().filter(|(m, _)| m.params.is_empty()).map(|(m, c)| (m.clone(), *c)),
        )
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse of a unit monomial `±zeta^a p^r`.
    pub fn inverse(&self) -> Result<Scalar> {
        let (c, m) = self.as_monomial().ok_or_else(|| Error::NonMonomialInverse(self.to_string()))?;
        if c.abs() != 1 || !m.params.is_empty() {
            return Err(Error::NonMonomialInverse(self.to_string()));
        }
        let inv = Monomial { p2: -m.p2, zeta: (self.order - m.zeta) % self.order, params: BTreeMap::new() };
        Ok(Scalar::from_raw(self.order, [(inv, c)]))
    }

    /// Smallest exponent of `p` among the terms.
    pub fn p_valuation(&self) -> Result<Ratio<i64>> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        if self.has_params() {
            return Err(Error::ParamValuation(self.to_string()));
        }
        let min = self.terms.keys().map(|m| m.p2).min().expect("nonzero scalar has a term");
        Ok(Ratio::new(min, 2))
    }

    /// Doubled `p`-valuation; see [`Scalar::p_valuation`].
    pub fn p_valuation2(&self) -> Result<i64> {
        let v = self.p_valuation()?;
        Ok((v * 2).to_integer())
    }

    /// For `±zeta^a p^r`, the root of unity `±zeta^a` (sign absorbed into the angle).
    pub fn unit_part(&self) -> Option<RootOfUnity> {
        let (c, m) = self.as_monomial()?;
        if c.abs() != 1 || !m.params.is_empty() {
            return None;
        }
        let root = RootOfUnity::new(self.order, m.zeta);
        if c < 0 {
            Some(root.mul(RootOfUnity::new(2, 1)))
        } else {
            Some(root)
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.terms == other.terms;
        }
        let (a, b) = Scalar::unify(self, other);
        a.terms == b.terms
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let (a, b) = Scalar::unify(self, rhs);
        Scalar::from_raw(a.order, a.terms.into_iter().chain(b.terms))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::from_raw(self.order, self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let (a, b) = Scalar::unify(self, rhs);
        let mut raw = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                raw.push((ma.mul(mb), ca.checked_mul(*cb).expect("scalar coefficient overflow")));
            }
        }
        Scalar::from_raw(a.order, raw)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_p(p2: i64) -> String {
    match p2 {
        2 => "p".to_string(),
        _ if p2 % 2 == 0 && p2 > 0 => format!("p^{}", p2 / 2),
        _ if p2 % 2 == 0 => format!("p^({})", p2 / 2),
        _ => format!("p^({}/2)", p2),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if m.zeta != 0 {
                factors.push(format!("zeta{}^{}", self.order, m.zeta));
            }
            if m.p2 != 0 {
                factors.push(fmt_p(m.p2));
            }
            for (name, e) in &m.params {
                if *e == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            let mag = c.unsigned_abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                factors.join("*")
            } else {
                format!("{mag}*{}", factors.join("*"))
            };
            match (i, *c < 0) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("integer out of range"))
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let v = self.uint()?;
        Ok(if neg { -v } else { v })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    /// Doubled exponent after `p^`.
    fn p_exponent(&mut self) -> Result<i64> {
        if self.eat(b'(') {
            let num = self.int()?;
            let p2 = if self.eat(b'/') {
                let den = self.uint()?;
                if den == 1 {
                    2 * num
                } else if den == 2 {
                    num
                } else {
                    return Err(self.err("p-exponent denominator must be 1 or 2"));
                }
            } else {
                2 * num
            };
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            Ok(p2)
        } else {
            Ok(2 * self.int()?)
        }
    }

    fn term(&mut self, order: &mut u32) -> Result<(i64, i64, u32, u32, BTreeMap<String, u32>)> {
        let mut coeff = 1i64;
        let mut p2 = 0i64;
        let (mut zorder, mut zexp) = (1u32, 0u32);
        let mut params = BTreeMap::new();
        loop {
            self.ws();
            match self.peek() {
                Some(b'0'..=b'9') => {
                    coeff = coeff.checked_mul(self.uint()?).ok_or_else(|| self.err("overflow"))?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    if name == "p" {
                        p2 += if self.eat(b'^') { self.p_exponent()? } else { 2 };
                    } else if let Some(n) = name.strip_prefix("zeta").filter(|n| !n.is_empty()) {
                        let n: u32 = n.parse().map_err(|_| self.err("bad zeta order"))?;
                        if n == 0 {
                            return Err(self.err("zeta order must be positive"));
                        }
                        let e = if self.eat(b'^') { self.int()? } else { 1 };
                        let l = zorder.lcm(&n);
                        let cur = (zexp as i64) * (l / zorder) as i64;
                        let add = e * (l / n) as i64;
                        zorder = l;
                        zexp = (cur + add).rem_euclid(l as i64) as u32;
                    } else {
                        let e = if self.eat(b'^') { self.uint()? } else { 1 };
                        *params.entry(name).or_insert(0) += e as u32;
                    }
                }
                _ => return Err(self.err("expected factor")),
            }
            self.ws();
            if !self.eat(b'*') {
                break;
            }
        }
        *order = order.lcm(&zorder);
        Ok((coeff, p2, zorder, zexp, params))
    }

    fn sum(&mut self) -> Result<Scalar> {
        let mut order = 1u32;
        let mut raw = Vec::new();
        self.ws();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            let (c, p2, zo, ze, params) = self.term(&mut order)?;
            raw.push((sign * c, p2, zo, ze, params));
            self.ws();
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                break;
            }
        }
        if self.pos != self.src.len() {
            return Err(self.err("trailing input"));
        }
        Ok(Scalar::from_raw(
            order,
            raw.into_iter().map(|(c, p2, zo, ze, params)| (Monomial { p2, zeta: ze * (order / zo), params }, c)),
        ))
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let t = s.trim();
        if t == "0" {
            return Ok(Scalar::zero());
        }
        Parser { src: t.as_bytes(), pos: 0 }.sum()
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
