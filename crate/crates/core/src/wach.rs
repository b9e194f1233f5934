//! Truncated power series in `pi` with the Frobenius and Gamma substitutions,
//! and the Wach-module divisibility checks built on them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::product_ring::{adjugate, det_small, ProductMatrix, Ring, Tuple};

/// `sum c_n pi^n` for `n < order`, optionally reduced mod `p^M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<BigInt>,
    modulus: Option<BigInt>,
}

impl TruncSeries {
    pub fn from_coeffs(coeffs: Vec<BigInt>, order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        let mut c = coeffs;
        c.resize(order, BigInt::zero());
        TruncSeries { coeffs: c, modulus: None }
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        TruncSeries::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn constant(c: i64, order: usize) -> Self {
        TruncSeries::from_i64(&[c], order)
    }

    /// The variable `pi`.
    pub fn pi(order: usize) -> Self {
        TruncSeries::from_i64(&[0, 1], order)
    }

    /// Work modulo `p^M` from now on.
    pub fn with_modulus(mut self, p: u64, m: u32) -> Self {
        self.modulus = Some(BigInt::from(p).pow(m));
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        if let Some(n) = &self.modulus {
            for c in &mut self.coeffs {
                *c = c.mod_floor(n);
            }
        }
    }

    fn like(&self, coeffs: Vec<BigInt>) -> Self {
        let mut s = TruncSeries { coeffs, modulus: self.modulus.clone() };
        s.coeffs.resize(self.order(), BigInt::zero());
        s.normalize();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// `s(g(pi))` for `g` without constant term.
    pub fn compose(&self, g: &TruncSeries) -> Self {
        assert!(g.coeffs[0].is_zero(), "substituted series must have zero constant term");
        assert_eq!(self.order(), g.order(), "truncation orders differ");
        let mut acc = self.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(g);
            acc.coeffs[0] += c;
            acc.normalize();
        }
        acc
    }

    /// `s((1 + pi)^p - 1)`.
    pub fn phi_substitute(&self, p: u64) -> Self {
        self.compose(&frobenius_of_pi(p, self.order()))
    }

    /// `s((1 + pi)^c - 1)`.
    pub fn gamma_substitute(&self, c: u64) -> Self {
        self.compose(&frobenius_of_pi(c, self.order()))
    }
}

/// `(1 + pi)^c - 1`, truncated.
fn frobenius_of_pi(c: u64, order: usize) -> TruncSeries {
    let mut coeffs = vec![BigInt::zero(); order];
    let mut binom = BigInt::one();
    for n in 1..order.min(c as usize + 1) {
        binom = binom * BigInt::from(c - (n as u64 - 1)) / BigInt::from(n as u64);
        coeffs[n] = binom.clone();
    }
    TruncSeries::from_coeffs(coeffs, order)
}

/// `q = ((1 + pi)^p - 1) / pi`.
pub fn q_series(p: u64, order: usize) -> TruncSeries {
    let phi = frobenius_of_pi(p, order + 1);
    TruncSeries::from_coeffs(phi.coeffs[1..].to_vec(), order)
}

impl Ring for TruncSeries {
    fn zero_like(&self) -> Self {
        self.like(Vec::new())
    }
    fn one_like(&self) -> Self {
        self.like(vec![BigInt::one()])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn add_ref(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        self.like(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let t = self.order();
        let mut out = vec![BigInt::zero(); t];
        let support: Vec<(usize, &BigInt)> = other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in support.iter().take_while(|(j, _)| i + j < t) {
                out[i + j] += a * b;
            }
        }
        self.like(out)
    }
    fn neg_ref(&self) -> Self {
        self.like(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (n, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "pi".to_string(),
                (1, false) => format!("{mag}*pi"),
                (_, true) => format!("pi^{n}"),
                (_, false) => format!("{mag}*pi^{n}"),
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<coeff_repr::Coeff>::deserialize(d)?;
        if v.is_empty() {
            return Err(serde::de::Error::custom("series needs at least one coefficient"));
        }
        let n = v.len();
        Ok(TruncSeries::from_coeffs(v.into_iter().map(|c| c.0).collect(), n))
    }
}

mod coeff_repr {
    use num_bigint::BigInt;
    use serde::Deserialize;

    /// A coefficient written either as a JSON integer or a decimal string.
    pub struct Coeff(pub BigInt);

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }

    impl<'de> Deserialize<'de> for Coeff {
        fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            match Raw::deserialize(d)? {
                Raw::Int(i) => Ok(Coeff(BigInt::from(i))),
                Raw::Text(s) => s.trim().parse().map(Coeff).map_err(serde::de::Error::custom),
            }
        }
    }
}

/// Frobenius matrix, optional Gamma matrices `(chi(gamma), G)`, and weight bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WachData {
    pub pi: ProductMatrix<TruncSeries>,
    pub gamma: Option<Vec<(u64, ProductMatrix<TruncSeries>)>>,
    pub k: u32,
}

/// Default truncation `max(32, k (p - 1) + 8)`.
pub fn default_truncation(p: u64, k: u32) -> usize {
    32.max(k as usize * (p as usize - 1) + 8)
}

/// Whether `q^k Pi^{-1}` has `p`-integral coefficients below `T - k(p - 1)`.
pub fn check_qk_condition(w: &WachData, p: u64) -> Result<bool> {
    let order = w.pi.entry(0, 0).get(0).order();
    let drop = w.k as usize * (p as usize - 1);
    let qk = q_series(p, order).pow(w.k);
    let bp = BigInt::from(p);
    let mut comps = w.pi.components();
    comps.sort_by(|a, b| a.iter().flatten().map(|s| &s.coeffs).cmp(b.iter().flatten().map(|s| &s.coeffs)));
    comps.dedup();
    for comp in comps {
        let det = det_small(&comp)?;
        let Some(v) = det.valuation() else {
            return Ok(false);
        };
        if order <= drop + v {
            return Err(Error::TruncationTooShallow { order, needed: drop + v });
        }
        let horizon = order - drop - v;
        let unit = &det.coeffs()[v..];
        for row in adjugate(&comp)? {
            for entry in row {
                let num = qk.mul_ref(&entry);
                if num.coeffs()[..v].iter().any(|c| !c.is_zero()) {
                    return Ok(false);
                }
                if !quotient_integral(&num.coeffs()[v..], unit, horizon, &bp) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether the first `n` coefficients of `a / b` are `p`-integral, `b(0) != 0`.
///
/// Fraction-free: with `x_i = y_i / b0^{i+1}` the recursion stays in `Z`, and
/// `x_i` is integral iff `v_p(y_i) >= (i + 1) v_p(b0)`.
fn quotient_integral(a: &[BigInt], b: &[BigInt], n: usize, p: &BigInt) -> bool {
    let b0 = &b[0];
    let mut c = 0usize;
    let mut rest = b0.clone();
    while rest.is_multiple_of(p) {
        rest /= p;
        c += 1;
    }
    let mut b0_pow = vec![BigInt::one()];
    for i in 1..=n {
        let next = &b0_pow[i - 1] * b0;
        b0_pow.push(next);
    }
    if a.iter().all(Zero::is_zero) {
        return true;
    }
    // b_j b0^{j-1} for the nonzero tail terms
    let tail: Vec<(usize, BigInt)> =
        (1..b.len().min(n)).filter(|&j| !b[j].is_zero()).map(|j| (j, &b[j] * &b0_pow[j - 1])).collect();
    let mut y: Vec<BigInt> = Vec::with_capacity(n);
    let mut need = BigInt::one();
    for i in 0..n {
        let mut acc = a.get(i).map_or_else(BigInt::zero, |x| x * &b0_pow[i]);
        for (j, bj) in tail.iter().take_while(|(j, _)| *j <= i) {
            acc -= bj * &y[i - j];
        }
        for _ in 0..c {
            need *= p;
        }
        if !acc.is_multiple_of(&need) {
            return false;
        }
        y.push(acc);
    }
    true
}

/// Every `G` is congruent to the identity mod `pi`.
pub fn check_gamma_trivial_mod_pi(w: &WachData) -> Result<bool> {
    let gammas = match &w.gamma {
        Some(g) if !g.is_empty() => g,
        _ => return Err(Error::MissingGammaData),
    };
    for (_, g) in gammas {
        for (r, row) in g.entries().iter().enumerate() {
            for (c, t) in row.iter().enumerate() {
                let want = BigInt::from(i64::from(r == c));
                if t.iter().any(|s| s.coeff(0) != &want) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn restrict_wach(w: &WachData, n: usize) -> WachData {
    WachData {
        pi: w.pi.tensor_n(n),
        gamma: w.gamma.as_ref().map(|gs| gs.iter().map(|(c, g)| (*c, g.tensor_n(n))).collect()),
        k: w.k,
    }
}

/// Build a product matrix of series from per-embedding matrices.
pub fn series_matrix(components: &[Vec<Vec<TruncSeries>>]) -> Result<ProductMatrix<TruncSeries>> {
    ProductMatrix::from_components(components)
}

/// Read an entry `-1` or `q^k` back as `None` / `Some(k)`.
pub fn q_power_exponent(s: &TruncSeries, p: u64, max_k: u32) -> Option<Option<u32>> {
    if *s == s.one_like().neg_ref() {
        return Some(None);
    }
    let q = q_series(p, s.order());
    let mut acc = s.one_like();
    for k in 0..=max_k {
        if acc == *s {
            return Some(Some(k));
        }
        acc = acc.mul_ref(&q);
    }
    None
}

/// Tuple of series, one per embedding.
pub fn series_tuple(entries: Vec<TruncSeries>) -> Tuple<TruncSeries> {
    Tuple::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: usize = 16;

    fn rational_quotient_integral(a: &[BigInt], b: &[BigInt], n: usize, p: i64) -> bool {
        use num_rational::BigRational;
        let mut out: Vec<BigRational> = Vec::new();
        for i in 0..n {
            let mut acc = BigRational::from_integer(a.get(i).cloned().unwrap_or_default());
            for j in 1..=i.min(b.len() - 1) {
                acc -= BigRational::from_integer(b[j].clone()) * &out[i - j];
            }
            out.push(acc / BigRational::from_integer(b[0].clone()));
        }
        out.iter().all(|x| !x.denom().is_multiple_of(&BigInt::from(p)))
    }

    #[test]
    fn fraction_free_division_matches_rationals() {
        let big = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let cases: [(&[i64], &[i64]); 6] = [
            (&[9, 6, 1], &[3, 1]),
            (&[1], &[3, 1]),
            (&[6, 2], &[6, 1]),
            (&[5, 7, 2], &[2, 3]),
            (&[4, 0, 4], &[2, 1, 1]),
            (&[27, 0, 0, 1], &[9, 3, 1]),
        ];
        for (a, b) in cases {
            for p in [2i64, 3] {
                assert_eq!(
                    quotient_integral(&big(a), &big(b), 10, &BigInt::from(p)),
                    rational_quotient_integral(&big(a), &big(b), 10, p),
                    "{a:?} / {b:?} at p = {p}"
                );
            }
        }
    }

    fn ser(c: &[i64]) -> TruncSeries {
        TruncSeries::from_i64(c, T)
    }

    fn rank_one(s: TruncSeries, k: u32) -> WachData {
        WachData { pi: ProductMatrix::new(vec![vec![Tuple::new(vec![s])]]).unwrap(), gamma: None, k }
    }

    #[test]
    fn substitutions() {
        let pi = TruncSeries::pi(T);
        assert_eq!(pi.phi_substitute(2), ser(&[0, 2, 1]));
        assert_eq!(pi.phi_substitute(3), ser(&[0, 3, 3, 1]));
        assert_eq!(ser(&[1]).phi_substitute(5), ser(&[1]));
        assert_eq!(pi.gamma_substitute(4), ser(&[0, 4, 6, 4, 1]));
        let s = ser(&[2, -1, 3, 0, 5]);
        assert_eq!(s.gamma_substitute(1), s);
        assert_eq!(pi.gamma_substitute(3).gamma_substitute(5), pi.gamma_substitute(15));
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_series(2, T), ser(&[2, 1]));
        assert_eq!(q_series(3, T), ser(&[3, 3, 1]));
        for p in [2u64, 3, 5, 7] {
            assert_eq!(q_series(p, T).coeff(0), &BigInt::from(p));
            assert_eq!(q_series(p, T).mul_ref(&TruncSeries::pi(T)), TruncSeries::pi(T).phi_substitute(p));
        }
    }

    #[test]
    fn qk_rank_one() {
        for p in [2u64, 3] {
            let q = q_series(p, 32);
            assert!(check_qk_condition(&rank_one(q.pow(3), 3), p).unwrap());
            assert!(!check_qk_condition(&rank_one(q.pow(3), 2), p).unwrap());
            assert!(!check_qk_condition(&rank_one(TruncSeries::pi(32), 1), p).unwrap());
        }
    }

    #[test]
    fn qk_needs_depth() {
        let q = q_series(3, 8);
        assert!(matches!(check_qk_condition(&rank_one(q.pow(4), 4), 3), Err(Error::TruncationTooShallow { .. })));
    }

    #[test]
    fn gamma_checks() {
        let id =
            ProductMatrix::from_components(&[vec![vec![ser(&[1]), ser(&[0])], vec![ser(&[0]), ser(&[1])]]]).unwrap();
        let near = ProductMatrix::from_components(&[vec![
            vec![ser(&[1, 4, 2]), ser(&[0, 1])],
            vec![ser(&[0, -3]), ser(&[1, 0, 7])],
        ]])
        .unwrap();
        let off =
            ProductMatrix::from_components(&[vec![vec![ser(&[1]), ser(&[0])], vec![ser(&[0]), ser(&[4])]]]).unwrap();
        let mk = |g: ProductMatrix<TruncSeries>| WachData { pi: id.clone(), gamma: Some(vec![(4, g)]), k: 0 };
        assert!(check_gamma_trivial_mod_pi(&mk(id.clone())).unwrap());
        assert!(check_gamma_trivial_mod_pi(&mk(near)).unwrap());
        assert!(!check_gamma_trivial_mod_pi(&mk(off)).unwrap());
        let none = WachData { pi: id, gamma: None, k: 0 };
        assert_eq!(check_gamma_trivial_mod_pi(&none), Err(Error::MissingGammaData));
    }

    #[test]
    fn rendering_and_modulus() {
        assert_eq!(q_series(3, T).to_string(), "3 + 3*pi + pi^2");
        assert_eq!(ser(&[0, -2, 0, 1]).to_string(), "-2*pi + pi^3");
        assert_eq!(ser(&[]).to_string(), "0");
        let m = q_series(3, T).with_modulus(3, 1);
        assert_eq!(m.to_string(), "pi^2");
        let parsed: TruncSeries = serde_json::from_str(r#"[3, "3", 1]"#).unwrap();
        assert_eq!(parsed, q_series(3, 3));
    }
}
