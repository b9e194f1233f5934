//! Tame inertia characters `omega_m^e` with `e` taken mod `p^m - 1`.
//!
//! Exponents are stored relative to `omega_{m,tau_0}`; since
//! `omega_{m,tau_{i+1}} = omega_{m,tau_i}^p`, the same character has exponent
//! `e * p^{m-j}` relative to `omega_{m,tau_j}`.

use serde::{Deserialize, Serialize};

use crate::characters::{ell_character, CrystallineCharacter, EllSData};
use crate::error::{Error, Result};

/// Largest `p^{2f}` the exhaustive oracle will enumerate.
pub const ORACLE_CAP: u128 = 10_000_000;

pub fn checked_pow(p: u64, e: u32) -> Result<u128> {
    (p as u128).checked_pow(e).ok_or_else(|| Error::Overflow(format!("{p}^{e}")))
}

/// `p^level - 1`.
pub fn modulus(p: u64, level: u32) -> Result<u128> {
    let q = checked_pow(p, level)?;
    if q > i64::MAX as u128 {
        return Err(Error::Overflow(format!("{p}^{level} exceeds the supported range")));
    }
    Ok(q - 1)
}

fn reduce(x: i128, n: u128) -> u128 {
    if n <= 1 {
        return 0;
    }
    x.rem_euclid(n as i128) as u128
}

fn mul_mod(a: u128, b: u128, n: u128) -> u128 {
    if n <= 1 {
        0
    } else {
        (a % n) * (b % n) % n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InertiaCharacter {
    pub p: u64,
    pub level: u32,
    pub exp: u128,
}

impl InertiaCharacter {
    pub fn new(p: u64, level: u32, exp: i128) -> Result<Self> {
        let n = modulus(p, level)?;
        Ok(InertiaCharacter { p, level, exp: reduce(exp, n) })
    }

    /// Exponent relative to `omega_{level, tau_j}`.
    pub fn relative_to(&self, j: u32) -> Result<u128> {
        let n = modulus(self.p, self.level)?;
        let shift = (self.level - j % self.level) % self.level;
        Ok(mul_mod(self.exp, checked_pow(self.p, shift)?, n))
    }

    pub fn pow(&self, e: u128) -> Result<Self> {
        let n = modulus(self.p, self.level)?;
        Ok(InertiaCharacter { exp: mul_mod(self.exp, e, n), ..*self })
    }
}

/// Unordered pair of inertia characters of a common level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemisimpleReduction {
    pub p: u64,
    pub level: u32,
    /// Sorted exponents relative to `omega_{level, tau_0}`.
    pub exponents: [u128; 2],
}

impl SemisimpleReduction {
    pub fn new(p: u64, level: u32, a: u128, b: u128) -> Self {
        SemisimpleReduction { p, level, exponents: [a.min(b), a.max(b)] }
    }

    /// The exponents relative to `omega_{level, tau_j}`, sorted.
    pub fn relative_to(&self, j: u32) -> Result<[u128; 2]> {
        let a = InertiaCharacter { p: self.p, level: self.level, exp: self.exponents[0] }.relative_to(j)?;
        let b = InertiaCharacter { p: self.p, level: self.level, exp: self.exponents[1] }.relative_to(j)?;
        Ok([a.min(b), a.max(b)])
    }
}

/// `omega^{-sum n_i p^{i+1}}`: the inertia restriction of `chi`, unramified part dropped.
pub fn reduce_character(chi: &CrystallineCharacter, p: u64) -> Result<InertiaCharacter> {
    let level = chi.level as u32;
    let n = modulus(p, level)?;
    let mut acc: u128 = 0;
    for (i, &e) in chi.exponents.iter().enumerate() {
        let w = checked_pow(p, ((i + 1) % chi.level) as u32)? % n.max(1);
        acc = (acc + mul_mod(reduce(e as i128, n), w, n)) % n.max(1);
    }
    InertiaCharacter::new(p, level, -(acc as i128))
}

/// Reduction of the representation induced from a level-`2f` character: `{e, e p^f}`.
pub fn induce_reduction(c: &InertiaCharacter, f: u32) -> Result<SemisimpleReduction> {
    if c.level != 2 * f {
        return Err(Error::Shape(format!("expected a level-{} character, got level {}", 2 * f, c.level)));
    }
    let twisted = c.pow(checked_pow(c.p, f)?)?;
    Ok(SemisimpleReduction::new(c.p, c.level, c.exp, twisted.exp))
}

/// Determinant on inertia: level `f`, exponent `-sum k_i p^i mod p^f - 1`.
pub fn det_reduction(weights: &[i64], p: u64) -> Result<InertiaCharacter> {
    let f = weights.len() as u32;
    let n = modulus(p, f)?;
    let mut acc: i128 = 0;
    for (i, &k) in weights.iter().enumerate() {
        let w = checked_pow(p, i as u32)? % n.max(1);
        acc = (acc + reduce(k as i128, n) as i128 * w as i128) % (n.max(1) as i128);
    }
    InertiaCharacter::new(p, f, -acc)
}

/// Level-`f` exponent viewed at level `2f`, where `omega_{2f}^{1+p^f} = omega_f`.
pub fn lift_det(det: &InertiaCharacter) -> Result<u128> {
    let n2 = modulus(det.p, 2 * det.level)?;
    Ok(mul_mod(det.exp, 1 + checked_pow(det.p, det.level)?, n2))
}

/// `e_1 + e_2 = (1 + p^f) d` modulo `p^{2f} - 1`.
pub fn det_consistent(red: &SemisimpleReduction, det: &InertiaCharacter) -> Result<bool> {
    let n = modulus(red.p, red.level)?;
    Ok((red.exponents[0] + red.exponents[1]) % n.max(1) == lift_det(det)? % n.max(1))
}

/// `L + D (1 + p^f) = -L p^f` modulo `p^{2f} - 1`, where `omega^{-L}` is the
/// ell-character's reduction and `D` the determinant exponent.
pub fn star_congruence(ell_reduction: &InertiaCharacter, det: &InertiaCharacter) -> Result<bool> {
    let n = modulus(ell_reduction.p, ell_reduction.level)?;
    let l = reduce(-(ell_reduction.exp as i128), n);
    let lhs = (l + lift_det(det)?) % n.max(1);
    let rhs = mul_mod(reduce(-(l as i128), n), checked_pow(ell_reduction.p, det.level)?, n);
    Ok(lhs == rhs)
}

pub fn star_identity_check(data: &EllSData, weights: &[i64], p: u64) -> Result<bool> {
    let f = weights.len();
    if data.ell.len() != 2 * f {
        return Err(Error::Shape(format!("ell has length {}, expected {}", data.ell.len(), 2 * f)));
    }
    let red = reduce_character(&ell_character(data), p)?;
    star_congruence(&red, &det_reduction(weights, p)?)
}

/// Irreducible iff `(p^f + 1)` does not divide `e`.
pub fn is_irreducible_closed_form(e: u128, p: u64, f: u32) -> Result<bool> {
    let n = modulus(p, 2 * f)?;
    let d = checked_pow(p, f)? + 1;
    Ok(!(e % n.max(1)).is_multiple_of(d))
}

/// Exhaustive search for `m` with `(1 + p^f) m = e` modulo `p^{2f} - 1`.
pub fn irreducibility_oracle(e: u128, p: u64, f: u32) -> Result<bool> {
    let size = checked_pow(p, 2 * f)?;
    if size > ORACLE_CAP {
        return Err(Error::TooLarge { size, cap: ORACLE_CAP });
    }
    let n = size - 1;
    let target = e % n.max(1);
    let step = (1 + checked_pow(p, f)?) % n.max(1);
    let mut acc = 0u128;
    for _ in 0..n.max(1) {
        if acc == target {
            return Ok(false);
        }
        acc = (acc + step) % n.max(1);
    }
    Ok(true)
}

/// Marks the residues mod `p^{2f} - 1` hit by `m -> (1 + p^f) m`, in one pass.
pub fn reducible_residues(p: u64, f: u32) -> Result<Vec<bool>> {
    let size = checked_pow(p, 2 * f)?;
    if size > ORACLE_CAP {
        return Err(Error::TooLarge { size, cap: ORACLE_CAP });
    }
    let n = (size - 1).max(1);
    let step = (1 + checked_pow(p, f)?) % n;
    let mut hit = vec![false; n as usize];
    let mut acc = 0u128;
    for _ in 0..n {
        hit[acc as usize] = true;
        acc = (acc + step) % n;
    }
    Ok(hit)
}
