//! Crystalline characters `eta_C * prod chi_{e_i}^{n_i}` as exponent vectors,
//! and the ell/s data of the general family.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilyType;
use crate::product_ring::Tuple;
use crate::scalar::{RootOfUnity, Scalar};

/// Coordinate `j` of a rank-one Frobenius vector feeds `chi_{e_{j + POSITION_SHIFT}}`.
pub const POSITION_SHIFT: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystallineCharacter {
    /// Degree of the field the character lives on (number of `chi_{e_i}`).
    pub level: usize,
    pub unram: RootOfUnity,
    pub exponents: Vec<i64>,
}

impl CrystallineCharacter {
    pub fn trivial(level: usize) -> Self {
        CrystallineCharacter { level, unram: RootOfUnity::one(), exponents: vec![0; level] }
    }

    /// Rotate the exponent vector: `chi_{e_i}` becomes `chi_{e_{i+shift}}`.
    pub fn frobenius_conjugate(&self, shift: i64) -> Self {
        let n = self.level as i64;
        let mut exponents = vec![0; self.level];
        for (i, e) in self.exponents.iter().enumerate() {
            exponents[(i as i64 + shift).rem_euclid(n) as usize] = *e;
        }
        CrystallineCharacter { level: self.level, unram: self.unram, exponents }
    }
}

impl fmt::Display for CrystallineCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eta({})", self.unram)?;
        for (i, e) in self.exponents.iter().enumerate() {
            if *e != 0 {
                write!(f, "*chi[{i}]^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterRepr {
    level: usize,
    unram: String,
    exponents: Vec<i64>,
    text: String,
}

impl Serialize for CrystallineCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterRepr {
            level: self.level,
            unram: self.unram.to_string(),
            exponents: self.exponents.clone(),
            text: self.to_string(),
        }
        .serialize(s)
    }
}

/// Read a character off a rank-one Frobenius vector `(u_j p^{n_j})`.
pub fn from_rank_one(v: &Tuple<Scalar>) -> Result<CrystallineCharacter> {
    let level = v.len();
    let mut unit = RootOfUnity::one();
    let mut exponents = vec![0; level];
    for (j, x) in v.iter().enumerate() {
        let u = x.unit_part().ok_or_else(|| Error::NonNormalized(x.to_string()))?;
        let n2 = x.p_valuation2()?;
        if n2 % 2 != 0 {
            return Err(Error::NonNormalized(x.to_string()));
        }
        unit = unit.mul(u);
        exponents[(j + POSITION_SHIFT) % level] = n2 / 2;
    }
    let unram = unit.principal_root(level as u32, 8u32.lcm(&(level as u32)));
    Ok(CrystallineCharacter { level, unram, exponents })
}

/// `ell_j`, `s_j = k_{j mod f} - ell_j` for `j < 2f`, and `t = #{ell_j = 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllSData {
    pub ell: Vec<i64>,
    pub s: Vec<i64>,
    pub t: usize,
}

/// `(beta, gamma)` exponents at `X = 0`: `None` stands for `-1`, `Some(k)` for `p^k`.
pub fn beta_gamma(ty: FamilyType, k: i64) -> (Option<i64>, Option<i64>) {
    match ty {
        FamilyType::I | FamilyType::II => (None, Some(k)),
        FamilyType::III | FamilyType::IV => (Some(k), None),
    }
}

pub fn ell_s_vectors(types: &[FamilyType], weights: &[i64]) -> Result<EllSData> {
    let f = types.len();
    if weights.len() != f {
        return Err(Error::InvalidSpec(format!("{} weights for {} types", weights.len(), f)));
    }
    if f.is_multiple_of(2) {
        return Err(Error::EvenDegree(f));
    }
    let mut ell = Vec::with_capacity(2 * f);
    let mut s = Vec::with_capacity(2 * f);
    for j in 0..2 * f {
        let k = weights[j % f];
        let (beta, gamma) = beta_gamma(types[j % f], k);
        let l = if j % 2 == 1 { beta.unwrap_or(0) } else { gamma.unwrap_or(0) };
        ell.push(l);
        s.push(k - l);
    }
    let t = ell.iter().filter(|&&l| l == 0).count();
    Ok(EllSData { ell, s, t })
}

/// Unramified constant `(-1)^t` to the principal `2f`-th root.
fn family_unram(data: &EllSData) -> RootOfUnity {
    let level = data.ell.len() as u32;
    let sign = RootOfUnity::new(2, (data.t % 2) as u32);
    sign.principal_root(level, 8u32.lcm(&level))
}

/// `eta * prod chi_{e_{j-1}}^{ell_j}`: the character of the vector `(b_1, c_2, ..., c_0)`.
pub fn ell_character(data: &EllSData) -> CrystallineCharacter {
    shifted_character(data, &data.ell)
}

/// The same with `s` in place of `ell`.
pub fn s_character(data: &EllSData) -> CrystallineCharacter {
    shifted_character(data, &data.s)
}

fn shifted_character(data: &EllSData, v: &[i64]) -> CrystallineCharacter {
    let n = v.len();
    CrystallineCharacter { level: n, unram: family_unram(data), exponents: (0..n).map(|i| v[(i + 1) % n]).collect() }
}
