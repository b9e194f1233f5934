//! The type I-IV families, the two `f = 2` fixtures, and the end-to-end
//! analysis pipeline.
//!
//! Slot layout: the Frobenius product `P_1 x P_2 x ... x P_{f-1} x P_0` puts
//! `P_{(s+1) mod f}` in slot `s`, while the filtration pair `(x_t, y_t)` sits
//! in slot `t`. `types[j]` and `weights[j]` always refer to index `j`.
//!
//! All computations run with the family parameters set to zero; the mod-p
//! reduction does not depend on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::characters::{ell_character, ell_s_vectors, from_rank_one, s_character, CrystallineCharacter, EllSData};
use crate::error::{Error, Result};
use crate::filtered::{FilteredPhiModule, FiltrationStep};
use crate::product_ring::{ProductMatrix, Tuple};
use crate::reduction::{
    det_consistent, det_reduction, induce_reduction, irreducibility_oracle, is_irreducible_closed_form,
    reduce_character, star_congruence, star_identity_check, InertiaCharacter, SemisimpleReduction,
};
use crate::scalar::Scalar;
use crate::wach::{
    check_qk_condition, default_truncation, q_power_exponent, q_series, restrict_wach, TruncSeries, WachData,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum FamilyType {
    I,
    II,
    III,
    IV,
}

impl FamilyType {
    pub const ALL: [FamilyType; 4] = [FamilyType::I, FamilyType::II, FamilyType::III, FamilyType::IV];
}

impl TryFrom<u8> for FamilyType {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(FamilyType::I),
            2 => Ok(FamilyType::II),
            3 => Ok(FamilyType::III),
            4 => Ok(FamilyType::IV),
            _ => Err(Error::InvalidSpec(format!("type must be in 1..=4, got {v}"))),
        }
    }
}

impl From<FamilyType> for u8 {
    fn from(t: FamilyType) -> u8 {
        match t {
            FamilyType::I => 1,
            FamilyType::II => 2,
            FamilyType::III => 3,
            FamilyType::IV => 4,
        }
    }
}

impl fmt::Display for FamilyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

/// The two worked `f = 2` constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub enum Fixture {
    V25,
    V28,
}

impl TryFrom<u16> for Fixture {
    type Error = Error;
    fn try_from(v: u16) -> Result<Self> {
        match v {
            25 => Ok(Fixture::V25),
            28 => Ok(Fixture::V28),
            _ => Err(Error::InvalidSpec(format!("unknown fixture {v}; expected 25 or 28"))),
        }
    }
}

impl From<Fixture> for u16 {
    fn from(x: Fixture) -> u16 {
        match x {
            Fixture::V25 => 25,
            Fixture::V28 => 28,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub p: u64,
    pub f: usize,
    pub weights: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub types: Option<Vec<FamilyType>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<Fixture>,
    #[serde(default)]
    pub a_symbolic: bool,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FamilySpec {
    pub fn general(p: u64, types: Vec<FamilyType>, weights: Vec<i64>) -> Self {
        FamilySpec { p, f: types.len(), weights, types: Some(types), fixture: None, a_symbolic: false }
    }

    pub fn fixture(p: u64, fixture: Fixture, k0: i64, k1: i64) -> Self {
        FamilySpec { p, f: 2, weights: vec![k0, k1], types: None, fixture: Some(fixture), a_symbolic: false }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidSpec(format!("p = {} is not prime", self.p)));
        }
        if self.f == 0 {
            return Err(Error::InvalidSpec("f must be positive".into()));
        }
        if self.weights.len() != self.f {
            return Err(Error::InvalidSpec(format!("expected {} weights, got {}", self.f, self.weights.len())));
        }
        if let Some(k) = self.weights.iter().find(|&&k| k < 1) {
            return Err(Error::InvalidSpec(format!("weights must be positive, got {k}")));
        }
        match (&self.types, self.fixture) {
            (Some(_), Some(_)) => Err(Error::InvalidSpec("give either types or a fixture, not both".into())),
            (None, None) => Err(Error::InvalidSpec("missing types or fixture".into())),
            (Some(t), None) if t.len() != self.f => {
                Err(Error::InvalidSpec(format!("expected {} types, got {}", self.f, t.len())))
            }
            (None, Some(_)) if self.f != 2 => Err(Error::InvalidSpec("fixtures have f = 2".into())),
            _ => Ok(()),
        }
    }

    pub fn max_weight(&self) -> i64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// `m = floor((k - 1) / (p - 1))` with `k` the largest weight.
    pub fn m_exponent(&self) -> i64 {
        (self.max_weight() - 1).max(0) / (self.p as i64 - 1)
    }

    /// `a_j p^m`, or zero when parameters are not carried.
    pub fn alpha(&self, j: usize) -> Scalar {
        if self.a_symbolic {
            &Scalar::param(&format!("a_{j}")) * &Scalar::p_pow(self.m_exponent())
        } else {
            Scalar::zero()
        }
    }

    fn at_zero(&self) -> FamilySpec {
        FamilySpec { a_symbolic: false, ..self.clone() }
    }
}

fn int(n: i64) -> Scalar {
    Scalar::int(n)
}

/// Slot matrix of type `ty` with weight `k` and `X = x`.
pub fn type_matrix(ty: FamilyType, k: i64, x: Scalar) -> Vec<Vec<Scalar>> {
    let pk = Scalar::p_pow(k);
    match ty {
        FamilyType::I => vec![vec![int(0), int(-1)], vec![pk, x]],
        FamilyType::II => vec![vec![x, int(-1)], vec![pk, int(0)]],
        FamilyType::III => vec![vec![x, pk], vec![int(-1), int(0)]],
        FamilyType::IV => vec![vec![int(0), pk], vec![int(-1), x]],
    }
}

fn tuple(xs: Vec<Scalar>) -> Tuple<Scalar> {
    Tuple::new(xs)
}

pub fn build_p(spec: &FamilySpec) -> Result<ProductMatrix<Scalar>> {
    spec.validate()?;
    let k = &spec.weights;
    let pk = |i: usize| Scalar::p_pow(k[i]);
    match (spec.fixture, &spec.types) {
        (Some(Fixture::V25), _) => ProductMatrix::new(vec![
            vec![tuple(vec![spec.alpha(1), pk(0)]), tuple(vec![int(-1), int(0)])],
            vec![tuple(vec![pk(1), spec.alpha(0)]), tuple(vec![int(0), int(1)])],
        ]),
        (Some(Fixture::V28), _) => ProductMatrix::new(vec![
            vec![tuple(vec![spec.alpha(1), int(1)]), tuple(vec![int(-1), int(0)])],
            vec![tuple(vec![pk(1), spec.alpha(0)]), tuple(vec![int(0), pk(0)])],
        ]),
        (None, Some(types)) => {
            let f = spec.f;
            let comps: Vec<_> = (0..f)
                .map(|s| {
                    let j = (s + 1) % f;
                    type_matrix(types[j], k[j], spec.alpha(j))
                })
                .collect();
            ProductMatrix::from_components(&comps)
        }
        (None, None) => Err(Error::InvalidSpec("missing types or fixture".into())),
    }
}

/// Generator coordinates `(x, y)` of the first filtration step.
fn generator(spec: &FamilySpec) -> Result<(Tuple<Scalar>, Tuple<Scalar>)> {
    match (spec.fixture, &spec.types) {
        (Some(Fixture::V25), _) => Ok((Tuple::ints(&[1, 1]), tuple(vec![-spec.alpha(0), spec.alpha(1)]))),
        (Some(Fixture::V28), _) => Ok((Tuple::ints(&[0, 1]), tuple(vec![int(1), spec.alpha(1)]))),
        (None, Some(types)) => {
            let (xs, ys): (Vec<_>, Vec<_>) = types
                .iter()
                .enumerate()
                .map(|(t, ty)| match ty {
                    FamilyType::I => (int(1), int(0)),
                    FamilyType::II => (spec.alpha(t), int(1)),
                    FamilyType::III => (int(0), int(1)),
                    FamilyType::IV => (int(1), spec.alpha(t)),
                })
                .unzip();
            Ok((tuple(xs), tuple(ys)))
        }
        (None, None) => Err(Error::InvalidSpec("missing types or fixture".into())),
    }
}

/// Steps `[1 + w_{t-1}, w_t]` over the sorted distinct weights, with support
/// `I_t = {i : k_i >= w_t}`.
pub fn build_filtration(spec: &FamilySpec) -> Result<Vec<FiltrationStep>> {
    spec.validate()?;
    let (x, y) = generator(spec)?;
    let mut levels = spec.weights.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut prev = 0;
    Ok(levels
        .into_iter()
        .map(|w| {
            let support = Tuple::ints(&spec.weights.iter().map(|&k| i64::from(k >= w)).collect::<Vec<_>>());
            let step = FiltrationStep {
                lo: prev + 1,
                hi: w,
                support: support.clone(),
                generator: vec![support.mul(&x), support.mul(&y)],
            };
            prev = w;
            step
        })
        .collect())
}

pub fn build_module(spec: &FamilySpec) -> Result<FilteredPhiModule> {
    FilteredPhiModule::new(build_p(spec)?, build_filtration(spec)?, spec.weights.iter().map(|&k| vec![0, -k]).collect())
}

/// Base change used for both fixtures over the four restricted slots.
pub fn fixture_q(k1: i64) -> ProductMatrix<Scalar> {
    let i = Scalar::sqrt_minus_one();
    let up = &i * &Scalar::p_pow2(k1);
    let down = &i * &Scalar::p_pow2(-k1);
    let z = Scalar::zero;
    ProductMatrix::new(vec![
        vec![Tuple::ints(&[0, 1, 1, 0]), tuple(vec![down.clone(), z(), z(), down])],
        vec![tuple(vec![up.clone(), z(), z(), up]), Tuple::ints(&[0, 1, 1, 0])],
    ])
    .expect("fixture base change is 2x2 over four slots")
}

/// `Q_s = Id` for even `s`, the swap for odd `s`, over `2f` slots.
pub fn alternating_q(f: usize) -> ProductMatrix<Scalar> {
    let odd: Vec<i64> = (0..2 * f).map(|s| (s % 2) as i64).collect();
    let even: Vec<i64> = odd.iter().map(|o| 1 - o).collect();
    ProductMatrix::new(vec![vec![Tuple::ints(&even), Tuple::ints(&odd)], vec![Tuple::ints(&odd), Tuple::ints(&even)]])
        .expect("alternating base change is well formed")
}

/// The general-family Wach matrix: slot `s` is `[[0, b_j], [c_j, 0]]` with
/// `j = (s + 1) mod f` and `b, c` in `{-1, q^{k_j}}`.
pub fn general_wach(p: u64, types: &[FamilyType], weights: &[i64], order: usize) -> Result<WachData> {
    let f = types.len();
    if weights.len() != f || f == 0 {
        return Err(Error::InvalidSpec("types and weights must have the same positive length".into()));
    }
    let q = q_series(p, order);
    let entry = |e: Option<i64>| match e {
        None => TruncSeries::constant(-1, order),
        Some(k) => q.pow(k as u32),
    };
    let zero = TruncSeries::constant(0, order);
    let comps: Vec<_> = (0..f)
        .map(|s| {
            let j = (s + 1) % f;
            let (beta, gamma) = crate::characters::beta_gamma(types[j], weights[j]);
            vec![vec![zero.clone(), entry(beta)], vec![entry(gamma), zero.clone()]]
        })
        .collect();
    let k = weights.iter().copied().max().unwrap_or(0).max(0) as u32;
    Ok(WachData { pi: ProductMatrix::from_components(&comps)?, gamma: None, k })
}

/// Diagonal of `Q Pi^{(x)2} phi(Q)^{-1}` for the alternating `Q`.
fn wach_diagonal(w: &WachData, f: usize) -> Result<Vec<Tuple<TruncSeries>>> {
    let restricted = restrict_wach(w, 2);
    let order = restricted.pi.entry(0, 0).get(0).order();
    let one = TruncSeries::constant(1, order);
    let zero = TruncSeries::constant(0, order);
    let comps: Vec<_> = (0..2 * f)
        .map(|s| {
            if s % 2 == 0 {
                vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]]
            } else {
                vec![vec![zero.clone(), one.clone()], vec![one.clone(), zero.clone()]]
            }
        })
        .collect();
    let q = ProductMatrix::from_components(&comps)?;
    // Id and the swap are their own inverses.
    let conj = ProductMatrix::semilinear_conjugate_with(&q, &restricted.pi, |_, m| Ok(m.to_vec()))?;
    if let Some(i) = conj.first_off_diagonal() {
        return Err(Error::NotDiagonal(i));
    }
    Ok(conj.diagonal())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WachChecks {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Killed by `q^k` with `k` the largest weight.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qk: Option<bool>,
    /// Not killed by `q^{k-1}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qk_sharp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qk_restricted: Option<bool>,
    /// The diagonalized restricted Wach matrix has the ell exponents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell_matches: Option<bool>,
    pub gamma: String,
}

impl WachChecks {
    fn not_supplied() -> Self {
        WachChecks {
            status: "not supplied".into(),
            truncation: None,
            qk: None,
            qk_sharp: None,
            qk_restricted: None,
            ell_matches: None,
            gamma: "not supplied".into(),
        }
    }

    pub fn ok(&self) -> bool {
        [self.qk, self.qk_sharp, self.qk_restricted, self.ell_matches].iter().all(|c| c.unwrap_or(true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub level: u32,
    /// `omega_{level, tau_j}` the exponents are written against.
    pub generator: String,
    pub generator_index: u32,
    pub exponents: [u128; 2],
    pub det_exponent: u128,
    pub irreducible: bool,
    pub oracle_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub spec: FamilySpec,
    pub frobenius: ProductMatrix<Scalar>,
    pub diagonal: Vec<Tuple<Scalar>>,
    pub character_ell: CrystallineCharacter,
    pub character_s: CrystallineCharacter,
    pub pipeline_character: CrystallineCharacter,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell_s: Option<EllSData>,
    pub reduction: ReductionReport,
    pub det_ok: bool,
    pub star_ok: bool,
    pub admissible: bool,
    pub irreducible: bool,
    pub oracle_agrees: bool,
    pub ell_s_agree: bool,
    pub pipeline_consistent: bool,
    pub wach_checks: WachChecks,
    pub note: String,
    pub valid: bool,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    /// Series truncation for the Wach checks; defaults to `max(32, k(p-1)+8)`.
    pub trunc: Option<usize>,
}

const FAMILY_NOTE: &str = "computed at a = 0; the reduction is the same for every a in the maximal ideal";

struct Core {
    diagonal: Vec<Tuple<Scalar>>,
    character_ell: CrystallineCharacter,
    character_s: CrystallineCharacter,
    pipeline_character: CrystallineCharacter,
    ell_s: Option<EllSData>,
    admissible: bool,
    generator_index: u32,
    star_ok: Option<bool>,
    wach_checks: WachChecks,
}

pub fn analyze(spec: &FamilySpec, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    spec.validate()?;
    let p = spec.p;
    let f = spec.f as u32;
    let core = match spec.fixture {
        Some(fx) => analyze_fixture(spec, fx)?,
        None if spec.f.is_multiple_of(2) => {
            return Err(Error::UnsupportedShape(format!(
                "f = {} is even; only the fixtures 25 and 28 are supported there",
                spec.f
            )))
        }
        None => analyze_general(spec, opts)?,
    };

    let e = reduce_character(&core.character_ell, p)?;
    let red = induce_reduction(&e, f)?;
    let red_s = induce_reduction(&reduce_character(&core.character_s, p)?, f)?;
    let red_pipe = induce_reduction(&reduce_character(&core.pipeline_character, p)?, f)?;
    let det = det_reduction(&spec.weights, p)?;
    let det_ok = det_consistent(&red, &det)?;
    let star_ok = match core.star_ok {
        Some(s) => s,
        None => star_congruence(&e, &det)?,
    };
    let irreducible = is_irreducible_closed_form(e.exp, p, f)?;
    let oracle = irreducibility_oracle(e.exp, p, f)?;
    let oracle_agrees = oracle == irreducible;
    let ell_s_agree = red == red_s;
    let pipeline_consistent = red == red_pipe;
    let exponents = red.relative_to(core.generator_index)?;
    let valid = oracle_agrees && det_ok && star_ok && core.admissible && ell_s_agree && core.wach_checks.ok();

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        spec: spec.clone(),
        frobenius: build_p(spec)?,
        diagonal: core.diagonal,
        character_ell: core.character_ell,
        character_s: core.character_s,
        pipeline_character: core.pipeline_character,
        ell_s: core.ell_s,
        reduction: ReductionReport {
            level: 2 * f,
            generator: format!("omega_{{{},tau_{}}}", 2 * f, core.generator_index),
            generator_index: core.generator_index,
            exponents,
            det_exponent: det.exp,
            irreducible,
            oracle_agrees,
        },
        det_ok,
        star_ok,
        admissible: core.admissible,
        irreducible,
        oracle_agrees,
        ell_s_agree,
        pipeline_consistent,
        wach_checks: core.wach_checks,
        note: FAMILY_NOTE.into(),
        valid,
    })
}

/// Restricted and diagonalized fixture module, before splitting.
pub fn fixture_diagonalized(spec: &FamilySpec) -> Result<FilteredPhiModule> {
    let d = build_module(&spec.at_zero())?;
    d.restrict(2).base_change(&fixture_q(spec.weights[1]))
}

fn analyze_fixture(spec: &FamilySpec, fx: Fixture) -> Result<Core> {
    let d = build_module(&spec.at_zero())?;
    let admissible = d.check_weak_admissibility()?.admissible && d.restrict(2).check_weak_admissibility()?.admissible;
    let db = d.restrict(2).base_change(&fixture_q(spec.weights[1]))?;
    let (d1, d2) = db.split_rank_one()?;
    let chi2 = from_rank_one(d2.normalize_rank_one()?.rank_one_vector()?)?;
    let chi1 = from_rank_one(d1.normalize_rank_one()?.rank_one_vector()?)?;
    Ok(Core {
        diagonal: db.frobenius.diagonal(),
        character_ell: chi2.clone(),
        character_s: chi1,
        pipeline_character: chi2,
        ell_s: None,
        admissible,
        generator_index: match fx {
            Fixture::V25 => 1,
            Fixture::V28 => 0,
        },
        star_ok: None,
        wach_checks: WachChecks::not_supplied(),
    })
}

fn analyze_general(spec: &FamilySpec, opts: &AnalyzeOptions) -> Result<Core> {
    let types = spec.types.as_ref().expect("validated general spec has types");
    let p = spec.p;
    let d = build_module(&spec.at_zero())?;
    let d2 = d.restrict(2);
    let admissible = d.check_weak_admissibility()?.admissible && d2.check_weak_admissibility()?.admissible;
    let db = d2.base_change(&alternating_q(spec.f))?;
    let (d1, _) = db.split_rank_one()?;

    let ell = ell_s_vectors(types, &spec.weights)?;
    let character_ell = ell_character(&ell);
    let character_s = s_character(&ell);
    let pipeline_character = from_rank_one(d1.normalize_rank_one()?.rank_one_vector()?)?;
    let frobenius_matches = from_rank_one(d1.rank_one_vector()?)? == character_ell;

    let k = spec.max_weight() as u32;
    let order = opts.trunc.unwrap_or_else(|| default_truncation(p, k));
    let w = general_wach(p, types, &spec.weights, order)?;
    let qk = check_qk_condition(&w, p)?;
    let qk_sharp = k == 0 || !check_qk_condition(&WachData { k: k - 1, ..w.clone() }, p)?;
    let qk_restricted = check_qk_condition(&restrict_wach(&w, 2), p)?;
    let wach_exps: Option<Vec<i64>> = wach_diagonal(&w, spec.f)?[0]
        .iter()
        .map(|s| q_power_exponent(s, p, k).map(|e| e.map_or(0, i64::from)))
        .collect();
    let ell_matches = frobenius_matches && wach_exps.as_deref() == Some(&character_ell.exponents[..]);

    Ok(Core {
        diagonal: db.frobenius.diagonal(),
        star_ok: Some(star_identity_check(&ell, &spec.weights, p)?),
        character_ell,
        character_s,
        pipeline_character,
        ell_s: Some(ell),
        admissible,
        generator_index: 0,
        wach_checks: WachChecks {
            status: "checked".into(),
            truncation: Some(order),
            qk: Some(qk),
            qk_sharp: Some(qk_sharp),
            qk_restricted: Some(qk_restricted),
            ell_matches: Some(ell_matches),
            gamma: "not supplied".into(),
        },
    })
}

/// Level-`2f` reduction pair and determinant of a report, relative to `omega_{tau_0}`.
pub fn reduction_of(report: &AnalysisReport) -> Result<(SemisimpleReduction, InertiaCharacter)> {
    let e = reduce_character(&report.character_ell, report.spec.p)?;
    Ok((induce_reduction(&e, report.spec.f as u32)?, det_reduction(&report.spec.weights, report.spec.p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use FamilyType::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn type_matrices() {
        let spec = FamilySpec::general(3, vec![I], vec![2]);
        let p = build_p(&spec).unwrap();
        assert_eq!(p.component(0), vec![vec![s("0"), s("-1")], vec![s("p^2"), s("0")]]);
        let spec = FamilySpec { a_symbolic: true, ..FamilySpec::general(3, vec![IV], vec![5]) };
        let p = build_p(&spec).unwrap();
        // m = floor(4 / 2) = 2
        assert_eq!(p.component(0), vec![vec![s("0"), s("p^5")], vec![s("-1"), s("a_0*p^2")]]);
    }

    #[test]
    fn fixture_rows() {
        let spec = FamilySpec { a_symbolic: true, ..FamilySpec::fixture(3, Fixture::V25, 1, 2) };
        let p = build_p(&spec).unwrap();
        assert_eq!(p.entry(0, 0), &Tuple::new(vec![s("a_1"), s("p")]));
        assert_eq!(p.entry(0, 1), &Tuple::ints(&[-1, 0]));
        let steps = build_filtration(&spec).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].generator[1], Tuple::new(vec![s("-a_0"), s("a_1")]));
        let spec = FamilySpec { a_symbolic: true, ..FamilySpec::fixture(3, Fixture::V28, 2, 2) };
        let steps = build_filtration(&spec).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].generator[0], Tuple::ints(&[0, 1]));
        assert_eq!(steps[0].generator[1], Tuple::new(vec![s("1"), s("a_1")]));
    }

    #[test]
    fn all_type_one_generators() {
        let spec = FamilySpec::general(5, vec![I, I, I], vec![1, 1, 1]);
        let steps = build_filtration(&spec).unwrap();
        assert_eq!(steps[0].generator, vec![Tuple::ints(&[1, 1, 1]), Tuple::ints(&[0, 0, 0])]);
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::general(3, vec![I], vec![0]).validate().is_err());
        assert!(FamilySpec::general(4, vec![I], vec![1]).validate().is_err());
        assert!(matches!(
            analyze(&FamilySpec::general(3, vec![I, II], vec![1, 1]), &AnalyzeOptions::default()),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn small_general_run() {
        let r = analyze(&FamilySpec::general(3, vec![I], vec![2]), &AnalyzeOptions::default()).unwrap();
        assert!(r.valid, "{r:#?}");
        assert_eq!(r.reduction.level, 2);
        // ell = (2, 0): exponent -2 mod 8
        assert_eq!(r.reduction.exponents, [2, 6]);
        assert!(!r.irreducible || r.oracle_agrees);
    }

    #[test]
    fn fixture_run() {
        let r = analyze(&FamilySpec::fixture(3, Fixture::V25, 1, 2), &AnalyzeOptions::default()).unwrap();
        assert!(r.valid, "{r:#?}");
        assert!(r.irreducible);
        assert_eq!(r.reduction.exponents, [35, 75]);
        assert_eq!(r.character_ell.to_string(), "eta(zeta8^1)*chi[2]^2*chi[3]^1");
    }
}
