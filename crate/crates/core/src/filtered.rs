//! Filtered phi-modules of rank 1 and 2 over a product ring.
//!
//! Filtration step `t` covers the jump range `[lo, hi]` and is spanned by
//! `f_I (x eta_1 + y eta_2)`, where the 0/1 support tuple `f_I` selects the
//! embeddings that still carry the line. Embedding `i` therefore has a jump at
//! every `j` in a step with `support_i = 1` and a nonzero generator.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::product_ring::{adjugate, mat_mul, mat_vec, ProductMatrix, Tuple};
use crate::scalar::{RootOfUnity, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationStep {
    pub lo: i64,
    pub hi: i64,
    pub support: Tuple<Scalar>,
    /// Coordinates of the generator, one tuple per basis vector.
    pub generator: Vec<Tuple<Scalar>>,
}

impl FiltrationStep {
    pub fn width(&self) -> i64 {
        self.hi - self.lo + 1
    }

    pub fn supported(&self, i: usize) -> bool {
        self.support.get(i).is_one()
    }

    /// Generator coordinates at embedding `i`.
    pub fn vector_at(&self, i: usize) -> Vec<Scalar> {
        self.generator.iter().map(|t| t.get(i).clone()).collect()
    }

    /// Whether the step contributes a jump at embedding `i`.
    pub fn active_at(&self, i: usize) -> bool {
        self.supported(i) && self.generator.iter().any(|t| !t.get(i).is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredPhiModule {
    pub rank: usize,
    pub frobenius: ProductMatrix<Scalar>,
    pub steps: Vec<FiltrationStep>,
    /// Per embedding: `[0, -k_i]` in rank 2, `[-h_i]` in rank 1.
    pub labeled_weights: Vec<Vec<i64>>,
}

/// Slope data behind a weak-admissibility verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub t_n: Ratio<i64>,
    pub t_h: i64,
    /// `(t_N(L), t_H(L))` for each phi-stable line met by the filtration.
    pub stable_lines: Vec<(Ratio<i64>, i64)>,
    pub min_newton_slope: Option<Ratio<i64>>,
}

fn cross(u: &[Scalar], v: &[Scalar]) -> Scalar {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

fn parallel(u: &[Scalar], v: &[Scalar]) -> bool {
    cross(u, v).is_zero()
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

impl FilteredPhiModule {
    pub fn new(
        frobenius: ProductMatrix<Scalar>,
        steps: Vec<FiltrationStep>,
        labeled_weights: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let d = FilteredPhiModule { rank: frobenius.dim(), frobenius, steps, labeled_weights };
        d.validate()?;
        Ok(d)
    }

    pub fn m(&self) -> usize {
        self.frobenius.m()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        if self.rank != 1 && self.rank != 2 {
            return Err(Error::InvalidModule(format!("rank must be 1 or 2, got {}", self.rank)));
        }
        if self.frobenius.dim() != self.rank {
            return Err(Error::InvalidModule("Frobenius dimension differs from the rank".into()));
        }
        if self.labeled_weights.len() != m {
            return Err(Error::InvalidModule(format!(
                "expected {m} labeled weight sets, got {}",
                self.labeled_weights.len()
            )));
        }
        let mut prev_hi = 0;
        for (n, step) in self.steps.iter().enumerate() {
            if step.lo > step.hi {
                return Err(Error::InvalidModule(format!("step {n} has lo > hi")));
            }
            if (n == 0 && step.lo != 1) || (n > 0 && step.lo <= prev_hi) {
                return Err(Error::InvalidModule(format!(
                    "step ranges must increase without overlap from 1 (step {n})"
                )));
            }
            prev_hi = step.hi;
            if step.support.len() != m || step.generator.len() != self.rank {
                return Err(Error::InvalidModule(format!("step {n} has the wrong shape")));
            }
            if step.generator.iter().any(|t| t.len() != m) {
                return Err(Error::InvalidModule(format!("step {n} generator has the wrong length")));
            }
            if step.support.iter().any(|x| !x.is_zero() && !x.is_one()) {
                return Err(Error::InvalidModule(format!("step {n} support is not 0/1")));
            }
        }
        if self.rank == 2 && !self.steps.is_empty() {
            let max_k = self.labeled_weights.iter().flatten().map(|w| -w).max().unwrap_or(0);
            if prev_hi != max_k {
                return Err(Error::InvalidModule(format!(
                    "last jump {prev_hi} differs from the largest weight {max_k}"
                )));
            }
        }
        Ok(())
    }

    /// Number of filtration jumps at each embedding.
    pub fn jump_counts(&self) -> Vec<i64> {
        (0..self.m()).map(|i| self.steps.iter().filter(|s| s.active_at(i)).map(FiltrationStep::width).sum()).collect()
    }

    /// Restriction to the degree-`n` unramified extension.
    pub fn restrict(&self, n: usize) -> FilteredPhiModule {
        FilteredPhiModule {
            rank: self.rank,
            frobenius: self.frobenius.tensor_n(n),
            steps: self
                .steps
                .iter()
                .map(|s| FiltrationStep {
                    lo: s.lo,
                    hi: s.hi,
                    support: s.support.theta_embed(n),
                    generator: s.generator.iter().map(|t| t.theta_embed(n)).collect(),
                })
                .collect(),
            labeled_weights: self.labeled_weights.iter().cycle().take(self.m() * n).cloned().collect(),
        }
    }

    /// Rewrite in the basis `e` with `eta = e Q`: Frobenius becomes
    /// `Q [phi] phi(Q)^{-1}` and coordinate columns `c` become `Q c`.
    pub fn base_change(&self, q: &ProductMatrix<Scalar>) -> Result<FilteredPhiModule> {
        let frobenius = ProductMatrix::semilinear_conjugate(q, &self.frobenius)?;
        let qs = q.components();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let cols: Vec<Vec<Scalar>> = (0..self.m()).map(|i| mat_vec(&qs[i], &s.vector_at(i))).collect();
                FiltrationStep {
                    lo: s.lo,
                    hi: s.hi,
                    support: s.support.clone(),
                    generator: (0..self.rank)
                        .map(|r| Tuple::new(cols.iter().map(|c| c[r].clone()).collect()))
                        .collect(),
                }
            })
            .collect();
        Ok(FilteredPhiModule { rank: self.rank, frobenius, steps, labeled_weights: self.labeled_weights.clone() })
    }

    fn require_monomial(&self) -> Result<()> {
        for t in self.frobenius.entries().iter().flatten() {
            for x in t.iter() {
                if x.has_params() || (!x.is_zero() && x.as_monomial().is_none()) {
                    return Err(Error::NonMonomialFrobenius(x.to_string()));
                }
            }
        }
        Ok(())
    }

    /// Slope test `t_N = t_H`, `t_N(L) >= t_H(L)` on phi-stable lines.
    pub fn check_weak_admissibility(&self) -> Result<AdmissibilityReport> {
        self.require_monomial()?;
        let m = self.m();
        let comps = self.frobenius.components();
        let mut t_n = Ratio::from_integer(0);
        for (i, c) in comps.iter().enumerate() {
            let det = crate::product_ring::det_small(c)?;
            if det.is_zero() {
                return Err(Error::InvalidModule(format!("Frobenius is singular at embedding {i}")));
            }
            t_n += det.p_valuation()?;
        }
        let jumps = self.jump_counts();
        let t_h: i64 = jumps.iter().sum();
        let mut report = AdmissibilityReport {
            admissible: t_n == Ratio::from_integer(t_h),
            t_n,
            t_h,
            stable_lines: Vec::new(),
            min_newton_slope: None,
        };
        if self.rank == 1 {
            return Ok(report);
        }

        // tails[i] = P_i P_{i+1} ... P_{m-1}; a stable line is determined by l_0,
        // an eigenvector of M = tails[0], and l_i = tails[i] l_0.
        let mut tails = vec![Vec::new(); m + 1];
        tails[m] = identity2();
        for i in (0..m).rev() {
            tails[i] = mat_mul(&comps[i], &tails[i + 1]);
        }
        let mono = &tails[0];
        let tr = &mono[0][0] + &mono[1][1];
        let det = crate::product_ring::det_small(mono)?;
        let half_det = det.p_valuation()? / 2;
        let min_slope = if tr.is_zero() { half_det } else { tr.p_valuation()?.min(half_det) };
        report.min_newton_slope = Some(min_slope);
        if min_slope < Ratio::from_integer(0) {
            report.admissible = false;
        }

        let mut seen: Vec<Vec<Scalar>> = Vec::new();
        for step in &self.steps {
            for i in 0..m {
                if !step.active_at(i) {
                    continue;
                }
                let g = step.vector_at(i);
                let l0 = if i == 0 { g } else { mat_vec(&adjugate(&tails[i])?, &g) };
                if is_zero_vec(&l0) || seen.iter().any(|v| parallel(v, &l0)) {
                    continue;
                }
                seen.push(l0.clone());
                let image = mat_vec(mono, &l0);
                if is_zero_vec(&image) || !parallel(&l0, &image) {
                    continue;
                }
                let c = if l0[0].is_zero() { 1 } else { 0 };
                let t_n_line = image[c].p_valuation()? - l0[c].p_valuation()?;
                let mut t_h_line = 0;
                for j in 0..m {
                    let lj = mat_vec(&tails[j], &l0);
                    for s in &self.steps {
                        if s.active_at(j) && parallel(&lj, &s.vector_at(j)) {
                            t_h_line += s.width();
                        }
                    }
                }
                if t_n_line < Ratio::from_integer(t_h_line) {
                    report.admissible = false;
                }
                report.stable_lines.push((t_n_line, t_h_line));
            }
        }
        Ok(report)
    }

    /// The two rank-one summands of a module with diagonal Frobenius, each with
    /// the induced filtration.
    pub fn split_rank_one(&self) -> Result<(FilteredPhiModule, FilteredPhiModule)> {
        if self.rank != 2 {
            return Err(Error::InvalidModule("splitting needs a rank-2 module".into()));
        }
        if let Some(i) = self.frobenius.first_off_diagonal() {
            return Err(Error::NotDiagonal(i));
        }
        let diag = self.frobenius.diagonal();
        let summand = |c: usize| -> Result<FilteredPhiModule> {
            let other = 1 - c;
            let steps: Vec<FiltrationStep> = self
                .steps
                .iter()
                .map(|s| {
                    let support = Tuple::new(
                        (0..self.m())
                            .map(|i| {
                                let on_line = s.active_at(i) && s.generator[other].get(i).is_zero();
                                Scalar::int(i64::from(on_line))
                            })
                            .collect(),
                    );
                    FiltrationStep {
                        lo: s.lo,
                        hi: s.hi,
                        support,
                        generator: vec![Tuple::constant(Scalar::one(), self.m())],
                    }
                })
                .collect();
            let mut d = FilteredPhiModule {
                rank: 1,
                frobenius: ProductMatrix::new(vec![vec![diag[c].clone()]])?,
                steps,
                labeled_weights: Vec::new(),
            };
            d.labeled_weights = d.jump_counts().into_iter().map(|h| vec![-h]).collect();
            Ok(d)
        };
        Ok((summand(0)?, summand(1)?))
    }

    /// Rank-one Frobenius vector.
    pub fn rank_one_vector(&self) -> Result<&Tuple<Scalar>> {
        if self.rank != 1 {
            return Err(Error::InvalidModule("expected a rank-1 module".into()));
        }
        Ok(self.frobenius.entry(0, 0))
    }

    /// Isomorphic rank-one module whose slot `s` is `C p^{h_{s+1}}`, with `h`
    /// the jump vector and `C` the principal `m`-th root of the unit part of
    /// the cyclic product. Any valuation left over goes to the last slot.
    pub fn normalize_rank_one(&self) -> Result<FilteredPhiModule> {
        let v = self.rank_one_vector()?;
        let m = self.m();
        let mut unit = RootOfUnity::one();
        let mut total2 = 0i64;
        for x in v.iter() {
            let u = x.unit_part().ok_or_else(|| Error::NonNormalized(x.to_string()))?;
            unit = unit.mul(u);
            total2 += x.p_valuation2()?;
        }
        if total2 % 2 != 0 {
            return Err(Error::NonNormalized(v.to_string()));
        }
        let h = self.jump_counts();
        let mut n: Vec<i64> = (0..m).map(|s| h[(s + 1) % m]).collect();
        n[m - 1] += total2 / 2 - h.iter().sum::<i64>();
        let c = unit.principal_root(m as u32, 8u32.lcm(&(m as u32)));
        let c = c.to_scalar();
        let entries = n.iter().map(|&k| &c * &Scalar::p_pow(k)).collect();
        Ok(FilteredPhiModule {
            rank: 1,
            frobenius: ProductMatrix::new(vec![vec![Tuple::new(entries)]])?,
            steps: self.steps.clone(),
            labeled_weights: self.labeled_weights.clone(),
        })
    }
}

fn identity2() -> Vec<Vec<Scalar>> {
    vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]
}
