//! Tuples and square matrices over a product ring `R^m`.
//!
//! Index 0 is the distinguished embedding. Frobenius acts on a tuple by the
//! left cyclic shift `(a_0, a_1, ..., a_{m-1}) -> (a_1, ..., a_{m-1}, a_0)`, so
//! on coordinate vectors `(phi v)_i = P_i v_{i+1}`.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The commutative ring operations the matrix layer needs.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
}

impl Ring for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
}

/// An element of `R^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tuple<R>(pub Vec<R>);

impl<R: Ring> Tuple<R> {
    pub fn new(entries: Vec<R>) -> Self {
        assert!(!entries.is_empty(), "tuples have length at least 1");
        Tuple(entries)
    }

    pub fn constant(value: R, m: usize) -> Self {
        Tuple::new(vec![value; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Ring::is_zero)
    }

    pub fn get(&self, i: usize) -> &R {
        &self.0[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, R> {
        self.0.iter()
    }

    pub fn frobenius_shift(&self) -> Self {
        let mut v = self.0.clone();
        v.rotate_left(1);
        Tuple(v)
    }

    /// `theta`: repeat the tuple `n` times.
    pub fn theta_embed(&self, n: usize) -> Self {
        assert!(n >= 1, "theta embedding needs n >= 1");
        Tuple(self.0.iter().cloned().cycle().take(self.0.len() * n).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "tuple length mismatch");
        Tuple(self.0.iter().zip(&other.0).map(|(a, b)| a.mul_ref(b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "tuple length mismatch");
        Tuple(self.0.iter().zip(&other.0).map(|(a, b)| a.add_ref(b)).collect())
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Tuple(self.0.iter().map(f).collect())
    }
}

impl Tuple<Scalar> {
    pub fn ints(values: &[i64]) -> Self {
        Tuple::new(values.iter().map(|&v| Scalar::int(v)).collect())
    }
}

impl<R: fmt::Display> fmt::Display for Tuple<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A `d x d` matrix whose entries are tuples of a common length `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMatrix<R> {
    dim: usize,
    entries: Vec<Vec<Tuple<R>>>,
}

impl<R: Ring> ProductMatrix<R> {
    pub fn new(entries: Vec<Vec<Tuple<R>>>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::Shape("matrix must have at least one row".into()));
        }
        let m = entries[0].first().map(Tuple::len).unwrap_or(0);
        if m == 0 {
            return Err(Error::Shape("tuples must have length at least 1".into()));
        }
        for row in &entries {
            if row.len() != dim {
                return Err(Error::Shape(format!("expected {dim} columns, found {}", row.len())));
            }
            if row.iter().any(|t| t.len() != m) {
                return Err(Error::Shape(format!("all entries must have length {m}")));
            }
        }
        Ok(ProductMatrix { dim, entries })
    }

    /// Assemble from per-embedding matrices `components[i][row][col]`.
    pub fn from_components(components: &[Vec<Vec<R>>]) -> Result<Self> {
        let m = components.len();
        if m == 0 {
            return Err(Error::Shape("need at least one embedding".into()));
        }
        let dim = components[0].len();
        let mut entries = Vec::with_capacity(dim);
        for r in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for c in 0..dim {
                let mut t = Vec::with_capacity(m);
                for comp in components {
                    let value = comp
                        .get(r)
                        .and_then(|row| row.get(c))
                        .ok_or_else(|| Error::Shape("ragged component matrices".into()))?;
                    t.push(value.clone());
                }
                row.push(Tuple(t));
            }
            entries.push(row);
        }
        ProductMatrix::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of embeddings.
    pub fn m(&self) -> usize {
        self.entries[0][0].len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Tuple<R> {
        &self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<Tuple<R>>] {
        &self.entries
    }

    /// The ordinary matrix at embedding `i`.
    pub fn component(&self, i: usize) -> Vec<Vec<R>> {
        self.entries.iter().map(|row| row.iter().map(|t| t.0[i].clone()).collect()).collect()
    }

    pub fn components(&self) -> Vec<Vec<Vec<R>>> {
        (0..self.m()).map(|i| self.component(i)).collect()
    }

    pub fn map_entries(&self, f: impl Fn(&Tuple<R>) -> Tuple<R>) -> Self {
        ProductMatrix { dim: self.dim, entries: self.entries.iter().map(|row| row.iter().map(&f).collect()).collect() }
    }

    /// `phi(A)`: shift every entry tuple.
    pub fn frobenius_shift(&self) -> Self {
        self.map_entries(Tuple::frobenius_shift)
    }

    /// `A^{(x)n}`: theta-embed every entry.
    pub fn tensor_n(&self, n: usize) -> Self {
        self.map_entries(|t| t.theta_embed(n))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.m() != other.m() {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} over length {} by {}x{} over length {}",
                self.dim,
                self.dim,
                self.m(),
                other.dim,
                other.dim,
                other.m()
            )));
        }
        let comps: Vec<_> = (0..self.m()).map(|i| mat_mul(&self.component(i), &other.component(i))).collect();
        ProductMatrix::from_components(&comps)
    }

    /// Componentwise determinant (dimensions 1 and 2).
    pub fn det(&self) -> Result<Tuple<R>> {
        Ok(Tuple((0..self.m()).map(|i| det_small(&self.component(i))).collect::<Result<_>>()?))
    }

    pub fn is_diagonal(&self) -> bool {
        self.first_off_diagonal().is_none()
    }

    /// First embedding with a nonzero off-diagonal entry.
    pub fn first_off_diagonal(&self) -> Option<usize> {
        (0..self.m())
            .find(|&i| (0..self.dim).any(|r| (0..self.dim).any(|c| r != c && !self.entries[r][c].0[i].is_zero())))
    }

    pub fn diagonal(&self) -> Vec<Tuple<R>> {
        (0..self.dim).map(|r| self.entries[r][r].clone()).collect()
    }

    /// `Q A phi(Q)^{-1}` with caller-supplied inversion of the components of `phi(Q)`.
    pub fn semilinear_conjugate_with(
        q: &Self,
        a: &Self,
        inverse: impl Fn(usize, &[Vec<R>]) -> Result<Vec<Vec<R>>>,
    ) -> Result<Self> {
        if q.dim != a.dim || q.m() != a.m() {
            return Err(Error::Shape("base change and Frobenius matrices differ in shape".into()));
        }
        let m = q.m();
        let mut comps = Vec::with_capacity(m);
        for i in 0..m {
            // component i of phi(Q) is Q_{i+1}
            let j = (i + 1) % m;
            let shifted_inv = inverse(j, &q.component(j))?;
            comps.push(mat_mul(&mat_mul(&q.component(i), &a.component(i)), &shifted_inv));
        }
        ProductMatrix::from_components(&comps)
    }
}

impl ProductMatrix<Scalar> {
    pub fn identity(dim: usize, m: usize) -> Self {
        let entries =
            (0..dim).map(|r| (0..dim).map(|c| Tuple::constant(Scalar::int(i64::from(r == c)), m)).collect()).collect();
        ProductMatrix { dim, entries }
    }

    pub fn diag(diagonal: Vec<Tuple<Scalar>>) -> Result<Self> {
        let dim = diagonal.len();
        let m = diagonal.first().map(Tuple::len).unwrap_or(0);
        let entries = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| if r == c { diagonal[r].clone() } else { Tuple::constant(Scalar::zero(), m) })
                    .collect()
            })
            .collect();
        ProductMatrix::new(entries)
    }

    pub fn has_params(&self) -> bool {
        self.entries.iter().flatten().any(|t| t.iter().any(Scalar::has_params))
    }

    /// Set every formal parameter to zero.
    pub fn at_zero_params(&self) -> Self {
        self.map_entries(|t| t.map(Scalar::at_zero_params))
    }

    /// `[phi]_e = Q [phi]_eta phi(Q)^{-1}`.
    pub fn semilinear_conjugate(q: &Self, a: &Self) -> Result<Self> {
        ProductMatrix::semilinear_conjugate_with(q, a, invert_scalar_matrix)
    }
}

/// Inverse of a 1x1 or 2x2 scalar matrix whose determinant is a unit monomial.
pub fn invert_scalar_matrix(embedding: usize, m: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let det = det_small(m)?;
    let inv = det.inverse().map_err(|_| Error::SingularBaseChange { embedding, det: det.to_string() })?;
    Ok(adjugate(m)?.into_iter().map(|row| row.into_iter().map(|x| &x * &inv).collect()).collect())
}

pub fn mat_mul<R: Ring>(a: &[Vec<R>], b: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = a.len();
    let zero = a[0][0].zero_like();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).fold(zero.clone(), |acc, k| acc.add_ref(&a[r][k].mul_ref(&b[k][c])))).collect())
        .collect()
}

pub fn mat_vec<R: Ring>(a: &[Vec<R>], v: &[R]) -> Vec<R> {
    a.iter().map(|row| row.iter().zip(v).fold(v[0].zero_like(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))).collect()
}

pub fn det_small<R: Ring>(m: &[Vec<R>]) -> Result<R> {
    match m.len() {
        1 => Ok(m[0][0].clone()),
        2 => Ok(m[0][0].mul_ref(&m[1][1]).sub_ref(&m[0][1].mul_ref(&m[1][0]))),
        n => Err(Error::Shape(format!("determinants are only supported up to 2x2, got {n}x{n}"))),
    }
}

pub fn adjugate<R: Ring>(m: &[Vec<R>]) -> Result<Vec<Vec<R>>> {
    match m.len() {
        1 => Ok(vec![vec![m[0][0].one_like()]]),
        2 => Ok(vec![vec![m[1][1].clone(), m[0][1].neg_ref()], vec![m[1][0].neg_ref(), m[0][0].clone()]]),
        n => Err(Error::Shape(format!("adjugates are only supported up to 2x2, got {n}x{n}"))),
    }
}

impl<R: Ring + Serialize> Serialize for ProductMatrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de, R: Ring + DeserializeOwned> Deserialize<'de> for ProductMatrix<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Vec<Tuple<R>>>::deserialize(d)?;
        ProductMatrix::new(entries).map_err(serde::de::Error::custom)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for ProductMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.entries.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|t| t.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
