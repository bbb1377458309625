//! Canonical subspaces of K^n.
//!
//! A [`Subspace`] always stores the reduced row-echelon basis of its span, so
//! two subspaces are equal exactly when their representations are. The zero
//! subspace has an empty basis.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: FieldSpec, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `a + c * b`, in place.
pub(crate) fn axpy(a: &mut [Scalar], c: &Scalar, b: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x = &*x + &(c * y);
        }
    }
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// Concatenation `[a | b]`.
pub fn concat(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().chain(b).cloned().collect()
}

/// Row reduces `rows` (each of length `ncols`) into strict RREF, dropping
/// zero rows. Returns the pivot column of each surviving row.
pub(crate) fn rref(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].inverse().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = -&row[c];
                axpy(row, &factor, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace({}, dim {} in {}^{})",
            self.field,
            self.dim(),
            self.field,
            self.ambient_dim
        )?;
        for row in &self.basis {
            write!(f, "\n  [")?;
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (k, row) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "}}")
    }
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            field,
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            field,
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| unit_vector(field, ambient_dim, i))
                .collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// The span of `generators`, in canonical form.
    pub fn canonicalize<I>(field: FieldSpec, ambient_dim: usize, generators: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut rows = Vec::new();
        for g in generators {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: g.len(),
                });
            }
            if let Some(bad) = g.iter().find(|x| x.field() != field) {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: bad.field().to_string(),
                });
            }
            if !is_zero_vector(&g) {
                rows.push(g);
            }
        }
        Ok(Self::from_rows(field, ambient_dim, rows))
    }

    /// Canonicalizes rows already known to have the right length and field.
    pub(crate) fn from_rows(
        field: FieldSpec,
        ambient_dim: usize,
        mut rows: Vec<Vector>,
    ) -> Subspace {
        let pivots = rref(&mut rows, ambient_dim);
        Subspace {
            field,
            ambient_dim,
            basis: rows,
            pivots,
        }
    }

    /// Wraps rows that are already in strict RREF. Only checked in debug builds.
    pub(crate) fn from_rref_unchecked(
        field: FieldSpec,
        ambient_dim: usize,
        rows: Vec<Vector>,
    ) -> Subspace {
        let pivots: Vec<usize> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .position(|x| !x.is_zero())
                    .expect("nonzero RREF row")
            })
            .collect();
        let s = Subspace {
            field,
            ambient_dim,
            basis: rows,
            pivots,
        };
        debug_assert_eq!(s, Self::from_rows(field, ambient_dim, s.basis.clone()));
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: bad.field().to_string(),
            });
        }
        Ok(())
    }

    /// Normal form of `v` modulo this subspace: the pivot coordinates are
    /// cleared. Zero exactly when `v` is a member.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut out = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            if !out[c].is_zero() {
                let factor = -&out[c];
                axpy(&mut out, &factor, row);
            }
        }
        out
    }

    /// Coordinates of a member with respect to the RREF basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vector>> {
        self.check_vector(v)?;
        if !is_zero_vector(&self.reduce(v)) {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&c| v[c].clone()).collect()))
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> Result<bool> {
        self.check_vector(v)?;
        Ok(is_zero_vector(&self.reduce(v)))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(other.basis.iter().all(|w| is_zero_vector(&self.reduce(w))))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_rows(self.field, self.ambient_dim, rows))
    }

    /// Intersection by Zassenhaus block elimination: reduce the rows
    /// `[u | u]` and `[w | 0]`; the rows whose left half vanishes carry a
    /// basis of the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.field, n));
        }
        let zeros = zero_vector(self.field, n);
        let mut rows: Vec<Vector> = self
            .basis
            .iter()
            .map(|u| concat(u, u))
            .chain(other.basis.iter().map(|w| concat(w, &zeros)))
            .collect();
        let pivots = rref(&mut rows, 2 * n);
        let inter = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= n)
            .map(|(r, _)| r[n..].to_vec())
            .collect();
        Ok(Self::from_rows(self.field, n, inter))
    }

    /// A complement of `self` inside `outer`: greedily adds the RREF basis
    /// rows of `outer`, in order, whenever they leave the current span.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace> {
        self.check_compatible(outer)?;
        if !outer.contains(self)? {
            return Err(Error::NotContained);
        }
        let mut span = self.clone();
        let mut chosen = Vec::new();
        for w in &outer.basis {
            if span.dim() == outer.dim() {
                break;
            }
            if !is_zero_vector(&span.reduce(w)) {
                chosen.push(w.clone());
                span = span.sum(&Subspace::from_rows(
                    self.field,
                    self.ambient_dim,
                    vec![w.clone()],
                ))?;
            }
        }
        Ok(Self::from_rows(self.field, self.ambient_dim, chosen))
    }

    /// `dim outer - dim self`, for `self ⊆ outer`.
    pub fn codim_in(&self, outer: &Subspace) -> Result<usize> {
        if !outer.contains(self)? {
            return Err(Error::NotContained);
        }
        Ok(outer.dim() - self.dim())
    }

    /// Image under the coordinate projection onto `cols`.
    pub fn project(&self, cols: Range<usize>) -> Subspace {
        let width = cols.len();
        let rows = self
            .basis
            .iter()
            .map(|r| r[cols.clone()].to_vec())
            .collect();
        Self::from_rows(self.field, width, rows)
    }

    /// Places this subspace into K^total at coordinates `offset..offset+n`,
    /// with zeros elsewhere.
    pub fn embed(&self, total: usize, offset: usize) -> Subspace {
        assert!(offset + self.ambient_dim <= total);
        let rows = self
            .basis
            .iter()
            .map(|r| {
                let mut v = zero_vector(self.field, total);
                v[offset..offset + self.ambient_dim].clone_from_slice(r);
                v
            })
            .collect();
        let pivots = self.pivots.iter().map(|p| p + offset).collect();
        Subspace {
            field: self.field,
            ambient_dim: total,
            basis: rows,
            pivots,
        }
    }

    /// The product `self × other` inside K^(n+m).
    pub fn product(&self, other: &Subspace) -> Result<Subspace> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        let total = self.ambient_dim + other.ambient_dim;
        let mut rows = self.embed(total, 0).basis;
        rows.extend(other.embed(total, self.ambient_dim).basis);
        Ok(Subspace::from_rref_unchecked(self.field, total, rows))
    }

    /// Whether the listed vectors are linearly independent.
    pub fn independent(field: FieldSpec, ambient_dim: usize, vectors: &[Vector]) -> Result<bool> {
        let s = Subspace::canonicalize(field, ambient_dim, vectors.iter().cloned())?;
        Ok(s.dim() == vectors.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> FieldSpec {
        FieldSpec::gf2()
    }

    fn v(f: FieldSpec, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    fn span(f: FieldSpec, n: usize, gens: &[&[i64]]) -> Subspace {
        Subspace::canonicalize(f, n, gens.iter().map(|g| v(f, g))).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let f = gf2();
        let s = span(f, 2, &[&[1, 1], &[1, 1]]);
        assert_eq!(s.basis(), &[v(f, &[1, 1])]);

        let s = span(f, 3, &[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis(), &[v(f, &[1, 0, 1]), v(f, &[0, 1, 1])]);

        let q = FieldSpec::Rational;
        let z = Subspace::canonicalize(q, 2, Vec::<Vector>::new()).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(z.is_zero());
    }

    #[test]
    fn canonicalize_errors() {
        let f = gf2();
        assert_eq!(
            Subspace::canonicalize(f, 2, vec![v(f, &[1, 0, 1])]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        let q = FieldSpec::Rational;
        assert!(matches!(
            Subspace::canonicalize(f, 1, vec![v(q, &[1])]),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn rational_rref_normalizes_pivots() {
        let q = FieldSpec::Rational;
        let s = span(q, 3, &[&[2, 4, 6], &[0, 3, 3]]);
        assert_eq!(s.basis(), &[v(q, &[1, 0, 1]), v(q, &[0, 1, 1])]);
        assert_eq!(s.pivots(), &[0, 1]);
    }

    #[test]
    fn sum_and_intersection_examples() {
        let f = gf2();
        let u = span(f, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        let w = span(f, 3, &[&[1, 1, 0], &[0, 0, 1]]);
        assert!(u.sum(&w).unwrap().is_full());
        assert_eq!(u.intersect(&w).unwrap(), span(f, 3, &[&[1, 1, 0]]));
        assert_eq!(u.sum(&Subspace::zero(f, 3)).unwrap(), u);
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert!(u.intersect(&Subspace::zero(f, 3)).unwrap().is_zero());
        assert!(u.sum(&Subspace::zero(f, 2)).is_err());
    }

    #[test]
    fn contains_examples() {
        let f = gf2();
        let u = span(f, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        assert!(u.contains(&Subspace::zero(f, 3)).unwrap());
        assert!(Subspace::full(f, 2)
            .contains(&span(f, 2, &[&[1, 1]]))
            .unwrap());
        assert!(!u.contains(&span(f, 3, &[&[0, 0, 1]])).unwrap());
    }

    #[test]
    fn complement_examples() {
        let f = gf2();
        let u = span(f, 3, &[&[1, 0, 1]]);
        assert!(u.complement_in(&u).unwrap().is_zero());
        let w = span(f, 3, &[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(Subspace::zero(f, 3).complement_in(&w).unwrap(), w);
        let k2 = Subspace::full(f, 2);
        let diag = span(f, 2, &[&[1, 1]]);
        assert_eq!(diag.complement_in(&k2).unwrap(), span(f, 2, &[&[1, 0]]));
        assert_eq!(k2.complement_in(&diag), Err(Error::NotContained));
    }

    #[test]
    fn zero_ambient_dimension() {
        let f = gf2();
        let z = Subspace::zero(f, 0);
        let full = Subspace::full(f, 0);
        assert_eq!(z, full);
        assert_eq!(z.sum(&full).unwrap(), z);
        assert_eq!(z.intersect(&full).unwrap(), z);
        assert!(z.contains(&full).unwrap());
        assert!(z.complement_in(&full).unwrap().is_zero());
        assert!(z.contains_vector(&[]).unwrap());
    }

    #[test]
    fn projection_and_embedding() {
        let f = gf2();
        let s = span(f, 4, &[&[1, 0, 1, 1], &[0, 1, 0, 1]]);
        assert_eq!(s.project(2..4), Subspace::full(f, 2));
        assert_eq!(s.project(0..1), Subspace::full(f, 1));
        let e = span(f, 2, &[&[1, 1]]).embed(4, 1);
        assert_eq!(e, span(f, 4, &[&[0, 1, 1, 0]]));
        let p = span(f, 1, &[&[1]]).product(&Subspace::zero(f, 2)).unwrap();
        assert_eq!(p, span(f, 3, &[&[1, 0, 0]]));
    }

    #[test]
    fn coordinates_reconstruct_member() {
        let q = FieldSpec::Rational;
        let s = span(q, 3, &[&[1, 2, 3], &[0, 1, 5]]);
        let x = v(q, &[2, 7, 21]);
        let c = s.coordinates(&x).unwrap().unwrap();
        let mut back = zero_vector(q, 3);
        for (ci, row) in c.iter().zip(s.basis()) {
            axpy(&mut back, ci, row);
        }
        assert_eq!(back, x);
        assert_eq!(s.coordinates(&v(q, &[0, 0, 1])).unwrap(), None);
    }
}
