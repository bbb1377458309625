//! Linear relations between K^n and K^m, stored as graphs in K^(n+m).

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::report::{Check, DecisionReport};
use crate::subspace::{concat, is_zero_vector, unit_vector, zero_vector, Subspace, Vector};

/// The four subspaces attached to a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationParts {
    pub dom: Subspace,
    pub ran: Subspace,
    pub ker: Subspace,
    pub mul: Subspace,
}

/// A linear subspace of K^n × K^m. Graph rows are pairs `[x | y]`.
pub struct LinearRelation {
    dom_dim: usize,
    cod_dim: usize,
    graph: Subspace,
    parts: OnceLock<RelationParts>,
}

impl Clone for LinearRelation {
    fn clone(&self) -> Self {
        LinearRelation {
            dom_dim: self.dom_dim,
            cod_dim: self.cod_dim,
            graph: self.graph.clone(),
            parts: self.parts.clone(),
        }
    }
}

impl PartialEq for LinearRelation {
    fn eq(&self, other: &Self) -> bool {
        self.dom_dim == other.dom_dim && self.cod_dim == other.cod_dim && self.graph == other.graph
    }
}

impl Eq for LinearRelation {}

impl fmt::Debug for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearRelation({} -> {}, {:?})",
            self.dom_dim, self.cod_dim, self.graph
        )
    }
}

impl fmt::Display for LinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}^{} x {}^{} ⊇ ",
            self.field(),
            self.dom_dim,
            self.field(),
            self.cod_dim
        )?;
        write!(f, "{}", self.graph)
    }
}

fn require_same_field(a: FieldSpec, b: FieldSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::FieldMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

impl LinearRelation {
    pub fn new(dom_dim: usize, cod_dim: usize, graph: Subspace) -> Result<LinearRelation> {
        if graph.ambient_dim() != dom_dim + cod_dim {
            return Err(Error::DimensionMismatch {
                expected: dom_dim + cod_dim,
                found: graph.ambient_dim(),
            });
        }
        Ok(LinearRelation {
            dom_dim,
            cod_dim,
            graph,
            parts: OnceLock::new(),
        })
    }

    pub fn from_generators<I>(
        field: FieldSpec,
        dom_dim: usize,
        cod_dim: usize,
        generators: I,
    ) -> Result<LinearRelation>
    where
        I: IntoIterator<Item = Vector>,
    {
        let graph = Subspace::canonicalize(field, dom_dim + cod_dim, generators)?;
        LinearRelation::new(dom_dim, cod_dim, graph)
    }

    /// The relation spanned by the pairs `(x, y)`.
    pub fn from_pairs(
        field: FieldSpec,
        dom_dim: usize,
        cod_dim: usize,
        pairs: &[(Vector, Vector)],
    ) -> Result<LinearRelation> {
        for (x, y) in pairs {
            if x.len() != dom_dim {
                return Err(Error::DimensionMismatch {
                    expected: dom_dim,
                    found: x.len(),
                });
            }
            if y.len() != cod_dim {
                return Err(Error::DimensionMismatch {
                    expected: cod_dim,
                    found: y.len(),
                });
            }
        }
        Self::from_generators(
            field,
            dom_dim,
            cod_dim,
            pairs.iter().map(|(x, y)| concat(x, y)),
        )
    }

    /// Graph of the total map K^n → K^m sending `e_i` to `images[i]`.
    pub fn operator(
        field: FieldSpec,
        dom_dim: usize,
        cod_dim: usize,
        images: &[Vector],
    ) -> Result<LinearRelation> {
        if images.len() != dom_dim {
            return Err(Error::DimensionMismatch {
                expected: dom_dim,
                found: images.len(),
            });
        }
        let pairs: Vec<_> = images
            .iter()
            .enumerate()
            .map(|(i, y)| (unit_vector(field, dom_dim, i), y.clone()))
            .collect();
        Self::from_pairs(field, dom_dim, cod_dim, &pairs)
    }

    pub fn identity(field: FieldSpec, n: usize) -> LinearRelation {
        diagonal(&Subspace::full(field, n))
    }

    /// The zero relation `{(0, 0)}`.
    pub fn zero(field: FieldSpec, dom_dim: usize, cod_dim: usize) -> LinearRelation {
        LinearRelation::new(dom_dim, cod_dim, Subspace::zero(field, dom_dim + cod_dim))
            .expect("shape")
    }

    /// The product relation `U × W`.
    pub fn product(dom_part: &Subspace, cod_part: &Subspace) -> Result<LinearRelation> {
        let graph = dom_part.product(cod_part)?;
        LinearRelation::new(dom_part.ambient_dim(), cod_part.ambient_dim(), graph)
    }

    pub fn field(&self) -> FieldSpec {
        self.graph.field()
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.cod_dim
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn same_shape(&self, other: &LinearRelation) -> bool {
        self.field() == other.field()
            && self.dom_dim == other.dom_dim
            && self.cod_dim == other.cod_dim
    }

    pub(crate) fn require_same_shape(&self, other: &LinearRelation) -> Result<()> {
        require_same_field(self.field(), other.field())?;
        if self.dom_dim != other.dom_dim || self.cod_dim != other.cod_dim {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.dom_dim, self.cod_dim, other.dom_dim, other.cod_dim
            )));
        }
        Ok(())
    }

    /// `R⁻¹`, the relation with the two coordinate blocks swapped.
    pub fn inverse(&self) -> LinearRelation {
        let n = self.dom_dim;
        let rows = self
            .graph
            .basis()
            .iter()
            .map(|r| concat(&r[n..], &r[..n]))
            .collect();
        LinearRelation::new(
            self.cod_dim,
            self.dom_dim,
            Subspace::from_rows(self.field(), n + self.cod_dim, rows),
        )
        .expect("shape")
    }

    /// The product `self ∘ r`, i.e. `SR` with `self = S`.
    ///
    /// Works in K^(n+p+m) with coordinates ordered `(x, z, y)`: lift `R` to
    /// `{(x, z, y) : (x, y) ∈ R}` and `S` to `{(x, z, y) : (y, z) ∈ S}`,
    /// intersect and project onto `(x, z)`.
    pub fn compose(&self, r: &LinearRelation) -> Result<LinearRelation> {
        require_same_field(self.field(), r.field())?;
        if r.cod_dim != self.dom_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dom_dim,
                found: r.cod_dim,
            });
        }
        let field = self.field();
        let (n, m, p) = (r.dom_dim, r.cod_dim, self.cod_dim);
        let total = n + p + m;

        let mut lifted_r = Vec::with_capacity(r.graph.dim() + p);
        for row in r.graph.basis() {
            let mut v = zero_vector(field, total);
            v[..n].clone_from_slice(&row[..n]);
            v[n + p..].clone_from_slice(&row[n..]);
            lifted_r.push(v);
        }
        lifted_r.extend((0..p).map(|k| unit_vector(field, total, n + k)));

        let mut lifted_s = Vec::with_capacity(self.graph.dim() + n);
        for row in self.graph.basis() {
            let mut v = zero_vector(field, total);
            v[n..n + p].clone_from_slice(&row[m..]);
            v[n + p..].clone_from_slice(&row[..m]);
            lifted_s.push(v);
        }
        lifted_s.extend((0..n).map(|k| unit_vector(field, total, k)));

        let meet = Subspace::from_rows(field, total, lifted_r)
            .intersect(&Subspace::from_rows(field, total, lifted_s))?;
        LinearRelation::new(n, p, meet.project(0..n + p))
    }

    pub fn parts(&self) -> &RelationParts {
        self.parts.get_or_init(|| {
            let (n, m) = (self.dom_dim, self.cod_dim);
            let field = self.field();
            let total = n + m;
            let x_axis = Subspace::full(field, n).embed(total, 0);
            let y_axis = Subspace::full(field, m).embed(total, n);
            RelationParts {
                dom: self.graph.project(0..n),
                ran: self.graph.project(n..total),
                ker: self.graph.intersect(&x_axis).expect("shape").project(0..n),
                mul: self
                    .graph
                    .intersect(&y_axis)
                    .expect("shape")
                    .project(n..total),
            }
        })
    }

    pub fn dom(&self) -> &Subspace {
        &self.parts().dom
    }

    pub fn ran(&self) -> &Subspace {
        &self.parts().ran
    }

    pub fn ker(&self) -> &Subspace {
        &self.parts().ker
    }

    pub fn mul(&self) -> &Subspace {
        &self.parts().mul
    }

    /// `mul R = {0}`.
    pub fn is_operator(&self) -> bool {
        self.mul().is_zero()
    }

    /// `ker R = {0}`.
    pub fn is_injective(&self) -> bool {
        self.ker().is_zero()
    }

    /// `R(U)`.
    pub fn image(&self, u: &Subspace) -> Result<Subspace> {
        Ok(self
            .restrict(u)?
            .graph
            .project(self.dom_dim..self.dom_dim + self.cod_dim))
    }

    /// `R⁻¹(W)`.
    pub fn preimage(&self, w: &Subspace) -> Result<Subspace> {
        self.inverse().image(w)
    }

    /// `R|_U = R ∩ (U × K^m)`.
    pub fn restrict(&self, u: &Subspace) -> Result<LinearRelation> {
        require_same_field(self.field(), u.field())?;
        if u.ambient_dim() != self.dom_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dom_dim,
                found: u.ambient_dim(),
            });
        }
        let cylinder = u.product(&Subspace::full(self.field(), self.cod_dim))?;
        LinearRelation::new(self.dom_dim, self.cod_dim, self.graph.intersect(&cylinder)?)
    }

    /// Graph intersection `R ∩ S`.
    pub fn intersect(&self, other: &LinearRelation) -> Result<LinearRelation> {
        self.require_same_shape(other)?;
        LinearRelation::new(
            self.dom_dim,
            self.cod_dim,
            self.graph.intersect(&other.graph)?,
        )
    }

    /// Graph sum `R + S`.
    pub fn sum(&self, other: &LinearRelation) -> Result<LinearRelation> {
        self.require_same_shape(other)?;
        LinearRelation::new(self.dom_dim, self.cod_dim, self.graph.sum(&other.graph)?)
    }

    /// Graph inclusion `self ⊆ other`.
    pub fn is_subrelation_of(&self, other: &LinearRelation) -> Result<bool> {
        self.require_same_shape(other)?;
        other.graph.contains(&self.graph)
    }

    pub fn contains_pair(
        &self,
        x: &[crate::field::Scalar],
        y: &[crate::field::Scalar],
    ) -> Result<bool> {
        if x.len() != self.dom_dim || y.len() != self.cod_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dom_dim + self.cod_dim,
                found: x.len() + y.len(),
            });
        }
        self.graph.contains_vector(&concat(x, y))
    }

    /// The canonical element of `R(x)`: the RREF-particular solution with
    /// every free coefficient (those of the `mul R` rows) set to zero. It is
    /// also the normal form of any element of `R(x)` modulo `mul R`.
    /// `None` when `x ∉ dom R`.
    pub fn canonical_image(&self, x: &[crate::field::Scalar]) -> Result<Option<Vector>> {
        if x.len() != self.dom_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dom_dim,
                found: x.len(),
            });
        }
        let n = self.dom_dim;
        let mut residual = x.to_vec();
        let mut y = zero_vector(self.field(), self.cod_dim);
        for (row, &c) in self.graph.basis().iter().zip(self.graph.pivots()) {
            if c >= n {
                break;
            }
            let coeff = residual[c].clone();
            if coeff.is_zero() {
                continue;
            }
            let neg = -&coeff;
            crate::subspace::axpy(&mut residual, &neg, &row[..n]);
            crate::subspace::axpy(&mut y, &coeff, &row[n..]);
        }
        if !is_zero_vector(&residual) {
            return Ok(None);
        }
        Ok(Some(y))
    }

    /// The canonical element of `R⁻¹(y)`.
    pub fn canonical_preimage(&self, y: &[crate::field::Scalar]) -> Result<Option<Vector>> {
        self.inverse().canonical_image(y)
    }
}

/// `Δ_U = {(u, u) : u ∈ U}`.
pub fn diagonal(u: &Subspace) -> LinearRelation {
    let rows: Vec<Vector> = u.basis().iter().map(|r| concat(r, r)).collect();
    let n = u.ambient_dim();
    LinearRelation::new(n, n, Subspace::from_rows(u.field(), 2 * n, rows)).expect("shape")
}

/// Arens: for `R ⊆ S`, `R = S` iff `ker R = ker S` and `ran R = ran S`.
/// The containment is checked first and is part of the verdict.
pub fn arens_equal(r: &LinearRelation, s: &LinearRelation) -> Result<DecisionReport> {
    r.require_same_shape(s)?;
    let mut report = DecisionReport::new("p0");
    report
        .check(Check::flag(
            "R ⊆ S",
            r.is_subrelation_of(s)?,
            format!("dim {} vs dim {}", r.graph.dim(), s.graph.dim()),
        ))
        .check(Check::equality("ker R = ker S", r.ker(), s.ker()))
        .check(Check::equality("ran R = ran S", r.ran(), s.ran()));
    let direct = r == s;
    let verdict = report.verdict;
    report.cross_check(Check::flag(
        "agrees with direct graph equality",
        verdict == direct,
        format!("graph equality {direct}"),
    ));
    Ok(report)
}

/// `A ⊆ B` iff `ker A ⊆ ker B` and `ran(A ∩ B) = ran A`; also evaluates the
/// dual form `mul A ⊆ mul B` and `dom(A ∩ B) = dom A`.
pub fn contained_c12(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    a.require_same_shape(b)?;
    let meet = a.intersect(b)?;
    let mut report = DecisionReport::new("c12");
    report
        .check(Check::inclusion("ker A ⊆ ker B", a.ker(), b.ker())?)
        .check(Check::equality("ran (A ∩ B) = ran A", meet.ran(), a.ran()));
    let verdict = report.verdict;
    let dual = b.mul().contains(a.mul())? && meet.dom() == a.dom();
    let direct = a.is_subrelation_of(b)?;
    report
        .cross_check(Check::flag(
            "(iii) mul A ⊆ mul B and dom (A ∩ B) = dom A agrees",
            dual == verdict,
            format!("(iii) is {dual}"),
        ))
        .cross_check(Check::flag(
            "agrees with direct graph containment",
            direct == verdict,
            format!("A ⊆ B is {direct}"),
        ));
    Ok(report)
}
