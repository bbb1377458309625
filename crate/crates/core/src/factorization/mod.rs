//! Douglas-type factorization problems for linear relations.
//!
//! Right problems ask for `C` with `A ⊆ BC` where `A ⊆ X×Z`, `B ⊆ Y×Z`;
//! left problems ask for `C` with `A ⊆ CB` where `A ⊆ X×Z`, `B ⊆ X×Y`.
//! Every solver has a criterion function returning a [`DecisionReport`],
//! returns `None` exactly when that criterion fails, and re-verifies what it
//! builds before handing it out.
//!
//! All choices in the constructions are made canonically: complements come
//! from [`Subspace::complement_in`](crate::subspace::Subspace::complement_in), fiber elements from
//! [`LinearRelation::canonical_image`], so results are reproducible.

mod dimension;
mod left;
mod right;

pub use dimension::{
    codim_identity, independent_selection_check, independent_selection_for_pair, operator_part,
    operator_part_criterion, SelectionOutcome, SelectionWitness,
};
pub use left::{
    check_solution_families, left_criterion, left_injective_criterion, operator_from_family,
    operators_left_sufficient, solve_left_operator, solve_left_operator_injective,
};
pub use right::{
    exact_left_check, exact_right_check, is_right_solution_general_form, left_relation_criterion,
    right_operator_criterion, right_operator_pointwise, right_relation_criterion,
    solve_left_relation, solve_right_operator, solve_right_relation,
};

use crate::error::{Error, Result};
use crate::relation::LinearRelation;
use crate::report::{Check, DecisionReport};
use crate::subspace::Vector;

/// The basis families behind a left solution built by the formula
/// `C(Σ λ_α y_α + Σ λ'_β y'_β) = Σ λ_α z_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBasis {
    /// Basis of `ran A`; the first `split_i0` entries span `A(dom A ∩ ker B)`.
    pub z: Vec<Vector>,
    /// Witnesses `x_α ∈ A⁻¹(z_α) ∩ B⁻¹(y_α)`.
    pub x: Vec<Vector>,
    /// Independent family with `y_α ∈ BA⁻¹(z_α)`.
    pub y: Vec<Vector>,
    /// Basis of `ker A`; the first `split_j0` entries span `ker A ∩ ker B`.
    pub x_prime: Vec<Vector>,
    /// `y'_β ∈ B(x'_β)`, zero on the `ker A ∩ ker B` block.
    pub y_prime: Vec<Vector>,
    pub split_i0: usize,
    pub split_j0: usize,
}

/// A single-valued solution together with the checks it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSolution {
    pub relation: LinearRelation,
    pub basis: Option<SolutionBasis>,
    pub validation: DecisionReport,
}

/// Which side the unknown sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `A ⊆ BC`
    Right,
    /// `A ⊆ CB`
    Left,
}

pub(crate) fn right_shapes(a: &LinearRelation, b: &LinearRelation) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            left: a.field().to_string(),
            right: b.field().to_string(),
        });
    }
    if a.cod_dim() != b.cod_dim() {
        return Err(Error::ShapeMismatch(format!(
            "A ⊆ K^{}×K^{} and B ⊆ K^{}×K^{} must share the codomain",
            a.dom_dim(),
            a.cod_dim(),
            b.dom_dim(),
            b.cod_dim()
        )));
    }
    Ok(())
}

pub(crate) fn left_shapes(a: &LinearRelation, b: &LinearRelation) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            left: a.field().to_string(),
            right: b.field().to_string(),
        });
    }
    if a.dom_dim() != b.dom_dim() {
        return Err(Error::ShapeMismatch(format!(
            "A ⊆ K^{}×K^{} and B ⊆ K^{}×K^{} must share the domain",
            a.dom_dim(),
            a.cod_dim(),
            b.dom_dim(),
            b.cod_dim()
        )));
    }
    Ok(())
}

/// Checks a candidate `C` from scratch: the containment for `side`, plus
/// single-valuedness and injectivity when requested.
pub fn verify_solution(
    side: Side,
    a: &LinearRelation,
    b: &LinearRelation,
    c: &LinearRelation,
    operator: bool,
    injective: bool,
) -> Result<DecisionReport> {
    let (label, product) = match side {
        Side::Right => {
            right_shapes(a, b)?;
            if c.dom_dim() != a.dom_dim() || c.cod_dim() != b.dom_dim() {
                return Err(Error::ShapeMismatch(format!(
                    "C must be a relation K^{} -> K^{}",
                    a.dom_dim(),
                    b.dom_dim()
                )));
            }
            ("A ⊆ BC", b.compose(c)?)
        }
        Side::Left => {
            left_shapes(a, b)?;
            if c.dom_dim() != b.cod_dim() || c.cod_dim() != a.cod_dim() {
                return Err(Error::ShapeMismatch(format!(
                    "C must be a relation K^{} -> K^{}",
                    b.cod_dim(),
                    a.cod_dim()
                )));
            }
            ("A ⊆ CB", c.compose(b)?)
        }
    };
    let mut report = DecisionReport::new("validation");
    report.check(Check::flag(
        label,
        a.is_subrelation_of(&product)?,
        format!(
            "dim A {} vs dim product {}",
            a.graph().dim(),
            product.graph().dim()
        ),
    ));
    if operator {
        report.check(Check::flag(
            "mul C = {0}",
            c.is_operator(),
            format!("dim mul C {}", c.mul().dim()),
        ));
    }
    if injective {
        report.check(Check::flag(
            "ker C = {0}",
            c.is_injective(),
            format!("dim ker C {}", c.ker().dim()),
        ));
    }
    Ok(report)
}

pub(crate) fn postcondition(report: &DecisionReport, what: &str) -> Result<()> {
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Error::Postcondition(format!(
            "{what}: {} ({})",
            c.label, c.detail
        ))),
    }
}
