use crate::error::Result;
use crate::relation::{diagonal, LinearRelation};
use crate::report::{Check, DecisionReport};
use crate::subspace::{concat, zero_vector, Subspace, Vector};

use super::{left_criterion, left_shapes, postcondition, OperatorSolution};

/// `(codim_{dom R} ker R, codim_{ran R} mul R)`; the two always agree.
pub fn codim_identity(r: &LinearRelation) -> Result<(usize, usize)> {
    Ok((r.ker().codim_in(r.dom())?, r.mul().codim_in(r.ran())?))
}

/// A basis `{x_α}` of `dom R` with an independent selection `y_α ∈ R(x_α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionWitness {
    pub x: Vec<Vector>,
    pub y: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionOutcome {
    pub report: DecisionReport,
    pub witness: Option<SelectionWitness>,
}

/// Kernel block first (paired with independent vectors of `mul R`), then
/// the complement block with canonical selections.
fn build_selection(r: &LinearRelation) -> Result<SelectionWitness> {
    let ker = r.ker();
    let rest = ker.complement_in(r.dom())?;
    let mut x = Vec::with_capacity(r.dom().dim());
    let mut y = Vec::with_capacity(r.dom().dim());
    for (k, xk) in ker.basis().iter().enumerate() {
        x.push(xk.clone());
        y.push(r.mul().basis()[k].clone());
    }
    for xa in rest.basis() {
        x.push(xa.clone());
        y.push(r.canonical_image(xa)?.expect("x_α ∈ dom R"));
    }
    Ok(SelectionWitness { x, y })
}

fn witness_checks(
    r: &LinearRelation,
    w: &SelectionWitness,
    report: &mut DecisionReport,
) -> Result<()> {
    let field = r.field();
    let x_span = Subspace::canonicalize(field, r.dom_dim(), w.x.iter().cloned())?;
    report.cross_check(Check::flag(
        "witness {x_α} is a basis of dom R",
        x_span == *r.dom() && w.x.len() == x_span.dim(),
        format!("{} vectors", w.x.len()),
    ));
    let mut member = true;
    for (x, y) in w.x.iter().zip(&w.y) {
        member &= r.contains_pair(x, y)?;
    }
    report.cross_check(Check::flag("witness y_α ∈ R(x_α)", member, ""));
    report.cross_check(Check::flag(
        "witness {y_α} is linearly independent",
        Subspace::independent(field, r.cod_dim(), &w.y)?,
        format!("{} vectors", w.y.len()),
    ));
    Ok(())
}

/// Whether some basis of `dom R` admits an independent selection from the
/// fibers; holds iff `dim ker R ≤ dim mul R`. A witness is built and
/// re-checked when it does.
pub fn independent_selection_check(r: &LinearRelation) -> Result<SelectionOutcome> {
    let mut report = DecisionReport::new("c18");
    report.check(Check::at_most(
        "dim ker R ≤ dim mul R",
        r.ker().dim(),
        r.mul().dim(),
    ));
    let witness = if report.verdict {
        let w = build_selection(r)?;
        witness_checks(r, &w, &mut report)?;
        Some(w)
    } else {
        None
    };
    Ok(SelectionOutcome { report, witness })
}

/// The selection question for `R = BA⁻¹`: a basis `{z_α}` of `ran A` with an
/// independent family `y_α ∈ BA⁻¹(z_α)` exists iff
/// `dim A(dom A ∩ ker B) ≤ dim B(ker A)`, given `dom A ⊆ dom B`.
pub fn independent_selection_for_pair(
    a: &LinearRelation,
    b: &LinearRelation,
) -> Result<SelectionOutcome> {
    left_shapes(a, b)?;
    let r = b.compose(&a.inverse())?;
    let a_w = a.image(&a.dom().intersect(b.ker())?)?;
    let b_ka = b.image(a.ker())?;
    let mut report = DecisionReport::new("r19 (c18 with R = BA⁻¹)");
    report
        .check(Check::inclusion("dom A ⊆ dom B", a.dom(), b.dom())?)
        .check(Check::at_most(
            "dim A(dom A ∩ ker B) ≤ dim B(ker A)",
            a_w.dim(),
            b_ka.dim(),
        ));
    if report.checks[0].holds {
        report
            .cross_check(Check::equality(
                "ker BA⁻¹ = A(dom A ∩ ker B)",
                r.ker(),
                &a_w,
            ))
            .cross_check(Check::equality("mul BA⁻¹ = B(ker A)", r.mul(), &b_ka))
            .cross_check(Check::equality("dom BA⁻¹ = ran A", r.dom(), a.ran()));
    }
    let witness = if report.verdict {
        let w = build_selection(&r)?;
        witness_checks(&r, &w, &mut report)?;
        Some(w)
    } else {
        None
    };
    Ok(SelectionOutcome { report, witness })
}

/// An operator `C ⊆ R` with `ran C = ran R` exists iff
/// `dim ker R ≥ dim mul R`. Cross-checked against the left criterion for
/// `Δ_{ran R} ⊆ C R⁻¹`.
pub fn operator_part_criterion(r: &LinearRelation) -> Result<DecisionReport> {
    let mut report = DecisionReport::new("c24");
    report.check(Check::at_least(
        "dim ker R ≥ dim mul R",
        r.ker().dim(),
        r.mul().dim(),
    ));
    let via_left = left_criterion(&diagonal(r.ran()), &r.inverse())?.verdict;
    report.cross_check(Check::flag(
        "(i) Δ_{ran R} ⊆ C R⁻¹ solvable agrees",
        via_left == report.verdict,
        format!("left criterion is {via_left}"),
    ));
    Ok(report)
}

/// Builds an operator part of `R`: on a complement `X0` of `ker R` in
/// `dom R` take canonical selections, pair the first `dim mul R` basis
/// vectors of `ker R` with a basis of `mul R`, and send the rest of the
/// kernel basis to 0 so that `dom C = dom R`.
pub fn operator_part(r: &LinearRelation) -> Result<Option<OperatorSolution>> {
    if !operator_part_criterion(r)?.verdict {
        return Ok(None);
    }
    let x0 = r.ker().complement_in(r.dom())?;
    let mut rows = Vec::with_capacity(x0.dim() + r.mul().dim());
    for xa in x0.basis() {
        let ya = r.canonical_image(xa)?.expect("x_α ∈ dom R");
        rows.push(concat(xa, &ya));
    }
    let zero = zero_vector(r.field(), r.cod_dim());
    for (j, k) in r.ker().basis().iter().enumerate() {
        rows.push(concat(k, r.mul().basis().get(j).unwrap_or(&zero)));
    }
    let c = LinearRelation::from_generators(r.field(), r.dom_dim(), r.cod_dim(), rows)?;
    let mut validation = DecisionReport::new("validation");
    validation
        .check(Check::flag("C ⊆ R", c.is_subrelation_of(r)?, ""))
        .check(Check::flag(
            "mul C = {0}",
            c.is_operator(),
            format!("dim mul C {}", c.mul().dim()),
        ))
        .check(Check::equality("ran C = ran R", c.ran(), r.ran()))
        .check(Check::equality("dom C = dom R", c.dom(), r.dom()));
    postcondition(&validation, "operator part")?;
    Ok(Some(OperatorSolution {
        relation: c,
        basis: None,
        validation,
    }))
}
