use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::relation::LinearRelation;
use crate::report::{Check, DecisionReport};
use crate::subspace::{add_vectors, concat, zero_vector, Subspace, Vector};

use super::{left_shapes, postcondition, verify_solution, OperatorSolution, Side, SolutionBasis};

/// `A(dom A ∩ ker B)`, the kernel of `BA⁻¹` once `dom A ⊆ dom B`.
fn a_on_ker_b(a: &LinearRelation, b: &LinearRelation) -> Result<Subspace> {
    a.image(&a.dom().intersect(b.ker())?)
}

/// `A ⊆ CB` has an operator solution iff `dom A ⊆ dom B` and
/// `dim mul B ≥ dim A(dom A ∩ ker B)`.
pub fn left_criterion(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    left_shapes(a, b)?;
    let mut report = DecisionReport::new("t21");
    report
        .check(Check::inclusion("dom A ⊆ dom B", a.dom(), b.dom())?)
        .check(Check::at_least(
            "dim mul B ≥ dim A(dom A ∩ ker B)",
            b.mul().dim(),
            a_on_ker_b(a, b)?.dim(),
        ));
    Ok(report)
}

/// `A ⊆ CB` has an injective operator solution iff `dom A ⊆ dom B`,
/// `ker A ⊆ ker B` and `dim A(dom A ∩ ker B) ≤ dim B(ker A)`.
pub fn left_injective_criterion(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    left_shapes(a, b)?;
    let mut report = DecisionReport::new("c20");
    report
        .check(Check::inclusion("dom A ⊆ dom B", a.dom(), b.dom())?)
        .check(Check::inclusion("ker A ⊆ ker B", a.ker(), b.ker())?)
        .check(Check::at_most(
            "dim A(dom A ∩ ker B) ≤ dim B(ker A)",
            a_on_ker_b(a, b)?.dim(),
            b.image(a.ker())?.dim(),
        ));
    Ok(report)
}

/// The operator `C(Σ λ_α y_α + Σ λ'_β y'_β) = Σ λ_α z_α` on
/// `Sp{y} ⊕ Sp{y'}`. Fails unless `y` is independent and the two spans meet
/// only in zero, which is exactly what makes the formula well defined.
pub fn operator_from_family(
    field: FieldSpec,
    y_dim: usize,
    z_dim: usize,
    z: &[Vector],
    y: &[Vector],
    y_prime: &[Vector],
) -> Result<LinearRelation> {
    if z.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            found: y.len(),
        });
    }
    if !Subspace::independent(field, y_dim, y)? {
        return Err(Error::NotASolution(
            "the family y is linearly dependent".into(),
        ));
    }
    let span_y = Subspace::canonicalize(field, y_dim, y.iter().cloned())?;
    let span_yp = Subspace::canonicalize(field, y_dim, y_prime.iter().cloned())?;
    if !span_y.intersect(&span_yp)?.is_zero() {
        return Err(Error::NotASolution("Sp{y} ∩ Sp{y'} ≠ {0}".into()));
    }
    let zero = zero_vector(field, z_dim);
    let rows = y
        .iter()
        .zip(z)
        .map(|(yy, zz)| concat(yy, zz))
        .chain(y_prime.iter().map(|yp| concat(yp, &zero)));
    LinearRelation::from_generators(field, y_dim, z_dim, rows)
}

/// Checks that a set of families satisfies the hypotheses of the
/// basis-family characterization: `z` a basis of `ran A`, `y` independent
/// with `y_α ∈ BA⁻¹(z_α)`, `x'` a basis of `ker A`, `y'_β ∈ B(x'_β)`, and
/// `Sp{y} ∩ Sp{y'} = {0}`.
pub fn check_solution_families(
    a: &LinearRelation,
    b: &LinearRelation,
    fam: &SolutionBasis,
) -> Result<DecisionReport> {
    left_shapes(a, b)?;
    let field = a.field();
    let (p, m) = (a.cod_dim(), b.cod_dim());
    let ba_inv = b.compose(&a.inverse())?;

    let z_span = Subspace::canonicalize(field, p, fam.z.iter().cloned())?;
    let z_basis = fam.z.len() == z_span.dim() && z_span == *a.ran();
    let y_ok = fam.y.len() == fam.z.len() && Subspace::independent(field, m, &fam.y)?;
    let mut y_in_fiber = fam.y.len() == fam.z.len();
    for (z, y) in fam.z.iter().zip(&fam.y) {
        y_in_fiber &= ba_inv.contains_pair(z, y)?;
    }
    let n = a.dom_dim();
    let xp_span = Subspace::canonicalize(field, n, fam.x_prime.iter().cloned())?;
    let xp_basis = fam.x_prime.len() == xp_span.dim() && xp_span == *a.ker();
    let mut yp_ok = fam.y_prime.len() == fam.x_prime.len();
    for (x, y) in fam.x_prime.iter().zip(&fam.y_prime) {
        yp_ok &= b.contains_pair(x, y)?;
    }
    let span_y = Subspace::canonicalize(field, m, fam.y.iter().cloned())?;
    let span_yp = Subspace::canonicalize(field, m, fam.y_prime.iter().cloned())?;

    let mut report = DecisionReport::new("t9(ii)");
    report
        .check(Check::flag(
            "{z_α} is a basis of ran A",
            z_basis,
            format!("{} vectors, dim ran A {}", fam.z.len(), a.ran().dim()),
        ))
        .check(Check::flag(
            "{y_α} is linearly independent",
            y_ok,
            format!("{} vectors", fam.y.len()),
        ))
        .check(Check::flag("y_α ∈ BA⁻¹(z_α)", y_in_fiber, ""))
        .check(Check::flag(
            "{x'_β} is a basis of ker A",
            xp_basis,
            format!("{} vectors, dim ker A {}", fam.x_prime.len(), a.ker().dim()),
        ))
        .check(Check::flag("y'_β ∈ B(x'_β)", yp_ok, ""))
        .check(Check::flag(
            "Sp{y} ∩ Sp{y'} = {0}",
            span_y.intersect(&span_yp)?.is_zero(),
            format!("dims {} and {}", span_y.dim(), span_yp.dim()),
        ));
    Ok(report)
}

/// Builds the families for `A ⊆ CB` and the operator they define.
///
/// * `z`: basis of `A(dom A ∩ ker B)` (block `I0`) extended to `ran A`.
/// * `y` on `I0`: the first RREF basis vectors of `mul B`; off `I0`: the
///   canonical `y_α ∈ B(x_α)` for the canonical `x_α ∈ A⁻¹(z_α)`.
/// * `x'`: basis of `ker A ∩ ker B` (block `J0`) extended to `ker A`.
/// * `y'`: zero on `J0`, canonical `y'_β ∈ B(x'_β)` elsewhere.
fn build_left_families(a: &LinearRelation, b: &LinearRelation) -> Result<SolutionBasis> {
    let field = a.field();
    let kb = b.ker();
    let on_ker_b = a.restrict(kb)?;
    let a_w = on_ker_b.ran().clone();
    let z_rest = a_w.complement_in(a.ran())?;
    let split_i0 = a_w.dim();
    let z: Vec<Vector> = a_w.basis().iter().chain(z_rest.basis()).cloned().collect();

    let mut x = Vec::with_capacity(z.len());
    let mut y = Vec::with_capacity(z.len());
    for (k, za) in z.iter().enumerate() {
        if k < split_i0 {
            let xa = on_ker_b
                .canonical_preimage(za)?
                .expect("z_α ∈ A(dom A ∩ ker B)");
            let ya =
                b.mul().basis().get(k).cloned().ok_or_else(|| {
                    Error::Postcondition("mul B too small for the I0 block".into())
                })?;
            x.push(xa);
            y.push(ya);
        } else {
            let xa = a.canonical_preimage(za)?.expect("z_α ∈ ran A");
            let ya = b
                .canonical_image(&xa)?
                .ok_or_else(|| Error::Postcondition("x_α outside dom B".into()))?;
            x.push(xa);
            y.push(ya);
        }
    }

    let kab = a.ker().intersect(kb)?;
    let xp_rest = kab.complement_in(a.ker())?;
    let split_j0 = kab.dim();
    let x_prime: Vec<Vector> = kab.basis().iter().chain(xp_rest.basis()).cloned().collect();
    let mut y_prime = Vec::with_capacity(x_prime.len());
    for (k, xb) in x_prime.iter().enumerate() {
        if k < split_j0 {
            y_prime.push(zero_vector(field, b.cod_dim()));
        } else {
            y_prime.push(
                b.canonical_image(xb)?
                    .ok_or_else(|| Error::Postcondition("x'_β outside dom B".into()))?,
            );
        }
    }
    Ok(SolutionBasis {
        z,
        x,
        y,
        x_prime,
        y_prime,
        split_i0,
        split_j0,
    })
}

fn left_solution_from_families(
    a: &LinearRelation,
    b: &LinearRelation,
    fam: SolutionBasis,
    injective: bool,
) -> Result<OperatorSolution> {
    let field = a.field();
    let (m, p) = (b.cod_dim(), a.cod_dim());
    let c = operator_from_family(field, m, p, &fam.z, &fam.y, &fam.y_prime)?;

    let mut validation = verify_solution(Side::Left, a, b, &c, true, injective)?;
    let families = check_solution_families(a, b, &fam)?;
    validation.check(Check::flag(
        "families satisfy the basis criterion",
        families.verdict,
        families
            .first_failure()
            .map(|c| c.label.clone())
            .unwrap_or_default(),
    ));
    let span_y = Subspace::canonicalize(field, m, fam.y.iter().cloned())?;
    let span_yp = Subspace::canonicalize(field, m, fam.y_prime.iter().cloned())?;
    let dom_expected = span_y.sum(&span_yp)?;
    validation
        .check(Check::equality(
            "dom C = Sp{y} ⊕ Sp{y'}",
            c.dom(),
            &dom_expected,
        ))
        .check(Check::flag(
            "the sum Sp{y} + Sp{y'} is direct",
            dom_expected.dim() == span_y.dim() + span_yp.dim(),
            format!(
                "{} = {} + {}",
                dom_expected.dim(),
                span_y.dim(),
                span_yp.dim()
            ),
        ))
        .check(Check::equality("ran C = ran A", c.ran(), a.ran()))
        .check(Check::equality("ker C = Sp{y'}", c.ker(), &span_yp));
    for k in 0..fam.split_j0 {
        validation.check(Check::flag(
            format!("y'_{k} = 0 on ker A ∩ ker B"),
            fam.y_prime[k].iter().all(|s| s.is_zero()),
            "",
        ));
    }
    postcondition(&validation, "left operator solution")?;
    Ok(OperatorSolution {
        relation: c,
        basis: Some(fam),
        validation,
    })
}

/// An operator `C` with `A ⊆ CB`, or `None` when the dimension criterion
/// fails.
pub fn solve_left_operator(
    a: &LinearRelation,
    b: &LinearRelation,
) -> Result<Option<OperatorSolution>> {
    if !left_criterion(a, b)?.verdict {
        return Ok(None);
    }
    let fam = build_left_families(a, b)?;
    left_solution_from_families(a, b, fam, false).map(Some)
}

/// An injective operator `C` with `A ⊆ CB`. With `ker A ⊆ ker B` every
/// `x'_β` lies in `ker B`, so all `y'_β` vanish and `ker C = {0}`.
pub fn solve_left_operator_injective(
    a: &LinearRelation,
    b: &LinearRelation,
) -> Result<Option<OperatorSolution>> {
    if !left_injective_criterion(a, b)?.verdict {
        return Ok(None);
    }
    let fam = build_left_families(a, b)?;
    if fam.split_j0 != fam.x_prime.len() {
        return Err(Error::Postcondition(
            "ker A ⊄ ker B after a passing criterion".into(),
        ));
    }
    left_solution_from_families(a, b, fam, true).map(Some)
}

/// A subspace `X0 ⊆ dom A` with `dom A = ker A ⊕ X0` and `X0 ∩ ker B = {0}`,
/// or `None` when no such complement exists.
///
/// With `W = dom A ∩ ker B` such an `X0` exists iff `dim W ≤ dim ker A`.
/// It is assembled from a complement `P` of `ker A + W` in `dom A` and the
/// vectors `w_i + k_i`, where `w_i` runs over a complement of `W ∩ ker A` in
/// `W` and the `k_i ∈ ker A` are independent modulo `W ∩ ker A`.
fn transversal_complement(a: &LinearRelation, b: &LinearRelation) -> Result<Option<Subspace>> {
    let dom = a.dom();
    let ka = a.ker();
    let w = dom.intersect(b.ker())?;
    if w.dim() > ka.dim() {
        return Ok(None);
    }
    let meet = w.intersect(ka)?;
    let p = ka.sum(&w)?.complement_in(dom)?;
    let ws = meet.complement_in(&w)?;
    let ks = meet.complement_in(ka)?;
    let mut rows: Vec<Vector> = p.basis().to_vec();
    for (wi, ki) in ws.basis().iter().zip(ks.basis()) {
        rows.push(add_vectors(wi, ki));
    }
    let x0 = Subspace::canonicalize(a.field(), a.dom_dim(), rows)?;
    debug_assert_eq!(x0.dim() + ka.dim(), dom.dim());
    debug_assert!(x0.intersect(ka)?.is_zero());
    debug_assert!(x0.intersect(b.ker())?.is_zero());
    Ok(Some(x0))
}

/// Sufficient condition for an operator `A`: `dom A ⊆ dom B` and
/// `ker B ∩ dom A ⊆ ker A` give an operator `C` with `A ⊆ CB`.
///
/// When `B` is an operator as well, the complement form is evaluated too:
/// given `dom A ⊆ dom B`, a solution exists iff some `X0` with
/// `dom A = ker A ⊕ X0`, `X0 ∩ ker B = {0}` has `B(ker A) ∩ B(X0) = {0}` (and then
/// every such `X0` does). Both are cross-validated against the solver.
pub fn operators_left_sufficient(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    left_shapes(a, b)?;
    if !a.is_operator() {
        return Err(Error::NotAnOperator("A".into()));
    }
    let mut report = DecisionReport::new("c22");
    report
        .check(Check::inclusion("dom A ⊆ dom B", a.dom(), b.dom())?)
        .check(Check::inclusion(
            "ker B ∩ dom A ⊆ ker A",
            &b.ker().intersect(a.dom())?,
            a.ker(),
        )?);
    let solved = solve_left_operator(a, b)?.is_some();
    if report.verdict {
        report.cross_check(Check::flag("solver finds a solution", solved, ""));
    }
    if b.is_operator() {
        let (c17, detail) = match transversal_complement(a, b)? {
            None => (
                false,
                "no admissible X0: dim(dom A ∩ ker B) > dim ker A".to_string(),
            ),
            Some(x0) => {
                // X0 must sit in dom B and ker A must too, since dom CB ⊆ dom B
                let dom_a_in_dom_b = b.dom().contains(a.dom())?;
                let meet = b.image(a.ker())?.intersect(&b.image(&x0)?)?;
                (
                    dom_a_in_dom_b && meet.is_zero(),
                    format!(
                        "dim X0 {}, dom A ⊆ dom B {}, dim B(ker A) ∩ B(X0) {}",
                        x0.dim(),
                        dom_a_in_dom_b,
                        meet.dim()
                    ),
                )
            }
        };
        report.cross_check(Check::flag(
            format!("c17 complement criterion ({c17}) agrees with solver"),
            c17 == solved,
            detail,
        ));
    }
    Ok(report)
}
