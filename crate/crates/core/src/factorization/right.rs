use crate::error::{Error, Result};
use crate::relation::LinearRelation;
use crate::report::{Check, DecisionReport};
use crate::subspace::{concat, sub_vectors, zero_vector};

use super::{left_shapes, postcondition, right_shapes, verify_solution, OperatorSolution, Side};

/// `A ⊆ BC` has a relation solution iff `ran A ⊆ ran B`.
pub fn right_relation_criterion(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    right_shapes(a, b)?;
    let mut report = DecisionReport::new("t1");
    report.check(Check::inclusion("ran A ⊆ ran B", a.ran(), b.ran())?);
    let bba = b.compose(&b.inverse().compose(a)?)?;
    let third = a.is_subrelation_of(&bba)?;
    report.cross_check(Check::flag(
        "(iii) A ⊆ BB⁻¹A agrees",
        third == report.verdict,
        format!("A ⊆ BB⁻¹A is {third}"),
    ));
    Ok(report)
}

/// `C = B⁻¹A` when `ran A ⊆ ran B`.
pub fn solve_right_relation(
    a: &LinearRelation,
    b: &LinearRelation,
) -> Result<Option<LinearRelation>> {
    right_shapes(a, b)?;
    if !b.ran().contains(a.ran())? {
        return Ok(None);
    }
    let c = b.inverse().compose(a)?;
    postcondition(
        &verify_solution(Side::Right, a, b, &c, false, false)?,
        "B⁻¹A",
    )?;
    Ok(Some(c))
}

/// `A ⊆ CB` has a relation solution iff `dom A ⊆ dom B`.
pub fn left_relation_criterion(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    left_shapes(a, b)?;
    let mut report = DecisionReport::new("c2");
    report.check(Check::inclusion("dom A ⊆ dom B", a.dom(), b.dom())?);
    let abb = a.compose(&b.inverse())?.compose(b)?;
    let third = a.is_subrelation_of(&abb)?;
    report.cross_check(Check::flag(
        "(iii) A ⊆ AB⁻¹B agrees",
        third == report.verdict,
        format!("A ⊆ AB⁻¹B is {third}"),
    ));
    Ok(report)
}

/// `C = AB⁻¹` when `dom A ⊆ dom B`.
pub fn solve_left_relation(
    a: &LinearRelation,
    b: &LinearRelation,
) -> Result<Option<LinearRelation>> {
    left_shapes(a, b)?;
    if !b.dom().contains(a.dom())? {
        return Ok(None);
    }
    let c = a.compose(&b.inverse())?;
    postcondition(
        &verify_solution(Side::Left, a, b, &c, false, false)?,
        "AB⁻¹",
    )?;
    Ok(Some(c))
}

/// `A = BB⁻¹A` iff `mul B ⊆ ran A ⊆ ran B` and `A⁻¹(mul B) ⊆ ker A`.
pub fn exact_right_check(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    right_shapes(a, b)?;
    let mut report = DecisionReport::new("c3");
    report
        .check(Check::inclusion("mul B ⊆ ran A", b.mul(), a.ran())?)
        .check(Check::inclusion("ran A ⊆ ran B", a.ran(), b.ran())?)
        .check(Check::inclusion(
            "A⁻¹(mul B) ⊆ ker A",
            &a.preimage(b.mul())?,
            a.ker(),
        )?);
    let direct = *a == b.compose(&b.inverse().compose(a)?)?;
    report.cross_check(Check::flag(
        "agrees with direct A = BB⁻¹A",
        direct == report.verdict,
        format!("A = BB⁻¹A is {direct}"),
    ));
    Ok(report)
}

/// `A = AB⁻¹B` iff `ker B ⊆ dom A ⊆ dom B` and `A(ker B) ⊆ mul A`.
pub fn exact_left_check(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    left_shapes(a, b)?;
    let mut report = DecisionReport::new("c4");
    report
        .check(Check::inclusion("ker B ⊆ dom A", b.ker(), a.dom())?)
        .check(Check::inclusion("dom A ⊆ dom B", a.dom(), b.dom())?)
        .check(Check::inclusion(
            "A(ker B) ⊆ mul A",
            &a.image(b.ker())?,
            a.mul(),
        )?);
    let direct = *a == a.compose(&b.inverse())?.compose(b)?;
    report.cross_check(Check::flag(
        "agrees with direct A = AB⁻¹B",
        direct == report.verdict,
        format!("A = AB⁻¹B is {direct}"),
    ));
    Ok(report)
}

/// `A ⊆ BC` has an operator solution iff `ran A ⊆ ran B` and
/// `mul A ⊆ mul B`.
pub fn right_operator_criterion(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    right_shapes(a, b)?;
    let mut report = DecisionReport::new("t5");
    report
        .check(Check::inclusion("ran A ⊆ ran B", a.ran(), b.ran())?)
        .check(Check::inclusion("mul A ⊆ mul B", a.mul(), b.mul())?);
    Ok(report)
}

/// The pointwise form: for `x = 0` and every basis vector `x` of `dom A`
/// there is `y` with `A(x) ⊆ B(y)`.
///
/// For a given `x`, `A(x)` is the coset `a_x + mul A`. If some `y` works
/// then `B(y) = a_x + mul B`, so the canonical preimage of `a_x` is as good
/// as any other choice; the inclusion is then tested on the affine
/// generators `a_x` and `a_x + m` for `m` in a basis of `mul A`.
pub fn right_operator_pointwise(a: &LinearRelation, b: &LinearRelation) -> Result<DecisionReport> {
    right_shapes(a, b)?;
    let mut report = DecisionReport::new("t5(iii)");
    let field = a.field();
    let mut points = vec![zero_vector(field, a.dom_dim())];
    points.extend(a.dom().basis().iter().cloned());
    for (k, x) in points.iter().enumerate() {
        let label = if k == 0 {
            "A(0) ⊆ B(0)".to_string()
        } else {
            format!("∃y: A(x_{k}) ⊆ B(y)")
        };
        let ax = a.canonical_image(x)?.expect("x in dom A");
        let holds = match b.canonical_preimage(&ax)? {
            None => false,
            Some(y) => {
                let y = if k == 0 {
                    zero_vector(field, b.dom_dim())
                } else {
                    y
                };
                let mut ok = b.contains_pair(&y, &ax)?;
                for m in a.mul().basis() {
                    if !ok {
                        break;
                    }
                    let shifted: Vec<_> = ax.iter().zip(m).map(|(s, t)| s + t).collect();
                    ok = b.contains_pair(&y, &shifted)?;
                }
                ok
            }
        };
        report.check(Check::flag(label, holds, format!("x = {}", fmt_vec(x))));
    }
    Ok(report)
}

fn fmt_vec(v: &[crate::field::Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// An operator `C` with `A ⊆ BC`, defined on `dom A`.
///
/// One pass over the RREF basis `x_i` of `dom A`: take the canonical
/// `z_i ∈ A(x_i)`, the canonical `y_i` with `(y_i, z_i) ∈ B`, and extend
/// `x_i ↦ y_i` linearly. In finite dimension this replaces the maximal-chain
/// argument.
pub fn solve_right_operator(
    a: &LinearRelation,
    b: &LinearRelation,
) -> Result<Option<OperatorSolution>> {
    if !right_operator_criterion(a, b)?.verdict {
        return Ok(None);
    }
    let field = a.field();
    let mut pairs = Vec::with_capacity(a.dom().dim());
    for x in a.dom().basis() {
        let z = a.canonical_image(x)?.expect("basis vector lies in dom A");
        let y = b
            .canonical_preimage(&z)?
            .ok_or_else(|| Error::Postcondition("z_i outside ran B".into()))?;
        pairs.push(concat(x, &y));
    }
    let c = LinearRelation::from_generators(field, a.dom_dim(), b.dom_dim(), pairs)?;
    let mut validation = verify_solution(Side::Right, a, b, &c, true, false)?;
    validation.check(Check::equality("dom C = dom A", c.dom(), a.dom()));
    postcondition(&validation, "right operator solution")?;
    Ok(Some(OperatorSolution {
        relation: c,
        basis: None,
        validation,
    }))
}

/// Given a particular operator solution `C0` of `A ⊆ BX`, decides whether
/// the operator `C` is also a solution through the general form
/// `C ⊇ C0|_{dom A} + C1` with `ran C1 ⊆ ker B`.
pub fn is_right_solution_general_form(
    a: &LinearRelation,
    b: &LinearRelation,
    c0: &OperatorSolution,
    c: &LinearRelation,
) -> Result<DecisionReport> {
    right_shapes(a, b)?;
    let c0 = &c0.relation;
    for (name, rel) in [("C0", c0), ("C", c)] {
        if rel.dom_dim() != a.dom_dim() || rel.cod_dim() != b.dom_dim() || rel.field() != a.field()
        {
            return Err(Error::ShapeMismatch(format!(
                "{name} must map K^{} -> K^{}",
                a.dom_dim(),
                b.dom_dim()
            )));
        }
        if !rel.is_operator() {
            return Err(Error::NotAnOperator(name.to_string()));
        }
    }
    let base = verify_solution(Side::Right, a, b, c0, true, false)?;
    if !base.verdict {
        return Err(Error::NotASolution("C0 does not solve A ⊆ BX".into()));
    }

    let mut report = DecisionReport::new("r7");
    let dom_ok = c.dom().contains(a.dom())?;
    report.check(Check::inclusion("dom A ⊆ dom C", a.dom(), c.dom())?);
    if dom_ok {
        let field = a.field();
        let mut diffs = Vec::new();
        for x in a.dom().basis() {
            let cx = c.canonical_image(x)?.expect("x in dom C");
            let c0x = c0.canonical_image(x)?.expect("x in dom C0");
            diffs.push(concat(x, &sub_vectors(&cx, &c0x)));
        }
        let c1 = LinearRelation::from_generators(field, a.dom_dim(), b.dom_dim(), diffs)?;
        report.check(Check::inclusion("ran C1 ⊆ ker B", c1.ran(), b.ker())?);
    } else {
        report.check(Check::flag(
            "ran C1 ⊆ ker B",
            false,
            "C1 undefined: dom A ⊄ dom C",
        ));
    }
    let direct = verify_solution(Side::Right, a, b, c, true, false)?.verdict;
    report.cross_check(Check::flag(
        "agrees with direct A ⊆ BC",
        direct == report.verdict,
        format!("A ⊆ BC is {direct}"),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::subspace::Vector;

    fn v(f: FieldSpec, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    fn rel(f: FieldSpec, n: usize, m: usize, gens: &[&[i64]]) -> LinearRelation {
        LinearRelation::from_generators(f, n, m, gens.iter().map(|g| v(f, g))).unwrap()
    }

    #[test]
    fn right_relation_examples() {
        let f = FieldSpec::gf2();
        let a = rel(f, 2, 2, &[&[1, 0, 1, 1], &[0, 1, 0, 1]]);
        let c = solve_right_relation(&a, &a).unwrap().unwrap();
        assert_eq!(c, a.inverse().compose(&a).unwrap());

        let a = rel(f, 2, 2, &[&[1, 0, 1, 0], &[0, 1, 0, 0]]);
        let b = rel(f, 2, 2, &[&[1, 0, 1, 0], &[0, 0, 0, 1]]);
        let c = solve_right_relation(&a, &b).unwrap().unwrap();
        assert!(a.is_subrelation_of(&b.compose(&c).unwrap()).unwrap());

        let id = LinearRelation::identity(f, 1);
        let zero = LinearRelation::zero(f, 1, 1);
        assert_eq!(solve_right_relation(&id, &zero).unwrap(), None);
        let rep = right_relation_criterion(&id, &zero).unwrap();
        assert!(!rep.verdict && rep.cross_checks_hold());
    }

    #[test]
    fn left_relation_examples() {
        let f = FieldSpec::prime(3).unwrap();
        let a = rel(f, 2, 1, &[&[1, 2, 1], &[0, 1, 2]]);
        let id = LinearRelation::identity(f, 2);
        assert_eq!(solve_left_relation(&a, &id).unwrap().unwrap(), a);

        let a = LinearRelation::identity(f, 2);
        let b = rel(f, 2, 2, &[&[1, 0, 1, 0]]);
        assert_eq!(solve_left_relation(&a, &b).unwrap(), None);
        assert_eq!(
            left_relation_criterion(&a, &b)
                .unwrap()
                .first_failure()
                .unwrap()
                .label,
            "dom A ⊆ dom B"
        );
    }

    #[test]
    fn shape_errors() {
        let f = FieldSpec::gf2();
        let a = LinearRelation::identity(f, 2);
        let b = LinearRelation::identity(f, 3);
        assert!(matches!(
            solve_right_relation(&a, &b),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            exact_left_check(&a, &b),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn exact_right_examples() {
        let f = FieldSpec::gf2();
        // B an operator with ran A ⊆ ran B
        let a = rel(f, 2, 2, &[&[1, 1, 1, 0]]);
        let b = rel(f, 2, 2, &[&[1, 0, 1, 0], &[0, 1, 1, 1]]);
        let rep = exact_right_check(&a, &b).unwrap();
        assert!(rep.verdict && rep.cross_checks_hold());

        let a = rel(f, 2, 2, &[&[1, 0, 1, 0], &[0, 1, 0, 0]]);
        let b = rel(f, 2, 2, &[&[1, 0, 1, 0], &[0, 0, 0, 1]]);
        let rep = exact_right_check(&a, &b).unwrap();
        assert!(!rep.verdict && rep.cross_checks_hold());
        assert_eq!(rep.first_failure().unwrap().label, "mul B ⊆ ran A");

        let id = LinearRelation::identity(f, 2);
        assert!(exact_right_check(&id, &id).unwrap().verdict);
    }

    #[test]
    fn exact_left_examples() {
        let f = FieldSpec::gf2();
        // B⁻¹ an operator: B injective and single-valued inverse
        let a = rel(f, 2, 1, &[&[1, 0, 1]]);
        let b = rel(f, 2, 2, &[&[1, 0, 0, 1], &[0, 1, 1, 1]]);
        let rep = exact_left_check(&a, &b).unwrap();
        assert!(rep.verdict && rep.cross_checks_hold());

        let id = LinearRelation::identity(f, 2);
        let proj = rel(f, 2, 2, &[&[1, 0, 1, 0], &[0, 1, 0, 0]]);
        let rep = exact_left_check(&id, &proj).unwrap();
        assert!(!rep.verdict && rep.cross_checks_hold());
        assert_eq!(rep.first_failure().unwrap().label, "A(ker B) ⊆ mul A");

        assert!(exact_left_check(&id, &id).unwrap().verdict);
    }

    #[test]
    fn right_operator_examples() {
        let f = FieldSpec::gf2();
        let a = rel(f, 2, 2, &[&[1, 0, 1, 1], &[0, 1, 0, 1]]);
        let sol = solve_right_operator(&a, &a).unwrap().unwrap();
        assert!(sol.relation.is_operator());
        assert!(a
            .is_subrelation_of(&a.compose(&sol.relation).unwrap())
            .unwrap());

        // A = {0} × K, B = identity: ranges fine, mul obstruction
        let a = rel(f, 1, 1, &[&[0, 1]]);
        let b = LinearRelation::identity(f, 1);
        assert_eq!(solve_right_operator(&a, &b).unwrap(), None);
        let rep = right_operator_criterion(&a, &b).unwrap();
        assert_eq!(rep.first_failure().unwrap().label, "mul A ⊆ mul B");
        assert!(right_relation_criterion(&a, &b).unwrap().verdict);
        assert!(!right_operator_pointwise(&a, &b).unwrap().verdict);

        // A an operator, B a genuinely multivalued relation
        let q = FieldSpec::Rational;
        let a = rel(q, 1, 2, &[&[1, 2, 3]]);
        let b = rel(q, 2, 2, &[&[1, 0, 1, 0], &[0, 0, 0, 1]]);
        let sol = solve_right_operator(&a, &b).unwrap().unwrap();
        assert!(sol.validation.verdict);
        assert!(right_operator_pointwise(&a, &b).unwrap().verdict);
    }

    #[test]
    fn general_form_examples() {
        let f = FieldSpec::gf2();
        // B with ker B = span{e2}
        let a = rel(f, 1, 1, &[&[1, 1]]);
        let b = rel(f, 2, 1, &[&[1, 0, 1], &[0, 1, 0]]);
        let c0 = solve_right_operator(&a, &b).unwrap().unwrap();
        let rep = is_right_solution_general_form(&a, &b, &c0, &c0.relation).unwrap();
        assert!(rep.verdict && rep.cross_checks_hold());

        // C0 + (x ↦ x e2)
        let c = rel(f, 1, 2, &[&[1, 1, 1]]);
        assert_eq!(c0.relation, rel(f, 1, 2, &[&[1, 1, 0]]));
        let rep = is_right_solution_general_form(&a, &b, &c0, &c).unwrap();
        assert!(rep.verdict && rep.cross_checks_hold());

        // B an operator with trivial kernel: any change breaks it
        let b = LinearRelation::identity(f, 1);
        let c0 = solve_right_operator(&a, &b).unwrap().unwrap();
        let c = LinearRelation::zero(f, 1, 1)
            .sum(&rel(f, 1, 1, &[&[1, 0]]))
            .unwrap();
        let rep = is_right_solution_general_form(&a, &b, &c0, &c).unwrap();
        assert!(!rep.verdict && rep.cross_checks_hold());

        let multi = rel(f, 1, 1, &[&[0, 1]]);
        assert!(matches!(
            is_right_solution_general_form(&a, &b, &c0, &multi),
            Err(Error::NotAnOperator(_))
        ));
    }
}
