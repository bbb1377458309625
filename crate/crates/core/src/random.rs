//! Seeded random instances.
//!
//! Over GF(p) a subspace of a given dimension is drawn uniformly: random
//! `k × n` matrices are rejected until one has rank `k`, and every subspace
//! has the same number of such bases. Over ℚ the generator entries come from
//! `{-2, …, 2}` and the span is canonicalized, so the dimension may drop.
//!
//! Pairs are "planted" half of the time: `A` is cut out of a product that
//! already contains a solution, so both verdicts show up often enough to
//! exercise the criteria.

use rand::Rng;

use crate::field::FieldSpec;
use crate::relation::LinearRelation;
use crate::subspace::{axpy, concat, Subspace, Vector};

fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> crate::field::Scalar {
    match field.order() {
        Some(p) => field.residue(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-2..=2)),
    }
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, n: usize) -> Vector {
    (0..n).map(|_| random_scalar(rng, field)).collect()
}

/// A subspace of `K^n` of dimension `dim` (uniform over GF(p)); over ℚ the
/// span of `dim` random generators.
pub fn random_subspace_of_dim<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    n: usize,
    dim: usize,
) -> Subspace {
    let dim = dim.min(n);
    loop {
        let rows: Vec<Vector> = (0..dim).map(|_| random_vector(rng, field, n)).collect();
        let u = Subspace::canonicalize(field, n, rows).expect("well-formed rows");
        if u.dim() == dim || !field.is_finite() {
            return u;
        }
    }
}

/// Dimension uniform in `0..=n`, then a random subspace of that dimension.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, n: usize) -> Subspace {
    let dim = rng.gen_range(0..=n);
    random_subspace_of_dim(rng, field, n, dim)
}

/// A relation `K^n → K^m` whose graph is [`random_subspace`] of `K^(n+m)`.
pub fn random_relation<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    n: usize,
    m: usize,
) -> LinearRelation {
    LinearRelation::new(n, m, random_subspace(rng, field, n + m)).expect("shapes agree")
}

/// A random total operator `K^n → K^m`.
pub fn random_operator<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    n: usize,
    m: usize,
) -> LinearRelation {
    let images: Vec<Vector> = (0..n).map(|_| random_vector(rng, field, m)).collect();
    LinearRelation::operator(field, n, m, &images).expect("shapes agree")
}

/// A random subrelation of `r`: random combinations of its graph basis.
pub fn random_subrelation<R: Rng + ?Sized>(rng: &mut R, r: &LinearRelation) -> LinearRelation {
    let field = r.field();
    let basis = r.graph().basis();
    let k = rng.gen_range(0..=basis.len());
    let total = r.dom_dim() + r.cod_dim();
    let gens: Vec<Vector> = (0..k)
        .map(|_| {
            let mut v = vec![field.zero(); total];
            for b in basis {
                axpy(&mut v, &random_scalar(rng, field), b);
            }
            v
        })
        .collect();
    LinearRelation::from_generators(field, r.dom_dim(), r.cod_dim(), gens).expect("shapes agree")
}

fn dim<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> usize {
    rng.gen_range(0..=max_dim)
}

/// `(A, B)` with `A ⊆ X×Z`, `B ⊆ Y×Z`, every space of dimension at most
/// `max_dim`. Planted pairs take `A ⊆ BC` for a random operator `C`.
pub fn random_right_pair<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    max_dim: usize,
) -> (LinearRelation, LinearRelation) {
    let (x, y, z) = (dim(rng, max_dim), dim(rng, max_dim), dim(rng, max_dim));
    let b = random_relation(rng, field, y, z);
    let a = if rng.gen_bool(0.5) {
        let c = random_operator(rng, field, x, y);
        random_subrelation(rng, &b.compose(&c).expect("composable"))
    } else {
        random_relation(rng, field, x, z)
    };
    (a, b)
}

/// `(A, B)` with `A ⊆ X×Z`, `B ⊆ X×Y`. Planted pairs take `A ⊆ CB` for a
/// random operator `C`.
pub fn random_left_pair<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    max_dim: usize,
) -> (LinearRelation, LinearRelation) {
    let (x, y, z) = (dim(rng, max_dim), dim(rng, max_dim), dim(rng, max_dim));
    let b = random_relation(rng, field, x, y);
    let a = if rng.gen_bool(0.5) {
        let c = random_operator(rng, field, y, z);
        random_subrelation(rng, &c.compose(&b).expect("composable"))
    } else {
        random_relation(rng, field, x, z)
    };
    (a, b)
}

/// A relation `K^n → K^m` with `n, m ≤ max_dim`. Half of the draws are
/// built from independent kernel and multivalued parts plus an operator,
/// which spreads `dim ker - dim mul` more evenly than a raw graph.
pub fn random_single<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    max_dim: usize,
) -> LinearRelation {
    let (n, m) = (dim(rng, max_dim), dim(rng, max_dim));
    if rng.gen_bool(0.5) {
        return random_relation(rng, field, n, m);
    }
    let ker = random_subspace(rng, field, n);
    let mul = random_subspace(rng, field, m);
    let full = random_operator(rng, field, n, m);
    let op = random_subrelation(rng, &full);
    let zero_n = vec![field.zero(); n];
    let zero_m = vec![field.zero(); m];
    let gens = ker
        .basis()
        .iter()
        .map(|k| concat(k, &zero_m))
        .chain(mul.basis().iter().map(|y| concat(&zero_n, y)))
        .chain(op.graph().basis().iter().cloned());
    LinearRelation::from_generators(field, n, m, gens).expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_same_instances() {
        let f = FieldSpec::prime(3).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert_eq!(
                random_right_pair(&mut r1, f, 3),
                random_right_pair(&mut r2, f, 3)
            );
        }
    }

    #[test]
    fn exact_dimension_over_prime_fields() {
        let f = FieldSpec::gf2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..5 {
            for k in 0..=n {
                assert_eq!(random_subspace_of_dim(&mut rng, f, n, k).dim(), k);
            }
        }
    }

    #[test]
    fn roughly_uniform_lines_in_gf2_squared() {
        // three lines in GF(2)^2, each should get about a third
        let f = FieldSpec::gf2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..3000 {
            *counts
                .entry(random_subspace_of_dim(&mut rng, f, 2, 1))
                .or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        assert!(
            counts.values().all(|&c| (850..1150).contains(&c)),
            "{counts:?}"
        );
    }

    #[test]
    fn planted_pairs_are_solvable() {
        let f = FieldSpec::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut solvable = 0;
        for _ in 0..200 {
            let (a, b) = random_right_pair(&mut rng, f, 3);
            assert_eq!(a.cod_dim(), b.cod_dim());
            if b.ran().contains(a.ran()).unwrap() {
                solvable += 1;
            }
            let (a, b) = random_left_pair(&mut rng, f, 3);
            assert_eq!(a.dom_dim(), b.dom_dim());
        }
        assert!(solvable > 60 && solvable < 200, "{solvable}");
    }

    #[test]
    fn rationals_stay_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = random_relation(&mut rng, FieldSpec::Rational, 3, 3);
        assert!(r.graph().dim() <= 6);
    }
}
