//! Exhaustive ground truth over small prime fields.
//!
//! Nothing here calls the factorization solvers or [`LinearRelation::compose`]:
//! products are decided by chaining explicit element sets, so the verdicts
//! are an independent check on the algebra.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::relation::LinearRelation;
use crate::subspace::{axpy, Subspace, Vector};

type Key = Vec<u32>;

/// Caps on how much work an enumeration may do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub field: FieldSpec,
    /// Cap on `|K|^(n+m)` for any space whose elements are listed.
    pub max_total_points: u64,
    /// Cap on the number of candidate maps or subspaces.
    pub max_candidates: u64,
}

impl EnumerationBudget {
    pub fn new(field: FieldSpec) -> Result<EnumerationBudget> {
        if field.order().is_none() {
            return Err(Error::BudgetExceeded(format!(
                "cannot enumerate over {field}"
            )));
        }
        Ok(EnumerationBudget {
            field,
            max_total_points: 4096,
            max_candidates: 1_000_000,
        })
    }

    fn p(&self) -> u64 {
        self.field.order().expect("prime field")
    }

    fn points(&self, n: usize) -> Result<u64> {
        let total = checked_pow(self.p(), n);
        match total {
            Some(t) if t <= self.max_total_points => Ok(t),
            _ => Err(Error::BudgetExceeded(format!(
                "{}^{} points exceeds {}",
                self.p(),
                n,
                self.max_total_points
            ))),
        }
    }

    fn candidates(&self, count: Option<u64>, what: &str) -> Result<()> {
        match count {
            Some(c) if c <= self.max_candidates => Ok(()),
            _ => Err(Error::BudgetExceeded(format!(
                "too many {what} (cap {})",
                self.max_candidates
            ))),
        }
    }

    fn require_field(&self, field: FieldSpec) -> Result<()> {
        if field != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: field.to_string(),
            });
        }
        Ok(())
    }
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Number of `k`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(u128::from(q).checked_pow((n - i) as u32)? - 1)?;
        den = den.checked_mul(u128::from(q).checked_pow((i + 1) as u32)? - 1)?;
    }
    u64::try_from(num / den).ok()
}

/// Number of subspaces of `GF(q)^n` whose RREF pivots all lie below `limit`.
fn count_shapes(n: usize, limit: usize, q: u64) -> Option<u64> {
    let mut total: u64 = 0;
    for pivots in pivot_sets(n, limit) {
        total = total.checked_add(checked_pow(q, free_count(n, &pivots))?)?;
    }
    Some(total)
}

fn pivot_sets(n: usize, limit: usize) -> Vec<Vec<usize>> {
    let limit = limit.min(n);
    let mut out = Vec::with_capacity(1 << limit);
    for mask in 0u64..(1u64 << limit) {
        out.push((0..limit).filter(|&c| mask >> c & 1 == 1).collect());
    }
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (row, &pc) in pivots.iter().enumerate() {
        for col in pc + 1..n {
            if !pivots.contains(&col) {
                out.push((row, col));
            }
        }
    }
    out
}

fn free_count(n: usize, pivots: &[usize]) -> usize {
    free_positions(n, pivots).len()
}

/// Every subspace of `K^n` with pivots below `limit`, each exactly once.
fn shapes(field: FieldSpec, n: usize, limit: usize) -> impl Iterator<Item = Subspace> {
    let p = field.order().expect("prime field");
    pivot_sets(n, limit).into_iter().flat_map(move |pivots| {
        let free = free_positions(n, &pivots);
        let count = checked_pow(p, free.len()).expect("budget checked");
        (0..count).map(move |mut index| {
            let mut rows: Vec<Vector> = pivots
                .iter()
                .map(|&pc| {
                    let mut row = vec![field.zero(); n];
                    row[pc] = field.one();
                    row
                })
                .collect();
            for &(r, c) in &free {
                rows[r][c] = field.residue(index % p);
                index /= p;
            }
            Subspace::from_rref_unchecked(field, n, rows)
        })
    })
}

/// All subspaces of `K^n`, grouped by dimension.
pub fn enumerate_subspaces(
    n: usize,
    budget: &EnumerationBudget,
) -> Result<impl Iterator<Item = Subspace>> {
    budget.candidates(count_shapes(n, n, budget.p()), "subspaces")?;
    Ok(shapes(budget.field, n, n))
}

/// Every total linear map `K^dom → K^cod`, as a graph, exactly once.
pub fn enumerate_operators(
    dom_dim: usize,
    cod_dim: usize,
    budget: &EnumerationBudget,
) -> Result<impl Iterator<Item = LinearRelation>> {
    let p = budget.p();
    let count = checked_pow(p, dom_dim * cod_dim);
    budget.candidates(count, "operators")?;
    let field = budget.field;
    Ok((0..count.expect("checked")).map(move |mut index| {
        let images: Vec<Vector> = (0..dom_dim)
            .map(|_| {
                (0..cod_dim)
                    .map(|_| {
                        let s = field.residue(index % p);
                        index /= p;
                        s
                    })
                    .collect()
            })
            .collect();
        LinearRelation::operator(field, dom_dim, cod_dim, &images).expect("shapes agree")
    }))
}

/// Graphs of operators with any domain: subspaces of `K^(n+m)` whose pivots
/// all sit in the first `n` columns.
pub fn enumerate_operator_graphs(
    dom_dim: usize,
    cod_dim: usize,
    budget: &EnumerationBudget,
) -> Result<impl Iterator<Item = LinearRelation>> {
    let n = dom_dim + cod_dim;
    budget.candidates(count_shapes(n, dom_dim, budget.p()), "operator graphs")?;
    Ok(shapes(budget.field, n, dom_dim)
        .map(move |g| LinearRelation::new(dom_dim, cod_dim, g).expect("shapes agree")))
}

fn key(v: &[crate::field::Scalar]) -> Key {
    v.iter()
        .map(|s| s.residue().expect("prime field"))
        .collect()
}

/// Every element of `u`, listed by brute force over coefficient tuples.
pub fn elements(u: &Subspace, budget: &EnumerationBudget) -> Result<Vec<Vector>> {
    budget.require_field(u.field())?;
    let p = budget.p();
    let count = budget.points(u.dim())?;
    let field = u.field();
    let mut out = Vec::with_capacity(count as usize);
    for mut index in 0..count {
        let mut v = vec![field.zero(); u.ambient_dim()];
        for b in u.basis() {
            let c = field.residue(index % p);
            index /= p;
            axpy(&mut v, &c, b);
        }
        out.push(v);
    }
    Ok(out)
}

fn element_keys(u: &Subspace, budget: &EnumerationBudget) -> Result<HashSet<Key>> {
    Ok(elements(u, budget)?.iter().map(|v| key(v)).collect())
}

/// Graph elements of `r` indexed by their first coordinate.
fn fibers(r: &LinearRelation, budget: &EnumerationBudget) -> Result<HashMap<Key, Vec<Key>>> {
    let n = r.dom_dim();
    let mut map: HashMap<Key, Vec<Key>> = HashMap::new();
    for e in elements(r.graph(), budget)? {
        map.entry(key(&e[..n])).or_default().push(key(&e[n..]));
    }
    Ok(map)
}

/// `S ∘ R` by chaining element sets; the span of every `(x, z)` with
/// `(x, y) ∈ R` and `(y, z) ∈ S`.
pub fn oracle_compose(
    s: &LinearRelation,
    r: &LinearRelation,
    budget: &EnumerationBudget,
) -> Result<LinearRelation> {
    if r.cod_dim() != s.dom_dim() {
        return Err(Error::ShapeMismatch(format!(
            "cannot chain K^{} -> K^{} into K^{} -> K^{}",
            r.dom_dim(),
            r.cod_dim(),
            s.dom_dim(),
            s.cod_dim()
        )));
    }
    budget.require_field(r.field())?;
    let s_fib = fibers(s, budget)?;
    let n = r.dom_dim();
    let mut gens = Vec::new();
    for e in elements(r.graph(), budget)? {
        if let Some(zs) = s_fib.get(&key(&e[n..])) {
            for z in zs {
                let mut pair = e[..n].to_vec();
                pair.extend(z.iter().map(|&c| budget.field.residue(u64::from(c))));
                gens.push(pair);
            }
        }
    }
    LinearRelation::from_generators(r.field(), n, s.cod_dim(), gens)
}

/// Whether every generator of `a` chains through `first` then `second`.
/// Checking generators is enough because the product is a subspace.
fn chained_contains(
    a: &LinearRelation,
    first: &LinearRelation,
    second: &HashSet<Key>,
    budget: &EnumerationBudget,
) -> Result<bool> {
    let n = a.dom_dim();
    let fib = fibers(first, budget)?;
    for g in a.graph().basis() {
        let z = key(&g[n..]);
        let found = fib.get(&key(&g[..n])).is_some_and(|ys| {
            ys.iter().any(|y| {
                let mut yz = y.clone();
                yz.extend_from_slice(&z);
                second.contains(&yz)
            })
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The existence questions the oracle can settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    /// some relation `C` with `A ⊆ BC`
    RightRelation,
    /// some operator `C` with `A ⊆ BC`
    RightOperator,
    /// some operator `C` with `A ⊆ CB`
    LeftOperator,
    /// some injective operator `C` with `A ⊆ CB`
    LeftInjectiveOperator,
    /// some operator `C ⊆ R` with `ran C = ran R`; `B` is ignored
    OperatorPart,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::RightRelation,
        Problem::RightOperator,
        Problem::LeftOperator,
        Problem::LeftInjectiveOperator,
        Problem::OperatorPart,
    ];
}

/// First candidate (in enumeration order) solving `problem`, if any.
/// For [`Problem::OperatorPart`] the relation is `a` and `b` is unused.
pub fn oracle_witness(
    problem: Problem,
    a: &LinearRelation,
    b: &LinearRelation,
    budget: &EnumerationBudget,
) -> Result<Option<LinearRelation>> {
    budget.require_field(a.field())?;
    match problem {
        Problem::RightRelation | Problem::RightOperator => {
            budget.require_field(b.field())?;
            if a.cod_dim() != b.cod_dim() {
                return Err(Error::ShapeMismatch(
                    "A and B must share the codomain".into(),
                ));
            }
            let (n, m) = (a.dom_dim(), b.dom_dim());
            budget.points(n + m)?;
            budget.points(b.dom_dim() + b.cod_dim())?;
            let b_keys = element_keys(b.graph(), budget)?;
            let test = |c: &LinearRelation| chained_contains(a, c, &b_keys, budget);
            if problem == Problem::RightRelation {
                let candidates = enumerate_subspaces(n + m, budget)?
                    .map(|g| LinearRelation::new(n, m, g).expect("shape"));
                first_match(candidates, test)
            } else {
                first_match(enumerate_operator_graphs(n, m, budget)?, test)
            }
        }
        Problem::LeftOperator | Problem::LeftInjectiveOperator => {
            budget.require_field(b.field())?;
            if a.dom_dim() != b.dom_dim() {
                return Err(Error::ShapeMismatch("A and B must share the domain".into()));
            }
            let (n, m) = (b.cod_dim(), a.cod_dim());
            budget.points(n + m)?;
            budget.points(b.dom_dim() + b.cod_dim())?;
            let injective = problem == Problem::LeftInjectiveOperator;
            first_match(
                enumerate_operator_graphs(n, m, budget)?,
                |c: &LinearRelation| {
                    if injective && !c.is_injective() {
                        return Ok(false);
                    }
                    let c_keys = element_keys(c.graph(), budget)?;
                    chained_contains(a, b, &c_keys, budget)
                },
            )
        }
        Problem::OperatorPart => {
            let (n, m) = (a.dom_dim(), a.cod_dim());
            budget.points(n + m)?;
            let r_keys = element_keys(a.graph(), budget)?;
            let ran_keys = element_keys(a.ran(), budget)?;
            first_match(
                enumerate_operator_graphs(n, m, budget)?,
                |c: &LinearRelation| {
                    let elems = elements(c.graph(), budget)?;
                    if !elems.iter().all(|e| r_keys.contains(&key(e))) {
                        return Ok(false);
                    }
                    let ran: HashSet<Key> = elems.iter().map(|e| key(&e[n..])).collect();
                    Ok(ran == ran_keys)
                },
            )
        }
    }
}

/// Whether some candidate solves `problem`.
pub fn oracle_exists(
    problem: Problem,
    a: &LinearRelation,
    b: &LinearRelation,
    budget: &EnumerationBudget,
) -> Result<bool> {
    Ok(oracle_witness(problem, a, b, budget)?.is_some())
}

fn first_match<I, F>(candidates: I, mut test: F) -> Result<Option<LinearRelation>>
where
    I: Iterator<Item = LinearRelation>,
    F: FnMut(&LinearRelation) -> Result<bool>,
{
    for c in candidates {
        if test(&c)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
