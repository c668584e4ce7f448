//! The three higher-order differential operator towers (nested commutators,
//! the tensor-algebra form, and the recursive form), the unshuffle-sum closed
//! form, operator order computation, and the filtration/composition calculus.
//!
//! Exhaustive checks over basis tuples share prefix computations: the
//! commutator and tensor towers walk the tuple tree depth-first, the
//! recursive tower is built level by level, and the unshuffle sum uses
//! bitmask-indexed subset products.

use crate::algebra::{left_mult, AlgebraSpec};
use crate::basis::Vector;
use crate::error::{Error, Result};
use crate::multilinear::{graded_commutator, MultilinearMap};
use crate::perm::{koszul_sign, unshuffles};
use crate::report::{Check, Report, Witness};
use crate::scalar::{sign_pow, Scalar};
use std::collections::BTreeMap;

fn require_unital(alg: &AlgebraSpec) -> Result<()> {
    if !alg.is_unital() {
        return Err(Error::MissingUnit);
    }
    Ok(())
}

fn arg_degree(a: &Vector) -> Result<i64> {
    Ok(a.homogeneous_degree()?.unwrap_or(0))
}

fn unrank(mut rank: usize, dim: usize, len: usize) -> Vec<usize> {
    let mut tuple = vec![0usize; len];
    for pos in (0..len).rev() {
        tuple[pos] = rank % dim;
        rank /= dim;
    }
    tuple
}

fn labels_of(alg: &AlgebraSpec, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&i| alg.basis().label(i).to_string()).collect()
}

/// Nested graded commutators `[...[[Delta, l_{a_1}], l_{a_2}], ..., l_{a_r}]`
/// in `End(A)`. With no arguments this is `Delta` itself.
pub fn gamma(alg: &AlgebraSpec, delta: &MultilinearMap, args: &[Vector]) -> Result<MultilinearMap> {
    require_unital(alg)?;
    let mut cur = delta.clone();
    for a in args {
        let la = left_mult(alg, a)?;
        cur = graded_commutator(&cur, &la)?;
    }
    Ok(cur)
}

/// Sparse element of `A (x) A` with the sign rule
/// `(x (x) y)(z (x) w) = (-1)^{|y||z|} xz (x) yw`.
struct TensorElt {
    terms: BTreeMap<(usize, usize), Scalar>,
}

impl TensorElt {
    fn unit(alg: &AlgebraSpec) -> Result<Self> {
        let u = alg.unit_index().ok_or(Error::MissingUnit)?;
        let mut terms = BTreeMap::new();
        terms.insert((u, u), Scalar::one());
        Ok(TensorElt { terms })
    }

    /// Right-multiplies by `1 (x) a - a (x) 1` for homogeneous `a`.
    fn mul_lambda(&self, alg: &AlgebraSpec, a: &Vector) -> Result<TensorElt> {
        let basis = alg.basis();
        let mut terms: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        let mut add = |key: (usize, usize), c: Scalar| {
            if c.is_zero() {
                return;
            }
            let cur = terms.remove(&key).unwrap_or_else(Scalar::zero) + c;
            if !cur.is_zero() {
                terms.insert(key, cur);
            }
        };
        for (&(u, v), c) in &self.terms {
            for (&al, ac) in a.coords() {
                // (u (x) v)(1 (x) a) = u (x) (v a)
                let va = alg.mul(&alg.basis_vec(v), &alg.basis_vec(al))?;
                for (&w, wc) in va.coords() {
                    add((u, w), c * &(ac * wc));
                }
                // -(u (x) v)(a (x) 1) = -(-1)^{|v||a|} (u a) (x) v
                let sgn = sign_pow(basis.degree(v) * basis.degree(al));
                let ua = alg.mul(&alg.basis_vec(u), &alg.basis_vec(al))?;
                for (&w, wc) in ua.coords() {
                    add((w, v), -(&sgn * &(c * &(ac * wc))));
                }
            }
        }
        Ok(TensorElt { terms })
    }

    /// Applies `m ∘ (id (x) Delta)` with the Koszul factor `(-1)^{|Delta||u|}`.
    fn contract(&self, alg: &AlgebraSpec, delta: &MultilinearMap) -> Result<Vector> {
        let basis = alg.basis();
        let mut out = Vector::zero(basis.clone());
        for (&(u, v), c) in &self.terms {
            let Some(dv) = delta.value_ref(&[v]) else { continue };
            let sgn = sign_pow(delta.degree() * basis.degree(u));
            let prod = alg.mul(&alg.basis_vec(u), dv)?;
            out.add_assign_scaled(&prod, &(&sgn * c));
        }
        Ok(out)
    }

    /// `contract(self · lambda(e_i))` without materializing the product
    /// element: each term `c·(u (x) v)` contributes
    /// `c (-1)^{|D||u|} u D(v e_i) - c (-1)^{|v||e_i| + |D|(|u|+|e_i|)} (u e_i) D(v)`.
    fn contract_after_lambda(
        &self,
        alg: &AlgebraSpec,
        delta: &MultilinearMap,
        i: usize,
    ) -> Result<Vector> {
        let basis = alg.basis();
        let ei = alg.basis_vec(i);
        let di = basis.degree(i);
        let mut out = Vector::zero(basis.clone());
        for (&(u, v), c) in &self.terms {
            let eu = alg.basis_vec(u);
            let vei = alg.mul(&alg.basis_vec(v), &ei)?;
            let dvei = delta.apply(&[&vei])?;
            if !dvei.is_zero() {
                let sgn = sign_pow(delta.degree() * basis.degree(u));
                out.add_assign_scaled(&alg.mul(&eu, &dvei)?, &(&sgn * c));
            }
            if let Some(dv) = delta.value_ref(&[v]) {
                let uei = alg.mul(&eu, &ei)?;
                if !uei.is_zero() {
                    let sgn = sign_pow(
                        basis.degree(v) * di + delta.degree() * (basis.degree(u) + di),
                    );
                    out.add_assign_scaled(&alg.mul(&uei, dv)?, &-(&sgn * c));
                }
            }
        }
        Ok(out)
    }
}

/// The tensor-algebra form: `m ∘ (id (x) Delta)` applied to the product of the
/// factors `1 (x) a_i - a_i (x) 1`.
pub fn psi(alg: &AlgebraSpec, delta: &MultilinearMap, args: &[Vector]) -> Result<Vector> {
    alg.require_commutative_associative_unital()?;
    let mut t = TensorElt::unit(alg)?;
    for a in args {
        a.homogeneous_degree()?;
        t = t.mul_lambda(alg, a)?;
    }
    t.contract(alg, delta)
}

/// The recursive form. `Phi^0 = Delta(1)`, `Phi^1(a) = Delta(a) - Delta(1)a`,
/// and
/// `Phi^{r+1}(a_1,...,a_{r+1}) = Phi^r(a_1,...,a_r a_{r+1})
///   - Phi^r(a_1,...,a_r) a_{r+1} - kappa a_r Phi^r(a_1,...,a_{r-1},a_{r+1})`
/// with `kappa = (-1)^{|a_r|(|Delta|+|a_1|+...+|a_{r-1}|)}`.
pub fn phi(alg: &AlgebraSpec, delta: &MultilinearMap, args: &[Vector]) -> Result<Vector> {
    require_unital(alg)?;
    let one = alg.unit_vector()?;
    match args {
        [] => delta.apply(&[&one]),
        [a] => {
            let da = delta.apply(&[a])?;
            let d1a = alg.mul(&delta.apply(&[&one])?, a)?;
            da.sub(&d1a)
        }
        [front @ .., ar, arp1] => {
            let mut with_prod = front.to_vec();
            with_prod.push(alg.mul(ar, arp1)?);
            let t1 = phi(alg, delta, &with_prod)?;

            let mut head = front.to_vec();
            head.push(ar.clone());
            let t2 = alg.mul(&phi(alg, delta, &head)?, arp1)?;

            let mut front_deg = delta.degree();
            for a in front {
                front_deg += arg_degree(a)?;
            }
            let kappa = sign_pow(arg_degree(ar)? * front_deg);
            let mut tail = front.to_vec();
            tail.push(arp1.clone());
            let t3 = alg.mul(ar, &phi(alg, delta, &tail)?)?.scale(&kappa);

            t1.sub(&t2)?.sub(&t3)
        }
    }
}

/// Dense level tables for the recursive tower: `levels[r][rank]` is the value
/// on the rank-th basis tuple of arity `r`. Built iteratively, each level from
/// the previous one.
pub(crate) fn phi_levels(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    max_r: usize,
) -> Result<Vec<Vec<Vector>>> {
    require_unital(alg)?;
    let basis = alg.basis();
    let dim = basis.len();
    let one = alg.unit_vector()?;
    let mut levels = vec![vec![delta.apply(&[&one])?]];
    if max_r == 0 {
        return Ok(levels);
    }
    let d_one = levels[0][0].clone();
    let mut level1 = Vec::with_capacity(dim);
    for i in 0..dim {
        let e = alg.basis_vec(i);
        level1.push(delta.apply(&[&e])?.sub(&alg.mul(&d_one, &e)?)?);
    }
    levels.push(level1);
    for r in 1..max_r {
        let prev = &levels[r];
        let mut cur = vec![Vector::zero(basis.clone()); dim.pow((r + 1) as u32)];
        let front_count = dim.pow((r - 1) as u32);
        for front_rank in 0..front_count {
            let front = unrank(front_rank, dim, r - 1);
            let front_deg: i64 =
                delta.degree() + front.iter().map(|&i| basis.degree(i)).sum::<i64>();
            for i in 0..dim {
                let kappa = sign_pow(basis.degree(i) * front_deg);
                let ei = alg.basis_vec(i);
                for j in 0..dim {
                    let ej = alg.basis_vec(j);
                    let mut value = Vector::zero(basis.clone());
                    if let Some(prod) = alg.product().value_ref(&[i, j]) {
                        for (&c, coeff) in prod.coords() {
                            value.add_assign_scaled(&prev[front_rank * dim + c], coeff);
                        }
                    }
                    let t2 = alg.mul(&prev[front_rank * dim + i], &ej)?;
                    value.add_assign_scaled(&t2, &-Scalar::one());
                    let t3 = alg.mul(&ei, &prev[front_rank * dim + j])?;
                    value.add_assign_scaled(&t3, &-kappa.clone());
                    cur[(front_rank * dim + i) * dim + j] = value;
                }
            }
        }
        levels.push(cur);
    }
    Ok(levels)
}

/// One more level of the recursive tower from the previous one (used for
/// incremental vanishing probes without retaining all levels).
fn phi_next_level(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    prev: &[Vector],
    r: usize,
) -> Result<Vec<Vector>> {
    let basis = alg.basis();
    let dim = basis.len();
    if r == 0 {
        let mut level1 = Vec::with_capacity(dim);
        for i in 0..dim {
            let e = alg.basis_vec(i);
            level1.push(delta.apply(&[&e])?.sub(&alg.mul(&prev[0], &e)?)?);
        }
        return Ok(level1);
    }
    let mut cur = vec![Vector::zero(basis.clone()); dim.pow((r + 1) as u32)];
    let front_count = dim.pow((r - 1) as u32);
    for front_rank in 0..front_count {
        let front = unrank(front_rank, dim, r - 1);
        let front_deg: i64 = delta.degree() + front.iter().map(|&i| basis.degree(i)).sum::<i64>();
        for i in 0..dim {
            let kappa = sign_pow(basis.degree(i) * front_deg);
            let ei = alg.basis_vec(i);
            for j in 0..dim {
                let ej = alg.basis_vec(j);
                let mut value = Vector::zero(basis.clone());
                if let Some(prod) = alg.product().value_ref(&[i, j]) {
                    for (&c, coeff) in prod.coords() {
                        value.add_assign_scaled(&prev[front_rank * dim + c], coeff);
                    }
                }
                let t2 = alg.mul(&prev[front_rank * dim + i], &ej)?;
                value.add_assign_scaled(&t2, &-Scalar::one());
                let t3 = alg.mul(&ei, &prev[front_rank * dim + j])?;
                value.add_assign_scaled(&t3, &-kappa.clone());
                cur[(front_rank * dim + i) * dim + j] = value;
            }
        }
    }
    Ok(cur)
}

/// Depth-first walk of the commutator tower, recording `op(1)` at every node.
/// At the deepest level only the value at the unit is needed, so the child
/// commutators are not materialized: `[op, l_a](1) = op(a) - (-1)^{..} a op(1)`.
fn gamma1_levels(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    max_r: usize,
) -> Result<Vec<Vec<Vector>>> {
    require_unital(alg)?;
    let basis = alg.basis();
    let dim = basis.len();
    let one = alg.unit_vector()?;
    let lmults: Vec<MultilinearMap> = (0..dim)
        .map(|i| left_mult(alg, &alg.basis_vec(i)))
        .collect::<Result<_>>()?;
    let mut levels: Vec<Vec<Vector>> = (0..=max_r)
        .map(|r| vec![Vector::zero(basis.clone()); dim.pow(r as u32)])
        .collect();
    fn walk(
        alg: &AlgebraSpec,
        lmults: &[MultilinearMap],
        one: &Vector,
        op: &MultilinearMap,
        depth: usize,
        rank: usize,
        max_r: usize,
        levels: &mut [Vec<Vector>],
    ) -> Result<()> {
        let at_one = op.apply(&[one])?;
        if depth == max_r {
            levels[depth][rank] = at_one;
            return Ok(());
        }
        let dim = lmults.len();
        if depth + 1 == max_r {
            for i in 0..dim {
                let mut v = op.apply(&[&alg.basis_vec(i)])?;
                let sgn = sign_pow(op.degree() * alg.basis().degree(i));
                v.add_assign_scaled(&alg.mul(&alg.basis_vec(i), &at_one)?, &-sgn);
                levels[depth + 1][rank * dim + i] = v;
            }
            levels[depth][rank] = at_one;
            return Ok(());
        }
        levels[depth][rank] = at_one;
        for (i, l) in lmults.iter().enumerate() {
            let next = graded_commutator(op, l)?;
            walk(alg, lmults, one, &next, depth + 1, rank * dim + i, max_r, levels)?;
        }
        Ok(())
    }
    walk(alg, &lmults, &one, delta, 0, 0, max_r, &mut levels)?;
    Ok(levels)
}

/// First basis tuple of the given arity where the commutator tower is a
/// nonzero operator.
fn gamma_first_nonzero_at(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    arity: usize,
) -> Result<Option<Witness>> {
    require_unital(alg)?;
    let dim = alg.basis().len();
    let lmults: Vec<MultilinearMap> = (0..dim)
        .map(|i| left_mult(alg, &alg.basis_vec(i)))
        .collect::<Result<_>>()?;
    fn walk(
        alg: &AlgebraSpec,
        lmults: &[MultilinearMap],
        op: &MultilinearMap,
        depth: usize,
        tuple: &mut Vec<usize>,
        arity: usize,
    ) -> Result<Option<Witness>> {
        if depth == arity {
            if op.is_zero() {
                return Ok(None);
            }
            return Ok(Some(Witness::new(labels_of(alg, tuple), format!("{op}"))));
        }
        for (i, l) in lmults.iter().enumerate() {
            let next = graded_commutator(op, l)?;
            if next.is_zero() {
                continue; // the whole subtree vanishes
            }
            tuple.push(i);
            if let Some(w) = walk(alg, lmults, &next, depth + 1, tuple, arity)? {
                return Ok(Some(w));
            }
            tuple.pop();
        }
        Ok(None)
    }
    let mut tuple = Vec::new();
    walk(alg, &lmults, delta, 0, &mut tuple, arity)
}

/// Depth-first walk of the tensor tower, recording the contraction at every
/// node.
fn psi_levels(alg: &AlgebraSpec, delta: &MultilinearMap, max_r: usize) -> Result<Vec<Vec<Vector>>> {
    alg.require_commutative_associative_unital()?;
    let basis = alg.basis();
    let dim = basis.len();
    let mut levels: Vec<Vec<Vector>> = (0..=max_r)
        .map(|r| vec![Vector::zero(basis.clone()); dim.pow(r as u32)])
        .collect();
    fn walk(
        alg: &AlgebraSpec,
        delta: &MultilinearMap,
        t: &TensorElt,
        depth: usize,
        rank: usize,
        max_r: usize,
        levels: &mut [Vec<Vector>],
    ) -> Result<()> {
        levels[depth][rank] = t.contract(alg, delta)?;
        if depth == max_r {
            return Ok(());
        }
        let dim = alg.basis().len();
        if depth + 1 == max_r {
            // the deepest level needs only the contraction, not the element
            for i in 0..dim {
                levels[depth + 1][rank * dim + i] = t.contract_after_lambda(alg, delta, i)?;
            }
            return Ok(());
        }
        for i in 0..dim {
            let nt = t.mul_lambda(alg, &alg.basis_vec(i))?;
            walk(alg, delta, &nt, depth + 1, rank * dim + i, max_r, levels)?;
        }
        Ok(())
    }
    let t = TensorElt::unit(alg)?;
    walk(alg, delta, &t, 0, 0, max_r, &mut levels)?;
    Ok(levels)
}

fn psi_first_nonzero_at(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    arity: usize,
) -> Result<Option<Witness>> {
    alg.require_commutative_associative_unital()?;
    fn walk(
        alg: &AlgebraSpec,
        delta: &MultilinearMap,
        t: &TensorElt,
        depth: usize,
        tuple: &mut Vec<usize>,
        arity: usize,
    ) -> Result<Option<Witness>> {
        if depth == arity {
            let v = t.contract(alg, delta)?;
            if v.is_zero() {
                return Ok(None);
            }
            return Ok(Some(Witness::new(labels_of(alg, tuple), v)));
        }
        let dim = alg.basis().len();
        for i in 0..dim {
            let nt = t.mul_lambda(alg, &alg.basis_vec(i))?;
            if nt.terms.is_empty() {
                continue;
            }
            tuple.push(i);
            if let Some(w) = walk(alg, delta, &nt, depth + 1, tuple, arity)? {
                return Ok(Some(w));
            }
            tuple.pop();
        }
        Ok(None)
    }
    let t = TensorElt::unit(alg)?;
    let mut tuple = Vec::new();
    walk(alg, delta, &t, 0, &mut tuple, arity)
}

/// The closed form
/// `sum_{k} sum_{sigma} (-1)^k eps(sigma) (-1)^{|Delta||a_S|}
///   a_{sigma(1)}...a_{sigma(k)} Delta(a_{sigma(k+1)}...a_{sigma(r)})`,
/// the graded completion of the unshuffle sum (the crossing factor for moving
/// `Delta` past the left block is what makes it agree with the tensor form).
pub fn unshuffle_sum(alg: &AlgebraSpec, delta: &MultilinearMap, args: &[Vector]) -> Result<Vector> {
    alg.require_commutative_associative_unital()?;
    let one = alg.unit_vector()?;
    let r = args.len();
    let degrees: Vec<i64> = args.iter().map(arg_degree).collect::<Result<_>>()?;
    let mut out = Vector::zero(alg.basis().clone());
    for k in 0..=r {
        for sigma in unshuffles(k, r)? {
            let eps = koszul_sign(&sigma, &degrees)?;
            let mut sgn = &sign_pow(k as i64) * &eps;
            let mut left = one.clone();
            let mut left_deg = 0i64;
            for pos in 1..=k {
                let i = sigma.apply(pos);
                left = alg.mul(&left, &args[i - 1])?;
                left_deg += degrees[i - 1];
            }
            sgn = &sgn * &sign_pow(delta.degree() * left_deg);
            let mut right = one.clone();
            for pos in (k + 1)..=r {
                let i = sigma.apply(pos);
                right = alg.mul(&right, &args[i - 1])?;
            }
            let term = alg.mul(&left, &delta.apply(&[&right])?)?;
            out.add_assign_scaled(&term, &sgn);
        }
    }
    Ok(out)
}

/// The same sum evaluated on a basis tuple through bitmask-indexed subset
/// products (ascending-position order within each block). Works on dense
/// coefficient slices to keep allocation out of the inner loop.
fn unshuffle_value_on_tuple(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    tuple: &[usize],
) -> Result<Vector> {
    let basis = alg.basis();
    let dim = basis.len();
    let r = tuple.len();
    let unit = alg.unit_index().ok_or(Error::MissingUnit)?;
    let degrees: Vec<i64> = tuple.iter().map(|&i| basis.degree(i)).collect();
    let total = 1usize << r;
    // sparse subset products, factors in ascending position order
    let mut prods: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(total);
    prods.push(vec![(unit, Scalar::one())]);
    for mask in 1..total {
        let high = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask & !(1 << high);
        let factor = tuple[high as usize];
        let mut next: Vec<(usize, Scalar)> = Vec::new();
        for (i, c) in &prods[rest] {
            if let Some(row) = alg.product().value_ref(&[*i, factor]) {
                for (&k, rc) in row.coords() {
                    match next.iter_mut().find(|(x, _)| *x == k) {
                        Some((_, acc)) => *acc += &(c * rc),
                        None => next.push((k, c * rc)),
                    }
                }
            }
        }
        next.retain(|(_, c)| !c.is_zero());
        prods.push(next);
    }
    let mut out = vec![Scalar::zero(); dim];
    let mut dval = vec![Scalar::zero(); dim];
    let mut dsupport: Vec<usize> = Vec::new();
    for mask in 0..total {
        let k = mask.count_ones() as i64;
        // Koszul sign of the unshuffle determined by this subset: one factor
        // per crossing pair (s in S, t not in S, s > t)
        let mut neg = k.rem_euclid(2) == 1;
        let mut s_parity = 0i64;
        for s in 0..r {
            if mask >> s & 1 == 0 {
                continue;
            }
            s_parity += degrees[s];
            if degrees[s].rem_euclid(2) == 1 {
                for t in 0..s {
                    if mask >> t & 1 == 0 && degrees[t].rem_euclid(2) == 1 {
                        neg = !neg;
                    }
                }
            }
        }
        if (delta.degree() * s_parity).rem_euclid(2) == 1 {
            neg = !neg;
        }
        let rest = (total - 1) ^ mask;
        for &i in &dsupport {
            dval[i] = Scalar::zero();
        }
        dsupport.clear();
        for (j, c) in &prods[rest] {
            if let Some(row) = delta.value_ref(&[*j]) {
                for (&i, rc) in row.coords() {
                    if dval[i].is_zero() {
                        dsupport.push(i);
                    }
                    dval[i] += &(c * rc);
                }
            }
        }
        for (i, ci) in &prods[mask] {
            for &j in &dsupport {
                if dval[j].is_zero() {
                    continue;
                }
                if let Some(row) = alg.product().value_ref(&[*i, j]) {
                    let c = ci * &dval[j];
                    let c = if neg { -c } else { c };
                    for (&k, rc) in row.coords() {
                        out[k] += &(&c * rc);
                    }
                }
            }
        }
    }
    let coords = out
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c))
        .collect();
    Ok(Vector::from_coords(basis.clone(), coords))
}

/// Which tower defines "order" for a particular computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderDefinition {
    Gamma,
    Psi,
    Phi,
}

impl OrderDefinition {
    pub fn name(&self) -> &'static str {
        match self {
            OrderDefinition::Gamma => "gamma",
            OrderDefinition::Psi => "psi",
            OrderDefinition::Phi => "phi",
        }
    }
}

/// The order of an operator: `Exact(k)` when the arity-(k+1) tower vanishes on
/// all basis tuples (and arity k does not), `AtLeast(m)` when no vanishing
/// arity was found up to `max_r`. The zero operator has order `Exact(-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Exact(i64),
    AtLeast(i64),
}

impl Order {
    pub fn as_exact(&self) -> Option<i64> {
        match self {
            Order::Exact(k) => Some(*k),
            Order::AtLeast(_) => None,
        }
    }

    pub fn at_most(&self, bound: i64) -> bool {
        matches!(self, Order::Exact(k) if *k <= bound)
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Exact(k) => write!(f, "{k}"),
            Order::AtLeast(m) => write!(f, ">= {m}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrderEntry {
    pub definition: &'static str,
    pub order: Order,
    /// First nonvanishing tuple at the last nonzero arity.
    pub witness: Option<Witness>,
}

/// Per-definition order report for one operator.
#[derive(Debug, Clone)]
pub struct OperatorOrderReport {
    pub operator: String,
    pub max_tested: i64,
    pub entries: Vec<OrderEntry>,
}

impl OperatorOrderReport {
    /// When every entry is finite they must agree (the equivalence of the
    /// definitions on commutative associative unital algebras).
    pub fn consistent(&self) -> bool {
        let finite: Vec<i64> = self.entries.iter().filter_map(|e| e.order.as_exact()).collect();
        finite.windows(2).all(|w| w[0] == w[1])
    }
}

fn first_nonzero_in_level(alg: &AlgebraSpec, level: &[Vector], arity: usize) -> Option<Witness> {
    let dim = alg.basis().len();
    for (rank, v) in level.iter().enumerate() {
        if !v.is_zero() {
            let tuple = unrank(rank, dim, arity);
            return Some(Witness::new(labels_of(alg, &tuple), v));
        }
    }
    None
}

/// Smallest `k <= max_r` such that the arity-(k+1) values of the chosen tower
/// vanish on every basis tuple.
pub fn order_of(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    def: OrderDefinition,
    max_r: i64,
) -> Result<OrderEntry> {
    if max_r < 1 {
        return Err(Error::invalid("order_of requires max_r >= 1"));
    }
    if matches!(def, OrderDefinition::Psi) {
        alg.require_commutative_associative_unital()?;
    } else {
        require_unital(alg)?;
    }
    if delta.is_zero() {
        return Ok(OrderEntry { definition: def.name(), order: Order::Exact(-1), witness: None });
    }
    let mut witness = Some(Witness::new(vec![], format!("{delta}")));
    match def {
        OrderDefinition::Phi => {
            let one = alg.unit_vector()?;
            let mut prev = vec![delta.apply(&[&one])?];
            for k in 0..=max_r {
                let level = phi_next_level(alg, delta, &prev, k as usize)?;
                match first_nonzero_in_level(alg, &level, (k + 1) as usize) {
                    None => {
                        return Ok(OrderEntry {
                            definition: def.name(),
                            order: Order::Exact(k),
                            witness,
                        })
                    }
                    Some(w) => witness = Some(w),
                }
                prev = level;
            }
        }
        OrderDefinition::Gamma | OrderDefinition::Psi => {
            for k in 0..=max_r {
                let found = match def {
                    OrderDefinition::Gamma => gamma_first_nonzero_at(alg, delta, (k + 1) as usize)?,
                    _ => psi_first_nonzero_at(alg, delta, (k + 1) as usize)?,
                };
                match found {
                    None => {
                        return Ok(OrderEntry {
                            definition: def.name(),
                            order: Order::Exact(k),
                            witness,
                        })
                    }
                    Some(w) => witness = Some(w),
                }
            }
        }
    }
    Ok(OrderEntry { definition: def.name(), order: Order::AtLeast(max_r + 1), witness })
}

/// Default order search bound: the dimension of the algebra plus one.
pub fn default_max_r(alg: &AlgebraSpec) -> i64 {
    alg.basis().len() as i64 + 1
}

pub fn order_report(
    alg: &AlgebraSpec,
    name: &str,
    delta: &MultilinearMap,
    max_r: i64,
) -> Result<OperatorOrderReport> {
    let mut entries = vec![
        order_of(alg, delta, OrderDefinition::Gamma, max_r)?,
        order_of(alg, delta, OrderDefinition::Phi, max_r)?,
    ];
    if alg.properties().commutative && alg.properties().associative {
        entries.insert(1, order_of(alg, delta, OrderDefinition::Psi, max_r)?);
    }
    Ok(OperatorOrderReport { operator: name.to_string(), max_tested: max_r, entries })
}

/// Checks `Gamma(...)1 = Psi = Phi = unshuffle-sum` on every basis tuple of
/// arity up to `max_r`, exactly.
pub fn verify_equivalence(
    alg: &AlgebraSpec,
    delta: &MultilinearMap,
    max_r: usize,
) -> Result<Report> {
    alg.require_commutative_associative_unital()?;
    let mut report = Report::new("equivalence");
    let dim = alg.basis().len();
    let gamma_levels = gamma1_levels(alg, delta, max_r)?;
    let psi_levels = psi_levels(alg, delta, max_r)?;
    let phi_levels = phi_levels(alg, delta, max_r)?;
    let mut checked = 0usize;
    for r in 0..=max_r {
        let mut failure: Option<Witness> = None;
        for rank in 0..dim.pow(r as u32) {
            let tuple = unrank(rank, dim, r);
            let g1 = &gamma_levels[r][rank];
            let ps = &psi_levels[r][rank];
            let ph = &phi_levels[r][rank];
            let us = unshuffle_value_on_tuple(alg, delta, &tuple)?;
            checked += 1;
            if !(g1 == ps && ps == ph && *ph == us) {
                failure = Some(Witness::new(
                    labels_of(alg, &tuple),
                    format!("gamma1 = {g1}; psi = {ps}; phi = {ph}; unshuffle = {us}"),
                ));
                break;
            }
        }
        report.push(match failure {
            None => Check::pass(format!("towers agree at arity {r}")),
            Some(w) => Check::fail(format!("towers agree at arity {r}"), Some(w)),
        });
    }
    report.insert_data("tuples_checked", checked);
    Ok(report)
}

fn op_order(alg: &AlgebraSpec, op: &MultilinearMap, max_r: i64) -> Result<Order> {
    Ok(order_of(alg, op, OrderDefinition::Phi, max_r)?.order)
}

fn order_leq(o: &Order, bound: i64) -> bool {
    match o {
        Order::Exact(k) => *k <= bound,
        Order::AtLeast(_) => false,
    }
}

/// Composition and commutator order bounds over a pool of operators, plus the
/// filtration nesting (vanishing at one arity persists at all higher arities,
/// checked computationally rather than by appeal to the recursion).
pub fn verify_order_calculus(
    alg: &AlgebraSpec,
    pool: &[(String, MultilinearMap)],
    max_r: i64,
) -> Result<Report> {
    alg.require_commutative_associative_unital()?;
    let mut report = Report::new("order-calculus");
    let mut orders = Vec::new();
    for (name, op) in pool {
        let o = op_order(alg, op, max_r)?;
        report.push(Check::pass_with_detail(
            format!("order({name})"),
            format!("{o}"),
        ));
        orders.push(o);
    }
    let mut derived_ops: Vec<(String, MultilinearMap, Option<i64>)> = Vec::new();
    for (i, (ni, fi)) in pool.iter().enumerate() {
        for (j, (nj, fj)) in pool.iter().enumerate() {
            let (Order::Exact(oi), Order::Exact(oj)) = (orders[i], orders[j]) else {
                continue;
            };
            let comp = fi.compose(fj)?;
            let oc = op_order(alg, &comp, max_r)?;
            let comp_bound = (oi + oj).max(-1);
            let name = format!("order({ni}∘{nj}) <= {comp_bound}");
            if order_leq(&oc, comp_bound) {
                report.push(Check::pass_with_detail(name, format!("{oc}")));
            } else {
                report.push(Check::fail(name, Some(Witness::new(vec![], format!("{oc}")))));
            }
            derived_ops.push((format!("{ni}∘{nj}"), comp, oc.as_exact()));
            let br = graded_commutator(fi, fj)?;
            let ob = op_order(alg, &br, max_r)?;
            let br_bound = (oi + oj - 1).max(-1);
            let name = format!("order([{ni},{nj}]) <= {br_bound}");
            if order_leq(&ob, br_bound) {
                report.push(Check::pass_with_detail(name, format!("{ob}")));
            } else {
                report.push(Check::fail(name, Some(Witness::new(vec![], format!("{ob}")))));
            }
            derived_ops.push((format!("[{ni},{nj}]"), br, ob.as_exact()));
        }
    }
    // filtration nesting: once the Phi tower vanishes at some arity it keeps
    // vanishing at every higher arity, tested up to max_r on the pool and on
    // the derived operators
    let mut all: Vec<(String, &MultilinearMap, Option<i64>)> = pool
        .iter()
        .enumerate()
        .map(|(i, (n, f))| (n.clone(), f, orders[i].as_exact()))
        .collect();
    for (n, f, o) in &derived_ops {
        all.push((n.clone(), f, *o));
    }
    for (name, op, order) in all {
        let Some(k) = order else { continue };
        let mut ok = true;
        let mut witness = None;
        if !op.is_zero() {
            let one = alg.unit_vector()?;
            let mut prev = vec![op.apply(&[&one])?];
            for arity in 1..=(max_r + 1).max(1) {
                let level = phi_next_level(alg, op, &prev, (arity - 1) as usize)?;
                if arity > k {
                    if let Some(w) = first_nonzero_in_level(alg, &level, arity as usize) {
                        ok = false;
                        witness = Some(w);
                        break;
                    }
                }
                prev = level;
            }
        }
        let check_name = format!("filtration nesting for {name} (order {k})");
        report.push(if ok {
            Check::pass(check_name)
        } else {
            Check::fail(check_name, witness)
        });
    }
    Ok(report)
}
