//! The Hochschild complex of a finite-dimensional algebra with pre-Lie
//! composition and the Gerstenhaber bracket.
//!
//! Internally all computations run on the degree-shifted basis (every degree
//! raised by one), where the insertion sign is the plain Koszul factor for
//! moving a map past earlier arguments. For an ungraded base algebra the
//! shifted degrees make an arity-`n` component odd exactly when `n` is even,
//! which reproduces the classical sign `(-1)^{(q-1)(i-1)}` and the classical
//! degree convention "an n-linear map has degree n-1".

use crate::algebra::AlgebraSpec;
use crate::basis::{same_basis, GradedBasis, Vector};
use crate::error::{Error, Result};
use crate::multilinear::MultilinearMap;
use crate::scalar::sign_pow;
use itertools::Itertools;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finitely supported element of the complex: one homogeneous multilinear
/// map per arity, all components of one parity.
#[derive(Debug, Clone, PartialEq)]
pub struct HochschildElement {
    components: BTreeMap<usize, MultilinearMap>,
}

impl HochschildElement {
    pub fn component(&self, arity: usize) -> Option<&MultilinearMap> {
        self.components.get(&arity)
    }

    pub fn components(&self) -> &BTreeMap<usize, MultilinearMap> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(MultilinearMap::is_zero)
    }

    /// Common parity of the nonzero components (`None` when zero).
    pub fn parity(&self) -> Result<Option<i64>> {
        let mut parity = None;
        for m in self.components.values() {
            if m.is_zero() {
                continue;
            }
            let p = m.parity();
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => {
                    return Err(Error::invalid(
                        "element mixes components of different parities",
                    ))
                }
                _ => {}
            }
        }
        Ok(parity)
    }

    pub fn max_arity(&self) -> usize {
        self.components
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&n, _)| n)
            .max()
            .unwrap_or(0)
    }
}

/// The shifted-complex engine. Works over any graded base; the classical
/// ungraded surface with its input guards is [`Hochschild`].
#[derive(Debug, Clone)]
pub struct HochschildComplex {
    base: Arc<GradedBasis>,
    shifted: Arc<GradedBasis>,
    max_arity: usize,
}

impl HochschildComplex {
    pub fn new(base: Arc<GradedBasis>, max_arity: usize) -> Result<Self> {
        let shifted = base.shifted(1);
        Ok(HochschildComplex { base, shifted, max_arity })
    }

    pub fn base_basis(&self) -> &Arc<GradedBasis> {
        &self.base
    }

    pub fn shifted_basis(&self) -> &Arc<GradedBasis> {
        &self.shifted
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn lift(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.shifted.clone());
        for (&i, c) in v.coords() {
            out.set(i, c.clone());
        }
        out
    }

    /// Reads a shifted vector back on the base basis.
    pub fn lower(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.base.clone());
        for (&i, c) in v.coords() {
            out.set(i, c.clone());
        }
        out
    }

    /// An element of the base algebra as an arity-0 element of the complex.
    pub fn element(&self, v: &Vector) -> Result<HochschildElement> {
        let v = if same_basis(v.basis(), &self.base) {
            self.lift(v)
        } else if same_basis(v.basis(), &self.shifted) {
            v.clone()
        } else {
            return Err(Error::BasisMismatch("hochschild element".into()));
        };
        let mut components = BTreeMap::new();
        if !v.is_zero() {
            components.insert(0, MultilinearMap::constant(v)?);
        }
        Ok(HochschildElement { components })
    }

    /// Wraps a single multilinear map, reinterpreting a base-basis map on the
    /// shifted basis entry for entry (no suspension signs; this is how the
    /// product `m` of the classical examples enters the complex).
    pub fn from_map(&self, m: &MultilinearMap) -> Result<HochschildElement> {
        let lifted = if same_basis(m.source(), &self.base) {
            let mut entries = BTreeMap::new();
            for (t, v) in m.entries() {
                entries.insert(t.clone(), self.lift(v));
            }
            let degree = m.degree() + 1 - m.arity() as i64;
            MultilinearMap::new(self.shifted.clone(), self.shifted.clone(), m.arity(), degree, entries)?
        } else if same_basis(m.source(), &self.shifted) {
            m.clone()
        } else {
            return Err(Error::BasisMismatch("hochschild map".into()));
        };
        let mut components = BTreeMap::new();
        if !lifted.is_zero() {
            components.insert(lifted.arity(), lifted);
        }
        Ok(HochschildElement { components })
    }

    /// Converts a strongly homotopy associative family given on the base
    /// basis into one element of the shifted complex, applying the suspension
    /// sign `(-1)^{sum_j (n-j)|w_j|}` to each arity-`n` component.
    pub fn from_ainfty(&self, maps: &BTreeMap<usize, MultilinearMap>) -> Result<HochschildElement> {
        let mut components = BTreeMap::new();
        for (&n, m) in maps {
            if m.is_zero() {
                continue;
            }
            if !same_basis(m.source(), &self.base) {
                return Err(Error::BasisMismatch("ainfty component".into()));
            }
            let mut entries = BTreeMap::new();
            for (tuple, v) in m.entries() {
                let mut exp = 0i64;
                for (j, &i) in tuple.iter().enumerate() {
                    // position j is 0-based; factor (n - (j+1)) * |w_j|_W
                    exp += (n as i64 - j as i64 - 1) * self.shifted.degree(i);
                }
                entries.insert(tuple.clone(), self.lift(v).scale(&sign_pow(exp)));
            }
            let degree = m.degree() + 1 - n as i64;
            let lifted =
                MultilinearMap::new(self.shifted.clone(), self.shifted.clone(), n, degree, entries)?;
            if !lifted.has_parity(1) {
                return Err(Error::hypothesis(
                    "suspended-odd components",
                    format!("arity-{n} component has even shifted parity"),
                ));
            }
            components.insert(n, lifted);
        }
        Ok(HochschildElement { components })
    }

    fn add_into(
        acc: &mut BTreeMap<usize, MultilinearMap>,
        arity: usize,
        m: MultilinearMap,
    ) -> Result<()> {
        if m.is_zero() {
            return Ok(());
        }
        match acc.remove(&arity) {
            None => {
                acc.insert(arity, m);
            }
            Some(cur) => {
                let sum = cur.add(&m)?;
                if !sum.is_zero() {
                    acc.insert(arity, sum);
                }
            }
        }
        Ok(())
    }

    /// Pre-Lie insertion composition `f ∘ g`, truncated at the complex's
    /// maximal arity: for components of arities `p` and `q`,
    /// `(F∘G)(w_1,...,w_{p+q-1}) =
    ///    sum_i (-1)^{|G|(|w_1|+...+|w_{i-1}|)} F(..., G(w_i,...), ...)`.
    pub fn circ(&self, f: &HochschildElement, g: &HochschildElement) -> Result<HochschildElement> {
        let w = &self.shifted;
        let mut acc: BTreeMap<usize, MultilinearMap> = BTreeMap::new();
        for (&p, fc) in &f.components {
            if p == 0 {
                continue; // no insertion positions: compositions into an element vanish
            }
            for (&q, gc) in &g.components {
                let t = p + q - 1;
                if t > self.max_arity {
                    continue;
                }
                let gp = gc.parity();
                let mut entries: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
                for tuple in (0..t).map(|_| w.indices()).multi_cartesian_product() {
                    let mut out = Vector::zero(w.clone());
                    for i in 0..p {
                        // sign: |G| times the shifted degrees before slot i
                        let before: i64 = tuple[..i].iter().map(|&x| w.degree(x)).sum();
                        let sgn = sign_pow(gp * before);
                        let inner = gc.value_on(&tuple[i..i + q]);
                        if inner.is_zero() {
                            continue;
                        }
                        for (&mid, c) in inner.coords() {
                            let mut outer = Vec::with_capacity(p);
                            outer.extend_from_slice(&tuple[..i]);
                            outer.push(mid);
                            outer.extend_from_slice(&tuple[i + q..]);
                            let val = fc.value_on(&outer);
                            if !val.is_zero() {
                                out.add_assign_scaled(&val, &(&sgn * c));
                            }
                        }
                    }
                    if !out.is_zero() {
                        entries.insert(tuple, out);
                    }
                }
                let m = MultilinearMap::new(
                    w.clone(),
                    w.clone(),
                    t,
                    fc.degree() + gc.degree(),
                    entries,
                )?;
                Self::add_into(&mut acc, t, m)?;
            }
        }
        Ok(HochschildElement { components: acc })
    }

    /// The Gerstenhaber bracket `[f,g] = f∘g - (-1)^{|f||g|} g∘f`.
    pub fn bracket(&self, f: &HochschildElement, g: &HochschildElement) -> Result<HochschildElement> {
        let pf = f.parity()?.unwrap_or(0);
        let pg = g.parity()?.unwrap_or(0);
        let fg = self.circ(f, g)?;
        let gf = self.circ(g, f)?;
        let sgn = -sign_pow(pf * pg);
        let mut acc = fg.components;
        for (arity, m) in gf.components {
            Self::add_into(&mut acc, arity, m.scale(&sgn))?;
        }
        Ok(HochschildElement { components: acc })
    }

    /// The arity-0 component as a shifted vector (zero when absent).
    pub fn arity_zero_value(&self, f: &HochschildElement) -> Vector {
        f.components
            .get(&0)
            .map(|m| m.value_on(&[]))
            .unwrap_or_else(|| Vector::zero(self.shifted.clone()))
    }

    /// First nonzero entry of any component, for witnesses.
    pub fn first_nonzero(&self, f: &HochschildElement) -> Option<(usize, Vec<String>, String)> {
        for (&n, m) in &f.components {
            if let Some((tuple, v)) = m.entries().next() {
                let labels = tuple.iter().map(|&i| self.shifted.label(i).to_string()).collect();
                return Some((n, labels, v.to_string()));
            }
        }
        None
    }
}

/// The classical surface: the Hochschild complex of an associative algebra
/// with trivial grading.
#[derive(Debug, Clone)]
pub struct Hochschild {
    algebra: AlgebraSpec,
    complex: HochschildComplex,
}

pub const DEFAULT_MAX_ARITY: usize = 4;

impl Hochschild {
    pub fn new(algebra: &AlgebraSpec, max_arity: usize) -> Result<Self> {
        let basis = algebra.basis();
        if basis.indices().any(|i| basis.degree(i) != 0) {
            return Err(Error::UnsupportedInput(
                "the classical Hochschild complex requires a trivially graded base algebra".into(),
            ));
        }
        Ok(Hochschild {
            algebra: algebra.clone(),
            complex: HochschildComplex::new(basis.clone(), max_arity)?,
        })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn complex(&self) -> &HochschildComplex {
        &self.complex
    }

    /// The multiplication as an arity-2 element.
    pub fn product_element(&self) -> Result<HochschildElement> {
        self.complex.from_map(self.algebra.product())
    }

    pub fn element_of(&self, label: &str) -> Result<HochschildElement> {
        self.complex.element(&self.algebra.vec_of(label)?)
    }

    pub fn circ(&self, f: &HochschildElement, g: &HochschildElement) -> Result<HochschildElement> {
        self.complex.circ(f, g)
    }

    pub fn bracket(&self, f: &HochschildElement, g: &HochschildElement) -> Result<HochschildElement> {
        self.complex.bracket(f, g)
    }

    /// `[m, m]`, whose vanishing is exactly associativity.
    pub fn product_square(&self) -> Result<HochschildElement> {
        let m = self.product_element()?;
        self.bracket(&m, &m)
    }

    /// Order of an element with respect to the abelian subalgebra of arity-0
    /// elements: smallest `r` such that every `(r+1)`-fold bracket with
    /// algebra elements vanishes. Returns `AtLeast`-style `None` if no such
    /// `r <= max` exists.
    pub fn element_order(&self, f: &HochschildElement, max: usize) -> Result<Option<i64>> {
        if f.is_zero() {
            return Ok(Some(-1));
        }
        let basis = self.algebra.basis();
        for k in 0..=max {
            let mut all_zero = true;
            'tuples: for tuple in (0..=k).map(|_| basis.indices()).multi_cartesian_product() {
                let mut cur = f.clone();
                for &i in &tuple {
                    let e = self.complex.element(&self.algebra.basis_vec(i))?;
                    cur = self.bracket(&cur, &e)?;
                    if cur.is_zero() {
                        continue 'tuples;
                    }
                }
                all_zero = false;
                break;
            }
            if all_zero {
                return Ok(Some(k as i64));
            }
        }
        Ok(None)
    }
}

/// Pre-Lie composition on the classical complex.
pub fn gerstenhaber_circ(
    h: &Hochschild,
    f: &HochschildElement,
    g: &HochschildElement,
) -> Result<HochschildElement> {
    h.circ(f, g)
}

/// The Gerstenhaber bracket on the classical complex.
pub fn gerstenhaber_bracket(
    h: &Hochschild,
    f: &HochschildElement,
    g: &HochschildElement,
) -> Result<HochschildElement> {
    h.bracket(f, g)
}

/// The restriction to the algebra of the derived bracket `[[m,-],-]`, which
/// equals the commutator `(a,b) -> m(a,b) - m(b,a)`. Fails with a witness
/// when the product is not associative.
pub fn derived_commutator(algebra: &AlgebraSpec) -> Result<MultilinearMap> {
    let h = Hochschild::new(algebra, 3)?;
    let mm = h.product_square()?;
    if let Some((arity, tuple, value)) = h.complex.first_nonzero(&mm) {
        return Err(Error::hypothesis(
            "[m,m] = 0",
            format!("arity-{arity} component on ({}) = {value}", tuple.join(", ")),
        ));
    }
    let m = h.product_element()?;
    let basis = algebra.basis();
    let mut entries = BTreeMap::new();
    for i in basis.indices() {
        for j in basis.indices() {
            let ma = h.bracket(&m, &h.complex.element(&algebra.basis_vec(i))?)?;
            let mab = h.bracket(&ma, &h.complex.element(&algebra.basis_vec(j))?)?;
            let v = h.complex.lower(&h.complex.arity_zero_value(&mab));
            if !v.is_zero() {
                entries.insert(vec![i, j], v);
            }
        }
    }
    MultilinearMap::new(basis.clone(), basis.clone(), 2, 0, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieSpec;
    use crate::fixtures;
    use crate::scalar::Scalar;

    fn fix_d_hochschild() -> Hochschild {
        Hochschild::new(&fixtures::fix_d(), DEFAULT_MAX_ARITY).unwrap()
    }

    #[test]
    fn graded_base_is_rejected() {
        let c = fixtures::fix_c();
        match Hochschild::new(&c, 3) {
            Err(Error::UnsupportedInput(_)) => {}
            other => panic!("expected unsupported-input, got {other:?}"),
        }
    }

    #[test]
    fn compositions_with_elements() {
        let h = fix_d_hochschild();
        // f ∘ a = f(a), a ∘ f = 0 for f of arity 1
        let mut entries = BTreeMap::new();
        let b = h.algebra().basis().clone();
        entries.insert(vec![0], Vector::basis_vector(b.clone(), 1));
        let f = h.complex().from_map(&MultilinearMap::new(b.clone(), b, 1, 0, entries).unwrap()).unwrap();
        let a = h.element_of("E11").unwrap();
        let fa = h.circ(&f, &a).unwrap();
        assert_eq!(
            h.complex().lower(&h.complex().arity_zero_value(&fa)),
            fixtures::fix_d().vec_of("E12").unwrap()
        );
        assert!(h.circ(&a, &f).unwrap().is_zero());
        // a ∘ b = 0 for algebra elements
        let bb = h.element_of("E12").unwrap();
        assert!(h.circ(&a, &bb).unwrap().is_zero());
        assert!(h.bracket(&a, &bb).unwrap().is_zero());
    }

    #[test]
    fn product_square_vanishes_iff_associative() {
        let h = fix_d_hochschild();
        assert!(h.product_square().unwrap().is_zero());
        let bad = fixtures::fix_d_nonassoc();
        let hb = Hochschild::new(&bad, DEFAULT_MAX_ARITY).unwrap();
        let sq = hb.product_square().unwrap();
        assert!(!sq.is_zero());
        // spec-level consistency: the flag agrees
        assert!(!bad.properties().associative);
        assert!(fixtures::fix_d().properties().associative);
    }

    #[test]
    fn bracket_with_product_gives_commutator() {
        let h = fix_d_hochschild();
        let m = h.product_element().unwrap();
        let a = h.element_of("E11").unwrap();
        let ma = h.bracket(&m, &a).unwrap();
        // [m, E11] is the arity-1 map b -> E11 b - b E11
        let alg = h.algebra();
        let c1 = ma.component(1).unwrap();
        for j in alg.basis().indices() {
            let b = alg.basis_vec(j);
            let expect = alg
                .mul(&alg.vec_of("E11").unwrap(), &b)
                .unwrap()
                .sub(&alg.mul(&b, &alg.vec_of("E11").unwrap()).unwrap())
                .unwrap();
            assert_eq!(h.complex().lower(&c1.value_on(&[j])), expect);
        }
    }

    #[test]
    fn derived_commutator_matches_and_is_lie() {
        let d = fixtures::fix_d();
        let comm = derived_commutator(&d).unwrap();
        // (E11, E12) -> E12
        let v = comm
            .apply(&[&d.vec_of("E11").unwrap(), &d.vec_of("E12").unwrap()])
            .unwrap();
        assert_eq!(v, d.vec_of("E12").unwrap());
        // commutative algebras give the zero bracket
        let a = fixtures::commutative_poly3();
        assert!(derived_commutator(&a).unwrap().is_zero());
        // the output passes Lie validation
        LieSpec::new(d.basis().clone(), comm, 0, false).unwrap();
        // non-associative input is rejected with a witness
        match derived_commutator(&fixtures::fix_d_nonassoc()) {
            Err(Error::HypothesisViolation { condition, .. }) => assert_eq!(condition, "[m,m] = 0"),
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn element_orders() {
        let h = fix_d_hochschild();
        let a = h.element_of("E11").unwrap();
        assert_eq!(h.element_order(&a, 3).unwrap(), Some(0));
        // any nonzero arity-1 map has order exactly 1
        let b = h.algebra().basis().clone();
        let mut entries = BTreeMap::new();
        entries.insert(vec![0], Vector::basis_vector(b.clone(), 1));
        let f = h
            .complex()
            .from_map(&MultilinearMap::new(b.clone(), b, 1, 0, entries).unwrap())
            .unwrap();
        assert_eq!(h.element_order(&f, 3).unwrap(), Some(1));
        // the product has order exactly 2, witnessed by [[m,E11],E12] != 0
        let m = h.product_element().unwrap();
        assert_eq!(h.element_order(&m, 3).unwrap(), Some(2));
    }

    #[test]
    fn pre_lie_and_jacobi_sample() {
        // the associator of circ is graded-symmetric in its last two slots,
        // and the bracket satisfies the graded Jacobi identity; spot-check on
        // small random-ish components
        let h = fix_d_hochschild();
        let alg = h.algebra();
        let b = alg.basis().clone();
        let m = h.product_element().unwrap();
        let mut entries = BTreeMap::new();
        entries.insert(vec![0], Vector::basis_vector(b.clone(), 2));
        entries.insert(vec![1], Vector::basis_vector(b.clone(), 1).scale(&Scalar::from_int(3)));
        let f = h
            .complex()
            .from_map(&MultilinearMap::new(b.clone(), b.clone(), 1, 0, entries).unwrap())
            .unwrap();
        let a = h.element_of("E12").unwrap();
        let triples = [(&m, &f, &a), (&f, &m, &a), (&m, &m, &f)];
        for (x, y, z) in triples {
            let assoc1 = {
                let xy = h.circ(x, y).unwrap();
                let l = h.circ(&xy, z).unwrap();
                let yz = h.circ(y, z).unwrap();
                let r = h.circ(x, &yz).unwrap();
                (l, r)
            };
            let assoc2 = {
                let xz = h.circ(x, z).unwrap();
                let l = h.circ(&xz, y).unwrap();
                let zy = h.circ(z, y).unwrap();
                let r = h.circ(x, &zy).unwrap();
                (l, r)
            };
            let py = y.parity().unwrap().unwrap_or(0);
            let pz = z.parity().unwrap().unwrap_or(0);
            let sgn = sign_pow(py * pz);
            // (x∘y)∘z - x∘(y∘z) = ±[(x∘z)∘y - x∘(z∘y)]
            let lhs = sub_elements(&h, &assoc1.0, &assoc1.1);
            let rhs = scale_element(&sub_elements(&h, &assoc2.0, &assoc2.1), &sgn);
            assert!(sub_elements(&h, &lhs, &rhs).is_zero());
            // graded Jacobi in left-Leibniz form
            let px = x.parity().unwrap().unwrap_or(0);
            let jl = h.bracket(x, &h.bracket(y, z).unwrap()).unwrap();
            let j1 = h.bracket(&h.bracket(x, y).unwrap(), z).unwrap();
            let j2 = scale_element(&h.bracket(y, &h.bracket(x, z).unwrap()).unwrap(), &sign_pow(px * py));
            let rhs = add_elements(&h, &j1, &j2);
            assert!(sub_elements(&h, &jl, &rhs).is_zero());
        }
    }

    fn sub_elements(h: &Hochschild, a: &HochschildElement, b: &HochschildElement) -> HochschildElement {
        add_elements(h, a, &scale_element(b, &-Scalar::one()))
    }

    fn add_elements(_h: &Hochschild, a: &HochschildElement, b: &HochschildElement) -> HochschildElement {
        let mut acc = a.components().clone();
        for (&n, m) in b.components() {
            match acc.remove(&n) {
                None => {
                    acc.insert(n, m.clone());
                }
                Some(cur) => {
                    let sum = cur.add(m).unwrap();
                    if !sum.is_zero() {
                        acc.insert(n, sum);
                    }
                }
            }
        }
        HochschildElement { components: acc }
    }

    fn scale_element(a: &HochschildElement, c: &Scalar) -> HochschildElement {
        HochschildElement {
            components: a
                .components()
                .iter()
                .map(|(&n, m)| (n, m.scale(c)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }
}
