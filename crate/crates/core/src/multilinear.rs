//! Sparse multilinear maps given by structure constants over a graded basis.

use crate::basis::{same_basis, GradedBasis, Vector};
use crate::error::{Error, Result};
use crate::scalar::{sign_pow, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// An arity-`n` multilinear map between graded bases, stored sparsely as
/// `input tuple -> output vector`. Arity 0 encodes a single vector, arity 1 a
/// linear map. Maps are required homogeneous: every nonzero output component
/// has degree equal to the sum of the input degrees plus the map degree.
#[derive(Debug, Clone)]
pub struct MultilinearMap {
    source: Arc<GradedBasis>,
    target: Arc<GradedBasis>,
    arity: usize,
    degree: i64,
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl PartialEq for MultilinearMap {
    fn eq(&self, other: &Self) -> bool {
        // zero maps are equal regardless of their declared degree
        self.arity == other.arity
            && same_basis(&self.source, &other.source)
            && same_basis(&self.target, &other.target)
            && self.entries == other.entries
            && (self.degree == other.degree || self.entries.is_empty())
    }
}

impl Eq for MultilinearMap {}

impl MultilinearMap {
    pub fn new(
        source: Arc<GradedBasis>,
        target: Arc<GradedBasis>,
        arity: usize,
        degree: i64,
        entries: BTreeMap<Vec<usize>, Vector>,
    ) -> Result<Self> {
        let entries: BTreeMap<Vec<usize>, Vector> =
            entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for (tuple, value) in &entries {
            if tuple.len() != arity {
                return Err(Error::invalid(format!(
                    "entry tuple {tuple:?} has length {} but the map has arity {arity}",
                    tuple.len()
                )));
            }
            if !same_basis(value.basis(), &target) {
                return Err(Error::BasisMismatch("map entry target".into()));
            }
            let in_deg: i64 = tuple.iter().map(|&i| source.degree(i)).sum();
            for (&out, _) in value.coords() {
                let got = target.degree(out);
                if got != in_deg + degree {
                    return Err(Error::invalid(format!(
                        "map is not homogeneous of degree {degree}: inputs {tuple:?} \
                         (degree {in_deg}) produce `{}` of degree {got}",
                        target.label(out)
                    )));
                }
            }
        }
        Ok(MultilinearMap { source, target, arity, degree, entries })
    }

    pub fn zero(source: Arc<GradedBasis>, target: Arc<GradedBasis>, arity: usize, degree: i64) -> Self {
        MultilinearMap { source, target, arity, degree, entries: BTreeMap::new() }
    }

    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        let entries = basis
            .indices()
            .map(|i| (vec![i], Vector::basis_vector(basis.clone(), i)))
            .collect();
        MultilinearMap { source: basis.clone(), target: basis, arity: 1, degree: 0, entries }
    }

    /// Wraps a vector as an arity-0 map.
    pub fn constant(value: Vector) -> Result<Self> {
        let degree = value.homogeneous_degree()?.unwrap_or(0);
        let basis = value.basis().clone();
        let mut entries = BTreeMap::new();
        if !value.is_zero() {
            entries.insert(Vec::new(), value);
        }
        Ok(MultilinearMap { source: basis.clone(), target: basis, arity: 0, degree, entries })
    }

    pub fn source(&self) -> &Arc<GradedBasis> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedBasis> {
        &self.target
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn parity(&self) -> i64 {
        self.degree.rem_euclid(2)
    }

    /// Zero maps are homogeneous of every degree.
    pub fn has_parity(&self, parity: i64) -> bool {
        self.is_zero() || self.parity() == parity.rem_euclid(2)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.entries.iter()
    }

    pub fn value_on(&self, tuple: &[usize]) -> Vector {
        debug_assert_eq!(tuple.len(), self.arity);
        self.entries
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| Vector::zero(self.target.clone()))
    }

    /// Borrowed entry lookup (no clone, no allocation); `None` means zero.
    pub fn value_ref(&self, tuple: &[usize]) -> Option<&Vector> {
        self.entries.get(tuple)
    }

    /// Evaluates on general vectors by multilinear expansion.
    pub fn apply(&self, args: &[&Vector]) -> Result<Vector> {
        if args.len() != self.arity {
            return Err(Error::invalid(format!(
                "map of arity {} applied to {} arguments",
                self.arity,
                args.len()
            )));
        }
        for a in args {
            if !same_basis(a.basis(), &self.source) {
                return Err(Error::BasisMismatch("map application".into()));
            }
        }
        let mut out = Vector::zero(self.target.clone());
        let mut tuple = vec![0usize; self.arity];
        self.expand(args, 0, &mut tuple, &Scalar::one(), &mut out);
        Ok(out)
    }

    fn expand(&self, args: &[&Vector], pos: usize, tuple: &mut Vec<usize>, coeff: &Scalar, out: &mut Vector) {
        if pos == self.arity {
            if let Some(v) = self.entries.get(tuple.as_slice()) {
                out.add_assign_scaled(v, coeff);
            }
            return;
        }
        for (&i, c) in args[pos].coords() {
            tuple[pos] = i;
            let next = coeff * c;
            self.expand(args, pos + 1, tuple, &next, out);
        }
    }

    pub fn apply_one(&self, arg: &Vector) -> Result<Vector> {
        self.apply(&[arg])
    }

    pub fn add(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        self.combine(other, &-Scalar::one())
    }

    fn combine(&self, other: &MultilinearMap, factor: &Scalar) -> Result<MultilinearMap> {
        if self.arity != other.arity
            || !same_basis(&self.source, &other.source)
            || !same_basis(&self.target, &other.target)
        {
            return Err(Error::BasisMismatch("map addition".into()));
        }
        if !self.is_zero() && !other.is_zero() && self.degree != other.degree {
            return Err(Error::invalid(format!(
                "adding maps of different degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut entries = self.entries.clone();
        for (tuple, v) in &other.entries {
            let mut cur = entries
                .remove(tuple)
                .unwrap_or_else(|| Vector::zero(self.target.clone()));
            cur.add_assign_scaled(v, factor);
            if !cur.is_zero() {
                entries.insert(tuple.clone(), cur);
            }
        }
        Ok(MultilinearMap { source: self.source.clone(), target: self.target.clone(), arity: self.arity, degree, entries })
    }

    pub fn scale(&self, factor: &Scalar) -> MultilinearMap {
        if factor.is_zero() {
            return MultilinearMap::zero(self.source.clone(), self.target.clone(), self.arity, self.degree);
        }
        MultilinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            arity: self.arity,
            degree: self.degree,
            entries: self.entries.iter().map(|(t, v)| (t.clone(), v.scale(factor))).collect(),
        }
    }

    /// Composition of arity-1 maps: `self` after `other`.
    pub fn compose(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        if self.arity != 1 || other.arity != 1 {
            return Err(Error::invalid("compose requires arity-1 maps"));
        }
        if !same_basis(&other.target, &self.source) {
            return Err(Error::BasisMismatch("map composition".into()));
        }
        let mut entries = BTreeMap::new();
        for (tuple, mid) in &other.entries {
            let v = self.apply(&[mid])?;
            if !v.is_zero() {
                entries.insert(tuple.clone(), v);
            }
        }
        Ok(MultilinearMap {
            source: other.source.clone(),
            target: self.target.clone(),
            arity: 1,
            degree: self.degree + other.degree,
            entries,
        })
    }
}

/// The graded commutator `f∘g - (-1)^{|f||g|} g∘f` of two endomorphisms of the
/// same basis.
pub fn graded_commutator(f: &MultilinearMap, g: &MultilinearMap) -> Result<MultilinearMap> {
    if f.arity() != 1 || g.arity() != 1 {
        return Err(Error::invalid("graded_commutator requires arity-1 maps"));
    }
    if !same_basis(f.source(), g.source())
        || !same_basis(f.source(), f.target())
        || !same_basis(g.source(), g.target())
    {
        return Err(Error::BasisMismatch(
            "graded_commutator requires endomorphisms of one basis".into(),
        ));
    }
    let fg = f.compose(g)?;
    let gf = g.compose(f)?;
    fg.sub(&gf.scale(&sign_pow(f.degree() * g.degree())))
}

impl fmt::Display for MultilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (tuple, v) in &self.entries {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let inputs: Vec<&str> = tuple.iter().map(|&i| self.source.label(i)).collect();
            write!(f, "({}) -> {}", inputs.join(", "), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::GradedBasis;

    fn lam1() -> Arc<GradedBasis> {
        GradedBasis::new(vec![("1".into(), 0), ("th".into(), 1)]).unwrap()
    }

    fn dth(b: &Arc<GradedBasis>) -> MultilinearMap {
        let mut entries = BTreeMap::new();
        entries.insert(vec![1], Vector::basis_vector(b.clone(), 0));
        MultilinearMap::new(b.clone(), b.clone(), 1, -1, entries).unwrap()
    }

    fn lth(b: &Arc<GradedBasis>) -> MultilinearMap {
        let mut entries = BTreeMap::new();
        entries.insert(vec![0], Vector::basis_vector(b.clone(), 1));
        MultilinearMap::new(b.clone(), b.clone(), 1, 1, entries).unwrap()
    }

    #[test]
    fn homogeneity_is_enforced() {
        let b = lam1();
        let mut entries = BTreeMap::new();
        entries.insert(vec![0], Vector::basis_vector(b.clone(), 1));
        assert!(MultilinearMap::new(b.clone(), b.clone(), 1, 0, entries).is_err());
    }

    #[test]
    fn odd_odd_commutator_is_anticommutator() {
        // [d/dth, l_th] = d∘l + l∘d = identity on the exterior algebra in one
        // variable.
        let b = lam1();
        let c = graded_commutator(&dth(&b), &lth(&b)).unwrap();
        let id = MultilinearMap::identity(b);
        assert_eq!(c, id);
    }

    #[test]
    fn self_commutator_of_odd_map_is_twice_square() {
        let b = lam1();
        let d = dth(&b);
        let c = graded_commutator(&d, &d).unwrap();
        let sq = d.compose(&d).unwrap().scale(&Scalar::from_int(2));
        assert_eq!(c.is_zero(), sq.is_zero());
        assert!(c.is_zero());
    }

    #[test]
    fn even_diagonal_maps_commute() {
        let b = lam1();
        let mk = |c0: i64, c1: i64| {
            let mut entries = BTreeMap::new();
            entries.insert(vec![0], Vector::basis_vector(b.clone(), 0).scale(&Scalar::from_int(c0)));
            entries.insert(vec![1], Vector::basis_vector(b.clone(), 1).scale(&Scalar::from_int(c1)));
            MultilinearMap::new(b.clone(), b.clone(), 1, 0, entries).unwrap()
        };
        let c = graded_commutator(&mk(2, 3), &mk(-1, 5)).unwrap();
        assert!(c.is_zero());
    }
}
