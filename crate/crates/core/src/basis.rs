//! Graded bases and sparse vectors over them.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// A finite ordered basis with an integer degree per element. All signs in the
/// crate are computed from degree parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    labels: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new(entries: Vec<(String, i64)>) -> Result<Arc<Self>> {
        if entries.is_empty() {
            return Err(Error::invalid("basis must be non-empty"));
        }
        let mut index = HashMap::new();
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for (label, degree) in entries {
            if index.insert(label.clone(), labels.len()).is_some() {
                return Err(Error::invalid(format!("duplicate basis label `{label}`")));
            }
            labels.push(label);
            degrees.push(degree);
        }
        Ok(Arc::new(GradedBasis { labels, degrees, index }))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// The same labels with every degree shifted by `shift` (used for suspension).
    pub fn shifted(&self, shift: i64) -> Arc<GradedBasis> {
        GradedBasis::new(
            self.labels
                .iter()
                .zip(&self.degrees)
                .map(|(l, d)| (l.clone(), d + shift))
                .collect(),
        )
        .expect("shifting a valid basis cannot fail")
    }
}

pub fn same_basis(a: &Arc<GradedBasis>, b: &Arc<GradedBasis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A sparse vector over a graded basis. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    basis: Arc<GradedBasis>,
    coords: BTreeMap<usize, Scalar>,
}

impl Vector {
    pub fn zero(basis: Arc<GradedBasis>) -> Self {
        Vector { basis, coords: BTreeMap::new() }
    }

    pub fn basis_vector(basis: Arc<GradedBasis>, index: usize) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(index, Scalar::one());
        Vector { basis, coords }
    }

    pub fn from_label(basis: Arc<GradedBasis>, label: &str) -> Result<Self> {
        let i = basis.index_of(label)?;
        Ok(Vector::basis_vector(basis, i))
    }

    pub fn from_coords(basis: Arc<GradedBasis>, coords: BTreeMap<usize, Scalar>) -> Self {
        let coords = coords.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Vector { basis, coords }
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &BTreeMap<usize, Scalar> {
        &self.coords
    }

    pub fn coeff(&self, index: usize) -> Scalar {
        self.coords.get(&index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn set(&mut self, index: usize, c: Scalar) {
        if c.is_zero() {
            self.coords.remove(&index);
        } else {
            self.coords.insert(index, c);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Vector, factor: &Scalar) {
        debug_assert!(same_basis(&self.basis, &other.basis));
        if factor.is_zero() {
            return;
        }
        for (&i, c) in &other.coords {
            let new = self.coeff(i) + c * factor;
            self.set(i, new);
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(Error::BasisMismatch("vector addition".into()));
        }
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::one());
        Ok(out)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(Error::BasisMismatch("vector subtraction".into()));
        }
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Scalar::one());
        Ok(out)
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        if factor.is_zero() {
            return Vector::zero(self.basis.clone());
        }
        Vector {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|(&i, c)| (i, c * factor)).collect(),
        }
    }

    /// The common degree of all nonzero components. `Ok(None)` for the zero
    /// vector (which is homogeneous of every degree); an error if mixed.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for &i in self.coords.keys() {
            let d = self.basis.degree(i);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => {
                    return Err(Error::invalid(format!(
                        "vector {self} is not homogeneous (degrees {existing} and {d})"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, c) in &self.coords {
            if first {
                write!(f, "{}·{}", c, self.basis.label(i))?;
                first = false;
            } else {
                write!(f, " + {}·{}", c, self.basis.label(i))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> Arc<GradedBasis> {
        GradedBasis::new(vec![("1".into(), 0), ("x".into(), 0), ("th".into(), 1)]).unwrap()
    }

    #[test]
    fn rejects_duplicates_and_unknown_labels() {
        assert!(GradedBasis::new(vec![("a".into(), 0), ("a".into(), 1)]).is_err());
        assert!(GradedBasis::new(vec![]).is_err());
        let b = basis();
        assert!(Vector::from_label(b, "nope").is_err());
    }

    #[test]
    fn sparse_arithmetic_drops_zeros() {
        let b = basis();
        let x = Vector::from_label(b.clone(), "x").unwrap();
        let sum = x.add(&x.scale(&-Scalar::one())).unwrap();
        assert!(sum.is_zero());
        assert!(sum.coords().is_empty());
    }

    #[test]
    fn homogeneity() {
        let b = basis();
        let x = Vector::from_label(b.clone(), "x").unwrap();
        let th = Vector::from_label(b.clone(), "th").unwrap();
        assert_eq!(x.homogeneous_degree().unwrap(), Some(0));
        assert_eq!(Vector::zero(b).homogeneous_degree().unwrap(), None);
        assert!(x.add(&th).unwrap().homogeneous_degree().is_err());
    }
}
