//! The endomorphism Lie algebra of a unital algebra, presented on the basis
//! adapted to the decomposition `End(A) = l_A (+) Ann(1)`: left
//! multiplications by basis elements, then matrix units whose input is not
//! the unit.

use crate::algebra::{left_mult, AlgebraSpec, LieSpec};
use crate::basis::{GradedBasis, Vector};
use crate::error::{Error, Result};
use crate::multilinear::{graded_commutator, MultilinearMap};
use std::collections::BTreeMap;
use std::sync::Arc;

/// `End(A)` with its ambient commutator bracket and the canonical projection
/// data for the split `l_A (+) Ann(1)`.
#[derive(Debug, Clone)]
pub struct EndLie {
    algebra: AlgebraSpec,
    lie: LieSpec,
    /// basis operators, in the order of the ambient basis
    ops: Vec<MultilinearMap>,
    l0_len: usize,
}

fn l_label(label: &str) -> String {
    format!("l[{label}]")
}

fn e_label(out: &str, inp: &str) -> String {
    format!("E[{out},{inp}]")
}

fn ambient_coords(
    algebra: &AlgebraSpec,
    ambient: &Arc<GradedBasis>,
    op: &MultilinearMap,
) -> Result<Vector> {
    let unit = op_unit(algebra)?;
    let basis = algebra.basis();
    let one = algebra.unit_vector()?;
    let t1 = op.apply(&[&one])?;
    let mut coords = BTreeMap::new();
    for (&i, c) in t1.coords() {
        coords.insert(i, c.clone());
    }
    // annihilator part: T - l_{T(1)}
    let lpart = left_mult(algebra, &t1)?;
    let ann = op.sub(&lpart)?;
    for inp in basis.indices() {
        if inp == unit {
            continue;
        }
        let v = ann.value_on(&[inp]);
        for (&out, c) in v.coords() {
            let idx = ambient.index_of(&e_label(basis.label(out), basis.label(inp)))?;
            coords.insert(idx, c.clone());
        }
    }
    Ok(Vector::from_coords(ambient.clone(), coords))
}

fn op_unit(algebra: &AlgebraSpec) -> Result<usize> {
    algebra.unit_index().ok_or(Error::MissingUnit)
}

impl EndLie {
    /// Builds `End(A)` for a unital algebra. Jacobi validation of the ambient
    /// bracket is optional because it is cubic in `dim(A)^2` and the
    /// commutator bracket satisfies it identically.
    pub fn new(algebra: &AlgebraSpec, validate: bool) -> Result<Self> {
        let unit = algebra.unit_index().ok_or(Error::MissingUnit)?;
        let basis = algebra.basis();
        let n = basis.len();
        let mut entries = Vec::new();
        let mut ops = Vec::new();
        for i in 0..n {
            entries.push((l_label(basis.label(i)), basis.degree(i)));
            ops.push(left_mult(algebra, &algebra.basis_vec(i))?);
        }
        for out in 0..n {
            for inp in 0..n {
                if inp == unit {
                    continue;
                }
                entries.push((
                    e_label(basis.label(out), basis.label(inp)),
                    basis.degree(out) - basis.degree(inp),
                ));
                let mut t = BTreeMap::new();
                t.insert(vec![inp], algebra.basis_vec(out));
                ops.push(MultilinearMap::new(
                    basis.clone(),
                    basis.clone(),
                    1,
                    basis.degree(out) - basis.degree(inp),
                    t,
                )?);
            }
        }
        let ambient = GradedBasis::new(entries)?;
        // bracket structure constants from commutators of the basis operators
        let mut bracket_entries = BTreeMap::new();
        for i in 0..ops.len() {
            for j in 0..ops.len() {
                let c = graded_commutator(&ops[i], &ops[j])?;
                let v = ambient_coords(algebra, &ambient, &c)?;
                if !v.is_zero() {
                    bracket_entries.insert(vec![i, j], v);
                }
            }
        }
        let bracket = MultilinearMap::new(ambient.clone(), ambient.clone(), 2, 0, bracket_entries)?;
        let lie = if validate {
            LieSpec::new(ambient, bracket, 0, false)?
        } else {
            LieSpec::new_unchecked(ambient, bracket, 0)
        };
        Ok(EndLie { algebra: algebra.clone(), lie, ops, l0_len: n })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn lie(&self) -> &LieSpec {
        &self.lie
    }

    pub fn ambient_basis(&self) -> &Arc<GradedBasis> {
        self.lie.basis()
    }

    /// Labels of the abelian part `l_A`, in algebra-basis order.
    pub fn l0_labels(&self) -> Vec<String> {
        (0..self.l0_len)
            .map(|i| self.ambient_basis().label(i).to_string())
            .collect()
    }

    pub fn l1_labels(&self) -> Vec<String> {
        (self.l0_len..self.ambient_basis().len())
            .map(|i| self.ambient_basis().label(i).to_string())
            .collect()
    }

    /// Coordinates of an endomorphism in the adapted ambient basis.
    pub fn to_ambient(&self, op: &MultilinearMap) -> Result<Vector> {
        ambient_coords(&self.algebra, self.ambient_basis(), op)
    }

    /// Reconstructs the endomorphism from ambient coordinates.
    pub fn from_ambient(&self, v: &Vector) -> Result<MultilinearMap> {
        let mut out = MultilinearMap::zero(
            self.algebra.basis().clone(),
            self.algebra.basis().clone(),
            1,
            v.homogeneous_degree()?.unwrap_or(0),
        );
        for (&i, c) in v.coords() {
            out = out.add(&self.ops[i].scale(c))?;
        }
        Ok(out)
    }

    /// The canonical projection `P(T) = l_{T(1)}` in ambient coordinates.
    pub fn projection(&self) -> Result<MultilinearMap> {
        let ambient = self.ambient_basis().clone();
        let mut entries = BTreeMap::new();
        for i in 0..self.l0_len {
            entries.insert(vec![i], Vector::basis_vector(ambient.clone(), i));
        }
        MultilinearMap::new(ambient.clone(), ambient, 1, 0, entries)
    }

    /// Sends an algebra element to its left multiplication operator's ambient
    /// coordinates (the `l_A` embedding).
    pub fn embed(&self, a: &Vector) -> Result<Vector> {
        let mut coords = BTreeMap::new();
        for (&i, c) in a.coords() {
            coords.insert(i, c.clone());
        }
        Ok(Vector::from_coords(self.ambient_basis().clone(), coords))
    }

    /// Reads an `l_A` ambient vector back as an algebra element; fails when
    /// annihilator coordinates are present.
    pub fn project_to_algebra(&self, v: &Vector) -> Result<Vector> {
        let mut coords = BTreeMap::new();
        for (&i, c) in v.coords() {
            if i >= self.l0_len {
                return Err(Error::invalid(format!(
                    "ambient vector has a component outside l_A: {}",
                    self.ambient_basis().label(i)
                )));
            }
            coords.insert(i, c.clone());
        }
        Ok(Vector::from_coords(self.algebra.basis().clone(), coords))
    }

    /// `P` applied in ambient coordinates, landing in the algebra.
    pub fn p_value(&self, v: &Vector) -> Vector {
        let mut coords = BTreeMap::new();
        for (&i, c) in v.coords() {
            if i < self.l0_len {
                coords.insert(i, c.clone());
            }
        }
        Vector::from_coords(self.algebra.basis().clone(), coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::sign_pow;

    #[test]
    fn roundtrip_and_bracket() {
        let b = fixtures::fix_b();
        let end = EndLie::new(&b, false).unwrap();
        assert_eq!(end.ambient_basis().len(), 16 - 4 + 4);
        let d1 = b.operator("D1").unwrap();
        let v = end.to_ambient(d1).unwrap();
        let back = end.from_ambient(&v).unwrap();
        assert_eq!(&back, d1);
        // ambient bracket coordinates match operator commutators
        let lt1 = left_mult(&b, &b.vec_of("t1").unwrap()).unwrap();
        let w = end.to_ambient(&lt1).unwrap();
        let br = end.lie().bracket_of(&v, &w).unwrap();
        let expect = end
            .to_ambient(&graded_commutator(d1, &lt1).unwrap())
            .unwrap();
        assert_eq!(br, expect);
    }

    #[test]
    fn small_end_lie_passes_jacobi_validation() {
        // 1-dimensional even algebra: End is 1-dimensional abelian
        let q = fixtures::scalar_field();
        let end = EndLie::new(&q, true).unwrap();
        assert_eq!(end.ambient_basis().len(), 1);
        // 2-dimensional: full validation of a 4-dimensional gl_2
        let b = fixtures::grassmann(1);
        let end = EndLie::new(&b, true).unwrap();
        assert_eq!(end.ambient_basis().len(), 4);
    }

    #[test]
    fn projection_is_idempotent_with_kernel_ann() {
        let b = fixtures::fix_b();
        let end = EndLie::new(&b, false).unwrap();
        let p = end.projection().unwrap();
        let pp = p.compose(&p).unwrap();
        assert_eq!(pp, p);
        let d1 = b.operator("D1").unwrap();
        // D1 annihilates the unit, so P kills it
        let v = end.to_ambient(d1).unwrap();
        assert!(p.apply(&[&v]).unwrap().is_zero());
    }

    #[test]
    fn l0_is_abelian() {
        let b = fixtures::fix_b();
        let end = EndLie::new(&b, false).unwrap();
        let n = b.basis().len();
        for i in 0..n {
            for j in 0..n {
                let vi = Vector::basis_vector(end.ambient_basis().clone(), i);
                let vj = Vector::basis_vector(end.ambient_basis().clone(), j);
                assert!(end.lie().bracket_of(&vi, &vj).unwrap().is_zero());
            }
        }
        // sanity: the ambient bracket is the graded commutator, so
        // antisymmetry holds in the 0-shifted convention
        let d1 = end.to_ambient(b.operator("D1").unwrap()).unwrap();
        let l = end.embed(&b.vec_of("t1").unwrap()).unwrap();
        let ab = end.lie().bracket_of(&d1, &l).unwrap();
        let ba = end.lie().bracket_of(&l, &d1).unwrap();
        assert_eq!(ab, ba.scale(&-sign_pow(1 * 1)));
    }
}
