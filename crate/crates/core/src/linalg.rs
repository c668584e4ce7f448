//! Exact linear algebra: fraction-free row reduction, kernels, images, and
//! span membership. The elimination core works on integers (denominators are
//! cleared row by row) with exact divisions in the Bareiss style; pivots are
//! normalized rationally only at the end.

use crate::basis::Vector;
use crate::error::{Error, Result};
use crate::multilinear::MultilinearMap;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct RowReduced {
    /// Fully reduced rows (pivot entries 1, zeros above and below pivots).
    pub rows: Vec<Vec<Scalar>>,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl RowReduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains(&col)
    }
}

fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in row {
        lcm = lcm.lcm(c.denom());
    }
    row.iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Fraction-free reduced row echelon form.
pub fn rref(matrix: &[Vec<Scalar>]) -> RowReduced {
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigInt>> = matrix.iter().map(|r| clear_denominators(r)).collect();
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..cols {
        // integer pivoting: first nonzero entry in this column at or below `row`
        let Some(p) = (row..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let piv = m[row][col].clone();
        // every row below is transformed, including those with a zero entry
        // in the pivot column (they are rescaled by piv/prev); this is what
        // keeps the divisions exact
        for i in (row + 1)..nrows {
            let factor = m[i][col].clone();
            for j in 0..cols {
                let v = &piv * &m[i][j] - &factor * &m[row][j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero(), "fraction-free elimination division must be exact");
                m[i][j] = q;
            }
        }
        prev = piv;
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // normalize pivot rows rationally and eliminate upwards
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(pivots.len());
    for (r, &pc) in pivots.iter().enumerate() {
        let piv = m[r][pc].clone();
        let row: Vec<Scalar> = m[r]
            .iter()
            .map(|v| Scalar::new(v.clone(), piv.clone()).expect("nonzero pivot"))
            .collect();
        rows.push(row);
    }
    for r in (0..rows.len()).rev() {
        let pc = pivots[r];
        for above in 0..r {
            let factor = rows[above][pc].clone();
            if factor.is_zero() {
                continue;
            }
            let lower = rows[r].clone();
            for j in 0..cols {
                let delta = &factor * &lower[j];
                rows[above][j] = &rows[above][j] - &delta;
            }
        }
    }
    RowReduced { rows, pivots, cols }
}

/// The matrix of an endomorphism: rows indexed by target basis, columns by
/// source basis.
pub fn operator_matrix(f: &MultilinearMap) -> Result<Vec<Vec<Scalar>>> {
    if f.arity() != 1 {
        return Err(Error::invalid("operator_matrix requires an arity-1 map"));
    }
    let n = f.target().len();
    let m = f.source().len();
    let mut rows = vec![vec![Scalar::zero(); m]; n];
    for col in 0..m {
        let v = f.value_on(&[col]);
        for (&out, c) in v.coords() {
            rows[out][col] = c.clone();
        }
    }
    Ok(rows)
}

/// Exact bases for the kernel and image of an endomorphism. Kernel vectors
/// come from the free columns of the reduced form (deterministic, in basis
/// order); image vectors are the values of the map on pivot columns.
pub fn kernel_image(f: &MultilinearMap) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let mat = operator_matrix(f)?;
    let red = rref(&mat);
    let src = f.source().clone();
    let mut kernel = Vec::new();
    for col in 0..src.len() {
        if red.is_pivot(col) {
            continue;
        }
        let mut coords = BTreeMap::new();
        coords.insert(col, Scalar::one());
        for (r, &pc) in red.pivots.iter().enumerate() {
            let c = red.rows[r][col].clone();
            if !c.is_zero() {
                coords.insert(pc, -c);
            }
        }
        kernel.push(Vector::from_coords(src.clone(), coords));
    }
    let image = red
        .pivots
        .iter()
        .map(|&col| f.value_on(&[col]))
        .collect();
    Ok((kernel, image))
}

/// Solves `sum_i x_i columns[i] = target` exactly. Returns `None` when the
/// target is outside the span. Free coordinates are set to zero.
pub fn solve_in_span(columns: &[Vector], target: &Vector) -> Result<Option<Vec<Scalar>>> {
    let Some(first) = columns.first() else {
        return Ok(if target.is_zero() { Some(Vec::new()) } else { None });
    };
    let basis = first.basis().clone();
    let n = basis.len();
    let k = columns.len();
    let mut rows = vec![vec![Scalar::zero(); k + 1]; n];
    for (j, col) in columns.iter().enumerate() {
        for (&i, c) in col.coords() {
            rows[i][j] = c.clone();
        }
    }
    for (&i, c) in target.coords() {
        rows[i][k] = c.clone();
    }
    let red = rref(&rows);
    if red.is_pivot(k) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); k];
    for (r, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.rows[r][k].clone();
    }
    Ok(Some(x))
}

pub fn in_span(columns: &[Vector], target: &Vector) -> Result<bool> {
    Ok(solve_in_span(columns, target)?.is_some())
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[Vector]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let n = first.basis().len();
    let mut rows = vec![vec![Scalar::zero(); vectors.len()]; n];
    for (j, v) in vectors.iter().enumerate() {
        for (&i, c) in v.coords() {
            rows[i][j] = c.clone();
        }
    }
    rref(&rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::GradedBasis;
    use std::sync::Arc;

    fn b3() -> Arc<GradedBasis> {
        GradedBasis::new(vec![("a".into(), 0), ("b".into(), 0), ("c".into(), 0)]).unwrap()
    }

    #[test]
    fn kernel_image_of_zero_and_identity() {
        let b = b3();
        let zero = MultilinearMap::zero(b.clone(), b.clone(), 1, 0);
        let (k, i) = kernel_image(&zero).unwrap();
        assert_eq!((k.len(), i.len()), (3, 0));
        let id = MultilinearMap::identity(b);
        let (k, i) = kernel_image(&id).unwrap();
        assert_eq!((k.len(), i.len()), (0, 3));
    }

    #[test]
    fn rref_with_fractions() {
        let half: Scalar = "1/2".parse().unwrap();
        let third: Scalar = "1/3".parse().unwrap();
        let rows = vec![
            vec![half.clone(), Scalar::one()],
            vec![third.clone(), &third * &Scalar::from_int(2)],
        ];
        // second row is 2/3 * first: rank 1
        let red = rref(&rows);
        assert_eq!(red.rank(), 1);
        assert_eq!(red.rows[0][1], Scalar::from_int(2));
    }

    #[test]
    fn solve_membership() {
        let b = b3();
        let va = Vector::from_label(b.clone(), "a").unwrap();
        let vb = Vector::from_label(b.clone(), "b").unwrap();
        let target = va.add(&vb.scale(&Scalar::from_int(3))).unwrap();
        let x = solve_in_span(&[va.clone(), vb.clone()], &target).unwrap().unwrap();
        assert_eq!(x, vec![Scalar::one(), Scalar::from_int(3)]);
        let vc = Vector::from_label(b, "c").unwrap();
        assert!(solve_in_span(&[va, vb], &vc).unwrap().is_none());
    }
}
