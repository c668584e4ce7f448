//! Permutations, unshuffle enumeration, and Koszul signs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use itertools::Itertools;

/// A permutation of `{1..r}`, stored as the list of images `sigma(1), ..., sigma(r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Permutation {
            images: (1..=r).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let r = images.len();
        let mut seen = vec![false; r + 1];
        for &i in &images {
            if i == 0 || i > r || seen[i] {
                return Err(Error::invalid(format!(
                    "images {images:?} are not a bijection on 1..{r}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `sigma(i)` for `1 <= i <= r`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` after `other`: `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::invalid("composing permutations of different sizes"));
        }
        Ok(Permutation {
            images: (1..=self.len()).map(|i| self.apply(other.apply(i))).collect(),
        })
    }
}

/// All `(k, r-k)`-unshuffles: permutations of `{1..r}` ascending on the first
/// `k` and on the last `r-k` positions, in lexicographic order of the first
/// block. There are exactly `C(r, k)` of them.
pub fn unshuffles(k: usize, r: usize) -> Result<Vec<Permutation>> {
    if k > r {
        return Err(Error::invalid(format!("unshuffles({k}, {r}) requires 0 <= k <= r")));
    }
    let mut out = Vec::new();
    for first in (1..=r).combinations(k) {
        let mut images = first.clone();
        images.extend((1..=r).filter(|i| !first.contains(i)));
        out.push(Permutation { images });
    }
    Ok(out)
}

/// The Koszul sign of `sigma` acting on homogeneous elements of the given
/// degrees: one factor `(-1)^{|a_{sigma(i)}||a_{sigma(j)}|}` for every pair
/// `i < j` whose entries cross, i.e. `sigma(i) > sigma(j)`.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i64]) -> Result<Scalar> {
    let r = sigma.len();
    if degrees.len() != r {
        return Err(Error::invalid(format!(
            "koszul_sign: permutation size {r} does not match {} degrees",
            degrees.len()
        )));
    }
    let mut negative = false;
    for i in 1..=r {
        for j in (i + 1)..=r {
            let (si, sj) = (sigma.apply(i), sigma.apply(j));
            if si > sj
                && degrees[si - 1].rem_euclid(2) == 1
                && degrees[sj - 1].rem_euclid(2) == 1
            {
                negative = !negative;
            }
        }
    }
    Ok(if negative { -Scalar::one() } else { Scalar::one() })
}

/// Degrees permuted by `sigma`: entry `i` of the result is `degrees[sigma(i)-1]`.
pub fn permute_degrees(sigma: &Permutation, degrees: &[i64]) -> Vec<i64> {
    (1..=sigma.len()).map(|i| degrees[sigma.apply(i) - 1]).collect()
}
