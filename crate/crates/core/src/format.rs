//! The JSON algebra file format: exact rationals as strings, omitted products
//! default to zero, canonical ordering on write so that load/serialize/load
//! round-trips are identity.

use crate::algebra::{AlgebraSpec, LieSpec};
use crate::basis::{GradedBasis, Vector};
use crate::error::{Error, Result};
use crate::multilinear::MultilinearMap;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoeffEntry {
    pub basis: String,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<CoeffEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OperatorEntry {
    pub from: String,
    pub to: Vec<CoeffEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LieBlock {
    pub bracket: Vec<ProductEntry>,
    pub degree: i64,
}

/// The on-disk document shape.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    pub basis: Vec<String>,
    pub degrees: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<OperatorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lie: Option<LieBlock>,
}

fn vector_from_entries(basis: &Arc<GradedBasis>, entries: &[CoeffEntry]) -> Result<Vector> {
    let mut v = Vector::zero(basis.clone());
    for e in entries {
        let i = basis.index_of(&e.basis)?;
        let c: Scalar = e.coeff.parse()?;
        let cur = v.coeff(i) + c;
        v.set(i, cur);
    }
    Ok(v)
}

fn entries_of_vector(v: &Vector) -> Vec<CoeffEntry> {
    v.coords()
        .iter()
        .map(|(&i, c)| CoeffEntry { basis: v.basis().label(i).to_string(), coeff: c.to_string() })
        .collect()
}

fn infer_degree(basis: &Arc<GradedBasis>, entries: &BTreeMap<Vec<usize>, Vector>, arity: usize) -> Result<i64> {
    let mut degree = None;
    for (tuple, v) in entries {
        let in_deg: i64 = tuple.iter().map(|&i| basis.degree(i)).sum();
        for (&out, _) in v.coords() {
            let d = basis.degree(out) - in_deg;
            match degree {
                None => degree = Some(d),
                Some(existing) if existing != d => {
                    return Err(Error::MalformedInput(format!(
                        "inhomogeneous arity-{arity} map: degrees {existing} and {d}"
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(degree.unwrap_or(if arity == 1 { -1 } else { 0 }))
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<AlgebraFile> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("bad JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Validates and converts into an in-memory algebra (and optional Lie
    /// structure).
    pub fn to_spec(&self) -> Result<(AlgebraSpec, Option<LieSpec>)> {
        let mut entries = Vec::new();
        for label in &self.basis {
            let deg = self.degrees.get(label).copied().ok_or_else(|| {
                Error::MalformedInput(format!("no degree given for basis label `{label}`"))
            })?;
            entries.push((label.clone(), deg));
        }
        for label in self.degrees.keys() {
            if !self.basis.contains(label) {
                return Err(Error::MalformedInput(format!(
                    "degree given for unknown label `{label}`"
                )));
            }
        }
        let basis = GradedBasis::new(entries).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let mut product_entries = BTreeMap::new();
        for p in &self.products {
            let li = basis.index_of(&p.left).map_err(|e| Error::MalformedInput(e.to_string()))?;
            let ri = basis.index_of(&p.right).map_err(|e| Error::MalformedInput(e.to_string()))?;
            let v = vector_from_entries(&basis, &p.result)
                .map_err(|e| Error::MalformedInput(e.to_string()))?;
            if product_entries.insert(vec![li, ri], v).is_some() {
                return Err(Error::MalformedInput(format!(
                    "duplicate product entry for ({}, {})",
                    p.left, p.right
                )));
            }
        }
        let product = MultilinearMap::new(basis.clone(), basis.clone(), 2, 0, product_entries)
            .map_err(|e| Error::MalformedInput(e.to_string()))?;
        let mut operators = BTreeMap::new();
        for (name, rows) in &self.operators {
            let mut op_entries = BTreeMap::new();
            for row in rows {
                let fi = basis
                    .index_of(&row.from)
                    .map_err(|e| Error::MalformedInput(e.to_string()))?;
                let v = vector_from_entries(&basis, &row.to)
                    .map_err(|e| Error::MalformedInput(e.to_string()))?;
                if op_entries.insert(vec![fi], v).is_some() {
                    return Err(Error::MalformedInput(format!(
                        "duplicate operator entry for `{name}` on `{}`",
                        row.from
                    )));
                }
            }
            let degree = infer_degree(&basis, &op_entries, 1)?;
            let op = MultilinearMap::new(basis.clone(), basis.clone(), 1, degree, op_entries)
                .map_err(|e| Error::MalformedInput(e.to_string()))?;
            operators.insert(name.clone(), op);
        }
        let spec = AlgebraSpec::new(basis.clone(), product, self.unit.as_deref(), operators)
            .map_err(|e| Error::MalformedInput(e.to_string()))?;
        let lie = match &self.lie {
            None => None,
            Some(block) => {
                let mut br_entries = BTreeMap::new();
                for p in &block.bracket {
                    let li = basis
                        .index_of(&p.left)
                        .map_err(|e| Error::MalformedInput(e.to_string()))?;
                    let ri = basis
                        .index_of(&p.right)
                        .map_err(|e| Error::MalformedInput(e.to_string()))?;
                    let v = vector_from_entries(&basis, &p.result)
                        .map_err(|e| Error::MalformedInput(e.to_string()))?;
                    br_entries.insert(vec![li, ri], v);
                }
                let bracket = MultilinearMap::new(
                    basis.clone(),
                    basis.clone(),
                    2,
                    block.degree,
                    br_entries,
                )
                .map_err(|e| Error::MalformedInput(e.to_string()))?;
                Some(LieSpec::new(basis.clone(), bracket, block.degree, false)?)
            }
        };
        Ok((spec, lie))
    }

    /// Canonical serialization of an in-memory algebra: products and operator
    /// rows sorted in basis order, coefficients in lowest terms.
    pub fn from_spec(spec: &AlgebraSpec, lie: Option<&LieSpec>) -> AlgebraFile {
        let basis = spec.basis();
        let labels: Vec<String> = basis.labels().to_vec();
        let degrees = basis
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), basis.degree(i)))
            .collect();
        let mut products = Vec::new();
        for (tuple, v) in spec.product().entries() {
            products.push(ProductEntry {
                left: basis.label(tuple[0]).to_string(),
                right: basis.label(tuple[1]).to_string(),
                result: entries_of_vector(v),
            });
        }
        let mut operators = BTreeMap::new();
        for (name, op) in spec.operators() {
            let rows = op
                .entries()
                .map(|(tuple, v)| OperatorEntry {
                    from: basis.label(tuple[0]).to_string(),
                    to: entries_of_vector(v),
                })
                .collect();
            operators.insert(name.clone(), rows);
        }
        let lie = lie.map(|l| LieBlock {
            bracket: l
                .bracket()
                .entries()
                .map(|(tuple, v)| ProductEntry {
                    left: basis.label(tuple[0]).to_string(),
                    right: basis.label(tuple[1]).to_string(),
                    result: entries_of_vector(v),
                })
                .collect(),
            degree: l.degree(),
        });
        AlgebraFile {
            basis: labels,
            degrees,
            unit: spec.unit_index().map(|u| basis.label(u).to_string()),
            products,
            operators,
            lie,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn roundtrip_is_identity() {
        for spec in [fixtures::fix_a(), fixtures::fix_c(), fixtures::fix_d(), fixtures::fix_e()] {
            let file = AlgebraFile::from_spec(&spec, None);
            let json = file.to_json();
            let reparsed = AlgebraFile::parse(&json).unwrap();
            assert_eq!(file, reparsed);
            let (spec2, _) = reparsed.to_spec().unwrap();
            assert_eq!(spec.basis(), spec2.basis());
            assert_eq!(spec.product(), spec2.product());
            assert_eq!(spec.operators(), spec2.operators());
            let file2 = AlgebraFile::from_spec(&spec2, None);
            assert_eq!(file.to_json(), file2.to_json());
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matches!(AlgebraFile::parse("{"), Err(Error::MalformedInput(_))));
        let bad_label = r#"{"basis":["a"],"degrees":{"a":0},
            "products":[{"left":"a","right":"b","result":[]}]}"#;
        let f = AlgebraFile::parse(bad_label).unwrap();
        assert!(matches!(f.to_spec(), Err(Error::MalformedInput(_))));
        let bad_coeff = r#"{"basis":["a"],"degrees":{"a":0},
            "products":[{"left":"a","right":"a","result":[{"basis":"a","coeff":"1/0"}]}]}"#;
        let f = AlgebraFile::parse(bad_coeff).unwrap();
        assert!(matches!(f.to_spec(), Err(Error::MalformedInput(_))));
        let missing_degree = r#"{"basis":["a","b"],"degrees":{"a":0}}"#;
        let f = AlgebraFile::parse(missing_degree).unwrap();
        assert!(matches!(f.to_spec(), Err(Error::MalformedInput(_))));
        // broken unit axiom
        let bad_unit = r#"{"basis":["1","x"],"degrees":{"1":0,"x":0},"unit":"1",
            "products":[{"left":"1","right":"x","result":[{"basis":"1","coeff":"1"}]}]}"#;
        let f = AlgebraFile::parse(bad_unit).unwrap();
        assert!(f.to_spec().is_err());
    }

    #[test]
    fn lie_block_roundtrip() {
        let sd = fixtures::semidirect_fixture();
        // write a lie-only file on the same basis with a zero product
        let spec = AlgebraSpec::new(
            sd.basis().clone(),
            MultilinearMap::zero(sd.basis().clone(), sd.basis().clone(), 2, 0),
            None,
            BTreeMap::new(),
        )
        .unwrap();
        let file = AlgebraFile::from_spec(&spec, Some(&sd));
        let (spec2, lie2) = AlgebraFile::parse(&file.to_json()).unwrap().to_spec().unwrap();
        assert!(spec2.product().is_zero());
        let lie2 = lie2.unwrap();
        assert_eq!(lie2.bracket(), sd.bracket());
        assert_eq!(lie2.degree(), 0);
    }
}
