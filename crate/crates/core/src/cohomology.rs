//! Cohomology of a differential algebra and descent of the recursive bracket
//! towers to it.

use crate::algebra::{is_derivation, AlgebraSpec};
use crate::basis::{GradedBasis, Vector};
use crate::error::{Error, Result};
use crate::higherops::phi;
use crate::linalg::{in_span, kernel_image, solve_in_span};
use crate::multilinear::{graded_commutator, MultilinearMap};
use crate::report::{Check, Report, Witness};
use crate::scalar::sign_pow;
use crate::shlie::BracketFamily;
use itertools::Itertools;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A computed presentation of `H = Ker(Q)/Im(Q)` with a deterministic choice
/// of representatives and the projection data needed to push values down.
#[derive(Debug, Clone)]
pub struct CohomologyPresentation {
    ambient: AlgebraSpec,
    q_name: String,
    kernel: Vec<Vector>,
    image: Vec<Vector>,
    representatives: Vec<Vector>,
    h_basis: Arc<GradedBasis>,
}

impl CohomologyPresentation {
    pub fn ambient(&self) -> &AlgebraSpec {
        &self.ambient
    }

    pub fn q_name(&self) -> &str {
        &self.q_name
    }

    pub fn q(&self) -> &MultilinearMap {
        self.ambient.operator(&self.q_name).expect("validated at construction")
    }

    pub fn kernel(&self) -> &[Vector] {
        &self.kernel
    }

    pub fn image(&self) -> &[Vector] {
        &self.image
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.representatives
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn h_basis(&self) -> &Arc<GradedBasis> {
        &self.h_basis
    }

    /// Coordinates of a kernel vector in `H`: solve against representatives
    /// plus image basis and keep the representative part.
    pub fn project(&self, v: &Vector) -> Result<Vector> {
        let mut columns = self.representatives.clone();
        columns.extend(self.image.iter().cloned());
        let coords = solve_in_span(&columns, v)?.ok_or_else(|| {
            Error::invalid(format!("vector {v} is not in Ker(Q) + Im(Q)"))
        })?;
        let mut out = Vector::zero(self.h_basis.clone());
        for (i, c) in coords.iter().take(self.representatives.len()).enumerate() {
            out.set(i, c.clone());
        }
        Ok(out)
    }

    /// The chosen representative of an `H`-coordinate vector.
    pub fn lift(&self, h: &Vector) -> Result<Vector> {
        let mut out = Vector::zero(self.ambient.basis().clone());
        for (&i, c) in h.coords() {
            out.add_assign_scaled(&self.representatives[i], c);
        }
        Ok(out)
    }

    /// Replaces representative `index` by `rep + perturbation` (used by the
    /// representative-independence test). The perturbation must lie in the
    /// image and preserve homogeneity.
    pub fn with_perturbed_representative(&self, index: usize, perturbation: &Vector) -> Result<Self> {
        if !in_span(&self.image, perturbation)? {
            return Err(Error::invalid("perturbation must lie in Im(Q)"));
        }
        let rep = &self.representatives[index];
        let new_rep = rep.add(perturbation)?;
        if new_rep.homogeneous_degree().is_err() {
            return Err(Error::invalid(
                "perturbation must preserve the representative's homogeneity",
            ));
        }
        let mut reps = self.representatives.clone();
        reps[index] = new_rep;
        Ok(CohomologyPresentation { representatives: reps, ..self.clone() })
    }
}

/// Builds the cohomology of `(V, m, Q)` for a named odd square-zero
/// derivation, certifying that the induced product on `H` is commutative and
/// associative (on representatives modulo the image).
pub fn build_cohomology(ambient: &AlgebraSpec, q_name: &str) -> Result<CohomologyPresentation> {
    let q = ambient.operator(q_name)?.clone();
    if !q.has_parity(1) {
        return Err(Error::hypothesis(
            "Q odd",
            format!("Q has degree {}", q.degree()),
        ));
    }
    let q2 = q.compose(&q)?;
    if !q2.is_zero() {
        let (tuple, v) = q2.entries().next().expect("nonzero");
        return Err(Error::hypothesis(
            "Q^2 = 0",
            format!("Q^2({}) = {v}", ambient.basis().label(tuple[0])),
        ));
    }
    let der = is_derivation(ambient, &q)?;
    if !der.holds {
        let w = der.witness.unwrap();
        return Err(Error::hypothesis(
            "Q is a derivation of m",
            format!("on ({}): {}", w.inputs.join(", "), w.value),
        ));
    }
    let (kernel, image) = kernel_image(&q)?;
    // representatives: kernel vectors extending the image to a basis, kept in
    // the deterministic order produced by the row reduction
    let mut reps: Vec<Vector> = Vec::new();
    {
        let mut span = image.clone();
        let mut rank = crate::linalg::rank(&span);
        for v in &kernel {
            span.push(v.clone());
            let r = crate::linalg::rank(&span);
            if r > rank {
                rank = r;
                reps.push(v.clone());
            } else {
                span.pop();
            }
        }
    }
    let expected = kernel.len() - image.len();
    if reps.len() != expected {
        return Err(Error::invalid(format!(
            "rank bookkeeping failed: {} representatives but dim ker - dim im = {expected}",
            reps.len()
        )));
    }
    // labels: bracketed leading basis label of each representative
    let mut entries = Vec::new();
    for r in &reps {
        let lead = *r.coords().keys().next().expect("nonzero representative");
        let deg = r.homogeneous_degree()?.unwrap_or(0);
        entries.push((format!("[{}]", ambient.basis().label(lead)), deg));
    }
    let h_basis = GradedBasis::new(entries)?;
    let presentation = CohomologyPresentation {
        ambient: ambient.clone(),
        q_name: q_name.to_string(),
        kernel,
        image,
        representatives: reps,
        h_basis,
    };
    // the induced product must be commutative and associative on H
    let h = &presentation;
    let hdim = h.dim();
    let mul_h = |a: usize, b: usize| -> Result<Vector> {
        let prod = h.ambient.mul(&h.representatives[a], &h.representatives[b])?;
        h.project(&prod)
    };
    for a in 0..hdim {
        for b in 0..hdim {
            let ab = mul_h(a, b)?;
            let ba = mul_h(b, a)?;
            let sgn = sign_pow(h.h_basis.degree(a) * h.h_basis.degree(b));
            if ab != ba.scale(&sgn) {
                return Err(Error::hypothesis(
                    "m commutative in the cohomology",
                    format!("on ({}, {}): {ab} vs {ba}", h.h_basis.label(a), h.h_basis.label(b)),
                ));
            }
        }
    }
    for a in 0..hdim {
        for b in 0..hdim {
            for c in 0..hdim {
                // associativity through representatives, both ways, projected
                let ab = h.lift(&mul_h(a, b)?)?;
                let lhs = h.project(&h.ambient.mul(&ab, &h.representatives[c])?)?;
                let bc = h.lift(&mul_h(b, c)?)?;
                let rhs = h.project(&h.ambient.mul(&h.representatives[a], &bc)?)?;
                if lhs != rhs {
                    return Err(Error::hypothesis(
                        "m associative in the cohomology",
                        format!(
                            "on ({}, {}, {}): {lhs} vs {rhs}",
                            h.h_basis.label(a),
                            h.h_basis.label(b),
                            h.h_basis.label(c)
                        ),
                    ));
                }
            }
        }
    }
    Ok(presentation)
}

fn check_delta_hypotheses(
    c: &CohomologyPresentation,
    delta: &MultilinearMap,
    report: &mut Report,
) -> Result<bool> {
    let mut ok = true;
    if delta.has_parity(1) {
        report.push(Check::pass("Delta odd"));
    } else {
        ok = false;
        report.push(Check::violation(
            "Delta odd",
            Some(Witness::new(vec![], format!("degree {}", delta.degree()))),
        ));
    }
    let d2 = delta.compose(delta)?;
    if d2.is_zero() {
        report.push(Check::pass("Delta^2 = 0"));
    } else {
        ok = false;
        let (tuple, v) = d2.entries().next().expect("nonzero");
        report.push(Check::violation(
            "Delta^2 = 0",
            Some(Witness::new(
                vec![c.ambient.basis().label(tuple[0]).into()],
                format!("{v}"),
            )),
        ));
    }
    let anti = graded_commutator(c.q(), delta)?;
    if anti.is_zero() {
        report.push(Check::pass("[Q, Delta] = 0"));
    } else {
        ok = false;
        let (tuple, v) = anti.entries().next().expect("nonzero");
        report.push(Check::violation(
            "[Q, Delta] = 0",
            Some(Witness::new(
                vec![c.ambient.basis().label(tuple[0]).into()],
                format!("{v}"),
            )),
        ));
    }
    Ok(ok)
}

/// Certifies the two closure statements behind descent: for each arity up to
/// `max_r`, the tower maps kernel tuples into the kernel, and tuples with one
/// image entry (the rest in the kernel) into the image.
pub fn check_descent(
    c: &CohomologyPresentation,
    delta_name: &str,
    max_r: usize,
) -> Result<Report> {
    let mut report = Report::new("descent");
    let delta = c.ambient.operator(delta_name)?.clone();
    if !check_delta_hypotheses(c, &delta, &mut report)? {
        return Ok(report);
    }
    let kernel = c.kernel();
    let image = c.image();
    for r in 1..=max_r {
        // kernel closure
        let mut ker_witness = None;
        'ker: for tuple in (0..r).map(|_| 0..kernel.len()).multi_cartesian_product() {
            let args: Vec<Vector> = tuple.iter().map(|&i| kernel[i].clone()).collect();
            let v = phi(&c.ambient, &delta, &args)?;
            if !c.q().apply(&[&v])?.is_zero() {
                ker_witness = Some(Witness::new(
                    tuple.iter().map(|&i| format!("{}", kernel[i])).collect(),
                    v,
                ));
                break 'ker;
            }
        }
        report.push(match ker_witness {
            None => Check::pass(format!("arity {r} preserves Ker(Q)")),
            Some(w) => Check::fail(format!("arity {r} preserves Ker(Q)"), Some(w)),
        });
        // image closure: one slot runs over the image basis
        let mut im_witness = None;
        'im: for slot in 0..r {
            for tuple in (0..r - 1).map(|_| 0..kernel.len()).multi_cartesian_product() {
                for im_vec in image {
                    let mut args: Vec<Vector> = Vec::with_capacity(r);
                    let mut it = tuple.iter();
                    for pos in 0..r {
                        if pos == slot {
                            args.push(im_vec.clone());
                        } else {
                            args.push(kernel[*it.next().unwrap()].clone());
                        }
                    }
                    let v = phi(&c.ambient, &delta, &args)?;
                    if !in_span(image, &v)? {
                        im_witness = Some(Witness::new(
                            args.iter().map(|a| format!("{a}")).collect(),
                            v,
                        ));
                        break 'im;
                    }
                }
            }
        }
        report.push(match im_witness {
            None => Check::pass(format!("arity {r} maps image slots into Im(Q)")),
            Some(w) => Check::fail(format!("arity {r} maps image slots into Im(Q)"), Some(w)),
        });
    }
    Ok(report)
}

/// The descended bracket family `[h_1,...,h_r] = project(Phi^r(lifts))` on
/// the cohomology basis.
pub fn cdbt_brackets(
    c: &CohomologyPresentation,
    delta_name: &str,
    max_r: usize,
) -> Result<BracketFamily> {
    let mut hyp = Report::new("cdbt-hypotheses");
    let delta = c.ambient.operator(delta_name)?.clone();
    if !check_delta_hypotheses(c, &delta, &mut hyp)? {
        let failed = hyp
            .checks
            .iter()
            .find(|ck| !ck.passed())
            .expect("some check failed");
        return Err(Error::hypothesis(
            failed.name.clone(),
            failed
                .witness
                .clone()
                .map(|w| w.value)
                .unwrap_or_default(),
        ));
    }
    let h_basis = c.h_basis().clone();
    let hdim = c.dim();
    let mut brackets = BTreeMap::new();
    for r in 1..=max_r {
        let mut entries = BTreeMap::new();
        for tuple in (0..r).map(|_| 0..hdim).multi_cartesian_product() {
            let args: Vec<Vector> = tuple.iter().map(|&i| c.representatives()[i].clone()).collect();
            let v = phi(&c.ambient, &delta, &args)?;
            let projected = c.project(&v)?;
            if !projected.is_zero() {
                entries.insert(tuple.clone(), projected);
            }
        }
        let degree = delta.degree();
        brackets.insert(
            r,
            MultilinearMap::new(h_basis.clone(), h_basis.clone(), r, degree, entries)?,
        );
    }
    BracketFamily::new(h_basis, brackets, max_r)
}

/// Representative independence: perturbing any representative by any image
/// basis vector of matching degree leaves every projected bracket unchanged.
pub fn verify_representative_independence(
    c: &CohomologyPresentation,
    delta_name: &str,
    max_r: usize,
) -> Result<Report> {
    let mut report = Report::new("representative-independence");
    let baseline = cdbt_brackets(c, delta_name, max_r)?;
    let mut tested = 0usize;
    for idx in 0..c.dim() {
        let rep_deg = c.representatives()[idx].homogeneous_degree()?;
        for im_vec in c.image() {
            if im_vec.homogeneous_degree()? != rep_deg {
                continue;
            }
            let perturbed = c.with_perturbed_representative(idx, im_vec)?;
            let family = cdbt_brackets(&perturbed, delta_name, max_r)?;
            tested += 1;
            for r in 1..=max_r {
                let a = baseline.bracket(r);
                let b = family.bracket(r);
                if a != b {
                    report.push(Check::fail(
                        format!("brackets unchanged under perturbation of representative {idx}"),
                        Some(Witness::new(
                            vec![format!("{}", c.representatives()[idx]), format!("{im_vec}")],
                            format!("arity {r} differs"),
                        )),
                    ));
                    return Ok(report);
                }
            }
        }
    }
    report.push(Check::pass_with_detail(
        "projected brackets independent of representative choice",
        format!("{tested} perturbations"),
    ));
    Ok(report)
}
