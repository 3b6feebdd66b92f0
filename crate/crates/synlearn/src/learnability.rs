//! Learnability analysis: which fault rates can syndrome statistics pin down.
//!
//! Generators are grouped by syndrome. Within one class the representative
//! (first in declaration order) is labeled `A`; another member `b` is `B`
//! when `rep·b` lies in the gauge group (the two faults act identically on
//! every observable the experiment can reach) and `C` otherwise. A `C` pair
//! is the obstruction: it shares the representative's syndrome but differs
//! by a logical, so no amount of syndrome data separates their rates, yet
//! logical predictions depend on the split.
//!
//! Zero-syndrome generators are reported separately as invisible. They are
//! never labeled: the syndrome map does not see them at all, so they sit
//! outside the class structure the labels describe.

use crate::code::SpacetimeCode;
use crate::fault::FaultModel;
use crate::gf2::BitVec;
use crate::pauli::SpacetimePauli;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// Per-generator verdict within its syndrome class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    /// Class representative (first member in declaration order).
    A,
    /// Shares the representative's syndrome and is gauge-equivalent to it.
    B,
    /// Shares the representative's syndrome but is not gauge-equivalent.
    C,
}

/// One syndrome class of visible generators.
#[derive(Clone, Debug)]
pub struct LearnClass {
    /// Shared syndrome.
    pub syndrome: BitVec,
    /// Generator indices, declaration order; `members[0]` is the
    /// representative.
    pub members: Vec<usize>,
}

/// A zero-syndrome generator, outside the A/B/C structure.
#[derive(Clone, Debug)]
pub struct InvisibleFault {
    /// Generator index.
    pub generator: usize,
    /// Whether the operator lies in the gauge group. A `false` here means
    /// the model contains a fault the experiment can neither see nor
    /// dismiss as harmless.
    pub gauge_equivalent: bool,
}

/// A `C`-labeled member together with its representative and a logical
/// generator certifying the inequivalence.
#[derive(Clone, Debug)]
pub struct UnlearnablePair {
    /// Representative generator index.
    pub representative: usize,
    /// The `C`-labeled generator index.
    pub member: usize,
    /// A logical generator anticommuting with `rep·member`. One always
    /// exists: the product has zero syndrome, so if it also commuted with
    /// every logical generator it would commute with all of the gauge
    /// group's commutant and hence lie in the gauge group itself.
    pub witness: SpacetimePauli,
}

/// Full learnability verdict for a fault model on a code.
#[derive(Clone, Debug)]
pub struct LearnabilityReport {
    /// Visible syndrome classes, first-occurrence order.
    pub classes: Vec<LearnClass>,
    /// Per-generator label; `None` for invisible generators.
    pub labels: Vec<Option<Label>>,
    /// Zero-syndrome generators.
    pub invisible: Vec<InvisibleFault>,
    /// Every `C` member with its representative and witness.
    pub unlearnable_pairs: Vec<UnlearnablePair>,
    /// True when every label is `A`: rates are individually recoverable.
    pub physical_learnable: bool,
    /// True when no label is `C`: class rates determine all logical
    /// predictions. Invisible generators are not consulted; check the
    /// `invisible` list for non-gauge entries before trusting this.
    pub logical_learnable: bool,
}

/// Groups the model's generators by syndrome and labels each one.
///
/// # Errors
/// [`Error::Validation`] when the model is empty, [`Error::Dimension`] on a
/// shape mismatch with the code. Analysis findings themselves never error:
/// they are carried in the report.
pub fn analyze(model: &FaultModel, code: &SpacetimeCode) -> Result<LearnabilityReport> {
    model.check_shape(code)?;
    if model.generators().is_empty() {
        return Err(Error::Validation(
            "learnability analysis needs at least one generator".into(),
        ));
    }
    let gens = model.generators();
    let mut classes: Vec<LearnClass> = Vec::new();
    let mut index: HashMap<BitVec, usize> = HashMap::new();
    let mut labels: Vec<Option<Label>> = vec![None; gens.len()];
    let mut invisible = Vec::new();
    let mut pairs = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let syn = code.syndrome_of(&g.op);
        if syn.is_zero() {
            invisible.push(InvisibleFault {
                generator: i,
                gauge_equivalent: code.in_gauge(&g.op),
            });
            continue;
        }
        match index.get(&syn) {
            None => {
                index.insert(syn.clone(), classes.len());
                classes.push(LearnClass {
                    syndrome: syn,
                    members: vec![i],
                });
                labels[i] = Some(Label::A);
            }
            Some(&c) => {
                let rep = classes[c].members[0];
                classes[c].members.push(i);
                let product = gens[rep].op.mul(&g.op);
                if code.in_gauge(&product) {
                    labels[i] = Some(Label::B);
                } else {
                    labels[i] = Some(Label::C);
                    let witness = code
                        .logical_gens()
                        .iter()
                        .find(|l| l.symplectic(&product))
                        .cloned()
                        .expect(
                            "zero-syndrome non-gauge product must anticommute \
                             with some logical generator",
                        );
                    pairs.push(UnlearnablePair {
                        representative: rep,
                        member: i,
                        witness,
                    });
                }
            }
        }
    }
    let physical_learnable = labels
        .iter()
        .flatten()
        .all(|&l| l == Label::A);
    let logical_learnable = labels
        .iter()
        .flatten()
        .all(|&l| l != Label::C);
    Ok(LearnabilityReport {
        classes,
        labels,
        invisible,
        unlearnable_pairs: pairs,
        physical_learnable,
        logical_learnable,
    })
}

/// Additive bound on the reconstruction error of `log λ_b` caused by
/// arbitrarily splitting each unlearnable class rate, when each split is
/// trusted only to `eps_c`: the bound is `eps_c` times the number of `C`
/// generators whose pairing with `b` differs from their representative's.
///
/// # Errors
/// [`Error::Validation`] when `b` is outside the gauge commutant (its
/// eigenvalue is not a reconstruction target in the first place).
pub fn unlearnable_correction_bound(
    report: &LearnabilityReport,
    model: &FaultModel,
    code: &SpacetimeCode,
    b: &SpacetimePauli,
    eps_c: f64,
) -> Result<f64> {
    if !code.in_gauge_perp(b) {
        return Err(Error::Validation(format!(
            "{b} is not in the gauge commutant; its eigenvalue is not \
             syndrome-reconstructible"
        )));
    }
    let gens = model.generators();
    let count = report
        .unlearnable_pairs
        .iter()
        .filter(|p| {
            gens[p.member].op.symplectic(b) != gens[p.representative].op.symplectic(b)
        })
        .count();
    Ok(count as f64 * eps_c)
}

impl LearnabilityReport {
    /// JSON rendering with operator literals resolved against the model.
    #[must_use]
    pub fn to_json(&self, model: &FaultModel) -> serde_json::Value {
        let gens = model.generators();
        let classes: Vec<_> = self
            .classes
            .iter()
            .map(|c| {
                serde_json::json!({
                    "syndrome": c.syndrome.to_string(),
                    "members": c.members.iter().map(|&i| serde_json::json!({
                        "generator": i,
                        "pauli": gens[i].op.to_string(),
                        "label": self.labels[i],
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let invisible: Vec<_> = self
            .invisible
            .iter()
            .map(|f| {
                serde_json::json!({
                    "generator": f.generator,
                    "pauli": gens[f.generator].op.to_string(),
                    "gauge_equivalent": f.gauge_equivalent,
                })
            })
            .collect();
        let pairs: Vec<_> = self
            .unlearnable_pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "representative": gens[p.representative].op.to_string(),
                    "member": gens[p.member].op.to_string(),
                    "witness": p.witness.to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "physical_learnable": self.physical_learnable,
            "logical_learnable": self.logical_learnable,
            "classes": classes,
            "invisible": invisible,
            "unlearnable_pairs": pairs,
        })
    }

    /// Human-readable table rendering.
    #[must_use]
    pub fn to_table(&self, model: &FaultModel) -> String {
        let gens = model.generators();
        let mut out = String::new();
        out.push_str(&format!(
            "physical_learnable: {}\nlogical_learnable:  {}\n",
            self.physical_learnable, self.logical_learnable
        ));
        out.push_str(&format!(
            "classes: {}   generators: {}   invisible: {}\n\n",
            self.classes.len(),
            gens.len(),
            self.invisible.len()
        ));
        for (ci, c) in self.classes.iter().enumerate() {
            out.push_str(&format!("class {ci}  syndrome {}\n", c.syndrome));
            for &i in &c.members {
                let label = match self.labels[i] {
                    Some(Label::A) => "A",
                    Some(Label::B) => "B",
                    Some(Label::C) => "C",
                    None => "?",
                };
                out.push_str(&format!("  [{label}] #{i:<3} {}\n", gens[i].op));
            }
        }
        if !self.invisible.is_empty() {
            out.push_str("\ninvisible (zero syndrome):\n");
            for f in &self.invisible {
                let tag = if f.gauge_equivalent {
                    "gauge"
                } else {
                    "NOT gauge"
                };
                out.push_str(&format!(
                    "  #{:<3} {}  [{tag}]\n",
                    f.generator, gens[f.generator].op
                ));
            }
        }
        if !self.unlearnable_pairs.is_empty() {
            out.push_str("\nunlearnable pairs (representative, member, witness):\n");
            for p in &self.unlearnable_pairs {
                out.push_str(&format!(
                    "  {}  ~  {}   witness {}\n",
                    gens[p.representative].op, gens[p.member].op, p.witness
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::repetition_circuit;
    use crate::fault::FaultGenerator;
    use crate::real::RealMatrix;

    fn st(s: &str) -> SpacetimePauli {
        SpacetimePauli::parse(3, 6, s).unwrap()
    }

    fn rep_code() -> SpacetimeCode {
        SpacetimeCode::build(repetition_circuit(3, 3).unwrap()).unwrap()
    }

    fn model_of(ops: &[SpacetimePauli]) -> FaultModel {
        let gens = ops
            .iter()
            .map(|op| FaultGenerator {
                op: op.clone(),
                q: 0.01,
            })
            .collect();
        FaultModel::new(3, 6, gens).unwrap()
    }

    /// Single-qubit X and Z faults at every (qubit, slice).
    fn xz_template() -> Vec<SpacetimePauli> {
        let mut ops = Vec::new();
        for t in 0..=6 {
            for q in 1..=3 {
                ops.push(st(&format!("X{q}@t{t}")));
            }
        }
        for t in 0..=6 {
            for q in 1..=3 {
                ops.push(st(&format!("Z{q}@t{t}")));
            }
        }
        ops
    }

    #[test]
    fn distinct_syndromes_are_all_a() {
        let code = rep_code();
        let m = model_of(&[st("X1@t0"), st("X2@t0"), st("X3@t0")]);
        let r = analyze(&m, &code).unwrap();
        assert!(r.physical_learnable);
        assert!(r.logical_learnable);
        assert_eq!(r.classes.len(), 3);
        assert!(r.labels.iter().all(|l| *l == Some(Label::A)));
        assert!(r.unlearnable_pairs.is_empty());
        assert!(r.invisible.is_empty());
    }

    #[test]
    fn repetition_xz_template_is_logically_learnable() {
        let code = rep_code();
        let m = model_of(&xz_template());
        let r = analyze(&m, &code).unwrap();
        // X faults on the same qubit with no intervening check share a
        // syndrome, so physical learnability fails.
        assert!(!r.physical_learnable);
        // ... but every duplicate is gauge-equivalent to its
        // representative, so class rates suffice for logical predictions.
        assert!(r.logical_learnable);
        assert!(r.unlearnable_pairs.is_empty());
        let mut b_count = 0;
        for c in &r.classes {
            assert_eq!(r.labels[c.members[0]], Some(Label::A));
            for &i in &c.members[1..] {
                assert_eq!(r.labels[i], Some(Label::B), "member {i}");
                b_count += 1;
            }
        }
        assert!(b_count > 0, "template should have duplicate syndromes");
        // All 21 Z faults are invisible: they commute with every check.
        // None is in the gauge group (gauge elements have even total
        // Z-weight; a single Z insertion is odd).
        assert_eq!(r.invisible.len(), 21);
        assert!(r.invisible.iter().all(|f| !f.gauge_equivalent));
        // exactly one A per class
        for c in &r.classes {
            let a_count = c
                .members
                .iter()
                .filter(|&&i| r.labels[i] == Some(Label::A))
                .count();
            assert_eq!(a_count, 1);
        }
    }

    #[test]
    fn logical_dressing_is_labeled_c_with_witness() {
        let code = rep_code();
        let a = st("X1@t1");
        let logical_x = code.logical_gens()[0].clone();
        let dressed = a.mul(&logical_x);
        // the dressing has zero syndrome, so the pair shares a class
        assert!(code.syndrome_of(&logical_x).is_zero());
        let m = model_of(&[a.clone(), dressed.clone()]);
        let r = analyze(&m, &code).unwrap();
        assert!(!r.logical_learnable);
        assert!(!r.physical_learnable);
        assert_eq!(r.labels[0], Some(Label::A));
        assert_eq!(r.labels[1], Some(Label::C));
        assert_eq!(r.unlearnable_pairs.len(), 1);
        let p = &r.unlearnable_pairs[0];
        assert_eq!((p.representative, p.member), (0, 1));
        // witness anticommutes with the product a·dressed = dressing
        assert!(p.witness.symplectic(&logical_x));
        assert!(code.syndrome_of(&p.witness).is_zero());
    }

    #[test]
    fn dressing_any_duplicate_breaks_logical_learnability() {
        let code = rep_code();
        let base = xz_template();
        // restrict to visible generators in multi-member classes
        let m0 = model_of(&base);
        let r0 = analyze(&m0, &code).unwrap();
        assert!(r0.logical_learnable);
        let mut checked = 0;
        for c in r0.classes.iter().filter(|c| c.members.len() > 1) {
            let i = c.members[1];
            for l in code.base_logicals() {
                let dress = code.circuit().backward_from(l, 6);
                let mut ops = base.clone();
                ops[i] = ops[i].mul(&dress);
                let r = analyze(&model_of(&ops), &code).unwrap();
                assert!(!r.logical_learnable, "dressing member {i} went unnoticed");
                assert!(r
                    .unlearnable_pairs
                    .iter()
                    .any(|p| p.member == i || p.representative == i));
                checked += 1;
            }
            if checked >= 6 {
                break;
            }
        }
        assert!(checked >= 4);
    }

    #[test]
    fn report_stable_under_permutation() {
        let code = rep_code();
        let base = xz_template();
        let mut permuted = base.clone();
        permuted.rotate_left(7);
        permuted.swap(0, 11);
        let r1 = analyze(&model_of(&base), &code).unwrap();
        let r2 = analyze(&model_of(&permuted), &code).unwrap();
        assert_eq!(r1.physical_learnable, r2.physical_learnable);
        assert_eq!(r1.logical_learnable, r2.logical_learnable);
        assert_eq!(r1.classes.len(), r2.classes.len());
        assert_eq!(r1.invisible.len(), r2.invisible.len());
        // class sizes per syndrome agree; only the A assignment may move
        let sizes = |r: &LearnabilityReport| {
            let mut v: Vec<(String, usize)> = r
                .classes
                .iter()
                .map(|c| (c.syndrome.to_string(), c.members.len()))
                .collect();
            v.sort();
            v
        };
        assert_eq!(sizes(&r1), sizes(&r2));
    }

    #[test]
    fn correction_bound_counts_divergent_pairs() {
        let code = rep_code();
        let lx = code.circuit().backward_from(&code.base_logicals()[0].clone(), 6);
        let lz = code.logical_gens()[1].clone();
        // no C anywhere: bound is zero for any commutant target
        let clean = model_of(&[st("X1@t1"), st("X2@t1")]);
        let rc = analyze(&clean, &code).unwrap();
        let zero = unlearnable_correction_bound(&rc, &clean, &code, &lz, 0.05).unwrap();
        assert_eq!(zero, 0.0);
        // one C pair whose dressing anticommutes with the target
        let one = model_of(&[st("X1@t1"), st("X1@t1").mul(&lx)]);
        let r1 = analyze(&one, &code).unwrap();
        assert_eq!(r1.unlearnable_pairs.len(), 1);
        assert!(lx.symplectic(&lz), "dressing must anticommute with target");
        let b1 = unlearnable_correction_bound(&r1, &one, &code, &lz, 0.05).unwrap();
        assert!((b1 - 0.05).abs() < 1e-15);
        // ... and commutes with the dressing itself: bound 0 there
        let b0 = unlearnable_correction_bound(&r1, &one, &code, &lx, 0.05).unwrap();
        assert_eq!(b0, 0.0);
        // two C pairs, both divergent at the target
        let two = model_of(&[
            st("X1@t1"),
            st("X1@t1").mul(&lx),
            st("X2@t1"),
            st("X2@t1").mul(&lx),
        ]);
        let r2 = analyze(&two, &code).unwrap();
        assert_eq!(r2.unlearnable_pairs.len(), 2);
        let b2 = unlearnable_correction_bound(&r2, &two, &code, &lz, 0.05).unwrap();
        assert!((b2 - 0.10).abs() < 1e-15);
        // targets outside the gauge commutant are rejected
        assert!(unlearnable_correction_bound(&r2, &two, &code, &st("X1@t0"), 0.05).is_err());
    }

    #[test]
    fn physical_learnability_gives_full_rank_detector_matrix() {
        let code = rep_code();
        let ops = [st("X1@t0"), st("X2@t0"), st("X3@t0"), st("X2@t6")];
        let m = model_of(&ops);
        let r = analyze(&m, &code).unwrap();
        assert!(r.physical_learnable);
        // rows: anticommutation of every product of measurement generators
        // with each generator; full column rank over the reals
        let mg = code.meas_gens();
        let rows = 1usize << mg.len();
        let mut mat = RealMatrix::zeros(rows, ops.len());
        for mask in 0..rows {
            let mut prod = SpacetimePauli::identity(3, 6);
            for (j, g) in mg.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    prod.mul_assign(g);
                }
            }
            for (c, op) in ops.iter().enumerate() {
                if prod.symplectic(op) {
                    mat.set(mask, c, 1.0);
                }
            }
        }
        assert!(mat.dependent_columns().is_empty());
    }

    #[test]
    fn empty_model_is_rejected() {
        let code = rep_code();
        let m = FaultModel::new(3, 6, vec![]).unwrap();
        assert!(analyze(&m, &code).is_err());
    }

    #[test]
    fn json_and_table_render() {
        let code = rep_code();
        let lx = code.logical_gens()[0].clone();
        let m = model_of(&[st("X1@t1"), st("X1@t1").mul(&lx), st("Z1@t0")]);
        let r = analyze(&m, &code).unwrap();
        let v = r.to_json(&m);
        assert_eq!(v["physical_learnable"], false);
        assert_eq!(v["logical_learnable"], false);
        assert_eq!(v["invisible"][0]["gauge_equivalent"], false);
        assert_eq!(v["unlearnable_pairs"].as_array().unwrap().len(), 1);
        let t = r.to_table(&m);
        assert!(t.contains("[A]") && t.contains("[C]") && t.contains("NOT gauge"));
    }
}
