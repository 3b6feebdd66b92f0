//! Logical error probability: decoder tables, truncated prediction from a
//! prior, exact brute force, and Monte Carlo measurement.
//!
//! The failure event for a target logical `l` (given as its rest-frame
//! spacetime form) is `fault · correction · l ∈ 𝒢`: after decoding, the
//! residual acts on the code space exactly as `l`. The prediction sums the
//! prior's subset probabilities over fault-class subsets whose residual
//! does so, truncated at a subset cardinality with the neglected mass
//! bounded by the Poisson-binomial tail.

use crate::code::SpacetimeCode;
use crate::fault::{FaultModel, PriorDistribution};
use crate::gf2::{solve, transpose, BitVec};
use crate::pauli::SpacetimePauli;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Syndrome-to-correction lookup built from a prior's representatives.
#[derive(Clone, Debug)]
pub struct DecoderTable {
    m: usize,
    entries: HashMap<BitVec, SpacetimePauli>,
    max_weight: usize,
    /// True when the table covers every syndrome the classes can produce.
    full: bool,
    class_syndromes: Vec<BitVec>,
    class_reps: Vec<SpacetimePauli>,
}

/// Builds corrections for every syndrome reachable by at most `max_weight`
/// class representatives: breadth-first over syndrome space, so each entry
/// uses the fewest representatives possible, ties broken by lexicographic
/// class order. Syndromes beyond the horizon are resolved lazily at query
/// time.
///
/// # Errors
/// [`Error::Validation`] when `max_weight` is zero or the prior is empty
/// of classes while a table is requested on a code with syndrome bits.
pub fn build_decoder(
    code: &SpacetimeCode,
    prior: &PriorDistribution,
    max_weight: usize,
) -> Result<DecoderTable> {
    if max_weight == 0 {
        return Err(Error::Validation("max_weight must be at least 1".into()));
    }
    let m = code.syndrome_bits();
    let circuit = code.circuit();
    let identity = SpacetimePauli::identity(circuit.n(), circuit.depth());
    let class_syndromes: Vec<BitVec> = prior
        .classes()
        .iter()
        .map(|c| c.syndrome.clone())
        .collect();
    let class_reps: Vec<SpacetimePauli> = prior
        .classes()
        .iter()
        .map(|c| c.representative.clone())
        .collect();
    let mut entries: HashMap<BitVec, SpacetimePauli> = HashMap::new();
    entries.insert(BitVec::zeros(m), identity.clone());
    let mut frontier: Vec<(BitVec, SpacetimePauli)> = vec![(BitVec::zeros(m), identity)];
    for _depth in 1..=max_weight {
        let mut next = Vec::new();
        for (syn, corr) in &frontier {
            for (c, cs) in class_syndromes.iter().enumerate() {
                let mut z = syn.clone();
                z.xor_assign(cs);
                if !entries.contains_key(&z) {
                    let a = corr.mul(&class_reps[c]);
                    entries.insert(z.clone(), a.clone());
                    next.push((z, a));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    // the reachable syndromes form the span of the class syndromes
    let span = 1usize << crate::gf2::rank(&class_syndromes);
    let full = entries.len() == span;
    Ok(DecoderTable {
        m,
        entries,
        max_weight,
        full,
        class_syndromes,
        class_reps,
    })
}

impl DecoderTable {
    /// Builds a table from explicit entries, validating that each
    /// correction reproduces its syndrome and that the zero syndrome maps
    /// to the identity. Such a table has no lazy fallback.
    ///
    /// # Errors
    /// [`Error::Validation`] on an inconsistent entry.
    pub fn from_entries(
        code: &SpacetimeCode,
        pairs: Vec<(BitVec, SpacetimePauli)>,
    ) -> Result<DecoderTable> {
        let m = code.syndrome_bits();
        let circuit = code.circuit();
        let mut entries = HashMap::new();
        entries.insert(
            BitVec::zeros(m),
            SpacetimePauli::identity(circuit.n(), circuit.depth()),
        );
        for (z, a) in pairs {
            if z.len() != m {
                return Err(Error::Validation(format!(
                    "syndrome key has {} bits, expected {m}",
                    z.len()
                )));
            }
            if code.syndrome_of(&a) != z {
                return Err(Error::Validation(format!(
                    "correction {a} does not produce its table syndrome"
                )));
            }
            entries.insert(z, a);
        }
        Ok(DecoderTable {
            m,
            entries,
            max_weight: 0,
            full: false,
            class_syndromes: Vec::new(),
            class_reps: Vec::new(),
        })
    }

    /// Syndrome width.
    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of materialized entries.
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no entries beyond the zero syndrome exist.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.len() <= 1
    }

    /// True when every producible syndrome has a materialized entry.
    #[must_use]
    pub fn is_full(&self) -> bool {
        self.full
    }

    /// The weight horizon the table was built to.
    #[must_use]
    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// The correction for syndrome `z` and whether it is
    /// minimum-representative-count. Off-table syndromes are resolved by a
    /// GF(2) solve over the class syndromes (any solution, not minimal);
    /// the solve is repeated per call rather than memoized so lookups stay
    /// pure and thread-safe.
    ///
    /// # Errors
    /// [`Error::Validation`] on width mismatch or when no representative
    /// subset produces `z`.
    pub fn decode(&self, z: &BitVec) -> Result<(SpacetimePauli, bool)> {
        if z.len() != self.m {
            return Err(Error::Dimension(format!(
                "syndrome has {} bits, table expects {}",
                z.len(),
                self.m
            )));
        }
        if let Some(a) = self.entries.get(z) {
            return Ok((a.clone(), true));
        }
        // columns = class syndromes: solve for a subset XORing to z
        let cols = transpose(&self.class_syndromes, self.m);
        match solve(&cols, self.class_syndromes.len(), z) {
            Some(x) => {
                let mut a: Option<SpacetimePauli> = None;
                for c in x.ones() {
                    a = Some(match a {
                        None => self.class_reps[c].clone(),
                        Some(prev) => prev.mul(&self.class_reps[c]),
                    });
                }
                let a = a.expect("nonzero syndrome needs a nonempty subset");
                Ok((a, false))
            }
            None => Err(Error::Validation(format!(
                "syndrome {z} is not producible by any subset of the classes"
            ))),
        }
    }
}

/// A truncated logical error prediction.
#[derive(Clone, Debug, Serialize)]
pub struct LepPrediction {
    /// Sum of subset probabilities whose decoded residual acts as the
    /// target logical.
    pub p_l: f64,
    /// Upper bound on the neglected mass: the Poisson-binomial tail
    /// probability that more than `max_order` classes fire.
    pub truncation_residual: f64,
    /// The cardinality cutoff used.
    pub max_order: usize,
}

/// Predicts the probability that, after decoding, the residual fault acts
/// on the code space as the logical `l` (rest-frame spacetime form),
/// truncating the subset enumeration at `max_order` classes.
///
/// # Errors
/// [`Error::Validation`] when `l` is outside the gauge commutant.
pub fn predict_lep(
    prior: &PriorDistribution,
    code: &SpacetimeCode,
    dec: &DecoderTable,
    l: &SpacetimePauli,
    max_order: usize,
) -> Result<LepPrediction> {
    if !code.in_gauge_perp(l) {
        return Err(Error::Validation(format!(
            "{l} is not in the gauge commutant; it is not a logical target"
        )));
    }
    let k = prior.len();
    let order = max_order.min(k);
    let rates: Vec<f64> = prior.classes().iter().map(|c| c.q).collect();
    let base: f64 = rates.iter().map(|q| 1.0 - q).product();
    let ratios: Vec<f64> = rates.iter().map(|q| q / (1.0 - q)).collect();
    let syndromes: Vec<BitVec> = prior
        .classes()
        .iter()
        .map(|c| c.syndrome.clone())
        .collect();
    let reps: Vec<SpacetimePauli> = prior
        .classes()
        .iter()
        .map(|c| c.representative.clone())
        .collect();
    let circuit = code.circuit();
    let identity = SpacetimePauli::identity(circuit.n(), circuit.depth());
    let zero = BitVec::zeros(code.syndrome_bits());

    struct Walk<'a> {
        code: &'a SpacetimeCode,
        dec: &'a DecoderTable,
        l: &'a SpacetimePauli,
        syndromes: &'a [BitVec],
        reps: &'a [SpacetimePauli],
        ratios: &'a [f64],
        total: f64,
    }
    impl Walk<'_> {
        fn visit(&mut self, prod: &SpacetimePauli, syn: &BitVec, weight: f64) -> Result<()> {
            let (a_z, _) = self.dec.decode(syn)?;
            let mut residual = prod.mul(&a_z);
            residual.mul_assign(self.l);
            if self.code.in_gauge(&residual) {
                self.total += weight;
            }
            Ok(())
        }
        fn walk(
            &mut self,
            start: usize,
            left: usize,
            prod: &SpacetimePauli,
            syn: &BitVec,
            weight: f64,
        ) -> Result<()> {
            if left == 0 {
                return Ok(());
            }
            for c in start..self.syndromes.len() {
                let next_prod = prod.mul(&self.reps[c]);
                let mut next_syn = syn.clone();
                next_syn.xor_assign(&self.syndromes[c]);
                let w = weight * self.ratios[c];
                self.visit(&next_prod, &next_syn, w)?;
                self.walk(c + 1, left - 1, &next_prod, &next_syn, w)?;
            }
            Ok(())
        }
    }
    let mut w = Walk {
        code,
        dec,
        l,
        syndromes: &syndromes,
        reps: &reps,
        ratios: &ratios,
        total: 0.0,
    };
    w.visit(&identity, &zero, base)?;
    w.walk(0, order, &identity, &zero, base)?;
    Ok(LepPrediction {
        p_l: w.total,
        truncation_residual: poisson_binomial_tail(&rates, order),
        max_order: order,
    })
}

/// `Pr[#fired > cutoff]` for independent events with the given rates.
#[must_use]
pub fn poisson_binomial_tail(rates: &[f64], cutoff: usize) -> f64 {
    if cutoff >= rates.len() {
        return 0.0;
    }
    // head coefficients only: Pr[#fired = d] for d <= cutoff
    let mut head = vec![0.0f64; cutoff + 1];
    head[0] = 1.0;
    for &q in rates {
        for d in (0..=cutoff).rev() {
            let carry = if d > 0 { head[d - 1] * q } else { 0.0 };
            head[d] = head[d] * (1.0 - q) + carry;
        }
    }
    (1.0 - head.iter().sum::<f64>()).max(0.0)
}

/// Exact logical error probability by full enumeration of generator firing
/// patterns, walking a Gray code so each step toggles one generator.
///
/// # Errors
/// [`Error::Guard`] beyond 2^20 patterns; [`Error::Validation`] when `l`
/// is outside the gauge commutant.
pub fn exact_lep(
    model: &FaultModel,
    code: &SpacetimeCode,
    dec: &DecoderTable,
    l: &SpacetimePauli,
) -> Result<f64> {
    model.check_shape(code)?;
    if !code.in_gauge_perp(l) {
        return Err(Error::Validation(format!(
            "{l} is not in the gauge commutant; it is not a logical target"
        )));
    }
    let k = model.generators().len();
    if k > 20 {
        return Err(Error::Guard(format!(
            "exact enumeration over {k} generators exceeds the 2^20 guard"
        )));
    }
    let rates: Vec<f64> = model.generators().iter().map(|g| g.q).collect();
    let syndromes: Vec<BitVec> = model
        .generators()
        .iter()
        .map(|g| code.syndrome_of(&g.op))
        .collect();
    let circuit = code.circuit();
    let mut fault = SpacetimePauli::identity(circuit.n(), circuit.depth());
    let mut syn = BitVec::zeros(code.syndrome_bits());
    let mut total = 0.0;
    let mut prev_gray = 0usize;
    for mask in 0..1usize << k {
        let gray = mask ^ (mask >> 1);
        let flipped = gray ^ prev_gray;
        if flipped != 0 {
            let bit = flipped.trailing_zeros() as usize;
            fault.mul_assign(&model.generators()[bit].op);
            syn.xor_assign(&syndromes[bit]);
            prev_gray = gray;
        }
        // weight recomputed in full: no multiplicative drift
        let mut weight = 1.0;
        for (i, &q) in rates.iter().enumerate() {
            weight *= if gray >> i & 1 == 1 { q } else { 1.0 - q };
        }
        let (a_z, _) = dec.decode(&syn)?;
        let mut residual = fault.mul(&a_z);
        residual.mul_assign(l);
        if code.in_gauge(&residual) {
            total += weight;
        }
    }
    Ok(total)
}

/// A Monte Carlo logical error measurement with a Wilson 95% interval.
#[derive(Clone, Debug, Serialize)]
pub struct LepSample {
    /// Raw failure frequency.
    pub rate: f64,
    /// Wilson interval lower endpoint.
    pub low: f64,
    /// Wilson interval upper endpoint.
    pub high: f64,
    /// Shots taken.
    pub shots: usize,
    /// Failures observed.
    pub failures: usize,
}

/// Samples the failure rate directly: fire generators, decode, test the
/// residual against the target logical. Shots are keyed on (seed, index)
/// exactly like the syndrome sampler.
///
/// # Errors
/// As the sampler (negative rates refused, `shots ≥ 1`), plus
/// [`Error::Validation`] when `l` is outside the gauge commutant.
pub fn sample_lep(
    model: &FaultModel,
    code: &SpacetimeCode,
    dec: &DecoderTable,
    l: &SpacetimePauli,
    shots: usize,
    seed: u64,
) -> Result<LepSample> {
    model.check_shape(code)?;
    if shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    if model.has_negative_rate() {
        return Err(Error::Validation(
            "model has negative rates; sign-extended models are an analysis \
             device and cannot be sampled directly"
                .into(),
        ));
    }
    if !code.in_gauge_perp(l) {
        return Err(Error::Validation(format!(
            "{l} is not in the gauge commutant; it is not a logical target"
        )));
    }
    let rates: Vec<f64> = model.generators().iter().map(|g| g.q).collect();
    let ops: Vec<&SpacetimePauli> = model.generators().iter().map(|g| &g.op).collect();
    let syndromes: Vec<BitVec> = ops.iter().map(|op| code.syndrome_of(op)).collect();
    let circuit = code.circuit();
    let failures: usize = (0..shots)
        .into_par_iter()
        .with_min_len(256)
        .map(|shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shot as u64);
            let mut fault = SpacetimePauli::identity(circuit.n(), circuit.depth());
            let mut syn = BitVec::zeros(code.syndrome_bits());
            for (i, &q) in rates.iter().enumerate() {
                if rng.random::<f64>() < q {
                    fault.mul_assign(ops[i]);
                    syn.xor_assign(&syndromes[i]);
                }
            }
            let (a_z, _) = dec.decode(&syn).expect("sampled syndrome is producible");
            let mut residual = fault.mul(&a_z);
            residual.mul_assign(l);
            usize::from(code.in_gauge(&residual))
        })
        .sum();
    let (low, high) = wilson_interval(failures, shots);
    Ok(LepSample {
        rate: failures as f64 / shots as f64,
        low,
        high,
        shots,
        failures,
    })
}

/// Wilson 95% score interval for a binomial proportion.
#[must_use]
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Failure predicate in the rest frame: the corrected fault times the
/// target logical lies in the gauge group.
#[must_use]
pub fn fails_rest_frame(
    code: &SpacetimeCode,
    corrected: &SpacetimePauli,
    l: &SpacetimePauli,
) -> bool {
    code.in_gauge(&corrected.mul(l))
}

/// The same failure event computed in the boosted frame: push the
/// corrected fault forward to the final slice and compare against the base
/// logical modulo the terminal stabilizer group.
#[must_use]
pub fn fails_boosted_frame(
    code: &SpacetimeCode,
    corrected: &SpacetimePauli,
    l_base: &crate::pauli::PauliString,
) -> bool {
    code.final_slice_in_stabilizer(corrected, l_base)
}

/// Consolidated report for one logical target.
#[derive(Clone, Debug, Serialize)]
pub struct LogicalReport {
    /// Rest-frame literal of the target logical.
    pub logical: String,
    /// Truncated prediction from the prior.
    pub p_l_predicted: f64,
    /// Exact enumeration value, when the instance is small enough.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_l_true: Option<f64>,
    /// Monte Carlo measurement, when performed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_l_sampled: Option<LepSample>,
    /// Cardinality cutoff of the prediction.
    pub truncation_order: usize,
    /// Neglected-mass bound of the prediction.
    pub truncation_residual_bound: f64,
}
