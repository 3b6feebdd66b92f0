//! Stochastic Pauli fault models on spacetime circuits.
//!
//! A model is a convolution of independent binary events: generator `a`
//! fires with probability `q_a` and multiplies the accumulated fault by its
//! spacetime Pauli. Eigenvalues factor over generators,
//! `λ_b = ∏_{a: ⟨a,b⟩=1} (1 − 2 q_a)`, which is what syndrome statistics
//! estimate. Generators sharing a syndrome are indistinguishable to the
//! syndrome map, so the identifiable objects are per-class rates: the prior
//! distribution over syndrome classes.
//!
//! Negative `q` values are permitted for analysis (they arise when matching
//! eigenvalue data that no honest mixture reproduces) as long as every
//! `1 − 2q` stays positive; sampling such a model is refused downstream.

use crate::code::SpacetimeCode;
use crate::gf2::BitVec;
use crate::pauli::SpacetimePauli;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// One independent fault mechanism: a spacetime Pauli and its firing rate.
#[derive(Clone, Debug)]
pub struct FaultGenerator {
    /// The inserted spacetime Pauli.
    pub op: SpacetimePauli,
    /// Firing probability; must satisfy `1 − 2q > 0`.
    pub q: f64,
}

/// An independent-generator stochastic Pauli fault model.
pub struct FaultModel {
    n: usize,
    t_max: usize,
    generators: Vec<FaultGenerator>,
}

impl FaultModel {
    /// Builds a model on `n` qubits over slices `0 ..= t_max`.
    ///
    /// # Errors
    /// [`Error::Validation`] when a generator is the identity, has the wrong
    /// shape, duplicates another, or violates `1 − 2q > 0` (every eigenvalue
    /// must stay positive for log-linear recovery to make sense).
    pub fn new(n: usize, t_max: usize, generators: Vec<FaultGenerator>) -> Result<Self> {
        let mut seen: HashMap<SpacetimePauli, usize> = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.op.n() != n || g.op.t_max() != t_max {
                return Err(Error::Validation(format!(
                    "generator {i} ({}) has shape ({}, {}), expected ({n}, {t_max})",
                    g.op,
                    g.op.n(),
                    g.op.t_max()
                )));
            }
            if g.op.is_identity() {
                return Err(Error::Validation(format!(
                    "generator {i} is the identity"
                )));
            }
            if !g.q.is_finite() || 1.0 - 2.0 * g.q <= 0.0 {
                return Err(Error::Validation(format!(
                    "generator {i} ({}) has rate q={}, violating 1-2q > 0: every \
                     model eigenvalue must remain positive",
                    g.op, g.q
                )));
            }
            if let Some(j) = seen.insert(g.op.clone(), i) {
                return Err(Error::Validation(format!(
                    "generators {j} and {i} are the same operator {}",
                    g.op
                )));
            }
        }
        Ok(FaultModel {
            n,
            t_max,
            generators,
        })
    }

    /// Qubits per slice.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest slice index.
    #[must_use]
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// The generators, in declaration order.
    #[must_use]
    pub fn generators(&self) -> &[FaultGenerator] {
        &self.generators
    }

    /// True when some rate is negative (analysis-only model).
    #[must_use]
    pub fn has_negative_rate(&self) -> bool {
        self.generators.iter().any(|g| g.q < 0.0)
    }

    /// The eigenvalue of the model at a spacetime Pauli `b`:
    /// the product of `1 − 2q_a` over generators anticommuting with `b`.
    ///
    /// # Panics
    /// Panics on shape mismatch.
    #[must_use]
    pub fn eigenvalue(&self, b: &SpacetimePauli) -> f64 {
        self.generators
            .iter()
            .filter(|g| g.op.symplectic(b))
            .map(|g| 1.0 - 2.0 * g.q)
            .product()
    }

    /// Dense distribution over the full spacetime Pauli group, computed by
    /// convolving the generators one at a time. The index packs the (x‖z)
    /// coordinates of the operator, x block first, slice-major within each
    /// block (see [`flat_index`]).
    ///
    /// # Errors
    /// [`Error::Guard`] when the group dimension `2 n (t_max + 1)` exceeds
    /// 22 bits.
    pub fn error_rates_dense(&self) -> Result<Vec<f64>> {
        let dim = 2 * self.n * (self.t_max + 1);
        if dim > 22 {
            return Err(Error::Guard(format!(
                "dense rates need 2^{dim} entries; the guard allows at most 2^22"
            )));
        }
        let size = 1usize << dim;
        let mut p = vec![0.0f64; size];
        p[0] = 1.0;
        for g in &self.generators {
            let ia = flat_index(&g.op);
            let q = g.q;
            for x in 0..size {
                let y = x ^ ia;
                if x < y {
                    let px = p[x];
                    let py = p[y];
                    p[x] = (1.0 - q) * px + q * py;
                    p[y] = (1.0 - q) * py + q * px;
                }
            }
        }
        Ok(p)
    }

    /// Groups generators into syndrome classes and computes the per-class
    /// firing rate `q_[c] = (1 − ∏_{σ(a)=σ(c)} (1 − 2 q_a)) / 2`.
    ///
    /// # Errors
    /// [`Error::Unlearnable`] naming every generator with zero syndrome:
    /// such generators never flip a measurement bit and have no place in a
    /// syndrome-identified prior.
    pub fn build_prior(&self, code: &SpacetimeCode) -> Result<PriorDistribution> {
        self.check_shape(code)?;
        let mut invisible = Vec::new();
        let mut classes: Vec<FaultClass> = Vec::new();
        let mut index: HashMap<BitVec, usize> = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            let syn = code.syndrome_of(&g.op);
            if syn.is_zero() {
                invisible.push(format!("{}", g.op));
                continue;
            }
            match index.get(&syn) {
                Some(&c) => classes[c].members.push(i),
                None => {
                    index.insert(syn.clone(), classes.len());
                    classes.push(FaultClass {
                        syndrome: syn,
                        members: vec![i],
                        representative: g.op.clone(),
                        q: 0.0,
                    });
                }
            }
        }
        if !invisible.is_empty() {
            return Err(Error::Unlearnable(format!(
                "generators with zero syndrome cannot enter the prior: {}",
                invisible.join(", ")
            )));
        }
        for c in &mut classes {
            let prod: f64 = c
                .members
                .iter()
                .map(|&i| 1.0 - 2.0 * self.generators[i].q)
                .product();
            c.q = (1.0 - prod) / 2.0;
        }
        Ok(PriorDistribution { classes, index })
    }

    /// The probability that the accumulated fault lands in the gauge coset
    /// `a·G`, truncated to firing patterns of at most `max_order`
    /// generators. With `max_order >= |generators|` the value is exact.
    ///
    /// # Errors
    /// [`Error::Guard`] when exact evaluation (`max_order >= |generators|`)
    /// would enumerate more than 2^20 subsets.
    pub fn effective_rate(
        &self,
        code: &SpacetimeCode,
        a: &SpacetimePauli,
        max_order: usize,
    ) -> Result<f64> {
        self.check_shape(code)?;
        let k = self.generators.len();
        if max_order >= k && k > 20 {
            return Err(Error::Guard(format!(
                "exact coset mass over {k} generators exceeds the 2^20 subset guard; \
                 pass a max_order below {k}"
            )));
        }
        let base: f64 = self.generators.iter().map(|g| 1.0 - g.q).product();
        let ratios: Vec<f64> = self
            .generators
            .iter()
            .map(|g| g.q / (1.0 - g.q))
            .collect();
        let order = max_order.min(k);
        // Depth-first over index combinations of size <= order; returns the
        // gauge-coset mass collected in the subtree.
        fn walk(
            gens: &[FaultGenerator],
            ratios: &[f64],
            code: &SpacetimeCode,
            start: usize,
            left: usize,
            cur: &SpacetimePauli,
            weight: f64,
        ) -> f64 {
            let mut total = if code.in_gauge(cur) { weight } else { 0.0 };
            if left == 0 {
                return total;
            }
            for i in start..gens.len() {
                let mut next = cur.clone();
                next.mul_assign(&gens[i].op);
                total += walk(gens, ratios, code, i + 1, left - 1, &next, weight * ratios[i]);
            }
            total
        }
        Ok(walk(&self.generators, &ratios, code, 0, order, a, base))
    }

    /// Validates that the model shape matches the code's circuit.
    pub fn check_shape(&self, code: &SpacetimeCode) -> Result<()> {
        if self.n != code.circuit().n() || self.t_max != code.circuit().depth() {
            return Err(Error::Dimension(format!(
                "fault model on ({}, {}) does not fit circuit on ({}, {})",
                self.n,
                self.t_max,
                code.circuit().n(),
                code.circuit().depth()
            )));
        }
        Ok(())
    }

    /// Parses a fault model from JSON: a list of entries with a spacetime
    /// Pauli (either a `pauli` literal or an explicit `slices` map) and a
    /// rate `q`.
    pub fn from_json(n: usize, t_max: usize, text: &str) -> Result<Self> {
        let entries: Vec<FaultEntry> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("fault JSON: {e}")))?;
        let generators = entries
            .iter()
            .map(|e| {
                Ok(FaultGenerator {
                    op: e.parse_op(n, t_max)?,
                    q: e.q.ok_or_else(|| {
                        Error::Parse("fault entry missing rate field q".into())
                    })?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FaultModel::new(n, t_max, generators)
    }

    /// Serializes the model to JSON with spacetime Pauli literals.
    pub fn to_json(&self) -> Result<String> {
        let entries: Vec<FaultEntry> = self
            .generators
            .iter()
            .map(|g| FaultEntry {
                pauli: Some(g.op.to_string()),
                slices: None,
                q: Some(g.q),
                multiplier: None,
            })
            .collect();
        serde_json::to_string_pretty(&entries).map_err(Into::into)
    }
}

impl std::fmt::Debug for FaultModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FaultModel(n={}, t_max={}, generators={})",
            self.n,
            self.t_max,
            self.generators.len()
        )
    }
}

/// One JSON fault entry. Rate entries carry `q`; template entries carry a
/// `multiplier` to be scaled by a global physical rate.
#[derive(Serialize, Deserialize)]
pub struct FaultEntry {
    /// Spacetime Pauli literal, e.g. `"X1@t0"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli: Option<String>,
    /// Alternative explicit form: map from slice index to Pauli literal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slices: Option<HashMap<String, String>>,
    /// Absolute firing rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Rate multiplier for template files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<f64>,
}

impl FaultEntry {
    /// Builds the spacetime operator from whichever form is present.
    pub fn parse_op(&self, n: usize, t_max: usize) -> Result<SpacetimePauli> {
        match (&self.pauli, &self.slices) {
            (Some(lit), None) => SpacetimePauli::parse(n, t_max, lit),
            (None, Some(map)) => {
                let mut op = SpacetimePauli::identity(n, t_max);
                for (ts, lit) in map {
                    let t: usize = ts
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad slice key {ts:?}")))?;
                    if t > t_max {
                        return Err(Error::Parse(format!(
                            "slice {t} out of range 0..={t_max}"
                        )));
                    }
                    let p = crate::pauli::PauliString::parse(n, lit)?;
                    op.mul_slice(t, &p);
                }
                Ok(op)
            }
            _ => Err(Error::Parse(
                "fault entry needs exactly one of `pauli` or `slices`".into(),
            )),
        }
    }
}

/// A fault template: operators with rate multipliers, to be instantiated at
/// a given physical rate `p` (generator rate = multiplier × p).
pub struct FaultTemplate {
    /// Operators with their multipliers, declaration order.
    pub entries: Vec<(SpacetimePauli, f64)>,
}

impl FaultTemplate {
    /// Parses a template JSON (entries with `multiplier`).
    pub fn from_json(n: usize, t_max: usize, text: &str) -> Result<Self> {
        let entries: Vec<FaultEntry> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("template JSON: {e}")))?;
        let parsed = entries
            .iter()
            .map(|e| {
                Ok((
                    e.parse_op(n, t_max)?,
                    e.multiplier.ok_or_else(|| {
                        Error::Parse("template entry missing multiplier".into())
                    })?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FaultTemplate { entries: parsed })
    }

    /// Instantiates a model at physical rate `p`.
    pub fn at_rate(&self, n: usize, t_max: usize, p: f64) -> Result<FaultModel> {
        let gens = self
            .entries
            .iter()
            .map(|(op, mult)| FaultGenerator {
                op: op.clone(),
                q: mult * p,
            })
            .collect();
        FaultModel::new(n, t_max, gens)
    }

    /// Uniform single-site template: every listed literal with multiplier 1.
    pub fn uniform(n: usize, t_max: usize, literals: &[String]) -> Result<Self> {
        let entries = literals
            .iter()
            .map(|lit| Ok((SpacetimePauli::parse(n, t_max, lit)?, 1.0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FaultTemplate { entries })
    }
}

/// A syndrome class: the generators sharing one syndrome, their first
/// member as representative, and the aggregated class rate.
#[derive(Clone, Debug)]
pub struct FaultClass {
    /// The shared syndrome.
    pub syndrome: BitVec,
    /// Generator indices in declaration order.
    pub members: Vec<usize>,
    /// Operator of the first member.
    pub representative: SpacetimePauli,
    /// Class firing rate.
    pub q: f64,
}

/// The syndrome-identified prior: one rate per syndrome class.
#[derive(Clone, Debug)]
pub struct PriorDistribution {
    classes: Vec<FaultClass>,
    index: HashMap<BitVec, usize>,
}

impl PriorDistribution {
    /// Assembles a prior directly from classes (used when replacing true
    /// rates with estimated ones).
    #[must_use]
    pub fn from_classes(classes: Vec<FaultClass>) -> Self {
        let index = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.syndrome.clone(), i))
            .collect();
        PriorDistribution { classes, index }
    }

    /// The classes, in first-occurrence order.
    #[must_use]
    pub fn classes(&self) -> &[FaultClass] {
        &self.classes
    }

    /// Number of classes `K`.
    #[must_use]
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    /// True when there are no classes.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class with the given syndrome, if any.
    #[must_use]
    pub fn class_of(&self, syndrome: &BitVec) -> Option<usize> {
        self.index.get(syndrome).copied()
    }

    /// A copy with the class rates replaced (shapes must match).
    ///
    /// # Errors
    /// [`Error::Dimension`] when the rate count differs from the class count.
    pub fn with_rates(&self, rates: &[f64]) -> Result<Self> {
        if rates.len() != self.classes.len() {
            return Err(Error::Dimension(format!(
                "{} rates for {} classes",
                rates.len(),
                self.classes.len()
            )));
        }
        let mut out = self.clone();
        for (c, &q) in out.classes.iter_mut().zip(rates) {
            c.q = q;
        }
        Ok(out)
    }
}

/// Packs the (x‖z) coordinates of a spacetime Pauli into an integer index,
/// x block first, slice-major within each block.
#[must_use]
pub fn flat_index(p: &SpacetimePauli) -> usize {
    let n = p.n();
    let slices = p.t_max() + 1;
    let nbits = n * slices;
    let mut idx = 0usize;
    for t in 0..slices {
        let s = p.slice(t);
        for q in s.x().ones() {
            idx |= 1 << (t * n + q);
        }
        for q in s.z().ones() {
            idx |= 1 << (nbits + t * n + q);
        }
    }
    idx
}

/// Inverse of [`flat_index`].
#[must_use]
pub fn from_flat_index(n: usize, t_max: usize, idx: usize) -> SpacetimePauli {
    let slices = t_max + 1;
    let nbits = n * slices;
    let mut p = SpacetimePauli::identity(n, t_max);
    for bit in 0..2 * nbits {
        if idx >> bit & 1 == 1 {
            let (block, off) = if bit < nbits { (0, bit) } else { (1, bit - nbits) };
            let t = off / n;
            let q = off % n;
            let lit = if block == 0 { "X" } else { "Z" };
            let ps = crate::pauli::PauliString::parse(n, &format!("{lit}{}", q + 1))
                .expect("generated literal");
            p.mul_slice(t, &ps);
        }
    }
    p
}
