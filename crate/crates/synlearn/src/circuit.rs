//! Clifford measurement circuits: symplectic layers, mid-circuit checks,
//! and the propagation of Pauli faults through the circuit.
//!
//! A depth-`T` circuit alternates measurement steps and unitary layers:
//! at each half-integer time `t + 0.5` (for `t = 0 .. T-1`) the step-`t`
//! checks are measured, the layer `u_{t+1,t}` then maps slice `t` to slice
//! `t + 1`, and a terminal perfect round at `T + 0.5` measures the base
//! stabilizer group. Layers act on phase-free Paulis in the symplectic
//! representation, so composing, inverting and validating them is GF(2)
//! linear algebra.

use crate::gf2::{Basis, BitVec};
use crate::pauli::{PauliString, SpacetimePauli};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A named Clifford gate acting on one or two qubits (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    /// Controlled-NOT with the given control and target.
    Cnot { control: usize, target: usize },
    /// Hadamard.
    H(usize),
    /// Phase gate (maps X to Y, fixes Z).
    S(usize),
    /// Qubit swap.
    Swap(usize, usize),
}

impl Gate {
    /// Conjugates a Pauli string by this gate, phase-free.
    fn conjugate(&self, p: &mut PauliString) {
        let n = p.n();
        let mut x: Vec<bool> = (0..n).map(|q| p.x().get(q)).collect();
        let mut z: Vec<bool> = (0..n).map(|q| p.z().get(q)).collect();
        match *self {
            Gate::Cnot { control, target } => {
                x[target] ^= x[control];
                z[control] ^= z[target];
            }
            Gate::H(q) => std::mem::swap(&mut x[q], &mut z[q]),
            Gate::S(q) => z[q] ^= x[q],
            Gate::Swap(a, b) => {
                x.swap(a, b);
                z.swap(a, b);
            }
        }
        let mut xb = BitVec::zeros(n);
        let mut zb = BitVec::zeros(n);
        for q in 0..n {
            if x[q] {
                xb.set(q, true);
            }
            if z[q] {
                zb.set(q, true);
            }
        }
        *p = PauliString::from_xz(n, xb, zb);
    }
}

/// One unitary layer of the circuit in its phase-free symplectic form.
///
/// Stored as the images of the single-qubit generators `X_q` and `Z_q`;
/// applying the layer to a Pauli is an XOR of images over its support.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordLayer {
    n: usize,
    img_x: Vec<PauliString>,
    img_z: Vec<PauliString>,
    inv_x: Vec<PauliString>,
    inv_z: Vec<PauliString>,
}

impl CliffordLayer {
    /// The identity layer on `n` qubits.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        let img_x: Vec<PauliString> = (0..n)
            .map(|q| PauliString::from_xz(n, BitVec::from_indices(n, &[q]), BitVec::zeros(n)))
            .collect();
        let img_z: Vec<PauliString> = (0..n)
            .map(|q| PauliString::from_xz(n, BitVec::zeros(n), BitVec::from_indices(n, &[q])))
            .collect();
        CliffordLayer {
            n,
            inv_x: img_x.clone(),
            inv_z: img_z.clone(),
            img_x,
            img_z,
        }
    }

    /// Builds a layer by composing gates in program order.
    ///
    /// # Errors
    /// [`Error::Validation`] on out-of-range or coincident qubit indices.
    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<Self> {
        for g in gates {
            let idx: Vec<usize> = match *g {
                Gate::Cnot { control, target } => vec![control, target],
                Gate::H(q) | Gate::S(q) => vec![q],
                Gate::Swap(a, b) => vec![a, b],
            };
            if idx.iter().any(|&q| q >= n) {
                return Err(Error::Validation(format!(
                    "gate {g:?} touches a qubit outside 0..{n}"
                )));
            }
            if idx.len() == 2 && idx[0] == idx[1] {
                return Err(Error::Validation(format!(
                    "two-qubit gate {g:?} needs distinct qubits"
                )));
            }
        }
        let mut layer = CliffordLayer::identity(n);
        for g in gates {
            for img in layer.img_x.iter_mut().chain(layer.img_z.iter_mut()) {
                g.conjugate(img);
            }
        }
        layer.recompute_inverse()?;
        Ok(layer)
    }

    /// Builds a layer from explicit symplectic rows: `rows[i]` is the image
    /// of the `i`-th generator (`X1..Xn`, then `Z1..Zn`) as a `2n`-bit
    /// string, x part first.
    ///
    /// # Errors
    /// [`Error::Validation`] when the shape is wrong or the map fails to
    /// preserve the symplectic form.
    pub fn from_symplectic_rows(n: usize, rows: &[BitVec]) -> Result<Self> {
        if rows.len() != 2 * n || rows.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::Validation(format!(
                "symplectic layer on {n} qubits needs {0} rows of {0} bits",
                2 * n
            )));
        }
        let to_pauli = |r: &BitVec| {
            let mut x = BitVec::zeros(n);
            let mut z = BitVec::zeros(n);
            for q in 0..n {
                x.set(q, r.get(q));
                z.set(q, r.get(n + q));
            }
            PauliString::from_xz(n, x, z)
        };
        let img_x: Vec<PauliString> = rows[..n].iter().map(to_pauli).collect();
        let img_z: Vec<PauliString> = rows[n..].iter().map(to_pauli).collect();
        let mut layer = CliffordLayer {
            n,
            img_x,
            img_z,
            inv_x: Vec::new(),
            inv_z: Vec::new(),
        };
        layer.recompute_inverse()?;
        Ok(layer)
    }

    /// Checks that the map preserves the symplectic form, then derives the
    /// inverse images via `S⁻¹ = Ω Sᵀ Ω`.
    fn recompute_inverse(&mut self) -> Result<()> {
        let n = self.n;
        let basis = |i: usize| -> PauliString {
            if i < n {
                PauliString::from_xz(n, BitVec::from_indices(n, &[i]), BitVec::zeros(n))
            } else {
                PauliString::from_xz(n, BitVec::zeros(n), BitVec::from_indices(n, &[i - n]))
            }
        };
        let image = |i: usize| -> &PauliString {
            if i < n {
                &self.img_x[i]
            } else {
                &self.img_z[i - n]
            }
        };
        for i in 0..2 * n {
            for j in i..2 * n {
                let expect = basis(i).symplectic(&basis(j));
                if image(i).symplectic(image(j)) != expect {
                    return Err(Error::Validation(format!(
                        "layer is not symplectic: images of {} and {} change commutation",
                        basis(i),
                        basis(j)
                    )));
                }
            }
        }
        // M[i][j]: coordinate i of the image of generator j, in the flat
        // (x‖z) ordering. The inverse of a symplectic M is Ω Mᵀ Ω, which
        // reads M_inv[i][j] = M[swap(j)][swap(i)] with swap exchanging the
        // x and z blocks.
        let m_entry = |i: usize, j: usize| -> bool {
            let img = image(j);
            if i < n {
                img.x().get(i)
            } else {
                img.z().get(i - n)
            }
        };
        let swap = |i: usize| if i < n { i + n } else { i - n };
        let mut inv_x = Vec::with_capacity(n);
        let mut inv_z = Vec::with_capacity(n);
        for j in 0..2 * n {
            let mut x = BitVec::zeros(n);
            let mut z = BitVec::zeros(n);
            for i in 0..2 * n {
                let bit = m_entry(swap(j), swap(i));
                if bit {
                    if i < n {
                        x.set(i, true);
                    } else {
                        z.set(i - n, true);
                    }
                }
            }
            let p = PauliString::from_xz(n, x, z);
            if j < n {
                inv_x.push(p);
            } else {
                inv_z.push(p);
            }
        }
        self.inv_x = inv_x;
        self.inv_z = inv_z;
        // The inverse must undo the map on every generator.
        for i in 0..2 * n {
            let b = basis(i);
            if self.apply_inverse(image(i)) != b {
                return Err(Error::Validation(
                    "layer inverse check failed; the map is not invertible".into(),
                ));
            }
        }
        Ok(())
    }

    /// Number of qubits.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Conjugates a Pauli string by the layer.
    ///
    /// # Panics
    /// Panics on qubit-count mismatch.
    #[must_use]
    pub fn apply(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.n(), self.n, "qubit count mismatch");
        let mut out = PauliString::identity(self.n);
        for q in p.x().ones() {
            out.mul_assign(&self.img_x[q]);
        }
        for q in p.z().ones() {
            out.mul_assign(&self.img_z[q]);
        }
        out
    }

    /// Conjugates a Pauli string by the inverse layer.
    ///
    /// # Panics
    /// Panics on qubit-count mismatch.
    #[must_use]
    pub fn apply_inverse(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.n(), self.n, "qubit count mismatch");
        let mut out = PauliString::identity(self.n);
        for q in p.x().ones() {
            out.mul_assign(&self.inv_x[q]);
        }
        for q in p.z().ones() {
            out.mul_assign(&self.inv_z[q]);
        }
        out
    }

    /// The symplectic rows (image of each generator as a `2n`-bit vector).
    #[must_use]
    pub fn symplectic_rows(&self) -> Vec<BitVec> {
        let flat = |p: &PauliString| {
            let mut v = BitVec::zeros(2 * self.n);
            for q in p.x().ones() {
                v.set(q, true);
            }
            for q in p.z().ones() {
                v.set(self.n + q, true);
            }
            v
        };
        self.img_x.iter().chain(&self.img_z).map(flat).collect()
    }

    /// True when the layer is the identity map.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        *self == CliffordLayer::identity(self.n)
    }
}

impl std::fmt::Debug for CliffordLayer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            write!(f, "CliffordLayer(identity on {})", self.n)
        } else {
            write!(f, "CliffordLayer(n={})", self.n)
        }
    }
}

/// A depth-`T` Clifford measurement circuit.
///
/// `checks[t]` are the Pauli checks measured at time `t + 0.5`; `layers[t]`
/// is the unitary `u_{t+1,t}`. A terminal perfect round measuring every
/// base stabilizer is implied at `T + 0.5`.
#[derive(Clone, PartialEq)]
pub struct CircuitSpec {
    n: usize,
    depth: usize,
    layers: Vec<CliffordLayer>,
    checks: Vec<Vec<PauliString>>,
    base_stabilizers: Vec<PauliString>,
    logicals: Option<Vec<PauliString>>,
}

impl CircuitSpec {
    /// Assembles and validates a circuit.
    ///
    /// # Errors
    /// [`Error::Validation`] when any structural invariant fails: wrong list
    /// lengths, identity checks, overlapping checks within a step (named),
    /// checks that fail to commute with the base stabilizers (named), layers
    /// that do not map every check into the group generated by stabilizers
    /// and checks, or invalid logicals.
    pub fn new(
        n: usize,
        depth: usize,
        layers: Vec<CliffordLayer>,
        checks: Vec<Vec<PauliString>>,
        base_stabilizers: Vec<PauliString>,
        logicals: Option<Vec<PauliString>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("circuit needs at least one qubit".into()));
        }
        if depth == 0 {
            return Err(Error::Validation("circuit depth must be at least 1".into()));
        }
        if layers.len() != depth {
            return Err(Error::Validation(format!(
                "expected {depth} layers, found {}",
                layers.len()
            )));
        }
        if checks.len() != depth {
            return Err(Error::Validation(format!(
                "expected {depth} check steps, found {}",
                checks.len()
            )));
        }
        if layers.iter().any(|l| l.n() != n) {
            return Err(Error::Validation("layer qubit count mismatch".into()));
        }
        let spec = CircuitSpec {
            n,
            depth,
            layers,
            checks,
            base_stabilizers,
            logicals,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for s in &self.base_stabilizers {
            if s.n() != n {
                return Err(Error::Validation("stabilizer qubit count mismatch".into()));
            }
            if s.is_identity() {
                return Err(Error::Validation(
                    "base stabilizer list contains the identity".into(),
                ));
            }
        }
        for (i, a) in self.base_stabilizers.iter().enumerate() {
            for b in &self.base_stabilizers[i + 1..] {
                if a.symplectic(b) {
                    return Err(Error::Validation(format!(
                        "base stabilizers {a} and {b} anticommute"
                    )));
                }
            }
        }
        for (t, step) in self.checks.iter().enumerate() {
            for m in step {
                if m.n() != n {
                    return Err(Error::Validation("check qubit count mismatch".into()));
                }
                if m.is_identity() {
                    return Err(Error::Validation(format!(
                        "step {t} measures the identity"
                    )));
                }
                for s in &self.base_stabilizers {
                    if m.symplectic(s) {
                        return Err(Error::Validation(format!(
                            "check {m} at step {t} anticommutes with base stabilizer {s}"
                        )));
                    }
                }
            }
            for (i, a) in step.iter().enumerate() {
                for b in &step[i + 1..] {
                    if !a.support_disjoint(b) {
                        return Err(Error::Validation(format!(
                            "checks {a} and {b} at step {t} overlap in support; \
                             same-step checks must act on disjoint qubits"
                        )));
                    }
                }
            }
        }
        // Layers must keep every check inside the group generated by the
        // base stabilizers and all checks; for circuits whose checks already
        // sit in the stabilizer span, the image must stay in that span.
        let mut stab_basis: Basis<PauliString> = Basis::new();
        for s in &self.base_stabilizers {
            stab_basis.insert(s);
        }
        let mut group_basis: Basis<PauliString> = Basis::new();
        for s in &self.base_stabilizers {
            group_basis.insert(s);
        }
        let mut strict = true;
        for step in &self.checks {
            for m in step {
                if !stab_basis.contains(m) {
                    strict = false;
                }
                group_basis.insert(m);
            }
        }
        for (t, step) in self.checks.iter().enumerate() {
            for m in step {
                let mut v = m.clone();
                for layer in &self.layers[t..] {
                    v = layer.apply(&v);
                }
                let ok = if strict {
                    stab_basis.contains(&v)
                } else {
                    group_basis.contains(&v)
                };
                if !ok {
                    return Err(Error::Validation(format!(
                        "check {m} at step {t} propagates to {v} at the final time, \
                         which leaves the group generated by stabilizers and checks"
                    )));
                }
            }
        }
        if let Some(logicals) = &self.logicals {
            for l in logicals {
                if l.n() != n {
                    return Err(Error::Validation("logical qubit count mismatch".into()));
                }
                if l.is_identity() {
                    return Err(Error::Validation("logical operator is the identity".into()));
                }
                for s in &self.base_stabilizers {
                    if l.symplectic(s) {
                        return Err(Error::Validation(format!(
                            "logical {l} anticommutes with base stabilizer {s}"
                        )));
                    }
                }
                for (t, step) in self.checks.iter().enumerate() {
                    for m in step {
                        if l.symplectic(m) {
                            return Err(Error::Validation(format!(
                                "logical {l} anticommutes with check {m} at step {t}"
                            )));
                        }
                    }
                }
                if stab_basis.contains(l) {
                    return Err(Error::Validation(format!(
                        "logical {l} lies in the base stabilizer group"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of qubits.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Circuit depth `T`; slices run `0 ..= T`.
    #[must_use]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The unitary layers, `layers[t] = u_{t+1,t}`.
    #[must_use]
    pub fn layers(&self) -> &[CliffordLayer] {
        &self.layers
    }

    /// Checks measured at step `t + 0.5`.
    #[must_use]
    pub fn checks(&self) -> &[Vec<PauliString>] {
        &self.checks
    }

    /// Base stabilizer generators (measured in the terminal perfect round).
    #[must_use]
    pub fn base_stabilizers(&self) -> &[PauliString] {
        &self.base_stabilizers
    }

    /// User-declared logical representatives, if any.
    #[must_use]
    pub fn logicals(&self) -> Option<&[PauliString]> {
        self.logicals.as_deref()
    }

    /// True when every check lies in the span of the base stabilizers.
    #[must_use]
    pub fn is_strict(&self) -> bool {
        let mut stab_basis: Basis<PauliString> = Basis::new();
        for s in &self.base_stabilizers {
            stab_basis.insert(s);
        }
        self.checks
            .iter()
            .flatten()
            .all(|m| stab_basis.contains(m))
    }

    /// Pushes a spacetime fault forward: slice `t` of the result is the
    /// product of all earlier components transported to time `t`,
    /// `∏_{i ≤ t} u_{t,i}(a_i)`.
    #[must_use]
    pub fn propagate_forward(&self, a: &SpacetimePauli) -> SpacetimePauli {
        assert_eq!(a.n(), self.n, "qubit count mismatch");
        assert_eq!(a.t_max(), self.depth, "slice count mismatch");
        let mut out = SpacetimePauli::identity(self.n, self.depth);
        let mut carry = PauliString::identity(self.n);
        for t in 0..=self.depth {
            if t > 0 {
                carry = self.layers[t - 1].apply(&carry);
            }
            carry.mul_assign(&a.slice(t));
            out.mul_slice(t, &carry);
        }
        out
    }

    /// Pulls a spacetime fault backward: slice `t` of the result is the
    /// product of all later components transported back to time `t`,
    /// `∏_{i ≥ t} u⁻¹_{i,t}(a_i)`.
    #[must_use]
    pub fn propagate_backward(&self, a: &SpacetimePauli) -> SpacetimePauli {
        assert_eq!(a.n(), self.n, "qubit count mismatch");
        assert_eq!(a.t_max(), self.depth, "slice count mismatch");
        let mut out = SpacetimePauli::identity(self.n, self.depth);
        let mut carry = PauliString::identity(self.n);
        for t in (0..=self.depth).rev() {
            if t < self.depth {
                carry = self.layers[t].apply_inverse(&carry);
            }
            carry.mul_assign(&a.slice(t));
            out.mul_slice(t, &carry);
        }
        out
    }

    /// The two-slice transport generator of a Pauli `a` across step `t`:
    /// `a` at slice `t` together with its image `u_{t+1,t}(a)` at `t + 1`.
    ///
    /// # Panics
    /// Panics when `t >= depth`.
    #[must_use]
    pub fn pauli_transport(&self, a: &PauliString, t: usize) -> SpacetimePauli {
        assert!(t < self.depth, "transport step {t} out of range");
        let mut out = SpacetimePauli::identity(self.n, self.depth);
        out.mul_slice(t, a);
        out.mul_slice(t + 1, &self.layers[t].apply(a));
        out
    }

    /// Backward-propagates the single-slice embedding of `p` at time `t`:
    /// shorthand for `propagate_backward(embed(p, t))`.
    #[must_use]
    pub fn backward_from(&self, p: &PauliString, t: usize) -> SpacetimePauli {
        self.propagate_backward(&SpacetimePauli::embed(p, t, self.depth))
    }

    /// Parses a circuit from its JSON description.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("circuit JSON: {e}")))?;
        file.into_spec()
    }

    /// Serializes the circuit to canonical JSON (layers as symplectic rows).
    pub fn to_json(&self) -> Result<String> {
        let file = CircuitFile::from_spec(self);
        serde_json::to_string_pretty(&file).map_err(Into::into)
    }
}

impl std::fmt::Debug for CircuitSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CircuitSpec(n={}, depth={}, checks={})",
            self.n,
            self.depth,
            self.checks.iter().map(Vec::len).sum::<usize>()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    n: usize,
    #[serde(rename = "T")]
    depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<Vec<LayerFile>>,
    checks: Vec<CheckFile>,
    base_stabilizers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    logicals: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LayerFile {
    Gates { gates: Vec<Vec<serde_json::Value>> },
    Symplectic { symplectic: Vec<String> },
}

#[derive(Serialize, Deserialize)]
struct CheckFile {
    t: usize,
    generators: Vec<String>,
}

impl CircuitFile {
    fn into_spec(self) -> Result<CircuitSpec> {
        let n = self.n;
        let depth = self.depth;
        let layers: Vec<CliffordLayer> = match self.layers {
            None => vec![CliffordLayer::identity(n); depth],
            Some(files) => {
                if files.len() != depth {
                    return Err(Error::Validation(format!(
                        "expected {depth} layers, found {}",
                        files.len()
                    )));
                }
                files
                    .into_iter()
                    .map(|f| f.into_layer(n))
                    .collect::<Result<_>>()?
            }
        };
        let mut checks: Vec<Vec<PauliString>> = vec![Vec::new(); depth];
        for c in &self.checks {
            if c.t >= depth {
                return Err(Error::Validation(format!(
                    "check step t={} out of range 0..{depth}",
                    c.t
                )));
            }
            for g in &c.generators {
                checks[c.t].push(PauliString::parse(n, g)?);
            }
        }
        let base_stabilizers = self
            .base_stabilizers
            .iter()
            .map(|s| PauliString::parse(n, s))
            .collect::<Result<Vec<_>>>()?;
        let logicals = match &self.logicals {
            None => None,
            Some(ls) => Some(
                ls.iter()
                    .map(|s| PauliString::parse(n, s))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        CircuitSpec::new(n, depth, layers, checks, base_stabilizers, logicals)
    }

    fn from_spec(spec: &CircuitSpec) -> Self {
        // all-identity layer stacks round-trip through the implicit form
        let layers = if spec.layers.iter().all(CliffordLayer::is_identity) {
            None
        } else {
            Some(
                spec.layers
                    .iter()
                    .map(|l| LayerFile::Symplectic {
                        symplectic: l.symplectic_rows().iter().map(BitVec::to_string).collect(),
                    })
                    .collect(),
            )
        };
        let checks = spec
            .checks
            .iter()
            .enumerate()
            .filter(|(_, step)| !step.is_empty())
            .map(|(t, step)| CheckFile {
                t,
                generators: step.iter().map(PauliString::to_string).collect(),
            })
            .collect();
        CircuitFile {
            n: spec.n,
            depth: spec.depth,
            layers,
            checks,
            base_stabilizers: spec
                .base_stabilizers
                .iter()
                .map(PauliString::to_string)
                .collect(),
            logicals: spec
                .logicals
                .as_ref()
                .map(|ls| ls.iter().map(PauliString::to_string).collect()),
        }
    }
}

impl LayerFile {
    fn into_layer(self, n: usize) -> Result<CliffordLayer> {
        match self {
            LayerFile::Gates { gates } => {
                let parsed: Vec<Gate> = gates
                    .iter()
                    .map(|g| parse_gate(g))
                    .collect::<Result<_>>()?;
                CliffordLayer::from_gates(n, &parsed)
            }
            LayerFile::Symplectic { symplectic } => {
                let rows = symplectic
                    .iter()
                    .map(|s| BitVec::from_bit_str(s))
                    .collect::<Result<Vec<_>>>()?;
                CliffordLayer::from_symplectic_rows(n, &rows)
            }
        }
    }
}

/// Parses a gate entry such as `["CNOT", 1, 2]` (1-based qubits).
fn parse_gate(entry: &[serde_json::Value]) -> Result<Gate> {
    let name = entry
        .first()
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Parse("gate entry must start with a name string".into()))?;
    let qubit = |i: usize| -> Result<usize> {
        let v = entry
            .get(i)
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse(format!("gate {name}: missing qubit argument {i}")))?;
        if v == 0 {
            return Err(Error::Parse(format!("gate {name}: qubits are 1-based")));
        }
        Ok((v - 1) as usize)
    };
    let expect_arity = |k: usize| -> Result<()> {
        if entry.len() != k + 1 {
            return Err(Error::Parse(format!(
                "gate {name}: expected {k} qubit arguments"
            )));
        }
        Ok(())
    };
    match name {
        "CNOT" => {
            expect_arity(2)?;
            Ok(Gate::Cnot {
                control: qubit(1)?,
                target: qubit(2)?,
            })
        }
        "H" => {
            expect_arity(1)?;
            Ok(Gate::H(qubit(1)?))
        }
        "S" => {
            expect_arity(1)?;
            Ok(Gate::S(qubit(1)?))
        }
        "SWAP" => {
            expect_arity(2)?;
            Ok(Gate::Swap(qubit(1)?, qubit(2)?))
        }
        other => Err(Error::Parse(format!(
            "unknown gate {other:?}; supported: CNOT, H, S, SWAP"
        ))),
    }
}

/// Builds the repetition-code measurement circuit on `n` qubits with
/// `rounds` rounds: steps alternate between the two disjoint halves of the
/// adjacent-pair checks, all layers are the identity, and the base
/// stabilizers are all adjacent pairs `Z_q Z_{q+1}`.
pub fn repetition_circuit(n: usize, rounds: usize) -> Result<CircuitSpec> {
    if n < 2 || rounds == 0 {
        return Err(Error::Validation(
            "repetition circuit needs n >= 2 and rounds >= 1".into(),
        ));
    }
    let depth = 2 * rounds;
    let even: Vec<PauliString> = (0..n - 1)
        .step_by(2)
        .map(|q| PauliString::parse(n, &format!("Z{}Z{}", q + 1, q + 2)))
        .collect::<Result<_>>()?;
    let odd: Vec<PauliString> = (1..n - 1)
        .step_by(2)
        .map(|q| PauliString::parse(n, &format!("Z{}Z{}", q + 1, q + 2)))
        .collect::<Result<_>>()?;
    let checks: Vec<Vec<PauliString>> = (0..depth)
        .map(|t| if t % 2 == 0 { even.clone() } else { odd.clone() })
        .collect();
    let stabs: Vec<PauliString> = (0..n - 1)
        .map(|q| PauliString::parse(n, &format!("Z{}Z{}", q + 1, q + 2)))
        .collect::<Result<_>>()?;
    let x_all = PauliString::parse(n, &(1..=n).map(|q| format!("X{q}")).collect::<String>())?;
    let z_first = PauliString::parse(n, "Z1")?;
    CircuitSpec::new(
        n,
        depth,
        vec![CliffordLayer::identity(n); depth],
        checks,
        stabs,
        Some(vec![x_all, z_first]),
    )
}

/// Builds the gauge-check measurement circuit of the `rows x cols`
/// subsystem code whose gauge group is generated by vertical `ZZ` and
/// horizontal `XX` pairs. Qubit `(r, c)` (both 1-based) has index
/// `(r - 1) cols + c`. Vertical Z pairs are measured one row gap per
/// step, then horizontal X pairs one column gap per step, so the depth
/// is `(rows - 1) + (cols - 1)`. Base stabilizers are X on adjacent
/// column pairs and Z on adjacent row pairs; the bare logicals are X on
/// the first column and Z on the first row.
pub fn bacon_shor_circuit(rows: usize, cols: usize) -> Result<CircuitSpec> {
    if rows < 2 || cols < 2 {
        return Err(Error::Validation(
            "gauge-check circuit needs rows >= 2 and cols >= 2".into(),
        ));
    }
    let n = rows * cols;
    let idx = |r: usize, c: usize| (r - 1) * cols + c;
    let mut checks: Vec<Vec<PauliString>> = Vec::new();
    for gap in 1..rows {
        let step = (1..=cols)
            .map(|c| PauliString::parse(n, &format!("Z{}Z{}", idx(gap, c), idx(gap + 1, c))))
            .collect::<Result<_>>()?;
        checks.push(step);
    }
    for gap in 1..cols {
        let step = (1..=rows)
            .map(|r| PauliString::parse(n, &format!("X{}X{}", idx(r, gap), idx(r, gap + 1))))
            .collect::<Result<_>>()?;
        checks.push(step);
    }
    let depth = checks.len();
    let mut stabs = Vec::new();
    for gap in 1..cols {
        let lit: String = (1..=rows)
            .flat_map(|r| [format!("X{}", idx(r, gap)), format!("X{}", idx(r, gap + 1))])
            .collect();
        stabs.push(PauliString::parse(n, &lit)?);
    }
    for gap in 1..rows {
        let lit: String = (1..=cols)
            .flat_map(|c| [format!("Z{}", idx(gap, c)), format!("Z{}", idx(gap + 1, c))])
            .collect();
        stabs.push(PauliString::parse(n, &lit)?);
    }
    let x_col: String = (1..=rows).map(|r| format!("X{}", idx(r, 1))).collect();
    let z_row: String = (1..=cols).map(|c| format!("Z{}", idx(1, c))).collect();
    CircuitSpec::new(
        n,
        depth,
        vec![CliffordLayer::identity(n); depth],
        checks,
        stabs,
        Some(vec![PauliString::parse(n, &x_col)?, PauliString::parse(n, &z_row)?]),
    )
}

/// Builds one measurement round of the distance-3 rotated surface code
/// on a 3x3 grid (qubit `(r, c)` has index `3 (r - 1) + c`): the four Z
/// stabilizers over two steps, then the four X stabilizers over two
/// steps. Bare logicals are `X1 X4 X7` and `Z1 Z2 Z3`.
pub fn rotated_surface_d3() -> Result<CircuitSpec> {
    let n = 9;
    // ordered so each measurement step acts on disjoint qubits
    let z_stabs = ["Z1Z4", "Z2Z3Z5Z6", "Z4Z5Z7Z8", "Z6Z9"];
    let x_stabs = ["X2X3", "X5X6X8X9", "X1X2X4X5", "X7X8"];
    let step = |lits: &[&str]| -> Result<Vec<PauliString>> {
        lits.iter().map(|l| PauliString::parse(n, l)).collect()
    };
    let checks = vec![
        step(&z_stabs[..2])?,
        step(&z_stabs[2..])?,
        step(&x_stabs[..2])?,
        step(&x_stabs[2..])?,
    ];
    let stabs = step(&z_stabs)?
        .into_iter()
        .chain(step(&x_stabs)?)
        .collect();
    CircuitSpec::new(
        n,
        4,
        vec![CliffordLayer::identity(n); 4],
        checks,
        stabs,
        Some(vec![
            PauliString::parse(n, "X1X4X7")?,
            PauliString::parse(n, "Z1Z2Z3")?,
        ]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: usize, s: &str) -> PauliString {
        PauliString::parse(n, s).unwrap()
    }

    #[test]
    fn gate_conjugation_table() {
        // CNOT(1 -> 2): X1 -> X1X2, Z2 -> Z1Z2, X2 and Z1 fixed.
        let l = CliffordLayer::from_gates(2, &[Gate::Cnot { control: 0, target: 1 }]).unwrap();
        assert_eq!(l.apply(&ps(2, "X1")), ps(2, "X1X2"));
        assert_eq!(l.apply(&ps(2, "Z2")), ps(2, "Z1Z2"));
        assert_eq!(l.apply(&ps(2, "X2")), ps(2, "X2"));
        assert_eq!(l.apply(&ps(2, "Z1")), ps(2, "Z1"));
        // H: swaps X and Z.
        let h = CliffordLayer::from_gates(1, &[Gate::H(0)]).unwrap();
        assert_eq!(h.apply(&ps(1, "X1")), ps(1, "Z1"));
        assert_eq!(h.apply(&ps(1, "Z1")), ps(1, "X1"));
        assert_eq!(h.apply(&ps(1, "Y1")), ps(1, "Y1"));
        // S: X -> Y, Z fixed.
        let s = CliffordLayer::from_gates(1, &[Gate::S(0)]).unwrap();
        assert_eq!(s.apply(&ps(1, "X1")), ps(1, "Y1"));
        assert_eq!(s.apply(&ps(1, "Z1")), ps(1, "Z1"));
    }

    #[test]
    fn inverse_undoes_apply() {
        let l = CliffordLayer::from_gates(
            3,
            &[
                Gate::H(0),
                Gate::Cnot { control: 0, target: 2 },
                Gate::S(1),
                Gate::Swap(1, 2),
            ],
        )
        .unwrap();
        for lit in ["X1", "Z1", "Y2", "X3Z2", "X1Y2Z3"] {
            let p = ps(3, lit);
            assert_eq!(l.apply_inverse(&l.apply(&p)), p);
            assert_eq!(l.apply(&l.apply_inverse(&p)), p);
        }
    }

    #[test]
    fn layers_preserve_commutation() {
        let l = CliffordLayer::from_gates(
            3,
            &[Gate::Cnot { control: 1, target: 0 }, Gate::H(2), Gate::S(0)],
        )
        .unwrap();
        let pool = ["X1", "Z1", "X2Z3", "Y2", "Z2Z3", "X1X2X3"];
        for a in pool {
            for b in pool {
                let pa = ps(3, a);
                let pb = ps(3, b);
                assert_eq!(
                    l.apply(&pa).symplectic(&l.apply(&pb)),
                    pa.symplectic(&pb),
                    "pair {a}, {b}"
                );
            }
        }
    }

    #[test]
    fn symplectic_rows_round_trip() {
        let l = CliffordLayer::from_gates(
            2,
            &[Gate::H(0), Gate::Cnot { control: 0, target: 1 }],
        )
        .unwrap();
        let rows = l.symplectic_rows();
        let rebuilt = CliffordLayer::from_symplectic_rows(2, &rows).unwrap();
        assert_eq!(l, rebuilt);
    }

    #[test]
    fn non_symplectic_rows_rejected() {
        // Map X1 -> X1, Z1 -> X1: destroys anticommutation.
        let rows = vec![
            BitVec::from_bit_str("10").unwrap(),
            BitVec::from_bit_str("10").unwrap(),
        ];
        assert!(CliffordLayer::from_symplectic_rows(1, &rows).is_err());
    }

    #[test]
    fn forward_propagation_through_cnot() {
        // Depth-1 circuit, single CNOT(1 -> 2) layer, no mid-circuit checks.
        let layer = CliffordLayer::from_gates(2, &[Gate::Cnot { control: 0, target: 1 }]).unwrap();
        let spec = CircuitSpec::new(
            2,
            1,
            vec![layer],
            vec![vec![]],
            vec![ps(2, "Z1Z2")],
            None,
        )
        .unwrap();
        let a = SpacetimePauli::parse(2, 1, "X1@t0").unwrap();
        let fwd = spec.propagate_forward(&a);
        assert_eq!(fwd.slice(0), ps(2, "X1"));
        assert_eq!(fwd.slice(1), ps(2, "X1X2"));
        // Backward of the same fault stays on slice 0.
        let bwd = spec.propagate_backward(&a);
        assert_eq!(bwd.slice(0), ps(2, "X1"));
        assert!(bwd.slice(1).is_identity());
        // Backward from slice 1 pulls the inverse image down.
        let b = SpacetimePauli::parse(2, 1, "X1X2@t1").unwrap();
        let bwd2 = spec.propagate_backward(&b);
        assert_eq!(bwd2.slice(1), ps(2, "X1X2"));
        assert_eq!(bwd2.slice(0), ps(2, "X1"));
    }

    #[test]
    fn identity_layers_accumulate_slices() {
        let spec = repetition_circuit(3, 1).unwrap();
        let m = ps(3, "Z1Z2");
        // Backward from slice t covers slices 0..=t with the same Pauli.
        let b = spec.backward_from(&m, 2);
        for t in 0..=2 {
            assert_eq!(b.slice(t), m, "slice {t}");
        }
        for t in 3..=spec.depth() {
            assert!(b.slice(t).is_identity(), "slice {t}");
        }
        // Forward from slice t covers slices t..=T.
        let f = spec.propagate_forward(&SpacetimePauli::embed(&m, 1, spec.depth()));
        for t in 0..1 {
            assert!(f.slice(t).is_identity(), "slice {t}");
        }
        for t in 1..=spec.depth() {
            assert_eq!(f.slice(t), m, "slice {t}");
        }
    }

    #[test]
    fn propagation_maps_are_automorphisms() {
        let layer0 = CliffordLayer::from_gates(3, &[Gate::Cnot { control: 0, target: 1 }, Gate::H(2)]).unwrap();
        let layer1 = CliffordLayer::from_gates(3, &[Gate::S(0), Gate::Swap(1, 2)]).unwrap();
        let spec = CircuitSpec::new(
            3,
            2,
            vec![layer0, layer1],
            vec![vec![], vec![]],
            vec![ps(3, "Z1Z2")],
            None,
        )
        .unwrap();
        let a = SpacetimePauli::parse(3, 2, "X1@t0Z3@t1").unwrap();
        let b = SpacetimePauli::parse(3, 2, "Y2@t1X3@t2").unwrap();
        // product rule
        assert_eq!(
            spec.propagate_forward(&a.mul(&b)),
            spec.propagate_forward(&a).mul(&spec.propagate_forward(&b))
        );
        assert_eq!(
            spec.propagate_backward(&a.mul(&b)),
            spec.propagate_backward(&a).mul(&spec.propagate_backward(&b))
        );
    }

    #[test]
    fn forward_backward_adjoint_identity() {
        // ⟨backward(a), b⟩ = ⟨a, forward(b)⟩ for all spacetime Paulis: the
        // two propagations are adjoint with respect to the symplectic form.
        let layer0 =
            CliffordLayer::from_gates(2, &[Gate::H(0), Gate::Cnot { control: 0, target: 1 }])
                .unwrap();
        let layer1 = CliffordLayer::from_gates(2, &[Gate::S(1)]).unwrap();
        let layer2 = CliffordLayer::from_gates(2, &[Gate::Cnot { control: 1, target: 0 }]).unwrap();
        let spec = CircuitSpec::new(
            2,
            3,
            vec![layer0, layer1, layer2],
            vec![vec![], vec![], vec![]],
            vec![ps(2, "Z1Z2")],
            None,
        )
        .unwrap();
        let lits = ["X1@t0", "Z2@t1", "Y1@t2X2@t3", "X1Z2@t1Z1@t3", "Z1@t0Y2@t2"];
        for la in lits {
            for lb in lits {
                let a = SpacetimePauli::parse(2, 3, la).unwrap();
                let b = SpacetimePauli::parse(2, 3, lb).unwrap();
                assert_eq!(
                    spec.propagate_backward(&a).symplectic(&b),
                    a.symplectic(&spec.propagate_forward(&b)),
                    "pair {la}, {lb}"
                );
            }
        }
    }

    #[test]
    fn transport_straddles_one_step() {
        let layer = CliffordLayer::from_gates(2, &[Gate::Cnot { control: 0, target: 1 }]).unwrap();
        let spec = CircuitSpec::new(
            2,
            2,
            vec![layer, CliffordLayer::identity(2)],
            vec![vec![], vec![]],
            vec![ps(2, "Z1Z2")],
            None,
        )
        .unwrap();
        let g = spec.pauli_transport(&ps(2, "X1"), 0);
        assert_eq!(g.slice(0), ps(2, "X1"));
        assert_eq!(g.slice(1), ps(2, "X1X2"));
        assert!(g.slice(2).is_identity());
    }

    #[test]
    fn validation_names_overlapping_checks() {
        let err = CircuitSpec::new(
            3,
            1,
            vec![CliffordLayer::identity(3)],
            vec![vec![ps(3, "Z1Z2"), ps(3, "Z2Z3")]],
            vec![ps(3, "Z1Z2"), ps(3, "Z2Z3")],
            None,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Z1Z2") && msg.contains("Z2Z3"), "got: {msg}");
    }

    #[test]
    fn validation_rejects_anticommuting_stabilizers() {
        let err = CircuitSpec::new(
            2,
            1,
            vec![CliffordLayer::identity(2)],
            vec![vec![]],
            vec![ps(2, "X1"), ps(2, "Z1")],
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("anticommute"));
    }

    #[test]
    fn validation_rejects_bad_logical() {
        // X1 anticommutes with the Z1Z2 stabilizer.
        let err = CircuitSpec::new(
            2,
            1,
            vec![CliffordLayer::identity(2)],
            vec![vec![]],
            vec![ps(2, "Z1Z2")],
            Some(vec![ps(2, "X1")]),
        )
        .unwrap_err();
        assert!(err.to_string().contains("anticommutes"));
        // a stabilizer itself is not a logical
        let err2 = CircuitSpec::new(
            2,
            1,
            vec![CliffordLayer::identity(2)],
            vec![vec![]],
            vec![ps(2, "Z1Z2")],
            Some(vec![ps(2, "Z1Z2")]),
        )
        .unwrap_err();
        assert!(err2.to_string().contains("stabilizer group"));
    }

    #[test]
    fn json_round_trip_with_gates_and_rows() {
        let text = r#"{
            "n": 2,
            "T": 2,
            "layers": [
                {"gates": [["CNOT", 1, 2]]},
                {"gates": []}
            ],
            "checks": [{"t": 1, "generators": ["Z1Z2"]}],
            "base_stabilizers": ["Z1Z2"],
            "logicals": ["X1X2", "Z1"]
        }"#;
        let spec = CircuitSpec::from_json(text).unwrap();
        assert_eq!(spec.n(), 2);
        assert_eq!(spec.depth(), 2);
        assert_eq!(spec.checks()[1], vec![ps(2, "Z1Z2")]);
        assert!(spec.checks()[0].is_empty());
        let round = CircuitSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert!(round == spec);
    }

    #[test]
    fn repetition_builder_shapes() {
        let spec = repetition_circuit(3, 3).unwrap();
        assert_eq!(spec.depth(), 6);
        assert!(spec.is_strict());
        assert_eq!(spec.checks()[0], vec![ps(3, "Z1Z2")]);
        assert_eq!(spec.checks()[1], vec![ps(3, "Z2Z3")]);
        let spec5 = repetition_circuit(5, 2).unwrap();
        assert_eq!(spec5.checks()[0], vec![ps(5, "Z1Z2"), ps(5, "Z3Z4")]);
        assert_eq!(spec5.checks()[1], vec![ps(5, "Z2Z3"), ps(5, "Z4Z5")]);
    }
}
