//! The spacetime code of a Clifford measurement circuit.
//!
//! Faults that change no measurement outcome and act trivially after the
//! final round form the spacetime gauge group `G`. It is generated by
//! (i) two-slice transports `a ⊗ u(a)` of every Pauli commuting with the
//! checks measured in between, (ii) the measured checks themselves on their
//! slice, and (iii) the base stabilizers on the final slice. Syndrome bits
//! correspond to an independent generating set `M` of the center `G ∩ G⊥`:
//! backward-propagated checks where those are central, completed from the
//! center when the circuit measures gauge (non-stabilizer) checks. What is
//! left of `G⊥` modulo `M` is spanned by the backward-propagated logicals.

use crate::circuit::CircuitSpec;
use crate::gf2::{kernel_basis, Basis, BitVec};
use crate::pauli::{PauliString, SpacetimePauli};
use crate::{Error, Result};

/// Dimension bookkeeping for a spacetime code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeDims {
    /// Dimension of the ambient spacetime Pauli group, `2 n (T + 1)`.
    pub dim: usize,
    /// Number of raw gauge generators before independence filtering.
    pub gauge_raw: usize,
    /// Rank of the gauge group.
    pub gauge_rank: usize,
    /// Number of syndrome bits: rank of the center `G ∩ G⊥`.
    pub meas_rank: usize,
    /// How many measurement generators came from backward-propagated checks
    /// (the rest were completed from a canonical basis of the center).
    pub meas_from_checks: usize,
    /// Number of encoded logical qubits.
    pub k: usize,
}

/// The spacetime gauge, measurement and logical structure of a circuit.
pub struct SpacetimeCode {
    circuit: CircuitSpec,
    dims: CodeDims,
    gauge_gens: Vec<SpacetimePauli>,
    gauge_basis: Basis<SpacetimePauli>,
    meas_gens: Vec<SpacetimePauli>,
    logical_gens: Vec<SpacetimePauli>,
    base_logicals: Vec<PauliString>,
    stab_basis: Basis<PauliString>,
}

impl SpacetimeCode {
    /// Builds the spacetime code of a validated circuit.
    ///
    /// # Errors
    /// [`Error::Validation`] when user-declared logicals do not match the
    /// computed logical count, or internal consistency checks fail.
    pub fn build(circuit: CircuitSpec) -> Result<Self> {
        let n = circuit.n();
        let depth = circuit.depth();
        let dim = 2 * n * (depth + 1);

        // (i) transports of each step's check commutant.
        let mut gauge_gens: Vec<SpacetimePauli> = Vec::new();
        for t in 0..depth {
            let commutant = check_commutant(n, &circuit.checks()[t]);
            for a in &commutant {
                gauge_gens.push(circuit.pauli_transport(a, t));
            }
        }
        // (ii) measured checks on their own slice.
        for (t, step) in circuit.checks().iter().enumerate() {
            for m in step {
                gauge_gens.push(SpacetimePauli::embed(m, t, depth));
            }
        }
        // (iii) base stabilizers on the final slice.
        for s in circuit.base_stabilizers() {
            gauge_gens.push(SpacetimePauli::embed(s, depth, depth));
        }

        let mut gauge_basis: Basis<SpacetimePauli> = Basis::new();
        for g in &gauge_gens {
            gauge_basis.insert(g);
        }
        let gauge_rank = gauge_basis.len();
        let perp_rank = dim - gauge_rank;

        // Center G ∩ G⊥ from the kernel of the Gram matrix of the raw
        // generators: a kernel vector u yields the central element ∏_u g_i.
        let r = gauge_gens.len();
        let gram: Vec<BitVec> = (0..r)
            .map(|i| {
                let mut row = BitVec::zeros(r);
                for j in 0..r {
                    if gauge_gens[i].symplectic(&gauge_gens[j]) {
                        row.set(j, true);
                    }
                }
                row
            })
            .collect();
        let center_combos = kernel_basis(&gram, r);
        let center_elements: Vec<SpacetimePauli> = center_combos
            .iter()
            .map(|u| {
                let mut acc = SpacetimePauli::identity(n, depth);
                for i in u.ones() {
                    acc.mul_assign(&gauge_gens[i]);
                }
                acc
            })
            .collect();
        let meas_rank = {
            let mut b: Basis<SpacetimePauli> = Basis::new();
            for z in &center_elements {
                b.insert(z);
            }
            b.len()
        };

        // Prefer backward-propagated checks as measurement generators:
        // ascending step, declaration order, then the terminal stabilizers.
        let in_perp = |v: &SpacetimePauli| gauge_gens.iter().all(|g| !g.symplectic(v));
        let mut meas_basis: Basis<SpacetimePauli> = Basis::new();
        let mut meas_gens: Vec<SpacetimePauli> = Vec::new();
        let mut candidates: Vec<SpacetimePauli> = Vec::new();
        for (t, step) in circuit.checks().iter().enumerate() {
            for m in step {
                candidates.push(circuit.backward_from(m, t));
            }
        }
        for s in circuit.base_stabilizers() {
            candidates.push(circuit.backward_from(s, depth));
        }
        for cand in &candidates {
            if gauge_basis.contains(cand) && in_perp(cand) && meas_basis.insert(cand) {
                meas_gens.push(cand.clone());
            }
        }
        let meas_from_checks = meas_gens.len();
        for z in &center_elements {
            if meas_basis.len() == meas_rank {
                break;
            }
            if meas_basis.insert(z) {
                meas_gens.push(z.clone());
            }
        }
        if meas_basis.len() != meas_rank {
            return Err(Error::Validation(
                "internal: measurement generators fail to span the center".into(),
            ));
        }

        if !(perp_rank - meas_rank).is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "internal: odd logical dimension {} in the spacetime code",
                perp_rank - meas_rank
            )));
        }
        let k = (perp_rank - meas_rank) / 2;

        // Base logicals: user-declared, or computed as a canonical basis of
        // the commutant of stabilizers-and-checks modulo its central part.
        let base_logicals: Vec<PauliString> = match circuit.logicals() {
            Some(user) => {
                if user.len() != 2 * k {
                    return Err(Error::Validation(format!(
                        "{} logical representatives declared, but the code encodes k={k} \
                         qubits and needs exactly {}",
                        user.len(),
                        2 * k
                    )));
                }
                user.to_vec()
            }
            None => compute_base_logicals(&circuit, 2 * k)?,
        };
        let logical_gens: Vec<SpacetimePauli> = base_logicals
            .iter()
            .map(|l| circuit.backward_from(l, depth))
            .collect();
        // Logical generators must be central candidates too (they commute
        // with the gauge group) yet independent of the measurement span.
        let mut full_basis = clone_basis(&meas_basis);
        for (l, spacetime) in base_logicals.iter().zip(&logical_gens) {
            if !in_perp(spacetime) {
                return Err(Error::Validation(format!(
                    "logical {l} fails to commute with the spacetime gauge group"
                )));
            }
            if !full_basis.insert(spacetime) {
                return Err(Error::Validation(format!(
                    "logical {l} is dependent on the measurement group and earlier logicals"
                )));
            }
        }

        let mut stab_basis: Basis<PauliString> = Basis::new();
        for s in circuit.base_stabilizers() {
            stab_basis.insert(s);
        }

        Ok(SpacetimeCode {
            dims: CodeDims {
                dim,
                gauge_raw: gauge_gens.len(),
                gauge_rank,
                meas_rank,
                meas_from_checks,
                k,
            },
            circuit,
            gauge_gens,
            gauge_basis,
            meas_gens,
            logical_gens,
            base_logicals,
            stab_basis,
        })
    }

    /// The underlying circuit.
    #[must_use]
    pub fn circuit(&self) -> &CircuitSpec {
        &self.circuit
    }

    /// Dimension record.
    #[must_use]
    pub fn dims(&self) -> CodeDims {
        self.dims
    }

    /// Raw gauge generating set (deterministic order, not filtered).
    #[must_use]
    pub fn gauge_gens(&self) -> &[SpacetimePauli] {
        &self.gauge_gens
    }

    /// Independent measurement generators; syndrome bit `i` reports
    /// anticommutation with `meas_gens()[i]`.
    #[must_use]
    pub fn meas_gens(&self) -> &[SpacetimePauli] {
        &self.meas_gens
    }

    /// Backward-propagated logical generators, `2k` of them.
    #[must_use]
    pub fn logical_gens(&self) -> &[SpacetimePauli] {
        &self.logical_gens
    }

    /// The base-code logical representatives behind `logical_gens`.
    #[must_use]
    pub fn base_logicals(&self) -> &[PauliString] {
        &self.base_logicals
    }

    /// Number of syndrome bits.
    #[must_use]
    pub fn syndrome_bits(&self) -> usize {
        self.dims.meas_rank
    }

    /// True when `v` lies in the spacetime gauge group.
    #[must_use]
    pub fn in_gauge(&self, v: &SpacetimePauli) -> bool {
        self.gauge_basis.contains(v)
    }

    /// True when `v` commutes with the entire gauge group.
    #[must_use]
    pub fn in_gauge_perp(&self, v: &SpacetimePauli) -> bool {
        self.gauge_gens.iter().all(|g| !g.symplectic(v))
    }

    /// Syndrome of a spacetime fault: one bit per measurement generator.
    #[must_use]
    pub fn syndrome_of(&self, a: &SpacetimePauli) -> BitVec {
        let mut s = BitVec::zeros(self.meas_gens.len());
        for (i, m) in self.meas_gens.iter().enumerate() {
            if m.symplectic(a) {
                s.set(i, true);
            }
        }
        s
    }

    /// True when a residual fault acts trivially both on all syndrome bits
    /// and on the logical state: membership in the gauge group.
    #[must_use]
    pub fn is_benign(&self, residual: &SpacetimePauli) -> bool {
        self.in_gauge(residual)
    }

    /// Boosted-frame failure test: forward-propagates the residual to the
    /// final slice and asks whether, together with the base logical, it
    /// lies in the base stabilizer group.
    #[must_use]
    pub fn final_slice_in_stabilizer(&self, residual: &SpacetimePauli, l: &PauliString) -> bool {
        let fwd = self.circuit.propagate_forward(residual);
        let final_op = fwd.slice(self.circuit.depth()).mul(l);
        self.stab_basis.contains(&final_op)
    }
}

impl std::fmt::Debug for SpacetimeCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SpacetimeCode({:?})", self.dims)
    }
}

fn clone_basis(b: &Basis<SpacetimePauli>) -> Basis<SpacetimePauli> {
    let mut out = Basis::new();
    for row in b.rows() {
        out.insert(row);
    }
    out
}

/// Basis of the commutant of `checks` inside the `n`-qubit Pauli group:
/// the kernel of the symplectic pairing against each check.
fn check_commutant(n: usize, checks: &[PauliString]) -> Vec<PauliString> {
    let rows: Vec<BitVec> = checks.iter().map(twisted_flat).collect();
    kernel_basis(&rows, 2 * n)
        .into_iter()
        .map(|v| unflatten(n, &v))
        .collect()
}

/// Flattens a Pauli with x/z parts swapped, so that a plain GF(2) dot with
/// an (x‖z)-flattened Pauli computes the symplectic form.
fn twisted_flat(p: &PauliString) -> BitVec {
    let n = p.n();
    let mut v = BitVec::zeros(2 * n);
    for q in p.z().ones() {
        v.set(q, true);
    }
    for q in p.x().ones() {
        v.set(n + q, true);
    }
    v
}

fn unflatten(n: usize, v: &BitVec) -> PauliString {
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for i in v.ones() {
        if i < n {
            x.set(i, true);
        } else {
            z.set(i - n, true);
        }
    }
    PauliString::from_xz(n, x, z)
}

/// Canonical logical representatives: a basis of the commutant of the base
/// group (stabilizers and checks) modulo its intersection with that group's
/// span, taking kernel vectors with lexicographically smallest pivots first.
fn compute_base_logicals(circuit: &CircuitSpec, want: usize) -> Result<Vec<PauliString>> {
    let n = circuit.n();
    let mut base_gens: Vec<PauliString> = circuit.base_stabilizers().to_vec();
    for step in circuit.checks() {
        base_gens.extend(step.iter().cloned());
    }
    let rows: Vec<BitVec> = base_gens.iter().map(twisted_flat).collect();
    let commutant = kernel_basis(&rows, 2 * n);

    // Central part: elements of span(base_gens) commuting with all of them,
    // via the Gram-matrix kernel.
    let r = base_gens.len();
    let gram: Vec<BitVec> = (0..r)
        .map(|i| {
            let mut row = BitVec::zeros(r);
            for j in 0..r {
                if base_gens[i].symplectic(&base_gens[j]) {
                    row.set(j, true);
                }
            }
            row
        })
        .collect();
    let mut quotient_seed: Basis<PauliString> = Basis::new();
    for u in kernel_basis(&gram, r) {
        let mut acc = PauliString::identity(n);
        for i in u.ones() {
            acc.mul_assign(&base_gens[i]);
        }
        quotient_seed.insert(&acc);
    }

    let mut logicals = Vec::new();
    for v in &commutant {
        if logicals.len() == want {
            break;
        }
        let p = unflatten(n, v);
        if quotient_seed.insert(&p) {
            logicals.push(p);
        }
    }
    if logicals.len() != want {
        return Err(Error::Validation(format!(
            "computed {} logical representatives, expected {want}",
            logicals.len()
        )));
    }
    Ok(logicals)
}
