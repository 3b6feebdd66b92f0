//! Phase-free Pauli operators on `n` qubits and on spacetime slices.
//!
//! A Pauli is stored as an (x, z) pair of bit vectors; `Y` sets both bits.
//! Global phases are dropped throughout: the group is `F₂^{2n}` under XOR,
//! with commutation given by the symplectic form
//! `⟨a, b⟩ = a_x · b_z + a_z · b_x (mod 2)`.
//!
//! Spacetime Paulis live on slices `t = 0 .. T` of a depth-`T` circuit; the
//! slice-`t` component is the fault inserted just before the step-`t`
//! measurements. The symplectic form extends slice-wise.

use crate::gf2::{BitVec, Gf2Vector};
use crate::{Error, Result};

/// A phase-free Pauli string on `n` qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: BitVec,
    z: BitVec,
}

impl PauliString {
    /// The identity on `n` qubits.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    /// Builds from explicit x/z bit vectors.
    ///
    /// # Panics
    /// Panics when the vectors are not both of length `n`.
    #[must_use]
    pub fn from_xz(n: usize, x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), n, "x part length");
        assert_eq!(z.len(), n, "z part length");
        PauliString { n, x, z }
    }

    /// Parses a literal such as `"X1Z3"` or `"Y2"`. Qubit indices are
    /// 1-based; repeated letters on one qubit multiply, so `"X1Z1"` is `Y1`.
    /// `"I"` denotes the identity.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut p = PauliString::identity(n);
        if s == "I" {
            return Ok(p);
        }
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let (set_x, set_z) = match c {
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => {
                    return Err(Error::Parse(format!(
                        "expected X, Y or Z in Pauli literal {s:?}, found {c:?}"
                    )))
                }
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(*d);
                    chars.next();
                } else {
                    break;
                }
            }
            let idx: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("missing qubit index after {c} in {s:?}")))?;
            if idx == 0 || idx > n {
                return Err(Error::Parse(format!(
                    "qubit index {idx} out of range 1..={n} in {s:?}"
                )));
            }
            if set_x {
                p.x.flip(idx - 1);
            }
            if set_z {
                p.z.flip(idx - 1);
            }
        }
        Ok(p)
    }

    /// Number of qubits.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// X part, one bit per qubit.
    #[must_use]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    /// Z part, one bit per qubit.
    #[must_use]
    pub fn z(&self) -> &BitVec {
        &self.z
    }

    /// Multiplies `other` into `self` (phase-free: XOR of both parts).
    pub fn mul_assign(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Product of two Pauli strings.
    #[must_use]
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    /// Symplectic form: 1 exactly when the operators anticommute.
    #[must_use]
    pub fn symplectic(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// True when the operators commute.
    #[must_use]
    pub fn commutes(&self, other: &PauliString) -> bool {
        !self.symplectic(other)
    }

    /// True for the identity.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits acted on nontrivially.
    #[must_use]
    pub fn weight(&self) -> usize {
        self.support().count()
    }

    /// Qubits acted on nontrivially, ascending, 0-based.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&q| self.x.get(q) || self.z.get(q))
    }

    /// True when the two operators touch no common qubit.
    #[must_use]
    pub fn support_disjoint(&self, other: &PauliString) -> bool {
        let mut mine = BitVec::zeros(self.n);
        for q in self.support() {
            mine.set(q, true);
        }
        other.support().all(|q| !mine.get(q))
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for q in 0..self.n {
            match (self.x.get(q), self.z.get(q)) {
                (false, false) => {}
                (true, false) => write!(f, "X{}", q + 1)?,
                (false, true) => write!(f, "Z{}", q + 1)?,
                (true, true) => write!(f, "Y{}", q + 1)?,
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl Gf2Vector for PauliString {
    fn xor_with(&mut self, other: &Self) {
        self.mul_assign(other);
    }
    fn pivot(&self) -> Option<usize> {
        self.x.leading_one().or_else(|| self.z.leading_one().map(|i| self.n + i))
    }
    fn coord(&self, i: usize) -> bool {
        if i < self.n {
            self.x.get(i)
        } else {
            self.z.get(i - self.n)
        }
    }
}

/// A phase-free Pauli on the `T + 1` spacetime slices of a depth-`T`
/// circuit. Slice `t` holds the fault component inserted at time `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpacetimePauli {
    n: usize,
    t_max: usize,
    x: BitVec, // n * (t_max + 1) bits, slice-major
    z: BitVec,
}

impl SpacetimePauli {
    /// The identity on `n` qubits over slices `0 ..= t_max`.
    #[must_use]
    pub fn identity(n: usize, t_max: usize) -> Self {
        let nbits = n * (t_max + 1);
        SpacetimePauli {
            n,
            t_max,
            x: BitVec::zeros(nbits),
            z: BitVec::zeros(nbits),
        }
    }

    /// Embeds a Pauli string at slice `t` (identity elsewhere).
    ///
    /// # Panics
    /// Panics when `t > t_max` or the qubit counts disagree.
    #[must_use]
    pub fn embed(p: &PauliString, t: usize, t_max: usize) -> Self {
        assert!(t <= t_max, "slice {t} beyond t_max {t_max}");
        let mut out = SpacetimePauli::identity(p.n(), t_max);
        out.mul_slice(t, p);
        out
    }

    /// Number of qubits per slice.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest slice index (`T` for a depth-`T` circuit).
    #[must_use]
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// The Pauli string on slice `t`.
    ///
    /// # Panics
    /// Panics when `t > t_max`.
    #[must_use]
    pub fn slice(&self, t: usize) -> PauliString {
        assert!(t <= self.t_max, "slice {t} beyond t_max {}", self.t_max);
        let mut x = BitVec::zeros(self.n);
        let mut z = BitVec::zeros(self.n);
        for q in 0..self.n {
            x.set(q, self.x.get(t * self.n + q));
            z.set(q, self.z.get(t * self.n + q));
        }
        PauliString::from_xz(self.n, x, z)
    }

    /// Multiplies `p` into slice `t`.
    ///
    /// # Panics
    /// Panics when `t > t_max` or the qubit counts disagree.
    pub fn mul_slice(&mut self, t: usize, p: &PauliString) {
        assert!(t <= self.t_max, "slice {t} beyond t_max {}", self.t_max);
        assert_eq!(p.n(), self.n, "qubit count mismatch");
        for q in p.x().ones() {
            self.x.flip(t * self.n + q);
        }
        for q in p.z().ones() {
            self.z.flip(t * self.n + q);
        }
    }

    /// Multiplies `other` into `self`.
    ///
    /// # Panics
    /// Panics on shape mismatch.
    pub fn mul_assign(&mut self, other: &SpacetimePauli) {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        assert_eq!(self.t_max, other.t_max, "slice count mismatch");
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Product of two spacetime Paulis.
    #[must_use]
    pub fn mul(&self, other: &SpacetimePauli) -> SpacetimePauli {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    /// Slice-wise symplectic form: 1 exactly on anticommutation.
    #[must_use]
    pub fn symplectic(&self, other: &SpacetimePauli) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        assert_eq!(self.t_max, other.t_max, "slice count mismatch");
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// True for the identity.
    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Total number of (qubit, slice) sites acted on nontrivially.
    #[must_use]
    pub fn weight(&self) -> usize {
        let mut count = 0;
        for i in 0..self.x.len() {
            if self.x.get(i) || self.z.get(i) {
                count += 1;
            }
        }
        count
    }

    /// Slices with a nontrivial component, ascending.
    pub fn active_slices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.t_max).filter(|&t| !self.slice(t).is_identity())
    }

    /// Parses a literal of concatenated groups `"<pauli>@t<time>"`, for
    /// example `"X1@t0"` or `"Z1Z2@t0X1@t3"`. Groups at the same slice
    /// multiply together.
    pub fn parse(n: usize, t_max: usize, s: &str) -> Result<Self> {
        let mut out = SpacetimePauli::identity(n, t_max);
        if s == "I" {
            return Ok(out);
        }
        let mut rest = s;
        while !rest.is_empty() {
            let at = rest.find("@t").ok_or_else(|| {
                Error::Parse(format!("missing @t<time> marker in spacetime literal {s:?}"))
            })?;
            let pauli_part = &rest[..at];
            let after = &rest[at + 2..];
            let digits_end = after
                .char_indices()
                .find(|(_, c)| !c.is_ascii_digit())
                .map_or(after.len(), |(i, _)| i);
            if digits_end == 0 {
                return Err(Error::Parse(format!(
                    "missing time index after @t in spacetime literal {s:?}"
                )));
            }
            let t: usize = after[..digits_end]
                .parse()
                .map_err(|_| Error::Parse(format!("bad time index in {s:?}")))?;
            if t > t_max {
                return Err(Error::Parse(format!(
                    "time index {t} out of range 0..={t_max} in {s:?}"
                )));
            }
            let p = PauliString::parse(n, pauli_part)?;
            out.mul_slice(t, &p);
            rest = &after[digits_end..];
        }
        Ok(out)
    }
}

impl std::fmt::Display for SpacetimePauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for t in 0..=self.t_max {
            let p = self.slice(t);
            if !p.is_identity() {
                write!(f, "{p}@t{t}")?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for SpacetimePauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SpacetimePauli({self})")
    }
}

impl Gf2Vector for SpacetimePauli {
    fn xor_with(&mut self, other: &Self) {
        self.mul_assign(other);
    }
    fn pivot(&self) -> Option<usize> {
        let nbits = self.x.len();
        self.x
            .leading_one()
            .or_else(|| self.z.leading_one().map(|i| nbits + i))
    }
    fn coord(&self, i: usize) -> bool {
        let nbits = self.x.len();
        if i < nbits {
            self.x.get(i)
        } else {
            self.z.get(i - nbits)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        for s in ["I", "X1", "Z2", "Y3", "X1Z2", "X1Y2Z3"] {
            let p = PauliString::parse(3, s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        // products collapse: X1 Z1 = Y1
        let p = PauliString::parse(2, "X1Z1").unwrap();
        assert_eq!(p.to_string(), "Y1");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(PauliString::parse(2, "X0").is_err());
        assert!(PauliString::parse(2, "X3").is_err());
        assert!(PauliString::parse(2, "A1").is_err());
        assert!(PauliString::parse(2, "X").is_err());
    }

    #[test]
    fn single_qubit_commutation_table() {
        let n = 1;
        let x = PauliString::parse(n, "X1").unwrap();
        let y = PauliString::parse(n, "Y1").unwrap();
        let z = PauliString::parse(n, "Z1").unwrap();
        // distinct non-identity single-qubit Paulis anticommute
        assert!(x.symplectic(&y));
        assert!(x.symplectic(&z));
        assert!(y.symplectic(&z));
        // everything commutes with itself and the identity
        let i = PauliString::identity(n);
        for p in [&x, &y, &z] {
            assert!(!p.symplectic(p));
            assert!(!p.symplectic(&i));
        }
    }

    #[test]
    fn multi_qubit_commutation_counts_overlaps() {
        // X1X2 vs Z1Z2: two anticommuting overlaps, so they commute.
        let a = PauliString::parse(2, "X1X2").unwrap();
        let b = PauliString::parse(2, "Z1Z2").unwrap();
        assert!(a.commutes(&b));
        // X1X2 vs Z1: one overlap, anticommute.
        let c = PauliString::parse(2, "Z1").unwrap();
        assert!(a.symplectic(&c));
    }

    #[test]
    fn product_is_componentwise_xor() {
        let a = PauliString::parse(3, "X1Z2").unwrap();
        let b = PauliString::parse(3, "Z1Z2X3").unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab.to_string(), "Y1X3");
        // involution: multiplying again restores
        assert_eq!(ab.mul(&b), a);
    }

    #[test]
    fn spacetime_literals_and_slices() {
        let a = SpacetimePauli::parse(3, 4, "Z1Z2@t0X1@t3").unwrap();
        assert_eq!(a.slice(0).to_string(), "Z1Z2");
        assert_eq!(a.slice(3).to_string(), "X1");
        assert!(a.slice(1).is_identity());
        assert_eq!(a.to_string(), "Z1Z2@t0X1@t3");
        assert_eq!(
            SpacetimePauli::parse(3, 4, &a.to_string()).unwrap(),
            a
        );
        assert_eq!(a.weight(), 3);
        assert_eq!(a.active_slices().collect::<Vec<_>>(), vec![0, 3]);
    }

    #[test]
    fn spacetime_symplectic_is_slicewise() {
        let t_max = 2;
        let a = SpacetimePauli::parse(2, t_max, "X1@t0").unwrap();
        let b = SpacetimePauli::parse(2, t_max, "Z1@t0").unwrap();
        let c = SpacetimePauli::parse(2, t_max, "Z1@t1").unwrap();
        assert!(a.symplectic(&b)); // same slice, anticommuting
        assert!(!a.symplectic(&c)); // different slices never interact
        // two anticommuting slices cancel mod 2
        let d = SpacetimePauli::parse(2, t_max, "X1@t0X1@t1").unwrap();
        let e = SpacetimePauli::parse(2, t_max, "Z1@t0Z1@t1").unwrap();
        assert!(!d.symplectic(&e));
    }

    #[test]
    fn embed_matches_parse() {
        let p = PauliString::parse(4, "X2Z4").unwrap();
        let st = SpacetimePauli::embed(&p, 1, 3);
        assert_eq!(st, SpacetimePauli::parse(4, 3, "X2Z4@t1").unwrap());
    }
}
