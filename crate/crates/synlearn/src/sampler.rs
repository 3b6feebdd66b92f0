//! Monte Carlo syndrome sampling and eigenvalue estimation.
//!
//! Each shot fires every generator independently with its rate `q`, XORs
//! the fired syndromes, and records the resulting measurement bits. Shots
//! are keyed on (seed, shot index) through a counter-based stream cipher,
//! so a run is byte-identical no matter how shots are partitioned across
//! threads.
//!
//! Eigenvalues are read off as parities: for a selector `μ` over the
//! measurement generators, `λ̂ = mean of (−1)^{⟨μ, record⟩}`.

use crate::code::SpacetimeCode;
use crate::fault::FaultModel;
use crate::gf2::BitVec;
use crate::pauli::SpacetimePauli;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::io::{Read, Write};

const MAGIC: &[u8; 8] = b"SYNSHOTS";

/// A packed block of syndrome shots: `shots` records of `m` bits each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotSet {
    m: usize,
    shots: usize,
    words_per_shot: usize,
    data: Vec<u64>,
}

/// One eigenvalue estimate from a shot set.
#[derive(Clone, Debug)]
pub struct EigenvalueEstimate {
    /// Selector over measurement generators that was measured.
    pub mu: BitVec,
    /// Sample mean of the parity sign; in [-1, 1].
    pub lambda_hat: f64,
    /// Number of shots behind the estimate.
    pub shots: usize,
    /// Bernoulli rate `(1 − λ̂)/2`; in [0, 1].
    pub bern_rate: f64,
}

/// Samples `shots` syndrome records under the model.
///
/// Generator firing uses the rates as independent event probabilities; the
/// record is the XOR of the fired generators' syndromes. Determinism:
/// record `i` depends only on `(seed, i)`.
///
/// # Errors
/// [`Error::Validation`] when the model carries a negative rate (such
/// models are analysis-only: there is no Bernoulli process to run), or on
/// `shots == 0`; [`Error::Dimension`] on model/code shape mismatch.
pub fn sample_shots(
    model: &FaultModel,
    code: &SpacetimeCode,
    shots: usize,
    seed: u64,
) -> Result<ShotSet> {
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
    let m = code.syndrome_bits();
    let words_per_shot = m.div_ceil(64).max(1);
    // Precompute each generator's syndrome as packed words.
    let rates: Vec<f64> = model.generators().iter().map(|g| g.q).collect();
    let syndromes: Vec<Vec<u64>> = model
        .generators()
        .iter()
        .map(|g| {
            let syn = code.syndrome_of(&g.op);
            let mut w = syn.words().to_vec();
            w.resize(words_per_shot, 0);
            w
        })
        .collect();
    let mut data = vec![0u64; shots * words_per_shot];
    data.par_chunks_mut(words_per_shot)
        .enumerate()
        .with_min_len(256)
        .for_each(|(shot, out)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shot as u64);
            for (i, syn) in syndromes.iter().enumerate() {
                if rng.random::<f64>() < rates[i] {
                    for (o, w) in out.iter_mut().zip(syn) {
                        *o ^= w;
                    }
                }
            }
        });
    Ok(ShotSet {
        m,
        shots,
        words_per_shot,
        data,
    })
}

impl ShotSet {
    /// Bits per record.
    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of records.
    #[must_use]
    pub fn shots(&self) -> usize {
        self.shots
    }

    /// Record `i` as a bit vector.
    ///
    /// # Panics
    /// Panics when `i` is out of range.
    #[must_use]
    pub fn shot(&self, i: usize) -> BitVec {
        assert!(i < self.shots, "shot {i} out of range");
        let mut v = BitVec::zeros(self.m);
        let base = i * self.words_per_shot;
        for bit in 0..self.m {
            if self.data[base + bit / 64] >> (bit % 64) & 1 == 1 {
                v.set(bit, true);
            }
        }
        v
    }

    /// Mean parity sign over all records for the selector `mu`.
    ///
    /// # Errors
    /// [`Error::Dimension`] when `mu` has the wrong length.
    pub fn estimate_eigenvalue(&self, mu: &BitVec) -> Result<EigenvalueEstimate> {
        if mu.len() != self.m {
            return Err(Error::Dimension(format!(
                "selector has {} bits, records have {}",
                mu.len(),
                self.m
            )));
        }
        let mut mu_words = mu.words().to_vec();
        mu_words.resize(self.words_per_shot, 0);
        let odd: usize = self
            .data
            .par_chunks(self.words_per_shot)
            .with_min_len(4096)
            .map(|rec| {
                let ones: u32 = rec
                    .iter()
                    .zip(&mu_words)
                    .map(|(r, m)| (r & m).count_ones())
                    .sum();
                (ones & 1) as usize
            })
            .sum();
        let lambda_hat = (self.shots as f64 - 2.0 * odd as f64) / self.shots as f64;
        Ok(EigenvalueEstimate {
            mu: mu.clone(),
            lambda_hat,
            shots: self.shots,
            bern_rate: (1.0 - lambda_hat) / 2.0,
        })
    }

    /// Fraction of records that are not all-zero.
    #[must_use]
    pub fn nonzero_fraction(&self) -> f64 {
        let nz: usize = self
            .data
            .chunks(self.words_per_shot)
            .filter(|rec| rec.iter().any(|&w| w != 0))
            .count();
        nz as f64 / self.shots as f64
    }

    /// Appends another block with the same record width.
    ///
    /// # Errors
    /// [`Error::Dimension`] on width mismatch.
    pub fn concat(&self, other: &ShotSet) -> Result<ShotSet> {
        if self.m != other.m {
            return Err(Error::Dimension(format!(
                "cannot concatenate records of {} and {} bits",
                self.m, other.m
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ShotSet {
            m: self.m,
            shots: self.shots + other.shots,
            words_per_shot: self.words_per_shot,
            data,
        })
    }

    /// Writes the binary dump: magic, record width (u32 LE), count
    /// (u64 LE), then `⌈m/8⌉` bytes per record, LSB-first.
    pub fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.m as u32).to_le_bytes())?;
        w.write_all(&(self.shots as u64).to_le_bytes())?;
        let bytes_per_shot = self.m.div_ceil(8);
        for rec in self.data.chunks(self.words_per_shot) {
            for b in 0..bytes_per_shot {
                let byte = (rec[b / 8] >> (8 * (b % 8))) as u8;
                w.write_all(&[byte])?;
            }
        }
        Ok(())
    }

    /// Reads a binary dump written by [`ShotSet::write_binary`].
    ///
    /// # Errors
    /// [`Error::Parse`] on a bad header or truncated body.
    pub fn read_binary(r: &mut impl Read) -> Result<ShotSet> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|e| Error::Parse(format!("shot dump header: {e}")))?;
        if &magic != MAGIC {
            return Err(Error::Parse("not a shot dump (bad magic)".into()));
        }
        let mut m4 = [0u8; 4];
        r.read_exact(&mut m4)
            .map_err(|e| Error::Parse(format!("shot dump header: {e}")))?;
        let m = u32::from_le_bytes(m4) as usize;
        let mut s8 = [0u8; 8];
        r.read_exact(&mut s8)
            .map_err(|e| Error::Parse(format!("shot dump header: {e}")))?;
        let shots = u64::from_le_bytes(s8) as usize;
        let bytes_per_shot = m.div_ceil(8);
        let words_per_shot = m.div_ceil(64).max(1);
        let mut data = vec![0u64; shots * words_per_shot];
        let mut buf = vec![0u8; bytes_per_shot];
        for rec in data.chunks_mut(words_per_shot) {
            r.read_exact(&mut buf)
                .map_err(|e| Error::Parse(format!("shot dump body: {e}")))?;
            for (b, &byte) in buf.iter().enumerate() {
                rec[b / 8] |= (byte as u64) << (8 * (b % 8));
            }
        }
        Ok(ShotSet {
            m,
            shots,
            words_per_shot,
            data,
        })
    }

    /// Writes records as CSV, one row per shot, one 0/1 column per bit.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        let header: Vec<String> = (0..self.m).map(|i| format!("s{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.shots {
            let rec = self.shot(i);
            let row: Vec<&str> = (0..self.m)
                .map(|b| if rec.get(b) { "1" } else { "0" })
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// The product of measurement generators selected by `mu`, for labeling an
/// estimate with the operator it measures.
///
/// # Panics
/// Panics when `mu` is longer than the generator list.
#[must_use]
pub fn selected_product(code: &SpacetimeCode, mu: &BitVec) -> SpacetimePauli {
    let gens = code.meas_gens();
    assert!(mu.len() <= gens.len(), "selector too long");
    let circuit = code.circuit();
    let mut prod = SpacetimePauli::identity(circuit.n(), circuit.depth());
    for i in mu.ones() {
        prod.mul_assign(&gens[i]);
    }
    prod
}

/// Shots sufficient for relative precision `tau` on a Bernoulli rate near
/// `eps_guess` with failure probability `delta`:
/// `⌈12 · eps_guess⁻¹ · tau⁻² · ln(1/delta)⌉`.
///
/// # Errors
/// [`Error::Validation`] outside the domain
/// `0 < eps_guess < 1/2`, `0 < tau < 1`, `0 < delta < 1`.
pub fn shots_for_precision(eps_guess: f64, tau: f64, delta: f64) -> Result<usize> {
    if !(eps_guess > 0.0 && eps_guess < 0.5) {
        return Err(Error::Validation(format!(
            "eps_guess must lie in (0, 1/2), got {eps_guess}"
        )));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Validation(format!(
            "tau must lie in (0, 1), got {tau}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Validation(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let s = 12.0 / eps_guess / (tau * tau) * (1.0 / delta).ln();
    Ok(s.ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::repetition_circuit;
    use crate::fault::FaultGenerator;

    fn st(s: &str) -> SpacetimePauli {
        SpacetimePauli::parse(3, 6, s).unwrap()
    }

    fn rep_code() -> SpacetimeCode {
        SpacetimeCode::build(repetition_circuit(3, 3).unwrap()).unwrap()
    }

    fn x_model(q: f64) -> FaultModel {
        let mut gens = Vec::new();
        for t in 0..=6 {
            for qubit in 1..=3 {
                gens.push(FaultGenerator {
                    op: st(&format!("X{qubit}@t{t}")),
                    q,
                });
            }
        }
        FaultModel::new(3, 6, gens).unwrap()
    }

    #[test]
    fn empty_model_yields_zero_shots() {
        let code = rep_code();
        let m = FaultModel::new(3, 6, vec![]).unwrap();
        let s = sample_shots(&m, &code, 100, 7).unwrap();
        assert_eq!(s.shots(), 100);
        assert_eq!(s.nonzero_fraction(), 0.0);
        // zero selector and single-check selector both give exactly 1
        let est = s.estimate_eigenvalue(&BitVec::zeros(s.m())).unwrap();
        assert_eq!(est.lambda_hat, 1.0);
        assert_eq!(est.bern_rate, 0.0);
        let one = s
            .estimate_eigenvalue(&BitVec::from_indices(s.m(), &[0]))
            .unwrap();
        assert_eq!(one.lambda_hat, 1.0);
    }

    #[test]
    fn single_generator_firing_rate_is_binomial() {
        let code = rep_code();
        let q = 0.2;
        let m = FaultModel::new(
            3,
            6,
            vec![FaultGenerator { op: st("X1@t0"), q }],
        )
        .unwrap();
        let shots = 100_000;
        let s = sample_shots(&m, &code, shots, 11).unwrap();
        let rate = s.nonzero_fraction();
        let sigma = (q * (1.0 - q) / shots as f64).sqrt();
        assert!(
            (rate - q).abs() < 3.0 * sigma,
            "rate {rate} vs q {q} (3σ = {})",
            3.0 * sigma
        );
    }

    #[test]
    fn estimates_match_exact_eigenvalues_within_3_sigma() {
        let code = rep_code();
        let model = x_model(0.03);
        let shots = 100_000;
        let s = sample_shots(&model, &code, shots, 42).unwrap();
        for (i, g) in code.meas_gens().iter().enumerate() {
            let exact = model.eigenvalue(g);
            let mu = BitVec::from_indices(code.syndrome_bits(), &[i]);
            let est = s.estimate_eigenvalue(&mu).unwrap();
            let sigma = ((1.0 - exact * exact) / shots as f64).sqrt();
            assert!(
                (est.lambda_hat - exact).abs() < 3.0 * sigma,
                "generator {i}: {} vs {exact}",
                est.lambda_hat
            );
            // product selectors work too: subject is the generator product
            assert_eq!(selected_product(&code, &mu), *g);
        }
    }

    #[test]
    fn shots_are_deterministic_and_thread_count_invariant() {
        let code = rep_code();
        let model = x_model(0.05);
        let a = sample_shots(&model, &code, 5000, 123).unwrap();
        let b = sample_shots(&model, &code, 5000, 123).unwrap();
        assert_eq!(a, b);
        let c = sample_shots(&model, &code, 5000, 124).unwrap();
        assert_ne!(a, c);
        // explicit pools with different thread counts agree byte for byte
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_shots(&model, &code, 5000, 123).unwrap());
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| sample_shots(&model, &code, 5000, 123).unwrap());
        assert_eq!(one, four);
        assert_eq!(one, a);
        // prefixes agree as well: shot i depends only on (seed, i)
        let prefix = sample_shots(&model, &code, 100, 123).unwrap();
        for i in 0..100 {
            assert_eq!(prefix.shot(i), a.shot(i));
        }
    }

    #[test]
    fn negative_rates_are_refused() {
        let code = rep_code();
        let m = FaultModel::new(
            3,
            6,
            vec![FaultGenerator { op: st("X1@t0"), q: -0.05 }],
        )
        .unwrap();
        let err = sample_shots(&m, &code, 10, 0).unwrap_err();
        assert!(err.to_string().contains("cannot be sampled"), "got {err}");
    }

    #[test]
    fn concatenation_is_weighted_mean() {
        let code = rep_code();
        let model = x_model(0.05);
        let a = sample_shots(&model, &code, 3000, 1).unwrap();
        let b = sample_shots(&model, &code, 7000, 2).unwrap();
        let ab = a.concat(&b).unwrap();
        let mu = BitVec::from_indices(code.syndrome_bits(), &[0, 3]);
        let ea = a.estimate_eigenvalue(&mu).unwrap().lambda_hat;
        let eb = b.estimate_eigenvalue(&mu).unwrap().lambda_hat;
        let eab = ab.estimate_eigenvalue(&mu).unwrap().lambda_hat;
        let weighted = (3000.0 * ea + 7000.0 * eb) / 10_000.0;
        assert!((eab - weighted).abs() < 1e-12);
    }

    #[test]
    fn precision_schedule_and_domain() {
        assert_eq!(shots_for_precision(0.01, 0.1, 0.05).unwrap(), 359_488);
        // halving tau quadruples, halving eps doubles
        assert_eq!(shots_for_precision(0.01, 0.05, 0.05).unwrap(), 4 * 359_488);
        assert_eq!(shots_for_precision(0.005, 0.1, 0.05).unwrap(), 2 * 359_488);
        assert!(shots_for_precision(0.5, 0.1, 0.05).is_err());
        assert!(shots_for_precision(0.01, 1.0, 0.05).is_err());
        assert!(shots_for_precision(0.01, 0.1, 0.0).is_err());
    }

    #[test]
    fn binary_dump_round_trip() {
        let code = rep_code();
        let model = x_model(0.1);
        let s = sample_shots(&model, &code, 257, 9).unwrap();
        let mut buf = Vec::new();
        s.write_binary(&mut buf).unwrap();
        // header: magic + u32 width + u64 count + 1 byte per shot (m = 8)
        assert_eq!(buf.len(), 8 + 4 + 8 + 257 * code.syndrome_bits().div_ceil(8));
        let back = ShotSet::read_binary(&mut buf.as_slice()).unwrap();
        assert_eq!(back, s);
        // corrupt magic
        buf[0] ^= 0xff;
        assert!(ShotSet::read_binary(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn csv_rows_match_records() {
        let code = rep_code();
        let model = x_model(0.3);
        let s = sample_shots(&model, &code, 5, 21).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        let rec0 = s.shot(0);
        let cells: Vec<&str> = lines[1].split(',').collect();
        for (b, cell) in cells.iter().enumerate() {
            assert_eq!(*cell == "1", rec0.get(b));
        }
    }
}
