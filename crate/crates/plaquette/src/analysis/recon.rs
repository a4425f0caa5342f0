//! Conditional-frequency tomography: the difference matrix B linking
//! diagonal energies to Ramsey frequency shifts, and the Hadamard/
//! pseudo-inverse recovery of Z-string strengths.
//!
//! Conventions, fixed once for the whole crate: the frame label orders the
//! control first, then the spectators in device order. An energy index
//! `ijkl` maps to an integer with `i` (the control bit) as the most
//! significant bit. Z-string labels use the same character order, and the
//! order-16 Hadamard matrix is the Sylvester construction over the same
//! bits, H[a][b] = (−1)^popcount(a AND b).

use crate::error::{Error, Result};
use crate::qsim::PauliString;
use nalgebra::{DMatrix, DVector};
use std::fs;
use std::path::Path;

/// Couplings weaker than this are reported as below the measurement
/// sensitivity (Hz).
pub const SENSITIVITY_LIMIT_HZ: f64 = 100e3;

/// Relative singular-value cutoff for the rank-deficient solve.
const RANK_TOLERANCE: f64 = 1e-10;

/// The 24 conditional frequency differences measured for one CR gate.
///
/// Entries are blocked by measured spectator position in the frame label
/// (position 3 first, then 2, then 1, matching the marker moving left
/// through the published table) and ordered by conditioning bits ascending
/// within a block. Conditioning bit 0 is the control.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaTable {
    pub gate: String,
    entries_hz: Vec<f64>,
}

/// Blocks iterate the measured frame position from last to first.
pub const MEASURED_POSITIONS: [usize; 3] = [3, 2, 1];

impl ZetaTable {
    /// Build from 24 entries already in canonical row order.
    pub fn new(gate: &str, entries_hz: Vec<f64>) -> Result<Self> {
        if entries_hz.len() != 24 {
            return Err(Error::BadZetaTable { expected: 24, got: entries_hz.len() });
        }
        if let Some(bad) = entries_hz.iter().find(|v| !v.is_finite()) {
            return Err(Error::BadConfig(format!("zeta entry {bad} is not finite")));
        }
        Ok(Self { gate: gate.to_string(), entries_hz })
    }

    /// Canonical row index of (measured frame position, conditioning bits).
    pub fn row_index(measured_position: usize, conditioning: usize) -> Result<usize> {
        let block = MEASURED_POSITIONS
            .iter()
            .position(|p| *p == measured_position)
            .ok_or_else(|| {
                Error::BadConfig(format!(
                    "measured position must be 1, 2, or 3 in the frame label, got {measured_position}"
                ))
            })?;
        if conditioning >= 8 {
            return Err(Error::BadConfig(format!(
                "conditioning bits must be 3 bits, got {conditioning}"
            )));
        }
        Ok(block * 8 + conditioning)
    }

    pub fn entry_hz(&self, measured_position: usize, conditioning: usize) -> Result<f64> {
        Ok(self.entries_hz[Self::row_index(measured_position, conditioning)?])
    }

    pub fn entries_hz(&self) -> &[f64] {
        &self.entries_hz
    }

    pub fn as_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.entries_hz)
    }

    /// Serialize in canonical row order with a convention-naming comment.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "# conditional frequency differences; blocks by measured frame position 3,2,1 (marker moving left), conditioning bits ascending, control bit first\n",
        );
        out.push_str("gate,measured_position,conditioning_bits,zeta_hz\n");
        for (block, position) in MEASURED_POSITIONS.iter().enumerate() {
            for bits in 0..8 {
                out.push_str(&format!(
                    "{},{},{:03b},{}\n",
                    self.gate, position, bits, self.entries_hz[block * 8 + bits]
                ));
            }
        }
        out
    }

    pub fn from_csv_string(text: &str, origin: &str) -> Result<Self> {
        let bad = |message: String| Error::BadCsv { path: origin.to_string(), message };
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut gate: Option<String> = None;
        let mut entries = vec![None; 24];
        let mut rows = 0usize;
        for record in reader.records() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            rows += 1;
            if record.len() != 4 {
                return Err(bad(format!("row {rows} has {} fields, expected 4", record.len())));
            }
            let row_gate = record[0].to_string();
            match &gate {
                None => gate = Some(row_gate),
                Some(g) if *g == row_gate => {}
                Some(g) => {
                    return Err(bad(format!("mixed gate names {g} and {row_gate}")));
                }
            }
            let position: usize = record[1]
                .parse()
                .map_err(|_| bad(format!("bad measured position {:?}", &record[1])))?;
            let bits = usize::from_str_radix(&record[2], 2)
                .map_err(|_| bad(format!("bad conditioning bits {:?}", &record[2])))?;
            if record[2].len() != 3 || bits >= 8 {
                return Err(bad(format!("conditioning bits must be 3 binary digits, got {:?}", &record[2])));
            }
            let value: f64 = record[3]
                .parse()
                .map_err(|_| bad(format!("bad frequency {:?}", &record[3])))?;
            let index = Self::row_index(position, bits).map_err(|e| bad(e.to_string()))?;
            if entries[index].replace(value).is_some() {
                return Err(bad(format!(
                    "duplicate row for position {position}, bits {bits:03b}"
                )));
            }
        }
        if rows != 24 {
            return Err(Error::BadZetaTable { expected: 24, got: rows });
        }
        let entries: Vec<f64> = entries.into_iter().map(|v| v.unwrap()).collect();
        Self::new(&gate.unwrap_or_default(), entries)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_csv_string(&text, &path.display().to_string())
    }
}

/// Diagonal energies η over the 16 frame basis states, defined up to the
/// two-dimensional nullspace (global shift and control-conditional shift).
#[derive(Debug, Clone, PartialEq)]
pub struct EtaVector {
    values_hz: Vec<f64>,
}

impl EtaVector {
    pub fn new(values_hz: Vec<f64>) -> Result<Self> {
        if values_hz.len() != 16 {
            return Err(Error::DimensionMismatch { got: values_hz.len(), expected: 16 });
        }
        Ok(Self { values_hz })
    }

    /// η = H₁₆ α / 2 for α given in label order (index 0 = IIII).
    pub fn from_alpha_values(alpha_hz: &[f64]) -> Result<Self> {
        if alpha_hz.len() != 16 {
            return Err(Error::DimensionMismatch { got: alpha_hz.len(), expected: 16 });
        }
        let h = hadamard_matrix(16);
        let eta = h * DVector::from_column_slice(alpha_hz) / 2.0;
        Self::new(eta.iter().copied().collect())
    }

    pub fn values_hz(&self) -> &[f64] {
        &self.values_hz
    }

    /// α = H₁₆ η / 8, in label order.
    pub fn alpha_values_hz(&self) -> Vec<f64> {
        let h = hadamard_matrix(16);
        (h * DVector::from_column_slice(&self.values_hz) / 8.0).iter().copied().collect()
    }

    /// ζ = B η for the canonical three-spectator frame.
    pub fn zeta(&self, gate: &str) -> ZetaTable {
        let zeta = build_b_matrix() * DVector::from_column_slice(&self.values_hz);
        ZetaTable::new(gate, zeta.iter().copied().collect())
            .expect("B maps 16 finite energies to 24 finite differences")
    }

    /// Project out the nullspace components (global shift and the shift
    /// conditioned on the control bit).
    pub fn to_minimum_norm_gauge(&self) -> Self {
        let mut values = self.values_hz.clone();
        let mean = values.iter().sum::<f64>() / 16.0;
        for v in values.iter_mut() {
            *v -= mean;
        }
        let control_signed = |i: usize| if i & 0b1000 == 0 { 1.0 } else { -1.0 };
        let control_mean =
            values.iter().enumerate().map(|(i, v)| control_signed(i) * v).sum::<f64>() / 16.0;
        for (i, v) in values.iter_mut().enumerate() {
            *v -= control_signed(i) * control_mean;
        }
        Self { values_hz: values }
    }

    pub fn is_minimum_norm(&self) -> bool {
        let sum: f64 = self.values_hz.iter().sum();
        let signed: f64 = self
            .values_hz
            .iter()
            .enumerate()
            .map(|(i, v)| if i & 0b1000 == 0 { *v } else { -*v })
            .sum();
        let scale = self.values_hz.iter().map(|v| v.abs()).fold(1.0, f64::max);
        sum.abs() <= 1e-9 * scale && signed.abs() <= 1e-9 * scale
    }
}

/// Reconstructed Z-string strengths for one gate, with the least-squares
/// residual of the solve.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub gate: String,
    /// All 16 strengths in label order (IIII first, ZZZZ last).
    values_hz: Vec<f64>,
    pub residual_norm_hz: f64,
}

impl AlphaEstimate {
    pub fn new(gate: &str, values_hz: Vec<f64>, residual_norm_hz: f64) -> Result<Self> {
        if values_hz.len() != 16 {
            return Err(Error::DimensionMismatch { got: values_hz.len(), expected: 16 });
        }
        Ok(Self { gate: gate.to_string(), values_hz, residual_norm_hz })
    }

    pub fn labels() -> Vec<String> {
        (0..16).map(|mask| PauliString::z_from_mask(mask, 4).label()).collect()
    }

    pub fn values_hz(&self) -> &[f64] {
        &self.values_hz
    }

    pub fn value_hz(&self, label: &str) -> Result<f64> {
        let mask = PauliString::from_label(label)?.z_mask()?;
        Ok(self.values_hz[mask])
    }

    /// True when the strength sits below the published sensitivity limit.
    pub fn below_sensitivity(&self, label: &str) -> Result<bool> {
        Ok(self.value_hz(label)?.abs() < SENSITIVITY_LIMIT_HZ)
    }

    /// Labels at or above the sensitivity limit, strongest first.
    pub fn significant(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Self::labels()
            .into_iter()
            .zip(self.values_hz.iter().copied())
            .filter(|(_, v)| v.abs() >= SENSITIVITY_LIMIT_HZ)
            .collect();
        out.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
        out
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "# Z-string strengths in label order (control character first); below_sensitivity marks |alpha| under 100 kHz\n",
        );
        out.push_str("gate,z_string,alpha_hz,below_sensitivity\n");
        for (label, value) in Self::labels().iter().zip(&self.values_hz) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.gate,
                label,
                value,
                value.abs() < SENSITIVITY_LIMIT_HZ
            ));
        }
        out
    }

    pub fn from_csv_string(text: &str, origin: &str) -> Result<Self> {
        let bad = |message: String| Error::BadCsv { path: origin.to_string(), message };
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut gate: Option<String> = None;
        let mut values = vec![None; 16];
        let mut rows = 0usize;
        for record in reader.records() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            rows += 1;
            if record.len() < 3 {
                return Err(bad(format!("row {rows} has {} fields, expected 3+", record.len())));
            }
            let row_gate = record[0].to_string();
            match &gate {
                None => gate = Some(row_gate),
                Some(g) if *g == row_gate => {}
                Some(g) => return Err(bad(format!("mixed gate names {g} and {row_gate}"))),
            }
            let mask = PauliString::from_label(&record[1])
                .and_then(|p| p.z_mask())
                .map_err(|e| bad(e.to_string()))?;
            let value: f64 = record[2]
                .parse()
                .map_err(|_| bad(format!("bad strength {:?}", &record[2])))?;
            if values[mask].replace(value).is_some() {
                return Err(bad(format!("duplicate row for {}", &record[1])));
            }
        }
        if rows != 16 {
            return Err(bad(format!("expected 16 rows, got {rows}")));
        }
        let values: Vec<f64> = values.into_iter().map(|v| v.unwrap()).collect();
        Self::new(&gate.unwrap_or_default(), values, 0.0)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_csv_string(&text, &path.display().to_string())
    }
}

/// Sylvester Hadamard matrix of the given power-of-two order.
pub fn hadamard_matrix(order: usize) -> DMatrix<f64> {
    assert!(order.is_power_of_two(), "Hadamard order must be a power of two");
    DMatrix::from_fn(order, order, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// The difference matrix for a frame with `n_spectators` spectators:
/// one row per (measured spectator, conditioning state) pair, +1 at the
/// energy index with the measured bit 0 and −1 with the measured bit 1.
pub fn build_b_matrix_n(n_spectators: usize) -> DMatrix<f64> {
    assert!(n_spectators >= 1, "a frame needs at least one spectator");
    let chars = n_spectators + 1;
    let states = 1usize << (chars - 1);
    let rows = n_spectators * states;
    let mut b = DMatrix::zeros(rows, 1 << chars);
    let mut row = 0;
    for measured in (1..chars).rev() {
        let conditioning: Vec<usize> =
            std::iter::once(0).chain((1..chars).filter(|p| *p != measured)).collect();
        for bits in 0..states {
            let mut base = 0usize;
            for (order, position) in conditioning.iter().enumerate() {
                if (bits >> (chars - 2 - order)) & 1 == 1 {
                    base |= 1 << (chars - 1 - position);
                }
            }
            b[(row, base)] = 1.0;
            b[(row, base | 1 << (chars - 1 - measured))] = -1.0;
            row += 1;
        }
    }
    b
}

/// The canonical 24×16 difference matrix for three spectators.
pub fn build_b_matrix() -> DMatrix<f64> {
    build_b_matrix_n(3)
}

fn pseudo_inverse(b: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = b.clone().svd(true, true);
    let cutoff = RANK_TOLERANCE * svd.singular_values.amax();
    svd.pseudo_inverse(cutoff).expect("the fixed B matrix always factors")
}

/// Rank of B at the solver's own tolerance.
pub fn b_matrix_rank() -> usize {
    let b = build_b_matrix();
    let svd = b.svd(false, false);
    let cutoff = RANK_TOLERANCE * svd.singular_values.amax();
    svd.singular_values.iter().filter(|s| **s > cutoff).count()
}

/// Worst-case amplification of a single corrupted frequency difference
/// into any recovered strength: max |(H₁₆/8)·B⁺|.
pub fn sensitivity_bound() -> f64 {
    let amplification = hadamard_matrix(16) * pseudo_inverse(&build_b_matrix()) / 8.0;
    amplification.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Recover Z-string strengths from measured frequency differences by the
/// minimum-norm least-squares solve η̂ = B⁺ζ followed by the Hadamard
/// transform α̂ = H₁₆ η̂ / 8.
///
/// The minimum-norm gauge zeroes the two unobservable components, so the
/// all-identity entry and the control-only entry of the result are exactly
/// zero. The reported residual is ‖Bη̂ − ζ‖₂.
pub fn reconstruct_alpha(zeta: &ZetaTable) -> AlphaEstimate {
    let b = build_b_matrix();
    let z = zeta.as_vector();
    let eta = pseudo_inverse(&b) * &z;
    let residual = (&b * &eta - &z).norm();
    let mut alpha: Vec<f64> =
        (hadamard_matrix(16) * &eta / 8.0).iter().copied().collect();
    alpha[0b0000] = 0.0;
    alpha[0b1000] = 0.0;
    AlphaEstimate::new(&zeta.gate, alpha, residual)
        .expect("reconstruction always yields 16 entries")
}

#[cfg(test)]
mod tests {
    use super::*;

    const KHZ: f64 = 1e3;

    fn table_cr4() -> ZetaTable {
        let entries: Vec<f64> = [
            790.0, 730.0, 730.0, 730.0, 520.0, 580.0, 520.0, 520.0, // measured position 3
            130.0, 110.0, 100.0, 70.0, 40.0, 40.0, 40.0, 40.0, // measured position 2
            -50.0, -50.0, -50.0, -50.0, -50.0, -50.0, -50.0, -50.0, // measured position 1
        ]
        .iter()
        .map(|v| v * KHZ)
        .collect();
        ZetaTable::new("CR4", entries).unwrap()
    }

    #[test]
    fn b_matrix_structure() {
        let b = build_b_matrix();
        assert_eq!(b.shape(), (24, 16));
        for row in 0..24 {
            let mut nonzero = 0;
            let mut sum = 0.0;
            for col in 0..16 {
                if b[(row, col)] != 0.0 {
                    nonzero += 1;
                }
                sum += b[(row, col)];
            }
            assert_eq!(nonzero, 2, "row {row}");
            assert_eq!(sum, 0.0, "row {row}");
        }
        // First row measures the last frame position, all conditioning 0:
        // eta_0000 - eta_0001.
        assert_eq!(b[(0, 0b0000)], 1.0);
        assert_eq!(b[(0, 0b0001)], -1.0);
        // Row 8 starts the middle-position block: eta_0000 - eta_0010.
        assert_eq!(b[(8, 0b0000)], 1.0);
        assert_eq!(b[(8, 0b0010)], -1.0);
        // Row 16 starts the first-position block: eta_0000 - eta_0100.
        assert_eq!(b[(16, 0b0000)], 1.0);
        assert_eq!(b[(16, 0b0100)], -1.0);
    }

    #[test]
    fn b_matrix_rank_and_nullspace() {
        assert_eq!(b_matrix_rank(), 14);
        let b = build_b_matrix();
        let ones = DVector::from_element(16, 1.0);
        assert!((&b * ones).amax() < 1e-12);
        let control = DVector::from_fn(16, |i, _| if i & 0b1000 == 0 { 1.0 } else { -1.0 });
        assert!((&b * control).amax() < 1e-12);
    }

    #[test]
    fn hadamard_squares_to_order_times_identity() {
        let h = hadamard_matrix(16);
        let hh = &h * &h;
        for i in 0..16 {
            for j in 0..16 {
                let expected = if i == j { 16.0 } else { 0.0 };
                assert_eq!(hh[(i, j)], expected);
            }
        }
    }

    #[test]
    fn forward_map_reproduces_published_block_means() {
        // Strengths of the strongest gate: 640 kHz on the last spectator,
        // 105 kHz on control+last.
        let mut alpha = vec![0.0; 16];
        alpha[0b0001] = 640.0 * KHZ;
        alpha[0b1001] = 105.0 * KHZ;
        let eta = EtaVector::from_alpha_values(&alpha).unwrap();
        let zeta = eta.zeta("CR4");
        let block: Vec<f64> = (0..8).map(|c| zeta.entry_hz(3, c).unwrap()).collect();
        let control0: f64 = block[..4].iter().sum::<f64>() / 4.0;
        let control1: f64 = block[4..].iter().sum::<f64>() / 4.0;
        assert!((control0 - 745.0 * KHZ).abs() < 1e-6);
        assert!((control1 - 535.0 * KHZ).abs() < 1e-6);
    }

    #[test]
    fn zero_zeta_reconstructs_to_zero() {
        let zeta = ZetaTable::new("CR1", vec![0.0; 24]).unwrap();
        let estimate = reconstruct_alpha(&zeta);
        assert!(estimate.values_hz().iter().all(|v| v.abs() < 1e-12));
        assert_eq!(estimate.residual_norm_hz, 0.0);
        assert!(estimate.significant().is_empty());
    }

    #[test]
    fn published_cr4_column_reconstructs_to_published_strengths() {
        let estimate = reconstruct_alpha(&table_cr4());
        assert!((estimate.value_hz("IIIZ").unwrap() - 640.0 * KHZ).abs() < 5.0 * KHZ);
        assert!((estimate.value_hz("ZIIZ").unwrap() - 105.0 * KHZ).abs() < 5.0 * KHZ);
        assert_eq!(estimate.value_hz("IIII").unwrap(), 0.0);
        assert_eq!(estimate.value_hz("ZIII").unwrap(), 0.0);
    }

    #[test]
    fn random_alpha_round_trips_through_the_forward_map() {
        use rand::Rng;
        let mut rng = crate::rng::SeedStream::new(11).job(0);
        for _ in 0..25 {
            let mut alpha: Vec<f64> =
                (0..16).map(|_| rng.gen_range(-1e6..1e6)).collect();
            alpha[0b0000] = 0.0;
            alpha[0b1000] = 0.0;
            let zeta = EtaVector::from_alpha_values(&alpha).unwrap().zeta("CRX");
            let estimate = reconstruct_alpha(&zeta);
            let scale = alpha.iter().map(|v| v.abs()).fold(1.0, f64::max);
            for (got, want) in estimate.values_hz().iter().zip(&alpha) {
                assert!((got - want).abs() < 1e-9 * scale, "{got} vs {want}");
            }
            assert!(estimate.residual_norm_hz < 1e-6);
        }
    }

    #[test]
    fn gauge_shifts_do_not_change_the_estimate() {
        let mut alpha = vec![0.0; 16];
        alpha[0b0010] = 250.0 * KHZ;
        alpha[0b1001] = -120.0 * KHZ;
        let eta = EtaVector::from_alpha_values(&alpha).unwrap();
        let mut shifted = eta.values_hz().to_vec();
        for (i, v) in shifted.iter_mut().enumerate() {
            *v += 3.7e5;
            *v += if i & 0b1000 == 0 { 1.9e5 } else { -1.9e5 };
        }
        let shifted = EtaVector::new(shifted).unwrap();
        let a = reconstruct_alpha(&eta.zeta("CR2"));
        let b = reconstruct_alpha(&shifted.zeta("CR2"));
        for (x, y) in a.values_hz().iter().zip(b.values_hz()) {
            assert!((x - y).abs() < 1e-10 * 2.5e5);
        }
        assert!(shifted.to_minimum_norm_gauge().is_minimum_norm());
    }

    #[test]
    fn reconstruction_is_linear() {
        let z1 = table_cr4();
        let z2 = ZetaTable::new(
            "CR4",
            (0..24).map(|i| ((i * 37 % 11) as f64 - 5.0) * 20.0 * KHZ).collect(),
        )
        .unwrap();
        let combined = ZetaTable::new(
            "CR4",
            z1.entries_hz()
                .iter()
                .zip(z2.entries_hz())
                .map(|(a, b)| 2.0 * a - 0.5 * b)
                .collect(),
        )
        .unwrap();
        let a1 = reconstruct_alpha(&z1);
        let a2 = reconstruct_alpha(&z2);
        let ac = reconstruct_alpha(&combined);
        for i in 0..16 {
            let expected = 2.0 * a1.values_hz()[i] - 0.5 * a2.values_hz()[i];
            assert!((ac.values_hz()[i] - expected).abs() < 1e-10 * 1.6e6);
        }
    }

    #[test]
    fn sensitivity_bound_is_small() {
        let bound = sensitivity_bound();
        assert!(bound < 0.3, "sensitivity bound {bound}");
        assert!(bound > 0.0);
    }

    #[test]
    fn zeta_csv_round_trips() {
        let table = table_cr4();
        let text = table.to_csv_string();
        let back = ZetaTable::from_csv_string(&text, "inline").unwrap();
        assert_eq!(table, back);
        // Indexing picks the right entries out of the blocks.
        assert_eq!(table.entry_hz(3, 0).unwrap(), 790.0 * KHZ);
        assert_eq!(table.entry_hz(2, 1).unwrap(), 110.0 * KHZ);
        assert_eq!(table.entry_hz(1, 7).unwrap(), -50.0 * KHZ);
    }

    #[test]
    fn zeta_csv_rejects_wrong_row_counts_and_junk() {
        let table = table_cr4();
        let text = table.to_csv_string();
        let mut lines: Vec<&str> = text.lines().map(str::trim).collect();
        let full = lines.join("\n");
        lines.truncate(lines.len() - 1);
        let truncated = lines.join("\n");
        assert!(matches!(
            ZetaTable::from_csv_string(&truncated, "inline"),
            Err(Error::BadZetaTable { expected: 24, got: 23 })
        ));
        let corrupted = full.replace("790000", "seven-ninety");
        assert!(matches!(
            ZetaTable::from_csv_string(&corrupted, "inline"),
            Err(Error::BadCsv { .. })
        ));
    }

    #[test]
    fn alpha_csv_round_trips() {
        let estimate = reconstruct_alpha(&table_cr4());
        let text = estimate.to_csv_string();
        let back = AlphaEstimate::from_csv_string(&text, "inline").unwrap();
        for (x, y) in estimate.values_hz().iter().zip(back.values_hz()) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!(text.contains("below_sensitivity"));
        assert!(back.below_sensitivity("IZII").unwrap());
        assert!(!back.below_sensitivity("IIIZ").unwrap());
    }
}
