//! Random subcarrier selection: which OFDM subcarrier each antenna transmits
//! on, and reproducible schedules of such assignments over a symbol stream.
//!
//! Each antenna gets exactly one subcarrier and no subcarrier is shared, so an
//! assignment is an injective map from antenna index to subcarrier index.
//! Randomizing the assignment is what couples a subcarrier-dependent frequency
//! offset to each antenna position and makes the emitted pattern depend on
//! range as well as angle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An injective assignment of one subcarrier per antenna.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcarrierSelection {
    indices: Vec<usize>,
    n_subcarriers: usize,
}

impl SubcarrierSelection {
    /// Validates an explicit assignment: `indices[m]` is antenna m's
    /// subcarrier. Indices must be distinct and inside `0..n_subcarriers`.
    pub fn new(indices: Vec<usize>, n_subcarriers: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Dimension("selection needs at least one antenna".to_string()));
        }
        if indices.len() > n_subcarriers {
            return Err(Error::Dimension(format!(
                "{} antennas cannot each own one of {} subcarriers",
                indices.len(),
                n_subcarriers
            )));
        }
        let mut seen = vec![false; n_subcarriers];
        for &idx in &indices {
            if idx >= n_subcarriers {
                return Err(Error::Dimension(format!(
                    "subcarrier index {idx} out of range 0..{n_subcarriers}"
                )));
            }
            if seen[idx] {
                return Err(Error::Dimension(format!("subcarrier index {idx} assigned twice")));
            }
            seen[idx] = true;
        }
        Ok(Self { indices, n_subcarriers })
    }

    /// Draws a uniformly random injective assignment using `rng`. The first
    /// `n_antennas` steps of a Fisher-Yates shuffle over all subcarrier
    /// indices give each injective assignment equal probability.
    pub fn draw_with<R: Rng + ?Sized>(
        n_subcarriers: usize,
        n_antennas: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if n_antennas == 0 || n_antennas > n_subcarriers {
            return Err(Error::Dimension(format!(
                "cannot assign {n_antennas} antennas among {n_subcarriers} subcarriers"
            )));
        }
        let mut pool: Vec<usize> = (0..n_subcarriers).collect();
        for i in 0..n_antennas {
            let j = rng.gen_range(i..n_subcarriers);
            pool.swap(i, j);
        }
        pool.truncate(n_antennas);
        Ok(Self { indices: pool, n_subcarriers })
    }

    /// Draws a random assignment for `cfg` from a bare seed (stream 0 of the
    /// seeded counter-based generator).
    pub fn draw_seeded<T: Scalar>(cfg: &SystemConfig<T>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::draw_with(cfg.n_subcarriers(), cfg.n_antennas(), &mut rng)
            .expect("validated config has 1 <= n_antennas <= n_subcarriers")
    }

    /// The deterministic evenly spaced assignment: antenna m takes subcarrier
    /// m * floor(n_subcarriers / n_antennas). The comparison baseline whose
    /// regular spacing leaves periodic structure in the emitted pattern.
    pub fn uniform<T: Scalar>(cfg: &SystemConfig<T>) -> Self {
        let stride = cfg.n_subcarriers() / cfg.n_antennas();
        let indices = (0..cfg.n_antennas()).map(|m| m * stride).collect();
        Self { indices, n_subcarriers: cfg.n_subcarriers() }
    }

    /// Subcarrier owned by antenna `m`.
    pub fn subcarrier_for_antenna(&self, m: usize) -> usize {
        self.indices[m]
    }

    /// Assignment as a slice indexed by antenna.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of antennas (active subcarriers).
    pub fn n_antennas(&self) -> usize {
        self.indices.len()
    }

    /// Size of the subcarrier pool the assignment draws from.
    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    /// CSV rendering with columns `antenna_index,subcarrier_index`, one row
    /// per antenna. `provenance` is the leading `#` comment line.
    pub fn to_csv(&self, provenance: &str) -> String {
        let mut out = String::new();
        out.push_str(provenance);
        out.push('\n');
        out.push_str("antenna_index,subcarrier_index\n");
        for (m, &idx) in self.indices.iter().enumerate() {
            out.push_str(&format!("{m},{idx}\n"));
        }
        out
    }
}

/// How often the random assignment is redrawn along a symbol stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    /// One assignment per block of `block_len` consecutive symbols.
    PerBlock { block_len: usize },
    /// A fresh assignment every symbol.
    PerSymbol,
}

/// A reproducible stream of assignments. Assignment b comes from stream b of
/// a counter-based generator seeded with `master_seed`, so any block can be
/// regenerated independently and in parallel.
#[derive(Debug, Clone)]
pub struct SelectionSchedule {
    n_subcarriers: usize,
    n_antennas: usize,
    mode: ScheduleMode,
    master_seed: u64,
}

impl SelectionSchedule {
    pub fn new<T: Scalar>(cfg: &SystemConfig<T>, mode: ScheduleMode, master_seed: u64) -> Result<Self> {
        if let ScheduleMode::PerBlock { block_len } = mode {
            if block_len == 0 {
                return Err(Error::Dimension("block length must be at least 1".to_string()));
            }
        }
        Ok(Self {
            n_subcarriers: cfg.n_subcarriers(),
            n_antennas: cfg.n_antennas(),
            mode,
            master_seed,
        })
    }

    /// Index of the assignment block covering `symbol_index`.
    pub fn block_index(&self, symbol_index: usize) -> u64 {
        match self.mode {
            ScheduleMode::PerBlock { block_len } => (symbol_index / block_len) as u64,
            ScheduleMode::PerSymbol => symbol_index as u64,
        }
    }

    /// The assignment used by block `block`.
    pub fn selection_for_block(&self, block: u64) -> SubcarrierSelection {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(block);
        SubcarrierSelection::draw_with(self.n_subcarriers, self.n_antennas, &mut rng)
            .expect("schedule construction validated the counts")
    }

    /// The assignment in force at `symbol_index`.
    pub fn selection_for_symbol(&self, symbol_index: usize) -> SubcarrierSelection {
        self.selection_for_block(self.block_index(symbol_index))
    }

    pub fn mode(&self) -> ScheduleMode {
        self.mode
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }
}
