//! Simulation scaffolding shared by the experiment drivers and the CLI:
//! deterministic seed derivation, validation bookkeeping, and the common
//! curve record written by the sweep runners.

use crate::scalar::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod figures;
pub mod validation;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed from a master seed, a lane tag, and an
/// index, so distinct lanes and indices never share a generator stream.
pub fn derive_seed(master: u64, lane: u64, index: u64) -> u64 {
    let mut z = splitmix64(master ^ 0xA076_1D64_78BD_642F);
    z = splitmix64(z ^ lane.wrapping_mul(0xE703_7ED1_A0B4_28DB));
    splitmix64(z ^ index.wrapping_mul(0x8EBC_6AF0_9C88_C6E3))
}

/// Counter-based generator for a derived seed. Every consumer builds its own
/// from a `derive_seed` value, which keeps results independent of thread
/// scheduling.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of a single self-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed,
    /// Measured and reported without a pass bound.
    Recorded,
}

/// One named self-check with its measured detail line.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Collection of self-check outcomes.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), status, detail: detail.into() });
    }

    pub fn checks(&self) -> &[CheckResult] {
        &self.checks
    }

    /// True when no check failed (recorded-only checks never fail).
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Failed)
    }

    /// One line per check: `PASS|FAIL|INFO name: detail`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Passed => "PASS",
                CheckStatus::Failed => "FAIL",
                CheckStatus::Recorded => "INFO",
            };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        out
    }
}

/// One point of a theory-versus-simulation curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint<T: Scalar> {
    pub x: T,
    pub y_theory: T,
    pub y_empirical: T,
    pub y_stderr: T,
}

/// Renders curve points as CSV with columns `x,y_theory,y_empirical,y_stderr`
/// under a one-line provenance header.
pub fn curve_to_csv<T: Scalar>(points: &[CurvePoint<T>], provenance: &str) -> String {
    let mut out = String::new();
    out.push_str(provenance);
    out.push('\n');
    out.push_str("x,y_theory,y_empirical,y_stderr\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.x, p.y_theory, p.y_empirical, p.y_stderr));
    }
    out
}
