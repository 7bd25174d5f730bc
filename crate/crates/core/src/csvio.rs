//! CSV output conventions: every rendered file opens with a one-line `#`
//! provenance comment recording the configuration that produced it, so a
//! plot can always be traced back to its inputs.

use std::fs;
use std::path::Path;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Builds the single provenance comment line: `# key=value ...` over the
/// full configuration followed by caller extras (command, seed, axes).
pub fn provenance_line<T: Scalar>(cfg: &SystemConfig<T>, extras: &[(&str, String)]) -> String {
    let mut parts = vec![
        format!("carrier_hz={}", cfg.carrier_hz()),
        format!("bandwidth_hz={}", cfg.bandwidth_hz()),
        format!("n_subcarriers={}", cfg.n_subcarriers()),
        format!("n_antennas={}", cfg.n_antennas()),
        format!("element_spacing_m={}", cfg.element_spacing_m()),
        format!("power_watts={}", cfg.power_watts()),
        format!("noise_variance={}", cfg.noise_variance()),
        format!("beta1_sq={}", cfg.beta1_sq()),
        format!("beta2_sq={}", cfg.beta2_sq()),
        format!("rho_policy={}", cfg.rho_policy().key()),
    ];
    for (key, value) in extras {
        parts.push(format!("{key}={value}"));
    }
    format!("# {}", parts.join(" "))
}

/// Writes rendered CSV text to `path`, tagging any failure with the path so
/// the caller's error message names the file.
pub fn write_csv_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}
