//! Search caps shared by all modules.
//!
//! Every enumeration in this crate is guarded by a cap so that no operation
//! can silently run away. Exceeding a cap is reported as an explicit error
//! (or as a `skipped(cap)` entry in reports), never as a guess.

use serde::{Deserialize, Serialize};

/// Caps for the various bounded searches. `Default` gives the documented
/// desk-scale values; `TOPOSPI1_CAPS` and command-line flags may override.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Max total element count of `X x y(c)` for complemented-subobject
    /// lattice enumeration.
    pub lattice: usize,
    /// Max number of natural transformations a hom-set enumeration may return.
    pub hom: usize,
    /// Max group order for isomorphism search, automorphism closure and
    /// truncated completions.
    pub order: usize,
    /// Max permutation degree for low-index enumeration (and the fibre bound
    /// for Galois-object enumeration).
    pub degree: usize,
    /// Max group order for full subgroup enumeration.
    pub subgroups: usize,
    /// Max product of node group orders in an inverse-system limit.
    pub system: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            lattice: 10,
            hom: 10_000,
            order: 256,
            degree: 6,
            subgroups: 64,
            system: 1_000_000,
        }
    }
}

impl Caps {
    /// Apply overrides of the form `lattice=12,hom=500` (as accepted from the
    /// `TOPOSPI1_CAPS` environment variable). Unknown keys are rejected.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<(), String> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("cap override `{part}` is not of the form key=value"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("cap override `{part}` has a non-numeric value"))?;
            if value == 0 {
                return Err(format!("cap override `{part}` must be positive"));
            }
            match key.trim() {
                "lattice" => self.lattice = value,
                "hom" => self.hom = value,
                "order" => self.order = value,
                "degree" => self.degree = value,
                "subgroups" => self.subgroups = value,
                "system" => self.system = value,
                other => return Err(format!("unknown cap `{other}`")),
            }
        }
        Ok(())
    }

    /// Caps taken from defaults plus the `TOPOSPI1_CAPS` environment variable.
    pub fn from_env() -> Result<Self, String> {
        let mut caps = Caps::default();
        if let Ok(spec) = std::env::var("TOPOSPI1_CAPS") {
            caps.apply_overrides(&spec)?;
        }
        Ok(caps)
    }
}
