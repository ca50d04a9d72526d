//! Resource caps, overridable through `SLO_MAX_CARRIER`, `SLO_MAX_SUBSETS`,
//! `SLO_MAX_TABLES` and `SLO_MAX_GENERATORS`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier any construction may materialize. Power algebras over
    /// bases of up to 12 elements (4095 non-empty subsets) fit the default.
    pub max_carrier: usize,
    /// Largest number of subsets a brute-force subset scan may visit.
    pub max_subsets: usize,
    /// Largest number of raw operation tables `enumerate_models` may visit.
    pub max_tables: u64,
    /// Largest generator count for free CDIS constructions and counts.
    pub max_generators: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 4096,
            max_subsets: 1 << 16,
            max_tables: 50_000_000,
            max_generators: 4,
        }
    }
}

impl Limits {
    /// Defaults, overridden by any of the environment variables that parse.
    pub fn from_env() -> Self {
        let d = Limits::default();
        let get = |k: &str| std::env::var(k).ok().and_then(|v| v.trim().parse::<u64>().ok());
        Limits {
            max_carrier: get("SLO_MAX_CARRIER").map_or(d.max_carrier, |v| v as usize),
            max_subsets: get("SLO_MAX_SUBSETS").map_or(d.max_subsets, |v| v as usize),
            max_tables: get("SLO_MAX_TABLES").unwrap_or(d.max_tables),
            max_generators: get("SLO_MAX_GENERATORS").map_or(d.max_generators, |v| v as usize),
        }
    }

    pub(crate) fn check_carrier(&self, requested: usize) -> Result<()> {
        if requested > self.max_carrier {
            return Err(Error::CapExceeded {
                what: "carrier size",
                requested,
                limit: self.max_carrier,
            });
        }
        Ok(())
    }

    /// Checks that all `2^n` subsets of an n-element set may be scanned.
    pub(crate) fn check_subsets(&self, base: usize) -> Result<()> {
        if base >= usize::BITS as usize || (1usize << base) > self.max_subsets {
            return Err(Error::CapExceeded {
                what: "subsets to scan",
                requested: if base >= usize::BITS as usize {
                    usize::MAX
                } else {
                    1 << base
                },
                limit: self.max_subsets,
            });
        }
        Ok(())
    }
}
