//! Numerical tolerances used by validation gates and certificate checks.
//!
//! Every tolerance has a documented default and can be overridden by name,
//! which is how the CLI's repeatable `--tol name=value` flag is wired up.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Named tolerances with their defaults.
///
/// All gates scale these by a problem-size quantity (a norm, or 1 for
/// absolute checks); the raw numbers here are dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Orthonormality gate for frames: `||P^H P - I||_F <= frame_tol`.
    pub frame_tol: f64,
    /// Reconstruction gate for decompositions, relative to the input norm.
    pub decomp_tol: f64,
    /// Hermitian gate: `||H - H^H||_F <= hermitian_tol * ||H||_F`.
    pub hermitian_tol: f64,
    /// Rank gate: `sigma_min > rank_tol * sigma_max` counts as full rank.
    pub rank_tol: f64,
    /// Spectral-gap gate: gaps below `gap_tol * max(1, ||H||_2)` refuse to certify.
    pub gap_tol: f64,
    /// Maximizer-characterization gate (Hermitian defect, eigenvalue floor,
    /// reconstruction), relative to the local scale.
    pub char_tol: f64,
    /// Range-coincidence gate: frames within `range_tol` subspace distance
    /// are treated as spanning the same subspace.
    pub range_tol: f64,
    /// Equality gate for "achieves the maximum" style assertions.
    pub eq_tol: f64,
    /// Signed-slack gate for certified inequalities; a computed slack below
    /// `-slack_tol * scale` counts as a violation.
    pub slack_tol: f64,
    /// Invariance gate: `||H P - P (P^H H P)||_F <= inv_tol * ||H||_F` is
    /// required of reference frames claimed to span invariant subspaces.
    pub inv_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            frame_tol: 1e-8,
            decomp_tol: 1e-10,
            hermitian_tol: 1e-10,
            rank_tol: 1e-12,
            gap_tol: 1e-10,
            char_tol: 1e-8,
            range_tol: 1e-8,
            eq_tol: 1e-9,
            slack_tol: 1e-9,
            inv_tol: 1e-8,
        }
    }
}

/// Tolerance names accepted by [`Tolerances::set`], in canonical order.
pub const TOLERANCE_NAMES: [&str; 10] = [
    "frame_tol",
    "decomp_tol",
    "hermitian_tol",
    "rank_tol",
    "gap_tol",
    "char_tol",
    "range_tol",
    "eq_tol",
    "slack_tol",
    "inv_tol",
];

impl Tolerances {
    /// Overrides one tolerance by name. Values must be finite; negative
    /// values are accepted (they make the corresponding gate unsatisfiable,
    /// which is occasionally useful for forcing failure paths in tests).
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::Config(format!(
                "tolerance {name} must be finite, got {value}"
            )));
        }
        let slot = match name {
            "frame_tol" => &mut self.frame_tol,
            "decomp_tol" => &mut self.decomp_tol,
            "hermitian_tol" => &mut self.hermitian_tol,
            "rank_tol" => &mut self.rank_tol,
            "gap_tol" => &mut self.gap_tol,
            "char_tol" => &mut self.char_tol,
            "range_tol" => &mut self.range_tol,
            "eq_tol" => &mut self.eq_tol,
            "slack_tol" => &mut self.slack_tol,
            "inv_tol" => &mut self.inv_tol,
            _ => {
                return Err(Error::Config(format!(
                    "unknown tolerance {name:?}; known names: {}",
                    TOLERANCE_NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Reads one tolerance by name.
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "frame_tol" => Some(self.frame_tol),
            "decomp_tol" => Some(self.decomp_tol),
            "hermitian_tol" => Some(self.hermitian_tol),
            "rank_tol" => Some(self.rank_tol),
            "gap_tol" => Some(self.gap_tol),
            "char_tol" => Some(self.char_tol),
            "range_tol" => Some(self.range_tol),
            "eq_tol" => Some(self.eq_tol),
            "slack_tol" => Some(self.slack_tol),
            "inv_tol" => Some(self.inv_tol),
            _ => None,
        }
    }

    /// All tolerances as a sorted name -> value map (stable for reports).
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        TOLERANCE_NAMES
            .iter()
            .map(|name| ((*name).to_owned(), self.get(name).unwrap()))
            .collect()
    }

    /// Parses a `name=value` override, as passed on the command line.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (name, value) = spec.split_once('=').ok_or_else(|| {
            Error::Config(format!("tolerance override {spec:?} is not name=value"))
        })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::Config(format!("tolerance override {spec:?} has a non-numeric value"))
        })?;
        self.set(name.trim(), value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_values() {
        let t = Tolerances::default();
        assert_eq!(t.frame_tol, 1e-8);
        assert_eq!(t.decomp_tol, 1e-10);
        assert_eq!(t.hermitian_tol, 1e-10);
        assert_eq!(t.rank_tol, 1e-12);
        assert_eq!(t.gap_tol, 1e-10);
        assert_eq!(t.char_tol, 1e-8);
        assert_eq!(t.range_tol, 1e-8);
        assert_eq!(t.eq_tol, 1e-9);
        assert_eq!(t.slack_tol, 1e-9);
        assert_eq!(t.inv_tol, 1e-8);
    }

    #[test]
    fn set_and_get_round_trip_every_name() {
        let mut t = Tolerances::default();
        for (i, name) in TOLERANCE_NAMES.iter().enumerate() {
            let v = 1e-3 * (i + 1) as f64;
            t.set(name, v).unwrap();
            assert_eq!(t.get(name), Some(v), "name {name}");
        }
    }

    #[test]
    fn unknown_name_is_rejected() {
        let mut t = Tolerances::default();
        assert!(t.set("bogus_tol", 1e-3).is_err());
        assert_eq!(t.get("bogus_tol"), None);
    }

    #[test]
    fn non_finite_value_is_rejected() {
        let mut t = Tolerances::default();
        assert!(t.set("frame_tol", f64::NAN).is_err());
        assert!(t.set("frame_tol", f64::INFINITY).is_err());
    }

    #[test]
    fn override_parsing() {
        let mut t = Tolerances::default();
        t.apply_override("slack_tol=1e-6").unwrap();
        assert_eq!(t.slack_tol, 1e-6);
        t.apply_override(" gap_tol = 2.5e-9 ").unwrap();
        assert_eq!(t.gap_tol, 2.5e-9);
        assert!(t.apply_override("slack_tol").is_err());
        assert!(t.apply_override("slack_tol=abc").is_err());
    }

    #[test]
    fn map_lists_every_tolerance_once() {
        let t = Tolerances::default();
        let m = t.to_map();
        assert_eq!(m.len(), TOLERANCE_NAMES.len());
        assert_eq!(m["slack_tol"], 1e-9);
    }
}
