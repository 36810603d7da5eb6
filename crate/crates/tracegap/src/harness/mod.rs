//! Randomized verification harness.
//!
//! [`gen`] provides seeded instance generators; [`fuzz`] drives them through
//! the certificate library and checks every proved inequality on every
//! instance. A campaign is described by a [`FuzzConfig`], which round-trips
//! through a key=value text format so campaigns can be stored and replayed.

pub mod fuzz;
pub mod gen;

pub use fuzz::{run_fuzz, ALL_CHECK_IDS};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Shape of the spectrum (eigenvalues or singular values) drawn per trial.
///
/// For Hermitian instances the top-k and bottom block are always separated;
/// `PrescribedGap(g)` makes the separation exactly `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumStyle {
    /// Values spread uniformly, top block positive, bottom block negative.
    Uniform,
    /// Two tight clusters: near-degenerate inside each block.
    Clustered,
    /// Logarithmically spaced values spanning four decades.
    Geometric,
    /// Uniform draws adjusted so the spectral gap (or smallest singular
    /// value) equals the given value exactly.
    PrescribedGap(f64),
}

impl fmt::Display for SpectrumStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => write!(f, "uniform"),
            Self::Clustered => write!(f, "clustered"),
            Self::Geometric => write!(f, "geometric"),
            Self::PrescribedGap(g) => write!(f, "prescribed-gap({g})"),
        }
    }
}

impl FromStr for SpectrumStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "clustered" => Ok(Self::Clustered),
            "geometric" => Ok(Self::Geometric),
            other => {
                if let Some(body) = other
                    .strip_prefix("prescribed-gap(")
                    .and_then(|r| r.strip_suffix(')'))
                {
                    let g: f64 = body.parse().map_err(|_| {
                        Error::Config(format!("invalid gap value in spectrum style: {body:?}"))
                    })?;
                    if !g.is_finite() || g <= 0.0 {
                        return Err(Error::Config(format!(
                            "prescribed gap must be positive and finite, got {g}"
                        )));
                    }
                    Ok(Self::PrescribedGap(g))
                } else {
                    Err(Error::Config(format!(
                        "unknown spectrum style {other:?} (expected uniform, clustered, \
                         geometric, or prescribed-gap(G))"
                    )))
                }
            }
        }
    }
}

/// Size regime of the canonical angles between the tested frame and the
/// reference it is rotated away from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleStyle {
    /// Angles near 1e-5: stresses cancellation in the trace excess while
    /// keeping its square above the noise floor of the excess itself.
    Tiny,
    /// Angles in [0.05, 0.8].
    Moderate,
    /// Angles within 0.1 of pi/2.
    NearOrthogonal,
    /// No rotation at all, but the frame is negated: same subspace,
    /// maximally misaligned basis.
    Antipodal,
}

impl fmt::Display for AngleStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Tiny => "tiny",
            Self::Moderate => "moderate",
            Self::NearOrthogonal => "near-orthogonal",
            Self::Antipodal => "antipodal",
        };
        write!(f, "{name}")
    }
}

impl FromStr for AngleStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tiny" => Ok(Self::Tiny),
            "moderate" => Ok(Self::Moderate),
            "near-orthogonal" => Ok(Self::NearOrthogonal),
            "antipodal" => Ok(Self::Antipodal),
            other => Err(Error::Config(format!(
                "unknown angle style {other:?} (expected tiny, moderate, near-orthogonal, \
                 or antipodal)"
            ))),
        }
    }
}

/// Families of checks a campaign exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckTarget {
    /// Eigenspace certificates plus the canonical-angle identities.
    Eig,
    /// Polar-factor certificates and their proof chain.
    Polar,
    /// The gauge-optimal variant bounds.
    Corollary,
    /// Trace-objective maximizer construction and characterization.
    Lemma,
    /// The singular-value trace inequality on random pairs.
    VonNeumann,
}

impl CheckTarget {
    pub const ALL: [CheckTarget; 5] = [
        Self::Eig,
        Self::Polar,
        Self::Corollary,
        Self::Lemma,
        Self::VonNeumann,
    ];
}

impl fmt::Display for CheckTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Eig => "eig",
            Self::Polar => "polar",
            Self::Corollary => "corollary",
            Self::Lemma => "lemma",
            Self::VonNeumann => "von-neumann",
        };
        write!(f, "{name}")
    }
}

impl FromStr for CheckTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eig" => Ok(Self::Eig),
            "polar" => Ok(Self::Polar),
            "corollary" => Ok(Self::Corollary),
            "lemma" => Ok(Self::Lemma),
            "von-neumann" => Ok(Self::VonNeumann),
            other => Err(Error::Config(format!(
                "unknown check target {other:?} (expected eig, polar, corollary, lemma, \
                 or von-neumann)"
            ))),
        }
    }
}

/// Full description of a fuzz campaign. Two runs with equal configs produce
/// identical reports apart from wall-clock timing.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    /// (n, k) pairs cycled through trial by trial.
    pub dims: Vec<(usize, usize)>,
    pub spectrum: SpectrumStyle,
    pub angles: AngleStyle,
    pub targets: BTreeSet<CheckTarget>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            dims: vec![(20, 5)],
            spectrum: SpectrumStyle::Uniform,
            angles: AngleStyle::Moderate,
            targets: CheckTarget::ALL.into_iter().collect(),
        }
    }
}

pub(crate) fn parse_dims(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut dims = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (n, k) = part.split_once('x').ok_or_else(|| {
            Error::Config(format!("dimension {part:?} must have the form NxK, e.g. 20x5"))
        })?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("invalid row count in dimension {part:?}")))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("invalid column count in dimension {part:?}")))?;
        dims.push((n, k));
    }
    if dims.is_empty() {
        return Err(Error::Config("dimension list is empty".into()));
    }
    Ok(dims)
}

pub(crate) fn parse_targets(text: &str) -> Result<BTreeSet<CheckTarget>> {
    let mut targets = BTreeSet::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if part == "all" {
            targets.extend(CheckTarget::ALL);
        } else {
            targets.insert(part.parse()?);
        }
    }
    if targets.is_empty() {
        return Err(Error::Config("target list is empty".into()));
    }
    Ok(targets)
}

impl FuzzConfig {
    /// Parses a `key = value` campaign description; see [`to_kv`](Self::to_kv).
    /// Unset keys keep their defaults, unknown keys are rejected, `#` starts
    /// a comment.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {line:?}", idx + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid seed {value:?}")))?;
                }
                "trials" => {
                    cfg.trials = value
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid trial count {value:?}")))?;
                }
                "dims" => cfg.dims = parse_dims(value)?,
                "spectrum" => cfg.spectrum = value.parse()?,
                "angles" => cfg.angles = value.parse()?,
                "targets" => cfg.targets = parse_targets(value)?,
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {other:?}",
                        idx + 1
                    )));
                }
            }
        }
        Ok(cfg)
    }

    /// Serializes the campaign in the format accepted by
    /// [`from_kv`](Self::from_kv).
    pub fn to_kv(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|(n, k)| format!("{n}x{k}")).collect();
        let targets: Vec<String> = self.targets.iter().map(|t| t.to_string()).collect();
        format!(
            "seed = {}\ntrials = {}\ndims = {}\nspectrum = {}\nangles = {}\ntargets = {}\n",
            self.seed,
            self.trials,
            dims.join(","),
            self.spectrum,
            self.angles,
            targets.join(",")
        )
    }

    /// Rejects campaigns that cannot run: no trials, no dimensions, frames
    /// wider than tall, or an unusable prescribed gap.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trial count must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::Config("dimension list is empty".into()));
        }
        for &(n, k) in &self.dims {
            if k == 0 || k > n {
                return Err(Error::Config(format!(
                    "dimensions must satisfy 1 <= k <= n, got {n}x{k}"
                )));
            }
        }
        if self.targets.is_empty() {
            return Err(Error::Config("target list is empty".into()));
        }
        if let SpectrumStyle::PrescribedGap(g) = self.spectrum {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Config(format!(
                    "prescribed gap must be positive and finite, got {g}"
                )));
            }
        }
        Ok(())
    }

    /// JSON-friendly echo of the campaign, embedded in reports.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            seed: self.seed,
            trials: self.trials,
            dims: self.dims.iter().map(|(n, k)| format!("{n}x{k}")).collect(),
            spectrum: self.spectrum.to_string(),
            angles: self.angles.to_string(),
            targets: self.targets.iter().map(|t| t.to_string()).collect(),
        }
    }
}

/// Serialized form of a [`FuzzConfig`], embedded in every report so a stored
/// report is replayable on its own.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub trials: u64,
    pub dims: Vec<String>,
    pub spectrum: String,
    pub angles: String,
    pub targets: Vec<String>,
}

/// One failed inequality: the check, where it happened, and by how much.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// Which inequality failed, e.g. `eig.upper`.
    pub check_id: String,
    /// Trial index within the campaign.
    pub trial: u64,
    /// Replay coordinates: section, dimensions, and section seed.
    pub instance: String,
    /// Left side of the violated `lhs <= rhs` comparison.
    pub lhs: f64,
    /// Right side.
    pub rhs: f64,
    /// `rhs - lhs`; negative when the inequality itself failed, possibly
    /// nonnegative when a negative slack tolerance forced the violation.
    pub slack: f64,
}

/// Sharpest instance seen for one check: how close `lhs/rhs` came to 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tightness {
    pub max_ratio: f64,
    /// Trial index of the sharpest instance (earliest on ties).
    pub trial: u64,
    /// Replay coordinates of that instance.
    pub instance: String,
}

/// Outcome of a fuzz campaign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub config: ConfigEcho,
    pub trials: u64,
    /// Total number of inequality evaluations across all trials.
    pub checks_evaluated: u64,
    /// Evaluation count per check id; a check missing here was never
    /// reached by the campaign.
    pub checks: std::collections::BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    /// Per-check sharpness records, keyed by check id.
    pub tightness: std::collections::BTreeMap<String, Tightness>,
    /// Wall time of the run. Excluded from serialization so serialized
    /// reports are a pure function of the configuration.
    #[serde(skip)]
    pub elapsed_seconds: f64,
}

impl FuzzReport {
    /// Copy with the timing zeroed, for comparing reports across runs.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        out.elapsed_seconds = 0.0;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip_preserves_the_config() {
        let mut cfg = FuzzConfig {
            seed: 99,
            trials: 2500,
            dims: vec![(20, 5), (10, 3), (7, 7)],
            spectrum: SpectrumStyle::PrescribedGap(1e-3),
            angles: AngleStyle::NearOrthogonal,
            targets: [CheckTarget::Eig, CheckTarget::Lemma].into_iter().collect(),
        };
        assert_eq!(FuzzConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);

        cfg.spectrum = SpectrumStyle::Geometric;
        cfg.angles = AngleStyle::Tiny;
        cfg.targets = CheckTarget::ALL.into_iter().collect();
        assert_eq!(FuzzConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
    }

    #[test]
    fn kv_accepts_comments_and_rejects_junk() {
        let cfg = FuzzConfig::from_kv(
            "# campaign\nseed = 7 # inline note\n\ntrials = 12\ndims = 6x2\ntargets = all\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.trials, 12);
        assert_eq!(cfg.dims, vec![(6, 2)]);
        assert_eq!(cfg.targets.len(), 5);

        assert!(FuzzConfig::from_kv("seed 7").is_err());
        assert!(FuzzConfig::from_kv("speed = 7").is_err());
        assert!(FuzzConfig::from_kv("dims = 6by2").is_err());
        assert!(FuzzConfig::from_kv("spectrum = prescribed-gap(-1)").is_err());
        assert!(FuzzConfig::from_kv("spectrum = prescribed-gap(oops)").is_err());
        assert!(FuzzConfig::from_kv("angles = enormous").is_err());
        assert!(FuzzConfig::from_kv("targets = eig,unknown").is_err());
    }

    #[test]
    fn validation_rejects_unrunnable_campaigns() {
        let ok = FuzzConfig::default();
        assert!(ok.validate().is_ok());

        let mut bad = ok.clone();
        bad.trials = 0;
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.dims = vec![(3, 4)];
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.dims = vec![(3, 0)];
        assert!(bad.validate().is_err());

        let mut bad = ok.clone();
        bad.dims.clear();
        assert!(bad.validate().is_err());

        let mut bad = ok;
        bad.targets.clear();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn style_names_round_trip() {
        for text in ["uniform", "clustered", "geometric", "prescribed-gap(0.25)"] {
            let style: SpectrumStyle = text.parse().unwrap();
            assert_eq!(style.to_string(), text);
        }
        for text in ["tiny", "moderate", "near-orthogonal", "antipodal"] {
            let style: AngleStyle = text.parse().unwrap();
            assert_eq!(style.to_string(), text);
        }
        for target in CheckTarget::ALL {
            let back: CheckTarget = target.to_string().parse().unwrap();
            assert_eq!(back, target);
        }
    }
}
