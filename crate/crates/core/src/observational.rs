//! Observational tension bounds and the Euler-characteristic verdict they imply.
//!
//! The pipeline is: pick an upper bound on Gμ, put at most ten strings in a
//! horizon volume, sum their tensions into χ, and round χ to the nearest even
//! integer to read off the genus of the transverse surface.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone_geometry::{chi_from_tensions, ChiConvention, StringTension};
use crate::error::{Error, Result};

/// Planck mass in GeV.
pub const PLANCK_MASS_GEV: f64 = 1.220890e19;
/// Grand-unification symmetry breaking scale in GeV.
pub const GUT_SCALE_GEV: f64 = 1e16;
/// Long strings per horizon volume, inclusive.
pub const DEFAULT_COUNT_CAP: usize = 10;

/// Gμ ~ (η / m_pl)², with no range check on the result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GutEstimate {
    pub eta_gev: f64,
    pub planck_mass_gev: f64,
    pub g_mu: f64,
}

impl GutEstimate {
    /// The estimate as a physical tension; fails once Gμ ≥ 1/4.
    pub fn tension(&self) -> Result<StringTension> {
        StringTension::new(
            self.g_mu,
            format!("GUT estimate eta={:e} GeV", self.eta_gev),
        )
    }

    pub fn is_physical(&self) -> bool {
        (0.0..0.25).contains(&self.g_mu)
    }
}

pub fn gut_scale_estimate(eta_gev: f64, planck_mass_gev: f64) -> Result<GutEstimate> {
    let ok = |x: f64| x > 0.0 && x.is_finite();
    if !ok(eta_gev) || !ok(planck_mass_gev) {
        return Err(Error::InvalidEnergyScale {
            eta: eta_gev,
            m_pl: planck_mass_gev,
        });
    }
    let ratio = eta_gev / planck_mass_gev;
    Ok(GutEstimate {
        eta_gev,
        planck_mass_gev,
        g_mu: ratio * ratio,
    })
}

/// A published upper limit on Gμ.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationalBound {
    pub name: String,
    pub g_mu_max: f64,
    pub source: String,
}

impl ObservationalBound {
    pub fn new(name: impl Into<String>, g_mu_max: f64, source: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if !(g_mu_max > 0.0 && g_mu_max.is_finite()) {
            return Err(Error::InvalidBound {
                name,
                value: g_mu_max,
            });
        }
        Ok(Self {
            name,
            g_mu_max,
            source: source.into(),
        })
    }
}

/// CMB and structure-formation limits on the string tension.
pub fn builtin_catalog() -> Vec<ObservationalBound> {
    [
        (
            "COBE",
            2.0e-6,
            "COBE DMR temperature anisotropies (Bennett et al. 1992)",
        ),
        ("Planck", 3.2e-7, "Planck 2013 cosmic string constraints"),
        (
            "WMAP",
            0.5e-6,
            "WMAP structure-formation fit (Urrestilla et al. 2011)",
        ),
        (
            "SPT",
            1.7e-7,
            "WMAP + South Pole Telescope (Dvorkin et al. 2011)",
        ),
    ]
    .into_iter()
    .map(|(name, g, src)| ObservationalBound {
        name: name.to_string(),
        g_mu_max: g,
        source: src.to_string(),
    })
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogSource<'a> {
    Builtin,
    File(&'a Path),
}

pub fn load_bound_catalog(source: CatalogSource<'_>) -> Result<Vec<ObservationalBound>> {
    match source {
        CatalogSource::Builtin => Ok(builtin_catalog()),
        CatalogSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
            parse_bound_catalog(&text)
        }
    }
}

/// Parses lines of the form `bound <name> <g_mu_max> "<source>"`; `#` starts a
/// comment.
pub fn parse_bound_catalog(text: &str) -> Result<Vec<ObservationalBound>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("bound")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| {
                err(format!(
                    "expected 'bound <name> <g_mu_max> \"<source>\"', got '{line}'"
                ))
            })?
            .trim_start();
        let (name, rest) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| err("missing bound value".into()))?;
        let rest = rest.trim_start();
        let (value, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let g_mu_max: f64 = value
            .parse()
            .map_err(|_| err(format!("bad number '{value}'")))?;
        let rest = rest.trim();
        let source = rest
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .ok_or_else(|| err("source must be a double-quoted string".into()))?;
        let bound =
            ObservationalBound::new(name, g_mu_max, source).map_err(|e| err(e.to_string()))?;
        out.push(bound);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "catalog has no bound entries".into(),
        });
    }
    Ok(out)
}

// `#` inside the quoted source is kept
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Case-insensitive lookup by name.
pub fn find_bound<'a>(
    catalog: &'a [ObservationalBound],
    name: &str,
) -> Result<&'a ObservationalBound> {
    catalog
        .iter()
        .find(|b| b.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownBound(name.to_string()))
}

/// The tightest limit in the catalog.
pub fn strongest_bound(catalog: &[ObservationalBound]) -> Option<&ObservationalBound> {
    catalog
        .iter()
        .min_by(|a, b| a.g_mu_max.total_cmp(&b.g_mu_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TensionDistribution {
    /// i.i.d. uniform on (0, g_mu_max].
    Uniform,
    /// Every string sits exactly at the bound.
    FixedAtBound,
}

impl TensionDistribution {
    pub fn name(self) -> &'static str {
        match self {
            TensionDistribution::Uniform => "uniform",
            TensionDistribution::FixedAtBound => "fixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountCap {
    pub limit: usize,
    pub override_cap: bool,
}

impl Default for CountCap {
    fn default() -> Self {
        Self {
            limit: DEFAULT_COUNT_CAP,
            override_cap: false,
        }
    }
}

/// Strings in one horizon volume.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSample {
    pub tensions: Vec<StringTension>,
    pub seed: u64,
    pub bound_used: ObservationalBound,
    pub distribution: TensionDistribution,
}

impl NetworkSample {
    pub fn sum_g_mu(&self) -> f64 {
        self.tensions.iter().map(StringTension::g_mu).sum()
    }
}

pub fn sample_network(
    seed: u64,
    count: usize,
    bound: &ObservationalBound,
    distribution: TensionDistribution,
) -> Result<NetworkSample> {
    sample_network_capped(seed, count, bound, distribution, CountCap::default())
}

pub fn sample_network_capped(
    seed: u64,
    count: usize,
    bound: &ObservationalBound,
    distribution: TensionDistribution,
    cap: CountCap,
) -> Result<NetworkSample> {
    if count > cap.limit && !cap.override_cap {
        return Err(Error::CountAboveCap {
            count,
            cap: cap.limit,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label = format!("{} {}", bound.name, distribution.name());
    let tensions = (0..count)
        .map(|_| {
            let g = match distribution {
                // 1 − u with u ∈ [0, 1) lands in (0, 1]
                TensionDistribution::Uniform => bound.g_mu_max * (1.0 - rng.random::<f64>()),
                TensionDistribution::FixedAtBound => bound.g_mu_max,
            };
            StringTension::hypothetical(g, label.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NetworkSample {
        tensions,
        seed,
        bound_used: bound.clone(),
        distribution,
    })
}

/// Genus read off from χ; `None` when χ rounds to a positive even integer
/// above 2 or lands on an odd tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusVerdict {
    Genus(u32),
    None,
}

impl fmt::Display for GenusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusVerdict::Genus(1) => write!(f, "genus 1 (torus)"),
            GenusVerdict::Genus(0) => write!(f, "genus 0 (sphere)"),
            GenusVerdict::Genus(g) => write!(f, "genus {g}"),
            GenusVerdict::None => write!(f, "none"),
        }
    }
}

impl GenusVerdict {
    pub fn short(&self) -> String {
        match self {
            GenusVerdict::Genus(g) => g.to_string(),
            GenusVerdict::None => "none".into(),
        }
    }
}

/// Nearest even integer to `chi`, or `None` exactly halfway between two.
pub fn nearest_even_integer(chi: f64) -> Option<i64> {
    if !chi.is_finite() {
        return None;
    }
    let half = chi / 2.0;
    if half - half.floor() == 0.5 {
        return None;
    }
    Some(2 * half.round() as i64)
}

pub fn genus_from_even_chi(even: Option<i64>) -> GenusVerdict {
    match even {
        Some(e) if e <= 2 => u32::try_from((2 - e) / 2)
            .map(GenusVerdict::Genus)
            .unwrap_or(GenusVerdict::None),
        _ => GenusVerdict::None,
    }
}

/// χ under both conventions and the resulting genus verdict.
///
/// The verdict fields use the derived convention; the `*_paper` fields repeat
/// the rounding for the 8πΣGμ relation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenusVerdictReport {
    pub bound_name: String,
    pub count: usize,
    pub sum_g_mu: f64,
    pub chi_derived: f64,
    pub chi_paper: f64,
    pub nearest_even_integer: Option<i64>,
    pub genus_verdict: GenusVerdict,
    pub nearest_even_paper: Option<i64>,
    pub genus_verdict_paper: GenusVerdict,
    pub convention_notes: String,
}

pub const CONVENTION_NOTE: &str = "chi_derived = 4*sum(Gmu) follows from 2*pi*chi + sum(theta_i - 2*pi) = 0 \
with theta_i - 2*pi = -8*pi*Gmu_i; chi_paper = 8*pi*sum(Gmu) is the relation as usually quoted and \
carries an extra factor of 2*pi. The quoted bound chi < 1e-6 is reproduced only in order of magnitude.";

pub fn euler_bound_report(sample: &NetworkSample) -> GenusVerdictReport {
    verdict_for_tensions(&sample.bound_used.name, &sample.tensions)
}

pub fn verdict_for_tensions(name: &str, tensions: &[StringTension]) -> GenusVerdictReport {
    let chi_derived = chi_from_tensions(tensions, ChiConvention::Derived);
    let chi_paper = chi_from_tensions(tensions, ChiConvention::Paper);
    let even = nearest_even_integer(chi_derived);
    let even_paper = nearest_even_integer(chi_paper);
    let verdict = genus_from_even_chi(even);
    let verdict_paper = genus_from_even_chi(even_paper);
    let mut notes = CONVENTION_NOTE.to_string();
    if verdict != verdict_paper {
        notes.push_str(&format!(
            " The conventions disagree here: derived gives {verdict}, paper gives {verdict_paper}."
        ));
    }
    GenusVerdictReport {
        bound_name: name.to_string(),
        count: tensions.len(),
        sum_g_mu: tensions.iter().map(StringTension::g_mu).sum(),
        chi_derived,
        chi_paper,
        nearest_even_integer: even,
        genus_verdict: verdict,
        nearest_even_paper: even_paper,
        genus_verdict_paper: verdict_paper,
        convention_notes: notes,
    }
}

impl GenusVerdictReport {
    pub const CSV_HEADER: &'static str = "name,count,sum_gmu,chi_derived,chi_paper,genus_verdict";

    /// Full-precision CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{:e},{:e},{}",
            self.bound_name,
            self.count,
            self.sum_g_mu,
            self.chi_derived,
            self.chi_paper,
            self.genus_verdict.short()
        )
    }
}

/// Spread of χ over many uniform networks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSummary {
    pub trials: usize,
    pub mean_chi_derived: f64,
    pub max_chi_derived: f64,
    pub max_chi_paper: f64,
    pub genus_one_fraction: f64,
}

/// Runs `trials` uniform networks in parallel. Trial seeds are drawn from one
/// ChaCha stream seeded with `seed`, and results are reduced in trial order,
/// so the summary does not depend on thread scheduling.
pub fn monte_carlo_chi(
    seed: u64,
    trials: usize,
    count: usize,
    bound: &ObservationalBound,
) -> Result<MonteCarloSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| rng.random()).collect();
    let reports = seeds
        .par_iter()
        .map(|&s| {
            sample_network(s, count, bound, TensionDistribution::Uniform)
                .map(|n| euler_bound_report(&n))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = reports.len().max(1) as f64;
    Ok(MonteCarloSummary {
        trials,
        mean_chi_derived: reports.iter().map(|r| r.chi_derived).sum::<f64>() / n,
        max_chi_derived: reports.iter().map(|r| r.chi_derived).fold(0.0, f64::max),
        max_chi_paper: reports.iter().map(|r| r.chi_paper).fold(0.0, f64::max),
        genus_one_fraction: reports
            .iter()
            .filter(|r| r.genus_verdict == GenusVerdict::Genus(1))
            .count() as f64
            / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spt() -> ObservationalBound {
        find_bound(&builtin_catalog(), "SPT").unwrap().clone()
    }

    #[test]
    fn gut_examples() {
        let e = gut_scale_estimate(1e16, 1.22e19).unwrap();
        assert!((e.g_mu - 6.72e-7).abs() < 0.01e-7);
        let e = gut_scale_estimate(5.0, 5.0).unwrap();
        assert_eq!(e.g_mu, 1.0);
        assert!(!e.is_physical());
        assert!(e.tension().is_err());
        assert_eq!(gut_scale_estimate(0.5, 1.0).unwrap().g_mu, 0.25);
        assert!(gut_scale_estimate(0.0, 1.0).is_err());
        assert!(gut_scale_estimate(1.0, -1.0).is_err());
    }

    #[test]
    fn builtin_catalog_values() {
        let cat = load_bound_catalog(CatalogSource::Builtin).unwrap();
        let values: Vec<(&str, f64)> = cat.iter().map(|b| (b.name.as_str(), b.g_mu_max)).collect();
        assert_eq!(
            values,
            vec![
                ("COBE", 2.0e-6),
                ("Planck", 3.2e-7),
                ("WMAP", 0.5e-6),
                ("SPT", 1.7e-7)
            ]
        );
        assert_eq!(strongest_bound(&cat).unwrap().g_mu_max, 1.7e-7);
    }

    #[test]
    fn catalog_parsing() {
        let cat = parse_bound_catalog("bound mybound 1e-8 \"test\"\n").unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat[0].name, "mybound");
        assert_eq!(cat[0].g_mu_max, 1e-8);
        assert_eq!(cat[0].source, "test");

        let cat = parse_bound_catalog("# header\n\nbound a 2E-7 \"x # y\"  # trailing\n").unwrap();
        assert_eq!(cat[0].source, "x # y");

        match parse_bound_catalog("bound ok 1e-7 \"a\"\nbound bad -1 \"x\"\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_bound_catalog("bounds a 1 \"x\""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_bound_catalog("bound a 1 x"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_bound_catalog("# nothing\n").is_err());
    }

    #[test]
    fn fixed_network_at_spt_bound() {
        let s = sample_network(7, 10, &spt(), TensionDistribution::FixedAtBound).unwrap();
        assert_eq!(s.tensions.len(), 10);
        assert!(s.tensions.iter().all(|t| t.g_mu() == 1.7e-7));
    }

    #[test]
    fn empty_and_capped_networks() {
        let s = sample_network(1, 0, &spt(), TensionDistribution::Uniform).unwrap();
        assert!(s.tensions.is_empty());
        assert_eq!(
            sample_network(1, 11, &spt(), TensionDistribution::Uniform),
            Err(Error::CountAboveCap { count: 11, cap: 10 })
        );
        let cap = CountCap {
            override_cap: true,
            ..CountCap::default()
        };
        let s = sample_network_capped(1, 11, &spt(), TensionDistribution::Uniform, cap).unwrap();
        assert_eq!(s.tensions.len(), 11);
    }

    #[test]
    fn uniform_sampling_is_deterministic_and_bounded() {
        let a = sample_network(42, 10, &spt(), TensionDistribution::Uniform).unwrap();
        let b = sample_network(42, 10, &spt(), TensionDistribution::Uniform).unwrap();
        assert_eq!(a, b);
        let c = sample_network(43, 10, &spt(), TensionDistribution::Uniform).unwrap();
        assert_ne!(a.tensions, c.tensions);
        assert!(a
            .tensions
            .iter()
            .all(|t| t.g_mu() > 0.0 && t.g_mu() <= 1.7e-7));
    }

    #[test]
    fn verdict_examples() {
        let s = sample_network(0, 10, &spt(), TensionDistribution::FixedAtBound).unwrap();
        let r = euler_bound_report(&s);
        assert!(((r.chi_derived - 6.8e-6) / 6.8e-6).abs() < 1e-12);
        assert!(((r.chi_paper - 4.272566e-5) / 4.272566e-5).abs() < 1e-6);
        assert_eq!(r.nearest_even_integer, Some(0));
        assert_eq!(r.genus_verdict, GenusVerdict::Genus(1));
        assert_eq!(r.genus_verdict_paper, GenusVerdict::Genus(1));

        let empty = sample_network(0, 0, &spt(), TensionDistribution::FixedAtBound).unwrap();
        let r = euler_bound_report(&empty);
        assert_eq!((r.chi_derived, r.chi_paper), (0.0, 0.0));
        assert_eq!(r.genus_verdict, GenusVerdict::Genus(1));

        let huge = ObservationalBound::new("huge", 0.3, "hypothetical").unwrap();
        let s = sample_network(0, 1, &huge, TensionDistribution::FixedAtBound).unwrap();
        let r = euler_bound_report(&s);
        assert!((r.chi_derived - 1.2).abs() < 1e-15);
        assert_eq!(r.nearest_even_integer, Some(2));
        assert_eq!(r.genus_verdict, GenusVerdict::Genus(0));
        assert_eq!(r.genus_verdict_paper, GenusVerdict::None);
        assert!(r.convention_notes.contains("disagree"));
    }

    #[test]
    fn even_rounding() {
        assert_eq!(nearest_even_integer(0.99), Some(0));
        assert_eq!(nearest_even_integer(1.0), None);
        assert_eq!(nearest_even_integer(1.01), Some(2));
        assert_eq!(nearest_even_integer(-3.2), Some(-4));
        assert_eq!(genus_from_even_chi(Some(-4)), GenusVerdict::Genus(3));
        assert_eq!(genus_from_even_chi(Some(4)), GenusVerdict::None);
        assert_eq!(genus_from_even_chi(None), GenusVerdict::None);
    }

    #[test]
    fn csv_row_format() {
        let s = sample_network(0, 10, &spt(), TensionDistribution::FixedAtBound).unwrap();
        let row = euler_bound_report(&s).csv_row();
        assert!(row.starts_with("SPT,10,"));
        assert!(row.ends_with(",1"));
        assert_eq!(
            row.split(',').count(),
            GenusVerdictReport::CSV_HEADER.split(',').count()
        );
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = monte_carlo_chi(3, 200, 10, &spt()).unwrap();
        let b = monte_carlo_chi(3, 200, 10, &spt()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.genus_one_fraction, 1.0);
        assert!(a.max_chi_derived <= 6.8e-6 * (1.0 + 1e-12));
    }
}
