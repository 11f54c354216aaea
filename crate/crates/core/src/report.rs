//! Text, CSV and SVG rendering for the `conefold` commands.
//!
//! Every command returns a [`CommandOutput`] holding the full stdout text and
//! an exit status, so the binary is a thin argument parser and the output can
//! be compared byte for byte in tests. Numbers in text output carry 12
//! significant digits; CSV uses the shortest round-trip representation.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cone_geometry::{
    admissible_genus, deficit_from_tension, gauss_bonnet_residual, ChiConvention, FlatConeSurface,
    StringTension, CHECK_TOLERANCE, INFERENCE_TOLERANCE,
};
use crate::error::Result;
use crate::flat_structure::{
    cone_metric_length, half_plane_count, holonomy_around_point, natural_coordinate_closed_form,
    natural_coordinate_quadrature, order_from_tension, pole_admissibility, LocalModel,
    OrderConvention, PlanarLoop, DEFAULT_QUADRATURE_SAMPLES, QUADRATURE_TARGET,
};
use crate::foliation::{
    classify, enumerate_scenarios, partition_by_class, FoliationScenario, TopologyVerdict,
};
use crate::observational::{
    euler_bound_report, find_bound, gut_scale_estimate, monte_carlo_chi, sample_network,
    sample_network_capped, strongest_bound, CountCap, GenusVerdictReport, ObservationalBound,
    TensionDistribution, DEFAULT_COUNT_CAP, GUT_SCALE_GEV,
};

/// Process exit status contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Negative = 1,
    InputError = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub text: String,
    pub status: Status,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self {
            text,
            status: Status::Success,
        }
    }

    fn verdict(text: String, positive: bool) -> Self {
        Self {
            text,
            status: if positive {
                Status::Success
            } else {
                Status::Negative
            },
        }
    }
}

/// `%.12g`-style formatting.
pub fn sig(x: f64) -> String {
    sig_digits(x, 12)
}

pub fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn complex(z: Complex64) -> String {
    format!("{},{}", sig(z.re), sig(z.im))
}

fn genus_set(set: &BTreeSet<u32>) -> String {
    let items: Vec<String> = set.iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------------------
// surface

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCheckOptions {
    pub tolerance: f64,
    pub genus_tolerance: f64,
}

impl Default for SurfaceCheckOptions {
    fn default() -> Self {
        Self {
            tolerance: CHECK_TOLERANCE,
            genus_tolerance: INFERENCE_TOLERANCE,
        }
    }
}

pub fn surface_check(
    surface: &FlatConeSurface,
    opts: SurfaceCheckOptions,
) -> Result<CommandOutput> {
    let residual = gauss_bonnet_residual(surface)?;
    let admissible = surface.is_admissible(opts.tolerance)?;
    let tensions: Vec<StringTension> = surface.points().iter().map(|p| p.tension.clone()).collect();
    let genera = crate::cone_geometry::admissible_genus_with_policy(
        &tensions,
        opts.genus_tolerance,
        surface.allows_negative_deficits(),
    )?;
    let mut out = String::new();
    writeln!(out, "genus: {}", surface.genus()).unwrap();
    writeln!(
        out,
        "euler_characteristic: {}",
        surface.euler_characteristic()
    )
    .unwrap();
    writeln!(out, "cone_points: {}", surface.points().len()).unwrap();
    writeln!(
        out,
        "total_deficit: {}",
        sig(surface.points().iter().map(|p| p.deficit_delta).sum())
    )
    .unwrap();
    writeln!(out, "residual: {}", sig(residual)).unwrap();
    writeln!(out, "tolerance: {}", sig(opts.tolerance)).unwrap();
    writeln!(
        out,
        "admissible: {}",
        if admissible {
            "admissible"
        } else {
            "inadmissible"
        }
    )
    .unwrap();
    writeln!(out, "genus_tolerance: {}", sig(opts.genus_tolerance)).unwrap();
    writeln!(out, "admissible_genus: {}", genus_set(&genera)).unwrap();
    Ok(CommandOutput::verdict(out, admissible))
}

pub fn surface_genus(tensions: &[StringTension], tolerance: f64) -> Result<CommandOutput> {
    let genera = admissible_genus(tensions, tolerance)?;
    let sum: f64 = tensions.iter().map(StringTension::g_mu).sum();
    let mut out = String::new();
    writeln!(out, "tensions: {}", tensions.len()).unwrap();
    writeln!(out, "sum_gmu: {}", sig(sum)).unwrap();
    writeln!(out, "tolerance: {}", sig(tolerance)).unwrap();
    writeln!(out, "admissible_genus: {}", genus_set(&genera)).unwrap();
    Ok(CommandOutput::verdict(out, !genera.is_empty()))
}

// ---------------------------------------------------------------------------
// bounds and networks

fn catalog_table(out: &mut String, catalog: &[ObservationalBound]) -> Result<()> {
    writeln!(out, "name\tg_mu_max\tdeficit_rad\tsource").unwrap();
    for b in catalog {
        let deficit = StringTension::new(b.g_mu_max, &b.name)
            .and_then(|t| deficit_from_tension(&t))
            .map(sig)
            .unwrap_or_else(|_| "n/a".into());
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            b.name,
            sig(b.g_mu_max),
            deficit,
            b.source
        )
        .unwrap();
    }
    Ok(())
}

pub fn bounds_report(catalog: &[ObservationalBound], catalog_label: &str) -> Result<CommandOutput> {
    let mut out = String::new();
    writeln!(out, "# conefold bounds report catalog={catalog_label}").unwrap();
    catalog_table(&mut out, catalog)?;
    if let Some(b) = strongest_bound(catalog) {
        writeln!(out, "strongest: {} ({})", b.name, sig(b.g_mu_max)).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(
        out,
        "worst case, {DEFAULT_COUNT_CAP} strings at each bound:"
    )
    .unwrap();
    writeln!(out, "{}", GenusVerdictReport::CSV_HEADER).unwrap();
    for b in catalog {
        let s = sample_network(0, DEFAULT_COUNT_CAP, b, TensionDistribution::FixedAtBound)?;
        writeln!(out, "{}", euler_bound_report(&s).csv_row()).unwrap();
    }
    Ok(CommandOutput::ok(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkOptions {
    pub seed: u64,
    pub count: usize,
    pub bound: String,
    pub distribution: TensionDistribution,
    pub override_cap: bool,
    pub catalog_label: String,
}

pub fn network_sample(
    catalog: &[ObservationalBound],
    opts: &NetworkOptions,
) -> Result<CommandOutput> {
    let bound = find_bound(catalog, &opts.bound)?;
    let cap = CountCap {
        override_cap: opts.override_cap,
        ..CountCap::default()
    };
    let sample = sample_network_capped(opts.seed, opts.count, bound, opts.distribution, cap)?;
    let report = euler_bound_report(&sample);
    let mut out = String::new();
    writeln!(
        out,
        "# conefold network sample seed={} count={} bound={} dist={} override_cap={} catalog={}",
        opts.seed,
        opts.count,
        bound.name,
        opts.distribution.name(),
        opts.override_cap,
        opts.catalog_label
    )
    .unwrap();
    for (i, t) in sample.tensions.iter().enumerate() {
        writeln!(out, "string {}: gmu={}", i + 1, sig(t.g_mu())).unwrap();
    }
    write_verdict(
        &mut out,
        &report,
        &[ChiConvention::Derived, ChiConvention::Paper],
    );
    writeln!(out, "{}", GenusVerdictReport::CSV_HEADER).unwrap();
    writeln!(out, "{}", report.csv_row()).unwrap();
    Ok(CommandOutput::ok(out))
}

fn write_verdict(out: &mut String, r: &GenusVerdictReport, conventions: &[ChiConvention]) {
    writeln!(out, "sum_gmu: {}", sig(r.sum_g_mu)).unwrap();
    for c in conventions {
        match c {
            ChiConvention::Derived => writeln!(out, "chi_derived: {}", sig(r.chi_derived)).unwrap(),
            ChiConvention::Paper => writeln!(out, "chi_paper: {}", sig(r.chi_paper)).unwrap(),
        }
    }
    let even = |e: Option<i64>| e.map(|v| v.to_string()).unwrap_or_else(|| "none".into());
    if conventions.contains(&ChiConvention::Derived) {
        writeln!(
            out,
            "nearest_even_integer: {}",
            even(r.nearest_even_integer)
        )
        .unwrap();
        writeln!(out, "genus_verdict: {}", r.genus_verdict).unwrap();
    }
    if conventions.contains(&ChiConvention::Paper) {
        writeln!(
            out,
            "nearest_even_integer_paper: {}",
            even(r.nearest_even_paper)
        )
        .unwrap();
        writeln!(out, "genus_verdict_paper: {}", r.genus_verdict_paper).unwrap();
    }
    if conventions.len() == 2 {
        writeln!(out, "convention_note: {}", r.convention_notes).unwrap();
    }
}

// ---------------------------------------------------------------------------
// flat structure and probes

pub fn flat_natural_coord(n: f64, z: Complex64) -> Result<CommandOutput> {
    let model = LocalModel::new(n)?;
    let w = natural_coordinate_closed_form(n, z)?;
    let mut out = String::new();
    writeln!(out, "order_n: {}", sig(n)).unwrap();
    writeln!(out, "c: {}", sig(model.c)).unwrap();
    writeln!(out, "coefficient: {}", sig(model.coefficient)).unwrap();
    writeln!(out, "cone_angle: {}", sig(model.total_cone_angle())).unwrap();
    if n.fract() == 0.0 {
        writeln!(out, "half_planes: {}", half_plane_count(n as i64)?).unwrap();
    }
    writeln!(out, "z: {}", complex(z)).unwrap();
    writeln!(out, "w: {}", complex(w)).unwrap();
    Ok(CommandOutput::ok(out))
}

pub fn flat_quadrature_check(
    n: f64,
    z: Complex64,
    samples: Option<usize>,
) -> Result<CommandOutput> {
    let samples = samples.unwrap_or(DEFAULT_QUADRATURE_SAMPLES);
    let closed = natural_coordinate_closed_form(n, z)?;
    let quad = natural_coordinate_quadrature(n, z, samples)?;
    let rel = (quad - closed).norm() / closed.norm();
    let pass = rel <= QUADRATURE_TARGET;
    let mut out = String::new();
    writeln!(out, "order_n: {}", sig(n)).unwrap();
    writeln!(out, "z: {}", complex(z)).unwrap();
    writeln!(out, "samples: {samples}").unwrap();
    writeln!(out, "closed_form: {}", complex(closed)).unwrap();
    writeln!(out, "quadrature: {}", complex(quad)).unwrap();
    writeln!(out, "relative_error: {}", sig(rel)).unwrap();
    writeln!(out, "target: {}", sig(QUADRATURE_TARGET)).unwrap();
    writeln!(out, "agreement: {}", if pass { "pass" } else { "fail" }).unwrap();
    Ok(CommandOutput::verdict(out, pass))
}

pub fn probe_holonomy(g_mu: f64, path: &PlanarLoop) -> Result<CommandOutput> {
    let t = StringTension::new(g_mu, "probe")?;
    let h = holonomy_around_point(&t, path)?;
    let delta = deficit_from_tension(&t)?;
    let winding = path.winding().round();
    let mut out = String::new();
    writeln!(out, "gmu: {}", sig(g_mu)).unwrap();
    writeln!(out, "winding: {winding}").unwrap();
    writeln!(out, "holonomy: {}", sig(h)).unwrap();
    writeln!(out, "expected: {}", sig(winding * delta)).unwrap();
    writeln!(out, "difference: {}", sig(h - winding * delta)).unwrap();
    Ok(CommandOutput::ok(out))
}

pub fn probe_length(c: f64, path: &PlanarLoop) -> Result<CommandOutput> {
    let len = cone_metric_length(c, path)?;
    let mut out = String::new();
    writeln!(out, "c: {}", sig(c)).unwrap();
    writeln!(out, "vertices: {}", path.vertices().len()).unwrap();
    writeln!(out, "closed: {}", yes_no(path.is_closed())).unwrap();
    writeln!(out, "length: {}", sig(len)).unwrap();
    Ok(CommandOutput::ok(out))
}

// ---------------------------------------------------------------------------
// classification

fn write_verdict_block(out: &mut String, s: &FoliationScenario, v: &TopologyVerdict) {
    writeln!(out, "scenario: {}", s.key()).unwrap();
    writeln!(out, "class: {}", v.class).unwrap();
    writeln!(out, "excluded: {}", yes_no(v.excluded)).unwrap();
    for c in &v.claims {
        writeln!(out, "claim: [{}] {}", c.statement_id.code(), c.human_text).unwrap();
        writeln!(out, "  anchor: \"{}\"", c.paper_anchor).unwrap();
    }
    for id in &v.withheld {
        writeln!(out, "withheld: [{}]", id.code()).unwrap();
    }
}

pub fn classify_scenario(key: &str) -> Result<CommandOutput> {
    let s = FoliationScenario::from_key(key)?;
    let v = classify(&s);
    let mut out = String::new();
    write_verdict_block(&mut out, &s, &v);
    Ok(CommandOutput::verdict(out, !v.excluded))
}

pub fn classify_enumerate() -> CommandOutput {
    let mut out = String::new();
    write_classification_table(&mut out);
    CommandOutput::ok(out)
}

fn write_classification_table(out: &mut String) {
    let table = enumerate_scenarios();
    for (i, (s, v)) in table.iter().enumerate() {
        if i > 0 {
            writeln!(out).unwrap();
        }
        write_verdict_block(out, s, v);
    }
    writeln!(out).unwrap();
    let parts = partition_by_class(&table);
    writeln!(out, "scenarios: {}", table.len()).unwrap();
    writeln!(out, "verdict_classes: {}", parts.len()).unwrap();
    for (class, keys) in parts {
        writeln!(out, "  {}: {}", class, keys.join(", ")).unwrap();
    }
}

// ---------------------------------------------------------------------------
// full report

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
    SvgData,
}

impl ReportFormat {
    pub fn name(self) -> &'static str {
        match self {
            ReportFormat::Text => "text",
            ReportFormat::Csv => "csv",
            ReportFormat::SvgData => "svg-data",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChiSelection {
    Derived,
    Paper,
    #[default]
    Both,
}

impl ChiSelection {
    pub fn name(self) -> &'static str {
        match self {
            ChiSelection::Derived => "derived",
            ChiSelection::Paper => "paper",
            ChiSelection::Both => "both",
        }
    }

    pub fn conventions(self) -> Vec<ChiConvention> {
        match self {
            ChiSelection::Derived => vec![ChiConvention::Derived],
            ChiSelection::Paper => vec![ChiConvention::Paper],
            ChiSelection::Both => vec![ChiConvention::Derived, ChiConvention::Paper],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub chi: ChiSelection,
    pub order: OrderConvention,
    pub format: ReportFormat,
    pub catalog_label: String,
    pub count: usize,
    pub planck_mass_gev: f64,
    pub monte_carlo_trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            chi: ChiSelection::Both,
            order: OrderConvention::SelfConsistent,
            format: ReportFormat::Text,
            catalog_label: "builtin".into(),
            count: DEFAULT_COUNT_CAP,
            planck_mass_gev: crate::observational::PLANCK_MASS_GEV,
            monte_carlo_trials: 1000,
        }
    }
}

impl RunConfig {
    fn header_fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("seed", self.seed.to_string()),
            ("chi", self.chi.name().into()),
            ("order", self.order.name().into()),
            ("format", self.format.name().into()),
            ("catalog", self.catalog_label.clone()),
            ("count", self.count.to_string()),
            ("planck_mass_gev", sig(self.planck_mass_gev)),
            ("trials", self.monte_carlo_trials.to_string()),
        ]
    }
}

pub fn report_all(catalog: &[ObservationalBound], cfg: &RunConfig) -> Result<CommandOutput> {
    match cfg.format {
        ReportFormat::Text => report_text(catalog, cfg),
        ReportFormat::Csv => Ok(CommandOutput::ok(report_csv(catalog, cfg)?)),
        ReportFormat::SvgData => Ok(CommandOutput::ok(report_svg(catalog, cfg)?)),
    }
}

fn report_text(catalog: &[ObservationalBound], cfg: &RunConfig) -> Result<CommandOutput> {
    let conventions = cfg.chi.conventions();
    let mut out = String::new();
    writeln!(out, "# conefold report all").unwrap();
    for (k, v) in cfg.header_fields() {
        writeln!(out, "# {k}: {v}").unwrap();
    }

    writeln!(out, "\n== GUT-scale estimate ==").unwrap();
    let gut = gut_scale_estimate(GUT_SCALE_GEV, cfg.planck_mass_gev)?;
    writeln!(out, "eta_gev: {}", sig(gut.eta_gev)).unwrap();
    writeln!(out, "planck_mass_gev: {}", sig(gut.planck_mass_gev)).unwrap();
    writeln!(out, "gmu: {}", sig(gut.g_mu)).unwrap();
    writeln!(out, "order_of_magnitude: 1e{}", gut.g_mu.log10().round()).unwrap();
    writeln!(out, "physical: {}", yes_no(gut.is_physical())).unwrap();

    writeln!(out, "\n== Bound catalog ==").unwrap();
    catalog_table(&mut out, catalog)?;

    let bound = strongest_bound(catalog).expect("catalog is never empty");
    let cap = CountCap {
        override_cap: true,
        ..CountCap::default()
    };
    let network = sample_network_capped(
        cfg.seed,
        cfg.count,
        bound,
        TensionDistribution::FixedAtBound,
        cap,
    )?;
    writeln!(out, "\n== Worst-case network ==").unwrap();
    writeln!(out, "bound: {} (strongest)", bound.name).unwrap();
    writeln!(out, "count: {}", network.tensions.len()).unwrap();
    writeln!(out, "distribution: {}", network.distribution.name()).unwrap();
    writeln!(out, "gmu_each: {}", sig(bound.g_mu_max)).unwrap();
    let surface = FlatConeSurface::from_tensions(1, &network.tensions);
    if let Ok(surface) = surface {
        writeln!(
            out,
            "torus_residual: {}",
            sig(gauss_bonnet_residual(&surface)?)
        )
        .unwrap();
    }

    let report = euler_bound_report(&network);
    writeln!(out, "\n== Euler characteristic and genus verdict ==").unwrap();
    write_verdict(&mut out, &report, &conventions);
    writeln!(out, "quoted_bound: chi < 1e-6 (order of magnitude)").unwrap();

    writeln!(out, "\n== Differential order at the bound ==").unwrap();
    let t = StringTension::new(bound.g_mu_max, &bound.name)?;
    let cone_angle = 2.0 * PI * (1.0 - 4.0 * t.g_mu());
    let mut orders = vec![cfg.order];
    let other = match cfg.order {
        OrderConvention::SelfConsistent => OrderConvention::Paper,
        OrderConvention::Paper => OrderConvention::SelfConsistent,
    };
    orders.push(other);
    writeln!(out, "string_cone_angle: {}", sig(cone_angle)).unwrap();
    for conv in orders {
        let n = order_from_tension(&t, conv);
        let model_angle = (n + 2.0) * PI;
        writeln!(out, "order_n[{conv}]: {}", sig(n)).unwrap();
        writeln!(out, "  model_cone_angle: {}", sig(model_angle)).unwrap();
        writeln!(
            out,
            "  matches_string: {}",
            yes_no((model_angle - cone_angle).abs() <= 1e-12 * cone_angle)
        )
        .unwrap();
        writeln!(
            out,
            "  pole_admissible: {}",
            yes_no(pole_admissibility(&t, conv))
        )
        .unwrap();
    }
    writeln!(
        out,
        "order_note: n = -16*Gmu gives a cone deficit of 16*pi*Gmu, twice the string deficit 8*pi*Gmu; \
n = -8*Gmu matches the string cone exactly. Pole bound Gmu <= 1/16 (paper) or 1/8 (self-consistent)."
    )
    .unwrap();

    writeln!(out, "\n== Uniform networks ==").unwrap();
    let mc = monte_carlo_chi(
        cfg.seed,
        cfg.monte_carlo_trials,
        cfg.count.min(DEFAULT_COUNT_CAP),
        bound,
    )?;
    writeln!(out, "bound: {}", bound.name).unwrap();
    writeln!(out, "trials: {}", mc.trials).unwrap();
    if conventions.contains(&ChiConvention::Derived) {
        writeln!(out, "mean_chi_derived: {}", sig(mc.mean_chi_derived)).unwrap();
        writeln!(out, "max_chi_derived: {}", sig(mc.max_chi_derived)).unwrap();
    }
    if conventions.contains(&ChiConvention::Paper) {
        writeln!(out, "max_chi_paper: {}", sig(mc.max_chi_paper)).unwrap();
    }
    writeln!(out, "genus_one_fraction: {}", sig(mc.genus_one_fraction)).unwrap();

    writeln!(out, "\n== Foliation scenarios ==").unwrap();
    write_classification_table(&mut out);
    Ok(CommandOutput::ok(out))
}

type ChiSeries = Vec<(usize, GenusVerdictReport)>;

/// χ at the bound for 1..=count strings, per catalog entry.
fn chi_series(catalog: &[ObservationalBound], count: usize) -> Result<Vec<(String, ChiSeries)>> {
    let cap = CountCap {
        override_cap: true,
        ..CountCap::default()
    };
    catalog
        .iter()
        .map(|b| {
            let rows = (1..=count)
                .map(|k| {
                    sample_network_capped(0, k, b, TensionDistribution::FixedAtBound, cap)
                        .map(|s| (k, euler_bound_report(&s)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((b.name.clone(), rows))
        })
        .collect()
}

fn report_csv(catalog: &[ObservationalBound], cfg: &RunConfig) -> Result<String> {
    let conventions = cfg.chi.conventions();
    let mut out = String::new();
    for (k, v) in cfg.header_fields() {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    let mut header = vec!["bound", "count"];
    for c in &conventions {
        header.push(match c {
            ChiConvention::Derived => "chi_derived",
            ChiConvention::Paper => "chi_paper",
        });
    }
    writeln!(out, "{}", header.join(",")).unwrap();
    for (name, rows) in chi_series(catalog, cfg.count)? {
        for (k, r) in rows {
            let mut fields = vec![name.clone(), k.to_string()];
            for c in &conventions {
                fields.push(match c {
                    ChiConvention::Derived => format!("{:e}", r.chi_derived),
                    ChiConvention::Paper => format!("{:e}", r.chi_paper),
                });
            }
            writeln!(out, "{}", fields.join(",")).unwrap();
        }
    }
    Ok(out)
}

const SVG_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn report_svg(catalog: &[ObservationalBound], cfg: &RunConfig) -> Result<String> {
    let conventions = cfg.chi.conventions();
    let series = chi_series(catalog, cfg.count)?;
    let pick = |r: &GenusVerdictReport, c: ChiConvention| match c {
        ChiConvention::Derived => r.chi_derived,
        ChiConvention::Paper => r.chi_paper,
    };
    let values: Vec<f64> = series
        .iter()
        .flat_map(|(_, rows)| rows.iter())
        .flat_map(|(_, r)| conventions.iter().map(move |&c| pick(r, c)))
        .filter(|v| *v > 0.0)
        .collect();
    let lo = values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .log10()
        .floor();
    let hi = values
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        .log10()
        .ceil();
    let (lo, hi) = if lo.is_finite() && hi > lo {
        (lo, hi)
    } else {
        (-7.0, -3.0)
    };

    let (w, h, left, right, top, bottom) = (640.0, 400.0, 70.0, 160.0, 30.0, 50.0);
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let max_count = cfg.count.max(2) as f64;
    let x = |k: usize| left + (k as f64 - 1.0) / (max_count - 1.0) * plot_w;
    let y = |v: f64| top + (hi - v.log10()) / (hi - lo) * plot_h;

    let mut out = String::new();
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">").unwrap();
    let header: Vec<String> = cfg
        .header_fields()
        .into_iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    writeln!(out, "<!-- conefold report all {} -->", header.join(" ")).unwrap();
    writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>").unwrap();
    writeln!(
        out,
        "<rect x=\"{left}\" y=\"{top}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>"
    )
    .unwrap();
    let decades = (hi - lo) as i32;
    for d in 0..=decades {
        let e = lo + d as f64;
        let yy = y(10f64.powf(e));
        writeln!(
            out,
            "<line x1=\"{left}\" y1=\"{yy:.2}\" x2=\"{}\" y2=\"{yy:.2}\" stroke=\"#ddd\"/>",
            left + plot_w
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">1e{}</text>",
            left - 6.0,
            yy + 4.0,
            e
        )
        .unwrap();
    }
    for k in 1..=cfg.count {
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{k}</text>",
            x(k),
            top + plot_h + 16.0
        )
        .unwrap();
    }
    writeln!(out, "<text x=\"{:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">strings per horizon volume</text>", left + plot_w / 2.0, h - 10.0).unwrap();
    writeln!(out, "<text x=\"16\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">chi</text>", top + plot_h / 2.0, top + plot_h / 2.0).unwrap();

    let mut legend = 0;
    for (i, (name, rows)) in series.iter().enumerate() {
        for (j, &c) in conventions.iter().enumerate() {
            let color = SVG_COLORS[i % SVG_COLORS.len()];
            let dash = if j == 1 {
                " stroke-dasharray=\"5,3\""
            } else {
                ""
            };
            let pts: Vec<String> = rows
                .iter()
                .filter(|(_, r)| pick(r, c) > 0.0)
                .map(|(k, r)| format!("{:.2},{:.2}", x(*k), y(pick(r, c))))
                .collect();
            writeln!(
                out,
                "<polyline data-bound=\"{name}\" data-chi=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{color}\"{dash}/>",
                c.name(),
                pts.join(" ")
            )
            .unwrap();
            for (k, r) in rows {
                writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\" data-count=\"{k}\" data-value=\"{:e}\"/>",
                    x(*k),
                    y(pick(r, c)),
                    pick(r, c)
                )
                .unwrap();
            }
            let ly = top + 14.0 + 16.0 * legend as f64;
            writeln!(
                out,
                "<text x=\"{}\" y=\"{ly:.2}\" font-size=\"11\" fill=\"{color}\">{name} ({})</text>",
                left + plot_w + 10.0,
                c.name()
            )
            .unwrap();
            legend += 1;
        }
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
