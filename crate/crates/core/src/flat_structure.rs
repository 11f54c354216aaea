//! Local models of quadratic differentials and numerical probes of the cone
//! metric.
//!
//! Near a zero or simple pole of order n, a quadratic differential can be put
//! in the form φ(z)dz² = ((n+2)/2)² zⁿ dz². Its natural coordinate is
//! w = z^((n+2)/2), the induced metric is ds² = dr² + (c r dθ)² with
//! c = (n+2)/2, and the total angle around the point is (n+2)π.
//!
//! The probes in this module work in a single polar chart (r, θ), θ taken
//! mod 2π, around one cone point. A string of tension Gμ is the cone with
//! c = 1 − 4Gμ.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::cone_geometry::StringTension;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

const TWO_PI: f64 = 2.0 * PI;

/// Default node count for [`natural_coordinate_quadrature`].
pub const DEFAULT_QUADRATURE_SAMPLES: usize = 4096;
/// Upper limit for the doubling loop in [`natural_coordinate_adaptive`].
pub const MAX_QUADRATURE_SAMPLES: usize = 1 << 20;
/// Relative agreement target for the adaptive natural-coordinate quadrature.
pub const QUADRATURE_TARGET: f64 = 1e-8;

const PANEL_ORDER: usize = 16;
const MAX_GRADED_PANELS: usize = 1000;
const MAX_PANEL_ORDER: usize = 128;

/// RK4 steps per radian of chart angle (and per unit of relative radial change).
pub const HOLONOMY_STEPS_PER_RADIAN: usize = 2048;

/// How the differential order n is tied to a string tension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OrderConvention {
    /// n = −8Gμ: the order whose cone angle (n+2)π equals 2π(1 − 4Gμ).
    #[default]
    SelfConsistent,
    /// n = −16Gμ, the relation as usually quoted; its cone angle is off by a
    /// factor of two in the deficit.
    Paper,
}

impl OrderConvention {
    pub fn name(self) -> &'static str {
        match self {
            OrderConvention::SelfConsistent => "self-consistent",
            OrderConvention::Paper => "paper",
        }
    }
}

impl fmt::Display for OrderConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// φ(z)dz² = coefficient · zⁿ dz² with coefficient = c², c = (n+2)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalModel {
    pub order_n: f64,
    pub coefficient: f64,
    pub c: f64,
}

impl LocalModel {
    pub fn new(order_n: f64) -> Result<Self> {
        if !order_n.is_finite() || order_n <= -2.0 {
            return Err(Error::OrderOutOfRange(order_n));
        }
        let c = (order_n + 2.0) / 2.0;
        Ok(Self {
            order_n,
            coefficient: c * c,
            c,
        })
    }

    pub fn total_cone_angle(&self) -> f64 {
        (self.order_n + 2.0) * PI
    }

    /// √φ on the principal branch, consistent with w = z^c.
    pub fn sqrt_phi(&self, z: Complex64) -> Complex64 {
        self.c * z.powf(self.order_n / 2.0)
    }
}

/// w(z) = z^((n+2)/2) on the principal branch (cut along the negative real axis).
pub fn natural_coordinate_closed_form(n: f64, z: Complex64) -> Result<Complex64> {
    let model = LocalModel::new(n)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    Ok(z.powf(model.c))
}

/// w(z_end) = ∫ √φ(ζ) dζ along the ray from the cone point to `z_end`.
///
/// The ray is cut into geometrically shrinking panels toward the cone point,
/// each integrated with a Gauss-Legendre rule, so the ζ^(n/2) endpoint
/// singularity for n < 0 is never evaluated. `samples` is the total node
/// budget; more samples add panels closer to the origin.
pub fn natural_coordinate_quadrature(
    n: f64,
    z_end: Complex64,
    samples: usize,
) -> Result<Complex64> {
    let model = LocalModel::new(n)?;
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let radius = z_end.norm();
    if radius == 0.0 || !radius.is_finite() {
        return Err(Error::PathThroughOrigin);
    }
    let direction = z_end / radius;

    let panels = (samples / PANEL_ORDER).clamp(1, MAX_GRADED_PANELS);
    let order = (samples / panels).clamp(1, MAX_PANEL_ORDER);
    let rule = GaussLegendre::new(order);

    let integrate = |a: f64, b: f64| -> Complex64 {
        rule.on(a, b)
            .map(|(r, w)| model.sqrt_phi(direction * r) * w)
            .sum::<Complex64>()
    };

    // panels [R/2, R], [R/4, R/2], ..., then [0, R/2^(panels-1)]
    let mut total = Complex64::new(0.0, 0.0);
    let mut hi = radius;
    for _ in 1..panels {
        let lo = 0.5 * hi;
        total += integrate(lo, hi);
        hi = lo;
    }
    total += integrate(0.0, hi);
    Ok(total * direction)
}

/// Result of the doubling loop in [`natural_coordinate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveQuadrature {
    pub value: Complex64,
    pub samples: usize,
    /// Relative change between the last two sample counts.
    pub last_change: f64,
}

/// Doubles the sample count from [`DEFAULT_QUADRATURE_SAMPLES`] until two
/// successive estimates agree to well inside [`QUADRATURE_TARGET`], or the
/// [`MAX_QUADRATURE_SAMPLES`] cap is reached.
pub fn natural_coordinate_adaptive(n: f64, z_end: Complex64) -> Result<AdaptiveQuadrature> {
    let mut samples = DEFAULT_QUADRATURE_SAMPLES;
    let mut value = natural_coordinate_quadrature(n, z_end, samples)?;
    loop {
        let next_samples = samples * 2;
        let next = natural_coordinate_quadrature(n, z_end, next_samples)?;
        let change = (next - value).norm() / next.norm();
        samples = next_samples;
        value = next;
        if change <= 0.01 * QUADRATURE_TARGET || samples >= MAX_QUADRATURE_SAMPLES {
            return Ok(AdaptiveQuadrature {
                value,
                samples,
                last_change: change,
            });
        }
    }
}

/// Number of half-planes the natural coordinate maps a neighbourhood of an
/// order-n point onto.
pub fn half_plane_count(n: i64) -> Result<u32> {
    if n < -1 {
        return Err(Error::PoleOrderTooLow(n));
    }
    u32::try_from(n + 2).map_err(|_| Error::PoleOrderTooLow(n))
}

pub fn order_from_tension(t: &StringTension, convention: OrderConvention) -> f64 {
    match convention {
        OrderConvention::SelfConsistent => -8.0 * t.g_mu(),
        OrderConvention::Paper => -16.0 * t.g_mu(),
    }
}

/// True when the string produces at worst a simple pole (n ≥ −1).
pub fn pole_admissibility(t: &StringTension, convention: OrderConvention) -> bool {
    order_from_tension(t, convention) >= -1.0
}

/// A vertex of a [`PlanarLoop`] in the polar chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarVertex {
    pub r: f64,
    pub angle: f64,
}

/// Piecewise path in one polar chart around a cone point.
///
/// Consecutive vertices are joined by chart-straight segments: r and θ vary
/// linearly, and θ moves by the representative of the angle difference in
/// (−π, π]. A closed loop also joins the last vertex back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarLoop {
    vertices: Vec<PolarVertex>,
    closed: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    r0: f64,
    dr: f64,
    dtheta: f64,
}

impl PlanarLoop {
    pub fn new(vertices: Vec<PolarVertex>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::TooFewVertices {
                needed: 2,
                got: vertices.len(),
            });
        }
        for (index, v) in vertices.iter().enumerate() {
            if !(v.r > 0.0 && v.r.is_finite()) {
                return Err(Error::InvalidRadius { index, radius: v.r });
            }
            if !v.angle.is_finite() {
                return Err(Error::InvalidAngle {
                    index,
                    angle: v.angle,
                });
            }
        }
        Ok(Self { vertices, closed })
    }

    pub fn from_pairs(pairs: &[(f64, f64)], closed: bool) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(r, angle)| PolarVertex { r, angle })
                .collect(),
            closed,
        )
    }

    /// Closed loop at constant chart radius through `vertices` equally spaced
    /// angles, traversed once counter-clockwise.
    pub fn circle(radius: f64, vertices: usize) -> Result<Self> {
        let n = vertices.max(3);
        Self::new(
            (0..n)
                .map(|i| PolarVertex {
                    r: radius,
                    angle: TWO_PI * i as f64 / n as f64,
                })
                .collect(),
            true,
        )
    }

    /// The same closed loop traversed `k` times.
    pub fn repeated(&self, k: usize) -> Self {
        let mut vertices = Vec::with_capacity(self.vertices.len() * k);
        for _ in 0..k {
            vertices.extend_from_slice(&self.vertices);
        }
        Self {
            vertices,
            closed: self.closed,
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.vertices
                .iter()
                .map(|v| PolarVertex {
                    r: v.r * factor,
                    angle: v.angle,
                })
                .collect(),
            self.closed,
        )
    }

    pub fn with_closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    pub fn vertices(&self) -> &[PolarVertex] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            Segment {
                r0: a.r,
                dr: b.r - a.r,
                dtheta: wrap_angle(b.angle - a.angle),
            }
        })
    }

    /// Total chart angle swept, divided by 2π.
    pub fn winding(&self) -> f64 {
        self.segments().map(|s| s.dtheta).sum::<f64>() / TWO_PI
    }
}

/// Parses `r1,a1:r2,a2:...` (angles in radians) as a closed loop.
impl FromStr for PlanarLoop {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, item) in s.split(':').enumerate() {
            let bad = |what: &str| Error::Parse {
                line: 1,
                message: format!("loop vertex {}: {what} in '{item}'", i + 1),
            };
            let (r, a) = item
                .split_once(',')
                .ok_or_else(|| bad("expected r,angle"))?;
            let r = r.trim().parse::<f64>().map_err(|_| bad("bad radius"))?;
            let a = a.trim().parse::<f64>().map_err(|_| bad("bad angle"))?;
            pairs.push((r, a));
        }
        Self::from_pairs(&pairs, true)
    }
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(TWO_PI);
    if x > PI {
        x -= TWO_PI;
    }
    x
}

/// Length of `path` under ds² = dr² + (c r dθ)².
pub fn cone_metric_length(c: f64, path: &PlanarLoop) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidMetricFactor(c));
    }
    let rule = GaussLegendre::new(PANEL_ORDER);
    let panels = 8;
    let mut total = 0.0;
    for seg in path.segments() {
        let speed = |s: f64| {
            let r = seg.r0 + s * seg.dr;
            (seg.dr * seg.dr + (c * r * seg.dtheta).powi(2)).sqrt()
        };
        for p in 0..panels {
            let a = p as f64 / panels as f64;
            let b = (p + 1) as f64 / panels as f64;
            total += rule.integrate(a, b, speed);
        }
    }
    Ok(total)
}

/// Rotation angle picked up by a vector parallel-transported around `path`
/// on the cone of a string with tension `t`.
///
/// Transport is integrated with RK4 in the coordinate components (Vʳ, Vᶿ) of
/// the metric dr² + (1 − 4Gμ)² r² dθ². The angle is the continuous lift, so a
/// loop traversed k times returns k·Δ rather than a value reduced mod 2π.
pub fn holonomy_around_point(t: &StringTension, path: &PlanarLoop) -> Result<f64> {
    holonomy_with_resolution(t, path, HOLONOMY_STEPS_PER_RADIAN)
}

pub fn holonomy_with_resolution(
    t: &StringTension,
    path: &PlanarLoop,
    steps_per_radian: usize,
) -> Result<f64> {
    if t.g_mu() >= 0.25 {
        return Err(Error::ConeAngleNonPositive(t.g_mu()));
    }
    if !path.closed {
        return Err(Error::OpenLoop);
    }
    let turns = path.winding();
    let winding = turns.round();
    if winding == 0.0 || (turns - winding).abs() > 1e-9 {
        return Err(Error::ZeroWinding);
    }
    let c = 1.0 - 4.0 * t.g_mu();
    let c2 = c * c;

    let first = path.vertices[0];
    // unit vector along e_r at the base point
    let (mut vr, mut vt) = (1.0_f64, 0.0_f64);
    let frame_angle = |r: f64, vr: f64, vt: f64| (c * r * vt).atan2(vr);
    let mut prev = frame_angle(first.r, vr, vt);
    let mut rotation = 0.0;

    for seg in path.segments() {
        let span = seg.dtheta.abs() + (seg.dr.abs() / seg.r0.min(seg.r0 + seg.dr));
        let steps = ((span * steps_per_radian as f64).ceil() as usize).max(16);
        let h = 1.0 / steps as f64;
        let rhs = |s: f64, vr: f64, vt: f64| {
            let r = seg.r0 + s * seg.dr;
            (
                c2 * r * seg.dtheta * vt,
                -(seg.dr * vt + seg.dtheta * vr) / r,
            )
        };
        for k in 0..steps {
            let s = k as f64 * h;
            let (a1, b1) = rhs(s, vr, vt);
            let (a2, b2) = rhs(s + 0.5 * h, vr + 0.5 * h * a1, vt + 0.5 * h * b1);
            let (a3, b3) = rhs(s + 0.5 * h, vr + 0.5 * h * a2, vt + 0.5 * h * b2);
            let (a4, b4) = rhs(s + h, vr + h * a3, vt + h * b3);
            vr += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            vt += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);

            let r = seg.r0 + (s + h) * seg.dr;
            let now = frame_angle(r, vr, vt);
            rotation += wrap_angle(now - prev);
            prev = now;
        }
    }
    // the polar frame itself turns by 2π per winding; what is left over is the
    // rotation of the vector relative to a parallel frame
    Ok(TWO_PI * winding + rotation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(g: f64) -> StringTension {
        StringTension::new(g, "test").unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn local_model_fields() {
        let m = LocalModel::new(1.0).unwrap();
        assert_eq!(m.c, 1.5);
        assert_eq!(m.coefficient, m.c * m.c);
        assert_eq!(m.total_cone_angle(), 3.0 * PI);
        assert!(LocalModel::new(-2.0).is_err());
        assert!(LocalModel::new(f64::NAN).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            natural_coordinate_closed_form(1.0, c(1.0, 0.0)).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            natural_coordinate_closed_form(1.0, c(4.0, 0.0)).unwrap(),
            c(8.0, 0.0)
        );
        let z = c(0.3, -1.7);
        let w = natural_coordinate_closed_form(0.0, z).unwrap();
        assert!((w - z).norm() < 1e-15);
        assert!(matches!(
            natural_coordinate_closed_form(-2.0, z),
            Err(Error::OrderOutOfRange(_))
        ));
    }

    #[test]
    fn quadrature_examples() {
        let w =
            natural_coordinate_quadrature(0.0, c(1.0, 0.0), DEFAULT_QUADRATURE_SAMPLES).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-12);
        let w =
            natural_coordinate_quadrature(1.0, c(4.0, 0.0), DEFAULT_QUADRATURE_SAMPLES).unwrap();
        assert!((w - c(8.0, 0.0)).norm() / 8.0 < 1e-8);
        let w =
            natural_coordinate_quadrature(-1.0, c(1.0, 0.0), DEFAULT_QUADRATURE_SAMPLES).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn quadrature_off_axis_matches_principal_branch() {
        for n in [-1.0, -0.5, 0.0, 1.0, 2.5] {
            for z in [c(0.5, 0.5), c(-1.0, 0.2), c(0.0, -3.0), c(-2.0, -0.01)] {
                let q = natural_coordinate_quadrature(n, z, DEFAULT_QUADRATURE_SAMPLES).unwrap();
                let w = natural_coordinate_closed_form(n, z).unwrap();
                assert!((q - w).norm() / w.norm() < 1e-8, "n={n} z={z} q={q} w={w}");
            }
        }
    }

    #[test]
    fn quadrature_rejects_origin_and_zero_samples() {
        assert_eq!(
            natural_coordinate_quadrature(1.0, c(0.0, 0.0), 64),
            Err(Error::PathThroughOrigin)
        );
        assert_eq!(
            natural_coordinate_quadrature(1.0, c(1.0, 0.0), 0),
            Err(Error::ZeroSamples)
        );
    }

    #[test]
    fn adaptive_quadrature_stops_early_when_converged() {
        let a = natural_coordinate_adaptive(-1.0, c(4.0, 0.0)).unwrap();
        assert!(a.samples <= MAX_QUADRATURE_SAMPLES);
        assert!((a.value - c(2.0, 0.0)).norm() / 2.0 < 1e-8);
    }

    #[test]
    fn half_planes() {
        assert_eq!(half_plane_count(1).unwrap(), 3);
        assert_eq!(half_plane_count(0).unwrap(), 2);
        assert_eq!(half_plane_count(-1).unwrap(), 1);
        assert_eq!(half_plane_count(-2), Err(Error::PoleOrderTooLow(-2)));
        for n in -1..20 {
            assert!(half_plane_count(n + 1).unwrap() > half_plane_count(n).unwrap());
        }
    }

    #[test]
    fn order_conventions() {
        assert_eq!(
            order_from_tension(&t(1.0 / 16.0), OrderConvention::Paper),
            -1.0
        );
        assert_eq!(order_from_tension(&t(0.0), OrderConvention::Paper), 0.0);
        assert_eq!(
            order_from_tension(&t(0.0), OrderConvention::SelfConsistent),
            0.0
        );
        assert_eq!(
            order_from_tension(&t(1e-6), OrderConvention::SelfConsistent),
            -8e-6
        );
    }

    #[test]
    fn pole_bound_flips_at_one_sixteenth() {
        let p = OrderConvention::Paper;
        assert!(pole_admissibility(&t(1.0 / 16.0), p));
        assert!(!pole_admissibility(&t(0.07), p));
        assert!(pole_admissibility(&t(3.2e-7), p));
        let just_above = f64::from_bits((1.0_f64 / 16.0).to_bits() + 1);
        assert!(!pole_admissibility(&t(just_above), p));
        // n = −8Gμ puts the same threshold at Gμ = 1/8
        assert!(pole_admissibility(
            &t(0.125),
            OrderConvention::SelfConsistent
        ));
        assert!(!pole_admissibility(
            &t(0.126),
            OrderConvention::SelfConsistent
        ));
    }

    #[test]
    fn metric_length_examples() {
        let quarter = PlanarLoop::from_pairs(&[(1.0, 0.0), (1.0, PI / 2.0)], false).unwrap();
        assert!((cone_metric_length(1.0, &quarter).unwrap() - PI / 2.0).abs() < 1e-12);

        let circle = PlanarLoop::circle(1.0, 8).unwrap();
        assert!((cone_metric_length(0.5, &circle).unwrap() - PI).abs() < 1e-12);

        let radial = PlanarLoop::from_pairs(&[(1.0, 0.3), (2.0, 0.3)], false).unwrap();
        assert!((cone_metric_length(1.5, &radial).unwrap() - 1.0).abs() < 1e-14);

        assert!(matches!(
            cone_metric_length(0.0, &radial),
            Err(Error::InvalidMetricFactor(_))
        ));
    }

    #[test]
    fn euclidean_spiral_length_matches_closed_form() {
        // r = 1 + θ/π for θ ∈ [0, π/2]: Archimedean spiral segment, c = 1
        let path = PlanarLoop::from_pairs(&[(1.0, 0.0), (1.5, PI / 2.0)], false).unwrap();
        let a = 1.0 / PI;
        // ∫ sqrt(a² + (1 + aθ)²) dθ via antiderivative of sqrt(a² + u²)/a, u = 1 + aθ
        let f = |u: f64| {
            0.5 * (u * (a * a + u * u).sqrt() + a * a * (u + (a * a + u * u).sqrt()).ln()) / a
        };
        let exact = f(1.5) - f(1.0);
        assert!((cone_metric_length(1.0, &path).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn loop_validation() {
        assert!(matches!(
            PlanarLoop::from_pairs(&[(1.0, 0.0)], true),
            Err(Error::TooFewVertices { .. })
        ));
        assert!(matches!(
            PlanarLoop::from_pairs(&[(1.0, 0.0), (0.0, 1.0)], true),
            Err(Error::InvalidRadius { index: 1, .. })
        ));
        let l: PlanarLoop = "1,0:1,2.0943951023931953:1,4.1887902047863905"
            .parse()
            .unwrap();
        assert!(l.is_closed());
        assert!((l.winding() - 1.0).abs() < 1e-12);
        assert!("1,0:x,1".parse::<PlanarLoop>().is_err());
    }

    #[test]
    fn holonomy_examples() {
        let unit = PlanarLoop::circle(1.0, 12).unwrap();
        assert!(holonomy_around_point(&t(0.0), &unit).unwrap().abs() < 1e-12);
        let h = holonomy_around_point(&t(1e-6), &unit).unwrap();
        assert!((h - 2.513274e-5).abs() < 1e-9 + 1e-11);
        let h = holonomy_around_point(&t(0.05), &unit).unwrap();
        assert!((h - 0.4 * PI).abs() < 1e-9);
    }

    #[test]
    fn holonomy_on_a_non_circular_loop() {
        // square-ish loop mixing radial and angular motion
        let path = PlanarLoop::from_pairs(
            &[
                (1.0, 0.0),
                (2.0, 0.0),
                (2.0, 2.0),
                (0.5, 2.0),
                (0.5, 4.0),
                (1.0, 4.0),
            ],
            true,
        )
        .unwrap();
        let g = 0.03;
        let h = holonomy_around_point(&t(g), &path).unwrap();
        assert!((h - 8.0 * PI * g).abs() < 1e-9);
    }

    #[test]
    fn holonomy_rejects_bad_loops() {
        let open = PlanarLoop::circle(1.0, 6).unwrap().with_closed(false);
        assert_eq!(holonomy_around_point(&t(0.01), &open), Err(Error::OpenLoop));
        let contractible =
            PlanarLoop::from_pairs(&[(1.0, 0.0), (2.0, 0.0), (2.0, 1.0)], true).unwrap();
        assert_eq!(
            holonomy_around_point(&t(0.01), &contractible),
            Err(Error::ZeroWinding)
        );
    }
}
