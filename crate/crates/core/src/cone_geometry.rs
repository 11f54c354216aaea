//! Tension/angle conversions, the flat cone surface model and the
//! Gauss-Bonnet admissibility checks.
//!
//! A straight string of tension Gμ cuts a wedge of angle Δ = 8πGμ out of the
//! transverse plane. The same number shows up under several names:
//!
//! | view              | value            |
//! |-------------------|------------------|
//! | deficit Δ         | 8πGμ             |
//! | cone angle θ      | 2π(1 − 4Gμ)      |
//! | order parameter β | −4Gμ             |
//! | differential order n | see [`OrderConvention`] |
//!
//! A closed connected surface of genus g carrying cone points θᵢ admits a flat
//! metric exactly when 2πχ + Σ(θᵢ − 2π) = 0 with χ = 2 − 2g.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flat_structure::{order_from_tension, OrderConvention};

const TWO_PI: f64 = 2.0 * PI;
const EIGHT_PI: f64 = 8.0 * PI;

/// Absolute tolerance for checking a surface built from exact cone data.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance for inferring genus from observational tension sums.
pub const INFERENCE_TOLERANCE: f64 = 1e-3;

/// Largest genus scanned by [`admissible_genus`].
pub const GENUS_SEARCH_CAP: u32 = 64;

/// Dimensionless string tension Gμ with a provenance label.
///
/// Three constructors cover the three admissible ranges:
/// [`new`](Self::new) for physical strings (0 ≤ Gμ < 1/4),
/// [`signed`](Self::signed) for counterfactual negative deficits, and
/// [`hypothetical`](Self::hypothetical) for values only used in tension sums
/// (e.g. an unphysical GUT estimate), which cone-angle operations reject.
#[derive(Debug, Clone, PartialEq)]
pub struct StringTension {
    g_mu: f64,
    label: String,
}

impl StringTension {
    pub fn new(g_mu: f64, label: impl Into<String>) -> Result<Self> {
        let t = Self::signed(g_mu, label)?;
        if g_mu < 0.0 {
            return Err(Error::NegativeTension(g_mu));
        }
        Ok(t)
    }

    pub fn signed(g_mu: f64, label: impl Into<String>) -> Result<Self> {
        let t = Self::hypothetical(g_mu, label)?;
        if g_mu >= 0.25 {
            return Err(Error::ConeAngleNonPositive(g_mu));
        }
        Ok(t)
    }

    pub fn hypothetical(g_mu: f64, label: impl Into<String>) -> Result<Self> {
        if !g_mu.is_finite() {
            return Err(Error::NonFiniteTension(g_mu));
        }
        Ok(Self {
            g_mu,
            label: label.into(),
        })
    }

    #[inline]
    pub fn g_mu(&self) -> f64 {
        self.g_mu
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True when the tension describes a real cone: 0 ≤ Gμ < 1/4.
    pub fn is_physical(&self) -> bool {
        (0.0..0.25).contains(&self.g_mu)
    }

    fn check_cone(&self) -> Result<()> {
        if self.g_mu >= 0.25 {
            Err(Error::ConeAngleNonPositive(self.g_mu))
        } else {
            Ok(())
        }
    }
}

/// One cone singularity, stored in all of its equivalent parametrisations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicalPoint {
    pub tension: StringTension,
    pub deficit_delta: f64,
    pub cone_angle_theta: f64,
    pub beta: f64,
    pub order_n: f64,
    pub order_convention: OrderConvention,
}

impl ConicalPoint {
    /// θ − 2π, the (non-positive for physical strings) angle excess.
    pub fn angle_excess(&self) -> f64 {
        -self.deficit_delta
    }
}

/// Δ = 8πGμ.
pub fn deficit_from_tension(t: &StringTension) -> Result<f64> {
    t.check_cone()?;
    Ok(EIGHT_PI * t.g_mu)
}

/// Inverse of [`deficit_from_tension`]. Negative deficits give a signed tension.
pub fn tension_from_deficit(delta: f64) -> Result<StringTension> {
    if !delta.is_finite() {
        return Err(Error::NonFiniteTension(delta));
    }
    if delta >= TWO_PI {
        return Err(Error::DeficitTooLarge(delta));
    }
    StringTension::signed(delta / EIGHT_PI, format!("deficit {delta}"))
}

/// Cone point with the default (self-consistent) differential order.
pub fn cone_point_from_tension(t: &StringTension) -> Result<ConicalPoint> {
    cone_point_with_convention(t, OrderConvention::default())
}

pub fn cone_point_with_convention(
    t: &StringTension,
    convention: OrderConvention,
) -> Result<ConicalPoint> {
    let deficit_delta = deficit_from_tension(t)?;
    let beta = -4.0 * t.g_mu;
    Ok(ConicalPoint {
        tension: t.clone(),
        deficit_delta,
        cone_angle_theta: TWO_PI * (beta + 1.0),
        beta,
        order_n: order_from_tension(t, convention),
        order_convention: convention,
    })
}

/// A closed orientable surface with a flat metric away from a finite set of
/// cone points.
///
/// The curvature is carried entirely by the point list: each point supports a
/// delta of integrated scalar curvature −4πβᵢ and the surface is flat elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatConeSurface {
    genus: u32,
    points: Vec<ConicalPoint>,
    connected: bool,
    allow_negative_deficits: bool,
}

impl FlatConeSurface {
    /// Connected surface under the default policy (no negative deficits).
    pub fn new(genus: u32, points: Vec<ConicalPoint>) -> Result<Self> {
        Self::with_policy(genus, points, false)
    }

    pub fn with_policy(
        genus: u32,
        points: Vec<ConicalPoint>,
        allow_negative_deficits: bool,
    ) -> Result<Self> {
        if !allow_negative_deficits {
            if let Some(p) = points.iter().find(|p| p.tension.g_mu < 0.0) {
                return Err(Error::NegativeTension(p.tension.g_mu));
            }
        }
        Ok(Self {
            genus,
            points,
            connected: true,
            allow_negative_deficits,
        })
    }

    pub fn from_tensions(genus: u32, tensions: &[StringTension]) -> Result<Self> {
        let points = tensions
            .iter()
            .map(cone_point_from_tension)
            .collect::<Result<Vec<_>>>()?;
        Self::new(genus, points)
    }

    /// Marks the surface as a disjoint union. Such a surface is rejected by the
    /// residual check until it is split into components.
    pub fn with_connected(mut self, connected: bool) -> Self {
        self.connected = connected;
        self
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn points(&self) -> &[ConicalPoint] {
        &self.points
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn allows_negative_deficits(&self) -> bool {
        self.allow_negative_deficits
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self.genus)
    }

    /// Weights of the delta-supported scalar curvature, one per point.
    pub fn curvature_weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| -4.0 * PI * p.beta)
    }

    /// ∫R over the surface: the flat background contributes nothing.
    pub fn integrated_scalar_curvature(&self) -> f64 {
        self.curvature_weights().sum()
    }

    pub fn is_admissible(&self, tolerance: f64) -> Result<bool> {
        check_tolerance(tolerance)?;
        Ok(gauss_bonnet_residual(self)?.abs() <= tolerance)
    }
}

pub fn euler_characteristic(genus: u32) -> i64 {
    2 - 2 * i64::from(genus)
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance > 0.0 && tolerance.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tolerance))
    }
}

// θᵢ − 2π is summed as −Δᵢ: subtracting 2π from a stored θ ≈ 2π would throw
// away most of the significant digits of a small deficit.
fn residual_for(genus: u32, total_deficit: f64) -> f64 {
    TWO_PI * euler_characteristic(genus) as f64 - total_deficit
}

/// 2πχ + Σ(θᵢ − 2π). Zero for an admissible flat cone surface.
pub fn gauss_bonnet_residual(s: &FlatConeSurface) -> Result<f64> {
    if !s.connected {
        return Err(Error::DisconnectedSurface);
    }
    let total: f64 = s.points.iter().map(|p| p.deficit_delta).sum();
    Ok(residual_for(s.genus, total))
}

/// All genera whose Gauss-Bonnet residual with these cone points is within
/// `tolerance`, under the default (non-negative) tension policy.
pub fn admissible_genus(tensions: &[StringTension], tolerance: f64) -> Result<BTreeSet<u32>> {
    admissible_genus_with_policy(tensions, tolerance, false)
}

pub fn admissible_genus_with_policy(
    tensions: &[StringTension],
    tolerance: f64,
    allow_negative_deficits: bool,
) -> Result<BTreeSet<u32>> {
    check_tolerance(tolerance)?;
    let mut total = 0.0;
    for t in tensions {
        if t.g_mu < 0.0 && !allow_negative_deficits {
            return Err(Error::NegativeTension(t.g_mu));
        }
        total += deficit_from_tension(t)?;
    }
    let mut found = BTreeSet::new();
    for genus in 0..=GENUS_SEARCH_CAP {
        let r = residual_for(genus, total);
        if r.abs() <= tolerance {
            found.insert(genus);
        }
        // residual drops by 4π per genus step
        if r < -tolerance {
            break;
        }
    }
    Ok(found)
}

/// Which relation between tension sums and χ to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChiConvention {
    /// χ = 4ΣGμ, the value Gauss-Bonnet forces with θᵢ − 2π = −8πGμᵢ.
    Derived,
    /// χ = 8πΣGμ, the relation as it is usually quoted.
    Paper,
}

impl ChiConvention {
    pub fn name(self) -> &'static str {
        match self {
            ChiConvention::Derived => "derived",
            ChiConvention::Paper => "paper",
        }
    }
}

pub fn chi_from_tensions(tensions: &[StringTension], convention: ChiConvention) -> f64 {
    let sum: f64 = tensions.iter().map(StringTension::g_mu).sum();
    match convention {
        ChiConvention::Derived => 4.0 * sum,
        ChiConvention::Paper => EIGHT_PI * sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(g: f64) -> StringTension {
        StringTension::new(g, "test").unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn deficit_examples() {
        assert_eq!(deficit_from_tension(&t(0.0)).unwrap(), 0.0);
        let d = deficit_from_tension(&t(1e-6)).unwrap();
        assert!(rel(d, 2.513274e-5) < 1e-6);
        let d = deficit_from_tension(&t(3.2e-7)).unwrap();
        assert!(rel(d, 8.042477e-6) < 1e-6);
    }

    #[test]
    fn tension_range_is_enforced() {
        assert!(matches!(
            StringTension::new(0.25, "x"),
            Err(Error::ConeAngleNonPositive(_))
        ));
        assert!(matches!(
            StringTension::new(-1e-6, "x"),
            Err(Error::NegativeTension(_))
        ));
        assert!(StringTension::signed(-1e-6, "x").is_ok());
        assert!(matches!(
            StringTension::new(f64::NAN, "x"),
            Err(Error::NonFiniteTension(_))
        ));
        let huge = StringTension::hypothetical(0.3, "x").unwrap();
        assert!(!huge.is_physical());
        assert!(matches!(
            deficit_from_tension(&huge),
            Err(Error::ConeAngleNonPositive(_))
        ));
    }

    #[test]
    fn cone_point_views() {
        let p = cone_point_from_tension(&t(0.0)).unwrap();
        assert_eq!(
            (p.deficit_delta, p.cone_angle_theta, p.beta),
            (0.0, TWO_PI, 0.0)
        );
        let p = cone_point_from_tension(&t(1e-6)).unwrap();
        assert_eq!(p.beta, -4e-6);
        let p = cone_point_from_tension(&t(1.0 / 16.0)).unwrap();
        assert_eq!(p.cone_angle_theta, 1.5 * PI);
        assert_eq!(p.order_convention, OrderConvention::SelfConsistent);
        assert_eq!(p.order_n, -0.5);
    }

    #[test]
    fn tension_from_deficit_examples() {
        assert_eq!(tension_from_deficit(0.0).unwrap().g_mu(), 0.0);
        assert!(rel(tension_from_deficit(2.513274e-5).unwrap().g_mu(), 1e-6) < 1e-6);
        assert_eq!(tension_from_deficit(PI).unwrap().g_mu(), 0.125);
        assert!(matches!(
            tension_from_deficit(TWO_PI),
            Err(Error::DeficitTooLarge(_))
        ));
    }

    #[test]
    fn residual_examples() {
        let torus = FlatConeSurface::new(1, vec![]).unwrap();
        assert_eq!(gauss_bonnet_residual(&torus).unwrap(), 0.0);
        let sphere = FlatConeSurface::new(0, vec![]).unwrap();
        assert_eq!(gauss_bonnet_residual(&sphere).unwrap(), 4.0 * PI);

        // independent oracle: sum θᵢ − 2π directly from the cone angle formula
        let tensions = vec![t(1.7e-7); 10];
        let oracle: f64 = tensions
            .iter()
            .map(|x| TWO_PI * (1.0 - 4.0 * x.g_mu()) - TWO_PI)
            .sum();
        let s = FlatConeSurface::from_tensions(1, &tensions).unwrap();
        let r = gauss_bonnet_residual(&s).unwrap();
        assert!((r - oracle).abs() < 1e-14);
        assert!(rel(r, -4.272566e-5) < 1e-6);
    }

    #[test]
    fn disconnected_surface_is_rejected() {
        let s = FlatConeSurface::new(1, vec![])
            .unwrap()
            .with_connected(false);
        assert_eq!(gauss_bonnet_residual(&s), Err(Error::DisconnectedSurface));
    }

    #[test]
    fn negative_points_need_the_policy_flag() {
        let p = cone_point_from_tension(&StringTension::signed(-0.01, "neg").unwrap()).unwrap();
        assert!(FlatConeSurface::new(2, vec![p.clone()]).is_err());
        let s = FlatConeSurface::with_policy(2, vec![p], true).unwrap();
        assert!(s.allows_negative_deficits());
    }

    #[test]
    fn curvature_bookkeeping_matches_gauss_bonnet() {
        // genus 0 with four π deficits: the pillowcase
        let pts = (0..4)
            .map(|_| cone_point_from_tension(&t(0.125)).unwrap())
            .collect();
        let s = FlatConeSurface::new(0, pts).unwrap();
        assert!(s.is_admissible(CHECK_TOLERANCE).unwrap());
        // ∫R = 4πχ for an admissible surface
        assert!((s.integrated_scalar_curvature() - 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn admissible_genus_examples() {
        let empty: Vec<StringTension> = vec![];
        assert_eq!(admissible_genus(&empty, 1e-6).unwrap(), BTreeSet::from([1]));
        assert_eq!(
            admissible_genus(&vec![t(1.7e-7); 10], 1e-3).unwrap(),
            BTreeSet::from([1])
        );
        assert!(admissible_genus(&[t(0.125)], 1e-6).unwrap().is_empty());
        assert!(matches!(
            admissible_genus(&empty, 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn admissible_genus_agrees_with_exhaustive_scan() {
        let cases: Vec<Vec<f64>> = vec![
            vec![],
            vec![0.125; 4],
            vec![0.2, 0.2, 0.1],
            vec![1e-3; 7],
            vec![0.249, 0.249, 0.249, 0.249, 0.004],
        ];
        for gmus in cases {
            let ts: Vec<_> = gmus.iter().map(|&g| t(g)).collect();
            for tol in [1e-9, 1e-3, 1.0] {
                let mut brute = BTreeSet::new();
                for g in 0..=GENUS_SEARCH_CAP {
                    let s = FlatConeSurface::from_tensions(g, &ts).unwrap();
                    if gauss_bonnet_residual(&s).unwrap().abs() <= tol {
                        brute.insert(g);
                    }
                }
                assert_eq!(admissible_genus(&ts, tol).unwrap(), brute, "{gmus:?} {tol}");
            }
        }
    }

    #[test]
    fn chi_conventions() {
        let ts = vec![t(1.7e-7); 10];
        assert!(rel(chi_from_tensions(&ts, ChiConvention::Derived), 6.8e-6) < 1e-12);
        assert!(rel(chi_from_tensions(&ts, ChiConvention::Paper), 4.272566e-5) < 1e-6);
        let zeros = vec![t(0.0); 3];
        assert_eq!(chi_from_tensions(&zeros, ChiConvention::Derived), 0.0);
        assert_eq!(chi_from_tensions(&zeros, ChiConvention::Paper), 0.0);
    }
}
