use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use conefold::cone_geometry::{
    admissible_genus, cone_point_from_tension, deficit_from_tension, gauss_bonnet_residual,
    tension_from_deficit, FlatConeSurface, StringTension,
};
use conefold::flat_structure::{
    holonomy_around_point, natural_coordinate_closed_form, natural_coordinate_quadrature,
    PlanarLoop,
};
use conefold::observational::{nearest_even_integer, verdict_for_tensions, GenusVerdict};

fn tensions(gs: &[f64]) -> Vec<StringTension> {
    gs.iter()
        .map(|&g| StringTension::new(g, "p").unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tension_deficit_round_trip(g in 0.0f64..0.2) {
        let t = StringTension::new(g, "p").unwrap();
        let back = tension_from_deficit(deficit_from_tension(&t).unwrap()).unwrap();
        prop_assert!((back.g_mu() - g).abs() <= 1e-15);
    }

    #[test]
    fn cone_angle_plus_deficit_is_full_turn(g in 0.0f64..0.25) {
        let p = cone_point_from_tension(&StringTension::new(g, "p").unwrap()).unwrap();
        prop_assert!((p.cone_angle_theta + p.deficit_delta - 2.0 * PI).abs() <= 1e-14);
    }

    #[test]
    fn residual_ignores_point_order(genus in 0u32..6, gs in prop::collection::vec(0.0f64..0.24, 0..12)) {
        let ts = tensions(&gs);
        let mut rev = ts.clone();
        rev.reverse();
        let a = gauss_bonnet_residual(&FlatConeSurface::from_tensions(genus, &ts).unwrap()).unwrap();
        let b = gauss_bonnet_residual(&FlatConeSurface::from_tensions(genus, &rev).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn residual_decreases_with_added_tension(genus in 0u32..6, gs in prop::collection::vec(0.0f64..0.2, 0..8), extra in 1e-9f64..0.2) {
        let ts = tensions(&gs);
        let mut more = ts.clone();
        more.push(StringTension::new(extra, "extra").unwrap());
        let a = gauss_bonnet_residual(&FlatConeSurface::from_tensions(genus, &ts).unwrap()).unwrap();
        let b = gauss_bonnet_residual(&FlatConeSurface::from_tensions(genus, &more).unwrap()).unwrap();
        prop_assert!(b < a);
        prop_assert!((a - b - 8.0 * PI * extra).abs() <= 1e-12);
    }

    #[test]
    fn small_networks_are_tori(gs in prop::collection::vec(0.0f64..1e-3, 1..10)) {
        prop_assume!(gs.iter().sum::<f64>() <= 1e-2);
        let r = verdict_for_tensions("p", &tensions(&gs));
        prop_assert_eq!(r.nearest_even_integer, Some(0));
        prop_assert_eq!(r.genus_verdict, GenusVerdict::Genus(1));
        prop_assert!(admissible_genus(&tensions(&gs), 8.0 * PI * 1e-2).unwrap().contains(&1));
    }

    #[test]
    fn nearest_even_is_even_and_close(chi in -50.0f64..50.0) {
        if let Some(e) = nearest_even_integer(chi) {
            prop_assert_eq!(e % 2, 0);
            prop_assert!((chi - e as f64).abs() <= 1.0);
        }
    }

    #[test]
    fn holonomy_is_scale_invariant(g in 1e-7f64..0.05, scale in 0.1f64..10.0) {
        let t = StringTension::new(g, "p").unwrap();
        let unit = PlanarLoop::circle(1.0, 24).unwrap();
        let a = holonomy_around_point(&t, &unit).unwrap();
        let b = holonomy_around_point(&t, &unit.scaled(scale).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn holonomy_adds_over_repeated_loops(g in 1e-6f64..0.05, k in 1usize..4) {
        let t = StringTension::new(g, "p").unwrap();
        let once = PlanarLoop::from_pairs(&[(1.0, 0.0), (1.5, 2.0), (0.7, 4.0)], true).unwrap();
        let h1 = holonomy_around_point(&t, &once).unwrap();
        let hk = holonomy_around_point(&t, &once.repeated(k)).unwrap();
        prop_assert!((hk - k as f64 * h1).abs() <= 3e-9);
        prop_assert!((h1 - 8.0 * PI * g).abs() <= 1e-9);
    }

    #[test]
    fn quadrature_improves_with_samples(n in -1.5f64..3.0, modulus in 0.2f64..4.0, arg in -3.0f64..3.0) {
        let z = Complex64::from_polar(modulus, arg);
        let exact = natural_coordinate_closed_form(n, z).unwrap();
        let err = |s: usize| (natural_coordinate_quadrature(n, z, s).unwrap() - exact).norm() / exact.norm();
        let (coarse, fine) = (err(64), err(4096));
        prop_assert!(fine <= coarse + 1e-14, "coarse {coarse:e} fine {fine:e}");
    }
}
