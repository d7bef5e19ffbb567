//! Randomized properties of the maps, coordinates and invariants. Inputs
//! are drawn from seeds so each case is an exact rational instance.

use pentagram_core::coords::{explicit_step, xyz_geometric, Xyz3};
use pentagram_core::io::{polygon_from_str, polygon_to_string};
use pentagram_core::lax::{scaling_invariance_defect, verify_lax};
use pentagram_core::maps::{duality_defect, general_map, same_polygon, MapParams};
use pentagram_core::projective::TwistedPolygon;
use pentagram_core::random::{random_coeffs, random_sl, random_twisted_polygon, random_xyz, seeded};
use pentagram_core::spectral::{extract_integrals, integrals_xyz_f64, spectral_function_xyz_unscaled};
use pentagram_core::{Rational, Scalar};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 16, ..ProptestConfig::default() }
}

fn unscaled_integrals(xyz: &Xyz3<Rational>) -> Vec<Rational> {
    let mut v = extract_integrals(&spectral_function_xyz_unscaled(xyz).unwrap()).unwrap().flatten();
    v.push(xyz.weight_product());
    v
}

fn to_float(xyz: &Xyz3<Rational>) -> Xyz3<f64> {
    let f = |v: &[Rational]| v.iter().map(Scalar::to_f64).collect();
    Xyz3 { x: f(&xyz.x), y: f(&xyz.y), z: f(&xyz.z) }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn lax_equation_is_exact(seed in any::<u64>(), n in 5usize..9) {
        let xyz = random_xyz::<Rational>(n, &mut seeded(seed));
        // Small random coordinates occasionally hit a singular step.
        if let Ok(defect) = verify_lax(&xyz) {
            prop_assert!(defect.is_zero());
        }
    }

    #[test]
    fn explicit_step_commutes_with_relabelling(seed in any::<u64>(), n in 5usize..9, shift in -4i64..4) {
        let xyz = random_xyz::<Rational>(n, &mut seeded(seed));
        if let Ok(next) = explicit_step(&xyz) {
            prop_assert_eq!(explicit_step(&xyz.shifted(shift)).unwrap(), next.shifted(shift));
        }
    }

    #[test]
    fn one_step_conserves_integrals(seed in any::<u64>(), n in 5usize..8) {
        let xyz = random_xyz::<Rational>(n, &mut seeded(seed));
        if let Ok(next) = explicit_step(&xyz) {
            prop_assert_eq!(unscaled_integrals(&xyz), unscaled_integrals(&next));
        }
    }

    #[test]
    fn integrals_ignore_the_base_point(seed in any::<u64>(), n in 5usize..8, shift in 1i64..5) {
        let xyz = random_xyz::<Rational>(n, &mut seeded(seed));
        prop_assert_eq!(unscaled_integrals(&xyz), unscaled_integrals(&xyz.shifted(shift)));
    }

    #[test]
    fn float_orbit_tracks_exact_orbit(seed in any::<u64>()) {
        let exact = xyz_geometric(&random_twisted_polygon::<Rational>(3, 7, &mut seeded(seed))).unwrap();
        let (mut e, mut f) = (exact.clone(), to_float(&exact));
        for _ in 0..3 {
            e = explicit_step(&e).unwrap();
            f = explicit_step(&f).unwrap();
        }
        let ef = to_float(&e);
        for (a, b) in ef.x.iter().chain(&ef.y).chain(&ef.z).zip(f.x.iter().chain(&f.y).chain(&f.z)) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "{a} vs {b}");
        }
        let (ie, i_f) = (integrals_xyz_f64(&ef).unwrap(), integrals_xyz_f64(&f).unwrap());
        for (a, b) in ie.flatten().iter().zip(i_f.flatten()) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn maps_commute_with_projective_transformations(seed in any::<u64>(), d in 2usize..5, p in 1usize..3, r in 1usize..3) {
        let mut rng = seeded(seed);
        let poly = random_twisted_polygon::<Rational>(d, 2 * d + 3, &mut rng);
        let g = random_sl::<Rational>(d + 1, &mut rng);
        let params = MapParams::new(p, r);
        if let (Ok(a), Ok(moved)) = (general_map(&poly, params), poly.transform(&g)) {
            let b = general_map(&moved, params).unwrap();
            prop_assert!(same_polygon(&a.transform(&g).unwrap(), &b));
        }
    }

    #[test]
    fn duality_holds_exactly(seed in any::<u64>(), d in 2usize..4, p in 1usize..4, r in 1usize..3) {
        let poly = random_twisted_polygon::<Rational>(d, 8, &mut seeded(seed));
        if let Ok((defect, _)) = duality_defect(&poly, p, r) {
            prop_assert!(defect.is_zero());
        }
    }

    #[test]
    fn scaling_is_a_symmetry(seed in any::<u64>(), d in 2usize..5, num in 1i64..7, den in 1i64..5) {
        let c = random_coeffs::<Rational>(d, 7, &mut seeded(seed));
        if let Ok(defect) = scaling_invariance_defect(&c, &Rational::from_ratio(num, den)) {
            prop_assert!(defect.is_zero());
        }
    }

    #[test]
    fn polygon_json_round_trips(seed in any::<u64>(), d in 1usize..5, n in 3usize..9) {
        let poly = random_twisted_polygon::<Rational>(d, n.max(d + 2), &mut seeded(seed));
        let text = polygon_to_string(&poly);
        let back: TwistedPolygon<Rational> = polygon_from_str(&text).unwrap();
        prop_assert_eq!(polygon_to_string(&back), text);
        prop_assert!(same_polygon(&poly, &back));
    }
}
