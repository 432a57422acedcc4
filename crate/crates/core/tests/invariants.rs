use atoral_lab::arith::{e, euler_phi, gcd_u};
use atoral_lab::equidist::{discrepancy, PointSet};
use atoral_lab::galois::{
    delta_point, delta_point_brute, enumerate_characters, char_conductor, gauss_sum,
    orbit_average_log, GaloisSubgroup, TorsionPoint,
};
use atoral_lab::lattice::{factor_torsion, hn_profile, lattice_of_torsion, matrix};
use atoral_lab::laurent::{parse_poly, IntPoly, LaurentPoly};
use atoral_lab::mahler::{mahler, mahler_bounds};
use atoral_lab::roots::roots_int;
use num_complex::Complex64;
use proptest::prelude::*;

fn laurent(d: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::btree_map(prop::collection::vec(-3i64..=3, d), -6i64..=6, 1..6).prop_filter_map(
        "zero polynomial",
        move |m| {
            let terms: Vec<(Vec<i64>, i64)> = m.into_iter().filter(|(_, c)| *c != 0).collect();
            let p = LaurentPoly::from_int_terms(d, &terms);
            (!p.is_zero()).then_some(p)
        },
    )
}

fn univariate() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-5i64..=5, 2..9).prop_filter_map("constant", |mut c| {
        if *c.last().unwrap() == 0 {
            *c.last_mut().unwrap() = 1;
        }
        let q = IntPoly::from_i64(&c);
        (q.degree().unwrap_or(0) >= 1).then_some(q)
    })
}

fn torsion(d: usize, max_n: u64) -> impl Strategy<Value = TorsionPoint> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(0..n as i64, d).prop_map(move |b| TorsionPoint::normalized(&b, n))
    })
}

fn unimodular2() -> impl Strategy<Value = Vec<Vec<i64>>> {
    // products of elementary matrices
    prop::collection::vec((0usize..2, -3i64..=3), 1..5).prop_map(|ops| {
        let mut v = matrix::identity(2);
        for (which, k) in ops {
            let mut t = matrix::identity(2);
            t[which][1 - which] = k;
            v = matrix::matmul(&v, &t);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_round_trip(p in laurent(3)) {
        let q = parse_poly(&p.to_string(), 3).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn evaluation_is_multiplicative(p in laurent(2), q in laurent(2), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let z = [e(x), e(y)];
        let lhs = p.mul(&q).evaluate(&z).unwrap();
        let rhs = p.evaluate(&z).unwrap() * q.evaluate(&z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn change_of_coordinates_preserves_modulus(p in laurent(2), v in unimodular2(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let q = p.change_coordinates(&v).unwrap();
        let angles = [x, y];
        // z^V in the row-vector convention
        let w: Vec<Complex64> = (0..2)
            .map(|j| e((0..2).map(|i| angles[i] * v[i][j] as f64).sum::<f64>()))
            .collect();
        let pz = p.evaluate(&[e(x), e(y)]).unwrap().norm();
        let qw = q.evaluate(&w).unwrap().norm();
        prop_assert!((pz - qw).abs() <= 1e-8 * (1.0 + pz));
    }

    #[test]
    fn mahler_is_additive(p in univariate(), q in univariate()) {
        let lp = LaurentPoly::from_int_poly(&p);
        let lq = LaurentPoly::from_int_poly(&q);
        let mp = mahler(&lp).unwrap().value;
        let mq = mahler(&lq).unwrap().value;
        let mpq = mahler(&lp.mul(&lq)).unwrap().value;
        prop_assert!((mpq - mp - mq).abs() <= 1e-8);
    }

    #[test]
    fn mahler_within_coefficient_bounds(p in laurent(2)) {
        let (lo, hi) = mahler_bounds(&p).unwrap();
        let m = mahler(&p).unwrap().value;
        prop_assert!(lo - 1e-8 <= m && m <= hi + 1e-8, "{lo} <= {m} <= {hi}");
    }

    #[test]
    fn mahler_ignores_monomial_shift(p in laurent(2), s in prop::collection::vec(-4i64..=4, 2)) {
        let a = mahler(&p).unwrap().value;
        let b = mahler(&p.shift(&s)).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-8);
    }

    #[test]
    fn roots_rebuild_the_polynomial(q in univariate()) {
        let rs = roots_int(&q).unwrap().values();
        let lead = q.coeffs().last().unwrap().to_string().parse::<f64>().unwrap();
        for x in [0.3, -1.1, 0.7] {
            let z = Complex64::new(x, 0.5);
            let direct = q.eval_complex(z);
            let product = rs.iter().fold(Complex64::new(lead, 0.0), |acc, r| acc * (z - r));
            prop_assert!((direct - product).norm() <= 1e-6 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn delta_matches_box_search(z in torsion(2, 200)) {
        prop_assert_eq!(Some(delta_point(&z)), delta_point_brute(&z, 200));
    }

    #[test]
    fn hn_slopes_increase_and_sum_to_log_det(z in torsion(3, 300)) {
        let p = hn_profile(&lattice_of_torsion(&z)).unwrap();
        prop_assert!(p.verify_exact().is_ok());
        prop_assert!(p.slopes.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        prop_assert!((p.slope_sum() - (z.order() as f64).ln()).abs() <= 1e-9);
    }

    #[test]
    fn factorisation_postconditions(z in torsion(2, 3000), quarter in any::<bool>()) {
        let nu = if quarter { 0.25 } else { 0.125 };
        let f = factor_torsion(&z, nu, None).unwrap();
        prop_assert_eq!(f.eta.mul(&f.xi), z.clone());
        prop_assert!(f.check(&z, nu).is_ok());
    }

    #[test]
    fn orbit_average_is_galois_invariant(p in laurent(2), z in torsion(2, 60), s in 1u64..60) {
        let n = z.order();
        prop_assume!(gcd_u(s, n) == 1);
        let g = GaloisSubgroup::full(n);
        let a = orbit_average_log(&p, &z, &g).unwrap();
        let b = orbit_average_log(&p, &z.act(s % n), &g).unwrap();
        prop_assert_eq!(a.zeros.len(), b.zeros.len());
        if a.count > 0 {
            prop_assert!((a.mean - b.mean).abs() <= 1e-9);
        }
    }

    #[test]
    fn conductor_divides_and_bounds_index(n in 1u64..=40, gens in prop::collection::vec(1u64..40, 0..3)) {
        let gens: Vec<u64> = gens.into_iter().map(|g| g % n).filter(|&g| gcd_u(g, n) == 1).collect();
        let g = GaloisSubgroup::new(n, &gens).unwrap();
        let f = g.conductor();
        prop_assert_eq!(n % f, 0);
        prop_assert!(g.index() <= euler_phi(f));
    }

    #[test]
    fn discrepancy_is_between_one_over_n_and_one(xs in prop::collection::vec(0.0f64..1.0, 1..40)) {
        let n = xs.len() as f64;
        let ps = PointSet::new(1, xs.iter().map(|&x| vec![x]).collect()).unwrap();
        let d = discrepancy(&ps).unwrap();
        prop_assert!(1.0 / n - 1e-12 <= d && d <= 1.0 + 1e-12);
        let mut rev = xs.clone();
        rev.reverse();
        let d2 = discrepancy(&PointSet::new(1, rev.into_iter().map(|x| vec![x]).collect()).unwrap()).unwrap();
        prop_assert!((d - d2).abs() <= 1e-15);
    }

    #[test]
    fn discrepancy_2d_ignores_axis_swap(pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..30)) {
        let a = PointSet::new(2, pts.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap();
        let b = PointSet::new(2, pts.iter().map(|&(x, y)| vec![y, x]).collect()).unwrap();
        prop_assert!((discrepancy(&a).unwrap() - discrepancy(&b).unwrap()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn primitive_gauss_sums_have_modulus_sqrt_n(n in 3u64..=60) {
        for chi in enumerate_characters(n) {
            if char_conductor(&chi) == n {
                let t = gauss_sum(&chi, 1).norm();
                prop_assert!((t * t - n as f64).abs() <= 1e-8 * n as f64);
            }
        }
    }
}
