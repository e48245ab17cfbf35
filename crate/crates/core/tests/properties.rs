use proptest::prelude::*;

use logbb_core::algebra::{parse_poly, Ambient, MPoly, Monomial, MonomialOrder, TruncSeries};
use logbb_core::chern::{foliation_tangent_pn, total_chern_log_pn, virtual_phi, CohomologyRing, TotalClass};
use logbb_core::foliation::VectorField;
use logbb_core::ideals::{Budget, GroebnerData, Ideal, IdealError, LocalOptions};
use logbb_core::residues::{groth_residue, PhiSpec, ResidueOptions};
use logbb_core::surfaces::{cs_smooth, gsv_smooth, SmoothBranch};
use logbb_core::{q, Poly, Rational};

fn ambient(n: usize) -> Ambient {
    Ambient::new(&["x", "y", "z"][..n])
}

fn rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

fn poly(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), rat()), 0..=max_terms).prop_map(move |terms| {
        MPoly::from_terms(&ambient(n), terms.into_iter().map(|(e, c)| (Monomial::from_exps(&e), c)))
    })
}

fn field(n: usize, max_deg: u32) -> impl Strategy<Value = VectorField<Rational>> {
    prop::collection::vec(poly(n, max_deg, 3), n).prop_map(move |c| VectorField::new(&ambient(n), c).unwrap())
}

fn sum_fields(fs: &[VectorField<Rational>]) -> VectorField<Rational> {
    let a = fs[0].ambient().clone();
    let ones = vec![MPoly::one(&a); fs.len()];
    VectorField::linear_combination(&a, &ones, fs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in poly(3, 3, 4), b in poly(3, 3, 4), c in poly(3, 3, 4)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &MPoly::one(a.ambient()), a);
    }

    #[test]
    fn leibniz_rule(a in poly(3, 3, 4), b in poly(3, 3, 4), i in 0usize..3) {
        prop_assert_eq!((&a * &b).d(i), &(&a.d(i) * &b) + &(&a * &b.d(i)));
    }

    #[test]
    fn parse_inverts_print(a in poly(3, 4, 5)) {
        let back: Poly = parse_poly(&a.to_string(), a.ambient()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn series_inverse(mut a in poly(2, 3, 4), c in rat(), t in 1u32..6) {
        prop_assume!(c != q(0));
        let amb = a.ambient().clone();
        a = &(&a - &MPoly::constant(&amb, a.constant_term())) + &MPoly::constant(&amb, c);
        let s = TruncSeries::from_poly(&a, t);
        let prod = s.mul(&s.inverse().unwrap());
        prop_assert_eq!(prod, TruncSeries::one(&amb, t));
    }

    #[test]
    fn jacobi_identity(x in field(2, 2), y in field(2, 2), z in field(2, 2)) {
        let br = |a: &VectorField<Rational>, b: &VectorField<Rational>| a.lie_bracket(b).unwrap();
        let total = sum_fields(&[br(&x, &br(&y, &z)), br(&y, &br(&z, &x)), br(&z, &br(&x, &y))]);
        prop_assert!(total.is_zero());
    }

    #[test]
    fn rescaling_preserves_surface_indices(a in poly(2, 2, 3), l in rat(), m in rat(), c in rat()) {
        prop_assume!(l != q(0) && m != q(0) && c != q(0));
        let amb = ambient(2);
        let z = MPoly::var(&amb, 0);
        let w = MPoly::var(&amb, 1);
        let v = VectorField::new(&amb, vec![&z * &(&a + &MPoly::constant(&amb, l)), &w.scale(&m) + &(&w * &w)]).unwrap();
        let origin = [q(0), q(0)];
        let b1 = SmoothBranch::new(&v, 0, &origin).unwrap();
        let b2 = SmoothBranch::new(&v.scale(&c), 0, &origin).unwrap();
        prop_assert_eq!(gsv_smooth(&b1), gsv_smooth(&b2));
        prop_assert_eq!(cs_smooth(&b1).unwrap(), cs_smooth(&b2).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cofactors_reconstruct_the_basis(gens in prop::collection::vec(poly(2, 2, 3), 1..4)) {
        let amb = ambient(2);
        let gb = match GroebnerData::compute(&amb, &gens, MonomialOrder::Grevlex, true, Budget { max_reductions: 20_000 }) {
            Ok(g) => g,
            Err(IdealError::BudgetExceeded { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for (g, row) in gb.basis().iter().zip(gb.cofactors().unwrap()) {
            let combo = row.iter().zip(&gens).fold(MPoly::zero(&amb), |acc, (c, f)| &acc + &(c * f));
            prop_assert_eq!(&combo, g);
        }
        for f in &gens {
            prop_assert!(gb.reduce(f).unwrap().0.is_zero());
        }
    }

    #[test]
    fn saturation_contains_and_is_idempotent(f in poly(2, 2, 3), g in poly(2, 2, 3), s in poly(2, 1, 2)) {
        prop_assume!(!s.is_zero());
        let amb = ambient(2);
        let x = MPoly::var(&amb, 0);
        let i = Ideal::new(&amb, vec![&x * &f, &x * &g]);
        let Ok(sat) = i.saturate(&s) else { return Ok(()) };
        for h in i.generators() {
            prop_assert!(sat.contains(h).unwrap());
        }
        let Ok(again) = sat.saturate(&s) else { return Ok(()) };
        prop_assert!(again.same_as(&sat).unwrap());
    }

    #[test]
    fn local_multiplicities_add_up(
        xs in prop::collection::vec(-2i64..=2, 1..4),
        ys in prop::collection::vec(-2i64..=2, 1..4),
        shear in -2i64..=2,
    ) {
        let amb = ambient(2);
        let lin = |v: usize, r: i64| &MPoly::var(&amb, v) - &MPoly::constant(&amb, q(r));
        let px = xs.iter().fold(MPoly::one(&amb), |acc, &r| &acc * &lin(0, r));
        // y - shear*x keeps every zero rational
        let y_shift = &MPoly::var(&amb, 1) - &MPoly::var(&amb, 0).scale(&q(shear));
        let py = ys.iter().fold(MPoly::one(&amb), |acc, &r| &acc * &(&y_shift - &MPoly::constant(&amb, q(r))));
        let ideal = Ideal::new(&amb, vec![px, py]);
        let total = ideal.quotient_dim().unwrap().finite().unwrap();
        let mut xr = xs.clone();
        xr.sort();
        xr.dedup();
        let mut yr = ys.clone();
        yr.sort();
        yr.dedup();
        let mut sum = 0;
        for &a in &xr {
            for &b in &yr {
                let p = [q(a), q(b + shear * a)];
                sum += ideal.local_multiplicity(&p, LocalOptions::default()).unwrap();
            }
        }
        prop_assert_eq!(sum, total);
    }

    #[test]
    fn transformation_path_matches_fast_path(
        p in prop::collection::vec(-3i64..=3, 3),
        diag in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 3),
        c in prop::collection::vec(-2i64..=2, 3),
        h in poly(3, 2, 4),
    ) {
        // triangular, so p is the only zero
        let amb = ambient(3);
        let u: Vec<Poly> = (0..3).map(|i| &MPoly::var(&amb, i) - &MPoly::constant(&amb, q(p[i]))).collect();
        let v = VectorField::new(&amb, vec![
            u[0].scale(&q(diag[0])),
            &u[1].scale(&q(diag[1])) + &(&u[0] * &u[0]).scale(&q(c[0])),
            &(&u[2].scale(&q(diag[2])) + &(&u[0] * &u[1]).scale(&q(c[1]))) + &u[1].pow(3).scale(&q(c[2])),
        ]).unwrap();
        let pt: Vec<Rational> = p.iter().map(|&a| q(a)).collect();
        let fast = groth_residue(&h, &v, &pt, &ResidueOptions::default()).unwrap();
        let slow = groth_residue(&h, &v, &pt, &ResidueOptions { force_transformation: true, ..ResidueOptions::default() }).unwrap();
        prop_assert_eq!(fast.value, slow.value);
    }

    #[test]
    fn total_class_times_inverse_is_one(n in 1usize..5, coeffs in prop::collection::vec(-4i64..=4, 4)) {
        let ring = CohomologyRing::<Rational>::pn(n);
        let h = ring.generator("h").unwrap();
        let mut parts = vec![MPoly::one(ring.ambient())];
        for i in 1..=n {
            parts.push(h.pow(i as u32).scale(&q(coeffs[i - 1])));
        }
        let c = TotalClass::from_parts(&ring, parts).unwrap();
        prop_assert_eq!(c.mul(&c.inverse(&ring), &ring), TotalClass::one(&ring));
    }

    #[test]
    fn degree_identity_for_hyperplane_arrangements(n in 1usize..5, d in 0u32..5, k in 0usize..6) {
        prop_assume!(k <= n + 1);
        let ring = CohomologyRing::<Rational>::pn(n);
        let e = total_chern_log_pn(&ring, &vec![1; k]);
        let f = foliation_tangent_pn(&ring, d);
        let value = virtual_phi(&PhiSpec::c1_power(n), &e, &f, &ring).unwrap();
        let base = q(d as i64 + n as i64 - k as i64);
        let expected = (0..n).fold(q(1), |acc, _| acc * &base);
        prop_assert_eq!(value, expected);
    }
}
