use dqrr::fedosov::*;
use dqrr::sample::Sampler;
use dqrr::scalars::rat;
use dqrr::weyl::{moyal_mul, Monomial, WeylElement};

fn mono(e: &[u8]) -> Monomial {
    Monomial(e.to_vec())
}

fn random_form(s: &mut Sampler, shape: FedosovShape, degree: usize, max_fiber_deg: usize) -> FormalForm {
    let n = 2 * shape.d;
    let mut out = FormalForm::zero(shape, degree);
    for _ in 0..s.range(1, 4) {
        let mut dz: Vec<u8> = (0..n as u8).collect();
        while dz.len() > degree {
            let i = s.range(0, dz.len() - 1);
            dz.remove(i);
        }
        let mut base = vec![0u8; n];
        for _ in 0..s.range(0, 2) {
            base[s.range(0, n - 1)] += 1;
        }
        let w = s.weyl(shape.weyl(), max_fiber_deg, (0, 1), 3);
        out = out.plus(&FormalForm::term(shape, &dz, Monomial(base), w)).unwrap();
    }
    out
}

fn shape(d: usize, depth: usize) -> FedosovShape {
    FedosovShape::new(d, depth).unwrap()
}

#[test]
fn koszul_generator_rule() {
    let sh = shape(1, 3);
    let ws = sh.weyl();
    let one = FormalForm::fiber(sh, WeylElement::one(ws));
    assert!(koszul_delta(&one).is_zero());
    // δ(y_0 z_1) = dz_0 z_1
    let y = FormalForm::term(sh, &[], mono(&[0, 1]), WeylElement::x(ws, 0));
    let expect = FormalForm::term(sh, &[0], mono(&[0, 1]), WeylElement::one(ws));
    assert_eq!(koszul_delta(&y), expect);
    assert!(koszul_homotopy(&one).is_zero());
}

#[test]
fn koszul_square_vanishes() {
    let mut s = Sampler::new(11);
    for d in 1..=2 {
        let sh = shape(d, 4);
        for _ in 0..40 {
            let q = s.range(0, 2 * d);
            let w = random_form(&mut s, sh, q, 4);
            assert!(koszul_delta(&koszul_delta(&w)).is_zero());
            assert!(de_rham(&de_rham(&w)).is_zero());
            assert!(koszul_homotopy(&koszul_homotopy(&w)).is_zero());
        }
    }
}

#[test]
fn koszul_homotopy_identity() {
    let mut s = Sampler::new(12);
    for trial in 0..100 {
        let d = 1 + trial % 2;
        let sh = shape(d, 4);
        let q = s.range(0, 2 * d);
        let w = random_form(&mut s, sh, q, 4);
        let mut lhs = koszul_homotopy(&koszul_delta(&w));
        if q > 0 {
            lhs = lhs.plus(&koszul_delta(&koszul_homotopy(&w))).unwrap();
        }
        assert_eq!(lhs, w.minus(&harmonic_part(&w)).unwrap(), "trial {trial}");
    }
}

#[test]
fn homotopy_recovers_primitive_of_exact_input() {
    let mut s = Sampler::new(13);
    let sh = shape(2, 4);
    for _ in 0..30 {
        let q = s.range(0, 3);
        let x = random_form(&mut s, sh, q, 3);
        let exact = koszul_delta(&x);
        assert_eq!(koszul_delta(&koszul_homotopy(&exact)), exact);
    }
}

#[test]
fn de_rham_homotopy_identity() {
    let mut s = Sampler::new(14);
    let sh = shape(1, 3);
    for _ in 0..40 {
        let q = s.range(0, 2);
        let w = random_form(&mut s, sh, q, 2);
        let mut lhs = de_rham_homotopy(&de_rham(&w));
        if q > 0 {
            lhs = lhs.plus(&de_rham(&de_rham_homotopy(&w))).unwrap();
        }
        let constant = if q == 0 {
            let mut c = FormalForm::zero(sh, 0);
            for (k, f) in w.terms() {
                if k.base.is_one() {
                    c = c.plus(&FormalForm::term(sh, &[], k.base.clone(), f.clone())).unwrap();
                }
            }
            c
        } else {
            FormalForm::zero(sh, q)
        };
        assert_eq!(lhs, w.minus(&constant).unwrap());
    }
}

#[test]
fn tautological_form_acts_by_koszul_differential() {
    let mut s = Sampler::new(15);
    for d in 1..=2 {
        let sh = shape(d, 6);
        let a = tautological_form(sh);
        for _ in 0..20 {
            let sec = random_form(&mut s, sh, 0, 4);
            let lhs = graded_commutator(&a, &sec, 100).unwrap();
            assert_eq!(lhs, koszul_delta(&sec));
        }
        let curv = wedge(&a, &a, 10).unwrap();
        assert_eq!(curv, tautological_curvature(sh));
    }
}

#[test]
fn zero_target_gives_tautological_connection_and_moyal_product() {
    for (d, depth) in [(1, 6), (2, 4)] {
        let sh = shape(d, depth);
        let a = fedosov_recursion(&FormalForm::zero(sh, 2)).unwrap();
        assert!(a.higher.is_zero() && a.central_lift.is_zero() && a.a_0.is_zero());
        assert_eq!(a.lift(), tautological_form(sh));
        assert!(extract_theta(&a).unwrap().is_zero());
        let n = 2 * d;
        let mut f_mono = vec![0u8; n];
        f_mono[0] = 2;
        f_mono[n - 1] = 1;
        let mut g_mono = vec![0u8; n];
        g_mono[d] = 2;
        g_mono[0] = 1;
        let f = base_function(sh, &[(Monomial(f_mono), 0, rat(1, 1)), (mono(&vec![0; n]), 0, rat(3, 2))]);
        let g = base_function(sh, &[(Monomial(g_mono), 0, rat(-2, 1))]);
        let prod = kernel_product(&a, &f, &g).unwrap();
        let ws = sh.weyl();
        let fw = base_as_weyl(&f, ws).unwrap();
        let gw = base_as_weyl(&g, ws).unwrap();
        let moyal = moyal_mul(&fw, &gw).unwrap();
        assert!(agree_to_weight(&base_as_weyl(&prod, ws).unwrap(), &moyal, sh.limit()));
        // the t-corrections are present, so the comparison is not trivial
        assert!(!moyal.coeff(&Monomial(vec![0; n])).is_zero() || moyal.terms().iter().any(|(_, c)| c.min_t() == Some(1)));
    }
}

/// `dβ` for `β = z_0^2 z_1 dz_1`, plus constant terms in each `t` order.
fn sample_theta(sh: FedosovShape) -> FormalForm {
    let n = 2 * sh.d;
    let mut e = vec![0u8; n];
    e[0] = 2;
    e[1] = 1;
    let beta = FormalForm::scalar_term(sh, &[1], Monomial(e), 0, rat(1, 1));
    let one = Monomial(vec![0; n]);
    de_rham(&beta)
        .plus(&FormalForm::scalar_term(sh, &[0, sh.d as u8], one.clone(), -1, rat(3, 1)))
        .unwrap()
        .plus(&FormalForm::scalar_term(sh, &[0, 1], one.clone(), 1, rat(-1, 2)))
        .unwrap()
        .plus(&de_rham(&FormalForm::scalar_term(sh, &[0], Monomial({ let mut m = vec![0; n]; m[1] = 2; m }), -1, rat(1, 1))))
        .unwrap()
}

#[test]
fn recursion_round_trip() {
    for (d, depth) in [(1, 5), (2, 3)] {
        let sh = shape(d, depth);
        let one = Monomial(vec![0; 2 * d]);
        let polar = FormalForm::scalar_term(sh, &[0, d as u8], one, -1, rat(5, 1));
        for theta in [polar, sample_theta(sh)] {
            let a = fedosov_recursion(&theta).unwrap();
            assert!(a.is_fedosov());
            assert!(!a.is_clipped());
            assert_eq!(extract_theta(&a).unwrap(), theta);
        }
    }
}

#[test]
fn recursion_residual_filtration_increases() {
    let sh = shape(1, 6);
    let a = fedosov_recursion(&sample_theta(sh)).unwrap();
    let ws = &a.residual_weights;
    assert_eq!(*ws.last().unwrap(), None);
    let finite: Vec<i64> = ws.iter().flatten().copied().collect();
    assert!(finite.len() >= 2);
    assert!(finite.windows(2).all(|p| p[1] > p[0]), "{ws:?}");
    assert!(!a.higher.is_zero());
}

#[test]
fn residual_beyond_depth_lies_in_higher_filtration() {
    let sh = shape(1, 4);
    let a = fedosov_recursion(&sample_theta(sh)).unwrap();
    let wide = shape(1, 7);
    let wide = ConnectionData::from_lift(wide, &rebase(&a.lift(), wide)).unwrap();
    let residual = curvature_of_lift(&wide).nonscalar_part();
    let w = residual.min_weight().expect("truncation leaves a residual");
    assert!(w > sh.limit(), "{w}");
}

fn rebase(f: &FormalForm, to: FedosovShape) -> FormalForm {
    let mut out = FormalForm::zero(to, f.degree());
    for (k, w) in f.terms() {
        let w2 = WeylElement::from_lincomb(to.weyl(), {
            let mut l = dqrr::lincomb::LinComb::zero(to.weyl().window);
            for (m, c) in w.terms().iter() {
                let mut c2 = dqrr::scalars::TULaurent::zero(to.weyl().window);
                for (&(t, u), q) in c.terms() {
                    c2.add_term(t, u, q.clone());
                }
                l.add_term(m.clone(), &c2);
            }
            l
        });
        out = out.plus(&FormalForm::term(to, &k.dz, k.base.clone(), w2)).unwrap();
    }
    out
}

#[test]
fn non_closed_target_is_rejected() {
    let sh = shape(1, 3);
    let theta = FormalForm::scalar_term(sh, &[0, 1], mono(&[1, 0]), 0, rat(1, 1));
    assert!(de_rham(&theta).is_zero(), "d = 1 forms of top degree are closed");
    let sh2 = shape(2, 3);
    let bad = FormalForm::scalar_term(sh2, &[0, 1], mono(&[0, 0, 1, 0]), 0, rat(1, 1));
    assert_eq!(fedosov_recursion(&bad).unwrap_err(), FedosovError::NotClosed);
    let pole = FormalForm::scalar_term(sh, &[0, 1], mono(&[0, 0]), -2, rat(1, 1));
    assert_eq!(fedosov_recursion(&pole).unwrap_err(), FedosovError::PoleOrder(-2));
    let ws = sh.weyl();
    let fiber = FormalForm::term(sh, &[0, 1], mono(&[0, 0]), WeylElement::x(ws, 0));
    assert_eq!(fedosov_recursion(&fiber).unwrap_err(), FedosovError::NotScalar);
}

#[test]
fn curvature_is_closed_and_shifts_by_central_differential() {
    let sh = shape(2, 3);
    let a = fedosov_recursion(&sample_theta(sh)).unwrap();
    let curv = curvature_of_lift(&a);
    assert!(curv.is_scalar());
    assert!(de_rham(&curv).is_zero());
    // non-closed central shift α = z_2 t^0 dz_0
    let alpha = FormalForm::scalar_term(sh, &[0], mono(&[0, 0, 1, 0]), 0, rat(2, 1));
    let mut shifted = a.clone();
    shifted.central_lift = shifted.central_lift.plus(&alpha).unwrap();
    let expect = curv.plus(&de_rham(&alpha)).unwrap();
    assert_eq!(curvature_of_lift(&shifted), expect);
    // closed shift leaves it unchanged
    let closed = de_rham(&FormalForm::scalar_term(sh, &[], mono(&[1, 1, 0, 2]), -1, rat(1, 3)));
    let mut shifted = a.clone();
    shifted.central_lift = shifted.central_lift.plus(&closed).unwrap();
    assert_eq!(curvature_of_lift(&shifted), curv);
}

#[test]
fn gauge_by_zero_is_identity() {
    let sh = shape(1, 4);
    let a = fedosov_recursion(&sample_theta(sh)).unwrap();
    assert_eq!(gauge_transform(&FormalForm::zero(sh, 0), &a).unwrap(), a);
}

#[test]
fn gauge_outside_f1_is_rejected() {
    let sh = shape(1, 4);
    let a = fedosov_recursion(&sample_theta(sh)).unwrap();
    let x = FormalForm::fiber(sh, WeylElement::x(sh.weyl(), 0).shift_t(-1).scale_q(&rat(1, 1)));
    assert!(matches!(gauge_transform(&x, &a), Err(FedosovError::NotInF1(-1))));
}

#[test]
fn random_gauge_preserves_flatness_and_theta() {
    let mut s = Sampler::new(21);
    for (d, depth) in [(1, 5), (2, 3)] {
        let sh = shape(d, depth);
        let a = fedosov_recursion(&sample_theta(sh)).unwrap();
        let theta = extract_theta(&a).unwrap();
        for _ in 0..4 {
            let raw = random_form(&mut s, sh, 0, 3);
            let x = raw.minus(&raw.truncated(0)).unwrap();
            if x.is_zero() {
                continue;
            }
            let b = gauge_transform(&x, &a).unwrap();
            assert!(b.is_fedosov());
            assert_eq!(extract_theta(&b).unwrap(), theta);
        }
    }
}

#[test]
fn recursions_with_different_normalization_are_gauge_equivalent() {
    for (d, depth) in [(1, 5), (2, 3)] {
        let sh = shape(d, depth);
        let ws = sh.weyl();
        let theta = sample_theta(sh);
        let a = fedosov_recursion(&theta).unwrap();
        let mut cube = WeylElement::x(ws, 0);
        for _ in 0..2 {
            cube = dqrr::weyl::commutative_mul(&cube, &WeylElement::xi(ws, d - 1)).unwrap();
        }
        let mu = FormalForm::term(sh, &[], mono(&{
            let mut m = vec![0u8; 2 * d];
            m[d - 1] = 1;
            m
        }), cube)
        .plus(&FormalForm::fiber(sh, dqrr::weyl::commutative_mul(&WeylElement::x(ws, 0), &WeylElement::x(ws, 0)).unwrap().shift_t(1)))
        .unwrap();
        let b = fedosov_recursion_normalized(&theta, &mu).unwrap();
        assert!(b.is_fedosov());
        assert_ne!(a.lift(), b.lift());
        assert_eq!(extract_theta(&b).unwrap(), theta);
        assert_eq!(koszul_homotopy(&b.higher), mu.truncated(sh.lift_limit()));
        let steps = gauge_equivalence(&a, &b).unwrap();
        assert!(!steps.is_empty());
        let mut c = a.clone();
        for x in &steps {
            c = gauge_transform(x, &c).unwrap();
        }
        assert_eq!(c.lift().nonscalar_part(), b.lift().nonscalar_part());
        // levels are strictly increasing
        let levels: Vec<i64> = steps.iter().map(|x| x.min_weight().unwrap()).collect();
        assert!(levels.windows(2).all(|p| p[1] > p[0]), "{levels:?}");
    }
}

#[test]
fn horizontal_sections_are_flat_and_products_deform_commutative_product() {
    let sh = shape(1, 6);
    let a = fedosov_recursion(&sample_theta(sh)).unwrap();
    let f = base_function(sh, &[(mono(&[1, 1]), 0, rat(1, 1)), (mono(&[2, 0]), 0, rat(2, 1))]);
    let g = base_function(sh, &[(mono(&[0, 2]), 0, rat(-1, 1)), (mono(&[1, 0]), 0, rat(1, 3))]);
    let h = base_function(sh, &[(mono(&[1, 2]), 0, rat(1, 1))]);
    for p in [&f, &g, &h] {
        let s = horizontal_section(&a, p).unwrap();
        assert!(covariant_derivative(&a, &s).unwrap().is_zero());
        assert_eq!(harmonic_part(&s), *p);
    }
    let ws = sh.weyl();
    let fg = kernel_product(&a, &f, &g).unwrap();
    let commutative = dqrr::weyl::commutative_mul(&base_as_weyl(&f, ws).unwrap(), &base_as_weyl(&g, ws).unwrap()).unwrap();
    assert_eq!(base_as_weyl(&fg.t_component(0), ws).unwrap(), commutative);
    // associativity within the truncation
    let left = kernel_product(&a, &fg, &h).unwrap();
    let right = kernel_product(&a, &f, &kernel_product(&a, &g, &h).unwrap()).unwrap();
    assert!(agree_to_weight(&base_as_weyl(&left, ws).unwrap(), &base_as_weyl(&right, ws).unwrap(), sh.limit()));
    // the deformation differs from Moyal once θ has a t^0 part
    let moyal = moyal_mul(&base_as_weyl(&f, ws).unwrap(), &base_as_weyl(&g, ws).unwrap()).unwrap();
    assert!(!agree_to_weight(&base_as_weyl(&fg, ws).unwrap(), &moyal, sh.limit()));
}

#[test]
fn scalar_table_round_trip() {
    let sh = shape(2, 3);
    let theta = sample_theta(sh);
    let table = theta.to_scalar_table().unwrap();
    let text = serde_json::to_string(&table).unwrap();
    let back: ScalarFormJson = serde_json::from_str(&text).unwrap();
    assert_eq!(FormalForm::from_scalar_table(&back, 3).unwrap(), theta);
}

#[test]
fn normalization_below_fiber_degree_two_is_rejected() {
    let sh = shape(1, 4);
    let mu = FormalForm::fiber(sh, WeylElement::x(sh.weyl(), 0).shift_t(1));
    assert_eq!(fedosov_recursion_normalized(&sample_theta(sh), &mu).unwrap_err(), FedosovError::Normalization);
}
