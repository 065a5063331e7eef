use dqrr::sample::Sampler;
use dqrr::scalars::*;
use dqrr::weyl::*;
use proptest::prelude::*;

// (z/2)/sinh(z/2) and sinh(z/2)/(z/2), coefficients of z^0, z^2, z^4, z^6,
// from the Bernoulli numbers and 1/((2k+1)! 4^k).
const AHAT: [(i64, i64); 4] = [(1, 1), (-1, 24), (7, 5760), (-31, 967680)];
const SINH_RATIO: [(i64, i64); 4] = [(1, 1), (1, 24), (1, 1920), (1, 322560)];

#[test]
fn ahat_coefficients_frozen() {
    let s = series_expand(SeriesName::Ahat, 7);
    for (k, &(n, d)) in AHAT.iter().enumerate() {
        assert_eq!(s.coeff(2 * k as u32), rat(n, d));
        assert_eq!(s.coeff(2 * k as u32 + 1), rat(0, 1));
    }
}

#[test]
fn sinh_ratio_coefficients_frozen() {
    let s = series_expand(SeriesName::SinhRatio, 7);
    for (k, &(n, d)) in SINH_RATIO.iter().enumerate() {
        assert_eq!(s.coeff(2 * k as u32), rat(n, d));
    }
}

#[test]
fn ahat_inverts_sinh_ratio() {
    let a = series_expand(SeriesName::Ahat, 12);
    let b = series_expand(SeriesName::SinhRatio, 12);
    assert!(a.mul(&b).is_one());
}

#[test]
fn series_agree_with_floating_point_evaluation() {
    let z: f64 = 0.3;
    let a = series_expand(SeriesName::Ahat, 10);
    let approx: f64 = (0..=10).map(|k| to_f64(&a.coeff(k)) * z.powi(k as i32)).sum();
    let exact = (z / 2.0) / (z / 2.0).sinh();
    assert!((approx - exact).abs() < 1e-12);
    let e = series_expand(SeriesName::Exp, 10);
    let approx: f64 = (0..=10).map(|k| to_f64(&e.coeff(k)) * z.powi(k as i32)).sum();
    assert!((approx - z.exp()).abs() < 1e-10);
}

#[test]
fn exp_theta_factor_is_product() {
    let f = series_expand(SeriesName::AhatInvEthetaFactor, 6);
    let s = series_expand(SeriesName::SinhRatio, 6);
    // coefficient of z^2 theta^1 is -1/24, of z^0 theta^2 is 1/2
    assert_eq!(f.coeff2(2, 1), -s.coeff(2));
    assert_eq!(f.coeff2(0, 2), rat(1, 2));
}

#[test]
fn rational_parsing() {
    assert_eq!(parse_rational("-7/5760").unwrap(), rat(-7, 5760));
    assert_eq!(parse_rational("3").unwrap(), int(3));
    assert!(parse_rational("x/2").is_err());
}

#[test]
fn window_clipping_is_flagged() {
    let w = Window::new(-1, 1, 0, 0).unwrap();
    let a = TULaurent::monomial(w, int(1), 1, 0);
    let sq = a.checked_mul(&a).unwrap();
    assert!(sq.is_zero());
    assert!(sq.is_clipped());
}

#[test]
fn canonical_commutator() {
    for d in 1..=2 {
        let sh = WeylShape::new(d, 4, Window::standard());
        for i in 0..d {
            for j in 0..d {
                let c = commutator(&WeylElement::x(sh, i), &WeylElement::xi(sh, j)).unwrap();
                let expected = if i == j { WeylElement::t_power(sh, 1) } else { WeylElement::zero(sh) };
                assert_eq!(c, expected);
            }
        }
    }
}

#[test]
fn moyal_of_linear_terms() {
    // x * xi = x xi + t/2
    let sh = WeylShape::new(1, 4, Window::standard());
    let p = moyal_mul(&WeylElement::x(sh, 0), &WeylElement::xi(sh, 0)).unwrap();
    let mut expected = WeylElement::monomial(sh, Monomial(vec![1, 1]), TULaurent::one(sh.window));
    expected.add_term(Monomial::one(1), &TULaurent::monomial(sh.window, rat(1, 2), 1, 0));
    assert_eq!(p, expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moyal_is_associative(seed in any::<u64>(), d in 1usize..=2) {
        let mut s = Sampler::new(seed);
        let sh = WeylShape::new(d, 6, Window::standard());
        let f = s.weyl(sh, 2, (0, 1), 3);
        let g = s.weyl(sh, 2, (0, 1), 3);
        let h = s.weyl(sh, 2, (-1, 1), 3);
        let l = moyal_mul(&moyal_mul(&f, &g).unwrap(), &h).unwrap();
        let r = moyal_mul(&f, &moyal_mul(&g, &h).unwrap()).unwrap();
        prop_assert!(!l.is_clipped());
        prop_assert_eq!(l, r);
    }

    #[test]
    fn commutators_lie_in_t_w(seed in any::<u64>(), d in 1usize..=2) {
        let mut s = Sampler::new(seed);
        let sh = WeylShape::new(d, 6, Window::standard());
        let f = s.weyl(sh, 3, (0, 0), 3);
        let g = s.weyl(sh, 3, (0, 0), 3);
        let c = commutator(&f, &g).unwrap();
        prop_assert!(c.terms().iter().all(|(_, k)| k.min_t().is_none_or(|t| t >= 1)));
    }

    #[test]
    fn moyal_deforms_commutative_product(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let sh = WeylShape::new(1, 6, Window::standard());
        let f = s.weyl(sh, 3, (0, 0), 2);
        let g = s.weyl(sh, 3, (0, 0), 2);
        let p = moyal_mul(&f, &g).unwrap();
        let c = commutative_mul(&f, &g).unwrap();
        let t0 = |e: &WeylElement| {
            let mut out = WeylElement::zero(sh);
            for (m, k) in e.terms().iter() {
                out.add_term(m.clone(), &k.t_component(0));
            }
            out
        };
        prop_assert_eq!(t0(&p), c);
    }

    #[test]
    fn laurent_product_commutes_and_associates(a in -5i64..5, b in 1i64..5, i in -3i32..3, j in -3i32..3) {
        let w = Window::standard();
        let x = TULaurent::from_terms(w, [(i, 0, rat(a, b)), (0, j, int(2))]);
        let y = TULaurent::from_terms(w, [(j, i, rat(b, 3)), (1, 1, int(-1))]);
        let z = TULaurent::monomial(w, rat(1, 2), -1, 1);
        prop_assert_eq!(x.checked_mul(&y).unwrap(), y.checked_mul(&x).unwrap());
        prop_assert_eq!(
            x.checked_mul(&y).unwrap().checked_mul(&z).unwrap(),
            x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap()
        );
    }
}
