use dqrr::chains::*;
use dqrr::sample::Sampler;
use dqrr::scalars::{rat, TULaurent, Window};
use dqrr::weyl::{WeylElement, WeylShape};
use proptest::prelude::*;

fn w() -> Window {
    Window::standard()
}

fn sample<A: GradedAlgebra>(seed: u64, alg: &A, red: Reduction) -> Chain<A::Basis> {
    let basis = alg.basis_upto(2);
    Sampler::new(seed).chain(alg, &basis, red, 1..=4, 3)
}

fn random_koszul(seed: u64, sh: WeylShape) -> KoszulElement {
    let mut s = Sampler::new(seed);
    let n = 2 * sh.d;
    let mut out = KoszulElement::zero(sh);
    for _ in 0..s.range(1, 3) {
        let q = s.range(0, n);
        let idx: Vec<u8> = (0..q as u8).collect();
        out = out.plus(&KoszulElement::new(&s.weyl(sh, 3, (0, 1), 3), &idx));
    }
    out
}

#[test]
fn b_on_short_words() {
    // b(a0 ⊗ a1) = a0 a1 - a1 a0 in 2x2 matrices
    let alg = MatrixAlgebra::new(w());
    let c = word_chain(&alg, Reduction::None, vec![MatrixBasis::Upper, MatrixBasis::Lower], TULaurent::one(w()));
    let bc = hochschild_b(&alg, &c);
    let expected = word_chain(&alg, Reduction::None, vec![MatrixBasis::H], TULaurent::one(w()));
    assert_eq!(bc, expected);
}

#[test]
fn connes_b_on_unit_vanishes_normalized() {
    let alg = DualNumbers::new(1, w());
    let c = word_chain(&alg, Reduction::Normalized, vec![EtaBasis::One], TULaurent::one(w()));
    assert!(connes_b(&alg, &c).is_zero());
}

#[test]
fn lambda_normalize_kills_tau_coboundaries() {
    let alg = MatrixAlgebra::new(w());
    let c = sample(11, &alg, Reduction::Full);
    assert!(lambda_normalize(&alg, &c.minus(&tau(&alg, &c))).is_zero());
}

#[test]
fn phi_cycle_normalizes_to_one() {
    for d in 1..=2 {
        let sh = WeylShape::new(d, 6, w());
        let phi = phi_cycle(sh);
        assert!(hochschild_b(&WeylAlgebra::new(sh), &phi).is_zero());
        let one = FormalDeRham::one(d, w());
        assert_eq!(koszul_to_derham(&hochschild_to_koszul(sh, &phi)), one);
        assert_eq!(trace_density_0(sh, &phi), one.shift(d as i32, 0));
        assert_eq!(periodic_trace_density(sh, &phi.shift(0, 0)), one.shift(d as i32, d as i32));
    }
}

#[test]
fn lambda_complex_of_dual_numbers_is_acyclic() {
    // dimensions of the lambda-complex of k[eta], deg eta = 1, in degrees 0..=6
    let rows = dqrr::harness::lambda_homology_k_eta(6).unwrap();
    let dims: Vec<usize> = rows.iter().map(|r| r.0).collect();
    assert_eq!(dims, vec![1, 1, 2, 2, 3, 3, 5]);
    assert!(rows.iter().all(|r| r.2 == 0));
}

#[test]
fn shuffle_requires_cyclic_input() {
    let alg = TensorAlgebra::new(MatrixAlgebra::new(w()), MatrixAlgebra::new(w()));
    let x = word_chain(&alg.left, Reduction::Full, vec![MatrixBasis::Upper, MatrixBasis::Lower], TULaurent::one(w()));
    let y = word_chain(&alg.right, Reduction::Full, vec![MatrixBasis::H], TULaurent::one(w()));
    assert_eq!(shuffle_external(&alg, &x, &y).unwrap_err(), ChainError::NotCyclicInvariant);
}

#[test]
fn shuffle_counts_and_unit() {
    // every entry is shuffled: two words of length 2 give binom(4, 2) = 6 interleavings
    let alg = TensorAlgebra::new(MatrixAlgebra::new(w()), MatrixAlgebra::new(w()));
    let x = word_chain(&alg.left, Reduction::Full, vec![MatrixBasis::Upper, MatrixBasis::Lower], TULaurent::one(w()));
    let y = word_chain(&alg.right, Reduction::Full, vec![MatrixBasis::H, MatrixBasis::Upper], TULaurent::one(w()));
    assert_eq!(shuffle_words(&alg, &x, &y).len(), 6);
}

#[test]
fn insertion_shifts_by_inverse_t_and_u() {
    let alg = DualNumbers::new(1, w());
    let c = word_chain(&alg, Reduction::Normalized, vec![EtaBasis::One], TULaurent::one(w()));
    let phi = dqrr::lincomb::LinComb::basis(w(), EtaBasis::Eta);
    let r = iota_phi(&alg, &phi, &c);
    let expected = word_chain(&alg, Reduction::Normalized, vec![EtaBasis::One, EtaBasis::Eta], TULaurent::monomial(w(), rat(1, 1), -1, -1));
    assert_eq!(r, expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn b_squared_vanishes(seed in any::<u64>()) {
        let m = MatrixAlgebra::new(w());
        let c = sample(seed, &m, Reduction::None);
        prop_assert!(hochschild_b(&m, &hochschild_b(&m, &c)).is_zero());
        let e = DualNumbers::new(-1, w());
        let c = sample(seed, &e, Reduction::None);
        prop_assert!(hochschild_b(&e, &hochschild_b(&e, &c)).is_zero());
    }

    #[test]
    fn mixed_complex_relations(seed in any::<u64>(), deg in prop_oneof![Just(1i32), Just(-1i32)]) {
        let e = DualNumbers::new(deg, w());
        let c = sample(seed, &e, Reduction::Normalized);
        prop_assert!(connes_b(&e, &connes_b(&e, &c)).is_zero());
        prop_assert!(hochschild_b(&e, &connes_b(&e, &c)).plus(&connes_b(&e, &hochschild_b(&e, &c))).is_zero());
        let d = |x: &Chain<EtaBasis>| hochschild_b(&e, x).plus(&dga_delta(&e, x));
        prop_assert!(d(&d(&c)).is_zero());
    }

    #[test]
    fn ntb_relations(seed in any::<u64>()) {
        let m = MatrixAlgebra::new(w());
        let c = sample(seed, &m, Reduction::None);
        let bp = b_prime(&m, &c);
        prop_assert_eq!(hochschild_b(&m, &c.minus(&tau(&m, &c))), bp.minus(&tau(&m, &bp)));
        prop_assert_eq!(b_prime(&m, &n_op(&m, &c)), n_op(&m, &hochschild_b(&m, &c)));
    }

    #[test]
    fn shuffle_is_a_chain_map(seed in any::<u64>()) {
        let alg = TensorAlgebra::new(MatrixAlgebra::new(w()), MatrixAlgebra::new(w()));
        let mut s = Sampler::new(seed);
        let bl = alg.left.basis_upto(2);
        let p = s.range(1, 3);
        let x = s.chain(&alg.left, &bl, Reduction::Full, p..=p, 1);
        let y = s.chain(&alg.right, &bl, Reduction::Full, 1..=2, 2);
        let lhs = b_prime(&alg, &shuffle_words(&alg, &x, &y));
        let a = shuffle_words(&alg, &b_prime(&alg.left, &x), &y);
        let b = shuffle_words(&alg, &x, &b_prime(&alg.right, &y));
        // Koszul sign of b' passing x: every entry has weight 1
        let rhs = if p.is_multiple_of(2) { a.plus(&b) } else { a.minus(&b) };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn koszul_maps_commute_with_differentials(seed in any::<u64>(), d in 1usize..=2) {
        let sh = WeylShape::new(d, 6, w());
        let k = random_koszul(seed, sh);
        prop_assert!(koszul_partial(&koszul_partial(&k)).is_zero());
        let alg = WeylAlgebra::new(sh);
        prop_assert_eq!(hochschild_b(&alg, &koszul_to_hochschild(&k)), koszul_to_hochschild(&koszul_partial(&k)));
        prop_assert_eq!(koszul_to_derham(&koszul_partial(&k)), t_d_dr(&koszul_to_derham(&k)));
        prop_assert_eq!(hochschild_to_koszul(sh, &koszul_to_hochschild(&k)), k.clone());
    }

    #[test]
    fn trace_density_factors_through_koszul(seed in any::<u64>(), d in 1usize..=2) {
        let sh = WeylShape::new(d, 6, w());
        let k = random_koszul(seed, sh);
        let form = koszul_to_derham(&k);
        prop_assert_eq!(trace_density_0(sh, &koszul_to_hochschild(&k)), op_i_inv(&form));
        // I conjugates t d_dR to d_dR
        prop_assert_eq!(op_i(&d_dr(&op_i_inv(&form))), t_d_dr(&form));
        prop_assert_eq!(op_j_inv(&op_j(&form)), form);
    }

    #[test]
    fn hkr_kills_boundaries(seed in any::<u64>()) {
        let alg = SymbolAlgebra::new(WeylShape::new(1, 6, w()));
        let basis = alg.basis_upto(2);
        let c = Sampler::new(seed).chain(&alg, &basis, Reduction::Normalized, 1..=3, 3);
        prop_assert!(hkr(&alg, &hochschild_b(&alg, &c)).is_zero());
    }

    #[test]
    fn lie_derivative_commutes_with_b(seed in any::<u64>()) {
        let sh = WeylShape::new(1, 6, w());
        let alg = WeylAlgebra::new(sh);
        let mut s = Sampler::new(seed);
        let basis = alg.basis_upto(2);
        let c = s.chain(&alg, &basis, Reduction::None, 1..=3, 2);
        let h: WeylElement = s.weyl(sh, 2, (0, 0), 2);
        prop_assert_eq!(
            hochschild_b(&alg, &chain_lie_derivative(&alg, &h, &c)),
            chain_lie_derivative(&alg, &h, &hochschild_b(&alg, &c))
        );
    }
}
