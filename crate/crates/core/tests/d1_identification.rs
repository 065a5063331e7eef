//! The relative cochain complex of `d1~[eps]` relative to `d1~` with values in
//! the `W_1[eta]` chain module, compared with the `c_1`-extended complex.

use dqrr::chains::{dga_delta, hochschild_b, lambda_normalize, Chain, Reduction, WeylAlgebra, WithEta};
use dqrr::fundamental::{eta_weyl, extended_differential, iota_c1, u_d1, EtaWeylBasis, ExtendedChain};
use dqrr::liecw::{d1_tilde, CeComplex, Cochain, GModule};
use dqrr::scalars::Rational;

/// `W_1[eta]` chains as a `d1~[eps]`-module: `h` acts by `[∂ + ub, ι_Φ]`,
/// `h eps` by `ι_Φ`, central elements by zero.
struct ChainModule {
    alg: WithEta<WeylAlgebra>,
    zero: Chain<EtaWeylBasis>,
    n: usize,
}

impl ChainModule {
    fn iota(&self, m: &Chain<EtaWeylBasis>) -> Chain<EtaWeylBasis> {
        lambda_normalize(&self.alg, &iota_c1(&self.alg, m))
    }
}

impl GModule for ChainModule {
    type Elem = Chain<EtaWeylBasis>;

    fn zero(&self) -> Self::Elem {
        self.zero.clone()
    }

    fn is_zero(&self, m: &Self::Elem) -> bool {
        m.is_zero()
    }

    fn add_scaled(&self, acc: &mut Self::Elem, m: &Self::Elem, q: &Rational) {
        acc.add_assign(&m.scale_q(q));
    }

    // the action signs of the complex depend only on the Lie degree
    fn homogeneous_parts(&self, m: &Self::Elem) -> Vec<(i32, Self::Elem)> {
        vec![(0, m.clone())]
    }

    fn differential(&self, m: &Self::Elem) -> Self::Elem {
        lambda_normalize(&self.alg, &dga_delta(&self.alg, m).plus(&hochschild_b(&self.alg, m).shift(0, 1)))
    }

    fn action(&self, x: usize, m: &Self::Elem) -> Self::Elem {
        match x {
            0 => self.differential(&self.iota(m)).plus(&self.iota(&self.differential(m))),
            k if k == self.n => self.iota(m),
            _ => self.zero(),
        }
    }

    fn contraction(&self, x: usize, m: &Self::Elem) -> Option<Self::Elem> {
        Some(if x == 0 { self.iota(m) } else { self.zero() })
    }
}

fn to_cochain(ce: &CeComplex<'_, ChainModule>, u: &ExtendedChain, n: usize) -> Cochain<Chain<EtaWeylBasis>> {
    let mut out = ce.zero();
    for (&(a, th), part) in &u.parts {
        let mut word = vec![n as u16; a as usize];
        word.extend(std::iter::repeat_n((n + 1) as u16, th as usize));
        let c = ce.monomial(&word, part);
        ce.add_scaled(&mut out, &c, &Rational::from_integer(1.into()));
    }
    out
}

#[test]
fn relative_lie_complex_matches_extended_differential() {
    let g = d1_tilde(1).with_epsilon().unwrap();
    let n = 2;
    for max_m in 1..=3 {
        let u = u_d1(max_m, 8);
        let alg = eta_weyl(u.window, 8);
        let module = ChainModule { alg: alg, zero: Chain::zero(u.window, Reduction::Full), n };
        let ce = CeComplex::new(&g, module);
        let c = to_cochain(&ce, &u, n);
        let dc = ce.differential(&c);
        let expect = to_cochain(&ce, &extended_differential(&alg, &u), n);
        // the components free of degree-1 variables reproduce the extended
        // differential; the rest is θ^h ⊗ L_h U
        let relative: Cochain<_> = Cochain {
            terms: dc.terms.iter().filter(|(w, _)| w.iter().all(|&k| k as usize >= n)).map(|(w, m)| (w.clone(), m.clone())).collect(),
        };
        assert!(expect.terms.keys().any(|w| w.contains(&(n as u16))), "insertion term present");
        assert_eq!(relative, expect, "M = {max_m}");
        assert!(ce.contraction(0, &c).is_zero());
    }
}
