//! Seeded random inputs for identity checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{push_word, Chain, GradedAlgebra, Reduction};
use crate::lincomb::LinComb;
use crate::scalars::{rat, Rational, TULaurent};
use crate::weyl::{Monomial, WeylElement, WeylShape};

/// Deterministic generator of sample data.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Nonzero rational with `|num| <= 9`, `den <= 4`.
    pub fn rational(&mut self) -> Rational {
        loop {
            let n: i64 = self.rng.gen_range(-9..=9);
            if n != 0 {
                return rat(n, self.rng.gen_range(1..=4));
            }
        }
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// Random element of the span of `basis` with up to `terms` terms.
    pub fn element<K: Ord + Clone>(&mut self, basis: &[K], terms: usize, window: crate::scalars::Window) -> LinComb<K> {
        let mut out = LinComb::zero(window);
        for _ in 0..self.rng.gen_range(1..=terms) {
            let k = basis.choose(&mut self.rng).expect("nonempty basis").clone();
            out.add_term(k, &TULaurent::constant(window, self.rational()));
        }
        out
    }

    /// Random chain of words with lengths in `lens`, entries drawn from `basis`.
    pub fn chain<A: GradedAlgebra>(
        &mut self,
        alg: &A,
        basis: &[A::Basis],
        reduction: Reduction,
        lens: std::ops::RangeInclusive<usize>,
        words: usize,
    ) -> Chain<A::Basis> {
        let mut out = Chain::zero(alg.window(), reduction);
        let usable: Vec<A::Basis> = basis.iter().filter(|b| !alg.is_unit(b)).cloned().collect();
        for _ in 0..words {
            let len = self.rng.gen_range(lens.clone());
            let mut word = Vec::with_capacity(len);
            for i in 0..len {
                let pool = if i == 0 && reduction != Reduction::Full { basis } else { &usable[..] };
                word.push(pool.choose(&mut self.rng).expect("nonempty basis").clone());
            }
            let c = TULaurent::constant(alg.window(), self.rational());
            push_word(alg, &mut out.words, reduction, word, &c);
        }
        out
    }

    /// Random Weyl element with monomials of degree `<= max_deg` and
    /// `t`-powers in `t_range`.
    pub fn weyl(&mut self, shape: WeylShape, max_deg: usize, t_range: (i32, i32), terms: usize) -> WeylElement {
        let mut out = WeylElement::zero(shape);
        for _ in 0..self.rng.gen_range(1..=terms) {
            let deg = self.rng.gen_range(0..=max_deg);
            let mut e = vec![0u8; 2 * shape.d];
            for _ in 0..deg {
                let i = self.rng.gen_range(0..2 * shape.d);
                e[i] += 1;
            }
            let tp = self.rng.gen_range(t_range.0..=t_range.1);
            let c = TULaurent::monomial(shape.window, self.rational(), tp, 0);
            out.add_term(Monomial(e), &c);
        }
        out
    }
}
