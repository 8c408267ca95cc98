//! Seeded samplers for the verification suites. Every draw comes from one
//! ChaCha stream, so a seed fixes the whole sequence.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, GaussianRational as G};
use crate::geometry::MobiusMap;
use crate::moyal::{LinearSymplectic, SymplecticSpace};
use crate::poly::{Polynomial, Vars};
use crate::ratfn::RationalFunction;

/// `{0, 1, -1, i, -i, 1/2, -1/2, 1+i}`.
pub fn parameter_set() -> Vec<G> {
    vec![
        G::from(0),
        G::from(1),
        G::from(-1),
        G::i(),
        -G::i(),
        G::from_ratio(1, 2),
        G::from_ratio(-1, 2),
        G::from(1) + G::i(),
    ]
}

pub struct Sampler {
    rng: ChaCha8Rng,
    params: Vec<G>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            params: parameter_set(),
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn param(&mut self) -> G {
        let k = self.below(self.params.len());
        self.params[k].clone()
    }

    pub fn nonzero_param(&mut self) -> G {
        let k = 1 + self.below(self.params.len() - 1);
        self.params[k].clone()
    }

    /// Exponent vector of total degree at most `max_degree`.
    fn exponents(&mut self, n: usize, max_degree: u32) -> Vec<u32> {
        let total = self.rng.gen_range(0..=max_degree);
        let mut e = vec![0; n];
        for _ in 0..total {
            let k = self.below(n);
            e[k] += 1;
        }
        e
    }

    /// Between one and `max_terms` terms, each of total degree at most
    /// `max_degree`; never zero.
    pub fn polynomial(&mut self, vars: &Vars, max_degree: u32, max_terms: usize) -> Polynomial<G> {
        loop {
            let count = 1 + self.below(max_terms);
            let terms: Vec<_> = (0..count)
                .map(|_| (self.exponents(vars.len(), max_degree), self.nonzero_param()))
                .collect();
            let p = Polynomial::from_terms(vars, terms);
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn poly_fn(&mut self, vars: &Vars, max_degree: u32, max_terms: usize) -> RationalFunction<G> {
        self.polynomial(vars, max_degree, max_terms).into()
    }

    /// A polynomial whose terms all have even total degree.
    pub fn even_polynomial(&mut self, vars: &Vars, max_degree: u32, max_terms: usize) -> RationalFunction<G> {
        loop {
            let p = self.polynomial(vars, max_degree, max_terms);
            let even = Polynomial::from_terms(
                vars,
                p.terms()
                    .iter()
                    .filter(|(e, _)| e.iter().sum::<u32>() % 2 == 0)
                    .cloned(),
            );
            if !even.is_zero() {
                return even.into();
            }
        }
    }

    /// A polynomial over a denominator `c + a x_k` with `c` nonzero.
    pub fn rational(&mut self, vars: &Vars, max_degree: u32, max_terms: usize) -> RationalFunction<G> {
        let num = self.polynomial(vars, max_degree, max_terms);
        let k = self.below(vars.len());
        let den =
            &Polynomial::constant(vars, self.nonzero_param()) + &Polynomial::var(vars, k).scale(&self.nonzero_param());
        RationalFunction::new(num, den).expect("nonzero denominator")
    }

    /// A product of `count` transvections along basis vectors or sums of two
    /// basis vectors.
    pub fn symplectic(&mut self, space: &SymplecticSpace<G>, count: usize) -> LinearSymplectic<G> {
        let n = space.dim();
        let mut acc = LinearSymplectic::identity(space);
        for _ in 0..count {
            let mut v = vec![G::from(0); n];
            let a = self.below(n);
            v[a] = G::from(1);
            if self.rng.gen_bool(0.5) {
                let b = self.below(n);
                v[b] += &G::from(1);
            }
            let t = self.nonzero_param();
            acc = acc.compose(&LinearSymplectic::transvection(space, &v, &t));
        }
        acc
    }

    /// A product of `count` upper and lower shears; determinant one.
    pub fn mobius(&mut self, count: usize) -> MobiusMap<G> {
        let (one, zero) = (G::from(1), G::from(0));
        let mut acc = MobiusMap::identity();
        for _ in 0..count {
            let t = self.nonzero_param();
            let shear = if self.rng.gen_bool(0.5) {
                MobiusMap::new(one.clone(), t, zero.clone(), one.clone())
            } else {
                MobiusMap::new(one.clone(), zero.clone(), t, one.clone())
            };
            acc = acc.compose(&shear.expect("unimodular"));
        }
        acc
    }

    /// A uniformly shuffled one-based permutation of `1..=d`.
    pub fn permutation(&mut self, d: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (1..=d).collect();
        p.shuffle(&mut self.rng);
        p
    }
}
