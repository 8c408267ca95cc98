//! Constant symplectic spaces and the Moyal-Weyl star product.
//!
//! For a constant form `omega` with Gram matrix `W[a][b] = omega(e_a, e_b)`,
//! the Poisson bivector is `pi = (W^-1)^T`, so that
//! `{f, g} = sum_ab pi[a][b] (d_a f)(d_b g)` and `{x, y} = 1` for `dx^dy`.
//! The bidifferential operator `D = sum_ab pi[a][b] d_a (x) d_b` acts on
//! `f (x) g` and is restricted to the diagonal; the star product is
//! `f * g = sum_k (i h / 2)^k / k! * D^k(f (x) g)`, truncated in `h`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field};
use crate::matrix::Matrix;
use crate::poly::{Polynomial, Vars};
use crate::ratfn::RationalFunction;
use crate::series::HSeries;

/// A vector space with a constant symplectic form, in coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace<F> {
    vars: Vars,
    omega: Matrix<F>,
    pi: Matrix<F>,
}

impl<F: Field> SymplecticSpace<F> {
    /// `omega[a][b]` is the form evaluated on the basis vectors dual to
    /// `vars[a]`, `vars[b]`.
    pub fn new(vars: Vars, omega: Matrix<F>) -> Result<Self> {
        if omega.dim() != vars.len() || vars.len() % 2 != 0 || !omega.is_antisymmetric() {
            return Err(Error::DegenerateForm);
        }
        if let Some(dup) = vars.has_duplicates() {
            return Err(Error::NameCollision(dup.to_string()));
        }
        let pi = omega.inverse().ok_or(Error::DegenerateForm)?.transpose();
        Ok(SymplecticSpace { vars, omega, pi })
    }

    /// Darboux pairs `(q_k, p_k)` with form `sum dq_k ^ dp_k`, so
    /// `{q_k, p_k} = 1`.
    pub fn darboux<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let vars = Vars::new(pairs.iter().flat_map(|(q, p)| [q.as_ref(), p.as_ref()]));
        let n = vars.len();
        let mut omega = Matrix::zeros(n);
        for k in 0..pairs.len() {
            omega.set(2 * k, 2 * k + 1, F::one());
            omega.set(2 * k + 1, 2 * k, -F::one());
        }
        Self::new(vars, omega)
    }

    /// The plane `(x, y)` with `dx ^ dy`.
    pub fn flat2() -> Self {
        Self::darboux(&[("x", "y")]).expect("standard plane")
    }

    /// `(x1, y1, ..., xn, yn)` with `sum dx_k ^ dy_k`.
    pub fn flat(n: usize) -> Self {
        let pairs: Vec<_> = (1..=n).map(|k| (format!("x{k}"), format!("y{k}"))).collect();
        Self::darboux(&pairs).expect("standard space")
    }

    /// A cotangent chart `(z, p)` with the Liouville form `dp ^ dz`, for
    /// which `{z, p} = -1`.
    pub fn cotangent_chart(z: &str, p: &str) -> Result<Self> {
        Self::darboux(&[(p, z)]).and_then(|s| s.reorder(&[1, 0]))
    }

    /// Same form, variables listed as `order` picks them from the current list.
    pub fn reorder(&self, order: &[usize]) -> Result<Self> {
        let vars = Vars::new(order.iter().map(|&k| self.vars.names()[k].clone()));
        let n = order.len();
        let mut omega = Matrix::zeros(n);
        for (r, &a) in order.iter().enumerate() {
            for (c, &b) in order.iter().enumerate() {
                omega.set(r, c, self.omega.get(a, b).clone());
            }
        }
        Self::new(vars, omega)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn omega(&self) -> &Matrix<F> {
        &self.omega
    }

    pub fn pi(&self) -> &Matrix<F> {
        &self.pi
    }

    /// Nonzero entries `(a, b, pi[a][b])` of the bivector.
    pub fn bivector_terms(&self) -> Vec<(usize, usize, F)> {
        let n = self.dim();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.pi.get(a, b).is_zero())
            .map(|(a, b)| (a, b, self.pi.get(a, b).clone()))
            .collect()
    }

    /// Product space: concatenated variables, block-diagonal form.
    pub fn block_sum(&self, other: &Self) -> Result<Self> {
        if let Some(name) = other.vars.names().iter().find(|n| self.vars.index(n).is_some()) {
            return Err(Error::NameCollision(name.clone()));
        }
        let (n, m) = (self.dim(), other.dim());
        let vars = Vars::new(self.vars.names().iter().chain(other.vars.names()).cloned());
        let mut omega = Matrix::zeros(n + m);
        for r in 0..n {
            for c in 0..n {
                omega.set(r, c, self.omega.get(r, c).clone());
            }
        }
        for r in 0..m {
            for c in 0..m {
                omega.set(n + r, n + c, other.omega.get(r, c).clone());
            }
        }
        Self::new(vars, omega)
    }
}

/// A symplectic space together with the truncation order of its star product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoyalContext<F> {
    pub space: SymplecticSpace<F>,
    pub order: usize,
}

impl<F: Field> MoyalContext<F> {
    pub fn new(space: SymplecticSpace<F>, order: usize) -> Self {
        MoyalContext { space, order }
    }

    pub fn vars(&self) -> &Vars {
        self.space.vars()
    }

    fn check(&self, f: &RationalFunction<F>) -> Result<()> {
        if f.vars() != self.space.vars() {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }
}

/// `{f, g} = sum_ab pi[a][b] (d_a f)(d_b g)`.
pub fn poisson_bracket<F: Field>(
    ctx: &MoyalContext<F>,
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
) -> Result<RationalFunction<F>> {
    ctx.check(f)?;
    ctx.check(g)?;
    let n = ctx.space.dim();
    let df: Vec<_> = (0..n).map(|a| f.derivative(a)).collect();
    let dg: Vec<_> = (0..n).map(|b| g.derivative(b)).collect();
    let mut acc = RationalFunction::zero(ctx.vars());
    for (a, b, w) in ctx.space.bivector_terms() {
        if df[a].is_zero() || dg[b].is_zero() {
            continue;
        }
        acc = &acc + &(&df[a] * &dg[b]).scale(&w);
    }
    Ok(acc)
}

/// Memoised mixed partials of one function, keyed by multi-index. The
/// partial `d^alpha (n / q)` is kept unreduced as `N_alpha / q^(|alpha|+1)`
/// so that sums over a fixed `|alpha|` share one denominator.
struct Partials<F> {
    den: Polynomial<F>,
    den_partials: Vec<Polynomial<F>>,
    cache: HashMap<Vec<u32>, Polynomial<F>>,
}

impl<F: Field> Partials<F> {
    fn new(f: &RationalFunction<F>) -> Self {
        let n = f.vars().len();
        let mut cache = HashMap::new();
        cache.insert(vec![0; n], f.num().clone());
        Partials {
            den: f.den().clone(),
            den_partials: (0..n).map(|v| f.den().derivative(v)).collect(),
            cache,
        }
    }

    fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Numerator of the partial at `alpha`.
    fn get(&mut self, alpha: &[u32]) -> &Polynomial<F> {
        if !self.cache.contains_key(alpha) {
            let v = alpha.iter().position(|&k| k > 0).expect("base entry present");
            let mut parent = alpha.to_vec();
            parent[v] -= 1;
            let m = parent.iter().sum::<u32>() as i64 + 1;
            let top = self.get(&parent).clone();
            let d = if self.is_polynomial() {
                top.derivative(v)
            } else {
                // (N / q^m)' = (N' q - m N q') / q^(m+1)
                &(&top.derivative(v) * &self.den) - &(&top * &self.den_partials[v]).scale(&F::from_i64(m))
            };
            self.cache.insert(alpha.to_vec(), d);
        }
        &self.cache[alpha]
    }
}

/// `D^k (f (x) g) / k!` on the diagonal.
///
/// `D^k / k!` expands over multisets of bivector terms with weight
/// `prod pi_t^{m_t} / m_t!`; a multiset whose partial derivative of `f` or
/// `g` already vanishes prunes every extension of it.
fn bidiff_scaled<F: Field>(
    terms: &[(usize, usize, F)],
    vars: &Vars,
    f: &mut Partials<F>,
    g: &mut Partials<F>,
    k: usize,
) -> RationalFunction<F> {
    struct Walk<'a, F> {
        terms: &'a [(usize, usize, F)],
        alpha: Vec<u32>,
        beta: Vec<u32>,
        acc: Polynomial<F>,
    }

    fn rec<F: Field>(
        w: &mut Walk<'_, F>,
        f: &mut Partials<F>,
        g: &mut Partials<F>,
        start: usize,
        left: usize,
        weight: F,
    ) {
        if left == 0 {
            let df = f.get(&w.alpha).clone();
            let dg = g.get(&w.beta);
            w.acc = &w.acc + &(&df * dg).scale(&weight);
            return;
        }
        for t in start..w.terms.len() {
            let (a, b, ref pi) = w.terms[t];
            // Take term t between 1 and `left` times.
            let mut wt = weight.clone();
            let mut taken = 0;
            while taken < left {
                taken += 1;
                w.alpha[a] += 1;
                w.beta[b] += 1;
                wt = wt * pi / &F::from_i64(taken as i64);
                if f.get(&w.alpha).is_zero() || g.get(&w.beta).is_zero() {
                    break;
                }
                rec(w, f, g, t + 1, left - taken, wt.clone());
            }
            w.alpha[a] -= taken as u32;
            w.beta[b] -= taken as u32;
        }
    }

    let n = vars.len();
    let mut walk = Walk {
        terms,
        alpha: vec![0; n],
        beta: vec![0; n],
        acc: Polynomial::zero(vars),
    };
    rec(&mut walk, f, g, 0, k, F::one());
    let e = k as u32 + 1;
    let mut bases = Vec::new();
    for p in [&*f, &*g] {
        if !p.is_polynomial() {
            match bases.iter_mut().find(|(q, _)| *q == &p.den) {
                Some((_, m)) => *m += e,
                None => bases.push((&p.den, e)),
            }
        }
    }
    RationalFunction::over_powers(walk.acc, &bases)
}

fn factorial<F: Field>(k: usize) -> F {
    (1..=k as i64).fold(F::one(), |acc, j| acc * &F::from_i64(j))
}

/// `Delta^* D^k (f (x) g)`.
pub fn bidiff_power<F: Field>(
    ctx: &MoyalContext<F>,
    f: &RationalFunction<F>,
    g: &RationalFunction<F>,
    k: usize,
) -> Result<RationalFunction<F>> {
    ctx.check(f)?;
    ctx.check(g)?;
    let terms = ctx.space.bivector_terms();
    let scaled = bidiff_scaled(&terms, ctx.vars(), &mut Partials::new(f), &mut Partials::new(g), k);
    Ok(scaled.scale(&factorial(k)))
}

fn check_series<F: Field>(ctx: &MoyalContext<F>, s: &HSeries<F>) -> Result<()> {
    if s.vars() != ctx.vars() {
        return Err(Error::VariableMismatch);
    }
    Ok(())
}

/// Moyal-Weyl star product, truncated at the smallest of the context order
/// and the operand orders.
pub fn moyal_star<F: ComplexField>(ctx: &MoyalContext<F>, f: &HSeries<F>, g: &HSeries<F>) -> Result<HSeries<F>> {
    check_series(ctx, f)?;
    check_series(ctx, g)?;
    let order = ctx.order.min(f.order()).min(g.order());
    let vars = ctx.vars();
    let terms = ctx.space.bivector_terms();
    // (i/2)^k
    let half_i = F::imag_unit() / &F::from_i64(2);
    let mut powers = vec![F::one()];
    for k in 1..=order {
        let next = powers[k - 1].clone() * &half_i;
        powers.push(next);
    }
    let mut fp: Vec<_> = f.coeffs()[..=order].iter().map(Partials::new).collect();
    let mut gp: Vec<_> = g.coeffs()[..=order].iter().map(Partials::new).collect();
    let mut out = vec![RationalFunction::zero(vars); order + 1];
    for i in 0..=order {
        if f.coeff(i).is_zero() {
            continue;
        }
        for j in 0..=order - i {
            if g.coeff(j).is_zero() {
                continue;
            }
            for k in 0..=order - i - j {
                let b = bidiff_scaled(&terms, vars, &mut fp[i], &mut gp[j], k);
                if !b.is_zero() {
                    out[i + j + k] = &out[i + j + k] + &b.scale(&powers[k]);
                }
            }
        }
    }
    HSeries::new(out)
}

/// `f * g - g * f`.
pub fn star_commutator<F: ComplexField>(ctx: &MoyalContext<F>, f: &HSeries<F>, g: &HSeries<F>) -> Result<HSeries<F>> {
    moyal_star(ctx, f, g)?.sub(&moyal_star(ctx, g, f)?)
}

/// An element of `Sp(V)`: `M^T omega M = omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSymplectic<F> {
    matrix: Matrix<F>,
}

impl<F: Field> LinearSymplectic<F> {
    pub fn new(space: &SymplecticSpace<F>, matrix: Matrix<F>) -> Result<Self> {
        if matrix.dim() != space.dim() {
            return Err(Error::NotSymplectic);
        }
        let pulled = matrix.transpose().mul(space.omega()).mul(&matrix);
        if &pulled != space.omega() {
            return Err(Error::NotSymplectic);
        }
        Ok(LinearSymplectic { matrix })
    }

    pub fn identity(space: &SymplecticSpace<F>) -> Self {
        LinearSymplectic {
            matrix: Matrix::identity(space.dim()),
        }
    }

    /// The transvection `w -> w + t omega(v, w) v`, symplectic for any `v`, `t`.
    pub fn transvection(space: &SymplecticSpace<F>, v: &[F], t: &F) -> Self {
        let n = space.dim();
        assert_eq!(v.len(), n, "vector length");
        let omega = space.omega();
        // omega(v, e_c) = sum_a v_a omega[a][c]
        let row: Vec<F> = (0..n)
            .map(|c| (0..n).fold(F::zero(), |acc, a| acc + &(v[a].clone() * omega.get(a, c))))
            .collect();
        let mut m: Matrix<F> = Matrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                let add = t.clone() * &v[r] * &row[c];
                let cur = m.get(r, c).clone();
                m.set(r, c, cur + &add);
            }
        }
        LinearSymplectic { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn compose(&self, other: &Self) -> Self {
        LinearSymplectic {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    /// The coordinate functions of `v -> M v`.
    pub fn images(&self, vars: &Vars) -> Vec<RationalFunction<F>> {
        let n = self.matrix.dim();
        (0..n)
            .map(|a| {
                (0..n).fold(RationalFunction::zero(vars), |acc, b| {
                    let m = self.matrix.get(a, b);
                    if m.is_zero() {
                        acc
                    } else {
                        &acc + &RationalFunction::var(vars, b).scale(m)
                    }
                })
            })
            .collect()
    }
}

/// `(sum f_i h^i) o G = sum (f_i o G) h^i`.
pub fn apply_symplectic<F: Field>(
    ctx: &MoyalContext<F>,
    g: &LinearSymplectic<F>,
    f: &HSeries<F>,
) -> Result<HSeries<F>> {
    check_series(ctx, f)?;
    // Re-validate: the matrix may have been built for another space.
    LinearSymplectic::new(&ctx.space, g.matrix.clone())?;
    let images = g.images(ctx.vars());
    f.map_coeffs(|c| c.substitute(&images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;

    fn flat2(order: usize) -> MoyalContext<G> {
        MoyalContext::new(SymplecticSpace::flat2(), order)
    }

    fn var(ctx: &MoyalContext<G>, name: &str) -> RationalFunction<G> {
        RationalFunction::var_named(ctx.vars(), name).unwrap()
    }

    fn ser(ctx: &MoyalContext<G>, f: RationalFunction<G>) -> HSeries<G> {
        HSeries::constant(f, ctx.order)
    }

    /// Independent oracle: apply `D^k` by summing over every ordered sequence
    /// of `k` index pairs, with no multiset bookkeeping and no caching.
    fn bidiff_oracle(
        ctx: &MoyalContext<G>,
        f: &RationalFunction<G>,
        g: &RationalFunction<G>,
        k: usize,
    ) -> RationalFunction<G> {
        let n = ctx.space.dim();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        let mut acc = RationalFunction::zero(ctx.vars());
        let total = pairs.len().pow(k as u32);
        for code in 0..total {
            let mut c = code;
            let (mut df, mut dg, mut w) = (f.clone(), g.clone(), G::from(1));
            for _ in 0..k {
                let (a, b) = pairs[c % pairs.len()];
                c /= pairs.len();
                w = w * ctx.space.pi().get(a, b);
                df = df.derivative(a);
                dg = dg.derivative(b);
            }
            acc = &acc + &(&df * &dg).scale(&w);
        }
        acc
    }

    #[test]
    fn standard_plane_bracket_normalisation() {
        let ctx = flat2(4);
        let (x, y) = (var(&ctx, "x"), var(&ctx, "y"));
        assert!(poisson_bracket(&ctx, &x, &y).unwrap().is_one());
        // {x^2, y} = 2x, by f_x g_y - f_y g_x
        assert_eq!(poisson_bracket(&ctx, &(&x * &x), &y).unwrap(), x.scale(&G::from(2)));
        let f = &(&x * &y) / &(&x + &y);
        assert!(poisson_bracket(&ctx, &f, &f).unwrap().is_zero());
    }

    #[test]
    fn bivector_is_transposed_inverse() {
        let s = SymplecticSpace::<G>::flat2();
        assert_eq!(s.pi().get(0, 1), &G::from(1));
        assert_eq!(s.pi().mul(&s.omega().transpose()), Matrix::identity(2));
        let k = SymplecticSpace::<G>::cotangent_chart("z", "p").unwrap();
        assert_eq!(k.vars().names(), ["z", "p"]);
        assert_eq!(k.omega().get(1, 0), &G::from(1));
        assert_eq!(k.pi().get(0, 1), &G::from(-1));
    }

    #[test]
    fn bidiff_matches_oracle() {
        let ctx = flat2(4);
        let (x, y) = (var(&ctx, "x"), var(&ctx, "y"));
        let x2 = &x * &x;
        let y2 = &y * &y;
        // Values frozen from the oracle: D^0 = fg, D^1(x, y) = 1, D^2(x^2, y^2) = 4.
        assert_eq!(
            bidiff_oracle(&ctx, &x2, &y2, 2),
            RationalFunction::constant(ctx.vars(), G::from(4))
        );
        assert_eq!(bidiff_power(&ctx, &x2, &y2, 0).unwrap(), &x2 * &y2);
        assert!(bidiff_power(&ctx, &x, &y, 1).unwrap().is_one());
        assert_eq!(
            bidiff_power(&ctx, &x2, &y2, 2).unwrap(),
            RationalFunction::constant(ctx.vars(), G::from(4))
        );
        let f = &(&x2 * &y) + &(&x / &(&y + &RationalFunction::one(ctx.vars())));
        let g = &(&y2 * &y) - &(&x * &y);
        for k in 0..4 {
            assert_eq!(
                bidiff_power(&ctx, &f, &g, k).unwrap(),
                bidiff_oracle(&ctx, &f, &g, k),
                "k = {k}"
            );
        }
        assert_eq!(
            bidiff_power(&ctx, &f, &g, 1).unwrap(),
            poisson_bracket(&ctx, &f, &g).unwrap()
        );
    }

    #[test]
    fn bidiff_matches_oracle_in_dimension_four() {
        let ctx = MoyalContext::new(SymplecticSpace::<G>::flat(2), 3);
        let v = |n: &str| var(&ctx, n);
        let f = &(&v("x1") * &v("y2")) * &v("x2");
        let g = &(&v("y1") * &v("y2")) + &(&v("x2") * &v("x1"));
        for k in 0..3 {
            assert_eq!(bidiff_power(&ctx, &f, &g, k).unwrap(), bidiff_oracle(&ctx, &f, &g, k));
        }
    }

    #[test]
    fn star_examples() {
        let ctx = flat2(4);
        let (x, y) = (var(&ctx, "x"), var(&ctx, "y"));
        let vars = ctx.vars();
        let i = G::i();
        let half = G::from_ratio(1, 2);
        let h1 = |c: G| {
            let mut v = vec![RationalFunction::zero(vars); 5];
            v[1] = RationalFunction::constant(vars, c);
            HSeries::new(v).unwrap()
        };
        let xy = ser(&ctx, &x * &y);
        let x_star_y = moyal_star(&ctx, &ser(&ctx, x.clone()), &ser(&ctx, y.clone())).unwrap();
        assert_eq!(x_star_y, xy.add(&h1(i.clone() * &half)).unwrap());
        let y_star_x = moyal_star(&ctx, &ser(&ctx, y.clone()), &ser(&ctx, x.clone())).unwrap();
        assert_eq!(y_star_x, xy.sub(&h1(i.clone() * &half)).unwrap());

        // x^2 * y^2 = x^2 y^2 + 2i h xy - (1/2) h^2
        let x2y2 = moyal_star(&ctx, &ser(&ctx, &x * &x), &ser(&ctx, &y * &y)).unwrap();
        let mut expected = vec![RationalFunction::zero(vars); 5];
        expected[0] = &(&x * &x) * &(&y * &y);
        expected[1] = (&x * &y).scale(&(i.clone() * &G::from(2)));
        expected[2] = RationalFunction::constant(vars, -half.clone());
        assert_eq!(x2y2, HSeries::new(expected).unwrap());
        assert_eq!(x2y2.to_expr_string(), "x^2*y^2 + 2*i*x*y*h - (1/2)*h^2");
    }

    #[test]
    fn unit_and_zero() {
        let ctx = flat2(3);
        let (x, y) = (var(&ctx, "x"), var(&ctx, "y"));
        let f = ser(&ctx, &(&x * &x) / &(&y + &x));
        let one = HSeries::one(ctx.vars(), 3);
        assert_eq!(moyal_star(&ctx, &one, &f).unwrap(), f);
        assert_eq!(moyal_star(&ctx, &f, &one).unwrap(), f);
        let zero = HSeries::zero(ctx.vars(), 3);
        assert!(moyal_star(&ctx, &zero, &f).unwrap().is_zero());
    }

    #[test]
    fn commutator_examples() {
        let ctx = flat2(4);
        let (x, y) = (var(&ctx, "x"), var(&ctx, "y"));
        let c = star_commutator(&ctx, &ser(&ctx, x.clone()), &ser(&ctx, y.clone())).unwrap();
        assert_eq!(c.coeff(1), &RationalFunction::constant(ctx.vars(), G::i()));
        assert!(c.coeff(0).is_zero() && c.coeff(2).is_zero());
        let c2 = star_commutator(&ctx, &ser(&ctx, &x * &x), &ser(&ctx, &y * &y)).unwrap();
        assert_eq!(c2.coeff(1), &(&x * &y).scale(&(G::i() * &G::from(4))));
        assert!(c2.coeff(2).is_zero());
        let f = ser(&ctx, &x * &y);
        assert!(star_commutator(&ctx, &f, &f).unwrap().is_zero());
    }

    #[test]
    fn block_sum_brackets() {
        let a = SymplecticSpace::<G>::darboux(&[("x", "y")]).unwrap();
        let b = SymplecticSpace::<G>::darboux(&[("u", "v")]).unwrap();
        let s = a.block_sum(&b).unwrap();
        let ctx = MoyalContext::new(s, 4);
        let v = |n: &str| var(&ctx, n);
        let br = |p: &str, q: &str| poisson_bracket(&ctx, &v(p), &v(q)).unwrap();
        assert!(br("x", "y").is_one() && br("u", "v").is_one());
        for (p, q) in [("x", "u"), ("x", "v"), ("y", "u"), ("y", "v")] {
            assert!(br(p, q).is_zero());
        }
        assert_eq!(a.block_sum(&a), Err(Error::NameCollision("x".into())));
    }

    #[test]
    fn block_sum_star_factorises() {
        // In the sum, (x^2 u) * (y v) is the bilinear combination of the
        // factorwise stars (x^2 * y)(u * v): expand both with the series
        // Cauchy product.
        let s = SymplecticSpace::<G>::darboux(&[("x", "y"), ("u", "v")]).unwrap();
        let ctx = MoyalContext::new(s, 4);
        let v = |n: &str| var(&ctx, n);
        let lhs = moyal_star(
            &ctx,
            &ser(&ctx, &(&v("x") * &v("x")) * &v("u")),
            &ser(&ctx, &v("y") * &v("v")),
        )
        .unwrap();
        let left = moyal_star(&ctx, &ser(&ctx, &v("x") * &v("x")), &ser(&ctx, v("y"))).unwrap();
        let right = moyal_star(&ctx, &ser(&ctx, v("u")), &ser(&ctx, v("v"))).unwrap();
        assert_eq!(lhs, left.mul(&right).unwrap());
    }

    #[test]
    fn symplectic_action() {
        let ctx = flat2(2);
        let (x, y) = (var(&ctx, "x"), var(&ctx, "y"));
        let rot = Matrix::from_rows(vec![vec![G::from(0), G::from(1)], vec![G::from(-1), G::from(0)]]);
        let g = LinearSymplectic::new(&ctx.space, rot).unwrap();
        assert_eq!(
            apply_symplectic(&ctx, &g, &ser(&ctx, x.clone())).unwrap(),
            ser(&ctx, y.clone())
        );
        let id = LinearSymplectic::identity(&ctx.space);
        let f = ser(&ctx, &x * &(&y * &y));
        assert_eq!(apply_symplectic(&ctx, &id, &f).unwrap(), f);
        let bad = Matrix::from_rows(vec![vec![G::from(2), G::from(0)], vec![G::from(0), G::from(1)]]);
        assert_eq!(LinearSymplectic::new(&ctx.space, bad), Err(Error::NotSymplectic));
    }

    #[test]
    fn transvections_are_symplectic() {
        let s = SymplecticSpace::<G>::flat(2);
        let v = vec![G::from(1), G::from_ratio(1, 2), G::i(), G::from(0)];
        let t = LinearSymplectic::transvection(&s, &v, &G::from(3));
        assert!(LinearSymplectic::new(&s, t.matrix().clone()).is_ok());
    }
}
