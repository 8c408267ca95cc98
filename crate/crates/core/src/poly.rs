//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms are kept sorted descending in graded-lexicographic order over the
//! declared variable order, with no zero coefficients. That ordering fixes
//! both the canonical printing and the leading term.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Modulus};

pub type Exponents = Vec<u32>;

/// An ordered, shared list of variable names.
#[derive(Clone, Eq)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn has_duplicates(&self) -> Option<&str> {
        self.0
            .iter()
            .enumerate()
            .find(|(k, v)| self.0[..*k].contains(v))
            .map(|(_, v)| v.as_str())
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Graded lexicographic comparison: total degree first, then the exponent of
/// the earliest variable.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F> {
    vars: Vars,
    terms: Vec<(Exponents, F)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Vars, c: F) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.push((vec![0; vars.len()], c));
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn monomial(vars: &Vars, exps: Exponents, c: F) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.push((exps, c));
        }
        p
    }

    /// The variable at position `idx`.
    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, e, F::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.require(name)?))
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, F)>,
    {
        let mut acc: HashMap<Exponents, F> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            match acc.get_mut(&e) {
                Some(slot) => *slot += &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Self::from_map(vars, acc)
    }

    fn from_map(vars: &Vars, acc: HashMap<Exponents, F>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| grlex(&b.0, &a.0));
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> &[(Exponents, F)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.as_slice() {
            [] => true,
            [(e, _)] => e.iter().all(|&k| k == 0),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.first().is_some_and(|(_, c)| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<F> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.first().map_or_else(F::zero, |(_, c)| c.clone()))
    }

    pub fn lead(&self) -> Option<(&Exponents, &F)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn lead_coeff(&self) -> F {
        self.terms.first().map_or_else(F::zero, |(_, c)| c.clone())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| e.iter().sum())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    /// Smallest exponent of `v` over all terms.
    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).min().unwrap_or(0)
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[v] > 0)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.clone() * c)).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Multiplies by `c * x^shift`.
    pub fn mul_term(&self, shift: &[u32], c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| {
                    let e = e.iter().zip(shift).map(|(a, b)| a + b).collect();
                    (e, k.clone() * c)
                })
                .collect(),
        }
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "polynomial variable sets differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    /// `self + sign * other`, by a sorted merge.
    fn merge(&self, other: &Self, negate: bool) -> Self {
        self.check_vars(other);
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some((ea, _)), Some((eb, _))) => grlex(ea, eb),
            };
            match ord {
                Ordering::Greater => terms.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let (e, c) = b.next().unwrap();
                    terms.push((e.clone(), if negate { -c.clone() } else { c.clone() }));
                }
                Ordering::Equal => {
                    let (e, ca) = a.next().unwrap();
                    let (_, cb) = b.next().unwrap();
                    let c = if negate { ca.clone() - cb } else { ca.clone() + cb };
                    if !c.is_zero() {
                        terms.push((e.clone(), c));
                    }
                }
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        // Lowering one coordinate of every surviving term keeps grlex order.
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[v] > 0)
            .map(|(e, c)| {
                let mut e = e.clone();
                let k = e[v];
                e[v] -= 1;
                (e, c.clone() * &F::from_i64(k as i64))
            })
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_vars(divisor);
        let (dl, dc) = divisor.lead().expect("division by the zero polynomial");
        if divisor.is_monomial() {
            let inv = dc.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                let q = e
                    .iter()
                    .zip(dl)
                    .map(|(a, b)| a.checked_sub(*b))
                    .collect::<Option<Vec<_>>>()?;
                terms.push((q, c.clone() * &inv));
            }
            return Some(Polynomial {
                vars: self.vars.clone(),
                terms,
            });
        }
        let dc_inv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rl, rc)) = rem.lead() {
            let shift = rl
                .iter()
                .zip(dl)
                .map(|(a, b)| a.checked_sub(*b))
                .collect::<Option<Vec<_>>>()?;
            let c = rc.clone() * &dc_inv;
            rem = rem.merge(&divisor.mul_term(&shift, &c), true);
            quot.push((shift, c));
        }
        Some(Self::from_terms(&self.vars, quot))
    }

    /// Coefficients with respect to `v`: entry `k` is the coefficient of
    /// `v^k`, itself a polynomial (in the same variable set) free of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Exponents, F)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            buckets[k].push((e2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|terms| {
                // Zeroing one coordinate keeps the relative grlex order of
                // terms that shared that exponent.
                Polynomial {
                    vars: self.vars.clone(),
                    terms,
                }
            })
            .collect()
    }

    /// Leading coefficient with respect to `v`.
    pub fn lead_coeff_in(&self, v: usize) -> Self {
        self.coeffs_in(v).pop().unwrap_or_else(|| Self::zero(&self.vars))
    }

    /// Substitutes `-x` for every variable `x` flagged in `negate`.
    pub fn reflect(&self, negate: &[bool]) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let odd = e.iter().zip(negate).filter(|(k, n)| **n && *k % 2 == 1).count();
                    (e.clone(), if odd % 2 == 1 { -c.clone() } else { c.clone() })
                })
                .collect(),
        }
    }

    /// Rewrites into another variable set. `map[k]` is the target index of
    /// source variable `k`; the map must be injective.
    pub fn reembed(&self, target: &Vars, map: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut t = vec![0; target.len()];
            for (k, &x) in e.iter().enumerate() {
                t[map[k]] += x;
            }
            (t, c.clone())
        });
        Self::from_terms(target, terms)
    }

    /// Reduces mod `m` and evaluates every variable except `keep` at
    /// `point`, giving a dense univariate image (lowest degree first).
    pub(crate) fn univariate_image(&self, m: &Modulus, keep: usize, point: &[u64]) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.degree_in(keep) as usize + 1];
        for (e, c) in &self.terms {
            let mut v = c.reduce(m)?;
            for (k, &x) in e.iter().enumerate() {
                if k != keep && x > 0 {
                    v = m.mul(v, crate::field::pow_mod(point[k], x as u64, m.prime));
                }
            }
            let slot = &mut out[e[keep] as usize];
            *slot = m.add(*slot, v);
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        Some(out)
    }
}

impl<'a, F: Field> Add for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.merge(rhs, false)
    }
}

impl<'a, F: Field> Sub for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.merge(rhs, true)
    }
}

impl<'a, F: Field> Mul for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.check_vars(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        if rhs.is_monomial() {
            let (e, c) = &rhs.terms[0];
            return self.mul_term(e, c);
        }
        if self.is_monomial() {
            let (e, c) = &self.terms[0];
            return rhs.mul_term(e, c);
        }
        let mut acc: HashMap<Exponents, F> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca.clone() * cb;
                match acc.get_mut(&e) {
                    Some(slot) => *slot += &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Polynomial::from_map(&self.vars, acc)
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            vars: self.vars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<F: Field> Polynomial<F> {
    /// Expression-syntax rendering, e.g. `x^2*y - (1/2)*i*y + 3`.
    pub fn to_expr_string(&self) -> String {
        let mut out = String::new();
        crate::format::write_poly(self, &[], &mut out);
        out
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_expr_string())
    }
}
