//! Rational functions in canonical form: numerator and denominator coprime,
//! denominator monic under graded-lex. Equal values have equal
//! representations, so `==` is value equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcd::gcd;
use crate::poly::{Polynomial, Vars};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction<F> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    /// Canonical form of `num / den`.
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.vars() != den.vars() {
            return Err(Error::VariableMismatch);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        if let Some(c) = den.constant_value() {
            return RationalFunction {
                num: num.scale(&c.inv()),
                den: Polynomial::one(den.vars()),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::monic_den(num, den)
    }

    /// Rescales so the denominator is monic; assumes the pair is coprime.
    fn monic_den(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        let lc = den.lead_coeff();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.inv();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero(vars: &Vars) -> Self {
        RationalFunction {
            num: Polynomial::zero(vars),
            den: Polynomial::one(vars),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn constant(vars: &Vars, c: F) -> Self {
        RationalFunction {
            num: Polynomial::constant(vars, c),
            den: Polynomial::one(vars),
        }
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        Polynomial::var(vars, idx).into()
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.require(name)?))
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.num.depends_on(v) || self.den.depends_on(v)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        // Powers of a coprime pair stay coprime.
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Partial derivative with respect to the variable at index `v`.
    pub fn derivative(&self, v: usize) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return dn.into();
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return RationalFunction {
                num: dn,
                den: self.den.clone(),
            };
        }
        // (n/d)' = (n'd - nd')/d^2. A factor of d can divide the partial
        // d' (x divides d/dy of xy), so the numerator may share d^2 entirely.
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::over_powers(top, &[(&self.den, 2)])
    }

    pub fn derivative_named(&self, name: &str) -> Result<Self> {
        Ok(self.derivative(self.vars().require(name)?))
    }

    /// Composition: every variable of `self` is replaced by the matching
    /// entry of `values` (one per variable, all over a common target set).
    pub fn substitute(&self, values: &[Self]) -> Result<Self> {
        assert_eq!(values.len(), self.vars().len(), "one value per variable");
        let target = match values.first() {
            Some(v) => v.vars().clone(),
            None => return Ok(self.clone()),
        };
        if values.iter().any(|v| v.vars() != &target) {
            return Err(Error::VariableMismatch);
        }
        let (nn, nd) = eval_poly(&self.num, values, &target);
        let (dn, dd) = eval_poly(&self.den, values, &target);
        if dn.is_zero() {
            return Err(Error::SubstitutionPole);
        }
        // num/den = (nn/nd) / (dn/dd) = nn*dd / (nd*dn); nd and dd are
        // products of powers of the binding denominators.
        let (mut top, mut bottom) = (nn, dn);
        for (k, value) in values.iter().enumerate() {
            let (a, b) = (nd[k], dd[k]);
            if b > a {
                top = &top * &value.den.pow(b - a);
            } else if a > b {
                bottom = &bottom * &value.den.pow(a - b);
            }
        }
        Ok(Self::normalize(top, bottom))
    }

    /// Substitution by variable name; unbound variables map to themselves.
    pub fn substitute_named(&self, bindings: &[(&str, Self)], target: &Vars) -> Result<Self> {
        for (name, _) in bindings {
            self.vars().require(name)?;
        }
        let values = self
            .vars()
            .names()
            .iter()
            .map(|name| match bindings.iter().find(|(n, _)| n == name) {
                Some((_, v)) => Ok(v.clone()),
                None => Self::var_named(target, name),
            })
            .collect::<Result<Vec<_>>>()?;
        self.substitute(&values)
    }

    /// `f(-x)` for every flagged variable.
    pub fn reflect(&self, negate: &[bool]) -> Self {
        let num = self.num.reflect(negate);
        let den = self.den.reflect(negate);
        // The denominator's leading coefficient can only flip sign.
        Self::monic_den(num, den)
    }

    pub fn reembed(&self, target: &Vars, map: &[usize]) -> Self {
        Self::monic_den(self.num.reembed(target, map), self.den.reembed(target, map))
    }

    /// `num / prod q^e` for monic bases `q`. Only factors of the bases can
    /// cancel, so each base is divided out of `num` one gcd at a time.
    pub(crate) fn over_powers(mut num: Polynomial<F>, bases: &[(&Polynomial<F>, u32)]) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        let mut den = Polynomial::one(num.vars());
        for &(q, e) in bases {
            let mut left = e;
            while left > 0 {
                let g = gcd(&num, q);
                if g.is_one() {
                    break;
                }
                num = num.div_exact(&g).expect("gcd divides");
                den = &den * &q.div_exact(&g).expect("gcd divides");
                left -= 1;
            }
            den = &den * &q.pow(left);
        }
        Self::monic_den(num, den)
    }

    /// Builds from a coprime pair without re-running gcd. Callers must
    /// guarantee coprimality; the denominator is made monic here.
    pub(crate) fn from_coprime(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        Self::monic_den(num, den)
    }

    pub fn to_expr_string(&self) -> String {
        let mut out = String::new();
        crate::format::write_ratfn(self, &[], &mut out);
        out
    }
}

/// Evaluates `p` at `values` over a common denominator. Returns the
/// numerator and, per variable, the power of that variable's value
/// denominator that was cleared.
fn eval_poly<F: Field>(p: &Polynomial<F>, values: &[RationalFunction<F>], target: &Vars) -> (Polynomial<F>, Vec<u32>) {
    let degs: Vec<u32> = (0..values.len()).map(|k| p.degree_in(k)).collect();
    let powers = |f: &dyn Fn(&RationalFunction<F>) -> &Polynomial<F>| -> Vec<Vec<Polynomial<F>>> {
        values
            .iter()
            .zip(&degs)
            .map(|(v, &d)| {
                let base = f(v);
                let mut acc = vec![Polynomial::one(target)];
                for _ in 0..d {
                    let next = acc.last().unwrap() * base;
                    acc.push(next);
                }
                acc
            })
            .collect()
    };
    let num_pows = powers(&|v| &v.num);
    let den_pows = powers(&|v| &v.den);
    let mut acc = Polynomial::zero(target);
    for (e, c) in p.terms() {
        let mut t = Polynomial::constant(target, c.clone());
        for (k, &x) in e.iter().enumerate() {
            let x = x as usize;
            let d = degs[k] as usize;
            if x > 0 {
                t = &t * &num_pows[k][x];
            }
            if d > x && !values[k].den.is_one() {
                t = &t * &den_pows[k][d - x];
            }
        }
        acc = &acc + &t;
    }
    let cleared = degs
        .iter()
        .zip(values)
        .map(|(&d, v)| if v.den.is_one() { 0 } else { d })
        .collect();
    (acc, cleared)
}

impl<F: Field> From<Polynomial<F>> for RationalFunction<F> {
    fn from(num: Polynomial<F>) -> Self {
        let den = Polynomial::one(num.vars());
        RationalFunction { num, den }
    }
}

impl<'a, F: Field> Add for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn add(self, rhs: Self) -> RationalFunction<F> {
        add_sub(self, rhs, false)
    }
}

impl<'a, F: Field> Sub for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn sub(self, rhs: Self) -> RationalFunction<F> {
        add_sub(self, rhs, true)
    }
}

fn add_sub<F: Field>(a: &RationalFunction<F>, b: &RationalFunction<F>, negate: bool) -> RationalFunction<F> {
    let combine = |x: &Polynomial<F>, y: &Polynomial<F>| if negate { x - y } else { x + y };
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate { -b.clone() } else { b.clone() };
    }
    if a.den == b.den {
        let num = combine(&a.num, &b.num);
        if a.den.is_one() {
            return num.into();
        }
        return RationalFunction::normalize(num, a.den.clone());
    }
    if a.den.is_one() {
        // (a*d + c)/d is already reduced when c/d is.
        let num = combine(&(&a.num * &b.den), &b.num);
        return RationalFunction::from_coprime(num, b.den.clone());
    }
    if b.den.is_one() {
        let num = combine(&a.num, &(&b.num * &a.den));
        return RationalFunction::from_coprime(num, a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    if g.is_one() {
        let num = combine(&(&a.num * &b.den), &(&b.num * &a.den));
        return RationalFunction::from_coprime(num, &a.den * &b.den);
    }
    let ad = a.den.div_exact(&g).expect("gcd divides");
    let bd = b.den.div_exact(&g).expect("gcd divides");
    let num = combine(&(&a.num * &bd), &(&b.num * &ad));
    if num.is_zero() {
        return RationalFunction::zero(a.vars());
    }
    // Only factors of g can cancel.
    let g2 = gcd(&num, &g);
    let (num, g) = if g2.is_one() {
        (num, g)
    } else {
        (
            num.div_exact(&g2).expect("gcd divides"),
            g.div_exact(&g2).expect("gcd divides"),
        )
    };
    RationalFunction::from_coprime(num, &(&ad * &bd) * &g)
}

impl<'a, F: Field> Mul for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn mul(self, rhs: Self) -> RationalFunction<F> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num * &rhs.num).into();
        }
        let cancel = |n: &Polynomial<F>, d: &Polynomial<F>| {
            if d.is_one() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
            }
        };
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        RationalFunction::from_coprime(&a * &c, &b * &d)
    }
}

impl<'a, F: Field> Div for &'a RationalFunction<F> {
    type Output = RationalFunction<F>;
    /// Panics on division by zero; see [`RationalFunction::checked_div`].
    fn div(self, rhs: Self) -> RationalFunction<F> {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl<F: Field> Neg for RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.to_expr_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;
    use num_traits::One;

    fn vars() -> Vars {
        Vars::new(["x", "y", "z"])
    }

    fn v(name: &str) -> RationalFunction<G> {
        RationalFunction::var_named(&vars(), name).unwrap()
    }

    fn c(n: i64) -> RationalFunction<G> {
        RationalFunction::constant(&vars(), G::from(n))
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let x = v("x");
        let num = &(&x * &x) - &c(1);
        let den = &x - &c(1);
        let r = RationalFunction::new(num.num().clone(), den.num().clone()).unwrap();
        assert_eq!(r, &x + &c(1));
        assert!(r.is_polynomial());
    }

    #[test]
    fn zero_numerator_is_zero_over_one() {
        let r = RationalFunction::new(Polynomial::zero(&vars()), v("x").num().clone()).unwrap();
        assert!(r.is_zero());
        assert!(r.den().is_one());
    }

    #[test]
    fn partial_derivative_cancels_whole_square() {
        // d/dy of -(x+y)/(xy) = -1/y - 1/x is 1/y^2; the raw quotient is x^2/(xy)^2.
        let (x, y) = (v("x"), v("y"));
        let f = &(-(&x + &y)) / &(&x * &y);
        let d = f.derivative(1);
        assert_eq!(d, (&y * &y).inv().unwrap());
        assert_eq!(d.num(), &Polynomial::one(&vars()));
    }

    #[test]
    fn zero_denominator_rejected() {
        let err = RationalFunction::<G>::new(Polynomial::one(&vars()), Polynomial::zero(&vars()));
        assert_eq!(err, Err(Error::ZeroDenominator));
    }

    #[test]
    fn denominator_is_monic() {
        let r = &c(1) / &(&v("x").scale(&G::from(3)) + &c(2));
        assert!(r.den().lead_coeff().is_one());
        assert_eq!(r.num().constant_value(), Some(G::from_ratio(1, 3)));
    }

    #[test]
    fn derivative_examples() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        assert_eq!((&(&x * &x) * &y).derivative(0), (&x * &y).scale(&G::from(2)));
        // d/dy (x/y) = -x/y^2
        assert_eq!((&x / &y).derivative(1), -(&x / &(&y * &y)));
        // d/dz 1/(z-1) = -1/(z-1)^2
        let zm1 = &z - &c(1);
        assert_eq!((&c(1) / &zm1).derivative(2), -(&c(1) / &(&zm1 * &zm1)));
    }

    #[test]
    fn unknown_variable_in_derivative() {
        assert_eq!(v("x").derivative_named("w"), Err(Error::UnknownVariable("w".into())));
    }

    #[test]
    fn substitution_examples() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let f = &x / &y;
        assert_eq!(f.substitute(&[&z * &y, y.clone(), z.clone()]).unwrap(), z);
        let sq = &x * &x;
        assert_eq!(sq.substitute(&[x.clone(), y.clone(), z.clone()]).unwrap(), sq);
        let inv = &c(1) / &x;
        assert_eq!(
            inv.substitute(&[c(0), y.clone(), z.clone()]),
            Err(Error::SubstitutionPole)
        );
    }

    #[test]
    fn sums_with_shared_denominator_factors() {
        let (x, y) = (v("x"), v("y"));
        let q = &x + &c(1);
        let a = &c(1) / &(&q * &y);
        let b = &c(1) / &(&q * &x);
        // 1/(qy) + 1/(qx) = (x+y)/(qxy)
        let expected = &(&x + &y) / &(&(&q * &x) * &y);
        assert_eq!(&a + &b, expected);
        assert!((&a - &a).is_zero());
        // 1/(x(x+1)) - 1/x + 1/(x+1) = 0
        let s = &(&(&c(1) / &(&x * &q)) - &(&c(1) / &x)) + &(&c(1) / &q);
        assert!(s.is_zero());
    }
}
