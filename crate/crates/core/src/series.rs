//! Truncated formal series `c_0 + c_1 h + ... + c_N h^N` with rational
//! function coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Vars;
use crate::ratfn::RationalFunction;

#[derive(Clone, PartialEq, Eq)]
pub struct HSeries<F> {
    vars: Vars,
    coeffs: Vec<RationalFunction<F>>,
}

impl<F: Field> HSeries<F> {
    /// Series of order `coeffs.len() - 1`. Panics on an empty list; returns
    /// `VariableMismatch` if the coefficients disagree on variables.
    pub fn new(coeffs: Vec<RationalFunction<F>>) -> Result<Self> {
        let vars = coeffs
            .first()
            .expect("a series has at least the h^0 coefficient")
            .vars()
            .clone();
        if coeffs.iter().any(|c| c.vars() != &vars) {
            return Err(Error::VariableMismatch);
        }
        Ok(HSeries { vars, coeffs })
    }

    pub fn zero(vars: &Vars, order: usize) -> Self {
        HSeries {
            vars: vars.clone(),
            coeffs: vec![RationalFunction::zero(vars); order + 1],
        }
    }

    /// `f + 0 h + ... + 0 h^order`.
    pub fn constant(f: RationalFunction<F>, order: usize) -> Self {
        let vars = f.vars().clone();
        let mut coeffs = vec![RationalFunction::zero(&vars); order + 1];
        coeffs[0] = f;
        HSeries { vars, coeffs }
    }

    pub fn one(vars: &Vars, order: usize) -> Self {
        Self::constant(RationalFunction::one(vars), order)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RationalFunction<F>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &RationalFunction<F> {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    /// Drops coefficients above `order`, or pads with zeros up to it.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, RationalFunction::zero(&self.vars));
        HSeries {
            vars: self.vars.clone(),
            coeffs,
        }
    }

    pub fn map_coeffs<E>(
        &self,
        mut f: impl FnMut(&RationalFunction<F>) -> Result<RationalFunction<F>, E>,
    ) -> Result<Self, E>
    where
        E: From<Error>,
    {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>, E>>()?;
        Ok(HSeries::new(coeffs)?)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    /// Sum, truncated at the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(HSeries {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(HSeries {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        HSeries {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|m| {
                (0..=m).fold(RationalFunction::zero(&self.vars), |acc, i| {
                    let (a, b) = (&self.coeffs[i], &other.coeffs[m - i]);
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
            })
            .collect();
        Ok(HSeries {
            vars: self.vars.clone(),
            coeffs,
        })
    }

    /// Coefficient-wise identity of canonical forms through `h^upto`.
    pub fn equal_upto(&self, other: &Self, upto: usize) -> Result<bool> {
        self.check(other)?;
        let order = self.order().min(other.order());
        if upto > order {
            return Err(Error::OrderTooLarge { upto, order });
        }
        Ok(self.coeffs[..=upto] == other.coeffs[..=upto])
    }

    pub fn to_expr_string(&self) -> String {
        crate::format::series_to_string(self)
    }
}

impl<F: Field> From<RationalFunction<F>> for HSeries<F> {
    fn from(f: RationalFunction<F>) -> Self {
        HSeries::constant(f, 0)
    }
}

impl<F: Field> fmt::Display for HSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<F: Field> fmt::Debug for HSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HSeries[order {}]({})", self.order(), self.to_expr_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as G;

    fn xy() -> Vars {
        Vars::new(["x", "y"])
    }

    fn v(name: &str) -> RationalFunction<G> {
        RationalFunction::var_named(&xy(), name).unwrap()
    }

    fn s(cs: Vec<RationalFunction<G>>) -> HSeries<G> {
        HSeries::new(cs).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let vars = xy();
        let one = RationalFunction::one(&vars);
        let zero = RationalFunction::zero(&vars);
        let x = v("x");
        let a = s(vec![one.clone(), x.clone(), zero.clone()]);
        let b = s(vec![one.clone(), -x.clone(), zero.clone()]);
        let expected = s(vec![one, zero, -(&x * &x)]);
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn cauchy_product_by_hand() {
        let (x, y) = (v("x"), v("y"));
        let a = s(vec![x.clone(), y.clone()]);
        let b = s(vec![y.clone(), x.clone()]);
        let expected = s(vec![&x * &y, &(&x * &x) + &(&y * &y)]);
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn unit_and_truncation() {
        let x = v("x");
        let f = s(vec![x.clone(), x.clone(), x.clone()]);
        assert_eq!(f.mul(&HSeries::one(&xy(), 2)).unwrap(), f);
        assert_eq!(f.mul(&HSeries::one(&xy(), 1)).unwrap().order(), 1);
    }

    #[test]
    fn equality_up_to_order() {
        let (x, y) = (v("x"), v("y"));
        let a = s(vec![x.clone(), y.clone(), x.clone()]);
        let b = s(vec![x.clone(), y.clone(), y.clone()]);
        assert!(a.equal_upto(&b, 1).unwrap());
        assert!(!a.equal_upto(&b, 2).unwrap());
        assert_eq!(a.equal_upto(&b, 3), Err(Error::OrderTooLarge { upto: 3, order: 2 }));
        // x * (y/y) canonicalises to x
        let xyy = &(&x * &y) / &y;
        assert!(s(vec![x]).equal_upto(&s(vec![xyy]), 0).unwrap());
    }

    #[test]
    fn mismatched_variables() {
        let other = Vars::new(["z", "p"]);
        let a = HSeries::<G>::one(&xy(), 1);
        let b = HSeries::<G>::one(&other, 1);
        assert_eq!(a.mul(&b), Err(Error::VariableMismatch));
    }
}
