//! Canonical text rendering in the expression syntax accepted by
//! [`crate::parse`]. Terms follow the stored graded-lex order, so the
//! output is byte-stable and re-parses to the identical value.

use crate::field::Field;
use crate::poly::Polynomial;
use crate::ratfn::RationalFunction;
use crate::series::HSeries;

struct SignedTerm {
    negative: bool,
    body: String,
}

fn monomial_factors(names: &[String], exps: &[u32], out: &mut Vec<String>) {
    for (name, &e) in names.iter().zip(exps) {
        match e {
            0 => {}
            1 => out.push(name.clone()),
            _ => out.push(format!("{name}^{e}")),
        }
    }
}

fn poly_terms<F: Field>(p: &Polynomial<F>, extra: &[String]) -> Vec<SignedTerm> {
    p.terms()
        .iter()
        .map(|(e, c)| {
            let negative = c.is_negative();
            let c = if negative { -c.clone() } else { c.clone() };
            let mut factors = Vec::new();
            monomial_factors(p.vars().names(), e, &mut factors);
            factors.extend(extra.iter().cloned());
            if !c.is_one() || factors.is_empty() {
                let mut s = String::new();
                c.write_factor(&mut s);
                factors.insert(0, s);
            }
            SignedTerm {
                negative,
                body: factors.join("*"),
            }
        })
        .collect()
}

fn ratfn_terms<F: Field>(r: &RationalFunction<F>, extra: &[String]) -> Vec<SignedTerm> {
    if r.den().is_one() {
        return poly_terms(r.num(), extra);
    }
    let (negative, top) = if r.num().is_monomial() {
        let t = poly_terms(r.num(), &[]).pop().expect("one term");
        (t.negative, t.body)
    } else {
        (false, format!("({})", join(poly_terms(r.num(), &[]))))
    };
    let den = r.den();
    let single_power = den.is_monomial()
        && den.lead_coeff().is_one()
        && den
            .lead()
            .is_some_and(|(e, _)| e.iter().filter(|&&k| k > 0).count() == 1);
    let bottom = if single_power {
        join(poly_terms(den, &[]))
    } else {
        format!("({})", join(poly_terms(den, &[])))
    };
    let mut body = format!("{top}/{bottom}");
    for f in extra {
        body.push('*');
        body.push_str(f);
    }
    vec![SignedTerm { negative, body }]
}

fn join(terms: Vec<SignedTerm>) -> String {
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        match (k, t.negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&t.body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn write_poly<F: Field>(p: &Polynomial<F>, extra: &[String], out: &mut String) {
    out.push_str(&join(poly_terms(p, extra)));
}

pub(crate) fn write_ratfn<F: Field>(r: &RationalFunction<F>, extra: &[String], out: &mut String) {
    out.push_str(&join(ratfn_terms(r, extra)));
}

fn h_power(k: usize) -> Vec<String> {
    match k {
        0 => vec![],
        1 => vec!["h".to_string()],
        _ => vec![format!("h^{k}")],
    }
}

pub(crate) fn series_to_string<F: Field>(s: &HSeries<F>) -> String {
    let terms = s
        .coeffs()
        .iter()
        .enumerate()
        .flat_map(|(k, c)| ratfn_terms(c, &h_power(k)))
        .collect();
    join(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;
    use crate::{Field, GaussianRational as G};

    #[test]
    fn golden_renderings() {
        let vars = Vars::new(["z", "p"]);
        let z = RationalFunction::<G>::var(&vars, 0);
        let p = RationalFunction::<G>::var(&vars, 1);
        let one = RationalFunction::one(&vars);
        let c0 = &(&z * &z) * &p;
        let c1 = z.scale(&-G::i());
        let c2 = (&one / &p).scale(&G::from_ratio(-1, 8));
        let s = HSeries::new(vec![c0, c1, c2]).unwrap();
        assert_eq!(s.to_expr_string(), "z^2*p - i*z*h - (1/8)/p*h^2");
    }

    #[test]
    fn compound_denominators_are_parenthesised() {
        let vars = Vars::new(["x", "y"]);
        let x = RationalFunction::<G>::var(&vars, 0);
        let y = RationalFunction::<G>::var(&vars, 1);
        let one = RationalFunction::one(&vars);
        assert_eq!((&one / &(&x * &y)).to_expr_string(), "1/(x*y)");
        assert_eq!((&(&x + &one) / &(&y + &one)).to_expr_string(), "(x + 1)/(y + 1)");
        assert_eq!((-(&x / &y)).to_expr_string(), "-x/y");
        assert_eq!(RationalFunction::<G>::zero(&vars).to_expr_string(), "0");
    }
}
