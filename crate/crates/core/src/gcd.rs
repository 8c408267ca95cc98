//! Multivariate gcd by recursive content / primitive-part reduction.
//!
//! A polynomial in `k` variables is viewed as univariate in a main variable
//! with coefficients in the remaining `k - 1`; contents are gcds in fewer
//! variables and the primitive parts go through a primitive pseudo-remainder
//! sequence. Before any of that, a few cheap exits handle the shapes that
//! dominate star-product workloads: constants, monomials, equal inputs, and
//! coprime pairs certified by a modular image.
//!
//! When two or more variables are shared, pseudo-remainders blow up fast, so
//! the gcd is first attempted by evaluating one shared variable at small
//! integers, taking gcds of the images and interpolating back. The result is
//! kept only if it divides both inputs.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::{Field, Modulus};
use crate::poly::{grlex, Exponents, Polynomial};

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let vars = a.vars();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(vars);
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    let (am, bm) = (a.monic(), b.monic());
    if am == bm {
        return am;
    }
    // Pull out the common monomial factor so that the remaining work sees
    // polynomials with no variable dividing every term.
    let shift_a: Vec<u32> = (0..vars.len()).map(|v| a.min_degree_in(v)).collect();
    let shift_b: Vec<u32> = (0..vars.len()).map(|v| b.min_degree_in(v)).collect();
    if shift_a.iter().chain(&shift_b).any(|&k| k > 0) {
        let common: Vec<u32> = shift_a.iter().zip(&shift_b).map(|(x, y)| *x.min(y)).collect();
        let unit = |s: &[u32]| Polynomial::monomial(vars, s.to_vec(), F::one());
        let ra = am.div_exact(&unit(&shift_a)).expect("monomial content divides");
        let rb = bm.div_exact(&unit(&shift_b)).expect("monomial content divides");
        let g = gcd(&ra, &rb);
        return (&g * &unit(&common)).monic();
    }
    if certified_coprime(&am, &bm) {
        return Polynomial::one(vars);
    }
    if let Some(g) = divides(&bm, &am).or_else(|| divides(&am, &bm)) {
        return g;
    }
    // A common factor cannot involve a variable only one side uses, so that
    // side may be replaced by its coefficients in the variable.
    let lone = (0..vars.len()).find_map(|w| match (am.depends_on(w), bm.depends_on(w)) {
        (true, false) => Some((&am, &bm, w)),
        (false, true) => Some((&bm, &am, w)),
        _ => None,
    });
    if let Some((p, other, w)) = lone {
        let mut coeffs: Vec<_> = p.coeffs_in(w).into_iter().filter(|c| !c.is_zero()).collect();
        coeffs.sort_by_key(|c| c.num_terms());
        let mut acc = other.clone();
        for c in &coeffs {
            acc = gcd(&acc, c);
            if acc.is_one() {
                break;
            }
        }
        return acc;
    }
    let shared: Vec<usize> = (0..vars.len()).filter(|&v| am.depends_on(v)).collect();
    if shared.len() > 1 {
        let y = *shared
            .iter()
            .min_by_key(|&&v| am.degree_in(v).min(bm.degree_in(v)))
            .expect("two shared variables");
        if let Some(g) = interpolation_gcd(&am, &bm, y) {
            return g;
        }
    }
    let v = shared[0];
    let ca = content_in(&am, v);
    let cb = content_in(&bm, v);
    let c = gcd(&ca, &cb);
    let pa = am.div_exact(&ca).expect("content divides");
    let pb = bm.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

/// `Some(monic d)` when `d` divides `n`.
fn divides<F: Field>(d: &Polynomial<F>, n: &Polynomial<F>) -> Option<Polynomial<F>> {
    let vars = d.vars().len();
    if (0..vars).any(|v| d.degree_in(v) > n.degree_in(v)) {
        return None;
    }
    n.div_exact(d).map(|_| d.monic())
}

/// gcd of a monomial with anything: the variables common to every term.
fn monomial_gcd<F: Field>(m: &Polynomial<F>, other: &Polynomial<F>) -> Polynomial<F> {
    let (me, _) = m.lead().expect("nonzero monomial");
    let exps = me
        .iter()
        .enumerate()
        .map(|(v, &k)| k.min(other.min_degree_in(v)))
        .collect();
    Polynomial::monomial(m.vars(), exps, F::one())
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in<F: Field>(p: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let mut coeffs: Vec<_> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    // Sparse coefficients first: they make the running gcd collapse sooner.
    coeffs.sort_by_key(|c| c.num_terms());
    let mut acc = Polynomial::zero(p.vars());
    for c in &coeffs {
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

pub fn primitive_part_in<F: Field>(p: &Polynomial<F>, v: usize) -> Polynomial<F> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
pub fn pseudo_rem<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let db = b.degree_in(v);
    let lb = b.lead_coeff_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let mut shift = vec![0; r.vars().len()];
        shift[v] = dr - db;
        let t = &lr * &b.mul_term(&shift, &F::one());
        r = &(&lb * &r) - &t;
    }
    r
}

/// One primitive pseudo-remainder step; the smaller pair goes back through
/// [`gcd`] so that its cheap exits get another look.
fn primitive_prs<F: Field>(a: Polynomial<F>, b: Polynomial<F>, v: usize) -> Polynomial<F> {
    let (a, b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    if b.degree_in(v) == 0 {
        // b is primitive and free of v, hence constant.
        return Polynomial::one(a.vars());
    }
    let r = pseudo_rem(&a, &b, v);
    if r.is_zero() {
        return b.monic();
    }
    if r.degree_in(v) == 0 {
        return Polynomial::one(a.vars());
    }
    gcd(&b, &primitive_part_in(&r, v))
}

/// Terms of `p` grouped by their exponents outside `y`; each group is a
/// polynomial in `y` alone.
fn coeffs_outside<F: Field>(p: &Polynomial<F>, y: usize) -> BTreeMap<Exponents, Polynomial<F>> {
    let mut groups: BTreeMap<Exponents, Vec<(Exponents, F)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        let mut key = e.clone();
        key[y] = 0;
        let mut ey = vec![0; e.len()];
        ey[y] = e[y];
        groups.entry(key).or_default().push((ey, c.clone()));
    }
    groups
        .into_iter()
        .map(|(k, terms)| (k, Polynomial::from_terms(p.vars(), terms)))
        .collect()
}

/// gcd of the coefficients of `p` over the variables other than `y`.
fn content_outside<F: Field>(p: &Polynomial<F>, y: usize) -> Polynomial<F> {
    let mut coeffs: Vec<_> = coeffs_outside(p, y).into_values().collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut acc = Polynomial::zero(p.vars());
    for c in &coeffs {
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Leading coefficient in the variables other than `y`, as a polynomial in `y`.
fn lead_outside<F: Field>(p: &Polynomial<F>, y: usize) -> Polynomial<F> {
    coeffs_outside(p, y)
        .into_iter()
        .max_by(|a, b| grlex(&a.0, &b.0))
        .map(|(_, c)| c)
        .expect("nonzero polynomial")
}

/// `p` with `y` set to `t`.
fn eval_at<F: Field>(p: &Polynomial<F>, y: usize, t: &F) -> Polynomial<F> {
    let mut powers = vec![F::one()];
    let terms: Vec<_> = p
        .terms()
        .iter()
        .map(|(e, c)| {
            let k = e[y] as usize;
            while powers.len() <= k {
                let next = powers[powers.len() - 1].clone() * t;
                powers.push(next);
            }
            let mut e = e.clone();
            e[y] = 0;
            (e, c.clone() * &powers[k])
        })
        .collect();
    Polynomial::from_terms(p.vars(), terms)
}

/// The polynomial whose value at `y = t_j` is `images[j]`, by Newton
/// interpolation coefficient by coefficient.
fn interpolate<F: Field>(p: &Polynomial<F>, y: usize, points: &[(F, Polynomial<F>)]) -> Polynomial<F> {
    let mut support: BTreeMap<Exponents, Vec<F>> = BTreeMap::new();
    for (j, (_, img)) in points.iter().enumerate() {
        for (e, c) in img.terms() {
            support
                .entry(e.clone())
                .or_insert_with(|| vec![F::zero(); points.len()])[j] = c.clone();
        }
    }
    let ts: Vec<&F> = points.iter().map(|(t, _)| t).collect();
    let mut terms = Vec::new();
    for (e, mut dd) in support {
        // Divided differences in place.
        for level in 1..ts.len() {
            for j in (level..ts.len()).rev() {
                let num = dd[j].clone() - &dd[j - 1];
                let den = ts[j].clone() - ts[j - level];
                dd[j] = num / &den;
            }
        }
        // Horner on the Newton form.
        let mut acc: Vec<F> = vec![dd[ts.len() - 1].clone()];
        for j in (0..ts.len() - 1).rev() {
            let mut next = vec![F::zero(); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= &(a.clone() * ts[j]);
            }
            next[0] += &dd[j];
            acc = next;
        }
        for (k, c) in acc.into_iter().enumerate() {
            let mut e = e.clone();
            e[y] = k as u32;
            terms.push((e, c));
        }
    }
    Polynomial::from_terms(p.vars(), terms)
}

/// gcd through images at `y = 1, 2, 3, ...`, each a gcd in one variable
/// fewer. Images are scaled by the gcd of the leading coefficients so that
/// they interpolate to a multiple of the true gcd; a candidate is accepted
/// only once it divides both inputs. `None` if no candidate verified.
fn interpolation_gcd<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, y: usize) -> Option<Polynomial<F>> {
    let ca = content_outside(a, y);
    let cb = content_outside(b, y);
    let c = gcd(&ca, &cb);
    let a = a.div_exact(&ca)?;
    let b = b.div_exact(&cb)?;
    let (la, lb) = (lead_outside(&a, y), lead_outside(&b, y));
    let gamma = gcd(&la, &lb);
    let needed = (a.degree_in(y).min(b.degree_in(y)) + gamma.degree_in(y)) as usize + 1;
    let mut points: Vec<(F, Polynomial<F>)> = Vec::new();
    let mut lead: Option<Exponents> = None;
    for k in 1..=(4 * needed as i64 + 32) {
        let t = F::from_i64(k);
        let g_t = eval_at(&gamma, y, &t).constant_value().unwrap_or_else(F::zero);
        if g_t.is_zero() || eval_at(&la, y, &t).is_zero() || eval_at(&lb, y, &t).is_zero() {
            continue;
        }
        let img = gcd(&eval_at(&a, y, &t), &eval_at(&b, y, &t));
        if img.is_constant() {
            // The true gcd keeps its leading monomial at this point.
            return Some(c.monic());
        }
        let m = img.lead().expect("nonzero image").0.clone();
        match lead.as_ref().map(|l| grlex(&m, l)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Less) | None => {
                points.clear();
                lead = Some(m);
            }
            Some(Ordering::Equal) => {}
        }
        points.push((t, img.scale(&g_t)));
        if points.len() == needed {
            let h = interpolate(&a, y, &points);
            let h = h.div_exact(&content_outside(&h, y))?.monic();
            if a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                return Some((&c * &h).monic());
            }
            points.clear();
            lead = None;
        }
    }
    None
}

/// Deterministic evaluation points for the modular certificate.
fn point(vars: usize, salt: u64, m: &Modulus) -> Vec<u64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ salt.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    (0..vars)
        .map(|_| {
            state ^= state >> 30;
            state = state.wrapping_mul(0xbf58_476d_1ce4_e5b9);
            state ^= state >> 27;
            state = state.wrapping_mul(0x94d0_49bb_1331_11eb);
            state ^= state >> 31;
            2 + state % (m.prime - 3)
        })
        .collect()
}

/// True only if `a` and `b` provably share no nonconstant factor.
///
/// For each shared variable `v`, every other variable is specialised to a
/// point mod p. If `b`'s image keeps its full degree in `v`, the leading
/// coefficient of any common factor survives too, so a constant image gcd
/// bounds the true gcd's degree in `v` by zero. A `false` answer means
/// "unknown", never "not coprime".
pub fn certified_coprime<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> bool {
    let m = Modulus::cert();
    let n = a.vars().len();
    'vars: for v in 0..n {
        if !(a.depends_on(v) && b.depends_on(v)) {
            continue;
        }
        for salt in 0..3u64 {
            let pt = point(n, salt * 31 + v as u64, &m);
            let (Some(ia), Some(ib)) = (a.univariate_image(&m, v, &pt), b.univariate_image(&m, v, &pt)) else {
                return false;
            };
            let full = ib.len() - 1 == b.degree_in(v) as usize || ia.len() - 1 == a.degree_in(v) as usize;
            if full && univariate_gcd_degree(ia, ib, &m) == 0 {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, m: &Modulus) -> usize {
    fn trim(p: &mut Vec<u64>) {
        while p.len() > 1 && *p.last().unwrap() == 0 {
            p.pop();
        }
    }
    let is_zero = |p: &[u64]| p.len() == 1 && p[0] == 0;
    trim(&mut a);
    trim(&mut b);
    if is_zero(&a) || is_zero(&b) {
        // A side vanished identically at the point; report a positive degree
        // so the caller does not certify.
        return usize::MAX;
    }
    loop {
        if is_zero(&b) {
            return a.len() - 1;
        }
        let db = b.len() - 1;
        let inv = m.inv(b[db]);
        while !is_zero(&a) && a.len() > db {
            let da = a.len() - 1;
            let q = m.mul(a[da], inv);
            for k in 0..=db {
                a[da - db + k] = m.sub(a[da - db + k], m.mul(q, b[k]));
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// `lcm` made monic.
pub fn lcm<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;
    use crate::GaussianRational as G;

    fn vars() -> Vars {
        Vars::new(["x", "y", "z"])
    }

    fn p(terms: &[([u32; 3], i64)]) -> Polynomial<G> {
        Polynomial::from_terms(&vars(), terms.iter().map(|&(e, c)| (e.to_vec(), G::from(c))))
    }

    #[test]
    fn univariate_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[([2, 0, 0], 1), ([1, 0, 0], 1), ([0, 0, 0], -2)]);
        let b = p(&[([2, 0, 0], 1), ([1, 0, 0], -4), ([0, 0, 0], 3)]);
        assert_eq!(gcd(&a, &b), p(&[([1, 0, 0], 1), ([0, 0, 0], -1)]));
    }

    #[test]
    fn multivariate_gcd_recovers_common_factor() {
        let common = p(&[([1, 1, 0], 1), ([0, 0, 1], 2), ([0, 0, 0], 1)]);
        let f = p(&[([1, 0, 0], 1), ([0, 1, 0], -1)]);
        let g = p(&[([0, 2, 0], 1), ([0, 0, 1], 3)]);
        let a = &common * &f;
        let b = &common * &g;
        assert_eq!(gcd(&a, &b), common.monic());
        assert!(gcd(&f, &g).is_one());
    }

    #[test]
    fn gcd_with_content_only_in_other_variable() {
        // (y+1)*x and (y+1)*(x+1): gcd y+1, a factor free of the main variable.
        let y1 = p(&[([0, 1, 0], 1), ([0, 0, 0], 1)]);
        let a = &y1 * &p(&[([1, 0, 0], 1)]);
        let b = &y1 * &p(&[([1, 0, 0], 1), ([0, 0, 0], 1)]);
        assert_eq!(gcd(&a, &b), y1);
    }

    #[test]
    fn monomial_gcds() {
        let a = p(&[([2, 1, 0], 3)]);
        let b = p(&[([1, 3, 0], 1), ([3, 1, 1], 1)]);
        assert_eq!(gcd(&a, &b), p(&[([1, 1, 0], 1)]));
    }

    #[test]
    fn certificate_never_claims_shared_factor_coprime() {
        let common = p(&[([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 0], 1)]);
        let a = &common * &p(&[([0, 0, 1], 1), ([0, 0, 0], 1)]);
        let b = &common * &p(&[([1, 0, 0], 1), ([0, 0, 0], -5)]);
        assert!(!certified_coprime(&a, &b));
        let c = p(&[([0, 0, 1], 1), ([0, 1, 0], 2), ([0, 0, 0], 7)]);
        assert!(certified_coprime(&common, &c));
    }

    #[test]
    fn powers_share_lower_power() {
        let q = p(&[([1, 0, 0], 1), ([0, 1, 0], 2), ([0, 0, 0], 1)]);
        let r = p(&[([0, 1, 0], 1), ([0, 0, 0], -1)]);
        let a = &q.pow(3) * &r.pow(2);
        let b = &q.pow(2) * &r.pow(4);
        assert_eq!(gcd(&a, &b), (&q.pow(2) * &r.pow(2)).monic());
    }

    #[test]
    fn interpolation_recovers_bivariate_factor() {
        // common = x*y^2 + z*y + 3, with unequal leading coefficients in y.
        let common = p(&[([1, 2, 0], 1), ([0, 1, 1], 1), ([0, 0, 0], 3)]);
        let f = p(&[([2, 1, 0], 2), ([0, 0, 1], 1), ([0, 0, 0], -1)]);
        let g = p(&[([1, 1, 1], 1), ([1, 0, 0], 5)]);
        let a = &common * &f;
        let b = &common * &g;
        let found = interpolation_gcd(&a, &b, 1).expect("interpolation succeeds");
        assert_eq!(found.monic(), common.monic());
        assert_eq!(gcd(&a, &b), common.monic());
    }
}
