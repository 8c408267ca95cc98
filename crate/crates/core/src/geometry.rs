//! Chart-level geometry: differential forms with rational coefficients, the
//! quadratic symplectomorphism `sigma(x, y) = (x/y, -y^2/2)` from the plane
//! modulo `(x, y) -> (-x, -y)` onto the cotangent chart `(z, p)`, and
//! cotangent lifts of Mobius maps.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Polynomial, Vars};
use crate::ratfn::RationalFunction;

/// A differential form of degree 0, 1 or 2. Components are keyed by strictly
/// increasing index tuples; zero components are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ChartForm<F> {
    vars: Vars,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, RationalFunction<F>>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a
/// repeated index.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                negative = !negative;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl<F: Field> ChartForm<F> {
    /// Sums `coeff * dv_{i1} ^ ... ^ dv_{ik}` over arbitrary index tuples.
    pub fn new<I>(vars: &Vars, degree: usize, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, RationalFunction<F>)>,
    {
        assert!(degree <= 2 && degree <= vars.len(), "form degree out of range");
        let mut form = ChartForm {
            vars: vars.clone(),
            degree,
            coeffs: BTreeMap::new(),
        };
        for (mut idx, c) in components {
            assert_eq!(idx.len(), degree, "index tuple length");
            if c.vars() != vars {
                return Err(Error::VariableMismatch);
            }
            let Some(negative) = sort_sign(&mut idx) else {
                continue;
            };
            form.accumulate(idx, if negative { -c } else { c });
        }
        Ok(form)
    }

    fn accumulate(&mut self, idx: Vec<usize>, c: RationalFunction<F>) {
        let sum = match self.coeffs.remove(&idx) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(idx, sum);
        }
    }

    pub fn function(f: RationalFunction<F>) -> Self {
        let vars = f.vars().clone();
        Self::new(&vars, 0, [(vec![], f)]).expect("single component")
    }

    /// `dv` for the variable at `idx`.
    pub fn differential(vars: &Vars, idx: usize) -> Self {
        Self::new(vars, 1, [(vec![idx], RationalFunction::one(vars))]).expect("single component")
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Component on the increasing tuple `idx`.
    pub fn coeff(&self, idx: &[usize]) -> RationalFunction<F> {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    pub fn components(&self) -> impl Iterator<Item = (&[usize], &RationalFunction<F>)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars || self.degree != other.degree {
            return Err(Error::VariableMismatch);
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.accumulate(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Multiplication by a function.
    pub fn scale(&self, f: &RationalFunction<F>) -> Self {
        let comps = self.coeffs.iter().map(|(k, v)| (k.clone(), v * f));
        Self::new(&self.vars, self.degree, comps).expect("same variables")
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        if self.degree + other.degree > 2 {
            return Err(Error::DegreeTooHigh);
        }
        let mut comps = Vec::new();
        for (a, f) in &self.coeffs {
            for (b, g) in &other.coeffs {
                comps.push(([a.as_slice(), b.as_slice()].concat(), f * g));
            }
        }
        Self::new(&self.vars, self.degree + other.degree, comps)
    }
}

impl<F: Field> fmt::Debug for ChartForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.vars.names();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                let d: Vec<String> = idx.iter().map(|&k| format!("d{}", names[k])).collect();
                format!("({c}) {}", d.join("^"))
            })
            .collect();
        write!(f, "ChartForm[{}]({})", self.degree, parts.join(" + "))
    }
}

pub fn exterior_derivative<F: Field>(w: &ChartForm<F>) -> Result<ChartForm<F>> {
    if w.degree >= 2 {
        return Err(Error::DegreeTooHigh);
    }
    let n = w.vars.len();
    let mut comps = Vec::new();
    for (idx, c) in &w.coeffs {
        for v in 0..n {
            let dc = c.derivative(v);
            if !dc.is_zero() {
                let mut k = vec![v];
                k.extend_from_slice(idx);
                comps.push((k, dc));
            }
        }
    }
    ChartForm::new(&w.vars, w.degree + 1, comps)
}

/// Pulls `w` back along `v -> bindings[v]`. Every variable of `w` must be
/// bound; the bound values share one target variable set.
pub fn pullback_form<F: Field>(w: &ChartForm<F>, bindings: &[(&str, RationalFunction<F>)]) -> Result<ChartForm<F>> {
    let values = w
        .vars
        .names()
        .iter()
        .map(|name| {
            bindings
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::UnknownVariable(name.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let target = match values.first() {
        Some(v) => v.vars().clone(),
        None => return Ok(w.clone()),
    };
    if values.iter().any(|v| v.vars() != &target) {
        return Err(Error::VariableMismatch);
    }
    // The pulled-back differentials d(values[j]).
    let differentials: Vec<ChartForm<F>> = values
        .iter()
        .map(|v| exterior_derivative(&ChartForm::function(v.clone())))
        .collect::<Result<_>>()?;
    let mut out = ChartForm::new(&target, w.degree, Vec::new())?;
    for (idx, c) in &w.coeffs {
        let mut term = ChartForm::function(c.substitute(&values)?);
        for &j in idx {
            term = term.wedge(&differentials[j])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The tautological one-form `p dz` on the chart `(z, p)`.
pub fn tautological_form<F: Field>(chart: &Vars) -> ChartForm<F> {
    ChartForm::differential(chart, 0).scale(&RationalFunction::var(chart, 1))
}

/// `dp ^ dz = d(p dz)` on the chart `(z, p)`.
pub fn liouville_symplectic<F: Field>(chart: &Vars) -> ChartForm<F> {
    exterior_derivative(&tautological_form(chart)).expect("one-form")
}

/// The names `(x, y)` of the plane that `sigma` starts from.
pub fn plane_vars() -> Vars {
    Vars::new(["x", "y"])
}

/// `sigma` on several factors at once. Each pair `(x_j, y_j)` of the source
/// maps to `(z_j, p_j) = (x_j/y_j, -y_j^2/2)` of the target; other listed
/// variables pass through unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaMap {
    source: Vars,
    target: Vars,
    /// (x, y) in the source, (z, p) in the target.
    pairs: Vec<([usize; 2], [usize; 2])>,
    passthrough: Vec<(usize, usize)>,
}

impl SigmaMap {
    /// Every source variable must be claimed by exactly one pair or
    /// passthrough, and likewise for the target.
    pub fn new(
        source: Vars,
        target: Vars,
        pairs: Vec<([usize; 2], [usize; 2])>,
        passthrough: Vec<(usize, usize)>,
    ) -> Self {
        let mut s: Vec<usize> = pairs.iter().flat_map(|(a, _)| *a).collect();
        let mut t: Vec<usize> = pairs.iter().flat_map(|(_, b)| *b).collect();
        s.extend(passthrough.iter().map(|&(a, _)| a));
        t.extend(passthrough.iter().map(|&(_, b)| b));
        s.sort_unstable();
        t.sort_unstable();
        assert!(
            s == (0..source.len()).collect::<Vec<_>>() && t == (0..target.len()).collect::<Vec<_>>(),
            "sigma map must partition both variable sets"
        );
        SigmaMap {
            source,
            target,
            pairs,
            passthrough,
        }
    }

    /// The single-factor map from `(x, y)` onto a two-variable chart.
    pub fn single(chart: &Vars) -> Self {
        assert_eq!(chart.len(), 2, "a cotangent chart has two coordinates");
        SigmaMap::new(plane_vars(), chart.clone(), vec![([0, 1], [0, 1])], vec![])
    }

    pub fn source(&self) -> &Vars {
        &self.source
    }

    pub fn target(&self) -> &Vars {
        &self.target
    }

    /// `F -> F o sigma`.
    pub fn pullback<F: Field>(&self, f: &RationalFunction<F>) -> Result<RationalFunction<F>> {
        if f.vars() != &self.target {
            return Err(Error::VariableMismatch);
        }
        let src = &self.source;
        let mut values = vec![RationalFunction::zero(src); self.target.len()];
        let minus_half = F::from_ratio(-1, 2);
        for &([x, y], [z, p]) in &self.pairs {
            let (xv, yv) = (RationalFunction::var(src, x), RationalFunction::var(src, y));
            values[p] = (&yv * &yv).scale(&minus_half);
            values[z] = &xv / &yv;
        }
        for &(a, b) in &self.passthrough {
            values[b] = RationalFunction::var(src, a);
        }
        f.substitute(&values)
    }

    /// The unique `F` with `F o sigma = e`; `NotEven` unless `e` is invariant
    /// under `(x_j, y_j) -> (-x_j, -y_j)` for every pair.
    pub fn pushforward<F: Field>(&self, e: &RationalFunction<F>) -> Result<RationalFunction<F>> {
        if e.vars() != &self.source {
            return Err(Error::VariableMismatch);
        }
        // Numerator and denominator of an even function in lowest terms are
        // each even or each odd in every pair; the odd case shares one
        // spare power of y_j, which is dropped from both.
        let mut shift = vec![None::<u32>; self.pairs.len()];
        for poly in [e.num(), e.den()] {
            for (exps, _) in poly.terms() {
                for (j, &([x, y], _)) in self.pairs.iter().enumerate() {
                    let parity = (exps[x] + exps[y]) % 2;
                    match shift[j] {
                        None => shift[j] = Some(parity),
                        Some(s) if s != parity => return Err(Error::NotEven),
                        _ => {}
                    }
                }
            }
        }
        let shift: Vec<u32> = shift.into_iter().map(|s| s.unwrap_or(0)).collect();
        let minus_two = F::from_i64(-2);
        let push = |poly: &Polynomial<F>| {
            let terms = poly.terms().iter().map(|(exps, c)| {
                let mut t = vec![0; self.target.len()];
                let mut c = c.clone();
                for (j, &([x, y], [z, p])) in self.pairs.iter().enumerate() {
                    // x^a y^b = z^a y^(a+b), and y^2 = -2p.
                    let k = (exps[x] + exps[y] - shift[j]) / 2;
                    t[z] = exps[x];
                    t[p] = k;
                    for _ in 0..k {
                        c = c * &minus_two;
                    }
                }
                for &(a, b) in &self.passthrough {
                    t[b] = exps[a];
                }
                (t, c)
            });
            Polynomial::from_terms(&self.target, terms)
        };
        RationalFunction::new(push(e.num()), push(e.den()))
    }
}

/// A function on the plane invariant under `(x, y) -> (-x, -y)`.
#[derive(Clone, PartialEq, Eq)]
pub struct EvenFunction<F> {
    value: RationalFunction<F>,
}

impl<F: Field> EvenFunction<F> {
    pub fn new(value: RationalFunction<F>) -> Result<Self> {
        let n = value.vars().len();
        if value.reflect(&vec![true; n]) != value {
            return Err(Error::NotEven);
        }
        Ok(EvenFunction { value })
    }

    pub fn value(&self) -> &RationalFunction<F> {
        &self.value
    }

    pub fn into_value(self) -> RationalFunction<F> {
        self.value
    }
}

impl<F: Field> fmt::Debug for EvenFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EvenFunction({})", self.value)
    }
}

/// `F(x/y, -y^2/2)` for `F` on a two-variable cotangent chart.
pub fn sigma_pullback<F: Field>(f: &RationalFunction<F>) -> Result<EvenFunction<F>> {
    let value = SigmaMap::single(f.vars()).pullback(f)?;
    Ok(EvenFunction { value })
}

/// Inverse of [`sigma_pullback`], landing on `chart`.
pub fn sigma_pushforward<F: Field>(e: &EvenFunction<F>, chart: &Vars) -> Result<RationalFunction<F>> {
    if e.value.vars().len() != 2 {
        return Err(Error::VariableMismatch);
    }
    let map = SigmaMap::new(e.value.vars().clone(), chart.clone(), vec![([0, 1], [0, 1])], vec![]);
    map.pushforward(&e.value)
}

/// `z -> (a z + b) / (c z + d)`, up to a nonzero scalar.
#[derive(Clone, Debug)]
pub struct MobiusMap<F> {
    m: [F; 4],
}

impl<F: Field> MobiusMap<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self> {
        let map = MobiusMap { m: [a, b, c, d] };
        if map.det().is_zero() {
            return Err(Error::DegenerateMatrix);
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        MobiusMap {
            m: [F::one(), F::zero(), F::zero(), F::one()],
        }
    }

    /// Entries `[a, b, c, d]` of the stored representative.
    pub fn entries(&self) -> &[F; 4] {
        &self.m
    }

    pub fn det(&self) -> F {
        let [a, b, c, d] = &self.m;
        a.clone() * d - b.clone() * c
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        MobiusMap {
            m: [
                a.clone() * e + &(b.clone() * g),
                a.clone() * f + &(b.clone() * h),
                c.clone() * e + &(d.clone() * g),
                c.clone() * f + &(d.clone() * h),
            ],
        }
    }

    /// The adjugate, which is inverse up to scalar.
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m.clone();
        MobiusMap { m: [d, -b, -c, a] }
    }

    pub fn scale(&self, s: &F) -> Result<Self> {
        let [a, b, c, d] = self.m.clone();
        Self::new(a * s, b * s, c * s, d * s)
    }

    /// The same map with determinant one, when `det` has a square root in
    /// the scalar field.
    pub fn normalized(&self, sqrt: impl Fn(&F) -> Option<F>) -> Option<Self> {
        let r = sqrt(&self.det())?;
        self.scale(&r.inv()).ok()
    }

    /// `(a z + b) / (c z + d)` for a function `z`.
    pub fn apply(&self, z: &RationalFunction<F>) -> Result<RationalFunction<F>> {
        let [a, b, c, d] = &self.m;
        let one = RationalFunction::one(z.vars());
        let num = &z.scale(a) + &one.scale(b);
        let den = &z.scale(c) + &one.scale(d);
        num.checked_div(&den)
    }
}

impl<F: Field> PartialEq for MobiusMap<F> {
    /// Projective equality: the representatives are proportional.
    fn eq(&self, other: &Self) -> bool {
        (0..4).all(|i| (i + 1..4).all(|j| self.m[i].clone() * &other.m[j] == self.m[j].clone() * &other.m[i]))
    }
}

impl<F: Field> Eq for MobiusMap<F> {}

/// Images of the chart coordinates under the cotangent lift of `g`:
/// `z -> (a z + b)/(c z + d)`, `p -> p (c z + d)^2 / (a d - b c)`.
/// The variables at `z` and `p` are replaced; every other variable of
/// `vars` maps to itself.
pub fn cotangent_lift_in<F: Field>(g: &MobiusMap<F>, vars: &Vars, z: usize, p: usize) -> Vec<RationalFunction<F>> {
    let [_, _, c, d] = &g.m;
    let zv = RationalFunction::var(vars, z);
    let pv = RationalFunction::var(vars, p);
    let jac = &zv.scale(c) + &RationalFunction::constant(vars, d.clone());
    let mut images: Vec<_> = (0..vars.len()).map(|k| RationalFunction::var(vars, k)).collect();
    images[z] = g.apply(&zv).expect("(c, d) is not zero");
    images[p] = (&(&pv * &jac) * &jac).scale(&g.det().inv());
    images
}

/// Cotangent lift on a two-variable chart `(z, p)`.
pub fn cotangent_lift<F: Field>(g: &MobiusMap<F>, chart: &Vars) -> [RationalFunction<F>; 2] {
    let [z, p]: [_; 2] = cotangent_lift_in(g, chart, 0, 1)
        .try_into()
        .unwrap_or_else(|_| panic!("a cotangent chart has two coordinates"));
    [z, p]
}
