//! The `d`-fold product of cotangent charts together with a flat factor of
//! dimension `2 d (r - 1)`, the permutation action of `S_d` on the factors,
//! and the star product on permutation-invariant series.

use std::fmt;

use num_traits::Zero;

use crate::atlas::conjugated_star;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, GaussianRational as G};
use crate::geometry::SigmaMap;
use crate::moyal::{MoyalContext, SymplecticSpace};
use crate::poly::Vars;
use crate::series::HSeries;

/// Coordinates `z1, p1, ..., zd, pd, u1, v1, ..., um, vm` with
/// `m = d (r - 1)`; the form is `dp_i ^ dz_i` on each cotangent factor and
/// `du_j ^ dv_j` on the flat factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductContext {
    pub d: usize,
    pub r: usize,
    pub chart: String,
    pub order: usize,
    vars: Vars,
    sigma: SigmaMap,
}

impl ProductContext {
    pub fn new(d: usize, r: usize, order: usize) -> Result<Self> {
        if d == 0 || r == 0 {
            return Err(Error::Usage("d and r must be positive".into()));
        }
        let m = d * (r - 1);
        let mut names = Vec::new();
        let mut source = Vec::new();
        for i in 1..=d {
            names.extend([format!("z{i}"), format!("p{i}")]);
            source.extend([format!("x{i}"), format!("y{i}")]);
        }
        for j in 1..=m {
            names.extend([format!("u{j}"), format!("v{j}")]);
            source.extend([format!("u{j}"), format!("v{j}")]);
        }
        let vars = Vars::new(names);
        let pairs = (0..d).map(|i| ([2 * i, 2 * i + 1], [2 * i, 2 * i + 1])).collect();
        let passthrough = (2 * d..2 * d + 2 * m).map(|k| (k, k)).collect();
        let sigma = SigmaMap::new(Vars::new(source), vars.clone(), pairs, passthrough);
        Ok(ProductContext {
            d,
            r,
            chart: "A".into(),
            order,
            vars,
            sigma,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Number of flat pairs.
    pub fn flat_pairs(&self) -> usize {
        self.d * (self.r - 1)
    }

    /// The block form on the product coordinates.
    pub fn space<F: Field>(&self) -> SymplecticSpace<F> {
        let mut space: Option<SymplecticSpace<F>> = None;
        let names = self.vars.names();
        for i in 0..self.d {
            let block = SymplecticSpace::cotangent_chart(&names[2 * i], &names[2 * i + 1]).expect("distinct names");
            space = Some(match space {
                None => block,
                Some(s) => s.block_sum(&block).expect("distinct names"),
            });
        }
        let flat: Vec<_> = (0..self.flat_pairs())
            .map(|j| (names[2 * self.d + 2 * j].clone(), names[2 * self.d + 2 * j + 1].clone()))
            .collect();
        let space = space.expect("d is positive");
        if flat.is_empty() {
            space
        } else {
            space
                .block_sum(&SymplecticSpace::darboux(&flat).expect("distinct names"))
                .expect("distinct names")
        }
    }

    /// The plane coordinates `x_i, y_i` (and the flat pairs) that `sigma`
    /// maps onto this product.
    pub fn sigma(&self) -> &SigmaMap {
        &self.sigma
    }

    fn check(&self, f: &HSeries<impl Field>) -> Result<()> {
        if f.vars() != &self.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }
}

/// One Moyal product on the plane coordinates of every factor, pushed
/// forward factor by factor.
pub fn product_star<F: ComplexField>(ctx: &ProductContext, f: &HSeries<F>, g: &HSeries<F>) -> Result<HSeries<F>> {
    ctx.check(f)?;
    ctx.check(g)?;
    let names = ctx.sigma.source().names();
    let pairs: Vec<_> = names.chunks(2).map(|c| (c[0].as_str(), c[1].as_str())).collect();
    let space = SymplecticSpace::darboux(&pairs)?;
    conjugated_star(&ctx.sigma, &MoyalContext::new(space, ctx.order), f, g)
}

/// Checks that `perm` lists `1..=d` in some order.
fn check_perm(d: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; d];
    if perm.len() != d {
        return Err(Error::BadPermutation(d));
    }
    for &k in perm {
        if k == 0 || k > d || seen[k - 1] {
            return Err(Error::BadPermutation(d));
        }
        seen[k - 1] = true;
    }
    Ok(())
}

/// Renames `z_i -> z_perm(i)`, `p_i -> p_perm(i)`; `perm` is one-based.
pub fn permute<F: Field>(ctx: &ProductContext, perm: &[usize], f: &HSeries<F>) -> Result<HSeries<F>> {
    ctx.check(f)?;
    check_perm(ctx.d, perm)?;
    let mut map: Vec<usize> = (0..ctx.vars.len()).collect();
    for (i, &k) in perm.iter().enumerate() {
        map[2 * i] = 2 * (k - 1);
        map[2 * i + 1] = 2 * (k - 1) + 1;
    }
    f.map_coeffs(|c| Ok::<_, Error>(c.reembed(&ctx.vars, &map)))
}

/// All permutations of `1..=d`, in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            cur.push(x);
            rec(left, cur, out);
            cur.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (1..=d).collect(), &mut Vec::new(), &mut out);
    out
}

/// A series on the product, meant to be permutation invariant.
#[derive(Clone, PartialEq, Eq)]
pub struct SymSeries<F> {
    pub value: HSeries<F>,
}

impl<F: Field> fmt::Debug for SymSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymSeries({})", self.value)
    }
}

/// The average of `f` over the `S_d` orbit.
pub fn symmetrize<F: Field>(ctx: &ProductContext, f: &HSeries<F>) -> Result<SymSeries<F>> {
    ctx.check(f)?;
    let perms = permutations(ctx.d);
    let mut acc = HSeries::zero(&ctx.vars, f.order());
    for perm in &perms {
        acc = acc.add(&permute(ctx, perm, f)?)?;
    }
    let count = F::from_i64(perms.len() as i64);
    Ok(SymSeries {
        value: acc.scale(&count.inv()),
    })
}

/// Invariance under the adjacent transpositions, which generate `S_d`.
pub fn is_invariant<F: Field>(ctx: &ProductContext, f: &HSeries<F>) -> Result<bool> {
    ctx.check(f)?;
    for i in 1..ctx.d {
        let mut perm: Vec<usize> = (1..=ctx.d).collect();
        perm.swap(i - 1, i);
        if &permute(ctx, &perm, f)? != f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The star product on invariant series.
pub fn invariant_star<F: ComplexField>(
    ctx: &ProductContext,
    f: &SymSeries<F>,
    g: &SymSeries<F>,
) -> Result<SymSeries<F>> {
    for s in [f, g] {
        if !is_invariant(ctx, &s.value)? {
            return Err(Error::NotInvariant);
        }
    }
    Ok(SymSeries {
        value: product_star(ctx, &f.value, &g.value)?,
    })
}

/// A point of the open cell: `d` distinct support points with nonzero
/// covectors, and `d (r - 1)` flat pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotCellPoint {
    pub support: Vec<G>,
    pub covectors: Vec<G>,
    pub flat: Vec<(G, G)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointIssue {
    /// One-based positions of equal support points.
    DuplicateSupport(usize, usize),
    /// One-based position of a zero covector.
    ZeroCovector(usize),
    Shape(String),
}

impl fmt::Display for PointIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointIssue::DuplicateSupport(i, j) => write!(f, "DuplicateSupport: z{i} = z{j}"),
            PointIssue::ZeroCovector(i) => write!(f, "ZeroCovector: p{i} = 0"),
            PointIssue::Shape(msg) => write!(f, "Shape: {msg}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointReport {
    pub issues: Vec<PointIssue>,
}

impl PointReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn quot_point_validate(pt: &QuotCellPoint) -> PointReport {
    let mut issues = Vec::new();
    let d = pt.support.len();
    if d == 0 {
        issues.push(PointIssue::Shape("empty support".into()));
    }
    if pt.covectors.len() != d {
        issues.push(PointIssue::Shape(format!(
            "{} covectors for {d} support points",
            pt.covectors.len()
        )));
    }
    if d > 0 && pt.flat.len() % d != 0 {
        issues.push(PointIssue::Shape(format!(
            "{} flat pairs is not a multiple of {d}",
            pt.flat.len()
        )));
    }
    for i in 0..d {
        for j in i + 1..d {
            if pt.support[i] == pt.support[j] {
                issues.push(PointIssue::DuplicateSupport(i + 1, j + 1));
            }
        }
    }
    for (i, p) in pt.covectors.iter().enumerate() {
        if p.is_zero() {
            issues.push(PointIssue::ZeroCovector(i + 1));
        }
    }
    PointReport { issues }
}

/// The support points as a sorted multiset.
pub fn support_divisor(pt: &QuotCellPoint) -> Result<Vec<G>> {
    let report = quot_point_validate(pt);
    if let Some(issue) = report.issues.first() {
        return Err(Error::InvalidPoint(issue.to_string()));
    }
    let mut out = pt.support.clone();
    out.sort_by(|a, b| (&a.re, &a.im).cmp(&(&b.re, &b.im)));
    Ok(out)
}
