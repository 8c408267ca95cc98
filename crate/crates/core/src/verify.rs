//! Seeded verification suites. Samples are drawn sequentially from one
//! stream, checked in parallel, and reported sorted by description, so a
//! report depends only on the suite, the seed and the sizes.

use std::fmt::{self, Display, Write as _};

use rayon::prelude::*;

use crate::atlas::{
    atlas_validate, chart_independence_check, kchart_space, kchart_star, transport, KChartFunction, ProjectiveAtlas,
};
use crate::error::{Error, Result};
use crate::field::GaussianRational as G;
use crate::geometry::{cotangent_lift, liouville_symplectic, plane_vars, pullback_form, ChartForm, SigmaMap};
use crate::moyal::{apply_symplectic, moyal_star, poisson_bracket, MoyalContext, SymplecticSpace};
use crate::poly::Vars;
use crate::ratfn::RationalFunction;
use crate::rng::Sampler;
use crate::series::HSeries;
use crate::symprod::{invariant_star, is_invariant, product_star, symmetrize, ProductContext, SymSeries};

type RatFn = RationalFunction<G>;
type Series = HSeries<G>;

pub const SUITES: [&str; 9] = [
    "axioms",
    "poisson",
    "associativity",
    "equivariance",
    "lemma1",
    "cocycle",
    "evenness",
    "symmetric",
    "theorem1",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub order: usize,
    pub d: usize,
    pub r: usize,
    pub atlas: ProjectiveAtlas,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 100,
            order: 6,
            d: 2,
            r: 2,
            atlas: ProjectiveAtlas::cp1(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub description: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
}

impl VerificationReport {
    pub fn total(&self) -> usize {
        self.cases.len()
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.total() - self.passed()
    }

    pub fn is_success(&self) -> bool {
        self.failed() == 0
    }
}

impl Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} seed {}", self.suite, self.seed)?;
        for c in &self.cases {
            writeln!(f, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.description)?;
            if let Some(cex) = &c.counterexample {
                writeln!(f, "     {cex}")?;
            }
        }
        write!(
            f,
            "total {} passed {} failed {}",
            self.total(),
            self.passed(),
            self.failed()
        )
    }
}

/// `Ok(None)` passes; `Ok(Some(text))` fails with a counterexample.
type Check = Result<Option<String>>;

fn case(description: String, check: Check) -> Case {
    match check {
        Ok(None) => Case {
            description,
            passed: true,
            counterexample: None,
        },
        Ok(Some(cex)) => Case {
            description,
            passed: false,
            counterexample: Some(cex),
        },
        Err(e) => Case {
            description,
            passed: false,
            counterexample: Some(format!("error: {e}")),
        },
    }
}

fn same<T: PartialEq + Display>(got: &T, want: &T, inputs: &str) -> Option<String> {
    (got != want).then(|| format!("{inputs}: got {got}, expected {want}"))
}

/// First failure among several checks.
fn all(checks: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    checks.into_iter().flatten().next()
}

fn par_cases<T: Sync>(items: &[T], f: impl Fn(usize, &T) -> Vec<Case> + Sync) -> Vec<Case> {
    items.par_iter().enumerate().flat_map_iter(|(k, t)| f(k, t)).collect()
}

fn label(group: &str, check: &str, k: usize) -> String {
    format!("{group} {check} #{k:03}")
}

fn inputs(fs: &[&Series]) -> String {
    let names = ["f", "g", "k"];
    let mut out = String::new();
    for (n, f) in names.iter().zip(fs) {
        if !out.is_empty() {
            out.push_str(", ");
        }
        let _ = write!(out, "{n} = {f}");
    }
    out
}

/// Runs the named suite.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut cases = match name {
        "axioms" => axioms(cfg),
        "poisson" => poisson(cfg),
        "associativity" => associativity(cfg),
        "equivariance" => equivariance(cfg),
        "lemma1" => lemma1(cfg),
        "cocycle" => cocycle(cfg),
        "evenness" => evenness(cfg),
        "symmetric" => symmetric(cfg),
        "theorem1" => theorem1(cfg),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    cases.sort_by(|a, b| a.description.cmp(&b.description));
    Ok(VerificationReport {
        suite: name.to_string(),
        seed: cfg.seed,
        cases,
    })
}

/// The four star-product conditions for one pair: leading term, unit on
/// both sides, and the first-order commutator against `bracket`.
fn star_axioms(
    group: &str,
    k: usize,
    f: &Series,
    g: &Series,
    star: &(dyn Fn(&Series, &Series) -> Result<Series> + Sync),
    bracket: &(dyn Fn(&RatFn, &RatFn) -> Result<RatFn> + Sync),
) -> Vec<Case> {
    let ins = inputs(&[f, g]);
    let one = HSeries::one(f.vars(), f.order());
    let fg = star(f, g);
    let gf = star(g, f);
    let leading = fg.clone().map(|fg| same(fg.coeff(0), &(f.coeff(0) * g.coeff(0)), &ins));
    let left = star(&one, f).map(|s| same(&s, f, &ins));
    let right = star(f, &one).map(|s| same(&s, f, &ins));
    let commutator = (|| -> Check {
        let c = fg?.sub(&gf?)?;
        let want = bracket(f.coeff(0), g.coeff(0))?.scale(&G::i());
        Ok(all([
            (!c.coeff(0).is_zero()).then(|| format!("{ins}: commutator has h^0 term {}", c.coeff(0))),
            same(c.coeff(1), &want, &ins),
        ]))
    })();
    vec![
        case(label(group, "leading-term", k), leading),
        case(label(group, "unit-left", k), left),
        case(label(group, "unit-right", k), right),
        case(label(group, "commutator", k), commutator),
    ]
}

fn zp() -> Vars {
    Vars::new(["z", "p"])
}

fn axioms(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let ctx = MoyalContext::new(SymplecticSpace::flat2(), cfg.order);
    let flat: Vec<_> = (0..cfg.samples)
        .map(|_| {
            let f = HSeries::constant(s.poly_fn(ctx.vars(), 4, 4), cfg.order);
            let g = HSeries::constant(s.poly_fn(ctx.vars(), 4, 4), cfg.order);
            (f, g)
        })
        .collect();
    let k = zp();
    let kctx = MoyalContext::new(kchart_space(&k).expect("chart"), cfg.order);
    let kchart: Vec<_> = (0..cfg.samples / 4)
        .map(|_| {
            let f = HSeries::constant(s.poly_fn(&k, 2, 3), cfg.order);
            let g = HSeries::constant(s.poly_fn(&k, 2, 3), cfg.order);
            (f, g)
        })
        .collect();
    let star = |f: &Series, g: &Series| moyal_star(&ctx, f, g);
    let bracket = |f: &RatFn, g: &RatFn| poisson_bracket(&ctx, f, g);
    let mut out = par_cases(&flat, |i, (f, g)| star_axioms("flat2", i, f, g, &star, &bracket));
    let kstar = |f: &Series, g: &Series| kchart_star(cfg.order, f, g);
    let kbracket = |f: &RatFn, g: &RatFn| poisson_bracket(&kctx, f, g);
    out.extend(par_cases(&kchart, |i, (f, g)| {
        star_axioms("kchart", i, f, g, &kstar, &kbracket)
    }));
    out
}

fn poisson(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let mut out = Vec::new();
    for (group, space) in [("flat2", SymplecticSpace::flat2()), ("flat4", SymplecticSpace::flat(2))] {
        let ctx = MoyalContext::new(space, 0);
        let triples: Vec<_> = (0..cfg.samples)
            .map(|_| {
                let mut draw = || s.poly_fn(ctx.vars(), 3, 4);
                (draw(), draw(), draw())
            })
            .collect();
        out.extend(par_cases(&triples, |i, (f, g, h)| {
            let br = |a: &RatFn, b: &RatFn| poisson_bracket(&ctx, a, b);
            let ins = format!("f = {f}, g = {g}, k = {h}");
            let antisym = (|| -> Check { Ok(same(&br(f, g)?, &-br(g, f)?, &ins)) })();
            let leibniz = (|| -> Check {
                let lhs = br(f, &(g * h))?;
                let rhs = &(&br(f, g)? * h) + &(g * &br(f, h)?);
                Ok(same(&lhs, &rhs, &ins))
            })();
            let jacobi = (|| -> Check {
                let sum = &(&br(f, &br(g, h)?)? + &br(g, &br(h, f)?)?) + &br(h, &br(f, g)?)?;
                Ok((!sum.is_zero()).then(|| format!("{ins}: cyclic sum {sum}")))
            })();
            vec![
                case(label(group, "antisymmetry", i), antisym),
                case(label(group, "leibniz", i), leibniz),
                case(label(group, "jacobi", i), jacobi),
            ]
        }));
    }
    out
}

fn associativity(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let xy = plane_vars();
    let exact: Vec<_> = (0..cfg.samples)
        .map(|_| {
            let mut draw = || s.polynomial(&xy, 3, 3);
            let (f, g, h) = (draw(), draw(), draw());
            let order = [&f, &g, &h]
                .iter()
                .map(|p| p.total_degree().unwrap_or(0) as usize)
                .sum();
            let lift = |p| HSeries::constant(RationalFunction::from(p), order);
            (lift(f), lift(g), lift(h), order)
        })
        .collect();
    let rational: Vec<_> = (0..cfg.samples / 4)
        .map(|_| {
            let mut draw = || HSeries::constant(s.rational(&xy, 2, 2), cfg.order);
            (draw(), draw(), draw())
        })
        .collect();
    let k = zp();
    let kchart: Vec<_> = (0..cfg.samples / 4)
        .map(|_| {
            let mut draw = || HSeries::constant(s.poly_fn(&k, 2, 2), cfg.order);
            (draw(), draw(), draw())
        })
        .collect();
    let assoc =
        |star: &dyn Fn(&Series, &Series) -> Result<Series>, f: &Series, g: &Series, h: &Series, upto: usize| -> Check {
            let lhs = star(&star(f, g)?, h)?;
            let rhs = star(f, &star(g, h)?)?;
            Ok((!lhs.equal_upto(&rhs, upto)?).then(|| format!("{}: {lhs} != {rhs}", inputs(&[f, g, h]))))
        };
    let mut out = par_cases(&exact, |i, (f, g, h, order)| {
        let ctx = MoyalContext::new(SymplecticSpace::flat2(), *order);
        let star = |a: &Series, b: &Series| moyal_star(&ctx, a, b);
        vec![case(label("flat2", "polynomial", i), assoc(&star, f, g, h, *order))]
    });
    let ctx = MoyalContext::new(SymplecticSpace::flat2(), cfg.order);
    out.extend(par_cases(&rational, |i, (f, g, h)| {
        let star = |a: &Series, b: &Series| moyal_star(&ctx, a, b);
        vec![case(label("flat2", "rational", i), assoc(&star, f, g, h, cfg.order))]
    }));
    out.extend(par_cases(&kchart, |i, (f, g, h)| {
        let star = |a: &Series, b: &Series| kchart_star(cfg.order, a, b);
        vec![case(label("kchart", "polynomial", i), assoc(&star, f, g, h, cfg.order))]
    }));
    out
}

fn equivariance(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let mut out = Vec::new();
    for (group, space, count, shears) in [
        ("flat2", SymplecticSpace::flat2(), cfg.samples, 3),
        ("flat4", SymplecticSpace::flat(2), cfg.samples / 4, 4),
    ] {
        let ctx = MoyalContext::new(space, cfg.order);
        let samples: Vec<_> = (0..count)
            .map(|_| {
                let m = s.symplectic(&ctx.space, shears);
                let f = HSeries::constant(s.poly_fn(ctx.vars(), 3, 3), cfg.order);
                let g = HSeries::constant(s.poly_fn(ctx.vars(), 3, 3), cfg.order);
                (m, f, g)
            })
            .collect();
        out.extend(par_cases(&samples, |i, (m, f, g)| {
            let check = (|| -> Check {
                let lhs = moyal_star(&ctx, &apply_symplectic(&ctx, m, f)?, &apply_symplectic(&ctx, m, g)?)?;
                let rhs = apply_symplectic(&ctx, m, &moyal_star(&ctx, f, g)?)?;
                Ok(same(&lhs, &rhs, &format!("{}, M = {:?}", inputs(&[f, g]), m.matrix())))
            })();
            vec![case(label(group, "symplectic", i), check)]
        }));
    }
    out
}

fn lemma1(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let k = zp();
    let xy = plane_vars();
    let sigma = SigmaMap::single(&k);
    let mut out = Vec::new();

    let form = (|| -> Check {
        let images: Vec<_> = ["z", "p"]
            .iter()
            .map(|c| sigma.pullback(&RatFn::var_named(&k, c)?))
            .collect::<Result<_>>()?;
        let pulled = pullback_form(
            &liouville_symplectic(&k),
            &[("z", images[0].clone()), ("p", images[1].clone())],
        )?;
        let area = ChartForm::differential(&xy, 0).wedge(&ChartForm::differential(&xy, 1))?;
        Ok((pulled != area).then(|| format!("pullback of dp^dz is {pulled:?}")))
    })();
    out.push(case("sigma form pullback".into(), form));

    let mats: Vec<_> = (0..cfg.samples).map(|_| s.mobius(3)).collect();
    out.extend(par_cases(&mats, |i, m| {
        let check = (|| -> Check {
            let [a, b, c, d] = m.entries().clone();
            let (x, y) = (RationalFunction::var(&xy, 0), RationalFunction::var(&xy, 1));
            let moved = [&x.scale(&a) + &y.scale(&b), &x.scale(&c) + &y.scale(&d)];
            let lifted = cotangent_lift(m, &k);
            let mut fails = Vec::new();
            for (coord, img) in [0, 1].into_iter().zip(&lifted) {
                let lhs = sigma.pullback(&RationalFunction::var(&k, coord))?.substitute(&moved)?;
                let rhs = sigma.pullback(img)?;
                fails.push(same(&lhs, &rhs, &format!("M = {:?}", m.entries())));
            }
            Ok(all(fails))
        })();
        vec![case(label("sigma", "equivariance", i), check)]
    }));

    let pairs: Vec<_> = (0..cfg.samples / 4)
        .map(|_| {
            let f = s.rational(&k, 2, 3);
            let g = s.poly_fn(&k, 3, 3);
            (f, g, s.mobius(2), s.mobius(2), s.nonzero_param())
        })
        .collect();
    let kctx = MoyalContext::new(kchart_space(&k).expect("chart"), 0);
    let flat = MoyalContext::new(SymplecticSpace::flat2(), 0);
    out.extend(par_cases(&pairs, |i, (f, g, m1, m2, lambda)| {
        let ins = format!("f = {f}, g = {g}");
        let round_trip = (|| -> Check { Ok(same(&sigma.pushforward(&sigma.pullback(f)?)?, f, &ins)) })();
        let bracket = (|| -> Check {
            let flat_br = poisson_bracket(&flat, &sigma.pullback(f)?, &sigma.pullback(g)?)?;
            Ok(same(
                &sigma.pushforward(&flat_br)?,
                &poisson_bracket(&kctx, f, g)?,
                &ins,
            ))
        })();
        let homomorphism = (|| -> Check {
            let outer = cotangent_lift(m1, &k);
            let inner = cotangent_lift(m2, &k);
            let composed = outer.iter().map(|c| c.substitute(&inner)).collect::<Result<Vec<_>>>()?;
            let direct = cotangent_lift(&m1.compose(m2), &k);
            Ok(all(composed.iter().zip(&direct).map(|(a, b)| {
                same(a, b, &format!("M1 = {:?}, M2 = {:?}", m1.entries(), m2.entries()))
            })))
        })();
        let projective = (|| -> Check {
            let scaled = m1.scale(lambda)?;
            let (a, b) = (cotangent_lift(&scaled, &k), cotangent_lift(m1, &k));
            Ok(all(a.iter().zip(&b).map(|(x, y)| {
                same(x, y, &format!("M = {:?}, lambda = {lambda}", m1.entries()))
            })))
        })();
        vec![
            case(label("sigma", "round-trip", i), round_trip),
            case(label("sigma", "bracket", i), bracket),
            case(label("lift", "homomorphism", i), homomorphism),
            case(label("lift", "projective", i), projective),
        ]
    }));
    out
}

fn cocycle(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let atlas = &cfg.atlas;
    let report = atlas_validate(atlas);
    let mut out = vec![case(
        "atlas validation".into(),
        Ok((!report.is_valid()).then(|| {
            report
                .issues
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        })),
    )];
    let overlaps: Vec<(String, String)> = atlas
        .transition_entries()
        .filter(|(a, b, _)| a < b)
        .map(|(a, b, _)| (a.to_string(), b.to_string()))
        .collect();
    for (j, k) in overlaps {
        let vars = match atlas.chart(&j) {
            Ok(c) => c.vars.clone(),
            Err(e) => {
                out.push(case(format!("{j} -> {k} chart"), Err(e)));
                continue;
            }
        };
        let pairs: Vec<_> = (0..cfg.samples)
            .map(|_| {
                let mut draw = || KChartFunction {
                    chart: j.clone(),
                    value: HSeries::constant(s.poly_fn(&vars, 2, 3), cfg.order),
                };
                (draw(), draw())
            })
            .collect();
        let group = format!("{j}->{k}");
        out.extend(par_cases(&pairs, |i, (f, g)| {
            let ins = inputs(&[&f.value, &g.value]);
            let independent = chart_independence_check(atlas, f, g, &k, cfg.order)
                .map(|ok| (!ok).then(|| format!("{ins}: transported product differs")));
            let round_trip = (|| -> Check {
                let back = transport(atlas, &transport(atlas, f, &k)?, &j)?;
                Ok(same(&back.value, &f.value, &ins))
            })();
            vec![
                case(label(&group, "chart-independence", i), independent),
                case(label(&group, "transport-round-trip", i), round_trip),
            ]
        }));
    }
    out
}

fn evenness(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let ctx = MoyalContext::new(SymplecticSpace::flat2(), cfg.order);
    let sigma = SigmaMap::single(&zp());
    let pairs: Vec<_> = (0..cfg.samples)
        .map(|_| {
            let f = HSeries::constant(s.even_polynomial(ctx.vars(), 4, 4), cfg.order);
            let g = HSeries::constant(s.even_polynomial(ctx.vars(), 4, 4), cfg.order);
            (f, g)
        })
        .collect();
    par_cases(&pairs, |i, (f, g)| {
        let check = (|| -> Check {
            let fg = moyal_star(&ctx, f, g)?;
            for (k, c) in fg.coeffs().iter().enumerate() {
                if &c.reflect(&[true, true]) != c {
                    return Ok(Some(format!("{}: h^{k} coefficient {c} is not even", inputs(&[f, g]))));
                }
                sigma.pushforward(c)?;
            }
            Ok(None)
        })();
        vec![case(label("flat2", "even-pair", i), check)]
    })
}

/// Rewrites a series on the chart `(z, p)` or the plane `(u, v)` into the
/// product variables at positions `at`.
fn embed(f: &Series, target: &Vars, at: [usize; 2]) -> Result<Series> {
    f.map_coeffs(|c| Ok::<_, Error>(c.reembed(target, &at)))
}

fn symmetric(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let mut out = Vec::new();
    for d in [2, 3] {
        let ctx = match ProductContext::new(d, cfg.r, cfg.order) {
            Ok(c) => c,
            Err(e) => return vec![case(format!("d={d} context"), Err(e))],
        };
        let vars = ctx.vars().clone();
        let group = format!("d={d}");
        let singles: Vec<_> = (0..cfg.samples)
            .map(|_| HSeries::constant(s.poly_fn(&vars, 3, 3), 1))
            .collect();
        out.extend(par_cases(&singles, |i, f| {
            let check = (|| -> Check {
                let once = symmetrize(&ctx, f)?;
                let twice = symmetrize(&ctx, &once.value)?;
                Ok(all([
                    same(&twice.value, &once.value, &inputs(&[f])),
                    (!is_invariant(&ctx, &once.value)?)
                        .then(|| format!("{}: symmetrization not invariant", inputs(&[f]))),
                ]))
            })();
            vec![case(label(&group, "symmetrize-projection", i), check)]
        }));

        let k = zp();
        let uv = Vars::new(["x", "y"]);
        let blocks: Vec<_> = (0..cfg.samples / 4)
            .map(|_| {
                let a = HSeries::constant(s.poly_fn(&k, 2, 2), cfg.order);
                let b = HSeries::constant(s.poly_fn(&k, 2, 2), cfg.order);
                let u = HSeries::constant(s.poly_fn(&uv, 2, 2), cfg.order);
                let v = HSeries::constant(s.poly_fn(&uv, 2, 2), cfg.order);
                (a, b, u, v)
            })
            .collect();
        let flat = MoyalContext::new(SymplecticSpace::flat2(), cfg.order);
        let has_flat = ctx.flat_pairs() > 0;
        let z_last = [2 * (d - 1), 2 * (d - 1) + 1];
        let u_first = [2 * d, 2 * d + 1];
        out.extend(par_cases(&blocks, |i, (a, b, u, v)| {
            let ins = inputs(&[a, b]);
            let commute = (|| -> Check {
                let f = embed(a, &vars, [0, 1])?;
                let g = embed(b, &vars, z_last)?;
                let fg = product_star(&ctx, &f, &g)?;
                let gf = product_star(&ctx, &g, &f)?;
                let plain = f.mul(&g)?;
                Ok(all([same(&fg, &plain, &ins), same(&gf, &plain, &ins)]))
            })();
            let restrict = (|| -> Check {
                let lhs = product_star(&ctx, &embed(a, &vars, z_last)?, &embed(b, &vars, z_last)?)?;
                let rhs = embed(&kchart_star(cfg.order, a, b)?, &vars, z_last)?;
                let mut fails = vec![same(&lhs, &rhs, &ins)];
                if has_flat {
                    let lhs = product_star(&ctx, &embed(u, &vars, u_first)?, &embed(v, &vars, u_first)?)?;
                    let rhs = embed(&moyal_star(&flat, u, v)?, &vars, u_first)?;
                    fails.push(same(&lhs, &rhs, &inputs(&[u, v])));
                }
                Ok(all(fails))
            })();
            vec![
                case(label(&group, "cross-factor-commute", i), commute),
                case(label(&group, "block-restriction", i), restrict),
            ]
        }));
    }
    out
}

fn theorem1(cfg: &SuiteConfig) -> Vec<Case> {
    let mut s = Sampler::new(cfg.seed);
    let ctx = match ProductContext::new(cfg.d, cfg.r, cfg.order) {
        Ok(c) => c,
        Err(e) => return vec![case("context".into(), Err(e))],
    };
    let vars = ctx.vars().clone();
    let mut invariant = |max_degree| -> SymSeries<G> {
        loop {
            let f = HSeries::constant(s.poly_fn(&vars, max_degree, 3), cfg.order);
            let sym = symmetrize(&ctx, &f).expect("context variables");
            if !sym.value.is_zero() {
                return sym;
            }
        }
    };
    let pairs: Vec<_> = (0..cfg.samples).map(|_| (invariant(3), invariant(3))).collect();
    let triples: Vec<_> = (0..2 * cfg.samples / 5)
        .map(|_| (invariant(2), invariant(2), invariant(2)))
        .collect();
    let block = MoyalContext::new(ctx.space::<G>(), cfg.order);
    let star = |f: &Series, g: &Series| {
        invariant_star(&ctx, &SymSeries { value: f.clone() }, &SymSeries { value: g.clone() }).map(|s| s.value)
    };
    let bracket = |f: &RatFn, g: &RatFn| poisson_bracket(&block, f, g);
    let mut out = par_cases(&pairs, |i, (f, g)| {
        let closure = (|| -> Check {
            let fg = invariant_star(&ctx, f, g)?;
            Ok((!is_invariant(&ctx, &fg.value)?).then(|| {
                format!(
                    "{}: product {} is not invariant",
                    inputs(&[&f.value, &g.value]),
                    fg.value
                )
            }))
        })();
        let mut cases = vec![case(label("product", "invariance-closure", i), closure)];
        cases.extend(star_axioms("product", i, &f.value, &g.value, &star, &bracket));
        cases
    });
    out.extend(par_cases(&triples, |i, (f, g, h)| {
        let check = (|| -> Check {
            let lhs = invariant_star(&ctx, &invariant_star(&ctx, f, g)?, h)?;
            let rhs = invariant_star(&ctx, f, &invariant_star(&ctx, g, h)?)?;
            Ok((!lhs.value.equal_upto(&rhs.value, cfg.order)?).then(|| {
                format!(
                    "{}: {} != {}",
                    inputs(&[&f.value, &g.value, &h.value]),
                    lhs.value,
                    rhs.value
                )
            }))
        })();
        vec![case(label("product", "associativity", i), check)]
    }));
    out
}
