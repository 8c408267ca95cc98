//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use moyalquot::atlas::{kchart_star, parse_atlas};
use moyalquot::moyal::moyal_star;
use moyalquot::parse::parse_series;
use moyalquot::verify::{run_suite, SuiteConfig};
use moyalquot::{BigRational, HSeries, MoyalContext, SymplecticSpace, Vars, Zero};

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

struct Verdict {
    ok: bool,
    detail: String,
}

struct SuiteRun<'a> {
    suite: &'a str,
    seed: u64,
    samples: usize,
    order: usize,
    /// Case-label prefixes with the number of cases each must contribute.
    expect: &'a [(&'a str, usize)],
    limit: Duration,
}

fn run(plan: &SuiteRun, base: SuiteConfig) -> Verdict {
    let cfg = SuiteConfig {
        seed: plan.seed,
        samples: plan.samples,
        order: plan.order,
        ..base
    };
    let start = Instant::now();
    let report = match run_suite(plan.suite, &cfg) {
        Ok(r) => r,
        Err(e) => {
            return Verdict {
                ok: false,
                detail: format!("error: {e}"),
            }
        }
    };
    let elapsed = start.elapsed();
    let mut problems = Vec::new();
    for (prefix, want) in plan.expect {
        let got = report
            .cases
            .iter()
            .filter(|c| c.description.starts_with(prefix))
            .count();
        if got != *want {
            problems.push(format!("{got} `{prefix}` cases, expected {want}"));
        }
    }
    for c in report.cases.iter().filter(|c| !c.passed) {
        problems.push(format!(
            "{} failed: {}",
            c.description,
            c.counterexample.as_deref().unwrap_or("")
        ));
    }
    if elapsed > plan.limit {
        problems.push(format!("took {elapsed:.1?}, limit {:?}", plan.limit));
    }
    Verdict {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{}/{} cases exact, {elapsed:.1?}", report.passed(), report.total())
        } else {
            problems.join("; ")
        },
    }
}

// Independent oracle: Laurent polynomials in two variables with
// Gaussian-rational coefficients, keyed by (h power, exponent, exponent).

#[derive(Clone, Debug, PartialEq, Eq)]
struct C(BigRational, BigRational);

impl C {
    fn int(n: i64) -> C {
        C(BigRational::from_integer(n.into()), BigRational::zero())
    }
    fn ratio(n: i64, d: i64) -> C {
        C(BigRational::new(n.into(), d.into()), BigRational::zero())
    }
    fn i() -> C {
        C(BigRational::zero(), BigRational::from_integer(1.into()))
    }
    fn mul(&self, o: &C) -> C {
        C(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn add(&self, o: &C) -> C {
        C(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
    /// Real rationals only; negative exponents allowed.
    fn powi(&self, k: i64) -> C {
        assert!(self.1.is_zero());
        let r = if k < 0 { self.0.recip() } else { self.0.clone() };
        C(
            (0..k.abs()).fold(BigRational::from_integer(1.into()), |acc, _| acc * &r),
            BigRational::zero(),
        )
    }
}

type Laurent = BTreeMap<(u32, i64, i64), C>;

fn insert(acc: &mut Laurent, key: (u32, i64, i64), c: C) {
    let slot = acc.entry(key).or_insert_with(|| C::int(0));
    *slot = slot.add(&c);
    if slot.is_zero() {
        acc.remove(&key);
    }
}

fn falling(a: i64, n: i64) -> i64 {
    (0..n).map(|j| a - j).product()
}

fn binomial(k: i64, j: i64) -> i64 {
    falling(k, j) / falling(j, j)
}

/// Moyal product on the plane with `{x, y} = 1`, term by term:
/// `sum_k (i h / 2)^k / k! sum_j C(k, j) (-1)^(k-j) (d_x^j d_y^(k-j) f)(d_y^j d_x^(k-j) g)`.
fn oracle_flat(f: &Laurent, g: &Laurent, order: u32) -> Laurent {
    let mut out = Laurent::new();
    for (&(hf, a, b), cf) in f {
        for (&(hg, c, d), cg) in g {
            for k in 0..=(order.saturating_sub(hf + hg)) as i64 {
                let mut scale = C::int(1);
                for _ in 0..k {
                    scale = scale.mul(&C::i()).mul(&C::ratio(1, 2));
                }
                scale = scale.mul(&C::ratio(1, falling(k, k)));
                for j in 0..=k {
                    let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
                    let n =
                        binomial(k, j) * sign * falling(a, j) * falling(b, k - j) * falling(d, j) * falling(c, k - j);
                    if n == 0 {
                        continue;
                    }
                    let coeff = cf.mul(cg).mul(&scale).mul(&C::int(n));
                    let key = (hf + hg + k as u32, a - j + c - (k - j), b - (k - j) + d - j);
                    insert(&mut out, key, coeff);
                }
            }
        }
    }
    out
}

/// `z^a p^k` as a function of `(x, y)` with `z = x / y`, `p = -y^2 / 2`.
fn oracle_pullback(f: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&(h, a, k), c) in f {
        let coeff = c.mul(&C::ratio(-1, 2).powi(k));
        insert(&mut out, (h, a, 2 * k - a), coeff);
    }
    out
}

/// `x^a y^b` with `a + b` even is `z^a y^(a+b)`, and `y^2 = -2 p`.
fn oracle_pushforward(f: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&(h, a, b), c) in f {
        assert_eq!((a + b) % 2, 0, "odd term in an even product");
        let k = (a + b) / 2;
        let coeff = c.mul(&C::int(-2).powi(k));
        insert(&mut out, (h, a, k), coeff);
    }
    out
}

fn monomial(a: i64, b: i64) -> Laurent {
    Laurent::from([((0, a, b), C::int(1))])
}

/// A library series whose coefficients all have monomial denominators, as a
/// Laurent map.
fn to_laurent(s: &HSeries<moyalquot::GaussianRational>) -> Option<Laurent> {
    let mut out = Laurent::new();
    for (h, c) in s.coeffs().iter().enumerate() {
        let den = c.den();
        if !den.is_monomial() {
            return None;
        }
        let (de, _) = den.lead()?;
        for (e, v) in c.num().terms() {
            let key = (h as u32, e[0] as i64 - de[0] as i64, e[1] as i64 - de[1] as i64);
            insert(&mut out, key, C(v.re.clone(), v.im.clone()));
        }
    }
    Some(out)
}

struct Golden {
    file: &'static str,
    space: &'static str,
    f: &'static str,
    g: &'static str,
    oracle: Laurent,
}

fn golden_cases() -> Vec<Golden> {
    let n = 4;
    let kchart = |f, g| oracle_pushforward(&oracle_flat(&oracle_pullback(&f), &oracle_pullback(&g), n));
    vec![
        Golden {
            file: "star_x_y.txt",
            space: "flat2",
            f: "x",
            g: "y",
            oracle: oracle_flat(&monomial(1, 0), &monomial(0, 1), n),
        },
        Golden {
            file: "star_x2_y2.txt",
            space: "flat2",
            f: "x^2",
            g: "y^2",
            oracle: oracle_flat(&monomial(2, 0), &monomial(0, 2), n),
        },
        Golden {
            file: "star_z_p.txt",
            space: "kchart",
            f: "z",
            g: "p",
            oracle: kchart(monomial(1, 0), monomial(0, 1)),
        },
        Golden {
            file: "star_z2_p.txt",
            space: "kchart",
            f: "z^2",
            g: "p",
            oracle: kchart(monomial(2, 0), monomial(0, 1)),
        },
    ]
}

fn golden() -> Verdict {
    let start = Instant::now();
    let mut problems = Vec::new();
    for case in golden_cases() {
        let value = if case.space == "kchart" {
            let vars = Vars::new(["z", "p"]);
            let f = parse_series(case.f, &vars, 4).unwrap();
            let g = parse_series(case.g, &vars, 4).unwrap();
            kchart_star(4, &f, &g).unwrap()
        } else {
            let ctx = MoyalContext::new(SymplecticSpace::flat2(), 4);
            let f = parse_series(case.f, ctx.vars(), 4).unwrap();
            let g = parse_series(case.g, ctx.vars(), 4).unwrap();
            moyal_star(&ctx, &f, &g).unwrap()
        };
        if to_laurent(&value).as_ref() != Some(&case.oracle) {
            problems.push(format!("{}: library disagrees with term expansion", case.file));
            continue;
        }
        let out = Command::new(env!("CARGO_BIN_EXE_moyalquot"))
            .args(["star", "--space", case.space, "--order", "4", case.f, case.g])
            .env_remove("MOYALQUOT_ORDER")
            .output()
            .expect("binary runs");
        let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
        let path = manifest_dir().join("tests/golden").join(case.file);
        match fs::read_to_string(&path) {
            Ok(frozen) if frozen == stdout && stdout.trim_end() == value.to_expr_string() => {}
            Ok(frozen) => problems.push(format!("{}: got {stdout:?}, frozen {frozen:?}", case.file)),
            Err(e) => problems.push(format!("{}: {e}", case.file)),
        }
    }
    Verdict {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("4 golden values exact, {:.1?}", start.elapsed())
        } else {
            problems.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let base = SuiteConfig::default;
    let cp1 = || {
        let text = fs::read_to_string(manifest_dir().join("fixtures/cp1.atlas")).expect("fixture");
        SuiteConfig {
            atlas: parse_atlas(&text).expect("fixture parses"),
            ..SuiteConfig::default()
        }
    };
    let theorem = || SuiteConfig {
        d: 2,
        r: 2,
        ..SuiteConfig::default()
    };
    let runs: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        (
            "star axioms on flat2",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "axioms",
                        seed: 1,
                        samples: 200,
                        order: 6,
                        expect: &[
                            ("flat2 leading-term", 200),
                            ("flat2 unit-left", 200),
                            ("flat2 unit-right", 200),
                            ("flat2 commutator", 200),
                        ],
                        limit: secs(30),
                    },
                    base(),
                )
            }),
        ),
        (
            "Poisson axioms",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "poisson",
                        seed: 2,
                        samples: 100,
                        order: 6,
                        expect: &[
                            ("flat2 antisymmetry", 100),
                            ("flat2 leibniz", 100),
                            ("flat2 jacobi", 100),
                            ("flat4 antisymmetry", 100),
                            ("flat4 leibniz", 100),
                            ("flat4 jacobi", 100),
                        ],
                        limit: secs(30),
                    },
                    base(),
                )
            }),
        ),
        (
            "Moyal associativity",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "associativity",
                        seed: 3,
                        samples: 100,
                        order: 6,
                        expect: &[("flat2 polynomial", 100), ("flat2 rational", 25)],
                        limit: secs(120),
                    },
                    base(),
                )
            }),
        ),
        (
            "symplectic equivariance",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "equivariance",
                        seed: 4,
                        samples: 100,
                        order: 6,
                        expect: &[("flat2 symplectic", 100)],
                        limit: secs(60),
                    },
                    base(),
                )
            }),
        ),
        (
            "sigma pulls back the form and intertwines the actions",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "lemma1",
                        seed: 7,
                        samples: 100,
                        order: 6,
                        expect: &[("sigma form", 1), ("sigma equivariance", 100)],
                        limit: secs(30),
                    },
                    base(),
                )
            }),
        ),
        (
            "evenness closure",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "evenness",
                        seed: 6,
                        samples: 100,
                        order: 6,
                        expect: &[("flat2 even-pair", 100)],
                        limit: secs(30),
                    },
                    base(),
                )
            }),
        ),
        (
            "chart independence on the projective line",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "cocycle",
                        seed: 3,
                        samples: 50,
                        order: 4,
                        expect: &[("atlas validation", 1), ("A->B chart-independence", 50)],
                        limit: secs(120),
                    },
                    cp1(),
                )
            }),
        ),
        (
            "invariant star product on the open cell, d = 2, r = 2",
            Box::new(move || {
                run(
                    &SuiteRun {
                        suite: "theorem1",
                        seed: 8,
                        samples: 50,
                        order: 4,
                        expect: &[
                            ("product invariance-closure", 50),
                            ("product leading-term", 50),
                            ("product unit-left", 50),
                            ("product unit-right", 50),
                            ("product commutator", 50),
                            ("product associativity", 20),
                        ],
                        limit: secs(300),
                    },
                    theorem(),
                )
            }),
        ),
        ("golden star values", Box::new(golden)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in runs.iter().enumerate() {
        let v = check();
        if !v.ok {
            failed += 1;
        }
        println!(
            "criterion {} {}: {} ({})",
            k + 1,
            if v.ok { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    println!("{} of {} criteria pass", runs.len() - failed, runs.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
