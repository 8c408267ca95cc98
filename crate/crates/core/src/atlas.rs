//! Projective atlases and the star product on the canonical bundle glued
//! from chart-wise Moyal products conjugated by `sigma`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, GaussianRational as G};
use crate::geometry::{cotangent_lift, MobiusMap, SigmaMap};
use crate::moyal::{moyal_star, MoyalContext, SymplecticSpace};
use crate::poly::Vars;
use crate::series::HSeries;

/// The two-chart atlas of the projective line, `w = 1/z`.
pub const CP1_ATLAS: &str = "\
# The projective line: z on A, w = 1/z on B.
chart A z p
chart B w q
transition A B 0 i i 0
";

/// Conjugated star product: pull the coefficients of `f` and `g` back along
/// `map`, multiply with the Moyal product of `ctx` (which lives on
/// `map.source()`), and push every coefficient of the result forward.
pub fn conjugated_star<F: ComplexField>(
    map: &SigmaMap,
    ctx: &MoyalContext<F>,
    f: &HSeries<F>,
    g: &HSeries<F>,
) -> Result<HSeries<F>> {
    if ctx.vars() != map.source() {
        return Err(Error::VariableMismatch);
    }
    let fp = f.map_coeffs(|c| map.pullback(c))?;
    let gp = g.map_coeffs(|c| map.pullback(c))?;
    moyal_star(ctx, &fp, &gp)?.map_coeffs(|c| map.pushforward(c))
}

/// Star product on a single cotangent chart of a curve, truncated at
/// `order` and at the operand orders.
pub fn kchart_star<F: ComplexField>(order: usize, f: &HSeries<F>, g: &HSeries<F>) -> Result<HSeries<F>> {
    if f.vars() != g.vars() {
        return Err(Error::VariableMismatch);
    }
    if f.vars().len() != 2 {
        return Err(Error::VariableMismatch);
    }
    let map = SigmaMap::single(f.vars());
    let ctx = MoyalContext::new(SymplecticSpace::flat2(), order);
    conjugated_star(&map, &ctx, f, g)
}

/// The symplectic space of a cotangent chart, with form `dp ^ dz`.
pub fn kchart_space<F: Field>(chart: &Vars) -> Result<SymplecticSpace<F>> {
    match chart.names() {
        [z, p] => SymplecticSpace::cotangent_chart(z, p),
        _ => Err(Error::VariableMismatch),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub id: String,
    pub vars: Vars,
}

/// A finite atlas whose transitions are Mobius maps. `transitions[(j, k)]`
/// expresses the coordinate of chart `k` as a function of chart `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveAtlas {
    charts: Vec<Chart>,
    /// Entries `[a, b, c, d]`, rescaled to determinant one when possible.
    transitions: BTreeMap<(String, String), [G; 4]>,
    /// A point of chart `j` inside the overlap with chart `k`.
    witnesses: BTreeMap<(String, String), G>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtlasIssue {
    DegenerateMatrix {
        from: String,
        to: String,
    },
    NonUnitDeterminant {
        from: String,
        to: String,
    },
    InverseCocycle {
        from: String,
        to: String,
    },
    TripleCocycle {
        first: String,
        second: String,
        third: String,
    },
    Witness {
        from: String,
        to: String,
    },
}

impl fmt::Display for AtlasIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtlasIssue::DegenerateMatrix { from, to } => {
                write!(f, "DegenerateMatrix: transition {from} -> {to} has zero determinant")
            }
            AtlasIssue::NonUnitDeterminant { from, to } => write!(
                f,
                "NonUnitDeterminant: transition {from} -> {to} has no determinant-one representative"
            ),
            AtlasIssue::InverseCocycle { from, to } => {
                write!(f, "Cocycle: {from} -> {to} -> {from} is not the identity")
            }
            AtlasIssue::TripleCocycle { first, second, third } => write!(
                f,
                "Cocycle: {first} -> {second} -> {third} differs from {first} -> {third}"
            ),
            AtlasIssue::Witness { from, to } => {
                write!(f, "Witness: no overlap point found for {from} -> {to}")
            }
        }
    }
}

/// Outcome of [`atlas_validate`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtlasReport {
    pub issues: Vec<AtlasIssue>,
}

impl AtlasReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

fn det(m: &[G; 4]) -> G {
    m[0].clone() * &m[3] - m[1].clone() * &m[2]
}

fn witness_for(m: &[G; 4]) -> Option<G> {
    // First small integer avoiding the pole of the transition.
    (0..8).map(G::from).find(|z| !(m[2].clone() * z + &m[3]).is_zero())
}

impl ProjectiveAtlas {
    /// Builds an atlas. A transition `j -> k` without a declared `k -> j`
    /// gets the inverse map. Determinants are normalised to one where a
    /// square root exists; everything else is left for [`atlas_validate`].
    pub fn new(charts: Vec<Chart>, transitions: Vec<(String, String, [G; 4])>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for c in &charts {
            if seen.insert(c.id.clone(), ()).is_some() {
                return Err(Error::NameCollision(c.id.clone()));
            }
            if c.vars.len() != 2 {
                return Err(Error::VariableMismatch);
            }
            if let Some(dup) = c.vars.has_duplicates() {
                return Err(Error::NameCollision(dup.to_string()));
            }
        }
        let mut table = BTreeMap::new();
        for (from, to, m) in &transitions {
            for id in [from, to] {
                if !seen.contains_key(id) {
                    return Err(Error::UnknownChart(id.clone()));
                }
            }
            let d = det(m);
            let m = match d.sqrt() {
                Some(r) if !d.is_zero() => {
                    let s = r.inv();
                    m.clone().map(|e| e * &s)
                }
                _ => m.clone(),
            };
            table.insert((from.clone(), to.clone()), m);
        }
        let declared: Vec<_> = table.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for ((from, to), m) in declared {
            let key = (to, from);
            if !table.contains_key(&key) && !det(&m).is_zero() {
                let [a, b, c, d] = m;
                table.insert(key, [d, -b, -c, a]);
            }
        }
        let witnesses = table
            .iter()
            .filter_map(|(k, m)| witness_for(m).map(|w| (k.clone(), w)))
            .collect();
        Ok(ProjectiveAtlas {
            charts,
            transitions: table,
            witnesses,
        })
    }

    /// The bundled atlas of the projective line.
    pub fn cp1() -> Self {
        parse_atlas(CP1_ATLAS).expect("bundled atlas parses")
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, id: &str) -> Result<&Chart> {
        self.charts
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::UnknownChart(id.to_string()))
    }

    pub fn transition_entries(&self) -> impl Iterator<Item = (&str, &str, &[G; 4])> {
        self.transitions.iter().map(|((a, b), m)| (a.as_str(), b.as_str(), m))
    }

    /// The map from the coordinate of `from` to that of `to`.
    pub fn transition(&self, from: &str, to: &str) -> Result<MobiusMap<G>> {
        self.chart(from)?;
        self.chart(to)?;
        if from == to {
            return Ok(MobiusMap::identity());
        }
        let [a, b, c, d] = self
            .transitions
            .get(&(from.to_string(), to.to_string()))
            .ok_or_else(|| Error::MissingTransition {
                from: from.to_string(),
                to: to.to_string(),
            })?
            .clone();
        MobiusMap::new(a, b, c, d)
    }

    pub fn witness(&self, from: &str, to: &str) -> Option<&G> {
        self.witnesses.get(&(from.to_string(), to.to_string()))
    }
}

/// `(a z + b)/(c z + d)` at a point, `None` at the pole.
fn eval_at(m: &MobiusMap<G>, z: &G) -> Option<G> {
    let [a, b, c, d] = m.entries();
    let den = c.clone() * z + d;
    (!den.is_zero()).then(|| (a.clone() * z + b) / &den)
}

pub fn atlas_validate(atlas: &ProjectiveAtlas) -> AtlasReport {
    let mut issues = Vec::new();
    let mut maps = BTreeMap::new();
    for ((from, to), m) in &atlas.transitions {
        let (from, to) = (from.clone(), to.clone());
        let d = det(m);
        if d.is_zero() {
            issues.push(AtlasIssue::DegenerateMatrix { from, to });
            continue;
        }
        if !d.is_one() {
            issues.push(AtlasIssue::NonUnitDeterminant {
                from: from.clone(),
                to: to.clone(),
            });
        }
        let [a, b, c, dd] = m.clone();
        let map = MobiusMap::new(a, b, c, dd).expect("nonzero determinant");
        let round_trip = atlas.witness(&from, &to).and_then(|w| {
            eval_at(&map, w)
                .and_then(|v| eval_at(&map.inverse(), &v))
                .map(|back| &back == w)
        });
        if round_trip != Some(true) {
            issues.push(AtlasIssue::Witness {
                from: from.clone(),
                to: to.clone(),
            });
        }
        maps.insert((from, to), map);
    }
    for ((j, k), m) in &maps {
        if let Some(back) = maps.get(&(k.clone(), j.clone())) {
            if j < k && back.compose(m) != MobiusMap::identity() {
                issues.push(AtlasIssue::InverseCocycle {
                    from: j.clone(),
                    to: k.clone(),
                });
            }
        }
        for ((k2, l), second) in &maps {
            if k2 != k || l == j {
                continue;
            }
            if let Some(direct) = maps.get(&(j.clone(), l.clone())) {
                if &second.compose(m) != direct {
                    issues.push(AtlasIssue::TripleCocycle {
                        first: j.clone(),
                        second: k.clone(),
                        third: l.clone(),
                    });
                }
            }
        }
    }
    AtlasReport { issues }
}

/// Parses the line format
///
/// ```text
/// chart <id> <zvar> <pvar>
/// transition <from> <to> <a> <b> <c> <d>
/// ```
///
/// with Gaussian-rational literals and `#` comments.
pub fn parse_atlas(text: &str) -> Result<ProjectiveAtlas> {
    let mut charts = Vec::new();
    let mut transitions = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| Error::AtlasFormat { line, message };
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["chart", id, z, p] => charts.push(Chart {
                id: id.to_string(),
                vars: Vars::new([*z, *p]),
            }),
            ["chart", ..] => return Err(err("expected `chart <id> <zvar> <pvar>`".into())),
            ["transition", from, to, a, b, c, d] => {
                let mut m = Vec::with_capacity(4);
                for lit in [a, b, c, d] {
                    m.push(lit.parse::<G>().map_err(|e| err(e.to_string()))?);
                }
                let m: [G; 4] = m.try_into().expect("four entries");
                transitions.push((from.to_string(), to.to_string(), m));
            }
            ["transition", ..] => return Err(err("expected `transition <from> <to> <a> <b> <c> <d>`".into())),
            [other, ..] => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    ProjectiveAtlas::new(charts, transitions).map_err(|e| match e {
        Error::AtlasFormat { .. } => e,
        other => Error::AtlasFormat {
            line: 0,
            message: other.to_string(),
        },
    })
}

/// A series on one chart of an atlas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KChartFunction {
    pub chart: String,
    pub value: HSeries<G>,
}

impl KChartFunction {
    pub fn new(atlas: &ProjectiveAtlas, chart: &str, value: HSeries<G>) -> Result<Self> {
        if atlas.chart(chart)?.vars != *value.vars() {
            return Err(Error::VariableMismatch);
        }
        Ok(KChartFunction {
            chart: chart.to_string(),
            value,
        })
    }
}

/// Rewrites `f` in the coordinates of `target` through the cotangent lift
/// of the transition `target -> f.chart`.
pub fn transport(atlas: &ProjectiveAtlas, f: &KChartFunction, target: &str) -> Result<KChartFunction> {
    let to = atlas.chart(target)?;
    if target == f.chart {
        return Ok(f.clone());
    }
    let t = atlas.transition(target, &f.chart)?;
    let images = cotangent_lift(&t, &to.vars);
    let value = f.value.map_coeffs(|c| c.substitute(&images))?;
    Ok(KChartFunction {
        chart: target.to_string(),
        value,
    })
}

pub fn star_on_k(order: usize, f: &KChartFunction, g: &KChartFunction) -> Result<KChartFunction> {
    if f.chart != g.chart {
        return Err(Error::ChartMismatch);
    }
    Ok(KChartFunction {
        chart: f.chart.clone(),
        value: kchart_star(order, &f.value, &g.value)?,
    })
}

/// Whether transporting the product agrees with multiplying the transported
/// operands, through `h^order`.
pub fn chart_independence_check(
    atlas: &ProjectiveAtlas,
    f: &KChartFunction,
    g: &KChartFunction,
    other: &str,
    order: usize,
) -> Result<bool> {
    let lhs = transport(atlas, &star_on_k(order, f, g)?, other)?;
    let rhs = star_on_k(order, &transport(atlas, f, other)?, &transport(atlas, g, other)?)?;
    let upto = order.min(lhs.value.order()).min(rhs.value.order());
    lhs.value.equal_upto(&rhs.value, upto)
}
