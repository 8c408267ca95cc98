use proptest::prelude::*;

use moyalquot::atlas::{transport, KChartFunction, ProjectiveAtlas};
use moyalquot::gcd::gcd;
use moyalquot::geometry::{sigma_pullback, sigma_pushforward};
use moyalquot::moyal::{apply_symplectic, moyal_star, poisson_bracket};
use moyalquot::parse::{parse_function, parse_series};
use moyalquot::symprod::{invariant_star, is_invariant, symmetrize, ProductContext};
use moyalquot::{
    BigRational, GaussianRational as G, HSeries, LinearSymplectic, MoyalContext, Poly, RatFn, SymplecticSpace, Vars,
};

fn xy() -> Vars {
    Vars::new(["x", "y"])
}

fn zp() -> Vars {
    Vars::new(["z", "p"])
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn coeff() -> impl Strategy<Value = G> {
    (-3i64..=3, -2i64..=2).prop_map(|(re, im)| G::new(int(re), int(im)))
}

fn poly_in(vars: Vars, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, coeff()), 0..=max_terms)
        .prop_map(move |terms| Poly::from_terms(&vars, terms.into_iter().map(|(a, b, c)| (vec![a, b], c))))
}

fn poly() -> impl Strategy<Value = Poly> {
    poly_in(xy(), 2, 4)
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfn_in(vars: Vars) -> impl Strategy<Value = RatFn> {
    (poly_in(vars.clone(), 2, 3), poly_in(vars, 1, 3))
        .prop_filter_map("nonzero denominator", |(n, d)| RatFn::new(n, d).ok())
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    ratfn_in(xy())
}

fn series(f: &RatFn, order: usize) -> HSeries<G> {
    HSeries::constant(f.clone(), order)
}

fn flat(order: usize) -> MoyalContext<G> {
    MoyalContext::new(SymplecticSpace::flat2(), order)
}

fn product_poly(ctx: &ProductContext) -> impl Strategy<Value = HSeries<G>> {
    let vars = ctx.vars().clone();
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0u32..=1, n), coeff()), 1..=3)
        .prop_map(move |terms| HSeries::constant(RatFn::from(Poly::from_terms(&vars, terms)), 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gcd_divides_and_keeps_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let ac = &a * &c;
        let bc = &b * &c;
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some());
        prop_assert_eq!(g.lead_coeff(), G::from(1));
    }

    #[test]
    fn fractions_are_canonical(a in poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let direct = RatFn::new(a.clone(), b.clone()).unwrap();
        let padded = RatFn::new(&a * &c, &b * &c).unwrap();
        prop_assert_eq!(&direct, &padded);
        prop_assert_eq!(direct.den().lead_coeff(), G::from(1));
    }

    #[test]
    fn field_operations_invert(f in ratfn(), g in ratfn()) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        if !g.is_zero() {
            prop_assert_eq!(&(&f * &g) / &g, f.clone());
            prop_assert!((&g * &g.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn printed_functions_parse_back(f in ratfn()) {
        prop_assert_eq!(parse_function(&f.to_expr_string(), &xy()).unwrap(), f);
    }

    #[test]
    fn printed_series_parse_back(f in ratfn(), g in ratfn()) {
        let s = HSeries::new(vec![f, RatFn::zero(&xy()), g]).unwrap();
        prop_assert_eq!(parse_series(&s.to_expr_string(), &xy(), 2).unwrap(), s);
    }

    #[test]
    fn star_unit_and_leading_terms(f in ratfn(), g in ratfn()) {
        let ctx = flat(3);
        let one = HSeries::one(&xy(), 3);
        let fs = series(&f, 3);
        let gs = series(&g, 3);
        prop_assert_eq!(moyal_star(&ctx, &one, &fs).unwrap(), fs.clone());
        prop_assert_eq!(moyal_star(&ctx, &fs, &one).unwrap(), fs.clone());
        let fg = moyal_star(&ctx, &fs, &gs).unwrap();
        let gf = moyal_star(&ctx, &gs, &fs).unwrap();
        prop_assert_eq!(fg.coeff(0), &(&f * &g));
        let bracket = poisson_bracket(&ctx, &f, &g).unwrap();
        prop_assert_eq!(&(fg.coeff(1) - gf.coeff(1)), &bracket.scale(&G::i()));
        // Swapping the operands flips the sign of odd powers.
        for k in 0..=3 {
            let sign = if k % 2 == 0 { G::from(1) } else { G::from(-1) };
            prop_assert_eq!(fg.coeff(k), &gf.coeff(k).scale(&sign));
        }
    }

    #[test]
    fn star_is_associative_on_polynomials(f in poly(), g in poly(), h in poly()) {
        let ctx = flat(4);
        let [f, g, h] = [f, g, h].map(|p| HSeries::constant(RatFn::from(p), 4));
        let left = moyal_star(&ctx, &moyal_star(&ctx, &f, &g).unwrap(), &h).unwrap();
        let right = moyal_star(&ctx, &f, &moyal_star(&ctx, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn poisson_identities(f in ratfn(), g in ratfn(), h in poly()) {
        let ctx = flat(0);
        let h = RatFn::from(h);
        let pb = |a: &RatFn, b: &RatFn| poisson_bracket(&ctx, a, b).unwrap();
        prop_assert_eq!(pb(&f, &g), -pb(&g, &f));
        prop_assert_eq!(pb(&f, &(&g * &h)), &(&pb(&f, &g) * &h) + &(&g * &pb(&f, &h)));
        let jacobi = &(&pb(&f, &pb(&g, &h)) + &pb(&g, &pb(&h, &f))) + &pb(&h, &pb(&f, &g));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn transvections_commute_with_star(f in poly(), g in poly(), a in coeff(), b in coeff(), t in coeff()) {
        let ctx = flat(4);
        let space = SymplecticSpace::flat2();
        let m = LinearSymplectic::transvection(&space, &[a, b], &t);
        let [f, g] = [f, g].map(|p| HSeries::constant(RatFn::from(p), 4));
        let moved = |s: &HSeries<G>| apply_symplectic(&ctx, &m, s).unwrap();
        let before = moved(&moyal_star(&ctx, &f, &g).unwrap());
        let after = moyal_star(&ctx, &moved(&f), &moved(&g)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn sigma_round_trip(f in ratfn_in(zp())) {
        let e = sigma_pullback(&f).unwrap();
        prop_assert_eq!(sigma_pushforward(&e, &zp()).unwrap(), f);
    }

    #[test]
    fn transport_there_and_back(f in ratfn_in(zp())) {
        let atlas = ProjectiveAtlas::cp1();
        let start = KChartFunction::new(&atlas, "A", series(&f, 2)).unwrap();
        let there = transport(&atlas, &start, "B").unwrap();
        let back = transport(&atlas, &there, "A").unwrap();
        prop_assert_eq!(back.value, start.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn invariant_star_stays_invariant(
        (ctx, f, g) in Just(ProductContext::new(2, 1, 2).unwrap())
            .prop_flat_map(|ctx| (Just(ctx.clone()), product_poly(&ctx), product_poly(&ctx)))
    ) {
        let f = symmetrize(&ctx, &f).unwrap();
        let g = symmetrize(&ctx, &g).unwrap();
        let fg = invariant_star(&ctx, &f, &g).unwrap();
        prop_assert!(is_invariant(&ctx, &fg.value).unwrap());
        prop_assert_eq!(fg.value.coeff(0), &(f.value.coeff(0) * g.value.coeff(0)));
    }
}
