//! Algebraic laws checked on random inputs.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use proptest::prelude::*;

use unlikely_core::bipoly::BiPoly;
use unlikely_core::buium::{dlog_independent, exponent_normalize};
use unlikely_core::certify::{padic_rank_filter, FilterTarget};
use unlikely_core::coleman::{log_f_disc_series, pair_minor_series, theta_maps};
use unlikely_core::curve::{DiscPoint, PlaneCurve, RationalFunction};
use unlikely_core::hunt::{relation_solve, HuntResult};
use unlikely_core::newton::{formal_log, negative_slopes, newton_polygon, ValuedSeries};
use unlikely_core::padic::{make_context, scalar_from_rational, PadicScalar};
use unlikely_core::scalar::Scalar;
use unlikely_core::spec::UniRational;
use unlikely_core::zpoly::zpoly;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn scalar(p: u64, n: u32, a: i64, shift: u32) -> PadicScalar {
    let ctx = make_context(p, n, 1, None).unwrap();
    PadicScalar::from_int(&ctx, &(BigInt::from(a) * num_traits::pow(BigInt::from(p), shift as usize)))
}

fn slope_multiset(c: &[BigRational], p: u64) -> Vec<(Rational64, usize)> {
    let np = newton_polygon(&ValuedSeries::polynomial(c.to_vec(), p)).unwrap();
    let mut out: BTreeMap<Rational64, usize> = BTreeMap::new();
    for s in &np.slopes {
        *out.entry(s.lambda).or_default() += s.length;
    }
    out.into_iter().collect()
}

fn mul_poly(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn nonzero_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, 1..6).prop_filter("leading and constant terms nonzero", |v| {
        v[0] != 0 && *v.last().unwrap() != 0
    })
}

fn families() -> &'static Vec<(Vec<UniRational>, HuntResult)> {
    static CELL: OnceLock<Vec<(Vec<UniRational>, HuntResult)>> = OnceLock::new();
    CELL.get_or_init(|| {
        [[1i64, 1, 0], [-2, 1, 0], [2, 1, 0], [1, 0, 1]]
            .iter()
            .map(|third| {
                let fs = vec![
                    UniRational::poly(zpoly(&[0, 1])),
                    UniRational::poly(zpoly(&[1, -1])),
                    UniRational::poly(zpoly(third)),
                ];
                let r = relation_solve(&fs, 1, 6).unwrap();
                (fs, r)
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn ultrametric(a in -2000i64..2000, b in -2000i64..2000, sa in 0u32..3, sb in 0u32..3) {
        prop_assume!(a != 0 && b != 0);
        let x = scalar(5, 8, a, sa);
        let y = scalar(5, 8, b, sb);
        let s = x.plus(&y);
        let (vx, vy) = (x.val.unwrap(), y.val.unwrap());
        let vs = s.val.unwrap_or(i64::MAX);
        prop_assert!(vs >= vx.min(vy));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn rational_embedding_is_a_ring_map(a in -500i64..500, b in 1i64..60, c in -500i64..500, d in 1i64..60) {
        prop_assume!(b % 7 != 0 && d % 7 != 0);
        let ctx = make_context(7, 6, 1, None).unwrap();
        let (q, r) = (rat(a, b), rat(c, d));
        let e = |x: &BigRational| scalar_from_rational(x, &ctx).unwrap();
        prop_assert!(e(&q).plus(&e(&r)) == e(&(&q + &r)));
        prop_assert!(e(&q).times(&e(&r)) == e(&(&q * &r)));
    }

    #[test]
    fn log_is_a_homomorphism_on_unramified_units(u in prop::collection::vec(0u64..343, 2), w in prop::collection::vec(0u64..343, 2)) {
        let ctx = make_context(7, 3, 2, None).unwrap();
        let mk = |c: &[u64]| PadicScalar::from_parts(&ctx, 0, c.iter().map(|&x| BigInt::from(x)).collect());
        let (x, y) = (mk(&u), mk(&w));
        prop_assume!(x.is_unit() && y.is_unit());
        let lhs = x.times(&y).log_unit().unwrap();
        let rhs = x.log_unit().unwrap().plus(&y.log_unit().unwrap());
        prop_assert!(lhs == rhs);
    }

    #[test]
    fn teichmueller_is_a_root_of_unity_fixed_by_log(c in prop::collection::vec(0u64..25, 3)) {
        let ctx = make_context(5, 5, 3, None).unwrap();
        let x = PadicScalar::from_parts(&ctx, 0, c.iter().map(|&v| BigInt::from(v)).collect());
        prop_assume!(x.is_unit());
        let w = x.teichmueller().unwrap();
        prop_assert!(w.pow_u(124).is_one_s());
        prop_assert!(w.log_unit().unwrap().vanishes());
        prop_assert!(w.frobenius() == w.pow_u(5));
        prop_assert_eq!(w.residue(), x.residue());
    }

    #[test]
    fn polygon_slopes_multiply(f in nonzero_poly(), g in nonzero_poly(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let fr: Vec<BigRational> = f.iter().map(|&x| rat(x, 1)).collect();
        let gr: Vec<BigRational> = g.iter().map(|&x| rat(x, 1)).collect();
        let mut both: BTreeMap<Rational64, usize> = BTreeMap::new();
        for (l, n) in slope_multiset(&fr, p).into_iter().chain(slope_multiset(&gr, p)) {
            *both.entry(l).or_default() += n;
        }
        prop_assert_eq!(slope_multiset(&mul_poly(&fr, &gr), p), both.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn formal_log_turns_products_into_sums(a in prop::collection::vec(-9i64..9, 1..5), b in prop::collection::vec(-9i64..9, 1..5)) {
        let mk = |v: &[i64]| {
            let mut c = vec![BigRational::one()];
            c.extend(v.iter().map(|&x| rat(x, 1)));
            ValuedSeries::polynomial(c, 3).to_order(12)
        };
        let (x, y) = (mk(&a), mk(&b));
        let lhs = formal_log(&x.mul(&y).unwrap()).unwrap();
        let rhs = formal_log(&x).unwrap().add(&formal_log(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs.coeffs, rhs.coeffs);
    }

    #[test]
    fn theta_maps_kill_their_column(a in prop::collection::vec(prop::collection::vec(-6i64..6, 2), 3)) {
        for m in theta_maps(&a).into_iter().flatten() {
            let j = m.column;
            for row in &m.exponents {
                let dot: i64 = row.iter().zip(&a).map(|(e, r)| e * r[j]).sum();
                prop_assert_eq!(dot, 0);
            }
            prop_assert_eq!(m.exponents.len(), 2);
        }
    }

    #[test]
    fn exponent_normalize_is_idempotent_and_projective(n in prop::collection::vec(-30i64..30, 3), s in 1i64..5) {
        prop_assume!(n.iter().any(|&x| x != 0));
        let e = exponent_normalize(&n, 5).unwrap();
        let back: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        prop_assert_eq!(exponent_normalize(&back, 5).unwrap(), e.clone());
        let scaled: Vec<i64> = n.iter().map(|&x| x * s).collect();
        prop_assert_eq!(exponent_normalize(&scaled, 5).unwrap(), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn powers_are_never_dlog_independent(m in 1i32..4, c in prop::sample::select(vec![1i64, 2, 3, 6])) {
        let ctx = make_context(7, 4, 1, None).unwrap();
        let h = BiPoly::from_int_terms(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -5)]);
        let curve = PlaneCurve::new(h, 0, 2, ctx).unwrap();
        let f = RationalFunction::poly(BiPoly::from_int_terms(&[((1, 0), 1), ((0, 1), 2), ((0, 0), 1)]));
        let g = f.pow(m).mul(&RationalFunction::poly(BiPoly::from_int_terms(&[((0, 0), c)])));
        prop_assert!(!dlog_independent(&curve, &f, &g).unwrap());
    }

    #[test]
    fn log_on_a_disc_is_additive(x0 in 1i64..7, a in 1i64..7, b in 1i64..7) {
        prop_assume!(x0 != 3 && (a + x0) % 7 != 0 && (b + 2 * x0) % 7 != 0);
        let ctx = make_context(7, 6, 1, None).unwrap();
        let c = PlaneCurve::new(BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -1)]), 0, 2, ctx).unwrap();
        let z = DiscPoint::from_ints(&c, x0, x0).unwrap();
        let f = RationalFunction::poly(BiPoly::from_int_terms(&[((1, 0), 1), ((0, 0), a)]));
        let g = RationalFunction::poly(BiPoly::from_int_terms(&[((1, 0), 2), ((0, 0), b)]));
        let lf = log_f_disc_series(&c, &f, &z, 10).unwrap();
        let lg = log_f_disc_series(&c, &g, &z, 10).unwrap();
        let lfg = log_f_disc_series(&c, &f.mul(&g), &z, 10).unwrap();
        prop_assert!(lfg.coeffs == lf.add(&lg).unwrap().coeffs);
    }

    #[test]
    fn pair_minors_are_antisymmetric(x1 in 1i64..5, x2 in 1i64..5) {
        let ctx = make_context(5, 5, 1, None).unwrap();
        let c = PlaneCurve::new(BiPoly::from_int_terms(&[((0, 1), 1), ((1, 0), -1)]), 0, 2, ctx).unwrap();
        let (z1, z2) = (DiscPoint::from_ints(&c, x1, x1).unwrap(), DiscPoint::from_ints(&c, x2, x2).unwrap());
        let f = RationalFunction::x();
        let g = RationalFunction::poly(BiPoly::from_int_terms(&[((1, 0), 1), ((0, 0), 5)]));
        let ab = pair_minor_series(&c, &f, &g, &z1, &z2, 5).unwrap();
        let ba = pair_minor_series(&c, &g, &f, &z1, &z2, 5).unwrap();
        for (ra, rb) in ab.coeffs.iter().zip(&ba.neg().coeffs) {
            prop_assert!(ra == rb);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn certificates_pass_the_filter_at_every_precision(k in 0usize..4, n in 3u32..=8) {
        let (fs, res) = &families()[k];
        for c in &res.certificates {
            let phi = c.minimal_polynomial();
            let rep = padic_rank_filter(&phi, fs, FilterTarget::Relations(&c.relations), 7, n).unwrap();
            prop_assert!(rep.verdict.passed(), "{:?} at N = {n}: {:?}", c.minimal_polynomial, rep.verdict);
        }
    }
}

#[test]
fn certificate_sets_are_closed_under_conjugation() {
    for (_, res) in families() {
        let mut labels: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
        for c in &res.certificates {
            labels.entry(c.minimal_polynomial.clone()).or_default().push(c.root_label);
        }
        for (phi, mut l) in labels {
            l.sort();
            let deg = phi.len() - 1;
            assert_eq!(l, (0..deg).collect::<Vec<_>>(), "{phi:?}");
        }
    }
}

#[test]
fn split_polynomial_slopes_are_root_valuations() {
    // (T − 5)(T − 1/25)(T − 7): valuations 1, −2, 0
    let f = mul_poly(&mul_poly(&[rat(-5, 1), rat(1, 1)], &[rat(-1, 25), rat(1, 1)]), &[rat(-7, 1), rat(1, 1)]);
    let np = newton_polygon(&ValuedSeries::polynomial(f, 5)).unwrap();
    assert_eq!(negative_slopes(&np), vec![(Rational64::from_integer(1), 1)]);
    let all: Vec<(Rational64, usize)> = np.slopes.iter().map(|s| (s.lambda, s.length)).collect();
    assert_eq!(
        all,
        vec![(Rational64::from_integer(1), 1), (Rational64::from_integer(0), 1), (Rational64::from_integer(-2), 1)]
    );
}
