use hypermeasure::denominators::{d_mnr, d_mnr_uncached};
use hypermeasure::hypg::{admissible_m, x_poly, y_poly};
use hypermeasure::measures::{approximants, QuadInt};
use hypermeasure::sturm::count_negative_roots;
use hypermeasure::HypgIndex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn index() -> impl Strategy<Value = HypgIndex> {
    (3u64..=14, 0usize..8, 0u64..=40).prop_filter_map("admissible m", |(n, k, r)| {
        let ms = admissible_m(n);
        (!ms.is_empty()).then(|| HypgIndex::new(ms[k % ms.len()], n, r).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn denominator_is_lcm_of_coefficient_denominators(idx in index()) {
        let want = x_poly(&idx).unwrap().coeffs.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        prop_assert_eq!(&d_mnr(&idx).unwrap().value, &want);
        prop_assert_eq!(d_mnr_uncached(&idx).value, want);
    }

    #[test]
    fn y_is_the_reversal_of_x(idx in index()) {
        let x = x_poly(&idx).unwrap();
        let y = y_poly(&idx).unwrap();
        let mut rev = x.coeffs.clone();
        rev.reverse();
        prop_assert_eq!(y.coeffs, rev);
    }

    #[test]
    fn x_has_only_negative_roots(idx in index()) {
        let x = x_poly(&idx).unwrap();
        let d = x.coeffs.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let ip = hypermeasure::IntPoly {
            coeffs: x.coeffs.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect(),
        };
        prop_assert_eq!(count_negative_roots(&ip) as u64, idx.r);
    }

    #[test]
    fn rational_approximants_are_integral(a in 2i64..200, s in 1i64..5, r in 0u64..25) {
        let b = a + s;
        let pair = approximants(&QuadInt::rational(b), &QuadInt::rational(a), 1, 3, r).unwrap();
        prop_assert!(pair.exact);
        prop_assert!(pair.p.is_rational() && pair.q.is_rational());
        prop_assert!(!pair.q.is_zero());
    }

    #[test]
    fn quad_int_display_parses_back(x in -1000i64..1000, y in -1000i64..1000, t in prop::sample::select(vec![1u64, 2, 3, 7, 11])) {
        let q = if t == 1 { QuadInt::rational(x) } else { QuadInt::new(x, y, t).unwrap() };
        let back: QuadInt = q.to_string().parse().unwrap();
        prop_assert_eq!(&back, &q);
        let ascii: QuadInt = q.to_ascii().parse().unwrap();
        prop_assert_eq!(ascii, q);
    }
}

#[test]
fn x_at_zero_is_one() {
    for n in 3..=10 {
        for m in admissible_m(n) {
            let x = x_poly(&HypgIndex::new(m, n, 7).unwrap()).unwrap();
            assert!(x.eval(&BigRational::zero()).is_one());
        }
    }
}
