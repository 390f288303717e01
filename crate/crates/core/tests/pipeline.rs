//! End-to-end properties through the public API.

use dafn_core::basis::{fourier_1d, BasisTag, CoefficientSeries};
use dafn_core::lattice::Window;
use dafn_core::numeric::{gr, GaussianRational};
use dafn_core::products::{ck_product, ck_quotient, ExpandableFunction};
use dafn_core::zeta::{extend_factorial_series, zeta_by_extension};
use proptest::prelude::*;

fn small_gr() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, -5i64..=5).prop_map(|(a, b)| gr(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Samples on the axis -> factorial coefficients -> extension: analytic
    /// everywhere and equal to the samples on y = 0.
    #[test]
    fn extension_of_samples_is_analytic_and_restricts_back(vals in prop::collection::vec(small_gr(), 1..7)) {
        let c = fourier_1d(&vals);
        prop_assert_eq!(c.basis(), BasisTag::FactorialX);
        let w = Window::new(-3, 8, -4, 4).unwrap();
        let f = extend_factorial_series(&c).eval_window(&w);
        prop_assert!(f.is_discrete_analytic().unwrap().analytic);
        for (x, v) in vals.iter().enumerate() {
            prop_assert_eq!(f.get(x as i64, 0).unwrap(), v);
        }
    }

    /// The product of polynomials multiplies restrictions, and dividing
    /// back recovers the left factor.
    #[test]
    fn product_then_quotient(a in prop::collection::vec(small_gr(), 1..5), b0 in 1i64..4, b1 in small_gr()) {
        let f = ExpandableFunction::polynomial(a);
        let g = ExpandableFunction::polynomial(vec![gr(b0, 0), b1]);
        let p = ck_product(&f, &g).unwrap();
        for x in 0..8u64 {
            let lhs = p.restriction_at(x).unwrap();
            let rhs = &f.restriction_at(x).unwrap() * &g.restriction_at(x).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let n = f.required_degree() + 4;
        let q = ck_quotient(&p, &g, n).unwrap();
        for k in 0..=n {
            prop_assert_eq!(q.coeff(k), f.coeff(k));
        }
    }
}

#[test]
fn zeta_table_values_match_their_factorial_coefficients() {
    let w = Window::new(-2, 3, -2, 2).unwrap();
    let zt = zeta_by_extension(6, &w);
    for n in 0..=6 {
        let f = extend_factorial_series(&CoefficientSeries::unit(BasisTag::FactorialX, n)).eval_window(&w);
        assert_eq!(&f, zt.values(n));
    }
}
