use cmpl_core::exact::factor::is_irreducible;
use cmpl_core::exact::{splitting_field_order, IntPoly};
use num_traits::Zero;
use proptest::prelude::*;

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_divisibility(c in prop::collection::vec(-5i64..=5, 1..=4)) {
        let mut coeffs = c.clone();
        coeffs.push(1);
        let f = IntPoly::from_i64(&coeffs);
        prop_assume!(!f.coeff(0).is_zero());
        prop_assume!(is_irreducible(&f).unwrap());
        let n = f.deg() as u64;
        let order = splitting_field_order(&f).unwrap();
        // Transitive subgroup of S_n.
        prop_assert_eq!(order % n, 0);
        prop_assert_eq!(factorial(n) % order, 0);
        if n == 2 {
            prop_assert_eq!(order, 2);
        }
        if n == 3 {
            // A_3 exactly when the discriminant is a square.
            let d = f.discriminant_monic();
            let sq = if d.sign() == num_bigint::Sign::Minus { d.clone() } else { num_integer::Roots::sqrt(&d) };
            prop_assert_eq!(order == 3, d.sign() != num_bigint::Sign::Minus && &sq * &sq == d);
        }
    }
}
