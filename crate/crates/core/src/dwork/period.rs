use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::classical_hgf_partial;

/// N-term partial sum of F(1/d, …, (d-1)/d; 1, …, 1 | z), the period series
/// of X_λ^d in z = 1/λ^d.
pub fn period_value(d: u32, z: &BigRational, terms: usize) -> Result<BigRational> {
    if d < 2 || terms == 0 {
        return Err(Error::Domain("period series needs d >= 2 and at least one term".into()));
    }
    let upper: Vec<BigRational> = (1..d as i64).map(|i| BigRational::new(i.into(), (d as i64).into())).collect();
    let lower = vec![BigRational::from_integer(1.into()); d as usize - 2];
    classical_hgf_partial(&upper, &lower, z, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn value_at_zero() {
        assert_eq!(period_value(4, &BigRational::zero(), 10).unwrap(), BigRational::one());
    }

    #[test]
    fn quartic_coefficients_follow_recurrence() {
        // a_{m+1} = (4m+1)(4m+2)(4m+3)/(64(m+1)³) a_m, read off successive partials at z = 1.
        let one = BigRational::one();
        let mut a = one.clone();
        for m in 0..8i64 {
            let next = &a * r((4 * m + 1) * (4 * m + 2) * (4 * m + 3), 64 * (m + 1).pow(3));
            let diff = period_value(4, &one, m as usize + 2).unwrap() - period_value(4, &one, m as usize + 1).unwrap();
            assert_eq!(diff, next);
            a = next;
        }
    }

    #[test]
    fn quintic_three_terms() {
        // 1 + (1·2·3·4/5⁴) z + ((1·6)(2·7)(3·8)(4·9)/(5⁸·2!·2!³)) z².
        let z = r(1, 7);
        let c1 = r(24, 625);
        let c2 = r(6 * 14 * 24 * 36, 390625 * 16);
        let expect = BigRational::one() + &c1 * &z + &c2 * &z * &z;
        assert_eq!(period_value(5, &z, 3).unwrap(), expect);
    }
}
