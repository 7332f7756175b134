use std::fmt;

use rand::RngExt;

use super::{Field, Poly2};
use crate::error::{Error, Result};
use crate::SeededRng;

pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Reduced fraction `num / den` over GF(2)[t]: `den != 0` and
/// `gcd(num, den) = 1`; zero is `0 / 1`. Every nonzero polynomial over
/// GF(2) is monic, so the representation is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    num: Poly2,
    den: Poly2,
}

impl RatFn {
    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFn {
            num: p,
            den: Poly2::one(),
        }
    }

    /// Canonical form of `num / den`; `den` must be nonzero.
    pub fn reduce(num: Poly2, den: Poly2) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn::from_poly(Poly2::zero());
        }
        let g = num.gcd(&den);
        RatFn {
            num: num.div_rem(&g).0,
            den: den.div_rem(&g).0,
        }
    }

    pub fn t() -> Self {
        RatFn::from_poly(Poly2::t())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

/// The rational function field F2(t) with a degree cap on numerators and
/// denominators. The cap turns runaway growth into an explicit error.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunctionField {
    degree_cap: usize,
}

impl Default for RationalFunctionField {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalFunctionField {
    pub fn new() -> Self {
        Self::with_degree_cap(DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(degree_cap: usize) -> Self {
        RationalFunctionField { degree_cap }
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    fn capped(&self, r: RatFn) -> Result<RatFn> {
        let degree = r.num.degree().unwrap_or(0).max(r.den.degree().unwrap_or(0));
        if degree > self.degree_cap {
            return Err(Error::DegreeOverflow {
                degree,
                cap: self.degree_cap,
            });
        }
        Ok(r)
    }

    /// Writes `a = x^2 + t * y^2`, the coordinates of `a` in the basis
    /// `{1, t}` of F2(t) over its subfield of squares.
    pub fn square_coordinates(&self, a: &RatFn) -> (RatFn, RatFn) {
        // a = num*den / den^2, and num*den = e(t)^2 + t*o(t)^2.
        let (e, o) = a.num.mul(&a.den).square_split();
        (
            RatFn::reduce(e, a.den.clone()),
            RatFn::reduce(o, a.den.clone()),
        )
    }
}

impl fmt::Display for RationalFunctionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("F2T")
    }
}

impl Field for RationalFunctionField {
    type Elem = RatFn;

    fn zero(&self) -> RatFn {
        RatFn::from_poly(Poly2::zero())
    }

    fn one(&self) -> RatFn {
        RatFn::from_poly(Poly2::one())
    }

    fn characteristic(&self) -> u32 {
        2
    }

    fn add(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        if a.den == b.den {
            return self.capped(RatFn::reduce(a.num.add(&b.num), a.den.clone()));
        }
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        self.capped(RatFn::reduce(num, a.den.mul(&b.den)))
    }

    fn neg(&self, a: &RatFn) -> RatFn {
        a.clone()
    }

    fn mul(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        if a.num.is_zero() || b.num.is_zero() {
            return Ok(self.zero());
        }
        // Cross-cancel first so intermediate products stay small.
        let g1 = a.num.gcd(&b.den);
        let g2 = b.num.gcd(&a.den);
        let num = a.num.div_rem(&g1).0.mul(&b.num.div_rem(&g2).0);
        let den = a.den.div_rem(&g2).0.mul(&b.den.div_rem(&g1).0);
        self.capped(RatFn { num, den })
    }

    fn inv(&self, a: &RatFn) -> Result<RatFn> {
        if a.num.is_zero() {
            return Err(Error::DivisionByZero {
                numerator: "1".into(),
            });
        }
        Ok(RatFn {
            num: a.den.clone(),
            den: a.num.clone(),
        })
    }

    fn from_int(&self, n: i64) -> RatFn {
        if n.rem_euclid(2) == 0 {
            self.zero()
        } else {
            self.one()
        }
    }

    fn sqrt(&self, a: &RatFn) -> Option<RatFn> {
        // In lowest terms a = (c/d)^2 forces num = c^2 and den = d^2.
        Some(RatFn {
            num: a.num.sqrt()?,
            den: a.den.sqrt()?,
        })
    }

    fn square_class_degree(&self) -> Result<usize> {
        Ok(2)
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn elements(&self) -> Result<Vec<RatFn>> {
        Err(Error::NotEnumerable(self.to_string()))
    }

    fn random_elem(&self, rng: &mut SeededRng) -> RatFn {
        let num = Poly2::from_bits(rng.random_range(0..8));
        let den = Poly2::from_bits(rng.random_range(1..8));
        RatFn::reduce(num, den)
    }

    fn format_elem(&self, a: &RatFn) -> String {
        if a.den.is_one() {
            a.num.to_string()
        } else {
            format!("{}/{}", a.num, a.den)
        }
    }

    fn parse_elem(&self, s: &str) -> std::result::Result<RatFn, String> {
        let bad = || format!("bad F2(t) literal {s:?}");
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                Poly2::parse(n).ok_or_else(bad)?,
                Poly2::parse(d).ok_or_else(bad)?,
            ),
            None => (Poly2::parse(s).ok_or_else(bad)?, Poly2::one()),
        };
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        self.capped(RatFn::reduce(num, den)).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn field() -> RationalFunctionField {
        RationalFunctionField::new()
    }

    fn lit(s: &str) -> RatFn {
        field().parse_elem(s).unwrap()
    }

    #[test]
    fn sum_of_reciprocals() {
        // Oracle by hand: 1/t + 1/(t+1) = ((t+1) + t) / (t(t+1)) = 1/(t^2+t).
        let t = Poly2::t();
        let t1 = Poly2::from_bits(0b11);
        let num = t1.add(&t);
        let den = t.mul(&t1);
        assert_eq!(num, Poly2::one());
        assert_eq!(den, Poly2::from_bits(0b110));
        let f = field();
        let sum = f.add(&lit("1/01"), &lit("1/11")).unwrap();
        assert_eq!(sum, RatFn::reduce(num, den));
        assert_eq!(f.format_elem(&sum), "1/011");
    }

    #[test]
    fn squares_live_in_even_powers() {
        let f = field();
        assert_eq!(f.sqrt(&RatFn::t()), None);
        let a = lit("11/101"); // (1+t)/(1+t^2) reduces to 1/(1+t)
        assert_eq!(a, lit("1/11"));
        let sq = f.mul(&a, &a).unwrap();
        assert_eq!(f.sqrt(&sq), Some(a));
    }

    #[test]
    fn one_and_t_span_over_squares() {
        let f = field();
        // 1 and t are independent over K^2: t is not a square, and
        // x^2 + t y^2 = 0 forces x = y = 0 since t = (x/y)^2 is impossible.
        assert!(f.sqrt(&RatFn::t()).is_none());
        let mut rng = SeededRng::seed_from_u64(7);
        for _ in 0..200 {
            let a = f.random_elem(&mut rng);
            let (x, y) = f.square_coordinates(&a);
            let x2 = f.mul(&x, &x).unwrap();
            let y2t = f.mul(&RatFn::t(), &f.mul(&y, &y).unwrap()).unwrap();
            assert_eq!(f.add(&x2, &y2t).unwrap(), a);
            // the decomposition's squared parts are certified by the square test
            assert!(f.sqrt(&x2).is_some());
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let f = RationalFunctionField::with_degree_cap(8);
        let big = RatFn::from_poly(Poly2::monomial(5));
        assert!(matches!(
            f.mul(&big, &big),
            Err(Error::DegreeOverflow { degree: 10, cap: 8 })
        ));
        assert!(f.parse_elem("0000000001").is_err());
    }

    fn ratfn() -> impl Strategy<Value = RatFn> {
        (0u64..64, 1u64..64).prop_map(|(n, d)| RatFn::reduce(Poly2::from_bits(n), Poly2::from_bits(d)))
    }

    proptest! {
        #[test]
        fn canonical_form_is_a_fixed_point(xs in prop::collection::vec(ratfn(), 1..=6), ops in prop::collection::vec(any::<bool>(), 6)) {
            let f = field();
            let mut acc = xs[0].clone();
            for (x, &mul) in xs.iter().skip(1).zip(&ops) {
                acc = if mul { f.mul(&acc, x).unwrap() } else { f.add(&acc, x).unwrap() };
            }
            let again = RatFn::reduce(acc.num.clone(), acc.den.clone());
            prop_assert_eq!(&again, &acc);
            prop_assert!(acc.num.gcd(&acc.den).is_one());
        }

        #[test]
        fn inverse_and_distributivity(a in ratfn(), b in ratfn(), c in ratfn()) {
            let f = field();
            if !f.is_zero(&a) {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()).unwrap(), f.one());
            }
            let lhs = f.mul(&a, &f.add(&b, &c).unwrap()).unwrap();
            let rhs = f.add(&f.mul(&a, &b).unwrap(), &f.mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
