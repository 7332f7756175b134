//! Exact scalar fields.
//!
//! Every algorithm in this crate is generic over [`Field`]. Two concrete
//! families exist: the finite fields [`GaloisField`] (prime and extension
//! fields of order at most 64) and the rational function field
//! [`RationalFunctionField`] over GF(2). [`FieldSpec`] and [`FieldElement`]
//! are the dynamically typed wrappers used at the text boundary, where the
//! field is only known after parsing.

mod galois;
mod poly2;
mod ratfn;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

pub use galois::{GaloisField, Gf, MAX_FIELD_ORDER};
pub use poly2::Poly2;
pub use ratfn::{RatFn, RationalFunctionField, DEFAULT_DEGREE_CAP};

use crate::error::{Error, Result};
use crate::SeededRng;

/// A commutative field with exact, canonical element representations.
///
/// Arithmetic is fallible only where a concrete field has a hard resource
/// cap (polynomial degree over F2(t)) or a zero divisor is supplied.
pub trait Field: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn characteristic(&self) -> u32;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Fails with [`Error::DivisionByZero`] on zero.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if self.is_zero(b) {
            return Err(Error::DivisionByZero {
                numerator: self.format_elem(a),
            });
        }
        self.mul(a, &self.inv(b)?)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Image of an integer under the canonical ring map Z -> K.
    fn from_int(&self, n: i64) -> Self::Elem;

    /// Square root witness: `Some(b)` with `b * b == a` exactly, or `None`
    /// when `a` is not a square.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// `[K : K^2]` as a dimension over the subfield of squares.
    fn square_class_degree(&self) -> Result<usize>;

    /// Number of elements, or `None` for an infinite field.
    fn order(&self) -> Option<usize>;

    /// All elements, zero first, in a deterministic order.
    fn elements(&self) -> Result<Vec<Self::Elem>>;

    fn random_elem(&self, rng: &mut SeededRng) -> Self::Elem;

    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> std::result::Result<Self::Elem, String>;

    fn is_finite(&self) -> bool {
        self.order().is_some()
    }
}

/// A field chosen at runtime from its text syntax.
///
/// Syntax: `GF p`, `GF p^k c0,c1,...,ck` (modulus coefficients, constant
/// term first) or `F2T`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Galois(GaloisField),
    RationalFunction(RationalFunctionField),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Galois(f) => f.characteristic(),
            FieldSpec::RationalFunction(f) => f.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Galois(_))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let value = match self {
            FieldSpec::Galois(f) => ElementValue::Galois(f.from_int(n)),
            FieldSpec::RationalFunction(f) => ElementValue::Rational(f.from_int(n)),
        };
        FieldElement {
            spec: self.clone(),
            value,
        }
    }

    /// Parses an element literal in this field's syntax.
    pub fn element(&self, literal: &str) -> Result<FieldElement> {
        let value = match self {
            FieldSpec::Galois(f) => ElementValue::Galois(
                f.parse_elem(literal).map_err(Error::InvalidField)?,
            ),
            FieldSpec::RationalFunction(f) => ElementValue::Rational(
                f.parse_elem(literal).map_err(Error::InvalidField)?,
            ),
        };
        Ok(FieldElement {
            spec: self.clone(),
            value,
        })
    }

    /// Every element exactly once, zero first; fails on F2(t).
    pub fn enumerate_elements(&self) -> Result<Vec<FieldElement>> {
        match self {
            FieldSpec::Galois(f) => Ok(f
                .elements()?
                .into_iter()
                .map(|e| FieldElement {
                    spec: self.clone(),
                    value: ElementValue::Galois(e),
                })
                .collect()),
            FieldSpec::RationalFunction(f) => f.elements().map(|_| Vec::new()),
        }
    }

    /// Decides whether `a` is a square, returning a witness `b` with `b*b = a`.
    pub fn is_square(&self, a: &FieldElement) -> Result<Option<FieldElement>> {
        self.check_owner(a)?;
        let root = match (&self, &a.value) {
            (FieldSpec::Galois(f), ElementValue::Galois(x)) => f.sqrt(x).map(ElementValue::Galois),
            (FieldSpec::RationalFunction(f), ElementValue::Rational(x)) => {
                f.sqrt(x).map(ElementValue::Rational)
            }
            _ => unreachable!("owner checked"),
        };
        Ok(root.map(|value| FieldElement {
            spec: self.clone(),
            value,
        }))
    }

    pub fn square_class_degree(&self) -> Result<usize> {
        match self {
            FieldSpec::Galois(f) => f.square_class_degree(),
            FieldSpec::RationalFunction(f) => f.square_class_degree(),
        }
    }

    fn check_owner(&self, a: &FieldElement) -> Result<()> {
        if &a.spec != self {
            return Err(Error::FieldMismatch {
                left: self.to_string(),
                right: a.spec.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Galois(g) => write!(f, "{g}"),
            FieldSpec::RationalFunction(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::InvalidField(format!("cannot parse field spec {s:?}"));
        match tokens.as_slice() {
            ["F2T"] => Ok(FieldSpec::RationalFunction(RationalFunctionField::new())),
            ["GF", order] if !order.contains('^') => {
                let p: u32 = order.parse().map_err(|_| bad())?;
                Ok(FieldSpec::Galois(GaloisField::prime(p)?))
            }
            ["GF", order, modulus] => {
                let (p, k) = order.split_once('^').ok_or_else(bad)?;
                let p: u32 = p.parse().map_err(|_| bad())?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                let coeffs = modulus
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                if coeffs.len() != k as usize + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus of GF({p}^{k}) needs {} coefficients, got {}",
                        k + 1,
                        coeffs.len()
                    )));
                }
                Ok(FieldSpec::Galois(GaloisField::extension(p, &coeffs)?))
            }
            ["GF", order] => {
                // `GF p^1` without a modulus is the prime field.
                let (p, k) = order.split_once('^').ok_or_else(bad)?;
                if k != "1" {
                    return Err(Error::InvalidField(format!(
                        "extension field {order} requires a modulus"
                    )));
                }
                Ok(FieldSpec::Galois(GaloisField::prime(p.parse().map_err(|_| bad())?)?))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementValue {
    Galois(Gf),
    Rational(RatFn),
}

/// A scalar tagged with the field it lives in. Mixing fields is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldElement {
    spec: FieldSpec,
    value: ElementValue,
}

macro_rules! dispatch_binary {
    ($self:ident, $other:ident, $op:ident) => {{
        $self.spec.check_owner($other)?;
        let value = match (&$self.spec, &$self.value, &$other.value) {
            (FieldSpec::Galois(f), ElementValue::Galois(a), ElementValue::Galois(b)) => {
                ElementValue::Galois(f.$op(a, b)?)
            }
            (
                FieldSpec::RationalFunction(f),
                ElementValue::Rational(a),
                ElementValue::Rational(b),
            ) => ElementValue::Rational(f.$op(a, b)?),
            _ => unreachable!("owner checked"),
        };
        Ok(FieldElement {
            spec: $self.spec.clone(),
            value,
        })
    }};
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn value(&self) -> &ElementValue {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match (&self.spec, &self.value) {
            (FieldSpec::Galois(f), ElementValue::Galois(a)) => f.is_zero(a),
            (FieldSpec::RationalFunction(f), ElementValue::Rational(a)) => f.is_zero(a),
            _ => unreachable!(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        dispatch_binary!(self, other, add)
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        dispatch_binary!(self, other, sub)
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        dispatch_binary!(self, other, mul)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        dispatch_binary!(self, other, div)
    }

    pub fn neg(&self) -> FieldElement {
        let value = match (&self.spec, &self.value) {
            (FieldSpec::Galois(f), ElementValue::Galois(a)) => ElementValue::Galois(f.neg(a)),
            (FieldSpec::RationalFunction(f), ElementValue::Rational(a)) => {
                ElementValue::Rational(f.neg(a))
            }
            _ => unreachable!(),
        };
        FieldElement {
            spec: self.spec.clone(),
            value,
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let value = match (&self.spec, &self.value) {
            (FieldSpec::Galois(f), ElementValue::Galois(a)) => ElementValue::Galois(f.inv(a)?),
            (FieldSpec::RationalFunction(f), ElementValue::Rational(a)) => {
                ElementValue::Rational(f.inv(a)?)
            }
            _ => unreachable!(),
        };
        Ok(FieldElement {
            spec: self.spec.clone(),
            value,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (&self.spec, &self.value) {
            (FieldSpec::Galois(g), ElementValue::Galois(a)) => g.format_elem(a),
            (FieldSpec::RationalFunction(r), ElementValue::Rational(a)) => r.format_elem(a),
            _ => unreachable!(),
        };
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_syntax_round_trips() {
        for text in ["GF 2", "GF 3", "GF 2^2 1,1,1", "GF 2^3 1,1,0,1", "F2T"] {
            let spec: FieldSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("GF 4".parse::<FieldSpec>().is_err());
        assert!("GF 2^2".parse::<FieldSpec>().is_err());
        assert!("GF 2^2 1,0,1".parse::<FieldSpec>().is_err(), "x^2+1 is reducible");
        assert!("F3T".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn gf3_addition_wraps() {
        let f: FieldSpec = "GF 3".parse().unwrap();
        let two = f.from_int(2);
        assert_eq!(two.add(&two).unwrap(), f.from_int(1));
    }

    #[test]
    fn gf4_generator_squares_to_successor() {
        let f: FieldSpec = "GF 2^2 1,1,1".parse().unwrap();
        let x = f.element("0:1").unwrap();
        assert_eq!(x.mul(&x).unwrap(), f.element("1:1").unwrap());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let f2: FieldSpec = "GF 2".parse().unwrap();
        let f3: FieldSpec = "GF 3".parse().unwrap();
        let err = f2.one().add(&f3.one()).unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
        assert!(matches!(
            f2.is_square(&f3.one()),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn division_by_zero_names_the_operand() {
        let f: FieldSpec = "GF 5".parse().unwrap();
        let err = f.from_int(3).div(&f.zero()).unwrap_err();
        assert_eq!(
            err,
            Error::DivisionByZero {
                numerator: "3".into()
            }
        );
        assert!(f.zero().inv().is_err());
    }

    #[test]
    fn enumeration_and_square_classes() {
        let gf2: FieldSpec = "GF 2".parse().unwrap();
        let elems = gf2.enumerate_elements().unwrap();
        assert_eq!(elems, vec![gf2.zero(), gf2.one()]);

        let gf4: FieldSpec = "GF 2^2 1,1,1".parse().unwrap();
        let elems = gf4.enumerate_elements().unwrap();
        assert_eq!(elems.len(), 4);
        assert!(elems[0].is_zero());
        for a in &elems {
            let b = gf4.is_square(a).unwrap().expect("perfect field");
            assert_eq!(&b.mul(&b).unwrap(), a);
        }

        let f2t: FieldSpec = "F2T".parse().unwrap();
        assert!(matches!(
            f2t.enumerate_elements(),
            Err(Error::NotEnumerable(_))
        ));
        assert_eq!(f2t.is_square(&f2t.element("01").unwrap()).unwrap(), None);

        let gf3: FieldSpec = "GF 3".parse().unwrap();
        assert_eq!(gf3.is_square(&gf3.from_int(2)).unwrap(), None);

        assert_eq!(
            "GF 2^3 1,1,0,1".parse::<FieldSpec>().unwrap().square_class_degree(),
            Ok(1)
        );
        assert_eq!(f2t.square_class_degree(), Ok(2));
        assert_eq!(gf3.square_class_degree(), Err(Error::OddCharacteristic(3)));
    }
}
