use std::cmp::Ordering;
use std::fmt;

/// Polynomial over GF(2) in the variable `t`, bit `i` holding the
/// coefficient of `t^i`. Limbs never carry trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2::from_bits(1)
    }

    pub fn t() -> Self {
        Poly2::from_bits(2)
    }

    pub fn from_bits(bits: u64) -> Self {
        let mut p = Poly2 { limbs: vec![bits] };
        p.trim();
        p
    }

    pub fn monomial(n: usize) -> Self {
        let mut p = Poly2::zero();
        p.set_bit(n);
        p
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some(64 * (self.limbs.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|limb| (limb >> (i % 64)) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        self.limbs[i / 64] |= 1 << (i % 64);
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let n = self.limbs.len().max(other.limbs.len());
        let mut limbs: Vec<u64> = (0..n)
            .map(|i| self.limbs.get(i).unwrap_or(&0) ^ other.limbs.get(i).unwrap_or(&0))
            .collect();
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Poly2 { limbs }
    }

    pub fn shl(&self, n: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let (words, bits) = (n / 64, n % 64);
        let mut limbs = vec![0u64; words];
        let mut carry = 0u64;
        for &l in &self.limbs {
            limbs.push((l << bits) | carry);
            carry = if bits == 0 { 0 } else { l >> (64 - bits) };
        }
        limbs.push(carry);
        let mut p = Poly2 { limbs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let (Some(da), Some(_)) = (self.degree(), other.degree()) else {
            return Poly2::zero();
        };
        let mut acc = Poly2::zero();
        for i in 0..=da {
            if self.bit(i) {
                acc = acc.add(&other.shl(i));
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            quot.set_bit(dr - dd);
            rem = rem.add(&divisor.shl(dr - dd));
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Splits `self = a(t)^2 + t * b(t)^2`, returning `(a, b)`.
    pub fn square_split(&self) -> (Poly2, Poly2) {
        let mut even = Poly2::zero();
        let mut odd = Poly2::zero();
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.bit(i) {
                    if i % 2 == 0 {
                        even.set_bit(i / 2);
                    } else {
                        odd.set_bit(i / 2);
                    }
                }
            }
        }
        (even, odd)
    }

    /// Square root when every odd coefficient vanishes.
    pub fn sqrt(&self) -> Option<Poly2> {
        let (even, odd) = self.square_split();
        odd.is_zero().then_some(even)
    }

    /// Parses coefficient bits, constant term first (`"01"` is `t`).
    pub fn parse(s: &str) -> Option<Poly2> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        let mut p = Poly2::zero();
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => p.set_bit(i),
                _ => return None,
            }
        }
        Some(p)
    }
}

impl Ord for Poly2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree() {
            None => f.write_str("0"),
            Some(d) => {
                for i in 0..=d {
                    f.write_str(if self.bit(i) { "1" } else { "0" })?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}
