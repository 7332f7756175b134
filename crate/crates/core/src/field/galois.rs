use std::fmt;
use std::sync::Arc;

use rand::RngExt;

use super::Field;
use crate::error::{Error, Result};
use crate::SeededRng;

/// Largest supported field order. Every operation is a table lookup.
pub const MAX_FIELD_ORDER: usize = 64;

/// Element of a [`GaloisField`], stored as the index `sum a_i p^i` of its
/// coefficient vector `(a_0, ..., a_{k-1})` over the prime field.
///
/// Index order is the enumeration order: zero first, then lexicographic on
/// the coefficient vector read from the highest-degree coefficient down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf(pub u8);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// GF(p^k) with `p^k <= 64`, backed by precomputed operation tables.
#[derive(Clone)]
pub struct GaloisField {
    tables: Arc<Tables>,
}

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    /// Monic modulus, constant term first; `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    add: Vec<Gf>,
    mul: Vec<Gf>,
    neg: Vec<Gf>,
    inv: Vec<Gf>,
    sqrt: Vec<Option<Gf>>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Remainder of `a` modulo `b` over GF(p); `b` must have a nonzero leading
/// coefficient. Both are coefficient vectors, constant term first.
fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let factor = top * lead_inv % p;
            let shift = a.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - factor * c % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero residue")
}

impl GaloisField {
    pub fn prime(p: u32) -> Result<Self> {
        Self::build(p, vec![0, 1])
    }

    /// GF(p^k) as GF(p)[x]/(modulus); `modulus` has `k + 1` coefficients,
    /// constant term first, and must be irreducible over GF(p).
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        Self::build(p, modulus.to_vec())
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus coefficients must be residues mod {p}"
            )));
        }
        let k = (modulus.len() - 1) as u32;
        let lead = *modulus.last().unwrap();
        if lead == 0 {
            return Err(Error::InvalidField("modulus has zero leading coefficient".into()));
        }
        let q = (p as usize)
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| {
                Error::InvalidField(format!("GF({p}^{k}) exceeds order {MAX_FIELD_ORDER}"))
            })?;
        let lead_inv = mod_inv(lead, p);
        let modulus: Vec<u32> = modulus.iter().map(|&c| c * lead_inv % p).collect();
        if k > 1 && !Self::irreducible(p, &modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }

        let digits = |idx: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = idx;
            for _ in 0..k {
                v.push((x % p as usize) as u32);
                x /= p as usize;
            }
            v
        };
        let index = |v: &[u32]| -> u8 {
            v.iter()
                .rev()
                .fold(0usize, |acc, &c| acc * p as usize + c as usize) as u8
        };

        let mut add = vec![Gf::ZERO; q * q];
        let mut mul = vec![Gf::ZERO; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = Gf(index(&sum));

                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut rem = poly_rem(prod, &modulus, p);
                rem.resize(k as usize, 0);
                mul[a * q + b] = Gf(index(&rem));
            }
        }
        let neg = (0..q)
            .map(|a| Gf((0..q).find(|&b| add[a * q + b] == Gf::ZERO).unwrap() as u8))
            .collect();
        let inv = (0..q)
            .map(|a| {
                Gf((0..q)
                    .find(|&b| a != 0 && mul[a * q + b] == Gf::ONE)
                    .unwrap_or(0) as u8)
            })
            .collect();
        let sqrt = (0..q)
            .map(|a| (0..q).find(|&b| mul[b * q + b] == Gf(a as u8)).map(|b| Gf(b as u8)))
            .collect();

        Ok(GaloisField {
            tables: Arc::new(Tables {
                p,
                k,
                q,
                modulus,
                add,
                mul,
                neg,
                inv,
                sqrt,
            }),
        })
    }

    /// Trial division by every monic polynomial of degree 1..k-1.
    fn irreducible(p: u32, modulus: &[u32]) -> bool {
        let k = modulus.len() - 1;
        for deg in 1..k {
            let count = (p as usize).pow(deg as u32);
            for low in 0..count {
                let mut divisor = Vec::with_capacity(deg + 1);
                let mut x = low;
                for _ in 0..deg {
                    divisor.push((x % p as usize) as u32);
                    x /= p as usize;
                }
                divisor.push(1);
                if poly_rem(modulus.to_vec(), &divisor, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.tables.q
    }

    pub fn degree(&self) -> u32 {
        self.tables.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.tables.modulus
    }

    #[inline]
    pub fn add_elem(&self, a: Gf, b: Gf) -> Gf {
        self.tables.add[a.index() * self.tables.q + b.index()]
    }

    #[inline]
    pub fn mul_elem(&self, a: Gf, b: Gf) -> Gf {
        self.tables.mul[a.index() * self.tables.q + b.index()]
    }

    #[inline]
    pub fn neg_elem(&self, a: Gf) -> Gf {
        self.tables.neg[a.index()]
    }

    /// Inverse; `None` for zero.
    #[inline]
    pub fn inv_elem(&self, a: Gf) -> Option<Gf> {
        (a != Gf::ZERO).then(|| self.tables.inv[a.index()])
    }

    pub fn coefficients(&self, a: Gf) -> Vec<u32> {
        let p = self.tables.p as usize;
        let mut x = a.index();
        (0..self.tables.k)
            .map(|_| {
                let c = (x % p) as u32;
                x /= p;
                c
            })
            .collect()
    }
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaloisField({self})")
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tables;
        if t.k == 1 {
            write!(f, "GF {}", t.p)
        } else {
            let m: Vec<String> = t.modulus.iter().map(u32::to_string).collect();
            write!(f, "GF {}^{} {}", t.p, t.k, m.join(","))
        }
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tables, &other.tables)
            || (self.tables.p == other.tables.p && self.tables.modulus == other.tables.modulus)
    }
}

impl Field for GaloisField {
    type Elem = Gf;

    fn zero(&self) -> Gf {
        Gf::ZERO
    }

    fn one(&self) -> Gf {
        Gf::ONE
    }

    fn characteristic(&self) -> u32 {
        self.tables.p
    }

    fn add(&self, a: &Gf, b: &Gf) -> Result<Gf> {
        Ok(self.add_elem(*a, *b))
    }

    fn neg(&self, a: &Gf) -> Gf {
        self.neg_elem(*a)
    }

    fn mul(&self, a: &Gf, b: &Gf) -> Result<Gf> {
        Ok(self.mul_elem(*a, *b))
    }

    fn inv(&self, a: &Gf) -> Result<Gf> {
        self.inv_elem(*a).ok_or_else(|| Error::DivisionByZero {
            numerator: "1".into(),
        })
    }

    fn from_int(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.tables.p as i64) as u8)
    }

    fn sqrt(&self, a: &Gf) -> Option<Gf> {
        self.tables.sqrt[a.index()]
    }

    fn square_class_degree(&self) -> Result<usize> {
        if self.tables.p != 2 {
            return Err(Error::OddCharacteristic(self.tables.p));
        }
        // Frobenius is onto in a finite field.
        Ok(1)
    }

    fn order(&self) -> Option<usize> {
        Some(self.tables.q)
    }

    fn elements(&self) -> Result<Vec<Gf>> {
        Ok((0..self.tables.q).map(|i| Gf(i as u8)).collect())
    }

    fn random_elem(&self, rng: &mut SeededRng) -> Gf {
        Gf(rng.random_range(0..self.tables.q) as u8)
    }

    fn format_elem(&self, a: &Gf) -> String {
        if self.tables.k == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coefficients(*a).iter().map(u32::to_string).collect();
            c.join(":")
        }
    }

    fn parse_elem(&self, s: &str) -> std::result::Result<Gf, String> {
        let t = &self.tables;
        let s = s.trim();
        if t.k == 1 {
            let n: i64 = s.parse().map_err(|_| format!("bad GF({}) literal {s:?}", t.p))?;
            return Ok(self.from_int(n));
        }
        let coeffs: Vec<u32> = s
            .split(':')
            .map(|c| c.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| format!("bad extension literal {s:?}"))?;
        if coeffs.len() > t.k as usize || coeffs.iter().any(|&c| c >= t.p) {
            // A bare integer is accepted as a prime-field residue.
            return Err(format!("extension literal {s:?} needs at most {} residues mod {}", t.k, t.p));
        }
        let idx = coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * t.p as usize + c as usize);
        Ok(Gf(idx as u8))
    }
}
