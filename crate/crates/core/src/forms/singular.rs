//! Field-specific search for singular vectors.
//!
//! Over a finite field the search is exhaustive over projective
//! representatives and therefore a decision procedure. Over F2(t) it is a
//! bounded search backed by two exact criteria; when neither applies the
//! answer is [`Error::Inconclusive`].

use super::QuadraticForm;
use crate::error::{Error, Result};
use crate::field::{Field, GaloisField, Gf, Poly2, RatFn, RationalFunctionField};
use crate::linalg::{self, Subspace, Vector};

/// Maximum number of candidate vectors tried by the bounded F2(t) search.
pub const SEARCH_BUDGET: usize = 1 << 16;

pub trait FormField: Field {
    /// The singular vectors of `form` inside `rad`, on which the
    /// bilinearization vanishes identically.
    fn singular_part_of_radical(form: &QuadraticForm<Self>, rad: &Subspace<Self>) -> Result<Subspace<Self>>;

    fn find_singular(form: &QuadraticForm<Self>, avoid: &Subspace<Self>) -> Result<Option<Vector<Self>>>;
}

/// Digits of `index` in base `q`, coordinate `i` carrying weight `q^i`.
/// Counting upward visits vectors in colexicographic order.
fn colex_digits(mut index: usize, q: usize, d: usize, out: &mut [Gf]) {
    for slot in out.iter_mut().take(d) {
        *slot = Gf((index % q) as u8);
        index /= q;
    }
}

/// Normalized projective representatives of `GF(q)^d` (first nonzero
/// coordinate one) in colexicographic order.
pub(crate) fn projective_points(q: usize, d: usize) -> impl Iterator<Item = Vec<Gf>> {
    let total = q.pow(d as u32);
    let mut buf = vec![Gf::ZERO; d];
    (1..total).filter_map(move |idx| {
        colex_digits(idx, q, d, &mut buf);
        let lead = buf.iter().find(|x| **x != Gf::ZERO)?;
        (*lead == Gf::ONE).then(|| buf.clone())
    })
}

impl FormField for GaloisField {
    fn singular_part_of_radical(form: &QuadraticForm<Self>, rad: &Subspace<Self>) -> Result<Subspace<Self>> {
        let q = form.field().size();
        let mut singular = Vec::new();
        for coords in projective_points(q, rad.dim()) {
            let v = rad.lift(&coords)?;
            if form.is_singular(&v)? {
                singular.push(v);
            }
        }
        Subspace::span(form.field(), form.dim(), singular)
    }

    fn find_singular(form: &QuadraticForm<Self>, avoid: &Subspace<Self>) -> Result<Option<Vector<Self>>> {
        let q = form.field().size();
        for v in projective_points(q, form.dim()) {
            if form.is_singular(&v)? && !avoid.contains(&v)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

impl FormField for RationalFunctionField {
    fn singular_part_of_radical(form: &QuadraticForm<Self>, rad: &Subspace<Self>) -> Result<Subspace<Self>> {
        let f = form.field();
        // phi(sum a_i r_i) = sum a_i^2 phi(r_i) on the radical. Writing
        // phi(r_i) = x_i^2 + t y_i^2, this vanishes iff sum a_i x_i = 0 and
        // sum a_i y_i = 0, because 1 and t are independent over the squares.
        let mut xs = Vec::with_capacity(rad.dim());
        let mut ys = Vec::with_capacity(rad.dim());
        for r in rad.basis() {
            let (x, y) = f.square_coordinates(&form.eval(r)?);
            xs.push(x);
            ys.push(y);
        }
        if rad.is_zero() {
            return Ok(rad.clone());
        }
        let kernel = linalg::nullspace(f, vec![xs, ys], rad.dim())?;
        let vecs = kernel.iter().map(|a| rad.lift(a)).collect::<Result<Vec<_>>>()?;
        Subspace::span(f, form.dim(), vecs)
    }

    fn find_singular(form: &QuadraticForm<Self>, avoid: &Subspace<Self>) -> Result<Option<Vector<Self>>> {
        let f = form.field();
        let d = form.dim();
        let poly = PolyForm::clear_denominators(form)?;

        // Degree-bounded search over polynomial coordinate vectors.
        let mut tried = 0usize;
        let mut degree = 0usize;
        loop {
            let per_coord = 1usize << (degree + 1);
            let Some(total) = per_coord.checked_pow(d as u32).filter(|&t| t <= SEARCH_BUDGET) else {
                break;
            };
            for idx in 1..total {
                let coords: Vec<Poly2> = (0..d)
                    .map(|i| Poly2::from_bits(((idx / per_coord.pow(i as u32)) % per_coord) as u64))
                    .collect();
                if coords.iter().all(|c| c.degree().is_none_or(|dc| dc < degree)) {
                    continue; // seen at a lower degree bound
                }
                tried += 1;
                if poly.eval(&coords).is_zero() {
                    let v: Vector<Self> = coords.into_iter().map(RatFn::from_poly).collect();
                    if !avoid.contains(&v)? {
                        return Ok(Some(v));
                    }
                }
            }
            degree += 1;
        }

        // A form whose bilinearization vanishes is semilinear: its singular
        // vectors are exactly a computable subspace.
        let full = Subspace::full(f, d);
        if form.radical_bilinear()?.dim() == d {
            let singular = Self::singular_part_of_radical(form, &full)?;
            for v in singular.basis() {
                if !avoid.contains(v)? {
                    return Ok(Some(v.clone()));
                }
            }
            return Ok(None);
        }

        if poly.parity_certificate() {
            return Ok(None);
        }
        Err(Error::Inconclusive(format!(
            "no singular vector of {form} among {tried} candidates and no anisotropy certificate"
        )))
    }
}

/// A form over F2(t) scaled to polynomial coefficients.
struct PolyForm {
    coeffs: Vec<Vec<Poly2>>,
}

impl PolyForm {
    fn clear_denominators(form: &QuadraticForm<RationalFunctionField>) -> Result<Self> {
        let mut lcm = Poly2::one();
        for row in form.coeffs() {
            for c in row {
                let den = c.denominator();
                let g = lcm.gcd(den);
                lcm = lcm.mul(&den.div_rem(&g).0);
            }
        }
        let coeffs = form
            .coeffs()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.numerator().mul(&lcm.div_rem(c.denominator()).0))
                    .collect()
            })
            .collect();
        Ok(PolyForm { coeffs })
    }

    fn eval(&self, x: &[Poly2]) -> Poly2 {
        let mut acc = Poly2::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, c) in row.iter().enumerate().skip(i) {
                if !c.is_zero() && !x[j].is_zero() {
                    acc = acc.add(&c.mul(&x[i]).mul(&x[j]));
                }
            }
        }
        acc
    }

    /// Degree-parity certificate of anisotropy.
    ///
    /// After rescaling isolated diagonal monomials `t^m x_i^2` to
    /// `t^(m mod 2) x_i^2`, suppose the form splits as `psi0 + t * psi1` with
    /// `psi0`, `psi1` having GF(2) coefficients on disjoint variable sets. If
    /// both are anisotropic over GF(2), then for any nonzero polynomial
    /// vector `deg psi0(x)` is even and `deg t*psi1(x)` odd (leading
    /// coefficients are values of `psi0`, `psi1` at nonzero GF(2)
    /// vectors), so the sum never vanishes.
    fn parity_certificate(&self) -> bool {
        let d = self.coeffs.len();
        let at = |i: usize, j: usize| &self.coeffs[i.min(j)][i.max(j)];
        let isolated = |i: usize| (0..d).all(|j| j == i || at(i, j).is_zero());

        let mut diag: Vec<Poly2> = (0..d).map(|i| at(i, i).clone()).collect();
        for (i, c) in diag.iter_mut().enumerate() {
            if let Some(m) = c.degree() {
                if isolated(i) && *c == Poly2::monomial(m) {
                    *c = Poly2::monomial(m % 2);
                }
            }
        }
        let (odd, even): (Vec<usize>, Vec<usize>) =
            (0..d).partition(|&i| isolated(i) && diag[i] == Poly2::t());

        let constant = |p: &Poly2| p.degree().is_none_or(|x| x == 0);
        for (a, &i) in even.iter().enumerate() {
            if !constant(&diag[i]) {
                return false;
            }
            for &j in &even[a + 1..] {
                if !constant(at(i, j)) {
                    return false;
                }
            }
        }
        // t * sum x_i^2 over GF(2) is anisotropic only on a single variable.
        if odd.len() > 1 {
            return false;
        }
        let n = even.len();
        (1u32..(1 << n)).all(|mask| {
            let bit = |a: usize| (mask >> a) & 1 == 1;
            let mut value = false;
            for a in 0..n {
                if !bit(a) {
                    continue;
                }
                value ^= diag[even[a]].is_one();
                for b in a + 1..n {
                    value ^= bit(b) && at(even[a], even[b]).is_one();
                }
            }
            value
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    fn g(xs: &[u8]) -> Vec<Gf> {
        xs.iter().map(|&x| Gf(x)).collect()
    }

    #[test]
    fn projective_enumeration_counts() {
        for (q, d) in [(2, 3), (3, 3), (4, 2), (5, 2)] {
            let pts: Vec<_> = projective_points(q, d).collect();
            assert_eq!(pts.len(), (q.pow(d as u32) - 1) / (q - 1));
        }
        let order: Vec<_> = projective_points(2, 2).collect();
        assert_eq!(order, vec![g(&[1, 0]), g(&[0, 1]), g(&[1, 1])]);
    }

    #[test]
    fn finite_search_examples() {
        let f2 = gf(2);
        let h = QuadraticForm::from_terms(&f2, 2, &[(0, 1, Gf::ONE)]).unwrap();
        let zero = Subspace::zero(&f2, 2);
        assert_eq!(h.find_singular_vector(&zero).unwrap(), Some(g(&[1, 0])));

        let an = QuadraticForm::from_terms(&f2, 2, &[(0, 0, Gf::ONE), (0, 1, Gf::ONE), (1, 1, Gf::ONE)]).unwrap();
        assert_eq!(an.find_singular_vector(&zero).unwrap(), None);

        let f3 = gf(3);
        let h2 = QuadraticForm::from_terms(&f3, 4, &[(0, 1, Gf::ONE), (2, 3, Gf::ONE)]).unwrap();
        let avoid = Subspace::span(&f3, 4, vec![g(&[1, 0, 0, 0])]).unwrap();
        let v = h2.find_singular_vector(&avoid).unwrap().unwrap();
        // Enumeration oracle: the first singular representative outside span{e0}.
        let oracle = projective_points(3, 4)
            .find(|v| {
                let val = (v[0].0 as u32 * v[1].0 as u32 + v[2].0 as u32 * v[3].0 as u32) % 3;
                val == 0 && *v != g(&[1, 0, 0, 0])
            })
            .unwrap();
        assert_eq!(v, oracle);
        assert_eq!(v, g(&[0, 1, 0, 0]));
    }

    fn f2t_form(dim: usize, terms: &[(usize, usize, &str)]) -> QuadraticForm<RationalFunctionField> {
        let f = RationalFunctionField::new();
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, f.parse_elem(c).unwrap())).collect();
        QuadraticForm::from_terms(&f, dim, &t).unwrap()
    }

    #[test]
    fn f2t_norm_form_plus_t_square_is_certified_anisotropic() {
        // u^2 + uv + v^2 + t w^2
        let q = f2t_form(3, &[(0, 0, "1"), (0, 1, "1"), (1, 1, "1"), (2, 2, "01")]);
        let zero = Subspace::zero(q.field(), 3);
        assert_eq!(q.find_singular_vector(&zero).unwrap(), None);
        // the same with a rescaled isolated coefficient t^3
        let q = f2t_form(3, &[(0, 0, "1"), (0, 1, "1"), (1, 1, "1"), (2, 2, "0001")]);
        assert_eq!(q.find_singular_vector(&zero).unwrap(), None);
    }

    #[test]
    fn f2t_isotropic_forms_are_found() {
        let q = f2t_form(2, &[(0, 1, "1")]);
        let zero = Subspace::zero(q.field(), 2);
        let v = q.find_singular_vector(&zero).unwrap().unwrap();
        assert!(q.is_singular(&v).unwrap());

        // x^2 + t y^2 + (1+t) z^2 has the zero (1,1,1).
        let q = f2t_form(3, &[(0, 0, "1"), (1, 1, "01"), (2, 2, "11")]);
        let v = q.find_singular_vector(&Subspace::zero(q.field(), 3)).unwrap().unwrap();
        assert!(q.is_singular(&v).unwrap());
    }

    #[test]
    fn f2t_semilinear_forms_are_decided() {
        // x^2 + t y^2 is anisotropic; its bilinearization vanishes.
        let q = f2t_form(2, &[(0, 0, "1"), (1, 1, "01")]);
        assert_eq!(q.find_singular_vector(&Subspace::zero(q.field(), 2)).unwrap(), None);
    }

    #[test]
    fn f2t_unrecognized_shapes_are_inconclusive() {
        // (1+t+t^2) x^2 + xy + t^3 y^2: no small zero and no certificate shape.
        let q = f2t_form(2, &[(0, 0, "111"), (0, 1, "1"), (1, 1, "0001")]);
        match q.find_singular_vector(&Subspace::zero(q.field(), 2)) {
            Err(Error::Inconclusive(_)) | Ok(Some(_)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
