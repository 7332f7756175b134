use std::fmt;

use serde::Serialize;

use super::{FormField, QuadraticForm};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Subspace, Vector};

/// `V = (H_1 + ... + H_n) + V0' + Rad(f)`, an orthogonal splitting into
/// hyperbolic planes `H_i = <v_i, w_i>`, an anisotropic complement `V0'` and
/// the radical of the bilinearization.
#[derive(Debug, Clone, PartialEq)]
pub struct WittDecomposition<F: Field> {
    pub pairs: Vec<(Vector<F>, Vector<F>)>,
    pub anisotropic_complement: Subspace<F>,
    pub radical: Subspace<F>,
}

impl<F: Field> WittDecomposition<F> {
    pub fn witt_index(&self) -> usize {
        self.pairs.len()
    }

    /// `V0 = V0' + Rad(f)`, the complement of the hyperbolic part.
    pub fn anisotropic_part(&self) -> Result<Subspace<F>> {
        self.anisotropic_complement.sum(&self.radical)
    }

    /// Re-checks every structural property against `form`: hyperbolic pair
    /// conditions, orthogonality between blocks and the dimension count.
    pub fn verify(&self, form: &QuadraticForm<F>) -> Result<()> {
        let f = form.field();
        let bil = form.bilinearize();
        let fail = |msg: String| Err(Error::Precondition(format!("decomposition: {msg}")));
        let mut blocks: Vec<Vec<Vector<F>>> = self
            .pairs
            .iter()
            .map(|(v, w)| vec![v.clone(), w.clone()])
            .collect();
        blocks.push(self.anisotropic_complement.basis().to_vec());
        blocks.push(self.radical.basis().to_vec());

        for (i, (v, w)) in self.pairs.iter().enumerate() {
            if !form.is_singular(v)? || !form.is_singular(w)? {
                return fail(format!("pair {i} is not singular"));
            }
            if !f.is_one(&bil.eval(v, w)?) {
                return fail(format!("pair {i} has f(v, w) != 1"));
            }
        }
        for a in 0..blocks.len() {
            for b in a + 1..blocks.len() {
                for x in &blocks[a] {
                    for y in &blocks[b] {
                        if !f.is_zero(&bil.eval(x, y)?) {
                            return fail(format!("blocks {a} and {b} are not orthogonal"));
                        }
                    }
                }
            }
        }
        let all: Vec<Vector<F>> = blocks.into_iter().flatten().collect();
        let total = 2 * self.pairs.len() + self.anisotropic_complement.dim() + self.radical.dim();
        if total != form.dim() || linalg::rank(f, all)? != form.dim() {
            return fail("blocks do not form a direct sum of the whole space".into());
        }
        if self.radical != form.radical_bilinear()? {
            return fail("radical block is not Rad(f)".into());
        }
        Ok(())
    }
}

/// Splits off hyperbolic pairs until the remainder is anisotropic.
///
/// Each round takes the first singular vector `v` of the current block (in
/// the field's search order), the first basis vector `w` of the block with
/// `f(v, w) != 0`, rescales to `f(v, w) = 1`, corrects `w -= phi(w) v` so
/// that `w` is singular, and continues in the `f`-orthogonal complement of
/// `<v, w>`.
pub fn witt_decompose<F: FormField>(form: &QuadraticForm<F>) -> Result<WittDecomposition<F>> {
    let f = form.field();
    let d = form.dim();
    let radical_form = form.radical_form()?;
    if !radical_form.is_zero() {
        return Err(Error::Degenerate {
            radical_dim: radical_form.dim(),
        });
    }
    let bil = form.bilinearize();
    let radical = bil.radical()?;

    let mut block = Subspace::full(f, d);
    let mut pairs = Vec::new();
    loop {
        let local = form.restrict(&block)?;
        let avoid = local_coordinates(&block, &radical)?;
        let Some(coords) = local.find_singular_vector(&avoid)? else {
            break;
        };
        let v = block.lift(&coords)?;
        let fv = bil.functional(&v)?;
        let (w, fvw) = block
            .basis()
            .iter()
            .find_map(|b| {
                let x = linalg::dot(f, b, &fv).ok()?;
                (!f.is_zero(&x)).then(|| (b.clone(), x))
            })
            .ok_or_else(|| Error::Precondition("singular vector lies in the radical".into()))?;
        let w = linalg::scale(f, &f.inv(&fvw)?, &w)?;
        let correction = f.neg(&form.eval(&w)?);
        let w = linalg::axpy(f, &w, &correction, &v)?;
        block = bil.perp_within(&block, &[v.clone(), w.clone()])?;
        pairs.push((v, w));
        if block.is_zero() {
            break;
        }
    }
    let anisotropic_complement = radical.complement_in(&block)?;
    Ok(WittDecomposition {
        pairs,
        anisotropic_complement,
        radical,
    })
}

/// `sub` (contained in `block`) expressed in the echelon coordinates of `block`.
fn local_coordinates<F: Field>(block: &Subspace<F>, sub: &Subspace<F>) -> Result<Subspace<F>> {
    let f = block.field();
    let mut coords = Vec::new();
    for v in sub.basis() {
        if let Some(c) = block.coordinates(v)? {
            coords.push(c);
        }
    }
    if block.is_zero() {
        return Ok(Subspace::zero(f, 0));
    }
    Subspace::span(f, block.dim(), coords)
}

/// Number of hyperbolic pairs in the non-degenerate part of a possibly
/// degenerate form, together with `dim Rad(phi)`.
///
/// The largest totally singular subspaces have dimension equal to the sum.
pub fn hyperbolic_rank<F: FormField>(form: &QuadraticForm<F>) -> Result<(usize, usize)> {
    let rad = form.radical_form()?;
    let full = Subspace::full(form.field(), form.dim());
    let complement = rad.complement_in(&full)?;
    if complement.is_zero() {
        return Ok((0, rad.dim()));
    }
    let nondegenerate = form.restrict(&complement)?;
    Ok((witt_decompose(&nondegenerate)?.witt_index(), rad.dim()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Hyperbolic,
    Elliptic,
    Parabolic,
    /// Both gaps positive.
    Orthogonal { e: usize, p: usize },
}

impl Label {
    pub fn from_gaps(e: usize, p: usize) -> Label {
        match (e, p) {
            (0, 0) => Label::Hyperbolic,
            (_, 0) => Label::Elliptic,
            (0, _) => Label::Parabolic,
            (e, p) => Label::Orthogonal { e, p },
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Hyperbolic => f.write_str("hyperbolic"),
            Label::Elliptic => f.write_str("elliptic"),
            Label::Parabolic => f.write_str("parabolic"),
            Label::Orthogonal { e, p } => write!(f, "(e,p)=({e},{p})-orthogonal"),
        }
    }
}

/// Rank `n`, elliptic gap `e = dim V0'`, parabolic gap `p = dim Rad(f)` and
/// anisotropic gap `r = e + p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub e: usize,
    pub p: usize,
    pub r: usize,
    pub label: Label,
}

impl GapReport {
    pub fn new(n: usize, e: usize, p: usize) -> Self {
        GapReport {
            n,
            e,
            p,
            r: e + p,
            label: Label::from_gaps(e, p),
        }
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.r, self.e, self.p)
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, n={}, e={}, p={}, r={}",
            self.label, self.n, self.e, self.p, self.r
        )
    }
}

pub fn gaps<F: FormField>(form: &QuadraticForm<F>) -> Result<GapReport> {
    let dec = witt_decompose(form)?;
    if dec.witt_index() == 0 {
        return Err(Error::Precondition(format!(
            "form {form} is anisotropic (Witt index 0)"
        )));
    }
    Ok(GapReport::new(
        dec.witt_index(),
        dec.anisotropic_complement.dim(),
        dec.radical.dim(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Gf, RatFn, RationalFunctionField};

    fn form(p: u32, dim: usize, terms: &[(usize, usize, u8)]) -> QuadraticForm<GaloisField> {
        let f = GaloisField::prime(p).unwrap();
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, Gf(c))).collect();
        QuadraticForm::from_terms(&f, dim, &t).unwrap()
    }

    #[test]
    fn hyperbolic_is_already_split() {
        let q = form(2, 4, &[(0, 1, 1), (2, 3, 1)]);
        let dec = witt_decompose(&q).unwrap();
        dec.verify(&q).unwrap();
        assert_eq!(dec.witt_index(), 2);
        assert!(dec.anisotropic_complement.is_zero());
        assert!(dec.radical.is_zero());
        assert_eq!(gaps(&q).unwrap(), GapReport::new(2, 0, 0));
        assert_eq!(gaps(&q).unwrap().label, Label::Hyperbolic);
    }

    #[test]
    fn parabolic_quadric() {
        let q = form(2, 5, &[(0, 0, 1), (1, 2, 1), (3, 4, 1)]);
        let dec = witt_decompose(&q).unwrap();
        dec.verify(&q).unwrap();
        assert_eq!(dec.radical.dim(), 1);
        assert!(dec.radical.contains(&[Gf(1), Gf(0), Gf(0), Gf(0), Gf(0)]).unwrap());
        // the pairs avoid the e0 direction entirely
        for (v, w) in &dec.pairs {
            assert_eq!(v[0], Gf::ZERO);
            assert_eq!(w[0], Gf::ZERO);
        }
        let g = gaps(&q).unwrap();
        assert_eq!((g.n, g.e, g.p, g.r), (2, 0, 1, 1));
        assert_eq!(g.label, Label::Parabolic);
    }

    #[test]
    fn elliptic_quadric() {
        // x0x1 + x2x3 + x4^2 + x4x5 + x5^2: the last block is anisotropic
        // over GF(2) since it takes the value 1 on (1,0), (0,1) and (1,1).
        let q = form(2, 6, &[(0, 1, 1), (2, 3, 1), (4, 4, 1), (4, 5, 1), (5, 5, 1)]);
        let dec = witt_decompose(&q).unwrap();
        dec.verify(&q).unwrap();
        assert_eq!(dec.witt_index(), 2);
        assert_eq!(dec.anisotropic_complement.dim(), 2);
        assert!(dec.radical.is_zero());
        assert_eq!(gaps(&q).unwrap().label, Label::Elliptic);
    }

    #[test]
    fn odd_characteristic_conic_is_elliptic() {
        let g = gaps(&form(3, 3, &[(0, 1, 1), (2, 2, 1)])).unwrap();
        assert_eq!(g, GapReport::new(1, 1, 0));
        assert_eq!(g.label, Label::Elliptic);
    }

    #[test]
    fn degenerate_and_anisotropic_are_rejected() {
        assert_eq!(
            witt_decompose(&form(2, 2, &[(0, 0, 1), (1, 1, 1)])),
            Err(Error::Degenerate { radical_dim: 1 })
        );
        assert!(matches!(
            gaps(&form(2, 2, &[(0, 0, 1), (0, 1, 1), (1, 1, 1)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn f2t_mixed_example() {
        // x0x1 + x2^2 + x2x3 + x3^2 + t x4^2
        let f = RationalFunctionField::new();
        let one = f.one();
        let q = QuadraticForm::from_terms(
            &f,
            5,
            &[
                (0, 1, one.clone()),
                (2, 2, one.clone()),
                (2, 3, one.clone()),
                (3, 3, one),
                (4, 4, RatFn::t()),
            ],
        )
        .unwrap();
        let dec = witt_decompose(&q).unwrap();
        dec.verify(&q).unwrap();
        assert_eq!(dec.witt_index(), 1);
        assert_eq!(dec.anisotropic_complement.dim(), 2);
        assert_eq!(dec.radical.dim(), 1);
        assert!(dec.radical.contains(&linalg::unit_vector(&f, 5, 4)).unwrap());
        let g = gaps(&q).unwrap();
        assert_eq!(g.label, Label::Orthogonal { e: 2, p: 1 });
        assert_eq!(g.to_string(), "(e,p)=(2,1)-orthogonal, n=1, e=2, p=1, r=3");
    }

    #[test]
    fn hyperbolic_rank_of_degenerate_restrictions() {
        // the zero form on a plane: no pairs, 2-dimensional singular radical
        assert_eq!(hyperbolic_rank(&form(2, 2, &[])).unwrap(), (0, 2));
        assert_eq!(hyperbolic_rank(&form(3, 4, &[(0, 1, 1), (2, 3, 1)])).unwrap(), (2, 0));
    }
}
