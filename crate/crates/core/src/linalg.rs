//! Exact linear algebra over a [`Field`]: echelon forms, kernels and
//! subspaces in canonical (reduced row-echelon) form.

use crate::error::{Error, Result};
use crate::field::Field;

pub type Vector<F> = Vec<<F as Field>::Elem>;

pub fn zero_vector<F: Field>(field: &F, n: usize) -> Vector<F> {
    vec![field.zero(); n]
}

pub fn unit_vector<F: Field>(field: &F, n: usize, i: usize) -> Vector<F> {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<F::Elem> {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !field.is_zero(x) && !field.is_zero(y) {
            acc = field.add(&acc, &field.mul(x, y)?)?;
        }
    }
    Ok(acc)
}

/// `a + s * b`
pub fn axpy<F: Field>(field: &F, a: &[F::Elem], s: &F::Elem, b: &[F::Elem]) -> Result<Vector<F>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| field.add(x, &field.mul(s, y)?))
        .collect()
}

pub fn scale<F: Field>(field: &F, s: &F::Elem, v: &[F::Elem]) -> Result<Vector<F>> {
    v.iter().map(|x| field.mul(s, x)).collect()
}

/// Scales `v` so that its first nonzero coordinate is one.
pub fn normalize<F: Field>(field: &F, v: &[F::Elem]) -> Result<Vector<F>> {
    match v.iter().find(|x| !field.is_zero(x)) {
        None => Ok(v.to_vec()),
        Some(lead) => scale(field, &field.inv(lead)?, v),
    }
}

/// Reduced row-echelon form. Returns the nonzero rows and their pivot
/// columns.
pub fn rref<F: Field>(field: &F, mut rows: Vec<Vector<F>>) -> Result<(Vec<Vector<F>>, Vec<usize>)> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c])?;
        rows[r] = scale(field, &inv, &rows[r])?;
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let factor = field.neg(&rows[i][c]);
                rows[i] = axpy(field, &rows[i], &factor, &rows[r])?;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Ok((rows, pivots))
}

pub fn rank<F: Field>(field: &F, rows: Vec<Vector<F>>) -> Result<usize> {
    Ok(rref(field, rows)?.1.len())
}

/// Basis of `{x : A x = 0}` for the `rows x ncols` matrix `A`.
pub fn nullspace<F: Field>(field: &F, rows: Vec<Vector<F>>, ncols: usize) -> Result<Vec<Vector<F>>> {
    let (reduced, pivots) = rref(field, rows)?;
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zero_vector(field, ncols);
        v[free] = field.one();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            v[pc] = field.neg(&row[free]);
        }
        basis.push(v);
    }
    Ok(basis)
}

pub fn transpose<E: Clone>(m: &[Vec<E>]) -> Vec<Vec<E>> {
    let ncols = m.first().map_or(0, Vec::len);
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// `A * v` for a row-major matrix.
pub fn mat_vec<F: Field>(field: &F, m: &[Vector<F>], v: &[F::Elem]) -> Result<Vector<F>> {
    m.iter().map(|row| dot(field, row, v)).collect()
}

pub fn mat_mul<F: Field>(field: &F, a: &[Vector<F>], b: &[Vector<F>]) -> Result<Vec<Vector<F>>> {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(field, row, col)).collect())
        .collect()
}

/// A linear subspace of `K^d`, held as its reduced row-echelon basis, which
/// makes equality of subspaces equality of values.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient_dim: usize,
    basis: Vec<Vector<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn span(field: &F, ambient_dim: usize, vectors: Vec<Vector<F>>) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        let (basis, pivots) = rref(field, vectors)?;
        Ok(Subspace {
            field: field.clone(),
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit_vector(field, ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector<F>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Residue of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[F::Elem]) -> Result<Vector<F>> {
        let mut r = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if !self.field.is_zero(&r[pc]) {
                let factor = self.field.neg(&r[pc]);
                r = axpy(&self.field, &r, &factor, row)?;
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &[F::Elem]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(is_zero_vector(&self.field, &self.reduce(v)?))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` lies outside.
    pub fn coordinates(&self, v: &[F::Elem]) -> Result<Option<Vector<F>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&c| v[c].clone()).collect()))
    }

    /// `sum coords[i] * basis[i]`
    pub fn lift(&self, coords: &[F::Elem]) -> Result<Vector<F>> {
        let mut v = zero_vector(&self.field, self.ambient_dim);
        for (c, row) in coords.iter().zip(&self.basis) {
            if !self.field.is_zero(c) {
                v = axpy(&self.field, &v, c, row)?;
            }
        }
        Ok(v)
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(&self.field, self.ambient_dim, vs)
    }

    pub fn with_vector(&self, v: &[F::Elem]) -> Result<Subspace<F>> {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::span(&self.field, self.ambient_dim, vs)
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> Result<bool> {
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Vectors `y` with `y . x = 0` for every `x` in this subspace.
    pub fn annihilator(&self) -> Result<Subspace<F>> {
        let ns = nullspace(&self.field, self.basis.clone(), self.ambient_dim)?;
        Subspace::span(&self.field, self.ambient_dim, ns)
    }

    pub fn intersection(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(&self.field, self.ambient_dim));
        }
        let ann = other.annihilator()?;
        // Coefficient vectors a with sum a_i (u_i . y_j) = 0 for all j.
        let mut rows = Vec::new();
        for y in ann.basis() {
            rows.push(
                self.basis
                    .iter()
                    .map(|u| dot(&self.field, u, y))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let coeffs = if rows.is_empty() {
            return Ok(self.clone());
        } else {
            nullspace(&self.field, rows, self.dim())?
        };
        let vs = coeffs.iter().map(|a| self.lift(a)).collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.field, self.ambient_dim, vs)
    }

    /// A complement of `self` inside `sup`, built greedily from `sup`'s
    /// echelon basis so the choice is deterministic.
    pub fn complement_in(&self, sup: &Subspace<F>) -> Result<Subspace<F>> {
        let mut acc = self.clone();
        let mut chosen = Vec::new();
        for v in sup.basis() {
            if !acc.contains(v)? {
                acc = acc.with_vector(v)?;
                chosen.push(v.clone());
            }
        }
        Subspace::span(&self.field, self.ambient_dim, chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Gf};

    fn gf(p: u32) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    fn v(xs: &[u8]) -> Vec<Gf> {
        xs.iter().map(|&x| Gf(x)).collect()
    }

    #[test]
    fn echelon_is_canonical() {
        let f = gf(3);
        let a = Subspace::span(&f, 3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        // [1,2,1] = a0 + a1 and [1,0,2] = a0 + 2*a1
        let b = Subspace::span(&f, 3, vec![v(&[1, 2, 1]), v(&[1, 0, 2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[v(&[1, 0, 2]), v(&[0, 1, 1])]);
    }

    #[test]
    fn nullspace_annihilates() {
        let f = gf(5);
        let m = vec![v(&[1, 2, 3, 4]), v(&[2, 4, 1, 3])];
        let ns = nullspace(&f, m.clone(), 4).unwrap();
        assert_eq!(ns.len(), 4 - rank(&f, m.clone()).unwrap());
        for x in &ns {
            assert!(is_zero_vector(&f, &mat_vec(&f, &m, x).unwrap()));
        }
    }

    #[test]
    fn intersection_and_complement() {
        let f = gf(2);
        let a = Subspace::span(&f, 4, vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]).unwrap();
        let b = Subspace::span(&f, 4, vec![v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])]).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(i, Subspace::span(&f, 4, vec![v(&[0, 1, 0, 0])]).unwrap());
        let full = Subspace::full(&f, 4);
        let c = a.complement_in(&full).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(a.intersection(&c).unwrap().is_zero());
        assert_eq!(a.sum(&c).unwrap(), full);
    }

    #[test]
    fn coordinates_round_trip() {
        let f = gf(3);
        let s = Subspace::span(&f, 3, vec![v(&[1, 2, 0]), v(&[0, 1, 1])]).unwrap();
        let x = s.lift(&v(&[2, 1])).unwrap();
        assert_eq!(s.coordinates(&x).unwrap(), Some(v(&[2, 1])));
        assert_eq!(s.coordinates(&v(&[0, 0, 1])).unwrap(), None);
    }
}
