//! Quadratic and bilinear forms, radicals, restriction and the Witt-style
//! splitting into hyperbolic pairs, an anisotropic part and the radical.

mod singular;
mod witt;

use std::fmt;

use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Subspace, Vector};
use crate::SeededRng;

pub use singular::{FormField, SEARCH_BUDGET};
pub(crate) use singular::projective_points;
pub use witt::{gaps, hyperbolic_rank, witt_decompose, GapReport, Label, WittDecomposition};

/// `phi(x) = sum_{i <= j} Q[i][j] x_i x_j` with `Q` upper triangular.
///
/// The triangular matrix is the faithful representation: in characteristic
/// two `phi` cannot be recovered from its symmetrization.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm<F: Field> {
    field: F,
    coeffs: Vec<Vector<F>>,
}

/// Symmetric bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm<F: Field> {
    field: F,
    gram: Vec<Vector<F>>,
}

impl<F: Field> QuadraticForm<F> {
    /// Accepts a `d x d` matrix whose strictly lower part is zero.
    pub fn new(field: &F, coeffs: Vec<Vector<F>>) -> Result<Self> {
        let d = coeffs.len();
        if d == 0 {
            return Err(Error::Precondition("a form needs dimension >= 1".into()));
        }
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            if row[..i].iter().any(|x| !field.is_zero(x)) {
                return Err(Error::Precondition(format!(
                    "coefficient matrix must be upper triangular (row {i})"
                )));
            }
        }
        Ok(QuadraticForm {
            field: field.clone(),
            coeffs,
        })
    }

    /// Folds an arbitrary square matrix `M` (so `phi(x) = x^T M x`) into
    /// upper-triangular form.
    pub fn from_matrix(field: &F, m: Vec<Vector<F>>) -> Result<Self> {
        let d = m.len();
        let mut coeffs = vec![linalg::zero_vector(field, d); d];
        for i in 0..d {
            coeffs[i][i] = m[i][i].clone();
            for j in i + 1..d {
                coeffs[i][j] = field.add(&m[i][j], &m[j][i])?;
            }
        }
        QuadraticForm::new(field, coeffs)
    }

    /// Builds a form from `(i, j, c)` monomials `c * x_i * x_j`.
    pub fn from_terms(field: &F, dim: usize, terms: &[(usize, usize, F::Elem)]) -> Result<Self> {
        let mut coeffs = vec![linalg::zero_vector(field, dim); dim];
        for (i, j, c) in terms {
            let (i, j) = if i <= j { (*i, *j) } else { (*j, *i) };
            if j >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: j + 1,
                });
            }
            coeffs[i][j] = field.add(&coeffs[i][j], c)?;
        }
        QuadraticForm::new(field, coeffs)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Vector<F>] {
        &self.coeffs
    }

    fn check_len(&self, v: &[F::Elem]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, v: &[F::Elem]) -> Result<F::Elem> {
        self.check_len(v)?;
        let f = &self.field;
        let mut acc = f.zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            if f.is_zero(&v[i]) {
                continue;
            }
            let mut partial = f.zero();
            for j in i..row.len() {
                if !f.is_zero(&row[j]) && !f.is_zero(&v[j]) {
                    partial = f.add(&partial, &f.mul(&row[j], &v[j])?)?;
                }
            }
            acc = f.add(&acc, &f.mul(&v[i], &partial)?)?;
        }
        Ok(acc)
    }

    pub fn is_singular(&self, v: &[F::Elem]) -> Result<bool> {
        Ok(self.field.is_zero(&self.eval(v)?))
    }

    /// `f(x, y) = phi(x + y) - phi(x) - phi(y)`, with Gram matrix `Q + Q^T`.
    pub fn bilinearize(&self) -> BilinearForm<F> {
        let f = &self.field;
        let d = self.dim();
        let gram = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let a = &self.coeffs[i.min(j)][i.max(j)];
                        if i == j {
                            f.add(a, a).expect("doubling cannot overflow")
                        } else {
                            a.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        BilinearForm {
            field: f.clone(),
            gram,
        }
    }

    /// `Rad(f)` of the bilinearization.
    pub fn radical_bilinear(&self) -> Result<Subspace<F>> {
        self.bilinearize().radical()
    }

    /// The form `x -> phi(sum x_i b_i)` for the given vectors `b_i`
    /// (not necessarily independent).
    pub fn pullback(&self, vectors: &[Vector<F>]) -> Result<QuadraticForm<F>> {
        let bil = self.bilinearize();
        let k = vectors.len();
        let mut coeffs = vec![linalg::zero_vector(&self.field, k); k];
        for i in 0..k {
            coeffs[i][i] = self.eval(&vectors[i])?;
            for j in i + 1..k {
                coeffs[i][j] = bil.eval(&vectors[i], &vectors[j])?;
            }
        }
        QuadraticForm::new(&self.field, coeffs)
    }

    /// The form induced on `s`, in coordinates of its echelon basis.
    pub fn restrict(&self, s: &Subspace<F>) -> Result<QuadraticForm<F>> {
        if s.is_zero() {
            return Err(Error::Precondition("cannot restrict to the zero subspace".into()));
        }
        self.pullback(s.basis())
    }

    /// `phi o P`, i.e. `v -> phi(P v)`; the columns of `P` are the images
    /// of the standard basis.
    pub fn compose(&self, p: &[Vector<F>]) -> Result<QuadraticForm<F>> {
        self.pullback(&linalg::transpose(p))
    }

    /// A seeded random invertible change of coordinates applied to `phi`.
    pub fn random_equivalent(&self, seed: u64) -> Result<(QuadraticForm<F>, Vec<Vector<F>>)> {
        let mut rng = SeededRng::seed_from_u64(seed);
        let p = random_invertible(&self.field, self.dim(), &mut rng)?;
        Ok((self.compose(&p)?, p))
    }
}

pub fn random_invertible<F: Field>(field: &F, d: usize, rng: &mut SeededRng) -> Result<Vec<Vector<F>>> {
    loop {
        let m: Vec<Vector<F>> = (0..d)
            .map(|_| (0..d).map(|_| field.random_elem(rng)).collect())
            .collect();
        if linalg::rank(field, m.clone())? == d {
            return Ok(m);
        }
    }
}

impl<F: FormField> QuadraticForm<F> {
    /// `Rad(phi)`: the singular vectors of `Rad(f)`, which form a subspace.
    pub fn radical_form(&self) -> Result<Subspace<F>> {
        let rad = self.radical_bilinear()?;
        F::singular_part_of_radical(self, &rad)
    }

    pub fn is_nondegenerate(&self) -> Result<bool> {
        Ok(self.radical_form()?.is_zero())
    }

    /// First nonzero singular vector outside `avoid`, in the search order of
    /// the field. `None` is a proof that none exists.
    pub fn find_singular_vector(&self, avoid: &Subspace<F>) -> Result<Option<Vector<F>>> {
        F::find_singular(self, avoid)
    }
}

impl<F: Field> fmt::Display for QuadraticForm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate().skip(i) {
                if f.is_zero(c) {
                    continue;
                }
                let mono = if i == j {
                    format!("x{i}^2")
                } else {
                    format!("x{i}x{j}")
                };
                if f.is_one(c) {
                    terms.push(mono);
                } else {
                    terms.push(format!("({}){mono}", f.format_elem(c)));
                }
            }
        }
        if terms.is_empty() {
            out.write_str("0")
        } else {
            out.write_str(&terms.join(" + "))
        }
    }
}

impl<F: Field> BilinearForm<F> {
    pub fn gram(&self) -> &[Vector<F>] {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn eval(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<F::Elem> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len().min(y.len()),
            });
        }
        let gy = linalg::mat_vec(&self.field, &self.gram, y)?;
        linalg::dot(&self.field, x, &gy)
    }

    /// `x -> f(x, .)` as a row vector, for repeated evaluation.
    pub fn functional(&self, x: &[F::Elem]) -> Result<Vector<F>> {
        // gram is symmetric, so the row x^T G equals G x.
        linalg::mat_vec(&self.field, &self.gram, x)
    }

    pub fn radical(&self) -> Result<Subspace<F>> {
        let ns = linalg::nullspace(&self.field, self.gram.clone(), self.dim())?;
        Subspace::span(&self.field, self.dim(), ns)
    }

    /// `{x in s : f(x, v) = 0 for all v in vs}`
    pub fn perp_within(&self, s: &Subspace<F>, vs: &[Vector<F>]) -> Result<Subspace<F>> {
        if vs.is_empty() || s.is_zero() {
            return Ok(s.clone());
        }
        let rows = vs
            .iter()
            .map(|v| {
                let fv = self.functional(v)?;
                s.basis().iter().map(|b| linalg::dot(&self.field, b, &fv)).collect()
            })
            .collect::<Result<Vec<Vector<F>>>>()?;
        let coeffs = linalg::nullspace(&self.field, rows, s.dim())?;
        let vecs = coeffs.iter().map(|c| s.lift(c)).collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.field, self.dim(), vecs)
    }

    /// Radical of the restriction of `f` to `s`, in ambient coordinates.
    pub fn radical_within(&self, s: &Subspace<F>) -> Result<Subspace<F>> {
        self.perp_within(s, s.basis())
    }
}
