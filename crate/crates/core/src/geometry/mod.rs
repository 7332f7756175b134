//! The synthetic polar space of a non-degenerate quadratic form over a
//! finite field: its singular points and totally singular lines, with
//! collinearity, perps, hyperbolic lines and subspace closure.
//!
//! Point sets are bitsets over the canonical point order. Every point is
//! treated as collinear with itself, so `x` lies in `x^perp`.

mod condition_a;
mod export;
mod subspace;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::field::{Field, GaloisField, Gf};
use crate::forms::{gaps, witt_decompose, BilinearForm, GapReport, QuadraticForm, WittDecomposition};
use crate::linalg::{Subspace, Vector};

pub use condition_a::{ConditionA, ConditionAWitness};
pub use subspace::{Frame, GeoSubspace, SubspaceClass, SubspaceClassification};

/// Default cap on the number of singular points.
pub const DEFAULT_POINT_BUDGET: usize = 1_000_000;

pub type PointSet = FixedBitSet;

/// A singular projective point with its first nonzero coordinate equal to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    pub coords: Vec<Gf>,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicMethod {
    /// `{a, b}^perp^perp` in the point-line geometry.
    Synthetic,
    /// Singular points of `<a, b, Rad(f)>`.
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Walk normalized representatives directly, one leading position at a time.
    Streaming,
    /// Scan every vector of `K^d` and keep the normalized singular ones.
    Filter,
}

pub struct PolarSpace {
    form: QuadraticForm<GaloisField>,
    bilinear: BilinearForm<GaloisField>,
    field: GaloisField,
    gaps: GapReport,
    decomposition: WittDecomposition<GaloisField>,
    points: Vec<ProjectivePoint>,
    keys: HashMap<u64, usize>,
    perp_rows: Vec<PointSet>,
    lines: Vec<Vec<usize>>,
    lines_through: Vec<Vec<usize>>,
}

/// Table-driven evaluation of a form over a [`GaloisField`].
pub(crate) struct FastForm<'a> {
    field: &'a GaloisField,
    coeffs: &'a [Vector<GaloisField>],
}

impl<'a> FastForm<'a> {
    pub(crate) fn new(form: &'a QuadraticForm<GaloisField>) -> Self {
        FastForm {
            field: form.field(),
            coeffs: form.coeffs(),
        }
    }

    pub(crate) fn eval(&self, v: &[Gf]) -> Gf {
        let f = self.field;
        let mut acc = Gf::ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            if v[i] == Gf::ZERO {
                continue;
            }
            let mut inner = Gf::ZERO;
            for j in i..row.len() {
                if row[j] != Gf::ZERO && v[j] != Gf::ZERO {
                    inner = f.add_elem(inner, f.mul_elem(row[j], v[j]));
                }
            }
            acc = f.add_elem(acc, f.mul_elem(v[i], inner));
        }
        acc
    }
}

fn gf_dot(f: &GaloisField, a: &[Gf], b: &[Gf]) -> Gf {
    a.iter()
        .zip(b)
        .fold(Gf::ZERO, |acc, (&x, &y)| f.add_elem(acc, f.mul_elem(x, y)))
}

fn gf_normalize(f: &GaloisField, v: &mut [Gf]) -> bool {
    let Some(lead) = v.iter().copied().find(|x| *x != Gf::ZERO) else {
        return false;
    };
    if lead != Gf::ONE {
        let s = f.inv_elem(lead).expect("nonzero lead");
        for x in v.iter_mut() {
            *x = f.mul_elem(*x, s);
        }
    }
    true
}

/// Colexicographic key: coordinate `i` carries weight `q^i`.
fn point_key(q: usize, v: &[Gf]) -> u64 {
    v.iter().rev().fold(0u64, |acc, x| acc * q as u64 + x.index() as u64)
}

fn colex_fill(mut index: u64, q: usize, out: &mut [Gf]) {
    for slot in out.iter_mut() {
        *slot = Gf((index % q as u64) as u8);
        index /= q as u64;
    }
}

/// Normalized singular points of `form`, sorted by colexicographic key.
///
/// Both strategies must give the same list; they share nothing but the
/// evaluation of the form.
pub fn enumerate_singular_points(
    form: &QuadraticForm<GaloisField>,
    strategy: Enumeration,
    budget: usize,
) -> Result<Vec<Vec<Gf>>> {
    let f = form.field();
    let q = f.size();
    let d = form.dim();
    let fast = FastForm::new(form);
    let total = (q as u128).pow(d as u32);
    // Singular points are roughly a 1/q fraction of the projective points.
    if total / (q as u128) > (budget as u128).saturating_mul(q as u128) {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut found = Vec::new();
    let push = |v: Vec<Gf>, found: &mut Vec<Vec<Gf>>| -> Result<()> {
        if found.len() >= budget {
            return Err(Error::BudgetExceeded { budget });
        }
        found.push(v);
        Ok(())
    };
    match strategy {
        Enumeration::Streaming => {
            for lead in 0..d {
                let tail_len = d - lead - 1;
                let count = (q as u64).pow(tail_len as u32);
                let mut v = vec![Gf::ZERO; d];
                v[lead] = Gf::ONE;
                for idx in 0..count {
                    colex_fill(idx, q, &mut v[lead + 1..]);
                    if fast.eval(&v) == Gf::ZERO {
                        push(v.clone(), &mut found)?;
                    }
                }
            }
        }
        Enumeration::Filter => {
            let mut v = vec![Gf::ZERO; d];
            for idx in 1..total as u64 {
                colex_fill(idx, q, &mut v);
                let lead = v.iter().find(|x| **x != Gf::ZERO).copied();
                if lead == Some(Gf::ONE) && fast.eval(&v) == Gf::ZERO {
                    push(v.clone(), &mut found)?;
                }
            }
        }
    }
    found.sort_by_key(|v| point_key(q, v));
    Ok(found)
}

impl PolarSpace {
    pub fn build(form: &QuadraticForm<GaloisField>) -> Result<Self> {
        Self::build_with_budget(form, DEFAULT_POINT_BUDGET)
    }

    pub fn build_with_budget(form: &QuadraticForm<GaloisField>, budget: usize) -> Result<Self> {
        let gaps = gaps(form)?;
        let decomposition = witt_decompose(form)?;
        let field = form.field().clone();
        let q = field.size();
        let bilinear = form.bilinearize();
        let coords = enumerate_singular_points(form, Enumeration::Streaming, budget)?;
        let points: Vec<ProjectivePoint> = coords
            .into_iter()
            .enumerate()
            .map(|(index, coords)| ProjectivePoint { coords, index })
            .collect();
        let keys = points.iter().map(|p| (point_key(q, &p.coords), p.index)).collect();

        let n = points.len();
        let functionals: Vec<Vec<Gf>> = points
            .iter()
            .map(|p| bilinear.gram().iter().map(|row| gf_dot(&field, row, &p.coords)).collect())
            .collect();
        let mut perp_rows = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            perp_rows[a].insert(a);
            for b in a + 1..n {
                if gf_dot(&field, &functionals[a], &points[b].coords) == Gf::ZERO {
                    perp_rows[a].insert(b);
                    perp_rows[b].insert(a);
                }
            }
        }

        let mut space = PolarSpace {
            form: form.clone(),
            bilinear,
            field,
            gaps,
            decomposition,
            points,
            keys,
            perp_rows,
            lines: Vec::new(),
            lines_through: vec![Vec::new(); n],
        };
        space.build_lines();
        Ok(space)
    }

    fn build_lines(&mut self) {
        let n = self.points.len();
        let elements: Vec<Gf> = (0..self.field.size()).map(|i| Gf(i as u8)).collect();
        for a in 0..n {
            for b in self.perp_rows[a].ones().filter(|&b| b > a) {
                if self.lines_through[a].iter().any(|&l| self.lines[l].contains(&b)) {
                    continue;
                }
                let pa = &self.points[a].coords;
                let pb = &self.points[b].coords;
                let mut members = vec![a, b];
                for &s in elements.iter().skip(1) {
                    let mut v: Vec<Gf> = pa
                        .iter()
                        .zip(pb)
                        .map(|(&x, &y)| self.field.add_elem(x, self.field.mul_elem(s, y)))
                        .collect();
                    gf_normalize(&self.field, &mut v);
                    let idx = self.keys[&point_key(self.field.size(), &v)];
                    members.push(idx);
                }
                members.sort_unstable();
                members.dedup();
                let id = self.lines.len();
                for &m in &members {
                    self.lines_through[m].push(id);
                }
                self.lines.push(members);
            }
        }
    }

    pub fn form(&self) -> &QuadraticForm<GaloisField> {
        &self.form
    }

    pub fn bilinear(&self) -> &BilinearForm<GaloisField> {
        &self.bilinear
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn gaps(&self) -> &GapReport {
        &self.gaps
    }

    pub fn decomposition(&self) -> &WittDecomposition<GaloisField> {
        &self.decomposition
    }

    pub fn rank(&self) -> usize {
        self.gaps.n
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ProjectivePoint {
        &self.points[i]
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn lines_through(&self, i: usize) -> &[usize] {
        &self.lines_through[i]
    }

    /// `Rad(f)` of the defining form.
    pub fn radical(&self) -> &Subspace<GaloisField> {
        &self.decomposition.radical
    }

    pub fn all_points(&self) -> PointSet {
        let mut s = FixedBitSet::with_capacity(self.num_points());
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> PointSet {
        FixedBitSet::with_capacity(self.num_points())
    }

    pub fn set_of(&self, indices: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = self.empty_set();
        s.extend(indices);
        s
    }

    /// Index of the point spanned by `v`, if `v` is a nonzero singular vector.
    pub fn lookup(&self, v: &[Gf]) -> Option<usize> {
        let mut v = v.to_vec();
        if v.len() != self.dim() || !gf_normalize(&self.field, &mut v) {
            return None;
        }
        self.keys.get(&point_key(self.field.size(), &v)).copied()
    }

    /// Distinct and collinear.
    pub fn collinear(&self, a: usize, b: usize) -> bool {
        a != b && self.perp_rows[a].contains(b)
    }

    /// `x^perp`, including `x`.
    pub fn perp_of_point(&self, x: usize) -> &PointSet {
        &self.perp_rows[x]
    }

    /// `X^perp`; the perp of the empty set is every point.
    pub fn perp(&self, x: &PointSet) -> PointSet {
        self.perp_within(x, &self.all_points())
    }

    /// `X^perp` intersected with `s`.
    pub fn perp_within(&self, x: &PointSet, s: &PointSet) -> PointSet {
        let mut out = s.clone();
        for i in x.ones() {
            out.intersect_with(&self.perp_rows[i]);
        }
        out
    }

    /// `{a, b}^perp^perp` computed inside the subspace `s`.
    pub fn hyperbolic_line_within(&self, s: &PointSet, a: usize, b: usize) -> PointSet {
        let mut ab = s.clone();
        ab.intersect_with(&self.perp_rows[a]);
        ab.intersect_with(&self.perp_rows[b]);
        self.perp_within(&ab, s)
    }

    pub fn hyperbolic_line(&self, a: usize, b: usize, method: HyperbolicMethod) -> Result<PointSet> {
        if a == b || self.perp_rows[a].contains(b) {
            return Err(Error::Precondition(format!(
                "hyperbolic line needs two non-collinear points, got {a} and {b}"
            )));
        }
        match method {
            HyperbolicMethod::Synthetic => Ok(self.hyperbolic_line_within(&self.all_points(), a, b)),
            HyperbolicMethod::Algebraic => {
                let mut gens = vec![self.points[a].coords.clone(), self.points[b].coords.clone()];
                gens.extend(self.radical().basis().iter().cloned());
                let w = Subspace::span(&self.field, self.dim(), gens)?;
                self.points_in(&w)
            }
        }
    }

    /// Linear span of the coordinate vectors of `x`.
    pub fn span_of(&self, x: &PointSet) -> Result<Subspace<GaloisField>> {
        let mut span = Subspace::zero(&self.field, self.dim());
        for i in x.ones() {
            let v = &self.points[i].coords;
            if !span.contains(v)? {
                span = span.with_vector(v)?;
                if span.dim() == self.dim() {
                    break;
                }
            }
        }
        Ok(span)
    }

    /// Singular points lying in `[w]`.
    pub fn points_in(&self, w: &Subspace<GaloisField>) -> Result<PointSet> {
        let q = self.field.size();
        let k = w.dim();
        let mut out = self.empty_set();
        if k == 0 {
            return Ok(out);
        }
        let projective = (q as u128).pow(k as u32) / (q as u128 - 1);
        if projective <= self.num_points() as u128 {
            let fast = FastForm::new(&self.form);
            for local in crate::forms::projective_points(q, k) {
                let v = w.lift(&local)?;
                if fast.eval(&v) == Gf::ZERO {
                    if let Some(i) = self.lookup(&v) {
                        out.insert(i);
                    }
                }
            }
        } else {
            for p in &self.points {
                if w.contains(&p.coords)? {
                    out.insert(p.index);
                }
            }
        }
        Ok(out)
    }

    /// Smallest superset of `x` that absorbs every line meeting it in two
    /// or more points.
    pub fn closure_points(&self, x: &PointSet) -> PointSet {
        let mut set = x.clone();
        let mut queue: Vec<usize> = x.ones().collect();
        while let Some(p) = queue.pop() {
            for &l in &self.lines_through[p] {
                let line = &self.lines[l];
                if line.iter().any(|&m| m != p && set.contains(m)) {
                    for &m in line {
                        if !set.contains(m) {
                            set.insert(m);
                            queue.push(m);
                        }
                    }
                }
            }
        }
        set
    }

    pub fn span_closure(&self, x: &PointSet) -> Result<GeoSubspace> {
        let points = self.closure_points(x);
        let span = self.span_of(&points)?;
        Ok(GeoSubspace::new(points, span))
    }

    /// The subspace whose points are the singular points of `[w]`.
    pub fn subspace_from_span(&self, w: &Subspace<GaloisField>) -> Result<GeoSubspace> {
        let points = self.points_in(w)?;
        let span = self.span_of(&points)?;
        Ok(GeoSubspace::new(points, span))
    }

    /// The subspace generated by `x`: the line-absorption closure when the
    /// space has lines, otherwise the points of the linear span, since in
    /// rank one there are no lines to absorb along.
    pub fn generate(&self, x: &PointSet) -> Result<GeoSubspace> {
        if self.rank() >= 2 {
            self.span_closure(x)
        } else {
            self.subspace_from_span(&self.span_of(x)?)
        }
    }

    /// Whether `s` is exactly the set of singular points of its span, in
    /// both directions.
    pub fn is_embedded(&self, s: &GeoSubspace) -> Result<bool> {
        Ok(self.span_of(s.points())? == *s.span() && self.points_in(s.span())? == *s.points())
    }

    pub fn format_point(&self, i: usize) -> String {
        let coords: Vec<String> = self.points[i].coords.iter().map(|x| self.field.format_elem(x)).collect();
        format!("({})", coords.join(","))
    }
}
