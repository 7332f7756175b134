use serde::Serialize;

use super::{PointSet, PolarSpace};
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::forms::{hyperbolic_rank, witt_decompose};
use crate::linalg::Subspace;
use crate::seeded::SeededOrder;

/// A subspace of the polar space, held both as a point set and as the
/// linear span of its points.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoSubspace {
    points: PointSet,
    span: Subspace<GaloisField>,
}

impl GeoSubspace {
    pub(crate) fn new(points: PointSet, span: Subspace<GaloisField>) -> Self {
        GeoSubspace { points, span }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn span(&self) -> &Subspace<GaloisField> {
        &self.span
    }

    pub fn len(&self) -> usize {
        self.points.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.points.contains(i)
    }

    pub fn is_subset(&self, other: &GeoSubspace) -> bool {
        self.points.is_subset(&other.points)
    }
}

/// Pairs `(p_i, p'_i)` with `p_i` collinear with `p'_j` exactly when `i != j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub pairs: Vec<(usize, usize)>,
}

impl Frame {
    pub fn points(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Checks the collinearity pattern and that both halves span maximal
    /// singular subspaces. Returns a description of the first violation.
    pub fn check(&self, space: &PolarSpace) -> std::result::Result<(), String> {
        let n = self.pairs.len();
        if n != space.rank() {
            return Err(format!("frame has {n} pairs, rank is {}", space.rank()));
        }
        for i in 0..n {
            for j in 0..n {
                let (pi, _) = self.pairs[i];
                let (_, qj) = self.pairs[j];
                if space.collinear(pi, qj) != (i != j) {
                    return Err(format!("pair pattern broken at ({i}, {j})"));
                }
                if i != j {
                    if !space.collinear(pi, self.pairs[j].0) {
                        return Err(format!("p_{i} and p_{j} are not collinear"));
                    }
                    if !space.collinear(self.pairs[i].1, qj) {
                        return Err(format!("p'_{i} and p'_{j} are not collinear"));
                    }
                }
            }
        }
        for half in [0, 1] {
            let members = space.set_of(self.pairs.iter().map(|p| if half == 0 { p.0 } else { p.1 }));
            let singular = space.closure_points(&members);
            if space.perp(&singular) != singular {
                return Err(format!("half {half} does not span a maximal singular subspace"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceClass {
    Hyperbolic,
    Elliptic,
    Other,
}

/// Synthetic classification together with the radical cross-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceClassification {
    pub class: SubspaceClass,
    /// `dim Rad` of the bilinearization restricted to the span.
    pub radical_dim: usize,
    /// Whether "hyperbolic or elliptic" coincides with a zero radical.
    pub agrees: bool,
}

impl PolarSpace {
    /// The frame `[v_i], [w_i]` read off the Witt decomposition.
    pub fn find_frame(&self) -> Result<Frame> {
        let pairs = self
            .decomposition()
            .pairs
            .iter()
            .map(|(v, w)| {
                let a = self.lookup(v);
                let b = self.lookup(w);
                a.zip(b)
                    .ok_or_else(|| Error::Precondition("decomposition pair is not a pair of points".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Frame { pairs })
    }

    /// A frame built by choosing, in seeded order, a point and a
    /// non-collinear partner, then recursing into the perp of the pair.
    pub fn seeded_frame(&self, order: &SeededOrder) -> Frame {
        self.seeded_frame_within(&self.all_points(), order)
    }

    /// As [`PolarSpace::seeded_frame`], restricted to points of `s`.
    pub fn seeded_frame_within(&self, s: &PointSet, order: &SeededOrder) -> Frame {
        let mut allowed = s.clone();
        let mut pairs = Vec::new();
        for p in order.sorted(s.ones()) {
            if !allowed.contains(p) {
                continue;
            }
            let mut partners = allowed.clone();
            partners.difference_with(self.perp_of_point(p));
            let Some(partner) = order.first(partners.ones()) else {
                continue;
            };
            pairs.push((p, partner));
            allowed.intersect_with(self.perp_of_point(p));
            allowed.intersect_with(self.perp_of_point(partner));
            if allowed.is_clear() {
                break;
            }
        }
        Frame { pairs }
    }

    /// `(hyperbolic pairs, dim Rad(phi))` of the form restricted to the span.
    fn restricted_rank(&self, s: &GeoSubspace) -> Result<(usize, usize)> {
        if s.span().is_zero() {
            return Ok((0, 0));
        }
        hyperbolic_rank(&self.form().restrict(s.span())?)
    }

    /// Polar rank of `s`: hyperbolic pairs of the restricted form plus the
    /// dimension of its singular radical. For a singular subspace this is
    /// the vector dimension of its span.
    pub fn subspace_rank(&self, s: &GeoSubspace) -> Result<usize> {
        let (pairs, rad) = self.restricted_rank(s)?;
        Ok(pairs + rad)
    }

    /// A subspace is nice when it contains a frame of the whole space, which
    /// happens exactly when the restricted form splits off `n` hyperbolic pairs.
    pub fn is_nice(&self, s: &GeoSubspace) -> Result<bool> {
        Ok(self.restricted_rank(s)?.0 == self.rank())
    }

    /// A frame of the whole space lying inside `s`, if `s` is nice.
    pub fn frame_inside(&self, s: &GeoSubspace) -> Result<Option<Frame>> {
        if !self.is_nice(s)? {
            return Ok(None);
        }
        let span = s.span();
        let local = self.form().restrict(span)?;
        let rad = local.radical_form()?;
        let complement = rad.complement_in(&Subspace::full(self.field(), span.dim()))?;
        let nondegenerate = local.restrict(&complement)?;
        let dec = witt_decompose(&nondegenerate)?;
        let mut pairs = Vec::new();
        for (v, w) in &dec.pairs {
            let v = span.lift(&complement.lift(v)?)?;
            let w = span.lift(&complement.lift(w)?)?;
            let pair = self.lookup(&v).zip(self.lookup(&w));
            pairs.push(pair.ok_or_else(|| Error::Precondition("restricted pair is not singular".into()))?);
        }
        Ok(Some(Frame { pairs }))
    }

    /// Hyperbolic if `s` is generated by one of its frames; elliptic if not
    /// and every hyperbolic line computed inside `s` has two points.
    pub fn classify_subspace(&self, s: &GeoSubspace) -> Result<SubspaceClassification> {
        let frame = self
            .frame_inside(s)?
            .ok_or_else(|| Error::Precondition("subspace is not nice".into()))?;
        let radical_dim = self.bilinear().radical_within(s.span())?.dim();
        let generated = self.generate(&self.set_of(frame.points()))?;
        let class = if generated.points() == s.points() {
            SubspaceClass::Hyperbolic
        } else if self.rank() >= 2 {
            if self.all_hyperbolic_lines_have_two_points(s.points()) {
                SubspaceClass::Elliptic
            } else {
                SubspaceClass::Other
            }
        } else if radical_dim == 0 {
            // Without lines the double perp of a pair is the whole subspace,
            // so the synthetic line test carries no information.
            SubspaceClass::Elliptic
        } else {
            SubspaceClass::Other
        };
        let agrees = (class != SubspaceClass::Other) == (radical_dim == 0);
        Ok(SubspaceClassification {
            class,
            radical_dim,
            agrees,
        })
    }

    fn all_hyperbolic_lines_have_two_points(&self, s: &PointSet) -> bool {
        let members: Vec<usize> = s.ones().collect();
        members.iter().all(|&a| {
            let mut others = s.clone();
            others.difference_with(self.perp_of_point(a));
            others
                .ones()
                .filter(|&b| b > a)
                .all(|b| self.hyperbolic_line_within(s, a, b).count_ones(..) == 2)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::forms::QuadraticForm;

    fn space(d: usize, terms: &[(usize, usize)], squares: &[usize]) -> PolarSpace {
        let f = GaloisField::prime(2).unwrap();
        let mut t: Vec<_> = terms.iter().map(|&(i, j)| (i, j, Gf(1))).collect();
        t.extend(squares.iter().map(|&i| (i, i, Gf(1))));
        PolarSpace::build(&QuadraticForm::from_terms(&f, d, &t).unwrap()).unwrap()
    }

    fn elliptic_5() -> PolarSpace {
        space(6, &[(0, 1), (2, 3), (4, 5)], &[4, 5])
    }

    #[test]
    fn witt_frame_of_grid() {
        let p = space(4, &[(0, 1), (2, 3)], &[]);
        let frame = p.find_frame().unwrap();
        assert_eq!(frame.points().len(), 4);
        frame.check(&p).unwrap();
        let closure = p.span_closure(&p.set_of(frame.points())).unwrap();
        assert_eq!(closure.len(), 9);
    }

    #[test]
    fn parabolic_frame_avoids_nucleus() {
        let p = space(5, &[(1, 2), (3, 4)], &[0]);
        let frame = p.find_frame().unwrap();
        frame.check(&p).unwrap();
        for i in frame.points() {
            assert_eq!(p.point(i).coords[0], Gf(0));
        }
    }

    #[test]
    fn elliptic_frame_closure_is_grid() {
        let p = elliptic_5();
        assert_eq!(p.num_points(), 27);
        let frame = p.find_frame().unwrap();
        let closure = p.span_closure(&p.set_of(frame.points())).unwrap();
        assert_eq!(closure.len(), 9);
        assert!(p.is_embedded(&closure).unwrap());
    }

    #[test]
    fn seeded_frames_are_frames() {
        let p = elliptic_5();
        for seed in 0..10 {
            let frame = p.seeded_frame(&SeededOrder::new(seed, p.num_points()));
            frame.check(&p).unwrap();
        }
    }

    #[test]
    fn niceness_and_rank() {
        let p = space(4, &[(0, 1), (2, 3)], &[]);
        let line = p.span_closure(&p.set_of(p.lines()[0].clone())).unwrap();
        assert!(!p.is_nice(&line).unwrap());
        assert_eq!(p.subspace_rank(&line).unwrap(), 2);
        let all = p.span_closure(&p.all_points()).unwrap();
        assert!(p.is_nice(&all).unwrap());

        // The Q+(3,2) section x0 = 0 of Q(4,2).
        let par = space(5, &[(1, 2), (3, 4)], &[0]);
        let f = par.field().clone();
        let e = |i| crate::linalg::unit_vector(&f, 5, i);
        let w = Subspace::span(&f, 5, vec![e(1), e(2), e(3), e(4)]).unwrap();
        let section = par.subspace_from_span(&w).unwrap();
        assert_eq!(section.len(), 9);
        assert!(par.is_nice(&section).unwrap());
        assert_eq!(par.classify_subspace(&section).unwrap().class, SubspaceClass::Hyperbolic);
    }

    #[test]
    fn whole_space_classes() {
        let ell = elliptic_5();
        let c = ell.classify_subspace(&ell.span_closure(&ell.all_points()).unwrap()).unwrap();
        assert_eq!(c.class, SubspaceClass::Elliptic);
        assert!(c.agrees);

        let par = space(5, &[(1, 2), (3, 4)], &[0]);
        let c = par.classify_subspace(&par.span_closure(&par.all_points()).unwrap()).unwrap();
        assert_eq!(c.class, SubspaceClass::Other);
        assert_eq!(c.radical_dim, 1);
        assert!(c.agrees);

        let grid = space(4, &[(0, 1), (2, 3)], &[]);
        let line = grid.span_closure(&grid.set_of(grid.lines()[0].clone())).unwrap();
        assert!(grid.classify_subspace(&line).is_err());
    }
}
