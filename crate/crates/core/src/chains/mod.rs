//! Intrinsic computation of the three gaps from chains of subspaces of the
//! point-line geometry, with no reference to the defining form beyond the
//! restricted-radical bookkeeping used to label members.

mod verify;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::geometry::{GeoSubspace, PolarSpace};
use crate::linalg;
use crate::seeded::SeededOrder;

pub use verify::{hyperbolic_line_sizes, verify_theorems, CheckRecord, CheckStatus, VerifyOptions, VerifyReport};

/// Ascending chain of subspaces inside one polar space.
#[derive(Debug, Clone)]
pub struct SubspaceChain {
    pub members: Vec<GeoSubspace>,
    pub seed: u64,
}

impl SubspaceChain {
    /// Number of strict inclusions.
    pub fn length(&self) -> usize {
        self.members.len().saturating_sub(1)
    }

    pub fn top(&self) -> &GeoSubspace {
        self.members.last().expect("chains are never empty")
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.members
            .windows(2)
            .all(|w| w[0].is_subset(&w[1]) && w[0].len() < w[1].len())
    }

    /// Consecutive spans differ by exactly one dimension.
    pub fn is_step_one(&self) -> bool {
        self.span_steps().iter().all(|&s| s == 1)
    }

    pub fn span_steps(&self) -> Vec<usize> {
        self.members
            .windows(2)
            .map(|w| w[1].span().dim() - w[0].span().dim())
            .collect()
    }
}

/// A maximal elliptic chain `E_0 < E_1 < ... < E_d` with `E_0` generated by
/// a frame, optionally interleaved with the nice subspaces of a maximal
/// enrichment.
#[derive(Debug, Clone)]
pub struct EllipticChain {
    pub members: Vec<GeoSubspace>,
    /// Points `x_i, p_i` with `E_{i+1}` generated by `E_i`, `x_i` and `p_i`.
    /// Empty in odd characteristic, where the chain steps one point at a time.
    pub extensions: Vec<(usize, usize)>,
    pub enrichment: Option<SubspaceChain>,
    pub seed: u64,
}

impl EllipticChain {
    /// `d`, the number of elliptic extension steps.
    pub fn steps(&self) -> usize {
        self.members.len() - 1
    }

    pub fn top(&self) -> &GeoSubspace {
        self.members.last().expect("chains are never empty")
    }

    /// Length of the enrichment, or of the chain itself when there is none.
    pub fn enriched_length(&self) -> usize {
        self.enrichment.as_ref().map_or(self.steps(), SubspaceChain::length)
    }
}

/// One seeded run of every construction.
#[derive(Debug, Clone)]
pub struct Trial {
    pub seed: u64,
    pub anisotropic: SubspaceChain,
    pub elliptic: EllipticChain,
    pub parabolic: SubspaceChain,
}

impl Trial {
    pub fn run(space: &PolarSpace, seed: u64) -> Result<Trial> {
        let anisotropic = build_anisotropic_chain(space, seed)?;
        let elliptic = enrich_chain(space, build_elliptic_chain(space, seed)?)?;
        let parabolic = build_parabolic_chain(space, &elliptic, seed)?;
        Ok(Trial {
            seed,
            anisotropic,
            elliptic,
            parabolic,
        })
    }

    /// `(r, e, p)` read off the chains.
    pub fn lengths(&self) -> (usize, usize, usize) {
        (
            self.anisotropic.length(),
            self.elliptic.enriched_length(),
            self.parabolic.length(),
        )
    }
}

/// Gap values that every trial agreed on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntrinsicGapReport {
    pub r: usize,
    pub e: usize,
    pub p: usize,
    pub trials: usize,
    pub seeds: Vec<u64>,
}

impl IntrinsicGapReport {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.r, self.e, self.p)
    }

    /// Fails with [`Error::TrialDisagreement`] unless all trials agree.
    pub fn from_trials(trials: &[Trial]) -> Result<Self> {
        if trials.is_empty() {
            return Err(Error::Precondition("at least one trial is required".into()));
        }
        let lengths: Vec<(usize, usize, usize)> = trials.iter().map(Trial::lengths).collect();
        let names = ["anisotropic chain length", "elliptic gap", "parabolic chain length"];
        let pick = |t: &(usize, usize, usize), k: usize| [t.0, t.1, t.2][k];
        for (k, what) in names.iter().enumerate() {
            let values: Vec<usize> = lengths.iter().map(|t| pick(t, k)).collect();
            if values.iter().any(|&v| v != values[0]) {
                return Err(Error::TrialDisagreement {
                    what: what.to_string(),
                    values,
                });
            }
        }
        let (r, e, p) = lengths[0];
        Ok(IntrinsicGapReport {
            r,
            e,
            p,
            trials: trials.len(),
            seeds: trials.iter().map(|t| t.seed).collect(),
        })
    }
}

/// Seed of trial `i` for a run started with `base`.
pub fn trial_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add(i as u64)
}

/// Runs `trials` seeded trials concurrently; results come back in seed order.
pub fn run_trials(space: &PolarSpace, trials: usize, base_seed: u64) -> Result<Vec<Trial>> {
    (0..trials)
        .into_par_iter()
        .map(|i| Trial::run(space, trial_seed(base_seed, i)))
        .collect()
}

pub fn intrinsic_gaps(space: &PolarSpace, trials: usize, base_seed: u64) -> Result<IntrinsicGapReport> {
    IntrinsicGapReport::from_trials(&run_trials(space, trials, base_seed)?)
}

fn with_point(space: &PolarSpace, s: &GeoSubspace, extra: &[usize]) -> Result<GeoSubspace> {
    let mut set = s.points().clone();
    set.extend(extra.iter().copied());
    space.generate(&set)
}

/// Steps from `start` to the whole space, one seeded point at a time.
fn climb(space: &PolarSpace, start: GeoSubspace, order: &SeededOrder) -> Result<Vec<GeoSubspace>> {
    let mut members = vec![start];
    loop {
        let current = members.last().unwrap();
        let outside = (0..space.num_points()).filter(|&i| !current.contains(i));
        let Some(x) = order.first(outside) else {
            break;
        };
        let next = with_point(space, current, &[x])?;
        members.push(next);
    }
    Ok(members)
}

/// Maximal chain of nice subspaces from a seeded frame's closure to the
/// whole space, each step adding one seeded point outside the current member.
pub fn build_anisotropic_chain(space: &PolarSpace, seed: u64) -> Result<SubspaceChain> {
    let order = SeededOrder::new(seed, space.num_points());
    let frame = space.seeded_frame(&order);
    let start = space.generate(&space.set_of(frame.points()))?;
    Ok(SubspaceChain {
        members: climb(space, start, &order)?,
        seed,
    })
}

/// In characteristic two: from a seeded frame's closure, repeatedly extend
/// `E` by a point `x` outside it and a point `p` with `f(r, p) != 0`, where
/// `r` spans the radical of `f` on `span(E) + x`. Stops when no pair `(x, p)`
/// exists, which is checked over every point.
///
/// In odd characteristic every nice subspace is elliptic or hyperbolic and
/// the anisotropic chain is returned as the elliptic chain.
pub fn build_elliptic_chain(space: &PolarSpace, seed: u64) -> Result<EllipticChain> {
    if space.field().characteristic() != 2 {
        let chain = build_anisotropic_chain(space, seed)?;
        return Ok(EllipticChain {
            members: chain.members,
            extensions: Vec::new(),
            enrichment: None,
            seed,
        });
    }
    let order = SeededOrder::new(seed, space.num_points());
    let frame = space.seeded_frame(&order);
    let mut members = vec![space.generate(&space.set_of(frame.points()))?];
    let mut extensions = Vec::new();
    while let Some((x, p)) = elliptic_extension(space, members.last().unwrap(), &order)? {
        let next = with_point(space, members.last().unwrap(), &[x, p])?;
        members.push(next);
        extensions.push((x, p));
    }
    Ok(EllipticChain {
        members,
        extensions,
        enrichment: None,
        seed,
    })
}

/// Generator of the one-dimensional radical of `f` on `span(e) + x`.
fn radical_generator(space: &PolarSpace, e: &GeoSubspace, x: usize) -> Result<Vec<Gf>> {
    let w = e.span().with_vector(&space.point(x).coords)?;
    let rad = space.bilinear().radical_within(&w)?;
    if rad.dim() != 1 {
        return Err(Error::Precondition(format!(
            "radical of a one-point extension has dimension {}, expected 1",
            rad.dim()
        )));
    }
    Ok(rad.basis()[0].clone())
}

/// First `(x, p)` in seeded order extending `e` elliptically, or `None`
/// after trying every point `x` outside `e`.
pub fn elliptic_extension(
    space: &PolarSpace,
    e: &GeoSubspace,
    order: &SeededOrder,
) -> Result<Option<(usize, usize)>> {
    let field = space.field();
    for x in order.sorted((0..space.num_points()).filter(|&i| !e.contains(i))) {
        let r = radical_generator(space, e, x)?;
        let fr = space.bilinear().functional(&r)?;
        let mut partners = Vec::new();
        for pt in space.points() {
            if !field.is_zero(&linalg::dot(field, &fr, &pt.coords)?) {
                partners.push(pt.index);
            }
        }
        if let Some(p) = order.first(partners) {
            return Ok(Some((x, p)));
        }
    }
    Ok(None)
}

/// Inserts `P_i`, generated by `E_i` and `x_i`, between consecutive elliptic
/// members. In odd characteristic the chain is returned unchanged.
pub fn enrich_chain(space: &PolarSpace, mut chain: EllipticChain) -> Result<EllipticChain> {
    if space.field().characteristic() != 2 {
        return Ok(chain);
    }
    let mut members = Vec::with_capacity(2 * chain.members.len() - 1);
    for (i, e) in chain.members.iter().enumerate() {
        members.push(e.clone());
        if let Some(&(x, _)) = chain.extensions.get(i) {
            members.push(with_point(space, e, &[x])?);
        }
    }
    chain.enrichment = Some(SubspaceChain {
        members,
        seed: chain.seed,
    });
    Ok(chain)
}

/// Step-one chain from the top of a maximal elliptic chain to the whole space.
pub fn build_parabolic_chain(space: &PolarSpace, elliptic: &EllipticChain, seed: u64) -> Result<SubspaceChain> {
    let order = SeededOrder::new(seed ^ 0x9e37_79b9_7f4a_7c15, space.num_points());
    Ok(SubspaceChain {
        members: climb(space, elliptic.top().clone(), &order)?,
        seed,
    })
}

/// Enrichment length agreed on by all trials.
pub fn elliptic_gap(space: &PolarSpace, trials: usize, base_seed: u64) -> Result<usize> {
    Ok(intrinsic_gaps(space, trials, base_seed)?.e)
}

/// Parabolic chain length agreed on by all trials.
pub fn parabolic_gap(space: &PolarSpace, trials: usize, base_seed: u64) -> Result<usize> {
    Ok(intrinsic_gaps(space, trials, base_seed)?.p)
}

/// `span(top) + Rad(f) = V` as a direct sum.
pub fn is_radical_complement(space: &PolarSpace, top: &GeoSubspace) -> Result<bool> {
    let rad = space.radical();
    let meet = top.span().intersection(rad)?;
    Ok(meet.is_zero() && top.span().dim() + rad.dim() == space.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;
    use crate::forms::QuadraticForm;

    fn space(d: usize, terms: &[(usize, usize)], squares: &[usize]) -> PolarSpace {
        let f = GaloisField::prime(2).unwrap();
        let mut t: Vec<_> = terms.iter().map(|&(i, j)| (i, j, Gf(1))).collect();
        t.extend(squares.iter().map(|&i| (i, i, Gf(1))));
        PolarSpace::build(&QuadraticForm::from_terms(&f, d, &t).unwrap()).unwrap()
    }

    #[test]
    fn grid_chains_are_trivial() {
        let p = space(4, &[(0, 1), (2, 3)], &[]);
        let t = Trial::run(&p, 7).unwrap();
        assert_eq!(t.lengths(), (0, 0, 0));
        assert_eq!(t.elliptic.members[0].len(), 9);
    }

    #[test]
    fn parabolic_quadric() {
        let p = space(5, &[(1, 2), (3, 4)], &[0]);
        let t = Trial::run(&p, 3).unwrap();
        assert_eq!(t.anisotropic.length(), 1);
        assert_eq!(t.elliptic.steps(), 0);
        assert_eq!(t.lengths(), (1, 0, 1));
        assert!(is_radical_complement(&p, t.elliptic.top()).unwrap());
    }

    #[test]
    fn elliptic_quadric() {
        let p = space(6, &[(0, 1), (2, 3), (4, 5)], &[4, 5]);
        let report = intrinsic_gaps(&p, 20, 11).unwrap();
        assert_eq!(report.triple(), (2, 2, 0));
        let t = Trial::run(&p, 5).unwrap();
        assert_eq!(t.elliptic.members[0].len(), 9);
        assert_eq!(t.elliptic.top().len(), 27);
        let enr = t.elliptic.enrichment.as_ref().unwrap();
        assert_eq!(enr.length(), 2);
        assert!(enr.is_step_one());
        let rad = p.bilinear().radical_within(enr.members[1].span()).unwrap();
        assert_eq!(rad.dim(), 1);
    }
}
