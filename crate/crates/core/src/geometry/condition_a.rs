use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{PointSet, PolarSpace};
use crate::error::{Error, Result};

/// Non-collinear `a, b`, a maximal singular subspace `n` of `{a, b}^perp`
/// and a maximal singular subspace `m` of the space with `n` inside `m`
/// and `m` disjoint from `{a, b}^perp^perp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionAWitness {
    pub a: usize,
    pub b: usize,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ConditionA {
    Holds { maximal_singular_subspaces: usize },
    Fails(ConditionAWitness),
}

impl ConditionA {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionA::Holds { .. })
    }
}

impl PolarSpace {
    /// Maximal singular subspaces contained in the subspace `within`, by
    /// depth-first extension of closed cliques of the collinearity graph.
    /// At most `budget` singular subspaces are visited.
    pub fn maximal_singular_subspaces(&self, within: &PointSet, budget: usize) -> Result<Vec<PointSet>> {
        let mut seen: HashSet<PointSet> = HashSet::new();
        let mut maximal = Vec::new();
        let mut stack = vec![self.empty_set()];
        seen.insert(self.empty_set());
        while let Some(current) = stack.pop() {
            let mut candidates = self.perp_within(&current, within);
            candidates.difference_with(&current);
            if candidates.is_clear() {
                if !current.is_clear() {
                    maximal.push(current);
                }
                continue;
            }
            for p in candidates.ones() {
                let mut next = current.clone();
                next.insert(p);
                let next = self.closure_points(&next);
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    stack.push(next);
                }
            }
        }
        maximal.sort_by_key(|m| m.ones().collect::<Vec<_>>());
        Ok(maximal)
    }

    /// Exhaustive check of Condition (A): for all non-collinear `a, b`, all
    /// maximal singular `N` of `{a, b}^perp` and all maximal singular `M`
    /// of the space with `N` inside `M`, `M` meets `{a, b}^perp^perp`.
    ///
    /// A maximal `N` inside `M` is forced to be `M` intersected with
    /// `{a, b}^perp`, so each pair only needs one pass over the `M`s. The
    /// returned witness is the first failing pair in index order.
    pub fn check_condition_a(&self, budget: usize) -> Result<ConditionA> {
        let all = self.all_points();
        let ms = self.maximal_singular_subspaces(&all, budget)?;
        let n = self.num_points();
        let witness = (0..n).into_par_iter().find_map_first(|a| {
            let mut partners = all.clone();
            partners.difference_with(self.perp_of_point(a));
            for b in partners.ones().filter(|&b| b > a) {
                let mut perp_ab = self.perp_of_point(a).clone();
                perp_ab.intersect_with(self.perp_of_point(b));
                let hyperbolic = self.perp(&perp_ab);
                for m in &ms {
                    if !m.is_disjoint(&hyperbolic) {
                        continue;
                    }
                    let mut nset = m.clone();
                    nset.intersect_with(&perp_ab);
                    if self.is_maximal_singular_in(&nset, &perp_ab) {
                        return Some(ConditionAWitness {
                            a,
                            b,
                            n: nset.ones().collect(),
                            m: m.ones().collect(),
                        });
                    }
                }
            }
            None
        });
        Ok(match witness {
            Some(w) => ConditionA::Fails(w),
            None => ConditionA::Holds {
                maximal_singular_subspaces: ms.len(),
            },
        })
    }

    /// `n` is a singular subspace of `x` that no further point of `x` extends.
    fn is_maximal_singular_in(&self, n: &PointSet, x: &PointSet) -> bool {
        let mut extra = self.perp_within(n, x);
        extra.difference_with(n);
        extra.is_clear()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Gf};
    use crate::forms::QuadraticForm;

    fn space(d: usize, terms: &[(usize, usize)], squares: &[usize]) -> PolarSpace {
        let f = GaloisField::prime(2).unwrap();
        let mut t: Vec<_> = terms.iter().map(|&(i, j)| (i, j, Gf(1))).collect();
        t.extend(squares.iter().map(|&i| (i, i, Gf(1))));
        PolarSpace::build(&QuadraticForm::from_terms(&f, d, &t).unwrap()).unwrap()
    }

    #[test]
    fn maximal_singular_of_grid_are_its_lines() {
        let p = space(4, &[(0, 1), (2, 3)], &[]);
        let ms = p.maximal_singular_subspaces(&p.all_points(), 1000).unwrap();
        assert_eq!(ms.len(), 6);
        assert!(ms.iter().all(|m| m.count_ones(..) == 3));
    }

    #[test]
    fn condition_a_by_type() {
        assert!(space(4, &[(0, 1), (2, 3)], &[]).check_condition_a(10_000).unwrap().holds());
        assert!(space(5, &[(1, 2), (3, 4)], &[0]).check_condition_a(10_000).unwrap().holds());
        let ell = space(6, &[(0, 1), (2, 3), (4, 5)], &[4, 5]);
        match ell.check_condition_a(10_000).unwrap() {
            ConditionA::Fails(w) => {
                assert!(!ell.collinear(w.a, w.b));
                let m = ell.set_of(w.m.iter().copied());
                let hyp = ell.perp(&ell.perp(&ell.set_of([w.a, w.b])));
                assert!(m.is_disjoint(&hyp));
                assert!(w.n.iter().all(|x| w.m.contains(x)));
            }
            ConditionA::Holds { .. } => panic!("elliptic quadric must fail"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = space(4, &[(0, 1), (2, 3)], &[]);
        assert!(matches!(p.check_condition_a(3), Err(Error::BudgetExceeded { budget: 3 })));
    }
}
