use std::sync::OnceLock;

use polargap::catalog::standard_forms;
use polargap::chains::{is_radical_complement, Trial};
use polargap::field::Field;
use polargap::geometry::{PolarSpace, SubspaceClass};
use proptest::prelude::*;

fn spaces() -> &'static [(String, PolarSpace)] {
    static SPACES: OnceLock<Vec<(String, PolarSpace)>> = OnceLock::new();
    SPACES.get_or_init(|| {
        standard_forms()
            .into_iter()
            .map(|e| (e.name, PolarSpace::build(&e.form).unwrap()))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn anisotropic_chains_are_maximal_nice_step_one(i in 0..19usize, seed in any::<u64>()) {
        let (name, space) = &spaces()[i];
        let t = Trial::run(space, seed).unwrap();
        let chain = &t.anisotropic;
        prop_assert!(chain.is_strictly_increasing(), "{}", name);
        prop_assert!(chain.is_step_one(), "{}", name);
        for m in &chain.members {
            prop_assert!(space.is_nice(m).unwrap(), "{}", name);
        }
        prop_assert_eq!(chain.top().len(), space.num_points());
        prop_assert_eq!(chain.length(), space.gaps().r);
    }

    #[test]
    fn elliptic_chains_have_elliptic_members(i in 0..19usize, seed in any::<u64>()) {
        let (name, space) = &spaces()[i];
        let t = Trial::run(space, seed).unwrap();
        let chain = &t.elliptic;
        let g = space.gaps();
        prop_assert!(is_radical_complement(space, chain.top()).unwrap() || space.field().characteristic() != 2);
        if space.field().characteristic() == 2 {
            prop_assert_eq!(2 * chain.steps(), g.e, "{}", name);
            for w in chain.members.windows(2) {
                prop_assert_eq!(w[1].span().dim() - w[0].span().dim(), 2);
            }
            for m in chain.members.iter().skip(1) {
                let class = space.classify_subspace(m).unwrap();
                prop_assert_eq!(class.class, SubspaceClass::Elliptic, "{}", name);
            }
            let enr = chain.enrichment.as_ref().unwrap();
            prop_assert_eq!(enr.length(), 2 * chain.steps());
        }
        prop_assert_eq!(t.lengths(), g.triple(), "{}", name);
    }

    #[test]
    fn trials_are_reproducible(i in 0..19usize, seed in any::<u64>()) {
        let (_, space) = &spaces()[i];
        let a = Trial::run(space, seed).unwrap();
        let b = Trial::run(space, seed).unwrap();
        let pts = |t: &Trial| t.parabolic.members.iter().map(|m| m.points().ones().collect::<Vec<_>>()).collect::<Vec<_>>();
        prop_assert_eq!(pts(&a), pts(&b));
        prop_assert_eq!(a.elliptic.extensions, b.elliptic.extensions);
    }
}
