//! Property tests: evaluation against quantifier expansion, grounding
//! against direct evaluation, and the solver against the oracle.

mod common;

use cdmn::engine::partial::{Evaluator, View};
use cdmn::engine::{ground, GroundProblem, Outcome};
use cdmn::fo::{canonical, eval_formula, Env};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Total<'a> {
    problem: &'a GroundProblem,
    assignment: &'a [usize],
}

impl View for Total<'_> {
    fn decided(&self, cell: usize) -> Option<usize> {
        Some(self.assignment[cell])
    }

    fn int_bounds(&self, cell: usize) -> (i64, i64) {
        match self.problem.cells[cell].domain[self.assignment[cell]].as_int() {
            Some(n) => (n, n),
            None => (1, 0),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn evaluation_agrees_with_quantifier_expansion(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = common::random_model(&mut rng, u128::MAX);
        let s = common::random_structure(&mut rng, &model);
        for f in model.theory.formulas() {
            let direct = eval_formula(f, &s, &mut Env::new());
            let expanded = eval_formula(&common::expand(f, &s), &s, &mut Env::new());
            prop_assert_eq!(direct, expanded, "{}", f);
        }
    }

    #[test]
    fn renaming_bound_variables_preserves_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = common::random_model(&mut rng, u128::MAX);
        let s = common::random_structure(&mut rng, &model);
        for f in model.theory.formulas() {
            let c = canonical(f);
            prop_assert_eq!(&canonical(&c), &c);
            // Sorting conjuncts may change which error is met first, so only
            // error-free evaluations are compared.
            if let (Ok(a), Ok(b)) = (eval_formula(f, &s, &mut Env::new()), eval_formula(&c, &s, &mut Env::new())) {
                prop_assert_eq!(a, b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn grounding_preserves_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = common::random_model(&mut rng, u128::MAX);
        let problem = ground(&model, 1_000_000).unwrap();
        for _ in 0..5 {
            let s = common::random_structure(&mut rng, &model);
            let assignment = problem.assignment_of(&s).expect("structure is total");
            prop_assert_eq!(&problem.structure(&assignment), &s);
            let view = Total { problem: &problem, assignment: &assignment };
            let mut ground_ok = true;
            for c in &problem.constraints {
                let o = Evaluator::new(&problem, &view).formula(c);
                prop_assert!(o == Outcome::TRUE || o == Outcome::FALSE || o == Outcome::ERR, "{}", o);
                ground_ok &= o == Outcome::TRUE;
            }
            let direct_ok = model.theory.formulas().all(|f| eval_formula(f, &s, &mut Env::new()) == Ok(true));
            prop_assert_eq!(ground_ok, direct_ok);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn solver_finds_exactly_the_oracle_models(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = common::random_model(&mut rng, 3_000);
        prop_assert_eq!(common::solver_models(&model), common::oracle_models(&model));
    }
}
