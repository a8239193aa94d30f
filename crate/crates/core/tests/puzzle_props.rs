use proptest::prelude::*;

use puzzlemaker_core::puzzle::{
    grade, shuffle_positions, Attempt, CodeBlock, BlockId, GradeStatus, Placement, PuzzleSpec,
};

fn puzzle_strategy() -> impl Strategy<Value = PuzzleSpec> {
    (prop::collection::vec(("[abc]", 0usize..3), 1..7), any::<u64>()).prop_map(|(lines, seed)| {
        let blocks = lines
            .into_iter()
            .map(|(t, indent)| CodeBlock { block_id: BlockId::fresh(), text: t, indent_level: indent })
            .collect();
        PuzzleSpec::new(blocks, seed)
    })
}

proptest! {
    #[test]
    fn shuffles_are_non_identity_permutations(n in 1usize..40, seed in any::<u64>()) {
        let order = shuffle_positions(n, seed);
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        if n >= 2 {
            prop_assert!(order.iter().enumerate().any(|(i, &p)| i != p));
        }
        prop_assert_eq!(order, shuffle_positions(n, seed));
    }

    #[test]
    fn solution_order_always_solves(p in puzzle_strategy()) {
        let report = grade(&p, &p.solved_attempt()).unwrap();
        prop_assert_eq!(report.status, GradeStatus::Solved);
    }

    #[test]
    fn presented_order_grades_by_text_and_indent(p in puzzle_strategy()) {
        let attempt = Attempt {
            placements: p
                .presented_order
                .iter()
                .map(|id| Placement { block_id: id.clone(), indent_level: p.block(id).unwrap().indent_level })
                .collect(),
        };
        let report = grade(&p, &attempt).unwrap();
        prop_assert!(report.diagnostics.len() <= p.solution.len());
        let same = p.presented_order.iter().zip(&p.solution).all(|(id, b)| {
            let placed = p.block(id).unwrap();
            (&placed.text, placed.indent_level) == (&b.text, b.indent_level)
        });
        prop_assert_eq!(report.status == GradeStatus::Solved, same);
    }
}
