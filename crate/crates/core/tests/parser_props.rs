//! Generative round-trip property for the problem-file front end: any
//! syntactically valid file renders to text that parses back to the same
//! declarations and clauses.

use absup::problem::{parse, render, AstLiteral, AstTerm, ProblemFile};
use proptest::prelude::*;

fn name_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("a".to_string()),
        Just("b".to_string()),
        Just("f0".to_string()),
        Just("g_1".to_string()),
        Just("store".to_string()),
    ]
}

fn var_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("X".to_string()),
        Just("Y0".to_string()),
        Just("Zed".to_string()),
    ]
}

fn term_strategy() -> impl Strategy<Value = AstTerm> {
    let leaf = prop_oneof![
        var_strategy().prop_map(AstTerm::Var),
        name_strategy().prop_map(|n| AstTerm::App(n, Vec::new())),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        (name_strategy(), proptest::collection::vec(inner, 1..3))
            .prop_map(|(n, args)| AstTerm::App(n, args))
    })
}

fn literal_strategy() -> impl Strategy<Value = AstLiteral> {
    prop_oneof![
        (term_strategy(), term_strategy(), any::<bool>()).prop_map(|(l, r, positive)| {
            AstLiteral {
                lhs: l,
                rhs: Some(r),
                positive,
            }
        }),
        // bare atoms must be applications, never variables
        (
            name_strategy(),
            proptest::collection::vec(term_strategy(), 0..3),
            any::<bool>()
        )
            .prop_map(|(n, args, positive)| AstLiteral {
                lhs: AstTerm::App(n, args),
                rhs: None,
                positive,
            }),
    ]
}

fn problem_strategy() -> impl Strategy<Value = ProblemFile> {
    (
        proptest::collection::vec(name_strategy(), 0..3),
        proptest::collection::vec((name_strategy(), 0usize..3), 0..2),
        proptest::collection::vec((name_strategy(), 1u32..5), 0..2),
        proptest::collection::vec((name_strategy(), -5i64..5), 0..2),
        proptest::collection::vec(proptest::collection::vec(literal_strategy(), 1..4), 0..4),
    )
        .prop_map(
            |(mut abducibles, predicates, weights, precedences, clauses)| {
                abducibles.dedup();
                ProblemFile {
                    abducibles,
                    predicates,
                    weights,
                    precedences,
                    clauses: clauses.into_iter().map(|l| (0, l)).collect(),
                }
            },
        )
}

type Stripped = (
    Vec<String>,
    Vec<(String, usize)>,
    Vec<(String, u32)>,
    Vec<(String, i64)>,
    Vec<Vec<AstLiteral>>,
);

fn strip(p: &ProblemFile) -> Stripped {
    (
        p.abducibles.clone(),
        p.predicates.clone(),
        p.weights.clone(),
        p.precedences.clone(),
        p.clauses.iter().map(|(_, l)| l.clone()).collect(),
    )
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(pf in problem_strategy()) {
        let text = render(&pf);
        let parsed = parse(&text).expect("rendered text parses");
        prop_assert_eq!(strip(&pf), strip(&parsed));
        // and the rendering is a fixpoint
        prop_assert_eq!(text, render(&parsed));
    }
}
