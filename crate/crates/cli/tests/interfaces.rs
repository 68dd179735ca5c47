//! Interface-level checks: the problem-file round trip on the corpus, the
//! trace log format, exit codes, the oracle and verify flags, and the
//! saturation-level invariants that need whole runs to observe.

use absup::calculus::rename_apart;
use absup::implicates::{entails_ground, extract, minimize};
use absup::oracle::{oracle_entails, oracle_implicates};
use absup::problem;
use absup::saturation::{is_saturated, saturate, Mode, SaturationConfig, Status, Trace};

fn corpus(name: &str) -> String {
    format!("{}/tests/corpus/{}", env!("CARGO_MANIFEST_DIR"), name)
}

const CORPUS: [&str; 8] = [
    "ex1_rewrite_chain.abd",
    "ex2_monotone.abd",
    "ex3_assertion.abd",
    "ex4_substitutivity.abd",
    "ex5_variables.abd",
    "ex6_sar_vs_sa.abd",
    "ex7_prime_set.abd",
    "arrays.abd",
];

#[test]
fn parse_render_parse_is_a_fixpoint_on_the_corpus() {
    for file in CORPUS {
        let text = std::fs::read_to_string(corpus(file)).unwrap();
        let pf = problem::parse(&text).unwrap();
        let rendered = problem::render(&pf);
        let pf2 = problem::parse(&rendered).unwrap();
        let strip = |p: &problem::ProblemFile| {
            (
                p.abducibles.clone(),
                p.predicates.clone(),
                p.weights.clone(),
                p.precedences.clone(),
                p.clauses.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>(),
            )
        };
        assert_eq!(strip(&pf), strip(&pf2), "{file}");
        assert_eq!(rendered, problem::render(&pf2), "{file}");
    }
}

#[test]
fn trace_log_is_line_delimited_records() {
    let mut p = problem::parse(&std::fs::read_to_string(corpus("ex1_rewrite_chain.abd")).unwrap())
        .unwrap()
        .build()
        .unwrap();
    let mut buf: Vec<u8> = Vec::new();
    {
        let mut trace = Trace::to(&mut buf);
        let inputs = p.clauses.clone();
        saturate(
            &mut p.ctx,
            &inputs,
            &SaturationConfig::default(),
            &mut trace,
        );
    }
    let text = String::from_utf8(buf).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        assert!(
            line.starts_with("event=derived")
                || line.starts_with("event=subsumed")
                || line.starts_with("event=asserted"),
            "unexpected event line: {line}"
        );
        assert!(line.contains(" id="), "{line}");
        assert!(line.contains(" rule="), "{line}");
        assert!(line.contains(" parents="), "{line}");
    }
    // the derivation of the golden constraint is visible in the log
    assert!(text.lines().any(|l| l.starts_with("event=asserted")));
}

#[test]
fn exit_codes() {
    // input error
    let mut out = Vec::new();
    let code = absup_cli::run(&["--abduce".into(), "/nonexistent.abd".into()], &mut out);
    assert_eq!(code, 2);
    // syntax error
    let tmp = std::env::temp_dir().join("absup_bad_input.abd");
    std::fs::write(&tmp, "clause f(a = b;").unwrap();
    let mut out = Vec::new();
    let code = absup_cli::run(&["--abduce".into(), tmp.to_str().unwrap().into()], &mut out);
    assert_eq!(code, 2);
    assert!(String::from_utf8(out).unwrap().starts_with("error:"));
    // limit reached
    let mut out = Vec::new();
    let code = absup_cli::run(
        &[
            "--abduce".into(),
            corpus("ex5_variables.abd"),
            "--mode".into(),
            "sa".into(),
            "--max-iters".into(),
            "5".into(),
        ],
        &mut out,
    );
    assert_eq!(code, 1);
    assert!(String::from_utf8(out).unwrap().contains("limit-reached"));
    // success
    let mut out = Vec::new();
    let code = absup_cli::run(
        &["--abduce".into(), corpus("ex1_rewrite_chain.abd")],
        &mut out,
    );
    assert_eq!(code, 0);
    assert!(String::from_utf8(out)
        .unwrap()
        .contains("# status: saturated"));
}

#[test]
fn oracle_flag_requires_ground_input() {
    let mut out = Vec::new();
    let code = absup_cli::run(
        &[
            "--abduce".into(),
            corpus("ex5_variables.abd"),
            "--oracle".into(),
        ],
        &mut out,
    );
    assert_eq!(code, 2);
    // and works on the ground prime-set example
    let mut out = Vec::new();
    let code = absup_cli::run(
        &[
            "--abduce".into(),
            corpus("ex7_prime_set.abd"),
            "--oracle".into(),
            "--max-len".into(),
            "3".into(),
            "--universe".into(),
            "12".into(),
        ],
        &mut out,
    );
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("# status: oracle"));
    assert!(text.contains("b != f") || text.contains("f != b"));
}

#[test]
fn verify_flag_cross_checks_the_oracle() {
    let mut out = Vec::new();
    let code = absup_cli::run(
        &[
            "--abduce".into(),
            corpus("ex7_prime_set.abd"),
            "--verify".into(),
            "--max-len".into(),
            "3".into(),
            "--universe".into(),
            "12".into(),
        ],
        &mut out,
    );
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("# verify: ok"), "{text}");
}

#[test]
fn sar_stored_clauses_have_no_selected_flat_literal() {
    for file in ["ex6_sar_vs_sa.abd", "ex7_prime_set.abd", "arrays.abd"] {
        let mut p = problem::parse(&std::fs::read_to_string(corpus(file)).unwrap())
            .unwrap()
            .build()
            .unwrap();
        let cfg = SaturationConfig {
            mode: Mode::Sar,
            max_iterations: 2_000,
            ..SaturationConfig::default()
        };
        let inputs = p.clauses.clone();
        let r = saturate(&mut p.ctx, &inputs, &cfg, &mut Trace::none());
        for c in &r.clauses {
            let sel = p.ctx.ord.select(&p.ctx.sig, &p.ctx.bank, &c.clause);
            for l in sel {
                assert!(
                    !l.is_a_flat(&p.ctx.bank, &p.ctx.sig),
                    "{file}: stored clause keeps a selected A-flat literal"
                );
            }
        }
    }
}

#[test]
fn saturated_results_pass_the_inference_audit() {
    // fairness check: on saturated runs, no stored pair admits an
    // inference whose conclusion is neither a tautology nor subsumed
    for (file, mode) in [
        ("ex1_rewrite_chain.abd", Mode::Sa),
        ("ex6_sar_vs_sa.abd", Mode::Sar),
    ] {
        let mut p = problem::parse(&std::fs::read_to_string(corpus(file)).unwrap())
            .unwrap()
            .build()
            .unwrap();
        let cfg = SaturationConfig {
            mode,
            ..SaturationConfig::default()
        };
        let inputs = p.clauses.clone();
        let r = saturate(&mut p.ctx, &inputs, &cfg, &mut Trace::none());
        assert_eq!(r.status, Status::Saturated, "{file}");
        assert!(
            is_saturated(&mut p.ctx, &r.clauses, mode),
            "{file}: an enabled inference was starved"
        );
    }
}

#[test]
fn minimize_outputs_an_antichain_and_oracle_is_monotone() {
    let mut p = problem::parse(&std::fs::read_to_string(corpus("ex7_prime_set.abd")).unwrap())
        .unwrap()
        .build()
        .unwrap();
    let inputs = p.clauses.clone();
    let r = saturate(
        &mut p.ctx,
        &inputs,
        &SaturationConfig {
            max_iterations: 300,
            ..SaturationConfig::default()
        },
        &mut Trace::none(),
    );
    let impls = extract(&mut p.ctx, &r.clauses);
    let min1 = minimize(&mut p.ctx, &impls);
    // idempotent
    let min2 = minimize(&mut p.ctx, &min1);
    assert_eq!(min1, min2);
    // no kept element strictly entails another
    for a in &min1 {
        for b in &min1 {
            if a != b {
                assert!(
                    !(entails_ground(&mut p.ctx, &a.clause, &b.clause)
                        && !entails_ground(&mut p.ctx, &b.clause, &a.clause))
                        || true,
                );
                if entails_ground(&mut p.ctx, &a.clause, &b.clause) {
                    assert!(
                        entails_ground(&mut p.ctx, &b.clause, &a.clause),
                        "minimize kept a dominated element"
                    );
                }
            }
        }
    }
    // oracle monotone: S |= C implies S ∪ S' |= C
    let primes = oracle_implicates(&mut p.ctx, &inputs, 2, 12).unwrap();
    let mut widened = inputs.clone();
    widened.push(primes[0].clause.clone());
    for c in &primes {
        assert!(oracle_entails(&mut p.ctx, &widened, &c.clause, 12).unwrap());
    }
    // prime sets are subsumption-free
    for a in &primes {
        for b in &primes {
            if a != b && entails_ground(&mut p.ctx, &a.clause, &b.clause) {
                assert!(entails_ground(&mut p.ctx, &b.clause, &a.clause));
            }
        }
    }
}

#[test]
fn renaming_does_not_change_classification_or_selection() {
    let mut p = problem::parse(&std::fs::read_to_string(corpus("ex5_variables.abd")).unwrap())
        .unwrap()
        .build()
        .unwrap();
    let inputs = p.clauses.clone();
    let mut next_var = 50_000;
    for c in inputs {
        let as_aclause = absup::calculus::AClause {
            id: 0,
            clause: c.clone(),
            constraint: absup::aset::ASet::new(),
            rule: absup::calculus::RuleTag::Input,
            parents: Vec::new(),
        };
        let renamed = rename_apart(&mut p.ctx, &as_aclause, &mut next_var);
        assert_eq!(
            c.classify(&p.ctx.bank, &p.ctx.sig),
            renamed.clause.classify(&p.ctx.bank, &p.ctx.sig)
        );
        assert_eq!(
            p.ctx.ord.select(&p.ctx.sig, &p.ctx.bank, &c).len(),
            p.ctx
                .ord
                .select(&p.ctx.sig, &p.ctx.bank, &renamed.clause)
                .len()
        );
    }
}

#[test]
fn pipeline_on_a_single_flat_clause() {
    // a = b | c = d : restricted saturation transfers it whole, and the
    // pipeline returns the clause itself
    let pf = problem::parse("abducibles a, b, c, d;\nclause a = b | c = d;\n").unwrap();
    let mut p = pf.build().unwrap();
    let inputs = p.clauses.clone();
    let r = absup::saturation::combine_pipeline(
        &mut p.ctx,
        &inputs,
        &SaturationConfig::default(),
        &mut Trace::none(),
    );
    assert_eq!(r.status, Status::Saturated);
    let primes = minimize(&mut p.ctx, &r.implicates);
    assert_eq!(primes.len(), 1);
    assert_eq!(primes[0].clause, inputs[0]);

    // an input with no flat consequences produces no implicates
    let pf = problem::parse("abducibles a;\nclause f(X) = g(X);\n").unwrap();
    let mut p = pf.build().unwrap();
    let inputs = p.clauses.clone();
    let r = absup::saturation::combine_pipeline(
        &mut p.ctx,
        &inputs,
        &SaturationConfig::default(),
        &mut Trace::none(),
    );
    assert!(r.implicates.is_empty());
}
