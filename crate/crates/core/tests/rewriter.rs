use matroid_exchange::audit::{self, AuditConfig};
use matroid_exchange::corpus::{builtin, fano_chain_pairs};
use matroid_exchange::fiber::{find_exchange_path, verify_sequence, BasisTuple, ExchangeSequence, ExchangeStep, Relation, DEFAULT_FIBER_CAP};
use matroid_exchange::rewriter::{
    eliminate_type_b, find_symmetric_exchange, push_down_relation, rewrite_quadratic, DegreeFunction, RemovalContext,
    RewriteError, TypeBRelation,
};
use matroid_exchange::ElemSet;

fn set(e: &[usize]) -> ElemSet {
    ElemSet::from_elems(e.iter().copied())
}

fn tuple(ms: &[&[usize]]) -> BasisTuple {
    BasisTuple(ms.iter().map(|m| set(m)).collect())
}

#[test]
fn symmetric_exchange_smallest_partner() {
    let u = builtin("u24").unwrap();
    assert_eq!(find_symmetric_exchange(&u, set(&[0, 1]), set(&[2, 3]), 0).unwrap(), 2);
    let p = builtin("pyramid").unwrap();
    // y = 1 would turn {1,3} into {2,3}
    assert_eq!(find_symmetric_exchange(&p, set(&[0, 2]), set(&[1, 3]), 2).unwrap(), 3);
    assert!(matches!(
        find_symmetric_exchange(&p, set(&[0, 2]), set(&[1, 3]), 1),
        Err(RewriteError::PreconditionViolated(_))
    ));
}

/// Brute force: every partner `y` for which both exchanges give bases.
#[test]
fn symmetric_exchange_matches_brute_force_on_fano() {
    let f = builtin("fano").unwrap();
    for &b1 in f.bases() {
        for &b2 in f.bases() {
            for x in b1.difference(b2) {
                let valid: Vec<usize> = b2
                    .difference(b1)
                    .iter()
                    .filter(|&y| f.is_basis(b1.without(x).with(y)) && f.is_basis(b2.without(y).with(x)))
                    .collect();
                assert!(!valid.is_empty());
                assert_eq!(find_symmetric_exchange(&f, b1, b2, x).unwrap(), valid[0]);
            }
        }
    }
}

#[test]
fn quadratic_in_u24_through_apex_complement() {
    let u = builtin("u24").unwrap();
    let b = set(&[2, 3]);
    let seq = rewrite_quadratic(&u, b, set(&[0, 2]), set(&[1, 3]), set(&[0, 1]), set(&[0, 3]), set(&[1, 2])).unwrap();
    let pyramid = builtin("pyramid").unwrap();
    verify_sequence(&pyramid, &seq, &tuple(&[&[0, 3], &[1, 2]])).unwrap();
    assert!(seq.len() <= 1);
}

#[test]
fn quadratic_degenerate_is_direct() {
    let u = builtin("u24").unwrap();
    let b = set(&[2, 3]);
    // second exchange undoes the first: x = z and y = w
    let seq = rewrite_quadratic(&u, b, set(&[0, 2]), set(&[1, 3]), set(&[0, 1]), set(&[0, 2]), set(&[1, 3])).unwrap();
    assert!(seq.is_empty());
}

#[test]
fn quadratic_rejects_bad_input() {
    let u = builtin("u24").unwrap();
    let err = rewrite_quadratic(&u, set(&[2, 3]), set(&[0, 1]), set(&[1, 3]), set(&[0, 1]), set(&[0, 3]), set(&[1, 2]));
    assert!(matches!(err, Err(RewriteError::PreconditionViolated(_))));
    let sq = builtin("square").unwrap();
    assert!(matches!(
        RemovalContext::new(&sq, set(&[0, 2])),
        Err(RewriteError::MbNotMatroid(_))
    ));
}

#[test]
fn type_b_rejects_b_among_members() {
    let u = builtin("u37").unwrap();
    let b = set(&[0, 1, 2]);
    let rel = TypeBRelation { b, b1: b, b2: set(&[3, 4, 5]), b1p: set(&[0, 1, 3]), b2p: set(&[2, 4, 5]) };
    assert!(matches!(eliminate_type_b(&u, b, &rel), Err(RewriteError::PreconditionViolated(_))));
}

#[test]
fn type_b_case_two_uses_b_exchange() {
    // in U(3,7) minus {0,1,2}: b1 = {0,3,4}, b2 = {1,5,6}; x = 0 in b, y = 5 outside
    let u = builtin("u37").unwrap();
    let b = set(&[0, 1, 2]);
    let rel = TypeBRelation { b, b1: set(&[0, 3, 4]), b2: set(&[1, 5, 6]), b1p: set(&[3, 4, 5]), b2p: set(&[0, 1, 6]) };
    let seq = eliminate_type_b(&u, b, &rel).unwrap();
    assert_eq!(seq.len(), 2);
    assert_eq!(seq.case_trace, vec!["type-b/case-2", "type-b/case-2"]);
    verify_sequence(&u, &seq, &BasisTuple(vec![b, rel.b1p, rel.b2p])).unwrap();
    assert!(!audit::has_type_b_step(&seq, b));
}

#[test]
fn push_down_u24_example() {
    let u = builtin("u24").unwrap();
    let b = set(&[2, 3]);
    let rel = Relation { lhs: tuple(&[&[2, 3], &[0, 1]]), rhs: tuple(&[&[0, 2], &[1, 3]]) };
    let seq = push_down_relation(&u, b, &rel).unwrap();
    assert_eq!(seq.steps[0], ExchangeStep { i: 0, j: 1, x: 2, y: 0 });
    let tuples = seq.tuples().unwrap();
    assert!(tuples[1].same_multiset(&tuple(&[&[0, 3], &[1, 2]])));
    assert_eq!(seq.len(), 2);
    verify_sequence(&u, &seq, &rel.rhs).unwrap();
    assert_eq!(seq.case_trace, vec!["push-down/greedy", "push-down/bridge"]);
}

#[test]
fn push_down_cancels_common_b_and_handles_b_free() {
    let u = builtin("u24").unwrap();
    let b = set(&[2, 3]);
    let rel = Relation {
        lhs: tuple(&[&[2, 3], &[2, 3], &[0, 1]]),
        rhs: tuple(&[&[0, 2], &[2, 3], &[1, 3]]),
    };
    let seq = push_down_relation(&u, b, &rel).unwrap();
    verify_sequence(&u, &seq, &rel.rhs).unwrap();
    let deg = DegreeFunction::new(b);
    assert!(seq.tuples().unwrap().iter().all(|t| deg.b_count(&t.0) >= 1));

    let free = Relation { lhs: tuple(&[&[0, 2], &[1, 3]]), rhs: tuple(&[&[0, 3], &[1, 2]]) };
    let seq = push_down_relation(&u, b, &free).unwrap();
    assert!(seq.case_trace.iter().all(|l| l == "push-down/bridge"));
    verify_sequence(&u, &seq, &free.rhs).unwrap();
}

#[test]
fn degree_function() {
    let deg = DegreeFunction::new(set(&[0, 1, 2]));
    assert_eq!(deg.degree(set(&[0, 1, 2])), 0);
    assert_eq!(deg.degree(set(&[0, 4, 5])), 2);
    assert_eq!(deg.tuple_degree(&[set(&[0, 1, 2]), set(&[0, 1, 3]), set(&[3, 4, 5])]), 4);
}

#[test]
fn lift_without_b_returns_hint() {
    let pairs = fano_chain_pairs();
    let (m, b) = &pairs[6];
    let ctx = RemovalContext::new(m, *b).unwrap();
    let lhs = tuple(&[&[0, 1, 3], &[2, 4, 6]]);
    let fano = ctx.reduced();
    let rhs = BasisTuple(vec![set(&[0, 1, 4]), set(&[2, 3, 6])]);
    assert!(fano.is_basis(rhs.0[0]) && fano.is_basis(rhs.0[1]));
    let hint = find_exchange_path(fano, &lhs, &rhs, DEFAULT_FIBER_CAP).unwrap();
    let lifted = ctx.lift_relation(&Relation { lhs: lhs.clone(), rhs: rhs.clone() }, &hint).unwrap();
    assert_eq!(lifted.steps, hint.steps);
    verify_sequence(fano, &lifted, &rhs).unwrap();
}

#[test]
fn lift_degree_two_equals_quadratic() {
    let u = builtin("u24").unwrap();
    let b = set(&[2, 3]);
    let ctx = RemovalContext::new(&u, b).unwrap();
    let lhs = tuple(&[&[0, 2], &[1, 3]]);
    let rhs = tuple(&[&[0, 3], &[1, 2]]);
    let hint = ExchangeSequence {
        start: lhs.clone(),
        steps: vec![ExchangeStep { i: 0, j: 1, x: 0, y: 3 }, ExchangeStep { i: 0, j: 1, x: 2, y: 0 }],
        case_trace: vec![],
    };
    verify_sequence(&u, &hint, &rhs).unwrap();
    let lifted = ctx.lift_relation(&Relation { lhs: lhs.clone(), rhs: rhs.clone() }, &hint).unwrap();
    let direct = ctx
        .rewrite_quadratic(set(&[0, 2]), set(&[1, 3]), set(&[0, 1]), set(&[0, 3]), set(&[1, 2]))
        .unwrap();
    assert_eq!(lifted.steps, direct.steps);
}

#[test]
fn audits_pass_on_small_chain_steps() {
    let cfg = AuditConfig { seed: 7, exhaustive_limit: 100_000, samples: 500 };
    for (m, b) in fano_chain_pairs().iter().take(2) {
        let ctx = RemovalContext::new(m, *b).unwrap();
        for s in [
            audit::audit_quadratic(&ctx, &cfg),
            audit::audit_type_b(&ctx, &cfg),
            audit::audit_push_down(&ctx, &cfg),
            audit::audit_single_b(&ctx, &cfg),
        ] {
            assert!(s.passes(), "{} failed: {:?}", s.check, &s.failures[..s.failures.len().min(3)]);
            assert!(s.audited > 0);
        }
    }
}
