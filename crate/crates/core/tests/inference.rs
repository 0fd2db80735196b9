use proptest::prelude::*;

use gsimn_core::citest::IndependenceEngine;
use gsimn_core::graph::UndirectedGraph;
use gsimn_core::kb::{i_gsimn, ClosureConfig, ForwardChainer, KnowledgeBase, Origin, SetStatement};
use gsimn_core::VarSet;

fn vs(v: &[usize]) -> VarSet {
    VarSet::from(v)
}

fn untouched_engine(n: usize) -> IndependenceEngine {
    IndependenceEngine::oracle(UndirectedGraph::complete(n).unwrap())
}

#[test]
fn grow_of_seven_is_inferred_after_grow_of_five() {
    // Tests recorded while growing the blanket of 5: dependents 3, 4, 6, 7
    // in that order, and 1, 2, 0 found independent on the way.
    let mut kb = KnowledgeBase::new(8);
    kb.add(5, 3, vs(&[]), false, Origin::Executed);
    kb.add(5, 4, vs(&[3]), false, Origin::Executed);
    kb.add(5, 1, vs(&[3, 4]), true, Origin::Executed);
    kb.add(5, 6, vs(&[3, 4]), false, Origin::Executed);
    kb.add(5, 2, vs(&[3, 4, 6]), true, Origin::Executed);
    kb.add(5, 7, vs(&[3, 4, 6]), false, Origin::Executed);
    kb.add(5, 0, vs(&[3, 4, 6, 7]), true, Origin::Executed);

    let mut e = untouched_engine(8);
    let none = VarSet::EMPTY;
    let queries = [(3, vs(&[])), (4, vs(&[3])), (6, vs(&[3, 4])), (5, vs(&[3, 4, 6]))];
    for (y, s) in queries {
        let independent = i_gsimn(7, y, &s, &none, &none, &mut kb, &mut e).unwrap();
        assert!(!independent, "(7,{y}|{s})");
    }
    assert_eq!(e.ledger().executed_count, 0);
    assert_eq!(e.ledger().weighted_cost, 0);
    assert_eq!(e.ledger().inferred_count, 4);
}

#[test]
fn strong_union_dependence_needs_no_test() {
    let mut kb = KnowledgeBase::new(8);
    kb.add(0, 1, vs(&[3, 4, 6]), false, Origin::Executed);
    let mut e = untouched_engine(8);
    let none = VarSet::EMPTY;
    assert!(!i_gsimn(0, 1, &vs(&[3, 4]), &none, &none, &mut kb, &mut e).unwrap());
    assert_eq!(e.ledger().executed_count, 0);
}

fn subset_of(mask: u32, pool: &[usize]) -> VarSet {
    pool.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

fn closed(n: usize, given: &[SetStatement]) -> ForwardChainer {
    let mut fc = ForwardChainer::new(n, ClosureConfig::default()).unwrap();
    for s in given {
        fc.insert(s).unwrap();
    }
    fc.close().unwrap();
    fc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_triangle_is_derivable_by_the_chainer(a in 0u32..64, b in 0u32..64, y_in_a: bool, x_in_b: bool) {
        // x=0, w=1, y=2; the other variables form the conditioning pool
        let pool = [3, 4, 5, 6, 7, 8];
        let mut sa = subset_of(a, &pool);
        let mut sb = subset_of(b, &pool);
        if y_in_a { sa.insert(2); }
        if x_in_b { sb.insert(0); }
        let mut kb = KnowledgeBase::new(9);
        kb.add(0, 1, sa, false, Origin::Executed);
        kb.add(1, 2, sb, false, Origin::Executed);
        let s = sa.intersection(&sb);
        let inferred = kb.dependence_by_triangle(0, 2, &s);
        prop_assert!(inferred.is_some());
        let fc = closed(9, &[
            SetStatement::pair(0, 1, sa, false).unwrap(),
            SetStatement::pair(1, 2, sb, false).unwrap(),
        ]);
        prop_assert_eq!(fc.get_pair(0, 2, &inferred.unwrap()), Some(false));
    }

    #[test]
    fn i_triangle_is_derivable_by_the_chainer(a in 0u32..32, extra in 0u32..32, x_in_b: bool) {
        let pool = [3, 4, 5, 6, 7];
        let sa = subset_of(a, &pool);
        let mut sb = sa.union(&subset_of(extra, &pool));
        if x_in_b { sb.insert(0); }
        let mut kb = KnowledgeBase::new(8);
        kb.add(0, 1, sa, true, Origin::Executed);
        kb.add(1, 2, sb, false, Origin::Executed);
        let inferred = kb.independence_by_triangle(0, 2, &sa);
        prop_assert_eq!(inferred, Some(sa));
        let fc = closed(8, &[
            SetStatement::pair(0, 1, sa, true).unwrap(),
            SetStatement::pair(1, 2, sb, false).unwrap(),
        ]);
        prop_assert_eq!(fc.get_pair(0, 2, &sa), Some(true));
    }

    #[test]
    fn strong_union_derivable_queries_never_execute(
        entries in proptest::collection::vec((0usize..6, 0usize..6, 0u32..256, any::<bool>()), 0..12),
        qx in 0usize..6, qy in 0usize..6, qs in 0u32..256,
    ) {
        prop_assume!(qx != qy);
        let mut kb = KnowledgeBase::new(8);
        for (x, y, mask, ind) in entries {
            if x == y { continue; }
            let mut c = VarSet::from_iter((0..8).filter(|v| mask >> v & 1 == 1));
            c.remove(x);
            c.remove(y);
            kb.add(x, y, c, ind, Origin::Executed);
        }
        let mut s = VarSet::from_iter((0..8).filter(|v| qs >> v & 1 == 1));
        s.remove(qx);
        s.remove(qy);
        let derivable = kb.infer_strong_union(qx, qy, &s);
        let mut e = untouched_engine(8);
        let none = VarSet::EMPTY;
        let got = i_gsimn(qx, qy, &s, &none, &none, &mut kb, &mut e).unwrap();
        if let Some(v) = derivable {
            prop_assert_eq!(e.ledger().executed_count, 0);
            // a dependence by Strong Union outranks everything after it
            if !v {
                prop_assert!(!got);
            }
        }
    }

    #[test]
    fn closure_of_separation_facts_is_sound(mask in 0u32..(1 << 21), picks in any::<u64>()) {
        // n = 7, a random half of the pair statements with |z| <= 2
        let n = 7;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = UndirectedGraph::from_edges(n, &edges).unwrap();
        let mut given = Vec::new();
        let mut bits = picks;
        for &(u, v) in &pairs {
            let rest: Vec<usize> = (0..n).filter(|&w| w != u && w != v).collect();
            for (i, &a) in rest.iter().enumerate() {
                for &b in &rest[i..] {
                    bits = bits.rotate_left(7) ^ 0x9e37_79b9_7f4a_7c15;
                    if bits & 1 == 1 {
                        let z = VarSet::from([a, b]);
                        given.push(SetStatement::pair(u, v, z, g.vertex_separated(u, v, &z).unwrap()).unwrap());
                    }
                }
            }
        }
        let fc = closed(n, &given);
        prop_assert_eq!(fc.conflicts(), 0);
        for s in fc.statements() {
            prop_assert_eq!(g.set_separated(&s.xs, &s.ys, &s.cond).unwrap(), s.independent, "{}", s);
        }
    }
}
