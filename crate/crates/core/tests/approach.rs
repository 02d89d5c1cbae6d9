use thermoshift::approach::{approachability_report, far_word, nearest_in_class, repair_in};
use thermoshift::shift::DEFAULT_CAP;
use thermoshift::{Alphabet, ClassSelector, IntSeq, ShiftModel};

#[test]
fn repair_lands_in_gstar_within_budget() {
    for f in ["const:1", "ceil_n_over:4", "ceil_log2"] {
        let f: IntSeq = f.parse().unwrap();
        let m = ShiftModel::staircase(f.clone(), None).unwrap();
        let st = m.as_staircase().unwrap();
        for n in (2 * st.n1() as usize).max(1)..=16 {
            for w in &m.enumerate_language(n, DEFAULT_CAP).unwrap().words {
                let r = repair_in(st, w).unwrap();
                assert!(st.in_gstar(&r.repaired), "{f} {w} -> {}", r.repaired);
                assert!(r.within_budget, "{f} {w}: {} > {}", r.distance, r.budget);
            }
        }
    }
}

#[test]
fn nearest_distance_zero_iff_member() {
    let m = ShiftModel::staircase("ceil_n_over:4".parse().unwrap(), None).unwrap();
    for n in 1..=10 {
        let g = m.enumerate_class(ClassSelector::GStar, n, DEFAULT_CAP).unwrap();
        if g.words.is_empty() {
            continue;
        }
        for w in &m.enumerate_language(n, DEFAULT_CAP).unwrap().words {
            let (_, d) = nearest_in_class(w, &g).unwrap();
            assert_eq!(d == 0, g.contains(w));
        }
    }
}

#[test]
fn staircase_reports() {
    let m = ShiftModel::staircase(IntSeq::Const(1), None).unwrap();
    let g = IntSeq::Const(2 * 2 + 2 * 2);
    let rows = approachability_report(&m, ClassSelector::GStar, &g, 4..=12, 4, DEFAULT_CAP).unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.pass));

    let full = ShiftModel::full(2).unwrap();
    let rows = approachability_report(&full, ClassSelector::Language, &IntSeq::Const(0), 1..=8, 1, DEFAULT_CAP).unwrap();
    assert!(rows.iter().all(|r| r.pass && r.worst_distance == Some(0)));

    let q = ShiftModel::staircase("ceil_n_over:4".parse().unwrap(), None).unwrap();
    let rows = approachability_report(&q, ClassSelector::GStar, &IntSeq::Const(1), 12..=12, 1, DEFAULT_CAP).unwrap();
    assert!(!rows[0].pass && rows[0].worst_distance.unwrap() > 1 && rows[0].witness.is_some());
}

#[test]
fn far_word_on_golden_mean() {
    let gm = ShiftModel::golden_mean();
    let l6 = gm.enumerate_language(6, DEFAULT_CAP).unwrap();
    let targets = [l6.words[3].clone(), l6.words[11].clone()];
    let r = far_word(&l6, &targets, 0.3, Alphabet::BINARY).unwrap();
    let v = r.word.unwrap();
    for t in &targets {
        assert!(thermoshift::words::hamming(&v, t).unwrap() >= 2);
    }
}
