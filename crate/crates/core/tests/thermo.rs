use proptest::prelude::*;
use thermoshift::thermo::{partition_sum, phi_word, pressure_bracket, Potential};
use thermoshift::words::{hamming, Alphabet};
use thermoshift::{ClassSelector, IntSeq, ShiftModel, Word};

const CAP: usize = 1 << 20;

fn word_strategy(n: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, n).prop_map(Word::new)
}

fn models() -> Vec<ShiftModel> {
    vec![
        ShiftModel::full(2).unwrap(),
        ShiftModel::golden_mean(),
        ShiftModel::staircase(IntSeq::Const(1), Some(2)).unwrap(),
        ShiftModel::staircase(IntSeq::CeilNOver(4), None).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn range1_sums_are_additive(a in -3.0f64..3.0, b in -3.0f64..3.0, u in word_strategy(1..10), v in word_strategy(1..10)) {
        let pot = Potential::range1(vec![a, b]).unwrap();
        for model in models() {
            let uv = u.concat(&v);
            if !model.membership(&uv).unwrap() {
                continue;
            }
            let lhs = phi_word(&pot, &model, &uv).unwrap();
            let rhs = phi_word(&pot, &model, &u).unwrap() + phi_word(&pot, &model, &v).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn hamming_sum_bound(a in -3.0f64..3.0, b in -3.0f64..3.0, pair in (1usize..24).prop_flat_map(|n| (word_strategy(n..n + 1), word_strategy(n..n + 1)))) {
        let (v, w) = pair;
        let pot = Potential::range1(vec![a, b]).unwrap();
        let full = ShiftModel::full(2).unwrap();
        let d = hamming(&v, &w).unwrap() as f64;
        let diff = phi_word(&pot, &full, &v).unwrap() - phi_word(&pot, &full, &w).unwrap();
        prop_assert!(diff.abs() <= pot.spread() * d + 1e-12);
    }

    // Range-2 table with its exact Hölder constant for d(x, y) = 2^{-common prefix}.
    #[test]
    fn bowen_bound_for_locally_constant(table in prop::collection::vec(-2.0f64..2.0, 4), alpha in 0.2f64..2.0, x in word_strategy(12..13), y_tail in word_strategy(1..2)) {
        let same_first = (table[0] - table[1]).abs().max((table[2] - table[3]).abs());
        let spread = table.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - table.iter().cloned().fold(f64::INFINITY, f64::min);
        let c = spread.max(same_first * alpha.exp2());
        let pot = Potential::new(Alphabet::BINARY, 2, table).unwrap().with_holder(alpha, c).unwrap();
        let v = pot.holder().unwrap().bowen_constant();
        let n = 11;
        let mut y = x.slice(0, n);
        y.extend_from(&y_tail);
        let birkhoff = |z: &Word| (0..n).map(|i| pot.value(&z.symbols()[i..i + 2])).sum::<f64>();
        prop_assert!((birkhoff(&x) - birkhoff(&y)).abs() <= v + 1e-12);
    }
}

#[test]
fn language_sums_are_submultiplicative_and_gstar_supermultiplicative() {
    let pot = Potential::range1(vec![0.3, -0.7]).unwrap();
    for model in models() {
        let lam = |class, n| partition_sum(&model, &pot, class, n, CAP).unwrap().log_value;
        for m in 1..10 {
            for n in 1..10 {
                assert!(lam(ClassSelector::Language, m + n) <= lam(ClassSelector::Language, m) + lam(ClassSelector::Language, n) + 1e-9);
                if model.as_staircase().is_some() {
                    let gs = |k| lam(ClassSelector::GStar, k);
                    assert!(gs(m + n) >= gs(m) + gs(n) - 1e-9, "{} m={m} n={n}", model.describe());
                }
            }
        }
    }
}

#[test]
fn pressure_nonincreasing_in_t_and_nonnegative_on_staircases() {
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
    for model in models() {
        let mut prev = f64::INFINITY;
        for &t in &grid {
            let b = pressure_bracket(&model, &Potential::minus_t_indicator(t), 16).unwrap();
            assert!(b.upper <= prev + 1e-12, "{} t={t}", model.describe());
            prev = b.upper;
            if model.as_staircase().is_some() {
                assert!(b.lower >= 0.0 && b.upper >= 0.0, "{} t={t}: {b:?}", model.describe());
            }
        }
    }
}
