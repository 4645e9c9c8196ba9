use std::f64::consts::{E, PI};

use loggap::{generate_raw, generate_shifted, order_and_gaps, unfold, unfold_closed_form, LogBase, LogBase64, Provenance};

fn circular(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

#[test]
fn unfolded_shift_matches_the_closed_form() {
    let bases: [LogBase64; 4] = [
        LogBase::transcendental(E).unwrap(),
        LogBase::transcendental(PI).unwrap(),
        LogBase::integer(10).unwrap(),
        LogBase::integer_root(10, 2).unwrap(),
    ];
    for base in bases {
        let n = 5000;
        let etas = generate_shifted(&base, n).unwrap();
        let unfolded = unfold(&etas, &base).unwrap();
        for (i, &u) in unfolded.iter().enumerate() {
            let closed = unfold_closed_form(&base, i as u64 + 1, n as u64);
            assert!(circular(u, closed) <= 1e-10, "{base:?} n={}: {u} vs {closed}", i + 1);
        }
    }
}

#[test]
fn root_bases_collide_on_multiples_of_m() {
    for (m, r) in [(10u64, 2u32), (7, 3), (2, 5)] {
        let base: LogBase64 = LogBase::integer_root(m, r).unwrap();
        let n = 100_000;
        let (_, gaps) = order_and_gaps(generate_raw(&base, n).unwrap(), Provenance::Raw).unwrap();
        let fraction = gaps.zero_count() as f64 / n as f64;
        assert!((fraction - 1.0 / m as f64).abs() <= 1e-4, "m={m} r={r}: {fraction}");
    }
}

#[test]
fn transcendental_bases_have_no_zero_gaps() {
    let base = LogBase::transcendental(E).unwrap();
    let (_, gaps) = order_and_gaps(generate_raw(&base, 100_000).unwrap(), Provenance::Raw).unwrap();
    assert_eq!(gaps.zero_count(), 0);
}

#[test]
fn unfolded_gaps_sum_to_n() {
    let base = LogBase::transcendental(PI).unwrap();
    let n = 20_000;
    let values = unfold(&generate_shifted(&base, n).unwrap(), &base).unwrap();
    let (ordered, gaps) = order_and_gaps(values, Provenance::Unfolded).unwrap();
    assert_eq!(ordered.provenance, Provenance::Unfolded);
    let sum: f64 = gaps.scaled_gaps.iter().sum();
    assert!((sum - n as f64).abs() <= 1e-8 * n as f64);
}

#[test]
fn array_mode_handles_a_million_points() {
    let base = LogBase::transcendental(E).unwrap();
    let n = 1_000_000;
    let (ordered, gaps) = order_and_gaps(generate_raw(&base, n).unwrap(), Provenance::Raw).unwrap();
    assert_eq!(ordered.n_count(), n);
    assert_eq!(gaps.len(), n);
    let mean = gaps.scaled_gaps.iter().sum::<f64>() / n as f64;
    assert!((mean - 1.0).abs() <= 1e-9);
}
