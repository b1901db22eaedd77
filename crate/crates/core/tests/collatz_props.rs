//! Trajectory-level properties: conjugation equivariance, stationarity,
//! degree links, and the printed sequences the trace must reproduce.

mod common;

use common::{random_poly_up_to, rng};
use gf2collatz::collatz::{self, TraceOptions};
use gf2collatz::gf2poly::Poly;

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

#[test]
fn bar_equivariance_on_10k_random_seeds() {
    let mut rng = rng(0xbadc0de);
    for _ in 0..10_000 {
        let seed = random_poly_up_to(&mut rng, 32);
        if seed.is_zero() {
            continue;
        }
        let plain = collatz::trace(&seed).unwrap();
        let conj = collatz::trace(&seed.bar()).unwrap();
        assert_eq!(conj.m, plain.m);
        for k in 0..plain.m {
            assert_eq!(conj.odd_terms[k], plain.odd_terms[k].bar(), "odd k={k}");
            assert_eq!(conj.even_terms[k], plain.even_terms[k].bar(), "even k={k}");
            let (a, b) = plain.valuations[k];
            assert_eq!(conj.valuations[k], (b, a), "valuations k={k}");
        }
        assert_eq!(conj.odd_degrees, plain.odd_degrees);
    }
}

#[test]
fn exhaustive_traces_up_to_degree_10_satisfy_all_invariants() {
    for mask in 1u64..1 << 11 {
        let seed = Poly::from_word(mask);
        let trace = collatz::trace(&seed).unwrap();
        trace.check_invariants().unwrap_or_else(|e| panic!("seed {mask:#x}: {e}"));
        assert!(trace.odd_terms.last().unwrap().is_one());
        assert_eq!(trace.even_terms.last().unwrap(), &p("x^2+x"));
    }
}

#[test]
fn stationarity_beyond_termination() {
    // Two extra steps past the terminal odd term stay at (x^2+x, 1, 1, 1).
    for mask in [0x7u64, 0xb, 0x109, 0x2b2831] {
        let trace = collatz::trace(&Poly::from_word(mask)).unwrap();
        let mut cur = trace.odd_terms.last().unwrap().clone();
        for _ in 0..2 {
            let step = collatz::step(&cur).unwrap();
            assert_eq!(step.even, p("x^2+x"));
            assert_eq!((step.val_x, step.val_x1), (1, 1));
            assert!(step.next_odd.is_one());
            cur = step.next_odd;
        }
    }
}

#[test]
fn printed_sequences_reproduce() {
    // x^n + x + 1 for n = 31, and the shared 17-entry shape at 32.
    assert_eq!(
        collatz::odd_degree_sequence(&p("x^31+x+1")).unwrap(),
        vec![31, 29, 24, 24, 16, 16, 16, 16, 0]
    );
    assert_eq!(
        collatz::odd_degree_sequence(&p("x^32+x^31+1")).unwrap(),
        vec![32, 31, 30, 30, 28, 28, 28, 28, 24, 24, 24, 24, 24, 24, 24, 24, 0]
    );
    assert_eq!(
        collatz::odd_degree_sequence(&p("x^14+x^10+x^9+x^8+x^3+x^2+1")).unwrap(),
        vec![14, 14, 13, 13, 12, 12, 10, 10, 9, 8, 7, 5, 4, 3, 0]
    );
}

#[test]
fn reciprocal_is_not_equivariant() {
    let seed = p("x^8+x^3+1");
    assert_eq!(
        collatz::odd_degree_sequence(&seed).unwrap(),
        vec![8, 7, 5, 5, 4, 3, 0]
    );
    assert_eq!(
        collatz::odd_degree_sequence(&seed.reciprocal().unwrap()).unwrap(),
        vec![8, 6, 6, 0]
    );
}

#[test]
fn trace_json_has_expected_fields() {
    let trace = collatz::trace(&p("x^2+x+1")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&trace.to_json()).unwrap();
    assert_eq!(value["seed"], "0x7");
    assert_eq!(value["m"], 2);
    assert_eq!(value["r_a"], 3);
    assert_eq!(value["odd_terms"][1], "0x1");
    assert_eq!(value["even_terms"][0], "0x14");
    assert_eq!(value["valuations"][0][0], 2);
    assert_eq!(value["odd_degrees"][0], 2);
    assert_eq!(value["even_degrees"], serde_json::json!([4, 2]));
    assert_eq!(value["polys_complete"], true);
}

#[test]
fn poly_limit_is_respected_in_json() {
    let trace = collatz::trace_with(
        &p("x^8+x^3+1"),
        &TraceOptions {
            step_cap: None,
            poly_limit: Some(3),
        },
    )
    .unwrap();
    let value: serde_json::Value = serde_json::from_str(&trace.to_json()).unwrap();
    assert_eq!(value["polys_complete"], false);
    assert_eq!(value["odd_terms"].as_array().unwrap().len(), 3);
    assert_eq!(value["odd_degrees"].as_array().unwrap().len(), 7);
}

#[test]
fn theorem_bound_holds_exhaustively_to_degree_12() {
    for mask in 2u64..1 << 13 {
        let seed = Poly::from_word(mask);
        let deg = seed.degree().unwrap();
        let trace = collatz::trace(&seed).unwrap();
        assert!(trace.m as u128 <= 1u128 << (deg - 1), "seed {mask:#x}");
    }
}
