//! Closed formulas and generating functions against exhaustive enumeration.

use num_bigint::BigUint;
use num_rational::BigRational;

use pseudoknot_core::diagram::{BruteForce, Diagram, StructureClass};
use pseudoknot_core::enumeration::{c_star, secondary_count, t_star, tk21, CountTable};
use pseudoknot_core::series::gf_k2sigma;
use pseudoknot_core::walks::all_partial_matchings;

fn class(k: usize, lambda: usize, sigma: usize) -> StructureClass {
    StructureClass::new(k, lambda, sigma).unwrap()
}

fn brute_total(n: usize, c: &StructureClass) -> BigUint {
    BruteForce::default()
        .class_counts_by_arcs(n, c)
        .unwrap()
        .iter()
        .sum()
}

#[test]
fn tstar_formula_matches_enumeration() {
    let oracle = BruteForce::default();
    for k in [3, 4] {
        for n in 0..=12 {
            for h in 0..=3 {
                let brute = oracle.count_tstar(n, h, k).unwrap();
                let formula = t_star(k, n as i64, h as i64);
                assert_eq!(brute, formula, "T*: k={k} n={n} h={h}");
            }
        }
    }
}

#[test]
fn cstar_formula_matches_enumeration() {
    let oracle = BruteForce::default();
    for n in 0..=12 {
        for h in 0..=n / 2 {
            let brute = oracle.count_cstar(n, h, 3).unwrap();
            assert_eq!(brute, c_star(3, n as i64, h as i64), "C*: n={n} h={h}");
        }
    }
    assert_eq!(oracle.count_cstar(10, 2, 3).unwrap(), c_star(3, 10, 2));
}

#[test]
fn secondary_structures_match_enumeration() {
    for lambda in 1..=4 {
        for n in 0..=12 {
            assert_eq!(
                brute_total(n, &class(2, lambda, 1)),
                secondary_count(lambda, n),
                "lambda={lambda} n={n}"
            );
        }
    }
}

#[test]
fn one_arc_free_structures_match_enumeration() {
    for k in [2, 3] {
        for n in 0..=12 {
            assert_eq!(brute_total(n, &class(k, 2, 1)), tk21(k, n), "k={k} n={n}");
        }
    }
}

#[test]
fn k2sigma_series_matches_enumeration() {
    let s = gf_k2sigma(3, 2, 12).unwrap();
    for n in 0..=12 {
        let brute = BigRational::from_integer(brute_total(n, &class(3, 2, 2)).into());
        assert_eq!(*s.coeff(n), brute, "<3,2,2> n={n}");
    }
}

#[test]
fn unrestricted_class_counts_all_matchings() {
    // arc length >= 1 and stacks >= 1 impose nothing
    for k in 2..=4 {
        for n in 0..=10 {
            assert_eq!(brute_total(n, &class(k, 1, 1)), all_partial_matchings(k, n));
        }
    }
}

#[test]
fn per_arc_table_sums_to_totals() {
    let split = CountTable::t4_sigma(3, 3, 20, true).unwrap();
    let totals = CountTable::t4_sigma(3, 3, 20, false).unwrap();
    assert_eq!(split.totals(), totals.totals());
}

fn members(n: usize, c: &StructureClass) -> Vec<Diagram> {
    BruteForce::default().enumerate_class(n, c).unwrap()
}

#[test]
fn cores_of_arc_length_four_structures() {
    for sigma in [3, 4] {
        let c = class(3, 4, sigma);
        for n in 0..=12 {
            for d in members(n, &c) {
                let core = d.core_map();
                assert!(core.is_core(), "{d}");
                assert!(
                    !core.has_one_arc() && !core.has_beta_arc(),
                    "core of {d} is {core}"
                );
                assert_eq!(core.max_crossing(), d.max_crossing());
                assert_eq!(core.core_map(), core);
                assert_eq!(core.arc_count(), d.stack_decompose().stacks.len());
            }
        }
    }
}

#[test]
fn brute_force_members_satisfy_class_bounds() {
    let c = class(3, 4, 3);
    for d in members(12, &c) {
        assert!(d.max_crossing() <= 2);
        assert!(d.min_arc_length().is_none_or(|l| l >= 4));
        assert!(d
            .stack_decompose()
            .min_stack_length()
            .is_none_or(|s| s >= 3));
    }
}

#[test]
fn oracle_refuses_large_inputs() {
    let small = BruteForce::new(6);
    assert!(small.class_counts_by_arcs(7, &class(3, 4, 3)).is_err());
    assert!(small.class_counts_by_arcs(6, &class(3, 4, 3)).is_ok());
}
