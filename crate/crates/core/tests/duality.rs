use tridots_core::certificate::{build_certificate, certificate_objective, upper_bound, verify_feasible};
use tridots_core::closed_forms::{lpf, nf};
use tridots_core::construction::{build_placement, validate_placement};
use tridots_core::exact_solver::max_dots;
use tridots_core::lp_model::{build_dual, build_primal, cell_var_index};
use tridots_core::simplex::{lp_value, solve};
use tridots_core::{LpStatus, Rational, TriangleSize};

fn size(n: i64) -> TriangleSize {
    TriangleSize::new(n).unwrap()
}

#[test]
fn chain_of_bounds_for_small_boards() {
    // construction <= N(n) <= LP(n) <= certificate objective, all equal where known.
    for n in 1..=14 {
        let s = size(n);
        let (best, witness) = max_dots(s).unwrap();
        assert!(validate_placement(&witness).is_ok());
        let lp = lp_value(s).unwrap();
        let cert = build_certificate(s);
        assert!(build_placement(s).len() <= best);
        assert!(Rational::from(best as i64) <= lp, "n = {n}");
        assert!(lp <= certificate_objective(&cert), "n = {n}");
        assert_eq!(upper_bound(s).unwrap(), best as u64);
    }
}

#[test]
fn certificate_solves_the_dual_problem() {
    for n in 1..=20 {
        let s = size(n);
        let cert = build_certificate(s);
        let dual = build_dual(s);
        let point = cert.to_dual_point();
        assert!(dual.is_feasible(&point), "n = {n}: {:?}", dual.violations(&point));
        assert_eq!(dual.objective_value(&point), certificate_objective(&cert));

        let sol = solve(&dual).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, lpf(s), "n = {n}");
    }
}

#[test]
fn simplex_optimum_is_a_primal_point_meeting_the_certificate() {
    for n in [4, 6, 9, 11, 16] {
        let s = size(n);
        let primal = build_primal(s);
        let sol = solve(&primal).unwrap();
        assert!(primal.is_feasible(&sol.values));
        assert_eq!(primal.objective_value(&sol.values), certificate_objective(&build_certificate(s)));
    }
}

#[test]
fn placement_as_lp_point() {
    for n in 1..=60 {
        let s = size(n);
        let primal = build_primal(s);
        let mut point = vec![Rational::zero(); primal.num_vars()];
        for &cell in build_placement(s).dots() {
            point[cell_var_index(cell)] = Rational::one();
        }
        assert!(primal.is_feasible(&point));
        assert_eq!(primal.objective_value(&point), Rational::from(nf(s) as i64));
    }
}

#[test]
fn values_are_monotone_in_n() {
    let mut prev = (0, Rational::zero());
    for n in 1..=3000 {
        let s = size(n);
        let cur = (nf(s), lpf(s));
        assert!(cur.0 >= prev.0 && cur.0 <= prev.0 + 1, "n = {n}");
        assert!(cur.1 > prev.1, "n = {n}");
        assert!(Rational::from(cur.0 as i64) <= cur.1);
        prev = cur;
    }
}

#[test]
fn certificates_are_feasible_at_large_n() {
    for n in [4999, 5000, 5001, 7777] {
        let s = size(n);
        let cert = build_certificate(s);
        assert!(verify_feasible(&cert).is_ok(), "n = {n}");
        assert_eq!(certificate_objective(&cert), lpf(s));
    }
}
