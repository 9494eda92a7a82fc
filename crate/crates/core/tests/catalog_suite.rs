use modular_data::catalog::{get_entry, names};
use modular_data::data::ToleranceConfig;
use modular_data::fusion::{verify_balancing, verify_nondegeneracy, verify_s_properties, verify_verlinde};
use modular_data::suite::{run_checks, Check, Status, SuiteOptions};

#[test]
fn every_entry_passes_every_applicable_check() {
    for name in names() {
        let ds = get_entry(&name).unwrap();
        let report = run_checks(&ds, &name, &Check::ALL, &SuiteOptions::default());
        assert_eq!(report.exit_code(), 0, "{name}\n{report}");
        for o in &report.outcomes {
            let applicable = match o.check {
                Check::Chars => ds.chars.is_some(),
                Check::Pentagon | Check::Hexagon | Check::Rigidity | Check::Ms1 | Check::Ms2 | Check::SFromFr => {
                    ds.fr.is_some()
                }
                _ => true,
            };
            let want = if applicable { Status::Pass } else { Status::Skip };
            assert_eq!(o.status, want, "{name} {}", o.check);
        }
    }
}

#[test]
fn s_is_symmetric_with_large_unit_row() {
    let tol = ToleranceConfig::default();
    for name in names() {
        let ds = get_entry(&name).unwrap();
        let r = verify_s_properties(&ds.s, ds.data.unit(), &tol);
        assert!(r.get("symmetry").unwrap().residual < 1e-12, "{name}");
        let e = ds.data.unit();
        let min = ds.data.labels().map(|a| ds.s.get(e, a).norm()).fold(f64::INFINITY, f64::min);
        assert!(min > 0.1, "{name}: {min}");
    }
}

#[test]
fn verlinde_balancing_nondegeneracy() {
    let tol = ToleranceConfig::default();
    for name in names() {
        let ds = get_entry(&name).unwrap();
        assert!(verify_verlinde(&ds.data, &ds.s, &tol).get("matches-N").unwrap().residual < 1e-6, "{name}");
        assert!(verify_balancing(&ds.data, &ds.s, &tol).all_passed(), "{name}");
        let nd = verify_nondegeneracy(&ds.data, &ds.s, &tol);
        assert!(nd.all_passed(), "{name}: {nd}");
    }
}

#[test]
fn results_do_not_depend_on_order_of_request() {
    let ds = get_entry("ising").unwrap();
    let opts = SuiteOptions::default();
    let forward = run_checks(&ds, "ising", &Check::ALL, &opts);
    let mut rev = Check::ALL;
    rev.reverse();
    let backward = run_checks(&ds, "ising", &rev, &opts);
    for (a, b) in forward.outcomes.iter().zip(backward.outcomes.iter().rev()) {
        assert_eq!(a.check, b.check);
        assert_eq!(a.residual, b.residual);
    }
}
