use std::f64::consts::PI;

use modular_data::catalog::{get_entry, su2_fusion, su2k_smatrix, MAX_SU2_LEVEL};
use modular_data::data::{Label, ToleranceConfig};
use modular_data::fusion::{quantum_dimension, verlinde_fusion};

#[test]
fn verlinde_equals_truncated_clebsch_gordan() {
    let tol = ToleranceConfig::default();
    for k in 1..=MAX_SU2_LEVEL {
        let ds = get_entry(&format!("su2-{k}")).unwrap();
        let v = verlinde_fusion(&ds.s, ds.data.duals(), ds.data.unit(), &tol).unwrap();
        let n = v.rounded(1e-6).expect("integral");
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    let cg = u32::from(su2_fusion(k, a, b, c));
                    let (i, j, l) = (a as usize, b as usize, c as usize);
                    assert_eq!(n.get(i, j, l), cg, "k={k} ({a},{b},{c})");
                    assert_eq!(ds.data.n(Label::new(i), Label::new(j), Label::new(l)), cg);
                }
            }
        }
    }
}

#[test]
fn stored_s_matches_sine_formula() {
    for k in 1..=MAX_SU2_LEVEL {
        let stored = get_entry(&format!("su2-{k}")).unwrap().s;
        let direct = su2k_smatrix(k).unwrap();
        let gap = (stored.matrix() - direct.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(gap < 1e-13, "k={k}: {gap:e}");
    }
}

#[test]
fn quantum_dimensions_are_q_integers() {
    let tol = ToleranceConfig::default();
    for k in 1..=MAX_SU2_LEVEL {
        let ds = get_entry(&format!("su2-{k}")).unwrap();
        let n = f64::from(k + 2);
        for a in ds.data.labels() {
            let d = quantum_dimension(&ds.s, ds.data.unit(), a, &tol).unwrap();
            let want = (PI * (a.index() + 1) as f64 / n).sin() / (PI / n).sin();
            assert!((d - want).norm() < 1e-12, "k={k} a={}", a.index());
        }
    }
}

#[test]
fn self_dual_labels() {
    for k in 1..=MAX_SU2_LEVEL {
        let ds = get_entry(&format!("su2-{k}")).unwrap();
        assert!(ds.data.labels().all(|a| ds.data.dual(a) == a));
    }
}
