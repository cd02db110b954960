use hybrid_core::couplings::{lambda_collective, lambda_direct, DirectCouplingParams};
use hybrid_core::gaussian::steady_state_covariance;
use hybrid_core::scenarios::{builtin, builtin_names, Platform};
use proptest::prelude::*;

#[test]
fn every_builtin_is_internally_consistent() {
    for name in builtin_names() {
        let s = builtin(name).unwrap();
        assert_eq!(s.name(), name);
        assert!(s.derived_drift().unwrap() <= 1e-12, "{name}");
        for q in s.params().iter().chain(s.derived()) {
            assert!(!q.note.is_empty(), "{name}.{} has no provenance", q.name);
            assert!(!q.unit.is_empty(), "{name}.{} has no unit", q.name);
        }
    }
}

#[test]
fn gaussian_scenarios_have_physical_steady_states() {
    for p in Platform::ALL.into_iter().filter(|p| !p.is_qubit()) {
        let s = builtin(p.name()).unwrap();
        let rep = steady_state_covariance(&s.gaussian_model().unwrap()).unwrap();
        assert!(rep.residual <= 1e-10, "{}: residual {:.3e}", p.name(), rep.residual);
        assert!(rep.physicality_margin >= -1e-8, "{}: margin {:.3e}", p.name(), rep.physicality_margin);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn overrides_keep_derived_values_fresh(scale in 0.5f64..2.0, pick in 0usize..9) {
        let name = Platform::ALL[pick].name();
        let mut s = builtin(name).unwrap();
        let m = s.param("m_eff").unwrap();
        s.set("m_eff", m * scale).unwrap();
        prop_assert!(s.derived_drift().unwrap() <= 1e-12);
        prop_assert_eq!(s.param("m_eff").unwrap(), m * scale);
    }

    #[test]
    fn ion_coupling_follows_the_calculators(epsilon in 0.0f64..2.0, n in 1u64..1000) {
        let s = builtin("ion_direct").unwrap()
            .with("epsilon", epsilon).unwrap()
            .with("n_atoms", n as f64).unwrap();
        let p = DirectCouplingParams {
            m_at: s.param("m_at").unwrap(),
            omega_at: s.param("omega_at").unwrap(),
            epsilon,
            n_atoms: n,
        };
        let mode = s.mode().unwrap();
        prop_assert_eq!(s.get("lambda_direct").unwrap(), lambda_direct(&p, &mode).unwrap());
        prop_assert_eq!(s.get("lambda_collective").unwrap(), lambda_collective(&p, &mode).unwrap());
    }
}
