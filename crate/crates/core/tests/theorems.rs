use eczcs::construct::{fixture, seed_catalog, theorem2_construct};
use eczcs::gbf::{lemma2_ccc, sample_partition, theorem3_construct, PartitionSpec};
use eczcs::sim::{analytic_mse, mse_floor};
use eczcs::training::{build_ls_model_matrix, build_training_matrix, check_design_criterion, GsmConfig};
use eczcs::verify::{
    check_ccc, check_eczcs, check_mocs, check_szccs, check_zccs, check_zcz_set, eczcs_bound, flatten_to_zcz,
    measure_zcz_width,
};
use eczcs::{accf, pccf, pccf_via_accf, Family, PhaseSequence};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seq(q: u32, max_len: usize) -> impl Strategy<Value = PhaseSequence> {
    prop::collection::vec(0..q, 1..=max_len).prop_map(move |p| PhaseSequence::new(q, p).unwrap())
}

fn pair(max_len: usize) -> impl Strategy<Value = (PhaseSequence, PhaseSequence)> {
    prop_oneof![Just(2u32), Just(4), Just(6), Just(8)].prop_flat_map(move |q| {
        (1..=max_len).prop_flat_map(move |l| {
            let s = prop::collection::vec(0..q, l).prop_map(move |p| PhaseSequence::new(q, p).unwrap());
            (s.clone(), s)
        })
    })
}

/// Sampled Boolean-construction spec: (partition, q, v, eta).
fn gbf_spec(max_m: usize) -> impl Strategy<Value = (PartitionSpec, u32, usize, Vec<u32>)> {
    (2..=max_m, any::<u64>(), prop_oneof![Just(2u32), Just(4)]).prop_flat_map(|(m, seed, q)| {
        (1..=m.min(3)).prop_flat_map(move |k| {
            (1..=k, prop::collection::vec(0..q, m + 1)).prop_map(move |(v, eta)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (sample_partition(m, k, v, &mut rng).unwrap(), q, v, eta)
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_is_sum_of_two_aperiodic_terms((a, b) in pair(24), u in -23isize..=23) {
        let u = u.rem_euclid(a.len() as isize) * u.signum();
        prop_assert!(pccf(&a, &b, u).unwrap().sub(&pccf_via_accf(&a, &b, u).unwrap()).is_zero());
    }

    #[test]
    fn aperiodic_correlation_is_conjugate_symmetric((a, b) in pair(24), u in 0isize..24) {
        let u = u % a.len() as isize;
        let lhs = accf(&a, &b, -u).unwrap();
        let rhs = accf(&b, &a, u).unwrap().conj();
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn exact_norm_matches_float_magnitude(a in seq(4, 32), u in 0isize..32) {
        let u = u % a.len() as isize;
        let c = accf(&a, &a, u).unwrap();
        if let Some(n) = c.norm_sq_exact() {
            prop_assert!((n as f64 - c.to_complex().norm_sqr()).abs() < 1e-6);
        }
    }

    #[test]
    fn text_form_parses_back(a in seq(2, 40)) {
        let text: String = a.phases().iter().map(|&p| if p == 0 { '+' } else { '-' }).collect();
        prop_assert_eq!(PhaseSequence::parse_binary(&text).unwrap(), a);
    }

    #[test]
    fn boolean_construction_meets_its_zone((p, q, v, eta) in gbf_spec(6)) {
        let fam = theorem3_construct(&p, q, v, &eta).unwrap();
        let z = 1usize << (p.first(1) - 1);
        prop_assert_eq!(fam.num_sets(), 1 << p.k());
        prop_assert_eq!(fam.set_size(), 1 << v);
        prop_assert_eq!(fam.seq_len(), 1 << p.m());
        let verdict = check_eczcs(&fam, z).unwrap();
        prop_assert!(verdict.passed, "{:?} v={} q={} {:?}", p.blocks(), v, q, verdict.violations.first());
        prop_assert!(z as i64 <= eczcs_bound(fam.num_sets(), fam.set_size(), fam.seq_len(), q));
        prop_assert!(check_zcz_set(&flatten_to_zcz(&fam), z).unwrap().passed);
        prop_assert!(check_szccs(&fam, z).unwrap().passed);
        prop_assert!(check_zccs(&fam, z).unwrap().passed);
        if 2 * z >= fam.seq_len() {
            prop_assert!(check_mocs(&fam).unwrap().passed);
        }
    }

    #[test]
    fn quadratic_paths_give_complete_complementary_codes(seed in any::<u64>(), m in 1usize..=5, q in prop_oneof![Just(2u32), Just(4)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed as usize % m.min(2));
        let p = sample_partition(m, k, k, &mut rng).unwrap();
        let eta = vec![(seed % q as u64) as u32; m + 1];
        let fam = lemma2_ccc(&p, q, &eta).unwrap();
        prop_assert_eq!(fam.num_sets(), 1 << k);
        prop_assert!(check_ccc(&fam).unwrap().passed);
    }
}

#[test]
fn measured_width_never_exceeds_the_bound() {
    for e in seed_catalog().unwrap() {
        let (_, _, _, z) = e.params();
        let out = theorem2_construct(&e.family, z, false).unwrap();
        assert!(out.verdict.passed, "{}", e.id);
        let f = &out.family;
        let w = measure_zcz_width(f).unwrap();
        assert!(w >= out.z, "{}: measured {w} < {}", e.id, out.z);
        assert!(w as i64 <= eczcs_bound(f.num_sets(), f.set_size(), f.seq_len(), f.q()), "{}", e.id);
    }
}

fn training_families() -> Vec<(String, Family)> {
    let mut out = vec![
        ("table4".to_string(), fixture("table4").unwrap()),
        ("table5".to_string(), fixture("table5").unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (m, k, v) in [(4, 2, 1), (5, 2, 1), (5, 3, 2), (4, 2, 2)] {
        let p = sample_partition(m, k, v, &mut rng).unwrap();
        out.push((format!("m{m}k{k}v{v}"), theorem3_construct(&p, 2, v, &vec![0; m + 1]).unwrap()));
    }
    out
}

#[test]
fn analytic_mse_hits_the_floor_exactly_when_the_criterion_holds() {
    let sigma2 = 0.1;
    for (id, fam) in training_families() {
        for (nt, na) in [(4, 2), (6, 2), (8, 3)] {
            if fam.num_sets() < na {
                continue;
            }
            let cfg = GsmConfig::new(nt, na).unwrap();
            let psi = build_training_matrix(&fam, &cfg, &id).unwrap();
            let floor = mse_floor(sigma2, psi.energy());
            for lambda in 0..=fam.seq_len() / 2 + 2 {
                let passed = check_design_criterion(&psi, lambda).passed;
                let x = build_ls_model_matrix(&psi, lambda).unwrap();
                let Ok(mse) = analytic_mse(&x, sigma2) else {
                    assert!(!passed, "{id} ({nt},{na}) lambda={lambda}: rank deficient but criterion passes");
                    continue;
                };
                let ratio = mse / floor;
                assert!(ratio >= 1.0 - 1e-9, "{id} ({nt},{na}) lambda={lambda}: ratio {ratio}");
                assert_eq!(passed, ratio < 1.0 + 1e-9, "{id} ({nt},{na}) lambda={lambda}: ratio {ratio}");
            }
        }
    }
}

#[test]
fn every_antenna_row_carries_the_full_energy() {
    for (id, fam) in training_families() {
        for (nt, na) in [(4, 2), (6, 2), (8, 3)] {
            if fam.num_sets() < na {
                continue;
            }
            let psi = build_training_matrix(&fam, &GsmConfig::new(nt, na).unwrap(), &id).unwrap();
            assert_eq!(psi.len(), fam.set_size() * nt.div_ceil(na) * fam.seq_len());
            for r in 0..nt {
                let active = psi.rows()[r].iter().filter(|e| !e.is_zero()).count();
                assert_eq!(active, psi.energy(), "{id} row {r}");
            }
        }
    }
}
