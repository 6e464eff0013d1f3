mod common;

use cubelab_core::distance::{dist_junta, dist_monotone};
use cubelab_core::instances::{
    sample_intersect_instance, sample_junta_instance, sample_mono_instance, sample_uc_instance, AnyInstance,
    HardFunction, InstanceRecord, Kind,
};
use cubelab_core::property::{is_intersecting, is_monotone, is_union_closed};
use cubelab_core::rng::{rng_from_seed, sub_rng};

#[test]
fn yes_set_families_have_their_property() {
    for seed in 0..40 {
        for n in [6, 8, 10] {
            let uc = sample_uc_instance(n, 0.3, Kind::Yes, &mut sub_rng(seed, n as u64)).unwrap();
            assert!(is_union_closed(&uc.materialize(Kind::Yes).unwrap()), "uc seed {seed} n {n}");
            let inter = sample_intersect_instance(n, 1.0, &mut sub_rng(seed, 100 + n as u64)).unwrap();
            assert!(is_intersecting(&inter.materialize(Kind::Yes).unwrap()), "intersect seed {seed} n {n}");
        }
    }
}

#[test]
fn mono_yes_is_repaired_on_the_erased_region() {
    for seed in 0..25 {
        let inst = sample_mono_instance(12, 0.6, &mut rng_from_seed(seed)).unwrap();
        let f = inst.materialize(Kind::Yes).unwrap();
        // Filling the erased points with the hidden bit of their term gives a monotone function.
        let g = cubelab_core::TruthTable::from_fn(12, |x| match inst.active_term(x) {
            Some(l) if inst.is_erased(x) => inst.b[l],
            _ => f.get(x),
        })
        .unwrap();
        assert!(is_monotone(&g));
        let d = dist_monotone(&f).unwrap().exact.unwrap();
        assert!(d <= inst.erased_measure());
    }
}

#[test]
fn junta_yes_is_close_to_its_control_junta() {
    for seed in 0..25 {
        let inst = sample_junta_instance(8, &mut rng_from_seed(seed)).unwrap();
        let f = inst.materialize(Kind::Yes).unwrap();
        let d = dist_junta(&f, 4).unwrap().exact.unwrap();
        assert!(d <= inst.action_middle_measure());
        let g = inst.control_junta().unwrap();
        let off = (0..256u32).filter(|&x| f.get(x) != g.get(x)).count() as u64;
        assert!(num_rational::Ratio::new(off, 256) <= inst.action_middle_measure());
    }
}

#[test]
fn records_roundtrip_through_json() {
    let mut rng = rng_from_seed(3);
    let all = vec![
        AnyInstance::Mono(sample_mono_instance(12, 0.6, &mut rng).unwrap()),
        AnyInstance::Junta(sample_junta_instance(8, &mut rng).unwrap()),
        AnyInstance::Intersect(sample_intersect_instance(8, 1.0, &mut rng).unwrap()),
        AnyInstance::Uc(sample_uc_instance(8, 0.3, Kind::No, &mut rng).unwrap()),
    ];
    for inst in all {
        let rec = InstanceRecord::new(inst, Kind::No, 3);
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains(&format!("\"family\":\"{}\"", rec.instance.family())));
        let back: InstanceRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        let t1 = rec.instance.materialize(Kind::No).unwrap();
        let t2 = back.instance.materialize(Kind::No).unwrap();
        assert_eq!(t1, t2);
    }
}
