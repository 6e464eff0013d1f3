mod common;

use common::*;
use cubelab_core::distance::{dist_intersecting, dist_union_closed};
use cubelab_core::property::{is_intersecting, is_union_closed};
use cubelab_core::rng::rng_from_seed;
use cubelab_core::testers::{
    intersecting_tester, truncate, uc_tester, Band, TesterOptions, TruncStyle,
};
use cubelab_core::TruthTable;
use num_rational::Ratio;
use rand::Rng;

fn quiet() -> TesterOptions {
    TesterOptions { record_transcript: false, ..Default::default() }
}

#[test]
fn one_sided_on_every_property_table_at_three_coordinates() {
    let uc = class(3, |t| common::is_union_closed(3, t));
    let inter = class(3, |t| common::is_intersecting(3, t));
    for &t in &uc {
        let f = to_table(3, t);
        for seed in 0..5 {
            assert!(uc_tester(&f, 0.3, &mut rng_from_seed(seed), quiet()).unwrap().accepted());
        }
    }
    for &t in &inter {
        let f = to_table(3, t);
        for seed in 0..5 {
            assert!(intersecting_tester(&f, 0.3, &mut rng_from_seed(seed), quiet()).unwrap().accepted());
        }
    }
}

#[test]
fn far_random_tables_are_rejected() {
    let mut rng = rng_from_seed(8);
    for _ in 0..10 {
        let f = TruthTable::from_fn(8, |_| rng.gen_bool(0.5)).unwrap();
        let d = dist_union_closed(&f).unwrap();
        assert!(d.lower > Ratio::new(1, 10));
        let rejected = (0..20).filter(|&s| !uc_tester(&f, 0.1, &mut rng_from_seed(s), quiet()).unwrap().accepted());
        assert!(rejected.count() >= 18);
        let d = dist_intersecting(&f).unwrap();
        assert!(d.lower > Ratio::new(1, 10));
        for s in 0..20 {
            let v = intersecting_tester(&f, 0.1, &mut rng_from_seed(s), quiet()).unwrap();
            assert!(!v.accepted());
            v.verify(&f).unwrap();
        }
    }
}

#[test]
fn truncation_keeps_the_property_and_most_of_the_distance() {
    // At twelve coordinates and eps = 1 the band drops weights 0 and 12.
    let band = Band::new(12, 1.0).unwrap();
    assert_eq!(band.levels(), (1, 11));
    let mut rng = rng_from_seed(21);
    for _ in 0..10 {
        let f = TruthTable::from_fn(12, |_| rng.gen_bool(0.3)).unwrap();
        let tu = truncate(&f, 1.0, TruncStyle::Uc).unwrap();
        let ti = truncate(&f, 1.0, TruncStyle::Intersecting).unwrap();
        let du = dist_union_closed(&f).unwrap();
        let dtu = dist_union_closed(&tu).unwrap();
        // Two points changed at most, each worth 1/4096.
        let slack = Ratio::new(2, 4096);
        assert!(dtu.upper + slack >= du.lower / 2);
        let di = dist_intersecting(&f).unwrap();
        let dti = dist_intersecting(&ti).unwrap();
        assert!(dti.upper + slack >= di.lower / 2);
    }
    let up = TruthTable::from_fn(12, |x| x.count_ones() >= 5).unwrap();
    assert!(is_union_closed(&truncate(&up, 1.0, TruncStyle::Uc).unwrap()));
    let star = TruthTable::from_fn(12, |x| x & 4 != 0).unwrap();
    assert!(is_intersecting(&truncate(&star, 1.0, TruncStyle::Intersecting).unwrap()));
}
