//! How far the greedy disjoint-pair matching sits below the exact
//! intersecting distance. A maximal matching is always within a factor two
//! (its endpoints form a cover); the observed range is printed with
//! `--nocapture`.

use cubelab_core::distance::{dist_intersecting, dist_intersecting_with, IntersectingOptions};
use cubelab_core::rng::sub_rng;
use cubelab_core::TruthTable;
use num_rational::Ratio;
use rand::Rng;

#[test]
fn exact_distance_over_greedy_matching() {
    let bounds = IntersectingOptions { bounds_only: true, ..Default::default() };
    let mut lo = Ratio::from_integer(2u64);
    let mut hi = Ratio::from_integer(0u64);
    let mut samples = 0;
    for (i, n) in [5usize, 6, 7, 8].into_iter().cycle().take(200).enumerate() {
        let mut rng = sub_rng(17, i as u64);
        let density = rng.gen_range(0.05..0.6);
        let f = TruthTable::from_fn(n, |_| rng.gen_bool(density)).unwrap();
        let exact = dist_intersecting(&f).unwrap().exact.expect("small tables are solved exactly");
        let matching = dist_intersecting_with(&f, bounds).unwrap().lower;
        if matching == Ratio::from_integer(0) {
            assert_eq!(exact, Ratio::from_integer(0));
            continue;
        }
        let ratio = exact / matching;
        assert!(ratio >= Ratio::from_integer(1) && ratio <= Ratio::from_integer(2), "n {n}: ratio {ratio}");
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        samples += 1;
    }
    println!("exact / greedy matching over {samples} tables: min {lo}, max {hi}");
    assert!(samples > 100);
}
