use semioval_core::hermitian::{Frame, HermitianModel};
use semioval_core::semioval::{exhaustive_search, verify_semioval, SearchOptions};
use semioval_core::pointset::{Domain, PointSet};

#[test]
fn q3_spectrum_matches_the_published_sizes() {
    let m = HermitianModel::for_q(3, Frame::Standard).unwrap();
    let r = exhaustive_search(&m, SearchOptions::for_q(3)).unwrap();
    eprintln!("q=3 search: {} nodes, {:.0} ms", r.nodes, r.wall_time_ms);
    assert_eq!(r.sizes, vec![12, 15, 16, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28]);
    for (k, w) in &r.witnesses {
        let s = PointSet::from_indices(Domain::Curve, 3, 28, w.iter().map(|&x| x as u64)).unwrap();
        assert_eq!(s.len(), *k);
        assert!(verify_semioval(&s, &m).unwrap().is_semioval);
    }
    assert_eq!(r.witnesses[&28].len(), 28);
}
