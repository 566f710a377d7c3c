use semioval_core::hermitian::{arc_decomposition, Frame, HermitianModel};
use semioval_core::PointSet;

#[test]
fn decomposition_for_small_q() {
    for q in [2u32, 3, 4, 5, 7] {
        for frame in [Frame::Standard, Frame::Affine] {
            let model = HermitianModel::for_q(q, frame).unwrap();
            let d = arc_decomposition(&model).unwrap();
            assert_eq!(d.len(), q as usize + 1);
            let mut union = PointSet::curve(q);
            for a in d.arcs() {
                assert_eq!(a.len() as u32, q * q - q + 1);
                assert!(union.is_disjoint(a).unwrap());
                union = union.union(a).unwrap();
            }
            assert_eq!(union, PointSet::full_curve(q));
            let p = d.profile();
            if q % 2 == 1 {
                let lo = (q - 1) / 2;
                assert!(p.degree_hist.keys().all(|&k| k == lo || k == lo + 1));
                assert!(p.tangent_to_exactly_one_other());
            }
            for k in 0..model.num_points() {
                assert_eq!(d.arc_of(d.sigma(k)), d.arc_of(k));
            }
        }
    }
}
