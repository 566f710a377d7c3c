use std::time::Instant;

use semioval_core::constructions::{construct, ConstructionId};
use semioval_core::covering::two_blocking;
use semioval_core::hermitian::arc_decomposition;

#[test]
fn best_at_25() {
    let (_, rec) = construct(ConstructionId::Best, 25, None, false).unwrap();
    assert_eq!(rec.base.len(), 8426);
    assert!(construct(ConstructionId::Best, 9, None, false).is_err());
}

#[test]
fn main_construction_at_17() {
    let (_, rec) = construct(ConstructionId::Main, 17, Some(2), false).unwrap();
    assert_eq!(rec.base.len(), 2738);
    assert!(rec.report.is_semioval);
}

#[test]
fn main_and_two_blocking_at_25() {
    let t = Instant::now();
    let (model, rec) = construct(ConstructionId::Main, 25, Some(2), false).unwrap();
    assert_eq!(rec.base.len(), 8426);
    assert!(rec.report.is_semioval);
    eprintln!("main construction at q=25 in {:?}", t.elapsed());
    let d = arc_decomposition(&model).unwrap();
    let tb = two_blocking(&model, &d, 2, true).unwrap();
    let r = &tb.report;
    assert!(r.in_bracket, "size {} outside {:?}", r.size, r.bracket);
    assert!(r.bar_blocks_non_horizontal);
    assert_eq!(r.s_direct, r.s_fibres);
    assert_ne!(r.s_direct, r.s_stated);
    assert!(r.k1 + r.k2 <= 25);
    assert!(r.blocking.is_2blocking && r.blocking.contained_secants == 0);
    assert_eq!(r.size, tb.set.len());
}
