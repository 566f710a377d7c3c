use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semioval_core::constructions::{construct, ConstructionId, ConstructionRecipe};
use semioval_core::covering::{stein_bound, HorizontalIncidence};
use semioval_core::hermitian::{arc_decomposition, Frame, HermitianModel};
use semioval_core::numtheory::ceil_log2_plus_one;
use semioval_core::oracle::{oracle_2blocking, oracle_semioval};
use semioval_core::semioval::{deletable_check, verify_2blocking, verify_semioval, verify_semioval_partial};
use semioval_core::{Domain, PointSet};

fn random_subset(rng: &mut ChaCha8Rng, domain: Domain, q: u32, universe: u64) -> PointSet {
    let density: f64 = rng.gen_range(0.05..0.95);
    let idx: Vec<u64> = (0..universe).filter(|_| rng.gen_bool(density)).collect();
    PointSet::from_indices(domain, q, universe, idx).unwrap()
}

/// Fast verifiers against the line-walking oracle on 10⁴ random subsets
/// per q: curve subsets for both verdicts, plane subsets for the semioval one.
#[test]
fn verifiers_agree_with_the_oracle() {
    for q in [2u32, 3] {
        let model = HermitianModel::for_q(q, Frame::Standard).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        let (curve_n, plane_n) = (model.num_points() as u64, model.plane().size());
        let mut semiovals = 0;
        let mut i = 0;
        while i < 10_000 {
            let s = if i % 4 == 3 {
                random_subset(&mut rng, Domain::Plane, q, plane_n)
            } else {
                random_subset(&mut rng, Domain::Curve, q, curve_n)
            };
            if s.is_empty() {
                continue;
            }
            i += 1;
            let fast = verify_semioval(&s, &model).unwrap();
            let slow = oracle_semioval(&s, &model).unwrap();
            assert!(fast.same_verdict(&slow), "q={q} set {:?}", s.to_vec());
            semiovals += fast.is_semioval as u32;
            if s.domain() == Domain::Curve {
                let fast = verify_2blocking(&s, &model).unwrap();
                let slow = oracle_2blocking(&s, &model).unwrap();
                assert!(fast.same_verdict(&slow), "q={q} set {:?}", s.to_vec());
            }
        }
        assert!(semiovals > 0);
    }
}

#[test]
fn verifiers_agree_with_the_oracle_on_constructions() {
    for q in [3u32, 4] {
        for id in [ConstructionId::Primo, ConstructionId::Secondo, ConstructionId::Terzo] {
            let (model, rec) = construct(id, q, None, false).unwrap();
            let slow = oracle_semioval(&rec.base, &model).unwrap();
            assert!(rec.report.same_verdict(&slow));
            let b = verify_2blocking(&rec.base, &model).unwrap();
            assert!(b.same_verdict(&oracle_2blocking(&rec.base, &model).unwrap()));
        }
    }
}

#[test]
fn partial_reports_merge_to_the_full_report() {
    let model = HermitianModel::for_q(3, Frame::Standard).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let s = random_subset(&mut rng, Domain::Plane, 3, model.plane().size());
        if s.len() < 3 {
            continue;
        }
        let full = verify_semioval(&s, &model).unwrap();
        let (a, b) = (rng.gen_range(0..s.len()), rng.gen_range(0..s.len()));
        let (a, b) = (a.min(b), a.max(b));
        let parts = [0..a, a..b, b..s.len()].map(|r| verify_semioval_partial(&s, &model, r).unwrap());
        let [x, y, z] = parts;
        let left = x.clone().merge(y.clone()).merge(z.clone());
        let right = z.merge(x.merge(y));
        assert!(left.same_verdict(&full) && right.same_verdict(&full));
    }
}

/// The first-step deletion set of a recipe: its pool minus the points on
/// the declared lines.
fn first_step(model: &HermitianModel, rec: &ConstructionRecipe) -> PointSet {
    let mut t = rec.pool.clone();
    for &l in &rec.declared_constraints {
        for k in model.curve_points_on_line(&model.plane().line_at(l).unwrap()) {
            t.remove(k as u64);
        }
    }
    t
}

#[test]
fn deletion_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (id, q) in [(ConstructionId::Secondo, 4u32), (ConstructionId::Secondo, 5), (ConstructionId::Terzo, 5), (ConstructionId::Terzo, 7)] {
        let (model, rec) = construct(id, q, None, false).unwrap();
        let full = PointSet::full_curve(q);
        let t = first_step(&model, &rec);
        assert!(deletable_check(&full, &t, &model).unwrap(), "{id} q={q}");
        let rest = full.difference(&t).unwrap();
        for _ in 0..20 {
            let mut s = rest.clone();
            for k in t.iter() {
                if rng.gen_bool(0.5) {
                    s.insert(k);
                }
            }
            assert!(verify_semioval(&s, &model).unwrap().is_semioval, "{id} q={q}");
        }
    }
}

/// Emptying whole secants is never a deletion set in this sense.
#[test]
fn emptied_lines_fail_the_deletion_test() {
    for q in [4u32, 5] {
        let (model, rec) = construct(ConstructionId::Secondo, q, None, false).unwrap();
        assert!(!deletable_check(&PointSet::full_curve(q), &rec.pool, &model).unwrap());
    }
}

/// Removing the q−1 secants through a point is not a deletion set: adding
/// back a single point creates a second tangent.
#[test]
fn primo_pool_is_not_deletable() {
    let (model, rec) = construct(ConstructionId::Primo, 4, None, false).unwrap();
    assert!(!deletable_check(&PointSet::full_curve(4), &rec.pool, &model).unwrap());
}

#[test]
fn single_point_deletions() {
    for q in [2u32, 3, 4] {
        let model = HermitianModel::for_q(q, Frame::Affine).unwrap();
        for k in 0..model.num_points() as u64 {
            let mut s = PointSet::full_curve(q);
            s.remove(k);
            assert!(verify_semioval(&s, &model).unwrap().is_semioval);
        }
    }
}

fn subsets(n: u32, max: usize, mut f: impl FnMut(&[u32])) {
    fn rec(start: u32, n: u32, max: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if !cur.is_empty() {
            f(cur);
        }
        if cur.len() == max {
            return;
        }
        for y in start..n {
            cur.push(y);
            rec(y + 1, n, max, cur, f);
            cur.pop();
        }
    }
    rec(0, n, max, &mut Vec::new(), &mut f);
}

/// Every family of at most q horizontal lines: some arc meets half of them,
/// and the greedy arc cover stays within ⌈log₂k+1⌉ arcs.
#[test]
fn halving_and_log_cover_exhaustive() {
    for q in [2u32, 3, 4, 5] {
        let model = HermitianModel::for_q(q, Frame::Affine).unwrap();
        let d = arc_decomposition(&model).unwrap();
        let inc = HorizontalIncidence::new(&model, &d).unwrap();
        let mut families = 0u64;
        subsets(q * q, q as usize, |ys| {
            families += 1;
            assert!(inc.halving_holds(ys), "q={q} lines {ys:?}");
            let cover = inc.greedy_cover(ys).unwrap();
            assert!(cover.len() as u64 <= ceil_log2_plus_one(ys.len() as u64), "q={q} lines {ys:?}");
        });
        assert!(families > 0);
    }
}

#[test]
fn arcs_meet_every_line_in_at_most_two_points() {
    for q in [2u32, 3, 4, 5] {
        let model = HermitianModel::for_q(q, Frame::Standard).unwrap();
        let d = arc_decomposition(&model).unwrap();
        let plane = model.plane();
        for l in plane.lines() {
            let mut per_arc = vec![0; d.len()];
            for k in model.curve_points_on_line(&l) {
                per_arc[d.arc_of(k)] += 1;
            }
            assert!(per_arc.iter().all(|&c| c <= 2));
        }
    }
}

proptest! {
    #[test]
    fn stein_bound_is_monotone(a in 2u64..1_000_000_000_000, da in 0u64..1_000_000, b in 1u64..10_000, d in 1u64..10_000, dd in 0u64..100) {
        let base = stein_bound(a, b, d).unwrap();
        prop_assert!(stein_bound(a, b, d + dd).unwrap() <= base);
        prop_assert!(stein_bound(a + da, b, d).unwrap() >= base);
    }
}
