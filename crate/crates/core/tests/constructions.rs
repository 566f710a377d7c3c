use semioval_core::constructions::{
    construct, construct_terzo_with, expected_size, ConstructionId, ConstructionRecipe,
};
use semioval_core::hermitian::{Frame, HermitianModel};
use semioval_core::semioval::{deletable_check, derive_constraints, fill_size, regenerate, spectrum_fill};
use semioval_core::Error;

fn check_spectrum(model: &HermitianModel, rec: &ConstructionRecipe, seed: u64) {
    let plan = derive_constraints(model, &rec.base, &rec.pool).unwrap();
    assert_eq!(plan.constraint_lines, {
        let mut d = rec.declared_constraints.clone();
        d.sort_unstable();
        d
    }, "{}: derived constraint lines differ from the declared ones", rec.recipe_id());
    let spec = &rec.params.expected;
    let ks = spec.sample(5, seed);
    assert!(ks.contains(&spec.min) && ks.contains(&spec.max));
    let res = spectrum_fill(model, &plan, &rec.recipe_id(), &ks).unwrap();
    for e in &res.entries {
        assert!(e.achieved, "{}: size {} not achieved", rec.recipe_id(), e.k);
        let s = regenerate(model, &plan, &e.added).unwrap();
        assert_eq!(s.len(), e.k);
    }
    for &k in &spec.excluded {
        assert_eq!(fill_size(&plan, k), Err(Error::UnachievableSize(k)));
    }
}

#[test]
fn small_q_constructions_match_their_formulas() {
    for q in [3u32, 4, 5, 7, 8, 9] {
        for id in [ConstructionId::Primo, ConstructionId::Secondo, ConstructionId::Terzo] {
            let (model, rec) = construct(id, q, None, false).unwrap();
            let want = expected_size(id, q, None).unwrap();
            assert_eq!(rec.base.len(), want.min, "{id} q={q}");
            assert!(rec.report.is_semioval);
            check_spectrum(&model, &rec, q as u64 * 31 + id as u64);
        }
    }
}

#[test]
fn listed_sizes() {
    let sizes = |q| {
        [ConstructionId::Primo, ConstructionId::Secondo, ConstructionId::Terzo]
            .map(|id| construct(id, q, None, false).unwrap().1.base.len())
    };
    assert_eq!(sizes(3), [21, 22, 22]);
    assert_eq!(sizes(4), [52, 49, 53]);
    assert_eq!(sizes(5), [105, 98, 86]);
}

#[test]
fn primo_at_q2() {
    let (model, rec) = construct(ConstructionId::Primo, 2, None, false).unwrap();
    assert_eq!(rec.base.len(), 6);
    let plan = derive_constraints(&model, &rec.base, &rec.pool).unwrap();
    let got: Vec<usize> = (6..=9).filter(|&k| fill_size(&plan, k).is_ok()).collect();
    assert_eq!(got, vec![6, 8, 9]);
}

#[test]
fn secondo_takes_one_extra_point() {
    let (model, rec) = construct(ConstructionId::Secondo, 5, None, false).unwrap();
    let plan = derive_constraints(&model, &rec.base, &rec.pool).unwrap();
    let added = fill_size(&plan, 99).unwrap();
    assert_eq!(added.len(), 1);
    regenerate(&model, &plan, &added).unwrap();
}

#[test]
fn terzo_with_other_distinct_v_values() {
    for q in [3u32, 4, 5, 7] {
        let model = HermitianModel::for_q(q, Frame::Standard).unwrap();
        let n = ((q - 1) / 2) as usize;
        let all: Vec<u32> = (0..q).collect();
        for start in 0..q as usize {
            let vs: Vec<u32> = (0..n).map(|j| all[(start + 2 * j + 1) % q as usize]).collect();
            let mut uniq = vs.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() != n {
                continue;
            }
            let rec = construct_terzo_with(&model, &vs).unwrap();
            assert_eq!(rec.base.len(), expected_size(ConstructionId::Terzo, q, None).unwrap().min);
        }
    }
}

#[test]
fn terzo_pools_are_deletion_sets() {
    for q in [3u32, 4, 5, 7] {
        let (model, rec) = construct(ConstructionId::Terzo, q, None, false).unwrap();
        let full = semioval_core::PointSet::full_curve(q);
        assert!(deletable_check(&full, &rec.pool, &model).unwrap(), "q={q}");
    }
}
