use std::path::PathBuf;

use anyhow::bail;
use clap::Args;
use serde::Serialize;

use semioval_core::constructions::{construct, ConstructionId, RecipeParams};
use semioval_core::covering::{
    compare_bounds, dominating_cover, smallest_winner, two_blocking, ArcLineGraph, BoundReport, CoverMethod,
    CoverReport, TwoBlockingReport,
};
use semioval_core::hermitian::{arc_decomposition, LineCensus, TangencyProfile};
use semioval_core::oracle::{oracle_2blocking, oracle_semioval};
use semioval_core::semioval::{
    derive_constraints, exhaustive_search, spectrum_fill, verify_2blocking, verify_semioval, BlockingReport,
    SearchOptions, SemiovalReport, SpectrumResult,
};
use semioval_core::gf::FieldSummary;
use semioval_core::{Domain, Frame, HermitianModel, PointSet};

use crate::io::Run;

/// Whether every check of a command passed.
pub type Verdict = bool;

#[derive(Args)]
pub struct CurveArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value = "standard")]
    frame: Frame,
}

#[derive(Serialize)]
struct CurveReport {
    q: u32,
    frame: Frame,
    field: FieldSummary,
    num_points: u32,
    census: LineCensus,
    traceless: Vec<u32>,
}

pub fn curve(a: CurveArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let model = HermitianModel::for_q(a.q, a.frame)?;
    run.model(&model);
    let census = model.line_census()?;
    let q = a.q as u64;
    let ok = census.tangents == q * q * q + 1 && census.secants == q.pow(4) - q.pow(3) + q * q;
    let report = CurveReport {
        q: a.q,
        frame: a.frame,
        field: model.field().summary(),
        num_points: model.num_points(),
        census,
        traceless: model.traceless().iter().map(|e| e.code()).collect(),
    };
    run.report("curve", &report, None)?;
    run.set("curve_set", &model, &PointSet::full_curve(a.q))?;
    Ok(ok)
}

#[derive(Args)]
pub struct ConstructArgs {
    #[arg(long)]
    theorem: ConstructionId,
    #[arg(long)]
    q: u32,
    /// Exponent for the fibre constructions.
    #[arg(long)]
    r: Option<u32>,
    /// Run outside the stated hypotheses, recording warnings.
    #[arg(long)]
    force: bool,
}

#[derive(Serialize)]
struct ConstructReport {
    recipe_id: String,
    params: RecipeParams,
    size: usize,
    notes: Vec<String>,
    warnings: Vec<String>,
    report: SemiovalReport,
}

pub fn construct_cmd(a: ConstructArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let (model, rec) = construct(a.theorem, a.q, a.r, a.force)?;
    run.model(&model);
    eprintln!("{}: size {}, semioval: {}", rec.recipe_id(), rec.base.len(), rec.report.is_semioval);
    let ok = rec.report.is_semioval;
    let report = ConstructReport {
        recipe_id: rec.recipe_id(),
        size: rec.base.len(),
        params: rec.params,
        notes: rec.notes,
        warnings: rec.warnings,
        report: rec.report,
    };
    run.report("construct", &report, None)?;
    run.set("set", &model, &rec.base)?;
    Ok(ok)
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Point-set JSON file.
    #[arg(long)]
    set: PathBuf,
    /// Expected q; must match the file.
    #[arg(long)]
    q: Option<u32>,
    /// Test the 2-blocking property instead of the semioval property.
    #[arg(long)]
    blocking: bool,
    /// Re-run with the line-walking oracle and compare.
    #[arg(long)]
    oracle: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum AnyReport {
    Semioval(SemiovalReport),
    Blocking(BlockingReport),
}

#[derive(Serialize)]
struct VerifyReport {
    q: u32,
    domain: Domain,
    property: &'static str,
    passed: bool,
    report: AnyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<AnyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

pub fn verify(a: VerifyArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let (model, set) = read_set_checked(&a.set, a.q)?;
    run.model(&model);
    let (passed, report, oracle, agrees) = if a.blocking {
        let r = verify_2blocking(&set, &model)?;
        let o = a.oracle.then(|| oracle_2blocking(&set, &model)).transpose()?;
        let agrees = o.as_ref().map(|o| o.same_verdict(&r));
        (r.is_2blocking && r.contained_secants == 0, AnyReport::Blocking(r), o.map(AnyReport::Blocking), agrees)
    } else {
        let r = verify_semioval(&set, &model)?;
        let o = a.oracle.then(|| oracle_semioval(&set, &model)).transpose()?;
        let agrees = o.as_ref().map(|o| o.same_verdict(&r));
        (r.is_semioval, AnyReport::Semioval(r), o.map(AnyReport::Semioval), agrees)
    };
    let property = if a.blocking { "2-blocking" } else { "semioval" };
    eprintln!("{property}: {passed} (size {})", set.len());
    if agrees == Some(false) {
        eprintln!("oracle disagrees with the fast verifier");
    }
    let report = VerifyReport {
        q: model.q(),
        domain: set.domain(),
        property,
        passed,
        report,
        oracle,
        oracle_agrees: agrees,
    };
    run.report("verify", &report, None)?;
    Ok(passed && agrees != Some(false))
}

fn read_set_checked(path: &std::path::Path, q: Option<u32>) -> anyhow::Result<(HermitianModel, PointSet)> {
    let (model, set) = crate::io::read_set(path, q)?;
    if set.is_empty() {
        bail!("{} holds an empty set", path.display());
    }
    Ok((model, set))
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    theorem: ConstructionId,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    force: bool,
    /// Sizes to fill (comma separated); default: endpoints plus random interior sizes.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Fill every size of the interval.
    #[arg(long, conflicts_with = "k")]
    all: bool,
    /// Number of random interior sizes.
    #[arg(long, default_value_t = 5)]
    interior: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn spectrum(a: SpectrumArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let (model, rec) = construct(a.theorem, a.q, a.r, a.force)?;
    run.model(&model);
    let spec = &rec.params.expected;
    let ks = if a.all {
        spec.sizes()
    } else if !a.k.is_empty() {
        a.k.clone()
    } else {
        run.seeds.insert("interior_sizes".into(), a.seed);
        spec.sample(a.interior, a.seed)
    };
    let plan = derive_constraints(&model, &rec.base, &rec.pool)?;
    let res: SpectrumResult = spectrum_fill(&model, &plan, &rec.recipe_id(), &ks)?;
    let missed: Vec<usize> = res.entries.iter().filter(|e| !e.achieved && spec.contains(e.k)).map(|e| e.k).collect();
    eprintln!(
        "{}: {} of {} sizes achieved{}",
        rec.recipe_id(),
        res.achieved().len(),
        ks.len(),
        if missed.is_empty() { String::new() } else { format!("; missing {missed:?}") }
    );
    let csv = res.to_csv();
    run.report("spectrum", &res, Some(csv))?;
    Ok(missed.is_empty())
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value = "standard")]
    frame: Frame,
}

pub fn search(a: SearchArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let model = HermitianModel::for_q(a.q, a.frame)?;
    run.model(&model);
    let res = exhaustive_search(&model, SearchOptions::for_q(a.q))?;
    let sizes: Vec<String> = res.sizes.iter().map(|s| s.to_string()).collect();
    eprintln!("sizes: {} ({} nodes)", sizes.join(","), res.nodes);
    let csv = format!("size\n{}\n", sizes.join("\n"));
    run.report("search", &res, Some(csv))?;
    for (size, w) in &res.witnesses {
        let set = PointSet::from_indices(Domain::Curve, a.q, model.num_points() as u64, w.iter().map(|&k| k as u64))?;
        run.set(&format!("search_{size}"), &model, &set)?;
    }
    Ok(true)
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value = "standard")]
    frame: Frame,
}

#[derive(Serialize)]
struct DecomposeReport {
    q: u32,
    frame: Frame,
    arcs: Vec<Vec<u64>>,
    profile: TangencyProfile,
    /// Bisecant degrees in {(q−1)/2, (q+1)/2} and the one-other-arc property (q odd only).
    odd_q_properties: Option<bool>,
}

pub fn decompose(a: DecomposeArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let model = HermitianModel::for_q(a.q, a.frame)?;
    run.model(&model);
    let d = arc_decomposition(&model)?;
    let profile = d.profile().clone();
    let odd = (a.q % 2 == 1).then(|| {
        let lo = (a.q - 1) / 2;
        profile.degree_hist.keys().all(|&k| k == lo || k == lo + 1) && profile.tangent_to_exactly_one_other()
    });
    eprintln!("{} arcs of size {}", d.len(), a.q * a.q - a.q + 1);
    let report = DecomposeReport { q: a.q, frame: a.frame, arcs: d.to_lists(), profile, odd_q_properties: odd };
    run.report("decomposition", &report, None)?;
    run.set("curve_set", &model, &PointSet::full_curve(a.q))?;
    Ok(odd != Some(false))
}

#[derive(Args)]
pub struct CoverArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value = "greedy")]
    method: CoverMethod,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow q ≤ 27.
    #[arg(long)]
    force: bool,
}

#[derive(Serialize)]
struct CoverOutput {
    #[serde(flatten)]
    report: CoverReport,
    warnings: Vec<String>,
}

pub fn cover(a: CoverArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    if a.q % 2 == 0 {
        bail!("cover needs odd q");
    }
    let mut warnings = Vec::new();
    if a.q <= 27 {
        if !a.force {
            bail!("the size guarantee needs q > 27; pass --force to run anyway");
        }
        warnings.push(format!("q = {} is outside q > 27; the verdict is empirical", a.q));
    }
    let model = HermitianModel::for_q(a.q, Frame::Standard)?;
    run.model(&model);
    if a.method == CoverMethod::Random {
        run.seeds.insert("cover".into(), a.seed);
    }
    let d = arc_decomposition(&model)?;
    let g = ArcLineGraph::build(&model, &d)?;
    let (set, report) = dominating_cover(&model, &d, &g, a.method, a.seed)?;
    eprintln!(
        "{} arcs {:?}, size {}, Stein bound {}, semioval: {}",
        report.selected.len(),
        report.selected,
        report.size,
        report.stein_bound,
        report.semioval.is_semioval
    );
    let ok = report.semioval.is_semioval
        && report.uncovered == 0
        && (a.method == CoverMethod::Random || report.within_stein_bound);
    run.report("cover", &CoverOutput { report, warnings }, None)?;
    run.set("set", &model, &set)?;
    Ok(ok)
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 200)]
    qmax: u64,
}

#[derive(Serialize)]
struct BoundsOutput {
    qmax: u64,
    smallest_improvement: Option<u64>,
    reports: Vec<BoundReport>,
}

pub fn bounds(a: BoundsArgs, run: &mut Run) -> anyhow::Result<Verdict> {
    let reports = compare_bounds(a.qmax);
    let smallest = smallest_winner(&reports);
    eprintln!("smallest q with the smaller bound: {smallest:?}");
    let mut csv = String::from("q,stein,arc_multiplier,arc_bound,prior_multiplier,prior_bound,improves\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.q, r.stein, r.arc_multiplier, r.arc_bound, r.prior_multiplier, r.prior_bound, r.improves
        ));
    }
    run.report("bounds", &BoundsOutput { qmax: a.qmax, smallest_improvement: smallest, reports }, Some(csv))?;
    Ok(true)
}

#[derive(Args)]
pub struct Blocking2Args {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    r: u32,
    /// Run although the hypothesis on r fails.
    #[arg(long)]
    force: bool,
}

pub fn blocking2(a: Blocking2Args, run: &mut Run) -> anyhow::Result<Verdict> {
    let model = HermitianModel::for_q(a.q, Frame::Affine)?;
    run.model(&model);
    let d = arc_decomposition(&model)?;
    let tb = two_blocking(&model, &d, a.r, a.force)?;
    let r: &TwoBlockingReport = &tb.report;
    eprintln!(
        "size {} in [{}, {}]: {}; 2-blocking: {}; contained secants: {}",
        r.size, r.bracket.0, r.bracket.1, r.in_bracket, r.blocking.is_2blocking, r.blocking.contained_secants
    );
    let ok = r.blocking.is_2blocking && r.blocking.contained_secants == 0;
    run.report("blocking2", r, None)?;
    run.set("set", &model, &tb.set)?;
    Ok(ok)
}
