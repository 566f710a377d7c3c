//! Point-set files, report output and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use semioval_core::gf::FieldSummary;
use semioval_core::pointset::PointSetRecord;
use semioval_core::{Domain, Elem, Frame, HermitianModel, PointSet};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// File form of a set: indices plus the coordinate triples as field codes.
pub fn set_record(model: &HermitianModel, set: &PointSet) -> anyhow::Result<PointSetRecord> {
    let plane = model.plane();
    let points = match set.domain() {
        Domain::Curve => set.iter().map(|k| model.point(k as u32).0.map(|e| e.code())).collect(),
        Domain::Plane => set
            .iter()
            .map(|k| plane.point_at(k).map(|p| p.0.map(|e| e.code())))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(PointSetRecord {
        domain: set.domain(),
        q: model.q(),
        frame: (set.domain() == Domain::Curve).then(|| model.frame()),
        indices: set.to_vec(),
        points: Some(points),
    })
}

/// Reads a set file. Coordinates win over indices; indices present next to
/// coordinates must describe the same set.
pub fn read_set(path: &Path, q_flag: Option<u32>) -> anyhow::Result<(HermitianModel, PointSet)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rec: PointSetRecord = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(q) = q_flag {
        if q != rec.q {
            bail!("--q {q} does not match the file's q = {}", rec.q);
        }
    }
    let model = HermitianModel::for_q(rec.q, rec.frame.unwrap_or(Frame::Standard))?;
    let universe = match rec.domain {
        Domain::Curve => model.num_points() as u64,
        Domain::Plane => model.plane().size(),
    };
    let set = match &rec.points {
        Some(points) => {
            let order = model.field().order();
            let mut idx = Vec::with_capacity(points.len());
            for t in points {
                if t.iter().any(|&c| c >= order) {
                    bail!("coordinate code out of range in {t:?}");
                }
                let p = model.plane().point(t.map(Elem))?;
                idx.push(match rec.domain {
                    Domain::Curve => model.local_index(&p).with_context(|| format!("{t:?} is not on the curve"))? as u64,
                    Domain::Plane => model.plane().point_index(&p),
                });
            }
            let set = PointSet::from_indices(rec.domain, rec.q, universe, idx)?;
            if !rec.indices.is_empty() {
                let cached = PointSet::from_indices(rec.domain, rec.q, universe, rec.indices.iter().copied())?;
                if cached != set {
                    bail!("indices in {} do not match its coordinates", path.display());
                }
            }
            set
        }
        None => PointSet::from_indices(rec.domain, rec.q, universe, rec.indices.iter().copied())?,
    };
    Ok((model, set))
}

/// Drops every `wall_time_ms` field so written files depend only on inputs.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a [String],
    version: &'static str,
    field: &'a Option<FieldSummary>,
    seeds: &'a BTreeMap<String, u64>,
    threads: usize,
    wall_time_ms: f64,
    /// file name → sha256 of its contents
    outputs: &'a BTreeMap<String, String>,
}

/// Collects outputs of one invocation.
pub struct Run {
    out: Option<PathBuf>,
    format: Format,
    outputs: BTreeMap<String, String>,
    pub seeds: BTreeMap<String, u64>,
    pub field: Option<FieldSummary>,
}

impl Run {
    pub fn new(out: Option<PathBuf>, format: Format) -> anyhow::Result<Run> {
        if let Some(dir) = &out {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(Run { out, format, outputs: BTreeMap::new(), seeds: BTreeMap::new(), field: None })
    }

    pub fn model(&mut self, model: &HermitianModel) {
        self.field = Some(model.field().summary());
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        if let Some(dir) = &self.out {
            let path = dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
            self.outputs.insert(name.to_string(), hex::encode(Sha256::digest(bytes)));
        }
        Ok(())
    }

    /// Prints a report on stdout (CSV when asked for and available) and
    /// writes it under `--out`.
    pub fn report<T: Serialize>(&mut self, name: &str, value: &T, csv: Option<String>) -> anyhow::Result<()> {
        let mut v = serde_json::to_value(value)?;
        strip_timing(&mut v);
        let json = serde_json::to_string_pretty(&v)? + "\n";
        match (self.format, csv) {
            (Format::Csv, Some(text)) => {
                print!("{text}");
                self.write(&format!("{name}.csv"), text.as_bytes())?;
            }
            _ => print!("{json}"),
        }
        self.write(&format!("{name}.json"), json.as_bytes())
    }

    /// Writes a point set file under `--out`.
    pub fn set(&mut self, name: &str, model: &HermitianModel, set: &PointSet) -> anyhow::Result<()> {
        if self.out.is_some() {
            let json = serde_json::to_string(&set_record(model, set)?)? + "\n";
            self.write(&format!("{name}.json"), json.as_bytes())?;
        }
        Ok(())
    }

    pub fn finish(self, argv: &[String], wall_time_ms: f64) -> anyhow::Result<()> {
        if let Some(dir) = &self.out {
            let m = Manifest {
                command: argv,
                version: env!("CARGO_PKG_VERSION"),
                field: &self.field,
                seeds: &self.seeds,
                threads: rayon::current_num_threads(),
                wall_time_ms,
                outputs: &self.outputs,
            };
            fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&m)? + "\n")?;
        }
        Ok(())
    }
}
