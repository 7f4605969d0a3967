//! Exhaustive sweep over small CWS codes.
//!
//! Every `(graph, w)` pair is compiled, its attracting non-stabilizer fixed
//! points are located by iterating from a fixed set of starting states, and
//! each fixed point is analysed. Jobs are independent; results are merged in
//! enumeration order so a sweep is reproducible for a given seed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{self, AnalysisOptions, CodeReport, IterateOptions};
use crate::cws::{self, CwsCode, GraphMode};
use crate::distill::{BlochMap, BlochVector, CliffordRotation, DistillationMap};
use crate::error::{Error, Result};
use crate::registry::CodeSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub n_values: Vec<usize>,
    /// `None` sweeps all labelled graphs for `n ≤ 4` and isomorphism classes
    /// for `n ≥ 5`.
    pub graph_mode: Option<GraphMode>,
    pub seed: u64,
    pub enable_corrections: bool,
    /// Seeded random starting states added to the 26-point grid.
    pub random_starts: usize,
    pub iterate: IterateOptions,
    pub analysis: AnalysisOptions,
    /// Distance at which canonical fixed points are merged.
    pub dedupe_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_values: vec![2, 3, 4, 5],
            graph_mode: None,
            seed: 2015,
            enable_corrections: true,
            random_starts: 50,
            iterate: IterateOptions::default(),
            analysis: AnalysisOptions::default(),
            dedupe_tol: 1e-5,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Unsupported("empty qubit range".into()));
        }
        for &n in &self.n_values {
            if !(2..=cws::MAX_SEARCH_VERTICES).contains(&n) {
                return Err(Error::SizeOutOfRange(n, 2, cws::MAX_SEARCH_VERTICES));
            }
        }
        Ok(())
    }

    pub fn mode_for(&self, n: usize) -> GraphMode {
        self.graph_mode.unwrap_or(if n <= 4 { GraphMode::All } else { GraphMode::NonIsomorphic })
    }

    /// 26 grid states (octahedron vertices, edge midpoints, face centres)
    /// followed by the seeded random ones, all on the unit sphere.
    pub fn starting_points(&self) -> Vec<BlochVector<f64>> {
        let mut pts = Vec::with_capacity(26 + self.random_starts);
        for a in [-1.0, 0.0, 1.0] {
            for b in [-1.0, 0.0, 1.0] {
                for c in [-1.0, 0.0, 1.0] {
                    if (a, b, c) != (0.0, 0.0, 0.0) {
                        pts.push(BlochVector::new(a, b, c).normalized());
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        while pts.len() < 26 + self.random_starts {
            let v = BlochVector::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let norm = v.norm();
            if norm > 1e-3 && norm <= 1.0 {
                pts.push(v.normalized());
            }
        }
        pts
    }
}

/// Attracting fixed point together with the correction that makes it one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscoveredPoint {
    pub point: BlochVector<f64>,
    pub correction: Option<CliffordRotation>,
}

fn is_magic_surface_point(p: &BlochVector<f64>) -> bool {
    (p.norm() - 1.0).abs() < 1e-6 && p.l1() > 1.0 + 1e-6
}

/// Depolarizing strength of the probe used to confirm a fixed point attracts.
const ATTRACTION_PROBE: f64 = 1e-3;

/// Whether a slightly depolarized copy of `p` flows back to `p`. Rules out
/// neutral points that merely stay put.
fn attracts<M: BlochMap<f64>>(map: &M, p: &BlochVector<f64>, opts: &IterateOptions) -> bool {
    let probe = p.scale(1.0 - 2.0 * ATTRACTION_PROBE);
    let out = analysis::iterate(map, &probe, opts);
    out.fixed_point.is_some_and(|fp| fp.distance(p) < 1e-6)
}

/// Attracting non-stabilizer pure states the map converges to from the
/// configured starting states. A start that does not converge under the
/// map's own correction is retried with every other octahedral rotation when
/// corrections are enabled.
pub fn discover_fixed_points(map: &DistillationMap<f64>, config: &SearchConfig) -> Vec<DiscoveredPoint> {
    let rotations = CliffordRotation::all();
    let mut found: Vec<DiscoveredPoint> = Vec::new();
    let mut consider = |point: BlochVector<f64>, correction: Option<CliffordRotation>| {
        if !is_magic_surface_point(&point) {
            return;
        }
        let c = analysis::canonicalize_bloch(&point);
        if found.iter().any(|d| analysis::canonicalize_bloch(&d.point).max_abs_diff(&c) <= config.dedupe_tol) {
            return;
        }
        if attracts(&map.with_rotation(correction), &point, &config.iterate) {
            found.push(DiscoveredPoint { point, correction: correction.filter(|r| !r.is_identity()) });
        }
    };
    for start in config.starting_points() {
        let own = analysis::iterate(map, &start, &config.iterate);
        if let Some(fp) = own.fixed_point {
            consider(fp, map.correction());
            continue;
        }
        if !config.enable_corrections {
            continue;
        }
        for rot in rotations.iter().filter(|r| Some(**r) != map.correction() && !r.is_identity()) {
            let out = analysis::iterate(&map.with_rotation(Some(*rot)), &start, &config.iterate);
            if let Some(fp) = out.fixed_point {
                consider(fp, Some(*rot));
                break;
            }
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq)]
pub enum RecordStatus {
    Ok(CodeReport<f64>),
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchRecord {
    pub code: CwsCode,
    pub correction: Option<CliffordRotation>,
    pub status: RecordStatus,
}

impl SearchRecord {
    pub fn report(&self) -> Option<&CodeReport<f64>> {
        match &self.status {
            RecordStatus::Ok(r) => Some(r),
            RecordStatus::Failed(_) => None,
        }
    }

    /// `(n, canonical graph bits, codeword)`, the order used to pick group
    /// representatives.
    pub fn sort_key(&self) -> (usize, u32, u16) {
        (self.code.n(), cws::canonical_graph(self.code.graph()).upper_bits(), self.code.codeword())
    }
}

/// Discovers and analyses every attracting fixed point of one code.
pub fn search_code(code: &CwsCode, config: &SearchConfig) -> Vec<SearchRecord> {
    let map = match crate::distill::compile_map::<f64>(&CodeSpec::cws("search", *code)) {
        Ok(m) => m,
        Err(e) => {
            return vec![SearchRecord { code: *code, correction: None, status: RecordStatus::Failed(e.to_string()) }]
        }
    };
    discover_fixed_points(&map, config)
        .into_iter()
        .map(|d| {
            let corrected = map.with_rotation(d.correction);
            let status = match analysis::analyze(&corrected, &d.point, d.correction, &config.analysis) {
                Ok(r) => RecordStatus::Ok(r),
                Err(e) => RecordStatus::Failed(e.to_string()),
            };
            SearchRecord { code: *code, correction: d.correction, status }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutput {
    pub codes_examined: usize,
    pub records: Vec<SearchRecord>,
}

/// All codes a configuration sweeps, in enumeration order.
pub fn candidate_codes(config: &SearchConfig) -> Result<Vec<CwsCode>> {
    config.validate()?;
    let mut codes = Vec::new();
    for &n in &config.n_values {
        for g in cws::enumerate_graphs(n, config.mode_for(n))? {
            for w in 1..1u16 << n {
                codes.push(CwsCode::new(g, w)?);
            }
        }
    }
    Ok(codes)
}

pub fn run_search(config: &SearchConfig) -> Result<SearchOutput> {
    let codes = candidate_codes(config)?;
    let records: Vec<SearchRecord> =
        codes.par_iter().map(|c| search_code(c, config)).collect::<Vec<_>>().into_iter().flatten().collect();
    Ok(SearchOutput { codes_examined: codes.len(), records })
}

/// Groups records by canonical fixed point (to `1e-4`) and threshold (to
/// `1e-3`). Within a group the smallest `(n, canonical graph, w)` comes
/// first; groups are ordered by their first member. Failed records form
/// singleton groups at the end.
pub fn dedupe(records: &[SearchRecord]) -> Vec<Vec<SearchRecord>> {
    let mut groups: BTreeMap<(i64, i64, i64, i64), Vec<SearchRecord>> = BTreeMap::new();
    let mut failed = Vec::new();
    for rec in records {
        match rec.report() {
            Some(r) => {
                let c = r.canonical_fixed_point;
                let key = (
                    (c[0] * 1e4).round() as i64,
                    (c[1] * 1e4).round() as i64,
                    (c[2] * 1e4).round() as i64,
                    (r.threshold * 1e3).round() as i64,
                );
                groups.entry(key).or_default().push(rec.clone());
            }
            None => failed.push(vec![rec.clone()]),
        }
    }
    let mut out: Vec<Vec<SearchRecord>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_by_key(|r| r.sort_key());
            g
        })
        .collect();
    out.sort_by_key(|g| g[0].sort_key());
    out.extend(failed);
    out
}

/// Map of a search record, with its correction applied.
pub fn record_map(record: &SearchRecord) -> Result<DistillationMap<f64>> {
    let spec = CodeSpec::cws("record", record.code).with_correction(record.correction);
    crate::distill::compile_map(&spec)
}
