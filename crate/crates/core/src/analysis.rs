//! Exact BFS eccentricities, diameter certificates and Moore-bound tables.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{iso_form, ProjPoint};
use crate::graphs::{Adjacency, GraphHandle};
use crate::group::{equivariance_check, EquivarianceMode, EquivarianceReport, GElem, OrbitClass};
use crate::polarity::PolarityCtx;

/// Frontiers at least this large are expanded in parallel.
const PAR_FRONTIER: usize = 1 << 14;
const PAR_CHUNK: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfsResult {
    pub source: u32,
    /// `None` when some vertex is unreachable.
    pub eccentricity: Option<u32>,
    /// `levels[k]` = number of vertices at distance `k`.
    pub levels: Vec<u64>,
    pub unreached: u64,
    /// Smallest-index vertex at maximum distance.
    pub farthest: u32,
}

struct Visited(Vec<AtomicU64>);

impl Visited {
    fn new(n: usize) -> Visited {
        Visited((0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect())
    }

    /// True if `v` was unclaimed and is now claimed by the caller.
    #[inline]
    fn claim(&self, v: u32) -> bool {
        let w = &self.0[(v >> 6) as usize];
        let bit = 1u64 << (v & 63);
        w.load(Ordering::Relaxed) & bit == 0 && w.fetch_or(bit, Ordering::Relaxed) & bit == 0
    }
}

fn expand<G: Adjacency>(g: &G, frontier: &[u32], seen: &Visited) -> Vec<u32> {
    let local = |chunk: &[u32]| {
        let mut out = Vec::new();
        for &v in chunk {
            g.for_each_neighbor(v, |w| {
                if seen.claim(w) {
                    out.push(w);
                }
            });
        }
        out
    };
    let mut next = if frontier.len() < PAR_FRONTIER {
        local(frontier)
    } else {
        frontier
            .par_chunks(PAR_CHUNK)
            .map(local)
            .collect::<Vec<_>>()
            .concat()
    };
    // level sets are deterministic; intra-level order is fixed here
    next.sort_unstable();
    next
}

/// Level-synchronous BFS from `source`.
pub fn bfs_ecc<G: Adjacency>(g: &G, source: u32) -> BfsResult {
    let n = g.order();
    let seen = Visited::new(n);
    seen.claim(source);
    let mut frontier = vec![source];
    let mut levels = vec![1u64];
    let mut farthest = source;
    loop {
        let next = expand(g, &frontier, &seen);
        if next.is_empty() {
            break;
        }
        levels.push(next.len() as u64);
        farthest = next[0];
        frontier = next;
    }
    let reached: u64 = levels.iter().sum();
    let unreached = n as u64 - reached;
    BfsResult {
        source,
        eccentricity: (unreached == 0).then(|| levels.len() as u32 - 1),
        levels,
        unreached,
        farthest,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiamMethod {
    FullBfs,
    OrbitRepresentativeBfs,
    IdentityBfs,
}

#[derive(Clone, Debug, Serialize)]
pub struct SourceEcc {
    pub vertex: u32,
    pub label: String,
    pub eccentricity: Option<u32>,
    pub levels: Vec<u64>,
    pub unreached: u64,
    pub farthest: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamCertificate {
    pub graph: String,
    pub q: u32,
    pub order: u64,
    pub method: DiamMethod,
    pub sources: Vec<SourceEcc>,
    /// `None` if disconnected.
    pub diameter: Option<u32>,
    pub witness: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivariance: Option<EquivarianceReport>,
}

impl DiamCertificate {
    /// Diameter exactly `d`, with the BFS reaching distance `d`.
    pub fn is_exactly(&self, d: u32) -> bool {
        self.diameter == Some(d)
    }
}

fn source_ecc(g: &GraphHandle, r: &BfsResult) -> SourceEcc {
    SourceEcc {
        vertex: r.source,
        label: g.codec.label(r.source),
        eccentricity: r.eccentricity,
        levels: r.levels.clone(),
        unreached: r.unreached,
        farthest: g.codec.label(r.farthest),
    }
}

fn certificate(g: &GraphHandle, method: DiamMethod, results: &[BfsResult]) -> DiamCertificate {
    let disconnected = results.iter().any(|r| r.eccentricity.is_none());
    let best = results.iter().max_by(|x, y| {
        x.eccentricity
            .cmp(&y.eccentricity)
            .then(y.source.cmp(&x.source))
    });
    DiamCertificate {
        graph: g.name.clone(),
        q: g.q,
        order: g.order as u64,
        method,
        sources: results.iter().map(|r| source_ecc(g, r)).collect(),
        diameter: if disconnected {
            None
        } else {
            best.and_then(|r| r.eccentricity)
        },
        witness: if disconnected {
            None
        } else {
            best.map(|r| (g.codec.label(r.source), g.codec.label(r.farthest)))
        },
        equivariance: None,
    }
}

/// BFS from every vertex.
pub fn diameter_full(g: &GraphHandle) -> DiamCertificate {
    let results: Vec<BfsResult> = (0..g.order as u32)
        .into_par_iter()
        .map(|v| bfs_ecc(g, v))
        .collect();
    certificate(g, DiamMethod::FullBfs, &results)
}

/// Identity BFS; valid because Cayley graphs are vertex-transitive.
pub fn diameter_cayley(g: &GraphHandle) -> DiamCertificate {
    let r = bfs_ecc(g, GElem::IDENTITY.index(g.q) as u32);
    certificate(g, DiamMethod::IdentityBfs, &[r])
}

/// Eccentricities from `k` seeded random vertices.
pub fn spot_check(g: &GraphHandle, k: usize, seed: u64) -> Vec<SourceEcc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sources: Vec<u32> = (0..k).map(|_| rng.gen_range(0..g.order as u32)).collect();
    sources
        .into_iter()
        .map(|v| source_ecc(g, &bfs_ecc(g, v)))
        .collect()
}

/// `A(q)` diameter from the five orbit representatives, once `pi` is
/// verified to commute with `G`. Falls back to full BFS otherwise.
pub fn diameter_aq(pol: &PolarityCtx, aq: &GraphHandle, mode: EquivarianceMode) -> Result<DiamCertificate> {
    let report = equivariance_check(pol, mode)?;
    let mut cert = if report.passed() {
        let results: Vec<BfsResult> = OrbitClass::ALL
            .iter()
            .map(|c| {
                let v = aq.codec.index_of_point(&c.representative(pol.field())).unwrap();
                bfs_ecc(aq, v)
            })
            .collect();
        certificate(aq, DiamMethod::OrbitRepresentativeBfs, &results)
    } else {
        diameter_full(aq)
    };
    cert.equivariance = Some(report);
    Ok(cert)
}

/// A 5-cycle `u, w, v, b, a` in `A(q)` with `u, v` collinear and
/// non-adjacent: the 2-path `u w v` and the 3-path `u a b v`.
pub fn five_cycle_witness(pol: &PolarityCtx, aq: &GraphHandle) -> Option<[ProjPoint; 5]> {
    let ctx = pol.field();
    let csr = aq.csr()?;
    let pt = |i: u32| aq.codec.point(i).unwrap();
    for u in 0..aq.order as u32 {
        for &w in csr.list(u) {
            for &v in csr.list(w) {
                if v == u || csr.has_edge(u, v) || !iso_form(ctx, &pt(u), &pt(v)).is_zero() {
                    continue;
                }
                for &a in csr.list(u) {
                    if a == w || a == v {
                        continue;
                    }
                    if let Some(&b) = csr
                        .list(a)
                        .iter()
                        .find(|&&b| b != u && b != w && b != v && csr.has_edge(b, v))
                    {
                        return Some([pt(u), pt(w), pt(v), pt(b), pt(a)]);
                    }
                }
            }
        }
    }
    None
}

/// `M(d, k) = 1 + d + d(d-1) + ... + d(d-1)^(k-1)`.
pub fn moore_bound(d: u64, k: u32) -> u128 {
    let d = d as u128;
    let mut total = 1u128;
    let mut term = d;
    for _ in 0..k {
        total += term;
        term *= d.saturating_sub(1);
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct MooreRow {
    pub q: u32,
    pub d: u64,
    pub n: u64,
    pub m3: u128,
    pub ratio: f64,
    /// `d^3 - N`
    pub gap: i128,
    /// `(d^3 - N) / d^2.5`
    pub normalized_gap: f64,
    /// Certified diameter, when a build was run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<u32>,
}

impl MooreRow {
    pub fn new(q: u32, d: u64, n: u64) -> MooreRow {
        let m3 = moore_bound(d, 3);
        let gap = (d as i128).pow(3) - n as i128;
        MooreRow {
            q,
            d,
            n,
            m3,
            ratio: n as f64 / m3 as f64,
            gap,
            normalized_gap: gap as f64 / (d as f64).powf(2.5),
            diameter: None,
        }
    }
}

/// Rows sorted by `q`.
pub fn moore_table(rows: impl IntoIterator<Item = MooreRow>) -> Vec<MooreRow> {
    let mut rows: Vec<MooreRow> = rows.into_iter().collect();
    rows.sort_by_key(|r| r.q);
    rows
}

pub fn ratio_strictly_increasing(rows: &[MooreRow]) -> bool {
    rows.windows(2).all(|w| w[0].ratio < w[1].ratio)
}

pub fn gaps_finite(rows: &[MooreRow]) -> bool {
    rows.iter().all(|r| r.normalized_gap.is_finite())
}

pub fn render_table(rows: &[MooreRow]) -> String {
    let header = ["q", "d", "N", "M(d,3)", "N/M", "d^3-N", "(d^3-N)/d^2.5", "diam"];
    let body: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.q.to_string(),
                r.d.to_string(),
                r.n.to_string(),
                r.m3.to_string(),
                format!("{:.6}", r.ratio),
                r.gap.to_string(),
                format!("{:.4}", r.normalized_gap),
                r.diameter.map_or("-".into(), |d| d.to_string()),
            ]
        })
        .collect();
    let width: Vec<usize> = (0..8)
        .map(|i| body.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap())
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    out.push_str(&"-".repeat(out.len() - 1));
    for r in &body {
        out.push('\n');
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out.push('\n');
    out
}
