//! The graphs `A(q)`, `B(q)`, `C(G, S)` and `C(G, S*)`, and the generating
//! sets they are built from.
//!
//! Point graphs index vertices by point rank (or by position in the regular
//! orbit for `B(q)`). Cayley graphs index `G` by [`GElem::index`]; the
//! neighbours of `g` are `s g` for `s` in the generating set.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cover::{realize_in_fstar, CyclicCover};
use crate::error::{Error, Result};
use crate::geometry::{point_count, ProjPoint, Quad};
use crate::gf2m::{FieldCtx, Felt};
use crate::group::{self, classify, theta1, theta2, GElem, OrbitClass};
use crate::polarity::PolarityCtx;

/// Largest `q` for explicit adjacency structures.
pub const EXPLICIT_CAP: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMode {
    Explicit,
    Implicit,
}

impl GraphMode {
    /// Implicit from `q = 128` upward.
    pub fn default_for(q: u32) -> GraphMode {
        if q > EXPLICIT_CAP {
            GraphMode::Implicit
        } else {
            GraphMode::Explicit
        }
    }
}

/// Neighbour access for BFS.
pub trait Adjacency: Sync {
    fn order(&self) -> usize;
    fn for_each_neighbor<F: FnMut(u32)>(&self, v: u32, f: F);

    fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        self.for_each_neighbor(v, |w| out.push(w));
        out
    }
}

/// Compressed adjacency: `neighbors[offsets[v]..offsets[v+1]]`, each list
/// sorted.
#[derive(Clone, Debug)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    pub fn from_lists(lists: Vec<Vec<u32>>) -> Csr {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for mut l in lists {
            l.sort_unstable();
            targets.extend_from_slice(&l);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    pub fn list(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.list(u).binary_search(&v).is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.offsets.len() as u32 - 1).all(|u| self.list(u).iter().all(|&v| self.has_edge(v, u)))
    }

    pub fn is_loop_free(&self) -> bool {
        (0..self.offsets.len() as u32 - 1).all(|u| !self.has_edge(u, u))
    }
}

/// Neighbour generation for `C(G, gens)` straight from the group law, on
/// log tables with a sentinel for zero.
#[derive(Clone, Debug)]
pub struct ImplicitCayley {
    ctx: FieldCtx,
    gens: Vec<GElem>,
    kernel: Option<Kernel>,
}

#[derive(Clone, Debug)]
struct Kernel {
    m: u32,
    order: u32,
    omega: u32,
    log: Vec<u32>,
    exp: Vec<u32>,
    // (log r, log a, log b), log 0 = ZERO_LOG
    gens: Vec<(u32, u32, u32)>,
}

impl Kernel {
    fn new(ctx: &FieldCtx, gens: &[GElem]) -> Option<Kernel> {
        let (log, exp) = ctx.tables()?;
        let order = ctx.group_order() as u32;
        let zero_log = 2 * order;
        let mut log = log.to_vec();
        log[0] = zero_log;
        // exp over 0..=4*order: indices past 2*order - 1 hit a zero operand.
        let mut ext = exp.to_vec();
        ext.resize(4 * order as usize + 1, 0);
        let lg = |x: Felt| log[x.bits() as usize];
        let gens = gens.iter().map(|g| (lg(g.r), lg(g.a), lg(g.b))).collect();
        Some(Kernel {
            m: ctx.m(),
            order,
            omega: ctx.omega(),
            log,
            exp: ext,
            gens,
        })
    }

    #[inline]
    fn for_each<F: FnMut(u32)>(&self, v: u32, mut f: F) {
        let m = self.m;
        let mask = (1u32 << m) - 1;
        let s = (v >> (2 * m)) + 1;
        let c = (v >> m) & mask;
        let d = v & mask;
        let ls = self.log[s as usize];
        let lsw1 = ((self.omega as u64 + 1) * ls as u64 % self.order as u64) as u32;
        let lc = self.log[c as usize];
        // log(c^w s), or a zero sentinel
        let lcws = if c == 0 {
            2 * self.order
        } else {
            ((self.omega as u64 * lc as u64 + ls as u64) % self.order as u64) as u32
        };
        let exp = &self.exp;
        for &(lr, la, lb) in &self.gens {
            let r2 = exp[(lr + ls) as usize];
            let a2 = exp[(la + ls) as usize] ^ c;
            let b2 = exp[(lb + lsw1) as usize] ^ d ^ exp[(la + lcws) as usize];
            f(((r2 - 1) << (2 * m)) | (a2 << m) | b2);
        }
    }
}

impl ImplicitCayley {
    pub fn new(ctx: &FieldCtx, gens: Vec<GElem>) -> ImplicitCayley {
        let kernel = Kernel::new(ctx, &gens);
        ImplicitCayley {
            ctx: ctx.clone(),
            gens,
            kernel,
        }
    }

    pub fn generators(&self) -> &[GElem] {
        &self.gens
    }
}

impl Adjacency for ImplicitCayley {
    fn order(&self) -> usize {
        group::order(self.ctx.q())
    }

    #[inline]
    fn for_each_neighbor<F: FnMut(u32)>(&self, v: u32, mut f: F) {
        match &self.kernel {
            Some(k) => k.for_each(v, f),
            None => {
                let q = self.ctx.q();
                let g = GElem::from_index(q, v as usize);
                for &s in &self.gens {
                    f(group::mul(&self.ctx, s, g).index(q) as u32);
                }
            }
        }
    }
}

/// Bijection between dense indices and vertices.
#[derive(Clone, Debug)]
pub enum VertexCodec {
    /// Vertex `i` is the point of rank `i`.
    AllPoints { q: u32 },
    /// Vertex `i` is `points[i]`; `index_of_rank` inverts it.
    PointSubset {
        q: u32,
        points: Vec<ProjPoint>,
        index_of_rank: Vec<u32>,
    },
    /// Vertex `i` is `GElem::from_index(q, i)`.
    Group { q: u32 },
}

impl VertexCodec {
    pub fn point(&self, idx: u32) -> Option<ProjPoint> {
        match self {
            VertexCodec::AllPoints { q } => Some(ProjPoint::from_rank(*q, idx as u64)),
            VertexCodec::PointSubset { points, .. } => points.get(idx as usize).copied(),
            VertexCodec::Group { .. } => None,
        }
    }

    pub fn index_of_point(&self, p: &ProjPoint) -> Option<u32> {
        match self {
            VertexCodec::AllPoints { q } => Some(p.rank(*q) as u32),
            VertexCodec::PointSubset { q, index_of_rank, .. } => {
                let i = index_of_rank[p.rank(*q) as usize];
                (i != u32::MAX).then_some(i)
            }
            VertexCodec::Group { .. } => None,
        }
    }

    pub fn elem(&self, idx: u32) -> Option<GElem> {
        match self {
            VertexCodec::Group { q } => Some(GElem::from_index(*q, idx as usize)),
            _ => None,
        }
    }

    pub fn label(&self, idx: u32) -> String {
        match self {
            VertexCodec::Group { q } => GElem::from_index(*q, idx as usize).to_string(),
            _ => self.point(idx).map(|p| p.to_string()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum AdjacencyRepr {
    Explicit(Csr),
    Implicit(ImplicitCayley),
}

#[derive(Clone, Debug)]
pub struct GraphHandle {
    pub name: String,
    pub q: u32,
    pub order: usize,
    pub adjacency: AdjacencyRepr,
    pub codec: VertexCodec,
}

impl GraphHandle {
    pub fn mode(&self) -> GraphMode {
        match self.adjacency {
            AdjacencyRepr::Explicit(_) => GraphMode::Explicit,
            AdjacencyRepr::Implicit(_) => GraphMode::Implicit,
        }
    }

    pub fn csr(&self) -> Option<&Csr> {
        match &self.adjacency {
            AdjacencyRepr::Explicit(c) => Some(c),
            AdjacencyRepr::Implicit(_) => None,
        }
    }

    pub fn degree(&self, v: u32) -> usize {
        match &self.adjacency {
            AdjacencyRepr::Explicit(c) => c.degree(v),
            AdjacencyRepr::Implicit(i) => i.gens.len(),
        }
    }

    pub fn max_degree(&self) -> usize {
        match &self.adjacency {
            AdjacencyRepr::Explicit(c) => (0..self.order as u32).map(|v| c.degree(v)).max().unwrap_or(0),
            AdjacencyRepr::Implicit(i) => i.gens.len(),
        }
    }

    /// Multiset of degrees as `(degree, count)`, ascending.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for v in 0..self.order as u32 {
            *counts.entry(self.degree(v)).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

impl Adjacency for GraphHandle {
    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn for_each_neighbor<F: FnMut(u32)>(&self, v: u32, mut f: F) {
        match &self.adjacency {
            AdjacencyRepr::Explicit(c) => c.list(v).iter().for_each(|&w| f(w)),
            AdjacencyRepr::Implicit(i) => i.for_each_neighbor(v, f),
        }
    }
}

fn explicit_cap(what: &'static str, q: u32) -> Result<()> {
    if q > EXPLICIT_CAP {
        return Err(Error::CapExceeded {
            what,
            q,
            cap: EXPLICIT_CAP,
        });
    }
    Ok(())
}

/// `N(u)` in `A(q)`: the points of `pi(u)` other than `u`, by rank.
pub fn neighbourhood(pol: &PolarityCtx, u: &ProjPoint) -> Vec<ProjPoint> {
    let q = pol.q();
    pol.point_to_line(u).points(q).filter(|v| v != u).collect()
}

/// `A(q)`: all points, `u ~ v` iff `u != v` and `u` lies on `pi(v)`.
pub fn build_aq(pol: &PolarityCtx) -> Result<GraphHandle> {
    let q = pol.q();
    explicit_cap("explicit A(q)", q)?;
    let n = point_count(q);
    let lists: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            pol.point_to_line(&ProjPoint::from_rank(q, r))
                .key()
                .iter()
                .filter(|&&k| k != r)
                .map(|&k| k as u32)
                .collect()
        })
        .collect();
    Ok(GraphHandle {
        name: format!("A({q})"),
        q,
        order: n as usize,
        adjacency: AdjacencyRepr::Explicit(Csr::from_lists(lists)),
        codec: VertexCodec::AllPoints { q },
    })
}

/// `B(q)`: the subgraph of `A(q)` induced on the regular orbit `O5`.
pub fn build_bq(pol: &PolarityCtx) -> Result<GraphHandle> {
    let q = pol.q();
    explicit_cap("explicit B(q)", q)?;
    let ctx = pol.field();
    let n = point_count(q);
    let points: Vec<ProjPoint> = (0..n)
        .map(|r| ProjPoint::from_rank(q, r))
        .filter(|p| classify(ctx, p) == OrbitClass::O5)
        .collect();
    let mut index_of_rank = vec![u32::MAX; n as usize];
    for (i, p) in points.iter().enumerate() {
        index_of_rank[p.rank(q) as usize] = i as u32;
    }
    let lists: Vec<Vec<u32>> = points
        .iter()
        .map(|p| {
            let r = p.rank(q);
            pol.point_to_line(p)
                .key()
                .iter()
                .filter(|&&k| k != r && index_of_rank[k as usize] != u32::MAX)
                .map(|&k| index_of_rank[k as usize])
                .collect()
        })
        .collect();
    Ok(GraphHandle {
        name: format!("B({q})"),
        q,
        order: points.len(),
        adjacency: AdjacencyRepr::Explicit(Csr::from_lists(lists)),
        codec: VertexCodec::PointSubset {
            q,
            points,
            index_of_rank,
        },
    })
}

/// `a(r) = (1 + r^(w+2))^(1 - w/2)`, with `a(1) = 0`.
pub fn a_of_r(ctx: &FieldCtx, r: Felt) -> Felt {
    let base = Felt::ONE + ctx.pow_u(r, ctx.omega() as u64 + 2);
    if base.is_zero() {
        return Felt::ZERO;
    }
    ctx.pow(base, 1 - (ctx.omega() / 2) as i64).expect("non-zero base")
}

/// `S = {M(r; a(r), 1) : r in F*}`.
pub fn gen_s(ctx: &FieldCtx) -> Vec<GElem> {
    ctx.nonzero()
        .map(|r| GElem {
            r,
            a: a_of_r(ctx, r),
            b: Felt::ONE,
        })
        .collect()
}

/// The extended generating set and its parts.
#[derive(Clone, Debug)]
pub struct GenSetBundle {
    pub s: Vec<GElem>,
    pub s1: Vec<GElem>,
    pub s2: Vec<GElem>,
    pub s3: Vec<GElem>,
    /// Sorted, deduplicated, identity-free union.
    pub sstar: Vec<GElem>,
    pub cover: CyclicCover,
    /// The cover realised in `F*`.
    pub x: Vec<Felt>,
    /// Achieved `|X|`.
    pub c: usize,
}

impl GenSetBundle {
    pub fn degree(&self) -> usize {
        self.sstar.len()
    }

    /// The degree claimed for the construction, `q + 2c + 3`, evaluated at
    /// the achieved `c`.
    pub fn claimed_degree_bound(&self, q: u32) -> usize {
        q as usize + 2 * self.c + 3
    }
}

fn inverse_closure(ctx: &FieldCtx, xs: impl IntoIterator<Item = GElem>) -> Vec<GElem> {
    let set: BTreeSet<GElem> = xs
        .into_iter()
        .flat_map(|g| [g, group::inv(ctx, g)])
        .collect();
    set.into_iter().collect()
}

pub fn gen_bundle(ctx: &FieldCtx, cover: &CyclicCover) -> Result<GenSetBundle> {
    let x = realize_in_fstar(ctx, cover)?;
    let s = gen_s(ctx);
    let s1: Vec<GElem> = x.iter().map(|&r| theta1(ctx, r)).collect();
    let s2: Vec<GElem> = x.iter().map(|&r| theta2(ctx, r)).collect();
    let m1 = GElem {
        r: Felt::ONE,
        a: Felt::ONE,
        b: Felt::ONE,
    };
    let m2 = GElem {
        r: Felt::ONE,
        a: Felt::ONE,
        b: Felt::ZERO,
    };
    let s3 = inverse_closure(ctx, [m1, m2]);
    let sstar: Vec<GElem> = s
        .iter()
        .chain(&s1)
        .chain(&s2)
        .chain(&s3)
        .copied()
        .filter(|g| !g.is_identity())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(GenSetBundle {
        s,
        s1,
        s2,
        s3,
        sstar,
        cover: cover.clone(),
        c: x.len(),
        x,
    })
}

/// Rejects sets containing the identity, repeats, or a missing inverse.
pub fn validate_generators(ctx: &FieldCtx, gens: &[GElem]) -> Result<()> {
    let set: BTreeSet<GElem> = gens.iter().copied().collect();
    if set.len() != gens.len() {
        return Err(Error::InvalidGenerators("repeated generator".into()));
    }
    if set.contains(&GElem::IDENTITY) {
        return Err(Error::InvalidGenerators("contains the identity".into()));
    }
    if let Some(g) = gens.iter().find(|&&g| !set.contains(&group::inv(ctx, g))) {
        return Err(Error::InvalidGenerators(format!("inverse of {g} missing")));
    }
    Ok(())
}

/// `C(G, gens)`. Explicit mode tabulates `s g` by the group law; implicit
/// mode generates neighbours on demand.
pub fn build_cayley(ctx: &FieldCtx, gens: &[GElem], mode: GraphMode, name: &str) -> Result<GraphHandle> {
    validate_generators(ctx, gens)?;
    let q = ctx.q();
    let order = group::order(q);
    let adjacency = match mode {
        GraphMode::Explicit => {
            explicit_cap("explicit Cayley graph", q)?;
            let lists = group::elements(ctx)
                .map(|g| {
                    gens.iter()
                        .map(|&s| group::mul(ctx, s, g).index(q) as u32)
                        .collect()
                })
                .collect();
            AdjacencyRepr::Explicit(Csr::from_lists(lists))
        }
        GraphMode::Implicit => AdjacencyRepr::Implicit(ImplicitCayley::new(ctx, gens.to_vec())),
    };
    Ok(GraphHandle {
        name: name.to_string(),
        q,
        order,
        adjacency,
        codec: VertexCodec::Group { q },
    })
}

/// The four loss sets around `u = [1,1,0,0]`, computed from neighbourhoods
/// in `A(q)`.
#[derive(Clone, Debug)]
pub struct LossSets {
    /// `N(u1) \ {u, u'2}`
    pub l_u1: Vec<ProjPoint>,
    /// `N(u2) \ {u, u3, u'1}`
    pub l_u2: Vec<ProjPoint>,
    /// `N(u'1) \ {u2}`
    pub l_u1p: Vec<ProjPoint>,
    /// `N(u'2) \ {u1, u'3}`
    pub l_u2p: Vec<ProjPoint>,
}

pub fn loss_sets(pol: &PolarityCtx) -> LossSets {
    let ctx = pol.field();
    let p = |b| ProjPoint::from_bits(ctx, b).unwrap();
    let u = p([1, 1, 0, 0]);
    let u1 = p([1, 1, 1, 1]);
    let u2 = p([0, 1, 1, 0]);
    let u3 = p([0, 0, 0, 1]);
    let u1p = p([1, 1, 0, 1]);
    let u2p = p([0, 0, 1, 1]);
    let u3p = p([0, 1, 0, 1]);
    let without = |x: &ProjPoint, drop: &[ProjPoint]| -> Vec<ProjPoint> {
        neighbourhood(pol, x).into_iter().filter(|v| !drop.contains(v)).collect()
    };
    LossSets {
        l_u1: without(&u1, &[u, u2p]),
        l_u2: without(&u2, &[u, u3, u1p]),
        l_u1p: without(&u1p, &[u2]),
        l_u2p: without(&u2p, &[u1, u3p]),
    }
}

/// One row of the neighbourhood table: `N(u)` as a closed-form set.
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub u: ProjPoint,
    pub expected: BTreeSet<ProjPoint>,
}

/// The nine tabulated neighbourhoods, written out in closed form.
pub fn table1_rows(ctx: &FieldCtx) -> Vec<Table1Row> {
    let o = Felt::ZERO;
    let l = Felt::ONE;
    let p = |x: Quad| ProjPoint::canon(ctx, x).unwrap();
    let row = |u: Quad, single: Option<Quad>, family: &dyn Fn(Felt) -> Quad, nonzero: bool| {
        let mut expected: BTreeSet<ProjPoint> = ctx
            .elements()
            .filter(|z| !nonzero || !z.is_zero())
            .map(|z| p(family(z)))
            .collect();
        expected.extend(single.map(p));
        Table1Row { u: p(u), expected }
    };
    vec![
        row([l, o, o, o], Some([o, o, l, o]), &|z| [l, o, z, o], true),
        // u is absolute: N(u) is pi(u) minus u itself
        row([o, l, o, o], None, &|z| [o, z, o, l], false),
        row([o, o, l, o], Some([o, o, o, l]), &|z| [l, o, o, z], false),
        row([o, o, o, l], Some([o, l, o, o]), &|z| [o, z, l, o], false),
        row([l, l, o, o], Some([o, l, l, o]), &|z| [l, z, z, l], false),
        row([o, l, l, o], Some([o, o, o, l]), &|z| [l, l, o, z], false),
        row([o, o, l, l], Some([o, l, o, l]), &|z| [l, z, l, z], false),
        row([l, l, o, l], Some([o, l, l, o]), &|z| [l, l + z, z, l], true),
        row([l, l, l, l], Some([o, o, l, l]), &|z| [l, l, z + l, z + l], true),
    ]
}

/// Row-by-row comparison of [`table1_rows`] with `N(u)` from `pi`.
pub fn table1_check(pol: &PolarityCtx) -> Vec<(ProjPoint, bool)> {
    table1_rows(pol.field())
        .into_iter()
        .map(|row| {
            let got: BTreeSet<ProjPoint> = neighbourhood(pol, &row.u).into_iter().collect();
            (row.u, got == row.expected)
        })
        .collect()
}

/// Generating set and graph for the main construction at one field.
pub fn sstar_cayley(ctx: &FieldCtx, cover: &CyclicCover, mode: GraphMode) -> Result<(GenSetBundle, GraphHandle)> {
    let bundle = gen_bundle(ctx, cover)?;
    let g = build_cayley(ctx, &bundle.sstar, mode, &format!("C(G,S*) q={}", ctx.q()))?;
    Ok((bundle, g))
}
