//! Points and totally isotropic lines of `PG(3, q)`: the generalised
//! quadrangle `W(q)`.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2m::{FieldCtx, Felt};

/// Largest `q` for which the full point set is materialised.
pub const POINT_ENUMERATION_CAP: u32 = 128;
/// Largest `q` for which all lines of `W(q)` are materialised.
pub const LINE_ENUMERATION_CAP: u32 = 32;
/// Largest `q` for the all-pairs quadrangle axiom check.
pub const AXIOM_EXHAUSTIVE_CAP: u32 = 32;

pub type Quad = [Felt; 4];

/// A point of `PG(3, q)` in canonical form: the first non-zero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Quad);

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[{a:x},{b:x},{c:x},{d:x}]")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Number of points of `PG(3, q)`, which is also the number of lines of `W(q)`.
pub fn point_count(q: u32) -> u64 {
    let q = q as u64;
    q * q * q + q * q + q + 1
}

impl ProjPoint {
    /// Scales `raw` so its first non-zero coordinate is 1.
    pub fn canon(ctx: &FieldCtx, raw: Quad) -> Result<ProjPoint> {
        let pivot = raw.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        if raw[pivot] == Felt::ONE {
            return Ok(ProjPoint(raw));
        }
        let inv = ctx.inv_nonzero(raw[pivot]);
        Ok(ProjPoint(raw.map(|c| ctx.mul(c, inv))))
    }

    /// Canonicalises a quadruple given as raw bit patterns.
    pub fn from_bits(ctx: &FieldCtx, bits: [u32; 4]) -> Result<ProjPoint> {
        let mut raw = [Felt::ZERO; 4];
        for (slot, b) in raw.iter_mut().zip(bits) {
            *slot = ctx.elem(b)?;
        }
        Self::canon(ctx, raw)
    }

    #[inline]
    pub fn coords(&self) -> Quad {
        self.0
    }

    /// Dense index in `0..point_count(q)`, ordered by pivot position and then
    /// lexicographically by the remaining coordinates.
    pub fn rank(&self, q: u32) -> u64 {
        let q = q as u64;
        let [x0, x1, x2, x3] = self.0.map(|c| c.bits() as u64);
        if x0 != 0 {
            (x1 * q + x2) * q + x3
        } else if x1 != 0 {
            q * q * q + x2 * q + x3
        } else if x2 != 0 {
            q * q * q + q * q + x3
        } else {
            q * q * q + q * q + q
        }
    }

    /// Inverse of [`ProjPoint::rank`].
    pub fn from_rank(q: u32, rank: u64) -> ProjPoint {
        let qq = q as u64;
        let f = |v: u64| Felt::from_bits(v as u32);
        let cube = qq * qq * qq;
        if rank < cube {
            ProjPoint([Felt::ONE, f(rank / (qq * qq)), f(rank / qq % qq), f(rank % qq)])
        } else if rank < cube + qq * qq {
            let r = rank - cube;
            ProjPoint([Felt::ZERO, Felt::ONE, f(r / qq), f(r % qq)])
        } else if rank < cube + qq * qq + qq {
            let r = rank - cube - qq * qq;
            ProjPoint([Felt::ZERO, Felt::ZERO, Felt::ONE, f(r)])
        } else {
            ProjPoint([Felt::ZERO, Felt::ZERO, Felt::ZERO, Felt::ONE])
        }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> ProjPoint {
        let rank = rng.gen_range(0..point_count(ctx.q()));
        ProjPoint::from_rank(ctx.q(), rank)
    }
}

/// The alternating form `x0 y1 + x1 y0 + x2 y3 + x3 y2` on raw vectors.
#[inline]
pub fn iso_form_raw(ctx: &FieldCtx, x: &Quad, y: &Quad) -> Felt {
    ctx.mul(x[0], y[1]) + ctx.mul(x[1], y[0]) + ctx.mul(x[2], y[3]) + ctx.mul(x[3], y[2])
}

pub fn iso_form(ctx: &FieldCtx, u: &ProjPoint, v: &ProjPoint) -> Felt {
    iso_form_raw(ctx, &u.0, &v.0)
}

fn axpy(ctx: &FieldCtx, t: Felt, x: &Quad, y: &Quad) -> Quad {
    [0, 1, 2, 3].map(|i| ctx.mul(t, x[i]) + y[i])
}

/// True when `x` and `y` are non-zero and not proportional.
pub(crate) fn independent(ctx: &FieldCtx, x: &Quad, y: &Quad) -> bool {
    let zero = |v: &Quad| v.iter().all(|c| c.is_zero());
    if zero(x) || zero(y) {
        return false;
    }
    (0..4).any(|i| (i + 1..4).any(|j| !(ctx.mul(x[i], y[j]) + ctx.mul(x[j], y[i])).is_zero()))
}

/// A totally isotropic line, identified by the sorted ranks of its `q + 1`
/// points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IsoLine {
    span: [Quad; 2],
    key: Vec<u64>,
}

impl fmt::Debug for IsoLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IsoLine")
            .field("span", &self.span)
            .field("points", &self.key.len())
            .finish()
    }
}

impl IsoLine {
    /// Line spanned by two raw vectors. The caller guarantees independence
    /// and isotropy.
    pub(crate) fn from_raw_span(ctx: &FieldCtx, x: Quad, y: Quad) -> IsoLine {
        let q = ctx.q();
        let mut key = Vec::with_capacity(q as usize + 1);
        key.push(ProjPoint::canon(ctx, x).expect("non-zero span vector").rank(q));
        for t in ctx.elements() {
            let p = ProjPoint::canon(ctx, axpy(ctx, t, &x, &y)).expect("independent span");
            key.push(p.rank(q));
        }
        key.sort_unstable();
        IsoLine { span: [x, y], key }
    }

    /// The spanning pair this line was built from.
    pub fn span(&self) -> &[Quad; 2] {
        &self.span
    }

    /// Sorted point ranks.
    pub fn key(&self) -> &[u64] {
        &self.key
    }

    pub fn len(&self) -> usize {
        self.key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.key.is_empty()
    }

    pub fn points(&self, q: u32) -> impl Iterator<Item = ProjPoint> + '_ {
        self.key.iter().map(move |&r| ProjPoint::from_rank(q, r))
    }

    pub fn contains(&self, q: u32, p: &ProjPoint) -> bool {
        self.key.binary_search(&p.rank(q)).is_ok()
    }

    /// Replaces the point set, keeping the span. Only for negative controls.
    #[doc(hidden)]
    pub fn corrupt_with_key(&mut self, key: Vec<u64>) {
        self.key = key;
    }
}

/// Line of `W(q)` through two distinct points with vanishing form.
pub fn line_from_span(ctx: &FieldCtx, p: &ProjPoint, r: &ProjPoint) -> Result<IsoLine> {
    if p == r {
        return Err(Error::NotALine(format!("{p} repeated")));
    }
    let form = iso_form(ctx, p, r);
    if !form.is_zero() {
        return Err(Error::NotALine(format!(
            "iso_form({p}, {r}) = {form:x} is non-zero"
        )));
    }
    Ok(IsoLine::from_raw_span(ctx, p.0, r.0))
}

/// All points in rank order.
pub fn enumerate_points(ctx: &FieldCtx) -> Result<Vec<ProjPoint>> {
    let q = ctx.q();
    if q > POINT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "point enumeration",
            q,
            cap: POINT_ENUMERATION_CAP,
        });
    }
    Ok((0..point_count(q)).map(|r| ProjPoint::from_rank(q, r)).collect())
}

/// Three vectors spanning `p^perp` with `p` first.
fn perp_basis(ctx: &FieldCtx, p: &ProjPoint) -> [Quad; 3] {
    let x = p.0;
    // p^perp is the kernel of y -> sum c_i y_i.
    let c = [x[1], x[0], x[3], x[2]];
    let j = c.iter().position(|v| !v.is_zero()).expect("non-zero point");
    let cj_inv = ctx.inv_nonzero(c[j]);
    let kernel = |i: usize| {
        let mut v = [Felt::ZERO; 4];
        v[i] = Felt::ONE;
        v[j] = ctx.mul(c[i], cj_inv);
        v
    };
    let others: Vec<usize> = (0..4).filter(|&i| i != j).collect();
    // In this basis p has coordinates x_i (i != j); swap p in for a kernel
    // vector with non-zero coefficient.
    let drop = *others.iter().find(|&&i| !x[i].is_zero()).expect("p lies in its own perp");
    let rest: Vec<Quad> = others.iter().filter(|&&i| i != drop).map(|&i| kernel(i)).collect();
    [x, rest[0], rest[1]]
}

/// The `q + 1` lines of `W(q)` through `p`.
pub fn lines_through(ctx: &FieldCtx, p: &ProjPoint) -> Vec<IsoLine> {
    let [x, b, c] = perp_basis(ctx, p);
    let mut out: Vec<IsoLine> = ctx
        .elements()
        .map(|t| IsoLine::from_raw_span(ctx, x, axpy(ctx, t, &c, &b)))
        .collect();
    out.push(IsoLine::from_raw_span(ctx, x, c));
    out
}

/// Points and lines of `W(q)`, with the incidence relation.
#[derive(Clone, Debug)]
pub struct WGeometry {
    pub q: u32,
    /// Indexed by rank.
    pub points: Vec<ProjPoint>,
    pub lines: Vec<IsoLine>,
    /// Line indices through each point.
    pub point_lines: Vec<Vec<u32>>,
}

pub fn wq_enumerate(ctx: &FieldCtx) -> Result<WGeometry> {
    let q = ctx.q();
    if q > LINE_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "line enumeration",
            q,
            cap: LINE_ENUMERATION_CAP,
        });
    }
    let points = enumerate_points(ctx)?;
    let mut lines = Vec::with_capacity(points.len());
    for p in &points {
        let rank = p.rank(q);
        // Each line is kept by its smallest point only.
        lines.extend(lines_through(ctx, p).into_iter().filter(|l| l.key[0] == rank));
    }
    let mut point_lines = vec![Vec::with_capacity(q as usize + 1); points.len()];
    for (i, l) in lines.iter().enumerate() {
        for &r in &l.key {
            point_lines[r as usize].push(i as u32);
        }
    }
    Ok(WGeometry {
        q,
        points,
        lines,
        point_lines,
    })
}

#[derive(Clone, Copy, Debug)]
pub enum CheckMode {
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomViolation {
    pub point: String,
    pub line: usize,
    pub collinear_points_on_line: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GqAxiomReport {
    pub q: u32,
    pub exhaustive: bool,
    pub external_pairs_checked: u64,
    pub incident_pairs_skipped: u64,
    pub violations: Vec<AxiomViolation>,
}

impl GqAxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every external (point, line) pair, counts the points of the line
/// collinear with the point; the quadrangle axiom requires exactly one.
pub fn gq_axiom_check(ctx: &FieldCtx, geom: &WGeometry, mode: CheckMode) -> Result<GqAxiomReport> {
    let q = geom.q;
    let line_points: Vec<Vec<ProjPoint>> = geom.lines.iter().map(|l| l.points(q).collect()).collect();
    let mut report = GqAxiomReport {
        q,
        exhaustive: matches!(mode, CheckMode::Exhaustive),
        external_pairs_checked: 0,
        incident_pairs_skipped: 0,
        violations: Vec::new(),
    };
    let check = |u: &ProjPoint, li: usize, report: &mut GqAxiomReport| {
        if geom.lines[li].contains(q, u) {
            report.incident_pairs_skipped += 1;
            return;
        }
        report.external_pairs_checked += 1;
        let count = line_points[li]
            .iter()
            .filter(|v| iso_form(ctx, u, v).is_zero())
            .count();
        if count != 1 {
            report.violations.push(AxiomViolation {
                point: u.to_string(),
                line: li,
                collinear_points_on_line: count,
            });
        }
    };
    match mode {
        CheckMode::Exhaustive => {
            if q > AXIOM_EXHAUSTIVE_CAP {
                return Err(Error::CapExceeded {
                    what: "exhaustive quadrangle axiom check",
                    q,
                    cap: AXIOM_EXHAUSTIVE_CAP,
                });
            }
            for u in &geom.points {
                for li in 0..geom.lines.len() {
                    check(u, li, &mut report);
                }
            }
        }
        CheckMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..pairs {
                let u = geom.points[rng.gen_range(0..geom.points.len())];
                let li = rng.gen_range(0..geom.lines.len());
                check(&u, li, &mut report);
            }
        }
    }
    Ok(report)
}

/// Checks that two distinct points have vanishing form exactly when some
/// enumerated line contains both. Returns the number of mismatching pairs.
pub fn collinearity_mismatches(ctx: &FieldCtx, geom: &WGeometry) -> u64 {
    let mut covered: HashSet<(u64, u64)> = HashSet::new();
    let mut duplicates = 0u64;
    for l in &geom.lines {
        for (i, &a) in l.key.iter().enumerate() {
            for &b in &l.key[i + 1..] {
                if !covered.insert((a, b)) {
                    duplicates += 1;
                }
            }
        }
    }
    let mut mismatches = duplicates;
    for (i, u) in geom.points.iter().enumerate() {
        for (j, v) in geom.points.iter().enumerate().skip(i + 1) {
            let iso = iso_form(ctx, u, v).is_zero();
            if iso != covered.contains(&(i as u64, j as u64)) {
                mismatches += 1;
            }
        }
    }
    mismatches
}
