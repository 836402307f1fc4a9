//! The group `G` of matrices `M(r; a, b)`, its action on `W(q)` by right
//! multiplication, the orbits `O1`..`O5`, and the two cyclic stabilisers
//! used to extend the generating set.
//!
//! Elements are stored as parameter triples; the 4x4 matrix form exists as
//! a cross-check.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{enumerate_points, point_count, ProjPoint, Quad};
use crate::gf2m::{FieldCtx, Felt};
use crate::polarity::PolarityCtx;

/// The element `M(r; a, b)`, `r != 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElem {
    pub r: Felt,
    pub a: Felt,
    pub b: Felt,
}

impl fmt::Debug for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({:x};{:x},{:x})", self.r, self.a, self.b)
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl GElem {
    pub const IDENTITY: GElem = GElem {
        r: Felt::ONE,
        a: Felt::ZERO,
        b: Felt::ZERO,
    };

    pub fn new(r: Felt, a: Felt, b: Felt) -> Result<GElem> {
        if r.is_zero() {
            return Err(Error::InvalidGenerators(format!(
                "M(0;{a:x},{b:x}) is not in G"
            )));
        }
        Ok(GElem { r, a, b })
    }

    pub fn from_bits(ctx: &FieldCtx, r: u32, a: u32, b: u32) -> Result<GElem> {
        GElem::new(ctx.elem(r)?, ctx.elem(a)?, ctx.elem(b)?)
    }

    pub fn is_identity(&self) -> bool {
        *self == GElem::IDENTITY
    }

    /// Dense index `((r - 1) q + a) q + b` in `0..q^2(q-1)`.
    #[inline]
    pub fn index(&self, q: u32) -> usize {
        let q = q as usize;
        ((self.r.bits() as usize - 1) * q + self.a.bits() as usize) * q + self.b.bits() as usize
    }

    #[inline]
    pub fn from_index(q: u32, idx: usize) -> GElem {
        let qu = q as usize;
        GElem {
            r: Felt::from_bits((idx / (qu * qu)) as u32 + 1),
            a: Felt::from_bits((idx / qu % qu) as u32),
            b: Felt::from_bits((idx % qu) as u32),
        }
    }

    /// `(r, a, b)` as lower-case hex strings.
    pub fn hex_triple(&self) -> [String; 3] {
        [self.r, self.a, self.b].map(|x| format!("{x:x}"))
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> GElem {
        GElem {
            r: ctx.random_nonzero(rng),
            a: ctx.random(rng),
            b: ctx.random(rng),
        }
    }
}

pub fn order(q: u32) -> usize {
    let q = q as usize;
    q * q * (q - 1)
}

/// All of `G` in dense-index order.
pub fn elements(ctx: &FieldCtx) -> impl Iterator<Item = GElem> + '_ {
    let q = ctx.q();
    (0..order(q)).map(move |i| GElem::from_index(q, i))
}

/// `M(r;a,b) M(s;c,d) = M(rs; as + c, b s^(w+1) + d + a c^w s)`.
#[inline]
pub fn mul(ctx: &FieldCtx, g: GElem, h: GElem) -> GElem {
    let w = ctx.omega() as u64;
    let s = h.r;
    GElem {
        r: ctx.mul(g.r, s),
        a: ctx.mul(g.a, s) + h.a,
        b: ctx.mul(g.b, ctx.pow_u(s, w + 1)) + h.b + ctx.mul(ctx.mul(g.a, ctx.sigma(h.a)), s),
    }
}

/// `(r^-1, a r^-1, (b + a^(w+1)) r^-(w+1))`.
pub fn inv(ctx: &FieldCtx, g: GElem) -> GElem {
    let w = ctx.omega() as u64;
    let ri = ctx.inv_nonzero(g.r);
    GElem {
        r: ri,
        a: ctx.mul(g.a, ri),
        b: ctx.mul(g.b + ctx.pow_u(g.a, w + 1), ctx.pow_u(ri, w + 1)),
    }
}

pub type Matrix = [[Felt; 4]; 4];

pub fn matrix(ctx: &FieldCtx, g: GElem) -> Matrix {
    let w = ctx.omega() as u64;
    let GElem { r, a, b } = g;
    let z = Felt::ZERO;
    let rw1 = ctx.pow_u(r, w + 1);
    [
        [Felt::ONE, ctx.f(a, b), a, b],
        [z, ctx.pow_u(r, w + 2), z, z],
        [z, ctx.mul(ctx.pow_u(a, w + 1) + b, r), r, ctx.mul(ctx.sigma(a), r)],
        [z, ctx.mul(a, rw1), z, rw1],
    ]
}

pub fn mat_mul(ctx: &FieldCtx, x: &Matrix, y: &Matrix) -> Matrix {
    let mut out = [[Felt::ZERO; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).fold(Felt::ZERO, |acc, k| acc + ctx.mul(x[i][k], y[k][j]));
        }
    }
    out
}

/// Row vector times matrix.
pub fn vec_mat(ctx: &FieldCtx, x: &Quad, m: &Matrix) -> Quad {
    [0, 1, 2, 3].map(|j| (0..4).fold(Felt::ZERO, |acc, k| acc + ctx.mul(x[k], m[k][j])))
}

/// `[x] g`: the right action on points.
pub fn act(ctx: &FieldCtx, u: &ProjPoint, g: GElem) -> ProjPoint {
    act_raw(ctx, &u.coords(), g)
}

pub fn act_raw(ctx: &FieldCtx, x: &Quad, g: GElem) -> ProjPoint {
    ProjPoint::canon(ctx, vec_mat(ctx, x, &matrix(ctx, g))).expect("G is invertible")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitClass {
    O1,
    O2,
    O3,
    O4,
    O5,
}

impl OrbitClass {
    pub const ALL: [OrbitClass; 5] = [
        OrbitClass::O1,
        OrbitClass::O2,
        OrbitClass::O3,
        OrbitClass::O4,
        OrbitClass::O5,
    ];

    pub fn size(self, q: u32) -> u64 {
        let q = q as u64;
        match self {
            OrbitClass::O1 | OrbitClass::O2 => q * q,
            OrbitClass::O3 => q,
            OrbitClass::O4 => 1,
            OrbitClass::O5 => q * q * (q - 1),
        }
    }

    /// The orbit representative used for eccentricity certification.
    pub fn representative(self, ctx: &FieldCtx) -> ProjPoint {
        let bits = match self {
            OrbitClass::O1 => [1, 0, 0, 0],
            OrbitClass::O2 => [0, 0, 1, 0],
            OrbitClass::O3 => [0, 0, 0, 1],
            OrbitClass::O4 => [0, 1, 0, 0],
            OrbitClass::O5 => [1, 1, 0, 0],
        };
        ProjPoint::from_bits(ctx, bits).unwrap()
    }
}

/// Case analysis on canonical coordinates.
pub fn classify(ctx: &FieldCtx, u: &ProjPoint) -> OrbitClass {
    let [x0, x1, x2, x3] = u.coords();
    if x0.is_zero() {
        if !x2.is_zero() {
            OrbitClass::O2
        } else if !x3.is_zero() {
            OrbitClass::O3
        } else {
            OrbitClass::O4
        }
    } else if x1 == ctx.f(x2, x3) {
        OrbitClass::O1
    } else {
        OrbitClass::O5
    }
}

/// The base point `[1,1,0,0]` of the regular orbit.
pub fn base_point(ctx: &FieldCtx) -> ProjPoint {
    ProjPoint::from_bits(ctx, [1, 1, 0, 0]).unwrap()
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// The bijection `g -> [1,1,0,0] g` from `G` onto `O5`, with its inverse.
#[derive(Clone, Debug)]
pub struct RegularOrbit {
    ctx: FieldCtx,
    // e with (w+2) e = 1 mod q-1
    root_exp: u64,
}

impl RegularOrbit {
    pub fn new(ctx: &FieldCtx) -> RegularOrbit {
        let root_exp = mod_inverse(ctx.omega() as u64 + 2, ctx.group_order())
            .expect("gcd(w + 2, q - 1) = 1");
        RegularOrbit {
            ctx: ctx.clone(),
            root_exp,
        }
    }

    /// `[1, f(a,b) + r^(w+2), a, b]`.
    pub fn to_point(&self, g: GElem) -> ProjPoint {
        let c = &self.ctx;
        let y = c.f(g.a, g.b) + c.pow_u(g.r, c.omega() as u64 + 2);
        ProjPoint::canon(c, [Felt::ONE, y, g.a, g.b]).unwrap()
    }

    /// Solves `[1,1,0,0] g = u`; `None` off the regular orbit.
    pub fn to_elem(&self, u: &ProjPoint) -> Option<GElem> {
        let c = &self.ctx;
        let [x0, x1, a, b] = u.coords();
        if x0 != Felt::ONE {
            return None;
        }
        let t = x1 + c.f(a, b);
        if t.is_zero() {
            return None;
        }
        Some(GElem {
            r: c.pow_u(t, self.root_exp),
            a,
            b,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stabilizer {
    H1,
    H2,
}

/// `theta1(r) = M(r; r+1, r+1)`.
pub fn theta1(_ctx: &FieldCtx, r: Felt) -> GElem {
    GElem {
        r,
        a: r + Felt::ONE,
        b: r + Felt::ONE,
    }
}

/// `theta2(r) = M(r; 0, 1 + r^(w+1))`.
pub fn theta2(ctx: &FieldCtx, r: Felt) -> GElem {
    GElem {
        r,
        a: Felt::ZERO,
        b: Felt::ONE + ctx.pow_u(r, ctx.omega() as u64 + 1),
    }
}

/// One of the cyclic stabilisers, as the image of `F*` under its theta map.
#[derive(Clone, Debug)]
pub struct StabSet {
    pub which: Stabilizer,
    /// `(r, theta(r))` for `r` in the fixed enumeration of `F*`.
    pub elements: Vec<(Felt, GElem)>,
}

impl StabSet {
    pub fn theta(&self, ctx: &FieldCtx, r: Felt) -> GElem {
        match self.which {
            Stabilizer::H1 => theta1(ctx, r),
            Stabilizer::H2 => theta2(ctx, r),
        }
    }

    /// The two points this subgroup fixes.
    pub fn fixed_points(&self, ctx: &FieldCtx) -> [ProjPoint; 2] {
        let p = |b| ProjPoint::from_bits(ctx, b).unwrap();
        match self.which {
            Stabilizer::H1 => [p([1, 1, 1, 1]), p([0, 0, 1, 1])],
            Stabilizer::H2 => [p([0, 1, 1, 0]), p([1, 1, 0, 1])],
        }
    }

    /// The two point sets this subgroup acts on regularly:
    /// `L(u1) ∪ {u}` and `L(u'2)` for H1, `L(u2) ∪ {u}` and `L(u'1)` for H2.
    pub fn regular_sets(&self, ctx: &FieldCtx) -> [Vec<ProjPoint>; 2] {
        let one = Felt::ONE;
        let zero = Felt::ZERO;
        let build = |f: &dyn Fn(Felt) -> Quad| -> Vec<ProjPoint> {
            ctx.nonzero()
                .map(|z| ProjPoint::canon(ctx, f(z)).unwrap())
                .collect()
        };
        match self.which {
            Stabilizer::H1 => [
                build(&|z| [one, one, z + one, z + one]),
                build(&|z| [one, z + one, one, z + one]),
            ],
            Stabilizer::H2 => [
                build(&|z| [one, one, zero, z + one]),
                build(&|z| [one, z + one, z, one]),
            ],
        }
    }
}

pub fn stabilizer(ctx: &FieldCtx, which: Stabilizer) -> StabSet {
    let theta = match which {
        Stabilizer::H1 => theta1,
        Stabilizer::H2 => theta2,
    };
    StabSet {
        which,
        elements: ctx.nonzero().map(|r| (r, theta(ctx, r))).collect(),
    }
}

#[derive(Clone, Copy, Debug)]
pub enum EquivarianceMode {
    Exhaustive,
    Sampled { pairs: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub q: u32,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub violations: u64,
    pub first_violation: Option<(String, String)>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub const EQUIVARIANCE_EXHAUSTIVE_CAP: u32 = 8;

/// Compares `pi(u g)` with the point-wise image of `pi(u)` under `g`.
pub fn equivariance_check(pol: &PolarityCtx, mode: EquivarianceMode) -> Result<EquivarianceReport> {
    let ctx = pol.field();
    let q = ctx.q();
    let mut report = EquivarianceReport {
        q,
        exhaustive: matches!(mode, EquivarianceMode::Exhaustive),
        pairs_checked: 0,
        violations: 0,
        first_violation: None,
    };
    let check = |u: &ProjPoint, g: GElem, report: &mut EquivarianceReport| {
        report.pairs_checked += 1;
        let lhs = pol.point_to_line(&act(ctx, u, g));
        let m = matrix(ctx, g);
        let mut rhs: Vec<u64> = pol
            .point_to_line(u)
            .points(q)
            .map(|v| {
                ProjPoint::canon(ctx, vec_mat(ctx, &v.coords(), &m))
                    .unwrap()
                    .rank(q)
            })
            .collect();
        rhs.sort_unstable();
        if lhs.key() != rhs.as_slice() {
            report.violations += 1;
            report
                .first_violation
                .get_or_insert_with(|| (u.to_string(), g.to_string()));
        }
    };
    match mode {
        EquivarianceMode::Exhaustive => {
            if q > EQUIVARIANCE_EXHAUSTIVE_CAP {
                return Err(Error::CapExceeded {
                    what: "exhaustive equivariance check",
                    q,
                    cap: EQUIVARIANCE_EXHAUSTIVE_CAP,
                });
            }
            let points = enumerate_points(ctx)?;
            for u in &points {
                for g in elements(ctx) {
                    check(u, g, &mut report);
                }
            }
        }
        EquivarianceMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..pairs {
                let u = ProjPoint::random(ctx, &mut rng);
                let g = GElem::random(ctx, &mut rng);
                check(&u, g, &mut report);
            }
        }
    }
    Ok(report)
}

/// Number of points in each orbit class over all of `PG(3, q)`.
pub fn orbit_sizes(ctx: &FieldCtx) -> [u64; 5] {
    let q = ctx.q();
    let mut sizes = [0u64; 5];
    for r in 0..point_count(q) {
        let c = classify(ctx, &ProjPoint::from_rank(q, r));
        sizes[c as usize] += 1;
    }
    sizes
}
