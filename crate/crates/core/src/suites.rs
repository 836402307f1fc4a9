//! Named invariant suites, run by `verify`. Each check is exhaustive where
//! the size allows and seeded-random otherwise.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{
    collinearity_mismatches, enumerate_points, gq_axiom_check, iso_form, lines_through, point_count,
    wq_enumerate, CheckMode, ProjPoint,
};
use crate::gf2m::{schoolbook_mul, FieldCtx, Felt};
use crate::graphs::{build_aq, loss_sets, table1_check, EXPLICIT_CAP};
use crate::group::{
    self, act, classify, equivariance_check, matrix, mat_mul, orbit_sizes, stabilizer, EquivarianceMode, GElem,
    OrbitClass, RegularOrbit, Stabilizer,
};
use crate::polarity::PolarityCtx;

/// Sample size for randomised checks.
pub const SAMPLES: u64 = 100_000;
/// Largest field size for per-element exhaustive loops.
const ELEMENT_CAP: u32 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub q: u32,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn skip(&mut self, name: &str, why: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skipped,
            detail: why.into(),
        });
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {:?} at q={} (seed {})\n", self.suite, self.q, self.seed);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("  [{tag}] {}: {}\n", c.name, c.detail));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Field,
    Geometry,
    Polarity,
    Group,
    Table1,
    Stabilizers,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Field,
        Suite::Geometry,
        Suite::Polarity,
        Suite::Group,
        Suite::Table1,
        Suite::Stabilizers,
    ];

    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        Some(match name {
            "field" => vec![Suite::Field],
            "geometry" => vec![Suite::Geometry],
            "polarity" => vec![Suite::Polarity],
            "group" => vec![Suite::Group],
            "table1" => vec![Suite::Table1],
            "stabilizers" => vec![Suite::Stabilizers],
            "all" => Suite::ALL.to_vec(),
            _ => return None,
        })
    }
}

pub fn run_suite(pol: &PolarityCtx, suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport {
        suite,
        q: pol.q(),
        seed,
        checks: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Field => field_suite(pol.field(), &mut rng, &mut r),
        Suite::Geometry => geometry_suite(pol.field(), seed, &mut rng, &mut r)?,
        Suite::Polarity => polarity_suite(pol, &mut rng, &mut r)?,
        Suite::Group => group_suite(pol, seed, &mut rng, &mut r)?,
        Suite::Table1 => table1_suite(pol, &mut r)?,
        Suite::Stabilizers => stabilizer_suite(pol, &mut r),
    }
    Ok(r)
}

fn count_fails(n: u64, mut ok: impl FnMut() -> bool) -> u64 {
    (0..n).filter(|_| !ok()).count() as u64
}

fn counted(what: impl std::fmt::Display, checked: u64, bad: u64) -> String {
    format!("{bad} violations in {checked} {what}")
}

fn field_suite(f: &FieldCtx, rng: &mut ChaCha8Rng, r: &mut SuiteReport) {
    let q = f.q();
    let bad = count_fails(SAMPLES, || {
        let (x, y, z) = (f.random(rng), f.random(rng), f.random(rng));
        f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))
            && f.mul(x, y + z) == f.mul(x, y) + f.mul(x, z)
            && f.mul(x, y) == f.mul(y, x)
    });
    r.check("ring-axioms", bad == 0, counted("random triples", SAMPLES, bad));

    let bad = count_fails(SAMPLES, || {
        let (x, y) = (f.random(rng), f.random(rng));
        f.mul(x, y).bits() == schoolbook_mul(f.m(), f.red_poly(), x.bits(), y.bits())
    });
    r.check("mul-vs-schoolbook", bad == 0, counted("random pairs", SAMPLES, bad));

    let bad = count_fails(SAMPLES, || {
        let (x, y) = (f.random(rng), f.random(rng));
        f.sigma(x + y) == f.sigma(x) + f.sigma(y) && f.sigma(f.mul(x, y)) == f.mul(f.sigma(x), f.sigma(y))
    });
    r.check("sigma-automorphism", bad == 0, counted("random pairs", SAMPLES, bad));

    if q <= ELEMENT_CAP {
        let bad = f
            .nonzero()
            .filter(|&x| f.mul(x, f.inv(x).unwrap()) != Felt::ONE)
            .count() as u64;
        r.check("inverses", bad == 0, counted("elements", q as u64 - 1, bad));
        let bad = f
            .elements()
            .filter(|&x| f.sigma(f.sigma(x)) != f.square(x) || f.square(f.sqrt(x)) != x)
            .count() as u64;
        r.check("sigma-squared-and-sqrt", bad == 0, counted("elements", q as u64, bad));
        let image: BTreeSet<Felt> = f.elements().map(|x| f.pow_u(x, f.omega() as u64 + 2)).collect();
        r.check(
            "power-w+2-bijective",
            image.len() == q as usize,
            format!("{} distinct images of {q}", image.len()),
        );
    } else {
        r.skip("inverses", format!("q > {ELEMENT_CAP}"));
        r.skip("sigma-squared-and-sqrt", format!("q > {ELEMENT_CAP}"));
        r.skip("power-w+2-bijective", format!("q > {ELEMENT_CAP}"));
    }
}

fn geometry_suite(f: &FieldCtx, seed: u64, rng: &mut ChaCha8Rng, r: &mut SuiteReport) -> Result<()> {
    let q = f.q();
    let expected = point_count(q);
    if q > EXPLICIT_CAP {
        r.skip("enumeration", format!("line enumeration capped at q <= {EXPLICIT_CAP}"));
        let bad = count_fails(10_000, || {
            let u = ProjPoint::random(f, rng);
            let v = ProjPoint::random(f, rng);
            let on_line = lines_through(f, &u).iter().any(|l| l.contains(q, &v));
            u == v || on_line == iso_form(f, &u, &v).is_zero()
        });
        r.check("collinearity-iff-form", bad == 0, counted("random pairs", 10_000, bad));
        return Ok(());
    }
    let g = wq_enumerate(f)?;
    let regular = g.lines.iter().all(|l| l.len() == q as usize + 1)
        && g.point_lines.iter().all(|ls| ls.len() == q as usize + 1);
    r.check(
        "counts",
        g.points.len() as u64 == expected && g.lines.len() as u64 == expected && regular,
        format!("{} points, {} lines, expected {expected} each, q+1 regular: {regular}", g.points.len(), g.lines.len()),
    );
    if q <= 8 {
        let bad = collinearity_mismatches(f, &g);
        r.check("collinearity-iff-form", bad == 0, format!("{bad} mismatching pairs, all pairs"));
    } else {
        r.skip("collinearity-iff-form", "all-pairs comparison run at q = 8 only");
    }
    let mode = if q <= 8 {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { pairs: SAMPLES, seed }
    };
    let rep = gq_axiom_check(f, &g, mode)?;
    r.check(
        "gq-axiom",
        rep.passed(),
        format!(
            "{} violations in {} anti-flags ({})",
            rep.violations.len(),
            rep.external_pairs_checked,
            if rep.exhaustive { "exhaustive" } else { "sampled" }
        ),
    );
    Ok(())
}

fn polarity_suite(pol: &PolarityCtx, rng: &mut ChaCha8Rng, r: &mut SuiteReport) -> Result<()> {
    let f = pol.field();
    let q = pol.q();
    let omega = pol.ovoid();
    r.check(
        "ovoid-size",
        omega.len() as u64 == q as u64 * q as u64 + 1,
        format!("|Omega| = {}", omega.len()),
    );
    if q <= EXPLICIT_CAP {
        let points = enumerate_points(f)?;
        let bad = points
            .iter()
            .filter(|u| pol.line_to_point(&pol.point_to_line(u)) != **u)
            .count();
        r.check("involution-points", bad == 0, counted("points", points.len() as u64, bad as u64));
        let absolute: BTreeSet<ProjPoint> = points.iter().copied().filter(|u| pol.is_absolute(u)).collect();
        r.check(
            "absolute-equals-ovoid",
            absolute == omega,
            format!("{} absolute points, all points checked", absolute.len()),
        );
        let g = wq_enumerate(f)?;
        let bad = g
            .lines
            .iter()
            .filter(|l| pol.point_to_line(&pol.line_to_point(l)).key() != l.key())
            .count();
        r.check("involution-lines", bad == 0, counted("lines", g.lines.len() as u64, bad as u64));
        // pi(u), pi(v) for u != v on l are distinct lines through pi(l)
        let exhaustive = q <= 8;
        let mut checked = 0u64;
        let mut bad = 0u64;
        let lines: Vec<_> = if exhaustive {
            g.lines.iter().collect()
        } else {
            (0..10_000).map(|_| &g.lines[rng.gen_range(0..g.lines.len())]).collect()
        };
        for l in lines {
            let c = pol.line_to_point(l);
            let pts: Vec<ProjPoint> = l.points(q).collect();
            for (i, u) in pts.iter().enumerate() {
                for v in &pts[i + 1..] {
                    checked += 1;
                    let (lu, lv) = (pol.point_to_line(u), pol.point_to_line(v));
                    if lu.key() == lv.key() || !lu.contains(q, &c) || !lv.contains(q, &c) {
                        bad += 1;
                    }
                }
            }
        }
        r.check(
            "polarity-property",
            bad == 0,
            format!(
                "{} ({})",
                counted("collinear pairs", checked, bad),
                if exhaustive { "all lines" } else { "10000 random lines" }
            ),
        );
    } else {
        let bad = count_fails(SAMPLES, || {
            let u = ProjPoint::random(f, rng);
            pol.line_to_point(&pol.point_to_line(&u)) == u
        });
        r.check("involution-points", bad == 0, counted("random points", SAMPLES, bad));
        let bad = omega.iter().filter(|u| !pol.is_absolute(u)).count() as u64;
        let off = count_fails(SAMPLES, || {
            let u = ProjPoint::random(f, rng);
            omega.contains(&u) || !pol.is_absolute(&u)
        });
        r.check(
            "absolute-equals-ovoid",
            bad == 0 && off == 0,
            format!("{bad} non-absolute ovoid points; {off} absolute points off the ovoid in {SAMPLES} samples"),
        );
        r.skip("involution-lines", format!("line enumeration capped at q <= {EXPLICIT_CAP}"));
        r.skip("polarity-property", format!("line enumeration capped at q <= {EXPLICIT_CAP}"));
    }
    Ok(())
}

fn group_suite(pol: &PolarityCtx, seed: u64, rng: &mut ChaCha8Rng, r: &mut SuiteReport) -> Result<()> {
    let f = pol.field();
    let q = f.q();
    let expected = group::order(q);
    let agree = |g: GElem, h: GElem| matrix(f, group::mul(f, g, h)) == mat_mul(f, &matrix(f, g), &matrix(f, h));

    if q <= EXPLICIT_CAP {
        let idx: BTreeSet<usize> = group::elements(f).map(|g| g.index(q)).collect();
        r.check(
            "order",
            idx.len() == expected && idx.last() == Some(&(expected - 1)),
            format!("{} elements enumerated, expected {expected}", idx.len()),
        );
        let reg = RegularOrbit::new(f);
        let img: BTreeSet<ProjPoint> = group::elements(f).map(|g| reg.to_point(g)).collect();
        let all_o5 = img.iter().all(|u| classify(f, u) == OrbitClass::O5);
        let roundtrip = group::elements(f).all(|g| reg.to_elem(&reg.to_point(g)) == Some(g));
        r.check(
            "regular-on-O5",
            img.len() == expected && all_o5 && roundtrip,
            format!("{} distinct images in O5, inverse map consistent: {roundtrip}", img.len()),
        );
    } else {
        r.skip("order", format!("enumeration capped at q <= {EXPLICIT_CAP}"));
        let reg = RegularOrbit::new(f);
        let bad = count_fails(SAMPLES, || {
            let g = GElem::random(f, rng);
            reg.to_elem(&reg.to_point(g)) == Some(g)
        });
        r.check("regular-on-O5", bad == 0, counted("random elements", SAMPLES, bad));
    }

    if q <= 8 {
        let els: Vec<GElem> = group::elements(f).collect();
        let bad = els
            .iter()
            .flat_map(|&g| els.iter().map(move |&h| (g, h)))
            .filter(|&(g, h)| !agree(g, h))
            .count() as u64;
        r.check("triple-vs-matrix", bad == 0, counted("pairs, exhaustive", (els.len() * els.len()) as u64, bad));
    } else {
        let bad = count_fails(SAMPLES, || agree(GElem::random(f, rng), GElem::random(f, rng)));
        r.check("triple-vs-matrix", bad == 0, counted("random pairs", SAMPLES, bad));
    }

    let bad = count_fails(SAMPLES, || {
        let g = GElem::random(f, rng);
        let gi = group::inv(f, g);
        group::mul(f, g, gi).is_identity() && group::mul(f, gi, g).is_identity()
    });
    r.check("inverse", bad == 0, counted("random elements", SAMPLES, bad));

    let bad = count_fails(SAMPLES, || {
        let (a, b, c) = (GElem::random(f, rng), GElem::random(f, rng), GElem::random(f, rng));
        group::mul(f, group::mul(f, a, b), c) == group::mul(f, a, group::mul(f, b, c))
    });
    r.check("associativity", bad == 0, counted("random triples", SAMPLES, bad));

    if q <= 128 {
        let sizes = orbit_sizes(f);
        let want = OrbitClass::ALL.map(|c| c.size(q));
        r.check("orbit-sizes", sizes == want, format!("{sizes:?}, expected {want:?}"));
    } else {
        r.skip("orbit-sizes", "point enumeration capped at q <= 128");
    }
    let bad = count_fails(SAMPLES, || {
        let u = ProjPoint::random(f, rng);
        classify(f, &act(f, &u, GElem::random(f, rng))) == classify(f, &u)
    });
    r.check("orbit-invariance", bad == 0, counted("random point/element pairs", SAMPLES, bad));

    let mode = if q <= 8 {
        EquivarianceMode::Exhaustive
    } else {
        EquivarianceMode::Sampled { pairs: SAMPLES, seed }
    };
    let rep = equivariance_check(pol, mode)?;
    r.check(
        "equivariance",
        rep.passed(),
        format!(
            "{} ({})",
            counted("point/element pairs", rep.pairs_checked, rep.violations),
            if rep.exhaustive { "exhaustive" } else { "sampled" }
        ),
    );
    Ok(())
}

fn table1_suite(pol: &PolarityCtx, r: &mut SuiteReport) -> Result<()> {
    for (u, ok) in table1_check(pol) {
        r.check(&format!("N{u}"), ok, if ok { "matches" } else { "differs" });
    }
    let q = pol.q() as usize;
    if q as u32 <= EXPLICIT_CAP {
        let a = build_aq(pol)?;
        let hist = a.degree_histogram();
        let want = vec![(q, q * q + 1), (q + 1, point_count(q as u32) as usize - q * q - 1)];
        let csr = a.csr().unwrap();
        r.check(
            "A(q)-degrees",
            hist == want && csr.is_symmetric() && csr.is_loop_free(),
            format!("degree multiset {hist:?}"),
        );
    } else {
        r.skip("A(q)-degrees", format!("explicit A(q) capped at q <= {EXPLICIT_CAP}"));
    }
    Ok(())
}

fn stabilizer_suite(pol: &PolarityCtx, r: &mut SuiteReport) {
    let f = pol.field();
    let q = f.q();
    let exhaustive = q <= EXPLICIT_CAP;
    let p = |b| ProjPoint::from_bits(f, b).unwrap();
    let u = p([1, 1, 0, 0]);
    let loss = loss_sets(pol);
    for which in [Stabilizer::H1, Stabilizer::H2] {
        let h = stabilizer(f, which);
        let tag = format!("{which:?}");

        let homo = if exhaustive {
            h.elements.iter().all(|&(a, ta)| {
                h.elements
                    .iter()
                    .all(|&(b, tb)| group::mul(f, ta, tb) == h.theta(f, f.mul(a, b)))
            })
        } else {
            h.elements
                .iter()
                .take(64)
                .all(|&(a, ta)| h.elements.iter().all(|&(b, tb)| group::mul(f, ta, tb) == h.theta(f, f.mul(a, b))))
        };
        r.check(
            &format!("{tag}-homomorphism"),
            homo,
            if exhaustive { "all pairs r, s" } else { "first 64 r against all s" },
        );

        let fixed = h.fixed_points(f);
        let fixes = h.elements.iter().all(|(_, g)| fixed.iter().all(|x| act(f, x, *g) == *x));
        r.check(
            &format!("{tag}-fixes"),
            fixes,
            format!("{} and {} fixed by all {} elements", fixed[0], fixed[1], h.elements.len()),
        );

        let sets = h.regular_sets(f);
        for (k, set) in sets.iter().enumerate() {
            let members: BTreeSet<ProjPoint> = set.iter().copied().collect();
            let orbit: BTreeSet<ProjPoint> = h.elements.iter().map(|(_, g)| act(f, &set[0], *g)).collect();
            let invariant = set.iter().all(|x| h.elements.iter().all(|(_, g)| members.contains(&act(f, x, *g))));
            // |H| = |set| and one orbit: transitive with trivial stabiliser
            let regular = members.len() == h.elements.len() && orbit == members && invariant;
            r.check(
                &format!("{tag}-regular-on-set-{}", k + 1),
                regular,
                format!("{} points, orbit of size {}", members.len(), orbit.len()),
            );
        }

        let [first, second] = &sets;
        let with_u = |l: &[ProjPoint]| -> BTreeSet<ProjPoint> { l.iter().copied().chain([u]).collect() };
        let as_set = |l: &[ProjPoint]| -> BTreeSet<ProjPoint> { l.iter().copied().collect() };
        let (a, b) = match which {
            Stabilizer::H1 => (with_u(&loss.l_u1), as_set(&loss.l_u2p)),
            Stabilizer::H2 => (with_u(&loss.l_u2), as_set(&loss.l_u1p)),
        };
        r.check(
            &format!("{tag}-sets-are-loss-sets"),
            a == as_set(first) && b == as_set(second),
            "closed forms agree with neighbourhoods in A(q)",
        );
    }
}
