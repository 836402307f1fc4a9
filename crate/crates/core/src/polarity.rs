//! The polarity of `W(q)` for `q = 2^(2n+1)`, its absolute points, and the
//! Suzuki-Tits ovoid.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::geometry::{independent, iso_form_raw, IsoLine, ProjPoint, Quad};
use crate::gf2m::{FieldCtx, Felt};

#[derive(Clone, Debug)]
pub struct PolarityCtx {
    field: FieldCtx,
}

impl PolarityCtx {
    /// The field degree is odd by construction of [`FieldCtx`].
    pub fn new(field: FieldCtx) -> PolarityCtx {
        PolarityCtx { field }
    }

    pub fn for_degree(m: u32) -> Result<PolarityCtx> {
        Ok(Self::new(FieldCtx::new(m)?))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// The four spanning vectors of `pi(u)`, in their fixed order.
    pub fn spanning_vectors(&self, u: &ProjPoint) -> [Quad; 4] {
        let f = &self.field;
        let [x0, x1, x2, x3] = u.coords();
        let c = f.mul(x0, x1) + f.mul(x2, x3);
        let h = f.pow_u(c, (f.omega() / 2) as u64);
        let s = |x| f.sigma(x);
        let z = Felt::ZERO;
        [
            [z, h, s(x0), s(x2)],
            [h, z, s(x3), s(x1)],
            [s(x0), s(x3), z, h],
            [s(x2), s(x1), h, z],
        ]
    }

    /// The first two linearly independent spanning vectors, in listed order.
    pub fn line_basis(&self, u: &ProjPoint) -> [Quad; 2] {
        let v = self.spanning_vectors(u);
        for i in 0..4 {
            for j in i + 1..4 {
                if independent(&self.field, &v[i], &v[j]) {
                    return [v[i], v[j]];
                }
            }
        }
        unreachable!("spanning vectors of pi({u}) are pairwise dependent")
    }

    /// `pi(u)`.
    pub fn point_to_line(&self, u: &ProjPoint) -> IsoLine {
        let [x, y] = self.line_basis(u);
        debug_assert!(iso_form_raw(&self.field, &x, &y).is_zero());
        IsoLine::from_raw_span(&self.field, x, y)
    }

    /// `pi` applied to the line spanned by two independent vectors.
    pub fn span_to_point(&self, x: &Quad, y: &Quad) -> ProjPoint {
        let f = &self.field;
        let delta = |i: usize, j: usize| f.mul(x[i], y[j]) + f.mul(x[j], y[i]);
        let e = (f.omega() / 2) as u64;
        let z = [
            f.pow_u(delta(0, 2), e),
            f.pow_u(delta(3, 1), e),
            f.pow_u(delta(0, 3), e),
            f.pow_u(delta(2, 1), e),
        ];
        ProjPoint::canon(f, z).expect("an isotropic line has non-zero image")
    }

    /// `pi(l)`, from the stored spanning pair of `l`.
    pub fn line_to_point(&self, l: &IsoLine) -> ProjPoint {
        let [x, y] = l.span();
        self.span_to_point(x, y)
    }

    pub fn is_absolute(&self, u: &ProjPoint) -> bool {
        self.point_to_line(u).contains(self.q(), u)
    }

    /// `{[0,1,0,0]} ∪ {[1, f(x,y), x, y]}`.
    pub fn ovoid(&self) -> BTreeSet<ProjPoint> {
        let f = &self.field;
        let mut out = BTreeSet::new();
        out.insert(ProjPoint::canon(f, [Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO]).unwrap());
        for x in f.elements() {
            for y in f.elements() {
                out.insert(ProjPoint::canon(f, [Felt::ONE, f.f(x, y), x, y]).unwrap());
            }
        }
        out
    }
}
