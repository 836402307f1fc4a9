//! Arithmetic in `GF(2^m)` for odd `m = 2n + 1`, in a polynomial basis.
//!
//! Elements are bit vectors of polynomial coefficients (bit `i` is the
//! coefficient of `x^i`). The reduction polynomial defaults to the
//! lexicographically smallest irreducible polynomial of degree `m`. For
//! `m <= 15` multiplication goes through log/antilog tables built from the
//! smallest primitive element; larger fields use shift-and-reduce. Both paths
//! agree bit for bit with [`schoolbook_mul`].

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 3;
pub const MAX_DEGREE: u32 = 21;

const TABLE_MAX_DEGREE: u32 = 15;

/// A field element in polynomial-basis encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Felt(u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    /// Wraps raw bits without a range check. Use [`FieldCtx::elem`] for
    /// untrusted input.
    #[inline]
    pub const fn from_bits(bits: u32) -> Felt {
        Felt(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl fmt::LowerHex for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl Add for Felt {
    type Output = Felt;

    // characteristic 2: addition is XOR
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Felt) -> Felt {
        Felt(self.0 ^ rhs.0)
    }
}

impl AddAssign for Felt {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Felt) {
        self.0 ^= rhs.0;
    }
}

/// Carry-less multiply of `x` and `y` followed by reduction modulo `poly`,
/// which must have degree `m`. Operands must be below `2^m`.
pub fn schoolbook_mul(m: u32, poly: u64, x: u32, y: u32) -> u32 {
    let mut acc: u64 = 0;
    let mut a = x as u64;
    let mut b = y as u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    debug_assert!(degree(poly) == m as i32);
    poly_rem(acc, poly) as u32
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` over GF(2). `b` must be non-zero.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Exhaustive factor search: `poly` (degree `m`) is irreducible iff no
/// polynomial of degree `1..=m/2` divides it.
pub fn is_irreducible(poly: u64, m: u32) -> bool {
    if degree(poly) != m as i32 || poly & 1 == 0 {
        return m == 1 && degree(poly) == 1;
    }
    (2u64..(1u64 << (m / 2 + 1))).all(|d| poly_rem(poly, d) != 0)
}

/// The lexicographically smallest irreducible polynomial of degree `m`.
pub fn smallest_irreducible(m: u32) -> u64 {
    ((1u64 << m)..(1u64 << (m + 1)))
        .find(|&p| is_irreducible(p, m))
        .expect("irreducible polynomials exist in every degree")
}

/// Renders a reduction polynomial as `x^5+x^2+1`.
pub fn poly_to_string(poly: u64) -> String {
    let mut terms = Vec::new();
    for i in (0..64).rev() {
        if poly >> i & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    terms.join("+")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

struct Tables {
    log: Vec<u32>,
    // exp[k] = g^k for k in 0..2(q-1), so log sums need no reduction.
    exp: Vec<u32>,
}

struct Inner {
    m: u32,
    q: u32,
    n: u32,
    omega: u32,
    red_poly: u64,
    primitive: u32,
    tables: Option<Tables>,
}

/// Immutable description of `GF(2^m)`. Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.0.m)
            .field("q", &self.0.q)
            .field("omega", &self.0.omega)
            .field("red_poly", &format_args!("{:#x}", self.0.red_poly))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.m == other.0.m && self.0.red_poly == other.0.red_poly
    }
}

impl Eq for FieldCtx {}

fn check_degree(m: u32) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenDegree(m));
    }
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
        return Err(Error::DegreeOutOfRange {
            m,
            min: MIN_DEGREE,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

impl FieldCtx {
    /// `GF(2^m)` reduced by the smallest irreducible polynomial of degree `m`.
    pub fn new(m: u32) -> Result<FieldCtx> {
        check_degree(m)?;
        Ok(Self::build(m, smallest_irreducible(m)))
    }

    /// `GF(2^m)` with an explicit reduction polynomial.
    pub fn with_poly(m: u32, poly: u64) -> Result<FieldCtx> {
        check_degree(m)?;
        if !is_irreducible(poly, m) {
            return Err(Error::NotIrreducible { m, poly });
        }
        Ok(Self::build(m, poly))
    }

    /// Field of order `q`, which must be `2^(2n+1)`.
    pub fn for_order(q: u64) -> Result<FieldCtx> {
        if !q.is_power_of_two() {
            return Err(Error::NotAFieldOrder(q));
        }
        Self::new(q.trailing_zeros())
    }

    fn build(m: u32, red_poly: u64) -> FieldCtx {
        let q = 1u32 << m;
        let n = (m - 1) / 2;
        let omega = 1u32 << (n + 1);
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let slow_pow = |x: u32, mut e: u64| {
            let mut base = x;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = schoolbook_mul(m, red_poly, acc, base);
                }
                base = schoolbook_mul(m, red_poly, base, base);
                e >>= 1;
            }
            acc
        };
        let primitive = (2..q)
            .find(|&g| factors.iter().all(|&p| slow_pow(g, order / p) != 1))
            .unwrap_or(1);
        let tables = (m <= TABLE_MAX_DEGREE).then(|| {
            let len = (q - 1) as usize;
            let mut log = vec![0u32; q as usize];
            let mut exp = vec![0u32; 2 * len];
            let mut cur = 1u32;
            for k in 0..len {
                exp[k] = cur;
                exp[k + len] = cur;
                log[cur as usize] = k as u32;
                cur = schoolbook_mul(m, red_poly, cur, primitive);
            }
            Tables { log, exp }
        });
        FieldCtx(Arc::new(Inner {
            m,
            q,
            n,
            omega,
            red_poly,
            primitive,
            tables,
        }))
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.0.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// The exponent of the Tits automorphism, `2^(n+1)`.
    #[inline]
    pub fn omega(&self) -> u32 {
        self.0.omega
    }

    #[inline]
    pub fn red_poly(&self) -> u64 {
        self.0.red_poly
    }

    /// Order of the multiplicative group.
    #[inline]
    pub fn group_order(&self) -> u64 {
        (self.0.q - 1) as u64
    }

    /// The smallest primitive element by bit encoding.
    #[inline]
    pub fn primitive(&self) -> Felt {
        Felt(self.0.primitive)
    }

    pub fn elem(&self, bits: u32) -> Result<Felt> {
        if bits >= self.0.q {
            return Err(Error::ElementOutOfRange { bits, q: self.0.q });
        }
        Ok(Felt(bits))
    }

    /// All elements in bit-encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.0.q).map(Felt)
    }

    /// Non-zero elements in bit-encoding order; this is the fixed
    /// enumeration of `F*` used for dense indexing.
    pub fn nonzero(&self) -> impl Iterator<Item = Felt> + Clone {
        (1..self.0.q).map(Felt)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        Felt(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        Felt(rng.gen_range(1..self.0.q))
    }

    #[inline]
    pub fn mul(&self, x: Felt, y: Felt) -> Felt {
        match &self.0.tables {
            Some(t) => {
                if x.0 == 0 || y.0 == 0 {
                    Felt::ZERO
                } else {
                    Felt(t.exp[(t.log[x.0 as usize] + t.log[y.0 as usize]) as usize])
                }
            }
            None => Felt(schoolbook_mul(self.0.m, self.0.red_poly, x.0, y.0)),
        }
    }

    #[inline]
    pub fn square(&self, x: Felt) -> Felt {
        self.mul(x, x)
    }

    /// `x^e` for a non-negative exponent; `0^0 = 1`.
    pub fn pow_u(&self, x: Felt, e: u64) -> Felt {
        if x.is_zero() {
            return if e == 0 { Felt::ONE } else { Felt::ZERO };
        }
        let order = self.group_order();
        let e = e % order;
        if let Some(t) = &self.0.tables {
            let k = (t.log[x.0 as usize] as u64 * e) % order;
            return Felt(t.exp[k as usize]);
        }
        let mut base = x;
        let mut acc = Felt::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` for any integer exponent; non-zero bases reduce `e` modulo `q-1`.
    pub fn pow(&self, x: Felt, e: i64) -> Result<Felt> {
        if x.is_zero() && e < 0 {
            return Err(Error::ZeroInverse);
        }
        if x.is_zero() {
            return Ok(self.pow_u(x, e as u64));
        }
        let order = self.group_order() as i64;
        Ok(self.pow_u(x, e.rem_euclid(order) as u64))
    }

    pub fn inv(&self, x: Felt) -> Result<Felt> {
        self.pow(x, -1)
    }

    /// Inverse of an element the caller knows is non-zero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, x: Felt) -> Felt {
        debug_assert!(!x.is_zero());
        self.pow_u(x, self.group_order() - 1)
    }

    /// The Tits automorphism `x -> x^omega`, as `n + 1` squarings.
    pub fn sigma(&self, x: Felt) -> Felt {
        (0..=self.0.n).fold(x, |acc, _| self.square(acc))
    }

    /// The unique square root, `x^(2^(m-1))`.
    pub fn sqrt(&self, x: Felt) -> Felt {
        (0..self.0.m - 1).fold(x, |acc, _| self.square(acc))
    }

    /// `f(x, y) = x^(omega+2) + x y + y^omega`.
    pub fn f(&self, x: Felt, y: Felt) -> Felt {
        let w = self.0.omega as u64;
        self.pow_u(x, w + 2) + self.mul(x, y) + self.pow_u(y, w)
    }

    /// Discrete log to the base [`FieldCtx::primitive`].
    pub fn log(&self, x: Felt) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        if let Some(t) = &self.0.tables {
            return Some(t.log[x.0 as usize]);
        }
        let g = self.primitive();
        let mut cur = Felt::ONE;
        for k in 0..self.group_order() as u32 {
            if cur == x {
                return Some(k);
            }
            cur = self.mul(cur, g);
        }
        None
    }

    /// `primitive^k`.
    pub fn exp(&self, k: u64) -> Felt {
        self.pow_u(self.primitive(), k)
    }

    /// Raw tables for hot loops: `(log, exp)` with `exp` of length
    /// `2(q-1)`. `None` above the table threshold.
    pub(crate) fn tables(&self) -> Option<(&[u32], &[u32])> {
        self.0
            .tables
            .as_ref()
            .map(|t| (t.log.as_slice(), t.exp.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    /// Irreducibles of degree `m` as the complement of all products of two
    /// lower-degree polynomials.
    fn irreducibles_by_sieve(m: u32) -> BTreeSet<u64> {
        let mut reducible = BTreeSet::new();
        for da in 1..m {
            let db = m - da;
            for a in (1u64 << da)..(1u64 << (da + 1)) {
                for b in (1u64 << db)..(1u64 << (db + 1)) {
                    let mut prod = 0u64;
                    for i in 0..=db {
                        if b >> i & 1 == 1 {
                            prod ^= a << i;
                        }
                    }
                    reducible.insert(prod);
                }
            }
        }
        ((1u64 << m)..(1u64 << (m + 1)))
            .filter(|p| !reducible.contains(p))
            .collect()
    }

    #[test]
    fn smallest_irreducible_matches_sieve() {
        let s3 = irreducibles_by_sieve(3);
        let s5 = irreducibles_by_sieve(5);
        assert_eq!(s3.iter().copied().collect::<Vec<_>>(), vec![0b1011, 0b1101]);
        assert_eq!(*s3.first().unwrap(), 0b1011);
        assert_eq!(*s5.first().unwrap(), 0b100101);
        for m in [3, 5, 7] {
            let sieve = irreducibles_by_sieve(m);
            let trial: BTreeSet<u64> = ((1u64 << m)..(1u64 << (m + 1)))
                .filter(|&p| is_irreducible(p, m))
                .collect();
            assert_eq!(sieve, trial, "m = {m}");
        }
    }

    #[test]
    fn field_setup() {
        let f8 = FieldCtx::new(3).unwrap();
        assert_eq!((f8.q(), f8.omega(), f8.red_poly()), (8, 4, 0b1011));
        let f32 = FieldCtx::new(5).unwrap();
        assert_eq!((f32.q(), f32.omega(), f32.red_poly()), (32, 8, 0b100101));
        for m in [3, 5, 7, 9, 11, 13, 15, 17, 19, 21] {
            let ctx = FieldCtx::new(m).unwrap();
            assert_eq!(
                (ctx.omega() as u64).pow(2),
                2 * ctx.q() as u64,
                "omega^2 = 2q for m = {m}"
            );
        }
        assert!(matches!(FieldCtx::new(4), Err(Error::EvenDegree(4))));
        assert!(matches!(FieldCtx::new(1), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(FieldCtx::new(23), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(
            FieldCtx::with_poly(3, 0b1111),
            Err(Error::NotIrreducible { .. })
        ));
        assert_eq!(poly_to_string(0b100101), "x^5+x^2+1");
    }

    #[test]
    fn mul_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        for y in ctx.elements() {
            assert_eq!(ctx.mul(Felt::ZERO, y), Felt::ZERO);
        }
        assert_eq!(ctx.mul(Felt::ONE, Felt(5)), Felt(5));
        assert_eq!(ctx.mul(Felt(0b010), Felt(0b100)), Felt(0b011));
        assert_eq!(schoolbook_mul(3, 0b1011, 0b010, 0b100), 0b011);
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        for m in [3, 5] {
            let ctx = FieldCtx::new(m).unwrap();
            for x in ctx.elements() {
                for y in ctx.elements() {
                    assert_eq!(
                        ctx.mul(x, y).bits(),
                        schoolbook_mul(m, ctx.red_poly(), x.bits(), y.bits())
                    );
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [7, 9, 13] {
            let ctx = FieldCtx::new(m).unwrap();
            for _ in 0..5000 {
                let (x, y) = (ctx.random(&mut rng), ctx.random(&mut rng));
                assert_eq!(
                    ctx.mul(x, y).bits(),
                    schoolbook_mul(m, ctx.red_poly(), x.bits(), y.bits())
                );
            }
        }
    }

    #[test]
    fn pow_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        for x in ctx.nonzero() {
            assert_eq!(ctx.pow(x, 7).unwrap(), Felt::ONE);
            assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Felt::ONE);
        }
        let a = Felt(0b010);
        let repeated = ctx.mul(ctx.mul(a, a), a);
        assert_eq!(repeated, Felt(0b011));
        assert_eq!(ctx.pow(a, 3).unwrap(), repeated);
        assert_eq!(ctx.pow(a, -4).unwrap(), repeated);
        assert_eq!(ctx.pow(Felt::ZERO, 0).unwrap(), Felt::ONE);
        assert_eq!(ctx.pow(Felt::ZERO, 5).unwrap(), Felt::ZERO);
        assert!(matches!(ctx.pow(Felt::ZERO, -1), Err(Error::ZeroInverse)));
        assert!(ctx.inv(Felt::ZERO).is_err());
    }

    #[test]
    fn sigma_and_sqrt_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(ctx.sigma(Felt::ZERO), Felt::ZERO);
        assert_eq!(ctx.sigma(Felt::ONE), Felt::ONE);
        // x^4 = x^2 + x under x^3 + x + 1
        assert_eq!(ctx.sigma(Felt(0b010)), Felt(0b110));
        assert_eq!(ctx.sqrt(Felt::ZERO), Felt::ZERO);
        assert_eq!(ctx.sqrt(Felt::ONE), Felt::ONE);
        let target = Felt(0b110);
        let found: Vec<Felt> = ctx
            .elements()
            .filter(|&y| schoolbook_mul(3, 0b1011, y.bits(), y.bits()) == target.bits())
            .collect();
        assert_eq!(found, vec![Felt(0b100)]);
        assert_eq!(ctx.sqrt(target), Felt(0b100));
    }

    #[test]
    fn f_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(ctx.f(Felt::ZERO, Felt::ZERO), Felt::ZERO);
        assert_eq!(ctx.f(Felt::ONE, Felt::ONE), Felt::ONE);
        let sb = |x: u32, y: u32| schoolbook_mul(3, 0b1011, x, y);
        let (x, y) = (0b010u32, 0b011u32);
        let x2 = sb(x, x);
        let x6 = sb(sb(x2, x2), x2);
        let y2 = sb(y, y);
        let y4 = sb(y2, y2);
        let expected = x6 ^ sb(x, y) ^ y4;
        assert_eq!(expected, 0b100);
        assert_eq!(ctx.f(Felt(x), Felt(y)), Felt(expected));
    }

    #[test]
    fn field_axioms_exhaustive_q8() {
        let ctx = FieldCtx::new(3).unwrap();
        for x in ctx.elements() {
            for y in ctx.elements() {
                assert_eq!(ctx.mul(x, y), ctx.mul(y, x));
                for z in ctx.elements() {
                    assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
                    assert_eq!(ctx.mul(x, y + z), ctx.mul(x, y) + ctx.mul(x, z));
                }
            }
        }
    }

    #[test]
    fn sigma_properties_exhaustive() {
        for m in [3, 5, 7] {
            let ctx = FieldCtx::new(m).unwrap();
            for x in ctx.elements() {
                assert_eq!(ctx.sigma(ctx.sigma(x)), ctx.square(x));
                assert_eq!(ctx.square(ctx.sqrt(x)), x);
                assert_eq!(ctx.sqrt(ctx.square(x)), x);
                assert_eq!(ctx.sigma(x), ctx.pow_u(x, ctx.omega() as u64));
            }
        }
    }

    #[test]
    fn power_map_omega_plus_two_is_bijective() {
        for m in [3, 5] {
            let ctx = FieldCtx::new(m).unwrap();
            let e = ctx.omega() as u64 + 2;
            let image: BTreeSet<Felt> = ctx.nonzero().map(|x| ctx.pow_u(x, e)).collect();
            assert_eq!(image.len() as u64, ctx.group_order(), "m = {m}");
        }
    }

    #[test]
    fn primitive_and_log() {
        for m in [3, 5, 7, 9] {
            let ctx = FieldCtx::new(m).unwrap();
            let g = ctx.primitive();
            let powers: BTreeSet<Felt> = (0..ctx.group_order()).map(|k| ctx.exp(k)).collect();
            assert_eq!(powers.len() as u64, ctx.group_order());
            assert!(ctx.nonzero().take_while(|&x| x < g).all(|x| {
                (1..ctx.group_order()).any(|k| ctx.pow_u(x, k) == Felt::ONE)
            }));
            for x in ctx.nonzero().take(50) {
                assert_eq!(ctx.exp(ctx.log(x).unwrap() as u64), x);
            }
        }
    }

    #[test]
    fn schoolbook_path_for_large_fields() {
        let ctx = FieldCtx::new(17).unwrap();
        assert!(ctx.tables().is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = ctx.random_nonzero(&mut rng);
            assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Felt::ONE);
            assert_eq!(ctx.sigma(ctx.sigma(x)), ctx.square(x));
        }
    }

    proptest! {
        #[test]
        fn sigma_is_an_automorphism(m in prop::sample::select(vec![3u32, 5, 7]), x in 0u32..128, y in 0u32..128) {
            let ctx = FieldCtx::new(m).unwrap();
            let (x, y) = (Felt(x % ctx.q()), Felt(y % ctx.q()));
            prop_assert_eq!(ctx.sigma(x + y), ctx.sigma(x) + ctx.sigma(y));
            prop_assert_eq!(ctx.sigma(ctx.mul(x, y)), ctx.mul(ctx.sigma(x), ctx.sigma(y)));
        }

        #[test]
        fn random_field_axioms(m in prop::sample::select(vec![5u32, 7]), x in 0u32..128, y in 1u32..128, z in 0u32..128) {
            let ctx = FieldCtx::new(m).unwrap();
            let (x, y, z) = (Felt(x % ctx.q()), Felt(1 + (y - 1) % (ctx.q() - 1)), Felt(z % ctx.q()));
            prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
            prop_assert_eq!(ctx.mul(z, x + y), ctx.mul(z, x) + ctx.mul(z, y));
            prop_assert_eq!(ctx.mul(y, ctx.inv(y).unwrap()), Felt::ONE);
        }
    }
}
