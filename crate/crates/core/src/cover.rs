//! Inverse-closed subsets `X` of `Z_m` with `Z_m = {0} ∪ X ∪ (X + X)`, i.e.
//! connection sets of diameter-2 Cayley graphs of cyclic groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::{FieldCtx, Felt};

/// Largest `m` accepted by exact search.
pub const EXACT_MAX_M: u64 = 512;
/// Search-node budget for exact mode under the default budget.
pub const DESK_NODE_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicCover {
    pub m: u64,
    /// Sorted residues.
    pub elements: Vec<u64>,
    /// True when no smaller inverse-closed cover exists.
    pub exact: bool,
}

impl CyclicCover {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn covers(&self) -> bool {
        covers_zm(self.m, &self.elements)
    }

    pub fn is_inverse_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|&x| x != 0 && self.elements.binary_search(&((self.m - x) % self.m)).is_ok())
    }

    /// Whether the achieved size meets `2 ceil(sqrt(m))`.
    pub fn within_two_sqrt_bound(&self) -> bool {
        self.size() as u64 <= 2 * ceil_sqrt(self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    Exact,
    Bounded,
}

pub fn ceil_sqrt(m: u64) -> u64 {
    let mut t = (m as f64).sqrt() as u64;
    while t * t < m {
        t += 1;
    }
    while t > 0 && (t - 1) * (t - 1) >= m {
        t -= 1;
    }
    t
}

/// Direct test of `Z_m = {0} ∪ X ∪ (X + X)`.
pub fn covers_zm(m: u64, xs: &[u64]) -> bool {
    let mut hit = vec![false; m as usize];
    hit[0] = true;
    for &x in xs {
        hit[(x % m) as usize] = true;
        for &y in xs {
            hit[((x + y) % m) as usize] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

fn inverse_closure(m: u64, xs: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut out: Vec<u64> = xs
        .into_iter()
        .map(|x| x % m)
        .filter(|&x| x != 0)
        .flat_map(|x| [x, m - x])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn cyclic_cover_find(m: u64, mode: CoverMode) -> Result<CyclicCover> {
    match mode {
        CoverMode::Exact => exact_cover(m, DESK_NODE_BUDGET),
        CoverMode::Bounded => bounded_cover(m),
    }
}

/// Balanced digit set `{±b : 1 <= b <= k} ∪ {±a(2k+1) : 1 <= a <= A}` with
/// `(2k+1)(2A+1) >= m` and `k + A` minimal, greedily pruned while the cover
/// property holds. Every residue is `a(2k+1) + b` with `|a| <= A`, `|b| <= k`.
pub fn bounded_cover(m: u64) -> Result<CyclicCover> {
    if m < 3 {
        return Err(Error::CoverOrderTooSmall(m));
    }
    let (k, big_a) = (0..=m / 2)
        .map(|k| {
            let s = 2 * k + 1;
            // smallest A with s (2A + 1) >= m
            let a = (m.div_ceil(s)).saturating_sub(1).div_ceil(2);
            (k, a)
        })
        .min_by_key(|&(k, a)| (k + a, k))
        .expect("non-empty range");
    let s = 2 * k + 1;
    let mut xs = inverse_closure(m, (1..=k).chain((1..=big_a).map(|a| a * s)));
    debug_assert!(covers_zm(m, &xs));
    // Try dropping each inverse pair, largest representative first.
    let mut reps: Vec<u64> = xs.iter().copied().filter(|&x| 2 * x <= m).collect();
    reps.reverse();
    for h in reps {
        let trial: Vec<u64> = xs.iter().copied().filter(|&x| x != h && x != m - h).collect();
        if covers_zm(m, &trial) {
            xs = trial;
        }
    }
    Ok(CyclicCover {
        m,
        elements: xs,
        exact: false,
    })
}

struct Search {
    m: usize,
    halves: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl Search {
    /// Chooses `pairs` more half-representatives from `halves[from..]`.
    fn extend(
        &mut self,
        from: usize,
        pairs: usize,
        xs: &mut Vec<u64>,
        hit: &mut Vec<u16>,
        final_size: usize,
    ) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudget {
                m: self.m as u64,
                reason: format!("more than {} search nodes", self.budget),
            });
        }
        let uncovered = hit.iter().filter(|&&h| h == 0).count();
        if pairs == 0 {
            return Ok(uncovered == 0);
        }
        // Each new pair covers itself and its sums with the final set.
        if uncovered > pairs * (2 + 2 * final_size) {
            return Ok(false);
        }
        for i in from..self.halves.len() {
            if self.halves.len() - i < pairs {
                break;
            }
            let h = self.halves[i];
            let added = self.add(h, xs, hit);
            if self.extend(i + 1, pairs - 1, xs, hit, final_size)? {
                return Ok(true);
            }
            self.remove(added, xs, hit);
        }
        Ok(false)
    }

    fn add(&self, h: u64, xs: &mut Vec<u64>, hit: &mut [u16]) -> usize {
        let m = self.m as u64;
        let before = xs.len();
        let pair: Vec<u64> = if 2 * h == m { vec![h] } else { vec![h, m - h] };
        for &x in &pair {
            xs.push(x);
            let n = xs.len();
            for k in 0..n {
                hit[((x + xs[k]) % m) as usize] += 1;
            }
            hit[x as usize] += 1;
        }
        xs.len() - before
    }

    fn remove(&self, count: usize, xs: &mut Vec<u64>, hit: &mut [u16]) {
        let m = self.m as u64;
        for _ in 0..count {
            let x = xs.pop().unwrap();
            hit[x as usize] -= 1;
            hit[((x + x) % m) as usize] -= 1;
            for &y in xs.iter() {
                hit[((x + y) % m) as usize] -= 1;
            }
        }
    }
}

/// Minimum-size inverse-closed cover by exhaustive search over positive
/// halves, smallest sizes first; the witness is the lexicographically least
/// half-subset of minimum size.
pub fn exact_cover(m: u64, node_budget: u64) -> Result<CyclicCover> {
    if m < 3 {
        return Err(Error::CoverOrderTooSmall(m));
    }
    if m > EXACT_MAX_M {
        return Err(Error::SearchBudget {
            m,
            reason: format!("exact mode supports m <= {EXACT_MAX_M}"),
        });
    }
    let halves: Vec<u64> = (1..=m / 2).collect();
    let even = m.is_multiple_of(2);
    let mut search = Search {
        m: m as usize,
        halves,
        nodes: 0,
        budget: node_budget,
    };
    let mut c = 1usize;
    // |{0} ∪ X ∪ (X+X)| <= 1 + c + c(c+1)/2
    while 1 + c + c * (c + 1) / 2 < m as usize {
        c += 1;
    }
    loop {
        let with_middle = c % 2 == 1;
        if !with_middle || even {
            let mut xs = Vec::with_capacity(c);
            let mut hit = vec![0u16; m as usize];
            hit[0] = 1;
            let pairs = c / 2;
            if with_middle {
                let added = search.add(m / 2, &mut xs, &mut hit);
                debug_assert_eq!(added, 1);
            }
            // The middle element is handled above; exclude it from pairs.
            let saved = std::mem::take(&mut search.halves);
            search.halves = saved.iter().copied().filter(|&h| 2 * h != m).collect();
            let found = search.extend(0, pairs, &mut xs, &mut hit, c);
            search.halves = saved;
            if found? {
                xs.sort_unstable();
                return Ok(CyclicCover {
                    m,
                    elements: xs,
                    exact: true,
                });
            }
        }
        c += 1;
    }
}

/// `{g0^j : j in X}` for the smallest primitive element `g0`, re-verified as
/// a diameter-2 connection set of `F*`.
pub fn realize_in_fstar(ctx: &FieldCtx, cover: &CyclicCover) -> Result<Vec<Felt>> {
    let order = ctx.group_order();
    if cover.m != order {
        return Err(Error::CoverOrderMismatch {
            got: cover.m,
            expected: order,
        });
    }
    let set: Vec<Felt> = cover.elements.iter().map(|&j| ctx.exp(j)).collect();
    let mut hit = vec![false; ctx.q() as usize];
    hit[1] = true;
    for &x in &set {
        hit[x.bits() as usize] = true;
        for &y in &set {
            hit[ctx.mul(x, y).bits() as usize] = true;
        }
    }
    if !hit[1..].iter().all(|&h| h) {
        return Err(Error::InvalidGenerators(
            "realised cover does not reach all of F* in two steps".into(),
        ));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Minimum cover size by brute force over every inverse-closed subset.
    fn brute_force_min(m: u64) -> usize {
        let halves: Vec<u64> = (1..=m / 2).collect();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << halves.len()) {
            let xs = inverse_closure(
                m,
                halves
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &h)| h),
            );
            if xs.len() < best && covers_zm(m, &xs) {
                best = xs.len();
            }
        }
        best
    }

    #[test]
    fn small_examples() {
        let c3 = cyclic_cover_find(3, CoverMode::Exact).unwrap();
        assert_eq!(c3.elements, vec![1, 2]);
        let c7 = cyclic_cover_find(7, CoverMode::Exact).unwrap();
        assert_eq!(c7.size(), brute_force_min(7));
        assert_eq!(c7.size(), 4);
        assert!(c7.covers() && c7.is_inverse_closed() && c7.exact);
        assert!(matches!(cyclic_cover_find(2, CoverMode::Exact), Err(Error::CoverOrderTooSmall(2))));
        assert!(matches!(cyclic_cover_find(2, CoverMode::Bounded), Err(Error::CoverOrderTooSmall(2))));
    }

    #[test]
    fn exact_is_minimal_up_to_31() {
        for m in 3..=31 {
            let c = exact_cover(m, DESK_NODE_BUDGET).unwrap();
            assert!(c.covers() && c.is_inverse_closed(), "m = {m}");
            assert_eq!(c.size(), brute_force_min(m), "m = {m}");
            assert!(c.within_two_sqrt_bound(), "m = {m}");
        }
    }

    #[test]
    fn bounded_127() {
        let c = cyclic_cover_find(127, CoverMode::Bounded).unwrap();
        assert!(c.covers() && c.is_inverse_closed());
        assert!(c.size() <= 24, "size {}", c.size());
    }

    #[test]
    fn exact_budget_is_enforced() {
        assert!(matches!(exact_cover(513, DESK_NODE_BUDGET), Err(Error::SearchBudget { .. })));
        assert!(matches!(exact_cover(127, 1000), Err(Error::SearchBudget { .. })));
    }

    #[test]
    fn realize_q8() {
        let ctx = FieldCtx::new(3).unwrap();
        let c = exact_cover(7, DESK_NODE_BUDGET).unwrap();
        let set = realize_in_fstar(&ctx, &c).unwrap();
        let distinct: std::collections::BTreeSet<Felt> = set.iter().copied().collect();
        assert_eq!(distinct.len(), c.size());
        assert!(!distinct.contains(&Felt::ONE));
        for &j in &c.elements {
            let x = ctx.exp(j);
            let y = ctx.exp(7 - j);
            assert_eq!(ctx.mul(x, y), Felt::ONE);
            assert!(distinct.contains(&ctx.inv(x).unwrap()));
        }
        assert!(realize_in_fstar(&ctx, &exact_cover(8, DESK_NODE_BUDGET).unwrap()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bounded_covers_within_four_sqrt(m in 3u64..600) {
            let c = bounded_cover(m).unwrap();
            prop_assert!(c.covers());
            prop_assert!(c.is_inverse_closed());
            prop_assert!(c.size() as u64 <= 4 * ceil_sqrt(m));
            prop_assert!(c.within_two_sqrt_bound());
        }
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(127), 12);
        assert_eq!(ceil_sqrt(144), 12);
        assert_eq!(ceil_sqrt(145), 13);
        assert_eq!(ceil_sqrt(1), 1);
    }
}
