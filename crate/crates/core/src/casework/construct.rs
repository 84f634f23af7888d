use serde::Serialize;

use super::classify::CaseTag;
use super::counting::PairCounter;
use crate::discriminator::{exceptional_s, CollisionWitness};
use crate::error::{Error, Result};
use crate::modarith::{ceil_log3, cube_plus_mod, mul_mod, pow3, reduce, solve_quadratic_mod_2r, QuadraticCongruence};

/// How a witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Route {
    /// A fixed pair such as `(1, 2)` or `(1, 3)`.
    SmallExplicit,
    /// `b = a + δc` with `a` a root of `3a² + 3δca + δ²c² + 1 (mod p^r)`.
    ShiftedQuadratic,
    /// `a = x - 2`, `b = x + 2` with `3x² + 5 = 0 (mod 2^(r-2))`.
    TwoAdicSquare,
    /// `b = a + t` with `a` a 2-adic root of `3a² + 3ta + t² + 1`.
    TwoAdicShift,
    /// `b = a + 3^(r+1)` modulo `7 · 3^r`.
    ThreeAdicShift,
    /// `(δa, δb)` with `δ²(a² + ab + b²) + 1 = 0 (mod p^t)`, `a, b <= ⌊p/3⌋p^(t-1)`.
    ScaledPair,
    /// Any colliding pair below `1 + 3^(k-1)`.
    WindowEnumeration,
    /// Sort-based search over `1..=n`; used only when the recipe misses.
    ExhaustiveFallback,
}

impl Route {
    pub const ALL: [Route; 8] = [
        Route::SmallExplicit,
        Route::ShiftedQuadratic,
        Route::TwoAdicSquare,
        Route::TwoAdicShift,
        Route::ThreeAdicShift,
        Route::ScaledPair,
        Route::WindowEnumeration,
        Route::ExhaustiveFallback,
    ];

    pub fn code(self) -> u64 {
        Route::ALL.iter().position(|&r| r == self).unwrap() as u64
    }
}

// Largest `n` the sort-based fallback will enumerate.
const EXHAUSTIVE_LIMIT: u64 = 1 << 26;

// Cap on the number of `a` values the scaled-pair recipe tries.
const SCALED_PAIR_TRIES: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub witness: CollisionWitness,
    pub route: Route,
}

/// Builds a collision `a < b <= n` modulo `m` by the recipe for `tag`.
///
/// Returns `None` only when no pair exists: either `m = 7 · 3^(6s+4)` with
/// `n = 3^(6s+5) + 1` or `+ 2`, or the exhaustive fallback also finds nothing.
pub fn construct_collision(m: u64, n: u64, tag: &CaseTag) -> Result<Option<Construction>> {
    if tag.modulus() != m {
        return Err(Error::OutOfRange(format!("tag {tag} does not describe m = {m}")));
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let found = match *tag {
        CaseTag::PowerOfThree { j } => {
            return Err(Error::ConstructionInapplicable(format!("m = 3^{j} is never a collision modulus")))
        }
        CaseTag::CaseI { delta, p } => shifted_quadratic(delta, p, 1, n),
        CaseTag::CaseII { delta, p, r } => shifted_quadratic(delta, p, r, n),
        CaseTag::CaseIII { r } => power_of_two(r),
        CaseTag::CaseIV { r, t } => two_adic_shift(r, t),
        CaseTag::CaseV { r, s } => two_three(r, s),
        CaseTag::CaseVI { r: 0 } => explicit(1, 3),
        CaseTag::CaseVI { r } => shifted_quadratic(2 * pow3(r), 7, 1, n),
        CaseTag::CaseVII { delta, p, t } => {
            scaled_pair(delta, p, t).or_else(|| window_enumeration(m, n))
        }
        CaseTag::CaseVIII { r } => match r % 6 {
            0 if r == 0 => explicit(1, 3),
            1 => Some((1, 1 + pow3(r + 1), Route::ThreeAdicShift)),
            4 => Some((3, 3 + pow3(r + 1), Route::ThreeAdicShift)),
            _ => shifted_quadratic(pow3(r), 7, 1, n),
        },
    };

    if let Some((a, b, route)) = found {
        let witness = CollisionWitness { a, b, m };
        if b <= n && witness.verify_factored() {
            debug_assert!(witness.verify(), "{witness:?}");
            return Ok(Some(Construction { witness, route }));
        }
    }
    if let CaseTag::CaseVIII { r } = *tag {
        if exceptional_s(n).is_some_and(|s| r == 6 * s + 4) {
            return Ok(None);
        }
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::BudgetExceeded { needed: n as u128, budget: EXHAUSTIVE_LIMIT as u128 });
    }
    Ok(exhaustive(m, n).map(|witness| Construction { witness, route: Route::ExhaustiveFallback }))
}

fn explicit(a: u64, b: u64) -> Option<(u64, u64, Route)> {
    Some((a, b, Route::SmallExplicit))
}

/// Scans `c = 1, 2, ..., (p-1)/2` for the first shift `δc` admitting a root
/// `a` of `3a² + 3δca + δ²c² + 1 (mod p^r)` with `a + δc <= n`; smallest `a`
/// wins. Shifts below `ℓ_p(δ)` have no root, so the scan meets `ℓ_p(δ)` first.
fn shifted_quadratic(delta: u64, p: u64, r: u32, n: u64) -> Option<(u64, u64, Route)> {
    let q = p.pow(r);
    for c in 1..=(p - 1) / 2 {
        let shift = delta.checked_mul(c)?;
        if shift >= n {
            break;
        }
        let s = shift % q;
        let eq = QuadraticCongruence::new(3, 3 * s as i128, mul_mod(s, s, q) as i128 + 1, p, r).ok()?;
        let best = eq
            .solutions()
            .ok()?
            .into_iter()
            .map(|x| if x == 0 { q } else { x })
            .filter(|&a| a + shift <= n)
            .min();
        if let Some(a) = best {
            return Some((a, a + shift, Route::ShiftedQuadratic));
        }
    }
    None
}

fn power_of_two(r: u32) -> Option<(u64, u64, Route)> {
    match r {
        0..=3 => explicit(1, 2),
        4..=7 => explicit(1, 5),
        _ => {
            let x = solve_quadratic_mod_2r(r - 2).ok()?;
            Some((x - 2, x + 2, Route::TwoAdicSquare))
        }
    }
}

/// Both roots in `[0, 2^r)` of `3a² + 3ta + t² + 1 = 0 (mod 2^r)` for odd `t`.
///
/// The derivative `6a + 3t` is odd, so each bit is fixed by one test.
pub fn odd_shift_roots(t: u64, r: u32) -> [u64; 2] {
    assert!(t % 2 == 1 && (1..=63).contains(&r));
    let value = |a: u64, bits: u32| {
        let (a, t) = (a as u128, t as u128);
        let v = (3 * a * a).wrapping_add(3u128.wrapping_mul(t).wrapping_mul(a)).wrapping_add(t.wrapping_mul(t)).wrapping_add(1);
        v & ((1u128 << bits) - 1)
    };
    [0u64, 1].map(|start| {
        let mut a = start;
        for k in 1..r {
            if value(a, k + 1) != 0 {
                a += 1 << k;
            }
        }
        a
    })
}

fn two_adic_shift(r: u32, t: u64) -> Option<(u64, u64, Route)> {
    let q = 1u64 << r;
    let a = odd_shift_roots(t, r).into_iter().map(|x| if x == 0 { q } else { x }).min()?;
    Some((a, a.checked_add(t)?, Route::TwoAdicShift))
}

fn two_three(r: u32, s: u32) -> Option<(u64, u64, Route)> {
    match (r, s) {
        (1, s) => explicit(1, 1 + pow3(s)),
        (2..=3, 1) => explicit(2, 5),
        (_, 1) => two_adic_shift(r, 3),
        (_, s) => two_adic_shift(r, pow3(s)),
    }
}

/// Pairs `a != b` in `[1, X]`, `X = ⌊p/3⌋p^(t-1)`, solving
/// `δ²(a² + ab + b²) + 1 = 0 (mod p^t)`; the witness is `(δa, δb)`.
fn scaled_pair(delta: u64, p: u64, t: u32) -> Option<(u64, u64, Route)> {
    let q = p.pow(t);
    let x_bound = (p / 3) * p.pow(t - 1);
    let d2 = (delta * delta) as i128;
    for a in 1..=x_bound.min(SCALED_PAIR_TRIES) {
        let a_q = (a % q) as i128;
        let c = reduce(d2 * a_q % q as i128 * a_q + 1, q) as i128;
        let eq = QuadraticCongruence::new(d2, d2 * a_q, c, p, t).ok()?;
        let partner = eq
            .solutions()
            .ok()?
            .into_iter()
            .map(|b| if b == 0 { q } else { b })
            .filter(|&b| b != a && b <= x_bound)
            .min();
        if let Some(b) = partner {
            let (lo, hi) = (a.min(b), a.max(b));
            return Some((delta * lo, delta * hi, Route::ScaledPair));
        }
    }
    None
}

fn window_enumeration(m: u64, n: u64) -> Option<(u64, u64, Route)> {
    if n > EXHAUSTIVE_LIMIT {
        return None;
    }
    let bound = (1 + pow3(ceil_log3(m).saturating_sub(1))).min(n);
    let (_, w) = PairCounter::default().count_pairs(bound, m);
    w.map(|w| (w.a, w.b, Route::WindowEnumeration))
}

/// The collision `(a, b)` with the smallest `b`, by sorting residues.
fn exhaustive(m: u64, n: u64) -> Option<CollisionWitness> {
    let mut residues: Vec<(u64, u64)> = (1..=n).map(|a| (cube_plus_mod(a, m), a)).collect();
    residues.sort_unstable();
    residues
        .windows(2)
        .filter(|w| w[0].0 == w[1].0)
        .map(|w| CollisionWitness { a: w[0].1, b: w[1].1, m })
        .min_by_key(|w| (w.b, w.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casework::classify::{classify, window};
    use crate::discriminator::find_collision;
    use crate::modarith::factorize;

    fn build(m: u64, n: u64) -> Option<Construction> {
        let tag = classify(&factorize(m), n).unwrap();
        construct_collision(m, n, &tag).unwrap()
    }

    #[test]
    fn construction_examples() {
        let c = construct_collision(8, 8, &CaseTag::CaseIII { r: 3 }).unwrap().unwrap();
        assert_eq!((c.witness.a, c.witness.b, c.route), (1, 2, Route::SmallExplicit));
        let c = construct_collision(14, 5, &CaseTag::CaseVI { r: 0 }).unwrap().unwrap();
        assert_eq!((c.witness.a, c.witness.b), (1, 3));
        assert_eq!(build(567, 245), None);
        assert_eq!(build(567, 244), None);
        assert!(matches!(
            construct_collision(27, 20, &CaseTag::PowerOfThree { j: 3 }),
            Err(Error::ConstructionInapplicable(_))
        ));
        assert!(construct_collision(28, 20, &CaseTag::CaseIII { r: 3 }).is_err());
    }

    #[test]
    fn two_adic_roots_solve_the_quadratic() {
        for t in (1..200u64).step_by(2) {
            for r in 1..=20 {
                let q = 1u128 << r;
                for a in odd_shift_roots(t, r) {
                    let (a, t) = (a as u128, t as u128);
                    assert_eq!((3 * a * a + 3 * t * a + t * t + 1) % q, 0);
                }
            }
        }
    }

    #[test]
    fn every_window_below_800_has_a_verified_witness() {
        for n in 1..=800u64 {
            let (lo, hi) = window(n);
            for m in lo..hi {
                let tag = classify(&factorize(m), n).unwrap();
                if tag.index() == 0 {
                    continue;
                }
                let built = construct_collision(m, n, &tag).unwrap();
                let oracle = find_collision(n, m);
                assert_eq!(built.is_some(), oracle.is_some(), "n={n} m={m}");
                if let Some(c) = built {
                    assert!(c.witness.verify() && c.witness.within(n), "n={n} m={m} {c:?}");
                } else {
                    assert!(exceptional_s(n).is_some() && m == 567, "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn explicit_witnesses_for_large_moduli() {
        // 2^40 and 2^20 * 3^5 exceed any window scan.
        for (m, tag) in [
            (1u64 << 40, CaseTag::CaseIII { r: 40 }),
            ((1 << 20) * 243, CaseTag::CaseV { r: 20, s: 5 }),
            ((1 << 30) * 3, CaseTag::CaseV { r: 30, s: 1 }),
            (7 * pow3(25), CaseTag::CaseVIII { r: 25 }),
        ] {
            let c = construct_collision(m, m, &tag).unwrap().unwrap();
            assert_ne!(c.route, Route::ExhaustiveFallback, "{tag}");
            assert!(c.witness.verify(), "{tag}");
        }
    }
}
