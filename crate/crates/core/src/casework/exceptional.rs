use crate::charsum::ell_p;
use crate::error::Result;
use crate::modarith::{cube_plus_mod, pow3};
use crate::report::{params, MemorySink, Params, VerificationRecord};
use crate::sweep::{run_suites, Outcome, Scratch, Suite};

/// `ℓ_7(3^r)` next to the value the residue of `r mod 3` predicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ell7Row {
    pub r: u32,
    pub ell: u64,
    pub predicted: u64,
}

/// `2, 3, 1` for `r = 0, 1, 2 (mod 3)`.
pub fn ell7_predicted(r: u32) -> u64 {
    [2, 3, 1][(r % 3) as usize]
}

pub fn ell7_pattern(r_max: u32) -> Result<Vec<Ell7Row>> {
    (0..=r_max)
        .map(|r| {
            let delta = pow3(r % 6) % 7;
            Ok(Ell7Row { r, ell: ell_p(7, delta)?, predicted: ell7_predicted(r) })
        })
        .collect()
}

/// `ℓ_7(3^r)` for `r = 0..=r_max`.
pub struct Ell7Suite {
    pub r_max: u64,
}

impl Suite for Ell7Suite {
    fn id(&self) -> &str {
        "ell7_pattern"
    }

    fn tasks(&self) -> Vec<Params> {
        (0..=self.r_max).map(|r| params([("r", r)])).collect()
    }

    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let r = p["r"] as u32;
        match ell_p(7, pow3(r % 6) % 7) {
            Ok(ell) => Outcome::exact(ell, ell7_predicted(r)),
            Err(e) => Outcome::with_values(e.to_string(), ell7_predicted(r).to_string(), false),
        }
    }
}

/// Largest `s` whose modulus `7 · 3^(6s+4)` is scanned in full.
pub const FULL_SCAN_MAX_S: u64 = 1;

/// The checks showing no collision exists for `n = 3^(6s+5) + 1, + 2` modulo
/// `7 · 3^(6s+4)`.
pub struct ExceptionalSuite {
    pub s_max: u64,
}

impl Suite for ExceptionalSuite {
    fn id(&self) -> &str {
        "exceptional"
    }

    fn tasks(&self) -> Vec<Params> {
        let mut out = vec![params([("check", 0), ("s", 0)])];
        for s in 0..=self.s_max {
            for check in 1..=3 {
                out.push(params([("check", check), ("s", s)]));
            }
            if s == 0 {
                out.push(params([("check", 4), ("s", 0)]));
            }
            if (1..=FULL_SCAN_MAX_S).contains(&s) {
                out.push(params([("check", 5), ("s", s)]));
            }
        }
        out
    }

    fn evaluate(&self, p: &Params, scratch: &mut Scratch) -> Outcome {
        let s = p["s"] as u32;
        let r = 6 * s + 4;
        let m = 7 * pow3(r);
        let n = pow3(r + 1) + 2;
        match p["check"] {
            0 => Outcome::exact(three_adic_zeros(), 0),
            1 => Outcome::exact(ell_p(7, pow3(r % 6) % 7).map_or(0, |l| l), 3),
            2 => Outcome::exact(shift_multiplier_bound(r, n), 3),
            3 => {
                let (coef, constant, a_min) = reduced_quadratic(r);
                let ok = coef == 1 && constant == 5 && 3 + pow3(r + 1) > n;
                Outcome::with_values(format!("{a_min}"), "3".into(), ok && a_min == 3)
            }
            4 => Outcome::exact(pair_collisions(n - 1, m) + pair_collisions(n, m), 0),
            _ => {
                let hits = [n - 1, n].iter().filter(|&&n| !scratch.scanner.is_injective(n, m)).count();
                Outcome::exact(hits, 0)
            }
        }
    }
}

/// Pairs `(a, b)` mod 3 with `3 | a² + ab + b² + 1`.
pub fn three_adic_zeros() -> usize {
    (0..3u64).flat_map(|a| (0..3u64).map(move |b| (a, b))).filter(|&(a, b)| (a * a + a * b + b * b + 1) % 3 == 0).count()
}

/// Largest `c` with `1 + 3^r c <= n`.
pub fn shift_multiplier_bound(r: u32, n: u64) -> u64 {
    (n - 1) / pow3(r)
}

/// Reduces `3a² + 3^(r+2) a + 3^(2r+2) + 1 (mod 7)` to `3a² + coef·a + constant`
/// and returns `(coef, constant, smallest a >= 1 solving it)`.
pub fn reduced_quadratic(r: u32) -> (u64, u64, u64) {
    let coef = pow3((r + 2) % 6) % 7;
    let constant = (pow3((2 * r + 2) % 6) + 1) % 7;
    let a_min = (1..=7u64).find(|a| (3 * a * a + coef * a + constant) % 7 == 0).unwrap_or(0);
    (coef, constant, a_min)
}

/// `3a² + a + 5 mod 7` for `a = 1, 2, 3`.
pub fn reduced_values() -> [u64; 3] {
    [1u64, 2, 3].map(|a| (3 * a * a + a + 5) % 7)
}

/// Collisions among `1..=n` modulo `m`, by checking every pair directly.
pub fn pair_collisions(n: u64, m: u64) -> usize {
    let residues: Vec<u64> = (1..=n).map(|a| cube_plus_mod(a, m)).collect();
    let mut hits = 0;
    for i in 0..residues.len() {
        for j in i + 1..residues.len() {
            hits += (residues[i] == residues[j]) as usize;
        }
    }
    hits
}

pub fn exceptional_no_collision(s_max: u64) -> Result<Vec<VerificationRecord>> {
    let mut sink = MemorySink::default();
    run_suites(&[&ExceptionalSuite { s_max }], 1, &[], &mut sink)?;
    Ok(sink.records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminator::InjectivityScanner;

    #[test]
    fn ell7_examples() {
        let rows = ell7_pattern(20).unwrap();
        assert_eq!(rows[0].ell, 2);
        assert_eq!(rows[1].ell, 3);
        assert_eq!(rows[2].ell, 1);
        assert!(rows.iter().all(|row| row.ell == row.predicted));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduced_values(), [2, 5, 0]);
        for s in 0..=5 {
            assert_eq!(reduced_quadratic(6 * s + 4), (1, 5, 3));
            assert_eq!(shift_multiplier_bound(6 * s + 4, pow3(6 * s + 5) + 2), 3);
        }
        assert_eq!(three_adic_zeros(), 0);
    }

    #[test]
    fn small_exceptional_instance() {
        assert_eq!(pair_collisions(245, 567), 0);
        assert!(pair_collisions(246, 567) > 0);
        assert!(InjectivityScanner::new().is_injective(245, 567));
    }

    #[test]
    fn suite_passes() {
        let records = exceptional_no_collision(3).unwrap();
        assert!(records.iter().all(|r| r.pass), "{records:?}");
        assert_eq!(records.len(), 1 + 3 * 4 + 1 + 1);
    }
}
