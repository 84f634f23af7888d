use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::modarith::is_prime;

/// An element of `ℤ[ζ_q]`, `q = p^j` with `p` an odd prime, stored as the
/// coefficient vector of `e(0/q), e(1/q), ..., e((q-1)/q)`.
///
/// The vector is kept canonical: for every residue `r < q/p`, the relation
/// `Σ_i e((r + i q/p)/q) = 0` is used to clear the coefficient at index `r`.
/// The surviving `φ(q)` coordinates form a ℤ-basis, so two elements are
/// equal iff their vectors are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u64,
    order: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn zero(p: u64, j: u32) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) || j == 0 {
            return Err(Error::NotOddPrime(p));
        }
        let order = p
            .checked_pow(j)
            .filter(|&q| q <= 1 << 24)
            .ok_or_else(|| Error::OutOfRange(format!("order {p}^{j} too large")))?;
        Ok(CyclotomicInt { p, order, coeffs: vec![0; order as usize] })
    }

    /// Builds from raw (non-canonical) coefficients; `raw.len()` must be `p^j`.
    pub fn from_raw(p: u64, j: u32, raw: Vec<i64>) -> Result<Self> {
        let mut out = Self::zero(p, j)?;
        if raw.len() as u64 != out.order {
            return Err(Error::OutOfRange(format!(
                "expected {} coefficients, got {}",
                out.order,
                raw.len()
            )));
        }
        out.coeffs = raw;
        out.canonicalize();
        Ok(out)
    }

    /// The rational integer `value` viewed in `ℤ[ζ_q]`.
    pub fn rational(p: u64, j: u32, value: i64) -> Result<Self> {
        let mut out = Self::zero(p, j)?;
        out.coeffs[0] = value;
        out.canonicalize();
        Ok(out)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn stride(&self) -> usize {
        (self.order / self.p) as usize
    }

    fn canonicalize(&mut self) {
        let stride = self.stride();
        for r in 0..stride {
            let c = self.coeffs[r];
            if c != 0 {
                for idx in (r..self.coeffs.len()).step_by(stride) {
                    self.coeffs[idx] -= c;
                }
            }
        }
    }

    /// The integer value when the element is rational.
    pub fn rational_value(&self) -> Option<i64> {
        let stride = self.stride();
        let common = self.coeffs[stride];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let expected = if idx >= stride && idx % stride == 0 { common } else { 0 };
            if c != expected {
                return None;
            }
        }
        Some(-common)
    }

    pub fn is_rational(&self) -> bool {
        self.rational_value().is_some()
    }

    /// Complex conjugate: the Galois action `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let q = self.coeffs.len();
        let mut coeffs = vec![0; q];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            coeffs[(q - idx) % q] = c;
        }
        let mut out = CyclotomicInt { p: self.p, order: self.order, coeffs };
        out.canonicalize();
        out
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let q = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold((0.0, 0.0), |(re, im), (idx, &c)| {
                let angle = TAU * idx as f64 / q;
                (re + c as f64 * angle.cos(), im + c as f64 * angle.sin())
            })
    }

    pub fn abs(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    fn check_same_ring(&self, other: &Self) {
        assert!(
            self.p == other.p && self.order == other.order,
            "mixing elements of different cyclotomic rings"
        );
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.check_same_ring(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInt { p: self.p, order: self.order, coeffs }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> CyclotomicInt {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        CyclotomicInt { p: self.p, order: self.order, coeffs }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.check_same_ring(rhs);
        let q = self.coeffs.len();
        let mut coeffs = vec![0i64; q];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                let idx = if i + j >= q { i + j - q } else { i + j };
                coeffs[idx] += a * b;
            }
        }
        let mut out = CyclotomicInt { p: self.p, order: self.order, coeffs };
        out.canonicalize();
        out
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInt(q={}; {self})", self.order)
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.rational_value() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (idx, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let mag = if mag == 1 { String::new() } else { mag.to_string() };
            write!(f, "{sign}{mag}e({idx}/{})", self.order)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for (p, j) in [(3u64, 1u32), (5, 1), (5, 2), (7, 3)] {
            for v in [-4i64, -1, 0, 1, 9] {
                let x = CyclotomicInt::rational(p, j, v).unwrap();
                assert_eq!(x.rational_value(), Some(v));
                assert!((x.to_complex().0 - v as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        let raw = vec![1; 25];
        let x = CyclotomicInt::from_raw(5, 2, raw).unwrap();
        assert_eq!(x.rational_value(), Some(0));
        let primitive: Vec<i64> = (0..25).map(|i| if i % 5 == 0 { 0 } else { 1 }).collect();
        // Sum of primitive 25th roots is the Ramanujan sum c_25(1) = 0.
        let y = CyclotomicInt::from_raw(5, 2, primitive).unwrap();
        assert_eq!(y.rational_value(), Some(0));
    }

    #[test]
    fn multiplication_is_exact() {
        let mut raw = vec![0; 7];
        raw[1] = 1;
        let zeta = CyclotomicInt::from_raw(7, 1, raw).unwrap();
        let mut acc = CyclotomicInt::rational(7, 1, 1).unwrap();
        for _ in 0..7 {
            acc = &acc * &zeta;
        }
        assert_eq!(acc.rational_value(), Some(1));
        let norm = &zeta * &zeta.conj();
        assert_eq!(norm.rational_value(), Some(1));
    }

    #[test]
    fn non_rational_is_detected() {
        let mut raw = vec![0; 5];
        raw[2] = 1;
        let x = CyclotomicInt::from_raw(5, 1, raw).unwrap();
        assert!(!x.is_rational());
        assert!((x.abs() - 1.0).abs() < 1e-12);
    }
}
