//! Exact polynomials in the particle number N, stored in the falling-factorial
//! basis (N)_k = N(N-1)···(N-k+1).

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

/// (x)_k for an integer x.
fn falling_int(x: i64, k: usize) -> i64 {
    (0..k as i64).map(|i| x - i).product()
}

/// Σ_k c_k (N)_k with rational c_k; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FallingPoly {
    coeffs: Vec<Rational64>,
}

impl FallingPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(coeffs: Vec<Rational64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// (N)_k.
    pub fn falling(k: usize) -> Self {
        let mut c = vec![Rational64::zero(); k + 1];
        c[k] = Rational64::one();
        Self::from_coeffs(c)
    }

    pub fn constant(c: Rational64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// (N - s)_p, expanded with the Vandermonde identity
    /// (x + y)_p = Σ_k C(p,k) (x)_k (y)_{p-k}.
    pub fn shifted_falling(s: i64, p: usize) -> Self {
        let c = (0..=p).map(|k| Rational64::from_integer(binom(p as i64, k as i64) * falling_int(-s, p - k))).collect();
        Self::from_coeffs(c)
    }

    /// From ordinary coefficients Σ a_n N^n, using N^n = Σ_k S(n,k) (N)_k.
    pub fn from_power_coeffs(a: &[Rational64]) -> Self {
        let s = stirling2(a.len());
        let mut c = vec![Rational64::zero(); a.len()];
        for (n, an) in a.iter().enumerate() {
            for k in 0..=n {
                c[k] += an * Rational64::from_integer(s[n][k]);
            }
        }
        Self::from_coeffs(c)
    }

    /// Ordinary coefficients, using (N)_k = Σ_n s(k,n) N^n.
    pub fn to_power_coeffs(&self) -> Vec<Rational64> {
        let s = stirling1(self.coeffs.len());
        let mut a = vec![Rational64::zero(); self.coeffs.len()];
        for (k, ck) in self.coeffs.iter().enumerate() {
            for n in 0..=k {
                a[n] += ck * Rational64::from_integer(s[k][n]);
            }
        }
        a
    }

    /// Coefficient of (N)_k.
    pub fn coeff(&self, k: usize) -> Rational64 {
        self.coeffs.get(k).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: Rational64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, n: Rational64) -> Rational64 {
        let mut acc = Rational64::zero();
        let mut ff = Rational64::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * ff;
            ff *= n - Rational64::from_integer(k as i64);
        }
        acc
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

/// Signed Stirling numbers of the first kind s(n,k),
/// n,k < len.
fn stirling1(len: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; len.max(1)]; len.max(1)];
    s[0][0] = 1;
    for n in 1..len {
        for k in 1..=n {
            s[n][k] = s[n - 1][k - 1] - (n as i64 - 1) * s[n - 1][k];
        }
    }
    s
}

/// Stirling numbers of the second kind S(n,k), n,k < len.
fn stirling2(len: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; len.max(1)]; len.max(1)];
    s[0][0] = 1;
    for n in 1..len {
        for k in 1..=n {
            s[n][k] = s[n - 1][k - 1] + k as i64 * s[n - 1][k];
        }
    }
    s
}

impl Add for &FallingPoly {
    type Output = FallingPoly;
    fn add(self, o: &FallingPoly) -> FallingPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        FallingPoly::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &FallingPoly {
    type Output = FallingPoly;
    fn sub(self, o: &FallingPoly) -> FallingPoly {
        self + &(-o)
    }
}

impl Neg for &FallingPoly {
    type Output = FallingPoly;
    fn neg(self) -> FallingPoly {
        self.scale(-Rational64::one())
    }
}

/// (N)_m (N)_n = Σ_k C(m,k) C(n,k) k! (N)_{m+n-k}.
impl Mul for &FallingPoly {
    type Output = FallingPoly;
    fn mul(self, o: &FallingPoly) -> FallingPoly {
        if self.is_zero() || o.is_zero() {
            return FallingPoly::zero();
        }
        let mut c = vec![Rational64::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (m, a) in self.coeffs.iter().enumerate() {
            for (n, b) in o.coeffs.iter().enumerate() {
                for k in 0..=m.min(n) {
                    let w = binom(m as i64, k as i64) * binom(n as i64, k as i64) * factorial(k as i64);
                    c[m + n - k] += a * b * Rational64::from_integer(w);
                }
            }
        }
        FallingPoly::from_coeffs(c)
    }
}

impl fmt::Display for FallingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*(N)_{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for FallingPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// E = Σ_m C(N,m)·U_m, with U_m exact.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MBodyDecomposition {
    #[serde(serialize_with = "ser_map")]
    pub coefficients: BTreeMap<usize, Rational64>,
}

fn ser_map<S: Serializer>(m: &BTreeMap<usize, Rational64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v.to_string())))
}

impl MBodyDecomposition {
    pub fn get(&self, m: usize) -> Rational64 {
        self.coefficients.get(&m).copied().unwrap_or_else(Rational64::zero)
    }

    /// Σ_m U_m C(N,m) back in the falling-factorial basis.
    pub fn reconstruct(&self) -> FallingPoly {
        let n = self.coefficients.keys().max().map_or(0, |m| m + 1);
        let mut c = vec![Rational64::zero(); n];
        for (&m, u) in &self.coefficients {
            c[m] = u / Rational64::from_integer(factorial(m as i64));
        }
        FallingPoly::from_coeffs(c)
    }
}

/// Since C(N,m) = (N)_m/m!, U_m is m! times the (N)_m coefficient.
pub fn mbody_decompose(poly: &FallingPoly) -> MBodyDecomposition {
    let coefficients = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (m, c * Rational64::from_integer(factorial(m as i64))))
        .collect();
    MBodyDecomposition { coefficients }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn two_and_three_body_basis_change() {
        let d = mbody_decompose(&FallingPoly::falling(2));
        assert_eq!(d.coefficients.len(), 1);
        assert_eq!(d.get(2), r(2));
        let d = mbody_decompose(&FallingPoly::falling(3));
        assert_eq!(d.get(3), r(6));
    }

    #[test]
    fn power_round_trip() {
        // N²(N-1)² = N⁴ - 2N³ + N²
        let p = FallingPoly::from_power_coeffs(&[r(0), r(0), r(1), r(-2), r(1)]);
        assert_eq!(p.to_power_coeffs(), vec![r(0), r(0), r(1), r(-2), r(1)]);
        assert_eq!(&FallingPoly::falling(2) * &FallingPoly::falling(2), p);
        assert_eq!(p.coeffs(), &[r(0), r(0), r(2), r(4), r(1)]);
    }

    #[test]
    fn shifted_falling_values() {
        let p = FallingPoly::shifted_falling(2, 3);
        for n in 0..10 {
            assert_eq!(p.eval(r(n)), r((n - 2) * (n - 3) * (n - 4)));
        }
    }

    #[test]
    fn product_values() {
        let a = FallingPoly::falling(2);
        let b = FallingPoly::falling(3);
        let p = &a * &b;
        for n in 0..8 {
            assert_eq!(p.eval(r(n)), a.eval(r(n)) * b.eval(r(n)));
        }
    }
}
