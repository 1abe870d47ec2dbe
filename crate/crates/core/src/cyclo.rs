//! Exact arithmetic in the cyclotomic field `Q(zeta_m)`.
//!
//! Elements are represented canonically as polynomials in `zeta_m` of degree
//! below `phi(m)`, i.e. as members of `Q[x]` modulo the m-th cyclotomic
//! polynomial. All coefficients are arbitrary-precision rationals; there is
//! no floating point anywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Euler totient by trial-division factorization.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi requires m >= 1");
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

fn divisors(m: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    ds.sort_unstable();
    ds
}

// ---------------------------------------------------------------------------
// Integer polynomial helpers (ascending coefficient order, used only for the
// construction of cyclotomic polynomials).
// ---------------------------------------------------------------------------

fn int_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    int_trim(&mut out);
    out
}

/// Exact division of integer polynomials; `div` must be monic and divide
/// `num` exactly. Panics otherwise (the cyclotomic recursion guarantees it).
fn int_div_exact(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    assert!(div.last().map_or(false, |c| c.is_one()), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    int_trim(&mut rem);
    let dd = div.len() - 1;
    if rem.len() - 1 < dd {
        panic!("degree of dividend below divisor");
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (j, djc) in div.iter().enumerate() {
            rem[k + j] -= &c * djc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    int_trim(&mut quot);
    quot
}

/// The m-th cyclotomic polynomial, monic with integer coefficients in
/// ascending order, computed by dividing `x^m - 1` by the product of all
/// lower cyclotomic polynomials `Phi_d` with `d | m`, `d < m`.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic_poly requires m >= 1");
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for d in divisors(m) {
        // x^d - 1
        let mut xd = vec![BigInt::zero(); d as usize + 1];
        xd[0] = -BigInt::one();
        xd[d as usize] = BigInt::one();
        let mut prod = vec![BigInt::one()];
        for e in divisors(d) {
            if e < d {
                prod = int_mul(&prod, &memo[&e]);
            }
        }
        memo.insert(d, int_div_exact(&xd, &prod));
    }
    memo.remove(&m).unwrap()
}

// ---------------------------------------------------------------------------
// Rational polynomial helpers.
// ---------------------------------------------------------------------------

fn rat_trim(p: &mut Vec<BigRational>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    rat_trim(&mut out);
    out
}

/// Remainder of `p` modulo the monic polynomial `div`.
fn rat_rem(p: &[BigRational], div: &[BigRational]) -> Vec<BigRational> {
    let dd = div.len() - 1;
    let mut rem: Vec<BigRational> = p.to_vec();
    rat_trim(&mut rem);
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = rem.last().unwrap().clone();
        if !c.is_zero() {
            for (j, djc) in div.iter().enumerate() {
                let t = &c * djc;
                rem[k + j] -= t;
            }
        }
        rem.pop();
        rat_trim(&mut rem);
    }
    rem
}

/// Extended Euclid over `Q[x]`: returns `(g, s)` with `s*a = g (mod b)` and
/// `g = gcd(a, b)` up to a unit.
fn rat_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0: Vec<BigRational> = a.to_vec();
    let mut r1: Vec<BigRational> = b.to_vec();
    rat_trim(&mut r0);
    rat_trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1: Vec<BigRational> = Vec::new();
    while !r1.is_empty() {
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(r1.len()) + 1];
        let lead = r1.last().unwrap().clone();
        while rem.len() >= r1.len() && !rem.is_empty() {
            let k = rem.len() - r1.len();
            let c = rem.last().unwrap() / &lead;
            quot[k] = c.clone();
            for (j, djc) in r1.iter().enumerate() {
                let t = &c * djc;
                rem[k + j] -= t;
            }
            rat_trim(&mut rem);
            if rem.len() < r1.len() {
                break;
            }
        }
        rat_trim(&mut quot);
        // s_{k+1} = s_{k-1} - q * s_k
        let qs = rat_mul(&quot, &s1);
        let mut s2 = s0.clone();
        s2.resize(s2.len().max(qs.len()), BigRational::zero());
        for (i, c) in qs.into_iter().enumerate() {
            s2[i] -= c;
        }
        rat_trim(&mut s2);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

// ---------------------------------------------------------------------------
// Field tables, globally memoized per order m.
// ---------------------------------------------------------------------------

struct FieldTable {
    phi: usize,
    /// Monic minimal polynomial of `zeta_m`, rationalized, ascending.
    modulus: Vec<BigRational>,
}

static TABLES: Lazy<RwLock<HashMap<u64, Arc<FieldTable>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn field_table(m: u64) -> Arc<FieldTable> {
    if let Some(t) = TABLES.read().unwrap().get(&m) {
        return Arc::clone(t);
    }
    let poly = cyclotomic_poly(m);
    let table = Arc::new(FieldTable {
        phi: poly.len() - 1,
        modulus: poly
            .into_iter()
            .map(|c| BigRational::from_integer(c))
            .collect(),
    });
    TABLES
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&table));
    table
}

// ---------------------------------------------------------------------------
// CycNum
// ---------------------------------------------------------------------------

/// An element of `Q(zeta_m)`, stored as `sum c_t zeta_m^t` with
/// `0 <= t < phi(m)`. The coefficient vector always has length exactly
/// `phi(m)`, so derived equality is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycNum {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    fn from_poly(m: u64, mut poly: Vec<BigRational>) -> Self {
        let table = field_table(m);
        if poly.len() > table.phi {
            poly = rat_rem(&poly, &table.modulus);
        }
        poly.resize(table.phi, BigRational::zero());
        CycNum { order: m, coeffs: poly }
    }

    pub fn zero(m: u64) -> Self {
        Self::from_poly(m, Vec::new())
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    pub fn from_rational(m: u64, q: BigRational) -> Self {
        Self::from_poly(m, vec![q])
    }

    pub fn from_integer(m: u64, n: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(n)))
    }

    /// `zeta_m` itself.
    pub fn zeta(m: u64) -> Self {
        Self::zeta_pow(m, 1)
    }

    /// `zeta_m^e` for any integer exponent (reduced modulo m).
    pub fn zeta_pow(m: u64, e: i64) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(m, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map_or(false, |q| q.is_one())
    }

    /// `Some(q)` iff the element lies in the prime field.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_order(&self, other: &CycNum) {
        assert_eq!(
            self.order, other.order,
            "mixed cyclotomic orders: {} vs {}",
            self.order, other.order
        );
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        self.check_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycNum { order: self.order, coeffs }
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        self.check_order(other);
        Self::from_poly(self.order, rat_mul(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, q: &BigRational) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via extended Euclid against the minimal
    /// polynomial of `zeta_m`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.order, q.recip()));
        }
        let table = field_table(self.order);
        let mut poly = self.coeffs.clone();
        rat_trim(&mut poly);
        let (g, s) = rat_ext_gcd(&poly, &table.modulus);
        // Phi_m is irreducible over Q, so the gcd with a nonzero element of
        // lower degree is a nonzero constant; anything else is an internal
        // inconsistency.
        assert!(
            g.len() == 1 && !g[0].is_zero(),
            "internal inconsistency: nontrivial gcd with cyclotomic modulus"
        );
        let inv_g = g[0].recip();
        let coeffs = s.iter().map(|c| c * &inv_g).collect();
        Ok(Self::from_poly(self.order, coeffs))
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycNum::one(self.order);
        let mut k = e.unsigned_abs();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }
}

fn rational_text(q: &BigRational) -> String {
    // num prints `p/q`, omitting `/q` when the denominator is one.
    q.to_string()
}

impl fmt::Display for CycNum {
    /// Canonical scalar text: a bare rational, or a parenthesized polynomial
    /// in `z` with ascending powers, e.g. `(1/2 - z + z^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", rational_text(&q));
        }
        let mut out = String::from("(");
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let zpart = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                out.push_str(&rational_text(&mag));
            } else if mag.is_one() {
                out.push_str(&zpart);
            } else {
                out.push_str(&format!("{}*{}", rational_text(&mag), zpart));
            }
        }
        out.push(')');
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cyclotomic_poly_small_orders() {
        assert_eq!(cyclotomic_poly(1), vec![big(-1), big(1)]);
        assert_eq!(cyclotomic_poly(2), vec![big(1), big(1)]);
        assert_eq!(cyclotomic_poly(3), vec![big(1), big(1), big(1)]);
        // x^2 + 1, from dividing x^4 - 1 by Phi_1 * Phi_2
        assert_eq!(cyclotomic_poly(4), vec![big(1), big(0), big(1)]);
        // x^2 - x + 1, from dividing x^6 - 1 by Phi_1 Phi_2 Phi_3
        assert_eq!(cyclotomic_poly(6), vec![big(1), big(-1), big(1)]);
        assert_eq!(cyclotomic_poly(12).len() - 1, euler_phi(12) as usize);
    }

    #[test]
    fn cyclotomic_product_identity() {
        // prod_{d | m} Phi_d = x^m - 1 for all m <= 24
        for m in 1..=24u64 {
            let mut prod = vec![big(1)];
            for d in divisors(m) {
                prod = int_mul(&prod, &cyclotomic_poly(d));
            }
            let mut expected = vec![big(0); m as usize + 1];
            expected[0] = big(-1);
            expected[m as usize] = big(1);
            assert_eq!(prod, expected, "failed at m = {m}");
        }
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = CycNum::zeta(4);
        assert_eq!(z.mul(&z), CycNum::from_integer(4, -1));
    }

    #[test]
    fn multiplicative_identity() {
        let a = CycNum::zeta(6).add(&CycNum::from_integer(6, 2));
        assert_eq!(a.mul(&CycNum::one(6)), a);
        assert_eq!(a.add(&CycNum::zero(6)), a);
    }

    #[test]
    fn zeta_inverse_is_high_power() {
        for m in [3u64, 4, 5, 6, 8, 12] {
            let z = CycNum::zeta(m);
            assert_eq!(z.inv().unwrap(), CycNum::zeta_pow(m, m as i64 - 1));
            assert!(z.mul(&z.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_inverse() {
        let two = CycNum::from_integer(4, 2);
        let half = two.inv().unwrap();
        assert_eq!(
            half.as_rational().unwrap(),
            BigRational::new(big(1), big(2))
        );
    }

    #[test]
    fn one_plus_zeta4_inverse() {
        // (1 + i)^-1 = (1 - i)/2
        let a = CycNum::one(4).add(&CycNum::zeta(4));
        let inv = a.inv().unwrap();
        let expected = CycNum::one(4)
            .sub(&CycNum::zeta(4))
            .scale(&BigRational::new(big(1), big(2)));
        assert_eq!(inv, expected);
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn invert_zero_fails() {
        assert_eq!(CycNum::zero(4).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn zeta_pow_handles_negative_exponents() {
        let m = 12;
        let z = CycNum::zeta(m);
        assert_eq!(CycNum::zeta_pow(m, -1), z.inv().unwrap());
        assert_eq!(CycNum::zeta_pow(m, -5), z.pow(-5).unwrap());
        assert_eq!(CycNum::zeta_pow(m, 12), CycNum::one(m));
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(CycNum::from_integer(4, -3).to_string(), "-3");
        let half = CycNum::from_rational(4, BigRational::new(big(1), big(2)));
        assert_eq!(half.to_string(), "1/2");
        let a = CycNum::one(4).sub(&CycNum::zeta(4));
        assert_eq!(a.to_string(), "(1 - z)");
        let b = CycNum::zeta(12).scale(&BigRational::new(big(3), big(2)));
        assert_eq!(b.to_string(), "(3/2*z)");
    }
}
