//! Exact arithmetic in the commutative coefficient ring: rationals extended
//! by the Laurent variable `q` and the formal unimodular phase symbols
//! `g[j,k]` (`1 <= j < k`, with `g[k,j] = g[j,k]^-1` by convention).
//!
//! A [`Scalar`] is a sparse sum of monomials `c * q^e * Π g[j,k]^m` with
//! exact rational `c`.  No floating point is used anywhere.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational number used for all coefficients.
pub type Rat = BigRational;

/// Build a rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Build a rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent key of one scalar monomial: the power of `q` and the powers of
/// the phase symbols, stored sparsely with `(j,k)` pairs sorted and `j < k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono {
    pub q: i64,
    pub g: Vec<((u8, u8), i64)>,
}

impl Mono {
    pub fn unit() -> Self {
        Mono::default()
    }

    pub fn q_pow(e: i64) -> Self {
        Mono { q: e, g: Vec::new() }
    }

    /// Phase monomial `g[j,k]^e`; indices in either order (`g[k,j] = g[j,k]^-1`).
    pub fn phase(j: u8, k: u8, e: i64) -> Self {
        assert!(j != k, "phase symbol requires distinct indices");
        let (j, k, e) = if j < k { (j, k, e) } else { (k, j, -e) };
        if e == 0 {
            return Mono::unit();
        }
        Mono { q: 0, g: vec![((j, k), e)] }
    }

    pub fn is_unit(&self) -> bool {
        self.q == 0 && self.g.is_empty()
    }

    fn merge(&self, other: &Mono, sign: i64) -> Mono {
        let mut g = Vec::with_capacity(self.g.len() + other.g.len());
        let (mut a, mut b) = (self.g.iter().peekable(), other.g.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ka, ea)), Some(&&(kb, eb))) => match ka.cmp(&kb) {
                    Ordering::Less => {
                        g.push((ka, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        g.push((kb, sign * eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        let e = ea + sign * eb;
                        if e != 0 {
                            g.push((ka, e));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(&&(ka, ea)), None) => {
                    g.push((ka, ea));
                    a.next();
                }
                (None, Some(&&(kb, eb))) => {
                    g.push((kb, sign * eb));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Mono { q: self.q + sign * other.q, g }
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        self.merge(other, -1)
    }

    pub fn inv(&self) -> Mono {
        Mono {
            q: -self.q,
            g: self.g.iter().map(|&(k, e)| (k, -e)).collect(),
        }
    }
}

/// Element of the coefficient ring: a finite sum of distinct monomials with
/// nonzero rational coefficients.  Terms are kept sorted by [`Mono`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(Mono, Rat)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: vec![(Mono::unit(), r)] }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat(n))
    }

    pub fn monomial(m: Mono, c: Rat) -> Self {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: vec![(m, c)] }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Scalar::monomial(Mono::q_pow(e), Rat::one())
    }

    /// `g[j,k]^e` (indices in either order).
    pub fn phase(j: u8, k: u8, e: i64) -> Self {
        Scalar::monomial(Mono::phase(j, k, e), Rat::one())
    }

    /// `q^-1 - q`, the ubiquitous Manin coefficient.
    pub fn qdiff() -> Self {
        Scalar::q_pow(-1) - Scalar::q_pow(1)
    }

    /// `(-q)^e`.
    pub fn neg_q_pow(e: i64) -> Self {
        let sign = if e.rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
        Scalar::monomial(Mono::q_pow(e), sign)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_unit() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn from_sorted(terms: Vec<(Mono, Rat)>) -> Self {
        Scalar { terms }
    }

    fn add_scaled(&self, other: &Scalar, scale: Option<&Rat>) -> Scalar {
        let mut out: Vec<(Mono, Rat)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, _)), Some((mb, _))) => match ma.cmp(mb) {
                    Ordering::Less => out.push((*a.next().unwrap()).clone()),
                    Ordering::Greater => {
                        let (m, c) = b.next().unwrap();
                        let c = match scale {
                            Some(s) => c * s,
                            None => c.clone(),
                        };
                        out.push((m.clone(), c));
                    }
                    Ordering::Equal => {
                        let (m, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let cb = match scale {
                            Some(s) => cb * s,
                            None => cb.clone(),
                        };
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
                (Some(_), None) => out.push((*a.next().unwrap()).clone()),
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    let c = match scale {
                        Some(s) => c * s,
                        None => c.clone(),
                    };
                    out.push((m.clone(), c));
                }
                (None, None) => break,
            }
        }
        Scalar::from_sorted(out)
    }

    pub fn scale(&self, c: &Rat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar::from_sorted(self.terms.iter().map(|(m, r)| (m.clone(), r * c)).collect())
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        let mut terms: Vec<(Mono, Rat)> =
            self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect();
        terms.sort_by(|x, y| x.0.cmp(&y.0));
        Scalar::from_sorted(terms)
    }

    /// Multiplicative inverse of a single-term scalar.  Anything else is
    /// rejected: the ring only inverts monomials.
    pub fn invert_monomial(&self) -> Result<Scalar> {
        if self.terms.len() != 1 {
            return Err(Error::NonInvertibleScalar(format!("{self}")));
        }
        let (m, c) = &self.terms[0];
        Ok(Scalar::monomial(m.inv(), c.recip()))
    }

    /// Integer power; negative exponents require a monomial.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            let inv = self.invert_monomial()?;
            return inv.pow(-e);
        }
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        Ok(out)
    }

    /// Substitute `q -> q_value` (exact rational, nonzero) and optionally all
    /// phase symbols `g[j,k] -> 1`.
    pub fn specialize(&self, q_value: &Rat, phases_to_one: bool) -> Result<Scalar> {
        if q_value.is_zero() {
            return Err(Error::ZeroSpecialization);
        }
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut qc = Rat::one();
            if m.q >= 0 {
                for _ in 0..m.q {
                    qc *= q_value;
                }
            } else {
                let r = q_value.recip();
                for _ in 0..(-m.q) {
                    qc *= &r;
                }
            }
            let g = if phases_to_one { Vec::new() } else { m.g.clone() };
            out = &out + &Scalar::monomial(Mono { q: 0, g }, c * qc);
        }
        Ok(out)
    }

    /// Send every phase symbol to 1, keeping `q` symbolic.
    pub fn phases_to_one(&self) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            out = &out + &Scalar::monomial(Mono { q: m.q, g: Vec::new() }, c.clone());
        }
        out
    }

    /// Leading term in the (q, phases) lexicographic monomial order.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.last().map(|(m, c)| (m, c))
    }

    /// Exact division in the Laurent ring.  Returns `None` when the division
    /// is not exact (callers treat this as a hard error: the fraction-free
    /// eliminations that use it guarantee exactness).
    pub fn divide_exact(&self, divisor: &Scalar) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if divisor.is_zero() {
            return None;
        }
        if divisor.is_monomial() {
            let (m, c) = &divisor.terms[0];
            return Some(self.mul_mono(&m.inv(), &c.recip()));
        }
        let (dm, dc) = divisor.leading().unwrap();
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        let mut steps = self.terms.len() * divisor.terms.len() + 64;
        while !rem.is_zero() {
            if steps == 0 {
                return None;
            }
            steps -= 1;
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(&dm);
            let qc = rc / &dc;
            let qterm = Scalar::monomial(qm, qc);
            quot = &quot + &qterm;
            rem = &rem - &(&qterm * divisor);
        }
        Some(quot)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_scaled(rhs, None)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let minus_one = -Rat::one();
        self.add_scaled(rhs, Some(&minus_one))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            out = out.add_scaled(&rhs.mul_mono(m, c), None);
        }
        out
    }
}

fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Textual form of one monomial with its coefficient, sign stripped.
fn fmt_term(m: &Mono, c: &Rat) -> String {
    let mut factors: Vec<String> = Vec::new();
    let abs = c.abs();
    if !abs.is_one() || m.is_unit() {
        factors.push(fmt_rat(&abs));
    }
    if m.q != 0 {
        factors.push(if m.q == 1 { "q".to_owned() } else { format!("q^{}", m.q) });
    }
    for ((j, k), e) in &m.g {
        factors.push(if *e == 1 {
            format!("g[{j},{k}]")
        } else {
            format!("g[{j},{k}]^{e}")
        });
    }
    factors.join("*")
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&fmt_term(m, c));
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_inverse_cancels() {
        let a = Scalar::qdiff();
        let b = Scalar::q_pow(1) - Scalar::q_pow(-1);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn phase_unit_symbol() {
        let g = Scalar::phase(1, 2, 1);
        let ginv = Scalar::phase(1, 2, -1);
        assert!((&g * &ginv).is_one());
        // g[2,1] is stored as g[1,2]^-1
        assert_eq!(Scalar::phase(2, 1, 1), ginv);
    }

    #[test]
    fn qdiff_times_q() {
        // (q^-1 - q) * q = 1 - q^2, expanded by hand
        let lhs = &Scalar::qdiff() * &Scalar::q_pow(1);
        let expected = Scalar::one() - Scalar::q_pow(2);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn invert_rejects_sums() {
        assert!(Scalar::qdiff().invert_monomial().is_err());
        assert!(Scalar::zero().invert_monomial().is_err());
        let m = Scalar::monomial(Mono::phase(1, 3, 2).mul(&Mono::q_pow(-4)), ratio(-3, 2));
        let i = m.invert_monomial().unwrap();
        assert!((&m * &i).is_one());
    }

    #[test]
    fn specialize_classical_limit() {
        let s = Scalar::qdiff();
        assert!(s.specialize(&rat(1), false).unwrap().is_zero());
        let s2 = Scalar::q_pow(2);
        assert_eq!(s2.specialize(&rat(2), false).unwrap(), Scalar::from_int(4));
        let s3 = &Scalar::qdiff() * &Scalar::phase(1, 2, 1);
        assert!(s3.specialize(&rat(1), true).unwrap().is_zero());
        assert!(s3.specialize(&rat(0), true).is_err());
    }

    #[test]
    fn exact_division() {
        let a = Scalar::qdiff();
        let b = &a * &(Scalar::one() + Scalar::q_pow(3));
        let q = b.divide_exact(&a).unwrap();
        assert_eq!(q, Scalar::one() + Scalar::q_pow(3));
        // not exact
        assert!(Scalar::one().divide_exact(&a).is_none());
    }

    #[test]
    fn display_forms() {
        use alloc::string::ToString;
        assert_eq!(Scalar::qdiff().to_string(), "q^-1 - q");
        assert_eq!((-&Scalar::qdiff()).to_string(), "-q^-1 + q");
        assert_eq!(Scalar::from_int(1).to_string(), "1");
        let m = Scalar::monomial(Mono::phase(1, 2, -2).mul(&Mono::q_pow(1)), ratio(3, 2));
        assert_eq!(m.to_string(), "3/2*q*g[1,2]^-2");
    }
}
