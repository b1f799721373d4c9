//! Exact number types: arbitrary-precision rationals, the extended value
//! `[0, ∞]`, and the quadratic field ℚ(φ) with φ² = φ + 1.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Shorthand for building a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Render a rational as `p/q` (or `p` when the denominator is one).
pub fn display_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the `p/q` form produced by [`display_rational`].
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from(p))
        }
    }
}

/// A value in `[0, ∞]`: the codomain of states and traces.
///
/// Addition absorbs into `Infinite`, and `Finite(r) < Infinite` for every
/// rational `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(BigRational),
    Infinite,
}

impl Value {
    pub fn zero() -> Self {
        Value::Finite(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Finite(r) if r.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            Value::Finite(r) => Some(r),
            Value::Infinite => None,
        }
    }

    /// `n · self` with the convention `0 · ∞ = 0`.
    pub fn scale(&self, n: u64) -> Value {
        if n == 0 {
            return Value::zero();
        }
        match self {
            Value::Finite(r) => Value::Finite(r * int(n as i64)),
            Value::Infinite => Value::Infinite,
        }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, other: Value) -> Value {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinite,
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Value {
    pub fn cmp_value(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
            (Value::Finite(_), Value::Infinite) => Ordering::Less,
            (Value::Infinite, Value::Finite(_)) => Ordering::Greater,
            (Value::Infinite, Value::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(r) => write!(f, "{}", display_rational(r)),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

/// An element `a + b·φ` of ℚ(φ), where φ is the golden ratio, φ² = φ + 1.
///
/// Comparisons are exact: the sign of `a + b·φ` is computed from the sign of
/// `(2a + b) + b·√5` by comparing squares, never through floating point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Golden {
    pub a: BigRational,
    pub b: BigRational,
}

impl Golden {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Golden { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Golden { a, b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Golden::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Golden::from_rational(BigRational::one())
    }

    /// The golden ratio φ itself.
    pub fn phi() -> Self {
        Golden { a: BigRational::zero(), b: BigRational::one() }
    }

    /// φ⁻¹ = φ − 1.
    pub fn phi_inv() -> Self {
        Golden { a: -BigRational::one(), b: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate: replaces φ by 1 − φ.
    pub fn conjugate(&self) -> Golden {
        Golden { a: &self.a + &self.b, b: -self.b.clone() }
    }

    /// Field norm `self · conj(self) = a² + ab − b²` (a plain rational).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Sign of the real number `a + b·φ`: −1, 0, or 1.
    pub fn signum(&self) -> i32 {
        // a + bφ and (2a + b) + b√5 have the same sign.
        sign_with_sqrt5(&(int(2) * &self.a + &self.b), &self.b)
    }

    pub fn inverse(&self) -> Option<Golden> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(Golden { a: c.a / &n, b: c.b / n })
    }
}

/// Sign of `p + q·√5` for rationals `p`, `q`.
fn sign_with_sqrt5(p: &BigRational, q: &BigRational) -> i32 {
    let sp = rational_sign(p);
    let sq = rational_sign(q);
    match (sp, sq) {
        (0, 0) => 0,
        (s, 0) => s,
        (0, s) => s,
        (1, 1) => 1,
        (-1, -1) => -1,
        // Opposite signs: compare p² with 5q².
        _ => {
            let p2 = p * p;
            let q2 = int(5) * q * q;
            match p2.cmp(&q2) {
                Ordering::Greater => sp,
                Ordering::Less => sq,
                Ordering::Equal => 0,
            }
        }
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for Golden {
    fn partial_cmp(&self, other: &Golden) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Golden {
    fn cmp(&self, other: &Golden) -> Ordering {
        let d = self.clone() - other.clone();
        match d.signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Add for Golden {
    type Output = Golden;
    fn add(self, o: Golden) -> Golden {
        Golden { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for Golden {
    type Output = Golden;
    fn sub(self, o: Golden) -> Golden {
        Golden { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for Golden {
    type Output = Golden;
    fn neg(self) -> Golden {
        Golden { a: -self.a, b: -self.b }
    }
}

impl Mul for Golden {
    type Output = Golden;
    fn mul(self, o: Golden) -> Golden {
        // (a1 + b1φ)(a2 + b2φ) = a1a2 + b1b2 + (a1b2 + a2b1 + b1b2)φ
        let cross = &self.a * &o.b + &o.a * &self.b + &self.b * &o.b;
        Golden { a: &self.a * &o.a + &self.b * &o.b, b: cross }
    }
}

impl Div for Golden {
    type Output = Golden;
    fn div(self, o: Golden) -> Golden {
        self * o.inverse().expect("division by zero in Q(phi)")
    }
}

impl fmt::Display for Golden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", display_rational(&self.a))
        } else {
            write!(f, "{}+{}*phi", display_rational(&self.a), display_rational(&self.b))
        }
    }
}

/// `n`-th Fibonacci number with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: usize) -> BigInt {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_ordering_and_absorption() {
        let two = Value::Finite(int(2));
        assert!(two < Value::Infinite);
        assert_eq!(two.clone() + Value::Infinite, Value::Infinite);
        assert_eq!(Value::Infinite.scale(0), Value::zero());
    }

    #[test]
    fn golden_defining_relation() {
        let phi = Golden::phi();
        assert_eq!(phi.clone() * phi.clone(), phi.clone() + Golden::one());
        assert_eq!(Golden::phi_inv() * phi, Golden::one());
    }

    #[test]
    fn golden_signs_are_exact() {
        // φ ≈ 1.618: 1 < φ < 2, and 2 - φ > 0 while 1 - φ < 0.
        assert!(Golden::phi() > Golden::one());
        assert!(Golden::phi() < Golden::from_rational(int(2)));
        assert_eq!((Golden::from_rational(int(2)) - Golden::phi()).signum(), 1);
        assert_eq!((Golden::one() - Golden::phi()).signum(), -1);
        // 2φ - 3 ≈ 0.236 > 0 needs the squared comparison branch.
        let x = Golden::new(int(-3), int(2));
        assert_eq!(x.signum(), 1);
        let y = Golden::new(int(3), int(-2));
        assert_eq!(y.signum(), -1);
    }

    #[test]
    fn fibonacci_small_values() {
        let got: Vec<_> = (0..10).map(|n| fibonacci(n).to_string()).collect();
        assert_eq!(got, ["0", "1", "1", "2", "3", "5", "8", "13", "21", "34"]);
    }

    #[test]
    fn rational_round_trip() {
        let r = rat(-7, 3);
        assert_eq!(parse_rational(&display_rational(&r)).unwrap(), r);
        assert_eq!(parse_rational("4").unwrap(), int(4));
        assert!(parse_rational("1/0").is_none());
    }
}
