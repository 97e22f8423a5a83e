//! Rational points of Q_p: valuations, norms, fractional parts, digits and balls.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// A prime, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// p^e as an exact rational; e may be negative.
    pub fn pow(self, e: i64) -> Rat {
        let base = num_traits::pow(self.big(), e.unsigned_abs() as usize);
        if e >= 0 {
            Rat::from_integer(base)
        } else {
            Rat::new(BigInt::one(), base)
        }
    }

    /// p^e as an integer, e ≥ 0.
    pub fn pow_int(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }

    pub fn pow_u64(self, e: u32) -> u64 {
        self.0.checked_pow(e).expect("p^e overflows u64")
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

/// Exponent of the norm: |x|_p = p^γ, or `Zero` for x = 0.
/// `Zero` sorts below every finite exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormExp {
    Zero,
    Exp(i64),
}

impl NormExp {
    pub fn exp(self) -> Option<i64> {
        match self {
            NormExp::Zero => None,
            NormExp::Exp(e) => Some(e),
        }
    }

    /// |x|_p ≤ p^γ
    pub fn le(self, gamma: i64) -> bool {
        self <= NormExp::Exp(gamma)
    }
}

fn strip(mut n: BigInt, p: &BigInt) -> (BigInt, i64) {
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (n, k);
        }
        n = q;
        k += 1;
    }
}

pub fn valuation(x: &Rat, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = p.big();
    let (_, a) = strip(x.numer().clone(), &pb);
    let (_, b) = strip(x.denom().clone(), &pb);
    Valuation::Finite(a - b)
}

pub fn norm_exp(x: &Rat, p: Prime) -> NormExp {
    match valuation(x, p) {
        Valuation::Infinite => NormExp::Zero,
        Valuation::Finite(v) => NormExp::Exp(-v),
    }
}

/// |x|_p as an exact rational.
pub fn norm(x: &Rat, p: Prime) -> Rat {
    match norm_exp(x, p) {
        NormExp::Zero => Rat::zero(),
        NormExp::Exp(e) => p.pow(e),
    }
}

/// a·b⁻¹ mod m for b coprime to m, result in [0, m).
fn mod_div(a: &BigInt, b: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let inv = b.mod_floor(m).modinv(m).expect("denominator coprime to modulus");
    (a * inv).mod_floor(m)
}

/// The fractional part {x}_p, an element of I_p.
pub fn frac_part(x: &Rat, p: Prime) -> Rat {
    let v = match valuation(x, p) {
        Valuation::Infinite => return Rat::zero(),
        Valuation::Finite(v) => v,
    };
    if v >= 0 {
        return Rat::zero();
    }
    let pb = p.big();
    let (rest, k) = strip(x.denom().clone(), &pb);
    let pk = num_traits::pow(pb, k as usize);
    let m = mod_div(x.numer(), &rest, &pk);
    Rat::new(m, pk)
}

/// Digits x_j, j ∈ [lo, hi), of x = p^γ Σ x_j p^j with γ = valuation(x).
pub fn digits(x: &Rat, p: Prime, lo: i64, hi: i64) -> Vec<u64> {
    let gamma = match valuation(x, p) {
        Valuation::Infinite => return vec![0; (hi - lo).max(0) as usize],
        Valuation::Finite(g) => g,
    };
    (lo..hi).map(|j| digit_at(x, p, gamma + j)).collect()
}

/// Coefficient of p^t in the canonical expansion of x.
pub fn digit_at(x: &Rat, p: Prime, t: i64) -> u64 {
    // floor(p · {x p^{-(t+1)}}_p)
    let y = x * p.pow(-(t + 1));
    let f = frac_part(&y, p) * Rat::from_integer(p.big());
    let d = f.floor().to_integer();
    d.try_into().expect("digit fits u64")
}

/// The canonical representative of c modulo B_γ(0): keeps only digits below position −γ.
pub fn canonical_center(c: &Rat, gamma: i64, p: Prime) -> Rat {
    let shifted = c * p.pow(gamma);
    frac_part(&shifted, p) * p.pow(-gamma)
}

pub fn is_ip(x: &Rat, p: Prime) -> bool {
    !x.is_negative() && x < &Rat::one() && frac_part(x, p) == *x
}

/// All k/p^γmax with 0 ≤ k < p^γmax.
pub fn enumerate_ip(p: Prime, gamma_max: u32) -> Vec<Rat> {
    let n = p.pow_int(gamma_max);
    let mut out = Vec::new();
    let mut k = BigInt::zero();
    while k < n {
        out.push(Rat::new(k.clone(), n.clone()));
        k += 1;
    }
    out
}

/// The closed ball B_γ(c) = {x : |x − c|_p ≤ p^γ}, stored with its canonical center.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    center: Rat,
    radius_exp: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallRelation {
    Equal,
    Disjoint,
    FirstContainsSecond,
    SecondContainsFirst,
}

impl Ball {
    pub fn new(c: &Rat, gamma: i64, p: Prime) -> Ball {
        Ball {
            center: canonical_center(c, gamma, p),
            radius_exp: gamma,
        }
    }

    pub fn center(&self) -> &Rat {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    pub fn contains_point(&self, x: &Rat, p: Prime) -> bool {
        norm_exp(&(x - &self.center), p).le(self.radius_exp)
    }

    pub fn contains_zero(&self) -> bool {
        self.center.is_zero()
    }

    /// True iff `other` ⊆ self.
    pub fn contains_ball(&self, other: &Ball, p: Prime) -> bool {
        other.radius_exp <= self.radius_exp && self.contains_point(&other.center, p)
    }

    pub fn intersects(&self, other: &Ball, p: Prime) -> bool {
        let g = self.radius_exp.max(other.radius_exp);
        norm_exp(&(&self.center - &other.center), p).le(g)
    }

    pub fn relation(&self, other: &Ball, p: Prime) -> BallRelation {
        if !self.intersects(other, p) {
            return BallRelation::Disjoint;
        }
        match self.radius_exp.cmp(&other.radius_exp) {
            Ordering::Equal => BallRelation::Equal,
            Ordering::Greater => BallRelation::FirstContainsSecond,
            Ordering::Less => BallRelation::SecondContainsFirst,
        }
    }

    /// The p balls of radius γ−1 tiling this one.
    pub fn children(&self, p: Prime) -> Vec<Ball> {
        let step = p.pow(-self.radius_exp);
        (0..p.get())
            .map(|k| {
                let c = &self.center + &step * Rat::from_integer(BigInt::from(k));
                Ball::new(&c, self.radius_exp - 1, p)
            })
            .collect()
    }

    /// Haar measure p^γ.
    pub fn measure(&self, p: Prime) -> Rat {
        p.pow(self.radius_exp)
    }

    /// |x|_p on the ball when it is constant there (i.e. 0 ∉ ball).
    pub fn constant_norm(&self, p: Prime) -> Option<i64> {
        if self.contains_zero() {
            None
        } else {
            norm_exp(&self.center, p).exp()
        }
    }
}

impl PartialOrd for Ball {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ball {
    fn cmp(&self, other: &Self) -> Ordering {
        self.radius_exp
            .cmp(&other.radius_exp)
            .then_with(|| self.center.cmp(&other.center))
    }
}

pub fn ball_relation(b1: &Ball, b2: &Ball, p: Prime) -> BallRelation {
    b1.relation(b2, p)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}
