//! Independent oracles and random generators shared by the integration tests.
//!
//! Nothing here calls the library's fractional part, character, integral, Fourier
//! or moment code; those are recomputed from scratch by brute force.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use padwave::padic::{int, rat};
use padwave::stepfn::Piece;
use padwave::{Ball, CycNumber, FilterSeq, Prime, Rat, StepFunction};
use rand::Rng;

pub fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

/// Strip the p-power from n: (n / p^k, k).
fn split_p(n: &BigInt, q: u64) -> (BigInt, u32) {
    let q = BigInt::from(q);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(&q) {
        n /= &q;
        k += 1;
    }
    (n, k)
}

/// ord_p(x) for x ≠ 0.
pub fn oracle_valuation(x: &Rat, q: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (_, a) = split_p(x.numer(), q);
    let (_, b) = split_p(x.denom(), q);
    Some(a as i64 - b as i64)
}

/// {x}_p by long division, one digit at a time from the lowest position up.
pub fn oracle_frac(x: &Rat, q: u64) -> Rat {
    let (rest, k) = split_p(x.denom(), q);
    if k == 0 {
        return Rat::zero();
    }
    let qb = BigInt::from(q);
    let mut a = x.numer().clone();
    let mut out = Rat::zero();
    for pos in (1..=k).rev() {
        // lowest remaining digit d: p | a − d·rest
        let d = (0..q)
            .find(|d| (&a - BigInt::from(*d) * &rest).is_multiple_of(&qb))
            .expect("rest is a unit mod p");
        out += Rat::new(BigInt::from(d), num_traits::pow(qb.clone(), pos as usize));
        a = (&a - BigInt::from(d) * &rest) / &qb;
    }
    out
}

pub fn oracle_chi(y: &Rat, q: u64) -> CycNumber {
    let f = oracle_frac(y, q);
    if f.is_zero() {
        return CycNumber::one();
    }
    let n = f.denom().to_u64().unwrap();
    CycNumber::root_of_unity(f.numer().to_i64().unwrap(), n)
}

fn pw(q: u64, e: i64) -> Rat {
    let b = Rat::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        Rat::one() / num_traits::pow(b, (-e) as usize)
    }
}

/// ∫_{B_γ(c)} χ(v x) dx as a sum over sub-balls small enough for χ(v·) to be constant.
pub fn oracle_ball_integral(c: &Rat, gamma: i64, v: &Rat, q: u64) -> CycNumber {
    let delta = match oracle_valuation(v, q) {
        None => gamma,
        Some(e) => gamma.min(e),
    };
    let step = pw(q, -gamma);
    let count = q.pow((gamma - delta) as u32);
    let mut acc = CycNumber::zero();
    for t in 0..count {
        let x = c + &step * Rat::from_integer(BigInt::from(t));
        acc = &acc + &oracle_chi(&(v * &x), q);
    }
    acc.scale(&pw(q, delta))
}

pub fn oracle_integral(f: &StepFunction) -> CycNumber {
    oracle_fourier_at(f, &Rat::zero())
}

/// ∫ f(x) χ(xξ) dx.
pub fn oracle_fourier_at(f: &StepFunction, xi: &Rat) -> CycNumber {
    let q = f.p().get();
    f.pieces()
        .iter()
        .map(|pc| {
            let v = &pc.freq + xi;
            &pc.coeff * &oracle_ball_integral(pc.ball.center(), pc.ball.radius_exp(), &v, q)
        })
        .sum()
}

/// |x − c|_p ≤ p^γ, via the oracle valuation.
pub fn oracle_in_ball(x: &Rat, c: &Rat, gamma: i64, q: u64) -> bool {
    match oracle_valuation(&(x - c), q) {
        None => true,
        Some(v) => -v <= gamma,
    }
}

/// f(x) summed over the raw pieces.
pub fn oracle_eval(f: &StepFunction, x: &Rat) -> CycNumber {
    let q = f.p().get();
    f.pieces()
        .iter()
        .filter(|pc| oracle_in_ball(x, pc.ball.center(), pc.ball.radius_exp(), q))
        .map(|pc| &pc.coeff * &oracle_chi(&(&pc.freq * x), q))
        .sum()
}

/// ∫_{B_γ(0)} |x|^μ dx by geometric series over shells.
fn oracle_tail(gamma: i64, mu: u32, q: u64) -> Rat {
    // Σ_{g ≤ γ} (1 − 1/p) p^g p^{gμ}
    let r = pw(q, -(mu as i64 + 1));
    let first = (Rat::one() - pw(q, -1)) * pw(q, gamma * (mu as i64 + 1));
    first / (Rat::one() - r)
}

/// ∫ |x|^μ f(x) dx, μ a non-negative integer, with |0|^0 = 1.
pub fn oracle_moment(f: &StepFunction, mu: u32) -> CycNumber {
    let q = f.p().get();
    let mut acc = CycNumber::zero();
    for pc in f.pieces() {
        let c = pc.ball.center();
        let g = pc.ball.radius_exp();
        let contains_zero = oracle_in_ball(&Rat::zero(), c, g, q);
        if !contains_zero {
            let e = -oracle_valuation(c, q).unwrap();
            let v = &pc.coeff * &oracle_ball_integral(c, g, &pc.freq, q);
            acc = &acc + &v.scale(&pw(q, e * mu as i64));
            continue;
        }
        // B_γ(0) = shells g' ∈ (δ, γ] ∪ B_δ(0), χ(u·) ≡ 1 on B_δ(0)
        let delta = match oracle_valuation(&pc.freq, q) {
            None => g,
            Some(e) => g.min(e),
        };
        let mut sum = CycNumber::from_rat(&oracle_tail(delta, mu, q));
        for shell in (delta + 1)..=g {
            for t in 1..q {
                let center = pw(q, -shell) * Rat::from_integer(BigInt::from(t));
                let v = oracle_ball_integral(&center, shell - 1, &pc.freq, q);
                sum = &sum + &v.scale(&pw(q, shell * mu as i64));
            }
        }
        acc = &acc + &(&pc.coeff * &sum);
    }
    acc
}

/// Σ_a b(a)|a|^μ termwise.
pub fn oracle_discrete_moment(h: &FilterSeq, mu: u32) -> CycNumber {
    let q = h.p().get();
    h.points()
        .iter()
        .map(|(a, v)| match oracle_valuation(a, q) {
            None if mu == 0 => v.clone(),
            None => CycNumber::zero(),
            Some(e) => v.scale(&pw(q, -e * mu as i64)),
        })
        .sum()
}

/// Σ c_k cos/sin(2πk/n) from the power-basis coefficients.
pub fn float_value(z: &CycNumber) -> Complex64 {
    let n = z.order() as f64;
    z.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let t = std::f64::consts::TAU * k as f64 / n;
            Complex64::new(t.cos(), t.sin()) * c.to_f64().unwrap()
        })
        .sum()
}

pub fn rand_rat<R: Rng>(rng: &mut R, span: i64, den: i64) -> Rat {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

pub fn rand_root<R: Rng>(rng: &mut R, orders: &[u64]) -> CycNumber {
    let n = orders[rng.gen_range(0..orders.len())];
    CycNumber::root_of_unity(rng.gen_range(0..n as i64), n)
}

/// m/p^a + t for a ≤ max_den_exp.
pub fn rand_point<R: Rng>(rng: &mut R, q: u64, max_den_exp: u32, int_span: i64) -> Rat {
    let a = rng.gen_range(0..=max_den_exp);
    let d = q.pow(a) as i64;
    rat(rng.gen_range(0..d), d) + int(rng.gen_range(-int_span..=int_span))
}

/// Up to `max_pieces` pieces, |γ| ≤ 3, frequencies with |u| ≤ p^2.
pub fn rand_stepfn<R: Rng>(rng: &mut R, q: u64, max_pieces: usize) -> StepFunction {
    let pr = p(q);
    let n = rng.gen_range(0..=max_pieces);
    let pieces = (0..n)
        .map(|_| {
            let gamma = rng.gen_range(-3..=3);
            let c = rand_point(rng, q, 3, 2);
            let u = if rng.gen_bool(0.4) {
                Rat::zero()
            } else {
                rand_point(rng, q, 2, 0)
            };
            let w = rand_root(rng, &[1, q, q * q, 4]).scale(&rand_rat(rng, 3, 2));
            Piece::new(Ball::new(&c, gamma, pr), u, w)
        })
        .collect();
    StepFunction::from_pieces(pr, pieces)
}

/// Random element of Q(ζ_d) ⊂ Q(ζ_n) for a random divisor d of n, small rational coefficients.
pub fn rand_cyc<R: Rng>(rng: &mut R, n: u64) -> CycNumber {
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let d = divisors[rng.gen_range(0..divisors.len())];
    let len = rng.gen_range(1..=d as usize);
    let coeffs: Vec<Rat> = (0..len)
        .map(|_| {
            if rng.gen_bool(0.3) {
                Rat::zero()
            } else {
                rand_rat(rng, 5, 4)
            }
        })
        .collect();
    CycNumber::from_coeffs(d, &coeffs)
}
