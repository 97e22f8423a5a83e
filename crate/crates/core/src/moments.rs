//! Moment profiles μ ↦ zeroMass·[μ=0] + Σ c_γ p^{γμ} + Σ d_γ T(γ, μ) and the
//! vanishing-order decision built on them.
//!
//! T(γ, μ) = (1 − p^{−1}) p^{γ(μ+1)} / (1 − p^{−(μ+1)}) = ∫_{B_γ(0)} |x|^μ dx.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::cyclotomic::CycNumber;
use crate::mra::{FilterSeq, TrigPoly};
use crate::padic::{norm_exp, NormExp, Prime, Rat};
use crate::stepfn::{chi, StepFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentProfile {
    p: Prime,
    zero_mass: CycNumber,
    shells: BTreeMap<i64, CycNumber>,
    tails: BTreeMap<i64, CycNumber>,
}

fn accumulate(map: &mut BTreeMap<i64, CycNumber>, k: i64, v: &CycNumber) {
    if v.is_zero() {
        return;
    }
    let e = map.entry(k).or_insert_with(CycNumber::zero);
    *e = &*e + v;
    if e.is_zero() {
        map.remove(&k);
    }
}

/// T(γ, μ) for integer μ ≥ 0.
pub fn tail_value(p: Prime, gamma: i64, mu: u32) -> Rat {
    let m = mu as i64 + 1;
    let one = Rat::one();
    let q = Rat::from_integer(p.big());
    (&one - &one / &q) * p.pow(gamma * m) / (&one - p.pow(-m))
}

impl MomentProfile {
    pub fn empty(p: Prime) -> MomentProfile {
        MomentProfile {
            p,
            zero_mass: CycNumber::zero(),
            shells: BTreeMap::new(),
            tails: BTreeMap::new(),
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn zero_mass(&self) -> &CycNumber {
        &self.zero_mass
    }

    pub fn shells(&self) -> &BTreeMap<i64, CycNumber> {
        &self.shells
    }

    pub fn tails(&self) -> &BTreeMap<i64, CycNumber> {
        &self.tails
    }

    pub fn add_zero_mass(&mut self, v: &CycNumber) {
        self.zero_mass = &self.zero_mass + v;
    }

    pub fn add_shell(&mut self, gamma: i64, v: &CycNumber) {
        accumulate(&mut self.shells, gamma, v);
    }

    pub fn add_tail(&mut self, gamma: i64, v: &CycNumber) {
        accumulate(&mut self.tails, gamma, v);
    }

    pub fn is_empty(&self) -> bool {
        self.zero_mass.is_zero() && self.shells.is_empty() && self.tails.is_empty()
    }

    pub fn scale(&self, c: &CycNumber) -> MomentProfile {
        let mut out = MomentProfile::empty(self.p);
        out.add_zero_mass(&(&self.zero_mass * c));
        for (g, v) in &self.shells {
            out.add_shell(*g, &(v * c));
        }
        for (g, v) in &self.tails {
            out.add_tail(*g, &(v * c));
        }
        out
    }

    pub fn add(&self, other: &MomentProfile) -> MomentProfile {
        let mut out = self.clone();
        out.add_zero_mass(&other.zero_mass);
        for (g, v) in &other.shells {
            out.add_shell(*g, v);
        }
        for (g, v) in &other.tails {
            out.add_tail(*g, v);
        }
        out
    }

    pub fn eval(&self, mu: u32) -> CycNumber {
        let mut acc = if mu == 0 {
            self.zero_mass.clone()
        } else {
            CycNumber::zero()
        };
        for (g, c) in &self.shells {
            acc = &acc + &c.scale(&self.p.pow(g * mu as i64));
        }
        for (g, d) in &self.tails {
            acc = &acc + &d.scale(&tail_value(self.p, *g, mu));
        }
        acc
    }

    /// Coefficients of E(μ)·(1 − p^{−(μ+1)}) in the exponentials p^{eμ}, μ > 0.
    pub fn cleared_coefficients(&self) -> BTreeMap<i64, CycNumber> {
        let inv_p = Rat::new(BigInt::one(), self.p.big());
        let one_minus = Rat::one() - &inv_p;
        let mut out = BTreeMap::new();
        for (e, c) in &self.shells {
            accumulate(&mut out, *e, c);
            accumulate(&mut out, e - 1, &c.scale(&-&inv_p));
        }
        for (e, d) in &self.tails {
            accumulate(&mut out, *e, &d.scale(&(&one_minus * self.p.pow(*e))));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Real,
    Integer,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Real => "real",
            Mode::Integer => "integer",
        })
    }
}

/// Number of p-vanishing moments. In real mode only 0, 1 and ∞ occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VanishingOrder {
    Finite(u32),
    Infinite,
}

impl VanishingOrder {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            VanishingOrder::Infinite => true,
            VanishingOrder::Finite(n) => n >= k,
        }
    }
}

impl fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingOrder::Finite(n) => write!(f, "{}", n),
            VanishingOrder::Infinite => f.write_str("inf"),
        }
    }
}

pub fn vanishing_order(pr: &MomentProfile, mode: Mode, bound: u32) -> VanishingOrder {
    if !pr.eval(0).is_zero() {
        return VanishingOrder::Finite(0);
    }
    if pr.cleared_coefficients().is_empty() {
        return VanishingOrder::Infinite;
    }
    match mode {
        Mode::Real => VanishingOrder::Finite(1),
        Mode::Integer => {
            let bound = bound.max(1);
            for mu in 1..bound {
                if !pr.eval(mu).is_zero() {
                    return VanishingOrder::Finite(mu);
                }
            }
            VanishingOrder::Finite(bound)
        }
    }
}

/// Discrete moments Σ_a b(a)|a|^μ.
pub fn profile_of_sequence(b: &FilterSeq) -> MomentProfile {
    let p = b.p();
    let mut pr = MomentProfile::empty(p);
    for (a, w) in b.points() {
        match norm_exp(&a, p) {
            NormExp::Zero => pr.add_zero_mass(&w),
            NormExp::Exp(g) => pr.add_shell(g, &w),
        }
    }
    pr
}

/// ∫ |x|^μ f(x) χ(−ux) dx, i.e. (D^μ f̂)(−u).
pub fn profile_of_function(f: &StepFunction, u: &Rat) -> MomentProfile {
    let p = f.p();
    let mut pr = MomentProfile::empty(p);
    for pc in f.pieces() {
        let g = pc.ball.radius_exp();
        let v = &pc.freq - u;
        let w = &pc.coeff;
        if let Some(e) = pc.ball.constant_norm(p) {
            if norm_exp(&v, p).le(-g) {
                let val = (w * &chi(&(&v * pc.ball.center()), p)).scale(&p.pow(g));
                pr.add_shell(e, &val);
            }
            continue;
        }
        match norm_exp(&v, p) {
            NormExp::Zero => pr.add_tail(g, w),
            NormExp::Exp(e) => {
                pr.add_tail(g.min(-e), w);
                if g >= 1 - e {
                    pr.add_shell(1 - e, &w.scale(&-p.pow(-e)));
                }
            }
        }
    }
    pr
}

/// Termwise D^μ of T = Σ c_a χ(a, ·) at ξ0: Σ c_a |a|^μ χ(a ξ0).
pub fn profile_of_trig_poly_at(t: &TrigPoly, xi0: &Rat) -> MomentProfile {
    let p = t.p();
    let mut pr = MomentProfile::empty(p);
    for (a, c) in t.terms() {
        let v = c * &chi(&(a * xi0), p);
        match norm_exp(a, p) {
            NormExp::Zero => pr.add_zero_mass(&v),
            NormExp::Exp(g) => pr.add_shell(g, &v),
        }
    }
    pr
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int, rat};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn unit_ball_profile() {
        for q in [2u64, 3, 5] {
            let pp = p(q);
            let phi = StepFunction::unit_ball(pp);
            let pr = profile_of_function(&phi, &int(0));
            assert!(pr.eval(0).is_one());
            assert_eq!(pr.tails().len(), 1);
            assert_eq!(pr.eval(1), CycNumber::from_rat(&rat(q as i64, q as i64 + 1)));
            let pr2 = profile_of_function(&phi, &rat(1, q as i64));
            assert!(pr2.eval(0).is_zero());
            assert!(!pr2.eval(1).is_zero());
        }
    }

    #[test]
    fn cleared() {
        let pp = p(3);
        let mut pr = MomentProfile::empty(pp);
        let x = CycNumber::root_of_unity(1, 3);
        pr.add_shell(1, &x);
        let cc = pr.cleared_coefficients();
        assert_eq!(cc[&1], x);
        assert_eq!(cc[&0], x.scale(&rat(-1, 3)));
        let mut z = MomentProfile::empty(pp);
        z.add_zero_mass(&x);
        assert!(z.cleared_coefficients().is_empty());
        assert!(MomentProfile::empty(pp).eval(4).is_zero());
    }

    #[test]
    fn tail_at_zero() {
        for g in -3..3 {
            assert_eq!(tail_value(p(5), g, 0), p(5).pow(g));
        }
    }
}
