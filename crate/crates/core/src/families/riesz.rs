//! Nonorthogonal scaling functions φ_{M,N} given by infinite products of
//! m_0(ξ) = p^{−1} Π_{r∈A_K} (χ_p(ξ) − χ_p(r)), K = M + N, and the wavelets built
//! from n_0(ξ) = p^{−1} Π_{r∈B_K} (χ_p(ξ) − χ_p(r)).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::CycNumber;
use crate::moments::{profile_of_function, profile_of_trig_poly_at, vanishing_order, Mode, VanishingOrder};
use crate::mra::{FilterSeq, TrigPoly};
use crate::padic::{frac_part, norm_exp, Ball, NormExp, Prime, Rat};
use crate::stepfn::{chi, Piece, StepFunction};

/// (A_K, B_K) as sorted lists.
pub fn riesz_index_sets(p: Prime, k: u32) -> (Vec<Rat>, Vec<Rat>) {
    let q = p.get();
    let r = |n: u64, d: u64| Rat::new(BigInt::from(n), BigInt::from(d));
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    b.insert(Rat::zero());
    for j in 1..=k {
        let pj = p.pow_u64(j);
        for bb in 1..q {
            b.insert(r(pj - bb, pj));
            for aa in 1..q {
                a.insert(r(aa * pj - bb, pj * q));
            }
        }
    }
    let top = p.pow_u64(k + 1);
    for bb in 1..q {
        a.insert(r(top - bb, top));
    }
    (a.into_iter().collect(), b.into_iter().collect())
}

/// p^{−1} Π_r (X − χ_p(r)) expanded in X = χ_p(ξ).
fn root_product(p: Prime, roots: &[Rat]) -> TrigPoly {
    let mut coeffs = vec![CycNumber::one()];
    for r in roots {
        let c = chi(r, p);
        let mut next = vec![CycNumber::zero(); coeffs.len() + 1];
        for (t, a) in coeffs.iter().enumerate() {
            next[t + 1] = &next[t + 1] + a;
            next[t] = &next[t] - &(a * &c);
        }
        coeffs = next;
    }
    let inv = Rat::new(BigInt::one(), p.big());
    let coeffs: Vec<CycNumber> = coeffs.iter().map(|c| c.scale(&inv)).collect();
    TrigPoly::from_x_poly(p, &coeffs)
}

/// (m_0, n_0) for K.
pub fn riesz_masks(p: Prime, k: u32) -> (TrigPoly, TrigPoly) {
    let (a, b) = riesz_index_sets(p, k);
    let m0 = root_product(p, &a);
    let n0 = root_product(p, &b);
    assert!(m0.eval(&Rat::zero()).is_one(), "m_0(0) = 1");
    assert!(n0.eval(&Rat::zero()).is_zero(), "n_0(0) = 0");
    (m0, n0)
}

/// φ̂_{M,N}(ξ) from the product directly: the factors with ξ/p^{N−j} ∈ Z_p equal 1.
pub fn riesz_phi_hat_at(p: Prime, m0: &TrigPoly, n: u32, xi: &Rat) -> CycNumber {
    let e = match norm_exp(xi, p) {
        NormExp::Zero => return CycNumber::one(),
        NormExp::Exp(e) => e,
    };
    let mut acc = CycNumber::one();
    for j in 0..(n as i64 + e).max(0) {
        let arg = xi * p.pow(j - n as i64);
        acc = &acc * &m0.eval(&frac_part(&arg, p));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct RieszSystem {
    pub p: Prime,
    pub m: u32,
    pub n: u32,
    pub m0: TrigPoly,
    pub n0: TrigPoly,
    pub phi_hat: StepFunction,
    pub psi_hat: StepFunction,
    pub phi: StepFunction,
    /// ψ^{(ν)}(x) = ψ(x − ν + 1), ν = 1..p−1
    pub wavelets: Vec<StepFunction>,
}

/// φ̂ on the grid l/p^M + B_{−N}(0), l < p^{M+N}; ψ̂ on l/p^{M+1} + B_{−N}(0).
pub fn riesz_system(p: Prime, m: u32, n: u32) -> RieszSystem {
    let (m0, n0) = riesz_masks(p, m + n);
    let grid = |top: u32| {
        let den = p.pow_int(top);
        (0..p.pow_u64(top + n)).map(move |l| Rat::new(BigInt::from(l), den.clone()))
    };
    let phi_pieces: Vec<Piece> = grid(m)
        .map(|xi| {
            let v = riesz_phi_hat_at(p, &m0, n, &xi);
            Piece::new(Ball::new(&xi, -(n as i64), p), Rat::zero(), v)
        })
        .collect();
    let phi_hat = StepFunction::from_pieces(p, phi_pieces);
    let pn = p.pow(-(n as i64));
    let scale = Rat::from_integer(p.big());
    let psi_pieces: Vec<Piece> = grid(m + 1)
        .map(|xi| {
            let v = &n0.eval(&(&xi * &pn)) * &riesz_phi_hat_at(p, &m0, n, &(&xi * &scale));
            Piece::new(Ball::new(&xi, -(n as i64), p), Rat::zero(), v)
        })
        .collect();
    let psi_hat = StepFunction::from_pieces(p, psi_pieces);
    let phi = phi_hat.inverse_fourier();
    let psi = psi_hat.inverse_fourier();
    let wavelets = (1..p.get())
        .map(|nu| psi.translate(&Rat::from_integer(BigInt::from(nu - 1))))
        .collect();
    RieszSystem {
        p,
        m,
        n,
        m0,
        n0,
        phi_hat,
        psi_hat,
        phi,
        wavelets,
    }
}

/// The refinement mask h(t/p^{N+1}) = p·[χ_p(ξ)^t]m_0, available when
/// deg m_0 < p^{N+1}.
pub fn riesz_mask(p: Prime, m: u32, n: u32) -> Option<FilterSeq> {
    let (m0, _) = riesz_masks(p, m + n);
    let len = p.pow_u64(n + 1);
    let mut h = FilterSeq::zero(p, n);
    let scale = CycNumber::from_rat(&Rat::from_integer(p.big()));
    for (t, c) in m0.terms() {
        let t = u64::try_from(t.to_integer()).ok()?;
        if t >= len {
            return None;
        }
        h.set(t, c * &scale);
    }
    Some(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RieszAdmissibility {
    pub generates_mra: bool,
    pub riesz_equality: bool,
}

/// M ≤ (p^N − 1)/(p − 1) − N and M = (p^N − 1)/(p − 1) − N, in integers.
pub fn riesz_admissible(p: Prime, m: u32, n: u32) -> RieszAdmissibility {
    let q = BigInt::from(p.get());
    let bound = (num_traits::pow(q.clone(), n as usize) - 1) / (q - 1) - BigInt::from(n);
    let mm = BigInt::from(m);
    RieszAdmissibility {
        generates_mra: mm <= bound,
        riesz_equality: mm == bound,
    }
}

/// l ∈ [0, p^K) with φ̂(l/p^M) ≠ 0, and l ∈ [0, p^{K+1}) with ψ̂(l/p^{M+1}) ≠ 0.
pub fn riesz_grid_patterns(sys: &RieszSystem) -> (Vec<u64>, Vec<u64>) {
    let p = sys.p;
    let k = sys.m + sys.n;
    let nonzero = |f: &StepFunction, top: u32, count: u64| -> Vec<u64> {
        let den = p.pow_int(top);
        (0..count)
            .filter(|l| !f.evaluate(&Rat::new(BigInt::from(*l), den.clone())).is_zero())
            .collect()
    };
    (
        nonzero(&sys.phi_hat, sys.m, p.pow_u64(k)),
        nonzero(&sys.psi_hat, sys.m + 1, p.pow_u64(k + 1)),
    )
}

/// p^K·B_K and p^{K+1}·A_K as integers.
pub fn riesz_expected_patterns(p: Prime, k: u32) -> (Vec<u64>, Vec<u64>) {
    let (a, b) = riesz_index_sets(p, k);
    let to_ints = |v: &[Rat], e: u32| -> Vec<u64> {
        let mut out: Vec<u64> = v
            .iter()
            .map(|r| u64::try_from((r * Rat::from_integer(p.pow_int(e))).to_integer()).unwrap())
            .collect();
        out.sort_unstable();
        out
    };
    (to_ints(&b, k), to_ints(&a, k + 1))
}

#[derive(Clone, Debug)]
pub struct RieszMomentReport {
    pub k: u32,
    pub mode: Mode,
    pub n0_order: VanishingOrder,
    pub wavelet_orders: Vec<VanishingOrder>,
    /// k moments for ψ^{(ν)} ⟺ D^μ n_0(0) = 0 for μ < k, for each ν
    pub biconditional: bool,
    /// all ψ^{(ν)} share the order of ψ = ψ^{(1)}
    pub translation_invariant: bool,
}

pub fn riesz_moment_criterion(sys: &RieszSystem, k: u32, mode: Mode) -> RieszMomentReport {
    let zero = Rat::zero();
    let n0_order = vanishing_order(&profile_of_trig_poly_at(&sys.n0, &zero), mode, k);
    let wavelet_orders: Vec<VanishingOrder> = sys
        .wavelets
        .iter()
        .map(|w| vanishing_order(&profile_of_function(w, &zero), mode, k))
        .collect();
    let biconditional = wavelet_orders.iter().all(|o| o.at_least(k) == n0_order.at_least(k));
    let translation_invariant = wavelet_orders.iter().all(|o| *o == wavelet_orders[0]);
    RieszMomentReport {
        k,
        mode,
        n0_order,
        wavelet_orders,
        biconditional,
        translation_invariant,
    }
}
