//! Modulated-indicator wavelets θ_s = χ(s·)1_{B_0(0)}, s ∈ J_{p,m}, and their
//! filtered combinations ψ_s = Σ_k α_{s,k} θ_s(x − k/p^ν).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::Rng;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::moments::{profile_of_function, vanishing_order, Mode, MomentProfile, VanishingOrder};
use crate::mra::approximation_order;
use crate::padic::{Prime, Rat};
use crate::stepfn::StepFunction;

/// {t/p^m : 0 < t < p^m, p ∤ t}, increasing.
pub fn jpm(p: Prime, m: u32) -> Vec<Rat> {
    assert!(m >= 1, "J_{{p,m}} needs m ≥ 1");
    let pm = p.pow_u64(m);
    (1..pm)
        .filter(|t| t % p.get() != 0)
        .map(|t| Rat::new(BigInt::from(t), BigInt::from(pm)))
        .collect()
}

fn check_s(p: Prime, m: u32, s: &Rat) -> Result<u64> {
    let pm = p.pow_u64(m);
    let t = s * Rat::from_integer(BigInt::from(pm));
    let ok = t.is_integer()
        && t > Rat::zero()
        && t < Rat::from_integer(BigInt::from(pm))
        && !(t.to_integer() % p.big()).is_zero();
    if !ok || m == 0 {
        return Err(Error::SNotInJpm(format!("{} for p = {}, m = {}", s, p, m)));
    }
    Ok(u64::try_from(t.to_integer()).expect("t < p^m"))
}

pub fn theta_wavelet(p: Prime, m: u32, s: &Rat) -> Result<StepFunction> {
    check_s(p, m, s)?;
    Ok(StepFunction::unit_ball(p).modulate(s))
}

#[derive(Clone, Debug)]
pub struct NonHaarParams {
    pub p: Prime,
    pub m: u32,
    pub nu: u32,
    pub s: Rat,
    /// γ_{s,r}, r ∈ 0..p^ν
    pub gamma: Vec<CycNumber>,
}

impl NonHaarParams {
    pub fn new(p: Prime, m: u32, nu: u32, s: Rat, gamma: Vec<CycNumber>) -> Result<NonHaarParams> {
        check_s(p, m, &s)?;
        if nu == 0 {
            return Err(Error::InvalidInput("ν must be at least 1".into()));
        }
        if gamma.len() as u64 != p.pow_u64(nu) {
            return Err(Error::DimensionMismatch(format!(
                "{} values of γ, expected p^ν = {}",
                gamma.len(),
                p.pow_u64(nu)
            )));
        }
        if let Some((r, g)) = gamma.iter().enumerate().find(|(_, g)| !g.is_unit_modulus()) {
            return Err(Error::ParameterNotUnimodular(format!("γ_{} = {}", r, g)));
        }
        Ok(NonHaarParams { p, m, nu, s, gamma })
    }

    /// γ ≡ 1
    pub fn default_for(p: Prime, m: u32, nu: u32, s: Rat) -> Result<NonHaarParams> {
        let n = p.pow_u64(nu) as usize;
        NonHaarParams::new(p, m, nu, s, vec![CycNumber::one(); n])
    }

    /// γ drawn from the roots of unity of order 4p.
    pub fn random<R: Rng>(p: Prime, m: u32, nu: u32, s: Rat, rng: &mut R) -> Result<NonHaarParams> {
        let order = 4 * p.get();
        let gamma = (0..p.pow_u64(nu))
            .map(|_| CycNumber::root_of_unity(rng.gen_range(0..order) as i64, order))
            .collect();
        NonHaarParams::new(p, m, nu, s, gamma)
    }
}

/// α_{s,k} = p^{−ν} Σ_r γ_{s,r} e^{−2πi(−s + r)k/p^ν}
pub fn non_haar_alphas(params: &NonHaarParams) -> Vec<CycNumber> {
    let p = params.p;
    let t = check_s(p, params.m, &params.s).expect("validated");
    let pnu = p.pow_u64(params.nu);
    let pm = p.pow_u64(params.m);
    let n = pm * pnu;
    let inv = Rat::new(BigInt::one(), BigInt::from(pnu));
    (0..pnu)
        .map(|k| {
            let s: CycNumber = params
                .gamma
                .iter()
                .enumerate()
                .map(|(r, g)| {
                    let e = (t as i64 - (r as u64 * pm) as i64) * k as i64;
                    g * &CycNumber::root_of_unity(e, n)
                })
                .sum();
            s.scale(&inv)
        })
        .collect()
}

pub fn non_haar_wavelet(params: &NonHaarParams) -> Result<(StepFunction, Vec<CycNumber>)> {
    let p = params.p;
    let theta = theta_wavelet(p, params.m, &params.s)?;
    let alphas = non_haar_alphas(params);
    let pnu = BigInt::from(p.pow_u64(params.nu));
    let mut psi = StepFunction::zero(p);
    for (k, a) in alphas.iter().enumerate() {
        let shifted = theta.translate(&Rat::new(BigInt::from(k), pnu.clone()));
        psi = psi.add(&shifted.scale(a))?;
    }
    Ok((psi, alphas))
}

#[derive(Clone, Debug)]
pub struct NonHaarRow {
    pub s: Rat,
    pub theta_order: VanishingOrder,
    pub psi_order: VanishingOrder,
    /// θ̂ = φ̂(· + s) as step functions
    pub theta_shift_identity: bool,
    /// D^μψ̂(0) = α_{s,0}·D^μφ̂(s) for all μ
    pub direct_path: bool,
    /// Σ_k α_k Σ_β C(μ,β) p^{νβ} D^{μ−β}φ̂(s), μ < k
    pub leibniz_values: Vec<CycNumber>,
    /// both paths vanish for μ below the approximation order of φ
    pub paths_agree: bool,
    /// approximation order k ⟹ ψ and θ have ≥ k moments
    pub implication: bool,
}

#[derive(Clone, Debug)]
pub struct NonHaarReport {
    pub k: u32,
    pub phi_has_order_k: bool,
    /// largest j ≤ k for which φ has approximation order j
    pub phi_order: u32,
    pub rows: Vec<NonHaarRow>,
    pub passed: bool,
}

/// For every s ∈ J_{p,m}: moment orders of θ_s and ψ_s (γ given per s, or ≡ 1)
/// against the approximation order of 1_{B_0(0)}.
pub fn non_haar_moment_check(
    p: Prime,
    m: u32,
    k: u32,
    nu: u32,
    gamma: &BTreeMap<Rat, Vec<CycNumber>>,
    mode: Mode,
) -> Result<NonHaarReport> {
    let phi = StepFunction::unit_ball(p);
    let phi_hat = phi.fourier();
    let mut phi_order = 0;
    for j in 1..=k {
        if approximation_order(&phi, j, None, mode).holds {
            phi_order = j;
        } else {
            break;
        }
    }
    let phi_has_order_k = phi_order >= k;
    let zero = Rat::zero();
    let mut rows = Vec::new();
    for s in jpm(p, m) {
        let params = match gamma.get(&s) {
            Some(g) => NonHaarParams::new(p, m, nu, s.clone(), g.clone())?,
            None => NonHaarParams::default_for(p, m, nu, s.clone())?,
        };
        let theta = theta_wavelet(p, m, &s)?;
        let (psi, alphas) = non_haar_wavelet(&params)?;
        let theta_shift_identity = theta.fourier() == phi_hat.translate(&-&s);
        // D^μφ̂(s) = ∫|x|^μ φ(x) χ(sx) dx
        let phi_at_s = profile_of_function(&phi, &-&s);
        let psi_pr = profile_of_function(&psi, &zero);
        let theta_pr = profile_of_function(&theta, &zero);
        let expected = phi_at_s.scale(&alphas[0]);
        let direct_path = same_profile(&psi_pr, &expected);
        let theta_order = vanishing_order(&theta_pr, mode, k);
        let psi_order = vanishing_order(&psi_pr, mode, k);
        let alpha_sum: CycNumber = alphas.iter().cloned().sum();
        let leibniz_values: Vec<CycNumber> = (0..k)
            .map(|mu| {
                let mut acc = CycNumber::zero();
                for beta in 0..=mu {
                    let c =
                        Rat::from_integer(binomial(BigInt::from(mu), BigInt::from(beta))) * p.pow((nu * beta) as i64);
                    acc = &acc + &phi_at_s.eval(mu - beta).scale(&c);
                }
                &acc * &alpha_sum
            })
            .collect();
        let paths_agree =
            (0..phi_order.min(k) as usize).all(|mu| leibniz_values[mu].is_zero() && psi_pr.eval(mu as u32).is_zero());
        let implication = !phi_has_order_k || (theta_order.at_least(k) && psi_order.at_least(k));
        rows.push(NonHaarRow {
            s,
            theta_order,
            psi_order,
            theta_shift_identity,
            direct_path,
            leibniz_values,
            paths_agree,
            implication,
        });
    }
    let passed = rows
        .iter()
        .all(|r| r.theta_shift_identity && r.direct_path && r.paths_agree && r.implication);
    Ok(NonHaarReport {
        k,
        phi_has_order_k,
        phi_order,
        rows,
        passed,
    })
}

/// Equality of μ ↦ E(μ) for every integer μ ≥ 0.
pub fn same_profile(a: &MomentProfile, b: &MomentProfile) -> bool {
    a.eval(0) == b.eval(0) && a.cleared_coefficients() == b.cleared_coefficients()
}
