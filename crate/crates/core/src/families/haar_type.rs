//! Wavelets generated by the Haar scaling function 1_{B_0(0)}: every compactly
//! supported one is ψ_j = Σ_ν Σ_k α^j_{ν,k} ψ_ν^{(0)}(x − k/p^s).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cyclotomic::{CycMatrix, CycNumber};
use crate::error::{Error, Result};
use crate::moments::{profile_of_function, profile_of_sequence, vanishing_order, Mode, MomentProfile, VanishingOrder};
use crate::mra::{refinement_term, wavelets_from_mask, FilterSeq};
use crate::padic::{Prime, Rat};
use crate::stepfn::StepFunction;

/// ψ_ν^{(0)}(x) = Σ_r e^{2πiνr/p} φ(x/p − r/p).
pub fn psi_nu_zero(p: Prime, nu: u64) -> Result<StepFunction> {
    if nu == 0 || nu >= p.get() {
        return Err(Error::InvalidInput(format!("ν = {} outside 1..{}", nu, p.get() - 1)));
    }
    let phi = StepFunction::unit_ball(p);
    let mut acc = StepFunction::zero(p);
    for r in 0..p.get() {
        let w = CycNumber::root_of_unity((nu * r) as i64, p.get());
        let term = refinement_term(&phi, &Rat::new(BigInt::from(r), p.big())).scale(&w);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The Haar mask viewed at level N = s: 1 at multiples of p^s, 0 elsewhere.
pub fn haar_mask_at_level(p: Prime, s: u32) -> FilterSeq {
    let mut h = FilterSeq::zero(p, s);
    let step = p.pow_u64(s);
    for r in 0..p.get() {
        h.set(r * step, CycNumber::one());
    }
    h
}

#[derive(Clone, Debug)]
pub struct HaarTypeParams {
    p: Prime,
    s: u32,
    /// σ_{j,m}, j ∈ 1..p, m ∈ 0..p^s
    sigma: BTreeMap<(u64, u64), CycNumber>,
    /// (p−1)×(p−1); z_{jν} sits at (j−1, ν−1).
    z: CycMatrix,
}

impl HaarTypeParams {
    pub fn new(p: Prime, s: u32, sigma: BTreeMap<(u64, u64), CycNumber>, z: CycMatrix) -> Result<HaarTypeParams> {
        let q = p.get();
        let ps = p.pow_u64(s);
        for j in 1..q {
            for m in 0..ps {
                match sigma.get(&(j, m)) {
                    None => return Err(Error::InvalidInput(format!("σ_{{{},{}}} missing", j, m))),
                    Some(v) if !v.is_unit_modulus() => {
                        return Err(Error::ParameterNotUnimodular(format!("σ_{{{},{}}} = {}", j, m, v)))
                    }
                    _ => {}
                }
            }
        }
        if let Some(((j, m), _)) = sigma.iter().find(|((j, m), _)| *j == 0 || *j >= q || *m >= ps) {
            return Err(Error::InvalidInput(format!("σ index ({}, {}) out of range", j, m)));
        }
        let n = (q - 1) as usize;
        if z.rows() != n || z.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Z is {}×{}, expected {}×{}",
                z.rows(),
                z.cols(),
                n,
                n
            )));
        }
        if z.gram() != CycMatrix::identity(n) {
            return Err(Error::ZNotUnitary);
        }
        Ok(HaarTypeParams { p, s, sigma, z })
    }

    /// σ ≡ 1, Z = I.
    pub fn default_for(p: Prime, s: u32) -> HaarTypeParams {
        let q = p.get();
        let sigma = (1..q)
            .flat_map(|j| (0..p.pow_u64(s)).map(move |m| ((j, m), CycNumber::one())))
            .collect();
        HaarTypeParams {
            p,
            s,
            sigma,
            z: CycMatrix::identity((q - 1) as usize),
        }
    }

    /// σ drawn from the roots of unity of order lcm(4, p) (p = 2) or 2p, Z a random
    /// monomial matrix with root-of-unity entries. With probability 1/3 a row of σ
    /// is made to sum to zero, which forces h_j(0) = 0 for the matching wavelet.
    pub fn random<R: Rng>(p: Prime, s: u32, rng: &mut R) -> HaarTypeParams {
        let q = p.get();
        let ps = p.pow_u64(s);
        let order = if q == 2 { 4 } else { 2 * q };
        let unit = |rng: &mut R| CycNumber::root_of_unity(rng.gen_range(0..order) as i64, order);
        let mut sigma = BTreeMap::new();
        for j in 1..q {
            let row: Vec<CycNumber> = if ps.is_multiple_of(q) && rng.gen_ratio(1, 3) {
                // equal counts of c·ζ_p^t, t = 0..p−1
                let c = unit(rng);
                let mut v: Vec<CycNumber> = (0..ps)
                    .map(|m| &c * &CycNumber::root_of_unity((m % q) as i64, q))
                    .collect();
                v.shuffle(rng);
                v
            } else {
                (0..ps).map(|_| unit(rng)).collect()
            };
            for (m, v) in row.into_iter().enumerate() {
                sigma.insert((j, m as u64), v);
            }
        }
        let n = (q - 1) as usize;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let entries: Vec<CycNumber> = (0..n * n)
            .map(|idx| {
                let (i, c) = (idx / n, idx % n);
                if perm[i] == c {
                    unit(rng)
                } else {
                    CycNumber::zero()
                }
            })
            .collect();
        let z = CycMatrix::new(n, n, entries).expect("square shape");
        HaarTypeParams::new(p, s, sigma, z).expect("random parameters are valid")
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn sigma(&self) -> &BTreeMap<(u64, u64), CycNumber> {
        &self.sigma
    }

    pub fn z(&self) -> &CycMatrix {
        &self.z
    }

    fn sig(&self, j: u64, m: u64) -> &CycNumber {
        &self.sigma[&(j, m)]
    }

    fn zz(&self, j: u64, nu: u64) -> CycNumber {
        self.z.get((j - 1) as usize, (nu - 1) as usize).clone()
    }
}

/// α^j_{ν,k} keyed by (ν, k, j).
pub type Alphas = BTreeMap<(u64, u64, u64), CycNumber>;

pub fn haar_type_alphas(params: &HaarTypeParams) -> Result<Alphas> {
    let p = params.p;
    let q = p.get();
    let ps = p.pow_u64(params.s);
    let n = ps * q;
    let inv_ps = Rat::new(BigInt::one(), BigInt::from(ps));
    let inv_ps2 = &inv_ps * &inv_ps;
    // e^{−2πi(−ν/p + m)k/p^s} = ζ_{p^{s+1}}^{(ν − m p)k}
    let phase = |nu: u64, m: u64, k: u64| CycNumber::root_of_unity((nu as i64 - (m * q) as i64) * k as i64, n);
    let mut inverses: HashMap<i64, CycNumber> = HashMap::new();
    let mut divisor_inv = |e: i64| -> Result<CycNumber> {
        let e = e.rem_euclid(n as i64);
        if let Some(v) = inverses.get(&e) {
            return Ok(v.clone());
        }
        // e ≡ j − ν ≢ 0 (mod p), so ζ^e ≠ 1.
        assert!(e % q as i64 != 0, "vanishing divisor in the j ≠ ν branch");
        let v = (CycNumber::root_of_unity(e, n) - CycNumber::one()).inv()?;
        inverses.insert(e, v.clone());
        Ok(v)
    };
    let mut out = Alphas::new();
    for j in 1..q {
        for nu in 1..q {
            if j == nu {
                let z = params.zz(j, j);
                for k in 0..ps {
                    let s: CycNumber = (0..ps).map(|m| &phase(nu, m, k) * params.sig(j, m)).sum();
                    out.insert((nu, k, j), (&s * &z).scale(&-&inv_ps));
                }
                continue;
            }
            let d = j as i64 - nu as i64;
            let num = CycNumber::one() - CycNumber::root_of_unity(d, q);
            // Σ_n (1 − ζ_p^{j−ν}) / (ζ^{(j−ν) + p(m−n)} − 1), per m
            let mut inner = Vec::with_capacity(ps as usize);
            for m in 0..ps {
                let mut acc = CycNumber::zero();
                for nn in 0..ps {
                    acc = &acc + &divisor_inv(d + q as i64 * (m as i64 - nn as i64))?;
                }
                inner.push(&acc * &num);
            }
            let z = params.zz(nu, j);
            for k in 0..ps {
                let s: CycNumber = (0..ps)
                    .map(|m| &(&phase(nu, m, k) * &inner[m as usize]) * params.sig(nu, m))
                    .sum();
                out.insert((nu, k, j), (&s * &z).scale(&inv_ps2));
            }
        }
    }
    Ok(out)
}

/// h_j((k + r p^s)/p^{s+1}) = Σ_ν α^j_{ν,k} e^{2πiνr/p}
pub fn haar_type_filter(params: &HaarTypeParams, alphas: &Alphas, j: u64) -> FilterSeq {
    let p = params.p;
    let q = p.get();
    let ps = p.pow_u64(params.s);
    let mut h = FilterSeq::zero(p, params.s);
    for k in 0..ps {
        for r in 0..q {
            let v: CycNumber = (1..q)
                .map(|nu| &alphas[&(nu, k, j)] * &CycNumber::root_of_unity((nu * r) as i64, q))
                .sum();
            h.set(k + r * ps, v);
        }
    }
    h
}

#[derive(Clone, Debug)]
pub struct HaarTypeWavelet {
    pub j: u64,
    pub psi: StepFunction,
    pub filter: FilterSeq,
}

pub fn haar_type_wavelets(params: &HaarTypeParams) -> Result<Vec<HaarTypeWavelet>> {
    let p = params.p;
    let q = p.get();
    let ps = p.pow_u64(params.s);
    let alphas = haar_type_alphas(params)?;
    let base: Vec<StepFunction> = (1..q).map(|nu| psi_nu_zero(p, nu)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for j in 1..q {
        let mut psi = StepFunction::zero(p);
        for nu in 1..q {
            for k in 0..ps {
                let a = &alphas[&(nu, k, j)];
                let shifted = base[(nu - 1) as usize].translate(&Rat::new(BigInt::from(k), BigInt::from(ps)));
                psi = psi.add(&shifted.scale(a))?;
            }
        }
        out.push(HaarTypeWavelet {
            j,
            psi,
            filter: haar_type_filter(params, &alphas, j),
        });
    }
    Ok(out)
}

/// ψ_j rebuilt from its filter through the refinement operator of the Haar function.
pub fn haar_type_from_filter(w: &HaarTypeWavelet) -> Result<StepFunction> {
    wavelets_from_mask(&StepFunction::unit_ball(w.filter.p()), &w.filter)
}

#[derive(Clone, Debug)]
pub struct HaarTypeMomentRow {
    pub j: u64,
    pub h0: CycNumber,
    pub filter_sum_zero: bool,
    pub sequence_order: VanishingOrder,
    pub function_order: VanishingOrder,
    /// μ > 0 part of Σ_a h_j(a)|a|^μ equals −p^μ·h_j(0)
    pub profile_matches: bool,
    /// order = ∞ ⟺ h_j(0) = 0, and order = 1 otherwise
    pub dichotomy: bool,
}

pub fn haar_type_moment_criterion(params: &HaarTypeParams) -> Result<Vec<HaarTypeMomentRow>> {
    let p = params.p;
    let mut rows = Vec::new();
    for w in haar_type_wavelets(params)? {
        let h0 = w.filter.get(0);
        let pr = profile_of_sequence(&w.filter);
        let mut target = MomentProfile::empty(p);
        target.add_shell(1, &-&h0);
        let profile_matches = pr.cleared_coefficients() == target.cleared_coefficients();
        let sequence_order = vanishing_order(&pr, Mode::Real, 2);
        let function_order = vanishing_order(
            &profile_of_function(&w.psi, &Rat::from_integer(BigInt::from(0))),
            Mode::Real,
            2,
        );
        let dichotomy = if h0.is_zero() {
            sequence_order == VanishingOrder::Infinite
        } else {
            sequence_order == VanishingOrder::Finite(1)
        };
        rows.push(HaarTypeMomentRow {
            j: w.j,
            filter_sum_zero: w.filter.sum().is_zero(),
            h0,
            sequence_order,
            function_order,
            profile_matches,
            dichotomy,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int, Ball};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn psi_base() {
        let p2 = p(2);
        let psi = psi_nu_zero(p2, 1).unwrap();
        // φ(x/2) − φ(x/2 − 1/2): +1 on |x| ≤ 1/2, −1 on |x − 1| ≤ 1/2
        let direct = StepFunction::indicator(Ball::new(&int(0), -1, p2), p2)
            .sub(&StepFunction::indicator(Ball::new(&int(1), -1, p2), p2))
            .unwrap();
        assert_eq!(psi, direct);
        assert!(psi.integral().is_zero());
        let p3 = p(3);
        let psi = psi_nu_zero(p3, 1).unwrap();
        assert_eq!(psi.evaluate(&int(1)), CycNumber::root_of_unity(1, 3));
        assert_eq!(psi.evaluate(&int(2)), CycNumber::root_of_unity(2, 3));
        assert!(psi_nu_zero(p3, 3).is_err());
    }

    #[test]
    fn s_zero_is_classical() {
        let w = haar_type_wavelets(&HaarTypeParams::default_for(p(2), 0)).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].psi, psi_nu_zero(p(2), 1).unwrap().neg());
        assert_eq!(w[0].filter.get(0), CycNumber::from_int(-1));
        assert_eq!(w[0].filter.get(1), CycNumber::one());
    }

    #[test]
    fn example_sum_rule() {
        let prm = HaarTypeParams::default_for(p(2), 2);
        let w = haar_type_wavelets(&prm).unwrap();
        assert!(w[0].filter.sum().is_zero());
        for k in 0..4 {
            assert_eq!(w[0].filter.get(k + 4), -&w[0].filter.get(k));
        }
        assert_eq!(haar_type_from_filter(&w[0]).unwrap(), w[0].psi);
    }

    #[test]
    fn invalid_params() {
        let p3 = p(3);
        let good = HaarTypeParams::default_for(p3, 0);
        let mut sigma = good.sigma().clone();
        sigma.insert((1, 0), CycNumber::from_int(2));
        assert!(matches!(
            HaarTypeParams::new(p3, 0, sigma, good.z().clone()),
            Err(Error::ParameterNotUnimodular(_))
        ));
        let z = CycMatrix::new(2, 2, vec![CycNumber::one(); 4]).unwrap();
        assert!(matches!(
            HaarTypeParams::new(p3, 0, good.sigma().clone(), z),
            Err(Error::ZNotUnitary)
        ));
    }
}
