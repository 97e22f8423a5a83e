//! Refinement masks, their symbols, and the checks around them.
//!
//! The refinement term is φ(x/p − a) = dilate(translate(φ, a), −1), whose Fourier
//! transform is p^{−1} χ(p a ξ) φ̂(pξ). Hence φ̂(ξ) = H(pξ) φ̂(pξ) with
//! H(ξ) = p^{−1} Σ_k h(k/p^{N+1}) χ(k ξ / p^{N+1}).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::{CycMatrix, CycNumber};
use crate::error::{Error, Result};
use crate::moments::{profile_of_function, profile_of_trig_poly_at, vanishing_order, Mode, VanishingOrder};
use crate::padic::{norm_exp, NormExp, Prime, Rat};
use crate::stepfn::{chi, StepFunction};

/// A sequence on {k/p^{N+1} : 0 ≤ k < p^{N+1}}; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterSeq {
    p: Prime,
    n: u32,
    entries: BTreeMap<u64, CycNumber>,
}

impl FilterSeq {
    pub fn zero(p: Prime, n: u32) -> FilterSeq {
        FilterSeq {
            p,
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Dense constructor: `values[k]` is the entry at k/p^{N+1}.
    pub fn new(p: Prime, n: u32, values: Vec<CycNumber>) -> Result<FilterSeq> {
        let len = p.pow_u64(n + 1) as usize;
        if values.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "mask with p={} N={} needs {} entries, got {}",
                p,
                n,
                len,
                values.len()
            )));
        }
        let mut f = FilterSeq::zero(p, n);
        for (k, v) in values.into_iter().enumerate() {
            f.set(k as u64, v);
        }
        Ok(f)
    }

    pub fn set(&mut self, k: u64, v: CycNumber) {
        assert!(k < self.len() as u64, "index outside the mask support");
        if v.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, v);
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    /// The N of the support {k/p^{N+1}}.
    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.p.pow_u64(self.n + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: u64) -> CycNumber {
        self.entries.get(&k).cloned().unwrap_or_else(CycNumber::zero)
    }

    pub fn point(&self, k: u64) -> Rat {
        Rat::new(BigInt::from(k), self.p.pow_int(self.n + 1))
    }

    /// Nonzero entries as (point, value).
    pub fn points(&self) -> Vec<(Rat, CycNumber)> {
        self.entries.iter().map(|(k, v)| (self.point(*k), v.clone())).collect()
    }

    pub fn values(&self) -> Vec<CycNumber> {
        (0..self.len() as u64).map(|k| self.get(k)).collect()
    }

    pub fn sum(&self) -> CycNumber {
        self.entries.values().cloned().sum()
    }

    pub fn scale(&self, c: &CycNumber) -> FilterSeq {
        let mut out = FilterSeq::zero(self.p, self.n);
        for (k, v) in &self.entries {
            out.set(*k, v * c);
        }
        out
    }

    /// The same sequence viewed on the finer support of level n2 ≥ N.
    pub fn lift(&self, n2: u32) -> FilterSeq {
        assert!(n2 >= self.n);
        let step = self.p.pow_u64(n2 - self.n);
        let mut out = FilterSeq::zero(self.p, n2);
        for (k, v) in &self.entries {
            out.set(k * step, v.clone());
        }
        out
    }
}

/// ξ ↦ Σ c_a χ(a ξ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPoly {
    p: Prime,
    terms: BTreeMap<Rat, CycNumber>,
}

impl TrigPoly {
    pub fn zero(p: Prime) -> TrigPoly {
        TrigPoly {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn new(p: Prime, terms: impl IntoIterator<Item = (Rat, CycNumber)>) -> TrigPoly {
        let mut t = TrigPoly::zero(p);
        for (a, c) in terms {
            t.add_term(a, &c);
        }
        t
    }

    /// Σ_t c_t X^t with X = χ(ξ).
    pub fn from_x_poly(p: Prime, coeffs: &[CycNumber]) -> TrigPoly {
        TrigPoly::new(
            p,
            coeffs
                .iter()
                .enumerate()
                .map(|(t, c)| (Rat::from_integer(BigInt::from(t)), c.clone())),
        )
    }

    pub fn add_term(&mut self, a: Rat, c: &CycNumber) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert_with(CycNumber::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<Rat, CycNumber> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, xi: &Rat) -> CycNumber {
        self.terms.iter().map(|(a, c)| c * &chi(&(a * xi), self.p)).sum()
    }

    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = TrigPoly::zero(self.p);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a + b, &(c * d));
            }
        }
        out
    }

    /// Largest frequency, used as the degree of polynomials in χ(ξ).
    pub fn degree(&self) -> Option<Rat> {
        self.terms.keys().next_back().cloned()
    }
}

pub fn mask_symbol(h: &FilterSeq) -> TrigPoly {
    let inv_p = Rat::new(BigInt::one(), h.p().big());
    TrigPoly::new(h.p(), h.points().into_iter().map(|(a, v)| (a, v.scale(&inv_p))))
}

pub fn mask_sum_check(h: &FilterSeq) -> bool {
    h.sum() == CycNumber::from_rat(&Rat::from_integer(h.p().big()))
}

/// x ↦ φ(x/p − a)
pub fn refinement_term(phi: &StepFunction, a: &Rat) -> StepFunction {
    phi.translate(a).dilate(-1)
}

/// Σ_k h(k/p^{N+1})·φ(x/p − k/p^{N+1})
pub fn wavelets_from_mask(phi: &StepFunction, h: &FilterSeq) -> Result<StepFunction> {
    if phi.p() != h.p() {
        return Err(Error::PrimeMismatch(phi.p().get(), h.p().get()));
    }
    let mut acc = StepFunction::zero(phi.p());
    let base = phi.dilate(-1);
    for (a, v) in h.points() {
        // φ(x/p − a) = φ(x/p)(x − p a)
        let term = base.translate(&(&a * Rat::from_integer(h.p().big()))).scale(&v);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

pub fn verify_refinement(phi: &StepFunction, h: &FilterSeq) -> Result<bool> {
    Ok(wavelets_from_mask(phi, h)? == *phi)
}

/// φ̂(ξ) = H(pξ)·φ̂(pξ) as an identity of step functions.
pub fn fourier_refinement_check(phi: &StepFunction, h: &FilterSeq) -> Result<bool> {
    if phi.p() != h.p() {
        return Err(Error::PrimeMismatch(phi.p().get(), h.p().get()));
    }
    let p = phi.p();
    let fh = phi.fourier();
    let squeezed = fh.dilate(1);
    let inv_p = Rat::new(BigInt::one(), p.big());
    let mut rhs = StepFunction::zero(p);
    for (a, v) in h.points() {
        let freq = &a * Rat::from_integer(p.big());
        rhs = rhs.add(&squeezed.modulate(&freq).scale(&v.scale(&inv_p)))?;
    }
    Ok(rhs == fh)
}

/// The p×p character table [χ(jk/p)]_{j,k}.
pub fn character_table(p: Prime) -> CycMatrix {
    let q = p.get();
    CycMatrix::from_fn(q as usize, q as usize, |j, k| {
        CycNumber::root_of_unity((j as i64) * (k as i64), q)
    })
}

/// Solve p·H(j) = Σ_k h(k/p) χ(jk/p) = p·δ_{j0} via the conjugate transpose of the
/// character table.
pub fn solve_haar_mask(p: Prime) -> Result<FilterSeq> {
    let c = character_table(p);
    let pr = Rat::from_integer(p.big());
    if !c.is_scaled_unitary(&pr) {
        return Err(Error::Internal("character table is not scaled unitary".into()));
    }
    let mut rhs = vec![CycNumber::zero(); p.get() as usize];
    rhs[0] = CycNumber::from_rat(&pr);
    let inv_p = Rat::new(BigInt::one(), p.big());
    let sol = c.conj_transpose().mul_vec(&rhs)?;
    let h = FilterSeq::new(p, 0, sol.into_iter().map(|v| v.scale(&inv_p)).collect())?;
    if !mask_sum_check(&h) || !mask_orthonormality_test(&h).passed {
        return Err(Error::Internal("solved Haar mask fails its checks".into()));
    }
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct SymbolCondition {
    pub k: u64,
    pub value: CycNumber,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct MaskOrthonormalityReport {
    /// H(0) = 1
    pub at_zero: SymbolCondition,
    /// H(k) = 0 for p ∤ k
    pub vanishing: Vec<SymbolCondition>,
    /// |H(k)| = 1 for p | k, k ≠ 0
    pub unimodular: Vec<SymbolCondition>,
    pub passed: bool,
}

pub fn mask_orthonormality_test(h: &FilterSeq) -> MaskOrthonormalityReport {
    let sym = mask_symbol(h);
    let q = h.p().get();
    let v0 = sym.eval(&Rat::zero());
    let at_zero = SymbolCondition {
        k: 0,
        passed: v0.is_one(),
        value: v0,
    };
    let mut vanishing = Vec::new();
    let mut unimodular = Vec::new();
    for k in 1..h.len() as u64 {
        let value = sym.eval(&Rat::from_integer(BigInt::from(k)));
        if k % q == 0 {
            unimodular.push(SymbolCondition {
                k,
                passed: value.is_unit_modulus(),
                value,
            });
        } else {
            vanishing.push(SymbolCondition {
                k,
                passed: value.is_zero(),
                value,
            });
        }
    }
    let passed = at_zero.passed && vanishing.iter().all(|c| c.passed) && unimodular.iter().all(|c| c.passed);
    MaskOrthonormalityReport {
        at_zero,
        vanishing,
        unimodular,
        passed,
    }
}

fn check_bank_shapes(h: &FilterSeq, wavelets: &[FilterSeq]) -> Result<()> {
    if wavelets.len() + 1 != h.p().get() as usize {
        return Err(Error::DimensionMismatch(format!(
            "{} wavelet filters for p = {}",
            wavelets.len(),
            h.p()
        )));
    }
    for w in wavelets {
        if w.p() != h.p() || w.level() != h.level() {
            return Err(Error::DimensionMismatch(format!(
                "filter with (p, N) = ({}, {}) against ({}, {})",
                w.p(),
                w.level(),
                h.p(),
                h.level()
            )));
        }
    }
    Ok(())
}

/// Columns S^m h, m < p^N, followed by the same for each wavelet filter, where S is
/// the cyclic down-shift of length p^{N+1}.
pub fn build_u(h: &FilterSeq, wavelets: &[FilterSeq]) -> Result<CycMatrix> {
    check_bank_shapes(h, wavelets)?;
    let n = h.len();
    let shifts = h.p().pow_u64(h.level()) as usize;
    let mut cols: Vec<Vec<CycNumber>> = Vec::with_capacity(n);
    for f in std::iter::once(h).chain(wavelets.iter()) {
        let v = f.values();
        for m in 0..shifts {
            cols.push((0..n).map(|l| v[(l + n - m) % n].clone()).collect());
        }
    }
    Ok(CycMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
}

#[derive(Clone, Debug)]
pub struct FilterBankReport {
    /// Squared column scales: 1 for h, then one per wavelet filter.
    pub scales: Vec<Rat>,
    pub orthogonal: bool,
    pub normalized: bool,
    pub passed: bool,
}

/// Scaled unitarity of U·diag(√scales): off-diagonal Gram entries vanish and every
/// column has scale·‖col‖² = p. Default scales are all 1, i.e. isScaledUnitary(U, p).
pub fn verify_filter_bank(h: &FilterSeq, wavelets: &[FilterSeq], scales: Option<&[Rat]>) -> Result<FilterBankReport> {
    let u = build_u(h, wavelets)?;
    let scales: Vec<Rat> = match scales {
        Some(s) if s.len() == wavelets.len() => std::iter::once(Rat::one()).chain(s.iter().cloned()).collect(),
        Some(s) => {
            return Err(Error::DimensionMismatch(format!(
                "{} scales for {} wavelet filters",
                s.len(),
                wavelets.len()
            )))
        }
        None => vec![Rat::one(); wavelets.len() + 1],
    };
    let g = u.gram();
    let n = u.cols();
    let shifts = h.p().pow_u64(h.level()) as usize;
    let pr = CycNumber::from_rat(&Rat::from_integer(h.p().big()));
    let mut orthogonal = true;
    let mut normalized = true;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                let s = &scales[i / shifts];
                if g.get(i, i).scale(s) != pr {
                    normalized = false;
                }
            } else if !g.get(i, j).is_zero() {
                orthogonal = false;
            }
        }
    }
    Ok(FilterBankReport {
        scales,
        orthogonal,
        normalized,
        passed: orthogonal && normalized,
    })
}

/// p/‖h_j‖² for each wavelet filter whose squared norm is a positive rational.
pub fn bank_scales(wavelets: &[FilterSeq]) -> Option<Vec<Rat>> {
    wavelets
        .iter()
        .map(|w| {
            let n2: CycNumber = w.values().iter().map(|v| v.abs_sq()).sum();
            let r = n2.as_rational()?;
            if r > Rat::zero() {
                Some(Rat::from_integer(w.p().big()) / r)
            } else {
                None
            }
        })
        .collect()
}

/// Unnormalized orthogonal complement of an N = 0 mask by Gram–Schmidt on the
/// standard basis. Returns p − 1 filters whose squared norms are generally not p;
/// see `bank_scales`.
pub fn complete_haar_bank(h: &FilterSeq) -> Result<Vec<FilterSeq>> {
    if h.level() != 0 {
        return Err(Error::Unsupported(
            "orthogonal completion is implemented for N = 0 masks".into(),
        ));
    }
    let q = h.p().get() as usize;
    let dot = |x: &[CycNumber], y: &[CycNumber]| -> CycNumber { x.iter().zip(y).map(|(a, b)| a * &b.conj()).sum() };
    let mut basis: Vec<Vec<CycNumber>> = vec![h.values()];
    if basis[0].iter().all(|v| v.is_zero()) {
        return Err(Error::InvalidInput("zero mask".into()));
    }
    for e in 0..q {
        if basis.len() == q {
            break;
        }
        let mut v: Vec<CycNumber> = (0..q).map(|i| CycNumber::from_int((i == e) as i64)).collect();
        for u in &basis {
            let c = dot(&v, u).div(&dot(u, u))?;
            v = v.iter().zip(u).map(|(a, b)| a - &(&c * b)).collect();
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
        }
    }
    basis.into_iter().skip(1).map(|v| FilterSeq::new(h.p(), 0, v)).collect()
}

#[derive(Clone, Debug)]
pub struct ShiftReport {
    /// (a, ⟨f, g(· − a)⟩) for every a that was examined.
    pub values: Vec<(Rat, CycNumber)>,
    /// ⟨f, g(· − a)⟩ = δ_{0,a}
    pub delta: bool,
    /// ⟨f, g(· − a)⟩ = 0 for all a
    pub all_zero: bool,
}

pub fn shift_orthonormality(f: &StepFunction, g: &StepFunction, gamma_max: u32) -> Result<ShiftReport> {
    let mut values = Vec::new();
    for a in crate::padic::enumerate_ip(f.p(), gamma_max) {
        let v = f.inner_product(&g.translate(&a))?;
        values.push((a, v));
    }
    let delta = values
        .iter()
        .all(|(a, v)| if a.is_zero() { v.is_one() } else { v.is_zero() });
    let all_zero = values.iter().all(|(_, v)| v.is_zero());
    Ok(ShiftReport {
        values,
        delta,
        all_zero,
    })
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub count: u64,
    pub bound: u64,
    pub nonzero_at: Vec<u64>,
    pub refinable: Option<bool>,
    pub passed: bool,
}

/// Count l ∈ [0, p^{M+N}) with φ̂(l/p^M) ≠ 0 and compare with p^N.
pub fn mra_generation_check(phi: &StepFunction, m: u32, n: u32, mask: Option<&FilterSeq>) -> Result<GenerationReport> {
    let p = phi.p();
    let fh = phi.fourier();
    if fh.evaluate(&Rat::zero()).is_zero() {
        return Err(Error::NonzeroAtZeroViolation);
    }
    let den = p.pow_int(m);
    let mut nonzero_at = Vec::new();
    for l in 0..p.pow_u64(m + n) {
        if !fh.evaluate(&Rat::new(BigInt::from(l), den.clone())).is_zero() {
            nonzero_at.push(l);
        }
    }
    let refinable = mask.map(|h| verify_refinement(phi, h)).transpose()?;
    let bound = p.pow_u64(n);
    let count = nonzero_at.len() as u64;
    Ok(GenerationReport {
        count,
        bound,
        passed: count <= bound && refinable.unwrap_or(true),
        nonzero_at,
        refinable,
    })
}

#[derive(Clone, Debug)]
pub struct ApproximationReport {
    pub k: u32,
    pub mode: Mode,
    /// N with supp φ ⊂ B_N(0).
    pub support_exp: i64,
    /// All α with |α| ≤ p^level were examined; beyond it one representative suffices.
    pub level: u32,
    pub holds: bool,
    /// (α, order of D^μ φ̂ at p^N α) for the first failing α.
    pub witness: Option<(Rat, VanishingOrder)>,
}

/// D^μ φ̂(p^N α) = 0 for μ < k and every α ∈ I_p \ {0}.
///
/// Past level R + N + 1 (R = max over pieces of max(log_p|u|, −γ)) only a piece
/// containing 0 contributes and its profile has the same shape for every α, so a
/// single representative there stands for the rest of I_p.
pub fn approximation_order(phi: &StepFunction, k: u32, gamma_max: Option<u32>, mode: Mode) -> ApproximationReport {
    let p = phi.p();
    let n = phi.support_exponent().unwrap_or(0);
    let r = phi
        .pieces()
        .iter()
        .map(|pc| match norm_exp(&pc.freq, p) {
            NormExp::Zero => -pc.ball.radius_exp(),
            NormExp::Exp(e) => e.max(-pc.ball.radius_exp()),
        })
        .max()
        .unwrap_or(0);
    let mut level = (r + n + 1).max(1) as u32;
    if let Some(g) = gamma_max {
        level = level.max(g);
    }
    let pn = p.pow(n);
    let check = |alpha: Rat| -> Option<(Rat, VanishingOrder)> {
        let u = -(&pn * &alpha);
        let ord = vanishing_order(&profile_of_function(phi, &u), mode, k);
        if ord.at_least(k) {
            None
        } else {
            Some((alpha, ord))
        }
    };
    let mut witness = None;
    'outer: for g in 1..=level + 1 {
        let den = p.pow_int(g);
        let top = p.pow_u64(g);
        let step = if g == level + 1 { top } else { 1 };
        let mut m = 1u64;
        while m < top {
            if !m.is_multiple_of(p.get()) {
                if let Some(w) = check(Rat::new(BigInt::from(m), den.clone())) {
                    witness = Some(w);
                    break 'outer;
                }
            }
            m += step;
        }
    }
    ApproximationReport {
        k,
        mode,
        support_exp: n,
        level,
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Debug)]
pub struct StrangFixReport {
    pub k: u32,
    pub mode: Mode,
    /// (j, order of D^μ H at p^N j) for ω = j/p.
    pub orders: Vec<(u64, VanishingOrder)>,
    pub holds: bool,
}

/// D^μ H(p^{N+1} ω) = 0 for μ < k and ω ∈ {1/p, …, (p−1)/p}.
pub fn strang_fix(h: &FilterSeq, k: u32, mode: Mode) -> StrangFixReport {
    let sym = mask_symbol(h);
    let pn = h.p().pow_int(h.level());
    let orders: Vec<(u64, VanishingOrder)> = (1..h.p().get())
        .map(|j| {
            let xi = Rat::from_integer(&pn * BigInt::from(j));
            (j, vanishing_order(&profile_of_trig_poly_at(&sym, &xi), mode, k))
        })
        .collect();
    let holds = orders.iter().all(|(_, o)| o.at_least(k));
    StrangFixReport { k, mode, orders, holds }
}
