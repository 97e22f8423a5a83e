//! Finite sums of character-modulated ball indicators w·χ(u, x)·1_{B_γ(c)}(x).
//!
//! Sign conventions: χ(y) = e^{2πi{y}_p}, f̂(ξ) = ∫ f(x) χ(xξ) dx and
//! f(x) = ∫ f̂(ξ) χ(−xξ) dξ. With these,
//!   fourier ∘ translate_b = modulate_b ∘ fourier,
//!   fourier ∘ modulate_u = translate_{−u} ∘ fourier,
//!   fourier ∘ dilate_j = p^j · dilate_{−j} ∘ fourier,
//!   fourier ∘ fourier = reflect.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::mra::FilterSeq;
use crate::padic::{canonical_center, frac_part, norm_exp, Ball, NormExp, Prime, Rat};

/// χ(y) = e^{2πi{y}_p}, a p-power root of unity.
pub fn chi(y: &Rat, p: Prime) -> CycNumber {
    let f = frac_part(y, p);
    if f.is_zero() {
        return CycNumber::one();
    }
    let n = f.denom().to_u64().expect("character order fits u64");
    let k = (f.numer() % BigInt::from(n)).to_i64().expect("fits i64");
    CycNumber::root_of_unity(k, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub ball: Ball,
    pub freq: Rat,
    pub coeff: CycNumber,
}

impl Piece {
    pub fn new(ball: Ball, freq: Rat, coeff: CycNumber) -> Piece {
        Piece { ball, freq, coeff }
    }

    fn value_at(&self, x: &Rat, p: Prime) -> CycNumber {
        &self.coeff * &chi(&(&self.freq * x), p)
    }

    /// ∫_{B_γ(c)} w·χ(u x) dx = w·p^γ·χ(uc) if |u| ≤ p^{−γ}, else 0.
    fn integral(&self, p: Prime) -> CycNumber {
        ball_character_integral(&self.ball, &self.freq, p) * &self.coeff
    }
}

pub fn ball_character_integral(ball: &Ball, u: &Rat, p: Prime) -> CycNumber {
    let g = ball.radius_exp();
    if norm_exp(u, p).le(-g) {
        chi(&(u * ball.center()), p).scale(&p.pow(g))
    } else {
        CycNumber::zero()
    }
}

/// Split u into the canonical residue u′ for the ball's radius and the constant
/// χ((u − u′)c) it leaves behind on the ball.
fn fold(u: &Rat, ball: &Ball, p: Prime) -> (Rat, CycNumber) {
    let u2 = canonical_center(u, -ball.radius_exp(), p);
    let factor = chi(&((u - &u2) * ball.center()), p);
    (u2, factor)
}

/// Stored as a tidy but possibly overlapping list of pieces: each frequency is folded
/// to its residue for the ball, equal (ball, frequency) terms are merged and zero
/// terms dropped. Equality is decided by ‖f − g‖² = 0, which never refines balls;
/// the disjoint normal form is built only when asked for (`canonical`).
#[derive(Clone, Debug)]
pub struct StepFunction {
    p: Prime,
    pieces: Vec<Piece>,
}

impl PartialEq for StepFunction {
    fn eq(&self, other: &StepFunction) -> bool {
        if self.p != other.p {
            return false;
        }
        if self.pieces == other.pieces {
            return true;
        }
        let mut v = self.pieces.clone();
        v.extend(other.neg().pieces);
        tidy(self.p, v).is_zero()
    }
}

impl Eq for StepFunction {}

impl StepFunction {
    pub fn zero(p: Prime) -> StepFunction {
        StepFunction { p, pieces: vec![] }
    }

    pub fn indicator(ball: Ball, p: Prime) -> StepFunction {
        StepFunction::from_pieces(p, vec![Piece::new(ball, Rat::zero(), CycNumber::one())])
    }

    /// 1_{B_0(0)}
    pub fn unit_ball(p: Prime) -> StepFunction {
        StepFunction::indicator(Ball::new(&Rat::zero(), 0, p), p)
    }

    /// Any list of pieces; overlaps are allowed and add up.
    pub fn from_pieces(p: Prime, pieces: Vec<Piece>) -> StepFunction {
        tidy(p, pieces)
    }

    /// The disjoint normal form (see `canonicalize`).
    pub fn canonical(&self) -> StepFunction {
        canonicalize(self.p, self.pieces.clone())
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    /// The stored pieces; they may overlap.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty() || self.norm_sq().is_zero()
    }

    /// ‖f‖² = Σ over pairs of pieces of ∫ over the smaller ball.
    pub fn norm_sq(&self) -> CycNumber {
        self.inner_product(self).expect("same prime")
    }

    fn check_prime(&self, other: &StepFunction) -> Result<()> {
        if self.p != other.p {
            Err(Error::PrimeMismatch(self.p.get(), other.p.get()))
        } else {
            Ok(())
        }
    }

    pub fn evaluate(&self, x: &Rat) -> CycNumber {
        self.pieces
            .iter()
            .filter(|pc| pc.ball.contains_point(x, self.p))
            .map(|pc| pc.value_at(x, self.p))
            .sum()
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_prime(other)?;
        let mut v = self.pieces.clone();
        v.extend(other.pieces.iter().cloned());
        Ok(tidy(self.p, v))
    }

    pub fn sub(&self, other: &StepFunction) -> Result<StepFunction> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> StepFunction {
        self.scale(&CycNumber::from_int(-1))
    }

    pub fn scale(&self, c: &CycNumber) -> StepFunction {
        if c.is_zero() {
            return StepFunction::zero(self.p);
        }
        StepFunction {
            p: self.p,
            pieces: self
                .pieces
                .iter()
                .map(|pc| Piece::new(pc.ball.clone(), pc.freq.clone(), &pc.coeff * c))
                .collect(),
        }
    }

    pub fn pointwise_mul(&self, other: &StepFunction) -> Result<StepFunction> {
        self.check_prime(other)?;
        let p = self.p;
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if !a.ball.intersects(&b.ball, p) {
                    continue;
                }
                let ball = if a.ball.radius_exp() <= b.ball.radius_exp() {
                    a.ball.clone()
                } else {
                    b.ball.clone()
                };
                out.push(Piece::new(ball, &a.freq + &b.freq, &a.coeff * &b.coeff));
            }
        }
        Ok(tidy(p, out))
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> StepFunction {
        self.map_pieces(|pc, _| Piece::new(pc.ball.clone(), -&pc.freq, pc.coeff.conj()))
    }

    fn map_pieces(&self, f: impl Fn(&Piece, Prime) -> Piece) -> StepFunction {
        let v = self.pieces.iter().map(|pc| f(pc, self.p)).collect();
        tidy(self.p, v)
    }

    /// x ↦ f(x − b)
    pub fn translate(&self, b: &Rat) -> StepFunction {
        self.map_pieces(|pc, p| {
            let c = pc.ball.center() + b;
            Piece::new(
                Ball::new(&c, pc.ball.radius_exp(), p),
                pc.freq.clone(),
                &pc.coeff * &chi(&-(&pc.freq * b), p),
            )
        })
    }

    /// x ↦ f(p^j x)
    pub fn dilate(&self, j: i64) -> StepFunction {
        self.map_pieces(|pc, p| {
            let c = pc.ball.center() * p.pow(-j);
            Piece::new(
                Ball::new(&c, pc.ball.radius_exp() + j, p),
                &pc.freq * p.pow(j),
                pc.coeff.clone(),
            )
        })
    }

    /// x ↦ χ(ux)·f(x)
    pub fn modulate(&self, u: &Rat) -> StepFunction {
        self.map_pieces(|pc, _| Piece::new(pc.ball.clone(), &pc.freq + u, pc.coeff.clone()))
    }

    /// x ↦ f(−x)
    pub fn reflect(&self) -> StepFunction {
        self.map_pieces(|pc, p| {
            Piece::new(
                Ball::new(&-pc.ball.center(), pc.ball.radius_exp(), p),
                -&pc.freq,
                pc.coeff.clone(),
            )
        })
    }

    pub fn fourier(&self) -> StepFunction {
        self.map_pieces(|pc, p| {
            let g = pc.ball.radius_exp();
            let c = pc.ball.center();
            let coeff = (&pc.coeff * &chi(&(&pc.freq * c), p)).scale(&p.pow(g));
            Piece::new(Ball::new(&-&pc.freq, -g, p), c.clone(), coeff)
        })
    }

    pub fn inverse_fourier(&self) -> StepFunction {
        self.fourier().reflect()
    }

    pub fn integral(&self) -> CycNumber {
        self.pieces.iter().map(|pc| pc.integral(self.p)).sum()
    }

    /// ⟨f, g⟩ = ∫ f·conj(g)
    pub fn inner_product(&self, other: &StepFunction) -> Result<CycNumber> {
        self.check_prime(other)?;
        let p = self.p;
        let mut acc = CycNumber::zero();
        for a in &self.pieces {
            for b in &other.pieces {
                if !a.ball.intersects(&b.ball, p) {
                    continue;
                }
                let ball = if a.ball.radius_exp() <= b.ball.radius_exp() {
                    &a.ball
                } else {
                    &b.ball
                };
                let u = &a.freq - &b.freq;
                let v = ball_character_integral(ball, &u, p);
                if !v.is_zero() {
                    acc = &acc + &(&v * &(&a.coeff * &b.coeff.conj()));
                }
            }
        }
        Ok(acc)
    }

    /// Σ_a b(a)·f(x − a)
    pub fn semi_convolve(&self, b: &FilterSeq) -> Result<StepFunction> {
        if b.p() != self.p {
            return Err(Error::PrimeMismatch(self.p.get(), b.p().get()));
        }
        let mut v = Vec::new();
        for (a, w) in b.points() {
            v.extend(self.translate(&a).scale(&w).pieces);
        }
        Ok(tidy(self.p, v))
    }

    /// Smallest N ≥ 0 with supp f ⊂ B_N(0); None for the zero function.
    pub fn support_exponent(&self) -> Option<i64> {
        self.canonical()
            .pieces
            .iter()
            .map(|pc| match norm_exp(pc.ball.center(), self.p) {
                NormExp::Zero => pc.ball.radius_exp(),
                NormExp::Exp(e) => e.max(pc.ball.radius_exp()),
            })
            .max()
            .map(|n| n.max(0))
    }
}

/// Fold frequencies, merge equal (ball, frequency) terms, drop zeros, sort.
fn tidy(p: Prime, pieces: Vec<Piece>) -> StepFunction {
    let mut groups: BTreeMap<(Ball, Rat), CycNumber> = BTreeMap::new();
    for pc in pieces {
        if pc.coeff.is_zero() {
            continue;
        }
        let (u, f) = fold(&pc.freq, &pc.ball, p);
        let add = &pc.coeff * &f;
        let e = groups.entry((pc.ball, u)).or_insert_with(CycNumber::zero);
        *e = &*e + &add;
    }
    let pieces = groups
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|((ball, u), w)| Piece::new(ball, u, w))
        .collect();
    StepFunction { p, pieces }
}

/// Normal form: maximal pairwise disjoint balls on each of which the function is a
/// single nonzero term w·χ(u′, ·) with u′ the canonical residue of the frequency
/// modulo B_{−γ}(0).
pub fn canonicalize(p: Prime, pieces: Vec<Piece>) -> StepFunction {
    let terms: Vec<Piece> = pieces.into_iter().filter(|t| !t.coeff.is_zero()).collect();
    if terms.is_empty() {
        return StepFunction::zero(p);
    }
    let c0 = terms[0].ball.center().clone();
    let mut r = terms.iter().map(|t| t.ball.radius_exp()).max().unwrap();
    for t in &terms {
        if let NormExp::Exp(e) = norm_exp(&(t.ball.center() - &c0), p) {
            r = r.max(e);
        }
    }
    let root = Ball::new(&c0, r, p);
    let refs: Vec<&Piece> = terms.iter().collect();
    let mut out = refine(p, &root, &refs);
    out.sort_by(|a, b| a.ball.cmp(&b.ball));
    StepFunction { p, pieces: out }
}

fn refine(p: Prime, ball: &Ball, terms: &[&Piece]) -> Vec<Piece> {
    if terms.is_empty() {
        return vec![];
    }
    let g = ball.radius_exp();
    if terms.iter().all(|t| t.ball.radius_exp() >= g) {
        let mut groups: BTreeMap<Rat, CycNumber> = BTreeMap::new();
        for t in terms {
            let (u, f) = fold(&t.freq, ball, p);
            let add = &t.coeff * &f;
            let e = groups.entry(u).or_insert_with(CycNumber::zero);
            *e = &*e + &add;
        }
        groups.retain(|_, w| !w.is_zero());
        match groups.len() {
            0 => return vec![],
            1 => {
                let (u, w) = groups.into_iter().next().unwrap();
                return vec![Piece::new(ball.clone(), u, w)];
            }
            _ => {}
        }
    }
    let children = ball.children(p);
    let mut results = Vec::with_capacity(children.len());
    for child in &children {
        let sub: Vec<&Piece> = terms.iter().copied().filter(|t| t.ball.intersects(child, p)).collect();
        results.push(refine(p, child, &sub));
    }
    let whole = results
        .iter()
        .zip(&children)
        .all(|(r, c)| r.len() == 1 && r[0].ball == *c);
    if whole {
        let kids: Vec<&Piece> = results.iter().map(|r| &r[0]).collect();
        if let Some(merged) = try_merge(p, ball, &kids) {
            return vec![merged];
        }
    }
    results.into_iter().flatten().collect()
}

/// If the p child pieces are restrictions of one term w′·χ(u′,·) on the parent, return it.
fn try_merge(p: Prime, ball: &Ball, kids: &[&Piece]) -> Option<Piece> {
    let u0 = &kids[0].freq;
    if kids.iter().any(|k| &k.freq != u0) {
        return None;
    }
    let step = p.pow(ball.radius_exp() - 1);
    for d in 0..p.get() {
        let u = u0 + &step * Rat::from_integer(BigInt::from(d));
        let c0 = kids[0].ball.center();
        let w = &kids[0].coeff * &chi(&((u0 - &u) * c0), p);
        let ok = kids[1..].iter().all(|k| {
            let f = chi(&((&u - u0) * k.ball.center()), p);
            k.coeff == &w * &f
        });
        if ok {
            return Some(Piece::new(ball.clone(), u, w));
        }
    }
    None
}
