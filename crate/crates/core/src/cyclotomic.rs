//! Exact arithmetic in cyclotomic fields Q(ζ_n).
//!
//! Elements are stored in the power basis 1, ζ_n, …, ζ_n^{φ(n)−1} as integer
//! numerators over one positive common denominator. Binary operations promote
//! both operands to the lcm of their orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::Rat;

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients (low to high) of Φ_n, memoized.
fn cyclo_int(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(v) = phi_cache().lock().unwrap().get(&n) {
        return v.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclo_int(d));
        }
    }
    let v = Arc::new(poly);
    phi_cache().lock().unwrap().insert(n, v.clone());
    v
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

/// Φ_n with rational coefficients, low degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<Rat> {
    cyclo_int(n).iter().map(|c| Rat::from_integer(c.clone())).collect()
}

pub fn euler_phi(n: u64) -> usize {
    cyclo_int(n).len() - 1
}

/// Reduce an integer polynomial modulo Φ_n; the result has exactly φ(n) entries.
fn reduce(mut poly: Vec<BigInt>, n: u64) -> Vec<BigInt> {
    let f = cyclo_int(n);
    let d = f.len() - 1;
    if poly.len() < d {
        poly.resize(d, BigInt::zero());
        return poly;
    }
    for i in (d..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut poly[i]);
        for (j, fj) in f.iter().enumerate().take(d) {
            if !fj.is_zero() {
                poly[i - d + j] -= &c * fj;
            }
        }
    }
    poly.truncate(d);
    poly
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// An exact element of Q(ζ_n).
#[derive(Clone, Debug)]
pub struct CycNumber {
    order: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    fn from_parts(order: u64, num: Vec<BigInt>, den: BigInt) -> CycNumber {
        let mut z = CycNumber { order, num, den };
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    /// Build from rational power-basis coefficients (any length; reduced mod Φ_n).
    pub fn from_coeffs(order: u64, coeffs: &[Rat]) -> CycNumber {
        assert!(order >= 1);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        CycNumber::from_parts(order, reduce(num, order), den)
    }

    pub fn zero() -> CycNumber {
        CycNumber::from_rat(&Rat::zero())
    }

    pub fn one() -> CycNumber {
        CycNumber::from_rat(&Rat::one())
    }

    pub fn from_rat(r: &Rat) -> CycNumber {
        CycNumber::from_parts(1, vec![r.numer().clone()], r.denom().clone())
    }

    pub fn from_int(n: i64) -> CycNumber {
        CycNumber::from_rat(&Rat::from_integer(BigInt::from(n)))
    }

    /// e^{2πik/n}
    pub fn root_of_unity(k: i64, n: u64) -> CycNumber {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigInt::zero(); e + 1];
        poly[e] = BigInt::one();
        CycNumber::from_parts(n, reduce(poly, n), BigInt::one())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// Some(r) when the element is rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(Rat::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Embed into Q(ζ_n) via ζ_m ↦ ζ_n^{n/m}; requires order | n.
    pub fn promote(&self, n: u64) -> CycNumber {
        assert!(
            n.is_multiple_of(self.order),
            "cannot promote order {} to {}",
            self.order,
            n
        );
        if n == self.order {
            return self.clone();
        }
        let step = (n / self.order) as usize;
        let len = (self.num.len() - 1) * step + 1;
        let mut poly = vec![BigInt::zero(); len.max(1)];
        for (i, c) in self.num.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycNumber {
            order: n,
            num: reduce(poly, n),
            den: self.den.clone(),
        }
    }

    fn unify(a: &CycNumber, b: &CycNumber) -> (CycNumber, CycNumber) {
        let n = lcm(a.order, b.order);
        (a.promote(n), b.promote(n))
    }

    pub fn scale(&self, r: &Rat) -> CycNumber {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        CycNumber::from_parts(self.order, num, &self.den * r.denom())
    }

    pub fn conj(&self) -> CycNumber {
        let n = self.order as usize;
        let mut poly = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        CycNumber {
            order: self.order,
            num: reduce(poly, self.order),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse: solve (multiplication by the numerator)·x = den·1 with
    /// fraction-free elimination over Z.
    pub fn inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycNumber::from_rat(&(Rat::one() / r)).promote(self.order));
        }
        let d = self.num.len();
        // column j holds num·ζ^j; last column is the right-hand side den·e_0
        let mut m = vec![vec![BigInt::zero(); d + 1]; d];
        let mut col = self.num.clone();
        #[allow(clippy::needless_range_loop)]
        for j in 0..d {
            for (i, c) in col.iter().enumerate() {
                m[i][j] = c.clone();
            }
            let mut shifted = vec![BigInt::zero(); d + 1];
            shifted[1..].clone_from_slice(&col);
            col = reduce(shifted, self.order);
        }
        m[0][d] = self.den.clone();
        let x = bareiss_solve(m).ok_or(Error::DivisionByZero)?;
        Ok(CycNumber::from_coeffs(self.order, &x))
    }

    pub fn div(&self, other: &CycNumber) -> Result<CycNumber> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u64) -> CycNumber {
        let mut acc = CycNumber::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// |z|² as an element of the field (z·conj z).
    pub fn abs_sq(&self) -> CycNumber {
        self * &self.conj()
    }

    pub fn is_unit_modulus(&self) -> bool {
        self.abs_sq().is_one()
    }

    /// Floating-point value; a sanity oracle only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            let w = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = std::f64::consts::TAU * i as f64 / n;
            acc += Complex64::new(w * t.cos(), w * t.sin());
        }
        acc
    }

    /// An equal element of smallest order reachable by exact subfield descent.
    /// Rational elements go to order 1; order 2m (m odd) goes to m; if q² | n and
    /// only exponents divisible by q occur, order n goes to n/q.
    pub fn simplified(&self) -> CycNumber {
        if let Some(r) = self.as_rational() {
            return CycNumber::from_rat(&r);
        }
        let mut z = self.clone();
        loop {
            let n = z.order;
            if n % 4 == 2 {
                // ζ_{2m} = −ζ_m^{(m+1)/2}
                let m = n / 2;
                let half = m.div_ceil(2);
                let mut poly = vec![BigInt::zero(); m as usize];
                for (i, c) in z.num.iter().enumerate() {
                    let e = ((i as u64 * half) % m) as usize;
                    if i % 2 == 0 {
                        poly[e] += c;
                    } else {
                        poly[e] -= c;
                    }
                }
                z = CycNumber::from_parts(m, reduce(poly, m), z.den.clone());
                continue;
            }
            let mut changed = false;
            for q in prime_factors(n) {
                if !n.is_multiple_of(q * q) {
                    continue;
                }
                let qs = q as usize;
                if z.num.iter().enumerate().all(|(i, c)| i % qs == 0 || c.is_zero()) {
                    let num: Vec<BigInt> = z.num.iter().step_by(qs).cloned().collect();
                    z = CycNumber::from_parts(n / q, num, z.den.clone());
                    changed = true;
                    break;
                }
            }
            if !changed {
                return z;
            }
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = CycNumber::unify(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNumber {}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})·ζ{}", c, self.order)?,
                _ => write!(f, "({})·ζ{}^{}", c, self.order, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: &'a CycNumber) -> CycNumber {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (a, b) = CycNumber::unify(self, rhs);
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        CycNumber::from_parts(a.order, num, &a.den * &b.den)
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &'a CycNumber) -> CycNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &'a CycNumber) -> CycNumber {
        if self.order == 1 {
            return rhs.scale(&Rat::new(self.num[0].clone(), self.den.clone()));
        }
        if rhs.order == 1 {
            return self.scale(&Rat::new(rhs.num[0].clone(), rhs.den.clone()));
        }
        let (a, b) = CycNumber::unify(self, rhs);
        let d = a.num.len();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycNumber::from_parts(a.order, reduce(prod, a.order), &a.den * &b.den)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &'a CycNumber) -> CycNumber {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl std::iter::Sum for CycNumber {
    fn sum<I: Iterator<Item = CycNumber>>(iter: I) -> CycNumber {
        iter.fold(CycNumber::zero(), |a, b| &a + &b)
    }
}

/// Solve a square integer system given as an augmented d × (d+1) matrix.
fn bareiss_solve(mut m: Vec<Vec<BigInt>>) -> Option<Vec<Rat>> {
    let d = m.len();
    let mut prev = BigInt::one();
    for k in 0..d {
        let piv = (k..d).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, piv);
        for i in k + 1..d {
            for j in k + 1..=d {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rat::zero(); d];
    for i in (0..d).rev() {
        let mut acc = Rat::from_integer(m[i][d].clone());
        for j in i + 1..d {
            acc -= Rat::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rat::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// A dense matrix of cyclotomic numbers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CycNumber>,
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNumber>) -> Result<CycMatrix> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        let n = entries.iter().fold(1, |acc, e| lcm(acc, e.order()));
        let entries = entries.into_iter().map(|e| e.promote(n)).collect();
        Ok(CycMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> CycNumber) -> CycMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CycMatrix::new(rows, cols, entries).expect("shape is consistent")
    }

    pub fn identity(n: usize) -> CycMatrix {
        CycMatrix::from_fn(n, n, |i, j| CycNumber::from_int((i == j) as i64))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<CycNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        CycMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(CycMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[CycNumber]) -> Result<Vec<CycNumber>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns against a vector of length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) * &v[k]).sum())
            .collect())
    }

    /// Conjugate-transpose(M)·M, using Hermitian symmetry.
    pub fn gram(&self) -> CycMatrix {
        let n = self.cols;
        let cols: Vec<Vec<CycNumber>> = (0..n).map(|j| self.column(j)).collect();
        let conj_cols: Vec<Vec<CycNumber>> = cols.iter().map(|c| c.iter().map(|x| x.conj()).collect()).collect();
        let mut g = vec![CycNumber::zero(); n * n];
        for a in 0..n {
            for b in a..n {
                let v: CycNumber = conj_cols[a]
                    .iter()
                    .zip(&cols[b])
                    .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                    .map(|(x, y)| x * y)
                    .sum();
                if a != b {
                    g[b * n + a] = v.conj();
                }
                g[a * n + b] = v;
            }
        }
        CycMatrix::new(n, n, g).expect("square")
    }

    /// True iff conj(M)ᵀ·M = scale·I exactly.
    pub fn is_scaled_unitary(&self, scale: &Rat) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let g = self.gram();
        let target = CycNumber::from_rat(scale);
        (0..self.cols).all(|i| {
            (0..self.cols).all(|j| {
                let e = g.get(i, j);
                if i == j {
                    *e == target
                } else {
                    e.is_zero()
                }
            })
        })
    }
}
