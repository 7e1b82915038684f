//! Exact arithmetic in `F = Q_p` and in a nonsplit quadratic extension
//! `E = F(ω)`, `ω² = Δ`.
//!
//! Elements of `F` are exact rationals. Every rational lies in `Q_p`, and all
//! quantities we compute (valuations, indices, integrals) are locally
//! constant, so the dense subfield `Q ⊂ Q_p` is enough.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of `F ∩ Q`.
pub type FScalar = BigRational;

/// A p-adic valuation, `Inf` being the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Fin(i64),
    Inf,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Fin(v) => Some(v),
            Val::Inf => None,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(v) => write!(f, "{v}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

pub fn rat(n: i64, d: i64) -> FScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> FScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `p^k` as an exact rational, for any integer `k`.
pub fn pow_p(p: u64, k: i64) -> FScalar {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

pub(crate) fn val_bigint(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`.
pub fn val_f(x: &FScalar, p: u64) -> Val {
    if x.is_zero() {
        return Val::Inf;
    }
    Val::Fin(val_bigint(x.numer(), p) as i64 - val_bigint(x.denom(), p) as i64)
}

/// `|x| = p^{-v(x)}`; zero maps to zero.
pub fn abs_f(x: &FScalar, p: u64) -> FScalar {
    match val_f(x, p) {
        Val::Inf => FScalar::zero(),
        Val::Fin(v) => pow_p(p, -v),
    }
}

pub fn is_integral(x: &FScalar, p: u64) -> bool {
    val_f(x, p) >= Val::Fin(0)
}

/// Reduces a p-integral rational modulo `modulus` (a power of p).
/// Returns `None` when `x` is not p-integral.
pub fn reduce_mod(x: &FScalar, p: u64, modulus: u64) -> Option<u64> {
    if !is_integral(x, p) {
        return None;
    }
    let m = BigInt::from(modulus);
    let num = x.numer().mod_floor(&m);
    let den = x.denom().mod_floor(&m);
    let den_inv = inv_mod_u64(den.to_u64()?, modulus)?;
    let num = num.to_u64()?;
    Some(mul_mod(num, den_inv, modulus))
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// `v_p(n)` for a nonzero machine integer.
pub(crate) fn val_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Formats a rational as `a/b` in lowest terms (always with a denominator).
pub fn format_rational(x: &FScalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<FScalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Parses a rational and checks that its denominator is a power of `p`.
pub fn parse_p_rational(s: &str, p: u64) -> Result<FScalar> {
    let x = parse_rational(s)?;
    let mut d = x.denom().clone();
    let pb = BigInt::from(p);
    while (&d % &pb).is_zero() {
        d /= &pb;
    }
    if !d.abs().is_one() {
        return Err(Error::Parse(format!(
            "denominator of {s:?} is not a power of {p}"
        )));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtKind {
    Unramified,
    Ramified,
}

impl ExtKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtKind::Unramified => "unramified",
            ExtKind::Ramified => "ramified",
        }
    }
}

impl std::str::FromStr for ExtKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unramified" => Ok(ExtKind::Unramified),
            "ramified" => Ok(ExtKind::Ramified),
            other => Err(Error::Parse(format!("unknown extension kind {other:?}"))),
        }
    }
}

/// The element `x + yω` of `E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub x: FScalar,
    pub y: FScalar,
}

impl QuadElem {
    pub fn new(x: FScalar, y: FScalar) -> Self {
        QuadElem { x, y }
    }

    pub fn from_f(x: FScalar) -> Self {
        QuadElem { x, y: FScalar::zero() }
    }

    pub fn zero() -> Self {
        Self::from_f(FScalar::zero())
    }

    pub fn one() -> Self {
        Self::from_f(FScalar::one())
    }

    /// `ω` itself.
    pub fn omega() -> Self {
        QuadElem { x: FScalar::zero(), y: FScalar::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem { x: self.x.clone(), y: -self.y.clone() }
    }

    pub fn scale(&self, c: &FScalar) -> Self {
        QuadElem { x: &self.x * c, y: &self.y * c }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*w", format_rational(&self.x), format_rational(&self.y))
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        QuadElem { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        QuadElem { x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { x: -self.x.clone(), y: -self.y.clone() }
    }
}

/// `F = Q_p` together with a quadratic field extension `E = F(√Δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExtDesc {
    p: u64,
    kind: ExtKind,
    delta: FScalar,
    different: QuadElem,
}

impl QuadExtDesc {
    /// Validates `Δ` against `kind`: unramified needs a unit nonresidue,
    /// ramified needs `v(Δ) = 1`.
    pub fn new(p: u64, kind: ExtKind, delta: FScalar) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::UnsupportedPrime(p));
        }
        let v = val_f(&delta, p);
        match kind {
            ExtKind::Unramified => {
                if v != Val::Fin(0) {
                    if is_square_class(&delta, p) {
                        return Err(Error::SplitAlgebra(format_rational(&delta)));
                    }
                    return Err(Error::InvalidExtension(format!(
                        "unramified extension needs a unit delta, got v(delta) = {v}"
                    )));
                }
                let r = reduce_mod(&delta, p, p).expect("unit is integral");
                if legendre(r, p) == 1 {
                    return Err(Error::SplitAlgebra(format_rational(&delta)));
                }
            }
            ExtKind::Ramified => {
                if v != Val::Fin(1) {
                    if is_square_class(&delta, p) {
                        return Err(Error::SplitAlgebra(format_rational(&delta)));
                    }
                    return Err(Error::InvalidExtension(format!(
                        "ramified extension needs v(delta) = 1, got {v}"
                    )));
                }
            }
        }
        let different = match kind {
            ExtKind::Unramified => QuadElem::one(),
            ExtKind::Ramified => QuadElem::omega(),
        };
        Ok(QuadExtDesc { p, kind, delta, different })
    }

    /// The smallest positive nonresidue (unramified) or `Δ = p` (ramified).
    pub fn standard(p: u64, kind: ExtKind) -> Result<Self> {
        let delta = match kind {
            ExtKind::Unramified => {
                if p == 2 || !is_prime(p) {
                    return Self::new(p, kind, int(1));
                }
                let n = (2..p).find(|&a| legendre(a, p) == p - 1).unwrap_or(1);
                int(n as i64)
            }
            ExtKind::Ramified => int(p as i64),
        };
        Self::new(p, kind, delta)
    }

    /// Replaces the different generator `δ`; it must have the same
    /// `E`-valuation as the canonical one.
    pub fn with_different(mut self, delta: QuadElem) -> Result<Self> {
        if self.val_e(&delta) != Val::Fin(self.d_diff() as i64) {
            return Err(Error::InvalidDifferent(delta.to_string()));
        }
        self.different = delta;
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue cardinality of `F`.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> ExtKind {
        self.kind
    }

    pub fn delta(&self) -> &FScalar {
        &self.delta
    }

    /// Ramification degree `e`.
    pub fn e(&self) -> u32 {
        match self.kind {
            ExtKind::Unramified => 1,
            ExtKind::Ramified => 2,
        }
    }

    /// Residue degree `f`, with `e·f = 2`.
    pub fn f(&self) -> u32 {
        2 / self.e()
    }

    pub fn q_e(&self) -> u64 {
        self.p.pow(self.f())
    }

    /// `v_E(δ)`.
    pub fn d_diff(&self) -> u32 {
        self.e() - 1
    }

    pub fn different(&self) -> &QuadElem {
        &self.different
    }

    pub fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        QuadElem {
            x: &a.x * &b.x + &self.delta * &a.y * &b.y,
            y: &a.x * &b.y + &a.y * &b.x,
        }
    }

    pub fn inv(&self, a: &QuadElem) -> Result<QuadElem> {
        let n = self.norm(a);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.conj().scale(&n.recip()))
    }

    pub fn div(&self, a: &QuadElem, b: &QuadElem) -> Result<QuadElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `N(x + yω) = x² − Δy²`.
    pub fn norm(&self, t: &QuadElem) -> FScalar {
        &t.x * &t.x - &self.delta * &t.y * &t.y
    }

    pub fn trace(&self, t: &QuadElem) -> FScalar {
        &t.x + &t.x
    }

    pub fn norm_trace(&self, t: &QuadElem) -> (FScalar, FScalar) {
        (self.norm(t), self.trace(t))
    }

    /// `v_F(N(t))`.
    pub fn val_norm(&self, t: &QuadElem) -> Val {
        val_f(&self.norm(t), self.p)
    }

    /// Normalized valuation of `E` (`v_E(ϖ_E) = 1`).
    pub fn val_e(&self, t: &QuadElem) -> Val {
        match self.val_norm(t) {
            Val::Inf => Val::Inf,
            Val::Fin(v) => Val::Fin(v / self.f() as i64),
        }
    }

    /// `|t|_E = [O_E : tO_E]^{-1} = q^{-v_F(N(t))}`.
    pub fn abs_e(&self, t: &QuadElem) -> Result<FScalar> {
        match self.val_norm(t) {
            Val::Inf => Err(Error::ZeroArgument),
            Val::Fin(v) => Ok(pow_p(self.p, -v)),
        }
    }

    pub fn is_integral(&self, t: &QuadElem) -> bool {
        is_integral(&t.x, self.p) && is_integral(&t.y, self.p)
    }

    pub fn is_unit(&self, t: &QuadElem) -> bool {
        self.val_norm(t) == Val::Fin(0)
    }
}

/// The canonical generator `δ` of the different of `E/F`, for which
/// `D⁻¹ = δ⁻¹O_E` under the trace pairing.
pub fn different_delta(ext: &QuadExtDesc) -> Result<QuadElem> {
    if ext.p() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    Ok(ext.different().clone())
}

/// Legendre symbol as `a^{(p-1)/2} mod p` (so `p - 1` means −1).
pub(crate) fn legendre(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// Whether `x` is a square in `Q_p^×` (p odd).
fn is_square_class(x: &FScalar, p: u64) -> bool {
    match val_f(x, p) {
        Val::Inf => true,
        Val::Fin(v) if v % 2 != 0 => false,
        Val::Fin(v) => {
            let u = x * pow_p(p, -v);
            let r = reduce_mod(&u, p, p).expect("unit");
            legendre(r, p) == 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e3u() -> QuadExtDesc {
        QuadExtDesc::new(3, ExtKind::Unramified, int(-1)).unwrap()
    }

    fn e3r() -> QuadExtDesc {
        QuadExtDesc::new(3, ExtKind::Ramified, int(3)).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(val_f(&int(9), 3), Val::Fin(2));
        assert_eq!(val_f(&rat(1, 3), 3), Val::Fin(-1));
        assert_eq!(val_f(&int(0), 3), Val::Inf);
        assert_eq!(val_f(&rat(10, 27), 3), Val::Fin(-3));
    }

    #[test]
    fn quad_arith_examples() {
        let e = e3u();
        let a = QuadElem::new(int(1), int(1));
        let b = QuadElem::new(int(1), int(-1));
        assert_eq!(e.mul(&a, &b), QuadElem::from_f(int(2)));
        assert_eq!(e.inv(&QuadElem::omega()).unwrap(), QuadElem::new(int(0), int(-1)));
        assert_eq!(QuadElem::new(int(2), int(1)).conj(), QuadElem::new(int(2), int(-1)));
        assert_eq!(e.inv(&QuadElem::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn norm_trace_examples() {
        let e = e3u();
        assert_eq!(e.norm_trace(&QuadElem::new(int(1), int(1))), (int(2), int(2)));
        assert_eq!(e.norm_trace(&QuadElem::omega()), (int(1), int(0)));
        assert_eq!(e3r().norm_trace(&QuadElem::omega()), (int(-3), int(0)));
    }

    #[test]
    fn abs_e_examples() {
        assert_eq!(e3u().abs_e(&QuadElem::from_f(int(3))).unwrap(), rat(1, 9));
        assert_eq!(e3r().abs_e(&QuadElem::omega()).unwrap(), rat(1, 3));
        assert_eq!(e3u().abs_e(&QuadElem::new(int(2), int(1))).unwrap(), int(1));
        assert_eq!(e3u().abs_e(&QuadElem::zero()), Err(Error::ZeroArgument));
    }

    /// `D⁻¹ = {x : Tr(x O_E) ⊆ O_F}`, solved on the basis `{1, ω}`: with
    /// `x = a + bω`, `Tr(x) = 2a` and `Tr(xω) = 2bΔ` must be integral.
    #[test]
    fn different_matches_trace_dual() {
        for e in [e3u(), e3r(), QuadExtDesc::standard(7, ExtKind::Ramified).unwrap()] {
            let d = different_delta(&e).unwrap();
            let dinv = e.inv(&d).unwrap();
            // δ⁻¹ pairs O_E into O_F ...
            assert!(is_integral(&e.trace(&dinv), e.p()));
            assert!(is_integral(&e.trace(&e.mul(&dinv, &QuadElem::omega())), e.p()));
            // ... and the dual basis {1/2, ω/(2Δ)} lies in δ⁻¹O_E.
            let dual = [QuadElem::from_f(rat(1, 2)), QuadElem::new(int(0), e.delta().recip() / int(2))];
            for b in &dual {
                assert!(e.is_integral(&e.mul(b, &d)), "{b} not in δ⁻¹O_E");
            }
            assert_eq!(e.val_e(&d), Val::Fin(e.d_diff() as i64));
        }
        assert_eq!(QuadExtDesc::new(2, ExtKind::Ramified, int(2)), Err(Error::UnsupportedPrime(2)));
    }

    #[test]
    fn extension_validation() {
        assert!(matches!(
            QuadExtDesc::new(3, ExtKind::Unramified, int(1)),
            Err(Error::SplitAlgebra(_))
        ));
        assert!(matches!(
            QuadExtDesc::new(5, ExtKind::Unramified, int(4)),
            Err(Error::SplitAlgebra(_))
        ));
        assert!(matches!(
            QuadExtDesc::new(3, ExtKind::Ramified, int(9)),
            Err(Error::SplitAlgebra(_))
        ));
        assert!(matches!(
            QuadExtDesc::new(3, ExtKind::Ramified, int(2)),
            Err(Error::InvalidExtension(_))
        ));
        assert_eq!(QuadExtDesc::standard(5, ExtKind::Unramified).unwrap().delta(), &int(2));
        assert_eq!(QuadExtDesc::new(9, ExtKind::Unramified, int(2)), Err(Error::NotPrime(9)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_p_rational("-1/27", 3).unwrap(), rat(-1, 27));
        assert!(parse_p_rational("1/2", 3).is_err());
        assert_eq!(format_rational(&int(4)), "4/1");
        assert_eq!(reduce_mod(&rat(1, 2), 3, 9), Some(5));
        assert_eq!(reduce_mod(&rat(1, 3), 3, 9), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn elem() -> impl Strategy<Value = QuadElem> {
            (-50i64..50, 0u32..3, -50i64..50, 0u32..3).prop_map(|(a, i, b, j)| {
                QuadElem::new(rat(a, 3i64.pow(i)), rat(b, 3i64.pow(j)))
            })
        }

        proptest! {
            #[test]
            fn abs_multiplicative(a in elem(), b in elem(), ram in any::<bool>()) {
                let e = if ram { e3r() } else { e3u() };
                prop_assume!(!a.is_zero() && !b.is_zero());
                let ab = e.mul(&a, &b);
                prop_assert_eq!(e.abs_e(&ab).unwrap(), e.abs_e(&a).unwrap() * e.abs_e(&b).unwrap());
                prop_assert_eq!(e.abs_e(&a.conj()).unwrap(), e.abs_e(&a).unwrap());
            }

            #[test]
            fn characteristic_polynomial(t in elem(), ram in any::<bool>()) {
                let e = if ram { e3r() } else { e3u() };
                let (n, tr) = e.norm_trace(&t);
                let lhs = &(&e.mul(&t, &t) - &t.scale(&tr)) + &QuadElem::from_f(n);
                prop_assert!(lhs.is_zero());
            }

            #[test]
            fn ramified_norm_valuation(t in elem()) {
                let e = e3r();
                let vx2 = val_f(&(&t.x * &t.x), 3);
                let vdy2 = val_f(&(e.delta() * &t.y * &t.y), 3);
                prop_assume!(vx2 != vdy2);
                prop_assert_eq!(e.val_norm(&t), vx2.min(vdy2));
            }
        }
    }
}
