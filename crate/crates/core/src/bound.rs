//! Bound functions `f(y) = a·y^b` with exact comparison and composition.
//!
//! A bound is stored as the algebraic relation `f(y)^Q = A·y^P` with `A` a
//! positive rational and `P`, `Q` positive integers. Every `a·y^b` with
//! rational `a` and `b = p/q` is represented by `(a^q, p, q)`, and unlike the
//! `(a, b)` pair the relation form is closed under composition:
//! `(f∘g)(y)^{Qf·Qg} = Af^{Qg} · Ag^{Pf} · y^{Pf·Pg}`.
//!
//! The canonical form has the least possible `Q`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::natural::Natural;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("bound coefficient must be positive")]
    NonPositiveCoefficient,
    #[error("bound exponent must be positive")]
    NonPositiveExponent,
    #[error("bound exponent {0} overflows the supported range")]
    ExponentOverflow(String),
}

/// Outcome of `v < f(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundOrdering {
    Less,
    Geq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct FastForm {
    num: u128,
    den: u128,
    p: u32,
    q: u32,
}

/// A strictly increasing bound `f(y) = a·y^b`, `a > 0`, `b > 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct BoundFunction {
    /// `A = a^Q`, in lowest terms.
    coeff_num: BigUint,
    coeff_den: BigUint,
    p: u64,
    q: u64,
    fast: Option<FastForm>,
}

impl BoundFunction {
    /// `f(y) = a·y^b`.
    pub fn new(a: Ratio<u64>, b: Ratio<u64>) -> Result<Self, BoundError> {
        if a.numer().is_zero() {
            return Err(BoundError::NonPositiveCoefficient);
        }
        if b.numer().is_zero() {
            return Err(BoundError::NonPositiveExponent);
        }
        let q = *b.denom();
        let q32 = u32::try_from(q).map_err(|_| BoundError::ExponentOverflow(b.to_string()))?;
        let num = BigUint::from(*a.numer()).pow(q32);
        let den = BigUint::from(*a.denom()).pow(q32);
        Self::from_relation(num, den, *b.numer(), q)
    }

    /// `f(y) = c·y`.
    pub fn linear(c: Ratio<u64>) -> Result<Self, BoundError> {
        Self::new(c, Ratio::from_integer(1))
    }

    /// `f(y) = y^c`.
    pub fn power_law(c: Ratio<u64>) -> Result<Self, BoundError> {
        Self::new(Ratio::from_integer(1), c)
    }

    pub fn identity() -> Self {
        Self::from_relation(BigUint::one(), BigUint::one(), 1, 1).expect("identity bound")
    }

    /// Builds the bound defined by `f(y)^q = (num/den)·y^p` and canonicalizes it.
    pub fn from_relation(num: BigUint, den: BigUint, p: u64, q: u64) -> Result<Self, BoundError> {
        if num.is_zero() || den.is_zero() {
            return Err(BoundError::NonPositiveCoefficient);
        }
        if p == 0 || q == 0 {
            return Err(BoundError::NonPositiveExponent);
        }
        if p > u64::from(u32::MAX) || q > u64::from(u32::MAX) {
            return Err(BoundError::ExponentOverflow(format!("{p}/{q}")));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        let (mut p, mut q) = (p, q);
        // Largest k | gcd(p, q) with A a perfect k-th power gives the least Q.
        let common = p.gcd(&q);
        for k in divisors_descending(common).into_iter().filter(|&k| k > 1) {
            let k32 = k as u32;
            if let (Some(rn), Some(rd)) = (exact_root(&num, k32), exact_root(&den, k32)) {
                num = rn;
                den = rd;
                p /= k;
                q /= k;
                break;
            }
        }
        let fast = match (num.to_u64(), den.to_u64()) {
            (Some(n), Some(d)) if p <= 64 && q <= 64 => Some(FastForm {
                num: u128::from(n),
                den: u128::from(d),
                p: p as u32,
                q: q as u32,
            }),
            _ => None,
        };
        Ok(BoundFunction {
            coeff_num: num,
            coeff_den: den,
            p,
            q,
            fast,
        })
    }

    /// The exponent `b = P/Q` in lowest terms.
    pub fn exponent(&self) -> Ratio<u64> {
        Ratio::new(self.p, self.q)
    }

    /// The coefficient `a`, when it is rational.
    pub fn coefficient(&self) -> Option<Ratio<BigUint>> {
        let q = u32::try_from(self.q).ok()?;
        let num = exact_root(&self.coeff_num, q)?;
        let den = exact_root(&self.coeff_den, q)?;
        Some(Ratio::new(num, den))
    }

    /// The relation `(A_num, A_den, P, Q)` with `f(y)^Q = A·y^P`.
    pub fn relation(&self) -> (&BigUint, &BigUint, u64, u64) {
        (&self.coeff_num, &self.coeff_den, self.p, self.q)
    }

    /// Exact decision of `v < f(y)`: `den·v^Q < num·y^P`.
    pub fn compare(&self, y: &Natural, v: &Natural) -> BoundOrdering {
        let q = self.q as u32;
        let p = self.p as u32;
        let lhs = &self.coeff_den * y_pow(v, q);
        let rhs = &self.coeff_num * y_pow(y, p);
        if lhs < rhs {
            BoundOrdering::Less
        } else {
            BoundOrdering::Geq
        }
    }

    /// Least natural `c` with `c >= f(y)`, so that `v < f(y)` iff `v < c`.
    pub fn cutoff(&self, y: &Natural) -> Natural {
        if let (Some(fast), Some(ys)) = (self.fast, y.to_u64()) {
            if let Some(c) = fast_cutoff(fast, ys) {
                return Natural::from_u128(c);
            }
        }
        let target = &self.coeff_num * y_pow(y, self.p as u32);
        let x = target.div_ceil(&self.coeff_den);
        Natural::from_big(ceil_root(&x, self.q as u32))
    }

    /// Word-sized cutoff for `y < 2^64`, if it fits in `u128`.
    pub fn cutoff_u64(&self, y: u64) -> Option<u128> {
        match self.fast.and_then(|fast| fast_cutoff(fast, y)) {
            Some(c) => Some(c),
            None => self.cutoff(&Natural::from(y)).to_biguint().to_u128(),
        }
    }

    /// `f∘g`.
    pub fn compose(&self, inner: &BoundFunction) -> Result<BoundFunction, BoundError> {
        let overflow = || BoundError::ExponentOverflow(format!("{self} after {inner}"));
        let qg = u32::try_from(inner.q).map_err(|_| overflow())?;
        let pf = u32::try_from(self.p).map_err(|_| overflow())?;
        let num = self.coeff_num.pow(qg) * inner.coeff_num.pow(pf);
        let den = self.coeff_den.pow(qg) * inner.coeff_den.pow(pf);
        let p = self.p.checked_mul(inner.p).ok_or_else(overflow)?;
        let q = self.q.checked_mul(inner.q).ok_or_else(overflow)?;
        BoundFunction::from_relation(num, den, p, q)
    }

    /// `k`-fold self-composition; `f^0` is the identity.
    pub fn power(&self, k: u32) -> Result<BoundFunction, BoundError> {
        let mut acc = BoundFunction::identity();
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Exact decision of `self(y) <= other(y)` for `y >= 1`.
    pub fn le_at(&self, other: &BoundFunction, y: &Natural) -> bool {
        // Raise both sides to the power Qs·Qo and compare the rationals.
        let qs = self.q as u32;
        let qo = other.q as u32;
        let exp = |e: u64| u32::try_from(e).expect("bound exponent product exceeds u32");
        let ys = y_pow(y, exp(self.p * other.q));
        let yo = y_pow(y, exp(other.p * self.q));
        let lhs = self.coeff_num.pow(qo) * ys * other.coeff_den.pow(qs);
        let rhs = other.coeff_num.pow(qs) * yo * self.coeff_den.pow(qo);
        lhs <= rhs
    }

    /// Floating-point value of `f(y)`, for display and spot checks only.
    pub fn eval_f64(&self, y: f64) -> f64 {
        let a = ratio_f64(&self.coeff_num, &self.coeff_den).powf(1.0 / self.q as f64);
        a * y.powf(self.p as f64 / self.q as f64)
    }

    pub fn is_linear(&self) -> bool {
        self.p == self.q
    }
}

impl fmt::Display for BoundFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.exponent();
        match self.coefficient() {
            Some(a) => write!(f, "({a})*y^({b})"),
            None => write!(
                f,
                "({}/{}*y^{})^(1/{})",
                self.coeff_num, self.coeff_den, self.p, self.q
            ),
        }
    }
}

impl fmt::Debug for BoundFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundFunction({self})")
    }
}

fn divisors_descending(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.extend(small.into_iter().rev());
    large
}

fn y_pow(y: &Natural, exp: u32) -> BigUint {
    y.to_biguint().pow(exp)
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// `Some(r)` with `r^k = x` when `x` is a perfect `k`-th power.
fn exact_root(x: &BigUint, k: u32) -> Option<BigUint> {
    let r = x.nth_root(k);
    (r.pow(k) == *x).then_some(r)
}

/// Least `s` with `s^k >= x`.
fn ceil_root(x: &BigUint, k: u32) -> BigUint {
    if k == 1 {
        return x.clone();
    }
    let r = x.nth_root(k);
    if r.pow(k) == *x {
        r
    } else {
        r + 1u32
    }
}

fn fast_cutoff(form: FastForm, y: u64) -> Option<u128> {
    let y_p = u128::from(y).checked_pow(form.p)?;
    let target = form.num.checked_mul(y_p)?;
    let x = target.div_ceil(form.den);
    if form.q == 1 {
        return Some(x);
    }
    // Floor root from a float estimate, then exact correction.
    let mut r = (x as f64).powf(1.0 / f64::from(form.q)) as u128;
    while r > 0 && pow_cmp(r, form.q, x) == Ordering::Greater {
        r -= 1;
    }
    while pow_cmp(r + 1, form.q, x) != Ordering::Greater {
        r += 1;
    }
    Some(if pow_cmp(r, form.q, x) == Ordering::Equal {
        r
    } else {
        r + 1
    })
}

/// Compares `base^exp` with `x` without overflowing.
fn pow_cmp(base: u128, exp: u32, x: u128) -> Ordering {
    match base.checked_pow(exp) {
        Some(v) => v.cmp(&x),
        None => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn bound(a: (u64, u64), b: (u64, u64)) -> BoundFunction {
        BoundFunction::new(r(a.0, a.1), r(b.0, b.1)).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(bound((1, 2), (1, 1)).compare(&nat(5), &nat(2)), BoundOrdering::Less);
        assert_eq!(bound((1, 1), (1, 1)).compare(&nat(7), &nat(7)), BoundOrdering::Geq);
        // 16^5 = 2^20 = 32^4: a tie is not "less".
        assert_eq!(bound((1, 1), (4, 5)).compare(&nat(32), &nat(16)), BoundOrdering::Geq);
        assert_eq!(bound((1, 1), (4, 5)).compare(&nat(32), &nat(15)), BoundOrdering::Less);
    }

    #[test]
    fn compose_examples() {
        let half = bound((1, 2), (1, 1));
        assert_eq!(half.compose(&half).unwrap(), bound((1, 4), (1, 1)));
        let g = bound((3, 7), (2, 3));
        assert_eq!(BoundFunction::identity().compose(&g).unwrap(), g);
        assert_eq!(g.compose(&BoundFunction::identity()).unwrap(), g);
        let root = bound((1, 1), (1, 2));
        assert_eq!(root.compose(&root).unwrap(), bound((1, 1), (1, 4)));
    }

    #[test]
    fn linear_powers() {
        let half = BoundFunction::linear(r(1, 2)).unwrap();
        for k in 0..20 {
            assert_eq!(
                half.power(k).unwrap(),
                BoundFunction::linear(r(1, 1 << k)).unwrap()
            );
        }
    }

    #[test]
    fn irrational_coefficient_composition() {
        // sqrt(y/2): coefficient 2^{-1/2} is not rational.
        let f = bound((1, 1), (1, 2)).compose(&bound((1, 2), (1, 1))).unwrap();
        assert_eq!(f.coefficient(), None);
        assert_eq!(f.exponent(), r(1, 2));
        // sqrt(18/2) = 3, so 2 < f(18) and 3 is not.
        assert_eq!(f.compare(&nat(18), &nat(2)), BoundOrdering::Less);
        assert_eq!(f.compare(&nat(18), &nat(3)), BoundOrdering::Geq);
        assert_eq!(f.cutoff(&nat(18)), nat(3));
        assert_eq!(f.cutoff(&nat(19)), nat(4));
    }

    #[test]
    fn canonical_form_recovers_rational_coefficient() {
        // (4·y^2)^(1/2) = 2y
        let f = BoundFunction::from_relation(BigUint::from(4u32), BigUint::one(), 2, 2).unwrap();
        assert_eq!(f, BoundFunction::linear(r(2, 1)).unwrap());
        assert_eq!(f.coefficient(), Some(Ratio::from_integer(BigUint::from(2u32))));
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert_eq!(
            BoundFunction::new(r(0, 1), r(1, 1)),
            Err(BoundError::NonPositiveCoefficient)
        );
        assert_eq!(
            BoundFunction::new(r(1, 1), r(0, 1)),
            Err(BoundError::NonPositiveExponent)
        );
    }

    #[test]
    fn cutoff_agrees_with_compare() {
        let bounds = [
            bound((1, 2), (1, 1)),
            bound((1, 1), (4, 5)),
            bound((3, 1), (1, 3)),
            bound((7, 5), (3, 2)),
            bound((1, 8), (1, 1)),
        ];
        for f in &bounds {
            for y in 1..400u64 {
                let c = f.cutoff(&nat(y));
                assert_eq!(f.compare(&nat(y), &c), BoundOrdering::Geq, "{f} y={y}");
                if !c.is_zero() {
                    let below = Natural::from(c.to_u64().unwrap() - 1);
                    assert_eq!(f.compare(&nat(y), &below), BoundOrdering::Less, "{f} y={y}");
                }
            }
        }
    }

    #[test]
    fn slow_cutoff_path_for_large_y() {
        let f = bound((1, 1), (4, 5));
        let y = Natural::pow2(80); // y^(4/5) = 2^64
        let c = f.cutoff(&y);
        assert_eq!(c, Natural::pow2(64));
        assert_eq!(f.compare(&y, &c), BoundOrdering::Geq);
    }

    #[test]
    fn le_at_matches_cutoffs() {
        let f = bound((1, 2), (1, 1));
        let g = bound((1, 1), (1, 2));
        // y/2 <= sqrt(y) iff y <= 4
        for y in 1..50u64 {
            assert_eq!(f.le_at(&g, &nat(y)), y <= 4, "y={y}");
        }
    }
}
