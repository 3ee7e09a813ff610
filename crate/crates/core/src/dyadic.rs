//! Exact dyadic rationals `n / 2^k`.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact element of `Z[1/2]`.
///
/// Stored as `numerator / 2^exponent` with the numerator odd whenever the
/// exponent is positive, so equality is structural. Numerators that fit in
/// an `i64` are kept inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: Num,
    exp: u32,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Num {
    Small(i64),
    Big(BigInt),
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { num: Num::Small(0), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: Num::Small(1), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: Num::Small(n), exp: 0 }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic::one().mul_pow2(k)
    }

    /// `n / 2^k`, canonicalized.
    pub fn new(n: i64, k: u32) -> Self {
        Self::from_i128(n as i128, k)
    }

    pub fn from_bigint(n: BigInt, k: u32) -> Self {
        Self::from_big(n, k)
    }

    fn from_i128(mut n: i128, mut exp: u32) -> Self {
        if n == 0 {
            return Dyadic::zero();
        }
        let shift = n.trailing_zeros().min(exp);
        n >>= shift;
        exp -= shift;
        match i64::try_from(n) {
            Ok(s) => Dyadic { num: Num::Small(s), exp },
            Err(_) => Dyadic { num: Num::Big(BigInt::from(n)), exp },
        }
    }

    fn from_big(mut n: BigInt, mut exp: u32) -> Self {
        let Some(tz) = n.trailing_zeros() else {
            return Dyadic::zero();
        };
        let shift = (tz.min(exp as u64)) as u32;
        if shift > 0 {
            n >>= shift as usize;
            exp -= shift;
        }
        match n.to_i64() {
            Some(s) => Dyadic { num: Num::Small(s), exp },
            None => Dyadic { num: Num::Big(n), exp },
        }
    }

    /// The canonical numerator.
    pub fn numerator(&self) -> BigInt {
        match &self.num {
            Num::Small(s) => BigInt::from(*s),
            Num::Big(b) => b.clone(),
        }
    }

    /// The canonical exponent `k` in `n / 2^k`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// Nearest `f64`, for drawing.
    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.num, Num::Small(0))
    }

    pub fn signum(&self) -> i32 {
        match &self.num {
            Num::Small(s) => s.signum() as i32,
            Num::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Multiply by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        if k < 0 {
            let exp = self.exp as i64 - k;
            let exp = u32::try_from(exp).expect("dyadic exponent overflow");
            return match &self.num {
                Num::Small(s) if self.exp == 0 => Dyadic::from_i128(*s as i128, exp),
                Num::Big(b) if self.exp == 0 => Dyadic::from_big(b.clone(), exp),
                num => Dyadic { num: num.clone(), exp },
            };
        }
        if (self.exp as i64) >= k {
            return Dyadic { num: self.num.clone(), exp: self.exp - k as u32 };
        }
        let up = (k - self.exp as i64) as u32;
        match &self.num {
            Num::Small(s) if up < 63 && s.unsigned_abs().leading_zeros() > up + 1 => {
                Dyadic { num: Num::Small(s << up), exp: 0 }
            }
            _ => Self::from_big(self.numerator() << up as usize, 0),
        }
    }

    pub fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    /// `(a + b) / 2`, requiring `a < b`.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Result<Dyadic> {
        if a >= b {
            return Err(Error::DegenerateInterval(a.to_string(), b.to_string()));
        }
        Ok((a + b).half())
    }

    /// Value as `odd * 2^e`; `None` for zero.
    fn odd_part(&self) -> Option<(BigInt, i64)> {
        if self.is_zero() {
            return None;
        }
        let n = self.numerator();
        let tz = n.trailing_zeros().unwrap_or(0);
        Some((n >> tz as usize, tz as i64 - self.exp as i64))
    }

    /// If `self / other` is a power of two `2^k`, returns `k`.
    pub fn log2_ratio(&self, other: &Dyadic) -> Option<i64> {
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            if *a == 0 || *b == 0 {
                return None;
            }
            let (ta, tb) = (a.trailing_zeros(), b.trailing_zeros());
            if (a >> ta) != (b >> tb) {
                return None;
            }
            return Some((ta as i64 - self.exp as i64) - (tb as i64 - other.exp as i64));
        }
        let (oa, ea) = self.odd_part()?;
        let (ob, eb) = other.odd_part()?;
        (oa == ob).then_some(ea - eb)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator(), BigInt::one() << self.exp as usize)
    }

    /// Returns the rational as a dyadic if its reduced denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Dyadic> {
        let d = r.denom();
        let tz = d.trailing_zeros()?;
        if (d >> tz as usize) != BigInt::one() {
            return None;
        }
        Some(Dyadic::from_big(r.numer().clone(), tz as u32))
    }

    /// Largest multiple of `2^-k` that is `<= r`.
    pub fn floor_at(r: &BigRational, k: u32) -> Dyadic {
        let scaled = r * BigRational::from_integer(BigInt::one() << k as usize);
        Dyadic::from_big(scaled.floor().to_integer(), k)
    }

    /// Smallest multiple of `2^-k` that is `>= r`.
    pub fn ceil_at(r: &BigRational, k: u32) -> Dyadic {
        let scaled = r * BigRational::from_integer(BigInt::one() << k as usize);
        Dyadic::from_big(scaled.ceil().to_integer(), k)
    }

    /// Some dyadic strictly between two rationals `lo < hi`, with the smallest
    /// possible exponent.
    pub fn between(lo: &BigRational, hi: &BigRational) -> Dyadic {
        assert!(lo < hi, "empty rational interval");
        let mut k = 0u32;
        loop {
            let c = Dyadic::floor_at(lo, k) + Dyadic::pow2(-(k as i64));
            if c.to_rational() < *hi {
                return c;
            }
            k += 1;
        }
    }

    fn cmp_impl(&self, other: &Dyadic) -> Ordering {
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            if self.exp == other.exp {
                return a.cmp(b);
            }
            let (sa, sb) = (a.signum(), b.signum());
            if sa != sb {
                return sa.cmp(&sb);
            }
            let e = self.exp.max(other.exp);
            let (da, db) = (e - self.exp, e - other.exp);
            if da < 63 && db < 63 {
                return ((*a as i128) << da).cmp(&((*b as i128) << db));
            }
        }
        let e = self.exp.max(other.exp);
        let a = self.numerator() << (e - self.exp) as usize;
        let b = other.numerator() << (e - other.exp) as usize;
        a.cmp(&b)
    }

    fn add_impl(&self, other: &Dyadic) -> Dyadic {
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            let e = self.exp.max(other.exp);
            let (da, db) = (e - self.exp, e - other.exp);
            if da < 63 && db < 63 {
                return Dyadic::from_i128(((*a as i128) << da) + ((*b as i128) << db), e);
            }
        }
        let e = self.exp.max(other.exp);
        let a = self.numerator() << (e - self.exp) as usize;
        let b = other.numerator() << (e - other.exp) as usize;
        Dyadic::from_big(a + b, e)
    }

    fn mul_impl(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.checked_add(other.exp).expect("dyadic exponent overflow");
        if let (Num::Small(a), Num::Small(b)) = (&self.num, &other.num) {
            return Dyadic::from_i128(*a as i128 * *b as i128, exp);
        }
        Dyadic::from_big(self.numerator() * other.numerator(), exp)
    }

    fn neg_impl(&self) -> Dyadic {
        match &self.num {
            Num::Small(s) => match s.checked_neg() {
                Some(n) => Dyadic { num: Num::Small(n), exp: self.exp },
                None => Dyadic::from_big(-BigInt::from(*s), self.exp),
            },
            Num::Big(b) => Dyadic::from_big(-b.clone(), self.exp),
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_impl(other)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                self.$imp(rhs)
            }
        }
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                self.$imp(&rhs)
            }
        }
    };
}

binop!(Add, add, add_impl);
binop!(Mul, mul, mul_impl);

impl Dyadic {
    fn sub_impl(&self, other: &Dyadic) -> Dyadic {
        self.add_impl(&other.neg_impl())
    }
}

binop!(Sub, sub, sub_impl);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        self.neg_impl()
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        self.neg_impl()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.num {
            Num::Small(s) => write!(f, "{s}")?,
            Num::Big(b) => write!(f, "{b}")?,
        }
        if self.exp > 0 {
            write!(f, "/2^{}", self.exp)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `n`, `n/2^k`, and `n/d` with `d` a power of two.
    fn from_str(s: &str) -> Result<Dyadic> {
        let err = |m: &str| Error::Parse { position: 0, message: format!("{m} in dyadic {s:?}") };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let n: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
        let exp = match den {
            None => 0,
            Some(d) => {
                if let Some(k) = d.strip_prefix("2^") {
                    k.parse::<u32>().map_err(|_| err("bad exponent"))?
                } else {
                    let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
                    if !d.is_positive() {
                        return Err(err("non-positive denominator"));
                    }
                    let tz = d.trailing_zeros().unwrap_or(0);
                    if (&d >> tz as usize) != BigInt::one() {
                        return Err(err("denominator is not a power of two"));
                    }
                    tz as u32
                }
            }
        };
        Ok(Dyadic::from_big(n, exp))
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

/// Formats an exact rational, using the dyadic form when possible.
pub fn format_rational(r: &BigRational) -> String {
    match Dyadic::from_rational(r) {
        Some(d) => d.to_string(),
        None => {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic::zero()
    }
    fn is_zero(&self) -> bool {
        Dyadic::is_zero(self)
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic::one()
    }
}
