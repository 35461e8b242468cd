//! Double-double arithmetic (about 32 significant digits).
//!
//! Used to check the irrational catalog constants past double precision.
//! Only the operations the method algorithms need are provided.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};

use crate::scalar::{Real, Scalar};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn new(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }

    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            Self::renorm(hi, self.lo.floor())
        } else {
            Self::new(hi)
        }
    }

    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            -(-self).floor()
        }
    }

    /// Decimal digits of `|self|`: returns (digits, exponent) with value = 0.d1d2... * 10^exponent.
    fn decimal_digits(self, count: usize) -> (Vec<u8>, i32) {
        let mut x = if self.hi < 0.0 { -self } else { self };
        if x.hi == 0.0 {
            return (vec![0; count], 1);
        }
        let mut exp = x.hi.log10().floor() as i32 + 1;
        let ten = Self::new(10.0);
        x = x / pow10(exp);
        while x.hi >= 1.0 {
            x = x / ten;
            exp += 1;
        }
        while x.hi < 0.1 {
            x = x * ten;
            exp -= 1;
        }
        let mut digits = Vec::with_capacity(count + 1);
        for _ in 0..=count {
            x = x * ten;
            let d = x.floor();
            let di = d.hi.clamp(0.0, 9.0) as u8;
            digits.push(di);
            x = x - Self::new(f64::from(di));
            if x.hi < 0.0 {
                x = Self::zero();
            }
        }
        // Round on the guard digit.
        if digits.pop().unwrap_or(0) >= 5 {
            let mut i = digits.len();
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
        (digits, exp)
    }
}

fn pow10(e: i32) -> DoubleDouble {
    let ten = DoubleDouble::new(10.0);
    let mut out = DoubleDouble::one();
    for _ in 0..e.unsigned_abs() {
        out = out * ten;
    }
    if e < 0 {
        DoubleDouble::one() / out
    } else {
        out
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renorm(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        Self::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self::from_parts(q1, q2) + Self::new(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - (self / b).trunc() * b
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::new(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = ();
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ()> {
        if radix != 10 {
            return Err(());
        }
        <Self as Scalar>::parse_decimal(s).ok_or(())
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_notation())
    }
}

impl Scalar for DoubleDouble {
    const EXACT: bool = false;

    fn tolerance() -> f64 {
        1e-28
    }

    fn from_i64(v: i64) -> Self {
        let hi = v as f64;
        let lo = (v - hi as i64) as f64;
        Self::renorm(hi, lo)
    }

    fn to_f64(&self) -> f64 {
        self.hi + self.lo
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        if let Some((num, den)) = text.split_once('/') {
            let n = Self::parse_decimal(num)?;
            let d = Self::parse_decimal(den)?;
            if d.is_zero() {
                return None;
            }
            return Some(n / d);
        }
        let text = text.trim();
        let (neg, body) = match text.as_bytes().first()? {
            b'-' => (true, &text[1..]),
            b'+' => (false, &text[1..]),
            _ => (false, text),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let ten = Self::new(10.0);
        let mut acc = Self::zero();
        for b in int.bytes().chain(frac.bytes()) {
            acc = acc * ten + Self::new(f64::from(b - b'0'));
        }
        let v = acc / pow10(frac.len() as i32);
        Some(if neg { -v } else { v })
    }

    fn to_notation(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (digits, exp) = self.decimal_digits(32);
        let mut s = String::new();
        if self.hi < 0.0 {
            s.push('-');
        }
        let digit_char = |d: u8| char::from(b'0' + d);
        if exp <= 0 {
            s.push_str("0.");
            for _ in 0..(-exp) {
                s.push('0');
            }
            s.extend(digits.iter().map(|&d| digit_char(d)));
        } else {
            let e = exp as usize;
            for i in 0..e.max(digits.len()) {
                if i == e {
                    s.push('.');
                }
                s.push(digit_char(*digits.get(i).unwrap_or(&0)));
            }
        }
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    }

    fn abs(&self) -> Self {
        if self.hi < 0.0 {
            -*self
        } else {
            *self
        }
    }
}

impl Real for DoubleDouble {
    fn from_f64(v: f64) -> Self {
        Self::new(v)
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::zero();
        }
        // One Newton step from the double estimate doubles the precision.
        let x = self.hi.sqrt();
        let xd = Self::new(x);
        xd + (self - xd * xd) / Self::new(2.0 * x)
    }

    fn cbrt(self) -> Self {
        if self.hi == 0.0 {
            return Self::zero();
        }
        let mut y = Self::new(self.hi.cbrt());
        for _ in 0..2 {
            let y2 = y * y;
            y = y - (y2 * y - self) / (Self::new(3.0) * y2);
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> DoubleDouble {
        DoubleDouble::parse_decimal(s).unwrap()
    }

    #[test]
    fn sqrt_two_to_thirty_digits() {
        let r = DoubleDouble::new(2.0).sqrt();
        let expected = dd("1.41421356237309504880168872420969807");
        assert!((r - expected).abs().to_f64() < 1e-31);
        assert!(r.to_notation().starts_with("1.41421356237309504880168872420"));
    }

    #[test]
    fn cbrt_and_division() {
        let c = DoubleDouble::new(2.0).cbrt();
        let back = c * c * c;
        assert!((back - DoubleDouble::new(2.0)).abs().to_f64() < 1e-30);
        let third = DoubleDouble::one() / DoubleDouble::new(3.0);
        assert!((third * DoubleDouble::new(3.0) - DoubleDouble::one()).abs().to_f64() < 1e-31);
    }

    #[test]
    fn notation_round_trip() {
        for s in ["0.451525513208585723409578820", "-1.075035037431900314780251056", "12", "-0.000414"] {
            let x = dd(s);
            let y = dd(&x.to_notation());
            assert!((x - y).abs().to_f64() <= 1e-30 * x.abs().to_f64().max(1.0), "{s}");
        }
        assert_eq!(dd("12").to_notation(), "12");
        assert_eq!(dd("-0.5").to_notation(), "-0.5");
    }

    #[test]
    fn ordering_uses_low_word() {
        let a = DoubleDouble::from_parts(1.0, 1e-20);
        let b = DoubleDouble::from_parts(1.0, -1e-20);
        assert!(a > b);
        assert_eq!((a % DoubleDouble::new(0.75)).hi(), 0.25);
    }
}
