//! Exact monetary amounts in hundredths of SEK.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

/// An exact amount of money, stored as integer hundredths (öre).
///
/// Rates such as "SEK per minute" are also carried as `Money`; multiplying a
/// rate by whole minutes stays exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_hundredths(hundredths: i64) -> Self {
        Money(hundredths)
    }

    pub const fn hundredths(self) -> i64 {
        self.0
    }

    /// Converts a decimal value, rejecting anything not representable in
    /// hundredths (within float noise).
    pub fn from_f64_exact(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        let scaled = value * 100.0;
        let rounded = round_f64(scaled);
        if (scaled - rounded).abs() > 1e-6 || rounded.abs() > 9.0e15 {
            return None;
        }
        Some(Money(rounded as i64))
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }

    /// `self * minutes`, exact.
    pub fn times(self, minutes: u32) -> Money {
        Money(self.0 * i64::from(minutes))
    }

    /// `self * num / den` rounded half-to-even at hundredths.
    pub fn scale_ratio(self, num: u64, den: u64) -> Money {
        assert!(den > 0, "zero denominator");
        Money(div_round_half_even(i128::from(self.0) * i128::from(num), i128::from(den)) as i64)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// `f64::round` lives in std; this is enough for the magnitudes used here.
fn round_f64(x: f64) -> f64 {
    let t = x as i64 as f64;
    let frac = x - t;
    if frac >= 0.5 {
        t + 1.0
    } else if frac <= -0.5 {
        t - 1.0
    } else {
        t
    }
}

/// Integer division with round-half-to-even; `den > 0`.
pub(crate) fn div_round_half_even(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = num.div_euclid(den);
    let r = num.rem_euclid(den);
    let twice = 2 * r;
    if twice > den || (twice == den && q % 2 != 0) {
        q + 1
    } else {
        q
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{}{}.{:02}", sign, abs / 100, abs % 100)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseMoneyError;

impl fmt::Display for ParseMoneyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid amount: expected a decimal with at most two fractional digits")
    }
}

impl core::error::Error for ParseMoneyError {}

impl FromStr for Money {
    type Err = ParseMoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if whole.is_empty() || frac.len() > 2 {
            return Err(ParseMoneyError);
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseMoneyError);
        }
        let whole: i64 = whole.parse().map_err(|_| ParseMoneyError)?;
        let mut cents: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| ParseMoneyError)?
        };
        if frac.len() == 1 {
            cents *= 10;
        }
        let total = whole
            .checked_mul(100)
            .and_then(|w| w.checked_add(cents))
            .ok_or(ParseMoneyError)?;
        Ok(Money(if neg { -total } else { total }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn half_even_rounding() {
        assert_eq!(div_round_half_even(5, 2), 2);
        assert_eq!(div_round_half_even(7, 2), 4);
        assert_eq!(div_round_half_even(1, 3), 0);
        assert_eq!(div_round_half_even(2, 3), 1);
        assert_eq!(div_round_half_even(-5, 2), -2);
        assert_eq!(div_round_half_even(-7, 2), -4);
    }

    #[test]
    fn ratio_scaling() {
        let xi = Money::from_hundredths(96);
        assert_eq!(xi.times(60).scale_ratio(1, 2), Money::from_hundredths(2880));
        assert_eq!(xi.times(60).scale_ratio(2, 3), Money::from_hundredths(3840));
        // 1 * 1/2 = 0.5 hundredths -> rounds to even 0
        assert_eq!(Money::from_hundredths(1).scale_ratio(1, 2), Money::ZERO);
        assert_eq!(
            Money::from_hundredths(3).scale_ratio(1, 2),
            Money::from_hundredths(2)
        );
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Money::from_hundredths(4260).to_string(), "42.60");
        assert_eq!(Money::from_hundredths(-5).to_string(), "-0.05");
        assert_eq!("0.96".parse::<Money>(), Ok(Money::from_hundredths(96)));
        assert_eq!("3".parse::<Money>(), Ok(Money::from_hundredths(300)));
        assert_eq!("0.7".parse::<Money>(), Ok(Money::from_hundredths(70)));
        assert!("0.961".parse::<Money>().is_err());
        assert!(".5".parse::<Money>().is_err());
    }

    #[test]
    fn from_float() {
        assert_eq!(
            Money::from_f64_exact(0.96),
            Some(Money::from_hundredths(96))
        );
        assert_eq!(
            Money::from_f64_exact(0.75),
            Some(Money::from_hundredths(75))
        );
        assert_eq!(
            Money::from_f64_exact(57.6 / 60.0),
            Some(Money::from_hundredths(96))
        );
        assert_eq!(Money::from_f64_exact(0.001), None);
        assert_eq!(Money::from_f64_exact(f64::NAN), None);
    }
}
