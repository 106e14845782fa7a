//! Reals that stay exact while they can.
//!
//! Property inequalities compare integer counts against bounds built from
//! decimal parameters such as `q = 0.3`. A [`Quantity`] carries a float value
//! and, whenever every input was a short decimal or an integer, the same value
//! as a reduced fraction. Comparisons use the fraction when both sides have
//! one and otherwise fall back to floats with an absolute slack of
//! [`FLOAT_SLACK`] in favour of the inequality holding.

use core::cmp::Ordering;
use core::fmt;

/// Absolute slack for float comparisons.
pub const FLOAT_SLACK: f64 = 1e-9;

const MAX_DECIMALS: u32 = 9;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Option<Ratio> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg()?;
            den = den.checked_neg()?;
        }
        Some(Ratio { num, den })
    }

    pub fn integer(v: i128) -> Ratio {
        Ratio { num: v, den: 1 }
    }

    pub fn num(self) -> i128 {
        self.num
    }

    pub fn den(self) -> i128 {
        self.den
    }

    /// The shortest decimal with at most nine fractional digits that rounds to `x`.
    pub fn from_decimal_f64(x: f64) -> Option<Ratio> {
        if !x.is_finite() || libm::fabs(x) > 1e18 {
            return None;
        }
        let mut den: i128 = 1;
        for _ in 0..=MAX_DECIMALS {
            let num = libm::round(x * den as f64);
            if num / den as f64 == x {
                return Ratio::new(num as i128, den);
            }
            den *= 10;
        }
        None
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn add(self, o: Ratio) -> Option<Ratio> {
        let num = self
            .num
            .checked_mul(o.den)?
            .checked_add(o.num.checked_mul(self.den)?)?;
        Ratio::new(num, self.den.checked_mul(o.den)?)
    }

    fn mul(self, o: Ratio) -> Option<Ratio> {
        let g1 = gcd(self.num, o.den).max(1);
        let g2 = gcd(o.num, self.den).max(1);
        let num = (self.num / g1).checked_mul(o.num / g2)?;
        let den = (self.den / g2).checked_mul(o.den / g1)?;
        Ratio::new(num, den)
    }

    fn neg(self) -> Option<Ratio> {
        Some(Ratio {
            num: self.num.checked_neg()?,
            den: self.den,
        })
    }

    fn cmp_checked(self, o: Ratio) -> Option<Ordering> {
        Some(self.num.checked_mul(o.den)?.cmp(&o.num.checked_mul(self.den)?))
    }
}

/// A float with an optional exact twin.
#[derive(Clone, Copy)]
pub struct Quantity {
    approx: f64,
    exact: Option<Ratio>,
}

impl fmt::Debug for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{} ({}/{})", self.approx, r.num, r.den),
            None => write!(f, "{}~", self.approx),
        }
    }
}

impl Quantity {
    pub const ZERO: Quantity = Quantity {
        approx: 0.0,
        exact: Some(Ratio { num: 0, den: 1 }),
    };

    /// A user parameter: exact when it is a short decimal.
    pub fn param(x: f64) -> Quantity {
        Quantity {
            approx: x,
            exact: Ratio::from_decimal_f64(x),
        }
    }

    pub fn int(v: i128) -> Quantity {
        Quantity {
            approx: v as f64,
            exact: Some(Ratio::integer(v)),
        }
    }

    pub fn count(v: u64) -> Quantity {
        Quantity::int(v as i128)
    }

    pub fn fraction(num: i128, den: i128) -> Quantity {
        let exact = Ratio::new(num, den);
        Quantity {
            approx: num as f64 / den as f64,
            exact,
        }
    }

    pub fn float(x: f64) -> Quantity {
        Quantity {
            approx: x,
            exact: None,
        }
    }

    pub fn value(self) -> f64 {
        self.exact.map_or(self.approx, Ratio::to_f64)
    }

    pub fn exact(self) -> Option<Ratio> {
        self.exact
    }

    pub fn is_exact(self) -> bool {
        self.exact.is_some()
    }

    pub fn abs(self) -> Quantity {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    pub fn is_negative(self) -> bool {
        match self.exact {
            Some(r) => r.num < 0,
            None => self.approx < 0.0,
        }
    }

    pub fn max(self, o: Quantity) -> Quantity {
        if self.lt_strict_exact_or_float(o) {
            o
        } else {
            self
        }
    }

    fn lt_strict_exact_or_float(self, o: Quantity) -> bool {
        match (self.exact, o.exact) {
            (Some(a), Some(b)) => match a.cmp_checked(b) {
                Some(ord) => ord == Ordering::Less,
                None => self.approx < o.approx,
            },
            _ => self.approx < o.approx,
        }
    }

    /// `self <= o`.
    pub fn le(self, o: Quantity) -> bool {
        match (self.exact, o.exact) {
            (Some(a), Some(b)) => match a.cmp_checked(b) {
                Some(ord) => ord != Ordering::Greater,
                None => self.approx <= o.approx + FLOAT_SLACK,
            },
            _ => self.approx <= o.approx + FLOAT_SLACK,
        }
    }

    /// `self < o`.
    pub fn lt(self, o: Quantity) -> bool {
        match (self.exact, o.exact) {
            (Some(a), Some(b)) => match a.cmp_checked(b) {
                Some(ord) => ord == Ordering::Less,
                None => self.approx < o.approx + FLOAT_SLACK,
            },
            _ => self.approx < o.approx + FLOAT_SLACK,
        }
    }

    pub fn ge(self, o: Quantity) -> bool {
        o.le(self)
    }

    pub fn gt(self, o: Quantity) -> bool {
        o.lt(self)
    }
}

impl core::ops::Add for Quantity {
    type Output = Quantity;
    fn add(self, o: Quantity) -> Quantity {
        Quantity {
            approx: self.approx + o.approx,
            exact: self.exact.zip(o.exact).and_then(|(a, b)| a.add(b)),
        }
    }
}

impl core::ops::Neg for Quantity {
    type Output = Quantity;
    fn neg(self) -> Quantity {
        Quantity {
            approx: -self.approx,
            exact: self.exact.and_then(Ratio::neg),
        }
    }
}

impl core::ops::Sub for Quantity {
    type Output = Quantity;
    fn sub(self, o: Quantity) -> Quantity {
        self + (-o)
    }
}

impl core::ops::Mul for Quantity {
    type Output = Quantity;
    fn mul(self, o: Quantity) -> Quantity {
        Quantity {
            approx: self.approx * o.approx,
            exact: self.exact.zip(o.exact).and_then(|(a, b)| a.mul(b)),
        }
    }
}

impl PartialEq for Quantity {
    fn eq(&self, o: &Quantity) -> bool {
        match (self.exact, o.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.approx == o.approx,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(Ratio::from_decimal_f64(0.3), Ratio::new(3, 10));
        assert_eq!(Ratio::from_decimal_f64(0.05), Ratio::new(1, 20));
        assert_eq!(Ratio::from_decimal_f64(1.0), Ratio::new(1, 1));
        assert_eq!(Ratio::from_decimal_f64(1.0 / 3.0), None);
    }

    #[test]
    fn exact_comparison_beats_rounding() {
        // 0.1 + 0.2 > 0.3 in floats, equal as fractions
        let a = Quantity::param(0.1) + Quantity::param(0.2);
        assert!(a.le(Quantity::param(0.3)));
        assert!(!a.lt(Quantity::param(0.3)));
        assert!(a == Quantity::param(0.3));
    }

    #[test]
    fn float_fallback_uses_slack() {
        let third = Quantity::param(1.0 / 3.0);
        assert!(!third.is_exact());
        assert!((third * Quantity::int(3)).le(Quantity::int(1)));
    }

    #[test]
    fn abs_and_sign() {
        let x = Quantity::int(3) - Quantity::param(4.5);
        assert!(x.is_negative());
        assert_eq!(x.abs().value(), 1.5);
    }
}
