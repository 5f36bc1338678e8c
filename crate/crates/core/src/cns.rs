//! Exact arithmetic for the two digit systems: base α = −1+i with digits
//! {0,1}, and the derived base −4 system with the 16-element digit set 𝒟.
//!
//! All arithmetic is exact. Machine integers are used with explicit
//! overflow detection; overflow is reported as an error, never wrapped.

use std::fmt;

use crate::{Error, Result};

/// A Gaussian integer a+bi.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

/// The base α = −1+i of the binary canonical number system.
pub const ALPHA: GaussianInt = GaussianInt { re: -1, im: 1 };

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        Ok(GaussianInt {
            re: self.re.checked_add(other.re).ok_or(Error::Overflow)?,
            im: self.im.checked_add(other.im).ok_or(Error::Overflow)?,
        })
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        Ok(GaussianInt {
            re: self.re.checked_sub(other.re).ok_or(Error::Overflow)?,
            im: self.im.checked_sub(other.im).ok_or(Error::Overflow)?,
        })
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        let ac = self.re.checked_mul(other.re).ok_or(Error::Overflow)?;
        let bd = self.im.checked_mul(other.im).ok_or(Error::Overflow)?;
        let ad = self.re.checked_mul(other.im).ok_or(Error::Overflow)?;
        let bc = self.im.checked_mul(other.re).ok_or(Error::Overflow)?;
        Ok(GaussianInt {
            re: ac.checked_sub(bd).ok_or(Error::Overflow)?,
            im: ad.checked_add(bc).ok_or(Error::Overflow)?,
        })
    }

    /// The norm N(a+bi) = a² + b².
    pub fn norm(self) -> Result<i64> {
        let a2 = self.re.checked_mul(self.re).ok_or(Error::Overflow)?;
        let b2 = self.im.checked_mul(self.im).ok_or(Error::Overflow)?;
        a2.checked_add(b2).ok_or(Error::Overflow)
    }

    /// Exact division by α. Fails if `self` is not divisible by α.
    ///
    /// (a+bi)/(−1+i) = ((b−a) + (−a−b)i)/2, which is a Gaussian integer
    /// exactly when a+b is even.
    pub fn div_alpha(self) -> Result<Self> {
        let re2 = self.im.checked_sub(self.re).ok_or(Error::Overflow)?;
        let im2 = self
            .re
            .checked_neg()
            .and_then(|x| x.checked_sub(self.im))
            .ok_or(Error::Overflow)?;
        if re2 % 2 != 0 || im2 % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "{self} is not divisible by α"
            )));
        }
        Ok(GaussianInt {
            re: re2 / 2,
            im: im2 / 2,
        })
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (_, 0) => write!(f, "{}", self.re),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, b) => write!(f, "{b}i"),
            (a, 1) => write!(f, "{a}+i"),
            (a, -1) => write!(f, "{a}-i"),
            (a, b) if b > 0 => write!(f, "{a}+{b}i"),
            (a, b) => write!(f, "{a}{b}i"),
        }
    }
}

/// An exact rational number, always in lowest terms with positive
/// denominator. Equality is structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = gcd128(num, den);
        let (mut num, mut den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if den < 0 {
            num = num.checked_neg().ok_or(Error::Overflow)?;
            den = den.checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(Rational { num, den })
    }

    pub fn from_int(n: i64) -> Self {
        Rational {
            num: n as i128,
            den: 1,
        }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn checked_add(self, o: Self) -> Result<Self> {
        let a = self
            .num
            .checked_mul(o.den)
            .ok_or(Error::Overflow)?
            .checked_add(o.num.checked_mul(self.den).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
        let b = self.den.checked_mul(o.den).ok_or(Error::Overflow)?;
        Rational::new(a, b)
    }

    pub fn checked_sub(self, o: Self) -> Result<Self> {
        self.checked_add(o.neg())
    }

    pub fn checked_mul(self, o: Self) -> Result<Self> {
        let a = self.num.checked_mul(o.num).ok_or(Error::Overflow)?;
        let b = self.den.checked_mul(o.den).ok_or(Error::Overflow)?;
        Rational::new(a, b)
    }

    pub fn checked_div(self, o: Self) -> Result<Self> {
        if o.num == 0 {
            return Err(Error::ZeroDenominator);
        }
        let a = self.num.checked_mul(o.den).ok_or(Error::Overflow)?;
        let b = self.den.checked_mul(o.num).ok_or(Error::Overflow)?;
        Rational::new(a, b)
    }

    pub fn neg(self) -> Self {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn abs(self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn floor(self) -> i128 {
        self.num.div_euclid(self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Denominators are positive; cross multiplication preserves order.
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An exact point of ℚ(i): x + iy with rational coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub x: Rational,
    pub y: Rational,
}

impl GaussianRational {
    pub const ZERO: GaussianRational = GaussianRational {
        x: Rational::ZERO,
        y: Rational::ZERO,
    };

    pub fn new(x: Rational, y: Rational) -> Self {
        GaussianRational { x, y }
    }

    pub fn from_gaussian_int(g: GaussianInt) -> Self {
        GaussianRational {
            x: Rational::from_int(g.re),
            y: Rational::from_int(g.im),
        }
    }

    pub fn checked_add(self, o: Self) -> Result<Self> {
        Ok(GaussianRational {
            x: self.x.checked_add(o.x)?,
            y: self.y.checked_add(o.y)?,
        })
    }

    pub fn checked_sub(self, o: Self) -> Result<Self> {
        Ok(GaussianRational {
            x: self.x.checked_sub(o.x)?,
            y: self.y.checked_sub(o.y)?,
        })
    }

    /// Complex multiplication by a Gaussian integer.
    pub fn mul_gaussian(self, g: GaussianInt) -> Result<Self> {
        let a = Rational::from_int(g.re);
        let b = Rational::from_int(g.im);
        Ok(GaussianRational {
            x: self.x.checked_mul(a)?.checked_sub(self.y.checked_mul(b)?)?,
            y: self.x.checked_mul(b)?.checked_add(self.y.checked_mul(a)?)?,
        })
    }

    /// Scalar multiplication by a rational.
    pub fn scale(self, s: Rational) -> Result<Self> {
        Ok(GaussianRational {
            x: self.x.checked_mul(s)?,
            y: self.y.checked_mul(s)?,
        })
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// One of the 16 base −4 digits b ∈ 𝒟, together with the four α-digits
/// d₁d₂d₃d₄ it stands for: b = d₁α³ + d₂α² + d₃α + d₄.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DigitBlock {
    pub value: GaussianInt,
    pub bits: [u8; 4],
}

impl DigitBlock {
    /// The letter index of this block in the 16-letter alphabet:
    /// the bits read as a binary number, [0000] = 0 … [1111] = 15.
    pub fn letter(&self) -> usize {
        self.bits.iter().fold(0usize, |acc, &b| acc * 2 + b as usize)
    }
}

fn block_value(bits: [u8; 4]) -> GaussianInt {
    // α³ = 2+2i, α² = −2i, α = −1+i.
    let mut v = GaussianInt::ZERO;
    let powers = [
        GaussianInt::new(2, 2),
        GaussianInt::new(0, -2),
        GaussianInt::new(-1, 1),
        GaussianInt::new(1, 0),
    ];
    for (d, p) in bits.iter().zip(powers) {
        if *d == 1 {
            v = v.checked_add(p).expect("tiny values");
        }
    }
    v
}

/// All 16 digit blocks in the order [0000]…[1111].
pub fn digit_table() -> [DigitBlock; 16] {
    let mut table = [DigitBlock {
        value: GaussianInt::ZERO,
        bits: [0; 4],
    }; 16];
    for (i, slot) in table.iter_mut().enumerate() {
        let bits = [
            (i >> 3 & 1) as u8,
            (i >> 2 & 1) as u8,
            (i >> 1 & 1) as u8,
            (i & 1) as u8,
        ];
        *slot = DigitBlock {
            value: block_value(bits),
            bits,
        };
    }
    table
}

/// The α-expansion of a Gaussian integer: the unique digit word
/// d_n…d₀ (most significant first) with g = Σ d_k α^k. Zero maps to
/// the empty word.
pub fn alpha_expand(mut g: GaussianInt) -> Result<Vec<u8>> {
    let mut digits = Vec::new();
    while !g.is_zero() {
        let d = (g.re + g.im).rem_euclid(2) as u8;
        if d == 1 {
            g = g.checked_sub(GaussianInt::new(1, 0))?;
        }
        g = g.div_alpha()?;
        digits.push(d);
    }
    digits.reverse();
    Ok(digits)
}

/// Evaluates g = Σ d_k α^k for a most-significant-first α-digit word.
pub fn alpha_eval(digits: &[u8]) -> Result<GaussianInt> {
    let mut g = GaussianInt::ZERO;
    for &d in digits {
        g = g.checked_mul(ALPHA)?;
        g = g.checked_add(GaussianInt::new(d as i64, 0))?;
    }
    Ok(g)
}

/// The exact value Σ_{k=1..n} b_k (−4)^{−k} of a finite block prefix.
pub fn eval_prefix(blocks: &[GaussianInt]) -> Result<GaussianRational> {
    let quarter = Rational::new(-1, 4)?;
    let mut v = GaussianRational::ZERO;
    for b in blocks.iter().rev() {
        v = v.checked_add(GaussianRational::from_gaussian_int(*b))?;
        v = v.scale(quarter)?;
    }
    Ok(v)
}

/// The exact limit of the eventually periodic expansion
/// 0.(preperiod)(period)(period)… in base −4.
pub fn eval_periodic(preperiod: &[GaussianInt], period: &[GaussianInt]) -> Result<GaussianRational> {
    if period.is_empty() {
        return Err(Error::InvalidArgument("empty period".into()));
    }
    let m = period.len() as u32;
    // S = P + (−4)^{−m} S  ⇒  S = P · (−4)^m / ((−4)^m − 1).
    let pow: i128 = (-4i128).checked_pow(m).ok_or(Error::Overflow)?;
    let factor = Rational::new(pow, pow - 1)?;
    let s = eval_prefix(period)?.scale(factor)?;
    let head = eval_prefix(preperiod)?;
    let npre = preperiod.len() as u32;
    let shift = Rational::new(1, (-4i128).checked_pow(npre).ok_or(Error::Overflow)?)?;
    head.checked_add(s.scale(shift)?)
}
