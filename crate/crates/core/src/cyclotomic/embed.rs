//! Fixed-point evaluation of cyclotomic numbers at `exp(2πi/N)`.
//!
//! Output is for display only; nothing in the crate decides equality or
//! non-vanishing from it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::CycNumber;

const GUARD_DIGITS: u32 = 12;

/// Decimal approximation of a complex number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexApprox {
    pub re: String,
    pub im: String,
    /// Requested significant digits.
    pub digits: u32,
    pub approximate: bool,
}

impl ComplexApprox {
    pub fn re_f64(&self) -> f64 {
        self.re.parse().expect("decimal string")
    }

    pub fn im_f64(&self) -> f64 {
        self.im.parse().expect("decimal string")
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, im) = match self.im.strip_prefix('-') {
            Some(rest) => ('-', rest),
            None => ('+', self.im.as_str()),
        };
        write!(f, "~ {} {} {}i", self.re, sign, im)
    }
}

pub(super) fn evaluate(x: &CycNumber, digits: u32) -> ComplexApprox {
    let digits = digits.max(1);
    // Coefficient size eats into absolute precision.
    let weight: BigInt = x
        .coeffs()
        .iter()
        .map(|c| c.abs().ceil().to_integer() + 1)
        .sum();
    let guard = GUARD_DIGITS + weight.to_string().len() as u32;

    let mut frac = digits;
    let (mut re, mut im) = eval_fixed(x, frac + guard);
    let scale = pow10(frac + guard);
    let mag = re.abs().max(im.abs());
    if !mag.is_zero() && mag < scale {
        // |value| < 1: keep `digits` significant digits after the leading zeros
        let zeros = (frac + guard) - mag.to_string().len() as u32;
        if zeros > 0 {
            frac += zeros;
            (re, im) = eval_fixed(x, frac + guard);
        }
    }
    ComplexApprox {
        re: to_decimal(&re, frac + guard, frac),
        im: to_decimal(&im, frac + guard, frac),
        digits,
        approximate: true,
    }
}

fn pow10(p: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), p as usize)
}

/// Real and imaginary parts scaled by `10^prec`.
fn eval_fixed(x: &CycNumber, prec: u32) -> (BigInt, BigInt) {
    let scale = pow10(prec);
    let pi = pi_fixed(&scale);
    let n = x.level() as i64;
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for (l, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut k = l as i64 % n;
        if 2 * k > n {
            k -= n;
        }
        let theta = (&pi * BigInt::from(2 * k)).div_floor(&BigInt::from(n));
        let (cos, sin) = cos_sin_fixed(&theta, &scale);
        let coeff = (c.numer() * &scale).div_floor(c.denom());
        re += (&coeff * cos).div_floor(&scale);
        im += (&coeff * sin).div_floor(&scale);
    }
    (re, im)
}

fn atan_inv_fixed(x: u64, scale: &BigInt) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = scale / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn pi_fixed(scale: &BigInt) -> BigInt {
    // Machin: π = 16 atan(1/5) - 4 atan(1/239)
    atan_inv_fixed(5, scale) * 16 - atan_inv_fixed(239, scale) * 4
}

/// Taylor series for `|theta| <= π`.
fn cos_sin_fixed(theta: &BigInt, scale: &BigInt) -> (BigInt, BigInt) {
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    // term_k = theta^k / k!
    let mut term = scale.clone();
    let mut k = 0u64;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        term = (&term * theta) / scale / BigInt::from(k + 1);
        k += 1;
    }
    (cos, sin)
}

fn to_decimal(v: &BigInt, prec: u32, frac: u32) -> String {
    let drop = pow10(prec - frac);
    let half = &drop / 2;
    let negative = v.is_negative();
    let mag: BigInt = (v.abs() + half) / drop;
    let unit = pow10(frac);
    let (int, rem) = mag.div_rem(&unit);
    let sign = if negative && !mag.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{rem:0>width$}", width = frac as usize)
}
