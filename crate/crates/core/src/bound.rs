//! The Weil-derived threshold Q(d,m) = (U + sqrt(U^2 + 4 d^{m-1} m))^2 / 4
//! with U = sum_{h=1}^m C(m,h) (d-1)^h (h-1), in exact integer arithmetic.
//!
//! Q(12,12) is on the order of 10^27, so everything runs on `BigUint`.
//! The exact floor comes from the identity
//! Q = (U^2 + 2 d^{m-1} m + U*sqrt(U^2 + 4 d^{m-1} m)) / 2 together with an
//! integer square root; the decimal rendering carries guard digits so the
//! 6-significant-figure output is correctly rounded.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub d: u64,
    pub m: u64,
    /// U, exact.
    pub u: BigUint,
    /// U^2 + 4 d^{m-1} m, the value under the square root.
    pub radicand: BigUint,
    /// floor(Q), exact.
    pub q_floor: BigUint,
    /// Least integer strictly greater than Q, so `q > Q` becomes
    /// `q >= q_threshold`.
    pub q_threshold: BigUint,
    /// Scientific rendering to 6 significant figures, e.g. "9.68583e9".
    pub q_decimal: String,
}

impl BoundQuery {
    /// floor(Q * 10^digits); used for high-precision comparisons.
    pub fn scaled_floor(&self, digits: u32) -> BigUint {
        let scale = BigUint::from(10u32).pow(digits);
        let a = &self.u * &self.u + BigUint::from(2u32) * tail_term(self.d, self.m);
        let s = (&self.u * &self.u * &self.radicand * &scale * &scale).sqrt();
        (a * scale + s) / 2u32
    }
}

fn tail_term(d: u64, m: u64) -> BigUint {
    // d^{m-1} * m
    BigUint::from(d).pow(m as u32 - 1) * BigUint::from(m)
}

pub fn q_bound(d: u64, m: u64) -> BoundQuery {
    assert!(d >= 1 && m >= 1, "q_bound requires d >= 1 and m >= 1");
    // U = sum_{h=1}^m C(m,h) (d-1)^h (h-1), binomials built incrementally
    let mut u = BigUint::zero();
    let mut binom = BigUint::one(); // C(m,0)
    let mut power = BigUint::one(); // (d-1)^0
    let dm1 = BigUint::from(d - 1);
    for h in 1..=m {
        binom = binom * BigUint::from(m - h + 1) / BigUint::from(h);
        power = &power * &dm1;
        u += &binom * &power * BigUint::from(h - 1);
    }

    let x = tail_term(d, m);
    let radicand = &u * &u + BigUint::from(4u32) * &x;
    // Q = (A + U*sqrt(radicand)) / 2 with A = U^2 + 2x; floor via isqrt.
    let a = &u * &u + BigUint::from(2u32) * &x;
    let s = (&u * &u * &radicand).sqrt();
    let q_floor = (&a + &s) / 2u32;
    let q_threshold = &q_floor + 1u32;

    let q_decimal = render_decimal(&a, &u, &radicand);

    BoundQuery {
        d,
        m,
        u,
        radicand,
        q_floor,
        q_threshold,
        q_decimal,
    }
}

/// 6 significant figures, round half up, scientific notation.
fn render_decimal(a: &BigUint, u: &BigUint, radicand: &BigUint) -> String {
    const GUARD: u32 = 12;
    let scale = BigUint::from(10u32).pow(GUARD);
    let p = (a * &scale + (u * u * radicand * &scale * &scale).sqrt()) / 2u32;
    let digits = p.to_string();
    // p represents Q with GUARD fractional digits; Q >= 1 always.
    let exp10 = digits.len() as i64 - GUARD as i64 - 1;
    let mut mantissa: u64 = digits[..6.min(digits.len())].parse().unwrap();
    let mut exp10 = exp10;
    if digits.len() > 6 && digits.as_bytes()[6] >= b'5' {
        mantissa += 1;
        if mantissa == 1_000_000 {
            mantissa = 100_000;
            exp10 += 1;
        }
    }
    let m = mantissa.to_string();
    format!("{}.{}e{}", &m[..1], &m[1..], exp10)
}
