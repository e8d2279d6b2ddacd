//! Finite fields F_{p^f} with a fixed primitive element and cyclotomic-class
//! machinery.
//!
//! Elements are handles: a [`FieldElem`] wraps the canonical index
//! `c_0 + c_1 p + ... + c_{f-1} p^{f-1}` of its coefficient vector (constant
//! term first). All arithmetic goes through the owning [`FiniteField`]. The
//! canonical element order used for witnesses and representative choices is
//! the index order.
//!
//! The canonical primitive element omega is the least positive primitive root
//! for prime fields, and the residue class of the indeterminate for extension
//! fields (whose modulus is therefore required to be primitive). When no
//! modulus is supplied, the lexicographically least primitive polynomial is
//! selected, comparing coefficient lists constant term first.

use std::sync::{Arc, OnceLock};

use crate::arith::{distinct_prime_factors, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Discrete-log tables are built for fields up to this order unless the
/// `DIFF_FORGE_DLOG_THRESHOLD` environment variable overrides it.
pub const DEFAULT_DLOG_THRESHOLD: u64 = 1 << 20;

/// An element of a [`FiniteField`], stored as its canonical index.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElem(u64);

impl FieldElem {
    pub fn index(self) -> u64 {
        self.0
    }
}

struct Tables {
    /// dlog[index] = j with element = omega^j; u32::MAX marks the zero element.
    dlog: Vec<u32>,
    /// pow[j] = index of omega^j for 0 <= j < q-1.
    pow: Vec<u64>,
}

struct Inner {
    p: u64,
    f: usize,
    q: u64,
    /// Monic, length f+1, constant term first.
    modulus: Vec<u64>,
    omega: FieldElem,
    dlog_threshold: u64,
    tables: OnceLock<Option<Tables>>,
}

/// F_{p^f} with char `p`, degree `f`, a verified-primitive modulus and the
/// canonical primitive element. Cheap to clone and share across threads.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
            && self.inner.f == other.inner.f
            && self.inner.modulus == other.inner.modulus
    }
}
impl Eq for FiniteField {}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fmt, "GF({})", self.inner.q)
    }
}

fn env_dlog_threshold() -> u64 {
    std::env::var("DIFF_FORGE_DLOG_THRESHOLD")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_DLOG_THRESHOLD)
}

// Polynomial arithmetic on canonical indices for a candidate modulus; used
// during construction before a FiniteField exists.
fn decode(p: u64, f: usize, mut x: u64, out: &mut Vec<u64>) {
    out.clear();
    for _ in 0..f {
        out.push(x % p);
        x /= p;
    }
}

fn encode(p: u64, coeffs: &[u64]) -> u64 {
    let mut x = 0u64;
    for &c in coeffs.iter().rev() {
        x = x * p + c;
    }
    x
}

fn poly_mul(p: u64, f: usize, modulus: &[u64], a: u64, b: u64) -> u64 {
    let mut ca = Vec::with_capacity(f);
    let mut cb = Vec::with_capacity(f);
    decode(p, f, a, &mut ca);
    decode(p, f, b, &mut cb);
    let mut prod = vec![0u64; 2 * f - 1];
    for (i, &x) in ca.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in cb.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    // reduce by the monic modulus: x^f = -(m_0 + m_1 x + ... + m_{f-1} x^{f-1})
    for deg in (f..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for i in 0..f {
            let sub = mul_mod(c, modulus[i], p);
            prod[deg - f + i] = (prod[deg - f + i] + p - sub % p) % p;
        }
    }
    encode(p, &prod[..f])
}

fn poly_pow(p: u64, f: usize, modulus: &[u64], mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64; // index of the constant 1
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul(p, f, modulus, acc, base);
        }
        base = poly_mul(p, f, modulus, base, base);
        exp >>= 1;
    }
    acc
}

/// Does `x` have multiplicative order exactly `q - 1` in F_p[t]/(modulus)?
/// A positive answer also certifies that the modulus is irreducible.
fn has_full_order(p: u64, f: usize, modulus: &[u64], x: u64, q: u64, factors: &[u64]) -> bool {
    if x == 0 {
        return false;
    }
    if poly_pow(p, f, modulus, x, q - 1) != 1 {
        return false;
    }
    factors
        .iter()
        .all(|&r| poly_pow(p, f, modulus, x, (q - 1) / r) != 1)
}

impl FiniteField {
    /// Builds F_{p^f}. A supplied modulus must be monic of degree `f`
    /// (coefficients constant term first) and primitive; when omitted the
    /// lexicographically least primitive polynomial is chosen.
    pub fn new(p: u64, f: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        Self::with_dlog_threshold(p, f, modulus, env_dlog_threshold())
    }

    /// Prime field F_p with the least primitive root as omega.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_dlog_threshold(
        p: u64,
        f: usize,
        modulus: Option<Vec<u64>>,
        dlog_threshold: u64,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::BadModulus("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(f as u32)
            .filter(|&q| q < u64::MAX / 2)
            .ok_or(Error::FieldTooLarge { p, f })?;
        if let Some(m) = &modulus {
            if m.len() != f + 1 {
                return Err(Error::BadModulus(format!(
                    "expected {} coefficients for degree {f}, got {}",
                    f + 1,
                    m.len()
                )));
            }
            if m[f] != 1 {
                return Err(Error::BadModulus("modulus must be monic".into()));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::BadModulus(format!("coefficients must lie in 0..{p}")));
            }
        }

        let factors = distinct_prime_factors(q - 1);
        let (modulus, omega) = if f == 1 {
            match modulus {
                Some(m) => {
                    let g = (p - m[0]) % p; // root of x - g
                    if !has_full_order(p, 1, &m, g, q, &factors) {
                        return Err(Error::NotPrimitive { p });
                    }
                    (m, g)
                }
                None => {
                    let g = least_primitive_root(p, &factors);
                    (vec![(p - g) % p, 1], g)
                }
            }
        } else {
            match modulus {
                Some(m) => {
                    // omega is the residue of the indeterminate: index p.
                    if !has_full_order(p, f, &m, p, q, &factors) {
                        return Err(Error::NotPrimitive { p });
                    }
                    (m, p)
                }
                None => (least_primitive_modulus(p, f, q, &factors)?, p),
            }
        };

        Ok(FiniteField {
            inner: Arc::new(Inner {
                p,
                f,
                q,
                modulus,
                omega: FieldElem(omega),
                dlog_threshold,
                tables: OnceLock::new(),
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }
    pub fn f(&self) -> usize {
        self.inner.f
    }
    pub fn q(&self) -> u64 {
        self.inner.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }
    pub fn omega(&self) -> FieldElem {
        self.inner.omega
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }
    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.inner.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::ElementOutOfRange {
                index,
                order: self.inner.q,
            })
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.inner.f {
            return Err(Error::Format(format!(
                "expected {} coefficients, got {}",
                self.inner.f,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(Error::Format(format!(
                "coefficients must lie in 0..{}",
                self.inner.p
            )));
        }
        Ok(FieldElem(encode(self.inner.p, coeffs)))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.inner.f);
        decode(self.inner.p, self.inner.f, x.0, &mut out);
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.inner.q).map(FieldElem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.inner.q).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.inner.p;
        if self.inner.f == 1 {
            return FieldElem((a.0 + b.0) % p);
        }
        let (mut x, mut y, mut out, mut mult) = (a.0, b.0, 0u64, 1u64);
        for _ in 0..self.inner.f {
            out += (x % p + y % p) % p * mult;
            x /= p;
            y /= p;
            mult *= p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.inner.p;
        if self.inner.f == 1 {
            return FieldElem((p - a.0) % p);
        }
        let (mut x, mut out, mut mult) = (a.0, 0u64, 1u64);
        for _ in 0..self.inner.f {
            out += (p - x % p) % p * mult;
            x /= p;
            mult *= p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.inner.f == 1 {
            return FieldElem(mul_mod(a.0, b.0, self.inner.p));
        }
        FieldElem(poly_mul(
            self.inner.p,
            self.inner.f,
            &self.inner.modulus,
            a.0,
            b.0,
        ))
    }

    pub fn pow(&self, a: FieldElem, exp: u64) -> FieldElem {
        if self.inner.f == 1 {
            return FieldElem(pow_mod(a.0, exp, self.inner.p));
        }
        FieldElem(poly_pow(
            self.inner.p,
            self.inner.f,
            &self.inner.modulus,
            a.0,
            exp,
        ))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.inner.q - 2))
    }

    /// omega^exp with exp reduced mod q-1; table-backed when available.
    pub fn omega_pow(&self, exp: u64) -> FieldElem {
        let e = exp % (self.inner.q - 1).max(1);
        if let Some(t) = self.tables() {
            return FieldElem(t.pow[e as usize]);
        }
        self.pow(self.inner.omega, e)
    }

    fn tables(&self) -> Option<&Tables> {
        self.inner
            .tables
            .get_or_init(|| {
                if self.inner.q > self.inner.dlog_threshold {
                    return None;
                }
                let q = self.inner.q as usize;
                let mut dlog = vec![u32::MAX; q];
                let mut pow = Vec::with_capacity(q - 1);
                let mut x = self.one();
                for j in 0..(q - 1) {
                    debug_assert_eq!(dlog[x.0 as usize], u32::MAX, "omega is not primitive");
                    dlog[x.0 as usize] = j as u32;
                    pow.push(x.0);
                    x = self.mul(x, self.inner.omega);
                }
                Some(Tables { dlog, pow })
            })
            .as_ref()
    }

    /// Discrete log base omega; only available below the table threshold.
    pub fn dlog(&self, x: FieldElem) -> Result<Option<u64>> {
        if x.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.tables().map(|t| t.dlog[x.0 as usize] as u64))
    }

    /// The label i with x in C_i^{e,q}. Table-backed below the threshold,
    /// otherwise by matching x^{(q-1)/e} against e-th roots of unity.
    pub fn cyclo_index(&self, e: u64, x: FieldElem) -> Result<u64> {
        let q = self.inner.q;
        if e == 0 || (q - 1) % e != 0 {
            return Err(Error::DivisibilityViolated {
                what: "cyclotomic index e must divide q - 1",
                a: e,
                b: q - 1,
            });
        }
        if x.0 == 0 {
            return Err(Error::ZeroElement);
        }
        if let Some(t) = self.tables() {
            return Ok(t.dlog[x.0 as usize] as u64 % e);
        }
        let step = self.omega_pow((q - 1) / e);
        let target = self.pow(x, (q - 1) / e);
        let mut acc = self.one();
        for j in 0..e {
            if acc == target {
                return Ok(j);
            }
            acc = self.mul(acc, step);
        }
        Err(Error::InconsistentScheme(
            "power residue did not match any e-th root of unity".into(),
        ))
    }

    /// The canonical representative system for the cosets of C_0^{e,q} inside
    /// C_0^{d,q}: the e/d elements omega^{d*j}, 0 <= j < e/d.
    pub fn representative_system(&self, e: u64, d: u64) -> Result<Vec<FieldElem>> {
        let q = self.inner.q;
        if e == 0 || (q - 1) % e != 0 {
            return Err(Error::DivisibilityViolated {
                what: "e must divide q - 1",
                a: e,
                b: q - 1,
            });
        }
        if d == 0 || e % d != 0 {
            return Err(Error::DivisibilityViolated {
                what: "d must divide e",
                a: d,
                b: e,
            });
        }
        Ok((0..e / d).map(|j| self.omega_pow(d * j)).collect())
    }

    /// omega^{(q-1)/4}, a primitive 4th root of unity.
    pub fn primitive_fourth_root(&self) -> Result<FieldElem> {
        let q = self.inner.q;
        if (q - 1) % 4 != 0 {
            return Err(Error::NoFourthRoot { q });
        }
        Ok(self.omega_pow((q - 1) / 4))
    }

    /// The least element of each class C_i^{d,q}, indexed by i.
    pub fn least_class_representatives(&self, d: u64) -> Result<Vec<FieldElem>> {
        let q = self.inner.q;
        if d == 0 || (q - 1) % d != 0 {
            return Err(Error::DivisibilityViolated {
                what: "d must divide q - 1",
                a: d,
                b: q - 1,
            });
        }
        let mut reps: Vec<Option<FieldElem>> = vec![None; d as usize];
        let mut remaining = d as usize;
        for x in self.nonzero_elements() {
            let i = self.cyclo_index(d, x)? as usize;
            if reps[i].is_none() {
                reps[i] = Some(x);
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
        }
        Ok(reps.into_iter().map(|r| r.expect("class nonempty")).collect())
    }

    pub fn multiplicative_order(&self, x: FieldElem) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::ZeroElement);
        }
        let mut ord = self.inner.q - 1;
        for r in distinct_prime_factors(self.inner.q - 1) {
            while ord % r == 0 && self.pow(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }
}

fn least_primitive_root(p: u64, factors: &[u64]) -> u64 {
    if p == 2 {
        return 1;
    }
    for g in 2..p {
        if factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1) {
            return g;
        }
    }
    unreachable!("every prime field has a primitive root")
}

/// Scans monic degree-f polynomials in constant-term-first lexicographic
/// order and returns the first primitive one.
fn least_primitive_modulus(p: u64, f: usize, q: u64, factors: &[u64]) -> Result<Vec<u64>> {
    let mut coeffs = vec![0u64; f + 1];
    coeffs[f] = 1;
    loop {
        if has_full_order(p, f, &coeffs, p, q, factors) {
            return Ok(coeffs);
        }
        // increment the (c_{f-1}, ..., c_0) counter so that c_0 varies slowest
        let mut i = f;
        loop {
            if i == 0 {
                return Err(Error::InconsistentScheme(format!(
                    "no primitive polynomial of degree {f} over GF({p})"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}
