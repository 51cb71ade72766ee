//! Exact arithmetic in GF(p^k) for orders up to 256.
//!
//! Elements are small integer codes: the polynomial `c0 + c1 x + ... + c_{k-1} x^{k-1}`
//! over GF(p) is stored as `c0 + c1 p + c2 p^2 + ...`, so code 0 is zero and code 1
//! is one. Every operation is a table lookup.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: usize = 256;

/// Conway polynomials for the non-prime orders up to 256, coefficients listed from
/// the constant term up to the (monic) leading term.
const CONWAY: &[(usize, usize, &[u8])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Operation tables for one finite field.
#[derive(Debug, Clone)]
pub struct FieldTable {
    q: usize,
    p: usize,
    k: usize,
    modulus: Vec<u8>,
    primitive: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    exp: Vec<u8>,
    log: Vec<u16>,
    conj: Option<Vec<u8>>,
}

/// Builds GF(q).
pub fn build_field(q: usize) -> Result<FieldTable> {
    FieldTable::new(q)
}

impl FieldTable {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let (modulus, primitive) = if k == 1 {
            let g = smallest_primitive_root(p);
            (vec![((p - g) % p) as u8, 1], g as u8)
        } else {
            let m = CONWAY
                .iter()
                .find(|(pp, kk, _)| *pp == p && *kk == k)
                .map(|(_, _, c)| c.to_vec())
                .ok_or(Error::FieldTooLarge(q))?;
            (m, p as u8)
        };

        // Digit-wise addition.
        let digits = |mut c: usize| -> Vec<usize> {
            let mut d = vec![0; k];
            for slot in d.iter_mut() {
                *slot = c % p;
                c /= p;
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &x| acc * p + x);
        let mut add = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s) as u8;
            }
            let n: Vec<usize> = da.iter().map(|x| (p - x) % p).collect();
            neg[a] = undigits(&n) as u8;
        }

        // Powers of the primitive element.
        let mut exp = vec![0u8; q - 1];
        let mut log = vec![u16::MAX; q];
        let mut cur = 1usize;
        for (i, slot) in exp.iter_mut().enumerate() {
            if log[cur] != u16::MAX {
                return Err(Error::Structural(format!(
                    "modulus of GF({q}) is not primitive (order {i})"
                )));
            }
            *slot = cur as u8;
            log[cur] = i as u16;
            cur = if k == 1 {
                cur * primitive as usize % p
            } else {
                // multiply by x modulo the monic modulus
                let d = digits(cur);
                let top = d[k - 1];
                let mut next = vec![0usize; k];
                for j in (1..k).rev() {
                    next[j] = d[j - 1];
                }
                for (j, slot) in next.iter_mut().enumerate() {
                    let sub = top * modulus[j] as usize % p;
                    *slot = (*slot + p - sub) % p;
                }
                undigits(&next)
            };
        }
        if cur != 1 {
            return Err(Error::Structural(format!("modulus of GF({q}) is not primitive")));
        }

        let mut mul = vec![0u8; q * q];
        let mut inv = vec![0u8; q];
        for a in 1..q {
            let la = log[a] as usize;
            for b in 1..q {
                mul[a * q + b] = exp[(la + log[b] as usize) % (q - 1)];
            }
            inv[a] = exp[(q - 1 - la) % (q - 1)];
        }

        let mut field = FieldTable {
            q,
            p,
            k,
            modulus,
            primitive,
            add,
            mul,
            neg,
            inv,
            exp,
            log,
            conj: None,
        };
        if k % 2 == 0 {
            let e = p.pow((k / 2) as u32) as u64;
            field.conj = Some((0..q).map(|x| field.pow(x as u8, e)).collect());
        }
        Ok(field)
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The primitive element (the class of `x`, or the least primitive root when k = 1).
    pub fn primitive(&self) -> u8 {
        self.primitive
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    /// Multiplicative inverse; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % (self.q as u64 - 1))) % (self.q as u64 - 1)) as usize]
    }

    /// Discrete logarithm to the primitive base; `None` for zero.
    pub fn log(&self, a: u8) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    /// `primitive^i`.
    pub fn exp(&self, i: usize) -> u8 {
        self.exp[i % (self.q - 1)]
    }

    /// The involution `x -> x^sqrt(q)` when the order is a square.
    #[inline]
    pub fn conj(&self, a: u8) -> u8 {
        match &self.conj {
            Some(t) => t[a as usize],
            None => a,
        }
    }

    pub fn has_conj(&self) -> bool {
        self.conj.is_some()
    }

    /// `sqrt(q)` when the order is a square.
    pub fn sqrt_order(&self) -> Option<usize> {
        self.k.is_multiple_of(2).then(|| self.p.pow((self.k / 2) as u32))
    }

    pub fn is_square(&self, a: u8) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize].is_multiple_of(2)
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.q).map(|x| x as u8)
    }

    /// The integer `n` mapped into the prime subfield.
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.p as i64) as u8
    }

    pub fn check_code(&self, code: usize) -> Result<u8> {
        if code < self.q {
            Ok(code as u8)
        } else {
            Err(Error::CodeOutOfRange { code, q: self.q })
        }
    }

    /// Modulus rendered as a polynomial string, e.g. `x^2+x+1`.
    pub fn modulus_string(&self) -> String {
        poly_string(&self.modulus)
    }
}

pub(crate) fn poly_string(coeffs: &[u8]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mon = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mon,
            _ => format!("{c}{mon}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn smallest_primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, (p - 1) / f, p) != 1))
        .expect("every prime has a primitive root")
}

pub(crate) fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_pow(mut b: usize, mut e: usize, m: usize) -> usize {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// GF(q) sitting inside GF(q^2) as the subfield fixed by `x -> x^q`.
#[derive(Debug, Clone)]
pub struct ExtensionPair {
    base: Arc<FieldTable>,
    ext: Arc<FieldTable>,
    embed: Vec<u8>,
    project: Vec<Option<u8>>,
    frob: Vec<u8>,
}

/// Builds GF(q) ⊂ GF(q^2).
pub fn build_extension(q: usize) -> Result<ExtensionPair> {
    ExtensionPair::new(q)
}

impl ExtensionPair {
    pub fn new(q: usize) -> Result<Self> {
        let base = FieldTable::new(q)?;
        let ext = FieldTable::new(q * q)?;
        // A root of the base modulus inside GF(q^2); prime-field codes agree in both tables.
        let eval = |x: u8| {
            base.modulus
                .iter()
                .rev()
                .fold(0u8, |acc, &c| ext.add(ext.mul(acc, x), c))
        };
        let preferred = ext.pow(ext.primitive(), (q + 1) as u64);
        let root = std::iter::once(preferred)
            .chain(1..ext.q() as u8)
            .find(|&x| eval(x) == 0)
            .ok_or_else(|| Error::Structural(format!("GF({q}) does not embed in GF({})", q * q)))?;
        let mut embed = vec![0u8; q];
        for j in 0..q - 1 {
            embed[base.exp(j) as usize] = ext.pow(root, j as u64);
        }
        let mut project = vec![None; ext.q()];
        for (b, &e) in embed.iter().enumerate() {
            project[e as usize] = Some(b as u8);
        }
        let frob: Vec<u8> = (0..ext.q()).map(|x| ext.pow(x as u8, q as u64)).collect();
        Ok(ExtensionPair {
            base: Arc::new(base),
            ext: Arc::new(ext),
            embed,
            project,
            frob,
        })
    }

    pub fn base(&self) -> &Arc<FieldTable> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<FieldTable> {
        &self.ext
    }

    #[inline]
    pub fn embed(&self, a: u8) -> u8 {
        self.embed[a as usize]
    }

    /// Inverse of [`Self::embed`] on the subfield.
    #[inline]
    pub fn project(&self, a: u8) -> Option<u8> {
        self.project[a as usize]
    }

    #[inline]
    pub fn frob(&self, a: u8) -> u8 {
        self.frob[a as usize]
    }

    pub fn trace(&self, a: u8) -> u8 {
        self.ext.add(a, self.frob(a))
    }

    pub fn norm(&self, a: u8) -> u8 {
        self.ext.mul(a, self.frob(a))
    }

    /// `(x^q, x + x^q, x^{q+1})`.
    pub fn frob_trace_norm(&self, x: usize) -> Result<(u8, u8, u8)> {
        let x = self.ext.check_code(x)?;
        Ok((self.frob(x), self.trace(x), self.norm(x)))
    }

    pub fn moduli(&self) -> FieldModuli {
        FieldModuli {
            base_order: self.base.q(),
            base_modulus: self.base.modulus_string(),
            ext_order: self.ext.q(),
            ext_modulus: self.ext.modulus_string(),
        }
    }
}

/// Moduli recorded in reports so coordinates are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldModuli {
    pub base_order: usize,
    pub base_modulus: String,
    pub ext_order: usize,
    pub ext_modulus: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_primitive_relation() {
        let f = build_field(4).unwrap();
        let a = f.primitive();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(a, a), f.add(a, 1));
    }

    #[test]
    fn gf9_multiplicative_group_is_cyclic() {
        let f = build_field(9).unwrap();
        let mut seen: Vec<u8> = (0..8).map(|i| f.pow(f.primitive(), i)).collect();
        seen.sort();
        assert_eq!(seen, (1..9).collect::<Vec<u8>>());
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(build_field(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(build_field(1).unwrap_err(), Error::NotPrimePower(1));
        assert_eq!(build_field(512).unwrap_err(), Error::FieldTooLarge(512));
    }

    #[test]
    fn prime_fields_use_least_primitive_root() {
        assert_eq!(build_field(7).unwrap().primitive(), 3);
        assert_eq!(build_field(2).unwrap().primitive(), 1);
        assert_eq!(build_field(251).unwrap().primitive(), 6);
    }

    #[test]
    fn trace_of_gf4_generator() {
        let e = build_extension(2).unwrap();
        let a = e.ext().primitive();
        assert_eq!(e.trace(a), 1);
    }

    #[test]
    fn frobenius_of_gf9_fixes_prime_field() {
        let e = build_extension(3).unwrap();
        let fixed: Vec<u8> = (0..9u8).filter(|&x| e.frob(x) == x).collect();
        assert_eq!(fixed, vec![0, 1, 2]);
    }

    #[test]
    fn norm_fibres_over_gf4() {
        let e = build_extension(4).unwrap();
        let mut buckets = std::collections::BTreeMap::new();
        for x in 1..16u8 {
            *buckets.entry(e.norm(x)).or_insert(0) += 1;
        }
        assert_eq!(buckets.len(), 3);
        assert!(buckets.values().all(|&c| c == 5));
        assert!(buckets.keys().all(|&n| e.project(n).is_some()));
    }

    #[test]
    fn frob_trace_norm_small_cases() {
        let e = build_extension(3).unwrap();
        assert_eq!(e.frob_trace_norm(0).unwrap(), (0, 0, 0));
        assert_eq!(e.frob_trace_norm(1).unwrap(), (1, 2, 1));
        let a = e.ext().primitive() as usize;
        let (_, _, n) = e.frob_trace_norm(a).unwrap();
        assert_eq!(n, e.ext().pow(a as u8, 4));
        assert_eq!(n, 2);
        assert!(matches!(
            e.frob_trace_norm(9),
            Err(Error::CodeOutOfRange { code: 9, q: 9 })
        ));
    }

    #[test]
    fn modulus_strings() {
        assert_eq!(build_field(4).unwrap().modulus_string(), "x^2+x+1");
        assert_eq!(build_field(9).unwrap().modulus_string(), "x^2+2x+2");
        assert_eq!(build_field(5).unwrap().modulus_string(), "x+3");
    }
}
