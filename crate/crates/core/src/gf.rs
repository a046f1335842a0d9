//! Exact arithmetic in `F_p` and `F_{p^k} = F_p[t]/(m(t))`.
//!
//! Elements are packed into an [`Elem`] code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_i` is the coefficient of `t^i`. All hot-path arithmetic works on
//! codes against a shared [`FieldSpec`]; [`Scalar`] is the checked value type
//! that carries its field along.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Above this size extension-field addition is done digit by digit instead
/// of through a table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The wire form of a field: `{"p": 3, "k": 2, "modulus": [1, 0, 1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    #[serde(default = "one_usize")]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one_usize() -> usize {
    1
}

pub struct FieldSpec {
    p: u32,
    k: usize,
    /// Ascending coefficients of the monic modulus, length `k + 1`. Empty for prime fields.
    modulus: Vec<u32>,
    q: u32,
    inv: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u16>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, ascending coefficients, used only while
// building a field and for the extended-gcd inverse.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn upoly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let idx = d - dm + i;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn upoly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn upoly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Quotient and remainder.
fn upoly_divrem(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    let mut q = vec![0u32; r.len().saturating_sub(dm).max(1)];
    while r.len() > dm {
        let d = r.len() - 1;
        let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
        q[d - dm] = c;
        for (i, &mi) in m.iter().enumerate() {
            let idx = d - dm + i;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

/// Trial division by every monic polynomial of degree `1..=k/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut c = code;
            let mut divisor = Vec::with_capacity(d + 1);
            for _ in 0..d {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if upoly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Arc<FieldSpec>> {
        Self::build(p, Vec::new())
    }

    /// `modulus` lists ascending coefficients of a monic irreducible polynomial.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Arc<FieldSpec>> {
        if modulus.len() < 2 {
            return Err(Error::Validation("modulus must have degree at least 1".into()));
        }
        if modulus.len() == 2 {
            return Self::prime(p);
        }
        Self::build(p, modulus)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Arc<FieldSpec>> {
        match (&d.modulus, d.k) {
            (None, 1) => Self::prime(d.p),
            (None, k) => Err(Error::Validation(format!(
                "extension degree {k} requires a modulus"
            ))),
            (Some(m), k) => {
                if m.len() != k + 1 {
                    return Err(Error::Validation(format!(
                        "modulus has {} coefficients, expected k + 1 = {}",
                        m.len(),
                        k + 1
                    )));
                }
                Self::extension(d.p, m.clone())
            }
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: if self.k == 1 { None } else { Some(self.modulus.clone()) },
        }
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Arc<FieldSpec>> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        let k = if modulus.is_empty() { 1 } else { modulus.len() - 1 };
        let q = (p as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
        if q > MAX_FIELD_SIZE {
            return Err(Error::Validation(format!(
                "field of size {p}^{k} exceeds the supported maximum {MAX_FIELD_SIZE}"
            )));
        }
        let q = q as u32;
        if k > 1 {
            if modulus.iter().any(|&c| c >= p) {
                return Err(Error::Validation("modulus coefficient out of range".into()));
            }
            if modulus[k] != 1 {
                return Err(Error::Validation("modulus must be monic".into()));
            }
            if !is_irreducible(&modulus, p) {
                return Err(Error::Validation(format!(
                    "modulus {modulus:?} is reducible over F_{p}"
                )));
            }
        }
        let mut field = FieldSpec {
            p,
            k,
            modulus,
            q,
            inv: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
            add_table: Vec::new(),
        };
        field.build_tables()?;
        Ok(Arc::new(field))
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q;
        self.inv = vec![0; q as usize];
        for a in 1..q {
            self.inv[a as usize] = self.inv_by_gcd(Elem(a)).0;
        }
        if self.k == 1 {
            return Ok(());
        }
        // A primitive element: smallest code whose multiplicative order is q - 1.
        let order = q - 1;
        let mut found = None;
        'search: for g in 2..q {
            let mut x = Elem(1);
            let mut powers = Vec::with_capacity(order as usize);
            for i in 0..order {
                powers.push(x.0);
                x = self.mul_slow(x, Elem(g));
                if x == Elem(1) && i + 1 < order {
                    continue 'search;
                }
            }
            found = Some(powers);
            break;
        }
        let exp = found.ok_or_else(|| Error::Internal("no primitive element found".into()))?;
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.add_digits(Elem(a), Elem(b)).0 as u16;
                }
            }
            self.add_table = table;
        }
        Ok(())
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of elements, `p^k`.
    #[inline]
    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of `t`. In a prime field this is `1`.
    pub fn generator(&self) -> Elem {
        if self.k == 1 {
            Elem::ONE
        } else {
            Elem(self.p)
        }
    }

    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.k {
            return Err(Error::Validation(format!(
                "element has {} coefficients, field degree is {}",
                coeffs.len(),
                self.k
            )));
        }
        let mut code = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::Validation(format!("residue {c} not in [0, {})", self.p)));
            }
            code = code * self.p + c;
        }
        Ok(Elem(code))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k);
        let mut c = a.0;
        for _ in 0..self.k {
            out.push(c % self.p);
            c /= self.p;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: Elem) -> bool {
        a.0 < self.p
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 + b.0;
            Elem(if s >= self.p { s - self.p } else { s })
        } else if !self.add_table.is_empty() {
            Elem(self.add_table[(a.0 * self.q + b.0) as usize] as u32)
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            Elem(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else {
            let mut x = a.0;
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.k {
                let d = x % self.p;
                out += ((self.p - d) % self.p) * place;
                place *= self.p;
                x /= self.p;
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.k == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let order = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(if s >= order { s - order } else { s }) as usize])
    }

    /// Schoolbook product reduced by the modulus; reference path for the tables.
    pub fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let prod = upoly_mul(&trim(self.coeffs(a)), &trim(self.coeffs(b)), self.p);
        let r = upoly_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r).expect("reduced residue fits")
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Elem(self.inv[a.0 as usize]))
    }

    /// Inverse by the extended Euclidean algorithm against the modulus.
    pub fn inv_by_gcd(&self, a: Elem) -> Elem {
        debug_assert!(!a.is_zero());
        let p = self.p;
        if self.k == 1 {
            return Elem(pow_mod(a.0, p - 2, p));
        }
        // Invariant: s * a == r (mod m).
        let mut r0 = self.modulus.clone();
        let mut r1 = trim(self.coeffs(a));
        let mut s0: Vec<u32> = Vec::new();
        let mut s1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = upoly_divrem(&r0, &r1, p);
            let s2 = upoly_sub(&s0, &upoly_mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant.
        let c_inv = pow_mod(r0[0], p - 2, p);
        let s: Vec<u32> = s0
            .iter()
            .map(|&x| (x as u64 * c_inv as u64 % p as u64) as u32)
            .collect();
        let s = upoly_rem(&s, &self.modulus, p);
        self.from_coeffs(&s).expect("reduced residue fits")
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^p`, by repeated multiplication.
    pub fn frobenius(&self, a: Elem) -> Elem {
        let mut acc = Elem::ONE;
        for _ in 0..self.p {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Text form: `c` in a prime field, `c0+c1*t+...` otherwise (zero digits omitted).
    pub fn format(&self, a: Elem) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        if a.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs(a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            })
            .collect();
        parts.join("+")
    }
}

/// A field element that remembers its field; arithmetic checks that both
/// operands come from the same field.
#[derive(Clone, Debug)]
pub struct Scalar {
    field: Arc<FieldSpec>,
    elem: Elem,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.elem == other.elem
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn new(field: &Arc<FieldSpec>, elem: Elem) -> Self {
        Scalar {
            field: field.clone(),
            elem,
        }
    }

    pub fn from_coeffs(field: &Arc<FieldSpec>, coeffs: &[u32]) -> Result<Self> {
        Ok(Self::new(field, field.from_coeffs(coeffs)?))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    /// Residues of `1, t, ..., t^{k-1}`; always length `k`.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.elem)
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::usage(format!(
                "mismatched fields {:?} and {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.elem))
    }
}

pub fn field_add(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.check(b)?;
    Ok(Scalar::new(&a.field, a.field.add(a.elem, b.elem)))
}

pub fn field_mul(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.check(b)?;
    Ok(Scalar::new(&a.field, a.field.mul(a.elem, b.elem)))
}

pub fn field_inv(a: &Scalar) -> Result<Scalar> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Scalar::new(&a.field, a.field.inv_by_gcd(a.elem)))
}

pub fn frobenius(a: &Scalar) -> Scalar {
    Scalar::new(&a.field, a.field.frobenius(a.elem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Arc<FieldSpec> {
        FieldSpec::extension(3, vec![1, 0, 1]).unwrap()
    }

    fn s(f: &Arc<FieldSpec>, c: &[u32]) -> Scalar {
        Scalar::from_coeffs(f, c).unwrap()
    }

    #[test]
    fn add_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(field_add(&s(&f3, &[2]), &s(&f3, &[2])).unwrap(), s(&f3, &[1]));
        let f = f9();
        let a = s(&f, &[0, 1]);
        let two_a_plus_1 = s(&f, &[1, 2]);
        assert_eq!(field_add(&a, &two_a_plus_1).unwrap(), s(&f, &[1]));
        assert_eq!(field_add(&a, &s(&f, &[0])).unwrap(), a);
    }

    #[test]
    fn mul_examples() {
        let f = f9();
        let a = s(&f, &[0, 1]);
        assert_eq!(field_mul(&a, &a).unwrap(), s(&f, &[2]));
        assert_eq!(field_mul(&a, &s(&f, &[1])).unwrap(), a);
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(field_mul(&s(&f2, &[1]), &s(&f2, &[1])).unwrap(), s(&f2, &[1]));
    }

    #[test]
    fn inv_examples() {
        let f = f9();
        assert_eq!(field_inv(&s(&f, &[0, 1])).unwrap(), s(&f, &[0, 2]));
        assert_eq!(field_inv(&s(&f, &[1])).unwrap(), s(&f, &[1]));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(field_inv(&s(&f5, &[2])).unwrap(), s(&f5, &[3]));
        assert_eq!(field_inv(&s(&f5, &[0])), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_examples() {
        let f = f9();
        assert_eq!(frobenius(&s(&f, &[0, 1])), s(&f, &[0, 2]));
        assert_eq!(frobenius(&s(&f, &[1])), s(&f, &[1]));
        let f7 = FieldSpec::prime(7).unwrap();
        for c in 0..7 {
            assert_eq!(frobenius(&s(&f7, &[c])), s(&f7, &[c]));
        }
    }

    #[test]
    fn mismatched_fields_rejected() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(matches!(field_add(&s(&f3, &[1]), &s(&f5, &[1])), Err(Error::Usage(_))));
        assert!(matches!(field_mul(&s(&f3, &[1]), &s(&f5, &[1])), Err(Error::Usage(_))));
    }

    #[test]
    fn construction_validates() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        // t^2 + 2 = (t+1)(t+2) over F_3
        assert!(FieldSpec::extension(3, vec![2, 0, 1]).is_err());
        // not monic
        assert!(FieldSpec::extension(3, vec![1, 0, 2]).is_err());
        // 2^17 elements
        assert!(FieldSpec::prime(131071).is_err());
        assert!(FieldSpec::extension(2, vec![1, 1, 0, 0, 1]).is_ok());
        assert!(FieldSpec::from_descriptor(&FieldDescriptor { p: 3, k: 2, modulus: None }).is_err());
        let d = FieldDescriptor { p: 3, k: 2, modulus: Some(vec![1, 0, 1]) };
        assert_eq!(FieldSpec::from_descriptor(&d).unwrap().descriptor(), d);
        assert!(FieldSpec::from_coeffs(&f9(), &[3]).is_err());
    }

    #[test]
    fn scalar_coeffs_have_length_k() {
        let f = f9();
        assert_eq!(s(&f, &[]).coeffs(), vec![0, 0]);
        assert_eq!(s(&f, &[2, 1]).coeffs(), vec![2, 1]);
        assert_eq!(f.format(f.from_coeffs(&[2, 1]).unwrap()), "2+t");
    }

    fn fields() -> Vec<Arc<FieldSpec>> {
        vec![
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
            f9(),
            FieldSpec::extension(2, vec![1, 1, 0, 0, 1]).unwrap(),
            FieldSpec::extension(5, vec![2, 0, 1]).unwrap(),
        ]
    }

    #[test]
    fn ring_axioms_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in fields() {
            for _ in 0..10_000 {
                let a = Elem(rng.gen_range(0..f.size()));
                let b = Elem(rng.gen_range(0..f.size()));
                let c = Elem(rng.gen_range(0..f.size()));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            }
        }
    }

    #[test]
    fn inverses_and_group_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in fields() {
            for _ in 0..2_000 {
                let a = Elem(rng.gen_range(1..f.size()));
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                assert_eq!(f.inv(a).unwrap(), f.inv_by_gcd(a));
                assert_eq!(f.pow(a, f.size() as u64 - 1), Elem::ONE);
                let b = Elem(rng.gen_range(0..f.size()));
                assert_eq!(
                    f.frobenius(f.add(a, b)),
                    f.add(f.frobenius(a), f.frobenius(b))
                );
            }
        }
    }

    #[test]
    fn large_extension_uses_digitwise_addition() {
        // first irreducible monic sextic over F_3 in code order
        let mut found = None;
        for code in 0..729u32 {
            let mut m: Vec<u32> = (0..6).map(|i| (code / 3u32.pow(i)) % 3).collect();
            m.push(1);
            if let Ok(f) = FieldSpec::extension(3, m) {
                found = Some(f);
                break;
            }
        }
        let f = found.expect("an irreducible sextic exists");
        assert_eq!(f.size(), 729);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let a = Elem(rng.gen_range(1..729));
            let b = Elem(rng.gen_range(0..729));
            assert_eq!(f.sub(f.add(a, b), b), a);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
    }
}
