//! Table-driven arithmetic in GF(p^m).
//!
//! Elements are small integer codes: the element `c0 + c1 x + ... + c_{m-1} x^{m-1}`
//! has code `c0 + c1 p + ... + c_{m-1} p^{m-1}`. Ascending code order is the
//! enumeration order used for every deterministic choice in the crate.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default cap on the field order for exhaustive enumeration.
pub const DEFAULT_ENUM_BOUND: usize = 81;

/// Largest field order for which arithmetic tables are built.
pub const MAX_TABLE_ORDER: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: u32, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is not a residue mod p")]
    BadCoefficient(u32),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("field of order {0} is too large for table arithmetic")]
    TooLarge(usize),
    #[error("field of order {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("every element is a square in characteristic 2")]
    EvenCharacteristic,
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// A field element code. Arithmetic goes through the owning [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

struct Tables {
    p: u32,
    m: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// GF(p^m) presented as F_p[x] modulo a monic irreducible polynomial.
///
/// Cloning is cheap; all clones share one set of tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p(), self.m(), self.modulus())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over F_p on ascending coefficient vectors.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=db {
            let t = c * b[i] % p;
            r[dr - db + i] = (r[dr - db + i] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut code: usize, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as usize) as u32);
        code /= p as usize;
    }
    out
}

/// Irreducibility by trial division with every monic polynomial of degree at most m/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut g = digits(code, p, d);
            g.push(1);
            if poly_rem(modulus, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    // Lexicographic order on the ascending coefficient list: c0 varies slowest.
    let count = (p as usize).pow(m);
    for n in 0..count {
        let mut c = digits(n, p, m as usize);
        c.reverse();
        c.push(1);
        if is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Builds GF(p^m). Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree m is used.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_TABLE_ORDER as u64 {
            return Err(FieldError::TooLarge(q.min(usize::MAX as u64) as usize));
        }
        let q = q as usize;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 {
                    return Err(FieldError::DegreeMismatch { expected: m, got: c.len().saturating_sub(1) });
                }
                if let Some(&bad) = c.iter().find(|&&x| x >= p) {
                    return Err(FieldError::BadCoefficient(bad));
                }
                if c[m as usize] != 1 {
                    return Err(FieldError::NotMonic);
                }
                if !is_irreducible(c, p) {
                    return Err(FieldError::Reducible(p));
                }
                c.to_vec()
            }
            None => default_modulus(p, m),
        };
        Ok(Field(Arc::new(build_tables(p, m, q, modulus))))
    }

    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1, None)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Number of elements.
    #[inline]
    pub fn q(&self) -> usize {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.add[a.code() * self.0.q + b.code()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.code()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.mul[a.code() * self.0.q + b.code()])
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: Fe, b: Fe, c: Fe) -> Fe {
        self.add(a, self.mul(b, c))
    }

    /// Multiplicative inverse. Panics on zero; see [`Field::try_inv`].
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "division by zero in {:?}", self);
        Fe(self.0.inv[a.code()])
    }

    pub fn try_inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(Fe(self.0.inv[a.code()]))
        }
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p() as i64) as u16)
    }

    /// The element `x` (the class of the indeterminate). In a prime field
    /// with the default modulus `x` this is zero.
    pub fn generator(&self) -> Fe {
        if self.m() == 1 {
            let c0 = self.modulus()[0];
            Fe(((self.p() - c0) % self.p()) as u16)
        } else {
            Fe(self.p() as u16)
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe, FieldError> {
        if coeffs.len() > self.m() as usize {
            return Err(FieldError::Parse(format!("{coeffs:?}")));
        }
        let mut code = 0usize;
        for &c in coeffs.iter().rev() {
            if c >= self.p() {
                return Err(FieldError::Parse(format!("{coeffs:?}")));
            }
            code = code * self.p() as usize + c as usize;
        }
        Ok(Fe(code as u16))
    }

    /// Coordinates in the power basis, length m.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.code(), self.p(), self.m() as usize)
    }

    /// All elements in enumeration order, without any size check.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q() as u16).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q() as u16).map(Fe)
    }

    /// All elements in enumeration order, refusing fields above `bound`.
    pub fn enumerate(&self, bound: usize) -> Result<Vec<Fe>, FieldError> {
        if self.q() > bound {
            return Err(FieldError::BoundExceeded { order: self.q(), bound });
        }
        Ok(self.elements().collect())
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p() as u64)
    }

    /// Inverse of the Frobenius map: `a^(q/p)`.
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.pow(a, (self.q() / self.p() as usize) as u64)
    }

    /// Cube root in characteristic 3, where cubing is bijective.
    pub fn cube_root(&self, a: Fe) -> Fe {
        debug_assert_eq!(self.p(), 3);
        self.pth_root(a)
    }

    /// The enumeration-least root of `T^2 = a`, if any.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if self.p() == 2 {
            return Some(self.pow(a, (self.q() / 2) as u64));
        }
        self.elements().find(|&t| self.mul(t, t) == a)
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.sqrt(a).is_some()
    }

    /// The enumeration-least nonsquare of an odd-characteristic field.
    pub fn nonsquare_rep(&self) -> Result<Fe, FieldError> {
        if self.p() == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        Ok(self.nonzero_elements().find(|&a| !self.is_square(a)).expect("odd fields have nonsquares"))
    }

    /// All roots of `f` in enumeration order.
    pub fn roots(&self, f: &Poly) -> Result<Vec<Fe>, FieldError> {
        if f.is_zero() {
            return Err(FieldError::ZeroPolynomial);
        }
        Ok(self.elements().filter(|&t| f.eval(self, t).is_zero()).collect())
    }

    /// Polynomial notation in `x`, e.g. `2x^2+x+1`. Prime-field elements print as integers.
    pub fn format(&self, a: Fe) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let c = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coef = if ci == 1 && i > 0 { String::new() } else { ci.to_string() };
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(format!("{coef}{mono}"));
        }
        parts.join("+")
    }

    /// Inverse of [`Field::format`].
    pub fn parse(&self, s: &str) -> Result<Fe, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let mut coeffs = vec![0u32; self.m() as usize];
        for term in s.split('+') {
            let (coef, exp) = match term.find('x') {
                None => (term, 0usize),
                Some(pos) => {
                    let rest = &term[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                    };
                    (&term[..pos], exp)
                }
            };
            let coef: u32 = if coef.is_empty() {
                if exp == 0 {
                    return Err(err());
                }
                1
            } else {
                coef.parse().map_err(|_| err())?
            };
            if coef >= self.p() || exp >= self.m() as usize {
                return Err(err());
            }
            coeffs[exp] = (coeffs[exp] + coef) % self.p();
        }
        self.from_coeffs(&coeffs)
    }
}

fn build_tables(p: u32, m: u32, q: usize, modulus: Vec<u32>) -> Tables {
    let md = m as usize;
    let polys: Vec<Vec<u32>> = (0..q).map(|c| digits(c, p, md)).collect();
    let encode = |v: &[u32]| -> u16 {
        let mut code = 0usize;
        for i in (0..md).rev() {
            code = code * p as usize + v.get(i).copied().unwrap_or(0) as usize;
        }
        code as u16
    };
    let mut add = vec![0u16; q * q];
    let mut mul = vec![0u16; q * q];
    let mut prod = vec![0u32; 2 * md];
    for a in 0..q {
        for b in 0..q {
            let s: Vec<u32> = (0..md).map(|i| (polys[a][i] + polys[b][i]) % p).collect();
            add[a * q + b] = encode(&s);
            prod.iter_mut().for_each(|x| *x = 0);
            for i in 0..md {
                for j in 0..md {
                    prod[i + j] = (prod[i + j] + polys[a][i] * polys[b][j]) % p;
                }
            }
            let r = poly_rem(&prod, &modulus, p);
            mul[a * q + b] = encode(&r);
        }
    }
    let neg: Vec<u16> = (0..q).map(|a| encode(&polys[a].iter().map(|&c| (p - c) % p).collect::<Vec<_>>())).collect();
    let mut inv = vec![0u16; q];
    for a in 1..q {
        inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field has inverses") as u16;
    }
    Tables { p, m, q, modulus, add, mul, neg, inv }
}

/// Arithmetic operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

/// A field element carrying its field, for checked mixed-field arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    pub field: Field,
    pub value: Fe,
}

impl Scalar {
    pub fn new(field: &Field, value: Fe) -> Scalar {
        Scalar { field: field.clone(), value }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// Checked arithmetic. Unary operations ignore `b` apart from the field check.
pub fn arith(a: &Scalar, b: &Scalar, op: Op) -> Result<Scalar, FieldError> {
    if a.field != b.field {
        return Err(FieldError::MixedFields);
    }
    let f = &a.field;
    let v = match op {
        Op::Add => f.add(a.value, b.value),
        Op::Sub => f.sub(a.value, b.value),
        Op::Mul => f.mul(a.value, b.value),
        Op::Div => f.mul(a.value, f.try_inv(b.value)?),
        Op::Neg => f.neg(a.value),
        Op::Inv => f.try_inv(a.value)?,
        Op::Pow(e) => f.pow(a.value, e),
    };
    Ok(Scalar::new(f, v))
}

/// Polynomial with coefficients in some [`Field`], ascending, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Fe::ONE] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, f: &Field, t: Fe) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, t), c))
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, f: &Field, c: Fe) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Human-readable form in `T`, with coefficients in the field's notation.
    pub fn format(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            let mono = match i {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{i}"),
            };
            parts.push(match (i, c == Fe::ONE) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{cs}{mono}"),
            });
        }
        parts.join("+")
    }
}
