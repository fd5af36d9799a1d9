//! Exact arithmetic in F_p and its extensions F_{p^n}.
//!
//! An element is stored as its coordinate vector in the polynomial basis
//! `1, t, ..., t^(n-1)` of `F_p[t]/(modulus)`, packed into a single integer
//! `c_0 + c_1 p + ... + c_(n-1) p^(n-1)`. "Smallest" for moduli and elements
//! always means smallest packed value, i.e. coordinates compared from the
//! highest degree down.
//!
//! [`FElem`] does not know its field, so every operation goes through a
//! [`Field`] handle.

mod poly;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Log/antilog tables are built for fields up to this many elements.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic {0} is below 5; only p >= 5 is supported")]
    CharacteristicTooSmall(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{n} does not fit in 32 bits")]
    TooLarge { p: u32, n: usize },
    #[error("modulus is not a monic irreducible polynomial of degree >= 1")]
    Reducible,
    #[error("expected {expected} coordinates in [0, {p}), got {got:?}")]
    BadCoordinates { expected: usize, p: u32, got: Vec<u32> },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("cannot embed F_{{{p}^{from_degree}}} into F_{{{q}^{to_degree}}}")]
    IncompatibleEmbedding { p: u32, from_degree: usize, q: u32, to_degree: usize },
}

/// A field element in packed polynomial-basis coordinates.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FElem(u32);

impl FElem {
    pub const ZERO: FElem = FElem(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer, `c_0 + c_1 p + ...`.
    pub fn packed(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FElem({})", self.0)
    }
}

/// JSON form of a field: `{"p": int, "n": int, "modulus": [int]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub n: usize,
    pub modulus: Vec<u32>,
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    n: usize,
    /// Monic, low degree first, length n + 1.
    modulus: Vec<u32>,
    order: u32,
    generator: FElem,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_characteristic(p: u32) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p < 5 {
        return Err(FieldError::CharacteristicTooSmall(p));
    }
    Ok(())
}

fn field_order(p: u32, n: usize) -> Result<u32, FieldError> {
    let q = (p as u64).checked_pow(n as u32).filter(|&q| q <= u32::MAX as u64);
    q.map(|q| q as u32).ok_or(FieldError::TooLarge { p, n })
}

impl Field {
    /// F_{p^n} with the smallest monic irreducible modulus of degree n.
    pub fn new(p: u32, n: usize) -> Result<Field, FieldError> {
        check_characteristic(p)?;
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = field_order(p, n)?;
        let p_pow_n = q as u64;
        // Scan monic polynomials t^n + (lower part) by packed lower part.
        let modulus = (0..p_pow_n)
            .map(|packed| {
                let mut coeffs = unpack(packed as u32, p, n);
                coeffs.push(1);
                coeffs
            })
            .find(|f| poly::is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree");
        Self::build(p, modulus)
    }

    /// F_p[t]/(modulus); the modulus must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        check_characteristic(p)?;
        if modulus.len() < 2
            || *modulus.last().unwrap() != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::Reducible);
        }
        field_order(p, modulus.len() - 1)?;
        if !poly::is_irreducible(modulus, p) {
            return Err(FieldError::Reducible);
        }
        Self::build(p, modulus.to_vec())
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field, FieldError> {
        let f = Self::with_modulus(d.p, &d.modulus)?;
        if f.n != d.n {
            return Err(FieldError::Reducible);
        }
        Ok(f)
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Field, FieldError> {
        let n = modulus.len() - 1;
        let order = field_order(p, n)?;
        let mut field = Field {
            p,
            n,
            modulus,
            order,
            generator: FElem(0),
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.generator = field.scan_generator();
        if (order as u64) <= TABLE_LIMIT {
            let m = (order - 1) as usize;
            let mut exp = Vec::with_capacity(m);
            let mut log = vec![0u32; order as usize];
            let mut x = field.one();
            for k in 0..m {
                exp.push(x.0);
                log[x.0 as usize] = k as u32;
                x = field.mul_schoolbook(x, field.generator);
            }
            debug_assert_eq!(x, field.one());
            field.exp = exp;
            field.log = log;
        }
        Ok(field)
    }

    fn scan_generator(&self) -> FElem {
        let m = (self.order - 1) as u64;
        let factors = poly::distinct_prime_factors(m);
        (1..self.order)
            .map(FElem)
            .find(|&x| {
                factors
                    .iter()
                    .all(|&q| self.pow_schoolbook(x, m / q) != self.one())
            })
            .expect("the multiplicative group is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Number of elements, p^n.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn zero(&self) -> FElem {
        FElem(0)
    }

    pub fn one(&self) -> FElem {
        FElem(1)
    }

    /// The class of the polynomial variable `t`. In F_p (modulus `x`) this is 0.
    pub fn t(&self) -> FElem {
        if self.n == 1 {
            FElem((self.p - self.modulus[0]) % self.p)
        } else {
            FElem(self.p)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FElem {
        FElem(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FElem, FieldError> {
        if coords.len() != self.n || coords.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoordinates {
                expected: self.n,
                p: self.p,
                got: coords.to_vec(),
            });
        }
        Ok(FElem(pack(coords, self.p)))
    }

    pub fn from_packed(&self, packed: u32) -> Option<FElem> {
        (packed < self.order).then_some(FElem(packed))
    }

    pub fn coords(&self, x: FElem) -> Vec<u32> {
        unpack(x.0, self.p, self.n)
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FElem> {
        (0..self.order).map(FElem)
    }

    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FElem) -> FElem {
        self.sub(FElem(0), a)
    }

    fn digitwise(&self, a: FElem, b: FElem, op: impl Fn(u32, u32, u32) -> u32) -> FElem {
        let p = self.p;
        let (mut a, mut b) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for i in 0..self.n {
            out += op(a % p, b % p, p) * place;
            a /= p;
            b /= p;
            if i + 1 < self.n {
                place *= p;
            }
        }
        FElem(out)
    }

    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        if a.is_zero() || b.is_zero() {
            return FElem(0);
        }
        if self.exp.is_empty() {
            return self.mul_schoolbook(a, b);
        }
        let m = self.exp.len();
        let k = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FElem(self.exp[k % m])
    }

    /// Polynomial multiplication followed by reduction; independent of the
    /// log tables used by [`Field::mul`].
    pub fn mul_schoolbook(&self, a: FElem, b: FElem) -> FElem {
        let prod = poly::mul(&self.coords(a), &self.coords(b), self.p);
        let mut r = poly::rem(&prod, &self.modulus, self.p);
        r.resize(self.n, 0);
        FElem(pack(&r, self.p))
    }

    fn pow_schoolbook(&self, x: FElem, mut e: u64) -> FElem {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, b);
            }
            b = self.mul_schoolbook(b, b);
            e >>= 1;
        }
        acc
    }

    /// Square-and-multiply.
    pub fn pow(&self, x: FElem, mut e: u64) -> FElem {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: FElem) -> Result<FElem, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        if !self.exp.is_empty() {
            let m = self.exp.len();
            let k = self.log[x.0 as usize] as usize;
            return Ok(FElem(self.exp[(m - k) % m]));
        }
        Ok(self.pow(x, self.order as u64 - 2))
    }

    pub fn div(&self, a: FElem, b: FElem) -> Result<FElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// x -> x^p.
    pub fn frobenius(&self, x: FElem) -> FElem {
        self.pow(x, self.p as u64)
    }

    /// x -> x^(p^k).
    pub fn frobenius_pow(&self, x: FElem, k: usize) -> FElem {
        (0..k % self.n).fold(x, |acc, _| self.frobenius(acc))
    }

    /// Smallest element of multiplicative order p^n - 1.
    pub fn mult_generator(&self) -> FElem {
        self.generator
    }

    /// Discrete logarithm base [`Field::mult_generator`], in [0, p^n - 2].
    pub fn log(&self, x: FElem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        if !self.log.is_empty() {
            return Some(self.log[x.0 as usize] as u64);
        }
        let mut y = self.one();
        for k in 0..(self.order as u64 - 1) {
            if y == x {
                return Some(k);
            }
            y = self.mul(y, self.generator);
        }
        None
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: FElem) -> Option<u64> {
        let m = self.order as u64 - 1;
        let k = self.log(x)?;
        Some(m / gcd_u64(m, k))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FElem {
        FElem(rng.gen_range(1..self.order))
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn pack(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn unpack(mut packed: u32, p: u32, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let c = packed % p;
            packed /= p;
            c
        })
        .collect()
}

/// A fixed embedding F_{p^a} -> F_{p^b}, a | b, sending the source variable
/// to the smallest root of the source modulus in the target.
#[derive(Debug, Clone)]
pub struct Embedding {
    source_degree: usize,
    p: u32,
    /// Images of 1, t, ..., t^(a-1).
    basis_images: Vec<FElem>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding, FieldError> {
        if source.p != target.p || !target.n.is_multiple_of(source.n) {
            return Err(FieldError::IncompatibleEmbedding {
                p: source.p,
                from_degree: source.n,
                q: target.p,
                to_degree: target.n,
            });
        }
        let root = target
            .elements()
            .find(|&y| {
                let value = source
                    .modulus
                    .iter()
                    .rev()
                    .fold(target.zero(), |acc, &c| {
                        target.add(target.mul(acc, y), target.from_int(c as i64))
                    });
                value.is_zero()
            })
            .expect("a subfield of matching degree always contains a root");
        let basis_images = (0..source.n as u64).map(|i| target.pow(root, i)).collect();
        Ok(Embedding {
            source_degree: source.n,
            p: source.p,
            basis_images,
        })
    }

    pub fn root(&self) -> FElem {
        self.basis_images.get(1).copied().unwrap_or(FElem(0))
    }

    pub fn apply(&self, target: &Field, x: FElem) -> FElem {
        unpack(x.0, self.p, self.source_degree)
            .into_iter()
            .zip(&self.basis_images)
            .fold(target.zero(), |acc, (c, &img)| {
                target.add(acc, target.mul(target.from_int(c as i64), img))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(Field::new(9, 2).unwrap_err(), FieldError::NotPrime(9));
        assert_eq!(
            Field::new(3, 2).unwrap_err(),
            FieldError::CharacteristicTooSmall(3)
        );
        assert_eq!(
            Field::new(2, 1).unwrap_err(),
            FieldError::CharacteristicTooSmall(2)
        );
        assert_eq!(Field::new(5, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            Field::new(5, 20).unwrap_err(),
            FieldError::TooLarge { .. }
        ));
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 5);
        assert_eq!(f.mult_generator(), f.from_int(2));
    }

    #[test]
    fn f25_basics() {
        let f = Field::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        let t = f.t();
        assert_eq!(f.coords(t), vec![0, 1]);
        assert_eq!(f.mul(t, t), f.from_int(3));
        assert_eq!(f.frobenius(t), f.neg(t));
        assert_eq!(f.inv(f.one()).unwrap(), f.one());
        assert_eq!(f.inv(f.zero()), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn with_modulus_validates() {
        assert_eq!(
            Field::with_modulus(5, &[1, 0, 1]).unwrap_err(),
            FieldError::Reducible
        );
        assert_eq!(
            Field::with_modulus(5, &[2, 0, 3]).unwrap_err(),
            FieldError::Reducible
        );
        let f = Field::with_modulus(5, &[1, 1, 1]).unwrap();
        let t = f.t();
        // t^2 = -t - 1
        assert_eq!(f.mul(t, t), f.sub(f.neg(t), f.one()));
    }

    #[test]
    fn coordinate_validation() {
        let f = Field::new(5, 2).unwrap();
        assert!(f.from_coords(&[1, 2]).is_ok());
        assert!(f.from_coords(&[1, 5]).is_err());
        assert!(f.from_coords(&[1]).is_err());
        assert_eq!(f.from_int(-1), f.from_int(4));
    }

    #[test]
    fn embedding_rejects_degree_mismatch() {
        let f25 = Field::new(5, 2).unwrap();
        let f125 = Field::new(5, 3).unwrap();
        assert!(Embedding::new(&f25, &f125).is_err());
        let f49 = Field::new(7, 2).unwrap();
        assert!(Embedding::new(&f25, &f49).is_err());
    }
}
