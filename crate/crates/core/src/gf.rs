//! Exact arithmetic in GF(q) and GF(q²) = GF(q)[i].
//!
//! An element `a + b·i` of GF(q²) (with `a`, `b` in GF(q)) is coded as the
//! integer `a + q·b`. A GF(q) element is coded by the base-p digits of its
//! representative polynomial modulo `poly_q`. The subfield GF(q) is therefore
//! exactly the code range `0..q`, and code 0 is zero, code 1 is one.
//!
//! Multiplication goes through exp/log tables over a fixed generator of
//! GF(q²)*; addition goes through a precomputed table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, prime_factors};

/// Largest supported order of GF(q²).
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Full addition tables are kept for GF(q²) up to this order.
const FULL_ADD_TABLE_LIMIT: u32 = 1024;

/// Canonical code of an element of GF(q²).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Operation selector for [`FieldSpec::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise the left operand to a non-negative integer power; the right operand is ignored.
    Pow(u64),
    /// `a ↦ a^q`; the right operand is ignored.
    Frobenius,
}

/// Serializable summary of a field: enough to rebuild it bit-for-bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Monic irreducible polynomial over GF(p) defining GF(q), low degree first.
    pub poly_q: Vec<u32>,
    /// Monic minimal polynomial of `i` over GF(q) as GF(q) codes, low degree first.
    pub poly_q2: Vec<u32>,
    pub h: u32,
    pub i: u32,
    pub c: u32,
    pub generator: u32,
}

/// GF(q) and GF(q²) with the constants `h`, `i`, `c` used by the curve parametrizations.
///
/// Immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    order: u32,
    poly_q: Vec<u32>,
    poly_q2: [u32; 3],
    h: Elem,
    i: Elem,
    c: Elem,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: AddTable,
    neg: Vec<u32>,
    /// Negation in GF(q), used by the Frobenius map for odd q.
    neg_q: Vec<u32>,
}

#[derive(Clone)]
enum AddTable {
    /// `order × order` table over GF(q²).
    Full(Vec<u32>),
    /// `q × q` table over GF(q); GF(q²) addition is done per component.
    Split(Vec<u32>),
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("poly_q", &self.poly_q)
            .field("h", &self.h)
            .field("i", &self.i)
            .field("c", &self.c)
            .finish()
    }
}

/// Arithmetic in GF(q) = GF(p)[x]/(poly_q) on digit codes. Only used while
/// building the tables.
struct Subfield {
    p: u32,
    e: u32,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl Subfield {
    fn new(p: u32, e: u32, poly: &[u32]) -> Self {
        let q = p.pow(e);
        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p);
                let prod = poly_mulmod(&da, &db, poly, p);
                mul[(a * q + b) as usize] = undigits(&prod, p);
            }
        }
        Subfield { p, e, q, add, mul }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = digits(a, self.p, self.e).iter().map(|x| (self.p - x) % self.p).collect();
        undigits(&d, self.p)
    }

    fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Absolute trace to the prime field, as a code.
    fn abs_trace(&self, a: u32) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.e {
            t = self.add(t, x);
            x = self.pow(x, self.p as u64);
        }
        t
    }
}

fn digits(mut code: u32, p: u32, e: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(code % p);
        code /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Product of two polynomials of degree < e reduced modulo the monic `poly` of degree e.
fn poly_mulmod(a: &[u32], b: &[u32], poly: &[u32], p: u32) -> Vec<u32> {
    let e = poly.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut prod, poly, p);
    prod.truncate(e);
    prod.resize(e, 0);
    prod
}

/// Reduces `a` in place modulo the monic `m`.
fn poly_rem(a: &mut [u32], m: &[u32], p: u32) {
    let d = m.len() - 1;
    for k in (d..a.len()).rev() {
        let coef = a[k];
        if coef == 0 {
            continue;
        }
        for j in 0..=d {
            let t = coef * m[j] % p;
            a[k - d + j] = (a[k - d + j] + p - t) % p;
        }
    }
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let e = poly.len() - 1;
    if e <= 1 {
        return true;
    }
    if poly[0] == 0 {
        return false;
    }
    for d in 1..=e / 2 {
        for k in 0..p.pow(d as u32) {
            let mut divisor = digits(k, p, d as u32);
            divisor.push(1);
            let mut r = poly.to_vec();
            poly_rem(&mut r, &divisor, p);
            if r[..d].iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree e over GF(p), ordered by the
/// integer whose base-p digits are its low coefficients.
fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    for k in 0..p.pow(e) {
        let mut poly = digits(k, p, e);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds GF(p^e) and GF(p^(2e)) with deterministic constants.
    pub fn build(p: u32, e: u32) -> Result<FieldSpec> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::UnsupportedSize("extension degree must be >= 1".into()));
        }
        let order = (p as u64).checked_pow(2 * e).filter(|&o| o <= MAX_FIELD_ORDER);
        let Some(order) = order else {
            return Err(Error::UnsupportedSize(format!(
                "{p}^{} exceeds the supported order {MAX_FIELD_ORDER}",
                2 * e
            )));
        };
        let order = order as u32;
        let q = p.pow(e);
        let poly_q = least_irreducible(p, e);
        let sub = Subfield::new(p, e, &poly_q);

        let h = if p == 2 {
            (1..q).find(|&x| sub.abs_trace(x) == 1)
        } else {
            (1..q).find(|&x| sub.pow(x, ((q - 1) / 2) as u64) != 1)
        }
        .expect("GF(q) has a non-square / trace-one element");

        // i² = s + t·i
        let (s, t) = if p == 2 { (h, 1) } else { (h, 0) };
        let poly_q2 = if p == 2 { [h, 1, 1] } else { [sub.neg(h), 0, 1] };

        let slow_mul = |a: u32, b: u32| -> u32 {
            let (a1, a2) = (a % q, a / q);
            let (b1, b2) = (b % q, b / q);
            let a2b2 = sub.mul(a2, b2);
            let re = sub.add(sub.mul(a1, b1), sub.mul(a2b2, s));
            let im = sub.add(sub.add(sub.mul(a1, b2), sub.mul(a2, b1)), sub.mul(a2b2, t));
            re + q * im
        };
        let slow_pow = |a: u32, mut n: u64| -> u32 {
            let mut base = a;
            let mut acc = 1;
            while n > 0 {
                if n & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                n >>= 1;
            }
            acc
        };

        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let generator = (2..order)
            .chain(std::iter::once(1))
            .find(|&g| factors.iter().all(|&r| slow_pow(g, group / r) != 1))
            .expect("GF(q²)* is cyclic");

        let mut exp = vec![0u32; 2 * (order as usize - 1)];
        let mut log = vec![0u32; order as usize];
        let mut x = 1u32;
        for k in 0..(order - 1) {
            exp[k as usize] = x;
            exp[(k + order - 1) as usize] = x;
            log[x as usize] = k;
            x = slow_mul(x, generator);
        }
        debug_assert_eq!(x, 1);

        let add_comp = |a: u32, b: u32| -> u32 {
            sub.add(a % q, b % q) + q * sub.add(a / q, b / q)
        };
        let add = if order <= FULL_ADD_TABLE_LIMIT {
            let mut tab = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    tab[(a * order + b) as usize] = add_comp(a, b);
                }
            }
            AddTable::Full(tab)
        } else {
            AddTable::Split(sub.add.clone())
        };
        let neg_q: Vec<u32> = (0..q).map(|a| sub.neg(a)).collect();
        let neg: Vec<u32> = (0..order).map(|a| neg_q[(a % q) as usize] + q * neg_q[(a / q) as usize]).collect();

        let mut spec = FieldSpec {
            p,
            e,
            q,
            order,
            poly_q,
            poly_q2,
            h: Elem(h),
            i: Elem(q),
            c: Elem::ZERO,
            generator: Elem(generator),
            exp,
            log,
            add,
            neg,
            neg_q,
        };
        let c = (0..order)
            .map(Elem)
            .find(|&c| spec.add(spec.add(spec.frobenius(c), c), Elem::ONE).is_zero())
            .expect("c^q + c + 1 = 0 is solvable in GF(q²)");
        spec.c = c;
        Ok(spec)
    }

    /// Builds the field for a prime power `q`.
    pub fn for_q(q: u32) -> Result<FieldSpec> {
        match crate::numtheory::prime_power(q as u64) {
            Some((p, e)) => FieldSpec::build(p as u32, e),
            None if q >= 2 => Err(Error::NotPrime(q as u64)),
            None => Err(Error::UnsupportedSize(format!("q = {q}"))),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Order of GF(q²).
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn h(&self) -> Elem {
        self.h
    }
    pub fn i(&self) -> Elem {
        self.i
    }
    pub fn c(&self) -> Elem {
        self.c
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }
    pub fn poly_q(&self) -> &[u32] {
        &self.poly_q
    }
    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn summary(&self) -> FieldSummary {
        FieldSummary {
            p: self.p,
            e: self.e,
            q: self.q,
            poly_q: self.poly_q.clone(),
            poly_q2: self.poly_q2.to_vec(),
            h: self.h.0,
            i: self.i.0,
            c: self.c.0,
            generator: self.generator.0,
        }
    }

    /// Iterates over all elements of GF(q²) in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem)
    }

    /// Iterates over GF(q), the codes `0..q`.
    pub fn subfield(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn in_subfield(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    /// Element `a + b·i` from subfield components.
    pub fn compose(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.in_subfield(a) && self.in_subfield(b));
        Elem(a.0 + self.q * b.0)
    }

    /// Subfield components `(a, b)` of `a + b·i`.
    pub fn components(&self, x: Elem) -> (Elem, Elem) {
        (Elem(x.0 % self.q), Elem(x.0 / self.q))
    }

    /// Lift of a prime-field integer.
    pub fn from_int(&self, n: u64) -> Elem {
        Elem((n % self.p as u64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add {
            AddTable::Full(t) => Elem(t[(a.0 * self.order + b.0) as usize]),
            AddTable::Split(t) => {
                let q = self.q;
                let lo = t[((a.0 % q) * q + b.0 % q) as usize];
                let hi = t[((a.0 / q) * q + b.0 / q) as usize];
                Elem(lo + q * hi)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
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
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(!a.is_zero());
        let l = self.log[a.0 as usize];
        Elem(self.exp[((self.order - 1 - l) % (self.order - 1)) as usize])
    }

    pub fn try_inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            Err(Error::DivideByZero)
        } else {
            Ok(self.inv(a))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.try_inv(b)?))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let m = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (n % m)) % m;
        Elem(self.exp[l as usize])
    }

    /// `a^q`.
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        let q = self.q;
        let (lo, hi) = (a.0 % q, a.0 / q);
        if self.p == 2 {
            // i^q = i + 1
            Elem(self.add(Elem(lo), Elem(hi)).0 + q * hi)
        } else {
            // i^q = -i
            Elem(lo + q * self.neg_q[hi as usize])
        }
    }

    /// `a^(q+1)`, which lies in GF(q).
    #[inline]
    pub fn norm(&self, a: Elem) -> Elem {
        self.mul(a, self.frobenius(a))
    }

    /// `a^q + a`, which lies in GF(q).
    #[inline]
    pub fn trace(&self, a: Elem) -> Elem {
        self.add(a, self.frobenius(a))
    }

    /// Discrete logarithm with respect to the generator; `a` must be nonzero.
    pub fn log(&self, a: Elem) -> u32 {
        debug_assert!(!a.is_zero());
        self.log[a.0 as usize]
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.order as u64 - 1)) as usize])
    }

    /// Dispatches a binary operation by selector.
    pub fn arith(&self, a: Elem, b: Elem, op: Op) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            Op::Add => self.add(a, b),
            Op::Sub => self.sub(a, b),
            Op::Mul => self.mul(a, b),
            Op::Div => self.div(a, b)?,
            Op::Pow(n) => self.pow(a, n),
            Op::Frobenius => self.frobenius(a),
        })
    }

    /// Validates a code read from outside.
    pub fn check(&self, a: Elem) -> Result<Elem> {
        if a.0 < self.order {
            Ok(a)
        } else {
            Err(Error::InvalidCoordinates(format!(
                "code {} outside GF({})",
                a.0, self.order
            )))
        }
    }

    /// The set M = { m : m^q + m = 0 } in increasing code order.
    pub fn traceless_set(&self) -> Vec<Elem> {
        self.elements().filter(|&m| self.trace(m).is_zero()).collect()
    }
}
