//! Arithmetic in GF(2^n).
//!
//! Elements are stored as n-bit coefficient vectors over Z2 (bit `i` holds the
//! coefficient of `x^i`). The canonical element order is ascending coefficient
//! value, so for GF(4) the order is `0, 1, w, w2`. Nonzero elements are labelled
//! as powers of a fixed generator: the class of `x` whenever `x` generates the
//! multiplicative group (true for every default modulus with n >= 2).

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported degree. Elements are stored in a `u16`.
pub const MAX_DEGREE: u32 = 12;

/// Degrees up to this bound run the exhaustive axiom self-test at construction.
const SELF_TEST_MAX_DEGREE: u32 = 4;

/// Structural identity of a field: degree plus modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    degree: u8,
    modulus: u32,
}

impl FieldId {
    pub fn degree(self) -> u32 {
        u32::from(self.degree)
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }
}

/// An element of GF(2^n). Cheap to copy; carries the identity of its field so
/// that elements of different fields are never combined silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u16,
    field: FieldId,
}

impl FieldElement {
    /// Coefficient vector as an integer (bit i = coefficient of x^i).
    pub fn value(self) -> u32 {
        u32::from(self.value)
    }

    /// Position in the canonical enumeration order.
    pub fn index(self) -> usize {
        usize::from(self.value)
    }

    pub fn field(self) -> FieldId {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::ContextMismatch);
        }
        Ok(self + other)
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::ContextMismatch);
        }
        Ok(self * other)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field, self.value).cmp(&(other.field, other.value))
    }
}

/// Addition is coefficient-wise XOR.
///
/// Panics if the operands come from different fields; use
/// [`FieldElement::checked_add`] or [`FieldContext::add`] for the fallible form.
impl Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.field, rhs.field, "adding elements of different fields");
        FieldElement {
            value: self.value ^ rhs.value,
            field: self.field,
        }
    }
}

/// Polynomial product reduced by the modulus (shift-and-add, no tables).
///
/// Panics on mixed fields like `Add`.
impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(
            self.field, rhs.field,
            "multiplying elements of different fields"
        );
        let value = poly_mul_mod(
            self.value(),
            rhs.value(),
            self.field.modulus,
            self.field.degree(),
        );
        FieldElement {
            value: value as u16,
            field: self.field,
        }
    }
}

/// Carry-less product of `a` and `b`, reduced modulo `modulus` (degree `degree`).
pub(crate) fn poly_mul_mod(a: u32, b: u32, modulus: u32, degree: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    let top = 1u32 << degree;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of polynomial division over Z2.
fn poly_rem(mut num: u32, den: u32) -> u32 {
    let dd = poly_degree(den).expect("division by zero polynomial");
    while let Some(nd) = poly_degree(num) {
        if nd < dd {
            break;
        }
        num ^= den << (nd - dd);
    }
    num
}

/// Trial division by every polynomial of degree 1..=degree/2.
pub fn is_irreducible(modulus: u32, degree: u32) -> bool {
    if poly_degree(modulus) != Some(degree) {
        return false;
    }
    if degree == 1 {
        return true;
    }
    for d in 1..=degree / 2 {
        for divisor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(modulus, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Default moduli: the lowest-weight irreducible trinomials for n <= 4,
/// otherwise the smallest primitive polynomial of the requested degree.
pub fn default_modulus(degree: u32) -> Result<u32> {
    match degree {
        0 => Err(Error::ZeroDegree),
        1 => Ok(0b10),
        2 => Ok(0b111),
        3 => Ok(0b1011),
        4 => Ok(0b1_0011),
        d if d > MAX_DEGREE => Err(Error::DegreeTooLarge(d)),
        d => (1u32 << d..1u32 << (d + 1))
            .find(|&m| is_irreducible(m, d) && multiplicative_order(0b10, m, d) == (1 << d) - 1)
            .ok_or(Error::ReducibleModulus {
                degree: d,
                modulus: 0,
            }),
    }
}

fn multiplicative_order(g: u32, modulus: u32, degree: u32) -> u32 {
    let g = poly_rem(g, modulus);
    if g == 0 {
        return 0;
    }
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = poly_mul_mod(x, g, modulus, degree);
        k += 1;
        if k > 1 << degree {
            return 0;
        }
    }
    k
}

#[derive(Debug)]
struct Tables {
    id: FieldId,
    order: usize,
    generator: u16,
    /// exp[k] = generator^k for k in 0..order-1.
    exp: Vec<u16>,
    /// log[v] for v != 0.
    log: Vec<u16>,
    labels: Vec<String>,
}

/// Immutable description of GF(2^n) with precomputed log/antilog tables.
/// Clones share the same tables.
#[derive(Clone, Debug)]
pub struct FieldContext {
    inner: Arc<Tables>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for FieldContext {}

impl FieldContext {
    /// GF(2^n) with the default modulus.
    pub fn new(degree: u32) -> Result<Self> {
        let modulus = default_modulus(degree)?;
        Self::with_modulus(degree, modulus)
    }

    pub fn with_modulus(degree: u32, modulus: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        if !is_irreducible(modulus, degree) {
            return Err(Error::ReducibleModulus { degree, modulus });
        }
        let order = 1usize << degree;
        let id = FieldId {
            degree: degree as u8,
            modulus,
        };
        let group_order = (order - 1) as u32;
        let generator = if multiplicative_order(0b10, modulus, degree) == group_order {
            poly_rem(0b10, modulus)
        } else {
            (1..order as u32)
                .find(|&g| multiplicative_order(g, modulus, degree) == group_order)
                .expect("the multiplicative group of a finite field is cyclic")
        };

        let mut exp = Vec::with_capacity(order - 1);
        let mut log = vec![0u16; order];
        let mut x = 1u32;
        for k in 0..order - 1 {
            exp.push(x as u16);
            log[x as usize] = k as u16;
            x = poly_mul_mod(x, generator, modulus, degree);
        }

        let mut labels = vec![String::new(); order];
        labels[0] = "0".to_string();
        for (k, &v) in exp.iter().enumerate() {
            labels[usize::from(v)] = match k {
                0 => "1".to_string(),
                1 => "w".to_string(),
                k => format!("w{k}"),
            };
        }

        let ctx = FieldContext {
            inner: Arc::new(Tables {
                id,
                order,
                generator: generator as u16,
                exp,
                log,
                labels,
            }),
        };
        if degree <= SELF_TEST_MAX_DEGREE {
            ctx.self_test()?;
        }
        Ok(ctx)
    }

    pub fn id(&self) -> FieldId {
        self.inner.id
    }

    pub fn degree(&self) -> u32 {
        self.inner.id.degree()
    }

    pub fn modulus(&self) -> u32 {
        self.inner.id.modulus
    }

    /// Number of elements N = 2^n.
    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn zero(&self) -> FieldElement {
        self.raw(0)
    }

    pub fn one(&self) -> FieldElement {
        self.raw(1)
    }

    /// The fixed primitive element w.
    pub fn generator(&self) -> FieldElement {
        self.raw(self.inner.generator)
    }

    fn raw(&self, value: u16) -> FieldElement {
        FieldElement {
            value,
            field: self.inner.id,
        }
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if (value as usize) < self.order() {
            Ok(self.raw(value as u16))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                order: self.order(),
            })
        }
    }

    /// Element by position in the canonical order. Panics when out of range.
    pub fn at(&self, index: usize) -> FieldElement {
        assert!(index < self.order(), "element index {index} out of range");
        self.raw(index as u16)
    }

    /// All N elements in canonical order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + '_ {
        (0..self.order()).map(|v| self.raw(v as u16))
    }

    /// generator^k.
    pub fn power(&self, k: usize) -> FieldElement {
        let n = self.inner.exp.len();
        self.raw(self.inner.exp[k % n])
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if a.field == self.inner.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(a + b)
    }

    /// Table-driven product.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero());
        }
        let t = &self.inner;
        let k = (usize::from(t.log[a.index()]) + usize::from(t.log[b.index()])) % t.exp.len();
        Ok(self.raw(t.exp[k]))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let t = &self.inner;
        let n = t.exp.len();
        let k = (n - usize::from(t.log[a.index()])) % n;
        Ok(self.raw(t.exp[k]))
    }

    /// Discrete logarithm base w of a nonzero element.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (a.field == self.inner.id && !a.is_zero()).then(|| usize::from(self.inner.log[a.index()]))
    }

    /// Absolute trace Tr(a) = a + a^2 + a^4 + ... + a^(2^(n-1)), valued in {0, 1}.
    pub fn trace(&self, a: FieldElement) -> u8 {
        let mut acc = a;
        let mut x = a;
        for _ in 1..self.degree() {
            x = x * x;
            acc = acc + x;
        }
        debug_assert!(acc.value <= 1);
        acc.value as u8
    }

    pub fn label(&self, a: FieldElement) -> &str {
        &self.inner.labels[a.index()]
    }

    /// Inverse of [`FieldContext::label`].
    pub fn parse(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        self.inner
            .labels
            .iter()
            .position(|l| l == text)
            .map(|v| self.raw(v as u16))
            .ok_or_else(|| Error::UnknownElement(text.to_string()))
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    /// Exhaustive check of the field axioms.
    pub fn self_test(&self) -> Result<()> {
        let elems: Vec<_> = self.elements().collect();
        let zero = self.zero();
        let one = self.one();
        let fail = |what: &str| Err(Error::FieldSelfTest(what.to_string()));
        for &a in &elems {
            if a + zero != a || self.mul(a, one)? != a {
                return fail("identity");
            }
            if a + a != zero {
                return fail("characteristic 2");
            }
            if !a.is_zero() && self.mul(a, self.inv(a)?)? != one {
                return fail("multiplicative inverse");
            }
            for &b in &elems {
                let ab = self.mul(a, b)?;
                if a + b != b + a || ab != self.mul(b, a)? {
                    return fail("commutativity");
                }
                if ab != a * b {
                    return fail("table and polynomial products disagree");
                }
                for &c in &elems {
                    if (a + b) + c != a + (b + c) {
                        return fail("additive associativity");
                    }
                    if self.mul(ab, c)? != self.mul(a, self.mul(b, c)?)? {
                        return fail("multiplicative associativity");
                    }
                    if self.mul(a, b + c)? != ab + self.mul(a, c)? {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) mod {:#b}", self.order(), self.modulus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> (FieldContext, [FieldElement; 4]) {
        let f = FieldContext::new(2).unwrap();
        let e = [
            f.parse("0").unwrap(),
            f.parse("1").unwrap(),
            f.parse("w").unwrap(),
            f.parse("w2").unwrap(),
        ];
        (f, e)
    }

    #[test]
    fn gf4_relations() {
        let (f, [zero, one, w, w2]) = gf4();
        assert_eq!(one + w, w2);
        assert_eq!(f.mul(w, w2).unwrap(), one);
        assert_eq!(f.mul(w, w).unwrap(), w2);
        for a in f.elements() {
            assert_eq!(a + a, zero);
            assert_eq!(a + zero, a);
            assert_eq!(f.mul(a, one).unwrap(), a);
        }
        assert_eq!(f.inv(w).unwrap(), w2);
        assert_eq!(f.inv(one).unwrap(), one);
    }

    #[test]
    fn gf2_is_xor() {
        let f = FieldContext::new(1).unwrap();
        let one = f.one();
        assert_eq!(one + one, f.zero());
        assert_eq!(f.labels(), &["0", "1"]);
        assert_eq!(f.generator(), one);
    }

    #[test]
    fn enumeration_orders() {
        let f = FieldContext::new(2).unwrap();
        let labels: Vec<_> = f.elements().map(|e| f.label(e).to_string()).collect();
        assert_eq!(labels, ["0", "1", "w", "w2"]);

        let f8 = FieldContext::new(3).unwrap();
        let mut vals: Vec<_> = f8.elements().map(|e| e.value()).collect();
        vals.dedup();
        assert_eq!(vals.len(), 8);
        let labels: Vec<_> = f8.elements().map(|e| f8.label(e).to_string()).collect();
        assert_eq!(labels, ["0", "1", "w", "w3", "w2", "w6", "w4", "w5"]);
    }

    #[test]
    fn zero_degree_and_reducible_moduli_rejected() {
        assert_eq!(FieldContext::new(0), Err(Error::ZeroDegree));
        // x^2 + 1 = (x + 1)^2
        assert!(matches!(
            FieldContext::with_modulus(2, 0b101),
            Err(Error::ReducibleModulus { .. })
        ));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(FieldContext::with_modulus(4, 0b1_0101).is_err());
        assert!(FieldContext::new(MAX_DEGREE + 1).is_err());
    }

    #[test]
    fn non_primitive_modulus_picks_another_generator() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        let f = FieldContext::with_modulus(4, 0b1_1111).unwrap();
        assert_eq!(f.log(f.generator()), Some(1));
        let mut seen: Vec<_> = (0..15).map(|k| f.power(k).value()).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn zero_has_no_inverse() {
        let (f, [zero, ..]) = gf4();
        assert_eq!(f.inv(zero), Err(Error::ZeroInverse));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let f4 = FieldContext::new(2).unwrap();
        let f8 = FieldContext::new(3).unwrap();
        assert_eq!(f4.add(f4.one(), f8.one()), Err(Error::ContextMismatch));
        assert_eq!(f4.mul(f8.one(), f4.one()), Err(Error::ContextMismatch));
        assert_eq!(f4.one().checked_add(f8.one()), Err(Error::ContextMismatch));
        assert_eq!(f4.inv(f8.one()), Err(Error::ContextMismatch));
    }

    #[test]
    fn not_arithmetic_mod_four() {
        // In Z4 the element 2 has no inverse; in GF(4) every nonzero element does.
        assert!((0..4).all(|b| (2 * b) % 4 != 1));
        let f = FieldContext::new(2).unwrap();
        for a in f.elements().filter(|a| !a.is_zero()) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn trace_is_linear_and_balanced() {
        for n in 1..=5 {
            let f = FieldContext::new(n).unwrap();
            let ones = f.elements().filter(|&a| f.trace(a) == 1).count();
            assert_eq!(ones, f.order() / 2);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.trace(a + b), f.trace(a) ^ f.trace(b));
                }
            }
        }
    }

    #[test]
    fn larger_defaults_are_primitive() {
        for n in 5..=MAX_DEGREE {
            let f = FieldContext::new(n).unwrap();
            assert_eq!(f.generator().value(), 2, "n = {n}");
        }
    }

    #[test]
    fn labels_round_trip() {
        for n in 1..=6 {
            let f = FieldContext::new(n).unwrap();
            for a in f.elements() {
                assert_eq!(f.parse(f.label(a)).unwrap(), a);
            }
        }
        let f = FieldContext::new(2).unwrap();
        assert!(matches!(f.parse("w3"), Err(Error::UnknownElement(_))));
    }
}
