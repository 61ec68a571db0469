//! Exact scalars: rational functions in the declared parameters.

use crate::error::{Error, Result};
use crate::poly::{gcd, Mono, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Ordered list of parameter names. The empty list gives plain rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldSpec {
    names: Vec<String>,
}

impl FieldSpec {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Precondition(format!("duplicate parameter `{n}`")));
            }
        }
        Ok(FieldSpec { names })
    }

    pub fn rationals() -> Self {
        FieldSpec::default()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn param(&self, name: &str) -> Result<Scalar> {
        self.index_of(name)
            .map(Scalar::param)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    /// The smallest field containing both, when one list extends the other.
    pub fn join(&self, other: &FieldSpec) -> Result<FieldSpec> {
        let (short, long) = if self.names.len() <= other.names.len() { (self, other) } else { (other, self) };
        if long.names.starts_with(&short.names) {
            Ok(long.clone())
        } else {
            Err(Error::Precondition(format!(
                "incompatible parameter lists [{}] and [{}]",
                self.names.join(" "),
                other.names.join(" ")
            )))
        }
    }

    pub fn format(&self, s: &Scalar) -> String {
        s.render(&|i| self.names.get(i).cloned().unwrap_or_else(|| format!("t{i}")))
    }
}

/// A reduced fraction of polynomials; the denominator is monic in lex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        Scalar::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn param(i: usize) -> Self {
        Scalar { num: Poly::var(i), den: Poly::one() }
    }

    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let k = BigRational::one() / lc;
            Scalar { num: num.scale(&k), den: den.scale(&k) }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn checked_inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inversion of zero scalar")
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self * &o.checked_inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(Scalar { num: base.num.pow(k), den: base.den.pow(k) })
    }

    fn add_impl(&self, o: &Scalar, negate: bool) -> Scalar {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -o } else { o.clone() };
        }
        let comb = |a: &Poly, b: &Poly| if negate { a.sub(b) } else { a.add(b) };
        if self.den == o.den {
            let num = comb(&self.num, &o.num);
            if self.den.is_one() {
                return Scalar { num, den: self.den.clone() };
            }
            return Scalar::canonical(num, self.den.clone());
        }
        let num = comb(&self.num.mul(&o.den), &o.num.mul(&self.den));
        Scalar::canonical(num, self.den.mul(&o.den))
    }

    fn mul_impl(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: Poly::one() };
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = o.den.div_exact(&g1).unwrap();
        let c = o.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let k = BigRational::one() / lc;
            Scalar { num: num.scale(&k), den: den.scale(&k) }
        }
    }

    /// Rendering with a caller-supplied parameter naming.
    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        let n = render_poly(&self.num, name);
        if self.den.is_one() {
            return n;
        }
        let d = render_poly(&self.den, name);
        let n = if self.num.terms().len() > 1 { format!("({n})") } else { n };
        let single_power = self.den.terms().len() == 1
            && self.den.terms()[0].1.is_one()
            && self.den.terms()[0].0.exps().iter().filter(|&&e| e > 0).count() == 1;
        let d = if single_power { d } else { format!("({d})") };
        format!("{n}/{d}")
    }

    /// True when the rendered form is a single signed product, so it can
    /// be used as a coefficient without parentheses.
    pub fn is_simple(&self) -> bool {
        self.num.terms().len() == 1
    }

    pub fn is_negative_simple(&self) -> bool {
        self.is_simple() && self.num.terms()[0].1.is_negative()
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_mono(m: &Mono, name: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(name(i)),
            _ => parts.push(format!("{}^{}", name(i), e)),
        }
    }
    parts.join("*")
}

fn render_poly(p: &Poly, name: &dyn Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        let body = if m.is_one() {
            render_rational(&a)
        } else if a.is_one() {
            render_mono(m, name)
        } else {
            format!("{}*{}", render_rational(&a), render_mono(m, name))
        };
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|i| format!("t{i}")))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_impl(o, false)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.add_impl(o, true)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_impl(o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}
