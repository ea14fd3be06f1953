//! Partial fields `(R, G)`: a commutative ring `R` with a subgroup `G` of its
//! units containing `-1`. A value is *in* the partial field when it lies in
//! `G ∪ {0}`.
//!
//! Supported kinds are the finite fields GF(q) for prime powers `q <= 9`,
//! the regular partial field `(Z, {±1})`, the dyadic partial field
//! `(Z[1/2], {±2^k})`, and finite direct products of these.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Exact element of `Z[1/2]`, stored as `odd * 2^exp` with `odd` odd, or
/// `(0, 0)` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyadic {
    odd: i128,
    exp: i32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { odd: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { odd: 1, exp: 0 };

    pub fn new(mut n: i128, mut exp: i32) -> Self {
        if n == 0 {
            return Dyadic::ZERO;
        }
        let tz = n.trailing_zeros();
        n >>= tz;
        exp += tz as i32;
        Dyadic { odd: n, exp }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(n as i128, 0)
    }

    pub fn odd_part(self) -> i128 {
        self.odd
    }

    pub fn exponent(self) -> i32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.odd == 0
    }

    pub fn is_integer(self) -> bool {
        self.exp >= 0
    }

    fn scaled(n: i128, k: u32) -> i128 {
        assert!(k < 126, "dyadic exponent spread too large");
        n.checked_mul(1i128 << k).expect("dyadic arithmetic overflow")
    }

    pub fn add(self, other: Dyadic) -> Dyadic {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let m = self.exp.min(other.exp);
        let a = Self::scaled(self.odd, (self.exp - m) as u32);
        let b = Self::scaled(other.odd, (other.exp - m) as u32);
        Dyadic::new(a.checked_add(b).expect("dyadic arithmetic overflow"), m)
    }

    pub fn neg(self) -> Dyadic {
        Dyadic { odd: -self.odd, exp: self.exp }
    }

    pub fn mul(self, other: Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::ZERO;
        }
        Dyadic::new(
            self.odd.checked_mul(other.odd).expect("dyadic arithmetic overflow"),
            self.exp + other.exp,
        )
    }

    /// `self / other` when the quotient lies in `Z[1/2]`.
    pub fn div_exact(self, other: Dyadic) -> Option<Dyadic> {
        if other.is_zero() {
            return None;
        }
        if self.odd % other.odd != 0 {
            return None;
        }
        Some(Dyadic::new(self.odd / other.odd, self.exp - other.exp))
    }

    /// Units of `Z[1/2]` are exactly `±2^k`.
    pub fn is_signed_power_of_two(self) -> bool {
        self.odd == 1 || self.odd == -1
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", Self::scaled(self.odd, self.exp as u32))
        } else {
            write!(f, "{}/{}", self.odd, 1i128 << (-self.exp) as u32)
        }
    }
}

/// A finite field GF(q), `q = p^d <= 9`. Element `k` encodes the polynomial
/// whose coefficients are the base-`p` digits of `k`.
#[derive(Debug)]
pub struct GaloisField {
    q: u8,
    p: u8,
    add: Vec<u8>,
    neg: Vec<u8>,
    exp: Vec<u8>,
    log: Vec<u8>,
}

impl GaloisField {
    pub fn new(q: u8) -> Result<Self> {
        let (p, modulus): (u8, &[u8]) = match q {
            2 => (2, &[0, 1]),
            3 => (3, &[0, 1]),
            5 => (5, &[0, 1]),
            7 => (7, &[0, 1]),
            4 => (2, &[1, 1, 1]),
            8 => (2, &[1, 1, 0, 1]),
            9 => (3, &[1, 0, 1]),
            _ => return Err(Error::UnknownField(format!("gf{q}"))),
        };
        let deg = modulus.len() - 1;
        let digits = |mut k: u8| -> Vec<u8> {
            let mut d = vec![0u8; deg];
            for slot in d.iter_mut() {
                *slot = k % p;
                k /= p;
            }
            d
        };
        let undigits = |d: &[u8]| -> u8 { d.iter().rev().fold(0u8, |acc, &c| acc * p + c) };
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>());
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u8> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&s);
                // polynomial product reduced modulo the monic modulus
                let mut prod = vec![0u8; 2 * deg];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for top in (deg..2 * deg).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate().take(deg) {
                        let idx = top - deg + i;
                        prod[idx] = (prod[idx] + (p - (c * m) % p)) % p;
                    }
                    prod[top] = 0;
                }
                mul[a as usize * qs + b as usize] = undigits(&prod[..deg]);
            }
        }
        // log / antilog tables from the least primitive element
        let order = qs - 1;
        let mut exp = vec![0u8; order];
        let mut log = vec![0u8; qs];
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1u8;
                for k in 1..=order {
                    x = mul[x as usize * qs + g as usize];
                    if x == 1 {
                        return k == order;
                    }
                }
                false
            })
            .expect("finite field has a primitive element");
        let mut x = 1u8;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = k as u8;
            x = mul[x as usize * qs + generator as usize];
        }
        Ok(GaloisField { q, p, add, neg, exp, log })
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.exp.len();
        self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % n]
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        let n = self.exp.len();
        Some(self.exp[(n - self.log[a as usize] as usize) % n])
    }
}

/// Descriptor of a partial field.
#[derive(Debug, Clone)]
pub enum PartialField {
    Gf(Arc<GaloisField>),
    Regular,
    Dyadic,
    Product(Vec<PartialField>),
}

impl PartialEq for PartialField {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (PartialField::Gf(a), PartialField::Gf(b)) => a.q == b.q,
            (PartialField::Regular, PartialField::Regular) => true,
            (PartialField::Dyadic, PartialField::Dyadic) => true,
            (PartialField::Product(a), PartialField::Product(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for PartialField {}

/// Exact value in the ambient ring of a partial field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingValue {
    Gf(u8),
    Dyadic(Dyadic),
    Tuple(Vec<RingValue>),
}

impl PartialField {
    pub fn gf(q: u8) -> Result<Self> {
        Ok(PartialField::Gf(Arc::new(GaloisField::new(q)?)))
    }

    /// Parses `gf2`..`gf9`, `regular`, `dyadic`, or `product(a,b,...)`.
    pub fn parse(name: &str) -> Result<Self> {
        let s = name.trim().to_ascii_lowercase();
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner).ok_or_else(|| Error::UnknownField(name.into()))?;
            if parts.len() < 2 {
                return Err(Error::UnknownField(name.into()));
            }
            let comps = parts.iter().map(|p| PartialField::parse(p)).collect::<Result<Vec<_>>>()?;
            return Ok(PartialField::Product(comps));
        }
        match s.as_str() {
            "regular" => Ok(PartialField::Regular),
            "dyadic" => Ok(PartialField::Dyadic),
            _ => {
                let q = s
                    .strip_prefix("gf")
                    .map(|d| d.strip_prefix('(').and_then(|d| d.strip_suffix(')')).unwrap_or(d))
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| Error::UnknownField(name.into()))?;
                PartialField::gf(q).map_err(|_| Error::UnknownField(name.into()))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            PartialField::Gf(f) => format!("gf{}", f.q),
            PartialField::Regular => "regular".into(),
            PartialField::Dyadic => "dyadic".into(),
            PartialField::Product(fs) => {
                let inner: Vec<String> = fs.iter().map(|f| f.name()).collect();
                format!("product({})", inner.join(","))
            }
        }
    }

    pub fn finite_field(&self) -> Option<&GaloisField> {
        match self {
            PartialField::Gf(f) => Some(f),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingValue {
        match self {
            PartialField::Gf(_) => RingValue::Gf(0),
            PartialField::Regular | PartialField::Dyadic => RingValue::Dyadic(Dyadic::ZERO),
            PartialField::Product(fs) => RingValue::Tuple(fs.iter().map(|f| f.zero()).collect()),
        }
    }

    pub fn one(&self) -> RingValue {
        match self {
            PartialField::Gf(_) => RingValue::Gf(1),
            PartialField::Regular | PartialField::Dyadic => RingValue::Dyadic(Dyadic::ONE),
            PartialField::Product(fs) => RingValue::Tuple(fs.iter().map(|f| f.one()).collect()),
        }
    }

    /// Image of an integer under the unique ring map `Z -> R`.
    pub fn from_int(&self, n: i64) -> RingValue {
        match self {
            PartialField::Gf(f) => {
                let p = f.p as i64;
                let r = n.rem_euclid(p) as u8;
                // r * 1 in the prime subfield: the digit encoding of r is r itself
                RingValue::Gf(r)
            }
            PartialField::Regular | PartialField::Dyadic => RingValue::Dyadic(Dyadic::from_int(n)),
            PartialField::Product(fs) => RingValue::Tuple(fs.iter().map(|f| f.from_int(n)).collect()),
        }
    }

    pub fn validate(&self, v: &RingValue) -> Result<()> {
        let ok = match (self, v) {
            (PartialField::Gf(f), RingValue::Gf(x)) => *x < f.q,
            (PartialField::Regular, RingValue::Dyadic(d)) => d.is_integer(),
            (PartialField::Dyadic, RingValue::Dyadic(_)) => true,
            (PartialField::Product(fs), RingValue::Tuple(xs)) => {
                if fs.len() != xs.len() {
                    false
                } else {
                    for (f, x) in fs.iter().zip(xs) {
                        f.validate(x)?;
                    }
                    true
                }
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedValue { field: self.name(), value: format!("{v:?}") })
        }
    }

    /// `v ∈ G ∪ {0}`.
    pub fn contains(&self, v: &RingValue) -> Result<bool> {
        self.validate(v)?;
        Ok(self.contains_unchecked(v))
    }

    fn contains_unchecked(&self, v: &RingValue) -> bool {
        match (self, v) {
            (PartialField::Gf(_), _) => true,
            (PartialField::Regular, RingValue::Dyadic(d)) => {
                d.is_zero() || (d.exp == 0 && d.is_signed_power_of_two())
            }
            (PartialField::Dyadic, RingValue::Dyadic(d)) => d.is_zero() || d.is_signed_power_of_two(),
            (PartialField::Product(fs), RingValue::Tuple(xs)) => {
                // G is the product of the component groups, so a tuple is in
                // the partial field iff it is zero or a unit in every slot.
                let all_zero = fs.iter().zip(xs).all(|(f, x)| f.is_zero(x));
                all_zero
                    || fs
                        .iter()
                        .zip(xs)
                        .all(|(f, x)| !f.is_zero(x) && f.contains_unchecked(x))
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, v: &RingValue) -> bool {
        match v {
            RingValue::Gf(x) => *x == 0,
            RingValue::Dyadic(d) => d.is_zero(),
            RingValue::Tuple(xs) => match self {
                PartialField::Product(fs) => fs.iter().zip(xs).all(|(f, x)| f.is_zero(x)),
                _ => false,
            },
        }
    }

    pub fn add(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (self, a, b) {
            (PartialField::Gf(f), RingValue::Gf(x), RingValue::Gf(y)) => RingValue::Gf(f.add(*x, *y)),
            (_, RingValue::Dyadic(x), RingValue::Dyadic(y)) => RingValue::Dyadic(x.add(*y)),
            (PartialField::Product(fs), RingValue::Tuple(xs), RingValue::Tuple(ys)) => {
                RingValue::Tuple(fs.iter().zip(xs.iter().zip(ys)).map(|(f, (x, y))| f.add(x, y)).collect())
            }
            _ => panic!("ring values do not belong to {}", self.name()),
        }
    }

    pub fn neg(&self, a: &RingValue) -> RingValue {
        match (self, a) {
            (PartialField::Gf(f), RingValue::Gf(x)) => RingValue::Gf(f.neg(*x)),
            (_, RingValue::Dyadic(x)) => RingValue::Dyadic(x.neg()),
            (PartialField::Product(fs), RingValue::Tuple(xs)) => {
                RingValue::Tuple(fs.iter().zip(xs).map(|(f, x)| f.neg(x)).collect())
            }
            _ => panic!("ring value does not belong to {}", self.name()),
        }
    }

    pub fn sub(&self, a: &RingValue, b: &RingValue) -> RingValue {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (self, a, b) {
            (PartialField::Gf(f), RingValue::Gf(x), RingValue::Gf(y)) => RingValue::Gf(f.mul(*x, *y)),
            (_, RingValue::Dyadic(x), RingValue::Dyadic(y)) => RingValue::Dyadic(x.mul(*y)),
            (PartialField::Product(fs), RingValue::Tuple(xs), RingValue::Tuple(ys)) => {
                RingValue::Tuple(fs.iter().zip(xs.iter().zip(ys)).map(|(f, (x, y))| f.mul(x, y)).collect())
            }
            _ => panic!("ring values do not belong to {}", self.name()),
        }
    }

    /// Multiplicative inverse in the ring `R`, if `a` is a unit.
    pub fn inverse(&self, a: &RingValue) -> Option<RingValue> {
        self.div_exact(&self.one(), a)
    }

    /// The quotient `a / b` if it exists in `R`.
    pub fn div_exact(&self, a: &RingValue, b: &RingValue) -> Option<RingValue> {
        match (self, a, b) {
            (PartialField::Gf(f), RingValue::Gf(x), RingValue::Gf(y)) => {
                f.inv(*y).map(|iy| RingValue::Gf(f.mul(*x, iy)))
            }
            (PartialField::Regular, RingValue::Dyadic(x), RingValue::Dyadic(y)) => {
                x.div_exact(*y).filter(|d| d.is_integer()).map(RingValue::Dyadic)
            }
            (PartialField::Dyadic, RingValue::Dyadic(x), RingValue::Dyadic(y)) => {
                x.div_exact(*y).map(RingValue::Dyadic)
            }
            (PartialField::Product(fs), RingValue::Tuple(xs), RingValue::Tuple(ys)) => fs
                .iter()
                .zip(xs.iter().zip(ys))
                .map(|(f, (x, y))| f.div_exact(x, y))
                .collect::<Option<Vec<_>>>()
                .map(RingValue::Tuple),
            _ => None,
        }
    }

    /// Exact determinant over `R` of a square array; the empty matrix has
    /// determinant one.
    pub fn det(&self, m: &[Vec<RingValue>]) -> Result<RingValue> {
        let n = m.len();
        for row in m {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        Ok(self.det_unchecked(m.to_vec()))
    }

    /// Determinant together with its membership in the partial field.
    pub fn det_member(&self, m: &[Vec<RingValue>]) -> Result<(RingValue, bool)> {
        let d = self.det(m)?;
        let member = self.contains_unchecked(&d);
        Ok((d, member))
    }

    pub(crate) fn det_unchecked(&self, mut m: Vec<Vec<RingValue>>) -> RingValue {
        let n = m.len();
        if n == 0 {
            return self.one();
        }
        match self {
            PartialField::Gf(f) => {
                let mut det = 1u8;
                let mut a: Vec<Vec<u8>> = m
                    .iter()
                    .map(|r| r.iter().map(|v| if let RingValue::Gf(x) = v { *x } else { panic!("not a GF value") }).collect())
                    .collect();
                for k in 0..n {
                    let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
                        return RingValue::Gf(0);
                    };
                    if piv != k {
                        a.swap(piv, k);
                        det = f.neg(det);
                    }
                    det = f.mul(det, a[k][k]);
                    let inv = f.inv(a[k][k]).expect("nonzero pivot");
                    for i in k + 1..n {
                        if a[i][k] == 0 {
                            continue;
                        }
                        let factor = f.mul(a[i][k], inv);
                        for j in k..n {
                            let t = f.mul(factor, a[k][j]);
                            a[i][j] = f.add(a[i][j], f.neg(t));
                        }
                    }
                }
                RingValue::Gf(det)
            }
            PartialField::Regular | PartialField::Dyadic => {
                // fraction-free Bareiss elimination; every division is exact
                let mut a: Vec<Vec<Dyadic>> = m
                    .drain(..)
                    .map(|r| r.into_iter().map(|v| if let RingValue::Dyadic(d) = v { d } else { panic!("not a dyadic value") }).collect())
                    .collect();
                let mut negate = false;
                let mut prev = Dyadic::ONE;
                for k in 0..n - 1 {
                    if a[k][k].is_zero() {
                        let Some(piv) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                            return RingValue::Dyadic(Dyadic::ZERO);
                        };
                        a.swap(piv, k);
                        negate = !negate;
                    }
                    for i in k + 1..n {
                        for j in k + 1..n {
                            let num = a[i][j].mul(a[k][k]).add(a[i][k].mul(a[k][j]).neg());
                            a[i][j] = num.div_exact(prev).expect("Bareiss division is exact");
                        }
                    }
                    prev = a[k][k];
                }
                let d = a[n - 1][n - 1];
                RingValue::Dyadic(if negate { d.neg() } else { d })
            }
            PartialField::Product(fs) => {
                let comps = fs
                    .iter()
                    .enumerate()
                    .map(|(c, f)| {
                        let proj: Vec<Vec<RingValue>> = m
                            .iter()
                            .map(|r| {
                                r.iter()
                                    .map(|v| match v {
                                        RingValue::Tuple(xs) => xs[c].clone(),
                                        _ => panic!("not a tuple value"),
                                    })
                                    .collect()
                            })
                            .collect();
                        f.det_unchecked(proj)
                    })
                    .collect();
                RingValue::Tuple(comps)
            }
        }
    }

    /// All elements of a finite field, zero first.
    pub fn elements(&self) -> Option<Vec<RingValue>> {
        self.finite_field().map(|f| (0..f.q).map(RingValue::Gf).collect())
    }

    /// Parses the string encoding of a ring value: an integer for GF(q),
    /// `p` or `p/q` for regular/dyadic, `(v1,v2,...)` for products.
    pub fn parse_value(&self, s: &str) -> Result<RingValue> {
        let bad = || Error::MalformedValue { field: self.name(), value: s.to_string() };
        let t = s.trim();
        let v = match self {
            PartialField::Gf(f) => {
                let n: i64 = t.parse().map_err(|_| bad())?;
                if f.q == f.p {
                    RingValue::Gf(n.rem_euclid(f.p as i64) as u8)
                } else if (0..f.q as i64).contains(&n) {
                    RingValue::Gf(n as u8)
                } else {
                    return Err(bad());
                }
            }
            PartialField::Regular | PartialField::Dyadic => {
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (t, "1"),
                };
                let num: i128 = num.parse().map_err(|_| bad())?;
                let den: i128 = den.parse().map_err(|_| bad())?;
                if den <= 0 || den.count_ones() != 1 {
                    return Err(bad());
                }
                RingValue::Dyadic(Dyadic::new(num, -(den.trailing_zeros() as i32)))
            }
            PartialField::Product(fs) => {
                let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                let parts = split_top_level(inner).ok_or_else(bad)?;
                if parts.len() != fs.len() {
                    return Err(bad());
                }
                RingValue::Tuple(
                    fs.iter().zip(parts).map(|(f, p)| f.parse_value(p)).collect::<Result<Vec<_>>>()?,
                )
            }
        };
        self.validate(&v).map_err(|_| bad())?;
        Ok(v)
    }

    pub fn format_value(&self, v: &RingValue) -> String {
        match v {
            RingValue::Gf(x) => x.to_string(),
            RingValue::Dyadic(d) => d.to_string(),
            RingValue::Tuple(xs) => {
                let fs: Vec<PartialField> = match self {
                    PartialField::Product(fs) => fs.clone(),
                    _ => vec![self.clone(); xs.len()],
                };
                let parts: Vec<String> = fs.iter().zip(xs).map(|(f, x)| f.format_value(x)).collect();
                format!("({})", parts.join(","))
            }
        }
    }
}

impl fmt::Display for PartialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(s[start..].trim());
    Some(parts)
}
