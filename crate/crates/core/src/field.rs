//! Exact arithmetic in prime fields `GF(p)` and binary extension fields `GF(2^k)`.
//!
//! A [`FieldSpec`] is a small `Copy` descriptor. Hot code (polynomials,
//! matrices) stores raw `u64` representatives and calls the arithmetic
//! methods on `FieldSpec` directly; [`FieldElem`] is the checked public wrapper
//! that carries its spec around.
//!
//! Representatives are residues in `[0, p)` for prime fields and bit masks of
//! polynomial coefficients (bit `i` is the coefficient of `g^i`) for
//! `GF(2^k)`, reduced modulo an irreducible polynomial of degree `k`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest supported extension degree for `GF(2^k)`.
pub const MAX_EXTENSION_DEGREE: u32 = 32;

/// Largest target degree for which subfield embeddings are searched.
const MAX_EMBEDDING_SEARCH_DEGREE: u32 = 24;

const GF4_MODULUS: u64 = 0b111;
const GF256_MODULUS: u64 = 0x11b;
const GF65536_MODULUS: u64 = 0x1100b;

/// An exact finite field: `GF(p)` (with `k == 1`) or `GF(2^k)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    k: u32,
    /// Irreducible polynomial over GF(2) including the `x^k` bit; 0 for prime fields.
    modulus: u64,
}

impl FieldSpec {
    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 62 {
            return Err(Error::InvalidField(format!("prime {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec { p, k: 1, modulus: 0 })
    }

    /// `GF(2^k)` defined by `modulus` (bit `k` must be set). `k == 1` yields `GF(2)`.
    pub fn binary(k: u32, modulus: u64) -> Result<Self> {
        if k == 0 || k > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {k} outside 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        if k == 1 {
            return Self::prime(2);
        }
        if modulus >> k != 1 {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:#x} does not have degree {k}"
            )));
        }
        if !gf2_poly_is_irreducible(modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:#x} is reducible over GF(2)"
            )));
        }
        Ok(FieldSpec { p: 2, k, modulus })
    }

    pub fn gf2() -> Self {
        FieldSpec { p: 2, k: 1, modulus: 0 }
    }

    pub fn gf3() -> Self {
        FieldSpec { p: 3, k: 1, modulus: 0 }
    }

    /// `GF(4)` with modulus `x^2 + x + 1`.
    pub fn gf4() -> Self {
        FieldSpec { p: 2, k: 2, modulus: GF4_MODULUS }
    }

    /// `GF(256)` with modulus `x^8 + x^4 + x^3 + x + 1`.
    pub fn gf256() -> Self {
        FieldSpec { p: 2, k: 8, modulus: GF256_MODULUS }
    }

    /// `GF(65536)` with modulus `x^16 + x^12 + x^3 + x + 1`.
    pub fn gf65536() -> Self {
        FieldSpec { p: 2, k: 16, modulus: GF65536_MODULUS }
    }

    /// The default `GF(2^k)`: a preset where one exists, otherwise the
    /// irreducible polynomial of degree `k` with the smallest bit mask.
    pub fn binary_default(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Self::gf2()),
            2 => Ok(Self::gf4()),
            8 => Ok(Self::gf256()),
            16 => Ok(Self::gf65536()),
            _ if k == 0 || k > MAX_EXTENSION_DEGREE => Err(Error::InvalidField(format!(
                "extension degree {k} outside 1..={MAX_EXTENSION_DEGREE}"
            ))),
            _ => {
                let base = 1u64 << k;
                // x^k + ... + 1 always needs the constant term.
                let modulus = (1..base)
                    .step_by(2)
                    .map(|low| base | low)
                    .find(|&m| gf2_poly_is_irreducible(m))
                    .expect("irreducible polynomials exist in every degree");
                Ok(FieldSpec { p: 2, k, modulus })
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        if self.k == 1 {
            self.p
        } else {
            1u64 << self.k
        }
    }

    #[inline]
    pub fn zero(&self) -> u64 {
        0
    }

    #[inline]
    pub fn one(&self) -> u64 {
        1
    }

    /// The generator `g` (the class of `x`) of an extension field.
    pub fn generator(&self) -> Option<u64> {
        (self.k > 1).then_some(2)
    }

    /// Image of an integer under the unique ring map `Z -> F`.
    pub fn from_int(&self, n: i64) -> u64 {
        (n.rem_euclid(self.p as i64)) as u64
    }

    /// Whether `a` is a reduced representative.
    pub fn contains(&self, a: u64) -> bool {
        if self.k == 1 {
            a < self.p
        } else {
            a >> self.k == 0
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            a ^ b
        } else {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 || a == 0 {
            a
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            if self.p == 2 {
                a & b
            } else {
                ((a as u128 * b as u128) % self.p as u128) as u64
            }
        } else {
            gf2k_mul(a, b, self.k, self.modulus)
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// The unique `b` with `b^p == a` (Frobenius is a bijection on finite fields).
    pub fn pth_root(&self, a: u64) -> u64 {
        if self.k == 1 {
            // Frobenius is the identity on GF(p).
            a
        } else {
            (1..self.k).fold(a, |b, _| self.mul(b, b))
        }
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.k == 1 {
            rng.gen_range(0..self.p)
        } else {
            rng.gen::<u64>() & ((1u64 << self.k) - 1)
        }
    }

    /// Uniformly random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        loop {
            let a = self.random(rng);
            if a != 0 {
                return a;
            }
        }
    }

    /// Wrap a raw representative.
    pub fn elem(&self, repr: u64) -> FieldElem {
        debug_assert!(self.contains(repr));
        FieldElem { spec: *self, repr }
    }

    /// Formats a raw representative (decimal residue or hex mask).
    pub fn format_elem(&self, a: u64) -> String {
        if self.k == 1 {
            a.to_string()
        } else {
            format!("{a:#x}")
        }
    }

    /// Parses a raw representative written by [`FieldSpec::format_elem`].
    pub fn parse_elem(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let bad = || Error::Format(format!("bad element `{s}` for field {self}"));
        let value = if self.k == 1 {
            s.parse::<u64>().map_err(|_| bad())?
        } else {
            let digits = s
                .strip_prefix("0x")
                .or_else(|| s.strip_prefix("0X"))
                .unwrap_or(s);
            u64::from_str_radix(digits, 16).map_err(|_| bad())?
        };
        if !self.contains(value) {
            return Err(bad());
        }
        Ok(value)
    }

    /// Returns the canonical embedding of `self` into `into`.
    ///
    /// Prime fields embed into every field of the same characteristic;
    /// `GF(2^a)` embeds into `GF(2^b)` when `a | b`, by sending the generator
    /// to the first root of its modulus found in `GF(2^b)`.
    pub fn embedding(&self, into: &FieldSpec) -> Result<Embedding> {
        let refuse = || Error::NonEmbeddableField {
            from: self.to_string(),
            into: into.to_string(),
        };
        if self == into {
            return Ok(Embedding { from: *self, into: *into, images: None });
        }
        if self.p != into.p {
            return Err(refuse());
        }
        if self.k == 1 {
            return Ok(Embedding { from: *self, into: *into, images: None });
        }
        if !into.k.is_multiple_of(self.k) || into.k > MAX_EMBEDDING_SEARCH_DEGREE {
            return Err(refuse());
        }
        let root = subfield_root(self, into).ok_or_else(refuse)?;
        let mut images = Vec::with_capacity(self.k as usize);
        let mut power = 1;
        for _ in 0..self.k {
            images.push(power);
            power = into.mul(power, root);
        }
        Ok(Embedding { from: *self, into: *into, images: Some(images) })
    }

    /// Whether `self` embeds into `other`.
    pub fn embeds_into(&self, other: &FieldSpec) -> bool {
        self.embedding(other).is_ok()
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.modulus) {
            (1, _) => write!(f, "gf{}", self.p),
            (2, GF4_MODULUS) => write!(f, "gf4"),
            (8, GF256_MODULUS) => write!(f, "gf256"),
            (16, GF65536_MODULUS) => write!(f, "gf65536"),
            (k, m) => write!(f, "gf2^{k}:{m:x}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `gf<p>`, the presets `gf4`/`gf256`/`gf65536`, and
    /// `gf2^<k>:<hex-modulus>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidField(format!("cannot parse field `{s}`"));
        let body = s.trim().strip_prefix("gf").ok_or_else(bad)?;
        if let Some(rest) = body.strip_prefix("2^") {
            let (k, modulus) = match rest.split_once(':') {
                Some((k, m)) => {
                    let k: u32 = k.parse().map_err(|_| bad())?;
                    let m = m.trim_start_matches("0x");
                    (k, u64::from_str_radix(m, 16).map_err(|_| bad())?)
                }
                None => {
                    let k: u32 = rest.parse().map_err(|_| bad())?;
                    return FieldSpec::binary_default(k);
                }
            };
            return FieldSpec::binary(k, modulus);
        }
        match body {
            "4" => Ok(FieldSpec::gf4()),
            "256" => Ok(FieldSpec::gf256()),
            "65536" => Ok(FieldSpec::gf65536()),
            _ => FieldSpec::prime(body.parse().map_err(|_| bad())?),
        }
    }
}

/// The canonical inclusion of one finite field into another.
#[derive(Debug, Clone)]
pub struct Embedding {
    from: FieldSpec,
    into: FieldSpec,
    /// Images of `g^0, ..., g^(k-1)`; `None` means residues map to themselves.
    images: Option<Vec<u64>>,
}

impl Embedding {
    pub fn source(&self) -> FieldSpec {
        self.from
    }

    pub fn target(&self) -> FieldSpec {
        self.into
    }

    pub fn is_identity(&self) -> bool {
        self.images.is_none()
    }

    #[inline]
    pub fn map(&self, a: u64) -> u64 {
        match &self.images {
            None => a,
            Some(images) => images
                .iter()
                .enumerate()
                .filter(|(i, _)| (a >> i) & 1 == 1)
                .fold(0, |acc, (_, img)| acc ^ img),
        }
    }
}

/// An element of a finite field together with its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    spec: FieldSpec,
    repr: u64,
}

impl FieldElem {
    pub fn new(spec: FieldSpec, repr: u64) -> Result<Self> {
        if !spec.contains(repr) {
            return Err(Error::Format(format!("{repr} is not reduced in {spec}")));
        }
        Ok(FieldElem { spec, repr })
    }

    pub fn zero(spec: FieldSpec) -> Self {
        FieldElem { spec, repr: 0 }
    }

    pub fn one(spec: FieldSpec) -> Self {
        FieldElem { spec, repr: 1 }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn repr(&self) -> u64 {
        self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr == 0
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.spec.elem(self.spec.pow(self.repr, e))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.spec
            .inv(self.repr)
            .map(|r| self.spec.elem(r))
            .ok_or(Error::DivisionByZero)
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        ff_arith(*self, *other, ArithOp::Add)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        ff_arith(*self, *other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        ff_arith(*self, *other, ArithOp::Mul)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        ff_arith(*self, *other, ArithOp::Div)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.spec.format_elem(self.repr), self.spec)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.format_elem(self.repr))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic on two elements of the same field.
pub fn ff_arith(a: FieldElem, b: FieldElem, op: ArithOp) -> Result<FieldElem> {
    if a.spec != b.spec {
        return Err(Error::MixedFields(a.spec.to_string(), b.spec.to_string()));
    }
    let f = a.spec;
    let r = match op {
        ArithOp::Add => f.add(a.repr, b.repr),
        ArithOp::Sub => f.sub(a.repr, b.repr),
        ArithOp::Mul => f.mul(a.repr, b.repr),
        ArithOp::Div => f.div(a.repr, b.repr).ok_or(Error::DivisionByZero)?,
    };
    Ok(f.elem(r))
}

/// The unique `p`-th root of `a`.
pub fn ff_pth_root(a: FieldElem) -> FieldElem {
    a.spec.elem(a.spec.pth_root(a.repr))
}

/// A uniformly distributed element, determined by `seed`.
pub fn ff_sample(spec: FieldSpec, seed: u64) -> FieldElem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spec.elem(spec.random(&mut rng))
}

#[inline]
fn gf2k_mul(mut a: u64, mut b: u64, k: u32, modulus: u64) -> u64 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> k) & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn gf2_poly_degree(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

/// Remainder of carry-less polynomial division over GF(2).
pub(crate) fn gf2_poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = gf2_poly_degree(m);
    while a != 0 && gf2_poly_degree(a) >= dm {
        a ^= m << (gf2_poly_degree(a) - dm);
    }
    a
}

fn gf2_poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a polynomial over GF(2) of degree <= 32.
pub(crate) fn gf2_poly_is_irreducible(m: u64) -> bool {
    let k = gf2_poly_degree(m);
    if k < 1 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let k = k as u32;
    // x^(2^i) mod m, for i = 0..=k
    let mut frob = Vec::with_capacity(k as usize + 1);
    let mut x = 2u64;
    frob.push(x);
    for _ in 0..k {
        x = gf2k_mul(x, x, k, m);
        frob.push(x);
    }
    if frob[k as usize] != 2 {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|q| {
        let t = frob[(k as u64 / q) as usize] ^ 2;
        gf2_poly_gcd(m, t) == 1
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

type RootKey = (u64, u32, u64);

fn root_cache() -> &'static Mutex<HashMap<RootKey, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<RootKey, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Smallest root (by representative) of `sub`'s modulus inside `ext`.
fn subfield_root(sub: &FieldSpec, ext: &FieldSpec) -> Option<u64> {
    let key = (sub.modulus, ext.k, ext.modulus);
    if let Some(&r) = root_cache().lock().expect("root cache poisoned").get(&key) {
        return Some(r);
    }
    let coeffs: Vec<u64> = (0..=sub.k).map(|i| (sub.modulus >> i) & 1).collect();
    let root = (2..ext.order()).find(|&c| {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &bit| ext.add(ext.mul(acc, c), bit))
            == 0
    })?;
    root_cache()
        .lock()
        .expect("root cache poisoned")
        .insert(key, root);
    Some(root)
}
