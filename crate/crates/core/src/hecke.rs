//! The affine Hecke algebra on the standard basis, with class polynomials.
//!
//! Elements are finite sums `sum_x c_x(v) T_x` with Laurent-polynomial
//! coefficients over the integers.  Multiplication follows the two rules
//! `T_x T_s = T_{xs}` when the length grows and
//! `T_x T_s = T_{xs} + (v - v^{-1}) T_x` when it falls; length-zero factors
//! multiply by relabeling.  The class polynomial of a basis element is its
//! image in the cocenter, written over the canonical conjugacy-class keys of
//! the full group: the recursion conjugates along equal-length paths until a
//! length drop appears, and every drop shortens both branches, so it
//! terminates without any external bound.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conjmin::{ClassKey, Classifier, ClassifyError, ConjScope, Schedule};
use crate::eaw::ExtAffineElement;
use crate::rootdata::RootSystem;

/// Integer Laurent polynomial in the parameter `v`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    /// Exponent to coefficient; zero coefficients are never stored.
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        if coeff != 0 {
            p.coeffs.insert(exp, BigInt::from(coeff));
        }
        p
    }

    /// The recurring quantity `v - v^{-1}`.
    pub fn u() -> LaurentPoly {
        let mut p = LaurentPoly::monomial(1, 1);
        p.coeffs.insert(-1, BigInt::from(-1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &other.coeffs {
            let entry = out.coeffs.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.coeffs.remove(&e);
            }
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &other.coeffs {
                let entry = out.coeffs.entry(e1 + e2).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    /// Pairs `(exponent, coefficient)` in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    /// Multiply by the monomial `v^e`.
    pub fn shift(&self, e: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d + e, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Coefficients in the basis `1, u, u^2, ...` with `u = v - v^{-1}`,
    /// lowest power first, or `None` when the polynomial leaves their span.
    pub fn in_u_basis(&self) -> Option<Vec<BigInt>> {
        let mut rest = self.clone();
        let top = match rest.coeffs.keys().next_back() {
            None => return Some(Vec::new()),
            Some(&d) => d,
        };
        if top < 0 {
            return None;
        }
        let mut out = vec![BigInt::zero(); top as usize + 1];
        let u = LaurentPoly::u();
        while let Some(&d) = rest.coeffs.keys().next_back() {
            if d < 0 {
                return None;
            }
            let c = rest.coeff(d);
            // u^d is monic of degree d, so this strictly lowers the degree.
            let mut power = LaurentPoly::one();
            for _ in 0..d {
                power = power.mul(&u);
            }
            let scaled = LaurentPoly {
                coeffs: power
                    .coeffs
                    .iter()
                    .map(|(&e, k)| (e, k * &c))
                    .collect(),
            };
            rest = rest.sub(&scaled);
            out[d as usize] = c;
        }
        Some(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&e, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let body = match e {
                0 => mag.to_string(),
                1 if mag.is_one() => "v".to_string(),
                -1 if mag.is_one() => "v^-1".to_string(),
                1 => format!("{mag}*v"),
                -1 => format!("{mag}*v^-1"),
                _ if mag.is_one() => format!("v^{e}"),
                _ => format!("{mag}*v^{e}"),
            };
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of standard basis elements.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HeckeElement {
    /// Basis element to coefficient; zero coefficients are never stored.
    pub terms: BTreeMap<ExtAffineElement, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> HeckeElement {
        HeckeElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (x, p) in &other.terms {
            out.accumulate(x, p);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        self.add(&other.scale(&LaurentPoly::monomial(-1, 0)))
    }

    pub fn scale(&self, p: &LaurentPoly) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, c) in &self.terms {
            let q = c.mul(p);
            if !q.is_zero() {
                out.terms.insert(x.clone(), q);
            }
        }
        out
    }

    fn accumulate(&mut self, x: &ExtAffineElement, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(x.clone())
            .or_insert_with(LaurentPoly::zero);
        *entry = entry.add(p);
        if entry.is_zero() {
            self.terms.remove(x);
        }
    }
}

/// One class polynomial attached to a conjugacy-class key of the full group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolyEntry {
    pub key: ClassKey,
    pub poly: LaurentPoly,
}

/// The cocenter image of an element, sorted by class key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolyResult {
    pub entries: Vec<ClassPolyEntry>,
    /// The basis element the table was computed from, when there is a single
    /// one (a general linear combination has no canonical source).
    pub source: Option<ExtAffineElement>,
    /// Human-readable tag of the schedule that produced the result.
    pub schedule: String,
}

pub struct HeckeContext<'a> {
    rs: &'a RootSystem,
    cls: &'a Classifier<'a>,
    /// Cocenter images under the deterministic schedule, keyed by element;
    /// values are keyed by the class representative.
    memo: RefCell<HashMap<ExtAffineElement, Rc<BTreeMap<ExtAffineElement, LaurentPoly>>>>,
}

impl<'a> HeckeContext<'a> {
    pub fn new(rs: &'a RootSystem, cls: &'a Classifier<'a>) -> HeckeContext<'a> {
        HeckeContext {
            rs,
            cls,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// The standard basis element `T_x`.
    pub fn basis(&self, x: &ExtAffineElement) -> HeckeElement {
        let mut h = HeckeElement::zero();
        h.terms.insert(x.clone(), LaurentPoly::one());
        h
    }

    /// Right multiplication by one simple factor `T_{s_i}`.
    fn mul_simple(&self, h: &HeckeElement, i: usize) -> HeckeElement {
        let s = self.rs.affine_reflection(i);
        let u = LaurentPoly::u();
        let mut out = HeckeElement::zero();
        for (z, c) in &h.terms {
            let zs = self.rs.mul(z, &s);
            out.accumulate(&zs, c);
            if self.rs.length(&zs) < self.rs.length(z) {
                out.accumulate(z, &c.mul(&u));
            }
        }
        out
    }

    /// Right multiplication by a length-zero basis factor: pure relabeling.
    fn mul_length_zero(&self, h: &HeckeElement, tail: &ExtAffineElement) -> HeckeElement {
        debug_assert_eq!(self.rs.length(tail), 0);
        let mut out = HeckeElement::zero();
        for (z, c) in &h.terms {
            out.accumulate(&self.rs.mul(z, tail), c);
        }
        out
    }

    /// Right multiplication by the basis element `T_y`.
    pub fn mul_basis(&self, h: &HeckeElement, y: &ExtAffineElement) -> HeckeElement {
        let rw = self.rs.reduced_word(y);
        let mut out = h.clone();
        for &i in &rw.letters {
            out = self.mul_simple(&out, i);
        }
        self.mul_length_zero(&out, &rw.tail)
    }

    /// Product of two algebra elements.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (y, c) in &b.terms {
            out = out.add(&self.mul_basis(&a.scale(c), y));
        }
        out
    }

    /// Inverse of a basis element: length-zero factors invert by relabeling
    /// and each simple factor inverts as `T_s - (v - v^{-1})`.
    pub fn inv_basis(&self, x: &ExtAffineElement) -> HeckeElement {
        let rw = self.rs.reduced_word(x);
        let u = LaurentPoly::u();
        let mut out = self.basis(&self.rs.inv(&rw.tail));
        for &i in rw.letters.iter().rev() {
            out = self.mul_simple(&out, i).sub(&out.scale(&u));
        }
        out
    }

    fn base_case(
        &self,
        x: &ExtAffineElement,
    ) -> Result<BTreeMap<ExtAffineElement, LaurentPoly>, ClassifyError> {
        let rep = self.cls.class_data(x, ConjScope::Full)?.key.rep.clone();
        let mut out = BTreeMap::new();
        out.insert(rep, LaurentPoly::one());
        Ok(out)
    }

    fn combine(
        a: &BTreeMap<ExtAffineElement, LaurentPoly>,
        b: &BTreeMap<ExtAffineElement, LaurentPoly>,
    ) -> BTreeMap<ExtAffineElement, LaurentPoly> {
        // u * a + b
        let u = LaurentPoly::u();
        let mut out = b.clone();
        for (rep, p) in a {
            let entry = out
                .entry(rep.clone())
                .or_insert_with(LaurentPoly::zero);
            *entry = entry.add(&p.mul(&u));
            debug_assert!(!entry.is_zero(), "class polynomials never cancel");
        }
        out
    }

    fn det_polys(
        &self,
        x: &ExtAffineElement,
    ) -> Result<Rc<BTreeMap<ExtAffineElement, LaurentPoly>>, ClassifyError> {
        if let Some(hit) = self.memo.borrow().get(x) {
            return Ok(hit.clone());
        }
        let ds = self.cls.drop_search(x)?;
        let val = if ds.drops.is_empty() {
            self.base_case(x)?
        } else {
            let (at, i) = ds.drops[0];
            let z = ds.closure[at].clone();
            let sz = self.rs.mul(&self.rs.affine_reflection(i), &z);
            let szs = self.rs.conj_by_simple(&z, i);
            debug_assert_eq!(self.rs.length(&sz) + 1, self.rs.length(&z));
            debug_assert_eq!(self.rs.length(&szs) + 2, self.rs.length(&z));
            let a = self.det_polys(&sz)?;
            let b = self.det_polys(&szs)?;
            Self::combine(&a, &b)
        };
        let rc = Rc::new(val);
        let mut memo = self.memo.borrow_mut();
        // The cocenter image is constant along equal-length conjugation.
        for z in ds.closure {
            memo.insert(z, rc.clone());
        }
        Ok(rc)
    }

    fn seeded_polys(
        &self,
        x: &ExtAffineElement,
        rng: &mut ChaCha8Rng,
        local: &mut HashMap<ExtAffineElement, Rc<BTreeMap<ExtAffineElement, LaurentPoly>>>,
    ) -> Result<Rc<BTreeMap<ExtAffineElement, LaurentPoly>>, ClassifyError> {
        if let Some(hit) = local.get(x) {
            return Ok(hit.clone());
        }
        let ds = self.cls.drop_search(x)?;
        let val = if ds.drops.is_empty() {
            self.base_case(x)?
        } else {
            let (at, i) = ds.drops[rng.gen_range(0..ds.drops.len())];
            let z = ds.closure[at].clone();
            let sz = self.rs.mul(&self.rs.affine_reflection(i), &z);
            let szs = self.rs.conj_by_simple(&z, i);
            let a = self.seeded_polys(&sz, rng, local)?;
            let b = self.seeded_polys(&szs, rng, local)?;
            Self::combine(&a, &b)
        };
        let rc = Rc::new(val);
        local.insert(x.clone(), rc.clone());
        Ok(rc)
    }

    fn assemble(
        &self,
        raw: &BTreeMap<ExtAffineElement, LaurentPoly>,
        source: Option<&ExtAffineElement>,
        schedule: Schedule,
    ) -> Result<ClassPolyResult, ClassifyError> {
        let mut entries = Vec::new();
        for (rep, poly) in raw {
            if poly.is_zero() {
                continue;
            }
            let key = self.cls.class_data(rep, ConjScope::Full)?.key.clone();
            entries.push(ClassPolyEntry {
                key,
                poly: poly.clone(),
            });
        }
        entries.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(ClassPolyResult {
            entries,
            source: source.cloned(),
            schedule: match schedule {
                Schedule::Deterministic => "deterministic".to_string(),
                Schedule::Seeded(s) => format!("seeded:{s}"),
            },
        })
    }

    /// Class polynomials of the basis element `T_x`: its expression in the
    /// cocenter over class keys of the full group.
    pub fn class_polynomials(
        &self,
        x: &ExtAffineElement,
        schedule: Schedule,
    ) -> Result<ClassPolyResult, ClassifyError> {
        let raw = match schedule {
            Schedule::Deterministic => (*self.det_polys(x)?).clone(),
            Schedule::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut local = HashMap::new();
                (*self.seeded_polys(x, &mut rng, &mut local)?).clone()
            }
        };
        self.assemble(&raw, Some(x), schedule)
    }

    /// Cocenter image of an arbitrary element, by linearity.
    pub fn cocenter_express(
        &self,
        h: &HeckeElement,
        schedule: Schedule,
    ) -> Result<ClassPolyResult, ClassifyError> {
        let mut acc: BTreeMap<ExtAffineElement, LaurentPoly> = BTreeMap::new();
        let mut seeded_state = match schedule {
            Schedule::Seeded(seed) => Some((ChaCha8Rng::seed_from_u64(seed), HashMap::new())),
            Schedule::Deterministic => None,
        };
        for (x, c) in &h.terms {
            let raw = match seeded_state.as_mut() {
                None => self.det_polys(x)?,
                Some((rng, local)) => self.seeded_polys(x, rng, local)?,
            };
            for (rep, p) in raw.iter() {
                let entry = acc.entry(rep.clone()).or_insert_with(LaurentPoly::zero);
                *entry = entry.add(&p.mul(c));
            }
        }
        acc.retain(|_, p| !p.is_zero());
        let single = match h.terms.iter().next() {
            Some((x, c)) if h.terms.len() == 1 && *c == LaurentPoly::one() => Some(x),
            _ => None,
        };
        self.assemble(&acc, single, schedule)
    }

    /// Whether every given seed reproduces the deterministic class
    /// polynomials of `T_x`.
    pub fn path_independence_check(
        &self,
        x: &ExtAffineElement,
        seeds: &[u64],
    ) -> Result<bool, ClassifyError> {
        let base = self.class_polynomials(x, Schedule::Deterministic)?.entries;
        for &seed in seeds {
            let probe = self.class_polynomials(x, Schedule::Seeded(seed))?.entries;
            if probe != base {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
