//! Extended affine Weyl group elements and their arithmetic.
//!
//! Every element is stored in the canonical form `t^lambda · w · d`: an
//! integer coweight `lambda`, a finite Weyl element `w` (by table index), and
//! a diagram automorphism `d` (by table index).  Multiplication follows
//! `(t^a u c)(t^b v d) = t^{a + (uc)(b)} · (u · c(v)) · cd`.
//!
//! Three independent length computations are provided and must agree:
//!
//! * [`RootSystem::length`] — the closed formula summing `|<lambda, alpha>|`
//!   over positive roots kept positive by `w^{-1}` and `|<lambda, alpha> - 1|`
//!   over those sent negative;
//! * [`RootSystem::length_by_word`] — breadth-first distance to the set of
//!   length-zero elements, using nothing but multiplication and the alcove
//!   test;
//! * [`RootSystem::length_by_hyperplanes`] — the number of affine root
//!   hyperplanes separating the fundamental alcove from its image.

use std::collections::{HashMap, HashSet, VecDeque};
use std::cmp::Ordering;

use thiserror::Error;

use crate::linalg::Rat;
use crate::rootdata::{CoweightVector, RootSystem};

/// An element `t^lambda · w · d` of the extended affine Weyl group.
///
/// `finite` and `twist` index into the tables of the owning [`RootSystem`];
/// elements only make sense relative to the system that created them, and all
/// arithmetic lives on [`RootSystem`].
///
/// The derived `Ord` is structural (for use as a map key); the semantic,
/// length-first order is [`RootSystem::cmp_elements`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExtAffineElement {
    pub translation: CoweightVector,
    pub finite: u16,
    pub twist: u8,
}

/// One affine simple reflection: the fixed hyperplane is `<v, root> = level`.
#[derive(Clone, Debug)]
pub struct AffineSimpleReflection {
    /// 0 for the reflection through the highest-root wall, `1..=rank` for the
    /// finite simple reflections.
    pub index: usize,
    pub element: ExtAffineElement,
    /// Root coordinates of the wall.
    pub root: Vec<i64>,
    pub level: i64,
}

/// A reduced expression `x = s_{i_1} ... s_{i_k} · tail` with the tail of
/// length zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    pub letters: Vec<usize>,
    pub tail: ExtAffineElement,
}

/// Parse failure with the byte position of the offending input.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl RootSystem {
    pub fn identity_elem(&self) -> ExtAffineElement {
        ExtAffineElement {
            translation: vec![0; self.rank],
            finite: 0,
            twist: 0,
        }
    }

    pub fn from_parts(&self, translation: CoweightVector, finite: u16, twist: u8) -> ExtAffineElement {
        assert_eq!(translation.len(), self.rank);
        assert!((finite as usize) < self.weyl_count());
        assert!((twist as usize) < self.twists.len());
        ExtAffineElement {
            translation,
            finite,
            twist,
        }
    }

    pub fn translation_elem(&self, v: &[i64]) -> ExtAffineElement {
        self.from_parts(v.to_vec(), 0, 0)
    }

    /// The finite simple reflection `s_i` (1-based) as a group element.
    pub fn simple_elem(&self, i: usize) -> ExtAffineElement {
        self.from_parts(vec![0; self.rank], self.simple_reflection(i), 0)
    }

    pub fn twist_elem(&self, d: u8) -> ExtAffineElement {
        self.from_parts(vec![0; self.rank], 0, d)
    }

    pub fn mul(&self, a: &ExtAffineElement, b: &ExtAffineElement) -> ExtAffineElement {
        let tb = self.twist(a.twist).apply(&b.translation);
        let moved = self.act(a.finite, &tb);
        let translation: Vec<i64> = a
            .translation
            .iter()
            .zip(&moved)
            .map(|(x, y)| x + y)
            .collect();
        ExtAffineElement {
            translation,
            finite: self.weyl_mul(a.finite, self.twist_weyl(a.twist, b.finite)),
            twist: self.twist_compose(a.twist, b.twist),
        }
    }

    pub fn mul_many(&self, xs: &[&ExtAffineElement]) -> ExtAffineElement {
        xs.iter()
            .fold(self.identity_elem(), |acc, x| self.mul(&acc, x))
    }

    pub fn inv(&self, a: &ExtAffineElement) -> ExtAffineElement {
        let winv = self.weyl_inv(a.finite);
        let dinv = self.twist_inverse(a.twist);
        let back = self.twist(dinv).apply(&self.act(winv, &a.translation));
        ExtAffineElement {
            translation: back.iter().map(|x| -x).collect(),
            finite: self.twist_weyl(dinv, winv),
            twist: dinv,
        }
    }

    /// `g x g^{-1}`.
    pub fn conj(&self, x: &ExtAffineElement, g: &ExtAffineElement) -> ExtAffineElement {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// `s_i x s_i` for an affine simple reflection (0 is the affine letter).
    pub fn conj_by_simple(&self, x: &ExtAffineElement, i: usize) -> ExtAffineElement {
        let s = &self.affine_reflection(i);
        self.mul(&self.mul(s, x), s)
    }

    pub fn power(&self, x: &ExtAffineElement, n: u32) -> ExtAffineElement {
        let mut out = self.identity_elem();
        for _ in 0..n {
            out = self.mul(&out, x);
        }
        out
    }

    /// The affine simple reflection with the given index (0 = affine letter).
    pub fn affine_reflection(&self, i: usize) -> ExtAffineElement {
        if i == 0 {
            self.from_parts(
                self.positive_coroots[self.highest_root].clone(),
                self.highest_reflection(),
                0,
            )
        } else {
            self.simple_elem(i)
        }
    }

    /// All `rank + 1` affine simple reflections with their walls.
    pub fn simple_affine_reflections(&self) -> Vec<AffineSimpleReflection> {
        let mut out = vec![AffineSimpleReflection {
            index: 0,
            element: self.affine_reflection(0),
            root: self.positive_roots[self.highest_root].clone(),
            level: 1,
        }];
        for i in 1..=self.rank {
            let mut root = vec![0; self.rank];
            root[i - 1] = 1;
            out.push(AffineSimpleReflection {
                index: i,
                element: self.simple_elem(i),
                root,
                level: 0,
            });
        }
        out
    }

    /// Image of a rational point under the affine action of `x`.
    pub fn affine_act(&self, x: &ExtAffineElement, p: &[Rat]) -> Vec<Rat> {
        let tp = self.twist(x.twist).apply_rat(p);
        let moved = self.act_rat(x.finite, &tp);
        x.translation
            .iter()
            .zip(&moved)
            .map(|(c, y)| Rat::from_integer(*c) + y)
            .collect()
    }

    /// Length-zero elements fix the fundamental alcove.
    pub fn is_length_zero(&self, x: &ExtAffineElement) -> bool {
        self.affine_act(x, self.alcove_barycenter()) == self.alcove_barycenter()
    }

    /// Closed-form length: sum over positive roots of `|<lambda, alpha>|` when
    /// `w^{-1}(alpha)` stays positive and `|<lambda, alpha> - 1|` when it
    /// turns negative.  The twist contributes nothing.
    pub fn length(&self, x: &ExtAffineElement) -> usize {
        let winv = self.weyl_inv(x.finite);
        let mut total = 0i64;
        for r in 0..self.positive_roots.len() {
            let pairing = self.pair(&x.translation, r);
            let (_, positive) = self.root_image(winv, r);
            total += if positive {
                pairing.abs()
            } else {
                (pairing - 1).abs()
            };
        }
        total as usize
    }

    /// Oracle length: breadth-first distance from `x` to the set of
    /// length-zero elements, multiplying by affine simple reflections on the
    /// left.  Uses only group arithmetic and the alcove test.
    pub fn length_by_word(&self, x: &ExtAffineElement) -> usize {
        if self.is_length_zero(x) {
            return 0;
        }
        let refls: Vec<ExtAffineElement> =
            (0..=self.rank).map(|i| self.affine_reflection(i)).collect();
        let mut seen: HashSet<ExtAffineElement> = HashSet::new();
        let mut queue: VecDeque<(ExtAffineElement, usize)> = VecDeque::new();
        seen.insert(x.clone());
        queue.push_back((x.clone(), 0));
        while let Some((y, d)) = queue.pop_front() {
            for s in &refls {
                let z = self.mul(s, &y);
                if seen.contains(&z) {
                    continue;
                }
                if self.is_length_zero(&z) {
                    return d + 1;
                }
                seen.insert(z.clone());
                queue.push_back((z, d + 1));
            }
        }
        unreachable!("the orbit of a fixed element always reaches length zero");
    }

    /// Geometric length: the number of affine hyperplanes `<., alpha> = k`
    /// separating the fundamental alcove from its image under `x`.
    pub fn length_by_hyperplanes(&self, x: &ExtAffineElement) -> usize {
        let p = self.alcove_barycenter();
        let q = self.affine_act(x, p);
        let mut count = 0i64;
        for r in 0..self.positive_roots.len() {
            let a = self.pair_rat(p, r);
            let b = self.pair_rat(&q, r);
            debug_assert!(!a.is_integer() && !b.is_integer());
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let between = hi.ceil().to_integer() - lo.floor().to_integer() - 1;
            count += between.max(0);
        }
        count as usize
    }

    /// Left descent set: affine letters `i` with `length(s_i x) < length(x)`.
    pub fn descents(&self, x: &ExtAffineElement) -> Vec<usize> {
        let len = self.length(x);
        (0..=self.rank)
            .filter(|&i| self.length(&self.mul(&self.affine_reflection(i), x)) < len)
            .collect()
    }

    /// Reduced word by greedy descent stripping: always remove the smallest
    /// left descent, ending in a length-zero tail.
    pub fn reduced_word(&self, x: &ExtAffineElement) -> ReducedWord {
        let mut letters = Vec::new();
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        while len > 0 {
            let i = *self
                .descents(&cur)
                .first()
                .expect("positive length forces a descent");
            letters.push(i);
            cur = self.mul(&self.affine_reflection(i), &cur);
            len -= 1;
        }
        ReducedWord { letters, tail: cur }
    }

    /// Rebuild an element from a reduced word.
    pub fn from_reduced_word(&self, rw: &ReducedWord) -> ExtAffineElement {
        let mut out = self.identity_elem();
        for &i in &rw.letters {
            out = self.mul(&out, &self.affine_reflection(i));
        }
        self.mul(&out, &rw.tail)
    }

    /// The length-zero elements.  Without twists these are the elements of the
    /// translation-by-coweight extension and biject with `P/Q`; with twists
    /// every product with a diagram automorphism is included.
    pub fn omega_elements(&self, with_twists: bool) -> Vec<ExtAffineElement> {
        let twist_range = if with_twists { self.twists.len() } else { 1 };
        let mut out = Vec::new();
        let side = 2i64;
        let total = (2 * side + 1).pow(self.rank as u32);
        for t in 0..total {
            let mut v = Vec::with_capacity(self.rank);
            let mut rest = t;
            for _ in 0..self.rank {
                v.push(rest % (2 * side + 1) - side);
                rest /= 2 * side + 1;
            }
            for w in 0..self.weyl_count() as u16 {
                for d in 0..twist_range as u8 {
                    let x = self.from_parts(v.clone(), w, d);
                    if self.length(&x) == 0 {
                        out.push(x);
                    }
                }
            }
        }
        let expected = self.connection_index as usize * twist_range;
        assert_eq!(out.len(), expected);
        out.sort_by(|a, b| self.cmp_elements(a, b));
        out
    }

    /// Total order: length, then translation coordinates, then the reduced
    /// word of the finite part, then the twist index.
    pub fn cmp_elements(&self, a: &ExtAffineElement, b: &ExtAffineElement) -> Ordering {
        self.length(a)
            .cmp(&self.length(b))
            .then_with(|| a.translation.cmp(&b.translation))
            .then_with(|| {
                self.weyl_element(a.finite)
                    .word
                    .cmp(&self.weyl_element(b.finite).word)
            })
            .then_with(|| a.twist.cmp(&b.twist))
    }

    /// Every element of length at most `max_len`, breadth-first from the
    /// length-zero set, sorted in the total element order.
    pub fn elements_up_to_length(
        &self,
        max_len: usize,
        with_twists: bool,
    ) -> Vec<ExtAffineElement> {
        let refls: Vec<ExtAffineElement> =
            (0..=self.rank).map(|i| self.affine_reflection(i)).collect();
        let mut dist: HashMap<ExtAffineElement, usize> = HashMap::new();
        let mut queue: VecDeque<ExtAffineElement> = VecDeque::new();
        for w in self.omega_elements(with_twists) {
            dist.insert(w.clone(), 0);
            queue.push_back(w);
        }
        while let Some(y) = queue.pop_front() {
            let d = dist[&y];
            if d == max_len {
                continue;
            }
            for s in &refls {
                let z = self.mul(s, &y);
                if !dist.contains_key(&z) {
                    dist.insert(z.clone(), d + 1);
                    queue.push_back(z);
                }
            }
        }
        let mut out: Vec<ExtAffineElement> = dist.into_keys().collect();
        out.sort_by(|a, b| self.cmp_elements(a, b));
        out
    }

    /// Canonical text form: `t[..]` translation, `s`-letters of the finite
    /// part, trailing twist, joined by `*`; the identity prints as `e`.
    pub fn format_element(&self, x: &ExtAffineElement) -> String {
        let mut terms: Vec<String> = Vec::new();
        if x.translation.iter().any(|&c| c != 0) {
            let coords: Vec<String> = x.translation.iter().map(i64::to_string).collect();
            terms.push(format!("t[{}]", coords.join(",")));
        }
        for &i in &self.weyl_element(x.finite).word {
            terms.push(format!("s{i}"));
        }
        if x.twist != 0 {
            terms.push(format!("d{}", x.twist));
        }
        if terms.is_empty() {
            "e".to_string()
        } else {
            terms.join("*")
        }
    }

    /// Parse the element grammar:
    ///
    /// ```text
    /// element := term ("*" term)*
    /// term    := "t[" int ("," int)* "]"    translation by a coweight
    ///          | "tc[" int ("," int)* "]"   translation by a coroot combination
    ///          | "s" index                  affine simple reflection (0 = affine)
    ///          | "d" index                  diagram automorphism by table index
    ///          | "e"                        identity
    /// ```
    pub fn parse_element(&self, input: &str) -> Result<ExtAffineElement, ParseError> {
        let s = input.trim();
        let offset = input.len() - input.trim_start().len();
        if s.is_empty() {
            return Err(ParseError {
                pos: 0,
                msg: "empty element".into(),
            });
        }
        let mut out = self.identity_elem();
        let mut pos = 0usize;
        let bytes = s.as_bytes();
        loop {
            let (term, next) = self.parse_term(s, bytes, pos, offset)?;
            out = self.mul(&out, &term);
            pos = next;
            if pos == s.len() {
                return Ok(out);
            }
            if bytes[pos] != b'*' {
                return Err(ParseError {
                    pos: offset + pos,
                    msg: format!("expected `*` or end of input, found `{}`", &s[pos..pos + 1]),
                });
            }
            pos += 1;
        }
    }

    fn parse_term(
        &self,
        s: &str,
        bytes: &[u8],
        pos: usize,
        offset: usize,
    ) -> Result<(ExtAffineElement, usize), ParseError> {
        let err = |p: usize, msg: String| ParseError {
            pos: offset + p,
            msg,
        };
        match bytes.get(pos) {
            Some(b'e') => Ok((self.identity_elem(), pos + 1)),
            Some(b's') | Some(b'd') => {
                let kind = bytes[pos];
                let start = pos + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                if end == start {
                    return Err(err(start, "expected an index".into()));
                }
                let idx: usize = s[start..end]
                    .parse()
                    .map_err(|_| err(start, "index out of range".into()))?;
                if kind == b's' {
                    if idx > self.rank {
                        return Err(err(
                            start,
                            format!("reflection index {idx} exceeds rank {}", self.rank),
                        ));
                    }
                    Ok((self.affine_reflection(idx), end))
                } else {
                    if idx >= self.twists.len() {
                        return Err(err(
                            start,
                            format!(
                                "twist index {idx} out of range (this type has {})",
                                self.twists.len()
                            ),
                        ));
                    }
                    Ok((self.twist_elem(idx as u8), end))
                }
            }
            Some(b't') => {
                let coroot_basis = bytes.get(pos + 1) == Some(&b'c');
                let open = if coroot_basis { pos + 2 } else { pos + 1 };
                if bytes.get(open) != Some(&b'[') {
                    return Err(err(open, "expected `[`".into()));
                }
                let close = s[open..]
                    .find(']')
                    .map(|k| open + k)
                    .ok_or_else(|| err(open, "unterminated `[`".into()))?;
                let body = &s[open + 1..close];
                let mut coords = Vec::new();
                let mut at = open + 1;
                for piece in body.split(',') {
                    let v: i64 = piece
                        .trim()
                        .parse()
                        .map_err(|_| err(at, format!("bad integer `{}`", piece.trim())))?;
                    coords.push(v);
                    at += piece.len() + 1;
                }
                if coords.len() != self.rank {
                    return Err(err(
                        open + 1,
                        format!("expected {} coordinates, found {}", self.rank, coords.len()),
                    ));
                }
                let v = if coroot_basis {
                    // lambda = sum_i c_i alpha_i^v, coordinates via Cartan rows.
                    (0..self.rank)
                        .map(|j| (0..self.rank).map(|i| coords[i] * self.cartan[i][j]).sum())
                        .collect()
                } else {
                    coords
                };
                Ok((self.translation_elem(&v), close + 1))
            }
            Some(&c) => Err(err(pos, format!("unexpected `{}`", char::from(c)))),
            None => Err(err(pos, "unexpected end of input".into())),
        }
    }
}
