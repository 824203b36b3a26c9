//! Newton points and straightness.
//!
//! The Newton point of `x = t^lambda w d` is the average of the orbit of
//! `lambda` under the linear part of `x`; if the linear part has order `n`
//! then `x^n` is the pure translation by `n` times the Newton point.  An
//! element is *straight* when its length equals the pairing of the dominant
//! Newton point with the sum of the positive roots, equivalently when powers
//! add lengths.  Straightness data feeds the conjugacy-class machinery: the
//! pair (translation class in the twisted coinvariants of `P/Q`, dominant
//! Newton point) classifies straight classes.

use num::Zero;

use crate::eaw::ExtAffineElement;
use crate::linalg::{self, Rat};
use crate::rootdata::{CoweightVector, RootSystem};

/// Newton point data of one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    /// The Newton point itself.
    pub nu: Vec<Rat>,
    /// Its dominant Weyl chamber representative.
    pub nu_bar: Vec<Rat>,
    /// Minimal finite Weyl element with `y(nu_bar) = nu`.
    pub y: u16,
    /// 1-based simple indices orthogonal to the dominant Newton point.
    pub j_set: Vec<usize>,
    /// Order of the linear part; `x^period` is the pure translation by
    /// `period * nu`.
    pub period: usize,
}

/// An affine subspace `base + span(directions)` with a canonical reduced
/// echelon basis and a base point with zero coordinates at the pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub base: Vec<Rat>,
    pub directions: Vec<Vec<Rat>>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        let diff: Vec<Rat> = p.iter().zip(&self.base).map(|(a, b)| *a - *b).collect();
        linalg::in_span(&self.directions, &diff)
    }
}

/// The conjugation invariant attached to straight classes: the image of the
/// translation part in the twisted coinvariants of `P/Q`, plus the dominant
/// Newton point, relative to a fixed twist coset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StraightInvariant {
    pub twist: u8,
    pub kappa: Vec<i64>,
    pub nu_bar: Vec<Rat>,
}

/// Outcome of the finite-order test.
#[derive(Clone, Debug)]
pub struct FiniteOrderReport {
    pub finite: bool,
    pub order: Option<usize>,
    pub newton_point: Vec<Rat>,
    /// For finite-order elements of minimal length in their class: a proper
    /// set of affine nodes `J`, closed under conjugation by the length-zero
    /// tail, supporting the element.  Non-minimal elements may lack one.
    pub certificate: Option<ParabolicCertificate>,
    /// For infinite-order elements: the power that is a nonzero translation.
    pub translation_power: Option<(usize, CoweightVector)>,
}

#[derive(Clone, Debug)]
pub struct ParabolicCertificate {
    /// Affine node indices (0 = affine letter), a proper subset of all nodes.
    pub j_set: Vec<usize>,
    /// The length-zero tail whose conjugation stabilizes `j_set`.
    pub tail: ExtAffineElement,
}

impl RootSystem {
    /// Matrix of the linear part `w d` acting on coweight coordinates.
    pub fn linear_matrix(&self, x: &ExtAffineElement) -> Vec<Vec<i64>> {
        let w = &self.weyl_element(x.finite).matrix;
        let perm = &self.twist(x.twist).perm;
        // (w * p_d)[i][j] = w[i][perm[j]] since p_d sends e_j to e_perm[j].
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| w[i][perm[j]]).collect())
            .collect()
    }

    pub fn newton_point(&self, x: &ExtAffineElement) -> NewtonData {
        let m = self.linear_matrix(x);
        let identity = linalg::identity_i64(self.rank);
        let mut acc = vec![Rat::zero(); self.rank];
        let mut cur = identity.clone();
        let mut period = 0usize;
        loop {
            let moved = linalg::mat_vec_i64(&cur, &x.translation);
            for (a, b) in acc.iter_mut().zip(&moved) {
                *a += Rat::from_integer(*b);
            }
            cur = linalg::mat_mul_i64(&m, &cur);
            period += 1;
            if cur == identity {
                break;
            }
            assert!(period < 1000, "linear part must have finite order");
        }
        let nu: Vec<Rat> = acc
            .into_iter()
            .map(|a| a / Rat::from_integer(period as i64))
            .collect();
        let (nu_bar, y) = self.dominant_representative(&nu);
        let j_set: Vec<usize> = (0..self.rank)
            .filter(|&i| nu_bar[i].is_zero())
            .map(|i| i + 1)
            .collect();
        NewtonData {
            nu,
            nu_bar,
            y,
            j_set,
            period,
        }
    }

    /// The set of points moved by exactly the Newton point: solutions of
    /// `x(v) = v + nu`.  Always nonempty.
    pub fn fixed_space(&self, x: &ExtAffineElement) -> AffineSubspace {
        let nd = self.newton_point(x);
        let m = self.linear_matrix(x);
        let rows: Vec<Vec<Rat>> = (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| Rat::from_integer(m[i][j] - i64::from(i == j)))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = (0..self.rank)
            .map(|i| nd.nu[i] - Rat::from_integer(x.translation[i]))
            .collect();
        let (mut base, directions) =
            linalg::solve_affine(&rows, &rhs).expect("the moved-by-nu set is never empty");
        // Canonical base point: zero out the pivot coordinate of every
        // direction.
        for dir in &directions {
            let pivot = dir.iter().position(|c| !c.is_zero()).unwrap();
            let f = base[pivot] / dir[pivot];
            for (b, d) in base.iter_mut().zip(dir) {
                *b -= f * *d;
            }
        }
        AffineSubspace { base, directions }
    }

    /// Straight elements have length equal to the pairing of the dominant
    /// Newton point with the sum of all positive roots.
    pub fn is_straight(&self, x: &ExtAffineElement) -> bool {
        let nd = self.newton_point(x);
        Rat::from_integer(self.length(x) as i64) == self.two_rho_pairing(&nd.nu_bar)
    }

    /// Check additivity of lengths along powers up to `m`; equivalent to
    /// [`RootSystem::is_straight`] once `m` reaches the linear part's order.
    pub fn is_straight_by_powers(&self, x: &ExtAffineElement, m: usize) -> bool {
        let base = self.length(x);
        let mut power = self.identity_elem();
        for k in 1..=m {
            power = self.mul(&power, x);
            if self.length(&power) != k * base {
                return false;
            }
        }
        true
    }

    /// The class invariant of a straight element: translation class in the
    /// coinvariants of `P/Q` under the element's twist, plus the dominant
    /// Newton point.
    pub fn straight_invariant(&self, x: &ExtAffineElement) -> StraightInvariant {
        let nd = self.newton_point(x);
        StraightInvariant {
            twist: x.twist,
            kappa: self.pi_coinvariant_class(x.twist, &self.coset_of(&x.translation)),
            nu_bar: nd.nu_bar,
        }
    }

    /// Orbits of the twist `d` on the affine nodes `0..=rank` (node 0 is
    /// always fixed).
    pub fn twist_orbits_on_nodes(&self, d: u8) -> Vec<Vec<usize>> {
        let perm = &self.twist(d).perm;
        let step = |i: usize| -> usize {
            if i == 0 {
                0
            } else {
                perm[i - 1] + 1
            }
        };
        let mut seen = vec![false; self.rank + 1];
        let mut orbits = Vec::new();
        for start in 0..=self.rank {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut cur = step(start);
            while cur != start {
                seen[cur] = true;
                orbit.push(cur);
                cur = step(cur);
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Product of one affine simple reflection per orbit of the twist `d` on
    /// the affine nodes, in the order given, followed by the twist itself.
    /// Every such element is straight.
    pub fn twisted_coxeter(&self, d: u8, picks: &[usize]) -> Result<ExtAffineElement, String> {
        let orbits = self.twist_orbits_on_nodes(d);
        if picks.len() != orbits.len() {
            return Err(format!(
                "need exactly one reflection per twist orbit: {} orbits, {} picks",
                orbits.len(),
                picks.len()
            ));
        }
        let mut used = vec![false; orbits.len()];
        for &p in picks {
            let Some(o) = orbits.iter().position(|o| o.contains(&p)) else {
                return Err(format!("index {p} is not an affine node"));
            };
            if used[o] {
                return Err(format!("orbit of node {p} picked twice"));
            }
            used[o] = true;
        }
        let mut out = self.identity_elem();
        for &p in picks {
            out = self.mul(&out, &self.affine_reflection(p));
        }
        Ok(self.mul(&out, &self.twist_elem(d)))
    }

    /// All twisted Coxeter elements for the twist `d`: every choice of orbit
    /// representatives in every order.
    pub fn all_twisted_coxeter(&self, d: u8) -> Vec<ExtAffineElement> {
        let orbits = self.twist_orbits_on_nodes(d);
        let mut pick_sets = vec![Vec::new()];
        for orbit in &orbits {
            let mut next = Vec::new();
            for set in &pick_sets {
                for &node in orbit {
                    let mut s = set.clone();
                    s.push(node);
                    next.push(s);
                }
            }
            pick_sets = next;
        }
        let mut out = Vec::new();
        for set in &pick_sets {
            for perm in linalg::permutations(set.len()) {
                let picks: Vec<usize> = perm.iter().map(|&i| set[i]).collect();
                let x = self.twisted_coxeter(d, &picks).unwrap();
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// A length-zero element is superbasic when every orbit of its
    /// conjugation action on the affine simple reflections is a union of
    /// connected components of the affine diagram.
    pub fn is_superbasic(&self, x: &ExtAffineElement) -> bool {
        assert_eq!(self.length(x), 0, "superbasic is a length-zero notion");
        let refls: Vec<ExtAffineElement> =
            (0..=self.rank).map(|i| self.affine_reflection(i)).collect();
        let perm: Vec<usize> = refls
            .iter()
            .map(|s| {
                let c = self.conj(s, x);
                refls
                    .iter()
                    .position(|r| *r == c)
                    .expect("length-zero elements permute the affine reflections")
            })
            .collect();
        // Connected components of the affine diagram via commutation.
        let nodes = self.rank + 1;
        let mut comp = (0..nodes).collect::<Vec<usize>>();
        for i in 0..nodes {
            for j in i + 1..nodes {
                let ij = self.mul(&refls[i], &refls[j]);
                let ji = self.mul(&refls[j], &refls[i]);
                if ij != ji {
                    let (a, b) = (comp[i], comp[j]);
                    for c in comp.iter_mut() {
                        if *c == b {
                            *c = a;
                        }
                    }
                }
            }
        }
        // Orbits of the conjugation permutation.
        let mut orbit = vec![usize::MAX; nodes];
        for start in 0..nodes {
            if orbit[start] != usize::MAX {
                continue;
            }
            let mut cur = start;
            loop {
                orbit[cur] = start;
                cur = perm[cur];
                if cur == start {
                    break;
                }
            }
        }
        // Each component must sit inside a single orbit.
        for i in 0..nodes {
            for j in 0..nodes {
                if comp[i] == comp[j] && orbit[i] != orbit[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Superstraight test on the fixed subspace: every positive root
    /// orthogonal to the Newton point must be constant and non-integral on
    /// the fixed space, so that no hyperplane of the orthogonal family meets
    /// it.  For a straight class this is a class invariant; callers ensure
    /// straightness.
    pub fn is_superstraight_class(&self, x: &ExtAffineElement) -> bool {
        let nd = self.newton_point(x);
        let space = self.fixed_space(x);
        for r in 0..self.positive_roots.len() {
            if !self.pair_rat(&nd.nu, r).is_zero() {
                continue;
            }
            let constant = space
                .directions
                .iter()
                .all(|dir| self.pair_rat(dir, r).is_zero());
            if !constant {
                return false;
            }
            if self.pair_rat(&space.base, r).is_integer() {
                return false;
            }
        }
        true
    }

    pub fn is_finite_order(&self, x: &ExtAffineElement) -> FiniteOrderReport {
        let nd = self.newton_point(x);
        if !nd.nu.iter().all(Rat::is_zero) {
            let shift: CoweightVector = nd
                .nu
                .iter()
                .map(|c| {
                    let s = *c * Rat::from_integer(nd.period as i64);
                    debug_assert!(s.is_integer());
                    s.to_integer()
                })
                .collect();
            return FiniteOrderReport {
                finite: false,
                order: None,
                newton_point: nd.nu,
                certificate: None,
                translation_power: Some((nd.period, shift)),
            };
        }
        let mut order = 1usize;
        let mut cur = x.clone();
        while cur != self.identity_elem() {
            cur = self.mul(&cur, x);
            order += 1;
            assert!(order <= 2000, "zero Newton point forces finite order");
        }
        FiniteOrderReport {
            finite: true,
            order: Some(order),
            newton_point: nd.nu,
            certificate: self.parabolic_certificate(x),
            translation_power: None,
        }
    }

    /// Split `x = u * tail` with `tail` length-zero and `u` in the
    /// non-extended affine group, then close the affine support of `u` under
    /// conjugation by `tail`.  Returns the certificate only when the closure
    /// stays proper.
    fn parabolic_certificate(&self, x: &ExtAffineElement) -> Option<ParabolicCertificate> {
        let tail = self
            .omega_elements(true)
            .into_iter()
            .find(|w| {
                let u = self.mul(x, &self.inv(w));
                u.twist == 0 && self.coset_of(&u.translation).iter().all(|&c| c == 0)
            })
            .expect("every element splits over the length-zero subgroup");
        let u = self.mul(x, &self.inv(&tail));
        let rw = self.reduced_word(&u);
        debug_assert_eq!(rw.tail, self.identity_elem());
        // Conjugation permutation of the tail on affine nodes.
        let refls: Vec<ExtAffineElement> =
            (0..=self.rank).map(|i| self.affine_reflection(i)).collect();
        let perm: Vec<usize> = refls
            .iter()
            .map(|s| {
                let c = self.conj(s, &tail);
                refls.iter().position(|r| *r == c).unwrap()
            })
            .collect();
        let mut in_j = vec![false; self.rank + 1];
        for &i in &rw.letters {
            in_j[i] = true;
        }
        loop {
            let extended: Vec<usize> = (0..=self.rank)
                .filter(|&i| in_j[i] && !in_j[perm[i]])
                .map(|i| perm[i])
                .collect();
            if extended.is_empty() {
                break;
            }
            for i in extended {
                in_j[i] = true;
            }
        }
        let j_set: Vec<usize> = (0..=self.rank).filter(|&i| in_j[i]).collect();
        if j_set.len() <= self.rank {
            Some(ParabolicCertificate { j_set, tail })
        } else {
            None
        }
    }
}
