//! Conjugation-reduction and class structure.
//!
//! The central object is the [`Classifier`], which owns memoized tables on
//! top of a [`RootSystem`] and provides: reduction of any element to a
//! minimal-length conjugate through length-non-increasing simple
//! conjugations, closures under length-preserving conjugation, an exact
//! conjugacy decision with witness, canonical class keys and class
//! enumeration, and the nice / weakly-elliptic classification of classes.
//!
//! Conjugacy comes in three scopes, by where the conjugating elements live:
//! the plain affine Coxeter group (coroot translations and finite Weyl), its
//! coweight extension, or the full group including diagram twists.  The
//! conjugacy decision is exact in every scope: the finite part of a potential
//! conjugator admits finitely many values, and for each one the translation
//! part is a lattice point solving a linear system, decided by Smith normal
//! form.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::eaw::ExtAffineElement;
use crate::linalg::{self, Rat};
use crate::newton::StraightInvariant;
use crate::rootdata::RootSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("conjugation search exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("{0}")]
    Domain(String),
}

/// Where conjugating elements are taken from.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ConjScope {
    /// The affine Coxeter group: coroot translations and finite Weyl.
    Affine,
    /// The coweight extension: adds the length-zero translation-Weyl parts.
    Extended,
    /// The full group: additionally diagram twists.
    Full,
}

/// Tie-breaking rule for reduction and recursion steps.
#[derive(Copy, Clone, Debug)]
pub enum Schedule {
    /// First drop in breadth-first discovery order, smallest letter first.
    Deterministic,
    /// Uniform choice among all drops of the current closure level.
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct ClassifyConfig {
    /// Bound on any single conjugation closure or element ball.
    pub closure_cap: usize,
    /// Radius used by ball-probe oracles in verification suites.
    pub ball_radius: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            closure_cap: 1_000_000,
            ball_radius: 8,
        }
    }
}

/// A length-non-increasing conjugation path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPath {
    pub start: ExtAffineElement,
    /// Steps `(simple index, length after the step)`; lengths never increase.
    pub steps: Vec<(usize, usize)>,
    pub end: ExtAffineElement,
}

/// Canonical label of one conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassKey {
    pub scope: ConjScope,
    /// Least minimal-length element of the class in the global order.
    pub rep: ExtAffineElement,
    pub min_length: usize,
    pub straight: bool,
    pub invariant: StraightInvariant,
}

impl PartialOrd for ClassKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClassKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // rep determines the remaining fields within one scope
        (self.min_length, &self.rep, self.scope).cmp(&(other.min_length, &other.rep, other.scope))
    }
}

/// Result of the exact conjugacy decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugacy {
    /// With a witness `g` satisfying `g x g^{-1} = y`.
    Yes(ExtAffineElement),
    No,
}

impl Conjugacy {
    pub fn is_yes(&self) -> bool {
        matches!(self, Conjugacy::Yes(_))
    }
}

/// A class key together with the complete set of minimal-length elements.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub key: ClassKey,
    /// All minimal-length elements of the class, in the global order.
    pub min_set: Vec<ExtAffineElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiceEvidence {
    /// Twist-closed support of a reduced finite part (the passing case).
    Support(Vec<usize>),
    /// A length-preserving conjugator not reachable by non-increasing paths.
    FailingConjugator(ExtAffineElement),
    /// A root orthogonal to the Newton point whose hyperplanes move the
    /// fixed space.
    FailingRoot(Vec<i64>),
}

#[derive(Clone, Debug)]
pub struct NiceReport {
    pub is_nice: bool,
    pub method: &'static str,
    pub witness: Option<NiceEvidence>,
}

/// Equal-length conjugation closure with parent pointers and every strict
/// drop found on its boundary.
pub(crate) struct DropSearch {
    pub closure: Vec<ExtAffineElement>,
    parent: Vec<Option<(usize, usize)>>,
    /// `(closure index, letter)` pairs where conjugation strictly drops.
    pub drops: Vec<(usize, usize)>,
}

impl DropSearch {
    /// Letters of the breadth-first path from the base element to entry `idx`.
    fn path_to(&self, mut idx: usize) -> Vec<usize> {
        let mut letters = Vec::new();
        while let Some((p, l)) = self.parent[idx] {
            letters.push(l);
            idx = p;
        }
        letters.reverse();
        letters
    }
}

pub struct Classifier<'a> {
    rs: &'a RootSystem,
    cfg: ClassifyConfig,
    /// `buckets[l]` holds every element of length exactly `l`, both cosets.
    buckets: RefCell<Vec<Rc<Vec<ExtAffineElement>>>>,
    keys: RefCell<HashMap<(ExtAffineElement, ConjScope), Rc<ClassData>>>,
}

impl<'a> Classifier<'a> {
    pub fn new(rs: &'a RootSystem) -> Classifier<'a> {
        Classifier::with_config(rs, ClassifyConfig::default())
    }

    pub fn with_config(rs: &'a RootSystem, cfg: ClassifyConfig) -> Classifier<'a> {
        Classifier {
            rs,
            cfg,
            buckets: RefCell::new(Vec::new()),
            keys: RefCell::new(HashMap::new()),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        self.rs
    }

    pub fn config(&self) -> &ClassifyConfig {
        &self.cfg
    }

    fn all_letters(&self) -> Vec<usize> {
        (0..=self.rs.rank).collect()
    }

    /// Breadth-first closure of `x` under equal-length conjugation by the
    /// given simple letters, collecting every strictly dropping conjugation.
    pub(crate) fn closure_with_letters(
        &self,
        x: &ExtAffineElement,
        letters: &[usize],
    ) -> Result<DropSearch, ClassifyError> {
        let base_len = self.rs.length(x);
        let mut closure = vec![x.clone()];
        let mut index: HashMap<ExtAffineElement, usize> = HashMap::new();
        index.insert(x.clone(), 0);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut drops = Vec::new();
        let mut head = 0usize;
        while head < closure.len() {
            let cur = closure[head].clone();
            for &i in letters {
                let z = self.rs.conj_by_simple(&cur, i);
                let zl = self.rs.length(&z);
                if zl < base_len {
                    drops.push((head, i));
                } else if zl == base_len && !index.contains_key(&z) {
                    if closure.len() >= self.cfg.closure_cap {
                        return Err(ClassifyError::CapExceeded {
                            cap: self.cfg.closure_cap,
                        });
                    }
                    index.insert(z.clone(), closure.len());
                    parent.push(Some((head, i)));
                    closure.push(z);
                }
            }
            head += 1;
        }
        Ok(DropSearch {
            closure,
            parent,
            drops,
        })
    }

    pub(crate) fn drop_search(&self, x: &ExtAffineElement) -> Result<DropSearch, ClassifyError> {
        self.closure_with_letters(x, &self.all_letters())
    }

    /// Conjugate `x` to a minimal-length element of its class through a
    /// length-non-increasing path.  Minimality is certified: the final
    /// element's entire equal-length closure admits no strict drop.
    pub fn reduce_to_min(
        &self,
        x: &ExtAffineElement,
    ) -> Result<(ExtAffineElement, ReductionPath), ClassifyError> {
        self.reduce_impl(x, None)
    }

    pub fn reduce_with_schedule(
        &self,
        x: &ExtAffineElement,
        schedule: Schedule,
    ) -> Result<(ExtAffineElement, ReductionPath), ClassifyError> {
        match schedule {
            Schedule::Deterministic => self.reduce_impl(x, None),
            Schedule::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                self.reduce_impl(x, Some(&mut rng))
            }
        }
    }

    fn reduce_impl(
        &self,
        x: &ExtAffineElement,
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Result<(ExtAffineElement, ReductionPath), ClassifyError> {
        let letters = self.all_letters();
        let mut cur = x.clone();
        let mut steps = Vec::new();
        loop {
            let ds = self.closure_with_letters(&cur, &letters)?;
            if ds.drops.is_empty() {
                return Ok((
                    cur.clone(),
                    ReductionPath {
                        start: x.clone(),
                        steps,
                        end: cur,
                    },
                ));
            }
            let pick = match rng.as_deref_mut() {
                Some(r) => r.gen_range(0..ds.drops.len()),
                None => 0,
            };
            let (at, letter) = ds.drops[pick];
            let level = self.rs.length(&cur);
            for l in ds.path_to(at) {
                steps.push((l, level));
            }
            let dropped = self.rs.conj_by_simple(&ds.closure[at], letter);
            steps.push((letter, self.rs.length(&dropped)));
            cur = dropped;
        }
    }

    /// Closure under length-preserving simple conjugation, in the global
    /// order.  On a minimal-length element this is its mutual-reachability
    /// class.
    pub fn approx_closure(
        &self,
        m: &ExtAffineElement,
    ) -> Result<Vec<ExtAffineElement>, ClassifyError> {
        let ds = self.drop_search(m)?;
        let mut out = ds.closure;
        out.sort_by(|a, b| self.rs.cmp_elements(a, b));
        Ok(out)
    }

    /// Exact conjugacy decision.  Every conjugator decomposes as a
    /// translation times a finite part; the finitely many finite parts are
    /// enumerated and the translation is solved for over the scope's lattice.
    pub fn are_conjugate(
        &self,
        x: &ExtAffineElement,
        y: &ExtAffineElement,
        scope: ConjScope,
    ) -> Conjugacy {
        let rs = self.rs;
        let n = rs.rank;
        let twists: Vec<u8> = match scope {
            ConjScope::Affine | ConjScope::Extended => vec![0],
            ConjScope::Full => (0..rs.twists.len() as u8).collect(),
        };
        // Columns of `gen` span the allowed translation lattice.
        let gen: Vec<Vec<i64>> = match scope {
            // coroot lattice: column i is `alpha_i^vee`, i.e. Cartan row i
            ConjScope::Affine => (0..n)
                .map(|j| (0..n).map(|i| rs.cartan[i][j]).collect())
                .collect(),
            _ => linalg::identity_i64(n),
        };
        for &eps in &twists {
            for u in 0..rs.weyl_count() as u16 {
                let g0 = rs.from_parts(vec![0; n], u, eps);
                let z = rs.conj(x, &g0);
                if z.finite != y.finite || z.twist != y.twist {
                    continue;
                }
                // Remaining freedom: t^gamma z t^{-gamma} = y, i.e.
                // (I - M) gamma = y.translation - z.translation.
                let m = rs.linear_matrix(y);
                let b: Vec<Vec<i64>> = (0..n)
                    .map(|i| (0..n).map(|j| i64::from(i == j) - m[i][j]).collect())
                    .collect();
                let bg = linalg::mat_mul_i64(&b, &gen);
                let c: Vec<i64> = (0..n)
                    .map(|i| y.translation[i] - z.translation[i])
                    .collect();
                if let Some(zv) = linalg::solve_integer(&bg, &c) {
                    let gamma = linalg::mat_vec_i64(&gen, &zv);
                    let witness = rs.from_parts(gamma, u, eps);
                    assert_eq!(rs.conj(x, &witness), *y, "conjugacy witness must verify");
                    return Conjugacy::Yes(witness);
                }
            }
        }
        Conjugacy::No
    }

    fn bucket(&self, l: usize) -> Result<Rc<Vec<ExtAffineElement>>, ClassifyError> {
        {
            let b = self.buckets.borrow();
            if l < b.len() {
                return Ok(b[l].clone());
            }
        }
        let ball = self.rs.elements_up_to_length(l, true);
        if ball.len() > self.cfg.closure_cap {
            return Err(ClassifyError::CapExceeded {
                cap: self.cfg.closure_cap,
            });
        }
        let mut grouped: Vec<Vec<ExtAffineElement>> = vec![Vec::new(); l + 1];
        for e in ball {
            let le = self.rs.length(&e);
            grouped[le].push(e);
        }
        let mut b = self.buckets.borrow_mut();
        if l >= b.len() {
            *b = grouped
                .into_iter()
                .map(|mut v| {
                    v.sort_by(|x, y| self.rs.cmp_elements(x, y));
                    Rc::new(v)
                })
                .collect();
        }
        Ok(b[l].clone())
    }

    /// Necessary conditions for conjugacy, cheap to test, used to prune the
    /// exact probe.
    fn filter_match(
        &self,
        z: &ExtAffineElement,
        m: &ExtAffineElement,
        scope: ConjScope,
    ) -> bool {
        let rs = self.rs;
        if rs.weyl_length(z.finite) % 2 != rs.weyl_length(m.finite) % 2 {
            return false;
        }
        let iz = rs.straight_invariant(z);
        let im = rs.straight_invariant(m);
        match scope {
            ConjScope::Affine => {
                iz == im && rs.coset_of(&z.translation) == rs.coset_of(&m.translation)
            }
            ConjScope::Extended => iz == im,
            // twist conjugation permutes the dominant Newton point
            ConjScope::Full => rs
                .twists
                .iter()
                .any(|aut| aut.apply_rat(&iz.nu_bar) == im.nu_bar),
        }
    }

    pub fn class_key(
        &self,
        x: &ExtAffineElement,
        scope: ConjScope,
    ) -> Result<ClassKey, ClassifyError> {
        Ok(self.class_data(x, scope)?.key.clone())
    }

    /// Class key plus the complete minimal-length set, memoized.  The minimal
    /// set is found exactly: reduce once, then probe every element of that
    /// length with the conjugacy decision.
    pub fn class_data(
        &self,
        x: &ExtAffineElement,
        scope: ConjScope,
    ) -> Result<Rc<ClassData>, ClassifyError> {
        if let Some(d) = self.keys.borrow().get(&(x.clone(), scope)) {
            return Ok(d.clone());
        }
        let (m, _) = self.reduce_to_min(x)?;
        let data = if let Some(d) = self.keys.borrow().get(&(m.clone(), scope)) {
            d.clone()
        } else {
            let lmin = self.rs.length(&m);
            let bucket = self.bucket(lmin)?;
            let mut mins = Vec::new();
            for z in bucket.iter() {
                // conjugation never moves between twist cosets
                if z.twist != m.twist {
                    continue;
                }
                if *z != m
                    && (!self.filter_match(z, &m, scope)
                        || !self.are_conjugate(z, &m, scope).is_yes())
                {
                    continue;
                }
                mins.push(z.clone());
            }
            let rep = mins[0].clone();
            let invariant = self.rs.straight_invariant(&rep);
            let straight = self.rs.is_straight(&rep);
            Rc::new(ClassData {
                key: ClassKey {
                    scope,
                    rep,
                    min_length: lmin,
                    straight,
                    invariant,
                },
                min_set: mins,
            })
        };
        let mut memo = self.keys.borrow_mut();
        for z in &data.min_set {
            memo.insert((z.clone(), scope), data.clone());
        }
        memo.insert((m, scope), data.clone());
        memo.insert((x.clone(), scope), data.clone());
        Ok(data)
    }

    /// One key per class meeting the ball of the given radius, sorted by
    /// minimal length then representative.
    pub fn enumerate_classes(
        &self,
        max_len: usize,
        scope: ConjScope,
    ) -> Result<Vec<ClassKey>, ClassifyError> {
        let mut keys: Vec<ClassKey> = Vec::new();
        let mut seen: HashSet<ExtAffineElement> = HashSet::new();
        for l in 0..=max_len {
            for z in self.bucket(l)?.iter() {
                let key = self.class_key(z, scope)?;
                if seen.insert(key.rep.clone()) {
                    keys.push(key);
                }
            }
        }
        keys.sort();
        Ok(keys)
    }

    /// Whether all minimal-length elements of the class form a single
    /// closure under length-preserving simple conjugation.
    pub fn verify_cyclic_shift_straight(&self, key: &ClassKey) -> Result<bool, ClassifyError> {
        let data = self.class_data(&key.rep, key.scope)?;
        let closure = self.approx_closure(&data.key.rep)?;
        Ok(closure == data.min_set)
    }

    /// Twist-closed support of a finite-type element `w * d`: the simple
    /// letters of `w`, closed under the twist permutation.
    pub fn support(&self, z: &ExtAffineElement) -> Result<Vec<usize>, ClassifyError> {
        if z.translation.iter().any(|&c| c != 0) {
            return Err(ClassifyError::Domain(
                "support needs a trivial translation part".into(),
            ));
        }
        let rank = self.rs.rank;
        let perm = &self.rs.twist(z.twist).perm;
        let mut in_supp = vec![false; rank];
        for &i in &self.rs.weyl_element(z.finite).word {
            in_supp[i - 1] = true;
        }
        loop {
            let grow: Vec<usize> = (0..rank)
                .filter(|&i| in_supp[i] && !in_supp[perm[i]])
                .map(|i| perm[i])
                .collect();
            if grow.is_empty() {
                break;
            }
            for i in grow {
                in_supp[i] = true;
            }
        }
        Ok((0..rank).filter(|&i| in_supp[i]).map(|i| i + 1).collect())
    }

    /// Connected components of the diagram induced on the given 1-based
    /// simple nodes, each sorted, in order of least node.
    fn diagram_components(&self, nodes: &[usize]) -> Vec<Vec<usize>> {
        let mut comps = Vec::new();
        let mut seen: HashSet<usize> = HashSet::new();
        for &start in nodes {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.insert(start);
            let mut queue = vec![start];
            while let Some(i) = queue.pop() {
                for &j in nodes {
                    if !seen.contains(&j) && self.rs.cartan[i - 1][j - 1] != 0 {
                        seen.insert(j);
                        comp.push(j);
                        queue.push(j);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort();
        comps
    }

    /// Weak ellipticity of a finite-type element, evaluated literally:
    /// callers pass a minimal-length element of its class.
    pub fn is_weakly_elliptic(&self, z: &ExtAffineElement) -> Result<bool, ClassifyError> {
        let all: Vec<usize> = (1..=self.rs.rank).collect();
        self.weakly_elliptic_in(z, &all)
    }

    /// Weak ellipticity inside the parabolic on `nodes` (extended by the
    /// twist): the twist-closed support must be a union of connected
    /// components of the induced diagram, and the element must commute with
    /// every simple reflection of `nodes` outside the support.
    pub fn weakly_elliptic_in(
        &self,
        z: &ExtAffineElement,
        nodes: &[usize],
    ) -> Result<bool, ClassifyError> {
        let supp = self.support(z)?;
        if supp.iter().any(|i| !nodes.contains(i)) {
            return Err(ClassifyError::Domain(
                "support leaves the ambient node set".into(),
            ));
        }
        for comp in self.diagram_components(nodes) {
            let inside = comp.iter().filter(|i| supp.contains(i)).count();
            if inside != 0 && inside != comp.len() {
                return Ok(false);
            }
        }
        for &j in nodes {
            if supp.contains(&j) {
                continue;
            }
            let s = self.rs.simple_elem(j);
            if self.rs.mul(z, &s) != self.rs.mul(&s, z) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Geometric form of weak ellipticity, valid on any class element: every
    /// positive root of the sub-system either vanishes on the fixed space of
    /// the linear part or has its coroot inside it.  Cross-checks the support
    /// criterion.
    pub fn weakly_elliptic_geometric(&self, z: &ExtAffineElement, nodes: &[usize]) -> bool {
        let rs = self.rs;
        let m = rs.linear_matrix(z);
        let rows: Vec<Vec<Rat>> = (0..rs.rank)
            .map(|i| {
                (0..rs.rank)
                    .map(|j| Rat::from_integer(m[i][j] - i64::from(i == j)))
                    .collect()
            })
            .collect();
        let (_, kernel) = linalg::solve_affine(&rows, &vec![Rat::zero(); rs.rank])
            .expect("a homogeneous system always has the zero solution");
        for r in 0..rs.positive_roots.len() {
            if !self.root_supported(r, nodes) {
                continue;
            }
            if kernel.iter().all(|d| rs.pair_rat(d, r).is_zero()) {
                continue;
            }
            let coroot: Vec<Rat> = rs.positive_coroots[r]
                .iter()
                .map(|&c| Rat::from_integer(c))
                .collect();
            if !linalg::in_span(&kernel, &coroot) {
                return false;
            }
        }
        true
    }

    /// Conjugacy classes of the coset `W_0 * (twist)` under the finite Weyl
    /// group, as translation-free elements; classes sorted by least element.
    pub fn finite_classes(&self, twist: u8) -> Vec<Vec<ExtAffineElement>> {
        let rs = self.rs;
        let count = rs.weyl_count();
        let mut seen = vec![false; count];
        let mut classes: Vec<Vec<ExtAffineElement>> = Vec::new();
        for w in 0..count as u16 {
            if seen[w as usize] {
                continue;
            }
            let z = rs.from_parts(vec![0; rs.rank], w, twist);
            let mut class = Vec::new();
            for u in 0..count as u16 {
                let g = rs.from_parts(vec![0; rs.rank], u, 0);
                let c = rs.conj(&z, &g);
                debug_assert!(c.translation.iter().all(|&t| t == 0) && c.twist == twist);
                if !seen[c.finite as usize] {
                    seen[c.finite as usize] = true;
                    class.push(c);
                }
            }
            class.sort_by(|a, b| rs.cmp_elements(a, b));
            classes.push(class);
        }
        classes.sort_by(|a, b| rs.cmp_elements(&a[0], &b[0]));
        classes
    }

    /// Reduce a finite-type element by conjugation within the parabolic on
    /// `nodes`, with the same closure-certified termination as
    /// [`Classifier::reduce_to_min`].
    pub fn finite_reduce(
        &self,
        z: &ExtAffineElement,
        nodes: &[usize],
    ) -> Result<ExtAffineElement, ClassifyError> {
        let mut cur = z.clone();
        loop {
            let ds = self.closure_with_letters(&cur, nodes)?;
            match ds.drops.first() {
                None => return Ok(cur),
                Some(&(at, letter)) => {
                    cur = self.rs.conj_by_simple(&ds.closure[at], letter);
                }
            }
        }
    }

    /// Exhaustive surjectivity check for a minimal-length finite-type
    /// element: conjugators reachable through length-preserving steps versus
    /// all length-preserving conjugators.
    pub fn brute_force_nice_finite(
        &self,
        z: &ExtAffineElement,
    ) -> Result<NiceReport, ClassifyError> {
        let rs = self.rs;
        if z.translation.iter().any(|&c| c != 0) {
            return Err(ClassifyError::Domain(
                "the brute-force criterion lives in the finite group".into(),
            ));
        }
        let count = rs.weyl_count();
        let l0 = rs.length(z);
        let conj_len = |u: u16| -> usize {
            let g = rs.from_parts(vec![0; rs.rank], rs.weyl_inv(u), 0);
            rs.length(&rs.conj(z, &g))
        };
        let mut reach = vec![false; count];
        reach[0] = true;
        let mut queue: VecDeque<u16> = VecDeque::new();
        queue.push_back(0);
        while let Some(u) = queue.pop_front() {
            for i in 1..=rs.rank {
                let next = rs.weyl_mul(u, rs.simple_reflection(i));
                if !reach[next as usize] && conj_len(next) == l0 {
                    reach[next as usize] = true;
                    queue.push_back(next);
                }
            }
        }
        let missing: Vec<u16> = (0..count as u16)
            .filter(|&u| conj_len(u) == l0 && !reach[u as usize])
            .collect();
        let is_nice = missing.is_empty();
        let witness = if is_nice {
            Some(NiceEvidence::Support(self.support(z)?))
        } else {
            let least = missing
                .iter()
                .copied()
                .min_by_key(|&u| (rs.weyl_length(u), rs.weyl_element(u).word.clone()))
                .unwrap();
            Some(NiceEvidence::FailingConjugator(rs.from_parts(
                vec![0; rs.rank],
                least,
                0,
            )))
        };
        Ok(NiceReport {
            is_nice,
            method: "brute-force-tau",
            witness,
        })
    }

    /// Classify a class as nice through two equivalent criteria, asserted to
    /// agree: reflection-stability of the fixed space along roots orthogonal
    /// to the Newton point, and weak ellipticity of the reduced finite part
    /// inside the stabilizer parabolic of the dominant Newton point.
    pub fn is_nice_class(&self, x: &ExtAffineElement) -> Result<NiceReport, ClassifyError> {
        let rs = self.rs;
        let nd = rs.newton_point(x);
        let space = rs.fixed_space(x);
        let mut failing_root: Option<usize> = None;
        for r in 0..rs.positive_roots.len() {
            if !rs.pair_rat(&nd.nu, r).is_zero() {
                continue;
            }
            // roots constant on the space leave all their hyperplanes either
            // disjoint from it or containing it; both are stable
            if space.directions.iter().all(|d| rs.pair_rat(d, r).is_zero()) {
                continue;
            }
            let coroot: Vec<Rat> = rs.positive_coroots[r]
                .iter()
                .map(|&c| Rat::from_integer(c))
                .collect();
            if !linalg::in_span(&space.directions, &coroot) {
                failing_root = Some(r);
                break;
            }
        }
        let by_fixed_space = failing_root.is_none();

        let g = rs.from_parts(vec![0; rs.rank], rs.weyl_inv(nd.y), 0);
        let xd = rs.conj(x, &g);
        let ndd = rs.newton_point(&xd);
        debug_assert_eq!(ndd.nu, nd.nu_bar, "conjugation by y^{{-1}} makes nu dominant");
        let j_set = ndd.j_set.clone();
        assert!(
            rs.weyl_element(xd.finite)
                .word
                .iter()
                .all(|i| j_set.contains(i)),
            "the finite part fixes the dominant Newton point"
        );
        let z = rs.from_parts(vec![0; rs.rank], xd.finite, xd.twist);
        let zmin = self.finite_reduce(&z, &j_set)?;
        let by_ellipticity = self.weakly_elliptic_in(&zmin, &j_set)?;
        assert_eq!(
            by_fixed_space, by_ellipticity,
            "the two nice-class criteria must agree"
        );
        let witness = match failing_root {
            Some(r) => Some(NiceEvidence::FailingRoot(rs.positive_roots[r].clone())),
            None => Some(NiceEvidence::Support(self.support(&zmin)?)),
        };
        Ok(NiceReport {
            is_nice: by_ellipticity,
            method: "fixed-space+weakly-elliptic",
            witness,
        })
    }

    /// Nice criterion special to straight classes: some dominant-Newton-point
    /// conjugate of a minimal element must be superbasic in the parabolic
    /// extension on a union `J` of components of the stabilizer diagram whose
    /// complement the twist fixes pointwise.
    pub fn is_nice_straight_class(&self, key: &ClassKey) -> Result<bool, ClassifyError> {
        if !key.straight {
            return Err(ClassifyError::Domain(
                "the superbasic criterion needs a straight class".into(),
            ));
        }
        let rs = self.rs;
        let data = self.class_data(&key.rep, key.scope)?;
        let nu_bar = &key.invariant.nu_bar;
        let j_o: Vec<usize> = (0..rs.rank)
            .filter(|&i| nu_bar[i].is_zero())
            .map(|i| i + 1)
            .collect();
        let sigma = &rs.twist(key.rep.twist).perm;
        debug_assert!(
            j_o.iter().all(|&j| j_o.contains(&(sigma[j - 1] + 1))),
            "the twist fixes the dominant Newton point"
        );
        let mut cands: Vec<ExtAffineElement> = Vec::new();
        for m in &data.min_set {
            let nd = rs.newton_point(m);
            let g = rs.from_parts(vec![0; rs.rank], rs.weyl_inv(nd.y), 0);
            let xd = rs.conj(m, &g);
            if self.parabolic_length(&xd, &j_o) == 0 && !cands.contains(&xd) {
                cands.push(xd);
            }
        }
        assert!(
            !cands.is_empty(),
            "a straight class always meets the length-zero part of the stabilizer parabolic"
        );
        let comps = self.diagram_components(&j_o);
        for cand in &cands {
            for mask in 0u32..(1 << comps.len()) {
                let mut j: Vec<usize> = Vec::new();
                for (ci, comp) in comps.iter().enumerate() {
                    if mask & (1 << ci) != 0 {
                        j.extend_from_slice(comp);
                    }
                }
                j.sort_unstable();
                let complement_fixed = j_o
                    .iter()
                    .filter(|i| !j.contains(i))
                    .all(|&i| sigma[i - 1] + 1 == i);
                if !complement_fixed {
                    continue;
                }
                if self.superbasic_in(cand, &j)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn root_supported(&self, r: usize, nodes: &[usize]) -> bool {
        self.rs.positive_roots[r]
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || nodes.contains(&(i + 1)))
    }

    /// Length with respect to the sub-root-system on `nodes`: the usual
    /// closed form restricted to its positive roots.
    pub fn parabolic_length(&self, x: &ExtAffineElement, nodes: &[usize]) -> usize {
        let rs = self.rs;
        let winv = rs.weyl_inv(x.finite);
        let mut total = 0i64;
        for r in 0..rs.positive_roots.len() {
            if !self.root_supported(r, nodes) {
                continue;
            }
            let pairing = rs.pair(&x.translation, r);
            // the twist preserves positivity, so only the finite part decides
            let (_, positive) = rs.root_image(winv, r);
            total += if positive {
                pairing.abs()
            } else {
                (pairing - 1).abs()
            };
        }
        total as usize
    }

    /// Index of the highest root of one connected sub-diagram component.
    fn sub_highest_root(&self, comp: &[usize]) -> usize {
        let height = |r: usize| -> i64 { self.rs.positive_roots[r].iter().sum() };
        let best = (0..self.rs.positive_roots.len())
            .filter(|&r| self.root_supported(r, comp))
            .max_by_key(|&r| height(r))
            .expect("a nonempty component supports roots");
        debug_assert_eq!(
            (0..self.rs.positive_roots.len())
                .filter(|&r| self.root_supported(r, comp) && height(r) == height(best))
                .count(),
            1,
            "the highest root of an irreducible system is unique"
        );
        best
    }

    /// Finite Weyl index of the reflection at positive root `r`.
    fn reflection_at(&self, r: usize) -> u16 {
        let rs = self.rs;
        for w in 0..rs.weyl_count() as u16 {
            for i in 1..=rs.rank {
                if rs.root_image(w, rs.simple_root_position(i)) == (r, true) {
                    return rs.weyl_mul(rs.weyl_mul(w, rs.simple_reflection(i)), rs.weyl_inv(w));
                }
            }
        }
        unreachable!("every positive root is the Weyl image of a simple root")
    }

    /// Superbasic inside the parabolic extension on `nodes`: the element must
    /// lie in it, have parabolic length zero, and its conjugation orbits on
    /// the affine simple reflections of the sub-system must cover whole
    /// components of the induced diagram (with one affine node each).
    pub fn superbasic_in(
        &self,
        x: &ExtAffineElement,
        nodes: &[usize],
    ) -> Result<bool, ClassifyError> {
        let rs = self.rs;
        let word_ok = rs
            .weyl_element(x.finite)
            .word
            .iter()
            .all(|i| nodes.contains(i));
        let twist_ok = nodes
            .iter()
            .all(|&j| nodes.contains(&(rs.twist(x.twist).perm[j - 1] + 1)));
        if !word_ok || !twist_ok || self.parabolic_length(x, nodes) != 0 {
            return Ok(false);
        }
        if nodes.is_empty() {
            // pure coweight translations: no diagram to permute
            return Ok(true);
        }
        let comps = self.diagram_components(nodes);
        let mut refls: Vec<(usize, ExtAffineElement)> = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            for &j in comp {
                refls.push((ci, rs.simple_elem(j)));
            }
            let hr = self.sub_highest_root(comp);
            refls.push((
                ci,
                rs.from_parts(rs.positive_coroots[hr].clone(), self.reflection_at(hr), 0),
            ));
        }
        let mut perm = vec![usize::MAX; refls.len()];
        for (i, (_, e)) in refls.iter().enumerate() {
            let c = rs.conj(e, x);
            match refls.iter().position(|(_, f)| *f == c) {
                Some(p) => perm[i] = p,
                None => {
                    return Err(ClassifyError::Domain(
                        "parabolic length zero must permute the sub-system's affine reflections"
                            .into(),
                    ))
                }
            }
        }
        let mut orbit = vec![usize::MAX; refls.len()];
        for start in 0..refls.len() {
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
        for (ci, _) in comps.iter().enumerate() {
            let members: Vec<usize> = (0..refls.len()).filter(|&i| refls[i].0 == ci).collect();
            if members.iter().any(|&i| orbit[i] != orbit[members[0]]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
