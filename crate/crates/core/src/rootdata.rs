//! Root systems, finite Weyl groups, and diagram automorphisms.
//!
//! Coordinate conventions, used everywhere downstream:
//!
//! * Coweight vectors are written in the basis of fundamental coweights, so
//!   the pairing of a coweight `v` with the simple root `alpha_j` is the
//!   coordinate `v[j]`.  Integer coordinates describe the coweight lattice
//!   `P`; rational coordinates appear for barycenters and Newton points.
//! * Roots are written in the basis of simple roots, so the coordinates of a
//!   positive root are its non-negative integer coefficients.
//! * The coordinates of the simple coroot `alpha_i^v` in the fundamental
//!   coweight basis form row `i` of the Cartan matrix.
//!
//! A [`RootSystem`] owns every table the rest of the library needs: the
//! positive roots with their coroots in matching order, the full finite Weyl
//! group with multiplication and inversion tables, the signed permutation each
//! element induces on positive roots, the group of Cartan-preserving diagram
//! automorphisms, and the Smith normal form data describing `P/Q`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::Zero;

use crate::linalg::{self, Rat};

/// Coordinates of a coweight in the fundamental coweight basis.
pub type CoweightVector = Vec<i64>;

/// Supported Cartan types.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum TypeLabel {
    A1,
    A2,
    A3,
    B2,
    B3,
    C2,
    C3,
    D3,
    G2,
}

pub const ALL_TYPES: [TypeLabel; 9] = [
    TypeLabel::A1,
    TypeLabel::A2,
    TypeLabel::A3,
    TypeLabel::B2,
    TypeLabel::B3,
    TypeLabel::C2,
    TypeLabel::C3,
    TypeLabel::D3,
    TypeLabel::G2,
];

impl TypeLabel {
    pub fn rank(self) -> usize {
        match self {
            TypeLabel::A1 => 1,
            TypeLabel::A2 | TypeLabel::B2 | TypeLabel::C2 | TypeLabel::G2 => 2,
            TypeLabel::A3 | TypeLabel::B3 | TypeLabel::C3 | TypeLabel::D3 => 3,
        }
    }

    /// Cartan matrix `a[i][j] = <alpha_i^v, alpha_j>`.
    pub fn cartan(self) -> Vec<Vec<i64>> {
        match self {
            TypeLabel::A1 => vec![vec![2]],
            TypeLabel::A2 => vec![vec![2, -1], vec![-1, 2]],
            TypeLabel::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            TypeLabel::B2 => vec![vec![2, -1], vec![-2, 2]],
            TypeLabel::B3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]],
            TypeLabel::C2 => vec![vec![2, -2], vec![-1, 2]],
            TypeLabel::C3 => vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]],
            TypeLabel::D3 => vec![vec![2, -1, -1], vec![-1, 2, 0], vec![-1, 0, 2]],
            TypeLabel::G2 => vec![vec![2, -3], vec![-1, 2]],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TypeLabel::A1 => "A1",
            TypeLabel::A2 => "A2",
            TypeLabel::A3 => "A3",
            TypeLabel::B2 => "B2",
            TypeLabel::B3 => "B3",
            TypeLabel::C2 => "C2",
            TypeLabel::C3 => "C3",
            TypeLabel::D3 => "D3",
            TypeLabel::G2 => "G2",
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TypeLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_TYPES
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown Cartan type `{s}`"))
    }
}

/// An element of the finite Weyl group.
///
/// `matrix` is the action on coweight coordinates (`v -> matrix * v`), `word`
/// is the lexicographically least reduced word in 1-based simple reflection
/// letters, and the length of the element is `word.len()`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteWeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub word: Vec<usize>,
    /// Signed image of each positive root: entry `r` holds `idx + 1` when the
    /// element maps positive root `r` to positive root `idx`, and `-(idx + 1)`
    /// when it maps it to minus positive root `idx`.
    pub(crate) root_perm: Vec<i32>,
}

impl FiniteWeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// A Cartan-preserving permutation of the simple roots.
///
/// `perm[i]` is the 0-based image of simple index `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiagramAut {
    pub perm: Vec<usize>,
}

impl DiagramAut {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Permute coweight (or root) coordinates: image index `perm[j]` receives
    /// coordinate `j`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (j, &x) in v.iter().enumerate() {
            out[self.perm[j]] = x;
        }
        out
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); v.len()];
        for (j, &x) in v.iter().enumerate() {
            out[self.perm[j]] = x;
        }
        out
    }
}

/// Smith normal form data for the quotient `P/Q` of the coweight lattice by
/// the coroot lattice.
struct PiData {
    /// Unimodular `u` with `u * cartan^T * v = diag`.
    u: Vec<Vec<i64>>,
    /// Diagonal of the Smith normal form of `cartan^T`.
    diag: Vec<i64>,
    /// Positions `i` with `diag[i] > 1`, the coordinates that survive in `P/Q`.
    keep: Vec<usize>,
    /// One coweight representative for every residue vector.
    reps: HashMap<Vec<i64>, CoweightVector>,
}

/// A finite root system together with all precomputed group tables.
pub struct RootSystem {
    pub label: TypeLabel,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then
    /// lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    /// Coroot of `positive_roots[r]` in fundamental coweight coordinates.
    pub positive_coroots: Vec<CoweightVector>,
    /// Index of the highest root in `positive_roots`.
    pub highest_root: usize,
    /// Order of `P/Q`, equal to the determinant of the Cartan matrix.
    pub connection_index: i64,
    /// Invariant factors of `P/Q`, each greater than 1.
    pub invariant_factors: Vec<i64>,
    /// Cartan-preserving diagram automorphisms, identity first, the rest in
    /// lexicographic order of their permutation vectors.
    pub twists: Vec<DiagramAut>,

    /// `simple_root_index[i]` is the position of `alpha_i` in `positive_roots`.
    simple_root_index: Vec<usize>,
    /// Finite Weyl group elements; index 0 is the identity.
    elems: Vec<FiniteWeylElement>,
    mult: Vec<Vec<u16>>,
    inv: Vec<u16>,
    /// Index of the simple reflection `s_i`.
    simple_refl: Vec<u16>,
    /// Index of the reflection at the highest root.
    s_highest: u16,
    /// Twist composition and inversion tables.
    twist_mul: Vec<Vec<u8>>,
    twist_inv: Vec<u8>,
    /// `twist_conj[d][w]` is the index of `d w d^{-1}`.
    twist_conj: Vec<Vec<u16>>,
    /// Barycenter of the fundamental alcove, in coweight coordinates.
    barycenter: Vec<Rat>,
    pi: PiData,
}

fn flatten(m: &[Vec<i64>]) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

impl RootSystem {
    /// Build every table for the given Cartan type.
    pub fn new(label: TypeLabel) -> RootSystem {
        let rank = label.rank();
        let cartan = label.cartan();

        // Simple reflection matrices acting on coweight coordinates:
        // s_i(v)_j = v_j - cartan[i][j] * v_i.
        let mut refl_mat: Vec<Vec<Vec<i64>>> = Vec::new();
        for i in 0..rank {
            let mut m = linalg::identity_i64(rank);
            for j in 0..rank {
                m[j][i] -= cartan[i][j];
            }
            refl_mat.push(m);
        }

        // Closure of the simple (root, coroot) pairs under simple reflections.
        // Roots transform by s_i(c)_k = c_k - [k == i] * sum_j cartan[i][j] c_j,
        // coroots by the reflection matrices above.
        let simple_pairs: Vec<(Vec<i64>, Vec<i64>)> = (0..rank)
            .map(|i| {
                let mut e = vec![0; rank];
                e[i] = 1;
                (e, cartan[i].clone())
            })
            .collect();
        let reflect_root = |i: usize, c: &[i64]| -> Vec<i64> {
            let pairing: i64 = (0..rank).map(|j| cartan[i][j] * c[j]).sum();
            let mut out = c.to_vec();
            out[i] -= pairing;
            out
        };
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = simple_pairs.clone();
        for (r, c) in &queue {
            seen.insert(r.clone(), c.clone());
        }
        while let Some((r, c)) = queue.pop() {
            for i in 0..rank {
                let nr = reflect_root(i, &r);
                let nc = linalg::mat_vec_i64(&refl_mat[i], &c);
                if !seen.contains_key(&nr) {
                    seen.insert(nr.clone(), nc.clone());
                    queue.push((nr, nc));
                }
            }
        }
        let mut positive_roots: Vec<Vec<i64>> = seen
            .keys()
            .filter(|r| r.iter().all(|&x| x >= 0))
            .cloned()
            .collect();
        positive_roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let positive_coroots: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|r| seen[r].clone())
            .collect();
        assert_eq!(seen.len(), 2 * positive_roots.len());
        let highest_root = positive_roots.len() - 1;
        let simple_root_index: Vec<usize> = (0..rank)
            .map(|i| {
                let mut e = vec![0; rank];
                e[i] = 1;
                positive_roots.iter().position(|r| *r == e).unwrap()
            })
            .collect();

        // Signed positive-root permutation of each simple reflection.
        let root_index: HashMap<Vec<i64>, usize> = positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let signed_image = |c: &[i64]| -> i32 {
            if let Some(&i) = root_index.get(c) {
                (i as i32) + 1
            } else {
                let neg: Vec<i64> = c.iter().map(|x| -x).collect();
                -((root_index[&neg] as i32) + 1)
            }
        };
        let simple_root_perm: Vec<Vec<i32>> = (0..rank)
            .map(|i| {
                positive_roots
                    .iter()
                    .map(|r| signed_image(&reflect_root(i, r)))
                    .collect()
            })
            .collect();

        // Breadth-first enumeration of the finite Weyl group.  Appending
        // generators in ascending order on the right and scanning the queue in
        // insertion order yields the lexicographically least reduced word as
        // the first word reaching each element.
        let mut elems: Vec<FiniteWeylElement> = vec![FiniteWeylElement {
            matrix: linalg::identity_i64(rank),
            word: Vec::new(),
            root_perm: (1..=positive_roots.len() as i32).collect(),
        }];
        let mut index_of_matrix: HashMap<Vec<i64>, u16> = HashMap::new();
        index_of_matrix.insert(flatten(&elems[0].matrix), 0);
        let mut at = 0;
        while at < elems.len() {
            for i in 0..rank {
                let m = linalg::mat_mul_i64(&elems[at].matrix, &refl_mat[i]);
                let key = flatten(&m);
                if !index_of_matrix.contains_key(&key) {
                    // (w s_i)(r) = w(s_i r): compose the stored permutation of
                    // w with the signed permutation of s_i.
                    let parent = &elems[at];
                    let root_perm: Vec<i32> = simple_root_perm[i]
                        .iter()
                        .map(|&p| {
                            if p > 0 {
                                parent.root_perm[(p - 1) as usize]
                            } else {
                                -parent.root_perm[(-p - 1) as usize]
                            }
                        })
                        .collect();
                    let mut word = parent.word.clone();
                    word.push(i + 1);
                    index_of_matrix.insert(key, elems.len() as u16);
                    elems.push(FiniteWeylElement {
                        matrix: m,
                        word,
                        root_perm,
                    });
                }
            }
            at += 1;
        }
        for e in &elems {
            let inversions = e.root_perm.iter().filter(|&&p| p < 0).count();
            assert_eq!(inversions, e.word.len());
        }

        let count = elems.len();
        let mut mult = vec![vec![0u16; count]; count];
        for a in 0..count {
            for b in 0..count {
                let m = linalg::mat_mul_i64(&elems[a].matrix, &elems[b].matrix);
                mult[a][b] = index_of_matrix[&flatten(&m)];
            }
        }
        let inv: Vec<u16> = (0..count)
            .map(|a| (0..count).find(|&b| mult[a][b] == 0).unwrap() as u16)
            .collect();
        let simple_refl: Vec<u16> = (0..rank)
            .map(|i| index_of_matrix[&flatten(&refl_mat[i])])
            .collect();
        let s_highest = {
            let theta = &positive_roots[highest_root];
            let theta_co = &positive_coroots[highest_root];
            // s_theta(v) = v - <v, theta> theta^v.
            let mut m = vec![vec![0i64; rank]; rank];
            for j in 0..rank {
                for k in 0..rank {
                    m[j][k] = i64::from(j == k) - theta_co[j] * theta[k];
                }
            }
            index_of_matrix[&flatten(&m)]
        };

        // Diagram automorphisms: permutations preserving the Cartan matrix.
        let mut twists: Vec<DiagramAut> = linalg::permutations(rank)
            .into_iter()
            .filter(|p| {
                (0..rank).all(|i| (0..rank).all(|j| cartan[p[i]][p[j]] == cartan[i][j]))
            })
            .map(|perm| DiagramAut { perm })
            .collect();
        twists.sort_by_key(|d| (!d.is_identity(), d.perm.clone()));
        assert!(twists[0].is_identity());

        let tcount = twists.len();
        let compose = |a: &DiagramAut, b: &DiagramAut| -> DiagramAut {
            // (a b)(i) = a(b(i))
            DiagramAut {
                perm: (0..rank).map(|i| a.perm[b.perm[i]]).collect(),
            }
        };
        let twist_index = |d: &DiagramAut| -> u8 {
            twists.iter().position(|t| t == d).unwrap() as u8
        };
        let mut twist_mul = vec![vec![0u8; tcount]; tcount];
        for a in 0..tcount {
            for b in 0..tcount {
                twist_mul[a][b] = twist_index(&compose(&twists[a], &twists[b]));
            }
        }
        let twist_inv: Vec<u8> = (0..tcount)
            .map(|a| (0..tcount).find(|&b| twist_mul[a][b] == 0).unwrap() as u8)
            .collect();
        // d w d^{-1} acts on coweights by permuting coordinates before and
        // after w.
        let mut twist_conj = vec![vec![0u16; count]; tcount];
        for (d, aut) in twists.iter().enumerate() {
            for (w, e) in elems.iter().enumerate() {
                let mut m = vec![vec![0i64; rank]; rank];
                for j in 0..rank {
                    for k in 0..rank {
                        m[aut.perm[j]][aut.perm[k]] = e.matrix[j][k];
                    }
                }
                twist_conj[d][w] = *index_of_matrix
                    .get(&flatten(&m))
                    .expect("diagram automorphism must normalize the Weyl group");
            }
        }

        // P/Q from the Smith normal form of cartan^T, whose columns span Q in
        // coweight coordinates.
        let cartan_t: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| cartan[j][i]).collect())
            .collect();
        let snf = linalg::smith_normal_form(&cartan_t);
        let connection_index: i64 = snf.diag.iter().product();
        assert!(connection_index > 0);
        let keep: Vec<usize> = (0..rank).filter(|&i| snf.diag[i] > 1).collect();
        let invariant_factors: Vec<i64> = keep.iter().map(|&i| snf.diag[i]).collect();

        let marks = positive_roots[highest_root].clone();
        let barycenter: Vec<Rat> = (0..rank)
            .map(|j| Rat::new(1, (rank as i64 + 1) * marks[j]))
            .collect();

        let mut sys = RootSystem {
            label,
            rank,
            cartan,
            positive_roots,
            positive_coroots,
            highest_root,
            connection_index,
            invariant_factors,
            twists,
            simple_root_index,
            elems,
            mult,
            inv,
            simple_refl,
            s_highest,
            twist_mul,
            twist_inv,
            twist_conj,
            barycenter,
            pi: PiData {
                u: snf.u,
                diag: snf.diag,
                keep,
                reps: HashMap::new(),
            },
        };
        // One coweight representative per residue class, found by scanning a
        // small box around the origin.
        let mut reps: HashMap<Vec<i64>, CoweightVector> = HashMap::new();
        let side = 3i64;
        let total = (2 * side + 1).pow(sys.rank as u32);
        for t in 0..total {
            let mut v = Vec::with_capacity(sys.rank);
            let mut rest = t;
            for _ in 0..sys.rank {
                v.push(rest % (2 * side + 1) - side);
                rest /= 2 * side + 1;
            }
            reps.entry(sys.coset_of(&v)).or_insert(v);
        }
        assert_eq!(reps.len() as i64, sys.connection_index);
        sys.pi.reps = reps;
        sys
    }

    /// Pairing of a coweight with a root given by its positive-root index.
    pub fn pair(&self, v: &[i64], root: usize) -> i64 {
        self.positive_roots[root]
            .iter()
            .zip(v)
            .map(|(c, x)| c * x)
            .sum()
    }

    pub fn pair_rat(&self, v: &[Rat], root: usize) -> Rat {
        self.positive_roots[root]
            .iter()
            .zip(v)
            .map(|(c, x)| Rat::from_integer(*c) * x)
            .fold(Rat::zero(), |s, t| s + t)
    }

    /// Pairing with an arbitrary root in simple-root coordinates.
    pub fn pair_coords(&self, v: &[Rat], root: &[i64]) -> Rat {
        root.iter()
            .zip(v)
            .map(|(c, x)| Rat::from_integer(*c) * x)
            .fold(Rat::zero(), |s, t| s + t)
    }

    pub fn weyl_count(&self) -> usize {
        self.elems.len()
    }

    pub fn weyl_element(&self, w: u16) -> &FiniteWeylElement {
        &self.elems[w as usize]
    }

    pub fn weyl_mul(&self, a: u16, b: u16) -> u16 {
        self.mult[a as usize][b as usize]
    }

    pub fn weyl_inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn weyl_length(&self, a: u16) -> usize {
        self.elems[a as usize].word.len()
    }

    /// Index of the simple reflection `s_i` (1-based `i`).
    pub fn simple_reflection(&self, i: usize) -> u16 {
        self.simple_refl[i - 1]
    }

    /// Index of the reflection at the highest root.
    pub fn highest_reflection(&self) -> u16 {
        self.s_highest
    }

    /// Position of the simple root `alpha_i` (1-based) in `positive_roots`.
    pub fn simple_root_position(&self, i: usize) -> usize {
        self.simple_root_index[i - 1]
    }

    /// Signed image of positive root `r` under Weyl element `w`: the image
    /// index and whether the image is positive.
    pub fn root_image(&self, w: u16, r: usize) -> (usize, bool) {
        let p = self.elems[w as usize].root_perm[r];
        if p > 0 {
            ((p - 1) as usize, true)
        } else {
            ((-p - 1) as usize, false)
        }
    }

    /// Weyl action on integer coweight coordinates.
    pub fn act(&self, w: u16, v: &[i64]) -> CoweightVector {
        linalg::mat_vec_i64(&self.elems[w as usize].matrix, v)
    }

    pub fn act_rat(&self, w: u16, v: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec_rat(&self.elems[w as usize].matrix, v)
    }

    /// Conjugate of Weyl element `w` by diagram automorphism `d`.
    pub fn twist_weyl(&self, d: u8, w: u16) -> u16 {
        self.twist_conj[d as usize][w as usize]
    }

    /// Composition of two diagram automorphisms by index.
    pub fn twist_compose(&self, a: u8, b: u8) -> u8 {
        self.twist_mul[a as usize][b as usize]
    }

    pub fn twist_inverse(&self, a: u8) -> u8 {
        self.twist_inv[a as usize]
    }

    pub fn twist(&self, d: u8) -> &DiagramAut {
        &self.twists[d as usize]
    }

    /// All Cartan-preserving diagram automorphisms, identity first.
    pub fn diagram_automorphisms(&self) -> &[DiagramAut] {
        &self.twists
    }

    /// Barycenter of the fundamental alcove.
    pub fn alcove_barycenter(&self) -> &[Rat] {
        &self.barycenter
    }

    /// Coefficients of the highest root on the simple roots.
    pub fn marks(&self) -> &[i64] {
        &self.positive_roots[self.highest_root]
    }

    /// Sum of the pairings of `v` with every positive root.
    pub fn two_rho_pairing(&self, v: &[Rat]) -> Rat {
        (0..self.positive_roots.len())
            .map(|r| self.pair_rat(v, r))
            .fold(Rat::zero(), |s, t| s + t)
    }

    /// The dominant Weyl chamber representative of `v`, together with the
    /// minimal-length element `y` satisfying `y(dominant) = v`.
    ///
    /// Repeatedly reflects at the smallest simple root with negative pairing;
    /// this greedy sweep is what makes `y` minimal.
    pub fn dominant_representative(&self, v: &[Rat]) -> (Vec<Rat>, u16) {
        let mut cur = v.to_vec();
        let mut y = 0u16;
        loop {
            let Some(i) = (0..self.rank).find(|&i| cur[i] < Rat::zero()) else {
                return (cur, y);
            };
            cur = self.act_rat(self.simple_refl[i], &cur);
            y = self.mult[y as usize][self.simple_refl[i] as usize];
        }
    }

    /// Residue vector of a coweight in `P/Q`, one entry per invariant factor.
    pub fn coset_of(&self, v: &[i64]) -> Vec<i64> {
        let uv = linalg::mat_vec_i64(&self.pi.u, v);
        self.pi
            .keep
            .iter()
            .map(|&i| uv[i].rem_euclid(self.pi.diag[i]))
            .collect()
    }

    /// Every residue vector of `P/Q`, sorted.
    pub fn pi_elements(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.pi.reps.keys().cloned().collect();
        out.sort();
        out
    }

    /// A coweight representative of the given residue vector.
    pub fn pi_representative(&self, residues: &[i64]) -> CoweightVector {
        self.pi.reps[residues].clone()
    }

    /// Sum of two residue vectors.
    pub fn pi_add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.invariant_factors)
            .map(|((x, y), m)| (x + y).rem_euclid(*m))
            .collect()
    }

    /// Image of a residue vector under a diagram automorphism.
    pub fn pi_twist(&self, d: u8, residues: &[i64]) -> Vec<i64> {
        let rep = self.pi_representative(residues);
        self.coset_of(&self.twists[d as usize].apply(&rep))
    }

    /// Canonical representative of the image of `residues` in the group of
    /// coinvariants of `P/Q` under the automorphism `d`: the quotient by the
    /// subgroup generated by all `g - d(g)`.
    pub fn pi_coinvariant_class(&self, d: u8, residues: &[i64]) -> Vec<i64> {
        let mut subgroup: Vec<Vec<i64>> = vec![vec![0; self.invariant_factors.len()]];
        let mut frontier = subgroup.clone();
        let gens: Vec<Vec<i64>> = self
            .pi_elements()
            .iter()
            .map(|g| {
                let dg = self.pi_twist(d, g);
                let neg: Vec<i64> = dg
                    .iter()
                    .zip(&self.invariant_factors)
                    .map(|(x, m)| (-x).rem_euclid(*m))
                    .collect();
                self.pi_add(g, &neg)
            })
            .collect();
        while let Some(h) = frontier.pop() {
            for g in &gens {
                let s = self.pi_add(&h, g);
                if !subgroup.contains(&s) {
                    subgroup.push(s.clone());
                    frontier.push(s);
                }
            }
        }
        subgroup
            .iter()
            .map(|h| self.pi_add(residues, h))
            .min()
            .unwrap()
    }
}

