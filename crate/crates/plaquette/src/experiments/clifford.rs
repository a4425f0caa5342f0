//! Clifford group machinery for randomized benchmarking: exact matrices
//! for simulation, symplectic tableaus for composition and inversion, and
//! the class decomposition L * E * R (E one of identity, CNOT,
//! CNOT*(HxH)*CNOT, SWAP) that both samples the 11520 two-qubit Cliffords
//! uniformly and compiles any element into at most three CNOTs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

/// A two-qubit Pauli with exact phase: i^ph * (X^x0 Z^z0) tensor
/// (X^x1 Z^z1), bit q of `x`/`z` belonging to qubit q.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Pauli2 {
    x: u8,
    z: u8,
    /// Power of i, mod 4.
    ph: u8,
}

const fn p2(x: u8, z: u8, ph: u8) -> Pauli2 {
    Pauli2 { x, z, ph }
}

const X0: Pauli2 = p2(0b01, 0, 0);
const Z0: Pauli2 = p2(0, 0b01, 0);
const X1: Pauli2 = p2(0b10, 0, 0);
const Z1: Pauli2 = p2(0, 0b10, 0);

impl Pauli2 {
    /// Product self * other. Moving the right factor's X part through the
    /// left factor's Z part costs a sign per overlapping qubit.
    fn mul(self, other: Pauli2) -> Pauli2 {
        let swaps = (self.z & other.x).count_ones() as u8;
        Pauli2 {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            ph: (self.ph + other.ph + 2 * swaps) % 4,
        }
    }
}

/// Conjugation action of a two-qubit Clifford on the Pauli generators:
/// images of X0, Z0, X1, Z1 under U P U^dagger. Equality of tableaus is
/// equality of Cliffords up to global phase.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Tableau2 {
    img: [Pauli2; 4],
}

impl Tableau2 {
    pub(crate) fn identity() -> Tableau2 {
        Tableau2 { img: [X0, Z0, X1, Z1] }
    }

    fn conjugate(&self, p: Pauli2) -> Pauli2 {
        let mut acc = p2(0, 0, p.ph);
        if p.x & 1 != 0 {
            acc = acc.mul(self.img[0]);
        }
        if p.z & 1 != 0 {
            acc = acc.mul(self.img[1]);
        }
        if p.x & 2 != 0 {
            acc = acc.mul(self.img[2]);
        }
        if p.z & 2 != 0 {
            acc = acc.mul(self.img[3]);
        }
        acc
    }

    /// Composition with `other` applied first: (self o other)(P) =
    /// self(other(P)), i.e. the tableau of U_self * U_other.
    pub(crate) fn compose_after(&self, other: &Tableau2) -> Tableau2 {
        Tableau2 { img: other.img.map(|p| self.conjugate(p)) }
    }

    /// Exact inverse: symplectic transpose for the bit part, then sign
    /// corrections so the composition with self is the identity.
    pub(crate) fn inverse(&self) -> Tableau2 {
        // Component order (x0, z0, x1, z1); m[i][j] = component i of the
        // image of basis j. The symplectic form pairs components i and i^1,
        // so the GF(2) inverse is Minv[i][j] = M[j^1][i^1].
        let comp = |p: Pauli2, i: usize| -> u8 {
            match i {
                0 => p.x & 1,
                1 => p.z & 1,
                2 => (p.x >> 1) & 1,
                _ => (p.z >> 1) & 1,
            }
        };
        let mut m = [[0u8; 4]; 4];
        for j in 0..4 {
            for i in 0..4 {
                m[i][j] = comp(self.img[j], i);
            }
        }
        let mut img = [p2(0, 0, 0); 4];
        for (k, slot) in img.iter_mut().enumerate() {
            let mut x = 0u8;
            let mut z = 0u8;
            for i in 0..4 {
                if m[k ^ 1][i ^ 1] == 1 {
                    match i {
                        0 => x |= 1,
                        1 => z |= 1,
                        2 => x |= 2,
                        _ => z |= 2,
                    }
                }
            }
            // Hermitian canonical phase: odd power of i exactly when X and
            // Z overlap on an odd number of qubits.
            let ph = ((x & z).count_ones() & 1) as u8;
            *slot = p2(x, z, ph);
        }
        let mut inv = Tableau2 { img };
        let check = self.compose_after(&inv);
        for k in 0..4 {
            debug_assert_eq!(check.img[k].ph % 2, 0, "non-Hermitian inverse image");
            if check.img[k].ph == 2 {
                inv.img[k].ph = (inv.img[k].ph + 2) % 4;
            }
        }
        debug_assert_eq!(self.compose_after(&inv), Tableau2::identity());
        inv
    }
}

/// A single-qubit Pauli with exact phase: i^ph * X^x Z^z.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Pauli1 {
    x: bool,
    z: bool,
    ph: u8,
}

/// Images of X and Z under a single-qubit Clifford.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Tableau1 {
    imgx: Pauli1,
    imgz: Pauli1,
}

fn embed(p: Pauli1, qubit: usize) -> Pauli2 {
    let shift = qubit as u8;
    p2(u8::from(p.x) << shift, u8::from(p.z) << shift, p.ph)
}

fn local_tableau2(a: &Tableau1, b: &Tableau1) -> Tableau2 {
    Tableau2 {
        img: [embed(a.imgx, 0), embed(a.imgz, 0), embed(b.imgx, 1), embed(b.imgz, 1)],
    }
}

/// Split a tableau into single-qubit tableaus if it acts locally.
fn as_local(t: &Tableau2) -> Option<(Tableau1, Tableau1)> {
    for k in [0, 1] {
        if t.img[k].x & 0b10 != 0 || t.img[k].z & 0b10 != 0 {
            return None;
        }
    }
    for k in [2, 3] {
        if t.img[k].x & 0b01 != 0 || t.img[k].z & 0b01 != 0 {
            return None;
        }
    }
    let restrict = |p: Pauli2, shift: u8| Pauli1 {
        x: (p.x >> shift) & 1 != 0,
        z: (p.z >> shift) & 1 != 0,
        ph: p.ph,
    };
    Some((
        Tableau1 { imgx: restrict(t.img[0], 0), imgz: restrict(t.img[1], 0) },
        Tableau1 { imgx: restrict(t.img[2], 1), imgz: restrict(t.img[3], 1) },
    ))
}

/// One of the 24 single-qubit Cliffords: its (phase-canonical) matrix and
/// its tableau.
pub(crate) struct OneQubitClifford {
    pub(crate) matrix: DMatrix<Complex64>,
    pub(crate) tableau: Tableau1,
}

/// A two-qubit Clifford in decomposed form: U = L * E_class * R with L and
/// R pairs of single-qubit Cliffords and E_class the class representative
/// (0: identity, 1: CNOT, 2: CNOT*(HxH)*CNOT, 3: SWAP). The circuit applies
/// R first.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct TwoQubitClifford {
    pub(crate) l: (usize, usize),
    pub(crate) class: usize,
    pub(crate) r: (usize, usize),
}

pub(crate) struct CliffordTables {
    one_qubit: Vec<OneQubitClifford>,
    /// Exact Hadamard matrix, for the middle layer of the class-2 circuit.
    pub(crate) hadamard: DMatrix<Complex64>,
    local_lookup: HashMap<(Tableau1, Tableau1), (usize, usize)>,
    class_tableaus: [Tableau2; 4],
    #[cfg_attr(not(test), allow(dead_code))]
    class_sizes: [usize; 4],
    /// (class, c, d, inverse of E_class o local(c, d)), ordered by class so
    /// compilation prefers fewer CNOTs.
    right_cosets: Vec<(usize, usize, usize, Tableau2)>,
}

fn pauli1_matrix(p: Pauli1) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let base = match (p.x, p.z) {
        (false, false) => DMatrix::from_row_slice(2, 2, &[one, zero, zero, one]),
        (true, false) => DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
        (false, true) => DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
        (true, true) => DMatrix::from_row_slice(2, 2, &[zero, -one, one, zero]),
    };
    base * Complex64::new(0.0, 1.0).powu(u32::from(p.ph))
}

fn pauli1_from_matrix(m: &DMatrix<Complex64>) -> Option<Pauli1> {
    for x in [false, true] {
        for z in [false, true] {
            if !x && !z {
                continue;
            }
            let base_ph = u8::from(x && z);
            for extra in [0u8, 2] {
                let candidate = Pauli1 { x, z, ph: (base_ph + extra) % 4 };
                let cm = pauli1_matrix(candidate);
                let dist = (m - &cm).iter().map(|e| e.norm()).fold(0.0, f64::max);
                if dist < 1e-9 {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

fn canonical_key(m: &DMatrix<Complex64>) -> [(i64, i64); 4] {
    let mut phase = Complex64::new(1.0, 0.0);
    for idx in 0..4 {
        let e = m[(idx / 2, idx % 2)];
        if e.norm() > 1e-6 {
            phase = e.conj() / e.norm();
            break;
        }
    }
    let mut key = [(0i64, 0i64); 4];
    for (idx, slot) in key.iter_mut().enumerate() {
        let v = m[(idx / 2, idx % 2)] * phase;
        *slot = ((v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64);
    }
    key
}

fn one_qubit_group() -> Vec<OneQubitClifford> {
    let inv_sqrt2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let h = DMatrix::from_row_slice(
        2,
        2,
        &[inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2],
    );
    let s = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ],
    );
    let identity = DMatrix::<Complex64>::identity(2, 2);

    let canonicalize = |m: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let mut phase = Complex64::new(1.0, 0.0);
        for idx in 0..4 {
            let e = m[(idx / 2, idx % 2)];
            if e.norm() > 1e-6 {
                phase = e.conj() / e.norm();
                break;
            }
        }
        m * phase
    };

    let mut seen: HashSet<[(i64, i64); 4]> = HashSet::new();
    let mut elements: Vec<DMatrix<Complex64>> = Vec::new();
    let mut queue: VecDeque<DMatrix<Complex64>> = VecDeque::new();
    seen.insert(canonical_key(&identity));
    elements.push(canonicalize(&identity));
    queue.push_back(identity);
    while let Some(current) = queue.pop_front() {
        for generator in [&h, &s] {
            let product = generator * &current;
            if seen.insert(canonical_key(&product)) {
                elements.push(canonicalize(&product));
                queue.push_back(product);
            }
        }
    }
    assert_eq!(elements.len(), 24, "single-qubit Clifford group size");

    let x = pauli1_matrix(Pauli1 { x: true, z: false, ph: 0 });
    let z = pauli1_matrix(Pauli1 { x: false, z: true, ph: 0 });
    elements
        .into_iter()
        .map(|matrix| {
            let adj = matrix.adjoint();
            let imgx = pauli1_from_matrix(&(&matrix * &x * &adj))
                .expect("Clifford image of X is a signed Pauli");
            let imgz = pauli1_from_matrix(&(&matrix * &z * &adj))
                .expect("Clifford image of Z is a signed Pauli");
            OneQubitClifford { matrix, tableau: Tableau1 { imgx, imgz } }
        })
        .collect()
}

fn cnot_tableau(control_first: bool) -> Tableau2 {
    if control_first {
        // Control qubit 0: X0 -> X0X1, Z1 -> Z0Z1.
        Tableau2 { img: [p2(0b11, 0, 0), Z0, X1, p2(0, 0b11, 0)] }
    } else {
        // Control qubit 1: X1 -> X0X1, Z0 -> Z0Z1.
        Tableau2 { img: [X0, p2(0, 0b11, 0), p2(0b11, 0, 0), Z1] }
    }
}

fn build_tables() -> CliffordTables {
    let one_qubit = one_qubit_group();
    let mut local_lookup = HashMap::with_capacity(576);
    for (a, ca) in one_qubit.iter().enumerate() {
        for (b, cb) in one_qubit.iter().enumerate() {
            local_lookup.insert((ca.tableau, cb.tableau), (a, b));
        }
    }
    assert_eq!(local_lookup.len(), 576, "local tableaus are distinct");

    let h_tableau = Tableau1 {
        imgx: Pauli1 { x: false, z: true, ph: 0 },
        imgz: Pauli1 { x: true, z: false, ph: 0 },
    };
    let cnot = cnot_tableau(true);
    let cnot_reversed = cnot_tableau(false);
    let hh = local_tableau2(&h_tableau, &h_tableau);
    let e2 = cnot.compose_after(&hh).compose_after(&cnot);
    let swap = Tableau2 { img: [X1, Z1, X0, Z0] };
    assert_eq!(
        cnot.compose_after(&cnot_reversed).compose_after(&cnot),
        swap,
        "three alternating CNOTs form a SWAP"
    );
    let class_tableaus = [Tableau2::identity(), cnot, e2, swap];

    // Enumerate every product L * E * R and verify the class sizes; this
    // certifies both that the decomposition covers the whole group and
    // that the (1, 9, 9, 1)/20 sampling weights are the true class sizes.
    let locals: Vec<Tableau2> = {
        let mut v = Vec::with_capacity(576);
        for ca in &one_qubit {
            for cb in &one_qubit {
                v.push(local_tableau2(&ca.tableau, &cb.tableau));
            }
        }
        v
    };
    let mut class_sizes = [0usize; 4];
    let mut all: HashSet<Tableau2> = HashSet::with_capacity(11520);
    for (k, class_tab) in class_tableaus.iter().enumerate() {
        let mut class_set: HashSet<Tableau2> = HashSet::new();
        for l in &locals {
            let le = l.compose_after(class_tab);
            for r in &locals {
                class_set.insert(le.compose_after(r));
            }
        }
        class_sizes[k] = class_set.len();
        all.extend(class_set);
    }
    assert_eq!(class_sizes, [576, 5184, 5184, 576], "two-qubit class sizes");
    assert_eq!(all.len(), 11520, "two-qubit Clifford group size");

    let mut right_cosets = Vec::with_capacity(4 * 576);
    for (k, class_tab) in class_tableaus.iter().enumerate() {
        for (c, cc) in one_qubit.iter().enumerate() {
            for (d, cd) in one_qubit.iter().enumerate() {
                let er = class_tab.compose_after(&local_tableau2(&cc.tableau, &cd.tableau));
                right_cosets.push((k, c, d, er.inverse()));
            }
        }
    }

    let hadamard = one_qubit
        .iter()
        .find(|c| {
            c.tableau == h_tableau
        })
        .map(|c| c.matrix.clone())
        .expect("H is in the single-qubit group");

    CliffordTables {
        one_qubit,
        hadamard,
        local_lookup,
        class_tableaus,
        class_sizes,
        right_cosets,
    }
}

/// The shared, lazily built group tables.
pub(crate) fn tables() -> &'static CliffordTables {
    static TABLES: OnceLock<CliffordTables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

impl CliffordTables {
    pub(crate) fn one_qubit(&self) -> &[OneQubitClifford] {
        &self.one_qubit
    }

    fn local(&self, pair: (usize, usize)) -> Tableau2 {
        local_tableau2(&self.one_qubit[pair.0].tableau, &self.one_qubit[pair.1].tableau)
    }

    pub(crate) fn element_tableau(&self, e: &TwoQubitClifford) -> Tableau2 {
        self.local(e.l)
            .compose_after(&self.class_tableaus[e.class])
            .compose_after(&self.local(e.r))
    }

    /// Draw one uniformly random two-qubit Clifford, already decomposed.
    /// Classes are drawn by size (1, 9, 9, 1)/20 and the local layers
    /// uniformly; within each class the factorization count is constant,
    /// so the element distribution is exactly uniform.
    pub(crate) fn sample(&self, rng: &mut impl Rng) -> TwoQubitClifford {
        let roll: u32 = rng.gen_range(0..20);
        let class = match roll {
            0 => 0,
            1..=9 => 1,
            10..=18 => 2,
            _ => 3,
        };
        let l = (rng.gen_range(0..24), rng.gen_range(0..24));
        let r = (rng.gen_range(0..24), rng.gen_range(0..24));
        TwoQubitClifford { l, class, r }
    }

    /// Decompose an arbitrary Clifford tableau into L * E * R form with the
    /// fewest CNOTs.
    pub(crate) fn compile(&self, t: &Tableau2) -> TwoQubitClifford {
        for (class, c, d, er_inv) in &self.right_cosets {
            let l_candidate = t.compose_after(er_inv);
            if let Some((ta, tb)) = as_local(&l_candidate) {
                if let Some(&(a, b)) = self.local_lookup.get(&(ta, tb)) {
                    return TwoQubitClifford { l: (a, b), class: *class, r: (*c, *d) };
                }
            }
        }
        unreachable!("every two-qubit Clifford decomposes over the four classes")
    }
}
