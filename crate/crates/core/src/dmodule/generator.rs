//! Seeded random D-modules for the property-test harness.
//!
//! Modules are assembled as direct sums from a library of building blocks
//! (permutation lattices, the sign and rotation lattices, torsion blocks,
//! and two non-split extensions), then disguised by a random unimodular
//! change of presentation. Every output is passed through the full module
//! validator before it is returned.

use num::{BigInt, One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{stack_diag_blocks, DModule, Ring};
use crate::dihedral::{DihedralGroup, GroupElement, Subgroup};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;

/// Constraints on the generated module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// No free part.
    Finite,
    /// The torsion subgroup is fixed pointwise by the rotation subgroup.
    TorsionGTrivial,
    /// No torsion at all.
    TorsionFree,
    /// The p-primary torsion is cyclic.
    TorsionCyclic,
}

#[derive(Clone, Debug)]
pub struct GeneratorParams {
    pub ring: Ring,
    /// Upper bound on the number of generators of the presentation.
    pub rank_bound: usize,
    /// Upper bound on torsion exponents.
    pub torsion_bound: u64,
    pub constraints: Vec<Constraint>,
}

impl GeneratorParams {
    pub fn new(ring: Ring) -> Self {
        GeneratorParams {
            ring,
            rank_bound: 8,
            torsion_bound: 27,
            constraints: vec![],
        }
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn rank_bound(mut self, b: usize) -> Self {
        self.rank_bound = b;
        self
    }

    pub fn torsion_bound(mut self, b: u64) -> Self {
        self.torsion_bound = b;
        self
    }

    fn has(&self, c: Constraint) -> bool {
        self.constraints.contains(&c)
    }
}

/// One building block: a small valid module given by (relations, T, S).
struct Block {
    relations: IntMatrix,
    t: IntMatrix,
    s: IntMatrix,
    /// rank of the free part
    free_rank: usize,
    /// does the rotation subgroup fix the torsion pointwise?
    torsion_g_trivial: bool,
    has_p_torsion: bool,
}

fn perm_matrices(group: DihedralGroup, h: Subgroup) -> (IntMatrix, IntMatrix) {
    // left multiplication on left cosets gH
    let h_elems = group.subgroup_elements(h);
    let canon = |g: GroupElement| -> GroupElement {
        h_elems
            .iter()
            .map(|&x| group.mul(g, x))
            .min_by_key(|e| (e.flip, e.rotation))
            .unwrap()
    };
    let mut cosets: Vec<GroupElement> = group.elements().iter().map(|&g| canon(g)).collect();
    cosets.sort_by_key(|e| (e.flip, e.rotation));
    cosets.dedup();
    let n = cosets.len();
    let mat = |g: GroupElement| {
        IntMatrix::from_fn(n, n, |i, j| {
            if canon(group.mul(g, cosets[j])) == cosets[i] {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    };
    (mat(group.tau()), mat(group.sigma()))
}

fn free_block(t: IntMatrix, s: IntMatrix) -> Block {
    let n = t.rows();
    Block {
        relations: IntMatrix::zeros(n, 0),
        t,
        s,
        free_rank: n,
        torsion_g_trivial: true,
        has_p_torsion: false,
    }
}

/// Same underlying action, with every generator killed by `d`.
fn torsion_of(b: &Block, d: u64, p: u64) -> Block {
    let n = b.t.rows();
    let g_trivial = {
        // torsion = whole block; check t acts trivially
        let diff = b.t.sub(&IntMatrix::identity(n));
        let rel = IntMatrix::scalar(n, &BigInt::from(d));
        crate::exactalg::spans(&rel, &diff)
    };
    let has_p = d % p == 0;
    Block {
        relations: IntMatrix::scalar(n, &BigInt::from(d)),
        t: b.t.clone(),
        s: b.s.clone(),
        free_rank: 0,
        torsion_g_trivial: g_trivial,
        has_p_torsion: has_p,
    }
}

/// Z x + Z/q t with t(x) = x + t, s = diag(e, -e); valid when q = p.
fn nonsplit_lattice(p: u64, sign: bool) -> Block {
    let (a, b) = if sign { (-1, 1) } else { (1, -1) };
    Block {
        relations: IntMatrix::from_i64(2, 1, &[0, p as i64]),
        t: IntMatrix::from_i64(2, 2, &[1, 0, 1, 1]),
        s: IntMatrix::from_i64(2, 2, &[a, 0, 0, b]),
        free_rank: 1,
        torsion_g_trivial: true,
        has_p_torsion: true,
    }
}

/// Z/p^2 + Z/p with a unipotent t; indecomposable finite block.
fn nonsplit_finite(p: u64, sign: bool) -> Block {
    let (a, b) = if sign { (-1, 1) } else { (1, -1) };
    let p2 = (p * p) as i64;
    Block {
        relations: IntMatrix::from_i64(2, 2, &[p2, 0, 0, p as i64]),
        t: IntMatrix::from_i64(2, 2, &[1, 0, 1, 1]),
        s: IntMatrix::from_i64(2, 2, &[a, 0, 0, b]),
        free_rank: 0,
        torsion_g_trivial: false, // t moves the first generator
        has_p_torsion: true,
    }
}

/// The rank p-1 rotation lattice Z[z] (z a primitive p-th root of unity),
/// t = multiplication by z, s = inversion.
fn omega_block(p: u64) -> Block {
    let n = (p - 1) as usize;
    let t = IntMatrix::from_fn(n, n, |i, j| {
        if j + 1 < n {
            // z * z^j = z^{j+1}
            if i == j + 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else {
            // z * z^{p-2} = z^{p-1} = -(1 + z + ... + z^{p-2})
            BigInt::from(-1)
        }
    });
    let s = IntMatrix::from_fn(n, n, |i, j| {
        if j == 0 {
            if i == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else if j == 1 {
            // z^-1 = z^{p-1} = -(1 + ... + z^{p-2})
            BigInt::from(-1)
        } else {
            // z^-j = z^{p-j}, and p-j <= p-2 here
            if i as u64 == p - j as u64 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
    });
    free_block(t, s)
}

fn torsion_exponents(rng: &mut ChaCha8Rng, params: &GeneratorParams, p: u64) -> Vec<u64> {
    // candidate exponents by ring
    let mut cands: Vec<u64> = Vec::new();
    match params.ring {
        Ring::Local(l) => {
            let mut q = l;
            while q <= params.torsion_bound {
                cands.push(q);
                q = q.saturating_mul(l);
            }
        }
        Ring::Z => {
            for l in [2u64, 3, 5, 7, p] {
                let mut q = l;
                while q <= params.torsion_bound {
                    cands.push(q);
                    q = q.saturating_mul(l);
                }
            }
        }
    }
    cands.sort_unstable();
    cands.dedup();
    if cands.is_empty() {
        cands.push(p.min(params.torsion_bound.max(2)));
    }
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| *cands.choose(rng).unwrap()).collect()
}

/// Deterministic random module; the same seed always yields the same module.
pub fn random_dmodule(
    group: DihedralGroup,
    params: &GeneratorParams,
    seed: u64,
) -> Result<DModule> {
    let p = group.p();
    if params.has(Constraint::Finite) && params.has(Constraint::TorsionFree) {
        return Err(Error::Unsatisfiable("finite and torsion-free".into()));
    }
    if let Ring::Local(l) = params.ring {
        if params.has(Constraint::Finite) && params.torsion_bound < l {
            return Err(Error::Unsatisfiable(format!(
                "finite {l}-local torsion needs torsion_bound >= {l}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut blocks: Vec<Block> = Vec::new();
    let mut rank_used = 0usize;
    let want_torsion = !params.has(Constraint::TorsionFree);
    let want_free = !params.has(Constraint::Finite);
    let g_trivial = params.has(Constraint::TorsionGTrivial);
    let p_cyclic = params.has(Constraint::TorsionCyclic);
    let local_at = params.ring.localized_prime();

    // free blocks available for this prime
    let free_choices: Vec<fn(DihedralGroup) -> Block> = vec![
        |_| free_block(IntMatrix::identity(1), IntMatrix::identity(1)),
        |_| free_block(IntMatrix::identity(1), IntMatrix::from_i64(1, 1, &[-1])),
        |g| omega_block(g.p()),
        |g| {
            let (t, s) = perm_matrices(g, Subgroup::Rotation);
            free_block(t, s)
        },
        |g| {
            let (t, s) = perm_matrices(g, Subgroup::Reflection(0));
            free_block(t, s)
        },
    ];

    let n_blocks = rng.gen_range(1..=3);
    for _ in 0..n_blocks {
        if rank_used >= params.rank_bound {
            break;
        }
        let make_torsion = want_torsion && (!want_free || rng.gen_bool(0.5));
        if make_torsion {
            let can_add_p_torsion =
                !p_cyclic || !blocks.iter().any(|b| b.has_p_torsion);
            // candidate torsion blocks
            let mut cands: Vec<Block> = Vec::new();
            for d in torsion_exponents(&mut rng, params, p) {
                let is_p_power = d % p == 0;
                if is_p_power && !can_add_p_torsion {
                    continue;
                }
                // cyclic blocks with trivial rotation action
                cands.push(torsion_of(
                    &free_block(IntMatrix::identity(1), IntMatrix::identity(1)),
                    d,
                    p,
                ));
                cands.push(torsion_of(
                    &free_block(IntMatrix::identity(1), IntMatrix::from_i64(1, 1, &[-1])),
                    d,
                    p,
                ));
                if !g_trivial {
                    // torsion with a genuine rotation action
                    let (t, s) = perm_matrices(group, Subgroup::Reflection(0));
                    let b = torsion_of(&free_block(t, s), d, p);
                    if !p_cyclic || !b.has_p_torsion {
                        cands.push(b);
                    }
                    let o = torsion_of(&omega_block(p), d, p);
                    if !p_cyclic || !o.has_p_torsion {
                        cands.push(o);
                    }
                }
            }
            if !g_trivial && can_add_p_torsion && local_at.map_or(true, |l| l == p) {
                let b = nonsplit_finite(p, rng.gen_bool(0.5));
                if !p_cyclic {
                    cands.push(b);
                }
            }
            if want_free && can_add_p_torsion && local_at.map_or(true, |l| l == p) {
                cands.push(nonsplit_lattice(p, rng.gen_bool(0.5)));
            }
            let cands: Vec<Block> = cands
                .into_iter()
                .filter(|b| {
                    b.t.rows() + rank_used <= params.rank_bound
                        && (!params.has(Constraint::Finite) || b.free_rank == 0)
                        && (!g_trivial || b.torsion_g_trivial)
                })
                .collect();
            if let Some(b) = pick(&mut rng, cands) {
                rank_used += b.t.rows();
                blocks.push(b);
            }
        } else if want_free {
            let f = free_choices.choose(&mut rng).unwrap()(group);
            if f.t.rows() + rank_used <= params.rank_bound {
                rank_used += f.t.rows();
                blocks.push(f);
            }
        }
    }

    // guarantee the constraints are actually witnessed
    if blocks.iter().all(|b| b.free_rank == 0) && params.has(Constraint::TorsionFree) {
        blocks.push(free_block(IntMatrix::identity(1), IntMatrix::identity(1)));
    }
    if params.has(Constraint::Finite) && blocks.is_empty() {
        let d = match params.ring {
            Ring::Local(l) => l,
            Ring::Z => p,
        };
        blocks.push(torsion_of(
            &free_block(IntMatrix::identity(1), IntMatrix::identity(1)),
            d,
            p,
        ));
    }
    if blocks.is_empty() {
        blocks.push(free_block(IntMatrix::identity(1), IntMatrix::identity(1)));
    }

    // direct sum
    let mut relations = IntMatrix::zeros(0, 0);
    let mut t = IntMatrix::zeros(0, 0);
    let mut s = IntMatrix::zeros(0, 0);
    for b in &blocks {
        relations = stack_diag_blocks(&relations, &b.relations);
        t = stack_diag_blocks(&t, &b.t);
        s = stack_diag_blocks(&s, &b.s);
    }

    // disguise the presentation by a random unimodular change of basis
    let n = t.rows();
    let (u, uinv) = random_unimodular(&mut rng, n);
    let relations = u.mul(&relations);
    let t = u.mul(&t.mul(&uinv));
    let s = u.mul(&s.mul(&uinv));

    let module = DModule::new(group, params.ring, relations, t, s)?;
    debug_assert!(validate_constraints(&module, params));
    Ok(module)
}

fn pick(rng: &mut ChaCha8Rng, cands: Vec<Block>) -> Option<Block> {
    if cands.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..cands.len());
    cands.into_iter().nth(i)
}

/// Random unimodular matrix as a short product of elementary operations,
/// returned with its inverse.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut uinv = IntMatrix::identity(n);
    if n < 2 {
        return (u, uinv);
    }
    let ops = n + rng.gen_range(0..=n);
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = BigInt::from(*[-1i64, 1].choose(rng).unwrap());
        // u: row_i += c row_j; uinv: col_j -= c col_i
        for k in 0..n {
            let add = &u[(j, k)] * &c;
            u[(i, k)] += add;
            let sub = &uinv[(k, i)] * &c;
            uinv[(k, j)] -= sub;
        }
    }
    debug_assert_eq!(u.mul(&uinv), IntMatrix::identity(n));
    (u, uinv)
}

fn validate_constraints(m: &DModule, params: &GeneratorParams) -> bool {
    let st = m.structure();
    for c in &params.constraints {
        let ok = match c {
            Constraint::Finite => st.is_finite(),
            Constraint::TorsionFree => st.torsion.is_empty(),
            Constraint::TorsionGTrivial => {
                let tor = m.torsion_lattice();
                let id = IntMatrix::identity(m.gens());
                let moved = m.t_action().sub(&id).mul(&tor);
                crate::exactalg::spans(m.relations(), &moved)
            }
            Constraint::TorsionCyclic => {
                let p_part = m.torsion_part().localize(m.p());
                p_part.torsion.len() <= 1
            }
        };
        if !ok {
            return false;
        }
    }
    true
}
