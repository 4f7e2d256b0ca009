//! Cross-validation of the Sylow-assembled dihedral cohomology against the
//! independent bar-resolution oracle, and of the period-2 subquotients
//! against the same oracle, on seeded random finite modules.

use bk_core::dihedral::{DihedralGroup, Subgroup};
use bk_core::dmodule::{random_dmodule, Constraint, GeneratorParams, Ring};
use bk_core::tate::{bar_resolution_oracle, cohomology_dihedral, tate_cyclic};

fn d(p: u64) -> DihedralGroup {
    DihedralGroup::new(p).unwrap()
}

/// Small finite modules at p = 3 sized for the degree-2 oracle.
fn oracle_params() -> GeneratorParams {
    GeneratorParams::new(Ring::Local(3))
        .with(Constraint::Finite)
        .rank_bound(4)
        .torsion_bound(27)
}

#[test]
fn dihedral_assembly_matches_bar_oracle_smoke() {
    let group = d(3);
    let params = oracle_params();
    for seed in 0..25u64 {
        let m = random_dmodule(group, &params, seed).unwrap();
        for degree in [1i64, 2] {
            let assembled = cohomology_dihedral(&m, degree).unwrap();
            let oracle = bar_resolution_oracle(&m, Subgroup::Full, degree as u32).unwrap();
            assert_eq!(
                assembled.structure, oracle,
                "H^{degree}(D, M) mismatch at seed {seed}: {m:?}"
            );
        }
    }
}

#[test]
fn mixed_torsion_assembly_matches_bar_oracle_smoke() {
    let group = d(3);
    let params = GeneratorParams::new(Ring::Z)
        .with(Constraint::Finite)
        .rank_bound(3)
        .torsion_bound(12);
    for seed in 100..115u64 {
        let m = random_dmodule(group, &params, seed).unwrap();
        for degree in [1i64, 2] {
            let assembled = cohomology_dihedral(&m, degree).unwrap();
            let oracle = bar_resolution_oracle(&m, Subgroup::Full, degree as u32).unwrap();
            assert_eq!(
                assembled.structure, oracle,
                "H^{degree}(D, M) mismatch at seed {seed}: {m:?}"
            );
        }
    }
}

#[test]
fn cyclic_subquotients_match_bar_oracle_smoke() {
    let group = d(3);
    let params = oracle_params();
    for seed in 0..15u64 {
        let m = random_dmodule(group, &params, seed).unwrap();
        for h in [
            Subgroup::Trivial,
            Subgroup::Reflection(0),
            Subgroup::Reflection(1),
            Subgroup::Rotation,
        ] {
            for degree in [1i64, 2] {
                let quick = tate_cyclic(&m, h, degree).unwrap();
                let oracle = bar_resolution_oracle(&m, h, degree as u32).unwrap();
                assert_eq!(
                    quick.structure, oracle,
                    "H^{degree}({h:?}, M) mismatch at seed {seed}: {m:?}"
                );
            }
        }
    }
}
