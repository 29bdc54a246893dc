//! The shipped scenario corpus, generated in directive form.
//!
//! Expectations are filled in from closed-form answers (coset counts,
//! subgroup orders, character kernels, orbit counts), never from running
//! the pipeline.

use std::path::Path;

use qharm_core::actions::pauli_unitaries;
use qharm_core::numeric::{CMatrix, C64};
use qharm_core::scenario::Expectations;
use qharm_core::{FiniteGroup, HopfData};

use crate::schema::{
    ActionSpec, Cx, HopfTensors, MeasureSpec, MixturePart, ModuleSpec, QuantumGroupSpec,
    ScenarioFile, SCHEMA_VERSION,
};

fn expect(ergodic: Option<bool>, nondegenerate: Option<bool>, dim: usize) -> Expectations {
    Expectations {
        ergodic,
        nondegenerate,
        dim_harmonic: Some(dim),
    }
}

fn file(
    name: String,
    description: &str,
    quantum_group: QuantumGroupSpec,
    action: ActionSpec,
    measure: MeasureSpec,
    expect: Expectations,
) -> ScenarioFile {
    ScenarioFile {
        schema: SCHEMA_VERSION,
        name,
        description: Some(description.to_string()),
        quantum_group,
        action,
        measure,
        expect,
    }
}

fn functions(name: &str) -> QuantumGroupSpec {
    QuantumGroupSpec::FunctionAlgebra {
        group: Some(name.to_string()),
        table: None,
    }
}

fn group_algebra(name: &str) -> QuantumGroupSpec {
    QuantumGroupSpec::GroupAlgebra {
        group: Some(name.to_string()),
        table: None,
    }
}

/// Greedy generating set, identity excluded.
fn generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    for x in 1..g.order() {
        if g.generated_subgroup(&gens).binary_search(&x).is_err() {
            gens.push(x);
        }
    }
    gens
}

fn generating_measure(g: &FiniteGroup) -> MeasureSpec {
    let gens = generators(g);
    if gens.is_empty() {
        MeasureSpec::Counit {}
    } else {
        MeasureSpec::UniformOn { subset: gens }
    }
}

/// Largest proper non-trivial subgroup, if any.
fn largest_proper_subgroup(g: &FiniteGroup) -> Option<Vec<usize>> {
    g.subgroups()
        .into_iter()
        .filter(|k| k.len() > 1 && k.len() < g.order())
        .max_by_key(|k| k.len())
}

/// One subgroup per conjugacy class.
fn subgroup_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut reps = Vec::new();
    for k in g.subgroups() {
        if seen.contains(&k) {
            continue;
        }
        for x in 0..g.order() {
            let mut conj: Vec<usize> = k.iter().map(|&y| g.mul(g.mul(x, y), g.inv(x))).collect();
            conj.sort_unstable();
            if !seen.contains(&conj) {
                seen.push(conj);
            }
        }
        reps.push(k);
    }
    reps
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join("_")
}

fn cx_matrix(m: &CMatrix) -> Vec<Vec<Cx>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_real_rows(rows)
}

fn function_algebra_scenarios(name: &str, g: &FiniteGroup, out: &mut Vec<ScenarioFile>) {
    let n = g.order();
    let trivial = n == 1;
    let qg = || functions(name);
    out.push(file(
        format!("fn_{name}_counit"),
        "C(G) with the lazy walk ε: every function is harmonic",
        qg(),
        ActionSpec::Comultiplication {},
        MeasureSpec::Counit {},
        expect(Some(true), Some(trivial), n),
    ));
    out.push(file(
        format!("fn_{name}_haar"),
        "C(G) with the uniform measure",
        qg(),
        ActionSpec::Comultiplication {},
        MeasureSpec::Haar {},
        expect(Some(true), Some(true), 1),
    ));
    if n > 1 {
        out.push(file(
            format!("fn_{name}_generators"),
            "C(G) with the uniform measure on a generating set",
            qg(),
            ActionSpec::Comultiplication {},
            generating_measure(g),
            expect(Some(true), Some(true), 1),
        ));
        let cyclic = g.generated_subgroup(&[1]).len();
        out.push(file(
            format!("fn_{name}_point_mass_1"),
            "C(G) with a point mass; harmonic functions are constant on cosets of the cyclic subgroup",
            qg(),
            ActionSpec::Comultiplication {},
            MeasureSpec::PointMass { index: 1 },
            expect(Some(true), Some(cyclic == n), n / cyclic),
        ));
    }
    if let Some(k) = largest_proper_subgroup(g) {
        out.push(file(
            format!("fn_{name}_subgroup_{}", join(&k)),
            "C(G) with the uniform measure on a proper subgroup K: dim H = [G:K]",
            qg(),
            ActionSpec::Comultiplication {},
            MeasureSpec::UniformOn { subset: k.clone() },
            expect(Some(true), Some(false), n / k.len()),
        ));
    }
}

fn group_algebra_scenarios(name: &str, g: &FiniteGroup, out: &mut Vec<ScenarioFile>) {
    let n = g.order();
    let qg = || group_algebra(name);
    out.push(file(
        format!("grp_{name}_regular_character"),
        "C[G] with u = δ_e: fixed set trivial",
        qg(),
        ActionSpec::Comultiplication {},
        MeasureSpec::RegularCharacter {},
        expect(Some(true), Some(true), 1),
    ));
    out.push(file(
        format!("grp_{name}_trivial_character"),
        "C[G] with u ≡ 1: every element is harmonic",
        qg(),
        ActionSpec::Comultiplication {},
        MeasureSpec::Counit {},
        expect(Some(true), Some(n == 1), n),
    ));
    out.push(file(
        format!("grp_{name}_half_regular"),
        "C[G] with u = (1 + δ_e)/2: fixed set trivial",
        qg(),
        ActionSpec::Comultiplication {},
        MeasureSpec::Mixture {
            parts: vec![
                MixturePart {
                    weight: 0.5,
                    measure: MeasureSpec::Counit {},
                },
                MixturePart {
                    weight: 0.5,
                    measure: MeasureSpec::RegularCharacter {},
                },
            ],
        },
        expect(Some(true), Some(true), 1),
    ));
    if let Some(k) = largest_proper_subgroup(g) {
        out.push(file(
            format!("grp_{name}_subgroup_{}", join(&k)),
            "C[G] with u = 1_K for a subgroup K: dim H = |K|",
            qg(),
            ActionSpec::Comultiplication {},
            MeasureSpec::Indicator { subset: k.clone() },
            expect(Some(true), Some(false), k.len()),
        ));
    }
    let chars = g.linear_characters();
    if chars.len() > 1 {
        let chi = &chars[1];
        let kernel = chi
            .iter()
            .filter(|z| (*z - C64::new(1.0, 0.0)).norm() < 1e-9)
            .count();
        out.push(file(
            format!("grp_{name}_character_1"),
            "C[G] with a non-trivial linear character χ: dim H = |ker χ|",
            qg(),
            ActionSpec::Comultiplication {},
            MeasureSpec::Character { index: 1 },
            expect(Some(true), Some(kernel == 1), kernel),
        ));
    }
}

fn coset_space_scenarios(name: &str, g: &FiniteGroup, out: &mut Vec<ScenarioFile>) {
    for k in subgroup_classes(g) {
        out.push(file(
            format!("gset_{name}_cosets_of_{}", join(&k)),
            "transitive G-set G/K with a generating measure",
            functions(name),
            ActionSpec::CosetSpace {
                subgroup: k.clone(),
            },
            generating_measure(g),
            expect(Some(true), Some(true), 1),
        ));
    }
}

fn disjoint_union(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let off = a[0].len();
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .copied()
                .chain(rb.iter().map(|y| y + off))
                .collect()
        })
        .collect()
}

fn catalogue_group(name: &str) -> FiniteGroup {
    FiniteGroup::catalogue()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, g)| g)
        .expect("catalogue name")
}

fn extra_group_sets(out: &mut Vec<ScenarioFile>) {
    let two_orbits: [(&str, Vec<usize>, Vec<usize>); 4] = [
        ("Z3", vec![0, 1, 2], vec![0]),
        ("S3", vec![0, 1, 2], vec![0, 3]),
        ("Z4", vec![0, 2], vec![0]),
        ("D4", vec![0, 4], vec![0, 1, 2, 3]),
    ];
    for (name, k1, k2) in two_orbits {
        let g = catalogue_group(name);
        let act = disjoint_union(&g.coset_action(&k1), &g.coset_action(&k2));
        out.push(file(
            format!("gset_{name}_two_orbits"),
            "G-set with two orbits and a generating measure: one harmonic indicator per orbit",
            functions(name),
            ActionSpec::GroupSet { act },
            generating_measure(&g),
            expect(Some(false), Some(true), 2),
        ));
    }
    let z2 = catalogue_group("Z2");
    out.push(file(
        "gset_Z2_trivial_3_points".into(),
        "trivial G-set on three points",
        functions("Z2"),
        ActionSpec::GroupSet {
            act: vec![vec![0, 1, 2]; z2.order()],
        },
        MeasureSpec::Haar {},
        expect(Some(false), Some(true), 3),
    ));
    out.push(file(
        "gset_Z4_regular_point_mass_2".into(),
        "regular Z4-set driven by δ_2: two recurrent classes",
        functions("Z4"),
        ActionSpec::CosetSpace { subgroup: vec![0] },
        MeasureSpec::PointMass { index: 2 },
        expect(Some(true), Some(false), 2),
    ));
    out.push(file(
        "gset_S3_three_points_rotations".into(),
        "S3 on three points driven by the rotations only: degenerate yet dim H = 1",
        functions("S3"),
        ActionSpec::CosetSpace {
            subgroup: vec![0, 3],
        },
        MeasureSpec::UniformOn { subset: vec![1, 2] },
        expect(Some(true), Some(false), 1),
    ));
    out.push(file(
        "z2_walk".into(),
        "C(Z2) with the point mass at the generator",
        functions("Z2"),
        ActionSpec::Comultiplication {},
        MeasureSpec::PointMass { index: 1 },
        expect(Some(true), Some(true), 1),
    ));
}

fn conjugation(
    name: &str,
    n: usize,
    unitaries: &[CMatrix],
    measure: MeasureSpec,
    scenario: &str,
    description: &str,
    e: Expectations,
) -> ScenarioFile {
    file(
        scenario.to_string(),
        description,
        functions(name),
        ActionSpec::Conjugation {
            n,
            unitaries: unitaries.iter().map(cx_matrix).collect(),
        },
        measure,
        e,
    )
}

fn matrix_scenarios(out: &mut Vec<ScenarioFile>) {
    let pauli = pauli_unitaries();
    out.push(conjugation(
        "Z2xZ2",
        2,
        &pauli,
        MeasureSpec::Haar {},
        "pauli_haar",
        "Pauli conjugation action on M_2, uniform measure",
        expect(Some(true), Some(true), 1),
    ));
    out.push(conjugation(
        "Z2xZ2",
        2,
        &pauli,
        MeasureSpec::UniformOn { subset: vec![1, 2] },
        "pauli_generators",
        "Pauli conjugation action on M_2 driven by Z and X",
        expect(Some(true), Some(true), 1),
    ));
    out.push(conjugation(
        "Z2xZ2",
        2,
        &pauli,
        MeasureSpec::PointMass { index: 1 },
        "pauli_point_mass_z",
        "Pauli conjugation action on M_2 driven by Z alone: diagonal matrices are harmonic",
        expect(Some(true), Some(false), 2),
    ));

    let rot = |k: usize, order: usize| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / order as f64;
        real(&[&[t.cos(), -t.sin()], &[t.sin(), t.cos()]])
    };
    let refl = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let dihedral = |order: usize| -> Vec<CMatrix> {
        (0..2 * order)
            .map(|x| {
                let r = rot(x % order, order);
                if x >= order {
                    r.matmul(&refl).expect("2x2")
                } else {
                    r
                }
            })
            .collect()
    };
    out.push(conjugation(
        "S3",
        2,
        &dihedral(3),
        generating_measure(&catalogue_group("S3")),
        "s3_irrep_on_m2",
        "S3 acting on M_2 through its two-dimensional irreducible representation",
        expect(Some(true), Some(true), 1),
    ));
    out.push(conjugation(
        "D4",
        2,
        &dihedral(4),
        generating_measure(&catalogue_group("D4")),
        "d4_irrep_on_m2",
        "D4 acting on M_2 through its two-dimensional irreducible representation",
        expect(Some(true), Some(true), 1),
    ));

    let i = C64::new(0.0, 1.0);
    let one = CMatrix::identity(2);
    let qi = CMatrix::from_fn(2, 2, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if r == 0 {
            i
        } else {
            -i
        }
    });
    let qj = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let qk = qi.matmul(&qj).expect("2x2");
    let neg = |m: &CMatrix| m.scale(C64::new(-1.0, 0.0));
    let quaternion = vec![
        one.clone(),
        neg(&one),
        qi.clone(),
        neg(&qi),
        qj.clone(),
        neg(&qj),
        qk.clone(),
        neg(&qk),
    ];
    out.push(conjugation(
        "Q8",
        2,
        &quaternion,
        generating_measure(&catalogue_group("Q8")),
        "q8_on_m2",
        "Q8 acting on M_2 by conjugation with unit quaternions",
        expect(Some(true), Some(true), 1),
    ));

    let shift = CMatrix::from_fn(3, 3, |r, c| {
        if r == (c + 1) % 3 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let shifts = vec![
        CMatrix::identity(3),
        shift.clone(),
        shift.matmul(&shift).expect("3x3"),
    ];
    out.push(conjugation(
        "Z3",
        3,
        &shifts,
        MeasureSpec::PointMass { index: 1 },
        "z3_shift_on_m3",
        "Z3 acting on M_3 by the cyclic shift: the commutant of the shift is harmonic",
        expect(Some(false), Some(true), 3),
    ));
    let phase = vec![CMatrix::identity(2), refl.clone()];
    out.push(conjugation(
        "Z2",
        2,
        &phase,
        MeasureSpec::PointMass { index: 1 },
        "z2_phase_on_m2",
        "Z2 acting on M_2 by conjugation with diag(1, -1)",
        expect(Some(false), Some(true), 2),
    ));
    out.push(file(
        "z3_trivial_on_m2".into(),
        "trivial action of Z3 on M_2",
        functions("Z3"),
        ActionSpec::Trivial {
            module: ModuleSpec::MatrixAlgebra { n: 2 },
        },
        MeasureSpec::Haar {},
        expect(Some(false), Some(true), 4),
    ));
}

fn constructor_scenarios(out: &mut Vec<ScenarioFile>) {
    out.push(file(
        "dual_fn_S3_half_regular".into(),
        "dual of C(S3), i.e. C[S3], with u = (1 + δ_e)/2",
        QuantumGroupSpec::Dual {
            of: Box::new(functions("S3")),
        },
        ActionSpec::Comultiplication {},
        MeasureSpec::Mixture {
            parts: vec![
                MixturePart {
                    weight: 0.5,
                    measure: MeasureSpec::Counit {},
                },
                MixturePart {
                    weight: 0.5,
                    measure: MeasureSpec::RegularCharacter {},
                },
            ],
        },
        expect(Some(true), Some(true), 1),
    ));
    out.push(file(
        "dual_grp_Z4_walk".into(),
        "dual of C[Z4], i.e. C(Z4), with a point mass at a generator",
        QuantumGroupSpec::Dual {
            of: Box::new(group_algebra("Z4")),
        },
        ActionSpec::Comultiplication {},
        MeasureSpec::PointMass { index: 1 },
        expect(Some(true), Some(true), 1),
    ));
    let z2 = HopfData::function_algebra(&catalogue_group("Z2")).expect("C(Z2)");
    out.push(file(
        "z2_walk_explicit".into(),
        "C(Z2) given by explicit structure tensors",
        QuantumGroupSpec::Load {
            path: None,
            data: Some(Box::new(HopfTensors::from_hopf(&z2))),
        },
        ActionSpec::Comultiplication {},
        MeasureSpec::Weights {
            weights: vec![0.25, 0.75],
        },
        expect(Some(true), Some(true), 1),
    ));
}

/// Every shipped scenario, in a fixed order.
pub fn corpus() -> Vec<ScenarioFile> {
    let mut out = Vec::new();
    for (name, g) in FiniteGroup::catalogue() {
        function_algebra_scenarios(&name, &g, &mut out);
        group_algebra_scenarios(&name, &g, &mut out);
        coset_space_scenarios(&name, &g, &mut out);
    }
    extra_group_sets(&mut out);
    matrix_scenarios(&mut out);
    constructor_scenarios(&mut out);
    out
}

/// Writes the corpus as `<name>.json` files; returns the number written.
pub fn export(dir: &Path) -> std::io::Result<usize> {
    std::fs::create_dir_all(dir)?;
    let files = corpus();
    for f in &files {
        std::fs::write(dir.join(format!("{}.json", f.name)), f.to_json() + "\n")?;
    }
    Ok(files.len())
}
