//! Property tests for the algebraic invariants.

mod common;

use msd_core::analysis;
use msd_core::cli::codefile::{format_code_file, parse_code_file};
use msd_core::cws::{self, CwsCode, Graph};
use msd_core::distill::{self, BlochMap, CliffordRotation};
use msd_core::pauli::PauliOperator;
use msd_core::registry::CodeSpec;
use msd_core::{Bloch, Map};
use proptest::prelude::*;

fn pauli_string(n: usize) -> impl Strategy<Value = String> {
    (any::<bool>(), proptest::collection::vec(prop::sample::select(vec!['I', 'X', 'Y', 'Z']), n))
        .prop_map(|(neg, letters)| format!("{}{}", if neg { "-" } else { "" }, letters.into_iter().collect::<String>()))
}

fn pauli_pair() -> impl Strategy<Value = (String, String)> {
    (1usize..=4).prop_flat_map(|n| (pauli_string(n), pauli_string(n)))
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn code(max_n: usize) -> impl Strategy<Value = CwsCode> {
    graph(max_n).prop_flat_map(|g| (1u16..1 << g.n()).prop_map(move |w| CwsCode::new(g, w).unwrap()))
}

fn ball() -> impl Strategy<Value = Bloch> {
    (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0)
        .prop_filter("inside the Bloch ball", |(x, y, z)| x * x + y * y + z * z <= 1.0)
        .prop_map(|(x, y, z)| Bloch::new(x, y, z))
}

fn rotation() -> impl Strategy<Value = CliffordRotation> {
    prop::sample::select(CliffordRotation::all())
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pauli_product_matches_dense_matrices((a, b) in pauli_pair()) {
        let pa: PauliOperator = a.parse().unwrap();
        let pb: PauliOperator = b.parse().unwrap();
        let (ma, mb) = (common::pauli_matrix(&a), common::pauli_matrix(&b));
        let product = pa.multiply(&pb).unwrap().realize::<f64>();
        prop_assert!(common::max_abs_diff(&product, &ma.dot(&mb)) < 1e-12);
        let commutator = ma.dot(&mb) - mb.dot(&ma);
        let dense_commutes = commutator.iter().all(|v| v.norm() < 1e-12);
        prop_assert_eq!(pa.commutes(&pb).unwrap(), dense_commutes);
    }

    #[test]
    fn hermitian_pauli_strings_round_trip(s in (1usize..=8).prop_flat_map(pauli_string)) {
        let p: PauliOperator = s.parse().unwrap();
        prop_assert!(p.is_hermitian());
        prop_assert_eq!(p.to_string(), s);
        prop_assert_eq!(p.negate().negate(), p);
    }

    #[test]
    fn canonical_graph_ignores_labelling(g in graph(6), seed in any::<u64>()) {
        let n = g.n();
        let perms = cws::all_permutations(n);
        let perm = &perms[(seed % perms.len() as u64) as usize];
        let h = g.permute(perm);
        prop_assert_eq!(h.edge_count(), g.edge_count());
        prop_assert_eq!(cws::canonical_graph(&h), cws::canonical_graph(&g));
    }

    #[test]
    fn relabelling_qubits_leaves_the_map_unchanged(c in code(5), r in ball(), seed in any::<u64>()) {
        let perms = cws::all_permutations(c.n());
        let perm = &perms[(seed % perms.len() as u64) as usize];
        let a: Map = distill::compile_map(&CodeSpec::cws("a", c)).unwrap();
        let b: Map = distill::compile_map(&CodeSpec::cws("b", c.permute(perm))).unwrap();
        let (ea, eb) = (a.evaluate_raw(&r), b.evaluate_raw(&r));
        prop_assert!((ea.p_success() - eb.p_success()).abs() < 1e-10);
        if let (Some(oa), Some(ob)) = (ea.output(), eb.output()) {
            prop_assert!(oa.max_abs_diff(&ob) < 1e-10);
        }
    }

    #[test]
    fn canonical_bloch_is_idempotent_and_rotation_invariant(r in ball(), rot in rotation()) {
        let c = analysis::canonicalize_bloch(&r);
        prop_assert!(analysis::canonicalize_bloch(&c).max_abs_diff(&c) < 1e-12);
        prop_assert!(analysis::canonicalize_bloch(&rot.apply(&r)).max_abs_diff(&c) < 1e-12);
        // proper rotations flip signs in pairs, so only z may stay negative
        prop_assert!(c.x >= c.y - 1e-9 && c.y >= c.z.abs() - 1e-9, "{}", c);
        prop_assert!((c.norm() - r.norm()).abs() < 1e-12);
    }

    #[test]
    fn rotations_form_a_group(a in rotation(), b in rotation(), r in ball()) {
        let ab = a.compose(&b);
        prop_assert!(CliffordRotation::all().contains(&ab));
        prop_assert_eq!(ab.det(), 1);
        prop_assert!(ab.apply(&r).max_abs_diff(&a.apply(&b.apply(&r))) < 1e-12);
        prop_assert!(a.inverse().apply(&a.apply(&r)).max_abs_diff(&r) < 1e-12);
        prop_assert_eq!(a.label().parse::<CliffordRotation>().unwrap(), a);
    }

    #[test]
    fn maps_stay_in_the_bloch_ball(c in code(4), r in ball(), rot in rotation()) {
        let map: Map = distill::compile_map(&CodeSpec::cws("c", c)).unwrap();
        let eval = map.with_rotation(Some(rot)).step(&r);
        let ps = eval.p_success();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ps));
        if let Some(o) = eval.output() {
            prop_assert!(o.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn octahedron_is_closed_under_distillation(c in code(4), (x, y, z) in (-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0)) {
        let l1 = x.abs() + y.abs() + z.abs();
        prop_assume!(l1 > 1e-9);
        let s = if l1 > 1.0 { 1.0 / l1 } else { 1.0 };
        let r = Bloch::new(x * s, y * s, z * s);
        let map: Map = distill::compile_map(&CodeSpec::cws("c", c)).unwrap();
        if let Some(o) = map.evaluate_raw(&r).output() {
            prop_assert!(o.l1() <= 1.0 + 1e-9, "{} -> {}", r, o);
        }
    }

    #[test]
    fn code_files_round_trip(c in code(6), rot in proptest::option::of(rotation())) {
        let spec = CodeSpec::cws("p", c).with_correction(rot.filter(|r| !r.is_identity()));
        let back = parse_code_file("p", &format_code_file(&spec)).unwrap();
        prop_assert_eq!(back.body, spec.body);
        prop_assert_eq!(back.correction, spec.correction);
    }

    #[test]
    fn cws_kets_are_orthonormal(c in code(6)) {
        let b = cws::logical_basis::<f64>(&c);
        prop_assert!(b.check_orthonormal(1e-12).is_ok());
        let gens = cws::codespace_generators(&c).unwrap();
        for g in gens.generators() {
            for k in [&b.ket0, &b.ket1] {
                prop_assert!(cws::inner(k, &g.apply(k)).re > 1.0 - 1e-12);
            }
        }
    }
}
