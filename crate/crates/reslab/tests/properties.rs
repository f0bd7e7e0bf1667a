//! Randomized invariants over small power-weighted networks. Tolerances are
//! slack over the solver's own stopping rule, not statements about math.

use proptest::prelude::*;

use reslab::convex::{apply_contraction, NormalContraction, ScalarConvex};
use reslab::forms::{DualVector, NetworkForm, VertexVector};
use reslab::io::{EdgeEntry, HyperedgeEntry, NetworkFile};
use reslab::resistance::{conjugate, elementary_resistance, luxemburg, orlicz, t_resistance};
use reslab::solver::SolveConfig;
use reslab::verify::{all_vertex_triples, check_triangle};
use reslab::ExtNonNeg;

fn cfg() -> SolveConfig {
    SolveConfig::default()
}

/// Chain of 2..=4 vertices with power weights, optionally closed into a
/// cycle. Always connected, always finite on finite vectors.
fn form_strategy() -> impl Strategy<Value = NetworkForm> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0.1f64..4.0, 1.0f64..3.0), n - 1),
                any::<bool>(),
            )
        })
        .prop_map(|(n, weights, close)| {
            let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut edges: Vec<(String, String, ScalarConvex)> = weights
                .iter()
                .enumerate()
                .map(|(i, &(c, p))| {
                    (
                        labels[i].clone(),
                        labels[i + 1].clone(),
                        ScalarConvex::power(c, p).unwrap(),
                    )
                })
                .collect();
            if close && n > 2 {
                edges.push((
                    labels[0].clone(),
                    labels[n - 1].clone(),
                    ScalarConvex::power(1.0, 2.0).unwrap(),
                ));
            }
            NetworkForm::graph(labels, edges).unwrap()
        })
}

/// A form plus `k` coordinate vectors sized to its class count.
fn form_and_vectors(k: usize) -> impl Strategy<Value = (NetworkForm, Vec<Vec<f64>>)> {
    form_strategy().prop_flat_map(move |form| {
        let n = form.class_count();
        let vectors = prop::collection::vec(prop::collection::vec(-5.0f64..5.0, n), k);
        (Just(form), vectors)
    })
}

fn contraction_strategy() -> impl Strategy<Value = NormalContraction> {
    prop_oneof![
        (1e-3f64..3.0).prop_map(|a| NormalContraction::min_with(a).unwrap()),
        (-3.0f64..3.0).prop_map(|b| NormalContraction::fold_at(b).unwrap()),
    ]
}

fn file_strategy() -> impl Strategy<Value = NetworkFile> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n, 0.1f64..4.0, 1.0f64..3.0), 0..4),
                prop::collection::vec(0.05f64..2.0, 0..2),
                any::<bool>(),
                any::<bool>(),
            )
        })
        .prop_map(|(n, raw_edges, mus, pin_first, boundary)| {
            let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges = raw_edges
                .into_iter()
                .filter(|(u, v, _, _)| u != v)
                .map(|(u, v, c, p)| EdgeEntry {
                    u: labels[u].clone(),
                    v: labels[v].clone(),
                    w: ScalarConvex::power(c, p).unwrap(),
                })
                .collect();
            let hyperedges = mus
                .into_iter()
                .map(|mu| HyperedgeEntry { vertices: labels.clone(), mu })
                .collect();
            NetworkFile {
                vertices: labels.clone(),
                edges,
                hyperedges,
                dirichlet: if pin_first { vec![labels[0].clone()] } else { vec![] },
                identify: vec![],
                boundary,
                negative_control: None,
            }
        })
}

fn finite(e: ExtNonNeg) -> f64 {
    match e {
        ExtNonNeg::Finite(v) => v,
        ExtNonNeg::Infinite => panic!("expected a finite energy"),
    }
}

proptest! {
    #[test]
    fn energy_convex_along_segments(
        (form, vs) in form_and_vectors(2),
        theta in 0.0f64..=1.0,
    ) {
        let ef = finite(form.evaluate(&VertexVector::from_class_values(&form, vs[0].clone())?)?);
        let eg = finite(form.evaluate(&VertexVector::from_class_values(&form, vs[1].clone())?)?);
        let mix: Vec<f64> = vs[0]
            .iter()
            .zip(&vs[1])
            .map(|(a, b)| theta * a + (1.0 - theta) * b)
            .collect();
        let em = finite(form.evaluate(&VertexVector::from_class_values(&form, mix)?)?);
        let rhs = theta * ef + (1.0 - theta) * eg;
        prop_assert!(em <= rhs + 1e-9 * (1.0 + rhs), "E(mix) = {em} above {rhs}");
    }

    #[test]
    fn contractions_never_raise_energy(
        (form, vs) in form_and_vectors(1),
        c in contraction_strategy(),
    ) {
        let e = finite(form.evaluate(&VertexVector::from_class_values(&form, vs[0].clone())?)?);
        let contracted = apply_contraction(&c, &vs[0]);
        let ec = finite(form.evaluate(&VertexVector::from_class_values(&form, contracted)?)?);
        prop_assert!(ec <= e + 1e-9 * (1.0 + e), "{c:?} raised energy {e} to {ec}");
    }

    #[test]
    fn single_edge_tilt_matches_closed_form(
        c in 0.25f64..4.0,
        p in 1.25f64..3.0,
        t in 0.1f64..3.0,
    ) {
        let form = NetworkForm::graph(
            vec!["x".into(), "y".into()],
            vec![("x".into(), "y".into(), ScalarConvex::power(c, p).unwrap())],
        )
        .unwrap();
        let got = finite(t_resistance(&form, "x", "y", t, &cfg())?.value);
        let q = p / (p - 1.0);
        let want = (p - 1.0) / p * t.powf(q) * c.powf(-1.0 / (p - 1.0));
        prop_assert!(
            (got - want).abs() <= 1e-6 * (1.0 + want),
            "solver {got}, closed form {want}"
        );
    }

    #[test]
    fn parse_inverts_render(file in file_strategy()) {
        let text = file.render();
        let back = NetworkFile::parse(&text).unwrap();
        prop_assert_eq!(back, file);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn luxemburg_scales_absolutely(
        (form, vs) in form_and_vectors(1),
        s in 0.25f64..4.0,
        negate in any::<bool>(),
    ) {
        let cfg = cfg();
        let f = VertexVector::from_class_values(&form, vs[0].clone())?;
        let base = finite(luxemburg(&form, &f, &cfg)?.value);
        let sign = if negate { -s } else { s };
        let scaled =
            VertexVector::from_class_values(&form, vs[0].iter().map(|v| v * sign).collect())?;
        let got = finite(luxemburg(&form, &scaled, &cfg)?.value);
        let want = s * base;
        prop_assert!((got - want).abs() <= 1e-5 * (1.0 + want), "got {got}, want {want}");
    }

    #[test]
    fn orlicz_between_gauge_and_twice_gauge((form, vs) in form_and_vectors(1)) {
        let cfg = cfg();
        let f = VertexVector::from_class_values(&form, vs[0].clone())?;
        let lux = finite(luxemburg(&form, &f, &cfg)?.value);
        let orl = finite(orlicz(&form, &f, &cfg)?.value);
        prop_assert!(orl >= lux - 1e-6 * (1.0 + lux), "orlicz {orl} below gauge {lux}");
        prop_assert!(
            orl <= 2.0 * lux + 1e-6 * (1.0 + lux),
            "orlicz {orl} above twice the gauge {lux}"
        );
    }

    #[test]
    fn fenchel_young_bound((form, vs) in form_and_vectors(2)) {
        let cfg = cfg();
        let f = VertexVector::from_class_values(&form, vs[0].clone())?;
        // Center the dual vector: a nonzero sum forces an infinite conjugate
        // on these Dirichlet-free forms and the bound degenerates.
        let mean = vs[1].iter().sum::<f64>() / vs[1].len() as f64;
        let phi_values: Vec<f64> = vs[1].iter().map(|v| v - mean).collect();
        let phi = DualVector::from_class_values(&form, phi_values.clone())?;
        let star = conjugate(&form, &phi, &cfg)?;
        if let (ExtNonNeg::Finite(st), false) = (star.value, star.budget_exhausted()) {
            let e = finite(form.evaluate(&f)?);
            let lhs: f64 = phi_values.iter().zip(f.values()).map(|(a, b)| a * b).sum();
            let rhs = e + st;
            prop_assert!(lhs <= rhs + 1e-6 * (1.0 + rhs), "pairing {lhs} above {rhs}");
        }
    }

    #[test]
    fn resistance_is_symmetric((form, _) in form_and_vectors(0)) {
        let cfg = cfg();
        let labels = form.vertex_labels().to_vec();
        let (x, y) = (labels[0].as_str(), labels[labels.len() - 1].as_str());
        let fwd = finite(elementary_resistance(&form, x, y, &cfg)?.value);
        let bwd = finite(elementary_resistance(&form, y, x, &cfg)?.value);
        prop_assert!((fwd - bwd).abs() <= 1e-6 * (1.0 + fwd), "R {fwd} vs reversed {bwd}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn triangle_inequality_holds(form in form_strategy(), t in 0.1f64..4.0) {
        let triples = all_vertex_triples(&form);
        let report = check_triangle(&form, t, &triples, &cfg(), 1e-5).unwrap();
        prop_assert!(report.passed, "violation {} at {:?}", report.worst_violation, report.witness);
    }
}
