//! Extended affine element arithmetic: group axioms, agreement of the three
//! length computations, length-zero structure, reduced words, and the text
//! format.

use affine_weyl::rootdata::{RootSystem, TypeLabel};
use affine_weyl::ExtAffineElement;

fn sys(label: TypeLabel) -> RootSystem {
    RootSystem::new(label)
}

#[test]
fn group_axioms_on_samples() {
    let rs = sys(TypeLabel::A2);
    let samples: Vec<ExtAffineElement> = [
        "e",
        "s0",
        "s1",
        "t[1,0]",
        "t[-2,3]*s1*s2",
        "tc[2,2]*d1",
        "s0*s1*s0*d1",
        "t[1,1]*s2*s1*s2",
    ]
    .iter()
    .map(|s| rs.parse_element(s).unwrap())
    .collect();
    for a in &samples {
        assert_eq!(rs.mul(a, &rs.identity_elem()), *a);
        assert_eq!(rs.mul(&rs.identity_elem(), a), *a);
        assert_eq!(rs.mul(a, &rs.inv(a)), rs.identity_elem());
        assert_eq!(rs.mul(&rs.inv(a), a), rs.identity_elem());
        for b in &samples {
            for c in &samples {
                let ab_c = rs.mul(&rs.mul(a, b), c);
                let a_bc = rs.mul(a, &rs.mul(b, c));
                assert_eq!(ab_c, a_bc);
            }
        }
    }
}

#[test]
fn affine_reflection_zero_is_highest_coroot_translation_times_reflection() {
    let rs = sys(TypeLabel::A2);
    // In A2 the reflection at the highest root is s1 s2 s1 and its coroot is
    // alpha_1^v + alpha_2^v.
    let expected = rs.parse_element("tc[1,1]*s1*s2*s1").unwrap();
    assert_eq!(rs.affine_reflection(0), expected);
    for label in [TypeLabel::A1, TypeLabel::B2, TypeLabel::G2, TypeLabel::C3] {
        let rs = sys(label);
        let s0 = rs.affine_reflection(0);
        assert_eq!(rs.length(&s0), 1, "{label}");
        assert_eq!(rs.mul(&s0, &s0), rs.identity_elem(), "{label}");
    }
}

#[test]
fn conjugating_a_translation_applies_the_linear_part() {
    let rs = sys(TypeLabel::A2);
    let t = rs.parse_element("t[1,0]").unwrap();
    let s0t = rs.conj_by_simple(&t, 0);
    // s0 t^v s0 = t^{s_theta(v)}: a translation again.
    assert_eq!(s0t.finite, 0);
    assert_eq!(s0t.twist, 0);
    let theta = rs.highest_reflection();
    assert_eq!(s0t.translation, rs.act(theta, &t.translation));
}

#[test]
fn three_length_functions_agree_on_small_balls() {
    // Exhaustive at this scale for one rank-1 and one rank-2 type with
    // twists; the full sweep lives in the acceptance suite.
    for label in [TypeLabel::A1, TypeLabel::A2] {
        let rs = sys(label);
        let all = rs.elements_up_to_length(5, true);
        assert!(!all.is_empty());
        for x in &all {
            let l = rs.length(x);
            assert!(l <= 5);
            assert_eq!(rs.length_by_hyperplanes(x), l, "{label}");
            assert_eq!(rs.length_by_word(x), l, "{label}");
        }
    }
}

#[test]
fn translation_lengths_in_rank_one() {
    let rs = sys(TypeLabel::A1);
    for m in -4i64..=4 {
        let t = rs.from_parts(vec![m], 0, 0);
        assert_eq!(rs.length(&t) as i64, m.abs());
        let ts = rs.mul(&t, &rs.simple_elem(1));
        assert_eq!(rs.length(&ts) as i64, (m - 1).abs());
    }
}

#[test]
fn twist_does_not_change_length() {
    let rs = sys(TypeLabel::A2);
    for x in rs.elements_up_to_length(4, false) {
        let xd = rs.mul(&x, &rs.twist_elem(1));
        assert_eq!(rs.length(&xd), rs.length(&x));
        assert_eq!(rs.length_by_hyperplanes(&xd), rs.length(&x));
    }
}

#[test]
fn length_zero_elements_form_the_expected_group() {
    let expected = [
        (TypeLabel::A1, 2, 2),
        (TypeLabel::A2, 3, 6),
        (TypeLabel::A3, 4, 8),
        (TypeLabel::B2, 2, 2),
        (TypeLabel::C2, 2, 2),
        (TypeLabel::D3, 4, 8),
        (TypeLabel::G2, 1, 1),
    ];
    for (label, plain, twisted) in expected {
        let rs = sys(label);
        let omega = rs.omega_elements(false);
        assert_eq!(omega.len(), plain, "{label}");
        let full = rs.omega_elements(true);
        assert_eq!(full.len(), twisted, "{label}");
        // Closed under multiplication and inverse.
        for a in &full {
            assert!(full.contains(&rs.inv(a)), "{label}");
            for b in &full {
                assert!(full.contains(&rs.mul(a, b)), "{label}");
            }
        }
        // Translation parts of the untwisted part represent every P/Q class.
        let classes: std::collections::BTreeSet<Vec<i64>> =
            omega.iter().map(|w| rs.coset_of(&w.translation)).collect();
        assert_eq!(classes.len(), plain, "{label}");
    }
}

#[test]
fn length_zero_elements_permute_the_affine_reflections() {
    for label in [TypeLabel::A2, TypeLabel::A3, TypeLabel::B2] {
        let rs = sys(label);
        let refls: Vec<ExtAffineElement> = rs
            .simple_affine_reflections()
            .into_iter()
            .map(|r| r.element)
            .collect();
        for w in rs.omega_elements(true) {
            for s in &refls {
                let c = rs.conj(s, &w);
                assert!(refls.contains(&c), "{label}");
            }
        }
    }
}

#[test]
fn descents_and_reduced_words() {
    let rs = sys(TypeLabel::A2);
    for x in rs.elements_up_to_length(5, true) {
        let l = rs.length(&x);
        let rw = rs.reduced_word(&x);
        assert_eq!(rw.letters.len(), l);
        assert_eq!(rs.length(&rw.tail), 0);
        assert_eq!(rs.from_reduced_word(&rw), x);
        let descents = rs.descents(&x);
        if l == 0 {
            assert!(descents.is_empty());
        } else {
            assert_eq!(rw.letters[0], descents[0]);
            // Every descent really drops the length by one.
            for &i in &descents {
                let y = rs.mul(&rs.affine_reflection(i), &x);
                assert_eq!(rs.length(&y), l - 1);
            }
        }
    }
}

#[test]
fn ball_sizes_in_rank_one() {
    // In the rank-1 extended group, each positive length is attained by
    // exactly four elements and length zero by two.
    let rs = sys(TypeLabel::A1);
    for max in 0..=6 {
        let n = rs.elements_up_to_length(max, true).len();
        assert_eq!(n, 2 + 4 * max);
    }
}

#[test]
fn element_order_is_total_and_stable() {
    let rs = sys(TypeLabel::A2);
    let all = rs.elements_up_to_length(3, true);
    for pair in all.windows(2) {
        assert_eq!(
            rs.cmp_elements(&pair[0], &pair[1]),
            std::cmp::Ordering::Less
        );
    }
    // Lengths are non-decreasing along the sorted list.
    let lengths: Vec<usize> = all.iter().map(|x| rs.length(x)).collect();
    let mut sorted = lengths.clone();
    sorted.sort();
    assert_eq!(lengths, sorted);
}

#[test]
fn format_and_parse_round_trip() {
    let rs = sys(TypeLabel::A2);
    for x in rs.elements_up_to_length(5, true) {
        let text = rs.format_element(&x);
        let back = rs.parse_element(&text).unwrap();
        assert_eq!(back, x, "{text}");
    }
    assert_eq!(rs.format_element(&rs.identity_elem()), "e");
}

#[test]
fn parser_normalizes_products() {
    let rs = sys(TypeLabel::A2);
    assert_eq!(rs.parse_element("s1*s1").unwrap(), rs.identity_elem());
    assert_eq!(rs.parse_element("t[0,0]").unwrap(), rs.identity_elem());
    assert_eq!(
        rs.parse_element("s1*s2*s1").unwrap(),
        rs.parse_element("s2*s1*s2").unwrap()
    );
    // tc coordinates convert through the Cartan matrix.
    assert_eq!(
        rs.parse_element("tc[1,0]").unwrap(),
        rs.parse_element("t[2,-1]").unwrap()
    );
    // The twisted translation element used throughout the examples.
    let x = rs.parse_element("tc[2,2]*d1").unwrap();
    assert_eq!(x.translation, vec![2, 2]);
    assert_eq!(x.finite, 0);
    assert_eq!(x.twist, 1);
    // Whitespace around the expression is tolerated.
    assert_eq!(rs.parse_element(" e ").unwrap(), rs.identity_elem());
}

#[test]
fn parser_reports_positions() {
    let rs = sys(TypeLabel::A2);
    let err = rs.parse_element("s1*x2").unwrap_err();
    assert_eq!(err.pos, 3);
    let err = rs.parse_element("t[1").unwrap_err();
    assert_eq!(err.pos, 1); // points at the unterminated bracket
    let err = rs.parse_element("t[1,2,3]").unwrap_err();
    assert_eq!(err.pos, 2); // points at the over-long coordinate list
    let err = rs.parse_element("s9").unwrap_err();
    assert_eq!(err.pos, 1);
    let err = rs.parse_element("d7").unwrap_err();
    assert_eq!(err.pos, 1);
    let err = rs.parse_element("").unwrap_err();
    assert_eq!(err.pos, 0);
    let err = rs.parse_element("s1**s2").unwrap_err();
    assert_eq!(err.pos, 3);
}

#[test]
fn affine_action_composes() {
    let rs = sys(TypeLabel::B2);
    let p = rs.alcove_barycenter().to_vec();
    let a = rs.parse_element("s0*s1").unwrap();
    let b = rs.parse_element("t[1,1]*s2").unwrap();
    let ab = rs.mul(&a, &b);
    let via_product = rs.affine_act(&ab, &p);
    let via_steps = rs.affine_act(&a, &rs.affine_act(&b, &p));
    assert_eq!(via_product, via_steps);
}

#[test]
fn lengths_in_rank_three_spot_checks() {
    let rs = sys(TypeLabel::C3);
    for x in [
        "t[1,0,0]",
        "t[0,1,-1]*s1",
        "s0*s1*s2*s3",
        "t[1,1,1]*s2*s1",
    ] {
        let x = rs.parse_element(x).unwrap();
        let l = rs.length(&x);
        assert_eq!(rs.length_by_hyperplanes(&x), l);
        assert_eq!(rs.length_by_word(&x), l);
    }
}
