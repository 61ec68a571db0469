use proptest::prelude::*;
use qls_cli::io::{emit_presentation, parse_presentation};

fn coefficient() -> impl Strategy<Value = String> {
    prop_oneof![
        (-3i64..=3).prop_map(|c| format!("({c})")),
        Just("q".to_string()),
        Just("(q+1)".to_string()),
        Just("1/q".to_string()),
        Just("(q^2-1)/(2*q)".to_string()),
    ]
}

fn relation(degree: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((coefficient(), prop::collection::vec(prop::sample::select(vec!["x", "y", "w"]), degree)), 1..4)
        .prop_map(|terms| {
            terms.into_iter().map(|(c, w)| format!("{c}*{}", w.join("*"))).collect::<Vec<_>>().join(" + ")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emit_then_parse_is_stable(r2 in prop::collection::vec(relation(2), 0..3), r3 in prop::collection::vec(relation(3), 0..2)) {
        let mut text = "field q\nspace R\ngens x y w\n".to_string();
        for r in r2.iter().chain(&r3) {
            text.push_str(&format!("rel {r}\n"));
        }
        let p = parse_presentation(&text, 3).unwrap();
        let emitted = emit_presentation(&p).unwrap();
        let back = parse_presentation(&emitted, 3).unwrap();
        prop_assert!(p.same_ideal(&back).unwrap());
        prop_assert_eq!(emit_presentation(&back).unwrap(), emitted);
    }
}
