use gtoc12_core::format::{
    parse_solution_bytes, BurnArc, DiagnosticKind, Event, EventKind, ShipSection, StateEvent,
    StateRecord,
};
use gtoc12_core::{
    parse_solution, serialize_solution, validate_bytes, AsteroidCatalog, Epoch, Planet,
    SolutionDocument, ValidationConfig, Vector3,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e9f64..1e9,
        -50.0f64..50.0,
        Just(0.0),
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

fn vec3() -> impl Strategy<Value = Vector3> {
    (real(), real(), real()).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn record(t: f64) -> impl Strategy<Value = StateRecord> {
    (vec3(), vec3(), 0.0f64..3000.0)
        .prop_map(move |(r, v, m)| StateRecord::new(Epoch::from_mjd(t), r, v, m))
}

fn state_event(kind: EventKind, t: f64) -> impl Strategy<Value = Event> {
    (record(t), record(t)).prop_map(move |(pre, post)| Event::State(StateEvent { kind, pre, post }))
}

fn burn(t: f64) -> impl Strategy<Value = Event> {
    (1usize..6, 0.05f64..1.0, vec3()).prop_map(move |(n, last, u)| {
        let u = if u.norm() == 0.0 { Vector3::x() } else { u };
        let mut s: Vec<(Epoch, Vector3)> =
            (0..n).map(|k| (Epoch::from_mjd(t + k as f64), u)).collect();
        s.push((Epoch::from_mjd(t + n as f64 - 1.0 + last), u));
        Event::Burn(BurnArc::from_samples(&s))
    })
}

fn later(kind: u8, id: u32, t: f64) -> BoxedStrategy<Event> {
    match kind {
        0 => burn(t).boxed(),
        1 => state_event(EventKind::Flyby(Planet::Venus), t).boxed(),
        2 => state_event(EventKind::Flyby(Planet::Earth), t).boxed(),
        3 => state_event(EventKind::Flyby(Planet::Mars), t).boxed(),
        _ => state_event(EventKind::Rendezvous(id), t).boxed(),
    }
}

fn ship(ship_id: u32) -> impl Strategy<Value = ShipSection> {
    prop::collection::vec((0u8..5, 1u32..=60_000), 0..5).prop_flat_map(move |plan| {
        let mut events: Vec<BoxedStrategy<Event>> =
            vec![state_event(EventKind::Launch, 64500.0).boxed()];
        for (k, (kind, id)) in plan.into_iter().enumerate() {
            events.push(later(kind, id, 64600.0 + 10.0 * k as f64));
        }
        events.prop_map(move |events| ShipSection { ship_id, events })
    })
}

fn document() -> impl Strategy<Value = SolutionDocument> {
    (1u32..4).prop_flat_map(|n| {
        (1..=n)
            .map(ship)
            .collect::<Vec<_>>()
            .prop_map(|ships| SolutionDocument { ships })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_identity(doc in document()) {
        let text = serialize_solution(&doc).unwrap();
        prop_assert_eq!(parse_solution(&text).unwrap(), doc.clone());
        prop_assert_eq!(serialize_solution(&doc).unwrap(), text);
    }

    #[test]
    fn crlf_parses_the_same(doc in document()) {
        let text = serialize_solution(&doc).unwrap();
        let crlf = text.replace('\n', "\r\n");
        prop_assert_eq!(parse_solution(&crlf).unwrap(), doc);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_solution_bytes(&bytes);
    }
}

#[test]
fn trailing_blank_line_is_named() {
    let text = "1 0 64500 1 2 3 4 5 6 1000\n1 0 64500 1 2 3 4 5 6 1000\n\n";
    let err = parse_solution(text).unwrap_err();
    assert!(err
        .diagnostics
        .iter()
        .any(|d| d.kind == DiagnosticKind::TrailingBlankLine));
}

/// Random edits of a well-formed file go through parsing and validation
/// without a panic.
#[test]
fn mutated_files_never_panic() {
    let text = concat!(
        "1 0 64500 1.4e8 2e7 0 -4 29 0.1 2000\n",
        "1 0 64500 1.4e8 2e7 0 -4 31 0.1 2000\n",
        "1 -1 64510 0 0 0\n",
        "1 -1 64510 0.1 0.2 0\n",
        "1 -1 64511 0.1 0.2 0\n",
        "1 -1 64511.5 0.1 0.2 0\n",
        "1 -1 64511.5 0 0 0\n",
        "1 -3 64800 1.4e8 2e7 0 -4 29 0.1 1990\n",
        "1 -3 64800 1.4e8 2e7 0 -4 29 0.1 1990\n",
    )
    .as_bytes()
    .to_vec();
    let catalog = AsteroidCatalog::default();
    let config = ValidationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let alphabet = b"0123456789-+.eE \n\r\t,x";
    for _ in 0..1000 {
        let mut bytes = text.clone();
        for _ in 0..rng.random_range(1..6) {
            let i = rng.random_range(0..bytes.len());
            match rng.random_range(0..3) {
                0 => bytes[i] = alphabet[rng.random_range(0..alphabet.len())],
                1 => {
                    bytes.remove(i);
                }
                _ => bytes.insert(i, rng.random()),
            }
            if bytes.is_empty() {
                break;
            }
        }
        let report = validate_bytes(&bytes, &catalog, &config);
        assert_eq!(report.valid, report.violations.is_empty());
    }
}
