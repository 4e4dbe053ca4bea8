use gapbound::fixtures;
use gapbound::gap::{gb, verify_certificate, GapBoundCertificate};
use gapbound::pipeline::{filter_ancestors, parse_vertices, run_family, serialize_vertices, best_certificates};
use gapbound::rational::{format, frac};
use gapbound::SepPoint;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn fixture() -> impl Strategy<Value = SepPoint> {
    select(fixtures::all_ancestors())
}

fn relabeled_fixture() -> impl Strategy<Value = (SepPoint, Vec<usize>)> {
    fixture().prop_flat_map(|x| {
        let n = x.node_count();
        (Just(x), shuffled(n))
    })
}

#[test]
fn family_runs_are_byte_identical() {
    let ancestors = filter_ancestors(&fixtures::order4(), 4);
    let run = || {
        let (report, outcomes) = run_family(4, &ancestors, &frac(4, 3), 10).unwrap();
        let certs: Vec<String> = outcomes
            .iter()
            .flat_map(|o| o.certificates.iter().map(GapBoundCertificate::to_json))
            .collect();
        (serde_json::to_string(&report).unwrap(), certs)
    };
    assert_eq!(run(), run());
}

#[test]
fn best_certificates_verify() {
    let ancestors = filter_ancestors(&fixtures::order4(), 4);
    let (report, outcomes) = run_family(4, &ancestors, &frac(4, 3), 10).unwrap();
    for (row, cert) in report.rows.iter().zip(best_certificates(&outcomes)) {
        assert_eq!(cert.bound, row.bound);
        assert!(verify_certificate(&cert).is_ok());
    }
}

#[test]
fn serialize_then_parse_is_identity() {
    let all = fixtures::all_ancestors();
    let text = serialize_vertices(&all);
    let back = parse_vertices(&text).unwrap();
    assert_eq!(back, all);
    assert_eq!(serialize_vertices(&back), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeled_fixtures_round_trip((x, perm) in relabeled_fixture()) {
        let y = x.permute(&perm);
        let text = serialize_vertices(&[y.clone()]);
        prop_assert_eq!(parse_vertices(&text).unwrap(), vec![y]);
    }

    #[test]
    fn filtering_ignores_order_and_labels(
        picks in subsequence(fixtures::order4(), 1..=5),
        order in shuffled(5),
        relabel in shuffled(8),
    ) {
        let expected = filter_ancestors(&picks, 4);
        let mut moved: Vec<SepPoint> = order
            .iter()
            .filter(|&&i| i < picks.len())
            .map(|&i| {
                let p = &picks[i];
                if p.node_count() == 8 { p.permute(&relabel) } else { p.clone() }
            })
            .collect();
        moved.extend(picks.iter().take(1).cloned());
        prop_assert_eq!(filter_ancestors(&moved, 4), expected);
    }

    #[test]
    fn tampered_rationals_are_rejected(
        x in fixture(),
        field in 0usize..5,
        index in any::<prop::sample::Index>(),
        up in any::<bool>(),
        reseal in any::<bool>(),
    ) {
        let (_, cert) = gb(&x).unwrap();
        prop_assert!(verify_certificate(&cert).is_ok());
        let mut v = serde_json::to_value(&cert).unwrap();
        let slot = match field {
            0 => { let a = v["costs"].as_array_mut().unwrap(); let i = index.index(a.len()); &mut a[i]["value"] }
            1 => { let a = v["walks"].as_array_mut().unwrap(); let i = index.index(a.len()); &mut a[i]["mu"] }
            2 => { let a = v["constants"].as_array_mut().unwrap(); let i = index.index(a.len()); &mut a[i]["value"] }
            3 => &mut v["value"],
            _ => &mut v["bound"],
        };
        let r = gapbound::rational::parse(slot.as_str().unwrap()).unwrap();
        let delta = if up { frac(1, 1000) } else { frac(-1, 1000) };
        *slot = serde_json::Value::String(format(&(r + delta)));
        let mut tampered = GapBoundCertificate::from_json(&v.to_string()).unwrap();
        if reseal {
            tampered = tampered.sealed();
        }
        prop_assert!(verify_certificate(&tampered).is_err());
    }
}
