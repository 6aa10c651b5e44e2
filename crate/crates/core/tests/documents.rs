use std::path::Path;

use ncprob::fixtures::{base_of_dim, catalog, rng};
use ncprob::io::*;
use ncprob::multifunc::CumulantFamily;
use ncprob::series::{BSeries, SeriesKind};
use serde_json::Value;

fn spec_round_trips(d: &SpecDoc) {
    assert_eq!(&SpecDoc::from_spec(&d.build().unwrap()), d);
}

#[test]
fn catalog_documents_rebuild_to_themselves() {
    for (name, text) in catalog().unwrap() {
        assert!(parse_json::<Value>(&text).is_ok(), "{name}");
        if name == "tower3.json" {
            let d: TowerDoc = parse_json(&text).unwrap();
            assert_eq!(TowerDoc::from_tower(&d.build().unwrap()), d);
        } else if name.starts_with("lemma-") {
            let d: LemmaDoc = parse_json(&text).unwrap();
            let (t, xs) = d.build().unwrap();
            assert_eq!(TowerDoc::from_tower(&t), d.tower);
            assert_eq!(xs.len(), d.elements.len());
        } else if name.starts_with("chain-compression-") {
            spec_round_trips(&parse_json::<ChainSpecDoc>(&text).unwrap().spec);
        } else if name.starts_with("chain-") {
            let d: ChainTowerDoc = parse_json(&text).unwrap();
            let (phi, chain, phi0) = d.build().unwrap();
            assert_eq!(ChainTowerDoc::new(&phi, &chain, &phi0), d);
        } else if name == "ladder-compression.json" {
            let d: LadderCompressionDoc = parse_json(&text).unwrap();
            let (l, a) = d.ladder.build().unwrap();
            assert_eq!(LadderDoc::from_ladder(&l, &a), d.ladder);
            spec_round_trips(&d.spec);
        } else if name.starts_with("ladder-") {
            let d: LadderDoc = parse_json(&text).unwrap();
            let (l, a) = d.build().unwrap();
            assert_eq!(LadderDoc::from_ladder(&l, &a), d);
        } else if name.starts_with("levels-") || name.starts_with("amalgamated-") {
            let d: LayeredDoc = parse_json(&text).unwrap();
            let (ls, x, y) = d.build().unwrap();
            assert_eq!((x, y), (vec![0], vec![1]));
            spec_round_trips(&d.spec);
            assert_eq!(ls.depth, d.depth, "{name}");
        } else if name.starts_with("compress-") {
            spec_round_trips(&parse_json::<CompressionDoc>(&text).unwrap().spec);
        } else if name.starts_with("lift-") {
            let d: LiftDoc = parse_json(&text).unwrap();
            spec_round_trips(&d.spec);
            assert_eq!(StateDoc::from_state(&d.phi0.build().unwrap()), d.phi0);
        } else if name == "boxed-counterexample.json" {
            spec_round_trips(&parse_json::<CounterexampleDoc>(&text).unwrap().spec);
        } else {
            panic!("no round trip for {name}");
        }
    }
}

#[test]
fn shipped_fixtures_match_the_generators() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for (name, text) in catalog().unwrap() {
        let on_disk = std::fs::read_to_string(dir.join(&name)).unwrap();
        assert_eq!(on_disk, text, "{name}");
    }
}

#[test]
fn family_and_series_documents_round_trip() {
    for d in [1, 2] {
        let f = CumulantFamily::random(&mut rng(d as u64), 2, 3, base_of_dim(d).unwrap());
        let doc: FamilyDoc = parse_json(&to_json(&FamilyDoc::from_family(&f))).unwrap();
        assert_eq!(doc.build().unwrap(), f);
        let s = BSeries::new(SeriesKind::Moment, f).unwrap();
        let back = SeriesDoc::from_series(&s).build().unwrap();
        assert_eq!(back.family, s.family);
        assert_eq!(back.kind, s.kind);
    }
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(parse_json::<TowerDoc>("{\"algebras\": 3}"), Err(ncprob::Error::Parse(_))));
    let (_, text) = catalog().unwrap().into_iter().find(|(n, _)| n == "tower3.json").unwrap();
    let mut d: TowerDoc = parse_json(&text).unwrap();
    d.levels.push("nowhere".into());
    assert!(d.build().is_err());
}
