#![no_main]

use libfuzzer_sys::fuzz_target;
use nimgeo::game::Budget;
use nimgeo::geography::{edge_geography_nimber, geography_nimber, GeoGraph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = GeoGraph::from_json(text) else {
        return;
    };
    assert_eq!(GeoGraph::from_json(&g.to_json()).expect("round trip"), g);
    let _ = g.to_dot();
    let budget = Budget::nodes(2_000);
    let _ = geography_nimber(&g, &budget);
    let _ = edge_geography_nimber(&g, &budget);
    if g.is_acyclic() {
        g.static_values().expect("acyclic graphs have static values");
    }
});
