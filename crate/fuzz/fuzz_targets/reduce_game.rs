#![no_main]

use libfuzzer_sys::fuzz_target;
use nimgeo::files::GameFile;
use nimgeo::game::{build_dag, Budget};
use nimgeo::geography::geography_nimber;
use nimgeo::reduction::{reduce_dag, OracleMode};

fuzz_target!(|data: &[u8]| {
    let Some((&flag, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(file) = GameFile::from_json(text) else {
        return;
    };
    let budget = Budget::nodes(3_000);
    let Ok(dag) = file.to_game().and_then(|g| build_dag(&g, &budget)) else {
        return;
    };
    let mode = if flag & 1 == 0 { OracleMode::Product } else { OracleMode::Trusted };
    let Ok(red) = reduce_dag(&dag, mode, &budget) else {
        return;
    };
    assert!(red.graph.vertices().len() <= red.size_bound);
    if let Ok(v) = geography_nimber(&red.graph, &budget) {
        assert_eq!(v, dag.nimber());
    }
});
