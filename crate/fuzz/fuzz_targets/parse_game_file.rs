#![no_main]

use libfuzzer_sys::fuzz_target;
use nimgeo::files::GameFile;
use nimgeo::game::{nimber_of, Budget};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = GameFile::from_json(text) else {
        return;
    };
    let again = GameFile::from_json(&file.to_json()).expect("serialized files parse");
    assert_eq!(again, file);
    let game = file.to_game().expect("validated files build");
    let _ = nimber_of(&game, &Budget::nodes(2_000));
});
