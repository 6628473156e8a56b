//! Fuzzes the top-level model parser: arbitrary bytes must never panic,
//! and anything that parses must survive printing and re-parsing.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sessions::dsl::{parse_model, parse_process_str, print_process};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = parse_model(text) else {
        return;
    };
    for p in model.processes.values() {
        let printed = print_process(p);
        let reparsed = parse_process_str(&printed).expect("printed process parses");
        assert_eq!(&reparsed, p);
    }
});
