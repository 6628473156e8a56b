//! Fuzzes the fragment parsers (processes, session types, global types)
//! and their print/parse round-trips.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sessions::dsl::{
    parse_global_str, parse_process_str, parse_type_str, print_global, print_process, print_type,
};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_process_str(text) {
        assert_eq!(parse_process_str(&print_process(&p)).as_ref(), Ok(&p));
    }
    if let Ok(t) = parse_type_str(text) {
        assert_eq!(parse_type_str(&print_type(&t)).as_ref(), Ok(&t));
    }
    if let Ok(g) = parse_global_str(text) {
        assert_eq!(parse_global_str(&print_global(&g)).as_ref(), Ok(&g));
    }
});
