#![no_main]

use libfuzzer_sys::fuzz_target;
use specorder::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = io::parse_tuple(text) {
        let again = io::parse_tuple(&io::tuple_to_json(&t)).expect("serialized tuples parse");
        assert_eq!(again, t);
    }
    let _ = io::parse_tuple_with_tol(text, 1e-3);
});
