#![no_main]

use libfuzzer_sys::fuzz_target;
use specorder::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = io::parse_measure(text) {
        let again = io::parse_measure(&io::measure_to_json(&m)).expect("serialized measures parse");
        assert_eq!(again, m);
    }
});
