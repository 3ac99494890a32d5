#![no_main]

use libfuzzer_sys::fuzz_target;
use specorder::spectral::Sign;
use specorder_cli::parse_function;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = Sign::parse_vector(text);
    for kappa in 1..=3 {
        if let Ok(phi) = parse_function(text, kappa) {
            assert_eq!(
                phi.arity(),
                if text.starts_with("parts") { kappa } else { 1 }
            );
        }
    }
});
