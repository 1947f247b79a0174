#![no_main]

use libfuzzer_sys::fuzz_target;
use rankthree_cli::config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = config::parse(text);
    }
});
