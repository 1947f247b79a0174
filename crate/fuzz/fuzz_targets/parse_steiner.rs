#![no_main]

use libfuzzer_sys::fuzz_target;
use rankthree::design::{verify_steiner, SteinerSystem};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = SteinerSystem::parse(text) {
        assert_eq!(SteinerSystem::parse(&d.to_text()).unwrap(), d);
        let _ = verify_steiner(&d);
    }
});
