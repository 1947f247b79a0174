#![no_main]

use libfuzzer_sys::fuzz_target;
use rankthree::coherent::{scheme_spectrum, CoherentConfiguration};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cc) = CoherentConfiguration::parse(text) {
        assert_eq!(CoherentConfiguration::parse(&cc.to_text()).unwrap(), cc);
        // spectrum failures are errors, never panics
        let _ = scheme_spectrum(&cc);
    }
});
