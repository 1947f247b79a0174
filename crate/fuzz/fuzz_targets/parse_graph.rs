#![no_main]

use libfuzzer_sys::fuzz_target;
use rankthree::Graph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = Graph::parse(text) {
        // accepted input must round-trip exactly
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        let _ = g.check_srg();
    }
});
