#![no_main]

use libfuzzer_sys::fuzz_target;
use rankthree::PermGroup;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = PermGroup::parse(text) {
        let back = PermGroup::parse(&g.to_text()).unwrap();
        assert_eq!(back.generators(), g.generators());
        if g.degree() <= 32 && g.is_transitive() {
            let _ = g.orbitals();
        }
    }
});
