#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(s) = std::str::from_utf8(bytes) {
        // whatever parses must print back to itself
        if let Ok(g) = sptri::parse_qelement(s) {
            assert_eq!(sptri::parse_qelement(&g.to_string()).unwrap(), g);
        }
    }
});
