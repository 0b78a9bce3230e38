#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(s) = std::str::from_utf8(bytes) {
        if let Ok(rows) = sptri::parse_matrix(s) {
            assert!(!rows.is_empty());
        }
        let _ = sptri::parse_mat2(s);
        let _ = sptri::parse_mat4(s);
        let _ = sptri::parse_sym(s);
    }
});
