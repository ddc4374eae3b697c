#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = latacc::io::parse_predictions(text) {
        assert!(p.values.iter().all(|(line, _)| *line >= 1));
    }
    // Split the input in two to exercise the cross-tabulation path.
    let mid = text.len() / 2;
    if text.is_char_boundary(mid) {
        let (a, b) = text.split_at(mid);
        if let Ok(tab) = latacc::io::crosstab_from_text(a, b) {
            assert!(tab.n() <= text.len() as u64);
        }
    }
});
