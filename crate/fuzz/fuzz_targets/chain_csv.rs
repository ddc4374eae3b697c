#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(chains) = latacc::io::read_chain_csv(data) else { return };
    let mut out = Vec::new();
    latacc::io::write_chain_csv(&chains, &mut out).unwrap();
    let again = latacc::io::read_chain_csv(out.as_slice()).unwrap();
    assert_eq!(again.names(), chains.names());
    assert_eq!(again.len(), chains.len());
    let _ = latacc::fit::reanalyze(&chains);
});
