#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::read_contacts;

fuzz_target!(|data: &[u8]| {
    if let Ok(load) = read_contacts(data, 10.0, None) {
        assert!(load.space.edges().iter().all(|e| e.length > 0.0 && e.length <= 10.0));
    }
});
