#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::read_bin_map;

fuzz_target!(|data: &[u8]| {
    let _ = read_bin_map(data);
});
