#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::read_points;

fuzz_target!(|data: &[u8]| {
    let _ = read_points(data);
});
