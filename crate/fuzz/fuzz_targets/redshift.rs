#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::{embed_redshift, read_redshift, H0_DEFAULT};

fuzz_target!(|data: &[u8]| {
    if let Ok(cat) = read_redshift(data) {
        let _ = embed_redshift(&cat.rows, H0_DEFAULT);
    }
});
