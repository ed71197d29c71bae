#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::{read_covers, write_covers};

fuzz_target!(|data: &[u8]| {
    let Ok(covers) = read_covers(data) else { return };
    let mut buf = Vec::new();
    write_covers(&covers, &mut buf).unwrap();
    assert_eq!(read_covers(&buf[..]).expect("written covers parse"), covers);
});
