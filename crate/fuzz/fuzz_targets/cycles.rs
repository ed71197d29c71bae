#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::{read_cycles, write_cycles};

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_cycles(data) else { return };
    let mut buf = Vec::new();
    write_cycles(&records, &mut buf).unwrap();
    assert_eq!(read_cycles(&buf[..]).expect("written cycles parse"), records);
});
