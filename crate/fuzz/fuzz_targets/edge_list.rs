#![no_main]

use libfuzzer_sys::fuzz_target;
use tightph::io::{read_edge_list, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(space) = read_edge_list(data) else { return };
    let mut buf = Vec::new();
    write_edge_list(&space, &mut buf).unwrap();
    let again = read_edge_list(&buf[..]).expect("written edge list parses");
    assert_eq!(again.edges(), space.edges());
});
