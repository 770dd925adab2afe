//! Patching parity for single-cell writes instead of re-encoding.

use eoflex::{encode, update_cell, CodeArray, CodeParams};

pub fn main() -> eoflex::Result<()> {
    let params = CodeParams::new(2, 5, 3)?;
    let mut array = CodeArray::new(params, 4)?;
    array.load_info(&[0x5a; 96]);
    encode(&mut array);
    for (i, j) in [(0, 0), (7, 1), (6, 2), (3, 1)] {
        let touched = update_cell(&mut array, i, j, b"new!")?;
        println!("b({i},{j}) rewritten, parity cells patched: {touched:?}");
    }
    let mut check = array.clone();
    encode(&mut check);
    assert_eq!(check, array);
    println!("patched parity equals a full re-encode");
    Ok(())
}
