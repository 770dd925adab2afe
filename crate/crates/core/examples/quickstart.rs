//! Encode one array, lose two columns, restore them.

use eoflex::{decode, encode, CodeArray, CodeParams, ErasurePattern};

pub fn main() -> eoflex::Result<()> {
    let params = CodeParams::new(2, 5, 3)?;
    println!("{params}: {} rows, t = {}, n_c = {}", params.rows(), params.t(), params.n_c());

    let mut array = CodeArray::new(params, 8)?;
    array.load_info(b"two lost disks are fine as long as it is only two");
    encode(&mut array);
    let original = array.clone();

    for lost in [[0, 2], [1, 3], [3, 4]] {
        let mut damaged = original.clone();
        for c in lost {
            damaged.clear_column(c);
        }
        let stats = decode(&mut damaged, &ErasurePattern::new(&params, &lost)?)?;
        assert_eq!(damaged, original);
        println!("lost {lost:?}: restored, {} XORs after syndromes", stats.recovery_xors());
    }
    println!("{}", String::from_utf8_lossy(&original.info_bytes()).trim_end_matches('\0'));
    Ok(())
}
