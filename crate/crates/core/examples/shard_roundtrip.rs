//! Shard a file, delete two shards, rebuild it.
//!
//! `cargo run --example shard_roundtrip -- [file]`; without an argument a
//! random 256 KiB file is used.

use std::fs;

use eoflex::shardio::{reconstruct, shard_file, shard_path};
use eoflex::CodeParams;
use rand::{RngCore, SeedableRng};

fn main() -> eoflex::Result<()> {
    let dir = std::env::temp_dir().join(format!("eoflex-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let input = match std::env::args().nth(1) {
        Some(path) => path.into(),
        None => {
            let path = dir.join("input.bin");
            let mut data = vec![0u8; 256 << 10];
            rand_chacha::ChaCha8Rng::seed_from_u64(0).fill_bytes(&mut data);
            fs::write(&path, data)?;
            path
        }
    };
    let params = CodeParams::new(2, 5, 3)?;
    let shards = dir.join("shards");
    let paths = shard_file(&input, &params, 4096, &shards)?;
    println!("{} shards in {}", paths.len(), shards.display());

    fs::remove_file(shard_path(&shards, 0))?;
    fs::remove_file(shard_path(&shards, 2))?;
    let out = dir.join("rebuilt.bin");
    let r = reconstruct(&shards, &out)?;
    let same = fs::read(&input)? == fs::read(&out)?;
    println!("rebuilt columns {:?}, {} bytes, identical: {same}", r.missing, r.bytes_written);
    fs::remove_dir_all(&dir)?;
    assert!(same);
    Ok(())
}
