use std::fs;

use eoflex::shardio::{reconstruct, shard_file, shard_path};
use eoflex::CodeParams;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_loss_of_two_round_trips(
        data in proptest::collection::vec(any::<u8>(), 0..20_000),
        a in 0usize..5,
        b in 0usize..5,
        lane in 1usize..64,
    ) {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in");
        fs::write(&input, &data).unwrap();
        let params = CodeParams::new(2, 5, 3).unwrap();
        let shards = dir.path().join("s");
        shard_file(&input, &params, lane, &shards).unwrap();
        fs::remove_file(shard_path(&shards, a)).unwrap();
        if b != a {
            fs::remove_file(shard_path(&shards, b)).unwrap();
        }
        let out = dir.path().join("out");
        reconstruct(&shards, &out).unwrap();
        prop_assert_eq!(fs::read(out).unwrap(), data);
    }

    #[test]
    fn sharding_is_deterministic(data in proptest::collection::vec(any::<u8>(), 0..5_000)) {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in");
        fs::write(&input, &data).unwrap();
        let params = CodeParams::new(1, 7, 4).unwrap();
        let one = dir.path().join("one");
        let two = dir.path().join("two");
        shard_file(&input, &params, 16, &one).unwrap();
        shard_file(&input, &params, 16, &two).unwrap();
        for c in 0..params.columns() {
            prop_assert_eq!(fs::read(shard_path(&one, c)).unwrap(), fs::read(shard_path(&two, c)).unwrap());
        }
    }
}
