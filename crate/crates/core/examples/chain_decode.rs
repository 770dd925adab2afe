//! Two lost information columns, step by step: syndromes, the common-bit
//! sum, the chain solve and the recovered common-bit parts.

use eoflex::codec::compute_common_bits;
use eoflex::decoder::{build_syndromes, decode_two_info_counted, solve_syndromes};
use eoflex::{encode, CodeArray, CodeParams};
use rand::SeedableRng;

pub fn main() -> eoflex::Result<()> {
    let params = CodeParams::new(2, 5, 3)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut array = CodeArray::random(params, 1, &mut rng)?;
    encode(&mut array);
    let common = compute_common_bits(&array);
    let (f, g) = (0, 2);
    let want = (array.column(f), array.column(g));
    array.clear_column(f);
    array.clear_column(g);

    let mut syn = build_syndromes(&array, f, g)?;
    let bits = |v: &[eoflex::Lane]| v.iter().map(|l| (l[0] & 1).to_string()).collect::<String>();
    println!("row syndromes  {}", bits(&syn.row_syn));
    println!("diag syndromes {}", bits(&syn.diag_syn));
    println!("sum of common bits {}", bits(syn.sum_s.as_slice()));

    let (x, y) = solve_syndromes(&params, &mut syn)?;
    assert_eq!((x.clone(), y.clone()), want);
    println!("column {f}       {}", bits(&x));
    println!("column {g}       {}", bits(&y));
    for (mu, part) in syn.s_prime.iter().enumerate() {
        let shown = part.as_ref().map_or("-".into(), |l| (l[0] & 1).to_string());
        println!("S'[{mu}] = {shown}   S[{mu}] = {}", common.s[mu][0] & 1);
    }

    let (_, _, stats) = decode_two_info_counted(&array, f, g)?;
    println!(
        "XORs: syndromes {}, common-bit sum {}, chain {}",
        stats.syndrome_xors, stats.sum_xors, stats.chain_xors
    );
    Ok(())
}
