//! Builds a poset from generating pairs and queries it.

use nc_causal::poset::FinitePoset;

fn main() -> nc_causal::Result<()> {
    let p = FinitePoset::from_pairs(5, &[(0, 1), (1, 2), (0, 3), (3, 4)])?;
    println!("strict pairs after closure: {:?}", p.strict_pairs());
    for x in 0..p.size() {
        println!("height({x}) = {}", p.height(x));
    }
    println!("2 and 4 comparable: {}", p.comparable(2, 4));
    match FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]) {
        Err(e) => println!("cyclic input rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
