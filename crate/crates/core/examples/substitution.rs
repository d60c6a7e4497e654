//! Substitutes an expression mentioning `n` into a program that binds `n`.

use namefix::simpl::{parse_simpl, parse_simpl_exp, pretty_simpl, subst, subst_p};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_simpl(include_str!("../fixtures/subst.spl"))?;
    let e = parse_simpl_exp("2*n")?;

    println!("input:\n{}", pretty_simpl(&p, false));
    println!("naive:\n{}", pretty_simpl(&subst_p(&p, "x", &e), false));
    println!("fixed:\n{}", pretty_simpl(&subst(&p, "x", &e)?, false));
    Ok(())
}
