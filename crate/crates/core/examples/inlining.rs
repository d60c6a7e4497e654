//! Inlines `and`, then `or`, and checks the program still computes the same value.

use namefix::simpl::{eval_simpl, inline, inline_raw, parse_simpl, pretty_simpl};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_simpl(include_str!("../fixtures/inline.spl"))?;
    println!("input:\n{}", pretty_simpl(&p, false));
    println!("naive inline of and:\n{}", pretty_simpl(&inline_raw(&p, "and")?, false));

    let step1 = inline(&p, "and")?;
    println!("inline and:\n{}", pretty_simpl(&step1, false));
    let step2 = inline(&step1, "or")?;
    println!("inline or:\n{}", pretty_simpl(&step2, false));

    let fuel = 10_000;
    println!("value before: {:?}", eval_simpl(&p, fuel));
    println!("value after:  {:?}", eval_simpl(&step2, fuel));
    Ok(())
}
