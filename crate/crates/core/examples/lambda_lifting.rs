//! Lifts a local recursive function whose free variable clashes with a global.

use namefix::simpl::{eval_simpl, lambda_lift, lambda_lift_raw, parse_simpl, pretty_simpl};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_simpl(include_str!("../fixtures/lift.spl"))?;
    println!("input:\n{}", pretty_simpl(&p, false));
    println!("naive:\n{}", pretty_simpl(&lambda_lift_raw(&p), false));
    let lifted = lambda_lift(&p)?;
    println!("fixed:\n{}", pretty_simpl(&lifted, false));

    let q = parse_simpl(include_str!("../fixtures/closed.spl"))?;
    let fuel = 100_000;
    println!("closed program: {:?} -> {:?}", eval_simpl(&q, fuel), eval_simpl(&lambda_lift(&q)?, fuel));
    Ok(())
}
