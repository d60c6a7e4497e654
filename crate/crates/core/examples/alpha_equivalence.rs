//! Alpha-equivalence and sub-alpha-equivalence on small lambda terms.

use namefix::lambda::{parse_lambda, LambdaResolver};
use namefix::{alpha_equiv, sub_alpha_equiv, Resolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        (r"\x@1. \y@2. x@3 y@4", r"\a@1. \b@2. a@3 b@4"),
        (r"\x@1. \y@2. x@3 y@4", r"\y@1. \y@2. y@3 y@4"),
        // Free names are compared by binding structure only.
        (r"\x@1. z@2", r"\x@1. w@2"),
    ];
    for (a, b) in pairs {
        let (ta, tb) = (parse_lambda(a)?, parse_lambda(b)?);
        println!("{a}  vs  {b}: {}", alpha_equiv(&ta, &tb, &LambdaResolver)?);
    }

    // Only the edges of the given graph have to agree.
    let g = LambdaResolver.resolve(&parse_lambda(r"\x@1. x@2")?)?;
    let t1 = parse_lambda(r"\x@1. x@2 x@'3")?;
    let t2 = parse_lambda(r"\y@1. y@2 q@'3")?;
    println!("sub-alpha: {}", sub_alpha_equiv(&t1, &t2, &g)?);
    Ok(())
}
