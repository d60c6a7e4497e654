//! Step-by-step capture elimination on a lambda term with nested shadowing.

use namefix::lambda::{parse_lambda, pretty_lambda, LambdaResolver};
use namefix::{name_fix, Resolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let source = parse_lambda(include_str!("../fixtures/shadow-source.lam"))?;
    let target = parse_lambda(include_str!("../fixtures/shadow-target.lam"))?;
    let gs = LambdaResolver.resolve(&source)?;

    println!("source: {}", pretty_lambda(&source, true));
    println!("target: {}", pretty_lambda(&target, true));
    let (fixed, trace) = name_fix(&gs, &target, &LambdaResolver)?;
    print!("{}", trace.log());
    println!("fixed:  {}", pretty_lambda(&fixed, true));
    println!("plain:  {}", pretty_lambda(&fixed, false));
    Ok(())
}
