//! Runs the randomized resolver contract check on the bundled resolvers.

use namefix::lambda::{parse_lambda, LambdaResolver};
use namefix::simpl::{parse_simpl, SimplResolver};
use namefix::stm::{parse_stm, StmResolver};
use namefix::check_resolver_assumptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lam = parse_lambda(r"\f. \x. \y. f (\z. x z) (y + x) (\x. f x)")?;
    let spl = parse_simpl(include_str!("../fixtures/lift.spl"))?.to_term();
    let stm = parse_stm(include_str!("../fixtures/door.stm"))?.to_term();

    let reports = [
        ("lambda", check_resolver_assumptions(&LambdaResolver, &lam, 500, 1)?),
        ("simpl", check_resolver_assumptions(&SimplResolver, &spl, 500, 2)?),
        ("statemachine", check_resolver_assumptions(&StmResolver, &stm, 500, 3)?),
    ];
    for (name, report) in reports {
        println!("{name}: {} trials, {} violations", report.trials, report.violations.len());
        for v in report.violations.iter().take(3) {
            println!("  {v:?}");
        }
    }
    Ok(())
}
