//! Compiles the door machine before and after renaming `locked` to a name
//! that collides with a generated dispatch function.

use namefix::stm::{compile, compile_fixed_traced, parse_stm, resolve_stm};
use namefix::{find_capture, simpl::pretty_simpl, simpl::SimplResolver, Resolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let door = parse_stm(include_str!("../fixtures/door.stm"))?;
    let renamed = parse_stm(include_str!("../fixtures/door-renamed.stm"))?;

    for (title, m) in [("door", &door), ("renamed door", &renamed)] {
        let naive = compile(m);
        let capture = find_capture(&resolve_stm(m), &SimplResolver.resolve(&naive.to_term())?);
        println!("== {title}: naive compile, capture {capture}");
        print!("{}", pretty_simpl(&naive, false));

        let (fixed, trace) = compile_fixed_traced(m)?;
        println!("== {title}: fixed after {} iteration(s)", trace.len());
        print!("{}", pretty_simpl(&fixed, false));
    }
    Ok(())
}
