//! Prints the source graph, target graph and fix steps of the renamed door as DOT.

use namefix::stm::{compile, compile_fixed_traced, parse_stm, resolve_stm};
use namefix::{find_capture, graph_to_dot, trace_to_dot, simpl::SimplResolver, Resolver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_stm(include_str!("../fixtures/door-renamed.stm"))?;
    let gs = resolve_stm(&m);
    let raw = compile(&m).to_term();
    let gt = SimplResolver.resolve(&raw)?;
    let decls = SimplResolver.declarations(&raw)?;
    let capture = find_capture(&gs, &gt);

    println!("{}", graph_to_dot("source", &gs, &m.to_term(), &decls, &Default::default()));
    println!("{}", graph_to_dot("target", &gt, &raw, &decls, &capture));
    let (_, trace) = compile_fixed_traced(&m)?;
    for dot in trace_to_dot(&trace, &decls) {
        println!("{dot}");
    }
    Ok(())
}
