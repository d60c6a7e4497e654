//! An anaphoric `if` binds `it` on purpose. Marking the synthesized binder
//! keeps the fix from renaming it away.

use namefix::simpl::{parse_simpl, pretty_simpl, resolve_simpl, Exp, SimplProgram, SimplResolver};
use namefix::{name_fix, LabelGen, Name};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The three operands of `aif c then t else e`.
    let src = parse_simpl("1 + 2; !it; it")?;
    let gs = resolve_simpl(&src);
    let [c, t, e] = [0, 1, 2].map(|i| src.main[i].clone());

    let mut gen = LabelGen::above(src.labels());
    let binder = Name::new("it", gen.fresh());
    let test = Exp::Var(Name::new("it", gen.fresh()));
    let out = SimplProgram {
        fdefs: vec![],
        main: vec![Exp::let_(binder, c, Exp::if_(test, t, e))],
    };

    for mark in [false, true] {
        let term = if mark { out.to_term().mark("it") } else { out.to_term() };
        let (fixed, _) = name_fix(&gs, &term, &SimplResolver)?;
        println!("marked={mark}:\n{}", pretty_simpl(&SimplProgram::from_term(&fixed)?, false));
    }
    Ok(())
}
