//! A state-machine DSL and its compiler to SIMPL.
//!
//! ```text
//! state opened
//!   close => closed
//! state closed
//!   open => opened
//! ```
//!
//! Each state becomes a constant function returning its index, a dispatch
//! function `<state>-dispatch(event)` choosing the next state, and a `main`
//! function dispatching on the current state. Generated references reach
//! generated definitions only through the naming convention.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, ParseError};
use crate::fix::{name_fix, FixTrace};
use crate::graph::{GraphBuilder, NameGraph};
use crate::resolver::Resolver;
use crate::simpl::{Exp, FDef, SimplProgram, SimplResolver};
use crate::syntax::{describe, Cursor, Tok};
use crate::term::{Atom, Label, LabelGen, Name, Term};

const LANG: &str = "statemachine";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub states: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: Name,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub event: String,
    pub target: Name,
}

/// Parses `(state <name> (<event> => <target>)* [end])+`.
pub fn parse_stm(src: &str) -> Result<Machine, ParseError> {
    let mut c = Cursor::new(src)?;
    let mut states = Vec::new();
    loop {
        c.expect_keyword("state")?;
        let (text, label) = c.ident(&["state", "end"])?;
        let mut transitions = Vec::new();
        while let Tok::Ident { text: ev, pin: None } = c.peek().clone() {
            if ev == "state" || ev == "end" {
                break;
            }
            c.next();
            c.expect_punct("=>")?;
            let (t, l) = c.ident(&["state", "end"])?;
            transitions.push(Transition {
                event: ev,
                target: Name::new(t, l),
            });
        }
        c.eat_keyword("end");
        states.push(State {
            name: Name::new(text, label),
            transitions,
        });
        if c.at_eof() {
            break;
        }
        if !c.at_keyword("state") {
            return Err(c.error(format!("expected `state`, found {}", describe(c.peek()))));
        }
    }
    Ok(Machine { states })
}

impl Machine {
    pub fn to_term(&self) -> Term {
        Term::node(
            "machine",
            self.states.iter().map(|s| {
                Term::node(
                    "state",
                    std::iter::once(Term::Name(s.name.clone())).chain(s.transitions.iter().map(|t| {
                        Term::node(
                            "on",
                            [Term::Const(Atom::Str(t.event.clone())), Term::Name(t.target.clone())],
                        )
                    })),
                )
            }),
        )
    }

    pub fn from_term(t: &Term) -> Result<Machine, Error> {
        let bad = || Error::malformed(LANG, format!("unexpected form {t}"));
        let Term::Compound(ts) = t else { return Err(bad()) };
        if ts.first() != Some(&Term::sym("machine")) {
            return Err(bad());
        }
        let mut states = Vec::new();
        for s in &ts[1..] {
            let Term::Compound(xs) = s else { return Err(bad()) };
            let [tag, Term::Name(name), rest @ ..] = xs.as_slice() else {
                return Err(bad());
            };
            if *tag != Term::sym("state") {
                return Err(bad());
            }
            let mut transitions = Vec::new();
            for tr in rest {
                match tr {
                    Term::Compound(ys) => match ys.as_slice() {
                        [tag, Term::Const(Atom::Str(ev)), Term::Name(target)]
                            if *tag == Term::sym("on") =>
                        {
                            transitions.push(Transition {
                                event: ev.clone(),
                                target: target.clone(),
                            })
                        }
                        _ => return Err(bad()),
                    },
                    _ => return Err(bad()),
                }
            }
            states.push(State {
                name: name.clone(),
                transitions,
            });
        }
        Ok(Machine { states })
    }

    /// Renames states consistently: declarations and transition targets alike.
    pub fn rename_states(&self, sigma: &BTreeMap<String, String>) -> Machine {
        let r = |n: &Name| match sigma.get(&n.text) {
            Some(t) => Name::new(t.clone(), n.label),
            None => n.clone(),
        };
        Machine {
            states: self
                .states
                .iter()
                .map(|s| State {
                    name: r(&s.name),
                    transitions: s
                        .transitions
                        .iter()
                        .map(|t| Transition {
                            event: t.event.clone(),
                            target: r(&t.target),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for s in &self.states {
            out.insert(s.name.label);
            out.extend(s.transitions.iter().map(|t| t.target.label));
        }
        out
    }
}

/// Renders a machine in the syntax accepted by [`parse_stm`].
pub fn pretty_stm(m: &Machine, show_labels: bool) -> String {
    let name = |n: &Name| if show_labels { n.to_string() } else { n.text.clone() };
    let mut out = String::new();
    for (i, s) in m.states.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("state {}\n", name(&s.name)));
        for t in &s.transitions {
            out.push_str(&format!("  {} => {}\n", t.event, name(&t.target)));
        }
    }
    out
}

/// Transition targets resolve to the state of that name; the last one wins among duplicates.
pub fn resolve_stm(m: &Machine) -> NameGraph {
    let decls: BTreeMap<&str, Label> = m
        .states
        .iter()
        .map(|s| (s.name.text.as_str(), s.name.label))
        .collect();
    let mut b = GraphBuilder::new();
    for s in &m.states {
        b.node(s.name.label);
        for t in &s.transitions {
            match decls.get(t.target.text.as_str()) {
                Some(d) => b.bind(t.target.label, *d, 0),
                None => b.node(t.target.label),
            }
        }
    }
    b.finish()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StmResolver;

impl Resolver for StmResolver {
    fn language(&self) -> &'static str {
        LANG
    }

    fn resolve(&self, t: &Term) -> Result<NameGraph, Error> {
        Ok(resolve_stm(&Machine::from_term(t)?))
    }

    fn declarations(&self, t: &Term) -> Result<BTreeSet<Label>, Error> {
        Ok(Machine::from_term(t)?
            .states
            .iter()
            .map(|s| s.name.label)
            .collect())
    }
}

fn dispatch_name(state: &str) -> String {
    format!("{state}-dispatch")
}

/// Naive compilation: state names are copied verbatim into the generated program.
///
/// Every synthesized name occurrence gets its own label, numbered right above
/// the machine's labels.
pub fn compile(m: &Machine) -> SimplProgram {
    let mut gen = LabelGen::above(m.labels());
    let mut fresh = |text: &str| Name::new(text, gen.fresh());
    let consts = m
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| FDef::new(s.name.clone(), vec![], Exp::Int(i as i64)));
    let mut fdefs: Vec<FDef> = consts.collect();
    for s in &m.states {
        let name = fresh(&dispatch_name(&s.name.text));
        let param = fresh("event");
        let branches: Vec<(Exp, Exp)> = s
            .transitions
            .iter()
            .map(|t| {
                let cond = Exp::eq(Exp::Var(fresh("event")), Exp::Str(t.event.clone()));
                (cond, Exp::Call(t.target.clone(), vec![]))
            })
            .collect();
        fdefs.push(FDef::new(name, vec![param], fold_branches(branches)));
    }
    let main = fresh("main");
    let params = vec![fresh("state"), fresh("event")];
    let branches: Vec<(Exp, Exp)> = m
        .states
        .iter()
        .map(|s| {
            let cond = Exp::eq(Exp::Var(fresh("state")), Exp::Call(s.name.clone(), vec![]));
            let callee = fresh(&dispatch_name(&s.name.text));
            (cond, Exp::Call(callee, vec![Exp::Var(fresh("event"))]))
        })
        .collect();
    fdefs.push(FDef::new(main, params, fold_branches(branches)));
    SimplProgram {
        fdefs,
        main: Vec::new(),
    }
}

fn fold_branches(branches: Vec<(Exp, Exp)>) -> Exp {
    branches
        .into_iter()
        .rev()
        .fold(Exp::Error, |acc, (c, t)| Exp::if_(c, t, acc))
}

/// Compilation followed by capture elimination against the machine's graph.
pub fn compile_fixed(m: &Machine) -> Result<SimplProgram, Error> {
    Ok(compile_fixed_traced(m)?.0)
}

pub fn compile_fixed_traced(m: &Machine) -> Result<(SimplProgram, FixTrace), Error> {
    let (t, trace) = name_fix(&resolve_stm(m), &compile(m).to_term(), &SimplResolver)?;
    Ok((SimplProgram::from_term(&t)?, trace))
}
