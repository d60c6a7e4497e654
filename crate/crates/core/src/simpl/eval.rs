use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use super::ast::{Exp, FDef, SimplProgram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("error() was called")]
    Error,
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("out of fuel")]
    OutOfFuel,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("`{function}` expects {expected} arguments, got {found}")]
    Arity {
        function: String,
        expected: usize,
        found: usize,
    },
    #[error("program has no main expression")]
    NoMain,
}

const MAX_DEPTH: usize = 200;

#[derive(Debug)]
enum Binding<'p> {
    Value(Value),
    /// A local function; its own name is rebound on every call.
    Closure(&'p FDef, Env<'p>),
}

#[derive(Debug)]
struct Frame<'p> {
    name: &'p str,
    binding: Binding<'p>,
    parent: Env<'p>,
}

type Env<'p> = Option<Rc<Frame<'p>>>;

fn extend<'p>(env: &Env<'p>, name: &'p str, binding: Binding<'p>) -> Env<'p> {
    Some(Rc::new(Frame {
        name,
        binding,
        parent: env.clone(),
    }))
}

fn lookup<'a, 'p>(env: &'a Env<'p>, name: &str) -> Option<&'a Binding<'p>> {
    let mut cur = env.as_ref();
    while let Some(f) = cur {
        if f.name == name {
            return Some(&f.binding);
        }
        cur = f.parent.as_ref();
    }
    None
}

struct Machine<'p> {
    globals: BTreeMap<&'p str, &'p FDef>,
    fuel: u64,
    depth: usize,
}

/// Evaluates the main expressions in order and returns the value of the last one.
///
/// Call by value; 0 is false and every other integer true; arithmetic wraps.
/// Each evaluation step costs one unit of `fuel`.
pub fn eval_simpl(p: &SimplProgram, fuel: u64) -> Result<Value, EvalError> {
    let mut m = Machine::new(p, fuel);
    let mut last = Err(EvalError::NoMain);
    for e in &p.main {
        last = Ok(m.eval(e, &None)?);
    }
    last
}

/// Calls a top-level function with the given arguments.
pub fn call_function(
    p: &SimplProgram,
    name: &str,
    args: Vec<Value>,
    fuel: u64,
) -> Result<Value, EvalError> {
    let mut m = Machine::new(p, fuel);
    let d = *m
        .globals
        .get(name)
        .ok_or_else(|| EvalError::UnboundName(name.to_string()))?;
    m.apply(d, None, args)
}

fn truthy(v: &Value) -> Result<bool, EvalError> {
    match v {
        Value::Int(n) => Ok(*n != 0),
        Value::Str(s) => Err(EvalError::TypeMismatch(format!("string {s:?} used as condition"))),
    }
}

fn int(v: Value, what: &str) -> Result<i64, EvalError> {
    match v {
        Value::Int(n) => Ok(n),
        Value::Str(s) => Err(EvalError::TypeMismatch(format!("string {s:?} used in {what}"))),
    }
}

impl<'p> Machine<'p> {
    fn new(p: &'p SimplProgram, fuel: u64) -> Self {
        Machine {
            globals: p.fdefs.iter().map(|d| (d.name.text.as_str(), d)).collect(),
            fuel,
            depth: 0,
        }
    }

    fn apply(&mut self, d: &'p FDef, closure: Option<Env<'p>>, args: Vec<Value>) -> Result<Value, EvalError> {
        if d.params.len() != args.len() {
            return Err(EvalError::Arity {
                function: d.name.text.clone(),
                expected: d.params.len(),
                found: args.len(),
            });
        }
        if self.depth >= MAX_DEPTH {
            return Err(EvalError::OutOfFuel);
        }
        let mut env = match closure {
            Some(captured) => {
                let own = Binding::Closure(d, captured.clone());
                extend(&captured, &d.name.text, own)
            }
            None => None,
        };
        for (x, v) in d.params.iter().zip(args) {
            env = extend(&env, &x.text, Binding::Value(v));
        }
        self.depth += 1;
        let r = self.eval(&d.body, &env);
        self.depth -= 1;
        r
    }

    fn eval(&mut self, e: &'p Exp, env: &Env<'p>) -> Result<Value, EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::OutOfFuel);
        }
        self.fuel -= 1;
        match e {
            Exp::Int(n) => Ok(Value::Int(*n)),
            Exp::Str(s) => Ok(Value::Str(s.clone())),
            Exp::Error => Err(EvalError::Error),
            Exp::Var(x) => match lookup(env, &x.text) {
                Some(Binding::Value(v)) => Ok(v.clone()),
                Some(Binding::Closure(..)) => Err(EvalError::TypeMismatch(format!(
                    "function `{}` used as a value",
                    x.text
                ))),
                None if self.globals.contains_key(x.text.as_str()) => Err(EvalError::TypeMismatch(
                    format!("function `{}` used as a value", x.text),
                )),
                None => Err(EvalError::UnboundName(x.text.clone())),
            },
            Exp::Let(x, init, body) => {
                let v = self.eval(init, env)?;
                let inner = extend(env, &x.text, Binding::Value(v));
                self.eval(body, &inner)
            }
            Exp::LetFun(d, body) => {
                let inner = extend(env, &d.name.text, Binding::Closure(d, env.clone()));
                self.eval(body, &inner)
            }
            Exp::If(c, t, f) => {
                if truthy(&self.eval(c, env)?)? {
                    self.eval(t, env)
                } else {
                    self.eval(f, env)
                }
            }
            Exp::Eq(a, b) => {
                let a = self.eval(a, env)?;
                let b = self.eval(b, env)?;
                Ok(Value::Int((a == b) as i64))
            }
            Exp::Add(a, b) => {
                let a = int(self.eval(a, env)?, "+")?;
                let b = int(self.eval(b, env)?, "+")?;
                Ok(Value::Int(a.wrapping_add(b)))
            }
            Exp::Mul(a, b) => {
                let a = int(self.eval(a, env)?, "*")?;
                let b = int(self.eval(b, env)?, "*")?;
                Ok(Value::Int(a.wrapping_mul(b)))
            }
            Exp::Not(a) => Ok(Value::Int(!truthy(&self.eval(a, env)?)? as i64)),
            Exp::Call(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                match lookup(env, &f.text) {
                    Some(Binding::Closure(d, captured)) => {
                        let (d, captured) = (*d, captured.clone());
                        self.apply(d, Some(captured), vals)
                    }
                    Some(Binding::Value(_)) => Err(EvalError::TypeMismatch(format!(
                        "`{}` is not a function",
                        f.text
                    ))),
                    None => match self.globals.get(f.text.as_str()) {
                        Some(d) => self.apply(d, None, vals),
                        None => Err(EvalError::UnboundName(f.text.clone())),
                    },
                }
            }
        }
    }
}
