//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use namefix::lambda::{add, app, lam, var, LambdaResolver};
use namefix::simpl::{
    inline_raw, lambda_lift_raw, resolve_simpl, subst_p, Exp, FDef, SimplProgram, SimplResolver,
};
use namefix::stm::{compile, resolve_stm, Machine, State, Transition};
use namefix::{Label, LabelGen, Name, NameGraph, Renaming, Resolver, Term};

pub const VAR_POOL: &[&str] = &["x", "y", "z", "n", "tmp"];
pub const FUN_POOL: &[&str] = &["f", "g", "h", "or", "and"];
pub const STATE_POOL: &[&str] = &[
    "a",
    "b",
    "c",
    "a-dispatch",
    "b-dispatch",
    "a-dispatch-dispatch",
    "main",
    "event",
    "state",
];
pub const EVENTS: &[&str] = &["go", "stop", "tick"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A transformation output together with the graph of its input.
pub struct Case {
    pub kind: &'static str,
    pub gs: NameGraph,
    pub t: Term,
    pub resolver: &'static dyn Resolver,
}

/// Source labels 1, 2, ... in allocation order.
#[derive(Default)]
pub struct Ids(u64);

impl Ids {
    pub fn next(&mut self) -> Label {
        self.0 += 1;
        Label::source(self.0)
    }
}

// ---------------------------------------------------------------- lambda

pub fn gen_lambda(rng: &mut StdRng, ids: &mut Ids, depth: u32) -> Term {
    let pool = &VAR_POOL[..3];
    let pick = |rng: &mut StdRng| *pool.choose(rng).unwrap();
    if depth == 0 {
        return if rng.gen_bool(0.15) {
            Term::int(rng.gen_range(0..5))
        } else {
            var(pick(rng), ids.next())
        };
    }
    match rng.gen_range(0..10) {
        0..=3 => {
            let x = pick(rng);
            let d = ids.next();
            lam(Term::name(x, d), gen_lambda(rng, ids, depth - 1))
        }
        4..=6 => app(gen_lambda(rng, ids, depth - 1), gen_lambda(rng, ids, depth - 1)),
        7 => add(gen_lambda(rng, ids, depth - 1), gen_lambda(rng, ids, depth - 1)),
        _ => var(pick(rng), ids.next()),
    }
}

/// A naive "transformation" of `s`: inserts synthesized binders and
/// references and occasionally duplicates subterms. Source names are then
/// re-spelled consistently along the edges of `gs` (which may capture) and
/// synthesized names arbitrarily.
pub fn transform_lambda(rng: &mut StdRng, s: &Term, gs: &NameGraph) -> Term {
    let mut gen = LabelGen::above(s.labels_unchecked());
    let t = sprinkle(rng, s, &mut gen);
    let t = respell_components(rng, &t, gs, VAR_POOL, 0.3);
    random_respelling(rng, &t, VAR_POOL, 0.3, true)
}

/// Like [`transform_lambda`] but source references may also drift away from
/// the spelling of their declarations.
pub fn transform_lambda_inconsistent(rng: &mut StdRng, s: &Term) -> Term {
    let mut gen = LabelGen::above(s.labels_unchecked());
    let t = sprinkle(rng, s, &mut gen);
    random_respelling(rng, &t, VAR_POOL, 0.3, false)
}

fn sprinkle(rng: &mut StdRng, t: &Term, gen: &mut LabelGen) -> Term {
    let inner = match t {
        Term::Compound(ts) => {
            let is_lam = ts.first() == Some(&Term::sym("lam"));
            Term::Compound(
                ts.iter()
                    .enumerate()
                    .map(|(i, c)| match c {
                        Term::Const(_) => c.clone(),
                        Term::Name(_) if is_lam && i == 1 => c.clone(),
                        _ => sprinkle(rng, c, gen),
                    })
                    .collect(),
            )
        }
        _ => t.clone(),
    };
    let pool = &VAR_POOL[..3];
    match rng.gen_range(0..12) {
        0 => lam(Term::name(*pool.choose(rng).unwrap(), gen.fresh()), inner),
        1 => app(inner, var(pool.choose(rng).unwrap(), gen.fresh())),
        2 => app(var(pool.choose(rng).unwrap(), gen.fresh()), inner),
        3 if matches!(t, Term::Compound(_)) => app(inner.clone(), inner),
        _ => inner,
    }
}

pub fn lambda_case(rng: &mut StdRng) -> Case {
    let mut ids = Ids::default();
    let depth = rng.gen_range(2..6);
    let s = gen_lambda(rng, &mut ids, depth);
    let gs = LambdaResolver.resolve(&s).unwrap();
    let t = transform_lambda(rng, &s, &gs);
    Case {
        kind: "lambda",
        gs,
        t,
        resolver: &LambdaResolver,
    }
}

// ---------------------------------------------------------------- renamings

/// Re-spells each label of `t` with probability `p`, keeping labels
/// consistent. With `synthesized_only` only synthesized labels are touched.
pub fn random_respelling(
    rng: &mut StdRng,
    t: &Term,
    pool: &[&str],
    p: f64,
    synthesized_only: bool,
) -> Term {
    let mut pi = Renaming::new();
    for l in t.labels_unchecked() {
        if (!synthesized_only || l.is_synthesized()) && rng.gen_bool(p) {
            pi.insert(l, *pool.choose(rng).unwrap());
        }
    }
    t.rename(&pi)
}

/// Connected components of `g`, restricted to labels of `t`, keyed by representative.
fn components(t: &Term, g: &NameGraph) -> BTreeMap<Label, Label> {
    fn find(parent: &BTreeMap<Label, Label>, mut x: Label) -> Label {
        while let Some(&p) = parent.get(&x) {
            if p == x {
                break;
            }
            x = p;
        }
        x
    }
    let mut parent: BTreeMap<Label, Label> = BTreeMap::new();
    for l in t.labels_unchecked() {
        if g.contains(l) {
            parent.insert(l, l);
        }
    }
    for (r, d) in g.edges() {
        if parent.contains_key(r) && parent.contains_key(d) {
            let (a, b) = (find(&parent, *r), find(&parent, *d));
            parent.insert(a, b);
        }
    }
    parent.keys().map(|l| (*l, find(&parent, *l))).collect()
}

/// Re-spells whole components of `g` at once, each with probability `p`.
pub fn respell_components(rng: &mut StdRng, t: &Term, g: &NameGraph, pool: &[&str], p: f64) -> Term {
    let comp = components(t, g);
    let mut spelling: BTreeMap<Label, Option<&str>> = BTreeMap::new();
    let mut pi = Renaming::new();
    for (l, root) in &comp {
        let s = *spelling
            .entry(*root)
            .or_insert_with(|| rng.gen_bool(p).then(|| *pool.choose(rng).unwrap()));
        if let Some(s) = s {
            pi.insert(*l, s);
        }
    }
    t.rename(&pi)
}

/// A renaming of `t` that is sub-alpha-equivalent under `g`: name sharing is
/// preserved inside every connected component of `g` and among the labels
/// outside `g`, while different components may collide freely.
pub fn consistent_variant(rng: &mut StdRng, t: &Term, g: &NameGraph, pool: &[&str]) -> Term {
    let texts = t.label_texts().unwrap();
    let comp = components(t, g);
    // Fresh spellings are drawn per (component, old text); outside `g` the
    // component is shared, so the drawing must be injective there.
    let mut chosen: BTreeMap<(Option<Label>, String), String> = BTreeMap::new();
    let mut taken: BTreeMap<Option<Label>, BTreeSet<String>> = BTreeMap::new();
    let mut counter = 0;
    let mut pi = Renaming::new();
    for (l, s) in &texts {
        let comp = comp.get(l).copied();
        let key = (comp, s.to_string());
        let name = match chosen.get(&key) {
            Some(n) => n.clone(),
            None => {
                let used = taken.entry(comp).or_default();
                let mut candidates: Vec<&str> =
                    pool.iter().copied().filter(|c| !used.contains(*c)).collect();
                candidates.shuffle(rng);
                let n = match candidates.first() {
                    Some(c) => c.to_string(),
                    None => {
                        counter += 1;
                        format!("w{counter}")
                    }
                };
                used.insert(n.clone());
                chosen.insert(key, n.clone());
                n
            }
        };
        pi.insert(*l, name);
    }
    t.rename(&pi)
}

// ---------------------------------------------------------------- SIMPL

#[derive(Clone, Copy, PartialEq)]
pub enum Kind {
    Var,
    Fun(usize),
    Blocked,
}

/// Generates closed, terminating SIMPL programs: every name is bound, calls
/// have the right arity, no function can reach itself and `error()` never occurs.
pub struct SimplGen<'r> {
    pub rng: &'r mut StdRng,
    pub ids: Ids,
}

pub type Scope = Vec<(String, Kind)>;

fn visible(scope: &Scope) -> Vec<(String, Kind)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (n, k) in scope.iter().rev() {
        if seen.insert(n.clone()) {
            out.push((n.clone(), *k));
        }
    }
    out
}

impl SimplGen<'_> {
    fn name(&mut self, text: &str) -> Name {
        Name::new(text, self.ids.next())
    }

    fn any_name(&mut self) -> &'static str {
        if self.rng.gen_bool(0.8) {
            VAR_POOL.choose(self.rng).unwrap()
        } else {
            FUN_POOL.choose(self.rng).unwrap()
        }
    }

    pub fn program(&mut self) -> SimplProgram {
        let n = self.rng.gen_range(1..4);
        let mut names: Vec<&str> = FUN_POOL.to_vec();
        names.shuffle(self.rng);
        let names = &names[..n];
        let arities: Vec<usize> = (0..n).map(|_| self.rng.gen_range(0..3)).collect();
        let mut fdefs = Vec::new();
        for i in 0..n {
            let mut scope: Scope = Vec::new();
            for j in 0..n {
                let k = if j < i { Kind::Fun(arities[j]) } else { Kind::Blocked };
                scope.push((names[j].to_string(), k));
            }
            let fname = self.name(names[i]);
            let params = self.params(arities[i], &mut scope);
            let depth = self.rng.gen_range(1..4);
            let body = self.exp(&mut scope, depth);
            fdefs.push(FDef::new(fname, params, body));
        }
        let mut scope: Scope = names
            .iter()
            .zip(&arities)
            .map(|(n, a)| (n.to_string(), Kind::Fun(*a)))
            .collect();
        let depth = self.rng.gen_range(2..5);
        let main = vec![self.exp(&mut scope, depth)];
        SimplProgram { fdefs, main }
    }

    fn params(&mut self, arity: usize, scope: &mut Scope) -> Vec<Name> {
        let mut texts: Vec<&str> = VAR_POOL.to_vec();
        texts.shuffle(self.rng);
        texts[..arity]
            .iter()
            .map(|t| {
                scope.push((t.to_string(), Kind::Var));
                self.name(t)
            })
            .collect()
    }

    /// An expression whose free names all resolve in `scope`.
    pub fn exp(&mut self, scope: &mut Scope, depth: u32) -> Exp {
        let vis = visible(scope);
        let vars: Vec<String> = vis
            .iter()
            .filter(|(_, k)| *k == Kind::Var)
            .map(|(n, _)| n.clone())
            .collect();
        let funs: Vec<(String, usize)> = vis
            .iter()
            .filter_map(|(n, k)| match k {
                Kind::Fun(a) => Some((n.clone(), *a)),
                _ => None,
            })
            .collect();
        let leaf = |g: &mut Self| -> Exp {
            if !vars.is_empty() && g.rng.gen_bool(0.6) {
                let v = vars.choose(g.rng).unwrap().clone();
                Exp::Var(g.name(&v))
            } else {
                Exp::Int(g.rng.gen_range(0..4))
            }
        };
        if depth == 0 {
            return leaf(self);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..20) {
            0..=2 => leaf(self),
            3..=4 => Exp::add(self.exp(scope, d), self.exp(scope, d)),
            5 => Exp::mul(self.exp(scope, d), self.exp(scope, d)),
            6 => Exp::eq(self.exp(scope, d), self.exp(scope, d)),
            7 => Exp::not(self.exp(scope, d)),
            8..=9 => Exp::if_(
                self.exp(scope, d),
                self.exp(scope, d),
                self.exp(scope, d),
            ),
            10..=12 => {
                let init = self.exp(scope, d);
                let x = self.any_name();
                let name = self.name(x);
                scope.push((x.to_string(), Kind::Var));
                let body = self.exp(scope, d);
                scope.pop();
                Exp::let_(name, init, body)
            }
            13..=15 => {
                let f = self.any_name();
                let fname = self.name(f);
                let arity = self.rng.gen_range(0..3);
                let mark = scope.len();
                scope.push((f.to_string(), Kind::Blocked));
                let params = self.params(arity, scope);
                let fbody = self.exp(scope, d);
                scope.truncate(mark);
                scope.push((f.to_string(), Kind::Fun(arity)));
                let body = self.exp(scope, d);
                scope.pop();
                Exp::LetFun(Box::new(FDef::new(fname, params, fbody)), Box::new(body))
            }
            _ if !funs.is_empty() => {
                let (f, a) = funs.choose(self.rng).unwrap().clone();
                let name = self.name(&f);
                let args = (0..a).map(|_| self.exp(scope, d)).collect();
                Exp::Call(name, args)
            }
            _ => leaf(self),
        }
    }

    /// An expression over free variables drawn from the variable pool.
    pub fn open_exp(&mut self, depth: u32) -> Exp {
        let mut scope: Scope = VAR_POOL.iter().map(|v| (v.to_string(), Kind::Var)).collect();
        self.exp(&mut scope, depth)
    }
}

pub fn gen_simpl(rng: &mut StdRng) -> SimplProgram {
    SimplGen {
        rng,
        ids: Ids::default(),
    }
    .program()
}

/// A random SIMPL program run through one of the naive transformations.
pub fn simpl_case(rng: &mut StdRng) -> Case {
    let mut g = SimplGen {
        rng,
        ids: Ids::default(),
    };
    let p = g.program();
    let raw = match g.rng.gen_range(0..3) {
        0 => {
            let x = *VAR_POOL.choose(g.rng).unwrap();
            let depth = g.rng.gen_range(0..3);
            let e = g.open_exp(depth);
            subst_p(&p, x, &e)
        }
        1 => {
            let f = p.fdefs.choose(g.rng).unwrap().name.text.clone();
            inline_raw(&p, &f).unwrap()
        }
        _ => lambda_lift_raw(&p),
    };
    Case {
        kind: "simpl",
        gs: resolve_simpl(&p),
        t: raw.to_term(),
        resolver: &SimplResolver,
    }
}

// ---------------------------------------------------------------- machines

pub fn gen_machine(rng: &mut StdRng) -> Machine {
    let mut ids = Ids::default();
    let n = rng.gen_range(1..5);
    let mut names: Vec<&str> = STATE_POOL.to_vec();
    names.shuffle(rng);
    let names = &names[..n];
    let states = names
        .iter()
        .map(|s| {
            let name = Name::new(*s, ids.next());
            let k = rng.gen_range(0..4);
            let mut events: Vec<&str> = EVENTS.to_vec();
            events.shuffle(rng);
            let transitions = events[..k.min(EVENTS.len())]
                .iter()
                .map(|e| Transition {
                    event: e.to_string(),
                    target: Name::new(*names.choose(rng).unwrap(), ids.next()),
                })
                .collect();
            State { name, transitions }
        })
        .collect();
    Machine { states }
}

/// An injective re-spelling of the states of `m`, drawn from a pool that
/// collides with the compiler's generated names.
pub fn state_renaming(rng: &mut StdRng, m: &Machine) -> BTreeMap<String, String> {
    let mut pool: Vec<&str> = STATE_POOL.to_vec();
    pool.extend(["main-dispatch", "opened", "c-dispatch"]);
    pool.shuffle(rng);
    m.states
        .iter()
        .zip(pool)
        .map(|(s, n)| (s.name.text.clone(), n.to_string()))
        .collect()
}

pub fn machine_case(rng: &mut StdRng) -> Case {
    let m = gen_machine(rng);
    Case {
        kind: "machine",
        gs: resolve_stm(&m),
        t: compile(&m).to_term(),
        resolver: &SimplResolver,
    }
}

/// Cycles through the three corpora.
pub fn any_case(rng: &mut StdRng, i: usize) -> Case {
    match i % 3 {
        0 => lambda_case(rng),
        1 => simpl_case(rng),
        _ => machine_case(rng),
    }
}
