use crate::term::Name;

use super::ast::{Exp, FDef, SimplProgram};

/// Renders a program in the concrete syntax accepted by [`super::parse_simpl`].
///
/// With `show_labels`, names are printed as `name@id` (`name@'id` for
/// synthesized labels). Such output only parses back when labels are unique.
pub fn pretty_simpl(p: &SimplProgram, show_labels: bool) -> String {
    let pr = Printer { show_labels };
    let mut out = String::new();
    for d in &p.fdefs {
        out.push_str(&pr.fdef(d, 0));
        out.push_str(";\n");
    }
    for (i, e) in p.main.iter().enumerate() {
        if i > 0 {
            out.push_str(";\n");
        }
        out.push_str(&pr.exp(e, 0, 0));
    }
    if !p.main.is_empty() {
        out.push('\n');
    }
    out
}

/// Renders one expression on its own.
pub fn pretty_exp(e: &Exp, show_labels: bool) -> String {
    Printer { show_labels }.exp(e, 0, 0)
}

struct Printer {
    show_labels: bool,
}

// precedence levels: 0 let/if, 1 ==, 2 +, 3 *, 4 unary, 5 atom
impl Printer {
    fn name(&self, n: &Name) -> String {
        if self.show_labels {
            n.to_string()
        } else {
            n.text.clone()
        }
    }

    fn fdef(&self, d: &FDef, indent: usize) -> String {
        let params: Vec<String> = d.params.iter().map(|p| self.name(p)).collect();
        let head = format!("fun {}({}) =", self.name(&d.name), params.join(", "));
        let body = self.exp(&d.body, 0, indent + 2);
        if body.contains('\n') {
            format!("{head}\n{}{body}", " ".repeat(indent + 2))
        } else {
            format!("{head} {body}")
        }
    }

    fn exp(&self, e: &Exp, level: u8, indent: usize) -> String {
        let pad = |n: usize| " ".repeat(n);
        let wrap = |need: u8, s: String| if level > need { format!("({s})") } else { s };
        match e {
            Exp::Var(n) => self.name(n),
            Exp::Int(n) => n.to_string(),
            Exp::Str(s) => format!("{s:?}"),
            Exp::Error => "error()".to_string(),
            Exp::Call(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.exp(a, 0, indent)).collect();
                format!("{}({})", self.name(f), args.join(", "))
            }
            Exp::Not(a) => wrap(4, format!("!{}", self.exp(a, 4, indent))),
            Exp::Mul(a, b) => wrap(
                3,
                format!("{}*{}", self.exp(a, 3, indent), self.exp(b, 4, indent)),
            ),
            Exp::Add(a, b) => wrap(
                2,
                format!("{} + {}", self.exp(a, 2, indent), self.exp(b, 3, indent)),
            ),
            Exp::Eq(a, b) => wrap(
                1,
                format!("{} == {}", self.exp(a, 2, indent), self.exp(b, 2, indent)),
            ),
            Exp::If(c, t, f) => {
                let inner = if level > 0 { indent + 1 } else { indent };
                let c = self.exp(c, 0, inner);
                let t = self.exp(t, 0, inner + 2);
                let f = self.exp(f, 0, inner + 2);
                let flat = format!("if {c} then {t} else {f}");
                let s = if flat.contains('\n') || flat.len() > 60 {
                    format!(
                        "if {c}\n{}then {t}\n{}else {f}",
                        pad(inner + 2),
                        pad(inner + 2)
                    )
                } else {
                    flat
                };
                wrap(0, s)
            }
            Exp::Let(x, init, body) => {
                let inner = if level > 0 { indent + 1 } else { indent };
                let s = format!(
                    "let {} = {} in\n{}{}",
                    self.name(x),
                    self.exp(init, 0, inner + 2),
                    pad(inner + 2),
                    self.exp(body, 0, inner + 2)
                );
                wrap(0, s)
            }
            Exp::LetFun(d, body) => {
                let inner = if level > 0 { indent + 1 } else { indent };
                let s = format!(
                    "let {} in\n{}{}",
                    self.fdef(d, inner + 2),
                    pad(inner + 2),
                    self.exp(body, 0, inner + 2)
                );
                wrap(0, s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_simpl;
    use super::*;

    fn round(src: &str) -> String {
        pretty_simpl(&parse_simpl(src).unwrap(), false)
    }

    #[test]
    fn prints_lets_on_separate_lines() {
        assert_eq!(
            round("fun zero() = 0; fun succ(x) = let n = 1 in x + n; let n = x + 5 in succ(succ(n + x + zero()))"),
            "fun zero() = 0;\nfun succ(x) =\n  let n = 1 in\n    x + n;\nlet n = x + 5 in\n  succ(succ(n + x + zero()))\n"
        );
    }

    #[test]
    fn parentheses_only_where_needed() {
        assert_eq!(round("(1 + 2) * 3 + 4*5"), "(1 + 2)*3 + 4*5\n");
        assert_eq!(round("a + (b + c)"), "a + (b + c)\n");
        assert_eq!(round("!(a == b)"), "!(a == b)\n");
        assert_eq!(round("!(let t = 1 in t)"), "!(let t = 1 in\n   t)\n");
    }

    #[test]
    fn empty_main_prints_only_functions() {
        assert_eq!(round("fun f() = 1;"), "fun f() = 1;\n");
    }

    #[test]
    fn printing_is_idempotent_through_parsing() {
        let src = "fun or(x, y) = let tmp = x in if tmp == 0 then y else tmp;\
                   fun and(x, y) = !or(!x, !y);\
                   let or = 1 in let tmp = 0 in and(or, tmp)";
        let once = round(src);
        assert_eq!(round(&once), once);
    }

    #[test]
    fn labels_on_request() {
        let p = parse_simpl("fun f@1(x@2) = x@3;").unwrap();
        assert_eq!(pretty_simpl(&p, true), "fun f@1(x@2) = x@3;\n");
    }
}
