//! Labeled s-expression terms.
//!
//! Every name occurrence carries a [`Label`]. Transformations copy labels when
//! they copy names out of a source program and allocate fresh labels for names
//! they synthesize. Labels are therefore not unique inside a generated term, but
//! all occurrences of one label must spell the same text.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Error;

static NEXT_LABEL: AtomicU64 = AtomicU64::new(1);

/// Where a name occurrence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Source,
    Synthesized,
}

/// A variable-occurrence identifier.
///
/// Equality, ordering and hashing only look at the id; provenance is carried
/// along for display and for [`Term::mark`].
#[derive(Debug, Clone, Copy)]
pub struct Label {
    id: u64,
    provenance: Provenance,
}

impl Label {
    pub const fn new(id: u64, provenance: Provenance) -> Self {
        Label { id, provenance }
    }

    pub const fn source(id: u64) -> Self {
        Label::new(id, Provenance::Source)
    }

    pub const fn synthesized(id: u64) -> Self {
        Label::new(id, Provenance::Synthesized)
    }

    pub fn id(self) -> u64 {
        self.id
    }

    pub fn provenance(self) -> Provenance {
        self.provenance
    }

    pub fn is_synthesized(self) -> bool {
        self.provenance == Provenance::Synthesized
    }

    pub fn with_provenance(self, provenance: Provenance) -> Self {
        Label { provenance, ..self }
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Label {}

impl Hash for Label {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.provenance {
            Provenance::Source => write!(f, "{}", self.id),
            Provenance::Synthesized => write!(f, "'{}", self.id),
        }
    }
}

/// Returns a synthesized label that no earlier call (and no parser) produced.
pub fn fresh_label() -> Label {
    Label::synthesized(NEXT_LABEL.fetch_add(1, Ordering::Relaxed))
}

/// Returns a fresh source label, used by the parsers.
pub fn fresh_source_label() -> Label {
    Label::source(NEXT_LABEL.fetch_add(1, Ordering::Relaxed))
}

/// Makes sure later fresh labels are strictly greater than `id`.
pub(crate) fn reserve_through(id: u64) {
    NEXT_LABEL.fetch_max(id + 1, Ordering::Relaxed);
}

/// Deterministic supply of synthesized labels for one transformation run.
///
/// Ids start right above the largest id of the transformation input, so two
/// label-equivalent inputs yield label-equivalent outputs. The global counter
/// is bumped past every id handed out here.
#[derive(Debug, Clone)]
pub struct LabelGen {
    next: u64,
}

impl LabelGen {
    pub fn starting_at(next: u64) -> Self {
        LabelGen { next: next.max(1) }
    }

    pub fn above<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        let max = labels.into_iter().map(Label::id).max().unwrap_or(0);
        LabelGen::starting_at(max + 1)
    }

    pub fn fresh(&mut self) -> Label {
        let id = self.next;
        self.next += 1;
        reserve_through(id);
        Label::synthesized(id)
    }
}

/// A name occurrence: its text plus the label identifying the occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Name {
    pub text: String,
    pub label: Label,
}

impl Name {
    pub fn new(text: impl Into<String>, label: Label) -> Self {
        Name {
            text: text.into(),
            label,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.text, self.label)
    }
}

/// Constant leaves of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Sym(String),
    Int(i64),
    Str(String),
}

impl Atom {
    pub fn sym(s: impl Into<String>) -> Self {
        Atom::Sym(s.into())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(s) => f.write_str(s),
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Str(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Atom),
    Name(Name),
    Compound(Vec<Term>),
}

/// Partial map from labels to replacement texts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Renaming {
    map: BTreeMap<Label, String>,
}

impl Renaming {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: Label, text: impl Into<String>) {
        self.map.insert(label, text.into());
    }

    pub fn get(&self, label: Label) -> Option<&str> {
        self.map.get(&label).map(String::as_str)
    }

    pub fn contains(&self, label: Label) -> bool {
        self.map.contains_key(&label)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = Label> + '_ {
        self.map.keys().copied()
    }

    pub fn codomain(&self) -> impl Iterator<Item = &str> + '_ {
        self.map.values().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> + '_ {
        self.map.iter().map(|(l, s)| (*l, s.as_str()))
    }

    /// Union of two renamings; entries of `other` win on overlap.
    pub fn union(&self, other: &Renaming) -> Renaming {
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|(l, s)| (*l, s.clone())));
        Renaming { map }
    }
}

impl FromIterator<(Label, String)> for Renaming {
    fn from_iter<I: IntoIterator<Item = (Label, String)>>(iter: I) -> Self {
        Renaming {
            map: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, s)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l} ↦ {s}")?;
        }
        f.write_str("}")
    }
}

impl Term {
    pub fn sym(s: &str) -> Term {
        Term::Const(Atom::sym(s))
    }

    pub fn int(n: i64) -> Term {
        Term::Const(Atom::Int(n))
    }

    pub fn name(text: impl Into<String>, label: Label) -> Term {
        Term::Name(Name::new(text, label))
    }

    /// A compound whose head is the symbol `tag`.
    pub fn node(tag: &str, children: impl IntoIterator<Item = Term>) -> Term {
        let mut v = vec![Term::sym(tag)];
        v.extend(children);
        Term::Compound(v)
    }

    /// Visits every name occurrence in left-to-right order.
    pub fn for_each_name<'a>(&'a self, f: &mut impl FnMut(&'a Name)) {
        match self {
            Term::Const(_) => {}
            Term::Name(n) => f(n),
            Term::Compound(ts) => ts.iter().for_each(|t| t.for_each_name(f)),
        }
    }

    /// Rebuilds the term, mapping every name occurrence through `f`.
    pub fn map_names(&self, f: &mut impl FnMut(&Name) -> Name) -> Term {
        match self {
            Term::Const(c) => Term::Const(c.clone()),
            Term::Name(n) => Term::Name(f(n)),
            Term::Compound(ts) => Term::Compound(ts.iter().map(|t| t.map_names(f)).collect()),
        }
    }

    /// Label → text for every label, failing on occurrences that disagree.
    pub fn label_texts(&self) -> Result<BTreeMap<Label, &str>, Error> {
        let mut out: BTreeMap<Label, &str> = BTreeMap::new();
        let mut bad = None;
        self.for_each_name(&mut |n| {
            if bad.is_some() {
                return;
            }
            match out.get(&n.label) {
                Some(prev) if *prev != n.text => {
                    bad = Some(Error::InconsistentLabel {
                        label: n.label,
                        first: prev.to_string(),
                        second: n.text.clone(),
                    })
                }
                Some(_) => {}
                None => {
                    out.insert(n.label, n.text.as_str());
                }
            }
        });
        match bad {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// The text spelled at label `v`.
    pub fn name_at(&self, v: Label) -> Result<&str, Error> {
        let mut found: Option<&str> = None;
        let mut bad = None;
        self.for_each_name(&mut |n| {
            if n.label != v || bad.is_some() {
                return;
            }
            match found {
                Some(prev) if prev != n.text => {
                    bad = Some(Error::InconsistentLabel {
                        label: v,
                        first: prev.to_string(),
                        second: n.text.clone(),
                    })
                }
                Some(_) => {}
                None => found = Some(n.text.as_str()),
            }
        });
        if let Some(e) = bad {
            return Err(e);
        }
        found.ok_or(Error::LabelNotFound(v))
    }

    /// The set of labels occurring in the term (provenance of the first occurrence).
    pub fn labels(&self) -> Result<BTreeSet<Label>, Error> {
        Ok(self.label_texts()?.into_keys().collect())
    }

    /// Labels without the consistency check.
    pub fn labels_unchecked(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.for_each_name(&mut |n| {
            out.insert(n.label);
        });
        out
    }

    /// All name texts occurring in the term.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_name(&mut |n| {
            out.insert(n.text.clone());
        });
        out
    }

    /// Replaces the text of every occurrence whose label is in `pi`.
    pub fn rename(&self, pi: &Renaming) -> Term {
        if pi.is_empty() {
            return self.clone();
        }
        self.map_names(&mut |n| match pi.get(n.label) {
            Some(text) => Name::new(text, n.label),
            None => n.clone(),
        })
    }

    /// Equal up to name texts: same shape, same constants, same labels.
    pub fn label_equiv(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Name(a), Term::Name(b)) => a.label == b.label,
            (Term::Compound(a), Term::Compound(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.label_equiv(y))
            }
            _ => false,
        }
    }

    /// Flags every occurrence of text `s` as synthesized, keeping its id.
    ///
    /// Used to break hygiene on purpose: marked source names are treated like
    /// names the transformation introduced itself.
    pub fn mark(&self, s: &str) -> Term {
        self.map_names(&mut |n| {
            if n.text == s {
                Name::new(n.text.clone(), n.label.with_provenance(Provenance::Synthesized))
            } else {
                n.clone()
            }
        })
    }

    /// Same as `==` but also compares provenance of every label.
    pub fn identical(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Name(a), Term::Name(b)) => {
                a == b && a.label.provenance() == b.label.provenance()
            }
            (Term::Compound(a), Term::Compound(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.identical(y))
            }
            _ => false,
        }
    }

    /// Relabels the term so that the k-th distinct label (in order of first
    /// occurrence) gets id `base + k`, keeping provenance.
    ///
    /// Two independently parsed copies of one program become label-equivalent.
    pub fn relabel_by_position(&self, base: u64) -> Term {
        let mut seen: BTreeMap<Label, u64> = BTreeMap::new();
        self.map_names(&mut |n| {
            let next = base + seen.len() as u64;
            let id = *seen.entry(n.label).or_insert(next);
            Name::new(n.text.clone(), Label::new(id, n.label.provenance()))
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Name(n) => write!(f, "{n}"),
            Term::Compound(ts) => {
                f.write_str("(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(id: u64) -> Term {
        Term::name("x", Label::source(id))
    }

    fn lam(n: Term, b: Term) -> Term {
        Term::node("lam", [n, b])
    }

    fn app(a: Term, b: Term) -> Term {
        Term::node("app", [a, b])
    }

    // λx¹.(λx². x³ x'⁵) x⁴
    fn shadowed() -> Term {
        let x5 = Term::name("x", Label::synthesized(5));
        app(lam(x(1), app(lam(x(2), app(x(3), x5)), x(4))), Term::int(0))
    }

    #[test]
    fn name_at_finds_text() {
        let t = shadowed();
        assert_eq!(t.name_at(Label::source(3)).unwrap(), "x");
        assert_eq!(x(7).name_at(Label::source(7)).unwrap(), "x");
        assert!(matches!(
            t.name_at(Label::source(99)),
            Err(Error::LabelNotFound(_))
        ));
    }

    #[test]
    fn name_at_rejects_inconsistent_occurrences() {
        let t = Term::Compound(vec![x(1), Term::name("y", Label::source(1))]);
        assert!(matches!(
            t.name_at(Label::source(1)),
            Err(Error::InconsistentLabel { .. })
        ));
        assert!(t.labels().is_err());
    }

    #[test]
    fn labels_of_examples() {
        assert!(Term::int(0).labels().unwrap().is_empty());
        let ids: Vec<u64> = shadowed().labels().unwrap().into_iter().map(Label::id).collect();
        assert_eq!(ids, vec![1, 2, 3, 4, 5]);
        let dup = Term::Compound(vec![
            Term::name("a", Label::source(9)),
            Term::name("a", Label::source(9)),
        ]);
        assert_eq!(dup.labels().unwrap().len(), 1);
        let five = shadowed().labels().unwrap().into_iter().last().unwrap();
        assert!(five.is_synthesized());
    }

    #[test]
    fn rename_replaces_text_and_keeps_labels() {
        let t = shadowed();
        assert_eq!(t.rename(&Renaming::new()), t);
        let pi: Renaming = [(Label::source(2), "α".to_string()), (Label::source(3), "α".to_string())]
            .into_iter()
            .collect();
        let expected = app(
            lam(
                x(1),
                app(
                    lam(
                        Term::name("α", Label::source(2)),
                        app(Term::name("α", Label::source(3)), Term::name("x", Label::synthesized(5))),
                    ),
                    x(4),
                ),
            ),
            Term::int(0),
        );
        assert_eq!(t.rename(&pi), expected);
        let unrelated: Renaming = [(Label::source(42), "q".to_string())].into_iter().collect();
        assert_eq!(t.rename(&unrelated), t);
    }

    #[test]
    fn label_equivalence_ignores_texts() {
        // p1 = λx¹.(λy³. y⁴ y⁵) x², p2 = λx¹.(λx³. x⁴ x⁵) x²
        let n = |s: &str, id| Term::name(s, Label::source(id));
        let p1 = lam(n("x", 1), app(lam(n("y", 3), app(n("y", 4), n("y", 5))), n("x", 2)));
        let p2 = lam(n("x", 1), app(lam(n("x", 3), app(n("x", 4), n("x", 5))), n("x", 2)));
        assert!(p1.label_equiv(&p2));
        assert!(!x(1).label_equiv(&x(2)));
        assert!(!Term::int(1).label_equiv(&Term::int(2)));
    }

    #[test]
    fn mark_flips_provenance_of_matching_text_only() {
        let t = Term::Compound(vec![x(1), Term::name("it", Label::source(2))]);
        let m = t.mark("it");
        assert_eq!(m, t);
        assert!(!m.identical(&t));
        let labels: Vec<Label> = m.labels().unwrap().into_iter().collect();
        assert!(!labels[0].is_synthesized());
        assert!(labels[1].is_synthesized());
        assert!(t.mark("zzz").identical(&t));
        match x(3).mark("x") {
            Term::Name(n) => assert_eq!(n.label.provenance(), Provenance::Synthesized),
            _ => unreachable!(),
        }
    }

    #[test]
    fn fresh_labels_are_distinct_and_synthesized() {
        let a = fresh_label();
        let b = fresh_label();
        assert_ne!(a, b);
        assert!(a.is_synthesized());
        let many: BTreeSet<Label> = (0..10_000).map(|_| fresh_label()).collect();
        assert_eq!(many.len(), 10_000);
    }

    #[test]
    fn fresh_labels_are_distinct_across_threads() {
        let handles: Vec<_> = (0..4)
            .map(|_| std::thread::spawn(|| (0..1000).map(|_| fresh_label()).collect::<Vec<_>>()))
            .collect();
        let all: BTreeSet<Label> = handles.into_iter().flat_map(|h| h.join().unwrap()).collect();
        assert_eq!(all.len(), 4000);
    }

    #[test]
    fn label_gen_is_deterministic_and_reserves_ids() {
        let t = shadowed();
        let mut a = LabelGen::above(t.labels_unchecked());
        let mut b = LabelGen::above(t.labels_unchecked());
        assert_eq!(a.fresh().id(), 6);
        assert_eq!(b.fresh().id(), 6);
        let big = LabelGen::starting_at(1 << 40).fresh();
        assert!(fresh_label().id() > big.id());
    }

    #[test]
    fn debug_rendering_uses_ticks_for_synthesized() {
        let t = Term::node("app", [x(3), Term::name("x", Label::synthesized(5))]);
        assert_eq!(t.to_string(), "(app x@3 x@'5)");
    }
}
