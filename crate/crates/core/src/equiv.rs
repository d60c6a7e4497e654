//! α-equivalence and sub-α-equivalence of labeled programs.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graph::NameGraph;
use crate::resolver::Resolver;
use crate::term::Term;

/// Same shape, same labels, and identical binding structure under `r`.
pub fn alpha_equiv<R: Resolver + ?Sized>(p1: &Term, p2: &Term, r: &R) -> Result<bool, Error> {
    if !p1.label_equiv(p2) {
        return Ok(false);
    }
    Ok(r.resolve(p1)?.edges() == r.resolve(p2)?.edges())
}

/// Equal up to consistent, possibly capturing renaming, relative to `g`.
///
/// The two programs must agree on name sharing along every edge of `g` whose
/// ends both occur in them, and on name sharing among all their labels that
/// are outside `g`.
pub fn sub_alpha_equiv(p1: &Term, p2: &Term, g: &NameGraph) -> Result<bool, Error> {
    if !p1.label_equiv(p2) {
        return Ok(false);
    }
    let n1 = p1.label_texts()?;
    let n2 = p2.label_texts()?;

    for (r, d) in g.edges() {
        if let (Some(r1), Some(d1)) = (n1.get(r), n1.get(d)) {
            // label-equivalence gives the same label set on both sides
            if (r1 == d1) != (n2[r] == n2[d]) {
                return Ok(false);
            }
        }
    }

    // Name sharing among labels outside `g` agrees iff the text pairing is a
    // bijection between the two partitions.
    let mut fwd: BTreeMap<&str, &str> = BTreeMap::new();
    let mut bwd: BTreeMap<&str, &str> = BTreeMap::new();
    for (l, t1) in n1.iter().filter(|(l, _)| !g.contains(**l)) {
        let t2 = n2[l];
        if *fwd.entry(t1).or_insert(t2) != t2 || *bwd.entry(t2).or_insert(t1) != *t1 {
            return Ok(false);
        }
    }
    Ok(true)
}
