//! Removing variable capture from the output of program transformations.
//!
//! A transformation is written naively, copying names from its input and
//! synthesizing new ones as it pleases. [`name_fix`] then compares the name
//! graph of the input with the name graph of the output and renames just
//! enough declarations to restore the intended bindings.
//!
//! ```
//! use namefix::lambda::{parse_lambda, pretty_lambda, LambdaResolver};
//! use namefix::{name_fix, Resolver};
//!
//! let source = parse_lambda(r"\x@1. (\x@2. x@3) x@4").unwrap();
//! let target = parse_lambda(r"\x@1. (\x@2. x@3 x@'5) x@4").unwrap();
//! let gs = LambdaResolver.resolve(&source).unwrap();
//! let (fixed, trace) = name_fix(&gs, &target, &LambdaResolver).unwrap();
//! assert_eq!(trace.len(), 2);
//! assert_eq!(pretty_lambda(&fixed, false), r"\x1. (\x0. x0 x) x1");
//! ```

pub mod cli;
pub mod dot;
pub mod equiv;
pub mod error;
pub mod fix;
pub mod graph;
pub mod lambda;
pub mod resolver;
pub mod simpl;
pub mod stm;
pub(crate) mod syntax;
pub mod term;

pub use dot::{graph_to_dot, trace_to_dot};
pub use equiv::{alpha_equiv, sub_alpha_equiv};
pub use error::{Error, ParseError};
pub use fix::{
    comp_renaming, find_capture, gensym, name_fix, CaptureEdge, CaptureKind, CaptureSet,
    FixStep, FixTrace, RenamingPair,
};
pub use graph::{validate_graph, GraphBuilder, NameGraph, Violation};
pub use resolver::{check_resolver_assumptions, AssumptionReport, AssumptionViolation, Resolver};
pub use term::{fresh_label, fresh_source_label, Atom, Label, LabelGen, Name, Provenance, Renaming, Term};
