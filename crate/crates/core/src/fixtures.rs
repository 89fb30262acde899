//! Small reference systems used throughout the tests and the documentation.

use crate::io::SystemDocument;
use crate::markov::{validate_system, MarkovSystem};

fn build(name: &str, doc: SystemDocument) -> MarkovSystem {
    validate_system(&doc)
        .expect("fixture systems are valid")
        .with_name(name)
}

/// Two letters `a`, `b` with `a->a:(1,0)`, `a->b:(0,1)`, `b->a:(1,0)`.
pub fn gm() -> MarkovSystem {
    build("gm", gm_document())
}

pub fn gm_document() -> SystemDocument {
    SystemDocument::new(
        2,
        &["a", "b"],
        &[("a", "a", &[1, 0]), ("a", "b", &[0, 1]), ("b", "a", &[1, 0])],
    )
}

/// GM with every label negated; its cones are the negatives of GM's.
pub fn gm_negated() -> MarkovSystem {
    build(
        "gm-negated",
        SystemDocument::new(
            2,
            &["a", "b"],
            &[("a", "a", &[-1, 0]), ("a", "b", &[0, -1]), ("b", "a", &[-1, 0])],
        ),
    )
}

/// One letter with a single self-loop labelled `(1,0)`.
pub fn self_loop() -> MarkovSystem {
    build("self-loop", SystemDocument::new(2, &["a"], &[("a", "a", &[1, 0])]))
}

/// One letter, no transitions: a product-type system of rank `d`.
pub fn product(d: i64) -> MarkovSystem {
    build("product", SystemDocument::new(d, &["a"], &[]))
}

/// `a->b->c->a` with labels `e1`, `e2`, `e3`.
pub fn three_cycle() -> MarkovSystem {
    build(
        "three-cycle",
        SystemDocument::new(
            3,
            &["a", "b", "c"],
            &[("a", "b", &[1, 0, 0]), ("b", "c", &[0, 1, 0]), ("c", "a", &[0, 0, 1])],
        ),
    )
}

/// Two disjoint self-loops with opposite classes; no transverse class exists.
pub fn gordan_pair() -> MarkovSystem {
    build(
        "gordan-pair",
        SystemDocument::new(2, &["a", "b"], &[("a", "a", &[1, 0]), ("b", "b", &[-1, 0])]),
    )
}

/// Three letters, each with a self-loop labelled by a unit vector of rank 3.
pub fn three_self_loops() -> MarkovSystem {
    build(
        "three-self-loops",
        SystemDocument::new(
            3,
            &["a", "b", "c"],
            &[("a", "a", &[1, 0, 0]), ("b", "b", &[0, 1, 0]), ("c", "c", &[0, 0, 1])],
        ),
    )
}
