//! End-to-end mirror pipeline, multiple-mirror comparison, enumeration.

mod atlas;
mod enumerate;
mod report;

pub use atlas::{
    common_chart, rational_point_probe, shared_setup_check, BirationalAtlas, LaurentPolynomial,
    MirrorError, ProbeRecord, SetupVerdict,
};
pub use enumerate::{cy_subgroups, enumerate_invertible, generate_corpus, CorpusEntry};
pub use report::{atlas_section, mirror_pipeline, MirrorReport};
