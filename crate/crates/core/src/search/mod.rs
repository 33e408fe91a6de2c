//! Exhaustive scans, orbit enumeration and heuristic probes.

pub mod anneal;
pub mod cache;
pub mod kernel;
pub mod orbits;
pub mod probe;
pub mod spectrum;
pub mod verify;

pub use anneal::{anneal, standard_targets, AnnealOutcome, AnnealParams};
pub use cache::{CacheRecord, SearchCache, CACHE_ENV};
pub use kernel::LineMasks;
pub use orbits::{enumerate_orbits, orbit_mass_check, OrbitEnumeration, OrbitRepresentative};
pub use probe::{
    ghidelli_minimal_k, min_cardinality_probe, probe_cardinality, ProbeReport, ProbeStatus,
};
pub use spectrum::{gap_spectrum, Reachability, SpectrumOptions, SpectrumReport};
pub use verify::{
    redei_crosscheck, verify_no_two_special, verify_three_special_uniqueness,
    verify_union_lines_iff, NoTwoReport, RedeiCrosscheckReport, UnionLinesReport, UniquenessReport,
};
