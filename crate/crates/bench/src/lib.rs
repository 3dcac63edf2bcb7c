//! Benchmark fixtures for `fanocalc`; the benches live in `benches/`.

use fanocalc::{Catalog, FamilyRecord};

/// The codimension one rows of the bundled catalogue.
pub fn hypersurfaces(catalog: &Catalog) -> Vec<FamilyRecord> {
    catalog.records().filter(|r| r.codim == 1).cloned().collect()
}
