//! Shared inputs for the benchmarks.

use abnorm_core::catalog::{AlgebraId, Catalog, Family};
use abnorm_core::lie::StructureConstants;
use abnorm_core::{SeminormBody, Subspace};

/// `so(3) + R` with its strictly abnormal plane.
pub fn so3_plane() -> (StructureConstants, Subspace) {
    let id = AlgebraId::new(Family::G37);
    let cat = Catalog::builtin();
    let alg = cat.instantiate(&id).expect("builtin family");
    let plane = cat
        .known_generating_subspace(&id)
        .expect("valid parameters")
        .expect("listed plane")
        .subspace()
        .expect("independent spanners");
    (alg, plane)
}

pub fn quadrilateral() -> SeminormBody {
    SeminormBody::polygon(vec![[1.0, 0.0], [0.0, 1.0], [-2.0, 0.0], [0.0, -1.0]]).expect("convex")
}
