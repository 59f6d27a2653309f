"""Exact Voronoi/Delone cell geometry for the A and D lattice families.

The package constructs root and weight lattices from their reflection
groups, builds the associated polytopes (root, Voronoi, Delone, contact,
fundamental simplex) in exact rational arithmetic, verifies facet counts and
volumes against closed forms and an independent numeric oracle, and projects
Voronoi 2-faces onto the Coxeter plane to produce aperiodic tiling patches.
"""

from .coxeter import (
    LatticeSpec,
    cartan_matrix,
    coxeter_number,
    fundamental_weights,
    group_order,
    orbit,
    reflect,
    simple_roots,
)
from .exactnum import Q, Surd, Vector, dot, surd_add, surd_normalize, vec
from .polytope import (
    FaceLattice,
    OrbitPolytope,
    contact_polytope,
    delone_cells_at_origin,
    enumerate_faces,
    euler_check,
    facet_counts_formula,
    facet_geometry_a,
    facet_geometry_d,
    fundamental_simplex,
    root_polytope,
    voronoi_cell,
)
from .project import classify_tiles, coxeter_plane, project_faces, tiling_patch
from .tessellate import delone_neighbors, lattice_contains, verify_tessellation
from .volume import (
    cross_polytope_volume,
    delone_volume_sum_check,
    fundamental_simplex_volume,
    hemicube_volume,
    numeric_volume_oracle,
    pyramid_volume_identity,
    simplex_volume,
    voronoi_volume,
)

__version__ = "0.1.0"
