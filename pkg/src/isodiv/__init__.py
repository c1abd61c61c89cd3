"""Glued triangle volumes: construction, algebraic descriptors, spectra and transplantation."""
from .errors import (ContinuityViolation, ConvergenceFailure, DimensionMismatch, DivError,
                     FormatError, GeometryError, GluingError, NotSymmetric, OutOfCopy,
                     OverlapError, RankDeficient, ShapeMismatch, SizeGuard, TileMismatch,
                     WordError)
from .tiling import (DiV, Isometry, Placement, SideLabel, Tile, build_div, check_realizable,
                     div_equivalent, from_generators, reflect_across_side, relabel_swap,
                     to_global, to_local)
from .algebra import (ColoredGraph, PermGenerators, adjacency, auxiliary, colored_iso,
                      generators_of, graph_of, graph_signature, group_order,
                      orientation_coloring, structural)
from .spectral import (Spectrum, TransplantationPair, compute_m, cospectral, intertwiners,
                       recover_u, sym_eigen, verify_fixed_point, verify_w_transport)
from .search import Census, PairReport, classify, enumerate_divs, find_pairs, involution_triples

__version__ = "0.1.0"
