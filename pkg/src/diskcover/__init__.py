"""Exact minimum-cardinality coverage of points by line-separable disks.

Solves the disk coverage problem when a line separates the points from
the disk centers and any two disk boundaries cross at most once above
it: congruent disks, disks centered on the line, and lower half-planes
all qualify.  The solver prunes dominated and "sandwiched" disks, then
reduces the survivors to a 1D segment cover solved greedily.
"""

from .geom import Disk, GeometryError, HalfPlane, Point, Region
from .geom import boundary_crossing_x, contains_region, point_in_region, region_extent, upper_boundary_y
from .instance import (Instance, InstanceError, SchemaError, SortedInstance,
                       dump_instance, dumps_instance, load_instance, loads_instance,
                       normalize, prune_contained, sorted_points, validate)
from .sigma import Envelope, SigmaIndex, SigmaTable, build_sigma_index, merge_envelopes
from .prune import (CapChain, DualEnvelope, FarthestStruct, PruneIndex,
                    build_cap_chain, build_dual_envelope, build_prune_index,
                    cap_contains, farthest_point, find_prunable)
from .reduce import Solution, SolveOptions, compute_ab, build_segments, greedy_cover_1d, solve
from .oracle import (GenParams, GuardExceeded, brute_min_cover, brute_prunable,
                     brute_sigma, gen_instance, verify_cover)

__version__ = "0.1.0"
