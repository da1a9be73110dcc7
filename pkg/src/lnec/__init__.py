"""Linear network error-correction codes on acyclic networks.

Construction of multicast, broadcast, dispersion and generic MDS codes,
exact minimum-distance analysis, and minimum-distance decoding over
prime fields and GF(2^m).
"""

__version__ = "0.1.0"

from .analyze import (  # noqa: E402
    CodeReport,
    DistanceReport,
    RegularityClass,
    certify_mds,
    classify,
    min_distance,
    singleton_check,
)
from .code import (  # noqa: E402
    DecodingView,
    LnecCode,
    decoding_view,
    error_space,
    extend_kernels,
    message_space,
    restrict_pattern,
    transfer_matrix,
)
from .construct import (  # noqa: E402
    FieldSizeReport,
    FieldTooSmall,
    construct_broadcast_mds,
    construct_dispersion_mds,
    construct_generic_mds,
    construct_multicast_mds,
    construct_random,
    field_size_bounds,
)
from .decode import correction_capability, decode_min_distance, transmit  # noqa: E402
from .galois import (  # noqa: E402
    GF,
    FieldSpec,
    field_op,
    get_field,
    mat_rank,
    member_of_subspace_sum,
    spaces_intersect_nontrivially,
)
from .network import (  # noqa: E402
    Channel,
    Network,
    Target,
    disjoint_path_family,
    enumerate_R,
    min_cut,
    min_cut_channelset,
    min_cut_node,
    min_cut_nodeset,
    pattern_rank,
    topo_order,
)
