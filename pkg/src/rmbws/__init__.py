"""Reed-Muller soft-decision decoding built around blockwise successive decoders.

Decoders: blockwise successive (bws), its permutation ensemble (pbws)
and random-automorphism control (autbws), the generalized decomposition
decoder (gbws/rgbws), min-sum recursive decoding and its automorphism
ensemble (rec/autrec), plus Chase II, Wagner, and FHT leaf decoders.
A Monte Carlo harness measures BLER, ML lower bounds, and decode
operation counts over the BI-AWGN channel.
"""

from .automorphisms import (
    AffineMap,
    affine_to_index_perm,
    identity_map,
    invert_affine,
    invert_perm,
    perm_transform,
    random_affine,
)
from .backend import backend_name, using_numba
from .bws import bws_decode
from .channel import (
    BlerRecord,
    ChannelPoint,
    DecompStats,
    count_correct_decompositions,
    count_ops,
    decomposition_stats,
    llr_from_symbols,
    prob_est,
    run_bler,
    transmit,
)
from .components import (
    DecodeResult,
    chase2,
    correlation_discrepancy,
    fht,
    fht_decode_order1,
    wagner_spc,
)
from .gbws import (
    DecompositionMask,
    decomposition_masks,
    error_probabilities,
    gbws_decode,
    score_decompositions,
)
from .pbws import PbwsConfig, pbws_decode, select_permutations
from .recursive import autrec_decode, recursive_decode
from .rm_core import (
    SYNDROME_CLEAN,
    SYNDROME_FAILURE,
    CodeParams,
    dimension,
    eh_syndrome_decode,
    encode,
    generator_matrix,
    is_codeword,
)
from .specs import (
    CodeMismatchError,
    DecoderSpec,
    ParseError,
    parse_decoder_spec,
    validate_decoder,
)
from .streams import Stream

__version__ = "0.1.0"
