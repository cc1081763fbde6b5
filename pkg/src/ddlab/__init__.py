"""Desk-scale lab for doubly selective channels.

Builds channel matrices in the delay-time, frequency-time, frequency-Doppler,
and delay-Doppler domains, measures their sparsity, and compares SC/OFDM/OTFS
modulation under full and truncated MMSE equalization in each domain.
"""

from .channel import (
    CASE_TABLE,
    ChannelCaseConfig,
    Path,
    PathSet,
    build_H_dt,
    case_config,
    dirichlet,
    sample_paths,
)
from .domains import (
    convert_frame,
    fD_closed_form,
    impulse_pattern,
    to_dD_direct,
    to_dD_otfs,
    to_fD,
    to_ft,
)
from .equalize import (
    ChannelMode,
    DomainRecommendation,
    EqualizerSpec,
    RecommenderThresholds,
    SingularChannelError,
    equalize,
    mmse_solve,
    recommend_domain,
)
from .frames import DD, DD_DIRECT, DD_OTFS, DT, FD, FREQ, FT, TIME, DomainMatrix, SymbolFrame
from .harness import (
    BerRecord,
    Scenario,
    awgn,
    run_ber,
    run_sparsity,
    scenario_from_json,
    scenario_to_json,
)
from .modem import Constellation, Scheme, constellation, hard_demap, map_bits, modulate
from .sparsity import SparsityRecord, lpr, lpr_curve, spr, spr_curve, truncate_band, truncate_topk
from .spectral import (
    LayeredFactorization,
    TwiddleMatrix,
    kron_dft_rows,
    kron_idft_rows,
    layered_idft,
    otfs_precoder,
    unitary_dft,
)

__version__ = "0.1.0"
