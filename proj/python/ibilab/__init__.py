"""DPSS signaling and inter-block interference laboratory."""

from ._core import (
    BerCurve,
    BerPoint,
    ChannelSpec,
    CrossCorrelation,
    Domain,
    DpssSet,
    FdSelection,
    FrameLayout,
    GuardKind,
    IbiReport,
    NumericalError,
    PathSpec,
    SignalingBasis,
    SimConfig,
    __version__,
    assemble_frame,
    awgn,
    bandlimited_shift,
    build_basis,
    channel_matrix,
    channel_preset,
    cross_correlation,
    delay_matrix,
    demodulate,
    doppler_matrix,
    exponential_profile,
    extract_block,
    generate_dpss,
    ibi_bound,
    ibi_energy_exact,
    lmmse_equalize,
    modulate,
    qpsk_demap,
    qpsk_map,
    run_ber,
    s2ibi_sweep,
    sinc,
    sinc_kernel_matrix,
    tail_energy,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
