"""Simulator and verification suite for nonsignaling boxes.

The package builds up in layers: exact small-register quantum state
machinery (``quantum``), classical PR-boxes and the one-bit random
access code (``boxes``), the entanglement + PR-box construction of the
quantum random access code box with exact branch enumeration (``qrac``),
channel reconstruction and structure checks (``channel``), and a
two-party metered harness with a JSON-reporting CLI (``harness``,
``cli``).
"""
from ._version import __version__
from .boxes import PRBox, RacRound, rac_all_cases, rac_round, verify_rac_privacy
from .channel import (
    ChoiMatrix,
    Dilation,
    SubchannelSet,
    build_dilation,
    environment_orthogonality_check,
    mixture_check,
    subchannels,
    tomography,
    verify_nonsignaling,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    canonical_json,
    meter_assert,
    run_experiment,
    run_qrac_protocol,
    run_rac_protocol,
)
from .metering import (
    MeteredChannel,
    Message,
    ProtocolError,
    QRAC_BUDGET,
    QUBIT_ONLY_BUDGET,
    RACBOX_BUDGET,
    RoundTranscript,
    Tally,
)
from .qrac import (
    AliceClassicalOutput,
    ChannelBranch,
    DenseCodingPair,
    QracResources,
    channel_branches,
    dense_decode,
    dense_encode,
    qrac_alice,
    qrac_bob,
    qrac_round,
    qrac_round_qubit_only,
)
from .quantum import (
    BellOutcome,
    DensityMatrix,
    StateVector,
    UnitaryMatrix,
    apply_unitary,
    basis_state,
    bell_measure,
    bell_project,
    bell_state,
    density,
    fidelity,
    make_pure_qubit,
    measure_computational,
    partial_trace,
    pauli_correction,
    reduced_density,
    tensor,
    trace_distance,
)
from .rng import make_rng

__all__ = [
    "__version__",
    "AliceClassicalOutput",
    "BellOutcome",
    "ChannelBranch",
    "ChoiMatrix",
    "ConfigError",
    "DenseCodingPair",
    "DensityMatrix",
    "Dilation",
    "ExperimentConfig",
    "Message",
    "MeteredChannel",
    "PRBox",
    "ProtocolError",
    "QRAC_BUDGET",
    "QUBIT_ONLY_BUDGET",
    "QracResources",
    "RACBOX_BUDGET",
    "RacRound",
    "RoundTranscript",
    "StateVector",
    "SubchannelSet",
    "Tally",
    "UnitaryMatrix",
    "apply_unitary",
    "basis_state",
    "bell_measure",
    "bell_project",
    "bell_state",
    "build_dilation",
    "canonical_json",
    "channel_branches",
    "dense_decode",
    "dense_encode",
    "density",
    "environment_orthogonality_check",
    "fidelity",
    "make_pure_qubit",
    "make_rng",
    "measure_computational",
    "meter_assert",
    "mixture_check",
    "partial_trace",
    "pauli_correction",
    "qrac_alice",
    "qrac_bob",
    "qrac_round",
    "qrac_round_qubit_only",
    "rac_all_cases",
    "rac_round",
    "reduced_density",
    "run_experiment",
    "run_qrac_protocol",
    "run_rac_protocol",
    "subchannels",
    "tensor",
    "tomography",
    "trace_distance",
    "verify_nonsignaling",
    "verify_rac_privacy",
]
