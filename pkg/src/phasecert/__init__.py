"""Stability certification for multi-converter power networks.

The package evaluates decentralized small-gain / small-phase conditions on
converter and network admittance models, with loop-shaping coordinate
frames that recover sectoriality of grid-forming converters at low
frequency. See the README for the library tour and the CLI.
"""

from .converter import (
    ConverterAdmittance,
    GfmParameters,
    OperatingPoint,
    build_converter,
    build_inner_admittance,
    check_dc_structure,
    frame_embed,
    power_gain,
    synchronization_gain,
)
from .criteria import (
    CertificateReport,
    FrequencyVerdict,
    GroundTruthResult,
    certify,
    certify_centralized,
    gain_condition,
    ground_truth,
    phase_condition,
)
from .errors import PhaseCertError
from .lti import FrequencyGrid, StateSpaceModel, feedback, is_stable, parallel, series
from .network import (
    BranchData,
    BusData,
    NetworkAdmittance,
    NetworkData,
    assemble,
    branch_dq,
    kron_reduce,
    power_flow,
    to_global_frame,
)
from .phase import (
    GainExtrema,
    PhaseInterval,
    PhaseProfile,
    Sectoriality,
    classify,
    gain_extrema,
    matrix_phases,
    numerical_range_support,
    phase_profile,
)
from .scenario import AssembledScenario, Scenario, assemble_scenario, load_scenario
from .transforms import (
    FrameKind,
    TransformSet,
    blended_set,
    check_transformed_openloop,
    naive_blended_set,
    polar_matrices,
    power_polar_set,
    rectangular_set,
    transform_converter,
    transform_network_model,
    va_compensation,
)

__version__ = "0.1.0"
