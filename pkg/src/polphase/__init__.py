"""polphase: Pancharatnam-phase simulation and retrieval toolkit.

The package covers the full desk-scale chain: exact SU(2) polarization
algebra (su2), compilation into quarter/half-wave-plate arrays (plates), a
two-qubit Mach-Zehnder model with the drift-immune dual-polarization
split-beam scheme (interferometer), the rotating five-plate single-beam
method (polarimetry), and synthetic dual-half interferograms with two
independent fringe-shift estimators (fringes).
"""

from .su2 import (
    EPS_DEGENERATE,
    EPS_MAT,
    IDENTITY2,
    KET_H,
    KET_V,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    OrthogonalStates,
    YzyParams,
    ZyzParams,
    anticommutation_phase,
    apply,
    from_yzy,
    from_zyz,
    pancharatnam_phase,
    to_zyz,
    wrap_angle,
    yzy_to_zyz,
)
from .plates import (
    WavePlate,
    compose,
    decompose_qhq,
    format_plate_array,
    half_wave,
    jones,
    merge_qhh,
    parse_plate_array,
    polarimetric_array,
    polarimetric_target,
    quarter_wave,
    reduced_array_xi_minus_pi,
    reduced_array_zeta_2pi,
    simplify_qh,
    split_frame,
)
from .interferometer import (
    ZeroVisibility,
    arm_unitary,
    beam_splitter,
    mach_zehnder,
    mirror,
    output_intensity,
    phase_shifter,
    split_beam_shift,
    visibility_plates,
    visibility_yzy,
)
from .polarimetry import (
    DegenerateDenominator,
    InvalidExtrema,
    PolarimetricSweep,
    extract_cos2_phase,
    intensity_xi_minus_pi,
    measure_phase,
    polarimetric_intensity,
    polarimetric_sweep,
    scan_plate_array,
    sweep_extrema,
)
from .fringes import (
    AmbiguousPairing,
    Interferogram,
    NoCarrier,
    Region,
    RetrievalResult,
    TooFewMinima,
    column_average,
    default_regions,
    estimate_carrier,
    generate,
    load_interferogram,
    measure_visibility,
    retrieve_phase,
    savitzky_golay,
    save_interferogram,
    shift_by_fourier,
    shift_by_minima,
)

__version__ = "0.1.0"
