"""Design and analysis models for a 422 nm <-> telecom C-band frequency-conversion interface."""
from .conversion import (
    BeamGeometry,
    ConversionModel,
    beam_overlap_fraction,
    efficiency_vs_power,
    fit_normalized_efficiency,
)
from .dispersion import DispersionModel, load_model, load_shipped_model, refractive_index
from .netlink import (
    LinkScenario,
    crossover_distance,
    fiber_transmission,
    improvement_orders,
    scenario_success,
    scenario_sweep,
)
from .phasematching import (
    CrystalSpec,
    Process,
    ProcessSpec,
    energy_match,
    phase_mismatch,
    phasematch_curve,
    phasematched_input_wavelength,
    qpm_period,
    tuning_slopes,
)
from .photonstats import (
    CountRecord,
    DetectionChain,
    PulseTrain,
    chain_loss,
    dead_time_correct,
    duty_cycle,
    external_efficiency,
    mean_input_photon_rate,
    mu1,
    noise_rescale,
    photons_per_pulse,
    snr,
)

__version__ = "0.1.0"
