"""FFT-based data reduction and activation scheduling for environmental sensors."""

from .activation import ActivationSchedule, build_schedule, derivative, detect_activations
from .errors import (
    FormatError,
    InsufficientDataError,
    ParameterError,
    RowError,
    SelectionError,
    SensorFFTError,
    VerificationError,
)
from .ingest import SampleRecord, UniformSeries, clean_sort, parse_records, resample_uniform
from .pipeline import PipelineConfig, PipelineResult, run
from .selection import (
    HarmonicSelection,
    Metrics,
    rank_harmonics,
    reconstruct,
    select_by_energy,
    selection_metrics,
    truncate_spectrum,
)
from .spectral import (
    AmplitudeSpectrum,
    Spectrum,
    amplitude_spectrum,
    forward_dft,
    inverse_dft,
    naive_dft,
)
from .synth import SynthConfig, generate

__version__ = "0.1.0"
