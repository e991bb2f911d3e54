"""Divergence Phase Index: Riesz-transform phase differences for signals and images."""

__version__ = "0.1.0"

from .errors import DegenerateInputError, ImageIOError, InvalidInputError
from .spectra import apply_multiplier, frequency_grid, hilbert_multiplier, riesz_multiplier
from .phase1d import (
    ChannelSet,
    Signal1D,
    bandpass,
    hilbert,
    instantaneous_phase,
    mean_phase_difference,
    pairwise_dpi_matrix,
    phase_difference,
)
from .riesznd import phase_vector, riesz_transform, steered_phase_difference, steered_riesz
from .dpi2d import (
    binarize,
    blockwise_dpi,
    dpi_norm_field,
    dpi_vector_field,
    elbow_threshold,
    mean_dpi,
    partition_blocks,
)
from .rotation import circular_mask, estimate_rotation, rotate_field, rotate_riesz_field
from .imaging import load_image, save_image, scale_intensity, synth_texture, to_grayscale
