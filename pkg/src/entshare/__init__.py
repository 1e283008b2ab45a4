"""Computable entanglement measures and monogamy checks for multi-qubit states."""

from .measures import (
    PartitionSpec,
    concurrence_pure_cut,
    concurrence_wootters,
    negativity,
    realignment_measure,
    schmidt_2xd,
)
from .states import DensityMatrix, StateVector, ghz, ghz_w_mixture, haar_random_pure, w

__version__ = "0.1.0"
