"""Optimal-sample-complexity PAC learning by majority vote over recursive overlapping subsamples."""

from .kernels import BACKEND
from .learners import (
    ConceptClass,
    Ensemble,
    Interval,
    LabeledExample,
    NotRealizableError,
    Rectangle,
    TargetSpec,
    Threshold,
    erm_train,
    exact_error,
    exact_error_1d,
    majority_label,
    mc_error,
    predict,
    shattering_vcdim,
    train_erm,
    train_hanneke,
    train_simon,
)
from .subsample import (
    SubsampleFamily,
    build_subsamples,
    direct_member,
    enumerate_direct,
    split_working_set,
    subsample_count,
)

__version__ = "0.1.0"
