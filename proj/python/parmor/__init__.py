# Copyright (c) 2026 The parmor developers
# SPDX-License-Identifier: Apache-2.0
"""Structure-preserving parametric model order reduction.

Thin Python surface over the C++ core: build a parametric reduced-order
model ansatz, fit it to a full-order model with the bisection optimizer, and
evaluate worst-case / energy error metrics.
"""

from ._core import (
    AnsatzSpec,
    BisectionIteration,
    BisectionTrace,
    Box,
    HinfEstimate,
    ParametricRom,
    ParamSeparableLTI,
    ParmorError,
    RomTransferSource,
    SampleGrid,
    SamplePoint,
    SobmorOptions,
    TransferSource,
    default_omega_grid,
    ftv,
    h2_l2_estimate,
    hat,
    hat_ansatz,
    hinf_estimate,
    initial_grid,
    load_rom,
    log_omega_grid,
    loss,
    loss_gradient,
    msd_chain,
    random_theta,
    save_rom,
    sobmor,
    strict_tri_len,
    sutv,
    tri_len,
    uniform_axis,
    utv,
    vtf,
    vtsu,
    vtu,
)

__all__ = [
    "AnsatzSpec",
    "BisectionIteration",
    "BisectionTrace",
    "Box",
    "HinfEstimate",
    "ParametricRom",
    "ParamSeparableLTI",
    "ParmorError",
    "RomTransferSource",
    "SampleGrid",
    "SamplePoint",
    "SobmorOptions",
    "TransferSource",
    "default_omega_grid",
    "ftv",
    "h2_l2_estimate",
    "hat",
    "hat_ansatz",
    "hinf_estimate",
    "initial_grid",
    "load_rom",
    "log_omega_grid",
    "loss",
    "loss_gradient",
    "msd_chain",
    "random_theta",
    "save_rom",
    "sobmor",
    "strict_tri_len",
    "sutv",
    "tri_len",
    "uniform_axis",
    "utv",
    "vtf",
    "vtsu",
    "vtu",
]

__version__ = "0.1.0"
