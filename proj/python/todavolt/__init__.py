"""Toda and Volterra lattices: flows, Poisson tensors, maps and Moser's explicit solution."""

from ._core import (
    ConfigError,
    DegeneracyError,
    DomainError,
    DomainExit,
    Error,
    InvarianceViolation,
    KindError,
    SingularityError,
    chop_square,
    eval_tensor,
    flaschka,
    gmap,
    integrate,
    jacobiator_max,
    oevel_residuals,
    recursion_operator,
    rhs,
    solve_toda_explicit,
    spectral_decompose,
    spectrum,
    stieltjes_invert,
    verify,
    volterra_to_toda,
)

__all__ = [name for name in dir() if not name.startswith("_")]
