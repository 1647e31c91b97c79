"""Multiple completed L-functions built from theta series."""

from ._core import (
    IntersectionError,
    MultiplicityError,
    PoleError,
    QuadratureError,
    builtin_thetas,
    eval_many,
    evaluate,
    lstar,
    poles,
    residue,
    suites,
    theta_info,
    verify,
)

__all__ = [
    "IntersectionError",
    "MultiplicityError",
    "PoleError",
    "QuadratureError",
    "builtin_thetas",
    "eval_many",
    "evaluate",
    "lstar",
    "poles",
    "residue",
    "suites",
    "theta_info",
    "verify",
]
