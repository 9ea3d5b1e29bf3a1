"""Sign-preservation games and calibration experiments (C++ core)."""

from ._sprcal import (
    DomainError,
    IncompatiblePairing,
    calib_run,
    constants_json,
    entropy_exponent,
    find_beta_epsilon,
    fit_exponent,
    opt_value,
    opt_value_bruteforce,
    play_game,
    spr_scaling_csv,
    tree_sample,
    verify,
)

__all__ = [
    "DomainError",
    "IncompatiblePairing",
    "calib_run",
    "constants_json",
    "entropy_exponent",
    "find_beta_epsilon",
    "fit_exponent",
    "opt_value",
    "opt_value_bruteforce",
    "play_game",
    "spr_scaling_csv",
    "tree_sample",
    "verify",
]
