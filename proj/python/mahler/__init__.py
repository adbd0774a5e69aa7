"""Python access to the exact Mahler-system library.

Rationals go in and come out as strings such as "1/2"; results are plain
dicts and lists mirroring the CLI's JSON output.
"""

try:
    from ._mahler import *  # noqa: F401,F403
    from ._mahler import MahlerError, System
except ImportError:  # running from a source tree with the module built elsewhere
    from _mahler import *  # type: ignore  # noqa: F401,F403
    from _mahler import MahlerError, System  # type: ignore

__all__ = [
    "MahlerError",
    "System",
    "augment_with_unit",
    "certify_regular",
    "cocycle_at",
    "dim_profile",
    "guess_relations",
    "height_growth",
    "hilbert",
    "kernel_basis",
    "kron_lift",
    "kron_system",
    "lift",
    "load_system",
    "prove",
    "set_jobs",
    "solve_series",
    "system_from_json",
    "verify_value_relation",
]
