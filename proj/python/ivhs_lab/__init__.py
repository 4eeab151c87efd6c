"""Exact IVHS stratification laboratory on smooth plane curves.

Thin convenience layer over the pybind11 core: the heavy lifting (exact
linear algebra, Mittag-Leffler splittings, filtrations, certificates) is C++.
"""

import json as _json

try:
    from ._core import (  # installed wheel layout
        curve_info,
        lined_sextic_polynomial,
        run_scenario,
        search,
        selftest,
        survey,
        sym_mult_rank,
        version,
    )
except ImportError:  # build-tree layout: module directory on PYTHONPATH
    from _core import (
        curve_info,
        lined_sextic_polynomial,
        run_scenario,
        search,
        selftest,
        survey,
        sym_mult_rank,
        version,
    )

__version__ = version()


def curve_info_dict(field="Fp:101", curve="x^6 + y^6 + z^6"):
    """curve_info as a parsed dict."""
    return _json.loads(curve_info(field, curve))


def run_scenario_dict(toml_text):
    """run_scenario as (exit_code, parsed report dict)."""
    code, report = run_scenario(toml_text)
    return code, _json.loads(report)


__all__ = [
    "curve_info",
    "curve_info_dict",
    "lined_sextic_polynomial",
    "run_scenario",
    "run_scenario_dict",
    "search",
    "selftest",
    "survey",
    "sym_mult_rank",
    "version",
    "__version__",
]
