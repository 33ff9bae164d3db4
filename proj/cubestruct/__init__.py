"""Python surface of the cubestruct core.

The compiled module speaks JSON strings; this shim decodes them so callers
get plain dicts. Rationals stay exact as "a/b" strings.
"""

import json as _json

try:
    from ._cubestruct import *  # noqa: F401,F403  (installed layout)
    from . import _cubestruct as _core
except ImportError:  # build-tree layout: module next to the package
    from _cubestruct import *  # noqa: F401,F403
    import _cubestruct as _core

CubeProcess = _core.CubeProcess


def _wrap(name):
    fn = getattr(_core, name)

    def wrapped(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapped.__name__ = name
    return wrapped


type_of_tuple = _wrap("type_of_tuple")
separation = _wrap("separation")
mc_one_separated_rate = _wrap("mc_one_separated_rate")
analyze = _wrap("analyze")
extract_line_witness = _wrap("extract_line_witness")
find_line_in_set = _wrap("find_line_in_set")
max_linefree_density = _wrap("max_linefree_density")


def process_to_dict(proc):
    return _json.loads(proc.to_json())
