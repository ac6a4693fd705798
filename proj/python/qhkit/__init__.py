"""Quasi-Herglotz function calculus: data triples, boundary recovery, half-plane
characterizations, rational classification, the unit-disk bridge, and moment
sum rules, backed by the C++ core."""

try:
    from ._qhkit import *  # noqa: F401,F403
    from ._qhkit import __version__  # noqa: F401
except ImportError:  # editable/test layout with the extension on sys.path
    from _qhkit import *  # noqa: F401,F403
    from _qhkit import __version__  # noqa: F401
