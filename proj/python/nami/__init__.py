"""Faithful inversion of Bayesian-network structures.

Thin wrapper over the C++ core: build inverse structures for a generative
model's graph, certify them (I-map, minimality, naturalness, exact posterior
KL on discrete models), and generate masking matrices for autoregressive
parametrizations.
"""

try:
    from ._nami import *  # noqa: F401,F403  (installed package layout)
    from . import _nami as _impl
except ImportError:  # build-tree layout: extension next to the package
    from _nami import *  # noqa: F401,F403
    import _nami as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
