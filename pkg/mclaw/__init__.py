"""
mclaw - scalar conservation laws on closed manifolds with moving metrics.

Finite-volume solver on periodic charts plus an audit harness for the
a-priori estimates (L-infinity and TV envelopes, L1 contraction,
comparison, Kruzkov entropy inequalities).
"""

__version__ = "0.1.0"
